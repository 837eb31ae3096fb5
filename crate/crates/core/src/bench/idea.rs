//! IDEA, the 8.5-round block cipher over 16-bit words: multiplication mod
//! 2^16 + 1 (with 0 standing for 2^16), addition mod 2^16 and XOR. Baseline
//! cipher for the benchmark harness.

pub type IdeaKey = [u8; 16];

const ROUNDS: usize = 8;
const SUBKEYS: usize = 6 * ROUNDS + 4;

/// Multiplication in GF(2^16 + 1) with the zero-means-65536 convention.
fn mul(a: u16, b: u16) -> u16 {
    let a = if a == 0 { 0x1_0000u32 } else { a as u32 };
    let b = if b == 0 { 0x1_0000u32 } else { b as u32 };
    let product = (a as u64 * b as u64) % 0x1_0001;
    if product == 0x1_0000 {
        0
    } else {
        product as u16
    }
}

/// Multiplicative inverse mod 2^16 + 1 under the same convention.
fn mul_inv(a: u16) -> u16 {
    // x^(65537 - 2) by square-and-multiply; 0 (= 65536 = -1) is self-inverse
    let mut result = 1u64;
    let mut base = if a == 0 { 0x1_0000u64 } else { a as u64 };
    let mut exp = 0x1_0001u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % 0x1_0001;
        }
        base = base * base % 0x1_0001;
        exp >>= 1;
    }
    if result == 0x1_0000 {
        0
    } else {
        result as u16
    }
}

fn add_inv(a: u16) -> u16 {
    a.wrapping_neg()
}

/// 52 encryption subkeys: the key register is read out eight words at a
/// time, rotating left by 25 bits between readouts.
fn expand_key(key: &IdeaKey) -> [u16; SUBKEYS] {
    let mut register = u128::from_be_bytes(*key);
    let mut subkeys = [0u16; SUBKEYS];
    let mut produced = 0;
    while produced < SUBKEYS {
        for word in 0..8 {
            if produced == SUBKEYS {
                break;
            }
            subkeys[produced] = (register >> (112 - 16 * word)) as u16;
            produced += 1;
        }
        register = register.rotate_left(25);
    }
    subkeys
}

/// Decryption subkeys: inverted output transform first, then each round's
/// multiplicative keys inverted and the middle additive pair swapped.
fn invert_key(ek: &[u16; SUBKEYS]) -> [u16; SUBKEYS] {
    let mut dk = [0u16; SUBKEYS];
    dk[0] = mul_inv(ek[48]);
    dk[1] = add_inv(ek[49]);
    dk[2] = add_inv(ek[50]);
    dk[3] = mul_inv(ek[51]);
    dk[4] = ek[46];
    dk[5] = ek[47];
    for round in 1..ROUNDS {
        let base = 6 * round;
        let source = 6 * (ROUNDS - round);
        dk[base] = mul_inv(ek[source]);
        dk[base + 1] = add_inv(ek[source + 2]);
        dk[base + 2] = add_inv(ek[source + 1]);
        dk[base + 3] = mul_inv(ek[source + 3]);
        dk[base + 4] = ek[source - 2];
        dk[base + 5] = ek[source - 1];
    }
    dk[48] = mul_inv(ek[0]);
    dk[49] = add_inv(ek[1]);
    dk[50] = add_inv(ek[2]);
    dk[51] = mul_inv(ek[3]);
    dk
}

fn crypt(block: u64, keys: &[u16; SUBKEYS]) -> u64 {
    let mut x1 = (block >> 48) as u16;
    let mut x2 = (block >> 32) as u16;
    let mut x3 = (block >> 16) as u16;
    let mut x4 = block as u16;
    let mut k = keys.iter();
    let mut next = || *k.next().expect("52 subkeys");
    for _ in 0..ROUNDS {
        x1 = mul(x1, next());
        x2 = x2.wrapping_add(next());
        x3 = x3.wrapping_add(next());
        x4 = mul(x4, next());
        let saved3 = x3;
        x3 = mul(x3 ^ x1, next());
        let saved2 = x2;
        x2 = mul((x2 ^ x4).wrapping_add(x3), next());
        x3 = x3.wrapping_add(x2);
        x1 ^= x2;
        x4 ^= x3;
        x2 ^= saved3;
        x3 ^= saved2;
    }
    // output transform; x2/x3 are exchanged by the final round above
    let y1 = mul(x1, next());
    let y2 = x3.wrapping_add(next());
    let y3 = x2.wrapping_add(next());
    let y4 = mul(x4, next());
    ((y1 as u64) << 48) | ((y2 as u64) << 32) | ((y3 as u64) << 16) | y4 as u64
}

/// An IDEA instance with both key schedules expanded.
pub struct Idea {
    encrypt_keys: [u16; SUBKEYS],
    decrypt_keys: [u16; SUBKEYS],
}

impl Idea {
    pub fn new(key: &IdeaKey) -> Self {
        let encrypt_keys = expand_key(key);
        let decrypt_keys = invert_key(&encrypt_keys);
        Idea {
            encrypt_keys,
            decrypt_keys,
        }
    }

    pub fn encrypt_block(&self, block: u64) -> u64 {
        crypt(block, &self.encrypt_keys)
    }

    pub fn decrypt_block(&self, block: u64) -> u64 {
        crypt(block, &self.decrypt_keys)
    }
}
