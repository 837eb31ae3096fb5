//! Prime-field arithmetic and the quadratic extension F_{p^2} = F_p(i).
//!
//! Elements are arbitrary-precision residues kept canonical (in `[0, p)`)
//! after every operation, so serialization is bit-exact and tie-breaks are
//! deterministic. The extension is F_p[i]/(i^2 + 1); it carries pairing
//! values and exists for moduli with p = 3 (mod 4), where -1 is a
//! non-residue.
//!
//! None of this is constant-time. The crate is a simulation artifact and
//! timing side channels are out of scope.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus is not prime")]
    NotPrime,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("invalid hex encoding: {0:?}")]
    InvalidHex(String),
    #[error("value is not a canonical residue mod p")]
    OutOfRange,
}

#[derive(Debug, PartialEq, Eq)]
struct FieldRepr {
    modulus: BigUint,
    bit_length: u64,
}

/// A prime field F_p. Cheap to clone; all elements hold a handle to it.
///
/// Primality is checked once at construction (Miller-Rabin with a fixed
/// witness set). The p = 3 (mod 4) condition required by the pairing is
/// *not* enforced here: small fields of characteristic 2, 3 or p = 1 (mod 4)
/// are still legal for curve classification and enumeration.
#[derive(Debug, Clone)]
pub struct PrimeField(Arc<FieldRepr>);

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl Eq for PrimeField {}

impl PrimeField {
    pub fn new(modulus: BigUint) -> Result<Self, FieldError> {
        if !is_prime(&modulus) {
            return Err(FieldError::NotPrime);
        }
        let bit_length = modulus.bits();
        Ok(PrimeField(Arc::new(FieldRepr {
            modulus,
            bit_length,
        })))
    }

    pub fn from_u64(modulus: u64) -> Result<Self, FieldError> {
        Self::new(BigUint::from(modulus))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.0.modulus
    }

    pub fn bit_length(&self) -> u64 {
        self.0.bit_length
    }

    pub fn characteristic_is(&self, c: u64) -> bool {
        self.0.modulus == BigUint::from(c)
    }

    /// True when p = 3 (mod 4), the shape the pairing and deterministic
    /// square roots rely on.
    pub fn is_pairing_friendly_shape(&self) -> bool {
        self.0.modulus.clone() % 4u32 == BigUint::from(3u32)
    }

    /// Canonical element from any integer (reduced mod p).
    pub fn element(&self, value: impl Into<BigUint>) -> FieldElement {
        let value = value.into() % self.modulus();
        FieldElement {
            value,
            field: self.clone(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0u32)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1u32)
    }

    /// Parses the canonical lowercase big-endian hex encoding. Values at or
    /// above p are rejected rather than reduced, so corrupted transcripts
    /// cannot round-trip silently.
    pub fn element_from_hex(&self, hex: &str) -> Result<FieldElement, FieldError> {
        let value = parse_hex(hex)?;
        if value >= *self.modulus() {
            return Err(FieldError::OutOfRange);
        }
        Ok(FieldElement {
            value,
            field: self.clone(),
        })
    }

    /// Uniform element of [0, p) drawn from `rng`.
    pub fn random_element(&self, rng: &mut impl RngCore) -> FieldElement {
        self.element(sample_below(rng, self.modulus()))
    }

    /// Uniform element of [1, p) drawn from `rng`.
    pub fn random_nonzero(&self, rng: &mut impl RngCore) -> FieldElement {
        let bound = self.modulus() - 1u32;
        self.element(sample_below(rng, &bound) + 1u32)
    }
}

/// A residue mod p, always canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: BigUint,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn same_field(&self, other: &FieldElement) -> bool {
        self.field == other.field
    }

    fn ensure_same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    /// Checked addition for API boundaries where the operands' provenance is
    /// unknown. Internal code uses the operators, which assert.
    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure_same_field(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure_same_field(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.ensure_same_field(rhs)?;
        Ok(self * rhs)
    }

    /// Multiplicative inverse via Fermat: a^(p-2) mod p.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let exp = self.field.modulus() - 2u32;
        Ok(self.pow(&exp))
    }

    pub fn pow(&self, exp: &BigUint) -> FieldElement {
        FieldElement {
            value: self.value.modpow(exp, self.field.modulus()),
            field: self.field.clone(),
        }
    }

    /// Square root for p = 3 (mod 4): r = a^((p+1)/4) when a is a residue,
    /// with the smaller of {r, p-r} returned so hash-to-point is
    /// deterministic. `None` means non-residue, which is an ordinary outcome
    /// rather than an error.
    ///
    /// # Panics
    /// If the field does not have p = 3 (mod 4).
    pub fn sqrt(&self) -> Option<FieldElement> {
        assert!(
            self.field.is_pairing_friendly_shape(),
            "sqrt requires p = 3 (mod 4)"
        );
        if self.is_zero() {
            return Some(self.clone());
        }
        let exp = (self.field.modulus() + 1u32) >> 2;
        let root = self.pow(&exp);
        if &(&root * &root) != self {
            return None;
        }
        let other = -&root;
        Some(if root.value <= other.value {
            root
        } else {
            other
        })
    }

    /// Euler criterion; works for any odd p. Returns 0 for zero, 1 for a
    /// residue, -1 for a non-residue.
    pub fn legendre(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let exp = (self.field.modulus() - 1u32) >> 1;
        if self.pow(&exp).value.is_one() {
            1
        } else {
            -1
        }
    }

    /// Canonical encoding: big-endian lowercase hex, no leading zeros
    /// (except `"0"` itself). Every transcript format downstream uses this.
    pub fn to_hex(&self) -> String {
        format!("{:x}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

macro_rules! impl_field_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident, $p:ident| $body:expr) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.same_field(rhs), "field mismatch");
                let $p = self.field.modulus();
                let $a = &self.value;
                let $b = &rhs.value;
                FieldElement {
                    value: $body,
                    field: self.field.clone(),
                }
            }
        }
        impl std::ops::$trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                std::ops::$trait::$method(&self, rhs)
            }
        }
        impl std::ops::$trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                std::ops::$trait::$method(self, &rhs)
            }
        }
        impl std::ops::$trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

impl_field_binop!(Add, add, |a, b, p| (a + b) % p);
impl_field_binop!(Mul, mul, |a, b, p| (a * b) % p);
impl_field_binop!(Sub, sub, |a, b, p| {
    if a >= b {
        a - b
    } else {
        p - b + a
    }
});

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let value = if self.value.is_zero() {
            BigUint::zero()
        } else {
            self.field.modulus() - &self.value
        };
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Element of F_{p^2} = F_p(i), i^2 = -1, stored as `re + im*i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExtElement {
    pub re: FieldElement,
    pub im: FieldElement,
}

impl QuadExtElement {
    pub fn new(re: FieldElement, im: FieldElement) -> Self {
        assert!(re.same_field(&im), "field mismatch");
        QuadExtElement { re, im }
    }

    pub fn from_base(re: FieldElement) -> Self {
        let im = re.field().zero();
        QuadExtElement { re, im }
    }

    pub fn zero(field: &PrimeField) -> Self {
        QuadExtElement {
            re: field.zero(),
            im: field.zero(),
        }
    }

    pub fn one(field: &PrimeField) -> Self {
        QuadExtElement {
            re: field.one(),
            im: field.zero(),
        }
    }

    pub fn i(field: &PrimeField) -> Self {
        QuadExtElement {
            re: field.zero(),
            im: field.one(),
        }
    }

    pub fn field(&self) -> &PrimeField {
        self.re.field()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.value().is_one() && self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadExtElement {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// norm(a + bi) = a^2 + b^2, an element of the base field.
    pub fn norm(&self) -> FieldElement {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let n_inv = self.norm().inv()?;
        let conj = self.conjugate();
        Ok(QuadExtElement {
            re: &conj.re * &n_inv,
            im: &conj.im * &n_inv,
        })
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, exp: &BigUint) -> Self {
        let field = self.field().clone();
        let mut result = QuadExtElement::one(&field);
        if exp.is_zero() {
            return result;
        }
        let mut base = self.clone();
        let bits = exp.bits();
        for idx in 0..bits {
            if exp.bit(idx) {
                result = &result * &base;
            }
            if idx + 1 < bits {
                base = &base * &base;
            }
        }
        result
    }

    /// Encoding used for pairing values: `<hex-re>+<hex-im>i`.
    pub fn to_hex(&self) -> String {
        format!("{}+{}i", self.re.to_hex(), self.im.to_hex())
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

impl std::ops::Add<&QuadExtElement> for &QuadExtElement {
    type Output = QuadExtElement;
    fn add(self, rhs: &QuadExtElement) -> QuadExtElement {
        QuadExtElement {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl std::ops::Sub<&QuadExtElement> for &QuadExtElement {
    type Output = QuadExtElement;
    fn sub(self, rhs: &QuadExtElement) -> QuadExtElement {
        QuadExtElement {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl std::ops::Mul<&QuadExtElement> for &QuadExtElement {
    type Output = QuadExtElement;
    fn mul(self, rhs: &QuadExtElement) -> QuadExtElement {
        // (a + bi)(c + di) = (ac - bd) + (ad + bc)i
        let ac = &self.re * &rhs.re;
        let bd = &self.im * &rhs.im;
        let ad = &self.re * &rhs.im;
        let bc = &self.im * &rhs.re;
        QuadExtElement {
            re: &ac - &bd,
            im: &ad + &bc,
        }
    }
}

impl std::ops::Neg for &QuadExtElement {
    type Output = QuadExtElement;
    fn neg(self) -> QuadExtElement {
        QuadExtElement {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

fn parse_hex(hex: &str) -> Result<BigUint, FieldError> {
    if hex.is_empty() || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(FieldError::InvalidHex(hex.to_string()));
    }
    BigUint::parse_bytes(hex.as_bytes(), 16).ok_or_else(|| FieldError::InvalidHex(hex.to_string()))
}

/// Plain big-endian hex for scalars that do not live in a registered field
/// (transcript seeds, subgroup orders and the like).
pub fn biguint_to_hex(value: &BigUint) -> String {
    format!("{:x}", value)
}

pub fn biguint_from_hex(hex: &str) -> Result<BigUint, FieldError> {
    parse_hex(hex)
}

/// Uniform integer in [0, bound) by rejection sampling on the minimal byte
/// width. The draw order is part of the simulator's determinism contract, so
/// the procedure is fixed here rather than delegated to `rand`'s uniform
/// distributions.
pub fn sample_below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty sampling range");
    if bound.is_one() {
        return BigUint::zero();
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess_bits = (bytes as u64) * 8 - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= 0xff >> excess_bits;
        let candidate = BigUint::from_bytes_be(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Miller-Rabin with the first twelve primes as witnesses. Deterministic for
/// every modulus below 3.3 * 10^24, which covers all desk-scale parameters;
/// beyond that it is a standard high-confidence probabilistic check.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &sp in &SMALL_PRIMES {
        let sp = BigUint::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    // n - 1 = 2^s * d with d odd
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
