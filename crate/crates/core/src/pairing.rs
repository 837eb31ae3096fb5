//! Symmetric bilinear pairing on the supersingular curve y^2 = x^3 + x.
//!
//! For p = 3 (mod 4) the curve has exactly p + 1 points and embedding
//! degree 2. The map here is the modified Tate pairing
//! e(P, Q) = f_{q,P}(phi(Q))^((p^2-1)/q), where phi(x, y) = (-x, iy) is the
//! distortion endomorphism into E(F_{p^2}) and f_{q,P} is evaluated by
//! Miller's algorithm in its textbook double-and-add form, line and
//! vertical denominators retained.
//!
//! Parameters follow the shape p + 1 = 12 q r with q prime: the order-q
//! subgroup is where all protocol points live, and the cofactor h = 12 r
//! clears arbitrary points into it.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint, WeierstrassCurve};
use crate::field::{sample_below, FieldElement, FieldError, PrimeField, QuadExtElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("parameter search exhausted its iteration budget")]
    SearchExhausted,
    #[error("point is not in the order-q subgroup")]
    PointNotInSubgroup,
    #[error("pairing requires an odd subgroup order")]
    UnsupportedSubgroupOrder,
    #[error("hash-to-point exhausted its counter budget")]
    HashToPointExhausted,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// System parameters: the field, the fixed curve y^2 = x^3 + x, the prime
/// subgroup order q with p + 1 = 12 q r, and a generator of exact order q.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingParams {
    field: PrimeField,
    scalar_field: PrimeField,
    curve: WeierstrassCurve,
    subgroup_order: BigUint,
    aux_factor: BigUint,
    cofactor: BigUint,
    generator: CurvePoint,
}

impl PairingParams {
    /// Builds and validates params from an explicit (p, q, r) triple.
    pub fn from_parts(
        p: impl Into<BigUint>,
        q: impl Into<BigUint>,
        r: impl Into<BigUint>,
    ) -> Result<Self, PairingError> {
        let (p, q, r) = (p.into(), q.into(), r.into());
        let field = PrimeField::new(p.clone())
            .map_err(|_| PairingError::InvalidParams("p must be prime".into()))?;
        if !field.is_pairing_friendly_shape() {
            return Err(PairingError::InvalidParams("p must be 3 (mod 4)".into()));
        }
        if !crate::field::is_prime(&q) {
            return Err(PairingError::InvalidParams("q must be prime".into()));
        }
        if &p + 1u32 != BigUint::from(12u32) * &q * &r {
            return Err(PairingError::InvalidParams("p + 1 != 12*q*r".into()));
        }
        let curve = WeierstrassCurve::short(&field, 1u32, 0u32);
        let cofactor = BigUint::from(12u32) * &r;
        let scalar_field = PrimeField::new(q.clone()).expect("q checked prime above");
        let mut params = PairingParams {
            field,
            scalar_field,
            curve,
            subgroup_order: q,
            aux_factor: r,
            cofactor,
            generator: CurvePoint::Infinity,
        };
        params.generator = params.hash_to_subgroup(b"generator")?;
        Ok(params)
    }

    /// Deterministic parameter search: under a fixed seed, draws candidate
    /// subgroup orders q of about k/2 bits and cofactor seeds r until
    /// p = 12 q r - 1 is a k-bit prime. Every such p is automatically
    /// 3 (mod 4). The first hit in draw order is returned.
    pub fn generate(k_bits: u64, seed: u64) -> Result<Self, PairingError> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self::generate_with_rng(k_bits, &mut rng)
    }

    pub fn generate_with_rng(k_bits: u64, rng: &mut impl RngCore) -> Result<Self, PairingError> {
        if k_bits < 8 {
            return Err(PairingError::InvalidParams(
                "target bit length must be at least 8".into(),
            ));
        }
        const BUDGET: u32 = 200_000;
        let q_bits = (k_bits / 2).max(3);
        for _ in 0..BUDGET {
            let q = draw_with_bit_length(rng, q_bits);
            if q < BigUint::from(5u32) || !crate::field::is_prime(&q) {
                continue;
            }
            let r_bits = k_bits.saturating_sub(q_bits + 4);
            let r = if r_bits == 0 {
                BigUint::one()
            } else {
                draw_with_bit_length(rng, r_bits)
            };
            let p = BigUint::from(12u32) * &q * &r - 1u32;
            if p.bits() != k_bits || !crate::field::is_prime(&p) {
                continue;
            }
            return Self::from_parts(p, q, r);
        }
        Err(PairingError::SearchExhausted)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Z_q, the field the protocol's scalars (keys, blinding factors,
    /// Lagrange coefficients) live in.
    pub fn scalar_field(&self) -> &PrimeField {
        &self.scalar_field
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// The prime subgroup order q.
    pub fn subgroup_order(&self) -> &BigUint {
        &self.subgroup_order
    }

    /// The auxiliary factor r in p + 1 = 12 q r.
    pub fn aux_factor(&self) -> &BigUint {
        &self.aux_factor
    }

    /// h = (p + 1) / q = 12 r.
    pub fn cofactor(&self) -> &BigUint {
        &self.cofactor
    }

    pub fn generator(&self) -> &CurvePoint {
        &self.generator
    }

    /// Multiplies the generator; the workhorse for key material.
    pub fn mul_generator(&self, scalar: &BigUint) -> CurvePoint {
        self.curve
            .scalar_mul(scalar, &self.generator)
            .expect("generator is on the curve")
    }

    /// scalar * point with a Z_q scalar.
    pub fn mul_point(
        &self,
        scalar: &FieldElement,
        point: &CurvePoint,
    ) -> Result<CurvePoint, PairingError> {
        Ok(self.curve.scalar_mul(scalar.value(), point)?)
    }

    pub fn is_in_subgroup(&self, point: &CurvePoint) -> bool {
        self.curve.is_on_curve(point)
            && self
                .curve
                .scalar_mul(&self.subgroup_order, point)
                .map(|p| p.is_infinity())
                .unwrap_or(false)
    }

    fn ensure_in_subgroup(&self, point: &CurvePoint) -> Result<(), PairingError> {
        if self.is_in_subgroup(point) {
            Ok(())
        } else {
            Err(PairingError::PointNotInSubgroup)
        }
    }

    /// Try-and-increment hash onto the order-q subgroup: SHA-256 of
    /// `message || counter` gives an x-candidate; when x^3 + x is a square
    /// the deterministic root fixes a curve point, which the cofactor then
    /// clears into the subgroup. Retries (up to 256 counters) on non-residue
    /// x or when clearing collapses to O. The output is never O.
    pub fn hash_to_subgroup(&self, message: &[u8]) -> Result<CurvePoint, PairingError> {
        for counter in 0u32..=255 {
            let mut hasher = Sha256::new();
            hasher.update(message);
            hasher.update([counter as u8]);
            let digest = hasher.finalize();
            let x = self.field.element(BigUint::from_bytes_be(&digest));
            let rhs = &(&(&x * &x) * &x) + &x;
            let Some(y) = rhs.sqrt() else {
                continue;
            };
            let point = CurvePoint::affine(x, y);
            let cleared = self
                .curve
                .scalar_mul(&self.cofactor, &point)
                .expect("hash candidate is on the curve");
            if !cleared.is_infinity() {
                debug_assert!(self.is_in_subgroup(&cleared));
                return Ok(cleared);
            }
        }
        Err(PairingError::HashToPointExhausted)
    }

    /// The modified Tate pairing e(P, Q), symmetric and bilinear on the
    /// order-q subgroup, with e(O, .) = e(., O) = 1.
    pub fn tate_pairing(&self, p: &CurvePoint, q: &CurvePoint) -> Result<GtElement, PairingError> {
        if self.subgroup_order.is_even() {
            return Err(PairingError::UnsupportedSubgroupOrder);
        }
        self.ensure_in_subgroup(p)?;
        self.ensure_in_subgroup(q)?;
        if p.is_infinity() || q.is_infinity() {
            return Ok(GtElement {
                value: QuadExtElement::one(&self.field),
            });
        }
        let twisted = distortion_map(q);
        let raw = self.miller_loop(p, &twisted);
        // final exponentiation: (p^2 - 1) / q
        let p_int = self.field.modulus();
        let exp = (p_int * p_int - 1u32) / &self.subgroup_order;
        let value = raw.pow(&exp);
        debug_assert!(
            value.pow(&self.subgroup_order).is_one(),
            "pairing value must land in the order-q subgroup of GT"
        );
        Ok(GtElement { value })
    }

    /// f_{q,P} evaluated at S by double-and-add over the bits of q.
    fn miller_loop(&self, p: &CurvePoint, s: &ExtPoint) -> QuadExtElement {
        let mut f = QuadExtElement::one(&self.field);
        let mut t = p.clone();
        let q = &self.subgroup_order;
        for idx in (0..q.bits() - 1).rev() {
            let doubled = self
                .curve
                .point_add(&t, &t)
                .expect("intermediate points stay on the curve");
            f = &(&f * &f) * &self.line_at(&t, &t, s);
            f = &f
                * &self
                    .vertical_at(&doubled, s)
                    .inv()
                    .expect("vertical cannot vanish at a distorted subgroup point");
            t = doubled;
            if q.bit(idx) {
                let summed = self
                    .curve
                    .point_add(&t, p)
                    .expect("intermediate points stay on the curve");
                f = &f * &self.line_at(&t, p, s);
                f = &f
                    * &self
                        .vertical_at(&summed, s)
                        .inv()
                        .expect("vertical cannot vanish at a distorted subgroup point");
                t = summed;
            }
        }
        f
    }

    /// The line through a and b (tangent when a = b, vertical when
    /// b = -a or either is O), evaluated at the extension point s.
    fn line_at(&self, a: &CurvePoint, b: &CurvePoint, s: &ExtPoint) -> QuadExtElement {
        let ExtPoint::Affine { x: xs, y: ys } = s else {
            unreachable!("evaluation point is always affine");
        };
        let (xa, ya) = match (a, b) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => {
                return QuadExtElement::one(&self.field)
            }
            (CurvePoint::Infinity, CurvePoint::Affine { x, .. })
            | (CurvePoint::Affine { x, .. }, CurvePoint::Infinity) => {
                return xs - &QuadExtElement::from_base(x.clone());
            }
            (CurvePoint::Affine { x, y }, _) => (x, y),
        };
        let CurvePoint::Affine { x: xb, y: yb } = b else {
            unreachable!("handled above");
        };
        if xa == xb && *ya == -yb {
            return xs - &QuadExtElement::from_base(xa.clone());
        }
        let slope = if a == b {
            let numerator = &(&self.field.element(3u32) * &(xa * xa)) + self.curve.a4();
            &numerator * &(&self.field.element(2u32) * ya).inv().expect("ya != 0")
        } else {
            &(yb - ya) * &(xb - xa).inv().expect("xa != xb")
        };
        let dx = xs - &QuadExtElement::from_base(xa.clone());
        let dy = ys - &QuadExtElement::from_base(ya.clone());
        &dy - &(&QuadExtElement::from_base(slope) * &dx)
    }

    /// The vertical line through c evaluated at s; 1 when c = O.
    fn vertical_at(&self, c: &CurvePoint, s: &ExtPoint) -> QuadExtElement {
        let ExtPoint::Affine { x: xs, .. } = s else {
            unreachable!("evaluation point is always affine");
        };
        match c {
            CurvePoint::Infinity => QuadExtElement::one(&self.field),
            CurvePoint::Affine { x, .. } => xs - &QuadExtElement::from_base(x.clone()),
        }
    }
}

/// A point of E(F_{p^2}), produced by the distortion map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtPoint {
    Infinity,
    Affine {
        x: QuadExtElement,
        y: QuadExtElement,
    },
}

impl ExtPoint {
    /// Membership in y^2 = x^3 + x over F_{p^2}.
    pub fn is_on_curve(&self) -> bool {
        match self {
            ExtPoint::Infinity => true,
            ExtPoint::Affine { x, y } => {
                let rhs = &(&(x * x) * x) + x;
                &(y * y) - &rhs == QuadExtElement::zero(x.field())
            }
        }
    }
}

/// The distortion endomorphism phi(x, y) = (-x, iy). It maps E(F_p) into
/// E(F_{p^2}) and off the base-field subgroup, which is what makes the
/// symmetric pairing non-degenerate: (-x)^3 + (-x) = -(x^3 + x) = (iy)^2.
pub fn distortion_map(point: &CurvePoint) -> ExtPoint {
    match point {
        CurvePoint::Infinity => ExtPoint::Infinity,
        CurvePoint::Affine { x, y } => {
            let field = x.field().clone();
            ExtPoint::Affine {
                x: QuadExtElement::new(-x, field.zero()),
                y: QuadExtElement::new(field.zero(), y.clone()),
            }
        }
    }
}

/// An element of G_T: a q-th root of unity in F_{p^2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtElement {
    value: QuadExtElement,
}

impl GtElement {
    pub fn value(&self) -> &QuadExtElement {
        &self.value
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn pow(&self, exp: &BigUint) -> GtElement {
        GtElement {
            value: self.value.pow(exp),
        }
    }

    /// Wire encoding `<hex-re>+<hex-im>i`, shared with transcripts.
    pub fn encode(&self) -> String {
        self.value.to_hex()
    }
}

impl std::ops::Mul<&GtElement> for &GtElement {
    type Output = GtElement;
    fn mul(self, rhs: &GtElement) -> GtElement {
        GtElement {
            value: &self.value * &rhs.value,
        }
    }
}

impl std::fmt::Display for GtElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// Uniform integer with exactly `bits` bits (top bit forced).
fn draw_with_bit_length(rng: &mut impl RngCore, bits: u64) -> BigUint {
    if bits == 0 {
        return BigUint::zero();
    }
    let top = BigUint::one() << (bits - 1);
    sample_below(rng, &top) + &top
}
