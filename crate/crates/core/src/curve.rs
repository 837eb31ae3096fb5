//! General Weierstrass curves over prime fields: the b-quantities and
//! discriminant, singular-point detection, per-characteristic normal forms,
//! and the chord-tangent group law on short-form curves.
//!
//! The group law is implemented for short Weierstrass curves over fields of
//! characteristic other than 2 and 3; a general-form curve is normalized
//! first and points are mapped through the admissible change of variables.
//! `enumerate_points` is a deliberately plain exhaustive oracle for small
//! fields, kept independent of the group-law code paths it is used to check.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, PrimeField};

/// Fields larger than this are refused by the exhaustive oracles.
const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve is singular (discriminant is zero)")]
    SingularCurve,
    #[error("point does not satisfy the curve equation")]
    PointNotOnCurve,
    #[error("field too large for exhaustive enumeration")]
    FieldTooLarge,
    #[error("group law requires characteristic != 2, 3")]
    UnsupportedCharacteristic,
    #[error("coefficients belong to different fields")]
    MixedFields,
    #[error("invalid encoding: {0:?}")]
    InvalidEncoding(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A curve y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a1: FieldElement,
    a2: FieldElement,
    a3: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
}

/// The classical derived quantities of a Weierstrass equation.
///
/// `j` is present only for non-singular curves. Construction checks the
/// consistency identity 4*b8 = b2*b6 - b4^2, which catches transcription
/// errors in the defining formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveQuantities {
    pub b2: FieldElement,
    pub b4: FieldElement,
    pub b6: FieldElement,
    pub b8: FieldElement,
    pub c4: FieldElement,
    pub delta: FieldElement,
    pub j: Option<FieldElement>,
}

/// A point of E(K): affine coordinates or the point at infinity O.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// Wire encoding: `O` for infinity, `(<hex-x>,<hex-y>)` otherwise.
    pub fn encode(&self) -> String {
        match self {
            CurvePoint::Infinity => "O".to_string(),
            CurvePoint::Affine { x, y } => format!("({},{})", x.to_hex(), y.to_hex()),
        }
    }

    pub fn decode(text: &str, field: &PrimeField) -> Result<Self, CurveError> {
        if text == "O" {
            return Ok(CurvePoint::Infinity);
        }
        let bad = || CurveError::InvalidEncoding(text.to_string());
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (x, y) = inner.split_once(',').ok_or_else(bad)?;
        Ok(CurvePoint::Affine {
            x: field.element_from_hex(x)?,
            y: field.element_from_hex(y)?,
        })
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// Tags of the per-characteristic reduced equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalFormTag {
    /// char(K) != 2, 3: y^2 = x^3 + a4 x + a6.
    CharGeneral,
    /// char(K) = 2, j != 0: y^2 + xy = x^3 + a2 x^2 + a6.
    Char2JNonzero,
    /// char(K) = 2, j = 0: y^2 + a3 y = x^3 + a4 x + a6.
    Char2JZero,
    /// char(K) = 3: y^2 = x^3 + x^2 + a6.
    Char3,
}

/// Result of normal-form classification. For `CharGeneral` the curve holds
/// the short-form coefficients and `map` carries the change of variables;
/// the characteristic-2/3 cases are classification tags over the original
/// coefficients.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub tag: NormalFormTag,
    pub curve: WeierstrassCurve,
    pub map: Option<ShortFormMap>,
}

/// The admissible change of variables (u = 1) taking a general curve to
/// short form in characteristic != 2, 3:
/// (x, y) -> (x + b2/12, y + (a1/2) x + a3/2).
#[derive(Debug, Clone)]
pub struct ShortFormMap {
    x_shift: FieldElement,
    y_slope: FieldElement,
    y_shift: FieldElement,
}

impl ShortFormMap {
    pub fn forward(&self, point: &CurvePoint) -> CurvePoint {
        match point {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x + &self.x_shift,
                y: &(y + &(&self.y_slope * x)) + &self.y_shift,
            },
        }
    }

    pub fn inverse(&self, point: &CurvePoint) -> CurvePoint {
        match point {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let orig_x = x - &self.x_shift;
                let orig_y = &(y - &(&self.y_slope * &orig_x)) - &self.y_shift;
                CurvePoint::Affine {
                    x: orig_x,
                    y: orig_y,
                }
            }
        }
    }
}

impl WeierstrassCurve {
    pub fn new(
        a1: FieldElement,
        a2: FieldElement,
        a3: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    ) -> Result<Self, CurveError> {
        let all_same = [&a2, &a3, &a4, &a6].iter().all(|c| c.same_field(&a1));
        if !all_same {
            return Err(CurveError::MixedFields);
        }
        Ok(WeierstrassCurve { a1, a2, a3, a4, a6 })
    }

    /// Short form y^2 = x^3 + a4 x + a6.
    pub fn short(field: &PrimeField, a4: impl Into<BigUint>, a6: impl Into<BigUint>) -> Self {
        WeierstrassCurve {
            a1: field.zero(),
            a2: field.zero(),
            a3: field.zero(),
            a4: field.element(a4),
            a6: field.element(a6),
        }
    }

    pub fn from_u64(field: &PrimeField, coeffs: [u64; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = coeffs;
        WeierstrassCurve {
            a1: field.element(a1),
            a2: field.element(a2),
            a3: field.element(a3),
            a4: field.element(a4),
            a6: field.element(a6),
        }
    }

    pub fn field(&self) -> &PrimeField {
        self.a1.field()
    }

    pub fn coefficients(&self) -> [&FieldElement; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn a4(&self) -> &FieldElement {
        &self.a4
    }

    pub fn a6(&self) -> &FieldElement {
        &self.a6
    }

    pub fn is_short_form(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    /// Encoding: comma-separated hex a1,a2,a3,a4,a6 followed by hex p.
    pub fn encode(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.a1.to_hex(),
            self.a2.to_hex(),
            self.a3.to_hex(),
            self.a4.to_hex(),
            self.a6.to_hex(),
            crate::field::biguint_to_hex(self.field().modulus()),
        )
    }

    pub fn decode(text: &str) -> Result<Self, CurveError> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 6 {
            return Err(CurveError::InvalidEncoding(text.to_string()));
        }
        let p = crate::field::biguint_from_hex(parts[5])?;
        let field = PrimeField::new(p)?;
        Ok(WeierstrassCurve {
            a1: field.element_from_hex(parts[0])?,
            a2: field.element_from_hex(parts[1])?,
            a3: field.element_from_hex(parts[2])?,
            a4: field.element_from_hex(parts[3])?,
            a6: field.element_from_hex(parts[4])?,
        })
    }

    /// E(x, y) = y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6.
    fn equation_at(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let x2 = x * x;
        let lhs = &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
        let rhs = &(&(&(&x2 * x) + &(&self.a2 * &x2)) + &(&self.a4 * x)) + &self.a6;
        &lhs - &rhs
    }

    pub fn is_on_curve(&self, point: &CurvePoint) -> bool {
        match point {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.equation_at(x, y).is_zero(),
        }
    }

    /// b2, b4, b6, b8, c4, the discriminant and (when non-singular) j.
    pub fn quantities(&self) -> CurveQuantities {
        let field = self.field();
        let [a1, a2, a3, a4, a6] = self.coefficients();
        let four = field.element(4u32);
        let b2 = &(a1 * a1) + &(&four * a2);
        let b4 = &(&field.element(2u32) * a4) + &(a1 * a3);
        let b6 = &(a3 * a3) + &(&four * a6);
        let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&four * a2) * a6)) - &(&(a1 * a3) * a4))
            + &(&(a2 * a3) * a3))
            - &(a4 * a4);
        let c4 = &(&b2 * &b2) - &(&field.element(24u32) * &b4);
        // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
        let delta = &(&(-&(&(&b2 * &b2) * &b8) - &(&field.element(8u32) * &(&(&b4 * &b4) * &b4)))
            - &(&field.element(27u32) * &(&b6 * &b6)))
            + &(&(&field.element(9u32) * &(&b2 * &b4)) * &b6);
        debug_assert_eq!(
            &four * &b8,
            &(&b2 * &b6) - &(&b4 * &b4),
            "b-quantity consistency identity violated"
        );
        let j = if delta.is_zero() {
            None
        } else {
            let c4_cubed = &(&c4 * &c4) * &c4;
            Some(&c4_cubed * &delta.inv().expect("delta nonzero"))
        };
        CurveQuantities {
            b2,
            b4,
            b6,
            b8,
            c4,
            delta,
            j,
        }
    }

    pub fn discriminant(&self) -> FieldElement {
        self.quantities().delta
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    pub fn j_invariant(&self) -> Result<FieldElement, CurveError> {
        self.quantities().j.ok_or(CurveError::SingularCurve)
    }

    /// True iff (x, y) lies on the curve and both partial derivatives
    /// vanish there.
    pub fn is_singular_point(&self, x: &FieldElement, y: &FieldElement) -> bool {
        if !self.equation_at(x, y).is_zero() {
            return false;
        }
        // dE/dX = a1 y - 3x^2 - 2 a2 x - a4
        let three_x2 = &self.field().element(3u32) * &(x * x);
        let dx = &(&(&(&self.a1 * y) - &three_x2)
            - &(&self.field().element(2u32) * &(&self.a2 * x)))
            - &self.a4;
        // dE/dY = 2y + a1 x + a3
        let dy = &(&(&self.field().element(2u32) * y) + &(&self.a1 * x)) + &self.a3;
        dx.is_zero() && dy.is_zero()
    }

    /// Exhaustive scan for a singular point; the independent oracle for the
    /// discriminant test. Small fields only.
    pub fn find_singular_point(&self) -> Result<Option<(FieldElement, FieldElement)>, CurveError> {
        let field = self.field();
        let p = small_modulus(field)?;
        for x in 0..p {
            let x = field.element(x);
            for y in 0..p {
                let y = field.element(y);
                if self.is_singular_point(&x, &y) {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    /// Classifies the curve into its per-characteristic normal form.
    pub fn classify_normal_form(&self) -> Result<NormalForm, CurveError> {
        let quantities = self.quantities();
        let j = quantities.j.clone().ok_or(CurveError::SingularCurve)?;
        let field = self.field();
        if field.characteristic_is(2) {
            let tag = if j.is_zero() {
                NormalFormTag::Char2JZero
            } else {
                NormalFormTag::Char2JNonzero
            };
            return Ok(NormalForm {
                tag,
                curve: self.clone(),
                map: None,
            });
        }
        if field.characteristic_is(3) {
            return Ok(NormalForm {
                tag: NormalFormTag::Char3,
                curve: self.clone(),
                map: None,
            });
        }
        let (short, map) = self.to_short_form(&quantities)?;
        Ok(NormalForm {
            tag: NormalFormTag::CharGeneral,
            curve: short,
            map: Some(map),
        })
    }

    /// Complete the square in y, then shift x by b2/12:
    /// y^2 = x^3 - (c4/48) x - (c6/864), with c6 = -b2^3 + 36 b2 b4 - 216 b6.
    fn to_short_form(
        &self,
        quantities: &CurveQuantities,
    ) -> Result<(WeierstrassCurve, ShortFormMap), CurveError> {
        let field = self.field();
        if field.characteristic_is(2) || field.characteristic_is(3) {
            return Err(CurveError::UnsupportedCharacteristic);
        }
        let CurveQuantities { b2, b4, b6, .. } = quantities;
        let b2_cubed = &(b2 * b2) * b2;
        let c6 =
            &(&(&field.element(36u32) * &(b2 * b4)) - &b2_cubed) - &(&field.element(216u32) * b6);
        let a4 = -&(&quantities.c4 * &field.element(48u32).inv().expect("48 invertible"));
        let a6 = -&(&c6 * &field.element(864u32).inv().expect("864 invertible"));
        let short = WeierstrassCurve {
            a1: field.zero(),
            a2: field.zero(),
            a3: field.zero(),
            a4,
            a6,
        };
        let half = field.element(2u32).inv().expect("2 invertible");
        let map = ShortFormMap {
            x_shift: b2 * &field.element(12u32).inv().expect("12 invertible"),
            y_slope: &self.a1 * &half,
            y_shift: &self.a3 * &half,
        };
        Ok((short, map))
    }

    /// -(x, y) = (x, -y - a1 x - a3); on short form this is (x, -y).
    pub fn negate(&self, point: &CurvePoint) -> CurvePoint {
        match point {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: &(&-y - &(&self.a1 * x)) - &self.a3,
            },
        }
    }

    /// Chord-tangent addition. Both points are checked against the curve
    /// equation; general-form curves are normalized first.
    pub fn point_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, CurveError> {
        let ctx = self.group_context()?;
        ctx.check_membership(self, p)?;
        ctx.check_membership(self, q)?;
        Ok(ctx.unmap(&ctx.add(&ctx.map(p), &ctx.map(q))))
    }

    /// n-fold sum of `point` by fixed-window (width 4) double-and-add.
    /// scalar_mul(0, P) = O.
    pub fn scalar_mul(&self, n: &BigUint, point: &CurvePoint) -> Result<CurvePoint, CurveError> {
        let ctx = self.group_context()?;
        ctx.check_membership(self, point)?;
        let p = ctx.map(point);
        if n.is_zero() || p.is_infinity() {
            return Ok(CurvePoint::Infinity);
        }
        // table[k - 1] = k * P for k in 1..=15
        let mut table = Vec::with_capacity(15);
        table.push(p.clone());
        for _ in 1..15 {
            table.push(ctx.add(table.last().unwrap(), &p));
        }
        let mut acc = CurvePoint::Infinity;
        let bits = n.bits();
        let windows = bits.div_ceil(4);
        for w in (0..windows).rev() {
            for _ in 0..4 {
                acc = ctx.add(&acc, &acc);
            }
            let mut nibble = 0usize;
            for b in (0..4).rev() {
                let bit_index = w * 4 + b;
                nibble <<= 1;
                if bit_index < bits && n.bit(bit_index) {
                    nibble |= 1;
                }
            }
            if nibble != 0 {
                acc = ctx.add(&acc, &table[nibble - 1]);
            }
        }
        Ok(ctx.unmap(&acc))
    }

    fn group_context(&self) -> Result<GroupContext, CurveError> {
        let field = self.field();
        if field.characteristic_is(2) || field.characteristic_is(3) {
            return Err(CurveError::UnsupportedCharacteristic);
        }
        if self.is_short_form() {
            if self.is_singular() {
                return Err(CurveError::SingularCurve);
            }
            return Ok(GroupContext {
                short: self.clone(),
                map: None,
            });
        }
        let quantities = self.quantities();
        if quantities.delta.is_zero() {
            return Err(CurveError::SingularCurve);
        }
        let (short, map) = self.to_short_form(&quantities)?;
        Ok(GroupContext {
            short,
            map: Some(map),
        })
    }

    /// Exhaustive list of rational points (O first, then ordered by (x, y)).
    /// This is the brute-force oracle: for each x it solves the completed
    /// square against a table of all squares in the field. Refuses singular
    /// curves and fields beyond the enumeration limit.
    pub fn enumerate_points(&self) -> Result<Vec<CurvePoint>, CurveError> {
        let field = self.field();
        let p = small_modulus(field)?;
        if self.is_singular() {
            return Err(CurveError::SingularCurve);
        }
        let mut points = vec![CurvePoint::Infinity];
        if field.characteristic_is(2) {
            for x in 0..p {
                for y in 0..p {
                    let (x, y) = (field.element(x), field.element(y));
                    if self.equation_at(&x, &y).is_zero() {
                        points.push(CurvePoint::Affine { x, y });
                    }
                }
            }
            return Ok(points);
        }
        // square table: s -> all y with y^2 = s
        let mut roots: HashMap<BigUint, Vec<FieldElement>> = HashMap::new();
        for y in 0..p {
            let y = field.element(y);
            roots.entry((&y * &y).value().clone()).or_default().push(y);
        }
        // complete the square: (y + c)^2 = f(x) + c^2 with c = (a1 x + a3)/2
        let half = field.element(2u32).inv().expect("odd characteristic");
        for x in 0..p {
            let x = field.element(x);
            let x2 = &x * &x;
            let f = &(&(&(&x2 * &x) + &(&self.a2 * &x2)) + &(&self.a4 * &x)) + &self.a6;
            let c = &(&(&self.a1 * &x) + &self.a3) * &half;
            let rhs = &f + &(&c * &c);
            if let Some(ys) = roots.get(rhs.value()) {
                for root in ys {
                    points.push(CurvePoint::Affine {
                        x: x.clone(),
                        y: root - &c,
                    });
                }
            }
        }
        points[1..].sort_by(|a, b| match (a, b) {
            (CurvePoint::Affine { x: xa, y: ya }, CurvePoint::Affine { x: xb, y: yb }) => xa
                .value()
                .cmp(xb.value())
                .then_with(|| ya.value().cmp(yb.value())),
            _ => unreachable!("only affine points after the head"),
        });
        Ok(points)
    }
}

/// Short-form curve plus the optional coordinate map back to the caller's
/// general-form curve. Addition inside the context skips revalidation.
struct GroupContext {
    short: WeierstrassCurve,
    map: Option<ShortFormMap>,
}

impl GroupContext {
    fn check_membership(
        &self,
        original: &WeierstrassCurve,
        point: &CurvePoint,
    ) -> Result<(), CurveError> {
        if original.is_on_curve(point) {
            Ok(())
        } else {
            Err(CurveError::PointNotOnCurve)
        }
    }

    fn map(&self, point: &CurvePoint) -> CurvePoint {
        match &self.map {
            Some(m) => m.forward(point),
            None => point.clone(),
        }
    }

    fn unmap(&self, point: &CurvePoint) -> CurvePoint {
        match &self.map {
            Some(m) => m.inverse(point),
            None => point.clone(),
        }
    }

    /// Group law on y^2 = x^3 + a4 x + a6. Inputs must already be on the
    /// short curve.
    fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1) = match p {
            CurvePoint::Infinity => return q.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            CurvePoint::Infinity => return p.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let field = self.short.field();
        let slope = if x1 == x2 {
            if *y1 == -y2 {
                // vertical chord or tangent: P + (-P) = O, 2*(x, 0) = O
                return CurvePoint::Infinity;
            }
            let numerator = &(&field.element(3u32) * &(x1 * x1)) + &self.short.a4;
            let denominator = &field.element(2u32) * y1;
            &numerator * &denominator.inv().expect("y1 != 0 here")
        } else {
            let numerator = y2 - y1;
            let denominator = x2 - x1;
            &numerator * &denominator.inv().expect("x2 != x1 here")
        };
        let x3 = &(&(&slope * &slope) - x1) - x2;
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }
}

fn small_modulus(field: &PrimeField) -> Result<u64, CurveError> {
    let limit = BigUint::from(ENUMERATION_LIMIT);
    if field.modulus() > &limit {
        return Err(CurveError::FieldTooLarge);
    }
    let digits = field.modulus().to_u64_digits();
    Ok(digits.first().copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn f11() -> PrimeField {
        PrimeField::from_u64(11).unwrap()
    }

    /// y^2 = x^3 + x, the protocol curve.
    fn protocol_curve(field: &PrimeField) -> WeierstrassCurve {
        WeierstrassCurve::short(field, 1u32, 0u32)
    }

    #[test]
    fn b_quantities_of_protocol_curve() {
        let f = PrimeField::from_u64(1_000_003).unwrap();
        let q = protocol_curve(&f).quantities();
        assert_eq!(q.b2, f.zero());
        assert_eq!(q.b4, f.element(2u32));
        assert_eq!(q.b6, f.zero());
        assert_eq!(q.b8, -&f.one());
        assert_eq!(q.c4, -&f.element(48u32));
        assert_eq!(q.delta, -&f.element(64u32));
        assert_eq!(q.j, Some(f.element(1728u32)));
    }

    #[test]
    fn b_quantities_zero_and_cube_plus_one() {
        let f = f11();
        let zero_curve = WeierstrassCurve::from_u64(&f, [0, 0, 0, 0, 0]);
        let q = zero_curve.quantities();
        for v in [&q.b2, &q.b4, &q.b6, &q.b8, &q.c4, &q.delta] {
            assert!(v.is_zero());
        }
        assert_eq!(q.j, None);

        let cube_plus_one = WeierstrassCurve::short(&f, 0u32, 1u32);
        let q = cube_plus_one.quantities();
        assert_eq!(q.b2, f.zero());
        assert_eq!(q.b4, f.zero());
        assert_eq!(q.b6, f.element(4u32));
        assert_eq!(q.b8, f.zero());
        assert_eq!(q.c4, f.zero());
        assert_eq!(cube_plus_one.j_invariant().unwrap(), f.zero());
    }

    #[test]
    fn discriminant_examples() {
        let f = f11();
        assert_eq!(protocol_curve(&f).discriminant(), f.element(2u32));
        let cusp = WeierstrassCurve::short(&f, 0u32, 0u32);
        assert!(cusp.discriminant().is_zero());
        assert_eq!(cusp.j_invariant(), Err(CurveError::SingularCurve));
    }

    #[test]
    fn b_quantity_identity_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let f = PrimeField::from_u64(101).unwrap();
        for _ in 0..50 {
            let curve = WeierstrassCurve::new(
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
            )
            .unwrap();
            let q = curve.quantities();
            assert_eq!(
                &f.element(4u32) * &q.b8,
                &(&q.b2 * &q.b6) - &(&q.b4 * &q.b4)
            );
        }
    }

    #[test]
    fn singular_point_detection() {
        let f = f11();
        let cusp = WeierstrassCurve::short(&f, 0u32, 0u32);
        assert!(cusp.is_singular_point(&f.zero(), &f.zero()));
        assert!(!cusp.is_singular_point(&f.one(), &f.one()));
        let smooth = protocol_curve(&f);
        assert!(!smooth.is_singular_point(&f.element(5u32), &f.element(3u32)));
        assert_eq!(
            cusp.find_singular_point().unwrap(),
            Some((f.zero(), f.zero()))
        );
        assert_eq!(smooth.find_singular_point().unwrap(), None);
    }

    #[test]
    fn membership() {
        let f = f11();
        let curve = protocol_curve(&f);
        assert!(curve.is_on_curve(&CurvePoint::affine(f.element(5u32), f.element(3u32))));
        assert!(curve.is_on_curve(&CurvePoint::Infinity));
        assert!(!curve.is_on_curve(&CurvePoint::affine(f.one(), f.one())));
    }

    #[test]
    fn point_addition_examples() {
        let f = f11();
        let curve = protocol_curve(&f);
        let p = CurvePoint::affine(f.zero(), f.zero());
        let q = CurvePoint::affine(f.element(5u32), f.element(3u32));
        assert_eq!(
            curve.point_add(&p, &q).unwrap(),
            CurvePoint::affine(f.element(9u32), f.element(10u32))
        );
        assert_eq!(curve.point_add(&q, &CurvePoint::Infinity).unwrap(), q);
        // (0,0) is 2-torsion
        assert_eq!(curve.point_add(&p, &p).unwrap(), CurvePoint::Infinity);
        assert_eq!(
            curve.point_add(&CurvePoint::affine(f.one(), f.one()), &q),
            Err(CurveError::PointNotOnCurve)
        );
    }

    #[test]
    fn scalar_mul_examples() {
        let f = f11();
        let curve = protocol_curve(&f);
        let q = CurvePoint::affine(f.element(5u32), f.element(3u32));
        // #E(F_11) = 12 for the supersingular curve
        assert_eq!(
            curve.scalar_mul(&BigUint::from(12u32), &q).unwrap(),
            CurvePoint::Infinity
        );
        assert_eq!(curve.scalar_mul(&BigUint::from(1u32), &q).unwrap(), q);
        let two_torsion = CurvePoint::affine(f.zero(), f.zero());
        assert_eq!(
            curve
                .scalar_mul(&BigUint::from(2u32), &two_torsion)
                .unwrap(),
            CurvePoint::Infinity
        );
        assert_eq!(
            curve.scalar_mul(&BigUint::from(0u32), &q).unwrap(),
            CurvePoint::Infinity
        );
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let f = PrimeField::from_u64(59).unwrap();
        let curve = protocol_curve(&f);
        let points = curve.enumerate_points().unwrap();
        let p = points[3].clone();
        let mut acc = CurvePoint::Infinity;
        for n in 0u32..=50 {
            assert_eq!(
                curve.scalar_mul(&BigUint::from(n), &p).unwrap(),
                acc,
                "n = {n}"
            );
            acc = curve.point_add(&acc, &p).unwrap();
        }
    }

    #[test]
    fn group_axioms_randomized_small_prime() {
        // 16-bit prime, p = 3 (mod 4) so random points are easy to sample
        let f = PrimeField::from_u64(65447).unwrap();
        let curve = protocol_curve(&f);
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let mut random_point = || loop {
            let x = f.random_element(&mut rng);
            let rhs = &(&(&x * &x) * &x) + &x;
            if let Some(y) = rhs.sqrt() {
                return CurvePoint::affine(x, y);
            }
        };
        for _ in 0..25 {
            let p = random_point();
            let q = random_point();
            let r = random_point();
            let left = curve
                .point_add(&curve.point_add(&p, &q).unwrap(), &r)
                .unwrap();
            let right = curve
                .point_add(&p, &curve.point_add(&q, &r).unwrap())
                .unwrap();
            assert_eq!(left, right);
            assert_eq!(
                curve.point_add(&p, &q).unwrap(),
                curve.point_add(&q, &p).unwrap()
            );
            assert_eq!(curve.point_add(&p, &CurvePoint::Infinity).unwrap(), p);
            assert_eq!(
                curve.point_add(&p, &curve.negate(&p)).unwrap(),
                CurvePoint::Infinity
            );
        }
    }

    #[test]
    fn enumeration_counts() {
        let f = f11();
        assert_eq!(protocol_curve(&f).enumerate_points().unwrap().len(), 12);
        // p = 1 (mod 4) is excluded from pairing use but still enumerable;
        // the exhaustive scan finds O, (0,0), (2,0), (3,0)
        let f5 = PrimeField::from_u64(5).unwrap();
        assert_eq!(protocol_curve(&f5).enumerate_points().unwrap().len(), 4);
        let cusp = WeierstrassCurve::short(&f, 0u32, 0u32);
        assert_eq!(cusp.enumerate_points(), Err(CurveError::SingularCurve));
    }

    #[test]
    fn supersingular_counts_below_500() {
        for p in (3u64..500).filter(|p| p % 4 == 3 && is_prime(&BigUint::from(*p))) {
            let f = PrimeField::from_u64(p).unwrap();
            let n = protocol_curve(&f).enumerate_points().unwrap().len() as u64;
            assert_eq!(n, p + 1, "p = {p}");
        }
    }

    #[test]
    fn enumeration_agrees_with_general_form() {
        // y^2 + xy = x^3 + 1 over F_11 via both the direct scan and the
        // short-form image
        let f = f11();
        let curve = WeierstrassCurve::from_u64(&f, [1, 0, 0, 0, 1]);
        let points = curve.enumerate_points().unwrap();
        for pt in &points {
            assert!(curve.is_on_curve(pt));
        }
        let normal = curve.classify_normal_form().unwrap();
        let map = normal.map.unwrap();
        for pt in &points {
            assert!(normal.curve.is_on_curve(&map.forward(pt)));
            assert_eq!(map.inverse(&map.forward(pt)), *pt);
        }
        assert_eq!(normal.curve.enumerate_points().unwrap().len(), points.len());
    }

    #[test]
    fn normal_form_classification() {
        let f = f11();
        // general curve reduces to short form with the same j
        let curve = WeierstrassCurve::from_u64(&f, [1, 0, 0, 0, 1]);
        let normal = curve.classify_normal_form().unwrap();
        assert_eq!(normal.tag, NormalFormTag::CharGeneral);
        assert!(normal.curve.is_short_form());
        assert_eq!(
            normal.curve.j_invariant().unwrap(),
            curve.j_invariant().unwrap()
        );
        // already-short input maps to itself
        let short = protocol_curve(&f);
        let normal = short.classify_normal_form().unwrap();
        assert_eq!(normal.curve, short);
        let map = normal.map.unwrap();
        let pt = CurvePoint::affine(f.element(5u32), f.element(3u32));
        assert_eq!(map.forward(&pt), pt);

        // char 2: y^2 + xy = x^3 + 1 has a1 != 0, so j != 0
        let f2 = PrimeField::from_u64(2).unwrap();
        let c2 = WeierstrassCurve::from_u64(&f2, [1, 0, 0, 0, 1]);
        assert_eq!(
            c2.classify_normal_form().unwrap().tag,
            NormalFormTag::Char2JNonzero
        );
        // char 2: y^2 + y = x^3 has a1 = 0, so j = 0
        let c2z = WeierstrassCurve::from_u64(&f2, [0, 0, 1, 0, 0]);
        assert_eq!(
            c2z.classify_normal_form().unwrap().tag,
            NormalFormTag::Char2JZero
        );
        // char 3
        let f3 = PrimeField::from_u64(3).unwrap();
        let c3 = WeierstrassCurve::from_u64(&f3, [0, 1, 0, 0, 1]);
        assert_eq!(c3.classify_normal_form().unwrap().tag, NormalFormTag::Char3);
        // group law refuses char 2
        let pt2 = CurvePoint::affine(f2.zero(), f2.one());
        assert_eq!(
            c2.point_add(&pt2, &pt2),
            Err(CurveError::UnsupportedCharacteristic)
        );
    }

    #[test]
    fn normal_form_preserves_j_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let f = PrimeField::from_u64(103).unwrap();
        let mut seen = 0;
        while seen < 30 {
            let curve = WeierstrassCurve::new(
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
            )
            .unwrap();
            let Ok(j) = curve.j_invariant() else {
                continue;
            };
            seen += 1;
            let normal = curve.classify_normal_form().unwrap();
            assert_eq!(normal.curve.j_invariant().unwrap(), j);
        }
    }

    #[test]
    fn hasse_bound_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let primes: Vec<u64> = (5u64..=101)
            .filter(|p| is_prime(&BigUint::from(*p)))
            .collect();
        let mut checked = 0;
        while checked < 50 {
            let p = primes[rng.gen_range(0..primes.len())];
            let f = PrimeField::from_u64(p).unwrap();
            let curve = WeierstrassCurve::new(
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
            )
            .unwrap();
            if curve.is_singular() {
                continue;
            }
            checked += 1;
            let n = curve.enumerate_points().unwrap().len() as i128;
            let diff = n - (p as i128 + 1);
            assert!(diff * diff <= 4 * p as i128, "p={p} n={n}");
        }
    }

    #[test]
    fn encodings_round_trip() {
        let f = f11();
        let curve = protocol_curve(&f);
        assert_eq!(curve.encode(), "0,0,0,1,0,b");
        assert_eq!(WeierstrassCurve::decode("0,0,0,1,0,b").unwrap(), curve);
        let pt = CurvePoint::affine(f.element(5u32), f.element(10u32));
        assert_eq!(pt.encode(), "(5,a)");
        assert_eq!(CurvePoint::decode("(5,a)", &f).unwrap(), pt);
        assert_eq!(CurvePoint::Infinity.encode(), "O");
        assert_eq!(CurvePoint::decode("O", &f).unwrap(), CurvePoint::Infinity);
        assert!(CurvePoint::decode("(5,a", &f).is_err());
        assert!(WeierstrassCurve::decode("1,2,3").is_err());
    }
}
