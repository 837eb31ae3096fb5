//! Shamir (t, n) sharing of the master key over Z_q, with pairing-checkable
//! share commitments and Lagrange reconstruction in scalar and point form.
//!
//! The dealer embeds the secret as f(0) of a random degree-(t-1) polynomial
//! and hands holder V the evaluation s_V = f(ID_V) together with the
//! commitment W_V = s_V * G. A contribution m = s_V * Q can later be checked
//! against W_V without revealing s_V, because e(Q, W_V) = e(m, G).
//! Reconstruction takes exactly t contributions; callers choose the subset.

use rand::RngCore;
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint};
use crate::field::{FieldElement, FieldError, PrimeField};
use crate::pairing::{PairingError, PairingParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SharingError {
    #[error("holder ids must be distinct")]
    DuplicateId,
    #[error("holder ids must be non-zero mod q")]
    ZeroId,
    #[error("fewer than t shares supplied")]
    InsufficientShares,
    #[error("more than t shares supplied; select a t-subset first")]
    TooManyShares,
    #[error("invalid sharing policy: {0}")]
    PolicyViolation(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Threshold policy: any t of n holders reconstruct, fewer learn nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharingPolicy {
    scalar_field: PrimeField,
    threshold: usize,
    holders: usize,
}

impl SharingPolicy {
    pub fn new(
        scalar_field: PrimeField,
        threshold: usize,
        holders: usize,
    ) -> Result<Self, SharingError> {
        if threshold < 2 {
            return Err(SharingError::PolicyViolation(
                "threshold must be at least 2".into(),
            ));
        }
        if holders < threshold {
            return Err(SharingError::PolicyViolation(
                "holder count must be at least the threshold".into(),
            ));
        }
        if num_bigint::BigUint::from(holders) >= *scalar_field.modulus() {
            return Err(SharingError::PolicyViolation(
                "holder count must be below q".into(),
            ));
        }
        Ok(SharingPolicy {
            scalar_field,
            threshold,
            holders,
        })
    }

    pub fn scalar_field(&self) -> &PrimeField {
        &self.scalar_field
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn holders(&self) -> usize {
        self.holders
    }
}

/// f(x) = s + a_1 x + ... + a_{t-1} x^{t-1} over Z_q, with f(0) = s.
#[derive(Debug, Clone)]
pub struct SecretPolynomial {
    coefficients: Vec<FieldElement>,
}

impl SecretPolynomial {
    /// Fixed coefficients; `coefficients[0]` is the secret.
    pub fn new(coefficients: Vec<FieldElement>) -> Self {
        assert!(!coefficients.is_empty(), "polynomial needs a constant term");
        SecretPolynomial { coefficients }
    }

    /// Uniform a_1 .. a_{t-1} (zero leading coefficients are legal: the
    /// degree bound, not the exact degree, is what the scheme needs).
    pub fn random(secret: FieldElement, threshold: usize, rng: &mut impl RngCore) -> Self {
        let field = secret.field().clone();
        let mut coefficients = vec![secret];
        for _ in 1..threshold {
            coefficients.push(field.random_element(rng));
        }
        SecretPolynomial { coefficients }
    }

    pub fn secret(&self) -> &FieldElement {
        &self.coefficients[0]
    }

    pub fn evaluate(&self, at: &FieldElement) -> FieldElement {
        let mut acc = at.field().zero();
        for coeff in self.coefficients.iter().rev() {
            acc = &(&acc * at) + coeff;
        }
        acc
    }
}

/// One holder's share: the evaluation s_V = f(ID_V) and the public
/// commitment W_V = s_V * G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterShare {
    pub holder_id: FieldElement,
    pub value: FieldElement,
    pub commitment: CurvePoint,
}

impl MasterShare {
    /// Persistence line: `<hex-id> <hex-s_V> <point>`.
    pub fn encode(&self) -> String {
        format!(
            "{} {} {}",
            self.holder_id.to_hex(),
            self.value.to_hex(),
            self.commitment.encode()
        )
    }

    pub fn decode(line: &str, params: &PairingParams) -> Result<Self, SharingError> {
        let mut parts = line.split_whitespace();
        let (Some(id), Some(value), Some(point), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(CurveError::InvalidEncoding(line.to_string()).into());
        };
        Ok(MasterShare {
            holder_id: params.scalar_field().element_from_hex(id)?,
            value: params.scalar_field().element_from_hex(value)?,
            commitment: CurvePoint::decode(point, params.field())?,
        })
    }
}

fn check_ids_distinct_nonzero(ids: &[&FieldElement]) -> Result<(), SharingError> {
    for (i, id) in ids.iter().enumerate() {
        if id.is_zero() {
            return Err(SharingError::ZeroId);
        }
        if ids[..i].contains(id) {
            return Err(SharingError::DuplicateId);
        }
    }
    Ok(())
}

/// Deals shares of `secret` to the given holder ids with fresh polynomial
/// coefficients from `rng`, attaching the s_V * G commitments.
pub fn deal_shares(
    params: &PairingParams,
    policy: &SharingPolicy,
    secret: &FieldElement,
    ids: &[FieldElement],
    rng: &mut impl RngCore,
) -> Result<Vec<MasterShare>, SharingError> {
    let polynomial = SecretPolynomial::random(secret.clone(), policy.threshold(), rng);
    deal_shares_with_polynomial(params, policy, &polynomial, ids)
}

/// Deterministic variant used when the polynomial itself is under test.
pub fn deal_shares_with_polynomial(
    params: &PairingParams,
    policy: &SharingPolicy,
    polynomial: &SecretPolynomial,
    ids: &[FieldElement],
) -> Result<Vec<MasterShare>, SharingError> {
    if ids.len() != policy.holders() {
        return Err(SharingError::PolicyViolation(format!(
            "expected {} holder ids, got {}",
            policy.holders(),
            ids.len()
        )));
    }
    check_ids_distinct_nonzero(&ids.iter().collect::<Vec<_>>())?;
    ids.iter()
        .map(|id| {
            let value = polynomial.evaluate(id);
            let commitment = params.mul_generator(value.value());
            Ok(MasterShare {
                holder_id: id.clone(),
                value,
                commitment,
            })
        })
        .collect()
}

/// Lagrange coefficients at zero: lambda_j = prod_{m != j} id_m / (id_m - id_j).
/// For any polynomial f of degree < |ids|, sum lambda_j f(id_j) = f(0).
pub fn lagrange_at_zero(ids: &[&FieldElement]) -> Result<Vec<FieldElement>, SharingError> {
    check_ids_distinct_nonzero(ids)?;
    ids.iter()
        .map(|id_j| {
            let mut lambda = id_j.field().one();
            for id_m in ids {
                if id_m == id_j {
                    continue;
                }
                let difference = *id_m - *id_j;
                // distinct ids over a prime field: the difference is a unit
                let ratio = *id_m * difference.inv().expect("distinct ids differ by a unit");
                lambda = &lambda * &ratio;
            }
            Ok(lambda)
        })
        .collect()
}

fn check_share_count(policy: &SharingPolicy, supplied: usize) -> Result<(), SharingError> {
    if supplied < policy.threshold() {
        return Err(SharingError::InsufficientShares);
    }
    if supplied > policy.threshold() {
        return Err(SharingError::TooManyShares);
    }
    Ok(())
}

/// Recovers the secret from exactly t shares.
pub fn reconstruct_scalar(
    policy: &SharingPolicy,
    shares: &[MasterShare],
) -> Result<FieldElement, SharingError> {
    check_share_count(policy, shares.len())?;
    let ids: Vec<&FieldElement> = shares.iter().map(|s| &s.holder_id).collect();
    let lambdas = lagrange_at_zero(&ids)?;
    let mut acc = policy.scalar_field().zero();
    for (share, lambda) in shares.iter().zip(&lambdas) {
        acc = &acc + &(lambda * &share.value);
    }
    Ok(acc)
}

/// Lagrange in the exponent: given t contributions (ID_V, s_V * Q), returns
/// sum lambda_V * (s_V * Q) = s * Q exactly.
pub fn reconstruct_point(
    params: &PairingParams,
    policy: &SharingPolicy,
    contributions: &[(FieldElement, CurvePoint)],
) -> Result<CurvePoint, SharingError> {
    check_share_count(policy, contributions.len())?;
    let ids: Vec<&FieldElement> = contributions.iter().map(|(id, _)| id).collect();
    let lambdas = lagrange_at_zero(&ids)?;
    let mut acc = CurvePoint::Infinity;
    for ((_, point), lambda) in contributions.iter().zip(&lambdas) {
        if !params.curve().is_on_curve(point) {
            return Err(SharingError::Curve(CurveError::PointNotOnCurve));
        }
        let term = params.curve().scalar_mul(lambda.value(), point)?;
        acc = params.curve().point_add(&acc, &term)?;
    }
    Ok(acc)
}

/// The pairing check behind share acceptance: a claimed m = s_V * Q is
/// consistent with the commitment W = s_V * G iff e(Q, W) = e(m, G).
pub fn verify_contribution(
    params: &PairingParams,
    q_point: &CurvePoint,
    contribution: &CurvePoint,
    commitment: &CurvePoint,
) -> Result<bool, SharingError> {
    let lhs = params.tate_pairing(q_point, commitment)?;
    let rhs = params.tate_pairing(contribution, params.generator())?;
    Ok(lhs == rhs)
}
