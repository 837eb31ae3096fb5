//! The certificateless keying protocol: system setup with a threshold-shared
//! master key, identity hashing, and the blinded six-step private-key update
//! exchange.
//!
//! Roles and notation. The KGC master key x never leaves setup: it is Shamir-
//! dealt to n holders and exists afterwards only as the [`MasterKey`] test
//! oracle. A node with identity string ID_A holds a secret value x_A and the
//! points
//!
//! * Q_A = H1(ID_A / phase), its hashed identity,
//! * D_A = x * Q_A, the KGC-derived partial key,
//! * SK_A = x_A * D_A, the complete private key,
//! * PK = x_A * G and PK_A = x_A * P_pub, the public halves.
//!
//! A key update is: the node broadcasts {Q_A, R = tau*G, PK, PK_A, ID_A};
//! each holder checks revocation and e(PK_A, G) = e(PK, P_pub), then returns
//! the ciphertext pair (U, V) = (s_x * Q_A + tau_u * R, tau_u * G); the node
//! unblinds m = U - tau * V, accepts iff e(Q_A, W_x) = e(m, G), and Lagrange-
//! combines t accepted contributions into D_A = x * Q_A.

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint};
use crate::field::{FieldElement, FieldError};
use crate::pairing::{PairingError, PairingParams};
use crate::sharing::{
    deal_shares, reconstruct_point, verify_contribution, MasterShare, SharingError, SharingPolicy,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyingError {
    #[error("node is revoked")]
    NodeRevoked,
    #[error("requester validity check failed")]
    InvalidRequester,
    #[error("share response failed verification")]
    IllegalShare,
    #[error("holder identity strings {0:?} and {1:?} hash to the same scalar id")]
    HolderIdCollision(String, String),
    #[error("phase may not decrease (current {current}, requested {requested})")]
    PhaseRegression { current: u64, requested: u64 },
    #[error(transparent)]
    Sharing(#[from] SharingError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Identifier strings for the two hash constructions, published as part of
/// the system parameters.
pub const H1_SPEC: &str = "sha256/try-and-increment/cofactor";
pub const H2_SPEC: &str = "sha256/mod-(q-1)-plus-1";

/// Public system parameters: pairing instance, sharing policy, the master
/// public key P_pub = x * G, and the current phase epoch.
#[derive(Debug, Clone)]
pub struct SystemParams {
    pairing: PairingParams,
    policy: SharingPolicy,
    public_key: CurvePoint,
    phase: u64,
}

impl SystemParams {
    pub fn pairing(&self) -> &PairingParams {
        &self.pairing
    }

    pub fn policy(&self) -> &SharingPolicy {
        &self.policy
    }

    /// P_pub = x * G.
    pub fn public_key(&self) -> &CurvePoint {
        &self.public_key
    }

    pub fn phase(&self) -> u64 {
        self.phase
    }

    /// Phases only move forward.
    pub fn advance_phase(&mut self, phase: u64) -> Result<(), KeyingError> {
        if phase < self.phase {
            return Err(KeyingError::PhaseRegression {
                current: self.phase,
                requested: phase,
            });
        }
        self.phase = phase;
        Ok(())
    }

    /// H1: identity string and phase to a point of the order-q subgroup.
    /// The hash input is `id || "/" || decimal phase`; the point is obtained
    /// by try-and-increment plus cofactor clearing and is never O.
    pub fn hash_to_point(&self, id: &str, phase: u64) -> Result<CurvePoint, KeyingError> {
        let mut message = Vec::with_capacity(id.len() + 8);
        message.extend_from_slice(id.as_bytes());
        message.push(b'/');
        message.extend_from_slice(phase.to_string().as_bytes());
        Ok(self.pairing.hash_to_subgroup(&message)?)
    }

    /// H2: arbitrary bytes to a scalar in [1, q), never zero.
    pub fn hash_to_scalar(&self, data: &[u8]) -> FieldElement {
        hash_to_scalar(self.pairing.scalar_field(), data)
    }
}

pub fn hash_to_scalar(scalar_field: &crate::field::PrimeField, data: &[u8]) -> FieldElement {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(data);
    let reduced = BigUint::from_bytes_be(&digest) % (scalar_field.modulus() - 1u32);
    scalar_field.element(reduced + 1u32)
}

/// The KGC master key x. After setup it exists only so tests and the
/// simulator can fill their oracle columns; no protocol party holds it.
#[derive(Debug, Clone)]
pub struct MasterKey {
    value: FieldElement,
}

impl MasterKey {
    pub fn value(&self) -> &FieldElement {
        &self.value
    }

    /// Oracle: the partial key x * Q the distributed protocol should
    /// reconstruct.
    pub fn derive_partial_key(
        &self,
        system: &SystemParams,
        identity_point: &CurvePoint,
    ) -> CurvePoint {
        system
            .pairing()
            .mul_point(&self.value, identity_point)
            .expect("identity point is on the curve")
    }
}

/// A node's full key state.
#[derive(Debug, Clone)]
pub struct NodeSecrets {
    pub id: String,
    pub phase: u64,
    /// x_A, the node-chosen secret value.
    pub secret_value: FieldElement,
    /// Q_A = H1(id / phase).
    pub identity_point: CurvePoint,
    /// D_A = x * Q_A.
    pub partial_key: CurvePoint,
    /// SK_A = x_A * D_A.
    pub private_key: CurvePoint,
    /// PK = x_A * G.
    pub public_point: CurvePoint,
    /// PK_A = x_A * P_pub.
    pub bound_public_key: CurvePoint,
}

/// R_update = {Q_A, R, PK, PK_A, ID_A}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateRequest {
    pub id: String,
    pub identity_point: CurvePoint,
    pub blinding_point: CurvePoint,
    pub public_point: CurvePoint,
    pub bound_public_key: CurvePoint,
}

/// The requester-held blinding factor tau with R = tau * G.
#[derive(Debug, Clone)]
pub struct BlindingSecret {
    tau: FieldElement,
}

impl BlindingSecret {
    pub fn value(&self) -> &FieldElement {
        &self.tau
    }
}

/// epsilon_A = <U, V> plus the holder's public commitment W = s_x * G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareResponse {
    pub holder_id: FieldElement,
    /// U = m_A + tau_u * R.
    pub blinded_share: CurvePoint,
    /// V = tau_u * G.
    pub ephemeral_point: CurvePoint,
    /// W = s_x * G, dealt at setup.
    pub commitment: CurvePoint,
}

/// Deleted node ids; holders consult this before answering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RevocationList {
    ids: BTreeSet<String>,
}

impl RevocationList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Idempotent.
    pub fn revoke(&mut self, id: &str) {
        self.ids.insert(id.to_string());
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Derived session key plus a flag for the degenerate O ephemeral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionKey {
    pub key: FieldElement,
    pub degenerate: bool,
}

/// Generates k-bit pairing params under `seed`, then runs the explicit-
/// params setup. All randomness (parameter search, master key, polynomial
/// coefficients) is drawn from one ChaCha20 stream in that order.
pub fn setup(
    k_bits: u64,
    threshold: usize,
    holder_ids: &[String],
    seed: u64,
) -> Result<(SystemParams, MasterKey, Vec<MasterShare>), KeyingError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let pairing = PairingParams::generate_with_rng(k_bits, &mut rng)?;
    setup_with_params(pairing, threshold, holder_ids, &mut rng)
}

/// Setup over explicit pairing params: draws the master key x, publishes
/// P_pub = x * G, maps holder identity strings through H2 to distinct
/// scalar ids, and deals pairing-committed shares of x to them.
///
/// The returned shares are index-aligned with `holder_ids`.
pub fn setup_with_params(
    pairing: PairingParams,
    threshold: usize,
    holder_ids: &[String],
    rng: &mut impl RngCore,
) -> Result<(SystemParams, MasterKey, Vec<MasterShare>), KeyingError> {
    let scalar_field = pairing.scalar_field().clone();
    let policy = SharingPolicy::new(scalar_field.clone(), threshold, holder_ids.len())?;
    let mut scalar_ids = Vec::with_capacity(holder_ids.len());
    for (index, holder) in holder_ids.iter().enumerate() {
        let scalar_id = hash_to_scalar(&scalar_field, holder.as_bytes());
        if let Some(existing) = scalar_ids
            .iter()
            .position(|prior: &FieldElement| *prior == scalar_id)
        {
            return Err(KeyingError::HolderIdCollision(
                holder_ids[existing].clone(),
                holder_ids[index].clone(),
            ));
        }
        scalar_ids.push(scalar_id);
    }
    let master = scalar_field.random_nonzero(rng);
    let public_key = pairing.mul_generator(master.value());
    let shares = deal_shares(&pairing, &policy, &master, &scalar_ids, rng)?;
    let system = SystemParams {
        pairing,
        policy,
        public_key,
        phase: 0,
    };
    Ok((system, MasterKey { value: master }, shares))
}

/// Initialization-path registration: the KGC (holding x) derives the node's
/// partial key directly. Distributed issuance goes through the update
/// protocol instead.
pub fn register_node(
    system: &SystemParams,
    master: &MasterKey,
    id: &str,
    rng: &mut impl RngCore,
) -> Result<NodeSecrets, KeyingError> {
    let pairing = system.pairing();
    let secret_value = pairing.scalar_field().random_nonzero(rng);
    let identity_point = system.hash_to_point(id, system.phase())?;
    let partial_key = master.derive_partial_key(system, &identity_point);
    let private_key = pairing.mul_point(&secret_value, &partial_key)?;
    let public_point = pairing.mul_generator(secret_value.value());
    let bound_public_key = pairing.mul_point(&secret_value, system.public_key())?;
    Ok(NodeSecrets {
        id: id.to_string(),
        phase: system.phase(),
        secret_value,
        identity_point,
        partial_key,
        private_key,
        public_point,
        bound_public_key,
    })
}

/// Step 1-2: fresh blinding factor tau, R = tau * G, Q_A recomputed for the
/// requested phase, and the broadcast message {Q_A, R, PK, PK_A, ID_A}.
pub fn make_update_request(
    system: &SystemParams,
    node: &NodeSecrets,
    phase: u64,
    rng: &mut impl RngCore,
) -> Result<(UpdateRequest, BlindingSecret), KeyingError> {
    let tau = system.pairing().scalar_field().random_nonzero(rng);
    let blinding_point = system.pairing().mul_generator(tau.value());
    let identity_point = system.hash_to_point(&node.id, phase)?;
    let request = UpdateRequest {
        id: node.id.clone(),
        identity_point,
        blinding_point,
        public_point: node.public_point.clone(),
        bound_public_key: node.bound_public_key.clone(),
    };
    Ok((request, BlindingSecret { tau }))
}

/// Steps 3-4, holder side: refuse revoked requesters, check the validity
/// pairing e(PK_A, G) = e(PK, P_pub), then answer with the blinded pair
/// (U, V) = (s_x * Q_A + tau_u * R, tau_u * G) and the commitment W.
pub fn respond_update(
    system: &SystemParams,
    share: &MasterShare,
    revoked: &RevocationList,
    request: &UpdateRequest,
    rng: &mut impl RngCore,
) -> Result<ShareResponse, KeyingError> {
    if revoked.contains(&request.id) {
        return Err(KeyingError::NodeRevoked);
    }
    let pairing = system.pairing();
    let valid = (|| -> Result<bool, PairingError> {
        let lhs = pairing.tate_pairing(&request.bound_public_key, pairing.generator())?;
        let rhs = pairing.tate_pairing(&request.public_point, system.public_key())?;
        Ok(lhs == rhs)
    })()
    // a request with off-subgroup points is as invalid as a mismatched one
    .unwrap_or(false);
    if !valid {
        return Err(KeyingError::InvalidRequester);
    }
    if !pairing.is_in_subgroup(&request.identity_point)
        || !pairing.is_in_subgroup(&request.blinding_point)
    {
        return Err(KeyingError::InvalidRequester);
    }
    let contribution = pairing.mul_point(&share.value, &request.identity_point)?;
    let mask = pairing.scalar_field().random_nonzero(rng);
    let blinded_share = pairing.curve().point_add(
        &contribution,
        &pairing.mul_point(&mask, &request.blinding_point)?,
    )?;
    let ephemeral_point = pairing.mul_generator(mask.value());
    Ok(ShareResponse {
        holder_id: share.holder_id.clone(),
        blinded_share,
        ephemeral_point,
        commitment: share.commitment.clone(),
    })
}

/// m = U - tau * V. Pure unblinding; pairs with [`verify_contribution`]
/// through [`unblind_and_verify`].
pub fn unblind(
    system: &SystemParams,
    blinding: &BlindingSecret,
    response: &ShareResponse,
) -> Result<CurvePoint, KeyingError> {
    let pairing = system.pairing();
    let masked = pairing.mul_point(&blinding.tau, &response.ephemeral_point)?;
    Ok(pairing
        .curve()
        .point_add(&response.blinded_share, &pairing.curve().negate(&masked))?)
}

/// Step 5, requester side: m = U - tau * V, accepted iff
/// e(Q_A, W) = e(m, G). Returns the verified contribution m = s_x * Q_A.
pub fn unblind_and_verify(
    system: &SystemParams,
    blinding: &BlindingSecret,
    identity_point: &CurvePoint,
    response: &ShareResponse,
) -> Result<CurvePoint, KeyingError> {
    let contribution = unblind(system, blinding, response)?;
    let accepted = verify_contribution(
        system.pairing(),
        identity_point,
        &contribution,
        &response.commitment,
    )
    .unwrap_or(false);
    if accepted {
        Ok(contribution)
    } else {
        Err(KeyingError::IllegalShare)
    }
}

/// Step 6: Lagrange-combine exactly t verified contributions into
/// D_A = x * Q_A, then refresh the node state for the new phase
/// (SK_A = x_A * D_A).
pub fn reconstruct_private_key(
    system: &SystemParams,
    node: &mut NodeSecrets,
    phase: u64,
    verified: &[(FieldElement, CurvePoint)],
) -> Result<(), KeyingError> {
    if phase < node.phase {
        return Err(KeyingError::PhaseRegression {
            current: node.phase,
            requested: phase,
        });
    }
    let partial_key = reconstruct_point(system.pairing(), system.policy(), verified)?;
    let identity_point = system.hash_to_point(&node.id, phase)?;
    let private_key = system
        .pairing()
        .mul_point(&node.secret_value, &partial_key)?;
    node.phase = phase;
    node.identity_point = identity_point;
    node.partial_key = partial_key;
    node.private_key = private_key;
    Ok(())
}

/// Session-key derivation used by the security analysis: H2 over the
/// serialized pairing of the caller's private key with the peer's ephemeral
/// point. An O ephemeral yields the degenerate H2(e = 1) key and is flagged.
pub fn derive_session_key(
    system: &SystemParams,
    private_key: &CurvePoint,
    peer_ephemeral: &CurvePoint,
) -> Result<SessionKey, KeyingError> {
    let shared = system.pairing().tate_pairing(private_key, peer_ephemeral)?;
    let key = system.hash_to_scalar(shared.encode().as_bytes());
    Ok(SessionKey {
        key,
        degenerate: peer_ephemeral.is_infinity(),
    })
}
