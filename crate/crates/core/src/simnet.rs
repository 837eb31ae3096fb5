//! Deterministic multi-node simulation of the keying protocol, with
//! reproducible JSON-lines transcripts, in-flight message tampering, and a
//! standalone replay checker.
//!
//! One ChaCha20 stream seeded from the config drives every draw, in a fixed
//! order: parameter search (when `bits` is given), the master key, the
//! sharing polynomial, node secret values in declared order, then per
//! schedule event the requester's tau followed by each responding holder's
//! tau_u in holder-id order. Two runs of the same config are byte-identical.
//!
//! Transcripts deliberately include oracle data (master-key comparisons,
//! unblinded contributions) so every recorded verdict can be re-verified
//! offline by [`verify_transcript`]; they are audit artifacts, not captures
//! of a hostile wire.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint};
use crate::field::{biguint_from_hex, biguint_to_hex, FieldElement, FieldError};
use crate::keying::{
    self, KeyingError, MasterKey, NodeSecrets, RevocationList, ShareResponse, SystemParams,
    UpdateRequest,
};
use crate::pairing::{PairingError, PairingParams};
use crate::sharing::{lagrange_at_zero, verify_contribution, MasterShare, SharingError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid config field {field}: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("message has no tamperable field {0:?}")]
    UnknownField(String),
    #[error("malformed transcript line {line}: {message}")]
    MalformedTranscript { line: usize, message: String },
    #[error("replay mismatch at step {step}: {message}")]
    ReplayMismatch { step: usize, message: String },
    #[error(transparent)]
    Keying(#[from] KeyingError),
    #[error(transparent)]
    Sharing(#[from] SharingError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Either an explicit desk instance or a target bit length for the
/// deterministic parameter search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Explicit { p: String, q: String, r: String },
    Generate { bits: u64 },
}

/// The point fields tampering can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TamperField {
    U,
    V,
    W,
    #[serde(rename = "PK_A")]
    PkA,
    #[serde(rename = "Q_A")]
    QA,
}

impl TamperField {
    fn json_key(self) -> &'static str {
        match self {
            TamperField::U => "u",
            TamperField::V => "v",
            TamperField::W => "w",
            TamperField::PkA => "pk_a",
            TamperField::QA => "q_a",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum ScheduleEvent {
    /// Node `id` broadcasts a key-update request for `phase`.
    Request { id: String, phase: u64 },
    /// `id` is added to the revocation list.
    Revoke { id: String },
    /// The message that will be emitted at transcript step `msg_index`
    /// has `field` replaced by `field + G` in flight.
    Tamper {
        msg_index: usize,
        field: TamperField,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub params: ParamSpec,
    pub threshold: usize,
    pub holders: Vec<String>,
    pub nodes: Vec<String>,
    #[serde(default)]
    pub schedule: Vec<ScheduleEvent>,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| SimError::ConfigInvalid {
                field: "<root>".into(),
                message: e.to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |field: &str, message: String| SimError::ConfigInvalid {
            field: field.into(),
            message,
        };
        if self.threshold < 2 {
            return Err(invalid("threshold", "must be at least 2".into()));
        }
        if self.holders.len() < self.threshold {
            return Err(invalid(
                "holders",
                format!(
                    "need at least {} holders for threshold {}",
                    self.threshold, self.threshold
                ),
            ));
        }
        for (name, list) in [("holders", &self.holders), ("nodes", &self.nodes)] {
            for (i, id) in list.iter().enumerate() {
                if id.is_empty() {
                    return Err(invalid(name, format!("entry {i} is empty")));
                }
                if list[..i].contains(id) {
                    return Err(invalid(name, format!("duplicate entry {id:?}")));
                }
            }
        }
        if let ParamSpec::Explicit { p, q, r } = &self.params {
            for (field, hex) in [("params.p", p), ("params.q", q), ("params.r", r)] {
                biguint_from_hex(hex)
                    .map_err(|e| invalid(field, format!("bad hex {hex:?}: {e}")))?;
            }
        }
        for (i, event) in self.schedule.iter().enumerate() {
            match event {
                ScheduleEvent::Request { id, .. } => {
                    if !self.nodes.contains(id) {
                        return Err(invalid(
                            &format!("schedule[{i}].id"),
                            format!("{id:?} is not a declared node"),
                        ));
                    }
                }
                ScheduleEvent::Revoke { id } => {
                    if !self.nodes.contains(id) && !self.holders.contains(id) {
                        return Err(invalid(
                            &format!("schedule[{i}].id"),
                            format!("{id:?} is not a declared node or holder"),
                        ));
                    }
                }
                ScheduleEvent::Tamper { .. } => {}
            }
        }
        Ok(())
    }
}

/// An ordered list of transcript records; serializes to JSON lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    records: Vec<Value>,
}

impl Transcript {
    pub fn records(&self) -> &[Value] {
        &self.records
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&record.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, SimError> {
        let mut records = Vec::new();
        for (index, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: Value =
                serde_json::from_str(line).map_err(|e| SimError::MalformedTranscript {
                    line: index + 1,
                    message: e.to_string(),
                })?;
            records.push(value);
        }
        Ok(Transcript { records })
    }
}

/// Replaces the named point field of a wire message with `point + G`,
/// leaving everything else untouched.
pub fn inject_tamper(
    params: &PairingParams,
    message: &mut Value,
    field: TamperField,
) -> Result<(), SimError> {
    let key = field.json_key();
    let Some(slot) = message.get_mut(key) else {
        return Err(SimError::UnknownField(format!("{field:?}")));
    };
    let encoded = slot
        .as_str()
        .ok_or_else(|| SimError::UnknownField(format!("{field:?}")))?;
    let point = CurvePoint::decode(encoded, params.field())?;
    let shifted = params.curve().point_add(&point, params.generator())?;
    *slot = Value::String(shifted.encode());
    Ok(())
}

struct Runner {
    system: SystemParams,
    master: MasterKey,
    /// (holder name, share), sorted ascending by scalar id: delivery order.
    holders: Vec<(String, MasterShare)>,
    nodes: BTreeMap<String, NodeSecrets>,
    node_order: Vec<String>,
    revoked: RevocationList,
    pending_tampers: BTreeMap<usize, TamperField>,
    last_update_succeeded: BTreeMap<String, bool>,
    records: Vec<Value>,
    rng: ChaCha20Rng,
}

impl Runner {
    fn push(&mut self, sender: &str, receiver: &str, message: Value) -> usize {
        let step = self.records.len();
        self.records.push(json!({
            "step": step,
            "sender": sender,
            "receiver": receiver,
            "message": message,
        }));
        step
    }

    /// Applies a pending tamper to the message that is about to occupy
    /// `step`, then records and returns it as delivered.
    fn push_message(
        &mut self,
        sender: &str,
        receiver: &str,
        mut message: Value,
    ) -> Result<(usize, Value), SimError> {
        let step = self.records.len();
        if let Some(field) = self.pending_tampers.remove(&step) {
            inject_tamper(self.system.pairing(), &mut message, field)?;
        }
        let delivered = message.clone();
        let step = self.push(sender, receiver, message);
        Ok((step, delivered))
    }
}

/// Runs a validated scenario to completion and returns its transcript.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Transcript, SimError> {
    config.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let pairing = match &config.params {
        ParamSpec::Explicit { p, q, r } => PairingParams::from_parts(
            biguint_from_hex(p)?,
            biguint_from_hex(q)?,
            biguint_from_hex(r)?,
        )
        .map_err(|e| SimError::ConfigInvalid {
            field: "params".into(),
            message: e.to_string(),
        })?,
        ParamSpec::Generate { bits } => PairingParams::generate_with_rng(*bits, &mut rng)?,
    };
    let (system, master, shares) =
        keying::setup_with_params(pairing, config.threshold, &config.holders, &mut rng).map_err(
            |e| match e {
                KeyingError::HolderIdCollision(a, b) => SimError::ConfigInvalid {
                    field: "holders".into(),
                    message: format!("{a:?} and {b:?} collide under H2 at this q"),
                },
                other => SimError::Keying(other),
            },
        )?;

    let mut holders: Vec<(String, MasterShare)> =
        config.holders.iter().cloned().zip(shares).collect();
    holders.sort_by(|a, b| a.1.holder_id.value().cmp(b.1.holder_id.value()));

    let mut runner = Runner {
        system,
        master,
        holders,
        nodes: BTreeMap::new(),
        node_order: config.nodes.clone(),
        revoked: RevocationList::new(),
        pending_tampers: BTreeMap::new(),
        last_update_succeeded: BTreeMap::new(),
        records: Vec::new(),
        rng,
    };

    let header = system_params_message(&runner.system, &runner.holders, config);
    runner.push("dealer", "*", header);

    for node_id in &config.nodes {
        let node = keying::register_node(&runner.system, &runner.master, node_id, &mut runner.rng)?;
        let message = json!({
            "type": "node_registered",
            "id": node_id,
            "phase": node.phase,
            "q_a": node.identity_point.encode(),
            "pk": node.public_point.encode(),
            "pk_a": node.bound_public_key.encode(),
        });
        runner.push("dealer", node_id, message);
        runner.nodes.insert(node_id.clone(), node);
    }

    for event in &config.schedule {
        match event {
            ScheduleEvent::Revoke { id } => {
                runner.revoked.revoke(id);
                let message = json!({"type": "revoke", "id": id});
                runner.push("admin", "*", message);
            }
            ScheduleEvent::Tamper { msg_index, field } => {
                runner.pending_tampers.insert(*msg_index, *field);
            }
            ScheduleEvent::Request { id, phase } => {
                run_request(&mut runner, id, *phase)?;
            }
        }
    }

    for node_id in &runner.node_order.clone() {
        let node = &runner.nodes[node_id];
        let oracle = runner
            .master
            .derive_partial_key(&runner.system, &node.identity_point)
            == node.partial_key;
        let reconstructed = *runner.last_update_succeeded.get(node_id).unwrap_or(&false);
        let message = json!({
            "type": "node_outcome",
            "id": node_id,
            "reconstructed": reconstructed,
            "oracle_match": oracle,
        });
        runner.push("simnet", "*", message);
    }

    Ok(Transcript {
        records: runner.records,
    })
}

fn run_request(runner: &mut Runner, node_id: &str, phase: u64) -> Result<(), SimError> {
    runner.system.advance_phase(phase)?;
    let node = runner
        .nodes
        .get(node_id)
        .expect("validated node id")
        .clone();
    let (request, blinding) =
        keying::make_update_request(&runner.system, &node, phase, &mut runner.rng)?;
    let request_message = json!({
        "type": "update_request",
        "id_a": request.id,
        "phase": phase,
        "q_a": request.identity_point.encode(),
        "r": request.blinding_point.encode(),
        "pk": request.public_point.encode(),
        "pk_a": request.bound_public_key.encode(),
    });
    let (request_step, delivered) = runner.push_message(node_id, "*", request_message)?;
    let delivered_request = update_request_from_json(&delivered, &runner.system)?;

    let threshold = runner.system.policy().threshold();
    let mut verified: Vec<(FieldElement, CurvePoint)> = Vec::new();
    let holders = runner.holders.clone();
    for (holder_name, share) in &holders {
        // broadcast reaches non-revoked holders only
        if runner.revoked.contains(holder_name) {
            continue;
        }
        let response = keying::respond_update(
            &runner.system,
            share,
            &runner.revoked,
            &delivered_request,
            &mut runner.rng,
        );
        let response = match response {
            Ok(response) => response,
            Err(KeyingError::NodeRevoked) => {
                let message = json!({
                    "type": "verdict",
                    "about_step": request_step,
                    "code": "node_revoked",
                });
                runner.push(holder_name, node_id, message);
                continue;
            }
            Err(KeyingError::InvalidRequester) => {
                let message = json!({
                    "type": "verdict",
                    "about_step": request_step,
                    "code": "invalid_requester",
                });
                runner.push(holder_name, node_id, message);
                continue;
            }
            Err(other) => return Err(other.into()),
        };
        let response_message = json!({
            "type": "share_response",
            "holder_id": response.holder_id.to_hex(),
            "u": response.blinded_share.encode(),
            "v": response.ephemeral_point.encode(),
            "w": response.commitment.encode(),
        });
        let (response_step, delivered) =
            runner.push_message(holder_name, node_id, response_message)?;
        if verified.len() >= threshold {
            // quorum already collected; the response is recorded but the
            // requester no longer evaluates it
            continue;
        }
        let delivered_response = share_response_from_json(&delivered, &runner.system)?;
        // the requester verifies against its own Q_A, not the broadcast copy
        let contribution = keying::unblind(&runner.system, &blinding, &delivered_response)?;
        let accepted = verify_contribution(
            runner.system.pairing(),
            &request.identity_point,
            &contribution,
            &delivered_response.commitment,
        )
        .unwrap_or(false);
        let message = json!({
            "type": "verdict",
            "about_step": response_step,
            "code": if accepted { "accepted" } else { "illegal_share" },
            "m_a": contribution.encode(),
        });
        runner.push(node_id, holder_name, message);
        if accepted {
            verified.push((delivered_response.holder_id, contribution));
        }
    }

    if verified.len() == threshold {
        let mut node = node;
        keying::reconstruct_private_key(&runner.system, &mut node, phase, &verified)?;
        let oracle = runner
            .master
            .derive_partial_key(&runner.system, &node.identity_point)
            == node.partial_key;
        let message = json!({
            "type": "reconstruction",
            "id": node_id,
            "phase": phase,
            "contributors": verified.iter().map(|(id, _)| id.to_hex()).collect::<Vec<_>>(),
            "d_a": node.partial_key.encode(),
            "reconstructed": true,
            "oracle_match": oracle,
        });
        runner.push(node_id, "*", message);
        runner.nodes.insert(node_id.to_string(), node);
        runner
            .last_update_succeeded
            .insert(node_id.to_string(), true);
    } else {
        let message = json!({
            "type": "reconstruction",
            "id": node_id,
            "phase": phase,
            "reconstructed": false,
            "reason": "insufficient_shares",
            "oracle_match": false,
        });
        runner.push(node_id, "*", message);
        runner
            .last_update_succeeded
            .insert(node_id.to_string(), false);
    }
    Ok(())
}

fn system_params_message(
    system: &SystemParams,
    holders: &[(String, MasterShare)],
    config: &ScenarioConfig,
) -> Value {
    let pairing = system.pairing();
    json!({
        "type": "system_params",
        "p": biguint_to_hex(pairing.field().modulus()),
        "q": biguint_to_hex(pairing.subgroup_order()),
        "r": biguint_to_hex(pairing.aux_factor()),
        "curve": pairing.curve().encode(),
        "generator": pairing.generator().encode(),
        "p_pub": system.public_key().encode(),
        "threshold": system.policy().threshold(),
        "h1": keying::H1_SPEC,
        "h2": keying::H2_SPEC,
        "seed": config.seed,
        "holders": holders.iter().map(|(name, share)| json!({
            "name": name,
            "id": share.holder_id.to_hex(),
            "commitment": share.commitment.encode(),
        })).collect::<Vec<_>>(),
    })
}

fn field_str<'v>(message: &'v Value, key: &str) -> Result<&'v str, SimError> {
    message
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| SimError::MalformedTranscript {
            line: 0,
            message: format!("missing string field {key:?}"),
        })
}

fn update_request_from_json(
    message: &Value,
    system: &SystemParams,
) -> Result<UpdateRequest, SimError> {
    let field = system.pairing().field();
    Ok(UpdateRequest {
        id: field_str(message, "id_a")?.to_string(),
        identity_point: CurvePoint::decode(field_str(message, "q_a")?, field)?,
        blinding_point: CurvePoint::decode(field_str(message, "r")?, field)?,
        public_point: CurvePoint::decode(field_str(message, "pk")?, field)?,
        bound_public_key: CurvePoint::decode(field_str(message, "pk_a")?, field)?,
    })
}

fn share_response_from_json(
    message: &Value,
    system: &SystemParams,
) -> Result<ShareResponse, SimError> {
    let pairing = system.pairing();
    Ok(ShareResponse {
        holder_id: pairing
            .scalar_field()
            .element_from_hex(field_str(message, "holder_id")?)?,
        blinded_share: CurvePoint::decode(field_str(message, "u")?, pairing.field())?,
        ephemeral_point: CurvePoint::decode(field_str(message, "v")?, pairing.field())?,
        commitment: CurvePoint::decode(field_str(message, "w")?, pairing.field())?,
    })
}

/// Outcome of a replay run: how many recorded checks were re-verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayReport {
    pub records: usize,
    pub checks: usize,
}

struct RequestContext {
    step: usize,
    node: String,
    phase: u64,
    /// Q_A as the requester computed it (recomputed from id/phase, not the
    /// possibly tampered broadcast copy).
    own_identity_point: CurvePoint,
    /// recomputed Step-3 validity of the broadcast request
    valid: bool,
    accepted: Vec<(FieldElement, CurvePoint)>,
}

/// Re-verifies every recorded pairing check of a transcript: Step-3
/// requester validity against each holder verdict, Step-5 contribution
/// checks against accepted/illegal verdicts, revocation consistency, and
/// recorded reconstructions against a recomputed Lagrange combination.
pub fn verify_transcript(text: &str) -> Result<ReplayReport, SimError> {
    let transcript = Transcript::from_jsonl(text)?;
    let records = transcript.records();
    let mismatch = |step: usize, message: String| SimError::ReplayMismatch { step, message };
    let malformed = |message: String| SimError::MalformedTranscript { line: 0, message };

    let header = records
        .first()
        .and_then(|r| r.get("message"))
        .ok_or_else(|| malformed("empty transcript".into()))?;
    if field_str(header, "type")? != "system_params" {
        return Err(malformed("first record must be system_params".into()));
    }
    let pairing = PairingParams::from_parts(
        biguint_from_hex(field_str(header, "p")?)?,
        biguint_from_hex(field_str(header, "q")?)?,
        biguint_from_hex(field_str(header, "r")?)?,
    )?;
    let p_pub = CurvePoint::decode(field_str(header, "p_pub")?, pairing.field())?;
    let recorded_generator = CurvePoint::decode(field_str(header, "generator")?, pairing.field())?;
    if &recorded_generator != pairing.generator() {
        return Err(mismatch(0, "generator does not match parameters".into()));
    }
    let threshold = header
        .get("threshold")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("missing threshold".into()))? as usize;

    let mut checks = 0usize;
    let mut revoked: Vec<String> = Vec::new();
    let mut requests: BTreeMap<String, RequestContext> = BTreeMap::new();
    let mut responses: BTreeMap<usize, (String, ShareResponse)> = BTreeMap::new();

    for record in &records[1..] {
        let step = record.get("step").and_then(Value::as_u64).unwrap_or(0) as usize;
        let sender = field_str(record, "sender")?.to_string();
        let receiver = field_str(record, "receiver")?.to_string();
        let message = record
            .get("message")
            .ok_or_else(|| malformed(format!("record {step} has no message")))?;
        match field_str(message, "type")? {
            "revoke" => revoked.push(field_str(message, "id")?.to_string()),
            "update_request" => {
                let id = field_str(message, "id_a")?.to_string();
                let phase = message
                    .get("phase")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| malformed("request without phase".into()))?;
                let pk_a = CurvePoint::decode(field_str(message, "pk_a")?, pairing.field())?;
                let pk = CurvePoint::decode(field_str(message, "pk")?, pairing.field())?;
                let valid = (|| -> Result<bool, PairingError> {
                    let lhs = pairing.tate_pairing(&pk_a, pairing.generator())?;
                    let rhs = pairing.tate_pairing(&pk, &p_pub)?;
                    Ok(lhs == rhs)
                })()
                .unwrap_or(false);
                let mut hash_input = Vec::new();
                hash_input.extend_from_slice(id.as_bytes());
                hash_input.push(b'/');
                hash_input.extend_from_slice(phase.to_string().as_bytes());
                let own_identity_point = pairing.hash_to_subgroup(&hash_input)?;
                requests.insert(
                    sender.clone(),
                    RequestContext {
                        step,
                        node: id,
                        phase,
                        own_identity_point,
                        valid,
                        accepted: Vec::new(),
                    },
                );
            }
            "share_response" => {
                if revoked.contains(&receiver) {
                    return Err(mismatch(
                        step,
                        format!("revoked node {receiver:?} received a share response"),
                    ));
                }
                checks += 1;
                let holder_id = pairing
                    .scalar_field()
                    .element_from_hex(field_str(message, "holder_id")?)?;
                let response = ShareResponse {
                    holder_id,
                    blinded_share: CurvePoint::decode(field_str(message, "u")?, pairing.field())?,
                    ephemeral_point: CurvePoint::decode(field_str(message, "v")?, pairing.field())?,
                    commitment: CurvePoint::decode(field_str(message, "w")?, pairing.field())?,
                };
                responses.insert(step, (sender.clone(), response));
            }
            "verdict" => {
                let code = field_str(message, "code")?;
                let about = message
                    .get("about_step")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| malformed("verdict without about_step".into()))?
                    as usize;
                match code {
                    "node_revoked" => {
                        if !revoked.contains(&receiver) {
                            return Err(mismatch(
                                step,
                                format!("node_revoked verdict for unrevoked {receiver:?}"),
                            ));
                        }
                        checks += 1;
                    }
                    "invalid_requester" => {
                        let ctx = requests.get(&receiver).ok_or_else(|| {
                            mismatch(step, format!("verdict for unknown requester {receiver:?}"))
                        })?;
                        if ctx.step != about {
                            return Err(mismatch(step, "verdict references stale request".into()));
                        }
                        if ctx.valid {
                            return Err(mismatch(
                                step,
                                "invalid_requester verdict but the validity check passes".into(),
                            ));
                        }
                        checks += 1;
                    }
                    "accepted" | "illegal_share" => {
                        let ctx = requests.get_mut(&sender).ok_or_else(|| {
                            mismatch(step, format!("verdict from unknown requester {sender:?}"))
                        })?;
                        let (_, response) = responses.get(&about).ok_or_else(|| {
                            mismatch(step, format!("verdict references missing response {about}"))
                        })?;
                        let contribution =
                            CurvePoint::decode(field_str(message, "m_a")?, pairing.field())?;
                        let holds = verify_contribution(
                            &pairing,
                            &ctx.own_identity_point,
                            &contribution,
                            &response.commitment,
                        )
                        .unwrap_or(false);
                        if holds != (code == "accepted") {
                            return Err(mismatch(
                                step,
                                format!("verdict {code} contradicts the recomputed pairing check"),
                            ));
                        }
                        checks += 1;
                        if code == "accepted" {
                            ctx.accepted
                                .push((response.holder_id.clone(), contribution));
                        }
                    }
                    other => return Err(mismatch(step, format!("unknown verdict code {other:?}"))),
                }
            }
            "reconstruction" => {
                let reconstructed = message
                    .get("reconstructed")
                    .and_then(Value::as_bool)
                    .unwrap_or(false);
                if !reconstructed {
                    continue;
                }
                let ctx = requests.get(&sender).ok_or_else(|| {
                    mismatch(
                        step,
                        format!("reconstruction without request from {sender:?}"),
                    )
                })?;
                if ctx.accepted.len() != threshold {
                    return Err(mismatch(
                        step,
                        format!(
                            "reconstruction with {} accepted contributions, threshold {}",
                            ctx.accepted.len(),
                            threshold
                        ),
                    ));
                }
                let recorded = CurvePoint::decode(field_str(message, "d_a")?, pairing.field())?;
                let ids: Vec<&FieldElement> = ctx.accepted.iter().map(|(id, _)| id).collect();
                let lambdas = lagrange_at_zero(&ids)?;
                let mut combined = CurvePoint::Infinity;
                for ((_, m), lambda) in ctx.accepted.iter().zip(&lambdas) {
                    let term = pairing.curve().scalar_mul(lambda.value(), m)?;
                    combined = pairing.curve().point_add(&combined, &term)?;
                }
                if combined != recorded {
                    return Err(mismatch(
                        step,
                        "recorded partial key differs from the recomputed combination".into(),
                    ));
                }
                let _ = ctx.phase;
                let _ = &ctx.node;
                checks += 1;
            }
            _ => {}
        }
    }
    Ok(ReplayReport {
        records: records.len(),
        checks,
    })
}
