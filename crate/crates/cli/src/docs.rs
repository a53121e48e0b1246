//! Canonical JSON documents for everything the tool reads and writes.
//!
//! Every file is one top-level object: a `schema_version`, a `scheme` tag,
//! and a `payload` whose `object` field names its shape. Documents that
//! must not be shared carry `"private": true`. Unbounded integers are
//! decimal strings; counts and indices are plain JSON numbers. Keys are
//! emitted in sorted order with two-space indentation and one trailing
//! newline, so equal data always serializes to identical bytes.

use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use mtss_core::{
    AttackReport, DealerTranscript, HfCrossInfo, HfDeal, HfParameters, HfParticipant, HfShare,
    HfVariant, LevelStructure, MtssShare, PrimeSequence, PublicDelta, RsaGroupKey,
};

pub const SCHEMA_VERSION: u64 = 1;

/// The scheme a document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Mignotte,
    AsmuthBloom,
    MtssDisjunctive,
    MtssConjunctive,
    HarnFuyouOriginal,
    HarnFuyouFixed,
    RsaMtss,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Mignotte => "mignotte",
            Scheme::AsmuthBloom => "asmuth_bloom",
            Scheme::MtssDisjunctive => "mtss_disjunctive",
            Scheme::MtssConjunctive => "mtss_conjunctive",
            Scheme::HarnFuyouOriginal => "harn_fuyou_original",
            Scheme::HarnFuyouFixed => "harn_fuyou_fixed",
            Scheme::RsaMtss => "rsa_mtss",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "mignotte" => Scheme::Mignotte,
            "asmuth_bloom" => Scheme::AsmuthBloom,
            "mtss_disjunctive" => Scheme::MtssDisjunctive,
            "mtss_conjunctive" => Scheme::MtssConjunctive,
            "harn_fuyou_original" => Scheme::HarnFuyouOriginal,
            "harn_fuyou_fixed" => Scheme::HarnFuyouFixed,
            "rsa_mtss" => Scheme::RsaMtss,
            _ => return None,
        })
    }
}

/// Failures the binary turns into exit codes: domain errors come from the
/// library and exit with 1, everything malformed about inputs exits with 2.
#[derive(Debug)]
pub enum CliError {
    Domain(mtss_core::Error),
    Malformed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<mtss_core::Error> for CliError {
    fn from(e: mtss_core::Error) -> Self {
        CliError::Domain(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

/// Serializes one document to its canonical byte form.
pub fn render(scheme: Scheme, private: bool, payload: Value) -> String {
    let mut top = Map::new();
    top.insert("schema_version".into(), json!(SCHEMA_VERSION));
    top.insert("scheme".into(), json!(scheme.as_str()));
    if private {
        top.insert("private".into(), json!(true));
    }
    top.insert("payload".into(), payload);
    let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("valid json");
    out.push('\n');
    out
}

/// Parses a document, checking the envelope.
pub fn parse(text: &str) -> CliResult<(Scheme, bool, Value)> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| malformed("document is not an object"))?;
    let version = obj
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("missing schema_version"))?;
    if version != SCHEMA_VERSION {
        return Err(malformed(format!("unsupported schema_version {version}")));
    }
    let scheme = obj
        .get("scheme")
        .and_then(Value::as_str)
        .and_then(Scheme::parse)
        .ok_or_else(|| malformed("missing or unknown scheme"))?;
    let private = obj.get("private").and_then(Value::as_bool).unwrap_or(false);
    let payload = obj
        .get("payload")
        .cloned()
        .ok_or_else(|| malformed("missing payload"))?;
    Ok((scheme, private, payload))
}

pub fn big(n: &BigUint) -> Value {
    Value::String(n.to_str_radix(10))
}

pub fn parse_big(s: &str) -> CliResult<BigUint> {
    s.parse::<BigUint>()
        .map_err(|_| malformed(format!("not a decimal integer: {s:?}")))
}

fn field<'v>(payload: &'v Value, name: &str) -> CliResult<&'v Value> {
    payload
        .get(name)
        .ok_or_else(|| malformed(format!("missing field {name:?}")))
}

pub fn big_field(payload: &Value, name: &str) -> CliResult<BigUint> {
    let raw = field(payload, name)?
        .as_str()
        .ok_or_else(|| malformed(format!("field {name:?} must be a decimal string")))?;
    parse_big(raw)
}

pub fn usize_field(payload: &Value, name: &str) -> CliResult<usize> {
    field(payload, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| malformed(format!("field {name:?} must be a number")))
}

fn array_field<'v>(payload: &'v Value, name: &str) -> CliResult<&'v [Value]> {
    field(payload, name)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| malformed(format!("field {name:?} must be an array")))
}

pub fn big_list_field(payload: &Value, name: &str) -> CliResult<Vec<BigUint>> {
    array_field(payload, name)?
        .iter()
        .map(|v| {
            v.as_str()
                .ok_or_else(|| malformed(format!("field {name:?} must hold decimal strings")))
                .and_then(parse_big)
        })
        .collect()
}

pub fn usize_list_field(payload: &Value, name: &str) -> CliResult<Vec<usize>> {
    array_field(payload, name)?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| malformed(format!("field {name:?} must hold numbers")))
        })
        .collect()
}

fn expect_object(payload: &Value, object: &str) -> CliResult<()> {
    let got = field(payload, "object")?.as_str().unwrap_or_default();
    if got != object {
        return Err(malformed(format!("expected a {object:?} payload, found {got:?}")));
    }
    Ok(())
}

pub fn sequence_payload(seq: &PrimeSequence, kind: &str, threshold: Option<usize>) -> Value {
    let mut payload = json!({
        "object": "prime_sequence",
        "kind": kind,
        "p0": big(seq.p0()),
        "primes": seq.primes().iter().map(big).collect::<Vec<_>>(),
    });
    if let Some(t) = threshold {
        payload["threshold"] = json!(t);
    }
    payload
}

pub fn read_sequence(payload: &Value) -> CliResult<PrimeSequence> {
    expect_object(payload, "prime_sequence")?;
    let p0 = big_field(payload, "p0")?;
    let primes = big_list_field(payload, "primes")?;
    Ok(PrimeSequence::new(p0, primes)?)
}

fn delta_value(d: &PublicDelta) -> Value {
    json!({
        "participant": d.participant,
        "target_level": d.target_level,
        "value": big(&d.value),
    })
}

fn read_deltas(payload: &Value) -> CliResult<Vec<PublicDelta>> {
    array_field(payload, "deltas")?
        .iter()
        .map(|v| {
            Ok(PublicDelta {
                participant: usize_field(v, "participant")?,
                target_level: usize_field(v, "target_level")?,
                value: big_field(v, "value")?,
            })
        })
        .collect()
}

/// The public record of a multilevel dealing: structure, moduli, bounds,
/// and deltas. Share values appear only in the per-participant files.
pub fn transcript_payload(
    structure: &LevelStructure,
    sequence: &PrimeSequence,
    level_bounds: &[BigUint],
    deltas: &[PublicDelta],
) -> Value {
    json!({
        "object": "transcript",
        "p0": big(sequence.p0()),
        "primes": sequence.primes().iter().map(big).collect::<Vec<_>>(),
        "sizes": structure.sizes(),
        "thresholds": structure.thresholds(),
        "level_bounds": level_bounds.iter().map(big).collect::<Vec<_>>(),
        "deltas": deltas.iter().map(delta_value).collect::<Vec<_>>(),
    })
}

pub struct TranscriptDoc {
    pub structure: LevelStructure,
    pub sequence: PrimeSequence,
    pub deltas: Vec<PublicDelta>,
}

pub fn read_transcript(payload: &Value) -> CliResult<TranscriptDoc> {
    expect_object(payload, "transcript")?;
    let sizes = usize_list_field(payload, "sizes")?;
    let thresholds = usize_list_field(payload, "thresholds")?;
    let structure = LevelStructure::contiguous(&sizes, &thresholds)?;
    let p0 = big_field(payload, "p0")?;
    let primes = big_list_field(payload, "primes")?;
    let sequence = PrimeSequence::new(p0, primes)?;
    let deltas = read_deltas(payload)?;
    Ok(TranscriptDoc { structure, sequence, deltas })
}

pub fn share_payload(share: &MtssShare) -> Value {
    json!({
        "object": "share",
        "participant": share.participant,
        "home_level": share.home_level,
        "modulus": big(&share.modulus),
        "value": big(&share.value),
    })
}

pub fn read_share(payload: &Value) -> CliResult<MtssShare> {
    expect_object(payload, "share")?;
    Ok(MtssShare {
        participant: usize_field(payload, "participant")?,
        home_level: usize_field(payload, "home_level")?,
        modulus: big_field(payload, "modulus")?,
        value: big_field(payload, "value")?,
    })
}

pub fn secret_payload(value: &BigUint) -> Value {
    json!({ "object": "secret", "value": big(value) })
}

pub fn check_payload(kind: &str, threshold: Option<usize>, holds: bool) -> Value {
    let mut payload = json!({ "object": "check", "kind": kind, "holds": holds });
    if let Some(t) = threshold {
        payload["threshold"] = json!(t);
    }
    payload
}

/// Public record of a dealing under the audited scheme: parameters plus
/// every published cross value.
pub fn hf_transcript_payload(deal: &HfDeal) -> Value {
    let p = &deal.parameters;
    json!({
        "object": "transcript",
        "p0": big(&p.p0),
        "sizes": p.sizes,
        "thresholds": p.thresholds,
        "level_primes": p
            .level_primes
            .iter()
            .map(|level| level.iter().map(big).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "cross": deal
            .cross
            .iter()
            .map(|c| {
                json!({
                    "level": c.participant.level,
                    "index": c.participant.index,
                    "target_level": c.target_level,
                    "modulus": big(&c.modulus),
                    "delta": big(&c.delta),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn hf_scheme(variant: HfVariant) -> Scheme {
    match variant {
        HfVariant::Original => Scheme::HarnFuyouOriginal,
        HfVariant::Fixed => Scheme::HarnFuyouFixed,
    }
}

pub fn read_hf_transcript(
    scheme: Scheme,
    payload: &Value,
) -> CliResult<(HfParameters, Vec<HfCrossInfo>)> {
    expect_object(payload, "transcript")?;
    let variant = match scheme {
        Scheme::HarnFuyouOriginal => HfVariant::Original,
        Scheme::HarnFuyouFixed => HfVariant::Fixed,
        _ => return Err(malformed("document does not belong to the audited scheme")),
    };
    let level_primes = array_field(payload, "level_primes")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_array()
                .ok_or_else(|| malformed(format!("level_primes[{i}] must be an array")))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .ok_or_else(|| malformed("level_primes must hold decimal strings"))
                        .and_then(parse_big)
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let params = HfParameters {
        p0: big_field(payload, "p0")?,
        variant,
        sizes: usize_list_field(payload, "sizes")?,
        thresholds: usize_list_field(payload, "thresholds")?,
        level_primes,
    };
    let cross = array_field(payload, "cross")?
        .iter()
        .map(|v| {
            Ok(HfCrossInfo {
                participant: HfParticipant {
                    level: usize_field(v, "level")?,
                    index: usize_field(v, "index")?,
                },
                target_level: usize_field(v, "target_level")?,
                modulus: big_field(v, "modulus")?,
                delta: big_field(v, "delta")?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((params, cross))
}

pub fn hf_share_payload(share: &HfShare) -> Value {
    json!({
        "object": "share",
        "level": share.participant.level,
        "index": share.participant.index,
        "modulus": big(&share.modulus),
        "value": big(&share.value),
    })
}

pub fn read_hf_share(payload: &Value) -> CliResult<HfShare> {
    expect_object(payload, "share")?;
    Ok(HfShare {
        participant: HfParticipant {
            level: usize_field(payload, "level")?,
            index: usize_field(payload, "index")?,
        },
        modulus: big_field(payload, "modulus")?,
        value: big_field(payload, "value")?,
    })
}

pub fn attack_payload(report: &AttackReport) -> Value {
    json!({
        "object": "attack_report",
        "base": big(&report.base),
        "step": big(&report.step),
        "k_min": big(&report.k_min),
        "k_max": big(&report.k_max),
        "publics": report
            .publics
            .iter()
            .map(|p| {
                json!({
                    "cross_modulus": big(&p.cross_modulus),
                    "delta": big(&p.delta),
                    "own_modulus": big(&p.own_modulus),
                })
            })
            .collect::<Vec<_>>(),
        "candidates": report
            .candidates
            .iter()
            .map(|c| {
                json!({
                    "value": big(&c.value),
                    "residues": c
                        .residues
                        .iter()
                        .map(|r| json!({ "value": big(&r.value), "in_range": r.in_range }))
                        .collect::<Vec<_>>(),
                    "feasible": c.feasible,
                    "secret": big(&c.secret),
                })
            })
            .collect::<Vec<_>>(),
        "survivors": report.survivors.iter().map(big).collect::<Vec<_>>(),
        "secrets": report.secrets.iter().map(big).collect::<Vec<_>>(),
    })
}

/// The signing group's record: the RSA key plus the full dealing
/// transcript of the exponent shares.
pub fn rsa_public_payload(key: &RsaGroupKey, transcript: &DealerTranscript) -> Value {
    json!({
        "object": "rsa_public",
        "modulus": big(&key.modulus),
        "exponent": big(&key.exponent),
        "p0": big(transcript.sequence.p0()),
        "primes": transcript.sequence.primes().iter().map(big).collect::<Vec<_>>(),
        "sizes": transcript.structure.sizes(),
        "thresholds": transcript.structure.thresholds(),
        "level_bounds": transcript.level_bounds.iter().map(big).collect::<Vec<_>>(),
        "deltas": transcript.deltas.iter().map(delta_value).collect::<Vec<_>>(),
    })
}

pub struct RsaPublicDoc {
    pub key: RsaGroupKey,
    pub structure: LevelStructure,
    pub sequence: PrimeSequence,
    pub deltas: Vec<PublicDelta>,
}

pub fn read_rsa_public(payload: &Value) -> CliResult<RsaPublicDoc> {
    expect_object(payload, "rsa_public")?;
    let key = RsaGroupKey {
        modulus: big_field(payload, "modulus")?,
        exponent: big_field(payload, "exponent")?,
    };
    let sizes = usize_list_field(payload, "sizes")?;
    let thresholds = usize_list_field(payload, "thresholds")?;
    let structure = LevelStructure::contiguous(&sizes, &thresholds)?;
    let sequence = PrimeSequence::new(big_field(payload, "p0")?, big_list_field(payload, "primes")?)?;
    let deltas = read_deltas(payload)?;
    Ok(RsaPublicDoc { key, structure, sequence, deltas })
}

pub fn fragment_payload(object: &str, participant: usize, value: &BigUint) -> Value {
    json!({ "object": object, "participant": participant, "value": big(value) })
}

pub fn read_fragment(payload: &Value, object: &str) -> CliResult<(usize, BigUint)> {
    expect_object(payload, object)?;
    Ok((usize_field(payload, "participant")?, big_field(payload, "value")?))
}

pub fn signature_payload(value: &BigUint) -> Value {
    json!({ "object": "signature", "value": big(value) })
}

pub fn read_signature(payload: &Value) -> CliResult<BigUint> {
    expect_object(payload, "signature")?;
    big_field(payload, "value")
}

pub fn verdict_payload(valid: bool) -> Value {
    json!({ "object": "verdict", "valid": valid })
}
