//! JSON certificates and run reports. Integers are written as decimal
//! strings; key order is fixed so identical runs give identical bytes.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::field::SpaceDesc;
use crate::guards::Guards;
use crate::hadamard::{GhReport, ProductReport, ProductRoute};
use crate::partitions::{check_bent_partition_direct, BentPartitionCertificate, DirectReport, HarnessReport, PartitionSpec};
use crate::pds::{PdsCertificate, Typing};
use crate::scheme::{AmorphyEvidence, SchemeCertificate, TensorMethod};
use crate::vdb::VdbCertificate;
use crate::walsh::WalshSpectrum;

pub const SCHEMA: u32 = 1;

pub fn int(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn ints<T: ToString>(v: impl IntoIterator<Item = T>) -> Value {
    Value::Array(v.into_iter().map(int).collect())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn guards_json(g: &Guards) -> Value {
    json!({
        "override_shift": int(g.shift()),
        "naive_walsh": int(g.naive_walsh),
        "fast_walsh": int(g.fast_walsh),
        "brute_force": int(g.brute_force),
        "partition_assignments": int(g.partition_assignments),
        "partition_work": int(g.partition_work),
        "materialize": int(g.materialize),
        "fusion_samples": int(g.fusion_samples),
    })
}

pub fn bent_json(spec: &WalshSpectrum) -> Value {
    json!({
        "bent": spec.bent,
        "weakly_regular": spec.weakly_regular(),
        "regular": spec.regular(),
        "eps": spec.global_eps.map(|e| e.as_str()),
        "walsh_at_zero": spec.value(0).to_string(),
        "dual": spec.dual.as_ref().map(|d| ints(d.values.iter())),
    })
}

pub fn vdb_json(c: &VdbCertificate) -> Value {
    json!({
        "is_vectorial_bent": c.is_vectorial_bent,
        "is_vectorial_dual_bent": c.is_vectorial_dual_bent,
        "sigma": c.sigma.as_ref().map(|s| ints(s.iter())),
        "sigma_is_identity": c.sigma.as_ref().map(|s| s.iter().enumerate().all(|(i, &v)| i as u32 == v)),
        "condition_a": c.condition_a,
        "eps": c.eps.map(|e| e.as_str()),
        "component_eps": c.component_eps.iter().map(|e| e.map(|t| t.as_str())).collect::<Vec<_>>(),
    })
}

fn typing_json(t: &Typing) -> Value {
    match t {
        Typing::Latin { n, s } | Typing::NegativeLatin { n, s } => json!({"kind": t.name(), "n": int(n), "s": int(s)}),
        Typing::None => json!({"kind": "none"}),
    }
}

pub fn pds_json(c: &Option<PdsCertificate>) -> Value {
    match c {
        None => json!({"is_pds": false}),
        Some(c) => json!({
            "is_pds": true,
            "v": int(c.v), "k": int(c.k), "lambda": int(c.lambda), "mu": int(c.mu),
            "regular": c.regular,
            "typing": typing_json(&c.typing),
        }),
    }
}

pub fn scheme_json(space: &SpaceDesc, c: &SchemeCertificate, amorphy: Option<&AmorphyEvidence>) -> Value {
    json!({
        "space": space.header(),
        "classes": c.classes.iter().map(|cl| ints(cl.iter())).collect::<Vec<_>>(),
        "tensor": ints(c.tensor.iter()),
        "is_scheme": c.is_scheme,
        "symmetric": c.symmetric,
        "method": match c.method { TensorMethod::Direct => "direct", TensorMethod::Transform => "transform" },
        "amorphic_evidence": amorphy.map(|a| json!({
            "pds_typing_uniform": a.pds_typing_uniform,
            "typing": a.typing,
            "fusion_samples": int(a.fusion_samples),
            "fusion_samples_passed": int(a.fusion_samples_passed),
            "seed": int(a.seed),
        })),
    })
}

/// Space and classes from a scheme certificate.
pub fn parse_scheme_json(v: &Value) -> Result<(SpaceDesc, Vec<Vec<u32>>, Vec<i64>)> {
    let bad = |m: &str| Error::Invalid(format!("scheme certificate: {m}"));
    let space = SpaceDesc::parse_header(v["space"].as_str().ok_or_else(|| bad("missing space"))?, 1)?;
    let num = |x: &Value| -> Result<i64> { x.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("integers must be decimal strings")) };
    let classes = v["classes"].as_array().ok_or_else(|| bad("missing classes"))?;
    let mut out = Vec::with_capacity(classes.len());
    for c in classes {
        let pts = c.as_array().ok_or_else(|| bad("class must be a list"))?;
        out.push(pts.iter().map(|x| num(x).map(|n| n as u32)).collect::<Result<Vec<u32>>>()?);
    }
    let tensor = v["tensor"].as_array().ok_or_else(|| bad("missing tensor"))?.iter().map(num).collect::<Result<Vec<i64>>>()?;
    Ok((space, out, tensor))
}

pub fn code_json(c: &CodeSpec, scalar_closed: bool) -> Value {
    let dist: Map<String, Value> = c.distribution.iter().map(|(w, n)| (w.to_string(), int(n))).collect();
    json!({
        "length": int(c.length),
        "dim": int(c.dim),
        "rank": int(c.rank),
        "scalar_closed": scalar_closed,
        "two_weight": c.is_two_weight(),
        "weights": ints(c.nonzero_weights()),
        "distribution": dist,
    })
}

pub fn gh_json(c: u32, r: &GhReport) -> Value {
    json!({
        "c": int(c),
        "generalized_hadamard": r.generalized_hadamard,
        "bent": r.bent,
        "direct_checked": r.direct_checked,
    })
}

pub fn product_json(r: &ProductReport) -> Value {
    json!({
        "c": int(r.c), "d": int(r.d), "target": int(r.target),
        "holds": r.holds,
        "route": match r.route { ProductRoute::Walsh => "walsh", ProductRoute::Correlation => "correlation" },
        "matrix_checked": r.matrix_checked,
    })
}

pub fn partition_json(c: &BentPartitionCertificate) -> Value {
    json!({
        "part_sizes": ints(c.cardinality.sizes.iter()),
        "cardinality_ok": c.cardinality.holds,
        "exceptional_part": c.cardinality.exceptional.map(int),
        "empty_parts": ints(c.cardinality.empty_parts.iter()),
        "is_bent_partition": c.is_bent_partition,
        "two_value_pattern": c.two_value_pattern,
        "spectrum": ints(c.spectrum.iter()),
        "branch_set_size": c.branch_set.as_ref().map(|s| int(s.len())),
    })
}

pub fn direct_json(r: &DirectReport) -> Value {
    json!({
        "is_bent_partition": r.is_bent_partition,
        "assignments": int(r.assignments),
        "counterexample": r.counterexample.map(int),
    })
}

pub const THEOREM_BACKED: &str = "theorem-backed, not definitionally re-verified";

/// The definitional bent-partition check, or the theorem-backed status when
/// it is past the guards. Returns (passed, detail).
pub fn definitional_json(g: &PartitionSpec) -> Result<(bool, Value)> {
    match check_bent_partition_direct(g) {
        Ok(d) => Ok((d.is_bent_partition, direct_json(&d))),
        Err(e @ Error::Guard { .. }) => Ok((true, json!({"status": THEOREM_BACKED, "reason": e.to_string()}))),
        Err(e) => Err(e),
    }
}

pub fn harness_json(r: &HarnessReport) -> Value {
    json!({
        "statements": r.statements,
        "all_true": r.all_true(),
        "consistent": r.consistent(),
        "eps": r.eps.map(int),
        "classes": int(r.classes),
        "notes": r.notes,
    })
}

/// One named check inside a run.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Check { name: name.into(), passed, detail }
    }
    /// A failed check carrying an error message.
    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check { name: name.into(), passed: false, detail: json!({"error": err.to_string()}) }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        RunReport { command: command.into(), inputs: Vec::new(), seed, checks: Vec::new() }
    }
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
    pub fn add_input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.push((name.into(), sha256_hex(bytes)));
    }
    pub fn extend(&mut self, other: RunReport) {
        self.inputs.extend(other.inputs);
        self.checks.extend(other.checks);
    }
    pub fn to_json(&self) -> Value {
        json!({
            "schema": int(SCHEMA),
            "command": self.command,
            "inputs": self.inputs.iter().map(|(n, h)| json!({"name": n, "sha256": h})).collect::<Vec<_>>(),
            "seed": int(self.seed),
            "guards": guards_json(Guards::get()),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }
    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("[{}] {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
        }
        s
    }
}
