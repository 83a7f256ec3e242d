use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Outcome of one subcommand. Rationals are in their canonical text form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the canonical JSON of everything the result depends on.
    pub inputs_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_product: Option<String>,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

pub fn digest(inputs: &Value) -> String {
    hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
}

impl Report {
    pub fn new(command: &str, inputs: &Value) -> Report {
        Report {
            command: command.to_string(),
            inputs_digest: digest(inputs),
            lhs: None,
            rhs: None,
            invariant: None,
            det_product: None,
            verdict: false,
            witness: None,
            term_count: None,
            nodes: None,
            notes: Vec::new(),
            elapsed_us: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\ninputs: {}\n", self.command, self.inputs_digest);
        let fields = [
            ("lhs", &self.lhs),
            ("rhs", &self.rhs),
            ("invariant", &self.invariant),
            ("det product", &self.det_product),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                out += &format!("{name}: {v}\n");
            }
        }
        if let Some(t) = self.term_count {
            out += &format!("terms: {t}\n");
        }
        if let Some(n) = self.nodes {
            out += &format!("nodes: {n}\n");
        }
        if let Some(w) = &self.witness {
            out += &format!("witness: {w}\n");
        }
        for note in &self.notes {
            out += &format!("note: {note}\n");
        }
        if let Some(us) = self.elapsed_us {
            out += &format!("elapsed: {:.3} s\n", us as f64 / 1e6);
        }
        out += if self.verdict { "verdict: pass\n" } else { "verdict: fail\n" };
        out
    }
}
