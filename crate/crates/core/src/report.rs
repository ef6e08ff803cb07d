//! Machine-readable verification records. Every claim carries what was
//! claimed, what was computed and the resulting verdict.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Informational: computed and recorded, not asserted.
    Recorded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub claimed: Value,
    pub computed: Value,
    pub verdict: ClaimStatus,
}

impl Claim {
    /// Passes iff `computed` serializes to the same JSON as `claimed`.
    pub fn check(name: &str, claimed: impl Serialize, computed: impl Serialize) -> Self {
        let claimed = to_value(claimed);
        let computed = to_value(computed);
        let verdict = if claimed == computed {
            ClaimStatus::Pass
        } else {
            ClaimStatus::Fail
        };
        Self {
            name: name.into(),
            claimed,
            computed,
            verdict,
        }
    }

    pub fn recorded(name: &str, claimed: impl Serialize, computed: impl Serialize) -> Self {
        Self {
            name: name.into(),
            claimed: to_value(claimed),
            computed: to_value(computed),
            verdict: ClaimStatus::Recorded,
        }
    }

    pub fn failed(name: &str, claimed: impl Serialize, computed: impl Serialize) -> Self {
        Self {
            verdict: ClaimStatus::Fail,
            ..Self::recorded(name, claimed, computed)
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != ClaimStatus::Fail
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize to JSON")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: String,
    pub parameters: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            parameters: BTreeMap::new(),
            seed: None,
            claims: Vec::new(),
            flags: Vec::new(),
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn push(&mut self, claim: Claim) {
        self.passed &= claim.passed();
        self.claims.push(claim);
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes to JSON")
    }
}

/// Hex SHA-256 of the canonical graph JSON.
pub fn graph_hash(g: &Graph) -> String {
    hex::encode(Sha256::digest(g.to_json().as_bytes()))
}
