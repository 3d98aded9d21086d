//! Deterministic machine-readable reports.
//!
//! The JSON report is byte-identical across reruns with the same inputs and
//! seed: certificates and dimension tables are emitted in a fixed order and
//! wall-clock timings go to the human summary only, never into the JSON.

use cychom_core::CertificateSet;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Debug, Serialize)]
pub struct CertEntry {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub certificates: Vec<CertEntry>,
    pub dims: BTreeMap<String, Vec<usize>>,
}

impl Report {
    pub fn new(command: &str, digest: String, field: String, seed: Option<u64>) -> Self {
        Report {
            command: command.to_string(),
            inputs_digest: digest,
            field,
            seed,
            certificates: Vec::new(),
            dims: BTreeMap::new(),
        }
    }

    pub fn absorb(&mut self, certs: &CertificateSet) {
        for c in &certs.items {
            self.certificates.push(CertEntry {
                name: c.name.clone(),
                pass: c.pass,
                witness: if c.pass { None } else { c.witness.clone() },
            });
        }
    }

    pub fn push(&mut self, name: &str, pass: bool, witness: Option<String>) {
        self.certificates.push(CertEntry {
            name: name.to_string(),
            pass,
            witness: if pass { None } else { witness },
        });
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    /// Human summary: one line per certificate plus the dims tables.
    pub fn summary(&self, elapsed_ms: u128) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} (field {}{})\n",
            self.command,
            self.field,
            self.seed.map(|s| format!(", seed {s}")).unwrap_or_default()
        ));
        for c in &self.certificates {
            if c.pass {
                out.push_str(&format!("  [pass] {}\n", c.name));
            } else {
                out.push_str(&format!(
                    "  [FAIL] {} ({})\n",
                    c.name,
                    c.witness.as_deref().unwrap_or("no witness")
                ));
            }
        }
        for (k, v) in &self.dims {
            out.push_str(&format!("  {k}: {v:?}\n"));
        }
        let n_pass = self.certificates.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "  {}/{} certificates pass, {elapsed_ms} ms\n",
            n_pass,
            self.certificates.len()
        ));
        out
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

pub fn digest_args(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    format!("{:x}", h.finalize())
}
