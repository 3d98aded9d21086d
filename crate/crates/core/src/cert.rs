//! Exact-identity certificates.
//!
//! Every homotopy lemma and character construction in this crate re-verifies
//! its defining identities at runtime. A [`Certificate`] records one such
//! identity check; a failing certificate carries a witness locating the first
//! offending coordinate so that a wrong sign convention cannot pass silently.

use std::fmt;

#[derive(Debug, Clone)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Certificate {
    pub fn pass(name: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    pub fn of(name: impl Into<String>, pass: bool, witness: impl Into<String>) -> Self {
        if pass {
            Certificate::pass(name)
        } else {
            Certificate::fail(name, witness)
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.pass, &self.witness) {
            (true, _) => write!(f, "[pass] {}", self.name),
            (false, Some(w)) => write!(f, "[FAIL] {} ({})", self.name, w),
            (false, None) => write!(f, "[FAIL] {}", self.name),
        }
    }
}

/// An ordered collection of certificates from one construction.
#[derive(Debug, Clone, Default)]
pub struct CertificateSet {
    pub items: Vec<Certificate>,
}

impl CertificateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Certificate) {
        self.items.push(c);
    }

    pub fn extend(&mut self, other: CertificateSet) {
        self.items.extend(other.items);
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Certificate> {
        self.items.iter().find(|c| !c.pass)
    }

    /// Panic with the first failing certificate; used by tests.
    pub fn assert_all(&self) {
        if let Some(c) = self.first_failure() {
            panic!("certificate failed: {c}");
        }
    }
}

impl fmt::Display for CertificateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.items {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
