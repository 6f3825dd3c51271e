use serde::Serialize;
use sha2::{Digest, Sha256};

/// What the headline `value` of a [`Report`] measures, and hence how it is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    /// Exact kernel or pathwise residual: pass iff `|value − target| ≤ tolerance`.
    ExactResidual,
    /// Monte Carlo z-score (target 0): pass iff `|value − target| ≤ tolerance`.
    McZScore,
    /// Ratio of two moments: pass iff `|value − target| ≤ tolerance`.
    Ratio,
    /// Fitted log–log slope, a lower bound: pass iff `value ≥ target − tolerance`.
    Slope,
}

impl StatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::ExactResidual => "exact-residual",
            StatKind::McZScore => "mc-z-score",
            StatKind::Ratio => "ratio",
            StatKind::Slope => "slope",
        }
    }

    pub fn passes(self, value: f64, target: f64, tolerance: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        match self {
            StatKind::Slope => value >= target - tolerance,
            _ => (value - target).abs() <= tolerance,
        }
    }
}

/// A secondary named number attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub name: String,
    pub value: f64,
}

/// Machine-readable outcome of one check.
///
/// `pass` is the kind rule applied to the headline value, conjoined with any
/// side conditions the check imposes (those are listed in `details` with a
/// `_ok` suffix, 1 for satisfied).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check_id: String,
    pub inputs_digest: String,
    pub kind: StatKind,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub stderr: Option<f64>,
    pub n_samples: u64,
    pub seed: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    pub details: Vec<Detail>,
}

impl Report {
    pub fn new(check_id: &str, kind: StatKind, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            check_id: check_id.to_string(),
            inputs_digest: String::new(),
            kind,
            value,
            target,
            tolerance,
            stderr: None,
            n_samples: 0,
            seed: 0,
            pass: kind.passes(value, target, tolerance),
            wall_ms: None,
            details: Vec::new(),
        }
    }

    pub fn with_samples(mut self, n_samples: u64, seed: u64) -> Self {
        self.n_samples = n_samples;
        self.seed = seed;
        self
    }

    pub fn with_stderr(mut self, stderr: f64) -> Self {
        self.stderr = Some(stderr);
        self
    }

    /// Digest of a canonical description of the inputs.
    pub fn with_inputs(mut self, description: &str) -> Self {
        self.inputs_digest = digest(description);
        self
    }

    pub fn detail(mut self, name: impl Into<String>, value: f64) -> Self {
        self.details.push(Detail { name: name.into(), value });
        self
    }

    /// Record a side condition; a false one fails the report.
    pub fn require(mut self, name: &str, ok: bool) -> Self {
        self.pass &= ok;
        self.details.push(Detail { name: format!("{name}_ok"), value: if ok { 1.0 } else { 0.0 } });
        self
    }

    pub fn detail_value(&self, name: &str) -> Option<f64> {
        self.details.iter().find(|d| d.name == name).map(|d| d.value)
    }
}

/// Hex SHA-256 of a string.
pub fn digest(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}
