/// One logged iteration or epoch.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceRecord {
    pub iter: u64,
    pub objective: Option<f64>,
    pub suboptimality: Option<f64>,
    /// Constraint value `g(x)` (or its running sum for online runs).
    pub violation: Option<f64>,
    pub dual: Option<f64>,
    pub egv: Option<f64>,
    pub calls_full: u64,
    pub calls_stochastic: u64,
    pub variance_sgd: Option<f64>,
    pub variance_mixed: Option<f64>,
    /// Strided iterate snapshot.
    pub iterate: Option<Vec<f64>>,
}

/// Per-run log returned by every solver.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub seed: u64,
    /// Header notes, e.g. recorded deviations from prescribed parameters.
    pub notes: Vec<String>,
    pub records: Vec<TraceRecord>,
    /// Number of projections onto the target domain.
    pub projections: u64,
    pub calls_full: u64,
    pub calls_stochastic: u64,
    pub final_point: Vec<f64>,
}

impl Trace {
    pub fn new(seed: u64) -> Self {
        Trace { seed, ..Default::default() }
    }

    pub fn push(&mut self, r: TraceRecord) {
        self.records.push(r);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}
