use smoothconvex_core::{Domain, Objective, Trace, TraceRecord};

/// Builds a [`Trace`] at the configured strides.
pub(crate) struct Recorder<'a> {
    obj: &'a dyn Objective,
    domain: &'a Domain,
    every: usize,
    snapshot_every: usize,
    f_star: Option<f64>,
    pub trace: Trace,
}

impl<'a> Recorder<'a> {
    pub fn new(obj: &'a dyn Objective, domain: &'a Domain, cfg: &crate::SolverConfig) -> Self {
        Recorder {
            obj,
            domain,
            every: cfg.record_every,
            snapshot_every: cfg.snapshot_every,
            f_star: cfg.f_star,
            trace: Trace::new(cfg.seed),
        }
    }

    fn due(&self, iter: u64) -> bool {
        (self.every > 0 && iter % self.every as u64 == 0) || (self.snapshot_every > 0 && iter % self.snapshot_every as u64 == 0)
    }

    /// A full record of `output` (the point the solver would return now),
    /// with a snapshot of `iterate` if due.
    pub fn full(&self, iter: u64, output: &[f64], iterate: &[f64], calls: (u64, u64)) -> TraceRecord {
        let value = self.obj.value(output);
        let violation = match self.domain {
            Domain::Unconstrained => None,
            d => Some(d.g(output)),
        };
        let snap = self.snapshot_every > 0 && iter % self.snapshot_every as u64 == 0;
        TraceRecord {
            iter,
            objective: Some(value),
            suboptimality: self.f_star.map(|f| value - f),
            violation,
            calls_full: calls.0,
            calls_stochastic: calls.1,
            iterate: snap.then(|| iterate.to_vec()),
            ..Default::default()
        }
    }

    /// Record at a stride point; `output` is only evaluated when due.
    pub fn step(&mut self, iter: u64, output: impl FnOnce() -> Vec<f64>, iterate: &[f64], calls: (u64, u64)) {
        if self.due(iter) {
            let out = output();
            let mut r = self.full(iter, &out, iterate, calls);
            if !(self.every > 0 && iter % self.every as u64 == 0) {
                r.objective = None;
                r.suboptimality = None;
                r.violation = None;
            }
            self.trace.push(r);
        }
    }

    pub fn push(&mut self, r: TraceRecord) {
        self.trace.push(r);
    }

    /// Close the trace with a final record of `output`.
    pub fn finish(mut self, iter: u64, output: Vec<f64>, calls: (u64, u64), projections: u64) -> Trace {
        let already = self.trace.last().map_or(false, |r| r.iter == iter && r.objective.is_some());
        if !already {
            let mut r = self.full(iter, &output, &output, calls);
            r.iterate = None;
            self.trace.push(r);
        }
        self.trace.calls_full = calls.0;
        self.trace.calls_stochastic = calls.1;
        self.trace.projections = projections;
        self.trace.final_point = output;
        self.trace
    }
}

/// Starting point: the configured one projected onto the domain, or `Π(0)`.
pub(crate) fn start_point(domain: &Domain, cfg: &crate::SolverConfig, d: usize) -> smoothconvex_core::Result<Vec<f64>> {
    let w = cfg.start.clone().unwrap_or_else(|| vec![0.0; d]);
    if w.len() != d {
        return Err(smoothconvex_core::Error::Input(format!("start point has dimension {}, expected {d}", w.len())));
    }
    domain.project(&w)
}
