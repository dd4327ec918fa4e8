use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::formula::{measures, Formula};
use crate::oracle::{bounded_equiv_with, EquivOptions, EquivVerdict, OracleError};
use crate::rewrite::{normalize, NormalizeError, NormalizeOptions};

use super::BenchError;

/// Words drawn when exhaustive verification exceeds the oracle ceiling.
pub const FALLBACK_SAMPLES: usize = 500;

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub normalize: NormalizeOptions,
    /// Oracle bounds `(prefix, loop)` for checking each output.
    pub verify: Option<(usize, usize)>,
    pub timeout: Duration,
    /// Record wall times; off, every time is reported as zero.
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            normalize: NormalizeOptions::default(),
            verify: None,
            timeout: Duration::from_secs(60),
            timing: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub id: usize,
    pub input_nodes: usize,
    pub input_dag: usize,
    pub output_nodes: usize,
    pub output_dag: usize,
    pub tree_blowup: f64,
    pub dag_blowup: f64,
    pub rules: usize,
    pub ms: f64,
    pub stage_times: [Duration; 3],
    pub timed_out: bool,
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.timed_out {
            return write!(f, "id:{} timeout:true", self.id);
        }
        write!(
            f,
            "id:{} in_nodes:{} in_dag:{} out_nodes:{} out_dag:{} tree_blowup:{:.4} dag_blowup:{:.4} rules:{} ms:{:.3}",
            self.id,
            self.input_nodes,
            self.input_dag,
            self.output_nodes,
            self.output_dag,
            self.tree_blowup,
            self.dag_blowup,
            self.rules,
            self.ms
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub records: usize,
    pub timeouts: usize,
    pub mean_tree_blowup: f64,
    pub mean_dag_blowup: f64,
    pub worst_tree_blowup: f64,
    pub worst_dag_blowup: f64,
    pub total_ms: f64,
}

impl BenchSummary {
    /// Aggregates over the records that finished.
    pub fn from_records(records: &[BenchRecord]) -> Self {
        let done: Vec<&BenchRecord> = records.iter().filter(|r| !r.timed_out).collect();
        let mean = |get: fn(&BenchRecord) -> f64| {
            if done.is_empty() {
                0.0
            } else {
                done.iter().map(|r| get(r)).sum::<f64>() / done.len() as f64
            }
        };
        let worst = |get: fn(&BenchRecord) -> f64| done.iter().map(|r| get(r)).fold(0.0, f64::max);
        BenchSummary {
            records: records.len(),
            timeouts: records.len() - done.len(),
            mean_tree_blowup: mean(|r| r.tree_blowup),
            mean_dag_blowup: mean(|r| r.dag_blowup),
            worst_tree_blowup: worst(|r| r.tree_blowup),
            worst_dag_blowup: worst(|r| r.dag_blowup),
            total_ms: done.iter().map(|r| r.ms).sum(),
        }
    }
}

impl fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "summary records:{} timeouts:{} mean_tree_blowup:{:.4} mean_dag_blowup:{:.4} worst_tree_blowup:{:.4} worst_dag_blowup:{:.4} total_ms:{:.3}",
            self.records,
            self.timeouts,
            self.mean_tree_blowup,
            self.mean_dag_blowup,
            self.worst_tree_blowup,
            self.worst_dag_blowup,
            self.total_ms
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summary: BenchSummary,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        write!(f, "{}", self.summary)
    }
}

/// Checks `output ≡ input` on lassos up to `bounds`, sampling when the
/// exhaustive space is too large.
fn verify(id: usize, input: &Formula, output: &Formula, bounds: (usize, usize)) -> Result<(), BenchError> {
    let (p, l) = bounds;
    let verdict = match bounded_equiv_with(input, output, EquivOptions::exhaustive(p, l)) {
        Err(OracleError::BoundTooLarge { .. }) => {
            bounded_equiv_with(input, output, EquivOptions::sampled(p, l, FALLBACK_SAMPLES, id as u64))
        }
        other => other,
    }
    .map_err(|e| BenchError::Oracle(e.to_string()))?;
    match verdict {
        EquivVerdict::EquivalentUpToBound { .. } => Ok(()),
        EquivVerdict::Counterexample(w) => Err(BenchError::Verification {
            id,
            input: input.to_string(),
            output: output.to_string(),
            witness: w.to_string(),
        }),
    }
}

fn run_one(id: usize, f: &Formula, opts: &BenchOptions) -> Result<BenchRecord, BenchError> {
    let nopts = NormalizeOptions { timeout: Some(opts.timeout), ..opts.normalize.clone() };
    let m_in = measures(f);
    let start = Instant::now();
    let result = normalize(f, &nopts);
    let elapsed = start.elapsed();
    let mut record = BenchRecord {
        id,
        input_nodes: m_in.nodes,
        input_dag: m_in.dag_nodes,
        output_nodes: 0,
        output_dag: 0,
        tree_blowup: 0.0,
        dag_blowup: 0.0,
        rules: 0,
        ms: 0.0,
        stage_times: [Duration::ZERO; 3],
        timed_out: false,
    };
    let out = match result {
        Ok(out) => out,
        Err(NormalizeError::Timeout | NormalizeError::StepBudget(_)) => {
            record.timed_out = true;
            return Ok(record);
        }
        Err(NormalizeError::Invariant(message)) => return Err(BenchError::Invariant { id, message }),
    };
    if let Some(bounds) = opts.verify {
        verify(id, f, &out.formula, bounds)?;
    }
    let m_out = measures(&out.formula);
    record.output_nodes = m_out.nodes;
    record.output_dag = m_out.dag_nodes;
    record.tree_blowup = m_out.nodes as f64 / m_in.nodes as f64;
    record.dag_blowup = m_out.dag_nodes as f64 / m_in.dag_nodes as f64;
    record.rules = out.trace.len();
    if opts.timing {
        record.ms = elapsed.as_secs_f64() * 1000.0;
        record.stage_times = out.stage_times;
    }
    Ok(record)
}

/// Normalizes every formula of the corpus, in parallel, and reports the
/// records in corpus order.
pub fn run_benchmark(corpus: &[(usize, Formula)], opts: &BenchOptions) -> Result<BenchReport, BenchError> {
    if corpus.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    let results: Vec<Result<BenchRecord, BenchError>> =
        corpus.par_iter().map(|(id, f)| run_one(*id, f, opts)).collect();
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let summary = BenchSummary::from_records(&records);
    Ok(BenchReport { records, summary })
}
