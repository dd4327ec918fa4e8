//! Formula families, random formulas, corpus files and the benchmark
//! harness that reports normalization blowup.

mod corpus;
mod generate;
mod run;

use thiserror::Error;

use crate::formula::ParseError;

pub use corpus::{load_corpus, parse_corpus, Corpus};
pub use generate::{
    family_wu_nested, family_wu_star, generate, random_corpus, random_formula, GeneratorSpec,
    OperatorWeights, RandomSpec,
};
pub use run::{run_benchmark, BenchOptions, BenchRecord, BenchReport, BenchSummary, FALLBACK_SAMPLES};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("{family} needs n >= {min}, got {n}")]
    FamilyTooSmall { family: &'static str, n: usize, min: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {error}")]
    Parse { line: usize, text: String, error: ParseError },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("oracle error: {0}")]
    Oracle(String),
    #[error("formula {id}: normal form {output} differs from {input} on {witness}")]
    Verification { id: usize, input: String, output: String, witness: String },
    #[error("formula {id}: {message}")]
    Invariant { id: usize, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{is_normal_form, parse};
    use crate::rewrite::{normalize, NormalizeOptions};

    #[test]
    fn trivial_corpus() {
        let corpus = vec![(1, parse("a U b").unwrap())];
        let report = run_benchmark(&corpus, &BenchOptions::default()).unwrap();
        assert_eq!(report.records[0].tree_blowup, 1.0);
        assert_eq!(report.records[0].rules, 0);
        assert!(matches!(run_benchmark(&[], &BenchOptions::default()), Err(BenchError::EmptyCorpus)));
    }

    #[test]
    fn record_lines() {
        let corpus = vec![(4, family_wu_star(3).unwrap())];
        let opts = BenchOptions { timing: false, verify: Some((2, 2)), ..BenchOptions::default() };
        let report = run_benchmark(&corpus, &opts).unwrap();
        let line = report.records[0].to_string();
        assert!(line.starts_with("id:4 in_nodes:7 in_dag:7 out_nodes:"), "{line}");
        assert!(line.ends_with(" rules:2 ms:0.000"), "{line}");
        assert!(report.to_string().lines().last().unwrap().starts_with("summary records:1 timeouts:0"));
    }

    #[test]
    fn summary_means_match_records() {
        let corpus = random_corpus(&RandomSpec::new(11, 15, 3), 30).unwrap();
        let opts = BenchOptions { timing: false, ..BenchOptions::default() };
        let report = run_benchmark(&corpus, &opts).unwrap();
        let mean = report.records.iter().map(|r| r.tree_blowup).sum::<f64>() / 30.0;
        assert!((report.summary.mean_tree_blowup - mean).abs() < 1e-9);
        let again = run_benchmark(&corpus, &opts).unwrap();
        assert_eq!(report.to_string(), again.to_string());
    }

    #[test]
    fn timeouts_are_counted_separately() {
        let corpus = vec![(1, family_wu_nested(4)), (2, parse("a").unwrap())];
        let opts = BenchOptions { timeout: std::time::Duration::ZERO, ..BenchOptions::default() };
        let report = run_benchmark(&corpus, &opts).unwrap();
        assert_eq!(report.summary.timeouts, 2);
        assert_eq!(report.records[0].to_string(), "id:1 timeout:true");
    }

    #[test]
    fn nested_family_normalizes() {
        for n in 0..=6 {
            let f = family_wu_nested(n);
            let out = normalize(&f, &NormalizeOptions::default()).unwrap();
            assert!(is_normal_form(&out.formula).is_pass(), "n = {n}");
        }
    }
}
