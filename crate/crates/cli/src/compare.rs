//! All five methods side by side with the big-integer reference.

use exactsum::{sum, SumMethod};
use exactsum_oracle::{oracle_round, oracle_sum};
use std::fmt;

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub oracle: f64,
    pub results: Vec<(SumMethod, f64)>,
}

/// NaN matches any NaN; everything else compares bits, so -0.0 != +0.0.
pub fn same_result(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a.to_bits() == b.to_bits()
}

impl CompareReport {
    pub fn new(values: &[f64]) -> Self {
        CompareReport {
            oracle: oracle_round(&oracle_sum(values)),
            results: SumMethod::ALL
                .iter()
                .map(|&m| (m, sum(values, m)))
                .collect(),
        }
    }

    pub fn result(&self, method: SumMethod) -> f64 {
        self.results
            .iter()
            .find(|(m, _)| *m == method)
            .map(|r| r.1)
            .unwrap()
    }

    /// Exact methods whose result differs from the oracle.
    pub fn mismatches(&self) -> Vec<SumMethod> {
        self.results
            .iter()
            .filter(|(m, v)| m.is_exact() && !same_result(*v, self.oracle))
            .map(|r| r.0)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.mismatches().is_empty()
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let oracle = crate::io::format_result(self.oracle);
        writeln!(f, "{:<10} {oracle}", "oracle")?;
        for &(m, v) in &self.results {
            let status = match (m.is_exact(), same_result(v, self.oracle)) {
                (true, true) => "ok",
                (true, false) => "MISMATCH",
                (false, true) => "matches",
                (false, false) => "differs",
            };
            writeln!(
                f,
                "{:<10} {} {status}",
                m.name(),
                crate::io::format_result(v)
            )?;
        }
        Ok(())
    }
}
