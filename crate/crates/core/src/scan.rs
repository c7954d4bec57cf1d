//! Residual scans: evaluate pointwise defects over a sample set and keep the
//! worst offender. Aggregation is ordered by point index, so results are
//! independent of any execution interleaving.

use crate::expr::{EvalError, Expr};
use crate::report::CheckRecord;

#[derive(Debug, Clone)]
pub struct Scan {
    pub max: f64,
    pub worst: Option<Vec<f64>>,
    pub error: Option<String>,
}

impl Scan {
    pub fn run(
        samples: &[Vec<f64>],
        mut f: impl FnMut(&[f64]) -> Result<f64, EvalError>,
    ) -> Scan {
        let mut max = 0.0_f64;
        let mut worst = None;
        for p in samples {
            match f(p) {
                Ok(v) => {
                    let v = v.abs();
                    if v > max || worst.is_none() {
                        max = v;
                        worst = Some(p.clone());
                    }
                }
                Err(e) => {
                    return Scan {
                        max: f64::INFINITY,
                        worst: Some(p.clone()),
                        error: Some(e.to_string()),
                    }
                }
            }
        }
        Scan {
            max,
            worst,
            error: None,
        }
    }

    /// Scan the max absolute value of a set of expressions.
    pub fn exprs(samples: &[Vec<f64>], exprs: &[Expr]) -> Scan {
        Scan::run(samples, |p| {
            let mut m = 0.0_f64;
            for e in exprs {
                m = m.max(e.evaluate(p)?.abs());
            }
            Ok(m)
        })
    }

    pub fn record(&self, id: &str, anchor: &str, tol: f64) -> CheckRecord {
        let rec = CheckRecord::residual(id, anchor, self.max, self.worst.clone(), tol);
        match &self.error {
            Some(e) => rec.with_note(format!("evaluation failed: {e}")),
            None => rec,
        }
    }
}
