//! Coordinate charts, domain constraints and deterministic sample sets.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::Expr;

/// Kind of a domain constraint attached to a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Expression must stay away from zero: |e| > margin.
    NonZero,
    /// Expression must be positive with margin: e > margin.
    Positive,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub expr: Expr,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn nonzero(expr: Expr) -> Self {
        Constraint {
            expr,
            kind: ConstraintKind::NonZero,
        }
    }

    pub fn positive(expr: Expr) -> Self {
        Constraint {
            expr,
            kind: ConstraintKind::Positive,
        }
    }

    pub fn holds(&self, point: &[f64], margin: f64) -> bool {
        match self.expr.evaluate(point) {
            Ok(v) => match self.kind {
                ConstraintKind::NonZero => v.abs() > margin,
                ConstraintKind::Positive => v > margin,
            },
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<String>,
    pub constraints: Vec<Constraint>,
    /// Per-coordinate closed sampling interval.
    pub sample_bounds: Vec<(f64, f64)>,
}

pub type ChartRef = Arc<Chart>;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("chart `{0}` needs at least one coordinate")]
    Empty(String),
    #[error("chart `{name}` has {coords} coordinates but {bounds} sample bounds")]
    BoundsMismatch {
        name: String,
        coords: usize,
        bounds: usize,
    },
    #[error("chart `{name}`: sample bound {index} has low {lo} > high {hi}")]
    BadInterval {
        name: String,
        index: usize,
        lo: f64,
        hi: f64,
    },
    #[error(
        "chart `{name}`: rejection sampling exhausted after {tried} candidates ({accepted} accepted, {requested} requested); bounds likely violate the constraints"
    )]
    SamplingExhausted {
        name: String,
        tried: usize,
        accepted: usize,
        requested: usize,
    },
}

impl Chart {
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        constraints: Vec<Constraint>,
        sample_bounds: Vec<(f64, f64)>,
    ) -> Result<ChartRef, ChartError> {
        let name = name.into();
        if coords.is_empty() {
            return Err(ChartError::Empty(name));
        }
        if coords.len() != sample_bounds.len() {
            return Err(ChartError::BoundsMismatch {
                name,
                coords: coords.len(),
                bounds: sample_bounds.len(),
            });
        }
        for (i, (lo, hi)) in sample_bounds.iter().enumerate() {
            if lo > hi {
                return Err(ChartError::BadInterval {
                    name,
                    index: i,
                    lo: *lo,
                    hi: *hi,
                });
            }
        }
        Ok(Arc::new(Chart {
            name,
            coords,
            constraints,
            sample_bounds,
        }))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn same_chart(&self, other: &Chart) -> bool {
        self.name == other.name && self.coords == other.coords
    }

    /// Deterministic low-discrepancy sample set: a Halton sequence mapped to
    /// the sample bounds and rejection-filtered by the constraints. The seed
    /// offsets the starting index, so (chart, seed, n) pins the set exactly.
    pub fn sample(&self, n: usize, seed: u64, margin: f64) -> Result<Vec<Vec<f64>>, ChartError> {
        const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        let mut points = Vec::with_capacity(n);
        let mut index = seed.wrapping_mul(101) + 1;
        let mut tried = 0usize;
        let limit = 200_000 + 1_000 * n;
        while points.len() < n {
            tried += 1;
            if tried > limit {
                return Err(ChartError::SamplingExhausted {
                    name: self.name.clone(),
                    tried,
                    accepted: points.len(),
                    requested: n,
                });
            }
            let mut p = Vec::with_capacity(self.dim());
            for (d, (lo, hi)) in self.sample_bounds.iter().enumerate() {
                let u = halton(index, PRIMES[d % PRIMES.len()]);
                p.push(lo + (hi - lo) * u);
            }
            index += 1;
            if self.constraints.iter().all(|c| c.holds(&p, margin)) {
                points.push(p);
            }
        }
        Ok(points)
    }
}

/// Radical-inverse (van der Corput) value of `index` in the given base.
fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn chart_41() -> ChartRef {
        let coords: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        Chart::new(
            "example41",
            coords.clone(),
            vec![
                Constraint::nonzero(parse("2*y+z", &coords).unwrap()),
                Constraint::nonzero(parse("z", &coords).unwrap()),
            ],
            vec![(-1.0, 1.0), (-1.0, 1.0), (0.5, 2.5)],
        )
        .unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_respects_constraints() {
        let chart = chart_41();
        let a = chart.sample(100, 42, 0.05).unwrap();
        let b = chart.sample(100, 42, 0.05).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert!((2.0 * p[1] + p[2]).abs() > 0.05);
            assert!(p[2] >= 0.5 && p[2] <= 2.5);
        }
        let c = chart.sample(100, 7, 0.05).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn impossible_constraints_exhaust() {
        let coords: Vec<String> = vec!["x".into()];
        let chart = Chart::new(
            "bad",
            coords.clone(),
            vec![Constraint::positive(parse("0-1", &coords).unwrap())],
            vec![(0.0, 1.0)],
        )
        .unwrap();
        assert!(matches!(
            chart.sample(5, 1, 1e-8),
            Err(ChartError::SamplingExhausted { .. })
        ));
    }
}
