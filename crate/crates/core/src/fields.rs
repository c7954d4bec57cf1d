//! Tensor fields on a chart, represented componentwise by expressions.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::chart::ChartRef;
use crate::expr::{EvalError, Expr};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("fields live on different charts: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    #[error("component count {got} does not match chart dimension {dim}")]
    Shape { got: usize, dim: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Dense square matrix of expressions (row-major), the workhorse behind
/// endomorphism fields, metrics and bilinear forms.
#[derive(Debug, Clone)]
pub struct ExprMatrix {
    pub dim: usize,
    entries: Vec<Expr>,
}

impl ExprMatrix {
    pub fn zeros(dim: usize) -> Self {
        ExprMatrix {
            dim,
            entries: vec![Expr::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Expr::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Self {
        let dim = rows.len();
        let entries = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(entries.len(), dim * dim, "matrix must be square");
        ExprMatrix { dim, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.dim + j]
    }

    pub fn entries_slice(&self) -> &[Expr] {
        &self.entries
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expr) {
        self.entries[i * self.dim + j] = e;
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        ExprMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.sub(b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&Expr, &Expr) -> Expr) -> Self {
        assert_eq!(self.dim, rhs.dim);
        ExprMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Expr::zero();
                for k in 0..self.dim {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn scale(&self, k: &Expr) -> Self {
        self.map(|e| e.mul(k))
    }

    /// Matrix-vector product (components of the image vector).
    pub fn apply(&self, v: &[Expr]) -> Vec<Expr> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = Expr::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(vj));
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Expr {
        let mut acc = Expr::zero();
        for i in 0..self.dim {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Determinant by cofactor expansion; fine for the dims in play (2..=5).
    pub fn det(&self) -> Expr {
        match self.dim {
            1 => self.get(0, 0).clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            _ => {
                let mut acc = Expr::zero();
                for j in 0..self.dim {
                    let term = self.get(0, j).mul(&self.minor(0, j).det());
                    acc = if j % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> ExprMatrix {
        let mut rows = Vec::with_capacity(self.dim - 1);
        for i in 0..self.dim {
            if i == row {
                continue;
            }
            let mut r = Vec::with_capacity(self.dim - 1);
            for j in 0..self.dim {
                if j == col {
                    continue;
                }
                r.push(self.get(i, j).clone());
            }
            rows.push(r);
        }
        ExprMatrix::from_rows(rows)
    }

    /// Symbolic inverse via adjugate over determinant.
    pub fn inverse(&self) -> ExprMatrix {
        let det = self.det();
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let cof = self.minor(j, i).det();
                let signed = if (i + j) % 2 == 0 { cof } else { cof.neg() };
                out.set(i, j, signed.div(&det));
            }
        }
        out
    }

    pub fn differentiate(&self, var: usize) -> Self {
        self.map(|e| e.differentiate(var))
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self.get(i, j).evaluate(p)?;
            }
        }
        Ok(out)
    }
}

pub fn eval_vec(v: &[Expr], p: &[f64]) -> Result<DVector<f64>, EvalError> {
    let mut out = DVector::zeros(v.len());
    for (i, e) in v.iter().enumerate() {
        out[i] = e.evaluate(p)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ScalarField {
    pub chart: ChartRef,
    pub expr: Expr,
}

/// Vector field: components in the coordinate basis ∂/∂coords.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub chart: ChartRef,
    pub comps: Vec<Expr>,
}

/// One-form: components in the dual coordinate basis.
#[derive(Debug, Clone)]
pub struct OneForm {
    pub chart: ChartRef,
    pub comps: Vec<Expr>,
}

/// Mixed (1,1)-tensor field: column-vector convention, (T v)^i = T^i_j v^j.
#[derive(Debug, Clone)]
pub struct EndField {
    pub chart: ChartRef,
    pub m: ExprMatrix,
}

/// Symmetric (0,2)-tensor field.
#[derive(Debug, Clone)]
pub struct MetricField {
    pub chart: ChartRef,
    pub m: ExprMatrix,
}

impl VectorField {
    pub fn new(chart: ChartRef, comps: Vec<Expr>) -> Result<Self, FieldError> {
        if comps.len() != chart.dim() {
            return Err(FieldError::Shape {
                got: comps.len(),
                dim: chart.dim(),
            });
        }
        Ok(VectorField { chart, comps })
    }

    pub fn coordinate(chart: ChartRef, index: usize) -> Self {
        let mut comps = vec![Expr::zero(); chart.dim()];
        comps[index] = Expr::one();
        VectorField { chart, comps }
    }

    pub fn eval(&self, p: &[f64]) -> Result<DVector<f64>, EvalError> {
        eval_vec(&self.comps, p)
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale_expr(&self, k: &Expr) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c.mul(k)).collect(),
        }
    }

    /// Apply the field as a derivation to a scalar expression.
    pub fn derive(&self, f: &Expr) -> Expr {
        f.directional(&self.comps)
    }

    pub fn same_chart(&self, other: &VectorField) -> Result<(), FieldError> {
        if self.chart.same_chart(&other.chart) {
            Ok(())
        } else {
            Err(FieldError::ChartMismatch(
                self.chart.name.clone(),
                other.chart.name.clone(),
            ))
        }
    }
}

impl OneForm {
    pub fn new(chart: ChartRef, comps: Vec<Expr>) -> Result<Self, FieldError> {
        if comps.len() != chart.dim() {
            return Err(FieldError::Shape {
                got: comps.len(),
                dim: chart.dim(),
            });
        }
        Ok(OneForm { chart, comps })
    }

    pub fn apply(&self, v: &VectorField) -> Expr {
        let mut acc = Expr::zero();
        for (a, b) in self.comps.iter().zip(&v.comps) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    pub fn eval(&self, p: &[f64]) -> Result<DVector<f64>, EvalError> {
        eval_vec(&self.comps, p)
    }
}

impl EndField {
    pub fn new(chart: ChartRef, m: ExprMatrix) -> Result<Self, FieldError> {
        if m.dim != chart.dim() {
            return Err(FieldError::Shape {
                got: m.dim,
                dim: chart.dim(),
            });
        }
        Ok(EndField { chart, m })
    }

    pub fn apply(&self, v: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.m.apply(&v.comps),
        }
    }

    pub fn compose(&self, rhs: &EndField) -> EndField {
        EndField {
            chart: self.chart.clone(),
            m: self.m.matmul(&rhs.m),
        }
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        self.m.eval(p)
    }
}

impl MetricField {
    pub fn new(chart: ChartRef, m: ExprMatrix) -> Result<Self, FieldError> {
        if m.dim != chart.dim() {
            return Err(FieldError::Shape {
                got: m.dim,
                dim: chart.dim(),
            });
        }
        Ok(MetricField { chart, m })
    }

    /// g(X, Y) as a scalar expression.
    pub fn pair(&self, x: &VectorField, y: &VectorField) -> Expr {
        let gy = self.m.apply(&y.comps);
        let mut acc = Expr::zero();
        for (a, b) in x.comps.iter().zip(&gy) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// One-form g(v, ·).
    pub fn lower(&self, v: &VectorField) -> OneForm {
        OneForm {
            chart: self.chart.clone(),
            comps: self.m.transpose().apply(&v.comps),
        }
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        self.m.eval(p)
    }

    /// Signature (positive count, negative count) of the Gram matrix at a
    /// point, counting eigenvalues with |λ| > tol.
    pub fn signature_at(&self, p: &[f64], tol: f64) -> Result<(usize, usize), EvalError> {
        let g = self.eval(p)?;
        let sym = (g.clone() + g.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let mut pos = 0;
        let mut neg = 0;
        for v in eig.eigenvalues.iter() {
            if *v > tol {
                pos += 1;
            } else if *v < -tol {
                neg += 1;
            }
        }
        Ok((pos, neg))
    }
}
