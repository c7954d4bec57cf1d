//! Pseudo-Riemannian tensor calculus on a chart: Levi-Civita connection,
//! curvature, Ricci data, Lie bracket and derivative, orthonormal frames.
//!
//! Conventions (pinned operationally by the identity suites downstream):
//!   Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
//!   R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_[X,Y] Z,
//!   [R(∂_i,∂_j)∂_k]^l = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik
//!   S(X,Y) = tr(Z ↦ R(Z,X)Y),  Q = g⁻¹ S,  r = tr Q.

use thiserror::Error;

use crate::chart::ChartRef;
use crate::expr::{EvalError, Expr};
use crate::fields::{EndField, ExprMatrix, FieldError, MetricField, VectorField};

/// Commutator of vector fields, [X,Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, FieldError> {
    x.same_chart(y)?;
    let dim = x.chart.dim();
    let comps = (0..dim)
        .map(|k| x.derive(&y.comps[k]).sub(&y.derive(&x.comps[k])))
        .collect();
    Ok(VectorField {
        chart: x.chart.clone(),
        comps,
    })
}

/// Lie derivative of a (1,1)-tensor field: (L_X T)(Y) = [X, TY] − T[X, Y].
/// Componentwise: (L_X T)^k_j = X^i ∂_i T^k_j − T^i_j ∂_i X^k + T^k_i ∂_j X^i.
pub fn lie_derivative_end(x: &VectorField, t: &EndField) -> Result<EndField, FieldError> {
    if !x.chart.same_chart(&t.chart) {
        return Err(FieldError::ChartMismatch(
            x.chart.name.clone(),
            t.chart.name.clone(),
        ));
    }
    let dim = x.chart.dim();
    let mut m = ExprMatrix::zeros(dim);
    for k in 0..dim {
        for j in 0..dim {
            let mut acc = x.derive(t.m.get(k, j));
            for i in 0..dim {
                acc = acc.sub(&t.m.get(i, j).mul(&x.comps[k].differentiate(i)));
                acc = acc.add(&t.m.get(k, i).mul(&x.comps[i].differentiate(j)));
            }
            m.set(k, j, acc);
        }
    }
    Ok(EndField {
        chart: x.chart.clone(),
        m,
    })
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("metric is degenerate at sample point {point:?} (|det g| = {det})")]
    Degenerate { point: Vec<f64>, det: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Levi-Civita connection and curvature package of a metric, fully symbolic.
pub struct LeviCivita {
    pub chart: ChartRef,
    pub g: MetricField,
    pub ginv: ExprMatrix,
    dim: usize,
    /// Γ^k_ij at k*d² + i*d + j.
    gamma: Vec<Expr>,
    /// [R(∂i,∂j)∂k]^l at ((l*d + k)*d + i)*d + j.
    riem: Vec<Expr>,
    /// Ricci tensor S_jk.
    pub ricci: ExprMatrix,
    /// Ricci operator Q^i_j.
    pub ricci_op: ExprMatrix,
    /// Scalar curvature.
    pub scalar: Expr,
}

impl LeviCivita {
    /// Builds the full symbolic package. Degeneracy of the metric is probed
    /// at the given sample points before inverting.
    pub fn new(g: MetricField, probes: &[Vec<f64>]) -> Result<Self, GeometryError> {
        let dim = g.chart.dim();
        let det = g.m.det();
        for p in probes {
            let d = det.evaluate(p)?;
            if d.abs() < 1e-10 {
                return Err(GeometryError::Degenerate {
                    point: p.clone(),
                    det: d,
                });
            }
        }
        let ginv = g.m.inverse();
        let dg: Vec<ExprMatrix> = (0..dim).map(|a| g.m.differentiate(a)).collect();
        let mut gamma = vec![Expr::zero(); dim * dim * dim];
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..=i {
                    let mut acc = Expr::zero();
                    for l in 0..dim {
                        let term = dg[i]
                            .get(j, l)
                            .add(dg[j].get(i, l))
                            .sub(dg[l].get(i, j));
                        acc = acc.add(&ginv.get(k, l).mul(&term));
                    }
                    let gkij = acc.scale(0.5);
                    gamma[(k * dim + i) * dim + j] = gkij.clone();
                    gamma[(k * dim + j) * dim + i] = gkij;
                }
            }
        }
        let gam = |k: usize, i: usize, j: usize| gamma[(k * dim + i) * dim + j].clone();
        let mut riem = vec![Expr::zero(); dim * dim * dim * dim];
        for l in 0..dim {
            for k in 0..dim {
                for i in 0..dim {
                    for j in 0..i {
                        let mut acc = gam(l, j, k)
                            .differentiate(i)
                            .sub(&gam(l, i, k).differentiate(j));
                        for m in 0..dim {
                            acc = acc.add(&gam(l, i, m).mul(&gam(m, j, k)));
                            acc = acc.sub(&gam(l, j, m).mul(&gam(m, i, k)));
                        }
                        riem[((l * dim + k) * dim + i) * dim + j] = acc.clone();
                        riem[((l * dim + k) * dim + j) * dim + i] = acc.neg();
                    }
                }
            }
        }
        let rm = |l: usize, k: usize, i: usize, j: usize| {
            riem[((l * dim + k) * dim + i) * dim + j].clone()
        };
        let mut ricci = ExprMatrix::zeros(dim);
        for j in 0..dim {
            for k in 0..dim {
                let mut acc = Expr::zero();
                for i in 0..dim {
                    acc = acc.add(&rm(i, k, i, j));
                }
                ricci.set(j, k, acc);
            }
        }
        let ricci_op = ginv.matmul(&ricci);
        let scalar = ricci_op.trace();
        Ok(LeviCivita {
            chart: g.chart.clone(),
            g,
            ginv,
            dim,
            gamma,
            riem,
            ricci,
            ricci_op,
            scalar,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.gamma[(k * self.dim + i) * self.dim + j]
    }

    /// [R(∂i,∂j)∂k]^l.
    pub fn riem_comp(&self, l: usize, k: usize, i: usize, j: usize) -> &Expr {
        &self.riem[((l * self.dim + k) * self.dim + i) * self.dim + j]
    }

    /// Total covariant derivative of a vector field: column i holds ∇_{∂i} Y.
    pub fn grad_vf(&self, y: &VectorField) -> ExprMatrix {
        let d = self.dim;
        let mut out = ExprMatrix::zeros(d);
        for k in 0..d {
            for i in 0..d {
                let mut acc = y.comps[k].differentiate(i);
                for j in 0..d {
                    acc = acc.add(&self.christoffel(k, i, j).mul(&y.comps[j]));
                }
                out.set(k, i, acc);
            }
        }
        out
    }

    /// ∇_X Y.
    pub fn cov_vf(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let grad = self.grad_vf(y);
        VectorField {
            chart: self.chart.clone(),
            comps: grad.apply(&x.comps),
        }
    }

    /// Covariant derivative of a (1,1)-tensor along W:
    /// (∇_W T)(Y) = ∇_W (TY) − T(∇_W Y).
    pub fn cov_end(&self, w: &VectorField, t: &EndField) -> EndField {
        let d = self.dim;
        let mut m = ExprMatrix::zeros(d);
        for k in 0..d {
            for j in 0..d {
                let mut acc = w.derive(t.m.get(k, j));
                for i in 0..d {
                    for l in 0..d {
                        acc = acc.add(&w.comps[i].mul(
                            &self
                                .christoffel(k, i, l)
                                .mul(t.m.get(l, j))
                                .sub(&t.m.get(k, l).mul(self.christoffel(l, i, j))),
                        ));
                    }
                }
                m.set(k, j, acc);
            }
        }
        EndField {
            chart: self.chart.clone(),
            m,
        }
    }

    /// R(X,Y)Z by tensorial contraction of the curvature components.
    pub fn curvature(&self, x: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
        let d = self.dim;
        let mut comps = vec![Expr::zero(); d];
        for (l, slot) in comps.iter_mut().enumerate() {
            let mut acc = Expr::zero();
            for i in 0..d {
                if x.comps[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if y.comps[j].is_zero() {
                        continue;
                    }
                    for k in 0..d {
                        if z.comps[k].is_zero() {
                            continue;
                        }
                        let r = self.riem_comp(l, k, i, j);
                        if r.is_zero() {
                            continue;
                        }
                        acc = acc.add(&r.mul(&x.comps[i]).mul(&y.comps[j]).mul(&z.comps[k]));
                    }
                }
            }
            *slot = acc;
        }
        VectorField {
            chart: self.chart.clone(),
            comps,
        }
    }

    /// Ricci form S(X,Y) as a scalar expression.
    pub fn ricci_pair(&self, x: &VectorField, y: &VectorField) -> Expr {
        let sy = self.ricci.transpose().apply(&y.comps);
        let mut acc = Expr::zero();
        for (a, b) in x.comps.iter().zip(&sy) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// Ricci operator applied to a field.
    pub fn ricci_apply(&self, x: &VectorField) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.ricci_op.apply(&x.comps),
        }
    }

    /// Gradient of a scalar: (grad f)^i = g^{ij} ∂_j f.
    pub fn grad_scalar(&self, f: &Expr) -> VectorField {
        let d = self.dim;
        let df: Vec<Expr> = (0..d).map(|j| f.differentiate(j)).collect();
        VectorField {
            chart: self.chart.clone(),
            comps: self.ginv.apply(&df),
        }
    }

    /// Rough Laplacian ∇*∇V = Σᵢ εᵢ(∇_{Eᵢ}∇_{Eᵢ}V − ∇_{∇_{Eᵢ}Eᵢ}V) over a
    /// pseudo-orthonormal frame with signs εᵢ.
    pub fn rough_laplacian(&self, frame: &[(VectorField, f64)], v: &VectorField) -> VectorField {
        let mut acc = VectorField {
            chart: self.chart.clone(),
            comps: vec![Expr::zero(); self.dim],
        };
        for (e, sign) in frame {
            let first = self.cov_vf(e, &self.cov_vf(e, v));
            let second = self.cov_vf(&self.cov_vf(e, e), v);
            let term = first.sub(&second).scale_expr(&Expr::constant(*sign));
            acc = acc.add(&term);
        }
        acc
    }
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("could not extend pseudo-orthonormal frame at step {step}: best candidate norm² {best} below threshold")]
    NullStuck { step: usize, best: f64 },
    #[error("frame vector {index} changes causal character across the sample set")]
    SignFlip { index: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Pivoted Gram–Schmidt over candidate generator fields. Candidates are the
/// coordinate fields (forward or reversed order) followed by pairwise sums
/// and differences; at each step the candidate with the largest minimum
/// |g(v,v)| over the sample set is kept. Deterministic for a fixed
/// (chart, samples) pair.
pub fn pseudo_orthonormal_frame(
    lc: &LeviCivita,
    samples: &[Vec<f64>],
    reversed: bool,
) -> Result<Vec<(VectorField, f64)>, FrameError> {
    let d = lc.dim();
    let chart = lc.chart.clone();
    let mut candidates: Vec<VectorField> = Vec::new();
    let order: Vec<usize> = if reversed {
        (0..d).rev().collect()
    } else {
        (0..d).collect()
    };
    for &i in &order {
        candidates.push(VectorField::coordinate(chart.clone(), i));
    }
    for a in 0..d {
        for b in (a + 1)..d {
            let ea = VectorField::coordinate(chart.clone(), order[a]);
            let eb = VectorField::coordinate(chart.clone(), order[b]);
            candidates.push(ea.add(&eb));
            candidates.push(ea.sub(&eb));
        }
    }

    let mut frame: Vec<(VectorField, f64)> = Vec::new();
    let mut used = vec![false; candidates.len()];
    while frame.len() < d {
        let mut best: Option<(usize, f64, VectorField, Expr)> = None;
        for (ci, cand) in candidates.iter().enumerate() {
            if used[ci] {
                continue;
            }
            // project out the chosen directions
            let mut v = cand.clone();
            for (u, sign) in &frame {
                let coeff = lc.g.pair(&v, u).scale(*sign);
                v = v.sub(&u.scale_expr(&coeff));
            }
            let norm2 = lc.g.pair(&v, &v);
            let mut min_abs = f64::INFINITY;
            let mut ok = true;
            for p in samples {
                match norm2.evaluate(p) {
                    Ok(val) => min_abs = min_abs.min(val.abs()),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b, _, _)| min_abs > *b) {
                best = Some((ci, min_abs, v, norm2));
            }
        }
        let (ci, score, v, norm2) = best.ok_or(FrameError::NullStuck {
            step: frame.len(),
            best: 0.0,
        })?;
        if score < 1e-6 {
            return Err(FrameError::NullStuck {
                step: frame.len(),
                best: score,
            });
        }
        used[ci] = true;
        let first = norm2.evaluate(&samples[0])?;
        let sign = first.signum();
        for p in samples {
            if norm2.evaluate(p)?.signum() != sign {
                return Err(FrameError::SignFlip { index: frame.len() });
            }
        }
        let normalizer = if sign > 0.0 {
            norm2.sqrt()
        } else {
            norm2.neg().sqrt()
        };
        let unit = VectorField {
            chart: chart.clone(),
            comps: v.comps.iter().map(|c| c.div(&normalizer)).collect(),
        };
        frame.push((unit, sign));
    }
    Ok(frame)
}
