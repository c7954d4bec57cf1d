//! Pointwise Lorentzian canonical-form classification of h (types I/II/III;
//! the fourth form cannot occur), extraction of the nullity coefficients
//! (κ̃, μ̃, ν̃) by least squares and by the closed frame formulas, and the
//! identity suites attached to the nullity condition.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::fields::{EndField, ExprMatrix, VectorField};
use crate::report::CheckRecord;
use crate::scan::Scan;
use crate::structures::{MetricStructure, StructureError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HType {
    Zero,
    TypeI,
    TypeII,
    TypeIII,
}

impl std::fmt::Display for HType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HType::Zero => "zero",
            HType::TypeI => "I",
            HType::TypeII => "II",
            HType::TypeIII => "III",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FramePairing {
    /// {e, φe, ξ} with −g(e,e) = g(φe,φe) = g(ξ,ξ) = 1.
    OrthonormalPhiBasis,
    /// {e₁, e₂, ξ} with g(e₁,e₂) = g(ξ,ξ) = 1, all other products zero.
    PseudoOrthonormal,
}

#[derive(Debug, Clone)]
pub struct HTypeReport {
    pub point: Vec<f64>,
    pub htype: HType,
    /// Eigenvalue magnitude; zero for the nilpotent and vanishing cases.
    pub lambda: f64,
    /// Signed canonical entry: h e = λ_s e (type I), h e = λ_s φe (type III),
    /// or the invariant pairing sign ε with h e₁ = ε e₂ (type II).
    pub lambda_signed: f64,
    pub adapted_frame: Option<[Vec<f64>; 3]>,
    pub pairing: FramePairing,
    /// Distance from h, in the adapted frame, to its canonical matrix.
    pub residual: f64,
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("operation requires a 3-dimensional structure, got dim {0}")]
    DimensionNot3(usize),
    #[error(
        "canonical-form pattern excluded for valid structures: h(xi) has norm {hxi_norm:.3e} at {point:?} (would force the fourth canonical form)"
    )]
    InvalidStructure { point: Vec<f64>, hxi_norm: f64 },
    #[error("classification found mixed canonical forms ({0} vs {1}); no single adapted frame exists")]
    MixedTypes(HType, HType),
    #[error("eigendistributions are not defined at κ̃ = -1 (type {0} at the point)")]
    NotApplicable(HType),
    #[error("no usable generator field for the adapted frame (best score {0:.3e})")]
    DegenerateGenerator(f64),
    #[error("harmonicity precondition failed: ker-η component of Q̃ξ has norm {defect:.3e} at {point:?}")]
    NotHarmonic { point: Vec<f64>, defect: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Dead zone: ‖h‖ below this is the vanishing case, and an eigenvalue of
    /// h² within it of zero is the nilpotent branch.
    pub zero_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { zero_tol: 1e-9 }
    }
}

fn require_3d(s: &MetricStructure) -> Result<(), ClassifyError> {
    if s.dim() != 3 {
        return Err(ClassifyError::DimensionNot3(s.dim()));
    }
    Ok(())
}

/// Pointwise classification of h under the Lorentzian metric.
pub fn classify_h(
    s: &MetricStructure,
    p: &[f64],
    opts: ClassifyOptions,
) -> Result<HTypeReport, ClassifyError> {
    require_3d(s)?;
    let hp = s.h.eval(p)?;
    let gp = s.g.eval(p)?;
    let php = s.phi.eval(p)?;
    let xip = s.xi.eval(p)?;
    let etap = s.eta.eval(p)?;

    let hnorm = hp.amax();
    if hnorm < opts.zero_tol {
        return Ok(HTypeReport {
            point: p.to_vec(),
            htype: HType::Zero,
            lambda: 0.0,
            lambda_signed: 0.0,
            adapted_frame: None,
            pairing: FramePairing::OrthonormalPhiBasis,
            residual: 0.0,
        });
    }
    let hxi = (&hp * &xip).norm();
    if hxi > 1e-7 * hnorm.max(1.0) {
        return Err(ClassifyError::InvalidStructure {
            point: p.to_vec(),
            hxi_norm: hxi,
        });
    }

    // basis of ker η: project coordinate directions, keep the two best
    let mut projected: Vec<DVector<f64>> = Vec::new();
    for i in 0..3 {
        let mut w = DVector::zeros(3);
        w[i] = 1.0;
        let w = &w - &xip * etap[i];
        projected.push(w);
    }
    projected.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    let u = projected[0].clone();
    let mut v = projected[1].clone();
    let vu = v.dot(&u) / u.dot(&u);
    v -= &u * vu;
    if v.norm() < 1e-10 {
        v = projected[2].clone();
        let vu = v.dot(&u) / u.dot(&u);
        v -= &u * vu;
    }

    // h restricted to ker η in the (u, v) basis
    let basis = DMatrix::from_columns(&[u.clone(), v.clone(), xip.clone()]);
    let binv = basis
        .clone()
        .try_inverse()
        .expect("ker-η basis plus ξ spans the tangent space");
    let m3 = &binv * &hp * &basis;
    let block = m3.view((0, 0), (2, 2)).into_owned();
    // traceless 2×2: h² = -det(block)·I on ker η
    let q = -(block[(0, 0)] * block[(1, 1)] - block[(0, 1)] * block[(1, 0)]);
    let pair = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * &gp * b)[(0, 0)];

    let canonical_residual = |e1: &DVector<f64>,
                              e2: &DVector<f64>,
                              expected: &dyn Fn(&DVector<f64>) -> DVector<f64>,
                              gram: &[(f64, f64, f64)]| {
        // gram rows: (g(e1,e1), g(e1,e2), g(e2,e2)) expectations
        let mut r: f64 = 0.0;
        r = r.max((&hp * e1 - expected(e1)).norm());
        r = r.max((&hp * e2 - expected(e2)).norm());
        let (w11, w12, w22) = gram[0];
        r = r.max((pair(e1, e1) - w11).abs());
        r = r.max((pair(e1, e2) - w12).abs());
        r = r.max((pair(e2, e2) - w22).abs());
        r = r.max(pair(e1, &xip).abs());
        r = r.max(pair(e2, &xip).abs());
        r
    };

    if q > opts.zero_tol {
        // diagonalizable: eigenvalues ±λ with λ = √q
        let lambda = q.sqrt();
        let eig = |lam: f64| -> DVector<f64> {
            // kernel of (block − lam I)
            let a = block[(0, 0)] - lam;
            let b = block[(0, 1)];
            let c = block[(1, 0)];
            let d = block[(1, 1)] - lam;
            // rows (a b) and (c d) are proportional; use the larger
            let (p0, p1) = if a.abs() + b.abs() >= c.abs() + d.abs() {
                (-b, a)
            } else {
                (-d, c)
            };
            &u * p0 + &v * p1
        };
        let v_plus = eig(lambda);
        let v_minus = eig(-lambda);
        let (timelike, lam_signed) = if pair(&v_plus, &v_plus) < 0.0 {
            (v_plus, lambda)
        } else {
            (v_minus, -lambda)
        };
        let norm2 = pair(&timelike, &timelike);
        let e1 = &timelike / (-norm2).sqrt();
        let e2 = &php * &e1;
        let residual = canonical_residual(
            &e1,
            &e2,
            &|w: &DVector<f64>| {
                if (w - &e1).norm() < 1e-9 {
                    w * lam_signed
                } else {
                    w * (-lam_signed)
                }
            },
            &[(-1.0, 0.0, 1.0)],
        );
        return Ok(HTypeReport {
            point: p.to_vec(),
            htype: HType::TypeI,
            lambda,
            lambda_signed: lam_signed,
            adapted_frame: Some([vec3(&e1), vec3(&e2), vec3(&xip)]),
            pairing: FramePairing::OrthonormalPhiBasis,
            residual,
        });
    }

    if q < -opts.zero_tol {
        // complex eigenvalues ±iλ: rotation form in an orthonormal basis
        let lambda = (-q).sqrt();
        // orthonormalize ker η against g: symmetric eigen of the Gram matrix
        let gram2 = DMatrix::from_row_slice(
            2,
            2,
            &[pair(&u, &u), pair(&u, &v), pair(&u, &v), pair(&v, &v)],
        );
        let eig = gram2.symmetric_eigen();
        let mut t_dir = None;
        let mut s_dir = None;
        for k in 0..2 {
            let w = &u * eig.eigenvectors[(0, k)] + &v * eig.eigenvectors[(1, k)];
            if eig.eigenvalues[k] < 0.0 {
                t_dir = Some(w.clone() / (-pair(&w, &w)).sqrt());
            } else {
                s_dir = Some(w.clone() / pair(&w, &w).sqrt());
            }
        }
        let t = t_dir.expect("Lorentzian ker η has a timelike direction");
        let sv = s_dir.expect("Lorentzian ker η has a spacelike direction");
        // h in (t, s): [[a, b], [-b, -a]] with a² − b² = q < 0; boost to a' = 0
        let a = pair(&(&hp * &t), &t) / pair(&t, &t);
        let b = pair(&(&hp * &t), &sv) / pair(&sv, &sv);
        let theta = 0.5 * (a / b).atanh();
        let e1 = &t * theta.cosh() + &sv * theta.sinh();
        let e2 = &php * &e1;
        let lam_signed = pair(&(&hp * &e1), &e2) / pair(&e2, &e2);
        let residual = canonical_residual(
            &e1,
            &e2,
            &|w: &DVector<f64>| {
                if (w - &e1).norm() < 1e-9 {
                    &e2 * lam_signed
                } else {
                    &e1 * (-lam_signed)
                }
            },
            &[(-1.0, 0.0, 1.0)],
        );
        return Ok(HTypeReport {
            point: p.to_vec(),
            htype: HType::TypeIII,
            lambda,
            lambda_signed: lam_signed,
            adapted_frame: Some([vec3(&e1), vec3(&e2), vec3(&xip)]),
            pairing: FramePairing::OrthonormalPhiBasis,
            residual,
        });
    }

    // nilpotent branch: h² = 0, h ≠ 0. The pairing sign ε = sign g(w, hw)
    // is an invariant of the nilpotent class: h e₁ = ε e₂ in the adapted
    // null frame, and no frame change fixes ε.
    let w = if (&hp * &u).norm() >= (&hp * &v).norm() {
        u.clone()
    } else {
        v.clone()
    };
    let c = pair(&w, &(&hp * &w));
    if c.abs() < opts.zero_tol {
        return Err(ClassifyError::DegenerateGenerator(c));
    }
    let eps = c.signum();
    let u1 = &w / c.abs().sqrt();
    let e1 = &u1 - &(&hp * &u1) * (eps * pair(&u1, &u1) / 2.0);
    let e2 = (&hp * &e1) * eps;
    let residual = canonical_residual(
        &e1,
        &e2,
        &|w: &DVector<f64>| {
            if (w - &e1).norm() < 1e-9 {
                &e2 * eps
            } else {
                DVector::zeros(3)
            }
        },
        &[(0.0, 1.0, 0.0)],
    );
    Ok(HTypeReport {
        point: p.to_vec(),
        htype: HType::TypeII,
        lambda: 0.0,
        lambda_signed: eps,
        adapted_frame: Some([vec3(&e1), vec3(&e2), vec3(&xip)]),
        pairing: FramePairing::PseudoOrthonormal,
        residual,
    })
}

fn vec3(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

/// Pointwise nullity fit: the overdetermined linear system in (κ̃, μ̃, ν̃)
/// equating R(X,Y)ξ with the nullity ansatz over coordinate basis pairs.
#[derive(Debug, Clone)]
pub struct KmnFit {
    pub point: Vec<f64>,
    pub kappa: f64,
    pub mu: f64,
    pub nu: f64,
    /// Identifiability per coefficient; dropped coefficients are zero.
    pub identifiable: [bool; 3],
    /// Max norm of the ansatz discrepancy over the basis pairs.
    pub residual: f64,
}

/// Per-structure fitter: caches the symbolic curvature values R(∂a,∂b)ξ and
/// the regressor fields so pointwise fits are cheap.
pub struct NullityFitter<'a> {
    s: &'a MetricStructure,
    rxi: Vec<VectorField>,
    pairs: Vec<(usize, usize)>,
    phih: ExprMatrix,
}

impl<'a> NullityFitter<'a> {
    pub fn new(s: &'a MetricStructure) -> Self {
        let coords = s.coordinate_fields();
        let mut rxi = Vec::new();
        let mut pairs = Vec::new();
        for a in 0..s.dim() {
            for b in (a + 1)..s.dim() {
                rxi.push(s.lc.curvature(&coords[a], &coords[b], &s.xi));
                pairs.push((a, b));
            }
        }
        let phih = s.phi.m.matmul(&s.h.m);
        NullityFitter {
            s,
            rxi,
            pairs,
            phih,
        }
    }

    pub fn fit_at(&self, p: &[f64]) -> Result<KmnFit, ClassifyError> {
        let d = self.s.dim();
        let hp = self.s.h.eval(p)?;
        let php = self.phih.eval(p)?;
        let etap = self.s.eta.eval(p)?;

        let rows = self.pairs.len() * d;
        let mut a_mat = DMatrix::zeros(rows, 3);
        let mut rhs = DVector::zeros(rows);
        for (pi, ((a, b), rfield)) in self.pairs.iter().zip(&self.rxi).enumerate() {
            let mut x = DVector::zeros(d);
            x[*a] = 1.0;
            let mut y = DVector::zeros(d);
            y[*b] = 1.0;
            // regressors: η(Y)X − η(X)Y and its h, φh images
            let col_k = &x * etap[*b] - &y * etap[*a];
            let col_m = (&hp * &x) * etap[*b] - (&hp * &y) * etap[*a];
            let col_n = (&php * &x) * etap[*b] - (&php * &y) * etap[*a];
            let rv = rfield.eval(p)?;
            for c in 0..d {
                a_mat[(pi * d + c, 0)] = col_k[c];
                a_mat[(pi * d + c, 1)] = col_m[c];
                a_mat[(pi * d + c, 2)] = col_n[c];
                rhs[pi * d + c] = rv[c];
            }
        }
        let (sol, identifiable) = solve_ordered(&a_mat, &rhs);
        let resid = (&a_mat * &sol - &rhs).amax();
        Ok(KmnFit {
            point: p.to_vec(),
            kappa: sol[0],
            mu: sol[1],
            nu: sol[2],
            identifiable,
            residual: resid,
        })
    }
}

/// Least squares with ordered identifiability: columns are kept in priority
/// order (κ̃, then μ̃, then ν̃); a column that is numerically zero or lies in
/// the span of the kept earlier columns is dropped, its coefficient pinned
/// to zero and flagged unidentifiable. The surviving system is solved by SVD.
fn solve_ordered(a: &DMatrix<f64>, rhs: &DVector<f64>) -> (DVector<f64>, [bool; 3]) {
    let rows = a.nrows();
    let mut kept: Vec<usize> = Vec::new();
    let mut flags = [false; 3];
    let scale = a.amax().max(1e-30);
    for (col, flag) in flags.iter_mut().enumerate() {
        let v = a.column(col).into_owned();
        if v.norm() < 1e-9 * scale.max(1.0) {
            continue;
        }
        // residual of v against span of kept columns
        let mut r = v.clone();
        if !kept.is_empty() {
            let basis = DMatrix::from_columns(
                &kept.iter().map(|k| a.column(*k).into_owned()).collect::<Vec<_>>(),
            );
            let svd = basis.clone().svd(true, true);
            if let Ok(coef) = svd.solve(&v, 1e-12) {
                r = &v - &basis * coef;
            }
        }
        if r.norm() < 1e-9 * v.norm().max(1.0) {
            continue;
        }
        kept.push(col);
        *flag = true;
    }
    let mut sol = DVector::zeros(3);
    if !kept.is_empty() {
        let sub = DMatrix::from_columns(
            &kept.iter().map(|k| a.column(*k).into_owned()).collect::<Vec<_>>(),
        );
        let svd = sub.clone().svd(true, true);
        if let Ok(x) = svd.solve(rhs, 1e-12) {
            for (i, k) in kept.iter().enumerate() {
                sol[*k] = x[i];
            }
        }
    }
    let _ = rows;
    (sol, flags)
}

/// Symbolic adapted frame for a structure whose canonical form is constant
/// over the sampled region, built from the eigendistribution formulas
/// (diagonalizable cases) or the null-frame construction (nilpotent case).
pub struct AdaptedFrame {
    pub htype: HType,
    /// Timelike unit e (types I/III) or the null e₁ (type II).
    pub e1: VectorField,
    /// φe (types I/III) or the null partner e₂ with h e₁ = ε e₂ (type II).
    pub e2: VectorField,
    /// Eigenvalue magnitude field λ̃ = √(±tr h²/2); zero expr for type II.
    pub lambda: Expr,
    /// Gauge scalar: b = g(∇_ξ e, φe) (I), σ·g(∇_ξ e₁, e₂) (II, where
    /// σ = ±1 is the φ-eigenvalue on e₁), b̃₃ = g(∇_ξ e, φe) (III). In
    /// every case the canonical μ̃ is −2·gauge.
    pub gauge: Expr,
    /// Nilpotent pairing sign ε (type II); 1 otherwise.
    pub epsilon: f64,
    pub sigma_e1: Expr,
    pub sigma_e2: Expr,
}

/// Projected coordinate generators w = ∂c − η(∂c)ξ, scored on the samples.
fn ker_eta_candidates(s: &MetricStructure) -> Vec<VectorField> {
    let mut out = Vec::new();
    for c in 0..s.dim() {
        let coord = VectorField::coordinate(s.chart.clone(), c);
        let coeff = s.eta.apply(&coord);
        out.push(coord.sub(&s.xi.scale_expr(&coeff)));
    }
    // pairwise sums widen the net when a single projection degenerates
    for a in 0..s.dim() {
        for b in (a + 1)..s.dim() {
            out.push(out[a].add(&out[b]));
        }
    }
    out
}

fn best_candidate(
    s: &MetricStructure,
    candidates: &[VectorField],
    score_expr: impl Fn(&VectorField) -> Expr,
) -> Result<(VectorField, Expr), ClassifyError> {
    let mut best: Option<(f64, VectorField, Expr)> = None;
    for cand in candidates {
        let sc = score_expr(cand);
        let mut min_abs = f64::INFINITY;
        let mut ok = true;
        for p in &s.samples {
            match sc.evaluate(p) {
                Ok(v) => min_abs = min_abs.min(v.abs()),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _, _)| min_abs > *b) {
            best = Some((min_abs, cand.clone(), sc));
        }
    }
    match best {
        Some((score, cand, sc)) if score > 1e-8 => Ok((cand, sc)),
        Some((score, _, _)) => Err(ClassifyError::DegenerateGenerator(score)),
        None => Err(ClassifyError::DegenerateGenerator(0.0)),
    }
}

impl AdaptedFrame {
    /// Builds the symbolic frame after a constancy scan fixes the type.
    pub fn build(s: &MetricStructure, opts: ClassifyOptions) -> Result<AdaptedFrame, ClassifyError> {
        require_3d(s)?;
        let scan = type_constancy_scan(s, opts)?;
        let htype = scan.overall.ok_or(ClassifyError::MixedTypes(
            scan.types_seen[0],
            *scan.types_seen.last().unwrap(),
        ))?;
        Self::build_known(s, htype)
    }

    pub fn build_known(s: &MetricStructure, htype: HType) -> Result<AdaptedFrame, ClassifyError> {
        let tr_h2 = s.h.m.matmul(&s.h.m).trace();
        let candidates = ker_eta_candidates(s);
        let half = Expr::constant(0.5);
        match htype {
            HType::Zero => Err(ClassifyError::NotApplicable(HType::Zero)),
            HType::TypeI | HType::TypeIII => {
                let lambda = if htype == HType::TypeI {
                    tr_h2.mul(&half).sqrt()
                } else {
                    tr_h2.neg().mul(&half).sqrt()
                };
                // operator whose eigendistributions split ker η: h (I), φh (III)
                let op = if htype == HType::TypeI {
                    s.h.m.clone()
                } else {
                    s.phi.m.matmul(&s.h.m)
                };
                // E_± = X_± ± op X_± / λ with X_± = (φ ± 1)w in D^±
                let make_e = |sign: f64| -> Vec<(VectorField, Expr)> {
                    candidates
                        .iter()
                        .map(|w| {
                            let x = VectorField {
                                chart: s.chart.clone(),
                                comps: s
                                    .phi
                                    .m
                                    .apply(&w.comps)
                                    .iter()
                                    .zip(&w.comps)
                                    .map(|(pw, wc)| {
                                        if sign > 0.0 {
                                            pw.add(wc)
                                        } else {
                                            pw.sub(wc)
                                        }
                                    })
                                    .collect(),
                            };
                            let opx = op.apply(&x.comps);
                            let e = VectorField {
                                chart: s.chart.clone(),
                                comps: x
                                    .comps
                                    .iter()
                                    .zip(&opx)
                                    .map(|(xc, oc)| {
                                        let t = oc.div(&lambda);
                                        if sign > 0.0 {
                                            xc.add(&t)
                                        } else {
                                            xc.sub(&t)
                                        }
                                    })
                                    .collect(),
                            };
                            let norm2 = s.g.pair(&e, &e);
                            (e, norm2)
                        })
                        .collect()
                };
                // choose the branch and generator giving a robustly timelike e
                let mut best: Option<(f64, VectorField, Expr)> = None;
                for (e, norm2) in make_e(1.0).into_iter().chain(make_e(-1.0)) {
                    let mut min_neg = f64::INFINITY;
                    let mut ok = true;
                    for p in &s.samples {
                        match norm2.evaluate(p) {
                            Ok(v) if v < 0.0 => min_neg = min_neg.min(-v),
                            _ => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok && best.as_ref().is_none_or(|(b, _, _)| min_neg > *b) {
                        best = Some((min_neg, e, norm2));
                    }
                }
                let (score, e_raw, norm2) =
                    best.ok_or(ClassifyError::DegenerateGenerator(0.0))?;
                if score < 1e-8 {
                    return Err(ClassifyError::DegenerateGenerator(score));
                }
                let normalizer = norm2.neg().sqrt();
                let e1 = VectorField {
                    chart: s.chart.clone(),
                    comps: e_raw.comps.iter().map(|c| c.div(&normalizer)).collect(),
                };
                let e2 = s.phi.apply(&e1);
                let gauge = s.g.pair(&s.lc.cov_vf(&s.xi, &e1), &e2);
                let sigma_e1 = s.lc.ricci_pair(&s.xi, &e1);
                let sigma_e2 = s.lc.ricci_pair(&s.xi, &e2);
                Ok(AdaptedFrame {
                    htype,
                    e1,
                    e2,
                    lambda,
                    gauge,
                    epsilon: 1.0,
                    sigma_e1,
                    sigma_e2,
                })
            }
            HType::TypeII => {
                let (w, c) = best_candidate(s, &candidates, |w| {
                    let hw = s.h.apply(w);
                    s.g.pair(w, &hw)
                })?;
                // ε = sign g(w, hw) is constant on the region (validated by
                // best_candidate's min-|value| scoring plus the sign probe)
                let eps = c.evaluate(&s.samples[0]).map(|v| v.signum()).unwrap_or(1.0);
                for p in &s.samples {
                    if c.evaluate(p)?.signum() != eps {
                        return Err(ClassifyError::DegenerateGenerator(0.0));
                    }
                }
                let sqrt_c = c.scale(eps).sqrt();
                let u1 = VectorField {
                    chart: s.chart.clone(),
                    comps: w.comps.iter().map(|x| x.div(&sqrt_c)).collect(),
                };
                let hu1 = s.h.apply(&u1);
                let coeff = s.g.pair(&u1, &u1).mul(&half).scale(eps);
                let e1 = u1.sub(&hu1.scale_expr(&coeff));
                let e2 = s.h.apply(&e1).scale_expr(&Expr::constant(eps));
                // σ = φ-eigenvalue on e₁; the gauge σ·g(∇_ξe₁, e₂) makes
                // μ̃ = −2·gauge hold for both φ-orientations
                let sigma = s.g.pair(&s.phi.apply(&e1), &e2);
                let gauge = s.g.pair(&s.lc.cov_vf(&s.xi, &e1), &e2).mul(&sigma);
                let sigma_e1 = s.lc.ricci_pair(&s.xi, &e1);
                let sigma_e2 = s.lc.ricci_pair(&s.xi, &e2);
                Ok(AdaptedFrame {
                    htype,
                    e1,
                    e2,
                    lambda: Expr::zero(),
                    gauge,
                    epsilon: eps,
                    sigma_e1,
                    sigma_e2,
                })
            }
        }
    }

    /// Canonical-form residual records for this frame over the samples.
    pub fn verify(&self, s: &MetricStructure, tol: f64) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let he1 = s.h.apply(&self.e1);
        let he2 = s.h.apply(&self.e2);
        let mut defects: Vec<Expr> = Vec::new();
        match self.htype {
            HType::TypeI => {
                // h e = λ_s e with λ_s = −g(he, e) (since g(e,e) = −1)
                let lam_s = s.g.pair(&he1, &self.e1).neg();
                for k in 0..3 {
                    defects.push(he1.comps[k].sub(&lam_s.mul(&self.e1.comps[k])));
                    defects.push(he2.comps[k].add(&lam_s.mul(&self.e2.comps[k])));
                }
                defects.push(lam_s.abs().sub(&self.lambda.abs()));
            }
            HType::TypeIII => {
                let lam_s = s.g.pair(&he1, &self.e2);
                for k in 0..3 {
                    defects.push(he1.comps[k].sub(&lam_s.mul(&self.e2.comps[k])));
                    defects.push(he2.comps[k].add(&lam_s.mul(&self.e1.comps[k])));
                }
                defects.push(lam_s.abs().sub(&self.lambda.abs()));
            }
            HType::TypeII => {
                let eps = Expr::constant(self.epsilon);
                for k in 0..3 {
                    defects.push(he1.comps[k].sub(&eps.mul(&self.e2.comps[k])));
                    defects.push(he2.comps[k].clone());
                }
            }
            HType::Zero => {}
        }
        // frame pairing defects
        match self.htype {
            HType::TypeI | HType::TypeIII => {
                defects.push(s.g.pair(&self.e1, &self.e1).add(&Expr::one()));
                defects.push(s.g.pair(&self.e2, &self.e2).sub(&Expr::one()));
                defects.push(s.g.pair(&self.e1, &self.e2));
            }
            HType::TypeII => {
                defects.push(s.g.pair(&self.e1, &self.e2).sub(&Expr::one()));
                defects.push(s.g.pair(&self.e1, &self.e1));
                defects.push(s.g.pair(&self.e2, &self.e2));
            }
            HType::Zero => {}
        }
        defects.push(s.g.pair(&self.e1, &s.xi));
        defects.push(s.g.pair(&self.e2, &s.xi));
        out.push(Scan::exprs(&s.samples, &defects).record(
            "adapted-frame",
            "h takes its canonical form in the adapted frame",
            tol,
        ));
        out
    }
}

/// Closed-form (κ̃, μ̃, ν̃) from the adapted frame, valid where ξ is a Ricci
/// eigenvector: κ̃ = S(ξ,ξ)/2 in every case, μ̃ = −2·gauge, and
/// ν̃ = −ξ(λ̃)/λ̃ in the diagonalizable/rotation cases.
pub fn kmn_from_frame(
    s: &MetricStructure,
    frame: &AdaptedFrame,
    p: &[f64],
    harmonic_tol: f64,
) -> Result<KmnFit, ClassifyError> {
    // precondition: Q ξ collinear to ξ at p
    let qxi = s.lc.ricci_apply(&s.xi);
    let eta_qxi = s.eta.apply(&qxi);
    let proj: Vec<Expr> = (0..s.dim())
        .map(|k| qxi.comps[k].sub(&eta_qxi.mul(&s.xi.comps[k])))
        .collect();
    let mut defect = 0.0_f64;
    for e in &proj {
        defect = defect.max(e.evaluate(p)?.abs());
    }
    if defect > harmonic_tol {
        return Err(ClassifyError::NotHarmonic {
            point: p.to_vec(),
            defect,
        });
    }
    let kappa = s.lc.ricci_pair(&s.xi, &s.xi).evaluate(p)? / 2.0;
    let mu = -2.0 * frame.gauge.evaluate(p)?;
    match frame.htype {
        HType::TypeII => Ok(KmnFit {
            point: p.to_vec(),
            kappa,
            mu,
            nu: 0.0,
            identifiable: [true, true, false],
            residual: 0.0,
        }),
        _ => {
            let lam = frame.lambda.evaluate(p)?;
            let xi_lam = s.xi.derive(&frame.lambda).evaluate(p)?;
            Ok(KmnFit {
                point: p.to_vec(),
                kappa,
                mu,
                nu: -xi_lam / lam,
                identifiable: [true, true, true],
                residual: 0.0,
            })
        }
    }
}

/// Rank-1 projectors onto the ±λ̃ eigendistributions of h (κ̃ > −1) or φh
/// (κ̃ < −1), with their defining checks evaluated at the point.
pub struct EigenProjectors {
    pub plus: DMatrix<f64>,
    pub minus: DMatrix<f64>,
    pub lambda: f64,
    pub residual: f64,
}

pub fn eigendistribution_projectors(
    s: &MetricStructure,
    p: &[f64],
    opts: ClassifyOptions,
) -> Result<EigenProjectors, ClassifyError> {
    let rep = classify_h(s, p, opts)?;
    let op = match rep.htype {
        HType::TypeI => s.h.eval(p)?,
        HType::TypeIII => s.phi.eval(p)? * s.h.eval(p)?,
        t => return Err(ClassifyError::NotApplicable(t)),
    };
    let lambda = rep.lambda;
    // T has eigenvalues {0, ±λ}: P_± = T(T ± λ)/(2λ²)
    let id = DMatrix::identity(3, 3);
    let plus = (&op * (&op + &id * lambda)) / (2.0 * lambda * lambda);
    let minus = (&op * (&op - &id * lambda)) / (2.0 * lambda * lambda);
    let gp = s.g.eval(p)?;
    let php = s.phi.eval(p)?;
    let mut residual: f64 = 0.0;
    residual = residual.max((&plus * &plus - &plus).amax());
    residual = residual.max((&minus * &minus - &minus).amax());
    residual = residual.max((&plus * &minus).amax());
    // images are g-orthogonal
    residual = residual.max((plus.transpose() * &gp * &minus).amax());
    // eigen-equations
    residual = residual.max((&op * &plus - &plus * lambda).amax());
    residual = residual.max((&op * &minus + &minus * lambda).amax());
    // φ swaps the eigendistributions: φ P₊ = P₋ φ
    residual = residual.max((&php * &plus - &minus * &php).amax());
    Ok(EigenProjectors {
        plus,
        minus,
        lambda,
        residual,
    })
}

#[derive(Debug)]
pub struct ConstancyScan {
    /// The single type, when constant over all clusters.
    pub overall: Option<HType>,
    pub types_seen: Vec<HType>,
    /// (constraint sign pattern, type, points) per cluster.
    pub clusters: Vec<(Vec<i8>, HType, usize)>,
    pub max_frame_residual: f64,
    pub records: Vec<CheckRecord>,
}

/// Classifies at every sample point (where h ≠ 0) and checks that the type
/// is constant on each connected region, clustered by the sign pattern of
/// the chart constraints.
pub fn type_constancy_scan(
    s: &MetricStructure,
    opts: ClassifyOptions,
) -> Result<ConstancyScan, ClassifyError> {
    require_3d(s)?;
    let mut clusters: Vec<(Vec<i8>, HType, usize)> = Vec::new();
    let mut types_seen: Vec<HType> = Vec::new();
    let mut max_res = 0.0_f64;
    let mut mixed = false;
    for p in &s.samples {
        let rep = classify_h(s, p, opts)?;
        max_res = max_res.max(rep.residual);
        if rep.htype == HType::Zero {
            continue;
        }
        if !types_seen.contains(&rep.htype) {
            types_seen.push(rep.htype);
        }
        let pattern: Vec<i8> = s
            .chart
            .constraints
            .iter()
            .map(|c| {
                let v = c.expr.evaluate(p).unwrap_or(f64::NAN);
                if v > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        match clusters.iter_mut().find(|(pat, _, _)| *pat == pattern) {
            Some((_, t, count)) => {
                if *t != rep.htype {
                    mixed = true;
                }
                *count += 1;
            }
            None => clusters.push((pattern, rep.htype, 1)),
        }
    }
    let overall = if !mixed && types_seen.len() == 1 {
        Some(types_seen[0])
    } else {
        None
    };
    let mut records = Vec::new();
    records.push(
        CheckRecord::residual(
            "type-constancy",
            "canonical form of h is constant on connected regions",
            if mixed { 1.0 } else { 0.0 },
            None,
            0.0,
        )
        .with_note(format!(
            "types seen: {:?}; clusters: {}",
            types_seen.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            clusters.len()
        )),
    );
    records.push(CheckRecord::residual(
        "adapted-frame-pointwise",
        "pointwise canonical residual",
        max_res,
        None,
        1e-7,
    ));
    Ok(ConstancyScan {
        overall,
        types_seen,
        clusters,
        max_frame_residual: max_res,
        records,
    })
}

/// The nullity-condition identity suite: operator and curvature identities
/// implied by the (κ̃, μ̃, ν̃) condition, checked with the supplied
/// coefficient fields (symbolic expressions).
pub fn nullity_identity_suite(
    s: &MetricStructure,
    kappa: &Expr,
    mu: &Expr,
    nu: &Expr,
    frame: Option<&AdaptedFrame>,
    tol: f64,
) -> Vec<CheckRecord> {
    let samples = &s.samples;
    let mut out = Vec::new();
    let d = s.dim();
    let coords = s.coordinate_fields();
    let one = Expr::one();
    let h2 = s.h.m.matmul(&s.h.m);
    let phi2 = s.phi.m.matmul(&s.phi.m);
    let phih = s.phi.m.matmul(&s.h.m);
    let hphi = s.h.m.matmul(&s.phi.m);

    // h² = (1 + κ̃) φ²
    let target = phi2.scale(&one.add(kappa));
    out.push(Scan::exprs(samples, h2.sub(&target).entries_slice()).record(
        "h-squared",
        "h^2 = (1+kappa) phi^2",
        tol,
    ));

    // Q ξ = 2n κ̃ ξ
    let qxi = s.lc.ricci_apply(&s.xi);
    let scale = kappa.scale(2.0 * s.n() as f64);
    let defects: Vec<Expr> = (0..d)
        .map(|k| qxi.comps[k].sub(&scale.mul(&s.xi.comps[k])))
        .collect();
    out.push(Scan::exprs(samples, &defects).record("ricci-reeb", "Q xi = 2n kappa xi", tol));

    // ∇_ξ h = μ̃ h∘φ − ν̃ h  and  ∇_ξ (φh) = −μ̃ h + ν̃ h∘φ
    let nab_xi_h = s.lc.cov_end(&s.xi, &s.h);
    let target = hphi.scale(mu).sub(&s.h.m.scale(nu));
    out.push(
        Scan::exprs(samples, nab_xi_h.m.sub(&target).entries_slice()).record(
            "nabla-xi-h-kmn",
            "nabla_xi h = mu h∘phi - nu h",
            tol,
        ),
    );
    let phih_field = EndField::new(s.chart.clone(), phih.clone()).unwrap();
    let nab_xi_phih = s.lc.cov_end(&s.xi, &phih_field);
    let target = hphi.scale(nu).sub(&s.h.m.scale(mu));
    out.push(
        Scan::exprs(samples, nab_xi_phih.m.sub(&target).entries_slice()).record(
            "nabla-xi-phih-kmn",
            "nabla_xi (phi h) = -mu h + nu h∘phi",
            tol,
        ),
    );

    // R(ξ,X)Y expansion
    let mut defects = Vec::new();
    for x in &coords {
        let hx = s.h.apply(x);
        let phx = VectorField {
            chart: s.chart.clone(),
            comps: phih.apply(&x.comps),
        };
        for y in &coords {
            let r = s.lc.curvature(&s.xi, x, y);
            let eta_y = s.eta.apply(y);
            let t1k = s.g.pair(x, y);
            let t2k = s.g.pair(&hx, y);
            let t3k = s.g.pair(&phx, y);
            for k in 0..d {
                let rhs = kappa
                    .mul(&t1k.mul(&s.xi.comps[k]).sub(&eta_y.mul(&x.comps[k])))
                    .add(&mu.mul(&t2k.mul(&s.xi.comps[k]).sub(&eta_y.mul(&hx.comps[k]))))
                    .add(&nu.mul(&t3k.mul(&s.xi.comps[k]).sub(&eta_y.mul(&phx.comps[k]))));
                defects.push(r.comps[k].sub(&rhs));
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "curvature-reeb-slot",
        "R(xi,X)Y from the nullity condition",
        tol,
    ));

    // ξ(κ̃) = −2 ν̃ (1 + κ̃)
    let xi_kappa = s.xi.derive(kappa);
    let rhs = nu.scale(-2.0).mul(&one.add(kappa));
    out.push(Scan::exprs(samples, &[xi_kappa.sub(&rhs)]).record(
        "xi-kappa",
        "xi(kappa) = -2 nu (1+kappa)",
        tol,
    ));

    // differential relation from the second Bianchi identity
    let mut defects = Vec::new();
    let xi_mu = s.xi.derive(mu);
    let xi_nu = s.xi.derive(nu);
    let xi_kap = s.xi.derive(kappa);
    for (a, x) in coords.iter().enumerate() {
        for y in coords.iter().skip(a + 1) {
            let eta_x = s.eta.apply(x);
            let eta_y = s.eta.apply(y);
            let hx = s.h.m.apply(&x.comps);
            let hy = s.h.m.apply(&y.comps);
            let phx = phih.apply(&x.comps);
            let phy = phih.apply(&y.comps);
            let p2x = phi2.apply(&x.comps);
            let p2y = phi2.apply(&y.comps);
            let xk = x.derive(kappa);
            let yk = y.derive(kappa);
            let xm = x.derive(mu);
            let ym = y.derive(mu);
            let xn = x.derive(nu);
            let yn = y.derive(nu);
            for k in 0..d {
                let term = xi_kap
                    .mul(&eta_y.mul(&x.comps[k]).sub(&eta_x.mul(&y.comps[k])))
                    .add(&xi_mu.mul(&eta_y.mul(&hx[k]).sub(&eta_x.mul(&hy[k]))))
                    .add(&xi_nu.mul(&eta_y.mul(&phx[k]).sub(&eta_x.mul(&phy[k]))))
                    .add(&xk.mul(&p2y[k]))
                    .sub(&yk.mul(&p2x[k]))
                    .add(&xm.mul(&hy[k]))
                    .sub(&ym.mul(&hx[k]))
                    .add(&xn.mul(&phy[k]))
                    .sub(&yn.mul(&phx[k]));
                defects.push(term);
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "bianchi-differential",
        "second-Bianchi differential relation in (kappa, mu, nu)",
        tol,
    ));

    // h² − φ² = (S(ξ,ξ)/2) φ²
    let sxx = s.lc.ricci_pair(&s.xi, &s.xi);
    let target = phi2.scale(&sxx.scale(0.5));
    out.push(
        Scan::exprs(samples, h2.sub(&phi2).sub(&target).entries_slice()).record(
            "h2-phi2-ricci",
            "h^2 - phi^2 = (S(xi,xi)/2) phi^2",
            tol,
        ),
    );

    // type-specific ∇_ξ h forms
    if let Some(frame) = frame {
        let ge1 = s.g.m.transpose().apply(&frame.e1.comps);
        let ge2 = s.g.m.transpose().apply(&frame.e2.comps);
        let outer = |a: &VectorField, b: &[Expr]| -> ExprMatrix {
            let mut m = ExprMatrix::zeros(d);
            for i in 0..d {
                for (j, bj) in b.iter().enumerate() {
                    m.set(i, j, a.comps[i].mul(bj));
                }
            }
            m
        };
        let nab = s.lc.cov_end(&s.xi, &s.h).m;
        let (target, anchor) = match frame.htype {
            HType::TypeI => {
                // s: s e = e, s φe = −φe → s = −e⊗(g e) − φe⊗(g φe)
                let smat = outer(&frame.e1, &ge1)
                    .map(|e| e.neg())
                    .sub(&outer(&frame.e2, &ge2));
                // λ signed as the eigenvalue on the timelike eigenvector
                let lam_s = s.g.pair(&s.h.apply(&frame.e1), &frame.e1).neg();
                let xi_lam_s = s.xi.derive(&lam_s);
                (
                    hphi.scale(&frame.gauge.scale(-2.0)).add(&smat.scale(&xi_lam_s)),
                    "nabla_xi h = -2b h∘phi + xi(lambda) s (diagonalizable case)",
                )
            }
            HType::TypeII => (
                phih.scale(&frame.gauge.scale(2.0)),
                "nabla_xi h = 2 a2 phi∘h (nilpotent case)",
            ),
            HType::TypeIII => {
                let smat = outer(&frame.e2, &ge1)
                    .map(|e| e.neg())
                    .sub(&outer(&frame.e1, &ge2));
                let lam_s = s.g.pair(&s.h.apply(&frame.e1), &frame.e2);
                let xi_lam_s = s.xi.derive(&lam_s);
                (
                    hphi.scale(&frame.gauge.scale(-2.0)).add(&smat.scale(&xi_lam_s)),
                    "nabla_xi h = -2b3 h∘phi + xi(lambda) s (rotation case)",
                )
            }
            HType::Zero => (ExprMatrix::zeros(d), "h vanishes"),
        };
        out.push(Scan::exprs(samples, nab.sub(&target).entries_slice()).record(
            "nabla-xi-h-type",
            anchor,
            tol,
        ));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::structures::BuildOptions;

    fn opts() -> BuildOptions {
        BuildOptions {
            points: 30,
            ..Default::default()
        }
    }

    #[test]
    fn example41_is_type_i_with_lambda_z() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let p = vec![0.1, 0.5, 2.0];
        let rep = classify_h(&s, &p, ClassifyOptions::default()).unwrap();
        assert_eq!(rep.htype, HType::TypeI);
        assert!((rep.lambda - 2.0).abs() < 1e-9, "lambda = {}", rep.lambda);
        assert!(rep.residual < 1e-9);
    }

    #[test]
    fn example42_is_type_ii_everywhere() {
        let (s, _) = corpus::example42(opts()).unwrap();
        let scan = type_constancy_scan(&s, ClassifyOptions::default()).unwrap();
        assert_eq!(scan.overall, Some(HType::TypeII));
        assert!(scan.max_frame_residual < 1e-9);
    }

    #[test]
    fn example41_fit_matches_declared_values() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let fitter = NullityFitter::new(&s);
        for p in s.samples.iter().take(10) {
            let fit = fitter.fit_at(p).unwrap();
            let z = p[2];
            assert!(fit.residual < 1e-9, "residual {:.3e}", fit.residual);
            assert!((fit.kappa - (z * z - 1.0)).abs() < 1e-9);
            assert!((fit.mu - 2.0 * (1.0 - z)).abs() < 1e-9);
            assert!(fit.nu.abs() < 1e-9);
            assert_eq!(fit.identifiable, [true, true, true]);
        }
    }

    #[test]
    fn example42_fit_resolves_to_minus1_2_0() {
        let (s, _) = corpus::example42(opts()).unwrap();
        let fitter = NullityFitter::new(&s);
        let p = vec![0.3, 0.2, 0.1];
        let fit = fitter.fit_at(&p).unwrap();
        assert!(fit.residual < 1e-10);
        assert!((fit.kappa + 1.0).abs() < 1e-10);
        assert!((fit.mu - 2.0).abs() < 1e-10);
        assert_eq!(fit.nu, 0.0);
        assert_eq!(fit.identifiable, [true, true, false]);
    }

    #[test]
    fn kmn_from_frame_agrees_with_fit() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let frame = AdaptedFrame::build(&s, ClassifyOptions::default()).unwrap();
        assert_eq!(frame.htype, HType::TypeI);
        let fitter = NullityFitter::new(&s);
        for p in s.samples.iter().take(10) {
            let a = fitter.fit_at(p).unwrap();
            let b = kmn_from_frame(&s, &frame, p, 1e-7).unwrap();
            assert!((a.kappa - b.kappa).abs() < 1e-6);
            assert!((a.mu - b.mu).abs() < 1e-6);
            assert!((a.nu - b.nu).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_h_makes_mu_nu_unidentifiable() {
        let (s, _) = corpus::flat_k_paracontact(opts()).unwrap();
        let fitter = NullityFitter::new(&s);
        let p = s.samples[0].clone();
        let fit = fitter.fit_at(&p).unwrap();
        assert!((fit.kappa + 1.0).abs() < 1e-9, "kappa = {}", fit.kappa);
        assert_eq!(fit.identifiable, [true, false, false]);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn projectors_on_example41() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let p = vec![0.1, 0.5, 2.0];
        let pr = eigendistribution_projectors(&s, &p, ClassifyOptions::default()).unwrap();
        assert!(pr.residual < 1e-9, "residual {:.3e}", pr.residual);
    }

    #[test]
    fn projectors_not_applicable_on_type_ii() {
        let (s, _) = corpus::example42(opts()).unwrap();
        let p = s.samples[0].clone();
        assert!(matches!(
            eigendistribution_projectors(&s, &p, ClassifyOptions::default()),
            Err(ClassifyError::NotApplicable(HType::TypeII))
        ));
    }

    #[test]
    fn nullity_suite_on_example41() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let coords = &s.chart.coords;
        let kappa = crate::expr::parse("z^2-1", coords).unwrap();
        let mu = crate::expr::parse("2-2*z", coords).unwrap();
        let nu = Expr::zero();
        let frame = AdaptedFrame::build(&s, ClassifyOptions::default()).unwrap();
        for r in nullity_identity_suite(&s, &kappa, &mu, &nu, Some(&frame), 1e-7) {
            assert!(r.passed(), "{}: {:.3e}", r.id, r.max_residual);
        }
    }

    #[test]
    fn adapted_frame_verifies_on_both_examples() {
        for name in ["example41", "example42"] {
            let (s, _) = corpus::by_name(name, opts()).unwrap();
            let frame = AdaptedFrame::build(&s, ClassifyOptions::default()).unwrap();
            for r in frame.verify(&s, 1e-8) {
                assert!(r.passed(), "{name} {}: {:.3e}", r.id, r.max_residual);
            }
        }
    }

    #[test]
    fn frame_coefficients_need_harmonicity() {
        // the printed transcription of the type-I example has ξ not a Ricci
        // eigenvector, so the closed-form coefficients must refuse to fit
        let (s, _) = corpus::example41_as_printed(opts()).unwrap();
        let frame = AdaptedFrame::build(&s, ClassifyOptions::default()).unwrap();
        let err = kmn_from_frame(&s, &frame, &s.samples[0], 1e-7).unwrap_err();
        assert!(matches!(err, ClassifyError::NotHarmonic { .. }), "{err}");
    }

    #[test]
    fn vanishing_h_classifies_as_zero() {
        let (s, _) = corpus::flat_k_paracontact(opts()).unwrap();
        let rep = classify_h(&s, &s.samples[0], ClassifyOptions::default()).unwrap();
        assert_eq!(rep.htype, HType::Zero);
        assert_eq!(rep.lambda, 0.0);
    }

    #[test]
    fn broken_h_with_nonzero_h_xi_is_invalid_structure() {
        // φ chosen so h = ½∂x(φ) does not annihilate ξ = ∂x: the eigen
        // pattern of the excluded fourth canonical form
        let m = crate::manifest::Manifest::from_json(
            r#"{
            "name": "type-iv-pattern",
            "kind": "paracontact",
            "chart": {"coords": ["x","y","z"], "sample_bounds": [[-1,1],[-1,1],[-1,1]]},
            "presentation": {"coordinate": {
                "phi": [["0","0","0"],["x","0","1"],["0","1","0"]],
                "xi": ["1","0","0"],
                "eta": ["1","0","0"],
                "g": [["1","0","0"],["0","-1","0"],["0","0","1"]]
            }},
            "sampling": {"points": 10}
        }"#,
        )
        .unwrap();
        let (s, _) = m.build(None).unwrap();
        let err = classify_h(&s, &s.samples[0], ClassifyOptions::default()).unwrap_err();
        assert!(matches!(err, ClassifyError::InvalidStructure { .. }), "{err}");
    }
}
