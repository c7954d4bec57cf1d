//! Harmonicity of the Reeb field: rough Laplacian, the harmonic-vector-field
//! criterion (∇*∇ξ collinear to ξ), its equivalence with ξ being a Ricci
//! eigenvector, and the harmonic-map obstruction tr[R(∇·ξ, ξ)·].

use nalgebra::DVector;
use thiserror::Error;

use crate::classify::{AdaptedFrame, HType};
use crate::expr::{EvalError, Expr};
use crate::fields::VectorField;
use crate::geometry::{pseudo_orthonormal_frame, FrameError};
use crate::report::CheckRecord;
use crate::scan::Scan;
use crate::structures::MetricStructure;

#[derive(Debug, Error)]
pub enum HarmonicError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone)]
pub struct HarmonicReport {
    pub point: Vec<f64>,
    pub rough_laplacian_of_xi: Vec<f64>,
    /// Norm of the ker-η component of ∇*∇ξ.
    pub collinearity_defect: f64,
    /// Norm of the ker-η component of Qξ.
    pub ricci_eigen_defect: f64,
    pub obstruction: Vec<f64>,
    pub is_harmonic_vf: bool,
    /// Harmonic as a map into the unit tangent bundle:
    /// harmonic vector field plus vanishing obstruction.
    pub is_harmonic_map: bool,
    /// Harmonic as a map into the full tangent bundle:
    /// ∇*∇ξ = 0 plus vanishing obstruction.
    pub is_harmonic_map_tm: bool,
}

/// Per-structure engine: the pseudo-orthonormal frame, the symbolic rough
/// Laplacian of ξ and the symbolic obstruction field, built once.
pub struct HarmonicEngine<'a> {
    s: &'a MetricStructure,
    frame: Vec<(VectorField, f64)>,
    frame_reversed: Vec<(VectorField, f64)>,
    pub laplacian_xi: VectorField,
    laplacian_xi_alt: VectorField,
    pub obstruction_field: VectorField,
}

impl<'a> HarmonicEngine<'a> {
    pub fn new(s: &'a MetricStructure) -> Result<Self, HarmonicError> {
        let frame = pseudo_orthonormal_frame(&s.lc, &s.samples, false)?;
        let frame_reversed = pseudo_orthonormal_frame(&s.lc, &s.samples, true)?;
        let laplacian_xi = s.lc.rough_laplacian(&frame, &s.xi);
        let laplacian_xi_alt = s.lc.rough_laplacian(&frame_reversed, &s.xi);
        let obstruction_field = Self::obstruction(s, &frame);
        Ok(HarmonicEngine {
            s,
            frame,
            frame_reversed,
            laplacian_xi,
            laplacian_xi_alt,
            obstruction_field,
        })
    }

    /// tr[R(∇·ξ, ξ)·] = Σᵢ εᵢ R(∇_{Eᵢ}ξ, ξ)Eᵢ.
    fn obstruction(s: &MetricStructure, frame: &[(VectorField, f64)]) -> VectorField {
        let mut acc = VectorField {
            chart: s.chart.clone(),
            comps: vec![Expr::zero(); s.dim()],
        };
        for (e, sign) in frame {
            let nab_e_xi = s.lc.cov_vf(e, &s.xi);
            let term = s.lc.curvature(&nab_e_xi, &s.xi, e);
            acc = acc.add(&term.scale_expr(&Expr::constant(*sign)));
        }
        acc
    }

    /// Rough Laplacian of an arbitrary field at a point, with the
    /// frame-independence cross-check in the reversed-pivot frame.
    pub fn rough_laplacian_at(
        &self,
        v: &VectorField,
        p: &[f64],
    ) -> Result<(DVector<f64>, f64), HarmonicError> {
        let a = self.s.lc.rough_laplacian(&self.frame, v).eval(p)?;
        let b = self
            .s
            .lc
            .rough_laplacian(&self.frame_reversed, v)
            .eval(p)?;
        let agreement = (&a - &b).amax();
        Ok((a, agreement))
    }

    fn ker_eta_norm(&self, w: &DVector<f64>, p: &[f64]) -> Result<f64, EvalError> {
        let xi = self.s.xi.eval(p)?;
        let eta = self.s.eta.eval(p)?;
        let coeff = eta.dot(w);
        Ok((w - xi * coeff).norm())
    }

    pub fn report_at(&self, p: &[f64], tol: f64) -> Result<HarmonicReport, HarmonicError> {
        let lap = self.laplacian_xi.eval(p)?;
        let collinearity_defect = self.ker_eta_norm(&lap, p)?;
        let qxi = self.s.lc.ricci_apply(&self.s.xi).eval(p)?;
        let ricci_eigen_defect = self.ker_eta_norm(&qxi, p)?;
        let obs = self.obstruction_field.eval(p)?;
        let is_harmonic_vf = collinearity_defect < tol;
        let obs_zero = obs.amax() < tol;
        Ok(HarmonicReport {
            point: p.to_vec(),
            rough_laplacian_of_xi: lap.iter().copied().collect(),
            collinearity_defect,
            ricci_eigen_defect,
            obstruction: obs.iter().copied().collect(),
            is_harmonic_vf,
            is_harmonic_map: is_harmonic_vf && obs_zero,
            is_harmonic_map_tm: lap.amax() < tol && obs_zero,
        })
    }

    /// Records over the sample set: frame independence of the Laplacian,
    /// the equivalence between the collinearity and Ricci-eigenvector
    /// criteria, and the harmonicity verdicts.
    pub fn suite(&self, tol: f64) -> Vec<CheckRecord> {
        let samples = &self.s.samples;
        let mut out = Vec::new();

        let indep: Vec<Expr> = self
            .laplacian_xi
            .comps
            .iter()
            .zip(&self.laplacian_xi_alt.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        out.push(Scan::exprs(samples, &indep).record(
            "laplacian-frame-independence",
            "rough Laplacian agrees across two pivoted frames",
            1e-7,
        ));

        let mut agree = true;
        let mut max_coll = 0.0_f64;
        let mut max_ricci = 0.0_f64;
        let mut harmonic_everywhere = true;
        let mut worst: Option<Vec<f64>> = None;
        for p in samples {
            match self.report_at(p, tol) {
                Ok(rep) => {
                    max_coll = max_coll.max(rep.collinearity_defect);
                    max_ricci = max_ricci.max(rep.ricci_eigen_defect);
                    let a = rep.collinearity_defect < tol;
                    let b = rep.ricci_eigen_defect < tol;
                    if a != b {
                        agree = false;
                        worst = Some(p.clone());
                    }
                    if !a {
                        harmonic_everywhere = false;
                    }
                }
                Err(e) => {
                    out.push(CheckRecord::residual(
                        "harmonicity",
                        "harmonic report evaluation",
                        f64::INFINITY,
                        Some(p.clone()),
                        tol,
                    ).with_note(e.to_string()));
                    return out;
                }
            }
        }
        out.push(
            CheckRecord::residual(
                "harmonic-equivalence",
                "∇*∇ξ collinear to ξ iff ξ is a Ricci eigenvector",
                if agree { 0.0 } else { 1.0 },
                worst,
                0.0,
            )
            .with_note(format!(
                "max collinearity defect {max_coll:.3e}, max Ricci-eigenvector defect {max_ricci:.3e}"
            )),
        );
        out.push(CheckRecord::info(
            "harmonic-verdict",
            "ξ harmonic vector field over the sampled region",
            format!("{harmonic_everywhere}"),
        ));
        out
    }

    /// Obstruction against its closed form on nullity structures:
    /// 2λ̃²ν̃ξ (type I), 0 (type II), −2λ̃²ν̃ξ (type III).
    pub fn obstruction_formula_check(
        &self,
        frame: &AdaptedFrame,
        nu: &Expr,
        tol: f64,
    ) -> CheckRecord {
        let lam2 = frame.lambda.mul(&frame.lambda);
        let coeff = match frame.htype {
            HType::TypeI => lam2.mul(nu).scale(2.0),
            HType::TypeII | HType::Zero => Expr::zero(),
            HType::TypeIII => lam2.mul(nu).scale(-2.0),
        };
        let defects: Vec<Expr> = (0..self.s.dim())
            .map(|k| {
                self.obstruction_field.comps[k].sub(&coeff.mul(&self.s.xi.comps[k]))
            })
            .collect();
        Scan::exprs(&self.s.samples, &defects).record(
            "obstruction-formula",
            "tr[R(∇·ξ,ξ)·] = ±2λ̃²ν̃ ξ per canonical form",
            tol,
        )
    }
}
