//! D_α-homothetic deformations: η̄ = αη, ξ̄ = ξ/α, φ̄ = φ,
//! ḡ = αg + α(α−1)η⊗η, with the transformation laws they induce on the
//! connection, the tensor h and the nullity coefficients.

use thiserror::Error;

use crate::expr::Expr;
use crate::fields::{EndField, ExprMatrix, MetricField, OneForm, VectorField};
use crate::report::CheckRecord;
use crate::scan::Scan;
use crate::structures::{
    build_from_coordinate, Flavor, MetricStructure, StructureError,
};

#[derive(Debug, Error)]
pub enum DeformError {
    #[error("deformation parameter must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("deformation is defined for paracontact structures")]
    WrongFlavor,
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Applies the deformation and fully revalidates the result. The records
/// include the h̄ = h/α law.
pub fn d_homothetic(
    s: &MetricStructure,
    alpha: f64,
) -> Result<(MetricStructure, Vec<CheckRecord>), DeformError> {
    if alpha <= 0.0 {
        return Err(DeformError::NonPositiveAlpha(alpha));
    }
    if s.flavor != Flavor::Paracontact {
        return Err(DeformError::WrongFlavor);
    }
    let a = Expr::constant(alpha);
    let a1 = Expr::constant(alpha * (alpha - 1.0));
    let d = s.dim();
    let mut g_bar = ExprMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let e = s.g.m.get(i, j).mul(&a).add(
                &s.eta.comps[i].mul(&s.eta.comps[j]).mul(&a1),
            );
            g_bar.set(i, j, e);
        }
    }
    let eta_bar = OneForm::new(
        s.chart.clone(),
        s.eta.comps.iter().map(|e| e.mul(&a)).collect(),
    )
    .map_err(StructureError::Field)?;
    let xi_bar = VectorField::new(
        s.chart.clone(),
        s.xi.comps.iter().map(|e| e.div(&a)).collect(),
    )
    .map_err(StructureError::Field)?;
    let phi_bar = EndField::new(s.chart.clone(), s.phi.m.clone()).map_err(StructureError::Field)?;
    let g_bar = MetricField::new(s.chart.clone(), g_bar).map_err(StructureError::Field)?;
    let (deformed, mut records) = build_from_coordinate(
        Flavor::Paracontact,
        s.chart.clone(),
        phi_bar,
        xi_bar,
        eta_bar,
        g_bar,
        s.options,
    )?;
    let target = s.h.m.map(|e| e.scale(1.0 / alpha));
    records.push(
        Scan::exprs(&s.samples, deformed.h.m.sub(&target).entries_slice()).record(
            "h-bar",
            "h̄ = h/α",
            1e-8,
        ),
    );
    Ok((deformed, records))
}

/// Dual-path checks of the deformed connection and curvature:
/// ∇̄_X Y = ∇_X Y + ((α−1)/α) g(φhX, Y)ξ − (α−1)(η(Y)φX + η(X)φY), and
/// αR̄(X,Y)ξ̄ = R(X,Y)ξ − (α−1)[(∇_Xφ)Y − (∇_Yφ)X + η(Y)(X−hX) − η(X)(Y−hY)]
///             − (α−1)²(η(Y)X − η(X)Y).
pub fn deformed_connection_check(
    s: &MetricStructure,
    deformed: &MetricStructure,
    alpha: f64,
    tol: f64,
) -> Vec<CheckRecord> {
    let samples = &s.samples;
    let d = s.dim();
    let coords = s.coordinate_fields();
    let phih = s.phi.m.matmul(&s.h.m);
    let c1 = Expr::constant((alpha - 1.0) / alpha);
    let c2 = Expr::constant(alpha - 1.0);
    let mut out = Vec::new();

    let mut defects = Vec::new();
    for x in &coords {
        for y in &coords {
            let lhs = deformed.lc.cov_vf(x, y);
            let base = s.lc.cov_vf(x, y);
            let phihx = phih.apply(&x.comps);
            let phihx_vf = VectorField {
                chart: s.chart.clone(),
                comps: phihx,
            };
            let coeff = s.g.pair(&phihx_vf, y).mul(&c1);
            let eta_x = s.eta.apply(x);
            let eta_y = s.eta.apply(y);
            let phx = s.phi.apply(x);
            let phy = s.phi.apply(y);
            for k in 0..d {
                let rhs = base.comps[k]
                    .add(&coeff.mul(&s.xi.comps[k]))
                    .sub(&c2.mul(&eta_y.mul(&phx.comps[k]).add(&eta_x.mul(&phy.comps[k]))));
                defects.push(lhs.comps[k].sub(&rhs));
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "deformed-connection",
        "Levi-Civita connection of ḡ matches the deformation formula",
        tol,
    ));

    let mut defects = Vec::new();
    for (a_idx, x) in coords.iter().enumerate() {
        for y in coords.iter().skip(a_idx + 1) {
            let lhs = deformed
                .lc
                .curvature(x, y, &deformed.xi)
                .scale_expr(&Expr::constant(alpha));
            let rxy = s.lc.curvature(x, y, &s.xi);
            let npx = s.lc.cov_end(x, &s.phi).m.apply(&y.comps);
            let npy = s.lc.cov_end(y, &s.phi).m.apply(&x.comps);
            let hx = s.h.apply(x);
            let hy = s.h.apply(y);
            let eta_x = s.eta.apply(x);
            let eta_y = s.eta.apply(y);
            for k in 0..d {
                let bracket = npx[k]
                    .sub(&npy[k])
                    .add(&eta_y.mul(&x.comps[k].sub(&hx.comps[k])))
                    .sub(&eta_x.mul(&y.comps[k].sub(&hy.comps[k])));
                let last = eta_y
                    .mul(&x.comps[k])
                    .sub(&eta_x.mul(&y.comps[k]))
                    .scale((alpha - 1.0) * (alpha - 1.0));
                let rhs = rxy.comps[k]
                    .sub(&c2.mul(&bracket))
                    .sub(&last);
                defects.push(lhs.comps[k].sub(&rhs));
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "deformed-curvature",
        "αR̄(X,Y)ξ̄ transfer law",
        tol,
    ));

    out
}

/// Closed-form transformation of the nullity coefficients:
/// κ̄ = (κ+1−α²)/α², μ̄ = (μ+2α−2)/α, ν̄ = ν/α.
pub fn kmn_transform(kappa: f64, mu: f64, nu: f64, alpha: f64) -> (f64, f64, f64) {
    (
        (kappa + 1.0 - alpha * alpha) / (alpha * alpha),
        (mu + 2.0 * alpha - 2.0) / alpha,
        nu / alpha,
    )
}

/// Group law: deforming by α then β equals deforming by αβ, field by field.
pub fn group_law_check(
    s: &MetricStructure,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<Vec<CheckRecord>, DeformError> {
    let (first, _) = d_homothetic(s, alpha)?;
    let (twice, _) = d_homothetic(&first, beta)?;
    let (once, _) = d_homothetic(s, alpha * beta)?;
    let mut defects: Vec<Expr> = Vec::new();
    defects.extend(
        twice
            .g
            .m
            .sub(&once.g.m)
            .entries_slice()
            .iter()
            .cloned(),
    );
    defects.extend(
        twice
            .phi
            .m
            .sub(&once.phi.m)
            .entries_slice()
            .iter()
            .cloned(),
    );
    for k in 0..s.dim() {
        defects.push(twice.eta.comps[k].sub(&once.eta.comps[k]));
        defects.push(twice.xi.comps[k].sub(&once.xi.comps[k]));
        let hk = twice.h.m.entries_slice()[k].clone();
        let _ = hk;
    }
    defects.extend(
        twice
            .h
            .m
            .sub(&once.h.m)
            .entries_slice()
            .iter()
            .cloned(),
    );
    let mut out = vec![Scan::exprs(&s.samples, &defects).record(
        "deformation-group-law",
        "deforming by α then β equals deforming by αβ",
        tol,
    )];
    // closed form on rational test values: exact algebra
    let mut worst: f64 = 0.0;
    for (k, m, n) in [(-1.0, 2.0, 0.0), (3.0, -2.0, 0.0), (0.25, 1.5, -2.0)] {
        let (k1, m1, n1) = kmn_transform(k, m, n, alpha);
        let (k2, m2, n2) = kmn_transform(k1, m1, n1, beta);
        let (k3, m3, n3) = kmn_transform(k, m, n, alpha * beta);
        worst = worst
            .max((k2 - k3).abs())
            .max((m2 - m3).abs())
            .max((n2 - n3).abs());
    }
    out.push(CheckRecord::residual(
        "kmn-transform-group-law",
        "coefficient transform composes multiplicatively",
        worst,
        None,
        1e-12,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{type_constancy_scan, HType, NullityFitter};
    use crate::corpus;
    use crate::structures::BuildOptions;

    fn opts() -> BuildOptions {
        BuildOptions {
            points: 25,
            ..Default::default()
        }
    }

    #[test]
    fn alpha_one_is_identity() {
        let (s, _) = corpus::example42(opts()).unwrap();
        let (d, records) = d_homothetic(&s, 1.0).unwrap();
        for r in &records {
            assert!(r.passed(), "{}: {:.3e}", r.id, r.max_residual);
        }
        let p = s.samples[0].clone();
        let a = s.g.eval(&p).unwrap();
        let b = d.g.eval(&p).unwrap();
        assert!((a - b).amax() < 1e-14);
    }

    #[test]
    fn alpha_nonpositive_rejected() {
        let (s, _) = corpus::example42(opts()).unwrap();
        assert!(matches!(
            d_homothetic(&s, 0.0),
            Err(DeformError::NonPositiveAlpha(_))
        ));
        assert!(d_homothetic(&s, -2.0).is_err());
    }

    #[test]
    fn deformed_example42_stays_type_ii_and_transforms() {
        let (s, _) = corpus::example42(opts()).unwrap();
        for alpha in [0.5, 2.0, 3.0] {
            let (d, records) = d_homothetic(&s, alpha).unwrap();
            for r in &records {
                assert!(r.passed(), "alpha {alpha}: {} {:.3e}", r.id, r.max_residual);
            }
            let scan = type_constancy_scan(&d, Default::default()).unwrap();
            assert_eq!(scan.overall, Some(HType::TypeII), "alpha {alpha}");
            let fitter = NullityFitter::new(&d);
            let p = d.samples[0].clone();
            let fit = fitter.fit_at(&p).unwrap();
            let (k, m, _) = kmn_transform(-1.0, 2.0, 0.0, alpha);
            assert!((fit.kappa - k).abs() < 1e-6);
            assert!((fit.mu - m).abs() < 1e-6);
        }
    }

    #[test]
    fn deformed_connection_and_curvature_laws() {
        let (s, _) = corpus::example42(opts()).unwrap();
        for alpha in [3.0, 0.5] {
            let (d, _) = d_homothetic(&s, alpha).unwrap();
            for r in deformed_connection_check(&s, &d, alpha, 1e-8) {
                assert!(r.passed(), "alpha {alpha}: {} {:.3e}", r.id, r.max_residual);
            }
        }
    }

    #[test]
    fn example41_deforms_with_kappa_law() {
        let (s, _) = corpus::example41(opts()).unwrap();
        let alpha = 2.0;
        let (d, records) = d_homothetic(&s, alpha).unwrap();
        for r in &records {
            assert!(r.passed(), "{}: {:.3e}", r.id, r.max_residual);
        }
        let fitter = NullityFitter::new(&d);
        for p in d.samples.iter().take(6) {
            let fit = fitter.fit_at(p).unwrap();
            let z = p[2];
            let (k, m, n) = kmn_transform(z * z - 1.0, 2.0 - 2.0 * z, 0.0, alpha);
            assert!(fit.residual < 1e-8);
            assert!((fit.kappa - k).abs() < 1e-6);
            assert!((fit.mu - m).abs() < 1e-6);
            assert!((fit.nu - n).abs() < 1e-6);
        }
        // at z = 2, α = 2: (3, −2, 0) ↦ (0, 0, 0)
        let (k, m, n) = kmn_transform(3.0, -2.0, 0.0, 2.0);
        assert_eq!((k, m, n), (0.0, 0.0, 0.0));
    }

    #[test]
    fn group_law_holds() {
        let (s, _) = corpus::example42(opts()).unwrap();
        for r in group_law_check(&s, 2.0, 3.0, 1e-8).unwrap() {
            assert!(r.passed(), "{}: {:.3e}", r.id, r.max_residual);
        }
    }
}
