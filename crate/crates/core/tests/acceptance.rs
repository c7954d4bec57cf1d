//! Acceptance suite: every shipped claim exercised end to end, one test per
//! criterion, each printing a PASS/FAIL line (run with `--nocapture` to see
//! them all). Tolerances are pinned in code, not configurable.

use nalgebra::DMatrix;
use paraverify::classify::{
    classify_h, type_constancy_scan, AdaptedFrame, ClassifyOptions, HType, NullityFitter,
};
use paraverify::corpus::{self, SuiteOptions};
use paraverify::deform::{d_homothetic, group_law_check, kmn_transform};
use paraverify::harmonic::HarmonicEngine;
use paraverify::report::Report;
use paraverify::structures::{BuildOptions, MetricStructure};

fn opts() -> BuildOptions {
    BuildOptions::default() // 100 points, seed 42, tol 1e-8
}

fn verdict(n: &str, ok: bool, detail: &str) {
    println!(
        "criterion {n}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn u43(p: &[f64]) -> f64 {
    2.0 * p[0] + (p[1] + p[2]).exp()
}

/// Example with κ̃ = −1: fit is exactly (−1, 2, 0), the canonical form is
/// nilpotent everywhere, and h̃² = 0 with h̃ ≠ 0.
#[test]
fn criterion_1_example42_reproduction() {
    let report = corpus::run_corpus_suite("example42", &SuiteOptions::default()).unwrap();
    let mut ok = report.all_passed();
    let (s, _) = corpus::example42(opts()).unwrap();
    assert_eq!(s.samples.len(), 100);
    let fitter = NullityFitter::new(&s);
    let mut max_res = 0.0_f64;
    let mut max_val = 0.0_f64;
    for p in &s.samples {
        let fit = fitter.fit_at(p).unwrap();
        max_res = max_res.max(fit.residual);
        max_val = max_val
            .max((fit.kappa + 1.0).abs())
            .max((fit.mu - 2.0).abs())
            .max(fit.nu.abs());
    }
    ok &= max_res < 1e-8 && max_val < 1e-8;
    let scan = type_constancy_scan(&s, ClassifyOptions::default()).unwrap();
    ok &= scan.overall == Some(HType::TypeII);
    let h2 = s.h.m.matmul(&s.h.m);
    let mut h2_max = 0.0_f64;
    let mut h_max = 0.0_f64;
    for p in &s.samples {
        h2_max = h2_max.max(h2.eval(p).unwrap().amax());
        h_max = h_max.max(s.h.eval(p).unwrap().amax());
    }
    ok &= h2_max < 1e-12 && h_max > 0.5;
    verdict(
        "1",
        ok,
        &format!(
            "fit (−1,2,0) residual {max_res:.2e}, value defect {max_val:.2e}, type II, h²={h2_max:.2e}, |h|={h_max:.2}"
        ),
    );
}

/// Type-I example: fitted coefficients match the closed forms in z and the
/// classifier reports λ̃ = |z|. The as-printed transcription is the typo
/// contingency: axioms pass but the report localizes the failure.
#[test]
fn criterion_2_example41_reproduction_and_typo_localization() {
    let (s, records) = corpus::example41(opts()).unwrap();
    let mut ok = records.iter().all(|r| r.passed());
    let fitter = NullityFitter::new(&s);
    let mut defect = 0.0_f64;
    for p in &s.samples {
        let fit = fitter.fit_at(p).unwrap();
        let z = p[2];
        defect = defect
            .max((fit.kappa - (z * z - 1.0)).abs())
            .max((fit.mu - 2.0 * (1.0 - z)).abs())
            .max(fit.nu.abs());
        let rep = classify_h(&s, p, ClassifyOptions::default()).unwrap();
        ok &= rep.htype == HType::TypeI;
        defect = defect.max((rep.lambda - z.abs()).abs());
    }
    ok &= defect < 1e-6;

    // typo contingency: the printed transcription passes every axiom but is
    // not a nullity structure; the suite must localize this
    let (printed, printed_records) = corpus::example41_as_printed(opts()).unwrap();
    let axioms_pass = printed_records.iter().all(|r| r.passed());
    let engine = HarmonicEngine::new(&printed).unwrap();
    let rep = engine.report_at(&printed.samples[0], 1e-7).unwrap();
    let fit = NullityFitter::new(&printed)
        .fit_at(&printed.samples[0])
        .unwrap();
    let localized = axioms_pass && !rep.is_harmonic_vf && fit.residual > 1e-3;
    println!(
        "  localization artifact (example41 as printed): axioms pass = {axioms_pass}, \
         Ricci-eigenvector defect = {:.6}, fit residual = {:.3e}",
        rep.ricci_eigen_defect, fit.residual
    );
    ok &= localized;
    verdict(
        "2",
        ok,
        &format!("fit/classify defect {defect:.2e}; as-printed variant localized"),
    );
}

/// Contact example and its induced paracontact structure: both fits match
/// their closed forms and the induced canonical form is the rotation type
/// with λ̃ = √(1−κ).
#[test]
fn criterion_3_bridge_reproduction() {
    let (contact, records) = corpus::by_name("example43", opts()).unwrap();
    let mut ok = records.iter().all(|r| r.passed());
    let fitter = NullityFitter::new(&contact);
    let mut defect = 0.0_f64;
    for p in &contact.samples {
        let fit = fitter.fit_at(p).unwrap();
        let u = u43(p);
        defect = defect
            .max((fit.kappa - (1.0 - 1.0 / (u * u))).abs())
            .max((fit.mu - 2.0).abs())
            .max((fit.nu + 2.0 / u).abs());
    }
    ok &= defect < 1e-6;

    let (induced, ind_records) = corpus::by_name("example43-bridge", opts()).unwrap();
    ok &= ind_records.iter().all(|r| r.passed());
    let ifitter = NullityFitter::new(&induced);
    let mut idefect = 0.0_f64;
    for p in &induced.samples {
        let fit = ifitter.fit_at(p).unwrap();
        let u = u43(p);
        let kappa = 1.0 - 1.0 / (u * u);
        idefect = idefect
            .max((fit.kappa - (kappa - 2.0)).abs())
            .max((fit.mu - 2.0).abs())
            .max((fit.nu - 2.0 / u).abs());
        let rep = classify_h(&induced, p, ClassifyOptions::default()).unwrap();
        ok &= rep.htype == HType::TypeIII;
        idefect = idefect.max((rep.lambda - (1.0 - kappa).sqrt()).abs());
    }
    ok &= idefect < 1e-6;
    verdict(
        "3",
        ok,
        &format!("contact defect {defect:.2e}, induced defect {idefect:.2e}, type III"),
    );
}

/// Deformation laws at α ∈ {0.5, 2, 3} on both explicit examples, plus the
/// group law.
#[test]
fn criterion_4_deformation_laws() {
    let mut ok = true;
    let mut detail = String::new();
    for name in ["example41", "example42"] {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        let base_fitter = NullityFitter::new(&s);
        for alpha in [0.5, 2.0, 3.0] {
            let (deformed, records) = d_homothetic(&s, alpha).unwrap();
            let hbar = records.iter().find(|r| r.id == "h-bar").unwrap();
            ok &= hbar.passed() && hbar.tolerance <= 1e-8;
            ok &= records.iter().all(|r| r.passed());
            let def_fitter = NullityFitter::new(&deformed);
            let mut gap = 0.0_f64;
            for p in s.samples.iter() {
                let base = base_fitter.fit_at(p).unwrap();
                let def = def_fitter.fit_at(p).unwrap();
                let (k, m, n) = kmn_transform(base.kappa, base.mu, base.nu, alpha);
                gap = gap.max((def.kappa - k).abs());
                if def.identifiable[1] && base.identifiable[1] {
                    gap = gap.max((def.mu - m).abs());
                }
                if def.identifiable[2] && base.identifiable[2] {
                    gap = gap.max((def.nu - n).abs());
                }
            }
            ok &= gap < 1e-6;
            detail.push_str(&format!("{name} α={alpha}: gap {gap:.1e}; "));
        }
        for r in group_law_check(&s, 2.0, 3.0, 1e-8).unwrap() {
            ok &= r.passed();
        }
        for r in group_law_check(&s, 0.5, 2.0, 1e-8).unwrap() {
            ok &= r.passed();
        }
    }
    verdict("4", ok, &detail);
}

/// Identity suites over every corpus entry at 100 seeded points, each
/// residual below 1e-7 (the geometry-level ones below their own tighter
/// tolerances).
#[test]
fn criterion_5_identity_suites() {
    let para_ids = [
        "metric-compat",
        "torsion-free",
        "three-dim-curvature",
        "nabla-xi",
        "ricci-xi",
        "nabla-xi-h",
        "h-squared",
        "xi-kappa",
        "bianchi-differential",
        "nabla-xi-h-type",
        "h2-phi2-ricci",
    ];
    let contact_ids = [
        "metric-compat",
        "torsion-free",
        "three-dim-curvature",
        "ricci-xi",
        "h2-contact",
        "xi-kappa-contact",
        "xi-lambda-contact",
        "nabla-xi-h-contact",
    ];
    let mut ok = true;
    let mut detail = String::new();
    for name in corpus::NAMES {
        let report = corpus::run_corpus_suite(name, &SuiteOptions::default()).unwrap();
        let is_contact = matches!(name, "example43" | "zetamu-plus-1");
        let wanted: &[&str] = if is_contact { &contact_ids } else { &para_ids };
        for id in wanted {
            match report.records.iter().find(|r| r.id == *id) {
                Some(r) => {
                    if !(r.passed() && r.max_residual < 1e-7) {
                        ok = false;
                        detail.push_str(&format!("{name}/{id} residual {:.2e}; ", r.max_residual));
                    }
                }
                None => {
                    ok = false;
                    detail.push_str(&format!("{name}/{id} missing; "));
                }
            }
        }
    }
    if detail.is_empty() {
        detail = "all identity records present and below tolerance".into();
    }
    verdict("5", ok, &detail);
}

/// The two harmonicity criteria agree at every sampled point of every
/// corpus entry, and both fail together on the perturbed negative control.
#[test]
fn criterion_6_harmonicity_equivalence() {
    let mut ok = true;
    let tol = 1e-7;
    for name in corpus::NAMES {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        let engine = HarmonicEngine::new(&s).unwrap();
        for p in &s.samples {
            let rep = engine.report_at(p, tol).unwrap();
            let a = rep.collinearity_defect < tol;
            let b = rep.ricci_eigen_defect < tol;
            if a != b {
                ok = false;
            }
        }
    }
    let (neg, _) = corpus::example42_perturbed(opts()).unwrap();
    let engine = HarmonicEngine::new(&neg).unwrap();
    let mut saw_failure = false;
    for p in &neg.samples {
        let rep = engine.report_at(p, tol).unwrap();
        let a = rep.collinearity_defect < tol;
        let b = rep.ricci_eigen_defect < tol;
        if a != b {
            ok = false;
        }
        if !a {
            saw_failure = true;
        }
    }
    ok &= saw_failure;
    verdict(
        "6",
        ok,
        "verdicts agree everywhere; perturbed control fails both criteria",
    );
}

/// Obstruction closed forms per canonical type on the corpus, and the
/// ∇̃*∇̃ξ = 2ξ reduction on the constant-ν model bridge (where its
/// hypotheses hold).
#[test]
fn criterion_7_obstruction_formulas() {
    let mut ok = true;
    let mut detail = String::new();
    // paracontact entries with declared ν̃ fields
    for name in ["example41", "example42", "example43-bridge", "typei-nu"] {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        let (_, _, nu) = corpus::declared_kmn(name, &s).unwrap();
        let nu = nu.unwrap();
        let frame = AdaptedFrame::build(&s, ClassifyOptions::default()).unwrap();
        let engine = HarmonicEngine::new(&s).unwrap();
        let rec = engine.obstruction_formula_check(&frame, &nu, 1e-6);
        ok &= rec.passed();
        detail.push_str(&format!("{name}({}): {:.1e}; ", frame.htype, rec.max_residual));
    }
    // constant-ν model bridge: type II, so the Laplacian reduces to 2ξ
    let (contact, _) = corpus::by_name("zetamu-plus-1", opts()).unwrap();
    let (bridge, _) = paraverify::bridge::induce_paracontact(&contact, opts()).unwrap();
    let engine = HarmonicEngine::new(&bridge).unwrap();
    let mut lap_defect = 0.0_f64;
    for p in &bridge.samples {
        let rep = engine.report_at(p, 1e-7).unwrap();
        let xi = bridge.xi.eval(p).unwrap();
        for k in 0..3 {
            lap_defect = lap_defect.max((rep.rough_laplacian_of_xi[k] - 2.0 * xi[k]).abs());
        }
    }
    ok &= lap_defect < 1e-6;
    detail.push_str(&format!("zetamu-bridge ∇*∇ξ−2ξ: {lap_defect:.1e}"));
    verdict("7", ok, &detail);
}

/// Faithful check of the literal claim that ∇̃*∇̃ξ = 2ξ on the example43
/// bridge. The ξ-component of ∇̃*∇̃ξ is 2 + tr h̃² for any paracontact
/// structure, which is 2(1−λ̃²) ≠ 2 on a type-III structure; the source
/// equation's reduction to 2ξ presupposes the constant-ν model hypotheses,
/// under which the induced structure is type II. Expected to FAIL with
/// residual 2λ̃²; see the decisions ledger.
#[test]
fn criterion_7_literal_laplacian_on_example43_bridge() {
    let (bridge, _) = corpus::by_name("example43-bridge", opts()).unwrap();
    let engine = HarmonicEngine::new(&bridge).unwrap();
    let mut defect = 0.0_f64;
    let mut predicted = 0.0_f64;
    for p in &bridge.samples {
        let rep = engine.report_at(p, 1e-7).unwrap();
        let xi = bridge.xi.eval(p).unwrap();
        for k in 0..3 {
            defect = defect.max((rep.rough_laplacian_of_xi[k] - 2.0 * xi[k]).abs());
        }
        let u = u43(p);
        predicted = predicted.max(2.0 / (u * u));
    }
    println!(
        "criterion 7 (literal ∇̃*∇̃ξ = 2ξ on example43-bridge): {} — residual {defect:.6}, \
         predicted 2λ̃² max {predicted:.6}",
        if defect < 1e-6 { "PASS" } else { "FAIL (expected; see decisions ledger)" }
    );
    assert!(
        (defect - predicted).abs() < 1e-6,
        "the failure must match the 2λ̃² prediction exactly"
    );
    assert!(
        defect < 1e-6,
        "literal claim does not hold on a type-III bridge: ∇̃*∇̃ξ = 2(1−λ̃²)ξ, residual {defect:.6}"
    );
}

/// Across ≥500 classification calls on valid structures the fourth
/// canonical form never appears and each structure's type is constant.
#[test]
fn criterion_8_canonical_form_exclusivity() {
    let mut calls = 0usize;
    let mut ok = true;
    let mut scans: Vec<(String, Option<HType>)> = Vec::new();
    let mut structures: Vec<(String, MetricStructure)> = Vec::new();
    for name in ["example41", "example42", "example43-bridge", "typei-nu"] {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        structures.push((name.to_string(), s));
    }
    let (contact, _) = corpus::by_name("zetamu-plus-1", opts()).unwrap();
    let (zb, _) = paraverify::bridge::induce_paracontact(&contact, opts()).unwrap();
    structures.push(("zetamu-bridge".into(), zb));
    let (s41, _) = corpus::example41(opts()).unwrap();
    let (deformed, _) = d_homothetic(&s41, 2.0).unwrap();
    structures.push(("example41-deformed".into(), deformed));
    for (name, s) in &structures {
        for p in &s.samples {
            match classify_h(s, p, ClassifyOptions::default()) {
                Ok(rep) => {
                    calls += 1;
                    ok &= rep.residual < 1e-7;
                }
                Err(e) => {
                    ok = false;
                    println!("  classification error on {name} at {p:?}: {e}");
                }
            }
        }
        let scan = type_constancy_scan(s, ClassifyOptions::default()).unwrap();
        ok &= scan.overall.is_some();
        scans.push((name.clone(), scan.overall));
    }
    ok &= calls >= 500;
    verdict(
        "8",
        ok,
        &format!("{calls} classification calls, types {scans:?}"),
    );
}

// --- finite-difference oracles -------------------------------------------

/// Fourth-order central difference of a matrix-valued map.
fn central4(
    p: &[f64],
    axis: usize,
    step: f64,
    f: &dyn Fn(&[f64]) -> DMatrix<f64>,
) -> DMatrix<f64> {
    let shift = |t: f64| {
        let mut q = p.to_vec();
        q[axis] += t;
        q
    };
    (f(&shift(-2.0 * step)) - f(&shift(2.0 * step)) + (f(&shift(step)) - f(&shift(-step))) * 8.0)
        / (12.0 * step)
}

/// Christoffel symbols from the Koszul formula with finite-differenced
/// metric derivatives; independent of the symbolic derivative path.
fn christoffel_fd(s: &MetricStructure, p: &[f64], step: f64) -> DMatrix<f64> {
    let d = p.len();
    let geval = |q: &[f64]| s.g.eval(q).unwrap();
    let dg: Vec<DMatrix<f64>> = (0..d).map(|a| central4(p, a, step, &geval)).collect();
    let ginv = s.g.eval(p).unwrap().try_inverse().unwrap();
    let mut out = DMatrix::zeros(d * d, d); // rows (i,j), cols k
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for l in 0..d {
                    acc += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                out[(i * d + j, k)] = 0.5 * acc;
            }
        }
    }
    out
}

/// Curvature components from finite-differenced finite-difference
/// Christoffel symbols.
fn riemann_fd(s: &MetricStructure, p: &[f64]) -> Vec<f64> {
    let d = p.len();
    let h1 = 1e-3;
    let h2 = 5e-3;
    let gamma_at = |q: &[f64]| christoffel_fd(s, q, h1);
    let g0 = gamma_at(p);
    let dgamma: Vec<DMatrix<f64>> = (0..d).map(|a| central4(p, a, h2, &gamma_at)).collect();
    let gam = |m: &DMatrix<f64>, k: usize, i: usize, j: usize| m[(i * d + j, k)];
    let mut out = Vec::with_capacity(d * d * d * d);
    for l in 0..d {
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut acc = gam(&dgamma[i], l, j, k) - gam(&dgamma[j], l, i, k);
                    for m in 0..d {
                        acc += gam(&g0, l, i, m) * gam(&g0, m, j, k)
                            - gam(&g0, l, j, m) * gam(&g0, m, i, k);
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

/// Symbolic Christoffel/curvature versus the central-difference oracles on
/// every corpus metric, and symbolic expression derivatives versus central
/// differences.
#[test]
fn criterion_9_finite_difference_oracles() {
    let mut ok = true;
    let mut detail = String::new();
    let small = BuildOptions {
        points: 50,
        ..Default::default()
    };
    for name in corpus::NAMES {
        let (s, _) = corpus::by_name(name, small).unwrap();
        let d = s.dim();
        let mut gamma_defect = 0.0_f64;
        let mut riem_defect = 0.0_f64;
        for p in &s.samples {
            let fd = christoffel_fd(&s, p, 1e-3);
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        let sym = s.lc.christoffel(k, i, j).evaluate(p).unwrap();
                        gamma_defect = gamma_defect.max((sym - fd[(i * d + j, k)]).abs());
                    }
                }
            }
            let fd = riemann_fd(&s, p);
            let mut idx = 0;
            for l in 0..d {
                for k in 0..d {
                    for i in 0..d {
                        for j in 0..d {
                            let sym = s.lc.riem_comp(l, k, i, j).evaluate(p).unwrap();
                            riem_defect = riem_defect.max((sym - fd[idx]).abs());
                            idx += 1;
                        }
                    }
                }
            }
        }
        ok &= gamma_defect < 1e-5 && riem_defect < 1e-5;
        detail.push_str(&format!("{name}: Γ {gamma_defect:.1e} R {riem_defect:.1e}; "));

        // expression-level derivative oracle on the metric entries
        let mut expr_defect = 0.0_f64;
        for e in s.g.m.entries_slice() {
            for p in s.samples.iter().take(10) {
                for var in 0..d {
                    let sym = e.differentiate(var).evaluate(p).unwrap();
                    let h = 1e-5 * p[var].abs().max(1.0);
                    let mut hi = p.clone();
                    let mut lo = p.clone();
                    hi[var] += h;
                    lo[var] -= h;
                    let fd = (e.evaluate(&hi).unwrap() - e.evaluate(&lo).unwrap()) / (2.0 * h);
                    let scale = sym.abs().max(fd.abs()).max(1.0);
                    expr_defect = expr_defect.max((sym - fd).abs() / scale);
                }
            }
        }
        ok &= expr_defect < 1e-5;
    }
    verdict("9", ok, &detail);
}

/// Example 4.2's Γ at the stated point against the Koszul oracle, and the
/// curvature value R(X,Y)ξ = −(η(Y)X−η(X)Y) + 2(η(Y)h̃X−η(X)h̃Y) there.
#[test]
fn example42_christoffel_point_oracle() {
    let (s, _) = corpus::example42(opts()).unwrap();
    let p = [0.3, 0.2, 1.0];
    let fd = christoffel_fd(&s, &p, 1e-3);
    let mut defect = 0.0_f64;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let sym = s.lc.christoffel(k, i, j).evaluate(&p).unwrap();
                defect = defect.max((sym - fd[(i * 3 + j, k)]).abs());
            }
        }
    }
    assert!(defect < 1e-5, "Koszul oracle defect {defect:.3e}");
}

/// Byte-identical machine-readable reports for identical inputs.
#[test]
fn criterion_10_determinism() {
    let mut ok = true;
    for name in ["example41", "example42"] {
        let a = corpus::run_corpus_suite(name, &SuiteOptions::default())
            .unwrap()
            .to_json();
        let b = corpus::run_corpus_suite(name, &SuiteOptions::default())
            .unwrap()
            .to_json();
        ok &= a == b;
    }
    // the pipeline is sequential by construction, so the report cannot
    // depend on any thread count; the repeated-run comparison pins the rest
    verdict("10", ok, "byte-identical JSON across repeated runs");
}

/// The vanishing-h boundary case: the fitter flags μ̃, ν̃ unidentifiable and
/// κ̃ = −1 with the curvature in its rigid form.
#[test]
fn k_paracontact_fit_flags() {
    let (s, records) = corpus::flat_k_paracontact(opts()).unwrap();
    assert!(records.iter().all(|r| r.passed()));
    let fitter = NullityFitter::new(&s);
    let fit = fitter.fit_at(&s.samples[0]).unwrap();
    assert!(fit.residual < 1e-9);
    assert!((fit.kappa + 1.0).abs() < 1e-9);
    assert_eq!(fit.identifiable, [true, false, false]);
    let rep = paraverify::structures::is_k_paracontact(&s);
    assert!(rep.is_k_paracontact);
}

/// Eigendistribution projectors on the diagonalizable and rotation types,
/// with φ̃ swapping the ±λ̃ eigendistributions.
#[test]
fn eigendistribution_projector_checks() {
    for name in ["example41", "example43-bridge"] {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        for p in s.samples.iter().take(20) {
            let pr =
                paraverify::classify::eigendistribution_projectors(&s, p, ClassifyOptions::default())
                    .unwrap();
            assert!(pr.residual < 1e-8, "{name}: {:.3e}", pr.residual);
        }
    }
    // κ̃ = −1 region: not applicable
    let (s, _) = corpus::example42(opts()).unwrap();
    assert!(paraverify::classify::eigendistribution_projectors(
        &s,
        &s.samples[0],
        ClassifyOptions::default()
    )
    .is_err());
}

/// λ̃ from the classifier equals √|1+κ̃| from the fit wherever h ≠ 0.
#[test]
fn lambda_matches_sqrt_one_plus_kappa() {
    for name in ["example41", "example43-bridge", "typei-nu"] {
        let (s, _) = corpus::by_name(name, opts()).unwrap();
        let fitter = NullityFitter::new(&s);
        for p in s.samples.iter().take(25) {
            let fit = fitter.fit_at(p).unwrap();
            let rep = classify_h(&s, p, ClassifyOptions::default()).unwrap();
            assert!(
                (rep.lambda - (1.0 + fit.kappa).abs().sqrt()).abs() < 1e-6,
                "{name} at {p:?}"
            );
        }
    }
}

/// Full-suite pass over the corpus (minus the documented literal claim,
/// which lives in its own test above), with the stated runtime budget.
#[test]
fn corpus_suite_overview() {
    let start = std::time::Instant::now();
    let mut reports: Vec<Report> = Vec::new();
    for name in corpus::NAMES {
        reports.push(corpus::run_corpus_suite(name, &SuiteOptions::default()).unwrap());
    }
    let elapsed = start.elapsed();
    for report in &reports {
        let failed: Vec<String> = report
            .failures()
            .map(|r| format!("{}/{}: {:.3e}", report.name, r.id, r.max_residual))
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
    println!(
        "corpus overview: {} entries, {} checks, all green in {:.1?}",
        reports.len(),
        reports.iter().map(|r| r.records.len()).sum::<usize>(),
        elapsed
    );
}
