//! Built-in example corpus and the suite orchestration that drives every
//! module against a manifest: validation, the foundational identity suite,
//! classification and fit scans, the nullity identity suite, harmonicity,
//! optional deformation checks and the contact-to-paracontact pipeline.

use crate::classify::{
    kmn_from_frame, type_constancy_scan, AdaptedFrame, ClassifyOptions, HType, NullityFitter,
};
use crate::expr::Expr;
use crate::harmonic::HarmonicEngine;
use crate::manifest::{Branch, Manifest, ManifestError};
use crate::report::{CheckRecord, Report};
use crate::scan::Scan;
use crate::structures::{BuildOptions, Flavor, MetricStructure};

pub const EXAMPLE41: &str = include_str!("../manifests/example41.json");
pub const EXAMPLE42: &str = include_str!("../manifests/example42.json");
pub const EXAMPLE43: &str = include_str!("../manifests/example43.json");
pub const ZETAMU_PLUS_1: &str = include_str!("../manifests/zetamu-plus-1.json");
pub const TYPEI_NU: &str = include_str!("../manifests/typei-nu.json");

/// Corpus entries, in suite order. `example43-bridge` is derived: it is the
/// canonical paracontact structure induced by the `example43` contact entry.
pub const NAMES: [&str; 6] = [
    "example41",
    "example42",
    "example43",
    "example43-bridge",
    "zetamu-plus-1",
    "typei-nu",
];

pub enum Entry {
    Manifest(Box<Manifest>),
    /// Induced paracontact structure of a contact corpus entry, with the
    /// declared coefficient fields of the induced structure.
    BridgeOf {
        base: &'static str,
        declared_kappa: &'static str,
        declared_mu: &'static str,
        declared_nu: &'static str,
    },
}

pub fn entry(name: &str) -> Option<Entry> {
    let json = match name {
        "example41" => EXAMPLE41,
        "example42" => EXAMPLE42,
        "example43" => EXAMPLE43,
        "zetamu-plus-1" => ZETAMU_PLUS_1,
        "typei-nu" => TYPEI_NU,
        "example43-bridge" => {
            return Some(Entry::BridgeOf {
                base: "example43",
                declared_kappa: "-1-1/(2*x+exp(y+z))^2",
                declared_mu: "2",
                declared_nu: "2/(2*x+exp(y+z))",
            })
        }
        _ => return None,
    };
    let m = Manifest::from_json(json).expect("bundled manifest must parse");
    Some(Entry::Manifest(Box::new(m)))
}

/// Builds a corpus structure by name (bridged entries are induced).
pub fn by_name(
    name: &str,
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    match entry(name) {
        Some(Entry::Manifest(m)) => m.build(Some(options)),
        Some(Entry::BridgeOf { base, .. }) => {
            let (contact, _) = by_name(base, options)?;
            crate::bridge::induce_paracontact(&contact, options)
                .map_err(|e| ManifestError::Invalid {
                    path: format!("corpus/{name}"),
                    message: e.to_string(),
                })
        }
        None => Err(ManifestError::Invalid {
            path: format!("corpus/{name}"),
            message: format!(
                "unknown corpus entry; available: {}",
                NAMES.join(", ")
            ),
        }),
    }
}

/// Declared coefficient expressions for a corpus entry, if any.
pub fn declared_kmn(
    name: &str,
    s: &MetricStructure,
) -> Option<(Option<Expr>, Option<Expr>, Option<Expr>)> {
    match entry(name)? {
        Entry::Manifest(m) => {
            let chart = s.chart.clone();
            m.declared_kmn(&chart).ok()
        }
        Entry::BridgeOf {
            declared_kappa,
            declared_mu,
            declared_nu,
            ..
        } => {
            let coords = &s.chart.coords;
            Some((
                crate::expr::parse(declared_kappa, coords).ok(),
                crate::expr::parse(declared_mu, coords).ok(),
                crate::expr::parse(declared_nu, coords).ok(),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// programmatic fixtures used by unit and acceptance tests

pub fn example41(options: BuildOptions) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    by_name("example41", options)
}

pub fn example42(options: BuildOptions) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    by_name("example42", options)
}

fn patch_manifest(
    json: &str,
    edit: impl FnOnce(&mut serde_json::Value),
) -> Result<Manifest, ManifestError> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    edit(&mut v);
    Manifest::from_json(&v.to_string())
}

/// The printed transcription of the type-I example: every structure axiom
/// holds but ξ fails to be a Ricci eigenvector, so the nullity fit cannot
/// close. Kept as the typo-localization fixture.
pub fn example41_as_printed(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = patch_manifest(EXAMPLE41, |v| {
        v["name"] = "example41-as-printed".into();
        v["presentation"]["frame"]["vectors"][2][1] = "-(2*z*x-y/(2*z))".into();
        v["declared"] = serde_json::json!({});
    })?;
    m.build(Some(options))
}

/// The printed coordinate matrices of the nilpotent example, which are
/// mutually inconsistent; used to demonstrate per-axiom localization.
pub fn example42_as_printed(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = patch_manifest(EXAMPLE42, |v| {
        v["name"] = "example42-as-printed".into();
        v["presentation"]["coordinate"]["phi"][1][2] = "x-2*y-z".into();
        v["presentation"]["coordinate"]["g"] = serde_json::json!([
            ["1", "0", "(2*y-z)/2"],
            ["0", "0", "1/2"],
            ["(2*y-z)/2", "1/2", "(2*y-z)^2-(x-2*y-z)"]
        ]);
        v["declared"] = serde_json::json!({});
    })?;
    m.build(Some(options))
}

/// Negative control: the metric replaced by the identity matrix.
pub fn example42_broken_metric(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = patch_manifest(EXAMPLE42, |v| {
        v["name"] = "example42-broken-metric".into();
        v["presentation"]["coordinate"]["g"] = serde_json::json!([
            ["1", "0", "0"],
            ["0", "1", "0"],
            ["0", "0", "1"]
        ]);
        v["declared"] = serde_json::json!({});
    })?;
    m.build(Some(options))
}

/// Jitters one metric entry by 1e-2: still a metric, no longer harmonic.
pub fn example42_perturbed(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = patch_manifest(EXAMPLE42, |v| {
        v["name"] = "example42-perturbed".into();
        v["presentation"]["coordinate"]["g"][1][2] = "1+0.01*z^2".into();
        v["presentation"]["coordinate"]["g"][2][1] = "1+0.01*z^2".into();
        v["declared"] = serde_json::json!({});
    })?;
    m.build(Some(options))
}

/// Flat pseudo-Riemannian metric with φ = 0: not almost paracontact.
pub fn flat_phi_zero(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = Manifest::from_json(
        r#"{
        "name": "flat-phi-zero",
        "kind": "paracontact",
        "chart": {"coords": ["x","y","z"], "sample_bounds": [[-1,1],[-1,1],[-1,1]]},
        "presentation": {"coordinate": {
            "phi": [["0","0","0"],["0","0","0"],["0","0","0"]],
            "xi": ["1","0","0"],
            "eta": ["1","0","0"],
            "g": [["1","0","0"],["0","-1","0"],["0","0","1"]]
        }}
    }"#,
    )?;
    m.build(Some(options))
}

/// K-paracontact structure (h = 0): the λ̃-free member of the frame family.
pub fn flat_k_paracontact(
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let m = Manifest::from_json(
        r#"{
        "name": "k-paracontact",
        "kind": "paracontact",
        "chart": {"coords": ["x","y","z"], "sample_bounds": [[-1,1],[-1,1],[-1,1]]},
        "presentation": {"frame": {
            "vectors": [["1","0","0"],["0","1","0"],["2*y","0","1"]],
            "gram": {"orthonormal": [1,-1,1]},
            "phi_on_frame": [["0","0","0"],["0","0","1"],["0","1","0"]],
            "xi_index": 0
        }},
        "declared": {"kappa": "-1", "nu": "0"}
    }"#,
    )?;
    m.build(Some(options))
}

/// Constant-(κ, μ) contact model with ν = 0, realized on a solvable frame:
/// κ = 1 − λ², μ = 2(1 − λ).
pub fn constant_kmu_contact(
    lambda: f64,
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
    let omega = 2.0 * lambda.sqrt();
    let m = Manifest::from_json(&format!(
        r#"{{
        "name": "constant-kmu",
        "kind": "contact",
        "chart": {{"coords": ["x","y","z"], "sample_bounds": [[-0.6,0.6],[-1,1],[-1,1]]}},
        "presentation": {{"frame": {{
            "vectors": [
                ["1","0","0"],
                ["0","cos({omega}*x)","{two_over_omega}*sin({omega}*x)"],
                ["0","-{omega_half}*sin({omega}*x)","cos({omega}*x)"]
            ],
            "gram": {{"orthonormal": [1,1,1]}},
            "phi_on_frame": [["0","-1","0"],["1","0","0"],["0","0","0"]],
            "xi_index": 2
        }}}},
        "declared": {{"kappa": "{kappa}", "mu": "{mu}", "nu": "0"}}
    }}"#,
        omega = omega,
        two_over_omega = 2.0 / omega,
        omega_half = omega / 2.0,
        kappa = 1.0 - lambda * lambda,
        mu = 2.0 * (1.0 - lambda),
    ))?;
    m.build(Some(options))
}

/// Programmatic model-family manifest, used by the CLI `model` verb.
pub fn zetamu_manifest(name: &str, branch: Branch, nu: f64, f: &str, r: &str, s: &str) -> Manifest {
    let json = serde_json::json!({
        "name": name,
        "kind": "contact",
        "chart": {
            "coords": ["x", "y", "z"],
            "sample_bounds": [[-0.3, 0.5], [-0.8, 0.8], [-1.0, 1.0]]
        },
        "presentation": {
            "zetamu": {
                "branch": match branch { Branch::Plus => "plus", Branch::Minus => "minus" },
                "nu": nu,
                "f": f,
                "r": r,
                "s": s
            }
        }
    });
    Manifest::from_json(&json.to_string()).expect("generated manifest is valid")
}

// ---------------------------------------------------------------------------
// suite orchestration

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub build: BuildOptions,
    pub classify: ClassifyOptions,
    /// Run the deformation checks at these parameters.
    pub deform_alphas: &'static [f64],
    /// Run the contact bridge pipeline on contact manifests.
    pub run_bridge: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            build: BuildOptions::default(),
            classify: ClassifyOptions::default(),
            deform_alphas: &[],
            run_bridge: true,
        }
    }
}

/// Executes the full check pipeline for a built structure, appending to the
/// report. `declared` carries optional coefficient fields to cross-check.
pub fn run_structure_suite(
    report: &mut Report,
    s: &MetricStructure,
    build_records: Vec<CheckRecord>,
    declared: (Option<Expr>, Option<Expr>, Option<Expr>),
    opts: &SuiteOptions,
) {
    report.extend(build_records);
    report.extend(crate::structures::geometry_identity_suite(s));
    report.extend(crate::structures::reeb_identity_suite(s));
    match s.flavor {
        Flavor::Paracontact => {
            paracontact_scans(report, s, declared, opts);
        }
        Flavor::Contact => {
            match crate::bridge::validate_contact(s) {
                Ok(records) => {
                    // validate_contact re-runs the shared axioms; keep only the
                    // contact-specific additions to avoid duplicate records
                    let shared: Vec<String> =
                        report.records.iter().map(|r| r.id.clone()).collect();
                    report.extend(
                        records
                            .into_iter()
                            .filter(|r| !shared.contains(&r.id)),
                    );
                }
                Err(e) => report.push(CheckRecord::info(
                    "contact-validation",
                    "contact-specific validation",
                    format!("failed: {e}"),
                )),
            }
            contact_scans(report, s, declared, opts);
        }
    }
}

fn fit_scan(
    report: &mut Report,
    s: &MetricStructure,
    declared: &(Option<Expr>, Option<Expr>, Option<Expr>),
    tol: f64,
) -> Option<(f64, f64, f64)> {
    let fitter = NullityFitter::new(s);
    let mut max_fit_residual: f64 = 0.0;
    let mut max_decl_defect: f64 = 0.0;
    let mut worst: Option<Vec<f64>> = None;
    let mut first_fit = None;
    for p in &s.samples {
        match fitter.fit_at(p) {
            Ok(fit) => {
                if fit.residual > max_fit_residual {
                    max_fit_residual = fit.residual;
                    worst = Some(p.clone());
                }
                let (dk, dm, dn) = &declared;
                let mut defect = 0.0_f64;
                if let Some(k) = dk {
                    if let Ok(v) = k.evaluate(p) {
                        defect = defect.max((fit.kappa - v).abs());
                    }
                }
                if let Some(m) = dm {
                    if fit.identifiable[1] {
                        if let Ok(v) = m.evaluate(p) {
                            defect = defect.max((fit.mu - v).abs());
                        }
                    }
                }
                if let Some(n) = dn {
                    if fit.identifiable[2] {
                        if let Ok(v) = n.evaluate(p) {
                            defect = defect.max((fit.nu - v).abs());
                        }
                    }
                }
                max_decl_defect = max_decl_defect.max(defect);
                if first_fit.is_none() {
                    first_fit = Some((fit.kappa, fit.mu, fit.nu, fit.identifiable));
                }
            }
            Err(e) => {
                report.push(
                    CheckRecord::residual(
                        "nullity-fit",
                        "pointwise (κ, μ, ν) fit",
                        f64::INFINITY,
                        Some(p.clone()),
                        tol,
                    )
                    .with_note(e.to_string()),
                );
                return None;
            }
        }
    }
    report.push(CheckRecord::residual(
        "nullity-fit",
        "pointwise (κ, μ, ν) fit of the curvature ansatz",
        max_fit_residual,
        worst,
        tol,
    ));
    if declared.0.is_some() || declared.1.is_some() || declared.2.is_some() {
        report.push(CheckRecord::residual(
            "declared-kmn",
            "fitted coefficients match the declared fields",
            max_decl_defect,
            None,
            1e-6,
        ));
    }
    first_fit.map(|(k, m, n, flags)| {
        report.push(CheckRecord::info(
            "fitted-kmn",
            "fitted coefficients at the first sample point",
            format!(
                "κ={k:.9}, μ={m:.9}, ν={n:.9} (identifiable {flags:?})"
            ),
        ));
        (k, m, n)
    })
}

fn paracontact_scans(
    report: &mut Report,
    s: &MetricStructure,
    declared: (Option<Expr>, Option<Expr>, Option<Expr>),
    opts: &SuiteOptions,
) {
    let tol = s.options.tol;
    if s.dim() != 3 {
        report.push(CheckRecord::info(
            "classification",
            "curvature-level analysis",
            "restricted to dimension 3; axiom validation only",
        ));
        return;
    }

    // classification scan
    match type_constancy_scan(s, opts.classify) {
        Ok(scan) => {
            report.extend(scan.records.clone());
            if let Some(t) = scan.overall {
                report.push(CheckRecord::info(
                    "canonical-form",
                    "canonical form over the sampled region",
                    t.to_string(),
                ));
            }
            // fit scan with declared cross-check
            fit_scan(report, s, &declared, 1e-7);

            // adapted frame, closed-form coefficients, nullity suite
            if let Some(htype) = scan.overall {
                if htype != HType::Zero {
                    match AdaptedFrame::build_known(s, htype) {
                        Ok(frame) => {
                            report.extend(frame.verify(s, 1e-7));
                            let fitter = NullityFitter::new(s);
                            let mut max_gap: f64 = 0.0;
                            for p in s.samples.iter() {
                                if let (Ok(a), Ok(b)) = (
                                    fitter.fit_at(p),
                                    kmn_from_frame(s, &frame, p, 1e-6),
                                ) {
                                    max_gap = max_gap.max((a.kappa - b.kappa).abs());
                                    if a.identifiable[1] {
                                        max_gap = max_gap.max((a.mu - b.mu).abs());
                                    }
                                    if a.identifiable[2] {
                                        max_gap = max_gap.max((a.nu - b.nu).abs());
                                    }
                                }
                            }
                            report.push(CheckRecord::residual(
                                "frame-vs-fit",
                                "closed-form coefficients agree with the least-squares fit",
                                max_gap,
                                None,
                                1e-6,
                            ));
                            // coefficient fields for the identity suite
                            let kappa = declared
                                .0
                                .clone()
                                .unwrap_or_else(|| s.lc.ricci_pair(&s.xi, &s.xi).scale(0.5));
                            let mu = declared
                                .1
                                .clone()
                                .unwrap_or_else(|| frame.gauge.scale(-2.0));
                            let nu = declared.2.clone().unwrap_or_else(|| {
                                if htype == HType::TypeII {
                                    Expr::zero()
                                } else {
                                    s.xi.derive(&frame.lambda).div(&frame.lambda).neg()
                                }
                            });
                            report.extend(crate::classify::nullity_identity_suite(
                                s,
                                &kappa,
                                &mu,
                                &nu,
                                Some(&frame),
                                1e-7,
                            ));
                            harmonic_scan(report, s, Some((&frame, &nu)), tol);
                        }
                        Err(e) => {
                            report.push(CheckRecord::info(
                                "adapted-frame",
                                "symbolic adapted frame",
                                format!("not built: {e}"),
                            ));
                            harmonic_scan(report, s, None, tol);
                        }
                    }
                } else {
                    fitless_zero_case(report, s);
                    harmonic_scan(report, s, None, tol);
                }
            } else {
                harmonic_scan(report, s, None, tol);
            }
        }
        Err(e) => {
            report.push(CheckRecord::info(
                "classification",
                "canonical-form scan",
                format!("failed: {e}"),
            ));
        }
    }

    // optional deformation checks
    for &alpha in opts.deform_alphas {
        match crate::deform::d_homothetic(s, alpha) {
            Ok((deformed, records)) => {
                let all = records.iter().all(|r| r.passed());
                report.push(
                    CheckRecord::residual(
                        "deformation",
                        "deformed structure revalidates",
                        if all { 0.0 } else { 1.0 },
                        None,
                        0.0,
                    )
                    .with_note(format!("α = {alpha}")),
                );
                report.extend(crate::deform::deformed_connection_check(
                    s, &deformed, alpha, 1e-8,
                ));
            }
            Err(e) => report.push(CheckRecord::info(
                "deformation",
                "deformation",
                format!("α = {alpha} failed: {e}"),
            )),
        }
    }
}

fn fitless_zero_case(report: &mut Report, s: &MetricStructure) {
    let rep = crate::structures::is_k_paracontact(s);
    report.extend(rep.records);
}

fn harmonic_scan(
    report: &mut Report,
    s: &MetricStructure,
    frame_nu: Option<(&AdaptedFrame, &Expr)>,
    tol: f64,
) {
    match HarmonicEngine::new(s) {
        Ok(engine) => {
            report.extend(engine.suite(tol.max(1e-7)));
            if let Some((frame, nu)) = frame_nu {
                report.push(engine.obstruction_formula_check(frame, nu, 1e-6));
            }
        }
        Err(e) => report.push(CheckRecord::info(
            "harmonicity",
            "harmonicity scan",
            format!("engine not built: {e}"),
        )),
    }
}

fn contact_scans(
    report: &mut Report,
    s: &MetricStructure,
    declared: (Option<Expr>, Option<Expr>, Option<Expr>),
    opts: &SuiteOptions,
) {
    fit_scan(report, s, &declared, 1e-6);
    match crate::bridge::contact_kmn_fields(s) {
        Ok(fields) => {
            report.extend(crate::bridge::contact_identity_suite(s, &fields, 1e-6));
            match crate::bridge::boeckx_invariant(s, &fields.kappa, &fields.mu) {
                Ok((im, xi_im)) => {
                    let im_scan = Scan::exprs(&s.samples, &[im]);
                    let xi_scan = Scan::exprs(&s.samples, &[xi_im]);
                    report.push(CheckRecord::info(
                        "boeckx-invariant",
                        "I_M = (1 − μ/2)/√(1−κ)",
                        format!(
                            "max |I_M| = {:.6}, max |ξ(I_M)| = {:.3e}",
                            im_scan.max, xi_scan.max
                        ),
                    ));
                }
                Err(e) => report.push(CheckRecord::info(
                    "boeckx-invariant",
                    "I_M",
                    format!("not defined: {e}"),
                )),
            }
            if opts.run_bridge {
                match crate::bridge::induce_paracontact(s, s.options) {
                    Ok((induced, records)) => {
                        let ok = records.iter().all(|r| r.passed());
                        report.push(
                            CheckRecord::residual(
                                "induced-validation",
                                "induced paracontact structure passes full validation",
                                if ok { 0.0 } else { 1.0 },
                                None,
                                0.0,
                            ),
                        );
                        report.push(h_tilde_record(s, &induced, &fields));
                        report.extend(crate::bridge::bridge_kmn_law(s, &induced, &fields, 1e-6));
                        match crate::bridge::bridge_connection_check(s, &induced, &fields, 1e-7)
                        {
                            Ok(records) => report.extend(records),
                            Err(e) => report.push(CheckRecord::info(
                                "bridge-connection",
                                "connection transfer checks",
                                format!("failed: {e}"),
                            )),
                        }
                        if let Ok(scan) = type_constancy_scan(&induced, opts.classify) {
                            if let Some(t) = scan.overall {
                                report.push(CheckRecord::info(
                                    "induced-canonical-form",
                                    "canonical form of the induced structure",
                                    t.to_string(),
                                ));
                            }
                        }
                    }
                    Err(e) => report.push(CheckRecord::info(
                        "induced-validation",
                        "induced paracontact structure",
                        format!("not built: {e}"),
                    )),
                }
            }
        }
        Err(e) => report.push(CheckRecord::info(
            "contact-kmn-fields",
            "symbolic (κ, μ, ν) fields",
            format!("not built: {e}"),
        )),
    }
}

fn h_tilde_record(
    contact: &MetricStructure,
    induced: &MetricStructure,
    fields: &crate::bridge::ContactKmnFields,
) -> CheckRecord {
    crate::bridge::h_tilde_law(contact, induced, fields, 1e-7)
}

/// Runs the full suite for a manifest.
pub fn run_manifest_suite(m: &Manifest, opts: &SuiteOptions) -> Result<Report, ManifestError> {
    let build = m.build_options(Some(opts.build));
    let mut report = Report::new(m.name.clone(), build.seed, build.points, build.tol);
    let (s, records) = m.build(Some(build))?;
    let chart = s.chart.clone();
    let declared = m.declared_kmn(&chart)?;
    run_structure_suite(&mut report, &s, records, declared, opts);
    Ok(report)
}

/// Runs the full suite for a corpus entry by name (bridged entries run the
/// paracontact pipeline on the induced structure).
pub fn run_corpus_suite(name: &str, opts: &SuiteOptions) -> Result<Report, ManifestError> {
    match entry(name) {
        Some(Entry::Manifest(m)) => {
            let mut opts = *opts;
            opts.build = m.build_options(Some(opts.build));
            run_manifest_suite(&m, &opts)
        }
        Some(Entry::BridgeOf { .. }) => {
            let build = opts.build;
            let mut report = Report::new(name, build.seed, build.points, build.tol);
            let (s, records) = by_name(name, build)?;
            let declared = declared_kmn(name, &s).unwrap_or((None, None, None));
            run_structure_suite(&mut report, &s, records, declared, opts);
            Ok(report)
        }
        None => Err(ManifestError::Invalid {
            path: format!("corpus/{name}"),
            message: format!("unknown corpus entry; available: {}", NAMES.join(", ")),
        }),
    }
}
