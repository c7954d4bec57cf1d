//! Almost paracontact metric structures: ingestion from coordinate or frame
//! presentations, axiom validation, the associated tensor h = ½ L_ξ φ, and
//! the foundational identity suite every downstream module builds on.

use thiserror::Error;

use crate::chart::ChartRef;
use crate::expr::Expr;
use crate::fields::{EndField, ExprMatrix, FieldError, MetricField, OneForm, VectorField};
use crate::geometry::{lie_bracket, lie_derivative_end, GeometryError, LeviCivita};
use crate::report::CheckRecord;
use crate::scan::Scan;

/// Sign conventions distinguishing the pseudo-Riemannian paracontact case
/// from the Riemannian contact case; everything else is shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// φ² = I − η⊗ξ, g(φX,φY) = −g(X,Y) + η(X)η(Y), signature (n+1, n).
    Paracontact,
    /// φ² = −I + η⊗ξ, g(φX,φY) = g(X,Y) − η(X)η(Y), g positive definite.
    Contact,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub margin: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            points: 100,
            seed: 42,
            tol: 1e-8,
            margin: 0.05,
        }
    }
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Chart(#[from] crate::chart::ChartError),
    #[error("frame is singular at {point:?} (|det| = {det})")]
    SingularFrame { point: Vec<f64>, det: f64 },
    #[error("frame presentation needs dim {dim} vectors, got {got}")]
    FrameSize { dim: usize, got: usize },
    #[error("xi_index {index} out of range for dim {dim}")]
    XiIndex { index: usize, dim: usize },
    #[error("operation requires dimension 3, structure has dimension {0}")]
    DimensionNot3(usize),
}

/// How a frame declares its Gram matrix.
#[derive(Debug, Clone)]
pub enum FrameGram {
    /// g(e_i, e_j) = ε_i δ_ij with ε_i = ±1.
    Orthonormal(Vec<f64>),
    /// 3D pattern g(e₁,e₂) = g(e₃,e₃) = 1, all other products zero.
    PseudoOrthonormal,
}

impl FrameGram {
    pub fn matrix(&self, dim: usize) -> ExprMatrix {
        match self {
            FrameGram::Orthonormal(signs) => {
                let mut m = ExprMatrix::zeros(dim);
                for (i, s) in signs.iter().enumerate() {
                    m.set(i, i, Expr::constant(*s));
                }
                m
            }
            FrameGram::PseudoOrthonormal => {
                assert_eq!(dim, 3, "pseudo-orthonormal pattern is three-dimensional");
                let mut m = ExprMatrix::zeros(3);
                m.set(0, 1, Expr::one());
                m.set(1, 0, Expr::one());
                m.set(2, 2, Expr::one());
                m
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FramePresentation {
    pub frame: Vec<VectorField>,
    pub gram: FrameGram,
    /// φ on the frame, column convention: φ(e_j) = Σ_i (phi_frame)_ij e_i.
    pub phi_frame: ExprMatrix,
}

/// A validated (para)contact metric structure with its cached tensor h and
/// Levi-Civita package. Immutable after construction.
pub struct MetricStructure {
    pub flavor: Flavor,
    pub chart: ChartRef,
    pub phi: EndField,
    pub xi: VectorField,
    pub eta: OneForm,
    pub g: MetricField,
    /// h = ½ L_ξ φ, cached at construction.
    pub h: EndField,
    pub lc: LeviCivita,
    pub samples: Vec<Vec<f64>>,
    pub options: BuildOptions,
}

pub type ParacontactStructure = MetricStructure;

impl MetricStructure {
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    /// dη as a matrix of components, dη(∂i,∂j) = ½(∂_i η_j − ∂_j η_i).
    pub fn deta(&self) -> ExprMatrix {
        let d = self.dim();
        let mut m = ExprMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let e = self.eta.comps[j]
                    .differentiate(i)
                    .sub(&self.eta.comps[i].differentiate(j))
                    .scale(0.5);
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn coordinate_fields(&self) -> Vec<VectorField> {
        (0..self.dim())
            .map(|i| VectorField::coordinate(self.chart.clone(), i))
            .collect()
    }

    /// φ² − s(I − η⊗ξ) with s = +1 paracontact, −1 contact, as a matrix.
    fn phi_square_defect(&self) -> ExprMatrix {
        let d = self.dim();
        let sign = match self.flavor {
            Flavor::Paracontact => 1.0,
            Flavor::Contact => -1.0,
        };
        let phi2 = self.phi.m.matmul(&self.phi.m);
        let mut target = ExprMatrix::identity(d);
        for i in 0..d {
            for j in 0..d {
                let cur = target.get(i, j).clone();
                target.set(
                    i,
                    j,
                    cur.sub(&self.xi.comps[i].mul(&self.eta.comps[j])),
                );
            }
        }
        phi2.sub(&target.map(|e| e.scale(sign)))
    }

    /// Full axiom validation; every record carries the worst point found.
    pub fn validate(&self) -> Vec<CheckRecord> {
        let tol = self.options.tol;
        let samples = &self.samples;
        let mut out = Vec::new();
        let d = self.dim();
        let n = self.n();

        let eta_xi = self.eta.apply(&self.xi).sub(&Expr::one());
        out.push(Scan::exprs(samples, &[eta_xi]).record("eta(xi)=1", "structure axiom", tol));

        let phi_xi = self.phi.apply(&self.xi);
        out.push(Scan::exprs(samples, &phi_xi.comps).record("phi(xi)=0", "structure axiom", tol));

        let eta_phi = self.phi.m.transpose().apply(&self.eta.comps);
        out.push(Scan::exprs(samples, &eta_phi).record("eta∘phi=0", "structure axiom", tol));

        let phi2 = self.phi_square_defect();
        out.push(
            Scan::exprs(samples, entries(&phi2)).record(
                "phi^2",
                match self.flavor {
                    Flavor::Paracontact => "phi^2 = I - eta⊗xi",
                    Flavor::Contact => "phi^2 = -I + eta⊗xi",
                },
                tol,
            ),
        );

        // compatibility: φᵀ g φ = s(g − η⊗η), s = −1 para, +1 contact
        let lhs = self.phi.m.transpose().matmul(&self.g.m).matmul(&self.phi.m);
        let mut eta_sq = ExprMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                eta_sq.set(i, j, self.eta.comps[i].mul(&self.eta.comps[j]));
            }
        }
        let (rhs, anchor) = match self.flavor {
            Flavor::Paracontact => (
                self.g.m.map(|e| e.neg()).add(&eta_sq),
                "g(phiX,phiY) = -g(X,Y) + eta(X)eta(Y)",
            ),
            Flavor::Contact => (
                self.g.m.sub(&eta_sq),
                "g(phiX,phiY) = g(X,Y) - eta(X)eta(Y)",
            ),
        };
        out.push(Scan::exprs(samples, entries(&lhs.sub(&rhs))).record(
            "metric-compatibility",
            anchor,
            tol,
        ));

        let sym = self.g.m.sub(&self.g.m.transpose());
        out.push(Scan::exprs(samples, entries(&sym)).record(
            "g-symmetric",
            "numeric symmetry of the metric",
            1e-12,
        ));

        let det = self.g.m.det();
        let degen = Scan::run(samples, |p| {
            let v = det.evaluate(p)?;
            Ok(if v.abs() > 1e-10 { 0.0 } else { 1.0 })
        });
        out.push(degen.record("g-nondegenerate", "|det g| > 1e-10 at samples", 0.0));

        let want = match self.flavor {
            Flavor::Paracontact => (n + 1, n),
            Flavor::Contact => (d, 0),
        };
        let sig = Scan::run(samples, |p| {
            let s = self.g.signature_at(p, 1e-10)?;
            Ok(if s == want { 0.0 } else { 1.0 })
        });
        out.push(sig.record(
            "g-signature",
            match self.flavor {
                Flavor::Paracontact => "signature (n+1, n)",
                Flavor::Contact => "positive definite",
            },
            0.0,
        ));

        // dη(X,Y) = g(X, φY): componentwise dη = g·φ
        let deta = self.deta();
        let gphi = self.g.m.matmul(&self.phi.m);
        out.push(Scan::exprs(samples, entries(&deta.sub(&gphi))).record(
            "deta",
            "deta(X,Y) = g(X, phiY)",
            tol,
        ));

        // h-properties
        out.push(
            Scan::exprs(samples, &[self.h.m.trace()]).record("tr h=0", "h is trace-free", tol),
        );
        out.push(Scan::exprs(samples, &self.h.apply(&self.xi).comps).record(
            "h(xi)=0",
            "h annihilates xi",
            tol,
        ));
        let anti = self.h.m.matmul(&self.phi.m).add(&self.phi.m.matmul(&self.h.m));
        out.push(Scan::exprs(samples, entries(&anti)).record(
            "h-anticommutes",
            "h∘phi = -phi∘h",
            tol,
        ));
        let gh = self.g.m.matmul(&self.h.m);
        out.push(Scan::exprs(samples, entries(&gh.sub(&gh.transpose()))).record(
            "h-self-adjoint",
            "g(hX,Y) = g(X,hY)",
            tol,
        ));

        // η is the g-dual of ξ (forced by the axioms; checked directly)
        let dual = self.g.m.transpose().apply(&self.xi.comps);
        let defect: Vec<Expr> = dual
            .iter()
            .zip(&self.eta.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        out.push(Scan::exprs(samples, &defect).record("eta-dual", "eta = g(xi, ·)", tol));

        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(|r| r.passed())
    }
}

fn entries(m: &ExprMatrix) -> &[Expr] {
    // ExprMatrix stores row-major entries; expose them for scanning
    m.entries_slice()
}

/// Builds a structure from a coordinate presentation. Validation failures
/// are collected into the returned records, never silently dropped.
pub fn build_from_coordinate(
    flavor: Flavor,
    chart: ChartRef,
    phi: EndField,
    xi: VectorField,
    eta: OneForm,
    g: MetricField,
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), StructureError> {
    let samples = chart.sample(options.points, options.seed, options.margin)?;
    let h_full = lie_derivative_end(&xi, &phi)?;
    let h = EndField::new(chart.clone(), h_full.m.map(|e| e.scale(0.5)))?;
    let lc = LeviCivita::new(g.clone(), &samples)?;
    let s = MetricStructure {
        flavor,
        chart,
        phi,
        xi,
        eta,
        g,
        h,
        lc,
        samples,
        options,
    };
    let records = s.validate();
    Ok((s, records))
}

/// Builds a structure from a frame presentation: the coordinate metric is
/// reconstructed from the declared frame Gram matrix (g = F⁻ᵀ G_frame F⁻¹),
/// φ is pushed forward from its frame matrix, and η is taken as the g-dual
/// of ξ unless a declared η is supplied (which is then validated like any
/// other axiom).
pub fn build_from_frame(
    flavor: Flavor,
    chart: ChartRef,
    fp: &FramePresentation,
    xi_index: usize,
    declared_eta: Option<Vec<Expr>>,
    options: BuildOptions,
) -> Result<(MetricStructure, Vec<CheckRecord>), StructureError> {
    let d = chart.dim();
    if fp.frame.len() != d {
        return Err(StructureError::FrameSize {
            dim: d,
            got: fp.frame.len(),
        });
    }
    if xi_index >= d {
        return Err(StructureError::XiIndex {
            index: xi_index,
            dim: d,
        });
    }
    let samples = chart.sample(options.points, options.seed, options.margin)?;
    // F columns are the frame vectors
    let mut f = ExprMatrix::zeros(d);
    for (j, e) in fp.frame.iter().enumerate() {
        for i in 0..d {
            f.set(i, j, e.comps[i].clone());
        }
    }
    let det = f.det();
    for p in &samples {
        let v = det.evaluate(p).map_err(FieldError::Eval)?;
        if v.abs() < 1e-10 {
            return Err(StructureError::SingularFrame {
                point: p.clone(),
                det: v,
            });
        }
    }
    let finv = f.inverse();
    let gram = fp.gram.matrix(d);
    let g_m = finv.transpose().matmul(&gram).matmul(&finv);
    let phi_m = f.matmul(&fp.phi_frame).matmul(&finv);
    let g = MetricField::new(chart.clone(), g_m)?;
    let phi = EndField::new(chart.clone(), phi_m)?;
    let xi = fp.frame[xi_index].clone();
    let dual = OneForm::new(chart.clone(), g.m.transpose().apply(&xi.comps))?;
    let mut extra = Vec::new();
    let eta = match declared_eta {
        Some(comps) => {
            let declared = OneForm::new(chart.clone(), comps)?;
            let defect: Vec<Expr> = declared
                .comps
                .iter()
                .zip(&dual.comps)
                .map(|(a, b)| a.sub(b))
                .collect();
            extra.push(Scan::exprs(&samples, &defect).record(
                "declared-eta",
                "declared eta equals the g-dual of xi",
                1e-10,
            ));
            declared
        }
        None => dual,
    };
    let (s, mut records) =
        build_from_coordinate(flavor, chart, phi, xi, eta, g, options)?;
    // frame Gram reproduction
    let mut worst = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let got = s.g.pair(&fp.frame[i], &fp.frame[j]);
            worst.push(got.sub(gram.get(i, j)));
        }
    }
    records.push(Scan::exprs(&s.samples, &worst).record(
        "frame-gram",
        "reconstructed g reproduces the declared frame Gram matrix",
        1e-10,
    ));
    records.extend(extra);
    Ok((s, records))
}

/// Identity suite from the foundational theory: the Reeb covariant
/// derivative law, the ∇_ξ h identity, the Ricci value in the ξ direction,
/// the 3D (∇_X φ)Y formula and the curvature expression it implies. The
/// contact flavor gets the Riemannian counterparts of the first and third.
pub fn reeb_identity_suite(s: &MetricStructure) -> Vec<CheckRecord> {
    let tol = s.options.tol;
    let samples = &s.samples;
    let mut out = Vec::new();
    let d = s.dim();
    let coords = s.coordinate_fields();

    // ∇ξ = −φ + φh (paracontact), ∇ξ = −φ − φh (contact), columnwise
    let grad_xi = s.lc.grad_vf(&s.xi);
    let phih = s.phi.m.matmul(&s.h.m);
    let (target, anchor) = match s.flavor {
        Flavor::Paracontact => (
            s.phi.m.map(|e| e.neg()).add(&phih),
            "nabla xi = -phi + phi h",
        ),
        Flavor::Contact => (
            s.phi.m.map(|e| e.neg()).sub(&phih),
            "nabla xi = -phi - phi h",
        ),
    };
    out.push(Scan::exprs(samples, entries(&grad_xi.sub(&target))).record(
        "nabla-xi",
        anchor,
        tol,
    ));

    // S(ξ,ξ) = −2n + tr h² (paracontact), 2n − tr h² (contact)
    let n = s.n() as f64;
    let lhs = s.lc.ricci_pair(&s.xi, &s.xi);
    let tr_h2 = s.h.m.matmul(&s.h.m).trace();
    let (rhs, anchor) = match s.flavor {
        Flavor::Paracontact => (
            tr_h2.add(&Expr::constant(-2.0 * n)),
            "S(xi,xi) = -2n + tr h^2",
        ),
        Flavor::Contact => (
            tr_h2.neg().add(&Expr::constant(2.0 * n)),
            "S(xi,xi) = 2n - tr h^2",
        ),
    };
    out.push(Scan::exprs(samples, &[lhs.sub(&rhs)]).record("ricci-xi", anchor, tol));

    if s.flavor == Flavor::Contact {
        return out;
    }

    // (∇_ξ h)X = −φX + h²φX + φ R(ξ,X)ξ
    let nab_xi_h = s.lc.cov_end(&s.xi, &s.h);
    let h2phi = s.h.m.matmul(&s.h.m).matmul(&s.phi.m);
    let mut defects = Vec::new();
    for x in &coords {
        let lhs = VectorField {
            chart: s.chart.clone(),
            comps: nab_xi_h.m.apply(&x.comps),
        };
        let r = s.lc.curvature(&s.xi, x, &s.xi);
        let rhs_comps = {
            let a = s.phi.m.apply(&x.comps);
            let b = h2phi.apply(&x.comps);
            let c = s.phi.m.apply(&r.comps);
            (0..d)
                .map(|k| a[k].neg().add(&b[k]).add(&c[k]))
                .collect::<Vec<_>>()
        };
        for (l, r) in lhs.comps.iter().zip(&rhs_comps) {
            defects.push(l.sub(r));
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "nabla-xi-h",
        "(nabla_xi h)X = -phiX + h^2 phiX + phi R(xi,X)xi",
        tol,
    ));

    if d == 3 && s.flavor == Flavor::Paracontact {
        // (∇_X φ)Y = −g(X − hX, Y)ξ + η(Y)(X − hX)
        let mut defects = Vec::new();
        for x in &coords {
            let nab_phi = s.lc.cov_end(x, &s.phi);
            for y in &coords {
                let lhs = nab_phi.m.apply(&y.comps);
                let xmh: Vec<Expr> = x
                    .comps
                    .iter()
                    .zip(&s.h.m.apply(&x.comps))
                    .map(|(a, b)| a.sub(b))
                    .collect();
                let xmh_vf = VectorField {
                    chart: s.chart.clone(),
                    comps: xmh.clone(),
                };
                let coeff = s.g.pair(&xmh_vf, y).neg();
                let eta_y = s.eta.apply(y);
                for k in 0..d {
                    let rhs = coeff.mul(&s.xi.comps[k]).add(&eta_y.mul(&xmh[k]));
                    defects.push(lhs[k].sub(&rhs));
                }
            }
        }
        out.push(Scan::exprs(samples, &defects).record(
            "nabla-phi-3d",
            "(nabla_X phi)Y = -g(X-hX,Y)xi + eta(Y)(X-hX)",
            tol,
        ));

        // consistency: R(X,Y)ξ = −(∇_Xφ)Y + (∇_Yφ)X + (∇_X φh)Y − (∇_Y φh)X
        let phih = EndField::new(s.chart.clone(), s.phi.m.matmul(&s.h.m)).unwrap();
        let mut defects = Vec::new();
        for (a, x) in coords.iter().enumerate() {
            for y in coords.iter().skip(a + 1) {
                let r = s.lc.curvature(x, y, &s.xi);
                let t1 = s.lc.cov_end(x, &s.phi).m.apply(&y.comps);
                let t2 = s.lc.cov_end(y, &s.phi).m.apply(&x.comps);
                let t3 = s.lc.cov_end(x, &phih).m.apply(&y.comps);
                let t4 = s.lc.cov_end(y, &phih).m.apply(&x.comps);
                for k in 0..d {
                    let rhs = t2[k].sub(&t1[k]).add(&t3[k]).sub(&t4[k]);
                    defects.push(r.comps[k].sub(&rhs));
                }
            }
        }
        out.push(Scan::exprs(samples, &defects).record(
            "curvature-xi-consistency",
            "R(X,Y)xi from the differentiated Reeb law",
            tol,
        ));
    }

    out
}

/// Connection- and curvature-level sanity suite: the defining properties of
/// the Levi-Civita package and the dimension-3 curvature decomposition that
/// pins the Ricci sign conventions.
pub fn geometry_identity_suite(s: &MetricStructure) -> Vec<CheckRecord> {
    let samples = &s.samples;
    let d = s.dim();
    let lc = &s.lc;
    let mut out = Vec::new();

    // ∇g = 0: ∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il
    let mut defects = Vec::new();
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut e = s.g.m.get(i, j).differentiate(k);
                for l in 0..d {
                    e = e.sub(&lc.christoffel(l, k, i).mul(s.g.m.get(l, j)));
                    e = e.sub(&lc.christoffel(l, k, j).mul(s.g.m.get(i, l)));
                }
                defects.push(e);
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "metric-compat",
        "covariant derivative of the metric vanishes",
        1e-9,
    ));

    // torsion-free on structure-derived non-coordinate fields
    let mut fields = vec![s.xi.clone()];
    for i in 0..d.min(2) {
        fields.push(s.phi.apply(&VectorField::coordinate(s.chart.clone(), i)));
    }
    let mut defects = Vec::new();
    for (a, x) in fields.iter().enumerate() {
        for y in fields.iter().skip(a + 1) {
            let t = lc.cov_vf(x, y).sub(&lc.cov_vf(y, x));
            let b = lie_bracket(x, y).expect("same chart");
            for k in 0..d {
                defects.push(t.comps[k].sub(&b.comps[k]));
            }
        }
    }
    out.push(Scan::exprs(samples, &defects).record(
        "torsion-free",
        "∇_X Y − ∇_Y X = [X, Y]",
        1e-9,
    ));

    // first Bianchi identity on seeded constant-coefficient fields
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    };
    let mut defects = Vec::new();
    for _ in 0..3 {
        let mk = |vals: Vec<f64>| VectorField {
            chart: s.chart.clone(),
            comps: vals.into_iter().map(Expr::constant).collect(),
        };
        let x = mk((0..d).map(|_| next()).collect());
        let y = mk((0..d).map(|_| next()).collect());
        let z = mk((0..d).map(|_| next()).collect());
        let sum = lc
            .curvature(&x, &y, &z)
            .add(&lc.curvature(&y, &z, &x))
            .add(&lc.curvature(&z, &x, &y));
        defects.extend(sum.comps);
    }
    out.push(Scan::exprs(samples, &defects).record(
        "first-bianchi",
        "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
        1e-8,
    ));

    // Ricci symmetry
    out.push(
        Scan::exprs(samples, lc.ricci.sub(&lc.ricci.transpose()).entries_slice()).record(
            "ricci-symmetric",
            "S(X,Y) = S(Y,X)",
            1e-9,
        ),
    );

    // 3D curvature decomposition through the Ricci data
    if d == 3 {
        let coords = s.coordinate_fields();
        let mut defects = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let x = &coords[i];
                    let y = &coords[j];
                    let z = &coords[k];
                    let lhs = lc.curvature(x, y, z);
                    let qx = lc.ricci_apply(x);
                    let qy = lc.ricci_apply(y);
                    let g_yz = s.g.m.get(j, k).clone();
                    let g_xz = s.g.m.get(i, k).clone();
                    let g_qy_z = s.g.pair(&qy, z);
                    let g_qx_z = s.g.pair(&qx, z);
                    let half_r = lc.scalar.scale(0.5);
                    for c in 0..3 {
                        let rhs = g_yz
                            .mul(&qx.comps[c])
                            .sub(&g_xz.mul(&qy.comps[c]))
                            .add(&g_qy_z.mul(&x.comps[c]))
                            .sub(&g_qx_z.mul(&y.comps[c]))
                            .sub(&half_r.mul(
                                &g_yz.mul(&x.comps[c]).sub(&g_xz.mul(&y.comps[c])),
                            ));
                        defects.push(lhs.comps[c].sub(&rhs));
                    }
                }
            }
        }
        out.push(Scan::exprs(samples, &defects).record(
            "three-dim-curvature",
            "R(X,Y)Z decomposes through Q and r in dimension 3",
            1e-8,
        ));
    }

    out
}

pub struct KParacontactReport {
    pub is_k_paracontact: bool,
    pub h_norm: f64,
    pub records: Vec<CheckRecord>,
}

/// h ≡ 0 over the samples ⟺ ξ is Killing (K-paracontact). Also reports
/// whether R(X,Y)ξ = −(η(Y)X − η(X)Y) holds; that condition is necessary
/// for para-Sasakian but not sufficient, so it is recorded with a caveat.
pub fn is_k_paracontact(s: &MetricStructure) -> KParacontactReport {
    let tol = s.options.tol;
    let h_scan = Scan::exprs(&s.samples, entries(&s.h.m));
    let is_k = h_scan.max < tol;
    let mut records = vec![CheckRecord::info(
        "k-paracontact",
        "h = 0 iff xi is Killing",
        format!("max |h| = {:.3e} → {}", h_scan.max, is_k),
    )];
    let coords = s.coordinate_fields();
    let mut defects = Vec::new();
    for (a, x) in coords.iter().enumerate() {
        for y in coords.iter().skip(a + 1) {
            let r = s.lc.curvature(x, y, &s.xi);
            let eta_x = s.eta.apply(x);
            let eta_y = s.eta.apply(y);
            for k in 0..s.dim() {
                let rhs = eta_y.mul(&x.comps[k]).sub(&eta_x.mul(&y.comps[k])).neg();
                defects.push(r.comps[k].sub(&rhs));
            }
        }
    }
    let pasa = Scan::exprs(&s.samples, &defects);
    records.push(CheckRecord::info(
        "pasa-curvature",
        "R(X,Y)xi = -(eta(Y)X - eta(X)Y)",
        format!(
            "max residual {:.3e}; holding does not by itself make the structure para-Sasakian",
            pasa.max
        ),
    ));
    KParacontactReport {
        is_k_paracontact: is_k,
        h_norm: h_scan.max,
        records,
    }
}

/// In dimension 3, para-Sasakian ⟺ K-paracontact.
pub fn is_para_sasakian_3d(s: &MetricStructure) -> Result<KParacontactReport, StructureError> {
    if s.dim() != 3 {
        return Err(StructureError::DimensionNot3(s.dim()));
    }
    let mut rep = is_k_paracontact(s);
    rep.records.push(CheckRecord::info(
        "para-sasakian-3d",
        "dimension-3 equivalence with K-paracontact",
        format!("para-Sasakian: {}", rep.is_k_paracontact),
    ));
    Ok(rep)
}

/// Brackets of two named fields, exposed for frame-equation checks.
pub fn bracket(
    x: &VectorField,
    y: &VectorField,
) -> Result<VectorField, FieldError> {
    lie_bracket(x, y)
}
