//! JSON manifest schema: a (para)contact structure described by expression
//! strings, in coordinate, frame, or generated-model presentation.
//!
//! Validation failures carry JSON-pointer-style paths so a bad manifest is
//! localizable without reading the whole file.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{Chart, ChartRef, Constraint};
use crate::expr::{self, Expr};
use crate::fields::{EndField, ExprMatrix, MetricField, OneForm, VectorField};
use crate::report::CheckRecord;
use crate::structures::{
    build_from_coordinate, build_from_frame, BuildOptions, Flavor, FrameGram, FramePresentation,
    MetricStructure, StructureError,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Paracontact,
    Contact,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub coords: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
    pub sample_bounds: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonzero: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum Presentation {
    Coordinate(CoordinateSpec),
    Frame(FrameSpec),
    Zetamu(ZetamuSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateSpec {
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    pub eta: Vec<String>,
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub vectors: Vec<Vec<String>>,
    pub gram: GramSpec,
    pub phi_on_frame: Vec<Vec<String>>,
    pub xi_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum GramSpec {
    Orthonormal(Vec<f64>),
    PseudoOrthonormal,
}

/// Parameters of the explicit contact model family (branch-dependent
/// matrices with a = ±2y + f(z), λ = r(z)e^{νx}).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetamuSpec {
    pub branch: Branch,
    pub nu: f64,
    pub f: String,
    pub r: String,
    pub s: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DeclaredSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_points() -> usize {
    100
}
fn default_seed() -> u64 {
    42
}
fn default_margin() -> f64 {
    0.05
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            points: default_points(),
            seed: default_seed(),
            margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub kind: Kind,
    pub chart: ChartSpec,
    pub presentation: Presentation,
    #[serde(default)]
    pub declared: DeclaredSpec,
    #[serde(default)]
    pub sampling: SamplingSpec,
}

/// Optional declared coefficient fields (κ, μ, ν).
pub type DeclaredKmn = (Option<Expr>, Option<Expr>, Option<Expr>);

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("could not read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

fn invalid(path: impl Into<String>, message: impl std::fmt::Display) -> ManifestError {
    ManifestError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest, ManifestError> {
        let m: Manifest = serde_json::from_str(text)?;
        m.check_shapes()?;
        Ok(m)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Manifest, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Manifest::from_json(&text)
    }

    fn check_shapes(&self) -> Result<(), ManifestError> {
        let dim = self.chart.coords.len();
        if dim == 0 {
            return Err(invalid("/chart/coords", "at least one coordinate required"));
        }
        if self.chart.sample_bounds.len() != dim {
            return Err(invalid(
                "/chart/sample_bounds",
                format!(
                    "expected {dim} intervals, got {}",
                    self.chart.sample_bounds.len()
                ),
            ));
        }
        for (i, c) in self.chart.constraints.iter().enumerate() {
            match (&c.nonzero, &c.positive) {
                (Some(_), None) | (None, Some(_)) => {}
                _ => {
                    return Err(invalid(
                        format!("/chart/constraints/{i}"),
                        "exactly one of `nonzero` or `positive` required",
                    ))
                }
            }
        }
        let square = |rows: &Vec<Vec<String>>, path: &str| -> Result<(), ManifestError> {
            if rows.len() != dim {
                return Err(invalid(path, format!("expected {dim} rows, got {}", rows.len())));
            }
            for (i, r) in rows.iter().enumerate() {
                if r.len() != dim {
                    return Err(invalid(
                        format!("{path}/{i}"),
                        format!("expected {dim} entries, got {}", r.len()),
                    ));
                }
            }
            Ok(())
        };
        match &self.presentation {
            Presentation::Coordinate(c) => {
                square(&c.phi, "/presentation/coordinate/phi")?;
                square(&c.g, "/presentation/coordinate/g")?;
                if c.xi.len() != dim {
                    return Err(invalid("/presentation/coordinate/xi", "wrong length"));
                }
                if c.eta.len() != dim {
                    return Err(invalid("/presentation/coordinate/eta", "wrong length"));
                }
            }
            Presentation::Frame(f) => {
                square(&f.vectors, "/presentation/frame/vectors")?;
                square(&f.phi_on_frame, "/presentation/frame/phi_on_frame")?;
                if f.xi_index >= dim {
                    return Err(invalid("/presentation/frame/xi_index", "out of range"));
                }
                if let GramSpec::Orthonormal(signs) = &f.gram {
                    if signs.len() != dim || signs.iter().any(|s| s.abs() != 1.0) {
                        return Err(invalid(
                            "/presentation/frame/gram",
                            "orthonormal signs must be ±1, one per coordinate",
                        ));
                    }
                }
                if let Some(eta) = &f.eta {
                    if eta.len() != dim {
                        return Err(invalid("/presentation/frame/eta", "wrong length"));
                    }
                }
            }
            Presentation::Zetamu(_) => {
                if self.kind != Kind::Contact {
                    return Err(invalid(
                        "/presentation/zetamu",
                        "the model family generates contact structures; kind must be `contact`",
                    ));
                }
                if dim != 3 {
                    return Err(invalid("/chart/coords", "the model family is 3-dimensional"));
                }
            }
        }
        Ok(())
    }

    pub fn flavor(&self) -> Flavor {
        match self.kind {
            Kind::Paracontact => Flavor::Paracontact,
            Kind::Contact => Flavor::Contact,
        }
    }

    pub fn chart(&self) -> Result<ChartRef, ManifestError> {
        let coords = self.chart.coords.clone();
        let mut constraints = Vec::new();
        for (i, c) in self.chart.constraints.iter().enumerate() {
            let path = format!("/chart/constraints/{i}");
            if let Some(text) = &c.nonzero {
                let e = expr::parse(text, &coords).map_err(|e| invalid(&path, e))?;
                constraints.push(Constraint::nonzero(e));
            }
            if let Some(text) = &c.positive {
                let e = expr::parse(text, &coords).map_err(|e| invalid(&path, e))?;
                constraints.push(Constraint::positive(e));
            }
        }
        let bounds = self.chart.sample_bounds.iter().map(|b| (b[0], b[1])).collect();
        Chart::new(self.name.clone(), coords, constraints, bounds)
            .map_err(StructureError::Chart)
            .map_err(ManifestError::from)
    }

    fn parse_matrix(
        &self,
        chart: &ChartRef,
        rows: &[Vec<String>],
        path: &str,
    ) -> Result<ExprMatrix, ManifestError> {
        let dim = chart.dim();
        let mut out = ExprMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let e = expr::parse(text, &chart.coords)
                    .map_err(|e| invalid(format!("{path}/{i}/{j}"), e))?;
                out.set(i, j, e);
            }
        }
        Ok(out)
    }

    fn parse_vec(
        &self,
        chart: &ChartRef,
        comps: &[String],
        path: &str,
    ) -> Result<Vec<Expr>, ManifestError> {
        comps
            .iter()
            .enumerate()
            .map(|(i, text)| {
                expr::parse(text, &chart.coords).map_err(|e| invalid(format!("{path}/{i}"), e))
            })
            .collect()
    }

    /// Parsed and validated declared (κ, μ, ν) expressions, when present.
    pub fn declared_kmn(&self, chart: &ChartRef) -> Result<DeclaredKmn, ManifestError> {
        let parse_opt = |text: &Option<String>, path: &str| -> Result<Option<Expr>, ManifestError> {
            text.as_ref()
                .map(|t| expr::parse(t, &chart.coords).map_err(|e| invalid(path, e)))
                .transpose()
        };
        Ok((
            parse_opt(&self.declared.kappa, "/declared/kappa")?,
            parse_opt(&self.declared.mu, "/declared/mu")?,
            parse_opt(&self.declared.nu, "/declared/nu")?,
        ))
    }

    pub fn build_options(&self, overrides: Option<BuildOptions>) -> BuildOptions {
        overrides.unwrap_or(BuildOptions {
            points: self.sampling.points,
            seed: self.sampling.seed,
            margin: self.sampling.margin,
            tol: BuildOptions::default().tol,
        })
    }

    /// Builds the structure this manifest describes. The zetamu presentation
    /// is expanded by the bridge module's model generator.
    pub fn build(
        &self,
        options: Option<BuildOptions>,
    ) -> Result<(MetricStructure, Vec<CheckRecord>), ManifestError> {
        let chart = self.chart()?;
        let opts = self.build_options(options);
        match &self.presentation {
            Presentation::Coordinate(c) => {
                let phi = EndField::new(
                    chart.clone(),
                    self.parse_matrix(&chart, &c.phi, "/presentation/coordinate/phi")?,
                )
                .map_err(StructureError::Field)?;
                let g = MetricField::new(
                    chart.clone(),
                    self.parse_matrix(&chart, &c.g, "/presentation/coordinate/g")?,
                )
                .map_err(StructureError::Field)?;
                let xi = VectorField::new(
                    chart.clone(),
                    self.parse_vec(&chart, &c.xi, "/presentation/coordinate/xi")?,
                )
                .map_err(StructureError::Field)?;
                let eta = OneForm::new(
                    chart.clone(),
                    self.parse_vec(&chart, &c.eta, "/presentation/coordinate/eta")?,
                )
                .map_err(StructureError::Field)?;
                Ok(build_from_coordinate(
                    self.flavor(),
                    chart,
                    phi,
                    xi,
                    eta,
                    g,
                    opts,
                )?)
            }
            Presentation::Frame(f) => {
                let mut frame = Vec::new();
                for (j, v) in f.vectors.iter().enumerate() {
                    let comps =
                        self.parse_vec(&chart, v, &format!("/presentation/frame/vectors/{j}"))?;
                    frame.push(VectorField::new(chart.clone(), comps).map_err(StructureError::Field)?);
                }
                let phi_frame =
                    self.parse_matrix(&chart, &f.phi_on_frame, "/presentation/frame/phi_on_frame")?;
                let gram = match &f.gram {
                    GramSpec::Orthonormal(signs) => FrameGram::Orthonormal(signs.clone()),
                    GramSpec::PseudoOrthonormal => FrameGram::PseudoOrthonormal,
                };
                let fp = FramePresentation {
                    frame,
                    gram,
                    phi_frame,
                };
                let eta = f
                    .eta
                    .as_ref()
                    .map(|comps| self.parse_vec(&chart, comps, "/presentation/frame/eta"))
                    .transpose()?;
                Ok(build_from_frame(
                    self.flavor(),
                    chart,
                    &fp,
                    f.xi_index,
                    eta,
                    opts,
                )?)
            }
            Presentation::Zetamu(z) => {
                let params = crate::bridge::ZetamuParams::from_spec(z, &chart)?;
                Ok(crate::bridge::build_zetamu_model(chart, &params, opts)?)
            }
        }
    }
}
