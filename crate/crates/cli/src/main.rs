//! Command-line interface: validate, classify, fit, run the full suite,
//! deform, bridge, generate models, and run the built-in corpus.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails,
//! 2 on input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use paraverify::classify::{classify_h, ClassifyOptions, NullityFitter};
use paraverify::corpus;
use paraverify::deform;
use paraverify::manifest::{Branch, Manifest};
use paraverify::report::{CheckRecord, Report};
use paraverify::structures::BuildOptions;

#[derive(Parser)]
#[command(
    name = "paraverify",
    about = "Verification engine for 3D paracontact metric (kappa,mu,nu)-geometry",
    version
)]
struct Cli {
    /// Number of sample points
    #[arg(long, global = true, default_value_t = 100)]
    points: usize,
    /// Sampling seed
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Residual tolerance for validation checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Classification dead zone: |h| (or an eigenvalue of h²) below this
    /// is treated as zero when picking the canonical form
    #[arg(long, global = true, default_value_t = 1e-9)]
    class_tol: f64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structure from a manifest and run axiom validation
    Validate { manifest: PathBuf },
    /// Classify the canonical form of h over the sample set
    Classify {
        manifest: PathBuf,
        /// Classify at one explicit point, comma-separated coordinates
        #[arg(long)]
        point: Option<String>,
    },
    /// Fit the nullity coefficients pointwise
    Fit { manifest: PathBuf },
    /// Run the full verification suite
    Suite { manifest: PathBuf },
    /// Apply a D_α-homothetic deformation and verify its laws
    Deform {
        manifest: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Induce the canonical paracontact structure from a contact manifest
    /// and verify the transfer laws
    Bridge { manifest: PathBuf },
    /// Generate an explicit model structure
    Model {
        #[command(subcommand)]
        which: ModelCommand,
    },
    /// Built-in corpus
    Corpus {
        #[command(subcommand)]
        which: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Contact (κ, μ, ν = const)-model with ξ(I_M) = 0
    Zetamu {
        #[arg(long, value_enum)]
        branch: BranchArg,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value = "0")]
        f: String,
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, default_value = "0")]
        s: String,
        /// Print the generated manifest instead of running the suite
        #[arg(long)]
        emit_manifest: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List the bundled corpus entries
    List,
    /// Run the full suite on a corpus entry
    Run { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Md => println!("{}", report.to_markdown()),
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn build_options(cli: &Cli) -> BuildOptions {
    BuildOptions {
        points: cli.points,
        seed: cli.seed,
        tol: cli.tol,
        margin: 0.05,
    }
}

fn suite_options(cli: &Cli) -> corpus::SuiteOptions {
    corpus::SuiteOptions {
        build: build_options(cli),
        classify: ClassifyOptions {
            zero_tol: cli.class_tol,
        },
        ..Default::default()
    }
}

fn load(path: &Path) -> Result<Manifest> {
    Manifest::from_path(path).with_context(|| format!("loading manifest {}", path.display()))
}

fn run(cli: &Cli) -> Result<Report> {
    let opts = build_options(cli);
    match &cli.command {
        Command::Validate { manifest } => {
            let m = load(manifest)?;
            let mut report = Report::new(m.name.clone(), opts.seed, opts.points, opts.tol);
            let (_, records) = m.build(Some(opts))?;
            report.extend(records);
            Ok(report)
        }
        Command::Classify { manifest, point } => {
            let m = load(manifest)?;
            let mut report = Report::new(m.name.clone(), opts.seed, opts.points, opts.tol);
            let (s, records) = m.build(Some(opts))?;
            report.extend(records);
            let copts = ClassifyOptions {
                zero_tol: cli.class_tol,
            };
            let scan = paraverify::classify::type_constancy_scan(&s, copts)?;
            report.extend(scan.records.clone());
            if let Some(t) = scan.overall {
                report.push(CheckRecord::info(
                    "canonical-form",
                    "canonical form over the sampled region",
                    t.to_string(),
                ));
            }
            if let Some(text) = point {
                let p: Vec<f64> = text
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| anyhow!("bad --point: {e}"))?;
                let rep = classify_h(&s, &p, copts)?;
                report.push(CheckRecord::info(
                    "classify-point",
                    "pointwise classification",
                    format!(
                        "type {} at {:?}: lambda = {:.9}, signed entry = {:.9}, residual = {:.3e}",
                        rep.htype, rep.point, rep.lambda, rep.lambda_signed, rep.residual
                    ),
                ));
            }
            Ok(report)
        }
        Command::Fit { manifest } => {
            let m = load(manifest)?;
            let mut report = Report::new(m.name.clone(), opts.seed, opts.points, opts.tol);
            let (s, records) = m.build(Some(opts))?;
            report.extend(records);
            let fitter = NullityFitter::new(&s);
            let mut max_res = 0.0_f64;
            let mut worst = None;
            for p in &s.samples {
                let fit = fitter.fit_at(p)?;
                if fit.residual > max_res {
                    max_res = fit.residual;
                    worst = Some(p.clone());
                }
            }
            report.push(CheckRecord::residual(
                "nullity-fit",
                "pointwise (κ, μ, ν) fit of the curvature ansatz",
                max_res,
                worst,
                1e-7,
            ));
            let fit = fitter.fit_at(&s.samples[0])?;
            report.push(CheckRecord::info(
                "fitted-kmn",
                "fitted coefficients at the first sample point",
                format!(
                    "κ={:.9}, μ={:.9}, ν={:.9} (identifiable {:?})",
                    fit.kappa, fit.mu, fit.nu, fit.identifiable
                ),
            ));
            Ok(report)
        }
        Command::Suite { manifest } => {
            let m = load(manifest)?;
            Ok(corpus::run_manifest_suite(&m, &suite_options(cli))?)
        }
        Command::Deform { manifest, alpha } => {
            let m = load(manifest)?;
            let mut report = Report::new(
                format!("{}-deformed-{alpha}", m.name),
                opts.seed,
                opts.points,
                opts.tol,
            );
            let (s, records) = m.build(Some(opts))?;
            report.extend(records);
            let (deformed, records) = deform::d_homothetic(&s, *alpha)?;
            report.extend(records);
            report.extend(deform::deformed_connection_check(&s, &deformed, *alpha, 1e-8));
            // closed-form transform cross-check against the deformed fit
            let base_fitter = NullityFitter::new(&s);
            let def_fitter = NullityFitter::new(&deformed);
            let mut max_gap = 0.0_f64;
            for p in s.samples.iter() {
                let base = base_fitter.fit_at(p)?;
                let def = def_fitter.fit_at(p)?;
                let (k, mu, nu) = deform::kmn_transform(base.kappa, base.mu, base.nu, *alpha);
                max_gap = max_gap.max((def.kappa - k).abs());
                if def.identifiable[1] && base.identifiable[1] {
                    max_gap = max_gap.max((def.mu - mu).abs());
                }
                if def.identifiable[2] && base.identifiable[2] {
                    max_gap = max_gap.max((def.nu - nu).abs());
                }
            }
            report.push(CheckRecord::residual(
                "kmn-transform",
                "deformed fit matches the closed-form coefficient transform",
                max_gap,
                None,
                1e-6,
            ));
            Ok(report)
        }
        Command::Bridge { manifest } => {
            let m = load(manifest)?;
            let mut opts_suite = suite_options(cli);
            opts_suite.run_bridge = true;
            Ok(corpus::run_manifest_suite(&m, &opts_suite)?)
        }
        Command::Model { which } => match which {
            ModelCommand::Zetamu {
                branch,
                nu,
                f,
                r,
                s,
                emit_manifest,
            } => {
                let branch = match branch {
                    BranchArg::Plus => Branch::Plus,
                    BranchArg::Minus => Branch::Minus,
                };
                let m = corpus::zetamu_manifest("zetamu-model", branch, *nu, f, r, s);
                if *emit_manifest {
                    println!("{}", serde_json::to_string_pretty(&m)?);
                    return Ok(Report::new(
                        "zetamu-model",
                        opts.seed,
                        opts.points,
                        opts.tol,
                    ));
                }
                Ok(corpus::run_manifest_suite(&m, &suite_options(cli))?)
            }
        },
        Command::Corpus { which } => match which {
            CorpusCommand::List => {
                let mut report = Report::new("corpus", opts.seed, opts.points, opts.tol);
                for name in corpus::NAMES {
                    report.push(CheckRecord::info(name, "bundled corpus entry", ""));
                }
                Ok(report)
            }
            CorpusCommand::Run { name } => {
                Ok(corpus::run_corpus_suite(name, &suite_options(cli))?)
            }
        },
    }
}
