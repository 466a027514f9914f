//! `posthopf` command-line front end. [`run`] is the whole program; the
//! binary only wires it to the process streams.

pub mod config;
pub mod error;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use posthopf_core::anchor::anchor_by_name;
use posthopf_core::series::modified_field;
use posthopf_core::suites::{run_suite, SuiteConfig};
use posthopf_core::trees::enumerate_forests;
use posthopf_core::{Algebroid, AlgebroidElement, CoeffPoly, TruncatedSeries};
use posthopf_geomint::{run_experiment, ExperimentConfig, ExperimentKind};

pub use config::CliConfig;
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "posthopf", version, about = "Planar-tree algebroid toolkit and Lie-group integrator experiments")]
struct Cli {
    /// Flat key=value file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    max_grade: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    order: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    samples: Option<String>,
    #[arg(long, global = true, value_name = "NAME")]
    group: Option<String>,
    #[arg(long, global = true, value_name = "NAME")]
    field: Option<String>,
    /// lie-euler, aromatic or reference
    #[arg(long, global = true, value_name = "NAME")]
    method: Option<String>,
    #[arg(long, global = true, value_name = "T")]
    t_min: Option<String>,
    #[arg(long, global = true, value_name = "T")]
    t_max: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    t_points: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// analytic or fd
    #[arg(long, global = true, value_name = "MODE")]
    derivatives: Option<String>,
    /// Reference-flow tolerance.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<String>,
    /// Integration horizon of `experiment order`.
    #[arg(long, global = true, value_name = "T")]
    horizon: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    threads: Option<String>,
    #[command(subcommand)]
    command: Command,
}

impl Cli {
    fn flag_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("max-grade", &self.max_grade),
            ("order", &self.order),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("group", &self.group),
            ("field", &self.field),
            ("method", &self.method),
            ("t-min", &self.t_min),
            ("t-max", &self.t_max),
            ("t-points", &self.t_points),
            ("out", &self.out),
            ("derivatives", &self.derivatives),
            ("tol", &self.tol),
            ("horizon", &self.horizon),
            ("threads", &self.threads),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Forest enumeration.
    Trees {
        #[command(subcommand)]
        cmd: TreesCmd,
    },
    /// Symbolic operations and identity suites.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Series in the Grossman–Larson algebra.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Numerical experiments on matrix groups.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand, Debug)]
enum TreesCmd {
    /// All forests up to --max-grade in canonical order.
    Enumerate,
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Apply one operation to parsed elements.
    Eval {
        /// triangle, gl, concat, theta, coproduct, braid, counit, antipode or action
        #[arg(long)]
        op: String,
        /// First operand, e.g. "1/2 | o o ; g | [o]".
        #[arg(long)]
        x: String,
        /// Second operand for binary operations.
        #[arg(long)]
        y: Option<String>,
        /// Coefficient for `action`.
        #[arg(long)]
        f: Option<String>,
        /// free or zero
        #[arg(long, default_value = "free")]
        anchor: String,
    },
    /// Run a named identity suite.
    Check {
        /// axioms, theta, braiding or degenerate
        #[arg(long)]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// exp of tF in the Grossman–Larson product, to --order.
    GlExp,
    /// Modified field of --method, to --order.
    ModifiedField,
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Per-step log det over the t-grid.
    Volume,
    /// Global error after --horizon over the t-grid.
    Order,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 success, 1 failed suite or runtime failure, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok(Outcome { text, passed, cfg }) => {
            let written = match &cfg.out {
                Some(path) => std::fs::write(path, &text).map_err(CliError::from),
                None => out.write_all(text.as_bytes()).map_err(CliError::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return e.exit_code();
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    text: String,
    passed: bool,
    cfg: CliConfig,
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let file = match &cli.config {
        Some(path) => config::read_config(path)?,
        None => BTreeMap::new(),
    };
    let cfg = CliConfig::resolve(&file, &cli.flag_map())?;
    let (text, passed) = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?
            .install(|| dispatch(&cli.command, &cfg))?,
        None => dispatch(&cli.command, &cfg)?,
    };
    Ok(Outcome { text, passed, cfg })
}

fn dispatch(command: &Command, cfg: &CliConfig) -> Result<(String, bool), CliError> {
    match command {
        Command::Trees { cmd: TreesCmd::Enumerate } => {
            let forests = enumerate_forests(cfg.max_grade)?;
            let mut text = format!(
                "# trees enumerate max_grade={} count={} seed={}\n",
                cfg.max_grade,
                forests.len(),
                cfg.seed
            );
            for w in forests {
                text.push_str(&format!("{w}\n"));
            }
            Ok((text, true))
        }
        Command::Algebra { cmd: AlgebraCmd::Check { suite } } => {
            let suite_cfg = SuiteConfig {
                max_grade: cfg.max_grade,
                samples: cfg.samples,
                seed: cfg.seed,
                ..Default::default()
            };
            let reports = run_suite(suite, &suite_cfg)?;
            let passed = reports.iter().all(|r| r.passed());
            let mut text = format!(
                "# algebra check suite={suite} max_grade={} samples={} seed={}\n",
                cfg.max_grade, cfg.samples, cfg.seed
            );
            for r in &reports {
                text.push_str(&format!("{r}\n"));
            }
            text.push_str(if passed { "# result=pass\n" } else { "# result=fail\n" });
            Ok((text, passed))
        }
        Command::Algebra {
            cmd: AlgebraCmd::Eval { op, x, y, f, anchor },
        } => {
            let body = eval_op(op, x, y.as_deref(), f.as_deref(), anchor)?;
            Ok((format!("# algebra eval op={op} anchor={anchor} seed={}\n{body}", cfg.seed), true))
        }
        Command::Series { cmd } => {
            let h = Algebroid::default();
            let (name, series) = match cmd {
                SeriesCmd::GlExp => ("gl-exp", TruncatedSeries::field(cfg.order).exp_gl(&h)?),
                SeriesCmd::ModifiedField => ("modified-field", modified_field(&h, &cfg.method, cfg.order)?),
            };
            let method = match cmd {
                SeriesCmd::GlExp => String::new(),
                SeriesCmd::ModifiedField => format!(" method={}", cfg.method),
            };
            Ok((
                format!("# series {name}{method} order={} seed={}\n{}", cfg.order, cfg.seed, series.dump()),
                true,
            ))
        }
        Command::Experiment { cmd } => {
            let exp = ExperimentConfig {
                kind: match cmd {
                    ExperimentCmd::Volume => ExperimentKind::Volume,
                    ExperimentCmd::Order => ExperimentKind::Order,
                },
                group: cfg.group.clone(),
                field: cfg.field.clone(),
                method: cfg.method.clone(),
                t_max: cfg.t_max,
                t_min: cfg.t_min,
                points: cfg.t_points,
                derivatives: cfg.derivatives,
                seed: cfg.seed,
                tol: cfg.tol,
                horizon: cfg.horizon,
            };
            Ok((run_experiment(&exp)?.to_csv(), true))
        }
    }
}

fn eval_op(op: &str, x: &str, y: Option<&str>, f: Option<&str>, anchor: &str) -> Result<String, CliError> {
    let h = Algebroid::new(anchor_by_name(anchor)?);
    let x = AlgebroidElement::parse(x)?;
    h.check_grade(x.max_forest_grade())?;
    let second = || -> Result<AlgebroidElement, CliError> {
        let text = y.ok_or_else(|| CliError::Usage(format!("operation `{op}` needs --y")))?;
        let y = AlgebroidElement::parse(text)?;
        h.check_grade(y.max_forest_grade())?;
        Ok(y)
    };
    Ok(match op {
        "triangle" => h.try_triangle(&x, &second()?)?.dump(),
        "gl" => h.try_gl_product(&x, &second()?)?.dump(),
        "concat" => x.concat(&second()?).dump(),
        "theta" => h.theta(&x).dump(),
        "antipode" => x.antipode_concat().dump(),
        "coproduct" => h.coproduct(&x).dump(),
        "braid" => h.try_braid_r(&h.tensor_bimod(&x, &second()?))?.dump(),
        "counit" => format!("{}\n", x.counit()),
        "action" => {
            let text = f.ok_or_else(|| CliError::Usage("operation `action` needs --f".into()))?;
            format!("{}\n", h.module_action(&x, &CoeffPoly::parse(text)?))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown operation `{other}` (expected triangle, gl, concat, theta, antipode, coproduct, braid, counit or action)"
            )))
        }
    })
}
