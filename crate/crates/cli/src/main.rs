use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use polyfrolov::algebra::Field;
use polyfrolov::construction::{admissibility_certificate, det_b_degree_formula, generator_matrix};
use polyfrolov::lattice::{m_scan, LatticeSpec, ShrinkFactor, DEFAULT_SCAN_CAP};
use polyfrolov::netanalysis::{duality_check, is_net};
use polyfrolov::pointgen::{build_net, construct_points, DigitPointSet, Format};
use polyfrolov::quality::{discrepancy_bound, error_decay_experiment, star_discrepancy_exact, Integrand};
use polyfrolov_cli::error::io_err;
use polyfrolov_cli::{
    exit, policy_text, run_pipeline, CliError, Logger, Overrides, PipelineConfig, StageExt,
    EXIT_CODE_HELP,
};
use serde_json::json;

/// Digital nets from shrunken admissible lattices over F_b((1/x)).
#[derive(Parser)]
#[command(name = "polyfrolov", version, about, after_help = EXIT_CODE_HELP)]
struct Cli {
    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress the JSON log lines on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the explicit lattice for (b, n) and print it with root audit data.
    Construct {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 128)]
        prec: i64,
        /// Also run the admissibility scan with this degree bound.
        #[arg(long)]
        scan_bound: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the point set of a shrunken lattice.
    Points {
        /// LatticeSpec JSON file.
        #[arg(long, conflicts_with = "construct", required_unless_present = "construct")]
        lattice: Option<PathBuf>,
        /// Use the explicit construction for `b,n`.
        #[arg(long, value_parser = parse_pair)]
        construct: Option<(u32, u32)>,
        /// Comma-separated polynomials, e.g. "x^3,x^3".
        #[arg(long)]
        shrink: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long, default_value = "digits", value_parser = ["digits", "rational", "float"])]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact t-value and dual-net cross-check of a point file.
    Verify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Claimed t; the command fails with code 10 if the set is not a (t,m,d)-net.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact star discrepancy of a point file (d <= 3).
    Discrepancy {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long, default_value_t = polyfrolov::quality::DEFAULT_DISCREPANCY_CAP)]
        cap: usize,
        /// t-value used for the reference bound.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cubature error of a test integrand over a range of shrink degrees.
    Integrate {
        #[arg(long, value_parser = parse_pair)]
        construct: (u32, u32),
        /// Range `r1..r2` (inclusive) of uniform shrink degrees.
        #[arg(long, value_parser = parse_range)]
        shrink_range: (usize, usize),
        #[arg(long, value_parser = ["constant", "linear", "smooth-product", "oscillatory", "indicator"])]
        integrand: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// construct -> points -> verify -> discrepancy, writing all artifacts.
    Pipeline {
        /// JSON config; flags override its keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        lattice: Option<PathBuf>,
        #[arg(long)]
        shrink: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        precision: Option<i64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_parser = ["digits", "rational", "float"])]
        format: Option<String>,
        #[arg(long)]
        scan_bound: Option<u32>,
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        no_discrepancy: bool,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, c) = s.split_once(',').ok_or("expected b,n")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, c.trim().parse().map_err(|e| format!("{e}"))?))
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, c) = s.split_once("..").ok_or("expected r1..r2")?;
    let c = c.trim_start_matches('=');
    let (a, c): (usize, usize) =
        (a.trim().parse().map_err(|e| format!("{e}"))?, c.trim().parse().map_err(|e| format!("{e}"))?);
    if a > c {
        return Err(format!("empty range {a}..{c}"));
    }
    Ok((a, c))
}

fn field(b: u32) -> Result<Field, CliError> {
    Field::new(b).stage("config")
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes()).map_err(io_err("<stdout>"))
        }
    }
}

fn emit_json(out: Option<&Path>, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Core { stage: "write", source: e.into() })?;
    text.push('\n');
    emit(out, &text)
}

fn read_points(path: &Path, b: Option<u32>, m: Option<u32>) -> Result<DigitPointSet, CliError> {
    let b = b.map(field).transpose()?;
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    DigitPointSet::parse(std::io::BufReader::new(file), b, m).stage("read")
}

fn run(cli: Cli, log: &Logger) -> Result<(), CliError> {
    match cli.command {
        Command::Construct { b, n, prec, scan_bound, out } => {
            let f = field(b)?;
            let (c, _) = log.timed("construct", || {
                let c = generator_matrix(f, n, prec).stage("construct")?;
                let fields = json!({ "precision": prec, "det_b_degree": c.det_b_degree });
                Ok::<_, CliError>((c, fields))
            })?;
            let scan = match scan_bound {
                Some(bound) => Some(
                    m_scan(&c.lattice, bound, DEFAULT_SCAN_CAP)
                        .stage("scan")?
                        .with_certificate(admissibility_certificate(b, n)),
                ),
                None => None,
            };
            emit_json(
                out.as_deref(),
                &json!({
                    "lattice": c.lattice,
                    "roots": c.roots,
                    "det_b_degree": c.det_b_degree,
                    "det_b_degree_formula": det_b_degree_formula(b, n),
                    "admissibility": scan,
                }),
            )
        }
        Command::Points { lattice, construct, shrink, depth, prec, format, out } => {
            let format: Format = format.parse().stage("config")?;
            let pc = match (lattice, construct) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
                    let spec: LatticeSpec =
                        serde_json::from_str(&text).map_err(|e| CliError::Core { stage: "read", source: e.into() })?;
                    let sf = ShrinkFactor::parse(spec.b, &shrink).stage("config")?;
                    construct_points(&spec, &sf, depth).stage("points")?
                }
                (None, Some((b, n))) => {
                    let f = field(b)?;
                    let sf = ShrinkFactor::parse(f, &shrink).stage("config")?;
                    build_net(f, n, &sf, depth, prec).stage("points")?.points
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let p = pc.generator.materialize();
            log.emit("points", "done", json!({ "m": p.m, "depth": p.depth, "points": p.len() }));
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(io_err(&path))?;
                    p.emit(format, std::io::BufWriter::new(file)).stage("write")
                }
                None => p.emit(format, std::io::stdout().lock()).stage("write"),
            }
        }
        Command::Verify { points, b, m, t, out } => {
            let p = read_points(&points, b, m)?;
            let (rep, _) = log.timed("verify", || {
                let rep = duality_check(&p).stage("verify")?;
                let fields = json!({ "exact_t": rep.exact_t, "delta": rep.delta });
                Ok::<_, CliError>((rep, fields))
            })?;
            let claim = match t {
                Some(t) => Some(is_net(&p, t).stage("verify")?),
                None => None,
            };
            emit_json(out.as_deref(), &json!({ "report": rep, "claimed_t": t, "claim_holds": claim }))?;
            if !rep.duality_consistent {
                return Err(CliError::Inconsistent {
                    stage: "verify",
                    message: format!("exact_t = {} disagrees with delta = {:?}", rep.exact_t, rep.delta),
                });
            }
            if claim == Some(false) {
                return Err(CliError::Inconsistent {
                    stage: "verify",
                    message: format!("not a ({}, {}, {})-net", t.unwrap_or(0), p.m, p.d),
                });
            }
            Ok(())
        }
        Command::Discrepancy { points, b, cap, t, out } => {
            let p = read_points(&points, b, None)?;
            let (mut r, _) = log.timed("discrepancy", || {
                let r = star_discrepancy_exact(&p, cap).stage("discrepancy")?;
                let fields = json!({ "value": r.value, "points": r.points });
                Ok::<_, CliError>((r, fields))
            })?;
            r.bound = t.map(|t| discrepancy_bound(p.m, t, p.d, p.b.order()));
            emit_json(out.as_deref(), &r)
        }
        Command::Integrate { construct: (b, n), shrink_range: (r1, r2), integrand, out } => {
            let f = field(b)?;
            let which: Integrand = integrand.parse().stage("config")?;
            let (run, _) = log.timed("integrate", || {
                let run = error_decay_experiment(f, n, which, r1..=r2).stage("integrate")?;
                let fields = json!({ "integrand": which.name(), "slope": run.slope });
                Ok::<_, CliError>((run, fields))
            })?;
            emit(out.as_deref(), &run.to_csv())
        }
        Command::Pipeline {
            config,
            b,
            n,
            lattice,
            shrink,
            depth,
            precision,
            out_dir,
            format,
            scan_bound,
            no_verify,
            no_discrepancy,
        } => {
            let base = match &config {
                Some(p) => PipelineConfig::load(p)?,
                None => PipelineConfig::default(),
            };
            let cfg = base.apply(Overrides {
                b,
                n,
                lattice,
                shrink,
                depth,
                precision,
                out_dir,
                format,
                no_verify,
                no_discrepancy,
                scan_bound,
            });
            let out = run_pipeline(&cfg, log)?;
            let r = &out.report.net;
            println!(
                "{}",
                json!({
                    "b": r.b, "d": r.d, "m": r.m, "points": r.points, "exact_t": r.exact_t,
                    "delta": r.delta, "star_discrepancy": r.star_discrepancy,
                    "out_dir": cfg.out_dir.display().to_string(),
                })
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().long_version(policy_text()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let log = Logger { quiet: cli.quiet };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log.emit("config", "warning", json!({ "message": e.to_string() }));
        }
    }
    match run(cli, &log) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            Logger::default().emit(
                e.stage(),
                "error",
                json!({ "code": e.code(), "exit": e.exit_code(), "message": e.to_string() }),
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
