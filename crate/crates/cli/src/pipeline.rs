use std::path::{Path, PathBuf};

use polyfrolov::construction::{
    admissibility_certificate, generator_matrix, predicted_quality, Construction, PredictedQuality,
};
use polyfrolov::lattice::{m_scan, AdmissibilityReport, LatticeSpec, ShrinkFactor, DEFAULT_SCAN_CAP};
use polyfrolov::netanalysis::{duality_check, NetReport};
use polyfrolov::pointgen::{construct_points, working_precision, DigitPointSet, PointConstruction, GUARD_DIGITS};
use polyfrolov::quality::{discrepancy_bound, star_discrepancy_exact, DiscrepancyResult};
use polyfrolov::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::PipelineConfig;
use crate::error::{io_err, CliError, StageExt};
use crate::log::Logger;

/// Doublings of the working precision before giving up.
pub const PRECISION_RETRIES: u32 = 6;

/// The arithmetic defaults, embedded in `--version` and every metadata file.
pub fn precision_policy() -> Value {
    json!({
        "working_precision": "4 * (depth + d) digits, doubled on exhaustion",
        "precision_retries": PRECISION_RETRIES,
        "guard_digits": GUARD_DIGITS,
        "default_depth": "m + guard_digits",
        "exact_division_cap": polyfrolov::algebra::EXACT_DIVISION_CAP,
        "construct_default_precision": 128,
    })
}

pub fn policy_text() -> String {
    format!(
        "{}\nprecision policy: {}",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(&precision_policy()).expect("static json")
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkSummary {
    pub factor: String,
    pub degrees: Vec<i64>,
    pub minimal_degrees: Vec<i64>,
}

/// `report.json`: the net report plus construction-side context.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    #[serde(flatten)]
    pub net: NetReport,
    pub predicted: Option<PredictedQuality>,
    pub admissibility: Option<AdmissibilityReport>,
    pub shrink: ShrinkSummary,
    pub working_precision: i64,
}

#[derive(Serialize)]
#[serde(untagged)]
enum DiscrepancyArtifact {
    Done(DiscrepancyResult),
    Skipped { skipped: String },
}

pub struct PipelineOutput {
    pub report: PipelineReport,
    pub points: DigitPointSet,
    pub artifacts: Vec<PathBuf>,
}

struct Built {
    lattice: LatticeSpec,
    construction: Option<Construction>,
    points: PointConstruction,
    precision: i64,
}

fn load_lattice(path: &Path) -> Result<LatticeSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Core { stage: "construct", source: Error::Json(e) })
}

/// construct → points, doubling the precision when either runs out.
fn build(cfg: &PipelineConfig, shrink: &ShrinkFactor, d: usize, log: &Logger) -> Result<Built, CliError> {
    let field = shrink.polys()[0].field();
    let depth_guess = cfg.depth.unwrap_or(shrink.total_degree().max(0) as usize + GUARD_DIGITS);
    let mut prec = cfg.precision.unwrap_or_else(|| working_precision(depth_guess, d));
    let file_lattice = match &cfg.lattice {
        Some(p) => Some(load_lattice(p)?),
        None => None,
    };
    for attempt in 0..=PRECISION_RETRIES {
        let (lattice, construction) = match &file_lattice {
            Some(l) => (l.clone(), None),
            None => {
                let (c, _) = log.timed("construct", || {
                    let c = generator_matrix(field, cfg.n, prec).stage("construct")?;
                    let fields = json!({
                        "b": cfg.b, "n": cfg.n, "precision": prec, "attempt": attempt,
                        "det_b_degree": c.det_b_degree,
                        "max_root_residual_degree": c.roots.residual_degrees.iter().max(),
                    });
                    Ok::<_, CliError>((c, fields))
                })?;
                (c.lattice.clone(), Some(c))
            }
        };
        let result = log.timed("points", || {
            let pc = construct_points(&lattice, shrink, cfg.depth)?;
            let fields = json!({
                "m": pc.generator.m,
                "depth": pc.generator.depth,
                "precision": prec,
                "lattice_precision": lattice.precision(),
                "lq_precision": pc.lq.precision(),
            });
            Ok::<_, Error>((pc, fields))
        });
        match result {
            Ok((points, _)) => return Ok(Built { lattice, construction, points, precision: prec }),
            Err(e @ (Error::PrecisionExhausted(_) | Error::Singular { .. })) if file_lattice.is_none() => {
                log.emit("points", "retry", json!({ "reason": e.code(), "precision": prec, "next": prec * 2 }));
                prec *= 2;
            }
            Err(e) => return Err(CliError::Core { stage: "points", source: e }),
        }
    }
    Err(CliError::Core {
        stage: "points",
        source: Error::PrecisionExhausted(format!("gave up at precision {prec}")),
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Core { stage: "write", source: Error::Json(e) })?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

fn unix_time() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Runs construct → points → verify → discrepancy and writes every artifact
/// into `cfg.out_dir`.
pub fn run_pipeline(cfg: &PipelineConfig, log: &Logger) -> Result<PipelineOutput, CliError> {
    let started = unix_time();
    let v = cfg.validate()?;
    let d = match (v.d, &cfg.lattice) {
        (Some(d), _) => d,
        (None, Some(p)) => load_lattice(p)?.d,
        (None, None) => unreachable!("validate fixes d without a lattice file"),
    };
    let shrink = match &v.shrink {
        Some(s) if s.len() == d => s.clone(),
        Some(s) => {
            return Err(CliError::Config(format!(
                "shrink factor has {} components, the lattice has dimension {d}",
                s.len()
            )))
        }
        None => ShrinkFactor::uniform(v.field, d, 1),
    };
    log.emit("config", "done", json!({ "b": cfg.b, "d": d, "shrink": shrink.to_string() }));

    let built = build(cfg, &shrink, d, log)?;
    let points = built.points.generator.materialize();

    let admissibility = match cfg.scan_bound {
        Some(bound) => {
            let scanned = log.timed("scan", || {
                let mut r = match m_scan(&built.lattice, bound, DEFAULT_SCAN_CAP) {
                    Err(e @ Error::BudgetExceeded { .. }) => {
                        return Ok((None, json!({ "bound": bound, "skipped": e.to_string() })));
                    }
                    other => other.stage("scan")?,
                };
                if built.construction.is_some() {
                    r = r.with_certificate(admissibility_certificate(cfg.b, cfg.n));
                }
                let fields = json!({ "bound": bound, "m_hat": r.m_hat.to_string(), "scanned": r.scanned.to_string() });
                Ok::<_, CliError>((Some(r), fields))
            })?;
            scanned.0
        }
        None => None,
    };

    let predicted = built.construction.as_ref().map(|_| predicted_quality(v.field, cfg.n, &shrink));
    let mut net = if cfg.verify {
        let (rep, _) = log.timed("verify", || {
            let rep = duality_check(&points).stage("verify")?;
            let fields = json!({
                "exact_t": rep.exact_t, "delta": rep.delta, "consistent": rep.duality_consistent,
            });
            Ok::<_, CliError>((rep, fields))
        })?;
        if !rep.duality_consistent {
            return Err(CliError::Inconsistent {
                stage: "verify",
                message: format!("exact_t = {} but delta = {:?} at m = {}", rep.exact_t, rep.delta, rep.m),
            });
        }
        if let Some(p) = &predicted {
            if rep.exact_t as i64 > p.t_bound {
                return Err(CliError::Inconsistent {
                    stage: "verify",
                    message: format!("exact_t = {} exceeds the bound {}", rep.exact_t, p.t_bound),
                });
            }
        }
        rep
    } else {
        NetReport {
            b: cfg.b,
            d,
            m: points.m,
            points: points.len(),
            exact_t: 0,
            t_bound_predicted: None,
            delta: None,
            dual_depth: 0,
            dual_dimension: 0,
            strength: points.m,
            duality_consistent: false,
            star_discrepancy: None,
            discrepancy_bound: None,
        }
    };
    net.t_bound_predicted = predicted.map(|p| p.t_bound);
    if points.len() as u128 != built.points.generator.num_points() {
        return Err(CliError::Inconsistent { stage: "points", message: "point count mismatch".into() });
    }

    let discrepancy = if cfg.discrepancy {
        let (art, _) = log.timed("discrepancy", || {
            let art = match star_discrepancy_exact(&points, cfg.discrepancy_cap) {
                Ok(r) => DiscrepancyArtifact::Done(r),
                Err(e @ (Error::DimensionTooLarge { .. } | Error::BudgetExceeded { .. })) => {
                    DiscrepancyArtifact::Skipped { skipped: e.to_string() }
                }
                Err(e) => return Err(CliError::Core { stage: "discrepancy", source: e }),
            };
            let fields = match &art {
                DiscrepancyArtifact::Done(r) => json!({ "value": r.value }),
                DiscrepancyArtifact::Skipped { skipped } => json!({ "skipped": skipped }),
            };
            Ok((art, fields))
        })?;
        Some(art)
    } else {
        None
    };
    let bound = cfg.verify.then(|| discrepancy_bound(net.m, net.exact_t, d, cfg.b));
    if let Some(DiscrepancyArtifact::Done(r)) = &discrepancy {
        net.star_discrepancy = Some(r.value);
        net.discrepancy_bound = bound;
    }
    let discrepancy = discrepancy.map(|a| match a {
        DiscrepancyArtifact::Done(mut r) => {
            r.bound = bound;
            DiscrepancyArtifact::Done(r)
        }
        s => s,
    });

    let sc = &built.points.shrink;
    let report = PipelineReport {
        net,
        predicted,
        admissibility,
        shrink: ShrinkSummary {
            factor: shrink.to_string(),
            degrees: sc.degrees.clone(),
            minimal_degrees: sc.minimal_degrees.clone(),
        },
        working_precision: built.precision,
    };

    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut artifacts = Vec::new();
    put(&mut artifacts, dir, "lattice.json", &built.lattice)?;
    if let Some(c) = &built.construction {
        put(
            &mut artifacts,
            dir,
            "roots.json",
            &json!({
                "roots": c.roots,
                "det_b_degree": c.det_b_degree,
                "det_b_degree_formula": polyfrolov::construction::det_b_degree_formula(cfg.b, cfg.n),
            }),
        )?;
    }
    let points_path = dir.join("points.csv");
    std::fs::write(&points_path, points.to_text(v.format)).map_err(io_err(&points_path))?;
    artifacts.push(points_path);
    put(&mut artifacts, dir, "report.json", &report)?;
    if let Some(a) = &discrepancy {
        put(&mut artifacts, dir, "discrepancy.json", a)?;
    }
    let names: Vec<String> = artifacts
        .iter()
        .filter_map(|p| p.file_name().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    let meta = json!({
        "tool": "polyfrolov",
        "version": env!("CARGO_PKG_VERSION"),
        "precision_policy": precision_policy(),
        "config": cfg,
        "threads": polyfrolov::threads(),
        "started_unix": started,
        "finished_unix": unix_time(),
        "artifacts": names,
    });
    put(&mut artifacts, dir, "metadata.json", &meta)?;
    log.emit("pipeline", "done", json!({ "out_dir": dir.display().to_string(), "artifacts": artifacts.len() }));
    Ok(PipelineOutput { report, points, artifacts })
}

fn put(artifacts: &mut Vec<PathBuf>, dir: &Path, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    let path = dir.join(name);
    write_json(&path, value)?;
    artifacts.push(path);
    Ok(())
}
