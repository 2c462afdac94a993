use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use tessera_core::analysis::{HarnessConfig, SearchConfig};
use tessera_core::instances::{random_suite, RandomSpec};
use tessera_core::steiner::{converge_with_cap, DEFAULT_NODE_CAP};
use tessera_core::{
    clip_lengths, construct_lemma_path, fmt_num, grid_dijkstra, per_cell_certificate,
    ratio_harness, ref_shortest_path, render_svg, worst_case_search, GridPath, Instance,
    RatioReport, RefSolution, RenderSpec, SteinerConfig,
};

use crate::{Command, OracleArgs};

pub enum Failure {
    /// Bad input, bad usage or I/O trouble.
    Invalid(anyhow::Error),
    /// A computed result broke a guarantee the library is supposed to uphold.
    Violation(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &str) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn load(path: &str) -> anyhow::Result<Instance> {
    Instance::parse(&read(path)?).with_context(|| format!("parsing {path}"))
}

fn emit(out: Option<&str>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn harness(oracle: OracleArgs, a: f64) -> HarnessConfig {
    HarnessConfig {
        max_level: oracle.level,
        rel_tol: oracle.rel_tol,
        a,
        node_cap: DEFAULT_NODE_CAP,
    }
}

fn csv(reports: &[RatioReport]) -> String {
    let mut s = String::from(RatioReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Reports that break the ratio bound or whose certificates failed.
fn violations(reports: &[RatioReport]) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.bound_ok || !r.cert_ok)
        .map(|r| match &r.error {
            Some(e) => format!("{}: {e}", r.instance),
            None if !r.bound_ok => format!("{}: ratio {} over bound", r.instance, fmt_num(r.ratio)),
            None => format!("{}: per-cell certificate failed", r.instance),
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(bad.join("; ")))
    }
}

fn instance_id(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string())
}

fn manifest(path: &str) -> anyhow::Result<Vec<(String, Instance)>> {
    let base = Path::new(path).parent().unwrap_or(Path::new(""));
    read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|entry| {
            let full = base.join(entry);
            let full = full.to_string_lossy();
            Ok((entry.to_string(), load(&full)?))
        })
        .collect()
}

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::SolveGrid(io) => {
            let inst = load(&io.input)?;
            let gp = grid_dijkstra(&inst.tess, &inst.query)?;
            emit(io.out.as_deref(), &format!("{}\n", gp.to_json()))?;
        }

        Command::SolveRef {
            io,
            oracle,
            fixed,
            breakdown,
        } => {
            let inst = load(&io.input)?;
            let (t, q) = (&inst.tess, &inst.query);
            let sol = if fixed {
                ref_shortest_path(t, q, &SteinerConfig::at_level(oracle.level))?
            } else {
                converge_with_cap(t, q, oracle.level, oracle.rel_tol, DEFAULT_NODE_CAP)?
            };
            emit(io.out.as_deref(), &format!("{}\n", sol.to_json()))?;
            if let Some(path) = breakdown {
                let b = clip_lengths(t, &sol.polyline)?;
                emit(Some(&path), &b.to_csv(t))?;
            }
        }

        Command::LemmaPath {
            io,
            oracle,
            a,
            certificates,
        } => {
            let inst = load(&io.input)?;
            let (t, q) = (&inst.tess, &inst.query);
            let sol = converge_with_cap(t, q, oracle.level, oracle.rel_tol, DEFAULT_NODE_CAP)?;
            let lp = match construct_lemma_path(t, q, &sol.polyline, a) {
                Ok(lp) => lp,
                Err(e @ tessera_core::Error::BridgeNotFound { .. }) => {
                    return Err(Failure::Violation(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            emit(io.out.as_deref(), &format!("{}\n", lp.path.to_json()))?;
            lp.check_conditions().map_err(Failure::Violation)?;
            if let Some(path) = certificates {
                let certs = per_cell_certificate(&lp.path, &lp.breakdown, a);
                let mut s = String::from("x,y,case,path_length,ref_length,ratio,ok\n");
                for (c, cert) in &certs {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        c.x,
                        c.y,
                        cert.case.tag(),
                        fmt_num(cert.path_length),
                        fmt_num(cert.ref_length),
                        fmt_num(cert.ratio),
                        cert.ok
                    ));
                }
                emit(Some(&path), &s)?;
                if let Some((c, _)) = certs.iter().find(|(_, cert)| !cert.ok) {
                    return Err(Failure::Violation(format!(
                        "certificate failed at cell {c}"
                    )));
                }
            }
        }

        Command::Ratio { io, oracle, a } => {
            let inst = load(&io.input)?;
            let reports = ratio_harness(&[(instance_id(&io.input), inst)], &harness(oracle, a));
            emit(io.out.as_deref(), &csv(&reports))?;
            violations(&reports)?;
        }

        Command::Sweep {
            manifest: path,
            random,
            seed,
            out,
            oracle,
            a,
        } => {
            let instances = match (path, random) {
                (Some(p), _) => manifest(&p)?,
                (None, Some(count)) => random_suite(seed, count, &RandomSpec::default()),
                (None, None) => return Err(anyhow!("either --in or --random is required").into()),
            };
            let reports = ratio_harness(&instances, &harness(oracle, a));
            emit(out.as_deref(), &csv(&reports))?;
            violations(&reports)?;
        }

        Command::SearchWorst {
            m,
            n,
            palette,
            budget,
            seed,
            out,
            oracle,
            a,
        } => {
            let outcome = worst_case_search(&SearchConfig {
                m,
                n,
                palette,
                budget,
                seed,
                harness: harness(oracle, a),
            })?;
            emit(out.as_deref(), &outcome.best.to_wrp())?;
            eprintln!(
                "evaluated {} assignments ({}), best ratio {}",
                outcome.evaluated,
                if outcome.exhaustive {
                    "exhaustive"
                } else {
                    "sampled"
                },
                fmt_num(outcome.best_ratio())
            );
            if out.is_some() {
                print!("{}", csv(std::slice::from_ref(&outcome.best_report)));
            }
            if !outcome.violations.is_empty() {
                return Err(Failure::Violation(format!(
                    "{} assignments exceed the ratio bound",
                    outcome.violations.len()
                )));
            }
        }

        Command::Render {
            io,
            grid,
            reference,
            cell_px,
        } => {
            let inst = load(&io.input)?;
            let gp = grid
                .map(|p| {
                    GridPath::from_json(&inst.tess, &read(&p)?)
                        .with_context(|| format!("parsing {p}"))
                })
                .transpose()?;
            let poly = reference
                .map(|p| {
                    RefSolution::polyline_from_json(&read(&p)?)
                        .with_context(|| format!("parsing {p}"))
                })
                .transpose()?;
            let spec = RenderSpec {
                cell_px,
                ..RenderSpec::default()
            };
            emit(
                io.out.as_deref(),
                &render_svg(&inst, gp.as_ref(), poly.as_ref(), &spec),
            )?;
        }
    }
    Ok(())
}
