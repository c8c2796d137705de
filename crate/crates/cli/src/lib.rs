//! `vecopt`: command-line access to the vecopt-core analyses.
//!
//! Every command prints one JSON document `{command, seed, report}` with
//! sorted keys, or CSV where supported. Exit codes: 0 success, 1 failed
//! catalog check, 2 bad input, 3 inconclusive result.

mod budget;
pub mod catalog;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use budget::{Budget, Kind};
use vecopt_core::catalog as bundled;
use vecopt_core::newton::{check_khovanskii, faces_at_infinity, is_convenient, KhovanskiiBudget, MAX_FACE_DIM};
use vecopt_core::pareto::{
    auto_tbar, candidate_pareto_values, existence_verdict, find_pareto_points, CandidateConfig, CriticalBudget,
    ExistenceConfig, ExistenceVerdict, ParetoBudget,
};
use vecopt_core::poly::{parse_floats, PolyMap, ProblemFile};
use vecopt_core::rabier::{rabier_nu, RabierError};
use vecopt_core::sublevel::{
    probe_bounded_section, probe_palais_smale, probe_properness, PropernessBudget, PsBudget, SectionBudget,
    SectionVerdict,
};
use vecopt_core::tangency::{estimate_tangency_values, geometric_radii, trace_csv, TangencyConfig};

#[derive(Parser, Debug)]
#[command(name = "vecopt", version, about = "Existence analysis for polynomial vector optimization")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Problem file, or the name of a bundled example.
    #[arg(long, global = true)]
    map: Option<String>,
    /// Point, comma-separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    at: Option<String>,
    /// Sublevel bound; overrides the file's `tbar:` line.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tbar: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Radius schedule `R0,factor,steps`.
    #[arg(long, global = true)]
    radii: Option<String>,
    /// Budget override `key=value`; repeatable.
    #[arg(long = "budget", global = true)]
    budget: Vec<String>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Evaluate the map at `--at`.
    Eval,
    /// Rabier function at `--at`.
    Rabier,
    /// Estimate asymptotic tangency values.
    Tangency,
    /// Bounded-section, properness and Palais–Smale probes at `t̄`.
    Sublevel,
    /// Newton polyhedra, convenience and non-degeneracy at infinity.
    Newton,
    /// Candidate values and verified Pareto points below `t̄`.
    Pareto,
    /// Existence verdict for a Pareto point below `t̄`.
    Existence,
    /// Run every bundled example against its expectation.
    Catalog {
        /// Print bundled example names and exit.
        #[arg(long)]
        list: bool,
        /// Write the bundled problem files into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Rabier => "rabier",
            Command::Tangency => "tangency",
            Command::Sublevel => "sublevel",
            Command::Newton => "newton",
            Command::Pareto => "pareto",
            Command::Existence => "existence",
            Command::Catalog { .. } => "catalog",
        }
    }
}

/// Bad user input; exits with 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(InputError(msg.into()).into())
}

struct Outcome {
    report: Value,
    csv: Option<String>,
    code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(report: &T) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            csv: None,
            code: 0,
        })
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return input("--threads must be positive");
        }
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if let Command::Catalog { list, export } = &cli.command {
        if *list {
            let names: Vec<String> = bundled::ENTRIES.iter().map(|e| e.name.to_string()).collect();
            emit(cli, &format!("{}\n", names.join("\n")))?;
            return Ok(0);
        }
        if let Some(dir) = export {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for e in bundled::ENTRIES {
                fs::write(dir.join(e.file_name()), e.text)?;
            }
            return Ok(0);
        }
    }
    let outcome = dispatch(cli)?;
    let text = match cli.format {
        Format::Json => {
            let doc = json!({
                "command": cli.command.name(),
                "seed": cli.seed,
                "report": outcome.report,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        Format::Csv => match outcome.csv {
            Some(c) => c,
            None => return input(format!("--format csv is not supported by '{}'", cli.command.name())),
        },
    };
    emit(cli, &text)?;
    Ok(outcome.code)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn load_problem(cli: &Cli) -> Result<ProblemFile> {
    let Some(source) = &cli.map else {
        return input("--map is required");
    };
    let path = PathBuf::from(source);
    let (text, label) = if path.exists() {
        let t = fs::read_to_string(&path).with_context(|| format!("reading {source}"))?;
        (t, source.clone())
    } else if let Some(e) = bundled::get(source) {
        (e.text.to_string(), e.file_name())
    } else {
        return input(format!("{source}: no such file or bundled example"));
    };
    match ProblemFile::parse(&text) {
        Ok(p) => Ok(p),
        Err(e) => input(format!("{label}: {e}")),
    }
}

fn floats(flag: &str, text: &str, len: usize) -> Result<Vec<f64>> {
    let v = match parse_floats(text) {
        Ok(v) => v,
        Err(e) => return input(format!("--{flag}: {e}")),
    };
    if v.len() != len {
        return input(format!("--{flag} has {} entries, expected {len}", v.len()));
    }
    Ok(v)
}

fn point(cli: &Cli, f: &PolyMap) -> Result<Vec<f64>> {
    match &cli.at {
        Some(s) => floats("at", s, f.nvars()),
        None => input("--at is required"),
    }
}

fn tbar(cli: &Cli, p: &ProblemFile) -> Result<Option<Vec<f64>>> {
    match &cli.tbar {
        Some(s) => floats("tbar", s, p.map.ncomponents()).map(Some),
        None => Ok(p.tbar.clone()),
    }
}

fn radii(cli: &Cli) -> Result<Option<Vec<f64>>> {
    let Some(s) = &cli.radii else { return Ok(None) };
    let v = match parse_floats(s) {
        Ok(v) => v,
        Err(e) => return input(format!("--radii: {e}")),
    };
    match v.as_slice() {
        [r0, factor, steps] if *r0 > 0.0 && *factor > 1.0 && steps.fract() == 0.0 && *steps >= 3.0 => {
            Ok(Some(geometric_radii(*r0, *factor, *steps as usize)))
        }
        _ => input("--radii must be R0,factor,steps with R0 > 0, factor > 1 and integer steps >= 3"),
    }
}

fn budget(cli: &Cli, p: &ProblemFile, allowed: &[(&str, Kind)]) -> Result<Budget> {
    Budget::new(&p.budget, &cli.budget, allowed).map_err(|e| InputError(e.to_string()).into())
}

fn csv_rows<'a>(head: &[String], rows: impl Iterator<Item = Vec<f64>> + 'a) -> String {
    let mut out = head.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn names(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (1..=k).map(move |i| format!("{prefix}_{i}"))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    if let Command::Catalog { .. } = cli.command {
        let report = catalog::run_catalog(cli.seed);
        let code = if report.passed { 0 } else { 1 };
        let csv = csv_rows(
            &["id".into(), "passed".into()],
            report.checks.iter().map(|c| vec![c.id as f64, c.passed as u8 as f64]),
        );
        return Ok(Outcome {
            report: serde_json::to_value(&report)?,
            csv: Some(csv),
            code,
        });
    }
    let problem = load_problem(cli)?;
    let f = &problem.map;
    let (n, m) = (f.nvars(), f.ncomponents());
    match &cli.command {
        Command::Eval => {
            budget(cli, &problem, &[])?;
            let x = point(cli, f)?;
            let v = f.evaluate(&x);
            let mut o = Outcome::ok(&json!({ "at": x, "value": v }))?;
            let head: Vec<String> = names("x", n).chain(names("f", m)).collect();
            o.csv = Some(csv_rows(&head, std::iter::once([x, v].concat())));
            Ok(o)
        }
        Command::Rabier => {
            budget(cli, &problem, &[])?;
            let x = point(cli, f)?;
            let (r, code) = match rabier_nu(f, &x) {
                Ok(r) => (r, 0),
                Err(RabierError::BudgetExceeded(r)) => (*r, 3),
                Err(e) => return input(e.to_string()),
            };
            let mut report = serde_json::to_value(&r)?;
            report["at"] = json!(x);
            let head: Vec<String> = names("x", n)
                .chain(std::iter::once("nu".to_string()))
                .chain(names("lambda", m))
                .collect();
            let row = [x, vec![r.value], r.weights.clone()].concat();
            Ok(Outcome {
                report,
                csv: Some(csv_rows(&head, std::iter::once(row))),
                code,
            })
        }
        Command::Tangency => {
            let b = budget(
                cli,
                &problem,
                &[("n_seeds", Kind::Count), ("n_weights", Kind::Count), ("cluster_tol", Kind::Positive)],
            )?;
            let mut cfg = TangencyConfig::for_map(f);
            cfg.n_seeds = b.count("n_seeds", cfg.n_seeds);
            cfg.n_weights = b.count("n_weights", cfg.n_weights);
            cfg.cluster_tol = b.real("cluster_tol", cfg.cluster_tol);
            cfg.sublevel = tbar(cli, &problem)?;
            cfg.seed = cli.seed;
            if let Some(r) = radii(cli)? {
                cfg.radii = r;
            }
            let est = estimate_tangency_values(f, &cfg);
            let mut csv = String::new();
            for (k, t) in est.traces.iter().enumerate() {
                let body = trace_csv(t);
                let mut lines = body.lines();
                if let Some(h) = lines.next() {
                    if k == 0 {
                        csv.push_str(&format!("trace,{h}\n"));
                    }
                }
                for l in lines {
                    csv.push_str(&format!("{k},{l}\n"));
                }
            }
            let mut o = Outcome::ok(&json!({ "config": cfg, "estimate": est }))?;
            o.csv = Some(csv);
            Ok(o)
        }
        Command::Sublevel => {
            let b = budget(
                cli,
                &problem,
                &[
                    ("n_starts", Kind::Count),
                    ("r_max", Kind::Positive),
                    ("iter_cap", Kind::Count),
                    ("n_targets", Kind::Count),
                    ("ps_seeds", Kind::Count),
                    ("ps_weights", Kind::Count),
                ],
            )?;
            let Some(t) = tbar(cli, &problem)? else {
                return input("sublevel needs --tbar or a 'tbar:' line");
            };
            let d = SectionBudget::default();
            let sb = SectionBudget {
                n_starts: b.count("n_starts", d.n_starts),
                r_max: b.real("r_max", d.r_max),
                iter_cap: b.count("iter_cap", d.iter_cap),
                seed: cli.seed,
                ..d
            };
            let r = radii(cli)?;
            let d = PropernessBudget::default();
            let pb = PropernessBudget {
                n_targets: b.count("n_targets", d.n_targets),
                radii: r.clone().unwrap_or(d.radii),
                seed: cli.seed,
                ..d
            };
            let d = PsBudget::default();
            let psb = PsBudget {
                n_seeds: b.count("ps_seeds", d.n_seeds),
                n_weights: b.count("ps_weights", d.n_weights),
                radii: r.unwrap_or(d.radii),
                seed: cli.seed,
            };
            let section = probe_bounded_section(f, &t, &sb);
            let code = if section.verdict == SectionVerdict::Inconclusive { 3 } else { 0 };
            let report = json!({
                "tbar": t,
                "section": section,
                "properness": probe_properness(f, &t, &pb),
                "palais_smale": probe_palais_smale(f, &t, &psb),
            });
            Ok(Outcome {
                report,
                csv: None,
                code,
            })
        }
        Command::Newton => {
            let b = budget(
                cli,
                &problem,
                &[("n_starts", Kind::Count), ("root_tol", Kind::Positive), ("rank_tol", Kind::Positive)],
            )?;
            if n > MAX_FACE_DIM {
                return input(format!("newton supports at most {MAX_FACE_DIM} variables, map has {n}"));
            }
            let cx = faces_at_infinity(f).map_err(|e| InputError(e.to_string()))?;
            let kb = KhovanskiiBudget {
                n_starts: b.count("n_starts", 64),
                root_tol: b.opt_real("root_tol"),
                rank_tol: b.opt_real("rank_tol"),
                seed: cli.seed,
            };
            let kh = check_khovanskii(f, &cx.faces, &kb);
            Outcome::ok(&json!({
                "polytopes": cx.components,
                "sum": cx.sum,
                "faces": cx.faces.len(),
                "convenience": is_convenient(f),
                "khovanskii": kh,
            }))
        }
        Command::Pareto => {
            let b = budget(
                cli,
                &problem,
                &[
                    ("n_weights", Kind::Count),
                    ("n_levels", Kind::Count),
                    ("n_starts", Kind::Count),
                    ("box_radius", Kind::Positive),
                    ("verify_samples", Kind::Count),
                    ("critical_starts", Kind::Count),
                    ("tangency_seeds", Kind::Count),
                    ("tangency_weights", Kind::Count),
                ],
            )?;
            let d = ParetoBudget::default();
            let pb = ParetoBudget {
                n_weights: b.count("n_weights", d.n_weights),
                n_levels: b.count("n_levels", d.n_levels),
                n_starts: b.count("n_starts", d.n_starts),
                box_radius: b.real("box_radius", d.box_radius),
                verify_samples: b.count("verify_samples", d.verify_samples),
                seed: cli.seed,
            };
            let mut cc = CandidateConfig::for_map(f, cli.seed);
            cc.critical = CriticalBudget {
                n_starts: b.count("critical_starts", cc.critical.n_starts),
                box_radius: pb.box_radius,
            };
            cc.tangency.n_seeds = b.count("tangency_seeds", cc.tangency.n_seeds);
            cc.tangency.n_weights = b.count("tangency_weights", cc.tangency.n_weights);
            if let Some(r) = radii(cli)? {
                cc.tangency.radii = r;
            }
            let (t, source) = match tbar(cli, &problem)? {
                Some(t) => (t, "given"),
                None => (auto_tbar(f, 100, pb.box_radius, cli.seed), "image_sample"),
            };
            let cand = candidate_pareto_values(f, &cc);
            let search = find_pareto_points(f, &t, &pb);
            let head: Vec<String> = names("x", n)
                .chain(names("f", m))
                .chain(std::iter::once("verified".to_string()))
                .collect();
            let csv = csv_rows(
                &head,
                search.points.iter().map(|p| {
                    let verified = (p.kind == vecopt_core::pareto::PointKind::ParetoVerifiedLocal) as u8 as f64;
                    [p.x.clone(), p.value.clone(), vec![verified]].concat()
                }),
            );
            let mut o = Outcome::ok(&json!({
                "tbar": t,
                "tbar_source": source,
                "candidates": cand,
                "search": search,
            }))?;
            o.csv = Some(csv);
            Ok(o)
        }
        Command::Existence => {
            let b = budget(
                cli,
                &problem,
                &[
                    ("box_radius", Kind::Positive),
                    ("tbar_samples", Kind::Count),
                    ("n_starts", Kind::Count),
                    ("n_weights", Kind::Count),
                    ("verify_samples", Kind::Count),
                ],
            )?;
            let mut cfg = ExistenceConfig::for_map(f, cli.seed);
            cfg.box_radius = b.real("box_radius", cfg.box_radius);
            cfg.tbar_samples = b.count("tbar_samples", cfg.tbar_samples);
            cfg.pareto.box_radius = cfg.box_radius;
            cfg.pareto.n_starts = b.count("n_starts", cfg.pareto.n_starts);
            cfg.pareto.n_weights = b.count("n_weights", cfg.pareto.n_weights);
            cfg.pareto.verify_samples = b.count("verify_samples", cfg.pareto.verify_samples);
            if let Some(r) = radii(cli)? {
                cfg.properness.radii = r.clone();
                cfg.ps.radii = r.clone();
                cfg.tangency.radii = r;
            }
            let t = tbar(cli, &problem)?;
            let report = existence_verdict(f, t.as_deref(), &cfg);
            let code = if report.verdict == ExistenceVerdict::NoConclusion { 3 } else { 0 };
            Ok(Outcome {
                report: serde_json::to_value(&report)?,
                csv: None,
                code,
            })
        }
        Command::Catalog { .. } => Err(anyhow!("handled above")),
    }
}
