//! The `itl` command-line front end.
//!
//! Exit codes: 0 when the answer is positive (valid, holds, passes, found),
//! 1 when it is negative, 2 on malformed input or any other error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bisimulation::{
    check_bisimulation, find_distinguishing_formula, greatest_bisimulation, PointRelation, DEFAULT_DISTINGUISH_DEPTH,
};
use crate::formula::{parse, Language};
use crate::gen::{gen_random_model, IndistPolicy};
use crate::morphisms::{
    check_frame_pmorphism, check_model_pmorphism, search_pmorphisms, PointMap, SearchOptions, DEFAULT_SEARCH_POINTS,
};
use crate::semantics::{eval_hist, eval_rel, frame_sat, frame_valid, model_counterexample, model_sat, DEFAULT_MAX_ENUM};
use crate::structures::{Frame, FrameDoc, MapDoc, Model, ModelDoc, PointRef, RelationDoc, Valuation};
use crate::suite::{run_all, validate_value, SuiteConfig};

/// Environment variable overriding the valuation enumeration bound.
pub const MAX_ENUM_VAR: &str = "ITL_MAX_ENUM";

#[derive(Parser, Debug)]
#[command(name = "itl", version, about = "Branching-time logic with indistinguishability")]
struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Hist,
    Rel,
    Both,
}

#[derive(Args, Debug)]
struct ModeArg {
    /// Language: L or LF.
    #[arg(long, default_value = "LF")]
    mode: Language,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a frame or model document.
    Validate { doc: PathBuf },
    /// List the histories of a frame, optionally only those through a moment.
    Histories {
        frame: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// List the points of a frame.
    Points { frame: PathBuf },
    /// Evaluate a formula at a point.
    Eval {
        model: PathBuf,
        #[arg(long)]
        at: PointRef,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "hist")]
        semantics: SemanticsArg,
    },
    /// Satisfiability or validity on a model, or on a frame by valuation enumeration.
    Check {
        doc: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, conflicts_with = "valid", required_unless_present = "valid")]
        sat: bool,
        #[arg(long)]
        valid: bool,
        #[command(flatten)]
        mode: ModeArg,
        /// Largest points x atoms product to enumerate.
        #[arg(long)]
        max_enum: Option<usize>,
    },
    /// Check a point map between frames (or models) against the p-morphism conditions.
    Pmorph {
        src: PathBuf,
        dst: PathBuf,
        map: PathBuf,
        #[command(flatten)]
        mode: ModeArg,
        /// Source and target models, adding the valuation condition.
        #[arg(long, num_args = 2, value_names = ["SRC_MODEL", "DST_MODEL"])]
        model: Option<Vec<PathBuf>>,
    },
    /// Enumerate p-morphisms between two small frames.
    PmorphSearch {
        src: PathBuf,
        dst: PathBuf,
        #[arg(long)]
        surjective: bool,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        mode: ModeArg,
        /// Largest frame (in points) the search accepts.
        #[arg(long, default_value_t = DEFAULT_SEARCH_POINTS)]
        max_points: usize,
    },
    /// Check a relation between two models for being a bisimulation.
    BisimCheck {
        src: PathBuf,
        dst: PathBuf,
        relation: PathBuf,
        #[arg(long, num_args = 2, required = true, value_names = ["SRC_POINT", "DST_POINT"])]
        anchors: Vec<PointRef>,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Print the greatest bisimulation between two models.
    BisimMax {
        src: PathBuf,
        dst: PathBuf,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Search for a formula true at exactly one of two points.
    Distinguish {
        src: PathBuf,
        dst: PathBuf,
        #[arg(long, num_args = 2, required = true, value_names = ["SRC_POINT", "DST_POINT"])]
        anchors: Vec<PointRef>,
        #[arg(long, default_value_t = DEFAULT_DISTINGUISH_DEPTH)]
        max_depth: usize,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Print a random model document.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        moments: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        #[arg(long, default_value = "undividedness")]
        policy: IndistPolicy,
        #[arg(long, default_value_t = 1)]
        atoms: usize,
        /// Print only the frame.
        #[arg(long)]
        frame: bool,
    },
    /// Run the property battery.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Smaller battery for smoke runs.
        #[arg(long)]
        quick: bool,
    },
}

/// Runs `itl` with the given arguments (including the program name) and
/// returns the exit code. Reports go to `out`, diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn read_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn read_doc<D: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<D> {
    serde_json::from_value(read_json(path)?).with_context(|| format!("{} is not a well-formed document", path.display()))
}

fn load_frame(path: &Path) -> anyhow::Result<Frame> {
    let doc: FrameDoc = read_doc(path)?;
    Frame::from_doc(&doc).with_context(|| format!("{} is not a valid frame", path.display()))
}

fn load_model(path: &Path) -> anyhow::Result<Model> {
    let doc: ModelDoc = read_doc(path)?;
    Model::from_doc(&doc).with_context(|| format!("{} is not a valid model", path.display()))
}

fn max_enum(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(MAX_ENUM_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_ENUM_VAR} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_MAX_ENUM),
    }
}

fn emit(out: &mut dyn Write, json: bool, value: serde_json::Value, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        let text = text();
        write!(out, "{text}")?;
        if !text.ends_with('\n') {
            writeln!(out)?;
        }
    }
    Ok(())
}

fn code(positive: bool) -> i32 {
    if positive {
        0
    } else {
        1
    }
}

fn valuation_json(frame: &Frame, v: &Valuation) -> serde_json::Value {
    v.iter()
        .map(|(a, pts)| {
            let pts: Vec<String> = pts.iter().map(|&p| frame.point_ref(p).to_string()).collect();
            (a.clone(), json!(pts))
        })
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn valuation_text(frame: &Frame, v: &Valuation) -> String {
    v.iter()
        .map(|(a, pts)| {
            let pts: Vec<String> = pts.iter().map(|&p| frame.point_ref(p).to_string()).collect();
            format!("{a}={{{}}}", pts.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The report printed by `itl eval`, with its exit code.
pub fn eval_report(
    model: &Model,
    at: &PointRef,
    formula: &str,
    lang: Language,
    semantics: SemanticsArg,
    json: bool,
) -> crate::Result<(i32, String)> {
    let f = parse(formula, lang)?;
    let p = model.frame.resolve(at)?;
    let mut results = Vec::new();
    if semantics != SemanticsArg::Rel {
        results.push(("hist", eval_hist(model, p, &f, lang)?));
    }
    if semantics != SemanticsArg::Hist {
        results.push(("rel", eval_rel(model, p, &f, lang)?));
    }
    let all = results.iter().all(|(_, v)| *v);
    let text = if json {
        let mut obj = json!({ "point": model.frame.point_ref(p).to_string(), "formula": f.to_string(), "mode": lang.to_string() });
        for (name, v) in &results {
            obj[*name] = json!(v);
        }
        format!("{}\n", serde_json::to_string_pretty(&obj).expect("plain JSON"))
    } else {
        results.iter().map(|(name, v)| format!("{name}: {v}\n")).collect()
    };
    Ok((code(all), text))
}

fn anchors(src: &Frame, dst: &Frame, refs: &[PointRef]) -> anyhow::Result<(crate::PointId, crate::PointId)> {
    match refs {
        [a, b] => Ok((src.resolve(a)?, dst.resolve(b)?)),
        _ => bail!("--anchors takes exactly two points"),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Validate { doc } => {
            let value = read_json(doc)?;
            let report = validate_value(&value).with_context(|| format!("{} is not a well-formed document", doc.display()))?;
            emit(out, json, report.to_json(), || report.to_string())?;
            Ok(code(report.is_ok()))
        }
        Command::Histories { frame, at } => {
            let frame = load_frame(frame)?;
            let hs = match at {
                Some(t) => frame.histories_through(t)?,
                None => frame.tree().histories().iter().collect(),
            };
            let tree = frame.tree();
            let rows: Vec<(String, Vec<&str>)> = hs
                .iter()
                .map(|h| (tree.name(h.leaf).to_owned(), h.moments.iter().map(|&m| tree.name(m)).collect()))
                .collect();
            let value = json!({
                "histories": rows.iter().map(|(leaf, ms)| json!({ "leaf": leaf, "moments": ms })).collect::<Vec<_>>()
            });
            emit(out, json, value, || {
                rows.iter().map(|(leaf, ms)| format!("{leaf}: {}\n", ms.join(" < "))).collect()
            })?;
            Ok(0)
        }
        Command::Points { frame } => {
            let frame = load_frame(frame)?;
            let tree = frame.tree();
            let value = json!({
                "points": frame.points().map(|p| json!({
                    "point": frame.point_ref(p).to_string(),
                    "moment": tree.name(frame.moment_of(p)),
                    "class": frame.class_histories(p).map(|h| tree.leaf_name(h)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>()
            });
            emit(out, json, value, || {
                frame.points().map(|p| format!("{}\n", frame.describe_point(p))).collect()
            })?;
            Ok(0)
        }
        Command::Eval {
            model,
            at,
            formula,
            mode,
            semantics,
        } => {
            let model = load_model(model)?;
            let (code, text) = eval_report(&model, at, formula, mode.mode, *semantics, json)?;
            write!(out, "{text}")?;
            Ok(code)
        }
        Command::Check {
            doc,
            formula,
            sat,
            valid: _,
            mode,
            max_enum: bound,
        } => {
            let lang = mode.mode;
            let f = parse(formula, lang)?;
            let value = read_json(doc)?;
            let task = if *sat { "sat" } else { "valid" };
            if value.get("valuation").is_some() {
                let model = load_model(doc)?;
                let frame = &model.frame;
                let witness = if *sat {
                    model_sat(&model, &f, lang)?
                } else {
                    model_counterexample(&model, &f, lang)?
                };
                let positive = witness.is_some() == *sat;
                let point = witness.map(|p| frame.point_ref(p).to_string());
                let v = json!({ "formula": f.to_string(), "mode": lang.to_string(), "check": task, "result": positive, "point": point });
                emit(out, json, v, || match (&point, *sat) {
                    (Some(p), true) => format!("satisfiable at {p}"),
                    (None, true) => "unsatisfiable".to_owned(),
                    (Some(p), false) => format!("not valid: fails at {p}"),
                    (None, false) => "valid".to_owned(),
                })?;
                Ok(code(positive))
            } else {
                let frame = load_frame(doc)?;
                let bound = max_enum(*bound)?;
                let witness = if *sat {
                    frame_sat(&frame, &f, lang, bound)?
                } else {
                    frame_valid(&frame, &f, lang, bound)?.counterexample
                };
                let positive = witness.is_some() == *sat;
                let w = witness.as_ref().map(|w| {
                    json!({ "point": frame.point_ref(w.point).to_string(), "valuation": valuation_json(&frame, &w.valuation) })
                });
                let v = json!({ "formula": f.to_string(), "mode": lang.to_string(), "check": task, "result": positive, "witness": w });
                emit(out, json, v, || match (&witness, *sat) {
                    (Some(w), true) => format!(
                        "satisfiable at {} under {}",
                        frame.point_ref(w.point),
                        valuation_text(&frame, &w.valuation)
                    ),
                    (None, true) => "unsatisfiable on this frame".to_owned(),
                    (Some(w), false) => format!(
                        "not valid: fails at {} under {}",
                        frame.point_ref(w.point),
                        valuation_text(&frame, &w.valuation)
                    ),
                    (None, false) => "valid on this frame".to_owned(),
                })?;
                Ok(code(positive))
            }
        }
        Command::Pmorph { src, dst, map, mode, model } => {
            let (sf, df) = (load_frame(src)?, load_frame(dst)?);
            let doc: MapDoc = read_doc(map)?;
            let map = PointMap::from_doc(&sf, &df, &doc)?;
            let report = match model {
                Some(paths) => {
                    let (sm, dm) = (load_model(&paths[0])?, load_model(&paths[1])?);
                    if sm.frame.to_doc() != sf.to_doc() || dm.frame.to_doc() != df.to_doc() {
                        bail!("--model documents must have the same frames as the frame arguments");
                    }
                    check_model_pmorphism(&sm, &dm, &map, mode.mode)?
                }
                None => check_frame_pmorphism(&sf, &df, &map, mode.mode)?,
            };
            emit(out, json, report.to_json(&sf, &df), || report.render(&sf, &df))?;
            Ok(code(report.passed()))
        }
        Command::PmorphSearch {
            src,
            dst,
            surjective,
            limit,
            mode,
            max_points,
        } => {
            let (sf, df) = (load_frame(src)?, load_frame(dst)?);
            let opts = SearchOptions {
                surjective: *surjective,
                max_points: *max_points,
                limit: *limit,
            };
            let maps = search_pmorphisms(&sf, &df, mode.mode, &opts)?;
            let docs: Vec<MapDoc> = maps.iter().map(|m| m.to_doc(&sf, &df)).collect();
            emit(out, json, json!({ "count": maps.len(), "maps": docs }), || {
                let mut s = format!("{} p-morphism(s)\n", maps.len());
                for m in &maps {
                    let pairs: Vec<String> = sf
                        .points()
                        .map(|p| format!("{} -> {}", sf.point_ref(p), df.point_ref(m.apply(p))))
                        .collect();
                    s.push_str(&format!("{}\n", pairs.join(", ")));
                }
                s
            })?;
            Ok(code(!maps.is_empty()))
        }
        Command::BisimCheck {
            src,
            dst,
            relation,
            anchors: refs,
            mode,
        } => {
            let (sm, dm) = (load_model(src)?, load_model(dst)?);
            let doc: RelationDoc = read_doc(relation)?;
            let rel = PointRelation::from_doc(&sm.frame, &dm.frame, &doc)?;
            let anchor = anchors(&sm.frame, &dm.frame, refs)?;
            let report = check_bisimulation(&sm, &dm, &rel, anchor, mode.mode)?;
            emit(out, json, report.to_json(&sm.frame, &dm.frame), || report.render(&sm.frame, &dm.frame))?;
            Ok(code(report.passed()))
        }
        Command::BisimMax { src, dst, mode } => {
            let (sm, dm) = (load_model(src)?, load_model(dst)?);
            let rel = greatest_bisimulation(&sm, &dm, mode.mode);
            let doc = rel.to_doc(&sm.frame, &dm.frame);
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
            Ok(0)
        }
        Command::Distinguish {
            src,
            dst,
            anchors: refs,
            max_depth,
            mode,
        } => {
            let (sm, dm) = (load_model(src)?, load_model(dst)?);
            let (p, q) = anchors(&sm.frame, &dm.frame, refs)?;
            let found = find_distinguishing_formula(&sm, p, &dm, q, mode.mode, *max_depth)?;
            let text = found.as_ref().map(|f| f.to_string());
            let value = json!({ "formula": text, "max_depth": max_depth, "mode": mode.mode.to_string() });
            emit(out, json, value, || match &text {
                Some(f) => f.clone(),
                None => format!("indistinguishable up to depth {max_depth}"),
            })?;
            Ok(code(found.is_some()))
        }
        Command::Gen {
            seed,
            moments,
            branching,
            policy,
            atoms,
            frame,
        } => {
            if *moments == 0 {
                bail!("--moments must be at least 1");
            }
            let model = gen_random_model(*seed, *moments, *branching, *policy, *atoms);
            let text = if *frame {
                serde_json::to_string_pretty(&model.frame.to_doc())?
            } else {
                serde_json::to_string_pretty(&model.to_doc())?
            };
            writeln!(out, "{text}")?;
            Ok(0)
        }
        Command::Suite { seed, quick } => {
            let cfg = SuiteConfig {
                seed: *seed,
                quick: *quick,
            };
            let outcomes = run_all(&cfg);
            let all = outcomes.iter().all(|o| o.passed());
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            let value = json!({
                "seed": seed,
                "quick": quick,
                "pass": all,
                "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
            });
            emit(out, json, value, || {
                let mut s: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
                s.push_str(&format!("{passed}/{} properties passed (seed {seed})\n", outcomes.len()));
                s
            })?;
            Ok(code(all))
        }
    }
}
