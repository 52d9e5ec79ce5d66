//! The property battery behind `itl suite` and the acceptance tests.
//!
//! Every check is deterministic in the seed. `quick` shrinks the battery
//! for smoke runs; the full battery is what acceptance is judged on.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;

use crate::bisimulation::{
    check_bisimulation, find_distinguishing_formula, greatest_bisimulation, replay_bisim_failure, PointRelation,
};
use crate::corpus::Corpus;
use crate::formula::{parse, random_formula_with, Formula, Language};
use crate::gen::{all_valuations, frame_catalogue, gen_random_model, IndistPolicy};
use crate::morphisms::{
    check_frame_pmorphism, check_model_pmorphism, check_set_characterization, pullback_valuation, replay_witness,
    search_pmorphisms, Condition, PointMap, SearchOptions,
};
use crate::par;
use crate::semantics::{eval_hist, eval_rel};
use crate::structures::{validate_frame, validate_model, Frame, FrameDoc, Model, ModelDoc, PointId, Valuation};

pub const F1_MODEL: &str = include_str!("../data/f1.model.json");
pub const MALFORMED: &str = include_str!("../data/malformed.json");

const CORPUS_ATOMS: [&str; 2] = ["p", "q"];
const CORPUS_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, quick: false }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub detail: String,
    pub first_failure: Option<String>,
}

impl CriterionOutcome {
    fn new(id: usize, name: &'static str) -> Self {
        CriterionOutcome {
            id,
            name,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(describe);
        }
    }

    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    fn absorb(&mut self, other: CriterionOutcome) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.passed(),
            "checked": self.checked,
            "failures": self.failures,
            "detail": self.detail,
            "first_failure": self.first_failure,
        })
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} checked, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        if let Some(first) = &self.first_failure {
            write!(f, "\n       first failure: {first}")?;
        }
        Ok(())
    }
}

fn rng(cfg: &SuiteConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

/// Per-point truth columns over the whole corpus.
fn columns(ext: &[u128], n: usize) -> Vec<FixedBitSet> {
    let mut cols = vec![FixedBitSet::with_capacity(ext.len()); n];
    for (i, m) in ext.iter().enumerate() {
        for (x, col) in cols.iter_mut().enumerate() {
            if m >> x & 1 == 1 {
                col.insert(i);
            }
        }
    }
    cols
}

fn corpus_columns(corpus: &Corpus, model: &Model) -> Vec<FixedBitSet> {
    let ext = corpus
        .evaluate_model::<u128>(model)
        .expect("battery models have at most 128 points");
    columns(&ext, model.frame.num_points())
}

fn first_difference(corpus: &Corpus, a: &FixedBitSet, b: &FixedBitSet) -> String {
    match a.symmetric_difference(b).next() {
        Some(i) => corpus.formula(i).to_string(),
        None => "none".to_owned(),
    }
}

fn random_valuation(rng: &mut ChaCha8Rng, frame: &Frame, atoms: &[&str]) -> Valuation {
    atoms
        .iter()
        .map(|a| (a.to_string(), frame.points().filter(|_| rng.gen_bool(0.5)).collect()))
        .collect()
}

/// Seeded random models with at most `max_points` points.
pub fn battery_models(cfg: &SuiteConfig, count: usize, max_points: usize) -> Vec<Model> {
    let mut r = rng(cfg, 1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let policy = if r.gen_bool(0.5) {
            IndistPolicy::Coarsened
        } else {
            IndistPolicy::Undividedness
        };
        let m = gen_random_model(r.gen(), r.gen_range(1..=max_points), r.gen_range(1..=3), policy, 2);
        if m.frame.num_points() <= max_points {
            out.push(m);
        }
    }
    out
}

fn battery_formulas(cfg: &SuiteConfig, count: usize, depth: usize, lang: Language) -> Vec<Formula> {
    let mut r = rng(cfg, 2);
    (0..count)
        .map(|_| random_formula_with(&mut r, depth, &CORPUS_ATOMS, lang))
        .collect()
}

pub fn semantics_equivalence(cfg: &SuiteConfig) -> CriterionOutcome {
    let (n_models, n_formulas) = if cfg.quick { (20, 100) } else { (200, 1000) };
    let mut out = CriterionOutcome::new(1, "history and relational semantics agree");
    let models = battery_models(cfg, n_models, 8);
    let formulas = battery_formulas(cfg, n_formulas, 4, Language::L);
    let parts = par::map(&models, |m| {
        let mut o = CriterionOutcome::default();
        for f in &formulas {
            for p in m.frame.points() {
                let h = eval_hist(m, p, f, Language::L).expect("battery formula");
                let r = eval_rel(m, p, f, Language::L).expect("battery formula");
                o.check(h == r, || format!("{f} at {}: hist {h}, rel {r}", m.frame.point_ref(p)));
            }
        }
        o
    });
    parts.into_iter().for_each(|p| out.absorb(p));
    out.detail = format!("{n_models} models, {n_formulas} formulas of depth <= 4");
    out
}

/// `g φ` read directly: some history of the class keeps φ at every later moment.
fn weak_always_direct(m: &Model, p: PointId, phi: &Formula) -> bool {
    let frame = &m.frame;
    let tree = frame.tree();
    let t = frame.moment_of(p);
    frame.class_histories(p).any(|h| {
        tree.history(h)
            .moments
            .iter()
            .filter(|&&s| tree.less(t, s))
            .all(|&s| eval_hist(m, frame.point_of(s, h).unwrap(), phi, Language::LF).unwrap())
    })
}

pub fn abbreviations(cfg: &SuiteConfig) -> CriterionOutcome {
    let (n_models, n_formulas) = if cfg.quick { (20, 50) } else { (200, 250) };
    let mut out = CriterionOutcome::new(2, "derived operators agree with their expansions");
    let models = battery_models(cfg, n_models, 8);
    let formulas = battery_formulas(cfg, n_formulas, 3, Language::LF);
    let forms: [(&str, &str); 4] = [("P", "~H~"), ("f", "~G~"), ("M", "~L~"), ("g", "~F~")];
    let parts = par::map(&models, |m| {
        let mut o = CriterionOutcome::default();
        let frame = &m.frame;
        for phi in &formulas {
            for (op, expansion) in forms {
                let surface = parse(&format!("{op} ({phi})"), Language::LF).expect("surface form parses");
                let expanded = parse(&format!("{expansion}({phi})"), Language::LF).expect("expansion parses");
                for p in frame.points() {
                    let s = eval_hist(m, p, &surface, Language::LF).unwrap();
                    let e = eval_hist(m, p, &expanded, Language::LF).unwrap();
                    let holds = |q: PointId| eval_hist(m, q, phi, Language::LF).unwrap();
                    let direct = match op {
                        "P" => frame.points().any(|q| frame.precedes(q, p) && holds(q)),
                        "f" => frame.points().any(|q| frame.precedes(p, q) && holds(q)),
                        "M" => frame.points().any(|q| frame.same_moment(p, q) && holds(q)),
                        _ => weak_always_direct(m, p, phi),
                    };
                    let at = frame.point_ref(p);
                    o.check(s == e && s == direct, || {
                        format!("{op} ({phi}) at {at}: surface {s}, expansion {e}, direct {direct}")
                    });
                }
            }
        }
        o
    });
    parts.into_iter().for_each(|p| out.absorb(p));
    out.detail = format!("{n_models} models, {n_formulas} formulas, P f M g");
    out
}

pub fn f1_model() -> Model {
    let doc: ModelDoc = serde_json::from_str(F1_MODEL).expect("bundled F1 document");
    Model::from_doc(&doc).expect("bundled F1 model is valid")
}

pub fn future_separation(_cfg: &SuiteConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(3, "f p holds and F p fails at the F1 root");
    let m = f1_model();
    let at = "r/a".parse().unwrap();
    let root = m.frame.resolve(&at).unwrap();
    let weak = parse("f p", Language::LF).unwrap();
    let strong = parse("F p", Language::LF).unwrap();
    for (name, f, expect) in [("f p", &weak, true), ("F p", &strong, false)] {
        let h = eval_hist(&m, root, f, Language::LF).unwrap();
        let r = eval_rel(&m, root, f, Language::LF).unwrap();
        out.check(h == expect && r == expect, || format!("{name}: hist {h}, rel {r}"));
    }
    let (code, text) = crate::cli::eval_report(&m, &at, "F p", Language::LF, crate::cli::SemanticsArg::Both, false)
        .expect("F1 evaluation");
    out.check(code == 1 && text == "hist: false\nrel: false\n", || {
        format!("itl eval printed {text:?} with exit {code}")
    });
    out
}

pub fn pmorphism_characterization(cfg: &SuiteConfig) -> CriterionOutcome {
    let samples = if cfg.quick { 1000 } else { 10_000 };
    let mut out = CriterionOutcome::new(4, "p-morphism conditions match the set characterization");
    let frames = frame_catalogue(if cfg.quick { 4 } else { 5 });
    let mut r = rng(cfg, 4);
    let mut maps: Vec<(usize, usize, PointMap)> = (0..samples)
        .map(|_| {
            let (i, j) = (r.gen_range(0..frames.len()), r.gen_range(0..frames.len()));
            let n = frames[j].num_points();
            let images = frames[i].points().map(|_| PointId(r.gen_range(0..n))).collect();
            (i, j, PointMap::new(images))
        })
        .collect();
    let found: Vec<(usize, usize, PointMap)> = (0..frames.len())
        .flat_map(|i| (0..frames.len()).map(move |j| (i, j)))
        .flat_map(|(i, j)| {
            search_pmorphisms(&frames[i], &frames[j], Language::L, &SearchOptions::default())
                .unwrap()
                .into_iter()
                .map(move |m| (i, j, m))
        })
        .collect();
    let n_found = found.len();
    maps.extend(found);
    let verdicts = par::map(&maps, |(i, j, map)| {
        let conditions = check_frame_pmorphism(&frames[*i], &frames[*j], map, Language::L)
            .unwrap()
            .passed();
        (conditions, check_set_characterization(&frames[*i], &frames[*j], map).unwrap())
    });
    let mut positive = 0;
    for ((i, j, map), (c, s)) in maps.iter().zip(verdicts) {
        positive += c as usize;
        out.check(c == s, || {
            format!("frames #{i} -> #{j}, map {:?}: conditions {c}, set form {s}", map.images())
        });
    }
    out.detail = format!(
        "{} frames, {samples} sampled maps plus {n_found} searched, {positive} p-morphisms",
        frames.len()
    );
    out
}

/// Criteria 5 and 7 share one pass over the searched p-morphisms.
fn pmorphism_preservation(cfg: &SuiteConfig) -> (CriterionOutcome, CriterionOutcome) {
    let mut c5 = CriterionOutcome::new(5, "p-morphisms preserve truth");
    let mut c7 = CriterionOutcome::new(7, "bisimulations preserve truth at their anchors");
    let frames = frame_catalogue(if cfg.quick { 3 } else { 5 });
    let per_frame = if cfg.quick { 1 } else { 2 };
    let mut r = rng(cfg, 5);
    let valuations: Vec<Vec<Valuation>> = frames
        .iter()
        .map(|f| (0..per_frame).map(|_| random_valuation(&mut r, f, &CORPUS_ATOMS)).collect())
        .collect();
    let mut n_maps = 0;
    for lang in [Language::L, Language::LF] {
        let corpus = Corpus::exhaustive(&CORPUS_ATOMS, CORPUS_DEPTH, lang);
        let dst_models: Vec<Vec<(Model, Vec<FixedBitSet>)>> = frames
            .iter()
            .zip(&valuations)
            .map(|(f, vs)| {
                vs.iter()
                    .map(|v| {
                        let m = Model::new(f.clone(), v.clone()).unwrap();
                        let cols = corpus_columns(&corpus, &m);
                        (m, cols)
                    })
                    .collect()
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..frames.len())
            .flat_map(|i| (0..frames.len()).map(move |j| (i, j)))
            .collect();
        let parts = par::map(&pairs, |&(i, j)| {
            let (mut o5, mut o7) = (CriterionOutcome::default(), CriterionOutcome::default());
            let maps = search_pmorphisms(&frames[i], &frames[j], lang, &SearchOptions::default()).unwrap();
            for map in &maps {
                for (dst, dst_cols) in &dst_models[j] {
                    let src = Model::new(frames[i].clone(), pullback_valuation(&dst.valuation, map)).unwrap();
                    let report = check_model_pmorphism(&src, dst, map, lang).unwrap();
                    o5.check(report.passed(), || format!("{lang}: pulled-back map fails {}", report.render(&src.frame, &dst.frame)));
                    let src_cols = corpus_columns(&corpus, &src);
                    let graph = PointRelation::graph(map);
                    let bis = check_bisimulation(&src, dst, &graph, (PointId(0), map.apply(PointId(0))), lang).unwrap();
                    o7.check(bis.passed(), || format!("{lang}: graph of {:?} is not a bisimulation", map.images()));
                    for x in src.frame.points() {
                        let (a, b) = (&src_cols[x.0], &dst_cols[map.apply(x).0]);
                        let describe = || {
                            format!(
                                "{lang}: {} vs {} differ on {}",
                                src.frame.point_ref(x),
                                dst.frame.point_ref(map.apply(x)),
                                first_difference(&corpus, a, b)
                            )
                        };
                        let agree = a == b;
                        o5.checked += corpus.len() as u64 - 1;
                        o5.check(agree, describe);
                        o7.check(agree, describe);
                    }
                }
            }
            (o5, o7, maps.len())
        });
        for (o5, o7, n) in parts {
            c5.absorb(o5);
            c7.absorb(o7);
            n_maps += n;
        }
    }
    c5.detail = format!(
        "{} frames, {n_maps} p-morphisms over L and LF, {per_frame} valuations each, corpus depth {CORPUS_DEPTH}",
        frames.len()
    );
    (c5, c7)
}

pub fn validity_preservation(cfg: &SuiteConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(6, "surjective p-morphisms preserve validity");
    let frames = frame_catalogue(if cfg.quick { 3 } else { 4 });
    let mut r = rng(cfg, 6);
    let mut surjections = 0;
    let mut valid_formulas = 0;
    for lang in [Language::L, Language::LF] {
        let corpus = Corpus::exhaustive(&CORPUS_ATOMS, CORPUS_DEPTH, lang);
        let validity: Vec<Vec<bool>> = frames
            .iter()
            .map(|f| corpus.frame_validity(f, 20).expect("catalogue frames are within the bound"))
            .collect();
        valid_formulas += validity.iter().map(|v| v.iter().filter(|&&b| b).count()).sum::<usize>();
        let opts = SearchOptions {
            surjective: true,
            ..SearchOptions::default()
        };
        for (i, src) in frames.iter().enumerate() {
            for (j, dst) in frames.iter().enumerate() {
                for map in search_pmorphisms(src, dst, lang, &opts).unwrap() {
                    surjections += 1;
                    let bad = (0..corpus.len()).find(|&k| validity[i][k] && !validity[j][k]);
                    out.checked += corpus.len() as u64 - 1;
                    out.check(bad.is_none(), || {
                        format!("{lang}: {} valid on #{i} but not on #{j}", corpus.formula(bad.unwrap()))
                    });
                    let v = random_valuation(&mut r, dst, &CORPUS_ATOMS);
                    let (sm, dm) = (
                        Model::new(src.clone(), pullback_valuation(&v, &map)).unwrap(),
                        Model::new(dst.clone(), v).unwrap(),
                    );
                    let pv = check_model_pmorphism(&sm, &dm, &map, lang).unwrap();
                    let ok = pv.outcome(Condition::Valuation).is_some_and(|o| o.witness.is_none());
                    out.check(ok, || format!("{lang}: pullback along {:?} breaks PV", map.images()));
                }
            }
        }
    }
    out.detail = format!(
        "{} frames, {surjections} surjections, {valid_formulas} frame-valid corpus entries",
        frames.len()
    );
    out
}

/// All models over the atom `p` on catalogue frames, grouped by size.
fn small_models(max_points: usize) -> Vec<Model> {
    frame_catalogue(max_points.saturating_sub(1).max(1))
        .into_iter()
        .flat_map(|f| {
            all_valuations(&f, &["p"])
                .into_iter()
                .map(move |v| Model::new(f.clone(), v).unwrap())
        })
        .collect()
}

fn small_pairs(models: &[Model], max_total: usize) -> Vec<(usize, usize)> {
    let sizes: Vec<usize> = models.iter().map(|m| m.frame.num_points()).collect();
    (0..models.len())
        .flat_map(|i| (0..models.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| sizes[i] + sizes[j] <= max_total)
        .collect()
}

/// Criterion 8 and the fixpoint half of criterion 7.
fn fixpoint_battery(cfg: &SuiteConfig) -> (CriterionOutcome, CriterionOutcome) {
    let mut c8 = CriterionOutcome::new(8, "greatest bisimulation is maximal");
    let mut c7 = CriterionOutcome::default();
    let max_total = if cfg.quick { 4 } else { 6 };
    let models = small_models(max_total);
    let pairs = small_pairs(&models, max_total);
    let mut related = 0usize;
    for lang in [Language::L, Language::LF] {
        let corpus = Corpus::exhaustive(&CORPUS_ATOMS, CORPUS_DEPTH, lang);
        let cols: Vec<Vec<FixedBitSet>> = par::map(&models, |m| corpus_columns(&corpus, m));
        let parts = par::map(&pairs, |&(i, j)| {
            let (a, b) = (&models[i], &models[j]);
            let (mut o8, mut o7) = (CriterionOutcome::default(), CriterionOutcome::default());
            let g = greatest_bisimulation(a, b, lang);
            let anchor = g.iter().next().unwrap_or((PointId(0), PointId(0)));
            let report = check_bisimulation(a, b, &g, anchor, lang).unwrap();
            o8.check(report.conditions_hold(), || format!("{lang}: output of #{i} vs #{j} fails its own check"));
            for p in a.frame.points() {
                for q in b.frame.points() {
                    if g.contains(p, q) {
                        o7.check(cols[i][p.0] == cols[j][q.0], || {
                            format!(
                                "{lang}: related {} and {} differ on {}",
                                a.frame.point_ref(p),
                                b.frame.point_ref(q),
                                first_difference(&corpus, &cols[i][p.0], &cols[j][q.0])
                            )
                        });
                        continue;
                    }
                    let mut bigger = g.clone();
                    bigger.insert(p, q);
                    let broken = !check_bisimulation(a, b, &bigger, (p, q), lang).unwrap().conditions_hold();
                    o8.check(broken, || {
                        format!(
                            "{lang}: adding ({}, {}) to the output of #{i} vs #{j} keeps a bisimulation",
                            a.frame.point_ref(p),
                            b.frame.point_ref(q)
                        )
                    });
                }
            }
            (o8, o7, g.len())
        });
        for (o8, o7, n) in parts {
            c8.absorb(o8);
            c7.absorb(o7);
            related += n;
        }
    }
    c8.detail = format!(
        "{} models, {} pairs with at most {max_total} points together, {related} related point pairs",
        models.len(),
        pairs.len()
    );
    (c8, c7)
}

pub fn witness_soundness(cfg: &SuiteConfig) -> CriterionOutcome {
    let samples = if cfg.quick { 200 } else { 2000 };
    let mut out = CriterionOutcome::new(9, "witnesses and distinguishing formulas are genuine");
    let mut r = rng(cfg, 9);

    let frames = frame_catalogue(4);
    let mut pm_witnesses = 0;
    for k in 0..samples {
        let lang = if k % 2 == 0 { Language::L } else { Language::LF };
        let (src, dst) = (&frames[r.gen_range(0..frames.len())], &frames[r.gen_range(0..frames.len())]);
        let images = src.points().map(|_| PointId(r.gen_range(0..dst.num_points()))).collect();
        let map = PointMap::new(images);
        let sm = Model::new(src.clone(), random_valuation(&mut r, src, &["p"])).unwrap();
        let dm = Model::new(dst.clone(), random_valuation(&mut r, dst, &["p"])).unwrap();
        let report = check_model_pmorphism(&sm, &dm, &map, lang).unwrap();
        for (c, w) in report.failures() {
            pm_witnesses += 1;
            out.check(replay_witness(&sm, &dm, &map, c, w), || {
                format!("{c} witness for {:?} does not replay", map.images())
            });
        }
    }

    let models = small_models(6);
    let pairs = small_pairs(&models, 6);
    let mut bisim_witnesses = 0;
    for k in 0..samples {
        let lang = if k % 2 == 0 { Language::L } else { Language::LF };
        let (i, j) = pairs[r.gen_range(0..pairs.len())];
        let (a, b) = (&models[i], &models[j]);
        let mut rel = PointRelation::new();
        for p in a.frame.points() {
            for q in b.frame.points() {
                if r.gen_bool(0.5) {
                    rel.insert(p, q);
                }
            }
        }
        let anchor = (PointId(r.gen_range(0..a.frame.num_points())), PointId(r.gen_range(0..b.frame.num_points())));
        let report = check_bisimulation(a, b, &rel, anchor, lang).unwrap();
        for f in &report.failures {
            bisim_witnesses += 1;
            out.check(replay_bisim_failure(a, b, &rel, f, lang), || {
                format!("{} failure at #{i} vs #{j} does not replay", f.condition)
            });
        }
    }

    let mut found = 0;
    let distinguish_pairs: Vec<(usize, usize)> = (0..samples / 4)
        .map(|_| pairs[r.gen_range(0..pairs.len())])
        .collect();
    for (k, &(i, j)) in distinguish_pairs.iter().enumerate() {
        let lang = if k % 2 == 0 { Language::L } else { Language::LF };
        let (a, b) = (&models[i], &models[j]);
        let g = greatest_bisimulation(a, b, lang);
        for p in a.frame.points() {
            for q in b.frame.points() {
                let f = find_distinguishing_formula(a, p, b, q, lang, CORPUS_DEPTH).unwrap();
                match f {
                    Some(f) => {
                        found += 1;
                        let (x, y) = (eval_hist(a, p, &f, lang).unwrap(), eval_hist(b, q, &f, lang).unwrap());
                        out.check(x != y && !g.contains(p, q), || {
                            format!("{f} at {} and {}: {x} / {y}", a.frame.point_ref(p), b.frame.point_ref(q))
                        });
                    }
                    None => out.checked += 1,
                }
            }
        }
    }
    out.detail = format!(
        "{pm_witnesses} p-morphism witnesses, {bisim_witnesses} bisimulation witnesses, {found} distinguishing formulas"
    );
    out
}

#[derive(Debug, Deserialize)]
pub struct MalformedCase {
    pub name: String,
    pub expect: String,
    pub doc: serde_json::Value,
}

pub fn malformed_cases() -> Vec<MalformedCase> {
    serde_json::from_str(MALFORMED).expect("bundled malformed corpus")
}

/// Validates a frame or model document given as JSON.
pub fn validate_value(doc: &serde_json::Value) -> Result<crate::structures::ValidationReport, serde_json::Error> {
    if doc.get("valuation").is_some() {
        Ok(validate_model(&serde_json::from_value::<ModelDoc>(doc.clone())?))
    } else {
        Ok(validate_frame(&serde_json::from_value::<FrameDoc>(doc.clone())?))
    }
}

pub fn structural_validators(_cfg: &SuiteConfig) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(10, "malformed documents report the expected violation");
    let cases = malformed_cases();
    for case in &cases {
        match validate_value(&case.doc) {
            Ok(report) => {
                let names: Vec<&str> = report.violations.iter().map(|v| v.name()).collect();
                out.check(names.contains(&case.expect.as_str()), || {
                    format!("{}: expected {}, got {names:?}", case.name, case.expect)
                });
            }
            Err(e) => out.check(false, || format!("{}: unreadable ({e})", case.name)),
        }
    }
    out.detail = format!("{} documents", cases.len());
    out
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    let (c5, mut c7) = pmorphism_preservation(cfg);
    let (c8, c7_fix) = fixpoint_battery(cfg);
    let graphs = c7.checked;
    c7.absorb(c7_fix);
    c7.detail = format!(
        "{graphs} checks on p-morphism graphs, {} on greatest bisimulations",
        c7.checked - graphs
    );
    vec![
        semantics_equivalence(cfg),
        abbreviations(cfg),
        future_separation(cfg),
        pmorphism_characterization(cfg),
        c5,
        validity_preservation(cfg),
        c7,
        c8,
        witness_soundness(cfg),
        structural_validators(cfg),
    ]
}
