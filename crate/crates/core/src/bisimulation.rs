//! Bisimulations between pointed models.
//!
//! A relation `B` between the points of two models is a bisimulation when
//! every related pair agrees on atoms and satisfies the back-and-forth
//! conditions for ≺, ≻ and ∼ (and, for LF, the history conditions F-f and
//! F-b). All conditions only ask for `B`-related witnesses, so they are
//! monotone in `B` and the pairs surviving iterated deletion form the
//! greatest such relation.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::formula::{Formula, Language};
use crate::mask::Mask;
use crate::morphisms::{Condition, PointMap};
use crate::par;
use crate::semantics::{valuation_mask, PointGraph};
use crate::structures::{Frame, HistoryId, Model, PointDoc, PointId, PointRef, RelationDoc};
use crate::{Error, Result};

/// Default depth bound for distinguishing-formula search.
pub const DEFAULT_DISTINGUISH_DEPTH: usize = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointRelation {
    pairs: BTreeSet<(PointId, PointId)>,
}

impl PointRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: PointId, q: PointId) -> bool {
        self.pairs.insert((p, q))
    }

    pub fn remove(&mut self, p: PointId, q: PointId) -> bool {
        self.pairs.remove(&(p, q))
    }

    pub fn contains(&self, p: PointId, q: PointId) -> bool {
        self.pairs.contains(&(p, q))
    }

    pub fn iter(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn union(&self, other: &PointRelation) -> PointRelation {
        PointRelation {
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    /// The graph `{(x, f(x))}` of a point map.
    pub fn graph(map: &PointMap) -> PointRelation {
        PointRelation {
            pairs: (0..map.len()).map(|i| (PointId(i), map.apply(PointId(i)))).collect(),
        }
    }

    pub fn from_doc(src: &Frame, dst: &Frame, doc: &RelationDoc) -> Result<PointRelation> {
        let mut rel = PointRelation::new();
        for (a, b) in doc {
            rel.insert(src.resolve(&PointRef::from(a))?, dst.resolve(&PointRef::from(b))?);
        }
        Ok(rel)
    }

    pub fn to_doc(&self, src: &Frame, dst: &Frame) -> RelationDoc {
        self.iter()
            .map(|(p, q)| (PointDoc::from(src.point_ref(p)), PointDoc::from(dst.point_ref(q))))
            .collect()
    }

    fn matrix(&self, rows: usize, cols: usize) -> Vec<FixedBitSet> {
        let mut m = vec![FixedBitSet::with_capacity(cols); rows];
        for (p, q) in self.iter() {
            m[p.0].insert(q.0);
        }
        m
    }
}

/// Relational neighbourhoods and history futures of one model's points.
struct Side<'a> {
    model: &'a Model,
    succ: Vec<Vec<PointId>>,
    pred: Vec<Vec<PointId>>,
    same: Vec<Vec<PointId>>,
    /// Per point: each history of its class with the later points on it.
    futures: Vec<Vec<(HistoryId, Vec<PointId>)>>,
}

impl<'a> Side<'a> {
    fn new(model: &'a Model) -> Self {
        let f = &model.frame;
        let tree = f.tree();
        let related = |rel: &dyn Fn(PointId, PointId) -> bool| -> Vec<Vec<PointId>> {
            f.points().map(|p| f.points().filter(|&q| rel(p, q)).collect()).collect()
        };
        let futures = f
            .points()
            .map(|p| {
                let t = f.moment_of(p);
                f.class_histories(p)
                    .map(|h| {
                        let later = tree
                            .history(h)
                            .moments
                            .iter()
                            .filter(|&&s| tree.less(t, s))
                            .map(|&s| f.point_of(s, h).expect("h passes through its own moments"))
                            .collect();
                        (h, later)
                    })
                    .collect()
            })
            .collect();
        Side {
            model,
            succ: related(&|p, q| f.precedes(p, q)),
            pred: related(&|p, q| f.precedes(q, p)),
            same: related(&|p, q| f.same_moment(p, q)),
            futures,
        }
    }

    fn neighbours(&self, c: Condition) -> &[Vec<PointId>] {
        match c {
            Condition::GForth | Condition::GBack => &self.succ,
            Condition::HForth | Condition::HBack => &self.pred,
            _ => &self.same,
        }
    }
}

/// What a failing pair could not answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimWitness {
    /// A source point (forth conditions) or target point (back conditions)
    /// with no related partner.
    Unmatched(PointId),
    /// F-f: a target history; F-b: a source history.
    History(HistoryId),
    Atom(String),
    MissingAnchor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimFailure {
    pub pair: (PointId, PointId),
    pub condition: Condition,
    pub witness: BisimWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimReport {
    /// Per-pair failures in pair order, then the anchor check.
    pub failures: Vec<BisimFailure>,
}

impl BisimReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// True when every pair satisfies its conditions, whatever the anchor.
    pub fn conditions_hold(&self) -> bool {
        self.failures.iter().all(|f| f.condition == Condition::Anchor)
    }

    fn describe(&self, src: &Frame, dst: &Frame, f: &BisimFailure) -> String {
        let (p, q) = f.pair;
        let w = match &f.witness {
            BisimWitness::Unmatched(x) => {
                let frame = if is_back(f.condition) { dst } else { src };
                format!("unmatched {}", frame.point_ref(*x))
            }
            BisimWitness::History(h) => {
                let frame = if f.condition == Condition::FForth { dst } else { src };
                format!("history {}", frame.tree().leaf_name(*h))
            }
            BisimWitness::Atom(a) => format!("disagree on {a}"),
            BisimWitness::MissingAnchor => "anchor not in relation".to_owned(),
        };
        format!("{}: ({}, {}) {}", f.condition, src.point_ref(p), dst.point_ref(q), w)
    }

    pub fn render(&self, src: &Frame, dst: &Frame) -> String {
        if self.passed() {
            return "bisimulation: pass".to_owned();
        }
        self.failures
            .iter()
            .map(|f| format!("FAIL {}", self.describe(src, dst, f)))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_json(&self, src: &Frame, dst: &Frame) -> serde_json::Value {
        let items: Vec<_> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "condition": f.condition.name(),
                    "pair": [src.point_ref(f.pair.0).to_string(), dst.point_ref(f.pair.1).to_string()],
                    "detail": self.describe(src, dst, f),
                })
            })
            .collect();
        json!({ "pass": self.passed(), "failures": items })
    }
}

fn is_back(c: Condition) -> bool {
    matches!(c, Condition::GBack | Condition::HBack | Condition::LBack)
}

const PAIR_CONDITIONS: [Condition; 6] = [
    Condition::GForth,
    Condition::GBack,
    Condition::HForth,
    Condition::HBack,
    Condition::LForth,
    Condition::LBack,
];

struct Checker<'a> {
    src: Side<'a>,
    dst: Side<'a>,
    atoms: Vec<String>,
    lang: Language,
}

impl<'a> Checker<'a> {
    fn new(src: &'a Model, dst: &'a Model, lang: Language) -> Self {
        let atoms: BTreeSet<String> = src.valuation.keys().chain(dst.valuation.keys()).cloned().collect();
        Checker {
            src: Side::new(src),
            dst: Side::new(dst),
            atoms: atoms.into_iter().collect(),
            lang,
        }
    }

    fn atom_agreement(&self, p: PointId, q: PointId) -> Option<String> {
        self.atoms
            .iter()
            .find(|a| self.src.model.holds_atom(a, p) != self.dst.model.holds_atom(a, q))
            .cloned()
    }

    /// First failing condition of `(p, q)` with respect to `rel`, in the
    /// order PV, G-f, G-b, H-f, H-b, L-f, L-b, F-f, F-b.
    fn pair_failure(&self, rel: &[FixedBitSet], p: PointId, q: PointId) -> Option<(Condition, BisimWitness)> {
        if let Some(a) = self.atom_agreement(p, q) {
            return Some((Condition::Valuation, BisimWitness::Atom(a)));
        }
        for c in PAIR_CONDITIONS {
            if let Some(x) = self.unmatched(rel, c, p, q) {
                return Some((c, BisimWitness::Unmatched(x)));
            }
        }
        if self.lang.allows_future() {
            if let Some(h) = self.future_forth(rel, p, q) {
                return Some((Condition::FForth, BisimWitness::History(h)));
            }
            if let Some(h) = self.future_back(rel, p, q) {
                return Some((Condition::FBack, BisimWitness::History(h)));
            }
        }
        None
    }

    fn unmatched(&self, rel: &[FixedBitSet], c: Condition, p: PointId, q: PointId) -> Option<PointId> {
        let (mine, theirs) = (self.src.neighbours(c), self.dst.neighbours(c));
        if is_back(c) {
            theirs[q.0]
                .iter()
                .copied()
                .find(|r2| !mine[p.0].iter().any(|r| rel[r.0].contains(r2.0)))
        } else {
            mine[p.0]
                .iter()
                .copied()
                .find(|r| !theirs[q.0].iter().any(|r2| rel[r.0].contains(r2.0)))
        }
    }

    /// For every `h' ∈ ρ'` some `h ∈ ρ` whose every later point is related
    /// to some later point of `h'`.
    fn future_forth(&self, rel: &[FixedBitSet], p: PointId, q: PointId) -> Option<HistoryId> {
        self.dst.futures[q.0].iter().find_map(|(h2, later2)| {
            let ok = self.src.futures[p.0]
                .iter()
                .any(|(_, later)| later.iter().all(|r| later2.iter().any(|r2| rel[r.0].contains(r2.0))));
            (!ok).then_some(*h2)
        })
    }

    /// For every `h ∈ ρ` some `h' ∈ ρ'` whose every later point is related
    /// to some later point of `h`.
    fn future_back(&self, rel: &[FixedBitSet], p: PointId, q: PointId) -> Option<HistoryId> {
        self.src.futures[p.0].iter().find_map(|(h, later)| {
            let ok = self.dst.futures[q.0]
                .iter()
                .any(|(_, later2)| later2.iter().all(|r2| later.iter().any(|r| rel[r.0].contains(r2.0))));
            (!ok).then_some(*h)
        })
    }

    fn sizes(&self) -> (usize, usize) {
        (self.src.model.frame.num_points(), self.dst.model.frame.num_points())
    }
}

fn check_range(model: &Model, p: PointId) -> Result<()> {
    if p.0 >= model.frame.num_points() {
        return Err(Error::PointOutOfRange(p.0));
    }
    Ok(())
}

/// Checks every pair of `rel`, then the anchor.
pub fn check_bisimulation(
    src: &Model,
    dst: &Model,
    rel: &PointRelation,
    anchor: (PointId, PointId),
    lang: Language,
) -> Result<BisimReport> {
    check_range(src, anchor.0)?;
    check_range(dst, anchor.1)?;
    for (p, q) in rel.iter() {
        check_range(src, p)?;
        check_range(dst, q)?;
    }
    let checker = Checker::new(src, dst, lang);
    let (n, m) = checker.sizes();
    let matrix = rel.matrix(n, m);
    let pairs: Vec<(PointId, PointId)> = rel.iter().collect();
    let mut failures: Vec<BisimFailure> = par::map(&pairs, |&(p, q)| {
        checker.pair_failure(&matrix, p, q).map(|(condition, witness)| BisimFailure {
            pair: (p, q),
            condition,
            witness,
        })
    })
    .into_iter()
    .flatten()
    .collect();
    if !rel.contains(anchor.0, anchor.1) {
        failures.push(BisimFailure {
            pair: anchor,
            condition: Condition::Anchor,
            witness: BisimWitness::MissingAnchor,
        });
    }
    Ok(BisimReport { failures })
}

/// Re-checks a reported failure against `rel`; true iff it is genuine.
pub fn replay_bisim_failure(src: &Model, dst: &Model, rel: &PointRelation, failure: &BisimFailure, lang: Language) -> bool {
    let (p, q) = failure.pair;
    let (sf, df) = (&src.frame, &dst.frame);
    let related = |a: PointId, b: PointId| rel.contains(a, b);
    let later = |f: &Frame, x: PointId, h: HistoryId| -> Vec<PointId> {
        let t = f.moment_of(x);
        let tree = f.tree();
        tree.history(h)
            .moments
            .iter()
            .filter(|&&s| tree.less(t, s))
            .filter_map(|&s| f.point_of(s, h))
            .collect()
    };
    type Rel = fn(&Frame, PointId, PointId) -> bool;
    let relation: Option<Rel> = match failure.condition {
        Condition::GForth | Condition::GBack => Some(|f, a, b| f.precedes(a, b)),
        Condition::HForth | Condition::HBack => Some(|f, a, b| f.precedes(b, a)),
        Condition::LForth | Condition::LBack => Some(|f, a, b| f.same_moment(a, b)),
        _ => None,
    };
    match (&failure.witness, failure.condition) {
        (BisimWitness::MissingAnchor, Condition::Anchor) => !related(p, q),
        (BisimWitness::Atom(a), Condition::Valuation) => related(p, q) && src.holds_atom(a, p) != dst.holds_atom(a, q),
        (BisimWitness::Unmatched(x), c) if relation.is_some() => {
            let s = relation.unwrap();
            if !related(p, q) {
                return false;
            }
            if is_back(c) {
                s(df, q, *x) && sf.points().all(|r| !(s(sf, p, r) && related(r, *x)))
            } else {
                s(sf, p, *x) && df.points().all(|r2| !(s(df, q, r2) && related(*x, r2)))
            }
        }
        (BisimWitness::History(h2), Condition::FForth) => {
            lang.allows_future()
                && related(p, q)
                && df.class(q).contains(h2.0)
                && !sf.class_histories(p).any(|h| {
                    let l2 = later(df, q, *h2);
                    later(sf, p, h).iter().all(|&r| l2.iter().any(|&r2| related(r, r2)))
                })
        }
        (BisimWitness::History(h), Condition::FBack) => {
            lang.allows_future()
                && related(p, q)
                && sf.class(p).contains(h.0)
                && !df.class_histories(q).any(|h2| {
                    let l = later(sf, p, *h);
                    later(df, q, h2).iter().all(|&r2| l.iter().any(|&r| related(r, r2)))
                })
        }
        _ => false,
    }
}

/// Deletes violating pairs, sweep by sweep, from the atom-agreeing pairs
/// until none violates a condition.
pub fn greatest_bisimulation(src: &Model, dst: &Model, lang: Language) -> PointRelation {
    let checker = Checker::new(src, dst, lang);
    let (n, m) = checker.sizes();
    let mut pairs: Vec<(PointId, PointId)> = (0..n)
        .flat_map(|p| (0..m).map(move |q| (PointId(p), PointId(q))))
        .filter(|&(p, q)| checker.atom_agreement(p, q).is_none())
        .collect();
    loop {
        let rel = PointRelation {
            pairs: pairs.iter().copied().collect(),
        };
        let matrix = rel.matrix(n, m);
        let keep = par::map(&pairs, |&(p, q)| checker.pair_failure(&matrix, p, q).is_none());
        if keep.iter().all(|&k| k) {
            return rel;
        }
        pairs = pairs.into_iter().zip(keep).filter_map(|(pq, k)| k.then_some(pq)).collect();
    }
}

pub fn bisimilar(src: &Model, p: PointId, dst: &Model, q: PointId, lang: Language) -> Result<bool> {
    check_range(src, p)?;
    check_range(dst, q)?;
    Ok(greatest_bisimulation(src, dst, lang).contains(p, q))
}

/// Atoms used by distinguishing-formula search: the first two atoms of the
/// two valuations, or `p` when both are empty.
pub fn distinguishing_atoms(src: &Model, dst: &Model) -> Vec<String> {
    let atoms: BTreeSet<&String> = src.valuation.keys().chain(dst.valuation.keys()).collect();
    let mut atoms: Vec<String> = atoms.into_iter().take(2).cloned().collect();
    if atoms.is_empty() {
        atoms.push("p".to_owned());
    }
    atoms
}

/// Breadth-first search, by operator depth, for a formula true at exactly
/// one of `(src, p)` and `(dst, q)`.
///
/// Formulas whose extension over both models was already seen are not
/// expanded further. Two formulas with equal extensions behave identically
/// inside any context, so no depth-bounded distinguishing formula is lost.
/// `None` means the points agree on every formula up to `max_depth` over
/// the chosen atoms, which is weaker than being bisimilar.
pub fn find_distinguishing_formula(
    src: &Model,
    p: PointId,
    dst: &Model,
    q: PointId,
    lang: Language,
    max_depth: usize,
) -> Result<Option<Formula>> {
    check_range(src, p)?;
    check_range(dst, q)?;
    let graph = PointGraph::<FixedBitSet>::union(&[&src.frame, &dst.frame])?;
    let n = graph.len();
    let offset = src.frame.num_points();
    let q_index = offset + q.0;
    let splits = |m: &FixedBitSet| Mask::contains(m, p.0) != Mask::contains(m, q_index);

    let mut reps: Vec<(Formula, FixedBitSet)> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut consider = |f: Formula, m: FixedBitSet, reps: &mut Vec<(Formula, FixedBitSet)>| -> Option<Formula> {
        if splits(&m) {
            return Some(f);
        }
        if seen.insert(m.clone()) {
            reps.push((f, m));
        }
        None
    };

    for a in distinguishing_atoms(src, dst) {
        let mask = valuation_mask::<FixedBitSet>(n, &src.valuation, &a, 0).or(&valuation_mask(
            n,
            &dst.valuation,
            &a,
            offset,
        ));
        if let Some(f) = consider(Formula::atom(a), mask, &mut reps) {
            return Ok(Some(f));
        }
    }
    let mut level = 0..reps.len();
    for _ in 0..max_depth {
        let below = reps.len();
        for i in level.clone() {
            let (f, m) = reps[i].clone();
            let mut unary = vec![
                (f.clone().not(), graph.not(&m)),
                (f.clone().always_future(), graph.always_future(&m)),
                (f.clone().always_past(), graph.always_past(&m)),
                (f.clone().necessarily(), graph.necessarily(&m)),
            ];
            if lang.allows_future() {
                unary.push((f.weak_future(), graph.weak_future(&m)));
            }
            for (g, gm) in unary {
                if let Some(found) = consider(g, gm, &mut reps) {
                    return Ok(Some(found));
                }
            }
        }
        for i in 0..below {
            for j in 0..below {
                if !(level.contains(&i) || level.contains(&j)) {
                    continue;
                }
                let f = reps[i].0.clone().and(reps[j].0.clone());
                let m = reps[i].1.and(&reps[j].1);
                if let Some(found) = consider(f, m, &mut reps) {
                    return Ok(Some(found));
                }
            }
        }
        level = below..reps.len();
        if level.is_empty() {
            break;
        }
    }
    Ok(None)
}

impl fmt::Display for BisimWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BisimWitness::Unmatched(p) => write!(f, "unmatched point #{}", p.0),
            BisimWitness::History(h) => write!(f, "history #{}", h.0),
            BisimWitness::Atom(a) => write!(f, "atom {a}"),
            BisimWitness::MissingAnchor => f.write_str("missing anchor"),
        }
    }
}
