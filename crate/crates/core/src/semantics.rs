//! Model checking at points `(t, π)`.
//!
//! Two evaluators are provided and must agree everywhere:
//!
//! * [`eval_hist`] follows the clauses over histories: `G φ` quantifies over
//!   each `h ∈ π` and each later `s ∈ h`, evaluating at `(s, [h]_{I_s})`;
//!   `H` is the mirror image; `L φ` ranges over every class at `t`; `F φ`
//!   asks every `h ∈ π` for some later `s ∈ h`.
//! * [`eval_rel`] reads `G`, `H`, `L` through the derived relations ≺, ≻
//!   and ∼ on points. `F` has no relational reading and uses the history
//!   clause in both evaluators.
//!
//! [`PointGraph`] precomputes the history-clause neighbourhoods as point
//! masks so that whole extensions can be computed at once; frame validity
//! and the formula corpora run on it.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::formula::{Formula, Language};
use crate::mask::Mask;
use crate::par;
use crate::structures::{Frame, Model, PointId, Valuation};
use crate::{Error, Result};

/// Default bound on `|points| · |atoms|` for valuation enumeration.
pub const DEFAULT_MAX_ENUM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Hist,
    Rel,
}

fn check_inputs(model: &Model, p: PointId, f: &Formula, lang: Language) -> Result<()> {
    if p.0 >= model.frame.num_points() {
        return Err(Error::PointOutOfRange(p.0));
    }
    if !f.in_language(lang) {
        return Err(Error::FutureInL);
    }
    Ok(())
}

struct Evaluator<'a> {
    model: &'a Model,
    semantics: Semantics,
    memo: HashMap<(usize, PointId), bool>,
}

impl<'a> Evaluator<'a> {
    fn new(model: &'a Model, semantics: Semantics) -> Self {
        Evaluator {
            model,
            semantics,
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, p: PointId, f: &Formula) -> bool {
        let key = (f as *const Formula as usize, p);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match f {
            Formula::Atom(a) => self.model.holds_atom(a, p),
            Formula::Not(a) => !self.eval(p, a),
            Formula::And(a, b) => self.eval(p, a) && self.eval(p, b),
            Formula::G(a) => match self.semantics {
                Semantics::Hist => self.all_along(p, a, true),
                Semantics::Rel => self.all_related(p, a, |fr, p, q| fr.precedes(p, q)),
            },
            Formula::H(a) => match self.semantics {
                Semantics::Hist => self.all_along(p, a, false),
                Semantics::Rel => self.all_related(p, a, |fr, p, q| fr.precedes(q, p)),
            },
            Formula::L(a) => match self.semantics {
                Semantics::Hist => {
                    let frame = &self.model.frame;
                    let at = frame.points_at(frame.moment_of(p)).to_vec();
                    at.into_iter().all(|q| self.eval(q, a))
                }
                Semantics::Rel => self.all_related(p, a, |fr, p, q| fr.same_moment(p, q)),
            },
            Formula::F(a) => self.some_later_on_every_history(p, a),
        };
        self.memo.insert(key, v);
        v
    }

    /// For each `h ∈ π` and each `s ∈ h` strictly after (or before) `t`,
    /// `φ` holds at `(s, [h]_{I_s})`.
    fn all_along(&mut self, p: PointId, a: &Formula, future: bool) -> bool {
        let frame = &self.model.frame;
        let tree = frame.tree();
        let t = frame.moment_of(p);
        let targets: Vec<PointId> = frame
            .class_histories(p)
            .flat_map(|h| {
                tree.history(h)
                    .moments
                    .iter()
                    .filter(move |&&s| if future { tree.less(t, s) } else { tree.less(s, t) })
                    .map(move |&s| frame.point_of(s, h).expect("h passes through its own moments"))
            })
            .collect();
        targets.into_iter().all(|q| self.eval(q, a))
    }

    fn all_related(&mut self, p: PointId, a: &Formula, rel: fn(&Frame, PointId, PointId) -> bool) -> bool {
        let frame = &self.model.frame;
        let related: Vec<PointId> = frame.points().filter(|&q| rel(frame, p, q)).collect();
        related.into_iter().all(|q| self.eval(q, a))
    }

    fn some_later_on_every_history(&mut self, p: PointId, a: &Formula) -> bool {
        let frame = &self.model.frame;
        let tree = frame.tree();
        let t = frame.moment_of(p);
        let per_history: Vec<Vec<PointId>> = frame
            .class_histories(p)
            .map(|h| {
                tree.history(h)
                    .moments
                    .iter()
                    .filter(|&&s| tree.less(t, s))
                    .map(|&s| frame.point_of(s, h).expect("h passes through its own moments"))
                    .collect()
            })
            .collect();
        per_history
            .into_iter()
            .all(|later| later.into_iter().any(|q| self.eval(q, a)))
    }
}

/// Evaluates by the history clauses.
pub fn eval_hist(model: &Model, p: PointId, f: &Formula, lang: Language) -> Result<bool> {
    check_inputs(model, p, f, lang)?;
    Ok(Evaluator::new(model, Semantics::Hist).eval(p, f))
}

/// Evaluates `G`, `H`, `L` through ≺, ≻, ∼; `F` through its history clause.
pub fn eval_rel(model: &Model, p: PointId, f: &Formula, lang: Language) -> Result<bool> {
    check_inputs(model, p, f, lang)?;
    Ok(Evaluator::new(model, Semantics::Rel).eval(p, f))
}

pub fn eval(model: &Model, p: PointId, f: &Formula, lang: Language, semantics: Semantics) -> Result<bool> {
    match semantics {
        Semantics::Hist => eval_hist(model, p, f, lang),
        Semantics::Rel => eval_rel(model, p, f, lang),
    }
}

fn first_point(model: &Model, f: &Formula, lang: Language, wanted: bool) -> Result<Option<PointId>> {
    if !f.in_language(lang) {
        return Err(Error::FutureInL);
    }
    let mut ev = Evaluator::new(model, Semantics::Hist);
    Ok(model.frame.points().find(|&p| ev.eval(p, f) == wanted))
}

/// First point (canonical order) where `f` holds.
pub fn model_sat(model: &Model, f: &Formula, lang: Language) -> Result<Option<PointId>> {
    first_point(model, f, lang, true)
}

/// First point (canonical order) where `f` fails.
pub fn model_counterexample(model: &Model, f: &Formula, lang: Language) -> Result<Option<PointId>> {
    first_point(model, f, lang, false)
}

pub fn model_valid(model: &Model, f: &Formula, lang: Language) -> Result<bool> {
    Ok(model_counterexample(model, f, lang)?.is_none())
}

/// History-clause neighbourhoods of every point, as masks.
#[derive(Clone, Debug)]
pub struct PointGraph<M> {
    n: usize,
    succ: Vec<M>,
    pred: Vec<M>,
    same: Vec<M>,
    /// For each point, one mask per history of its class: the later points on it.
    futures: Vec<Vec<M>>,
}

impl<M: Mask> PointGraph<M> {
    pub fn new(frame: &Frame) -> Result<Self> {
        Self::union(&[frame])
    }

    /// Graph of the disjoint union; points of `frames[i]` are offset by the
    /// point counts of the frames before it.
    pub fn union(frames: &[&Frame]) -> Result<Self> {
        let n: usize = frames.iter().map(|f| f.num_points()).sum();
        if let Some(cap) = M::CAPACITY {
            if n > cap {
                return Err(Error::Bound {
                    what: "points in a bit mask",
                    needed: n,
                    bound: cap,
                });
            }
        }
        let mut g = PointGraph {
            n,
            succ: Vec::with_capacity(n),
            pred: Vec::with_capacity(n),
            same: Vec::with_capacity(n),
            futures: Vec::with_capacity(n),
        };
        let mut offset = 0;
        for frame in frames {
            let tree = frame.tree();
            for p in frame.points() {
                let t = frame.moment_of(p);
                let mut succ = M::empty(n);
                let mut pred = M::empty(n);
                let mut futures = Vec::new();
                for h in frame.class_histories(p) {
                    let mut later = M::empty(n);
                    for &s in &tree.history(h).moments {
                        let q = frame.point_of(s, h).expect("h passes through its own moments");
                        if tree.less(t, s) {
                            succ.insert(offset + q.0);
                            later.insert(offset + q.0);
                        } else if tree.less(s, t) {
                            pred.insert(offset + q.0);
                        }
                    }
                    futures.push(later);
                }
                let mut same = M::empty(n);
                for q in frame.points_at(t) {
                    same.insert(offset + q.0);
                }
                g.succ.push(succ);
                g.pred.push(pred);
                g.same.push(same);
                g.futures.push(futures);
            }
            offset += frame.num_points();
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn collect(&self, keep: impl Fn(usize) -> bool) -> M {
        let mut out = M::empty(self.n);
        for p in 0..self.n {
            if keep(p) {
                out.insert(p);
            }
        }
        out
    }

    pub fn not(&self, a: &M) -> M {
        a.complement(self.n)
    }

    pub fn always_future(&self, a: &M) -> M {
        self.collect(|p| self.succ[p].is_subset(a))
    }

    pub fn always_past(&self, a: &M) -> M {
        self.collect(|p| self.pred[p].is_subset(a))
    }

    pub fn necessarily(&self, a: &M) -> M {
        self.collect(|p| self.same[p].is_subset(a))
    }

    pub fn weak_future(&self, a: &M) -> M {
        self.collect(|p| self.futures[p].iter().all(|later| later.intersects(a)))
    }

    /// The set of points satisfying `f`, given the extensions of its atoms.
    pub fn extension(&self, f: &Formula, atom: &impl Fn(&str) -> M) -> M {
        match f {
            Formula::Atom(a) => atom(a),
            Formula::Not(a) => self.not(&self.extension(a, atom)),
            Formula::And(a, b) => self.extension(a, atom).and(&self.extension(b, atom)),
            Formula::G(a) => self.always_future(&self.extension(a, atom)),
            Formula::H(a) => self.always_past(&self.extension(a, atom)),
            Formula::L(a) => self.necessarily(&self.extension(a, atom)),
            Formula::F(a) => self.weak_future(&self.extension(a, atom)),
        }
    }
}

pub(crate) fn valuation_mask<M: Mask>(n: usize, valuation: &Valuation, atom: &str, offset: usize) -> M {
    let mut m = M::empty(n);
    if let Some(set) = valuation.get(atom) {
        for p in set {
            m.insert(offset + p.0);
        }
    }
    m
}

/// The set of points of `model` satisfying `f`.
pub fn extension(model: &Model, f: &Formula, lang: Language) -> Result<FixedBitSet> {
    if !f.in_language(lang) {
        return Err(Error::FutureInL);
    }
    let g = PointGraph::<FixedBitSet>::new(&model.frame)?;
    let n = g.len();
    Ok(g.extension(f, &|a| valuation_mask(n, &model.valuation, a, 0)))
}

/// A valuation together with a point, witnessing frame (in)validity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameWitness {
    pub valuation: Valuation,
    pub point: PointId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameValidity {
    pub valid: bool,
    /// First failing (valuation, point) in enumeration order.
    pub counterexample: Option<FrameWitness>,
}

/// Enumerates every valuation of the atoms of `f` over the points of `frame`,
/// in increasing order of the bit pattern `atom_index * points + point`.
fn search_valuations(
    frame: &Frame,
    f: &Formula,
    lang: Language,
    max_enum: usize,
    want: bool,
) -> Result<Option<FrameWitness>> {
    if !f.in_language(lang) {
        return Err(Error::FutureInL);
    }
    let atoms: Vec<&str> = f.atoms().into_iter().collect();
    let n = frame.num_points();
    let bits = n * atoms.len();
    if bits > max_enum || bits >= 64 {
        return Err(Error::Bound {
            what: "valuation bits (points x atoms)",
            needed: bits,
            bound: max_enum.min(63),
        });
    }
    let graph = PointGraph::<u128>::new(frame)?;
    let point_mask = (1u128 << n) - 1;
    let hit = par::find_first(0..1u64 << bits, |v| {
        let lookup = |a: &str| match atoms.iter().position(|&x| x == a) {
            Some(i) => (v as u128 >> (i * n)) & point_mask,
            None => 0,
        };
        let ext = graph.extension(f, &lookup);
        let target = if want { ext } else { !ext & point_mask };
        (target != 0).then(|| (v, target.trailing_zeros() as usize))
    });
    Ok(hit.map(|(v, p)| {
        let valuation = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let set: BTreeSet<PointId> = (0..n).filter(|&q| v >> (i * n + q) & 1 == 1).map(PointId).collect();
                (a.to_string(), set)
            })
            .collect();
        FrameWitness {
            valuation,
            point: PointId(p),
        }
    }))
}

/// Exact frame validity by enumeration of all valuations of the atoms of `f`.
pub fn frame_valid(frame: &Frame, f: &Formula, lang: Language, max_enum: usize) -> Result<FrameValidity> {
    let counterexample = search_valuations(frame, f, lang, max_enum, false)?;
    Ok(FrameValidity {
        valid: counterexample.is_none(),
        counterexample,
    })
}

/// A valuation and point satisfying `f`, if any.
pub fn frame_sat(frame: &Frame, f: &Formula, lang: Language, max_enum: usize) -> Result<Option<FrameWitness>> {
    search_valuations(frame, f, lang, max_enum, true)
}
