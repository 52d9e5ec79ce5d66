//! Frame and model p-morphisms.
//!
//! Maps act on points `(t, π)`, not on moments. A frame p-morphism satisfies
//! G-f, G-b, H-b, L-f and L-b; for the language LF it must also satisfy the
//! history conditions F-f and F-b. A model p-morphism additionally agrees
//! on every atom (PV).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::formula::Language;
use crate::par;
use crate::structures::{Frame, HistoryId, MapDoc, Model, MomentId, PointDoc, PointId, PointRef, Valuation};
use crate::{Error, Result};

/// Default bound on the number of points of either frame in a search.
pub const DEFAULT_SEARCH_POINTS: usize = 7;

/// Conditions shared by p-morphisms and bisimulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    GForth,
    GBack,
    HForth,
    HBack,
    LForth,
    LBack,
    FForth,
    FBack,
    Valuation,
    Anchor,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::GForth => "G-f",
            Condition::GBack => "G-b",
            Condition::HForth => "H-f",
            Condition::HBack => "H-b",
            Condition::LForth => "L-f",
            Condition::LBack => "L-b",
            Condition::FForth => "F-f",
            Condition::FBack => "F-b",
            Condition::Valuation => "PV",
            Condition::Anchor => "B",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A total map from the points of one frame to the points of another.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointMap {
    images: Vec<PointId>,
}

impl PointMap {
    pub fn new(images: Vec<PointId>) -> Self {
        PointMap { images }
    }

    pub fn identity(frame: &Frame) -> Self {
        PointMap::new(frame.points().collect())
    }

    pub fn apply(&self, p: PointId) -> PointId {
        self.images[p.0]
    }

    pub fn images(&self) -> &[PointId] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `f₁`: the moment component of the image.
    pub fn moment_part(&self, dst: &Frame, p: PointId) -> MomentId {
        dst.moment_of(self.apply(p))
    }

    /// `f₂`: the class component of the image.
    pub fn class_part<'a>(&self, dst: &'a Frame, p: PointId) -> &'a FixedBitSet {
        dst.class(self.apply(p))
    }

    /// Onto the points (not merely the moments) of `dst`.
    pub fn is_surjective(&self, dst: &Frame) -> bool {
        let hit: BTreeSet<PointId> = self.images.iter().copied().collect();
        hit.len() == dst.num_points()
    }

    /// `other ∘ self`
    pub fn then(&self, other: &PointMap) -> PointMap {
        PointMap::new(self.images.iter().map(|&p| other.apply(p)).collect())
    }

    fn check_shape(&self, src: &Frame, dst: &Frame) -> Result<()> {
        if self.images.len() != src.num_points() {
            let missing = src.points().nth(self.images.len()).map(|p| src.point_ref(p).to_string());
            return Err(Error::PartialMap(missing.unwrap_or_else(|| "extra entries".into())));
        }
        if let Some(p) = self.images.iter().find(|p| p.0 >= dst.num_points()) {
            return Err(Error::PointOutOfRange(p.0));
        }
        Ok(())
    }

    pub fn from_doc(src: &Frame, dst: &Frame, doc: &MapDoc) -> Result<PointMap> {
        let mut images: Vec<Option<PointId>> = vec![None; src.num_points()];
        for (a, b) in doc {
            let p = src.resolve(&PointRef::from(a))?;
            let q = dst.resolve(&PointRef::from(b))?;
            match images[p.0] {
                Some(prev) if prev != q => {
                    return Err(Error::InvalidPoint(
                        src.point_ref(p).to_string(),
                        "mapped to two different points",
                    ))
                }
                _ => images[p.0] = Some(q),
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, q)| q.ok_or_else(|| Error::PartialMap(src.point_ref(PointId(i)).to_string())))
            .collect::<Result<_>>()?;
        Ok(PointMap { images })
    }

    pub fn to_doc(&self, src: &Frame, dst: &Frame) -> MapDoc {
        src.points()
            .map(|p| (PointDoc::from(src.point_ref(p)), PointDoc::from(dst.point_ref(self.apply(p)))))
            .collect()
    }
}

/// Evidence for a failed condition. Points named `target` live in the
/// target frame, all others in the source frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `from S to` in the source, but not `f(from) S' f(to)`.
    Pair { from: PointId, to: PointId },
    /// `f(from) S' target`, but no `q` with `from S q` maps onto `target`.
    Unanswered { from: PointId, target: PointId },
    /// F-f: a target history in `f₂(at)`; F-b: a source history in the class of `at`.
    History { at: PointId, history: HistoryId },
    Atom { at: PointId, atom: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub condition: Condition,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmorphReport {
    pub outcomes: Vec<Outcome>,
}

impl PmorphReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.witness.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = (Condition, &Witness)> {
        self.outcomes
            .iter()
            .filter_map(|o| o.witness.as_ref().map(|w| (o.condition, w)))
    }

    pub fn outcome(&self, c: Condition) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.condition == c)
    }

    pub fn render(&self, src: &Frame, dst: &Frame) -> String {
        let mut lines = Vec::new();
        for o in &self.outcomes {
            match &o.witness {
                None => lines.push(format!("{}: pass", o.condition)),
                Some(w) => lines.push(format!("{}: FAIL {}", o.condition, describe_witness(src, dst, w))),
            }
        }
        lines.join("\n")
    }

    pub fn to_json(&self, src: &Frame, dst: &Frame) -> serde_json::Value {
        let items: Vec<_> = self
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "condition": o.condition.name(),
                    "pass": o.witness.is_none(),
                    "witness": o.witness.as_ref().map(|w| describe_witness(src, dst, w)),
                })
            })
            .collect();
        json!({ "pass": self.passed(), "conditions": items })
    }
}

pub fn describe_witness(src: &Frame, dst: &Frame, w: &Witness) -> String {
    match w {
        Witness::Pair { from, to } => format!("{} -> {}", src.point_ref(*from), src.point_ref(*to)),
        Witness::Unanswered { from, target } => {
            format!("{} has no preimage for {}", src.point_ref(*from), dst.point_ref(*target))
        }
        Witness::History { at, history } => format!("{} history {}", src.point_ref(*at), history.0),
        Witness::Atom { at, atom } => format!("{} disagrees on {atom}", src.point_ref(*at)),
    }
}

type Rel = fn(&Frame, PointId, PointId) -> bool;

fn prec(f: &Frame, p: PointId, q: PointId) -> bool {
    f.precedes(p, q)
}
fn succ(f: &Frame, p: PointId, q: PointId) -> bool {
    f.precedes(q, p)
}
fn same(f: &Frame, p: PointId, q: PointId) -> bool {
    f.same_moment(p, q)
}

fn forth(src: &Frame, dst: &Frame, map: &PointMap, rel: Rel) -> Option<Witness> {
    for p in src.points() {
        for q in src.points() {
            if rel(src, p, q) && !rel(dst, map.apply(p), map.apply(q)) {
                return Some(Witness::Pair { from: p, to: q });
            }
        }
    }
    None
}

fn back(src: &Frame, dst: &Frame, map: &PointMap, rel: Rel) -> Option<Witness> {
    for p in src.points() {
        let fp = map.apply(p);
        for target in dst.points() {
            if rel(dst, fp, target) && !src.points().any(|q| rel(src, p, q) && map.apply(q) == target) {
                return Some(Witness::Unanswered { from: p, target });
            }
        }
    }
    None
}

/// Points strictly after `t` on `h`, each paired with its class point.
fn later_points(frame: &Frame, t: MomentId, h: HistoryId) -> impl Iterator<Item = PointId> + '_ {
    let tree = frame.tree();
    tree.history(h)
        .moments
        .iter()
        .filter(move |&&s| tree.less(t, s))
        .map(move |&s| frame.point_of(s, h).expect("h passes through its own moments"))
}

/// F-f at `p` for one target history `h'`: some `h ∈ π` whose every later
/// point maps onto a later point of `h'`.
fn future_forth_at(src: &Frame, dst: &Frame, map: &PointMap, p: PointId, h_dst: HistoryId) -> bool {
    let t = src.moment_of(p);
    let t_dst = map.moment_part(dst, p);
    let answers: BTreeSet<PointId> = later_points(dst, t_dst, h_dst).collect();
    src.class_histories(p)
        .any(|h| later_points(src, t, h).all(|s| answers.contains(&map.apply(s))))
}

/// F-b at `p` for one source history `h`: some `h' ∈ f₂(p)` whose every
/// later point is the image of a later point of `h`.
fn future_back_at(src: &Frame, dst: &Frame, map: &PointMap, p: PointId, h: HistoryId) -> bool {
    let t = src.moment_of(p);
    let t_dst = map.moment_part(dst, p);
    let images: BTreeSet<PointId> = later_points(src, t, h).map(|s| map.apply(s)).collect();
    dst.class_histories(map.apply(p))
        .any(|h_dst| later_points(dst, t_dst, h_dst).all(|s| images.contains(&s)))
}

fn future_forth(src: &Frame, dst: &Frame, map: &PointMap) -> Option<Witness> {
    for p in src.points() {
        for h_dst in dst.class_histories(map.apply(p)) {
            if !future_forth_at(src, dst, map, p, h_dst) {
                return Some(Witness::History { at: p, history: h_dst });
            }
        }
    }
    None
}

fn future_back(src: &Frame, dst: &Frame, map: &PointMap) -> Option<Witness> {
    for p in src.points() {
        for h in src.class_histories(p) {
            if !future_back_at(src, dst, map, p, h) {
                return Some(Witness::History { at: p, history: h });
            }
        }
    }
    None
}

fn frame_outcomes(src: &Frame, dst: &Frame, map: &PointMap, lang: Language) -> Vec<Outcome> {
    let mut out = vec![
        Outcome {
            condition: Condition::GForth,
            witness: forth(src, dst, map, prec),
        },
        Outcome {
            condition: Condition::GBack,
            witness: back(src, dst, map, prec),
        },
        Outcome {
            condition: Condition::HBack,
            witness: back(src, dst, map, succ),
        },
        Outcome {
            condition: Condition::LForth,
            witness: forth(src, dst, map, same),
        },
        Outcome {
            condition: Condition::LBack,
            witness: back(src, dst, map, same),
        },
    ];
    if lang.allows_future() {
        out.push(Outcome {
            condition: Condition::FForth,
            witness: future_forth(src, dst, map),
        });
        out.push(Outcome {
            condition: Condition::FBack,
            witness: future_back(src, dst, map),
        });
    }
    out
}

/// Checks every frame condition; in LF also F-f and F-b.
pub fn check_frame_pmorphism(src: &Frame, dst: &Frame, map: &PointMap, lang: Language) -> Result<PmorphReport> {
    map.check_shape(src, dst)?;
    Ok(PmorphReport {
        outcomes: frame_outcomes(src, dst, map, lang),
    })
}

fn valuation_atoms<'a>(a: &'a Valuation, b: &'a Valuation) -> BTreeSet<&'a str> {
    a.keys().chain(b.keys()).map(String::as_str).collect()
}

pub fn check_model_pmorphism(src: &Model, dst: &Model, map: &PointMap, lang: Language) -> Result<PmorphReport> {
    let mut report = check_frame_pmorphism(&src.frame, &dst.frame, map, lang)?;
    let atoms = valuation_atoms(&src.valuation, &dst.valuation);
    let witness = src.frame.points().find_map(|p| {
        atoms
            .iter()
            .find(|a| src.holds_atom(a, p) != dst.holds_atom(a, map.apply(p)))
            .map(|a| Witness::Atom {
                at: p,
                atom: a.to_string(),
            })
    });
    report.outcomes.push(Outcome {
        condition: Condition::Valuation,
        witness,
    });
    Ok(report)
}

/// For every point and each of ≺, ≻, ∼: the image of the related set equals
/// the related set of the image.
pub fn check_set_characterization(src: &Frame, dst: &Frame, map: &PointMap) -> Result<bool> {
    map.check_shape(src, dst)?;
    let rels: [Rel; 3] = [prec, succ, same];
    Ok(src.points().all(|p| {
        rels.iter().all(|rel| {
            let image: BTreeSet<PointId> = src.points().filter(|&q| rel(src, p, q)).map(|q| map.apply(q)).collect();
            let related: BTreeSet<PointId> = dst.points().filter(|&r| rel(dst, map.apply(p), r)).collect();
            image == related
        })
    }))
}

/// Re-checks a reported failure from scratch; true iff it is a genuine violation.
pub fn replay_witness(
    src: &Model,
    dst: &Model,
    map: &PointMap,
    condition: Condition,
    witness: &Witness,
) -> bool {
    let (sf, df) = (&src.frame, &dst.frame);
    let rel: Option<Rel> = match condition {
        Condition::GForth | Condition::GBack => Some(prec),
        Condition::HForth | Condition::HBack => Some(succ),
        Condition::LForth | Condition::LBack => Some(same),
        _ => None,
    };
    match (condition, witness) {
        (Condition::GForth | Condition::HForth | Condition::LForth, Witness::Pair { from, to }) => {
            let rel = rel.unwrap();
            rel(sf, *from, *to) && !rel(df, map.apply(*from), map.apply(*to))
        }
        (Condition::GBack | Condition::HBack | Condition::LBack, Witness::Unanswered { from, target }) => {
            let rel = rel.unwrap();
            let preimages: BTreeSet<PointId> = sf.points().filter(|&q| map.apply(q) == *target).collect();
            rel(df, map.apply(*from), *target) && preimages.iter().all(|&q| !rel(sf, *from, q))
        }
        (Condition::FForth, Witness::History { at, history }) => {
            df.class(map.apply(*at)).contains(history.0) && !future_forth_at(sf, df, map, *at, *history)
        }
        (Condition::FBack, Witness::History { at, history }) => {
            sf.class(*at).contains(history.0) && !future_back_at(sf, df, map, *at, *history)
        }
        (Condition::Valuation, Witness::Atom { at, atom }) => {
            src.holds_atom(atom, *at) != dst.holds_atom(atom, map.apply(*at))
        }
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub surjective: bool,
    pub max_points: usize,
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            surjective: false,
            max_points: DEFAULT_SEARCH_POINTS,
            limit: None,
        }
    }
}

struct Search<'a> {
    src: &'a Frame,
    dst: &'a Frame,
    lang: Language,
    surjective: bool,
    limit: Option<usize>,
    found: Vec<PointMap>,
}

impl Search<'_> {
    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    /// Forward conditions between the newly assigned point and earlier ones.
    fn consistent(&self, images: &[PointId]) -> bool {
        let i = PointId(images.len() - 1);
        let fi = images[i.0];
        (0..images.len()).map(PointId).all(|j| {
            let fj = images[j.0];
            (!self.src.precedes(j, i) || self.dst.precedes(fj, fi))
                && (!self.src.precedes(i, j) || self.dst.precedes(fi, fj))
                && (!self.src.same_moment(i, j) || self.dst.same_moment(fi, fj))
        })
    }

    fn extend(&mut self, images: &mut Vec<PointId>) {
        if self.full() {
            return;
        }
        if images.len() == self.src.num_points() {
            let map = PointMap::new(images.clone());
            if self.surjective && !map.is_surjective(self.dst) {
                return;
            }
            if frame_outcomes(self.src, self.dst, &map, self.lang)
                .iter()
                .all(|o| o.witness.is_none())
            {
                self.found.push(map);
            }
            return;
        }
        for q in self.dst.points() {
            images.push(q);
            if self.consistent(images) {
                self.extend(images);
            }
            images.pop();
        }
    }
}

/// All frame p-morphisms from `src` to `dst`, in lexicographic order of
/// their image vectors.
pub fn search_pmorphisms(src: &Frame, dst: &Frame, lang: Language, opts: &SearchOptions) -> Result<Vec<PointMap>> {
    for (what, n) in [("source points", src.num_points()), ("target points", dst.num_points())] {
        if n > opts.max_points {
            return Err(Error::Bound {
                what,
                needed: n,
                bound: opts.max_points,
            });
        }
    }
    let branches = par::map_range(0..dst.num_points(), |first| {
        let mut search = Search {
            src,
            dst,
            lang,
            surjective: opts.surjective,
            limit: opts.limit,
            found: Vec::new(),
        };
        let mut images = vec![PointId(first)];
        search.extend(&mut images);
        search.found
    });
    let mut all: Vec<PointMap> = branches.into_iter().flatten().collect();
    if let Some(l) = opts.limit {
        all.truncate(l);
    }
    Ok(all)
}

/// `V(p) = { x : f(x) ∈ V'(p) }` for every atom of the target valuation.
pub fn pullback_valuation(dst_valuation: &Valuation, map: &PointMap) -> Valuation {
    dst_valuation
        .iter()
        .map(|(atom, set)| {
            let pre = (0..map.len())
                .map(PointId)
                .filter(|&p| set.contains(&map.apply(p)))
                .collect();
            (atom.clone(), pre)
        })
        .collect::<BTreeMap<_, _>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{IndistFunction, Tree};

    fn frame(moments: &[&str], edges: &[(&str, &str)], classes: &[(&str, &[&[&str]])]) -> Frame {
        let tree = Tree::new(moments, edges).unwrap();
        let mut indist = IndistFunction::default();
        for (m, blocks) in classes {
            indist.classes_at.insert(
                m.to_string(),
                blocks.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect(),
            );
        }
        Frame::new(tree, &indist).unwrap()
    }

    fn collapse_pair() -> (Frame, Frame, PointMap) {
        let src = frame(
            &["r", "a1", "a2"],
            &[("r", "a1"), ("r", "a2")],
            &[("r", &[&["a1", "a2"]]), ("a1", &[&["a1"]]), ("a2", &[&["a2"]])],
        );
        let dst = frame(&["r'", "a'"], &[("r'", "a'")], &[("r'", &[&["a'"]]), ("a'", &[&["a'"]])]);
        let doc: MapDoc = serde_json::from_str(
            r#"[[["r","a1"],["r'","a'"]],[["a1","a1"],["a'","a'"]],[["a2","a2"],["a'","a'"]]]"#,
        )
        .unwrap();
        let map = PointMap::from_doc(&src, &dst, &doc).unwrap();
        (src, dst, map)
    }

    fn split_merge() -> (Frame, Frame, PointMap) {
        let edges = [("r", "a"), ("r", "b")];
        let src = frame(
            &["r", "a", "b"],
            &edges,
            &[("r", &[&["a"], &["b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])],
        );
        let dst = frame(
            &["r", "a", "b"],
            &edges,
            &[("r", &[&["a", "b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])],
        );
        let doc: MapDoc = serde_json::from_str(
            r#"[[["r","a"],["r","a"]],[["r","b"],["r","a"]],[["a","a"],["a","a"]],[["b","b"],["b","b"]]]"#,
        )
        .unwrap();
        let map = PointMap::from_doc(&src, &dst, &doc).unwrap();
        (src, dst, map)
    }

    #[test]
    fn identity_passes_everything() {
        let (src, _, _) = collapse_pair();
        let id = PointMap::identity(&src);
        assert!(check_frame_pmorphism(&src, &src, &id, Language::LF).unwrap().passed());
        assert!(check_set_characterization(&src, &src, &id).unwrap());
    }

    #[test]
    fn branch_collapse_passes_all_conditions() {
        let (src, dst, map) = collapse_pair();
        let report = check_frame_pmorphism(&src, &dst, &map, Language::LF).unwrap();
        assert_eq!(report.outcomes.len(), 7);
        assert!(report.passed(), "{}", report.render(&src, &dst));
        assert!(check_set_characterization(&src, &dst, &map).unwrap());
    }

    #[test]
    fn split_merge_fails_g_back() {
        let (src, dst, map) = split_merge();
        let report = check_frame_pmorphism(&src, &dst, &map, Language::L).unwrap();
        let g_back = report.outcome(Condition::GBack).unwrap();
        let ra = src.resolve(&"r/a".parse().unwrap()).unwrap();
        let rb = src.resolve(&"r/b".parse().unwrap()).unwrap();
        let aa = dst.resolve(&"a/a".parse().unwrap()).unwrap();
        let bb = dst.resolve(&"b/b".parse().unwrap()).unwrap();
        // first in canonical order; (r/b, a/a) is the symmetric counterexample
        assert_eq!(g_back.witness, Some(Witness::Unanswered { from: ra, target: bb }));
        let other = Witness::Unanswered { from: rb, target: aa };
        assert!(!check_set_characterization(&src, &dst, &map).unwrap());
        let (sm, dm) = (
            Model::new(src, Valuation::new()).unwrap(),
            Model::new(dst, Valuation::new()).unwrap(),
        );
        for (c, w) in report.failures() {
            assert!(replay_witness(&sm, &dm, &map, c, w), "{c}");
        }
        assert!(replay_witness(&sm, &dm, &map, Condition::GBack, &other));
        let bogus = Witness::Unanswered { from: rb, target: bb };
        assert!(!replay_witness(&sm, &dm, &map, Condition::GBack, &bogus));
    }

    #[test]
    fn model_pmorphism_valuation_condition() {
        let (src, dst, map) = collapse_pair();
        let mut v_dst = Valuation::new();
        v_dst.insert("p".into(), [dst.resolve(&"a'/a'".parse().unwrap()).unwrap()].into());
        let pulled = pullback_valuation(&v_dst, &map);
        let a1 = src.resolve(&"a1/a1".parse().unwrap()).unwrap();
        let a2 = src.resolve(&"a2/a2".parse().unwrap()).unwrap();
        assert_eq!(pulled["p"], [a1, a2].into());

        let dm = Model::new(dst, v_dst).unwrap();
        let sm = Model::new(src.clone(), pulled).unwrap();
        assert!(check_model_pmorphism(&sm, &dm, &map, Language::LF).unwrap().passed());

        let mut only_a1 = Valuation::new();
        only_a1.insert("p".into(), [a1].into());
        let sm = Model::new(src, only_a1).unwrap();
        let report = check_model_pmorphism(&sm, &dm, &map, Language::LF).unwrap();
        let w = report.outcome(Condition::Valuation).unwrap().witness.clone().unwrap();
        assert_eq!(w, Witness::Atom { at: a2, atom: "p".into() });
        assert!(replay_witness(&sm, &dm, &map, Condition::Valuation, &w));
    }

    #[test]
    fn pullback_edge_cases() {
        let (src, _, map) = collapse_pair();
        assert!(pullback_valuation(&Valuation::new(), &map).is_empty());
        let mut v = Valuation::new();
        v.insert("q".into(), [PointId(0), PointId(2)].into());
        assert_eq!(pullback_valuation(&v, &PointMap::identity(&src)), v);
    }

    #[test]
    fn partial_maps_are_errors() {
        let (src, dst, _) = collapse_pair();
        let doc: MapDoc = serde_json::from_str(r#"[[["r","a1"],["r'","a'"]]]"#).unwrap();
        assert!(matches!(PointMap::from_doc(&src, &dst, &doc), Err(Error::PartialMap(_))));
        let short = PointMap::new(vec![PointId(0)]);
        assert!(matches!(
            check_frame_pmorphism(&src, &dst, &short, Language::L),
            Err(Error::PartialMap(_))
        ));
    }

    #[test]
    fn search_single_point() {
        let one = frame(&["r"], &[], &[("r", &[&["r"]])]);
        let found = search_pmorphisms(&one, &one, Language::LF, &SearchOptions::default()).unwrap();
        assert_eq!(found, vec![PointMap::identity(&one)]);
    }

    #[test]
    fn search_finds_collapse() {
        let (src, dst, map) = collapse_pair();
        let opts = SearchOptions {
            surjective: true,
            ..Default::default()
        };
        let found = search_pmorphisms(&src, &dst, Language::LF, &opts).unwrap();
        assert!(found.contains(&map));
    }

    #[test]
    fn search_chain_to_antichain() {
        let chain = frame(&["a", "b"], &[("a", "b")], &[("a", &[&["b"]]), ("b", &[&["b"]])]);
        let anti = frame(&["x", "y"], &[], &[("x", &[&["x"]]), ("y", &[&["y"]])]);
        let found = search_pmorphisms(&chain, &anti, Language::L, &SearchOptions::default()).unwrap();
        // brute force over all 4 maps: none preserves a < b
        let mut brute = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                let m = PointMap::new(vec![PointId(x), PointId(y)]);
                let ok = check_frame_pmorphism(&chain, &anti, &m, Language::L).unwrap().passed();
                if ok {
                    brute.push(m);
                }
            }
        }
        assert_eq!(found, brute);
        assert!(found.is_empty());
    }

    #[test]
    fn search_respects_bound_and_limit() {
        let (src, dst, _) = collapse_pair();
        let opts = SearchOptions {
            max_points: 2,
            ..Default::default()
        };
        assert!(matches!(
            search_pmorphisms(&src, &dst, Language::L, &opts),
            Err(Error::Bound { needed: 3, .. })
        ));
        let opts = SearchOptions {
            limit: Some(1),
            ..Default::default()
        };
        assert_eq!(search_pmorphisms(&src, &src, Language::L, &opts).unwrap().len(), 1);
    }
}
