//! Finite trees, histories, indistinguishability functions, frames and models.
//!
//! Everything here is built once from a document and is immutable afterwards.
//! Moments, histories and points are addressed by dense indices whose order
//! is the canonical (lexicographic) order of their names:
//!
//! * moments are sorted by name,
//! * histories by the name of their leaf,
//! * the classes at a moment by their smallest leaf,
//! * points by `(moment, representative leaf)`.

mod doc;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;

pub use doc::{FrameDoc, MapDoc, ModelDoc, PointDoc, RelationDoc};
pub use validate::{validate_frame, validate_model, ValidationReport, Violation};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistoryId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub usize);

/// A maximal chain of a finite tree, i.e. the down-set of a leaf.
#[derive(Clone, Debug)]
pub struct History {
    pub leaf: MomentId,
    /// Ordered from the minimal moment up to the leaf.
    pub moments: Vec<MomentId>,
}

/// A validated finite tree (forests allowed).
#[derive(Clone, Debug)]
pub struct Tree {
    names: Vec<String>,
    index: HashMap<String, MomentId>,
    parent: Vec<Option<MomentId>>,
    children: Vec<Vec<MomentId>>,
    /// `later[t]` holds every `s` with `t < s`.
    later: Vec<FixedBitSet>,
    histories: Vec<History>,
    /// `through[t]` holds the histories passing through `t`.
    through: Vec<FixedBitSet>,
    history_of_leaf: Vec<Option<HistoryId>>,
}

impl Tree {
    /// Builds a tree from moment names and immediate-successor edges.
    pub fn new<S: AsRef<str>>(moments: &[S], edges: &[(S, S)]) -> Result<Tree, ValidationReport> {
        let moments: Vec<String> = moments.iter().map(|m| m.as_ref().to_owned()).collect();
        let edges: Vec<[String; 2]> = edges
            .iter()
            .map(|(a, b)| [a.as_ref().to_owned(), b.as_ref().to_owned()])
            .collect();
        let mut violations = Vec::new();
        match validate::build_tree(&moments, &edges, &mut violations) {
            Some(tree) if violations.is_empty() => Ok(tree),
            _ => Err(ValidationReport { violations }),
        }
    }

    pub(crate) fn from_parent(names: Vec<String>, parent: Vec<Option<MomentId>>) -> Tree {
        let n = names.len();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), MomentId(i)))
            .collect();
        let mut children = vec![Vec::new(); n];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p.0].push(MomentId(c));
            }
        }
        let mut later = vec![FixedBitSet::with_capacity(n); n];
        for c in 0..n {
            let mut cur = parent[c];
            while let Some(p) = cur {
                later[p.0].insert(c);
                cur = parent[p.0];
            }
        }
        let mut histories = Vec::new();
        let mut history_of_leaf = vec![None; n];
        for leaf in 0..n {
            if !children[leaf].is_empty() {
                continue;
            }
            let mut moments = vec![MomentId(leaf)];
            let mut cur = parent[leaf];
            while let Some(p) = cur {
                moments.push(p);
                cur = parent[p.0];
            }
            moments.reverse();
            history_of_leaf[leaf] = Some(HistoryId(histories.len()));
            histories.push(History {
                leaf: MomentId(leaf),
                moments,
            });
        }
        let mut through = vec![FixedBitSet::with_capacity(histories.len()); n];
        for (h, hist) in histories.iter().enumerate() {
            for m in &hist.moments {
                through[m.0].insert(h);
            }
        }
        Tree {
            names,
            index,
            parent,
            children,
            later,
            histories,
            through,
            history_of_leaf,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn moments(&self) -> impl Iterator<Item = MomentId> + '_ {
        (0..self.names.len()).map(MomentId)
    }

    pub fn name(&self, t: MomentId) -> &str {
        &self.names[t.0]
    }

    pub fn moment(&self, name: &str) -> Option<MomentId> {
        self.index.get(name).copied()
    }

    pub fn parent(&self, t: MomentId) -> Option<MomentId> {
        self.parent[t.0]
    }

    pub fn children(&self, t: MomentId) -> &[MomentId] {
        &self.children[t.0]
    }

    /// `t < s` in the transitive closure of the edges.
    pub fn less(&self, t: MomentId, s: MomentId) -> bool {
        self.later[t.0].contains(s.0)
    }

    pub fn later(&self, t: MomentId) -> impl Iterator<Item = MomentId> + '_ {
        self.later[t.0].ones().map(MomentId)
    }

    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    pub fn history(&self, h: HistoryId) -> &History {
        &self.histories[h.0]
    }

    pub fn history_of_leaf(&self, leaf: MomentId) -> Option<HistoryId> {
        self.history_of_leaf[leaf.0]
    }

    pub fn history_by_leaf_name(&self, leaf: &str) -> Option<HistoryId> {
        self.moment(leaf).and_then(|m| self.history_of_leaf(m))
    }

    pub fn leaf_name(&self, h: HistoryId) -> &str {
        self.name(self.histories[h.0].leaf)
    }

    pub fn passes_through(&self, h: HistoryId, t: MomentId) -> bool {
        self.through[t.0].contains(h.0)
    }

    /// Histories through `t`, in canonical order.
    pub fn histories_through(&self, t: MomentId) -> impl Iterator<Item = HistoryId> + '_ {
        self.through[t.0].ones().map(HistoryId)
    }

    /// Strict predecessors of `t`, nearest first.
    pub fn ancestors(&self, t: MomentId) -> impl Iterator<Item = MomentId> + '_ {
        std::iter::successors(self.parent[t.0], |p| self.parent[p.0])
    }
}

/// The raw form of an indistinguishability function: for each moment, a
/// partition of the leaves of the histories through it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndistFunction {
    pub classes_at: BTreeMap<String, Vec<Vec<String>>>,
}

/// Two histories share a class at `t` iff they are equal or share a moment
/// strictly after `t`.
pub fn undividedness_indist(tree: &Tree) -> IndistFunction {
    let mut classes_at = BTreeMap::new();
    for t in tree.moments() {
        let mut blocks: Vec<Vec<String>> = Vec::new();
        if tree.children(t).is_empty() {
            let h = tree.history_of_leaf(t).expect("leaf has a history");
            blocks.push(vec![tree.leaf_name(h).to_owned()]);
        } else {
            // Histories through t sharing a later moment are exactly those
            // running through the same child of t.
            for &c in tree.children(t) {
                blocks.push(
                    tree.histories_through(c)
                        .map(|h| tree.leaf_name(h).to_owned())
                        .collect(),
                );
            }
        }
        classes_at.insert(tree.name(t).to_owned(), blocks);
    }
    IndistFunction { classes_at }
}

#[derive(Clone, Debug)]
struct PointData {
    moment: MomentId,
    class: usize,
}

/// A tree together with a validated indistinguishability function.
#[derive(Clone, Debug)]
pub struct Frame {
    tree: Tree,
    /// Canonically ordered blocks per moment.
    classes: Vec<Vec<FixedBitSet>>,
    /// `class_of[t][h]` is the block of `h` at `t`, when `h` passes through `t`.
    class_of: Vec<Vec<Option<usize>>>,
    points: Vec<PointData>,
    point_at: Vec<Vec<PointId>>,
}

/// Textual point reference: a moment and the leaf of some history in the class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub moment: String,
    pub rep: String,
}

impl PointRef {
    pub fn new(moment: impl Into<String>, rep: impl Into<String>) -> Self {
        PointRef {
            moment: moment.into(),
            rep: rep.into(),
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.moment, self.rep)
    }
}

impl std::str::FromStr for PointRef {
    type Err = Error;

    /// Parses `moment/rep`, splitting at the last `/`.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.rsplit_once('/') {
            Some((m, r)) if !m.is_empty() && !r.is_empty() => Ok(PointRef::new(m, r)),
            _ => Err(Error::PointSyntax(s.to_owned())),
        }
    }
}

impl Frame {
    pub fn new(tree: Tree, indist: &IndistFunction) -> Result<Frame, ValidationReport> {
        let mut violations = Vec::new();
        match validate::build_frame(tree, indist, &mut violations) {
            Some(frame) if violations.is_empty() => Ok(frame),
            _ => Err(ValidationReport { violations }),
        }
    }

    /// The frame whose indistinguishability is undividedness.
    pub fn undivided(tree: Tree) -> Frame {
        let indist = undividedness_indist(&tree);
        Frame::new(tree, &indist).expect("undividedness is a valid indistinguishability function")
    }

    pub(crate) fn from_classes(tree: Tree, classes: Vec<Vec<FixedBitSet>>) -> Frame {
        let n = tree.len();
        let nh = tree.histories().len();
        let mut class_of = vec![vec![None; nh]; n];
        let mut points = Vec::new();
        let mut point_at = Vec::with_capacity(n);
        for t in 0..n {
            let mut at = Vec::with_capacity(classes[t].len());
            for (b, block) in classes[t].iter().enumerate() {
                for h in block.ones() {
                    class_of[t][h] = Some(b);
                }
                at.push(PointId(points.len()));
                points.push(PointData {
                    moment: MomentId(t),
                    class: b,
                });
            }
            point_at.push(at);
        }
        Frame {
            tree,
            classes,
            class_of,
            points,
            point_at,
        }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = PointId> {
        (0..self.points.len()).map(PointId)
    }

    pub fn moment_of(&self, p: PointId) -> MomentId {
        self.points[p.0].moment
    }

    /// The class of `p`, as a set of history indices.
    pub fn class(&self, p: PointId) -> &FixedBitSet {
        let d = &self.points[p.0];
        &self.classes[d.moment.0][d.class]
    }

    pub fn class_histories(&self, p: PointId) -> impl Iterator<Item = HistoryId> + '_ {
        self.class(p).ones().map(HistoryId)
    }

    /// Canonical representative: the smallest leaf in the class.
    pub fn rep(&self, p: PointId) -> HistoryId {
        HistoryId(self.class(p).minimum().expect("classes are nonempty"))
    }

    /// Number of classes at `t`.
    pub fn num_classes(&self, t: MomentId) -> usize {
        self.classes[t.0].len()
    }

    pub fn classes_at(&self, t: MomentId) -> &[FixedBitSet] {
        &self.classes[t.0]
    }

    /// Points sharing moment `t`, in canonical order.
    pub fn points_at(&self, t: MomentId) -> &[PointId] {
        &self.point_at[t.0]
    }

    /// The point `(t, [h]_{I_t})`; `None` when `h` does not pass through `t`.
    pub fn point_of(&self, t: MomentId, h: HistoryId) -> Option<PointId> {
        self.class_of[t.0][h.0].map(|b| self.point_at[t.0][b])
    }

    /// The relation ≺: strictly earlier moment and a superset class.
    pub fn precedes(&self, p: PointId, q: PointId) -> bool {
        self.tree.less(self.moment_of(p), self.moment_of(q)) && self.class(q).is_subset(self.class(p))
    }

    /// The relation ∼: same moment.
    pub fn same_moment(&self, p: PointId, q: PointId) -> bool {
        self.moment_of(p) == self.moment_of(q)
    }

    pub fn point_ref(&self, p: PointId) -> PointRef {
        PointRef::new(
            self.tree.name(self.moment_of(p)),
            self.tree.leaf_name(self.rep(p)),
        )
    }

    pub fn resolve(&self, r: &PointRef) -> Result<PointId, Error> {
        let t = self
            .tree
            .moment(&r.moment)
            .ok_or_else(|| Error::UnknownMoment(r.moment.clone()))?;
        let h = self
            .tree
            .history_by_leaf_name(&r.rep)
            .ok_or_else(|| Error::InvalidPoint(r.to_string(), "representative is not a leaf"))?;
        self.point_of(t, h).ok_or_else(|| {
            Error::InvalidPoint(r.to_string(), "history does not pass through the moment")
        })
    }

    pub fn histories_through(&self, moment: &str) -> Result<Vec<&History>, Error> {
        let t = self
            .tree
            .moment(moment)
            .ok_or_else(|| Error::UnknownMoment(moment.to_owned()))?;
        Ok(self
            .tree
            .histories_through(t)
            .map(|h| self.tree.history(h))
            .collect())
    }

    /// The indistinguishability function in its raw, name-based form.
    pub fn indist(&self) -> IndistFunction {
        let mut classes_at = BTreeMap::new();
        for t in self.tree.moments() {
            let blocks = self.classes[t.0]
                .iter()
                .map(|b| b.ones().map(|h| self.tree.leaf_name(HistoryId(h)).to_owned()).collect())
                .collect();
            classes_at.insert(self.tree.name(t).to_owned(), blocks);
        }
        IndistFunction { classes_at }
    }

    pub fn to_doc(&self) -> FrameDoc {
        let t = &self.tree;
        let mut edges = Vec::new();
        for c in t.moments() {
            if let Some(p) = t.parent(c) {
                edges.push([t.name(p).to_owned(), t.name(c).to_owned()]);
            }
        }
        FrameDoc {
            moments: t.names.clone(),
            edges,
            indist: self.indist().classes_at,
        }
    }

    pub fn from_doc(doc: &FrameDoc) -> Result<Frame, ValidationReport> {
        let mut violations = Vec::new();
        match validate::build_frame_doc(doc, &mut violations) {
            Some(frame) if violations.is_empty() => Ok(frame),
            _ => Err(ValidationReport { violations }),
        }
    }

    pub fn describe_point(&self, p: PointId) -> String {
        let leaves: Vec<&str> = self
            .class_histories(p)
            .map(|h| self.tree.leaf_name(h))
            .collect();
        format!(
            "({}, {{{}}})",
            self.tree.name(self.moment_of(p)),
            leaves.join(",")
        )
    }
}

/// Assignment of atoms to sets of points.
pub type Valuation = BTreeMap<String, BTreeSet<PointId>>;

#[derive(Clone, Debug)]
pub struct Model {
    pub frame: Frame,
    pub valuation: Valuation,
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Model, Error> {
        let n = frame.num_points();
        for (atom, set) in &valuation {
            if let Some(p) = set.iter().find(|p| p.0 >= n) {
                return Err(Error::InvalidPoint(
                    format!("{atom}: #{}", p.0),
                    "point index out of range",
                ));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn holds_atom(&self, atom: &str, p: PointId) -> bool {
        self.valuation.get(atom).is_some_and(|s| s.contains(&p))
    }

    /// Atoms with a nonempty extension.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.valuation
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(a, _)| a.as_str())
    }

    pub fn to_doc(&self) -> ModelDoc {
        let valuation = self
            .valuation
            .iter()
            .map(|(a, set)| {
                let pts = set
                    .iter()
                    .map(|&p| PointDoc::from(self.frame.point_ref(p)))
                    .collect();
                (a.clone(), pts)
            })
            .collect();
        ModelDoc {
            frame: self.frame.to_doc(),
            valuation,
        }
    }

    pub fn from_doc(doc: &ModelDoc) -> Result<Model, ValidationReport> {
        let mut violations = Vec::new();
        match validate::build_model_doc(doc, &mut violations) {
            Some(model) if violations.is_empty() => Ok(model),
            _ => Err(ValidationReport { violations }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fork() -> Tree {
        Tree::new(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap()
    }

    fn frame(tree: Tree, classes: &[(&str, &[&[&str]])]) -> Frame {
        let mut indist = IndistFunction::default();
        for (m, blocks) in classes {
            indist.classes_at.insert(
                m.to_string(),
                blocks.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect(),
            );
        }
        Frame::new(tree, &indist).unwrap()
    }

    fn leaves<'a>(t: &'a Tree, hs: &[&History]) -> Vec<&'a str> {
        hs.iter().map(|h| t.name(h.leaf)).collect()
    }

    #[test]
    fn histories_of_chain_fork_and_forest() {
        let chain = Tree::new(&["r", "a"], &[("r", "a")]).unwrap();
        assert_eq!(chain.histories().len(), 1);
        let h = &chain.histories()[0];
        assert_eq!(chain.name(h.leaf), "a");
        assert_eq!(h.moments.iter().map(|&m| chain.name(m)).collect::<Vec<_>>(), ["r", "a"]);

        let fork = fork();
        let names: Vec<_> = fork.histories().iter().map(|h| fork.name(h.leaf)).collect();
        assert_eq!(names, ["a", "b"]);
        let r = fork.moment("r").unwrap();
        assert!(fork.histories().iter().all(|h| h.moments.contains(&r)));

        let forest = Tree::new::<&str>(&["x", "y"], &[]).unwrap();
        assert_eq!(forest.histories().len(), 2);
        assert!(forest.histories().iter().all(|h| h.moments.len() == 1));
    }

    #[test]
    fn histories_through_moments() {
        let f = Frame::undivided(fork());
        assert_eq!(leaves(f.tree(), &f.histories_through("r").unwrap()), ["a", "b"]);
        assert_eq!(leaves(f.tree(), &f.histories_through("a").unwrap()), ["a"]);
        let chain = Frame::undivided(Tree::new(&["r", "a", "c"], &[("r", "a"), ("a", "c")]).unwrap());
        assert_eq!(leaves(chain.tree(), &chain.histories_through("a").unwrap()), ["c"]);
        assert!(matches!(chain.histories_through("zz"), Err(Error::UnknownMoment(_))));
    }

    #[test]
    fn point_counts_follow_class_counts() {
        let merged = frame(fork(), &[("r", &[&["a", "b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        assert_eq!(merged.num_points(), 3);
        let split = frame(fork(), &[("r", &[&["a"], &["b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        assert_eq!(split.num_points(), 4);
        let single = Frame::undivided(Tree::new::<&str>(&["r"], &[]).unwrap());
        assert_eq!(single.num_points(), 1);
    }

    #[test]
    fn canonical_representatives_are_smallest_leaves() {
        let merged = frame(fork(), &[("r", &[&["b", "a"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        let refs: Vec<String> = merged.points().map(|p| merged.point_ref(p).to_string()).collect();
        assert_eq!(refs, ["a/a", "b/b", "r/a"]);
        // a non-canonical representative resolves to the same point
        let p = merged.resolve(&"r/b".parse().unwrap()).unwrap();
        assert_eq!(merged.point_ref(p).to_string(), "r/a");
    }

    #[test]
    fn precedes_examples() {
        let merged = frame(fork(), &[("r", &[&["a", "b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        let pt = |s: &str| merged.resolve(&s.parse().unwrap()).unwrap();
        assert!(merged.precedes(pt("r/a"), pt("a/a")));
        assert!(!merged.precedes(pt("r/a"), pt("r/a")));

        let split = frame(fork(), &[("r", &[&["a"], &["b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        let pt = |s: &str| split.resolve(&s.parse().unwrap()).unwrap();
        assert!(split.precedes(pt("r/a"), pt("a/a")));
        assert!(!split.precedes(pt("r/b"), pt("a/a")));
    }

    #[test]
    fn same_moment_examples() {
        let split = frame(fork(), &[("r", &[&["a"], &["b"]]), ("a", &[&["a"]]), ("b", &[&["b"]])]);
        let pt = |s: &str| split.resolve(&s.parse().unwrap()).unwrap();
        assert!(split.same_moment(pt("r/a"), pt("r/b")));
        assert!(!split.same_moment(pt("r/a"), pt("a/a")));
        assert!(split.same_moment(pt("a/a"), pt("a/a")));
    }

    #[test]
    fn undividedness_examples() {
        let u = undividedness_indist(&fork());
        assert_eq!(u.classes_at["r"], vec![vec!["a".to_string()], vec!["b".to_string()]]);

        let t = Tree::new(&["r", "m", "a", "b"], &[("r", "m"), ("m", "a"), ("m", "b")]).unwrap();
        let u = undividedness_indist(&t);
        assert_eq!(u.classes_at["r"], vec![vec!["a".to_string(), "b".to_string()]]);
        assert_eq!(u.classes_at["m"], vec![vec!["a".to_string()], vec!["b".to_string()]]);

        let chain = Tree::new(&["r", "a"], &[("r", "a")]).unwrap();
        let u = undividedness_indist(&chain);
        assert!(u.classes_at.values().all(|b| b == &vec![vec!["a".to_string()]]));
    }

    #[test]
    fn point_ref_syntax() {
        let r: PointRef = "m/x".parse().unwrap();
        assert_eq!(r, PointRef::new("m", "x"));
        assert!("m".parse::<PointRef>().is_err());
        assert!("/x".parse::<PointRef>().is_err());
    }
}
