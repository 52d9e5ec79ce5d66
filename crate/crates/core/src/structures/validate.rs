use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{Frame, FrameDoc, HistoryId, IndistFunction, Model, ModelDoc, MomentId, PointRef, Tree, Valuation};

/// A broken structural invariant, with the data that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    EmptyTree,
    DuplicateMoment { moment: String },
    UnknownEdgeEndpoint { parent: String, child: String, missing: String },
    DuplicateEdge { parent: String, child: String },
    /// `path` lists a cycle in edge direction; its first moment is repeated at the end.
    Cycle { path: Vec<String> },
    /// `first` and `second` both precede `moment` but are incomparable.
    DownwardLinearity { first: String, second: String, moment: String },
    /// `parent < via < child`, so the edge is not an immediate succession.
    NonImmediateEdge { parent: String, child: String, via: String },
    MissingIndist { moment: String },
    UnknownIndistMoment { moment: String },
    EmptyBlock { moment: String },
    UnknownHistory { moment: String, leaf: String },
    /// A block at `moment` names a history that does not pass through it.
    ForeignHistory { moment: String, leaf: String },
    /// A history through `moment` that no block contains.
    UncoveredHistory { moment: String, leaf: String },
    /// A history listed in two blocks at the same moment.
    DuplicateHistory { moment: String, leaf: String },
    /// `h` and `k` share a class at `later` but not at `earlier < later`.
    Coherence { h: String, k: String, later: String, earlier: String },
    InvalidValuationPoint { atom: String, point: String, reason: String },
}

impl Violation {
    /// Stable name of the broken invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::EmptyTree => "empty-tree",
            Violation::DuplicateMoment { .. } => "duplicate-moment",
            Violation::UnknownEdgeEndpoint { .. } => "unknown-moment",
            Violation::DuplicateEdge { .. } => "duplicate-edge",
            Violation::Cycle { .. } => "irreflexivity",
            Violation::DownwardLinearity { .. } => "downward-linearity",
            Violation::NonImmediateEdge { .. } => "immediate-succession",
            Violation::MissingIndist { .. } | Violation::UnknownIndistMoment { .. } => "indist-domain",
            Violation::EmptyBlock { .. } => "partition-empty-block",
            Violation::UnknownHistory { .. } => "unknown-history",
            Violation::ForeignHistory { .. } | Violation::UncoveredHistory { .. } => "partition-cover",
            Violation::DuplicateHistory { .. } => "partition-disjoint",
            Violation::Coherence { .. } => "coherence",
            Violation::InvalidValuationPoint { .. } => "valuation-point",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Violation::EmptyTree => write!(f, "the tree has no moments"),
            Violation::DuplicateMoment { moment } => write!(f, "moment {moment} declared twice"),
            Violation::UnknownEdgeEndpoint { parent, child, missing } => {
                write!(f, "edge ({parent},{child}) mentions undeclared moment {missing}")
            }
            Violation::DuplicateEdge { parent, child } => write!(f, "edge ({parent},{child}) listed twice"),
            Violation::Cycle { path } => write!(f, "cycle {}", path.join(" < ")),
            Violation::DownwardLinearity { first, second, moment } => write!(
                f,
                "{first} < {moment} and {second} < {moment} but {first}, {second} are incomparable"
            ),
            Violation::NonImmediateEdge { parent, child, via } => {
                write!(f, "edge ({parent},{child}) skips {via}")
            }
            Violation::MissingIndist { moment } => write!(f, "no classes given for moment {moment}"),
            Violation::UnknownIndistMoment { moment } => {
                write!(f, "classes given for undeclared moment {moment}")
            }
            Violation::EmptyBlock { moment } => write!(f, "empty block at {moment}"),
            Violation::UnknownHistory { moment, leaf } => {
                write!(f, "{leaf} (at {moment}) is not the leaf of any history")
            }
            Violation::ForeignHistory { moment, leaf } => {
                write!(f, "history {leaf} does not pass through {moment}")
            }
            Violation::UncoveredHistory { moment, leaf } => {
                write!(f, "history {leaf} passes through {moment} but is in no block")
            }
            Violation::DuplicateHistory { moment, leaf } => {
                write!(f, "history {leaf} appears in two blocks at {moment}")
            }
            Violation::Coherence { h, k, later, earlier } => write!(
                f,
                "{h} and {k} are indistinguishable at {later} but not at {earlier} < {later}"
            ),
            Violation::InvalidValuationPoint { atom, point, reason } => {
                write!(f, "V({atom}) contains {point}: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<_> = self
            .violations
            .iter()
            .map(|v| {
                serde_json::json!({
                    "violation": v.name(),
                    "message": v.to_string(),
                    "witness": v,
                })
            })
            .collect();
        serde_json::json!({ "ok": self.is_ok(), "violations": items })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

pub fn validate_frame(doc: &FrameDoc) -> ValidationReport {
    let mut violations = Vec::new();
    build_frame_doc(doc, &mut violations);
    ValidationReport { violations }
}

pub fn validate_model(doc: &ModelDoc) -> ValidationReport {
    let mut violations = Vec::new();
    build_model_doc(doc, &mut violations);
    ValidationReport { violations }
}

pub(super) fn build_tree(moments: &[String], edges: &[[String; 2]], out: &mut Vec<Violation>) -> Option<Tree> {
    if moments.is_empty() {
        out.push(Violation::EmptyTree);
        return None;
    }
    let mut names: Vec<String> = moments.to_vec();
    names.sort();
    let mut seen = HashSet::new();
    for m in &names {
        if !seen.insert(m.as_str()) {
            out.push(Violation::DuplicateMoment { moment: m.clone() });
        }
    }
    names.dedup();
    let n = names.len();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    // parents in edge order, so witnesses mention moments as the document does
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen_edges = HashSet::new();
    let mut cyclic = false;
    for [p, c] in edges {
        let missing = [p, c].into_iter().find(|m| !index.contains_key(m.as_str()));
        if let Some(m) = missing {
            out.push(Violation::UnknownEdgeEndpoint {
                parent: p.clone(),
                child: c.clone(),
                missing: m.clone(),
            });
            continue;
        }
        let (pi, ci) = (index[p.as_str()], index[c.as_str()]);
        if !seen_edges.insert((pi, ci)) {
            out.push(Violation::DuplicateEdge {
                parent: p.clone(),
                child: c.clone(),
            });
            continue;
        }
        if pi == ci {
            out.push(Violation::Cycle {
                path: vec![p.clone(), p.clone()],
            });
            cyclic = true;
            continue;
        }
        parents[ci].push(pi);
        children[pi].push(ci);
    }
    if cyclic {
        return None;
    }

    // Kahn's algorithm; whatever survives lies on or above a cycle.
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(v) = stack.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                stack.push(c);
            }
        }
    }
    if order.len() < n {
        let remaining: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
        let start = remaining.iter().position(|&r| r).expect("some moment remains");
        // Walk backwards through remaining parents until a moment repeats.
        let mut walk = vec![start];
        let mut pos = HashMap::from([(start, 0usize)]);
        let mut cur = start;
        let cycle_start = loop {
            let next = *parents[cur]
                .iter()
                .find(|&&p| remaining[p])
                .expect("a remaining moment keeps a remaining parent");
            if let Some(&i) = pos.get(&next) {
                break i;
            }
            pos.insert(next, walk.len());
            walk.push(next);
            cur = next;
        };
        let mut path: Vec<String> = walk[cycle_start..].iter().rev().map(|&i| names[i].clone()).collect();
        path.push(path[0].clone());
        out.push(Violation::Cycle { path });
        return None;
    }

    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for &v in &order {
        for &p in &parents[v].clone() {
            let mut acc = below[p].clone();
            acc.insert(p);
            below[v].union_with(&acc);
        }
    }

    let mut parent = vec![None; n];
    let mut broken = false;
    for a in 0..n {
        let ps = &parents[a];
        if ps.len() <= 1 {
            parent[a] = ps.first().map(|&p| MomentId(p));
            continue;
        }
        let mut reported = false;
        'pairs: for (i, &b) in ps.iter().enumerate() {
            for &c in &ps[i + 1..] {
                if !below[c].contains(b) && !below[b].contains(c) {
                    out.push(Violation::DownwardLinearity {
                        first: names[b].clone(),
                        second: names[c].clone(),
                        moment: names[a].clone(),
                    });
                    broken = true;
                    reported = true;
                    break 'pairs;
                }
            }
        }
        if !reported {
            // all parents comparable: the greatest is the immediate one
            let top = *ps
                .iter()
                .find(|&&b| ps.iter().all(|&c| c == b || below[b].contains(c)))
                .expect("a chain has a maximum");
            for &b in ps {
                if b != top {
                    out.push(Violation::NonImmediateEdge {
                        parent: names[b].clone(),
                        child: names[a].clone(),
                        via: names[top].clone(),
                    });
                }
            }
            parent[a] = Some(MomentId(top));
        }
    }
    if broken {
        return None;
    }
    Some(Tree::from_parent(names, parent))
}

pub(super) fn build_frame(tree: Tree, indist: &IndistFunction, out: &mut Vec<Violation>) -> Option<Frame> {
    let before = out.len();
    for m in indist.classes_at.keys() {
        if tree.moment(m).is_none() {
            out.push(Violation::UnknownIndistMoment { moment: m.clone() });
        }
    }
    let nh = tree.histories().len();
    let mut classes: Vec<Vec<FixedBitSet>> = Vec::with_capacity(tree.len());
    for t in tree.moments() {
        let name = tree.name(t);
        let Some(blocks) = indist.classes_at.get(name) else {
            out.push(Violation::MissingIndist { moment: name.to_owned() });
            classes.push(Vec::new());
            continue;
        };
        let mut assigned = vec![false; nh];
        let mut bits = Vec::new();
        for block in blocks {
            if block.is_empty() {
                out.push(Violation::EmptyBlock { moment: name.to_owned() });
                continue;
            }
            let mut set = FixedBitSet::with_capacity(nh);
            for leaf in block {
                let Some(h) = tree.history_by_leaf_name(leaf) else {
                    out.push(Violation::UnknownHistory {
                        moment: name.to_owned(),
                        leaf: leaf.clone(),
                    });
                    continue;
                };
                if !tree.passes_through(h, t) {
                    out.push(Violation::ForeignHistory {
                        moment: name.to_owned(),
                        leaf: leaf.clone(),
                    });
                } else if assigned[h.0] {
                    out.push(Violation::DuplicateHistory {
                        moment: name.to_owned(),
                        leaf: leaf.clone(),
                    });
                } else {
                    assigned[h.0] = true;
                    set.insert(h.0);
                }
            }
            if !set.is_clear() {
                bits.push(set);
            }
        }
        for h in tree.histories_through(t) {
            if !assigned[h.0] {
                out.push(Violation::UncoveredHistory {
                    moment: name.to_owned(),
                    leaf: tree.leaf_name(h).to_owned(),
                });
            }
        }
        bits.sort_by_key(|b| b.minimum());
        classes.push(bits);
    }
    if out.len() > before {
        return None;
    }

    let block_of = |t: MomentId, h: usize| classes[t.0].iter().position(|b| b.contains(h));
    for t in tree.moments() {
        for block in &classes[t.0] {
            let h = block.minimum().expect("nonempty block");
            for s in tree.ancestors(t) {
                let bh = block_of(s, h);
                if let Some(k) = block.ones().find(|&k| block_of(s, k) != bh) {
                    out.push(Violation::Coherence {
                        h: tree.leaf_name(HistoryId(h)).to_owned(),
                        k: tree.leaf_name(HistoryId(k)).to_owned(),
                        later: tree.name(t).to_owned(),
                        earlier: tree.name(s).to_owned(),
                    });
                    break;
                }
            }
        }
    }
    if out.len() > before {
        return None;
    }
    Some(Frame::from_classes(tree, classes))
}

pub(super) fn build_frame_doc(doc: &FrameDoc, out: &mut Vec<Violation>) -> Option<Frame> {
    let tree = build_tree(&doc.moments, &doc.edges, out)?;
    let indist = IndistFunction {
        classes_at: doc.indist.clone(),
    };
    let frame = build_frame(tree, &indist, out)?;
    out.is_empty().then_some(frame)
}

pub(super) fn build_model_doc(doc: &ModelDoc, out: &mut Vec<Violation>) -> Option<Model> {
    let frame = build_frame_doc(&doc.frame, out)?;
    let mut valuation = Valuation::new();
    for (atom, pts) in &doc.valuation {
        let mut set = BTreeSet::new();
        for pd in pts {
            let r = PointRef::from(pd);
            match frame.resolve(&r) {
                Ok(p) => {
                    set.insert(p);
                }
                Err(e) => out.push(Violation::InvalidValuationPoint {
                    atom: atom.clone(),
                    point: r.to_string(),
                    reason: e.to_string(),
                }),
            }
        }
        valuation.insert(atom.clone(), set);
    }
    out.is_empty().then(|| Model { frame, valuation })
}
