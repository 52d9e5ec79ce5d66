//! Seeded random models and the exhaustive catalogue of small frames.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::structures::{undividedness_indist, Frame, IndistFunction, Model, MomentId, PointId, Tree, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndistPolicy {
    Undividedness,
    /// Random merges of undividedness blocks, propagated to earlier moments.
    Coarsened,
}

impl FromStr for IndistPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "undividedness" => Ok(IndistPolicy::Undividedness),
            "coarsened" => Ok(IndistPolicy::Coarsened),
            _ => Err(format!("unknown policy `{s}` (expected undividedness or coarsened)")),
        }
    }
}

impl fmt::Display for IndistPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndistPolicy::Undividedness => "undividedness",
            IndistPolicy::Coarsened => "coarsened",
        })
    }
}

/// `n` atom names: p, q, r, ... skipping the reserved `f` and `g`.
pub fn atom_names(n: usize) -> Vec<String> {
    const LETTERS: &str = "pqrstuvwxyzabcdehijklmno";
    (0..n)
        .map(|i| match LETTERS.chars().nth(i) {
            Some(c) => c.to_string(),
            None => format!("p{}", i - LETTERS.len()),
        })
        .collect()
}

fn random_tree<R: Rng>(rng: &mut R, n_moments: usize, branching: usize) -> Tree {
    let branching = branching.max(1);
    let mut parent: Vec<Option<MomentId>> = vec![None];
    let mut children = vec![0usize];
    for i in 1..n_moments {
        let open: Vec<usize> = (0..i).filter(|&p| children[p] < branching).collect();
        // the latest moment is always open, so `open` is never empty
        let p = *open.choose(rng).expect("an open moment");
        children[p] += 1;
        children.push(0);
        parent.push(Some(MomentId(p)));
    }
    named_tree(&parent)
}

/// Tree over `m0`, `m1`, ... from a parent array with `parent[i] < i`.
fn named_tree(parent: &[Option<MomentId>]) -> Tree {
    let names: Vec<String> = (0..parent.len()).map(|i| format!("m{i}")).collect();
    let edges: Vec<(String, String)> = parent
        .iter()
        .enumerate()
        .filter_map(|(c, p)| p.map(|p| (names[p.0].clone(), names[c].clone())))
        .collect();
    Tree::new(&names, &edges).expect("parent arrays describe forests")
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

fn coarsen<R: Rng>(rng: &mut R, tree: &Tree) -> IndistFunction {
    let base = undividedness_indist(tree);
    let nh = tree.histories().len();
    let mut uf: Vec<UnionFind> = tree.moments().map(|_| UnionFind((0..nh).collect())).collect();
    for t in tree.moments() {
        let blocks = &base.classes_at[tree.name(t)];
        let ids: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().map(|l| tree.history_by_leaf_name(l).unwrap().0).collect())
            .collect();
        for b in &ids {
            for w in b.windows(2) {
                uf[t.0].union(w[0], w[1]);
            }
        }
        if ids.len() >= 2 && rng.gen_bool(0.5) {
            let i = rng.gen_range(0..ids.len());
            let j = (i + rng.gen_range(1..ids.len())) % ids.len();
            uf[t.0].union(ids[i][0], ids[j][0]);
        }
    }
    // deepest first, so merges reach every earlier moment
    let mut order: Vec<MomentId> = tree.moments().collect();
    order.sort_by_key(|&t| std::cmp::Reverse(tree.ancestors(t).count()));
    for t in order {
        let Some(p) = tree.parent(t) else { continue };
        let through: Vec<usize> = tree.histories_through(t).map(|h| h.0).collect();
        for &h in &through {
            let r = uf[t.0].find(h);
            uf[p.0].union(h, r);
        }
    }
    let mut classes_at = BTreeMap::new();
    for t in tree.moments() {
        let mut blocks: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for h in tree.histories_through(t) {
            let r = uf[t.0].find(h.0);
            blocks.entry(r).or_default().push(tree.leaf_name(h).to_owned());
        }
        classes_at.insert(tree.name(t).to_owned(), blocks.into_values().collect());
    }
    IndistFunction { classes_at }
}

fn random_valuation<R: Rng>(rng: &mut R, frame: &Frame, n_atoms: usize) -> Valuation {
    atom_names(n_atoms)
        .into_iter()
        .map(|a| {
            let pts: BTreeSet<PointId> = frame.points().filter(|_| rng.gen_bool(0.5)).collect();
            (a, pts)
        })
        .collect()
}

/// A random model on moments `m0..`, each new moment hanging below an
/// earlier one with fewer than `branching` children.
pub fn gen_random_model(seed: u64, n_moments: usize, branching: usize, policy: IndistPolicy, n_atoms: usize) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(&mut rng, n_moments.max(1), branching);
    let frame = match policy {
        IndistPolicy::Undividedness => Frame::undivided(tree),
        IndistPolicy::Coarsened => {
            let indist = coarsen(&mut rng, &tree);
            Frame::new(tree, &indist).expect("coarsening keeps coherence")
        }
    };
    let valuation = random_valuation(&mut rng, &frame, n_atoms);
    Model::new(frame, valuation).expect("valuation uses frame points")
}

/// All partitions of `items`, blocks in order of first element.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            q.sort();
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        q.sort();
        out.push(q);
    }
    out
}

/// Shape of a forest up to isomorphism.
fn shape(parent: &[Option<MomentId>]) -> String {
    fn enc(t: usize, kids: &[Vec<usize>]) -> String {
        let mut parts: Vec<String> = kids[t].iter().map(|&c| enc(c, kids)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    let mut kids = vec![Vec::new(); parent.len()];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            kids[p.0].push(c);
        }
    }
    let mut roots: Vec<String> = (0..parent.len())
        .filter(|&i| parent[i].is_none())
        .map(|r| enc(r, &kids))
        .collect();
    roots.sort();
    roots.concat()
}

/// One parent array per forest shape with at most `max_moments` moments.
fn forests(max_moments: usize) -> Vec<Vec<Option<MomentId>>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Vec<Option<MomentId>>> = vec![vec![None]];
    while let Some(parent) = stack.pop() {
        if seen.insert(shape(&parent)) {
            if parent.len() < max_moments {
                let n = parent.len();
                stack.push([parent.clone(), vec![None]].concat());
                for p in 0..n {
                    stack.push([parent.clone(), vec![Some(MomentId(p))]].concat());
                }
            }
            out.push(parent);
        }
    }
    out.sort_by_key(|p| (p.len(), shape(p)));
    out
}

/// Every coherent indistinguishability function on `tree` with at most
/// `max_points` points.
fn indist_functions(tree: &Tree, max_points: usize) -> Vec<IndistFunction> {
    // children before parents
    let mut order: Vec<MomentId> = tree.moments().collect();
    order.sort_by_key(|&t| std::cmp::Reverse(tree.ancestors(t).count()));
    let options: Vec<Vec<Vec<Vec<usize>>>> = order
        .iter()
        .map(|&t| set_partitions(&tree.histories_through(t).map(|h| h.0).collect::<Vec<_>>()))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Option<&Vec<Vec<usize>>>> = vec![None; tree.len()];
    fn refines(finer: &[Vec<usize>], coarser: &[Vec<usize>]) -> bool {
        finer.iter().all(|b| coarser.iter().any(|c| b.iter().all(|h| c.contains(h))))
    }
    #[allow(clippy::too_many_arguments)]
    fn go<'a>(
        i: usize,
        points: usize,
        tree: &Tree,
        order: &[MomentId],
        options: &'a [Vec<Vec<Vec<usize>>>],
        chosen: &mut Vec<Option<&'a Vec<Vec<usize>>>>,
        max_points: usize,
        out: &mut Vec<IndistFunction>,
    ) {
        if i == order.len() {
            let classes_at = tree
                .moments()
                .map(|t| {
                    let blocks = chosen[t.0]
                        .unwrap()
                        .iter()
                        .map(|b| b.iter().map(|&h| tree.leaf_name(crate::structures::HistoryId(h)).to_owned()).collect())
                        .collect();
                    (tree.name(t).to_owned(), blocks)
                })
                .collect();
            out.push(IndistFunction { classes_at });
            return;
        }
        let t = order[i];
        for p in &options[i] {
            let total = points + p.len();
            // every remaining moment adds at least one point
            if total + (order.len() - i - 1) > max_points {
                continue;
            }
            if !tree.children(t).iter().all(|c| refines(chosen[c.0].unwrap(), p)) {
                continue;
            }
            chosen[t.0] = Some(p);
            go(i + 1, total, tree, order, options, chosen, max_points, out);
            chosen[t.0] = None;
        }
    }
    go(0, 0, tree, &order, &options, &mut chosen, max_points, &mut out);
    out
}

/// Every frame with at most `max_points` points, one tree per forest shape.
///
/// Frames that differ only by an automorphism of the tree may both appear.
pub fn frame_catalogue(max_points: usize) -> Vec<Frame> {
    let mut out = Vec::new();
    for parent in forests(max_points) {
        let tree = named_tree(&parent);
        for indist in indist_functions(&tree, max_points) {
            out.push(Frame::new(tree.clone(), &indist).expect("enumerated functions are coherent"));
        }
    }
    out
}

/// All models on `frame` over the given atoms.
pub fn all_valuations(frame: &Frame, atoms: &[&str]) -> Vec<Valuation> {
    let n = frame.num_points();
    let bits = n * atoms.len();
    assert!(bits < 32, "too many valuations to enumerate");
    (0u32..1 << bits)
        .map(|v| {
            atoms
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let pts = (0..n).filter(|&p| v >> (i * n + p) & 1 == 1).map(PointId).collect();
                    (a.to_string(), pts)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::validate_model;

    #[test]
    fn single_moment_gives_single_point() {
        let m = gen_random_model(3, 1, 2, IndistPolicy::Coarsened, 1);
        assert_eq!(m.frame.num_points(), 1);
    }

    #[test]
    fn deterministic_documents() {
        for policy in [IndistPolicy::Undividedness, IndistPolicy::Coarsened] {
            let a = serde_json::to_string(&gen_random_model(11, 7, 3, policy, 2).to_doc()).unwrap();
            let b = serde_json::to_string(&gen_random_model(11, 7, 3, policy, 2).to_doc()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn generated_models_validate() {
        for seed in 0..200 {
            for policy in [IndistPolicy::Undividedness, IndistPolicy::Coarsened] {
                let m = gen_random_model(seed, 1 + (seed as usize % 9), 1 + seed as usize % 3, policy, 2);
                let report = validate_model(&m.to_doc());
                assert!(report.is_ok(), "{report}");
            }
        }
    }

    #[test]
    fn coarsening_merges_something() {
        let merged = (0..50).any(|seed| {
            let m = gen_random_model(seed, 6, 3, IndistPolicy::Coarsened, 0);
            m.frame.num_points() < Frame::undivided(m.frame.tree().clone()).num_points()
        });
        assert!(merged);
    }

    #[test]
    fn atom_names_skip_reserved_letters() {
        let names = atom_names(30);
        assert_eq!(&names[..3], &["p", "q", "r"]);
        assert!(!names.iter().any(|a| a == "f" || a == "g"));
        assert_eq!(names.iter().collect::<BTreeSet<_>>().len(), 30);
    }

    #[test]
    fn bell_numbers() {
        let sizes: Vec<usize> = (0..6).map(|n| set_partitions(&(0..n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn forest_counts() {
        // rooted forests on n unlabelled nodes: 1, 2, 4, 9, 20
        let f = forests(5);
        let counts: Vec<usize> = (1..=5).map(|n| f.iter().filter(|p| p.len() == n).count()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9, 20]);
    }

    #[test]
    fn catalogue_respects_point_bound() {
        let cat = frame_catalogue(4);
        assert!(cat.iter().all(|f| f.num_points() <= 4));
        // the fork with a merged root has 3 points and the split root 4
        let forks = cat
            .iter()
            .filter(|f| f.tree().len() == 3 && f.tree().moments().any(|t| f.tree().children(t).len() == 2))
            .count();
        assert_eq!(forks, 2);
    }
}
