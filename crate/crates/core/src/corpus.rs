//! Exhaustive formula corpora, evaluated bottom-up as point masks.
//!
//! A corpus holds every formula over the given atoms with operator depth at
//! most `d`, in levels of increasing depth. Subformulas are shared by index,
//! so a full corpus evaluation costs one mask operation per formula.

use crate::formula::{Formula, Language};
use crate::mask::Mask;
use crate::par;
use crate::semantics::{valuation_mask, PointGraph};
use crate::structures::{Frame, Model};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Atom(usize),
    Not(usize),
    And(usize, usize),
    G(usize),
    H(usize),
    L(usize),
    F(usize),
}

#[derive(Clone, Debug)]
pub struct Corpus {
    atoms: Vec<String>,
    nodes: Vec<Node>,
    /// `levels[d]` is the index range of formulas of depth exactly `d`.
    levels: Vec<std::ops::Range<usize>>,
}

impl Corpus {
    pub fn exhaustive(atoms: &[&str], max_depth: usize, lang: Language) -> Corpus {
        let mut nodes: Vec<Node> = (0..atoms.len()).map(Node::Atom).collect();
        let mut levels: Vec<std::ops::Range<usize>> = Vec::new();
        levels.push(0..nodes.len());
        for _ in 0..max_depth {
            let prev = levels.last().unwrap().clone();
            let below = 0..prev.end;
            let start = nodes.len();
            for i in prev.clone() {
                nodes.push(Node::Not(i));
                nodes.push(Node::G(i));
                nodes.push(Node::H(i));
                nodes.push(Node::L(i));
                if lang.allows_future() {
                    nodes.push(Node::F(i));
                }
            }
            // conjunctions whose deeper conjunct sits on the previous level
            for i in below.clone() {
                for j in below.clone() {
                    if prev.contains(&i) || prev.contains(&j) {
                        nodes.push(Node::And(i, j));
                    }
                }
            }
            levels.push(start..nodes.len());
        }
        Corpus {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            nodes,
            levels,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn depth(&self, i: usize) -> usize {
        self.levels.iter().position(|r| r.contains(&i)).expect("index in corpus")
    }

    pub fn formula(&self, i: usize) -> Formula {
        match self.nodes[i] {
            Node::Atom(a) => Formula::atom(&self.atoms[a]),
            Node::Not(a) => self.formula(a).not(),
            Node::And(a, b) => self.formula(a).and(self.formula(b)),
            Node::G(a) => self.formula(a).always_future(),
            Node::H(a) => self.formula(a).always_past(),
            Node::L(a) => self.formula(a).necessarily(),
            Node::F(a) => self.formula(a).weak_future(),
        }
    }

    /// Extension of every corpus formula; `atom_masks` follows `atoms()`.
    pub fn evaluate<M: Mask>(&self, graph: &PointGraph<M>, atom_masks: &[M]) -> Vec<M> {
        let mut ext: Vec<M> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let m = match *node {
                Node::Atom(a) => atom_masks[a].clone(),
                Node::Not(a) => graph.not(&ext[a]),
                Node::And(a, b) => ext[a].and(&ext[b]),
                Node::G(a) => graph.always_future(&ext[a]),
                Node::H(a) => graph.always_past(&ext[a]),
                Node::L(a) => graph.necessarily(&ext[a]),
                Node::F(a) => graph.weak_future(&ext[a]),
            };
            ext.push(m);
        }
        ext
    }

    pub fn evaluate_model<M: Mask>(&self, model: &Model) -> Result<Vec<M>> {
        let graph = PointGraph::<M>::new(&model.frame)?;
        let n = graph.len();
        let masks: Vec<M> = self
            .atoms
            .iter()
            .map(|a| valuation_mask(n, &model.valuation, a, 0))
            .collect();
        Ok(self.evaluate(&graph, &masks))
    }

    /// Frame validity of every corpus formula, by enumerating all valuations
    /// of the corpus atoms. Subject to the same bound as
    /// [`crate::semantics::frame_valid`].
    pub fn frame_validity(&self, frame: &Frame, max_enum: usize) -> Result<Vec<bool>> {
        let n = frame.num_points();
        let k = self.atoms.len();
        let bits = n * k;
        if bits > max_enum || bits >= 64 {
            return Err(crate::Error::Bound {
                what: "valuation bits (points x atoms)",
                needed: bits,
                bound: max_enum.min(63),
            });
        }
        let graph = PointGraph::<u128>::new(frame)?;
        let full = <u128 as Mask>::full(n);
        let total = 1u64 << bits;
        let chunks = total.min(64) as usize;
        let per_chunk = total.div_ceil(chunks as u64);
        let partial = par::map_range(0..chunks, |c| {
            let mut valid = vec![true; self.nodes.len()];
            let lo = c as u64 * per_chunk;
            let hi = (lo + per_chunk).min(total);
            for v in lo..hi {
                let masks: Vec<u128> = (0..k).map(|i| (v as u128 >> (i * n)) & full).collect();
                let ext = self.evaluate(&graph, &masks);
                for (ok, e) in valid.iter_mut().zip(&ext) {
                    *ok &= *e == full;
                }
            }
            valid
        });
        let mut valid = vec![true; self.nodes.len()];
        for part in partial {
            for (ok, p) in valid.iter_mut().zip(part) {
                *ok &= p;
            }
        }
        Ok(valid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_hist;
    use crate::structures::{PointId, Tree, Valuation};

    #[test]
    fn corpus_sizes_match_closed_form() {
        // c0 = atoms, c_{d+1} = atoms + u * c_d + c_d^2
        let count = |atoms: usize, unary: usize, depth: usize| {
            (0..depth).fold(atoms, |c, _| atoms + unary * c + c * c)
        };
        for depth in 0..=3 {
            assert_eq!(Corpus::exhaustive(&["p", "q"], depth, Language::L).len(), count(2, 4, depth));
            assert_eq!(Corpus::exhaustive(&["p", "q"], depth, Language::LF).len(), count(2, 5, depth));
        }
        assert_eq!(Corpus::exhaustive(&["p", "q"], 3, Language::L).len(), 65_534);
    }

    #[test]
    fn corpus_formulas_are_distinct_with_correct_depth() {
        let c = Corpus::exhaustive(&["p", "q"], 2, Language::LF);
        let mut seen = std::collections::HashSet::new();
        for i in 0..c.len() {
            let f = c.formula(i);
            assert_eq!(f.depth(), c.depth(i));
            assert!(seen.insert(f));
        }
    }

    #[test]
    fn corpus_evaluation_matches_eval_hist() {
        let frame = Frame::undivided(Tree::new(&["r", "m", "a", "b"], &[("r", "m"), ("m", "a"), ("m", "b")]).unwrap());
        let mut valuation = Valuation::new();
        valuation.insert("p".into(), [PointId(0), PointId(3)].into());
        valuation.insert("q".into(), [PointId(2)].into());
        let model = Model::new(frame, valuation).unwrap();
        let c = Corpus::exhaustive(&["p", "q"], 2, Language::LF);
        let ext = c.evaluate_model::<u128>(&model).unwrap();
        for (i, mask) in ext.iter().enumerate() {
            let f = c.formula(i);
            for p in model.frame.points() {
                assert_eq!(
                    Mask::contains(mask, p.0),
                    eval_hist(&model, p, &f, Language::LF).unwrap(),
                    "{f}"
                );
            }
        }
    }

    #[test]
    fn corpus_frame_validity_matches_single_formula_check() {
        let frame = Frame::undivided(Tree::new(&["r", "a", "b"], &[("r", "a"), ("r", "b")]).unwrap());
        let c = Corpus::exhaustive(&["p"], 2, Language::LF);
        let valid = c.frame_validity(&frame, 20).unwrap();
        for (i, &v) in valid.iter().enumerate() {
            let single = crate::semantics::frame_valid(&frame, &c.formula(i), Language::LF, 20).unwrap();
            assert_eq!(v, single.valid, "{}", c.formula(i));
        }
        assert!(valid.iter().any(|&v| v));
    }
}
