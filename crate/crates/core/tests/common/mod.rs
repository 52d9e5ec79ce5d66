//! Brute-force reference implementation built straight from the
//! definitions, reading raw JSON documents. It shares no code with the
//! library beyond the formula AST.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itl::{Formula, Language};
use serde_json::Value;

/// A point as plain data: moment name and the leaf names of its class.
pub type RawPoint = (String, BTreeSet<String>);

pub struct Oracle {
    pub moments: Vec<String>,
    /// `less[a][b]` iff moment a is strictly before moment b.
    pub less: Vec<Vec<bool>>,
    /// Histories as sets of moment indices.
    pub histories: Vec<BTreeSet<usize>>,
    pub leaf: Vec<String>,
    /// `classes[t]`: blocks of history indices at moment t.
    pub classes: Vec<Vec<BTreeSet<usize>>>,
    pub valuation: BTreeMap<String, BTreeSet<(usize, BTreeSet<usize>)>>,
}

pub type OPoint = (usize, BTreeSet<usize>);

fn strs(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_owned())
        .collect()
}

impl Oracle {
    pub fn from_json(doc: &Value) -> Oracle {
        let moments = strs(&doc["moments"]);
        let n = moments.len();
        let idx = |s: &str| moments.iter().position(|m| m == s).unwrap();
        let mut less = vec![vec![false; n]; n];
        for e in doc["edges"].as_array().unwrap() {
            let e = strs(e);
            less[idx(&e[0])][idx(&e[1])] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if less[i][k] && less[k][j] {
                        less[i][j] = true;
                    }
                }
            }
        }
        // maximal chains among all subsets
        assert!(n <= 16, "oracle enumerates subsets of moments");
        let chains: Vec<BTreeSet<usize>> = (1u32..1 << n)
            .map(|bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect::<BTreeSet<_>>())
            .filter(|s| s.iter().all(|&a| s.iter().all(|&b| a == b || less[a][b] || less[b][a])))
            .collect();
        let histories: Vec<BTreeSet<usize>> = chains
            .iter()
            .filter(|c| !chains.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
            .cloned()
            .collect();
        let leaf: Vec<String> = histories
            .iter()
            .map(|h| {
                let top = h.iter().find(|&&a| h.iter().all(|&b| a == b || less[b][a])).unwrap();
                moments[*top].clone()
            })
            .collect();
        let hist_of = |name: &str| leaf.iter().position(|l| l == name).unwrap();
        let classes: Vec<Vec<BTreeSet<usize>>> = moments
            .iter()
            .map(|m| {
                doc["indist"][m]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|b| strs(b).iter().map(|l| hist_of(l)).collect())
                    .collect()
            })
            .collect();
        let mut o = Oracle {
            moments,
            less,
            histories,
            leaf,
            classes,
            valuation: BTreeMap::new(),
        };
        if let Some(v) = doc.get("valuation").and_then(Value::as_object) {
            for (atom, pts) in v {
                let set = pts
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|p| {
                        let p = strs(p);
                        let t = o.moment(&p[0]);
                        let h = o.history_of_leaf(&p[1]);
                        (t, o.class_at(t, h))
                    })
                    .collect();
                o.valuation.insert(atom.clone(), set);
            }
        }
        o
    }

    pub fn moment(&self, name: &str) -> usize {
        self.moments.iter().position(|m| m == name).unwrap()
    }

    pub fn history_of_leaf(&self, name: &str) -> usize {
        self.leaf.iter().position(|l| l == name).unwrap()
    }

    pub fn class_at(&self, t: usize, h: usize) -> BTreeSet<usize> {
        self.classes[t].iter().find(|b| b.contains(&h)).unwrap().clone()
    }

    pub fn points(&self) -> Vec<OPoint> {
        (0..self.moments.len())
            .flat_map(|t| self.classes[t].iter().map(move |b| (t, b.clone())))
            .collect()
    }

    pub fn raw(&self, p: &OPoint) -> RawPoint {
        (self.moments[p.0].clone(), p.1.iter().map(|&h| self.leaf[h].clone()).collect())
    }

    pub fn precedes(&self, p: &OPoint, q: &OPoint) -> bool {
        self.less[p.0][q.0] && p.1.is_superset(&q.1)
    }

    pub fn eval(&self, p: &OPoint, f: &Formula) -> bool {
        let (t, pi) = p;
        let later_on = |h: usize| self.histories[h].iter().copied().filter(|&s| self.less[*t][s]).collect::<Vec<_>>();
        match f {
            Formula::Atom(a) => self.valuation.get(a).is_some_and(|s| s.contains(p)),
            Formula::Not(g) => !self.eval(p, g),
            Formula::And(a, b) => self.eval(p, a) && self.eval(p, b),
            Formula::G(g) => pi
                .iter()
                .all(|&h| later_on(h).into_iter().all(|s| self.eval(&(s, self.class_at(s, h)), g))),
            Formula::H(g) => pi.iter().all(|&h| {
                self.histories[h]
                    .iter()
                    .filter(|&&s| self.less[s][*t])
                    .all(|&s| self.eval(&(s, self.class_at(s, h)), g))
            }),
            Formula::L(g) => self.classes[*t].iter().all(|rho| self.eval(&(*t, rho.clone()), g)),
            Formula::F(g) => pi
                .iter()
                .all(|&h| later_on(h).into_iter().any(|s| self.eval(&(s, self.class_at(s, h)), g))),
        }
    }
}

/// Library point as plain data.
pub fn raw_point(frame: &itl::Frame, p: itl::PointId) -> RawPoint {
    let tree = frame.tree();
    (
        tree.name(frame.moment_of(p)).to_owned(),
        frame.class_histories(p).map(|h| tree.leaf_name(h).to_owned()).collect(),
    )
}

pub fn oracle_of_model(m: &itl::Model) -> Oracle {
    Oracle::from_json(&serde_json::to_value(m.to_doc()).unwrap())
}

/// The p-morphism conditions read off their definitions; `map` sends source
/// points to target points. Returns the names of the failing conditions.
pub fn pmorphism_failures(
    a: &Oracle,
    b: &Oracle,
    map: &BTreeMap<OPoint, OPoint>,
    lang: Language,
) -> BTreeSet<&'static str> {
    let mut fails = BTreeSet::new();
    let (pa, pb) = (a.points(), b.points());
    let f = |p: &OPoint| map[p].clone();
    for x in &pa {
        for y in &pa {
            if a.precedes(x, y) && !b.precedes(&f(x), &f(y)) {
                fails.insert("G-f");
            }
            if x.0 == y.0 && f(x).0 != f(y).0 {
                fails.insert("L-f");
            }
        }
        for y2 in &pb {
            if b.precedes(&f(x), y2) && !pa.iter().any(|y| a.precedes(x, y) && f(y) == *y2) {
                fails.insert("G-b");
            }
            if b.precedes(y2, &f(x)) && !pa.iter().any(|y| a.precedes(y, x) && f(y) == *y2) {
                fails.insert("H-b");
            }
            if f(x).0 == y2.0 && !pa.iter().any(|y| y.0 == x.0 && f(y) == *y2) {
                fails.insert("L-b");
            }
        }
        if lang == Language::LF {
            let (t, pi) = x;
            let fx = f(x);
            let later_a = |h: usize| -> Vec<OPoint> {
                a.histories[h]
                    .iter()
                    .filter(|&&s| a.less[*t][s])
                    .map(|&s| (s, a.class_at(s, h)))
                    .collect()
            };
            let later_b = |h: usize| -> Vec<OPoint> {
                b.histories[h]
                    .iter()
                    .filter(|&&s| b.less[fx.0][s])
                    .map(|&s| (s, b.class_at(s, h)))
                    .collect()
            };
            // for every h' in f2 there is h in pi whose later points all map onto h' later points
            let ff = fx.1.iter().all(|&h2| {
                let targets = later_b(h2);
                pi.iter().any(|&h| later_a(h).iter().all(|y| targets.contains(&f(y))))
            });
            if !ff {
                fails.insert("F-f");
            }
            // for every h in pi there is h' in f2 whose later points are all images of h later points
            let fb = pi.iter().all(|&h| {
                let images: Vec<OPoint> = later_a(h).iter().map(&f).collect();
                fx.1.iter().any(|&h2| later_b(h2).iter().all(|y2| images.contains(y2)))
            });
            if !fb {
                fails.insert("F-b");
            }
        }
    }
    fails
}

/// Per-pair bisimulation conditions read off their definitions.
pub fn bisimulation_holds(a: &Oracle, b: &Oracle, rel: &BTreeSet<(OPoint, OPoint)>, lang: Language) -> bool {
    let (pa, pb) = (a.points(), b.points());
    let atoms: BTreeSet<&String> = a.valuation.keys().chain(b.valuation.keys()).collect();
    let r = |x: &OPoint, y: &OPoint| rel.contains(&(x.clone(), y.clone()));
    rel.iter().all(|(x, y)| {
        let pv = atoms.iter().all(|at| {
            a.valuation.get(*at).is_some_and(|s| s.contains(x)) == b.valuation.get(*at).is_some_and(|s| s.contains(y))
        });
        type Rel<'o> = Box<dyn Fn(&Oracle, &OPoint, &OPoint) -> bool + 'o>;
        let rels: [Rel; 3] = [
            Box::new(|o, p, q| o.precedes(p, q)),
            Box::new(|o, p, q| o.precedes(q, p)),
            Box::new(|_, p, q| p.0 == q.0),
        ];
        let back_forth = rels.iter().all(|s| {
            let forth = pa
                .iter()
                .filter(|x2| s(a, x, x2))
                .all(|x2| pb.iter().any(|y2| s(b, y, y2) && r(x2, y2)));
            let back = pb
                .iter()
                .filter(|y2| s(b, y, y2))
                .all(|y2| pa.iter().any(|x2| s(a, x, x2) && r(x2, y2)));
            forth && back
        });
        let future = lang == Language::L || {
            let later = |o: &Oracle, p: &OPoint, h: usize| -> Vec<OPoint> {
                o.histories[h]
                    .iter()
                    .filter(|&&s| o.less[p.0][s])
                    .map(|&s| (s, o.class_at(s, h)))
                    .collect()
            };
            let ff = y.1.iter().all(|&h2| {
                let l2 = later(b, y, h2);
                x.1.iter().any(|&h| later(a, x, h).iter().all(|u| l2.iter().any(|v| r(u, v))))
            });
            let fb = x.1.iter().all(|&h| {
                let l = later(a, x, h);
                y.1.iter().any(|&h2| later(b, y, h2).iter().all(|v| l.iter().any(|u| r(u, v))))
            });
            ff && fb
        };
        pv && back_forth && future
    })
}

/// The union of every relation satisfying the per-pair conditions.
pub fn greatest_bisimulation(a: &Oracle, b: &Oracle, lang: Language) -> BTreeSet<(OPoint, OPoint)> {
    let pairs: Vec<(OPoint, OPoint)> = a
        .points()
        .into_iter()
        .flat_map(|x| b.points().into_iter().map(move |y| (x.clone(), y)))
        .collect();
    assert!(pairs.len() <= 16, "oracle enumerates all relations");
    let mut union = BTreeSet::new();
    for bits in 0u32..1 << pairs.len() {
        let rel: BTreeSet<(OPoint, OPoint)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        if bisimulation_holds(a, b, &rel, lang) {
            union.extend(rel);
        }
    }
    union
}

pub fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}
