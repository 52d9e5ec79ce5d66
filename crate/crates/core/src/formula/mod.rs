//! Formulas of the languages L (¬, ∧, G, H, L) and LF (adds the weak future F).
//!
//! Derived connectives never reach the AST: the parser and the builder
//! helpers expand them into the primitive ones.

mod parse;
mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use random::{random_formula, random_formula_with};

/// Which of the two languages a formula is read in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Language {
    #[default]
    L,
    LF,
}

impl Language {
    pub fn allows_future(self) -> bool {
        self == Language::LF
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "L" => Ok(Language::L),
            "LF" => Ok(Language::LF),
            _ => Err(format!("unknown language `{s}` (expected L or LF)")),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::L => "L",
            Language::LF => "LF",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Along every history of the class, at every later moment.
    G(Box<Formula>),
    /// Along every history of the class, at every earlier moment.
    H(Box<Formula>),
    /// At every class of the current moment.
    L(Box<Formula>),
    /// Along every history of the class, at some later moment.
    F(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn always_future(self) -> Formula {
        Formula::G(Box::new(self))
    }

    pub fn always_past(self) -> Formula {
        Formula::H(Box::new(self))
    }

    pub fn necessarily(self) -> Formula {
        Formula::L(Box::new(self))
    }

    pub fn weak_future(self) -> Formula {
        Formula::F(Box::new(self))
    }

    /// `φ ∨ ψ` as `¬(¬φ ∧ ¬ψ)`.
    pub fn or(self, other: Formula) -> Formula {
        self.not().and(other.not()).not()
    }

    /// `φ → ψ` as `¬(φ ∧ ¬ψ)`.
    pub fn implies(self, other: Formula) -> Formula {
        self.and(other.not()).not()
    }

    /// P = ¬H¬
    pub fn some_past(self) -> Formula {
        self.not().always_past().not()
    }

    /// f = ¬G¬
    pub fn some_future(self) -> Formula {
        self.not().always_future().not()
    }

    /// M = ¬L¬
    pub fn possibly(self) -> Formula {
        self.not().necessarily().not()
    }

    /// g = ¬F¬
    pub fn weak_always(self) -> Formula {
        self.not().weak_future().not()
    }

    /// Operator nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::G(a) | Formula::H(a) | Formula::L(a) | Formula::F(a) => 1 + a.depth(),
            Formula::And(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::G(a) | Formula::H(a) | Formula::L(a) | Formula::F(a) => 1 + a.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Not(a) | Formula::G(a) | Formula::H(a) | Formula::L(a) | Formula::F(a) => a.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn uses_future(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::F(_) => true,
            Formula::Not(a) | Formula::G(a) | Formula::H(a) | Formula::L(a) => a.uses_future(),
            Formula::And(a, b) => a.uses_future() || b.uses_future(),
        }
    }

    pub fn in_language(&self, lang: Language) -> bool {
        lang.allows_future() || !self.uses_future()
    }
}

/// Prints with `~` glued to its operand, a space after G/H/L/F and fully
/// parenthesized conjunctions. Derived forms are not reconstructed.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::G(a) => write!(f, "G {a}"),
            Formula::H(a) => write!(f, "H {a}"),
            Formula::L(a) => write!(f, "L {a}"),
            Formula::F(a) => write!(f, "F {a}"),
        }
    }
}

/// Reads formula corpora: one formula per line, `#` starts a comment.
pub fn parse_corpus(text: &str, lang: Language) -> Result<Vec<Formula>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| parse(line, lang).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn printing_conventions() {
        assert_eq!(p().always_future().to_string(), "G p");
        assert_eq!(p().and(Formula::atom("q")).to_string(), "(p & q)");
        assert_eq!(p().some_past().to_string(), "~H ~p");
    }

    #[test]
    fn depth_and_atoms() {
        let f = p().and(Formula::atom("q").always_future()).not();
        assert_eq!(f.depth(), 3);
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), ["p", "q"]);
        assert_eq!(p().depth(), 0);
    }

    #[test]
    fn language_membership() {
        assert!(!p().weak_future().in_language(Language::L));
        assert!(p().weak_future().in_language(Language::LF));
        assert!(p().always_future().in_language(Language::L));
    }

    #[test]
    fn corpus_reader_skips_comments() {
        let fs = parse_corpus("# header\nG p\n\n p & q # trailing\n", Language::L).unwrap();
        assert_eq!(fs.len(), 2);
        let err = parse_corpus("G p\nF p\n", Language::L).unwrap_err();
        assert_eq!(err.0, 2);
    }
}
