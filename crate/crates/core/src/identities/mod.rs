//! ω-terms, lattice identities and their two checkers.
//!
//! Text syntax: variables are the letters `s t x y z p q`, concatenation is
//! juxtaposition, `^w` is the ω-power of the preceding variable or
//! parenthesized term, and an identity is `LHS => RHS` or `LHS <=> RHS`.

mod monoid_mode;
mod words_mode;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::alphabet::Word;
use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::monoid::{AcceptingSet, Element, FiniteMonoid};

pub use monoid_mode::{check_in_monoid, DEFAULT_BUDGET};
pub use words_mode::{check_words, WordsBounds};

pub const VARIABLES: &str = "stxyzpq";

/// Default cap on the length of an expanded term.
pub const DEFAULT_EXPANSION_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OmegaTerm {
    Var(char),
    Concat(Vec<OmegaTerm>),
    Omega(Box<OmegaTerm>),
}

impl OmegaTerm {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = TermParser::new(text);
        let t = p.term()?;
        p.skip_ws();
        match p.peek() {
            None => Ok(t),
            Some((i, c)) => Err(term_error(i, format!("unexpected '{c}'"))),
        }
    }

    pub fn vars(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<char>) {
        match self {
            OmegaTerm::Var(v) => {
                out.insert(*v);
            }
            OmegaTerm::Concat(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            OmegaTerm::Omega(t) => t.collect_vars(out),
        }
    }

    /// Top-level factors: the operands of an outer concatenation, or the
    /// term itself.
    pub fn factors(&self) -> Vec<OmegaTerm> {
        match self {
            OmegaTerm::Concat(ts) => ts.clone(),
            t => vec![t.clone()],
        }
    }

    /// Number of occurrences of `v`.
    pub fn occurrences(&self, v: char) -> usize {
        match self {
            OmegaTerm::Var(w) => usize::from(*w == v),
            OmegaTerm::Concat(ts) => ts.iter().map(|t| t.occurrences(v)).sum(),
            OmegaTerm::Omega(t) => t.occurrences(v),
        }
    }

    fn expanded_len(&self, n_fact: usize) -> Option<usize> {
        match self {
            OmegaTerm::Var(_) => Some(1),
            OmegaTerm::Concat(ts) => ts
                .iter()
                .try_fold(0usize, |acc, t| acc.checked_add(t.expanded_len(n_fact)?)),
            OmegaTerm::Omega(t) => t.expanded_len(n_fact)?.checked_mul(n_fact),
        }
    }

    fn expand_into(&self, n_fact: usize, out: &mut Vec<char>) {
        match self {
            OmegaTerm::Var(v) => out.push(*v),
            OmegaTerm::Concat(ts) => ts.iter().for_each(|t| t.expand_into(n_fact, out)),
            OmegaTerm::Omega(t) => {
                let start = out.len();
                t.expand_into(n_fact, out);
                let once = out[start..].to_vec();
                for _ in 1..n_fact {
                    out.extend_from_slice(&once);
                }
            }
        }
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTerm::Var(v) => write!(f, "{v}"),
            OmegaTerm::Concat(ts) => ts.iter().try_for_each(|t| write!(f, "{t}")),
            OmegaTerm::Omega(t) => match **t {
                OmegaTerm::Var(v) => write!(f, "{v}^w"),
                _ => write!(f, "({t})^w"),
            },
        }
    }
}

/// `n!`, or `None` on overflow.
fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// The word `t(n)`: variables expand to themselves and `(u^ω)(n) = u(n)^{n!}`.
pub fn expand_term(t: &OmegaTerm, n: usize, cap: usize) -> Result<Vec<char>> {
    if n == 0 {
        return Err(Error::Precondition("expansion needs n ≥ 1".into()));
    }
    let too_large = |size| Error::TooLarge {
        what: "term expansion",
        size,
        limit: cap,
    };
    let n_fact = factorial(n).ok_or(too_large(usize::MAX))?;
    let len = t.expanded_len(n_fact).ok_or(too_large(usize::MAX))?;
    if len > cap {
        return Err(too_large(len));
    }
    let mut out = Vec::with_capacity(len);
    t.expand_into(n_fact, &mut out);
    Ok(out)
}

/// Concatenation is the product and `^w` the idempotent power.
pub fn eval_in_monoid(
    t: &OmegaTerm,
    sigma: &BTreeMap<char, Element>,
    m: &FiniteMonoid,
) -> Result<Element> {
    match t {
        OmegaTerm::Var(v) => sigma.get(v).copied().ok_or(Error::UnboundVariable(*v)),
        OmegaTerm::Concat(ts) => ts.iter().try_fold(m.identity(), |acc, t| {
            Ok(m.mul(acc, eval_in_monoid(t, sigma, m)?))
        }),
        OmegaTerm::Omega(t) => Ok(m.omega(eval_in_monoid(t, sigma, m)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityMode {
    Implies,
    Iff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIdentity {
    pub lhs: OmegaTerm,
    pub rhs: OmegaTerm,
    pub mode: IdentityMode,
}

impl LatticeIdentity {
    pub fn parse(text: &str) -> Result<Self> {
        let (split, mode, width) = if let Some(i) = text.find("<=>") {
            (i, IdentityMode::Iff, 3)
        } else if let Some(i) = text.find("=>") {
            (i, IdentityMode::Implies, 2)
        } else {
            return Err(term_error(text.chars().count(), "expected '=>' or '<=>'"));
        };
        let lhs = OmegaTerm::parse(&text[..split])?;
        let offset = text[..split + width].chars().count();
        let rhs = OmegaTerm::parse(&text[split + width..]).map_err(|e| match e {
            Error::TermSyntax { position, message } => Error::TermSyntax {
                position: position + offset,
                message,
            },
            e => e,
        })?;
        Ok(Self { lhs, rhs, mode })
    }

    /// Catalog entry by name, see [`CATALOG`].
    pub fn named(name: &str) -> Result<Self> {
        CATALOG
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, expr)| Self::parse(expr).expect("catalog entries parse"))
            .ok_or_else(|| Error::Malformed(format!("unknown identity '{name}'")))
    }

    pub fn vars(&self) -> BTreeSet<char> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    /// The implications whose conjunction is this identity.
    pub(crate) fn implications(&self) -> Vec<(OmegaTerm, OmegaTerm)> {
        match self.mode {
            IdentityMode::Implies => vec![(self.lhs.clone(), self.rhs.clone())],
            IdentityMode::Iff => vec![
                (self.lhs.clone(), self.rhs.clone()),
                (self.rhs.clone(), self.lhs.clone()),
            ],
        }
    }
}

impl fmt::Display for LatticeIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.mode {
            IdentityMode::Implies => "=>",
            IdentityMode::Iff => "<=>",
        };
        write!(f, "{} {arrow} {}", self.lhs, self.rhs)
    }
}

/// Named identities. The first seven characterize ideals, Boolean
/// combinations of ideals and DA; the last four are the closure properties
/// and aperiodicity.
pub const CATALOG: &[(&str, &str)] = &[
    ("right-ideal", "y => yz"),
    ("left-ideal", "y => xy"),
    ("two-sided-ideal", "y => xyz"),
    ("bc-right", "z(xy)^w x <=> z(xy)^w"),
    ("bc-left", "s(ts)^w z <=> (ts)^w z"),
    ("bc-two-sided", "s(ts)^w z(xy)^w x <=> (ts)^w z(xy)^w"),
    ("da", "p(xy)^w q <=> p(xy)^w x(xy)^w q"),
    ("prefix-closed", "yz => y"),
    ("suffix-closed", "xy => y"),
    ("factorial", "xyz => y"),
    ("aperiodic", "p x^w x q <=> p x^w q"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Monoid,
    Words(WordsBounds),
}

/// A falsifying assignment. Images are words over the language's alphabet;
/// in monoid mode they are the representatives of the assigned elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: BTreeMap<char, Word>,
    /// Elements assigned in monoid mode.
    pub elements: Option<BTreeMap<char, Element>>,
    /// The `n` used in words mode.
    pub n: Option<usize>,
    pub lhs_member: bool,
    pub rhs_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// Checks `id` on the language of `d`. Monoid mode is exact; words mode is a
/// bounded search whose refutations are evidence only at the tested `n`.
pub fn check_identity(d: &Dfa, id: &LatticeIdentity, mode: CheckMode) -> Result<IdentityOutcome> {
    match mode {
        CheckMode::Monoid => {
            let (m, p) = crate::monoid::syntactic_monoid(d)?;
            check_in_monoid(&m, &p, id, DEFAULT_BUDGET)
        }
        CheckMode::Words(bounds) => check_words(d, id, bounds),
    }
}

/// Membership of both sides of `id` under `sigma`, for replaying a
/// counterexample.
pub fn sides_in(
    m: &FiniteMonoid,
    p: &AcceptingSet,
    id: &LatticeIdentity,
    sigma: &BTreeMap<char, Element>,
) -> Result<(bool, bool)> {
    Ok((
        p.contains(eval_in_monoid(&id.lhs, sigma, m)?),
        p.contains(eval_in_monoid(&id.rhs, sigma, m)?),
    ))
}

fn term_error(position: usize, message: impl Into<String>) -> Error {
    Error::TermSyntax {
        position,
        message: message.into(),
    }
}

struct TermParser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl TermParser {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().enumerate().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn end(&self) -> usize {
        self.chars.len()
    }

    fn term(&mut self) -> Result<OmegaTerm> {
        let mut factors = Vec::new();
        while let Some((_, c)) = self.peek() {
            if c == ')' {
                break;
            }
            factors.push(self.factor()?);
        }
        match factors.len() {
            0 => Err(term_error(
                self.peek().map_or(self.end(), |(i, _)| i),
                "empty term",
            )),
            1 => Ok(factors.pop().expect("one factor")),
            _ => Ok(OmegaTerm::Concat(factors)),
        }
    }

    fn factor(&mut self) -> Result<OmegaTerm> {
        let (i, c) = self.peek().expect("caller checked");
        self.pos += 1;
        let mut t = if c == '(' {
            let inner = self.term()?;
            match self.peek() {
                Some((_, ')')) => self.pos += 1,
                _ => return Err(term_error(self.end(), "missing ')'")),
            }
            inner
        } else if VARIABLES.contains(c) {
            OmegaTerm::Var(c)
        } else {
            return Err(term_error(i, format!("'{c}' is not a variable")));
        };
        while let Some((j, '^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some((_, 'w')) => self.pos += 1,
                _ => return Err(term_error(j + 1, "expected 'w' after '^'")),
            }
            t = OmegaTerm::Omega(Box::new(t));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{parse_regex, to_minimal_dfa};

    fn s(word: &[char]) -> String {
        word.iter().collect()
    }

    #[test]
    fn parsing_and_display() {
        let t = OmegaTerm::parse("z (x y)^w x").unwrap();
        assert_eq!(t.to_string(), "z(xy)^wx");
        assert_eq!(t.factors().len(), 3);
        assert_eq!(t.vars().into_iter().collect::<String>(), "xyz");
        assert_eq!(OmegaTerm::parse("x^w^w").unwrap().to_string(), "(x^w)^w");
        assert!(matches!(
            OmegaTerm::parse("xa"),
            Err(Error::TermSyntax { position: 1, .. })
        ));
        assert!(OmegaTerm::parse("(xy").is_err());
        assert!(OmegaTerm::parse("").is_err());
        assert!(OmegaTerm::parse("x^v").is_err());
        let id = LatticeIdentity::parse("y => yz").unwrap();
        assert_eq!(id.mode, IdentityMode::Implies);
        assert_eq!(
            LatticeIdentity::parse("x <=> a"),
            Err(Error::TermSyntax {
                position: 6,
                message: "'a' is not a variable".into()
            })
        );
        for (name, _) in CATALOG {
            let id = LatticeIdentity::named(name).unwrap();
            assert_eq!(LatticeIdentity::parse(&id.to_string()).unwrap(), id);
        }
    }

    #[test]
    fn expansion() {
        let t = OmegaTerm::parse("xy").unwrap();
        assert_eq!(s(&expand_term(&t, 2, 100).unwrap()), "xy");
        let t = OmegaTerm::parse("x^w").unwrap();
        assert_eq!(s(&expand_term(&t, 3, 100).unwrap()), "xxxxxx");
        let t = OmegaTerm::parse("x y^w").unwrap();
        assert_eq!(s(&expand_term(&t, 2, 100).unwrap()), "xyy");
        let t = OmegaTerm::parse("((xy)^w)^w").unwrap();
        assert_eq!(expand_term(&t, 3, 100).unwrap().len(), 72);
        assert!(matches!(
            expand_term(&t, 3, 71),
            Err(Error::TooLarge { size: 72, .. })
        ));
        assert!(expand_term(&t, 40, usize::MAX).is_err());
    }

    #[test]
    fn evaluation() {
        let c3 = crate::monoid::tests::cyclic_group(3);
        let x = OmegaTerm::parse("x^w").unwrap();
        assert_eq!(
            eval_in_monoid(&x, &BTreeMap::from([('x', 1)]), &c3).unwrap(),
            0
        );
        assert_eq!(
            eval_in_monoid(&x, &BTreeMap::new(), &c3),
            Err(Error::UnboundVariable('x'))
        );
        let al = Alphabet::from_letters("ab").unwrap();
        let d = to_minimal_dfa(&parse_regex("b*a", &al).unwrap());
        let (m, _) = crate::monoid::syntactic_monoid(&d).unwrap();
        let t = OmegaTerm::parse("z(xy)^w").unwrap();
        for (z, x, y) in [(1, 2, 0), (2, 1, 2), (0, 0, 1)] {
            let sigma = BTreeMap::from([('x', x), ('y', y), ('z', z)]);
            let expect = m.mul(z, m.omega(m.mul(x, y)));
            assert_eq!(eval_in_monoid(&t, &sigma, &m).unwrap(), expect);
            // idempotent images are fixed by ω
            let e = m.omega(x);
            let sigma = BTreeMap::from([('x', e)]);
            assert_eq!(eval_in_monoid(&x_term(), &sigma, &m).unwrap(), e);
        }
    }

    fn x_term() -> OmegaTerm {
        OmegaTerm::parse("x^w").unwrap()
    }
}
