//! Bounded oracles, independent of the monoid computations. A refutation is
//! a pair of concrete words and is definitive; consistency only covers the
//! searched bound.

use crate::alphabet::Word;
use crate::automata::{Dfa, Nfa};
use crate::classification::Property;
use crate::error::{Error, Result};
use crate::identities::{check_words, expand_term, LatticeIdentity, WordsBounds};

/// Largest number of words the definitional oracle will tabulate.
pub const MAX_ORACLE_WORDS: usize = 1 << 24;

/// Two words the property says must agree on membership but do not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub member: Word,
    pub non_member: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Consistent,
    Refuted(Separation),
}

impl OracleOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, OracleOutcome::Refuted(_))
    }
}

/// Definitional checks for the ideal and closure properties over all words
/// of length at most `max_len`; the Boolean-combination, DA and aperiodicity
/// properties are sampled through their identities in words mode with
/// default bounds.
pub fn brute_force_oracle(a: &Nfa, property: Property, max_len: usize) -> Result<OracleOutcome> {
    brute_force_oracle_with(a, property, max_len, WordsBounds::default())
}

pub fn brute_force_oracle_with(
    a: &Nfa,
    property: Property,
    max_len: usize,
    bounds: WordsBounds,
) -> Result<OracleOutcome> {
    if max_len == 0 {
        return Err(Error::Precondition("oracle needs max_len ≥ 1".into()));
    }
    let d = a.determinize();
    match property.identity_name() {
        Some(name) if !property.is_definitional() => identity_oracle(&d, name, bounds),
        _ => Ok(definitional(&Table::build(&d, max_len)?, property)),
    }
}

/// Membership of every word up to a length, indexed by length and by the
/// word read as a base-`k` number.
struct Table {
    k: usize,
    member: Vec<Vec<bool>>,
}

impl Table {
    fn build(d: &Dfa, max_len: usize) -> Result<Self> {
        let k = d.alphabet().len();
        let total =
            (0..=max_len).try_fold(0usize, |acc, l| k.checked_pow(l as u32)?.checked_add(acc));
        match total {
            Some(t) if t <= MAX_ORACLE_WORDS => {}
            _ => {
                return Err(Error::TooLarge {
                    what: "oracle word table",
                    size: total.unwrap_or(usize::MAX),
                    limit: MAX_ORACLE_WORDS,
                })
            }
        }
        let d = d.complete();
        let mut states = vec![d.initial().expect("complete")];
        let mut member = vec![vec![d.is_final(states[0])]];
        for _ in 0..max_len {
            let next: Vec<usize> = (0..states.len() * k)
                .map(|r| d.step(states[r / k], r % k).expect("complete"))
                .collect();
            member.push(next.iter().map(|&q| d.is_final(q)).collect());
            states = next;
        }
        Ok(Self { k, member })
    }

    fn max_len(&self) -> usize {
        self.member.len() - 1
    }

    fn word(&self, len: usize, mut rank: usize) -> Word {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = rank % self.k;
            rank /= self.k;
        }
        Word(w)
    }

    /// All words in shortlex order as `(len, rank)`.
    fn words(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.member
            .iter()
            .enumerate()
            .flat_map(|(len, row)| (0..row.len()).map(move |r| (len, r)))
    }
}

fn definitional(t: &Table, property: Property) -> OracleOutcome {
    let (k, n) = (t.k, t.max_len());
    let sep = |member: (usize, usize), non: (usize, usize)| {
        OracleOutcome::Refuted(Separation {
            member: t.word(member.0, member.1),
            non_member: t.word(non.0, non.1),
        })
    };
    use Property::*;
    let (extend_right, extend_left, shrink_right, shrink_left) = match property {
        RightIdeal => (true, false, false, false),
        LeftIdeal => (false, true, false, false),
        TwoSidedIdeal => (true, true, false, false),
        PrefixClosed => (false, false, true, false),
        SuffixClosed => (false, false, false, true),
        Factorial => (false, false, true, true),
        _ => unreachable!("not a definitional property"),
    };
    for (len, r) in t.words() {
        if !t.member[len][r] {
            continue;
        }
        // one-letter steps suffice: longer ones chain through members
        if len < n {
            let pow = k.pow(len as u32);
            for a in 0..k {
                if extend_right && !t.member[len + 1][r * k + a] {
                    return sep((len, r), (len + 1, r * k + a));
                }
                if extend_left && !t.member[len + 1][a * pow + r] {
                    return sep((len, r), (len + 1, a * pow + r));
                }
            }
        }
        if len > 0 {
            if shrink_right && !t.member[len - 1][r / k] {
                return sep((len, r), (len - 1, r / k));
            }
            let rest = r % k.pow(len as u32 - 1);
            if shrink_left && !t.member[len - 1][rest] {
                return sep((len, r), (len - 1, rest));
            }
        }
    }
    OracleOutcome::Consistent
}

fn identity_oracle(d: &Dfa, name: &str, bounds: WordsBounds) -> Result<OracleOutcome> {
    let id = LatticeIdentity::named(name)?;
    let out = check_words(d, &id, bounds)?;
    let Some(c) = out.counterexample else {
        return Ok(OracleOutcome::Consistent);
    };
    let n = c.n.expect("words mode records n");
    let instantiate = |t| -> Result<Word> {
        Ok(Word(
            expand_term(t, n, bounds.expansion_cap)?
                .iter()
                .flat_map(|v| c.assignment[v].letters().to_vec())
                .collect(),
        ))
    };
    let (l, r) = (instantiate(&id.lhs)?, instantiate(&id.rhs)?);
    let (member, non_member) = if c.lhs_member { (l, r) } else { (r, l) };
    Ok(OracleOutcome::Refuted(Separation { member, non_member }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::parse_regex;

    fn nfa(re: &str, letters: &str) -> Nfa {
        parse_regex(re, &Alphabet::from_letters(letters).unwrap()).unwrap()
    }

    fn refuted(re: &str, letters: &str, p: Property, max_len: usize) -> Option<(String, String)> {
        let a = nfa(re, letters);
        match brute_force_oracle(&a, p, max_len).unwrap() {
            OracleOutcome::Consistent => None,
            OracleOutcome::Refuted(s) => {
                assert!(a.accepts(s.member.letters()));
                assert!(!a.accepts(s.non_member.letters()));
                let al = a.alphabet();
                Some((
                    al.render(s.member.letters()),
                    al.render(s.non_member.letters()),
                ))
            }
        }
    }

    #[test]
    fn right_ideal_fixtures() {
        assert_eq!(refuted("ab(a|b)*", "ab", Property::RightIdeal, 6), None);
        assert_eq!(
            refuted("ab(a|b)*|a", "ab", Property::RightIdeal, 3),
            Some(("a".into(), "aa".into()))
        );
    }

    #[test]
    fn epsilon_alone_is_prefix_closed() {
        assert_eq!(refuted("%e", "ab", Property::PrefixClosed, 8), None);
        assert_eq!(refuted("%e", "ab", Property::Factorial, 8), None);
        assert!(refuted("%e", "ab", Property::RightIdeal, 8).is_some());
    }

    #[test]
    fn closure_witnesses_drop_one_letter() {
        assert_eq!(
            refuted("ab", "ab", Property::PrefixClosed, 4),
            Some(("ab".into(), "a".into()))
        );
        assert_eq!(
            refuted("%e|a|ab", "ab", Property::SuffixClosed, 4),
            Some(("ab".into(), "b".into()))
        );
        assert_eq!(refuted("a*b*", "ab", Property::Factorial, 6), None);
        assert_eq!(
            refuted("b(a|b)*", "ab", Property::LeftIdeal, 4),
            Some(("b".into(), "ab".into()))
        );
    }

    #[test]
    fn identity_oracle_replays() {
        let s = refuted("(a|b|c)*ab(b|c)*", "abc", Property::BcRightIdeals, 8);
        assert!(s.is_some());
        assert_eq!(
            refuted("(a|c)*ab(a|b|c)*", "abc", Property::BcRightIdeals, 8),
            None
        );
        assert!(refuted("(aa)*", "a", Property::Aperiodic, 8).is_some());
    }

    #[test]
    fn rejects_zero_bound() {
        assert!(brute_force_oracle(&nfa("a", "a"), Property::RightIdeal, 0).is_err());
    }
}
