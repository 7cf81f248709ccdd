//! A deliberately small regex dialect for writing fixtures.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! alt     := concat ('|' concat)*
//! concat  := postfix+
//! postfix := atom ('*' | '+' | '?')*
//! atom    := letter | '%e' | '%0' | '(' alt ')'
//! ```

use crate::alphabet::{Alphabet, Letter};
use crate::automata::nfa::Nfa;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(Letter),
    Concat(Box<Regex>, Box<Regex>),
    Alt(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Regex> {
        let tokens: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut p = Parser {
            tokens,
            pos: 0,
            alphabet,
            end: text.chars().count(),
        };
        let r = p.alt()?;
        if let Some(&(at, c)) = p.tokens.get(p.pos) {
            return Err(syntax(at, format!("unexpected '{c}'")));
        }
        Ok(r)
    }

    pub fn to_nfa(&self, alphabet: &Alphabet) -> Nfa {
        let mut b = Thompson::default();
        let (start, end) = b.build(self);
        b.into_nfa(alphabet.clone(), start, end)
    }
}

/// Parses `text` and returns an ε-free NFA with all states accessible.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Nfa> {
    Ok(Regex::parse(text, alphabet)?.to_nfa(alphabet))
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::RegexSyntax {
        position,
        message: message.into(),
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, char)>,
    pos: usize,
    alphabet: &'a Alphabet,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn alt(&mut self) -> Result<Regex> {
        let mut r = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concat()?;
            r = Regex::Alt(Box::new(r), Box::new(rhs));
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.postfix()?);
        }
        let mut it = parts.into_iter();
        let first = it
            .next()
            .ok_or_else(|| syntax(self.here(), "expected an expression"))?;
        Ok(it.fold(first, |acc, r| Regex::Concat(Box::new(acc), Box::new(r))))
    }

    fn postfix(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while let Some(c) = self.peek() {
            r = match c {
                '*' => Regex::Star(Box::new(r)),
                '+' => Regex::Concat(Box::new(r.clone()), Box::new(Regex::Star(Box::new(r)))),
                '?' => Regex::Alt(Box::new(r), Box::new(Regex::Epsilon)),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let at = self.here();
        let Some(c) = self.peek() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match c {
            '(' => {
                let r = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(r)
            }
            '%' => {
                let kind = self.peek();
                self.pos += 1;
                match kind {
                    Some('e') => Ok(Regex::Epsilon),
                    Some('0') => Ok(Regex::Empty),
                    _ => Err(syntax(at, "expected %e or %0")),
                }
            }
            '*' | '+' | '?' | '|' | ')' => Err(syntax(at, format!("unexpected '{c}'"))),
            _ => self.alphabet.index_of(c).map(Regex::Letter),
        }
    }
}

/// Thompson construction with ε-edges, eliminated in `into_nfa`.
#[derive(Default)]
struct Thompson {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(Letter, usize)>>,
}

impl Thompson {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, r: &Regex) -> (usize, usize) {
        match r {
            Regex::Empty => (self.state(), self.state()),
            Regex::Epsilon => {
                let (s, e) = (self.state(), self.state());
                self.eps[s].push(e);
                (s, e)
            }
            Regex::Letter(a) => {
                let (s, e) = (self.state(), self.state());
                self.edges[s].push((*a, e));
                (s, e)
            }
            Regex::Concat(x, y) => {
                let (s1, e1) = self.build(x);
                let (s2, e2) = self.build(y);
                self.eps[e1].push(s2);
                (s1, e2)
            }
            Regex::Alt(x, y) => {
                let (s, e) = (self.state(), self.state());
                let (s1, e1) = self.build(x);
                let (s2, e2) = self.build(y);
                self.eps[s].extend([s1, s2]);
                self.eps[e1].push(e);
                self.eps[e2].push(e);
                (s, e)
            }
            Regex::Star(x) => {
                let (s, e) = (self.state(), self.state());
                let (s1, e1) = self.build(x);
                self.eps[s].extend([s1, e]);
                self.eps[e1].extend([s1, e]);
                (s, e)
            }
        }
    }

    fn closure(&self, q: usize) -> Vec<usize> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack = vec![q];
        seen[q] = true;
        let mut out = Vec::new();
        while let Some(p) = stack.pop() {
            out.push(p);
            for &r in &self.eps[p] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        out
    }

    fn into_nfa(self, alphabet: Alphabet, start: usize, end: usize) -> Nfa {
        let n = self.eps.len();
        let mut transitions = Vec::new();
        let mut finals = Vec::new();
        for q in 0..n {
            let cl = self.closure(q);
            if cl.contains(&end) {
                finals.push(q);
            }
            for p in cl {
                transitions.extend(self.edges[p].iter().map(|&(a, r)| (q, a, r)));
            }
        }
        Nfa::new(alphabet, n, transitions, [start], finals)
            .expect("thompson states are in range")
            .accessible()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(nfa: &Nfa, max: usize) -> Vec<String> {
        let a = nfa.alphabet();
        a.words_up_to(max)
            .into_iter()
            .filter(|w| nfa.accepts(w.letters()))
            .map(|w| a.render(w.letters()))
            .collect()
    }

    #[test]
    fn epsilon_and_empty() {
        let ab = Alphabet::from_letters("ab").unwrap();
        assert_eq!(lang(&parse_regex("%e", &ab).unwrap(), 4), [""]);
        assert!(lang(&parse_regex("%0", &ab).unwrap(), 4).is_empty());
        assert_eq!(lang(&parse_regex("a%0|b", &ab).unwrap(), 3), ["b"]);
    }

    #[test]
    fn operators() {
        let ab = Alphabet::from_letters("ab").unwrap();
        assert_eq!(
            lang(&parse_regex("a+ b?", &ab).unwrap(), 3),
            ["a", "aa", "ab", "aaa", "aab"]
        );
        assert_eq!(
            lang(&parse_regex("(ab)*", &ab).unwrap(), 4),
            ["", "ab", "abab"]
        );
    }

    #[test]
    fn all_states_accessible() {
        let ab = Alphabet::from_letters("ab").unwrap();
        let n = parse_regex("ab(a|b)*", &ab).unwrap();
        assert!(n.accessible_states().iter().all(|&b| b));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let ab = Alphabet::from_letters("ab").unwrap();
        assert_eq!(
            parse_regex("a(b", &ab),
            Err(Error::RegexSyntax {
                position: 3,
                message: "expected ')'".into()
            })
        );
        assert!(matches!(
            parse_regex("a|", &ab),
            Err(Error::RegexSyntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_regex("*a", &ab),
            Err(Error::RegexSyntax { position: 0, .. })
        ));
        assert!(matches!(
            parse_regex("ab)", &ab),
            Err(Error::RegexSyntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_regex("%x", &ab),
            Err(Error::RegexSyntax { position: 0, .. })
        ));
        assert_eq!(parse_regex("ac", &ab), Err(Error::UnknownLetter('c')));
    }
}
