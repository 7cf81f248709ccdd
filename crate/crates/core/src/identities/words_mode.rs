//! Bounded word-level oracle: substitutes short words for the variables,
//! expands `^w` literally as the `n!`-th power and runs the DFA.
//!
//! Only `n = max_n` is tried. The semantics quantify over all sufficiently
//! large `n`, and a small `n` whose factorial is below an element's index
//! or not a multiple of its period can refute identities that hold.

use std::collections::BTreeMap;

use crate::alphabet::Word;
use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::identities::{
    expand_term, Counterexample, IdentityMode, IdentityOutcome, LatticeIdentity, OmegaTerm,
    DEFAULT_EXPANSION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordsBounds {
    pub max_n: usize,
    pub max_image_len: usize,
    pub expansion_cap: usize,
}

impl Default for WordsBounds {
    fn default() -> Self {
        Self {
            max_n: 3,
            max_image_len: 2,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

/// One top-level factor with a lazily filled table of its state
/// transformations, indexed by the images of its variables.
struct Factor {
    expansion: Vec<char>,
    /// positions of the factor's variables in the global variable list
    vars: Vec<usize>,
    table: Vec<Option<Vec<StateId>>>,
}

pub fn check_words(d: &Dfa, id: &LatticeIdentity, bounds: WordsBounds) -> Result<IdentityOutcome> {
    if bounds.max_n == 0 {
        return Err(Error::Precondition("words mode needs max_n ≥ 1".into()));
    }
    let d = d.complete();
    let q0 = d.initial().expect("complete");
    let images = d.alphabet().words_up_to(bounds.max_image_len);
    let vars: Vec<char> = id.vars().into_iter().collect();
    let make = |t: &OmegaTerm| -> Result<Factor> {
        let expansion = expand_term(t, bounds.max_n, bounds.expansion_cap)?;
        let longest = expansion.len().saturating_mul(bounds.max_image_len);
        if longest > bounds.expansion_cap {
            return Err(Error::TooLarge {
                what: "term expansion",
                size: longest,
                limit: bounds.expansion_cap,
            });
        }
        let fv = t.vars();
        let positions: Vec<usize> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| fv.contains(v))
            .map(|(i, _)| i)
            .collect();
        let cells = images.len().pow(positions.len() as u32);
        Ok(Factor {
            expansion,
            vars: positions,
            table: vec![None; cells],
        })
    };
    let mut lhs = id
        .lhs
        .factors()
        .iter()
        .map(make)
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = id
        .rhs
        .factors()
        .iter()
        .map(make)
        .collect::<Result<Vec<_>>>()?;

    let run = |factors: &mut [Factor], digits: &[usize]| -> bool {
        let mut q = q0;
        for f in factors.iter_mut() {
            let cell = f
                .vars
                .iter()
                .fold(0, |acc, &i| acc * images.len() + digits[i]);
            let trans = f.table[cell].get_or_insert_with(|| {
                let word: Vec<usize> = f
                    .expansion
                    .iter()
                    .flat_map(|v| {
                        let i = vars.iter().position(|w| w == v).expect("bound variable");
                        images[digits[i]].letters().iter().copied()
                    })
                    .collect();
                (0..d.num_states())
                    .map(|p| d.run_from(p, &word).expect("complete"))
                    .collect()
            });
            q = trans[q];
        }
        d.is_final(q)
    };

    let mut digits = vec![0; vars.len()];
    loop {
        let l = run(&mut lhs, &digits);
        let r = run(&mut rhs, &digits);
        let bad = match id.mode {
            IdentityMode::Implies => l && !r,
            IdentityMode::Iff => l != r,
        };
        if bad {
            let assignment: BTreeMap<char, Word> = vars
                .iter()
                .zip(&digits)
                .map(|(&v, &i)| (v, images[i].clone()))
                .collect();
            return Ok(IdentityOutcome {
                holds: false,
                counterexample: Some(Counterexample {
                    assignment,
                    elements: None,
                    n: Some(bounds.max_n),
                    lhs_member: l,
                    rhs_member: r,
                }),
            });
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(IdentityOutcome {
                    holds: true,
                    counterexample: None,
                });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < images.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}
