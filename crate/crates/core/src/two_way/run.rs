use serde::Serialize;

use crate::alphabet::Letter;
use crate::automata::StateId;
use crate::bitset::BitSet;
use crate::error::Result;
use crate::two_way::{Symbol, TwoWayAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    pub state: StateId,
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "at", rename_all = "snake_case")]
pub enum Outcome {
    /// The head left the tape in this final state.
    Accept(StateId),
    /// The head left the tape in this non-final state.
    Reject(StateId),
    /// A configuration repeated.
    Loop,
    /// No transition applies; `None` for the empty automaton, which has no
    /// run at all.
    Stuck(Option<Configuration>),
}

impl Outcome {
    pub fn accepted(self) -> bool {
        matches!(self, Outcome::Accept(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Every configuration of the run, starting with `(x₀, 1)`.
    pub trace: Vec<Configuration>,
}

/// Deterministic run on `▷w◁`. At most `|Z|·(|w|+2)` distinct
/// configurations exist, so the run ends or repeats one within that many
/// steps plus one.
pub fn simulate(t: &TwoWayAutomaton, w: &[Letter]) -> Result<RunResult> {
    t.ensure_valid()?;
    Ok(run(t, w))
}

pub(crate) fn run(t: &TwoWayAutomaton, w: &[Letter]) -> RunResult {
    let Some(x0) = t.initial() else {
        return RunResult {
            outcome: Outcome::Stuck(None),
            trace: Vec::new(),
        };
    };
    let end = w.len() + 2;
    let mut seen = BitSet::new(t.num_states() * end);
    let mut c = Configuration {
        state: x0,
        position: 1,
    };
    let mut trace = vec![c];
    loop {
        if c.position == end {
            let outcome = if t.is_final(c.state) {
                Outcome::Accept(c.state)
            } else {
                Outcome::Reject(c.state)
            };
            return RunResult { outcome, trace };
        }
        if !seen.insert(c.state * end + c.position) {
            return RunResult {
                outcome: Outcome::Loop,
                trace,
            };
        }
        let symbol = match c.position {
            0 => Symbol::Begin,
            p if p == w.len() + 1 => Symbol::End,
            p => Symbol::Letter(w[p - 1]),
        };
        let Some(next) = t.step(c.state, symbol) else {
            return RunResult {
                outcome: Outcome::Stuck(Some(c)),
                trace,
            };
        };
        c = Configuration {
            state: next,
            position: if t.is_right(next) {
                c.position + 1
            } else {
                // validity keeps left moves off position 0
                c.position - 1
            },
        };
        trace.push(c);
    }
}

/// Membership without keeping the trace result around.
#[cfg(test)]
pub(crate) fn accepts(t: &TwoWayAutomaton, w: &[Letter]) -> bool {
    run(t, w).outcome.accepted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::two_way::{Builder, Direction};

    #[test]
    fn empty_automaton_rejects_by_getting_stuck() {
        let t = TwoWayAutomaton::empty(Alphabet::from_letters("ab").unwrap());
        let r = simulate(&t, &[0, 1]).unwrap();
        assert_eq!(r.outcome, Outcome::Stuck(None));
        assert!(!r.outcome.accepted());
    }

    #[test]
    fn oscillation_is_a_loop() {
        let al = Alphabet::from_letters("a").unwrap();
        let mut b = Builder::new(al);
        let x = b.state("x", Direction::Right, true);
        let y = b.state("y", Direction::Left, true);
        b.initial(x)
            .edges(x, "a", y)
            .edges(y, "a", x)
            .edges(y, ">", x);
        let t = b.build().unwrap();
        let r = simulate(&t, &[0, 0]).unwrap();
        assert_eq!(r.outcome, Outcome::Loop);
        // (x,1) (y,0) (x,1) repeats
        assert_eq!(r.trace.len(), 3);
    }

    #[test]
    fn accepts_at_the_far_end() {
        let al = Alphabet::from_letters("ab").unwrap();
        let mut b = Builder::new(al);
        let x = b.state("x", Direction::Right, true);
        b.initial(x).edges(x, "ab<", x);
        let t = b.build().unwrap();
        let r = simulate(&t, &[0, 1]).unwrap();
        assert_eq!(r.outcome, Outcome::Accept(x));
        assert_eq!(r.trace.last().unwrap().position, 4);
        assert_eq!(r.trace.len(), 4);
    }

    #[test]
    fn stuck_reports_the_configuration() {
        let al = Alphabet::from_letters("ab").unwrap();
        let mut b = Builder::new(al);
        let x = b.state("x", Direction::Right, true);
        b.initial(x).edges(x, "a<", x);
        let t = b.build().unwrap();
        let r = simulate(&t, &[0, 1]).unwrap();
        assert_eq!(
            r.outcome,
            Outcome::Stuck(Some(Configuration {
                state: x,
                position: 2
            }))
        );
    }

    #[test]
    fn invalid_automata_are_refused() {
        let al = Alphabet::from_letters("a").unwrap();
        let mut b = Builder::new(al);
        let y = b.state("y", Direction::Left, false);
        b.initial(y);
        assert!(simulate(&b.build().unwrap(), &[]).is_err());
    }
}
