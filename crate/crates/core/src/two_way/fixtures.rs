//! Small hand-built automata shared by tests, the acceptance suite and the
//! command line examples.

use crate::alphabet::Alphabet;
use crate::automata::parse_regex;
use crate::two_way::{
    compile_ranker, complement_one_pass, convert_flip_fully, from_one_way, Builder, Conversion,
    Direction, TwoWayAutomaton,
};

fn abc() -> Alphabet {
    Alphabet::from_letters("abc").expect("valid alphabet")
}

/// Flip one-pass po2dfa for `{a,c}* ab A*` over `{a,b,c}`: scan right to
/// the first `b`, then step back and check the letter before it.
pub fn first_ab_after_ac() -> TwoWayAutomaton {
    use Direction::*;
    let mut b = Builder::new(abc());
    let x0 = b.state("x0", Right, false);
    let y1 = b.state("y1", Left, false);
    let xf = b.state("xf", Right, true);
    let xd = b.state("xd", Right, false);
    b.initial(x0)
        .edges(x0, "ac<", x0)
        .edges(x0, "b", y1)
        .edges(y1, "a", xf)
        .edges(y1, "bc>", xd)
        .edges(xf, "abc<", xf)
        .edges(xd, "abc<", xd);
    b.build().expect("valid fixture")
}

/// po2dfa for `A* ab {b,c}*` over `{a,b,c}`: run to `◁`, scan left to the
/// last `a`, then check that a `b` follows it. Not one-pass.
pub fn last_a_then_b() -> TwoWayAutomaton {
    use Direction::*;
    let mut b = Builder::new(abc());
    let x0 = b.state("x0", Right, false);
    let y1 = b.state("y1", Left, false);
    let x2 = b.state("x2", Right, false);
    let xf = b.state("xf", Right, true);
    let xd = b.state("xd", Right, false);
    b.initial(x0)
        .edges(x0, "abc", x0)
        .edges(x0, "<", y1)
        .edges(y1, "bc", y1)
        .edges(y1, "a", x2)
        .edges(y1, ">", xd)
        .edges(x2, "b", xf)
        .edges(x2, "ac<", xd)
        .edges(xf, "abc<", xf)
        .edges(xd, "abc<", xd);
    b.build().expect("valid fixture")
}

/// Rankers compiled over `{a,b,c}`.
pub const RANKERS: [&str; 12] = [
    "Xa",
    "Xb",
    "Xa Xa",
    "Xa Xb",
    "Xb Ya",
    "Xa Yb Xc",
    "Xc Yc Yb Xa",
    "Xa Xb Xc",
    "Xb Yc",
    "Xc Ya Xb",
    "Xa Ya",
    "Xb Xb Ya",
];

/// Every fixture, named.
pub fn all() -> Vec<(String, TwoWayAutomaton)> {
    let al = abc();
    let mut out = vec![
        ("empty".to_string(), TwoWayAutomaton::empty(al.clone())),
        ("first_ab_after_ac".to_string(), first_ab_after_ac()),
        ("last_a_then_b".to_string(), last_a_then_b()),
    ];
    for r in RANKERS {
        let t = compile_ranker(&r.parse().expect("valid ranker"), &al).expect("X-ranker");
        out.push((format!("ranker {r}"), t));
    }
    for re in ["(a|b)*c", "a(a|b|c)*", "(b|c)*", "%e", "(a|b|c)*ab"] {
        let d = parse_regex(re, &al)
            .expect("valid regex")
            .determinize()
            .minimize();
        out.push((format!("one-way {re}"), from_one_way(&d)));
    }
    let mut derived = Vec::new();
    for (name, t) in &out {
        if let Ok(c) = complement_one_pass(t) {
            derived.push((format!("complement of {name}"), c.clone()));
            if let Ok(f) = convert_flip_fully(&c, Conversion::FlipToFully) {
                derived.push((format!("flip_to_fully of complement of {name}"), f.clone()));
                if let Ok(g) = convert_flip_fully(&f, Conversion::FullyToFlip) {
                    derived.push((
                        format!("fully_to_flip of flip_to_fully of complement of {name}"),
                        g,
                    ));
                }
            }
        }
        if let Ok(f) = convert_flip_fully(t, Conversion::FlipToFully) {
            derived.push((format!("flip_to_fully of {name}"), f));
        }
    }
    out.extend(derived);
    out
}
