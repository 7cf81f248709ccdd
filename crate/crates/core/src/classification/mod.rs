//! Decision procedures for the ideal hierarchy, cross-validated.
//!
//! Every property is decided on the syntactic monoid. Where an automaton
//! characterization exists it is run as a second route, on the canonical
//! form it requires: flip on the complete minimal DFA, fully accepting on the
//! trim minimal DFA, weak on the minimal DFA, each on the reversal for the
//! left-handed properties. The catalog identity is checked in monoid mode as
//! a third route, and a bounded word oracle as a fourth.

mod oracle;
mod shape;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::{to_minimal_dfa, Dfa, Nfa};
use crate::error::Result;
use crate::identities::{check_in_monoid, LatticeIdentity, WordsBounds, DEFAULT_BUDGET};
use crate::monoid::{
    class_violation, ideal_violation, syntactic_monoid, AcceptingSet, Element, FiniteMonoid,
    GreenKind, GreenStructure, IdealKind,
};
use crate::two_way::{to_one_way_dfa, TwoWayAutomaton};

pub use oracle::{brute_force_oracle, brute_force_oracle_with, OracleOutcome, Separation};
pub use shape::{check_shape, Shape};

/// Default length bound of the definitional oracle.
pub const DEFAULT_ORACLE_MAX_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    #[serde(rename = "right_ideal")]
    RightIdeal,
    #[serde(rename = "left_ideal")]
    LeftIdeal,
    #[serde(rename = "two_sided_ideal")]
    TwoSidedIdeal,
    #[serde(rename = "prefix_closed")]
    PrefixClosed,
    #[serde(rename = "suffix_closed")]
    SuffixClosed,
    #[serde(rename = "factorial")]
    Factorial,
    #[serde(rename = "bc_right_ideals")]
    BcRightIdeals,
    #[serde(rename = "bc_left_ideals")]
    BcLeftIdeals,
    #[serde(rename = "bc_two_sided_ideals")]
    BcTwoSidedIdeals,
    #[serde(rename = "in_DA")]
    InDa,
    #[serde(rename = "aperiodic")]
    Aperiodic,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::RightIdeal,
        Property::LeftIdeal,
        Property::TwoSidedIdeal,
        Property::PrefixClosed,
        Property::SuffixClosed,
        Property::Factorial,
        Property::BcRightIdeals,
        Property::BcLeftIdeals,
        Property::BcTwoSidedIdeals,
        Property::InDa,
        Property::Aperiodic,
    ];

    /// Report key.
    pub fn name(self) -> &'static str {
        match self {
            Property::RightIdeal => "right_ideal",
            Property::LeftIdeal => "left_ideal",
            Property::TwoSidedIdeal => "two_sided_ideal",
            Property::PrefixClosed => "prefix_closed",
            Property::SuffixClosed => "suffix_closed",
            Property::Factorial => "factorial",
            Property::BcRightIdeals => "bc_right_ideals",
            Property::BcLeftIdeals => "bc_left_ideals",
            Property::BcTwoSidedIdeals => "bc_two_sided_ideals",
            Property::InDa => "in_DA",
            Property::Aperiodic => "aperiodic",
        }
    }

    /// Name of the characterizing identity in the catalog.
    pub fn identity_name(self) -> Option<&'static str> {
        Some(match self {
            Property::RightIdeal => "right-ideal",
            Property::LeftIdeal => "left-ideal",
            Property::TwoSidedIdeal => "two-sided-ideal",
            Property::PrefixClosed => "prefix-closed",
            Property::SuffixClosed => "suffix-closed",
            Property::Factorial => "factorial",
            Property::BcRightIdeals => "bc-right",
            Property::BcLeftIdeals => "bc-left",
            Property::BcTwoSidedIdeals => "bc-two-sided",
            Property::InDa => "da",
            Property::Aperiodic => "aperiodic",
        })
    }

    /// Accepts the report key or the catalog name.
    pub fn parse(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| {
            p.name() == name
                || p.identity_name() == Some(name)
                || p.name().replace('_', "-") == name
        })
    }

    /// Ideal and closure properties, which have direct word-level
    /// definitions.
    pub fn is_definitional(self) -> bool {
        matches!(
            self,
            Property::RightIdeal
                | Property::LeftIdeal
                | Property::TwoSidedIdeal
                | Property::PrefixClosed
                | Property::SuffixClosed
                | Property::Factorial
        )
    }

    /// Automaton-shape characterization: every listed shape must hold on the
    /// listed variant.
    pub fn shape_route(self) -> &'static [(Variant, Shape)] {
        use Shape::*;
        use Variant::*;
        match self {
            Property::RightIdeal => &[(CompleteMinimal, Flip)],
            Property::LeftIdeal => &[(ReversedCompleteMinimal, Flip)],
            Property::TwoSidedIdeal => &[(CompleteMinimal, Flip), (ReversedCompleteMinimal, Flip)],
            Property::PrefixClosed => &[(TrimMinimal, FullyAccepting)],
            Property::SuffixClosed => &[(ReversedTrimMinimal, FullyAccepting)],
            Property::Factorial => &[
                (TrimMinimal, FullyAccepting),
                (ReversedTrimMinimal, FullyAccepting),
            ],
            Property::BcRightIdeals => &[(CompleteMinimal, Weak)],
            Property::BcLeftIdeals => &[(ReversedCompleteMinimal, Weak)],
            Property::BcTwoSidedIdeals => {
                &[(CompleteMinimal, Weak), (ReversedCompleteMinimal, Weak)]
            }
            Property::InDa | Property::Aperiodic => &[],
        }
    }
}

/// Canonical automaton a shape check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    CompleteMinimal,
    TrimMinimal,
    ReversedCompleteMinimal,
    ReversedTrimMinimal,
}

/// The four canonical forms of one language.
#[derive(Debug, Clone)]
pub struct CanonicalForms {
    pub complete_minimal: Dfa,
    pub trim_minimal: Dfa,
    pub reversed_complete_minimal: Dfa,
    pub reversed_trim_minimal: Dfa,
}

impl CanonicalForms {
    pub fn of(d: &Dfa) -> Self {
        let complete_minimal = d.minimize();
        let reversed = to_minimal_dfa(&complete_minimal.to_nfa().reverse());
        Self {
            trim_minimal: complete_minimal.trim(),
            reversed_trim_minimal: reversed.trim(),
            complete_minimal,
            reversed_complete_minimal: reversed,
        }
    }

    pub fn get(&self, v: Variant) -> &Dfa {
        match v {
            Variant::CompleteMinimal => &self.complete_minimal,
            Variant::TrimMinimal => &self.trim_minimal,
            Variant::ReversedCompleteMinimal => &self.reversed_complete_minimal,
            Variant::ReversedTrimMinimal => &self.reversed_trim_minimal,
        }
    }

    pub fn shape_verdict(&self, p: Property) -> Option<bool> {
        let route = p.shape_route();
        (!route.is_empty()).then(|| {
            route
                .iter()
                .all(|&(v, s)| check_shape(&self.get(v).to_nfa(), s))
        })
    }
}

/// A language given as a regex, a one-way automaton or a deterministic
/// two-way automaton.
#[derive(Debug, Clone)]
pub enum LanguageInput {
    Regex { pattern: String, alphabet: Alphabet },
    Automaton(Nfa),
    TwoWay(TwoWayAutomaton),
}

impl LanguageInput {
    pub fn to_dfa(&self) -> Result<Dfa> {
        Ok(match self {
            LanguageInput::Regex { pattern, alphabet } => {
                to_minimal_dfa(&crate::automata::parse_regex(pattern, alphabet)?)
            }
            LanguageInput::Automaton(a) => to_minimal_dfa(a),
            LanguageInput::TwoWay(t) => to_one_way_dfa(t)?.minimize(),
        })
    }

    fn source(&self) -> String {
        match self {
            LanguageInput::Regex { pattern, .. } => pattern.clone(),
            LanguageInput::Automaton(a) => format!("automaton with {} states", a.num_states()),
            LanguageInput::TwoWay(t) => {
                format!("two-way automaton with {} states", t.num_states())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// `None` skips the bounded oracle.
    pub oracle: Option<OracleBounds>,
    pub identity_budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_len: usize,
    pub words: WordsBounds,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_ORACLE_MAX_LEN,
            words: WordsBounds::default(),
        }
    }
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            oracle: Some(OracleBounds::default()),
            identity_budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub language: LanguageInfo,
    pub properties: BTreeMap<Property, PropertyEntry>,
    pub cross_checks: BTreeMap<Property, CrossCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageInfo {
    pub source: String,
    pub minimal_dfa_states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyEntry {
    pub verdict: bool,
    pub route: Route,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Monoid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    /// The monoid fact that was checked.
    pub fact: String,
    pub monoid_size: usize,
    pub counterexample: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two words that the property forces to agree on membership.
    Separation { member: String, non_member: String },
    /// Words whose images violate a monoid equation.
    Assignment {
        equation: String,
        assignment: BTreeMap<char, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub shape: Option<ShapeCheck>,
    pub identity: IdentityCheck,
    pub oracle: Option<OracleCheck>,
    /// No route contradicts the verdict.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeCheck {
    pub runs: Vec<ShapeRun>,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeRun {
    pub automaton: Variant,
    pub states: usize,
    pub shape: Shape,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub verdict: bool,
    pub counterexample: Option<BTreeMap<char, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub method: OracleMethod,
    pub refuted: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleMethod {
    Definitional { max_len: usize },
    WordsIdentity { max_n: usize, max_image_len: usize },
}

impl ClassificationReport {
    pub fn verdict(&self, p: Property) -> bool {
        self.properties[&p].verdict
    }

    pub fn all_agree(&self) -> bool {
        self.cross_checks.values().all(|c| c.agree)
    }

    /// Logical relations every report must satisfy; returns the violated
    /// ones.
    pub fn invariant_violations(&self) -> Vec<&'static str> {
        use Property::*;
        let v = |p| self.verdict(p);
        let rules: [(&str, bool); 9] = [
            (
                "factorial ⟺ prefix_closed ∧ suffix_closed",
                v(Factorial) == (v(PrefixClosed) && v(SuffixClosed)),
            ),
            (
                "two_sided_ideal ⟹ right_ideal ∧ left_ideal",
                !v(TwoSidedIdeal) || (v(RightIdeal) && v(LeftIdeal)),
            ),
            (
                "bc_two_sided ⟺ bc_right ∧ bc_left",
                v(BcTwoSidedIdeals) == (v(BcRightIdeals) && v(BcLeftIdeals)),
            ),
            ("right_ideal ⟹ bc_right", !v(RightIdeal) || v(BcRightIdeals)),
            ("left_ideal ⟹ bc_left", !v(LeftIdeal) || v(BcLeftIdeals)),
            (
                "two_sided_ideal ⟹ bc_two_sided",
                !v(TwoSidedIdeal) || v(BcTwoSidedIdeals),
            ),
            (
                "prefix_closed ⟹ bc_right",
                !v(PrefixClosed) || v(BcRightIdeals),
            ),
            (
                "suffix_closed ⟹ bc_left",
                !v(SuffixClosed) || v(BcLeftIdeals),
            ),
            ("in_DA ⟹ aperiodic", !v(InDa) || v(Aperiodic)),
        ];
        rules
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

pub fn classify(input: &LanguageInput, options: ClassifyOptions) -> Result<ClassificationReport> {
    classify_dfa(&input.to_dfa()?, input.source(), options)
}

pub fn classify_dfa(
    d: &Dfa,
    source: String,
    options: ClassifyOptions,
) -> Result<ClassificationReport> {
    let forms = CanonicalForms::of(d);
    let (m, p) = syntactic_monoid(&forms.complete_minimal)?;
    let green = m.green();
    let ctx = Context {
        m: &m,
        p: &p,
        green: &green,
    };
    let mut properties = BTreeMap::new();
    let mut cross_checks = BTreeMap::new();
    for prop in Property::ALL {
        let entry = ctx.decide(prop);
        let shape = (!prop.shape_route().is_empty()).then(|| {
            let runs: Vec<ShapeRun> = prop
                .shape_route()
                .iter()
                .map(|&(v, s)| {
                    let a = forms.get(v).to_nfa();
                    ShapeRun {
                        automaton: v,
                        states: a.num_states(),
                        shape: s,
                        holds: check_shape(&a, s),
                    }
                })
                .collect();
            let verdict = runs.iter().all(|r| r.holds);
            ShapeCheck { runs, verdict }
        });
        let identity = ctx.identity_check(prop, options.identity_budget)?;
        let oracle = match options.oracle {
            Some(b) => Some(oracle_check(&forms.complete_minimal, prop, b)?),
            None => None,
        };
        let agree = shape.as_ref().is_none_or(|s| s.verdict == entry.verdict)
            && identity.verdict == entry.verdict
            && !(entry.verdict && oracle.as_ref().is_some_and(|o| o.refuted));
        properties.insert(prop, entry);
        cross_checks.insert(
            prop,
            CrossCheck {
                shape,
                identity,
                oracle,
                agree,
            },
        );
    }
    Ok(ClassificationReport {
        language: LanguageInfo {
            source,
            minimal_dfa_states: forms.complete_minimal.num_states(),
        },
        properties,
        cross_checks,
    })
}

fn oracle_check(d: &Dfa, prop: Property, b: OracleBounds) -> Result<OracleCheck> {
    let method = if prop.is_definitional() {
        OracleMethod::Definitional { max_len: b.max_len }
    } else {
        OracleMethod::WordsIdentity {
            max_n: b.words.max_n,
            max_image_len: b.words.max_image_len,
        }
    };
    let out = brute_force_oracle_with(&d.to_nfa(), prop, b.max_len, b.words)?;
    let al = d.alphabet();
    Ok(OracleCheck {
        method,
        refuted: out.is_refuted(),
        witness: match out {
            OracleOutcome::Consistent => None,
            OracleOutcome::Refuted(s) => Some(Witness::Separation {
                member: al.render(s.member.letters()),
                non_member: al.render(s.non_member.letters()),
            }),
        },
    })
}

struct Context<'a> {
    m: &'a FiniteMonoid,
    p: &'a AcceptingSet,
    green: &'a GreenStructure,
}

impl Context<'_> {
    fn render(&self, w: &Word) -> String {
        self.m.alphabet().render(w.letters())
    }

    fn letter_of(&self, g: Element) -> Letter {
        self.m
            .alphabet()
            .iter()
            .find(|&a| self.m.generator(a) == g)
            .expect("violations use generators")
    }

    fn separation(&self, member: Word, non_member: Word) -> Witness {
        Witness::Separation {
            member: self.render(&member),
            non_member: self.render(&non_member),
        }
    }

    fn assignment(&self, equation: &str, vars: &[(char, Element)]) -> Witness {
        Witness::Assignment {
            equation: equation.to_string(),
            assignment: vars
                .iter()
                .map(|&(v, x)| (v, self.render(self.m.representative(x))))
                .collect(),
        }
    }

    /// `x` extended by the generator `g` on the side recorded in `kind`.
    fn extend(&self, x: Element, g: Element, kind: IdealKind) -> Word {
        let a = Word(vec![self.letter_of(g)]);
        let u = self.m.representative(x);
        match kind {
            IdealKind::Left => a.concat(u),
            _ => u.concat(&a),
        }
    }

    fn decide(&self, prop: Property) -> PropertyEntry {
        let (m, p) = (self.m, self.p);
        let (fact, counterexample) = match prop {
            Property::RightIdeal | Property::LeftIdeal | Property::TwoSidedIdeal => {
                let kind = ideal_kind(prop);
                let w = ideal_violation(m, p, kind).map(|(x, g, side)| {
                    self.separation(m.representative(x).clone(), self.extend(x, g, side))
                });
                (format!("h(L) is a {} ideal of M", kind_name(kind)), w)
            }
            Property::PrefixClosed | Property::SuffixClosed | Property::Factorial => {
                let kind = match prop {
                    Property::PrefixClosed => IdealKind::Right,
                    Property::SuffixClosed => IdealKind::Left,
                    _ => IdealKind::TwoSided,
                };
                let w = ideal_violation(m, &p.complement(), kind).map(|(x, g, side)| {
                    self.separation(self.extend(x, g, side), m.representative(x).clone())
                });
                (format!("M ∖ h(L) is a {} ideal of M", kind_name(kind)), w)
            }
            Property::BcRightIdeals | Property::BcLeftIdeals | Property::BcTwoSidedIdeals => {
                let kind = match prop {
                    Property::BcRightIdeals => GreenKind::R,
                    Property::BcLeftIdeals => GreenKind::L,
                    _ => GreenKind::J,
                };
                let w = class_violation(self.green, p, kind).map(|(i, o)| {
                    self.separation(m.representative(i).clone(), m.representative(o).clone())
                });
                (format!("h(L) is a union of {kind:?}-classes"), w)
            }
            Property::InDa => {
                let omega = m.omega_table();
                let bad = m.elements().find_map(|x| {
                    m.elements()
                        .find(|&y| {
                            let e = omega[m.mul(x, y)];
                            m.mul(m.mul(e, x), e) != e
                        })
                        .map(|y| (x, y))
                });
                let w = bad.map(|(x, y)| {
                    self.assignment("(xy)^w = (xy)^w x (xy)^w", &[('x', x), ('y', y)])
                });
                ("(xy)^w = (xy)^w x (xy)^w holds in M".to_string(), w)
            }
            Property::Aperiodic => {
                let bad = m.elements().find(|&x| {
                    let e = m.omega(x);
                    m.mul(e, x) != e
                });
                let w = bad.map(|x| self.assignment("x^w x = x^w", &[('x', x)]));
                ("x^w x = x^w holds in M".to_string(), w)
            }
        };
        PropertyEntry {
            verdict: counterexample.is_none(),
            route: Route::Monoid,
            evidence: Evidence {
                fact,
                monoid_size: m.size(),
                counterexample,
            },
        }
    }

    fn identity_check(&self, prop: Property, budget: u64) -> Result<IdentityCheck> {
        let name = prop
            .identity_name()
            .expect("every property has an identity");
        let id = LatticeIdentity::named(name)?;
        let out = check_in_monoid(self.m, self.p, &id, budget)?;
        Ok(IdentityCheck {
            identity: name.to_string(),
            verdict: out.holds,
            counterexample: out.counterexample.map(|c| {
                c.assignment
                    .iter()
                    .map(|(&v, w)| (v, self.render(w)))
                    .collect()
            }),
        })
    }
}

fn ideal_kind(p: Property) -> IdealKind {
    match p {
        Property::RightIdeal => IdealKind::Right,
        Property::LeftIdeal => IdealKind::Left,
        _ => IdealKind::TwoSided,
    }
}

fn kind_name(k: IdealKind) -> &'static str {
    match k {
        IdealKind::Right => "right",
        IdealKind::Left => "left",
        IdealKind::TwoSided => "two-sided",
    }
}
