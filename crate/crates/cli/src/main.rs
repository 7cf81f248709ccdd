//! `regideal`: classify regular languages by their ideal structure and run
//! the conversions between the automaton models involved.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
//! unusable input.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use regideal::automata::json::{canonical_json, AutomatonJson};
use regideal::automata::{Dfa, Nfa};
use regideal::classification::{
    brute_force_oracle_with, check_shape, classify, ClassifyOptions, LanguageInput, OracleBounds,
    OracleOutcome, Property, Shape, DEFAULT_ORACLE_MAX_LEN,
};
use regideal::constructions::{
    bc_decomposition, nfa_to_weak, to_staiger_wagner, weak_to_flip_union,
};
use regideal::identities::{check_identity, CheckMode, LatticeIdentity, WordsBounds};
use regideal::two_way::{
    compile_ranker, complement_one_pass, convert_flip_fully, eval_ranker, extract_monomials,
    monomial_check, simulate, to_one_way_dfa, Conversion, MonomialCheck, Outcome, Ranker,
    TwoWayAutomaton, TwoWayJson, TwoWayShape, DEFAULT_EXTRACTION_CAP,
};
use regideal::{Alphabet, Error};

#[derive(Parser)]
#[command(
    name = "regideal",
    version,
    about = "Ideal structure of regular languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Print only the verdict.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Regular expression; `|`, `*`, `+`, `?`, parentheses, `%e` for the
    /// empty word and `%0` for the empty language.
    #[arg(long)]
    regex: Option<String>,

    /// Automaton JSON file, one-way or two-way; `-` reads standard input.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args, Clone)]
struct Input {
    #[command(flatten)]
    source: Source,

    /// Alphabet of a regex, as a string of letters.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide every property and cross-check the routes.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Length bound of the word oracle.
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX_LEN)]
        max_len: usize,
        /// Skip the word oracle.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Convert the input to another automaton model.
    Convert {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Check an identity on the language, or a shape on the automaton.
    Check {
        #[command(flatten)]
        input: Input,
        /// Catalog identity, e.g. `bc-right` or `da`.
        #[arg(long, group = "what")]
        identity: Option<String>,
        /// Identity such as `z(xy)^w x <=> z(xy)^w`.
        #[arg(long, group = "what")]
        identity_expr: Option<String>,
        /// Structural shape of the automaton as given.
        #[arg(long, group = "what")]
        shape: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Monoid)]
        mode: Mode,
        /// Largest `n` substituted for `ω` in words mode.
        #[arg(long)]
        max_n: Option<usize>,
        /// Longest variable image in words mode.
        #[arg(long)]
        max_image_len: Option<usize>,
    },
    /// Run a two-way automaton and print the trace.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Evaluate or compile a ranker such as `Xa Yb Xc`.
    #[command(group(ArgGroup::new("op").required(true)))]
    Ranker {
        #[arg(long, group = "op", requires = "word")]
        eval: Option<String>,
        #[arg(long, group = "op", requires = "alphabet")]
        compile: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Unambiguous monomials covering a flip one-pass two-way automaton.
    Monomials {
        #[command(flatten)]
        input: Input,
        #[arg(long, required = true)]
        extract: bool,
        /// Longest word examined.
        #[arg(long, default_value_t = DEFAULT_EXTRACTION_CAP)]
        cap: usize,
    },
    /// Bounded search for a word-level refutation of a property.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX_LEN)]
        max_len: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    MinDfa,
    StaigerWagner,
    FlipUnion,
    WeakNfa,
    BcDecomposition,
    OneWay,
    Complement,
    FlipToFully,
    FullyToFlip,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Monoid,
    Words,
}

/// What a command produced.
struct Output {
    value: Value,
    text: String,
    /// `None` for commands without a verdict.
    verdict: Option<bool>,
}

impl Output {
    fn new(value: impl Serialize, text: String, verdict: Option<bool>) -> Self {
        Self {
            value: serde_json::to_value(value).expect("serializable"),
            text,
            verdict,
        }
    }
}

enum Loaded {
    OneWay(Nfa),
    TwoWay(TwoWayAutomaton),
}

impl Input {
    fn load(&self) -> Result<(LanguageInput, Loaded), Error> {
        if let Some(pattern) = &self.source.regex {
            let letters = self
                .alphabet
                .as_deref()
                .ok_or_else(|| Error::Malformed("--regex needs --alphabet".into()))?;
            let alphabet = Alphabet::from_letters(letters)?;
            let nfa = regideal::automata::to_minimal_dfa(&regideal::automata::parse_regex(
                pattern, &alphabet,
            )?)
            .to_nfa();
            let input = LanguageInput::Regex {
                pattern: pattern.clone(),
                alphabet,
            };
            return Ok((input, Loaded::OneWay(nfa)));
        }
        let path = self
            .source
            .file
            .as_deref()
            .expect("clap enforces one source");
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Malformed(format!("standard input: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path}: {e}")))?
        };
        let value: Value =
            serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
        if value.get("right_states").is_some() {
            let t = TwoWayJson::parse(&text)?.to_automaton()?;
            t.ensure_valid()?;
            Ok((LanguageInput::TwoWay(t.clone()), Loaded::TwoWay(t)))
        } else {
            let a = AutomatonJson::parse(&text)?.to_nfa()?;
            Ok((LanguageInput::Automaton(a.clone()), Loaded::OneWay(a)))
        }
    }

    fn two_way(&self) -> Result<TwoWayAutomaton, Error> {
        match self.load()?.1 {
            Loaded::TwoWay(t) => Ok(t),
            Loaded::OneWay(_) => Err(Error::Malformed("a two-way automaton is required".into())),
        }
    }

    /// The automaton itself when it is deterministic; regexes give their
    /// minimal DFA and two-way automata their one-way conversion.
    fn dfa(&self) -> Result<Dfa, Error> {
        match self.load()?.1 {
            Loaded::OneWay(a) => Dfa::from_nfa(&a),
            Loaded::TwoWay(t) => Ok(to_one_way_dfa(&t)?.minimize()),
        }
    }

    fn nfa(&self) -> Result<Nfa, Error> {
        match self.load()?.1 {
            Loaded::OneWay(a) => Ok(a),
            Loaded::TwoWay(t) => Ok(to_one_way_dfa(&t)?.minimize().to_nfa()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            let text = if cli.quiet {
                out.verdict.map(|v| format!("{v}\n")).unwrap_or_default()
            } else {
                match cli.format {
                    Format::Json => format!("{}\n", canonical_json(&out.value)),
                    Format::Text => out.text.clone(),
                }
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if out.verdict == Some(false) { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Output, Error> {
    match command {
        Command::Classify {
            input,
            max_len,
            no_oracle,
        } => {
            let (language, _) = input.load()?;
            let options = ClassifyOptions {
                oracle: (!no_oracle).then(|| OracleBounds {
                    max_len: *max_len,
                    ..Default::default()
                }),
                ..Default::default()
            };
            let report = classify(&language, options)?;
            let mut text = format!(
                "{} ({} states)\n",
                report.language.source, report.language.minimal_dfa_states
            );
            for (p, entry) in &report.properties {
                let agree = if report.cross_checks[p].agree {
                    ""
                } else {
                    "  routes disagree"
                };
                text += &format!("{:<20} {}{agree}\n", p.name(), entry.verdict);
            }
            if !report.all_agree() || !report.invariant_violations().is_empty() {
                eprintln!("warning: cross-checks disagree; see the report");
            }
            Ok(Output::new(&report, text, None))
        }
        Command::Convert { input, to } => convert(input, *to),
        Command::Check {
            input,
            identity,
            identity_expr,
            shape,
            mode,
            max_n,
            max_image_len,
        } => {
            if let Some(shape) = shape {
                return check_structure(input, shape);
            }
            let (id, name) = match (identity, identity_expr) {
                (Some(n), _) => (LatticeIdentity::named(n)?, n.clone()),
                (None, Some(e)) => (LatticeIdentity::parse(e)?, e.clone()),
                (None, None) => {
                    return Err(Error::Malformed(
                        "one of --identity, --identity-expr, --shape is required".into(),
                    ))
                }
            };
            let d = input.load()?.0.to_dfa()?;
            let check_mode = match mode {
                Mode::Monoid => CheckMode::Monoid,
                Mode::Words => {
                    let mut b = WordsBounds::default();
                    b.max_n = max_n.unwrap_or(b.max_n);
                    b.max_image_len = max_image_len.unwrap_or(b.max_image_len);
                    CheckMode::Words(b)
                }
            };
            let outcome = check_identity(&d, &id, check_mode)?;
            let al = d.alphabet();
            let counterexample = outcome.counterexample.as_ref().map(|c| {
                json!({
                    "assignment": c.assignment.iter()
                        .map(|(v, w)| (v.to_string(), al.render(w.letters())))
                        .collect::<BTreeMap<_, _>>(),
                    "n": c.n,
                    "lhs_member": c.lhs_member,
                    "rhs_member": c.rhs_member,
                })
            });
            let mode_name = if *mode == Mode::Monoid {
                "monoid"
            } else {
                "words"
            };
            let text = format!("{name} ({mode_name}): {}\n", outcome.holds);
            Ok(Output::new(
                json!({
                    "identity": name,
                    "expression": id.to_string(),
                    "mode": mode_name,
                    "holds": outcome.holds,
                    "counterexample": counterexample,
                }),
                text,
                Some(outcome.holds),
            ))
        }
        Command::Simulate { input, word } => {
            let t = input.two_way()?;
            let w = t.alphabet().word(word)?;
            let r = simulate(&t, w.letters())?;
            let outcome = match r.outcome {
                Outcome::Accept(q) => json!({"kind": "accept", "state": t.name(q)}),
                Outcome::Reject(q) => json!({"kind": "reject", "state": t.name(q)}),
                Outcome::Loop => json!({"kind": "loop"}),
                Outcome::Stuck(c) => json!({
                    "kind": "stuck",
                    "state": c.map(|c| t.name(c.state)),
                    "position": c.map(|c| c.position),
                }),
            };
            let trace: Vec<Value> = r
                .trace
                .iter()
                .map(|c| json!({"state": t.name(c.state), "position": c.position}))
                .collect();
            let accepted = r.outcome.accepted();
            let text = format!(
                "{} after {} steps\n",
                outcome["kind"].as_str().unwrap_or(""),
                trace.len()
            );
            Ok(Output::new(
                json!({"word": word, "outcome": outcome, "accepted": accepted, "trace": trace}),
                text,
                Some(accepted),
            ))
        }
        Command::Ranker {
            eval,
            compile,
            word,
            alphabet,
        } => {
            if let Some(r) = eval {
                let ranker: Ranker = r.parse()?;
                let word = word.as_deref().expect("clap requires --word");
                if let Some(letters) = alphabet {
                    Alphabet::from_letters(letters)?.word(word)?;
                }
                let position = eval_ranker(&ranker, word);
                let text = match position {
                    Some(i) => format!("{i}\n"),
                    None => "undefined\n".to_string(),
                };
                return Ok(Output::new(
                    json!({"ranker": ranker.to_string(), "word": word, "position": position}),
                    text,
                    Some(position.is_some()),
                ));
            }
            let ranker: Ranker = compile
                .as_deref()
                .expect("clap requires an operation")
                .parse()?;
            let al =
                Alphabet::from_letters(alphabet.as_deref().expect("clap requires --alphabet"))?;
            let t = compile_ranker(&ranker, &al)?;
            let text = format!("{} states\n", t.num_states());
            Ok(Output::new(TwoWayJson::from_automaton(&t), text, None))
        }
        Command::Monomials { input, cap, .. } => {
            let t = input.two_way()?;
            let ms = extract_monomials(&t, *cap)?;
            let list: Vec<Value> = ms
                .iter()
                .map(|m| {
                    let mut v = serde_json::to_value(m.to_json()).expect("serializable");
                    v["unambiguous"] = json!(monomial_check(m, MonomialCheck::Unambiguous));
                    v["restricted"] = json!(monomial_check(m, MonomialCheck::Restricted));
                    v
                })
                .collect();
            let text: String = ms.iter().map(|m| format!("{m}\n")).collect();
            Ok(Output::new(json!({ "monomials": list }), text, None))
        }
        Command::Oracle {
            input,
            property,
            max_len,
        } => {
            let prop = Property::parse(property)
                .ok_or_else(|| Error::Malformed(format!("unknown property '{property}'")))?;
            let nfa = input.nfa()?;
            let out = brute_force_oracle_with(&nfa, prop, *max_len, WordsBounds::default())?;
            let al = nfa.alphabet();
            let (outcome, witness) = match &out {
                OracleOutcome::Consistent => ("consistent", None),
                OracleOutcome::Refuted(s) => (
                    "refuted",
                    Some(json!({
                        "member": al.render(s.member.letters()),
                        "non_member": al.render(s.non_member.letters()),
                    })),
                ),
            };
            let text = format!("{}: {outcome}\n", prop.name());
            Ok(Output::new(
                json!({
                    "property": prop.name(),
                    "max_len": max_len,
                    "outcome": outcome,
                    "witness": witness,
                }),
                text,
                Some(!out.is_refuted()),
            ))
        }
    }
}

fn check_structure(input: &Input, shape: &str) -> Result<Output, Error> {
    let holds = match input.load()?.1 {
        Loaded::OneWay(a) => {
            let s = Shape::parse(shape)
                .ok_or_else(|| Error::Malformed(format!("unknown shape '{shape}'")))?;
            check_shape(&a, s)
        }
        Loaded::TwoWay(t) => {
            let s = TwoWayShape::parse(shape)
                .ok_or_else(|| Error::Malformed(format!("unknown shape '{shape}'")))?;
            t.has_shape(s)
        }
    };
    Ok(Output::new(
        json!({"shape": shape, "holds": holds}),
        format!("{shape}: {holds}\n"),
        Some(holds),
    ))
}

fn convert(input: &Input, to: Target) -> Result<Output, Error> {
    let two_way = |t: TwoWayAutomaton| {
        let text = format!("{} states\n", t.num_states());
        Output::new(TwoWayJson::from_automaton(&t), text, None)
    };
    let one_way = |a: &Nfa| {
        let text = format!("{} states\n", a.num_states());
        Output::new(AutomatonJson::from_nfa(a), text, None)
    };
    Ok(match to {
        Target::MinDfa => one_way(&input.load()?.0.to_dfa()?.to_nfa()),
        Target::WeakNfa => one_way(&nfa_to_weak(&input.nfa()?)),
        Target::StaigerWagner => {
            let sw = to_staiger_wagner(&input.nfa()?)?;
            let text = format!(
                "{} states, {} table entries\n",
                sw.num_states(),
                sw.table()?.len()
            );
            Output::new(sw.to_json()?, text, None)
        }
        Target::FlipUnion => {
            let u = weak_to_flip_union(&input.dfa()?)?;
            let text = format!("{} parts\n", u.parts.len());
            Output::new(u.to_json(), text, None)
        }
        Target::BcDecomposition => {
            let pairs = bc_decomposition(&input.load()?.0.to_dfa()?)?;
            let text: String = pairs
                .iter()
                .map(|p| {
                    let r = p.upper.alphabet().render(p.representative.letters());
                    format!(
                        "class of '{r}': {} minus {} states\n",
                        p.upper.num_states(),
                        p.strict.num_states()
                    )
                })
                .collect();
            let list: Vec<_> = pairs.iter().map(|p| p.to_json()).collect();
            Output::new(list, text, None)
        }
        Target::OneWay => one_way(&to_one_way_dfa(&input.two_way()?)?.minimize().to_nfa()),
        Target::Complement => two_way(complement_one_pass(&input.two_way()?)?),
        Target::FlipToFully => two_way(convert_flip_fully(
            &input.two_way()?,
            Conversion::FlipToFully,
        )?),
        Target::FullyToFlip => two_way(convert_flip_fully(
            &input.two_way()?,
            Conversion::FullyToFlip,
        )?),
    })
}
