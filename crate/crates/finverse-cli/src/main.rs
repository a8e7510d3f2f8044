//! Command-line front end for the expansion library.
//!
//! Exit codes are a contract: 0 positive verdict or success, 1 negative
//! verdict, 2 syntax error, 3 domain error, 4 resource limit, 5
//! certification failure. JSON goes to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use finverse::error::Error;
use finverse::expansion::{
    enumerate_br, enumerate_f, enumerate_m, enumerate_p, eval_term_f, green, monoid_of_br,
    monoid_of_f, monoid_of_m, monoid_of_p, FElement, GreenRel,
};
use finverse::fim::{
    certify_f_inverse, check_identity, check_premorphism, Counterexample, FiniteMonoid,
};
use finverse::group::XGroup;
use finverse::term::{normalize, parse, parse_normal, MTerm, RawTerm};
use finverse::Result;

#[derive(Parser)]
#[command(
    name = "finverse",
    about = "Expansions of X-generated groups: normalize terms, evaluate them in F(G), M(G), BR(G) and P(G), and certify finite inverse monoids as F-inverse",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    #[value(name = "F")]
    F,
    #[value(name = "M")]
    M,
    #[value(name = "BR")]
    Br,
    #[value(name = "P")]
    P,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::F => "F",
            Model::M => "M",
            Model::Br => "BR",
            Model::P => "P",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a term to its canonical normal form.
    Normalize { term: String },
    /// Evaluate a term and print the element as JSON.
    Eval {
        /// Group spec: free:<names> or file:<path>.
        #[arg(long)]
        group: String,
        /// Which expansion to evaluate in.
        #[arg(long = "in", value_enum, default_value = "F", ignore_case = true)]
        model: Model,
        #[arg(long)]
        pretty: bool,
        term: String,
    },
    /// Decide equality of two terms in F(G).
    Eq {
        #[arg(long)]
        group: String,
        #[arg(long)]
        pretty: bool,
        term1: String,
        term2: String,
    },
    /// Decide the natural partial order term1 <= term2 in F(G).
    Leq {
        #[arg(long)]
        group: String,
        #[arg(long)]
        pretty: bool,
        term1: String,
        term2: String,
    },
    /// Report Green's relations between two elements of F(G).
    Green {
        #[arg(long)]
        group: String,
        #[arg(long)]
        pretty: bool,
        term1: String,
        term2: String,
    },
    /// Enumerate a finite expansion and print its size.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long = "in", value_enum, default_value = "F", ignore_case = true)]
        model: Model,
        /// Also print every element.
        #[arg(long)]
        list: bool,
        /// Abort if the expansion would exceed this many elements.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long)]
        pretty: bool,
    },
    /// Certify a finite monoid (from a table file or an enumerated
    /// expansion) as F-inverse and verify the defining laws.
    Certify {
        /// Monoid table: file:<path>.
        #[arg(long, conflicts_with_all = ["group", "model"])]
        monoid: Option<String>,
        /// Group spec; the monoid is the chosen expansion of it.
        #[arg(long)]
        group: Option<String>,
        #[arg(long = "in", value_enum, ignore_case = true)]
        model: Option<Model>,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long)]
        pretty: bool,
    },
    /// Print the evaluated element's graph as a DOT digraph.
    Dot {
        #[arg(long)]
        group: String,
        term: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            // Syntax errors already carried their caret diagnostics.
            if !matches!(e, Error::Syntax { .. }) {
                eprintln!("error: {e}");
            }
            ExitCode::from(match e {
                Error::Syntax { .. } => 2,
                Error::TooLarge { .. } => 4,
                Error::NotInverse(_) | Error::NotFInverse(_) => 5,
                _ => 3,
            })
        }
    }
}

fn parse_group(spec: &str) -> Result<XGroup> {
    if let Some(names) = spec.strip_prefix("free:") {
        let names: Vec<&str> = names.split(',').map(str::trim).collect();
        XGroup::free(&names)
    } else if let Some(path) = spec.strip_prefix("file:") {
        XGroup::from_json(&std::fs::read_to_string(path)?)
    } else {
        Err(Error::InvalidGroup(format!(
            "group spec must be free:<names> or file:<path>, got `{spec}`"
        )))
    }
}

/// Parse a term, printing a caret diagnostic to stderr on failure.
fn parse_term(text: &str) -> Result<RawTerm> {
    parse(text).map_err(|e| {
        if let Error::Syntax { pos, .. } = &e {
            eprintln!("error: {e}");
            eprintln!("  {text}");
            eprintln!("  {}^", " ".repeat(*pos));
        }
        e
    })
}

fn emit(v: &Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(v).expect("serializable"));
    }
}

fn contains_max(t: &RawTerm) -> bool {
    match t {
        RawTerm::One | RawTerm::Letter(_) => false,
        RawTerm::Mul(a, b) => contains_max(a) || contains_max(b),
        RawTerm::Inv(a) => contains_max(a),
        RawTerm::Max(_) => true,
    }
}

fn letters_outside_blocks(w: &MTerm) -> bool {
    !w.head().is_empty() || w.blocks().iter().any(|b| !b.tail.is_empty())
}

fn eval_f(group: &XGroup, text: &str) -> Result<FElement> {
    eval_term_f(group, &normalize(&parse_term(text)?))
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Normalize { term } => {
            println!("{}", normalize(&parse_term(&term)?));
            Ok(0)
        }
        Cmd::Eval {
            group,
            model,
            pretty,
            term,
        } => {
            let g = parse_group(&group)?;
            let raw = parse_term(&term)?;
            let w = normalize(&raw);
            let value = match model {
                Model::F => eval_term_f(&g, &w)?.to_json(),
                Model::M => {
                    if contains_max(&raw) {
                        return Err(Error::OutsideDomain {
                            domain: "M",
                            reason: "the term contains a max block, and M(G) is not closed under max".into(),
                        });
                    }
                    eval_term_f(&g, &w)?.to_json()
                }
                Model::Br => {
                    if letters_outside_blocks(&w) {
                        return Err(Error::OutsideDomain {
                            domain: "BR",
                            reason: "the term has letters outside max blocks, but BR(G) is edgeless".into(),
                        });
                    }
                    eval_term_f(&g, &w)?.to_json()
                }
                Model::P => eval_term_f(&g, &w)?.to_perfect(&g)?.to_json(),
            };
            emit(&value, pretty);
            Ok(0)
        }
        Cmd::Eq {
            group,
            pretty,
            term1,
            term2,
        } => {
            let g = parse_group(&group)?;
            let a = eval_f(&g, &term1)?;
            let b = eval_f(&g, &term2)?;
            let equal = a == b;
            emit(
                &json!({
                    "verdict": if equal { "equal" } else { "not-equal" },
                    "lhs": a.to_json(),
                    "rhs": b.to_json(),
                }),
                pretty,
            );
            Ok(u8::from(!equal))
        }
        Cmd::Leq {
            group,
            pretty,
            term1,
            term2,
        } => {
            let g = parse_group(&group)?;
            let a = eval_f(&g, &term1)?;
            let b = eval_f(&g, &term2)?;
            let leq = a.leq(&g, &b)?;
            emit(
                &json!({
                    "verdict": if leq { "leq" } else { "not-leq" },
                    "lhs": a.to_json(),
                    "rhs": b.to_json(),
                }),
                pretty,
            );
            Ok(u8::from(!leq))
        }
        Cmd::Green {
            group,
            pretty,
            term1,
            term2,
        } => {
            let g = parse_group(&group)?;
            let a = eval_f(&g, &term1)?;
            let b = eval_f(&g, &term2)?;
            let r = green(&g, &a, &b, GreenRel::R)?;
            let l = green(&g, &a, &b, GreenRel::L)?;
            let d = green(&g, &a, &b, GreenRel::D)?;
            let j = green(&g, &a, &b, GreenRel::J)?;
            assert_eq!(d, j, "D and J coincide on F(G)");
            emit(&json!({"R": r, "L": l, "D": d, "J": j}), pretty);
            Ok(0)
        }
        Cmd::Enumerate {
            group,
            model,
            list,
            cap,
            pretty,
        } => {
            let g = parse_group(&group)?;
            let (count, elements): (usize, Vec<Value>) = match model {
                Model::F | Model::M | Model::Br => {
                    let es = match model {
                        Model::F => enumerate_f(&g, cap)?,
                        Model::M => enumerate_m(&g, cap)?,
                        _ => enumerate_br(&g, cap)?,
                    };
                    (
                        es.len(),
                        if list {
                            es.iter().map(FElement::to_json).collect()
                        } else {
                            Vec::new()
                        },
                    )
                }
                Model::P => {
                    let es = enumerate_p(&g, cap)?;
                    (
                        es.len(),
                        if list {
                            es.iter().map(|e| e.to_json()).collect()
                        } else {
                            Vec::new()
                        },
                    )
                }
            };
            let mut out = json!({"model": model.name(), "count": count});
            if list {
                out["elements"] = Value::Array(elements);
            }
            emit(&out, pretty);
            Ok(0)
        }
        Cmd::Certify {
            monoid,
            group,
            model,
            cap,
            pretty,
        } => {
            let (m, describe): (FiniteMonoid, Box<dyn Fn(usize) -> Value>) =
                match (monoid, group) {
                    (Some(spec), None) => {
                        let path = spec.strip_prefix("file:").ok_or_else(|| {
                            Error::InvalidMonoid(format!(
                                "monoid spec must be file:<path>, got `{spec}`"
                            ))
                        })?;
                        let (m, _) = FiniteMonoid::from_json(&std::fs::read_to_string(path)?)?;
                        (m, Box::new(|i| json!(i)))
                    }
                    (None, Some(spec)) => {
                        let g = parse_group(&spec)?;
                        match model.unwrap_or(Model::F) {
                            Model::F => {
                                let e = monoid_of_f(&g, cap)?;
                                let els = e.elements;
                                (e.monoid, Box::new(move |i| els[i].to_json()))
                            }
                            Model::M => {
                                let e = monoid_of_m(&g, cap)?;
                                let els = e.elements;
                                (e.monoid, Box::new(move |i| els[i].to_json()))
                            }
                            Model::Br => {
                                let e = monoid_of_br(&g, cap)?;
                                let els = e.elements;
                                (e.monoid, Box::new(move |i| els[i].to_json()))
                            }
                            Model::P => {
                                let e = monoid_of_p(&g, cap)?;
                                let els = e.elements;
                                (e.monoid, Box::new(move |i| els[i].to_json()))
                            }
                        }
                    }
                    _ => {
                        return Err(Error::InvalidMonoid(
                            "exactly one of --monoid or --group is required".into(),
                        ))
                    }
                };
            run_certify(&m, describe.as_ref(), pretty)
        }
        Cmd::Dot { group, term } => {
            let g = parse_group(&group)?;
            print!("{}", eval_f(&g, &term)?.dot(&g)?);
            Ok(0)
        }
    }
}

fn cex_json(c: &Counterexample, describe: &dyn Fn(usize) -> Value) -> Value {
    let assignment: BTreeMap<String, Value> = c
        .assignment
        .iter()
        .map(|(g, v)| (g.to_string(), describe(*v)))
        .collect();
    json!({"assignment": assignment, "lhs": describe(c.lhs), "rhs": describe(c.rhs)})
}

/// Certification report: inverse axioms, σ, F-inverse max, the variety
/// laws by exhaustive substitution, E-unitarity, the strong premorphism.
/// Exit 5 on any required failure; the perfection law is informational
/// since most F-inverse monoids are not perfect.
fn run_certify(m: &FiniteMonoid, describe: &dyn Fn(usize) -> Value, pretty: bool) -> Result<u8> {
    let mut report = json!({"order": m.order()});
    let fail = |mut report: Value, key: &str, witness: Value, pretty: bool| {
        report[key] = json!({"verdict": "fail", "witness": witness});
        emit(&report, pretty);
        Ok(5)
    };

    match m.check_inverse_monoid() {
        Err(w) => return fail(report, "inverse", json!(w.to_string()), pretty),
        Ok(_) => report["inverse"] = json!("pass"),
    }
    let cert = match certify_f_inverse(m) {
        Err(w) => return fail(report, "f_inverse", json!(w.to_string()), pretty),
        Ok(cert) => {
            report["f_inverse"] = json!("pass");
            cert
        }
    };
    report["sigma_classes"] = json!(cert.sigma().class_count());
    report["e_unitary"] = json!(true);
    report["max"] = Value::Array(
        (0..m.order())
            .map(|a| json!([describe(a), describe(cert.max_of(a))]))
            .collect(),
    );

    let mut ok = true;
    let laws = [
        ("m(x) x' x = x", "m(x) x' x", "x"),
        ("m(x y' y) = m(x)", "m(x y' y)", "m(x)"),
        ("m(x)' = m(x')", "m(x)'", "m(x')"),
        ("m(x) m(y) = m(x y) m(y)' m(y)", "m(x) m(y)", "m(x y) m(y)' m(y)"),
        ("m(x) m(y) = m(x) m(x)' m(x y)", "m(x) m(y)", "m(x) m(x)' m(x y)"),
        ("m(x m(y) z) = m(x y z)", "m(x m(y) z)", "m(x y z)"),
    ];
    let mut law_reports = Vec::new();
    for (name, lhs, rhs) in laws {
        let lhs = parse_normal(lhs).expect("law terms parse");
        let rhs = parse_normal(rhs).expect("law terms parse");
        match check_identity(&cert, &lhs, &rhs) {
            None => law_reports.push(json!({"law": name, "verdict": "pass"})),
            Some(c) => {
                ok = false;
                law_reports.push(json!({
                    "law": name,
                    "verdict": "fail",
                    "counterexample": cex_json(&c, describe),
                }));
            }
        }
    }
    report["laws"] = Value::Array(law_reports);

    let perf_lhs = parse_normal("m(x) m(x')").expect("law terms parse");
    let perf_rhs = parse_normal("1").expect("law terms parse");
    report["perfection"] = match check_identity(&cert, &perf_lhs, &perf_rhs) {
        None => json!({"law": "m(x) m(x') = 1", "holds": true}),
        Some(c) => json!({
            "law": "m(x) m(x') = 1",
            "holds": false,
            "counterexample": cex_json(&c, describe),
        }),
    };

    match check_premorphism(&cert) {
        None => report["premorphism"] = json!("pass"),
        Some(w) => {
            ok = false;
            report["premorphism"] = json!({"verdict": "fail", "witness": w.to_string()});
        }
    }

    emit(&report, pretty);
    Ok(if ok { 0 } else { 5 })
}
