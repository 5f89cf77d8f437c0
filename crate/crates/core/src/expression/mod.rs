//! A small DSL for inequalities of the shape
//! `P(π(x)) − (ex/log x)·Q(π(x/e)) + R(x)`.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := unary (("*"|"/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" integer)?
//! atom   := number | "e" | "gamma" | "x" | "n" | "k" | "(" expr ")"
//!         | "pi" "(" expr ")" | "log" "(" expr ")"
//!         | "sum" "(" "k" "," integer "," ("n"|integer) "," expr ")"
//! ```
//!
//! Values are computed in [`ExtFloat`]; every `pi(·)` argument is evaluated
//! separately in double-double (exact rationals near integer boundaries)
//! and floored, exactly as the native family evaluators do.

mod parser;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::inequality::{EvalError, Evaluator, Family};
use crate::numerics::{Arith, DoubleDouble, ExactRational, ExtFloat};

/// Largest accepted source text.
pub const MAX_SPEC_BYTES: usize = 64 * 1024;
/// Deepest accepted nesting of parentheses and unary minus.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("expression is {0} bytes; the limit is 65536")]
    TooLong(usize),
    #[error("syntax error at line {line}, column {column}: {message}{}", expected_list(.expected))]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("line {line}, column {column}: `k` used outside a sum")]
    UnboundK { line: usize, column: usize },
    #[error("line {line}, column {column}: exponent must be a non-negative integer literal, found {found}")]
    NonIntegerExponent {
        line: usize,
        column: usize,
        found: String,
    },
    #[error("line {line}, column {column}: exponent {found} exceeds 2^20")]
    ExponentTooLarge {
        line: usize,
        column: usize,
        found: u64,
    },
    #[error("line {line}, column {column}: nesting deeper than 256 levels")]
    TooDeep { line: usize, column: usize },
}

fn expected_list(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!("; expected one of: {}", expected.join(", "))
    }
}

impl ParseError {
    /// `(line, column)` of the offending token, when there is one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            ParseError::Empty | ParseError::TooLong(_) => None,
            ParseError::Syntax { line, column, .. }
            | ParseError::UnboundK { line, column }
            | ParseError::NonIntegerExponent { line, column, .. }
            | ParseError::ExponentTooLarge { line, column, .. }
            | ParseError::TooDeep { line, column } => Some((*line, *column)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    E,
    Gamma,
    X,
    N,
    K,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u64),
    Log(Box<Expr>),
    Pi(Box<Expr>),
    /// `Σ_{k=lower..upper} body`; `upper = None` means the parameter `n`.
    Sum {
        lower: u64,
        upper: Option<u64>,
        body: Box<Expr>,
    },
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(v) if *v < 0.0 => 3,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_bare(f)?;
            write!(f, ")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, p: u8| {
            a.write_at(f, p)?;
            f.write_str(op)?;
            b.write_at(f, p + 1)
        };
        match self {
            Expr::Num(v) => {
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    write!(f, "{v:.0}")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::E => f.write_str("e"),
            Expr::Gamma => f.write_str("gamma"),
            Expr::X => f.write_str("x"),
            Expr::N => f.write_str("n"),
            Expr::K => f.write_str("k"),
            Expr::Add(a, b) => bin(f, a, " + ", b, 1),
            Expr::Sub(a, b) => bin(f, a, " - ", b, 1),
            Expr::Mul(a, b) => bin(f, a, "*", b, 2),
            Expr::Div(a, b) => bin(f, a, "/", b, 2),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 3)
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")
            }
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Pi(a) => write!(f, "pi({a})"),
            Expr::Sum { lower, upper, body } => match upper {
                Some(u) => write!(f, "sum(k, {lower}, {u}, {body})"),
                None => write!(f, "sum(k, {lower}, n, {body})"),
            },
        }
    }

    /// Structural degree in `π(·)`.
    pub fn degree(&self) -> u64 {
        match self {
            Expr::Pi(_) => 1,
            Expr::Num(_) | Expr::E | Expr::Gamma | Expr::X | Expr::N | Expr::K | Expr::Log(_) => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree().max(b.degree()),
            Expr::Mul(a, b) => a.degree() + b.degree(),
            Expr::Div(a, b) => a.degree().saturating_sub(b.degree()),
            Expr::Neg(a) => a.degree(),
            Expr::Pow(a, k) => a.degree().saturating_mul(*k),
            Expr::Sum { body, .. } => body.degree(),
        }
    }

    /// Whether the expression mentions the parameter `n`.
    pub fn uses_n(&self) -> bool {
        match self {
            Expr::N => true,
            Expr::Sum { upper: None, .. } => true,
            Expr::Num(_) | Expr::E | Expr::Gamma | Expr::X | Expr::K => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_n() || b.uses_n()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Log(a) | Expr::Pi(a) => a.uses_n(),
            Expr::Sum { body, .. } => body.uses_n(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

/// A parsed, immutable DSL expression.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSpec {
    pub ast: Expr,
}

impl GeneralSpec {
    pub fn degree(&self) -> u64 {
        self.ast.degree()
    }
}

/// Canonical text; reparses to the same tree.
impl fmt::Display for GeneralSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl FromStr for GeneralSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}

pub fn parse_spec(text: &str) -> Result<GeneralSpec, ParseError> {
    parser::parse(text).map(|ast| GeneralSpec { ast })
}

pub fn spec_degree(spec: &GeneralSpec) -> u64 {
    spec.degree()
}

#[derive(Clone, Copy)]
struct Env {
    x: f64,
    n: Option<u64>,
    k: Option<u64>,
}

/// Evaluates `spec` at `x`, with `n` bound when supplied.
pub fn eval_spec(
    spec: &GeneralSpec,
    evaluator: &Evaluator<'_>,
    x: f64,
    n: Option<u64>,
) -> Result<ExtFloat, EvalError> {
    if !x.is_finite() {
        return Err(EvalError::Unsupported(format!("non-finite x = {x}")));
    }
    eval_node::<ExtFloat>(&spec.ast, Env { x, n, k: None }, evaluator)
}

fn eval_node<S: Arith>(e: &Expr, env: Env, ev: &Evaluator<'_>) -> Result<S, EvalError> {
    let go = |e: &Expr| eval_node::<S>(e, env, ev);
    Ok(match e {
        Expr::Num(v) => S::from_f64(*v),
        Expr::E => S::e(),
        Expr::Gamma => S::gamma(),
        Expr::X => S::from_f64(env.x),
        Expr::N => S::from_u64(env.n.ok_or(EvalError::MissingParameter("n"))?),
        Expr::K => S::from_u64(env.k.expect("parser binds k inside sums")),
        Expr::Add(a, b) => go(a)?.add(&go(b)?),
        Expr::Sub(a, b) => go(a)?.sub(&go(b)?),
        Expr::Mul(a, b) => go(a)?.mul(&go(b)?),
        Expr::Div(a, b) => go(a)?.div(&go(b)?)?,
        Expr::Neg(a) => go(a)?.neg(),
        Expr::Pow(a, k) => go(a)?.powi(*k)?,
        Expr::Log(a) => go(a)?.ln()?,
        Expr::Pi(arg) => {
            let approx = eval_node::<DoubleDouble>(arg, env, ev)?;
            let m = ev.resolve_argument(approx, || eval_node::<ExactRational>(arg, env, ev))?;
            S::from_u64(ev.counter().count(m)?)
        }
        Expr::Sum { lower, upper, body } => {
            let upper = match upper {
                Some(u) => *u,
                None => env.n.ok_or(EvalError::MissingParameter("n"))?,
            };
            let terms = (*lower..=upper)
                .map(|k| eval_node::<S>(body, Env { k: Some(k), ..env }, ev))
                .collect::<Result<Vec<_>, _>>()?;
            S::sum(terms)
        }
    })
}

/// The DSL text whose evaluation matches the native evaluator of `family`
/// bit for bit. `None` for the Hassani triple and for general specs.
pub fn family_text(family: &Family) -> Option<String> {
    Some(match family {
        Family::G => "pi(x)^2 - e*x/log(x)*pi(x/e)".into(),
        Family::H => "pi(x)^3 - 3*e*x/log(x)*pi(x/e)^2 + 3*e^2*x/log(x)^2*pi(x/e^2)".into(),
        Family::K => "pi(x)^4 - 4*e*x/log(x)*pi(x/e)^3 + 6*e^2*x/log(x)^2*pi(x/e^2)^2 \
                      - 4*e^3*x/log(x)^3*pi(x/e^3)"
            .into(),
        Family::L { .. } => "sum(k, 1, n, pi(x/k))^2 - e*x/log(x)*sum(k, 1, n, pi(x/(e*k)))".into(),
        Family::F { .. } => "sum(k, 1, n, pi(x/k)/log(x/k))^2 \
                             - e*x/log(x)*sum(k, 1, n, pi(x/(e*k))/log(x/(e*k)))"
            .into(),
        Family::Hn { n } => {
            let m = 3u64.checked_pow(*n)?;
            format!(
                "pi(x)^{m} - 3*e*x/log(x)*pi(x/e)^{} + 3*e^2*x/log(x)^2*pi(x/e^2)^{}",
                m.checked_sub(1)?,
                m.checked_sub(2)?
            )
        }
        Family::Nr { r, .. } => format!(
            "sum(k, 1, n, pi(x/k))^{r} - e*x/log(x)*sum(k, 1, n, pi(x/(e*k)))^{r} \
             + sum(k, 1, n, pi(x/(e^2*k)))^{r}"
        ),
        Family::Hassani | Family::General { .. } => return None,
    })
}

/// Parsed form of [`family_text`].
pub fn family_spec(family: &Family) -> Option<GeneralSpec> {
    family_text(family).map(|t| parse_spec(&t).expect("shipped family texts parse"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_engine::PrimeCounter;

    fn ev() -> Evaluator<'static> {
        Evaluator::new(PrimeCounter::shared())
    }

    fn p(s: &str) -> Expr {
        parse_spec(s).unwrap().ast
    }

    fn bx(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn g_text_parses_to_expected_tree() {
        let g = p("pi(x)^2 - e*x/log(x) * pi(x/e)");
        let expected = Expr::Sub(
            bx(Expr::Pow(bx(Expr::Pi(bx(Expr::X))), 2)),
            bx(Expr::Mul(
                bx(Expr::Div(
                    bx(Expr::Mul(bx(Expr::E), bx(Expr::X))),
                    bx(Expr::Log(bx(Expr::X))),
                )),
                bx(Expr::Pi(bx(Expr::Div(bx(Expr::X), bx(Expr::E))))),
            )),
        );
        assert_eq!(g, expected);
        assert_eq!(g, p(&family_text(&Family::G).unwrap()));
    }

    #[test]
    fn sum_with_power() {
        match p("sum(k, 1, n, pi(x/k))^3") {
            Expr::Pow(inner, 3) => assert!(matches!(
                *inner,
                Expr::Sum {
                    lower: 1,
                    upper: None,
                    ..
                }
            )),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("-x^2"), Expr::Neg(bx(Expr::Pow(bx(Expr::X), 2))));
        assert_eq!(
            p("x - 1 - 2"),
            Expr::Sub(
                bx(Expr::Sub(bx(Expr::X), bx(Expr::Num(1.0)))),
                bx(Expr::Num(2.0))
            )
        );
        assert_eq!(
            p("x / 2 * 3"),
            Expr::Mul(
                bx(Expr::Div(bx(Expr::X), bx(Expr::Num(2.0)))),
                bx(Expr::Num(3.0))
            )
        );
    }

    #[test]
    fn error_positions() {
        let err = parse_spec("pi(x^").unwrap_err();
        assert_eq!(err.position(), Some((1, 6)));
        match &err {
            ParseError::Syntax { expected, .. } => {
                assert_eq!(expected, &vec!["integer".to_string()])
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_spec("x^2^3"),
            Err(ParseError::Syntax { column: 4, .. })
        ));
        assert!(matches!(
            parse_spec("k + 1"),
            Err(ParseError::UnboundK { line: 1, column: 1 })
        ));
        assert!(matches!(
            parse_spec("x^2.5"),
            Err(ParseError::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_spec("x^1048577"),
            Err(ParseError::ExponentTooLarge { .. })
        ));
        assert!(matches!(parse_spec("   "), Err(ParseError::Empty)));
        assert!(matches!(
            parse_spec("x +\n  $"),
            Err(ParseError::Syntax {
                line: 2,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            parse_spec(&"(".repeat(1000)),
            Err(ParseError::TooDeep { .. })
        ));
        assert!(matches!(
            parse_spec(&"x".repeat(70_000)),
            Err(ParseError::TooLong(_))
        ));
        let msg = parse_spec("x )").unwrap_err().to_string();
        assert!(msg.contains("expected one of"), "{msg}");
    }

    #[test]
    fn degrees() {
        assert_eq!(spec_degree(&family_spec(&Family::G).unwrap()), 2);
        assert_eq!(spec_degree(&family_spec(&Family::H).unwrap()), 3);
        assert_eq!(
            spec_degree(&family_spec(&Family::Nr { n: 5, r: 4 }).unwrap()),
            4
        );
        assert_eq!(spec_degree(&family_spec(&Family::Hn { n: 2 }).unwrap()), 9);
        assert_eq!(spec_degree(&parse_spec("x^3").unwrap()), 0);
    }

    #[test]
    fn simple_values() {
        let v = eval_spec(&parse_spec("x").unwrap(), &ev(), 7.0, None).unwrap();
        assert_eq!(v, ExtFloat::from_u64(7));
        let v = eval_spec(
            &parse_spec("sum(k, 1, n, k)").unwrap(),
            &ev(),
            1.0,
            Some(10),
        )
        .unwrap();
        assert_eq!(v, ExtFloat::from_u64(55));
        let v = eval_spec(&parse_spec("pi(x)").unwrap(), &ev(), 1.5, None);
        assert_eq!(v.unwrap(), ExtFloat::ZERO);
        assert!(eval_spec(&parse_spec("pi(x - 10)").unwrap(), &ev(), 5.0, None).is_err());
        assert!(eval_spec(&parse_spec("log(x - 5)").unwrap(), &ev(), 5.0, None).is_err());
        assert!(eval_spec(&parse_spec("1/(x - 5)").unwrap(), &ev(), 5.0, None).is_err());
        assert!(eval_spec(&parse_spec("n").unwrap(), &ev(), 5.0, None).is_err());
    }

    #[test]
    fn nested_pi_arguments() {
        // π(π(100)) = π(25) = 9
        let v = eval_spec(&parse_spec("pi(pi(x))").unwrap(), &ev(), 100.0, None).unwrap();
        assert_eq!(v, ExtFloat::from_u64(9));
    }

    #[test]
    fn families_match_native_at_ten_thousand() {
        let e = ev();
        for (family, n) in [
            (Family::G, None),
            (Family::H, None),
            (Family::K, None),
            (Family::L { n: 5 }, Some(5)),
            (Family::F { n: 5 }, Some(5)),
            (Family::Hn { n: 2 }, None),
            (Family::Nr { n: 5, r: 3 }, Some(5)),
        ] {
            let spec = family_spec(&family).unwrap();
            let dsl = eval_spec(&spec, &e, 1e4, n).unwrap();
            let native = e.eval(&family, 1e4).unwrap().value;
            assert_eq!(dsl, native, "{}", family.label());
        }
    }

    #[test]
    fn render_round_trips() {
        for s in [
            "-(x + 1)^2",
            "(-x)^2",
            "x - (1 - 2)",
            "x/(2*3)",
            "-x*-2",
            "--x",
            "sum(k, 2, 7, k^2/log(x))",
            "0.125*x + 1e-7 - 1.5e300",
            "gamma*e^3",
        ] {
            let spec = parse_spec(s).unwrap();
            let again = parse_spec(&spec.to_string()).unwrap();
            assert_eq!(spec, again, "{s} -> {spec}");
        }
    }
}
