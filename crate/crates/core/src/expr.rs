//! Expression language for integrands: one free variable `x`, decimal
//! literals, `+ - * / ^`, parentheses, and the functions `exp` and `ln`.
//!
//! Precedence, tightest first: `^` (right-associative), unary minus, `* /`,
//! `+ -`. So `2^3^2 = 512`, `-2^2 = -4`, `2^-3 = 0.125`.
//!
//! Evaluation is total over the finite reals in the sense that it never
//! returns NaN: `ln` of a non-positive value, division by zero, and
//! NaN-producing powers surface as [`OutOfDomain`] errors carrying the
//! offending subexpression and the point.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// The free variable `x`.
    Var,
    Neg(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("unknown name `{name}` at offset {pos} (known: x, exp, ln)")]
    UnknownName { pos: usize, name: String },
    #[error("malformed number at offset {pos}")]
    BadNumber { pos: usize },
}

/// A point where the expression has no finite real value.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("`{subexpr}` has no value at x = {x}: {what}")]
pub struct OutOfDomain {
    /// Canonical form of the innermost offending subexpression.
    pub subexpr: String,
    pub x: f64,
    pub what: &'static str,
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    /// Evaluate at `x`. Never returns NaN; out-of-domain points are errors.
    pub fn evaluate(&self, x: f64) -> Result<f64, OutOfDomain> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.evaluate(x)?,
            Expr::Exp(a) => a.evaluate(x)?.exp(),
            Expr::Ln(a) => {
                let v = a.evaluate(x)?;
                if v <= 0.0 {
                    return Err(self.out_of_domain(x, "ln of a non-positive argument"));
                }
                v.ln()
            }
            Expr::Add(a, b) => a.evaluate(x)? + b.evaluate(x)?,
            Expr::Sub(a, b) => a.evaluate(x)? - b.evaluate(x)?,
            Expr::Mul(a, b) => a.evaluate(x)? * b.evaluate(x)?,
            Expr::Div(a, b) => {
                let d = b.evaluate(x)?;
                if d == 0.0 {
                    return Err(self.out_of_domain(x, "division by zero"));
                }
                a.evaluate(x)? / d
            }
            Expr::Pow(a, b) => a.evaluate(x)?.powf(b.evaluate(x)?),
        };
        if v.is_nan() {
            return Err(self.out_of_domain(x, "indeterminate value"));
        }
        Ok(v)
    }

    fn out_of_domain(&self, x: f64, what: &'static str) -> OutOfDomain {
        OutOfDomain {
            subexpr: self.canonical(),
            x,
            what,
        }
    }

    /// Fully parenthesized canonical form; parsing it back yields an
    /// identical tree. Constants print in shortest round-trip form.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    // Tree builders, mainly for programmatic construction in the harness.
    // These are two-argument associated constructors, not operators on
    // `self`; operator sugar over a boxed tree would force clones at every
    // use site, so the std::ops traits are deliberately not implemented.

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn exp_of(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn ln_of(a: Expr) -> Expr {
        Expr::Ln(Box::new(a))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::Pow(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(out, "{c}"),
            Expr::Var => write!(out, "x"),
            Expr::Neg(a) => write!(out, "(-{a})"),
            Expr::Exp(a) => write!(out, "exp({a})"),
            Expr::Ln(a) => write!(out, "ln({a})"),
            Expr::Add(a, b) => write!(out, "({a} + {b})"),
            Expr::Sub(a, b) => write!(out, "({a} - {b})"),
            Expr::Mul(a, b) => write!(out, "({a} * {b})"),
            Expr::Div(a, b) => write!(out, "({a} / {b})"),
            Expr::Pow(a, b) => write!(out, "({a} ^ {b})"),
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Expr, ParseError> {
        parse(text)
    }
}

/// Parse an expression; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(ParseError::Syntax {
            pos: p.pos,
            expected: "end of input",
        });
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: u8, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos,
                expected,
            })
        }
    }

    // sum := term (('+'|'-') term)*
    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := signed (('*'|'/') signed)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.signed()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.signed()?);
            } else if self.eat(b'/') {
                lhs = Expr::div(lhs, self.signed()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    // signed := '-' signed | power     (so -2^2 parses as -(2^2))
    fn signed(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.signed()?))
        } else {
            self.power()
        }
    }

    // power := atom ('^' signed)?      (right-associative; 2^-3 is legal)
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Expr::pow(base, self.signed()?))
        } else {
            Ok(base)
        }
    }

    // atom := number | name | name '(' sum ')' | '(' sum ')'
    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')', "`)`")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.name(),
            _ => Err(ParseError::Syntax {
                pos: self.pos,
                expected: "a number, `x`, `exp(...)`, `ln(...)`, or `(`",
            }),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        // Exponent part: 1e-3, 2.5E+10. Only if digits follow the marker.
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let mut ahead = self.pos + 1;
            if ahead < self.bytes.len() && matches!(self.bytes[ahead], b'+' | b'-') {
                ahead += 1;
            }
            if ahead < self.bytes.len() && self.bytes[ahead].is_ascii_digit() {
                self.pos = ahead;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Expr::Const(v)),
            _ => Err(ParseError::BadNumber { pos: start }),
        }
    }

    fn name(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        match name {
            "x" => Ok(Expr::Var),
            "exp" | "ln" => {
                self.expect(b'(', "`(` after a function name")?;
                let arg = self.sum()?;
                self.expect(b')', "`)`")?;
                Ok(if name == "exp" {
                    Expr::exp_of(arg)
                } else {
                    Expr::ln_of(arg)
                })
            }
            _ => Err(ParseError::UnknownName {
                pos: start,
                name: name.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(p("x/2"), Expr::div(Expr::Var, Expr::Const(2.0)));
        assert_eq!(
            p("exp(1/x)"),
            Expr::exp_of(Expr::div(Expr::Const(1.0), Expr::Var))
        );
        assert_eq!(p(" 1 + 2 "), Expr::add(Expr::Const(1.0), Expr::Const(2.0)));
        assert_eq!(
            p("ln(x)^2"),
            Expr::pow(Expr::ln_of(Expr::Var), Expr::Const(2.0))
        );
        assert_eq!(p("1.5e-3"), Expr::Const(0.0015));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("1+2*3").evaluate(0.0).unwrap(), 7.0);
        assert_eq!(p("2^3^2").evaluate(0.0).unwrap(), 512.0);
        assert_eq!(p("-2^2").evaluate(0.0).unwrap(), -4.0);
        assert_eq!(p("2^-3").evaluate(0.0).unwrap(), 0.125);
        assert_eq!(p("6/3/2").evaluate(0.0).unwrap(), 1.0);
        assert_eq!(p("1-2-3").evaluate(0.0).unwrap(), -4.0);
        assert_eq!(p("2*x^2").evaluate(3.0).unwrap(), 18.0);
    }

    #[test]
    fn unterminated_call_reports_offset() {
        assert_eq!(
            parse("ln(x"),
            Err(ParseError::Syntax {
                pos: 4,
                expected: "`)`"
            })
        );
    }

    #[test]
    fn unknown_name_reports_offset_and_name() {
        assert_eq!(
            parse("2*sin(x)"),
            Err(ParseError::UnknownName {
                pos: 2,
                name: "sin".to_string()
            })
        );
    }

    #[test]
    fn trailing_garbage_is_an_error() {
        assert!(matches!(
            parse("1+2)"),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(parse("").is_err());
        assert!(parse("1 2").is_err());
    }

    #[test]
    fn exponent_marker_without_digits_is_a_name_error() {
        // `2e` lexes the number `2` then stops; `e` is not consumed, so the
        // overall parse fails rather than silently misreading.
        assert!(parse("2e").is_err());
    }

    #[test]
    fn evaluates_examples() {
        assert_eq!(p("x/2").evaluate(5.0).unwrap(), 2.5);
        assert!((p("exp(1/x)").evaluate(1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(p("x/(2*exp(1))").evaluate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_domain_is_reported_not_nan() {
        let e = p("ln(x)");
        let err = e.evaluate(0.0).unwrap_err();
        assert_eq!(err.subexpr, "ln(x)");
        assert_eq!(err.x, 0.0);

        let err = p("1/x").evaluate(0.0).unwrap_err();
        assert_eq!(err.what, "division by zero");

        // (-1)^0.5 would be NaN from powf; it must surface as an error.
        let err = p("x^0.5").evaluate(-1.0).unwrap_err();
        assert_eq!(err.what, "indeterminate value");

        // inf - inf is NaN; totality means we still get an error, not NaN.
        assert!(p("exp(x) - exp(x)").evaluate(1e9).is_err());
    }

    #[test]
    fn ln_at_zero_from_below_is_out_of_domain() {
        assert!(p("ln(x - 5)").evaluate(5.0).is_err());
        assert!(p("ln(x - 5)").evaluate(4.0).is_err());
        assert!(p("ln(x - 5)").evaluate(6.0).is_ok());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(p("x/2").canonical(), "(x / 2)");
        assert_eq!(p("exp(1/x)").canonical(), "exp((1 / x))");
        assert_eq!(p("1+2*3").canonical(), "(1 + (2 * 3))");
        assert_eq!(p("-x^2").canonical(), "(-(x ^ 2))");
        assert_eq!(p("0.5").canonical(), "0.5");
    }

    #[test]
    fn canonical_constants_round_trip_exactly() {
        for c in [0.1, 1e-7, 12345.6789, 2.2250738585072014e-308, 1e300] {
            let printed = Expr::Const(c).canonical();
            assert_eq!(p(&printed), Expr::Const(c), "constant {c} via `{printed}`");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (0.0f64..1e6).prop_map(Expr::Const),
            Just(Expr::Const(0.5)),
            Just(Expr::Const(0.0)),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::neg),
                inner.clone().prop_map(Expr::exp_of),
                inner.clone().prop_map(Expr::ln_of),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::pow(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_print_then_parse_round_trips(e in arb_expr()) {
            prop_assert_eq!(parse(&e.canonical()).unwrap(), e);
        }

        #[test]
        fn evaluation_is_total_no_nan(e in arb_expr(), x in -1e3f64..1e3) {
            if let Ok(v) = e.evaluate(x) {
                prop_assert!(!v.is_nan());
            }
        }
    }
}
