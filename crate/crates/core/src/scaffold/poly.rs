//! Polynomials of degree at most two with rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::ratlinalg::Rational;
use crate::{Error, Result};

/// Variable name ordered naturally, so `X2 < X10` and `X1_0 < X1_1 < X2_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var(pub String);

impl Var {
    fn chunks(&self) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let s = self.0.as_str();
        let mut start = 0;
        let mut digit = None;
        for (k, c) in s.char_indices() {
            let d = c.is_ascii_digit();
            if digit.is_some_and(|prev| prev != d) {
                out.push((digit.unwrap(), &s[start..k]));
                start = k;
            }
            digit = Some(d);
        }
        if let Some(d) = digit {
            out.push((d, &s[start..]));
        }
        out
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.chunks(), other.chunks());
        for ((da, sa), (db, sb)) in a.iter().zip(&b) {
            let ord = match (da, db) {
                (true, true) => {
                    let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
                    ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
                }
                _ => sa.cmp(sb),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.len().cmp(&b.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorted list of variables, one entry per factor.
pub type Monomial = Vec<Var>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl QuadraticPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(Vec::new(), c)]).expect("constants have degree 0")
    }

    pub fn var(name: &str) -> Self {
        Self::from_terms([(vec![Var(name.to_string())], Rational::one())]).expect("degree 1")
    }

    /// Sums like terms and drops zeros; fails above degree two.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mut m, c) in terms {
            if m.len() > 2 {
                return Err(Error::DegreeTooHigh { degree: m.len() });
            }
            m.sort();
            let slot = acc.entry(m).or_insert_with(Rational::zero);
            *slot = &*slot + &c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(QuadraticPoly { terms: acc })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flatten().cloned().collect()
    }

    /// Renames every variable; fails if `f` rejects one.
    pub fn rename(&self, mut f: impl FnMut(&Var) -> Result<Var>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let m = m.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
            out.push((m, c.clone()));
        }
        Self::from_terms(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let general = Parser::new(text).parse_all()?;
        let degree = general.keys().map(Vec::len).max().unwrap_or(0);
        if degree > 2 {
            return Err(Error::DegreeTooHigh { degree });
        }
        Self::from_terms(general)
    }

    /// Terms by decreasing degree, then by variable order.
    fn display_order(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }
}

impl FromStr for QuadraticPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn format_monomial(m: &Monomial) -> String {
    match m.as_slice() {
        [a, b] if a == b => format!("{}^2", a.0),
        _ => m.iter().map(|v| v.0.as_str()).collect::<Vec<_>>().join("*"),
    }
}

impl fmt::Display for QuadraticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let negative = c.signum() < 0;
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&format_monomial(m))?;
            } else if abs.is_integer() {
                write!(f, "{abs}*{}", format_monomial(m))?;
            } else {
                write!(f, "({abs})*{}", format_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// Polynomial of unrestricted degree used while parsing.
type General = BTreeMap<Monomial, Rational>;

const MAX_EXPONENT: u32 = 16;

fn mul(a: &General, b: &General) -> General {
    let mut out = General::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Monomial = ma.iter().chain(mb).cloned().collect();
            m.sort();
            let slot = out.entry(m).or_insert_with(Rational::zero);
            *slot = &*slot + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(a: &mut General, b: General, sign: &Rational) {
    for (m, c) in b {
        let slot = a.entry(m).or_insert_with(Rational::zero);
        *slot = &*slot + &(sign * &c);
    }
    a.retain(|_, c| !c.is_zero());
}

fn constant(c: Rational) -> General {
    let mut g = General::new();
    if !c.is_zero() {
        g.insert(Vec::new(), c);
    }
    g
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at column {} in {:?}",
            self.pos + 1,
            self.src
        ))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn parse_all(mut self) -> Result<General> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<General> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                add_scaled(&mut acc, t, &Rational::one());
            } else if self.eat('-') {
                let t = self.term()?;
                add_scaled(&mut acc, t, &Rational::from_integer(-1));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<General> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = match d.len() {
                    1 if d.contains_key(&Vec::new()) => d[&Vec::new()].clone(),
                    0 => return Err(self.error("division by zero")),
                    _ => return Err(self.error("division by a non-constant")),
                };
                acc = mul(&acc, &constant(c.recip()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<General> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(mul(&constant(Rational::from_integer(-1)), &inner));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<General> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        let exp: u32 = digits
            .parse()
            .map_err(|_| self.error("expected an exponent"))?;
        if exp > MAX_EXPONENT {
            return Err(self.error("exponent too large"));
        }
        let mut acc = constant(Rational::one());
        for _ in 0..exp {
            acc = mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<General> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: Rational = digits.parse().map_err(|_| self.error("bad number"))?;
                Ok(constant(n))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                let mut g = General::new();
                g.insert(vec![Var(name.to_string())], Rational::one());
                Ok(g)
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QuadraticPoly {
        s.parse().unwrap()
    }

    #[test]
    fn natural_variable_order() {
        let mut vs: Vec<Var> = ["X10", "X2", "Y1", "X1_1", "X1_0", "X2_0"]
            .iter()
            .map(|s| Var(s.to_string()))
            .collect();
        vs.sort();
        let names: Vec<&str> = vs.iter().map(|v| v.0.as_str()).collect();
        assert_eq!(names, vec!["X1_0", "X1_1", "X2", "X2_0", "X10", "Y1"]);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("X1^2 + Y1").to_string(), "X1^2 + Y1");
        assert_eq!(p("X1*X2 - Y1*Y2 + 1").to_string(), "X1*X2 - Y1*Y2 + 1");
        assert_eq!(p("(X1 + 1)^2").to_string(), "X1^2 + 2*X1 + 1");
        assert_eq!(p("3/4*X1 - 1/2").to_string(), "(3/4)*X1 - 1/2");
        assert_eq!(p("X1 - X1").to_string(), "0");
        assert_eq!(p("-X1*X1").to_string(), "-X1^2");
        assert_eq!(p("X1 / 2 * 2"), p("X1"));
    }

    #[test]
    fn print_round_trips() {
        for s in [
            "X1^2 + Y1",
            "(3/4)*X1*Y2 - 1/2",
            "-X2 + 7",
            "0",
            "-(5/3)*Y1^2",
        ] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s}");
        }
    }

    #[test]
    fn degree_is_checked_after_cancellation() {
        assert!(matches!(
            QuadraticPoly::parse("X1*X2*X3"),
            Err(Error::DegreeTooHigh { degree: 3 })
        ));
        assert_eq!(p("X1^3 - X1^3 + X1").degree(), 1);
    }

    #[test]
    fn parse_errors_point_at_input() {
        for bad in ["X1 +", "X1 / Y1", "1/0", "(X1", "X1 $ 2", "X1^"] {
            assert!(QuadraticPoly::parse(bad).is_err(), "{bad}");
        }
        let msg = QuadraticPoly::parse("X1 $ 2").unwrap_err().to_string();
        assert!(msg.contains("column 4"), "{msg}");
    }

    #[test]
    fn rename_preserves_coefficients() {
        let a = p("X1*X2 - Y1 + 2");
        let b = a
            .rename(|v| {
                Ok(Var(if v.0.starts_with('X') {
                    format!("{}_0", v.0)
                } else {
                    v.0.clone()
                }))
            })
            .unwrap();
        assert_eq!(b.to_string(), "X1_0*X2_0 - Y1 + 2");
    }
}
