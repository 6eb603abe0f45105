//! Sparse bivariate polynomials in `x`, `y` over [`Rational`].
//!
//! Terms live in a `BTreeMap` keyed by the exponent pair `(x-degree,
//! y-degree)`; a coefficient of zero is never stored, so two polynomials are
//! equal exactly when their term maps are equal. That canonical form is what
//! makes identity verification a plain map comparison.
//!
//! Rendering and parsing use one term order: y-degree ascending, then
//! x-degree descending. For a polynomial `sum_k c_k (x)_k y^k` this prints
//! the `k`-th falling-factorial block contiguously, highest power of `x`
//! first, e.g. `1/2*x*y + 1/4*x^2*y^2 - 1/4*x*y^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::comb::binomial;
use crate::rational::{format_rational, parse_rational, rat_pow, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn var_x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn var_y() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    /// `c * x^xdeg * y^ydeg`; the zero coefficient yields the zero polynomial.
    pub fn monomial(xdeg: u32, ydeg: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((xdeg, ydeg), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0, 0).is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x^xdeg * y^ydeg` (zero if the term is absent).
    pub fn coeff(&self, xdeg: u32, ydeg: u32) -> Rational {
        self.terms
            .get(&(xdeg, ydeg))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Maximum of `i + j` over stored terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: (u32, u32), c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation by substitution.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * rat_pow(x, i) * rat_pow(y, j);
        }
        acc
    }

    /// Substitute a value for `x`, leaving a polynomial in `y`.
    pub fn eval_x(&self, x: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term((0, j), &(c * rat_pow(x, i)));
        }
        out
    }

    /// Substitute a value for `y`, leaving a polynomial in `x`.
    pub fn eval_y(&self, y: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term((i, 0), &(c * rat_pow(y, j)));
        }
        out
    }

    /// Exact composition `x -> x + c` (so `shift_x(-k)` gives `p(x-k, y)`).
    pub fn shift_x(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (&(i, j), coef) in &self.terms {
            // (x + c)^i expanded by the binomial theorem
            for t in 0..=i {
                let w = Rational::from_integer(binomial(i, t.into())) * rat_pow(c, i - t) * coef;
                out.add_term((t, j), &w);
            }
        }
        out
    }
}

impl Add<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, &-c.clone());
        }
        out
    }
}

impl Mul<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&k, v)| (k, -v.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $method(self, rhs: BivarPoly) -> BivarPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $method(self, rhs: &BivarPoly) -> BivarPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        -&self
    }
}

impl AddAssign<BivarPoly> for BivarPoly {
    fn add_assign(&mut self, rhs: BivarPoly) {
        for (k, c) in rhs.terms {
            self.add_term(k, &c);
        }
    }
}

impl AddAssign<&BivarPoly> for BivarPoly {
    fn add_assign(&mut self, rhs: &BivarPoly) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl SubAssign<&BivarPoly> for BivarPoly {
    fn sub_assign(&mut self, rhs: &BivarPoly) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, &-c.clone());
        }
    }
}

/// Canonical print order: y-degree ascending, x-degree descending.
fn render_order(a: &(u32, u32), b: &(u32, u32)) -> std::cmp::Ordering {
    (a.1, std::cmp::Reverse(a.0)).cmp(&(b.1, std::cmp::Reverse(b.0)))
}

fn render_vars(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    parts.join("*")
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| render_order(a, b));
        for (pos, &&(i, j)) in keys.iter().enumerate() {
            let c = &self.terms[&(i, j)];
            if pos == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let vars = render_vars(i, j);
            if vars.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{}*{vars}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("empty polynomial")]
    Empty,
    #[error("empty term in polynomial")]
    EmptyTerm,
    #[error("invalid factor `{0}`")]
    BadFactor(String),
    #[error("invalid exponent `{0}`")]
    BadExponent(String),
}

impl FromStr for BivarPoly {
    type Err = ParsePolyError;

    /// Parses the format produced by `Display` (whitespace is ignored).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParsePolyError::Empty);
        }
        let mut out = BivarPoly::zero();
        let mut rest = compact.as_str();
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('-') {
            negative = true;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        loop {
            let term_end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(term_end);
            let (i, j, mag) = parse_term(term)?;
            let c = if negative { -mag } else { mag };
            out.add_term((i, j), &c);
            if tail.is_empty() {
                break;
            }
            negative = tail.starts_with('-');
            rest = &tail[1..];
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(u32, u32, Rational), ParsePolyError> {
    if term.is_empty() {
        return Err(ParsePolyError::EmptyTerm);
    }
    let mut coeff = Rational::one();
    let (mut i, mut j) = (0u32, 0u32);
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(ParsePolyError::BadFactor(term.to_string()));
        }
        match factor.as_bytes()[0] {
            b'x' | b'y' => {
                let exp = match &factor[1..] {
                    "" => 1u32,
                    rest => rest
                        .strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| ParsePolyError::BadExponent(factor.to_string()))?,
                };
                let slot = if factor.starts_with('x') {
                    &mut i
                } else {
                    &mut j
                };
                *slot = slot
                    .checked_add(exp)
                    .ok_or_else(|| ParsePolyError::BadExponent(factor.to_string()))?;
            }
            _ => {
                let q = parse_rational(factor)
                    .map_err(|_| ParsePolyError::BadFactor(factor.to_string()))?;
                coeff *= q;
            }
        }
    }
    Ok((i, j, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn xy_poly() -> BivarPoly {
        // 1/2*x*y + 1/4*(x^2 - x)*y^2
        let mut p = BivarPoly::monomial(1, 1, ratio(1, 2));
        p += BivarPoly::monomial(2, 2, ratio(1, 4));
        p += BivarPoly::monomial(1, 2, ratio(-1, 4));
        p
    }

    #[test]
    fn display_canonical_order() {
        assert_eq!(xy_poly().to_string(), "1/2*x*y + 1/4*x^2*y^2 - 1/4*x*y^2");
        assert_eq!(BivarPoly::zero().to_string(), "0");
        assert_eq!(BivarPoly::one().to_string(), "1");
        assert_eq!(BivarPoly::monomial(1, 0, rat(-1)).to_string(), "-x");
        let p = BivarPoly::monomial(2, 0, rat(1)) + BivarPoly::monomial(1, 0, rat(-3));
        assert_eq!(p.to_string(), "x^2 - 3*x");
    }

    #[test]
    fn parse_round_trip() {
        for p in [
            xy_poly(),
            BivarPoly::zero(),
            BivarPoly::one(),
            BivarPoly::monomial(3, 2, ratio(-7, 5)) + BivarPoly::constant(rat(4)),
        ] {
            let back: BivarPoly = p.to_string().parse().unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!("".parse::<BivarPoly>().is_err());
        assert!("x +".parse::<BivarPoly>().is_err());
        assert!("x^".parse::<BivarPoly>().is_err());
        assert!("z".parse::<BivarPoly>().is_err());
        assert!("2**x".parse::<BivarPoly>().is_err());
        assert!("1/0*x".parse::<BivarPoly>().is_err());
        // exponents must fit, even when accumulated across factors
        assert!("x^4294967295*x^2".parse::<BivarPoly>().is_err());
    }

    #[test]
    fn eval_examples() {
        // x^2 - x at (3, 0) -> 6
        let p = BivarPoly::monomial(2, 0, rat(1)) + BivarPoly::monomial(1, 0, rat(-1));
        assert_eq!(p.eval(&rat(3), &rat(0)), rat(6));
        assert_eq!(BivarPoly::one().eval(&rat(17), &ratio(-3, 4)), rat(1));
        // x*y at (2, 1/2) -> 1
        let q = BivarPoly::monomial(1, 1, rat(1));
        assert_eq!(q.eval(&rat(2), &ratio(1, 2)), rat(1));
    }

    #[test]
    fn cancellation_prunes_to_empty_map() {
        let p = xy_poly();
        let d = &p - &p;
        assert!(d.is_zero());
        assert_eq!(d.num_terms(), 0);
    }

    #[test]
    fn shift_x_composes_exactly() {
        // (x+1)^2 = x^2 + 2x + 1
        let sq = BivarPoly::var_x().pow(2);
        let shifted = sq.shift_x(&rat(1));
        let expected = BivarPoly::monomial(2, 0, rat(1))
            + BivarPoly::monomial(1, 0, rat(2))
            + BivarPoly::constant(rat(1));
        assert_eq!(shifted, expected);
        // shifting back is the identity
        assert_eq!(shifted.shift_x(&rat(-1)), sq);
    }

    #[test]
    fn partial_substitution() {
        let p = xy_poly();
        // x = 1: 1/2*y + 1/4*y^2 - 1/4*y^2 = 1/2*y
        assert_eq!(p.eval_x(&rat(1)), BivarPoly::monomial(0, 1, ratio(1, 2)));
        // y = 0 kills every term here
        assert!(p.eval_y(&rat(0)).is_zero());
    }

    #[test]
    fn degrees() {
        let p = xy_poly();
        assert_eq!(p.deg_x(), 2);
        assert_eq!(p.deg_y(), 2);
        assert_eq!(p.total_degree(), 4);
        assert_eq!(BivarPoly::zero().total_degree(), 0);
    }
}
