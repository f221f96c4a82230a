//! Sparse multivariate polynomials over ℚ in the parameters `l1, l2, l3, h, a`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so two equal polynomials have identical term lists
//! and identical text.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::{KernelError, Rational};

pub const NUM_PARAMS: usize = 5;

/// A parameter symbol.
///
/// `L1`, `L2`, `L3` are the scalars of the central elements, `H` the lowest
/// `L_0`-eigenvalue of a twisted Verma module and `A` the scale of a candidate
/// automorphism on `I_{-1}1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    L1,
    L2,
    L3,
    H,
    A,
}

impl Param {
    pub const ALL: [Param; NUM_PARAMS] = [Param::L1, Param::L2, Param::L3, Param::H, Param::A];

    pub fn name(self) -> &'static str {
        match self {
            Param::L1 => "l1",
            Param::L2 => "l2",
            Param::L3 => "l3",
            Param::H => "h",
            Param::A => "a",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector of a parameter monomial, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Exponents([u16; NUM_PARAMS]);

impl Exponents {
    pub fn of(p: Param, e: u16) -> Self {
        let mut x = [0; NUM_PARAMS];
        x[p.slot()] = e;
        Exponents(x)
    }

    pub fn get(&self, p: Param) -> u16 {
        self.0[p.slot()]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        let mut x = self.0;
        for (a, b) in x.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Exponents(x)
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the parameters with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ParamPoly::monomial(c, Exponents::default())
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(Rational::from_int(n))
    }

    pub fn var(p: Param) -> Self {
        ParamPoly::monomial(Rational::one(), Exponents::of(p, 1))
    }

    pub fn monomial(c: Rational, e: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter().rev()
    }

    /// The value if the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// The parameters occurring with nonzero exponent.
    pub fn params(&self) -> Vec<Param> {
        Param::ALL
            .into_iter()
            .filter(|&p| self.terms.keys().any(|e| e.get(p) > 0))
            .collect()
    }

    pub fn degree_in(&self, p: Param) -> u16 {
        self.terms.keys().map(|e| e.get(p)).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> ParamPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip().expect("nonzero leading coefficient")),
            None => ParamPoly::zero(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &ParamPoly) {
        for (e, c) in &other.terms {
            add_term(&mut self.terms, *e, c);
        }
    }

    pub fn add_scaled(&mut self, other: &ParamPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (e, x) in &other.terms {
            add_term(&mut self.terms, *e, &(x * c));
        }
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation; every occurring parameter must be bound.
    pub fn eval(&self, assignment: &BTreeMap<Param, Rational>) -> Result<Rational, KernelError> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for p in Param::ALL {
                let k = e.get(p);
                if k == 0 {
                    continue;
                }
                let x = assignment.get(&p).ok_or(KernelError::UnboundParameter(p))?;
                v = &v * &x.pow(k as u32);
            }
            total += &v;
        }
        Ok(total)
    }

    /// Substitutes the bound parameters and leaves the others symbolic.
    pub fn partial_eval(&self, assignment: &BTreeMap<Param, Rational>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = *e;
            for (p, x) in assignment {
                let k = e.get(*p);
                if k > 0 {
                    coeff = &coeff * &x.pow(k as u32);
                    rest.0[p.slot()] = 0;
                }
            }
            add_term(&mut out.terms, rest, &coeff);
        }
        out
    }

    /// Coefficients of the powers of `p`, as polynomials in the remaining
    /// parameters; index `k` holds the coefficient of `p^k`.
    pub fn coefficients_in(&self, p: Param) -> Vec<ParamPoly> {
        let mut out = vec![ParamPoly::zero(); self.degree_in(p) as usize + 1];
        for (e, c) in &self.terms {
            let k = e.get(p) as usize;
            let mut rest = *e;
            rest.0[p.slot()] = 0;
            add_term(&mut out[k].terms, rest, c);
        }
        out
    }
}

fn add_term(terms: &mut BTreeMap<Exponents, Rational>, e: Exponents, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&e) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                terms.remove(&e);
            }
        }
        None => {
            terms.insert(e, c.clone());
        }
    }
}

impl From<Rational> for ParamPoly {
    fn from(c: Rational) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<Param> for ParamPoly {
    fn from(p: Param) -> Self {
        ParamPoly::var(p)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_int(-1));
        out
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        &self - &rhs
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                add_term(&mut out, ea.mul(eb), &(ca * cb));
            }
        }
        ParamPoly { terms: out }
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        &self * &rhs
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

fn fmt_monomial(e: &Exponents, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for p in Param::ALL {
        let k = e.get(p);
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{p}")?;
        } else {
            write!(f, "{p}^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

impl FromStr for ParamPoly {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_poly(s)
    }
}

impl serde::Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ParamPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParamPoly {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert!((p("l1") + p("-l1")).is_zero());
        assert_eq!(p("2*h") + p("h + 1/2"), p("3*h + 1/2"));
        assert_eq!((p("2*h") + p("h + 1/2")).to_string(), "3*h + 1/2");
        let s = p("l2^2") + p("l2");
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "l2^2 + l2");
    }

    #[test]
    fn multiplication_examples() {
        assert!((p("h") * ParamPoly::zero()).is_zero());
        assert_eq!(p("l2 + 1") * p("l2 - 1"), p("l2^2 - 1"));
        assert_eq!((p("l2 + 1") * p("l2 - 1")).to_string(), "l2^2 - 1");
        assert_eq!((ParamPoly::int(12) * p("l2^2")).to_string(), "12*l2^2");
    }

    #[test]
    fn evaluation_examples() {
        let mut a = BTreeMap::new();
        a.insert(Param::L1, Rational::one());
        assert_eq!(p("l1/2").eval(&a).unwrap(), Rational::new(1, 2));

        let mut a = BTreeMap::new();
        a.insert(Param::H, Rational::new(3, 4));
        assert_eq!(p("2*h").eval(&a).unwrap(), Rational::new(3, 2));

        // l3 * c_vir after clearing the 1/l3 denominator, divided back out.
        let cleared = p("l1*l3 - l3 + 12*l2^2");
        let mut a = BTreeMap::new();
        a.insert(Param::L1, Rational::from_int(26));
        a.insert(Param::L2, Rational::zero());
        a.insert(Param::L3, Rational::one());
        let v = cleared.eval(&a).unwrap() / p("l3").eval(&a).unwrap();
        assert_eq!(v, Rational::from_int(25));
    }

    #[test]
    fn unbound_parameter() {
        let err = p("l1 + h").eval(&BTreeMap::new()).unwrap_err();
        assert!(matches!(err, KernelError::UnboundParameter(_)));
    }

    #[test]
    fn text_form() {
        assert_eq!(p("-2*l2").to_string(), "-2*l2");
        assert_eq!(p("1/2*l1*h^2 - a").to_string(), "1/2*l1*h^2 - a");
        assert_eq!(p("(l1 - 1)*(l1 + 1)").to_string(), "l1^2 - 1");
        assert_eq!(ParamPoly::zero().to_string(), "0");
        assert_eq!(p("-1/3").to_string(), "-1/3");
    }

    #[test]
    fn partial_and_coefficients() {
        let q = p("a^2*l3 - l3 + a*l2");
        let mut asg = BTreeMap::new();
        asg.insert(Param::L3, Rational::from_int(2));
        asg.insert(Param::L2, Rational::zero());
        assert_eq!(q.partial_eval(&asg), p("2*a^2 - 2"));
        let cs = q.coefficients_in(Param::A);
        assert_eq!(cs, vec![p("-l3"), p("l2"), p("l3")]);
        assert_eq!(p("-2*a*l2 + 2*l2").monic(), p("a*l2 - l2"));
    }
}
