//! The twisted Heisenberg-Virasoro algebra and its twisted-sector algebras.
//!
//! One descriptor covers both: twist `t = 1` is the untwisted algebra with
//! basis `L_n, I_n, c1, c2, c3` (`n ∈ ℤ`), and `t >= 2` is the algebra with
//! basis `L_n, I_{n+1/t}, k1, k3`. Brackets:
//!
//! ```text
//! t = 1:  [L_m, L_n] = (m-n) L_{m+n} + δ_{m+n,0} (m^3-m)/12 c1
//!         [L_m, I_n] = -n I_{m+n} - δ_{m+n,0} (m^2+m) c2
//!         [I_m, I_n] = m δ_{m+n,0} c3
//! t >= 2: [L_m, L_n] = (m-n) L_{m+n} + δ_{m+n,0} (m^3-m)/12 k1
//!         [L_m, I_r] = -r I_{m+r}
//!         [I_r, I_s] = r δ_{r+s,0} δ_{t,2} k3
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::{parse_linear, KernelError, ParamPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("twist must be a positive integer, got {0}")]
    InvalidTwist(u32),
    #[error("generator {gen} is not a basis element of the algebra with twist {twist}")]
    MalformedGenerator { gen: String, twist: u32 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The algebra, identified by its twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Algebra {
    twist: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    L,
    I,
    C1,
    C2,
    C3,
    K1,
    K3,
}

impl GenKind {
    pub fn is_central(self) -> bool {
        !matches!(self, GenKind::L | GenKind::I)
    }

    fn central_name(self) -> Option<&'static str> {
        Some(match self {
            GenKind::C1 => "c1",
            GenKind::C2 => "c2",
            GenKind::C3 => "c3",
            GenKind::K1 => "k1",
            GenKind::K3 => "k3",
            _ => return None,
        })
    }
}

/// A basis element. Central generators carry index zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: GenKind,
    pub index: Rational,
}

impl Generator {
    pub fn l(n: i64) -> Self {
        Generator {
            kind: GenKind::L,
            index: Rational::from_int(n),
        }
    }

    pub fn i(index: Rational) -> Self {
        Generator {
            kind: GenKind::I,
            index,
        }
    }

    pub fn i_int(n: i64) -> Self {
        Generator::i(Rational::from_int(n))
    }

    pub fn central(kind: GenKind) -> Self {
        debug_assert!(kind.is_central());
        Generator {
            kind,
            index: Rational::zero(),
        }
    }

    pub fn is_central(&self) -> bool {
        self.kind.is_central()
    }

    /// The `ad L_0` eigenvalue: `-index` for modes, zero for centrals.
    pub fn degree(&self) -> Rational {
        if self.is_central() {
            Rational::zero()
        } else {
            -&self.index
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::L => write!(f, "L[{}]", self.index),
            GenKind::I => write!(f, "I[{}]", self.index),
            k => f.write_str(k.central_name().unwrap()),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Generator {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlgebraError::Kernel(KernelError::Parse(format!("invalid generator `{s}`")));
        for kind in [
            GenKind::C1,
            GenKind::C2,
            GenKind::C3,
            GenKind::K1,
            GenKind::K3,
        ] {
            if s == kind.central_name().unwrap() {
                return Ok(Generator::central(kind));
            }
        }
        let kind = match s.chars().next() {
            Some('L') => GenKind::L,
            Some('I') => GenKind::I,
            _ => return Err(bad()),
        };
        let inner = s[1..]
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let index: Rational = inner.parse().map_err(|_| bad())?;
        Ok(Generator { kind, index })
    }
}

/// A finite polynomial-weighted combination of generators.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<Generator, ParamPoly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(g: Generator, c: ParamPoly) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(g, &c);
        e
    }

    pub fn gen(g: Generator) -> Self {
        AlgebraElement::term(g, ParamPoly::one())
    }

    pub fn add_term(&mut self, g: Generator, c: &ParamPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g.clone()).or_default();
        slot.add_assign_ref(c);
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    /// Adds `c` times a rational multiple of `g`.
    fn add_rational(&mut self, g: Generator, c: Rational) {
        self.add_term(g, &ParamPoly::constant(c));
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &ParamPoly) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, x) in &self.terms {
            out.add_term(g.clone(), &(x * c));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Generator) -> ParamPoly {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(&self, &rhs)
    }
}

/// Writes `coeff*symbol` terms of a weighted sum in the shared text format.
pub(crate) fn fmt_weighted<'a, S: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (S, &'a ParamPoly)>,
) -> fmt::Result {
    let mut first = true;
    for (sym, c) in terms {
        let single = c.len() == 1;
        let negative = single && c.terms().next().unwrap().1.is_negative();
        let mag = if negative { -c } else { c.clone() };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if single {
            if mag != ParamPoly::one() {
                write!(f, "{mag}*")?;
            }
        } else {
            write!(f, "({mag})*")?;
        }
        write!(f, "{sym}")?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_weighted(f, self.terms.iter())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

impl FromStr for AlgebraElement {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let resolve = |name: &str| name.parse::<Generator>().ok();
        let lin = parse_linear(s, &resolve)?;
        if !lin.scalar.is_zero() {
            return Err(KernelError::Parse(format!("bare scalar term in `{s}`")).into());
        }
        let mut out = AlgebraElement::zero();
        for (g, c) in lin.basis {
            out.add_term(g, &c);
        }
        Ok(out)
    }
}

fn delta(x: &Rational) -> bool {
    x.is_zero()
}

impl Algebra {
    pub fn new(twist: u32) -> Result<Self, AlgebraError> {
        if twist == 0 {
            return Err(AlgebraError::InvalidTwist(twist));
        }
        Ok(Algebra { twist })
    }

    pub fn untwisted() -> Self {
        Algebra { twist: 1 }
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn is_twisted(&self) -> bool {
        self.twist >= 2
    }

    /// The fractional part `1/t` of I-mode indices (zero when untwisted).
    pub fn i_offset(&self) -> Rational {
        if self.is_twisted() {
            Rational::new(1, self.twist as i64)
        } else {
            Rational::zero()
        }
    }

    /// Whether `index` lies on the I-mode lattice `ℤ + 1/t` (or `ℤ`).
    pub fn is_i_index(&self, index: &Rational) -> bool {
        (index - &self.i_offset()).is_integer()
    }

    pub fn validate(&self, g: &Generator) -> Result<(), AlgebraError> {
        let ok = match g.kind {
            GenKind::L => g.index.is_integer(),
            GenKind::I => self.is_i_index(&g.index),
            GenKind::C1 | GenKind::C2 | GenKind::C3 => !self.is_twisted() && g.index.is_zero(),
            GenKind::K1 | GenKind::K3 => self.is_twisted() && g.index.is_zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(AlgebraError::MalformedGenerator {
                gen: g.to_string(),
                twist: self.twist,
            })
        }
    }

    pub fn centrals(&self) -> Vec<Generator> {
        let kinds: &[GenKind] = if self.is_twisted() {
            &[GenKind::K1, GenKind::K3]
        } else {
            &[GenKind::C1, GenKind::C2, GenKind::C3]
        };
        kinds.iter().map(|&k| Generator::central(k)).collect()
    }

    /// Every basis element with `|index| <= bound`, centrals included.
    pub fn generators_up_to(&self, bound: i64) -> Vec<Generator> {
        let mut out: Vec<Generator> = (-bound..=bound).map(Generator::l).collect();
        out.extend(
            self.i_modes_up_to(&Rational::from_int(bound))
                .map(Generator::i),
        );
        out.extend(self.centrals());
        out
    }

    /// I-mode indices with absolute value at most `bound`, ascending.
    pub fn i_modes_up_to(&self, bound: &Rational) -> impl Iterator<Item = Rational> {
        let off = self.i_offset();
        let lo = (-bound - off.clone()).floor();
        let hi = (bound - &off).floor();
        let lo: i64 = lo.try_into().expect("small bound");
        let hi: i64 = hi.try_into().expect("small bound");
        let bound = bound.clone();
        (lo..=hi)
            .map(move |n| &Rational::from_int(n) + &off)
            .filter(move |r| r.abs() <= bound)
    }

    fn virasoro_central(&self) -> Generator {
        Generator::central(if self.is_twisted() {
            GenKind::K1
        } else {
            GenKind::C1
        })
    }

    /// The Lie bracket of two basis elements.
    pub fn bracket(&self, x: &Generator, y: &Generator) -> Result<AlgebraElement, AlgebraError> {
        self.validate(x)?;
        self.validate(y)?;
        let mut out = AlgebraElement::zero();
        if x.is_central() || y.is_central() {
            return Ok(out);
        }
        let (m, n) = (&x.index, &y.index);
        let sum = m + n;
        match (x.kind, y.kind) {
            (GenKind::L, GenKind::L) => {
                out.add_rational(Generator::l(sum.to_i64().unwrap()), m - n);
                if delta(&sum) {
                    let c = &(&m.pow(3) - m) / &Rational::from_int(12);
                    out.add_rational(self.virasoro_central(), c);
                }
            }
            (GenKind::L, GenKind::I) => {
                out.add_rational(Generator::i(sum.clone()), -n);
                if !self.is_twisted() && delta(&sum) {
                    out.add_rational(Generator::central(GenKind::C2), -(&m.pow(2) + m));
                }
            }
            (GenKind::I, GenKind::L) => {
                out.add_rational(Generator::i(sum.clone()), m.clone());
                if !self.is_twisted() && delta(&sum) {
                    out.add_rational(Generator::central(GenKind::C2), &n.pow(2) + n);
                }
            }
            (GenKind::I, GenKind::I) => {
                if delta(&sum) {
                    match self.twist {
                        1 => out.add_rational(Generator::central(GenKind::C3), m.clone()),
                        2 => out.add_rational(Generator::central(GenKind::K3), m.clone()),
                        _ => {}
                    }
                }
            }
            _ => unreachable!("centrals handled above"),
        }
        Ok(out)
    }

    /// The bilinear extension of [`Algebra::bracket`].
    pub fn bracket_elem(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zero();
        for (gx, cx) in x.terms() {
            for (gy, cy) in y.terms() {
                let b = self.bracket(gx, gy)?;
                let c = cx * cy;
                for (g, k) in b.terms() {
                    out.add_term(g.clone(), &(k * &c));
                }
            }
        }
        Ok(out)
    }

    pub fn degree(&self, g: &Generator) -> Result<Rational, AlgebraError> {
        self.validate(g)?;
        Ok(g.degree())
    }

    /// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobiator(
        &self,
        x: &Generator,
        y: &Generator,
        z: &Generator,
    ) -> Result<AlgebraElement, AlgebraError> {
        let a = self.bracket_elem(&AlgebraElement::gen(x.clone()), &self.bracket(y, z)?)?;
        let b = self.bracket_elem(&AlgebraElement::gen(y.clone()), &self.bracket(z, x)?)?;
        let c = self.bracket_elem(&AlgebraElement::gen(z.clone()), &self.bracket(x, y)?)?;
        Ok(a.add(&b).add(&c))
    }

    /// Exhaustively checks antisymmetry, the Jacobi identity, centrality and
    /// grading additivity on generators with `|index| <= bound`.
    pub fn check_axioms(&self, bound: i64) -> Result<AxiomReport, AlgebraError> {
        let gens = self.generators_up_to(bound);
        let mut report = AxiomReport::default();
        for x in &gens {
            for y in &gens {
                let xy = self.bracket(x, y)?;
                let yx = self.bracket(y, x)?;
                report.pairs += 1;
                if xy != yx.scale(&ParamPoly::int(-1)) {
                    report.antisymmetry_failures.push(format!("[{x}, {y}]"));
                }
                if (x.is_central() || y.is_central()) && !xy.is_zero() {
                    report.centrality_failures.push(format!("[{x}, {y}]"));
                }
                let want = &x.degree() + &y.degree();
                if xy
                    .terms()
                    .any(|(g, _)| !g.is_central() && g.degree() != want)
                {
                    report.grading_failures.push(format!("[{x}, {y}]"));
                }
            }
        }
        let modes: Vec<&Generator> = gens.iter().filter(|g| !g.is_central()).collect();
        for (i, x) in modes.iter().enumerate() {
            for (j, y) in modes.iter().enumerate().skip(i) {
                for z in modes.iter().skip(j) {
                    report.triples += 1;
                    if !self.jacobiator(x, y, z)?.is_zero() {
                        report.jacobi_failures.push(format!("({x}, {y}, {z})"));
                    }
                }
            }
        }
        Ok(report)
    }
}

/// Outcome of [`Algebra::check_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs: usize,
    pub triples: usize,
    pub antisymmetry_failures: Vec<String>,
    pub jacobi_failures: Vec<String>,
    pub centrality_failures: Vec<String>,
    pub grading_failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.centrality_failures.is_empty()
            && self.grading_failures.is_empty()
    }
}
