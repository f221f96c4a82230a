//! PBW models of the vacuum module and of the twisted Verma-type modules.
//!
//! A vector is a polynomial-weighted sum of normal-ordered words
//! `I_{a_1} ⋯ I_{a_s} L_{-m_1} ⋯ L_{-m_r} v` with all I-factors to the left
//! and each block nonincreasing in `-index`. Generators act by recursive
//! straightening: a generator is commuted rightward through the word with
//! the bracket, raising modes die on the cyclic vector, `L_0` there becomes
//! the lowest weight and centrals become their bindings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{fmt_weighted, Algebra, AlgebraElement, AlgebraError, GenKind, Generator};
use crate::kernel::{parse_linear, KernelError, Param, ParamPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid monomial {0}")]
    InvalidMonomial(String),
    #[error("invalid module descriptor: {0}")]
    InvalidDescriptor(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    Vacuum,
    TwistedVerma,
}

/// Scalars by which the centrals (and, for Verma modules, `L_0` on the
/// cyclic vector) act.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleParams {
    Vacuum {
        l1: ParamPoly,
        l2: ParamPoly,
        l3: ParamPoly,
    },
    TwistedVerma {
        k1: ParamPoly,
        k3: ParamPoly,
        h: ParamPoly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleDescriptor {
    alg: Algebra,
    params: ModuleParams,
}

impl ModuleDescriptor {
    pub fn vacuum(l1: ParamPoly, l2: ParamPoly, l3: ParamPoly) -> Self {
        ModuleDescriptor {
            alg: Algebra::untwisted(),
            params: ModuleParams::Vacuum { l1, l2, l3 },
        }
    }

    /// The vacuum module with `c_i` acting by the symbols `l_i`.
    pub fn vacuum_symbolic() -> Self {
        ModuleDescriptor::vacuum(Param::L1.into(), Param::L2.into(), Param::L3.into())
    }

    pub fn vacuum_rational(l1: Rational, l2: Rational, l3: Rational) -> Self {
        ModuleDescriptor::vacuum(l1.into(), l2.into(), l3.into())
    }

    pub fn twisted_verma(
        twist: u32,
        k1: ParamPoly,
        k3: ParamPoly,
        h: ParamPoly,
    ) -> Result<Self, ModuleError> {
        if twist < 2 {
            return Err(ModuleError::InvalidDescriptor(format!(
                "twisted Verma modules need t >= 2, got {twist}"
            )));
        }
        Ok(ModuleDescriptor {
            alg: Algebra::new(twist)?,
            params: ModuleParams::TwistedVerma { k1, k3, h },
        })
    }

    /// `k1 ↦ l1`, `k3 ↦ l3`, `h ↦ h`.
    pub fn twisted_symbolic(twist: u32) -> Result<Self, ModuleError> {
        ModuleDescriptor::twisted_verma(twist, Param::L1.into(), Param::L3.into(), Param::H.into())
    }

    pub fn twisted_rational(
        twist: u32,
        k1: Rational,
        k3: Rational,
        h: Rational,
    ) -> Result<Self, ModuleError> {
        ModuleDescriptor::twisted_verma(twist, k1.into(), k3.into(), h.into())
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn twist(&self) -> u32 {
        self.alg.twist()
    }

    pub fn kind(&self) -> ModuleKind {
        match self.params {
            ModuleParams::Vacuum { .. } => ModuleKind::Vacuum,
            ModuleParams::TwistedVerma { .. } => ModuleKind::TwistedVerma,
        }
    }

    pub fn params(&self) -> &ModuleParams {
        &self.params
    }

    /// The scalar of a central generator.
    pub fn central_value(&self, kind: GenKind) -> ParamPoly {
        match (&self.params, kind) {
            (ModuleParams::Vacuum { l1, .. }, GenKind::C1) => l1.clone(),
            (ModuleParams::Vacuum { l2, .. }, GenKind::C2) => l2.clone(),
            (ModuleParams::Vacuum { l3, .. }, GenKind::C3) => l3.clone(),
            (ModuleParams::TwistedVerma { k1, .. }, GenKind::K1) => k1.clone(),
            (ModuleParams::TwistedVerma { k3, .. }, GenKind::K3) => k3.clone(),
            _ => ParamPoly::zero(),
        }
    }

    /// `L_0` eigenvalue of the cyclic vector.
    pub fn lowest_weight(&self) -> ParamPoly {
        match &self.params {
            ModuleParams::Vacuum { .. } => ParamPoly::zero(),
            ModuleParams::TwistedVerma { h, .. } => h.clone(),
        }
    }

    pub fn bindings(&self) -> Vec<(&'static str, &ParamPoly)> {
        match &self.params {
            ModuleParams::Vacuum { l1, l2, l3 } => vec![("l1", l1), ("l2", l2), ("l3", l3)],
            ModuleParams::TwistedVerma { k1, k3, h } => vec![("k1", k1), ("k3", k3), ("h", h)],
        }
    }

    /// Whether every binding is a rational constant.
    pub fn is_concrete(&self) -> bool {
        self.bindings().iter().all(|(_, p)| p.is_constant())
    }

    /// Smallest positive level step, `1` or `1/t`.
    pub fn level_step(&self) -> Rational {
        match self.kind() {
            ModuleKind::Vacuum => Rational::one(),
            ModuleKind::TwistedVerma => Rational::new(1, self.twist() as i64),
        }
    }

    fn i_factor_index(&self, k: u32) -> Rational {
        &Rational::from_int(-(k as i64)) + &self.alg.i_offset()
    }

    fn i_factor_level(&self, k: u32) -> Rational {
        &Rational::from_int(k as i64) - &self.alg.i_offset()
    }

    fn min_l_part(&self) -> u32 {
        match self.kind() {
            ModuleKind::Vacuum => 2,
            ModuleKind::TwistedVerma => 1,
        }
    }

    /// Classifies a mode as a creation factor of the PBW basis.
    fn factor_of(&self, g: &Generator) -> Option<Factor> {
        match g.kind {
            GenKind::L => {
                let m = -g.index.to_i64()?;
                (m >= self.min_l_part() as i64).then_some(Factor::L(m as u32))
            }
            GenKind::I => {
                let k = (&self.alg.i_offset() - &g.index).to_i64()?;
                (k >= 1).then_some(Factor::I(k as u32))
            }
            _ => None,
        }
    }

    fn factor_generator(&self, f: Factor) -> Generator {
        match f {
            Factor::I(k) => Generator::i(self.i_factor_index(k)),
            Factor::L(m) => Generator::l(-(m as i64)),
        }
    }
}

/// One creation factor of a PBW word: `I(k)` is the k-th lowering I-mode,
/// `L(m)` is `L_{-m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    I(u32),
    L(u32),
}

/// A normal-ordered PBW word applied to the cyclic vector.
///
/// `i_part = [k_1 ≥ … ≥ k_s ≥ 1]` stands for `I_{-k_1+ε} ⋯ I_{-k_s+ε}` with
/// `ε = 0` (vacuum) or `1/t` (twisted), and `l_part = [m_1 ≥ … ≥ m_r]` for
/// `L_{-m_1} ⋯ L_{-m_r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PBWMonomial {
    #[serde(rename = "I")]
    pub i_part: Vec<u32>,
    #[serde(rename = "L")]
    pub l_part: Vec<u32>,
}

impl PBWMonomial {
    pub fn cyclic() -> Self {
        PBWMonomial::default()
    }

    pub fn new(i_part: Vec<u32>, l_part: Vec<u32>) -> Self {
        PBWMonomial { i_part, l_part }
    }

    pub fn is_cyclic(&self) -> bool {
        self.i_part.is_empty() && self.l_part.is_empty()
    }

    /// Checks ordering and lower bounds for `desc`.
    pub fn validate(&self, desc: &ModuleDescriptor) -> Result<(), ModuleError> {
        let nonincreasing = |v: &[u32]| v.windows(2).all(|w| w[0] >= w[1]);
        let ok = nonincreasing(&self.i_part)
            && nonincreasing(&self.l_part)
            && self.i_part.iter().all(|&k| k >= 1)
            && self.l_part.iter().all(|&m| m >= desc.min_l_part());
        if ok {
            Ok(())
        } else {
            Err(ModuleError::InvalidMonomial(format!(
                "I={:?} L={:?} for {:?}",
                self.i_part,
                self.l_part,
                desc.kind()
            )))
        }
    }

    /// Level above the cyclic vector.
    pub fn level(&self, desc: &ModuleDescriptor) -> Rational {
        let mut total = Rational::from_int(self.l_part.iter().map(|&m| m as i64).sum());
        for &k in &self.i_part {
            total += &desc.i_factor_level(k);
        }
        total
    }

    /// The σ_t-grade `s mod t`, with `s` the number of I-factors.
    pub fn sigma_grade(&self, twist: u32) -> u32 {
        (self.i_part.len() % twist as usize) as u32
    }

    /// The factors as generators, left to right.
    pub fn factors(&self, desc: &ModuleDescriptor) -> Vec<Generator> {
        self.i_part
            .iter()
            .map(|&k| Factor::I(k))
            .chain(self.l_part.iter().map(|&m| Factor::L(m)))
            .map(|f| desc.factor_generator(f))
            .collect()
    }

    fn first(&self) -> Option<Factor> {
        match (self.i_part.first(), self.l_part.first()) {
            (Some(&k), _) => Some(Factor::I(k)),
            (None, Some(&m)) => Some(Factor::L(m)),
            (None, None) => None,
        }
    }

    fn without_first(&self) -> PBWMonomial {
        let mut out = self.clone();
        if !out.i_part.is_empty() {
            out.i_part.remove(0);
        } else if !out.l_part.is_empty() {
            out.l_part.remove(0);
        }
        out
    }

    /// Prepends `f` when the result is still normal-ordered.
    fn try_prepend(&self, f: Factor) -> Option<PBWMonomial> {
        let ok = match (f, self.first()) {
            (_, None) => true,
            (Factor::I(_), Some(Factor::L(_))) => true,
            (Factor::I(k), Some(Factor::I(k0))) => k >= k0,
            (Factor::L(m), Some(Factor::L(m0))) => m >= m0,
            (Factor::L(_), Some(Factor::I(_))) => false,
        };
        ok.then(|| {
            let mut out = self.clone();
            match f {
                Factor::I(k) => out.i_part.insert(0, k),
                Factor::L(m) => out.l_part.insert(0, m),
            }
            out
        })
    }

    /// Text form such as `|I[-1/2] L[-1]>`; the cyclic vector is `|0>`.
    pub fn to_text(&self, desc: &ModuleDescriptor) -> String {
        if self.is_cyclic() {
            return "|0>".to_string();
        }
        let parts: Vec<String> = self.factors(desc).iter().map(|g| g.to_string()).collect();
        format!("|{}>", parts.join(" "))
    }

    pub fn parse(s: &str, desc: &ModuleDescriptor) -> Result<PBWMonomial, ModuleError> {
        let bad = || ModuleError::InvalidMonomial(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('|')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(bad)?
            .trim();
        if inner == "0" || inner.is_empty() {
            return Ok(PBWMonomial::cyclic());
        }
        let mut out = PBWMonomial::cyclic();
        for tok in inner.split_whitespace() {
            let g: Generator = tok.parse()?;
            desc.alg.validate(&g)?;
            match desc.factor_of(&g).ok_or_else(bad)? {
                Factor::I(k) if out.l_part.is_empty() => out.i_part.push(k),
                Factor::L(m) => out.l_part.push(m),
                _ => return Err(bad()),
            }
        }
        out.validate(desc)?;
        Ok(out)
    }
}

/// A finite polynomial-weighted combination of PBW words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    terms: BTreeMap<PBWMonomial, ParamPoly>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector::default()
    }

    pub fn cyclic() -> Self {
        ModuleVector::mono(PBWMonomial::cyclic())
    }

    pub fn mono(m: PBWMonomial) -> Self {
        ModuleVector::term(m, ParamPoly::one())
    }

    pub fn term(m: PBWMonomial, c: ParamPoly) -> Self {
        let mut v = ModuleVector::zero();
        v.add_term(m, &c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PBWMonomial) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: &ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                x.add_assign_ref(c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &ModuleVector, c: &ParamPoly) {
        if c.is_zero() {
            return;
        }
        let unit = *c == ParamPoly::one();
        for (m, x) in &other.terms {
            if unit {
                self.add_term(m.clone(), x);
            } else {
                self.add_term(m.clone(), &(x * c));
            }
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &ParamPoly::one());
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &ParamPoly::int(-1));
        out
    }

    pub fn scale(&self, c: &ParamPoly) -> ModuleVector {
        let mut out = ModuleVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Largest level among the terms.
    pub fn max_level(&self, desc: &ModuleDescriptor) -> Option<Rational> {
        self.terms.keys().map(|m| m.level(desc)).max()
    }

    pub fn validate(&self, desc: &ModuleDescriptor) -> Result<(), ModuleError> {
        self.terms.keys().try_for_each(|m| m.validate(desc))
    }

    pub fn to_text(&self, desc: &ModuleDescriptor) -> String {
        struct Show<'a>(&'a ModuleVector, &'a ModuleDescriptor);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_weighted(f, self.0.terms.iter().map(|(m, c)| (m.to_text(self.1), c)))
            }
        }
        Show(self, desc).to_string()
    }

    /// Parses the text form, e.g. `-2*l2*|0> + |I[-1] L[-2]>`.
    pub fn parse(s: &str, desc: &ModuleDescriptor) -> Result<ModuleVector, ModuleError> {
        if s.trim() == "0" {
            return Ok(ModuleVector::zero());
        }
        let resolve = |name: &str| PBWMonomial::parse(name, desc).ok();
        let lin = parse_linear(s, &resolve)?;
        if !lin.scalar.is_zero() {
            return Err(KernelError::Parse(format!("bare scalar term in `{s}`")).into());
        }
        let mut out = ModuleVector::zero();
        for (m, c) in lin.basis {
            out.add_term(m, &c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<VectorTerm> = self
            .terms
            .iter()
            .map(|(m, c)| VectorTerm {
                mono: m.clone(),
                coeff: c.clone(),
            })
            .collect();
        serde_json::to_value(items).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<ModuleVector, ModuleError> {
        let items: Vec<VectorTerm> =
            serde_json::from_value(value.clone()).map_err(|e| KernelError::Parse(e.to_string()))?;
        let mut out = ModuleVector::zero();
        for t in items {
            out.add_term(t.mono, &t.coeff);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct VectorTerm {
    mono: PBWMonomial,
    coeff: ParamPoly,
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    t: u32,
    kind: ModuleKind,
    #[serde(default)]
    params: BTreeMap<String, String>,
}

impl ModuleDescriptor {
    pub fn to_json(&self) -> serde_json::Value {
        let params = self
            .bindings()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        serde_json::to_value(DescriptorJson {
            t: self.twist(),
            kind: self.kind(),
            params,
        })
        .expect("serializable")
    }

    /// Reads `{"t": 2, "kind": "twisted_verma", "params": {...}}`; missing
    /// bindings default to the symbolic ones.
    pub fn from_json(value: &serde_json::Value) -> Result<ModuleDescriptor, ModuleError> {
        let d: DescriptorJson = serde_json::from_value(value.clone())
            .map_err(|e| ModuleError::InvalidDescriptor(e.to_string()))?;
        let mut desc = match d.kind {
            ModuleKind::Vacuum if d.t == 1 => ModuleDescriptor::vacuum_symbolic(),
            ModuleKind::Vacuum => {
                return Err(ModuleError::InvalidDescriptor(format!(
                    "vacuum module needs t = 1, got {}",
                    d.t
                )))
            }
            ModuleKind::TwistedVerma => ModuleDescriptor::twisted_symbolic(d.t)?,
        };
        for (key, text) in &d.params {
            let value: ParamPoly = text.parse()?;
            desc.set_binding(key, value)?;
        }
        Ok(desc)
    }

    /// Replaces one binding by name (`l1`, `l2`, `l3` or `k1`, `k3`, `h`).
    pub fn set_binding(&mut self, key: &str, value: ParamPoly) -> Result<(), ModuleError> {
        let slot = match (&mut self.params, key) {
            (ModuleParams::Vacuum { l1, .. }, "l1") => l1,
            (ModuleParams::Vacuum { l2, .. }, "l2") => l2,
            (ModuleParams::Vacuum { l3, .. }, "l3") => l3,
            (ModuleParams::TwistedVerma { k1, .. }, "k1") => k1,
            (ModuleParams::TwistedVerma { k3, .. }, "k3") => k3,
            (ModuleParams::TwistedVerma { h, .. }, "h") => h,
            _ => {
                return Err(ModuleError::InvalidDescriptor(format!(
                    "unknown parameter `{key}` for {:?}",
                    self.kind()
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// A module descriptor together with a straightening cache.
///
/// The cache maps `(generator, word)` to the normal form of their product
/// and is shared across calls; every entry is a pure function of its key.
pub struct Module {
    desc: ModuleDescriptor,
    cache: Mutex<HashMap<(Generator, PBWMonomial), ModuleVector>>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module").field("desc", &self.desc).finish()
    }
}

impl Module {
    pub fn new(desc: ModuleDescriptor) -> Self {
        Module {
            desc,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn descriptor(&self) -> &ModuleDescriptor {
        &self.desc
    }

    pub fn algebra(&self) -> Algebra {
        self.desc.alg
    }

    /// `g · v` in PBW normal form.
    pub fn act(&self, g: &Generator, v: &ModuleVector) -> Result<ModuleVector, ModuleError> {
        self.desc.alg.validate(g)?;
        v.validate(&self.desc)?;
        Ok(self.act_unchecked(g, v))
    }

    /// The linear extension of [`Module::act`].
    pub fn act_elem(
        &self,
        x: &AlgebraElement,
        v: &ModuleVector,
    ) -> Result<ModuleVector, ModuleError> {
        let mut out = ModuleVector::zero();
        for (g, c) in x.terms() {
            out.add_scaled(&self.act(g, v)?, c);
        }
        Ok(out)
    }

    /// Applies a word of generators, rightmost first.
    pub fn act_word(
        &self,
        word: &[Generator],
        v: &ModuleVector,
    ) -> Result<ModuleVector, ModuleError> {
        let mut out = v.clone();
        for g in word.iter().rev() {
            out = self.act(g, &out)?;
        }
        Ok(out)
    }

    fn act_unchecked(&self, g: &Generator, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.act_mono(g, m), c);
        }
        out
    }

    fn act_mono(&self, g: &Generator, m: &PBWMonomial) -> ModuleVector {
        if g.is_central() {
            return ModuleVector::term(m.clone(), self.desc.central_value(g.kind));
        }
        let key = (g.clone(), m.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = self.straighten(g, m);
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn straighten(&self, g: &Generator, m: &PBWMonomial) -> ModuleVector {
        let as_factor = self.desc.factor_of(g);
        let Some(first) = m.first() else {
            if let Some(f) = as_factor {
                return ModuleVector::mono(m.try_prepend(f).unwrap());
            }
            if g.kind == GenKind::L && g.index.is_zero() {
                return ModuleVector::term(m.clone(), self.desc.lowest_weight());
            }
            return ModuleVector::zero();
        };
        if let Some(f) = as_factor {
            if let Some(p) = m.try_prepend(f) {
                return ModuleVector::mono(p);
            }
        }
        // g f rest = f (g rest) + [g, f] rest
        let f_gen = self.desc.factor_generator(first);
        let rest = m.without_first();
        let inner = self.act_mono(g, &rest);
        let mut out = self.act_unchecked(&f_gen, &inner);
        let bracket = self
            .desc
            .alg
            .bracket(g, &f_gen)
            .expect("factors and validated generators are well-formed");
        for (h, c) in bracket.terms() {
            out.add_scaled(&self.act_mono(h, &rest), c);
        }
        out
    }

    /// All PBW words at exactly `level`, sorted by `(i_part, l_part)`.
    pub fn basis_at_level(&self, level: &Rational) -> Vec<PBWMonomial> {
        basis_at_level(&self.desc, level)
    }

    pub fn graded_dimension(&self, level: &Rational) -> usize {
        basis_at_level(&self.desc, level).len()
    }
}

/// Partitions of `n` into parts `>= min_part`, each nonincreasing; with
/// `parts = Some(s)` only those with exactly `s` parts.
pub(crate) fn partitions(n: u32, min_part: u32, parts: Option<usize>) -> Vec<Vec<u32>> {
    fn go(
        n: u32,
        max_part: u32,
        min_part: u32,
        parts: Option<usize>,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if n == 0 {
            if parts.is_none_or(|s| cur.len() == s) {
                out.push(cur.clone());
            }
            return;
        }
        if parts.is_some_and(|s| cur.len() >= s) {
            return;
        }
        for p in (min_part..=max_part.min(n)).rev() {
            cur.push(p);
            go(n - p, p, min_part, parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part.max(1), parts, &mut Vec::new(), &mut out);
    out
}

/// All PBW words of `desc` at exactly `level`; empty off the lattice.
pub fn basis_at_level(desc: &ModuleDescriptor, level: &Rational) -> Vec<PBWMonomial> {
    let mut out = Vec::new();
    if level.is_negative() {
        return out;
    }
    match desc.kind() {
        ModuleKind::Vacuum => {
            let Some(n) = level.to_i64() else { return out };
            let n = n as u32;
            for a in 0..=n {
                for i_part in partitions(a, 1, None) {
                    for l_part in partitions(n - a, 2, None) {
                        out.push(PBWMonomial::new(i_part.clone(), l_part));
                    }
                }
            }
        }
        ModuleKind::TwistedVerma => {
            let t = desc.twist() as i64;
            let Some(scaled) = level.scaled(t as u32) else {
                return out;
            };
            // level * t = t * (Σm + Σk) - s
            let max_s = scaled * t / (t - 1);
            for s in 0..=max_s {
                if (scaled + s) % t != 0 {
                    continue;
                }
                let total = ((scaled + s) / t) as u32;
                for k_sum in (s as u32)..=total {
                    let i_parts = if s == 0 {
                        if k_sum == 0 {
                            vec![vec![]]
                        } else {
                            vec![]
                        }
                    } else {
                        partitions(k_sum, 1, Some(s as usize))
                    };
                    for i_part in i_parts {
                        for l_part in partitions(total - k_sum, 1, None) {
                            out.push(PBWMonomial::new(i_part.clone(), l_part));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Levels `0, step, 2 step, …` up to and including `max_level`.
pub fn levels_up_to(desc: &ModuleDescriptor, max_level: &Rational) -> Vec<Rational> {
    let step = desc.level_step();
    let mut out = Vec::new();
    let mut x = Rational::zero();
    while &x <= max_level {
        out.push(x.clone());
        x = &x + &step;
    }
    out
}


#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;

    /// Coefficients of `∏ 1/(1 - q^e)` over `exps`, up to `q^n`.
    fn product_series(exps: &[usize], n: usize) -> Vec<usize> {
        let mut c = vec![0usize; n + 1];
        c[0] = 1;
        for &e in exps {
            for i in e..=n {
                c[i] += c[i - e];
            }
        }
        c
    }

    fn modules() -> Vec<Module> {
        vec![
            Module::new(ModuleDescriptor::vacuum_symbolic()),
            Module::new(ModuleDescriptor::twisted_symbolic(2).unwrap()),
            Module::new(ModuleDescriptor::twisted_symbolic(3).unwrap()),
        ]
    }

    fn all_basis(m: &Module, max: &Rational) -> Vec<PBWMonomial> {
        levels_up_to(m.descriptor(), max)
            .iter()
            .flat_map(|l| m.basis_at_level(l))
            .collect()
    }

    fn non_central(alg: Algebra, bound: i64) -> Vec<Generator> {
        alg.generators_up_to(bound)
            .into_iter()
            .filter(|g| !g.is_central())
            .collect()
    }

    #[test]
    fn dimensions_match_generating_function() {
        let n = 12;
        let vac = ModuleDescriptor::vacuum_symbolic();
        let exps: Vec<usize> = (2..=n).chain(1..=n).collect();
        let series = product_series(&exps, n);
        for (lvl, want) in series.iter().enumerate() {
            let got = basis_at_level(&vac, &Rational::from_int(lvl as i64)).len();
            assert_eq!(got, *want, "vacuum level {lvl}");
        }
        for t in [2usize, 3, 4] {
            let desc = ModuleDescriptor::twisted_symbolic(t as u32).unwrap();
            let n = 6 * t;
            // exponents in units of q^{1/t}
            let exps: Vec<usize> = (1..=6)
                .map(|m| m * t)
                .chain((1..=6).map(|k| k * t - 1))
                .collect();
            let series = product_series(&exps, n);
            for (i, want) in series.iter().enumerate() {
                let got = basis_at_level(&desc, &Rational::new(i as i64, t as i64)).len();
                assert_eq!(got, *want, "t={t} level {i}/{t}");
            }
        }
    }

    #[test]
    fn representation_property_small() {
        for m in modules() {
            let alg = m.algebra();
            let gens = non_central(alg, 2);
            let basis = all_basis(&m, &Rational::from_int(2));
            for x in &gens {
                for y in &gens {
                    let br = alg.bracket(x, y).unwrap();
                    for b in &basis {
                        let v = ModuleVector::mono(b.clone());
                        let xy = m.act(x, &m.act(y, &v).unwrap()).unwrap();
                        let yx = m.act(y, &m.act(x, &v).unwrap()).unwrap();
                        let rhs = m.act_elem(&br, &v).unwrap();
                        assert_eq!(xy.sub(&yx), rhs, "[{x}, {y}] on {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn action_respects_grading() {
        for m in modules() {
            let desc = m.descriptor().clone();
            for g in non_central(m.algebra(), 3) {
                for b in all_basis(&m, &Rational::from_int(2)) {
                    let target = &b.level(&desc) + &g.degree();
                    let out = m.act(&g, &ModuleVector::mono(b)).unwrap();
                    for (mono, _) in out.terms() {
                        assert_eq!(mono.level(&desc), target);
                    }
                }
            }
        }
    }

    #[test]
    fn raising_modes_annihilate_cyclic() {
        for m in modules() {
            let alg = m.algebra();
            let cyc = ModuleVector::cyclic();
            for k in 1..=6 {
                assert!(m.act(&Generator::l(k), &cyc).unwrap().is_zero());
            }
            let first_raising = if alg.is_twisted() {
                alg.i_offset()
            } else {
                Rational::zero()
            };
            for k in 0..6 {
                let g = Generator::i(&first_raising + &Rational::from_int(k));
                assert!(m.act(&g, &cyc).unwrap().is_zero(), "{g}");
            }
        }
    }

    #[test]
    fn sigma_grade_shifts_under_i_modes() {
        // σ_t is an automorphism only for ℓ₂ = 0, and additionally ℓ₃ = 0 when t ≥ 3
        for t in 2..=4u32 {
            let l3 = if t == 2 {
                ParamPoly::var(Param::L3)
            } else {
                ParamPoly::zero()
            };
            let m = Module::new(ModuleDescriptor::vacuum(
                Param::L1.into(),
                ParamPoly::zero(),
                l3,
            ));
            for b in all_basis(&m, &Rational::from_int(3)) {
                let s = b.sigma_grade(t);
                for k in -3..=3 {
                    let out = m
                        .act(&Generator::i_int(k), &ModuleVector::mono(b.clone()))
                        .unwrap();
                    for (mono, _) in out.terms() {
                        assert_eq!(mono.sigma_grade(t), (s + 1) % t);
                    }
                }
            }
        }
    }

    fn monomial() -> impl Strategy<Value = PBWMonomial> {
        (
            prop::collection::vec(1u32..4, 0..4),
            prop::collection::vec(2u32..5, 0..3),
        )
            .prop_map(|(mut i, mut l)| {
                i.sort_by(|a, b| b.cmp(a));
                l.sort_by(|a, b| b.cmp(a));
                PBWMonomial::new(i, l)
            })
    }

    proptest! {
        #[test]
        fn sigma_grade_additive(a in monomial(), b in monomial(), t in 2u32..5) {
            let mut i = [a.i_part.clone(), b.i_part.clone()].concat();
            i.sort_by(|x, y| y.cmp(x));
            let joined = PBWMonomial::new(i, vec![]);
            prop_assert_eq!(joined.sigma_grade(t), (a.sigma_grade(t) + b.sigma_grade(t)) % t);
        }

        #[test]
        fn vector_text_round_trip(a in monomial(), b in monomial(), c in -5i64..5) {
            let desc = ModuleDescriptor::vacuum_symbolic();
            let mut v = ModuleVector::mono(a);
            v.add_term(b, &(&ParamPoly::int(c) * &ParamPoly::var(Param::L2)));
            let back = ModuleVector::parse(&v.to_text(&desc), &desc).unwrap();
            prop_assert_eq!(&back, &v);
            prop_assert_eq!(ModuleVector::from_json(&v.to_json()).unwrap(), v);
        }
    }
}
