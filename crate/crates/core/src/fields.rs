//! Vertex-operator modes of the generating fields, mode-level commutator
//! checks and the formal delta identity.
//!
//! Two index conventions appear. [`field_mode`] follows the Lie-algebra
//! labels: mode `n` of `Omega` is `L_n` and mode `n` of `Igen` is `I_n`.
//! Vertex-algebra indexing writes `u_s` for the coefficient of
//! `z^{-s-1}` in `Y(u, z)`, so `ω_s = L_{s-1}` and `I_s = I_s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{GenKind, Generator};
use crate::kernel::{ParamPoly, Rational};
use crate::modules::{
    levels_up_to, Module, ModuleDescriptor, ModuleError, ModuleKind, ModuleVector, PBWMonomial,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldsError {
    #[error("mode {index} of {field} is off the lattice for t = {twist}")]
    Lattice {
        field: FieldId,
        index: Rational,
        twist: u32,
    },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("window error: {0}")]
    Window(String),
    #[error("state {0} is not a generator descendant")]
    UnsupportedState(String),
    #[error("operation requires the vacuum module")]
    NotVacuum,
}

/// The two generating fields `Y(L_{-2}1, z)` and `Y(I_{-1}1, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FieldId {
    Omega,
    Igen,
}

impl FieldId {
    pub const ALL: [FieldId; 2] = [FieldId::Omega, FieldId::Igen];

    /// Conformal weight of the generating state.
    pub fn weight(self) -> i64 {
        match self {
            FieldId::Omega => 2,
            FieldId::Igen => 1,
        }
    }

    /// The generating state in the vacuum module.
    pub fn state(self) -> PBWMonomial {
        match self {
            FieldId::Omega => PBWMonomial::new(vec![], vec![2]),
            FieldId::Igen => PBWMonomial::new(vec![1], vec![]),
        }
    }

    /// Shift from vertex-algebra to Lie-algebra labels.
    fn label_shift(self) -> i64 {
        match self {
            FieldId::Omega => -1,
            FieldId::Igen => 0,
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldId::Omega => "omega",
            FieldId::Igen => "I",
        })
    }
}

impl std::str::FromStr for FieldId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "omega" | "w" | "l" => Ok(FieldId::Omega),
            "i" | "igen" => Ok(FieldId::Igen),
            _ => Err(format!("unknown field `{s}` (expected omega or I)")),
        }
    }
}

/// The algebra generator behind mode `n` of `f` (Lie-algebra labels).
pub fn mode_generator(
    desc: &ModuleDescriptor,
    f: FieldId,
    n: &Rational,
) -> Result<Generator, FieldsError> {
    let alg = desc.algebra();
    let lattice = || FieldsError::Lattice {
        field: f,
        index: n.clone(),
        twist: alg.twist(),
    };
    match f {
        FieldId::Omega => n.to_i64().map(Generator::l).ok_or_else(lattice),
        FieldId::Igen => alg
            .is_i_index(n)
            .then(|| Generator::i(n.clone()))
            .ok_or_else(lattice),
    }
}

/// Mode `n` of `f` applied to `v`, with Lie-algebra labels.
pub fn field_mode(
    module: &Module,
    f: FieldId,
    n: &Rational,
    v: &ModuleVector,
) -> Result<ModuleVector, FieldsError> {
    let g = mode_generator(module.descriptor(), f, n)?;
    Ok(module.act(&g, v)?)
}

/// Mode `s` of `f` applied to `v`, with vertex-algebra labels.
pub fn field_va_mode(
    module: &Module,
    f: FieldId,
    s: &Rational,
    v: &ModuleVector,
) -> Result<ModuleVector, FieldsError> {
    let n = s + &Rational::from_int(f.label_shift());
    field_mode(module, f, &n, v)
}

fn require_vacuum(module: &Module) -> Result<(), FieldsError> {
    match module.descriptor().kind() {
        ModuleKind::Vacuum => Ok(()),
        ModuleKind::TwistedVerma => Err(FieldsError::NotVacuum),
    }
}

/// `u_j w` in the vacuum module, vertex-algebra labels.
pub fn generator_product(
    vacuum: &Module,
    u: FieldId,
    j: i64,
    w: FieldId,
) -> Result<ModuleVector, FieldsError> {
    require_vacuum(vacuum)?;
    field_va_mode(
        vacuum,
        u,
        &Rational::from_int(j),
        &ModuleVector::mono(w.state()),
    )
}

/// Mode `s` (vertex-algebra labels) of a vacuum-module state acting on `w`
/// in `target`.
///
/// Supported states are combinations of `1`, `L_{-m}1 = D^{m-2}ω/(m-2)!`
/// and `I_{-k}1 = D^{k-1}I/(k-1)!`, using
/// `(D^i v / i!)_s = (-1)^i binom(s, i) v_{s-i}`.
pub fn state_mode(
    target: &Module,
    state: &ModuleVector,
    s: &Rational,
    w: &ModuleVector,
) -> Result<ModuleVector, FieldsError> {
    let mut out = ModuleVector::zero();
    for (mono, c) in state.terms() {
        let (field, i) = match (mono.i_part.as_slice(), mono.l_part.as_slice()) {
            ([], []) => {
                if *s == Rational::from_int(-1) {
                    out.add_scaled(w, c);
                }
                continue;
            }
            ([], [m]) => (FieldId::Omega, m - 2),
            ([k], []) => (FieldId::Igen, k - 1),
            _ => {
                return Err(FieldsError::UnsupportedState(
                    mono.to_text(&ModuleDescriptor::vacuum_symbolic()),
                ))
            }
        };
        let mut scale = s.binomial(i);
        if i % 2 == 1 {
            scale = -scale;
        }
        let shifted = s - &Rational::from_int(i as i64);
        let term = field_va_mode(target, field, &shifted, w)?;
        out.add_scaled(&term, &(c * &ParamPoly::constant(scale)));
    }
    Ok(out)
}

/// A state whose vertex operator appears in an iterate: the vacuum or one
/// of the generating fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateField {
    Vacuum,
    Field(FieldId),
}

impl StateField {
    fn weight(self) -> i64 {
        match self {
            StateField::Vacuum => 0,
            StateField::Field(f) => f.weight(),
        }
    }

    fn mode(self, module: &Module, s: i64, w: &ModuleVector) -> Result<ModuleVector, FieldsError> {
        match self {
            StateField::Vacuum if s == -1 => Ok(w.clone()),
            StateField::Vacuum => Ok(ModuleVector::zero()),
            StateField::Field(f) => field_va_mode(module, f, &Rational::from_int(s), w),
        }
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(u_j v)_n w` in the vacuum module by the iterate formula
/// `Σ_{i≥0} (-1)^i binom(j, i) [u_{j-i} v_{n+i} w - (-1)^j v_{j+n-i} u_i w]`.
///
/// The sum stops once every term annihilates `w` for grading reasons.
pub fn iterate_mode(
    vacuum: &Module,
    u: FieldId,
    j: i64,
    v: StateField,
    n: i64,
    w: &ModuleVector,
) -> Result<ModuleVector, FieldsError> {
    require_vacuum(vacuum)?;
    let desc = vacuum.descriptor();
    let Some(level) = w.max_level(desc) else {
        return Ok(ModuleVector::zero());
    };
    let level = level.to_i64().expect("vacuum levels are integral");
    let i_max = (level + v.weight() - 1 - n).max(level + u.weight() - 1);
    let j_rat = Rational::from_int(j);
    let mut out = ModuleVector::zero();
    for i in 0..=i_max.max(-1) {
        let coeff = &j_rat.binomial(i as u32) * &Rational::from_int(sign(i));
        if coeff.is_zero() {
            continue;
        }
        let first = v.mode(vacuum, n + i, w)?;
        let first = field_va_mode(vacuum, u, &Rational::from_int(j - i), &first)?;
        let second = field_va_mode(vacuum, u, &Rational::from_int(i), w)?;
        let second = v.mode(vacuum, j + n - i, &second)?;
        let mut term = first;
        term.add_scaled(&second, &ParamPoly::int(-sign(j)));
        out.add_scaled(&term, &ParamPoly::constant(coeff));
    }
    Ok(out)
}

/// Outcome of a mode-level commutator comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReport {
    pub a: FieldId,
    pub b: FieldId,
    pub m: Rational,
    pub n: Rational,
    /// `a_m b_n v - b_n a_m v`.
    pub lhs: ModuleVector,
    /// The Lie bracket of the corresponding generators acting on `v`.
    pub rhs: ModuleVector,
    /// `Σ_{j≥0} binom(p, j) (a_j b)_{p+q-j} v` from the commutator formula.
    pub rhs_formula: ModuleVector,
    pub equal: bool,
}

impl CommutatorReport {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "m": self.m.to_string(),
            "n": self.n.to_string(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "rhs_formula": self.rhs_formula.to_json(),
            "equal": self.equal,
        })
    }
}

/// The vacuum module whose products `a_j b` drive the commutator formula
/// on `desc`: `desc` itself, or `(k1, 0, k3)` for a twisted module.
pub fn companion_vacuum(desc: &ModuleDescriptor) -> ModuleDescriptor {
    match desc.kind() {
        ModuleKind::Vacuum => desc.clone(),
        ModuleKind::TwistedVerma => ModuleDescriptor::vacuum(
            desc.central_value(GenKind::K1),
            ParamPoly::zero(),
            desc.central_value(GenKind::K3),
        ),
    }
}

/// Compares `[a_m, b_n] v` (Lie-algebra labels) with the bracket of the
/// corresponding generators and with the (twisted) commutator formula.
pub fn verify_commutator(
    module: &Module,
    a: FieldId,
    b: FieldId,
    m: &Rational,
    n: &Rational,
    v: &ModuleVector,
) -> Result<CommutatorReport, FieldsError> {
    let vacuum = Module::new(companion_vacuum(module.descriptor()));
    verify_commutator_with(module, &vacuum, a, b, m, n, v)
}

/// [`verify_commutator`] with a caller-supplied companion vacuum module.
pub fn verify_commutator_with(
    module: &Module,
    vacuum: &Module,
    a: FieldId,
    b: FieldId,
    m: &Rational,
    n: &Rational,
    v: &ModuleVector,
) -> Result<CommutatorReport, FieldsError> {
    let desc = module.descriptor();
    let ga = mode_generator(desc, a, m)?;
    let gb = mode_generator(desc, b, n)?;
    let ab = module.act(&ga, &module.act(&gb, v)?)?;
    let ba = module.act(&gb, &module.act(&ga, v)?)?;
    let lhs = ab.sub(&ba);
    let bracket = module
        .algebra()
        .bracket(&ga, &gb)
        .map_err(ModuleError::from)?;
    let rhs = module.act_elem(&bracket, v)?;

    let p = m - &Rational::from_int(a.label_shift());
    let q = n - &Rational::from_int(b.label_shift());
    let mut rhs_formula = ModuleVector::zero();
    for j in 0..(a.weight() + b.weight()) {
        let product = generator_product(vacuum, a, j, b)?;
        if product.is_zero() {
            continue;
        }
        let s = &(&p + &q) - &Rational::from_int(j);
        let term = state_mode(module, &product, &s, v)?;
        rhs_formula.add_scaled(&term, &ParamPoly::constant(p.binomial(j as u32)));
    }
    let equal = lhs == rhs && lhs == rhs_formula;
    Ok(CommutatorReport {
        a,
        b,
        m: m.clone(),
        n: n.clone(),
        lhs,
        rhs,
        rhs_formula,
        equal,
    })
}

/// Summary of a commutator sweep.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: Vec<CommutatorReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Lattice modes of `f` with `|index| <= bound`.
pub fn modes_up_to(desc: &ModuleDescriptor, f: FieldId, bound: i64) -> Vec<Rational> {
    match f {
        FieldId::Omega => (-bound..=bound).map(Rational::from_int).collect(),
        FieldId::Igen => desc
            .algebra()
            .i_modes_up_to(&Rational::from_int(bound))
            .collect(),
    }
}

/// Runs [`verify_commutator`] over all field pairs, all modes with
/// `|index| <= max_mode` and all basis vectors up to `max_level`.
pub fn commutator_sweep(
    module: &Module,
    max_mode: i64,
    max_level: &Rational,
) -> Result<SweepReport, FieldsError> {
    let desc = module.descriptor();
    let vacuum = Module::new(companion_vacuum(desc));
    let basis: Vec<PBWMonomial> = levels_up_to(desc, max_level)
        .iter()
        .flat_map(|l| module.basis_at_level(l))
        .collect();
    let mut report = SweepReport::default();
    for a in FieldId::ALL {
        for b in FieldId::ALL {
            for m in modes_up_to(desc, a, max_mode) {
                for n in modes_up_to(desc, b, max_mode) {
                    for mono in &basis {
                        let v = ModuleVector::mono(mono.clone());
                        let r = verify_commutator_with(module, &vacuum, a, b, &m, &n, &v)?;
                        report.checked += 1;
                        if !r.equal {
                            report.failures.push(r);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of comparing two routes to the modes of `Y(Df, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub field: FieldId,
    pub checked: usize,
    /// Modes (vertex-algebra labels) where the routes differ.
    pub failures: Vec<i64>,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Y(Df, x) = d/dx Y(f, x)` on `v`: the iterate formula for
/// `(f_{-2} 1)_n` against the rule `(Df)_n = -n f_{n-1}`, for each `n`
/// in `modes`.
pub fn derivative_property_check(
    vacuum: &Module,
    f: FieldId,
    v: &ModuleVector,
    modes: std::ops::RangeInclusive<i64>,
) -> Result<DerivativeReport, FieldsError> {
    require_vacuum(vacuum)?;
    let mut report = DerivativeReport {
        field: f,
        checked: 0,
        failures: Vec::new(),
    };
    for n in modes {
        let via_iterate = iterate_mode(vacuum, f, -2, StateField::Vacuum, n, v)?;
        let via_rule =
            field_va_mode(vacuum, f, &Rational::from_int(n - 1), v)?.scale(&ParamPoly::int(-n));
        report.checked += 1;
        if via_iterate != via_rule {
            report.failures.push(n);
        }
    }
    Ok(report)
}

/// A rectangle of exponents `[x1_min, x1_max] × [x2_min, x2_max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub x1_min: Rational,
    pub x1_max: Rational,
    pub x2_min: Rational,
    pub x2_max: Rational,
}

impl Window {
    pub fn square(lo: i64, hi: i64) -> Self {
        Window {
            x1_min: Rational::from_int(lo),
            x1_max: Rational::from_int(hi),
            x2_min: Rational::from_int(lo),
            x2_max: Rational::from_int(hi),
        }
    }
}

/// Exponent bounds in units of `1/t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Bounds {
    x1: (i64, i64),
    x2: (i64, i64),
}

impl Bounds {
    fn contains(&self, e: (i64, i64)) -> bool {
        (self.x1.0..=self.x1.1).contains(&e.0) && (self.x2.0..=self.x2.1).contains(&e.1)
    }

    fn is_empty(&self) -> bool {
        self.x1.0 > self.x1.1 || self.x2.0 > self.x2.1
    }
}

/// A truncated formal series in `x1^{1/t}`, `x2^{1/t}`.
///
/// Coefficients are stored for exponents inside `window`; `exact` is the
/// sub-window on which they agree with the untruncated series.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent2 {
    twist: u32,
    window: Bounds,
    exact: Bounds,
    coeffs: BTreeMap<(i64, i64), Rational>,
    truncated: bool,
}

impl Laurent2 {
    fn new(twist: u32, window: &Window) -> Result<Self, FieldsError> {
        let t = twist;
        let scale = |r: &Rational, what: &str| {
            r.scaled(t).ok_or_else(|| {
                FieldsError::Window(format!("{what} = {r} is not on the 1/{t} lattice"))
            })
        };
        let bounds = Bounds {
            x1: (
                scale(&window.x1_min, "x1_min")?,
                scale(&window.x1_max, "x1_max")?,
            ),
            x2: (
                scale(&window.x2_min, "x2_min")?,
                scale(&window.x2_max, "x2_max")?,
            ),
        };
        if bounds.is_empty() {
            return Err(FieldsError::Window("empty window".into()));
        }
        Ok(Laurent2 {
            twist,
            window: bounds,
            exact: bounds,
            coeffs: BTreeMap::new(),
            truncated: false,
        })
    }

    /// `x1^{-1} (x2/x1)^{k/t} δ(x2/x1) = Σ_{n∈ℤ} x2^{n+k/t} x1^{-n-k/t-1}`,
    /// with `k = 0` the untwisted delta function.
    pub fn delta(twist: u32, k: u32, window: &Window) -> Result<Self, FieldsError> {
        let mut out = Laurent2::new(twist, window)?;
        let t = twist as i64;
        let offset = k as i64 % t;
        let (lo, hi) = out.window.x2;
        let start = lo + (offset - lo).rem_euclid(t);
        let mut e2 = start;
        while e2 <= hi {
            let e1 = -e2 - t;
            if out.window.contains((e1, e2)) {
                out.coeffs.insert((e1, e2), Rational::one());
            } else {
                out.truncated = true;
            }
            e2 += t;
        }
        out.truncated = true;
        Ok(out)
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether any operation discarded terms outside the window.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn unscale(&self, e: i64) -> Rational {
        Rational::new(e, self.twist as i64)
    }

    /// The coefficient of `x1^{e1} x2^{e2}`.
    pub fn coeff(&self, e1: &Rational, e2: &Rational) -> Rational {
        match (e1.scaled(self.twist), e2.scaled(self.twist)) {
            (Some(a), Some(b)) => self.coeffs.get(&(a, b)).cloned().unwrap_or_default(),
            _ => Rational::zero(),
        }
    }

    /// The exact interior as a window.
    pub fn interior(&self) -> Option<Window> {
        (!self.exact.is_empty()).then(|| Window {
            x1_min: self.unscale(self.exact.x1.0),
            x1_max: self.unscale(self.exact.x1.1),
            x2_min: self.unscale(self.exact.x2.0),
            x2_max: self.unscale(self.exact.x2.1),
        })
    }

    /// `∂/∂x2`; the exact interior loses its top `x2` exponent.
    pub fn d_x2(&self) -> Laurent2 {
        let t = self.twist as i64;
        let mut out = Laurent2 {
            coeffs: BTreeMap::new(),
            exact: Bounds {
                x1: self.exact.x1,
                x2: (self.exact.x2.0, self.exact.x2.1 - t),
            },
            ..self.clone()
        };
        for (&(e1, e2), c) in &self.coeffs {
            let factor = self.unscale(e2);
            if factor.is_zero() {
                continue;
            }
            let target = (e1, e2 - t);
            if out.window.contains(target) {
                out.coeffs.insert(target, c * &factor);
            } else {
                out.truncated = true;
            }
        }
        out
    }

    /// Multiplication by `(x1 - x2)^m = Σ_i binom(m, i) (-1)^i x1^{m-i} x2^i`;
    /// the exact interior loses its bottom `m` exponents in each variable.
    pub fn mul_binomial(&self, m: u32) -> Laurent2 {
        let t = self.twist as i64;
        let mi = m as i64;
        let mut out = Laurent2 {
            coeffs: BTreeMap::new(),
            exact: Bounds {
                x1: (self.exact.x1.0 + mi * t, self.exact.x1.1),
                x2: (self.exact.x2.0 + mi * t, self.exact.x2.1),
            },
            ..self.clone()
        };
        for (&(e1, e2), c) in &self.coeffs {
            for i in 0..=mi {
                let target = (e1 + (mi - i) * t, e2 + i * t);
                if !out.window.contains(target) {
                    out.truncated = true;
                    continue;
                }
                let mut b = Rational::from_int(mi).binomial(i as u32);
                if i % 2 == 1 {
                    b = -b;
                }
                let slot = out.coeffs.entry(target).or_default();
                *slot += &(c * &b);
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    /// Terms inside the exact interior, as `(e1, e2, coeff)`.
    pub fn interior_terms(&self) -> Vec<(Rational, Rational, Rational)> {
        self.coeffs
            .iter()
            .filter(|(e, _)| self.exact.contains(**e))
            .map(|(&(a, b), c)| (self.unscale(a), self.unscale(b), c.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .interior_terms()
            .into_iter()
            .map(|(a, b, c)| json!([a.to_string(), b.to_string(), c.to_string()]))
            .collect();
        json!({
            "t": self.twist,
            "interior": self.interior().map(|w| serde_json::to_value(w).expect("serializable")),
            "terms": terms,
            "truncated": self.truncated,
        })
    }
}

/// Result of checking `(x1 - x2)^m ∂_{x2}^n x1^{-1} δ(x2/x1) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaReport {
    pub m: u32,
    pub n: u32,
    pub residual: Laurent2,
    pub holds_in_window: bool,
}

impl DeltaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "residual": self.residual.to_json(),
            "holds_in_window": self.holds_in_window,
        })
    }
}

/// Evaluates `(x1 - x2)^m ∂_{x2}^n x1^{-1} δ(x2/x1)` on `window` and
/// reports whether it vanishes on the exact interior.
pub fn delta_identity_check(m: u32, n: u32, window: &Window) -> Result<DeltaReport, FieldsError> {
    twisted_delta_identity_check(m, n, window, 1, 0)
}

/// [`delta_identity_check`] for `x1^{-1} (x2/x1)^{k/t} δ(x2/x1)`.
pub fn twisted_delta_identity_check(
    m: u32,
    n: u32,
    window: &Window,
    twist: u32,
    k: u32,
) -> Result<DeltaReport, FieldsError> {
    let mut series = Laurent2::delta(twist, k, window)?;
    for _ in 0..n {
        series = series.d_x2();
    }
    let residual = series.mul_binomial(m);
    if residual.interior().is_none() {
        return Err(FieldsError::Window(format!(
            "window too small for m = {m}, n = {n}: exact interior is empty"
        )));
    }
    let holds_in_window = residual.interior_terms().is_empty();
    Ok(DeltaReport {
        m,
        n,
        residual,
        holds_in_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Param;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn vac() -> Module {
        Module::new(ModuleDescriptor::vacuum_symbolic())
    }

    fn vac_l2_zero() -> Module {
        Module::new(ModuleDescriptor::vacuum(
            Param::L1.into(),
            ParamPoly::zero(),
            Param::L3.into(),
        ))
    }

    fn tw(t: u32) -> Module {
        Module::new(ModuleDescriptor::twisted_symbolic(t).unwrap())
    }

    fn vec_of(m: &Module, s: &str) -> ModuleVector {
        ModuleVector::parse(s, m.descriptor()).unwrap()
    }

    #[test]
    fn field_mode_examples() {
        let m = tw(2);
        for lvl in levels_up_to(m.descriptor(), &r("2")) {
            for mono in m.basis_at_level(&lvl) {
                let v = ModuleVector::mono(mono.clone());
                let got = field_mode(&m, FieldId::Omega, &Rational::zero(), &v).unwrap();
                assert_eq!(
                    got,
                    v.scale(&(&ParamPoly::var(Param::H) + &ParamPoly::constant(lvl.clone())))
                );
            }
        }
        let v = vac();
        let i = vec_of(&v, "|I[-1]>");
        assert_eq!(
            field_mode(&v, FieldId::Igen, &r("1"), &i).unwrap(),
            vec_of(&v, "l3*|0>")
        );
        let x = vec_of(&m, "|I[-1/2]>");
        assert_eq!(
            field_mode(&m, FieldId::Igen, &r("1/2"), &x).unwrap(),
            vec_of(&m, "1/2*l3*|0>")
        );
    }

    #[test]
    fn field_mode_lattice_errors() {
        let m = tw(2);
        let cyc = ModuleVector::cyclic();
        assert!(matches!(
            field_mode(&m, FieldId::Igen, &r("1"), &cyc),
            Err(FieldsError::Lattice { .. })
        ));
        assert!(field_mode(&m, FieldId::Omega, &r("1/2"), &cyc).is_err());
        assert!(field_mode(&vac(), FieldId::Igen, &r("1/2"), &cyc).is_err());
    }

    #[test]
    fn generator_product_examples() {
        let v = vac();
        let ww = |j| generator_product(&v, FieldId::Omega, j, FieldId::Omega).unwrap();
        assert_eq!(ww(3), vec_of(&v, "1/2*l1*|0>"));
        assert_eq!(ww(0), vec_of(&v, "|L[-3]>"));
        let ii = |j| generator_product(&v, FieldId::Igen, j, FieldId::Igen).unwrap();
        assert_eq!(ii(1), vec_of(&v, "l3*|0>"));
        assert!(ii(0).is_zero());
        assert!(generator_product(&tw(2), FieldId::Igen, 0, FieldId::Igen).is_err());
    }

    /// Closed forms for `j >= 0` at `ℓ₂ = 0`, written out independently.
    fn closed_form(u: FieldId, j: i64, w: FieldId) -> ModuleVector {
        let lowering = |f: FieldId, k: i64| -> ModuleVector {
            match (f, k) {
                (_, k) if k >= 0 => ModuleVector::zero(),
                (FieldId::Omega, -1) => ModuleVector::zero(),
                (FieldId::Omega, k) => {
                    ModuleVector::mono(PBWMonomial::new(vec![], vec![(-k) as u32]))
                }
                (FieldId::Igen, k) => {
                    ModuleVector::mono(PBWMonomial::new(vec![(-k) as u32], vec![]))
                }
            }
        };
        match (u, w) {
            (FieldId::Omega, FieldId::Omega) => {
                let mut out = lowering(FieldId::Omega, j - 3).scale(&ParamPoly::int(j + 1));
                if j == 3 {
                    out.add_term(
                        PBWMonomial::cyclic(),
                        &ParamPoly::var(Param::L1).scale(&r("1/2")),
                    );
                }
                out
            }
            (FieldId::Omega, FieldId::Igen) => lowering(FieldId::Igen, j - 2),
            (FieldId::Igen, FieldId::Igen) if j == 1 => {
                ModuleVector::term(PBWMonomial::cyclic(), ParamPoly::var(Param::L3))
            }
            (FieldId::Igen, FieldId::Igen) => ModuleVector::zero(),
            (FieldId::Igen, FieldId::Omega) => unreachable!(),
        }
    }

    #[test]
    fn generator_products_match_closed_forms_for_nonnegative_j() {
        let v = vac_l2_zero();
        for (u, w) in [
            (FieldId::Omega, FieldId::Omega),
            (FieldId::Omega, FieldId::Igen),
            (FieldId::Igen, FieldId::Igen),
        ] {
            for j in 0..=4 {
                assert_eq!(
                    generator_product(&v, u, j, w).unwrap(),
                    closed_form(u, j, w),
                    "{u}_{j} {w}"
                );
            }
        }
    }

    #[test]
    fn generator_products_at_negative_j_are_normal_ordered_products() {
        let v = vac_l2_zero();
        // u_{-1} w is the state u_{-1} w = (lowering mode of u) w
        assert_eq!(
            generator_product(&v, FieldId::Omega, -1, FieldId::Omega).unwrap(),
            vec_of(&v, "|L[-2] L[-2]>")
        );
        assert_eq!(
            generator_product(&v, FieldId::Igen, -1, FieldId::Igen).unwrap(),
            vec_of(&v, "|I[-1] I[-1]>")
        );
        assert_eq!(
            generator_product(&v, FieldId::Omega, -1, FieldId::Igen).unwrap(),
            vec_of(&v, "|I[-1] L[-2]> + |I[-3]>")
        );
    }

    #[test]
    fn omega_i_product_differs_by_multiple_of_l2() {
        let sym = vac();
        let zero = vac_l2_zero();
        for j in -4..=4 {
            let full = generator_product(&sym, FieldId::Omega, j, FieldId::Igen).unwrap();
            let at_zero = generator_product(&zero, FieldId::Omega, j, FieldId::Igen).unwrap();
            let diff = full.sub(&at_zero);
            for (_, c) in diff.terms() {
                let mut a = BTreeMap::new();
                a.insert(Param::L2, Rational::zero());
                assert!(c.partial_eval(&a).is_zero(), "j = {j}: {c}");
            }
        }
        assert_eq!(
            generator_product(&sym, FieldId::Omega, 2, FieldId::Igen).unwrap(),
            vec_of(&sym, "-2*l2*|0>")
        );
    }

    #[test]
    fn verify_commutator_examples() {
        let m = tw(2);
        let cyc = ModuleVector::cyclic();
        let rep = verify_commutator(
            &m,
            FieldId::Igen,
            FieldId::Igen,
            &r("1/2"),
            &r("-1/2"),
            &cyc,
        )
        .unwrap();
        assert!(rep.equal);
        assert_eq!(rep.lhs, vec_of(&m, "1/2*l3*|0>"));

        let m3 = Module::new(
            ModuleDescriptor::twisted_verma(
                3,
                Param::L1.into(),
                ParamPoly::zero(),
                Param::H.into(),
            )
            .unwrap(),
        );
        for a in m3.algebra().i_modes_up_to(&r("3")) {
            for b in m3.algebra().i_modes_up_to(&r("3")) {
                let rep =
                    verify_commutator(&m3, FieldId::Igen, FieldId::Igen, &a, &b, &cyc).unwrap();
                assert!(rep.equal && rep.lhs.is_zero());
            }
        }

        let v = vac();
        let rep =
            verify_commutator(&v, FieldId::Omega, FieldId::Omega, &r("2"), &r("-2"), &cyc).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.rhs, vec_of(&v, "1/2*l1*|0>"));
    }

    #[test]
    fn commutator_sweeps_small() {
        for (m, bound) in [
            (vac(), 2),
            (tw(2), 2),
            (
                Module::new(
                    ModuleDescriptor::twisted_verma(
                        3,
                        Param::L1.into(),
                        ParamPoly::zero(),
                        Param::H.into(),
                    )
                    .unwrap(),
                ),
                2,
            ),
        ] {
            let rep = commutator_sweep(&m, bound, &Rational::from_int(2)).unwrap();
            assert!(rep.checked > 0);
            assert!(rep.passed(), "{:?}", rep.failures.first());
        }
    }

    #[test]
    fn derivative_property_examples() {
        let v = vac();
        let basis: Vec<PBWMonomial> = (0..=3)
            .flat_map(|l| v.basis_at_level(&Rational::from_int(l)))
            .collect();
        for f in FieldId::ALL {
            for b in &basis {
                let rep = derivative_property_check(&v, f, &ModuleVector::mono(b.clone()), -4..=4)
                    .unwrap();
                assert!(rep.passed(), "{f} on {b:?}: {:?}", rep.failures);
            }
        }
        // (I_{-2}1)_0 on I_{-1}1 vanishes; (I_{-2}1)_1 gives -I_0 I_{-1}1 = 0; mode 2 gives -2 ℓ₃
        let i = vec_of(&v, "|I[-1]>");
        let d = |n| iterate_mode(&v, FieldId::Igen, -2, StateField::Vacuum, n, &i).unwrap();
        assert!(d(0).is_zero());
        assert_eq!(d(2), vec_of(&v, "-2*l3*|0>"));
        assert_eq!(d(-1), vec_of(&v, "|I[-2] I[-1]>"));
    }

    #[test]
    fn iterate_formula_reproduces_generator_product_states() {
        // (u_j v)_n w via the iterate formula equals the mode of the computed state
        let v = vac();
        let basis: Vec<PBWMonomial> = (0..=2)
            .flat_map(|l| v.basis_at_level(&Rational::from_int(l)))
            .collect();
        for u in FieldId::ALL {
            for j in [0, 1, 2] {
                let state = generator_product(&v, u, j, FieldId::Igen).unwrap();
                for b in &basis {
                    let w = ModuleVector::mono(b.clone());
                    for n in -2..=2 {
                        let a = iterate_mode(&v, u, j, StateField::Field(FieldId::Igen), n, &w)
                            .unwrap();
                        let b2 = state_mode(&v, &state, &Rational::from_int(n), &w).unwrap();
                        assert_eq!(a, b2, "({u}_{j} I)_{n}");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_identity_examples() {
        let w = Window::square(-6, 6);
        assert!(delta_identity_check(1, 0, &w).unwrap().holds_in_window);
        assert!(delta_identity_check(3, 2, &w).unwrap().holds_in_window);
        assert!(!delta_identity_check(1, 1, &w).unwrap().holds_in_window);
        assert!(!delta_identity_check(0, 0, &w).unwrap().holds_in_window);
        for m in 1..=4 {
            for n in 0..m {
                assert!(
                    delta_identity_check(m, n, &w).unwrap().holds_in_window,
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn twisted_delta_identity() {
        let w = Window::square(-6, 6);
        for t in [2, 3] {
            for k in 0..t {
                for m in 1..=3 {
                    for n in 0..m {
                        let rep = twisted_delta_identity_check(m, n, &w, t, k).unwrap();
                        assert!(rep.holds_in_window, "t={t} k={k} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_window_errors() {
        assert!(delta_identity_check(1, 0, &Window::square(3, 2)).is_err());
        assert!(delta_identity_check(4, 0, &Window::square(0, 2)).is_err());
        let bad = Window {
            x1_min: r("1/2"),
            ..Window::square(-2, 2)
        };
        assert!(delta_identity_check(1, 0, &bad).is_err());
    }

    #[test]
    fn delta_series_coefficients() {
        let d = Laurent2::delta(1, 0, &Window::square(-3, 3)).unwrap();
        assert_eq!(d.coeff(&r("-1"), &r("0")), Rational::one());
        assert_eq!(d.coeff(&r("-3"), &r("2")), Rational::one());
        assert_eq!(d.coeff(&r("0"), &r("0")), Rational::zero());
        let dd = d.d_x2();
        assert_eq!(dd.coeff(&r("-3"), &r("1")), r("2"));
        // (x1 - x2) ∂δ = δ on the interior
        let prod = dd.mul_binomial(1);
        for (e1, e2, c) in prod.interior_terms() {
            assert_eq!(&e1 + &e2, r("-1"));
            assert_eq!(c, r("1"));
        }
    }
}
