//! Structural analysis: automorphism trichotomy, contravariant pairings,
//! singular vectors, irreducible characters and the Heisenberg/coset split
//! of the conformal vector.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, GenKind, Generator};
use crate::fields::{field_va_mode, FieldId, FieldsError};
use crate::kernel::{Param, ParamPoly, Rational};
use crate::modules::{
    levels_up_to, partitions, Module, ModuleDescriptor, ModuleError, ModuleKind, ModuleVector,
    PBWMonomial,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Fields(#[from] FieldsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operation requires concrete rational parameters, found `{0}`")]
    RequiresConcrete(String),
    #[error("operation requires a twisted Verma module")]
    NotTwisted,
}

/// The three automorphism regimes of the vacuum vertex algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AutCase {
    Trivial,
    Z2,
    Cx,
}

impl fmt::Display for AutCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutCase::Trivial => "Trivial",
            AutCase::Z2 => "Z2",
            AutCase::Cx => "Cx",
        })
    }
}

/// One relation used to constrain the scale `a` in `φ(I) = a I`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutConstraint {
    pub relation: String,
    /// The constraint `p = 0` as a polynomial in `a` and the parameters.
    pub symbolic: ParamPoly,
    /// The same constraint at the requested parameter values.
    pub specialized: ParamPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutReport {
    pub case: AutCase,
    pub constraints: Vec<AutConstraint>,
    /// Admissible values of `a`, or `None` when every nonzero `a` works.
    pub solutions: Option<usize>,
}

impl AutReport {
    pub fn to_json(&self) -> Value {
        let constraints: Vec<Value> = self
            .constraints
            .iter()
            .map(|c| {
                json!({
                    "relation": c.relation,
                    "constraint": format!("{} = 0", c.symbolic),
                    "specialized": format!("{} = 0", c.specialized),
                })
            })
            .collect();
        json!({
            "case": self.case.to_string(),
            "constraints": constraints,
            "solutions": self.solutions,
        })
    }
}

/// Dense univariate polynomial over ℚ, lowest degree first, no trailing zeros.
type Univariate = Vec<Rational>;

fn trim(mut p: Univariate) -> Univariate {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Univariate, b: &Univariate) -> Univariate {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").recip().unwrap();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let q = &r[r.len() - 1] * &lead;
        for (i, c) in b.iter().enumerate() {
            let x = &r[shift + i] - &(c * &q);
            r[shift + i] = x;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &Univariate, b: &Univariate) -> Univariate {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &Univariate) -> Univariate {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rational::from_int(k as i64))
            .collect(),
    )
}

fn poly_div(a: &Univariate, b: &Univariate) -> Univariate {
    let mut r = a.clone();
    let lead = b.last().unwrap().recip().unwrap();
    let mut q = vec![Rational::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] * &lead;
        for (i, x) in b.iter().enumerate() {
            let y = &r[shift + i] - &(x * &c);
            r[shift + i] = y;
        }
        q[shift] = c;
        r = trim(r);
    }
    trim(q)
}

/// Number of distinct nonzero complex roots of `p` (nonzero).
fn distinct_nonzero_roots(p: &Univariate) -> usize {
    let mut p = trim(p.clone());
    while p.first().is_some_and(|c| c.is_zero()) {
        p.remove(0);
    }
    let square_free = poly_div(&p, &poly_gcd(&p, &derivative(&p)));
    square_free.len().saturating_sub(1)
}

/// Classifies the automorphisms of the vacuum vertex algebra at
/// `(ℓ₂, ℓ₃)`.
///
/// An automorphism fixes `ω` and sends `I` to `a I`. Applying it to
/// `L₁ I` and `I₁ I`, both computed by straightening, yields polynomial
/// constraints on `a` whose common nonzero roots are counted.
pub fn automorphism_group(l2: &Rational, l3: &Rational) -> Result<AutReport, StructureError> {
    let vacuum = Module::new(ModuleDescriptor::vacuum_symbolic());
    let state_i = ModuleVector::mono(FieldId::Igen.state());
    let a = ParamPoly::var(Param::A);
    let mut constraints = Vec::new();
    // (relation, mode, power of a picked up by φ on the left side)
    for (relation, g, power) in [
        ("L[1] I", Generator::l(1), 1u32),
        ("I[1] I", Generator::i_int(1), 2),
    ] {
        let value = vacuum.act(&g, &state_i)?;
        let mut constraint = ParamPoly::zero();
        for (mono, c) in value.terms() {
            // φ(g I) = a^power (g I) must equal φ(g I) on the vacuum side
            if !mono.is_cyclic() {
                return Err(StructureError::Domain(format!(
                    "{relation} is not a multiple of the vacuum"
                )));
            }
            constraint = &(&a.pow(power) * c) - c;
        }
        let symbolic = constraint.monic();
        let bindings: BTreeMap<Param, Rational> =
            [(Param::L2, l2.clone()), (Param::L3, l3.clone())].into();
        let specialized = symbolic.partial_eval(&bindings);
        constraints.push(AutConstraint {
            relation: relation.to_string(),
            symbolic,
            specialized,
        });
    }
    let mut common: Option<Univariate> = None;
    for c in &constraints {
        let coeffs: Univariate = c
            .specialized
            .coefficients_in(Param::A)
            .into_iter()
            .map(|p| {
                p.as_constant()
                    .ok_or_else(|| StructureError::RequiresConcrete(p.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let coeffs = trim(coeffs);
        if coeffs.is_empty() {
            continue;
        }
        common = Some(match common {
            None => coeffs,
            Some(g) => poly_gcd(&g, &coeffs),
        });
    }
    let (case, solutions) = match common {
        None => (AutCase::Cx, None),
        Some(g) => match distinct_nonzero_roots(&g) {
            1 => (AutCase::Trivial, Some(1)),
            2 => (AutCase::Z2, Some(2)),
            n => {
                return Err(StructureError::Domain(format!(
                    "unexpected number of admissible scales: {n}"
                )))
            }
        },
    };
    Ok(AutReport {
        case,
        constraints,
        solutions,
    })
}

fn require_twisted(module: &Module) -> Result<(), StructureError> {
    match module.descriptor().kind() {
        ModuleKind::TwistedVerma => Ok(()),
        ModuleKind::Vacuum => Err(StructureError::NotTwisted),
    }
}

/// A normal-ordered word of raising modes `I_{k_1-1+1/t} ⋯ L_{m_1} ⋯`,
/// stored like a [`PBWMonomial`] with `k ≥ 1` and `m ≥ 1`.
pub type RaisingWord = PBWMonomial;

fn raising_i_index(alg: Algebra, k: u32) -> Rational {
    &Rational::from_int(k as i64 - 1) + &alg.i_offset()
}

/// Raising words of total degree `-level`, ordered like the lowering basis.
pub fn raising_words(desc: &ModuleDescriptor, level: &Rational) -> Vec<RaisingWord> {
    let t = desc.twist() as i64;
    let mut out = Vec::new();
    let Some(scaled) = level.scaled(t as u32) else {
        return out;
    };
    if scaled < 0 {
        return out;
    }
    // level * t = t * (Σm + Σ(k - 1)) + s
    for s in 0..=scaled {
        if (scaled - s) % t != 0 {
            continue;
        }
        let total = ((scaled - s) / t) as u32;
        for shifted_sum in 0..=total {
            // partitions of shifted_sum + s into exactly s parts ≥ 1
            let i_parts = if s == 0 {
                if shifted_sum == 0 {
                    vec![vec![]]
                } else {
                    vec![]
                }
            } else {
                partitions(shifted_sum + s as u32, 1, Some(s as usize))
            };
            for i_part in i_parts {
                for l_part in partitions(total - shifted_sum, 1, None) {
                    out.push(PBWMonomial::new(i_part.clone(), l_part));
                }
            }
        }
    }
    out.sort();
    out
}

/// The modes of a raising word in application order.
///
/// For `t = 2` this is the anti-involution `θ` applied to the matching
/// lowering word: `I_{-k+1/2} ↦ I_{k-1/2}`, `L_{-m} ↦ L_m`, order reversed.
pub fn raising_sequence(alg: Algebra, word: &RaisingWord) -> Vec<Generator> {
    word.i_part
        .iter()
        .map(|&k| Generator::i(raising_i_index(alg, k)))
        .chain(word.l_part.iter().map(|&m| Generator::l(m as i64)))
        .collect()
}

fn apply_sequence(
    module: &Module,
    seq: &[Generator],
    v: &ModuleVector,
) -> Result<ModuleVector, ModuleError> {
    let mut out = v.clone();
    for g in seq {
        out = module.act(g, &out)?;
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// The contravariant pairing at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub level: Rational,
    /// Raising words indexing the rows.
    pub rows: Vec<RaisingWord>,
    /// Lowering basis indexing the columns.
    pub basis: Vec<PBWMonomial>,
    pub entries: Vec<Vec<ParamPoly>>,
}

impl GramMatrix {
    pub fn is_square(&self) -> bool {
        self.rows.len() == self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows.len())
                .all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entries evaluated to rationals; fails on symbolic entries.
    pub fn concrete(&self) -> Result<Vec<Vec<Rational>>, StructureError> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        p.as_constant()
                            .ok_or_else(|| StructureError::RequiresConcrete(p.to_string()))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> Result<usize, StructureError> {
        Ok(rank(&self.concrete()?))
    }

    /// Dimension of the radical: columns minus rank.
    pub fn nullity(&self) -> Result<usize, StructureError> {
        Ok(self.basis.len() - self.rank()?)
    }

    pub fn to_json(&self, desc: &ModuleDescriptor) -> Value {
        let alg = desc.algebra();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|w| {
                let modes: Vec<String> = raising_sequence(alg, w)
                    .iter()
                    .map(|g| g.to_string())
                    .collect();
                modes.join(" ")
            })
            .collect();
        let basis: Vec<String> = self.basis.iter().map(|m| m.to_text(desc)).collect();
        let entries: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.to_string()).collect())
            .collect();
        json!({
            "level": self.level.to_string(),
            "rows": rows,
            "basis": basis,
            "entries": entries,
        })
    }
}

/// Entry `(i, j)` is the cyclic-vector coefficient of
/// `(raising word i) · (basis vector j)`.
pub fn gram_matrix(module: &Module, level: &Rational) -> Result<GramMatrix, StructureError> {
    require_twisted(module)?;
    if level.is_negative() || level.is_zero() {
        return Err(StructureError::Domain(format!(
            "Gram matrices need a positive level, got {level}"
        )));
    }
    let desc = module.descriptor();
    let alg = desc.algebra();
    let basis = module.basis_at_level(level);
    let rows = raising_words(desc, level);
    let cyclic = PBWMonomial::cyclic();
    let mut entries = Vec::with_capacity(rows.len());
    for w in &rows {
        let seq = raising_sequence(alg, w);
        let row = basis
            .iter()
            .map(|b| {
                apply_sequence(module, &seq, &ModuleVector::mono(b.clone()))
                    .map(|v| v.coeff(&cyclic))
            })
            .collect::<Result<Vec<_>, _>>()?;
        entries.push(row);
    }
    Ok(GramMatrix {
        level: level.clone(),
        rows,
        basis,
        entries,
    })
}

/// Row-reduces in place and returns the pivot columns.
fn row_reduce(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip().unwrap();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).take(cols) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Rank over ℚ.
pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work).len()
}

/// A basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.to_vec();
    let pivots = row_reduce(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -&work[r][f];
            }
            x
        })
        .collect()
}

fn require_concrete(module: &Module) -> Result<(), StructureError> {
    for (name, p) in module.descriptor().bindings() {
        if !p.is_constant() {
            return Err(StructureError::RequiresConcrete(format!("{name} = {p}")));
        }
    }
    Ok(())
}

/// `L₁, L₂, I_{1/t}, I_{1+1/t}`, whose brackets generate every raising mode.
pub fn raising_generators(alg: Algebra) -> Vec<Generator> {
    vec![
        Generator::l(1),
        Generator::l(2),
        Generator::i(raising_i_index(alg, 1)),
        Generator::i(raising_i_index(alg, 2)),
    ]
}

/// Raising modes with index at most `bound` reachable from
/// [`raising_generators`] by iterated brackets.
pub fn generated_raising_modes(
    alg: Algebra,
    bound: i64,
) -> Result<BTreeSet<Generator>, StructureError> {
    let limit = Rational::from_int(bound);
    let mut found: BTreeSet<Generator> = raising_generators(alg).into_iter().collect();
    loop {
        let current: Vec<Generator> = found.iter().cloned().collect();
        let mut grew = false;
        for x in &current {
            for y in &current {
                let br = alg.bracket(x, y).map_err(ModuleError::from)?;
                if br.len() != 1 {
                    continue;
                }
                let (g, _) = br.terms().next().unwrap();
                if !g.is_central() && g.index <= limit && found.insert(g.clone()) {
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(found);
        }
    }
}

/// All raising modes `L_m` (`m ≥ 1`) and `I_r` (`r > 0`) with index at most `bound`.
pub fn raising_modes_up_to(alg: Algebra, bound: i64) -> BTreeSet<Generator> {
    let mut out: BTreeSet<Generator> = (1..=bound).map(Generator::l).collect();
    let offset = alg.i_offset();
    let mut r = if offset.is_zero() {
        Rational::one()
    } else {
        offset
    };
    while r <= Rational::from_int(bound) {
        out.insert(Generator::i(r.clone()));
        r = &r + &Rational::one();
    }
    out
}

/// A basis of the vectors at `level` killed by every raising generator.
pub fn singular_vectors(
    module: &Module,
    level: &Rational,
) -> Result<Vec<ModuleVector>, StructureError> {
    require_twisted(module)?;
    require_concrete(module)?;
    let basis = module.basis_at_level(level);
    let gens = raising_generators(module.algebra());
    let mut index: BTreeMap<(usize, PBWMonomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::new();
    for b in &basis {
        let v = ModuleVector::mono(b.clone());
        let mut col = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            for (mono, c) in module.act(g, &v)?.terms() {
                let next = index.len();
                let row = *index.entry((gi, mono.clone())).or_insert(next);
                let c = c
                    .as_constant()
                    .ok_or_else(|| StructureError::RequiresConcrete(c.to_string()))?;
                col.push((row, c));
            }
        }
        columns.push(col);
    }
    let mut matrix = vec![vec![Rational::zero(); basis.len()]; index.len()];
    for (j, col) in columns.into_iter().enumerate() {
        for (i, c) in col {
            matrix[i][j] = c;
        }
    }
    Ok(kernel(&matrix, basis.len())
        .into_iter()
        .map(|x| {
            let mut v = ModuleVector::zero();
            for (b, c) in basis.iter().zip(x) {
                v.add_term(b.clone(), &ParamPoly::constant(c));
            }
            v
        })
        .collect())
}

/// One row of a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterRow {
    pub level: Rational,
    pub verma_dim: usize,
    pub irr_dim: usize,
    pub nullity: usize,
}

/// Graded dimensions of the Verma module up to `max_level`.
pub fn verma_character(module: &Module, max_level: &Rational) -> Vec<(Rational, usize)> {
    levels_up_to(module.descriptor(), max_level)
        .into_iter()
        .map(|l| {
            let d = module.graded_dimension(&l);
            (l, d)
        })
        .collect()
}

/// Verma, irreducible and radical dimensions at every level up to `max_level`.
pub fn character_table(
    module: &Module,
    max_level: &Rational,
) -> Result<Vec<CharacterRow>, StructureError> {
    require_twisted(module)?;
    require_concrete(module)?;
    let mut out = Vec::new();
    for level in levels_up_to(module.descriptor(), max_level) {
        let verma_dim = module.graded_dimension(&level);
        let irr_dim = if level.is_zero() {
            1
        } else {
            gram_matrix(module, &level)?.rank()?
        };
        out.push(CharacterRow {
            level,
            verma_dim,
            irr_dim,
            nullity: verma_dim - irr_dim,
        });
    }
    Ok(out)
}

/// Graded dimensions of the irreducible quotient up to `max_level`.
pub fn irreducible_character(
    module: &Module,
    max_level: &Rational,
) -> Result<Vec<(Rational, usize)>, StructureError> {
    Ok(character_table(module, max_level)?
        .into_iter()
        .map(|r| (r.level, r.irr_dim))
        .collect())
}

/// CSV with header `level,verma_dim,irr_dim,nullity`.
pub fn character_csv(rows: &[CharacterRow]) -> String {
    let mut out = String::from("level,verma_dim,irr_dim,nullity\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.level, r.verma_dim, r.irr_dim, r.nullity
        ));
    }
    out
}

pub fn character_json(rows: &[CharacterRow]) -> Value {
    serde_json::to_value(rows).expect("serializable")
}

/// Modes of `ω_H = 1/(2ℓ₃) I_{-1}I_{-1}1 + ℓ₂/ℓ₃ I_{-2}1` and of the
/// coset Virasoro field `L̃_n = L_n - (ω_H)_{n+1}` on a concrete vacuum
/// module.
pub struct ConformalSplit {
    vacuum: Module,
    l2: Rational,
    l3: Rational,
}

impl ConformalSplit {
    pub fn new(l1: &Rational, l2: &Rational, l3: &Rational) -> Result<Self, StructureError> {
        if l3.is_zero() {
            return Err(StructureError::Domain("ℓ₃ must be nonzero".into()));
        }
        Ok(ConformalSplit {
            vacuum: Module::new(ModuleDescriptor::vacuum_rational(
                l1.clone(),
                l2.clone(),
                l3.clone(),
            )),
            l2: l2.clone(),
            l3: l3.clone(),
        })
    }

    pub fn vacuum(&self) -> &Module {
        &self.vacuum
    }

    fn i_mode(&self, k: i64, w: &ModuleVector) -> Result<ModuleVector, StructureError> {
        Ok(self.vacuum.act(&Generator::i_int(k), w)?)
    }

    /// `(I_{-1}I)_s w = Σ_{j≤-1} I_j I_{s-1-j} w + Σ_{j≥0} I_{s-1-j} I_j w`.
    pub fn normal_ordered_ii(
        &self,
        s: i64,
        w: &ModuleVector,
    ) -> Result<ModuleVector, StructureError> {
        let desc = self.vacuum.descriptor();
        let Some(level) = w.max_level(desc) else {
            return Ok(ModuleVector::zero());
        };
        let level = level.to_i64().expect("vacuum levels are integral");
        let mut out = ModuleVector::zero();
        for j in (s - 1 - level)..=-1 {
            let inner = self.i_mode(s - 1 - j, w)?;
            out = out.add(&self.i_mode(j, &inner)?);
        }
        for j in 0..=level {
            let inner = self.i_mode(j, w)?;
            out = out.add(&self.i_mode(s - 1 - j, &inner)?);
        }
        Ok(out)
    }

    /// `(ω_H)_s` with vertex-algebra labels.
    pub fn omega_h(&self, s: i64, w: &ModuleVector) -> Result<ModuleVector, StructureError> {
        let half_inv = ParamPoly::constant(Rational::new(1, 2) * self.l3.recip().unwrap());
        let mut out = self.normal_ordered_ii(s, w)?.scale(&half_inv);
        if !self.l2.is_zero() {
            // (I_{-2}1)_s = -s I_{s-1}
            let ratio = &self.l2 / &self.l3;
            let d = self.i_mode(s - 1, w)?;
            out.add_scaled(&d, &ParamPoly::constant(&ratio * &Rational::from_int(-s)));
        }
        Ok(out)
    }

    /// `L̃_n = L_n - (ω_H)_{n+1}`.
    pub fn coset_l(&self, n: i64, w: &ModuleVector) -> Result<ModuleVector, StructureError> {
        let l = field_va_mode(&self.vacuum, FieldId::Omega, &Rational::from_int(n + 1), w)?;
        Ok(l.sub(&self.omega_h(n + 1, w)?))
    }

    /// `ℓ₁ - 1 + 12 ℓ₂² / ℓ₃`.
    pub fn central_charge(&self) -> Rational {
        let l1 = self
            .vacuum
            .descriptor()
            .central_value(GenKind::C1)
            .as_constant()
            .unwrap();
        &(&l1 - &Rational::one()) + &(&(&Rational::from_int(12) * &self.l2.pow(2)) / &self.l3)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformalReport {
    pub central_charge: Rational,
    pub vectors: usize,
    pub checks: usize,
    /// `(m, n, vector)` where `[L̃_m, (ω_H)_{n+1}]` failed to vanish.
    pub commute_failures: Vec<(i64, i64, String)>,
    /// `(m, n, vector)` where the Virasoro relation failed.
    pub virasoro_failures: Vec<(i64, i64, String)>,
}

impl ConformalReport {
    pub fn passed(&self) -> bool {
        self.commute_failures.is_empty() && self.virasoro_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let fails = |v: &[(i64, i64, String)]| -> Vec<Value> {
            v.iter()
                .map(|(m, n, x)| json!({"m": m, "n": n, "vector": x}))
                .collect()
        };
        json!({
            "central_charge": self.central_charge.to_string(),
            "vectors": self.vectors,
            "checks": self.checks,
            "commute_failures": fails(&self.commute_failures),
            "virasoro_failures": fails(&self.virasoro_failures),
            "passed": self.passed(),
        })
    }
}

/// Checks on all basis vectors up to `max_level` and `|m|, |n| <= max_mode`
/// that `L̃_m` commutes with `(ω_H)_{n+1}` and that the `L̃` satisfy the
/// Virasoro relations with central charge `ℓ₁ - 1 + 12ℓ₂²/ℓ₃`.
pub fn conformal_decomposition_check(
    l1: &Rational,
    l2: &Rational,
    l3: &Rational,
    max_level: &Rational,
    max_mode: i64,
) -> Result<ConformalReport, StructureError> {
    let split = ConformalSplit::new(l1, l2, l3)?;
    let c = split.central_charge();
    let vacuum = split.vacuum();
    let desc = vacuum.descriptor().clone();
    let basis: Vec<PBWMonomial> = levels_up_to(&desc, max_level)
        .iter()
        .flat_map(|l| vacuum.basis_at_level(l))
        .collect();
    let mut report = ConformalReport {
        central_charge: c.clone(),
        vectors: basis.len(),
        checks: 0,
        commute_failures: Vec::new(),
        virasoro_failures: Vec::new(),
    };
    let modes = -max_mode..=max_mode;
    for mono in &basis {
        let v = ModuleVector::mono(mono.clone());
        let text = mono.to_text(&desc);
        let coset: BTreeMap<i64, ModuleVector> = modes
            .clone()
            .map(|n| split.coset_l(n, &v).map(|x| (n, x)))
            .collect::<Result<_, _>>()?;
        let heis: BTreeMap<i64, ModuleVector> = modes
            .clone()
            .map(|n| split.omega_h(n + 1, &v).map(|x| (n, x)))
            .collect::<Result<_, _>>()?;
        for m in modes.clone() {
            for n in modes.clone() {
                report.checks += 1;
                let a = split.coset_l(m, &heis[&n])?;
                let b = split.omega_h(n + 1, &coset[&m])?;
                if a != b {
                    report.commute_failures.push((m, n, text.clone()));
                }
                let lhs = split
                    .coset_l(m, &coset[&n])?
                    .sub(&split.coset_l(n, &coset[&m])?);
                let mut rhs = split.coset_l(m + n, &v)?.scale(&ParamPoly::int(m - n));
                if m + n == 0 {
                    let k = Rational::from_int(m * m * m - m);
                    let central = &(&k / &Rational::from_int(12)) * &c;
                    rhs.add_scaled(&v, &ParamPoly::constant(central));
                }
                if lhs != rhs {
                    report.virasoro_failures.push((m, n, text.clone()));
                }
            }
        }
    }
    Ok(report)
}
