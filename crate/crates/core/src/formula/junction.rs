//! Registered named builders for infinite junctions.
//!
//! A junction is an enumerated family of conjuncts (or disjuncts) given by a
//! builder tag plus parameters; the enumerator procedures themselves are
//! reconstructed from the tag, never serialized. Enumeration orders are
//! fixed (length-lex for words, ring-lex for integer data) so formula
//! objects are deterministic.

use super::{relativize, ComplexityClass, Formula, VarId};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::intlin::IntMatrix;
use crate::words::{reduced_words, Word};
use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

/// Variable id used by guard predicates for their single free variable.
pub const GUARD_VAR: VarId = 800;
/// Base id for guard-internal bound tuples.
pub const GUARD_TUPLE_BASE: VarId = 900;
/// The universally quantified element in extendibility sentences.
pub const EXTEND_TARGET_VAR: VarId = 1_000_000;

/// The derived-subgroup predicate on one free variable `v`:
/// exists s-tuple, OR over derived-subgroup words w of v = w(s).
pub fn derived_guard(arity: u32, v: VarId) -> Formula {
    let tuple: Vec<VarId> = (0..arity).map(|i| GUARD_TUPLE_BASE + i).collect();
    Formula::Exists(
        tuple.clone(),
        Box::new(Formula::BigOr(Junction::new(
            JunctionBuilder::DerivedWords { target: v, tuple },
            None,
            ComplexityClass::Finitary,
        ))),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JunctionBuilder {
    /// Negation of each conjunct of the inner builder.
    Negated(Box<JunctionBuilder>),
    /// Relativization of each conjunct of the inner builder.
    Guarded {
        inner: Box<JunctionBuilder>,
        guard: Box<Formula>,
        quotient: bool,
    },
    /// disjunct_i: w_i(tuple) = target, over all reduced words w_i.
    WordsReach { tuple: Vec<VarId>, target: VarId },
    /// conjunct_i: w_i(vars) = 1 if w_i is a relator of the spec, else
    /// w_i(vars) != 1. The iso-type family.
    Relators { spec: GroupSpec, vars: Vec<VarId> },
    /// conjunct_i (m = i + 2): var^m != 1, plain or modulo the derived
    /// subgroup.
    TorsionFree { var: VarId, guard: Option<u32> },
    /// conjunct_i: for the i-th square integer matrix M with det != +-1,
    /// forall z-tuple: AND over torsion combos of OR over rows of
    /// (M z)_r != x_r * y_combo(r), plain or modulo the derived subgroup.
    MatricesDetNotUnit {
        xs: Vec<VarId>,
        ys: Vec<VarId>,
        guard: Option<u32>,
    },
    /// conjunct_i (i >= 2): a^t != a^(s^i).
    ConjPowers { a: VarId, t: VarId, s: VarId },
    /// k-bar enumerator: conjunct is prod_j (b^(k_j))^(t^(p_j)) != a over
    /// finite-support integer patterns; at least two support points, or a
    /// single support point with |value| >= 2 when `allow_single` is set.
    /// `torsion` bounds values to 1..d-1.
    WreathPatterns {
        torsion: Option<u64>,
        allow_single: bool,
        a: VarId,
        t: VarId,
        b: VarId,
    },
    /// conjunct over signed i with |i| >= 2, gcd(|i|, n) = 1: b^i != a.
    CoprimePowers { n: u64, a: VarId, b: VarId },
    /// disjunct_i: target = w_i(tuple) over words w_i with all exponent
    /// sums zero (the derived subgroup of the free group).
    DerivedWords { target: VarId, tuple: Vec<VarId> },
    /// conjunct_k (k = i + 1) of the infinite generating sentence:
    /// forall x1..xk [gamma_k -> forall y OR_l exists x_{k+1..l}
    /// (gamma_l and y reachable)].
    GammaExtend { class: u32 },
    /// disjunct_i (l = k + 1 + i): exists x_{k+1..l}: gamma_l and target
    /// reachable from x_1..x_l.
    GammaTarget { class: u32, k: u32 },
    /// conjunct_k: exists g, AND over p in S_k: p does not divide g.
    SkFamily { families: Vec<Vec<u64>> },
    /// conjunct_j: forall h, h^(p_j) != g.
    PrimesNotDividing { primes: Vec<u64>, g: VarId },
    /// conjunct_i: forall x exists y, y^(p_i) = x.
    DivisibleByAll { primes: Vec<u64> },
    /// disjunct over integer pairs (m, l) != (0, 0): x^m = y^l.
    RankOnePairs { x: VarId, y: VarId },
}

#[derive(Debug)]
struct JunctionCore {
    builder: JunctionBuilder,
    exhaustion: Option<u64>,
    declared: ComplexityClass,
    cache: Mutex<Vec<Formula>>,
}

/// An enumerated infinite conjunction/disjunction with a declared conjunct
/// class and an optional finite exhaustion bound. Cloning shares the
/// expansion cache.
#[derive(Clone, Debug)]
pub struct Junction(Arc<JunctionCore>);

impl PartialEq for Junction {
    fn eq(&self, other: &Self) -> bool {
        self.0.builder == other.0.builder
            && self.0.exhaustion == other.0.exhaustion
            && self.0.declared == other.0.declared
    }
}

impl Eq for Junction {}

impl Junction {
    pub fn new(builder: JunctionBuilder, exhaustion: Option<u64>, declared: ComplexityClass) -> Self {
        Junction(Arc::new(JunctionCore {
            builder,
            exhaustion,
            declared,
            cache: Mutex::new(Vec::new()),
        }))
    }

    pub fn builder(&self) -> &JunctionBuilder {
        &self.0.builder
    }

    pub fn exhaustion(&self) -> Option<u64> {
        self.0.exhaustion
    }

    pub fn declared(&self) -> ComplexityClass {
        self.0.declared
    }

    pub fn free_vars(&self) -> BTreeSet<VarId> {
        self.0.builder.free_vars()
    }

    /// The i-th conjunct/disjunct; results are cached.
    pub fn expand(&self, i: u64) -> Result<Formula> {
        if let Some(b) = self.0.exhaustion {
            if i >= b {
                return Err(Error::Input(format!(
                    "junction index {i} beyond exhaustion bound {b}"
                )));
            }
        }
        let mut cache = self.0.cache.lock().expect("junction cache poisoned");
        while cache.len() <= i as usize {
            let next = self.0.builder.expand_raw(cache.len() as u64)?;
            cache.push(next);
        }
        Ok(cache[i as usize].clone())
    }

    /// Number of conjuncts to scan under junction bound `j`.
    pub fn scan_bound(&self, j: u64) -> u64 {
        match self.0.exhaustion {
            Some(b) => b.min(j),
            None => j,
        }
    }

    /// True when the junction is finite and fully scanned under bound `j`.
    pub fn exhausted_within(&self, j: u64) -> bool {
        matches!(self.0.exhaustion, Some(b) if b <= j)
    }

    pub fn negated(&self) -> Junction {
        let builder = match &self.0.builder {
            JunctionBuilder::Negated(inner) => (**inner).clone(),
            b => JunctionBuilder::Negated(Box::new(b.clone())),
        };
        Junction::new(builder, self.0.exhaustion, self.0.declared.dual())
    }

    pub fn guarded(&self, guard: Formula, quotient: bool) -> Junction {
        let declared = match self.0.declared {
            ComplexityClass::Finitary if quotient => ComplexityClass::DSigma(1),
            c => c,
        };
        Junction::new(
            JunctionBuilder::Guarded {
                inner: Box::new(self.0.builder.clone()),
                guard: Box::new(guard),
                quotient,
            },
            self.0.exhaustion,
            declared,
        )
    }

    pub fn subst_var(&self, from: VarId, to: VarId) -> Result<Junction> {
        Ok(Junction::new(
            self.0.builder.subst_var(from, to)?,
            self.0.exhaustion,
            self.0.declared,
        ))
    }

    /// Check sampled conjuncts against the declared class.
    pub fn verify_declared(&self, samples: u64) -> Result<()> {
        let n = self.scan_bound(samples);
        for i in 0..n {
            let c = self.expand(i)?.classify_sampled(samples)?;
            if !c.le(self.0.declared) {
                return Err(Error::ClassificationViolation(format!(
                    "conjunct {i} classifies as {c}, declared {}",
                    self.0.declared
                )));
            }
        }
        Ok(())
    }
}

impl JunctionBuilder {
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        match self {
            JunctionBuilder::Negated(b) => b.free_vars(),
            JunctionBuilder::Guarded { inner, .. } => inner.free_vars(),
            JunctionBuilder::WordsReach { tuple, target } => {
                tuple.iter().copied().chain([*target]).collect()
            }
            JunctionBuilder::Relators { vars, .. } => vars.iter().copied().collect(),
            JunctionBuilder::TorsionFree { var, .. } => [*var].into(),
            JunctionBuilder::MatricesDetNotUnit { xs, ys, .. } => {
                xs.iter().chain(ys).copied().collect()
            }
            JunctionBuilder::ConjPowers { a, t, s } => [*a, *t, *s].into(),
            JunctionBuilder::WreathPatterns { a, t, b, .. } => [*a, *t, *b].into(),
            JunctionBuilder::CoprimePowers { a, b, .. } => [*a, *b].into(),
            JunctionBuilder::DerivedWords { target, tuple } => {
                tuple.iter().copied().chain([*target]).collect()
            }
            JunctionBuilder::GammaExtend { .. } => BTreeSet::new(),
            JunctionBuilder::GammaTarget { k, .. } => {
                // free: x_1..x_k (vars 0..k) and the reach target
                (0..*k).chain([EXTEND_TARGET_VAR]).collect()
            }
            JunctionBuilder::SkFamily { .. } => BTreeSet::new(),
            JunctionBuilder::PrimesNotDividing { g, .. } => [*g].into(),
            JunctionBuilder::DivisibleByAll { .. } => BTreeSet::new(),
            JunctionBuilder::RankOnePairs { x, y } => [*x, *y].into(),
        }
    }

    pub fn subst_var(&self, from: VarId, to: VarId) -> Result<JunctionBuilder> {
        let m = |v: &VarId| if *v == from { to } else { *v };
        let mv = |vs: &[VarId]| vs.iter().map(|v| m(v)).collect::<Vec<_>>();
        Ok(match self {
            JunctionBuilder::Negated(b) => {
                JunctionBuilder::Negated(Box::new(b.subst_var(from, to)?))
            }
            JunctionBuilder::Guarded {
                inner,
                guard,
                quotient,
            } => JunctionBuilder::Guarded {
                inner: Box::new(inner.subst_var(from, to)?),
                guard: guard.clone(),
                quotient: *quotient,
            },
            JunctionBuilder::WordsReach { tuple, target } => JunctionBuilder::WordsReach {
                tuple: mv(tuple),
                target: m(target),
            },
            JunctionBuilder::Relators { spec, vars } => JunctionBuilder::Relators {
                spec: spec.clone(),
                vars: mv(vars),
            },
            JunctionBuilder::TorsionFree { var, guard } => JunctionBuilder::TorsionFree {
                var: m(var),
                guard: *guard,
            },
            JunctionBuilder::MatricesDetNotUnit { xs, ys, guard } => {
                JunctionBuilder::MatricesDetNotUnit {
                    xs: mv(xs),
                    ys: mv(ys),
                    guard: *guard,
                }
            }
            JunctionBuilder::ConjPowers { a, t, s } => JunctionBuilder::ConjPowers {
                a: m(a),
                t: m(t),
                s: m(s),
            },
            JunctionBuilder::WreathPatterns {
                torsion,
                allow_single,
                a,
                t,
                b,
            } => JunctionBuilder::WreathPatterns {
                torsion: *torsion,
                allow_single: *allow_single,
                a: m(a),
                t: m(t),
                b: m(b),
            },
            JunctionBuilder::CoprimePowers { n, a, b } => JunctionBuilder::CoprimePowers {
                n: *n,
                a: m(a),
                b: m(b),
            },
            JunctionBuilder::DerivedWords { target, tuple } => JunctionBuilder::DerivedWords {
                target: m(target),
                tuple: mv(tuple),
            },
            JunctionBuilder::GammaExtend { class } => {
                JunctionBuilder::GammaExtend { class: *class }
            }
            JunctionBuilder::GammaTarget { class, k } => JunctionBuilder::GammaTarget {
                class: *class,
                k: *k,
            },
            JunctionBuilder::SkFamily { families } => JunctionBuilder::SkFamily {
                families: families.clone(),
            },
            JunctionBuilder::PrimesNotDividing { primes, g } => {
                JunctionBuilder::PrimesNotDividing {
                    primes: primes.clone(),
                    g: m(g),
                }
            }
            JunctionBuilder::DivisibleByAll { primes } => JunctionBuilder::DivisibleByAll {
                primes: primes.clone(),
            },
            JunctionBuilder::RankOnePairs { x, y } => JunctionBuilder::RankOnePairs {
                x: m(x),
                y: m(y),
            },
        })
    }

    fn expand_raw(&self, i: u64) -> Result<Formula> {
        match self {
            JunctionBuilder::Negated(b) => Ok(b.expand_raw(i)?.negate()),
            JunctionBuilder::Guarded {
                inner,
                guard,
                quotient,
            } => relativize(&inner.expand_raw(i)?, guard, *quotient),
            JunctionBuilder::WordsReach { tuple, target } => {
                let w = nth_reduced_word(tuple.len(), i);
                let mut word = remap_word(&w, tuple);
                word.0.push((*target, -1));
                Ok(Formula::AtomEq(word))
            }
            JunctionBuilder::Relators { spec, vars } => {
                let w = nth_reduced_word(vars.len(), i);
                let in_r = spec.in_relators(&w)?;
                let word = remap_word(&w, vars);
                Ok(if in_r {
                    Formula::AtomEq(word)
                } else {
                    Formula::AtomNeq(word)
                })
            }
            JunctionBuilder::TorsionFree { var, guard } => {
                let m = i as i64 + 2;
                let atom = Formula::AtomNeq(Word(vec![(*var, m)]));
                match guard {
                    None => Ok(atom),
                    Some(arity) => relativize(&atom, &derived_guard(*arity, GUARD_VAR), true),
                }
            }
            JunctionBuilder::MatricesDetNotUnit { xs, ys, guard } => {
                expand_matrix_conjunct(xs, ys, *guard, i)
            }
            JunctionBuilder::ConjPowers { a, t, s } => {
                let p = i as i64 + 2;
                // t^-1 a t s^-p a^-1 s^p != 1
                let word = Word(vec![
                    (*t, -1),
                    (*a, 1),
                    (*t, 1),
                    (*s, -p),
                    (*a, -1),
                    (*s, p),
                ]);
                Ok(Formula::AtomNeq(word))
            }
            JunctionBuilder::WreathPatterns {
                torsion,
                allow_single,
                a,
                t,
                b,
            } => {
                let pat = nth_wreath_pattern(*torsion, *allow_single, i);
                let mut word = Word(Vec::new());
                for (pos, val) in pat {
                    word.0.push((*t, -pos));
                    word.0.push((*b, val));
                    word.0.push((*t, pos));
                }
                word.0.push((*a, -1));
                Ok(Formula::AtomNeq(word))
            }
            JunctionBuilder::CoprimePowers { n, a, b } => {
                let e = nth_coprime_power(*n, i);
                Ok(Formula::AtomNeq(Word(vec![(*b, e), (*a, -1)])))
            }
            JunctionBuilder::DerivedWords { target, tuple } => {
                let w = nth_derived_word(tuple.len(), i);
                let mut word = Word(vec![(*target, 1)]);
                word = word.concat(&remap_word(&w, tuple).inverse());
                Ok(Formula::AtomEq(word))
            }
            JunctionBuilder::GammaExtend { class } => {
                let k = i as u32 + 1;
                let gamma_k = gamma_formula(*class, k)?;
                let extend = Formula::Forall(
                    vec![EXTEND_TARGET_VAR],
                    Box::new(Formula::BigOr(Junction::new(
                        JunctionBuilder::GammaTarget { class: *class, k },
                        None,
                        ComplexityClass::Sigma(2),
                    ))),
                );
                Ok(Formula::Forall(
                    (0..k).collect(),
                    Box::new(Formula::Or(vec![gamma_k.negate(), extend])),
                ))
            }
            JunctionBuilder::GammaTarget { class, k } => {
                let l = *k + 1 + i as u32;
                let gamma_l = gamma_formula(*class, l)?;
                let reach = Formula::BigOr(Junction::new(
                    JunctionBuilder::WordsReach {
                        tuple: (0..l).collect(),
                        target: EXTEND_TARGET_VAR,
                    },
                    None,
                    ComplexityClass::Finitary,
                ));
                Ok(Formula::Exists(
                    (*k..l).collect(),
                    Box::new(Formula::And(vec![gamma_l, reach])),
                ))
            }
            JunctionBuilder::SkFamily { families } => {
                let primes = families.get(i as usize).cloned().unwrap_or_default();
                let g: VarId = 0;
                let count = primes.len() as u64;
                Ok(Formula::Exists(
                    vec![g],
                    Box::new(Formula::BigAnd(Junction::new(
                        JunctionBuilder::PrimesNotDividing { primes, g },
                        Some(count),
                        ComplexityClass::Pi(1),
                    ))),
                ))
            }
            JunctionBuilder::PrimesNotDividing { primes, g } => {
                let p = *primes.get(i as usize).ok_or_else(|| {
                    Error::Input(format!("prime index {i} beyond family size"))
                })? as i64;
                let h = *g + 1;
                Ok(Formula::Forall(
                    vec![h],
                    Box::new(Formula::AtomNeq(Word(vec![(h, p), (*g, -1)]))),
                ))
            }
            JunctionBuilder::DivisibleByAll { primes } => {
                let p = *primes.get(i as usize).ok_or_else(|| {
                    Error::Input(format!("prime index {i} beyond promoted set"))
                })? as i64;
                let x: VarId = 0;
                let y: VarId = 1;
                Ok(Formula::Forall(
                    vec![x],
                    Box::new(Formula::Exists(
                        vec![y],
                        Box::new(Formula::AtomEq(Word(vec![(y, p), (x, -1)]))),
                    )),
                ))
            }
            JunctionBuilder::RankOnePairs { x, y } => {
                let (m, l) = nth_nonzero_pair(i);
                Ok(Formula::AtomEq(Word(vec![(*x, m), (*y, -l)])))
            }
        }
    }
}

/// gamma_k for the free nilpotent group of the given class: the iso-type of
/// N_{class,k} conjoined with the hatted determinant condition on the
/// abelianization.
pub fn gamma_formula(class: u32, k: u32) -> Result<Formula> {
    let spec = if class <= 2 {
        GroupSpec::free_nilpotent_wide(class, k as usize)?
    } else {
        GroupSpec::free_nilpotent(class, k as usize)?
    };
    let vars: Vec<VarId> = (0..k).collect();
    let iso = Formula::BigAnd(Junction::new(
        JunctionBuilder::Relators {
            spec,
            vars: vars.clone(),
        },
        None,
        ComplexityClass::Finitary,
    ));
    let dets = Formula::BigAnd(Junction::new(
        JunctionBuilder::MatricesDetNotUnit {
            xs: vars,
            ys: vec![],
            guard: Some(2),
        },
        None,
        ComplexityClass::Pi(1),
    ));
    Ok(Formula::And(vec![iso, dets]))
}

fn remap_word(w: &Word, vars: &[VarId]) -> Word {
    Word(
        w.0.iter()
            .map(|&(l, e)| (vars[l as usize], e))
            .collect(),
    )
}

fn expand_matrix_conjunct(
    xs: &[VarId],
    ys: &[VarId],
    guard: Option<u32>,
    i: u64,
) -> Result<Formula> {
    let n = xs.len();
    let m = nth_bad_det_matrix(n, i)?;
    let base = xs.iter().chain(ys).copied().max().unwrap_or(0) + 1;
    let zs: Vec<VarId> = (0..n as u32).map(|j| base + j).collect();
    // combos assign a torsion variable to each row; with no torsion vars
    // there is a single empty combo
    let combo_count = if ys.is_empty() {
        1
    } else {
        (ys.len() as u64).pow(n as u32)
    };
    if combo_count > 4096 {
        return Err(Error::Unsupported(
            "torsion combination count exceeds desk scale".into(),
        ));
    }
    let mut combos = Vec::new();
    for c in 0..combo_count {
        let mut rows = Vec::new();
        let mut rem = c;
        for r in 0..n {
            // row r: (M z)_r != x_r * y_(combo digit)
            let mut word = Word(Vec::new());
            for (j, z) in zs.iter().enumerate() {
                let coeff = i64::try_from(m.at(r, j)).map_err(|_| Error::Overflow("matrix"))?;
                if coeff != 0 {
                    word.0.push((*z, coeff));
                }
            }
            word.0.push((xs[r], -1));
            if !ys.is_empty() {
                let digit = (rem % ys.len() as u64) as usize;
                rem /= ys.len() as u64;
                word.0.push((ys[digit], -1));
            }
            let atom = Formula::AtomNeq(word);
            let atom = match guard {
                None => atom,
                Some(arity) => relativize(&atom, &derived_guard(arity, GUARD_VAR), true)?,
            };
            rows.push(atom);
        }
        combos.push(Formula::Or(rows));
    }
    Ok(Formula::Forall(zs, Box::new(Formula::And(combos))))
}

pub fn nth_reduced_word(arity: usize, i: u64) -> Word {
    reduced_words(arity)
        .nth(i as usize)
        .expect("word enumeration is infinite for arity >= 1")
}

fn nth_derived_word(arity: usize, i: u64) -> Word {
    reduced_words(arity)
        .filter(|w| w.exponent_sums(arity).iter().all(|&s| s == 0))
        .nth(i as usize)
        .expect("derived-word enumeration is infinite")
}

/// The i-th n x n integer matrix with determinant different from 1 and -1,
/// enumerated by max-entry rings and row-major lexicographic order inside a
/// ring.
fn nth_bad_det_matrix(n: usize, i: u64) -> Result<IntMatrix> {
    let mut count = 0u64;
    for radius in 0i64.. {
        let width = 2 * radius + 1;
        let cells = n * n;
        let total = (width as u128).pow(cells as u32);
        for code in 0..total {
            let mut rem = code;
            let mut entries = Vec::with_capacity(cells);
            let mut maxabs = 0i64;
            for _ in 0..cells {
                let digit = (rem % width as u128) as i64 - radius;
                rem /= width as u128;
                maxabs = maxabs.max(digit.abs());
                entries.push(digit);
            }
            if maxabs != radius {
                continue; // already seen in an earlier ring
            }
            let m = IntMatrix::from_i64(n, n, &entries)?;
            let det = m.determinant()?;
            let det_i: Option<i64> = (&det).try_into().ok();
            if det_i == Some(1) || det_i == Some(-1) {
                continue;
            }
            if count == i {
                return Ok(m);
            }
            count += 1;
        }
        if radius > 20 {
            break;
        }
    }
    Err(Error::Internal("matrix enumeration exhausted".into()))
}

/// Finite-support integer patterns for the wreath-product conjuncts,
/// enumerated by complexity rings.
fn nth_wreath_pattern(torsion: Option<u64>, allow_single: bool, i: u64) -> Vec<(i64, i64)> {
    let mut count = 0u64;
    for c in 1i64.. {
        let window: Vec<i64> = (-c..=c).collect();
        let maxsize = (c + 1).min(window.len() as i64) as usize;
        let mut ring: Vec<Vec<(i64, i64)>> = Vec::new();
        let npos = window.len();
        for mask in 1u32..(1 << npos) {
            let size = mask.count_ones() as usize;
            let min_size = if allow_single { 1 } else { 2 };
            if size < min_size || size > maxsize {
                continue;
            }
            let positions: Vec<i64> = (0..npos)
                .filter(|&p| mask & (1 << p) != 0)
                .map(|p| window[p])
                .collect();
            let values: Vec<i64> = match torsion {
                Some(d) => (1..d as i64).collect(),
                None => (1..=c)
                    .flat_map(|v| [v, -v])
                    .collect(),
            };
            let mut assignment = vec![0usize; size];
            loop {
                let vals: Vec<i64> = assignment.iter().map(|&ai| values[ai]).collect();
                let pat: Vec<(i64, i64)> =
                    positions.iter().copied().zip(vals.iter().copied()).collect();
                let ok_single = size >= 2 || vals[0].abs() >= 2;
                let complexity = pat
                    .iter()
                    .map(|&(p, v)| p.abs().max(if torsion.is_some() { 0 } else { v.abs() }))
                    .max()
                    .unwrap_or(0);
                if ok_single && complexity == c {
                    ring.push(pat);
                }
                // odometer over value assignments
                let mut pos = 0;
                loop {
                    if pos == size {
                        break;
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < values.len() {
                        break;
                    }
                    assignment[pos] = 0;
                    pos += 1;
                }
                if pos == size {
                    break;
                }
            }
        }
        ring.sort();
        ring.dedup();
        for pat in ring {
            if count == i {
                return pat;
            }
            count += 1;
        }
        if c > 12 {
            break;
        }
    }
    unreachable!("wreath pattern enumeration is infinite")
}

/// Signed exponents with |e| >= 2 and gcd(|e|, n) = 1, ordered by magnitude
/// then sign.
fn nth_coprime_power(n: u64, i: u64) -> i64 {
    let mut count = 0u64;
    for m in 2u64.. {
        if num::integer::gcd(m, n) != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            if count == i {
                return sign * m as i64;
            }
            count += 1;
        }
    }
    unreachable!()
}

/// Nonzero integer pairs by max-abs rings, lexicographic inside a ring.
fn nth_nonzero_pair(i: u64) -> (i64, i64) {
    let mut count = 0u64;
    for r in 1i64.. {
        for m in -r..=r {
            for l in -r..=r {
                if m.abs().max(l.abs()) != r {
                    continue;
                }
                if count == i {
                    return (m, l);
                }
                count += 1;
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_enumeration_skips_unimodular() {
        // index 0 at radius 0 is the zero matrix (det 0)
        let m0 = nth_bad_det_matrix(2, 0).unwrap();
        assert_eq!(m0, IntMatrix::from_i64(2, 2, &[0, 0, 0, 0]).unwrap());
        for i in 0..40 {
            let m = nth_bad_det_matrix(2, i).unwrap();
            let det = m.determinant().unwrap();
            let di: Option<i64> = (&det).try_into().ok();
            assert!(di != Some(1) && di != Some(-1), "matrix {i} is unimodular");
        }
    }

    #[test]
    fn wreath_patterns_are_deterministic_and_valid() {
        for i in 0..30 {
            let p = nth_wreath_pattern(Some(2), false, i);
            assert!(p.len() >= 2, "need at least two support points: {p:?}");
            assert!(p.iter().all(|&(_, v)| v == 1));
            let q = nth_wreath_pattern(Some(2), false, i);
            assert_eq!(p, q);
        }
        // singles allowed for the Z wr Z variant, with value at least 2
        let mut saw_single = false;
        for i in 0..60 {
            let p = nth_wreath_pattern(None, true, i);
            if p.len() == 1 {
                saw_single = true;
                assert!(p[0].1.abs() >= 2, "{p:?}");
            }
        }
        assert!(saw_single);
    }

    #[test]
    fn coprime_powers_skip_divisors() {
        let es: Vec<i64> = (0..8).map(|i| nth_coprime_power(2, i)).collect();
        assert_eq!(es, vec![3, -3, 5, -5, 7, -7, 9, -9]);
        let es: Vec<i64> = (0..4).map(|i| nth_coprime_power(3, i)).collect();
        assert_eq!(es, vec![2, -2, 4, -4]);
    }

    #[test]
    fn derived_words_have_zero_exponent_sums() {
        for i in 0..20 {
            let w = nth_derived_word(2, i);
            assert!(w.exponent_sums(2).iter().all(|&s| s == 0), "{w}");
        }
        // the first nontrivial one is the commutator-like word of length 4
        assert_eq!(nth_derived_word(2, 0), Word::identity());
    }

    #[test]
    fn junction_cache_is_shared_across_clones() {
        let j = Junction::new(
            JunctionBuilder::TorsionFree { var: 0, guard: None },
            None,
            ComplexityClass::Finitary,
        );
        let j2 = j.clone();
        let a = j.expand(3).unwrap();
        let b = j2.expand(3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Formula::AtomNeq(Word(vec![(0, 5)])));
    }

    #[test]
    fn negated_junction_collapses_double_negation() {
        let j = Junction::new(
            JunctionBuilder::TorsionFree { var: 0, guard: None },
            None,
            ComplexityClass::Finitary,
        );
        let nn = j.negated().negated();
        assert_eq!(j, nn);
        assert_eq!(
            j.negated().expand(0).unwrap(),
            Formula::AtomEq(Word(vec![(0, 2)]))
        );
    }
}
