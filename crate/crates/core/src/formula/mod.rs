//! Computable infinitary formulas: a finite AST over word-equation atoms
//! with lazily enumerated infinite junctions, a complexity classifier,
//! negation duality, and relativization to a definable subgroup.

pub mod junction;
pub mod text;

use crate::error::{Error, Result};
use crate::words::Word;
use junction::Junction;
use std::collections::BTreeSet;
use std::fmt;

pub type VarId = u32;

/// Complexity tags for the finite-level hierarchy of computable formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexityClass {
    Finitary,
    Sigma(u32),
    Pi(u32),
    DSigma(u32),
}

use ComplexityClass::*;

impl ComplexityClass {
    pub fn sigma(n: u32) -> Self {
        if n == 0 {
            Finitary
        } else {
            Sigma(n)
        }
    }

    pub fn pi(n: u32) -> Self {
        if n == 0 {
            Finitary
        } else {
            Pi(n)
        }
    }

    /// Containment in the classification lattice.
    pub fn le(self, other: Self) -> bool {
        match (self, other) {
            (Finitary, _) => true,
            (_, Finitary) => false,
            (Sigma(n), Sigma(m)) => n <= m,
            (Sigma(n), Pi(m)) => n < m,
            (Sigma(n), DSigma(m)) => n <= m,
            (Pi(n), Pi(m)) => n <= m,
            (Pi(n), Sigma(m)) => n < m,
            (Pi(n), DSigma(m)) => n <= m,
            (DSigma(n), Sigma(m)) => n < m,
            (DSigma(n), Pi(m)) => n < m,
            (DSigma(n), DSigma(m)) => n <= m,
        }
    }

    /// Swap Sigma and Pi. The conjunction-defined difference class keeps its
    /// tag; its disjunctive co-class has no name in this lattice.
    pub fn dual(self) -> Self {
        match self {
            Finitary => Finitary,
            Sigma(n) => Pi(n),
            Pi(n) => Sigma(n),
            DSigma(n) => DSigma(n),
        }
    }

    pub fn and_join(self, other: Self) -> Self {
        match (self, other) {
            (Finitary, x) | (x, Finitary) => x,
            (Sigma(n), Sigma(m)) => Sigma(n.max(m)),
            (Pi(n), Pi(m)) => Pi(n.max(m)),
            (Sigma(n), Pi(m)) | (Pi(m), Sigma(n)) => {
                if n < m {
                    Pi(m)
                } else if m < n {
                    Sigma(n)
                } else {
                    DSigma(n)
                }
            }
            (DSigma(n), Sigma(m)) | (Sigma(m), DSigma(n)) => {
                if m > n {
                    Sigma(m)
                } else {
                    DSigma(n)
                }
            }
            (DSigma(n), Pi(m)) | (Pi(m), DSigma(n)) => {
                if m > n {
                    Pi(m)
                } else {
                    DSigma(n)
                }
            }
            (DSigma(n), DSigma(m)) => DSigma(n.max(m)),
        }
    }

    pub fn or_join(self, other: Self) -> Self {
        match (self, other) {
            (Finitary, x) | (x, Finitary) => x,
            (Sigma(n), Sigma(m)) => Sigma(n.max(m)),
            (Pi(n), Pi(m)) => Pi(n.max(m)),
            (Sigma(n), Pi(m)) | (Pi(m), Sigma(n)) => {
                if n < m {
                    Pi(m)
                } else if m < n {
                    Sigma(n)
                } else {
                    Sigma(n + 1)
                }
            }
            (DSigma(n), Sigma(m)) | (Sigma(m), DSigma(n)) => {
                if m > n {
                    Sigma(m)
                } else {
                    Sigma(n + 1)
                }
            }
            (DSigma(n), Pi(m)) | (Pi(m), DSigma(n)) => {
                if m > n {
                    Pi(m)
                } else {
                    Sigma(n + 1)
                }
            }
            (DSigma(n), DSigma(m)) => Sigma(n.max(m) + 1),
        }
    }

    pub fn exists_lift(self) -> Self {
        match self {
            Finitary => Sigma(1),
            Sigma(n) => Sigma(n),
            Pi(n) => Sigma(n + 1),
            DSigma(n) => Sigma(n + 1),
        }
    }

    pub fn forall_lift(self) -> Self {
        match self {
            Finitary => Pi(1),
            Pi(n) => Pi(n),
            Sigma(n) => Pi(n + 1),
            DSigma(n) => Pi(n + 1),
        }
    }

    pub fn bigand_lift(self) -> Self {
        match self {
            Finitary => Pi(1),
            Pi(n) => Pi(n),
            Sigma(n) => Pi(n + 1),
            DSigma(n) => Pi(n + 1),
        }
    }

    pub fn bigor_lift(self) -> Self {
        match self {
            Finitary => Sigma(1),
            Sigma(n) => Sigma(n),
            Pi(n) => Sigma(n + 1),
            DSigma(n) => Sigma(n + 1),
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finitary => write!(f, "fin"),
            Sigma(n) => write!(f, "sigma{n}"),
            Pi(n) => write!(f, "pi{n}"),
            DSigma(n) => write!(f, "dsigma{n}"),
        }
    }
}

impl ComplexityClass {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "fin" {
            return Ok(Finitary);
        }
        for (prefix, mk) in [
            ("dsigma", DSigma as fn(u32) -> ComplexityClass),
            ("sigma", Sigma as fn(u32) -> ComplexityClass),
            ("pi", Pi as fn(u32) -> ComplexityClass),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let n: u32 = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad class level '{s}'")))?;
                if n == 0 {
                    return Err(Error::Parse("class level must be >= 1".into()));
                }
                return Ok(mk(n));
            }
        }
        Err(Error::Parse(format!("unknown complexity class '{s}'")))
    }
}

/// AST of computable infinitary formulas over the group signature. Atoms are
/// word equations w(vars) = 1 / w(vars) != 1 with letters naming variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    AtomEq(Word),
    AtomNeq(Word),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    BigAnd(Junction),
    BigOr(Junction),
    Exists(Vec<VarId>, Box<Formula>),
    Forall(Vec<VarId>, Box<Formula>),
    /// Defined-predicate guard: the body with all quantifiers restricted to
    /// {x : predicate(x)} and the predicate asserted of the body's free
    /// variables. The predicate has exactly one free variable.
    Relativized {
        guard: Box<Formula>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        match self {
            Formula::AtomEq(w) | Formula::AtomNeq(w) => w.0.iter().map(|&(l, _)| l).collect(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().flat_map(|f| f.free_vars()).collect()
            }
            Formula::BigAnd(j) | Formula::BigOr(j) => j.free_vars(),
            Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                let mut s = b.free_vars();
                for v in vs {
                    s.remove(v);
                }
                s
            }
            Formula::Relativized { body, .. } => body.free_vars(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Logical dual: swap And/Or, Exists/Forall, Eq/Neq. An involution up to
    /// structural equality.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::AtomEq(w) => Formula::AtomNeq(w.clone()),
            Formula::AtomNeq(w) => Formula::AtomEq(w.clone()),
            Formula::And(fs) => Formula::Or(fs.iter().map(|f| f.negate()).collect()),
            Formula::Or(fs) => Formula::And(fs.iter().map(|f| f.negate()).collect()),
            Formula::BigAnd(j) => Formula::BigOr(j.negated()),
            Formula::BigOr(j) => Formula::BigAnd(j.negated()),
            Formula::Exists(vs, b) => Formula::Forall(vs.clone(), Box::new(b.negate())),
            Formula::Forall(vs, b) => Formula::Exists(vs.clone(), Box::new(b.negate())),
            Formula::Relativized { guard, body } => Formula::Relativized {
                guard: guard.clone(),
                body: Box::new(body.negate()),
            },
        }
    }

    /// Rename a free variable. Errors if the target would be captured.
    pub fn subst_var(&self, from: VarId, to: VarId) -> Result<Formula> {
        match self {
            Formula::AtomEq(w) => Ok(Formula::AtomEq(subst_word(w, from, to))),
            Formula::AtomNeq(w) => Ok(Formula::AtomNeq(subst_word(w, from, to))),
            Formula::And(fs) => Ok(Formula::And(
                fs.iter()
                    .map(|f| f.subst_var(from, to))
                    .collect::<Result<_>>()?,
            )),
            Formula::Or(fs) => Ok(Formula::Or(
                fs.iter()
                    .map(|f| f.subst_var(from, to))
                    .collect::<Result<_>>()?,
            )),
            Formula::BigAnd(j) => Ok(Formula::BigAnd(j.subst_var(from, to)?)),
            Formula::BigOr(j) => Ok(Formula::BigOr(j.subst_var(from, to)?)),
            Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                if vs.contains(&from) {
                    // bound here: nothing free to rename
                    return Ok(self.clone());
                }
                if vs.contains(&to) && b.free_vars().contains(&from) {
                    return Err(Error::Internal(format!(
                        "substitution x{from} -> x{to} would be captured"
                    )));
                }
                let nb = Box::new(b.subst_var(from, to)?);
                Ok(match self {
                    Formula::Exists(..) => Formula::Exists(vs.clone(), nb),
                    _ => Formula::Forall(vs.clone(), nb),
                })
            }
            Formula::Relativized { guard, body } => Ok(Formula::Relativized {
                guard: guard.clone(),
                body: Box::new(body.subst_var(from, to)?),
            }),
        }
    }

    /// Least class consistent with the structure, sampling junction
    /// conjuncts up to the default bound.
    pub fn classify(&self) -> Result<ComplexityClass> {
        self.classify_sampled(DEFAULT_CLASSIFY_SAMPLES)
    }

    pub fn classify_sampled(&self, samples: u64) -> Result<ComplexityClass> {
        match self {
            Formula::AtomEq(_) | Formula::AtomNeq(_) => Ok(Finitary),
            Formula::And(fs) => {
                let mut c = Finitary;
                for f in fs {
                    c = c.and_join(f.classify_sampled(samples)?);
                }
                Ok(c)
            }
            Formula::Or(fs) => {
                let mut c = Finitary;
                for f in fs {
                    c = c.or_join(f.classify_sampled(samples)?);
                }
                Ok(c)
            }
            Formula::Exists(_, b) => Ok(b.classify_sampled(samples)?.exists_lift()),
            Formula::Forall(_, b) => Ok(b.classify_sampled(samples)?.forall_lift()),
            Formula::BigAnd(j) => {
                j.verify_declared(samples)?;
                Ok(j.declared().bigand_lift())
            }
            Formula::BigOr(j) => {
                j.verify_declared(samples)?;
                Ok(j.declared().bigor_lift())
            }
            Formula::Relativized { .. } => self.desugared()?.classify_sampled(samples),
        }
    }

    /// Expand a Relativized node into plain guarded quantifiers plus the
    /// guard conjuncts on the body's free variables.
    pub fn desugared(&self) -> Result<Formula> {
        match self {
            Formula::Relativized { guard, body } => {
                let rel = relativize(body, guard, false)?;
                let mut parts = vec![rel];
                for v in body.free_vars() {
                    parts.push(instantiate_guard(guard, v)?);
                }
                Ok(Formula::And(parts))
            }
            _ => Ok(self.clone()),
        }
    }
}

pub const DEFAULT_CLASSIFY_SAMPLES: u64 = 16;

fn subst_word(w: &Word, from: VarId, to: VarId) -> Word {
    Word(
        w.0.iter()
            .map(|&(l, e)| (if l == from { to } else { l }, e))
            .collect(),
    )
}

/// The guard is a formula with exactly one free variable; instantiate it at
/// `v`.
pub fn instantiate_guard(guard: &Formula, v: VarId) -> Result<Formula> {
    let fv = guard.free_vars();
    if fv.len() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: fv.len(),
        });
    }
    let gv = *fv.iter().next().unwrap();
    guard.subst_var(gv, v)
}

/// Relativize: guard every quantifier by the predicate, and with
/// `quotient_equalities` also replace word equations by their quotient
/// versions (w = 1 becomes "exists g: guard(g) and w g^-1 = 1").
pub fn relativize(f: &Formula, guard: &Formula, quotient_equalities: bool) -> Result<Formula> {
    let fv = guard.free_vars();
    if fv.len() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: fv.len(),
        });
    }
    rel_inner(f, guard, quotient_equalities)
}

fn rel_inner(f: &Formula, guard: &Formula, quot: bool) -> Result<Formula> {
    match f {
        Formula::AtomEq(w) => {
            if !quot {
                return Ok(f.clone());
            }
            let g = fresh_var(w);
            let mut ww = w.clone();
            ww.0.push((g, -1));
            Ok(Formula::Exists(
                vec![g],
                Box::new(Formula::And(vec![
                    Formula::AtomEq(ww),
                    instantiate_guard(guard, g)?,
                ])),
            ))
        }
        Formula::AtomNeq(w) => {
            if !quot {
                return Ok(f.clone());
            }
            let g = fresh_var(w);
            let mut ww = w.clone();
            ww.0.push((g, -1));
            Ok(Formula::Forall(
                vec![g],
                Box::new(Formula::Or(vec![
                    Formula::AtomNeq(ww),
                    instantiate_guard(guard, g)?.negate(),
                ])),
            ))
        }
        Formula::And(fs) => Ok(Formula::And(
            fs.iter()
                .map(|f| rel_inner(f, guard, quot))
                .collect::<Result<_>>()?,
        )),
        Formula::Or(fs) => Ok(Formula::Or(
            fs.iter()
                .map(|f| rel_inner(f, guard, quot))
                .collect::<Result<_>>()?,
        )),
        Formula::BigAnd(j) => Ok(Formula::BigAnd(j.guarded(guard.clone(), quot))),
        Formula::BigOr(j) => Ok(Formula::BigOr(j.guarded(guard.clone(), quot))),
        Formula::Exists(vs, b) => {
            let mut parts = vec![rel_inner(b, guard, quot)?];
            for &v in vs {
                parts.push(instantiate_guard(guard, v)?);
            }
            Ok(Formula::Exists(vs.clone(), Box::new(Formula::And(parts))))
        }
        Formula::Forall(vs, b) => {
            let mut parts = vec![rel_inner(b, guard, quot)?];
            for &v in vs {
                parts.push(instantiate_guard(guard, v)?.negate());
            }
            Ok(Formula::Forall(vs.clone(), Box::new(Formula::Or(parts))))
        }
        Formula::Relativized { .. } => rel_inner(&f.desugared()?, guard, quot),
    }
}

fn fresh_var(w: &Word) -> VarId {
    w.0.iter().map(|&(l, _)| l + 1).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(w: &[(u32, i64)]) -> Formula {
        Formula::AtomEq(Word(w.to_vec()))
    }

    #[test]
    fn class_lattice_basics() {
        assert!(Finitary.le(Pi(1)));
        assert!(Sigma(1).le(DSigma(1)));
        assert!(Pi(1).le(DSigma(1)));
        assert!(DSigma(1).le(Sigma(2)));
        assert!(DSigma(1).le(Pi(2)));
        assert!(!Sigma(1).le(Pi(1)));
        assert!(Sigma(2).le(Pi(3)));
        assert_eq!(Sigma(2).and_join(Pi(2)), DSigma(2));
        assert_eq!(Sigma(2).and_join(Pi(3)), Pi(3));
        assert_eq!(Finitary.forall_lift(), Pi(1));
        assert_eq!(Pi(1).exists_lift(), Sigma(2));
    }

    #[test]
    fn class_display_parse() {
        for c in [Finitary, Sigma(1), Pi(2), DSigma(2)] {
            assert_eq!(ComplexityClass::parse(&c.to_string()).unwrap(), c);
        }
        assert!(ComplexityClass::parse("zeta3").is_err());
    }

    #[test]
    fn negate_involution() {
        let f = Formula::Forall(
            vec![0],
            Box::new(Formula::Or(vec![
                atom(&[(0, 2)]),
                Formula::AtomNeq(Word(vec![(0, 1)])),
            ])),
        );
        assert_eq!(f.negate().negate(), f);
        assert_eq!(f.classify().unwrap(), Pi(1));
        assert_eq!(f.negate().classify().unwrap(), Sigma(1));
    }

    #[test]
    fn free_vars_respect_binders() {
        let f = Formula::Exists(vec![1], Box::new(atom(&[(0, 1), (1, -1)])));
        let fv = f.free_vars();
        assert!(fv.contains(&0) && !fv.contains(&1));
        assert!(!f.is_sentence());
    }

    #[test]
    fn relativize_atom_is_sigma1() {
        // guard: exists s, x = s^2 (one free variable x0 here named 5)
        let guard = Formula::Exists(vec![900], Box::new(atom(&[(900, 2), (5, -1)])));
        let f = atom(&[(0, 1)]);
        let rel = relativize(&f, &guard, true).unwrap();
        assert_eq!(rel.classify().unwrap(), Sigma(1));
        // forall x (w != 1) stays Pi(1)
        let f = Formula::Forall(vec![0], Box::new(Formula::AtomNeq(Word(vec![(0, 3)]))));
        let rel = relativize(&f, &guard, true).unwrap();
        assert_eq!(rel.classify().unwrap(), Pi(1));
    }
}
