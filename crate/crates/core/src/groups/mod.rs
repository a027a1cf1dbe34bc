//! Group families with decidable word problems via canonical normal forms.
//!
//! Every element carries a family-tagged normal form; equality is structural
//! comparison of normal forms. Specs carry the family parameters and provide
//! multiplication, inversion, word evaluation, fair enumeration, and textual
//! round-trips.

pub mod bs;
pub mod colimit;
pub mod nilpotent;
pub mod qdiv;
pub mod wreath;

use crate::error::{Error, Result};
use crate::words::{reduced_words, Word};
use bs::{BsWrBase, NAdic};
use colimit::EndoKind;
use nilpotent::NilCtx;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use qdiv::QDivTable;
use std::collections::BTreeSet;
use std::fmt;
use wreath::{Wz2Base, WzBase};

/// Tagged exact normal form, one variant per group family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    FgAbelian { free: Vec<i64>, tor: Vec<u64> },
    FreeNilpotent { coords: Vec<(u32, i64)> },
    WreathZ { base: WzBase, shift: i64 },
    WreathZ2 { base: Wz2Base, shift: (i64, i64) },
    Bs1n { q: NAdic, k: i64 },
    BsWr { base: BsWrBase, shift: (i64, i64) },
    QSub { q: BigRational },
    TimesZ { inner: Box<GroupElement>, z: i64 },
    Colimit { stage: u32, inner: Box<GroupElement> },
}

/// A group family with its parameters and designated generating tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupSpec {
    FgAbelian { rank: usize, orders: Vec<u64> },
    FreeNilpotent { class: u32, rank: usize },
    Lamplighter { d: u64 },
    ZWrZ,
    ZdWrZ2 { d: u64 },
    ZWrZ2,
    Bs1n { n: u64 },
    BsWr { n: u64 },
    QSub { table: QDivTable },
    TimesZ { inner: Box<GroupSpec> },
    Colimit { inner: Box<GroupSpec>, endo: EndoKind },
}

impl GroupSpec {
    pub fn fg_abelian(rank: usize, orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&o| o < 2) {
            return Err(Error::Input("torsion orders must be >= 2".into()));
        }
        Ok(GroupSpec::FgAbelian { rank, orders })
    }

    pub fn free_nilpotent(class: u32, rank: usize) -> Result<Self> {
        if !(1..=3).contains(&class) || !(1..=4).contains(&rank) {
            return Err(Error::Unsupported(format!(
                "free nilpotent supported for class 1..3 and rank 1..4, got ({class}, {rank})"
            )));
        }
        Ok(GroupSpec::FreeNilpotent { class, rank })
    }

    /// Wide-rank free nilpotent group of class <= 2, used internally by the
    /// stage-based reduction builders where the rank grows with the stage.
    pub fn free_nilpotent_wide(class: u32, rank: usize) -> Result<Self> {
        if !(1..=2).contains(&class) || rank == 0 {
            return Err(Error::Unsupported(format!(
                "wide free nilpotent supports class 1..2, got class {class} rank {rank}"
            )));
        }
        Ok(GroupSpec::FreeNilpotent { class, rank })
    }

    pub fn lamplighter(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Input("lamplighter needs d >= 2".into()));
        }
        Ok(GroupSpec::Lamplighter { d })
    }

    pub fn zd_wr_z2(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Input("zdwrz2 needs d >= 2".into()));
        }
        Ok(GroupSpec::ZdWrZ2 { d })
    }

    pub fn bs1n(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input("bs1n needs n >= 2".into()));
        }
        Ok(GroupSpec::Bs1n { n })
    }

    pub fn bswr(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input("bswr needs n >= 2".into()));
        }
        Ok(GroupSpec::BsWr { n })
    }

    pub fn qsub(table: QDivTable) -> Self {
        GroupSpec::QSub { table }
    }

    pub fn times_z(inner: GroupSpec) -> Self {
        GroupSpec::TimesZ {
            inner: Box::new(inner),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GroupSpec::FgAbelian { .. } => "fgabelian",
            GroupSpec::FreeNilpotent { .. } => "freenilpotent",
            GroupSpec::Lamplighter { .. } => "lamplighter",
            GroupSpec::ZWrZ => "zwrz",
            GroupSpec::ZdWrZ2 { .. } => "zdwrz2",
            GroupSpec::ZWrZ2 => "zwrz2",
            GroupSpec::Bs1n { .. } => "bs1n",
            GroupSpec::BsWr { .. } => "bswr",
            GroupSpec::QSub { .. } => "qsub",
            GroupSpec::TimesZ { .. } => "timesz",
            GroupSpec::Colimit { .. } => "colimit",
        }
    }

    pub(crate) fn nil_ctx(&self) -> Result<NilCtx> {
        match self {
            GroupSpec::FreeNilpotent { class, rank } => NilCtx::new(*class, *rank),
            _ => Err(Error::Internal("nil_ctx on non-nilpotent spec".into())),
        }
    }

    fn mismatch(&self, g: &GroupElement) -> Error {
        let got = match g {
            GroupElement::FgAbelian { .. } => "fgabelian",
            GroupElement::FreeNilpotent { .. } => "freenilpotent",
            GroupElement::WreathZ { .. } => "wreath-z",
            GroupElement::WreathZ2 { .. } => "wreath-z2",
            GroupElement::Bs1n { .. } => "bs1n",
            GroupElement::BsWr { .. } => "bswr",
            GroupElement::QSub { .. } => "qsub",
            GroupElement::TimesZ { .. } => "timesz",
            GroupElement::Colimit { .. } => "colimit",
        };
        Error::FamilyMismatch {
            expected: self.family_name().to_string(),
            got: got.to_string(),
        }
    }

    /// Validate that `g` is a well-formed element of this family.
    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        match (self, g) {
            (GroupSpec::FgAbelian { rank, orders }, GroupElement::FgAbelian { free, tor }) => {
                if free.len() != *rank || tor.len() != orders.len() {
                    return Err(Error::Input("abelian coordinate length mismatch".into()));
                }
                for (t, o) in tor.iter().zip(orders) {
                    if t >= o {
                        return Err(Error::Input("torsion entry not reduced".into()));
                    }
                }
                Ok(())
            }
            (GroupSpec::FreeNilpotent { .. }, GroupElement::FreeNilpotent { coords }) => {
                let ctx = self.nil_ctx()?;
                let len = ctx.basis_len() as u32;
                let mut prev: Option<u32> = None;
                for &(s, e) in coords {
                    if s >= len || e == 0 || prev.is_some_and(|p| p >= s) {
                        return Err(Error::Input("nilpotent coordinates not canonical".into()));
                    }
                    prev = Some(s);
                }
                Ok(())
            }
            (GroupSpec::Lamplighter { d }, GroupElement::WreathZ { base, .. }) => {
                if base.values().any(|&v| v <= 0 || v >= *d as i64) {
                    return Err(Error::Input("lamplighter base values not reduced".into()));
                }
                Ok(())
            }
            (GroupSpec::ZWrZ, GroupElement::WreathZ { base, .. }) => {
                if base.values().any(|&v| v == 0) {
                    return Err(Error::Input("wreath base stores a zero value".into()));
                }
                Ok(())
            }
            (GroupSpec::ZdWrZ2 { d }, GroupElement::WreathZ2 { base, .. }) => {
                if base.values().any(|&v| v <= 0 || v >= *d as i64) {
                    return Err(Error::Input("wreath base values not reduced".into()));
                }
                Ok(())
            }
            (GroupSpec::ZWrZ2, GroupElement::WreathZ2 { base, .. }) => {
                if base.values().any(|&v| v == 0) {
                    return Err(Error::Input("wreath base stores a zero value".into()));
                }
                Ok(())
            }
            (GroupSpec::Bs1n { n }, GroupElement::Bs1n { q, .. }) => {
                let canon = NAdic::canonical(q.num.clone(), q.exp, *n);
                if &canon != q {
                    return Err(Error::Input("bs1n coordinate not in lowest terms".into()));
                }
                Ok(())
            }
            (GroupSpec::BsWr { n }, GroupElement::BsWr { base, .. }) => {
                for v in base.values() {
                    if v.is_zero() || &NAdic::canonical(v.num.clone(), v.exp, *n) != v {
                        return Err(Error::Input("bswr base value not canonical".into()));
                    }
                }
                Ok(())
            }
            (GroupSpec::QSub { table }, GroupElement::QSub { q }) => {
                if !table.member(q) {
                    return Err(Error::Input(format!(
                        "rational {q} is not a member of this subgroup of Q"
                    )));
                }
                Ok(())
            }
            (GroupSpec::TimesZ { inner }, GroupElement::TimesZ { inner: g, .. }) => {
                inner.check_element(g)
            }
            (GroupSpec::Colimit { inner, endo }, GroupElement::Colimit { stage, inner: g }) => {
                inner.check_element(g)?;
                if *stage > 0 && endo.preimage(inner, g)?.is_some() {
                    return Err(Error::Input(
                        "colimit carrier is not a minimal-stage representative".into(),
                    ));
                }
                Ok(())
            }
            _ => Err(self.mismatch(g)),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::FgAbelian { rank, orders } => GroupElement::FgAbelian {
                free: vec![0; *rank],
                tor: vec![0; orders.len()],
            },
            GroupSpec::FreeNilpotent { .. } => GroupElement::FreeNilpotent { coords: vec![] },
            GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ => GroupElement::WreathZ {
                base: WzBase::new(),
                shift: 0,
            },
            GroupSpec::ZdWrZ2 { .. } | GroupSpec::ZWrZ2 => GroupElement::WreathZ2 {
                base: Wz2Base::new(),
                shift: (0, 0),
            },
            GroupSpec::Bs1n { .. } => GroupElement::Bs1n {
                q: NAdic::zero(),
                k: 0,
            },
            GroupSpec::BsWr { .. } => GroupElement::BsWr {
                base: BsWrBase::new(),
                shift: (0, 0),
            },
            GroupSpec::QSub { .. } => GroupElement::QSub {
                q: BigRational::zero(),
            },
            GroupSpec::TimesZ { inner } => GroupElement::TimesZ {
                inner: Box::new(inner.identity()),
                z: 0,
            },
            GroupSpec::Colimit { inner, .. } => GroupElement::Colimit {
                stage: 0,
                inner: Box::new(inner.identity()),
            },
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        match (self, g, h) {
            (
                GroupSpec::FgAbelian { rank, orders },
                GroupElement::FgAbelian { free: f1, tor: t1 },
                GroupElement::FgAbelian { free: f2, tor: t2 },
            ) => {
                if f1.len() != *rank || f2.len() != *rank {
                    return Err(Error::Input("abelian coordinate length mismatch".into()));
                }
                let free = f1
                    .iter()
                    .zip(f2)
                    .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("abelian add")))
                    .collect::<Result<Vec<i64>>>()?;
                let tor = t1
                    .iter()
                    .zip(t2)
                    .zip(orders)
                    .map(|((a, b), o)| (a + b) % o)
                    .collect();
                Ok(GroupElement::FgAbelian { free, tor })
            }
            (
                GroupSpec::FreeNilpotent { .. },
                GroupElement::FreeNilpotent { coords: a },
                GroupElement::FreeNilpotent { coords: b },
            ) => Ok(GroupElement::FreeNilpotent {
                coords: self.nil_ctx()?.multiply(a, b)?,
            }),
            (
                GroupSpec::Lamplighter { d },
                GroupElement::WreathZ { base: f1, shift: s1 },
                GroupElement::WreathZ { base: f2, shift: s2 },
            ) => {
                let (base, shift) = wreath::wz_mul(Some(*d), (f1, *s1), (f2, *s2))?;
                Ok(GroupElement::WreathZ { base, shift })
            }
            (
                GroupSpec::ZWrZ,
                GroupElement::WreathZ { base: f1, shift: s1 },
                GroupElement::WreathZ { base: f2, shift: s2 },
            ) => {
                let (base, shift) = wreath::wz_mul(None, (f1, *s1), (f2, *s2))?;
                Ok(GroupElement::WreathZ { base, shift })
            }
            (
                GroupSpec::ZdWrZ2 { d },
                GroupElement::WreathZ2 { base: f1, shift: s1 },
                GroupElement::WreathZ2 { base: f2, shift: s2 },
            ) => {
                let (base, shift) = wreath::wz2_mul(Some(*d), (f1, *s1), (f2, *s2))?;
                Ok(GroupElement::WreathZ2 { base, shift })
            }
            (
                GroupSpec::ZWrZ2,
                GroupElement::WreathZ2 { base: f1, shift: s1 },
                GroupElement::WreathZ2 { base: f2, shift: s2 },
            ) => {
                let (base, shift) = wreath::wz2_mul(None, (f1, *s1), (f2, *s2))?;
                Ok(GroupElement::WreathZ2 { base, shift })
            }
            (
                GroupSpec::Bs1n { n },
                GroupElement::Bs1n { q: q1, k: k1 },
                GroupElement::Bs1n { q: q2, k: k2 },
            ) => {
                let (q, k) = bs::bs_mul(*n, (q1, *k1), (q2, *k2))?;
                Ok(GroupElement::Bs1n { q, k })
            }
            (
                GroupSpec::BsWr { n },
                GroupElement::BsWr { base: f1, shift: s1 },
                GroupElement::BsWr { base: f2, shift: s2 },
            ) => {
                let (base, shift) = bs::bswr_mul(*n, (f1, *s1), (f2, *s2))?;
                Ok(GroupElement::BsWr { base, shift })
            }
            (GroupSpec::QSub { .. }, GroupElement::QSub { q: a }, GroupElement::QSub { q: b }) => {
                Ok(GroupElement::QSub { q: a + b })
            }
            (
                GroupSpec::TimesZ { inner },
                GroupElement::TimesZ { inner: a, z: za },
                GroupElement::TimesZ { inner: b, z: zb },
            ) => Ok(GroupElement::TimesZ {
                inner: Box::new(inner.multiply(a, b)?),
                z: za.checked_add(*zb).ok_or(Error::Overflow("timesz"))?,
            }),
            (
                GroupSpec::Colimit { inner, endo },
                GroupElement::Colimit { .. },
                GroupElement::Colimit { .. },
            ) => colimit::mul(inner, endo, g, h),
            _ => {
                self.check_element(g)?;
                self.check_element(h)?;
                Err(Error::Internal("multiply dispatch fell through".into()))
            }
        }
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement> {
        match (self, g) {
            (GroupSpec::FgAbelian { orders, .. }, GroupElement::FgAbelian { free, tor }) => {
                Ok(GroupElement::FgAbelian {
                    free: free.iter().map(|x| -x).collect(),
                    tor: tor
                        .iter()
                        .zip(orders)
                        .map(|(t, o)| if *t == 0 { 0 } else { o - t })
                        .collect(),
                })
            }
            (GroupSpec::FreeNilpotent { .. }, GroupElement::FreeNilpotent { coords }) => {
                Ok(GroupElement::FreeNilpotent {
                    coords: self.nil_ctx()?.invert(coords)?,
                })
            }
            (GroupSpec::Lamplighter { d }, GroupElement::WreathZ { base, shift }) => {
                let (base, shift) = wreath::wz_inv(Some(*d), (base, *shift))?;
                Ok(GroupElement::WreathZ { base, shift })
            }
            (GroupSpec::ZWrZ, GroupElement::WreathZ { base, shift }) => {
                let (base, shift) = wreath::wz_inv(None, (base, *shift))?;
                Ok(GroupElement::WreathZ { base, shift })
            }
            (GroupSpec::ZdWrZ2 { d }, GroupElement::WreathZ2 { base, shift }) => {
                let (base, shift) = wreath::wz2_inv(Some(*d), (base, *shift))?;
                Ok(GroupElement::WreathZ2 { base, shift })
            }
            (GroupSpec::ZWrZ2, GroupElement::WreathZ2 { base, shift }) => {
                let (base, shift) = wreath::wz2_inv(None, (base, *shift))?;
                Ok(GroupElement::WreathZ2 { base, shift })
            }
            (GroupSpec::Bs1n { n }, GroupElement::Bs1n { q, k }) => {
                let (q, k) = bs::bs_inv(*n, (q, *k));
                Ok(GroupElement::Bs1n { q, k })
            }
            (GroupSpec::BsWr { n }, GroupElement::BsWr { base, shift }) => {
                let (base, shift) = bs::bswr_inv(*n, (base, *shift))?;
                Ok(GroupElement::BsWr { base, shift })
            }
            (GroupSpec::QSub { .. }, GroupElement::QSub { q }) => {
                Ok(GroupElement::QSub { q: -q })
            }
            (GroupSpec::TimesZ { inner }, GroupElement::TimesZ { inner: a, z }) => {
                Ok(GroupElement::TimesZ {
                    inner: Box::new(inner.invert(a)?),
                    z: -z,
                })
            }
            (GroupSpec::Colimit { inner, endo }, GroupElement::Colimit { stage, inner: a }) => {
                let inv = inner.invert(a)?;
                let (stage, inv) = colimit::normalize(inner, endo, *stage, inv)?;
                Ok(GroupElement::Colimit {
                    stage,
                    inner: Box::new(inv),
                })
            }
            _ => Err(self.mismatch(g)),
        }
    }

    /// The word problem: decide whether two normal forms denote the same
    /// element.
    pub fn equal(&self, g: &GroupElement, h: &GroupElement) -> Result<bool> {
        self.check_element(g)?;
        self.check_element(h)?;
        Ok(g == h)
    }

    pub fn power(&self, g: &GroupElement, e: i64) -> Result<GroupElement> {
        if e == 0 {
            return Ok(self.identity());
        }
        let base = if e < 0 { self.invert(g)? } else { g.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        loop {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &sq)?;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            sq = self.multiply(&sq, &sq)?;
        }
        Ok(acc)
    }

    pub fn designated_generators(&self) -> Result<Vec<GroupElement>> {
        match self {
            GroupSpec::FgAbelian { rank, orders } => {
                let mut gens = Vec::new();
                for i in 0..*rank {
                    let mut free = vec![0i64; *rank];
                    free[i] = 1;
                    gens.push(GroupElement::FgAbelian {
                        free,
                        tor: vec![0; orders.len()],
                    });
                }
                for i in 0..orders.len() {
                    let mut tor = vec![0u64; orders.len()];
                    tor[i] = 1;
                    gens.push(GroupElement::FgAbelian {
                        free: vec![0; *rank],
                        tor,
                    });
                }
                Ok(gens)
            }
            GroupSpec::FreeNilpotent { rank, .. } => Ok((0..*rank)
                .map(|i| GroupElement::FreeNilpotent {
                    coords: vec![(i as u32, 1)],
                })
                .collect()),
            GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ => {
                let mut a = WzBase::new();
                a.insert(0, 1);
                Ok(vec![
                    GroupElement::WreathZ { base: a, shift: 0 },
                    GroupElement::WreathZ {
                        base: WzBase::new(),
                        shift: 1,
                    },
                ])
            }
            GroupSpec::ZdWrZ2 { .. } | GroupSpec::ZWrZ2 => {
                let mut a = Wz2Base::new();
                a.insert((0, 0), 1);
                Ok(vec![
                    GroupElement::WreathZ2 {
                        base: a,
                        shift: (0, 0),
                    },
                    GroupElement::WreathZ2 {
                        base: Wz2Base::new(),
                        shift: (1, 0),
                    },
                    GroupElement::WreathZ2 {
                        base: Wz2Base::new(),
                        shift: (0, 1),
                    },
                ])
            }
            GroupSpec::Bs1n { .. } => Ok(vec![
                GroupElement::Bs1n {
                    q: NAdic::from_int(1),
                    k: 0,
                },
                GroupElement::Bs1n {
                    q: NAdic::zero(),
                    k: 1,
                },
            ]),
            GroupSpec::BsWr { .. } => {
                let mut a = BsWrBase::new();
                a.insert(0, NAdic::from_int(1));
                Ok(vec![
                    GroupElement::BsWr {
                        base: a,
                        shift: (0, 0),
                    },
                    GroupElement::BsWr {
                        base: BsWrBase::new(),
                        shift: (1, 0),
                    },
                    GroupElement::BsWr {
                        base: BsWrBase::new(),
                        shift: (0, 1),
                    },
                ])
            }
            GroupSpec::TimesZ { inner } => {
                let mut gens: Vec<GroupElement> = inner
                    .designated_generators()?
                    .into_iter()
                    .map(|g| GroupElement::TimesZ {
                        inner: Box::new(g),
                        z: 0,
                    })
                    .collect();
                gens.push(GroupElement::TimesZ {
                    inner: Box::new(inner.identity()),
                    z: 1,
                });
                Ok(gens)
            }
            GroupSpec::QSub { .. } | GroupSpec::Colimit { .. } => Err(Error::Unsupported(format!(
                "{} is not finitely generated",
                self.family_name()
            ))),
        }
    }

    pub fn generator_names(&self) -> Result<Vec<String>> {
        match self {
            GroupSpec::FgAbelian { rank, orders } => Ok((1..=*rank)
                .map(|i| format!("e{i}"))
                .chain((1..=orders.len()).map(|i| format!("t{i}")))
                .collect()),
            GroupSpec::FreeNilpotent { rank, .. } => {
                Ok((1..=*rank).map(|i| format!("x{i}")).collect())
            }
            GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ => {
                Ok(vec!["a".into(), "t".into()])
            }
            GroupSpec::ZdWrZ2 { .. } | GroupSpec::ZWrZ2 => {
                Ok(vec!["a".into(), "t1".into(), "t2".into()])
            }
            GroupSpec::Bs1n { .. } => Ok(vec!["a".into(), "b".into()]),
            GroupSpec::BsWr { .. } => Ok(vec!["a".into(), "u".into(), "v".into()]),
            GroupSpec::TimesZ { inner } => {
                let mut names = inner.generator_names()?;
                names.push("z".into());
                Ok(names)
            }
            _ => Err(Error::Unsupported(format!(
                "{} has no designated generators",
                self.family_name()
            ))),
        }
    }

    /// Substitute the tuple into the word and multiply out.
    pub fn evaluate_word(&self, word: &Word, tuple: &[GroupElement]) -> Result<GroupElement> {
        for g in tuple {
            self.check_element(g)?;
        }
        self.evaluate_word_unchecked(word, tuple)
    }

    /// The relator decision procedure R: normalize and compare to identity.
    pub fn in_relators(&self, word: &Word) -> Result<bool> {
        let gens = self.designated_generators()?;
        let v = self.evaluate_word(word, &gens)?;
        Ok(v == self.identity())
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::FgAbelian { rank: 0, orders } => {
                orders.iter().try_fold(1u64, |a, &o| a.checked_mul(o))
            }
            _ => None,
        }
    }

    /// Deterministic, repetition-free, fair enumeration with the monotone
    /// prefix property; the identity comes first.
    pub fn enumerate(&self, count: usize) -> Result<Vec<GroupElement>> {
        match self {
            GroupSpec::QSub { table } => Ok(enumerate_qsub(table, count)),
            GroupSpec::Colimit { inner, endo } => enumerate_colimit(inner, endo, count),
            _ => self.enumerate_by_words(count),
        }
    }

    fn enumerate_by_words(&self, count: usize) -> Result<Vec<GroupElement>> {
        let mut out = Vec::new();
        if count == 0 {
            return Ok(out);
        }
        let gens = self.designated_generators()?;
        let mut seen = BTreeSet::new();
        let mut last_new_len: u64 = 0;
        for w in reduced_words(gens.len()) {
            let len = w.length();
            if out.len() >= count {
                break;
            }
            if len > last_new_len + 1 {
                break; // a full word length level added nothing new: saturated
            }
            let v = self.evaluate_word_unchecked(&w, &gens)?;
            if seen.insert(v.clone()) {
                out.push(v);
                last_new_len = len;
            }
        }
        Ok(out)
    }

    /// All values of words of length <= max_len over the tuple.
    pub fn word_ball(&self, tuple: &[GroupElement], max_len: u64) -> Result<BTreeSet<GroupElement>> {
        let mut seen = BTreeSet::new();
        for w in reduced_words(tuple.len()) {
            if w.length() > max_len {
                break;
            }
            seen.insert(self.evaluate_word(&w, tuple)?);
        }
        Ok(seen)
    }

    /// `evaluate_word` without per-call element validation, for hot paths
    /// whose tuples were validated once up front.
    pub fn evaluate_word_unchecked(
        &self,
        word: &Word,
        tuple: &[GroupElement],
    ) -> Result<GroupElement> {
        let mut acc = self.identity();
        for &(l, e) in &word.0 {
            let g = tuple.get(l as usize).ok_or(Error::LetterOutOfRange {
                letter: l,
                len: tuple.len(),
            })?;
            acc = self.multiply(&acc, &self.power(g, e)?)?;
        }
        Ok(acc)
    }

    /// An infinite-order element commuting with all designated generators.
    pub fn central_witness(&self) -> Result<GroupElement> {
        match self {
            GroupSpec::FgAbelian { rank, orders } => {
                if *rank == 0 {
                    return Err(Error::Unsupported(
                        "finite abelian group has no infinite-order central element".into(),
                    ));
                }
                let mut free = vec![0i64; *rank];
                free[0] = 1;
                Ok(GroupElement::FgAbelian {
                    free,
                    tor: vec![0; orders.len()],
                })
            }
            GroupSpec::FreeNilpotent { .. } => {
                let ctx = self.nil_ctx()?;
                let last = ctx.basis_len() as u32 - 1;
                Ok(GroupElement::FreeNilpotent {
                    coords: vec![(last, 1)],
                })
            }
            _ => Err(Error::Unsupported(format!(
                "no implemented center description for {}",
                self.family_name()
            ))),
        }
    }

    /// Exact derived-subgroup membership where implemented.
    pub fn derived_member(&self, g: &GroupElement) -> Option<bool> {
        match (self, g) {
            (GroupSpec::FgAbelian { .. }, _) => Some(g == &self.identity()),
            (GroupSpec::FreeNilpotent { .. }, GroupElement::FreeNilpotent { coords }) => {
                let rank = match self {
                    GroupSpec::FreeNilpotent { rank, .. } => *rank,
                    _ => unreachable!(),
                };
                Some(coords.iter().all(|&(s, _)| s as usize >= rank))
            }
            _ => None,
        }
    }

    /// Free-part coordinates in the abelianization, where implemented.
    pub fn ab_free_coords(&self, g: &GroupElement) -> Option<Vec<i64>> {
        match (self, g) {
            (GroupSpec::FgAbelian { .. }, GroupElement::FgAbelian { free, .. }) => {
                Some(free.clone())
            }
            (GroupSpec::FreeNilpotent { .. }, GroupElement::FreeNilpotent { coords }) => {
                let ctx = self.nil_ctx().ok()?;
                Some(ctx.ab_coords(coords))
            }
            _ => None,
        }
    }

    /// Family-specific canonical text for an element. Byte-stable: rendering
    /// then parsing is the identity.
    pub fn render_element(&self, g: &GroupElement) -> Result<String> {
        self.check_element(g)?;
        Ok(render_elem(self, g))
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let g = parse_elem(self, s.trim())?;
        self.check_element(&g)?;
        Ok(g)
    }

    /// Exact infinite-order test where implemented.
    pub fn infinite_order(&self, g: &GroupElement) -> Option<bool> {
        match (self, g) {
            (GroupSpec::FgAbelian { .. }, GroupElement::FgAbelian { free, .. }) => {
                Some(free.iter().any(|&x| x != 0))
            }
            (GroupSpec::FreeNilpotent { .. }, GroupElement::FreeNilpotent { coords }) => {
                Some(!coords.is_empty())
            }
            _ => None,
        }
    }
}

fn enumerate_qsub(table: &QDivTable, count: usize) -> Vec<GroupElement> {
    let mut out = Vec::new();
    if count == 0 {
        return out;
    }
    out.push(GroupElement::QSub {
        q: BigRational::zero(),
    });
    let mut h: i64 = 1;
    while out.len() < count {
        for b in 1..=h {
            let bb = BigInt::from(b);
            if !table.allows_denominator(&bb) {
                continue;
            }
            let push = |out: &mut Vec<GroupElement>, a: i64| {
                let q = BigRational::new(BigInt::from(a), BigInt::from(b));
                out.push(GroupElement::QSub { q });
            };
            if b == h {
                for a in -h..=h {
                    if a == 0 {
                        continue;
                    }
                    if num::integer::gcd(a.unsigned_abs(), b as u64) == 1 {
                        push(&mut out, a);
                    }
                }
            } else {
                for a in [-h, h] {
                    if num::integer::gcd(a.unsigned_abs(), b as u64) == 1 {
                        push(&mut out, a);
                    }
                }
            }
        }
        h += 1;
    }
    out.truncate(count);
    out
}

fn enumerate_colimit(
    inner: &GroupSpec,
    endo: &EndoKind,
    count: usize,
) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut r: usize = 0;
    while out.len() < count {
        let inner_elems = inner.enumerate(r + 1)?;
        for s in 0..=r {
            let idx = r - s;
            if idx >= inner_elems.len() {
                continue;
            }
            let (stage, g) = colimit::normalize(inner, endo, s as u32, inner_elems[idx].clone())?;
            let elem = GroupElement::Colimit {
                stage,
                inner: Box::new(g),
            };
            if seen.insert(elem.clone()) {
                out.push(elem);
                if out.len() >= count {
                    break;
                }
            }
        }
        r += 1;
        if r > 16 * count + 16 {
            break; // safety stop; enumeration is fair long before this
        }
    }
    Ok(out)
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FgAbelian { rank, orders } => {
                let o = if orders.is_empty() {
                    "-".to_string()
                } else {
                    orders
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "fgabelian {rank} {o}")
            }
            GroupSpec::FreeNilpotent { class, rank } => write!(f, "freenilpotent {class} {rank}"),
            GroupSpec::Lamplighter { d } => write!(f, "lamplighter {d}"),
            GroupSpec::ZWrZ => write!(f, "zwrz"),
            GroupSpec::ZdWrZ2 { d } => write!(f, "zdwrz2 {d}"),
            GroupSpec::ZWrZ2 => write!(f, "zwrz2"),
            GroupSpec::Bs1n { n } => write!(f, "bs1n {n}"),
            GroupSpec::BsWr { n } => write!(f, "bswr {n}"),
            GroupSpec::QSub { table } => write!(f, "qsub {table}"),
            GroupSpec::TimesZ { inner } => write!(f, "timesz ({inner})"),
            GroupSpec::Colimit { inner, endo } => {
                write!(f, "colimit {} ({inner})", endo.render())
            }
        }
    }
}

impl GroupSpec {
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        let s = s.strip_prefix("family ").unwrap_or(s);
        let (head, rest) = match s.split_once(' ') {
            Some((h, r)) => (h, r.trim()),
            None => (s, ""),
        };
        match head {
            "fgabelian" => {
                let mut it = rest.split_whitespace();
                let rank: usize = it
                    .next()
                    .ok_or_else(|| Error::Parse("fgabelian needs a rank".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad rank".into()))?;
                let orders = match it.next() {
                    None | Some("-") => Vec::new(),
                    Some(o) => o
                        .split(',')
                        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad order '{t}'"))))
                        .collect::<Result<Vec<u64>>>()?,
                };
                GroupSpec::fg_abelian(rank, orders)
            }
            "freenilpotent" => {
                let mut it = rest.split_whitespace();
                let class: u32 = it
                    .next()
                    .ok_or_else(|| Error::Parse("freenilpotent needs class and rank".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad class".into()))?;
                let rank: usize = it
                    .next()
                    .ok_or_else(|| Error::Parse("freenilpotent needs class and rank".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad rank".into()))?;
                GroupSpec::free_nilpotent(class, rank)
            }
            "lamplighter" => GroupSpec::lamplighter(parse_single(rest)?),
            "zwrz" => Ok(GroupSpec::ZWrZ),
            "zdwrz2" => GroupSpec::zd_wr_z2(parse_single(rest)?),
            "zwrz2" => Ok(GroupSpec::ZWrZ2),
            "bs1n" => GroupSpec::bs1n(parse_single(rest)?),
            "bswr" => GroupSpec::bswr(parse_single(rest)?),
            "qsub" => Ok(GroupSpec::QSub {
                table: QDivTable::parse(rest)?,
            }),
            "timesz" => {
                let inner = strip_parens(rest)?;
                Ok(GroupSpec::times_z(GroupSpec::parse(inner)?))
            }
            "colimit" => {
                let (endo_s, inner_s) = rest
                    .split_once(' ')
                    .ok_or_else(|| Error::Parse("colimit needs an endo and inner spec".into()))?;
                let endo = EndoKind::parse(endo_s)?;
                let inner = GroupSpec::parse(strip_parens(inner_s.trim())?)?;
                Ok(GroupSpec::Colimit {
                    inner: Box::new(inner),
                    endo,
                })
            }
            other => Err(Error::Parse(format!("unknown group family '{other}'"))),
        }
    }
}

fn render_elem(spec: &GroupSpec, g: &GroupElement) -> String {
    fn list_or_dash<I: Iterator<Item = String>>(items: I) -> String {
        let v: Vec<String> = items.collect();
        if v.is_empty() {
            "-".into()
        } else {
            v.join(",")
        }
    }
    match (spec, g) {
        (_, GroupElement::FgAbelian { free, tor }) => format!(
            "fga free={} tor={}",
            list_or_dash(free.iter().map(|x| x.to_string())),
            list_or_dash(tor.iter().map(|x| x.to_string()))
        ),
        (_, GroupElement::FreeNilpotent { coords }) => format!(
            "nilp {}",
            list_or_dash(coords.iter().map(|(s, e)| format!("{s}:{e}")))
        ),
        (_, GroupElement::WreathZ { base, shift }) => format!(
            "wr s={shift} f={}",
            list_or_dash(base.iter().map(|(k, v)| format!("{k}:{v}")))
        ),
        (_, GroupElement::WreathZ2 { base, shift }) => format!(
            "wr2 s={},{} f={}",
            shift.0,
            shift.1,
            list_or_dash(base.iter().map(|((x, y), v)| format!("{x}|{y}:{v}")))
        ),
        (GroupSpec::Bs1n { n }, GroupElement::Bs1n { q, k }) => {
            format!("bs1n q={} k={k}", q.render(*n))
        }
        (GroupSpec::BsWr { n }, GroupElement::BsWr { base, shift }) => format!(
            "bswr s={},{} f={}",
            shift.0,
            shift.1,
            list_or_dash(base.iter().map(|(k, v)| format!("{k}:{}", v.render(*n))))
        ),
        (_, GroupElement::QSub { q }) => format!("q {q}"),
        (GroupSpec::TimesZ { inner }, GroupElement::TimesZ { inner: g, z }) => {
            format!("tz z={z} [{}]", render_elem(inner, g))
        }
        (GroupSpec::Colimit { inner, .. }, GroupElement::Colimit { stage, inner: g }) => {
            format!("colim stage={stage} [{}]", render_elem(inner, g))
        }
        _ => unreachable!("render_elem after check_element"),
    }
}

fn split_i64_list(s: &str) -> Result<Vec<i64>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer '{t}'"))))
        .collect()
}

fn parse_elem(spec: &GroupSpec, s: &str) -> Result<GroupElement> {
    let (head, rest) = match s.split_once(' ') {
        Some((h, r)) => (h, r.trim()),
        None => (s, ""),
    };
    let field = |name: &str| -> Result<String> {
        for part in split_top_fields(rest) {
            if let Some(v) = part.strip_prefix(&format!("{name}=")) {
                return Ok(v.to_string());
            }
        }
        Err(Error::Parse(format!("missing field '{name}' in '{s}'")))
    };
    match (head, spec) {
        ("fga", GroupSpec::FgAbelian { orders, .. }) => {
            let free = split_i64_list(&field("free")?)?;
            let tor_raw = split_i64_list(&field("tor")?)?;
            let tor = tor_raw
                .iter()
                .zip(orders)
                .map(|(&t, &o)| (t.rem_euclid(o as i64)) as u64)
                .collect();
            if tor_raw.len() != orders.len() {
                return Err(Error::Parse("torsion length mismatch".into()));
            }
            Ok(GroupElement::FgAbelian { free, tor })
        }
        ("nilp", GroupSpec::FreeNilpotent { .. }) => {
            let mut coords = Vec::new();
            if rest != "-" {
                for tok in rest.split(',') {
                    let (a, b) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad coordinate '{tok}'")))?;
                    coords.push((
                        a.parse().map_err(|_| Error::Parse("bad basis index".into()))?,
                        b.parse().map_err(|_| Error::Parse("bad exponent".into()))?,
                    ));
                }
            }
            Ok(GroupElement::FreeNilpotent { coords })
        }
        ("wr", GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ) => {
            let shift: i64 = field("s")?
                .parse()
                .map_err(|_| Error::Parse("bad shift".into()))?;
            let mut base = WzBase::new();
            let f = field("f")?;
            if f != "-" {
                for tok in f.split(',') {
                    let (k, v) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad base entry '{tok}'")))?;
                    base.insert(
                        k.parse().map_err(|_| Error::Parse("bad position".into()))?,
                        v.parse().map_err(|_| Error::Parse("bad value".into()))?,
                    );
                }
            }
            Ok(GroupElement::WreathZ { base, shift })
        }
        ("wr2", GroupSpec::ZdWrZ2 { .. } | GroupSpec::ZWrZ2) => {
            let sv = split_i64_list(&field("s")?)?;
            if sv.len() != 2 {
                return Err(Error::Parse("shift needs two coordinates".into()));
            }
            let mut base = Wz2Base::new();
            let f = field("f")?;
            if f != "-" {
                for tok in f.split(',') {
                    let (pos, v) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad base entry '{tok}'")))?;
                    let (x, y) = pos
                        .split_once('|')
                        .ok_or_else(|| Error::Parse(format!("bad position '{pos}'")))?;
                    base.insert(
                        (
                            x.parse().map_err(|_| Error::Parse("bad position".into()))?,
                            y.parse().map_err(|_| Error::Parse("bad position".into()))?,
                        ),
                        v.parse().map_err(|_| Error::Parse("bad value".into()))?,
                    );
                }
            }
            Ok(GroupElement::WreathZ2 {
                base,
                shift: (sv[0], sv[1]),
            })
        }
        ("bs1n", GroupSpec::Bs1n { n }) => {
            let q = NAdic::parse(&field("q")?, *n)?;
            let k: i64 = field("k")?
                .parse()
                .map_err(|_| Error::Parse("bad shift".into()))?;
            Ok(GroupElement::Bs1n { q, k })
        }
        ("bswr", GroupSpec::BsWr { n }) => {
            let sv = split_i64_list(&field("s")?)?;
            if sv.len() != 2 {
                return Err(Error::Parse("shift needs two coordinates".into()));
            }
            let mut base = BsWrBase::new();
            let f = field("f")?;
            if f != "-" {
                for tok in f.split(',') {
                    let (k, v) = tok
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad base entry '{tok}'")))?;
                    base.insert(
                        k.parse().map_err(|_| Error::Parse("bad position".into()))?,
                        NAdic::parse(v, *n)?,
                    );
                }
            }
            Ok(GroupElement::BsWr {
                base,
                shift: (sv[0], sv[1]),
            })
        }
        ("q", GroupSpec::QSub { .. }) => {
            let q: BigRational = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational '{rest}'")))?;
            Ok(GroupElement::QSub { q })
        }
        ("tz", GroupSpec::TimesZ { inner }) => {
            let z: i64 = field("z")?
                .parse()
                .map_err(|_| Error::Parse("bad z".into()))?;
            let body = bracket_body(rest)?;
            Ok(GroupElement::TimesZ {
                inner: Box::new(parse_elem(inner, body)?),
                z,
            })
        }
        ("colim", GroupSpec::Colimit { inner, .. }) => {
            let stage: u32 = field("stage")?
                .parse()
                .map_err(|_| Error::Parse("bad stage".into()))?;
            let body = bracket_body(rest)?;
            Ok(GroupElement::Colimit {
                stage,
                inner: Box::new(parse_elem(inner, body)?),
            })
        }
        _ => Err(Error::Parse(format!(
            "element '{s}' does not match family {}",
            spec.family_name()
        ))),
    }
}

/// Split a field string on spaces that are not inside brackets.
fn split_top_fields(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ' ' if depth == 0 => {
                if i > start {
                    out.push(&s[start..i]);
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() {
        out.push(&s[start..]);
    }
    out
}

fn bracket_body(s: &str) -> Result<&str> {
    let open = s
        .find('[')
        .ok_or_else(|| Error::Parse("missing '[' in nested element".into()))?;
    let close = s
        .rfind(']')
        .ok_or_else(|| Error::Parse("missing ']' in nested element".into()))?;
    Ok(&s[open + 1..close])
}

fn parse_single<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad parameter '{s}'")))
}

fn strip_parens(s: &str) -> Result<&str> {
    let s = s.trim();
    if let Some(t) = s.strip_prefix('(') {
        t.strip_suffix(')')
            .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))
    } else {
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_law_all_families() {
        let specs = [
            GroupSpec::fg_abelian(2, vec![]).unwrap(),
            GroupSpec::fg_abelian(1, vec![2]).unwrap(),
            GroupSpec::free_nilpotent(2, 2).unwrap(),
            GroupSpec::lamplighter(2).unwrap(),
            GroupSpec::ZWrZ,
            GroupSpec::zd_wr_z2(3).unwrap(),
            GroupSpec::ZWrZ2,
            GroupSpec::bs1n(2).unwrap(),
            GroupSpec::bswr(2).unwrap(),
            GroupSpec::times_z(GroupSpec::free_nilpotent(2, 2).unwrap()),
        ];
        for spec in &specs {
            for g in spec.enumerate(8).unwrap() {
                let id = spec.identity();
                assert_eq!(spec.multiply(&id, &g).unwrap(), g, "{spec}");
                assert_eq!(spec.multiply(&g, &id).unwrap(), g, "{spec}");
                let gi = spec.invert(&g).unwrap();
                assert_eq!(spec.multiply(&g, &gi).unwrap(), id, "{spec}");
            }
        }
    }

    #[test]
    fn enumerate_identity_first_prefix_no_dupes() {
        let specs = [
            GroupSpec::fg_abelian(1, vec![]).unwrap(),
            GroupSpec::lamplighter(2).unwrap(),
            GroupSpec::bs1n(2).unwrap(),
            GroupSpec::QSub {
                table: QDivTable::parse("inf=2 fin=- default=P0").unwrap(),
            },
        ];
        for spec in &specs {
            let a = spec.enumerate(12).unwrap();
            let b = spec.enumerate(20).unwrap();
            assert_eq!(a[0], spec.identity(), "{spec}");
            assert_eq!(&b[..12], &a[..], "{spec}");
            let set: BTreeSet<_> = a.iter().collect();
            assert_eq!(set.len(), a.len(), "{spec}");
        }
    }

    #[test]
    fn enumerate_saturates_on_finite_groups() {
        let spec = GroupSpec::fg_abelian(0, vec![2, 3]).unwrap();
        let a = spec.enumerate(100).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(spec.order(), Some(6));
    }

    #[test]
    fn evaluate_word_examples() {
        // bs1n(2): w = b a b^-1 at designated (a, b) equals a^2
        let spec = GroupSpec::bs1n(2).unwrap();
        let gens = spec.designated_generators().unwrap();
        let w = Word(vec![(1, 1), (0, 1), (1, -1)]);
        let v = spec.evaluate_word(&w, &gens).unwrap();
        let a2 = spec.power(&gens[0], 2).unwrap();
        assert_eq!(v, a2);
        // torsion of order 2: y^2 = identity
        let spec = GroupSpec::fg_abelian(1, vec![2]).unwrap();
        let gens = spec.designated_generators().unwrap();
        let w = Word(vec![(1, 2)]);
        assert_eq!(spec.evaluate_word(&w, &gens).unwrap(), spec.identity());
        // empty word
        assert_eq!(
            spec.evaluate_word(&Word::identity(), &gens).unwrap(),
            spec.identity()
        );
    }

    #[test]
    fn word_letter_out_of_range() {
        let spec = GroupSpec::bs1n(2).unwrap();
        let gens = spec.designated_generators().unwrap();
        let w = Word(vec![(5, 1)]);
        assert!(matches!(
            spec.evaluate_word(&w, &gens),
            Err(Error::LetterOutOfRange { .. })
        ));
    }

    #[test]
    fn central_witness_families() {
        let spec = GroupSpec::fg_abelian(1, vec![]).unwrap();
        let w = spec.central_witness().unwrap();
        assert_eq!(w, spec.designated_generators().unwrap()[0]);

        let spec = GroupSpec::free_nilpotent(2, 2).unwrap();
        let w = spec.central_witness().unwrap();
        for g in spec.designated_generators().unwrap() {
            let gw = spec.multiply(&g, &w).unwrap();
            let wg = spec.multiply(&w, &g).unwrap();
            assert_eq!(gw, wg);
        }

        assert!(matches!(
            GroupSpec::lamplighter(2).unwrap().central_witness(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn spec_display_parse_roundtrip() {
        let specs = [
            "fgabelian 2 -",
            "fgabelian 1 2,4",
            "freenilpotent 2 2",
            "lamplighter 2",
            "zwrz",
            "zdwrz2 3",
            "zwrz2",
            "bs1n 3",
            "bswr 2",
            "qsub inf=2,5 fin=3:2 default=P0",
            "timesz (freenilpotent 2 2)",
        ];
        for s in specs {
            let spec = GroupSpec::parse(s).unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(GroupSpec::parse(&format!("family {s}")).unwrap(), spec);
        }
        assert!(GroupSpec::parse("nope").is_err());
    }

    #[test]
    fn element_text_roundtrip() {
        let specs = [
            GroupSpec::fg_abelian(2, vec![3]).unwrap(),
            GroupSpec::free_nilpotent(2, 2).unwrap(),
            GroupSpec::lamplighter(2).unwrap(),
            GroupSpec::ZWrZ,
            GroupSpec::zd_wr_z2(3).unwrap(),
            GroupSpec::bs1n(2).unwrap(),
            GroupSpec::bswr(2).unwrap(),
            GroupSpec::QSub {
                table: QDivTable::parse("inf=2 fin=3:1 default=P0").unwrap(),
            },
            GroupSpec::times_z(GroupSpec::free_nilpotent(2, 2).unwrap()),
        ];
        for spec in &specs {
            for g in spec.enumerate(10).unwrap() {
                let s = spec.render_element(&g).unwrap();
                let back = spec.parse_element(&s).unwrap();
                assert_eq!(back, g, "{spec}: {s}");
                assert_eq!(spec.render_element(&back).unwrap(), s, "{spec}: {s}");
            }
        }
        // spec-format example from the external interface
        let spec = GroupSpec::bs1n(2).unwrap();
        let g = spec.parse_element("bs1n q=5/2 k=1").unwrap();
        assert_eq!(spec.render_element(&g).unwrap(), "bs1n q=5/2 k=1");
    }

    #[test]
    fn family_mismatch_is_an_input_error() {
        let spec = GroupSpec::bs1n(2).unwrap();
        let wrong = GroupSpec::lamplighter(2).unwrap().identity();
        assert!(matches!(
            spec.multiply(&spec.identity(), &wrong),
            Err(Error::FamilyMismatch { .. })
        ));
    }
}
