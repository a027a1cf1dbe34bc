//! Direct limits along injective endomorphisms.
//!
//! A colimit element is a pair (stage, carrier). Two pairs (i, g), (j, h)
//! with i <= j denote the same element iff applying the endomorphism j - i
//! times to g yields h. The canonical representative has minimal stage: the
//! carrier is not in the image of the endomorphism unless the stage is 0.

use super::nilpotent::NilCtx;
use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::intlin::{self, IntMatrix};
use num::bigint::BigInt;
use num::Zero;

/// The supported endomorphism shapes, each with an exact preimage test.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EndoKind {
    /// Integer matrix acting on the free part of a f.g. abelian group,
    /// identity on the torsion part. Rows are images of the basis.
    FgaMatrix { m: Vec<Vec<i64>> },
    /// Generator squaring x_i -> x_i^2 on a free nilpotent group.
    NilpotentSquare,
    /// (a, t) -> (a, t^2) on a wreath product over Z.
    WreathShiftSquare,
    /// a -> a^p, b fixed, on BS(1,n); p must not divide n.
    BsPower { p: u64 },
}

impl EndoKind {
    pub fn render(&self) -> String {
        match self {
            EndoKind::FgaMatrix { m } => {
                let rows: Vec<String> = m
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("matrix:{}", rows.join(";"))
            }
            EndoKind::NilpotentSquare => "square".into(),
            EndoKind::WreathShiftSquare => "tsquare".into(),
            EndoKind::BsPower { p } => format!("apow:{p}"),
        }
    }

    pub fn parse(s: &str) -> Result<EndoKind> {
        let s = s.trim();
        if s == "square" {
            return Ok(EndoKind::NilpotentSquare);
        }
        if s == "tsquare" {
            return Ok(EndoKind::WreathShiftSquare);
        }
        if let Some(p) = s.strip_prefix("apow:") {
            return Ok(EndoKind::BsPower {
                p: p.parse().map_err(|_| Error::Parse("bad prime".into()))?,
            });
        }
        if let Some(rows) = s.strip_prefix("matrix:") {
            let m = rows
                .split(';')
                .map(|r| {
                    r.split(',')
                        .map(|t| t.parse().map_err(|_| Error::Parse("bad matrix entry".into())))
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<Vec<Vec<i64>>>>()?;
            return Ok(EndoKind::FgaMatrix { m });
        }
        Err(Error::Parse(format!("unknown endomorphism '{s}'")))
    }

    pub fn apply(&self, spec: &GroupSpec, g: &GroupElement) -> Result<GroupElement> {
        match (self, spec, g) {
            (
                EndoKind::FgaMatrix { m },
                GroupSpec::FgAbelian { rank, .. },
                GroupElement::FgAbelian { free, tor },
            ) => {
                if m.len() != *rank || m.iter().any(|r| r.len() != *rank) {
                    return Err(Error::InvalidEndo("matrix shape mismatch".into()));
                }
                let mut out = vec![0i64; *rank];
                for (i, row) in m.iter().enumerate() {
                    let mut acc: i64 = 0;
                    for (j, c) in row.iter().enumerate() {
                        acc = acc
                            .checked_add(
                                c.checked_mul(free[j]).ok_or(Error::Overflow("endo"))?,
                            )
                            .ok_or(Error::Overflow("endo"))?;
                    }
                    out[i] = acc;
                }
                Ok(GroupElement::FgAbelian {
                    free: out,
                    tor: tor.clone(),
                })
            }
            (
                EndoKind::NilpotentSquare,
                GroupSpec::FreeNilpotent { .. },
                GroupElement::FreeNilpotent { coords },
            ) => {
                let ctx = spec.nil_ctx()?;
                Ok(GroupElement::FreeNilpotent {
                    coords: ctx.square_endo(coords)?,
                })
            }
            (
                EndoKind::WreathShiftSquare,
                GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ,
                GroupElement::WreathZ { base, shift },
            ) => {
                let mut nb = super::wreath::WzBase::new();
                for (&k, &v) in base {
                    nb.insert(k.checked_mul(2).ok_or(Error::Overflow("endo"))?, v);
                }
                Ok(GroupElement::WreathZ {
                    base: nb,
                    shift: shift.checked_mul(2).ok_or(Error::Overflow("endo"))?,
                })
            }
            (EndoKind::BsPower { p }, GroupSpec::Bs1n { n }, GroupElement::Bs1n { q, k }) => {
                Ok(GroupElement::Bs1n {
                    q: q.scale_int(&BigInt::from(*p), *n),
                    k: *k,
                })
            }
            _ => Err(Error::InvalidEndo(format!(
                "endomorphism {} does not apply to {}",
                self.render(),
                spec.family_name()
            ))),
        }
    }

    pub fn preimage(&self, spec: &GroupSpec, g: &GroupElement) -> Result<Option<GroupElement>> {
        match (self, spec, g) {
            (
                EndoKind::FgaMatrix { m },
                GroupSpec::FgAbelian { rank, .. },
                GroupElement::FgAbelian { free, tor },
            ) => {
                let mat = IntMatrix::new(
                    *rank,
                    *rank,
                    m.iter()
                        .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
                        .collect(),
                )?;
                let rhs: Vec<BigInt> = free.iter().map(|&x| BigInt::from(x)).collect();
                match intlin::solve(&mat, &rhs)? {
                    None => Ok(None),
                    Some(x) => {
                        let mut out = Vec::with_capacity(*rank);
                        for v in x {
                            out.push(
                                i64::try_from(&v).map_err(|_| Error::Overflow("endo preimage"))?,
                            );
                        }
                        Ok(Some(GroupElement::FgAbelian {
                            free: out,
                            tor: tor.clone(),
                        }))
                    }
                }
            }
            (
                EndoKind::NilpotentSquare,
                GroupSpec::FreeNilpotent { .. },
                GroupElement::FreeNilpotent { coords },
            ) => {
                let ctx: NilCtx = spec.nil_ctx()?;
                Ok(ctx
                    .square_endo_preimage(coords)?
                    .map(|coords| GroupElement::FreeNilpotent { coords }))
            }
            (
                EndoKind::WreathShiftSquare,
                GroupSpec::Lamplighter { .. } | GroupSpec::ZWrZ,
                GroupElement::WreathZ { base, shift },
            ) => {
                if shift % 2 != 0 || base.keys().any(|&k| k % 2 != 0) {
                    return Ok(None);
                }
                let nb = base.iter().map(|(&k, &v)| (k / 2, v)).collect();
                Ok(Some(GroupElement::WreathZ {
                    base: nb,
                    shift: shift / 2,
                }))
            }
            (EndoKind::BsPower { p }, GroupSpec::Bs1n { .. }, GroupElement::Bs1n { q, k }) => {
                Ok(q
                    .div_exact(&BigInt::from(*p))
                    .map(|q| GroupElement::Bs1n { q, k: *k }))
            }
            _ => Err(Error::InvalidEndo(format!(
                "endomorphism {} does not apply to {}",
                self.render(),
                spec.family_name()
            ))),
        }
    }
}

/// Reduce (stage, carrier) to the minimal-stage representative.
pub fn normalize(
    spec: &GroupSpec,
    endo: &EndoKind,
    mut stage: u32,
    mut g: GroupElement,
) -> Result<(u32, GroupElement)> {
    while stage > 0 {
        match endo.preimage(spec, &g)? {
            Some(p) => {
                stage -= 1;
                g = p;
            }
            None => break,
        }
    }
    Ok((stage, g))
}

pub fn lift(spec: &GroupSpec, endo: &EndoKind, g: &GroupElement, steps: u32) -> Result<GroupElement> {
    let mut out = g.clone();
    for _ in 0..steps {
        out = endo.apply(spec, &out)?;
    }
    Ok(out)
}

pub fn mul(
    spec: &GroupSpec,
    endo: &EndoKind,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<GroupElement> {
    let (gs, gi) = match g {
        GroupElement::Colimit { stage, inner } => (*stage, inner.as_ref()),
        _ => return Err(Error::Internal("colimit mul on non-colimit element".into())),
    };
    let (hs, hi) = match h {
        GroupElement::Colimit { stage, inner } => (*stage, inner.as_ref()),
        _ => return Err(Error::Internal("colimit mul on non-colimit element".into())),
    };
    let r = gs.max(hs);
    let a = lift(spec, endo, gi, r - gs)?;
    let b = lift(spec, endo, hi, r - hs)?;
    let prod = spec.multiply(&a, &b)?;
    let (stage, inner) = normalize(spec, endo, r, prod)?;
    Ok(GroupElement::Colimit {
        stage,
        inner: Box::new(inner),
    })
}

/// Wrap a carrier as a normalized colimit element at the given stage.
pub fn make(
    spec: &GroupSpec,
    endo: &EndoKind,
    stage: u32,
    g: GroupElement,
) -> Result<GroupElement> {
    let (stage, inner) = normalize(spec, endo, stage, g)?;
    Ok(GroupElement::Colimit {
        stage,
        inner: Box::new(inner),
    })
}

impl EndoKind {
    /// The default doubling matrix for a free rank.
    pub fn fga_double(rank: usize) -> EndoKind {
        let m = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        EndoKind::FgaMatrix { m }
    }
}

#[allow(dead_code)]
fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_identification() {
        // spec = Z, phi: x -> x^2; (0, x) ~ (1, x^2)
        let inner = GroupSpec::fg_abelian(1, vec![]).unwrap();
        let endo = EndoKind::fga_double(1);
        let x = GroupElement::FgAbelian {
            free: vec![1],
            tor: vec![],
        };
        let x2 = GroupElement::FgAbelian {
            free: vec![2],
            tor: vec![],
        };
        let a = make(&inner, &endo, 0, x.clone()).unwrap();
        let b = make(&inner, &endo, 1, x2).unwrap();
        assert_eq!(a, b);
        // (1, x) is already minimal: x has no preimage under doubling
        let c = make(&inner, &endo, 1, x).unwrap();
        assert!(matches!(&c, GroupElement::Colimit { stage: 1, .. }));
        assert_ne!(a, c);
    }

    #[test]
    fn colimit_group_laws() {
        let inner = GroupSpec::fg_abelian(1, vec![]).unwrap();
        let endo = EndoKind::fga_double(1);
        let spec = GroupSpec::Colimit {
            inner: Box::new(inner.clone()),
            endo: endo.clone(),
        };
        let elems = spec.enumerate(10).unwrap();
        let id = spec.identity();
        for g in &elems {
            spec.check_element(g).unwrap();
            assert_eq!(spec.multiply(g, &id).unwrap(), *g);
            let gi = spec.invert(g).unwrap();
            assert_eq!(spec.multiply(g, &gi).unwrap(), id);
        }
    }

    #[test]
    fn colimit_oracle_dyadic_rationals() {
        // oracle: (i, x^k) -> k / 2^i as a rational; equality agrees
        use num::rational::BigRational;
        let inner = GroupSpec::fg_abelian(1, vec![]).unwrap();
        let endo = EndoKind::fga_double(1);
        let spec = GroupSpec::Colimit {
            inner: Box::new(inner),
            endo,
        };
        let to_rat = |g: &GroupElement| -> BigRational {
            match g {
                GroupElement::Colimit { stage, inner } => match inner.as_ref() {
                    GroupElement::FgAbelian { free, .. } => BigRational::new(
                        BigInt::from(free[0]),
                        BigInt::from(2i64).pow(*stage),
                    ),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            }
        };
        let elems = spec.enumerate(14).unwrap();
        for a in &elems {
            for b in &elems {
                let same = spec.equal(a, b).unwrap();
                assert_eq!(same, to_rat(a) == to_rat(b));
                let prod = spec.multiply(a, b).unwrap();
                assert_eq!(to_rat(&prod), to_rat(a) + to_rat(b));
            }
        }
    }
}
