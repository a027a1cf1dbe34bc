//! Arithmetic for the solvable Baumslag-Solitar groups BS(1,n) and the
//! reduction target (B^Z) x| Z^2, where B = Z[1/n].

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::collections::BTreeMap;

/// An element of Z[1/n]: num / n^exp, canonical (exp = 0 or n does not
/// divide num; zero is (0, 0)).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NAdic {
    pub num: BigInt,
    pub exp: u32,
}

impl NAdic {
    pub fn zero() -> Self {
        NAdic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        NAdic {
            num: BigInt::from(v),
            exp: 0,
        }
    }

    pub fn canonical(mut num: BigInt, mut exp: u32, n: u64) -> Self {
        if num.is_zero() {
            return NAdic::zero();
        }
        let nn = BigInt::from(n);
        while exp > 0 && (&num % &nn).is_zero() {
            num /= &nn;
            exp -= 1;
        }
        NAdic { num, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &NAdic, n: u64) -> NAdic {
        let nn = BigInt::from(n);
        let e = self.exp.max(other.exp);
        let a = &self.num * nn.pow(e - self.exp);
        let b = &other.num * nn.pow(e - other.exp);
        NAdic::canonical(a + b, e, n)
    }

    pub fn neg(&self) -> NAdic {
        NAdic {
            num: -self.num.clone(),
            exp: self.exp,
        }
    }

    /// Multiply by n^j (j may be negative).
    pub fn scale_pow(&self, j: i64, n: u64) -> NAdic {
        if self.is_zero() {
            return NAdic::zero();
        }
        let nn = BigInt::from(n);
        if j >= 0 {
            NAdic::canonical(&self.num * nn.pow(j as u32), self.exp, n)
        } else {
            NAdic::canonical(self.num.clone(), self.exp + (-j) as u32, n)
        }
    }

    /// Multiply by an integer scalar.
    pub fn scale_int(&self, c: &BigInt, n: u64) -> NAdic {
        NAdic::canonical(&self.num * c, self.exp, n)
    }

    /// Exact division by an integer coprime to n, if possible.
    pub fn div_exact(&self, c: &BigInt) -> Option<NAdic> {
        if self.num.is_zero() {
            return Some(NAdic::zero());
        }
        let (q, r) = self.num.div_rem(c);
        if r.is_zero() {
            Some(NAdic {
                num: q,
                exp: self.exp,
            })
        } else {
            None
        }
    }

    pub fn render(&self, n: u64) -> String {
        if self.exp == 0 {
            format!("{}", self.num)
        } else {
            format!("{}/{}", self.num, BigInt::from(n).pow(self.exp))
        }
    }

    pub fn parse(s: &str, n: u64) -> Result<NAdic> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num: BigInt = num_s
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator '{num_s}'")))?;
        let exp = match den_s {
            None => 0,
            Some(d) => {
                let den: BigInt = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad denominator '{d}'")))?;
                if den <= BigInt::zero() {
                    return Err(Error::Parse("denominator must be positive".into()));
                }
                // den must be a power of n
                let nn = BigInt::from(n);
                let mut e = 0u32;
                let mut cur = BigInt::one();
                while cur < den {
                    cur *= &nn;
                    e += 1;
                }
                if cur != den {
                    return Err(Error::Parse(format!(
                        "denominator {den} is not a power of {n}"
                    )));
                }
                e
            }
        };
        Ok(NAdic::canonical(num, exp, n))
    }

    /// A coarse magnitude proxy: max of the denominator exponent and the bit
    /// length of the numerator.
    pub fn magnitude(&self) -> u64 {
        (self.exp as u64).max(self.num.bits())
    }
}

/// BS(1,n) multiplication on normal forms (q, k) in Z[1/n] x| Z, where the
/// shift k acts by multiplication by n^k.
pub fn bs_mul(n: u64, a: (&NAdic, i64), b: (&NAdic, i64)) -> Result<(NAdic, i64)> {
    let q = a.0.add(&b.0.scale_pow(a.1, n), n);
    let k = a
        .1
        .checked_add(b.1)
        .ok_or(Error::Overflow("bs shift"))?;
    Ok((q, k))
}

pub fn bs_inv(n: u64, a: (&NAdic, i64)) -> (NAdic, i64) {
    (a.0.neg().scale_pow(-a.1, n), -a.1)
}

pub type BsWrBase = BTreeMap<i64, NAdic>;

/// Multiplication in (B^Z) x| Z^2. The first shift coordinate multiplies
/// every base entry by n, the second shifts the copies of B.
pub fn bswr_mul(
    n: u64,
    a: (&BsWrBase, (i64, i64)),
    b: (&BsWrBase, (i64, i64)),
) -> Result<(BsWrBase, (i64, i64))> {
    let (fa, (ja, ka)) = a;
    let (fb, (jb, kb)) = b;
    let mut out = fa.clone();
    for (pos, val) in fb {
        let np = pos
            .checked_add(ka)
            .ok_or(Error::Overflow("bswr position"))?;
        let nv = val.scale_pow(ja, n);
        merge_base(&mut out, np, nv, n);
    }
    let j = ja.checked_add(jb).ok_or(Error::Overflow("bswr shift"))?;
    let k = ka.checked_add(kb).ok_or(Error::Overflow("bswr shift"))?;
    Ok((out, (j, k)))
}

pub fn bswr_inv(n: u64, a: (&BsWrBase, (i64, i64))) -> Result<(BsWrBase, (i64, i64))> {
    let (f, (j, k)) = a;
    let mut out = BsWrBase::new();
    for (pos, val) in f {
        let np = pos.checked_sub(k).ok_or(Error::Overflow("bswr position"))?;
        merge_base(&mut out, np, val.neg().scale_pow(-j, n), n);
    }
    Ok((out, (-j, -k)))
}

fn merge_base(map: &mut BsWrBase, pos: i64, val: NAdic, n: u64) {
    if val.is_zero() {
        return;
    }
    match map.remove(&pos) {
        None => {
            map.insert(pos, val);
        }
        Some(old) => {
            let sum = old.add(&val, n);
            if !sum.is_zero() {
                map.insert(pos, sum);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nadic_canonical_forms() {
        let a = NAdic::canonical(BigInt::from(4), 2, 2); // 4/4 = 1
        assert_eq!(a, NAdic::from_int(1));
        let b = NAdic::canonical(BigInt::from(6), 1, 2); // 6/2 = 3
        assert_eq!(b, NAdic::from_int(3));
        let c = NAdic::canonical(BigInt::from(5), 1, 2);
        assert_eq!(c.render(2), "5/2");
        assert_eq!(NAdic::parse("5/2", 2).unwrap(), c);
    }

    #[test]
    fn bs_relator_holds() {
        // b a b^-1 = a^n for n = 2: a = (1, 0), b = (0, 1)
        let n = 2;
        let a = (NAdic::from_int(1), 0i64);
        let b = (NAdic::from_int(0), 1i64);
        let ba = bs_mul(n, (&b.0, b.1), (&a.0, a.1)).unwrap();
        let binv = bs_inv(n, (&b.0, b.1));
        let bab = bs_mul(n, (&ba.0, ba.1), (&binv.0, binv.1)).unwrap();
        assert_eq!(bab, (NAdic::from_int(2), 0));
    }

    #[test]
    fn bs_spec_example() {
        // (q=1/2, k=1) * (q=1, k=0) = (q=5/2, k=1) for n=2
        let n = 2;
        let g = (NAdic::parse("1/2", n).unwrap(), 1i64);
        let h = (NAdic::from_int(1), 0i64);
        let p = bs_mul(n, (&g.0, g.1), (&h.0, h.1)).unwrap();
        assert_eq!(p.0.render(n), "5/2");
        assert_eq!(p.1, 1);
    }

    #[test]
    fn bswr_group_laws() {
        let n = 2;
        let mut f = BsWrBase::new();
        f.insert(0, NAdic::from_int(1));
        let a = (f, (0i64, 0i64));
        let u = (BsWrBase::new(), (1i64, 0i64));
        let v = (BsWrBase::new(), (0i64, 1i64));
        for x in [&a, &u, &v] {
            let xi = bswr_inv(n, (&x.0, x.1)).unwrap();
            let prod = bswr_mul(n, (&x.0, x.1), (&xi.0, xi.1)).unwrap();
            assert!(prod.0.is_empty() && prod.1 == (0, 0));
        }
        // u a u^-1 multiplies the base entry by n
        let ua = bswr_mul(n, (&u.0, u.1), (&a.0, a.1)).unwrap();
        let ui = bswr_inv(n, (&u.0, u.1)).unwrap();
        let uau = bswr_mul(n, (&ua.0, ua.1), (&ui.0, ui.1)).unwrap();
        assert_eq!(uau.0.get(&0), Some(&NAdic::from_int(2)));
        // v a v^-1 shifts the copy index
        let va = bswr_mul(n, (&v.0, v.1), (&a.0, a.1)).unwrap();
        let vi = bswr_inv(n, (&v.0, v.1)).unwrap();
        let vav = bswr_mul(n, (&va.0, va.1), (&vi.0, vi.1)).unwrap();
        assert_eq!(vav.0.get(&1), Some(&NAdic::from_int(1)));
    }
}
