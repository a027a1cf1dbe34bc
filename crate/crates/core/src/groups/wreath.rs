//! Wreath products with shift group Z or Z^2 and fiber Z or Z/dZ.
//!
//! An element is a finite-support base function together with a shift; the
//! shift acts on the base by translating coordinates. Base values are stored
//! reduced (mod d when the fiber is Z/dZ) with zero values absent.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Normalize a fiber value: reduce mod d when d is Some, keep nonzero.
fn norm_fiber(v: i64, d: Option<u64>) -> i64 {
    match d {
        None => v,
        Some(d) => v.rem_euclid(d as i64),
    }
}

fn merge<K: Ord + Copy>(map: &mut BTreeMap<K, i64>, key: K, v: i64, d: Option<u64>) {
    let v = norm_fiber(v, d);
    if v == 0 {
        return;
    }
    let cur = map.remove(&key).unwrap_or(0);
    let sum = norm_fiber(cur + v, d);
    if sum != 0 {
        map.insert(key, sum);
    }
}

pub type WzBase = BTreeMap<i64, i64>;
pub type Wz2Base = BTreeMap<(i64, i64), i64>;

pub fn wz_mul(d: Option<u64>, a: (&WzBase, i64), b: (&WzBase, i64)) -> Result<(WzBase, i64)> {
    let (fa, sa) = a;
    let (fb, sb) = b;
    let mut out = fa.clone();
    for (&k, &v) in fb {
        let nk = k.checked_add(sa).ok_or(Error::Overflow("wreath position"))?;
        merge(&mut out, nk, v, d);
    }
    let s = sa.checked_add(sb).ok_or(Error::Overflow("wreath shift"))?;
    Ok((out, s))
}

pub fn wz_inv(d: Option<u64>, a: (&WzBase, i64)) -> Result<(WzBase, i64)> {
    let (f, s) = a;
    let mut out = WzBase::new();
    for (&k, &v) in f {
        let nk = k.checked_sub(s).ok_or(Error::Overflow("wreath position"))?;
        merge(&mut out, nk, -v, d);
    }
    Ok((out, -s))
}

pub fn wz2_mul(
    d: Option<u64>,
    a: (&Wz2Base, (i64, i64)),
    b: (&Wz2Base, (i64, i64)),
) -> Result<(Wz2Base, (i64, i64))> {
    let (fa, sa) = a;
    let (fb, sb) = b;
    let mut out = fa.clone();
    for (&(x, y), &v) in fb {
        let nx = x.checked_add(sa.0).ok_or(Error::Overflow("wreath position"))?;
        let ny = y.checked_add(sa.1).ok_or(Error::Overflow("wreath position"))?;
        merge(&mut out, (nx, ny), v, d);
    }
    let s = (
        sa.0.checked_add(sb.0).ok_or(Error::Overflow("wreath shift"))?,
        sa.1.checked_add(sb.1).ok_or(Error::Overflow("wreath shift"))?,
    );
    Ok((out, s))
}

pub fn wz2_inv(d: Option<u64>, a: (&Wz2Base, (i64, i64))) -> Result<(Wz2Base, (i64, i64))> {
    let (f, s) = a;
    let mut out = Wz2Base::new();
    for (&(x, y), &v) in f {
        let nx = x.checked_sub(s.0).ok_or(Error::Overflow("wreath position"))?;
        let ny = y.checked_sub(s.1).ok_or(Error::Overflow("wreath position"))?;
        merge(&mut out, (nx, ny), -v, d);
    }
    Ok((out, (-s.0, -s.1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lamplighter_normal_forms() {
        // a = (delta_0, 0), t = (0, 1) in L_2
        let d = Some(2);
        let mut a_base = WzBase::new();
        a_base.insert(0, 1);
        let a = (a_base, 0i64);
        let t = (WzBase::new(), 1i64);
        let at = wz_mul(d, (&a.0, a.1), (&t.0, t.1)).unwrap();
        let ta = wz_mul(d, (&t.0, t.1), (&a.0, a.1)).unwrap();
        assert_eq!(at.0.get(&0), Some(&1));
        assert_eq!(at.1, 1);
        assert_eq!(ta.0.get(&1), Some(&1));
        assert_eq!(ta.1, 1);
        assert_ne!(at, ta, "a*t and t*a differ in L_2");
    }

    #[test]
    fn torsion_in_fiber() {
        let d = Some(2);
        let mut a_base = WzBase::new();
        a_base.insert(0, 1);
        let a = (a_base, 0i64);
        let aa = wz_mul(d, (&a.0, a.1), (&a.0, a.1)).unwrap();
        assert!(aa.0.is_empty() && aa.1 == 0, "a^2 = 1 in L_2");
    }

    #[test]
    fn inverse_law_z_fiber() {
        let mut f = WzBase::new();
        f.insert(-1, 3);
        f.insert(2, -1);
        let g = (f, 4i64);
        let gi = wz_inv(None, (&g.0, g.1)).unwrap();
        let e = wz_mul(None, (&g.0, g.1), (&gi.0, gi.1)).unwrap();
        assert!(e.0.is_empty() && e.1 == 0);
    }

    #[test]
    fn z2_shift_acts_on_both_coordinates() {
        let mut f = Wz2Base::new();
        f.insert((0, 0), 1);
        let a = (f, (0i64, 0i64));
        let t2 = (Wz2Base::new(), (0i64, 1i64));
        let conj = wz2_mul(None, (&t2.0, t2.1), (&a.0, a.1)).unwrap();
        let t2i = wz2_inv(None, (&t2.0, t2.1)).unwrap();
        let conj = wz2_mul(None, (&conj.0, conj.1), (&t2i.0, t2i.1)).unwrap();
        assert_eq!(conj.0.get(&(0, 1)), Some(&1));
        assert_eq!(conj.1, (0, 0));
    }
}
