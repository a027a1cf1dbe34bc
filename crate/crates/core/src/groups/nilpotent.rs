//! Free nilpotent groups of class at most 3 via Hall basic commutators and
//! collection.
//!
//! Elements are exponent vectors over the Hall basis, stored sparsely and
//! sorted by basis index. The basis is ordered by weight, then
//! lexicographically. Writing [a, b] = a^-1 b^-1 a b (so b a = a b [b, a]),
//! the basis symbols are: generators x0 < x1 < ...; weight-2 symbols
//! Comm2(i, j) = [xj, xi] for i > j, ordered by (i, j); weight-3 symbols
//! Comm3(i, j, k) = [Comm2(i, j), xk] for i > j, k >= j, ordered by
//! (i, j, k). With this orientation the value of the word
//! x y x^-1 y^-1 in the Heisenberg group is Comm2(1, 0)^(+1).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HallSymbol {
    Gen(u32),
    Comm2(u32, u32),
    Comm3(u32, u32, u32),
}

impl HallSymbol {
    pub fn weight(&self) -> u32 {
        match self {
            HallSymbol::Gen(_) => 1,
            HallSymbol::Comm2(..) => 2,
            HallSymbol::Comm3(..) => 3,
        }
    }
}

/// Collection context for a fixed class and rank.
pub struct NilCtx {
    pub class: u32,
    pub rank: usize,
}

fn c2i64(x: i64) -> Result<i64> {
    // binomial(x, 2), valid for all integers
    let v = (x as i128) * ((x as i128) - 1) / 2;
    i64::try_from(v).map_err(|_| Error::Overflow("binomial"))
}

fn mul_i64(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("exponent product"))
}

fn add_i64(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("exponent sum"))
}

impl NilCtx {
    pub fn new(class: u32, rank: usize) -> Result<Self> {
        if !(1..=3).contains(&class) || rank == 0 {
            return Err(Error::Unsupported(format!(
                "free nilpotent class {class} rank {rank} not supported"
            )));
        }
        if class == 3 && rank > 4 {
            return Err(Error::Unsupported(
                "class 3 supported only up to rank 4".into(),
            ));
        }
        Ok(NilCtx { class, rank })
    }

    fn n2(&self) -> usize {
        self.rank * (self.rank - 1) / 2
    }

    fn n3(&self) -> usize {
        // for each i > j, third index k ranges over j..rank
        let m = self.rank as u64;
        let mut total = 0u64;
        for j in 0..m {
            for _i in (j + 1)..m {
                total += m - j;
            }
        }
        total as usize
    }

    pub fn basis_len(&self) -> usize {
        match self.class {
            1 => self.rank,
            2 => self.rank + self.n2(),
            _ => self.rank + self.n2() + self.n3(),
        }
    }

    pub fn idx2(&self, i: u32, j: u32) -> u32 {
        debug_assert!(i > j);
        self.rank as u32 + i * (i - 1) / 2 + j
    }

    pub fn idx3(&self, i: u32, j: u32, k: u32) -> u32 {
        debug_assert!(i > j && k >= j);
        let m = self.rank as u32;
        // (i, j) pairs in lexicographic order, each contributing (m - j)
        // third indices
        let mut off = 0;
        for ii in 1..m {
            for jj in 0..ii {
                if (ii, jj) < (i, j) {
                    off += m - jj;
                }
            }
        }
        m + self.n2() as u32 + off + (k - j)
    }

    pub fn symbol(&self, idx: u32) -> HallSymbol {
        let m = self.rank as u32;
        if idx < m {
            return HallSymbol::Gen(idx);
        }
        let n2 = self.n2() as u32;
        if idx < m + n2 {
            let off = idx - m;
            // invert i*(i-1)/2 + j
            let mut i = 1;
            while (i + 1) * i / 2 <= off {
                i += 1;
            }
            let j = off - i * (i - 1) / 2;
            return HallSymbol::Comm2(i, j);
        }
        let mut off = idx - m - n2;
        for ii in 1..m {
            for jj in 0..ii {
                let span = m - jj;
                if off < span {
                    return HallSymbol::Comm3(ii, jj, jj + off);
                }
                off -= span;
            }
        }
        unreachable!("basis index out of range")
    }

    pub fn weight(&self, idx: u32) -> u32 {
        self.symbol(idx).weight()
    }

    /// Straightened Hall commutator [b, a] = b^-1 a^-1 b a for basis symbols
    /// with index(b) > index(a), as a list of (basis index, coefficient);
    /// empty when the weight exceeds the class.
    fn comm(&self, b: u32, a: u32) -> Result<Vec<(u32, i64)>> {
        let bs = self.symbol(b);
        let as_ = self.symbol(a);
        let w = bs.weight() + as_.weight();
        if w > self.class {
            return Ok(Vec::new());
        }
        match (bs, as_) {
            // [xi, xj] = Comm2(i, j)^-1 since Comm2(i, j) = [xj, xi]
            (HallSymbol::Gen(i), HallSymbol::Gen(j)) => Ok(vec![(self.idx2(i, j), -1)]),
            (HallSymbol::Comm2(i, j), HallSymbol::Gen(k)) => {
                // [Comm2(i,j), xk]: basic when k >= j, else straighten with
                // the Jacobi identity modulo weight 4:
                // [[xj,xi],xk] = Comm3(i,k,j) * Comm3(j,k,i)^-1 for k < j
                if k >= j {
                    Ok(vec![(self.idx3(i, j, k), 1)])
                } else {
                    Ok(vec![(self.idx3(i, k, j), 1), (self.idx3(j, k, i), -1)])
                }
            }
            _ => Ok(Vec::new()),
        }
    }

    /// Corrections produced when the block b^be is moved right past a^ae,
    /// i.e. b^be a^ae = a^ae b^be * corrections, using
    /// B^b A^a = A^a B^b t^(ab) [t,A]^(b*C(a,2)) [t,B]^(a*C(b,2)) with
    /// t = [B, A].
    fn swap_corrections(&self, b: u32, be: i64, a: u32, ae: i64) -> Result<Vec<(u32, i64)>> {
        let mut out = Vec::new();
        let e = mul_i64(be, ae)?;
        for (sym, c) in self.comm(b, a)? {
            out.push((sym, mul_i64(c, e)?));
        }
        // second-order terms only arise for generator-generator swaps, where
        // t = Comm2(i,j)^-1, so [t, xj] = Comm3(i,j,j)^-1 and
        // [t, xi] = Comm3(i,j,i)^-1
        if let (HallSymbol::Gen(i), HallSymbol::Gen(j)) = (self.symbol(b), self.symbol(a)) {
            if self.class >= 3 {
                out.push((self.idx3(i, j, j), -mul_i64(be, c2i64(ae)?)?));
                out.push((self.idx3(i, j, i), -mul_i64(ae, c2i64(be)?)?));
            }
        }
        out.retain(|&(_, c)| c != 0);
        Ok(out)
    }

    /// Collect an arbitrary symbol sequence into the unique normal form.
    pub fn collect(&self, seq: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let mut v: Vec<(u32, i64)> = Vec::with_capacity(seq.len());
        for &(s, e) in seq {
            push_merge(&mut v, s, e)?;
        }
        let mut i = 0;
        while i + 1 < v.len() {
            let (b, be) = v[i];
            let (a, ae) = v[i + 1];
            if b <= a {
                i += 1;
                continue;
            }
            let corr = self.swap_corrections(b, be, a, ae)?;
            let mut repl = vec![(a, ae), (b, be)];
            repl.extend(corr);
            let tail: Vec<(u32, i64)> = v.drain(i..).skip(2).collect();
            let mut rebuilt = v;
            for (s, e) in repl.into_iter().chain(tail) {
                push_merge(&mut rebuilt, s, e)?;
            }
            v = rebuilt;
            i = i.saturating_sub(2);
        }
        Ok(v)
    }

    pub fn multiply(&self, a: &[(u32, i64)], b: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let mut seq = a.to_vec();
        seq.extend_from_slice(b);
        self.collect(&seq)
    }

    pub fn invert(&self, a: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let seq: Vec<(u32, i64)> = a.iter().rev().map(|&(s, e)| (s, -e)).collect();
        self.collect(&seq)
    }

    pub fn power(&self, a: &[(u32, i64)], e: i64) -> Result<Vec<(u32, i64)>> {
        // scale-by-exponent is not linear in class >= 2; do it by repeated
        // squaring on the collected form
        if e == 0 {
            return Ok(Vec::new());
        }
        let base = if e < 0 { self.invert(a)? } else { a.to_vec() };
        let mut n = e.unsigned_abs();
        let mut acc: Vec<(u32, i64)> = Vec::new();
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

    /// Group commutator a^-1 b^-1 a b of two collected elements.
    pub fn commutator(&self, a: &[(u32, i64)], b: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let ai = self.invert(a)?;
        let bi = self.invert(b)?;
        let t = self.multiply(&ai, &bi)?;
        let t = self.multiply(&t, a)?;
        self.multiply(&t, b)
    }

    /// Dense exponent vector of a sparse element.
    pub fn densify(&self, a: &[(u32, i64)]) -> Vec<i64> {
        let mut out = vec![0i64; self.basis_len()];
        for &(s, e) in a {
            out[s as usize] = e;
        }
        out
    }

    /// Exponent-sum projection to the abelianization Z^rank.
    pub fn ab_coords(&self, a: &[(u32, i64)]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank];
        for &(s, e) in a {
            if (s as usize) < self.rank {
                out[s as usize] = e;
            }
        }
        out
    }

    /// Image under the generator-squaring endomorphism xi -> xi^2.
    pub fn square_endo(&self, a: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let mut images: Vec<Option<Vec<(u32, i64)>>> = vec![None; self.basis_len()];
        let mut image_of = |ctx: &NilCtx, idx: u32| -> Result<Vec<(u32, i64)>> {
            if let Some(v) = &images[idx as usize] {
                return Ok(v.clone());
            }
            let v = match ctx.symbol(idx) {
                HallSymbol::Gen(i) => vec![(i, 2)],
                HallSymbol::Comm2(i, j) => ctx.commutator(&[(j, 2)], &[(i, 2)])?,
                HallSymbol::Comm3(i, j, k) => {
                    let inner = ctx.commutator(&[(j, 2)], &[(i, 2)])?;
                    ctx.commutator(&inner, &[(k, 2)])?
                }
            };
            images[idx as usize] = Some(v.clone());
            Ok(v)
        };
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for &(s, e) in a {
            let img = image_of(self, s)?;
            let powered = self.power(&img, e)?;
            acc = self.multiply(&acc, &powered)?;
        }
        Ok(acc)
    }

    /// Preimage under the squaring endomorphism, if any. The exponent map is
    /// triangular with diagonal 2^weight, so solve coordinate by coordinate.
    pub fn square_endo_preimage(&self, h: &[(u32, i64)]) -> Result<Option<Vec<(u32, i64)>>> {
        let len = self.basis_len();
        let target = self.densify(h);
        let mut e = vec![0i64; len];
        for idx in 0..len {
            let partial: Vec<(u32, i64)> = e[..idx]
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x != 0)
                .map(|(s, &x)| (s as u32, x))
                .collect();
            let img = self.densify(&self.square_endo(&partial)?);
            let scale = 1i64 << self.weight(idx as u32);
            let delta = target[idx] - img[idx];
            if delta % scale != 0 {
                return Ok(None);
            }
            e[idx] = delta / scale;
        }
        let sparse: Vec<(u32, i64)> = e
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x != 0)
            .map(|(s, &x)| (s as u32, x))
            .collect();
        if self.densify(&self.square_endo(&sparse)?) == target {
            Ok(Some(sparse))
        } else {
            Ok(None)
        }
    }

    /// Map an element through a generator substitution into another context.
    /// `images[i]` is the image of generator i, already collected in `target`.
    pub fn substitute(
        &self,
        target: &NilCtx,
        images: &[Vec<(u32, i64)>],
        a: &[(u32, i64)],
    ) -> Result<Vec<(u32, i64)>> {
        if images.len() != self.rank {
            return Err(Error::ArityMismatch {
                expected: self.rank,
                got: images.len(),
            });
        }
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for &(s, e) in a {
            let img = match self.symbol(s) {
                HallSymbol::Gen(i) => images[i as usize].clone(),
                HallSymbol::Comm2(i, j) => {
                    target.commutator(&images[j as usize], &images[i as usize])?
                }
                HallSymbol::Comm3(i, j, k) => {
                    let inner = target.commutator(&images[j as usize], &images[i as usize])?;
                    target.commutator(&inner, &images[k as usize])?
                }
            };
            let powered = target.power(&img, e)?;
            acc = target.multiply(&acc, &powered)?;
        }
        Ok(acc)
    }
}

fn push_merge(v: &mut Vec<(u32, i64)>, s: u32, e: i64) -> Result<()> {
    if e == 0 {
        return Ok(());
    }
    match v.last_mut() {
        Some((ps, pe)) if *ps == s => {
            *pe = add_i64(*pe, e)?;
            if *pe == 0 {
                v.pop();
            }
        }
        _ => v.push((s, e)),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx22() -> NilCtx {
        NilCtx::new(2, 2).unwrap()
    }

    #[test]
    fn heisenberg_commutator_is_basis_element() {
        let ctx = ctx22();
        // word x y x^-1 y^-1 = [x^-1, y^-1] = c2 in class 2
        let w = ctx
            .collect(&[(0, 1), (1, 1), (0, -1), (1, -1)])
            .unwrap();
        assert_eq!(w, vec![(ctx.idx2(1, 0), 1)]);
    }

    #[test]
    fn basis_orientation() {
        let ctx = ctx22();
        // Comm2(1, 0) = [x0, x1] = x0^-1 x1^-1 x0 x1
        let c = ctx.commutator(&[(0, 1)], &[(1, 1)]).unwrap();
        assert_eq!(c, vec![(ctx.idx2(1, 0), 1)]);
        let c = ctx.commutator(&[(1, 1)], &[(0, 1)]).unwrap();
        assert_eq!(c, vec![(ctx.idx2(1, 0), -1)]);
    }

    #[test]
    fn center_commutes_class2() {
        let ctx = ctx22();
        let z = vec![(ctx.idx2(1, 0), 1)];
        for g in [vec![(0, 1)], vec![(1, 1)], vec![(0, 2), (1, -1)]] {
            let a = ctx.multiply(&z, &g).unwrap();
            let b = ctx.multiply(&g, &z).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let ctx = NilCtx::new(3, 2).unwrap();
        let g = vec![(0, 1), (1, 2)];
        let g_collected = ctx.collect(&g).unwrap();
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for k in 1..=6i64 {
            acc = ctx.multiply(&acc, &g_collected).unwrap();
            assert_eq!(ctx.power(&g_collected, k).unwrap(), acc, "power {k}");
        }
        let inv = ctx.invert(&g_collected).unwrap();
        assert_eq!(ctx.power(&g_collected, -3).unwrap(), ctx.power(&inv, 3).unwrap());
    }

    #[test]
    fn associativity_spot_class3() {
        let ctx = NilCtx::new(3, 3).unwrap();
        let elems = [
            vec![(0, 1)],
            vec![(1, -1)],
            vec![(2, 2)],
            vec![(0, 1), (1, 1)],
            vec![(1, 1), (2, -2)],
        ];
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let a = ctx.collect(a).unwrap();
                    let b = ctx.collect(b).unwrap();
                    let c = ctx.collect(c).unwrap();
                    let ab_c = ctx.multiply(&ctx.multiply(&a, &b).unwrap(), &c).unwrap();
                    let a_bc = ctx.multiply(&a, &ctx.multiply(&b, &c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn inverse_law() {
        let ctx = NilCtx::new(3, 2).unwrap();
        let g = ctx.collect(&[(0, 2), (1, -1), (0, 1)]).unwrap();
        let gi = ctx.invert(&g).unwrap();
        assert!(ctx.multiply(&g, &gi).unwrap().is_empty());
        assert!(ctx.multiply(&gi, &g).unwrap().is_empty());
    }

    #[test]
    fn squaring_endo_heisenberg() {
        let ctx = ctx22();
        let z = ctx.idx2(1, 0);
        // phi(x^a y^b z^c) = x^2a y^2b z^(4c + ab * ...): check on basis
        let img_z = ctx.square_endo(&[(z, 1)]).unwrap();
        assert_eq!(img_z, vec![(z, 4)]);
        let g = ctx.collect(&[(0, 1), (1, 1)]).unwrap();
        let img = ctx.square_endo(&g).unwrap();
        let pre = ctx.square_endo_preimage(&img).unwrap();
        assert_eq!(pre, Some(g));
        // x has no preimage
        assert_eq!(ctx.square_endo_preimage(&[(0, 1)]).unwrap(), None);
    }

    #[test]
    fn idx3_roundtrip() {
        let ctx = NilCtx::new(3, 4).unwrap();
        for idx in 0..ctx.basis_len() as u32 {
            let sym = ctx.symbol(idx);
            let back = match sym {
                HallSymbol::Gen(i) => i,
                HallSymbol::Comm2(i, j) => ctx.idx2(i, j),
                HallSymbol::Comm3(i, j, k) => ctx.idx3(i, j, k),
            };
            assert_eq!(back, idx, "symbol {sym:?}");
        }
    }
}
