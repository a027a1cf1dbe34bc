//! Shared test oracles, independent of the implementation paths they check.

#![allow(dead_code)]

pub mod oracles {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::{One, Zero};

    /// 3x3 upper unitriangular integer matrices: a faithful representation
    /// of the Heisenberg group N_{2,2} with x -> I+E12, y -> I+E23.
    #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct Unitri3(pub [[i128; 3]; 3]);

    impl Unitri3 {
        pub fn identity() -> Self {
            Unitri3([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        }

        pub fn gen_x() -> Self {
            Unitri3([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        }

        pub fn gen_y() -> Self {
            Unitri3([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
        }

        pub fn mul(&self, other: &Unitri3) -> Unitri3 {
            let mut out = [[0i128; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        out[i][j] += self.0[i][k] * other.0[k][j];
                    }
                }
            }
            Unitri3(out)
        }

        pub fn inv(&self) -> Unitri3 {
            // inverse of [[1,a,c],[0,1,b],[0,0,1]] is [[1,-a,ab-c],[0,1,-b],[0,0,1]]
            let a = self.0[0][1];
            let b = self.0[1][2];
            let c = self.0[0][2];
            Unitri3([[1, -a, a * b - c], [0, 1, -b], [0, 0, 1]])
        }
    }

    /// Evaluate a word given as (letter, exponent) pairs over a 2-tuple of
    /// matrices.
    pub fn unitri_eval(word: &[(u32, i64)], x: &Unitri3, y: &Unitri3) -> Unitri3 {
        let mut acc = Unitri3::identity();
        for &(l, e) in word {
            let g = if l == 0 { x.clone() } else { y.clone() };
            let g = if e < 0 { g.inv() } else { g };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&g);
            }
        }
        acc
    }

    /// Free-rewriting oracle for BS(1,n) = <a, b | b a b^-1 = a^n>.
    /// Rewrites a word over {a, b} runs to the canonical HNN normal form
    /// b^-p a^q b^r (p, r >= 0; if p > 0 and r > 0 then n does not divide q).
    pub fn bs_rewrite(n: i128, word: &[(u32, i64)]) -> (i128, i128, i128) {
        // runs of ('a' = 0, 'b' = 1)
        let mut runs: Vec<(u32, i128)> = word.iter().map(|&(l, e)| (l, e as i128)).collect();
        let npow = |e: i128| -> i128 { n.pow(u32::try_from(e).expect("exponent fits")) };
        loop {
            // merge and drop zeros
            let mut merged: Vec<(u32, i128)> = Vec::with_capacity(runs.len());
            for (l, e) in runs {
                if e == 0 {
                    continue;
                }
                match merged.last_mut() {
                    Some((pl, pe)) if *pl == l => {
                        *pe += e;
                        if *pe == 0 {
                            merged.pop();
                        }
                    }
                    _ => merged.push((l, e)),
                }
            }
            runs = merged;
            // b^e a^k -> a^(k n^e) b^e for e > 0; a^k b^-f -> b^-f a^(k n^f)
            let mut changed = false;
            for i in 0..runs.len().saturating_sub(1) {
                let (l1, e1) = runs[i];
                let (l2, e2) = runs[i + 1];
                if l1 == 1 && e1 > 0 && l2 == 0 {
                    runs[i] = (0, e2 * npow(e1));
                    runs[i + 1] = (1, e1);
                    changed = true;
                    break;
                }
                if l1 == 0 && l2 == 1 && e2 < 0 {
                    runs[i] = (1, e2);
                    runs[i + 1] = (0, e1 * npow(-e2));
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            break;
        }
        // now of the form b^-p a^q b^r (some runs possibly absent)
        let mut p = 0i128;
        let mut q = 0i128;
        let mut r = 0i128;
        let mut stage = 0;
        for &(l, e) in &runs {
            match (stage, l) {
                (0, 1) if e < 0 => {
                    p = -e;
                    stage = 1;
                }
                (0, 0) | (1, 0) => {
                    q = e;
                    stage = 2;
                }
                (0, 1) | (1, 1) | (2, 1) if e > 0 => {
                    r = e;
                    stage = 3;
                }
                _ => panic!("bs rewrite failed to reach normal form: {runs:?}"),
            }
        }
        while p > 0 && r > 0 && q % n == 0 {
            p -= 1;
            r -= 1;
            q /= n;
        }
        (p, q, r)
    }

    /// Positioned-letter rewriting oracle for wreath products over Z.
    /// Rewrites a word over {a, t} to the canonical list of per-position
    /// lamp exponents plus the shift. `d` reduces lamp values mod d.
    pub fn wreath_rewrite(d: Option<i64>, word: &[(u32, i64)]) -> (Vec<(i64, i64)>, i64) {
        let mut pos = 0i64;
        let mut lamps: Vec<(i64, i64)> = Vec::new();
        for &(l, e) in word {
            if l == 1 {
                pos += e;
            } else {
                lamps.push((pos, e));
            }
        }
        lamps.sort_by_key(|&(p, _)| p);
        let mut out: Vec<(i64, i64)> = Vec::new();
        for (p, e) in lamps {
            match out.last_mut() {
                Some((lp, le)) if *lp == p => *le += e,
                _ => out.push((p, e)),
            }
        }
        let out = out
            .into_iter()
            .filter_map(|(p, e)| {
                let e = match d {
                    Some(d) => e.rem_euclid(d),
                    None => e,
                };
                (e != 0).then_some((p, e))
            })
            .collect();
        (out, pos)
    }

    /// Evaluation of a 2-letter word in the finite wreath product
    /// fiber wr Z/mZ with dense arrays; faithful for words of length < m/2.
    pub fn finite_wreath_eval(d: Option<i64>, m: usize, word: &[(u32, i64)]) -> (Vec<i64>, usize) {
        let reduce = |v: i64| match d {
            Some(d) => v.rem_euclid(d),
            None => v,
        };
        let mut base = vec![0i64; m];
        let mut shift = 0usize;
        for &(l, e) in word {
            for _ in 0..e.unsigned_abs() {
                if l == 1 {
                    // multiply by t or t^-1: only changes the shift
                    shift = (shift + if e > 0 { 1 } else { m - 1 }) % m;
                } else {
                    let delta = if e > 0 { 1 } else { -1 };
                    base[shift] = reduce(base[shift] + delta);
                }
            }
        }
        (base, shift)
    }

    /// Free nilpotent Lie algebra of class 3 over Q in Hall coordinates,
    /// with group multiplication via the degree-3 Baker-Campbell-Hausdorff
    /// formula. Basis layout matches the group side: generators first, then
    /// c2(i,j) = [E_j, E_i] for i > j by (i,j), then c3(i,j,k) =
    /// [c2(i,j), E_k] for k >= j by (i,j,k).
    pub struct LieCtx {
        pub rank: usize,
    }

    pub type LieVec = Vec<BigRational>;

    impl LieCtx {
        pub fn new(rank: usize) -> Self {
            LieCtx { rank }
        }

        pub fn n2(&self) -> usize {
            self.rank * (self.rank - 1) / 2
        }

        pub fn dim(&self) -> usize {
            let m = self.rank;
            let mut n3 = 0;
            for j in 0..m {
                for _i in (j + 1)..m {
                    n3 += m - j;
                }
            }
            m + self.n2() + n3
        }

        pub fn zero(&self) -> LieVec {
            vec![BigRational::zero(); self.dim()]
        }

        pub fn gen(&self, i: usize) -> LieVec {
            let mut v = self.zero();
            v[i] = BigRational::one();
            v
        }

        pub fn idx2(&self, i: usize, j: usize) -> usize {
            self.rank + i * (i - 1) / 2 + j
        }

        pub fn idx3(&self, i: usize, j: usize, k: usize) -> usize {
            let m = self.rank;
            let mut off = 0;
            for ii in 1..m {
                for jj in 0..ii {
                    if (ii, jj) < (i, j) {
                        off += m - jj;
                    }
                }
            }
            m + self.n2() + off + (k - j)
        }

        fn weight(&self, idx: usize) -> usize {
            if idx < self.rank {
                1
            } else if idx < self.rank + self.n2() {
                2
            } else {
                3
            }
        }

        /// Bracket of two basis elements as a sparse vector.
        fn bracket_basis(&self, a: usize, b: usize) -> Vec<(usize, BigRational)> {
            if a == b {
                return vec![];
            }
            if self.weight(a) + self.weight(b) > 3 {
                return vec![];
            }
            if a > b {
                return self
                    .bracket_basis(b, a)
                    .into_iter()
                    .map(|(i, c)| (i, -c))
                    .collect();
            }
            // now a < b
            if self.weight(a) == 1 && self.weight(b) == 1 {
                // [E_a, E_b] with a < b: c2(b, a) = [E_a, E_b]
                return vec![(self.idx2(b, a), BigRational::one())];
            }
            if self.weight(a) == 1 && self.weight(b) == 2 {
                // [E_k, c2(i,j)] = -[c2(i,j), E_k]
                let (i, j) = self.unidx2(b);
                let k = a;
                let terms = if k >= j {
                    vec![(self.idx3(i, j, k), BigRational::one())]
                } else {
                    // [[E_j,E_i],E_k] = c3(i,k,j) - c3(j,k,i)  (Jacobi)
                    vec![
                        (self.idx3(i, k, j), BigRational::one()),
                        (self.idx3(j, k, i), -BigRational::one()),
                    ]
                };
                return terms.into_iter().map(|(x, c)| (x, -c)).collect();
            }
            vec![]
        }

        fn unidx2(&self, idx: usize) -> (usize, usize) {
            let off = idx - self.rank;
            let mut i = 1;
            while (i + 1) * i / 2 <= off {
                i += 1;
            }
            (i, off - i * (i - 1) / 2)
        }

        pub fn bracket(&self, x: &LieVec, y: &LieVec) -> LieVec {
            let mut out = self.zero();
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (b, yb) in y.iter().enumerate() {
                    if yb.is_zero() {
                        continue;
                    }
                    for (idx, c) in self.bracket_basis(a, b) {
                        out[idx] += xa * yb * c;
                    }
                }
            }
            out
        }

        fn add(&self, x: &LieVec, y: &LieVec) -> LieVec {
            x.iter().zip(y).map(|(a, b)| a + b).collect()
        }

        fn scale(&self, x: &LieVec, c: BigRational) -> LieVec {
            x.iter().map(|a| a * &c).collect()
        }

        /// Degree-3 BCH: log(e^X e^Y).
        pub fn bch(&self, x: &LieVec, y: &LieVec) -> LieVec {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let twelfth = BigRational::new(BigInt::one(), BigInt::from(12));
            let xy = self.bracket(x, y);
            let xxy = self.bracket(x, &xy);
            let yyx = self.bracket(y, &self.bracket(y, x));
            let mut z = self.add(x, y);
            z = self.add(&z, &self.scale(&xy, half));
            z = self.add(&z, &self.scale(&self.add(&xxy, &yyx), twelfth));
            z
        }

        pub fn neg(&self, x: &LieVec) -> LieVec {
            x.iter().map(|a| -a).collect()
        }

        pub fn eval_word(&self, word: &[(u32, i64)]) -> LieVec {
            let mut acc = self.zero();
            for &(l, e) in word {
                let g = self.gen(l as usize);
                let g = if e < 0 { self.neg(&g) } else { g };
                for _ in 0..e.unsigned_abs() {
                    acc = self.bch(&acc, &g);
                }
            }
            acc
        }

        /// Jacobi identity check on all basis triples; validates the oracle.
        pub fn jacobi_holds(&self) -> bool {
            let dim = self.dim();
            for a in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        let ea = {
                            let mut v = self.zero();
                            v[a] = BigRational::one();
                            v
                        };
                        let eb = {
                            let mut v = self.zero();
                            v[b] = BigRational::one();
                            v
                        };
                        let ec = {
                            let mut v = self.zero();
                            v[c] = BigRational::one();
                            v
                        };
                        let t1 = self.bracket(&self.bracket(&ea, &eb), &ec);
                        let t2 = self.bracket(&self.bracket(&eb, &ec), &ea);
                        let t3 = self.bracket(&self.bracket(&ec, &ea), &eb);
                        let sum = self.add(&self.add(&t1, &t2), &t3);
                        if sum.iter().any(|x| !x.is_zero()) {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

pub mod gen {
    use scottbench::words::Word;

    /// All freely reduced words over k letters with length <= max_len.
    pub fn all_reduced_words(k: usize, max_len: u64) -> Vec<Word> {
        let mut out = Vec::new();
        for w in scottbench::words::reduced_words(k) {
            if w.length() > max_len {
                break;
            }
            out.push(w);
        }
        out
    }
}
