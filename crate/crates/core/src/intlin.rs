//! Exact integer linear algebra: determinants, Smith normal form, basis
//! extension tests, and integer linear solving over arbitrary-precision
//! integers.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::fmt;

/// Dense row-major matrix over arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Input(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Input("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Input("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[idx(k, k)].is_zero() {
                let mut pivot = None;
                for i in k + 1..n {
                    if !a[idx(i, k)].is_zero() {
                        pivot = Some(i);
                        break;
                    }
                }
                match pivot {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)]) / &prev;
                    a[idx(i, j)] = v;
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        Ok(sign * a[idx(n - 1, n - 1)].clone())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation: `s * m * t = d` with `s`, `t`
/// unimodular and `d` diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub d: IntMatrix,
    pub t: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `d` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with deterministic pivoting: at each step the pivot is
/// the entry of smallest nonzero absolute value in the remaining submatrix,
/// ties broken by row then column position.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut s = IntMatrix::identity(rows);
    let mut t = IntMatrix::identity(cols);

    let swap_rows = |d: &mut IntMatrix, s: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..d.cols {
            let tmp = d.at(a, j).clone();
            d.set(a, j, d.at(b, j).clone());
            d.set(b, j, tmp);
        }
        for j in 0..s.cols {
            let tmp = s.at(a, j).clone();
            s.set(a, j, s.at(b, j).clone());
            s.set(b, j, tmp);
        }
    };
    let swap_cols = |d: &mut IntMatrix, t: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..d.rows {
            let tmp = d.at(i, a).clone();
            d.set(i, a, d.at(i, b).clone());
            d.set(i, b, tmp);
        }
        for i in 0..t.rows {
            let tmp = t.at(i, a).clone();
            t.set(i, a, t.at(i, b).clone());
            t.set(i, b, tmp);
        }
    };
    // row[a] -= q * row[b]
    let row_sub = |d: &mut IntMatrix, s: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for j in 0..d.cols {
            let v = d.at(a, j) - q * d.at(b, j);
            d.set(a, j, v);
        }
        for j in 0..s.cols {
            let v = s.at(a, j) - q * s.at(b, j);
            s.set(a, j, v);
        }
    };
    let col_sub = |d: &mut IntMatrix, t: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for i in 0..d.rows {
            let v = d.at(i, a) - q * d.at(i, b);
            d.set(i, a, v);
        }
        for i in 0..t.rows {
            let v = t.at(i, a) - q * t.at(i, b);
            t.set(i, a, v);
        }
    };

    let n = rows.min(cols);
    for k in 0..n {
        'pivot: loop {
            // smallest absolute nonzero entry in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if d.at(i, j).is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) => {
                            if d.at(i, j).abs() < d.at(bi, bj).abs() {
                                Some((i, j))
                            } else {
                                Some((bi, bj))
                            }
                        }
                    };
                }
            }
            let (pi, pj) = match best {
                None => break 'pivot, // trailing submatrix zero
                Some(p) => p,
            };
            swap_rows(&mut d, &mut s, k, pi);
            swap_cols(&mut d, &mut t, k, pj);

            let mut dirty = false;
            for i in k + 1..rows {
                let q = div_round(d.at(i, k), d.at(k, k));
                row_sub(&mut d, &mut s, i, k, &q);
                if !d.at(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                let q = div_round(d.at(k, j), d.at(k, k));
                col_sub(&mut d, &mut t, j, k, &q);
                if !d.at(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot divides the rest of the submatrix?
            let pivot = d.at(k, k).clone();
            let mut fixed = false;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(d.at(i, j) % &pivot).is_zero() {
                        // fold row i into row k to shrink the pivot
                        let minus_one = BigInt::from(-1);
                        row_sub(&mut d, &mut s, k, i, &minus_one);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break 'pivot;
            }
        }
        // zero pivot at k means we are done (remaining block is zero)
        if d.at(k, k).is_zero() {
            break;
        }
        if d.at(k, k).is_negative() {
            // negate row k
            for j in 0..cols {
                let v = -d.at(k, j).clone();
                d.set(k, j, v);
            }
            for j in 0..rows {
                let v = -s.at(k, j).clone();
                s.set(k, j, v);
            }
        }
    }
    SmithDecomposition { s, d, t }
}

/// Rounded division used in elimination: quotient minimizing |a - q*b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num::Integer::div_rem(a, b);
    if r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Do the rows of `rows` (a k x n matrix, k <= n) extend to a basis of Z^n?
/// Decided by the Smith diagonal being all ones.
pub fn extends_to_basis(rows: &IntMatrix) -> Result<bool> {
    if rows.rows() > rows.cols() {
        return Err(Error::Input(format!(
            "extends_to_basis wants k <= n, got {}x{}",
            rows.rows(),
            rows.cols()
        )));
    }
    let snf = smith_normal_form(rows);
    let diag = snf.diagonal();
    Ok(diag.len() == rows.rows() && diag.iter().all(|x| x.is_one()))
}

/// Integer solution `x` of `a * x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::Input("rhs length mismatch".into()));
    }
    let snf = smith_normal_form(a);
    let sb = snf.s.mul_vec(b)?;
    let n = a.cols();
    let r = a.rows().min(n);
    let mut y = vec![BigInt::zero(); n];
    for i in 0..a.rows() {
        if i < r && !snf.d.at(i, i).is_zero() {
            let (q, rem) = num::Integer::div_rem(&sb[i], snf.d.at(i, i));
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !sb[i].is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.t.mul_vec(&y)?))
}

/// Basis (as rows) for the integer kernel {x : a * x = 0}.
pub fn kernel_lattice(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    // kernel is spanned by columns rank..n of T
    (rank..n)
        .map(|j| (0..n).map(|i| snf.t.at(i, j).clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, data).unwrap()
    }

    #[test]
    fn determinant_identity() {
        assert_eq!(IntMatrix::identity(3).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn determinant_diagonal() {
        assert_eq!(
            m(2, 2, &[2, 0, 0, 3]).determinant().unwrap(),
            BigInt::from(6)
        );
    }

    #[test]
    fn determinant_rejects_non_square() {
        assert!(m(2, 3, &[1, 2, 3, 4, 5, 6]).determinant().is_err());
    }

    #[test]
    fn snf_identity() {
        let snf = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(snf.d, IntMatrix::identity(3));
        assert_eq!(snf.s.mul(&IntMatrix::identity(3)).unwrap().mul(&snf.t).unwrap(), snf.d);
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::one(), BigInt::from(6)],
            "diag(2,3) has SNF diag(1,6)"
        );
        assert_eq!(snf.s.mul(&a).unwrap().mul(&snf.t).unwrap(), snf.d);
        assert_eq!(snf.s.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(snf.t.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn extends_to_basis_examples() {
        assert!(extends_to_basis(&m(1, 2, &[1, 0])).unwrap());
        assert!(!extends_to_basis(&m(1, 2, &[2, 0])).unwrap());
        assert!(extends_to_basis(&m(2, 2, &[1, 0, 0, 1])).unwrap());
        assert!(extends_to_basis(&m(3, 2, &[1, 0, 0, 1, 1, 1])).is_err());
    }

    #[test]
    fn solve_simple() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        let b2 = vec![BigInt::from(1), BigInt::from(0)];
        assert!(solve(&a, &b2).unwrap().is_none());
    }

    #[test]
    fn kernel_of_singular() {
        let a = m(2, 2, &[1, 2, 2, 4]);
        let k = kernel_lattice(&a);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!((a.mul_vec(v).unwrap()).iter().all(|x| x.is_zero()));
    }
}
