//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers or reduced
//! rationals. The matrices involved are tiny (rank at most 24) but Smith
//! normal form intermediates can still overflow machine words, so no
//! fixed-width arithmetic is used.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Entrywise multiplication by an integer.
    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `v^T · self · w` for integer vectors.
    pub fn bilinear(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            let mut s = BigInt::zero();
            for j in 0..self.cols {
                if !w[j].is_zero() {
                    s += self.get(i, j) * &w[j];
                }
            }
            acc += &v[i] * s;
        }
        acc
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        snf(self).rank()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_dst += k * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(src, c) * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col_dst += k * col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, src) * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
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
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix; entries are always stored reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::from(&IntMatrix::identity(n));
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for c in 0..n {
                    a.data.swap(piv * n + c, col * n + c);
                    inv.data.swap(piv * n + c, col * n + c);
                }
            }
            let p = a.get(col, col).clone();
            for c in 0..n {
                let x = a.get(col, c) / &p;
                a.set(col, c, x);
                let y = inv.get(col, c) / &p;
                inv.set(col, c, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let x = a.get(r, c) - &f * a.get(col, c);
                    a.set(r, c, x);
                    let y = inv.get(r, c) - &f * inv.get(col, c);
                    inv.set(r, c, y);
                }
            }
        }
        Some(inv)
    }

    /// Returns the integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.data.iter().all(|x| x.is_integer()) {
            return None;
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }
}

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`.
///
/// `v_inv` is maintained alongside `v` so callers can read off row-space
/// bases without a second inversion.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d_1 | d_2 | ...`, length `min(rows, cols)`.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf { d: a, u, v, v_inv };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / &pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / &pivot;
                let neg = -&q;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                v_inv.add_row_multiple(t, j, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            if let Some(i) = bad {
                let one = BigInt::one();
                a.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { d: a, u, v, v_inv }
}

/// Sylvester inertia `(n_plus, n_minus, n_zero)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_negative_definite(&self) -> bool {
        self.plus == 0 && self.zero == 0
    }

    pub fn is_definite(&self) -> bool {
        self.zero == 0 && (self.plus == 0 || self.minus == 0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }

    /// `n_plus - n_minus` reduced mod 8.
    pub fn mod8(&self) -> u8 {
        (self.plus as i64 - self.minus as i64).rem_euclid(8) as u8
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature {
            plus: self.plus + o.plus,
            minus: self.minus + o.minus,
            zero: self.zero + o.zero,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({}, {})", self.plus, self.minus)
        } else {
            write!(f, "({}, {}, {})", self.plus, self.minus, self.zero)
        }
    }
}

/// Inertia by exact symmetric Gaussian elimination over Q.
///
/// A zero diagonal with a nonzero off-diagonal entry `a_ij` is handled by
/// the congruence `x_i -> x_i + x_j`, which puts `2 a_ij` on the diagonal.
pub fn signature(g: &IntMatrix) -> Signature {
    assert!(g.is_symmetric(), "signature of non-symmetric matrix");
    let n = g.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(g.get(i, j).clone())).collect())
        .collect();
    let (mut plus, mut minus) = (0, 0);
    let mut p = 0;
    while p < n {
        let piv = match (p..n).find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let off = (p..n).find_map(|i| (p..n).find(|&j| j != i && !a[i][j].is_zero()).map(|j| (i, j)));
                let Some((i, j)) = off else { break };
                // x_i -> x_i + x_j
                for k in 0..n {
                    let v = a[i][k].clone() + a[j][k].clone();
                    a[i][k] = v;
                }
                for k in 0..n {
                    let v = a[k][i].clone() + a[k][j].clone();
                    a[k][i] = v;
                }
                i
            }
        };
        a.swap(p, piv);
        for row in a.iter_mut() {
            row.swap(p, piv);
        }
        let pivot = a[p][p].clone();
        if pivot.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        for i in p + 1..n {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &pivot;
            for j in p + 1..n {
                let v = &a[i][j] - &f * &a[p][j];
                a[i][j] = v;
            }
            a[i][p] = BigRational::zero();
        }
        for j in p + 1..n {
            a[p][j] = BigRational::zero();
        }
        p += 1;
    }
    Signature {
        plus,
        minus,
        zero: n - plus - minus,
    }
}

/// Saturated basis of the integral kernel `{x : M x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = snf(m);
    let r = s.rank();
    (r..m.cols).map(|j| s.v.column(j)).collect()
}

/// Basis of `(Q · rowspace) ∩ Z^n` for the rows of `b`.
pub fn saturate_rows(b: &IntMatrix) -> IntMatrix {
    let s = snf(b);
    let r = s.rank();
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| s.v_inv.row(i).to_vec()).collect();
    IntMatrix::from_big_rows(rows, b.cols)
}

/// Rows completing the (saturated) rows of `b` to a unimodular basis of `Z^n`.
pub fn complement_rows(b: &IntMatrix) -> IntMatrix {
    let s = snf(b);
    let r = s.rank();
    let rows: Vec<Vec<BigInt>> = (r..b.cols).map(|i| s.v_inv.row(i).to_vec()).collect();
    IntMatrix::from_big_rows(rows, b.cols)
}

/// True when the rows of `b` are independent and span a primitive sublattice.
pub fn rows_primitive(b: &IntMatrix) -> bool {
    let s = snf(b);
    s.rank() == b.rows && s.divisors().iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.det().abs(), BigInt::one());
        assert_eq!(s.v.det().abs(), BigInt::one());
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let d = s.divisors();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn snf_small_cases() {
        let id = IntMatrix::identity(2);
        let s = snf(&id);
        assert_eq!(s.d, id);
        assert_eq!(s.u, id);
        assert_eq!(s.v, id);

        let u = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(snf(&u).divisors(), vec![BigInt::from(1), BigInt::from(1)]);

        let u2 = IntMatrix::from_rows(&[[0, 2], [2, 0]]);
        assert_eq!(snf(&u2).divisors(), vec![BigInt::from(2), BigInt::from(2)]);
        check_snf(&u2);
    }

    #[test]
    fn snf_rectangular_and_degenerate() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        check_snf(&m);
        assert_eq!(
            snf(&m).divisors(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let r = IntMatrix::from_rows(&[[1, 2, 3, 4], [2, 4, 6, 8]]);
        check_snf(&r);
        assert_eq!(snf(&r).rank(), 1);
        check_snf(&IntMatrix::zeros(2, 3));
    }

    #[test]
    fn signature_examples() {
        let u = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(
            signature(&u),
            Signature {
                plus: 1,
                minus: 1,
                zero: 0
            }
        );
        let z = IntMatrix::from_rows(&[[0]]);
        assert_eq!(
            signature(&z),
            Signature {
                plus: 0,
                minus: 0,
                zero: 1
            }
        );
        let m = IntMatrix::from_rows(&[[0, 0, 1], [0, 0, 0], [1, 0, 0]]);
        assert_eq!(
            signature(&m),
            Signature {
                plus: 1,
                minus: 1,
                zero: 1
            }
        );
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(&[[2, -1, 0], [-1, 2, -1], [0, -1, 2]]);
        assert_eq!(m.det(), BigInt::from(4));
        let inv = RatMatrix::from(&m).inverse().unwrap();
        let prod = RatMatrix::from(&m).mul(&inv);
        assert_eq!(prod.to_integer().unwrap(), IntMatrix::identity(3));
        assert!(RatMatrix::from(&IntMatrix::from_rows(&[[1, 2], [2, 4]]))
            .inverse()
            .is_none());
    }

    #[test]
    fn kernel_of_zero_and_full_rank() {
        assert_eq!(kernel_basis(&IntMatrix::from_rows(&[[0]])), vec![vec![BigInt::from(1)]]);
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
        let k = kernel_basis(&IntMatrix::from_rows(&[[2, 4]]));
        assert_eq!(k.len(), 1);
        // saturated: (2, -1) up to sign
        assert_eq!(k[0][0].abs(), BigInt::from(2));
        assert_eq!(k[0][1].abs(), BigInt::from(1));
    }

    #[test]
    fn saturation_of_doubled_basis() {
        let b = IntMatrix::from_rows(&[[2, 0], [0, 2]]);
        assert!(!rows_primitive(&b));
        let s = saturate_rows(&b);
        assert_eq!(s.det().abs(), BigInt::one());
        assert!(rows_primitive(&IntMatrix::from_rows(&[[2, 3, 4]])));
    }
}
