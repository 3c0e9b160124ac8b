//! Exact dense linear algebra over the rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational with the given integer value.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q` is zero.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r);
        }
        Ok(RationalMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| int(x))).collect();
        RationalMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Appends a row; its length must equal `cols`.
    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination. Zero entries are skipped, so sparse inputs stay cheap.
pub fn rref(m: &RationalMatrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).recip();
        let support: Vec<usize> = (c..a.cols).filter(|&j| !a.get(r, j).is_zero()).collect();
        for &j in &support {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for &j in &support {
                let v = a.get(i, j) - &factor * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).rank()
}

/// Null-space basis: one vector per free column, with a 1 in that column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let red = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Echelonized basis of the span of the given rows.
pub fn row_space_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let red = rref(m);
    (0..red.rank()).map(|i| red.matrix.row(i).to_vec()).collect()
}

/// Echelonized basis of the column space.
pub fn image_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    row_space_basis(&m.transpose())
}

/// Solution set of `m x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl AffineSolution {
    /// Point `particular + sum t_i kernel_i`.
    pub fn point(&self, params: &[Rational]) -> Vec<Rational> {
        assert_eq!(params.len(), self.kernel.len(), "parameter count");
        let mut x = self.particular.clone();
        for (t, k) in params.iter().zip(&self.kernel) {
            if t.is_zero() {
                continue;
            }
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += t * ki;
            }
        }
        x
    }
}

pub fn solve_affine(m: &RationalMatrix, b: &[Rational]) -> Result<AffineSolution> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, got: b.len() });
    }
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&m.cols) {
        return Err(Error::Infeasible);
    }
    let mut particular = vec![Rational::zero(); m.cols];
    for (i, &p) in red.pivots.iter().enumerate() {
        particular[p] = red.matrix.get(i, m.cols).clone();
    }
    Ok(AffineSolution { particular, kernel: kernel_basis(m) })
}

/// Echelonized basis of the span of the given vectors of length `n`.
pub fn span_basis(n: usize, vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut m = RationalMatrix::zeros(0, n);
    for v in vectors {
        m.push_row(v.clone());
    }
    row_space_basis(&m)
}

/// Whether two families of vectors of length `n` span the same subspace.
pub fn same_span(n: usize, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    span_basis(n, a) == span_basis(n, b)
}

/// Echelonized basis of the intersection of two spans.
pub fn intersection_basis(n: usize, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // columns u_1 .. u_p, -v_1 .. -v_q
    let mut m = RationalMatrix::zeros(n, a.len() + b.len());
    for (j, u) in a.iter().enumerate() {
        for (i, x) in u.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            m.set(i, a.len() + j, -x);
        }
    }
    let vectors: Vec<Vec<Rational>> = kernel_basis(&m)
        .into_iter()
        .map(|coef| {
            let mut w = vec![Rational::zero(); n];
            for (c, u) in coef.iter().zip(a) {
                if !c.is_zero() {
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi += c * ui;
                    }
                }
            }
            w
        })
        .collect();
    span_basis(n, &vectors)
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let n = v.len();
    let mut m = RationalMatrix::zeros(0, n);
    for b in basis {
        m.push_row(b.clone());
    }
    let r = rank(&m);
    m.push_row(v.to_vec());
    rank(&m) == r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        let id = RationalMatrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank(), 3);

        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(rref(&z).rank(), 0);
        assert_eq!(rref(&z).matrix, z);

        let m = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let r = rref(&m);
        assert_eq!(r.rank(), 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RationalMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zeros(3, 3)).len(), 3);
        let k = kernel_basis(&RationalMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&RationalMatrix::identity(2)), vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert!(image_basis(&RationalMatrix::zeros(2, 2)).is_empty());
        let img = image_basis(&RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(img, vec![vec![int(1), int(2)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), frac(-1, 2)];
        let s = solve_affine(&RationalMatrix::identity(2), &b).unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());

        assert_eq!(solve_affine(&RationalMatrix::zeros(2, 2), &[int(1), int(0)]), Err(Error::Infeasible));
        let s = solve_affine(&RationalMatrix::zeros(2, 3), &[int(0), int(0)]).unwrap();
        assert_eq!(s.kernel.len(), 3);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(alloc::format!("{}", frac(6, -4)), "-3/2");
        assert_eq!(alloc::format!("{}", int(5)), "5");
        assert_eq!(alloc::format!("{}", frac(0, 7)), "0");
        assert_eq!(parse_rational("-3/2"), Some(frac(-3, 2)));
        assert_eq!(parse_rational("4"), Some(int(4)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
