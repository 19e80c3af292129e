//! Exact integer linear algebra on the lattice `N = Z^n` and its dual `M`.
//!
//! Everything here works over [`BigInt`]: weights of the maximal-degree
//! towers grow doubly exponentially, so nothing in this module may assume
//! a fixed-width integer.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate sublattice")]
    Degenerate,
}

/// gcd of a sequence; `gcd() = gcd(0, 0) = 0`, always nonnegative.
pub fn gcd_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

macro_rules! lattice_vector_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<BigInt>);

        impl $name {
            pub fn new(coords: Vec<BigInt>) -> Self {
                Self(coords)
            }

            pub fn from_i64(coords: &[i64]) -> Self {
                Self(coords.iter().map(|&c| BigInt::from(c)).collect())
            }

            pub fn zero(dim: usize) -> Self {
                Self(vec![BigInt::zero(); dim])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<BigInt> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            /// Content of the vector: gcd of its coordinates.
            pub fn content(&self) -> BigInt {
                gcd_all(&self.0)
            }

            /// True iff the coordinates are coprime. The zero vector is not primitive.
            pub fn is_primitive(&self) -> bool {
                self.content().is_one()
            }

            /// Divides out the content. The zero vector is returned unchanged.
            pub fn primitive_part(&self) -> Self {
                let g = self.content();
                if g.is_zero() {
                    return self.clone();
                }
                Self(self.0.iter().map(|c| c / &g).collect())
            }

            pub fn scale(&self, c: &BigInt) -> Self {
                Self(self.0.iter().map(|x| x * c).collect())
            }

            /// Exact division of every coordinate; `None` if `d` does not divide all of them.
            pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
                if d.is_zero() {
                    return None;
                }
                let mut out = Vec::with_capacity(self.0.len());
                for x in &self.0 {
                    let (q, r) = x.div_rem(d);
                    if !r.is_zero() {
                        return None;
                    }
                    out.push(q);
                }
                Some(Self(out))
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.dim(), rhs.dim());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.dim(), rhs.dim());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    };
}

lattice_vector_type!(LatticeVector);
lattice_vector_type!(DualVector);

/// The pairing `M x N -> Z`.
pub fn pair(u: &DualVector, v: &LatticeVector) -> Result<BigInt, LatticeError> {
    if u.dim() != v.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(u.coords().iter().zip(v.coords()).map(|(a, b)| a * b).sum())
}

impl DualVector {
    /// Height of `v` with respect to this functional. Panics on dimension mismatch.
    pub fn eval(&self, v: &LatticeVector) -> BigInt {
        pair(self, v).expect("dimension mismatch in pairing")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
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

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[LatticeVector]) -> Self {
        let c = columns.len();
        let r = columns.first().map_or(0, LatticeVector::dim);
        let mut m = Self::zeros(r, c);
        for (j, v) in columns.iter().enumerate() {
            assert_eq!(v.dim(), r, "ragged columns");
            for i in 0..r {
                m.set(i, j, v.coords()[i].clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// The nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let r = self.d.nrows().min(self.d.ncols());
        (0..r)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by elementary row/column reduction, pivoting on the
/// entry of least absolute value.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // least nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in (t + 1)..m {
                let q = d.get(i, t).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let c = -q;
                    d.add_row_multiple(i, t, &c);
                    u.add_row_multiple(i, t, &c);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..n {
                let q = d.get(t, j).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let c = -q;
                    d.add_col_multiple(j, t, &c);
                    v.add_col_multiple(j, t, &c);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility chain: fold an offending row into the pivot row
            let pivot = d.get(t, t).clone();
            let offending = ((t + 1)..m)
                .find(|&i| ((t + 1)..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(u, d, v)
}

fn finish_smith(u: IntegerMatrix, mut d: IntegerMatrix, v: IntegerMatrix) -> SmithForm {
    let mut u = u;
    for t in 0..d.nrows().min(d.ncols()) {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U * A`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sink to the bottom.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (m, n) = (a.nrows(), a.ncols());
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let x = h.get(i, j);
                if !x.is_zero() && best.is_none_or(|b| x.abs() < h.get(b, j).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in (r + 1)..m {
                let q = h.get(i, j).div_floor(h.get(r, j));
                if !q.is_zero() {
                    let c = -q;
                    h.add_row_multiple(i, r, &c);
                    u.add_row_multiple(i, r, &c);
                }
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, j).is_zero() {
            continue;
        }
        if h.get(r, j).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h.get(r, j).clone();
        for i in 0..r {
            let q = h.get(i, j).div_floor(&pivot);
            if !q.is_zero() {
                let c = -q;
                h.add_row_multiple(i, r, &c);
                u.add_row_multiple(i, r, &c);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Index `[Z^n : L]` of the lattice spanned by `generators`.
pub fn sublattice_index(generators: &[LatticeVector]) -> Result<BigInt, LatticeError> {
    let Some(first) = generators.first() else {
        return Err(LatticeError::Degenerate);
    };
    let n = first.dim();
    for g in generators {
        if g.dim() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
    }
    let rows = IntegerMatrix::from_rows(generators.iter().map(|g| g.coords().to_vec()).collect());
    let snf = smith_normal_form(&rows);
    let factors = snf.invariant_factors();
    if factors.len() < n {
        return Err(LatticeError::Degenerate);
    }
    Ok(factors.iter().product())
}

/// Primitive integer vector spanning the kernel of an `(n-1) x n` matrix of
/// full rank, via signed maximal minors. `None` if the rows are dependent.
pub fn primitive_kernel_vector(rows: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let n = rows.len() + 1;
    assert!(rows.iter().all(|r| r.len() == n), "expected (n-1) x n rows");
    let mut w = Vec::with_capacity(n);
    for skip in 0..n {
        let minor = IntegerMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect(),
        );
        let det = minor.determinant();
        w.push(if skip % 2 == 0 { det } else { -det });
    }
    let g = gcd_all(&w);
    if g.is_zero() {
        return None;
    }
    Some(w.into_iter().map(|x| x / &g).collect())
}

pub fn to_rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Solves the square system `A x = b` over Q. `None` if `A` is singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let delta = &f * &m[col][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
