//! Dense exact linear algebra over GF(p).

use std::fmt;

use thiserror::Error;

use crate::field::{self, Fp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace B is not contained in Z (basis vector {0} of B lies outside)")]
    NotContained(usize),
}

/// `y += a * x`.
pub fn axpy(y: &mut [u32], a: u32, x: &[u32], p: u32) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = field::add(*yi, field::mul(a, xi, p), p);
        }
    }
}

pub fn scaled(x: &[u32], a: u32, p: u32) -> Vec<u32> {
    x.iter().map(|&v| field::mul(v, a, p)).collect()
}

pub fn vec_add(x: &[u32], y: &[u32], p: u32) -> Vec<u32> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| field::add(a, b, p))
        .collect()
}

pub fn vec_sub(x: &[u32], y: &[u32], p: u32) -> Vec<u32> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| field::sub(a, b, p))
        .collect()
}

pub fn is_zero(x: &[u32]) -> bool {
    x.iter().all(|&v| v == 0)
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        Matrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Matrix::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize, p: u32) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| v % p));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            p,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<u32>], rows: usize, p: u32) -> Self {
        let mut m = Matrix::zeros(rows, columns.len(), p);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v % p;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn entry(&self, r: usize, c: usize) -> Fp {
        Fp::new(self.get(r, c) as i64, self.p)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = field::add(self.data[i], v % self.p, self.p);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.rows, other.cols, self.p);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (c, &b) in orow.iter().enumerate() {
                    if b != 0 {
                        acc[c] = (acc[c] + a * b as u64) % p;
                    }
                }
            }
            for c in 0..other.cols {
                out.data[r * other.cols + c] = acc[c] as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let mut s = 0u64;
                for (a, b) in self.row(r).iter().zip(v) {
                    if *a != 0 && *b != 0 {
                        s = (s + *a as u64 * *b as u64) % p;
                    }
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: vec_add(&self.data, &other.data, self.p),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: vec_sub(&self.data, &other.data, self.p),
        }
    }

    pub fn scale(&self, a: u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: scaled(&self.data, a, self.p),
        }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            p: self.p,
            data,
        }
    }

    /// Gauss–Jordan elimination. Returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, lead * m.cols + k);
                }
            }
            let scale = field::inv(m.get(lead, c), p).expect("pivot is nonzero");
            for k in c..m.cols {
                let i = lead * m.cols + k;
                m.data[i] = field::mul(m.data[i], scale, p);
            }
            let pivot_row: Vec<u32> = m.row(lead)[c..].to_vec();
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                let f = field::neg(f, p);
                let start = r * m.cols + c;
                axpy(
                    &mut m.data[start..start + pivot_row.len()],
                    f,
                    &pivot_row,
                    p,
                );
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Matrix::zeros(n, 2 * n, self.p);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zeros(n, n, self.p);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.get(r, n + c));
            }
        }
        Some(out)
    }
}

/// A subspace of GF(p)^n held by a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    p: u32,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, p: u32) -> Self {
        Subspace {
            ambient,
            p,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize, p: u32) -> Self {
        Subspace {
            ambient,
            p,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(vectors: &[Vec<u32>], ambient: usize, p: u32) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient, p);
        }
        let m = Matrix::from_rows(vectors, ambient, p).expect("vectors of ambient length");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient,
            p,
            basis,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Normal form of `v` modulo the subspace: pivot coordinates cleared.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = w[c];
            if f != 0 {
                axpy(&mut w, field::neg(f, self.p), row, self.p);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient && is_zero(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(&all, self.ambient, self.p)
    }
}

pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Subspace,
    pub image: Subspace,
}

pub fn rank_kernel_image(m: &Matrix) -> RankKernelImage {
    let p = m.modulus();
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel_vectors = Vec::new();
    for f in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; m.cols()];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = field::neg(r.get(i, f), p);
        }
        kernel_vectors.push(v);
    }
    let image_vectors: Vec<Vec<u32>> = pivots.iter().map(|&c| m.column(c)).collect();
    RankKernelImage {
        rank: pivots.len(),
        kernel: Subspace::span(&kernel_vectors, m.cols(), p),
        image: Subspace::span(&image_vectors, m.rows(), p),
    }
}

/// One solution of `m x = rhs`, if any.
pub fn solve(m: &Matrix, rhs: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(rhs.len(), m.rows());
    let p = m.modulus();
    let mut aug = Matrix::zeros(m.rows(), m.cols() + 1, p);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, m.cols(), rhs[r]);
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![0u32; m.cols()];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = red.get(i, m.cols());
    }
    Some(x)
}

/// Coset representatives of Z/B, canonical given the two subspaces.
///
/// Each vector of Z is reduced modulo B; the reduced vectors form a subspace
/// complementary to B inside Z whose echelon basis is returned.
pub fn quotient_basis(z: &Subspace, b: &Subspace) -> Result<Vec<Vec<u32>>, LinalgError> {
    if z.ambient != b.ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: z.ambient,
            found: b.ambient,
        });
    }
    if let Some(i) = b.basis.iter().position(|v| !z.contains(v)) {
        return Err(LinalgError::NotContained(i));
    }
    let reduced: Vec<Vec<u32>> = z.basis.iter().map(|v| b.reduce(v)).collect();
    Ok(Subspace::span(&reduced, z.ambient, z.p).basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank() {
        let rki = rank_kernel_image(&Matrix::identity(2, 5));
        assert_eq!(rki.rank, 2);
        assert_eq!(rki.kernel.dim(), 0);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let rki = rank_kernel_image(&Matrix::zeros(3, 4, 7));
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.dim(), 4);
        assert_eq!(rki.image.dim(), 0);
    }

    #[test]
    fn quotient_examples() {
        let p = 5;
        let z = Subspace::full(2, p);
        assert!(quotient_basis(&z, &z).unwrap().is_empty());
        let b = Subspace::span(&[vec![1, 0]], 2, p);
        let reps = quotient_basis(&z, &b).unwrap();
        assert_eq!(reps.len(), 1);
        assert_ne!(reps[0][1], 0);
        assert_eq!(quotient_basis(&b, &z), Err(LinalgError::NotContained(1)));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Matrix::from_rows(&[vec![1, 1], vec![2, 2]], 2, 7).unwrap();
        assert!(solve(&m, &[1, 3]).is_none());
        let x = solve(&m, &[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2]);
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![3u32, 5, 7]), 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |data| Matrix {
                rows: r,
                cols: c,
                p,
                data,
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let rki = rank_kernel_image(&m);
            prop_assert_eq!(rki.rank + rki.kernel.dim(), m.cols());
            prop_assert_eq!(rki.image.dim(), rki.rank);
            for v in rki.kernel.basis() {
                prop_assert!(is_zero(&m.mul_vec(v)));
            }
            for c in 0..m.cols() {
                prop_assert!(rki.image.contains(&m.column(c)));
            }
        }

        #[test]
        fn echelon_pivots_increase(m in matrix_strategy()) {
            let s = Subspace::span(&m.to_rows(), m.cols(), m.modulus());
            prop_assert!(s.pivots().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn quotient_reps_independent_of_b(m in matrix_strategy(), k in 0usize..4) {
            let p = m.modulus();
            let z = rank_kernel_image(&m).kernel;
            let b = Subspace::span(&z.basis()[..k.min(z.dim())], z.ambient(), p);
            let reps = quotient_basis(&z, &b).unwrap();
            prop_assert_eq!(reps.len(), z.dim() - b.dim());
            let mut all = b.basis().to_vec();
            all.extend(reps.iter().cloned());
            prop_assert_eq!(Subspace::span(&all, z.ambient(), p).dim(), z.dim());
            for r in &reps {
                prop_assert!(z.contains(r));
            }
        }
    }
}
