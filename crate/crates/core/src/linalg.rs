//! Small dense complex linear algebra.
//!
//! Everything in this crate lives in Hilbert spaces of dimension at most
//! [`MAX_DIM`], so matrices are plain row-major `Vec<Complex64>` buffers and the
//! Hermitian eigensolver is a cyclic complex Jacobi iteration.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest matrix dimension accepted by the eigensolver.
pub const MAX_DIM: usize = 32;
/// Elementwise tolerance on `M - M^dagger` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue a positive semidefinite matrix may have.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this are outside the support for inverse square roots.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Tolerance on `|<v|v> - 1|` for a vector to count as normalized.
pub const NORM_TOL: f64 = 1e-12;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A column vector (ket).
#[derive(Clone, Debug, PartialEq)]
pub struct CVec {
    entries: Vec<C64>,
}

impl CVec {
    pub fn new(entries: Vec<C64>) -> Self {
        assert!(!entries.is_empty(), "vectors must have positive dimension");
        Self { entries }
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self::new(entries.iter().map(|&x| r(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![C64::default(); dim])
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = r(1.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &CVec) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> CVec {
        self.scale(r(1.0 / self.norm()))
    }

    pub fn scale(&self, k: C64) -> CVec {
        CVec::new(self.entries.iter().map(|z| z * k).collect())
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &CVec) -> CMat {
        CMat::from_fn(self.dim(), other.dim(), |i, j| {
            self.entries[i] * other.entries[j].conj()
        })
    }

    /// `|self><self|`.
    pub fn projector(&self) -> CMat {
        self.outer(self)
    }

    pub fn kron(&self, other: &CVec) -> CVec {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        CVec::new(out)
    }

    pub fn max_abs_diff(&self, other: &CVec) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl Add for &CVec {
    type Output = CVec;
    fn add(self, rhs: &CVec) -> CVec {
        assert_eq!(self.dim(), rhs.dim());
        CVec::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// A dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrices must have positive dimensions");
        Self {
            rows,
            cols,
            entries: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { r(1.0) } else { C64::default() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| r(rows[i][j]))
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { r(values[i]) } else { C64::default() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVec]) -> Self {
        let rows = columns[0].dim();
        assert!(columns.iter().all(|v| v.dim() == rows));
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
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

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> CMat {
        self.scale(r(k))
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        CVec::new(
            (0..self.rows)
                .map(|i| {
                    self.entries[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// Real part of `<v|M|v>`.
    pub fn expectation(&self, v: &CVec) -> f64 {
        v.inner(&self.mul_vec(v)).re
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M^dagger|` elementwise.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_asymmetry() <= HERMITIAN_TOL
    }

    pub fn hermitian_part(&self) -> CMat {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// True when Hermitian with smallest eigenvalue at least `-PSD_TOL`.
    pub fn is_psd(&self) -> bool {
        self.is_hermitian() && min_eigenvalue(self).is_ok_and(|v| v >= -PSD_TOL)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMat {
        CMat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// `W M W^dagger`.
    pub fn conjugate_by(&self, w: &CMat) -> CMat {
        &(w * self) * &w.adjoint()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        CMat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self + &(-rhs)
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_real(-1.0)
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == C64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.entries[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

/// Sum of a non-empty list of equally shaped matrices.
pub fn sum(mats: &[CMat]) -> CMat {
    let mut acc = mats[0].clone();
    for m in &mats[1..] {
        acc = &acc + m;
    }
    acc
}

/// Gram matrix `G[j][k] = <v_j|v_k>`.
pub fn gram(vectors: &[CVec]) -> CMat {
    let n = vectors.len();
    CMat::from_fn(n, n, |j, k| vectors[j].inner(&vectors[k]))
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: CMat,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k)
    }

    /// Rebuild `V f(diag) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn check_hermitian(m: &CMat) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if m.rows > MAX_DIM {
        return Err(Error::TooLarge {
            dim: m.rows,
            max: MAX_DIM,
        });
    }
    let max_asymmetry = m.max_asymmetry();
    if max_asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_asymmetry });
    }
    Ok(())
}

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// Cyclic Jacobi: each rotation first strips the phase of the pivot `a_pq`,
/// turning the 2x2 block real symmetric, then applies the classical real
/// rotation that annihilates it. Iterates until the off-diagonal Frobenius
/// norm drops below `1e-14` relative to the matrix scale.
pub fn hermitian_eig(m: &CMat) -> Result<Eigen> {
    check_hermitian(m)?;
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = CMat::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;

                // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
                let u_pp = r(cs);
                let u_pq = r(sn);
                let u_qp = -phase.conj() * sn;
                let u_qq = phase.conj() * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

pub fn min_eigenvalue(m: &CMat) -> Result<f64> {
    Ok(hermitian_eig(m)?.values[0])
}

pub fn max_eigenvalue(m: &CMat) -> Result<f64> {
    Ok(*hermitian_eig(m)?.values.last().expect("non-empty spectrum"))
}

/// Exponent for [`mat_pow_half`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPower {
    /// `M^{1/2}`
    Sqrt,
    /// `M^{-1/2}` on the support of `M`, zero on its kernel.
    InverseSqrt,
}

pub fn mat_pow_half(m: &CMat, power: HalfPower) -> Result<CMat> {
    let eig = hermitian_eig(m)?;
    if let Some(&value) = eig.values.iter().find(|&&v| v < -PSD_TOL) {
        return Err(Error::NotPositive { value });
    }
    Ok(match power {
        HalfPower::Sqrt => eig.reconstruct_with(|l| l.max(0.0).sqrt()),
        HalfPower::InverseSqrt => {
            eig.reconstruct_with(|l| if l < SUPPORT_CUTOFF { 0.0 } else { 1.0 / l.sqrt() })
        }
    })
}

/// Tensor product `A (x) B`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    CMat::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// Which tensor factor survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of an operator on `C^{d1} (x) C^{d2}`.
pub fn partial_trace(m: &CMat, (d1, d2): (usize, usize), keep: Keep) -> Result<CMat> {
    if m.rows != d1 * d2 || m.cols != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over {d1}x{d2} needs a {0}x{0} matrix, got {1}x{2}",
            d1 * d2,
            m.rows,
            m.cols
        )));
    }
    Ok(match keep {
        Keep::First => CMat::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Keep::Second => CMat::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

/// Contract one factor of a bipartite vector with `<phi|`, keeping the other:
/// `(I (x) <phi|) v` for `Keep::First`, `(<phi| (x) I) v` for `Keep::Second`.
/// The result is unnormalized; its squared norm is the outcome probability.
pub fn contract(v: &CVec, (d1, d2): (usize, usize), keep: Keep, phi: &CVec) -> Result<CVec> {
    let other = match keep {
        Keep::First => d2,
        Keep::Second => d1,
    };
    if v.dim() != d1 * d2 || phi.dim() != other {
        return Err(Error::DimensionMismatch(format!(
            "contracting a {}-vector over {d1}x{d2} with a {}-vector",
            v.dim(),
            phi.dim()
        )));
    }
    Ok(match keep {
        Keep::First => CVec::new(
            (0..d1)
                .map(|i| (0..d2).map(|j| phi[j].conj() * v[i * d2 + j]).sum())
                .collect(),
        ),
        Keep::Second => CVec::new(
            (0..d2)
                .map(|j| (0..d1).map(|i| phi[i].conj() * v[i * d2 + j]).sum())
                .collect(),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        // Small LCG keeps the unit tests free of RNG plumbing.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let a = CMat::from_fn(n, n, |_, _| c(next(), next()));
        a.hermitian_part()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&CMat::identity(3)).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn conditional_gram_spectrum_at_protocol_point() {
        let (f, g) = (1.0 / 3.0, -1.0 / 3.0);
        let m = CMat::diag(&[1.0 + g + 2.0 * f, 1.0 - g, 1.0 + g - 2.0 * f, 1.0 - g]);
        let eig = hermitian_eig(&m).unwrap();
        let expected = [0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let m = random_hermitian(5, 7);
        let eig = hermitian_eig(&m).unwrap();
        assert!(eig.reconstruct_with(|l| l).max_abs_diff(&m) < 1e-10);
        for k in 0..5 {
            let v = eig.vector(k);
            let lhs = m.mul_vec(&v);
            assert!(lhs.max_abs_diff(&v.scale(r(eig.values[k]))) < 1e-10);
        }
        let vv = &eig.vectors.adjoint() * &eig.vectors;
        assert!(vv.max_abs_diff(&CMat::identity(5)) < 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complex_pivots_converge() {
        let m = CMat::from_rows(&[
            vec![r(2.0), c(0.0, 1.0), c(0.5, -0.5)],
            vec![c(0.0, -1.0), r(2.0), c(0.0, 0.3)],
            vec![c(0.5, 0.5), c(0.0, -0.3), r(-1.0)],
        ]);
        let eig = hermitian_eig(&m).unwrap();
        assert!(eig.reconstruct_with(|l| l).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMat::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert_eq!(max_asymmetry, 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized() {
        assert!(matches!(
            hermitian_eig(&CMat::identity(33)),
            Err(Error::TooLarge { dim: 33, .. })
        ));
    }

    #[test]
    fn square_roots() {
        let root = mat_pow_half(&CMat::diag(&[4.0, 9.0]), HalfPower::Sqrt).unwrap();
        assert!(root.max_abs_diff(&CMat::diag(&[2.0, 3.0])) < 1e-14);
        let inv = mat_pow_half(&CMat::diag(&[1.0, 0.0]), HalfPower::InverseSqrt).unwrap();
        assert!(inv.max_abs_diff(&CMat::diag(&[1.0, 0.0])) < 1e-14);
        assert!(matches!(
            mat_pow_half(&CMat::diag(&[1.0, -0.1]), HalfPower::Sqrt),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn inverse_root_composes_to_support_projector() {
        let v = CVec::from_real(&[1.0, 1.0, 0.0]).normalized();
        let w = CVec::from_real(&[0.0, 1.0, -1.0]).normalized();
        let m = &v.projector().scale_real(0.7) + &w.projector().scale_real(0.2);
        let inv = mat_pow_half(&m, HalfPower::InverseSqrt).unwrap();
        let proj = &(&inv * &m) * &inv;
        assert!((&proj * &proj).max_abs_diff(&proj) < 1e-9);
        assert!((proj.trace().re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&CMat::identity(2), &CMat::identity(3)), CMat::identity(6));
        let a = random_hermitian(2, 1);
        let b = random_hermitian(3, 2);
        let cc = random_hermitian(2, 3);
        let d = random_hermitian(3, 4);
        let lhs = &kron(&a, &b) * &kron(&cc, &d);
        let rhs = kron(&(&a * &cc), &(&b * &d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_cases() {
        let bell = CVec::from_real(&[1.0, 0.0, 0.0, 1.0]).normalized();
        let reduced = partial_trace(&bell.projector(), (2, 2), Keep::First).unwrap();
        assert!(reduced.max_abs_diff(&CMat::identity(2).scale_real(0.5)) < 1e-15);

        let a = random_hermitian(2, 11);
        let b = random_hermitian(3, 12);
        let ab = kron(&a, &b);
        let first = partial_trace(&ab, (2, 3), Keep::First).unwrap();
        assert!(first.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let second = partial_trace(&ab, (2, 3), Keep::Second).unwrap();
        assert!(second.max_abs_diff(&b.scale(a.trace())) < 1e-12);

        assert!(matches!(
            partial_trace(&CMat::identity(5), (2, 3), Keep::First),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn product_state_factor_recovered() {
        let u = CVec::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let w = CVec::new(vec![c(0.5, 0.5), c(0.5, 0.0), c(0.0, -0.5)]);
        let joint = u.kron(&w).projector();
        let back = partial_trace(&joint, (2, 3), Keep::Second).unwrap();
        assert!(back.max_abs_diff(&w.projector()) < 1e-12);
    }

    #[test]
    fn contract_product_state() {
        let a = CVec::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let b = CVec::from_real(&[1.0, 0.0, 0.0]);
        let v = a.kron(&b);
        let kept = contract(&v, (2, 3), Keep::First, &b).unwrap();
        assert!(kept.max_abs_diff(&a) < 1e-15);
        let kept = contract(&v, (2, 3), Keep::Second, &a).unwrap();
        assert!(kept.max_abs_diff(&b) < 1e-15);
        assert!(contract(&v, (2, 3), Keep::First, &a).is_err());
    }
}
