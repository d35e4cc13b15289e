//! Small dense real linear algebra: symmetric matrices, a cyclic Jacobi
//! eigensolver and LU-based inversion for square matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerance used when validating symmetry of a matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Real symmetric matrix stored row-major. Energies are in hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHamiltonian {
    dim: usize,
    data: Vec<f64>,
}

impl DenseHamiltonian {
    /// Wraps row-major `data` as a `dim × dim` matrix.
    ///
    /// Fails if `dim` is zero, the length is wrong, or the matrix is not
    /// symmetric within [`SYMMETRY_TOLERANCE`] (relative to its largest entry).
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Size("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Size(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = Self { dim, data };
        let scale = m.max_abs().max(1.0);
        if m.max_asymmetry() > SYMMETRY_TOLERANCE * scale {
            return Err(Error::Size(format!(
                "matrix is not symmetric (max asymmetry {:e})",
                m.max_asymmetry()
            )));
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = d;
        }
        m
    }

    /// Builds the matrix from the upper triangle of `f`, mirroring it.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · other` (not symmetric in general, returned row-major).
    pub fn mul(&self, other: &Self) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(n, other.dim);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Max-norm of the commutator `[self, other]`.
    pub fn commutator_max_norm(&self, other: &Self) -> f64 {
        let ab = self.mul(other);
        let ba = other.mul(self);
        ab.iter()
            .zip(&ba)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Full eigendecomposition via cyclic Jacobi rotations.
    pub fn eigen(&self) -> SymmetricEigen {
        jacobi_eigen(self.dim, &self.data)
    }
}

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Eigenvectors, `vectors[k]` belongs to `values[k]`. Each has unit norm
    /// and its first component with magnitude above 1e-12 is positive.
    pub vectors: Vec<Vec<f64>>,
}

const JACOBI_MAX_SWEEPS: usize = 100;

fn jacobi_eigen(n: usize, data: &[f64]) -> SymmetricEigen {
    let mut a = data.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                // columns p, q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // rows p, q
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<f64> = (0..n).map(|k| v[k * n + col]).collect();
            normalize_sign(&mut vec);
            vec
        })
        .collect();
    SymmetricEigen { values, vectors }
}

/// Rescales to unit norm and flips so the first significant entry is positive.
pub fn normalize_sign(v: &mut [f64]) {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// LU factorization with partial pivoting of a general square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes the row-major `n × n` matrix; `None` when a pivot vanishes.
    pub fn factor(n: usize, data: &[f64]) -> Option<Self> {
        assert_eq!(data.len(), n * n);
        let mut lu = data.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, max) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if max <= f64::MIN_POSITIVE {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let d = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            x[i] -= row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum::<f64>();
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s = x[i] - row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum::<f64>();
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Row-major inverse.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for col in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[col] = 1.0;
            let x = self.solve(&e);
            for row in 0..n {
                inv[row * n + col] = x[row];
            }
        }
        inv
    }
}

/// Matrix 1-norm (max absolute column sum) of a row-major square matrix.
pub fn norm1(n: usize, data: &[f64]) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| data[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number; infinite for singular input.
pub fn condition_number(n: usize, data: &[f64]) -> f64 {
    match Lu::factor(n, data) {
        Some(lu) => {
            let c = norm1(n, data) * norm1(n, &lu.inverse());
            if c.is_finite() {
                c
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_empty() {
        assert!(DenseHamiltonian::new(0, vec![]).is_err());
        assert!(DenseHamiltonian::new(2, vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(DenseHamiltonian::new(2, vec![1.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn jacobi_two_by_two() {
        let m = DenseHamiltonian::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = m.eigen();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[0][0] - h).abs() < 1e-14);
        assert!((e.vectors[0][1] + h).abs() < 1e-14);
    }

    #[test]
    fn jacobi_matches_nalgebra() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 3, 12, 16, 30] {
            let m = DenseHamiltonian::from_upper_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let ours = m.eigen();
            let theirs =
                nalgebra::DMatrix::from_row_slice(n, n, m.as_slice()).symmetric_eigenvalues();
            let mut theirs: Vec<f64> = theirs.iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.values.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-11, "{a} vs {b}");
            }
            for (k, v) in ours.vectors.iter().enumerate() {
                let mv = m.mul_vec(v);
                for (x, y) in mv.iter().zip(v) {
                    assert!((x - ours.values[k] * y).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn lu_inverse_and_condition() {
        let a = [0.9, 0.1, 0.1, 0.9];
        let inv = Lu::factor(2, &a).unwrap().inverse();
        let expect = [1.125, -0.125, -0.125, 1.125];
        for (x, y) in inv.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((condition_number(2, &a) - 1.25).abs() < 1e-12);
        assert!(condition_number(2, &[1.0, 1.0, 1.0, 1.0]).is_infinite());
    }
}
