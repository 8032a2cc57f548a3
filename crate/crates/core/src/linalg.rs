//! Dense complex matrices sized for qutrit gates and small registers.
//!
//! Basis ordering follows the ket `|x_1 ... x_N>`: the index of a basis
//! state is `sum x_i * 3^(N-i)`, so qutrit 0 is the most significant digit.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register for which full `3^n x 3^n` matrices are built.
pub const MAX_DENSE_QUTRITS: usize = 7;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

/// Digit of qutrit `q` in basis index `index` of an `n`-qutrit register.
pub fn digit(index: u64, q: usize, n: usize) -> u8 {
    ((index / 3u64.pow((n - 1 - q) as u32)) % 3) as u8
}

pub fn digits(index: u64, n: usize) -> Vec<u8> {
    (0..n).map(|q| digit(index, q, n)).collect()
}

pub fn index_of(digits: &[u8]) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * 3 + d as u64)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = z;
        }
        m
    }

    /// Builds a matrix from row slices. Panics if the rows are not square.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        Matrix { dim, data }
    }

    /// Matrix of the basis map `|j> -> phase_j |perm[j]>`.
    pub fn monomial(perm: &[usize], phases: &[C64]) -> Self {
        let dim = perm.len();
        let mut m = Self::zeros(dim);
        for (col, (&row, &ph)) in perm.iter().zip(phases).enumerate() {
            m.set(row, col, ph);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = C64> + '_ {
        (0..self.dim).map(move |row| self.get(row, col))
    }

    pub fn scale(&self, factor: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dims(self, other)?;
        Ok(Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dims(self, other)?;
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = Matrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to `other`; `inf` when the shapes differ.
    pub fn distance(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|| U U^dagger - I ||_F`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matmul(&self.dagger()).expect("same dimension");
        prod.distance(&Matrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() < tol
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.distance(&self.dagger())
    }

    /// Sub-matrix on the given basis indices (rows and columns in that order).
    pub fn restrict(&self, indices: &[usize]) -> Matrix {
        let k = indices.len();
        let mut out = Matrix::zeros(k);
        for (i, &r) in indices.iter().enumerate() {
            for (j, &c) in indices.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.3}{:+.3}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_dims(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

pub fn dagger(a: &Matrix) -> Matrix {
    a.dagger()
}

/// `exp(-i t h)` for Hermitian `h`.
///
/// Generators whose cube equals themselves (all the Gell-Mann generators used
/// here: `h^2` is a projector) take the closed form
/// `I + (cos t - 1) h^2 - i sin t h`. Anything else goes through a scaled
/// Taylor series followed by repeated squaring.
pub fn expm_hermitian(h: &Matrix, t: f64) -> Result<Matrix> {
    let herm = h.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    let h2 = h * h;
    let h3 = &h2 * h;
    if h3.distance(h) < 1e-14 {
        let id = Matrix::identity(h.dim());
        let out = id
            .add(&h2.scale(C64::new(t.cos() - 1.0, 0.0)))?
            .add(&h.scale(C64::new(0.0, -t.sin())))?;
        return Ok(out);
    }
    Ok(expm_series(&h.scale(C64::new(0.0, -t))))
}

fn expm_series(a: &Matrix) -> Matrix {
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut term = Matrix::identity(a.dim());
    let mut sum = term.clone();
    for k in 1..=24 {
        term = (&term * &scaled).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).expect("same dimension");
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub(crate) fn check_targets(targets: &[usize], n: usize) -> Result<()> {
    let bad = |reason| Error::InvalidTargets {
        targets: targets.to_vec(),
        n,
        reason,
    };
    if targets.is_empty() {
        return Err(bad("no targets"));
    }
    if targets.iter().any(|&t| t >= n) {
        return Err(bad("target out of range"));
    }
    for (i, t) in targets.iter().enumerate() {
        if targets[..i].contains(t) {
            return Err(bad("duplicate target"));
        }
    }
    Ok(())
}

/// Lifts a `k`-qutrit gate onto `targets` of an `n`-qutrit register.
///
/// The gate's first qutrit is `targets[0]`, so reversing the targets of a
/// two-qutrit gate conjugates it by the swap.
pub fn embed(gate: &Matrix, targets: &[usize], n: usize) -> Result<Matrix> {
    check_targets(targets, n)?;
    let k = targets.len();
    if gate.dim() != pow3(k) {
        return Err(Error::DimensionMismatch {
            left: gate.dim(),
            right: pow3(k),
        });
    }
    if n > MAX_DENSE_QUTRITS {
        return Err(Error::BudgetExceeded {
            n,
            max: MAX_DENSE_QUTRITS,
        });
    }
    let dim = pow3(n);
    let mut out = Matrix::zeros(dim);
    let mut ds = vec![0u8; n];
    for col in 0..dim {
        for (q, d) in ds.iter_mut().enumerate() {
            *d = digit(col as u64, q, n);
        }
        let local_col = targets.iter().fold(0usize, |acc, &t| acc * 3 + ds[t] as usize);
        for local_row in 0..gate.dim() {
            let amp = gate.get(local_row, local_col);
            if amp == ZERO {
                continue;
            }
            let mut rest = local_row;
            for &t in targets.iter().rev() {
                ds[t] = (rest % 3) as u8;
                rest /= 3;
            }
            out.set(index_of(&ds) as usize, col, amp);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{self, Core, Rotation};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_product() {
        let id = Matrix::identity(3);
        assert_eq!(&id * &id, id);
    }

    #[test]
    fn lambda1_squared_is_projector() {
        let l1 = gates::gell_mann(1).unwrap();
        let expected = Matrix::diagonal(&[ONE, ONE, ZERO]);
        assert!((&l1 * &l1).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn iswap02_squared_flips_11_and_02() {
        let g = gates::iswap(Core::Iswap02, 0.0);
        let sq = &g * &g;
        let mut diag = vec![ONE; 9];
        diag[4] = -ONE; // |11>
        diag[2] = -ONE; // |02>
        assert!(sq.max_abs_diff(&Matrix::diagonal(&diag)) < 1e-15);
    }

    #[test]
    fn matmul_rejects_mismatched_dims() {
        let err = Matrix::identity(3).matmul(&Matrix::identity(9)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { left: 3, right: 9 }));
    }

    #[test]
    fn dagger_of_iswap02_raises_02_with_plus_i() {
        let d = gates::iswap(Core::Iswap02, 0.0).dagger();
        // column |02> = 2, row |11> = 4
        assert!((d.get(4, 2) - I).norm() < 1e-15);
        assert_eq!(Matrix::identity(3).dagger(), Matrix::identity(3));
    }

    #[test]
    fn dagger_of_rotation_negates_angle() {
        let r = gates::rotation(Rotation::R01x, 0.7);
        let r_neg = gates::rotation(Rotation::R01x, -0.7);
        assert!(r.dagger().max_abs_diff(&r_neg) < 1e-15);
    }

    #[test]
    fn expm_zero_angle_is_identity() {
        let l1 = gates::gell_mann(1).unwrap();
        assert!(expm_hermitian(&l1, 0.0).unwrap().max_abs_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn expm_lambda1_quarter_turn() {
        let l1 = gates::gell_mann(1).unwrap();
        let got = expm_hermitian(&l1, PI / 2.0).unwrap();
        let z = ZERO;
        let want = Matrix::from_rows(&[&[z, -I, z], &[-I, z, z], &[z, z, ONE]]);
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn expm_lambda6_half_turn() {
        let l6 = gates::gell_mann(6).unwrap();
        let got = expm_hermitian(&l6, PI).unwrap();
        let want = Matrix::diagonal(&[ONE, -ONE, -ONE]);
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn expm_series_matches_closed_form() {
        // lambda1 + lambda6 is Hermitian but its cube is not itself
        let h = gates::gell_mann(1).unwrap().add(&gates::gell_mann(6).unwrap()).unwrap();
        let u = expm_hermitian(&h, 0.9).unwrap();
        assert!(u.unitarity_error() < 1e-12);
        // h has eigenvalues 0, +-sqrt(2); check u against its spectral form on |0> - |2>
        let v = [c(1.0, 0.0), ZERO, c(-1.0, 0.0)];
        let out = u.apply(&v).unwrap();
        for (a, b) in out.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let m = Matrix::from_rows(&[&[ZERO, ONE, ZERO], &[ZERO, ZERO, ZERO], &[ZERO, ZERO, ZERO]]);
        assert!(matches!(expm_hermitian(&m, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn embed_identity() {
        let e = embed(&Matrix::identity(3), &[0], 2).unwrap();
        assert_eq!(e, Matrix::identity(9));
    }

    #[test]
    fn embed_cz_phases_11() {
        let e = embed(&gates::cz(), &[0, 1], 2).unwrap();
        let mut v = vec![ZERO; 9];
        v[4] = ONE;
        let out = e.apply(&v).unwrap();
        assert!((out[4] + ONE).norm() < 1e-15);
    }

    #[test]
    fn embed_reversed_targets_realize_20_variant() {
        let e = embed(&gates::iswap(Core::Iswap02, 0.0), &[1, 0], 2).unwrap();
        let mut v = vec![ZERO; 9];
        v[4] = ONE;
        let out = e.apply(&v).unwrap();
        // |20> has index 6
        assert!((out[6] + I).norm() < 1e-15);
        assert!(out.iter().enumerate().all(|(i, z)| i == 6 || z.norm() < 1e-15));
    }

    #[test]
    fn embed_rejects_bad_targets() {
        let g = gates::cz();
        assert!(matches!(embed(&g, &[0, 0], 3), Err(Error::InvalidTargets { .. })));
        assert!(matches!(embed(&g, &[0, 3], 3), Err(Error::InvalidTargets { .. })));
        assert!(matches!(embed(&g, &[0], 3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn digit_roundtrip() {
        for idx in 0..81u64 {
            assert_eq!(index_of(&digits(idx, 4)), idx);
        }
        assert_eq!(digits(5, 2), vec![1, 2]);
    }
}
