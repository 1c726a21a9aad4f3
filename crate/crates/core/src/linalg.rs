//! Dense complex matrices: the concrete carrier of every semantics in the crate.
//!
//! Index conventions are fixed once here and relied upon everywhere else:
//!
//! - the computational basis of a type is ordered lexicographically;
//! - for a direct sum the left summand occupies the first block of indices;
//! - for a Kronecker product the left factor is most significant, so entry
//!   `(i * b.rows + k, j * b.cols + l)` of `kron(a, b)` is `a(i, j) * b(k, l)`.
//!
//! Matrices with a zero dimension are ordinary values; they are the semantics
//! of the empty type.

use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Scalars. Re-exported so downstream code never has to name `num_complex`.
pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    Length {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
}

/// A dense, row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

/// Outcome of an entrywise comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closeness {
    pub equal: bool,
    /// Largest entrywise modulus of the difference; infinite on shape mismatch.
    pub max_diff: f64,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Length {
                rows,
                cols,
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self {
            rows,
            cols,
            data: entries,
        })
    }

    /// Builds a real matrix from row-major values.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self, LinalgError> {
        Self::new(rows, cols, values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// The basis column `|index⟩` of a `dim`-dimensional space.
    pub fn ket(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        Self::from_fn(dim, 1, |i, _| if i == index { ONE } else { ZERO })
    }

    /// The basis row `⟨index|`.
    pub fn bra(dim: usize, index: usize) -> Self {
        Self::ket(dim, index).dagger()
    }

    /// Permutation matrix sending basis vector `j` to `perm(j)`.
    pub fn permutation(n: usize, perm: impl Fn(usize) -> usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            let i = perm(j);
            m.data[i * n + j] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.cols + col]
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Direct sum: `self` upper-left, `rhs` lower-right.
    pub fn dsum(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows + rhs.rows;
        let cols = self.cols + rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j);
            }
        }
        for k in 0..rhs.rows {
            for l in 0..rhs.cols {
                out.data[(self.rows + k) * cols + self.cols + l] = rhs.get(k, l);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: Complex) -> CMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &CMatrix,
        op: &'static str,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<CMatrix, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::Shape {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise comparison within `tol`.
    pub fn approx_eq(&self, rhs: &CMatrix, tol: f64) -> Closeness {
        if self.shape() != rhs.shape() {
            return Closeness {
                equal: false,
                max_diff: f64::INFINITY,
            };
        }
        let max_diff = self
            .data
            .iter()
            .zip(&rhs.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()));
        Closeness {
            equal: max_diff <= tol,
            max_diff,
        }
    }

    /// True when every entry is 0 or 1 and each row and column holds exactly one 1.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut col_hits = vec![0usize; n];
        for i in 0..n {
            let mut row_hits = 0;
            for j in 0..n {
                let z = self.get(i, j);
                if z == ONE {
                    row_hits += 1;
                    col_hits[j] += 1;
                } else if z != ZERO {
                    return false;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&c| c == 1)
    }

    /// Largest singular value, by power iteration on `a† a`.
    ///
    /// Runs until the eigen-residual drops below 1e-12 or 500 iterations pass.
    pub fn spectral_norm(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let gram = self.dagger().matmul(self).expect("a† a is always defined");
        let n = gram.rows;
        let mut v: Vec<Complex> = (0..n)
            .map(|i| {
                let t = i as f64;
                Complex::new(1.0 + (t * 0.754_877_666_246_692_7).fract(), 0.5 * (t * 0.569_840_290_998_053_3).fract())
            })
            .collect();
        normalize(&mut v);
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w = mat_vec(&gram, &v);
            lambda = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
            let residual = w
                .iter()
                .zip(&v)
                .map(|(wi, vi)| (wi - vi * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            if residual < 1e-12 {
                break;
            }
            v = w.into_iter().map(|z| z / norm).collect();
        }
        lambda.max(0.0).sqrt()
    }

    /// Whether the operator norm is at most `1 + tol`.
    pub fn spectral_norm_le_one(&self, tol: f64) -> bool {
        if self.is_empty() {
            return true;
        }
        // ‖A‖₂ ≤ sqrt(‖A‖₁ ‖A‖∞); settles most permutations and isometries immediately
        let max_col = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let max_row = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        if (max_col * max_row).sqrt() <= 1.0 + tol {
            return true;
        }
        self.spectral_norm() <= 1.0 + tol
    }

    /// Applies the matrix to a column given as a slice.
    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        mat_vec(self, v)
    }
}

fn mat_vec(m: &CMatrix, v: &[Complex]) -> Vec<Complex> {
    (0..m.rows)
        .map(|i| {
            m.data[i * m.cols..(i + 1) * m.cols]
                .iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

fn normalize(v: &mut [Complex]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "[{}x{} empty]", self.rows, self.cols);
        }
        let real = self.max_imag() < 1e-15;
        let cells: Vec<String> = self
            .data
            .iter()
            .map(|z| {
                let re = clean(z.re);
                let im = clean(z.im);
                if real {
                    format!("{re:.6}")
                } else {
                    format!("{re:.6}{}{:.6}i", if im < 0.0 { '-' } else { '+' }, im.abs())
                }
            })
            .collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            let row: Vec<String> = cells[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}

// avoids printing "-0.000000"
fn clean(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        CMatrix::new(
            wire.rows,
            wire.cols,
            wire.entries.into_iter().map(|[re, im]| Complex::new(re, im)).collect(),
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> CMatrix {
        CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn h() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
    }

    #[test]
    fn matmul_identity_and_involution() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.matmul(&x()).unwrap(), x());
        assert_eq!(x().matmul(&x()).unwrap(), i2);
    }

    #[test]
    fn matmul_empty_and_mismatch() {
        let empty = CMatrix::zeros(0, 2);
        let out = empty.matmul(&CMatrix::identity(2)).unwrap();
        assert_eq!(out.shape(), (0, 2));
        assert!(matches!(
            CMatrix::identity(2).matmul(&CMatrix::identity(3)),
            Err(LinalgError::Shape { op: "matmul", .. })
        ));
    }

    #[test]
    fn kron_conventions() {
        let k = x().kron(&CMatrix::identity(2));
        let expected = CMatrix::permutation(4, |j| (j + 2) % 4);
        assert_eq!(k, expected);
        assert_eq!(CMatrix::identity(1).kron(&h()), h());
        let ket00 = CMatrix::ket(2, 0).kron(&CMatrix::ket(2, 0));
        assert_eq!(ket00, CMatrix::ket(4, 0));
    }

    #[test]
    fn dsum_blocks() {
        let one = CMatrix::identity(1);
        assert_eq!(one.dsum(&one), CMatrix::identity(2));
        assert_eq!(CMatrix::zeros(0, 0).dsum(&h()), h());
        let minus = CMatrix::from_real(1, 1, &[-1.0]).unwrap();
        let z = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(one.dsum(&minus), z);
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(h().dagger(), h());
        assert_eq!(CMatrix::ket(2, 0).dagger(), CMatrix::bra(2, 0));
        let m = CMatrix::new(2, 3, (0..6).map(|k| Complex::new(k as f64, 1.0 - k as f64)).collect()).unwrap();
        assert_eq!(m.dagger().dagger(), m);
    }

    #[test]
    fn approx_eq_reports_difference() {
        let c = CMatrix::identity(2).approx_eq(&CMatrix::identity(2), 1e-12);
        assert!(c.equal);
        assert_eq!(c.max_diff, 0.0);
        let c = CMatrix::identity(2).approx_eq(&x(), 1e-12);
        assert!(!c.equal);
        assert_eq!(c.max_diff, 1.0);
        let c = CMatrix::identity(2).approx_eq(&CMatrix::identity(3), 10.0);
        assert!(!c.equal);
    }

    #[test]
    fn spectral_norm_checks() {
        assert!(h().spectral_norm_le_one(1e-9));
        assert!(CMatrix::bra(2, 0).spectral_norm_le_one(1e-9));
        assert!(!CMatrix::identity(2).scale(Complex::new(2.0, 0.0)).spectral_norm_le_one(1e-9));
        // a matrix the cheap bound cannot settle
        let m = CMatrix::from_real(2, 2, &[0.6, 0.6, 0.6, -0.6]).unwrap();
        assert!((m.spectral_norm() - 0.6 * 2f64.sqrt()).abs() < 1e-9);
        assert!(m.spectral_norm_le_one(1e-9));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            CMatrix::new(2, 2, vec![ONE; 3]),
            Err(LinalgError::Length { .. })
        ));
        assert!(matches!(
            CMatrix::new(1, 1, vec![Complex::new(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let m = CMatrix::new(1, 2, vec![Complex::new(1.0, 0.0), Complex::new(0.5, -2.0)]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"rows":1,"cols":2,"entries":[[1.0,0.0],[0.5,-2.0]]}"#);
        let back: CMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
