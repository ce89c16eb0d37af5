use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense `d × d` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real = f64> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct RawComplex<T: Real> {
    dim: usize,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

impl<T: Real> Serialize for ComplexMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |f: fn(&Complex<T>) -> T| -> Vec<Vec<T>> {
            (0..self.dim)
                .map(|j| (0..self.dim).map(|k| f(&self.get(j, k))).collect())
                .collect()
        };
        RawComplex {
            dim: self.dim,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComplex::<T>::deserialize(d)?;
        let n = raw.dim;
        let square = |g: &Vec<Vec<T>>| g.len() == n && g.iter().all(|r| r.len() == n);
        if !square(&raw.re) || !square(&raw.im) {
            return Err(serde::de::Error::custom("re/im grids must be dim × dim"));
        }
        let entries = (0..n * n)
            .map(|i| Complex::new(raw.re[i / n][i % n], raw.im[i / n][i % n]))
            .collect();
        ComplexMatrix::new(n, entries).map_err(serde::de::Error::custom)
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Mismatch(format!(
                "{} entries for a {dim}×{dim} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let entries = (0..dim * dim).map(|i| f(i / dim, i % dim)).collect();
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |j, k| {
            if j == k {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Matrix with entries `scale · e^{i·phases[j][k]}`.
    pub fn from_phases(phases: &[Vec<T>], scale: T) -> Self {
        Self::from_fn(phases.len(), |j, k| Complex::from_polar(scale, phases[j][k]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|j| self.get(j, col)).collect()
    }

    pub fn row(&self, row: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|k| self.get(row, k)).collect()
    }

    pub fn from_columns(cols: &[Vec<Complex<T>>]) -> Result<Self> {
        let d = cols.len();
        if cols.iter().any(|c| c.len() != d) {
            return Err(Error::Mismatch("columns must have length equal to their count".into()));
        }
        Ok(Self::from_fn(d, |j, k| cols[k][j]))
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(j, k).conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(k, j).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!("dims {} and {}", self.dim, other.dim)));
        }
        Ok(Self::from_fn(self.dim, |j, k| {
            (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                acc + self.get(j, l) * other.get(l, k)
            })
        }))
    }

    pub fn left_diag(&self, diag: &[Complex<T>]) -> Self {
        Self::from_fn(self.dim, |j, k| diag[j] * self.get(j, k))
    }

    pub fn right_diag(&self, diag: &[Complex<T>]) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(j, k) * diag[k])
    }

    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(j, perm[k]))
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(perm[j], k))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Largest deviation of `A†A` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let g = self.adjoint().mul(self).expect("square matrix times its adjoint");
        g.max_abs_diff(&Self::identity(self.dim))
    }

    /// Columns sorted by a phase-insensitive key, for permutation-invariant comparison.
    pub fn same_columns(&self, other: &Self, tol: T) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut used = vec![false; self.dim];
        (0..self.dim).all(|k| {
            let a = self.column(k);
            (0..self.dim).any(|c| {
                if used[c] {
                    return false;
                }
                let b = other.column(c);
                let close = a.iter().zip(&b).all(|(x, y)| (*x - *y).norm() <= tol);
                if close {
                    used[c] = true;
                }
                close
            })
        })
    }

    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix::from_fn(self.dim, |j, k| {
            let z = self.get(j, k);
            Complex::new(
                U::from(z.re).expect("finite value casts"),
                U::from(z.im).expect("finite value casts"),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let m = ComplexMatrix::<f64>::identity(2);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"dim":2,"re":[[1.0,0.0],[0.0,1.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#);
        let back: ComplexMatrix<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_non_finite() {
        let e = vec![Complex::new(f64::NAN, 0.0)];
        assert!(ComplexMatrix::new(1, e).is_err());
    }

    #[test]
    fn f32_backend() {
        let m = ComplexMatrix::<f32>::identity(3);
        assert!(m.unitarity_defect() < 1e-6);
    }
}
