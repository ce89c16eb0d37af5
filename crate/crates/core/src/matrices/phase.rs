use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{ring_for, root_in};
use crate::error::{Error, Result};
use crate::matrices::{ComplexMatrix, ExactMatrix, ExactVector};
use crate::scalar::Real;
use crate::CyclotomicInt;

/// A Butson-type matrix `(ω_q^{exps[j][k]} / √d)_{jk}`.
///
/// Every entry has modulus exactly `1/√d` by construction; whether the
/// columns are orthogonal is checked separately with
/// [`crate::matrices::hadamard_check`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPhase", into = "RawPhase")]
pub struct PhaseMatrix {
    dim: usize,
    order: u32,
    exps: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawPhase {
    dim: usize,
    order: u32,
    exps: Vec<Vec<u32>>,
}

impl TryFrom<RawPhase> for PhaseMatrix {
    type Error = Error;
    fn try_from(r: RawPhase) -> Result<Self> {
        PhaseMatrix::new(r.order, r.exps).and_then(|m| {
            if m.dim == r.dim {
                Ok(m)
            } else {
                Err(Error::Mismatch(format!("dim {} vs {} rows", r.dim, m.dim)))
            }
        })
    }
}

impl From<PhaseMatrix> for RawPhase {
    fn from(m: PhaseMatrix) -> Self {
        RawPhase {
            dim: m.dim,
            order: m.order,
            exps: m.exps,
        }
    }
}

impl PhaseMatrix {
    /// Builds a matrix from row-major exponents, reducing them modulo `order`.
    pub fn new(order: u32, exps: Vec<Vec<u32>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("root order must be positive".into()));
        }
        let dim = exps.len();
        if dim == 0 || exps.iter().any(|r| r.len() != dim) {
            return Err(Error::Mismatch("exponent grid must be square and non-empty".into()));
        }
        let exps = exps
            .into_iter()
            .map(|r| r.into_iter().map(|e| e % order).collect())
            .collect();
        Ok(Self { dim, order, exps })
    }

    pub fn from_fn(dim: usize, order: u32, f: impl Fn(usize, usize) -> i64) -> Self {
        let exps = (0..dim)
            .map(|j| (0..dim).map(|k| f(j, k).rem_euclid(order as i64) as u32).collect())
            .collect();
        Self { dim, order, exps }
    }

    /// The `d × d` Fourier matrix, entries `ω_d^{jk}`.
    pub fn fourier(dim: usize) -> Self {
        Self::from_fn(dim, dim as u32, |j, k| (j * k) as i64)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exps(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn exp(&self, row: usize, col: usize) -> u32 {
        self.exps[row][col]
    }

    pub fn column_exps(&self, col: usize) -> Vec<u32> {
        self.exps.iter().map(|r| r[col]).collect()
    }

    pub fn column(&self, col: usize) -> ExactVector {
        ExactVector::from_phases(self.order, &self.column_exps(col))
    }

    /// Same matrix with exponents expressed over `ω_target`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if !target.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: target,
            });
        }
        let step = target / self.order;
        Ok(Self::from_fn(self.dim, target, |j, k| (self.exps[j][k] * step) as i64))
    }

    /// Smallest order able to represent the same entries.
    pub fn minimize_order(&self) -> Self {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = self.exps.iter().flatten().fold(self.order, |g, &e| gcd(g, e));
        if g <= 1 {
            return self.clone();
        }
        Self::from_fn(self.dim, self.order / g, |j, k| (self.exps[j][k] / g) as i64)
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| -(self.exps[j][k] as i64))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| self.exps[k][j] as i64)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| -(self.exps[k][j] as i64))
    }

    /// `diag(ω^{d_0}, …) · self`.
    pub fn left_diag(&self, diag: &[i64]) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| self.exps[j][k] as i64 + diag[j])
    }

    /// `self · diag(ω^{d_0}, …)`.
    pub fn right_diag(&self, diag: &[i64]) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| self.exps[j][k] as i64 + diag[k])
    }

    /// Columns reordered so that column `k` of the result is column `perm[k]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| self.exps[j][perm[k]] as i64)
    }

    /// Rows reordered so that row `j` of the result is row `perm[j]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.dim, self.order, |j, k| self.exps[perm[j]][k] as i64)
    }

    /// First row all zero exponents (entries `1/√d`).
    pub fn is_row0_dephased(&self) -> bool {
        self.exps[0].iter().all(|&e| e == 0)
    }

    pub fn is_col0_dephased(&self) -> bool {
        self.exps.iter().all(|r| r[0] == 0)
    }

    /// Columns as sorted exponent vectors, a permutation-invariant key.
    pub fn column_set(&self) -> Vec<Vec<u32>> {
        let mut cols: Vec<_> = (0..self.dim).map(|k| self.column_exps(k)).collect();
        cols.sort();
        cols
    }

    /// Equality up to a permutation of the columns.
    pub fn same_columns(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let q = lcm(self.order, other.order);
        match (self.embed(q), other.embed(q)) {
            (Ok(a), Ok(b)) => a.column_set() == b.column_set(),
            _ => false,
        }
    }

    pub fn to_exact(&self) -> ExactMatrix {
        let ring = ring_for(self.order).unwrap_or(self.order);
        let entry =
            |e: u32| root_in(ring, self.order, e as i64).unwrap_or_else(|_| CyclotomicInt::root(self.order, e as i64));
        let num = (0..self.dim)
            .flat_map(|j| (0..self.dim).map(move |k| entry(self.exps[j][k])))
            .collect();
        ExactMatrix::from_parts(self.dim, ring, num, self.dim as i64).expect("phase matrix parts are consistent")
    }

    pub fn to_complex<T: Real>(&self) -> ComplexMatrix<T> {
        let s = T::one() / T::from_usize_lossy(self.dim).sqrt();
        let q = T::from_u32(self.order).expect("order fits");
        ComplexMatrix::from_fn(self.dim, |j, k| {
            let theta = T::TAU() * T::from_u32(self.exps[j][k]).expect("exp fits") / q;
            Complex::from_polar(s, theta)
        })
    }
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_of_fourier_is_column_permutation() {
        let f = PhaseMatrix::fourier(5);
        let fd = f.adjoint();
        assert!(fd.same_columns(&f));
        assert_ne!(fd, f);
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let f = PhaseMatrix::fourier(5).left_diag(&[0, 1, 4, 4, 1]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            serde_json::to_string(&serde_json::from_str::<PhaseMatrix>(&s).unwrap()).unwrap()
        );
        assert!(s.starts_with("{\"dim\":5,\"order\":5,\"exps\":[[0,0,0,0,0],[1,2,3,4,0]"));
    }

    #[test]
    fn rejects_ragged_grid() {
        assert!(PhaseMatrix::new(3, vec![vec![0, 0], vec![0]]).is_err());
        assert!(serde_json::from_str::<PhaseMatrix>(r#"{"dim":3,"order":3,"exps":[[0,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn minimize_and_embed() {
        let f2 = PhaseMatrix::fourier(2).embed(4).unwrap();
        assert_eq!(f2.order(), 4);
        assert_eq!(f2.minimize_order(), PhaseMatrix::fourier(2));
    }
}
