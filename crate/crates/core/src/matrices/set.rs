use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{ComplexMatrix, ExactMatrix, ExactVector, PhaseMatrix};
use crate::scalar::Real;

/// A column vector in either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector<T: Real = f64> {
    Exact(ExactVector),
    Float(Vec<Complex<T>>),
}

impl<T: Real> Vector<T> {
    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(v) => v.dim(),
            Vector::Float(v) => v.len(),
        }
    }

    pub fn to_complex(&self) -> Vec<Complex<T>> {
        match self {
            Vector::Exact(v) => v.to_complex(),
            Vector::Float(v) => v.clone(),
        }
    }
}

/// One orthonormal basis, stored column-wise as a unitary matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum Basis<T: Real = f64> {
    Identity { dim: usize },
    Phase(PhaseMatrix),
    Exact(ExactMatrix),
    Complex(ComplexMatrix<T>),
}

impl<T: Real> Basis<T> {
    pub fn identity(dim: usize) -> Self {
        Basis::Identity { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Identity { dim } => *dim,
            Basis::Phase(p) => p.dim(),
            Basis::Exact(x) => x.dim(),
            Basis::Complex(c) => c.dim(),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Basis::Complex(_))
    }

    pub fn is_identity_variant(&self) -> bool {
        matches!(self, Basis::Identity { .. })
    }

    pub fn as_phase(&self) -> Option<&PhaseMatrix> {
        match self {
            Basis::Phase(p) => Some(p),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        match self {
            Basis::Identity { dim } => ComplexMatrix::identity(*dim),
            Basis::Phase(p) => p.to_complex(),
            Basis::Exact(x) => x.to_complex(),
            Basis::Complex(c) => c.clone(),
        }
    }

    pub fn to_exact(&self) -> Option<ExactMatrix> {
        match self {
            Basis::Identity { dim } => Some(ExactMatrix::identity(*dim)),
            Basis::Phase(p) => Some(p.to_exact()),
            Basis::Exact(x) => Some(x.clone()),
            Basis::Complex(_) => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Basis::Identity { dim } => Basis::Identity { dim: *dim },
            Basis::Phase(p) => Basis::Phase(p.conj()),
            Basis::Exact(x) => Basis::Exact(x.conj()),
            Basis::Complex(c) => Basis::Complex(c.conj()),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Basis::Identity { dim } => Basis::Identity { dim: *dim },
            Basis::Phase(p) => Basis::Phase(p.adjoint()),
            Basis::Exact(x) => Basis::Exact(x.adjoint()),
            Basis::Complex(c) => Basis::Complex(c.adjoint()),
        }
    }

    pub fn column(&self, k: usize) -> Vector<T> {
        match self {
            Basis::Identity { dim } => Vector::Exact(ExactVector::unit(*dim, k)),
            Basis::Phase(p) => Vector::Exact(p.column(k)),
            Basis::Exact(x) => Vector::Exact(x.column(k)),
            Basis::Complex(c) => Vector::Float(c.column(k)),
        }
    }

    /// Product `self · other`, exact when both factors are, simplified to a
    /// Butson or identity form when possible.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Basis::Identity { .. }, b) => Ok(b.clone()),
            (a, Basis::Identity { .. }) => Ok(a.clone()),
            (a, b) => match (a.to_exact(), b.to_exact()) {
                (Some(x), Some(y)) => Ok(Basis::from_exact(x.mul(&y)?)?),
                _ => Ok(Basis::Complex(a.to_complex().mul(&b.to_complex())?)),
            },
        }
    }

    /// Simplest exact representation of an exact matrix.
    pub fn from_exact(x: ExactMatrix) -> Result<Self> {
        if x.is_identity()? {
            return Ok(Basis::Identity { dim: x.dim() });
        }
        Ok(match x.to_phase()? {
            Some(p) => Basis::Phase(p),
            None => Basis::Exact(x),
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.to_complex().approx_eq(&other.to_complex(), tol)
    }

    /// Exact equality for exact bases; `None` when either side is floating.
    pub fn exact_eq(&self, other: &Self) -> Result<Option<bool>> {
        match (self.to_exact(), other.to_exact()) {
            (Some(a), Some(b)) => Ok(Some(a.exact_eq(&b)?)),
            _ => Ok(None),
        }
    }
}

/// An ordered set `{B_0, …, B_r}` of bases in `C^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MuBasisSet<T: Real = f64> {
    dim: usize,
    standard_form: bool,
    bases: Vec<Basis<T>>,
}

impl<T: Real> MuBasisSet<T> {
    /// Builds a set and records whether it is in standard form.
    pub fn new(bases: Vec<Basis<T>>) -> Result<Self> {
        let dim = bases
            .first()
            .map(Basis::dim)
            .ok_or_else(|| Error::Invalid("a basis set needs at least one basis".into()))?;
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(Error::Mismatch(format!("basis of dim {} in a dim-{dim} set", b.dim())));
        }
        let mut set = Self {
            dim,
            standard_form: false,
            bases,
        };
        set.standard_form = set.standard_form_violation(T::lit(crate::TOL)).is_none();
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis<T>] {
        &self.bases
    }

    pub fn into_bases(self) -> Vec<Basis<T>> {
        self.bases
    }

    pub fn standard_form(&self) -> bool {
        self.standard_form
    }

    pub fn is_exact(&self) -> bool {
        self.bases.iter().all(Basis::is_exact)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.bases.iter().map(Basis::conj).collect()).expect("same shape")
    }

    /// First failing standard-form property (i), (iii) or (iv), if any.
    pub fn standard_form_violation(&self, tol: T) -> Option<String> {
        let first = &self.bases[0];
        let is_id = match first {
            Basis::Identity { .. } => true,
            Basis::Exact(x) => x.is_identity().unwrap_or(false),
            Basis::Phase(_) => self.dim == 1,
            Basis::Complex(c) => c.approx_eq(&ComplexMatrix::identity(self.dim), tol),
        };
        if !is_id {
            return Some("basis 0 is not the identity".into());
        }
        let flat = T::one() / T::from_usize_lossy(self.dim).sqrt();
        let near_flat = |z: Complex<T>| (z - Complex::new(flat, T::zero())).norm() <= tol;
        for (i, b) in self.bases.iter().enumerate().skip(1) {
            let row_ok = match b {
                Basis::Phase(p) => p.is_row0_dephased(),
                _ => b.to_complex().row(0).into_iter().all(near_flat),
            };
            if !row_ok {
                return Some(format!("first row of basis {i} is not flat"));
            }
        }
        if let Some(b) = self.bases.get(1) {
            let col_ok = match b {
                Basis::Phase(p) => p.is_col0_dephased(),
                _ => b.to_complex().column(0).into_iter().all(near_flat),
            };
            if !col_ok {
                return Some("first column of basis 1 is not flat".into());
            }
        }
        None
    }
}
