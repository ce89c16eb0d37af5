//! The MU predicate on vector pairs and the Hadamard test.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{Basis, Vector};
use crate::scalar::Real;

/// Arithmetic used to decide an overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend<T: Real = f64> {
    /// Cyclotomic arithmetic; zero rounding error.
    Exact,
    /// Floating point with residual tolerance `tol`.
    Float { tol: T },
}

impl<T: Real> Backend<T> {
    pub fn float_default() -> Self {
        Backend::Float {
            tol: T::lit(crate::TOL),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapKind {
    Orthogonal,
    Unbiased,
    Neither,
}

/// Verdict of [`mu_overlap`] with the residual `|⟨u,v⟩|²` (orthogonal),
/// `||⟨u,v⟩|² − 1/d|` (unbiased) or the smaller of the two (neither).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap<T: Real = f64> {
    pub kind: OverlapKind,
    pub residual: T,
    pub exact: bool,
}

fn float_inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

/// Classifies a pair of unit vectors as orthogonal, unbiased or neither.
pub fn mu_overlap<T: Real>(u: &Vector<T>, v: &Vector<T>, backend: Backend<T>) -> Result<Overlap<T>> {
    let d = u.dim();
    if d != v.dim() {
        return Err(Error::Mismatch(format!("vector dims {d} and {}", v.dim())));
    }
    let inv_d = T::one() / T::from_usize_lossy(d);
    match backend {
        Backend::Exact => {
            let (Vector::Exact(a), Vector::Exact(b)) = (u, v) else {
                return Err(Error::Mismatch("exact backend needs exact vectors".into()));
            };
            let (s, scale) = a.inner(b)?;
            let p = s.to_complex::<T>().norm_sqr() / T::from_i64(scale).expect("fits");
            if s.is_zero() {
                return Ok(Overlap {
                    kind: OverlapKind::Orthogonal,
                    residual: T::zero(),
                    exact: true,
                });
            }
            let n = s.norm_sqr()?.as_integer()?;
            if n.map(|n| n * d as i64) == Some(scale) {
                return Ok(Overlap {
                    kind: OverlapKind::Unbiased,
                    residual: T::zero(),
                    exact: true,
                });
            }
            Ok(Overlap {
                kind: OverlapKind::Neither,
                residual: p.min((p - inv_d).abs()),
                exact: true,
            })
        }
        Backend::Float { tol } => {
            let p = float_inner(&u.to_complex(), &v.to_complex()).norm_sqr();
            let (ro, ru) = (p, (p - inv_d).abs());
            let kind = if ro <= tol {
                OverlapKind::Orthogonal
            } else if ru <= tol {
                OverlapKind::Unbiased
            } else {
                OverlapKind::Neither
            };
            let residual = match kind {
                OverlapKind::Orthogonal => ro,
                OverlapKind::Unbiased => ru,
                OverlapKind::Neither => ro.min(ru),
            };
            Ok(Overlap {
                kind,
                residual,
                exact: false,
            })
        }
    }
}

/// First reason a matrix fails to be complex Hadamard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HadamardViolation {
    /// Entry whose modulus is not `1/√d`.
    Entry { row: usize, col: usize, modulus: f64 },
    /// Column pair that is not orthogonal.
    Columns { a: usize, b: usize, residual: f64 },
}

fn backend_for<T: Real>(b: &Basis<T>, tol: T) -> Backend<T> {
    if b.is_exact() {
        Backend::Exact
    } else {
        Backend::Float { tol }
    }
}

/// `None` when the matrix is complex Hadamard; otherwise the first violation.
///
/// Exact matrices are decided exactly; floating ones at tolerance `tol`.
pub fn hadamard_check<T: Real>(m: &Basis<T>, tol: T) -> Option<HadamardViolation> {
    let d = m.dim();
    let inv_sqrt = 1.0 / (d as f64).sqrt();
    match m {
        Basis::Identity { .. } => {
            if d == 1 {
                return None;
            }
            return Some(HadamardViolation::Entry {
                row: 0,
                col: 0,
                modulus: 1.0,
            });
        }
        Basis::Phase(_) => {}
        Basis::Exact(x) => {
            for j in 0..d {
                for k in 0..d {
                    let n = x.num(j, k).norm_sqr().ok().and_then(|n| n.as_integer().ok().flatten());
                    if n.map(|n| n * d as i64) != Some(x.scale()) {
                        let modulus = x.num(j, k).to_complex::<f64>().norm() / (x.scale() as f64).sqrt();
                        return Some(HadamardViolation::Entry {
                            row: j,
                            col: k,
                            modulus,
                        });
                    }
                }
            }
        }
        Basis::Complex(c) => {
            for j in 0..d {
                for k in 0..d {
                    let modulus = c.get(j, k).norm();
                    let dev = (modulus - T::lit(inv_sqrt)).abs();
                    if dev > tol {
                        return Some(HadamardViolation::Entry {
                            row: j,
                            col: k,
                            modulus: modulus.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                }
            }
        }
    }
    let backend = backend_for(m, tol);
    for a in 0..d {
        for b in a + 1..d {
            let o = mu_overlap(&m.column(a), &m.column(b), backend).expect("columns of one matrix share dim and order");
            if o.kind != OverlapKind::Orthogonal {
                return Some(HadamardViolation::Columns {
                    a,
                    b,
                    residual: o.residual.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    None
}

pub fn is_hadamard<T: Real>(m: &Basis<T>, tol: T) -> bool {
    hadamard_check(m, tol).is_none()
}

/// Summary of the `d²` cross overlaps between two bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAudit {
    pub a: usize,
    pub b: usize,
    pub overlaps: usize,
    pub unbiased: usize,
    pub exact: bool,
    pub max_residual: f64,
}

impl PairAudit {
    pub fn passed(&self) -> bool {
        self.unbiased == self.overlaps
    }
}

/// Checks every cross overlap between bases `a` and `b` of a set.
///
/// `max_residual` is the largest `||⟨u,v⟩|² − 1/d|` seen.
pub fn audit_pair<T: Real>(x: &Basis<T>, y: &Basis<T>, a: usize, b: usize, tol: T) -> Result<PairAudit> {
    let backend = if x.is_exact() && y.is_exact() {
        Backend::Exact
    } else {
        Backend::Float { tol }
    };
    let d = x.dim();
    let inv_d = 1.0 / d as f64;
    let mut unbiased = 0;
    let mut worst = 0.0f64;
    for j in 0..d {
        let u = x.column(j);
        for k in 0..d {
            let v = y.column(k);
            let o = mu_overlap(&u, &v, backend)?;
            let dev = if o.kind == OverlapKind::Unbiased {
                unbiased += 1;
                o.residual.to_f64().unwrap_or(f64::NAN)
            } else {
                let p = float_inner(&u.to_complex(), &v.to_complex()).norm_sqr();
                (p.to_f64().unwrap_or(f64::NAN) - inv_d).abs()
            };
            worst = worst.max(dev);
        }
    }
    Ok(PairAudit {
        a,
        b,
        overlaps: d * d,
        unbiased,
        exact: matches!(backend, Backend::Exact),
        max_residual: worst,
    })
}

/// True when all columns are orthonormal (exactly or at `tol`).
pub fn is_orthonormal<T: Real>(b: &Basis<T>, tol: T) -> Result<bool> {
    let backend = backend_for(b, tol);
    let d = b.dim();
    for j in 0..d {
        for k in j..d {
            let (u, v) = (b.column(j), b.column(k));
            if j == k {
                let norm = match (&u, backend) {
                    (Vector::Exact(e), Backend::Exact) => {
                        // ⟨e,e⟩ = s/√m, so unit norm means s > 0 and s² = m
                        let (s, m) = e.inner(e)?;
                        matches!(s.as_integer()?, Some(n) if n > 0 && n * n == m)
                    }
                    _ => {
                        let z = u.to_complex();
                        (float_inner(&z, &z).re - T::one()).abs() <= tol
                    }
                };
                if !norm {
                    return Ok(false);
                }
            } else if mu_overlap(&u, &v, backend)?.kind != OverlapKind::Orthogonal {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Full audit of a set: every basis orthonormal, every pair unbiased.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetAudit {
    pub dim: usize,
    pub bases: usize,
    pub orthonormal: Vec<bool>,
    pub pairs: Vec<PairAudit>,
    pub fully_exact: bool,
}

impl SetAudit {
    pub fn passed(&self) -> bool {
        self.orthonormal.iter().all(|&b| b) && self.pairs.iter().all(PairAudit::passed)
    }

    pub fn overlaps_checked(&self) -> usize {
        self.pairs.iter().map(|p| p.overlaps).sum()
    }
}

pub fn audit_set<T: Real>(set: &crate::matrices::MuBasisSet<T>, tol: T) -> Result<SetAudit> {
    let bases = set.bases();
    let orthonormal = bases
        .iter()
        .map(|b| is_orthonormal(b, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for a in 0..bases.len() {
        for b in a + 1..bases.len() {
            pairs.push(audit_pair(&bases[a], &bases[b], a, b, tol)?);
        }
    }
    Ok(SetAudit {
        dim: set.dim(),
        bases: bases.len(),
        orthonormal,
        fully_exact: set.is_exact(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{ComplexMatrix, ExactVector, PhaseMatrix};

    fn exact(order: u32, exps: &[u32]) -> Vector {
        Vector::Exact(ExactVector::from_phases(order, exps))
    }

    #[test]
    fn fourier_columns_are_orthogonal() {
        let f = PhaseMatrix::fourier(5);
        let o = mu_overlap::<f64>(&Vector::Exact(f.column(0)), &Vector::Exact(f.column(1)), Backend::Exact).unwrap();
        assert_eq!(o.kind, OverlapKind::Orthogonal);
    }

    #[test]
    fn identity_column_unbiased_to_fourier() {
        let f = PhaseMatrix::fourier(3);
        for k in 0..3 {
            let o = mu_overlap::<f64>(
                &Vector::Exact(ExactVector::unit(3, 0)),
                &Vector::Exact(f.column(k)),
                Backend::Exact,
            )
            .unwrap();
            assert_eq!(o.kind, OverlapKind::Unbiased);
        }
    }

    #[test]
    fn qubit_pair_orthogonal() {
        let o = mu_overlap::<f64>(&exact(4, &[0, 1]), &exact(4, &[0, 3]), Backend::Exact).unwrap();
        assert_eq!(o.kind, OverlapKind::Orthogonal);
        let o = mu_overlap::<f64>(&exact(4, &[0, 1]), &exact(4, &[0, 3]), Backend::float_default()).unwrap();
        assert_eq!(o.kind, OverlapKind::Orthogonal);
    }

    #[test]
    fn neither_has_positive_residual() {
        let o = mu_overlap::<f64>(&exact(5, &[0, 0, 0, 0, 0]), &exact(5, &[0, 0, 0, 0, 1]), Backend::Exact).unwrap();
        assert_eq!(o.kind, OverlapKind::Neither);
        assert!(o.residual > 0.01);
    }

    #[test]
    fn hadamard_checks() {
        assert!(is_hadamard(&Basis::<f64>::Phase(PhaseMatrix::fourier(5)), 1e-9));
        assert_eq!(
            hadamard_check(&Basis::<f64>::identity(3), 1e-9),
            Some(HadamardViolation::Entry {
                row: 0,
                col: 0,
                modulus: 1.0
            })
        );
        let mut exps = PhaseMatrix::fourier(5).exps().to_vec();
        exps[1][1] = 4;
        let broken = Basis::<f64>::Phase(PhaseMatrix::new(5, exps).unwrap());
        assert!(matches!(
            hadamard_check(&broken, 1e-9),
            Some(HadamardViolation::Columns { a: 0, b: 1, .. })
        ));
        let c = Basis::Complex(ComplexMatrix::<f64>::identity(2));
        assert!(!is_hadamard(&c, 1e-9));
    }

    #[test]
    fn fourier_is_orthonormal() {
        for d in 2..=5 {
            let f = Basis::<f64>::Phase(PhaseMatrix::fourier(d));
            assert!(is_orthonormal(&f, 1e-9).unwrap());
            assert!(is_orthonormal(&Basis::Complex(f.to_complex()), 1e-9).unwrap());
        }
        let m = ComplexMatrix::<f64>::from_fn(2, |_, _| num_complex::Complex::new(0.5, 0.0));
        assert!(!is_orthonormal(&Basis::Complex(m), 1e-9).unwrap());
    }

    #[test]
    fn exact_and_float_verdicts_agree_on_fourier_family() {
        for d in 2..=5 {
            let f = PhaseMatrix::fourier(d);
            let e = Basis::<f64>::Phase(f.clone());
            let c = Basis::<f64>::Complex(f.to_complex());
            assert_eq!(is_hadamard(&e, 1e-10), is_hadamard(&c, 1e-10));
        }
    }
}
