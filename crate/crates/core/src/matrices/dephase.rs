//! Bringing an MU set into standard form.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrices::phase::lcm;
use crate::matrices::{audit_set, Basis, ComplexMatrix, MuBasisSet, PhaseMatrix};
use crate::scalar::Real;

fn unit_phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let n = z.norm();
    if n == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z.conj() / n
    }
}

/// Rotates the set so basis 0 is `I`, basis 1 has a flat first column and
/// every other basis has a flat first row. Column order is never changed.
///
/// Exact sets stay exact whenever every rotated basis is Butson; otherwise
/// the float backend is used. The MU verdicts of all basis pairs are
/// re-audited afterwards.
pub fn dephase<T: Real>(set: &MuBasisSet<T>) -> Result<MuBasisSet<T>> {
    let tol = T::lit(crate::TOL);
    let bases = set.bases();
    let d = set.dim();
    let b0 = &bases[0];
    let unitary = match b0.to_exact() {
        Some(x) => x.adjoint().mul(&x)?.is_identity()?,
        None => b0.to_complex().unitarity_defect() <= tol,
    };
    if !unitary {
        return Err(Error::NotUnitary);
    }
    let u = b0.adjoint();
    let rotated = bases[1..].iter().map(|b| u.mul(b)).collect::<Result<Vec<_>>>()?;

    let out = match exact_phases(&rotated) {
        Some(phases) => dephase_exact(d, phases),
        None => dephase_float(d, &rotated),
    };
    let out = MuBasisSet::new(out)?;

    let before = audit_set(set, tol)?;
    let after = audit_set(&out, tol)?;
    let verdicts = |a: &crate::matrices::SetAudit| a.pairs.iter().map(|p| p.unbiased).collect::<Vec<_>>();
    if verdicts(&before) != verdicts(&after) {
        return Err(Error::Invalid("dephasing changed MU relations".into()));
    }
    Ok(out)
}

fn exact_phases<T: Real>(rotated: &[Basis<T>]) -> Option<Vec<PhaseMatrix>> {
    let phases = rotated
        .iter()
        .map(|b| match b {
            Basis::Phase(p) => Some(p.clone()),
            Basis::Exact(x) => x.to_phase().ok().flatten(),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()?;
    let order = phases.iter().fold(1, |acc, p| lcm(acc, p.order()));
    phases.iter().map(|p| p.embed(order).ok()).collect()
}

fn dephase_exact<T: Real>(d: usize, mut phases: Vec<PhaseMatrix>) -> Vec<Basis<T>> {
    let mut out = vec![Basis::identity(d)];
    if let Some(first) = phases.first() {
        let left: Vec<i64> = first.column_exps(0).iter().map(|&e| -(e as i64)).collect();
        for p in phases.iter_mut() {
            *p = p.left_diag(&left);
        }
    }
    for p in phases {
        let right: Vec<i64> = p.exps()[0].iter().map(|&e| -(e as i64)).collect();
        out.push(Basis::Phase(p.right_diag(&right).minimize_order()));
    }
    out
}

fn dephase_float<T: Real>(d: usize, rotated: &[Basis<T>]) -> Vec<Basis<T>> {
    let mut mats: Vec<ComplexMatrix<T>> = rotated.iter().map(Basis::to_complex).collect();
    if let Some(first) = mats.first() {
        let left: Vec<Complex<T>> = first.column(0).into_iter().map(unit_phase).collect();
        for m in mats.iter_mut() {
            *m = m.left_diag(&left);
        }
    }
    let mut out = vec![Basis::identity(d)];
    for m in mats {
        let right: Vec<Complex<T>> = m.row(0).into_iter().map(unit_phase).collect();
        out.push(Basis::Complex(m.right_diag(&right)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scrambled_fourier_returns_to_fourier() {
        let f = PhaseMatrix::fourier(5);
        let set =
            MuBasisSet::<f64>::new(vec![Basis::identity(5), Basis::Phase(f.right_diag(&[3, 1, 4, 1, 2]))]).unwrap();
        assert!(!set.standard_form());
        let out = dephase(&set).unwrap();
        assert!(out.standard_form());
        assert_eq!(out.bases()[1], Basis::Phase(f));
    }

    #[test]
    fn standard_set_is_fixed() {
        let set = MuBasisSet::<f64>::new(vec![Basis::identity(3), Basis::Phase(PhaseMatrix::fourier(3))]).unwrap();
        assert_eq!(dephase(&set).unwrap(), set);
    }

    #[test]
    fn qubit_set_rotated_to_identity() {
        let f2 = PhaseMatrix::fourier(2);
        let h2 = PhaseMatrix::new(4, vec![vec![0, 0], vec![1, 3]]).unwrap();
        let f2h2 = Basis::<f64>::Phase(f2.clone()).mul(&Basis::Phase(h2)).unwrap();
        let set = MuBasisSet::new(vec![Basis::Phase(f2), f2h2]).unwrap();
        let out = dephase(&set).unwrap();
        assert!(out.standard_form());
        assert_eq!(out.bases()[0], Basis::identity(2));
        assert!(out.is_exact());
    }

    #[test]
    fn float_sets_dephase() {
        let f = PhaseMatrix::fourier(3).to_complex::<f64>();
        let diag = [0.3, -1.1, 2.0].map(|a: f64| Complex::from_polar(1.0, a));
        let set = MuBasisSet::new(vec![Basis::identity(3), Basis::Complex(f.right_diag(&diag))]).unwrap();
        let out = dephase(&set).unwrap();
        assert!(out.standard_form());
        assert!(out.bases()[1].to_complex().approx_eq(&f, 1e-12));
    }

    #[test]
    fn rejects_non_unitary_first_basis() {
        let m = ComplexMatrix::<f64>::from_fn(2, |_, _| Complex::new(1.0, 0.0));
        let set = MuBasisSet::new(vec![Basis::Complex(m), Basis::identity(2)]).unwrap();
        assert!(matches!(dephase(&set), Err(Error::NotUnitary)));
    }
}
