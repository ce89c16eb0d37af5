use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{ring_for, root_in};
use crate::error::{Error, Result};
use crate::matrices::phase::lcm;
use crate::matrices::{Basis, ComplexMatrix, ExactMatrix, PhaseMatrix};
use crate::scalar::Real;
use crate::CyclotomicInt;

/// Which side a monomial multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Phases of a monomial matrix: all exact roots of unity or all float angles.
#[derive(Debug, Clone, PartialEq)]
pub enum MonomialPhases<T: Real = f64> {
    Exact { order: u32, exps: Vec<u32> },
    Float(Vec<T>),
}

/// Permutation times diagonal phases, with `M[perm[k], k] = e^{iθ_k}`.
///
/// Right multiplication `A·M` sends column `perm[k]` of `A` (times the phase)
/// to column `k`; left multiplication `M·A` sends row `j` of `A` (times the
/// phase) to row `perm[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMatrix<T: Real = f64> {
    perm: Vec<usize>,
    phases: MonomialPhases<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PhaseKind {
    Exact,
    Float,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPhases<T> {
    Exact(Vec<(u32, u32)>),
    Float(Vec<T>),
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct RawMonomial<T: Real> {
    perm: Vec<usize>,
    phase_kind: PhaseKind,
    phases: RawPhases<T>,
}

impl<T: Real> Serialize for MonomialMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (phase_kind, phases) = match &self.phases {
            MonomialPhases::Exact { order, exps } => (
                PhaseKind::Exact,
                RawPhases::Exact(exps.iter().map(|&e| (*order, e)).collect()),
            ),
            MonomialPhases::Float(a) => (PhaseKind::Float, RawPhases::Float(a.clone())),
        };
        RawMonomial {
            perm: self.perm.clone(),
            phase_kind,
            phases,
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for MonomialMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawMonomial::<T>::deserialize(d)?;
        let m = match (raw.phase_kind, raw.phases) {
            (PhaseKind::Exact, RawPhases::Exact(pairs)) => {
                let order = pairs.iter().fold(1, |l, (q, _)| lcm(l, (*q).max(1)));
                if pairs.iter().any(|(q, _)| *q == 0) {
                    return Err(D::Error::custom("root order must be positive"));
                }
                let exps = pairs.iter().map(|(q, e)| (e % q) * (order / q)).collect();
                MonomialMatrix::exact(raw.perm, order, exps)
            }
            (PhaseKind::Float, RawPhases::Float(a)) => MonomialMatrix::float(raw.perm, a),
            (PhaseKind::Float, RawPhases::Exact(_)) => return Err(D::Error::custom("float phases must be angles")),
            (PhaseKind::Exact, RawPhases::Float(_)) => {
                return Err(D::Error::custom("exact phases must be (order, exponent) pairs"))
            }
        };
        m.map_err(D::Error::custom)
    }
}

fn check_perm(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

pub(crate) fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

impl<T: Real> MonomialMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            perm: (0..dim).collect(),
            phases: MonomialPhases::Exact {
                order: 1,
                exps: vec![0; dim],
            },
        }
    }

    pub fn exact(perm: Vec<usize>, order: u32, exps: Vec<u32>) -> Result<Self> {
        check_perm(&perm)?;
        if order == 0 || exps.len() != perm.len() {
            return Err(Error::Mismatch("one phase per column, positive order".into()));
        }
        let exps = exps.into_iter().map(|e| e % order).collect();
        Ok(Self {
            perm,
            phases: MonomialPhases::Exact { order, exps },
        })
    }

    pub fn float(perm: Vec<usize>, angles: Vec<T>) -> Result<Self> {
        check_perm(&perm)?;
        if angles.len() != perm.len() || angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Mismatch("one finite angle per column".into()));
        }
        Ok(Self {
            perm,
            phases: MonomialPhases::Float(angles),
        })
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let d = perm.len();
        Self::exact(perm, 1, vec![0; d])
    }

    pub fn diagonal(order: u32, exps: Vec<u32>) -> Result<Self> {
        Self::exact((0..exps.len()).collect(), order, exps)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &MonomialPhases<T> {
        &self.phases
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.phases, MonomialPhases::Exact { .. })
    }

    pub fn phase(&self, k: usize) -> Complex<T> {
        match &self.phases {
            MonomialPhases::Exact { order, exps } => {
                let theta = T::TAU() * T::from_u32(exps[k]).expect("fits") / T::from_u32(*order).expect("fits");
                Complex::from_polar(T::one(), theta)
            }
            MonomialPhases::Float(a) => Complex::from_polar(T::one(), a[k]),
        }
    }

    pub fn inverse(&self) -> Self {
        let perm = invert_perm(&self.perm);
        let phases = match &self.phases {
            MonomialPhases::Exact { order, exps } => {
                let mut out = vec![0; exps.len()];
                for (k, &p) in self.perm.iter().enumerate() {
                    out[p] = (order - exps[k]) % order;
                }
                MonomialPhases::Exact {
                    order: *order,
                    exps: out,
                }
            }
            MonomialPhases::Float(a) => {
                let mut out = vec![T::zero(); a.len()];
                for (k, &p) in self.perm.iter().enumerate() {
                    out[p] = -a[k];
                }
                MonomialPhases::Float(out)
            }
        };
        Self { perm, phases }
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        let mut cols = vec![vec![Complex::new(T::zero(), T::zero()); d]; d];
        for k in 0..d {
            cols[k][self.perm[k]] = self.phase(k);
        }
        ComplexMatrix::from_columns(&cols).expect("square")
    }

    pub fn to_exact(&self) -> Result<ExactMatrix> {
        let MonomialPhases::Exact { order, exps } = &self.phases else {
            return Err(Error::BackendMismatch);
        };
        let q = ring_for(*order)?;
        let d = self.dim();
        let mut num = vec![CyclotomicInt::zero(q); d * d];
        for k in 0..d {
            num[self.perm[k] * d + k] = root_in(q, *order, exps[k] as i64)?;
        }
        ExactMatrix::from_parts(d, q, num, 1)
    }

    /// `M·A` or `A·M`; exact whenever both factors are exact.
    pub fn apply(&self, a: &Basis<T>, side: Side) -> Result<Basis<T>> {
        if a.dim() != self.dim() {
            return Err(Error::Mismatch(format!(
                "monomial dim {} vs matrix dim {}",
                self.dim(),
                a.dim()
            )));
        }
        match (&self.phases, a) {
            (MonomialPhases::Exact { order, exps }, Basis::Phase(p)) => {
                let q = lcm(*order, p.order());
                let p = p.embed(q)?;
                let step = (q / order) as i64;
                let inv = invert_perm(&self.perm);
                let out = match side {
                    Side::Left => PhaseMatrix::from_fn(p.dim(), q, |row, k| {
                        let j = inv[row];
                        p.exp(j, k) as i64 + exps[j] as i64 * step
                    }),
                    Side::Right => {
                        PhaseMatrix::from_fn(p.dim(), q, |j, k| p.exp(j, self.perm[k]) as i64 + exps[k] as i64 * step)
                    }
                };
                Ok(Basis::Phase(out))
            }
            (MonomialPhases::Exact { .. }, Basis::Identity { .. }) => Ok(Basis::Exact(self.to_exact()?)),
            (MonomialPhases::Exact { .. }, Basis::Exact(x)) => {
                let m = self.to_exact()?;
                let prod = match side {
                    Side::Left => m.mul(x)?,
                    Side::Right => x.mul(&m)?,
                };
                Ok(Basis::Exact(prod))
            }
            _ => {
                let m = self.to_complex();
                let x = a.to_complex();
                let prod = match side {
                    Side::Left => m.mul(&x)?,
                    Side::Right => x.mul(&m)?,
                };
                Ok(Basis::Complex(prod))
            }
        }
    }
}

/// `monomial_apply` in free-function form.
pub fn monomial_apply<T: Real>(m: &MonomialMatrix<T>, a: &Basis<T>, side: Side) -> Result<Basis<T>> {
    m.apply(a, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_left_on_f3_gives_h3() {
        let d = MonomialMatrix::<f64>::diagonal(3, vec![0, 1, 1]).unwrap();
        let f3 = Basis::Phase(PhaseMatrix::fourier(3));
        let Basis::Phase(h) = d.apply(&f3, Side::Left).unwrap() else {
            panic!("exact result expected")
        };
        // columns v1 = (1,ω,ω), v2 = (1,ω²,1), v3 = (1,1,ω²)
        assert_eq!(h.exps(), &[vec![0, 0, 0], vec![1, 2, 0], vec![1, 0, 2]]);
    }

    #[test]
    fn identity_is_neutral() {
        let f = Basis::<f64>::Phase(PhaseMatrix::fourier(5));
        let id = MonomialMatrix::identity(5);
        assert_eq!(id.apply(&f, Side::Left).unwrap(), f);
        assert_eq!(id.apply(&f, Side::Right).unwrap(), f);
    }

    #[test]
    fn exact_and_float_agree() {
        let m = MonomialMatrix::<f64>::exact(vec![2, 0, 1], 6, vec![1, 3, 5]).unwrap();
        let a = PhaseMatrix::fourier(3);
        for side in [Side::Left, Side::Right] {
            let exact = m.apply(&Basis::Phase(a.clone()), side).unwrap().to_complex();
            let float = match side {
                Side::Left => m.to_complex().mul(&a.to_complex()).unwrap(),
                Side::Right => a.to_complex().mul(&m.to_complex()).unwrap(),
            };
            assert!(exact.max_abs_diff(&float) < 1e-12);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = MonomialMatrix::<f64>::exact(vec![1, 2, 0], 5, vec![1, 2, 3]).unwrap();
        let p = m.to_complex().mul(&m.inverse().to_complex()).unwrap();
        assert!(p.approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn json_round_trip() {
        let m = MonomialMatrix::<f64>::exact(vec![1, 0], 10, vec![3, 7]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"perm":[1,0],"phase_kind":"exact","phases":[[10,3],[10,7]]}"#);
        assert_eq!(serde_json::from_str::<MonomialMatrix>(&s).unwrap(), m);
        let f = MonomialMatrix::<f64>::float(vec![0, 1], vec![0.25, -1.5]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<MonomialMatrix>(&s).unwrap(), f);
        assert!(
            serde_json::from_str::<MonomialMatrix>(r#"{"perm":[0,0],"phase_kind":"float","phases":[0.0,0.0]}"#)
                .is_err()
        );
    }
}
