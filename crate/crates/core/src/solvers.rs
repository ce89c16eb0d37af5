//! Closed-form MU vectors for `d = 2…5` and constructors for the named
//! matrices of the classification.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{Basis, ComplexMatrix, ExactMatrix, ExactVector, PhaseMatrix, Vector};
use crate::scalar::Real;
use crate::CyclotomicInt;

/// Angles this close to a multiple of `π/2` are treated as that multiple.
pub const SNAP_TOL: f64 = 1e-9;

/// Diagonal exponents of `D = diag(1, ω, ω⁴, ω⁴, ω)` over `ω = e^{2πi/5}`.
pub const D5_EXPS: [u32; 5] = [0, 1, 4, 4, 1];

/// Diagonal exponents of `D = diag(1, ω, ω)` over `ω = e^{2πi/3}`.
pub const D3_EXPS: [u32; 3] = [0, 1, 1];

/// Multiple `k` of `π/2` within [`SNAP_TOL`] of `x`, reduced mod 4.
pub fn quarter_turns(x: f64) -> Option<u32> {
    let k = (x / FRAC_PI_2).round();
    ((x - k * FRAC_PI_2).abs() <= SNAP_TOL).then(|| (k as i64).rem_euclid(4) as u32)
}

/// The parameter `x ∈ [0, π]` of `F4(x)`, remembering when it is a
/// multiple of `π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F4Angle {
    value: f64,
    quarter: Option<u32>,
}

impl F4Angle {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || !(-SNAP_TOL..=PI + SNAP_TOL).contains(&x) {
            return Err(Error::Domain(format!("x = {x} is outside [0, π]")));
        }
        Ok(match quarter_turns(x) {
            Some(k) => Self::quarter(k),
            None => Self {
                value: x,
                quarter: None,
            },
        })
    }

    /// `x = kπ/2` for `k ∈ {0, 1, 2}`.
    pub fn quarter(k: u32) -> Self {
        assert!(k <= 2, "x must lie in [0, π]");
        Self {
            value: k as f64 * FRAC_PI_2,
            quarter: Some(k),
        }
    }

    pub fn half_pi() -> Self {
        Self::quarter(1)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_half_pi(&self) -> bool {
        self.quarter == Some(1)
    }

    pub fn is_exact(&self) -> bool {
        self.quarter.is_some()
    }
}

/// A constant phase: an exact root of unity or a float angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Root { order: u32, exp: u32 },
    Angle(f64),
}

impl Phase {
    pub fn angle(&self) -> f64 {
        match *self {
            Phase::Root { order, exp } => std::f64::consts::TAU * exp as f64 / order as f64,
            Phase::Angle(a) => a,
        }
    }

    fn sign(negative: bool) -> Self {
        Phase::Root {
            order: 2,
            exp: u32::from(negative),
        }
    }
}

/// One row of a family: phase `offset + slope·t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyComponent {
    pub offset: Phase,
    pub slope: u8,
}

/// One-parameter family of dephased vectors `(e^{iθ_j(t)})_j / √d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFamily {
    pub label: String,
    pub param: String,
    pub components: Vec<FamilyComponent>,
    /// Half-open parameter range `[lo, hi)`.
    pub param_range: (f64, f64),
}

impl VectorFamily {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Row phases at parameter `t`.
    pub fn angles(&self, t: f64) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.offset.angle() + c.slope as f64 * t)
            .collect()
    }

    /// Exact member at `t = kπ/2`, as a vector over `Z[i]`.
    pub fn exact_member(&self, quarter: u32) -> ExactVector {
        let exps: Vec<u32> = self
            .components
            .iter()
            .map(|c| {
                let base = match c.offset {
                    Phase::Root { order: 2, exp } => 2 * exp,
                    Phase::Root { order: 4, exp } => exp,
                    other => panic!("offset {other:?} is not a power of i"),
                };
                (base + c.slope as u32 * quarter) % 4
            })
            .collect();
        ExactVector::from_phases(4, &exps)
    }
}

impl fmt::Display for VectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.label, self.param)
    }
}

/// Concrete member of a family at parameter `t`.
pub fn family_member<T: Real>(f: &VectorFamily, t: f64) -> Result<Vector<T>> {
    let (lo, hi) = f.param_range;
    if !(lo..hi).contains(&t) {
        return Err(Error::Domain(format!("{} = {t} is outside [{lo}, {hi})", f.param)));
    }
    let s = T::one() / T::from_usize_lossy(f.dim()).sqrt();
    Ok(Vector::Float(
        f.angles(t)
            .into_iter()
            .map(|a| Complex::from_polar(s, T::lit(a)))
            .collect(),
    ))
}

/// Every vector MU to both `I` and a given Hadamard matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuVectorSolution {
    pub dim: usize,
    /// Name of the Hadamard matrix solved against.
    pub context: String,
    pub hadamard: Basis<f64>,
    pub discrete: Vec<ExactVector>,
    pub families: Vec<VectorFamily>,
}

/// The two vectors `(1, ±i)/√2` MU to `I` and `F2`.
pub fn solve_d2() -> MuVectorSolution {
    MuVectorSolution {
        dim: 2,
        context: "F2".into(),
        hadamard: Basis::Phase(PhaseMatrix::fourier(2)),
        discrete: vec![
            ExactVector::from_phases(4, &[0, 1]),
            ExactVector::from_phases(4, &[0, 3]),
        ],
        families: Vec::new(),
    }
}

/// The six vectors `v1…v6` MU to `I` and `F3`.
pub fn solve_d3() -> MuVectorSolution {
    let exps: [[u32; 3]; 6] = [[0, 1, 1], [0, 2, 0], [0, 0, 2], [0, 2, 2], [0, 1, 0], [0, 0, 1]];
    MuVectorSolution {
        dim: 3,
        context: "F3".into(),
        hadamard: Basis::Phase(PhaseMatrix::fourier(3)),
        discrete: exps.iter().map(|e| ExactVector::from_phases(3, e)).collect(),
        families: Vec::new(),
    }
}

fn family(label: &str, param: &str, rows: [(bool, u8); 4]) -> VectorFamily {
    VectorFamily {
        label: label.into(),
        param: param.into(),
        components: rows
            .iter()
            .map(|&(neg, slope)| FamilyComponent {
                offset: Phase::sign(neg),
                slope,
            })
            .collect(),
        param_range: (0.0, PI),
    }
}

/// The `h`, `k` and `j` families in the order `h1…h4, k1…k4, j1…j4`.
pub fn d4_families() -> Vec<VectorFamily> {
    const P: (bool, u8) = (false, 0);
    const M: (bool, u8) = (true, 0);
    const T: (bool, u8) = (false, 1);
    const NT: (bool, u8) = (true, 1);
    vec![
        family("h1", "y", [P, P, T, NT]),
        family("h2", "y'", [P, P, NT, T]),
        family("h3", "z", [P, M, T, T]),
        family("h4", "z'", [P, M, NT, NT]),
        family("k1", "t", [P, T, T, M]),
        family("k2", "t'", [P, NT, NT, M]),
        family("k3", "u", [P, T, NT, P]),
        family("k4", "u'", [P, NT, T, P]),
        family("j1", "r", [P, T, M, T]),
        family("j2", "r'", [P, NT, M, NT]),
        family("j3", "s", [P, T, P, NT]),
        family("j4", "s'", [P, NT, P, T]),
    ]
}

/// Families MU to `I` and `F4(x)`: `h1…h4` for every `x`, plus `k1…k4` and
/// `j1…j4` at `x = π/2`.
pub fn solve_d4(x: F4Angle) -> MuVectorSolution {
    let mut families = d4_families();
    if !x.is_half_pi() {
        families.truncate(4);
    }
    MuVectorSolution {
        dim: 4,
        context: format!("F4({})", x.value()),
        hadamard: build_named(&Named::F4(x)).expect("F4 angle already validated"),
        discrete: Vec::new(),
        families,
    }
}

/// The twenty columns of `H5^(1)…H5^(4)`, MU to `I` and `F5`.
pub fn solve_d5() -> MuVectorSolution {
    let discrete = (1..=4)
        .flat_map(|k| {
            let h = h5(k);
            (0..5).map(move |c| h.column(c))
        })
        .collect();
    MuVectorSolution {
        dim: 5,
        context: "F5".into(),
        hadamard: Basis::Phase(PhaseMatrix::fourier(5)),
        discrete,
        families: Vec::new(),
    }
}

/// Dispatches to the solver for `d`; `x` is required exactly when `d = 4`.
pub fn solve(d: usize, x: Option<f64>) -> Result<MuVectorSolution> {
    match (d, x) {
        (2, None) => Ok(solve_d2()),
        (3, None) => Ok(solve_d3()),
        (4, Some(x)) => Ok(solve_d4(F4Angle::new(x)?)),
        (4, None) => Err(Error::Invalid("d = 4 needs the angle x".into())),
        (5, None) => Ok(solve_d5()),
        (2 | 3 | 5, Some(_)) => Err(Error::Invalid("x only applies to d = 4".into())),
        _ => Err(Error::Domain(format!("d = {d} is outside 2..=5"))),
    }
}

/// `H5^(k) = D^k F5`.
pub fn h5(k: u32) -> PhaseMatrix {
    let diag: Vec<i64> = D5_EXPS.iter().map(|&e| (e * k) as i64).collect();
    PhaseMatrix::fourier(5).left_diag(&diag)
}

/// `H3^(k) = D^k F3`.
pub fn h3(k: u32) -> PhaseMatrix {
    let diag: Vec<i64> = D3_EXPS.iter().map(|&e| (e * k) as i64).collect();
    PhaseMatrix::fourier(3).left_diag(&diag)
}

/// A matrix named in the classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Named {
    F2,
    /// `(v+ | v-)` with `v± = (1, ±i)/√2`.
    H2,
    F3,
    /// `D^k F3`, `k ∈ 1..=2`.
    H3(u32),
    /// `diag(1, ω, ω)` over `ω = e^{2πi/3}`.
    D3,
    F4(F4Angle),
    H4 {
        y: f64,
        z: f64,
    },
    J4 {
        r: f64,
        s: f64,
    },
    K4 {
        t: f64,
        u: f64,
    },
    F5,
    /// `diag(1, ω, ω⁴, ω⁴, ω)` over `ω = e^{2πi/5}`.
    D5,
    /// `D^k F5`, `k ∈ 1..=4`.
    H5(u32),
}

impl Named {
    /// Parses names such as `F4`, `H5` or `J4` with their parameters.
    pub fn parse(name: &str, params: &[f64]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let index = |p: f64| -> Result<u32> {
            if p.fract() == 0.0 && p >= 0.0 {
                Ok(p as u32)
            } else {
                Err(Error::Domain(format!("{name} index must be a whole number")))
            }
        };
        let named = match name {
            "F2" => want(0).map(|_| Named::F2)?,
            "H2" => want(0).map(|_| Named::H2)?,
            "F3" => want(0).map(|_| Named::F3)?,
            "D3" => want(0).map(|_| Named::D3)?,
            "F5" => want(0).map(|_| Named::F5)?,
            "D5" | "D" => want(0).map(|_| Named::D5)?,
            "H3" => want(1).and_then(|_| Ok(Named::H3(index(params[0])?)))?,
            "H5" => want(1).and_then(|_| Ok(Named::H5(index(params[0])?)))?,
            "F4" => want(1).and_then(|_| Ok(Named::F4(F4Angle::new(params[0])?)))?,
            "H4" => want(2).map(|_| Named::H4 {
                y: params[0],
                z: params[1],
            })?,
            "J4" => want(2).map(|_| Named::J4 {
                r: params[0],
                s: params[1],
            })?,
            "K4" => want(2).map(|_| Named::K4 {
                t: params[0],
                u: params[1],
            })?,
            _ => return Err(Error::UnknownName(name.into())),
        };
        named.validate()?;
        Ok(named)
    }

    fn validate(&self) -> Result<()> {
        let angle = |v: f64| {
            if v.is_finite() && (-SNAP_TOL..=PI + SNAP_TOL).contains(&v) {
                Ok(())
            } else {
                Err(Error::Domain(format!("parameter {v} is outside [0, π]")))
            }
        };
        match *self {
            Named::H3(k) if !(1..=2).contains(&k) => Err(Error::Domain(format!("H3 index {k} not in 1..=2"))),
            Named::H5(k) if !(1..=4).contains(&k) => Err(Error::Domain(format!("H5 index {k} not in 1..=4"))),
            Named::H4 { y: a, z: b } | Named::J4 { r: a, s: b } | Named::K4 { t: a, u: b } => angle(a).and(angle(b)),
            _ => Ok(()),
        }
    }
}

/// Entry `i^power · e^{i·param}` with the parameter slot optional.
type Cell = (u32, Option<usize>);

fn d4_matrix<T: Real>(grid: [[Cell; 4]; 4], params: &[f64]) -> Basis<T> {
    let quarters: Option<Vec<u32>> = params.iter().map(|&p| quarter_turns(p)).collect();
    match quarters {
        Some(q) => Basis::Phase(
            PhaseMatrix::new(
                4,
                grid.iter()
                    .map(|row| row.iter().map(|&(a, p)| a + p.map_or(0, |i| q[i])).collect())
                    .collect(),
            )
            .expect("4×4 grid"),
        ),
        None => Basis::Complex(ComplexMatrix::from_fn(4, |j, k| {
            let (a, p) = grid[j][k];
            let theta = a as f64 * FRAC_PI_2 + p.map_or(0.0, |i| params[i]);
            Complex::from_polar(T::lit(0.5), T::lit(theta))
        })),
    }
}

fn diagonal(order: u32, exps: &[u32]) -> ExactMatrix {
    let d = exps.len();
    let num = (0..d * d)
        .map(|i| {
            if i / d == i % d {
                CyclotomicInt::root(order, exps[i / d] as i64)
            } else {
                CyclotomicInt::zero(order)
            }
        })
        .collect();
    ExactMatrix::from_parts(d, order, num, 1).expect("diagonal parts are consistent")
}

/// Builds a named matrix, exact whenever every entry is a root of unity.
pub fn build_named<T: Real>(name: &Named) -> Result<Basis<T>> {
    name.validate()?;
    const C: Option<usize> = None;
    const A: Option<usize> = Some(0);
    const B: Option<usize> = Some(1);
    Ok(match *name {
        Named::F2 => Basis::Phase(PhaseMatrix::fourier(2)),
        Named::H2 => Basis::Phase(PhaseMatrix::new(4, vec![vec![0, 0], vec![1, 3]])?),
        Named::F3 => Basis::Phase(PhaseMatrix::fourier(3)),
        Named::H3(k) => Basis::Phase(h3(k)),
        Named::D3 => Basis::Exact(diagonal(3, &D3_EXPS)),
        Named::F5 => Basis::Phase(PhaseMatrix::fourier(5)),
        Named::D5 => Basis::Exact(diagonal(5, &D5_EXPS)),
        Named::H5(k) => Basis::Phase(h5(k)),
        Named::F4(x) => d4_matrix(
            [
                [(0, C), (0, C), (0, C), (0, C)],
                [(0, C), (0, C), (2, C), (2, C)],
                [(0, C), (2, C), (1, A), (3, A)],
                [(0, C), (2, C), (3, A), (1, A)],
            ],
            &[x.value()],
        ),
        Named::H4 { y, z } => d4_matrix(
            [
                [(0, C), (0, C), (0, C), (0, C)],
                [(0, C), (0, C), (2, C), (2, C)],
                [(2, A), (0, A), (0, B), (2, B)],
                [(0, A), (2, A), (0, B), (2, B)],
            ],
            &[y, z],
        ),
        Named::J4 { r, s } => d4_matrix(
            [
                [(0, C), (0, C), (0, C), (0, C)],
                [(0, A), (2, A), (0, B), (2, B)],
                [(2, C), (2, C), (0, C), (0, C)],
                [(0, A), (2, A), (2, B), (0, B)],
            ],
            &[r, s],
        ),
        Named::K4 { t, u } => d4_matrix(
            [
                [(0, C), (0, C), (0, C), (0, C)],
                [(0, A), (2, A), (0, B), (2, B)],
                [(0, A), (2, A), (2, B), (0, B)],
                [(2, C), (2, C), (0, C), (0, C)],
            ],
            &[t, u],
        ),
    })
}
