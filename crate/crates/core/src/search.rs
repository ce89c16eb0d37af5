//! Numeric oracle: all unimodular vectors MU to `I` and a Hadamard matrix,
//! found by damped least squares from a uniform grid of seeds.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{is_hadamard, Basis, ComplexMatrix, ExactVector};
use crate::scalar::{angle_distance, wrap_angle, Real};
use crate::solvers::{MuVectorSolution, VectorFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_points_per_angle: usize,
    pub newton_max_iter: usize,
    pub newton_tol: f64,
    /// Merge radius in the max-angle metric.
    pub cluster_radius: f64,
    pub residual_accept: f64,
    /// Relative singular-value cutoff for the Jacobian rank.
    pub svd_tol: f64,
    pub parallel: bool,
}

impl SearchConfig {
    /// 24 points per angle up to `d = 4`, 14 for `d = 5`.
    pub fn for_dim(d: usize) -> Self {
        Self {
            grid_points_per_angle: if d >= 5 { 14 } else { 24 },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = self.grid_points_per_angle > 0
            && self.newton_max_iter > 0
            && self.newton_tol > 0.0
            && self.cluster_radius > 0.0
            && self.residual_accept > 0.0
            && self.svd_tol > 0.0;
        if !positive {
            return Err(Error::Invalid("search settings must be positive".into()));
        }
        if self.cluster_radius <= self.newton_tol {
            return Err(Error::Invalid("cluster radius must exceed the Newton tolerance".into()));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points_per_angle: 24,
            newton_max_iter: 200,
            newton_tol: 1e-12,
            cluster_radius: 1e-4,
            residual_accept: 1e-9,
            svd_tol: 1e-7,
            parallel: true,
        }
    }
}

/// A group of converged seeds sharing one solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Dephased phases `α_1…α_{d-1}` in `[0, 2π)`; `α_0 = 0` is implicit.
    pub angles: Vec<f64>,
    /// `max_k ||⟨h_k, v⟩|² − 1/d|` at the representative.
    pub residual: f64,
    /// Local dimension of the solution set: 0 isolated, 1 on a curve.
    pub dimension: usize,
    pub size: usize,
}

impl Cluster {
    pub fn vector(&self) -> Vec<Complex<f64>> {
        let s = 1.0 / ((self.angles.len() + 1) as f64).sqrt();
        std::iter::once(0.0)
            .chain(self.angles.iter().copied())
            .map(|a| Complex::from_polar(s, a))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub dim: usize,
    pub seeds: usize,
    pub converged: usize,
    /// Sorted lexicographically by angle vector.
    pub clusters: Vec<Cluster>,
    /// Clusters whose Jacobian rank was lower than their dimension suggests
    /// for an isolated root (recorded, not fatal).
    pub rank_deficient: usize,
}

impl SearchResult {
    pub fn isolated(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(|c| c.dimension == 0)
    }

    pub fn raw_cluster_sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.size).collect()
    }
}

struct System<T: Real> {
    d: usize,
    /// `conj(h_{jk})`, row-major `[k][j]`.
    hc: Vec<Vec<Complex<T>>>,
    inv_d: T,
}

impl<T: Real> System<T> {
    fn new(h: &ComplexMatrix<T>) -> Self {
        let d = h.dim();
        Self {
            d,
            hc: (0..d).map(|k| (0..d).map(|j| h.get(j, k).conj()).collect()).collect(),
            inv_d: T::one() / T::from_usize_lossy(d),
        }
    }

    fn vector(&self, alpha: &[T]) -> Vec<Complex<T>> {
        let s = self.inv_d.sqrt();
        std::iter::once(T::zero())
            .chain(alpha.iter().copied())
            .map(|a| Complex::from_polar(s, a))
            .collect()
    }

    /// Residuals `|⟨h_k, v⟩|² − 1/d` and their Jacobian, `d × (d−1)`.
    fn eval(&self, alpha: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
        let v = self.vector(alpha);
        let two = T::lit(2.0);
        let mut r = Vec::with_capacity(self.d);
        let mut jac = Vec::with_capacity(self.d);
        for row in &self.hc {
            let s: Complex<T> = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            r.push(s.norm_sqr() - self.inv_d);
            jac.push(
                (1..self.d)
                    .map(|j| {
                        let ds = row[j] * v[j] * Complex::new(T::zero(), T::one());
                        two * (s.conj() * ds).re
                    })
                    .collect(),
            );
        }
        (r, jac)
    }
}

fn max_abs<T: Real>(r: &[T]) -> T {
    r.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn cost<T: Real>(r: &[T]) -> T {
    r.iter().fold(T::zero(), |s, x| s + *x * *x)
}

/// Solves `a·x = b` for small symmetric positive definite `a`.
fn cholesky_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for j in 0..n {
        let mut diag = a[j][j];
        for k in 0..j {
            diag = diag - a[j][k] * a[j][k];
        }
        if diag <= T::zero() {
            return None;
        }
        let l = diag.sqrt();
        a[j][j] = l;
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s = s - a[i][k] * a[j][k];
            }
            a[i][j] = s / l;
        }
    }
    for i in 0..n {
        for k in 0..i {
            b[i] = b[i] - a[i][k] * b[k];
        }
        b[i] = b[i] / a[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            b[i] = b[i] - a[k][i] * b[k];
        }
        b[i] = b[i] / a[i][i];
    }
    Some(b)
}

/// Levenberg–Marquardt from `alpha`; returns the final point and residual.
fn descend<T: Real>(sys: &System<T>, mut alpha: Vec<T>, cfg: &SearchConfig) -> (Vec<T>, T) {
    let n = alpha.len();
    let tol = T::lit(cfg.newton_tol);
    let mut lambda = T::lit(1e-3);
    let (mut r, mut jac) = sys.eval(&alpha);
    let mut c = cost(&r);
    for _ in 0..cfg.newton_max_iter {
        if max_abs(&r) < tol {
            break;
        }
        let jtj: Vec<Vec<T>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| jac.iter().fold(T::zero(), |s, row| s + row[a] * row[b]))
                    .collect()
            })
            .collect();
        let g: Vec<T> = (0..n)
            .map(|a| jac.iter().zip(&r).fold(T::zero(), |s, (row, ri)| s - row[a] * *ri))
            .collect();
        let mut improved = false;
        while lambda < T::lit(1e12) {
            let mut m = jtj.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = row[i] + lambda * (T::one() + jtj[i][i]);
            }
            let Some(step) = cholesky_solve(m, g.clone()) else {
                lambda = lambda * T::lit(4.0);
                continue;
            };
            let trial: Vec<T> = alpha.iter().zip(&step).map(|(a, s)| *a + *s).collect();
            let (tr, tj) = sys.eval(&trial);
            let tc = cost(&tr);
            if tc < c {
                alpha = trial;
                r = tr;
                jac = tj;
                c = tc;
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-15));
                improved = true;
                break;
            }
            lambda = lambda * T::lit(4.0);
        }
        if !improved {
            break;
        }
    }
    (alpha, max_abs(&r))
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Numerical rank of the `m × n` matrix `jac` from the singular values.
fn numerical_rank(jac: &[Vec<f64>], svd_tol: f64) -> usize {
    let n = jac.first().map_or(0, Vec::len);
    let jtj: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|b| jac.iter().map(|row| row[a] * row[b]).sum()).collect())
        .collect();
    let sv: Vec<f64> = symmetric_eigenvalues(jtj)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > svd_tol * top.max(1.0)).count()
}

/// Angles wrapped to `[0, 2π)`, with values a hair below `2π` sent to 0.
fn canonical(alpha: &[f64]) -> Vec<f64> {
    alpha
        .iter()
        .map(|&a| {
            let w = wrap_angle(a);
            if TAU - w < 1e-9 {
                0.0
            } else {
                w
            }
        })
        .collect()
}

fn seeds(n_angles: usize, per_angle: usize) -> Vec<Vec<f64>> {
    let total = per_angle.pow(n_angles as u32);
    (0..total)
        .map(|mut idx| {
            (0..n_angles)
                .map(|_| {
                    let i = idx % per_angle;
                    idx /= per_angle;
                    TAU * (i as f64 + 0.5) / per_angle as f64
                })
                .collect()
        })
        .collect()
}

/// Finds every vector MU to `I` and `h` reachable from the seed grid.
pub fn search<T: Real>(h: &Basis<T>, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let d = h.dim();
    if !(2..=5).contains(&d) {
        return Err(Error::Domain(format!("search supports d in 2..=5, got {d}")));
    }
    if !is_hadamard(h, T::lit(crate::TOL)) {
        return Err(Error::NotHadamard(format!("{d}×{d} input")));
    }
    let sys = System::new(&h.to_complex());
    let grid = seeds(d - 1, cfg.grid_points_per_angle);
    let run = |seed: &Vec<f64>| {
        let start: Vec<T> = seed.iter().map(|&a| T::lit(a)).collect();
        let (alpha, res) = descend(&sys, start, cfg);
        let res = res.to_f64().unwrap_or(f64::INFINITY);
        (res < cfg.residual_accept).then(|| {
            let a: Vec<f64> = alpha.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
            (canonical(&a), res)
        })
    };
    let found: Vec<Option<(Vec<f64>, f64)>> = if cfg.parallel {
        grid.par_iter().map(run).collect()
    } else {
        grid.iter().map(run).collect()
    };
    let points: Vec<(Vec<f64>, f64)> = found.into_iter().flatten().collect();
    if points.is_empty() {
        return Err(Error::NoConvergence(format!(
            "no seed of a {}-point grid converged",
            grid.len()
        )));
    }

    let radius = cfg.cluster_radius;
    let cell = |a: &[f64]| -> Vec<i64> { a.iter().map(|x| (x / radius).floor() as i64).collect() };
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for (i, (a, _)) in points.iter().enumerate() {
        let key = cell(a);
        let mut hit = None;
        'search: for off in neighbour_offsets(d - 1) {
            let k: Vec<i64> = key.iter().zip(&off).map(|(x, o)| x + o).collect();
            let k = wrap_cell(&k, radius);
            if let Some(list) = buckets.get(&k) {
                for &c in list {
                    let close = centers[c].iter().zip(a).all(|(x, y)| angle_distance(*x, *y) <= radius);
                    if close {
                        hit = Some(c);
                        break 'search;
                    }
                }
            }
        }
        match hit {
            Some(c) => members[c].push(i),
            None => {
                buckets.entry(key).or_default().push(centers.len());
                centers.push(a.clone());
                members.push(vec![i]);
            }
        }
    }

    let mut rank_deficient = 0;
    let mut clusters: Vec<Cluster> = members
        .iter()
        .map(|m| {
            let best = *m
                .iter()
                .min_by(|&&x, &&y| points[x].1.total_cmp(&points[y].1))
                .expect("clusters are non-empty");
            let (angles, residual) = points[best].clone();
            let sys64 = System::new(&h.to_complex().cast::<f64>());
            let (_, jac) = sys64.eval(&angles);
            let rank = numerical_rank(&jac, cfg.svd_tol);
            let dimension = (d - 1) - rank;
            if dimension > 1 {
                rank_deficient += 1;
            }
            Cluster {
                angles,
                residual,
                dimension,
                size: m.len(),
            }
        })
        .collect();
    // Rounded keys keep the order stable against last-bit noise.
    let key = |c: &Cluster| -> Vec<i64> {
        c.angles
            .iter()
            .map(|x| (x / cfg.cluster_radius).round() as i64)
            .collect()
    };
    clusters.sort_by_cached_key(key);
    Ok(SearchResult {
        dim: d,
        seeds: grid.len(),
        converged: points.len(),
        clusters,
        rank_deficient,
    })
}

fn neighbour_offsets(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                [0i64, -1, 1].into_iter().map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out
}

fn wrap_cell(k: &[i64], radius: f64) -> Vec<i64> {
    let n = (TAU / radius).floor() as i64 + 1;
    k.iter().map(|x| x.rem_euclid(n)).collect()
}

/// Dephased phases `α_1…α_{d−1}` of an exact vector.
pub fn dephased_angles(v: &ExactVector) -> Vec<f64> {
    let z = v.to_complex::<f64>();
    let a0 = z[0].arg();
    canonical(&z[1..].iter().map(|c| c.arg() - a0).collect::<Vec<_>>())
}

fn angle_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| angle_distance(*x, *y)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    /// `(cluster index, expected index, max-angle distance)`.
    pub matched: Vec<(usize, usize, f64)>,
    pub unmatched_found: Vec<usize>,
    pub unmatched_expected: Vec<usize>,
}

impl MatchReport {
    pub fn is_perfect(&self) -> bool {
        self.unmatched_found.is_empty() && self.unmatched_expected.is_empty()
    }
}

/// One-to-one matching of numeric clusters against the discrete closed-form
/// vectors, by max-angle distance after dephasing.
pub fn match_against(result: &SearchResult, expected: &MuVectorSolution, tol: f64) -> MatchReport {
    let want: Vec<Vec<f64>> = expected.discrete.iter().map(dephased_angles).collect();
    let mut taken = vec![false; want.len()];
    let mut matched = Vec::new();
    let mut unmatched_found = Vec::new();
    for (i, c) in result.clusters.iter().enumerate() {
        let best = want
            .iter()
            .enumerate()
            .filter(|(j, _)| !taken[*j])
            .map(|(j, w)| (j, angle_gap(&c.angles, w)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, gap)) if gap <= tol => {
                taken[j] = true;
                matched.push((i, j, gap));
            }
            _ => unmatched_found.push(i),
        }
    }
    MatchReport {
        matched,
        unmatched_expected: (0..want.len()).filter(|&j| !taken[j]).collect(),
        unmatched_found,
    }
}

/// Parameter at which `family` passes through the dephased angles, if any.
pub fn family_parameter(family: &VectorFamily, angles: &[f64], tol: f64) -> Option<f64> {
    let full: Vec<f64> = std::iter::once(0.0).chain(angles.iter().copied()).collect();
    let j = family.components.iter().position(|c| c.slope != 0)?;
    let c = family.components[j];
    let mut t = wrap_angle(full[j] - c.offset.angle()) / c.slope as f64;
    let (lo, hi) = family.param_range;
    if t >= hi - tol && (t - hi).abs() <= tol {
        t = lo;
    }
    if !(lo - tol..hi).contains(&t) {
        return None;
    }
    let t = t.max(lo);
    (angle_gap(&family.angles(t), &full) <= tol).then_some(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCoverage {
    /// Clusters landing on each family, in input order.
    pub hits: Vec<usize>,
    /// Clusters on no family.
    pub unexplained: Vec<usize>,
}

impl FamilyCoverage {
    pub fn is_complete(&self) -> bool {
        self.unexplained.is_empty() && self.hits.iter().all(|&h| h > 0)
    }
}

/// Checks that every numeric cluster lies on a listed family and that every
/// family is reached.
pub fn family_coverage(result: &SearchResult, families: &[VectorFamily], tol: f64) -> FamilyCoverage {
    let mut hits = vec![0; families.len()];
    let mut unexplained = Vec::new();
    for (i, c) in result.clusters.iter().enumerate() {
        let mut any = false;
        for (f, fam) in families.iter().enumerate() {
            if family_parameter(fam, &c.angles, tol).is_some() {
                hits[f] += 1;
                any = true;
            }
        }
        if !any {
            unexplained.push(i);
        }
    }
    FamilyCoverage { hits, unexplained }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::PhaseMatrix;
    use crate::solvers::{d4_families, solve_d2, solve_d3};

    fn serial(d: usize) -> SearchConfig {
        SearchConfig {
            parallel: false,
            ..SearchConfig::for_dim(d)
        }
    }

    #[test]
    fn qubit_oracle() {
        let f = Basis::<f64>::Phase(PhaseMatrix::fourier(2));
        let r = search(&f, &serial(2)).unwrap();
        assert_eq!(r.clusters.len(), 2);
        assert!(r.isolated().count() == 2);
        assert!(match_against(&r, &solve_d2(), 1e-8).is_perfect());
    }

    #[test]
    fn qutrit_oracle() {
        let f = Basis::<f64>::Phase(PhaseMatrix::fourier(3));
        let r = search(&f, &serial(3)).unwrap();
        assert_eq!(r.isolated().count(), 6);
        assert!(r.clusters.iter().all(|c| c.residual < 1e-10));
        assert!(match_against(&r, &solve_d3(), 1e-8).is_perfect());
    }

    #[test]
    fn f32_backend_runs() {
        let f = Basis::<f32>::Phase(PhaseMatrix::fourier(2));
        let cfg = SearchConfig {
            newton_tol: 1e-6,
            residual_accept: 1e-5,
            cluster_radius: 1e-3,
            ..serial(2)
        };
        assert_eq!(search(&f, &cfg).unwrap().clusters.len(), 2);
    }

    #[test]
    fn rejects_non_hadamard() {
        let i = Basis::<f64>::identity(3);
        assert!(matches!(search(&i, &serial(3)), Err(Error::NotHadamard(_))));
    }

    #[test]
    fn family_parameter_recovers_t() {
        let fams = d4_families();
        let a = fams[0].angles(0.7);
        assert!((family_parameter(&fams[0], &a[1..], 1e-9).unwrap() - 0.7).abs() < 1e-12);
        // h1 at y + π is h2 at y
        let b = fams[0].angles(0.7 + std::f64::consts::PI);
        let b: Vec<f64> = b[1..].iter().map(|&x| wrap_angle(x)).collect();
        assert!(family_parameter(&fams[0], &b, 1e-9).is_none());
        assert!(family_parameter(&fams[1], &b, 1e-9).is_some());
    }

    #[test]
    fn jacobi_eigenvalues() {
        let mut e = symmetric_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn config_checks() {
        let bad = SearchConfig {
            cluster_radius: 1e-13,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
