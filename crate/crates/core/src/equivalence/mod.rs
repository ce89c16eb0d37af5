//! Equivalence of MU sets under an overall unitary, per-basis monomials,
//! reordering of the bases and complex conjugation.
//!
//! A set `A` in standard form can only be mapped onto a standard-form set `B`
//! by a unitary `U = N·A_ρ†`, with `N` monomial and `A_ρ` the basis sent to
//! the identity. The search runs over the conjugation flag, `ρ` and the row
//! permutation of `N`; once the permutation is fixed, every phase of `N` and
//! of the right monomials is forced by a first-row/first-column cross ratio,
//! so the remaining work is exact equality tests and bipartite matching.

mod catalog;
mod triples;

pub use catalog::{right_monomial, verify_identity_catalog, IdentityCatalog, IdentityCheck};
pub(crate) use triples::{catalog as triples_catalog, labelled_set as labelled_products};
pub use triples::{d5_triple, inequivalence_d5_triples};

use std::collections::HashSet;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclotomic::{common_order, root_in};
use crate::error::{Error, Result};
use crate::matrices::{audit_set, monomial_apply, scaled_eq, Basis, ExactMatrix, MonomialMatrix, MuBasisSet, Side};
use crate::scalar::Real;
use crate::CyclotomicInt;

/// Phase vectors compared in the float search agree to this tolerance.
const FLOAT_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    Undecided,
}

/// A transformation taking `A` onto `B`.
///
/// After conjugating `A` if `conjugate` is set, basis `i` becomes
/// `N·A_ρ†·A_i·M_i` and is placed at position `assignment[i]` of `B`.
/// `M_ρ = N⁻¹`, so `A_ρ` lands on the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Witness<T: Real = f64> {
    pub conjugate: bool,
    pub rho: usize,
    pub n: MonomialMatrix<T>,
    pub monomials: Vec<MonomialMatrix<T>>,
    pub assignment: Vec<usize>,
}

impl<T: Real> Witness<T> {
    pub fn identity(set: &MuBasisSet<T>) -> Self {
        let d = set.dim();
        Self {
            conjugate: false,
            rho: 0,
            n: MonomialMatrix::identity(d),
            monomials: vec![MonomialMatrix::identity(d); set.len()],
            assignment: (0..set.len()).collect(),
        }
    }

    /// The image of `a`, listed in the order of the target set.
    pub fn apply(&self, a: &MuBasisSet<T>) -> Result<MuBasisSet<T>> {
        let r = a.len();
        if self.monomials.len() != r || self.assignment.len() != r || self.rho >= r {
            return Err(Error::Mismatch(format!(
                "witness for {} bases applied to {r}",
                self.monomials.len()
            )));
        }
        let a = if self.conjugate { a.conj() } else { a.clone() };
        let rho_adj = a.bases()[self.rho].adjoint();
        let mut out: Vec<Option<Basis<T>>> = vec![None; r];
        for (i, b) in a.bases().iter().enumerate() {
            let x = rho_adj.mul(b)?;
            let x = monomial_apply(&self.n, &x, Side::Left)?;
            let x = monomial_apply(&self.monomials[i], &x, Side::Right)?;
            let slot = out
                .get_mut(self.assignment[i])
                .ok_or_else(|| Error::Mismatch("assignment out of range".into()))?;
            *slot = Some(x);
        }
        let bases = out
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Mismatch("assignment is not a bijection".into()))?;
        MuBasisSet::new(bases)
    }

    /// Replays the witness: exact comparison where both sides are exact,
    /// within `τ` otherwise.
    pub fn maps(&self, a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<bool> {
        if a.len() != b.len() || a.dim() != b.dim() {
            return Ok(false);
        }
        let image = self.apply(a)?;
        for (x, y) in image.bases().iter().zip(b.bases()) {
            let same = match x.exact_eq(y)? {
                Some(eq) => eq,
                None => x.approx_eq(y, T::lit(crate::TOL)),
            };
            if !same {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_exact(&self) -> bool {
        self.n.is_exact() && self.monomials.iter().all(MonomialMatrix::is_exact)
    }
}

/// Work done in one `(conjugation, ρ)` branch of the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCount {
    pub conjugate: bool,
    pub rho: usize,
    pub permutations: u64,
    pub candidates: u64,
}

/// One independently checked step of an inequivalence argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentStep {
    pub name: String,
    pub holds: bool,
    pub checked: u64,
    pub matches: u64,
    pub detail: String,
}

/// Record of an exhaustive search that found no witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub search_space: String,
    pub branches: Vec<BranchCount>,
    pub exhaustion: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<ArgumentStep>,
}

impl Refutation {
    pub fn candidates_tried(&self) -> u64 {
        self.branches.iter().map(|b| b.candidates).sum()
    }

    pub fn permutations_tried(&self) -> u64 {
        self.branches.iter().map(|b| b.permutations).sum()
    }
}

/// Verdict of an equivalence test together with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EquivalenceCertificate<T: Real = f64> {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Refutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub replay_hash: String,
}

impl<T: Real> EquivalenceCertificate<T> {
    fn sealed(
        a: &MuBasisSet<T>,
        b: &MuBasisSet<T>,
        verdict: Verdict,
        witness: Option<Witness<T>>,
        refutation: Option<Refutation>,
        reason: Option<String>,
    ) -> Result<Self> {
        let mut cert = Self {
            verdict,
            witness,
            refutation,
            reason,
            replay_hash: String::new(),
        };
        cert.replay_hash = cert.digest(a, b)?;
        Ok(cert)
    }

    /// SHA-256 over the inputs and the evidence, hex encoded.
    pub fn digest(&self, a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<String> {
        let payload = serde_json::to_vec(&(a, b, self.verdict, &self.witness, &self.refutation, &self.reason))
            .map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(hex::encode(Sha256::digest(payload)))
    }

    pub(crate) fn reseal(&mut self, a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<()> {
        self.replay_hash = self.digest(a, b)?;
        Ok(())
    }

    /// Checks the hash, then re-derives the verdict: an equivalent witness is
    /// applied to `a`, an inequivalence is re-searched with identical counts.
    pub fn replay(&self, a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<bool> {
        if self.digest(a, b)? != self.replay_hash {
            return Ok(false);
        }
        match self.verdict {
            Verdict::Equivalent => match &self.witness {
                Some(w) => w.maps(a, b),
                None => Ok(false),
            },
            Verdict::Inequivalent => {
                let fresh = are_equivalent(a, b)?;
                Ok(fresh.verdict == Verdict::Inequivalent
                    && fresh.refutation.map(|r| r.branches) == self.refutation.as_ref().map(|r| r.branches.clone()))
            }
            Verdict::Undecided => Ok(!a.is_exact()),
        }
    }
}

fn check_inputs<T: Real>(a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Mismatch(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!("{} bases against {}", a.len(), b.len())));
    }
    if a.is_exact() != b.is_exact() {
        return Err(Error::BackendMismatch);
    }
    let tol = T::lit(crate::TOL);
    for (name, s) in [("first", a), ("second", b)] {
        if let Some(v) = s.standard_form_violation(tol) {
            return Err(Error::NotStandardForm(format!("{name} set: {v}")));
        }
        if !audit_set(s, tol)?.passed() {
            return Err(Error::Invalid(format!("{name} set is not mutually unbiased")));
        }
    }
    Ok(())
}

/// Decides whether `a` and `b` are equivalent.
///
/// Exact sets always resolve; float sets resolve to `equivalent` or
/// `undecided`. Branches run in parallel and the first witness in
/// `(conjugation, ρ, permutation)` order wins.
pub fn are_equivalent<T: Real>(a: &MuBasisSet<T>, b: &MuBasisSet<T>) -> Result<EquivalenceCertificate<T>> {
    check_inputs(a, b)?;
    if a.len() == 1 {
        return EquivalenceCertificate::sealed(a, b, Verdict::Equivalent, Some(Witness::identity(a)), None, None);
    }
    let exact = a.is_exact();
    let branches: Vec<(bool, usize)> = [false, true]
        .into_iter()
        .flat_map(|c| (0..a.len()).map(move |r| (c, r)))
        .collect();
    let outcomes = branches
        .par_iter()
        .map(|&(c, rho)| {
            if exact {
                exact_branch(a, b, c, rho)
            } else {
                float_branch(a, b, c, rho)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let counts: Vec<BranchCount> = outcomes.iter().map(|o| o.count.clone()).collect();
    if let Some(w) = outcomes.into_iter().find_map(|o| o.witness) {
        return EquivalenceCertificate::sealed(a, b, Verdict::Equivalent, Some(w), None, None);
    }
    if exact {
        let d = a.dim();
        let refutation = Refutation {
            search_space: format!(
                "conjugation (2) x basis sent to identity ({}) x row permutations of N ({}) x forced phase vectors; \
                 column and basis assignments by exhaustive matching",
                a.len(),
                factorial(d)
            ),
            exhaustion: format!(
                "{} branches, {} row permutations and {} candidate phase vectors tried; no witness exists",
                counts.len(),
                counts.iter().map(|c| c.permutations).sum::<u64>(),
                counts.iter().map(|c| c.candidates).sum::<u64>()
            ),
            branches: counts,
            steps: Vec::new(),
        };
        EquivalenceCertificate::sealed(a, b, Verdict::Inequivalent, None, Some(refutation), None)
    } else {
        let reason = "no witness within tolerance; a floating search cannot certify inequivalence".to_string();
        EquivalenceCertificate::sealed(a, b, Verdict::Undecided, None, None, Some(reason))
    }
}

/// Reorders bases `2..` by their serialized form. Bases 0 and 1 carry the
/// standard-form conditions and keep their places.
pub fn canonical_order<T: Real>(set: &MuBasisSet<T>) -> Result<MuBasisSet<T>> {
    let fixed = set.len().min(2);
    let mut rest = set.bases()[fixed..]
        .iter()
        .map(|b| serde_json::to_string(b).map(|k| (k, b.clone())))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    rest.sort_by(|x, y| x.0.cmp(&y.0));
    let mut bases = set.bases()[..fixed].to_vec();
    bases.extend(rest.into_iter().map(|(_, b)| b));
    MuBasisSet::new(bases)
}

struct Outcome<T: Real> {
    count: BranchCount,
    witness: Option<Witness<T>>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Lexicographically first perfect matching of rows onto columns.
fn first_matching(ok: &[Vec<bool>]) -> Option<Vec<usize>> {
    fn go(row: usize, ok: &[Vec<bool>], used: &mut [bool], out: &mut Vec<usize>) -> bool {
        if row == ok.len() {
            return true;
        }
        for c in 0..ok[row].len() {
            if ok[row][c] && !used[c] {
                used[c] = true;
                out.push(c);
                if go(row + 1, ok, used, out) {
                    return true;
                }
                out.pop();
                used[c] = false;
            }
        }
        false
    }
    let width = ok.first().map_or(0, Vec::len);
    let mut used = vec![false; width];
    let mut out = Vec::with_capacity(ok.len());
    go(0, ok, &mut used, &mut out).then_some(out)
}

/// Finds `σ` (basis assignment) and the column maps `μ_i`, given the phase
/// vector `n` and the cross-ratio tables `sig[i][j][k][c]`.
fn assign<S>(sig: &[Vec<Vec<Vec<S>>>], matches: impl Fn(&S) -> bool) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let mut mus: Vec<Vec<Option<Vec<usize>>>> = Vec::with_capacity(sig.len());
    for per_i in sig {
        mus.push(
            per_i
                .iter()
                .map(|table| {
                    let ok: Vec<Vec<bool>> = table.iter().map(|row| row.iter().map(&matches).collect()).collect();
                    first_matching(&ok)
                })
                .collect(),
        );
    }
    let ok: Vec<Vec<bool>> = mus.iter().map(|r| r.iter().map(Option::is_some).collect()).collect();
    let sigma = first_matching(&ok)?;
    let chosen = sigma
        .iter()
        .enumerate()
        .map(|(i, &j)| mus[i][j].clone().expect("matched pair has a column map"))
        .collect();
    Some((sigma, chosen))
}

fn root_order(q: u32) -> u32 {
    if q % 2 == 1 {
        2 * q
    } else {
        q
    }
}

/// Exponent `e` with `value/√scale = ω_big^e`, if the value is such a root.
fn exact_root(value: &CyclotomicInt, scale: i64) -> Result<Option<u32>> {
    let q = value.order();
    let big = root_order(q);
    let z = value.to_complex::<f64>();
    let e = (z.arg() * f64::from(big) / std::f64::consts::TAU).round() as i64;
    let e = e.rem_euclid(i64::from(big));
    let w = root_in(q, big, e)?;
    Ok(scaled_eq(&w, 1, value, scale)?.then_some(e as u32))
}

/// Monomial with the given phases `value_k/√scale_k`, exact when every
/// phase is a root of unity of the ring, float otherwise.
fn monomial_from<T: Real>(perm: Vec<usize>, phases: &[(CyclotomicInt, i64)]) -> Result<MonomialMatrix<T>> {
    let mut exps = Vec::with_capacity(phases.len());
    for (v, s) in phases {
        match exact_root(v, *s)? {
            Some(e) => exps.push(e),
            None => {
                let angles = phases
                    .iter()
                    .map(|(v, _)| T::lit(v.to_complex::<f64>().arg()))
                    .collect();
                return MonomialMatrix::float(perm, angles);
            }
        }
    }
    let order = phases.first().map_or(1, |(v, _)| root_order(v.order()));
    MonomialMatrix::exact(perm, order, exps)
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn rebased<T: Real>(a: &MuBasisSet<T>, conj: bool, rho: usize) -> Result<(Vec<usize>, Vec<Basis<T>>)> {
    let src = if conj { a.conj() } else { a.clone() };
    let rho_adj = src.bases()[rho].adjoint();
    let others: Vec<usize> = (0..src.len()).filter(|&i| i != rho).collect();
    let xs = others
        .iter()
        .map(|&i| rho_adj.mul(&src.bases()[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok((others, xs))
}

fn exact_branch<T: Real>(a: &MuBasisSet<T>, b: &MuBasisSet<T>, conj: bool, rho: usize) -> Result<Outcome<T>> {
    let d = a.dim();
    let mut count = BranchCount {
        conjugate: conj,
        rho,
        permutations: 0,
        candidates: 0,
    };
    let (others, xs) = rebased(a, conj, rho)?;
    let to_exact = |m: &Basis<T>| m.to_exact().ok_or(Error::BackendMismatch);
    let xs = xs.iter().map(to_exact).collect::<Result<Vec<_>>>()?;
    let ys = b.bases()[1..].iter().map(to_exact).collect::<Result<Vec<_>>>()?;
    let q = xs
        .iter()
        .chain(&ys)
        .try_fold(1, |acc, m| common_order(acc, m.order()))?;
    let xs = xs.iter().map(|m| m.embed(q)).collect::<Result<Vec<ExactMatrix>>>()?;
    let ys = ys.iter().map(|m| m.embed(q)).collect::<Result<Vec<ExactMatrix>>>()?;
    let lx = xs.iter().fold(1, |l, m| lcm_i64(l, m.scale()));
    let ly = ys.iter().fold(1, |l, m| lcm_i64(l, m.scale()));

    // xx[i][c][row] = X[0,c]·conj(X[row,c]); yy[j][k][s][t] = Y[s,k]·conj(Y[t,k]),
    // both brought to the common denominators lx and ly.
    let xx = xs
        .iter()
        .map(|x| {
            let f = lx / x.scale();
            (0..d)
                .map(|c| {
                    (0..d)
                        .map(|row| x.num(0, c).try_mul(&x.num(row, c).conj())?.try_scale(f))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let yy = ys
        .iter()
        .map(|y| {
            let f = ly / y.scale();
            (0..d)
                .map(|k| {
                    (0..d)
                        .map(|s| {
                            (0..d)
                                .map(|t| y.num(s, k).try_mul(&y.num(t, k).conj())?.try_scale(f))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    for pi in permutations(d) {
        count.permutations += 1;
        // sig[i][j][k][c][row]: the phase n_row forced by matching column c
        // of X_i to column k of Y_j.
        let sig = xx
            .iter()
            .map(|xi| {
                yy.iter()
                    .map(|yj| {
                        (0..d)
                            .map(|k| {
                                (0..d)
                                    .map(|c| {
                                        (0..d)
                                            .map(|row| yj[k][pi[row]][pi[0]].try_mul(&xi[c][row]))
                                            .collect::<Result<Vec<_>>>()
                                    })
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut seen = HashSet::new();
        let candidates: Vec<&Vec<CyclotomicInt>> = sig[0]
            .iter()
            .flat_map(|per_j| per_j[0].iter())
            .filter(|n| seen.insert(*n))
            .collect();
        for n in candidates {
            count.candidates += 1;
            let Some((sigma, mus)) = assign(&sig, |s| s == n) else {
                continue;
            };
            let l2 = (lx * ly).checked_mul(lx * ly).ok_or(Error::Overflow)?;
            let dd = (d * d) as i64;
            let n_phases = n
                .iter()
                .map(|v| Ok((v.try_scale(dd)?, l2)))
                .collect::<Result<Vec<_>>>()?;
            let big_n = monomial_from::<T>(pi.clone(), &n_phases)?;
            let mut monomials = vec![big_n.inverse(); a.len()];
            let mut assignment = vec![0; a.len()];
            for (ii, &i) in others.iter().enumerate() {
                let (x, y) = (&xs[ii], &ys[sigma[ii]]);
                let mu = &mus[ii];
                let phases = (0..d)
                    .map(|k| {
                        let v = y.num(pi[0], k).try_mul(&x.num(0, mu[k]).conj())?.try_scale(d as i64)?;
                        Ok((v, x.scale() * y.scale()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                monomials[i] = monomial_from::<T>(mu.clone(), &phases)?;
                assignment[i] = sigma[ii] + 1;
            }
            let witness = Witness {
                conjugate: conj,
                rho,
                n: big_n,
                monomials,
                assignment,
            };
            return Ok(Outcome {
                count,
                witness: Some(witness),
            });
        }
    }
    Ok(Outcome { count, witness: None })
}

/// Signature columns of one basis pair, indexed `[k][c][row]`.
type SignatureRow = Vec<Vec<Vec<Complex<f64>>>>;

fn float_branch<T: Real>(a: &MuBasisSet<T>, b: &MuBasisSet<T>, conj: bool, rho: usize) -> Result<Outcome<T>> {
    let d = a.dim();
    let dd = (d * d) as f64;
    let mut count = BranchCount {
        conjugate: conj,
        rho,
        permutations: 0,
        candidates: 0,
    };
    let (others, xs) = rebased(a, conj, rho)?;
    let xs: Vec<_> = xs.iter().map(|m| m.to_complex().cast::<f64>()).collect();
    let ys: Vec<_> = b.bases()[1..].iter().map(|m| m.to_complex().cast::<f64>()).collect();
    let close =
        |u: &[Complex<f64>], v: &[Complex<f64>]| u.iter().zip(v).all(|(p, q)| (p - q).norm() <= FLOAT_MATCH_TOL);

    for pi in permutations(d) {
        count.permutations += 1;
        let sig: Vec<Vec<SignatureRow>> = xs
            .iter()
            .map(|x| {
                ys.iter()
                    .map(|y| {
                        (0..d)
                            .map(|k| {
                                (0..d)
                                    .map(|c| {
                                        (0..d)
                                            .map(|row| {
                                                y.get(pi[row], k)
                                                    * y.get(pi[0], k).conj()
                                                    * x.get(0, c)
                                                    * x.get(row, c).conj()
                                                    * dd
                                            })
                                            .collect()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let mut candidates: Vec<&Vec<Complex<f64>>> = Vec::new();
        for n in sig[0].iter().flat_map(|per_j| per_j[0].iter()) {
            if !candidates.iter().any(|m| close(m, n)) {
                candidates.push(n);
            }
        }
        for n in candidates {
            count.candidates += 1;
            let Some((sigma, mus)) = assign(&sig, |s| close(s, n)) else {
                continue;
            };
            let big_n = MonomialMatrix::float(pi.clone(), n.iter().map(|z| T::lit(z.arg())).collect())?;
            let mut monomials = vec![big_n.inverse(); a.len()];
            let mut assignment = vec![0; a.len()];
            for (ii, &i) in others.iter().enumerate() {
                let (x, y) = (&xs[ii], &ys[sigma[ii]]);
                let mu = &mus[ii];
                let angles = (0..d)
                    .map(|k| T::lit((y.get(pi[0], k) * x.get(0, mu[k]).conj()).arg()))
                    .collect();
                monomials[i] = MonomialMatrix::float(mu.clone(), angles)?;
                assignment[i] = sigma[ii] + 1;
            }
            let witness = Witness {
                conjugate: conj,
                rho,
                n: big_n,
                monomials,
                assignment,
            };
            if witness.maps(a, b)? {
                return Ok(Outcome {
                    count,
                    witness: Some(witness),
                });
            }
        }
    }
    Ok(Outcome { count, witness: None })
}
