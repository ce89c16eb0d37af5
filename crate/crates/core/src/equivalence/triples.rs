//! The two triples `T(1) = {I, F5, H5^(1)}` and `T(2) = {I, F5, H5^(2)}` in
//! dimension five are inequivalent.
//!
//! Besides the general search of [`are_equivalent`], the restricted argument
//! is replayed step by step: invariance of both triples under the global
//! unitaries `B_ρ†`, exhaustion of the two branch conditions over monomials
//! with fifth-root phases, and the diagonal obstruction that closes them.

use rayon::prelude::*;

use super::{are_equivalent, permutations, right_monomial, ArgumentStep, EquivalenceCertificate, Verdict};
use crate::error::Result;
use crate::matrices::{monomial_apply, Basis, MonomialMatrix, MuBasisSet, PhaseMatrix, Side};
use crate::solvers::{h5, D5_EXPS};

type Grid = [[u8; 5]; 5];

/// `{I, F5, H5^(k)}`.
pub fn d5_triple(k: u32) -> MuBasisSet<f64> {
    MuBasisSet::new(vec![
        Basis::identity(5),
        Basis::Phase(PhaseMatrix::fourier(5)),
        Basis::Phase(h5(k)),
    ])
    .expect("three 5x5 bases")
}

/// Certificate that `T(1)` and `T(2)` are inequivalent, with every step of
/// the restricted argument attached to the refutation.
pub fn inequivalence_d5_triples() -> Result<EquivalenceCertificate<f64>> {
    let (t1, t2) = (d5_triple(1), d5_triple(2));
    let mut cert = are_equivalent(&t1, &t2)?;
    let steps = vec![
        invariance_step()?,
        branch_exhaustion_step(),
        delta_scalar_step(),
        delta_clock_step(),
        clock_characterisation_step(),
        conjugation_step()?,
    ];
    match cert.refutation.as_mut() {
        Some(r) => r.steps = steps,
        None => {
            cert.reason = Some(format!(
                "search found a witness; argument steps: {:?}",
                steps.iter().map(|s| (s.name.clone(), s.holds)).collect::<Vec<_>>()
            ));
        }
    }
    cert.reseal(&t1, &t2)?;
    Ok(cert)
}

pub(crate) fn catalog() -> Vec<(String, Basis<f64>)> {
    let mut out = vec![
        ("I".to_string(), Basis::identity(5)),
        ("F5".to_string(), Basis::Phase(PhaseMatrix::fourier(5))),
    ];
    out.extend((1..=4).map(|k| (format!("H5({k})"), Basis::Phase(h5(k)))));
    out
}

/// Index of the catalog matrix `C` with `m = C·M` for a monomial `M`.
pub(crate) fn label(m: &Basis<f64>, cat: &[(String, Basis<f64>)]) -> Result<Option<usize>> {
    let y = m.to_exact().expect("exact product");
    for (i, (_, c)) in cat.iter().enumerate() {
        if right_monomial::<f64>(&c.to_exact().expect("exact"), &y)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub(crate) fn labelled_set(products: &[Basis<f64>], cat: &[(String, Basis<f64>)]) -> Result<Option<Vec<usize>>> {
    let mut out = Vec::new();
    for p in products {
        match label(p, cat)? {
            Some(i) => out.push(i),
            None => return Ok(None),
        }
    }
    out.sort_unstable();
    Ok(Some(out))
}

fn invariance_step() -> Result<ArgumentStep> {
    let cat = catalog();
    let names = |s: &[usize]| s.iter().map(|&i| cat[i].0.as_str()).collect::<Vec<_>>().join(",");
    let (mut checked, mut matches, mut holds) = (0u64, 0u64, true);
    let mut detail = Vec::new();
    for j in [1u32, 2] {
        let t = d5_triple(j);
        let partner = 5 - j;
        let class = [vec![0, 1, 1 + j as usize], vec![0, 1, 1 + partner as usize]];

        let shift = MonomialMatrix::diagonal(5, D5_EXPS.iter().map(|&e| e * partner).collect())?;
        let shifted = t
            .bases()
            .iter()
            .map(|b| monomial_apply(&shift, b, Side::Left))
            .collect::<Result<Vec<_>>>()?;
        let shifted = labelled_set(&shifted, &cat)?;
        checked += 1;
        let linked = shifted.as_deref() == Some(&class[1][..]);
        matches += u64::from(linked);
        holds &= linked;
        detail.push(format!(
            "D^{partner} T({j}) -> {{{}}}",
            shifted.as_deref().map_or("?".into(), names)
        ));

        for rho in 1..3 {
            let adj = t.bases()[rho].adjoint();
            let products = t.bases().iter().map(|b| adj.mul(b)).collect::<Result<Vec<_>>>()?;
            let set = labelled_set(&products, &cat)?;
            checked += 1;
            let ok = set.as_ref().is_some_and(|s| class.contains(s));
            matches += u64::from(ok);
            holds &= ok;
            let name = if rho == 1 { "F5".to_string() } else { format!("H5({j})") };
            detail.push(format!(
                "{name}^† T({j}) -> {{{}}}",
                set.as_deref().map_or("?".into(), names)
            ));
        }
    }
    Ok(ArgumentStep {
        name: "global invariance".into(),
        holds,
        checked,
        matches,
        detail: detail.join("; "),
    })
}

fn grid_of(p: &PhaseMatrix) -> Grid {
    let mut g = [[0u8; 5]; 5];
    for (j, row) in g.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = p.exp(j, k) as u8;
        }
    }
    g
}

/// `N·x` for `N` with row permutation `perm` and phases `ω^{n_j}`.
fn left_monomial(perm: &[usize], n: &[u8; 5], x: &Grid) -> Grid {
    let mut out = [[0u8; 5]; 5];
    for j in 0..5 {
        for k in 0..5 {
            out[perm[j]][k] = (x[j][k] + n[j]) % 5;
        }
    }
    out
}

/// Whether `x·M = y` for some monomial `M` with fifth-root phases.
fn right_factor_exists(x: &Grid, y: &Grid) -> bool {
    let mut used = [false; 5];
    'cols: for k in 0..5 {
        for c in 0..5 {
            if used[c] {
                continue;
            }
            let shift = (y[0][k] + 5 - x[0][c]) % 5;
            if (1..5).all(|j| (y[j][k] + 5 - x[j][c]) % 5 == shift) {
                used[c] = true;
                continue 'cols;
            }
        }
        return false;
    }
    true
}

fn phase_tuples() -> impl Iterator<Item = [u8; 5]> {
    (0..3125u32).map(|mut i| {
        let mut n = [0u8; 5];
        for e in n.iter_mut() {
            *e = (i % 5) as u8;
            i /= 5;
        }
        n
    })
}

fn branch_exhaustion_step() -> ArgumentStep {
    let f = grid_of(&PhaseMatrix::fourier(5));
    let (h1, h2) = (grid_of(&h5(1)), grid_of(&h5(2)));
    let perms = permutations(5);
    // [first condition, second condition, both] for each of the two branches
    let counts = perms
        .par_iter()
        .map(|perm| {
            let mut c = [[0u64; 3]; 2];
            for n in phase_tuples() {
                let nf = left_monomial(perm, &n, &f);
                let nh1 = left_monomial(perm, &n, &h1);
                let conds = [
                    (right_factor_exists(&f, &nf), right_factor_exists(&h2, &nh1)),
                    (right_factor_exists(&h2, &nf), right_factor_exists(&f, &nh1)),
                ];
                for (b, (p, q)) in conds.into_iter().enumerate() {
                    c[b][0] += u64::from(p);
                    c[b][1] += u64::from(q);
                    c[b][2] += u64::from(p && q);
                }
            }
            c
        })
        .reduce(
            || [[0u64; 3]; 2],
            |mut a, b| {
                for i in 0..2 {
                    for j in 0..3 {
                        a[i][j] += b[i][j];
                    }
                }
                a
            },
        );
    let total = perms.len() as u64 * 3125;
    ArgumentStep {
        name: "branch exhaustion".into(),
        holds: counts[0][2] == 0 && counts[1][2] == 0,
        checked: 2 * total,
        matches: counts[0][2] + counts[1][2],
        detail: format!(
            "{total} monomials N with fifth-root phases per branch; \
             branch N F5 = F5 M1, H5(2) M2 = N H5(1): {} / {} / {} (first / second / both); \
             branch N F5 = H5(2) M1, F5 M2 = N H5(1): {} / {} / {}",
            counts[0][0], counts[0][1], counts[0][2], counts[1][0], counts[1][1], counts[1][2]
        ),
    }
}

/// Exponents of `Δ = D̃^{∓1}·D²` over every reordering `D̃` of `D`.
fn deltas() -> Vec<(&'static str, [u8; 5])> {
    let mut out = Vec::new();
    for (name, sign) in [("D~^† D^2", 4u32), ("D~ D^2", 1u32)] {
        for perm in permutations(5) {
            let mut delta = [0u8; 5];
            for j in 0..5 {
                delta[j] = ((D5_EXPS[perm[j]] * sign + 2 * D5_EXPS[j]) % 5) as u8;
            }
            out.push((name, delta));
        }
    }
    out
}

fn delta_scalar_step() -> ArgumentStep {
    let deltas = deltas();
    let mut matches = 0;
    for (_, delta) in &deltas {
        for c in 0..5u8 {
            matches += u64::from(delta.iter().all(|&e| e == c));
        }
    }
    ArgumentStep {
        name: "delta obstruction".into(),
        holds: matches == 0,
        checked: deltas.len() as u64 * 5,
        matches,
        detail: "no reordering of diag(D^†) (or of diag(D)) equals a scalar multiple of D^-2".into(),
    }
}

fn delta_clock_step() -> ArgumentStep {
    let deltas = deltas();
    let mut matches = 0;
    for (_, delta) in &deltas {
        for c in 0..5u8 {
            for s in 1..5u8 {
                matches += u64::from((0..5).all(|j| delta[j] == (c + s * j as u8) % 5));
            }
        }
    }
    ArgumentStep {
        name: "delta clock obstruction".into(),
        holds: matches == 0,
        checked: deltas.len() as u64 * 20,
        matches,
        detail: "no Δ has exponents c + s·j with s ≠ 0, the only non-scalar diagonals with Δ F5 = F5 M".into(),
    }
}

fn clock_characterisation_step() -> ArgumentStep {
    let f = grid_of(&PhaseMatrix::fourier(5));
    let id: Vec<usize> = (0..5).collect();
    let mut hits = 0;
    let mut affine_hits = 0;
    for n in phase_tuples() {
        if right_factor_exists(&f, &left_monomial(&id, &n, &f)) {
            hits += 1;
            let s = (n[1] + 5 - n[0]) % 5;
            affine_hits += u64::from((0..5).all(|j| n[j] == (n[0] + s * j as u8) % 5));
        }
    }
    ArgumentStep {
        name: "diagonal factorisation".into(),
        holds: hits == 25 && affine_hits == 25,
        checked: 3125,
        matches: hits,
        detail: format!(
            "Δ F5 = F5 M holds for {hits} of 3125 fifth-root diagonals, {affine_hits} of them of the form ω^(c + s·j)"
        ),
    }
}

fn conjugation_step() -> Result<ArgumentStep> {
    let mut matches = 0;
    let mut detail = Vec::new();
    for j in [1u32, 2] {
        let t = d5_triple(j);
        let tc = t.conj();
        let cert = are_equivalent(&tc, &t)?;
        let ok = cert.verdict == Verdict::Equivalent && cert.replay(&tc, &t)?;
        matches += u64::from(ok);
        detail.push(format!("T({j})* ~ T({j}): {ok}"));
    }
    Ok(ArgumentStep {
        name: "conjugation closure".into(),
        holds: matches == 2,
        checked: 2,
        matches,
        detail: detail.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_factor_matches_exact_version() {
        let f = grid_of(&PhaseMatrix::fourier(5));
        let h1 = grid_of(&h5(1));
        assert!(right_factor_exists(&f, &f));
        assert!(!right_factor_exists(&f, &h1));
        let shifted = left_monomial(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], &f);
        assert!(right_factor_exists(&f, &shifted));
    }

    #[test]
    fn deltas_cover_both_branches() {
        let d = deltas();
        assert_eq!(d.len(), 240);
        assert!(d.iter().all(|(_, x)| x.iter().all(|&e| e < 5)));
    }

    #[test]
    fn obstructions_hold() {
        assert!(delta_scalar_step().holds);
        assert!(delta_clock_step().holds);
        assert!(clock_characterisation_step().holds);
    }

    #[test]
    fn invariance_holds() {
        let s = invariance_step().unwrap();
        assert!(s.holds, "{}", s.detail);
        assert_eq!(s.checked, 6);
    }
}
