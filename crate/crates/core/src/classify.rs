//! End-to-end classification of MU sets for `d = 2..=5`.
//!
//! Discrete dimensions run solve → assemble → enumerate → quotient by exact
//! equivalence. Dimension four is parametric: its classes are described
//! symbolically, with the identifications between parameter values checked
//! numerically at sample points.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble_bases, d4_maximal_sets, pair_families, pair_rule, PairRule, ParametricKind};
use crate::equivalence::{
    are_equivalent, d5_triple, inequivalence_d5_triples, verify_identity_catalog, EquivalenceCertificate, Verdict,
};
use crate::error::{Error, Result};
use crate::matrices::{audit_pair, audit_set, Basis, MuBasisSet, PhaseMatrix, SetAudit, Vector};
use crate::solvers::{build_named, solve, solve_d4, F4Angle, Named};

/// Number of inequivalent classes: finite, or a `k`-parameter continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassCount {
    Finite(usize),
    Continuum(usize),
}

impl fmt::Display for ClassCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassCount::Finite(n) => write!(f, "{n}"),
            ClassCount::Continuum(k) => write!(f, "∞^{k}"),
        }
    }
}

/// Row names of the summary table, indexed by `r - 2`.
pub const ROW_NAMES: [&str; 5] = ["pairs", "triples", "quadruples", "quintuples", "sextuples"];

/// Expected class counts for `r = 2..=6`; `None` where `r > d + 1`.
pub fn expected_counts(d: usize) -> Result<[Option<ClassCount>; 5]> {
    use ClassCount::{Continuum as C, Finite as F};
    Ok(match d {
        2 => [Some(F(1)), Some(F(1)), None, None, None],
        3 => [Some(F(1)), Some(F(1)), Some(F(1)), None, None],
        4 => [Some(C(1)), Some(C(3)), Some(F(1)), Some(F(1)), None],
        5 => [Some(F(1)), Some(F(2)), Some(F(1)), Some(F(1)), Some(F(1))],
        _ => return Err(Error::Domain(format!("d = {d} is outside 2..=5"))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub hi_inclusive: bool,
}

impl Parameter {
    fn new(name: &str, hi: f64, hi_inclusive: bool) -> Self {
        Self {
            name: name.into(),
            lo: 0.0,
            hi,
            hi_inclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricClass {
    pub label: String,
    pub parameters: Vec<Parameter>,
    pub identifications: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classes {
    Representatives {
        labels: Vec<String>,
        sets: Vec<MuBasisSet<f64>>,
    },
    Parametric(ParametricClass),
}

impl Classes {
    pub fn count(&self) -> ClassCount {
        match self {
            Classes::Representatives { sets, .. } => ClassCount::Finite(sets.len()),
            Classes::Parametric(p) => ClassCount::Continuum(p.parameters.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassesOfSize {
    pub r: usize,
    pub classes: Classes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceKind {
    Assumption,
    Construction,
    Merge,
    Split,
    Identification,
    Exclusion,
}

/// One decision in the classification and the evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub statement: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<EquivalenceCertificate<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<String>,
}

impl Provenance {
    fn new(kind: ProvenanceKind, r: Option<usize>, statement: impl Into<String>, holds: bool) -> Self {
        Self {
            kind,
            r,
            statement: statement.into(),
            holds,
            certificate: None,
            identities: Vec::new(),
        }
    }

    fn with_certificate(mut self, cert: EquivalenceCertificate<f64>) -> Self {
        self.certificate = Some(cert);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub per_r: Vec<ClassesOfSize>,
    pub counts: [Option<ClassCount>; 5],
    pub expected: [Option<ClassCount>; 5],
    pub provenance: Vec<Provenance>,
}

impl ClassificationReport {
    pub fn matches_expected(&self) -> bool {
        self.counts == self.expected
    }

    /// Every recorded piece of evidence holds.
    pub fn evidence_holds(&self) -> bool {
        self.provenance.iter().all(|p| p.holds)
    }

    pub fn classes(&self, r: usize) -> Option<&Classes> {
        self.per_r.iter().find(|c| c.r == r).map(|c| &c.classes)
    }

    fn finish(dim: usize, per_r: Vec<ClassesOfSize>, provenance: Vec<Provenance>) -> Result<Self> {
        let mut counts = [None; 5];
        for c in per_r.iter().filter(|c| c.r >= 2) {
            counts[c.r - 2] = Some(c.classes.count());
        }
        Ok(Self {
            dim,
            per_r,
            counts,
            expected: expected_counts(dim)?,
            provenance,
        })
    }
}

/// Classifies all MU sets in dimension `d`.
pub fn classify(d: usize) -> Result<ClassificationReport> {
    match d {
        2 | 3 | 5 => classify_discrete(d),
        4 => classify_d4(),
        _ => Err(Error::Domain(format!("d = {d} is outside 2..=5"))),
    }
}

/// `classify(d)` for every `d` in `2..=5`, in order.
pub fn classify_all() -> Result<Vec<ClassificationReport>> {
    (2..=5).into_par_iter().map(classify).collect()
}

fn set_label(names: &[&str]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn named(d: usize) -> Vec<(String, Basis<f64>)> {
    let build = |n: Named| build_named::<f64>(&n).expect("catalog matrix");
    match d {
        2 => vec![("H2".into(), build(Named::H2))],
        3 => (1..=2).map(|k| (format!("H3({k})"), build(Named::H3(k)))).collect(),
        5 => (1..=4).map(|k| (format!("H5({k})"), build(Named::H5(k)))).collect(),
        _ => Vec::new(),
    }
}

fn fourier_name(d: usize) -> String {
    format!("F{d}")
}

fn assumption(d: usize) -> Provenance {
    let text = match d {
        4 => "every 4x4 complex Hadamard matrix is equivalent to F4(x) for some x in [0, π]".to_string(),
        _ => format!("every {d}x{d} complex Hadamard matrix is equivalent to the Fourier matrix F{d}"),
    };
    Provenance::new(ProvenanceKind::Assumption, None, text, true)
}

fn classify_discrete(d: usize) -> Result<ClassificationReport> {
    let tol = crate::TOL;
    let mut provenance = vec![assumption(d)];
    let fourier = Basis::Phase(PhaseMatrix::fourier(d));
    let solution = solve(d, None)?;
    let vectors: Vec<Vector> = solution.discrete.iter().cloned().map(Vector::Exact).collect();
    let pool = assemble_bases(&vectors, tol)?;

    // Name each assembled basis after the catalog matrix with the same columns.
    let catalog = named(d);
    let mut members: Vec<(String, Basis<f64>)> = Vec::new();
    for b in &pool {
        let hit = catalog
            .iter()
            .find(|(_, c)| matches!((b.as_phase(), c.as_phase()), (Some(p), Some(q)) if p.same_columns(q)));
        let holds = hit.is_some();
        let name = hit.map_or_else(|| format!("B{}", members.len()), |(n, _)| n.clone());
        provenance.push(Provenance::new(
            ProvenanceKind::Construction,
            None,
            format!("{} MU vectors assemble into a basis with the columns of {name}", d),
            holds,
        ));
        members.push((name, hit.map_or_else(|| b.clone(), |(_, c)| c.clone())));
    }

    let n = members.len();
    let mut mu = vec![vec![true; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ok = audit_pair(&members[i].1, &members[j].1, i, j, tol)?.passed();
            mu[i][j] = ok;
            mu[j][i] = ok;
        }
    }
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| s.iter().all(|&i| s.iter().all(|&j| mu[i][j])))
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let f_name = fourier_name(d);
    let mut per_r = vec![ClassesOfSize {
        r: 1,
        classes: Classes::Representatives {
            labels: vec!["{I}".into()],
            sets: vec![MuBasisSet::new(vec![Basis::identity(d)])?],
        },
    }];
    for r in 2..=d + 1 {
        let candidates: Vec<(String, MuBasisSet<f64>)> = subsets
            .iter()
            .filter(|s| s.len() + 2 == r)
            .map(|s| {
                let mut names = vec!["I", f_name.as_str()];
                names.extend(s.iter().map(|&i| members[i].0.as_str()));
                let mut bases = vec![Basis::identity(d), fourier.clone()];
                bases.extend(s.iter().map(|&i| members[i].1.clone()));
                MuBasisSet::new(bases).map(|set| (set_label(&names), set))
            })
            .collect::<Result<_>>()?;
        let (labels, sets) = quotient(r, candidates, &mut provenance)?;
        per_r.push(ClassesOfSize {
            r,
            classes: Classes::Representatives { labels, sets },
        });
    }
    if d == 5 {
        provenance.extend(d5_evidence()?);
    }
    ClassificationReport::finish(d, per_r, provenance)
}

/// Splits `candidates` into equivalence classes; the first member of each
/// class is its representative.
fn quotient(
    r: usize,
    candidates: Vec<(String, MuBasisSet<f64>)>,
    provenance: &mut Vec<Provenance>,
) -> Result<(Vec<String>, Vec<MuBasisSet<f64>>)> {
    let mut reps: Vec<(String, MuBasisSet<f64>)> = Vec::new();
    for (label, set) in candidates {
        let mut merged = false;
        for (rep_label, rep) in &reps {
            let cert = are_equivalent(&set, rep)?;
            if cert.verdict == Verdict::Equivalent {
                let holds = cert.replay(&set, rep)?;
                provenance.push(
                    Provenance::new(ProvenanceKind::Merge, Some(r), format!("{label} ~ {rep_label}"), holds)
                        .with_certificate(cert),
                );
                merged = true;
                break;
            }
        }
        if !merged {
            reps.push((label, set));
        }
    }
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let cert = are_equivalent(&reps[i].1, &reps[j].1)?;
            let holds = cert.verdict == Verdict::Inequivalent;
            provenance.push(
                Provenance::new(
                    ProvenanceKind::Split,
                    Some(r),
                    format!("{} is not equivalent to {}", reps[i].0, reps[j].0),
                    holds,
                )
                .with_certificate(cert),
            );
        }
    }
    Ok(reps.into_iter().unzip())
}

/// The restricted inequivalence argument for the two triples and the
/// catalog route for the quadruple merge.
fn d5_evidence() -> Result<Vec<Provenance>> {
    let mut out = Vec::new();
    let cert = inequivalence_d5_triples()?;
    let holds = cert.verdict == Verdict::Inequivalent
        && cert
            .refutation
            .as_ref()
            .is_some_and(|r| r.steps.iter().all(|s| s.holds));
    out.push(
        Provenance::new(
            ProvenanceKind::Split,
            Some(3),
            "{I, F5, H5(1)} is not equivalent to {I, F5, H5(2)}: restricted argument replayed",
            holds,
        )
        .with_certificate(cert),
    );

    let identities = ["F5^† = F5 P", "F5^† H5(1) = H5(1) M", "F5^† H5(2) = H5(3) D(2) P"];
    let cat = verify_identity_catalog();
    let identities_hold = identities.iter().all(|n| cat.get(n).is_some_and(|c| c.holds));
    let labels = crate::equivalence::triples_catalog();
    let quad = MuBasisSet::new(vec![
        Basis::identity(5),
        Basis::Phase(PhaseMatrix::fourier(5)),
        Basis::Phase(crate::solvers::h5(1)),
        Basis::Phase(crate::solvers::h5(2)),
    ])?;
    let adj = quad.bases()[1].adjoint();
    let products = quad.bases().iter().map(|b| adj.mul(b)).collect::<Result<Vec<_>>>()?;
    let image = crate::equivalence::labelled_products(&products, &labels)?;
    // catalog indices: I = 0, F5 = 1, H5(k) = 1 + k
    let chain_holds = identities_hold && image.as_deref() == Some(&[0, 1, 2, 4][..]);
    let mut p = Provenance::new(
        ProvenanceKind::Merge,
        Some(4),
        "F5^† {I, F5, H5(1), H5(2)} = {F5 P, I, H5(1) M, H5(3) D(2) P}, hence {I, F5, H5(1), H5(2)} ~ {I, F5, H5(1), H5(3)}",
        chain_holds,
    );
    p.identities = identities.iter().map(|s| s.to_string()).collect();
    out.push(p);

    for (k, partner) in [(1u32, 4u32), (2, 3)] {
        let cert = are_equivalent(&d5_triple(partner), &d5_triple(k))?;
        let holds = cert.verdict == Verdict::Equivalent;
        out.push(
            Provenance::new(
                ProvenanceKind::Merge,
                Some(3),
                format!("{{I, F5, H5({partner})}} ~ {{I, F5, H5({k})}} by a power of D"),
                holds,
            )
            .with_certificate(cert),
        );
    }
    Ok(out)
}

/// `{I, F4(x), H4(y, z)}`.
pub fn d4_triple(x: f64, y: f64, z: f64) -> Result<MuBasisSet<f64>> {
    MuBasisSet::new(vec![
        Basis::identity(4),
        build_named(&Named::F4(F4Angle::new(x)?))?,
        build_named(&Named::H4 { y, z })?,
    ])
}

/// Parameters `(y, z)` of the `H4` basis that absorbs `J4(a, b)` or `K4(a, b)`.
pub fn absorbing_h4(kind: ParametricKind, a: f64, b: f64) -> (f64, f64) {
    match kind {
        ParametricKind::H4 => (a, b),
        ParametricKind::J4 | ParametricKind::K4 => (b, a),
    }
}

/// Sample points for the numerical identification checks.
const D4_SAMPLES: [(f64, f64, f64); 3] = [(0.7, 1.1, 0.4), (2.0, 0.3, 1.2), (1.3, 2.5, 0.9)];

/// Checks the conjugation identification at one point.
pub fn conjugation_identification(x: f64, y: f64, z: f64) -> Result<EquivalenceCertificate<f64>> {
    let a = d4_triple(x, y, z)?.conj();
    let b = d4_triple(PI - x, PI - y, PI - z)?;
    are_equivalent(&a, &b)
}

/// Checks that `{I, F4(π/2), kind(a, b)}` is equivalent to the `H4` triple.
pub fn absorption_identification(kind: ParametricKind, a: f64, b: f64) -> Result<EquivalenceCertificate<f64>> {
    let f = build_named(&Named::F4(F4Angle::half_pi()))?;
    let set = MuBasisSet::new(vec![Basis::identity(4), f.clone(), kind.build(a, b)?])?;
    let (y, z) = absorbing_h4(kind, a, b);
    let target = MuBasisSet::new(vec![Basis::identity(4), f, build_named(&Named::H4 { y, z })?])?;
    are_equivalent(&set, &target)
}

/// Grid check of `|1 + e^{iθ}|² + |1 − e^{iθ}|² = 4` together with the
/// smallest unbiasedness residual between two distinct `H4` bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionCheck {
    pub points: usize,
    pub identity_max_error: f64,
    pub min_residual: f64,
}

pub fn quadruple_exclusion(grid: usize) -> Result<ExclusionCheck> {
    let mut identity_max_error: f64 = 0.0;
    for i in 0..grid {
        let t = 2.0 * PI * i as f64 / grid as f64;
        let (c, s) = (t.cos(), t.sin());
        let plus = (1.0 + c).powi(2) + s * s;
        let minus = (1.0 - c).powi(2) + s * s;
        identity_max_error = identity_max_error.max((plus + minus - 4.0).abs());
    }
    let side = (grid as f64).sqrt().ceil() as usize;
    let mut min_residual = f64::INFINITY;
    let mut points = grid;
    for i in 0..side {
        for j in 0..side {
            let y = PI * i as f64 / side as f64;
            let y2 = PI * j as f64 / side as f64;
            let z = 0.37;
            let a = build_named::<f64>(&Named::H4 { y, z })?;
            let b = build_named::<f64>(&Named::H4 { y: y2, z: z + 0.5 })?;
            let audit = audit_pair(&a, &b, 0, 1, crate::TOL)?;
            min_residual = min_residual.min(audit.max_residual);
            points += 1;
        }
    }
    Ok(ExclusionCheck {
        points,
        identity_max_error,
        min_residual,
    })
}

fn classify_d4() -> Result<ClassificationReport> {
    let tol = crate::TOL;
    let mut provenance = vec![assumption(4)];
    let generic = F4Angle::new(1.0)?;
    let half = F4Angle::half_pi();

    let fam_generic = solve_d4(generic).families;
    let fam_half = solve_d4(half).families;
    let kinds_generic: Vec<ParametricKind> = pair_families(&fam_generic)?.iter().map(|p| p.kind).collect();
    let kinds_half: Vec<ParametricKind> = pair_families(&fam_half)?.iter().map(|p| p.kind).collect();
    provenance.push(Provenance::new(
        ProvenanceKind::Construction,
        None,
        format!(
            "x ≠ π/2: {} vector families pair into {:?}; x = π/2: {} families pair into {:?}",
            fam_generic.len(),
            kinds_generic,
            fam_half.len(),
            kinds_half
        ),
        kinds_generic == [ParametricKind::H4] && kinds_half == ParametricKind::ALL,
    ));

    let sets_generic = d4_maximal_sets(generic);
    let sets_half = d4_maximal_sets(half);
    let triple_free = sets_generic.iter().find(|s| s.size() == 3).map(|s| s.free_parameters());
    provenance.push(Provenance::new(
        ProvenanceKind::Exclusion,
        Some(4),
        "away from x = π/2 the only maximal set is {I, F4(x), H4(y, z)}; no two H4 bases are MU",
        sets_generic.len() == 1
            && sets_generic[0].size() == 3
            && pair_rule(ParametricKind::H4, ParametricKind::H4) == PairRule::Never,
    ));
    let ex = quadruple_exclusion(400)?;
    provenance.push(Provenance::new(
        ProvenanceKind::Exclusion,
        Some(4),
        format!(
            "|1 + e^(iθ)|² + |1 − e^(iθ)|² = 4 on {} points (max error {:.1e}); distinct H4 bases have MU residual ≥ {:.3}",
            ex.points, ex.identity_max_error, ex.min_residual
        ),
        ex.identity_max_error < 1e-12 && ex.min_residual >= 0.25 - tol,
    ));

    for &(x, y, z) in &D4_SAMPLES {
        let cert = conjugation_identification(x, y, z)?;
        let holds = cert.verdict == Verdict::Equivalent;
        provenance.push(
            Provenance::new(
                ProvenanceKind::Identification,
                Some(3),
                format!("{{I, F4({x}), H4({y}, {z})}}* ~ {{I, F4(π−{x}), H4(π−{y}, π−{z})}}"),
                holds,
            )
            .with_certificate(cert),
        );
    }
    for kind in [ParametricKind::J4, ParametricKind::K4] {
        for &(_, a, b) in &D4_SAMPLES {
            let cert = absorption_identification(kind, a, b)?;
            let (y, z) = absorbing_h4(kind, a, b);
            let holds = cert.verdict == Verdict::Equivalent;
            provenance.push(
                Provenance::new(
                    ProvenanceKind::Identification,
                    Some(3),
                    format!("{{I, F4(π/2), {kind:?}({a}, {b})}} ~ {{I, F4(π/2), H4({y}, {z})}}"),
                    holds,
                )
                .with_certificate(cert),
            );
        }
    }

    let full = sets_half
        .iter()
        .find(|s| s.free_parameters() == 0 && s.size() == 5)
        .ok_or_else(|| Error::Invalid("no five-element set at x = π/2".into()))?
        .instantiate::<f64>(&[])?;
    let names = ["I", "F4(π/2)", "H4(π/2,π/2)", "J4(π/2,π/2)", "K4(π/2,π/2)"];
    let audit = audit_set(&full, tol)?;
    provenance.push(Provenance::new(
        ProvenanceKind::Construction,
        Some(5),
        format!("{} passes an exact MU audit", set_label(&names)),
        audit.passed() && audit.fully_exact,
    ));

    let mut per_r = vec![
        ClassesOfSize {
            r: 1,
            classes: Classes::Representatives {
                labels: vec!["{I}".into()],
                sets: vec![MuBasisSet::new(vec![Basis::identity(4)])?],
            },
        },
        ClassesOfSize {
            r: 2,
            classes: Classes::Parametric(ParametricClass {
                label: "{I, F4(x)}".into(),
                parameters: vec![Parameter::new("x", PI, true)],
                identifications: vec!["distinct x give inequivalent Hadamard matrices (assumed)".into()],
            }),
        },
        ClassesOfSize {
            r: 3,
            classes: Classes::Parametric(ParametricClass {
                label: "{I, F4(x), H4(y, z)}".into(),
                parameters: vec![
                    Parameter::new("x", PI, false),
                    Parameter::new("y", PI, false),
                    Parameter::new("z", FRAC_PI_2, false),
                ],
                identifications: vec![
                    "{I, F4(x), H4(y, z)} ~ {I, F4(π−x), H4(π−y, π−z)} by complex conjugation".into(),
                    "{I, F4(π/2), J4(r, s)} ~ {I, F4(π/2), H4(s, r)}".into(),
                    "{I, F4(π/2), K4(t, u)} ~ {I, F4(π/2), H4(u, t)}".into(),
                ],
            }),
        },
    ];
    provenance.push(Provenance::new(
        ProvenanceKind::Construction,
        Some(3),
        format!(
            "triples carry {} free basis parameters plus x",
            triple_free.map_or("?".into(), |n| n.to_string())
        ),
        triple_free == Some(2),
    ));

    for r in 4..=5 {
        let candidates: Vec<(String, MuBasisSet<f64>)> = (0u32..8)
            .map(|mask| (2..5).filter(|&i| mask & (1 << (i - 2)) != 0).collect::<Vec<_>>())
            .filter(|s| s.len() + 2 == r)
            .map(|s| {
                let idx: Vec<usize> = [0, 1].into_iter().chain(s).collect();
                let label = set_label(&idx.iter().map(|&i| names[i]).collect::<Vec<_>>());
                MuBasisSet::new(idx.iter().map(|&i| full.bases()[i].clone()).collect()).map(|set| (label, set))
            })
            .collect::<Result<_>>()?;
        let (labels, sets) = quotient(r, candidates, &mut provenance)?;
        per_r.push(ClassesOfSize {
            r,
            classes: Classes::Representatives { labels, sets },
        });
    }
    ClassificationReport::finish(4, per_r, provenance)
}

/// Exact audit of the complete set of `d + 1` MU bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompleteSetAudit {
    pub dim: usize,
    pub labels: Vec<String>,
    pub audit: SetAudit,
}

impl CompleteSetAudit {
    pub fn passed(&self) -> bool {
        self.audit.passed() && self.audit.bases == self.dim + 1
    }
}

pub fn complete_set(d: usize) -> Result<(Vec<String>, MuBasisSet<f64>)> {
    let half = F4Angle::half_pi();
    let p = FRAC_PI_2;
    let names: Vec<(String, Named)> = match d {
        2 => vec![("F2".into(), Named::F2), ("H2".into(), Named::H2)],
        3 => vec![
            ("F3".into(), Named::F3),
            ("H3(1)".into(), Named::H3(1)),
            ("H3(2)".into(), Named::H3(2)),
        ],
        4 => vec![
            ("F4(π/2)".into(), Named::F4(half)),
            ("H4(π/2,π/2)".into(), Named::H4 { y: p, z: p }),
            ("J4(π/2,π/2)".into(), Named::J4 { r: p, s: p }),
            ("K4(π/2,π/2)".into(), Named::K4 { t: p, u: p }),
        ],
        5 => std::iter::once(("F5".to_string(), Named::F5))
            .chain((1..=4).map(|k| (format!("H5({k})"), Named::H5(k))))
            .collect(),
        _ => return Err(Error::Domain(format!("d = {d} is outside 2..=5"))),
    };
    let mut labels = vec!["I".to_string()];
    let mut bases = vec![Basis::identity(d)];
    for (label, n) in names {
        labels.push(label);
        bases.push(build_named(&n)?);
    }
    Ok((labels, MuBasisSet::new(bases)?))
}

/// Builds the complete set and audits every basis pair.
pub fn verify_complete_set(d: usize) -> Result<CompleteSetAudit> {
    let (labels, set) = complete_set(d)?;
    Ok(CompleteSetAudit {
        dim: d,
        labels,
        audit: audit_set(&set, crate::TOL)?,
    })
}

/// Plain-text table of class counts, one column per report.
pub fn render_table(reports: &[ClassificationReport]) -> String {
    let mut out = format!("{:<12}", "d");
    for r in reports {
        out.push_str(&format!("{:>6}", r.dim));
    }
    out.push('\n');
    for (i, row) in ROW_NAMES.iter().enumerate() {
        out.push_str(&format!("{row:<12}"));
        for r in reports {
            let cell = r.counts[i].map_or("-".to_string(), |c| c.to_string());
            out.push_str(&format!("{cell:>6}"));
        }
        out.push('\n');
    }
    out
}

/// The same table as CSV with a header row.
pub fn render_csv(reports: &[ClassificationReport]) -> String {
    let mut out = String::from("row");
    for r in reports {
        out.push_str(&format!(",d{}", r.dim));
    }
    out.push('\n');
    for (i, row) in ROW_NAMES.iter().enumerate() {
        out.push_str(row);
        for r in reports {
            out.push(',');
            out.push_str(&r.counts[i].map_or("-".to_string(), |c| c.to_string()));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_display() {
        assert_eq!(ClassCount::Finite(2).to_string(), "2");
        assert_eq!(ClassCount::Continuum(3).to_string(), "∞^3");
    }

    #[test]
    fn qubit_classification() {
        let rep = classify(2).unwrap();
        assert!(rep.matches_expected());
        assert!(rep.evidence_holds());
        match rep.classes(3).unwrap() {
            Classes::Representatives { labels, .. } => {
                assert_eq!(labels, &vec!["{I, F2, H2}".to_string()])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn qutrit_classification() {
        let rep = classify(3).unwrap();
        assert!(rep.matches_expected(), "{:?}", rep.counts);
        assert!(rep.evidence_holds());
    }

    #[test]
    fn complete_sets_pass() {
        for d in 2..=5 {
            let a = verify_complete_set(d).unwrap();
            assert!(a.passed(), "d = {d}");
            assert!(a.audit.fully_exact);
        }
        assert_eq!(verify_complete_set(5).unwrap().audit.overlaps_checked(), 375);
    }

    #[test]
    fn rejects_out_of_range_dimension() {
        assert!(classify(7).is_err());
        assert!(expected_counts(1).is_err());
    }

    #[test]
    fn absorption_targets_one_orbit() {
        for kind in [ParametricKind::J4, ParametricKind::K4] {
            assert_eq!(
                absorption_identification(kind, 0.4, 1.3).unwrap().verdict,
                Verdict::Equivalent
            );
            let f = build_named(&Named::F4(F4Angle::half_pi())).unwrap();
            let a = MuBasisSet::new(vec![Basis::identity(4), f.clone(), kind.build(0.4, 1.3).unwrap()]).unwrap();
            let b = d4_triple(FRAC_PI_2, 0.9, 1.3).unwrap();
            assert_ne!(are_equivalent(&a, &b).unwrap().verdict, Verdict::Equivalent);
        }
    }

    #[test]
    fn conjugation_moves_parameters() {
        assert_eq!(
            conjugation_identification(0.7, 1.1, 0.4).unwrap().verdict,
            Verdict::Equivalent
        );
        let a = d4_triple(0.7, 1.1, 0.4).unwrap().conj();
        let b = d4_triple(PI - 0.7, 1.1, 0.4).unwrap();
        assert_ne!(are_equivalent(&a, &b).unwrap().verdict, Verdict::Equivalent);
    }

    #[test]
    fn quadruple_exclusion_residual() {
        let ex = quadruple_exclusion(100).unwrap();
        assert!(ex.identity_max_error < 1e-12);
        assert!(ex.min_residual >= 0.25 - 1e-9);
    }
}
