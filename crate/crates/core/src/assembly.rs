//! Arranging MU vectors into orthonormal bases and bases into maximal MU sets.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{
    audit_pair, mu_overlap, Backend, Basis, ComplexMatrix, ExactMatrix, MuBasisSet, OverlapKind, Vector,
};
use crate::scalar::Real;
use crate::solvers::{build_named, F4Angle, Named, VectorFamily};

fn backend_for<T: Real>(u: &Vector<T>, v: &Vector<T>, tol: T) -> Backend<T> {
    match (u, v) {
        (Vector::Exact(_), Vector::Exact(_)) => Backend::Exact,
        _ => Backend::Float { tol },
    }
}

/// Candidate vectors with an edge for every certified orthogonal pair.
#[derive(Debug, Clone)]
pub struct OrthogonalityGraph<T: Real = f64> {
    pub nodes: Vec<Vector<T>>,
    pub adjacency: Vec<Vec<bool>>,
}

impl<T: Real> OrthogonalityGraph<T> {
    pub fn new(nodes: Vec<Vector<T>>, tol: T) -> Result<Self> {
        let n = nodes.len();
        let mut adjacency = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let o = mu_overlap(&nodes[a], &nodes[b], backend_for(&nodes[a], &nodes[b], tol))?;
                let edge = o.kind == OverlapKind::Orthogonal;
                adjacency[a][b] = edge;
                adjacency[b][a] = edge;
            }
        }
        Ok(Self { nodes, adjacency })
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adjacency[a][b])
            .collect()
    }
}

/// All cliques of exactly `size` nodes, each listed in increasing order.
fn cliques_of_size(adj: &[Vec<bool>], size: usize) -> Vec<Vec<usize>> {
    fn grow(adj: &[Vec<bool>], size: usize, current: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for v in start..adj.len() {
            if current.iter().all(|&u| adj[u][v]) {
                current.push(v);
                grow(adj, size, current, v + 1, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(adj, size, &mut Vec::new(), 0, &mut out);
    out
}

/// All maximal cliques, each in increasing order, listed lexicographically.
fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn extend(adj: &[Vec<bool>], current: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        let n = adj.len();
        let mut grew = false;
        for v in start..n {
            if current.iter().all(|&u| adj[u][v]) {
                grew = true;
                current.push(v);
                extend(adj, current, v + 1, out);
                current.pop();
            }
        }
        if !grew {
            let can_extend = (0..n).any(|v| !current.contains(&v) && current.iter().all(|&u| adj[u][v]));
            if !can_extend {
                out.push(current.clone());
            }
        }
    }
    let mut out = Vec::new();
    extend(adj, &mut Vec::new(), 0, &mut out);
    out
}

/// Ordering key that does not depend on where a vector sat in the input.
fn vector_key<T: Real>(v: &Vector<T>) -> (u8, Vec<i64>) {
    match v {
        Vector::Exact(e) => {
            let mut k = vec![e.order() as i64, e.scale()];
            k.extend(e.entries().iter().flat_map(|c| c.coeffs().iter().copied()));
            (0, k)
        }
        Vector::Float(z) => (
            1,
            z.iter()
                .flat_map(|c| [c.re, c.im])
                .map(|x| (x.to_f64().unwrap_or(f64::NAN) * 1e9).round() as i64)
                .collect(),
        ),
    }
}

fn basis_from_columns<T: Real>(cols: &[&Vector<T>]) -> Result<Basis<T>> {
    let d = cols.len();
    let exact: Option<Vec<_>> = cols
        .iter()
        .map(|v| match v {
            Vector::Exact(e) => Some(e),
            Vector::Float(_) => None,
        })
        .collect();
    if let Some(ex) = exact {
        let order = ex.iter().map(|e| e.order()).fold(1, crate::matrices::phase::lcm);
        let same_scale = ex.iter().all(|e| e.scale() == ex[0].scale());
        if same_scale {
            let lifted = ex.iter().map(|e| e.embed(order)).collect::<Result<Vec<_>>>();
            if let Ok(lifted) = lifted {
                let num = (0..d * d).map(|i| lifted[i % d].entries()[i / d].clone()).collect();
                return Basis::from_exact(ExactMatrix::from_parts(d, order, num, ex[0].scale())?);
            }
        }
    }
    let cols: Vec<_> = cols.iter().map(|v| v.to_complex()).collect();
    Ok(Basis::Complex(ComplexMatrix::from_columns(&cols)?))
}

/// Every orthonormal basis formed by the vectors: the `d`-cliques of the
/// orthogonality graph. Columns and bases are ordered canonically, so the
/// output does not depend on the input order.
pub fn assemble_bases<T: Real>(vectors: &[Vector<T>], tol: T) -> Result<Vec<Basis<T>>> {
    let Some(d) = vectors.first().map(Vector::dim) else {
        return Ok(Vec::new());
    };
    if vectors.iter().any(|v| v.dim() != d) {
        return Err(Error::Mismatch("vectors of different dimensions".into()));
    }
    let mut sorted: Vec<Vector<T>> = vectors.to_vec();
    sorted.sort_by_key(vector_key);
    sorted.dedup_by(|a, b| vector_key(a) == vector_key(b));
    let graph = OrthogonalityGraph::new(sorted, tol)?;
    cliques_of_size(&graph.adjacency, d)
        .into_iter()
        .map(|c| basis_from_columns(&c.iter().map(|&i| &graph.nodes[i]).collect::<Vec<_>>()))
        .collect()
}

/// Bases as nodes, with an edge for every pair whose `d²` overlaps are all
/// unbiased.
#[derive(Debug, Clone)]
pub struct UnbiasednessGraph<T: Real = f64> {
    pub nodes: Vec<Basis<T>>,
    pub adjacency: Vec<Vec<bool>>,
}

impl<T: Real> UnbiasednessGraph<T> {
    pub fn new(nodes: Vec<Basis<T>>, tol: T) -> Result<Self> {
        let n = nodes.len();
        let mut adjacency = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let edge = audit_pair(&nodes[a], &nodes[b], a, b, tol)?.passed();
                adjacency[a][b] = edge;
                adjacency[b][a] = edge;
            }
        }
        Ok(Self { nodes, adjacency })
    }
}

/// All maximal MU sets that extend `seed` by bases drawn from `bases`.
///
/// Candidates not MU to every seed basis are dropped first.
pub fn maximal_mu_sets<T: Real>(bases: &[Basis<T>], seed: &MuBasisSet<T>, tol: T) -> Result<Vec<MuBasisSet<T>>> {
    let mut candidates = Vec::new();
    for b in bases {
        let mut ok = true;
        for (i, s) in seed.bases().iter().enumerate() {
            if !audit_pair(s, b, i, seed.len(), tol)?.passed() {
                ok = false;
                break;
            }
        }
        if ok {
            candidates.push(b.clone());
        }
    }
    if candidates.is_empty() {
        return Ok(vec![seed.clone()]);
    }
    let graph = UnbiasednessGraph::new(candidates, tol)?;
    maximal_cliques(&graph.adjacency)
        .into_iter()
        .map(|c| {
            let mut all = seed.bases().to_vec();
            all.extend(c.iter().map(|&i| graph.nodes[i].clone()));
            MuBasisSet::new(all)
        })
        .collect()
}

/// The two-parameter `d = 4` bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParametricKind {
    H4,
    J4,
    K4,
}

impl ParametricKind {
    pub const ALL: [ParametricKind; 3] = [ParametricKind::H4, ParametricKind::J4, ParametricKind::K4];

    pub fn params(&self) -> [&'static str; 2] {
        match self {
            ParametricKind::H4 => ["y", "z"],
            ParametricKind::J4 => ["r", "s"],
            ParametricKind::K4 => ["t", "u"],
        }
    }

    /// Families forming the columns, in column order.
    pub fn column_families(&self) -> [&'static str; 4] {
        match self {
            ParametricKind::H4 => ["h2", "h1", "h3", "h4"],
            ParametricKind::J4 => ["j1", "j2", "j3", "j4"],
            ParametricKind::K4 => ["k1", "k2", "k3", "k4"],
        }
    }

    /// Whether the basis exists for `F4(x)`: `H4` always, `J4` and `K4` only
    /// at `x = π/2`.
    pub fn exists_at(&self, x: F4Angle) -> bool {
        *self == ParametricKind::H4 || x.is_half_pi()
    }

    pub fn build<T: Real>(&self, a: f64, b: f64) -> Result<Basis<T>> {
        build_named(&match self {
            ParametricKind::H4 => Named::H4 { y: a, z: b },
            ParametricKind::J4 => Named::J4 { r: a, s: b },
            ParametricKind::K4 => Named::K4 { t: a, u: b },
        })
    }
}

/// A parametric basis with the parameter identifications its columns need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricBasis {
    pub kind: ParametricKind,
    /// Column families in column order.
    pub columns: Vec<String>,
    /// Pairs of family parameters that must coincide, such as `y = y'`.
    pub constraints: Vec<(String, String)>,
}

/// Groups the `d = 4` families into parametric bases.
pub fn pair_families(families: &[VectorFamily]) -> Result<Vec<ParametricBasis>> {
    for f in families {
        let known = ParametricKind::ALL
            .iter()
            .any(|k| k.column_families().contains(&f.label.as_str()));
        if !known || f.dim() != 4 {
            return Err(Error::UnknownFamily(f.label.clone()));
        }
    }
    let find = |label: &str| families.iter().find(|f| f.label == label);
    let mut out = Vec::new();
    for kind in ParametricKind::ALL {
        let cols = kind.column_families();
        let present: Vec<&VectorFamily> = cols.iter().filter_map(|l| find(l)).collect();
        if present.len() != 4 {
            continue;
        }
        let mut constraints: Vec<(String, String)> = Vec::new();
        for f in &present {
            if let Some(base) = f.param.strip_suffix('\'') {
                constraints.push((base.to_string(), f.param.clone()));
            }
        }
        constraints.sort();
        out.push(ParametricBasis {
            kind,
            columns: cols.iter().map(|s| s.to_string()).collect(),
            constraints,
        });
    }
    Ok(out)
}

/// When two parametric bases (for `F4(π/2)`) are MU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    /// Never, for any parameter values.
    Never,
    /// Exactly when all four parameters equal `π/2`.
    AllHalfPi,
}

/// Closed-form unbiasedness rule between parametric bases: two members of
/// one family are never MU; members of different families are MU only with
/// every parameter at `π/2`.
pub fn pair_rule(a: ParametricKind, b: ParametricKind) -> PairRule {
    if a == b {
        PairRule::Never
    } else {
        PairRule::AllHalfPi
    }
}

/// A parameter that is either free over `[lo, hi)` or pinned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamValue {
    Free { name: String, lo: f64, hi: f64 },
    Fixed { name: String, value: f64 },
}

impl ParamValue {
    fn free(name: &str) -> Self {
        ParamValue::Free {
            name: name.into(),
            lo: 0.0,
            hi: PI,
        }
    }

    fn fixed(name: &str, value: f64) -> Self {
        ParamValue::Fixed {
            name: name.into(),
            value,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, ParamValue::Free { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricMember {
    pub kind: ParametricKind,
    pub params: [ParamValue; 2],
}

/// `{I, F4(x), …}` with parametric members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricSet {
    pub x: ParamValue,
    pub members: Vec<ParametricMember>,
}

impl ParametricSet {
    /// Number of bases including `I` and `F4(x)`.
    pub fn size(&self) -> usize {
        2 + self.members.len()
    }

    pub fn free_parameters(&self) -> usize {
        let members = self.members.iter().flat_map(|m| m.params.iter());
        std::iter::once(&self.x).chain(members).filter(|p| p.is_free()).count()
    }

    /// Concrete set at the given values of the free parameters, in order.
    pub fn instantiate<T: Real>(&self, free: &[f64]) -> Result<MuBasisSet<T>> {
        let mut it = free.iter().copied();
        let mut value = |p: &ParamValue| -> Result<f64> {
            match p {
                ParamValue::Fixed { value, .. } => Ok(*value),
                ParamValue::Free { name, .. } => it
                    .next()
                    .ok_or_else(|| Error::Invalid(format!("no value for free parameter {name}"))),
            }
        };
        let x = F4Angle::new(value(&self.x)?)?;
        let mut bases = vec![Basis::identity(4), build_named(&Named::F4(x))?];
        for m in &self.members {
            if !m.kind.exists_at(x) {
                return Err(Error::Domain(format!("{:?} needs x = π/2", m.kind)));
            }
            let (a, b) = (value(&m.params[0])?, value(&m.params[1])?);
            bases.push(m.kind.build(a, b)?);
        }
        MuBasisSet::new(bases)
    }
}

/// Maximal MU sets extending `{I, F4(x)}`, decided by [`pair_rule`].
///
/// A lone parametric basis keeps its parameters free; two or more bases
/// together pin every parameter to `π/2`.
pub fn d4_maximal_sets(x: F4Angle) -> Vec<ParametricSet> {
    let xv = if x.is_half_pi() {
        ParamValue::fixed("x", FRAC_PI_2)
    } else {
        ParamValue::fixed("x", x.value())
    };
    let kinds: Vec<ParametricKind> = ParametricKind::ALL.into_iter().filter(|k| k.exists_at(x)).collect();
    let adj: Vec<Vec<bool>> = kinds
        .iter()
        .map(|&a| kinds.iter().map(|&b| pair_rule(a, b) == PairRule::AllHalfPi).collect())
        .collect();
    let mut out: Vec<ParametricSet> = kinds
        .iter()
        .map(|&k| ParametricSet {
            x: xv.clone(),
            members: vec![ParametricMember {
                kind: k,
                params: k.params().map(ParamValue::free),
            }],
        })
        .collect();
    for clique in maximal_cliques(&adj).into_iter().filter(|c| c.len() > 1) {
        out.push(ParametricSet {
            x: xv.clone(),
            members: clique
                .iter()
                .map(|&i| ParametricMember {
                    kind: kinds[i],
                    params: kinds[i].params().map(|n| ParamValue::fixed(n, FRAC_PI_2)),
                })
                .collect(),
        });
    }
    out
}
