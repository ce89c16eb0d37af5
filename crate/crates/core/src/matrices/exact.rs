use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{common_order, ring_for, root_in};
use crate::error::{Error, Result};
use crate::matrices::{ComplexMatrix, PhaseMatrix};
use crate::scalar::Real;
use crate::CyclotomicInt;

/// Compares `a/√ma` with `b/√mb` exactly.
///
/// With unequal scales the squares are compared in `Z[ω]`, which fixes the
/// values up to sign; the sign is read off `Re(a·conj(b))`, whose magnitude
/// is `|a||b|` and therefore never near zero for non-zero operands.
pub fn scaled_eq(a: &CyclotomicInt, ma: i64, b: &CyclotomicInt, mb: i64) -> Result<bool> {
    if ma == mb {
        return Ok(a == b);
    }
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    let lhs = a.try_mul(a)?.try_scale(mb)?;
    let rhs = b.try_mul(b)?.try_scale(ma)?;
    if lhs != rhs {
        return Ok(false);
    }
    Ok(a.try_mul(&b.conj())?.to_complex::<f64>().re > 0.0)
}

/// An exact column vector `entries / √scale` over `Z[ω_order]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactVector {
    order: u32,
    entries: Vec<CyclotomicInt>,
    scale: i64,
}

impl ExactVector {
    pub fn new(order: u32, entries: Vec<CyclotomicInt>, scale: i64) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::Domain("vector scale must be positive".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: e.order(),
            });
        }
        Ok(Self { order, entries, scale })
    }

    /// `(ω^{e_0}, …, ω^{e_{d-1}}) / √d`.
    pub fn from_phases(order: u32, exps: &[u32]) -> Self {
        let ring = ring_for(order).unwrap_or(order);
        Self {
            order: ring,
            entries: exps
                .iter()
                .map(|&e| root_in(ring, order, e as i64).unwrap_or_else(|_| CyclotomicInt::root(order, e as i64)))
                .collect(),
            scale: exps.len() as i64,
        }
    }

    /// Standard basis vector `e_j` in dimension `dim`.
    pub fn unit(dim: usize, j: usize) -> Self {
        Self {
            order: 1,
            entries: (0..dim)
                .map(|k| CyclotomicInt::from_int(1, i64::from(k == j)))
                .collect(),
            scale: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn entries(&self) -> &[CyclotomicInt] {
        &self.entries
    }

    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(Self {
            order: target,
            entries: self.entries.iter().map(|e| e.embed(target)).collect::<Result<_>>()?,
            scale: self.scale,
        })
    }

    /// Unnormalized inner product `Σ conj(u_j) v_j` together with `scale_u · scale_v`.
    pub fn inner(&self, other: &Self) -> Result<(CyclotomicInt, i64)> {
        if self.dim() != other.dim() {
            return Err(Error::Mismatch(format!(
                "vector dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let q = common_order(self.order, other.order)?;
        let (u, v) = (self.embed(q)?, other.embed(q)?);
        let mut acc = CyclotomicInt::zero(q);
        for (a, b) in u.entries.iter().zip(&v.entries) {
            acc = acc.try_add(&a.conj().try_mul(b)?)?;
        }
        Ok((acc, self.scale * other.scale))
    }

    pub fn to_complex<T: Real>(&self) -> Vec<Complex<T>> {
        let s = T::one() / T::from_i64(self.scale).expect("scale fits").sqrt();
        self.entries.iter().map(|e| e.to_complex::<T>() * s).collect()
    }
}

/// An exact matrix `num / √scale` over `Z[ω_order]`.
///
/// Products of Butson matrices land here; [`ExactMatrix::to_phase`]
/// recognises the ones that are again Butson matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawExact", into = "RawExact")]
pub struct ExactMatrix {
    dim: usize,
    order: u32,
    num: Vec<CyclotomicInt>,
    scale: i64,
}

#[derive(Serialize, Deserialize)]
struct RawExact {
    dim: usize,
    order: u32,
    scale: i64,
    num: Vec<Vec<i64>>,
}

impl TryFrom<RawExact> for ExactMatrix {
    type Error = Error;
    fn try_from(r: RawExact) -> Result<Self> {
        let num = r
            .num
            .into_iter()
            .map(|c| CyclotomicInt::from_coeffs(r.order, c))
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::from_parts(r.dim, r.order, num, r.scale)
    }
}

impl From<ExactMatrix> for RawExact {
    fn from(m: ExactMatrix) -> Self {
        RawExact {
            dim: m.dim,
            order: m.order,
            scale: m.scale,
            num: m.num.iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }
}

impl ExactMatrix {
    pub fn from_parts(dim: usize, order: u32, num: Vec<CyclotomicInt>, scale: i64) -> Result<Self> {
        if dim == 0 || num.len() != dim * dim {
            return Err(Error::Mismatch(format!("{} entries for dim {dim}", num.len())));
        }
        if scale <= 0 {
            return Err(Error::Domain("matrix scale must be positive".into()));
        }
        if let Some(e) = num.iter().find(|e| e.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: e.order(),
            });
        }
        Ok(Self { dim, order, num, scale })
    }

    pub fn identity(dim: usize) -> Self {
        let num = (0..dim * dim)
            .map(|i| CyclotomicInt::from_int(1, i64::from(i / dim == i % dim)))
            .collect();
        Self {
            dim,
            order: 1,
            num,
            scale: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn num(&self, row: usize, col: usize) -> &CyclotomicInt {
        &self.num[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> ExactVector {
        ExactVector {
            order: self.order,
            entries: (0..self.dim).map(|j| self.num(j, col).clone()).collect(),
            scale: self.scale,
        }
    }

    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(Self {
            dim: self.dim,
            order: target,
            num: self.num.iter().map(|e| e.embed(target)).collect::<Result<_>>()?,
            scale: self.scale,
        })
    }

    fn map(&self, f: impl Fn(usize, usize) -> CyclotomicInt) -> Self {
        let d = self.dim;
        Self {
            dim: d,
            order: self.order,
            num: (0..d * d).map(|i| f(i / d, i % d)).collect(),
            scale: self.scale,
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|j, k| self.num(j, k).conj())
    }

    pub fn adjoint(&self) -> Self {
        self.map(|j, k| self.num(k, j).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!("dims {} and {}", self.dim, other.dim)));
        }
        let q = common_order(self.order, other.order)?;
        let (a, b) = (self.embed(q)?, other.embed(q)?);
        let d = self.dim;
        let mut num = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                let mut acc = CyclotomicInt::zero(q);
                for l in 0..d {
                    acc = acc.try_add(&a.num(j, l).try_mul(b.num(l, k))?)?;
                }
                num.push(acc);
            }
        }
        Ok(Self {
            dim: d,
            order: q,
            num,
            scale: self.scale.checked_mul(other.scale).ok_or(Error::Overflow)?,
        })
    }

    /// Exact equality of the represented complex matrices.
    pub fn exact_eq(&self, other: &Self) -> Result<bool> {
        if self.dim != other.dim {
            return Ok(false);
        }
        let q = common_order(self.order, other.order)?;
        let (a, b) = (self.embed(q)?, other.embed(q)?);
        for (x, y) in a.num.iter().zip(&b.num) {
            if !scaled_eq(x, a.scale, y, b.scale)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> Result<bool> {
        self.exact_eq(&Self::identity(self.dim))
    }

    pub fn to_complex<T: Real>(&self) -> ComplexMatrix<T> {
        let s = T::one() / T::from_i64(self.scale).expect("scale fits").sqrt();
        ComplexMatrix::from_fn(self.dim, |j, k| self.num(j, k).to_complex::<T>() * s)
    }

    /// Downcast to a Butson matrix: succeeds iff every entry equals `u/√d`
    /// with `u` a root of unity of order `q` (or `2q` for odd `q`).
    pub fn to_phase(&self) -> Result<Option<PhaseMatrix>> {
        let d = self.dim as i64;
        if self.scale % d != 0 {
            return Ok(None);
        }
        let c = self.scale / d;
        let q = self.order;
        let big = if q % 2 == 1 { 2 * q } else { q };
        let mut exps = vec![vec![0u32; self.dim]; self.dim];
        for j in 0..self.dim {
            for k in 0..self.dim {
                let x = self.num(j, k);
                if x.norm_sqr()?.as_integer()? != Some(c) {
                    return Ok(None);
                }
                let z = x.to_complex::<f64>();
                let e = (z.arg() * big as f64 / std::f64::consts::TAU)
                    .round()
                    .rem_euclid(big as f64) as i64;
                let root = root_in::<i64>(q, big, e)?;
                let y = x.try_mul(&root.conj())?;
                let square_ok = y.try_mul(&y)?.as_integer()? == Some(c);
                if !square_ok || y.to_complex::<f64>().re <= 0.0 {
                    return Ok(None);
                }
                exps[j][k] = e as u32;
            }
        }
        let m = PhaseMatrix::new(big, exps)?;
        if big != q && m.exps().iter().flatten().all(|e| e % 2 == 0) {
            return Ok(Some(PhaseMatrix::from_fn(self.dim, q, |j, k| (m.exp(j, k) / 2) as i64)));
        }
        Ok(Some(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_times_adjoint_is_identity() {
        let f = PhaseMatrix::fourier(5).to_exact();
        let p = f.adjoint().mul(&f).unwrap();
        assert_eq!(p.scale(), 25);
        assert!(p.is_identity().unwrap());
        assert_eq!(p.to_phase().unwrap(), None);
    }

    #[test]
    fn downcast_recovers_phase_matrix() {
        let d = [0i64, 1, 4, 4, 1];
        let h1 = PhaseMatrix::fourier(5).left_diag(&d);
        let back = h1.to_exact().to_phase().unwrap().unwrap();
        assert_eq!(back, h1);
    }

    #[test]
    fn downcast_of_fourier_adjoint_product_needs_signs() {
        // F5† · D F5 is Butson of order 5, F5† · D² F5 needs order 10
        let f = PhaseMatrix::fourier(5);
        let h1 = f.left_diag(&[0, 1, 4, 4, 1]);
        let p1 = f.adjoint().to_exact().mul(&h1.to_exact()).unwrap();
        assert_eq!(p1.to_phase().unwrap().unwrap().order(), 5);
        let h2 = f.left_diag(&[0, 2, 8, 8, 2]);
        let p = f.adjoint().to_exact().mul(&h2.to_exact()).unwrap();
        let ph = p.to_phase().unwrap().expect("Butson product");
        assert_eq!(ph.order(), 10);
        assert_eq!(ph.exp(0, 0), 5);
        let diff = ph.to_complex::<f64>().max_abs_diff(&p.to_complex::<f64>());
        assert!(diff < 1e-12);
    }

    #[test]
    fn scaled_comparison() {
        // √5 = 1 + 2ω + 2ω⁴ in Z[ω_5]: 5/√25 == (1+2ω+2ω⁴)/√5
        let g = CyclotomicInt::from_coeffs(5, vec![1, 2, 0, 0, 2]).unwrap();
        let five = CyclotomicInt::from_int(5, 5);
        assert!(scaled_eq(&five, 25, &g, 5).unwrap());
        assert!(!scaled_eq(&five.neg(), 25, &g, 5).unwrap());
    }

    #[test]
    fn serde_round_trip() {
        let p = PhaseMatrix::fourier(3).to_exact();
        let s = serde_json::to_string(&p).unwrap();
        let back: ExactMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
