//! Exact arithmetic in the ring of cyclotomic integers `Z[ω_q]`, `ω_q = e^{2πi/q}`.
//!
//! Elements are kept in a canonical reduced form after every operation so
//! that structural equality coincides with equality of complex values:
//!
//! * prime `q`: the coefficient of `ω^{q-1}` is eliminated with
//!   `1 + ω + … + ω^{q-1} = 0`, leaving the integral basis `1, ω, …, ω^{q-2}`;
//! * `q = 4`: `ω² = -1` leaves the basis `1, i`.
//!
//! Other composite orders are representable (for example as the target of
//! [`Cyclotomic::embed`]) but are not reduced, and questions that need a
//! canonical form (such as [`Cyclotomic::as_integer`]) reject them.

use std::fmt::{self, Debug};
use std::hash::Hash;

use num_complex::Complex;
use num_traits::{PrimInt, Signed};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Integer coefficient type of a cyclotomic integer.
pub trait Coeff: PrimInt + Signed + Debug + Hash + Send + Sync + Serialize + DeserializeOwned + 'static {}

impl Coeff for i32 {}
impl Coeff for i64 {}
impl Coeff for i128 {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// True when the canonical form of order `q` is a Z-basis representation.
pub fn is_reducible_order(q: u32) -> bool {
    q == 1 || q == 4 || is_prime(q)
}

/// An element `Σ coeffs[k] ω_q^k` of `Z[ω_q]` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "I: Coeff")]
pub struct Cyclotomic<I: Coeff> {
    order: u32,
    coeffs: Vec<I>,
}

impl<I: Coeff> Debug for Cyclotomic<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}{:?}", self.order, self.coeffs)
    }
}

fn checked_sub<I: Coeff>(a: I, b: I) -> Result<I> {
    a.checked_sub(&b).ok_or(Error::Overflow)
}

fn checked_add<I: Coeff>(a: I, b: I) -> Result<I> {
    a.checked_add(&b).ok_or(Error::Overflow)
}

fn checked_mul<I: Coeff>(a: I, b: I) -> Result<I> {
    a.checked_mul(&b).ok_or(Error::Overflow)
}

impl<I: Coeff> Cyclotomic<I> {
    /// Builds an element from raw coefficients and reduces it.
    pub fn from_coeffs(order: u32, coeffs: Vec<I>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("cyclotomic order must be positive".into()));
        }
        if coeffs.len() != order as usize {
            return Err(Error::Mismatch(format!(
                "expected {order} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut x = Self { order, coeffs };
        x.reduce_in_place()?;
        Ok(x)
    }

    pub fn zero(order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        Self {
            order,
            coeffs: vec![I::zero(); order as usize],
        }
    }

    pub fn from_int(order: u32, n: I) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = n;
        x
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, I::one())
    }

    /// `ω_q^k`, with `k` taken modulo `q`.
    pub fn root(order: u32, k: i64) -> Self {
        let mut x = Self::zero(order);
        let idx = k.rem_euclid(order as i64) as usize;
        x.coeffs[idx] = I::one();
        // only ω^{q-1} (prime q) and ω^2, ω^3 (q = 4) are non-canonical
        x.reduce_in_place().expect("single root never overflows");
        x
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[I] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn reduce_in_place(&mut self) -> Result<()> {
        let q = self.order as usize;
        if q == 4 {
            self.coeffs[0] = checked_sub(self.coeffs[0], self.coeffs[2])?;
            self.coeffs[1] = checked_sub(self.coeffs[1], self.coeffs[3])?;
            self.coeffs[2] = I::zero();
            self.coeffs[3] = I::zero();
        } else if is_prime(self.order) {
            let last = self.coeffs[q - 1];
            if !last.is_zero() {
                for c in &mut self.coeffs[..q - 1] {
                    *c = checked_sub(*c, last)?;
                }
                self.coeffs[q - 1] = I::zero();
            }
        }
        Ok(())
    }

    /// Returns the canonical form; canonical inputs are returned unchanged.
    pub fn reduce(&self) -> Result<Self> {
        let mut x = self.clone();
        x.reduce_in_place()?;
        Ok(x)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| checked_add(*a, *b))
            .collect::<Result<Vec<_>>>()?;
        let mut x = Self {
            order: self.order,
            coeffs,
        };
        x.reduce_in_place()?;
        Ok(x)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -*c).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let q = self.order as usize;
        let mut out = vec![I::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % q;
                out[k] = checked_add(out[k], checked_mul(*a, *b)?)?;
            }
        }
        let mut x = Self {
            order: self.order,
            coeffs: out,
        };
        x.reduce_in_place()?;
        Ok(x)
    }

    pub fn try_scale(&self, n: I) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| checked_mul(*c, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    /// Multiplication by `ω^k`: a rotation of the coefficient vector.
    pub fn mul_root(&self, k: i64) -> Self {
        let q = self.order as usize;
        let shift = k.rem_euclid(q as i64) as usize;
        let mut coeffs = vec![I::zero(); q];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + shift) % q] = *c;
        }
        let mut x = Self {
            order: self.order,
            coeffs,
        };
        x.reduce_in_place().expect("rotation keeps magnitudes bounded");
        x
    }

    /// Complex conjugate: `ω^k ↦ ω^{q-k}`.
    pub fn conj(&self) -> Self {
        let q = self.order as usize;
        let mut coeffs = vec![I::zero(); q];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(q - k) % q] = *c;
        }
        let mut x = Self {
            order: self.order,
            coeffs,
        };
        x.reduce_in_place()
            .expect("conjugation of a canonical element cannot overflow");
        x
    }

    /// `|x|² = x · conj(x)`.
    pub fn norm_sqr(&self) -> Result<Self> {
        self.try_mul(&self.conj())
    }

    /// Returns `Some(n)` when the element equals the integer `n`.
    pub fn as_integer(&self) -> Result<Option<I>> {
        match self.order {
            1 => Ok(Some(self.coeffs[0])),
            4 => Ok(self.coeffs[1].is_zero().then_some(self.coeffs[0])),
            q if is_prime(q) => Ok(self.coeffs[1..].iter().all(|c| c.is_zero()).then_some(self.coeffs[0])),
            q => Err(Error::UnsupportedOrder(q)),
        }
    }

    /// Re-expresses the element over `ω_{target}` with `ω_q = ω_target^{target/q}`.
    pub fn embed(&self, target_order: u32) -> Result<Self> {
        if target_order == 0 || !target_order.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: target_order,
            });
        }
        let step = (target_order / self.order) as usize;
        let mut coeffs = vec![I::zero(); target_order as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = *c;
        }
        let mut x = Self {
            order: target_order,
            coeffs,
        };
        x.reduce_in_place()?;
        Ok(x)
    }

    /// Floating evaluation `Σ coeffs[k] e^{2πik/q}`.
    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let q = T::from_u32(self.order).expect("order fits the scalar type");
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, (k, c)| {
                let theta = T::TAU() * T::from_usize_lossy(k) / q;
                let c = T::from(*c).expect("coefficient fits the scalar type");
                acc + Complex::from_polar(c, theta)
            },
        )
    }
}

/// Ring `Z[ω_q]` holding the roots of unity of the given order: the order
/// itself when canonical, else `q` with `order = 2q` for odd `q`.
pub(crate) fn ring_for(order: u32) -> Result<u32> {
    if is_reducible_order(order) {
        Ok(order)
    } else if order.is_multiple_of(2) && is_reducible_order(order / 2) && (order / 2) % 2 == 1 {
        Ok(order / 2)
    } else {
        Err(Error::UnsupportedOrder(order))
    }
}

/// Exact representation of `±ω_q^k`-type roots of unity inside `Z[ω_q]`.
///
/// A root `e^{2πi·exp/order}` is representable when `order | q`, or when `q`
/// is odd and `order | 2q` (then `-1` supplies the missing square root).
pub fn root_in<I: Coeff>(q: u32, order: u32, exp: i64) -> Result<Cyclotomic<I>> {
    if order == 0 {
        return Err(Error::Domain("root order must be positive".into()));
    }
    let exp = exp.rem_euclid(order as i64);
    if q.is_multiple_of(order) {
        return Ok(Cyclotomic::root(q, exp * (q / order) as i64));
    }
    if q % 2 == 1 && (2 * q).is_multiple_of(order) {
        // ω_{2q}^e = (-1)^e · ω_q^{e(q+1)/2}
        let e = exp * ((2 * q) / order) as i64;
        let half = (q as i64 + 1) / 2;
        let r = Cyclotomic::root(q, e * half);
        return Ok(if e % 2 == 1 { r.neg() } else { r });
    }
    Err(Error::OrderMismatch { left: order, right: q })
}

/// Order `lcm(a, b)`, restricted to orders with a canonical form.
pub fn common_order(a: u32, b: u32) -> Result<u32> {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let l = a / gcd(a, b) * b;
    if is_reducible_order(l) {
        Ok(l)
    } else {
        Err(Error::UnsupportedOrder(l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CyclotomicInt;
    use proptest::prelude::*;

    fn c(q: u32, v: &[i64]) -> CyclotomicInt {
        CyclotomicInt::from_coeffs(q, v.to_vec()).unwrap()
    }

    #[test]
    fn root_sum_identities() {
        let w = CyclotomicInt::root(3, 1);
        let w2 = CyclotomicInt::root(3, 2);
        assert_eq!(w.try_add(&w2).unwrap().coeffs(), &[-1, 0, 0]);

        let i = CyclotomicInt::root(4, 1);
        assert_eq!(i.try_add(&i).unwrap(), c(4, &[0, 2, 0, 0]));

        let s = (0..5).fold(CyclotomicInt::zero(5), |acc, k| {
            acc.try_add(&CyclotomicInt::root(5, k)).unwrap()
        });
        assert!(s.is_zero());
        assert_eq!(s.as_integer().unwrap(), Some(0));
    }

    #[test]
    fn products() {
        let i = CyclotomicInt::root(4, 1);
        assert_eq!(i.try_mul(&i).unwrap(), CyclotomicInt::from_int(4, -1));
        let p = CyclotomicInt::root(3, 1).try_mul(&CyclotomicInt::root(3, 2)).unwrap();
        assert_eq!(p, CyclotomicInt::one(3));
        let p = CyclotomicInt::root(5, 3).try_mul(&CyclotomicInt::root(5, 4)).unwrap();
        assert_eq!(p, CyclotomicInt::root(5, 2));
    }

    #[test]
    fn conjugation() {
        assert_eq!(CyclotomicInt::root(5, 1).conj(), CyclotomicInt::root(5, 4));
        assert_eq!(c(4, &[1, 1, 0, 0]).conj(), c(4, &[1, -1, 0, 0]));
        let m1 = CyclotomicInt::from_int(3, -1);
        assert_eq!(m1.conj(), m1);
    }

    #[test]
    fn rationality() {
        assert_eq!(CyclotomicInt::root(3, 1).as_integer().unwrap(), None);
        // |Σ_j ω^0|² for the first column of F5, unnormalized
        let col = CyclotomicInt::from_int(5, 5);
        assert_eq!(col.norm_sqr().unwrap().as_integer().unwrap(), Some(25));
        assert_eq!(CyclotomicInt::one(6).as_integer(), Err(Error::UnsupportedOrder(6)));
    }

    #[test]
    fn embedding() {
        let m1 = CyclotomicInt::from_int(2, -1);
        assert_eq!(m1.embed(4).unwrap(), CyclotomicInt::root(4, 2));
        let w = CyclotomicInt::root(5, 1);
        assert_eq!(w.embed(5).unwrap(), w);
        // order 10 has no canonical form, so compare values
        let e = m1.embed(10).unwrap();
        let target = CyclotomicInt::root(10, 5);
        assert!((e.to_complex::<f64>() - target.to_complex::<f64>()).norm() < 1e-15);
        assert!(matches!(m1.embed(5), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn order_mismatch() {
        let a = CyclotomicInt::one(3);
        let b = CyclotomicInt::one(5);
        assert_eq!(a.try_add(&b), Err(Error::OrderMismatch { left: 3, right: 5 }));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn canonical_form_shape() {
        for q in [2u32, 3, 5, 7] {
            for k in 0..q as i64 {
                let r = CyclotomicInt::root(q, k);
                assert_eq!(r.coeffs()[q as usize - 1], 0);
            }
        }
        for k in 0..4 {
            let r = CyclotomicInt::root(4, k);
            assert_eq!(&r.coeffs()[2..], &[0, 0]);
        }
    }

    #[test]
    fn roots_of_doubled_order() {
        // ω_10 = -ω_5^3
        let r: CyclotomicInt = root_in(5, 10, 1).unwrap();
        assert_eq!(r, CyclotomicInt::root(5, 3).neg());
        let z = r.to_complex::<f64>();
        assert!((z - Complex::from_polar(1.0, std::f64::consts::PI / 5.0)).norm() < 1e-12);
        assert!(root_in::<i64>(5, 4, 1).is_err());
        assert_eq!(root_in::<i64>(4, 2, 1).unwrap(), CyclotomicInt::from_int(4, -1));
    }

    #[test]
    fn generic_coefficient_width() {
        let a = Cyclotomic::<i32>::root(5, 2);
        let b = Cyclotomic::<i32>::root(5, 3);
        assert_eq!(a.try_mul(&b).unwrap(), Cyclotomic::<i32>::one(5));
        let big = Cyclotomic::<i32>::from_int(5, i32::MAX);
        assert_eq!(big.try_add(&big), Err(Error::Overflow));
    }

    fn order_strategy() -> impl Strategy<Value = u32> {
        prop_oneof![Just(2u32), Just(3), Just(4), Just(5), Just(7)]
    }

    fn element(q: u32) -> impl Strategy<Value = CyclotomicInt> {
        prop::collection::vec(-20i64..20, q as usize).prop_map(move |v| CyclotomicInt::from_coeffs(q, v).unwrap())
    }

    fn triple() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt, CyclotomicInt)> {
        order_strategy().prop_flat_map(|q| (element(q), element(q), element(q)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
            prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
            prop_assert_eq!(
                a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
                a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.try_add(&b).unwrap().try_add(&c).unwrap(),
                a.try_add(&b.try_add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
                a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn conjugation_laws((a, b, _c) in triple()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!(a.try_mul(&b).unwrap().conj(), a.conj().try_mul(&b.conj()).unwrap());
            let n = a.norm_sqr().unwrap().as_integer().unwrap();
            if let Some(n) = n {
                prop_assert!(n >= 0);
            }
        }

        #[test]
        fn reduction_idempotent((a, _b, _c) in triple()) {
            prop_assert_eq!(a.reduce().unwrap(), a.clone());
        }

        #[test]
        fn matches_naive_evaluation(q in order_strategy(), raw in prop::collection::vec(-20i64..20, 7)) {
            let raw = raw[..q as usize].to_vec();
            let naive = raw.iter().enumerate().fold(Complex::new(0.0f64, 0.0), |acc, (k, c)| {
                acc + Complex::from_polar(*c as f64, std::f64::consts::TAU * k as f64 / q as f64)
            });
            let x = CyclotomicInt::from_coeffs(q, raw).unwrap();
            prop_assert!((x.to_complex::<f64>() - naive).norm() < 1e-12);
        }
    }
}
