//! Exact arithmetic in the cyclotomic integers `Z[ζ_h]`.
//!
//! A [`CycInt`] stores the full length-`h` coefficient vector over the powers
//! `ζ_h^0, …, ζ_h^{h-1}` without reducing it. Products are index convolutions
//! modulo `h` (using `ζ_h^h = 1`); the reduction by the cyclotomic polynomial
//! `Φ_h` only happens when deciding equality, inside [`CycInt::is_zero`] and
//! friends. Coefficients are arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("root orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("root order must be positive")]
    ZeroOrder,
    #[error("{0} is not odd")]
    NotOdd(usize),
    #[error("cannot embed Z[zeta_{from}] into Z[zeta_{to}]: {from} does not divide {to}")]
    NotEmbeddable { from: usize, to: usize },
}

/// The root of unity `ζ_order^exp`, with `exp` kept reduced modulo `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootExp {
    order: usize,
    exp: usize,
}

impl RootExp {
    /// Panics if `order == 0`.
    pub fn new(order: usize, exp: i64) -> Self {
        assert!(order > 0, "root order must be positive");
        let exp = exp.rem_euclid(order as i64) as usize;
        RootExp { order, exp }
    }

    pub fn one(order: usize) -> Self {
        RootExp::new(order, 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exp(&self) -> usize {
        self.exp
    }

    pub fn mul(&self, other: &RootExp) -> Result<RootExp, CyclotomicError> {
        check_orders(self.order, other.order)?;
        Ok(RootExp::new(self.order, (self.exp + other.exp) as i64))
    }

    pub fn conj(&self) -> RootExp {
        RootExp::new(self.order, -(self.exp as i64))
    }

    /// Re-express this root in `Z[ζ_to]`; requires `order | to`.
    pub fn embed(&self, to: usize) -> Result<RootExp, CyclotomicError> {
        if to == 0 || to % self.order != 0 {
            return Err(CyclotomicError::NotEmbeddable { from: self.order, to });
        }
        Ok(RootExp::new(to, (self.exp * (to / self.order)) as i64))
    }
}

fn check_orders(a: usize, b: usize) -> Result<(), CyclotomicError> {
    if a == b {
        Ok(())
    } else {
        Err(CyclotomicError::OrderMismatch(a, b))
    }
}

/// Integer polynomial, coefficients in ascending degree. The zero polynomial
/// has an empty coefficient vector; otherwise the leading entry is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Quotient and remainder by a monic divisor.
    ///
    /// Panics if `divisor` is not monic.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::new(Vec::new()), IntPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

/// The `h`-th cyclotomic polynomial, computed as `(x^h - 1) / Π_{d|h, d<h} Φ_d`
/// by exact division.
///
/// Pure: every call recomputes from scratch. [`PhiCache`] memoizes.
pub fn cyclotomic_poly(h: usize) -> Result<IntPoly, CyclotomicError> {
    if h == 0 {
        return Err(CyclotomicError::ZeroOrder);
    }
    let mut table: HashMap<usize, IntPoly> = HashMap::new();
    for d in divisors(h) {
        let mut acc = IntPoly::x_pow_minus_one(d);
        for e in divisors(d) {
            if e < d {
                let (q, r) = acc.div_rem_monic(&table[&e]);
                debug_assert!(r.is_zero());
                acc = q;
            }
        }
        table.insert(d, acc);
    }
    Ok(table.remove(&h).expect("h divides itself"))
}

/// `Φ_h` together with a machine-word copy of its coefficients for the fast
/// reduction path.
#[derive(Debug)]
pub struct Phi {
    pub poly: IntPoly,
    small: Option<Vec<i64>>,
}

impl Phi {
    fn new(poly: IntPoly) -> Self {
        let small = poly.coeffs().iter().map(|c| c.to_i64()).collect::<Option<Vec<_>>>();
        Phi { poly, small }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("cyclotomic polynomials are nonzero")
    }
}

/// Thread-safe memo of cyclotomic polynomials keyed by order.
#[derive(Debug, Default)]
pub struct PhiCache {
    map: RwLock<HashMap<usize, Arc<Phi>>>,
}

impl PhiCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by the zero tests.
    pub fn global() -> &'static PhiCache {
        static CACHE: OnceLock<PhiCache> = OnceLock::new();
        CACHE.get_or_init(PhiCache::new)
    }

    pub fn get(&self, h: usize) -> Arc<Phi> {
        if let Some(phi) = self.map.read().expect("phi cache poisoned").get(&h) {
            return Arc::clone(phi);
        }
        let phi = Arc::new(Phi::new(cyclotomic_poly(h).expect("order is positive")));
        self.map
            .write()
            .expect("phi cache poisoned")
            .entry(h)
            .or_insert(phi)
            .clone()
    }
}

/// Reduces `v` (degree < len) modulo the monic `phi` in place using checked
/// 128-bit arithmetic. Returns `None` on overflow.
fn reduce_small(v: &mut [i128], phi: &[i64]) -> Option<()> {
    let dd = phi.len() - 1;
    for i in (dd..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        v[i] = 0;
        for (j, &d) in phi[..dd].iter().enumerate() {
            let t = c.checked_mul(d as i128)?;
            v[i - dd + j] = v[i - dd + j].checked_sub(t)?;
        }
    }
    Some(())
}

/// True iff the element of `Z[ζ_h]` with these coefficients (length `h`) is
/// zero, i.e. the polynomial is divisible by `Φ_h`.
pub fn coeffs_vanish_i64(coeffs: &[i64]) -> bool {
    let h = coeffs.len();
    assert!(h > 0);
    let phi = PhiCache::global().get(h);
    if let Some(small) = &phi.small {
        let mut v: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        if reduce_small(&mut v, small).is_some() {
            return v[..phi.degree()].iter().all(|&c| c == 0);
        }
    }
    let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    vanish_big(&big, &phi)
}

fn vanish_big(coeffs: &[BigInt], phi: &Phi) -> bool {
    let (_, rem) = IntPoly::new(coeffs.to_vec()).div_rem_monic(&phi.poly);
    rem.is_zero()
}

/// An element `Σ_j coeffs[j]·ζ_h^j` of `Z[ζ_h]`, `h = coeffs.len()`.
///
/// The representation is not canonical: `1 + ζ_2` and `0` are different
/// vectors for the same value. Use [`CycInt::equals`] for value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "root order must be positive");
        CycInt { coeffs: vec![BigInt::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::from_root(RootExp::one(order))
    }

    pub fn from_integer(order: usize, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = n.into();
        x
    }

    pub fn from_root(r: RootExp) -> Self {
        let mut x = Self::zero(r.order());
        x.coeffs[r.exp()] = BigInt::one();
        x
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self, CyclotomicError> {
        if coeffs.is_empty() {
            return Err(CyclotomicError::ZeroOrder);
        }
        Ok(CycInt { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self, CyclotomicError> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sum of roots `Σ ζ_h^{e}` over the given exponents (taken mod `h`).
    pub fn from_exponents(order: usize, exps: impl IntoIterator<Item = i64>) -> Self {
        let mut x = Self::zero(order);
        for e in exps {
            x.add_root_assign(RootExp::new(order, e));
        }
        x
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Adds `ζ_h^e` in place. Panics on an order mismatch.
    pub fn add_root_assign(&mut self, r: RootExp) {
        assert_eq!(r.order(), self.order(), "root order mismatch");
        self.coeffs[r.exp()] += 1;
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt, CyclotomicError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &CycInt) -> Result<(), CyclotomicError> {
        check_orders(self.order(), other.order())?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt, CyclotomicError> {
        check_orders(self.order(), other.order())?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { coeffs })
    }

    pub fn neg(&self) -> CycInt {
        CycInt { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt, CyclotomicError> {
        let mut out = CycInt::zero(self.order());
        out.mul_add_assign(self, other)?;
        Ok(out)
    }

    /// `self += x * y`, the inner kernel of group-ring products.
    pub fn mul_add_assign(&mut self, x: &CycInt, y: &CycInt) -> Result<(), CyclotomicError> {
        let h = self.order();
        check_orders(h, x.order())?;
        check_orders(h, y.order())?;
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = if i + j >= h { i + j - h } else { i + j };
                self.coeffs[k] += a * b;
            }
        }
        Ok(())
    }

    /// Multiply by `ζ_h^e`: a rotation of the coefficient vector.
    pub fn mul_root(&self, r: RootExp) -> Result<CycInt, CyclotomicError> {
        let h = self.order();
        check_orders(h, r.order())?;
        let mut coeffs = vec![BigInt::zero(); h];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[(j + r.exp()) % h] = c.clone();
        }
        Ok(CycInt { coeffs })
    }

    /// Complex conjugate: the coefficient of `ζ^j` moves to `ζ^{-j}`.
    pub fn conj(&self) -> CycInt {
        let h = self.order();
        let mut coeffs = vec![BigInt::zero(); h];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[(h - j) % h] = c.clone();
        }
        CycInt { coeffs }
    }

    /// `x · conj(x)`.
    pub fn norm_sq(&self) -> CycInt {
        self.mul(&self.conj()).expect("same order")
    }

    /// Re-express in `Z[ζ_to]` via `ζ_h = ζ_to^{to/h}`.
    pub fn embed(&self, to: usize) -> Result<CycInt, CyclotomicError> {
        let h = self.order();
        if to == 0 || to % h != 0 {
            return Err(CyclotomicError::NotEmbeddable { from: h, to });
        }
        let step = to / h;
        let mut coeffs = vec![BigInt::zero(); to];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * step] = c.clone();
        }
        Ok(CycInt { coeffs })
    }

    /// All coefficients are zero. Cheaper than, and implies, [`Self::is_zero`].
    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Exact zero test: reduce modulo `Φ_h` and check the remainder.
    pub fn is_zero(&self) -> bool {
        if self.is_structurally_zero() {
            return true;
        }
        let phi = PhiCache::global().get(self.order());
        if let Some(small) = &phi.small {
            let v: Option<Vec<i128>> = self.coeffs.iter().map(|c| c.to_i128()).collect();
            if let Some(mut v) = v {
                if reduce_small(&mut v, small).is_some() {
                    return v[..phi.degree()].iter().all(|&c| c == 0);
                }
            }
        }
        vanish_big(&self.coeffs, &phi)
    }

    pub fn equals_integer(&self, n: impl Into<BigInt>) -> bool {
        let mut d = self.clone();
        d.coeffs[0] -= n.into();
        d.is_zero()
    }

    pub fn equals(&self, other: &CycInt) -> Result<bool, CyclotomicError> {
        Ok(self.sub(other)?.is_zero())
    }

    pub fn equals_root(&self, r: RootExp) -> bool {
        if r.order() != self.order() {
            return false;
        }
        let mut d = self.clone();
        d.coeffs[r.exp()] -= 1;
        d.is_zero()
    }

    /// If this value is a single root of unity `ζ_h^e`, return it.
    ///
    /// A lone `±1` coefficient is recognised structurally; anything else is
    /// tested exactly against every `ζ_h^e`.
    pub fn as_root(&self) -> Option<RootExp> {
        let h = self.order();
        let nonzero: Vec<usize> = (0..h).filter(|&j| !self.coeffs[j].is_zero()).collect();
        if let [j] = nonzero[..] {
            let c = &self.coeffs[j];
            if c.is_one() {
                return Some(RootExp::new(h, j as i64));
            }
            if (-c).is_one() && h % 2 == 0 {
                return Some(RootExp::new(h, (j + h / 2) as i64));
            }
            return None;
        }
        if nonzero.is_empty() {
            return None;
        }
        // |x| = 1 is necessary; the sum of absolute coefficients bounds the
        // modulus only from above, so test each root directly.
        (0..h).map(|e| RootExp::new(h, e as i64)).find(|&r| self.equals_root(r))
    }

    /// Largest absolute coefficient, handy for diagnostics.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Which of the two quadratic Gauss-type sums to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussVariant {
    /// `Σ_{i=0}^{n-1} ζ_n^{i²+bi}` in `Z[ζ_n]`.
    A,
    /// `Σ_{i=0}^{2n-1} ζ_{4n}^{i²+2bi}` in `Z[ζ_{4n}]`.
    B,
}

/// Quadratic Gauss-type sum. For odd `n`, variant A has norm `n` and
/// variant B has norm `2n`.
pub fn gauss_sum(n: usize, b: i64, variant: GaussVariant) -> Result<CycInt, CyclotomicError> {
    if n % 2 == 0 {
        return Err(CyclotomicError::NotOdd(n));
    }
    let (order, len, lin) = match variant {
        GaussVariant::A => (n, n, b),
        GaussVariant::B => (4 * n, 2 * n, 2 * b),
    };
    let exps = (0..len as i64).map(|i| i * i + lin * i);
    Ok(CycInt::from_exponents(order, exps))
}
