//! Exact arithmetic in GF(p^k).
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits,
//! constant term first, are the coordinates in the polynomial basis
//! `1, x, ..., x^(k-1)`. The defining modulus is the monic irreducible of
//! degree `k` with the smallest such encoding, so two fields built from the
//! same `(p, k)` are always identical.
//!
//! Multiplication goes through discrete log/antilog tables that are
//! generated from plain polynomial multiplication when the field is built.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the bound {bound}")]
    OrderTooLarge { p: u32, k: u32, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {modulus:?} is not a monic irreducible of degree {k} over GF({p})")]
    BadModulus { p: u32, k: u32, modulus: Vec<u32> },
    #[error("encoding {enc} is out of range for GF({q})")]
    OutOfRange { enc: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{0} is not a square")]
    NonSquare(Elem),
}

/// A field element, identified by its integer encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn enc(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic, degree and defining polynomial of a field.
///
/// Serializes as `{"p": .., "k": .., "modulus": [..]}` with the modulus
/// coefficients constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec", into = "RawFieldSpec")]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawFieldSpec {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

impl From<FieldSpec> for RawFieldSpec {
    fn from(s: FieldSpec) -> Self {
        RawFieldSpec { p: s.p, k: s.k, modulus: s.modulus }
    }
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = GfError;

    fn try_from(raw: RawFieldSpec) -> Result<Self, GfError> {
        FieldSpec::with_modulus(raw.p, raw.k, raw.modulus, DEFAULT_MAX_ORDER)
    }
}

impl FieldSpec {
    /// Validates `(p, k)` and picks the smallest-encoding monic irreducible.
    pub fn new(p: u32, k: u32, max_order: u64) -> Result<Self, GfError> {
        let q = check_order(p, k, max_order)?;
        let modulus = smallest_irreducible(p, k);
        Ok(FieldSpec { p, k, q, modulus })
    }

    /// Uses a caller-supplied modulus, which must be monic and irreducible.
    pub fn with_modulus(
        p: u32,
        k: u32,
        modulus: Vec<u32>,
        max_order: u64,
    ) -> Result<Self, GfError> {
        let q = check_order(p, k, max_order)?;
        let bad = || GfError::BadModulus { p, k, modulus: modulus.clone() };
        if modulus.len() != k as usize + 1
            || modulus[k as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !poly::is_irreducible(&modulus, p)
        {
            return Err(bad());
        }
        Ok(FieldSpec { p, k, q, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

fn check_order(p: u32, k: u32, max_order: u64) -> Result<u32, GfError> {
    if !is_prime(p as u64) {
        return Err(GfError::NotPrime(p));
    }
    if k == 0 {
        return Err(GfError::ZeroDegree);
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p as u64);
        if q > max_order || q > u32::MAX as u64 {
            return Err(GfError::OrderTooLarge { p, k, bound: max_order });
        }
    }
    Ok(q as u32)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, k)`.
pub fn factor_prime_power(q: u64) -> Result<(u32, u32), GfError> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut k) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 || p > u32::MAX as u64 {
        return Err(GfError::NotPrimePower(q));
    }
    Ok((p as u32, k))
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let tails = (p as u64).pow(k);
    (0..tails)
        .map(|tail| {
            let mut m = poly::digits(tail, p, k as usize);
            m.push(1);
            m
        })
        .find(|m| poly::is_irreducible(m, p))
        .expect("an irreducible of every degree exists over every prime field")
}

/// Dense polynomials over GF(p), coefficients constant term first.
pub(crate) mod poly {
    pub fn digits(mut enc: u64, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((enc % p as u64) as u32);
            enc /= p as u64;
        }
        out
    }

    pub fn encode(coeffs: &[u32], p: u32) -> u64 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder of `a` modulo a monic `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let p64 = p as u64;
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap() as u64;
            if lead != 0 {
                let shift = r.len() - m.len();
                for (i, &c) in m.iter().enumerate() {
                    let sub = lead * c as u64 % p64;
                    r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
                }
            }
            r.pop();
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            for tail in 0..(p as u64).pow(d as u32) {
                let mut divisor = digits(tail, p, d);
                divisor.push(1);
                if rem(m, &divisor, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        deg >= 1
    }
}

struct Tables {
    spec: FieldSpec,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[e]` for `e != 0`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    primitive: Elem,
    /// Smallest non-square, for odd q.
    non_square: Option<Elem>,
}

/// A finite field, cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("spec", &self.inner.spec).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    /// GF(p^k) with the default order bound.
    pub fn new(p: u32, k: u32) -> Result<Self, GfError> {
        Self::with_bound(p, k, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u32, k: u32, max_order: u64) -> Result<Self, GfError> {
        Ok(Self::from_spec(FieldSpec::new(p, k, max_order)?))
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, GfError> {
        let (p, k) = factor_prime_power(q)?;
        Self::new(p, k)
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        let (p, k, q) = (spec.p, spec.k, spec.q as usize);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = poly::mul(
                &poly::digits(a as u64, p, k as usize),
                &poly::digits(b as u64, p, k as usize),
                p,
            );
            poly::encode(&poly::rem(&prod, &spec.modulus, p), p) as u32
        };
        let slow_pow = |mut b: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let prime_factors = distinct_prime_factors(order);
        let g = (1..q as u32)
            .find(|&g| prime_factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("the multiplicative group is cyclic");

        let mut exp = Vec::with_capacity(2 * (q - 1));
        let mut log = vec![0u32; q];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, g);
        }
        for i in 0..q - 1 {
            exp.push(exp[i]);
        }

        let neg = (0..q as u64)
            .map(|e| {
                let d = poly::digits(e, p, k as usize);
                let n: Vec<u32> = d.iter().map(|&c| (p - c) % p).collect();
                poly::encode(&n, p) as u32
            })
            .collect();

        // In odd characteristic the non-squares are exactly the odd powers of g.
        let non_square = if p == 2 {
            None
        } else {
            (1..q as u32).find(|&e| log[e as usize] % 2 == 1).map(Elem)
        };

        Field {
            inner: Arc::new(Tables { spec, exp, log, neg, primitive: Elem(g), non_square }),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.spec.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.inner.spec.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.spec.q
    }

    #[inline]
    pub fn is_even(&self) -> bool {
        self.inner.spec.p == 2
    }

    /// Generator of the multiplicative group used for the log tables.
    pub fn primitive_element(&self) -> Elem {
        self.inner.primitive
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q()).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.q()).map(Elem)
    }

    pub fn elem(&self, enc: u64) -> Result<Elem, GfError> {
        if enc < self.q() as u64 {
            Ok(Elem(enc as u32))
        } else {
            Err(GfError::OutOfRange { enc, q: self.q() })
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p() as i64) as u32)
    }

    /// Binds an encoding to this field for checked arithmetic.
    pub fn element(&self, enc: u64) -> Result<FieldElement<'_>, GfError> {
        Ok(FieldElement { enc: self.elem(enc)?, field: self })
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (p, k) = (self.p(), self.k());
        if p == 2 {
            Elem(a.0 ^ b.0)
        } else if k == 1 {
            Elem((a.0 + b.0) % p)
        } else {
            let (mut x, mut y, mut place, mut out) = (a.0, b.0, 1u32, 0u32);
            while x > 0 || y > 0 {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place = place.wrapping_mul(p);
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let t = &self.inner;
        Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.inner;
        let n = self.q() - 1;
        Some(Elem(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        let inv = self.inv(b).ok_or(GfError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, mut base: Elem, mut n: u64) -> Elem {
        let mut acc = Elem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Euler's criterion for odd q; always true in characteristic 2.
    pub fn is_square(&self, e: Elem) -> bool {
        if self.is_even() || e.is_zero() {
            return true;
        }
        self.pow(e, (self.q() as u64 - 1) / 2) == Elem::ONE
    }

    /// The square root with the smaller encoding.
    pub fn sqrt(&self, e: Elem) -> Result<Elem, GfError> {
        if !self.is_square(e) {
            return Err(GfError::NonSquare(e));
        }
        if e.is_zero() {
            return Ok(e);
        }
        let q = self.q() as u64;
        let root = if self.is_even() {
            self.pow(e, q / 2)
        } else if q % 4 == 3 {
            self.pow(e, (q + 1) / 4)
        } else {
            self.tonelli_shanks(e)
        };
        debug_assert_eq!(self.mul(root, root), e);
        Ok(root.min(self.neg(root)))
    }

    fn tonelli_shanks(&self, e: Elem) -> Elem {
        let mut t = self.q() as u64 - 1;
        let mut s = 0u32;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = self.inner.non_square.expect("odd field has a non-square");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(e, t.div_ceil(2));
        let mut b = self.pow(e, t);
        while b != Elem::ONE {
            // smallest i with b^(2^i) = 1
            let mut i = 0;
            let mut b2 = b;
            while b2 != Elem::ONE {
                b2 = self.mul(b2, b2);
                i += 1;
            }
            let mut f = c;
            for _ in 0..(m - i - 1) {
                f = self.mul(f, f);
            }
            x = self.mul(x, f);
            c = self.mul(f, f);
            b = self.mul(b, c);
            m = i;
        }
        x
    }

    /// Every `e` with `e^3 = 1`, in encoding order.
    pub fn cube_roots_of_unity(&self) -> Vec<Elem> {
        let n = self.q() as u64 - 1;
        let mut roots = vec![Elem::ONE];
        if n.is_multiple_of(3) {
            let w = self.pow(self.primitive_element(), n / 3);
            roots.push(w);
            roots.push(self.mul(w, w));
        }
        roots.sort();
        roots
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bound to its field, with arithmetic that rejects operands
/// from different fields.
#[derive(Clone, Copy, Debug)]
pub struct FieldElement<'f> {
    enc: Elem,
    field: &'f Field,
}

impl<'f> FieldElement<'f> {
    pub fn enc(&self) -> Elem {
        self.enc
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn arith(self, other: FieldElement<'_>, op: ArithOp) -> Result<FieldElement<'f>, GfError> {
        if self.field != other.field {
            return Err(GfError::MixedFields);
        }
        let f = self.field;
        let (a, b) = (self.enc, other.enc);
        let enc = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement { enc, field: f })
    }

    pub fn pow(self, n: u64) -> FieldElement<'f> {
        FieldElement { enc: self.field.pow(self.enc, n), field: self.field }
    }

    pub fn is_square(self) -> bool {
        self.field.is_square(self.enc)
    }

    pub fn sqrt(self) -> Result<FieldElement<'f>, GfError> {
        Ok(FieldElement { enc: self.field.sqrt(self.enc)?, field: self.field })
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc && self.field == other.field
    }
}
