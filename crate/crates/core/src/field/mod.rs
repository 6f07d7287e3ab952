//! Exact arithmetic in F_q, q = p^m.
//!
//! Elements are dense coefficient vectors over F_p, addressed by their
//! canonical encoding `enc = sum coeffs[i] * p^i` (a `u32` in `0..q`).
//! A [`Field`] is a cheap, shareable handle; all arithmetic goes through it.
//!
//! For `q <= 2^20` the handle lazily builds lookup tables (a log/antilog
//! pair for extension fields, an inverse table for prime fields) that
//! accelerate multiplication and inversion. The table-free routines stay
//! available as [`Field::mul_reference`] and are what the tables are
//! built from.

mod poly;
mod subfield;

pub use subfield::{coset_intersection, max_coset_intersection, max_linear_coset_intersection, CosetScan, SubfieldDesc, SubfieldMax};

pub(crate) use poly::{is_prime, prime_factors};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;
/// Largest order for which whole-field enumeration is allowed.
pub const ENUM_CAP: u64 = 1 << 20;

/// Field description: characteristic, degree and monic irreducible modulus
/// (little-endian, `m + 1` coefficients, leading coefficient 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates primality, degree, order cap and irreducibility.
    pub fn new(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("m must be positive".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER);
        if q.is_none() {
            return Err(Error::InvalidField(format!("q = {p}^{m} exceeds 2^31")));
        }
        if modulus.len() != m as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic with {} coefficients",
                m + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient not reduced mod p".into()));
        }
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !poly::is_irreducible(&f, p as u64) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(FieldSpec { p, m, modulus })
    }

    /// The fixed modulus used when none is supplied: the first monic
    /// irreducible of degree `m` in base-p order of its lower coefficients.
    pub fn with_default_modulus(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if m == 0 || (p as u64).checked_pow(m).map_or(true, |q| q > MAX_ORDER) {
            return Err(Error::InvalidField(format!("unsupported order {p}^{m}")));
        }
        let f = poly::first_irreducible(p as u64, m);
        Ok(FieldSpec { p, m, modulus: f.into_iter().map(|c| c as u32).collect() })
    }

    /// Splits `q = p^m` and uses the default modulus.
    pub fn from_order(q: u64) -> Result<Self> {
        if q < 2 || q > MAX_ORDER {
            return Err(Error::InvalidField(format!("unsupported order {q}")));
        }
        let primes = prime_factors(q);
        if primes.len() != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        let p = primes[0];
        let mut m = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            m += 1;
        }
        Self::with_default_modulus(p as u32, m)
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

enum Accel {
    None,
    PrimeInverse(Vec<u32>),
    Log(LogTables),
}

struct Inner {
    spec: FieldSpec,
    p: u32,
    m: u32,
    q: u32,
    /// p^i for i in 0..=m (as u64, p^m may equal 2^31)
    pow_p: Vec<u64>,
    /// x^m = -sum f_i x^i; stored as (p - f_i) mod p
    neg_low: Vec<u64>,
    /// modulus as a bit mask (p = 2 only)
    mod_bits: u64,
    accel: OnceLock<Accel>,
    primitive: OnceLock<u32>,
}

/// Shared handle to a finite field.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({:?})", self.inner.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.spec.fmt(f)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        // re-validate: specs may come from deserialization
        let spec = FieldSpec::new(spec.p, spec.m, spec.modulus)?;
        let p = spec.p;
        let m = spec.m;
        let pow_p: Vec<u64> = (0..=m).map(|i| (p as u64).pow(i)).collect();
        let q = pow_p[m as usize] as u32;
        let neg_low = spec.modulus[..m as usize]
            .iter()
            .map(|&c| (p as u64 - c as u64) % p as u64)
            .collect();
        let mod_bits = if p == 2 {
            spec.modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        Ok(Field {
            inner: Arc::new(Inner {
                spec,
                p,
                m,
                q,
                pow_p,
                neg_low,
                mod_bits,
                accel: OnceLock::new(),
                primitive: OnceLock::new(),
            }),
        })
    }

    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(FieldSpec::new(p, 1, vec![0, 1])?)
    }

    /// F_{p^m} with the default modulus.
    pub fn with_degree(p: u32, m: u32) -> Result<Field> {
        Field::new(FieldSpec::with_default_modulus(p, m)?)
    }

    /// F_q with the default modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        Field::new(FieldSpec::from_order(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }
    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn m(&self) -> u32 {
        self.inner.m
    }
    /// Field order as u64 (q may equal 2^31).
    pub fn q(&self) -> u64 {
        self.inner.pow_p[self.inner.m as usize]
    }
    pub fn zero(&self) -> u32 {
        0
    }
    pub fn one(&self) -> u32 {
        1
    }

    pub fn is_element(&self, enc: u64) -> bool {
        enc < self.q()
    }

    pub fn check(&self, enc: u64) -> Result<u32> {
        if self.is_element(enc) {
            Ok(enc as u32)
        } else {
            Err(Error::ElementOutOfRange { enc, q: self.q() })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.inner.p as i64) as u32
    }

    pub fn decode(&self, x: u32) -> Vec<u32> {
        let p = self.inner.p;
        let mut x = x;
        (0..self.inner.m)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn encode(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.inner.m as usize {
            return Err(Error::InvalidParams("too many coefficients".into()));
        }
        let mut enc = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.inner.p {
                return Err(Error::InvalidParams(format!("coefficient {c} not reduced")));
            }
            enc += c as u64 * self.inner.pow_p[i];
        }
        Ok(enc as u32)
    }

    /// Whole-field enumeration, capped at [`ENUM_CAP`].
    pub fn elements(&self) -> Result<std::ops::Range<u32>> {
        if self.q() > ENUM_CAP {
            return Err(Error::EnumerationTooLarge(self.q()));
        }
        Ok(0..self.q() as u32)
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let inner = &*self.inner;
        if inner.m == 1 {
            let s = x as u64 + y as u64;
            let p = inner.p as u64;
            (if s >= p { s - p } else { s }) as u32
        } else if inner.p == 2 {
            x ^ y
        } else {
            let p = inner.p;
            let (mut a, mut b) = (x, y);
            let mut r = 0u64;
            for i in 0..inner.m as usize {
                let s = (a % p + b % p) % p;
                r += s as u64 * inner.pow_p[i];
                a /= p;
                b /= p;
            }
            r as u32
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        let inner = &*self.inner;
        if inner.m == 1 {
            if x == 0 {
                0
            } else {
                inner.p - x
            }
        } else if inner.p == 2 {
            x
        } else {
            let p = inner.p;
            let mut a = x;
            let mut r = 0u64;
            for i in 0..inner.m as usize {
                let c = a % p;
                r += ((p - c) % p) as u64 * inner.pow_p[i];
                a /= p;
            }
            r as u32
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        let inner = &*self.inner;
        if inner.m == 1 {
            if x >= y {
                x - y
            } else {
                (x as u64 + inner.p as u64 - y as u64) as u32
            }
        } else if inner.p == 2 {
            x ^ y
        } else {
            self.add(x, self.neg(y))
        }
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let inner = &*self.inner;
        if inner.m == 1 {
            return (x as u64 * y as u64 % inner.p as u64) as u32;
        }
        if x == 0 || y == 0 {
            return 0;
        }
        match self.accel() {
            Accel::Log(t) => {
                let n = (inner.q - 1) as usize;
                let s = t.log[x as usize] as usize + t.log[y as usize] as usize;
                t.exp[if s >= n { s - n } else { s }]
            }
            _ => self.mul_reference(x, y),
        }
    }

    /// Multiply-and-reduce in F_p[t]/(f) with no lookup tables.
    pub fn mul_reference(&self, x: u32, y: u32) -> u32 {
        let inner = &*self.inner;
        let m = inner.m as usize;
        if m == 1 {
            return (x as u64 * y as u64 % inner.p as u64) as u32;
        }
        if inner.p == 2 {
            let mut acc = 0u64;
            let (a, mut b) = (x as u64, y as u64);
            let mut shift = 0;
            while b != 0 {
                if b & 1 == 1 {
                    acc ^= a << shift;
                }
                b >>= 1;
                shift += 1;
            }
            for bit in (m..2 * m).rev() {
                if acc >> bit & 1 == 1 {
                    acc ^= inner.mod_bits << (bit - m);
                }
            }
            return acc as u32;
        }
        let p = inner.p as u64;
        let a: Vec<u64> = self.decode(x).into_iter().map(u64::from).collect();
        let b: Vec<u64> = self.decode(y).into_iter().map(u64::from).collect();
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                prod[k - m + i] = (prod[k - m + i] + c * inner.neg_low[i]) % p;
            }
        }
        prod[..m].iter().enumerate().map(|(i, &c)| c * inner.pow_p[i]).sum::<u64>() as u32
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        r
    }

    fn pow_reference(&self, x: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_reference(r, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_reference(b, b);
            }
        }
        r
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(x))
    }

    /// Inverse of a known nonzero element.
    #[inline]
    pub fn inv_nonzero(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        match self.accel() {
            Accel::PrimeInverse(t) => t[x as usize],
            Accel::Log(t) => {
                let n = self.inner.q - 1;
                let l = t.log[x as usize];
                t.exp[((n - l) % n) as usize]
            }
            Accel::None => self.pow(x, self.q() - 2),
        }
    }

    pub fn div(&self, x: u32, y: u32) -> Result<u32> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Smallest-encoding generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        *self.inner.primitive.get_or_init(|| {
            let n = self.q() - 1;
            if n == 1 {
                return 1;
            }
            let factors = prime_factors(n);
            (2..self.q() as u32)
                .find(|&g| factors.iter().all(|&r| self.pow_reference(g, n / r) != 1))
                .expect("multiplicative group is cyclic")
        })
    }

    /// `x^(p^d) == x`, i.e. membership in the subfield of order p^d.
    pub fn in_subfield(&self, x: u32, d: u32) -> bool {
        self.pow(x, (self.inner.p as u64).pow(d)) == x
    }

    fn accel(&self) -> &Accel {
        self.inner.accel.get_or_init(|| {
            let q = self.q();
            if q > ENUM_CAP || q < 3 {
                return Accel::None;
            }
            if self.inner.m == 1 {
                let p = q as u64;
                let mut inv = vec![0u32; q as usize];
                inv[1] = 1;
                for i in 2..p {
                    inv[i as usize] = ((p - p / i) * inv[(p % i) as usize] as u64 % p) as u32;
                }
                Accel::PrimeInverse(inv)
            } else {
                let g = self.primitive_element();
                let n = (q - 1) as usize;
                let mut exp = vec![0u32; n];
                let mut log = vec![0u32; q as usize];
                let mut cur = 1u32;
                for (i, slot) in exp.iter_mut().enumerate() {
                    *slot = cur;
                    log[cur as usize] = i as u32;
                    cur = self.mul_reference(cur, g);
                }
                Accel::Log(LogTables { exp, log })
            }
        })
    }

    /// Degrees d | m, ascending.
    pub fn subfield_degrees(&self) -> Vec<u32> {
        (1..=self.inner.m).filter(|d| self.inner.m % d == 0).collect()
    }

    pub fn element(&self, enc: u64) -> Result<FieldElement> {
        Ok(FieldElement { field: self.clone(), enc: self.check(enc)? })
    }
}

/// An element tagged with its field; arithmetic checks field agreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    enc: u32,
}

impl FieldElement {
    pub fn enc(&self) -> u32 {
        self.enc
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.decode(self.enc)
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, enc: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), enc }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.enc, other.enc)))
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.enc, other.enc)))
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.enc, other.enc)))
    }
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.enc, other.enc)?))
    }
    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.enc))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.enc)?))
    }
    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.enc, e))
    }
}
