//! Exact evaluation of monomials with rational exponents.
//!
//! A [`Monomial`] is a product `prod base_i^(num_i/den_i)` of nonnegative
//! integer bases. Comparisons against integers are exact; real values are
//! bracketed as `floor(v * 2^SCALE_BITS) / 2^SCALE_BITS` and the matching
//! ceiling, using integer k-th roots only.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Fixed-point resolution of bracketed values.
pub const SCALE_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub base: u64,
    pub num: i64,
    pub den: u64,
}

impl Factor {
    pub fn new(name: &str, base: u64, num: i64, den: u64) -> Self {
        assert!(den > 0);
        let g = (num.unsigned_abs()).gcd(&den).max(1);
        Factor { name: name.to_string(), base, num: num / g as i64, den: den / g }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub factors: Vec<Factor>,
}

/// Floor and ceiling of a bracketed real value, in units of 2^-SCALE_BITS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    #[serde(with = "crate::report::biguint_str")]
    pub floor_scaled: BigUint,
    #[serde(with = "crate::report::biguint_str")]
    pub ceil_scaled: BigUint,
}

impl Bracket {
    pub fn floor(&self) -> BigRational {
        scaled_to_rational(&self.floor_scaled)
    }
    pub fn ceil(&self) -> BigRational {
        scaled_to_rational(&self.ceil_scaled)
    }
    pub fn is_exact(&self) -> bool {
        self.floor_scaled == self.ceil_scaled
    }
    pub fn approx(&self) -> f64 {
        big_to_f64(&self.floor_scaled) / 2f64.powi(SCALE_BITS as i32)
    }
}

pub fn scaled_to_rational(x: &BigUint) -> BigRational {
    BigRational::new(x.clone().into(), (BigUint::one() << SCALE_BITS).into())
}

pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // fall back to bit-length scaling for huge values
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl Monomial {
    pub fn new(factors: Vec<Factor>) -> Self {
        Monomial { factors }
    }

    pub fn single(name: &str, base: u64, num: i64, den: u64) -> Self {
        Monomial { factors: vec![Factor::new(name, base, num, den)] }
    }

    pub fn times(mut self, name: &str, base: u64, num: i64, den: u64) -> Self {
        self.factors.push(Factor::new(name, base, num, den));
        self
    }

    /// Common root degree D.
    fn root_degree(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, f| acc.lcm(&f.den))
    }

    /// value^D = num / den exactly.
    fn power_form(&self) -> (u64, BigUint, BigUint) {
        let d = self.root_degree();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for f in &self.factors {
            let e = f.num.unsigned_abs() * (d / f.den);
            let b = BigUint::from(f.base).pow(e as u32);
            if f.num >= 0 {
                num *= b;
            } else {
                den *= b;
            }
        }
        (d, num, den)
    }

    /// True when some factor has base 0 with a negative exponent.
    pub fn is_undefined(&self) -> bool {
        self.factors.iter().any(|f| f.base == 0 && f.num < 0)
    }

    /// Exact comparison of an integer against the monomial's value.
    pub fn cmp_int(&self, x: &BigUint) -> Ordering {
        let (d, num, den) = self.power_form();
        (x.pow(d as u32) * den).cmp(&num)
    }

    pub fn bracket(&self) -> Bracket {
        let (d, num, den) = self.power_form();
        if den.is_zero() {
            // division by zero base: treat as unbounded-above sentinel 0/0
            return Bracket { floor_scaled: BigUint::zero(), ceil_scaled: BigUint::zero() };
        }
        let scaled_num = num << (SCALE_BITS as u64 * d);
        let (quot, rem) = scaled_num.div_rem(&den);
        let floor = quot.nth_root(d as u32);
        let exact = rem.is_zero() && floor.pow(d as u32) == quot;
        let ceil = if exact { floor.clone() } else { &floor + 1u32 };
        Bracket { floor_scaled: floor, ceil_scaled: ceil }
    }

    pub fn approx(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| (f.base as f64).powf(f.num as f64 / f.den as f64))
            .product()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fa| {
                if fa.den == 1 && fa.num == 1 {
                    fa.name.clone()
                } else if fa.den == 1 {
                    format!("{}^{}", fa.name, fa.num)
                } else {
                    format!("{}^({}/{})", fa.name, fa.num, fa.den)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `count <= max(sqrt(g), threshold)` exactly.
pub fn within_coset_template(count: u64, subfield_order: u64, threshold: &Monomial) -> bool {
    count * count <= subfield_order || threshold.cmp_int(&BigUint::from(count)) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_root_bracket() {
        let m = Monomial::single("x", 16, 1, 2);
        let b = m.bracket();
        assert!(b.is_exact());
        assert_eq!(b.floor(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn irrational_bracket_straddles_value() {
        let m = Monomial::single("x", 2, 1, 2);
        let b = m.bracket();
        assert!(!b.is_exact());
        let lo = b.approx();
        assert!(lo <= std::f64::consts::SQRT_2);
        assert!((lo - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert_eq!(&b.ceil_scaled - &b.floor_scaled, BigUint::one());
    }

    #[test]
    fn negative_exponents() {
        // 4^(-1/2) * 9^(3/2) = 27/2
        let m = Monomial::single("q", 4, -1, 2).times("A", 9, 3, 2);
        let b = m.bracket();
        assert!(b.is_exact());
        assert_eq!(b.floor(), BigRational::new(27.into(), 2.into()));
        assert_eq!(m.cmp_int(&BigUint::from(13u32)), Ordering::Less);
        assert_eq!(m.cmp_int(&BigUint::from(14u32)), Ordering::Greater);
    }

    #[test]
    fn template_check() {
        let thr = Monomial::single("|A|", 8, 51, 52);
        assert!(within_coset_template(2, 4, &thr));
        assert!(within_coset_template(7, 2, &thr));
        assert!(!within_coset_template(8, 2, &thr));
    }
}
