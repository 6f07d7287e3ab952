//! Dense polynomials over a prime field, used to validate and pick moduli.
//!
//! Coefficients are little-endian `u64` residues; all inputs are assumed
//! reduced mod `p`. Only what irreducibility testing needs lives here.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// `a mod f` for a monic `f`.
fn rem_monic(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    while r.len() > m {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - m;
        for (i, &fc) in f.iter().enumerate() {
            let sub = lead * fc % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem_monic(&prod, f, p)
}

fn pow_poly_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem_monic(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, f, p);
        }
    }
    result
}

/// General remainder, `b` need not be monic (leading coefficient invertible mod p).
fn rem_general(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("division by zero polynomial");
    let inv_lead = pow_mod(b[db], p - 2, p);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * inv_lead % p;
        let shift = dr - db;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem_general(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility of a monic polynomial of degree m over F_p: no factor of
/// degree `i <= m/2`, i.e. `gcd(x^(p^i) - x, f) = 1` for each such `i`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = match degree(f) {
        Some(d) => d,
        None => return false,
    };
    if m == 0 || f[m] != 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut h = rem_monic(&x, f, p);
    for _ in 1..=m / 2 {
        h = pow_poly_mod(&h, p, f, p);
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &diff, p);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// First monic irreducible polynomial of degree `m` over F_p when the lower
/// coefficients are scanned in increasing base-p encoding order.
pub(crate) fn first_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    if m == 1 {
        return vec![0, 1];
    }
    let mut lower = vec![0u64; m];
    loop {
        // increment base-p counter
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < m, "no irreducible polynomial found");
        }
        if lower[0] == 0 {
            continue;
        }
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(2) && is_prime(65537) && is_prime(1009));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(prime_factors(1008), vec![2, 3, 7]);
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
        assert_eq!(prime_factors(65536), vec![2]);
    }

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 1], 2));
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^4 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // x^4 + x^2 + 1 = (x^2+x+1)^2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        // x^2 + 1 over F_3 is irreducible (-1 is a non-residue)
        assert!(is_irreducible(&[1, 0, 1], 3));
        // x^2 + 1 over F_5 splits (2^2 = -1)
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }

    /// Brute-force count of monic irreducibles of degree m over F_p
    /// against the necklace formula.
    #[test]
    fn irreducible_counts_match_necklace_formula() {
        fn count(p: u64, m: usize) -> usize {
            let total = p.pow(m as u32);
            (0..total)
                .filter(|&code| {
                    let mut f: Vec<u64> = (0..m).map(|i| code / p.pow(i as u32) % p).collect();
                    f.push(1);
                    is_irreducible(&f, p)
                })
                .count()
        }
        assert_eq!(count(2, 2), 1);
        assert_eq!(count(2, 3), 2);
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(2, 6), 9);
        assert_eq!(count(3, 2), 3);
        assert_eq!(count(3, 3), 8);
        assert_eq!(count(5, 2), 10);
    }
}
