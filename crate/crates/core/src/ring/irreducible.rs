//! Irreducibility certificates for monic integer polynomials by reduction
//! modulo small primes.
//!
//! A monic polynomial that stays irreducible modulo some prime is
//! irreducible over Q. The test over F_p is Rabin's criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Largest prime tried by [`find_irreducibility_prime`].
pub const MAX_CERTIFICATE_PRIME: u64 = 101;

pub fn small_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Polynomials over F_p, lowest coefficient first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FpPoly {
    c: Vec<u64>,
}

fn trim(mut c: Vec<u64>) -> FpPoly {
    while c.last() == Some(&0) {
        c.pop();
    }
    FpPoly { c }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2)
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl FpPoly {
    fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn sub(&self, o: &FpPoly, p: u64) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        trim(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).copied().unwrap_or(0);
                    let b = o.c.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    fn rem(&self, m: &FpPoly, p: u64) -> FpPoly {
        let dm = m.degree().expect("nonzero modulus");
        let inv = inv_mod(*m.c.last().unwrap(), p);
        let mut r = self.c.clone();
        while r.len() > dm {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let f = lead * inv % p;
                let off = r.len() - 1 - dm;
                for (j, &mc) in m.c.iter().enumerate() {
                    r[off + j] = (r[off + j] + p - f * mc % p) % p;
                }
            }
            r.pop();
        }
        trim(r)
    }

    fn mulmod(&self, o: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly { c: Vec::new() };
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        trim(out).rem(m, p)
    }

    fn powmod(&self, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
        let mut base = self.rem(m, p);
        let mut acc = trim(vec![1]);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, p);
            }
            base = base.mulmod(&base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(&self, o: &FpPoly, p: u64) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// `x^(p^k) mod f`.
fn frobenius_power(f: &FpPoly, k: usize, p: u64) -> FpPoly {
    let mut x = trim(vec![0, 1]);
    for _ in 0..k {
        x = x.powmod(p, f, p);
    }
    x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
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

/// Rabin's test: `f` (monic over F_p, degree `n`) is irreducible iff
/// `x^(p^n) = x mod f` and `gcd(x^(p^(n/q)) - x, f) = 1` for all primes `q | n`.
fn irreducible_mod_p(coeffs: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    let f = trim(
        coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    );
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return n == 1;
    }
    let x = trim(vec![0, 1]);
    if frobenius_power(&f, n, p).sub(&x, p) != trim(Vec::new()) {
        return false;
    }
    prime_factors(n).into_iter().all(|q| {
        let h = frobenius_power(&f, n / q, p).sub(&x, p);
        h.gcd(&f, p).degree() == Some(0)
    })
}

/// First prime `p <= MAX_CERTIFICATE_PRIME` modulo which the monic
/// polynomial stays irreducible.
pub fn find_irreducibility_prime(monic_coeffs: &[BigInt]) -> Option<u64> {
    small_primes(MAX_CERTIFICATE_PRIME)
        .into_iter()
        .find(|&p| irreducible_mod_p(monic_coeffs, p))
}
