//! Exact modular arithmetic over a prime modulus q: deterministic primality,
//! smallest primitive roots, inverses under the 1/0 = 0 convention, and dense
//! discrete-log tables.
//!
//! [`PrimeContext`] is the arithmetic substrate shared by every character and
//! sum in this crate. Its tables make character evaluation and modular
//! inversion O(1): for x ≢ 0, `dlog[x]` is the index of x in the cyclic group
//! generated by the smallest primitive root g, and `pow[j] = g^j` is the
//! inverse permutation, so `inv(x) = pow[(q-1-dlog[x]) mod (q-1)]`.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest supported modulus. The dense dlog/power/root tables are O(q), so
/// the context stays within a few hundred MB at this scale.
pub const MAX_MODULUS: u64 = 10_000_000;

/// Deterministic primality test for the full u64 range.
///
/// Trial division below 64, then Miller–Rabin with a witness set that is a
/// proven deterministic certificate for all n < 3.3·10²⁴.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let u = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, u, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// (a * b) mod m without overflow for any u64 operands.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square-and-multiply.
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Distinct prime factors of n by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// Smallest primitive root modulo the prime q.
///
/// g generates (ℤ/qℤ)* iff g^((q-1)/p) ≢ 1 for every prime p | q-1.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q < 3 {
        return Err(Error::ModulusOutOfRange(q));
    }
    let order = q - 1;
    let factors = distinct_prime_factors(order);
    'candidate: for g in 2..q {
        for &p in &factors {
            if mod_pow(g, order / p, q) == 1 {
                continue 'candidate;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime q >= 3 has a primitive root")
}

/// Dense discrete-log table: `table[x] = j` with g^j ≡ x (mod q) for
/// x in [1, q-1]; `table[0]` holds a sentinel.
///
/// Built in one O(q) walk over the powers of g. Fails if the walk revisits a
/// residue before covering all of them, which certifies that g is not a
/// primitive root.
pub fn build_dlog_table(q: u64, g: u64) -> Result<Vec<u32>> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut table = vec![u32::MAX; q as usize];
    let mut val = 1u64;
    for j in 0..q - 1 {
        if table[val as usize] != u32::MAX {
            return Err(Error::NotPrimitiveRoot { g, q });
        }
        table[val as usize] = j as u32;
        val = val * g % q;
    }
    if val != 1 {
        return Err(Error::NotPrimitiveRoot { g, q });
    }
    Ok(table)
}

/// A prime modulus with its primitive root, discrete-log and power tables,
/// and the (q-1)-th roots of unity used for character evaluation.
///
/// Immutable after construction and safe to share across threads.
pub struct PrimeContext {
    q: u64,
    g: u64,
    dlog: Vec<u32>,
    pow: Vec<u32>,
    unit_roots: Vec<Complex64>,
    additive_roots: OnceLock<Vec<Complex64>>,
}

impl PrimeContext {
    /// Build the context for a prime q >= 3, choosing the smallest primitive root.
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(q));
        }
        let g = find_primitive_root(q)?;
        let dlog = build_dlog_table(q, g)?;
        let order = (q - 1) as usize;
        let mut pow = vec![0u32; order];
        for (x, &j) in dlog.iter().enumerate().skip(1).take(order) {
            pow[j as usize] = x as u32;
        }
        let tau = std::f64::consts::TAU;
        let unit_roots = (0..order)
            .map(|j| Complex64::from_polar(1.0, tau * j as f64 / order as f64))
            .collect();
        Ok(PrimeContext {
            q,
            g,
            dlog,
            pow,
            unit_roots,
            additive_roots: OnceLock::new(),
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    /// Group order q - 1.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    /// ind(x) with g^ind(x) ≡ x (mod q); x must be in [1, q-1].
    #[inline]
    pub fn dlog(&self, x: u64) -> u32 {
        debug_assert!(x >= 1 && x < self.q);
        self.dlog[x as usize]
    }

    /// g^j mod q for j in [0, q-2].
    #[inline]
    pub fn power_of_root(&self, j: u64) -> u64 {
        self.pow[j as usize] as u64
    }

    /// Reduce a signed integer to its least non-negative residue.
    #[inline]
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    /// Multiplicative inverse with the convention 1/0 = 0.
    ///
    /// Resolved through the power table: inv(x) = g^(q-1-ind(x)).
    #[inline]
    pub fn inverse(&self, x: u64) -> u64 {
        debug_assert!(x < self.q);
        if x == 0 {
            return 0;
        }
        let j = self.dlog[x as usize] as u64;
        if j == 0 {
            1
        } else {
            self.pow[(self.q - 1 - j) as usize] as u64
        }
    }

    /// e(j/(q-1)) from the precomputed table, j already reduced mod q-1.
    #[inline]
    pub fn unit_root(&self, j: u64) -> Complex64 {
        self.unit_roots[j as usize]
    }

    /// e(v/q) for v in [0, q-1]; table built on first use.
    #[inline]
    pub fn additive_root(&self, v: u64) -> Complex64 {
        let table = self.additive_roots.get_or_init(|| {
            let tau = std::f64::consts::TAU;
            (0..self.q)
                .map(|v| Complex64::from_polar(1.0, tau * v as f64 / self.q as f64))
                .collect()
        });
        table[v as usize]
    }
}

impl std::fmt::Debug for PrimeContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeContext")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish()
    }
}

/// Primes in the half-open interval [lo, hi), by deterministic testing.
///
/// Intended for the short blocks [eʳ, e^{r+1}) of the decomposition, where
/// hi stays far below the modulus table sizes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..hi).filter(|&p| is_prime(p)).collect()
}
