//! Multiplicative coefficient functions f with |f(n)| ≤ 1, evaluated in bulk
//! through a smallest-prime-factor sieve.
//!
//! A function is specified only by its values at prime powers, so
//! multiplicativity holds by construction. The four built-ins (Möbius,
//! Liouville, the constant 1, and a seeded random ±1 completely
//! multiplicative function) all take values in {-1, 0, +1} and run on an
//! exact integer path; user-defined rules may be complex-valued.

use num_complex::Complex64;
use std::sync::Arc;

use crate::{Error, Result};

/// Default sieve memory budget: covers N = 10⁸ (4 bytes per entry).
pub const DEFAULT_SIEVE_BUDGET: u64 = 100_000_000;

/// Smallest-prime-factor table for [2, N], built by a linear sieve in O(N).
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    /// Build the table up to `limit` under the default memory budget.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit > budget {
            return Err(Error::SieveBudget {
                requested: limit,
                budget,
            });
        }
        let limit = limit.max(2) as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > limit {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        Ok(SpfSieve { spf })
    }

    #[inline]
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of n, n in [2, limit].
    #[inline]
    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        debug_assert!(n >= 2 && n <= self.limit());
        self.spf[n as usize] as u64
    }

    #[inline]
    fn check_range(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit() {
            return Err(Error::OutsideSieve {
                n,
                limit: self.limit(),
            });
        }
        Ok(())
    }

    /// Prime-power factorization of n by repeated spf division.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        self.check_range(n)?;
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }
}

type IntRule = Arc<dyn Fn(u64, u32) -> i8 + Send + Sync>;
type ComplexRule = Arc<dyn Fn(u64, u32) -> Complex64 + Send + Sync>;

enum Rule {
    Mobius,
    Liouville,
    One,
    RandomPm1(u64),
    CustomInt(IntRule),
    CustomComplex(ComplexRule),
}

/// A multiplicative function defined by its prime-power values.
pub struct MultiplicativeFunction {
    name: String,
    complete: bool,
    rule: Rule,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// ±1 drawn deterministically from the pair (seed, p); no per-prime state,
/// so the value is reproducible across runs and thread schedules.
#[inline]
fn random_sign(seed: u64, p: u64) -> i8 {
    if splitmix64(splitmix64(seed) ^ p) & 1 == 0 {
        1
    } else {
        -1
    }
}

impl MultiplicativeFunction {
    /// Möbius μ: f(p) = -1, f(p^e) = 0 for e >= 2.
    pub fn mobius() -> Self {
        MultiplicativeFunction {
            name: "mobius".into(),
            complete: false,
            rule: Rule::Mobius,
        }
    }

    /// Liouville λ: f(p^e) = (-1)^e; completely multiplicative.
    pub fn liouville() -> Self {
        MultiplicativeFunction {
            name: "liouville".into(),
            complete: true,
            rule: Rule::Liouville,
        }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        MultiplicativeFunction {
            name: "one".into(),
            complete: true,
            rule: Rule::One,
        }
    }

    /// f(p) ∈ {-1, +1} from a seeded deterministic generator, extended
    /// completely multiplicatively. The same seed yields the same function.
    pub fn random_pm1(seed: u64) -> Self {
        MultiplicativeFunction {
            name: format!("random:{seed}"),
            complete: true,
            rule: Rule::RandomPm1(seed),
        }
    }

    /// Integer-valued user rule (p, e) ↦ {-1, 0, +1}.
    pub fn from_int_rule(
        name: &str,
        complete: bool,
        rule: impl Fn(u64, u32) -> i8 + Send + Sync + 'static,
    ) -> Self {
        MultiplicativeFunction {
            name: name.into(),
            complete,
            rule: Rule::CustomInt(Arc::new(rule)),
        }
    }

    /// Complex-valued user rule (p, e) ↦ value with modulus ≤ 1.
    pub fn from_complex_rule(
        name: &str,
        complete: bool,
        rule: impl Fn(u64, u32) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        MultiplicativeFunction {
            name: name.into(),
            complete,
            rule: Rule::CustomComplex(Arc::new(rule)),
        }
    }

    /// Parse a function spec string: "mobius", "liouville", "one",
    /// or "random:<seed>".
    pub fn from_name(spec: &str) -> Result<Self> {
        match spec {
            "mobius" => Ok(Self::mobius()),
            "liouville" => Ok(Self::liouville()),
            "one" => Ok(Self::one()),
            _ => {
                if let Some(seed) = spec.strip_prefix("random:") {
                    let seed: u64 = seed
                        .parse()
                        .map_err(|_| Error::UnknownFunction(spec.into()))?;
                    Ok(Self::random_pm1(seed))
                } else {
                    Err(Error::UnknownFunction(spec.into()))
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True if f(p^e) = f(p)^e for all prime powers.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True when every value lies in {-1, 0, +1}; such functions admit exact
    /// integer accumulation.
    pub fn is_integer_valued(&self) -> bool {
        !matches!(self.rule, Rule::CustomComplex(_))
    }

    /// Value at the prime power p^e on the integer path.
    #[inline]
    pub fn prime_power_int(&self, p: u64, e: u32) -> i8 {
        match &self.rule {
            Rule::Mobius => {
                if e == 1 {
                    -1
                } else {
                    0
                }
            }
            Rule::Liouville => {
                if e % 2 == 1 {
                    -1
                } else {
                    1
                }
            }
            Rule::One => 1,
            Rule::RandomPm1(seed) => {
                if e % 2 == 1 {
                    random_sign(*seed, p)
                } else {
                    1
                }
            }
            Rule::CustomInt(rule) => rule(p, e),
            Rule::CustomComplex(_) => panic!("integer path requested on a complex-valued function"),
        }
    }

    /// Value at the prime power p^e.
    #[inline]
    pub fn prime_power(&self, p: u64, e: u32) -> Complex64 {
        match &self.rule {
            Rule::CustomComplex(rule) => rule(p, e),
            _ => Complex64::new(self.prime_power_int(p, e) as f64, 0.0),
        }
    }

    /// f(n) on the exact integer path; requires an integer-valued function
    /// and 1 <= n <= sieve limit. f(1) = 1 (empty product).
    pub fn eval_int(&self, n: u64, sieve: &SpfSieve) -> Result<i64> {
        assert!(
            self.is_integer_valued(),
            "integer path requested on a complex-valued function"
        );
        sieve.check_range(n)?;
        let mut acc = 1i64;
        let mut m = n;
        while m > 1 {
            let p = sieve.spf[m as usize] as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            let v = self.prime_power_int(p, e) as i64;
            if v == 0 {
                return Ok(0);
            }
            acc *= v;
        }
        Ok(acc)
    }

    /// f(n) as a complex value; 1 <= n <= sieve limit.
    pub fn eval(&self, n: u64, sieve: &SpfSieve) -> Result<Complex64> {
        if self.is_integer_valued() {
            return Ok(Complex64::new(self.eval_int(n, sieve)? as f64, 0.0));
        }
        sieve.check_range(n)?;
        let mut acc = Complex64::new(1.0, 0.0);
        let mut m = n;
        while m > 1 {
            let p = sieve.spf[m as usize] as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            acc *= self.prime_power(p, e);
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for MultiplicativeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f[{}]", self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division Möbius, independent of the sieve.
    fn mobius_oracle(mut n: u64) -> i64 {
        let mut m = 1i64;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }

    #[test]
    fn spf_examples() {
        let sieve = SpfSieve::new(100).unwrap();
        assert_eq!(sieve.smallest_prime_factor(9), 3);
        assert_eq!(sieve.smallest_prime_factor(10), 2);
        assert_eq!(sieve.smallest_prime_factor(91), 7);
        assert_eq!(sieve.factorize(91).unwrap(), vec![(7, 1), (13, 1)]);
        assert_eq!(sieve.factorize(1).unwrap(), vec![]);
    }

    #[test]
    fn spf_is_prime_divisor_everywhere() {
        let sieve = SpfSieve::new(10_000).unwrap();
        for n in 2..=10_000u64 {
            let p = sieve.smallest_prime_factor(n);
            assert_eq!(n % p, 0, "spf must divide n={n}");
            assert!(crate::modarith::is_prime(p), "spf must be prime at n={n}");
            // nothing smaller divides n
            for d in 2..p {
                assert_ne!(n % d, 0, "n={n} has a divisor {d} below spf {p}");
            }
        }
    }

    #[test]
    fn sieve_budget_enforced() {
        assert!(matches!(
            SpfSieve::with_budget(1000, 100),
            Err(Error::SieveBudget { .. })
        ));
    }

    #[test]
    fn mobius_examples_and_oracle_agreement() {
        let sieve = SpfSieve::new(10_000).unwrap();
        let mu = MultiplicativeFunction::mobius();
        assert_eq!(mu.eval_int(1, &sieve).unwrap(), 1);
        assert_eq!(mu.eval_int(12, &sieve).unwrap(), 0);
        assert_eq!(mu.eval_int(30, &sieve).unwrap(), -1);
        assert_eq!(mu.eval_int(4, &sieve).unwrap(), 0);
        for n in 1..=10_000u64 {
            assert_eq!(mu.eval_int(n, &sieve).unwrap(), mobius_oracle(n), "n={n}");
        }
    }

    #[test]
    fn mertens_10k_matches_frozen_oracle_value() {
        // M(10^4) = -23, computed by an independent trial-division oracle.
        let sieve = SpfSieve::new(10_000).unwrap();
        let mu = MultiplicativeFunction::mobius();
        let m: i64 = (1..=10_000u64)
            .map(|n| mu.eval_int(n, &sieve).unwrap())
            .sum();
        assert_eq!(m, -23);
    }

    #[test]
    fn liouville_and_one() {
        let sieve = SpfSieve::new(100).unwrap();
        let lam = MultiplicativeFunction::liouville();
        assert_eq!(lam.eval_int(8, &sieve).unwrap(), -1); // (-1)^3
        assert_eq!(lam.eval_int(12, &sieve).unwrap(), -1); // Omega = 3
        assert_eq!(lam.eval_int(36, &sieve).unwrap(), 1);
        let one = MultiplicativeFunction::one();
        for n in 1..=100 {
            assert_eq!(one.eval_int(n, &sieve).unwrap(), 1);
        }
    }

    #[test]
    fn random_pm1_is_deterministic_and_completely_multiplicative() {
        let sieve = SpfSieve::new(1000).unwrap();
        let f1 = MultiplicativeFunction::random_pm1(1);
        let f1_again = MultiplicativeFunction::random_pm1(1);
        let f2 = MultiplicativeFunction::random_pm1(2);
        let mut differs = false;
        for n in 1..=1000u64 {
            let v = f1.eval_int(n, &sieve).unwrap();
            assert!(v == 1 || v == -1);
            assert_eq!(v, f1_again.eval_int(n, &sieve).unwrap());
            if v != f2.eval_int(n, &sieve).unwrap() {
                differs = true;
            }
        }
        assert!(differs, "different seeds should give different functions");
        // f(6) = f(2) f(3)
        let f6 = f1.eval_int(6, &sieve).unwrap();
        let f2v = f1.eval_int(2, &sieve).unwrap();
        let f3v = f1.eval_int(3, &sieve).unwrap();
        assert_eq!(f6, f2v * f3v);
        // complete multiplicativity: f(p^e) = f(p)^e
        assert_eq!(
            f1.eval_int(8, &sieve).unwrap(),
            f1.eval_int(2, &sieve).unwrap().pow(3)
        );
    }

    #[test]
    fn multiplicativity_on_random_coprime_pairs() {
        let sieve = SpfSieve::new(1_000_000).unwrap();
        let fns = [
            MultiplicativeFunction::mobius(),
            MultiplicativeFunction::liouville(),
            MultiplicativeFunction::one(),
            MultiplicativeFunction::random_pm1(1),
        ];
        let mut state = 0xdead_beef_cafe_f00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut tested = 0;
        while tested < 1000 {
            let m = next() % 999 + 2;
            let n = next() % 999 + 2;
            if crate::modarith::gcd(m, n) != 1 {
                continue;
            }
            tested += 1;
            for f in &fns {
                let lhs = f.eval_int(m * n, &sieve).unwrap();
                let rhs = f.eval_int(m, &sieve).unwrap() * f.eval_int(n, &sieve).unwrap();
                assert_eq!(lhs, rhs, "f={:?} m={m} n={n}", f);
            }
        }
    }

    #[test]
    fn from_name_parses_builtins() {
        assert_eq!(
            MultiplicativeFunction::from_name("mobius").unwrap().name(),
            "mobius"
        );
        assert_eq!(
            MultiplicativeFunction::from_name("random:42")
                .unwrap()
                .name(),
            "random:42"
        );
        assert!(MultiplicativeFunction::from_name("totient").is_err());
        assert!(MultiplicativeFunction::from_name("random:x").is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let sieve = SpfSieve::new(100).unwrap();
        let mu = MultiplicativeFunction::mobius();
        assert!(mu.eval_int(0, &sieve).is_err());
        assert!(mu.eval_int(101, &sieve).is_err());
    }

    #[test]
    fn complex_rule_path() {
        // f(p^e) = i^e, completely multiplicative with |f| = 1
        let sieve = SpfSieve::new(100).unwrap();
        let f = MultiplicativeFunction::from_complex_rule("i_omega", true, |_, e| {
            Complex64::i().powu(e)
        });
        assert!(!f.is_integer_valued());
        let v = f.eval(6, &sieve).unwrap(); // i * i = -1
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((f.eval(1, &sieve).unwrap() - Complex64::new(1.0, 0.0)).norm() == 0.0);
    }
}
