//! Dirichlet characters modulo a prime q, realized through the primitive-root
//! index: with g the smallest primitive root, the character of index k is
//! `chi_k(g^j) = e(k*j/(q-1))` where e(θ) = exp(2πiθ), and chi_k(x) = 0 when
//! q | x. k = 0 is the principal character; k = (q-1)/2 is the quadratic
//! (Legendre) character, whose values {-1, 0, +1} are also exposed on an
//! exact integer path.
//!
//! Values are represented canonically by exponents mod (q-1) and converted to
//! complex doubles only at accumulation time, through the context's
//! roots-of-unity table.

use num_complex::Complex64;

use crate::modarith::{gcd, PrimeContext};
use crate::{Error, Result};

/// A Dirichlet character mod q = `ctx.modulus()`, defined by its exponent
/// index k in [0, q-2]. Immutable and shareable.
#[derive(Clone, Copy)]
pub struct DirichletCharacter<'a> {
    ctx: &'a PrimeContext,
    k: u64,
}

impl<'a> DirichletCharacter<'a> {
    pub fn new(ctx: &'a PrimeContext, k: u64) -> Result<Self> {
        if k > ctx.order() - 1 {
            return Err(Error::CharIndexOutOfRange {
                k,
                q: ctx.modulus(),
            });
        }
        Ok(DirichletCharacter { ctx, k })
    }

    /// The principal character mod q.
    pub fn principal(ctx: &'a PrimeContext) -> Self {
        DirichletCharacter { ctx, k: 0 }
    }

    /// The quadratic character, k = (q-1)/2; agrees with the Legendre symbol.
    pub fn legendre(ctx: &'a PrimeContext) -> Self {
        DirichletCharacter {
            ctx,
            k: ctx.order() / 2,
        }
    }

    #[inline]
    pub fn context(&self) -> &'a PrimeContext {
        self.ctx
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.k
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.ctx.modulus()
    }

    #[inline]
    pub fn is_principal(&self) -> bool {
        self.k == 0
    }

    /// True when every value lies in {-1, 0, +1}: the principal character and,
    /// for odd q, the quadratic character. These admit exact integer sums.
    #[inline]
    pub fn is_real(&self) -> bool {
        self.k == 0 || 2 * self.k == self.ctx.order()
    }

    #[inline]
    pub fn is_quadratic(&self) -> bool {
        self.k != 0 && 2 * self.k == self.ctx.order()
    }

    /// Multiplicative order of the character: (q-1)/gcd(k, q-1).
    pub fn order(&self) -> u64 {
        self.ctx.order() / gcd(self.k, self.ctx.order())
    }

    /// The conjugate character, index (q-1-k) mod (q-1).
    pub fn conjugate(&self) -> Self {
        let order = self.ctx.order();
        DirichletCharacter {
            ctx: self.ctx,
            k: (order - self.k) % order,
        }
    }

    /// Exponent of χ(x) as a fraction of the full turn: χ(x) = e(exp/(q-1)),
    /// or None when q | x. The argument must already be reduced mod q.
    #[inline]
    pub fn exponent_of(&self, x: u64) -> Option<u64> {
        debug_assert!(x < self.ctx.modulus());
        if x == 0 {
            return None;
        }
        Some(self.k * self.ctx.dlog(x) as u64 % self.ctx.order())
    }

    /// χ(x) for a residue already reduced to [0, q-1].
    #[inline]
    pub fn eval_residue(&self, x: u64) -> Complex64 {
        match self.exponent_of(x) {
            None => Complex64::ZERO,
            Some(j) => self.ctx.unit_root(j),
        }
    }

    /// χ(n) for any integer; n is reduced by the mathematical (non-negative)
    /// modulus, so negative shifts are handled exactly.
    #[inline]
    pub fn eval(&self, n: i64) -> Complex64 {
        self.eval_residue(self.ctx.reduce(n))
    }

    /// Exact integer value of a real character: -1, 0, or +1.
    ///
    /// Only meaningful when [`Self::is_real`] holds; the quadratic character
    /// has exponent 0 or (q-1)/2, i.e. value +1 or -1.
    #[inline]
    pub fn eval_residue_int(&self, x: u64) -> i64 {
        debug_assert!(self.is_real());
        match self.exponent_of(x) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        }
    }

    /// Integer path for arbitrary integers; see [`Self::eval_residue_int`].
    #[inline]
    pub fn eval_int(&self, n: i64) -> i64 {
        self.eval_residue_int(self.ctx.reduce(n))
    }

    /// Complete sum Σ_{x=0}^{q-1} χ(x): q-1 for the principal character,
    /// 0 otherwise (orthogonality). Computed by enumeration; real characters
    /// accumulate exactly.
    pub fn complete_sum(&self) -> Complex64 {
        let q = self.ctx.modulus();
        if self.is_real() {
            let mut acc = 0i64;
            for x in 0..q {
                acc += self.eval_residue_int(x);
            }
            Complex64::new(acc as f64, 0.0)
        } else {
            let mut acc = Complex64::ZERO;
            for x in 0..q {
                acc += self.eval_residue(x);
            }
            acc
        }
    }
}

impl std::fmt::Debug for DirichletCharacter<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "chi_{}[mod {}]", self.k, self.ctx.modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_criterion(n: i64, q: u64) -> i64 {
        let x = n.rem_euclid(q as i64) as u64;
        if x == 0 {
            return 0;
        }
        match crate::modarith::mod_pow(x, (q - 1) / 2, q) {
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn principal_and_zero_values() {
        let ctx = PrimeContext::new(7).unwrap();
        let chi0 = DirichletCharacter::principal(&ctx);
        assert_eq!(chi0.eval(5), Complex64::new(1.0, 0.0));
        let leg = DirichletCharacter::legendre(&ctx);
        assert_eq!(leg.eval(14), Complex64::ZERO);
        assert_eq!(leg.eval(7), Complex64::ZERO);
    }

    #[test]
    fn quadratic_matches_brute_force_squares_mod_7() {
        // squares mod 7: {1, 2, 4}
        let ctx = PrimeContext::new(7).unwrap();
        let leg = DirichletCharacter::legendre(&ctx);
        assert_eq!(leg.eval_int(3), -1);
        assert_eq!(leg.eval_int(2), 1); // 3^2 = 9 ≡ 2
        assert_eq!(leg.eval_int(1), 1);
    }

    #[test]
    fn legendre_agrees_with_euler_criterion() {
        for q in crate::modarith::primes_in_range(3, 102) {
            let ctx = PrimeContext::new(q).unwrap();
            let leg = DirichletCharacter::legendre(&ctx);
            for n in -(q as i64)..(2 * q as i64) {
                assert_eq!(leg.eval_int(n), euler_criterion(n, q), "n={n}, q={q}");
            }
        }
    }

    #[test]
    fn complete_sums() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(
            DirichletCharacter::principal(&ctx).complete_sum(),
            Complex64::new(6.0, 0.0)
        );
        assert_eq!(
            DirichletCharacter::legendre(&ctx).complete_sum(),
            Complex64::ZERO
        );
        let ctx = PrimeContext::new(101).unwrap();
        for k in 1..100 {
            let chi = DirichletCharacter::new(&ctx, k).unwrap();
            assert!(chi.complete_sum().norm() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn multiplicativity_on_random_pairs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for q in crate::modarith::primes_in_range(3, 102) {
            let ctx = PrimeContext::new(q).unwrap();
            for k in [1u64, 2, (q - 1) / 2, q - 2] {
                let chi = DirichletCharacter::new(&ctx, k % (q - 1)).unwrap();
                for _ in 0..200 {
                    let x = next() % q;
                    let y = next() % q;
                    let lhs = chi.eval_residue(x * y % q);
                    let rhs = chi.eval_residue(x) * chi.eval_residue(y);
                    assert!((lhs - rhs).norm() < 1e-12, "q={q} k={k} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn conjugate_character_conjugates_values() {
        let ctx = PrimeContext::new(101).unwrap();
        for k in [1u64, 7, 50, 99] {
            let chi = DirichletCharacter::new(&ctx, k).unwrap();
            let bar = chi.conjugate();
            for x in 0..101 {
                let lhs = bar.eval_residue(x);
                let rhs = chi.eval_residue(x).conj();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
        // conjugating the principal character is a no-op
        let chi0 = DirichletCharacter::principal(&ctx);
        assert_eq!(chi0.conjugate().index(), 0);
    }

    #[test]
    fn quadratic_integer_path_matches_complex_path() {
        for q in [7u64, 11, 101, 199] {
            let ctx = PrimeContext::new(q).unwrap();
            let leg = DirichletCharacter::legendre(&ctx);
            for x in 0..q {
                let exact = leg.eval_residue_int(x);
                assert!(matches!(exact, -1 | 0 | 1));
                let complex = leg.eval_residue(x);
                assert!((complex - Complex64::new(exact as f64, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_order() {
        let ctx = PrimeContext::new(13).unwrap();
        assert_eq!(DirichletCharacter::principal(&ctx).order(), 1);
        assert_eq!(DirichletCharacter::legendre(&ctx).order(), 2);
        assert_eq!(DirichletCharacter::new(&ctx, 4).unwrap().order(), 3);
        assert_eq!(DirichletCharacter::new(&ctx, 1).unwrap().order(), 12);
    }

    #[test]
    fn index_out_of_range_rejected() {
        let ctx = PrimeContext::new(7).unwrap();
        assert!(DirichletCharacter::new(&ctx, 6).is_err());
        assert!(DirichletCharacter::new(&ctx, 5).is_ok());
    }
}
