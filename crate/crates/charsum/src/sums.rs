//! Evaluators for the concrete character sums: the shifted sums
//! Σ_{n≤N} f(n)χ(n+a) and Σ_{n≤N} f(n)χ(n+a₁)···χ(n+a_t), complete sums over
//! F_q with character products and an additive twist e(f(x)/q), and the
//! incomplete rational sums Σ χ((x+s)/(x+t)) and their t-fold analogues.
//!
//! Conventions, applied uniformly:
//! - 1/0 = 0, so any term whose denominator vanishes mod q contributes χ(0) = 0.
//! - Ranges Σ_{X<y≤Z} use strict/inclusive endpoints exactly as written.
//! - Conditions p ≤ N/y are evaluated as the exact integer test p·y ≤ N.
//! - Complex accumulation is chunked with a pairwise reduction in fixed index
//!   order, so results are independent of the worker count; sums of
//!   integer-valued terms (real character × integer-valued f) accumulate
//!   exactly in i64 and are flagged `exact`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::modarith::PrimeContext;
use crate::multfunc::{MultiplicativeFunction, SpfSieve};
use crate::{Error, Result};

/// The value of one evaluated sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumValue {
    /// Complex value; on the exact path the imaginary part is identically 0.
    pub value: Complex64,
    /// Number of index points in the summation range.
    pub n_terms: u64,
    /// True when the sum was accumulated on the exact integer path.
    pub exact: bool,
}

impl SumValue {
    fn from_int(v: i64, n_terms: u64) -> Self {
        SumValue {
            value: Complex64::new(v as f64, 0.0),
            n_terms,
            exact: true,
        }
    }

    fn from_complex(value: Complex64, n_terms: u64) -> Self {
        SumValue {
            value,
            n_terms,
            exact: false,
        }
    }

    /// |value|.
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// The integer value when the sum ran on the exact path.
    pub fn int_value(&self) -> Option<i64> {
        self.exact.then_some(self.value.re as i64)
    }
}

// ---------------------------------------------------------------------------
// Deterministic chunked accumulation
// ---------------------------------------------------------------------------

/// Fixed chunk width for parallel range sums. Partials are reduced pairwise
/// in index order, so the result is bit-identical for any worker count.
const CHUNK: u64 = 1 << 14;

fn pairwise_reduce(parts: &[Complex64]) -> Complex64 {
    match parts.len() {
        0 => Complex64::ZERO,
        1 => parts[0],
        n => {
            let mid = n / 2;
            pairwise_reduce(&parts[..mid]) + pairwise_reduce(&parts[mid..])
        }
    }
}

/// Σ_{i=lo}^{hi} term(i) on the complex path.
pub(crate) fn chunked_sum_complex<F>(lo: u64, hi: u64, term: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    if hi < lo {
        return Complex64::ZERO;
    }
    if hi - lo < CHUNK {
        let mut acc = Complex64::ZERO;
        for i in lo..=hi {
            acc += term(i);
        }
        return acc;
    }
    let n_chunks = (hi - lo) / CHUNK + 1;
    let parts: Vec<Complex64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + (CHUNK - 1)).min(hi);
            let mut acc = Complex64::ZERO;
            for i in a..=b {
                acc += term(i);
            }
            acc
        })
        .collect();
    pairwise_reduce(&parts)
}

/// Σ_{i=lo}^{hi} term(i) on the exact integer path.
pub(crate) fn chunked_sum_int<F>(lo: u64, hi: u64, term: F) -> i64
where
    F: Fn(u64) -> i64 + Sync,
{
    if hi < lo {
        return 0;
    }
    if hi - lo < CHUNK {
        let mut acc = 0i64;
        for i in lo..=hi {
            acc += term(i);
        }
        return acc;
    }
    let n_chunks = (hi - lo) / CHUNK + 1;
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + (CHUNK - 1)).min(hi);
            let mut acc = 0i64;
            for i in a..=b {
                acc += term(i);
            }
            acc
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Shift validation
// ---------------------------------------------------------------------------

/// Reduce shifts mod q and require pairwise distinctness.
pub(crate) fn reduce_distinct_shifts(shifts: &[i64], q: u64) -> Result<Vec<u64>> {
    let reduced: Vec<u64> = shifts
        .iter()
        .map(|&a| a.rem_euclid(q as i64) as u64)
        .collect();
    for (i, &r) in reduced.iter().enumerate() {
        if reduced[..i].contains(&r) {
            return Err(Error::DuplicateShift { a: shifts[i], q });
        }
    }
    Ok(reduced)
}

/// A validated shift list for the main sums.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftConfig {
    shifts: Vec<i64>,
    n: u64,
}

impl ShiftConfig {
    /// t = 1 with gcd(a, q) = 1, the single-shift hypothesis.
    pub fn single(a: i64, n: u64, q: u64) -> Result<Self> {
        if a.rem_euclid(q as i64) == 0 {
            return Err(Error::ShiftNotCoprime { a, q });
        }
        Ok(ShiftConfig { shifts: vec![a], n })
    }

    /// t >= 2 with shifts pairwise distinct mod q, the product-sum hypothesis.
    pub fn multi(shifts: &[i64], n: u64, q: u64) -> Result<Self> {
        if shifts.len() < 2 {
            return Err(Error::TooFewShifts {
                need: 2,
                got: shifts.len(),
            });
        }
        reduce_distinct_shifts(shifts, q)?;
        Ok(ShiftConfig {
            shifts: shifts.to_vec(),
            n,
        })
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn t(&self) -> usize {
        self.shifts.len()
    }
}

// ---------------------------------------------------------------------------
// Main shifted sums
// ---------------------------------------------------------------------------

/// Σ_{n≤N} f(n)χ(n+a) in one pass over n, sieve-backed f and table-backed χ.
pub fn shifted_sum(
    f: &MultiplicativeFunction,
    chi: &DirichletCharacter,
    a: i64,
    n: u64,
    sieve: &SpfSieve,
) -> Result<SumValue> {
    if n == 0 || n > sieve.limit() {
        return Err(Error::OutsideSieve {
            n,
            limit: sieve.limit(),
        });
    }
    let q = chi.modulus();
    let a_red = a.rem_euclid(q as i64);
    if f.is_integer_valued() && chi.is_real() {
        let acc = chunked_sum_int(1, n, |i| {
            let fv = f.eval_int(i, sieve).expect("range checked") ;
            if fv == 0 {
                0
            } else {
                fv * chi.eval_int(i as i64 + a_red)
            }
        });
        Ok(SumValue::from_int(acc, n))
    } else if f.is_integer_valued() {
        let acc = chunked_sum_complex(1, n, |i| {
            let fv = f.eval_int(i, sieve).expect("range checked");
            if fv == 0 {
                Complex64::ZERO
            } else {
                chi.eval(i as i64 + a_red).scale(fv as f64)
            }
        });
        Ok(SumValue::from_complex(acc, n))
    } else {
        let acc = chunked_sum_complex(1, n, |i| {
            f.eval(i, sieve).expect("range checked") * chi.eval(i as i64 + a_red)
        });
        Ok(SumValue::from_complex(acc, n))
    }
}

/// Σ_{n≤N} f(n)χ(n+a₁)···χ(n+a_t) for t ≥ 2 pairwise distinct shifts.
///
/// The character product collapses to one evaluation at Π(n+a_i) mod q,
/// which is valid by complete multiplicativity of χ.
pub fn shifted_product_sum(
    f: &MultiplicativeFunction,
    chi: &DirichletCharacter,
    shifts: &[i64],
    n: u64,
    sieve: &SpfSieve,
) -> Result<SumValue> {
    if shifts.len() < 2 {
        return Err(Error::TooFewShifts {
            need: 2,
            got: shifts.len(),
        });
    }
    let q = chi.modulus();
    let reduced = reduce_distinct_shifts(shifts, q)?;
    if n == 0 || n > sieve.limit() {
        return Err(Error::OutsideSieve {
            n,
            limit: sieve.limit(),
        });
    }
    let product_mod_q = |i: u64| -> u64 {
        let base = i % q;
        let mut prod = 1u64;
        for &r in &reduced {
            let factor = (base + r) % q;
            if factor == 0 {
                return 0;
            }
            prod = prod * factor % q;
        }
        prod
    };
    if f.is_integer_valued() && chi.is_real() {
        let acc = chunked_sum_int(1, n, |i| {
            let fv = f.eval_int(i, sieve).expect("range checked");
            if fv == 0 {
                0
            } else {
                fv * chi.eval_residue_int(product_mod_q(i))
            }
        });
        Ok(SumValue::from_int(acc, n))
    } else if f.is_integer_valued() {
        let acc = chunked_sum_complex(1, n, |i| {
            let fv = f.eval_int(i, sieve).expect("range checked");
            if fv == 0 {
                Complex64::ZERO
            } else {
                chi.eval_residue(product_mod_q(i)).scale(fv as f64)
            }
        });
        Ok(SumValue::from_complex(acc, n))
    } else {
        let acc = chunked_sum_complex(1, n, |i| {
            f.eval(i, sieve).expect("range checked") * chi.eval_residue(product_mod_q(i))
        });
        Ok(SumValue::from_complex(acc, n))
    }
}

// ---------------------------------------------------------------------------
// Complete sums over F_q
// ---------------------------------------------------------------------------

/// Degree of the polynomial after reduction mod q: the highest index with a
/// nonzero coefficient, or 0 for constants and the zero polynomial.
pub fn reduced_degree(poly: &[u64], q: u64) -> usize {
    poly.iter()
        .rposition(|&c| c % q != 0)
        .unwrap_or(0)
}

/// Σ_{x∈F_q} χ₁(x+a₁)···χ_r(x+a_r) e(f(x)/q) by full enumeration, with
/// f given by its coefficients (ascending) over F_q.
///
/// The evaluator accepts any character list, including all-principal, where
/// the zero-polynomial sum counts the x avoiding all shifts; the Weil bound
/// (r+d)√q applies — and is checked by callers — only when at least one
/// character is non-principal.
pub fn weil_complete_sum(
    chis: &[DirichletCharacter],
    shifts: &[i64],
    poly: &[u64],
    ctx: &PrimeContext,
) -> Result<SumValue> {
    if chis.is_empty() {
        return Err(Error::EmptyCharacterList);
    }
    for chi in chis {
        if chi.modulus() != ctx.modulus() {
            return Err(Error::ContextMismatch(chi.modulus(), ctx.modulus()));
        }
    }
    let q = ctx.modulus();
    if shifts.len() != chis.len() {
        return Err(Error::TooFewShifts {
            need: chis.len(),
            got: shifts.len(),
        });
    }
    let reduced = reduce_distinct_shifts(shifts, q)?;
    let poly_red: Vec<u64> = poly.iter().map(|&c| c % q).collect();
    let zero_poly = poly_red.iter().all(|&c| c == 0);
    let order = ctx.order();

    // character product at x as a shared exponent of e(1/(q-1)), or None if
    // any factor vanishes
    let product_exponent = |x: u64| -> Option<u64> {
        let mut exp = 0u64;
        for (chi, &r) in chis.iter().zip(&reduced) {
            let xa = (x + r) % q;
            if xa == 0 {
                return None;
            }
            exp = (exp + chi.index() * ctx.dlog(xa) as u64) % order;
        }
        Some(exp)
    };

    if zero_poly && chis.iter().all(|c| c.is_real()) {
        let mut acc = 0i64;
        for x in 0..q {
            acc += match product_exponent(x) {
                None => 0,
                Some(0) => 1,
                Some(_) => -1,
            };
        }
        return Ok(SumValue::from_int(acc, q));
    }

    let horner = |x: u64| -> u64 {
        let mut v = 0u64;
        for &c in poly_red.iter().rev() {
            v = (v * x + c) % q;
        }
        v
    };
    let mut acc = Complex64::ZERO;
    for x in 0..q {
        let Some(exp) = product_exponent(x) else {
            continue;
        };
        let mut term = ctx.unit_root(exp);
        if !zero_poly {
            term *= ctx.additive_root(horner(x));
        }
        acc += term;
    }
    Ok(SumValue::from_complex(acc, q))
}

// ---------------------------------------------------------------------------
// Incomplete rational sums
// ---------------------------------------------------------------------------

/// Σ_{x=1}^{h} χ((x+s)/(x+t)) with 1/0 = 0, for distinct s, t in F_q and
/// non-principal χ. The term at x ≡ -t contributes 0.
pub fn rational_char_sum(
    chi: &DirichletCharacter,
    s: i64,
    t: i64,
    h: u64,
) -> Result<SumValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let ctx = chi.context();
    let q = ctx.modulus();
    let s_red = s.rem_euclid(q as i64) as u64;
    let t_red = t.rem_euclid(q as i64) as u64;
    if s_red == t_red {
        return Err(Error::CoincidentResidues { s, t, q });
    }
    if h == 0 || h > q {
        return Err(Error::RangeOutOfBounds { h, q });
    }
    let ratio = |x: u64| -> u64 {
        let num = (x + s_red) % q;
        let den = (x + t_red) % q;
        num * ctx.inverse(den) % q
    };
    if chi.is_real() {
        let acc = chunked_sum_int(1, h, |x| chi.eval_residue_int(ratio(x)));
        Ok(SumValue::from_int(acc, h))
    } else {
        let acc = chunked_sum_complex(1, h, |x| chi.eval_residue(ratio(x)));
        Ok(SumValue::from_complex(acc, h))
    }
}

fn validate_prime_pair(p1: u64, p2: u64, q: u64) -> Result<()> {
    if p1 % q == 0 {
        return Err(Error::PrimeDividesModulus { p: p1, q });
    }
    if p2 % q == 0 {
        return Err(Error::PrimeDividesModulus { p: p2, q });
    }
    if p1 % q == p2 % q {
        return Err(Error::CongruentPrimes { p1, p2, q });
    }
    Ok(())
}

/// Σ_{X<y≤Z} χ((p₁y+a)/(p₂y+a)) for p₁ ≢ p₂ (mod q) and gcd(a, q) = 1.
///
/// An empty range (X = Z) sums to 0.
pub fn lemma4_sum(
    chi: &DirichletCharacter,
    p1: u64,
    p2: u64,
    a: i64,
    x: i64,
    z: i64,
) -> Result<SumValue> {
    let ctx = chi.context();
    let q = ctx.modulus();
    validate_prime_pair(p1, p2, q)?;
    let a_red = a.rem_euclid(q as i64) as u64;
    if a_red == 0 {
        return Err(Error::ShiftNotCoprime { a, q });
    }
    if z < x {
        return Err(Error::InvertedRange { x, z });
    }
    let n_terms = (z - x) as u64;
    let (p1r, p2r) = (p1 % q, p2 % q);
    let term_residue = move |y: u64| -> u64 {
        let ym = y % q;
        let num = (p1r * ym + a_red) % q;
        let den = (p2r * ym + a_red) % q;
        num * ctx.inverse(den) % q
    };
    // offset the index so the chunked helpers run over 1..=n_terms
    let base = x; // y = base + i
    if chi.is_real() {
        let acc = chunked_sum_int(1, n_terms.max(1).min(n_terms), |i| {
            chi.eval_residue_int(term_residue((base + i as i64) as u64))
        });
        Ok(SumValue::from_int(if n_terms == 0 { 0 } else { acc }, n_terms))
    } else {
        let acc = chunked_sum_complex(1, n_terms.max(1).min(n_terms), |i| {
            chi.eval_residue(term_residue((base + i as i64) as u64))
        });
        Ok(SumValue::from_complex(
            if n_terms == 0 { Complex64::ZERO } else { acc },
            n_terms,
        ))
    }
}

/// The same sum evaluated through the proof's substitution: pulling p₁, p₂
/// out of the argument gives χ(p₁)χ̄(p₂) Σ_{X<y≤Z} χ((y+a/p₁)/(y+a/p₂)).
///
/// Agrees with [`lemma4_sum`] term-for-term; exact on the integer path.
pub fn lemma4_sum_substituted(
    chi: &DirichletCharacter,
    p1: u64,
    p2: u64,
    a: i64,
    x: i64,
    z: i64,
) -> Result<SumValue> {
    let ctx = chi.context();
    let q = ctx.modulus();
    validate_prime_pair(p1, p2, q)?;
    let a_red = a.rem_euclid(q as i64) as u64;
    if a_red == 0 {
        return Err(Error::ShiftNotCoprime { a, q });
    }
    if z < x {
        return Err(Error::InvertedRange { x, z });
    }
    let n_terms = (z - x) as u64;
    let s = a_red * ctx.inverse(p1 % q) % q;
    let t = a_red * ctx.inverse(p2 % q) % q;
    let shifted_ratio = move |y: u64| -> u64 {
        let ym = y % q;
        let num = (ym + s) % q;
        let den = (ym + t) % q;
        num * ctx.inverse(den) % q
    };
    let base = x;
    if chi.is_real() {
        let factor = chi.eval_residue_int(p1 % q) * chi.eval_residue_int(p2 % q);
        let inner = if n_terms == 0 {
            0
        } else {
            chunked_sum_int(1, n_terms, |i| {
                chi.eval_residue_int(shifted_ratio((base + i as i64) as u64))
            })
        };
        Ok(SumValue::from_int(factor * inner, n_terms))
    } else {
        let factor = chi.eval_residue(p1 % q) * chi.eval_residue(p2 % q).conj();
        let inner = if n_terms == 0 {
            Complex64::ZERO
        } else {
            chunked_sum_complex(1, n_terms, |i| {
                chi.eval_residue(shifted_ratio((base + i as i64) as u64))
            })
        };
        Ok(SumValue::from_complex(factor * inner, n_terms))
    }
}

/// Σ_{x=1}^h χ((x+a₁)···(x+a_t) / ((x+b₁)···(x+b_t))) for t ≥ 2 and the 2t
/// shift values pairwise distinct in F_q; 1/0 = 0 on the denominator product.
pub fn lemma5_sum(
    chi: &DirichletCharacter,
    a_shifts: &[i64],
    b_shifts: &[i64],
    h: u64,
) -> Result<SumValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if a_shifts.len() != b_shifts.len() || a_shifts.len() < 2 {
        return Err(Error::TooFewShifts {
            need: 2,
            got: a_shifts.len().min(b_shifts.len()),
        });
    }
    let ctx = chi.context();
    let q = ctx.modulus();
    let combined: Vec<i64> = a_shifts.iter().chain(b_shifts).copied().collect();
    let reduced = reduce_distinct_shifts(&combined, q)?;
    let (a_red, b_red) = reduced.split_at(a_shifts.len());
    if h == 0 || h > q {
        return Err(Error::RangeOutOfBounds { h, q });
    }
    let ratio = |x: u64| -> u64 {
        let xm = x % q;
        let mut num = 1u64;
        for &r in a_red {
            num = num * ((xm + r) % q) % q;
        }
        let mut den = 1u64;
        for &r in b_red {
            den = den * ((xm + r) % q) % q;
        }
        num * ctx.inverse(den) % q
    };
    if chi.is_real() {
        let acc = chunked_sum_int(1, h, |x| chi.eval_residue_int(ratio(x)));
        Ok(SumValue::from_int(acc, h))
    } else {
        let acc = chunked_sum_complex(1, h, |x| chi.eval_residue(ratio(x)));
        Ok(SumValue::from_complex(acc, h))
    }
}

/// Σ_{X<y≤Z} χ(Π(p₁y+a_i) / Π(p₂y+a_i)) together with the exceptional flag:
/// true iff p₂ ≡ a_i⁻¹ a_j p₁ (mod q) for some pair (i, j), in which case only
/// the trivial bound Z-X+1 applies.
pub fn lemma6_sum(
    chi: &DirichletCharacter,
    p1: u64,
    p2: u64,
    shifts: &[i64],
    x: i64,
    z: i64,
) -> Result<(SumValue, bool)> {
    if shifts.len() < 2 {
        return Err(Error::TooFewShifts {
            need: 2,
            got: shifts.len(),
        });
    }
    let ctx = chi.context();
    let q = ctx.modulus();
    validate_prime_pair(p1, p2, q)?;
    let reduced = reduce_distinct_shifts(shifts, q)?;
    for (&orig, &r) in shifts.iter().zip(&reduced) {
        if r == 0 {
            return Err(Error::ShiftNotCoprime { a: orig, q });
        }
    }
    if z < x {
        return Err(Error::InvertedRange { x, z });
    }
    let n_terms = (z - x) as u64;
    let (p1r, p2r) = (p1 % q, p2 % q);

    let mut exceptional = false;
    for &ai in &reduced {
        for &aj in &reduced {
            if p2r == ctx.inverse(ai) * aj % q * p1r % q {
                exceptional = true;
            }
        }
    }

    let ratio = move |y: u64| -> u64 {
        let ym = y % q;
        let mut num = 1u64;
        let mut den = 1u64;
        for &r in &reduced {
            num = num * ((p1r * ym + r) % q) % q;
            den = den * ((p2r * ym + r) % q) % q;
        }
        num * ctx.inverse(den) % q
    };
    let base = x;
    let value = if chi.is_real() {
        let acc = if n_terms == 0 {
            0
        } else {
            chunked_sum_int(1, n_terms, |i| {
                chi.eval_residue_int(ratio((base + i as i64) as u64))
            })
        };
        SumValue::from_int(acc, n_terms)
    } else {
        let acc = if n_terms == 0 {
            Complex64::ZERO
        } else {
            chunked_sum_complex(1, n_terms, |i| {
                chi.eval_residue(ratio((base + i as i64) as u64))
            })
        };
        SumValue::from_complex(acc, n_terms)
    };
    Ok((value, exceptional))
}
