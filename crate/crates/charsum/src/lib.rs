//! Numerical machinery for shifted character sums Σ_{n≤N} f(n)χ(n+a) with
//! multiplicative coefficients |f(n)| ≤ 1 and Dirichlet characters χ mod a
//! prime q, together with the complete and incomplete sums that control them
//! and empirical reports of the implied constants.
//!
//! Module map:
//! - [`modarith`] — prime moduli, primitive roots, discrete-log tables.
//! - [`characters`] — Dirichlet characters realized through the primitive-root index.
//! - [`multfunc`] — multiplicative coefficient functions over a smallest-prime-factor sieve.
//! - [`sums`] — the shifted sums and every supporting complete/incomplete sum.
//! - [`decomposition`] — the block decomposition of the shifted sum over prime ranges
//!   [eʳ, e^{r+1}), with the Cauchy–Schwarz step and diagonal/off-diagonal split.
//! - [`bounds`] — constant-free bound expressions and measured-ratio reports.

pub mod bounds;
pub mod characters;
pub mod decomposition;
pub mod modarith;
pub mod multfunc;
pub mod sums;

pub use characters::DirichletCharacter;
pub use modarith::PrimeContext;
pub use multfunc::{MultiplicativeFunction, SpfSieve};
pub use sums::SumValue;

/// Errors reported by the library; the CLI maps these onto exit statuses.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (need 3 <= q <= {max})", max = modarith::MAX_MODULUS)]
    ModulusOutOfRange(u64),
    #[error("{g} is not a primitive root modulo {q}")]
    NotPrimitiveRoot { g: u64, q: u64 },
    #[error("character index {k} out of range for modulus {q} (need 0 <= k <= q-2)")]
    CharIndexOutOfRange { k: u64, q: u64 },
    #[error("sieve limit {requested} exceeds the memory budget {budget}")]
    SieveBudget { requested: u64, budget: u64 },
    #[error("argument {n} outside sieve range [1, {limit}]")]
    OutsideSieve { n: u64, limit: u64 },
    #[error("unknown multiplicative function {0:?}")]
    UnknownFunction(String),
    #[error("shifts are not pairwise distinct modulo q={q}: {a} repeats")]
    DuplicateShift { a: i64, q: u64 },
    #[error("need at least {need} shifts, got {got}")]
    TooFewShifts { need: usize, got: usize },
    #[error("shift {a} is not coprime to q={q}")]
    ShiftNotCoprime { a: i64, q: u64 },
    #[error("character is principal where a non-principal character is required")]
    PrincipalCharacter,
    #[error("characters come from different moduli ({0} vs {1})")]
    ContextMismatch(u64, u64),
    #[error("empty character list")]
    EmptyCharacterList,
    #[error("residues s={s} and t={t} coincide modulo q={q}")]
    CoincidentResidues { s: i64, t: i64, q: u64 },
    #[error("interval length h={h} out of range [1, {q}]")]
    RangeOutOfBounds { h: u64, q: u64 },
    #[error("empty or inverted range ({x}, {z}]")]
    InvertedRange { x: i64, z: i64 },
    #[error("{p} is not coprime to q={q}")]
    PrimeDividesModulus { p: u64, q: u64 },
    #[error("p1={p1} and p2={p2} are congruent modulo q={q}")]
    CongruentPrimes { p1: u64, p2: u64, q: u64 },
    #[error("block index r={0} must satisfy r >= 0 and e^r <= N")]
    BadBlockIndex(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
