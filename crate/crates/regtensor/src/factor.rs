//! Irreducibility and factorization oracles, scoped to exactly the
//! polynomial classes the engine needs: univariate polynomials over finite
//! prime fields, purely inseparable binomials over char-p function fields
//! and subfields, and quadratics over multiquadratic extensions of `Q`.
//! Anything else is refused loudly rather than guessed.
//!
//! Every positive answer ships an [`IrreducibilityCert`] carrying enough
//! data to re-verify the claim without re-running the search.

use crate::field::{FieldArith, FunctionField};
use crate::insep::{member, InsepError, SubfieldBasis};
use crate::poly::ratfunc::RatFunc;
use crate::poly::uni::{Degree, UniPoly};
use crate::scalar::PrimeBase;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorError {
    CharMismatch,
    UnsupportedField(String),
    BadGenerators(String),
    Insep(InsepError),
}

impl fmt::Display for FactorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorError::CharMismatch => write!(f, "characteristic mismatch"),
            FactorError::UnsupportedField(m) => write!(f, "no oracle covers this field: {m}"),
            FactorError::BadGenerators(m) => write!(f, "bad multiquadratic generators: {m}"),
            FactorError::Insep(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FactorError {}

impl From<InsepError> for FactorError {
    fn from(e: InsepError) -> Self {
        FactorError::Insep(e)
    }
}

/// Replayable evidence for an irreducibility (or reducibility) claim: the
/// certificate carries enough data to re-verify the claim without
/// re-running the search.
#[derive(Clone, Debug, PartialEq)]
pub enum IrreducibilityCert {
    /// Claim checked by the finite-field routine; replay verifies
    /// `X^(p^d) = X mod f` together with `gcd(X^(p^(d/l)) - X, f) = 1` for
    /// every prime `l | d`.
    FiniteFieldFactorization {
        p: u64,
        coeffs: Vec<u64>,
        irreducible: bool,
    },
    /// `X^(p^m) - a` over `L` is irreducible iff `a` has no p-th root in
    /// `L`; the certificate records the candidate ambient root and the
    /// membership verdict.
    BinomialCriterion {
        p: u64,
        m: u32,
        a: RatFunc,
        ambient_root: Option<RatFunc>,
        root_in_field: bool,
    },
    /// Quadratic over a multiquadratic field: discriminant square search
    /// through the square-class group.
    QuadraticRootSearch {
        discriminant: BigRational,
        sqrt: Option<MqSqrt>,
        class_gens: Vec<i64>,
    },
    DegreeOne,
}

impl IrreducibilityCert {
    pub fn method(&self) -> &'static str {
        match self {
            IrreducibilityCert::FiniteFieldFactorization { .. } => "finite_field_factorization",
            IrreducibilityCert::BinomialCriterion { .. } => "binomial_criterion",
            IrreducibilityCert::QuadraticRootSearch { .. } => "quadratic_root_search",
            IrreducibilityCert::DegreeOne => "degree_one",
        }
    }

    /// Re-check the certified claim from the recorded witness data alone.
    /// For membership claims the hosting subfield must be supplied again;
    /// everything else replays standalone.
    pub fn replay(&self, host: Option<&SubfieldBasis>) -> bool {
        match self {
            IrreducibilityCert::DegreeOne => true,
            IrreducibilityCert::FiniteFieldFactorization {
                p,
                coeffs,
                irreducible,
            } => {
                let field = fp_field(*p);
                let f = UniPoly::new(
                    field.clone(),
                    coeffs
                        .iter()
                        .map(|&c| field.from_integer(c as i64))
                        .collect(),
                );
                verify_irreducible_finite_field(&f) == *irreducible
            }
            IrreducibilityCert::BinomialCriterion {
                p,
                m,
                a,
                ambient_root,
                root_in_field,
            } => {
                if *m == 0 || a.base() != PrimeBase::Prime(*p) {
                    return false;
                }
                match (a.pth_root(), ambient_root) {
                    (None, None) => !*root_in_field,
                    (Some(r), Some(rc)) => {
                        if &r != rc || !r.pow(*p as u32).eq(a) {
                            return false;
                        }
                        match host {
                            Some(basis) => member(&r, basis)
                                .map(|inside| inside == *root_in_field)
                                .unwrap_or(false),
                            // without the host we can still confirm the
                            // recorded root really is the p-th root
                            None => true,
                        }
                    }
                    _ => false,
                }
            }
            IrreducibilityCert::QuadraticRootSearch {
                discriminant,
                sqrt,
                class_gens,
            } => {
                match sqrt {
                    Some(s) => {
                        // (rational * prod sqrt(d))^2 must equal the
                        // discriminant
                        let mut sq = &s.rational * &s.rational;
                        for d in &s.subset {
                            if !class_gens.contains(d) {
                                return false;
                            }
                            sq *= BigRational::from_integer(BigInt::from(*d));
                        }
                        discriminant.is_zero() && s.rational.is_zero() || sq == *discriminant
                    }
                    None => {
                        // exhaustively confirm no square root exists
                        matches!(sqrt_in_multiquadratic(discriminant, class_gens), Ok(None))
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// finite prime fields
// ---------------------------------------------------------------------------

/// Deterministic splitting-element stream for equal-degree factorization.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

type FpPoly = UniPoly<FunctionField>;

/// The plain prime field as a coefficient field.
pub fn fp_field(p: u64) -> FunctionField {
    FunctionField::prime(PrimeBase::Prime(p))
}

fn poly_char(f: &FpPoly) -> u64 {
    f.field.characteristic()
}

/// Squarefree decomposition over `F_p` (characteristic-aware: vanishing
/// derivatives deflate through `X^p`).
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = poly_char(f) as usize;
    let f = f.monic();
    match f.degree() {
        Degree::NegInf | Degree::Of(0) => return Vec::new(),
        _ => {}
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(X^p); F_p coefficients are their own p-th roots
        let g = f
            .deflate(p)
            .expect("vanishing derivative implies p-divisible exponents");
        return squarefree_decomposition(&g)
            .into_iter()
            .map(|(h, m)| (h, m * p as u32))
            .collect();
    }
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    let d = f.gcd(&df).expect("nonzero");
    let mut w = f.exact_div(&d).expect("gcd divides");
    let mut rest = d;
    let mut i = 1u32;
    while let Degree::Of(dw) = w.degree() {
        if dw == 0 {
            break;
        }
        let y = w.gcd(&rest).expect("nonzero");
        let fac = w.exact_div(&y).expect("gcd divides");
        if let Degree::Of(df) = fac.degree() {
            if df > 0 {
                out.push((fac.monic(), i));
            }
        }
        w = y;
        rest = rest.exact_div(&w).expect("gcd divides");
        i += 1;
    }
    if let Degree::Of(dr) = rest.degree() {
        if dr > 0 {
            // multiplicities divisible by p live here
            let g = rest.deflate(p).expect("remaining part is a p-th power");
            for (h, m) in squarefree_decomposition(&g) {
                merge_factor(&mut out, h, m * p as u32);
            }
        }
    }
    out
}

fn merge_factor(out: &mut Vec<(FpPoly, u32)>, h: FpPoly, m: u32) {
    for (g, mg) in out.iter_mut() {
        if *g == h {
            *mg += m;
            return;
        }
    }
    out.push((h, m));
}

/// Distinct-degree split of a squarefree monic polynomial: pairs
/// `(product of irreducibles of degree d, d)`.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = poly_char(f);
    let field = f.field.clone();
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(field.clone());
    let mut frob = x.clone(); // X^(p^d) mod rest, maintained incrementally
    let mut d = 0usize;
    while let Degree::Of(n) = rest.degree() {
        if n == 0 {
            break;
        }
        d += 1;
        if 2 * d > n {
            out.push((rest.clone(), n));
            break;
        }
        frob = frob.pow_mod(p as u128, &rest).expect("modulus nonzero");
        let g = rest.gcd(&frob.sub(&x)).expect("nonzero");
        if let Degree::Of(dg) = g.degree() {
            if dg > 0 {
                out.push((g.clone(), d));
                rest = rest.exact_div(&g).expect("gcd divides");
                frob = frob.rem(&rest).expect("modulus nonzero");
            }
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting with a deterministic seed.
fn equal_degree(f: &FpPoly, d: usize, rng: &mut SplitMix) -> Vec<FpPoly> {
    let n = match f.degree() {
        Degree::Of(n) => n,
        Degree::NegInf => return Vec::new(),
    };
    if n == d {
        return vec![f.monic()];
    }
    let p = poly_char(f);
    let field = f.field.clone();
    loop {
        // random u of degree < n
        let coeffs: Vec<_> = (0..n)
            .map(|_| field.from_integer((rng.next() % p) as i64))
            .collect();
        let u = FpPoly::new(field.clone(), coeffs);
        if u.is_zero() {
            continue;
        }
        let w = if p == 2 {
            // trace map: u + u^2 + u^4 + ... (d terms)
            let mut acc = FpPoly::zero(field.clone());
            let mut t = u.rem(f).expect("nonzero");
            for _ in 0..d {
                acc = acc.add(&t).rem(f).expect("nonzero");
                t = t.mul(&t).rem(f).expect("nonzero");
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            let pw = u.pow_mod(e, f).expect("nonzero");
            pw.sub(&FpPoly::one(field.clone()))
        };
        if w.is_zero() {
            continue;
        }
        let g = f.gcd(&w).expect("nonzero");
        if let Degree::Of(dg) = g.degree() {
            if dg > 0 && dg < n {
                let h = f.exact_div(&g).expect("gcd divides");
                let mut out = equal_degree(&g, d, rng);
                out.extend(equal_degree(&h, d, rng));
                return out;
            }
        }
    }
}

fn poly_sort_key(f: &FpPoly) -> (usize, Vec<u64>) {
    let d = f.degree().finite().unwrap_or(0);
    let coeffs: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| {
            c.as_constant()
                .map(|s| match s {
                    crate::scalar::Scalar::PrimeField { value, .. } => value,
                    _ => 0,
                })
                .unwrap_or(0)
        })
        .collect();
    (d, coeffs)
}

/// Full factorization over a finite prime field: squarefree, then distinct
/// degree, then seeded equal degree. The product of the returned powers
/// re-multiplies to the monic part of the input exactly.
pub fn factor_finite_field(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    assert!(poly_char(f) > 0, "finite-field factorization needs char p");
    let mut rng = SplitMix(0x5eed_c0de_2024_0001);
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        for (prod, d) in distinct_degree(&g) {
            for irr in equal_degree(&prod, d, &mut rng) {
                merge_factor(&mut out, irr.monic(), mult);
            }
        }
    }
    out.sort_by_key(|(g, _)| poly_sort_key(g));
    out
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Independent irreducibility check over `F_p` by root counting in the
/// degree-d extension: `X^(p^d) = X (mod f)` and no collapse at proper
/// divisors. This is the certificate replay path; it never calls the
/// factorization search.
pub fn verify_irreducible_finite_field(f: &FpPoly) -> bool {
    let p = poly_char(f);
    let d = match f.degree() {
        Degree::Of(d) if d >= 1 => d as u64,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let field = f.field.clone();
    let x = FpPoly::x(field);
    let frob_pow = |e: u64| -> FpPoly {
        let mut acc = x.rem(f).expect("nonzero");
        for _ in 0..e {
            acc = acc.pow_mod(p as u128, f).expect("nonzero");
        }
        acc
    };
    if frob_pow(d)
        .sub(&x)
        .rem(f)
        .map(|r| !r.is_zero())
        .unwrap_or(true)
    {
        return false;
    }
    for l in prime_divisors(d) {
        let g = f.gcd(&frob_pow(d / l).sub(&x)).expect("nonzero");
        if !matches!(g.degree(), Degree::Of(0)) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// purely inseparable binomials
// ---------------------------------------------------------------------------

/// Where the binomial criterion should test p-th power membership.
pub enum BinomialHost<'a> {
    /// The full rational function field `F_p(x_1..x_n)` itself.
    FunctionField,
    /// A subfield presented by a basis over some `B0`.
    Subfield(&'a SubfieldBasis),
}

/// Decide irreducibility of `X^(p^m) - a` over the host: irreducible iff
/// `a` has no p-th root there. Returns the verdict, a replayable
/// certificate, and the p-th root when one exists (the reducibility
/// witness: `X^(p^m) - a = (X^(p^(m-1)) - r)^p`).
pub fn binomial_irreducible(
    p: u64,
    m: u32,
    a: &RatFunc,
    host: BinomialHost<'_>,
) -> Result<(bool, IrreducibilityCert, Option<RatFunc>), FactorError> {
    if a.base() != PrimeBase::Prime(p) {
        return Err(FactorError::CharMismatch);
    }
    assert!(m >= 1);
    let ambient_root = a.pth_root();
    let (root_in_field, witness) = match (&ambient_root, host) {
        (None, _) => (false, None),
        (Some(r), BinomialHost::FunctionField) => (true, Some(r.clone())),
        (Some(r), BinomialHost::Subfield(basis)) => {
            if member(r, basis)? {
                (true, Some(r.clone()))
            } else {
                (false, None)
            }
        }
    };
    let cert = IrreducibilityCert::BinomialCriterion {
        p,
        m,
        a: a.clone(),
        ambient_root: ambient_root.clone(),
        root_in_field,
    };
    Ok((!root_in_field, cert, witness))
}

// ---------------------------------------------------------------------------
// multiquadratic extensions of Q
// ---------------------------------------------------------------------------

/// `n = s^2 * d` with `d` squarefree; returns `(s, d)`.
pub fn squarefree_part(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let sign = n.signum();
    let mut n = n.unsigned_abs();
    let mut s: i64 = 1;
    let mut d: i64 = 1;
    let mut f = 2u64;
    while f * f <= n {
        let mut cnt = 0u32;
        while n.is_multiple_of(f) {
            n /= f;
            cnt += 1;
        }
        s *= (f as i64).pow(cnt / 2);
        if cnt % 2 == 1 {
            d *= f as i64;
        }
        f += 1;
    }
    d *= n as i64;
    (s, d * sign)
}

/// Square-class vector of a nonzero rational: sign bit plus the primes with
/// odd exponent, as a sorted list. Two rationals are in the same square
/// class iff the vectors agree.
fn square_class(r: &BigRational) -> Option<(bool, Vec<u64>)> {
    if r.is_zero() {
        return None;
    }
    let mut primes = std::collections::BTreeMap::<u64, u32>::new();
    let mut absorb = |n: &BigInt| {
        let mut n = n.abs();
        let mut f = BigInt::from(2u64);
        while (&f * &f) <= n {
            while (&n % &f).is_zero() {
                n /= &f;
                let key = u64::try_from(&f).expect("trial division stays small");
                *primes.entry(key).or_insert(0) += 1;
            }
            f += 1;
        }
        if n > BigInt::one() {
            let key = u64::try_from(&n).expect("inputs are small");
            *primes.entry(key).or_insert(0) += 1;
        }
    };
    absorb(r.numer());
    absorb(r.denom());
    let odd: Vec<u64> = primes
        .into_iter()
        .filter(|(_, c)| c % 2 == 1)
        .map(|(p, _)| p)
        .collect();
    Some((r.is_negative(), odd))
}

fn class_mul(a: &(bool, Vec<u64>), b: &(bool, Vec<u64>)) -> (bool, Vec<u64>) {
    let sign = a.0 ^ b.0;
    let mut out = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.1.len() || j < b.1.len() {
        match (a.1.get(i), b.1.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (sign, out)
}

/// Validate multiquadratic generators: squarefree, nonzero, not 1, pairwise
/// multiplicatively independent modulo squares.
pub fn check_generators(gens: &[i64]) -> Result<(), FactorError> {
    let mut seen: Vec<(bool, Vec<u64>)> = Vec::new();
    for &d in gens {
        if d == 0 || d == 1 {
            return Err(FactorError::BadGenerators(format!("generator {d}")));
        }
        let (s, core) = squarefree_part(d);
        if s != 1 || core != d {
            return Err(FactorError::BadGenerators(format!("{d} is not squarefree")));
        }
        let c = square_class(&BigRational::from_integer(BigInt::from(d))).expect("nonzero");
        // independence: no subset of previous classes multiplies to c
        if subset_reaching(&seen, &c).is_some() {
            return Err(FactorError::BadGenerators(format!(
                "{d} is dependent on earlier generators modulo squares"
            )));
        }
        seen.push(c);
    }
    Ok(())
}

/// Find a subset of `classes` whose product equals `target` in the square
/// class group; exhaustive over subsets (generator lists here are tiny).
fn subset_reaching(classes: &[(bool, Vec<u64>)], target: &(bool, Vec<u64>)) -> Option<Vec<usize>> {
    let n = classes.len();
    assert!(n <= 16, "generator lists are small");
    for mask in 0u32..(1 << n) {
        let mut acc = (false, Vec::new());
        for (i, c) in classes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = class_mul(&acc, c);
            }
        }
        if acc == *target {
            return Some((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    None
}

/// A square root inside `Q(sqrt d_1, .., sqrt d_n)`, written as
/// `rational * prod_(d in subset) sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MqSqrt {
    pub rational: BigRational,
    pub subset: Vec<i64>,
}

impl fmt::Display for MqSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for d in &self.subset {
            write!(f, "*sqrt({d})")?;
        }
        Ok(())
    }
}

/// Does `a` have a square root in `Q(sqrt d_1..sqrt d_n)`? Exists iff
/// `a * prod_(i in T) d_i` is a rational square for some subset `T`.
pub fn sqrt_in_multiquadratic(
    a: &BigRational,
    gens: &[i64],
) -> Result<Option<MqSqrt>, FactorError> {
    check_generators(gens)?;
    if a.is_zero() {
        return Ok(Some(MqSqrt {
            rational: BigRational::zero(),
            subset: Vec::new(),
        }));
    }
    let target = square_class(a).expect("nonzero");
    let classes: Vec<_> = gens
        .iter()
        .map(|&d| square_class(&BigRational::from_integer(BigInt::from(d))).expect("nonzero"))
        .collect();
    let subset_idx = match subset_reaching(&classes, &target) {
        None => return Ok(None),
        Some(t) => t,
    };
    let subset: Vec<i64> = subset_idx.iter().map(|&i| gens[i]).collect();
    // a * prod(subset) = s^2; sqrt(a) = (s / prod(subset)) * prod sqrt(d)
    let mut prod = BigRational::one();
    for &d in &subset {
        prod *= BigRational::from_integer(BigInt::from(d));
    }
    let s = rational_sqrt(&(a * &prod)).expect("class computation promised a square");
    Ok(Some(MqSqrt {
        rational: s / prod,
        subset,
    }))
}

/// Exact square root of a rational, when it is one.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Outcome of splitting `X^2 + b X + c`.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadraticOutcome {
    /// Roots `offset +- scale * prod sqrt(d)`.
    Split {
        offset: BigRational,
        scale: BigRational,
        subset: Vec<i64>,
    },
    Irreducible,
}

/// Factor a monic rational quadratic over the multiquadratic field with the
/// given square-class generators (negative squarefree d allowed, so Q(i)
/// and Q(sqrt -3) are in scope).
pub fn factor_quadratic(
    b: &BigRational,
    c: &BigRational,
    gens: &[i64],
) -> Result<(QuadraticOutcome, IrreducibilityCert), FactorError> {
    let four = BigRational::from_integer(BigInt::from(4));
    let disc = b * b - four * c;
    if disc.is_zero() {
        let offset = -b / BigRational::from_integer(BigInt::from(2));
        let cert = IrreducibilityCert::QuadraticRootSearch {
            discriminant: BigRational::zero(),
            sqrt: Some(MqSqrt {
                rational: BigRational::zero(),
                subset: Vec::new(),
            }),
            class_gens: gens.to_vec(),
        };
        return Ok((
            QuadraticOutcome::Split {
                offset,
                scale: BigRational::zero(),
                subset: Vec::new(),
            },
            cert,
        ));
    }
    let sqrt = sqrt_in_multiquadratic(&disc, gens)?;
    let cert = IrreducibilityCert::QuadraticRootSearch {
        discriminant: disc.clone(),
        sqrt: sqrt.clone(),
        class_gens: gens.to_vec(),
    };
    match sqrt {
        None => Ok((QuadraticOutcome::Irreducible, cert)),
        Some(s) => {
            let two = BigRational::from_integer(BigInt::from(2));
            // the two roots are offset +- scale*sqrt, so the sign of the
            // scale is immaterial; keep it positive for determinism
            Ok((
                QuadraticOutcome::Split {
                    offset: -b / &two,
                    scale: (s.rational / two).abs(),
                    subset: s.subset,
                },
                cert,
            ))
        }
    }
}

/// Roots of `X^2 + bX + c` over `F_p` by exhaustive search; used for
/// cross-oracle agreement with [`factor_finite_field`].
pub fn quadratic_roots_fp(b: u64, c: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for x in 0..p {
        let v = (x * x % p + b * x % p + c) % p;
        if v == 0 {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfunc;
    use std::sync::Arc;

    fn poly_from(field: &FunctionField, coeffs: &[i64]) -> FpPoly {
        FpPoly::new(
            field.clone(),
            coeffs.iter().map(|&c| field.from_integer(c)).collect(),
        )
    }

    #[test]
    fn factor_examples_over_f2_f3() {
        let f2 = fp_field(2);
        // X^2 + 1 = (X + 1)^2 over F_2
        let f = poly_from(&f2, &[1, 0, 1]);
        let fac = factor_finite_field(&f);
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].1, 2);
        assert_eq!(fac[0].0, poly_from(&f2, &[1, 1]));

        // X^2 + X + 1 irreducible over F_2
        let g = poly_from(&f2, &[1, 1, 1]);
        let fac = factor_finite_field(&g);
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].1, 1);
        assert_eq!(fac[0].0, g);
        assert!(verify_irreducible_finite_field(&g));
        assert!(!verify_irreducible_finite_field(&f));

        // X^3 - X = X (X+1) (X+2) over F_3
        let f3 = fp_field(3);
        let h = poly_from(&f3, &[0, -1, 0, 1]);
        let fac = factor_finite_field(&h);
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(_, m)| *m == 1));
        let prod = fac
            .iter()
            .fold(FpPoly::one(f3.clone()), |acc, (g, _)| acc.mul(g));
        assert_eq!(prod, h.monic());
    }

    #[test]
    fn binomial_examples() {
        let vars = Arc::new(vec!["t".to_string()]);
        let t = parse_ratfunc("t", PrimeBase::Prime(2), vars.clone()).unwrap();
        // X^2 - t irreducible over F_2(t)
        let (irr, cert, _) = binomial_irreducible(2, 1, &t, BinomialHost::FunctionField).unwrap();
        assert!(irr);
        assert_eq!(cert.method(), "binomial_criterion");
        // X^2 - t^2 reducible with root t
        let t2 = t.mul(&t);
        let (irr, _, root) = binomial_irreducible(2, 1, &t2, BinomialHost::FunctionField).unwrap();
        assert!(!irr);
        assert_eq!(root, Some(t.clone()));
        // X^4 - t irreducible (m = 2)
        let (irr, _, _) = binomial_irreducible(2, 2, &t, BinomialHost::FunctionField).unwrap();
        assert!(irr);
    }

    #[test]
    fn multiquadratic_sqrt_examples() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        // sqrt(6) in Q(sqrt2, sqrt3) = sqrt2 * sqrt3
        let s = sqrt_in_multiquadratic(&q(6, 1), &[2, 3]).unwrap().unwrap();
        assert_eq!(s.rational, q(1, 1));
        assert_eq!(s.subset, vec![2, 3]);
        // sqrt(2) not in Q(sqrt3)
        assert!(sqrt_in_multiquadratic(&q(2, 1), &[3]).unwrap().is_none());
        // sqrt(4) = 2 with no generators
        let s = sqrt_in_multiquadratic(&q(4, 1), &[]).unwrap().unwrap();
        assert_eq!(s.rational, q(2, 1));
        assert!(s.subset.is_empty());
        // bad generators are rejected
        assert!(matches!(
            sqrt_in_multiquadratic(&q(1, 1), &[4]),
            Err(FactorError::BadGenerators(_))
        ));
        assert!(matches!(
            sqrt_in_multiquadratic(&q(1, 1), &[2, 3, 6]),
            Err(FactorError::BadGenerators(_))
        ));
        // negative squarefree generators are fine: sqrt(3) in Q(i, sqrt -3)
        let s = sqrt_in_multiquadratic(&q(3, 1), &[-1, -3])
            .unwrap()
            .unwrap();
        assert_eq!(s.subset, vec![-1, -3]);
        assert_eq!(s.rational, q(1, 1));
    }

    #[test]
    fn quadratic_examples() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        // X^2 + 1 splits over Q(i)
        let (out, _) = factor_quadratic(&q(0), &q(1), &[-1]).unwrap();
        match out {
            QuadraticOutcome::Split {
                offset,
                scale,
                subset,
            } => {
                assert!(offset.is_zero());
                // roots are +- (1/2) * sqrt(-4) = +- i
                assert_eq!(subset, vec![-1]);
                assert_eq!(scale, BigRational::new(BigInt::from(1), BigInt::from(1)));
            }
            _ => panic!("should split"),
        }
        // X^2 - 3 irreducible over Q(sqrt 2)
        let (out, _) = factor_quadratic(&q(0), &q(-3), &[2]).unwrap();
        assert_eq!(out, QuadraticOutcome::Irreducible);
        // X^2 + X + 1 splits over Q(sqrt -3): roots (-1 +- sqrt(-3))/2
        let (out, _) = factor_quadratic(&q(1), &q(1), &[-3]).unwrap();
        match out {
            QuadraticOutcome::Split {
                offset,
                scale,
                subset,
            } => {
                assert_eq!(offset, BigRational::new(BigInt::from(-1), BigInt::from(2)));
                assert_eq!(scale, BigRational::new(BigInt::from(1), BigInt::from(2)));
                assert_eq!(subset, vec![-3]);
            }
            _ => panic!("should split"),
        }
    }

    #[test]
    fn cross_oracle_agreement_quadratics() {
        // factor_finite_field and the root scan agree for all monic
        // quadratics over F_p, p <= 7
        for p in [2u64, 3, 5, 7] {
            let field = fp_field(p);
            for b in 0..p {
                for c in 0..p {
                    let f = poly_from(&field, &[c as i64, b as i64, 1]);
                    let roots = quadratic_roots_fp(b, c, p);
                    let fac = factor_finite_field(&f);
                    let linear_with_mult: u32 = fac
                        .iter()
                        .filter(|(g, _)| matches!(g.degree(), Degree::Of(1)))
                        .map(|(_, m)| m)
                        .sum();
                    let distinct_roots = roots.len() as u32;
                    match distinct_roots {
                        0 => assert_eq!(linear_with_mult, 0, "p={p} b={b} c={c}"),
                        1 => assert_eq!(linear_with_mult, 2, "p={p} b={b} c={c}"),
                        2 => assert_eq!(linear_with_mult, 2, "p={p} b={b} c={c}"),
                        _ => panic!("quadratic with more than two roots"),
                    }
                    if distinct_roots == 1 {
                        assert_eq!(fac.len(), 1);
                        assert_eq!(fac[0].1, 2);
                    }
                }
            }
        }
    }
}
