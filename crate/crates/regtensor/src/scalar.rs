//! Exact arithmetic over the two prime fields of interest: arbitrary-precision
//! rationals and `F_p` for a (machine-word) prime `p`.
//!
//! Every value is immutable and every operation is pure; nothing here ever
//! rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// The prime field a computation lives over: `Q` or `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeBase {
    Rational,
    Prime(u64),
}

impl PrimeBase {
    /// Characteristic of the field (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self {
            PrimeBase::Rational => 0,
            PrimeBase::Prime(p) => *p,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, PrimeBase::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_integer(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            PrimeBase::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            PrimeBase::Prime(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::PrimeField {
                    value: m,
                    modulus: *p,
                }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            PrimeBase::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            PrimeBase::Prime(p) => {
                let m = n.mod_floor_u64(*p);
                Scalar::PrimeField {
                    value: m,
                    modulus: *p,
                }
            }
        }
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeBase::Rational => write!(f, "Q"),
            PrimeBase::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&BigInt::from(p));
        let (_, digits) = r.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

/// Primality by trial division; inputs here are small (the corpus needs
/// p in {2, 3, 5}).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact scalar: a reduced rational or a residue in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    PrimeField { value: u64, modulus: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    DivisionByZero,
    /// Mixing fields (different moduli, or a rational with a residue).
    ModulusMismatch,
    NotPrime(u64),
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::ModulusMismatch => write!(f, "mixed-field scalar arithmetic"),
            ScalarError::NotPrime(n) => write!(f, "{n} is not prime"),
        }
    }
}

impl std::error::Error for ScalarError {}

pub type ScalarResult = Result<Scalar, ScalarError>;

impl Scalar {
    pub fn prime_field(value: i64, modulus: u64) -> ScalarResult {
        if !is_prime_u64(modulus) {
            return Err(ScalarError::NotPrime(modulus));
        }
        Ok(Scalar::PrimeField {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        })
    }

    pub fn rational(num: i64, den: i64) -> ScalarResult {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn base(&self) -> PrimeBase {
        match self {
            Scalar::Rational(_) => PrimeBase::Rational,
            Scalar::PrimeField { modulus, .. } => PrimeBase::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::PrimeField { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::PrimeField { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.base() == other.base() {
            Ok(())
        } else {
            Err(ScalarError::ModulusMismatch)
        }
    }

    pub fn add(&self, other: &Scalar) -> ScalarResult {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::PrimeField { value: a, modulus }, Scalar::PrimeField { value: b, .. }) => {
                Scalar::PrimeField {
                    value: (((*a as u128) + (*b as u128)) % (*modulus as u128)) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> ScalarResult {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::PrimeField { value, modulus } => Scalar::PrimeField {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> ScalarResult {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::PrimeField { value: a, modulus }, Scalar::PrimeField { value: b, .. }) => {
                Scalar::PrimeField {
                    value: (((*a as u128) * (*b as u128)) % (*modulus as u128)) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> ScalarResult {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::PrimeField { value, modulus } => {
                // Fermat: a^(p-2) = a^(-1) in F_p.
                Scalar::PrimeField {
                    value: pow_mod(*value, *modulus - 2, *modulus),
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> ScalarResult {
        self.mul(&other.inv()?)
    }

    /// p-th power. In `F_p` this is the identity (Fermat); exposed so
    /// coefficient fields that are genuine extensions can generalize it.
    /// Characteristic zero has no Frobenius; the value is returned unchanged.
    pub fn frobenius(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::PrimeField { value, modulus } => Scalar::PrimeField {
                value: pow_mod(*value, *modulus, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut result = self.base().one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).expect("same field");
            }
            b = b.mul(&b).expect("same field");
            e >>= 1;
        }
        result
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1;
    let mm = m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    r as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::PrimeField { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_addition_reduces() {
        let a = Scalar::rational(1, 2).unwrap();
        let b = Scalar::rational(1, 3).unwrap();
        assert_eq!(a.add(&b).unwrap(), Scalar::rational(5, 6).unwrap());
    }

    #[test]
    fn char_two_wraps() {
        let one = Scalar::prime_field(1, 2).unwrap();
        assert!(one.add(&one).unwrap().is_zero());
    }

    #[test]
    fn inverse_in_f3() {
        // 2 * 2 = 4 = 1 mod 3, checked against brute force over residues.
        let two = Scalar::prime_field(2, 3).unwrap();
        assert_eq!(two.inv().unwrap(), two);
        for v in 1..3i64 {
            let x = Scalar::prime_field(v, 3).unwrap();
            assert!(x.mul(&x.inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn frobenius_fixes_prime_fields() {
        for (v, p) in [(1, 2), (2, 3), (3, 5)] {
            let x = Scalar::prime_field(v, p).unwrap();
            assert_eq!(x.frobenius(), x);
        }
    }

    #[test]
    fn mixed_moduli_rejected() {
        let a = Scalar::prime_field(1, 2).unwrap();
        let b = Scalar::prime_field(1, 3).unwrap();
        assert_eq!(a.add(&b), Err(ScalarError::ModulusMismatch));
        let q = Scalar::rational(1, 1).unwrap();
        assert_eq!(q.mul(&a), Err(ScalarError::ModulusMismatch));
    }

    #[test]
    fn nonprime_modulus_rejected() {
        assert_eq!(Scalar::prime_field(1, 6), Err(ScalarError::NotPrime(6)));
    }

    #[test]
    fn division_by_zero_rejected() {
        let a = Scalar::rational(1, 1).unwrap();
        let z = Scalar::rational(0, 1).unwrap();
        assert_eq!(a.div(&z), Err(ScalarError::DivisionByZero));
        assert_eq!(z.inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn fermat_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            for v in 0..p {
                let x = Scalar::prime_field(v as i64, p).unwrap();
                assert_eq!(x.pow(p), x, "x^p = x must hold in F_{p}");
            }
        }
    }
}
