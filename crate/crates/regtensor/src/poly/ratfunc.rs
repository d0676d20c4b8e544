//! Rational functions `num/den` over a prime base field, always reduced
//! (coprime parts, denominator monic under graded lex).

use crate::poly::gcd::multi_gcd;
use crate::poly::multi::{MultiPoly, PolyError};
use crate::scalar::{PrimeBase, Scalar};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFunc, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc {
                num: MultiPoly::zero(den.base(), den.vars().clone()),
                den: MultiPoly::one(den.base(), den.vars().clone()),
            };
        }
        let g = multi_gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.mul_scalar(&inv);
            den = den.mul_scalar(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        let one = MultiPoly::one(p.base(), p.vars().clone());
        RatFunc { num: p, den: one }
    }

    pub fn zero(base: PrimeBase, vars: Arc<Vec<String>>) -> RatFunc {
        Self::from_poly(MultiPoly::zero(base, vars))
    }

    pub fn one(base: PrimeBase, vars: Arc<Vec<String>>) -> RatFunc {
        Self::from_poly(MultiPoly::one(base, vars))
    }

    pub fn constant(base: PrimeBase, vars: Arc<Vec<String>>, c: Scalar) -> RatFunc {
        Self::from_poly(MultiPoly::constant(base, vars, c))
    }

    pub fn var(base: PrimeBase, vars: Arc<Vec<String>>, index: usize) -> RatFunc {
        Self::from_poly(MultiPoly::var(base, vars, index))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn base(&self) -> PrimeBase {
        self.num.base()
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.num.is_constant() && self.den.is_constant() {
            let n = self.num.constant_value()?;
            let d = self.den.constant_value()?;
            return n.div(&d).ok();
        }
        None
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self
            .num
            .mul(&other.den)
            .and_then(|a| other.num.mul(&self.den).and_then(|b| a.add(&b)))
            .expect("compatible operands");
        let den = self.den.mul(&other.den).expect("compatible operands");
        Self::normalized(num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.num).expect("compatible operands");
        let den = self.den.mul(&other.den).expect("compatible operands");
        Self::normalized(num, den)
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// p^e-th power via Frobenius on both parts.
    pub fn power_pe(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.power_pe(e),
            den: self.den.power_pe(e),
        }
    }

    /// A p-th root, when one exists in the same rational function field.
    /// After reduction this is exactly: all exponents in numerator and
    /// denominator divisible by p (prime-field coefficients are automatically
    /// p-th powers).
    pub fn pth_root(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let num = self.num.pth_root()?;
        let den = self.den.pth_root()?;
        Some(Self::normalized(num, den))
    }

    /// p^e-th root, iterated.
    pub fn pe_th_root(&self, e: u32) -> Option<RatFunc> {
        let mut r = self.clone();
        for _ in 0..e {
            r = r.pth_root()?;
        }
        Some(r)
    }

    /// Evaluate at `x_i := x_i^q` for every variable: each exponent scales
    /// by `q`.
    pub fn substitute_power(&self, q: u32) -> RatFunc {
        let scale = |p: &MultiPoly| {
            let mut out = MultiPoly::zero(p.base(), p.vars().clone());
            for (m, c) in p.terms() {
                let m2 = crate::poly::multi::Monomial(m.0.iter().map(|&e| e * q).collect());
                out = out
                    .add(&MultiPoly::monomial_term(
                        p.base(),
                        p.vars().clone(),
                        m2,
                        c.clone(),
                    ))
                    .expect("same ambient");
            }
            out
        };
        Self::normalized(scale(&self.num), scale(&self.den))
    }

    /// Indices of variables occurring in the reduced representation.
    pub fn occurring_vars(&self) -> Vec<usize> {
        let mut v = self.num.occurring_vars();
        for i in self.den.occurring_vars() {
            if !v.contains(&i) {
                v.push(i);
            }
        }
        v.sort_unstable();
        v
    }

    /// Membership in the subfield generated by pure variable powers
    /// `x_i^(powers[i])`. `None` entries mean the variable is not available
    /// at all. Sound and complete because reduced forms of elements of such a
    /// subfield stay inside it.
    pub fn pure_power_member(&self, powers: &[Option<u32>]) -> bool {
        assert_eq!(powers.len(), self.vars().len());
        let ok = |p: &MultiPoly| {
            p.terms().all(|(m, _)| {
                m.0.iter().zip(powers).all(|(&e, q)| match q {
                    None => e == 0,
                    Some(q) => e % q == 0,
                })
            })
        };
        ok(&self.num) && ok(&self.den)
    }

    pub fn extend_vars(&self, new_vars: Arc<Vec<String>>) -> Result<RatFunc, PolyError> {
        Ok(RatFunc {
            num: self.num.extend_vars(new_vars.clone())?,
            den: self.den.extend_vars(new_vars)?,
        })
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, crate::scalar::ScalarError> {
        self.num.eval(point).div(&self.den.eval(point))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_value().map(|c| c.is_one()) == Some(true) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPoly| {
            let s = format!("{p}");
            if p.terms().count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}
