//! Dense univariate polynomials over any implemented coefficient field.

use crate::field::FieldArith;
use std::fmt;

/// Degree with an explicit sentinel for the zero polynomial, so nothing ever
/// does arithmetic on a fake `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    NegInf,
    Of(usize),
}

impl Degree {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Of(d) => Some(*d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniError {
    DivisionByZero,
    BothZero,
    ConstantInput,
}

impl fmt::Display for UniError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniError::DivisionByZero => write!(f, "division by the zero polynomial"),
            UniError::BothZero => write!(f, "gcd of two zero polynomials"),
            UniError::ConstantInput => write!(f, "constant polynomial where nonconstant required"),
        }
    }
}

impl std::error::Error for UniError {}

/// Coefficients run from degree 0 upward; the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<F: FieldArith> {
    pub field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: FieldArith> UniPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while let Some(last) = coeffs.last() {
            if field.is_zero(last) {
                coeffs.pop();
            } else {
                break;
            }
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        let c = field.one();
        Self::constant(field, c)
    }

    pub fn x(field: F) -> Self {
        let coeffs = vec![field.zero(), field.one()];
        UniPoly { field, coeffs }
    }

    /// `c * X^e`
    pub fn monomial(field: F, c: F::Elem, e: usize) -> Self {
        if field.is_zero(&c) {
            return Self::zero(field);
        }
        let mut coeffs = vec![field.zero(); e + 1];
        coeffs[e] = c;
        UniPoly { field, coeffs }
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Of(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading()
            .map(|c| self.field.is_one(c))
            .unwrap_or(false)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(&self.coeff(i), &other.coeff(i)));
        }
        Self::new(self.field.clone(), out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        Self::new(self.field.clone(), out)
    }

    pub fn mul_elem(&self, c: &F::Elem) -> Self {
        Self::new(
            self.field.clone(),
            self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn divmod(&self, div: &Self) -> Result<(Self, Self), UniError> {
        if div.is_zero() {
            return Err(UniError::DivisionByZero);
        }
        let dd = div.coeffs.len() - 1;
        let lead_inv = self
            .field
            .inv(div.leading().expect("nonzero divisor"))
            .expect("leading coefficient nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = rem[k].clone();
            if !self.field.is_zero(&c) {
                let q = self.field.mul(&c, &lead_inv);
                for (j, b) in div.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    let t = self.field.mul(&q, b);
                    rem[idx] = self.field.sub(&rem[idx], &t);
                }
                quot[k - dd] = q;
            }
            rem.pop();
        }
        Ok((
            Self::new(self.field.clone(), quot),
            Self::new(self.field.clone(), rem),
        ))
    }

    pub fn rem(&self, div: &Self) -> Result<Self, UniError> {
        Ok(self.divmod(div)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, div: &Self) -> Result<Self, UniError> {
        let (q, r) = self.divmod(div)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(UniError::DivisionByZero)
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero");
                self.mul_elem(&inv)
            }
        }
    }

    /// Monic gcd by the Euclidean remainder sequence with exact coefficient
    /// arithmetic.
    pub fn gcd(&self, other: &Self) -> Result<Self, UniError> {
        if self.is_zero() && other.is_zero() {
            return Err(UniError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.field.clone());
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let n = self.field.from_integer(i as i64);
            out.push(self.field.mul(c, &n));
        }
        Self::new(self.field.clone(), out)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// `f(X^q)`
    pub fn inflate(&self, q: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.field.zero(); (self.coeffs.len() - 1) * q + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * q] = c.clone();
        }
        Self::new(self.field.clone(), out)
    }

    /// Inverse of [`inflate`](Self::inflate): `g` with `f = g(X^q)`, when all
    /// exponents are divisible by `q`.
    pub fn deflate(&self, q: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % q != 0 && !self.field.is_zero(c) {
                return None;
            }
        }
        let out: Vec<_> = self.coeffs.iter().step_by(q).cloned().collect();
        Some(Self::new(self.field.clone(), out))
    }

    /// Write `f(X) = g(X^(p^e))` with `e` maximal. Over characteristic zero
    /// this is `(f, 0)`. For the inputs this engine feeds it (minimal
    /// polynomials), maximality of `e` makes `g` separable.
    pub fn separability_split(&self) -> Result<(Self, u32), UniError> {
        match self.degree() {
            Degree::NegInf | Degree::Of(0) => return Err(UniError::ConstantInput),
            _ => {}
        }
        let p = self.field.characteristic();
        if p == 0 {
            return Ok((self.clone(), 0));
        }
        let mut g = self.clone();
        let mut e = 0u32;
        while let Some(d) = g.deflate(p as usize) {
            match d.degree() {
                Degree::NegInf | Degree::Of(0) => break,
                _ => {
                    g = d;
                    e += 1;
                }
            }
        }
        Ok((g, e))
    }

    /// Is `gcd(f, f') = 1`? The derivative-vanishing case counts as
    /// inseparable for nonlinear polynomials.
    pub fn is_separable(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return matches!(self.degree(), Degree::Of(0) | Degree::Of(1));
        }
        match self.gcd(&d) {
            Ok(g) => matches!(g.degree(), Degree::Of(0)),
            Err(_) => false,
        }
    }

    /// `self^e mod m`, exponent by squaring.
    pub fn pow_mod(&self, e: u128, m: &Self) -> Result<Self, UniError> {
        let mut acc = Self::one(self.field.clone()).rem(m)?;
        let mut b = self.rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m)?;
            }
            b = b.mul(&b).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.display(c);
            let body = match i {
                0 => cs,
                _ => {
                    let xs = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if self.field.is_one(c) {
                        xs
                    } else if cs.contains(['+', '-', ' ']) {
                        format!("({cs})*{xs}")
                    } else {
                        format!("{cs}*{xs}")
                    }
                }
            };
            parts.push(body);
        }
        parts.join(" + ")
    }
}
