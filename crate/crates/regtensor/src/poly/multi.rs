//! Multivariate polynomials over a prime base field, kept in canonical form
//! under the graded lexicographic monomial order.

use crate::scalar::{PrimeBase, Scalar};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector, ordered graded-lexicographically: total degree first,
/// then the leftmost differing exponent decides (larger wins).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; `None` when some exponent would go negative.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    ArityMismatch,
    BaseMismatch,
    InexactDivision,
    DivisionByZero,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ArityMismatch => write!(f, "polynomials over different variable sets"),
            PolyError::BaseMismatch => write!(f, "polynomials over different base fields"),
            PolyError::InexactDivision => write!(f, "division leaves a nonzero remainder"),
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
        }
    }
}

impl std::error::Error for PolyError {}

/// A multivariate polynomial. Zero coefficients are never stored, so equal
/// polynomials have identical term maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    base: PrimeBase,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(base: PrimeBase, vars: Arc<Vec<String>>) -> Self {
        MultiPoly {
            base,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(base: PrimeBase, vars: Arc<Vec<String>>, c: Scalar) -> Self {
        assert_eq!(c.base(), base, "coefficient from a different field");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        MultiPoly { base, vars, terms }
    }

    pub fn one(base: PrimeBase, vars: Arc<Vec<String>>) -> Self {
        let one = base.one();
        Self::constant(base, vars, one)
    }

    pub fn var(base: PrimeBase, vars: Arc<Vec<String>>, index: usize) -> Self {
        let mut exps = vec![0u32; vars.len()];
        exps[index] = 1;
        Self::monomial_term(base, vars, Monomial(exps), base.one())
    }

    pub fn monomial_term(base: PrimeBase, vars: Arc<Vec<String>>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { base, vars, terms }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.base.zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    fn check_compat(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.base != other.base {
            return Err(PolyError::BaseMismatch);
        }
        if self.vars != other.vars && *self.vars != *other.vars {
            return Err(PolyError::ArityMismatch);
        }
        Ok(())
    }

    fn insert_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(prev) => {
                let s = prev.add(&c).expect("same field");
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        out.terms = out.terms.into_iter().map(|(m, c)| (m, c.neg())).collect();
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = MultiPoly::zero(self.base, self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(m1.mul(m2), c1.mul(c2).expect("same field"));
            }
        }
        Ok(out)
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.base, self.vars.clone());
        }
        let mut out = self.clone();
        out.terms = out
            .terms
            .into_iter()
            .map(|(m, k)| (m, k.mul(c).expect("same field")))
            .collect();
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.base, self.vars.clone());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&b).expect("same field");
            }
            b = b.mul(&b).expect("same field");
            e >>= 1;
        }
        out
    }

    /// Exact division: errors unless `other` divides `self` with remainder 0.
    /// Leading-term elimination under a monomial order is complete for exact
    /// quotients.
    pub fn exact_div(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.base, self.vars.clone());
        let (lm, lc) = other.leading().expect("nonzero divisor");
        let lm = lm.clone();
        let lc_inv = lc.inv().expect("leading coefficient nonzero");
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero");
            let q_mono = rm.try_div(&lm).ok_or(PolyError::InexactDivision)?;
            let q_coeff = rc.mul(&lc_inv).expect("same field");
            let piece = MultiPoly::monomial_term(self.base, self.vars.clone(), q_mono, q_coeff);
            rem = rem.sub(&piece.mul(other)?)?;
            quot = quot.add(&piece)?;
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.exact_div(self).is_ok()
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.arity());
        let mut acc = self.base.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64)).expect("same field");
                }
            }
            acc = acc.add(&t).expect("same field");
        }
        acc
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(value)?;
        let mut acc = MultiPoly::zero(self.base, self.vars.clone());
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.0[var];
            rest.0[var] = 0;
            let mut term = MultiPoly::monomial_term(self.base, self.vars.clone(), rest, c.clone());
            if e > 0 {
                term = term.mul(&value.pow(e))?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.base, self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let factor = self.base.from_integer(e as i64);
            let coeff = c.mul(&factor).expect("same field");
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            out.insert_term(m2, coeff);
        }
        out
    }

    /// Divide by the leading coefficient so the graded-lex leading term is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                self.mul_scalar(&inv)
            }
        }
    }

    /// p-th root when the characteristic is p and every exponent is divisible
    /// by p. Prime-field coefficients are their own p-th roots.
    pub fn pth_root(&self) -> Option<MultiPoly> {
        let p = self.base.characteristic();
        if p == 0 {
            return None;
        }
        let p32 = p as u32;
        let mut out = MultiPoly::zero(self.base, self.vars.clone());
        for (m, c) in &self.terms {
            if m.0.iter().any(|&e| e % p32 != 0) {
                return None;
            }
            let root = Monomial(m.0.iter().map(|&e| e / p32).collect());
            out.insert_term(root, c.clone());
        }
        Some(out)
    }

    /// Frobenius power: raise to the p^e-th power (freshman's dream keeps the
    /// term count fixed in characteristic p).
    pub fn power_pe(&self, e: u32) -> MultiPoly {
        let p = self.base.characteristic();
        assert!(p > 0);
        let mut q: u64 = 1;
        for _ in 0..e {
            q *= p;
        }
        let mut out = MultiPoly::zero(self.base, self.vars.clone());
        for (m, c) in &self.terms {
            let m2 = Monomial(m.0.iter().map(|&x| x * q as u32).collect());
            out.insert_term(m2, c.pow(q));
        }
        out
    }

    /// Variables that actually occur.
    pub fn occurring_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.arity()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-express over another variable list, which must cover every
    /// variable that actually occurs (unused variables may be dropped).
    pub fn extend_vars(&self, new_vars: Arc<Vec<String>>) -> Result<MultiPoly, PolyError> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::zero(self.base, new_vars.clone());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(PolyError::ArityMismatch),
                }
            }
            out.insert_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if !c.is_one() || m.is_one() {
                parts.push(format!("{c}"));
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    parts.push(self.vars[i].clone());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.vars[i], e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
