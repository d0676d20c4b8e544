//! Runtime coefficient fields. Algorithms that need exact field arithmetic
//! (polynomial gcd, Gaussian elimination, algebra reductions) are generic
//! over [`FieldArith`]; the instances carry their runtime data (modulus,
//! variable set, tower presentation).

use crate::poly::ratfunc::RatFunc;
use crate::scalar::PrimeBase;
use std::fmt;
use std::sync::Arc;

pub trait FieldArith: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly on zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
    fn display(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_integer(&self, n: i64) -> Self::Elem {
        let mut acc = self.zero();
        let one = self.one();
        let step = if n >= 0 { one.clone() } else { self.neg(&one) };
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &step);
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }
}

/// A rational function field `k(x_1..x_n)` over a prime base; with an empty
/// variable list this is just `Q` or `F_p` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionField {
    pub base: PrimeBase,
    pub vars: Arc<Vec<String>>,
}

impl FunctionField {
    pub fn new(base: PrimeBase, vars: Arc<Vec<String>>) -> Self {
        FunctionField { base, vars }
    }

    pub fn prime(base: PrimeBase) -> Self {
        FunctionField {
            base,
            vars: Arc::new(Vec::new()),
        }
    }

    pub fn var(&self, index: usize) -> RatFunc {
        RatFunc::var(self.base, self.vars.clone(), index)
    }
}

impl FieldArith for FunctionField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero(self.base, self.vars.clone())
    }

    fn one(&self) -> RatFunc {
        RatFunc::one(self.base, self.vars.clone())
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv().ok()
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn display(&self, a: &RatFunc) -> String {
        format!("{a}")
    }

    fn from_integer(&self, n: i64) -> RatFunc {
        RatFunc::constant(self.base, self.vars.clone(), self.base.from_integer(n))
    }
}
