//! Finite-dimensional triangular algebras over a coefficient field:
//! generators `g_0..g_{t-1}` with `g_i^{d_i}` rewritten by a reduction table
//! whose support involves only generators `<= i` (and smaller powers of
//! `g_i`). Field towers and explicit tensor algebras both reduce to this.

use crate::field::FieldArith;
use crate::linalg::solve_combination;

/// Elements are dense coordinate vectors over the monomial basis
/// `{prod g_i^{a_i} : 0 <= a_i < d_i}`, indexed mixed-radix (generator 0
/// fastest).
#[derive(Clone, Debug)]
pub struct FiniteAlgebra<F: FieldArith> {
    pub field: F,
    degrees: Vec<u64>,
    strides: Vec<usize>,
    width: usize,
    /// reductions[i] = coordinates of g_i^{d_i}
    reductions: Vec<Vec<F::Elem>>,
}

impl<F: FieldArith> FiniteAlgebra<F> {
    /// The algebra with no generators: just the coefficient field.
    pub fn trivial(field: F) -> Self {
        FiniteAlgebra {
            field,
            degrees: Vec::new(),
            strides: Vec::new(),
            width: 1,
            reductions: Vec::new(),
        }
    }

    /// Extend by one generator of degree `d` whose `d`-th power rewrites to
    /// `rewrite` (coordinates over the *extended* basis; entries at
    /// exponents of the new generator must stay below `d`).
    pub fn extend(&self, d: u64, rewrite: Vec<F::Elem>) -> Self {
        let width = self.width * d as usize;
        assert_eq!(rewrite.len(), width);
        let mut degrees = self.degrees.clone();
        degrees.push(d);
        let mut strides = self.strides.clone();
        strides.push(self.width);
        let mut reductions: Vec<Vec<F::Elem>> = self
            .reductions
            .iter()
            .map(|r| {
                let mut big = vec![self.field.zero(); width];
                big[..r.len()].clone_from_slice(r);
                big
            })
            .collect();
        reductions.push(rewrite);
        FiniteAlgebra {
            field: self.field.clone(),
            degrees,
            strides,
            width,
            reductions,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn exponents_of(&self, mut index: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degrees.len());
        for &d in &self.degrees {
            out.push((index % d as usize) as u64);
            index /= d as usize;
        }
        out
    }

    pub fn index_of(&self, exps: &[u64]) -> usize {
        let mut idx = 0usize;
        for (i, &e) in exps.iter().enumerate().rev() {
            debug_assert!(e < self.degrees[i]);
            idx = idx * self.degrees[i] as usize + e as usize;
        }
        idx
    }

    pub fn zero_elem(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.width]
    }

    pub fn one_elem(&self) -> Vec<F::Elem> {
        let mut v = self.zero_elem();
        v[0] = self.field.one();
        v
    }

    pub fn scalar_elem(&self, c: F::Elem) -> Vec<F::Elem> {
        let mut v = self.zero_elem();
        v[0] = c;
        v
    }

    pub fn generator(&self, i: usize) -> Vec<F::Elem> {
        let mut exps = vec![0u64; self.degrees.len()];
        exps[i] = 1;
        let mut v = self.zero_elem();
        v[self.index_of(&exps)] = self.field.one();
        v
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().map(|x| self.field.neg(x)).collect()
    }

    pub fn scale(&self, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
        a.iter().map(|x| self.field.mul(x, c)).collect()
    }

    pub fn is_zero_elem(&self, a: &[F::Elem]) -> bool {
        a.iter().all(|x| self.field.is_zero(x))
    }

    pub fn equal(&self, a: &[F::Elem], b: &[F::Elem]) -> bool {
        a.iter().zip(b).all(|(x, y)| x == y)
    }

    /// Rewrite a raw exponent vector (entries may exceed the degree bounds)
    /// into reduced coordinates. Terminates because each rewrite strictly
    /// lowers the exponent of the highest out-of-range generator and never
    /// raises any higher one.
    fn reduce_monomial(&self, exps: &[u64]) -> Vec<F::Elem> {
        let over = (0..exps.len()).rev().find(|&i| exps[i] >= self.degrees[i]);
        let i = match over {
            None => {
                let mut v = self.zero_elem();
                v[self.index_of(exps)] = self.field.one();
                return v;
            }
            Some(i) => i,
        };
        let mut rest = exps.to_vec();
        rest[i] -= self.degrees[i];
        let rest_elem = self.reduce_monomial(&rest);
        self.mul(&rest_elem, &self.reductions[i])
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut acc = self.zero_elem();
        for (ia, ca) in a.iter().enumerate() {
            if self.field.is_zero(ca) {
                continue;
            }
            let ea = self.exponents_of(ia);
            for (ib, cb) in b.iter().enumerate() {
                if self.field.is_zero(cb) {
                    continue;
                }
                let eb = self.exponents_of(ib);
                let sum: Vec<u64> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                let c = self.field.mul(ca, cb);
                let reduced = self.reduce_monomial(&sum);
                for (k, r) in reduced.iter().enumerate() {
                    if !self.field.is_zero(r) {
                        let t = self.field.mul(r, &c);
                        acc[k] = self.field.add(&acc[k], &t);
                    }
                }
            }
        }
        acc
    }

    pub fn pow(&self, a: &[F::Elem], mut e: u64) -> Vec<F::Elem> {
        let mut acc = self.one_elem();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Inverse by solving the regular representation; `None` for
    /// non-units (including zero divisors).
    pub fn inv(&self, a: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if self.is_zero_elem(a) {
            return None;
        }
        let columns: Vec<Vec<F::Elem>> = (0..self.width)
            .map(|j| {
                let mut ej = self.zero_elem();
                ej[j] = self.field.one();
                self.mul(a, &ej)
            })
            .collect();
        let sol = solve_combination(&self.field, &columns, &self.one_elem())?;
        // solve gives x with a*x = 1 read column-wise
        Some(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FunctionField;
    use crate::scalar::PrimeBase;
    use std::sync::Arc;

    #[test]
    fn quadratic_extension_arithmetic() {
        // Q(sqrt 2): g^2 = 2
        let f = FunctionField::prime(PrimeBase::Rational);
        let triv = FiniteAlgebra::trivial(f.clone());
        let mut rew = vec![f.zero(); 2];
        rew[0] = f.from_integer(2);
        let a = triv.extend(2, rew);
        let g = a.generator(0);
        assert_eq!(a.mul(&g, &g), a.scalar_elem(f.from_integer(2)));
        // (1 + g)^2 = 3 + 2g
        let one_plus = a.add(&a.one_elem(), &g);
        let sq = a.mul(&one_plus, &one_plus);
        let mut expect = a.scalar_elem(f.from_integer(3));
        expect[1] = f.from_integer(2);
        assert!(a.equal(&sq, &expect));
        // inverse of g is g/2
        let inv = a.inv(&g).unwrap();
        assert!(a.equal(&a.mul(&g, &inv), &a.one_elem()));
    }

    #[test]
    fn tower_of_two_square_roots() {
        // Q(sqrt 2, sqrt 3); check (sqrt2*sqrt3)^2 = 6
        let f = FunctionField::prime(PrimeBase::Rational);
        let triv = FiniteAlgebra::trivial(f.clone());
        let mut r2 = vec![f.zero(); 2];
        r2[0] = f.from_integer(2);
        let a1 = triv.extend(2, r2);
        let mut r3 = vec![f.zero(); 4];
        r3[0] = f.from_integer(3);
        let a2 = a1.extend(2, r3);
        let s2 = a2.generator(0);
        let s3 = a2.generator(1);
        let prod = a2.mul(&s2, &s3);
        let sq = a2.mul(&prod, &prod);
        assert!(a2.equal(&sq, &a2.scalar_elem(f.from_integer(6))));
        // nontrivial inverse: (sqrt2 + sqrt3)^-1 = sqrt3 - sqrt2
        let s = a2.add(&s2, &s3);
        let inv = a2.inv(&s).unwrap();
        assert!(a2.equal(&a2.mul(&s, &inv), &a2.one_elem()));
        assert!(a2.equal(&inv, &a2.sub(&s3, &s2)));
    }

    #[test]
    fn nilpotent_has_no_inverse() {
        // F_2(t)[X]/(X^2 - t^2): X - t is nilpotent
        let f = FunctionField::new(PrimeBase::Prime(2), Arc::new(vec!["t".to_string()]));
        let t = f.var(0);
        let triv = FiniteAlgebra::trivial(f.clone());
        let mut rew = vec![f.zero(); 2];
        rew[0] = t.mul(&t);
        let a = triv.extend(2, rew);
        let x = a.generator(0);
        let nil = a.sub(&x, &a.scalar_elem(t));
        let sq = a.mul(&nil, &nil);
        assert!(a.is_zero_elem(&sq));
        assert!(a.inv(&nil).is_none());
    }
}
