//! Multivariate gcd by primitive-part recursion: treat the last occurring
//! variable as univariate over the rational function field in the rest,
//! extract contents, and recurse. No Groebner machinery; the polynomials in
//! scope here are tiny.

use crate::field::{FieldArith, FunctionField};
use crate::poly::multi::{Monomial, MultiPoly};
use crate::poly::ratfunc::RatFunc;
use crate::poly::uni::UniPoly;
use std::collections::BTreeMap;

/// View `p` as univariate in variable `v`, coefficients in the function
/// field over the remaining variables (kept in the same ambient arity).
pub fn poly_to_uni(p: &MultiPoly, v: usize) -> UniPoly<FunctionField> {
    let field = FunctionField::new(p.base(), p.vars().clone());
    let mut buckets: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.0[v];
        let mut rest = m.clone();
        rest.0[v] = 0;
        let entry = buckets
            .entry(e)
            .or_insert_with(|| MultiPoly::zero(p.base(), p.vars().clone()));
        *entry = entry
            .add(&MultiPoly::monomial_term(
                p.base(),
                p.vars().clone(),
                rest,
                c.clone(),
            ))
            .expect("same ambient");
    }
    let deg = buckets.keys().next_back().copied().unwrap_or(0) as usize;
    let mut coeffs = vec![field.zero(); deg + 1];
    for (e, poly) in buckets {
        coeffs[e as usize] = RatFunc::from_poly(poly);
    }
    UniPoly::new(field, coeffs)
}

/// Inverse of [`poly_to_uni`] after denominators have been cleared.
pub fn uni_to_poly(f: &UniPoly<FunctionField>, v: usize) -> MultiPoly {
    let base = f.field.base;
    let vars = f.field.vars.clone();
    let mut acc = MultiPoly::zero(base, vars.clone());
    for (i, c) in f.coeffs().iter().enumerate() {
        assert!(c.is_polynomial(), "denominators must be cleared first");
        let den = c.den().constant_value().expect("constant denominator");
        let num = c.num().mul_scalar(&den.inv().expect("nonzero"));
        let mut xi = vec![0u32; vars.len()];
        xi[v] = i as u32;
        let shift = MultiPoly::monomial_term(base, vars.clone(), Monomial(xi), base.one());
        acc = acc
            .add(&num.mul(&shift).expect("same ambient"))
            .expect("same ambient");
    }
    acc
}

fn coefficients_wrt(p: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let mut buckets: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.0[v];
        let mut rest = m.clone();
        rest.0[v] = 0;
        let entry = buckets
            .entry(e)
            .or_insert_with(|| MultiPoly::zero(p.base(), p.vars().clone()));
        *entry = entry
            .add(&MultiPoly::monomial_term(
                p.base(),
                p.vars().clone(),
                rest,
                c.clone(),
            ))
            .expect("same ambient");
    }
    buckets.into_values().collect()
}

fn content_wrt(p: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = coefficients_wrt(p, v);
    let mut acc = MultiPoly::zero(p.base(), p.vars().clone());
    for c in coeffs {
        acc = multi_gcd(&acc, &c);
    }
    acc
}

/// Normalized gcd (graded-lex leading coefficient 1). `gcd(0, 0) = 0`.
pub fn multi_gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let pivot = f
        .occurring_vars()
        .into_iter()
        .chain(g.occurring_vars())
        .max();
    let v = match pivot {
        None => return MultiPoly::one(f.base(), f.vars().clone()),
        Some(v) => v,
    };

    let cont_f = content_wrt(f, v);
    let cont_g = content_wrt(g, v);
    let pp_f = f.exact_div(&cont_f).expect("content divides");
    let pp_g = g.exact_div(&cont_g).expect("content divides");

    let h = poly_to_uni(&pp_f, v)
        .gcd(&poly_to_uni(&pp_g, v))
        .expect("not both zero");

    // Clear denominators, then strip the content that clearing introduced.
    let mut den = MultiPoly::one(f.base(), f.vars().clone());
    for c in h.coeffs() {
        den = den.mul(c.den()).expect("same ambient");
    }
    let cleared = UniPoly::new(
        h.field.clone(),
        h.coeffs()
            .iter()
            .map(|c| c.mul(&RatFunc::from_poly(den.clone())))
            .collect(),
    );
    let h_poly = uni_to_poly(&cleared, v);
    let pp_h = h_poly
        .exact_div(&content_wrt(&h_poly, v))
        .expect("content divides");

    multi_gcd(&cont_f, &cont_g)
        .mul(&pp_h)
        .expect("same ambient")
        .monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrimeBase;
    use std::sync::Arc;

    fn vars(names: &[&str]) -> Arc<Vec<String>> {
        Arc::new(names.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn monomial_gcd() {
        let vs = vars(&["x", "y"]);
        let b = PrimeBase::Rational;
        let x = MultiPoly::var(b, vs.clone(), 0);
        let y = MultiPoly::var(b, vs.clone(), 1);
        let f = x.pow(2).mul(&y).unwrap();
        let g = x.mul(&y.pow(2)).unwrap();
        assert_eq!(multi_gcd(&f, &g), x.mul(&y).unwrap());
    }

    #[test]
    fn char_two_square() {
        let vs = vars(&["x", "y"]);
        let b = PrimeBase::Prime(2);
        let x = MultiPoly::var(b, vs.clone(), 0);
        let y = MultiPoly::var(b, vs.clone(), 1);
        // x^2 + y^2 = (x + y)^2
        let f = x.pow(2).add(&y.pow(2)).unwrap();
        let g = x.add(&y).unwrap();
        assert_eq!(multi_gcd(&f, &g), g);
    }

    #[test]
    fn difference_of_squares() {
        let vs = vars(&["x", "y"]);
        let b = PrimeBase::Rational;
        let x = MultiPoly::var(b, vs.clone(), 0);
        let y = MultiPoly::var(b, vs.clone(), 1);
        let f = x.pow(2).sub(&y.pow(2)).unwrap();
        let g = x.sub(&y).unwrap();
        assert_eq!(multi_gcd(&f, &g), g);
    }

    #[test]
    fn gcd_zero_conventions() {
        let vs = vars(&["x"]);
        let b = PrimeBase::Rational;
        let z = MultiPoly::zero(b, vs.clone());
        assert!(multi_gcd(&z, &z).is_zero());
        let x = MultiPoly::var(b, vs.clone(), 0);
        assert_eq!(multi_gcd(&z, &x), x);
    }
}
