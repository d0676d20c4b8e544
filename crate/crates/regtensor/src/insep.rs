//! The purely inseparable computational core. Fix an ambient rational
//! function field `F = F_p(x_1..x_n)` and an exponent `e`; the base field
//! `B0 = F_p(x_1^q,..,x_n^q)` with `q = p^e` makes `F` a `B0`-vector space
//! with monomial basis `{x^a : 0 <= a_i < q}`. Subfields of `F` containing
//! `B0` are exactly the multiplication-closed `B0`-subspaces, so dimension,
//! membership, intersection, and compositum all become exact linear algebra
//! over `B0`.

use crate::field::{FieldArith, FunctionField};
use crate::linalg::{solve_combination, Subspace};
use crate::poly::multi::{Monomial, MultiPoly};
use crate::poly::ratfunc::RatFunc;
use crate::scalar::PrimeBase;
use std::fmt;
use std::sync::Arc;

/// Hard cap on the ambient dimension `q^n`; everything in scope is desk
/// scale.
const MAX_WIDTH: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InsepError {
    ContextMismatch,
    ContextTooLarge { width: u64 },
    NotASubfield,
    InternalInconsistency(String),
}

impl fmt::Display for InsepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InsepError::ContextMismatch => {
                write!(f, "subfields live in different ambient contexts")
            }
            InsepError::ContextTooLarge { width } => {
                write!(
                    f,
                    "ambient dimension {width} exceeds the supported bound {MAX_WIDTH}"
                )
            }
            InsepError::NotASubfield => {
                write!(f, "claimed subfield is not contained in the larger one")
            }
            InsepError::InternalInconsistency(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl std::error::Error for InsepError {}

/// `F_p(x_1..x_n)` together with the exponent `e`, the basis of `F` over
/// `B0`, and the coefficient field used for coordinates.
#[derive(Debug)]
pub struct AmbientContext {
    pub p: u64,
    pub e: u32,
    pub vars: Arc<Vec<String>>,
    /// p^e
    pub q: u64,
    monomials: Vec<Monomial>,
    coeff_field: FunctionField,
}

impl AmbientContext {
    pub fn new(p: u64, e: u32, vars: Arc<Vec<String>>) -> Result<Arc<Self>, InsepError> {
        let q = (p as u128).pow(e) as u64;
        let n = vars.len() as u32;
        let width = (q as u128).pow(n);
        if width > MAX_WIDTH as u128 {
            return Err(InsepError::ContextTooLarge {
                width: width.min(u64::MAX as u128) as u64,
            });
        }
        let width = width as usize;
        let mut monomials = Vec::with_capacity(width);
        for idx in 0..width {
            let mut rest = idx as u64;
            let mut exps = Vec::with_capacity(vars.len());
            for _ in 0..vars.len() {
                exps.push((rest % q) as u32);
                rest /= q;
            }
            monomials.push(Monomial(exps));
        }
        Ok(Arc::new(AmbientContext {
            p,
            e,
            vars: vars.clone(),
            q,
            monomials,
            coeff_field: FunctionField::new(PrimeBase::Prime(p), vars),
        }))
    }

    pub fn width(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn coeff_field(&self) -> &FunctionField {
        &self.coeff_field
    }

    pub fn base(&self) -> PrimeBase {
        PrimeBase::Prime(self.p)
    }

    fn index_of(&self, residues: &[u32]) -> usize {
        let mut idx = 0usize;
        for &r in residues.iter().rev() {
            idx = idx * self.q as usize + r as usize;
        }
        idx
    }

    /// Unique coordinates of `elem` over `B0`: multiply numerator and
    /// denominator by `den^(q-1)` so the denominator lands in `B0`, then
    /// split the numerator by exponent residues mod `q`.
    pub fn decompose(&self, elem: &RatFunc) -> Result<Vec<RatFunc>, InsepError> {
        let elem = elem
            .extend_vars(self.vars.clone())
            .map_err(|_| InsepError::ContextMismatch)?;
        if elem.base() != self.base() {
            return Err(InsepError::ContextMismatch);
        }
        let den_pow = elem.den().pow(self.q as u32 - 1);
        let num = elem.num().mul(&den_pow).expect("same ambient");
        let den_b0 = elem.den().pow(self.q as u32);
        let mut buckets: Vec<MultiPoly> =
            vec![MultiPoly::zero(self.base(), self.vars.clone()); self.width()];
        for (m, c) in num.terms() {
            let mut residue = Vec::with_capacity(m.0.len());
            let mut quotient = Vec::with_capacity(m.0.len());
            for &exp in &m.0 {
                residue.push(exp % self.q as u32);
                quotient.push(exp - exp % self.q as u32);
            }
            let idx = self.index_of(&residue);
            let part = MultiPoly::monomial_term(
                self.base(),
                self.vars.clone(),
                Monomial(quotient),
                c.clone(),
            );
            buckets[idx] = buckets[idx].add(&part).expect("same ambient");
        }
        buckets
            .into_iter()
            .map(|b| RatFunc::new(b, den_b0.clone()).map_err(|_| InsepError::ContextMismatch))
            .collect()
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn recompose(&self, coords: &[RatFunc]) -> RatFunc {
        let mut acc = RatFunc::zero(self.base(), self.vars.clone());
        for (c, m) in coords.iter().zip(&self.monomials) {
            if c.is_zero() {
                continue;
            }
            let mono = RatFunc::from_poly(MultiPoly::monomial_term(
                self.base(),
                self.vars.clone(),
                m.clone(),
                self.base().one(),
            ));
            acc = acc.add(&c.mul(&mono));
        }
        acc
    }
}

impl PartialEq for AmbientContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && *self.vars == *other.vars
    }
}

/// A subfield `B0 <= E <= F` as a canonical reduced row basis over `B0`.
/// The span always contains 1 and is closed under multiplication, so it is a
/// field (a finite-dimensional subalgebra of a field is one).
#[derive(Clone, Debug)]
pub struct SubfieldBasis {
    ctx: Arc<AmbientContext>,
    space: Subspace<FunctionField>,
    /// Representatives spanning the row space, kept for product iteration
    /// and coordinate recovery.
    reps: Vec<RatFunc>,
}

impl PartialEq for SubfieldBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.space == other.space
    }
}

impl SubfieldBasis {
    pub fn ctx(&self) -> &Arc<AmbientContext> {
        &self.ctx
    }

    pub fn dim(&self) -> u64 {
        self.space.dim() as u64
    }

    pub fn space(&self) -> &Subspace<FunctionField> {
        &self.space
    }

    fn from_space(ctx: Arc<AmbientContext>, space: Subspace<FunctionField>) -> Self {
        let reps = space.rows().iter().map(|r| ctx.recompose(r)).collect();
        SubfieldBasis { ctx, space, reps }
    }

    /// The full ambient field `F` as a subfield of itself.
    pub fn full(ctx: Arc<AmbientContext>) -> Self {
        let mut space = Subspace::new(ctx.coeff_field().clone(), ctx.width());
        for i in 0..ctx.width() {
            let mut v = vec![ctx.coeff_field().zero(); ctx.width()];
            v[i] = ctx.coeff_field().one();
            space.insert(v);
        }
        Self::from_space(ctx, space)
    }
}

/// Smallest `B0`-subspace containing 1, `B0`, and all generators, closed
/// under multiplication. Iterates generator products and re-echelonizes
/// until the dimension stabilizes.
pub fn subalgebra_closure(
    ctx: &Arc<AmbientContext>,
    generators: &[RatFunc],
) -> Result<SubfieldBasis, InsepError> {
    let mut space = Subspace::new(ctx.coeff_field().clone(), ctx.width());
    let mut reps: Vec<RatFunc> = Vec::new();
    let one = RatFunc::one(ctx.base(), ctx.vars.clone());
    if space.insert(ctx.decompose(&one)?) {
        reps.push(one);
    }
    let gens: Vec<RatFunc> = generators
        .iter()
        .map(|g| {
            g.extend_vars(ctx.vars.clone())
                .map_err(|_| InsepError::ContextMismatch)
        })
        .collect::<Result<_, _>>()?;
    for g in &gens {
        if space.insert(ctx.decompose(g)?) {
            reps.push(g.clone());
        }
    }
    let mut i = 0usize;
    while i < reps.len() {
        for g in &gens {
            let prod = reps[i].mul(g);
            if space.insert(ctx.decompose(&prod)?) {
                reps.push(prod);
            }
        }
        i += 1;
    }
    Ok(SubfieldBasis {
        ctx: ctx.clone(),
        space,
        reps,
    })
}

/// Exact membership: does `elem`'s coordinate vector lie in the row span?
pub fn member(elem: &RatFunc, basis: &SubfieldBasis) -> Result<bool, InsepError> {
    Ok(basis.space.contains(&basis.ctx.decompose(elem)?))
}

/// Subspace intersection of two subfields sharing a context. Automatically
/// multiplication-closed, hence itself a subfield.
pub fn intersect(a: &SubfieldBasis, b: &SubfieldBasis) -> Result<SubfieldBasis, InsepError> {
    if a.ctx != b.ctx {
        return Err(InsepError::ContextMismatch);
    }
    let space = a.space.intersect(&b.space);
    Ok(SubfieldBasis::from_space(a.ctx.clone(), space))
}

/// `[large : small]` as a quotient of `B0`-dimensions, verifying containment
/// and integrality.
pub fn relative_degree(small: &SubfieldBasis, large: &SubfieldBasis) -> Result<u64, InsepError> {
    if small.ctx != large.ctx {
        return Err(InsepError::ContextMismatch);
    }
    if !small.space.is_subspace_of(&large.space) {
        return Err(InsepError::NotASubfield);
    }
    let (s, l) = (small.dim(), large.dim());
    if s == 0 || l % s != 0 {
        return Err(InsepError::InternalInconsistency(format!(
            "dimension {l} not a multiple of {s}"
        )));
    }
    Ok(l / s)
}

/// Write `target` as a linear combination of `module_basis` with
/// coefficients in the subfield `sub`: solve over `B0` against the products
/// (subfield basis row) x (module basis element). Returns the subfield
/// coefficients in `module_basis` order.
pub fn express_over_subfield(
    target: &RatFunc,
    sub: &SubfieldBasis,
    module_basis: &[RatFunc],
) -> Result<Option<Vec<RatFunc>>, InsepError> {
    let ctx = &sub.ctx;
    let mut columns = Vec::with_capacity(module_basis.len() * sub.reps.len());
    for w in module_basis {
        for rep in &sub.reps {
            columns.push(ctx.decompose(&rep.mul(w))?);
        }
    }
    let target_vec = ctx.decompose(target)?;
    let sol = match solve_combination(ctx.coeff_field(), &columns, &target_vec) {
        None => return Ok(None),
        Some(s) => s,
    };
    let mut out = Vec::with_capacity(module_basis.len());
    for (wi, _) in module_basis.iter().enumerate() {
        let mut acc = RatFunc::zero(ctx.base(), ctx.vars.clone());
        for (ri, rep) in sub.reps.iter().enumerate() {
            let mu = &sol[wi * sub.reps.len() + ri];
            if !mu.is_zero() {
                acc = acc.add(&mu.mul(rep));
            }
        }
        out.push(acc);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfunc;

    fn ctx(p: u64, e: u32, vars: &[&str]) -> Arc<AmbientContext> {
        AmbientContext::new(p, e, Arc::new(vars.iter().map(|s| s.to_string()).collect())).unwrap()
    }

    fn rf(ctx: &AmbientContext, src: &str) -> RatFunc {
        parse_ratfunc(src, ctx.base(), ctx.vars.clone()).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let c = ctx(2, 2, &["x", "y"]);
        // x^2*y sits on the basis monomial x^2*y with coordinate 1
        let v = c.decompose(&rf(&c, "x^2*y")).unwrap();
        for (coord, m) in v.iter().zip(c.monomials()) {
            if m.0 == vec![2, 1] {
                assert!(coord.is_one());
            } else {
                assert!(coord.is_zero());
            }
        }
        // x^5 = x^4 * x
        let v = c.decompose(&rf(&c, "x^5")).unwrap();
        for (coord, m) in v.iter().zip(c.monomials()) {
            if m.0 == vec![1, 0] {
                assert_eq!(coord, &rf(&c, "x^4"));
            } else {
                assert!(coord.is_zero());
            }
        }
        // 1/x = (1/x^4) * x^3
        let v = c.decompose(&rf(&c, "1/x")).unwrap();
        for (coord, m) in v.iter().zip(c.monomials()) {
            if m.0 == vec![3, 0] {
                assert_eq!(coord, &rf(&c, "1/x^4"));
            } else {
                assert!(coord.is_zero());
            }
        }
        // round trip
        for src in ["x^3/y + 1", "(x^2+y^2)/y^2", "x^5*y^7"] {
            let elem = rf(&c, src);
            assert_eq!(c.recompose(&c.decompose(&elem).unwrap()), elem);
        }
    }

    #[test]
    fn closure_examples() {
        // no generators: just B0
        let c = ctx(2, 2, &["x"]);
        let b = subalgebra_closure(&c, &[]).unwrap();
        assert_eq!(b.dim(), 1);

        // {x^2} with p=2, e=2: basis {1, x^2}
        let b = subalgebra_closure(&c, &[rf(&c, "x^2")]).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(member(&rf(&c, "x^2"), &b).unwrap());
        assert!(member(&rf(&c, "x^6"), &b).unwrap());
        assert!(!member(&rf(&c, "x"), &b).unwrap());

        // L = F2(x^4, x^2*(y^2+z), z) has dimension 8 over F2(x^4,y^4,z^4)
        let c3 = ctx(2, 2, &["x", "y", "z"]);
        let l = subalgebra_closure(&c3, &[rf(&c3, "x^4"), rf(&c3, "x^2*(y^2+z)"), rf(&c3, "z")])
            .unwrap();
        assert_eq!(l.dim(), 8);
        // y^4 genuinely lies in L
        assert!(member(&rf(&c3, "y^4"), &l).unwrap());
        assert!(!member(&rf(&c3, "y^2"), &l).unwrap());
    }

    #[test]
    fn membership_examples() {
        let c3 = ctx(2, 2, &["x", "y", "z"]);
        let gens_l = [rf(&c3, "x^4"), rf(&c3, "x^2*(y^2+z)"), rf(&c3, "z")];
        let mut lx2_gens = gens_l.to_vec();
        lx2_gens.push(rf(&c3, "x^2"));
        let lx2 = subalgebra_closure(&c3, &lx2_gens).unwrap();
        // y^2 lies in L(x^2)
        assert!(member(&rf(&c3, "y^2"), &lx2).unwrap());
        assert!(member(&rf(&c3, "1"), &lx2).unwrap());

        // y^2 not in k(x^2) = F2(x^4, y^4)(x^2)
        let kx2 =
            subalgebra_closure(&c3, &[rf(&c3, "x^4"), rf(&c3, "y^4"), rf(&c3, "x^2")]).unwrap();
        assert!(!member(&rf(&c3, "y^2"), &kx2).unwrap());
    }

    #[test]
    fn intersection_examples() {
        // F2(t) and F2(t^2) inside ctx(p=2, e=2, {t}): intersection F2(t^2)
        let c = ctx(2, 2, &["t"]);
        let ft = subalgebra_closure(&c, &[rf(&c, "t")]).unwrap();
        let ft2 = subalgebra_closure(&c, &[rf(&c, "t^2")]).unwrap();
        let meet = intersect(&ft, &ft2).unwrap();
        assert_eq!(meet, ft2);
        assert_eq!(meet.dim(), 2);
        // idempotence
        assert_eq!(intersect(&ft, &ft).unwrap(), ft);
    }

    #[test]
    fn reg7_intersection_is_base() {
        let c3 = ctx(2, 2, &["x", "y", "z"]);
        let k = subalgebra_closure(&c3, &[rf(&c3, "x^4"), rf(&c3, "y^4")]).unwrap();
        let kk = subalgebra_closure(
            &c3,
            &[
                rf(&c3, "x^4"),
                rf(&c3, "y^4"),
                rf(&c3, "x^2"),
                rf(&c3, "y^2"),
            ],
        )
        .unwrap();
        let l = subalgebra_closure(
            &c3,
            &[
                rf(&c3, "x^4"),
                rf(&c3, "y^4"),
                rf(&c3, "x^2*(y^2+z)"),
                rf(&c3, "z"),
            ],
        )
        .unwrap();
        let meet = intersect(&kk, &l).unwrap();
        // K meet L collapses to the lifted base k (dimension 1 over B0)
        assert_eq!(meet.dim(), 1);
        assert_eq!(meet, k);
    }

    #[test]
    fn relative_degrees() {
        let c3 = ctx(2, 2, &["x", "y", "z"]);
        let l = subalgebra_closure(
            &c3,
            &[
                rf(&c3, "x^4"),
                rf(&c3, "y^4"),
                rf(&c3, "x^2*(y^2+z)"),
                rf(&c3, "z"),
            ],
        )
        .unwrap();
        let ls = subalgebra_closure(
            &c3,
            &[
                rf(&c3, "x^4"),
                rf(&c3, "y^4"),
                rf(&c3, "x^2*(y^2+z)"),
                rf(&c3, "z"),
                rf(&c3, "x^2"),
                rf(&c3, "y^2"),
            ],
        )
        .unwrap();
        assert_eq!(ls.dim(), 16);
        assert_eq!(relative_degree(&l, &ls).unwrap(), 2);

        // [k(S):k] in the reduced ambient {x,y}
        let c2 = ctx(2, 2, &["x", "y"]);
        let k = subalgebra_closure(&c2, &[rf(&c2, "x^4"), rf(&c2, "y^4")]).unwrap();
        let ks = subalgebra_closure(
            &c2,
            &[
                rf(&c2, "x^4"),
                rf(&c2, "y^4"),
                rf(&c2, "x^2"),
                rf(&c2, "y^2"),
            ],
        )
        .unwrap();
        assert_eq!(relative_degree(&k, &ks).unwrap(), 4);
        assert_eq!(relative_degree(&k, &k).unwrap(), 1);
        assert!(relative_degree(&ks, &k).is_err());
    }

    #[test]
    fn express_over_smaller_field() {
        // y^4 = (x^2(y^2+z))^2/x^4 + z^2 lies in L; the solver recovers it
        // as an L-combination of {1}
        let c3 = ctx(2, 2, &["x", "y", "z"]);
        let l = subalgebra_closure(
            &c3,
            &[
                rf(&c3, "x^4"),
                rf(&c3, "y^4"),
                rf(&c3, "x^2*(y^2+z)"),
                rf(&c3, "z"),
            ],
        )
        .unwrap();
        let one = rf(&c3, "1");
        let coeffs = express_over_subfield(&rf(&c3, "y^4"), &l, &[one.clone()])
            .unwrap()
            .unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[0], rf(&c3, "y^4"));
        // and something outside has no expression
        assert!(express_over_subfield(&rf(&c3, "y^2"), &l, &[one])
            .unwrap()
            .is_none());
    }
}
