//! Explicit construction of `K (x)_k L` as a finite-dimensional triangular
//! algebra over `L`, and direct structural analysis: maximal ideals found
//! by factoring the lifted relations stepwise, then nilradical, orthogonal
//! idempotents, local factors, residue fields, nilpotency indices, and
//! embedding dimensions by exact linear algebra over `L`. This is the
//! verification path that runs independently of the rule engine.

use crate::algebra::FiniteAlgebra;
use crate::factor::{sqrt_in_multiquadratic, FactorError};
use crate::field::{FieldArith, FunctionField};
use crate::insep::{express_over_subfield, member, subalgebra_closure, AmbientContext, InsepError};
use crate::linalg::{solve_combination, Subspace};
use crate::poly::ratfunc::RatFunc;
use crate::scalar::PrimeBase;
use crate::tower::TowerField;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub enum TensorError {
    NotAlgebraic(String),
    BaseMismatch(String),
    OracleUnavailable(String),
    AmbientUnavailable(String),
    Internal(String),
    Insep(InsepError),
    Factor(FactorError),
}

impl fmt::Display for TensorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorError::NotAlgebraic(m) => write!(f, "left factor must be finite algebraic: {m}"),
            TensorError::BaseMismatch(m) => write!(f, "factors live over different bases: {m}"),
            TensorError::OracleUnavailable(m) => write!(f, "no factorization oracle covers: {m}"),
            TensorError::AmbientUnavailable(m) => write!(f, "ambient context unavailable: {m}"),
            TensorError::Internal(m) => write!(f, "internal consistency failure: {m}"),
            TensorError::Insep(e) => write!(f, "{e}"),
            TensorError::Factor(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TensorError {}

impl From<InsepError> for TensorError {
    fn from(e: InsepError) -> Self {
        TensorError::Insep(e)
    }
}

impl From<FactorError> for TensorError {
    fn from(e: FactorError) -> Self {
        TensorError::Factor(e)
    }
}

/// One local factor of the decomposed algebra.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub dim_over_l: u64,
    pub residue_degree_over_l: u64,
    pub residue_field: String,
    pub maximal_ideal: Vec<String>,
    pub nilpotency_index: u64,
    pub edim: u64,
    pub is_field: bool,
}

/// Structural summary of `K (x)_k L`.
#[derive(Clone, Debug)]
pub struct TensorAnalysis {
    pub dim_over_l: u64,
    pub factors: Vec<LocalFactor>,
    pub is_reduced: bool,
    pub is_domain: bool,
    pub is_field: bool,
    pub nilradical_dim: u64,
    pub nilradical_basis: Vec<String>,
    pub idempotents: Vec<String>,
    pub verified: bool,
}

impl TensorAnalysis {
    /// Zero-dimensional regularity: every local factor is a field
    /// (embedding dimension 0 = Krull dimension).
    pub fn regular_direct(&self) -> bool {
        self.factors.iter().all(|f| f.edim == 0)
    }
}

/// A maximal-ideal branch under construction during stepwise relation
/// processing.
struct BranchState<T> {
    max_ideal_gens: Vec<Vec<T>>,
    max_ideal_display: Vec<String>,
    residue_degree_over_l: u64,
    residue_desc: String,
}

fn display_elem<F: FieldArith>(
    alg: &FiniteAlgebra<F>,
    field: &F,
    names: &[String],
    v: &[F::Elem],
) -> String {
    let mut parts = Vec::new();
    for (idx, c) in v.iter().enumerate().rev() {
        if field.is_zero(c) {
            continue;
        }
        let exps = alg.exponents_of(idx);
        let mono: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| {
                if e == 1 {
                    names[g].clone()
                } else {
                    format!("{}^{}", names[g], e)
                }
            })
            .collect();
        let cs = field.display(c);
        if mono.is_empty() {
            parts.push(cs);
        } else if field.is_one(c) {
            parts.push(mono.join("*"));
        } else if cs.contains(['+', '-']) && !cs.starts_with('-') {
            parts.push(format!("({})*{}", cs, mono.join("*")));
        } else if cs.contains(['+', ' ']) || cs.starts_with('-') {
            parts.push(format!("({})*{}", cs, mono.join("*")));
        } else {
            parts.push(format!("{}*{}", cs, mono.join("*")));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// The ideal generated by `gens` as a subspace: span of generator times
/// every basis monomial.
fn ideal_subspace<F: FieldArith>(
    alg: &FiniteAlgebra<F>,
    field: &F,
    gens: &[Vec<F::Elem>],
) -> Subspace<F> {
    let mut space = Subspace::new(field.clone(), alg.width());
    for g in gens {
        for b in 0..alg.width() {
            let mut eb = alg.zero_elem();
            eb[b] = field.one();
            space.insert(alg.mul(g, &eb));
        }
    }
    space
}

/// Product of two ideals (given as subspaces with spanning rows).
fn ideal_product<F: FieldArith>(
    alg: &FiniteAlgebra<F>,
    field: &F,
    a: &Subspace<F>,
    b: &Subspace<F>,
) -> Subspace<F> {
    let mut space = Subspace::new(field.clone(), alg.width());
    for x in a.rows() {
        for y in b.rows() {
            space.insert(alg.mul(x, y));
        }
    }
    space
}

fn subspace_sum<F: FieldArith>(
    a: &Subspace<F>,
    b: &Subspace<F>,
    field: &F,
    w: usize,
) -> Subspace<F> {
    let mut out = Subspace::new(field.clone(), w);
    for r in a.rows() {
        out.insert(r.clone());
    }
    for r in b.rows() {
        out.insert(r.clone());
    }
    out
}

/// Turn the branch data into verified local factors and global structure.
fn analyze_branches<F: FieldArith>(
    alg: &FiniteAlgebra<F>,
    field: &F,
    gen_names: &[String],
    branches: Vec<BranchState<F::Elem>>,
) -> Result<TensorAnalysis, TensorError> {
    let width = alg.width();
    let full = {
        let mut s = Subspace::new(field.clone(), width);
        for i in 0..width {
            let mut v = alg.zero_elem();
            v[i] = field.one();
            s.insert(v);
        }
        s
    };

    // maximal ideals, their stable powers, and nilpotency indices
    let mut m_spaces = Vec::new();
    let mut q_spaces = Vec::new();
    let mut nilpotency = Vec::new();
    for br in &branches {
        let m = ideal_subspace(alg, field, &br.max_ideal_gens);
        let mut power = m.clone();
        let mut index = 1u64;
        loop {
            let next = ideal_product(alg, field, &power, &m);
            if next == power {
                break;
            }
            power = next;
            index += 1;
        }
        m_spaces.push(m);
        q_spaces.push(power);
        nilpotency.push(index);
    }

    // local factors
    let mut factors = Vec::new();
    let mut dim_sum = 0u64;
    for (i, br) in branches.iter().enumerate() {
        let dim = (width - q_spaces[i].dim()) as u64;
        dim_sum += dim;
        let residue = (width - m_spaces[i].dim()) as u64;
        if residue != br.residue_degree_over_l {
            return Err(TensorError::Internal(format!(
                "residue degree mismatch: tracked {} vs computed {residue}",
                br.residue_degree_over_l
            )));
        }
        // edim = dim_kappa(m / (m^2 + Q))
        let m2 = ideal_product(alg, field, &m_spaces[i], &m_spaces[i]);
        let m2q = subspace_sum(&m2, &q_spaces[i], field, width);
        let mm = m_spaces[i].dim() as u64 - m2q.dim() as u64;
        if mm % residue != 0 {
            return Err(TensorError::Internal(
                "m/m^2 dimension is not a multiple of the residue degree".into(),
            ));
        }
        let edim = mm / residue;
        let is_field = dim == residue && nilpotency[i] == 1;
        factors.push(LocalFactor {
            dim_over_l: dim,
            residue_degree_over_l: residue,
            residue_field: br.residue_desc.clone(),
            maximal_ideal: br.max_ideal_display.clone(),
            nilpotency_index: nilpotency[i],
            edim,
            is_field,
        });
    }
    if dim_sum != width as u64 {
        return Err(TensorError::Internal(format!(
            "local factor dimensions sum to {dim_sum}, algebra has dimension {width}"
        )));
    }

    // orthogonal idempotents by CRT: e_i = 1 mod Q_i, e_i in every other Q_j
    let mut idempotents: Vec<Vec<F::Elem>> = Vec::new();
    for i in 0..branches.len() {
        let mut c = full.clone();
        for (j, q) in q_spaces.iter().enumerate() {
            if j != i {
                c = c.intersect(q);
            }
        }
        let mut columns: Vec<Vec<F::Elem>> = c.rows().to_vec();
        let split = columns.len();
        columns.extend(q_spaces[i].rows().to_vec());
        let sol = solve_combination(field, &columns, &alg.one_elem())
            .ok_or_else(|| TensorError::Internal("CRT idempotent solve failed".into()))?;
        let mut e = alg.zero_elem();
        for (k, coeff) in sol.iter().take(split).enumerate() {
            let scaled = alg.scale(&c.rows()[k], coeff);
            e = alg.add(&e, &scaled);
        }
        idempotents.push(e);
    }

    // nilradical = intersection of the maximal ideals
    let mut nil = m_spaces[0].clone();
    for m in &m_spaces[1..] {
        nil = nil.intersect(m);
    }

    // re-verify everything by algebra arithmetic, never trusting the
    // construction
    let mut verified = true;
    let mut sum = alg.zero_elem();
    for (i, e) in idempotents.iter().enumerate() {
        sum = alg.add(&sum, e);
        if !alg.equal(&alg.mul(e, e), e) {
            verified = false;
        }
        for f2 in idempotents.iter().skip(i + 1) {
            if !alg.is_zero_elem(&alg.mul(e, f2)) {
                verified = false;
            }
        }
    }
    if !alg.equal(&sum, &alg.one_elem()) {
        verified = false;
    }
    for row in nil.rows() {
        let mut pow2 = row.clone();
        let mut n = 1usize;
        while n < width {
            pow2 = alg.mul(&pow2, &pow2);
            n *= 2;
        }
        if !alg.is_zero_elem(&pow2) {
            verified = false;
        }
    }

    let is_reduced = nil.dim() == 0;
    let is_domain = factors.len() == 1 && factors[0].is_field;
    Ok(TensorAnalysis {
        dim_over_l: width as u64,
        is_reduced,
        is_domain,
        is_field: is_domain,
        nilradical_dim: nil.dim() as u64,
        nilradical_basis: nil
            .rows()
            .iter()
            .map(|r| {
                // scale so the leading monomial has coefficient 1
                let lead = r
                    .iter()
                    .rposition(|c| !field.is_zero(c))
                    .expect("nonzero row");
                let inv = field.inv(&r[lead]).expect("nonzero");
                let scaled = alg.scale(r, &inv);
                display_elem(alg, field, gen_names, &scaled)
            })
            .collect(),
        idempotents: idempotents
            .iter()
            .map(|e| display_elem(alg, field, gen_names, e))
            .collect(),
        factors,
        verified,
    })
}

// ---------------------------------------------------------------------------
// characteristic p, ambient-realized
// ---------------------------------------------------------------------------

/// One lifted relation `X^(p^m) = a`, with the ambient images of the
/// generator and of `a`.
#[derive(Clone, Debug)]
pub struct CharPRelation {
    pub name: String,
    pub m: u32,
    pub a_image: RatFunc,
    pub gen_image: RatFunc,
}

/// Everything needed to build `K (x)_k L` in characteristic p: ambient
/// generator sets for `k` and `L` (with `k`'s generators contained in
/// `L`'s), per-variable pure-power inventories, and `K`'s relations in
/// adjunction order.
#[derive(Clone, Debug)]
pub struct CharPTensorSpec {
    pub p: u64,
    pub ambient_vars: Arc<Vec<String>>,
    pub k_gens: Vec<RatFunc>,
    pub k_inventory: BTreeMap<usize, u32>,
    pub l_gens: Vec<RatFunc>,
    pub l_inventory: BTreeMap<usize, u32>,
    pub relations: Vec<CharPRelation>,
    pub l_desc: String,
    /// abstract transcendentals of `L` set aside by the stripping rule
    pub l_stripped: Vec<String>,
}

fn certified_context(
    p: u64,
    ambient_vars: &Arc<Vec<String>>,
    inventory: &BTreeMap<usize, u32>,
    involved: &[&RatFunc],
) -> Result<Arc<AmbientContext>, TensorError> {
    let mut vars: Vec<usize> = Vec::new();
    for g in involved {
        for v in g.occurring_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.sort_unstable();
    let mut e = 0u32;
    for v in &vars {
        match inventory.get(v) {
            Some(ev) => e = e.max(*ev),
            None => {
                return Err(TensorError::AmbientUnavailable(format!(
                    "no pure power of `{}` among the generators",
                    ambient_vars[*v]
                )))
            }
        }
    }
    let names = Arc::new(
        vars.iter()
            .map(|&v| ambient_vars[v].clone())
            .collect::<Vec<_>>(),
    );
    AmbientContext::new(p, e, names).map_err(TensorError::Insep)
}

/// Build and decompose the char-p tensor algebra.
pub fn build_charp_tensor(
    spec: &CharPTensorSpec,
) -> Result<(FiniteAlgebra<FunctionField>, Vec<String>, TensorAnalysis), TensorError> {
    // context for all L-side computations (kappa chains contain L)
    let mut involved: Vec<&RatFunc> = spec.l_gens.iter().collect();
    for r in &spec.relations {
        involved.push(&r.a_image);
        involved.push(&r.gen_image);
    }
    let l_ctx = certified_context(spec.p, &spec.ambient_vars, &spec.l_inventory, &involved)?;
    let l_basis = subalgebra_closure(&l_ctx, &spec.l_gens)?;

    // context for expressing relation constants over k (k's own inventory;
    // only k-side variables are involved)
    let mut k_involved: Vec<&RatFunc> = spec.k_gens.iter().collect();
    for r in &spec.relations {
        k_involved.push(&r.a_image);
        k_involved.push(&r.gen_image);
    }
    let k_ctx = certified_context(spec.p, &spec.ambient_vars, &spec.k_inventory, &k_involved)?;
    let k_basis = subalgebra_closure(&k_ctx, &spec.k_gens)?;

    let coeff = l_ctx.coeff_field().clone();
    let mut alg = FiniteAlgebra::trivial(coeff.clone());
    let xname = |i: usize| {
        if spec.relations.len() == 1 {
            "X".to_string()
        } else {
            format!("X{}", i + 1)
        }
    };
    let mut gen_names: Vec<String> = Vec::new();

    // module monomials of the K-tower below the current relation, as
    // ambient images and as algebra elements
    let mut module_imgs: Vec<RatFunc> =
        vec![RatFunc::one(PrimeBase::Prime(spec.p), l_ctx.vars.clone())];
    let mut prev_imgs: Vec<(RatFunc, u64)> = Vec::new(); // (gen image, step degree)

    for rel in &spec.relations {
        let d = (spec.p).pow(rel.m);
        // express a over k as a k-combination of the module monomials
        let a_in_kctx = rel.a_image.extend_vars(k_ctx.vars.clone()).map_err(|_| {
            TensorError::AmbientUnavailable("relation constant outside k-context".into())
        })?;
        let module_in_kctx: Vec<RatFunc> = module_imgs
            .iter()
            .map(|g| {
                g.extend_vars(k_ctx.vars.clone()).map_err(|_| {
                    TensorError::AmbientUnavailable("module monomial outside k-context".into())
                })
            })
            .collect::<Result<_, _>>()?;
        let lambda =
            express_over_subfield(&a_in_kctx, &k_basis, &module_in_kctx)?.ok_or_else(|| {
                TensorError::Internal(format!(
                    "relation constant {} is not in the subfield tower below it",
                    rel.a_image
                ))
            })?;
        // rewrite vector: xi^d = sum lambda_w * (monomial w), at exponent 0
        // in the new generator
        let mut rewrite = vec![coeff.zero(); alg.width() * d as usize];
        for (w, lam) in lambda.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            let lam = lam.extend_vars(l_ctx.vars.clone()).map_err(|_| {
                TensorError::AmbientUnavailable("coefficient outside context".into())
            })?;
            rewrite[w] = lam;
        }
        alg = alg.extend(d, rewrite);
        gen_names.push(xname(gen_names.len()));
        // extend the module monomial list
        let mut next = Vec::with_capacity(module_imgs.len() * d as usize);
        for e in 0..d {
            for g in &module_imgs {
                next.push(
                    g.mul(
                        &rel.gen_image
                            .pow(e as u32)
                            .extend_vars(g.vars().clone())
                            .map_err(|_| {
                                TensorError::AmbientUnavailable("image outside context".into())
                            })?,
                    ),
                );
            }
        }
        module_imgs = next;
        prev_imgs.push((rel.gen_image.clone(), d));
    }

    // single maximal ideal chain: purely inseparable relations never split
    let mut kappa_gens = spec.l_gens.clone();
    let mut kappa_basis = l_basis.clone();
    let mut adjoined: Vec<(RatFunc, u64)> = Vec::new(); // residue gens with degrees
    let mut max_ideal_gens: Vec<Vec<RatFunc>> = Vec::new();
    let mut max_ideal_display: Vec<String> = Vec::new();
    let mut residue_degree = 1u64;

    for (t, rel) in spec.relations.iter().enumerate() {
        // largest r <= m with a^(1/p^r) in kappa
        let mut roots = vec![rel.a_image.clone()];
        for _ in 0..rel.m {
            match roots.last().expect("nonempty").pth_root() {
                Some(r) => roots.push(r),
                None => break,
            }
        }
        let mut r = 0u32;
        for s in (1..roots.len()).rev() {
            let cand = roots[s]
                .extend_vars(l_ctx.vars.clone())
                .map_err(|_| TensorError::AmbientUnavailable("root outside context".into()))?;
            if member(&cand, &kappa_basis)? {
                r = s as u32;
                break;
            }
        }
        let b = roots[r as usize].clone();
        let q_deg = (spec.p).pow(rel.m - r);

        // lift b into the algebra: express over L with the adjoined
        // residue monomials as module basis
        let mut mod_imgs: Vec<RatFunc> =
            vec![RatFunc::one(PrimeBase::Prime(spec.p), l_ctx.vars.clone())];
        let mut mod_elems: Vec<Vec<usize>> = vec![vec![0; t]]; // exponents per earlier gen
        for (j, (img, _)) in adjoined.iter().enumerate() {
            let deg_j = adjoined[j].1;
            let mut next_imgs = Vec::new();
            let mut next_elems = Vec::new();
            for e in 0..deg_j {
                for (gi, ge) in mod_imgs.iter().zip(&mod_elems) {
                    next_imgs.push(gi.mul(&img.pow(e as u32)));
                    let mut exp = ge.clone();
                    exp[j] = e as usize;
                    next_elems.push(exp);
                }
            }
            mod_imgs = next_imgs;
            mod_elems = next_elems;
        }
        let b_ctx = b
            .extend_vars(l_ctx.vars.clone())
            .map_err(|_| TensorError::AmbientUnavailable("root outside context".into()))?;
        let lambda = express_over_subfield(&b_ctx, &l_basis, &mod_imgs)?
            .ok_or_else(|| TensorError::Internal("residue root escaped its field".into()))?;
        let mut lift = alg.zero_elem();
        for ((lam, exps), _img) in lambda.iter().zip(&mod_elems).zip(&mod_imgs) {
            if lam.is_zero() {
                continue;
            }
            // build the monomial element xi_0^e0 * ... * xi_{t-1}^e_{t-1}
            let mut elem = alg.one_elem();
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let gj = alg.generator(j);
                    elem = alg.mul(&elem, &alg.pow(&gj, e as u64));
                }
            }
            let lam = lam.extend_vars(l_ctx.vars.clone()).map_err(|_| {
                TensorError::AmbientUnavailable("coefficient outside context".into())
            })?;
            lift = alg.add(&lift, &alg.scale(&elem, &lam));
        }
        // maximal ideal gains xi_t^(p^(m-r)) - lift(b)
        let xi = alg.generator(t);
        let q_elem = alg.sub(&alg.pow(&xi, q_deg), &lift);
        if !alg.is_zero_elem(&q_elem) {
            max_ideal_display.push(if q_deg == 1 {
                format!("{} - ({})", xname(t), b)
            } else {
                format!("{}^{} - ({})", xname(t), q_deg, b)
            });
            max_ideal_gens.push(q_elem);
        }
        if q_deg > 1 {
            // residue field extends by the generator image
            kappa_gens.push(rel.gen_image.clone());
            kappa_basis = subalgebra_closure(&l_ctx, &kappa_gens)?;
            adjoined.push((rel.gen_image.clone(), q_deg));
            residue_degree *= q_deg;
        } else {
            adjoined.push((b.clone(), 1));
        }
    }

    let residue_desc = if adjoined.iter().all(|(_, d)| *d == 1) {
        spec.l_desc.clone()
    } else {
        let added: Vec<String> = adjoined
            .iter()
            .filter(|(_, d)| *d > 1)
            .map(|(g, _)| format!("{g}"))
            .collect();
        format!("{}({})", spec.l_desc, added.join(", "))
    };
    let branch = BranchState {
        max_ideal_gens,
        max_ideal_display,
        residue_degree_over_l: residue_degree,
        residue_desc,
    };
    let analysis = analyze_branches(&alg, &coeff, &gen_names, vec![branch])?;
    Ok((alg, gen_names, analysis))
}

// ---------------------------------------------------------------------------
// multiquadratic over Q
// ---------------------------------------------------------------------------

/// A lifted quadratic relation `X^2 = d` from the left factor's tower.
#[derive(Clone, Debug)]
pub struct MqRelation {
    pub name: String,
    pub d: i64,
}

#[derive(Clone, Debug)]
pub struct MqTensorSpec {
    /// square classes generating `L` over `Q`
    pub l_classes: Vec<i64>,
    pub l_trans: Arc<Vec<String>>,
    pub relations: Vec<MqRelation>,
    pub l_desc: String,
}

struct MqBranch {
    classes: Vec<i64>,
    witnesses: BTreeMap<i64, Vec<Vec<RatFunc>>>,
    max_ideal_gens: Vec<Vec<Vec<RatFunc>>>,
    max_ideal_display: Vec<String>,
    residue_degree_over_l: u64,
    added: Vec<i64>,
}

/// Build and decompose the separable multiquadratic tensor algebra over
/// `L`, whose elements are tower elements of `L`'s abstract presentation.
pub fn build_mq_tensor(
    spec: &MqTensorSpec,
    l_field: TowerField,
) -> Result<(FiniteAlgebra<TowerField>, Vec<String>, TensorAnalysis), TensorError> {
    let mut alg: FiniteAlgebra<TowerField> = FiniteAlgebra::trivial(l_field.clone());
    let xname = |i: usize| {
        if spec.relations.len() == 1 {
            "X".to_string()
        } else {
            format!("X{}", i + 1)
        }
    };
    let mut gen_names = Vec::new();
    for (i, rel) in spec.relations.iter().enumerate() {
        let _ = &rel.name;
        let mut rewrite = vec![l_field.zero(); alg.width() * 2];
        rewrite[0] = l_field.from_integer(rel.d);
        alg = alg.extend(2, rewrite);
        gen_names.push(xname(i));
    }

    // witnesses for L's own square classes: the tower generators of L
    let mut base_witnesses: BTreeMap<i64, Vec<Vec<RatFunc>>> = BTreeMap::new();
    for (i, &d) in spec.l_classes.iter().enumerate() {
        // generator i of the L tower algebra, embedded as a scalar of A
        let mut w = l_field.algebra.zero_elem();
        let gen = l_field.algebra.generator(i);
        w.clone_from(&gen);
        base_witnesses.insert(d, vec![alg.scalar_elem(w)][0].clone());
    }

    let mut branches = vec![MqBranch {
        classes: spec.l_classes.clone(),
        witnesses: base_witnesses,
        max_ideal_gens: Vec::new(),
        max_ideal_display: Vec::new(),
        residue_degree_over_l: 1,
        added: Vec::new(),
    }];

    for (t, rel) in spec.relations.iter().enumerate() {
        let d_rat = BigRational::from_integer(BigInt::from(rel.d));
        let mut next = Vec::new();
        for br in branches {
            match sqrt_in_multiquadratic(&d_rat, &br.classes)? {
                Some(s) => {
                    // split: two linear branches xi = +- root
                    let mut root = alg.scalar_elem(l_field.from_integer(0));
                    let mut acc = alg.scalar_elem({
                        let num = s.rational.numer().clone();
                        let den = s.rational.denom().clone();
                        let q = RatFunc::constant(
                            PrimeBase::Rational,
                            spec.l_trans.clone(),
                            crate::scalar::Scalar::Rational(BigRational::new(num, den)),
                        );
                        l_field.algebra.scalar_elem(q)
                    });
                    for dclass in &s.subset {
                        let w = br.witnesses.get(dclass).ok_or_else(|| {
                            TensorError::Internal(format!("missing witness for class {dclass}"))
                        })?;
                        acc = alg.mul(&acc, w);
                    }
                    root = alg.add(&root, &acc);
                    let xi = alg.generator(t);
                    for sign in [1i64, -1] {
                        let signed = if sign == 1 {
                            root.clone()
                        } else {
                            alg.neg(&root)
                        };
                        let gen = alg.sub(&xi, &signed);
                        let mut b2 = MqBranch {
                            classes: br.classes.clone(),
                            witnesses: br.witnesses.clone(),
                            max_ideal_gens: br.max_ideal_gens.clone(),
                            max_ideal_display: br.max_ideal_display.clone(),
                            residue_degree_over_l: br.residue_degree_over_l,
                            added: br.added.clone(),
                        };
                        b2.max_ideal_display.push(format!(
                            "{} {} ({})",
                            xname(t),
                            if sign == 1 { "-" } else { "+" },
                            format_mq_sqrt(&s)
                        ));
                        b2.max_ideal_gens.push(gen);
                        // the generator's image on this branch witnesses d's class
                        next.push(b2);
                    }
                }
                None => {
                    // inert: residue degree doubles, xi witnesses sqrt(d)
                    let mut b2 = br;
                    b2.classes.push(rel.d);
                    b2.witnesses.insert(rel.d, alg.generator(t));
                    b2.residue_degree_over_l *= 2;
                    b2.added.push(rel.d);
                    next.push(b2);
                }
            }
        }
        branches = next;
    }

    let states: Vec<BranchState<Vec<RatFunc>>> = branches
        .into_iter()
        .map(|br| {
            let residue_desc = if br.added.is_empty() {
                spec.l_desc.clone()
            } else {
                format!(
                    "{}({})",
                    spec.l_desc,
                    br.added
                        .iter()
                        .map(|d| format!("sqrt({d})"))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            BranchState {
                max_ideal_gens: br.max_ideal_gens,
                max_ideal_display: br.max_ideal_display,
                residue_degree_over_l: br.residue_degree_over_l,
                residue_desc,
            }
        })
        .collect();
    let analysis = analyze_branches(&alg, &l_field, &gen_names, states)?;
    Ok((alg, gen_names, analysis))
}

fn format_mq_sqrt(s: &crate::factor::MqSqrt) -> String {
    format!("{s}")
}
