//! Presentations of finitely generated field extensions: towers of
//! adjunctions over a prime base, optionally realized inside an ambient
//! rational function field. Each algebraic step carries an irreducibility
//! certificate issued at adjunction time; a tower is classified over any
//! prefix into separable, purely inseparable, separable-then-inseparable,
//! or unsplit shapes.

use crate::algebra::FiniteAlgebra;
use crate::factor::{
    self, binomial_irreducible, factor_finite_field, factor_quadratic, squarefree_part,
    BinomialHost, FactorError, IrreducibilityCert, QuadraticOutcome,
};
use crate::field::{FieldArith, FunctionField};
use crate::insep::{member, subalgebra_closure, AmbientContext, InsepError, SubfieldBasis};
use crate::linalg::{solve_combination, Subspace};
use crate::poly::ratfunc::RatFunc;
use crate::poly::uni::{Degree, UniPoly};
use crate::scalar::{is_prime_u64, PrimeBase};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeValue {
    Finite(u64),
    Infinite,
}

impl DegreeValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            DegreeValue::Finite(d) => Some(*d),
            DegreeValue::Infinite => None,
        }
    }
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeValue::Finite(d) => write!(f, "{d}"),
            DegreeValue::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdjoinError {
    ReducibleMinPoly { factor: String },
    UncertifiableIrreducibility(String),
    AlreadyInField(String),
    NameClash(String),
    BadGenerators(String),
    AmbientRequired(String),
    AmbientUnavailable(String),
    NotPrime(u64),
    Factor(FactorError),
    Insep(InsepError),
}

impl fmt::Display for AdjoinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjoinError::ReducibleMinPoly { factor } => {
                write!(f, "minimal polynomial is reducible; factor {factor}")
            }
            AdjoinError::UncertifiableIrreducibility(m) => {
                write!(f, "no oracle can certify irreducibility: {m}")
            }
            AdjoinError::AlreadyInField(m) => write!(f, "element already lies in the field: {m}"),
            AdjoinError::NameClash(n) => write!(f, "generator name `{n}` already in use"),
            AdjoinError::BadGenerators(m) => write!(f, "bad generators: {m}"),
            AdjoinError::AmbientRequired(m) => write!(f, "ambient presentation required: {m}"),
            AdjoinError::AmbientUnavailable(m) => write!(f, "ambient context unavailable: {m}"),
            AdjoinError::NotPrime(p) => write!(f, "{p} is not prime"),
            AdjoinError::Factor(e) => write!(f, "{e}"),
            AdjoinError::Insep(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AdjoinError {}

impl From<FactorError> for AdjoinError {
    fn from(e: FactorError) -> Self {
        AdjoinError::Factor(e)
    }
}

impl From<InsepError> for AdjoinError {
    fn from(e: InsepError) -> Self {
        AdjoinError::Insep(e)
    }
}

/// Ambient realization data: the base subfield of `F_p(vars)` is generated
/// by pure powers of distinct variables, which is what certifies that the
/// p-power base field `B0` of any working context sits inside it.
#[derive(Clone, Debug)]
pub struct AmbientSpec {
    pub vars: Arc<Vec<String>>,
    pub base_gens: Vec<RatFunc>,
}

#[derive(Clone, Debug)]
pub enum StepKind {
    /// A fresh indeterminate (image `None`), or an ambient element whose
    /// transcendence is certified by the new-variable rule.
    Transcendental { image: Option<RatFunc> },
    /// Ambient element `g` with minimal `m >= 1` such that `g^(p^m)` lies
    /// in the field below; minimal polynomial `X^(p^m) - g^(p^m)`.
    AmbientInsep {
        image: RatFunc,
        m: u32,
        a_image: RatFunc,
        cert: IrreducibilityCert,
    },
    /// Abstract root with a minimal polynomial over the rational function
    /// field in the transcendentals adjoined so far.
    Root {
        minpoly: UniPoly<FunctionField>,
        separable: bool,
        insep_m: Option<u32>,
        /// squarefree class when this is a quadratic step over `Q`
        sqrt_class: Option<i64>,
        cert: IrreducibilityCert,
    },
}

#[derive(Clone, Debug)]
pub struct Step {
    pub name: String,
    pub kind: StepKind,
}

/// Shapes a tower can certify over a prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileShape {
    SeparableOnly,
    InsepOnly,
    SeparableThenInsep,
    Unsplit,
}

impl ProfileShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileShape::SeparableOnly => "separable_only",
            ProfileShape::InsepOnly => "insep_only",
            ProfileShape::SeparableThenInsep => "separable_then_insep",
            ProfileShape::Unsplit => "unsplit",
        }
    }
}

/// A purely inseparable generator with its binomial data over the profile
/// base: minimal polynomial `X^(p^m) - a` with `a` in the base.
#[derive(Clone, Debug)]
pub struct InsepGen {
    pub name: String,
    pub step_index: usize,
    pub m: u32,
    pub a_display: String,
    /// ambient image of the generator, when the tower is ambient-backed
    pub image: Option<RatFunc>,
    /// ambient image of `a = g^(p^m)`
    pub a_image: Option<RatFunc>,
    /// `a` as an element of the abstract rational function base
    pub a_base: Option<RatFunc>,
}

#[derive(Clone, Debug)]
pub struct SeparabilityProfile {
    pub shape: ProfileShape,
    pub separable_degree: DegreeValue,
    pub insep_exponent: u32,
    pub insep_gens: Vec<InsepGen>,
    pub notes: Vec<String>,
}

impl SeparabilityProfile {
    fn unsplit(note: impl Into<String>) -> Self {
        SeparabilityProfile {
            shape: ProfileShape::Unsplit,
            separable_degree: DegreeValue::Finite(1),
            insep_exponent: 0,
            insep_gens: Vec::new(),
            notes: vec![note.into()],
        }
    }
}

/// A finitely presented extension of a prime base field.
#[derive(Clone, Debug)]
pub struct FieldTower {
    pub id: u64,
    /// Binding this tower was adjoined from: (id, its step count).
    pub parent: Option<(u64, usize)>,
    base: PrimeBase,
    ambient: Option<AmbientSpec>,
    steps: Vec<Step>,
}

/// What to adjoin.
#[derive(Clone, Debug)]
pub enum Adjunction {
    /// fresh abstract indeterminate
    Transcendental { name: String },
    /// ambient element certified transcendental by the new-variable rule
    AmbientTranscendental { expr: RatFunc },
    /// ambient element, classified purely inseparable over the field below
    AmbientInsep { expr: RatFunc },
    /// named root of a minimal polynomial over the current rational
    /// function base
    Root {
        name: String,
        minpoly: UniPoly<FunctionField>,
    },
    /// multiquadratic step over Q; redundant generators are skipped
    Sqrt { d: i64 },
}

impl FieldTower {
    pub fn rational() -> FieldTower {
        FieldTower {
            id: fresh_id(),
            parent: None,
            base: PrimeBase::Rational,
            ambient: None,
            steps: Vec::new(),
        }
    }

    pub fn prime(p: u64) -> Result<FieldTower, AdjoinError> {
        if !is_prime_u64(p) {
            return Err(AdjoinError::NotPrime(p));
        }
        Ok(FieldTower {
            id: fresh_id(),
            parent: None,
            base: PrimeBase::Prime(p),
            ambient: None,
            steps: Vec::new(),
        })
    }

    /// A subfield of the ambient `F_p(vars)` generated by pure powers
    /// `x_i^(p^(e_i))` of distinct variables.
    pub fn ambient_base(
        p: u64,
        vars: Arc<Vec<String>>,
        gens: Vec<RatFunc>,
    ) -> Result<FieldTower, AdjoinError> {
        if !is_prime_u64(p) {
            return Err(AdjoinError::NotPrime(p));
        }
        let mut seen: Vec<usize> = Vec::new();
        for g in &gens {
            match pure_power_of(g, p) {
                Some((var, _)) => {
                    if seen.contains(&var) {
                        return Err(AdjoinError::BadGenerators(format!(
                            "two base generators involve the same variable `{}`",
                            vars[var]
                        )));
                    }
                    seen.push(var);
                }
                None => {
                    return Err(AdjoinError::BadGenerators(format!(
                        "base generator {g} is not a pure p-power of a single variable"
                    )))
                }
            }
        }
        Ok(FieldTower {
            id: fresh_id(),
            parent: None,
            base: PrimeBase::Prime(p),
            ambient: Some(AmbientSpec {
                vars,
                base_gens: gens,
            }),
            steps: Vec::new(),
        })
    }

    /// Clone as a new binding extending `self`.
    pub fn derive(&self) -> FieldTower {
        let mut t = self.clone();
        t.parent = Some((self.id, self.steps.len()));
        t.id = fresh_id();
        t
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn ambient(&self) -> Option<&AmbientSpec> {
        self.ambient.as_ref()
    }

    /// Names of abstract transcendental steps, the variable set of the
    /// tower's rational function base.
    pub fn abstract_trans_vars(&self) -> Arc<Vec<String>> {
        Arc::new(
            self.steps
                .iter()
                .filter(|s| matches!(s.kind, StepKind::Transcendental { image: None }))
                .map(|s| s.name.clone())
                .collect(),
        )
    }

    pub fn function_base(&self) -> FunctionField {
        FunctionField::new(self.base, self.abstract_trans_vars())
    }

    pub fn step_degree(&self, i: usize) -> Option<u64> {
        match &self.steps[i].kind {
            StepKind::Transcendental { .. } => None,
            StepKind::AmbientInsep { m, .. } => Some(self.characteristic().pow(*m)),
            StepKind::Root { minpoly, .. } => minpoly.degree().finite().map(|d| d as u64),
        }
    }

    pub fn degree_over(&self, prefix: usize) -> DegreeValue {
        let mut acc = 1u64;
        for i in prefix..self.steps.len() {
            match self.step_degree(i) {
                None => return DegreeValue::Infinite,
                Some(d) => acc *= d,
            }
        }
        DegreeValue::Finite(acc)
    }

    pub fn td_over(&self, prefix: usize) -> u64 {
        self.steps[prefix..]
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Transcendental { .. }))
            .count() as u64
    }

    /// Ambient generators of the prefix field: declared base generators
    /// plus step images. `None` when some prefix step has no image.
    pub fn ambient_gens_up_to(&self, prefix: usize) -> Option<Vec<RatFunc>> {
        let spec = self.ambient.as_ref()?;
        let mut out = spec.base_gens.clone();
        for s in &self.steps[..prefix] {
            match &s.kind {
                StepKind::Transcendental { image: Some(img) } => out.push(img.clone()),
                StepKind::Transcendental { image: None } => return None,
                StepKind::AmbientInsep { image, .. } => out.push(image.clone()),
                StepKind::Root { .. } => return None,
            }
        }
        Some(out)
    }

    /// Ambient generators ignoring abstract transcendental steps (which
    /// contribute nothing to p-power degrees; see the engine's stripping
    /// rule).
    pub fn ambient_gens_stripped(&self) -> Option<Vec<RatFunc>> {
        let spec = self.ambient.as_ref()?;
        let mut out = spec.base_gens.clone();
        for s in &self.steps {
            match &s.kind {
                StepKind::Transcendental { image: Some(img) } => out.push(img.clone()),
                StepKind::Transcendental { image: None } => {}
                StepKind::AmbientInsep { image, .. } => out.push(image.clone()),
                StepKind::Root { .. } => return None,
            }
        }
        Some(out)
    }

    pub fn has_abstract_trans(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.kind, StepKind::Transcendental { image: None }))
    }

    /// Per ambient variable, the least `e` with `x^(p^e)` visibly generated
    /// at or below the prefix. This is the soundness certificate for
    /// choosing a context base `B0` inside the field.
    pub fn pure_power_inventory_up_to(&self, prefix: usize) -> BTreeMap<usize, u32> {
        let mut inv: BTreeMap<usize, u32> = BTreeMap::new();
        let spec = match &self.ambient {
            None => return inv,
            Some(s) => s,
        };
        let _ = spec;
        let p = self.characteristic();
        let mut note = |g: &RatFunc| {
            if let Some((var, e)) = pure_power_of(g, p) {
                inv.entry(var)
                    .and_modify(|old| *old = (*old).min(e))
                    .or_insert(e);
            }
        };
        for g in &self.ambient.as_ref().expect("checked").base_gens {
            note(g);
        }
        for s in &self.steps[..prefix] {
            match &s.kind {
                StepKind::Transcendental { image: Some(img) } => note(img),
                StepKind::AmbientInsep { image, .. } => note(image),
                _ => {}
            }
        }
        inv
    }

    /// Square-class generators when this is a multiquadratic tower over
    /// `Q` (transcendentals allowed; they add no new rational squares).
    pub fn mq_gens(&self) -> Option<Vec<i64>> {
        if self.base != PrimeBase::Rational {
            return None;
        }
        let mut out = Vec::new();
        for s in &self.steps {
            match &s.kind {
                StepKind::Transcendental { .. } => {}
                StepKind::Root {
                    sqrt_class: Some(d),
                    ..
                } => out.push(*d),
                _ => return None,
            }
        }
        Some(out)
    }

    fn names_in_use(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn adjoin(&self, adj: Adjunction) -> Result<FieldTower, AdjoinError> {
        match adj {
            Adjunction::Transcendental { name } => {
                if self.names_in_use().contains(&name.as_str()) {
                    return Err(AdjoinError::NameClash(name));
                }
                let mut t = self.clone();
                t.steps.push(Step {
                    name,
                    kind: StepKind::Transcendental { image: None },
                });
                Ok(t)
            }
            Adjunction::AmbientTranscendental { expr } => self.adjoin_ambient_trans(expr),
            Adjunction::AmbientInsep { expr } => self.adjoin_ambient_insep(expr),
            Adjunction::Root { name, minpoly } => self.adjoin_root(name, minpoly),
            Adjunction::Sqrt { d } => self.adjoin_sqrt(d),
        }
    }

    fn adjoin_ambient_trans(&self, expr: RatFunc) -> Result<FieldTower, AdjoinError> {
        let spec = self
            .ambient
            .as_ref()
            .ok_or_else(|| AdjoinError::AmbientRequired("transcendental ambient element".into()))?;
        let _ = spec;
        // new-variable rule: the expression must involve a variable that no
        // earlier generator touches
        let mut used: Vec<usize> = Vec::new();
        {
            let mut collect = |g: &RatFunc| used.extend(g.occurring_vars());
            for g in &self.ambient.as_ref().expect("checked").base_gens {
                collect(g);
            }
            for s in &self.steps {
                match &s.kind {
                    StepKind::Transcendental { image: Some(img) } => collect(img),
                    StepKind::AmbientInsep { image, .. } => collect(image),
                    _ => {}
                }
            }
        }
        let fresh = expr
            .occurring_vars()
            .into_iter()
            .any(|v| !used.contains(&v));
        if !fresh {
            return Err(AdjoinError::UncertifiableIrreducibility(format!(
                "cannot certify transcendence of {expr}: no fresh ambient variable; \
                 adjoin variables before expressions that use them"
            )));
        }
        let mut t = self.clone();
        t.steps.push(Step {
            name: format!("{expr}"),
            kind: StepKind::Transcendental { image: Some(expr) },
        });
        Ok(t)
    }

    /// Ambient closure of the whole tower so far, in a context certified by
    /// its own pure-power inventory.
    fn closure_of_self(
        &self,
        extra: &[RatFunc],
    ) -> Result<(Arc<AmbientContext>, SubfieldBasis), AdjoinError> {
        let gens = self.ambient_gens_up_to(self.steps.len()).ok_or_else(|| {
            AdjoinError::AmbientUnavailable(
                "tower mixes abstract steps with ambient computations".into(),
            )
        })?;
        let (ctx, basis) = closure_in_certified_context(
            self.characteristic(),
            &self.ambient.as_ref().expect("ambient checked").vars,
            &gens,
            &self.pure_power_inventory_up_to(self.steps.len()),
            extra,
        )?;
        Ok((ctx, basis))
    }

    fn adjoin_ambient_insep(&self, expr: RatFunc) -> Result<FieldTower, AdjoinError> {
        let p = self.characteristic();
        if p == 0 {
            return Err(AdjoinError::UncertifiableIrreducibility(
                "inseparable adjunction needs positive characteristic".into(),
            ));
        }
        if self.ambient.is_none() {
            return Err(AdjoinError::AmbientRequired(
                "inseparable ambient element".into(),
            ));
        }
        let (_ctx, basis) = self.closure_of_self(std::slice::from_ref(&expr))?;
        // minimal m with expr^(p^m) in the field; m <= e always because
        // expr^(p^e) lands in B0
        let mut power = expr.clone();
        let mut m = 0u32;
        loop {
            if member(&power, &basis)? {
                break;
            }
            power = power.power_pe(1);
            m += 1;
        }
        if m == 0 {
            return Err(AdjoinError::AlreadyInField(format!("{expr}")));
        }
        let a_image = power;
        let (irr, cert, _) = binomial_irreducible(p, m, &a_image, BinomialHost::Subfield(&basis))?;
        if !irr {
            // cannot happen with minimal m: the p-th root of a is the
            // previous power, which membership just rejected
            return Err(AdjoinError::ReducibleMinPoly {
                factor: format!("X^{} - {}", p.pow(m - 1), expr),
            });
        }
        let mut t = self.clone();
        t.steps.push(Step {
            name: format!("{expr}"),
            kind: StepKind::AmbientInsep {
                image: expr,
                m,
                a_image,
                cert,
            },
        });
        Ok(t)
    }

    fn adjoin_root(
        &self,
        name: String,
        minpoly: UniPoly<FunctionField>,
    ) -> Result<FieldTower, AdjoinError> {
        if self.names_in_use().contains(&name.as_str()) {
            return Err(AdjoinError::NameClash(name));
        }
        if self.ambient.is_some() {
            return Err(AdjoinError::UncertifiableIrreducibility(
                "root adjunction over ambient-presented fields is not supported; \
                 use an inseparable ambient adjunction instead"
                    .into(),
            ));
        }
        let minpoly = minpoly.monic();
        let deg = match minpoly.degree() {
            Degree::Of(d) if d >= 2 => d as u64,
            Degree::Of(1) => {
                return Err(AdjoinError::AlreadyInField(format!(
                    "degree-one minimal polynomial {}",
                    minpoly.display_with("X")
                )))
            }
            _ => {
                return Err(AdjoinError::UncertifiableIrreducibility(
                    "minimal polynomial must be nonconstant".into(),
                ))
            }
        };
        let base_field = self.function_base();
        // align coefficient variables with the current transcendental list
        let minpoly = UniPoly::new(
            base_field.clone(),
            minpoly
                .coeffs()
                .iter()
                .map(|c| {
                    c.extend_vars(base_field.vars.clone()).map_err(|_| {
                        AdjoinError::UncertifiableIrreducibility(
                            "minimal polynomial uses unknown generators".into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        );

        let has_alg = self
            .steps
            .iter()
            .any(|s| !matches!(s.kind, StepKind::Transcendental { .. }));
        let constant_coeffs = minpoly.coeffs().iter().all(|c| c.as_constant().is_some());

        if has_alg {
            // only multiquadratic towers support further roots, and only
            // rational quadratics
            let gens = self.mq_gens().ok_or_else(|| {
                AdjoinError::UncertifiableIrreducibility(
                    "no oracle covers roots over this tower".into(),
                )
            })?;
            if deg != 2 || !constant_coeffs {
                return Err(AdjoinError::UncertifiableIrreducibility(
                    "only rational quadratics are supported over multiquadratic towers".into(),
                ));
            }
            return self.adjoin_rational_quadratic(name, &minpoly, &gens);
        }

        match self.base {
            PrimeBase::Rational => {
                if deg == 2 && constant_coeffs {
                    self.adjoin_rational_quadratic(name, &minpoly, &[])
                } else {
                    Err(AdjoinError::UncertifiableIrreducibility(
                        "over Q only quadratic minimal polynomials are oracle-supported".into(),
                    ))
                }
            }
            PrimeBase::Prime(p) => {
                // binomial X^(p^m) - a over the rational function base
                if let Some((m, a)) = binomial_shape(&minpoly, p) {
                    let (irr, cert, root) =
                        binomial_irreducible(p, m, &a, BinomialHost::FunctionField)?;
                    if !irr {
                        let r = root.expect("reducible binomial has a root");
                        let factor = if m == 1 {
                            format!("X - ({r})")
                        } else {
                            format!("X^{} - ({r})", p.pow(m - 1))
                        };
                        return Err(AdjoinError::ReducibleMinPoly { factor });
                    }
                    let mut t = self.clone();
                    t.steps.push(Step {
                        name,
                        kind: StepKind::Root {
                            minpoly,
                            separable: false,
                            insep_m: Some(m),
                            sqrt_class: None,
                            cert,
                        },
                    });
                    return Ok(t);
                }
                if constant_coeffs {
                    // constant-coefficient polynomials: irreducibility over
                    // F_p transfers to F_p(x_1..x_r)
                    let fp = FunctionField::prime(PrimeBase::Prime(p));
                    let f0 = UniPoly::new(
                        fp.clone(),
                        minpoly
                            .coeffs()
                            .iter()
                            .map(|c| {
                                RatFunc::constant(
                                    PrimeBase::Prime(p),
                                    fp.vars.clone(),
                                    c.as_constant().expect("checked constant"),
                                )
                            })
                            .collect(),
                    );
                    let factors = factor_finite_field(&f0);
                    if factors.len() == 1 && factors[0].1 == 1 {
                        let cert = IrreducibilityCert::FiniteFieldFactorization {
                            p,
                            coeffs: f0
                                .coeffs()
                                .iter()
                                .map(|c| match c.as_constant() {
                                    Some(crate::scalar::Scalar::PrimeField { value, .. }) => value,
                                    _ => 0,
                                })
                                .collect(),
                            irreducible: true,
                        };
                        let separable = minpoly.is_separable();
                        let mut t = self.clone();
                        t.steps.push(Step {
                            name,
                            kind: StepKind::Root {
                                minpoly,
                                separable,
                                insep_m: None,
                                sqrt_class: None,
                                cert,
                            },
                        });
                        return Ok(t);
                    }
                    return Err(AdjoinError::ReducibleMinPoly {
                        factor: factors[0].0.display_with("X"),
                    });
                }
                Err(AdjoinError::UncertifiableIrreducibility(
                    "characteristic-p roots must be binomials X^(p^m) - a or have constant \
                     coefficients"
                        .into(),
                ))
            }
        }
    }

    fn adjoin_rational_quadratic(
        &self,
        name: String,
        minpoly: &UniPoly<FunctionField>,
        gens: &[i64],
    ) -> Result<FieldTower, AdjoinError> {
        let b = rational_of(&minpoly.coeff(1));
        let c = rational_of(&minpoly.coeff(0));
        let (b, c) = match (b, c) {
            (Some(b), Some(c)) => (b, c),
            _ => {
                return Err(AdjoinError::UncertifiableIrreducibility(
                    "quadratic coefficients must be rational constants".into(),
                ))
            }
        };
        let (outcome, cert) = factor_quadratic(&b, &c, gens)?;
        match outcome {
            QuadraticOutcome::Split {
                offset,
                scale,
                subset,
            } => {
                let root = if num_traits::Zero::is_zero(&scale) {
                    format!("{offset}")
                } else {
                    let prod: String = subset
                        .iter()
                        .map(|d| format!("sqrt({d})"))
                        .collect::<Vec<_>>()
                        .join("*");
                    if prod.is_empty() {
                        format!("{}", &offset + &scale)
                    } else {
                        format!("{offset} + {scale}*{prod}")
                    }
                };
                Err(AdjoinError::ReducibleMinPoly {
                    factor: format!("X - ({root})"),
                })
            }
            QuadraticOutcome::Irreducible => {
                // the new root generates the same field as sqrt of the
                // discriminant's squarefree core
                let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
                let class = rational_square_class(&disc)?;
                let mut t = self.clone();
                t.steps.push(Step {
                    name,
                    kind: StepKind::Root {
                        minpoly: minpoly.clone(),
                        separable: true,
                        insep_m: None,
                        sqrt_class: Some(class),
                        cert,
                    },
                });
                Ok(t)
            }
        }
    }

    fn adjoin_sqrt(&self, d: i64) -> Result<FieldTower, AdjoinError> {
        if self.base != PrimeBase::Rational {
            return Err(AdjoinError::UncertifiableIrreducibility(
                "sqrt adjunction is for towers over Q".into(),
            ));
        }
        if d == 0 {
            return Err(AdjoinError::BadGenerators("sqrt(0)".into()));
        }
        let gens = self.mq_gens().ok_or_else(|| {
            AdjoinError::UncertifiableIrreducibility(
                "sqrt adjunction needs a multiquadratic tower".into(),
            )
        })?;
        let (_, core) = squarefree_part(d);
        if core == 1 {
            return Ok(self.clone()); // already rational
        }
        let a = BigRational::from_integer(core.into());
        if factor::sqrt_in_multiquadratic(&a, &gens)?.is_some() {
            return Ok(self.clone()); // redundant generator, field unchanged
        }
        let base_field = self.function_base();
        let minpoly = UniPoly::new(
            base_field.clone(),
            vec![
                base_field.from_integer(-core),
                base_field.zero(),
                base_field.one(),
            ],
        );
        let cert = IrreducibilityCert::QuadraticRootSearch {
            discriminant: BigRational::from_integer((4 * core).into()),
            sqrt: None,
            class_gens: gens.clone(),
        };
        let mut t = self.clone();
        t.steps.push(Step {
            name: format!("sqrt({core})"),
            kind: StepKind::Root {
                minpoly,
                separable: true,
                insep_m: None,
                sqrt_class: Some(core),
                cert,
            },
        });
        Ok(t)
    }

    /// Classify the extension over a step prefix.
    pub fn classify_over(&self, prefix: usize) -> SeparabilityProfile {
        assert!(prefix <= self.steps.len());
        let prefix_trans: Vec<&str> = self.steps[..prefix]
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Transcendental { image: None }))
            .map(|s| s.name.as_str())
            .collect();

        #[derive(PartialEq)]
        enum Phase {
            Sep,
            Insep,
        }
        let mut phase = Phase::Sep;
        let mut sep_degree: u64 = 1;
        let mut sep_infinite = false;
        let mut insep_steps: Vec<usize> = Vec::new();
        let mut notes = Vec::new();

        for (i, s) in self.steps.iter().enumerate().skip(prefix) {
            match &s.kind {
                StepKind::Transcendental { .. } => {
                    sep_infinite = true;
                    if phase == Phase::Insep {
                        notes.push(format!(
                            "transcendental step `{}` commutes in front of the inseparable part",
                            s.name
                        ));
                    }
                }
                StepKind::Root {
                    separable: true, ..
                } => {
                    if phase == Phase::Insep {
                        return SeparabilityProfile::unsplit(format!(
                            "separable algebraic step `{}` after an inseparable step",
                            s.name
                        ));
                    }
                    sep_degree *= self.step_degree(i).expect("algebraic");
                }
                StepKind::Root {
                    separable: false,
                    insep_m: Some(_),
                    minpoly,
                    ..
                } => {
                    phase = Phase::Insep;
                    // the binomial constant must live over the prefix
                    // transcendentals for the split to be certified
                    let a = minpoly.coeff(0);
                    let vars = a.occurring_vars();
                    let outside = vars
                        .iter()
                        .any(|&v| !prefix_trans.contains(&minpoly.field.vars[v].as_str()));
                    if outside {
                        return SeparabilityProfile::unsplit(format!(
                            "inseparable step `{}` has its constant outside the base",
                            s.name
                        ));
                    }
                    insep_steps.push(i);
                }
                StepKind::Root {
                    separable: false,
                    insep_m: None,
                    ..
                } => {
                    return SeparabilityProfile::unsplit(format!(
                        "inseparable non-binomial step `{}`",
                        s.name
                    ));
                }
                StepKind::AmbientInsep { .. } => {
                    phase = Phase::Insep;
                    insep_steps.push(i);
                }
            }
        }

        if insep_steps.is_empty() {
            return SeparabilityProfile {
                shape: ProfileShape::SeparableOnly,
                separable_degree: if sep_infinite {
                    DegreeValue::Infinite
                } else {
                    DegreeValue::Finite(sep_degree)
                },
                insep_exponent: 0,
                insep_gens: Vec::new(),
                notes,
            };
        }

        // binomial data over the prefix for every inseparable generator
        let mut gens: Vec<InsepGen> = Vec::new();
        let mut max_m = 0u32;
        let needs_ambient = insep_steps
            .iter()
            .any(|&i| matches!(self.steps[i].kind, StepKind::AmbientInsep { .. }));
        let closure = if needs_ambient {
            match self.prefix_closure(prefix) {
                Ok(cb) => Some(cb),
                Err(e) => {
                    return SeparabilityProfile::unsplit(format!(
                        "cannot realize the base in an ambient context: {e}"
                    ))
                }
            }
        } else {
            None
        };
        let height_bound: u32 = insep_steps
            .iter()
            .map(|&i| match &self.steps[i].kind {
                StepKind::AmbientInsep { m, .. } => *m,
                StepKind::Root {
                    insep_m: Some(m), ..
                } => *m,
                _ => 0,
            })
            .sum();
        for &i in &insep_steps {
            match &self.steps[i].kind {
                StepKind::Root {
                    insep_m: Some(m),
                    minpoly,
                    ..
                } => {
                    let a = minpoly.coeff(0).neg();
                    max_m = max_m.max(*m);
                    gens.push(InsepGen {
                        name: self.steps[i].name.clone(),
                        step_index: i,
                        m: *m,
                        a_display: format!("{a}"),
                        image: None,
                        a_image: None,
                        a_base: Some(a),
                    });
                }
                StepKind::AmbientInsep { image, .. } => {
                    let (_, basis) = closure.as_ref().expect("computed above");
                    let mut power = image.clone();
                    let mut m = 0u32;
                    let found = loop {
                        match member(&power, basis) {
                            Ok(true) => break true,
                            Ok(false) => {
                                if m >= height_bound {
                                    break false;
                                }
                                power = power.power_pe(1);
                                m += 1;
                            }
                            Err(_) => break false,
                        }
                    };
                    if !found || m == 0 {
                        return SeparabilityProfile::unsplit(format!(
                            "generator `{}` is not purely inseparable over the base",
                            self.steps[i].name
                        ));
                    }
                    max_m = max_m.max(m);
                    gens.push(InsepGen {
                        name: self.steps[i].name.clone(),
                        step_index: i,
                        m,
                        a_display: format!("{power}"),
                        image: Some(image.clone()),
                        a_image: Some(power),
                        a_base: None,
                    });
                }
                _ => unreachable!(),
            }
        }

        let shape = if sep_degree == 1 && !sep_infinite {
            ProfileShape::InsepOnly
        } else {
            ProfileShape::SeparableThenInsep
        };
        SeparabilityProfile {
            shape,
            separable_degree: if sep_infinite {
                DegreeValue::Infinite
            } else {
                DegreeValue::Finite(sep_degree)
            },
            insep_exponent: max_m,
            insep_gens: gens,
            notes,
        }
    }

    /// Closure of the prefix field in a context certified by the prefix's
    /// own pure-power inventory, with variables wide enough for the whole
    /// tower's images.
    fn prefix_closure(
        &self,
        prefix: usize,
    ) -> Result<(Arc<AmbientContext>, SubfieldBasis), AdjoinError> {
        let spec = self
            .ambient
            .as_ref()
            .ok_or_else(|| AdjoinError::AmbientRequired("prefix closure".into()))?;
        let prefix_gens = self
            .ambient_gens_up_to(prefix)
            .ok_or_else(|| AdjoinError::AmbientUnavailable("prefix has abstract steps".into()))?;
        let suffix_imgs: Vec<RatFunc> = self.steps[prefix..]
            .iter()
            .filter_map(|s| match &s.kind {
                StepKind::AmbientInsep { image, .. } => Some(image.clone()),
                _ => None,
            })
            .collect();
        closure_in_certified_context(
            self.characteristic(),
            &spec.vars,
            &prefix_gens,
            &self.pure_power_inventory_up_to(prefix),
            &suffix_imgs,
        )
    }

    /// The abstract triangular algebra of the tower (towers whose algebraic
    /// steps are all `Root`s). Generators appear in step order.
    pub fn abstract_algebra(&self) -> Option<AbstractTowerAlgebra> {
        let base_field = self.function_base();
        let mut algebra = FiniteAlgebra::trivial(base_field.clone());
        let mut names = Vec::new();
        let mut step_of_gen = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            match &s.kind {
                StepKind::Transcendental { image: None } => {}
                StepKind::Transcendental { image: Some(_) } => return None,
                StepKind::AmbientInsep { .. } => return None,
                StepKind::Root { minpoly, .. } => {
                    let d = minpoly.degree().finite()? as u64;
                    let mut rewrite = vec![base_field.zero(); algebra.width() * d as usize];
                    for j in 0..d as usize {
                        let c = minpoly.coeff(j);
                        let c = c.extend_vars(base_field.vars.clone()).ok()?;
                        // g^d = -(c_0 + c_1 g + ...)
                        rewrite[j * algebra.width()] = c.neg();
                    }
                    algebra = algebra.extend(d, rewrite);
                    names.push(s.name.clone());
                    step_of_gen.push(i);
                }
            }
        }
        Some(AbstractTowerAlgebra {
            algebra,
            gen_names: names,
            step_of_gen,
            tower: self.clone(),
        })
    }

    pub fn display_presentation(&self) -> String {
        let mut parts = vec![match &self.ambient {
            None => format!("{}", self.base),
            Some(spec) => format!(
                "{}({})",
                self.base,
                spec.base_gens
                    .iter()
                    .map(|g| format!("{g}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }];
        for s in &self.steps {
            let tag = match &s.kind {
                StepKind::Transcendental { .. } => format!("{} transcendental", s.name),
                StepKind::AmbientInsep { m, a_image, .. } => {
                    format!("{} insep (m={m}, a={a_image})", s.name)
                }
                StepKind::Root { minpoly, .. } => {
                    format!("{} root of {}", s.name, minpoly.display_with("X"))
                }
            };
            parts.push(tag);
        }
        parts.join(" ; ")
    }
}

/// Build a context whose base `B0` is certified inside the field generated
/// by `gens` via the pure-power inventory, then close the generators.
fn closure_in_certified_context(
    p: u64,
    ambient_vars: &Arc<Vec<String>>,
    gens: &[RatFunc],
    inventory: &BTreeMap<usize, u32>,
    extra: &[RatFunc],
) -> Result<(Arc<AmbientContext>, SubfieldBasis), AdjoinError> {
    let mut vars: Vec<usize> = Vec::new();
    for g in gens.iter().chain(extra) {
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
                return Err(AdjoinError::AmbientUnavailable(format!(
                    "no pure power of variable `{}` among the generators",
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
    let ctx = AmbientContext::new(p, e, names).map_err(AdjoinError::Insep)?;
    let basis = subalgebra_closure(&ctx, gens)?;
    Ok((ctx, basis))
}

/// Recognize `c * x_i^(p^e)` (or its reciprocal) for the inventory;
/// returns `(variable, e)`.
fn pure_power_of(g: &RatFunc, p: u64) -> Option<(usize, u32)> {
    let mono = if g.den().is_constant() {
        g.num()
    } else if g.num().is_constant() {
        g.den()
    } else {
        return None;
    };
    let mut terms = mono.terms();
    let (m, _) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    let mut var = None;
    for (i, &e) in m.0.iter().enumerate() {
        if e > 0 {
            if var.is_some() {
                return None;
            }
            var = Some((i, e));
        }
    }
    let (i, e) = var?;
    let mut q = 1u64;
    let mut k = 0u32;
    while q < e as u64 {
        q *= p;
        k += 1;
    }
    if q == e as u64 {
        Some((i, k))
    } else {
        None
    }
}

/// Recognize `X^(p^m) - a`; returns `(m, a)`.
fn binomial_shape(f: &UniPoly<FunctionField>, p: u64) -> Option<(u32, RatFunc)> {
    let d = f.degree().finite()?;
    if d < 2 || !f.is_monic() {
        return None;
    }
    let mut q = 1usize;
    let mut m = 0u32;
    while q < d {
        q *= p as usize;
        m += 1;
    }
    if q != d || m == 0 {
        return None;
    }
    for i in 1..d {
        if !f.field.is_zero(&f.coeff(i)) {
            return None;
        }
    }
    let a = f.coeff(0).neg();
    if a.is_zero() {
        return None;
    }
    Some((m, a))
}

fn rational_of(c: &RatFunc) -> Option<BigRational> {
    c.as_constant().and_then(|s| s.as_rational().cloned())
}

/// Squarefree core of a rational discriminant as a small integer class.
fn rational_square_class(r: &BigRational) -> Result<i64, AdjoinError> {
    use num_traits::ToPrimitive;
    let scaled = r.numer() * r.denom();
    let n = scaled
        .to_i64()
        .ok_or_else(|| AdjoinError::UncertifiableIrreducibility("discriminant too large".into()))?;
    if n == 0 {
        return Err(AdjoinError::BadGenerators("zero discriminant".into()));
    }
    Ok(squarefree_part(n).1)
}

/// A tower's triangular algebra with named generators; elements are flat
/// coordinate vectors over the monomial basis.
#[derive(Clone, Debug)]
pub struct AbstractTowerAlgebra {
    pub algebra: FiniteAlgebra<FunctionField>,
    pub gen_names: Vec<String>,
    pub step_of_gen: Vec<usize>,
    tower: FieldTower,
}

/// Coefficient-field view of (a prefix of) a tower algebra, for linear
/// algebra with tower-element entries.
#[derive(Clone, Debug)]
pub struct TowerField {
    pub algebra: Arc<FiniteAlgebra<FunctionField>>,
    pub gen_names: Arc<Vec<String>>,
}

impl FieldArith for TowerField {
    type Elem = Vec<RatFunc>;

    fn zero(&self) -> Self::Elem {
        self.algebra.zero_elem()
    }

    fn one(&self) -> Self::Elem {
        self.algebra.one_elem()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.algebra.add(a, b)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.algebra.sub(a, b)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.algebra.neg(a)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.algebra.mul(a, b)
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.algebra.inv(a)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.algebra.is_zero_elem(a)
    }

    fn characteristic(&self) -> u64 {
        self.algebra.field.characteristic()
    }

    fn display(&self, a: &Self::Elem) -> String {
        let mut parts = Vec::new();
        for (idx, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = self.algebra.exponents_of(idx);
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(g, &e)| {
                    if e == 1 {
                        self.gen_names[g].clone()
                    } else {
                        format!("{}^{}", self.gen_names[g], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                parts.push(format!("{c}"));
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("({c})*{}", mono.join("*")));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl AbstractTowerAlgebra {
    pub fn generator_elem(&self, gen: usize) -> Vec<RatFunc> {
        self.algebra.generator(gen)
    }

    pub fn base_elem(&self, c: RatFunc) -> Vec<RatFunc> {
        self.algebra.scalar_elem(c)
    }

    /// Minimal polynomial over the prefix consisting of the first `prefix`
    /// steps, by exact linear algebra on powers until linear dependence.
    pub fn minpoly_of_element(
        &self,
        elem: &[RatFunc],
        prefix: usize,
    ) -> Result<UniPoly<TowerField>, TowerElementError> {
        let tower = &self.tower;
        for s in &tower.steps[prefix..] {
            if matches!(s.kind, StepKind::Transcendental { .. }) {
                return Err(TowerElementError::InfiniteDegree);
            }
        }
        let prefix_gens = self.step_of_gen.iter().filter(|&&s| s < prefix).count();
        let base_field = tower.function_base();
        let mut prefix_algebra = FiniteAlgebra::trivial(base_field.clone());
        for g in 0..prefix_gens {
            let step_idx = self.step_of_gen[g];
            if let StepKind::Root { minpoly, .. } = &tower.steps[step_idx].kind {
                let d = minpoly.degree().finite().expect("algebraic") as u64;
                let mut rewrite = vec![base_field.zero(); prefix_algebra.width() * d as usize];
                for j in 0..d as usize {
                    let c = minpoly
                        .coeff(j)
                        .extend_vars(base_field.vars.clone())
                        .expect("aligned");
                    rewrite[j * prefix_algebra.width()] = c.neg();
                }
                prefix_algebra = prefix_algebra.extend(d, rewrite);
            }
        }
        let prefix_width = prefix_algebra.width();
        let suffix_count = self.algebra.width() / prefix_width;
        let field = TowerField {
            algebra: Arc::new(prefix_algebra),
            gen_names: Arc::new(self.gen_names[..prefix_gens].to_vec()),
        };

        let chunk = |v: &[RatFunc]| -> Vec<Vec<RatFunc>> {
            (0..suffix_count)
                .map(|s| v[s * prefix_width..(s + 1) * prefix_width].to_vec())
                .collect()
        };

        let mut space: Subspace<TowerField> = Subspace::new(field.clone(), suffix_count);
        let mut powers: Vec<Vec<RatFunc>> = Vec::new();
        let mut acc = self.algebra.one_elem();
        loop {
            if !space.insert(chunk(&acc)) {
                break;
            }
            powers.push(acc.clone());
            acc = self.algebra.mul(&acc, elem);
            if powers.len() > self.algebra.width() {
                return Err(TowerElementError::Internal(
                    "no linear dependence within the algebra dimension".into(),
                ));
            }
        }
        // acc is now dependent on the earlier powers
        let columns: Vec<Vec<Vec<RatFunc>>> = powers.iter().map(|p| chunk(p)).collect();
        let target = chunk(&acc);
        let sol = solve_combination(&field, &columns, &target)
            .ok_or_else(|| TowerElementError::Internal("dependence vanished".into()))?;
        let mut coeffs: Vec<Vec<RatFunc>> = sol.into_iter().map(|c| field.neg(&c)).collect();
        coeffs.push(field.one());
        Ok(UniPoly::new(field, coeffs))
    }

    /// Embed a prefix-field element (of the minimal polynomial's
    /// coefficient field) into the full algebra.
    pub fn embed_prefix_elem(&self, c: &[RatFunc]) -> Vec<RatFunc> {
        let mut out = self.algebra.zero_elem();
        out[..c.len()].clone_from_slice(c);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TowerElementError {
    InfiniteDegree,
    Internal(String),
}

impl fmt::Display for TowerElementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerElementError::InfiniteDegree => write!(f, "element has infinite degree"),
            TowerElementError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for TowerElementError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfunc;

    fn rf(p: u64, vars: &Arc<Vec<String>>, src: &str) -> RatFunc {
        parse_ratfunc(src, PrimeBase::Prime(p), vars.clone()).unwrap()
    }

    fn names(v: &[&str]) -> Arc<Vec<String>> {
        Arc::new(v.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn binomial_root_over_transcendental_base() {
        // F_2(t4) adjoin root t of X^4 - t4: degree 4
        let k = FieldTower::prime(2)
            .unwrap()
            .adjoin(Adjunction::Transcendental { name: "t4".into() })
            .unwrap();
        let base = k.function_base();
        let t4 = base.var(0);
        let minpoly = UniPoly::new(
            base.clone(),
            vec![t4.neg(), base.zero(), base.zero(), base.zero(), base.one()],
        );
        let kk = k
            .adjoin(Adjunction::Root {
                name: "t".into(),
                minpoly,
            })
            .unwrap();
        assert_eq!(kk.degree_over(1), DegreeValue::Finite(4));
        assert_eq!(kk.degree_over(0), DegreeValue::Infinite);
        assert_eq!(kk.td_over(0), 1);
    }

    #[test]
    fn rational_roots() {
        // Q adjoin sqrt 2: degree 2; adjoining a root of X^2 - 4 errors
        let q = FieldTower::rational();
        let k = q.adjoin(Adjunction::Sqrt { d: 2 }).unwrap();
        assert_eq!(k.degree_over(0), DegreeValue::Finite(2));
        let base = q.function_base();
        let minpoly = UniPoly::new(
            base.clone(),
            vec![base.from_integer(-4), base.zero(), base.one()],
        );
        match q.adjoin(Adjunction::Root {
            name: "r".into(),
            minpoly,
        }) {
            Err(AdjoinError::ReducibleMinPoly { factor }) => {
                assert!(factor.contains("X - (2)"), "{factor}");
            }
            other => panic!("expected reducible, got {other:?}"),
        }
        // sqrt of a redundant generator is skipped: Q(sqrt 8) = Q(sqrt 2)
        let k8 = k.adjoin(Adjunction::Sqrt { d: 8 }).unwrap();
        assert_eq!(k8.steps().len(), 1);
        // the strict root form also certifies irreducible quadratics
        let minpoly2 = UniPoly::new(
            base.clone(),
            vec![base.from_integer(-2), base.zero(), base.one()],
        );
        let k2 = q
            .adjoin(Adjunction::Root {
                name: "r".into(),
                minpoly: minpoly2,
            })
            .unwrap();
        assert_eq!(k2.degree_over(0), DegreeValue::Finite(2));
        assert_eq!(k2.mq_gens().unwrap(), vec![2]);
        // adjoining sqrt 2 afterwards is a no-op: the root already
        // generates Q(sqrt 2)
        let k2b = k2.adjoin(Adjunction::Sqrt { d: 2 }).unwrap();
        assert_eq!(k2b.steps().len(), 1);
        // sqrt 3 over Q(i, sqrt -3) is also redundant
        let f = FieldTower::rational()
            .adjoin(Adjunction::Sqrt { d: -1 })
            .unwrap()
            .adjoin(Adjunction::Sqrt { d: -3 })
            .unwrap()
            .adjoin(Adjunction::Sqrt { d: 3 })
            .unwrap();
        assert_eq!(f.degree_over(0), DegreeValue::Finite(4));
        assert_eq!(f.mq_gens().unwrap(), vec![-1, -3]);
    }

    #[test]
    fn ambient_tower_shapes() {
        let vars = names(&["x", "y", "z"]);
        let k = FieldTower::ambient_base(
            2,
            vars.clone(),
            vec![rf(2, &vars, "x^4"), rf(2, &vars, "y^4")],
        )
        .unwrap();
        let kk = k
            .derive()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x^2"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "y^2"),
            })
            .unwrap();
        assert_eq!(kk.degree_over(0), DegreeValue::Finite(4));
        let profile = kk.classify_over(0);
        assert_eq!(profile.shape, ProfileShape::InsepOnly);
        assert_eq!(profile.insep_exponent, 1);
        assert_eq!(profile.insep_gens.len(), 2);

        // L = k(z, x^2*(y^2+z)): transcendental then inseparable over k(z),
        // unsplit over k itself
        let l = k
            .derive()
            .adjoin(Adjunction::AmbientTranscendental {
                expr: rf(2, &vars, "z"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x^2*(y^2+z)"),
            })
            .unwrap();
        assert_eq!(l.td_over(0), 1);
        assert_eq!(l.degree_over(0), DegreeValue::Infinite);
        let lp = l.classify_over(0);
        assert_eq!(lp.shape, ProfileShape::Unsplit);

        // wrong declaration order is refused
        let bad = k.derive().adjoin(Adjunction::AmbientInsep {
            expr: rf(2, &vars, "x^2*(y^2+z)"),
        });
        assert!(matches!(bad, Err(AdjoinError::AmbientUnavailable(_))));
    }

    #[test]
    fn degree_sixteen_tower() {
        // [F_2(x,y) : F_2(x^4,y^4)] = 16 through x^2, y^2
        let vars = names(&["x", "y"]);
        let k = FieldTower::ambient_base(
            2,
            vars.clone(),
            vec![rf(2, &vars, "x^4"), rf(2, &vars, "y^4")],
        )
        .unwrap();
        let top = k
            .derive()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x^2"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "y^2"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "y"),
            })
            .unwrap();
        assert_eq!(top.degree_over(0), DegreeValue::Finite(16));
        assert_eq!(top.degree_over(2), DegreeValue::Finite(4));
        let p = top.classify_over(0);
        assert_eq!(p.shape, ProfileShape::InsepOnly);
        assert_eq!(p.insep_exponent, 2);
        // m over the base: x has m = 2, x^2 has m = 1
        let by_name: BTreeMap<_, _> = p.insep_gens.iter().map(|g| (g.name.clone(), g.m)).collect();
        assert_eq!(by_name["x"], 2);
        assert_eq!(by_name["x^2"], 1);
    }

    #[test]
    fn adjoining_member_is_rejected() {
        let vars = names(&["t"]);
        let k = FieldTower::ambient_base(2, vars.clone(), vec![rf(2, &vars, "t^2")]).unwrap();
        let kt = k
            .derive()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "t"),
            })
            .unwrap();
        let again = kt.adjoin(Adjunction::AmbientInsep {
            expr: rf(2, &vars, "t"),
        });
        assert!(matches!(again, Err(AdjoinError::AlreadyInField(_))));
        let inv = k.derive().adjoin(Adjunction::AmbientInsep {
            expr: rf(2, &vars, "1/t^2"),
        });
        assert!(matches!(inv, Err(AdjoinError::AlreadyInField(_))));
    }

    #[test]
    fn separable_classification_with_transcendentals() {
        // k(x)(a) with a a root of the constant-coefficient separable
        // X^2 + X + 1 over F_2(x): separable only
        let t = FieldTower::prime(2)
            .unwrap()
            .adjoin(Adjunction::Transcendental { name: "x".into() })
            .unwrap();
        let base = t.function_base();
        let minpoly = UniPoly::new(base.clone(), vec![base.one(), base.one(), base.one()]);
        let k = t
            .adjoin(Adjunction::Root {
                name: "a".into(),
                minpoly,
            })
            .unwrap();
        let p = k.classify_over(0);
        assert_eq!(p.shape, ProfileShape::SeparableOnly);
        assert_eq!(p.separable_degree, DegreeValue::Infinite);

        let p2 = t.classify_over(0);
        assert_eq!(p2.shape, ProfileShape::SeparableOnly);

        let q = FieldTower::rational()
            .adjoin(Adjunction::Sqrt { d: 2 })
            .unwrap();
        let p3 = q.classify_over(0);
        assert_eq!(p3.shape, ProfileShape::SeparableOnly);
        assert_eq!(p3.separable_degree, DegreeValue::Finite(2));
    }

    #[test]
    fn insep_classification_over_trans_base() {
        // F_2(t2) adjoin root t of X^2 - t2: inseparable only over the
        // binding, with (m, a) = (1, t2)
        let k = FieldTower::prime(2)
            .unwrap()
            .adjoin(Adjunction::Transcendental { name: "t2".into() })
            .unwrap();
        let base = k.function_base();
        let minpoly = UniPoly::new(
            base.clone(),
            vec![base.var(0).neg(), base.zero(), base.one()],
        );
        let kk = k
            .derive()
            .adjoin(Adjunction::Root {
                name: "t".into(),
                minpoly,
            })
            .unwrap();
        let p = kk.classify_over(1);
        assert_eq!(p.shape, ProfileShape::InsepOnly);
        assert_eq!(p.insep_exponent, 1);
        assert_eq!(p.insep_gens[0].a_display, "t2");
        // over the prime field itself the split is not certified
        let p0 = kk.classify_over(0);
        assert_eq!(p0.shape, ProfileShape::Unsplit);
    }

    #[test]
    fn minpoly_of_elements() {
        // sqrt2 + sqrt3 over Q has minimal polynomial X^4 - 10X^2 + 1
        let q = FieldTower::rational()
            .adjoin(Adjunction::Sqrt { d: 2 })
            .unwrap()
            .adjoin(Adjunction::Sqrt { d: 3 })
            .unwrap();
        let alg = q.abstract_algebra().unwrap();
        let s2 = alg.generator_elem(0);
        let s3 = alg.generator_elem(1);
        let e = alg.algebra.add(&s2, &s3);
        let mp = alg.minpoly_of_element(&e, 0).unwrap();
        assert_eq!(mp.degree(), Degree::Of(4));
        assert_eq!(mp.display_with("X"), "X^4 + (-10)*X^2 + 1");
        // evaluates to zero on the element
        let full_coeffs: Vec<_> = mp
            .coeffs()
            .iter()
            .map(|c| alg.embed_prefix_elem(c))
            .collect();
        let mut acc = alg.algebra.zero_elem();
        let mut pw = alg.algebra.one_elem();
        for c in &full_coeffs {
            acc = alg.algebra.add(&acc, &alg.algebra.mul(c, &pw));
            pw = alg.algebra.mul(&pw, &e);
        }
        assert!(alg.algebra.is_zero_elem(&acc));

        // element 1 has minimal polynomial X - 1
        let mp1 = alg.minpoly_of_element(&alg.algebra.one_elem(), 0).unwrap();
        assert_eq!(mp1.degree(), Degree::Of(1));

        // t^2 over F_2(t4), presented abstractly: X^2 - t4
        let k = FieldTower::prime(2)
            .unwrap()
            .adjoin(Adjunction::Transcendental { name: "t4".into() })
            .unwrap();
        let base = k.function_base();
        let minpoly = UniPoly::new(
            base.clone(),
            vec![
                base.var(0).neg(),
                base.zero(),
                base.zero(),
                base.zero(),
                base.one(),
            ],
        );
        let kt = k
            .adjoin(Adjunction::Root {
                name: "t".into(),
                minpoly,
            })
            .unwrap();
        let alg = kt.abstract_algebra().unwrap();
        let t = alg.generator_elem(0);
        let t2 = alg.algebra.mul(&t, &t);
        let mp = alg.minpoly_of_element(&t2, 1).unwrap();
        assert_eq!(mp.degree(), Degree::Of(2));
        assert_eq!(mp.display_with("X"), "X^2 + t4");
    }

    #[test]
    fn degree_multiplicativity_across_prefixes() {
        let vars = names(&["x", "y"]);
        let k = FieldTower::ambient_base(
            2,
            vars.clone(),
            vec![rf(2, &vars, "x^4"), rf(2, &vars, "y^4")],
        )
        .unwrap();
        let top = k
            .derive()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x^2"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "y^2"),
            })
            .unwrap()
            .adjoin(Adjunction::AmbientInsep {
                expr: rf(2, &vars, "x"),
            })
            .unwrap();
        let total = top.degree_over(0).finite().unwrap();
        for prefix in 0..=top.steps().len() {
            let lo = top.degree_over(prefix).finite().unwrap();
            let hi: u64 = (0..prefix).map(|i| top.step_degree(i).unwrap()).product();
            assert_eq!(lo * hi, total);
        }
    }
}
