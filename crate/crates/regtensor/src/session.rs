//! The session language: a small line-oriented DSL for defining fields and
//! algebra descriptors and issuing queries against them.
//!
//! ```text
//! # comments start with '#'
//! base k = Fp(2) subfield of ambient(x, y, z) generated by [x^4, y^4]
//! field K = k adjoin insep x^2, y^2
//! field L = k adjoin transcendental z, insep x^2*(y^2+z)
//! field M = Q adjoin sqrt -1, sqrt 2, transcendental t
//! field P = Fp(2) adjoin transcendental t4
//! field T = P adjoin root t of X^4 - t4
//! algebra A = descriptor regular=true residually_separable=true \
//!             finitely_generated=true residue_fields=[K, L]
//! query regular tensor(K, L)
//! query dim tensor(K, L)
//! query intersect(K, L)
//! query decompose tensor(K, L)
//! query self_tensor K
//! ```
//!
//! Adjunction keywords persist across commas, so `insep x^2, y^2` adjoins
//! two inseparable elements. Sessions are replayable: the same input
//! produces byte-identical structured output.

use crate::engine::{self, AlgebraDescriptor, EngineError, IntersectionReport, Verdict};
use crate::field::{FieldArith, FunctionField};
use crate::poly::parse::{parse_ratfunc, scan_idents};
use crate::poly::ratfunc::RatFunc;
use crate::poly::uni::UniPoly;
use crate::scalar::PrimeBase;
use crate::tensor::TensorAnalysis;
use crate::tower::{Adjunction, FieldTower};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

fn diag<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, Diagnostic> {
    Err(Diagnostic {
        line,
        col,
        message: message.into(),
    })
}

/// How a binding was declared, kept for printing.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseRef {
    Q,
    Fp(u64),
    Named(String),
}

impl fmt::Display for BaseRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRef::Q => write!(f, "Q"),
            BaseRef::Fp(p) => write!(f, "Fp({p})"),
            BaseRef::Named(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ItemDecl {
    Insep(String),
    Transcendental(String),
    Root { name: String, poly: String },
    Sqrt(i64),
}

impl fmt::Display for ItemDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemDecl::Insep(e) => write!(f, "insep {e}"),
            ItemDecl::Transcendental(e) => write!(f, "transcendental {e}"),
            ItemDecl::Root { name, poly } => write!(f, "root {name} of {poly}"),
            ItemDecl::Sqrt(d) => write!(f, "sqrt {d}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum BindingDecl {
    AmbientBase {
        p: u64,
        vars: Vec<String>,
        gens: Vec<String>,
    },
    Field {
        base: BaseRef,
        items: Vec<ItemDecl>,
    },
    Descriptor {
        flags: Vec<(String, String)>,
    },
}

#[derive(Clone, Debug)]
pub enum BindingValue {
    Field(Arc<FieldTower>),
    Algebra(AlgebraDescriptor),
}

#[derive(Clone, Debug)]
pub struct SessionBinding {
    pub name: String,
    pub decl: BindingDecl,
    pub value: BindingValue,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    RegularTensor(String, String),
    DimTensor(String, String),
    Intersect(String, String),
    DecomposeTensor(String, String),
    SelfTensor(String),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::RegularTensor(a, b) => write!(f, "regular tensor({a}, {b})"),
            Query::DimTensor(a, b) => write!(f, "dim tensor({a}, {b})"),
            Query::Intersect(a, b) => write!(f, "intersect({a}, {b})"),
            Query::DecomposeTensor(a, b) => write!(f, "decompose tensor({a}, {b})"),
            Query::SelfTensor(a) => write!(f, "self_tensor {a}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    pub bindings: Vec<SessionBinding>,
    pub queries: Vec<Query>,
}

impl Session {
    pub fn lookup(&self, name: &str) -> Option<&BindingValue> {
        self.bindings
            .iter()
            .find(|b| b.name == name)
            .map(|b| &b.value)
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bindings {
            match &b.decl {
                BindingDecl::AmbientBase { p, vars, gens } => writeln!(
                    f,
                    "base {} = Fp({p}) subfield of ambient({}) generated by [{}]",
                    b.name,
                    vars.join(", "),
                    gens.join(", ")
                )?,
                BindingDecl::Field { base, items } => writeln!(
                    f,
                    "field {} = {base} adjoin {}",
                    b.name,
                    items
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )?,
                BindingDecl::Descriptor { flags } => writeln!(
                    f,
                    "algebra {} = descriptor {}",
                    b.name,
                    flags
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                )?,
            }
        }
        for q in &self.queries {
            writeln!(f, "query {q}")?;
        }
        Ok(())
    }
}

/// Split on a separator at the top level only (not inside brackets).
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct LineCtx<'a> {
    line_no: usize,
    text: &'a str,
}

impl<'a> LineCtx<'a> {
    fn col_of(&self, fragment: &str) -> usize {
        match self.text.find(fragment.trim()) {
            Some(off) => off + 1,
            None => 1,
        }
    }

    fn err<T>(&self, fragment: &str, message: impl Into<String>) -> Result<T, Diagnostic> {
        diag(self.line_no, self.col_of(fragment), message)
    }
}

/// Interned literal base fields so every `Q` (or `Fp(p)`) in one session is
/// the same binding.
#[derive(Default)]
struct BaseInterner {
    q: Option<Arc<FieldTower>>,
    fp: BTreeMap<u64, Arc<FieldTower>>,
}

impl BaseInterner {
    fn q(&mut self) -> Arc<FieldTower> {
        self.q
            .get_or_insert_with(|| Arc::new(FieldTower::rational()))
            .clone()
    }

    fn fp(&mut self, p: u64) -> Result<Arc<FieldTower>, String> {
        if let Some(t) = self.fp.get(&p) {
            return Ok(t.clone());
        }
        let t = Arc::new(FieldTower::prime(p).map_err(|e| e.to_string())?);
        self.fp.insert(p, t.clone());
        Ok(t)
    }
}

/// Parse a session from UTF-8 text, building every binding as it goes.
pub fn parse_session(src: &str) -> Result<Session, Diagnostic> {
    let mut session = Session::default();
    let mut interner = BaseInterner::default();
    for (idx, raw) in src.lines().enumerate() {
        let ctx = LineCtx {
            line_no: idx + 1,
            text: raw,
        };
        let line = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "base" => parse_base(&ctx, rest, &mut session)?,
            "field" => parse_field(&ctx, rest, &mut session, &mut interner)?,
            "algebra" => parse_algebra(&ctx, rest, &mut session)?,
            "query" => parse_query(&ctx, rest, &mut session)?,
            other => return ctx.err(other, format!("unknown directive `{other}`")),
        }
    }
    Ok(session)
}

fn bind_name(ctx: &LineCtx, session: &Session, name: &str) -> Result<(), Diagnostic> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return ctx.err(name, format!("invalid binding name `{name}`"));
    }
    if session.lookup(name).is_some() {
        return ctx.err(name, format!("name `{name}` is already bound"));
    }
    Ok(())
}

fn parse_base(ctx: &LineCtx, rest: &str, session: &mut Session) -> Result<(), Diagnostic> {
    // NAME = Fp(p) subfield of ambient(vars) generated by [gens]
    let (name, rhs) = match rest.split_once('=') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => return ctx.err(rest, "expected `base NAME = ...`"),
    };
    bind_name(ctx, session, name)?;
    let rhs_orig = rhs;
    let p = match rhs.strip_prefix("Fp(").and_then(|r| r.split_once(')')) {
        Some((num, _)) => num.trim().parse::<u64>().map_err(|_| Diagnostic {
            line: ctx.line_no,
            col: ctx.col_of(num),
            message: format!("invalid prime `{num}`"),
        })?,
        None => return ctx.err(rhs, "ambient bases start with `Fp(p)`"),
    };
    let after = rhs.split_once(')').expect("checked").1.trim();
    let after = match after.strip_prefix("subfield of ambient(") {
        Some(a) => a,
        None => return ctx.err(after, "expected `subfield of ambient(vars)`"),
    };
    let (vars_part, after) = match after.split_once(')') {
        Some(x) => x,
        None => return ctx.err(after, "unclosed ambient variable list"),
    };
    let vars: Vec<String> = split_top_level(vars_part, ',')
        .iter()
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if vars.is_empty() {
        return ctx.err(vars_part, "ambient needs at least one variable");
    }
    let after = after.trim();
    let gens_part = match after
        .strip_prefix("generated by")
        .map(str::trim)
        .and_then(|a| a.strip_prefix('['))
        .and_then(|a| a.strip_suffix(']'))
    {
        Some(g) => g,
        None => return ctx.err(after, "expected `generated by [g1, g2, ...]`"),
    };
    let var_arc = Arc::new(vars.clone());
    let mut gens = Vec::new();
    let mut gen_texts = Vec::new();
    for g in split_top_level(gens_part, ',') {
        let g = g.trim();
        if g.is_empty() {
            continue;
        }
        let expr =
            parse_ratfunc(g, PrimeBase::Prime(p), var_arc.clone()).map_err(|e| Diagnostic {
                line: ctx.line_no,
                col: ctx.col_of(g),
                message: format!("in generator `{g}`: {e}"),
            })?;
        gen_texts.push(format!("{expr}"));
        gens.push(expr);
    }
    let tower = FieldTower::ambient_base(p, var_arc, gens).map_err(|e| Diagnostic {
        line: ctx.line_no,
        col: ctx.col_of(rhs_orig),
        message: e.to_string(),
    })?;
    session.bindings.push(SessionBinding {
        name: name.to_string(),
        decl: BindingDecl::AmbientBase {
            p,
            vars,
            gens: gen_texts,
        },
        value: BindingValue::Field(Arc::new(tower)),
    });
    Ok(())
}

fn parse_field(
    ctx: &LineCtx,
    rest: &str,
    session: &mut Session,
    interner: &mut BaseInterner,
) -> Result<(), Diagnostic> {
    let (name, rhs) = match rest.split_once('=') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => return ctx.err(rest, "expected `field NAME = BASE adjoin ...`"),
    };
    bind_name(ctx, session, name)?;
    let (base_txt, items_txt) = match rhs.split_once("adjoin") {
        Some((b, i)) => (b.trim(), i.trim()),
        None => return ctx.err(rhs, "expected `BASE adjoin item, item, ...`"),
    };
    let (base_ref, base_tower) = resolve_base(ctx, base_txt, session, interner)?;
    let mut tower = base_tower.derive();
    let mut decls = Vec::new();
    let mut keyword = String::new();
    for item in split_top_level(items_txt, ',') {
        let item = item.trim();
        if item.is_empty() {
            return ctx.err(items_txt, "empty adjunction item");
        }
        let (kw, arg) = match item.split_once(char::is_whitespace) {
            Some((k, a)) if is_keyword(k) => (k.to_string(), a.trim().to_string()),
            _ if is_keyword(item) => (item.to_string(), String::new()),
            _ => {
                if keyword.is_empty() {
                    return ctx.err(
                        item,
                        "adjunction items start with insep / transcendental / root / sqrt",
                    );
                }
                (keyword.clone(), item.to_string())
            }
        };
        keyword = kw.clone();
        let (adj, decl) = build_adjunction(ctx, &kw, &arg, &tower)?;
        tower = tower.adjoin(adj).map_err(|e| Diagnostic {
            line: ctx.line_no,
            col: ctx.col_of(item),
            message: e.to_string(),
        })?;
        decls.push(decl);
    }
    session.bindings.push(SessionBinding {
        name: name.to_string(),
        decl: BindingDecl::Field {
            base: base_ref,
            items: decls,
        },
        value: BindingValue::Field(Arc::new(tower)),
    });
    Ok(())
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "insep" | "transcendental" | "root" | "sqrt")
}

fn resolve_base(
    ctx: &LineCtx,
    base_txt: &str,
    session: &Session,
    interner: &mut BaseInterner,
) -> Result<(BaseRef, Arc<FieldTower>), Diagnostic> {
    if base_txt == "Q" {
        return Ok((BaseRef::Q, interner.q()));
    }
    if let Some(rest) = base_txt.strip_prefix("Fp(") {
        let p = rest
            .strip_suffix(')')
            .and_then(|n| n.trim().parse::<u64>().ok())
            .ok_or_else(|| Diagnostic {
                line: ctx.line_no,
                col: ctx.col_of(base_txt),
                message: format!("invalid base `{base_txt}`"),
            })?;
        let t = interner.fp(p).map_err(|m| Diagnostic {
            line: ctx.line_no,
            col: ctx.col_of(base_txt),
            message: m,
        })?;
        return Ok((BaseRef::Fp(p), t));
    }
    match session.lookup(base_txt) {
        Some(BindingValue::Field(t)) => Ok((BaseRef::Named(base_txt.to_string()), t.clone())),
        Some(BindingValue::Algebra(_)) => ctx.err(
            base_txt,
            format!("`{base_txt}` is an algebra descriptor, not a field"),
        ),
        None => ctx.err(base_txt, format!("unknown name `{base_txt}`")),
    }
}

fn build_adjunction(
    ctx: &LineCtx,
    kw: &str,
    arg: &str,
    tower: &FieldTower,
) -> Result<(Adjunction, ItemDecl), Diagnostic> {
    let perr = |msg: String| Diagnostic {
        line: ctx.line_no,
        col: ctx.col_of(arg),
        message: msg,
    };
    match kw {
        "insep" => {
            let spec = tower
                .ambient()
                .ok_or_else(|| perr("insep adjunction needs an ambient base".into()))?;
            let expr = parse_ratfunc(arg, tower.base(), spec.vars.clone())
                .map_err(|e| perr(format!("in `{arg}`: {e}")))?;
            Ok((
                Adjunction::AmbientInsep { expr: expr.clone() },
                ItemDecl::Insep(format!("{expr}")),
            ))
        }
        "transcendental" => {
            if arg.is_empty() {
                return Err(perr("transcendental needs a name or expression".into()));
            }
            let is_ident = arg.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if let Some(spec) = tower.ambient() {
                if !is_ident || spec.vars.iter().any(|v| v == arg) {
                    let expr = parse_ratfunc(arg, tower.base(), spec.vars.clone())
                        .map_err(|e| perr(format!("in `{arg}`: {e}")))?;
                    return Ok((
                        Adjunction::AmbientTranscendental { expr: expr.clone() },
                        ItemDecl::Transcendental(format!("{expr}")),
                    ));
                }
            }
            if !is_ident {
                return Err(perr(format!(
                    "transcendental expressions need an ambient base; `{arg}` is not a plain name"
                )));
            }
            Ok((
                Adjunction::Transcendental {
                    name: arg.to_string(),
                },
                ItemDecl::Transcendental(arg.to_string()),
            ))
        }
        "root" => {
            let (root_name, poly_txt) =
                arg.split_once(" of ")
                    .map(|(n, p)| (n.trim(), p.trim()))
                    .ok_or_else(|| perr("expected `root NAME of POLY`".into()))?;
            let minpoly = parse_minpoly(poly_txt, tower)
                .map_err(|e| perr(format!("in `{poly_txt}`: {e}")))?;
            Ok((
                Adjunction::Root {
                    name: root_name.to_string(),
                    minpoly,
                },
                ItemDecl::Root {
                    name: root_name.to_string(),
                    poly: poly_txt.to_string(),
                },
            ))
        }
        "sqrt" => {
            let d: i64 = arg
                .trim()
                .parse()
                .map_err(|_| perr(format!("invalid integer `{arg}` after sqrt")))?;
            Ok((Adjunction::Sqrt { d }, ItemDecl::Sqrt(d)))
        }
        other => Err(perr(format!("unknown adjunction keyword `{other}`"))),
    }
}

/// Parse a minimal polynomial in the indeterminate `X` with coefficients
/// over the tower's rational function base.
fn parse_minpoly(src: &str, tower: &FieldTower) -> Result<UniPoly<FunctionField>, String> {
    let idents = scan_idents(src).map_err(|e| e.to_string())?;
    if !idents.iter().any(|i| i == "X") {
        return Err("minimal polynomials use the indeterminate X".into());
    }
    let trans = tower.abstract_trans_vars();
    for i in &idents {
        if i != "X" && !trans.iter().any(|t| t == i) {
            return Err(format!("unknown coefficient generator `{i}`"));
        }
    }
    let mut vars = vec!["X".to_string()];
    vars.extend(trans.iter().cloned());
    let vars = Arc::new(vars);
    let parsed = parse_ratfunc(src, tower.base(), vars.clone()).map_err(|e| e.to_string())?;
    if parsed.den().occurring_vars().contains(&0) {
        return Err("denominator must not involve X".into());
    }
    // view as univariate in X over the remaining variables
    let base_field = FunctionField::new(tower.base(), trans.clone());
    let deg = parsed.num().degree_in(0) as usize;
    let mut coeffs = vec![base_field.zero(); deg + 1];
    for (mono, c) in parsed.num().terms() {
        let e = mono.0[0] as usize;
        let mut rest = mono.clone();
        rest.0[0] = 0;
        let term = crate::poly::multi::MultiPoly::monomial_term(
            tower.base(),
            vars.clone(),
            rest,
            c.clone(),
        );
        let term = RatFunc::new(term, parsed.den().clone()).map_err(|e| e.to_string())?;
        let term = term
            .extend_vars(trans.clone())
            .map_err(|_| "coefficients must not involve X".to_string())?;
        coeffs[e] = coeffs[e].add(&term);
    }
    Ok(UniPoly::new(base_field, coeffs))
}

fn parse_algebra(ctx: &LineCtx, rest: &str, session: &mut Session) -> Result<(), Diagnostic> {
    let (name, rhs) = match rest.split_once('=') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => return ctx.err(rest, "expected `algebra NAME = descriptor ...`"),
    };
    bind_name(ctx, session, name)?;
    let flags_txt = match rhs.strip_prefix("descriptor") {
        Some(f) => f.trim(),
        None => return ctx.err(rhs, "expected `descriptor flag=value ...`"),
    };
    let mut desc = AlgebraDescriptor {
        name: name.to_string(),
        ..Default::default()
    };
    let mut flags = Vec::new();
    for part in split_top_level(flags_txt, ' ') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = match part.split_once('=') {
            Some(kv) => kv,
            None => return ctx.err(part, format!("expected flag=value, found `{part}`")),
        };
        flags.push((key.to_string(), value.to_string()));
        let parse_bool = |v: &str| -> Result<bool, Diagnostic> {
            match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => diag(
                    ctx.line_no,
                    ctx.col_of(part),
                    format!("expected true/false, found `{v}`"),
                ),
            }
        };
        match key {
            "regular" => desc.regular = Some(parse_bool(value)?),
            "residually_separable" => desc.residually_separable = Some(parse_bool(value)?),
            "geometrically_regular" => desc.geometrically_regular = Some(parse_bool(value)?),
            "finitely_generated" => desc.finitely_generated = Some(parse_bool(value)?),
            "residue_fields" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| Diagnostic {
                        line: ctx.line_no,
                        col: ctx.col_of(part),
                        message: "residue_fields takes a bracketed name list".into(),
                    })?;
                for n in split_top_level(inner, ',') {
                    let n = n.trim();
                    if n.is_empty() {
                        continue;
                    }
                    match session.lookup(n) {
                        Some(BindingValue::Field(t)) => desc.residue_fields.push(t.clone()),
                        _ => return ctx.err(n, format!("unknown field `{n}` in residue_fields")),
                    }
                }
            }
            other => return ctx.err(part, format!("unknown descriptor flag `{other}`")),
        }
    }
    session.bindings.push(SessionBinding {
        name: name.to_string(),
        decl: BindingDecl::Descriptor { flags },
        value: BindingValue::Algebra(desc),
    });
    Ok(())
}

fn parse_query(ctx: &LineCtx, rest: &str, session: &mut Session) -> Result<(), Diagnostic> {
    let check = |n: &str| -> Result<String, Diagnostic> {
        match session.lookup(n) {
            Some(_) => Ok(n.to_string()),
            None => diag(ctx.line_no, ctx.col_of(n), format!("unknown name `{n}`")),
        }
    };
    let pair = |ctx: &LineCtx, args: &str| -> Result<(String, String), Diagnostic> {
        let parts: Vec<&str> = split_top_level(args, ',')
            .iter()
            .map(|s| s.trim())
            .collect();
        if parts.len() != 2 {
            return diag(ctx.line_no, ctx.col_of(args), "expected two names");
        }
        Ok((check(parts[0])?, check(parts[1])?))
    };
    let q = if let Some(args) = rest
        .strip_prefix("regular tensor(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let (a, b) = pair(ctx, args)?;
        Query::RegularTensor(a, b)
    } else if let Some(args) = rest
        .strip_prefix("dim tensor(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let (a, b) = pair(ctx, args)?;
        Query::DimTensor(a, b)
    } else if let Some(args) = rest
        .strip_prefix("intersect(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let (a, b) = pair(ctx, args)?;
        Query::Intersect(a, b)
    } else if let Some(args) = rest
        .strip_prefix("decompose tensor(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let (a, b) = pair(ctx, args)?;
        Query::DecomposeTensor(a, b)
    } else if let Some(name) = rest.strip_prefix("self_tensor") {
        Query::SelfTensor(check(name.trim())?)
    } else {
        return ctx.err(rest, format!("unknown query form `{rest}`"));
    };
    session.queries.push(q);
    Ok(())
}

// ---------------------------------------------------------------------------
// running
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum QueryOutcome {
    Verdict(Verdict),
    Dim(u64),
    Intersection(IntersectionReport),
    Decomposition {
        analysis: TensorAnalysis,
        agrees_with_rules: Option<bool>,
    },
}

#[derive(Clone, Debug)]
pub struct QueryRecord {
    pub query: String,
    pub outcome: Result<QueryOutcome, String>,
}

#[derive(Clone, Debug, Default)]
pub struct SessionReport {
    pub records: Vec<QueryRecord>,
}

impl SessionReport {
    pub fn has_errors(&self) -> bool {
        self.records.iter().any(|r| r.outcome.is_err())
    }
}

fn field_of<'a>(session: &'a Session, name: &str) -> Result<&'a Arc<FieldTower>, String> {
    match session.lookup(name) {
        Some(BindingValue::Field(t)) => Ok(t),
        Some(BindingValue::Algebra(_)) => Err(format!("`{name}` is a descriptor, not a field")),
        None => Err(format!("unknown name `{name}`")),
    }
}

/// Wrap a field as a descriptor (fields are regular, finitely generated,
/// and their only residue field is themselves).
fn descriptor_of(session: &Session, name: &str) -> Result<AlgebraDescriptor, String> {
    match session.lookup(name) {
        Some(BindingValue::Algebra(d)) => Ok(d.clone()),
        Some(BindingValue::Field(t)) => Ok(AlgebraDescriptor {
            name: name.to_string(),
            regular: Some(true),
            finitely_generated: Some(true),
            residue_fields: vec![t.clone()],
            ..Default::default()
        }),
        None => Err(format!("unknown name `{name}`")),
    }
}

fn engine_err(e: EngineError) -> String {
    e.to_string()
}

/// Execute the queries in order. Mathematical verdicts are data; only
/// genuine failures (oracle gaps, mismatched bases) appear as errors.
pub fn run_session(session: &Session) -> SessionReport {
    let mut report = SessionReport::default();
    for q in &session.queries {
        let outcome: Result<QueryOutcome, String> = (|| match q {
            Query::RegularTensor(a, b) => {
                let both_fields = matches!(session.lookup(a), Some(BindingValue::Field(_)))
                    && matches!(session.lookup(b), Some(BindingValue::Field(_)));
                if both_fields {
                    let ka = field_of(session, a)?;
                    let kb = field_of(session, b)?;
                    engine::decide_tensor_regularity(ka, kb)
                        .map(QueryOutcome::Verdict)
                        .map_err(engine_err)
                } else {
                    let da = descriptor_of(session, a)?;
                    let db = descriptor_of(session, b)?;
                    engine::descriptor_verdict(&da, &db)
                        .map(QueryOutcome::Verdict)
                        .map_err(engine_err)
                }
            }
            Query::DimTensor(a, b) => {
                let ka = field_of(session, a)?;
                let kb = field_of(session, b)?;
                engine::tensor_krull_dim(ka, kb)
                    .map(QueryOutcome::Dim)
                    .map_err(engine_err)
            }
            Query::Intersect(a, b) => {
                let ka = field_of(session, a)?;
                let kb = field_of(session, b)?;
                engine::intersect_query(ka, kb)
                    .map(QueryOutcome::Intersection)
                    .map_err(engine_err)
            }
            Query::DecomposeTensor(a, b) => {
                let ka = field_of(session, a)?;
                let kb = field_of(session, b)?;
                let analysis = engine::decompose_tensor(ka, kb).map_err(engine_err)?;
                let agrees = match engine::decide_tensor_regularity(ka, kb) {
                    Ok(v) => match v.regular {
                        engine::Regularity::Regular => Some(analysis.regular_direct()),
                        engine::Regularity::NotRegular => Some(!analysis.regular_direct()),
                        engine::Regularity::HypothesisNotVerified => None,
                    },
                    Err(_) => None,
                };
                Ok(QueryOutcome::Decomposition {
                    analysis,
                    agrees_with_rules: agrees,
                })
            }
            Query::SelfTensor(a) => {
                let ka = field_of(session, a)?;
                engine::self_tensor_verdict(ka)
                    .map(QueryOutcome::Verdict)
                    .map_err(engine_err)
            }
        })();
        report.records.push(QueryRecord {
            query: q.to_string(),
            outcome,
        });
    }
    report
}
