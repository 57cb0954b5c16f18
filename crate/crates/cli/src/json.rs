//! JSON forms of chains, tensor chains, A∞-algebras and certificates.
//!
//! Rendering is canonical: terms are sorted by their cells, object keys come
//! in a fixed order, and rationals are written in lowest terms as `"p/q"`.
//! Parsing a rendered document and rendering it again gives the same bytes.

use associahedra::ainfinity::{AInfAlgebra, MultiLinear, Q};
use associahedra::chain::{Cell, Chain, Complex, KChain, TensorChain, TripleChain, WChain};
use associahedra::coassoc::{arity4_system, Branch, Certificate};
use associahedra::linalg::{rename, Case, Outcome, Pivot, Poly, Trace};
use associahedra::tree::{EdgeId, MetricTree, PlanarTree, TreeError};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("expected a {expected} chain, found complex {found}")]
    Complex { expected: &'static str, found: String },
    #[error("a {0}-cell {1} {2} a `nonmetric` list")]
    Nonmetric(&'static str, String, &'static str),
    #[error("term {0} has {1} leaves, the chain has n = {2}")]
    Arity(String, usize, usize),
    #[error("term {0} appears twice")]
    Duplicate(String),
    #[error("zero coefficient on {0}")]
    ZeroCoefficient(String),
    #[error("bad rational `{0}`")]
    Rational(String),
    #[error("{0}")]
    Algebra(String),
    #[error("unknown branch `{0}`")]
    Branch(String),
}

/// One cell: a K-cell has no `nonmetric` list, a W-cell always has one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub tree: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonmetric: Option<Vec<EdgeId>>,
}

/// Cells with a JSON form.
pub trait JsonCell: Cell + Sized {
    const NAME: &'static str;
    fn to_json(&self) -> CellJson;
    fn from_json(j: &CellJson) -> Result<Self, FormatError>;
}

impl JsonCell for PlanarTree {
    const NAME: &'static str = "K";

    fn to_json(&self) -> CellJson {
        CellJson { tree: self.literal(), nonmetric: None }
    }

    fn from_json(j: &CellJson) -> Result<Self, FormatError> {
        if j.nonmetric.is_some() {
            return Err(FormatError::Nonmetric("K", j.tree.clone(), "cannot carry"));
        }
        Ok(PlanarTree::parse(&j.tree)?)
    }
}

impl JsonCell for MetricTree {
    const NAME: &'static str = "W";

    fn to_json(&self) -> CellJson {
        CellJson { tree: self.shape().literal(), nonmetric: Some(self.nonmetric_edges()) }
    }

    fn from_json(j: &CellJson) -> Result<Self, FormatError> {
        let Some(nm) = &j.nonmetric else {
            return Err(FormatError::Nonmetric("W", j.tree.clone(), "needs"));
        };
        Ok(MetricTree::with_nonmetric(&PlanarTree::parse(&j.tree)?, nm)?)
    }
}

fn complex_name(c: Complex) -> &'static str {
    match c {
        Complex::K => "K",
        Complex::W => "W",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: i64,
    pub tree: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonmetric: Option<Vec<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub complex: String,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTermJson {
    pub coeff: i64,
    pub left: CellJson,
    pub right: CellJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorChainJson {
    pub complex: String,
    pub n: usize,
    pub terms: Vec<TensorTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleTermJson {
    pub coeff: i64,
    pub left: CellJson,
    pub middle: CellJson,
    pub right: CellJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleChainJson {
    pub complex: String,
    pub n: usize,
    pub terms: Vec<TripleTermJson>,
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn check_complex<C: JsonCell>(found: &str) -> Result<(), FormatError> {
    if found == C::NAME {
        Ok(())
    } else {
        Err(FormatError::Complex { expected: C::NAME, found: found.to_string() })
    }
}

/// Adds a parsed term, rejecting zero coefficients, wrong arities and
/// repeated cells so that parsing is inverse to rendering.
fn push_term<B: associahedra::chain::Basis>(out: &mut Chain<B>, n: usize, b: B, coeff: i64) -> Result<(), FormatError> {
    let key = b.sort_key();
    if coeff == 0 {
        return Err(FormatError::ZeroCoefficient(key));
    }
    if b.arity() != n {
        return Err(FormatError::Arity(key, b.arity(), n));
    }
    if out.coeff(&b) != 0 {
        return Err(FormatError::Duplicate(key));
    }
    out.add_term(b, coeff);
    Ok(())
}

pub fn chain_to_json<C: JsonCell>(x: &Chain<C>) -> ChainJson {
    let mut terms: Vec<(CellJson, i64)> = x.iter().map(|(c, k)| (c.to_json(), k)).collect();
    terms.sort();
    ChainJson {
        complex: complex_name(C::COMPLEX).to_string(),
        n: x.arity(),
        terms: terms.into_iter().map(|(c, coeff)| TermJson { coeff, tree: c.tree, nonmetric: c.nonmetric }).collect(),
    }
}

pub fn chain_from_json<C: JsonCell>(j: &ChainJson) -> Result<Chain<C>, FormatError> {
    check_complex::<C>(&j.complex)?;
    let mut out = Chain::zero(j.n);
    for t in &j.terms {
        let cell = C::from_json(&CellJson { tree: t.tree.clone(), nonmetric: t.nonmetric.clone() })?;
        push_term(&mut out, j.n, cell, t.coeff)?;
    }
    Ok(out)
}

pub fn tensor_to_json<C: JsonCell>(x: &TensorChain<C>) -> TensorChainJson {
    let mut terms: Vec<(CellJson, CellJson, i64)> = x.iter().map(|((a, b), k)| (a.to_json(), b.to_json(), k)).collect();
    terms.sort();
    TensorChainJson {
        complex: complex_name(C::COMPLEX).to_string(),
        n: x.arity(),
        terms: terms.into_iter().map(|(left, right, coeff)| TensorTermJson { coeff, left, right }).collect(),
    }
}

pub fn tensor_from_json<C: JsonCell>(j: &TensorChainJson) -> Result<TensorChain<C>, FormatError> {
    check_complex::<C>(&j.complex)?;
    let mut out = Chain::zero(j.n);
    for t in &j.terms {
        let pair = (C::from_json(&t.left)?, C::from_json(&t.right)?);
        if pair.1.arity() != j.n {
            return Err(FormatError::Arity(pair.1.to_string(), pair.1.arity(), j.n));
        }
        push_term(&mut out, j.n, pair, t.coeff)?;
    }
    Ok(out)
}

pub fn triple_to_json<C: JsonCell>(x: &TripleChain<C>) -> TripleChainJson {
    let mut terms: Vec<(CellJson, CellJson, CellJson, i64)> =
        x.iter().map(|((a, b, c), k)| (a.to_json(), b.to_json(), c.to_json(), k)).collect();
    terms.sort();
    TripleChainJson {
        complex: complex_name(C::COMPLEX).to_string(),
        n: x.arity(),
        terms: terms.into_iter().map(|(left, middle, right, coeff)| TripleTermJson { coeff, left, middle, right }).collect(),
    }
}

pub fn triple_from_json<C: JsonCell>(j: &TripleChainJson) -> Result<TripleChain<C>, FormatError> {
    check_complex::<C>(&j.complex)?;
    let mut out = Chain::zero(j.n);
    for t in &j.terms {
        let triple = (C::from_json(&t.left)?, C::from_json(&t.middle)?, C::from_json(&t.right)?);
        for c in [&triple.1, &triple.2] {
            if c.arity() != j.n {
                return Err(FormatError::Arity(c.to_string(), c.arity(), j.n));
            }
        }
        push_term(&mut out, j.n, triple, t.coeff)?;
    }
    Ok(out)
}

/// A chain of either complex, as read from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyChain {
    K(KChain),
    W(WChain),
}

impl AnyChain {
    pub fn parse(text: &str) -> Result<AnyChain, FormatError> {
        let j: ChainJson = serde_json::from_str(text)?;
        match j.complex.as_str() {
            "W" => Ok(AnyChain::W(chain_from_json(&j)?)),
            _ => Ok(AnyChain::K(chain_from_json(&j)?)),
        }
    }

    pub fn render(&self) -> String {
        match self {
            AnyChain::K(x) => render(&chain_to_json(x)),
            AnyChain::W(x) => render(&chain_to_json(x)),
        }
    }
}

pub fn rational_to_string(q: &Q) -> String {
    q.to_string()
}

pub fn rational_from_str(s: &str) -> Result<Q, FormatError> {
    let q = Q::from_str(s.trim()).map_err(|_| FormatError::Rational(s.to_string()))?;
    // only the reduced form round-trips
    if q.to_string() != s {
        return Err(FormatError::Rational(s.to_string()));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    /// Basis indices.
    pub inputs: Vec<usize>,
    pub output: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    pub arity: usize,
    pub entries: Vec<EntryJson>,
}

/// An A∞-algebra truncated at `max_arity`: every `m_k`, `1 <= k <= max_arity`,
/// as a sparse list of nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub basis: Vec<BasisJson>,
    pub max_arity: usize,
    pub ops: Vec<OpJson>,
}

pub fn algebra_to_json(a: &AInfAlgebra) -> AlgebraJson {
    let basis = a.names().iter().zip(a.degrees()).map(|(n, d)| BasisJson { name: n.clone(), degree: *d }).collect();
    let ops = (1..=a.cap())
        .map(|k| {
            let m: &MultiLinear = a.op(k).expect("k within cap");
            let entries = m
                .entries()
                .map(|(i, o, c)| EntryJson { inputs: i.to_vec(), output: o, coeff: rational_to_string(c) })
                .collect();
            OpJson { arity: k, entries }
        })
        .collect();
    AlgebraJson { basis, max_arity: a.cap(), ops }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<AInfAlgebra, FormatError> {
    let names: Vec<String> = j.basis.iter().map(|b| b.name.clone()).collect();
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = names.iter().find(|n| !seen.insert(*n)) {
        return Err(FormatError::Algebra(format!("basis name `{dup}` repeats")));
    }
    let degrees = j.basis.iter().map(|b| b.degree).collect();
    let mut a = AInfAlgebra::new(names, degrees, j.max_arity).map_err(|e| FormatError::Algebra(e.to_string()))?;
    let mut arities = std::collections::BTreeSet::new();
    for op in &j.ops {
        if !arities.insert(op.arity) {
            return Err(FormatError::Algebra(format!("m_{} listed twice", op.arity)));
        }
        let mut prev: Option<(&[usize], usize)> = None;
        for e in &op.entries {
            let c = rational_from_str(&e.coeff)?;
            if c == Q::from_integer(0.into()) {
                return Err(FormatError::ZeroCoefficient(format!("m_{} {:?} -> {}", op.arity, e.inputs, e.output)));
            }
            let key = (&e.inputs[..], e.output);
            if prev.is_some_and(|p| p >= key) {
                return Err(FormatError::Algebra(format!("m_{} entries are not strictly sorted", op.arity)));
            }
            prev = Some(key);
            a.add_entry(op.arity, e.inputs.clone(), e.output, c).map_err(|e| FormatError::Algebra(e.to_string()))?;
        }
    }
    if arities != (1..=j.max_arity).collect() {
        return Err(FormatError::Algebra(format!("ops must list arities 1..={}", j.max_arity)));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    /// Unknown indices, with repetition for powers.
    pub vars: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PivotJson {
    pub equation: usize,
    pub var: u32,
    /// The substituted value, readable.
    pub display: String,
    pub value: Vec<MonomialJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseJson {
    pub var: u32,
    pub value: String,
    pub trace: TraceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutcomeJson {
    Contradiction { equation: usize },
    Solved,
    Split { equation: usize, cases: Vec<CaseJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceJson {
    pub pivots: Vec<PivotJson>,
    pub outcome: OutcomeJson,
}

/// An arity-4 infeasibility certificate over the rationals. Equation
/// indices refer to the system regenerated from `branch`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub branch: String,
    pub unknowns: Vec<String>,
    pub chain_map_equations: usize,
    pub coassoc_equations: usize,
    pub equations_used: Vec<usize>,
    pub trace: TraceJson,
    pub text: String,
}

fn trace_to_json(t: &Trace<Q>, name: &dyn Fn(u32) -> String) -> TraceJson {
    let pivots = t
        .pivots
        .iter()
        .map(|p| PivotJson {
            equation: p.equation,
            var: p.var,
            display: format!("{} := {}", name(p.var), rename(&p.value, name)),
            value: p.value.terms().map(|(m, c)| MonomialJson { vars: m.clone(), coeff: rational_to_string(c) }).collect(),
        })
        .collect();
    let outcome = match &t.outcome {
        Outcome::Contradiction { equation } => OutcomeJson::Contradiction { equation: *equation },
        Outcome::Solved => OutcomeJson::Solved,
        Outcome::Split { equation, cases } => OutcomeJson::Split {
            equation: *equation,
            cases: cases
                .iter()
                .map(|c| CaseJson { var: c.var, value: rational_to_string(&c.value), trace: trace_to_json(&c.trace, name) })
                .collect(),
        },
    };
    TraceJson { pivots, outcome }
}

fn trace_from_json(t: &TraceJson) -> Result<Trace<Q>, FormatError> {
    let mut pivots = Vec::new();
    for p in &t.pivots {
        let mut value = Poly::zero();
        for m in &p.value {
            value.add_term(m.vars.clone(), rational_from_str(&m.coeff)?);
        }
        pivots.push(Pivot { equation: p.equation, var: p.var, value });
    }
    let outcome = match &t.outcome {
        OutcomeJson::Contradiction { equation } => Outcome::Contradiction { equation: *equation },
        OutcomeJson::Solved => Outcome::Solved,
        OutcomeJson::Split { equation, cases } => {
            let mut out = Vec::new();
            for c in cases {
                out.push(Case { var: c.var, value: rational_from_str(&c.value)?, trace: trace_from_json(&c.trace)? });
            }
            Outcome::Split { equation: *equation, cases: out }
        }
    };
    Ok(Trace { pivots, outcome })
}

pub fn branch_from_name(name: &str) -> Result<Branch, FormatError> {
    Branch::ALL.into_iter().find(|b| b.name() == name).ok_or_else(|| FormatError::Branch(name.to_string()))
}

pub fn certificate_to_json(c: &Certificate<Q>) -> CertificateJson {
    let name = |v: u32| c.system.name(v);
    CertificateJson {
        branch: c.branch.name().to_string(),
        unknowns: c.system.names.clone(),
        chain_map_equations: c.system.chain_len(),
        coassoc_equations: c.system.equations.len() - c.system.chain_len(),
        equations_used: c.equations_used(),
        trace: trace_to_json(&c.trace, &name),
        text: c.render(),
    }
}

/// Rebuilds a certificate, regenerating its system from the branch.
pub fn certificate_from_json(j: &CertificateJson) -> Result<Certificate<Q>, FormatError> {
    let branch = branch_from_name(&j.branch)?;
    let system = arity4_system::<Q>(branch);
    Ok(Certificate { branch, system, trace: trace_from_json(&j.trace)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use associahedra::diagonal::{coassoc_defect, su_diagonal};

    #[test]
    fn chain_example() {
        let x = Chain::basis(PlanarTree::corolla(3)).boundary();
        let text = render(&chain_to_json(&x));
        let compact: String = text.split_whitespace().collect();
        // coefficients are against canonical orientations, not ξ-shorthand
        assert_eq!(
            compact,
            r#"{"complex":"K","n":3,"terms":[{"coeff":1,"tree":"((**)*)"},{"coeff":1,"tree":"(*(**))"}]}"#
        );
        assert_eq!(AnyChain::parse(&text).unwrap(), AnyChain::K(x));
    }

    #[test]
    fn w_cells_carry_nonmetric_lists() {
        let w = MetricTree::parse("((**)!(**))").unwrap();
        let x = Chain::term(w, -2);
        let j = chain_to_json(&x);
        assert_eq!(j.terms[0].nonmetric, Some(vec![1]));
        assert_eq!(j.terms[0].tree, "((**)(**))");
        assert_eq!(chain_from_json::<MetricTree>(&j).unwrap(), x);
        assert!(matches!(chain_from_json::<PlanarTree>(&j), Err(FormatError::Complex { .. })));
    }

    #[test]
    fn rejects_non_canonical_input() {
        let dup = r#"{"complex":"K","n":2,"terms":[{"coeff":1,"tree":"(**)"},{"coeff":1,"tree":"(**)"}]}"#;
        assert!(matches!(AnyChain::parse(dup), Err(FormatError::Duplicate(_))));
        let zero = r#"{"complex":"K","n":2,"terms":[{"coeff":0,"tree":"(**)"}]}"#;
        assert!(matches!(AnyChain::parse(zero), Err(FormatError::ZeroCoefficient(_))));
        let arity = r#"{"complex":"K","n":3,"terms":[{"coeff":1,"tree":"(**)"}]}"#;
        assert!(matches!(AnyChain::parse(arity), Err(FormatError::Arity(..))));
        let extra = r#"{"complex":"K","n":2,"terms":[],"x":1}"#;
        assert!(matches!(AnyChain::parse(extra), Err(FormatError::Json(_))));
        assert!(rational_from_str("2/4").is_err());
        assert_eq!(rational_from_str("-1/2").unwrap(), Q::new((-1).into(), 2.into()));
    }

    #[test]
    fn tensor_and_triple_round_trip() {
        let d = su_diagonal(&Chain::basis(PlanarTree::corolla(4)));
        let j = tensor_to_json(&d);
        let text = render(&j);
        let back: TensorChainJson = serde_json::from_str(&text).unwrap();
        assert_eq!(tensor_from_json::<PlanarTree>(&back).unwrap(), d);
        assert_eq!(render(&back), text);
        let t = coassoc_defect(4).unwrap();
        let text = render(&triple_to_json(&t));
        let back: TripleChainJson = serde_json::from_str(&text).unwrap();
        assert_eq!(triple_from_json::<PlanarTree>(&back).unwrap(), t);
        assert_eq!(render(&triple_to_json(&triple_from_json::<PlanarTree>(&back).unwrap())), text);
    }

    #[test]
    fn certificate_round_trip_replays() {
        let (cert, _) = associahedra::coassoc::search_arity4::<Q>(Branch::Flip).unwrap();
        let j = certificate_to_json(&cert);
        let text = render(&j);
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let rebuilt = certificate_from_json(&back).unwrap();
        assert_eq!(rebuilt.trace, cert.trace);
        assert!(rebuilt.check().unwrap().infeasible());
    }
}
