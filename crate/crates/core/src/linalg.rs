//! Exact algebra over a field: sparse polynomials, dense linear solves, and a
//! branching elimination solver for small polynomial systems whose runs are
//! recorded as replayable certificates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const CHARACTERISTIC: u64;

    fn from_i64(x: i64) -> Self;

    /// All roots of `Σ coeffs[k] x^k` (not identically zero), or `None` when
    /// the field cannot decide them.
    fn roots(coeffs: &[Self]) -> Option<Vec<Self>>;
}

fn trim<F: Field>(coeffs: &[F]) -> &[F] {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &coeffs[..len]
}

impl Field for BigRational {
    const CHARACTERISTIC: u64 = 0;

    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }

    fn roots(coeffs: &[Self]) -> Option<Vec<Self>> {
        match trim(coeffs) {
            [] => None,
            [_] => Some(Vec::new()),
            [c, b] => Some(vec![-c.clone() / b.clone()]),
            [c, b, a] => {
                let disc = b * b - BigRational::from_i64(4) * a * c;
                if disc.is_negative() {
                    return Some(Vec::new());
                }
                let (num, den) = (disc.numer(), disc.denom());
                let (rn, rd) = (num.sqrt(), den.sqrt());
                if &(&rn * &rn) != num || &(&rd * &rd) != den {
                    return Some(Vec::new());
                }
                let s = BigRational::new(rn, rd);
                let two_a = BigRational::from_i64(2) * a.clone();
                let mut r = vec![(-b.clone() + s.clone()) / two_a.clone(), (-b.clone() - s) / two_a];
                r.sort();
                r.dedup();
                Some(r)
            }
            _ => None,
        }
    }
}

/// The prime field `Z/P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(x: i64) -> Self {
        Fp(x.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let (mut base, mut acc) = (self, Fp(1 % P));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in Z/{P}");
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn from_i64(x: i64) -> Self {
        Fp::new(x)
    }

    fn roots(coeffs: &[Self]) -> Option<Vec<Self>> {
        let c = trim(coeffs);
        if c.is_empty() || P > 1 << 16 {
            return None;
        }
        Some(
            (0..P)
                .map(Fp)
                .filter(|x| c.iter().rev().fold(Fp(0), |acc, k| acc * *x + *k).is_zero())
                .collect(),
        )
    }
}

pub type Var = u32;

/// A monomial as a sorted list of variables with repetition.
pub type Monomial = Vec<Var>;

/// A sparse polynomial with no zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: F) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![v], F::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mut m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        let slot = self.terms.entry(m.clone()).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly<F>, k: &F) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone() * k.clone());
        }
    }

    pub fn scaled(&self, k: &F) -> Self {
        let mut p = Poly::zero();
        p.add_scaled(self, k);
        p
    }

    pub fn mul(&self, other: &Poly<F>) -> Self {
        let mut p = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend(b);
                p.add_term(m, x.clone() * y.clone());
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &[Var]) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&[])
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flatten().copied().collect()
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn subst(&self, v: Var, value: &Poly<F>) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut rest = Vec::new();
            for &x in m {
                if x == v {
                    term = term.mul(value);
                } else {
                    rest.push(x);
                }
            }
            for (tm, tc) in term.terms {
                let mut mm = rest.clone();
                mm.extend(tm);
                out.add_term(mm, tc);
            }
        }
        out
    }

    /// Coefficients `c_0, c_1, …` when the polynomial involves only `v`.
    pub fn univariate(&self, v: Var) -> Option<Vec<F>> {
        let mut out = vec![F::zero(); self.degree() + 1];
        for (m, c) in &self.terms {
            if m.iter().any(|&x| x != v) {
                return None;
            }
            out[m.len()] = c.clone();
        }
        Some(out)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first, then by variables
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let text = alloc::format!("{c}");
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, String::from(rest)),
                None => (false, text),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m.iter().map(|v| alloc::format!("x{v}")).collect();
            match (m.is_empty(), mag == "1") {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Row reduction of a dense matrix; pivots record `(row, column)`.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    /// Reduced row echelon form of `rows`, each of length `cols`.
    pub fn new(mut rows: Vec<Vec<F>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = F::one() / rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let k = rows[i][c].clone();
                    for j in 0..cols {
                        let v = rows[r][j].clone() * k.clone();
                        rows[i][j] = rows[i][j].clone() - v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rank<F: Field>(rows: Vec<Vec<F>>, cols: usize) -> usize {
    Echelon::new(rows, cols).rank()
}

/// The affine solution set `particular + span(kernel)` of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<F: Field> {
    pub particular: Vec<F>,
    pub kernel: Vec<Vec<F>>,
}

/// Solves `A x = b` for dense `A` (rows of length `cols`).
pub fn solve_linear<F: Field>(a: &[Vec<F>], b: &[F], cols: usize) -> Option<AffineSolution<F>> {
    let rows: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = Echelon::new(rows, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![F::zero(); cols];
    for (row, &c) in e.rows.iter().zip(&e.pivots) {
        particular[c] = row[cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &c) in e.rows.iter().zip(&e.pivots) {
                v[c] = -row[f].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

/// One elimination step `x_var := value`, read off equation `equation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pivot<F: Field> {
    pub equation: usize,
    pub var: Var,
    pub value: Poly<F>,
}

/// A branch of a case split: `x_var = value`, followed by `trace`.
#[derive(Clone, Debug, PartialEq)]
pub struct Case<F: Field> {
    pub var: Var,
    pub value: F,
    pub trace: Trace<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<F: Field> {
    /// The equation has become a nonzero constant.
    Contradiction { equation: usize },
    /// Every equation has become zero.
    Solved,
    /// The equation has become univariate (cases are its roots) or a single
    /// monomial (cases set each of its variables to zero).
    Split { equation: usize, cases: Vec<Case<F>> },
}

/// A replayable record of an elimination run. Equation indices refer to the
/// input list; substitutions are applied to every equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<F: Field> {
    pub pivots: Vec<Pivot<F>>,
    pub outcome: Outcome<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("no linear, univariate or monomial equation left among {0} nonzero equations")]
    Stuck(usize),
    #[error("cannot decide the roots of equation {0}")]
    Roots(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("equation {equation}: {reason}")]
    Step { equation: usize, reason: &'static str },
    #[error("equation index {0} out of range")]
    Index(usize),
}

/// Solves `eqs = 0` by linear elimination, splitting on univariate equations
/// and on single monomials when no linear equation is left.
pub fn eliminate<F: Field>(eqs: &[Poly<F>]) -> Result<Trace<F>, SolveError> {
    let mut eqs = eqs.to_vec();
    let mut pivots = Vec::new();
    loop {
        if let Some(i) = eqs.iter().position(|e| !e.is_zero() && e.degree() == 0) {
            return Ok(Trace { pivots, outcome: Outcome::Contradiction { equation: i } });
        }
        let linear = eqs.iter().position(|e| e.degree() == 1);
        let Some(i) = linear else { break };
        let var = *eqs[i].vars().first().expect("degree one");
        let c = eqs[i].coeff(&[var]);
        let mut value = Poly::zero();
        for (m, k) in eqs[i].terms() {
            if m.as_slice() != [var] {
                value.add_term(m.clone(), -k.clone() / c.clone());
            }
        }
        for e in eqs.iter_mut() {
            *e = e.subst(var, &value);
        }
        pivots.push(Pivot { equation: i, var, value });
    }
    let live = eqs.iter().filter(|e| !e.is_zero()).count();
    if live == 0 {
        return Ok(Trace { pivots, outcome: Outcome::Solved });
    }
    let branch = |eqs: &[Poly<F>], var: Var, value: F| -> Result<Case<F>, SolveError> {
        let v = Poly::constant(value.clone());
        let next: Vec<Poly<F>> = eqs.iter().map(|e| e.subst(var, &v)).collect();
        Ok(Case { var, value, trace: eliminate(&next)? })
    };
    for (i, e) in eqs.iter().enumerate() {
        let vars = e.vars();
        if vars.len() == 1 {
            let var = *vars.first().expect("one variable");
            let coeffs = e.univariate(var).expect("single variable");
            let roots = F::roots(&coeffs).ok_or(SolveError::Roots(i))?;
            let cases = roots.into_iter().map(|r| branch(&eqs, var, r)).collect::<Result<_, _>>()?;
            return Ok(Trace { pivots, outcome: Outcome::Split { equation: i, cases } });
        }
    }
    for (i, e) in eqs.iter().enumerate() {
        if e.terms().count() == 1 {
            let cases = e.vars().into_iter().map(|v| branch(&eqs, v, F::zero())).collect::<Result<_, _>>()?;
            return Ok(Trace { pivots, outcome: Outcome::Split { equation: i, cases } });
        }
    }
    Err(SolveError::Stuck(live))
}

/// A solution read off a `Solved` leaf: each assigned variable as a
/// polynomial in the variables left free.
pub type Solution<F> = BTreeMap<Var, Poly<F>>;

/// What a verified trace proves.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<F: Field> {
    pub contradictions: usize,
    pub solutions: Vec<Solution<F>>,
}

impl<F: Field> Verdict<F> {
    pub fn infeasible(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Replays `trace` against `eqs`, checking every step from scratch.
pub fn verify<F: Field>(eqs: &[Poly<F>], trace: &Trace<F>) -> Result<Verdict<F>, VerifyError> {
    let mut verdict = Verdict { contradictions: 0, solutions: Vec::new() };
    replay(eqs.to_vec(), trace, &mut Vec::new(), &mut verdict)?;
    Ok(verdict)
}

fn replay<F: Field>(
    mut eqs: Vec<Poly<F>>,
    trace: &Trace<F>,
    assigned: &mut Vec<(Var, Poly<F>)>,
    verdict: &mut Verdict<F>,
) -> Result<(), VerifyError> {
    let depth = assigned.len();
    let step = |equation, reason| VerifyError::Step { equation, reason };
    for p in &trace.pivots {
        let e = eqs.get(p.equation).ok_or(VerifyError::Index(p.equation))?;
        if e.degree() != 1 || p.value.degree() > 1 || p.value.vars().contains(&p.var) {
            return Err(step(p.equation, "pivot equation or value is not linear"));
        }
        let c = e.coeff(&[p.var]);
        if c.is_zero() {
            return Err(step(p.equation, "pivot variable does not occur"));
        }
        // e must be c·(x - value)
        let mut check = Poly::var(p.var);
        check.add_scaled(&p.value, &-F::one());
        if &check.scaled(&c) != e {
            return Err(step(p.equation, "substitution does not solve the equation"));
        }
        eqs = eqs.iter().map(|x| x.subst(p.var, &p.value)).collect();
        assigned.push((p.var, p.value.clone()));
    }
    match &trace.outcome {
        Outcome::Contradiction { equation } => {
            let e = eqs.get(*equation).ok_or(VerifyError::Index(*equation))?;
            if e.is_zero() || e.degree() != 0 {
                return Err(step(*equation, "not a nonzero constant"));
            }
            verdict.contradictions += 1;
        }
        Outcome::Solved => {
            if let Some(i) = eqs.iter().position(|e| !e.is_zero()) {
                return Err(step(i, "equation left unsolved"));
            }
            let mut sol: Solution<F> = BTreeMap::new();
            for (v, value) in assigned.iter().rev() {
                let mut x = value.clone();
                for (w, wv) in &sol {
                    x = x.subst(*w, wv);
                }
                sol.insert(*v, x);
            }
            verdict.solutions.push(sol);
        }
        Outcome::Split { equation, cases } => {
            let e = eqs.get(*equation).ok_or(VerifyError::Index(*equation))?.clone();
            let vars = e.vars();
            if vars.len() == 1 {
                let var = *vars.first().expect("one variable");
                let roots = F::roots(&e.univariate(var).expect("one variable"))
                    .ok_or(step(*equation, "roots undecidable"))?;
                let listed: Vec<&F> = cases.iter().map(|c| &c.value).collect();
                if cases.iter().any(|c| c.var != var) || listed.len() != roots.len() || roots.iter().any(|r| !listed.contains(&r))
                {
                    return Err(step(*equation, "cases are not the roots"));
                }
            } else {
                let single = e.terms().count() == 1;
                let case_vars: BTreeSet<Var> = cases.iter().map(|c| c.var).collect();
                if !single || case_vars != vars || cases.len() != vars.len() || cases.iter().any(|c| !c.value.is_zero()) {
                    return Err(step(*equation, "cases do not cover the monomial"));
                }
            }
            for c in cases {
                let v = Poly::constant(c.value.clone());
                let next = eqs.iter().map(|x| x.subst(c.var, &v)).collect();
                assigned.push((c.var, v));
                replay(next, &c.trace, assigned, verdict)?;
                assigned.pop();
            }
        }
    }
    assigned.truncate(depth);
    Ok(())
}

impl<F: Field> Trace<F> {
    /// Number of leaves of the case tree.
    pub fn leaves(&self) -> usize {
        match &self.outcome {
            Outcome::Split { cases, .. } => cases.iter().map(|c| c.trace.leaves()).sum(),
            _ => 1,
        }
    }

    /// Writes the trace as indented text, naming variables with `name`.
    pub fn render(&self, name: &dyn Fn(Var) -> String) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, name);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize, name: &dyn Fn(Var) -> String) {
        use core::fmt::Write;
        let pad = "  ".repeat(depth);
        for p in &self.pivots {
            let _ = writeln!(out, "{pad}eq {}: {} := {}", p.equation, name(p.var), rename(&p.value, name));
        }
        match &self.outcome {
            Outcome::Contradiction { equation } => {
                let _ = writeln!(out, "{pad}eq {equation}: nonzero constant, contradiction");
            }
            Outcome::Solved => {
                let _ = writeln!(out, "{pad}all equations satisfied");
            }
            Outcome::Split { equation, cases } => {
                let _ = writeln!(out, "{pad}eq {equation}: split into {} cases", cases.len());
                for c in cases {
                    let _ = writeln!(out, "{pad}case {} = {}", name(c.var), c.value);
                    c.trace.render_into(out, depth + 1, name);
                }
            }
        }
    }
}

/// Renders a polynomial with custom variable names.
pub fn rename<F: Field>(p: &Poly<F>, name: &dyn Fn(Var) -> String) -> String {
    let raw = alloc::format!("{p}");
    let mut vars: Vec<Var> = p.vars().into_iter().collect();
    // longest indices first so x12 is not rewritten as x1 followed by 2
    vars.sort_by_key(|v| core::cmp::Reverse(alloc::format!("{v}").len()));
    let mut out = raw;
    for v in vars {
        out = out.replace(&alloc::format!("x{v}"), &alloc::format!("\u{1}{}\u{2}", name(v)));
    }
    out.replace(['\u{1}', '\u{2}'], "")
}
