//! Finite-dimensional A∞-algebras over the rationals, the action of
//! `C_*(K)` on them, the Stasheff check, and the tensor product induced by
//! `Δ^su`.
//!
//! Degrees are homological: `m_k` has degree `k - 2`. Multilinear maps
//! compose in the endomorphism operad with the Koszul rule
//! `(f ∘_i g)(x_1, …) = (-1)^{|g|(|x_1| + … + |x_{i-1}|)} f(x_1, …, g(x_i, …), …)`,
//! and `∂f = m_1 ∘ f - (-1)^{|f|} Σ_j f ∘_j m_1`. An A∞-structure is a family
//! `m_k` for which `act(∂c(k)) = ∂m_k`, where `act` sends `(c(k), 1)` to `m_k`
//! and is extended along the operadic decomposition of cells.

use crate::chain::{compose_k_cells, Chain, KChain};
use crate::diagonal::Diagonal;
use crate::linalg::Field;
use crate::tree::raw::Raw;
use crate::tree::PlanarTree;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AInfError {
    #[error("arity {0} exceeds the arity cap {1}")]
    ArityBeyondCap(usize, usize),
    #[error("m_{arity} entry {inputs:?} -> {output} has the wrong degree")]
    DegreeMismatch { arity: usize, inputs: Vec<usize>, output: usize },
    #[error("basis index {0} out of range")]
    BasisIndex(usize),
    #[error("m_{0} must take {0} inputs")]
    InputCount(usize),
    #[error("basis names and degrees differ in length")]
    Basis,
    #[error("operations start at arity 1")]
    ZeroArity,
}

fn koszul(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// A homogeneous multilinear map `V^{⊗k} -> V`, stored sparsely as
/// `inputs -> (output -> coefficient)` with no zero entries. Zero maps of the
/// same arity compare equal whatever their degree.
#[derive(Clone, Debug, Eq)]
pub struct MultiLinear {
    arity: usize,
    degree: i64,
    entries: BTreeMap<Vec<usize>, BTreeMap<usize, Q>>,
}

impl PartialEq for MultiLinear {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.entries == other.entries && (self.degree == other.degree || self.is_zero())
    }
}

impl MultiLinear {
    pub fn zero(arity: usize, degree: i64) -> MultiLinear {
        MultiLinear { arity, degree, entries: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, inputs: Vec<usize>, output: usize, c: Q) {
        debug_assert_eq!(inputs.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let row = self.entries.entry(inputs.clone()).or_default();
        let slot = row.entry(output).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            row.remove(&output);
            if row.is_empty() {
                self.entries.remove(&inputs);
            }
        }
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&BTreeMap<usize, Q>> {
        self.entries.get(inputs)
    }

    pub fn coeff(&self, inputs: &[usize], output: usize) -> Q {
        self.get(inputs).and_then(|r| r.get(&output)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, &Q)> {
        self.entries.iter().flat_map(|(i, row)| row.iter().map(move |(o, c)| (i.as_slice(), *o, c)))
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_scaled(&mut self, other: &MultiLinear, k: &Q) {
        debug_assert_eq!(self.arity, other.arity);
        for (i, o, c) in other.entries() {
            self.add_entry(i.to_vec(), o, c.clone() * k.clone());
        }
    }

    pub fn scaled(&self, k: &Q) -> MultiLinear {
        let mut out = MultiLinear::zero(self.arity, self.degree);
        out.add_scaled(self, k);
        out
    }

    /// `self ∘_i g` (`i` is 1-based) with the Koszul sign; `degrees` are the
    /// basis degrees.
    pub fn compose(&self, i: usize, g: &MultiLinear, degrees: &[i64]) -> MultiLinear {
        let mut out = MultiLinear::zero(self.arity + g.arity - 1, self.degree + g.degree);
        let mut by_output: BTreeMap<usize, Vec<(&[usize], &Q)>> = BTreeMap::new();
        for (gi, go, gc) in g.entries() {
            by_output.entry(go).or_default().push((gi, gc));
        }
        for (fi, fo, fc) in self.entries() {
            let Some(gs) = by_output.get(&fi[i - 1]) else { continue };
            let before: i64 = fi[..i - 1].iter().map(|&x| degrees[x]).sum();
            let sign = koszul(g.degree * before % 2 != 0);
            for (gi, gc) in gs {
                let mut inputs = fi[..i - 1].to_vec();
                inputs.extend_from_slice(gi);
                inputs.extend_from_slice(&fi[i..]);
                out.add_entry(inputs, fo, sign.clone() * fc.clone() * (*gc).clone());
            }
        }
        out
    }

    /// The first entry where `self` and `other` differ, as
    /// `(inputs, output, self value, other value)`.
    pub fn first_difference(&self, other: &MultiLinear) -> Option<(Vec<usize>, usize, Q, Q)> {
        let mut diff = self.clone();
        diff.add_scaled(other, &-Q::one());
        let (i, o, _) = diff.entries().next()?;
        Some((i.to_vec(), o, self.coeff(i, o), other.coeff(i, o)))
    }
}

/// A finite-dimensional A∞-algebra truncated at arity `cap`. The
/// structure is stored as given; [`check_stasheff`] decides validity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfAlgebra {
    names: Vec<String>,
    degrees: Vec<i64>,
    cap: usize,
    /// `ops[k - 1] = m_k`.
    ops: Vec<MultiLinear>,
}

impl AInfAlgebra {
    /// All operations zero.
    pub fn new(names: Vec<String>, degrees: Vec<i64>, cap: usize) -> Result<AInfAlgebra, AInfError> {
        if names.len() != degrees.len() {
            return Err(AInfError::Basis);
        }
        let ops = (1..=cap).map(|k| MultiLinear::zero(k, k as i64 - 2)).collect();
        Ok(AInfAlgebra { names, degrees, cap, ops })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// `m_k`.
    pub fn op(&self, k: usize) -> Result<&MultiLinear, AInfError> {
        match k {
            0 => Err(AInfError::ZeroArity),
            k if k > self.cap => Err(AInfError::ArityBeyondCap(k, self.cap)),
            k => Ok(&self.ops[k - 1]),
        }
    }

    fn check_entry(&self, k: usize, inputs: &[usize], output: usize) -> Result<(), AInfError> {
        if k == 0 {
            return Err(AInfError::ZeroArity);
        }
        if k > self.cap {
            return Err(AInfError::ArityBeyondCap(k, self.cap));
        }
        if inputs.len() != k {
            return Err(AInfError::InputCount(k));
        }
        if let Some(&bad) = inputs.iter().chain([&output]).find(|&&x| x >= self.dim()) {
            return Err(AInfError::BasisIndex(bad));
        }
        let d: i64 = inputs.iter().map(|&x| self.degrees[x]).sum::<i64>() + k as i64 - 2;
        if d != self.degrees[output] {
            return Err(AInfError::DegreeMismatch { arity: k, inputs: inputs.to_vec(), output });
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of `output` in `m_k(inputs)`.
    pub fn add_entry(&mut self, k: usize, inputs: Vec<usize>, output: usize, c: Q) -> Result<(), AInfError> {
        self.check_entry(k, &inputs, output)?;
        self.ops[k - 1].add_entry(inputs, output, c);
        Ok(())
    }

    /// Replaces `m_k`.
    pub fn set_op(&mut self, k: usize, m: MultiLinear) -> Result<(), AInfError> {
        if m.arity != k {
            return Err(AInfError::InputCount(k));
        }
        for (i, o, _) in m.entries() {
            self.check_entry(k, i, o)?;
        }
        self.ops[k - 1] = MultiLinear { degree: k as i64 - 2, ..m };
        Ok(())
    }

    /// The differential of the endomorphism operad.
    pub fn d_end(&self, f: &MultiLinear) -> MultiLinear {
        let m1 = &self.ops[0];
        let mut out = m1.compose(1, f, &self.degrees);
        let sign = koszul(f.degree % 2 == 0);
        for j in 1..=f.arity {
            out.add_scaled(&f.compose(j, m1, &self.degrees), &sign);
        }
        out
    }

    /// The operadic action of a canonically oriented cell.
    pub fn act_cell(&self, t: &PlanarTree) -> Result<MultiLinear, AInfError> {
        Action::new(self).cell(t)
    }

    /// The action of a chain of `K_n`.
    pub fn act(&self, x: &KChain) -> Result<MultiLinear, AInfError> {
        Action::new(self).chain(x)
    }
}

/// Evaluates the action with a cache of cells.
pub struct Action<'a> {
    alg: &'a AInfAlgebra,
    cache: BTreeMap<PlanarTree, MultiLinear>,
}

impl<'a> Action<'a> {
    pub fn new(alg: &'a AInfAlgebra) -> Action<'a> {
        Action { alg, cache: BTreeMap::new() }
    }

    /// `act(T)`: corollas go to `m_k`; otherwise `T = ± T' ∘_i c(s)` for a
    /// vertex of leaves and `act(T) = ± act(T') ∘_i m_s`.
    pub fn cell(&mut self, t: &PlanarTree) -> Result<MultiLinear, AInfError> {
        if let Some(v) = self.cache.get(t) {
            return Ok(v.clone());
        }
        let v = if t.is_corolla() {
            self.alg.op(t.leaves())?.clone()
        } else {
            let (tag, _) = t
                .0
                .vertices()
                .into_iter()
                .skip(1)
                .find(|(tag, _)| t.0.find(*tag).is_some_and(|v| v.kids().iter().all(Raw::is_leaf)))
                .expect("a tree with an edge has a vertex of leaves below the root");
            let (outer, i, inner) = t.0.cut(tag);
            let outer = PlanarTree(outer.canonical());
            let s = inner.leaves();
            let (_, sign) = compose_k_cells(&outer, i, &PlanarTree::corolla(s)).expect("leaf index in range");
            let left = self.cell(&outer)?;
            left.compose(i, self.alg.op(s)?, &self.alg.degrees).scaled(&Q::from_i64(sign as i64))
        };
        self.cache.insert(t.clone(), v.clone());
        Ok(v)
    }

    pub fn chain(&mut self, x: &KChain) -> Result<MultiLinear, AInfError> {
        let n = x.arity();
        let mut out = MultiLinear::zero(n, x.degree().unwrap_or(0) as i64 + n as i64 - 2);
        for (t, c) in x.iter() {
            out.add_scaled(&self.cell(t)?, &Q::from_i64(c));
        }
        Ok(out)
    }
}

/// The first violated identity found by [`check_stasheff`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StasheffFailure {
    pub arity: usize,
    pub inputs: Vec<usize>,
    pub output: usize,
    /// Coefficient in `act(∂c(n))`.
    pub expected: Q,
    /// Coefficient in `∂m_n`.
    pub actual: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StasheffReport {
    pub max_arity: usize,
    pub failure: Option<StasheffFailure>,
}

impl StasheffReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `m_1 m_1 = 0` and `act(∂c(n)) = ∂m_n` for `2 <= n <= max_arity`.
pub fn check_stasheff(a: &AInfAlgebra, max_arity: usize) -> Result<StasheffReport, AInfError> {
    if max_arity > a.cap {
        return Err(AInfError::ArityBeyondCap(max_arity, a.cap));
    }
    let fail = |arity, (inputs, output, expected, actual)| StasheffReport {
        max_arity,
        failure: Some(StasheffFailure { arity, inputs, output, expected, actual }),
    };
    if max_arity >= 1 {
        let m1 = a.op(1)?;
        let sq = m1.compose(1, m1, &a.degrees);
        if let Some(d) = MultiLinear::zero(1, -2).first_difference(&sq) {
            return Ok(fail(1, d));
        }
    }
    let mut action = Action::new(a);
    for n in 2..=max_arity {
        let lhs = action.chain(&Chain::basis(PlanarTree::corolla(n)).boundary())?;
        let rhs = a.d_end(a.op(n)?);
        if let Some(d) = lhs.first_difference(&rhs) {
            return Ok(fail(n, d));
        }
    }
    Ok(StasheffReport { max_arity, failure: None })
}

/// `A ⊙ B` on `V ⊗ W` (basis `(v, w)` at index `v·dim W + w`), truncated at
/// `cap`. `m_1` and `m_2` are the tensor differential and the Koszul
/// product; `m_k` sums `act(u) ⊗ act(t)` over the terms of `Δ^su(c(k))`.
pub fn tensor_product(a: &AInfAlgebra, b: &AInfAlgebra, cap: usize) -> Result<AInfAlgebra, AInfError> {
    tensor_product_with(a, b, cap, &mut Diagonal::new())
}

/// [`tensor_product`] reusing the diagonal's caches.
pub fn tensor_product_with(a: &AInfAlgebra, b: &AInfAlgebra, cap: usize, diag: &mut Diagonal) -> Result<AInfAlgebra, AInfError> {
    for alg in [a, b] {
        if cap > alg.cap {
            return Err(AInfError::ArityBeyondCap(cap, alg.cap));
        }
    }
    let (da, db) = (a.dim(), b.dim());
    let mut names = Vec::with_capacity(da * db);
    let mut degrees = Vec::with_capacity(da * db);
    for x in 0..da {
        for y in 0..db {
            names.push(format!("{}⊗{}", a.names[x], b.names[y]));
            degrees.push(a.degrees[x] + b.degrees[y]);
        }
    }
    let mut out = AInfAlgebra::new(names, degrees, cap)?;
    let pair = |x: usize, y: usize| x * db + y;
    if cap >= 1 {
        let mut m1 = MultiLinear::zero(1, -1);
        for (i, o, c) in a.op(1)?.entries() {
            for y in 0..db {
                m1.add_entry(vec![pair(i[0], y)], pair(o, y), c.clone());
            }
        }
        for (i, o, c) in b.op(1)?.entries() {
            for x in 0..da {
                m1.add_entry(vec![pair(x, i[0])], pair(x, o), koszul(a.degrees[x] % 2 != 0) * c.clone());
            }
        }
        out.ops[0] = m1;
    }
    let (mut act_a, mut act_b) = (Action::new(a), Action::new(b));
    for k in 2..=cap {
        let mut mk = MultiLinear::zero(k, k as i64 - 2);
        for ((u, t), c) in diag.su_cell(&PlanarTree::corolla(k)).iter() {
            let (fu, ft) = (act_a.cell(u)?, act_b.cell(t)?);
            let coeff = Q::from_i64(c);
            for (xs, xo, xc) in fu.entries() {
                let sx: i64 = xs.iter().map(|&x| a.degrees[x]).sum();
                for (ys, yo, yc) in ft.entries() {
                    // shuffle y_i past x_j for i < j, then act(t) past all x
                    let mut s = ft.degree * sx;
                    for (i, &y) in ys.iter().enumerate() {
                        for &x in &xs[i + 1..] {
                            s += b.degrees[y] * a.degrees[x];
                        }
                    }
                    let inputs = xs.iter().zip(ys).map(|(&x, &y)| pair(x, y)).collect();
                    mk.add_entry(inputs, pair(xo, yo), koszul(s % 2 != 0) * coeff.clone() * xc.clone() * yc.clone());
                }
            }
        }
        out.ops[k - 1] = mk;
    }
    Ok(out)
}

pub mod random {
    //! Random valid A∞-algebras of dimension at most 3, built from small
    //! associative templates by solving for higher operations.

    use super::*;
    use crate::linalg::solve_linear;
    use rand::Rng;

    /// Associative dg-algebra templates: `0` is `t, t², t³` with `|t| = -1`;
    /// `1` is `{x: 1, y: 0}` with `m_1 x = y` and `y` a unit; `2` is
    /// `{a: -1, b: -1, c: -2}` with `m_2(a, b) = c`.
    pub fn template(which: usize, cap: usize) -> AInfAlgebra {
        let s = |v: &[&str]| v.iter().map(|x| String::from(*x)).collect::<Vec<_>>();
        let one = Q::one;
        match which % 3 {
            0 => {
                let mut a = AInfAlgebra::new(s(&["t", "t2", "t3"]), vec![-1, -2, -3], cap).expect("basis");
                for (i, j) in [(0, 0), (0, 1), (1, 0)] {
                    a.add_entry(2, vec![i, j], i + j + 1, one()).expect("degree");
                }
                a
            }
            1 => {
                let mut a = AInfAlgebra::new(s(&["x", "y"]), vec![1, 0], cap).expect("basis");
                a.add_entry(1, vec![0], 1, one()).expect("degree");
                for (i, j, o) in [(1, 1, 1), (1, 0, 0), (0, 1, 0)] {
                    a.add_entry(2, vec![i, j], o, one()).expect("degree");
                }
                a
            }
            _ => {
                let mut a = AInfAlgebra::new(s(&["a", "b", "c"]), vec![-1, -1, -2], cap).expect("basis");
                a.add_entry(2, vec![0, 1], 2, one()).expect("degree");
                a
            }
        }
    }

    /// Every `(inputs, output)` slot of `m_k` allowed by degrees.
    fn slots(a: &AInfAlgebra, k: usize) -> Vec<(Vec<usize>, usize)> {
        let d = a.dim();
        let mut out = Vec::new();
        let mut idx = vec![0usize; k];
        loop {
            let deg: i64 = idx.iter().map(|&x| a.degrees[x]).sum::<i64>() + k as i64 - 2;
            for o in 0..d {
                if a.degrees[o] == deg {
                    out.push((idx.clone(), o));
                }
            }
            let mut p = k;
            loop {
                if p == 0 {
                    return out;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < d {
                    break;
                }
                idx[p] = 0;
            }
        }
    }

    /// Residuals of the identities in `arities`, flattened in a fixed order.
    fn residual(a: &AInfAlgebra, arities: &[usize]) -> BTreeMap<(usize, Vec<usize>, usize), Q> {
        let mut out = BTreeMap::new();
        let mut action = Action::new(a);
        for &n in arities {
            let mut r = action.chain(&Chain::basis(PlanarTree::corolla(n)).boundary()).expect("arity within cap");
            r.add_scaled(&a.d_end(a.op(n).expect("arity within cap")), &-Q::one());
            for (i, o, c) in r.entries() {
                out.insert((n, i.to_vec(), o), c.clone());
            }
        }
        out
    }

    /// Solves for the slots of `free` (arity, slots) so that the identities in
    /// `arities` hold, picking a random point of the solution space.
    fn solve<R: Rng>(rng: &mut R, a: &mut AInfAlgebra, free: &[usize], arities: &[usize]) -> bool {
        let unknowns: Vec<(usize, Vec<usize>, usize)> =
            free.iter().flat_map(|&k| slots(a, k).into_iter().map(move |(i, o)| (k, i, o))).collect();
        for &k in free {
            a.ops[k - 1] = MultiLinear::zero(k, k as i64 - 2);
        }
        let r0 = residual(a, arities);
        let mut columns = Vec::with_capacity(unknowns.len());
        for (k, i, o) in &unknowns {
            a.ops[k - 1].add_entry(i.clone(), *o, Q::one());
            let r = residual(a, arities);
            a.ops[k - 1].add_entry(i.clone(), *o, -Q::one());
            columns.push(r);
        }
        let mut keys: Vec<_> = r0.keys().chain(columns.iter().flat_map(BTreeMap::keys)).cloned().collect();
        keys.sort();
        keys.dedup();
        let get = |m: &BTreeMap<_, Q>, key| m.get(key).cloned().unwrap_or_else(Q::zero);
        let rows: Vec<Vec<Q>> = keys.iter().map(|key| columns.iter().map(|c| get(c, key) - get(&r0, key)).collect()).collect();
        let rhs: Vec<Q> = keys.iter().map(|key| -get(&r0, key)).collect();
        let Some(sol) = solve_linear(&rows, &rhs, unknowns.len()) else {
            return false;
        };
        let mut x = sol.particular;
        for v in &sol.kernel {
            let r = Q::from_i64(rng.gen_range(-2..=2));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += r.clone() * vi.clone();
            }
        }
        for ((k, i, o), c) in unknowns.iter().zip(x) {
            a.ops[k - 1].add_entry(i.clone(), *o, c);
        }
        true
    }

    /// Rescales basis vectors by random nonzero integers.
    fn rescale<R: Rng>(rng: &mut R, a: &AInfAlgebra) -> AInfAlgebra {
        let s: Vec<Q> = (0..a.dim())
            .map(|_| {
                let v = rng.gen_range(1..=3i64);
                Q::from_i64(if rng.gen_bool(0.5) { v } else { -v })
            })
            .collect();
        let mut out = AInfAlgebra::new(a.names.clone(), a.degrees.clone(), a.cap).expect("basis");
        for (k, m) in a.ops.iter().enumerate() {
            for (i, o, c) in m.entries() {
                // e'_j = s_j e_j, so m(e'_i…) = Π s_i / s_o · e'_o
                let num = i.iter().fold(Q::one(), |acc, &x| acc * s[x].clone());
                out.ops[k].add_entry(i.to_vec(), o, c.clone() * num / s[o].clone());
            }
        }
        out
    }

    /// A random A∞-algebra on one of the templates, with `m_3, …, m_cap`
    /// solved from the Stasheff identities (`cap <= 5`).
    pub fn random_algebra<R: Rng>(rng: &mut R, cap: usize) -> AInfAlgebra {
        assert!((2..=5).contains(&cap), "random algebras are built up to arity 5");
        let which = rng.gen_range(0..3);
        loop {
            let mut a = template(which, cap);
            if cap >= 4 && !solve(rng, &mut a, &[3, 4], &[3, 4]) {
                continue;
            }
            if cap == 3 && !solve(rng, &mut a, &[3], &[3]) {
                continue;
            }
            if cap == 5 && !solve(rng, &mut a, &[4, 5], &[4, 5]) {
                continue;
            }
            return rescale(rng, &a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::random::{random_algebra, template};
    use super::*;
    use crate::chain::k_cells;
    use crate::orientation::std_orientation_k;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    #[test]
    fn templates_are_dg_algebras() {
        for w in 0..3 {
            let a = template(w, 5);
            assert!(check_stasheff(&a, 5).unwrap().passed(), "template {w}");
        }
    }

    #[test]
    fn act_on_small_cells() {
        let a = template(0, 4);
        assert_eq!(a.act_cell(&PlanarTree::corolla(2)).unwrap(), *a.op(2).unwrap());
        let min3 = PlanarTree::min(3);
        let xi = std_orientation_k(&min3).unwrap().sign() as i64;
        assert_eq!(xi, -1);
        let m2 = a.op(2).unwrap();
        let (_, s) = compose_k_cells(&PlanarTree::corolla(2), 1, &PlanarTree::corolla(2)).unwrap();
        let composite = m2.compose(1, m2, a.degrees());
        assert_eq!(a.act_cell(&min3).unwrap(), composite.scaled(&q(s as i64)));
        // (t t) t = t³
        assert_eq!(composite.coeff(&[0, 0, 0], 2), q(1));
    }

    #[test]
    fn action_is_operadic_and_a_chain_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let a = random_algebra(&mut rng, 5);
            assert!(check_stasheff(&a, 5).unwrap().passed());
            for na in 2..=4 {
                for nb in 2..=(6 - na) {
                    for x in k_cells(na) {
                        for y in k_cells(nb) {
                            for i in 1..=na {
                                let (xy, s) = compose_k_cells(&x, i, &y).unwrap();
                                let lhs = a.act_cell(&xy).unwrap().scaled(&q(s as i64));
                                let rhs = a.act_cell(&x).unwrap().compose(i, &a.act_cell(&y).unwrap(), a.degrees());
                                assert_eq!(lhs, rhs, "{x} o_{i} {y}");
                            }
                        }
                    }
                }
            }
            for n in 2..=5 {
                for c in k_cells(n) {
                    let lhs = a.act(&Chain::basis(c.clone()).boundary()).unwrap();
                    let rhs = a.d_end(&a.act_cell(&c).unwrap());
                    assert_eq!(lhs, rhs, "{c}");
                }
            }
        }
    }

    #[test]
    fn corrupted_m3_fails_at_arity_3() {
        let mut a = template(1, 4);
        assert!(check_stasheff(&a, 4).unwrap().passed());
        // m_3(y, y, y) = x is not a cycle under m_1
        a.add_entry(3, vec![1, 1, 1], 0, q(1)).unwrap();
        let r = check_stasheff(&a, 4).unwrap();
        assert_eq!(r.failure.map(|f| f.arity), Some(3));
    }

    #[test]
    fn dg_product_matches_tensor_formulas() {
        let (a, b) = (template(1, 2), template(0, 2));
        let p = tensor_product(&a, &b, 2).unwrap();
        let db = b.dim();
        for x in 0..a.dim() {
            for y in 0..db {
                // ∂(x ⊗ y) = ∂x ⊗ y + (-1)^{|x|} x ⊗ ∂y
                let mut want = BTreeMap::new();
                for (o, c) in a.op(1).unwrap().get(&[x]).into_iter().flatten() {
                    *want.entry(o * db + y).or_insert_with(Q::zero) += c.clone();
                }
                for (o, c) in b.op(1).unwrap().get(&[y]).into_iter().flatten() {
                    *want.entry(x * db + o).or_insert_with(Q::zero) += koszul(a.degrees()[x] % 2 != 0) * c.clone();
                }
                want.retain(|_, v: &mut Q| !v.is_zero());
                let got = p.op(1).unwrap().get(&[x * db + y]).cloned().unwrap_or_default();
                assert_eq!(got, want);
            }
        }
        let (m2a, m2b, m2p) = (a.op(2).unwrap(), b.op(2).unwrap(), p.op(2).unwrap());
        for x1 in 0..a.dim() {
            for x2 in 0..a.dim() {
                for y1 in 0..db {
                    for y2 in 0..db {
                        let sign = koszul(b.degrees()[y1] * a.degrees()[x2] % 2 != 0);
                        for xo in 0..a.dim() {
                            for yo in 0..db {
                                let want = sign.clone() * m2a.coeff(&[x1, x2], xo) * m2b.coeff(&[y1, y2], yo);
                                assert_eq!(m2p.coeff(&[x1 * db + y1, x2 * db + y2], xo * db + yo), want);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ground_field_collapse() {
        let mut k = AInfAlgebra::new(vec!["1".into()], vec![0], 5).unwrap();
        k.add_entry(2, vec![0, 0], 0, q(1)).unwrap();
        let p = tensor_product(&k, &k, 5).unwrap();
        assert_eq!(p.op(2).unwrap(), k.op(2).unwrap());
        for n in [1, 3, 4, 5] {
            assert!(p.op(n).unwrap().is_zero(), "m_{n}");
        }
    }

    #[test]
    fn random_products_satisfy_stasheff() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut diag = Diagonal::new();
        for _ in 0..10 {
            let a = random_algebra(&mut rng, 5);
            let b = random_algebra(&mut rng, 5);
            let p = tensor_product_with(&a, &b, 5, &mut diag).unwrap();
            let r = check_stasheff(&p, 5).unwrap();
            assert!(r.passed(), "{:?}", r.failure);
        }
    }

    #[test]
    fn errors() {
        let a = template(0, 3);
        assert_eq!(check_stasheff(&a, 4), Err(AInfError::ArityBeyondCap(4, 3)));
        let mut b = a.clone();
        assert!(matches!(b.add_entry(2, vec![0, 0], 0, q(1)), Err(AInfError::DegreeMismatch { .. })));
        assert_eq!(b.add_entry(2, vec![0, 7], 0, q(1)), Err(AInfError::BasisIndex(7)));
        assert_eq!(tensor_product(&a, &a, 4).unwrap_err(), AInfError::ArityBeyondCap(4, 3));
    }

    #[test]
    fn random_algebras_are_nontrivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut diag = Diagonal::new();
        let mut seen = [0usize; 6];
        let mut product_m3 = 0;
        for _ in 0..20 {
            let a = random_algebra(&mut rng, 5);
            for (k, s) in seen.iter_mut().enumerate().skip(3) {
                *s += usize::from(!a.op(k).unwrap().is_zero());
            }
            let b = random_algebra(&mut rng, 5);
            let p = tensor_product_with(&a, &b, 5, &mut diag).unwrap();
            product_m3 += usize::from(!p.op(3).unwrap().is_zero());
        }
        assert!(seen[3] > 0 && seen[4] > 0 && seen[5] > 0, "{seen:?}");
        assert!(product_m3 > 0);
    }
}
