//! Integer chains on `K_n` and `W_n`, their boundaries, operadic
//! compositions, and tensor powers.
//!
//! Every basis cell is stored with its canonical orientation: the wedge of
//! its internal edges (metric edges for `W`) in ascending [`EdgeId`] order.
//! Formula-level wedges are converted to this basis on the fly.
//!
//! [`EdgeId`]: crate::tree::EdgeId

use crate::tree::raw::Raw;
use crate::tree::{MetricTree, PlanarTree, TreeError};
use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

/// Which cell complex a basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Complex {
    K,
    W,
}

/// A graded basis element with a boundary.
pub trait Basis: Clone + Ord + fmt::Debug {
    fn degree(&self) -> usize;
    /// Number of leaves of the underlying tree(s).
    fn arity(&self) -> usize;
    /// Key for deterministic presentation order.
    fn sort_key(&self) -> String;
    fn boundary(&self) -> Chain<Self>;
}

/// A single cell of `K_n` or `W_n`.
pub trait Cell: Basis + fmt::Display {
    const COMPLEX: Complex;
}

/// Finite integer combination of canonically oriented basis elements of
/// arity `n`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain<B> {
    n: usize,
    terms: BTreeMap<B, i64>,
}

pub type KChain = Chain<PlanarTree>;
pub type WChain = Chain<MetricTree>;
pub type TensorChain<C> = Chain<(C, C)>;
pub type TripleChain<C> = Chain<(C, C, C)>;

impl<B: Basis> Chain<B> {
    pub fn zero(n: usize) -> Self {
        Chain { n, terms: BTreeMap::new() }
    }

    pub fn term(b: B, coeff: i64) -> Self {
        let mut c = Chain::zero(b.arity());
        c.add_term(b, coeff);
        c
    }

    pub fn basis(b: B) -> Self {
        Chain::term(b, 1)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> i64 {
        self.terms.get(b).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, i64)> {
        self.terms.iter().map(|(b, c)| (b, *c))
    }

    /// Terms ordered by [`Basis::sort_key`].
    pub fn sorted_terms(&self) -> Vec<(&B, i64)> {
        let mut v: Vec<(String, &B, i64)> = self.terms.iter().map(|(b, c)| (b.sort_key(), b, *c)).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v.into_iter().map(|(_, b, c)| (b, c)).collect()
    }

    pub fn add_term(&mut self, b: B, coeff: i64) {
        if coeff == 0 {
            return;
        }
        debug_assert_eq!(b.arity(), self.n, "arity mismatch in chain");
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Chain<B>, k: i64) {
        for (b, c) in other.iter() {
            self.add_term(b.clone(), c * k);
        }
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = Chain::zero(self.n);
        out.add_scaled(self, k);
        out
    }

    /// The common degree of all terms, `None` if zero or inhomogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Basis::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Linear extension of a basis map.
    pub fn map<B2: Basis>(&self, n: usize, f: impl Fn(&B) -> Chain<B2>) -> Chain<B2> {
        let mut out = Chain::zero(n);
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    pub fn boundary(&self) -> Self {
        self.map(self.n, Basis::boundary)
    }
}

impl<B: Basis> FromIterator<(B, i64)> for Chain<B> {
    /// Collect terms; panics on an empty iterator, whose arity is unknown.
    fn from_iter<I: IntoIterator<Item = (B, i64)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let n = it.peek().expect("empty term list has no arity").0.arity();
        let mut c = Chain::zero(n);
        for (b, k) in it {
            c.add_term(b, k);
        }
        c
    }
}

impl<B: Basis> Add for &Chain<B> {
    type Output = Chain<B>;
    fn add(self, rhs: &Chain<B>) -> Chain<B> {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl<B: Basis> Sub for &Chain<B> {
    type Output = Chain<B>;
    fn sub(self, rhs: &Chain<B>) -> Chain<B> {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl<B: Basis> Neg for &Chain<B> {
    type Output = Chain<B>;
    fn neg(self) -> Chain<B> {
        self.scaled(-1)
    }
}

impl<B: Basis> fmt::Debug for Chain<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.sorted_terms().into_iter().map(|(b, c)| (b.sort_key(), c))).finish()
    }
}

/// Human-readable form, e.g. `((**)*) - (*(**))` or `2 (***) ⊗ (***)`.
impl<B: Basis> fmt::Display for Chain<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (b, c)) in self.sorted_terms().into_iter().enumerate() {
            let sep = match (i, c < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            f.write_str(sep)?;
            if c.abs() != 1 {
                write!(f, "{} ", c.abs())?;
            }
            f.write_str(&b.sort_key())?;
        }
        Ok(())
    }
}

impl Basis for PlanarTree {
    fn degree(&self) -> usize {
        self.dim()
    }
    fn arity(&self) -> usize {
        self.leaves()
    }
    fn sort_key(&self) -> String {
        self.literal()
    }
    fn boundary(&self) -> KChain {
        boundary_k(self)
    }
}

impl Cell for PlanarTree {
    const COMPLEX: Complex = Complex::K;
}

impl Basis for MetricTree {
    fn degree(&self) -> usize {
        self.dim()
    }
    fn arity(&self) -> usize {
        self.leaves()
    }
    fn sort_key(&self) -> String {
        self.literal()
    }
    fn boundary(&self) -> WChain {
        boundary_w(self)
    }
}

impl Cell for MetricTree {
    const COMPLEX: Complex = Complex::W;
}

fn koszul(d: usize) -> i64 {
    if d % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `∂(u ⊗ v) = ∂u ⊗ v + (-1)^|u| u ⊗ ∂v`.
impl<C: Cell> Basis for (C, C) {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree()
    }
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn sort_key(&self) -> String {
        alloc::format!("{} ⊗ {}", self.0.sort_key(), self.1.sort_key())
    }
    fn boundary(&self) -> Chain<Self> {
        let (u, v) = self;
        let mut out = Chain::zero(u.arity());
        for (du, c) in u.boundary().iter() {
            out.add_term((du.clone(), v.clone()), c);
        }
        let s = koszul(u.degree());
        for (dv, c) in v.boundary().iter() {
            out.add_term((u.clone(), dv.clone()), s * c);
        }
        out
    }
}

impl<C: Cell> Basis for (C, C, C) {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree() + self.2.degree()
    }
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn sort_key(&self) -> String {
        alloc::format!("{} ⊗ {} ⊗ {}", self.0.sort_key(), self.1.sort_key(), self.2.sort_key())
    }
    fn boundary(&self) -> Chain<Self> {
        let (u, v, w) = self;
        let mut out = Chain::zero(u.arity());
        for (x, c) in u.boundary().iter() {
            out.add_term((x.clone(), v.clone(), w.clone()), c);
        }
        let s = koszul(u.degree());
        for (x, c) in v.boundary().iter() {
            out.add_term((u.clone(), x.clone(), w.clone()), s * c);
        }
        let s = koszul(u.degree() + v.degree());
        for (x, c) in w.boundary().iter() {
            out.add_term((u.clone(), v.clone(), x.clone()), s * c);
        }
        out
    }
}

/// `∂_K(T, e_1∧…∧e_m) = Σ (T', e'∧e_1∧…∧e_m)` over expansions `(T', e')`.
pub fn boundary_k(t: &PlanarTree) -> KChain {
    let fresh = t.0.max_tag() + 1;
    let word = t.0.edge_tags(false);
    let mut out = Chain::zero(t.leaves());
    for x in t.0.expansions(fresh) {
        let mut w = Vec::with_capacity(word.len() + 1);
        w.push(fresh);
        w.extend_from_slice(&word);
        let (c, s) = x.orient(&w, false);
        out.add_term(PlanarTree(c), s as i64);
    }
    out
}

/// `∂_W(T, e_1∧…∧e_k) = Σ_i (-1)^i [(T/e_i) - (T_i)]`, each with `e_i` removed
/// from the wedge.
pub fn boundary_w(t: &MetricTree) -> WChain {
    let word = t.0.edge_tags(true);
    let mut out = Chain::zero(t.leaves());
    for (i, &e) in word.iter().enumerate() {
        let rest: Vec<u32> = word.iter().copied().filter(|&x| x != e).collect();
        let s = koszul(i + 1);
        let (c, sc) = t.0.contract(e).orient(&rest, true);
        out.add_term(MetricTree(c), s * sc as i64);
        let (d, sd) = t.0.set_metric(e, false).orient(&rest, true);
        out.add_term(MetricTree(d), -s * sd as i64);
    }
    out
}

/// Signed K-composition of canonically oriented raw cells.
pub(crate) fn compose_k_raw(a: &Raw, i: usize, b: &Raw) -> Option<(Raw, i8)> {
    let (r, s) = (a.leaves(), b.leaves());
    let l = s - 2 - (b.vertices().len() - 1);
    let bb = a.disjoint(b);
    let t = a.graft(i, &bb, true)?;
    let mut word = a.edge_tags(false);
    word.extend(bb.edge_tags(false));
    word.push(bb.tag());
    let (c, par) = t.orient(&word, false);
    let sign = if (r * l + i * (s + 1)) % 2 == 0 { par } else { -par };
    Some((c, sign))
}

/// W-composition of canonically oriented raw cells: the new edge is
/// non-metric and the wedges concatenate without sign.
pub(crate) fn compose_w_raw(a: &Raw, i: usize, b: &Raw) -> Option<(Raw, i8)> {
    let bb = a.disjoint(b);
    let t = a.graft(i, &bb, false)?;
    let mut word = a.edge_tags(true);
    word.extend(bb.edge_tags(true));
    Some(t.orient(&word, true))
}

/// `(a, ω_a) ∘_i (b, ω_b) = (-1)^{r·l + i(s+1)} (a ∘_i b, ω_a∧ω_b∧e)` with
/// `r`, `s` the arities and `l = dim b`.
pub fn compose_k_cells(a: &PlanarTree, i: usize, b: &PlanarTree) -> Result<(PlanarTree, i8), TreeError> {
    compose_k_raw(&a.0, i, &b.0)
        .map(|(t, s)| (PlanarTree(t), s))
        .ok_or(TreeError::LeafOutOfRange { index: i, leaves: a.leaves() })
}

/// `(a, ω_a) ∘_i (b, ω_b) = (a ∘_i b, ω_a∧ω_b)` with the new edge non-metric.
pub fn compose_w_cells(a: &MetricTree, i: usize, b: &MetricTree) -> Result<(MetricTree, i8), TreeError> {
    compose_w_raw(&a.0, i, &b.0)
        .map(|(t, s)| (MetricTree(t), s))
        .ok_or(TreeError::LeafOutOfRange { index: i, leaves: a.leaves() })
}

fn compose_chains<C: Cell>(
    a: &Chain<C>,
    i: usize,
    b: &Chain<C>,
    cell: impl Fn(&C, usize, &C) -> Result<(C, i8), TreeError>,
) -> Result<Chain<C>, TreeError> {
    if i == 0 || i > a.arity() {
        return Err(TreeError::LeafOutOfRange { index: i, leaves: a.arity() });
    }
    let mut out = Chain::zero(a.arity() + b.arity() - 1);
    for (x, u) in a.iter() {
        for (y, v) in b.iter() {
            let (t, s) = cell(x, i, y)?;
            out.add_term(t, u * v * s as i64);
        }
    }
    Ok(out)
}

/// Bilinear extension of [`compose_k_cells`].
pub fn compose_k(a: &KChain, i: usize, b: &KChain) -> Result<KChain, TreeError> {
    compose_chains(a, i, b, compose_k_cells)
}

/// Bilinear extension of [`compose_w_cells`].
pub fn compose_w(a: &WChain, i: usize, b: &WChain) -> Result<WChain, TreeError> {
    compose_chains(a, i, b, compose_w_cells)
}

/// All cells of `K_n`, by dimension then literal.
pub fn k_cells(n: usize) -> Vec<PlanarTree> {
    (0..=n - 2).rev().flat_map(|m| crate::tree::enumerate_trees(n, m).unwrap()).collect()
}

/// All cells of `W_n`, by dimension then literal.
pub fn w_cells(n: usize) -> Vec<MetricTree> {
    (0..=n - 2).flat_map(|k| crate::tree::enumerate_metric(n, k).unwrap()).collect()
}
