//! Diagonals: the cubical (Serre) diagonal `Δ_W` on `C_*(W)`, the
//! Saneblidze-Umble diagonal `Δ^su = (p ⊗ p) ∘ Δ_W ∘ q` on `C_*(K)` by the
//! composite and by the direct sum over `M_n`, the flip, and the
//! co-commutativity and co-associativity defects.
//!
//! Tensor maps follow the Koszul rule `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`;
//! all maps applied here have degree 0.

use crate::chain::{Cell, Chain, KChain, TensorChain, TripleChain, WChain};
use crate::orientation::OmegaTable;
use crate::transfer::Transfer;
use crate::tree::raw::Raw;
use crate::tree::{enumerate_trees, EdgeId, MetricTree, PlanarTree, TreeError};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagonalError {
    #[error("{0} is not in M_n: an internal vertex is a leftmost child")]
    NotInM(PlanarTree),
    #[error("diagonals need arity at least 2, got {0}")]
    Arity(usize),
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

/// `Δ_W(T, e_1∧…∧e_k) = Σ_{L⊔R} (-1)^{ρ(L,R)} (T/e_L, e_R) ⊗ (T_R, e_L)`, with
/// `ρ(L,R) = #{i ∈ L, j ∈ R : i < j}`: the left factor contracts the
/// `L`-edges and keeps the `R`-labels, the right factor demotes the
/// `R`-edges and keeps the `L`-labels.
pub fn serre_diagonal(t: &MetricTree) -> TensorChain<MetricTree> {
    let edges = t.0.edge_tags(true);
    let k = edges.len();
    let mut out = Chain::zero(t.leaves());
    for mask in 0u32..(1 << k) {
        let in_l = |i: usize| mask >> i & 1 == 1;
        let rho = (0..k).filter(|&i| in_l(i)).map(|i| (i + 1..k).filter(|&j| !in_l(j)).count()).sum::<usize>();
        let (mut left, mut right) = (t.0.clone(), t.0.clone());
        let (mut lw, mut rw) = (Vec::new(), Vec::new());
        for (i, &e) in edges.iter().enumerate() {
            if in_l(i) {
                left = left.contract(e);
                rw.push(e);
            } else {
                right = right.set_metric(e, false);
                lw.push(e);
            }
        }
        let (l, s1) = left.orient(&lw, true);
        let (r, s2) = right.orient(&rw, true);
        out.add_term((MetricTree(l), MetricTree(r)), sign(rho % 2 == 1) * (s1 * s2) as i64);
    }
    out
}

/// Linear extension of [`serre_diagonal`].
pub fn serre(x: &WChain) -> TensorChain<MetricTree> {
    x.map(x.arity(), serre_diagonal)
}

/// `(f ⊗ g)` for degree-0 maps `f`, `g` given on basis cells.
pub fn tensor_map<A: Cell, B: Cell>(
    x: &TensorChain<A>,
    n: usize,
    mut f: impl FnMut(&A) -> Chain<B>,
) -> TensorChain<B> {
    let mut out = Chain::zero(n);
    for ((u, v), c) in x.iter() {
        let (fu, fv) = (f(u), f(v));
        for (a, x) in fu.iter() {
            for (b, y) in fv.iter() {
                out.add_term((a.clone(), b.clone()), c * x * y);
            }
        }
    }
    out
}

/// `u ⊗ v -> (-1)^{|u||v|} v ⊗ u`.
pub fn flip<C: Cell>(x: &TensorChain<C>) -> TensorChain<C> {
    let mut out = Chain::zero(x.arity());
    for ((u, v), c) in x.iter() {
        out.add_term((v.clone(), u.clone()), c * sign(u.degree() * v.degree() % 2 == 1));
    }
    out
}

/// `(a ⊗ a') ∘_i (b ⊗ b') = (-1)^{|a'||b|} (a ∘_i b) ⊗ (a' ∘_i b')`, with the
/// factorwise composition given on signed cells.
pub fn compose_tensor<C: Cell>(
    a: &TensorChain<C>,
    i: usize,
    b: &TensorChain<C>,
    cells: impl Fn(&C, usize, &C) -> Result<(C, i8), TreeError>,
) -> Result<TensorChain<C>, TreeError> {
    let mut out = Chain::zero(a.arity() + b.arity() - 1);
    for ((a1, a2), x) in a.iter() {
        for ((b1, b2), y) in b.iter() {
            let (l, s1) = cells(a1, i, b1)?;
            let (r, s2) = cells(a2, i, b2)?;
            let koszul = sign(a2.degree() * b1.degree() % 2 == 1);
            out.add_term((l, r), x * y * koszul * (s1 * s2) as i64);
        }
    }
    Ok(out)
}

/// Evaluates `Δ^su` with caches for `q`, `p` and the diagonal of each cell.
#[derive(Default, Clone, Debug)]
pub struct Diagonal {
    transfer: Transfer,
    cells: BTreeMap<PlanarTree, TensorChain<PlanarTree>>,
}

impl Diagonal {
    pub fn new() -> Diagonal {
        Diagonal::default()
    }

    pub fn transfer(&mut self) -> &mut Transfer {
        &mut self.transfer
    }

    /// `Δ^su` of a canonically oriented cell via `(p ⊗ p) ∘ Δ_W ∘ q`.
    pub fn su_cell(&mut self, t: &PlanarTree) -> TensorChain<PlanarTree> {
        if let Some(v) = self.cells.get(t) {
            return v.clone();
        }
        let n = t.leaves();
        let w = serre(&self.transfer.q_cell(t));
        let tr = &mut self.transfer;
        let v = tensor_map(&w, n, |c| tr.p_cell(c));
        self.cells.insert(t.clone(), v.clone());
        v
    }

    pub fn su(&mut self, x: &KChain) -> TensorChain<PlanarTree> {
        let mut out = Chain::zero(x.arity());
        for (t, c) in x.iter() {
            out.add_scaled(&self.su_cell(t), c);
        }
        out
    }

    /// `(Δ^su ⊗ 1)`.
    pub fn left(&mut self, x: &TensorChain<PlanarTree>) -> TripleChain<PlanarTree> {
        let mut out = Chain::zero(x.arity());
        for ((u, v), c) in x.iter() {
            for ((a, b), d) in self.su_cell(u).iter() {
                out.add_term((a.clone(), b.clone(), v.clone()), c * d);
            }
        }
        out
    }

    /// `(1 ⊗ Δ^su)`.
    pub fn right(&mut self, x: &TensorChain<PlanarTree>) -> TripleChain<PlanarTree> {
        let mut out = Chain::zero(x.arity());
        for ((u, v), c) in x.iter() {
            for ((a, b), d) in self.su_cell(v).iter() {
                out.add_term((u.clone(), a.clone(), b.clone()), c * d);
            }
        }
        out
    }

    /// `(Δ^su ⊗ 1)Δ^su(c(n)) - (1 ⊗ Δ^su)Δ^su(c(n))`.
    pub fn coassoc_defect(&mut self, n: usize) -> Result<TripleChain<PlanarTree>, DiagonalError> {
        if n < 2 {
            return Err(DiagonalError::Arity(n));
        }
        Ok(self.coassoc_defect_of(&Chain::basis(PlanarTree::corolla(n))))
    }

    /// `(Δ^su ⊗ 1)Δ^su(x) - (1 ⊗ Δ^su)Δ^su(x)`.
    pub fn coassoc_defect_of(&mut self, x: &KChain) -> TripleChain<PlanarTree> {
        let d = self.su(x);
        &self.left(&d) - &self.right(&d)
    }

    /// `Δ^su(c(n)) - flip(Δ^su(c(n)))`.
    pub fn cocomm_defect(&mut self, n: usize) -> Result<TensorChain<PlanarTree>, DiagonalError> {
        if n < 2 {
            return Err(DiagonalError::Arity(n));
        }
        let d = self.su_cell(&PlanarTree::corolla(n));
        Ok(&d - &flip(&d))
    }

    /// `η_T` for `T ∈ M_n`.
    pub fn eta(&mut self, t: &PlanarTree) -> Result<i8, DiagonalError> {
        if !in_m(t) {
            return Err(DiagonalError::NotInM(t.clone()));
        }
        let e = t.0.edge_tags(false);
        let mut next = t.0.max_tag() + 1;
        let filled = t.0.fill(false, &mut next);
        let f: Vec<EdgeId> = filled.edge_tags(false).into_iter().filter(|x| !e.contains(x)).collect();
        // T~ with the e-edges non-metric, oriented by the f-wedge, maps to ε·(T, can)
        let mut reduced = filled.clone();
        for &x in &e {
            reduced = reduced.set_metric(x, false);
        }
        let (r, sr) = reduced.orient(&f, true);
        let image = self.transfer.p_cell(&MetricTree(r));
        debug_assert_eq!(image.len(), 1);
        let eps = image.coeff(t) * sr as i64;
        // η·ε·e∧f is the standard orientation of T~
        let mut word = e.clone();
        word.extend(&f);
        let (full, s) = filled.orient(&word, false);
        let n = t.leaves();
        let omega = self.transfer.omega(n).sign(&PlanarTree(full)).expect("binary tree");
        Ok((omega as i64 * eps * s as i64) as i8)
    }

    /// `Δ^su(c(n), 1) = Σ_{T ∈ M_n} η_T · p(T, e_1∧…∧e_t) ⊗ (T, e_1∧…∧e_t)`.
    pub fn su_direct(&mut self, n: usize) -> Result<TensorChain<PlanarTree>, DiagonalError> {
        if n < 2 {
            return Err(DiagonalError::Arity(n));
        }
        let mut out = Chain::zero(n);
        for t in enumerate_m(n)? {
            let eta = self.eta(&t)? as i64;
            let left = self.transfer.p_cell(&MetricTree::fully_metric(&t));
            for (u, c) in left.iter() {
                out.add_term((u.clone(), t.clone()), eta * c);
            }
        }
        Ok(out)
    }
}

/// `Δ^su` on a chain of `K_n`.
pub fn su_diagonal(x: &KChain) -> TensorChain<PlanarTree> {
    Diagonal::new().su(x)
}

/// `Δ^su(c(n), 1)` by the direct formula over `M_n`.
pub fn su_diagonal_direct(n: usize) -> Result<TensorChain<PlanarTree>, DiagonalError> {
    Diagonal::new().su_direct(n)
}

/// `(Δ^su ⊗ 1)Δ^su(c(n)) - (1 ⊗ Δ^su)Δ^su(c(n))`.
pub fn coassoc_defect(n: usize) -> Result<TripleChain<PlanarTree>, DiagonalError> {
    Diagonal::new().coassoc_defect(n)
}

/// `T ∈ M_n`: no internal vertex of `T` is the leftmost child of its parent.
pub fn in_m(t: &PlanarTree) -> bool {
    fn go(r: &Raw) -> bool {
        let kids = r.kids();
        kids.first().is_none_or(Raw::is_leaf) && kids.iter().all(go)
    }
    go(&t.0)
}

/// `M_n`, generated recursively: `T = c(k)(*, S_2, …, S_k)` with every `S_j`
/// a leaf or an element of some `M_l`. Sorted by literal.
pub fn enumerate_m(n: usize) -> Result<Vec<PlanarTree>, DiagonalError> {
    if n < 2 {
        return Err(DiagonalError::Arity(n));
    }
    let mut memo: BTreeMap<usize, Vec<Raw>> = BTreeMap::new();
    let mut out: Vec<PlanarTree> = m_raw(n, &mut memo).into_iter().map(|r| PlanarTree(r.canonical())).collect();
    out.sort_by_cached_key(PlanarTree::literal);
    Ok(out)
}

/// Elements of `M_n` together with the leaf itself when `n = 1`.
fn m_raw(n: usize, memo: &mut BTreeMap<usize, Vec<Raw>>) -> Vec<Raw> {
    if n == 1 {
        return vec![Raw::Leaf];
    }
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    // the tails S_2..S_k: sequences of >= 1 parts, `rest` leaves in total
    fn tails(rest: usize, memo: &mut BTreeMap<usize, Vec<Raw>>) -> Vec<Vec<Raw>> {
        if rest == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for l in 1..=rest {
            let heads = m_raw(l, memo);
            for tail in tails(rest - l, memo) {
                for h in &heads {
                    let mut v = vec![h.clone()];
                    v.extend(tail.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }
    let out: Vec<Raw> = tails(n - 1, memo)
        .into_iter()
        .filter(|t| !t.is_empty())
        .map(|t| {
            let mut kids = vec![Raw::Leaf];
            kids.extend(t);
            Raw::Node { tag: 0, metric: true, kids }
        })
        .collect();
    memo.insert(n, out.clone());
    out
}

/// `M_n` by the equivalent characterization: trees whose internal-edge count
/// equals the number of left-leaning edges of `fill_min(T)`.
pub fn m_by_leaning(n: usize) -> Vec<PlanarTree> {
    let mut out = Vec::new();
    for m in 0..=n - 2 {
        for t in enumerate_trees(n, m).expect("valid range") {
            let f = crate::tree::fill_min(&t);
            let ll = crate::tree::left_leaning_edges(&f.tree).expect("fill is binary");
            if ll.len() == t.edge_count() {
                out.push(t);
            }
        }
    }
    out.sort_by_cached_key(PlanarTree::literal);
    out
}

/// The ω table for `n`, exposed for callers that evaluate many `η_T`.
pub fn omega_table(n: usize) -> OmegaTable {
    OmegaTable::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::std_orientation_k;
    use alloc::string::String;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }
    fn m(s: &str) -> MetricTree {
        MetricTree::parse(s).unwrap()
    }
    fn xi(x: &PlanarTree) -> i64 {
        if x.is_binary() {
            std_orientation_k(x).unwrap().sign() as i64
        } else {
            1
        }
    }
    /// Terms in ξ-shorthand: binary factors measured against `(T, ξ_T)`.
    fn shorthand(x: &TensorChain<PlanarTree>) -> Vec<(String, String, i64)> {
        x.sorted_terms().into_iter().map(|((a, b), c)| (a.literal(), b.literal(), c * xi(a) * xi(b))).collect()
    }

    #[test]
    fn serre_interval() {
        let d = serre_diagonal(&m("((**)*)"));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&(m("(***)"), m("((**)*)"))), 1);
        assert_eq!(d.coeff(&(m("((**)*)"), m("((**)!*)"))), 1);
        let v = m("((**)!*)");
        assert_eq!(serre_diagonal(&v), Chain::basis((v.clone(), v)));
    }

    #[test]
    fn serre_square_signs() {
        // L = {1}, R = {2} has one crossing couple
        let sq = m("((**)(**))");
        let d = serre_diagonal(&sq);
        assert_eq!(d.len(), 4);
        let negative: Vec<_> = d.iter().filter(|(_, c)| *c < 0).map(|(k, _)| k.clone()).collect();
        assert_eq!(negative, [(m("(**(**))"), m("((**)(**)!)"))]);
    }

    #[test]
    fn su_low_arity() {
        let c2 = PlanarTree::corolla(2);
        assert_eq!(su_diagonal(&Chain::basis(c2.clone())), Chain::basis((c2.clone(), c2)));
        let d3 = su_diagonal(&Chain::basis(PlanarTree::corolla(3)));
        assert_eq!(
            shorthand(&d3),
            [("((**)*)".into(), "(***)".into(), 1), ("(***)".into(), "(*(**))".into(), 1)]
        );
    }

    #[test]
    fn su_c4_display() {
        let d4 = su_diagonal(&Chain::basis(PlanarTree::corolla(4)));
        let mut expected: Vec<(String, String, i64)> = [
            ("(((**)*)*)", "(****)", 1),
            ("((***)*)", "(*(**)*)", 1),
            ("((***)*)", "(*(***))", 1),
            ("(*(**)*)", "(*(***))", 1),
            ("((**)**)", "(**(**))", -1),
            ("(****)", "(*(*(**)))", 1),
        ]
        .iter()
        .map(|(a, b, c)| (String::from(*a), String::from(*b), *c))
        .collect();
        expected.sort();
        let mut got = shorthand(&d4);
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn direct_matches_composite() {
        let mut d = Diagonal::new();
        for n in 2..=5 {
            let a = d.su_cell(&PlanarTree::corolla(n));
            assert_eq!(d.su_direct(n).unwrap(), a, "n={n}");
        }
    }

    #[test]
    fn m_sets() {
        let lits = |v: Vec<PlanarTree>| {
            let mut l = v.iter().map(PlanarTree::literal).collect::<Vec<_>>();
            l.sort();
            l
        };
        assert_eq!(lits(enumerate_m(3).unwrap()), ["(*(**))", "(***)"]);
        assert_eq!(lits(enumerate_m(4).unwrap()), ["(*(*(**)))", "(*(**)*)", "(*(***))", "(**(**))", "(****)"]);
        let counts: Vec<usize> = (2..=7).map(|n| enumerate_m(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 5, 14, 42, 132]);
        for n in 2..=7 {
            let a = enumerate_m(n).unwrap();
            assert_eq!(a, m_by_leaning(n), "n={n}");
            assert!(a.iter().all(in_m));
        }
        // the recursion misses nothing a single graft c(k) ∘_i S would not reach
        assert!(enumerate_m(5).unwrap().contains(&t("(*(**)(**))")));
    }

    #[test]
    fn eta_values() {
        let mut d = Diagonal::new();
        for n in 2..=4 {
            for x in enumerate_m(n).unwrap() {
                let want = if x == PlanarTree::max(4) { -1 } else { 1 };
                assert_eq!(d.eta(&x).unwrap(), want, "{x}");
            }
        }
        assert_eq!(d.eta(&t("((**)*)")), Err(DiagonalError::NotInM(t("((**)*)"))));
    }

    #[test]
    fn flip_involution_and_c2() {
        let d = su_diagonal(&Chain::basis(PlanarTree::corolla(4)));
        assert_eq!(flip(&flip(&d)), d);
        let d2 = su_diagonal(&Chain::basis(PlanarTree::corolla(2)));
        assert_eq!(flip(&d2), d2);
    }

    #[test]
    fn serre_is_chain_map_and_coassociative() {
        for n in 2..=5 {
            for c in crate::chain::w_cells(n) {
                let x = Chain::basis(c.clone());
                assert_eq!(serre(&x.boundary()), serre(&x).boundary(), "{c}");
            }
        }
        for n in 2..=4 {
            for c in crate::chain::w_cells(n) {
                let d = serre_diagonal(&c);
                let mut l = Chain::zero(n);
                let mut r = Chain::zero(n);
                for ((u, v), k) in d.iter() {
                    for ((a, b), j) in serre_diagonal(u).iter() {
                        l.add_term((a.clone(), b.clone(), v.clone()), k * j);
                    }
                    for ((a, b), j) in serre_diagonal(v).iter() {
                        r.add_term((u.clone(), a.clone(), b.clone()), k * j);
                    }
                }
                assert_eq!(l, r, "{c}");
            }
        }
    }

    #[test]
    fn serre_is_operadic() {
        use crate::chain::{compose_w_cells, w_cells};
        for na in 2..=4 {
            for nb in 2..=(6 - na) {
                for a in w_cells(na) {
                    for b in w_cells(nb) {
                        for i in 1..=na {
                            let (ab, s) = compose_w_cells(&a, i, &b).unwrap();
                            let lhs = serre_diagonal(&ab).scaled(s as i64);
                            let rhs = compose_tensor(&serre_diagonal(&a), i, &serre_diagonal(&b), compose_w_cells).unwrap();
                            assert_eq!(lhs, rhs, "{a} o_{i} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn su_is_chain_map_and_operadic() {
        use crate::chain::{compose_k_cells, k_cells};
        let mut d = Diagonal::new();
        for n in 2..=6 {
            for c in k_cells(n) {
                let x = Chain::basis(c.clone());
                let lhs = d.su(&x.boundary());
                assert_eq!(lhs, d.su_cell(&c).boundary(), "{c}");
            }
        }
        for na in 2..=4 {
            for nb in 2..=(6 - na) {
                for a in k_cells(na) {
                    for b in k_cells(nb) {
                        for i in 1..=na {
                            let (ab, s) = compose_k_cells(&a, i, &b).unwrap();
                            let lhs = d.su_cell(&ab).scaled(s as i64);
                            let rhs = compose_tensor(&d.su_cell(&a), i, &d.su_cell(&b), compose_k_cells).unwrap();
                            assert_eq!(lhs, rhs, "{a} o_{i} {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn su_on_vertices_and_extremes() {
        let mut d = Diagonal::new();
        for b in crate::tree::enumerate_binary(5).unwrap() {
            assert_eq!(d.su_cell(&b), Chain::term((b.clone(), b.clone()), xi(&b)), "{b}");
        }
        for n in 2..=6 {
            let x = d.su_cell(&PlanarTree::corolla(n));
            let (c, min, max) = (PlanarTree::corolla(n), PlanarTree::min(n), PlanarTree::max(n));
            assert_eq!(x.coeff(&(min.clone(), c.clone())) * xi(&min), 1, "n={n}");
            assert_eq!(x.coeff(&(c, max.clone())) * xi(&max), 1, "n={n}");
        }
    }

    #[test]
    fn defects() {
        let mut d = Diagonal::new();
        let c3 = PlanarTree::corolla(3);
        let square = Chain::basis((c3.clone(), c3));
        assert_eq!(d.cocomm_defect(3).unwrap(), square.boundary().scaled(-1));
        assert!(d.cocomm_defect(2).unwrap().is_zero());
        for n in 2..=3 {
            assert!(d.coassoc_defect(n).unwrap().is_zero(), "n={n}");
        }
        let cube = Chain::basis((t("((***)*)"), t("(*(**)*)"), t("(*(***))")));
        assert_eq!(d.coassoc_defect(4).unwrap(), cube.boundary());
        assert_eq!(d.coassoc_defect(1), Err(DiagonalError::Arity(1)));
    }
}
