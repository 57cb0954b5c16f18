//! The operadic chain maps `q: C_*(K) -> C_*(W)` and `p: C_*(W) -> C_*(K)`.
//!
//! `q` sends the corolla `(c(n), 1)` to the sum of all fully metric binary
//! `n`-trees with their standard orientations `ω_T`; `p` is determined by its
//! values on fully metric trees, where it sums over binary trees below
//! `fill_min(T)` reached by label-preserving moves. Both extend to all cells
//! through operadic decompositions, with the composition signs of
//! [`crate::chain`].

use crate::chain::{compose_k, compose_k_raw, compose_w, compose_w_raw, Chain, KChain, WChain};
use crate::orientation::{propagate_all, xi_raw, OmegaTable};
use crate::tree::raw::{parity, Raw};
use crate::tree::{MetricTree, PlanarTree};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Caches `ω` tables and `p` on fully metric cells across many evaluations.
#[derive(Default, Clone, Debug)]
pub struct Transfer {
    omega: BTreeMap<usize, OmegaTable>,
    p_interior: BTreeMap<Raw, KChain>,
}

impl Transfer {
    pub fn new() -> Transfer {
        Transfer::default()
    }

    pub fn omega(&mut self, n: usize) -> &OmegaTable {
        self.omega.entry(n).or_insert_with(|| OmegaTable::new(n))
    }

    /// `q(c(n), 1) = Σ_{T binary} (T, ω_T)`.
    pub fn q_corolla(&mut self, n: usize) -> WChain {
        let mut out = Chain::zero(n);
        for (t, s) in self.omega(n).raw_iter() {
            out.add_term(MetricTree(t.clone()), s as i64);
        }
        out
    }

    /// `q` on a canonically oriented cell.
    pub fn q_cell(&mut self, t: &PlanarTree) -> WChain {
        if t.is_corolla() {
            return self.q_corolla(t.leaves());
        }
        // split off a non-root vertex all of whose children are leaves
        let (tag, _) = t.0.vertices().into_iter().skip(1).find(|(tag, _)| {
            t.0.find(*tag).is_some_and(|v| v.kids().iter().all(Raw::is_leaf))
        }).expect("a tree with an edge has a vertex of leaves below the root");
        let (outer, i, inner) = t.0.cut(tag);
        let outer = PlanarTree(outer.canonical());
        let s = inner.leaves();
        let (c, sign) = compose_k_raw(&outer.0, i, &Raw::corolla(s)).expect("leaf index in range");
        debug_assert_eq!(c, t.0);
        let left = self.q_cell(&outer);
        let right = self.q_corolla(s);
        compose_w(&left, i, &right).expect("leaf index in range").scaled(sign as i64)
    }

    pub fn q(&mut self, x: &KChain) -> WChain {
        let mut out = Chain::zero(x.arity());
        for (t, c) in x.iter() {
            out.add_scaled(&self.q_cell(t), c);
        }
        out
    }

    /// `p` on a canonically oriented fully metric cell.
    fn p_interior(&mut self, t: &Raw) -> KChain {
        if let Some(v) = self.p_interior.get(t) {
            return v.clone();
        }
        let v = p_interior(t);
        self.p_interior.insert(t.clone(), v.clone());
        v
    }

    /// `p` on a canonically oriented cell of `W_n`.
    pub fn p_cell(&mut self, t: &MetricTree) -> KChain {
        let cut = t.0.vertices().into_iter().skip(1).find(|v| !v.1);
        let Some((tag, _)) = cut else {
            return self.p_interior(&t.0);
        };
        let (outer, i, inner) = t.0.cut(tag);
        let (outer, inner) = (outer.canonical(), inner.canonical());
        let (c, sign) = compose_w_raw(&outer, i, &inner).expect("leaf index in range");
        debug_assert_eq!(c, t.0);
        let left = self.p_cell(&MetricTree(outer));
        let right = self.p_cell(&MetricTree(inner));
        compose_k(&left, i, &right).expect("leaf index in range").scaled(sign as i64)
    }

    pub fn p(&mut self, x: &WChain) -> KChain {
        let mut out = Chain::zero(x.arity());
        for (t, c) in x.iter() {
            out.add_scaled(&self.p_cell(t), c);
        }
        out
    }
}

/// `p(T, e_1∧…∧e_k) = Σ_S (S/{e_1..e_k}, e_1∧…∧e_k ⌟ ξ_S)` for a fully
/// metric `T`, the sum over binary `S <= fill_min(T)` carrying the labels.
fn p_interior(t: &Raw) -> KChain {
    let n = t.leaves();
    let mut out = Chain::zero(n);
    let labels = t.edge_tags(false);
    let mut next = t.max_tag() + 1;
    let b = t.fill(true, &mut next);
    let ll = b.left_leaning();
    if !labels.iter().all(|l| ll.contains(l)) {
        return out;
    }
    let (reached, _) = propagate_all(&b, &labels);
    for (s, lab) in reached {
        // ξ_S on the ascending word of S, then contract the labels
        let mut word = s.edge_tags(false);
        let mut sign = xi_raw(&s.canonical());
        let mut u = s.clone();
        for l in lab.iter().rev() {
            let p = word.iter().position(|x| x == l).expect("labels are edges of S");
            if p % 2 == 1 {
                sign = -sign;
            }
            word.remove(p);
            u = u.contract(*l);
        }
        let pos = u.positions();
        let idx: Vec<u32> = word.iter().map(|x| pos[x]).collect();
        sign *= parity(&idx);
        out.add_term(PlanarTree(u.canonical()), sign as i64);
    }
    out
}

/// `q` on a chain of `K_n`.
pub fn q(x: &KChain) -> WChain {
    Transfer::new().q(x)
}

/// `p` on a chain of `W_n`.
pub fn p(x: &WChain) -> KChain {
    Transfer::new().p(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::std_orientation_k;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }
    fn m(s: &str) -> MetricTree {
        MetricTree::parse(s).unwrap()
    }
    /// Binary cells in ξ-shorthand: the coefficient of `(T, ξ_T)`.
    fn xi(x: &PlanarTree) -> i64 {
        if x.is_binary() {
            std_orientation_k(x).unwrap().sign() as i64
        } else {
            1
        }
    }
    fn shorthand(c: &KChain) -> Vec<(alloc::string::String, i64)> {
        c.sorted_terms().into_iter().map(|(x, k)| (x.literal(), k * xi(x))).collect()
    }
    fn pw(s: &str) -> KChain {
        p(&Chain::basis(m(s)))
    }

    #[test]
    fn q_of_c3() {
        let x = q(&Chain::basis(PlanarTree::corolla(3)));
        assert_eq!(x.coeff(&m("(*(**))")), 1);
        assert_eq!(x.coeff(&m("((**)*)")), -1);
        assert_eq!(x.len(), 2);
    }

    #[test]
    fn q_of_vertices_is_nonmetric_copy() {
        for b in crate::tree::enumerate_binary(5).unwrap() {
            let x = q(&Chain::basis(b.clone()));
            let all_nonmetric = MetricTree::with_nonmetric(&b, &b.edges()).unwrap();
            assert_eq!(x, Chain::term(all_nonmetric, xi(&b)), "{b}");
        }
    }

    #[test]
    fn p_example_table() {
        assert_eq!(shorthand(&pw("(**)")), [("(**)".into(), 1)]);
        assert_eq!(shorthand(&pw("(***)")), [("((**)*)".into(), 1)]);
        assert_eq!(shorthand(&pw("(*(**))")), [("(***)".into(), 1)]);
        assert!(pw("((**)*)").is_zero());
        assert_eq!(shorthand(&pw("(****)")), [("(((**)*)*)".into(), 1)]);
        assert_eq!(shorthand(&pw("(*(***))")), [("((***)*)".into(), 1), ("(*(**)*)".into(), 1)]);
        assert_eq!(shorthand(&pw("(*(**)*)")), [("((***)*)".into(), 1)]);
        assert_eq!(shorthand(&pw("(**(**))")), [("((**)**)".into(), -1)]);
        assert_eq!(shorthand(&pw("(*(*(**)))")), [("(****)".into(), 1)]);
        assert!(pw("((**)**)").is_zero());
        assert!(pw("((***)*)").is_zero());
        for b in crate::tree::enumerate_binary(4).unwrap() {
            if b != PlanarTree::max(4) {
                assert!(pw(&b.literal()).is_zero(), "{b}");
            }
        }
    }

    #[test]
    fn p_corolla_is_min() {
        for n in 2..=7 {
            let x = p(&Chain::basis(MetricTree::fully_metric(&PlanarTree::corolla(n))));
            let min = PlanarTree::min(n);
            assert_eq!(x, Chain::term(min.clone(), xi(&min)), "n={n}");
        }
    }

    #[test]
    fn p_of_max_is_corolla() {
        let mut tr = Transfer::new();
        for n in 2..=7 {
            let max = PlanarTree::max(n);
            let s = tr.omega(n).sign(&max).unwrap();
            let x = tr.p_cell(&MetricTree::fully_metric(&max)).scaled(s as i64);
            assert_eq!(x, Chain::basis(PlanarTree::corolla(n)), "n={n}");
        }
    }

    #[test]
    fn p_of_nonmetric_cell() {
        // p(max3) ∘_1 p(c2) = (c3, 1) ∘_1 (c2, 1), sign (-1)^{0 + 1·3}
        let x = pw("((**)!(**))");
        assert_eq!(shorthand(&x), [("((**)**)".into(), -1)]);
        assert_eq!(x, Chain::term(t("((**)**)"), -1));
    }

    #[test]
    fn p_after_q_is_identity_small() {
        let mut tr = Transfer::new();
        for n in 2..=5 {
            for c in crate::chain::k_cells(n) {
                let y = tr.q_cell(&c);
                assert_eq!(tr.p(&y), Chain::basis(c.clone()), "{c}");
            }
        }
    }

    #[test]
    fn q_is_chain_map() {
        let mut tr = Transfer::new();
        for n in 2..=6 {
            for c in crate::chain::k_cells(n) {
                let x = Chain::basis(c.clone());
                let lhs = tr.q(&x.boundary());
                assert_eq!(lhs, tr.q_cell(&c).boundary(), "{c}");
            }
        }
    }

    #[test]
    fn p_is_chain_map() {
        let mut tr = Transfer::new();
        for n in 2..=6 {
            for b in (0..=n - 2).flat_map(|m| crate::tree::enumerate_trees(n, m).unwrap()) {
                let x = Chain::basis(MetricTree::fully_metric(&b));
                let lhs = tr.p(&x.boundary());
                assert_eq!(lhs, tr.p(&x).boundary(), "{b}");
            }
        }
        for n in 2..=5 {
            for c in crate::chain::w_cells(n) {
                let x = Chain::basis(c.clone());
                let lhs = tr.p(&x.boundary());
                assert_eq!(lhs, tr.p(&x).boundary(), "{c}");
            }
        }
    }

    #[test]
    fn p_support_is_below_fill_min() {
        use crate::tree::tamari::down_set;
        use crate::tree::{enumerate_trees, fill_max};
        let mut tr = Transfer::new();
        for n in 2..=6 {
            for b in (0..=n - 2).flat_map(|m| enumerate_trees(n, m).unwrap()) {
                let mut next = b.0.max_tag() + 1;
                let below = down_set(&b.0.fill(true, &mut next));
                let support: Vec<PlanarTree> = tr.p_cell(&MetricTree::fully_metric(&b)).iter().map(|(u, _)| u.clone()).collect();
                let expected: Vec<PlanarTree> = enumerate_trees(n, n - 2 - b.edge_count())
                    .unwrap()
                    .into_iter()
                    .filter(|u| below.contains(&fill_max(u).tree.0))
                    .collect();
                let mut support = support;
                support.sort();
                let mut expected = expected;
                expected.sort();
                assert_eq!(support, expected, "{b}");
            }
        }
    }

    /// `ω(max(r) ∘_i max(s)) = (-1)^{s-1}` on the wedge that lists the outer
    /// spine above the graft, the inner tree, then the rest of the spine.
    #[test]
    fn omega_of_grafted_combs() {
        let mut tr = Transfer::new();
        for n in 3..=6 {
            for s in 2..n {
                let r = n - s + 1;
                for i in 1..r {
                    let t = PlanarTree::max(r).graft(i, &PlanarTree::max(s)).unwrap();
                    // the listed wedge is the pre-order of the grafted tree
                    let want = if s % 2 == 0 { -1 } else { 1 };
                    assert_eq!(tr.omega(n).sign(&t), Some(want), "i={i} s={s}");
                }
            }
        }
    }

    #[test]
    fn leaning_exchange_identities() {
        assert_eq!(crate::verify::exchange_identities(6), Ok(44));
    }
}
