//! Planar rooted trees: the cells of `K_n` and, with metric flags, of `W_n`.
//!
//! Trees are written `tree := '*' | '(' tree tree+ ')'`; in a metric literal a
//! `!` right after a closing parenthesis marks the edge above that subtree
//! non-metric. Internal edges are named by [`EdgeId`]: the pre-order index of
//! the edge's lower vertex among internal vertices, the root being `0`, so a
//! tree with `m` internal edges has edges `1..=m`.

mod enumerate;
mod parse;
pub(crate) mod raw;
pub(crate) mod tamari;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use enumerate::{enumerate_binary, enumerate_metric, enumerate_trees};
pub use tamari::{fill_max, fill_min, left_leaning_edges, tamari_leq, Fill};

use raw::Raw;

pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: &'static str },
    #[error("vertex opened at byte {pos} has a single child")]
    UnaryVertex { pos: usize },
    #[error("non-metric marker on the root at byte {pos}")]
    MarkerOnRoot { pos: usize },
    #[error("non-metric marker on a leaf at byte {pos}")]
    MarkerOnLeaf { pos: usize },
    #[error("non-metric marker at byte {pos} in a planar tree literal")]
    UnexpectedMarker { pos: usize },
    #[error("a tree needs at least two leaves")]
    TooFewLeaves,
    #[error("leaf index {index} outside 1..={leaves}")]
    LeafOutOfRange { index: usize, leaves: usize },
    #[error("tree has no internal edge {0}")]
    NoSuchEdge(EdgeId),
    #[error("edge {0} is not metric")]
    NotMetric(EdgeId),
    #[error("tree is not binary")]
    NotBinary,
    #[error("leaf counts differ: {0} and {1}")]
    LeafCountMismatch(usize, usize),
    #[error("no trees with {n} leaves and {m} internal edges: need n >= 2 and m <= n - 2")]
    Range { n: usize, m: usize },
}

/// A planar rooted tree with at least two leaves and no unary vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarTree(pub(crate) Raw);

/// A planar tree whose internal edges are each flagged metric or not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricTree(pub(crate) Raw);

impl PlanarTree {
    /// Wrap a raw tree, forgetting tags and metric flags.
    pub(crate) fn from_raw(raw: &Raw) -> PlanarTree {
        fn strip(t: &Raw) -> Raw {
            match t {
                Raw::Leaf => Raw::Leaf,
                Raw::Node { tag, kids, .. } => {
                    Raw::Node { tag: *tag, metric: true, kids: kids.iter().map(strip).collect() }
                }
            }
        }
        PlanarTree(strip(raw).canonical())
    }

    pub fn parse(text: &str) -> Result<PlanarTree, TreeError> {
        parse::parse_raw(text, false).map(PlanarTree)
    }

    /// The corolla `c(n)`: one vertex with `n` leaves.
    pub fn corolla(n: usize) -> PlanarTree {
        assert!(n >= 2, "corolla needs n >= 2");
        PlanarTree(Raw::corolla(n))
    }

    /// The Tamari maximum `max(n)`, the right comb.
    pub fn max(n: usize) -> PlanarTree {
        assert!(n >= 2, "max(n) needs n >= 2");
        PlanarTree(Raw::right_comb(n))
    }

    /// The Tamari minimum `min(n)`, the left comb.
    pub fn min(n: usize) -> PlanarTree {
        assert!(n >= 2, "min(n) needs n >= 2");
        PlanarTree(Raw::left_comb(n))
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn edge_count(&self) -> usize {
        self.0.vertices().len() - 1
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        (1..=self.edge_count() as EdgeId).collect()
    }

    /// Dimension of the labelled cell of `K_n`: `n - 2 - edges`.
    pub fn dim(&self) -> usize {
        self.leaves() - 2 - self.edge_count()
    }

    pub fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    pub fn is_corolla(&self) -> bool {
        self.edge_count() == 0
    }

    /// Vertex arities in pre-order.
    pub fn arities(&self) -> Vec<usize> {
        fn go(t: &Raw, out: &mut Vec<usize>) {
            if let Raw::Node { kids, .. } = t {
                out.push(kids.len());
                kids.iter().for_each(|k| go(k, out));
            }
        }
        let mut out = Vec::new();
        go(&self.0, &mut out);
        out
    }

    /// `self ∘_i other`: graft `other` onto leaf `i` (1-based).
    pub fn graft(&self, i: usize, other: &PlanarTree) -> Result<PlanarTree, TreeError> {
        let b = self.0.disjoint(&other.0);
        self.0
            .graft(i, &b, true)
            .map(|t| PlanarTree(t.canonical()))
            .ok_or(TreeError::LeafOutOfRange { index: i, leaves: self.leaves() })
    }

    /// Collapse internal edge `e`.
    pub fn contract(&self, e: EdgeId) -> Result<PlanarTree, TreeError> {
        self.check_edge(e)?;
        Ok(PlanarTree(self.0.contract(e).canonical()))
    }

    /// All `(T', e')` with `T'/e' = self`, each exactly once.
    pub fn expansions(&self) -> Vec<(PlanarTree, EdgeId)> {
        let fresh = self.0.max_tag() + 1;
        self.0
            .expansions(fresh)
            .into_iter()
            .map(|t| {
                let e = t.positions()[&fresh];
                (PlanarTree(t.canonical()), e)
            })
            .collect()
    }

    pub fn literal(&self) -> String {
        self.0.render(false)
    }

    fn check_edge(&self, e: EdgeId) -> Result<(), TreeError> {
        if e == 0 || e as usize > self.edge_count() {
            Err(TreeError::NoSuchEdge(e))
        } else {
            Ok(())
        }
    }
}

impl MetricTree {
    pub fn parse(text: &str) -> Result<MetricTree, TreeError> {
        parse::parse_raw(text, true).map(MetricTree)
    }

    /// Every internal edge metric: an interior cell of `W_n`.
    pub fn fully_metric(t: &PlanarTree) -> MetricTree {
        MetricTree(t.0.clone())
    }

    /// `t` with the listed edges non-metric.
    pub fn with_nonmetric(t: &PlanarTree, nonmetric: &[EdgeId]) -> Result<MetricTree, TreeError> {
        let mut r = t.0.clone();
        for &e in nonmetric {
            t.check_edge(e)?;
            r = r.set_metric(e, false);
        }
        Ok(MetricTree(r))
    }

    pub fn shape(&self) -> PlanarTree {
        PlanarTree::from_raw(&self.0)
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn edge_count(&self) -> usize {
        self.0.vertices().len() - 1
    }

    /// Dimension of the labelled cell of `W_n`: the number of metric edges.
    pub fn dim(&self) -> usize {
        self.metric_edges().len()
    }

    pub fn metric_edges(&self) -> Vec<EdgeId> {
        self.0.edge_tags(true)
    }

    pub fn nonmetric_edges(&self) -> Vec<EdgeId> {
        self.0.vertices().into_iter().skip(1).filter(|v| !v.1).map(|v| v.0).collect()
    }

    pub fn is_interior(&self) -> bool {
        self.nonmetric_edges().is_empty()
    }

    /// `T/e` for a metric edge `e`.
    pub fn contract(&self, e: EdgeId) -> Result<MetricTree, TreeError> {
        self.check_metric(e)?;
        Ok(MetricTree(self.0.contract(e).canonical()))
    }

    /// `T_e`: metric edge `e` made non-metric.
    pub fn demote(&self, e: EdgeId) -> Result<MetricTree, TreeError> {
        self.check_metric(e)?;
        Ok(MetricTree(self.0.set_metric(e, false)))
    }

    /// Graft `other` onto leaf `i`; the new edge carries flag `metric`.
    pub fn graft(&self, i: usize, other: &MetricTree, metric: bool) -> Result<MetricTree, TreeError> {
        let b = self.0.disjoint(&other.0);
        self.0
            .graft(i, &b, metric)
            .map(|t| MetricTree(t.canonical()))
            .ok_or(TreeError::LeafOutOfRange { index: i, leaves: self.leaves() })
    }

    pub fn literal(&self) -> String {
        self.0.render(true)
    }

    fn check_metric(&self, e: EdgeId) -> Result<(), TreeError> {
        match self.0.vertices().get(e as usize) {
            Some(_) if e == 0 => Err(TreeError::NoSuchEdge(e)),
            Some((_, true)) => Ok(()),
            Some((_, false)) => Err(TreeError::NotMetric(e)),
            None => Err(TreeError::NoSuchEdge(e)),
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Display for MetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl core::str::FromStr for PlanarTree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlanarTree::parse(s)
    }
}

impl core::str::FromStr for MetricTree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricTree::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let c3 = t("(***)");
        assert_eq!(c3, PlanarTree::corolla(3));
        assert_eq!(c3.edge_count(), 0);
        let b = t("((**)*)");
        assert_eq!(b.edge_count(), 1);
        assert!(b.is_binary());
        let w = MetricTree::parse("((**)!*)").unwrap();
        assert_eq!(w.shape(), b);
        assert_eq!(w.dim(), 0);
        assert_eq!(w.nonmetric_edges(), vec![1]);
    }

    #[test]
    fn render_roundtrip() {
        for s in ["(**)", "(*(**)*)", "((**)(***))", "(*((**)*)(**))"] {
            assert_eq!(t(s).literal(), s);
        }
        for s in ["((**)!*)", "(*((**)!*)!(**))", "(*((**)*)(**)!)"] {
            assert_eq!(MetricTree::parse(s).unwrap().literal(), s);
        }
    }

    #[test]
    fn edge_ids_are_preorder() {
        // vertices in pre-order: root, (*(**)), (**), (**)
        let m = MetricTree::parse("((*(**)!)(**))").unwrap();
        assert_eq!(m.nonmetric_edges(), vec![2]);
        assert_eq!(m.metric_edges(), vec![1, 3]);
    }

    #[test]
    fn graft_examples() {
        assert_eq!(t("(**)").graft(2, &t("(**)")).unwrap(), t("(*(**))"));
        assert_eq!(t("(***)").graft(2, &t("(**)")).unwrap(), t("(*(**)*)"));
        let inner = t("(**)").graft(2, &t("(**)")).unwrap();
        assert_eq!(t("(**)").graft(2, &inner).unwrap(), PlanarTree::max(4));
        assert_eq!(
            t("(**)").graft(3, &t("(**)")),
            Err(TreeError::LeafOutOfRange { index: 3, leaves: 2 })
        );
    }

    #[test]
    fn contract_examples() {
        assert_eq!(t("((**)*)").contract(1).unwrap(), t("(***)"));
        assert_eq!(t("(*(**)*)").contract(1).unwrap(), t("(****)"));
        let c = PlanarTree::max(4).contract(1).unwrap();
        assert_eq!(c, t("(**(**))"));
        assert_eq!((c.leaves(), c.edge_count()), (4, 1));
        assert_eq!(t("(***)").contract(1), Err(TreeError::NoSuchEdge(1)));
        assert_eq!(t("((**)*)").contract(0), Err(TreeError::NoSuchEdge(0)));
    }

    #[test]
    fn metric_edge_operations() {
        let m = MetricTree::parse("((**)!(**))").unwrap();
        assert_eq!(m.contract(1), Err(TreeError::NotMetric(1)));
        assert_eq!(m.contract(2).unwrap().literal(), "((**)!**)");
        assert_eq!(m.demote(2).unwrap().literal(), "((**)!(**)!)");
        assert_eq!(m.demote(3), Err(TreeError::NoSuchEdge(3)));
    }

    #[test]
    fn expansion_examples() {
        let mut e: Vec<_> = t("(***)").expansions().into_iter().map(|(x, e)| (x.literal(), e)).collect();
        e.sort();
        assert_eq!(e, vec![("((**)*)".into(), 1), ("(*(**))".into(), 1)]);
        assert!(t("(**)").expansions().is_empty());
        assert_eq!(t("(****)").expansions().len(), 5);
    }

    #[test]
    fn dimensions() {
        assert_eq!(PlanarTree::corolla(5).dim(), 3);
        assert_eq!(PlanarTree::max(5).dim(), 0);
        assert_eq!(t("(*(**)*)").arities(), vec![3, 2]);
    }
}
