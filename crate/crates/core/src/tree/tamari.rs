#[cfg(test)]
use super::raw::Raw;
use super::{EdgeId, PlanarTree, TreeError};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

/// Binary resolution of a tree produced by [`fill_min`] or [`fill_max`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fill {
    pub tree: PlanarTree,
    /// `image[e - 1]` is the edge of `tree` that edge `e` of the input became.
    pub image: Vec<EdgeId>,
    /// Edges created by the fill-in, ascending.
    pub new_edges: Vec<EdgeId>,
}

fn fill(t: &PlanarTree, minimal: bool) -> Fill {
    let old = t.0.max_tag();
    let mut next = old + 1;
    let f = t.0.fill(minimal, &mut next);
    let pos = f.positions();
    let image = (1..=old).map(|e| pos[&e]).collect();
    let mut new_edges: Vec<EdgeId> = pos.iter().filter(|(tag, _)| **tag > old).map(|(_, p)| *p).collect();
    new_edges.sort_unstable();
    Fill { tree: PlanarTree(f.canonical()), image, new_edges }
}

/// Replace each vertex of arity `r > 2` by the left-nested binary `r`-tree.
pub fn fill_min(t: &PlanarTree) -> Fill {
    fill(t, true)
}

/// Replace each vertex of arity `r > 2` by the right-nested binary `r`-tree.
pub fn fill_max(t: &PlanarTree) -> Fill {
    fill(t, false)
}

/// Edges whose lower vertex is the right child of its parent.
pub fn left_leaning_edges(t: &PlanarTree) -> Result<BTreeSet<EdgeId>, TreeError> {
    if !t.is_binary() {
        return Err(TreeError::NotBinary);
    }
    Ok(t.0.left_leaning())
}

/// `s <= t` in the Tamari order generated by `(xy)z -> x(yz)` upward.
pub fn tamari_leq(s: &PlanarTree, t: &PlanarTree) -> Result<bool, TreeError> {
    if !s.is_binary() || !t.is_binary() {
        return Err(TreeError::NotBinary);
    }
    if s.leaves() != t.leaves() {
        return Err(TreeError::LeafCountMismatch(s.leaves(), t.leaves()));
    }
    // upward moves never decrease the left-leaning count
    let target = t.0.left_leaning().len();
    let mut seen = BTreeSet::from([s.0.clone()]);
    let mut frontier = vec![s.0.clone()];
    while let Some(x) = frontier.pop() {
        if x == t.0 {
            return Ok(true);
        }
        if x.left_leaning().len() > target {
            continue;
        }
        for y in x.up_moves() {
            let y = y.canonical();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(false)
}

/// Binary trees reachable from `t` by downward moves, including `t`.
#[cfg(test)]
pub(crate) fn down_set(t: &Raw) -> BTreeSet<Raw> {
    let mut seen = BTreeSet::from([t.canonical()]);
    let mut frontier = vec![t.canonical()];
    while let Some(x) = frontier.pop() {
        for (y, _) in x.down_moves() {
            let y = y.canonical();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_binary;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }

    #[test]
    fn leaning_anchors() {
        assert_eq!(left_leaning_edges(&PlanarTree::max(4)).unwrap(), BTreeSet::from([1, 2]));
        assert!(left_leaning_edges(&PlanarTree::min(4)).unwrap().is_empty());
        assert_eq!(left_leaning_edges(&t("((**)(**))")).unwrap().len(), 1);
        assert_eq!(left_leaning_edges(&t("(***)")), Err(TreeError::NotBinary));
    }

    #[test]
    fn tamari_examples() {
        let min4 = PlanarTree::min(4);
        for b in enumerate_binary(4).unwrap() {
            assert!(tamari_leq(&min4, &b).unwrap());
            assert!(tamari_leq(&b, &PlanarTree::max(4)).unwrap());
        }
        assert!(tamari_leq(&t("((*(**))*)"), &t("(*((**)*))")).unwrap());
        assert!(!tamari_leq(&t("((**)(**))"), &t("((*(**))*)")).unwrap());
        assert!(!tamari_leq(&t("((*(**))*)"), &t("((**)(**))")).unwrap());
        assert_eq!(tamari_leq(&t("(**)"), &t("(*(**))")), Err(TreeError::LeafCountMismatch(2, 3)));
    }

    #[test]
    fn fill_examples() {
        let f = fill_min(&t("(***)"));
        assert_eq!(f.tree, t("((**)*)"));
        assert_eq!(f.new_edges.len(), 1);
        assert_eq!(fill_min(&PlanarTree::corolla(4)).tree, PlanarTree::min(4));
        assert_eq!(fill_max(&PlanarTree::corolla(4)).tree, PlanarTree::max(4));
    }

    #[test]
    fn fill_tracks_original_edges() {
        let src = t("(*(***)(**))");
        for f in [fill_min(&src), fill_max(&src)] {
            assert_eq!(f.image.len(), 2);
            assert_eq!(f.tree.edge_count(), src.leaves() - 2);
            // contracting the new edges recovers the input
            let mut r = f.tree.0.clone();
            for e in &f.new_edges {
                r = r.contract(*e);
            }
            let back = r.canonical();
            assert_eq!(back, src.0);
            // and the surviving edges are the images, in order
            let pos = r.positions();
            let survivors: Vec<u32> = f.image.iter().map(|e| pos[e]).collect();
            assert_eq!(survivors, vec![1, 2]);
        }
    }
}
