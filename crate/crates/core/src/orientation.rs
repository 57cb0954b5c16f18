//! Orientation calculus: wedge words, the standard orientations `ω_T` of
//! fully metric binary `W`-cells and `ξ_T` of binary `K` 0-cells, the
//! contraction `⌟`, and transport of edge labels along Tamari moves.

use crate::chain::compose_k_raw;
use crate::tree::raw::{parity, Raw};
use crate::tree::{EdgeId, PlanarTree, TreeError};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrientationError {
    #[error("edge {0} occurs twice in the wedge")]
    RepeatedLetter(EdgeId),
    #[error("edge {0} does not occur in the wedge")]
    MissingLetter(EdgeId),
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("target is not below the source in the Tamari order")]
    NotBelow,
}

/// A signed wedge word `±e_{i1}∧…∧e_{im}` of distinct edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    word: Vec<EdgeId>,
    sign: i8,
}

impl Orientation {
    pub fn new(word: Vec<EdgeId>, sign: i8) -> Result<Orientation, OrientationError> {
        if sign != 1 && sign != -1 {
            return Err(OrientationError::BadSign(sign));
        }
        let mut seen = BTreeSet::new();
        for &e in &word {
            if !seen.insert(e) {
                return Err(OrientationError::RepeatedLetter(e));
            }
        }
        Ok(Orientation { word, sign })
    }

    /// `sign · e_1∧…∧e_m` in ascending order.
    pub fn ascending(edges: impl IntoIterator<Item = EdgeId>, sign: i8) -> Orientation {
        let mut word: Vec<EdgeId> = edges.into_iter().collect();
        word.sort_unstable();
        Orientation::new(word, sign).expect("ascending word has distinct letters")
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Equivalent orientation on the ascending word.
    pub fn normalized(&self) -> Orientation {
        let mut word = self.word.clone();
        word.sort_unstable();
        Orientation { word, sign: self.sign * parity(&self.word) }
    }

    /// Sign relative to the ascending word of the same letters.
    pub fn relative_sign(&self) -> i8 {
        self.normalized().sign
    }

    /// Swap the letters at positions `i` and `j`, keeping the class.
    pub fn swapped(&self, i: usize, j: usize) -> Orientation {
        let mut word = self.word.clone();
        word.swap(i, j);
        Orientation { word, sign: if i == j { self.sign } else { -self.sign } }
    }
}

/// `L ⌟ ω`: contract the letters of `labels` from the last to the first; a
/// letter found at 1-based position `p` contributes `(-1)^{p-1}`.
pub fn contract_orientation(labels: &[EdgeId], w: &Orientation) -> Result<Orientation, OrientationError> {
    let mut word = w.word.clone();
    let mut sign = w.sign;
    for l in labels.iter().rev() {
        let p = word.iter().position(|x| x == l).ok_or(OrientationError::MissingLetter(*l))?;
        if p % 2 == 1 {
            sign = -sign;
        }
        word.remove(p);
    }
    Ok(Orientation { word, sign })
}

/// Standard orientations `ω_T` of all fully metric binary `n`-trees,
/// obtained by transport downward from `max(n)` with `ω = e_1∧…∧e_{n-2}`
/// enumerated from the root outward; each covering move keeps every edge
/// label and flips the sign.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    n: usize,
    signs: BTreeMap<Raw, i8>,
    conflicts: usize,
}

impl OmegaTable {
    pub fn new(n: usize) -> OmegaTable {
        assert!(n >= 2, "omega table needs n >= 2");
        let top = Raw::right_comb(n);
        let mut signs = BTreeMap::from([(top.clone(), 1i8)]);
        let mut conflicts = 0;
        let mut frontier = vec![top];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for t in frontier {
                let v = signs[&t];
                let word = t.edge_tags(false);
                for (s, _) in t.down_moves() {
                    let (c, par) = s.orient(&word, false);
                    let w = -v * par;
                    match signs.get(&c) {
                        Some(&old) if old != w => conflicts += 1,
                        Some(_) => {}
                        None => {
                            signs.insert(c.clone(), w);
                            next.push(c);
                        }
                    }
                }
            }
            frontier = next;
        }
        OmegaTable { n, signs, conflicts }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// `ω_T` relative to the ascending canonical wedge.
    pub fn sign(&self, t: &PlanarTree) -> Option<i8> {
        self.signs.get(&t.0).copied()
    }

    /// Covering edges of the Hasse diagram whose transports disagree.
    pub fn conflicts(&self) -> usize {
        self.conflicts
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlanarTree, i8)> + '_ {
        self.signs.iter().map(|(t, s)| (PlanarTree(t.clone()), *s))
    }

    pub(crate) fn raw_iter(&self) -> impl Iterator<Item = (&Raw, i8)> {
        self.signs.iter().map(|(t, s)| (t, *s))
    }
}

/// `ω_T` for a binary tree, normalized to the ascending word.
pub fn std_orientation_w(t: &PlanarTree) -> Result<Orientation, OrientationError> {
    if !t.is_binary() {
        return Err(TreeError::NotBinary.into());
    }
    let s = OmegaTable::new(t.leaves()).sign(t).expect("every binary tree lies below max(n)");
    Ok(Orientation::ascending(t.edges(), s))
}

/// Cherries (vertices with two leaf children) below the root, by tag.
fn cherries(t: &Raw) -> Vec<u32> {
    t.vertices()
        .into_iter()
        .skip(1)
        .map(|(tag, _)| tag)
        .filter(|&tag| t.find(tag).is_some_and(|v| v.kids().iter().all(Raw::is_leaf)))
        .collect()
}

/// `ξ_T` computed along the decomposition that removes cherry `tag` first.
fn xi_via(t: &Raw, tag: u32) -> i8 {
    let (outer, i, inner) = t.cut(tag);
    let outer = outer.canonical();
    let (c, s) = compose_k_raw(&outer, i, &inner.canonical()).expect("leaf index in range");
    debug_assert_eq!(c, *t);
    s * xi_raw(&outer)
}

/// `ξ_T` of a canonical binary tree relative to the ascending wedge.
pub(crate) fn xi_raw(t: &Raw) -> i8 {
    match cherries(t).first() {
        None => 1,
        Some(&tag) => xi_via(t, tag),
    }
}

/// `ξ_T`: the orientation of the binary 0-cell `T` of `K_n` determined by
/// `(S, ξ_S) ∘_i (T', ξ_T') = (S ∘_i T', ξ_{S∘_i T'})` and `ξ = +1` on `c(2)`.
pub fn std_orientation_k(t: &PlanarTree) -> Result<Orientation, OrientationError> {
    if !t.is_binary() {
        return Err(TreeError::NotBinary.into());
    }
    Ok(Orientation::ascending(t.edges(), xi_raw(&t.0)))
}

/// The values `sign · ξ_S · ξ_T'` over every splitting `T = S ∘_i T'` at a
/// non-root vertex; a singleton `{ξ_T}` exactly when `ξ` respects every
/// binary decomposition of `T`.
pub fn xi_decomposition_values(t: &PlanarTree) -> BTreeSet<i8> {
    let mut out = BTreeSet::new();
    for (tag, _) in t.0.vertices().into_iter().skip(1) {
        let (outer, i, inner) = t.0.cut(tag);
        let (outer, inner) = (outer.canonical(), inner.canonical());
        let (c, s) = compose_k_raw(&outer, i, &inner).expect("leaf index in range");
        debug_assert_eq!(c, t.0);
        out.insert(s * xi_raw(&outer) * xi_raw(&inner));
    }
    if out.is_empty() {
        out.insert(1);
    }
    out
}

/// Binary trees reachable from a labelled tree by label-preserving
/// downward moves, each with the transported labels (as tags).
///
/// A move `x(yz) -> (xy)z` at a labelled edge `w` carries the label to `y`'s
/// edge; if `y` is a leaf the label would be lost and the move is skipped.
/// The second component counts trees reached with two different labellings.
pub(crate) fn propagate_all(source: &Raw, labels: &[u32]) -> (Vec<(Raw, Vec<u32>)>, usize) {
    let mut seen: BTreeMap<Raw, Vec<u32>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut ambiguities = 0;
    let mut frontier = vec![(source.clone(), labels.to_vec())];
    while let Some((s, lab)) = frontier.pop() {
        let key = s.canonical();
        let pos = s.positions();
        let lab_pos: Vec<u32> = lab.iter().map(|t| pos[t]).collect();
        if let Some(prev) = seen.get(&key) {
            if *prev != lab_pos {
                ambiguities += 1;
            }
            continue;
        }
        seen.insert(key, lab_pos);
        for (s2, (w, y)) in s.down_moves() {
            let mut l2 = lab.clone();
            if let Some(j) = lab.iter().position(|&t| t == w) {
                match y {
                    Some(y) => l2[j] = y,
                    None => continue,
                }
            }
            frontier.push((s2, l2));
        }
        order.push((s, lab));
    }
    (order, ambiguities)
}

/// Transport labels `labels` (edges of `source`, each left-leaning) down to
/// `target` along label-preserving moves. Returns the labels as edges of
/// `target`, or `None` when every path loses a label.
pub fn propagate_labels(
    source: &PlanarTree,
    labels: &[EdgeId],
    target: &PlanarTree,
) -> Result<Option<Vec<EdgeId>>, OrientationError> {
    if !crate::tree::tamari_leq(target, source)? {
        return Err(OrientationError::NotBelow);
    }
    let ll = source.0.left_leaning();
    if let Some(&e) = labels.iter().find(|e| !ll.contains(e)) {
        return Err(OrientationError::MissingLetter(e));
    }
    let (reached, _) = propagate_all(&source.0, labels);
    Ok(reached.into_iter().find(|(s, _)| s.canonical() == target.0).map(|(s, lab)| {
        let pos = s.positions();
        lab.iter().map(|t| pos[t]).collect()
    }))
}

/// Number of trees reached with conflicting labellings from `source` with
/// all of its left-leaning edges labelled.
pub fn propagation_ambiguities(source: &PlanarTree) -> Result<usize, OrientationError> {
    let labels: Vec<u32> = left_leaning_sorted(source)?;
    Ok(propagate_all(&source.0, &labels).1)
}

fn left_leaning_sorted(t: &PlanarTree) -> Result<Vec<EdgeId>, OrientationError> {
    Ok(crate::tree::left_leaning_edges(t)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_binary;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }

    fn closed_form_max(n: i64) -> i8 {
        if ((n - 2) * (n - 3) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn orientation_construction() {
        assert_eq!(Orientation::new(vec![1, 2, 1], 1), Err(OrientationError::RepeatedLetter(1)));
        assert_eq!(Orientation::new(vec![1], 0), Err(OrientationError::BadSign(0)));
        let o = Orientation::new(vec![3, 1, 2], -1).unwrap();
        assert_eq!(o.normalized(), Orientation::new(vec![1, 2, 3], -1).unwrap());
        assert_eq!(o.swapped(0, 1).normalized(), o.normalized());
    }

    #[test]
    fn contraction_examples() {
        let e = Orientation::new(vec![1], 1).unwrap();
        assert_eq!(contract_orientation(&[1], &e).unwrap(), Orientation::new(vec![], 1).unwrap());
        let w = Orientation::new(vec![1, 2], 1).unwrap();
        assert_eq!(contract_orientation(&[2], &w).unwrap(), Orientation::new(vec![1], -1).unwrap());
        assert_eq!(contract_orientation(&[3], &w), Err(OrientationError::MissingLetter(3)));
        // a k-prefix contracts to (-1)^{k(k-1)/2}
        let w = Orientation::new(vec![1, 2, 3, 7, 8], 1).unwrap();
        let r = contract_orientation(&[1, 2, 3], &w).unwrap();
        assert_eq!((r.word(), r.sign()), (&[7, 8][..], -1));
    }

    #[test]
    fn omega_is_path_independent() {
        for n in 2..=6 {
            let table = OmegaTable::new(n);
            assert_eq!(table.conflicts(), 0, "n={n}");
            assert_eq!(table.iter().count(), enumerate_binary(n).unwrap().len());
        }
    }

    #[test]
    fn omega_small_values() {
        assert_eq!(std_orientation_w(&PlanarTree::max(5)).unwrap().sign(), 1);
        assert_eq!(std_orientation_w(&PlanarTree::min(3)).unwrap().sign(), -1);
        assert_eq!(std_orientation_w(&t("(***)")), Err(OrientationError::Tree(TreeError::NotBinary)));
    }

    #[test]
    fn xi_anchors() {
        assert_eq!(std_orientation_k(&PlanarTree::min(3)).unwrap().sign(), -1);
        assert_eq!(std_orientation_k(&PlanarTree::max(3)).unwrap().sign(), 1);
        for n in 2..=7 {
            assert_eq!(std_orientation_k(&PlanarTree::max(n)).unwrap().sign(), closed_form_max(n as i64), "max {n}");
            let min = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(std_orientation_k(&PlanarTree::min(n)).unwrap().sign(), min, "min {n}");
        }
    }

    #[test]
    fn xi_is_well_defined() {
        for n in 2..=6 {
            for b in enumerate_binary(n).unwrap() {
                let xi = std_orientation_k(&b).unwrap().sign();
                assert_eq!(xi_decomposition_values(&b), BTreeSet::from([xi]), "{b}");
            }
        }
    }

    #[test]
    fn propagation_examples() {
        let src = t("(*((**)*))");
        let e = left_leaning_sorted(&src).unwrap();
        assert_eq!(e.len(), 1);
        let tgt = t("((*(**))*)");
        let got = propagate_labels(&src, &e, &tgt).unwrap().unwrap();
        assert_eq!(got, left_leaning_sorted(&tgt).unwrap());
        assert_eq!(propagate_labels(&src, &e, &src).unwrap().unwrap(), e);
        assert_eq!(propagate_labels(&src, &e, &PlanarTree::min(4)).unwrap(), None);
        assert_eq!(propagate_labels(&tgt, &[1], &src), Err(OrientationError::NotBelow));
    }

    #[test]
    fn propagation_is_unambiguous() {
        for n in 3..=7 {
            for b in enumerate_binary(n).unwrap() {
                assert_eq!(propagation_ambiguities(&b).unwrap(), 0, "{b}");
            }
        }
    }
}
