//! Tagged tree representation shared by every tree-valued operation.
//!
//! Each internal vertex carries a `tag` identifying the edge above it, so an
//! edge can be followed through grafting, contraction, rotation and fill-in.
//! A tree is *canonical* when its tags are the pre-order indices of its
//! internal vertices (root = 0); for canonical trees tag and [`EdgeId`]
//! coincide and derived equality is structural equality.
//!
//! [`EdgeId`]: super::EdgeId

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Raw {
    Leaf,
    Node {
        tag: u32,
        /// Flag of the edge above this vertex; always `true` on the root.
        metric: bool,
        kids: Vec<Raw>,
    },
}

/// Parity of a sequence of distinct keys: `+1` if even, `-1` if odd.
pub(crate) fn parity<T: Ord>(seq: &[T]) -> i8 {
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            debug_assert!(seq[i] != seq[j]);
            if seq[i] > seq[j] {
                sign = -sign;
            }
        }
    }
    sign
}

impl Raw {
    pub(crate) fn corolla(n: usize) -> Raw {
        Raw::Node { tag: 0, metric: true, kids: vec![Raw::Leaf; n] }
    }

    /// Right comb `(*(*(...(**))))`.
    pub(crate) fn right_comb(n: usize) -> Raw {
        let mut t = Raw::corolla(2);
        for _ in 2..n {
            t = Raw::Node { tag: 0, metric: true, kids: vec![Raw::Leaf, t] };
        }
        t.canonical()
    }

    /// Left comb `(((**)*)...*)`.
    pub(crate) fn left_comb(n: usize) -> Raw {
        let mut t = Raw::corolla(2);
        for _ in 2..n {
            t = Raw::Node { tag: 0, metric: true, kids: vec![t, Raw::Leaf] };
        }
        t.canonical()
    }

    pub(crate) fn is_leaf(&self) -> bool {
        matches!(self, Raw::Leaf)
    }

    pub(crate) fn tag(&self) -> u32 {
        match self {
            Raw::Leaf => panic!("leaf has no tag"),
            Raw::Node { tag, .. } => *tag,
        }
    }

    #[cfg(test)]
    pub(crate) fn metric(&self) -> bool {
        match self {
            Raw::Leaf => true,
            Raw::Node { metric, .. } => *metric,
        }
    }

    pub(crate) fn kids(&self) -> &[Raw] {
        match self {
            Raw::Leaf => &[],
            Raw::Node { kids, .. } => kids,
        }
    }

    pub(crate) fn leaves(&self) -> usize {
        match self {
            Raw::Leaf => 1,
            Raw::Node { kids, .. } => kids.iter().map(Raw::leaves).sum(),
        }
    }

    pub(crate) fn is_binary(&self) -> bool {
        match self {
            Raw::Leaf => true,
            Raw::Node { kids, .. } => kids.len() == 2 && kids.iter().all(Raw::is_binary),
        }
    }

    /// Internal vertices in pre-order as `(tag, metric)`, root first.
    pub(crate) fn vertices(&self) -> Vec<(u32, bool)> {
        fn go(t: &Raw, out: &mut Vec<(u32, bool)>) {
            if let Raw::Node { tag, metric, kids } = t {
                out.push((*tag, *metric));
                for k in kids {
                    go(k, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Internal edge tags in pre-order, optionally restricted to metric edges.
    pub(crate) fn edge_tags(&self, metric_only: bool) -> Vec<u32> {
        self.vertices()
            .into_iter()
            .skip(1)
            .filter(|&(_, m)| m || !metric_only)
            .map(|(t, _)| t)
            .collect()
    }

    pub(crate) fn max_tag(&self) -> u32 {
        self.vertices().iter().map(|v| v.0).max().unwrap_or(0)
    }

    pub(crate) fn map_tags(&self, f: &impl Fn(u32) -> u32) -> Raw {
        match self {
            Raw::Leaf => Raw::Leaf,
            Raw::Node { tag, metric, kids } => Raw::Node {
                tag: f(*tag),
                metric: *metric,
                kids: kids.iter().map(|k| k.map_tags(f)).collect(),
            },
        }
    }

    /// Retag in pre-order and clear the root flag.
    pub(crate) fn canonical(&self) -> Raw {
        fn go(t: &Raw, next: &mut u32) -> Raw {
            match t {
                Raw::Leaf => Raw::Leaf,
                Raw::Node { metric, kids, .. } => {
                    let tag = *next;
                    *next += 1;
                    Raw::Node { tag, metric: *metric, kids: kids.iter().map(|k| go(k, next)).collect() }
                }
            }
        }
        let mut next = 0;
        let mut c = go(self, &mut next);
        if let Raw::Node { metric, .. } = &mut c {
            *metric = true;
        }
        c
    }

    /// Map from tag to canonical pre-order index.
    pub(crate) fn positions(&self) -> BTreeMap<u32, u32> {
        self.vertices().iter().enumerate().map(|(i, v)| (v.0, i as u32)).collect()
    }

    /// Canonical form together with the sign of `word` (a wedge of edge
    /// tags) relative to the ascending canonical wedge of the same edges.
    ///
    /// `word` must enumerate exactly the internal edges (metric edges when
    /// `metric_only`) once each.
    pub(crate) fn orient(&self, word: &[u32], metric_only: bool) -> (Raw, i8) {
        let pos = self.positions();
        let idx: Vec<u32> = word.iter().map(|t| pos[t]).collect();
        debug_assert_eq!(
            {
                let mut s = idx.clone();
                s.sort_unstable();
                s
            },
            {
                let c = self.canonical();
                c.edge_tags(metric_only)
            },
            "orientation word does not match the edge set"
        );
        (self.canonical(), parity(&idx))
    }

    /// Replace leaf `i` (1-based) by `b`; the root of `b` becomes a vertex
    /// whose edge carries flag `metric`. Tags of `b` must not clash.
    pub(crate) fn graft(&self, i: usize, b: &Raw, metric: bool) -> Option<Raw> {
        fn go(t: &Raw, i: usize, b: &Raw, metric: bool, seen: &mut usize) -> Raw {
            match t {
                Raw::Leaf => {
                    *seen += 1;
                    if *seen == i {
                        match b {
                            Raw::Leaf => Raw::Leaf,
                            Raw::Node { tag, kids, .. } => {
                                Raw::Node { tag: *tag, metric, kids: kids.clone() }
                            }
                        }
                    } else {
                        Raw::Leaf
                    }
                }
                Raw::Node { tag, metric: m, kids } => Raw::Node {
                    tag: *tag,
                    metric: *m,
                    kids: kids.iter().map(|k| go(k, i, b, metric, seen)).collect(),
                },
            }
        }
        if i == 0 || i > self.leaves() {
            return None;
        }
        Some(go(self, i, b, metric, &mut 0))
    }

    /// Tags of `b` shifted past those of `self`, for a clash-free graft.
    pub(crate) fn disjoint(&self, b: &Raw) -> Raw {
        let off = self.max_tag() + 1;
        b.map_tags(&|t| t + off)
    }

    /// Collapse the edge above the vertex tagged `tag`.
    pub(crate) fn contract(&self, tag: u32) -> Raw {
        match self {
            Raw::Leaf => Raw::Leaf,
            Raw::Node { tag: t, metric, kids } => {
                let mut out = Vec::with_capacity(kids.len() + 2);
                for k in kids {
                    match k {
                        Raw::Node { tag: kt, kids: kk, .. } if *kt == tag => {
                            out.extend(kk.iter().map(|x| x.contract(tag)))
                        }
                        _ => out.push(k.contract(tag)),
                    }
                }
                Raw::Node { tag: *t, metric: *metric, kids: out }
            }
        }
    }

    pub(crate) fn set_metric(&self, tag: u32, value: bool) -> Raw {
        match self {
            Raw::Leaf => Raw::Leaf,
            Raw::Node { tag: t, metric, kids } => Raw::Node {
                tag: *t,
                metric: if *t == tag { value } else { *metric },
                kids: kids.iter().map(|k| k.set_metric(tag, value)).collect(),
            },
        }
    }

    /// Apply `local` at every internal vertex, rebuilding the tree around
    /// each rewrite.
    pub(crate) fn rewrites<X: Clone>(&self, local: &impl Fn(&Raw) -> Vec<(Raw, X)>) -> Vec<(Raw, X)> {
        let mut out = Vec::new();
        if let Raw::Node { tag, metric, kids } = self {
            out.extend(local(self));
            for (j, k) in kids.iter().enumerate() {
                for (r, x) in k.rewrites(local) {
                    let mut nk = kids.clone();
                    nk[j] = r;
                    out.push((Raw::Node { tag: *tag, metric: *metric, kids: nk }, x));
                }
            }
        }
        out
    }

    /// Every way of splitting one vertex by a new edge tagged `fresh`: a
    /// contiguous run of at least two, but not all, children moves below it.
    pub(crate) fn expansions(&self, fresh: u32) -> Vec<Raw> {
        self.rewrites(&|t: &Raw| {
            let (tag, metric, kids) = match t {
                Raw::Node { tag, metric, kids } => (*tag, *metric, kids),
                Raw::Leaf => unreachable!(),
            };
            let r = kids.len();
            let mut out = Vec::new();
            for a in 0..r {
                for b in a + 2..=r {
                    if b - a == r {
                        continue;
                    }
                    let mut nk: Vec<Raw> = kids[..a].to_vec();
                    nk.push(Raw::Node { tag: fresh, metric: true, kids: kids[a..b].to_vec() });
                    nk.extend_from_slice(&kids[b..]);
                    out.push((Raw::Node { tag, metric, kids: nk }, ()));
                }
            }
            out
        })
        .into_iter()
        .map(|(t, _)| t)
        .collect()
    }

    /// Downward Tamari moves `x(yz) -> (xy)z` of a binary tree. Each result
    /// carries the tag `w` of the rotated vertex (kept by the new left child)
    /// and the tag of `y` when `y` is internal.
    pub(crate) fn down_moves(&self) -> Vec<(Raw, (u32, Option<u32>))> {
        self.rewrites(&|t: &Raw| {
            let (tag, metric, kids) = match t {
                Raw::Node { tag, metric, kids } => (*tag, *metric, kids),
                Raw::Leaf => unreachable!(),
            };
            match &kids[1] {
                Raw::Node { tag: w, metric: wm, kids: wk } => {
                    let (y, z) = (&wk[0], &wk[1]);
                    let ytag = if y.is_leaf() { None } else { Some(y.tag()) };
                    let u = Raw::Node { tag: *w, metric: *wm, kids: vec![kids[0].clone(), y.clone()] };
                    vec![(Raw::Node { tag, metric, kids: vec![u, z.clone()] }, (*w, ytag))]
                }
                Raw::Leaf => vec![],
            }
        })
    }

    /// Upward Tamari moves `(xy)z -> x(yz)` of a binary tree.
    pub(crate) fn up_moves(&self) -> Vec<Raw> {
        self.rewrites(&|t: &Raw| {
            let (tag, metric, kids) = match t {
                Raw::Node { tag, metric, kids } => (*tag, *metric, kids),
                Raw::Leaf => unreachable!(),
            };
            match &kids[0] {
                Raw::Node { tag: u, metric: um, kids: uk } => {
                    let w = Raw::Node { tag: *u, metric: *um, kids: vec![uk[1].clone(), kids[1].clone()] };
                    vec![(Raw::Node { tag, metric, kids: vec![uk[0].clone(), w] }, ())]
                }
                Raw::Leaf => vec![],
            }
        })
        .into_iter()
        .map(|(t, _)| t)
        .collect()
    }

    /// Resolve every vertex of arity `r > 2` into the minimal (left-nested)
    /// or maximal (right-nested) binary `r`-tree. The original vertex keeps
    /// its tag at the top; new vertices get fresh metric tags from `next`.
    pub(crate) fn fill(&self, minimal: bool, next: &mut u32) -> Raw {
        match self {
            Raw::Leaf => Raw::Leaf,
            Raw::Node { tag, metric, kids } => {
                let mut k: Vec<Raw> = kids.iter().map(|x| x.fill(minimal, next)).collect();
                let r = k.len();
                let pair = if minimal {
                    let last = k.pop().unwrap();
                    let mut cur = k.remove(0);
                    for x in k {
                        cur = Raw::Node { tag: *next, metric: true, kids: vec![cur, x] };
                        *next += 1;
                    }
                    vec![cur, last]
                } else {
                    let first = k.remove(0);
                    let mut cur = k.pop().unwrap();
                    for x in k.into_iter().rev() {
                        cur = Raw::Node { tag: *next, metric: true, kids: vec![x, cur] };
                        *next += 1;
                    }
                    vec![first, cur]
                };
                debug_assert!(r >= 2);
                Raw::Node { tag: *tag, metric: *metric, kids: pair }
            }
        }
    }

    /// Tags of vertices that are the right child of a binary parent.
    pub(crate) fn left_leaning(&self) -> BTreeSet<u32> {
        fn go(t: &Raw, out: &mut BTreeSet<u32>) {
            if let Raw::Node { kids, .. } = t {
                if let Some(Raw::Node { tag, .. }) = kids.get(1) {
                    out.insert(*tag);
                }
                for k in kids {
                    go(k, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Split at the non-root vertex `tag`: returns the outer tree (vertex
    /// replaced by a leaf), that leaf's 1-based index, and the subtree with
    /// its root flag cleared.
    pub(crate) fn cut(&self, tag: u32) -> (Raw, usize, Raw) {
        fn go(t: &Raw, tag: u32, seen: &mut usize, found: &mut Option<(usize, Raw)>) -> Raw {
            match t {
                Raw::Leaf => {
                    *seen += 1;
                    Raw::Leaf
                }
                Raw::Node { tag: t2, kids, .. } if *t2 == tag => {
                    *seen += 1;
                    *found = Some((*seen, Raw::Node { tag: *t2, metric: true, kids: kids.clone() }));
                    Raw::Leaf
                }
                Raw::Node { tag: t2, metric, kids } => Raw::Node {
                    tag: *t2,
                    metric: *metric,
                    kids: kids.iter().map(|k| go(k, tag, seen, found)).collect(),
                },
            }
        }
        let mut found = None;
        let outer = go(self, tag, &mut 0, &mut found);
        let (i, inner) = found.expect("cut: tag not present below the root");
        (outer, i, inner)
    }

    /// Parent tag of every non-root vertex.
    pub(crate) fn parents(&self) -> BTreeMap<u32, u32> {
        fn go(t: &Raw, out: &mut BTreeMap<u32, u32>) {
            if let Raw::Node { tag, kids, .. } = t {
                for k in kids {
                    if let Raw::Node { tag: kt, .. } = k {
                        out.insert(*kt, *tag);
                    }
                    go(k, out);
                }
            }
        }
        let mut out = BTreeMap::new();
        go(self, &mut out);
        out
    }

    /// Find the vertex tagged `tag`.
    pub(crate) fn find(&self, tag: u32) -> Option<&Raw> {
        match self {
            Raw::Leaf => None,
            Raw::Node { tag: t, kids, .. } => {
                if *t == tag {
                    Some(self)
                } else {
                    kids.iter().find_map(|k| k.find(tag))
                }
            }
        }
    }

    pub(crate) fn render(&self, metric_marks: bool) -> String {
        fn go(t: &Raw, marks: bool, root: bool, out: &mut String) {
            match t {
                Raw::Leaf => out.push('*'),
                Raw::Node { metric, kids, .. } => {
                    out.push('(');
                    for k in kids {
                        go(k, marks, false, out);
                    }
                    out.push(')');
                    if marks && !root && !*metric {
                        out.push('!');
                    }
                }
            }
        }
        let mut s = String::new();
        go(self, metric_marks, true, &mut s);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corolla_tagged(n: usize, tag: u32) -> Raw {
        Raw::Node { tag, metric: true, kids: vec![Raw::Leaf; n] }
    }

    #[test]
    fn parity_counts_inversions() {
        assert_eq!(parity(&[1, 2, 3]), 1);
        assert_eq!(parity(&[2, 1, 3]), -1);
        assert_eq!(parity(&[3, 1, 2]), 1);
        assert_eq!(parity::<u32>(&[]), 1);
    }

    #[test]
    fn combs_render() {
        assert_eq!(Raw::right_comb(4).render(false), "(*(*(**)))");
        assert_eq!(Raw::left_comb(4).render(false), "(((**)*)*)");
        assert_eq!(Raw::right_comb(2).render(false), "(**)");
    }

    #[test]
    fn graft_contract_roundtrip() {
        let a = Raw::corolla(3);
        let b = corolla_tagged(2, 7);
        let g = a.graft(2, &b, true).unwrap();
        assert_eq!(g.render(false), "(*(**)*)");
        assert_eq!(g.contract(7).render(false), "(****)");
        assert!(a.graft(4, &b, true).is_none());
    }

    #[test]
    fn rotation_keeps_rotated_tag() {
        let t = Raw::right_comb(3);
        let moves = t.down_moves();
        assert_eq!(moves.len(), 1);
        let (s, (w, y)) = &moves[0];
        assert_eq!(s.render(false), "((**)*)");
        assert_eq!(*w, 1);
        assert_eq!(*y, None);
        assert_eq!(s.kids()[0].tag(), 1);
    }

    #[test]
    fn fill_shapes() {
        let mut next = 10;
        assert_eq!(Raw::corolla(4).fill(true, &mut next).render(false), "(((**)*)*)");
        assert_eq!(Raw::corolla(4).fill(false, &mut next).render(false), "(*(*(**)))");
    }

    #[test]
    fn cut_reports_leaf_index() {
        let t = Raw::right_comb(4);
        let (outer, i, inner) = t.cut(2);
        assert_eq!(outer.render(false), "(*(**))");
        assert_eq!(i, 3);
        assert_eq!(inner.render(false), "(**)");
    }
}
