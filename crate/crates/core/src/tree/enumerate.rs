use super::raw::Raw;
use super::{MetricTree, PlanarTree, TreeError};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// All planar trees with `n` leaves and `m` internal edges, sorted by literal.
pub fn enumerate_trees(n: usize, m: usize) -> Result<Vec<PlanarTree>, TreeError> {
    if n < 2 || m > n - 2 {
        return Err(TreeError::Range { n, m });
    }
    let mut gen = Generator::default();
    let mut out: Vec<PlanarTree> = gen.trees(n, m).into_iter().map(|t| PlanarTree(t.canonical())).collect();
    out.sort_by_cached_key(PlanarTree::literal);
    Ok(out)
}

/// All binary trees with `n` leaves, sorted by literal.
pub fn enumerate_binary(n: usize) -> Result<Vec<PlanarTree>, TreeError> {
    enumerate_trees(n, n.saturating_sub(2))
}

/// All cells of `W_n` with `k` metric edges, sorted by literal.
pub fn enumerate_metric(n: usize, k: usize) -> Result<Vec<MetricTree>, TreeError> {
    if n < 2 || k > n - 2 {
        return Err(TreeError::Range { n, m: k });
    }
    let mut out = Vec::new();
    for m in k..=n - 2 {
        for t in enumerate_trees(n, m)? {
            // choose which m - k edges are non-metric
            for mask in 0u32..(1 << m) {
                if mask.count_ones() as usize != m - k {
                    continue;
                }
                let nonmetric: Vec<u32> = (0..m as u32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
                out.push(MetricTree::with_nonmetric(&t, &nonmetric)?);
            }
        }
    }
    out.sort_by_cached_key(MetricTree::literal);
    Ok(out)
}

#[derive(Default)]
struct Generator {
    memo: BTreeMap<(usize, usize), Vec<Raw>>,
}

impl Generator {
    /// Trees with `n` leaves and `m` edges below the root.
    fn trees(&mut self, n: usize, m: usize) -> Vec<Raw> {
        if let Some(v) = self.memo.get(&(n, m)) {
            return v.clone();
        }
        let out: Vec<Raw> = self
            .forests(n, m, 2)
            .into_iter()
            .map(|kids| Raw::Node { tag: 0, metric: true, kids })
            .collect();
        self.memo.insert((n, m), out.clone());
        out
    }

    /// Sequences of at least `need` subtrees or leaves with `n` leaves and
    /// `m` edges in total, counting the edge above each internal part.
    fn forests(&mut self, n: usize, m: usize, need: usize) -> Vec<Vec<Raw>> {
        if n == 0 {
            return if m == 0 && need == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for mut rest in self.forests(n - 1, m, need.saturating_sub(1)) {
            rest.insert(0, Raw::Leaf);
            out.push(rest);
        }
        for l in 2..=n {
            for e in 0..m {
                let heads = self.trees(l, e);
                if heads.is_empty() {
                    continue;
                }
                let tails = self.forests(n - l, m - e - 1, need.saturating_sub(1));
                for h in &heads {
                    for tail in &tails {
                        let mut f = Vec::with_capacity(tail.len() + 1);
                        f.push(h.clone());
                        f.extend(tail.iter().cloned());
                        out.push(f);
                    }
                }
            }
        }
        out
    }
}
