//! Rational homology of `C_*(K_n)` and an explicit contracting homotopy,
//! used to exhibit defects of the diagonal as boundaries in `C_*(K_n)^{⊗3}`.

use crate::chain::{k_cells, Basis, Chain, TripleChain};
use crate::linalg::{rank, solve_linear, Field};
use crate::tree::PlanarTree;
use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Q = BigRational;

/// A chain with rational coefficients and no zero entries.
pub type QChain<B> = BTreeMap<B, Q>;

fn add<B: Ord>(x: &mut QChain<B>, b: B, c: Q) {
    if c.is_zero() {
        return;
    }
    match x.entry(b) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn to_rational<B: Basis>(x: &Chain<B>) -> QChain<B> {
    x.iter().map(|(b, c)| (b.clone(), Q::from_i64(c))).collect()
}

/// The differential applied to a rational chain.
pub fn boundary_q<B: Basis>(x: &QChain<B>) -> QChain<B> {
    let mut out = QChain::new();
    for (b, c) in x {
        for (bb, k) in b.boundary().iter() {
            add(&mut out, bb.clone(), c.clone() * Q::from_i64(k));
        }
    }
    out
}

fn cells_by_dim(n: usize) -> Vec<Vec<PlanarTree>> {
    let mut out = vec![Vec::new(); n - 1];
    for c in k_cells(n) {
        out[c.dim()].push(c);
    }
    for v in &mut out {
        v.sort();
    }
    out
}

/// Dense matrix of `∂_k: C_k(K_n) -> C_{k-1}(K_n)`, rows indexed by
/// `(k-1)`-cells.
fn boundary_matrix(cells: &[Vec<PlanarTree>], k: usize) -> Vec<Vec<Q>> {
    let rows = &cells[k - 1];
    let index: BTreeMap<&PlanarTree, usize> = rows.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = vec![vec![Q::zero(); cells[k].len()]; rows.len()];
    for (j, c) in cells[k].iter().enumerate() {
        for (b, v) in c.boundary().iter() {
            m[index[b]][j] = Q::from_i64(v);
        }
    }
    m
}

fn boundary_rank(cells: &[Vec<PlanarTree>], k: usize) -> usize {
    if k == 0 || k >= cells.len() {
        return 0;
    }
    rank(boundary_matrix(cells, k), cells[k].len())
}

/// `dim ker(∂_k)` on `C_k(K_n)`.
pub fn cycle_rank(n: usize, k: usize) -> usize {
    let cells = cells_by_dim(n);
    cells[k].len() - boundary_rank(&cells, k)
}

/// Rational Betti numbers `b_0, …, b_{n-2}` of `K_n`.
pub fn betti(n: usize) -> Vec<usize> {
    let cells = cells_by_dim(n);
    (0..cells.len())
        .map(|k| cells[k].len() - boundary_rank(&cells, k) - boundary_rank(&cells, k + 1))
        .collect()
}

/// A contracting homotopy `h` of `C_*(K_n) ⊗ Q` onto a base vertex:
/// `∂h + h∂ = 1 - ιε`, with `ε` the augmentation and `ι` the base vertex.
#[derive(Clone, Debug)]
pub struct Contraction {
    base: PlanarTree,
    epsilon: BTreeMap<PlanarTree, Q>,
    h: BTreeMap<PlanarTree, QChain<PlanarTree>>,
}

impl Contraction {
    pub fn new(n: usize) -> Contraction {
        let cells = cells_by_dim(n);
        let base = PlanarTree::min(n);
        let epsilon = augmentation(&cells, &base);
        let mut c = Contraction { base: base.clone(), epsilon, h: BTreeMap::new() };
        for k in 0..cells.len() {
            let above = (k + 1 < cells.len()).then(|| boundary_matrix(&cells, k + 1));
            for cell in &cells[k] {
                // target = cell - ιε(cell) - h(∂cell)
                let mut target = QChain::new();
                add(&mut target, cell.clone(), Q::one());
                if k == 0 {
                    add(&mut target, base.clone(), -c.epsilon[cell].clone());
                } else {
                    let d = to_rational(&cell.boundary());
                    for (b, v) in c.apply(&d) {
                        add(&mut target, b, -v);
                    }
                }
                let value = match &above {
                    None => {
                        assert!(target.is_empty(), "top homology of K_{n} vanishes");
                        QChain::new()
                    }
                    Some(m) => {
                        let rhs: Vec<Q> = cells[k].iter().map(|x| target.get(x).cloned().unwrap_or_else(Q::zero)).collect();
                        let sol = solve_linear(m, &rhs, cells[k + 1].len()).expect("K_n is acyclic");
                        cells[k + 1].iter().cloned().zip(sol.particular).filter(|(_, v)| !v.is_zero()).collect()
                    }
                };
                c.h.insert(cell.clone(), value);
            }
        }
        c
    }

    pub fn base(&self) -> &PlanarTree {
        &self.base
    }

    /// `ε` on a vertex, normalized by `ε(base) = 1`.
    pub fn epsilon(&self, v: &PlanarTree) -> Q {
        self.epsilon.get(v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn apply(&self, x: &QChain<PlanarTree>) -> QChain<PlanarTree> {
        let mut out = QChain::new();
        for (b, c) in x {
            for (bb, v) in &self.h[b] {
                add(&mut out, bb.clone(), c.clone() * v.clone());
            }
        }
        out
    }

    /// `H = h⊗1⊗1 + ιε⊗h⊗1 + ιε⊗ιε⊗h` on the triple tensor power.
    pub fn apply_triple(&self, x: &QChain<(PlanarTree, PlanarTree, PlanarTree)>) -> QChain<(PlanarTree, PlanarTree, PlanarTree)> {
        let mut out = QChain::new();
        for ((a, b, c), k) in x {
            for (ha, v) in &self.h[a] {
                add(&mut out, (ha.clone(), b.clone(), c.clone()), k.clone() * v.clone());
            }
            let ea = self.epsilon(a);
            if ea.is_zero() {
                continue;
            }
            for (hb, v) in &self.h[b] {
                add(&mut out, (self.base.clone(), hb.clone(), c.clone()), k.clone() * ea.clone() * v.clone());
            }
            let eb = self.epsilon(b);
            if eb.is_zero() {
                continue;
            }
            for (hc, v) in &self.h[c] {
                let coeff = k.clone() * ea.clone() * eb.clone() * v.clone();
                add(&mut out, (self.base.clone(), self.base.clone(), hc.clone()), coeff);
            }
        }
        out
    }
}

/// The augmentation `ε: C_0(K_n) -> Q` with `ε∂ = 0` and `ε(base) = 1`,
/// found by walking the 1-skeleton.
fn augmentation(cells: &[Vec<PlanarTree>], base: &PlanarTree) -> BTreeMap<PlanarTree, Q> {
    let mut eps = BTreeMap::from([(base.clone(), Q::one())]);
    if cells.len() < 2 {
        return eps;
    }
    loop {
        let mut grew = false;
        for e in &cells[1] {
            let d: Vec<(PlanarTree, i64)> = e.boundary().iter().map(|(b, c)| (b.clone(), c)).collect();
            let [(u, cu), (w, cw)] = &d[..] else { panic!("an edge of K_n has two endpoints") };
            match (eps.get(u).cloned(), eps.get(w).cloned()) {
                (Some(x), None) => {
                    eps.insert(w.clone(), -x * Q::from_i64(*cu) / Q::from_i64(*cw));
                    grew = true;
                }
                (None, Some(y)) => {
                    eps.insert(u.clone(), -y * Q::from_i64(*cw) / Q::from_i64(*cu));
                    grew = true;
                }
                _ => {}
            }
        }
        if !grew {
            return eps;
        }
    }
}

/// An explicit `x` with `∂x = y` for a cycle `y` of positive degree in
/// `C_*(K_n)^{⊗3}`, or `None` if the check `∂x = y` fails.
pub fn triple_preimage(y: &TripleChain<PlanarTree>) -> Option<QChain<(PlanarTree, PlanarTree, PlanarTree)>> {
    let y = to_rational(y);
    if y.is_empty() {
        return Some(QChain::new());
    }
    let n = y.keys().next().expect("nonempty").0.leaves();
    let x = Contraction::new(n).apply_triple(&y);
    (boundary_q(&x) == y).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::Diagonal;
    use crate::orientation::std_orientation_k;

    #[test]
    fn associahedra_are_acyclic() {
        for n in 2..=6 {
            let mut want = vec![0; n - 1];
            want[0] = 1;
            assert_eq!(betti(n), want, "n={n}");
        }
        assert_eq!(cycle_rank(4, 1), 1);
    }

    #[test]
    fn homotopy_identity() {
        for n in 2..=5 {
            let h = Contraction::new(n);
            for c in k_cells(n) {
                let x = to_rational(&Chain::basis(c.clone()));
                let mut lhs = boundary_q(&h.apply(&x));
                for (b, v) in h.apply(&boundary_q(&x)) {
                    add(&mut lhs, b, v);
                }
                let mut rhs = x.clone();
                if c.dim() == 0 {
                    add(&mut rhs, h.base().clone(), -h.epsilon(&c));
                }
                assert_eq!(lhs, rhs, "{c}");
            }
        }
    }

    #[test]
    fn augmentation_is_xi() {
        for n in 2..=6 {
            let h = Contraction::new(n);
            let xi_base = std_orientation_k(h.base()).unwrap().sign() as i64;
            for v in crate::tree::enumerate_binary(n).unwrap() {
                let xi = std_orientation_k(&v).unwrap().sign() as i64;
                assert_eq!(h.epsilon(&v), Q::from_i64(xi * xi_base), "{v}");
            }
        }
    }

    #[test]
    fn defects_are_boundaries() {
        let mut d = Diagonal::new();
        for n in 2..=4 {
            let defect = d.coassoc_defect(n).unwrap();
            assert!(defect.boundary().is_zero(), "n={n}");
            assert!(triple_preimage(&defect).is_some(), "n={n}");
        }
    }

    /// From arity 5 on the defect is no longer a cycle, since `Δ^su` already
    /// fails co-associativity on the faces `c(4) ∘_i c(2)` and `c(2) ∘_i c(4)`.
    /// It is a boundary relative to its faces: `D(c) - H D(∂c)` bounds.
    #[test]
    fn arity5_defect_is_a_relative_boundary() {
        let mut d = Diagonal::new();
        let c5 = Chain::basis(PlanarTree::corolla(5));
        let defect = d.coassoc_defect_of(&c5);
        let faces = d.coassoc_defect_of(&c5.boundary());
        assert!(!faces.is_zero());
        assert_eq!(defect.boundary(), faces);
        let h = Contraction::new(5);
        let mut y = to_rational(&defect);
        for (k, v) in h.apply_triple(&to_rational(&faces)) {
            add(&mut y, k, -v);
        }
        assert!(boundary_q(&y).is_empty());
        assert_eq!(boundary_q(&h.apply_triple(&y)), y);
    }
}
