//! Exhaustive search for a co-associative diagonal on `C_*(K)` through
//! arity 4.
//!
//! A diagonal is an operad map `Δ: C_*(K) -> C_*(K) ⊗ C_*(K)`, so it is
//! determined by its values on corollas; `Δ(c(2)) = c(2) ⊗ c(2)` is forced.
//! In arity 3 the unknowns are `a, b, c, d` in
//! `Δ(c(3)) = (a·min(3) + b·max(3)) ⊗ c(3) + c(3) ⊗ (c·min(3) + d·max(3))`
//! (binary trees in ξ-shorthand). In arity 4, `Δ(c(4))` is a fixed particular
//! value plus 35 unknowns, one per basis element of `(C ⊗ C)_2(K_4)`. The
//! equations are the chain-map condition `∂Δ(c(n)) = Δ(∂c(n))` and
//! co-associativity at `c(n)`, generated from the chain machinery and
//! solved by [`crate::linalg::eliminate`].

use crate::chain::{compose_k_cells, k_cells, Basis, Chain, KChain, TensorChain};
use crate::diagonal::{compose_tensor, flip, Diagonal};
use crate::linalg::{eliminate, solve_linear, verify, Field, Outcome, Poly, SolveError, Trace, Var, Verdict, VerifyError};
use crate::orientation::std_orientation_k;
use crate::tree::raw::Raw;
use crate::tree::PlanarTree;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::Zero;

type Pair = (PlanarTree, PlanarTree);
type PolyTensor<F> = BTreeMap<Pair, Poly<F>>;
type PolyTriple<F> = BTreeMap<(PlanarTree, PlanarTree, PlanarTree), Poly<F>>;

fn add_poly<K: Ord, F: Field>(map: &mut BTreeMap<K, Poly<F>>, key: K, p: &Poly<F>, k: i64) {
    let slot = map.entry(key).or_default();
    slot.add_scaled(p, &F::from_i64(k));
}

fn xi(t: &PlanarTree) -> i64 {
    if t.is_binary() {
        std_orientation_k(t).expect("binary").sign() as i64
    } else {
        1
    }
}

/// `Δ` on any cell of arity `≤ n`, extended from its values on corollas by
/// `Δ(a ∘_i b) = Δ(a) ∘_i Δ(b)`.
pub fn operadic_extension(t: &PlanarTree, gens: &BTreeMap<usize, TensorChain<PlanarTree>>) -> TensorChain<PlanarTree> {
    if t.is_corolla() {
        return gens[&t.leaves()].clone();
    }
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
    let (c, sign) = compose_k_cells(&outer, i, &PlanarTree::corolla(s)).expect("leaf index in range");
    debug_assert_eq!(&c, t);
    compose_tensor(&operadic_extension(&outer, gens), i, &gens[&s], compose_k_cells)
        .expect("leaf index in range")
        .scaled(sign as i64)
}

/// Which co-associative arity-3 solution the arity-4 search extends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// `(a, b, c, d) = (1, 0, 0, 1)`, the Saneblidze-Umble value.
    Su,
    /// `(a, b, c, d) = (0, 1, 1, 0)`, its flip.
    Flip,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Su, Branch::Flip];

    pub fn name(self) -> &'static str {
        match self {
            Branch::Su => "su",
            Branch::Flip => "flip",
        }
    }

    pub fn abcd(self) -> [i64; 4] {
        match self {
            Branch::Su => [1, 0, 0, 1],
            Branch::Flip => [0, 1, 1, 0],
        }
    }
}

/// Where an equation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Component of `∂Δ(c(n)) - Δ(∂c(n))` at a basis tensor.
    ChainMap(String),
    /// Component of `(Δ ⊗ 1)Δ(c(n)) - (1 ⊗ Δ)Δ(c(n))` at a basis triple.
    Coassoc(String),
}

impl Origin {
    pub fn describe(&self) -> String {
        match self {
            Origin::ChainMap(k) => format!("chain-map at {k}"),
            Origin::Coassoc(k) => format!("coassoc at {k}"),
        }
    }
}

/// The constraint system for `Δ(c(n))`, `n ∈ {3, 4}`.
#[derive(Clone, Debug)]
pub struct System<F: Field> {
    pub arity: usize,
    /// Unknown `j` multiplies `basis[j]` (a chain, ξ-shorthand in arity 3).
    pub names: Vec<String>,
    pub basis: Vec<TensorChain<PlanarTree>>,
    /// The value of `Δ(c(n))` at all unknowns zero.
    pub base: TensorChain<PlanarTree>,
    pub equations: Vec<Poly<F>>,
    pub origins: Vec<Origin>,
}

impl<F: Field> System<F> {
    pub fn name(&self, v: Var) -> String {
        self.names[v as usize].clone()
    }

    /// Equations `[0, chain_len)` are the chain-map equations.
    pub fn chain_len(&self) -> usize {
        self.origins.iter().take_while(|o| matches!(o, Origin::ChainMap(_))).count()
    }

    pub fn chain_equations(&self) -> &[Poly<F>] {
        &self.equations[..self.chain_len()]
    }

    pub fn coassoc_equations(&self) -> &[Poly<F>] {
        &self.equations[self.chain_len()..]
    }

    /// `Δ(c(n))` at the given values of the unknowns.
    pub fn value(&self, x: &[i64]) -> TensorChain<PlanarTree> {
        let mut out = self.base.clone();
        for (b, k) in self.basis.iter().zip(x) {
            out.add_scaled(b, *k);
        }
        out
    }

    /// Every equation evaluated at integer values of the unknowns.
    pub fn residuals(&self, x: &[i64]) -> Vec<F> {
        let point: Vec<Poly<F>> = x.iter().map(|k| Poly::constant(F::from_i64(*k))).collect();
        self.equations
            .iter()
            .map(|e| {
                let mut r = e.clone();
                for (v, p) in point.iter().enumerate() {
                    r = r.subst(v as Var, p);
                }
                r.constant_term()
            })
            .collect()
    }
}

/// Builds the equations for `Δ(c(n)) = base + Σ x_j basis_j`, with `Δ` on
/// smaller corollas given by `gens`.
fn build<F: Field>(
    n: usize,
    gens: &BTreeMap<usize, TensorChain<PlanarTree>>,
    base: TensorChain<PlanarTree>,
    basis: Vec<TensorChain<PlanarTree>>,
    names: Vec<String>,
) -> System<F> {
    let top = PlanarTree::corolla(n);
    let mut lower: BTreeMap<PlanarTree, TensorChain<PlanarTree>> = BTreeMap::new();
    for c in k_cells(n).into_iter().filter(|c| c != &top) {
        let v = operadic_extension(&c, gens);
        lower.insert(c, v);
    }
    let mut unknown: PolyTensor<F> = BTreeMap::new();
    for (k, c) in base.iter() {
        add_poly(&mut unknown, k.clone(), &Poly::constant(F::one()), c);
    }
    for (j, b) in basis.iter().enumerate() {
        for (k, c) in b.iter() {
            add_poly(&mut unknown, k.clone(), &Poly::var(j as Var), c);
        }
    }
    unknown.retain(|_, p| !p.is_zero());
    let delta = |c: &PlanarTree| -> PolyTensor<F> {
        if c == &top {
            return unknown.clone();
        }
        lower[c].iter().map(|(k, v)| (k.clone(), Poly::constant(F::from_i64(v)))).collect()
    };

    // ∂Δ(c(n)) - Δ(∂c(n)), with the Koszul tensor differential
    let mut chain: PolyTensor<F> = BTreeMap::new();
    for (k, p) in &unknown {
        for (kk, w) in Chain::basis(k.clone()).boundary().iter() {
            add_poly(&mut chain, kk.clone(), p, w);
        }
    }
    let d_top: KChain = Chain::basis(top.clone()).boundary();
    for (s, v) in d_top.iter() {
        for (k, w) in lower[s].iter() {
            add_poly(&mut chain, k.clone(), &Poly::constant(F::one()), -v * w);
        }
    }

    let mut co: PolyTriple<F> = BTreeMap::new();
    for ((a, b), p) in &unknown {
        for ((x, y), q) in delta(a) {
            add_poly(&mut co, (x, y, b.clone()), &p.mul(&q), 1);
        }
        for ((x, y), q) in delta(b) {
            add_poly(&mut co, (a.clone(), x, y), &p.mul(&q), -1);
        }
    }

    let mut equations = Vec::new();
    let mut origins = Vec::new();
    for (k, p) in chain.into_iter().filter(|(_, p)| !p.is_zero()) {
        origins.push(Origin::ChainMap(k.sort_key()));
        equations.push(p);
    }
    for (k, p) in co.into_iter().filter(|(_, p)| !p.is_zero()) {
        origins.push(Origin::Coassoc(k.sort_key()));
        equations.push(p);
    }
    System { arity: n, names, basis, base, equations, origins }
}

fn c2_gens() -> BTreeMap<usize, TensorChain<PlanarTree>> {
    let c2 = PlanarTree::corolla(2);
    BTreeMap::from([(2, Chain::basis((c2.clone(), c2)))])
}

/// The arity-3 system in the unknowns `a, b, c, d`.
pub fn arity3_system<F: Field>() -> System<F> {
    let (c3, min, max) = (PlanarTree::corolla(3), PlanarTree::min(3), PlanarTree::max(3));
    let basis = vec![
        Chain::term((min.clone(), c3.clone()), xi(&min)),
        Chain::term((max.clone(), c3.clone()), xi(&max)),
        Chain::term((c3.clone(), min.clone()), xi(&min)),
        Chain::term((c3.clone(), max.clone()), xi(&max)),
    ];
    let names = ["a", "b", "c", "d"].iter().map(|s| String::from(*s)).collect();
    build(3, &c2_gens(), Chain::zero(3), basis, names)
}

/// `Δ(c(3))` on the given branch.
pub fn branch_value(branch: Branch) -> TensorChain<PlanarTree> {
    arity3_system::<BigRational>().value(&branch.abcd())
}

/// The generators `Δ(c(2))`, `Δ(c(3))` of a branch.
pub fn branch_gens(branch: Branch) -> BTreeMap<usize, TensorChain<PlanarTree>> {
    let mut g = c2_gens();
    g.insert(3, branch_value(branch));
    g
}

/// Basis of `(C ⊗ C)_2(K_4)`: `c(4) ⊗ v`, `v ⊗ c(4)` for vertices `v`, then
/// `e ⊗ e'` for edges `e, e'`.
pub fn arity4_basis() -> Vec<Pair> {
    let c4 = PlanarTree::corolla(4);
    let cells = k_cells(4);
    let of_dim = |d: usize| cells.iter().filter(move |c| c.dim() == d).cloned().collect::<Vec<_>>();
    let (vertices, edges) = (of_dim(0), of_dim(1));
    let mut out = Vec::new();
    out.extend(vertices.iter().map(|v| (c4.clone(), v.clone())));
    out.extend(vertices.iter().map(|v| (v.clone(), c4.clone())));
    for a in &edges {
        out.extend(edges.iter().map(|b| (a.clone(), b.clone())));
    }
    out
}

/// The arity-4 system: `Δ(c(4)) = D + δ`, where `D` is `Δ^su(c(4))` on the
/// `Su` branch and its flip on the `Flip` branch, and `δ` has 35 unknowns.
pub fn arity4_system<F: Field>(branch: Branch) -> System<F> {
    let basis4 = arity4_basis();
    let names = (0..basis4.len()).map(|j| format!("x{j}")).collect();
    let basis = basis4.into_iter().map(Chain::basis).collect();
    let su = Diagonal::new().su_cell(&PlanarTree::corolla(4));
    let base = match branch {
        Branch::Su => su,
        Branch::Flip => flip(&su),
    };
    build(4, &branch_gens(branch), base, basis, names)
}

/// All solutions `(a, b, c, d)` of the arity-3 system over the rationals.
pub fn solve_arity3() -> Result<Vec<[BigRational; 4]>, SolveError> {
    let sys = arity3_system::<BigRational>();
    let trace = eliminate(&sys.equations)?;
    let verdict = verify(&sys.equations, &trace).expect("solver output replays");
    let mut out = Vec::new();
    for s in verdict.solutions {
        let value = |v: Var| s.get(&v).map_or_else(BigRational::zero, |p| p.constant_term());
        debug_assert!(s.values().all(|p| p.degree() == 0));
        out.push([value(0), value(1), value(2), value(3)]);
    }
    out.sort();
    Ok(out)
}

/// An infeasibility certificate for one branch: the pivot trace of the
/// arity-4 system, replayable against freshly generated equations.
#[derive(Clone, Debug)]
pub struct Certificate<F: Field> {
    pub branch: Branch,
    pub system: System<F>,
    pub trace: Trace<F>,
}

impl<F: Field> Certificate<F> {
    /// Regenerates the equations and replays the trace against them.
    pub fn check(&self) -> Result<Verdict<F>, VerifyError> {
        let fresh = arity4_system::<F>(self.branch);
        verify(&fresh.equations, &self.trace)
    }

    /// Human-readable certificate.
    pub fn render(&self) -> String {
        let mut out = format!(
            "branch {}: {} unknowns, {} chain-map and {} coassociativity equations\n",
            self.branch.name(),
            self.system.names.len(),
            self.system.chain_len(),
            self.system.equations.len() - self.system.chain_len()
        );
        out.push_str(&self.trace.render(&|v| self.system.name(v)));
        out
    }

    /// Equation indices used by the trace, in order of first use.
    pub fn equations_used(&self) -> Vec<usize> {
        let mut used = Vec::new();
        collect_used(&self.trace, &mut used);
        used
    }
}

fn collect_used<F: Field>(t: &Trace<F>, used: &mut Vec<usize>) {
    let mut push = |i: usize| {
        if !used.contains(&i) {
            used.push(i);
        }
    };
    for p in &t.pivots {
        push(p.equation);
    }
    match &t.outcome {
        Outcome::Contradiction { equation } => push(*equation),
        Outcome::Solved => {}
        Outcome::Split { equation, cases } => {
            push(*equation);
            for c in cases {
                collect_used(&c.trace, used);
            }
        }
    }
}

/// Runs the arity-4 search on a branch over the field `F`.
pub fn search_arity4<F: Field>(branch: Branch) -> Result<(Certificate<F>, Verdict<F>), SolveError> {
    let system = arity4_system::<F>(branch);
    let trace = eliminate(&system.equations)?;
    let verdict = verify(&system.equations, &trace).expect("solver output replays");
    Ok((Certificate { branch, system, trace }, verdict))
}

/// Facts established on the way to the arity-4 contradiction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arity4Facts {
    pub ansatz_dim: usize,
    /// `dim ker(∂: C_1(K_4) -> C_0(K_4))`.
    pub cycle_rank: usize,
    /// The chain-map equations vanish at `δ = 0`.
    pub chain_map_feasible_at_zero: bool,
    /// Dimension of the solution space of the chain-map equations alone.
    pub chain_map_solution_dim: usize,
    /// With the `c(4) ⊗ v` and `v ⊗ c(4)` unknowns set to zero, the chain-map
    /// solutions are `D + α·(∂c(4) ⊗ ∂c(4))`.
    pub bidegree11_family_is_alpha_line: bool,
    /// Co-associativity has no solution on that line.
    pub alpha_line_infeasible: bool,
    /// Solutions of the co-associativity components whose first factor is
    /// `c(4)`, taken alone.
    pub c4_first_solutions: usize,
}

/// Computes [`Arity4Facts`] for a branch over the rationals.
pub fn arity4_facts(branch: Branch) -> Result<Arity4Facts, SolveError> {
    type Q = BigRational;
    let sys = arity4_system::<Q>(branch);
    let nvars = sys.names.len();
    let chain = sys.chain_equations();
    let dense = |eqs: &[Poly<Q>]| -> (Vec<Vec<Q>>, Vec<Q>) {
        let rows = eqs.iter().map(|e| (0..nvars).map(|v| e.coeff(&[v as Var])).collect()).collect();
        let rhs = eqs.iter().map(|e| -e.constant_term()).collect();
        (rows, rhs)
    };
    let zeros = vec![0i64; nvars];
    let chain_map_feasible_at_zero = sys.residuals(&zeros)[..chain.len()].iter().all(Zero::is_zero);
    let (rows, rhs) = dense(chain);
    let full = solve_linear(&rows, &rhs, nvars);
    let chain_map_solution_dim = full.as_ref().map_or(0, |s| s.kernel.len());

    // A = B = 0: the first 10 unknowns vanish
    let blocks = 10;
    let mut rows_ab = rows.clone();
    let mut rhs_ab = rhs.clone();
    for j in 0..blocks {
        let mut r = vec![Q::zero(); nvars];
        r[j] = Q::from_i64(1);
        rows_ab.push(r);
        rhs_ab.push(Q::zero());
    }
    let line = solve_linear(&rows_ab, &rhs_ab, nvars);
    let dd = Chain::basis(PlanarTree::corolla(4)).boundary();
    let direction: Vec<Q> = arity4_basis()
        .iter()
        .map(|(a, b)| Q::from_i64(dd.coeff(a) * dd.coeff(b)))
        .collect();
    let bidegree11_family_is_alpha_line = line.as_ref().is_some_and(|s| {
        s.particular.iter().all(Zero::is_zero) && s.kernel.len() == 1 && proportional(&s.kernel[0], &direction)
    });

    // restrict the coassociativity equations to δ = α·(∂c(4) ⊗ ∂c(4))
    let alpha = Poly::var(0);
    let on_line: Vec<Poly<Q>> = sys
        .equations
        .iter()
        .map(|e| {
            let mut r = e.clone();
            for (j, k) in direction.iter().enumerate().rev() {
                r = r.subst(j as Var, &alpha.scaled(k));
            }
            r
        })
        .collect();
    let alpha_line_infeasible = verify(&on_line, &eliminate(&on_line)?).expect("replays").infeasible();

    let c4 = PlanarTree::corolla(4).literal();
    let chain_len = sys.chain_len();
    let c4_first: Vec<Poly<Q>> = sys.equations[chain_len..]
        .iter()
        .zip(&sys.origins[chain_len..])
        .filter(|(_, o)| matches!(o, Origin::Coassoc(k) if k.starts_with(&format!("{c4} "))))
        .map(|(e, _)| e.clone())
        .collect();
    let c4_first_solutions = verify(&c4_first, &eliminate(&c4_first)?).expect("replays").solutions.len();

    Ok(Arity4Facts {
        ansatz_dim: nvars,
        cycle_rank: crate::homology::cycle_rank(4, 1),
        chain_map_feasible_at_zero,
        chain_map_solution_dim,
        bidegree11_family_is_alpha_line,
        alpha_line_infeasible,
        c4_first_solutions,
    })
}

fn proportional(a: &[BigRational], b: &[BigRational]) -> bool {
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Zero::is_zero);
    };
    if a[i].is_zero() {
        return false;
    }
    let k = a[i].clone() / b[i].clone();
    a.iter().zip(b).all(|(x, y)| *x == k.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Fp;

    type Q = BigRational;
    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    #[test]
    fn arity3_has_two_solutions() {
        let sols = solve_arity3().unwrap();
        assert_eq!(sols, [[q(0), q(1), q(1), q(0)], [q(1), q(0), q(0), q(1)]]);
        let su = Diagonal::new().su_cell(&PlanarTree::corolla(3));
        assert_eq!(branch_value(Branch::Su), su);
        assert_eq!(branch_value(Branch::Flip), flip(&su));
    }

    #[test]
    fn arity3_equations_match_scalar_system() {
        // a + c = 1, b + d = 1, a = d, b = c, idempotents, ab = cd = 0
        let sys = arity3_system::<Q>();
        for a in 0..=1 {
            for b in 0..=1 {
                for c in 0..=1 {
                    for d in 0..=1 {
                        let scalar = a + c == 1 && b + d == 1 && a == d && b == c && a * b == 0 && c * d == 0;
                        let ok = sys.residuals(&[a, b, c, d]).iter().all(Zero::is_zero);
                        assert_eq!(ok, scalar, "{a}{b}{c}{d}");
                    }
                }
            }
        }
    }

    #[test]
    fn extension_reproduces_branches() {
        let mut d = Diagonal::new();
        for branch in Branch::ALL {
            let gens = branch_gens(branch);
            for c in k_cells(4).into_iter().filter(|c| !c.is_corolla()) {
                let su = d.su_cell(&c);
                let want = if branch == Branch::Su { su } else { flip(&su) };
                assert_eq!(operadic_extension(&c, &gens), want, "{c}");
            }
        }
    }

    #[test]
    fn ansatz_is_35_dimensional() {
        let basis = arity4_basis();
        assert_eq!(basis.len(), 35);
        assert!(basis.iter().all(|(a, b)| a.dim() + b.dim() == 2));
        let total: usize = (0..=2)
            .map(|i| {
                let count = |d| k_cells(4).iter().filter(|c| c.dim() == d).count();
                count(i) * count(2 - i)
            })
            .sum();
        assert_eq!(total, 35);
    }

    #[test]
    fn su_residuals() {
        let sys = arity4_system::<Q>(Branch::Su);
        let r = sys.residuals(&[0; 35]);
        let chain = sys.chain_len();
        assert!(r[..chain].iter().all(Zero::is_zero));
        // the coassociativity residuals are exactly the defect
        let defect = Diagonal::new().coassoc_defect(4).unwrap();
        let nonzero: Vec<(String, Q)> = sys.origins[chain..]
            .iter()
            .zip(&r[chain..])
            .filter(|(_, v)| !v.is_zero())
            .map(|(o, v)| match o {
                Origin::Coassoc(k) => (k.clone(), v.clone()),
                Origin::ChainMap(_) => unreachable!(),
            })
            .collect();
        let expected: Vec<(String, Q)> = defect.sorted_terms().into_iter().map(|(k, c)| (k.sort_key(), q(c))).collect();
        let mut nonzero = nonzero;
        nonzero.sort_by(|a, b| a.0.cmp(&b.0));
        let mut expected = expected;
        expected.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(nonzero, expected);
    }

    #[test]
    fn arity4_is_infeasible_on_both_branches() {
        for branch in Branch::ALL {
            let (cert, verdict) = search_arity4::<Q>(branch).unwrap();
            assert!(verdict.infeasible(), "{branch:?}");
            assert!(cert.check().unwrap().infeasible());
            assert!(!cert.equations_used().is_empty());
        }
    }

    #[test]
    fn arity4_facts_on_both_branches() {
        for branch in Branch::ALL {
            let f = arity4_facts(branch).unwrap();
            assert_eq!(f.ansatz_dim, 35);
            assert_eq!(f.cycle_rank, 1);
            assert!(f.chain_map_feasible_at_zero);
            assert!(f.bidegree11_family_is_alpha_line);
            assert!(f.alpha_line_infeasible);
            assert_eq!(f.c4_first_solutions, 6, "{branch:?}");
        }
    }

    #[test]
    fn characteristic_two_runs() {
        for branch in Branch::ALL {
            let (cert, verdict) = search_arity4::<Fp<2>>(branch).unwrap();
            assert_eq!(cert.check().unwrap(), verdict);
        }
    }
}
