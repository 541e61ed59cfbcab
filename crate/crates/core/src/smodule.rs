//! Σ-modules: arity-indexed graded spaces with right symmetric-group actions,
//! stored as the action matrices of adjacent transpositions.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::{BasisElem, GradedSpace};
use crate::linalg::{Matrix, SparseVec};
use crate::perm::Perm;
use crate::report::{Report, Witness};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct SModule {
    field: Field,
    components: Vec<Arc<GradedSpace>>,
    /// `generators[n][i]` is v ↦ v·s_i on component n.
    generators: Vec<Vec<Matrix>>,
}

impl SModule {
    /// Shapes and degrees are checked here; the group relations by [`check_right_action`].
    pub fn new(field: Field, components: Vec<Arc<GradedSpace>>, generators: Vec<Vec<Matrix>>) -> Result<Self> {
        if components.len() != generators.len() {
            return Err(Error::Dimension("one generator list per arity expected".into()));
        }
        for (n, (c, gens)) in components.iter().zip(&generators).enumerate() {
            if c.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
            }
            if gens.len() != n.saturating_sub(1) {
                return Err(Error::Dimension(format!("arity {n} needs {} generators, got {}", n.saturating_sub(1), gens.len())));
            }
            for (i, g) in gens.iter().enumerate() {
                if g.nrows() != c.dim() || g.ncols() != c.dim() {
                    return Err(Error::Dimension(format!("action of s_{} on arity {n} has the wrong shape", i + 1)));
                }
                for j in 0..c.dim() {
                    if g.column(j).iter().any(|(k, _)| c.degree(*k) != c.degree(j)) {
                        return Err(Error::Dimension(format!("action of s_{} on arity {n} changes the degree of {}", i + 1, c.name(j))));
                    }
                }
            }
        }
        Ok(SModule { field, components, generators })
    }

    pub fn trivial(field: Field, components: Vec<Arc<GradedSpace>>) -> Result<Self> {
        let gens = components.iter().enumerate().map(|(n, c)| vec![Matrix::identity(field, c.dim()); n.saturating_sub(1)]).collect();
        SModule::new(field, components, gens)
    }

    /// Builds generator matrices from the action of `s_i` on basis vector `j` of arity `n`.
    pub fn from_basis_action(field: Field, components: Vec<Arc<GradedSpace>>, act: impl Fn(usize, usize, usize) -> SparseVec) -> Result<Self> {
        let gens = components
            .iter()
            .enumerate()
            .map(|(n, c)| (0..n.saturating_sub(1)).map(|i| Matrix::from_columns(field, c.dim(), (0..c.dim()).map(|j| act(n, i, j)).collect())).collect())
            .collect();
        SModule::new(field, components, gens)
    }

    pub fn zero(field: Field, max_arity: usize) -> Self {
        let comps = (0..=max_arity).map(|_| Arc::new(GradedSpace::zero(field))).collect();
        SModule::trivial(field, comps).expect("zero module")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn max_arity(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn component(&self, n: usize) -> &Arc<GradedSpace> {
        &self.components[n]
    }

    pub fn components(&self) -> &[Arc<GradedSpace>] {
        &self.components
    }

    pub fn generator(&self, n: usize, i: usize) -> &Matrix {
        &self.generators[n][i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    /// v·σ in arity `n`.
    pub fn act(&self, n: usize, v: &SparseVec, sigma: &Perm) -> SparseVec {
        assert_eq!(sigma.len().max(1), n.max(1), "permutation size does not match the arity");
        let mut out = v.clone();
        for b in sigma.adjacent_word() {
            out = self.generators[n][b].apply(&out);
        }
        out
    }

    pub fn action_matrix(&self, n: usize, sigma: &Perm) -> Matrix {
        let mut m = Matrix::identity(self.field, self.components[n].dim());
        for b in sigma.adjacent_word() {
            m = self.generators[n][b].compose(&m);
        }
        m
    }

    /// Drops components above `max_arity`.
    pub fn truncate(&self, max_arity: usize) -> SModule {
        let k = (max_arity + 1).min(self.components.len());
        SModule { field: self.field, components: self.components[..k].to_vec(), generators: self.generators[..k].to_vec() }
    }

    /// Componentwise direct sum; the basis of each summand keeps its order and
    /// its names get the summand's tag as a prefix when tags are given.
    pub fn direct_sum(field: Field, parts: &[&SModule], tags: Option<&[String]>) -> Result<SModule> {
        let max = parts.iter().map(|p| p.max_arity()).min().unwrap_or(0);
        let mut comps = Vec::new();
        let mut gens = Vec::new();
        for n in 0..=max {
            let spaces: Vec<&GradedSpace> = parts.iter().map(|p| &**p.component(n)).collect();
            comps.push(Arc::new(direct_sum_spaces(field, &spaces, tags)?));
            let mut gs = Vec::new();
            for i in 0..n.saturating_sub(1) {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.generator(n, i)).collect();
                gs.push(block_diagonal(field, &blocks));
            }
            gens.push(gs);
        }
        SModule::new(field, comps, gens)
    }
}

/// Block-diagonal matrix.
pub fn block_diagonal(field: Field, blocks: &[&Matrix]) -> Matrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut cols = Vec::new();
    let mut off = 0;
    for b in blocks {
        for c in b.columns() {
            cols.push(c.map_indices(|i| i + off));
        }
        off += b.nrows();
    }
    Matrix::from_columns(field, rows, cols)
}

/// ⊕ of graded spaces, with block-diagonal differential and no augmentation.
pub fn direct_sum_spaces(field: Field, parts: &[&GradedSpace], tags: Option<&[String]>) -> Result<GradedSpace> {
    let mut basis = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        for b in p.basis() {
            let name = match tags {
                Some(t) => format!("{}.{}", t[k], b.name),
                None => b.name.clone(),
            };
            basis.push(BasisElem::new(name, b.degree));
        }
    }
    let diffs: Vec<&Matrix> = parts.iter().map(|p| p.differential()).collect();
    GradedSpace::new(field, basis).with_differential(block_diagonal(field, &diffs))
}

fn phrase(n: usize, sigma: &str, tau: &str, x: &str) -> String {
    format!("arity {n}, σ={sigma}, τ={tau}, x={x}")
}

/// Coxeter relations on the generators, commutation with ∂, preservation of ε,
/// plus seeded spot checks of x·(τσ) = (x·τ)·σ on full permutations.
pub fn check_right_action(x: &SModule, seed: u64) -> Report {
    let mut rep = Report::new("right action");
    let f = x.field();
    for n in 0..=x.max_arity() {
        let c = x.component(n);
        let d = c.dim();
        let gens = &x.generators[n];
        let word = |w: &[usize]| {
            let mut m = Matrix::identity(f, d);
            for &b in w {
                m = gens[b].compose(&m);
            }
            m
        };
        let s = |i: usize| Perm::adjacent(n, i).to_string();
        let relation = |rep: &mut Report, lhs: Matrix, rhs: Matrix, sigma: String, tau: String| {
            for j in 0..d {
                rep.record(lhs.column(j) == rhs.column(j), || {
                    Witness::new(phrase(n, &sigma, &tau, c.name(j)), c.render(rhs.column(j)), c.render(lhs.column(j)))
                });
            }
        };
        for i in 0..gens.len() {
            relation(&mut rep, word(&[i, i]), Matrix::identity(f, d), s(i), s(i));
            if i + 1 < gens.len() {
                relation(&mut rep, word(&[i, i + 1, i]), word(&[i + 1, i, i + 1]), format!("{}{}", s(i), s(i + 1)), s(i));
            }
            for k in i + 2..gens.len() {
                relation(&mut rep, word(&[i, k]), word(&[k, i]), s(i), s(k));
            }
            let g = &gens[i];
            relation(&mut rep, c.differential().compose(g), g.compose(c.differential()), s(i), "∂".into());
            if let Some(eps) = c.augmentation() {
                for j in 0..d {
                    let a = eps.dot(g.column(j)).unwrap_or_else(|| f.zero());
                    let b = eps.get(j).cloned().unwrap_or_else(|| f.zero());
                    rep.record(a == b, || Witness::new(phrase(n, &s(i), "ε", c.name(j)), b.to_string(), a.to_string()));
                }
            }
        }
        if n >= 3 && d > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            for _ in 0..4 {
                let (tau, sigma) = (Perm::random(n, &mut rng), Perm::random(n, &mut rng));
                let j = rand::Rng::gen_range(&mut rng, 0..d);
                let v = SparseVec::unit(j, f);
                let lhs = x.act(n, &v, &(&tau * &sigma));
                let rhs = x.act(n, &x.act(n, &v, &tau), &sigma);
                rep.record(lhs == rhs, || Witness::new(phrase(n, &sigma.to_string(), &tau.to_string(), c.name(j)), c.render(&rhs), c.render(&lhs)));
            }
        }
    }
    rep
}

/// Degree-0 map of Σ-modules, one matrix per arity.
#[derive(Clone, Debug, PartialEq)]
pub struct SModuleMap {
    pub source: Arc<SModule>,
    pub target: Arc<SModule>,
    pub maps: Vec<Matrix>,
}

impl SModuleMap {
    pub fn new(source: Arc<SModule>, target: Arc<SModule>, maps: Vec<Matrix>) -> Result<Self> {
        let k = source.max_arity().min(target.max_arity()) + 1;
        if maps.len() != k {
            return Err(Error::Dimension(format!("expected {k} components, got {}", maps.len())));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.ncols() != source.component(n).dim() || m.nrows() != target.component(n).dim() {
                return Err(Error::Dimension(format!("component {n} has the wrong shape")));
            }
        }
        Ok(SModuleMap { source, target, maps })
    }

    pub fn identity(x: Arc<SModule>) -> Self {
        let maps = x.components().iter().map(|c| Matrix::identity(x.field(), c.dim())).collect();
        SModuleMap { source: x.clone(), target: x, maps }
    }

    pub fn zero(source: Arc<SModule>, target: Arc<SModule>) -> Self {
        let k = source.max_arity().min(target.max_arity()) + 1;
        let maps = (0..k).map(|n| Matrix::zero(source.field(), target.component(n).dim(), source.component(n).dim())).collect();
        SModuleMap { source, target, maps }
    }

    /// self ∘ rhs
    pub fn compose(&self, rhs: &SModuleMap) -> Result<SModuleMap> {
        if *rhs.target != *self.source {
            return Err(Error::InvalidMorphism("composition of Σ-module maps with different inner modules".into()));
        }
        let k = self.maps.len().min(rhs.maps.len());
        let maps = (0..k).map(|n| self.maps[n].compose(&rhs.maps[n])).collect();
        SModuleMap::new(rhs.source.clone(), self.target.clone(), maps)
    }

    /// Degree 0, chain map, equivariant on generators, ε-preserving.
    pub fn check(&self) -> Report {
        let mut rep = Report::new("Σ-module map");
        for (n, m) in self.maps.iter().enumerate() {
            let (s, t) = (self.source.component(n), self.target.component(n));
            for j in 0..s.dim() {
                let col = m.column(j);
                rep.record(col.iter().all(|(i, _)| t.degree(*i) == s.degree(j)), || Witness::new(format!("arity {n}, x={}", s.name(j)), "degree 0", t.render(col)));
            }
            let lhs = t.differential().compose(m);
            let rhs = m.compose(s.differential());
            for j in 0..s.dim() {
                rep.record(lhs.column(j) == rhs.column(j), || Witness::new(format!("arity {n}, ∂, x={}", s.name(j)), t.render(rhs.column(j)), t.render(lhs.column(j))));
            }
            for i in 0..n.saturating_sub(1) {
                let lhs = self.target.generator(n, i).compose(m);
                let rhs = m.compose(self.source.generator(n, i));
                for j in 0..s.dim() {
                    rep.record(lhs.column(j) == rhs.column(j), || {
                        Witness::new(format!("arity {n}, σ={}, x={}", Perm::adjacent(n, i), s.name(j)), t.render(rhs.column(j)), t.render(lhs.column(j)))
                    });
                }
            }
            let lin = crate::graded::LinearMap { source: s.clone(), target: t.clone(), degree: 0, matrix: m.clone() };
            rep.record(lin.preserves_augmentation(), || Witness::new(format!("arity {n}, ε"), "ε∘f = ε", "differs"));
        }
        rep
    }
}

/// Regular right action of Σ_n on F[Σ_n]: basis = all permutations in
/// lexicographic order, e_τ·σ = e_{τσ}.
pub fn regular_component(field: Field, n: usize) -> (GradedSpace, Vec<Perm>) {
    let perms = Perm::all(n);
    let basis = perms.iter().map(|p| BasisElem::new(p.to_string(), 0)).collect();
    (GradedSpace::new(field, basis), perms)
}

/// Index of a permutation in `Perm::all(n)` (lexicographic rank).
pub fn perm_rank(p: &Perm) -> usize {
    let n = p.len();
    let mut rank = 0;
    let mut fact = vec![1usize; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k;
    }
    let img = p.images();
    for i in 0..n {
        let smaller = img[i + 1..].iter().filter(|&&x| x < img[i]).count();
        rank += smaller * fact[n - 1 - i];
    }
    rank
}

/// The regular Σ-module F[Σ_n] in every arity up to `max_arity`.
pub fn regular_smodule(field: Field, max_arity: usize) -> SModule {
    let comps: Vec<(GradedSpace, Vec<Perm>)> = (0..=max_arity).map(|n| regular_component(field, n)).collect();
    let spaces = comps.iter().map(|(s, _)| Arc::new(s.clone())).collect();
    SModule::from_basis_action(field, spaces, |n, i, j| {
        let p = &comps[n].1[j] * &Perm::adjacent(n, i);
        SparseVec::unit(perm_rank(&p), field)
    })
    .expect("regular module")
}

/// The smallest sub-Σ-module of `x` containing `spanning[n]` and closed under ∂,
/// with its inclusion. Spanning vectors must be homogeneous.
pub fn generated_submodule(x: &Arc<SModule>, spanning: &[Vec<SparseVec>], prefix: &str) -> Result<(Arc<SModule>, SModuleMap)> {
    let field = x.field;
    let mut comps = Vec::new();
    let mut gens = Vec::new();
    let mut incl = Vec::new();
    for n in 0..=x.max_arity() {
        let space = x.component(n);
        let mut ech = crate::linalg::Echelon::new(field, space.dim());
        let mut queue: Vec<SparseVec> = spanning.get(n).cloned().unwrap_or_default();
        while let Some(v) = queue.pop() {
            if space.degree_of(&v).is_none() && !v.is_zero() {
                return Err(Error::InvalidSpace(format!("{} is not homogeneous", space.render(&v))));
            }
            if ech.insert(v.clone()) {
                queue.push(space.differential().apply(&v));
                queue.extend((0..n.saturating_sub(1)).map(|i| x.generator(n, i).apply(&v)));
            }
        }
        ech.fully_reduce();
        let pivots: Vec<usize> = ech.rows().iter().map(|r| r.max_index().expect("nonzero row")).collect();
        let coords = |w: &SparseVec| SparseVec::from_pairs(pivots.iter().enumerate().filter_map(|(k, &p)| w.get(p).map(|c| (k, c.clone()))));
        let rows = ech.rows();
        let basis = rows.iter().zip(&pivots).enumerate().map(|(k, (_, &p))| BasisElem::new(format!("{prefix}{n}_{k}"), space.degree(p))).collect();
        let d = Matrix::from_columns(field, rows.len(), rows.iter().map(|r| coords(&space.differential().apply(r))).collect());
        comps.push(Arc::new(GradedSpace::new(field, basis).with_differential(d)?));
        gens.push((0..n.saturating_sub(1)).map(|i| Matrix::from_columns(field, rows.len(), rows.iter().map(|r| coords(&x.generator(n, i).apply(r))).collect())).collect());
        incl.push(Matrix::from_columns(field, space.dim(), rows.to_vec()));
    }
    let sub = Arc::new(SModule::new(field, comps, gens)?);
    let map = SModuleMap::new(sub.clone(), x.clone(), incl)?;
    Ok((sub, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::F101
    }

    #[test]
    fn trivial_action_on_the_field_passes() {
        let comps = (0..5).map(|_| Arc::new(GradedSpace::from_degrees(f(), "a", &[0]))).collect();
        let x = SModule::trivial(f(), comps).unwrap();
        assert!(check_right_action(&x, 0).passed);
    }

    #[test]
    fn regular_action_passes_and_is_regular() {
        let x = regular_smodule(f(), 4);
        let r = check_right_action(&x, 0);
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(x.dims(), vec![1, 1, 2, 6, 24]);
        for (k, p) in Perm::all(3).iter().enumerate() {
            assert_eq!(perm_rank(p), k);
            // e_id · σ = e_σ
            assert_eq!(x.act(3, &SparseVec::unit(0, f()), p), SparseVec::unit(k, f()));
        }
    }

    #[test]
    fn non_involution_is_caught() {
        let comps = (0..3).map(|_| Arc::new(GradedSpace::from_degrees(f(), "a", &[0]))).collect::<Vec<_>>();
        let mut gens: Vec<Vec<Matrix>> = vec![vec![], vec![], vec![Matrix::identity(f(), 1).scale(&f().from_i64(2))]];
        let x = SModule::new(f(), comps.clone(), gens.clone()).unwrap();
        let r = check_right_action(&x, 0);
        assert!(!r.passed);
        assert!(r.first_failure().unwrap().at.contains("arity 2"));
        gens[2][0] = Matrix::identity(f(), 1).scale(&f().from_i64(-1));
        assert!(check_right_action(&SModule::new(f(), comps, gens).unwrap(), 0).passed);
    }

    #[test]
    fn action_matrix_is_a_right_action() {
        let x = regular_smodule(f(), 4);
        for t in Perm::all(4).iter().step_by(5) {
            for s in Perm::all(4).iter().step_by(7) {
                assert_eq!(x.action_matrix(4, &(t * s)), x.action_matrix(4, s).compose(&x.action_matrix(4, t)));
            }
        }
    }

    #[test]
    fn direct_sum_and_maps() {
        let a = Arc::new(regular_smodule(f(), 3));
        let b = Arc::new(SModule::trivial(f(), (0..4).map(|_| Arc::new(GradedSpace::from_degrees(f(), "t", &[0]))).collect()).unwrap());
        let s = SModule::direct_sum(f(), &[&a, &b], Some(&["a".into(), "b".into()])).unwrap();
        assert_eq!(s.dims(), vec![2, 2, 3, 7]);
        assert!(check_right_action(&s, 3).passed);
        assert_eq!(s.component(2).name(2), "b.t0");
        // augmentation F[Σ_n] → F is equivariant; the inclusion F → F[Σ_n] of e_id is not
        let aug = (0..4).map(|n| Matrix::from_columns(f(), 1, vec![SparseVec::unit(0, f()); a.component(n).dim()])).collect();
        assert!(SModuleMap::new(a.clone(), b.clone(), aug).unwrap().check().passed);
        let inc = (0..4).map(|n| Matrix::from_columns(f(), a.component(n).dim(), vec![SparseVec::unit(0, f())])).collect();
        assert!(!SModuleMap::new(b.clone(), a.clone(), inc).unwrap().check().passed);
        assert!(SModuleMap::identity(a.clone()).compose(&SModuleMap::zero(b.clone(), a.clone())).unwrap().check().passed);
    }
}
