//! Finite-dimensional graded spaces with differential and optional
//! (co)augmentation, linear maps, tensor products, hom-spaces and quotients.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisElem {
    pub name: String,
    pub degree: i32,
}

impl BasisElem {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        BasisElem { name: name.into(), degree }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedSpace {
    field: Field,
    basis: Vec<BasisElem>,
    diff: Matrix,
    /// ε as a covector: the coefficient at `j` is ε(e_j).
    aug: Option<SparseVec>,
    /// η(1).
    coaug: Option<SparseVec>,
}

impl GradedSpace {
    /// Keeps the basis in the given order; zero differential, no augmentation.
    pub fn new(field: Field, basis: Vec<BasisElem>) -> Self {
        let n = basis.len();
        GradedSpace { field, basis, diff: Matrix::zero(field, n, n), aug: None, coaug: None }
    }

    /// Sorts the basis by (degree, name).
    pub fn named(field: Field, mut basis: Vec<BasisElem>) -> Self {
        basis.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        GradedSpace::new(field, basis)
    }

    /// Basis `{prefix}{k}` with the listed degrees, in the given order.
    pub fn from_degrees(field: Field, prefix: &str, degrees: &[i32]) -> Self {
        GradedSpace::new(field, degrees.iter().enumerate().map(|(k, &d)| BasisElem::new(format!("{prefix}{k}"), d)).collect())
    }

    pub fn zero(field: Field) -> Self {
        GradedSpace::new(field, Vec::new())
    }

    /// The ground field in degree 0, with ε = η = identity.
    pub fn unit(field: Field) -> Self {
        let mut s = GradedSpace::new(field, vec![BasisElem::new("1", 0)]);
        s.aug = Some(SparseVec::unit(0, field));
        s.coaug = Some(SparseVec::unit(0, field));
        s
    }

    pub fn with_differential(mut self, diff: Matrix) -> Result<Self> {
        if diff.nrows() != self.dim() || diff.ncols() != self.dim() {
            return Err(Error::Dimension(format!("differential is {}x{} on a {}-dim space", diff.nrows(), diff.ncols(), self.dim())));
        }
        self.diff = diff;
        self.validate()?;
        Ok(self)
    }

    pub fn with_augmentation(mut self, eps: SparseVec, eta: SparseVec) -> Result<Self> {
        self.aug = Some(eps);
        self.coaug = Some(eta);
        self.validate()?;
        Ok(self)
    }

    pub fn without_augmentation(mut self) -> Self {
        self.aug = None;
        self.coaug = None;
        self
    }

    /// Checks ∂∘∂ = 0, |∂| = -1, and the (co)augmentation identities.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            let dj = self.diff.column(j);
            if let Some((i, _)) = dj.iter().find(|(i, _)| self.basis[*i].degree != self.basis[j].degree - 1) {
                return Err(Error::InvalidSpace(format!("∂({}) has a component on {} of the wrong degree", self.basis[j].name, self.basis[*i].name)));
            }
            if !self.diff.apply(dj).is_zero() {
                return Err(Error::InvalidSpace(format!("∂∘∂ ≠ 0 on {}", self.basis[j].name)));
            }
        }
        if let Some(eps) = &self.aug {
            if let Some((i, _)) = eps.iter().find(|(i, _)| *i >= n || self.basis[*i].degree != 0) {
                return Err(Error::InvalidSpace(format!("augmentation nonzero off degree 0 (index {i})")));
            }
            for j in 0..n {
                if eps.dot(self.diff.column(j)).is_some_and(|c| !c.is_zero()) {
                    return Err(Error::InvalidSpace(format!("ε∘∂ ≠ 0 on {}", self.basis[j].name)));
                }
            }
        }
        if let Some(eta) = &self.coaug {
            if eta.iter().any(|(i, _)| *i >= n || self.basis[*i].degree != 0) {
                return Err(Error::InvalidSpace("coaugmentation not in degree 0".into()));
            }
            if !self.diff.apply(eta).is_zero() {
                return Err(Error::InvalidSpace("∂∘η ≠ 0".into()));
            }
        }
        if let (Some(eps), Some(eta)) = (&self.aug, &self.coaug) {
            let v = eps.dot(eta).unwrap_or_else(|| self.field.zero());
            if !v.is_one() {
                return Err(Error::InvalidSpace(format!("ε∘η = {v}, expected 1")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn differential(&self) -> &Matrix {
        &self.diff
    }

    pub fn augmentation(&self) -> Option<&SparseVec> {
        self.aug.as_ref()
    }

    pub fn coaugmentation(&self) -> Option<&SparseVec> {
        self.coaug.as_ref()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    pub fn homogeneous_parts(&self, v: &SparseVec) -> BTreeMap<i32, SparseVec> {
        let mut parts: BTreeMap<i32, Vec<_>> = BTreeMap::new();
        for (i, c) in v.iter() {
            parts.entry(self.basis[*i].degree).or_default().push((*i, c.clone()));
        }
        parts.into_iter().map(|(d, e)| (d, SparseVec::from_pairs(e))).collect()
    }

    pub fn degree_of(&self, v: &SparseVec) -> Option<i32> {
        let mut it = v.iter().map(|(i, _)| self.basis[*i].degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Renders a vector as `c*name + ...`.
    pub fn render(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = v
            .iter()
            .map(|(i, c)| if c.is_one() { self.basis[*i].name.clone() } else { format!("{c}*{}", self.basis[*i].name) })
            .collect();
        parts.join(" + ")
    }
}

fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Homogeneous linear map between graded spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub degree: i32,
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i32, matrix: Matrix) -> Result<Self> {
        if source.field() != target.field() || matrix.field() != source.field() {
            return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
        }
        if matrix.ncols() != source.dim() || matrix.nrows() != target.dim() {
            return Err(Error::Dimension(format!("matrix {}x{} for a map {} -> {}", matrix.nrows(), matrix.ncols(), source.dim(), target.dim())));
        }
        for j in 0..source.dim() {
            if let Some((i, _)) = matrix.column(j).iter().find(|(i, _)| target.degree(*i) != source.degree(j) + degree) {
                return Err(Error::Dimension(format!(
                    "{} (degree {}) maps onto {} (degree {}) under a degree-{degree} map",
                    source.name(j),
                    source.degree(j),
                    target.name(*i),
                    target.degree(*i)
                )));
            }
        }
        Ok(LinearMap { source, target, degree, matrix })
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let m = Matrix::identity(space.field(), space.dim());
        LinearMap { source: space.clone(), target: space, degree: 0, matrix: m }
    }

    /// self ∘ rhs
    pub fn compose(&self, rhs: &LinearMap) -> Result<LinearMap> {
        if !same_space(&rhs.target, &self.source) {
            return Err(Error::Dimension("composition of maps with different inner spaces".into()));
        }
        Ok(LinearMap { source: rhs.source.clone(), target: self.target.clone(), degree: self.degree + rhs.degree, matrix: self.matrix.compose(&rhs.matrix) })
    }

    /// ∂∘f = (-1)^{|f|} f∘∂
    pub fn is_chain_map(&self) -> bool {
        let lhs = self.target.differential().compose(&self.matrix);
        let rhs = self.matrix.compose(self.source.differential()).scale(&self.source.field().sign(self.degree as i64));
        lhs == rhs
    }

    /// ε_T∘f = ε_S, when both sides carry an augmentation.
    pub fn preserves_augmentation(&self) -> bool {
        match (self.source.augmentation(), self.target.augmentation()) {
            (Some(es), Some(et)) => (0..self.source.dim()).all(|j| {
                let a = et.dot(self.matrix.column(j)).unwrap_or_else(|| self.source.field().zero());
                let b = es.get(j).cloned().unwrap_or_else(|| self.source.field().zero());
                a == b
            }),
            _ => true,
        }
    }
}

/// Basis index of a tuple in a lexicographic (mixed-radix) tensor basis.
pub fn tensor_index(dims: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i)
}

/// Inverse of [`tensor_index`].
pub fn tensor_digits(dims: &[usize], mut k: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        out[p] = k % dims[p];
        k /= dims[p];
    }
    out
}

/// A ⊗ B with lexicographic basis (a, b) ↦ a·dim B + b.
pub fn tensor_space(a: &GradedSpace, b: &GradedSpace) -> Result<GradedSpace> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    let f = a.field();
    let (da, db) = (a.dim(), b.dim());
    let basis = (0..da)
        .flat_map(|i| (0..db).map(move |j| (i, j)))
        .map(|(i, j)| BasisElem::new(format!("{}⊗{}", a.name(i), b.name(j)), a.degree(i) + b.degree(j)))
        .collect();
    let cols = (0..da)
        .flat_map(|i| (0..db).map(move |j| (i, j)))
        .map(|(i, j)| {
            let left = a.differential().column(i).iter().map(|(k, c)| (k * db + j, c.clone()));
            let s = f.sign(a.degree(i) as i64);
            let right = b.differential().column(j).iter().map(|(k, c)| (i * db + k, c * &s)).collect::<Vec<_>>();
            SparseVec::from_pairs(left.chain(right))
        })
        .collect();
    let mut out = GradedSpace::new(f, basis);
    out.diff = Matrix::from_columns(f, da * db, cols);
    let kron = |x: &SparseVec, y: &SparseVec| SparseVec::from_pairs(x.iter().flat_map(|(i, c)| y.iter().map(move |(j, d)| (i * db + j, c * d))));
    if let (Some(ea), Some(eb)) = (a.augmentation(), b.augmentation()) {
        out.aug = Some(kron(ea, eb));
    }
    if let (Some(ha), Some(hb)) = (a.coaugmentation(), b.coaugmentation()) {
        out.coaug = Some(kron(ha, hb));
    }
    Ok(out)
}

/// Left-nested tensor product of a list; the empty product is the ground field.
pub fn tensor_spaces(spaces: &[&GradedSpace], field: Field) -> Result<GradedSpace> {
    let mut acc = GradedSpace::unit(field);
    for (k, s) in spaces.iter().enumerate() {
        acc = if k == 0 { (*s).clone() } else { tensor_space(&acc, s)? };
    }
    Ok(acc)
}

pub fn tensor_power(m: &GradedSpace, n: usize) -> Result<GradedSpace> {
    let list: Vec<&GradedSpace> = std::iter::repeat(m).take(n).collect();
    tensor_spaces(&list, m.field())
}

/// (f⊗g)(a⊗b) = (-1)^{|g||a|} f(a)⊗g(b).
pub fn tensor_map(f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
    if f.source.field() != g.source.field() {
        return Err(Error::FieldMismatch(f.source.field().to_string(), g.source.field().to_string()));
    }
    let field = f.source.field();
    let src = Arc::new(tensor_space(&f.source, &g.source)?);
    let tgt = Arc::new(tensor_space(&f.target, &g.target)?);
    let (sb, tb) = (g.source.dim(), g.target.dim());
    let mut cols = Vec::with_capacity(src.dim());
    for a in 0..f.source.dim() {
        let s = field.sign(g.degree as i64 * f.source.degree(a) as i64);
        for b in 0..sb {
            let fa = f.matrix.column(a);
            let gb = g.matrix.column(b);
            cols.push(SparseVec::from_pairs(fa.iter().flat_map(|(i, x)| gb.iter().map(move |(j, y)| (i * tb + j, x * y))).map(|(k, c)| (k, &c * &s))));
        }
    }
    LinearMap::new(src, tgt.clone(), f.degree + g.degree, Matrix::from_columns(field, tgt.dim(), cols))
}

/// Hom(M^{⊗n}, N) on elementary maps `E[t<-s]` (sends the tensor basis vector `s` to `t`).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub space: Arc<GradedSpace>,
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    /// (target index, source index) of each basis element.
    pub elems: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl HomSpace {
    pub fn index(&self, t: usize, s: usize) -> usize {
        self.lookup[&(t, s)]
    }
}

/// Basis sorted by degree, then by (target, source) index.
pub fn hom_space(m: &GradedSpace, n: usize, target: &GradedSpace) -> Result<HomSpace> {
    if m.field() != target.field() {
        return Err(Error::FieldMismatch(m.field().to_string(), target.field().to_string()));
    }
    let field = m.field();
    let src = tensor_power(m, n)?;
    let mut elems: Vec<(usize, usize)> = (0..target.dim()).flat_map(|t| (0..src.dim()).map(move |s| (t, s))).collect();
    elems.sort_by_key(|&(t, s)| (target.degree(t) - src.degree(s), t, s));
    let lookup: HashMap<(usize, usize), usize> = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let basis = elems
        .iter()
        .map(|&(t, s)| BasisElem::new(format!("{}<-{}", target.name(t), src.name(s)), target.degree(t) - src.degree(s)))
        .collect();
    let mut space = GradedSpace::new(field, basis);
    // ∂f = ∂_N∘f - (-1)^{|f|} f∘∂
    let dsrc = src.differential();
    let mut incoming: Vec<Vec<(usize, crate::scalar::Scalar)>> = vec![Vec::new(); src.dim()];
    for s2 in 0..src.dim() {
        for (s, c) in dsrc.column(s2).iter() {
            incoming[*s].push((s2, c.clone()));
        }
    }
    let cols = elems
        .iter()
        .map(|&(t, s)| {
            let deg = target.degree(t) - src.degree(s);
            let sg = -field.sign(deg as i64);
            let left = target.differential().column(t).iter().map(|(t2, c)| (lookup[&(*t2, s)], c.clone())).collect::<Vec<_>>();
            let right = incoming[s].iter().map(|(s2, c)| (lookup[&(t, *s2)], c * &sg));
            SparseVec::from_pairs(left.into_iter().chain(right))
        })
        .collect();
    space.diff = Matrix::from_columns(field, elems.len(), cols);
    Ok(HomSpace { space: Arc::new(space), source: Arc::new(src), target: Arc::new(target.clone()), elems, lookup })
}

/// V / span(vectors), with projection and a section onto standard representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: Arc<GradedSpace>,
    pub projection: LinearMap,
    pub section: LinearMap,
    /// Basis index in V of each quotient basis vector.
    pub representatives: Vec<usize>,
    pub kernel: Echelon,
}

pub fn subspace_quotient(v: &Arc<GradedSpace>, spanning: &[SparseVec]) -> Result<Quotient> {
    let field = v.field();
    let mut ech = Echelon::new(field, v.dim());
    for s in spanning {
        for part in v.homogeneous_parts(s).into_values() {
            ech.insert(part);
        }
    }
    ech.fully_reduce();
    quotient_from_echelon(v, ech)
}

pub fn quotient_from_echelon(v: &Arc<GradedSpace>, ech: Echelon) -> Result<Quotient> {
    let field = v.field();
    let reps = ech.complement();
    let proj = ech.projection();
    // ∂ must preserve the subspace
    for row in ech.rows() {
        let d = v.differential().apply(row);
        if !ech.contains(&d) {
            return Err(Error::NotWellDefined(format!("∂({}) leaves the subspace", v.render(row))));
        }
    }
    let basis: Vec<BasisElem> = reps.iter().map(|&i| v.basis()[i].clone()).collect();
    let sec_cols: Vec<SparseVec> = reps.iter().map(|&i| SparseVec::unit(i, field)).collect();
    let section = Matrix::from_columns(field, v.dim(), sec_cols);
    let mut q = GradedSpace::new(field, basis);
    q.diff = proj.compose(v.differential()).compose(&section);
    if let Some(eps) = v.augmentation() {
        if ech.rows().iter().all(|r| eps.dot(r).map_or(true, |c| c.is_zero())) {
            q.aug = Some(SparseVec::from_pairs(reps.iter().enumerate().filter_map(|(k, &i)| eps.get(i).map(|c| (k, c.clone())))));
        }
    }
    if q.aug.is_some() {
        q.coaug = v.coaugmentation().map(|eta| proj.apply(eta));
    }
    let q = Arc::new(q);
    Ok(Quotient {
        projection: LinearMap::new(v.clone(), q.clone(), 0, proj)?,
        section: LinearMap::new(q.clone(), v.clone(), 0, section)?,
        space: q,
        representatives: reps,
        kernel: ech,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f() -> Field {
        Field::F101
    }

    fn arc(s: GradedSpace) -> Arc<GradedSpace> {
        Arc::new(s)
    }

    #[test]
    fn tensor_dims_and_koszul_differential() {
        let a = GradedSpace::from_degrees(f(), "a", &[0]);
        let b = GradedSpace::from_degrees(f(), "b", &[0, 1]);
        let t = tensor_space(&a, &b).unwrap();
        assert_eq!(t.dims_by_degree(), BTreeMap::from([(0, 1), (1, 1)]));

        // |a| = 1, ∂a = 0, ∂b = c
        let a = GradedSpace::from_degrees(f(), "a", &[1]);
        let b = GradedSpace::from_degrees(f(), "x", &[1, 0])
            .with_differential(Matrix::from_rows_i64(f(), &[vec![0, 0], vec![1, 0]]))
            .unwrap();
        let t = tensor_space(&a, &b).unwrap();
        // basis: a⊗b (index 0), a⊗c (index 1)
        assert_eq!(t.differential().column(0), &SparseVec::single(1, f().from_i64(-1)));
    }

    #[test]
    fn hom_space_examples() {
        let one = GradedSpace::from_degrees(f(), "m", &[0]);
        let h = hom_space(&one, 3, &one).unwrap();
        assert_eq!(h.space.dims_by_degree(), BTreeMap::from([(0, 1)]));
        let two = GradedSpace::from_degrees(f(), "m", &[0, 0]);
        let h = hom_space(&two, 2, &two).unwrap();
        assert_eq!(h.space.dims_by_degree(), BTreeMap::from([(0, 8)]));
        // independent count: elementary maps t<-s with degree |t| - |s|
        let mixed = GradedSpace::from_degrees(f(), "m", &[0, 1]);
        let h = hom_space(&mixed, 1, &mixed).unwrap();
        assert_eq!(h.space.dims_by_degree(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        // n = 0: maps from the ground field
        let h = hom_space(&mixed, 0, &mixed).unwrap();
        assert_eq!(h.space.dim(), 2);
    }

    #[test]
    fn hom_differential_squares_to_zero() {
        let m = GradedSpace::from_degrees(f(), "m", &[1, 0, 0])
            .with_differential(Matrix::from_rows_i64(f(), &[vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]]))
            .unwrap();
        for n in 0..3 {
            let h = hom_space(&m, n, &m).unwrap();
            h.space.validate().unwrap();
        }
    }

    #[test]
    fn augmentation_identities_are_enforced() {
        let s = GradedSpace::from_degrees(f(), "m", &[0, 0]);
        assert!(s.clone().with_augmentation(SparseVec::unit(0, f()), SparseVec::unit(0, f())).is_ok());
        assert!(s.with_augmentation(SparseVec::unit(0, f()), SparseVec::unit(1, f())).is_err());
        let bad = GradedSpace::from_degrees(f(), "m", &[0, 0]).with_differential(Matrix::identity(f(), 2));
        assert!(bad.is_err());
    }

    #[test]
    fn quotient_examples() {
        let v = arc(GradedSpace::from_degrees(f(), "e", &[0, 0]));
        let q = subspace_quotient(&v, &[]).unwrap();
        assert_eq!(q.space.dim(), 2);
        assert!(q.projection.matrix.is_identity());
        let diff = SparseVec::from_pairs([(0, f().one()), (1, f().from_i64(-1))]);
        let q = subspace_quotient(&v, &[diff.clone()]).unwrap();
        assert_eq!(q.space.dim(), 1);
        assert!(q.projection.matrix.apply(&diff).is_zero());
        assert!(q.projection.compose(&q.section).unwrap().matrix.is_identity());
    }

    #[test]
    fn quotient_rejects_non_closed_subspace() {
        let v = arc(GradedSpace::from_degrees(f(), "e", &[1, 0]).with_differential(Matrix::from_rows_i64(f(), &[vec![0, 0], vec![1, 0]])).unwrap());
        assert!(matches!(subspace_quotient(&v, &[SparseVec::unit(0, f())]), Err(Error::NotWellDefined(_))));
        assert!(subspace_quotient(&v, &[SparseVec::unit(0, f()), SparseVec::unit(1, f())]).is_ok());
    }

    fn random_complex(seed: u64) -> GradedSpace {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        // degrees 1,0,0 with ∂ from degree 1 into degree 0
        let a: i64 = rng.gen_range(-3..4);
        let b: i64 = rng.gen_range(-3..4);
        GradedSpace::from_degrees(f(), "v", &[1, 0, 0])
            .with_differential(Matrix::from_rows_i64(f(), &[vec![0, 0, 0], vec![a, 0, 0], vec![b, 0, 0]]))
            .unwrap()
    }

    fn random_map(src: &Arc<GradedSpace>, tgt: &Arc<GradedSpace>, degree: i32, seed: u64) -> LinearMap {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let cols = (0..src.dim())
            .map(|j| SparseVec::from_pairs((0..tgt.dim()).filter(|&i| tgt.degree(i) == src.degree(j) + degree).map(|i| (i, f().from_i64(rng.gen_range(-4..5))))))
            .collect();
        LinearMap::new(src.clone(), tgt.clone(), degree, Matrix::from_columns(f(), tgt.dim(), cols)).unwrap()
    }

    proptest! {
        #[test]
        fn tensor_square_is_a_complex(seed in any::<u64>()) {
            let v = random_complex(seed);
            let t = tensor_space(&v, &v).unwrap();
            prop_assert!(t.differential().compose(t.differential()).is_zero());
        }

        #[test]
        fn koszul_interchange(seed in any::<u64>(), dg in -1i32..2, dh in -1i32..2) {
            let a = arc(GradedSpace::from_degrees(f(), "a", &[0, 1, 1]));
            let b = arc(GradedSpace::from_degrees(f(), "b", &[-1, 0, 1, 2]));
            let fm = random_map(&b, &a, 0, seed);
            let g = random_map(&b, &b, dg, seed ^ 1);
            let h = random_map(&a, &b, dh, seed ^ 2);
            let k = random_map(&a, &b, 1, seed ^ 3);
            let lhs = tensor_map(&fm, &g).unwrap().compose(&tensor_map(&h, &k).unwrap()).unwrap();
            let rhs = tensor_map(&fm.compose(&h).unwrap(), &g.compose(&k).unwrap()).unwrap();
            let s = f().sign((g.degree * h.degree) as i64);
            prop_assert_eq!(lhs.matrix, rhs.matrix.scale(&s));
        }

        #[test]
        fn identity_tensor_identity(seed in any::<u64>()) {
            let v = arc(random_complex(seed));
            let id = LinearMap::identity(v.clone());
            prop_assert!(tensor_map(&id, &id).unwrap().matrix.is_identity());
        }

        #[test]
        fn quotient_dimension_matches_rank(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..4)) {
            let v = arc(GradedSpace::from_degrees(f(), "e", &[0, 0, 0, 0]));
            let vecs: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_pairs(r.iter().enumerate().map(|(i, x)| (i, f().from_i64(*x))))).collect();
            let q = subspace_quotient(&v, &vecs).unwrap();
            let m = Matrix::from_columns(f(), 4, vecs.clone());
            prop_assert_eq!(q.space.dim(), 4 - m.rank());
            prop_assert!(q.projection.compose(&q.section).unwrap().matrix.is_identity());
            for x in &vecs { prop_assert!(q.projection.matrix.apply(x).is_zero()); }
        }

        #[test]
        fn recomputation_is_bit_identical(seed in any::<u64>()) {
            let v = random_complex(seed);
            prop_assert_eq!(tensor_space(&v, &v).unwrap(), tensor_space(&v, &v).unwrap());
        }
    }
}
