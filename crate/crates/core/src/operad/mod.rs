//! Operads given by composition maps γ up to a truncation profile, and
//! morphisms between them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{tensor_spaces, GradedSpace, LinearMap};
use crate::linalg::{Matrix, SparseVec};
use crate::par;
use crate::scalar::{Field, Scalar};
use crate::smodule::SModule;

pub mod check;

pub use check::{
    check_associativity, check_associativity_exhaustive, check_equivariance, check_gamma_chain_map, check_morphism, check_operad, check_unit,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TruncationProfile {
    pub max_arity: usize,
    pub min_degree: i32,
    pub max_degree: i32,
    /// Vertex bound for trees in free operads.
    pub max_depth: usize,
}

impl Default for TruncationProfile {
    fn default() -> Self {
        TruncationProfile { max_arity: 4, min_degree: -2, max_degree: 2, max_depth: 3 }
    }
}

impl TruncationProfile {
    pub fn new(max_arity: usize, max_depth: usize) -> Result<Self> {
        if max_arity < 1 || max_depth < 1 {
            return Err(Error::Unsupported("truncation needs max arity and depth at least 1".into()));
        }
        Ok(TruncationProfile { max_arity, max_depth, ..Default::default() })
    }

    pub fn in_window(&self, degree: i32) -> bool {
        (self.min_degree..=self.max_degree).contains(&degree)
    }
}

/// `(h; i_1, …, i_h)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub h: usize,
    pub inputs: Vec<usize>,
}

impl Signature {
    pub fn new(inputs: Vec<usize>) -> Self {
        Signature { h: inputs.len(), inputs }
    }

    pub fn arity(&self) -> usize {
        self.inputs.iter().sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.inputs.iter().map(|i| i.to_string()).collect();
        write!(f, "({};{})", self.h, parts.join(","))
    }
}

/// Every signature with `1 ≤ h ≤ N` and `Σ i_j ≤ N`, in lexicographic order.
pub fn signatures(max_arity: usize) -> Vec<Signature> {
    fn rec(h: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Signature>) {
        if cur.len() == h {
            out.push(Signature::new(cur.clone()));
            return;
        }
        for i in 0..=left {
            cur.push(i);
            rec(h, left - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for h in 1..=max_arity {
        rec(h, max_arity, &mut Vec::new(), &mut out);
    }
    out
}

/// A basis element `(arity, index)`.
pub type Elem = (usize, usize);

/// γ on basis elements. `x` is an index into P(h) with `h = ys.len()`;
/// `None` means the composite falls outside the truncation.
pub trait Composer: Send + Sync + fmt::Debug {
    fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec>;
}

/// Extensional γ: one matrix per signature, columns in lexicographic
/// tensor order with P(h) most significant.
#[derive(Debug)]
pub struct TableComposer {
    dims: Vec<usize>,
    table: BTreeMap<Vec<usize>, Matrix>,
}

impl TableComposer {
    fn column(&self, x: usize, ys: &[Elem]) -> Option<&SparseVec> {
        let key: Vec<usize> = ys.iter().map(|y| y.0).collect();
        let m = self.table.get(&key)?;
        let mut k = x;
        for &(a, i) in ys {
            k = k * self.dims[a] + i;
        }
        Some(m.column(k))
    }
}

impl Composer for TableComposer {
    fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec> {
        self.column(x, ys).cloned()
    }
}

/// Overrides single γ values of another composer (for building counterexamples).
#[derive(Debug)]
pub struct PatchedComposer {
    inner: Arc<dyn Composer>,
    patches: BTreeMap<(usize, Vec<Elem>), SparseVec>,
}

impl Composer for PatchedComposer {
    fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec> {
        match self.patches.get(&(x, ys.to_vec())) {
            Some(v) => Some(v.clone()),
            None => self.inner.compose(x, ys),
        }
    }
}

#[derive(Clone)]
pub struct Operad {
    pub name: String,
    field: Field,
    module: Arc<SModule>,
    unit: SparseVec,
    profile: TruncationProfile,
    composer: Arc<dyn Composer>,
    /// False when the components are only a truncation of the true ones.
    pub exact: bool,
    pub notes: Vec<String>,
}

impl fmt::Debug for Operad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operad").field("name", &self.name).field("dims", &self.dims()).field("field", &self.field).finish()
    }
}

impl Operad {
    pub fn new(name: impl Into<String>, module: Arc<SModule>, unit: SparseVec, profile: TruncationProfile, composer: Arc<dyn Composer>) -> Result<Operad> {
        if module.max_arity() < profile.max_arity {
            return Err(Error::Dimension(format!("components up to arity {} needed, got {}", profile.max_arity, module.max_arity())));
        }
        let p1 = module.component(1);
        if unit.iter().any(|(i, _)| *i >= p1.dim() || p1.degree(*i) != 0) {
            return Err(Error::Dimension("unit must be a degree-0 vector of P(1)".into()));
        }
        let module = if module.max_arity() > profile.max_arity { Arc::new(module.truncate(profile.max_arity)) } else { module };
        Ok(Operad { name: name.into(), field: module.field(), module, unit, profile, composer, exact: true, notes: Vec::new() })
    }

    /// Materializes γ from a basis-level rule on every signature of the profile.
    pub fn tabulate(
        name: impl Into<String>,
        module: Arc<SModule>,
        unit: SparseVec,
        profile: TruncationProfile,
        rule: impl Fn(usize, &[Elem]) -> SparseVec + Sync + Send,
    ) -> Result<Operad> {
        let dims = module.dims();
        let field = module.field();
        let sigs = signatures(profile.max_arity);
        let mats = par::map(&sigs, |sig| {
            let n = sig.arity();
            let mut radix = vec![dims[sig.h]];
            radix.extend(sig.inputs.iter().map(|&i| dims[i]));
            let total: usize = radix.iter().product();
            let cols = (0..total)
                .map(|k| {
                    let d = crate::graded::tensor_digits(&radix, k);
                    let ys: Vec<Elem> = sig.inputs.iter().zip(&d[1..]).map(|(&a, &i)| (a, i)).collect();
                    rule(d[0], &ys)
                })
                .collect();
            Matrix::from_columns(field, dims[n], cols)
        });
        let table = sigs.into_iter().map(|s| s.inputs).zip(mats).collect();
        Operad::new(name, module, unit, profile, Arc::new(TableComposer { dims, table }))
    }

    /// Same operad with some γ values replaced.
    pub fn patched(&self, patches: Vec<((usize, Vec<Elem>), SparseVec)>) -> Operad {
        let mut out = self.clone();
        out.composer = Arc::new(PatchedComposer { inner: self.composer.clone(), patches: patches.into_iter().collect() });
        out.name = format!("{} (patched)", self.name);
        out
    }

    /// Same operad with a different unit vector.
    pub fn with_unit(&self, unit: SparseVec) -> Operad {
        let mut out = self.clone();
        out.unit = unit;
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn module(&self) -> &Arc<SModule> {
        &self.module
    }

    pub fn component(&self, n: usize) -> &Arc<GradedSpace> {
        self.module.component(n)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.module.component(n).dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.module.dims()
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn profile(&self) -> &TruncationProfile {
        &self.profile
    }

    pub fn max_arity(&self) -> usize {
        self.profile.max_arity
    }

    pub fn composer(&self) -> &Arc<dyn Composer> {
        &self.composer
    }

    fn check_signature(&self, h: usize, ys: &[usize]) -> Result<()> {
        if h == 0 {
            return Err(Error::Unsupported("composition with h = 0 is not defined here".into()));
        }
        let n: usize = ys.iter().sum();
        if h > self.max_arity() || n > self.max_arity() || ys.iter().any(|&i| i > self.max_arity()) {
            return Err(Error::OutsideTruncation(Signature::new(ys.to_vec()).to_string()));
        }
        Ok(())
    }

    /// γ on basis elements.
    pub fn gamma_basis(&self, x: usize, ys: &[Elem]) -> Result<Option<SparseVec>> {
        let arities: Vec<usize> = ys.iter().map(|y| y.0).collect();
        self.check_signature(ys.len(), &arities)?;
        Ok(self.composer.compose(x, ys))
    }

    /// Multilinear γ(x; y_1, …, y_h) with x ∈ P(h) and y_k ∈ P(arity_k).
    /// `None` if any term is outside the truncation.
    pub fn compose(&self, x: &SparseVec, ys: &[(usize, &SparseVec)]) -> Result<Option<SparseVec>> {
        let arities: Vec<usize> = ys.iter().map(|y| y.0).collect();
        self.check_signature(ys.len(), &arities)?;
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        let mut elems: Vec<Elem> = vec![(0, 0); ys.len()];
        fn rec(op: &Operad, x: usize, c: Scalar, k: usize, ys: &[(usize, &SparseVec)], elems: &mut Vec<Elem>, acc: &mut Vec<(usize, Scalar)>) -> bool {
            if k == ys.len() {
                return match op.composer.compose(x, elems) {
                    Some(v) => {
                        acc.extend(v.iter().map(|(i, d)| (*i, d * &c)));
                        true
                    }
                    None => false,
                };
            }
            for (i, d) in ys[k].1.iter() {
                elems[k] = (ys[k].0, *i);
                if !rec(op, x, &c * d, k + 1, ys, elems, acc) {
                    return false;
                }
            }
            true
        }
        for (i, c) in x.iter() {
            if !rec(self, *i, c.clone(), 0, ys, &mut elems, &mut acc) {
                return Ok(None);
            }
        }
        Ok(Some(SparseVec::from_pairs(acc)))
    }

    /// α ∘_i β = γ(α; u, …, β, …, u), β in slot `i` (0-based).
    pub fn partial(&self, alpha: &SparseVec, a: usize, i: usize, beta: &SparseVec, b: usize) -> Result<Option<SparseVec>> {
        if i >= a {
            return Err(Error::Dimension(format!("slot {} of an arity-{a} operation", i + 1)));
        }
        let ys: Vec<(usize, &SparseVec)> = (0..a).map(|k| if k == i { (b, beta) } else { (1, &self.unit) }).collect();
        self.compose(alpha, &ys)
    }

    /// The stored γ for a signature as a degree-0 linear map.
    pub fn gamma_map(&self, sig: &Signature) -> Result<LinearMap> {
        self.check_signature(sig.h, &sig.inputs)?;
        let mut spaces: Vec<&GradedSpace> = vec![self.component(sig.h)];
        spaces.extend(sig.inputs.iter().map(|&i| &**self.component(i)));
        let src = Arc::new(tensor_spaces(&spaces, self.field)?);
        let mut radix = vec![self.dim(sig.h)];
        radix.extend(sig.inputs.iter().map(|&i| self.dim(i)));
        let mut cols = Vec::with_capacity(src.dim());
        for k in 0..src.dim() {
            let d = crate::graded::tensor_digits(&radix, k);
            let ys: Vec<Elem> = sig.inputs.iter().zip(&d[1..]).map(|(&a, &i)| (a, i)).collect();
            cols.push(self.composer.compose(d[0], &ys).ok_or_else(|| Error::Overflow(format!("γ{sig} outside the truncation")))?);
        }
        let n = sig.arity();
        LinearMap::new(src, self.component(n).clone(), 0, Matrix::from_columns(self.field, self.dim(n), cols))
    }

    /// Component dimensions by degree inside the degree window.
    pub fn dims_in_window(&self) -> Vec<BTreeMap<i32, usize>> {
        (0..=self.max_arity())
            .map(|n| self.component(n).dims_by_degree().into_iter().filter(|(d, _)| self.profile.in_window(*d)).collect())
            .collect()
    }

    /// Total component dimensions inside the degree window.
    pub fn window_dims(&self) -> Vec<usize> {
        self.dims_in_window().iter().map(|m| m.values().sum()).collect()
    }
}

/// Degree-0 maps P(n) → Q(n); columns may be undefined where the value
/// lies outside the target's truncation.
#[derive(Clone, Debug)]
pub struct OperadMorphism {
    pub name: String,
    pub source: Arc<Operad>,
    pub target: Arc<Operad>,
    pub columns: Vec<Vec<Option<SparseVec>>>,
}

impl OperadMorphism {
    pub fn new(name: impl Into<String>, source: Arc<Operad>, target: Arc<Operad>, columns: Vec<Vec<Option<SparseVec>>>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(source.field().to_string(), target.field().to_string()));
        }
        let k = source.max_arity().min(target.max_arity()) + 1;
        if columns.len() != k {
            return Err(Error::Dimension(format!("morphism needs {k} components, got {}", columns.len())));
        }
        for (n, cols) in columns.iter().enumerate() {
            if cols.len() != source.dim(n) {
                return Err(Error::Dimension(format!("component {n}: {} columns for a {}-dim space", cols.len(), source.dim(n))));
            }
            let t = target.dim(n);
            if cols.iter().flatten().any(|c| c.max_index().is_some_and(|i| i >= t)) {
                return Err(Error::Dimension(format!("component {n}: column exceeds the target dimension {t}")));
            }
        }
        Ok(OperadMorphism { name: name.into(), source, target, columns })
    }

    pub fn from_fn(name: impl Into<String>, source: Arc<Operad>, target: Arc<Operad>, f: impl Fn(usize, usize) -> Option<SparseVec>) -> Result<Self> {
        let k = source.max_arity().min(target.max_arity()) + 1;
        let cols = (0..k).map(|n| (0..source.dim(n)).map(|j| f(n, j)).collect()).collect();
        OperadMorphism::new(name, source, target, cols)
    }

    pub fn from_matrices(name: impl Into<String>, source: Arc<Operad>, target: Arc<Operad>, maps: &[Matrix]) -> Result<Self> {
        let cols = maps.iter().map(|m| m.columns().iter().cloned().map(Some).collect()).collect();
        OperadMorphism::new(name, source, target, cols)
    }

    pub fn identity(p: Arc<Operad>) -> Self {
        let f = p.field();
        let cols = (0..=p.max_arity()).map(|n| (0..p.dim(n)).map(|j| Some(SparseVec::unit(j, f))).collect()).collect();
        OperadMorphism { name: format!("id_{}", p.name), source: p.clone(), target: p, columns: cols }
    }

    pub fn max_arity(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn apply(&self, n: usize, v: &SparseVec) -> Option<SparseVec> {
        let mut acc = Vec::new();
        for (j, c) in v.iter() {
            let col = self.columns[n][*j].as_ref()?;
            acc.extend(col.iter().map(|(i, d)| (*i, d * c)));
        }
        Some(SparseVec::from_pairs(acc))
    }

    pub fn is_total(&self) -> bool {
        self.columns.iter().flatten().all(|c| c.is_some())
    }

    /// The component in arity `n` as a matrix; errors on undefined columns.
    pub fn matrix(&self, n: usize) -> Result<Matrix> {
        let cols = self.columns[n]
            .iter()
            .enumerate()
            .map(|(j, c)| c.clone().ok_or_else(|| Error::Overflow(format!("{}: column {j} of arity {n} is outside the truncation", self.name))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.source.field(), self.target.dim(n), cols))
    }

    /// Agreement as partial maps: equal where both are defined, and defined at the same places.
    pub fn same_as(&self, other: &OperadMorphism) -> bool {
        self.columns == other.columns
    }

    /// Equal wherever both are defined.
    pub fn agrees_with(&self, other: &OperadMorphism) -> bool {
        self.columns.iter().zip(&other.columns).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.is_none() || y.is_none() || x == y))
    }
}

/// g ∘ f
pub fn compose_morphisms(g: &OperadMorphism, f: &OperadMorphism) -> Result<OperadMorphism> {
    if !Arc::ptr_eq(&f.target, &g.source) {
        return Err(Error::InvalidMorphism(format!("cannot compose {} after {}: {} is not {}", g.name, f.name, f.target.name, g.source.name)));
    }
    // past either truncation the composite is unknown
    let k = f.columns.len().min(g.columns.len());
    let full = f.source.max_arity().min(g.target.max_arity()) + 1;
    let cols = (0..full)
        .map(|n| (0..f.source.dim(n)).map(|j| if n < k { f.columns[n][j].as_ref().and_then(|v| g.apply(n, v)) } else { None }).collect())
        .collect();
    OperadMorphism::new(format!("{}∘{}", g.name, f.name), f.source.clone(), g.target.clone(), cols)
}
