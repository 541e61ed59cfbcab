//! The free/forgetful adjunction: η, ε and the bijection θ between operad
//! morphisms F(X) → P and Σ-module maps X → UP.

use std::sync::Arc;

use super::{FreeOperad, Tree};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::operad::{Operad, OperadMorphism, TruncationProfile};
use crate::perm::Perm;
use crate::report::{Report, Witness};
use crate::smodule::{SModule, SModuleMap};

/// η_X : X → UF(X), sending a generator to its corolla.
pub fn eta_unit(fx: &FreeOperad) -> SModuleMap {
    let x = fx.x().clone();
    let field = x.field();
    let k = x.max_arity().min(fx.operad.max_arity()) + 1;
    let maps = (0..k)
        .map(|n| {
            let cols = (0..x.component(n).dim())
                .map(|i| fx.vector(&Tree::corolla(super::Gen { arity: n, index: i })).expect("a corolla has one vertex"))
                .collect();
            Matrix::from_columns(field, fx.operad.dim(n), cols)
        })
        .collect();
    SModuleMap::new(x, fx.operad.module().clone(), maps).expect("shapes match")
}

/// Labels `0..m` in the order of `leaves`.
fn standardize(t: &Tree) -> Tree {
    let mut ls = t.leaves();
    ls.sort_unstable();
    t.map_leaves(&|l| ls.binary_search(&l).expect("own leaf"))
}

/// The value in P of a tree whose vertices are decorated through `g`.
/// `None` when a composite falls outside the truncation of P.
pub fn evaluate(p: &Operad, g: &SModuleMap, t: &Tree) -> Option<SparseVec> {
    match t {
        Tree::Leaf(_) => Some(p.unit().clone()),
        Tree::Node(y, ch) => {
            let top = g.maps.get(y.arity)?.column(y.index).clone();
            let mut vals = Vec::with_capacity(ch.len());
            let mut concat = Vec::new();
            for c in ch {
                let mut ls = c.leaves();
                ls.sort_unstable();
                concat.extend(ls.iter().copied());
                vals.push((ls.len(), evaluate(p, g, &standardize(c))?));
            }
            let refs: Vec<(usize, &SparseVec)> = vals.iter().map(|(a, v)| (*a, v)).collect();
            if refs.is_empty() {
                return Some(top);
            }
            let composite = p.compose(&top, &refs).ok()??;
            let pi = Perm::from_images(concat).expect("leaf labels form a permutation");
            if pi.len() < 2 {
                return Some(composite);
            }
            Some(p.module().act(pi.len(), &composite, &pi))
        }
    }
}

/// θ⁻¹(g) : F(X) → P for a Σ-module map g : X → UP.
pub fn theta_inverse(fx: &FreeOperad, p: Arc<Operad>, g: &SModuleMap) -> Result<OperadMorphism> {
    // components beyond the shorter truncation are ignored
    let k = g.maps.len().min(fx.operad.max_arity() + 1).min(p.max_arity() + 1) - 1;
    if fx.x().truncate(k) != g.source.truncate(k) || g.maps.len() < k + 1 {
        return Err(Error::InvalidMorphism("the map does not start at the generators of this free operad".into()));
    }
    if p.module().truncate(k) != g.target.truncate(k) {
        return Err(Error::InvalidMorphism(format!("the map does not land in the underlying module of {}", p.name)));
    }
    let rep = g.check();
    if let Some(w) = rep.first_failure() {
        return Err(Error::InvalidMorphism(format!("not a Σ-module map at {}: expected {}, found {}", w.at, w.expected, w.found)));
    }
    let data = fx.data.clone();
    let pp = p.clone();
    OperadMorphism::from_fn(format!("θ⁻¹→{}", p.name), fx.operad.clone(), p, move |n, b| evaluate(&pp, g, data.basis_tree(n, b)))
}

/// θ(f) = Uf ∘ η_X.
pub fn theta(fx: &FreeOperad, f: &OperadMorphism) -> Result<SModuleMap> {
    if !Arc::ptr_eq(&f.source, &fx.operad) {
        return Err(Error::InvalidMorphism(format!("{} does not start at this free operad", f.name)));
    }
    let x = fx.x().clone();
    let field = x.field();
    let eta = eta_unit(fx);
    let k = eta.maps.len().min(f.columns.len());
    let maps = (0..k)
        .map(|n| {
            let cols = eta.maps[n]
                .columns()
                .iter()
                .map(|c| f.apply(n, c).ok_or_else(|| Error::Overflow(format!("{} is undefined on a corolla of arity {n}", f.name))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(field, f.target.dim(n), cols))
        })
        .collect::<Result<Vec<_>>>()?;
    SModuleMap::new(x, f.target.module().clone(), maps)
}

/// ε_P : F(UP) → P together with the free operad it starts at.
pub fn epsilon_counit(p: Arc<Operad>, profile: TruncationProfile) -> Result<(FreeOperad, OperadMorphism)> {
    let up = p.module().clone();
    let fup = FreeOperad::new(up.clone(), profile)?.with_name(format!("F(U{})", p.name));
    let id = SModuleMap::identity(fup.x().clone());
    let mut eps = theta_inverse(&fup, p.clone(), &id)?;
    eps.name = format!("ε_{}", p.name);
    Ok((fup, eps))
}

/// F(f) = θ⁻¹(η_Y ∘ f) : F(X) → F(Y).
pub fn free_on_morphism(f: &SModuleMap, fx: &FreeOperad, fy: &FreeOperad) -> Result<OperadMorphism> {
    let g = eta_unit(fy).compose(f)?;
    let mut m = theta_inverse(fx, fy.operad.clone(), &g)?;
    m.name = "F(f)".into();
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct TriangularReport {
    /// ε_{F(X)} ∘ F(η_X) = 1 on F(X).
    pub free_side: Report,
    /// Uε_P ∘ η_{UP} = 1 on UP.
    pub module_side: Report,
}

impl TriangularReport {
    pub fn passed(&self) -> bool {
        self.free_side.passed && self.module_side.passed
    }
}

/// Both triangle identities, on every basis vector in the truncation.
pub fn check_triangular(x: Arc<SModule>, p: Arc<Operad>, profile: TruncationProfile) -> Result<TriangularReport> {
    let field = x.field();
    let fx = FreeOperad::new(x, profile)?;
    // ε_{FX} ∘ F(η_X)
    let (fufx, eps_fx) = epsilon_counit(fx.operad.clone(), profile)?;
    let f_eta = free_on_morphism(&eta_unit(&fx), &fx, &fufx)?;
    let mut free_side = Report::new("ε_F(X)∘F(η_X) = 1");
    for n in 0..=fx.operad.max_arity() {
        for b in 0..fx.operad.dim(n) {
            let e = SparseVec::unit(b, field);
            let found = f_eta.apply(n, &e).and_then(|v| eps_fx.apply(n, &v));
            let at = || format!("arity {n}, {}", fx.operad.component(n).name(b));
            match found {
                Some(v) => free_side.record(v == e, || Witness::new(at(), fx.operad.component(n).render(&e), fx.operad.component(n).render(&v))),
                None => free_side.skip(),
            }
        }
    }
    // ε_P ∘ η_{UP}
    let (fup, eps_p) = epsilon_counit(p.clone(), profile)?;
    let eta_up = eta_unit(&fup);
    let mut module_side = Report::new("ε_P∘η_UP = 1");
    for n in 0..eta_up.maps.len() {
        for b in 0..p.dim(n) {
            let e = SparseVec::unit(b, field);
            let found = eps_p.apply(n, eta_up.maps[n].column(b));
            let at = || format!("arity {n}, {}", p.component(n).name(b));
            match found {
                Some(v) => module_side.record(v == e, || Witness::new(at(), p.component(n).render(&e), p.component(n).render(&v))),
                None => module_side.skip(),
            }
        }
    }
    Ok(TriangularReport { free_side, module_side })
}
