//! Reflexive coequalizers of chain complexes commute with tensor products:
//! the map ψ : Coeq(⊗ f_k, ⊗ g_k) → ⊗ Coeq(f_k, g_k) induced by ⊗ q_k is invertible.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graded::{subspace_quotient, tensor_map, tensor_spaces, GradedSpace, LinearMap, Quotient};
use crate::linalg::{Matrix, SparseVec};
use crate::report::{Report, Witness};
use crate::scalar::Field;

/// Chain maps f, g : A → B with a common section s : B → A.
#[derive(Clone, Debug)]
pub struct DgPair {
    pub f: LinearMap,
    pub g: LinearMap,
    pub s: LinearMap,
}

impl DgPair {
    pub fn new(f: LinearMap, g: LinearMap, s: LinearMap) -> Result<DgPair> {
        for m in [&f, &g, &s] {
            if m.degree != 0 || !m.is_chain_map() {
                return Err(Error::InvalidMorphism("reflexive pairs consist of degree-0 chain maps".into()));
            }
        }
        if f.source != g.source || f.target != g.target || s.source != f.target || s.target != f.source {
            return Err(Error::InvalidMorphism("f, g : A → B and s : B → A required".into()));
        }
        for m in [&f, &g] {
            if !m.matrix.compose(&s.matrix).is_identity() {
                return Err(Error::InvalidMorphism("s is not a common section".into()));
            }
        }
        Ok(DgPair { f, g, s })
    }

    pub fn coequalizer(&self) -> Result<Quotient> {
        let diffs: Vec<SparseVec> = (0..self.f.source.dim()).map(|j| self.f.matrix.column(j).sub(self.g.matrix.column(j))).collect();
        subspace_quotient(&self.f.target, &diffs)
    }

    /// B ⊕ C with f = [1, u], g = [1, v] : B ⊕ C → B and s the inclusion of B.
    /// Degrees in {0, 1}, zero differential.
    pub fn random<R: Rng>(field: Field, rng: &mut R, max_dim: usize) -> DgPair {
        let p = field.characteristic().max(7) as i64;
        let db = rng.gen_range(1..=max_dim);
        let dc = rng.gen_range(1..=max_dim);
        let b_deg: Vec<i32> = (0..db).map(|_| rng.gen_range(0..2)).collect();
        let c_deg: Vec<i32> = (0..dc).map(|_| rng.gen_range(0..2)).collect();
        let b = Arc::new(GradedSpace::from_degrees(field, "b", &b_deg));
        let c_space = GradedSpace::from_degrees(field, "c", &c_deg);
        let a = Arc::new(crate::smodule::direct_sum_spaces(field, &[&b, &c_space], None).expect("same field"));
        let rand_map = |rng: &mut R| -> Vec<SparseVec> {
            (0..dc)
                .map(|j| SparseVec::from_pairs((0..db).filter(|&i| b_deg[i] == c_deg[j]).map(|i| (i, field.from_i64(rng.gen_range(0..p))))))
                .collect()
        };
        let (u, v) = (rand_map(rng), rand_map(rng));
        let block = |m: &[SparseVec]| {
            let mut cols: Vec<SparseVec> = (0..db).map(|i| SparseVec::unit(i, field)).collect();
            cols.extend(m.iter().cloned());
            Matrix::from_columns(field, db, cols)
        };
        let f = LinearMap::new(a.clone(), b.clone(), 0, block(&u)).expect("degree 0");
        let g = LinearMap::new(a.clone(), b.clone(), 0, block(&v)).expect("degree 0");
        let s = LinearMap::new(b.clone(), a.clone(), 0, Matrix::from_columns(field, db + dc, (0..db).map(|i| SparseVec::unit(i, field)).collect())).expect("degree 0");
        DgPair::new(f, g, s).expect("a reflexive pair by construction")
    }

    /// A pair with nonzero ∂: B = (e → d), C = one cycle c in degree 0,
    /// u(c) = λd and v = 0, so the coequalizer is B/(d).
    pub fn with_differential(field: Field, lambda: i64) -> DgPair {
        let b = Arc::new(
            GradedSpace::from_degrees(field, "b", &[1, 0])
                .with_differential(Matrix::from_columns(field, 2, vec![SparseVec::unit(1, field), SparseVec::new()]))
                .expect("∂² = 0"),
        );
        let c = GradedSpace::from_degrees(field, "c", &[0]);
        let a = Arc::new(crate::smodule::direct_sum_spaces(field, &[&b, &c], None).expect("same field"));
        let cols = |last: SparseVec| Matrix::from_columns(field, 2, vec![SparseVec::unit(0, field), SparseVec::unit(1, field), last]);
        let f = LinearMap::new(a.clone(), b.clone(), 0, cols(SparseVec::single(1, field.from_i64(lambda)))).expect("degree 0");
        let g = LinearMap::new(a.clone(), b.clone(), 0, cols(SparseVec::new())).expect("degree 0");
        let s = LinearMap::new(b.clone(), a.clone(), 0, Matrix::from_columns(field, 3, vec![SparseVec::unit(0, field), SparseVec::unit(1, field)])).expect("degree 0");
        DgPair::new(f, g, s).expect("a reflexive pair by construction")
    }
}

fn fold_maps(maps: &[&LinearMap]) -> Result<LinearMap> {
    let mut acc = maps[0].clone();
    for m in &maps[1..] {
        acc = tensor_map(&acc, m)?;
    }
    Ok(acc)
}

/// Builds ψ and certifies that it is well defined, a chain map and invertible.
pub fn check_tensor_coeq_iso(pairs: &[DgPair]) -> Result<Report> {
    if pairs.is_empty() {
        return Err(Error::Dimension("at least one pair is needed".into()));
    }
    let field = pairs[0].f.source.field();
    let mut rep = Report::new(format!("ψ for {} factors", pairs.len()));
    let fs: Vec<&LinearMap> = pairs.iter().map(|p| &p.f).collect();
    let gs: Vec<&LinearMap> = pairs.iter().map(|p| &p.g).collect();
    let (ft, gt) = (fold_maps(&fs)?, fold_maps(&gs)?);
    let tensor_pair = DgPair::new(ft.clone(), gt.clone(), fold_maps(&pairs.iter().map(|p| &p.s).collect::<Vec<_>>())?)?;
    let lhs = tensor_pair.coequalizer()?;
    let quots: Vec<Quotient> = pairs.iter().map(|p| p.coequalizer()).collect::<Result<_>>()?;
    let rhs_space = tensor_spaces(&quots.iter().map(|q| &*q.space).collect::<Vec<_>>(), field)?;
    let qt = fold_maps(&quots.iter().map(|q| &q.projection).collect::<Vec<_>>())?;
    // ⊗q kills im(⊗f − ⊗g)
    for j in 0..ft.source.dim() {
        let d = ft.matrix.column(j).sub(gt.matrix.column(j));
        let img = qt.matrix.apply(&d);
        rep.record(img.is_zero(), || Witness::new(format!("(⊗f − ⊗g)({})", ft.source.name(j)), "0", rhs_space.render(&img)));
    }
    let psi = LinearMap::new(lhs.space.clone(), Arc::new(rhs_space.clone()), 0, qt.matrix.compose(&lhs.section.matrix))?;
    rep.record(psi.is_chain_map(), || Witness::new("ψ", "a chain map", "∂ψ ≠ ψ∂"));
    rep.record(lhs.space.dim() == rhs_space.dim(), || Witness::new("dimensions", rhs_space.dim().to_string(), lhs.space.dim().to_string()));
    match psi.matrix.inverse() {
        Some(inv) => {
            rep.record(psi.matrix.compose(&inv).is_identity() && inv.compose(&psi.matrix).is_identity(), || Witness::new("ψψ⁻¹", "identity", "differs"));
            // ψ⁻¹ is again induced: it sends q(b_1)⊗…⊗q(b_n) to the class of b_1⊗…⊗b_n
            let sec = fold_maps(&quots.iter().map(|q| &q.section).collect::<Vec<_>>())?;
            let via = lhs.projection.matrix.compose(&sec.matrix);
            rep.record(via == inv, || Witness::new("ψ⁻¹", "q∘(⊗ sections)", "differs"));
        }
        None => rep.fail(Witness::new("ψ", "invertible", format!("rank {}", psi.matrix.rank()))),
    }
    Ok(rep)
}
