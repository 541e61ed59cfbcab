//! Colimits of operads.
//!
//! Everything funnels through one quotient path: a reflexive pair
//! `f, g : P ⇉ Q` with common section `s` has coequalizer `Q(n)/im(f_n − g_n)`
//! in each arity, and γ_Q descends to it. Coproducts are quotients of free
//! operads on `⊕ U P_i`; coequalizers, pushouts and finite colimits are
//! reflexivized through coproducts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::{subspace_quotient, GradedSpace};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::operad::check::TUPLE_CAP;
use crate::operad::{compose_morphisms, signatures, Composer, Elem, Operad, OperadMorphism};
use crate::par;
use crate::report::{Report, Witness};
use crate::smodule::SModule;

mod coproduct;
pub mod diagonal;
pub mod tensor;

pub use coproduct::{
    coequalizer, cocone_factorization, colimit, compare_free_coproduct, coproduct, kills_relations, pushout, Arrow, Colimit,
    FiniteDiagram,
};
pub use diagonal::check_diagonal_final;
pub use tensor::{check_tensor_coeq_iso, DgPair};

/// f, g : P ⇉ Q with f∘s = g∘s = 1_Q.
#[derive(Clone, Debug)]
pub struct ReflexivePair {
    pub f: OperadMorphism,
    pub g: OperadMorphism,
    pub s: OperadMorphism,
}

impl ReflexivePair {
    pub fn new(f: OperadMorphism, g: OperadMorphism, s: OperadMorphism) -> Result<ReflexivePair> {
        if !Arc::ptr_eq(&f.source, &g.source) || !Arc::ptr_eq(&f.target, &g.target) {
            return Err(Error::InvalidMorphism(format!("{} and {} are not parallel", f.name, g.name)));
        }
        let id = OperadMorphism::identity(f.target.clone());
        for m in [&f, &g] {
            let c = compose_morphisms(m, &s)?;
            if !c.agrees_with(&id) {
                return Err(Error::InvalidMorphism(format!("{} is not a section of {}", s.name, m.name)));
            }
        }
        Ok(ReflexivePair { f, g, s })
    }
}

/// Lifts and projections for O = Q / K, arity by arity.
#[derive(Debug)]
pub struct QuotientData {
    pub base: Arc<Operad>,
    /// Basis index in Q of each basis vector of O.
    pub reps: Vec<Vec<usize>>,
    pub projection: Vec<Matrix>,
    pub kernel: Vec<Echelon>,
}

#[derive(Debug)]
struct QuotientComposer {
    data: Arc<QuotientData>,
}

impl Composer for QuotientComposer {
    fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec> {
        let d = &self.data;
        let lifted: Vec<Elem> = ys.iter().map(|&(a, i)| (a, d.reps[a][i])).collect();
        let n: usize = ys.iter().map(|y| y.0).sum();
        let v = d.base.gamma_basis(d.reps[ys.len()][x], &lifted).ok()??;
        Some(d.projection[n].apply(&v))
    }
}

/// Q modulo the span of `relations[n]` in each arity. The span must be closed
/// under ∂ and Σ_n; γ is computed on representatives and projected.
pub fn quotient_operad(name: impl Into<String>, base: Arc<Operad>, relations: &[Vec<SparseVec>]) -> Result<(Arc<Operad>, OperadMorphism, Arc<QuotientData>)> {
    let field = base.field();
    let n_max = base.max_arity();
    let b2 = base.clone();
    let parts = par::map_range(n_max + 1, |n| -> Result<_> {
        let comp = b2.component(n);
        let q = subspace_quotient(comp, relations.get(n).map_or(&[][..], |v| &v[..]))?;
        // Σ_n must preserve the kernel
        for i in 0..n.saturating_sub(1) {
            let gen = b2.module().generator(n, i);
            for row in q.kernel.rows() {
                if !q.kernel.contains(&gen.apply(row)) {
                    return Err(Error::NotWellDefined(format!("the relations in arity {n} are not Σ-stable at {}", comp.render(row))));
                }
            }
        }
        let gens: Vec<Matrix> = (0..n.saturating_sub(1)).map(|i| q.projection.matrix.compose(b2.module().generator(n, i)).compose(&q.section.matrix)).collect();
        Ok((q, gens))
    });
    let mut comps: Vec<Arc<GradedSpace>> = Vec::new();
    let mut gens = Vec::new();
    let mut reps = Vec::new();
    let mut projection = Vec::new();
    let mut kernel = Vec::new();
    for part in parts {
        let (q, g) = part?;
        comps.push(q.space.clone());
        gens.push(g);
        reps.push(q.representatives.clone());
        projection.push(q.projection.matrix.clone());
        kernel.push(q.kernel);
    }
    let module = Arc::new(SModule::new(field, comps, gens)?);
    let unit = projection[1].apply(base.unit());
    let data = Arc::new(QuotientData { base: base.clone(), reps, projection, kernel });
    let mut op = Operad::new(name, module, unit, *base.profile(), Arc::new(QuotientComposer { data: data.clone() }))?;
    op.exact = base.exact;
    op.notes = base.notes.clone();
    let op = Arc::new(op);
    let d2 = data.clone();
    let q = OperadMorphism::from_fn(format!("q_{}", op.name), base, op.clone(), move |n, b| Some(d2.projection[n].column(b).clone()))?;
    Ok((op, q, data))
}

/// Exact membership check that γ_Q maps any tuple with a kernel entry into the kernel.
pub fn check_well_defined(data: &QuotientData, seed: u64) -> Report {
    let base = &data.base;
    let sigs = signatures(base.max_arity());
    let reports = par::map(&sigs, |sig| {
        let mut rep = Report::new("induced γ well-defined");
        let n = sig.arity();
        for slot in 0..=sig.h {
            // slot 0 is x, slot k is y_k
            let arities: Vec<usize> = std::iter::once(sig.h).chain(sig.inputs.iter().copied()).collect();
            let dims: Vec<usize> = arities.iter().enumerate().map(|(k, &a)| if k == slot { data.kernel[a].rank() } else { base.dim(a) }).collect();
            let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
            if total == 0 {
                continue;
            }
            let cap = TUPLE_CAP / 10;
            let picks: Vec<Vec<usize>> = if total <= cap {
                (0..total).map(|k| crate::graded::tensor_digits(&dims, k)).collect()
            } else {
                let key = [slot, sig.h].into_iter().chain(sig.inputs.iter().copied());
                let mut rng = ChaCha8Rng::seed_from_u64(key.fold(seed, |h, k| (h ^ k as u64).wrapping_mul(0x100_0000_01b3)));
                (0..cap).map(|_| dims.iter().map(|&d| rng.gen_range(0..d)).collect()).collect()
            };
            if total > cap {
                rep.note(format!("{sig}, slot {slot}: {cap} of {total} tuples sampled"));
            }
            for t in picks {
                let vecs: Vec<SparseVec> = t
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| if k == slot { data.kernel[arities[k]].rows()[i].clone() } else { SparseVec::unit(i, base.field()) })
                    .collect();
                let ys: Vec<(usize, &SparseVec)> = sig.inputs.iter().zip(&vecs[1..]).map(|(&a, v)| (a, v)).collect();
                match base.compose(&vecs[0], &ys) {
                    Ok(Some(v)) => rep.record(data.kernel[n].contains(&v), || {
                        Witness::new(format!("γ{sig}, kernel element in slot {slot}"), "an element of the kernel", base.component(n).render(&v))
                    }),
                    _ => rep.skip(),
                }
            }
        }
        rep
    });
    let mut out = Report::new("induced γ well-defined");
    for r in reports {
        out.absorb(r);
    }
    out
}

/// Coequalizer of a reflexive pair, computed componentwise.
pub fn reflexive_coequalizer(pair: &ReflexivePair) -> Result<(Arc<Operad>, OperadMorphism)> {
    let (o, q, _) = reflexive_coequalizer_data(pair)?;
    Ok((o, q))
}

/// As [`reflexive_coequalizer`], with the quotient data kept.
pub fn reflexive_coequalizer_data(pair: &ReflexivePair) -> Result<(Arc<Operad>, OperadMorphism, Arc<QuotientData>)> {
    let target = pair.f.target.clone();
    let k = pair.f.columns.len().min(pair.g.columns.len());
    let mut partial = false;
    let relations: Vec<Vec<SparseVec>> = (0..k)
        .map(|n| {
            pair.f.columns[n]
                .iter()
                .zip(&pair.g.columns[n])
                .filter_map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => Some(a.sub(b)),
                    _ => {
                        partial = true;
                        None
                    }
                })
                .collect()
        })
        .collect();
    let name = format!("Coeq({}, {})", pair.f.name, pair.g.name);
    let (o, q, data) = quotient_operad(name, target.clone(), &relations)?;
    let wd = check_well_defined(&data, 0);
    if let Some(w) = wd.first_failure() {
        return Err(Error::NotWellDefined(format!("{}: {}", w.at, w.found)));
    }
    // both unit choices: q(1_Q) and q(f(1_P))
    let via_p = pair.f.apply(1, pair.f.source.unit()).and_then(|u| q.apply(1, &u));
    if via_p.as_ref() != Some(o.unit()) {
        return Err(Error::NotWellDefined("the two candidate units of the coequalizer differ".into()));
    }
    if partial || !pair.f.source.exact {
        let mut op = (*o).clone();
        op.exact = false;
        op.notes.push("the pair is only partially defined inside the truncation".into());
        let o2 = Arc::new(op);
        let q2 = OperadMorphism::new(q.name.clone(), q.source.clone(), o2.clone(), q.columns.clone())?;
        return Ok((o2, q2, data));
    }
    Ok((o, q, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_morphism, check_operad, TruncationProfile};
    use crate::scalar::Field;
    use crate::zoo::operad_m;

    #[test]
    fn identity_pair_gives_the_target() {
        let m = Arc::new(operad_m(Field::F101, TruncationProfile::new(3, 3).unwrap()).unwrap());
        let id = OperadMorphism::identity(m.clone());
        let pair = ReflexivePair::new(id.clone(), id.clone(), id).unwrap();
        let (o, q, data) = reflexive_coequalizer_data(&pair).unwrap();
        assert_eq!(o.dims(), m.dims());
        assert!(q.same_as(&OperadMorphism::from_fn("q", m.clone(), o.clone(), |_, b| Some(SparseVec::unit(b, m.field()))).unwrap()));
        for r in check_operad(&o, 0) {
            assert!(r.passed, "{}", r.check);
        }
        assert!(check_well_defined(&data, 0).passed);
        assert!(check_morphism(&q, 0).passed);
    }

    #[test]
    fn non_sections_are_rejected() {
        let f = Field::F101;
        let m = Arc::new(operad_m(f, TruncationProfile::new(3, 3).unwrap()).unwrap());
        let id = OperadMorphism::identity(m.clone());
        let rev = crate::zoo::reversal_m(m.clone()).unwrap();
        assert!(ReflexivePair::new(id.clone(), rev.clone(), id.clone()).is_err());
        // rev is an involution, hence its own section
        assert!(ReflexivePair::new(rev.clone(), rev.clone(), rev.clone()).is_ok());
    }
}
