//! Concrete operads: the commutative operad 𝒩, the associative operad ℳ
//! on group algebras, and endomorphism operads End(M).

use std::sync::Arc;

use crate::error::Result;
use crate::graded::{hom_space, tensor_digits, tensor_index, GradedSpace, HomSpace};
use rand::Rng;

use crate::linalg::{Matrix, SparseVec};
use crate::operad::{Composer, Elem, Operad, OperadMorphism, TruncationProfile};
use crate::perm::{block_permutation, direct_sum, Perm};
use crate::scalar::{reorder_parity, Field};
use crate::smodule::{perm_rank, regular_component, SModule};

/// 𝒩(n) = F in degree 0 with trivial actions; every composite is the generator.
pub fn operad_n(field: Field, profile: TruncationProfile) -> Result<Operad> {
    let comps = (0..=profile.max_arity)
        .map(|n| {
            let s = GradedSpace::new(field, vec![crate::graded::BasisElem::new(format!("a{n}"), 0)]);
            Arc::new(s.with_augmentation(SparseVec::unit(0, field), SparseVec::unit(0, field)).expect("1-dim space"))
        })
        .collect();
    let module = Arc::new(SModule::trivial(field, comps)?);
    Operad::tabulate("N", module, SparseVec::unit(0, field), profile, move |_, _| SparseVec::unit(0, field))
}

/// γ(σ; ρ_1, …, ρ_h) in ℳ, as permutations.
pub fn m_gamma(sigma: &Perm, rhos: &[Perm]) -> Perm {
    let reord: Vec<Perm> = (0..sigma.len()).map(|m| rhos[sigma.apply(m)].clone()).collect();
    let lens: Vec<usize> = reord.iter().map(|r| r.len()).collect();
    block_permutation(sigma, &lens).expect("lengths match").after(&direct_sum(&reord))
}

/// ℳ(n) = F[Σ_n] with the regular right action and ε(σ) = 1.
pub fn operad_m(field: Field, profile: TruncationProfile) -> Result<Operad> {
    let perms: Vec<Vec<Perm>> = (0..=profile.max_arity).map(|n| Perm::all(n)).collect();
    let comps: Vec<Arc<GradedSpace>> = (0..=profile.max_arity)
        .map(|n| {
            let (s, ps) = regular_component(field, n);
            let eps = SparseVec::from_pairs((0..ps.len()).map(|k| (k, field.one())));
            Arc::new(s.with_augmentation(eps, SparseVec::unit(0, field)).expect("augmented group algebra"))
        })
        .collect();
    let module = Arc::new(SModule::from_basis_action(field, comps, |n, i, j| {
        SparseVec::unit(perm_rank(&(&perms[n][j] * &Perm::adjacent(n, i))), field)
    })?);
    let ps = perms.clone();
    Operad::tabulate("M", module, SparseVec::unit(0, field), profile, move |x, ys: &[Elem]| {
        let sigma = &ps[ys.len()][x];
        let rhos: Vec<Perm> = ys.iter().map(|&(a, i)| ps[a][i].clone()).collect();
        SparseVec::unit(perm_rank(&m_gamma(sigma, &rhos)), field)
    })
}

/// Which sign End(M) uses for the symmetric-group action.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EndSign {
    /// Koszul sign of the factor shuffle (the graded-correct choice).
    #[default]
    Koszul,
    /// Sign of the permutation itself, regardless of degrees.
    Permutation,
}

/// End(M)(n) = Hom(M^{⊗n}, M) on elementary maps, with (f·σ)(x) = f(σ·x) for
/// the signed factor shuffle x_1⊗…⊗x_n ↦ ±x_{σ(1)}⊗…⊗x_{σ(n)}, and
/// γ(f; g_1, …, g_h) = f∘(g_1⊗…⊗g_h).
pub fn operad_end(m: &GradedSpace, profile: TruncationProfile, sign: EndSign) -> Result<Operad> {
    let field = m.field();
    let n_max = profile.max_arity;
    let homs: Vec<HomSpace> = (0..=n_max).map(|n| hom_space(m, n, m)).collect::<Result<_>>()?;
    let d = m.dim();
    let degs: Vec<i32> = (0..d).map(|i| m.degree(i)).collect();
    let comps: Vec<Arc<GradedSpace>> = homs.iter().map(|h| h.space.clone()).collect();
    let module = {
        let homs = &homs;
        let degs = &degs;
        SModule::from_basis_action(field, comps, move |n, i, j| {
            let (t, s) = homs[n].elems[j];
            let sigma = Perm::adjacent(n, i);
            let dims = vec![d; n];
            let sd = tensor_digits(&dims, s);
            // E_{t,s}·σ = κ E_{t,r} with r_k = s_{σ⁻¹(k)}
            let inv = sigma.inverse();
            let r: Vec<usize> = (0..n).map(|k| sd[inv.apply(k)]).collect();
            let c = match sign {
                EndSign::Koszul => {
                    let rd: Vec<i32> = r.iter().map(|&x| degs[x]).collect();
                    field.sign(reorder_parity(&rd, sigma.images()))
                }
                EndSign::Permutation => sigma.sign(field),
            };
            SparseVec::single(homs[n].index(t, tensor_index(&dims, &r)), c)
        })?
    };
    let unit = SparseVec::from_pairs((0..d).map(|b| (homs[1].index(b, b), field.one())));
    let src_deg: Vec<Vec<i32>> = homs.iter().map(|h| (0..h.source.dim()).map(|s| h.source.degree(s)).collect()).collect();
    let name = match sign {
        EndSign::Koszul => "End",
        EndSign::Permutation => "End(strict)",
    };
    let homs2 = homs.clone();
    Operad::tabulate(name, Arc::new(module), unit, profile, move |x, ys: &[Elem]| {
        let h = ys.len();
        let (t, s) = homs2[h].elems[x];
        let sd = tensor_digits(&vec![d; h], s);
        let mut digits = Vec::new();
        let mut parity = 0i64;
        let mut passed = 0i64;
        for (j, &(a, i)) in ys.iter().enumerate() {
            let (tj, sj) = homs2[a].elems[i];
            if tj != sd[j] {
                return SparseVec::new();
            }
            let gdeg = homs2[a].space.degree(i) as i64;
            parity += gdeg * passed;
            passed += src_deg[a][sj] as i64;
            digits.extend(tensor_digits(&vec![d; a], sj));
        }
        let n = digits.len();
        SparseVec::single(homs2[n].index(t, tensor_index(&vec![d; n], &digits)), field.sign(parity))
    })
}

/// ℳ → 𝒩, σ ↦ 1.
pub fn augmentation_m_to_n(m: Arc<Operad>, n: Arc<Operad>) -> Result<OperadMorphism> {
    let field = m.field();
    OperadMorphism::from_fn("aug", m, n, |_, _| Some(SparseVec::unit(0, field)))
}

/// σ ↦ w₀σ on ℳ, w₀ the order-reversing permutation. This is the operad
/// automorphism that reverses the order of multiplication.
pub fn reversal_m(m: Arc<Operad>) -> Result<OperadMorphism> {
    let field = m.field();
    let target = m.clone();
    OperadMorphism::from_fn("rev", m, target, |n, j| {
        let p = &Perm::all(n)[j];
        let w0 = Perm::from_images((0..n).rev().collect()).expect("reversal");
        Some(SparseVec::unit(perm_rank(&(&w0 * p)), field))
    })
}

/// The sub-operad of `p` with nothing in arity 0.
pub fn reduced(p: Arc<Operad>) -> Result<Operad> {
    #[derive(Debug)]
    struct Restricted(Arc<Operad>);
    impl Composer for Restricted {
        fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec> {
            self.0.gamma_basis(x, ys).ok()?
        }
    }
    let field = p.field();
    let module = p.module();
    let comps: Vec<Arc<GradedSpace>> = (0..=module.max_arity())
        .map(|n| if n == 0 { Arc::new(GradedSpace::zero(field)) } else { module.component(n).clone() })
        .collect();
    let gens = (0..=module.max_arity()).map(|n| (0..n.saturating_sub(1)).map(|i| module.generator(n, i).clone()).collect()).collect();
    let module = Arc::new(SModule::new(field, comps, gens)?);
    let mut op = Operad::new(format!("{}+", p.name), module, p.unit().clone(), *p.profile(), Arc::new(Restricted(p.clone())))?;
    op.exact = p.exact;
    op.notes = p.notes.clone();
    Ok(op)
}

/// End(F) → 𝒩 identifying the one-dimensional components.
pub fn end_of_field_to_n(end: Arc<Operad>, n: Arc<Operad>) -> Result<OperadMorphism> {
    let field = end.field();
    OperadMorphism::from_fn("End(F)≅N", end, n, |_, _| Some(SparseVec::unit(0, field)))
}

/// A commutative unital algebra on `v` as a morphism 𝒩 → End(v): a_k goes to
/// the k-fold product. `mult[i][j]` is e_i·e_j; nothing is checked here.
pub fn commutative_algebra(n: Arc<Operad>, end: Arc<Operad>, v: &GradedSpace, mult: &[Vec<SparseVec>], unit: &SparseVec) -> Result<OperadMorphism> {
    let d = v.dim();
    let k_max = n.max_arity().min(end.max_arity());
    let homs: Vec<HomSpace> = (0..=k_max).map(|k| hom_space(v, k, v)).collect::<Result<_>>()?;
    let product = |digits: &[usize]| {
        let mut acc = unit.clone();
        for &i in digits {
            let mut next = SparseVec::new();
            for (a, c) in acc.iter() {
                next = next.add_scaled(&mult[*a][i], c);
            }
            acc = next;
        }
        acc
    };
    OperadMorphism::from_fn("alg", n, end, |k, _| {
        let dims = vec![d; k];
        let total: usize = dims.iter().product();
        let mut out = Vec::new();
        for s in 0..total {
            for (t, c) in product(&tensor_digits(&dims, s)).iter() {
                out.push((homs[k].index(*t, s), c.clone()));
            }
        }
        Some(SparseVec::from_pairs(out))
    })
}

/// F^d with componentwise product, written in a random basis. Returns the
/// structure constants and the unit.
pub fn random_split_algebra<R: Rng>(field: Field, d: usize, rng: &mut R) -> (Vec<Vec<SparseVec>>, SparseVec) {
    let p = field.characteristic().max(7) as i64;
    let (basis, inv) = loop {
        let m = Matrix::from_columns(field, d, (0..d).map(|_| SparseVec::from_pairs((0..d).map(|i| (i, field.from_i64(rng.gen_range(0..p)))))).collect());
        if let Some(inv) = m.inverse() {
            break (m, inv);
        }
    };
    // b_i = Σ_j P_ji f_j with f_j f_k = δ_jk f_j
    let mult = (0..d)
        .map(|i| {
            (0..d)
                .map(|k| {
                    let idem = SparseVec::from_pairs((0..d).map(|j| (j, &basis.entry(j, i) * &basis.entry(j, k))));
                    inv.apply(&idem)
                })
                .collect()
        })
        .collect();
    let unit = inv.apply(&SparseVec::from_pairs((0..d).map(|j| (j, field.one()))));
    (mult, unit)
}
