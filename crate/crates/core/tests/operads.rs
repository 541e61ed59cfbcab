mod common;

use std::sync::{Arc, OnceLock};

use common::{prof, F};
use opcalc_core::graded::GradedSpace;
use opcalc_core::linalg::{Matrix, SparseVec};
use opcalc_core::operad::{check_morphism, check_operad, Operad, OperadMorphism, TruncationProfile};
use opcalc_core::zoo::{augmentation_m_to_n, operad_end, operad_m, operad_n, EndSign};
use proptest::prelude::*;

fn zoo() -> Vec<Operad> {
    let p = TruncationProfile::default();
    let complex = GradedSpace::from_degrees(F, "c", &[1, 0]).with_differential(Matrix::from_rows_i64(F, &[vec![0, 0], vec![1, 0]])).unwrap();
    vec![
        operad_n(F, p).unwrap(),
        operad_m(F, p).unwrap(),
        operad_end(&GradedSpace::from_degrees(F, "e", &[0, 1]), p, EndSign::Koszul).unwrap(),
        operad_end(&complex, prof(3, 3), EndSign::Koszul).unwrap(),
    ]
}

#[test]
fn zoo_passes_every_checker_and_identity_is_a_morphism() {
    for op in zoo() {
        for r in check_operad(&op, 0) {
            assert!(r.passed, "{} {}: {:?}", op.name, r.check, r.first_failure());
        }
        let op = Arc::new(op);
        assert!(check_morphism(&OperadMorphism::identity(op.clone()), 0).passed, "{}", op.name);
    }
}

#[test]
fn n_is_the_augmentation_image_of_m() {
    let p = TruncationProfile::default();
    let m = Arc::new(operad_m(F, p).unwrap());
    let n = Arc::new(operad_n(F, p).unwrap());
    let aug = augmentation_m_to_n(m.clone(), n.clone()).unwrap();
    assert!(check_morphism(&aug, 0).passed);
    for k in 0..=4 {
        assert_eq!(aug.matrix(k).unwrap().rank(), n.dim(k));
    }
}

#[test]
fn results_are_bit_identical_across_runs() {
    let a = zoo();
    let b = zoo();
    for (x, y) in a.iter().zip(&b) {
        for (r, s) in check_operad(x, 5).iter().zip(check_operad(y, 5).iter()) {
            assert_eq!(r, s);
        }
        let sig = opcalc_core::operad::Signature::new(vec![1, 2]);
        assert_eq!(x.gamma_map(&sig).unwrap().matrix, y.gamma_map(&sig).unwrap().matrix);
    }
}

fn basis(op: &Operad, n: usize, k: usize) -> SparseVec {
    SparseVec::unit(k % op.dim(n), F)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// (α ∘_i β) ∘_{i+j} δ = α ∘_i (β ∘_j δ), 0-based slots.
    #[test]
    fn sequential_partial_composition(which in 0usize..3, a in 1usize..4, b in 1usize..4, c in 0usize..3, picks in any::<[usize; 5]>()) {
        static ZOO: OnceLock<Vec<Operad>> = OnceLock::new();
        let op = &ZOO.get_or_init(zoo)[which + 1];
        let n = op.max_arity();
        prop_assume!(a + b + c <= n + 2 && a + b <= n + 1 && b + c <= n + 1);
        let (i, j) = (picks[0] % a, picks[1] % b);
        let (x, y, z) = (basis(op, a, picks[2]), basis(op, b, picks[3]), basis(op, c, picks[4]));
        let lhs = op.partial(&x, a, i, &y, b).unwrap().and_then(|xy| op.partial(&xy, a + b - 1, i + j, &z, c).unwrap());
        let rhs = op.partial(&y, b, j, &z, c).unwrap().and_then(|yz| op.partial(&x, a, i, &yz, b + c - 1).unwrap());
        if let (Some(l), Some(r)) = (lhs, rhs) {
            prop_assert_eq!(l, r);
        }
    }
}
