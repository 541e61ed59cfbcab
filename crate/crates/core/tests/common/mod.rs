#![allow(dead_code)]

use std::sync::Arc;

use opcalc_core::graded::{BasisElem, GradedSpace};
use opcalc_core::linalg::{Matrix, SparseVec};
use opcalc_core::operad::TruncationProfile;
use opcalc_core::scalar::{Field, Scalar};
use opcalc_core::smodule::SModule;

pub const F: Field = Field::F101;

pub fn prof(n: usize, d: usize) -> TruncationProfile {
    TruncationProfile::new(n, d).unwrap()
}

/// One binary generator `name` with the given Σ₂-action ("trivial" or "sign"),
/// or the regular module on `name`, `name'`.
pub fn binary(name: &str, kind: &str, degree: i32, max: usize) -> SModule {
    let comps: Vec<Arc<GradedSpace>> = (0..=max)
        .map(|n| {
            let basis = match (n, kind) {
                (2, "regular") => vec![BasisElem::new(name, degree), BasisElem::new(format!("{name}'"), degree)],
                (2, _) => vec![BasisElem::new(name, degree)],
                _ => vec![],
            };
            Arc::new(GradedSpace::new(F, basis))
        })
        .collect();
    SModule::from_basis_action(F, comps, |_, _, j| match kind {
        "regular" => SparseVec::unit(1 - j, F),
        "sign" => SparseVec::single(j, F.from_i64(-1)),
        _ => SparseVec::unit(j, F),
    })
    .unwrap()
}

/// Dense Gauss–Jordan over the field, pivots chosen from the last column
/// backwards. Returns (non-pivot coordinates, projection onto them).
pub fn dense_quotient(field: Field, dim: usize, spanning: &[SparseVec]) -> (Vec<usize>, Vec<Vec<Scalar>>) {
    let mut rows: Vec<Vec<Scalar>> = spanning
        .iter()
        .map(|v| {
            let mut r = vec![field.zero(); dim];
            for (i, c) in v.iter() {
                r[*i] = c.clone();
            }
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;
    for col in (0..dim).rev() {
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(next, p);
        let inv = rows[next][col].inv().unwrap();
        rows[next] = rows[next].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != next && !rows[r][col].is_zero() {
                let c = rows[r][col].clone();
                rows[r] = rows[r].iter().zip(&rows[next]).map(|(a, b)| a - &(b * &c)).collect();
            }
        }
        pivots.push(col);
        next += 1;
    }
    let reps: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    // e_pivot ≡ −(rest of its row)
    let proj = (0..dim)
        .map(|i| {
            let mut col = vec![field.zero(); reps.len()];
            if let Some(k) = reps.iter().position(|&r| r == i) {
                col[k] = field.one();
            } else {
                let row = &rows[pivots.iter().position(|&p| p == i).unwrap()];
                for (k, &r) in reps.iter().enumerate() {
                    col[k] = -row[r].clone();
                }
            }
            col
        })
        .collect();
    (reps, proj)
}

pub fn dense_columns(m: &Matrix) -> Vec<Vec<Scalar>> {
    (0..m.ncols()).map(|j| (0..m.nrows()).map(|i| m.entry(i, j)).collect()).collect()
}
