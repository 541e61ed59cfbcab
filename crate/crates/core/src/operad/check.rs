//! Axiom checkers for operads and operad morphisms.
//!
//! Associativity is checked through partial compositions: every γ must equal
//! its iterated partial compositions, and those must satisfy the sequential and
//! parallel axioms. Together with the unit axiom this is equivalent to the
//! full two-level identity, which is additionally spot-checked on seeded
//! samples (and exhaustively by [`check_associativity_exhaustive`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{signatures, Elem, Operad, OperadMorphism, Signature};
use crate::linalg::SparseVec;
use crate::par;
use crate::perm::{block_permutation, direct_sum, Perm};
use crate::report::{Report, Witness};
use crate::scalar::reorder_parity;

/// Basis tuples checked per signature before switching to seeded sampling.
pub const TUPLE_CAP: usize = 20_000;
const SPOT_CHECKS: usize = 64;

fn mix(seed: u64, key: &[usize]) -> u64 {
    key.iter().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, &k| (h ^ k as u64).wrapping_mul(0x100_0000_01b3).rotate_left(17))
}

/// Index tuples for the components `arities`, restricted to the degree
/// window; sampled when there are more than `cap`.
fn tuples(op: &Operad, arities: &[usize], cap: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    let dims: Vec<usize> = arities.iter().map(|&a| op.dim(a)).collect();
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    let in_window = |t: &[usize]| t.iter().zip(arities).all(|(&i, &a)| op.profile().in_window(op.component(a).degree(i)));
    if total == 0 {
        return (Vec::new(), false);
    }
    if total <= cap {
        let all = (0..total).map(|k| crate::graded::tensor_digits(&dims, k)).filter(|t| in_window(t)).collect();
        return (all, false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, arities));
    let picked = (0..cap).map(|_| dims.iter().map(|&d| rng.gen_range(0..d)).collect::<Vec<_>>()).filter(|t| in_window(t)).collect();
    (picked, true)
}

fn name(op: &Operad, a: usize, i: usize) -> String {
    op.component(a).name(i).to_string()
}

fn render(op: &Operad, n: usize, v: &Option<SparseVec>) -> String {
    match v {
        Some(v) => op.component(n).render(v),
        None => "undefined".into(),
    }
}

fn describe(op: &Operad, sig: &Signature, x: usize, ys: &[Elem]) -> String {
    let ynames: Vec<String> = ys.iter().map(|&(a, i)| name(op, a, i)).collect();
    format!("γ{sig} on x={}, y=({})", name(op, sig.h, x), ynames.join(", "))
}

fn unit_vec(op: &Operad, i: usize) -> SparseVec {
    SparseVec::unit(i, op.field())
}

/// Run `f` per signature in parallel and fold the reports in signature order.
fn per_signature(op: &Operad, check: &str, f: impl Fn(&Signature, &mut Report) + Sync + Send) -> Report {
    let sigs = signatures(op.max_arity());
    let parts = par::map(&sigs, |sig| {
        let mut r = Report::new(check);
        f(sig, &mut r);
        r
    });
    let mut rep = Report::new(check);
    for p in parts {
        rep.absorb(p);
    }
    rep
}

fn sampled_note(rep: &mut Report, sig: &Signature, sampled: bool) {
    if sampled {
        rep.note(format!("γ{sig}: {TUPLE_CAP} seeded samples instead of all basis tuples"));
    }
}

/// γ(x; u, …, u) = x and γ(u; x) = x.
pub fn check_unit(op: &Operad) -> Report {
    let mut rep = Report::new("unit");
    let u = op.unit().clone();
    for n in 0..=op.max_arity() {
        for j in 0..op.dim(n) {
            if !op.profile().in_window(op.component(n).degree(j)) {
                continue;
            }
            let x = unit_vec(op, j);
            let left = op.compose(&u, &[(n, &x)]).ok().flatten();
            rep.record(left.as_ref() == Some(&x), || Witness::new(format!("γ(u; {})", name(op, n, j)), name(op, n, j), render(op, n, &left)));
            if n == 0 {
                continue;
            }
            let us: Vec<(usize, &SparseVec)> = (0..n).map(|_| (1, &u)).collect();
            let right = op.compose(&x, &us).ok().flatten();
            rep.record(right.as_ref() == Some(&x), || Witness::new(format!("γ({}; u, …, u)", name(op, n, j)), name(op, n, j), render(op, n, &right)));
        }
    }
    if op.dim(0) > 0 {
        rep.note("right unit law not applicable in arity 0 (h = 0)");
    }
    rep
}

fn gamma(op: &Operad, x: usize, ys: &[Elem]) -> Option<SparseVec> {
    op.composer().compose(x, ys)
}

fn act(op: &Operad, n: usize, v: &SparseVec, p: &Perm) -> SparseVec {
    if n < 2 {
        return v.clone();
    }
    op.module().act(n, v, p)
}

/// Both equivariance identities for given σ ∈ Σ_h and ρ_k ∈ Σ_{i_k}.
/// Returns the failing description, or `None` (also when undefined).
fn equivariance_instance(op: &Operad, sig: &Signature, x: usize, ys: &[Elem], sigma: &Perm, rhos: &[Perm]) -> Option<Witness> {
    let n = sig.arity();
    let f = op.field();
    let base = gamma(op, x, ys)?;
    // γ(x·σ; y_{σ⁻¹(1)}, …) = κ γ(x; y)·σ(i_1, …, i_h)
    if sig.h >= 2 && !sigma.is_identity() {
        let inv = sigma.inverse();
        let order: Vec<usize> = (0..sig.h).map(|m| inv.apply(m)).collect();
        let degs: Vec<i32> = ys.iter().map(|&(a, i)| op.component(a).degree(i)).collect();
        let kappa = f.sign(reorder_parity(&degs, &order));
        let ys2: Vec<(usize, SparseVec)> = order.iter().map(|&k| (ys[k].0, unit_vec(op, ys[k].1))).collect();
        let xs = act(op, sig.h, &unit_vec(op, x), sigma);
        let refs: Vec<(usize, &SparseVec)> = ys2.iter().map(|(a, v)| (*a, v)).collect();
        let lhs = op.compose(&xs, &refs).ok().flatten()?;
        let block = block_permutation(sigma, &sig.inputs).expect("block lengths match");
        let rhs = act(op, n, &base, &block).scale(&kappa);
        if lhs != rhs {
            return Some(Witness::new(format!("{}, σ={sigma}", describe(op, sig, x, ys)), op.component(n).render(&rhs), op.component(n).render(&lhs)));
        }
    }
    // γ(x; y_1ρ_1, …, y_hρ_h) = γ(x; y)·(ρ_1 ⊕ … ⊕ ρ_h)
    if rhos.iter().any(|r| !r.is_identity()) {
        let ys2: Vec<(usize, SparseVec)> = ys.iter().zip(rhos).map(|(&(a, i), r)| (a, act(op, a, &unit_vec(op, i), r))).collect();
        let refs: Vec<(usize, &SparseVec)> = ys2.iter().map(|(a, v)| (*a, v)).collect();
        let lhs = op.compose(&unit_vec(op, x), &refs).ok().flatten()?;
        let rhs = act(op, n, &base, &direct_sum(rhos));
        if lhs != rhs {
            let rs: Vec<String> = rhos.iter().map(|r| r.to_string()).collect();
            return Some(Witness::new(format!("{}, ρ=({})", describe(op, sig, x, ys), rs.join(",")), op.component(n).render(&rhs), op.component(n).render(&lhs)));
        }
    }
    None
}

/// Both equivariance diagrams on adjacent transpositions for every basis
/// tuple, plus seeded spot checks with full permutations.
pub fn check_equivariance(op: &Operad, seed: u64) -> Report {
    per_signature(op, "equivariance", |sig, rep| {
        let mut arities = vec![sig.h];
        arities.extend(&sig.inputs);
        let (ts, sampled) = tuples(op, &arities, TUPLE_CAP, seed);
        sampled_note(rep, sig, sampled);
        let ids: Vec<Perm> = sig.inputs.iter().map(|&i| Perm::identity(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &arities) ^ 1);
        for (t_idx, t) in ts.iter().enumerate() {
            let ys: Vec<Elem> = sig.inputs.iter().zip(&t[1..]).map(|(&a, &i)| (a, i)).collect();
            let run = |sigma: &Perm, rhos: &[Perm], rep: &mut Report| {
                if gamma(op, t[0], &ys).is_none() {
                    rep.skip();
                    return;
                }
                let w = equivariance_instance(op, sig, t[0], &ys, sigma, rhos);
                match w {
                    Some(w) => rep.fail(w),
                    None => rep.record(true, || unreachable!()),
                }
            };
            for k in 0..sig.h.saturating_sub(1) {
                run(&Perm::adjacent(sig.h, k), &ids, rep);
            }
            for (j, &i) in sig.inputs.iter().enumerate() {
                for k in 0..i.saturating_sub(1) {
                    let mut rhos = ids.clone();
                    rhos[j] = Perm::adjacent(i, k);
                    run(&Perm::identity(sig.h), &rhos, rep);
                }
            }
            if t_idx < 4 && (sig.h > 2 || sig.inputs.iter().any(|&i| i > 2)) {
                let sigma = Perm::random(sig.h, &mut rng);
                let rhos: Vec<Perm> = sig.inputs.iter().map(|&i| Perm::random(i, &mut rng)).collect();
                run(&sigma, &ids, rep);
                run(&Perm::identity(sig.h), &rhos, rep);
            }
        }
    })
}

/// Inserts `ys` one at a time by partial composition, arity-0 inputs first,
/// and returns the result with the Koszul sign of that insertion order undone.
fn iterated_partials(op: &Operad, x: usize, h: usize, ys: &[Elem]) -> Option<SparseVec> {
    let mut order: Vec<usize> = (0..h).filter(|&k| ys[k].0 == 0).collect();
    order.extend((0..h).filter(|&k| ys[k].0 > 0));
    let mut done = vec![false; h];
    let mut acc = unit_vec(op, x);
    let mut arity = h;
    for &k in &order {
        let pos: usize = (0..k).map(|l| if done[l] { ys[l].0 } else { 1 }).sum();
        acc = op.partial(&acc, arity, pos, &unit_vec(op, ys[k].1), ys[k].0).ok().flatten()?;
        arity = arity + ys[k].0 - 1;
        done[k] = true;
    }
    let degs: Vec<i32> = ys.iter().map(|&(a, i)| op.component(a).degree(i)).collect();
    Some(acc.scale(&op.field().sign(reorder_parity(&degs, &order))))
}

fn literal_associativity(op: &Operad, x: usize, ys: &[Elem], zs: &[Elem]) -> Option<(SparseVec, SparseVec)> {
    let f = op.field();
    let inner = gamma(op, x, ys)?;
    let zrefs: Vec<(usize, SparseVec)> = zs.iter().map(|&(a, i)| (a, unit_vec(op, i))).collect();
    let zr: Vec<(usize, &SparseVec)> = zrefs.iter().map(|(a, v)| (*a, v)).collect();
    let lhs = op.compose(&inner, &zr).ok().flatten()?;
    let mut parts: Vec<(usize, SparseVec)> = Vec::new();
    let mut order = Vec::new();
    let mut off = 0;
    for (k, &(a, i)) in ys.iter().enumerate() {
        order.push(k);
        order.extend((off..off + a).map(|t| ys.len() + t));
        let block = &zs[off..off + a];
        let v = if a == 0 { unit_vec(op, i) } else { gamma(op, i, block)? };
        parts.push((block.iter().map(|b| b.0).sum(), v));
        off += a;
    }
    let mut degs: Vec<i32> = ys.iter().map(|&(a, i)| op.component(a).degree(i)).collect();
    degs.extend(zs.iter().map(|&(a, i)| op.component(a).degree(i)));
    let refs: Vec<(usize, &SparseVec)> = parts.iter().map(|(a, v)| (*a, v)).collect();
    let rhs = op.compose(&unit_vec(op, x), &refs).ok().flatten()?.scale(&f.sign(reorder_parity(&degs, &order)));
    Some((lhs, rhs))
}

/// Partial-composition reduction of the associativity diagram plus seeded
/// literal spot checks.
pub fn check_associativity(op: &Operad, seed: u64) -> Report {
    let n_max = op.max_arity();
    let f = op.field();
    // γ agrees with its iterated partial compositions
    let mut rep = per_signature(op, "associativity", |sig, rep| {
        if sig.h < 2 {
            return;
        }
        let mut arities = vec![sig.h];
        arities.extend(&sig.inputs);
        let (ts, sampled) = tuples(op, &arities, TUPLE_CAP, seed);
        sampled_note(rep, sig, sampled);
        for t in ts {
            let ys: Vec<Elem> = sig.inputs.iter().zip(&t[1..]).map(|(&a, &i)| (a, i)).collect();
            match (gamma(op, t[0], &ys), iterated_partials(op, t[0], sig.h, &ys)) {
                (Some(a), Some(b)) => rep.record(a == b, || {
                    Witness::new(format!("{} vs iterated ∘_i", describe(op, sig, t[0], &ys)), op.component(sig.arity()).render(&b), op.component(sig.arity()).render(&a))
                }),
                _ => rep.skip(),
            }
        }
    });
    // sequential and parallel axioms for ∘_i
    let mut triples = Vec::new();
    for a in 1..=n_max {
        for b in 0..=n_max {
            for c in 0..=n_max {
                if a + b + c >= 2 && a + b + c - 2 <= n_max && a + b - 1 <= n_max + 1 {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let parts = par::map(&triples, |&(a, b, c)| {
        let mut r = Report::new("associativity");
        let (ts, sampled) = tuples(op, &[a, b, c], TUPLE_CAP, seed);
        if sampled {
            r.note(format!("∘_i on arities ({a},{b},{c}): seeded samples"));
        }
        for t in ts {
            let (al, be, de) = (unit_vec(op, t[0]), unit_vec(op, t[1]), unit_vec(op, t[2]));
            let (db, dd) = (op.component(b).degree(t[1]), op.component(c).degree(t[2]));
            let label = |kind: &str, i: usize, j: usize| format!("{kind} α={}, β={}, δ={}, i={}, j={}", name(op, a, t[0]), name(op, b, t[1]), name(op, c, t[2]), i + 1, j + 1);
            let n = a + b + c - 2;
            for i in 0..a {
                // (α∘_iβ)∘_{i+j}δ = α∘_i(β∘_jδ)
                for j in 0..b {
                    let lhs = op.partial(&al, a, i, &be, b).ok().flatten().and_then(|ab| op.partial(&ab, a + b - 1, i + j, &de, c).ok().flatten());
                    let rhs = op.partial(&be, b, j, &de, c).ok().flatten().and_then(|bd| op.partial(&al, a, i, &bd, b + c - 1).ok().flatten());
                    match (lhs, rhs) {
                        (Some(l), Some(rr)) => r.record(l == rr, || Witness::new(label("sequential", i, j), op.component(n).render(&rr), op.component(n).render(&l))),
                        _ => r.skip(),
                    }
                }
                // (α∘_iβ)∘_{j+b-1}δ = (-1)^{|β||δ|} (α∘_jδ)∘_iβ for i < j
                for j in i + 1..a {
                    let lhs = op.partial(&al, a, i, &be, b).ok().flatten().and_then(|ab| op.partial(&ab, a + b - 1, j + b - 1, &de, c).ok().flatten());
                    let rhs = op.partial(&al, a, j, &de, c).ok().flatten().and_then(|ad| op.partial(&ad, a + c - 1, i, &be, b).ok().flatten());
                    match (lhs, rhs) {
                        (Some(l), Some(rr)) => {
                            let rr = rr.scale(&f.sign(db as i64 * dd as i64));
                            r.record(l == rr, || Witness::new(label("parallel", i, j), op.component(n).render(&rr), op.component(n).render(&l)))
                        }
                        _ => r.skip(),
                    }
                }
            }
        }
        r
    });
    for p in parts {
        rep.absorb(p);
    }
    // literal two-level identity on seeded samples
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa550c);
    let sigs: Vec<Signature> = signatures(n_max).into_iter().filter(|s| s.arity() >= 1).collect();
    for _ in 0..SPOT_CHECKS {
        let s1 = &sigs[rng.gen_range(0..sigs.len())];
        let n = s1.arity();
        let s2_all: Vec<Signature> = signatures(n_max).into_iter().filter(|s| s.h == n).collect();
        if s2_all.is_empty() {
            continue;
        }
        let s2 = &s2_all[rng.gen_range(0..s2_all.len())];
        let dims: Vec<usize> = std::iter::once(op.dim(s1.h)).chain(s1.inputs.iter().map(|&i| op.dim(i))).chain(s2.inputs.iter().map(|&i| op.dim(i))).collect();
        if dims.contains(&0) {
            continue;
        }
        let pick: Vec<usize> = dims.iter().map(|&d| rng.gen_range(0..d)).collect();
        let ys: Vec<Elem> = s1.inputs.iter().zip(&pick[1..]).map(|(&a, &i)| (a, i)).collect();
        let zs: Vec<Elem> = s2.inputs.iter().zip(&pick[1 + s1.h..]).map(|(&a, &i)| (a, i)).collect();
        match literal_associativity(op, pick[0], &ys, &zs) {
            Some((l, r)) => {
                let m = s2.arity();
                rep.record(l == r, || Witness::new(format!("literal {} then γ{s2}", describe(op, s1, pick[0], &ys)), op.component(m).render(&r), op.component(m).render(&l)))
            }
            None => rep.skip(),
        }
    }
    rep
}

/// The two-level associativity identity on every double signature and
/// basis tuple (sampled above the tuple cap).
pub fn check_associativity_exhaustive(op: &Operad, seed: u64) -> Report {
    let n_max = op.max_arity();
    let mut pairs = Vec::new();
    for s1 in signatures(n_max) {
        if s1.arity() == 0 {
            continue;
        }
        for s2 in signatures(n_max) {
            if s2.h == s1.arity() {
                pairs.push((s1.clone(), s2));
            }
        }
    }
    let parts = par::map(&pairs, |(s1, s2)| {
        let mut r = Report::new("associativity (literal)");
        let mut arities = vec![s1.h];
        arities.extend(&s1.inputs);
        arities.extend(&s2.inputs);
        let (ts, sampled) = tuples(op, &arities, TUPLE_CAP, seed);
        if sampled {
            r.note(format!("γ{s1}∘γ{s2}: seeded samples"));
        }
        for t in ts {
            let ys: Vec<Elem> = s1.inputs.iter().zip(&t[1..]).map(|(&a, &i)| (a, i)).collect();
            let zs: Vec<Elem> = s2.inputs.iter().zip(&t[1 + s1.h..]).map(|(&a, &i)| (a, i)).collect();
            match literal_associativity(op, t[0], &ys, &zs) {
                Some((l, rr)) => {
                    let m = s2.arity();
                    r.record(l == rr, || Witness::new(format!("{} then γ{s2}", describe(op, s1, t[0], &ys)), op.component(m).render(&rr), op.component(m).render(&l)))
                }
                None => r.skip(),
            }
        }
        r
    });
    let mut rep = Report::new("associativity (literal)");
    for p in parts {
        rep.absorb(p);
    }
    rep
}

/// ∂ is a derivation of γ, and γ respects ε when every component is augmented.
pub fn check_gamma_chain_map(op: &Operad, seed: u64) -> Report {
    let f = op.field();
    per_signature(op, "γ chain map", |sig, rep| {
        let mut arities = vec![sig.h];
        arities.extend(&sig.inputs);
        let (ts, sampled) = tuples(op, &arities, TUPLE_CAP, seed);
        sampled_note(rep, sig, sampled);
        let n = sig.arity();
        let target = op.component(n);
        let augmented = arities.iter().chain(std::iter::once(&n)).all(|&a| op.component(a).augmentation().is_some());
        for t in ts {
            let ys: Vec<Elem> = sig.inputs.iter().zip(&t[1..]).map(|(&a, &i)| (a, i)).collect();
            let Some(g) = gamma(op, t[0], &ys) else {
                rep.skip();
                continue;
            };
            let lhs = target.differential().apply(&g);
            let mut acc = SparseVec::new();
            let mut defined = true;
            let yv: Vec<(usize, SparseVec)> = ys.iter().map(|&(a, i)| (a, unit_vec(op, i))).collect();
            // γ(∂x; y)
            let dx = op.component(sig.h).differential().column(t[0]).clone();
            let refs: Vec<(usize, &SparseVec)> = yv.iter().map(|(a, v)| (*a, v)).collect();
            match op.compose(&dx, &refs).ok().flatten() {
                Some(v) => acc = acc.add(&v),
                None => defined = false,
            }
            let mut deg = op.component(sig.h).degree(t[0]) as i64;
            for k in 0..sig.h {
                let (a, i) = ys[k];
                let dy = op.component(a).differential().column(i).clone();
                let mut refs: Vec<(usize, &SparseVec)> = yv.iter().map(|(a, v)| (*a, v)).collect();
                refs[k] = (a, &dy);
                match op.compose(&unit_vec(op, t[0]), &refs).ok().flatten() {
                    Some(v) => acc = acc.add_scaled(&v, &f.sign(deg)),
                    None => defined = false,
                }
                deg += op.component(a).degree(i) as i64;
            }
            if !defined {
                rep.skip();
                continue;
            }
            rep.record(lhs == acc, || Witness::new(format!("∂ on {}", describe(op, sig, t[0], &ys)), target.render(&acc), target.render(&lhs)));
            if augmented {
                let e = |a: usize, v: &SparseVec| op.component(a).augmentation().unwrap().dot(v).unwrap_or_else(|| f.zero());
                let mut prod = e(sig.h, &unit_vec(op, t[0]));
                for &(a, i) in &ys {
                    prod = &prod * &e(a, &unit_vec(op, i));
                }
                let got = e(n, &g);
                rep.record(got == prod, || Witness::new(format!("ε on {}", describe(op, sig, t[0], &ys)), prod.to_string(), got.to_string()));
            }
        }
    })
}

/// The operad's own consistency checks in one list.
pub fn check_operad(op: &Operad, seed: u64) -> Vec<Report> {
    vec![
        crate::smodule::check_right_action(op.module(), seed),
        check_unit(op),
        check_equivariance(op, seed),
        check_associativity(op, seed),
        check_gamma_chain_map(op, seed),
    ]
}

/// Unit, degree, ∂, ε, equivariance on generators, and the γ-square on every
/// signature within both truncations.
pub fn check_morphism(m: &OperadMorphism, seed: u64) -> Report {
    let (p, q) = (&m.source, &m.target);
    let f = p.field();
    let mut rep = Report::new(format!("morphism {}", m.name));
    let u = m.apply(1, p.unit());
    rep.record(u.as_ref() == Some(q.unit()), || Witness::new("f(unit)", q.component(1).render(q.unit()), render(q, 1, &u)));
    let n_max = m.max_arity();
    for n in 0..=n_max {
        let (s, t) = (p.component(n), q.component(n));
        for j in 0..s.dim() {
            let Some(col) = &m.columns[n][j] else {
                rep.skip();
                continue;
            };
            let at = |what: &str| format!("arity {n}, {what}, x={}", s.name(j));
            rep.record(col.iter().all(|(i, _)| t.degree(*i) == s.degree(j)), || Witness::new(at("degree"), "degree 0", t.render(col)));
            let lhs = t.differential().apply(col);
            let rhs = m.apply(n, s.differential().column(j));
            match rhs {
                Some(r) => rep.record(lhs == r, || Witness::new(at("∂"), t.render(&r), t.render(&lhs))),
                None => rep.skip(),
            }
            if let (Some(es), Some(et)) = (s.augmentation(), t.augmentation()) {
                let a = et.dot(col).unwrap_or_else(|| f.zero());
                let b = es.get(j).cloned().unwrap_or_else(|| f.zero());
                rep.record(a == b, || Witness::new(at("ε"), b.to_string(), a.to_string()));
            }
            for i in 0..n.saturating_sub(1) {
                let sg = Perm::adjacent(n, i);
                let lhs = m.apply(n, &p.module().act(n, &unit_vec(p, j), &sg));
                let rhs = q.module().act(n, col, &sg);
                match lhs {
                    Some(l) => rep.record(l == rhs, || Witness::new(at(&format!("σ={sg}")), t.render(&rhs), t.render(&l))),
                    None => rep.skip(),
                }
            }
        }
    }
    let sigs: Vec<Signature> = signatures(n_max);
    let parts = par::map(&sigs, |sig| {
        let mut r = Report::new("γ-square");
        let mut arities = vec![sig.h];
        arities.extend(&sig.inputs);
        let (ts, sampled) = tuples(p, &arities, TUPLE_CAP, seed);
        sampled_note(&mut r, sig, sampled);
        let n = sig.arity();
        for t in ts {
            let ys: Vec<Elem> = sig.inputs.iter().zip(&t[1..]).map(|(&a, &i)| (a, i)).collect();
            let lhs = gamma(p, t[0], &ys).and_then(|g| m.apply(n, &g));
            let fx = m.columns[sig.h][t[0]].clone();
            let fys: Option<Vec<(usize, SparseVec)>> = ys.iter().map(|&(a, i)| m.columns[a][i].clone().map(|v| (a, v))).collect();
            let rhs = match (fx, fys) {
                (Some(fx), Some(fys)) => {
                    let refs: Vec<(usize, &SparseVec)> = fys.iter().map(|(a, v)| (*a, v)).collect();
                    q.compose(&fx, &refs).ok().flatten()
                }
                _ => None,
            };
            match (lhs, rhs) {
                (Some(l), Some(rr)) => r.record(l == rr, || Witness::new(describe(p, sig, t[0], &ys), q.component(n).render(&rr), q.component(n).render(&l))),
                _ => r.skip(),
            }
        }
        r
    });
    for part in parts {
        rep.absorb(part);
    }
    rep
}
