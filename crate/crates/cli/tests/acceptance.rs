//! One line per acceptance criterion. Runs at the default profile (F101,
//! arity ≤ 4, degrees −2..2, at most 3 vertices) unless a line says otherwise.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::{binary, dense_columns, dense_quotient, prof, F};
use opcalc_core::colimit::{
    check_diagonal_final, check_tensor_coeq_iso, check_well_defined, cocone_factorization, compare_free_coproduct, coproduct, reflexive_coequalizer_data, DgPair,
    ReflexivePair,
};
use opcalc_core::dsl;
use opcalc_core::free::{check_triangular, free_on_morphism, FreeOperad};
use opcalc_core::graded::GradedSpace;
use opcalc_core::linalg::{Matrix, SparseVec};
use opcalc_core::operad::{check_associativity, check_equivariance, check_morphism, check_unit, compose_morphisms, Operad, OperadMorphism, TruncationProfile};
use opcalc_core::smodule::{SModule, SModuleMap};
use opcalc_core::zoo::{augmentation_m_to_n, commutative_algebra, operad_end, operad_m, operad_n, random_split_algebra, reduced, reversal_m, EndSign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn default_profile() -> TruncationProfile {
    TruncationProfile::default()
}

fn end(degrees: &[i32], p: TruncationProfile) -> Operad {
    operad_end(&GradedSpace::from_degrees(F, "e", degrees), p, EndSign::Koszul).unwrap()
}

fn axioms() -> Outcome {
    let p = default_profile();
    let ops = [operad_n(F, p).unwrap(), operad_m(F, p).unwrap(), end(&[0, 0], p), end(&[0, 1], p)];
    let mut checked = 0;
    for op in &ops {
        for r in [check_associativity(op, 0), check_unit(op), check_equivariance(op, 0)] {
            ensure(r.passed, || format!("{} {}: {:?}", op.name, r.check, r.first_failure()))?;
            checked += r.checked;
        }
    }
    Ok(format!("N, M, End(F²), End(F⊕F[1]); {checked} instances"))
}

fn morphisms() -> Outcome {
    let p = default_profile();
    let n = Arc::new(operad_n(F, p).unwrap());
    let m = Arc::new(operad_m(F, p).unwrap());
    let e = Arc::new(end(&[0, 0], p));
    for op in [&n, &m, &e] {
        let r = check_morphism(&OperadMorphism::identity(op.clone()), 0);
        ensure(r.passed, || format!("identity on {}", op.name))?;
    }
    ensure(check_morphism(&augmentation_m_to_n(m.clone(), n.clone()).unwrap(), 0).passed, || "augmentation M → N rejected".into())?;
    // γ(σ; ρ_1, ρ_2) for arity 3 changed in one entry
    let bad = Arc::new(m.patched(vec![((0, vec![(2, 0), (1, 0)]), SparseVec::unit(1, F))]));
    let corrupted = OperadMorphism::from_fn("id into corrupted M", m.clone(), bad, |_, b| Some(SparseVec::unit(b, F))).unwrap();
    let r = check_morphism(&corrupted, 0);
    let w = r.first_failure().ok_or("corrupted γ accepted")?.clone();
    let twice = OperadMorphism::from_fn("2·aug", m.clone(), n.clone(), |_, _| Some(SparseVec::single(0, F.from_i64(2)))).unwrap();
    let r2 = check_morphism(&twice, 0);
    let w2 = r2.first_failure().ok_or("unit-violating map accepted")?.clone();
    ensure(w2.at == "f(unit)", || format!("unexpected witness {}", w2.at))?;
    Ok(format!("corrupted γ caught at {}; unit violation caught at {}", w.at, w2.at))
}

fn triangular() -> Outcome {
    let p = default_profile();
    let mut checked = 0;
    for kind in ["trivial", "regular"] {
        let x = Arc::new(binary("mu", kind, 0, p.max_arity));
        for op in [operad_n(F, p).unwrap(), operad_m(F, p).unwrap()] {
            let name = op.name.clone();
            let t = check_triangular(x.clone(), Arc::new(op), p).map_err(|e| e.to_string())?;
            ensure(t.passed(), || format!("{kind} X, P = {name}: {:?} {:?}", t.free_side.first_failure(), t.module_side.first_failure()))?;
            checked += t.free_side.checked + t.module_side.checked;
        }
    }
    Ok(format!("X binary trivial and regular, P ∈ {{N, M}}; {checked} basis vectors"))
}

fn sum(parts: &[&SModule]) -> SModule {
    SModule::direct_sum(F, parts, None).unwrap()
}

/// The Σ-map sending the arity-2 generators of `source` to `images`.
fn arity2_map(source: &Arc<SModule>, target: &Arc<SModule>, images: &[SparseVec]) -> SModuleMap {
    let k = source.max_arity().min(target.max_arity());
    let maps = (0..=k)
        .map(|n| if n == 2 { Matrix::from_columns(F, target.component(2).dim(), images.to_vec()) } else { Matrix::zero(F, target.component(n).dim(), source.component(n).dim()) })
        .collect();
    SModuleMap::new(source.clone(), target.clone(), maps).unwrap()
}

fn v(pairs: &[(usize, i64)]) -> SparseVec {
    SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, F.from_i64(c))))
}

/// F(X ⊕ Z) ⇉ F(X) for X regular on mu, mu': both arrows fix X, and send the
/// generators of Z to `f_img` and `g_img`. The section is F of the inclusion.
fn free_pair(z: SModule, f_img: &[SparseVec], g_img: &[SparseVec], p: TruncationProfile) -> ReflexivePair {
    let x = binary("mu", "regular", 0, p.max_arity);
    let fxz = FreeOperad::new(Arc::new(sum(&[&x, &z])), p).unwrap();
    let fx = FreeOperad::new(Arc::new(x), p).unwrap();
    let to_x = |img: &[SparseVec]| {
        let images: Vec<SparseVec> = [v(&[(0, 1)]), v(&[(1, 1)])].into_iter().chain(img.iter().cloned()).collect();
        arity2_map(fxz.x(), fx.x(), &images)
    };
    let f = free_on_morphism(&to_x(f_img), &fxz, &fx).unwrap();
    let g = free_on_morphism(&to_x(g_img), &fxz, &fx).unwrap();
    let s = free_on_morphism(&arity2_map(fx.x(), fxz.x(), &[v(&[(0, 1)]), v(&[(1, 1)])]), &fx, &fxz).unwrap();
    ReflexivePair::new(f, g, s).unwrap()
}

fn reflexive_pairs() -> Outcome {
    let p = default_profile();
    let small = prof(3, 3);
    let m = Arc::new(operad_m(F, p).unwrap());
    let id_m = OperadMorphism::identity(m.clone());
    let mp = Arc::new(reduced(Arc::new(operad_m(F, small).unwrap())).unwrap());
    let c = coproduct(&[mp.clone(), mp.clone()], small).unwrap();
    let id_mp = OperadMorphism::identity(mp.clone());
    let mixed = cocone_factorization(&c, &[id_mp.clone(), reversal_m(mp.clone()).unwrap()]).unwrap();
    let fold = cocone_factorization(&c, &[id_mp.clone(), id_mp.clone()]).unwrap();
    let pairs = vec![
        ("id, id on M", ReflexivePair::new(id_m.clone(), id_m.clone(), id_m).unwrap()),
        ("F(X⊕Z), Z trivial, z ↦ mu+mu' vs 0", free_pair(binary("z", "trivial", 0, 4), &[v(&[(0, 1), (1, 1)])], &[SparseVec::new()], p)),
        ("F(X⊕Z), Z sign, z ↦ mu−mu' vs 0", free_pair(binary("z", "sign", 0, 4), &[v(&[(0, 1), (1, -1)])], &[SparseVec::new()], p)),
        ("F(X⊕Z), Z regular, z ↦ mu vs mu'", free_pair(binary("z", "regular", 0, 4), &[v(&[(0, 1)]), v(&[(1, 1)])], &[v(&[(1, 1)]), v(&[(0, 1)])], p)),
        ("M+⊔M+, [id, rev] vs fold", ReflexivePair::new(mixed, fold, c.edges[0].clone()).unwrap()),
    ];
    let mut dims = Vec::new();
    for (label, pair) in &pairs {
        let (o, q, data) = reflexive_coequalizer_data(pair).map_err(|e| format!("{label}: {e}"))?;
        for n in 0..=o.max_arity() {
            let (fm, gm) = (pair.f.matrix(n).unwrap(), pair.g.matrix(n).unwrap());
            let diffs: Vec<SparseVec> = (0..pair.f.source.dim(n)).map(|j| fm.column(j).sub(gm.column(j))).collect();
            let (reps, proj) = dense_quotient(F, pair.f.target.dim(n), &diffs);
            ensure(o.dim(n) == reps.len(), || format!("{label}: arity {n} has dim {} but the oracle gives {}", o.dim(n), reps.len()))?;
            ensure(dense_columns(&q.matrix(n).unwrap()) == proj, || format!("{label}: projection differs in arity {n}"))?;
        }
        let wd = check_well_defined(&data, 0);
        ensure(wd.passed, || format!("{label}: {:?}", wd.first_failure()))?;
        let via_p = pair.f.apply(1, pair.f.source.unit()).and_then(|u| q.apply(1, &u));
        ensure(via_p.as_ref() == Some(o.unit()), || format!("{label}: unit choices differ"))?;
        dims.push(format!("{:?}", o.dims()));
    }
    Ok(format!("5 pairs, dims {}", dims.join(" ")))
}

fn tensor_coequalizers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances: Vec<Vec<DgPair>> = Vec::new();
    for k in [2, 2, 3, 3] {
        instances.push((0..k).map(|_| DgPair::random(F, &mut rng, 3)).collect());
    }
    let d = DgPair::with_differential(F, 3);
    instances.push(vec![d.clone(), DgPair::random(F, &mut rng, 2), d]);
    for (i, pairs) in instances.iter().enumerate() {
        let r = check_tensor_coeq_iso(pairs).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("instance {i}: {:?}", r.first_failure()))?;
    }
    Ok("2 two-factor and 3 three-factor instances, one with nonzero differentials".into())
}

fn diagonal() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        let r = check_diagonal_final(n);
        ensure(r.passed, || format!("n = {n}: {:?}", r.first_failure()))?;
        checked += r.checked;
    }
    Ok(format!("n = 2, 3; {checked} instances"))
}

fn free_coproducts() -> Outcome {
    let p = default_profile();
    let instances = [
        (binary("x", "trivial", 0, 4), binary("y", "sign", 1, 4)),
        (binary("x", "regular", 0, 4), binary("y", "trivial", -1, 4)),
    ];
    let mut dims = Vec::new();
    for (x, y) in instances {
        let direct = FreeOperad::new(Arc::new(sum(&[&x, &y])), p).unwrap();
        let (phi, c, rep) = compare_free_coproduct(&[Arc::new(x), Arc::new(y)], p).map_err(|e| e.to_string())?;
        ensure(rep.passed, || format!("{:?}", rep.first_failure()))?;
        ensure(check_morphism(&phi, 0).passed, || "comparison map is not a morphism".into())?;
        ensure(c.operad.dims() == direct.operad.dims(), || format!("{:?} vs {:?}", c.operad.dims(), direct.operad.dims()))?;
        dims.push(format!("{:?}", c.operad.dims()));
    }
    Ok(format!("dims {}", dims.join(" ")))
}

fn universal_property() -> Outcome {
    // constants let a vertex of N ⊔ N carry up to N + D − 1 inputs
    let p = prof(3, 3);
    let wide = prof(5, 3);
    let n = Arc::new(operad_n(F, wide).unwrap());
    let c = coproduct(&[n.clone(), n.clone()], p).unwrap();
    let space = GradedSpace::from_degrees(F, "v", &[0, 0]);
    let target = Arc::new(operad_end(&space, wide, EndSign::Koszul).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cocone: Vec<OperadMorphism> = (0..2)
        .map(|_| {
            let (mult, unit) = random_split_algebra(F, 2, &mut rng);
            commutative_algebra(n.clone(), target.clone(), &space, &mult, &unit).unwrap()
        })
        .collect();
    let h = cocone_factorization(&c, &cocone).map_err(|e| e.to_string())?;
    ensure(check_morphism(&h, 0).passed, || "h is not a morphism".into())?;
    for (e, t) in c.edges.iter().zip(&cocone) {
        ensure(compose_morphisms(&h, e).unwrap().agrees_with(t), || format!("h∘{} differs from the cocone", e.name))?;
    }
    // a commutative, non-associative product
    let mult = vec![vec![v(&[(1, 1)]), v(&[(0, 1)])], vec![v(&[(0, 1)]), v(&[(0, 1)])]];
    let bad = commutative_algebra(n.clone(), target.clone(), &space, &mult, &v(&[(0, 1)])).unwrap();
    let err = cocone_factorization(&c, &[cocone[0].clone(), bad]).err().ok_or("perturbed cocone accepted")?;
    Ok(format!("N⊔N → End(F²) at arity ≤ 3; perturbed cocone rejected: {err}"))
}

/// Parenthesized words in 1..n modulo swapping and reassociating, by union-find.
fn commutative_associative_classes(n: usize) -> usize {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum W {
        L(usize),
        M(Box<W>, Box<W>),
    }
    fn words(labels: &[usize]) -> Vec<W> {
        if labels.len() == 1 {
            return vec![W::L(labels[0])];
        }
        let mut out = Vec::new();
        for mask in 1..(1u32 << labels.len()) - 1 {
            let (a, b): (Vec<usize>, Vec<usize>) = labels.iter().enumerate().fold((vec![], vec![]), |(mut a, mut b), (i, &l)| {
                if mask >> i & 1 == 1 {
                    a.push(l)
                } else {
                    b.push(l)
                }
                (a, b)
            });
            for x in words(&a) {
                for y in words(&b) {
                    out.push(W::M(Box::new(x.clone()), Box::new(y)));
                }
            }
        }
        out
    }
    fn moves(w: &W) -> Vec<W> {
        let W::M(a, b) = w else { return vec![] };
        let mut out = vec![W::M(b.clone(), a.clone())];
        if let W::M(x, y) = &**a {
            out.push(W::M(x.clone(), Box::new(W::M(y.clone(), b.clone()))));
        }
        out.extend(moves(a).into_iter().map(|m| W::M(Box::new(m), b.clone())));
        out.extend(moves(b).into_iter().map(|m| W::M(a.clone(), Box::new(m))));
        out
    }
    let all = words(&(1..=n).collect::<Vec<_>>());
    let index: HashMap<&W, usize> = all.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, w) in all.iter().enumerate() {
        for m in moves(w) {
            let j = index[&m];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..all.len()).filter(|&i| find(&mut parent, i) == i).count()
}

fn associative_presentation() -> Outcome {
    let src = "field F101;\ngen mu : arity 2, degree 0;\nrel mu(1,mu(2,3)) - mu(mu(1,2),3);\n";
    let pres = dsl::parse(src).map_err(|d| d.to_string())?;
    let built = dsl::build(&pres, F, default_profile()).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = (1..=4).map(|n| built.operad.dim(n)).collect();
    let oracle: Vec<usize> = (1..=4).map(commutative_associative_classes).collect();
    ensure(dims == vec![1, 1, 1, 1] && dims == oracle, || format!("dims {dims:?}, oracle {oracle:?}"))?;
    Ok(format!("dims {dims:?} at arities 1..4, oracle {oracle:?}"))
}

fn opcalc(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_opcalc")).args(args).output().expect("opcalc runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn determinism() -> Outcome {
    let (out, code) = opcalc(&["dims", "builtin:N", "--max-arity", "5", "--format", "json"]);
    let expected = "{\"dims\": {\"0\":1,\"1\":1,\"2\":1,\"3\":1,\"4\":1,\"5\":1}}\n";
    ensure(code == 0 && out == expected.as_bytes(), || format!("got {:?} (exit {code})", String::from_utf8_lossy(&out)))?;
    let dir = std::env::temp_dir().join(format!("opcalc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let assoc = dir.join("assoc.op");
    std::fs::write(&assoc, "gen mu : arity 2, degree 0, action regular;\nrel mu(1,mu(2,3)) - mu(mu(1,2),3);\n").unwrap();
    let assoc = assoc.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", "builtin:M", "builtin:End(0,1)", "--seed", "3", "--max-arity", "3"],
        vec!["dims", assoc, "--max-arity", "3"],
        vec!["free", assoc, "--max-arity", "3"],
        vec!["coprod", "builtin:N", "builtin:N", "--max-arity", "2", "--max-depth", "3"],
        vec!["coeq", "id:builtin:M", "rev:builtin:M", "--max-arity", "3"],
        vec!["pushout", "aug:builtin:M+", "aug:builtin:M+", "--max-arity", "3"],
        vec!["colim", "builtin:M+", "builtin:M+", "--arrow", "0:1:rev", "--max-arity", "3"],
        vec!["morphism-check", "aug:builtin:M", "--seed", "7"],
        vec!["triangular-check", assoc, "builtin:N", "--max-arity", "3"],
    ];
    for args in &runs {
        for format in ["json", "table"] {
            let a: Vec<&str> = args.iter().copied().chain(["--format", format]).collect();
            let (first, c1) = opcalc(&a);
            let (second, c2) = opcalc(&a);
            ensure(c1 == 0 && c2 == 0, || format!("`opcalc {}` exited {c1}, {c2}", a.join(" ")))?;
            ensure(first == second, || format!("`opcalc {}` is not byte-stable", a.join(" ")))?;
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("exact dims JSON; {} commands byte-stable in both formats", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suite", axioms),
        ("morphism suite", morphisms),
        ("triangle identities", triangular),
        ("reflexive coequalizers against the row-reduction oracle", reflexive_pairs),
        ("tensor products preserve reflexive coequalizers", tensor_coequalizers),
        ("diagonal finality", diagonal),
        ("F(X⊕Y) ≅ F(X)⊔F(Y)", free_coproducts),
        ("universal property of the coproduct", universal_property),
        ("associative presentation", associative_presentation),
        ("CLI determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
