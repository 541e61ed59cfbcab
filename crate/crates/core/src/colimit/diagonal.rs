//! Finality of the diagonal 𝒟₀ → 𝒟₀ⁿ, where 𝒟₀ is the walking reflexive pair
//! `i, j : 1 → 0`, `s : 0 → 1`, `i∘s = j∘s = 1`.

use crate::report::{Report, Witness};

/// Objects 0 and 1; morphisms as indices into [`MORPHISMS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mor {
    name: &'static str,
    src: usize,
    tgt: usize,
}

const MORPHISMS: [Mor; 7] = [
    Mor { name: "1_0", src: 0, tgt: 0 },
    Mor { name: "1_1", src: 1, tgt: 1 },
    Mor { name: "i", src: 1, tgt: 0 },
    Mor { name: "j", src: 1, tgt: 0 },
    Mor { name: "s", src: 0, tgt: 1 },
    Mor { name: "si", src: 1, tgt: 1 },
    Mor { name: "sj", src: 1, tgt: 1 },
];

fn identity(obj: usize) -> usize {
    obj
}

/// `b ∘ a` (apply `a` first).
fn compose(b: usize, a: usize) -> usize {
    let (ma, mb) = (MORPHISMS[a], MORPHISMS[b]);
    assert_eq!(ma.tgt, mb.src, "{} ∘ {} is not composable", mb.name, ma.name);
    match (mb.name, ma.name) {
        (_, "1_0") | (_, "1_1") => b,
        ("1_0", _) | ("1_1", _) => a,
        ("i", "s") | ("j", "s") => 0,
        ("s", "i") => 5,
        ("s", "j") => 6,
        // s x s = s and x s y = y for x ∈ {i, j}
        ("si", "s") | ("sj", "s") => 4,
        ("i", "si") | ("j", "si") => 2,
        ("i", "sj") | ("j", "sj") => 3,
        ("si", "si") | ("sj", "si") => 5,
        ("si", "sj") | ("sj", "sj") => 6,
        _ => unreachable!("{} ∘ {}", mb.name, ma.name),
    }
}

fn hom(src: usize, tgt: usize) -> Vec<usize> {
    (0..MORPHISMS.len()).filter(|&k| MORPHISMS[k].src == src && MORPHISMS[k].tgt == tgt).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Checks the category axioms of 𝒟₀ and that every comma category
/// `X ↓ Δ`, X ∈ 𝒟₀ⁿ, is nonempty and connected.
pub fn check_diagonal_final(n: usize) -> Report {
    let mut rep = Report::new(format!("diagonal 𝒟₀ → 𝒟₀^{n} is final"));
    // associativity and units
    for a in 0..MORPHISMS.len() {
        let (s, t) = (MORPHISMS[a].src, MORPHISMS[a].tgt);
        rep.record(compose(identity(t), a) == a && compose(a, identity(s)) == a, || Witness::new(MORPHISMS[a].name, "unital", "not unital"));
        for b in hom(t, 0).into_iter().chain(hom(t, 1)) {
            for c in hom(MORPHISMS[b].tgt, 0).into_iter().chain(hom(MORPHISMS[b].tgt, 1)) {
                rep.record(compose(c, compose(b, a)) == compose(compose(c, b), a), || {
                    Witness::new(format!("{}, {}, {}", MORPHISMS[c].name, MORPHISMS[b].name, MORPHISMS[a].name), "associative", "not associative")
                });
            }
        }
    }
    for x in 0..(1usize << n) {
        let obj: Vec<usize> = (0..n).map(|k| (x >> k) & 1).collect();
        // comma objects (d, u_1, …, u_n) with u_k : x_k → d
        let mut nodes: Vec<(usize, Vec<usize>)> = Vec::new();
        for d in 0..2 {
            let mut tuples: Vec<Vec<usize>> = vec![vec![]];
            for &xk in &obj {
                tuples = tuples.into_iter().flat_map(|t| hom(xk, d).into_iter().map(move |m| [t.clone(), vec![m]].concat())).collect();
            }
            nodes.extend(tuples.into_iter().map(|t| (d, t)));
        }
        let label = format!("({})", obj.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","));
        if nodes.is_empty() {
            rep.fail(Witness::new(label, "nonempty comma category", "empty"));
            continue;
        }
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        for (k, (d, u)) in nodes.iter().enumerate() {
            for e in 0..2 {
                for h in hom(*d, e) {
                    let image: Vec<usize> = u.iter().map(|&m| compose(h, m)).collect();
                    let target = nodes.iter().position(|(d2, u2)| *d2 == e && *u2 == image).expect("closed under Δh");
                    let (a, b) = (find(&mut parent, k), find(&mut parent, target));
                    parent[a] = b;
                }
            }
        }
        let roots = (0..nodes.len()).filter(|&k| find(&mut parent, k) == k).count();
        rep.record(roots == 1, || Witness::new(label, "connected comma category", format!("{roots} components")));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_final() {
        for n in 1..=3 {
            let r = check_diagonal_final(n);
            assert!(r.passed, "{:?}", r.failures);
        }
    }

    #[test]
    fn seven_morphisms() {
        assert_eq!(MORPHISMS.len(), 7);
        assert_eq!(hom(1, 1).len(), 3);
        assert_eq!(hom(0, 0).len(), 1);
    }
}
