//! Permutations in one-line notation.
//!
//! Stored 0-based; displayed and parsed 1-based as `[a,b,c]`.
//! The product `tau * sigma` applies `tau` first: `(tau*sigma)(k) = sigma(tau(k))`,
//! which matches right actions `x·(tau sigma) = (x·tau)·sigma`.

use std::fmt;
use std::ops::Mul;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Permutation(format!("{images:?} is not a bijection of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(line: &[usize]) -> Result<Perm> {
        if line.contains(&0) {
            return Err(Error::Permutation(format!("{line:?}: one-line notation is 1-based")));
        }
        Perm::from_images(line.iter().map(|x| x - 1).collect())
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Function composition `self ∘ other` (apply `other` first).
    pub fn after(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&k| self.0[k]).collect())
    }

    /// Adjacent transposition swapping `i` and `i+1` (0-based) in Σ_n.
    pub fn adjacent(n: usize, i: usize) -> Perm {
        assert!(i + 1 < n);
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, i + 1);
        Perm(v)
    }

    pub fn inversions(&self) -> usize {
        let mut c = 0;
        for a in 0..self.0.len() {
            for b in a + 1..self.0.len() {
                if self.0[a] > self.0[b] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self, field: Field) -> Scalar {
        field.sign(self.inversions() as i64)
    }

    /// Word `[b1, ..., bk]` of adjacent transpositions with
    /// `self = s_{b1} * s_{b2} * ... * s_{bk}` (so `s_{b1}` acts first).
    pub fn adjacent_word(&self) -> Vec<usize> {
        // bubble sort the one-line list: self ∘ s_{b1} ∘ ... ∘ s_{bk} = id
        let mut line = self.0.clone();
        let mut word = Vec::new();
        let n = line.len();
        for pass in 0..n {
            let mut swapped = false;
            for i in 0..n.saturating_sub(1 + pass) {
                if line[i] > line[i + 1] {
                    line.swap(i, i + 1);
                    word.push(i);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word
    }

    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
            if cur.len() == n {
                out.push(Perm(cur.clone()));
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Perm {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            v.swap(i, j);
        }
        Perm(v)
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        rhs.after(self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The block permutation σ(i₁,…,i_h): block `j` (length `lens[j]`, consecutive
/// in input order) lands intact in slot `σ(j)`. The result maps each letter to
/// its new position.
pub fn block_permutation(sigma: &Perm, lens: &[usize]) -> Result<Perm> {
    let h = sigma.len();
    if lens.len() != h {
        return Err(Error::Permutation(format!("{} blocks for a permutation of {h}", lens.len())));
    }
    let mut start_in = Vec::with_capacity(h);
    let mut acc = 0;
    for &l in lens {
        start_in.push(acc);
        acc += l;
    }
    let inv = sigma.inverse();
    let mut start_out = vec![0; h];
    let mut pos = 0;
    for slot in 0..h {
        let j = inv.apply(slot);
        start_out[j] = pos;
        pos += lens[j];
    }
    let mut img = vec![0; acc];
    for j in 0..h {
        for t in 0..lens[j] {
            img[start_in[j] + t] = start_out[j] + t;
        }
    }
    Ok(Perm(img))
}

/// τ₁ ⊕ … ⊕ τ_h acting blockwise.
pub fn direct_sum(parts: &[Perm]) -> Perm {
    let mut img = Vec::new();
    let mut off = 0;
    for p in parts {
        img.extend(p.0.iter().map(|x| x + off));
        off += p.len();
    }
    Perm(img)
}
