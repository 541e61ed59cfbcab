//! Truncated free operads on Σ-modules, spanned by leaf-labeled trees.
//!
//! A tree with children `S_1, …, S_k` under a vertex labeled `y` is kept in
//! normal form: children ordered by their smallest leaf label, leafless
//! children last (ordered structurally). Reordering children to normal form
//! acts on the vertex label: `node(y; S) = κ · node(y·σ⁻¹; S_σ(1), …, S_σ(k))`
//! with κ the Koszul sign of the reordering. Identical leafless siblings leave
//! residual relations, removed by row reduction.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::Result;
use crate::graded::{BasisElem, GradedSpace};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::operad::{Composer, Elem, Operad, TruncationProfile};
use crate::par;
use crate::perm::Perm;
use crate::scalar::{reorder_parity, Field, Scalar};
use crate::smodule::SModule;

pub mod adjunction;

pub use adjunction::{
    check_triangular, epsilon_counit, eta_unit, evaluate, free_on_morphism, theta, theta_inverse, TriangularReport,
};

/// Basis element `index` of X(arity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub arity: usize,
    pub index: usize,
}

/// Leaves carry 0-based labels; they print 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    Node(Gen, Vec<Tree>),
}

impl Tree {
    pub fn corolla(g: Gen) -> Tree {
        Tree::Node(g, (0..g.arity).map(Tree::Leaf).collect())
    }

    pub fn vertices(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }

    /// Leaf labels in planar order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, ch) => ch.iter().map(|c| c.arity()).sum(),
        }
    }

    pub fn min_leaf(&self) -> Option<usize> {
        match self {
            Tree::Leaf(l) => Some(*l),
            Tree::Node(_, ch) => ch.iter().filter_map(|c| c.min_leaf()).min(),
        }
    }

    /// Vertex labels in preorder.
    pub fn preorder(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.collect_preorder(&mut out);
        out
    }

    fn collect_preorder(&self, out: &mut Vec<Gen>) {
        if let Tree::Node(g, ch) = self {
            out.push(*g);
            ch.iter().for_each(|c| c.collect_preorder(out));
        }
    }

    pub fn degree(&self, x: &SModule) -> i32 {
        self.preorder().iter().map(|g| x.component(g.arity).degree(g.index)).sum()
    }

    pub fn map_leaves(&self, f: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(g, ch) => Tree::Node(*g, ch.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    /// Replaces the label of the `k`-th vertex in preorder.
    fn with_vertex(&self, k: usize, g2: Gen) -> Tree {
        fn rec(t: &Tree, k: usize, g2: Gen, seen: &mut usize) -> Tree {
            match t {
                Tree::Leaf(_) => t.clone(),
                Tree::Node(g, ch) => {
                    let here = *seen == k;
                    *seen += 1;
                    let ch2 = ch.iter().map(|c| rec(c, k, g2, seen)).collect();
                    Tree::Node(if here { g2 } else { *g }, ch2)
                }
            }
        }
        rec(self, k, g2, &mut 0)
    }

    pub fn display(&self, x: &SModule) -> String {
        match self {
            Tree::Leaf(l) => (l + 1).to_string(),
            Tree::Node(g, ch) => {
                let parts: Vec<String> = ch.iter().map(|c| c.display(x)).collect();
                format!("{}({})", x.component(g.arity).name(g.index), parts.join(","))
            }
        }
    }
}

fn child_key(t: &Tree) -> (bool, usize, Option<&Tree>) {
    match t.min_leaf() {
        Some(m) => (false, m, None),
        None => (true, 0, Some(t)),
    }
}

pub type Combination = Vec<(Tree, Scalar)>;

fn collect(field: Field, terms: impl IntoIterator<Item = (Tree, Scalar)>) -> Combination {
    let mut acc: BTreeMap<Tree, Scalar> = BTreeMap::new();
    for (t, c) in terms {
        let e = acc.entry(t).or_insert_with(|| field.zero());
        *e = &*e + &c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Normal form of a tree as a combination of normal trees.
pub fn normalize(x: &SModule, t: &Tree) -> Combination {
    let field = x.field();
    match t {
        Tree::Leaf(_) => vec![(t.clone(), field.one())],
        Tree::Node(g, ch) => {
            let kids: Vec<Combination> = ch.iter().map(|c| normalize(x, c)).collect();
            let mut out = Vec::new();
            let mut choice = vec![0usize; kids.len()];
            if kids.iter().any(|k| k.is_empty()) {
                return Vec::new();
            }
            loop {
                let mut c = field.one();
                let picked: Vec<Tree> = choice
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| {
                        c = &c * &kids[j][i].1;
                        kids[j][i].0.clone()
                    })
                    .collect();
                let mut order: Vec<usize> = (0..picked.len()).collect();
                order.sort_by(|&a, &b| child_key(&picked[a]).cmp(&child_key(&picked[b])));
                let degs: Vec<i32> = picked.iter().map(|p| p.degree(x)).collect();
                c = &c * &field.sign(reorder_parity(&degs, &order));
                let sigma = Perm::from_images(order.clone()).expect("sort order");
                let label = if g.arity >= 2 { x.act(g.arity, &SparseVec::unit(g.index, field), &sigma.inverse()) } else { SparseVec::unit(g.index, field) };
                let sorted: Vec<Tree> = order.iter().map(|&i| picked[i].clone()).collect();
                for (idx, d) in label.iter() {
                    out.push((Tree::Node(Gen { arity: g.arity, index: *idx }, sorted.clone()), &c * d));
                }
                // next choice
                let mut j = 0;
                loop {
                    if j == choice.len() {
                        return collect(field, out);
                    }
                    choice[j] += 1;
                    if choice[j] < kids[j].len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
            }
        }
    }
}

/// γ(T; S_1, …, S_h) as a planar tree, with the Koszul sign of moving the
/// vertex labels of the S_j into preorder position. Leaf `j` of `T` receives
/// `S_j`, whose labels are shifted past those of `S_1, …, S_{j-1}`.
pub fn graft(x: &SModule, t: &Tree, subs: &[Tree]) -> (Tree, Scalar) {
    let mut offsets = Vec::with_capacity(subs.len());
    let mut acc = 0;
    for s in subs {
        offsets.push(acc);
        acc += s.arity();
    }
    let tv = t.vertices();
    let mut starts = Vec::with_capacity(subs.len());
    let mut acc = tv;
    for s in subs {
        starts.push(acc);
        acc += s.vertices();
    }
    let mut degs: Vec<i32> = t.preorder().iter().map(|g| x.component(g.arity).degree(g.index)).collect();
    for s in subs {
        degs.extend(s.preorder().iter().map(|g| x.component(g.arity).degree(g.index)));
    }
    let mut order = Vec::with_capacity(degs.len());
    let mut seen = 0;
    fn rec(t: &Tree, subs: &[Tree], offsets: &[usize], starts: &[usize], seen: &mut usize, order: &mut Vec<usize>) -> Tree {
        match t {
            Tree::Leaf(j) => {
                let s = subs[*j].map_leaves(&|l| l + offsets[*j]);
                order.extend(starts[*j]..starts[*j] + s.vertices());
                s
            }
            Tree::Node(g, ch) => {
                order.push(*seen);
                *seen += 1;
                Tree::Node(*g, ch.iter().map(|c| rec(c, subs, offsets, starts, seen, order)).collect())
            }
        }
    }
    let out = rec(t, subs, &offsets, &starts, &mut seen, &mut order);
    (out, x.field().sign(reorder_parity(&degs, &order)))
}

/// Normal trees on labels `0..m` with between 1 and `budget` vertices.
struct Enumerator<'a> {
    x: &'a SModule,
    memo: HashMap<(usize, usize), Vec<Tree>>,
}

fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    // blocks ordered by their minimum
    let mut out = vec![Vec::<Vec<usize>>::new()];
    for e in 0..m {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(e);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![e]);
            next.push(q);
        }
        out = next;
    }
    out
}

impl<'a> Enumerator<'a> {
    fn trees(&mut self, m: usize, budget: usize) -> Vec<Tree> {
        if budget == 0 {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(&(m, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for k in 0..=self.x.max_arity() {
            let dk = self.x.component(k).dim();
            if dk == 0 {
                continue;
            }
            let mut shapes = Vec::new();
            for part in set_partitions(m) {
                if part.len() > k {
                    continue;
                }
                self.children(&part, k - part.len(), budget - 1, &mut shapes);
            }
            for idx in 0..dk {
                for ch in &shapes {
                    out.push(Tree::Node(Gen { arity: k, index: idx }, ch.clone()));
                }
            }
        }
        self.memo.insert((m, budget), out.clone());
        out
    }

    /// Child lists: one child per block (in block order), then `extra`
    /// leafless children in nondecreasing order; at most `budget` vertices in total.
    fn children(&mut self, blocks: &[Vec<usize>], extra: usize, budget: usize, out: &mut Vec<Vec<Tree>>) {
        let mut partial: Vec<(Vec<Tree>, usize)> = vec![(Vec::new(), 0)];
        for b in blocks {
            let mut options: Vec<Tree> = Vec::new();
            if b.len() == 1 {
                options.push(Tree::Leaf(b[0]));
            }
            for t in self.trees(b.len(), budget) {
                options.push(t.map_leaves(&|l| b[l]));
            }
            let mut next = Vec::new();
            for (p, used) in &partial {
                for o in &options {
                    let v = used + o.vertices();
                    if v <= budget {
                        let mut q = p.clone();
                        q.push(o.clone());
                        next.push((q, v));
                    }
                }
            }
            partial = next;
        }
        if extra == 0 {
            out.extend(partial.into_iter().map(|(p, _)| p));
            return;
        }
        let mut leafless = self.trees(0, budget);
        leafless.sort();
        for (p, used) in partial {
            let mut stack: Vec<(Vec<Tree>, usize, usize)> = vec![(p, used, 0)];
            while let Some((q, v, from)) = stack.pop() {
                if q.len() == blocks.len() + extra {
                    out.push(q);
                    continue;
                }
                for (i, t) in leafless.iter().enumerate().skip(from) {
                    let w = v + t.vertices();
                    if w <= budget {
                        let mut q2 = q.clone();
                        q2.push(t.clone());
                        stack.push((q2, w, i));
                    }
                }
            }
        }
    }
}

/// The normal trees spanning F(X)(n) with at most `max_vertices` vertices,
/// ordered by vertex count and then structurally.
pub fn normal_trees(x: &SModule, n: usize, max_vertices: usize) -> Vec<Tree> {
    let mut e = Enumerator { x, memo: HashMap::new() };
    let mut out = e.trees(n, max_vertices);
    if n == 1 {
        out.push(Tree::Leaf(0));
    }
    out.sort_by(|a, b| (a.vertices(), a).cmp(&(b.vertices(), b)));
    out.dedup();
    out
}

/// Everything needed to compute in F(X); shared by the composer and the adjunction maps.
#[derive(Debug)]
pub struct FreeData {
    pub x: Arc<SModule>,
    pub profile: TruncationProfile,
    /// Normal trees per arity.
    pub trees: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
    /// Normal-tree coordinates → basis coordinates.
    projection: Vec<Matrix>,
    /// Representative normal tree of each basis element.
    pub reps: Vec<Vec<usize>>,
}

impl FreeData {
    pub fn field(&self) -> Field {
        self.x.field()
    }

    /// Coordinates of a combination of (not necessarily normal) trees in the
    /// basis of F(X)(n); `None` if some tree has too many vertices.
    pub fn express(&self, n: usize, terms: &[(Tree, Scalar)]) -> Option<SparseVec> {
        let mut acc = Vec::new();
        for (t, c) in terms {
            for (nt, d) in normalize(&self.x, t) {
                let i = *self.index[n].get(&nt)?;
                acc.push((i, c * &d));
            }
        }
        Some(self.projection[n].apply(&SparseVec::from_pairs(acc)))
    }

    pub fn basis_tree(&self, n: usize, b: usize) -> &Tree {
        &self.trees[n][self.reps[n][b]]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.reps[n].len()
    }

    pub fn max_arity(&self) -> usize {
        self.profile.max_arity
    }
}

#[derive(Debug)]
struct FreeComposer {
    data: Arc<FreeData>,
}

impl Composer for FreeComposer {
    fn compose(&self, x: usize, ys: &[Elem]) -> Option<SparseVec> {
        let d = &self.data;
        let t = d.basis_tree(ys.len(), x);
        let subs: Vec<Tree> = ys.iter().map(|&(a, i)| d.basis_tree(a, i).clone()).collect();
        if t.vertices() + subs.iter().map(|s| s.vertices()).sum::<usize>() > d.profile.max_depth {
            return None;
        }
        let (g, s) = graft(&d.x, t, &subs);
        let n: usize = ys.iter().map(|y| y.0).sum();
        d.express(n, &[(g, s)])
    }
}

/// F(X) truncated to trees with at most `profile.max_depth` vertices.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub data: Arc<FreeData>,
    pub operad: Arc<Operad>,
}

/// Relations from swapping identical leafless siblings.
fn stabilizer_relations(x: &SModule, t: &Tree) -> Vec<Combination> {
    let field = x.field();
    let mut out = Vec::new();
    let mut k = 0;
    fn rec(x: &SModule, root: &Tree, t: &Tree, k: &mut usize, out: &mut Vec<Combination>, field: Field) {
        if let Tree::Node(g, ch) = t {
            let here = *k;
            *k += 1;
            for a in 0..ch.len().saturating_sub(1) {
                if ch[a] == ch[a + 1] && ch[a].min_leaf().is_none() {
                    let swapped = x.act(g.arity, &SparseVec::unit(g.index, field), &Perm::adjacent(g.arity, a));
                    let s = -field.sign(ch[a].degree(x) as i64);
                    let mut rel = vec![(root.clone(), field.one())];
                    for (idx, c) in swapped.iter() {
                        rel.push((root.with_vertex(here, Gen { arity: g.arity, index: *idx }), &s * c));
                    }
                    out.push(rel);
                }
            }
            for c in ch {
                rec(x, root, c, k, out, field);
            }
        }
    }
    rec(x, t, t, &mut k, &mut out, field);
    out
}

impl FreeOperad {
    pub fn new(x: Arc<SModule>, profile: TruncationProfile) -> Result<FreeOperad> {
        FreeOperad::with_generators_up_to(x, profile, profile.max_arity)
    }

    /// As [`FreeOperad::new`], keeping generators up to arity `cap`. Only
    /// matters when X(0) ≠ 0, where a vertex can have more inputs than its tree.
    pub fn with_generators_up_to(x: Arc<SModule>, profile: TruncationProfile, cap: usize) -> Result<FreeOperad> {
        let field = x.field();
        let n_max = profile.max_arity;
        let x = Arc::new(x.truncate(cap.max(n_max)));
        let xs = x.clone();
        let trees: Vec<Vec<Tree>> = par::map_range(n_max + 1, |n| normal_trees(&xs, n, profile.max_depth));
        let index: Vec<HashMap<Tree, usize>> = trees.iter().map(|ts| ts.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
        let mut ech: Vec<Echelon> = Vec::new();
        for n in 0..=n_max {
            let mut e = Echelon::new(field, trees[n].len());
            for t in &trees[n] {
                for rel in stabilizer_relations(&x, t) {
                    let mut acc = Vec::new();
                    for (rt, c) in &rel {
                        for (nt, d) in normalize(&x, rt) {
                            acc.push((index[n][&nt], c * &d));
                        }
                    }
                    e.insert(SparseVec::from_pairs(acc));
                }
            }
            e.fully_reduce();
            ech.push(e);
        }
        let reps: Vec<Vec<usize>> = ech.iter().map(|e| e.complement()).collect();
        let projection: Vec<Matrix> = ech.iter().map(|e| e.projection()).collect();
        let data0 = FreeData { x: x.clone(), profile, trees: trees.clone(), index, projection, reps: reps.clone() };
        // differential: Leibniz over vertices in preorder
        let mut comps = Vec::new();
        for n in 0..=n_max {
            let mut diff_cols = Vec::new();
            for &w in &reps[n] {
                let t = &trees[n][w];
                let gens = t.preorder();
                let mut terms = Vec::new();
                let mut deg = 0i64;
                for (k, g) in gens.iter().enumerate() {
                    let dx = x.component(g.arity).differential().column(g.index);
                    let s = field.sign(deg);
                    for (idx, c) in dx.iter() {
                        terms.push((t.with_vertex(k, Gen { arity: g.arity, index: *idx }), &s * c));
                    }
                    deg += x.component(g.arity).degree(g.index) as i64;
                }
                diff_cols.push(data0.express(n, &terms).expect("∂ keeps the vertex count"));
            }
            let basis: Vec<BasisElem> = reps[n].iter().map(|&w| BasisElem::new(trees[n][w].display(&x), trees[n][w].degree(&x))).collect();
            let space = GradedSpace::new(field, basis).with_differential(Matrix::from_columns(field, reps[n].len(), diff_cols))?;
            comps.push(Arc::new(space));
        }
        let data = Arc::new(data0);
        let d2 = data.clone();
        let module = SModule::from_basis_action(field, comps, |n, i, b| {
            let t = d2.basis_tree(n, b);
            let s = Perm::adjacent(n, i);
            d2.express(n, &[(t.map_leaves(&|l| s.apply(l)), field.one())]).expect("relabeling keeps the vertex count")
        })?;
        let unit = if data.dim(1) > 0 { data.express(1, &[(Tree::Leaf(0), field.one())]).expect("bare leaf") } else { SparseVec::new() };
        let mut op = Operad::new("F(X)", Arc::new(module), unit, profile, Arc::new(FreeComposer { data: data.clone() }))?;
        let low = (0..=1.min(x.max_arity())).any(|k| x.component(k).dim() > 0);
        if low || profile.max_depth + 1 < n_max {
            op.exact = false;
            op.notes.push(format!("truncated at {} vertices", profile.max_depth));
        }
        Ok(FreeOperad { data, operad: Arc::new(op) })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FreeOperad {
        let mut op = (*self.operad).clone();
        op.name = name.into();
        self.operad = Arc::new(op);
        self
    }

    pub fn x(&self) -> &Arc<SModule> {
        &self.data.x
    }

    /// Basis coordinates of a tree of arity `n`.
    pub fn vector(&self, t: &Tree) -> Option<SparseVec> {
        self.data.express(t.arity(), &[(t.clone(), self.data.field().one())])
    }

    pub fn tree_name(&self, t: &Tree) -> String {
        t.display(&self.data.x)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::operad::check_operad;
    use crate::smodule::regular_smodule;

    fn f() -> Field {
        Field::F101
    }

    /// A binary generator with trivial, sign or regular Σ₂-action.
    pub(crate) fn binary(kind: &str, degree: i32, max: usize) -> SModule {
        let field = f();
        let comps: Vec<Arc<GradedSpace>> = (0..=max)
            .map(|n| {
                let basis = match (n, kind) {
                    (2, "regular") => vec![BasisElem::new("mu", degree), BasisElem::new("mu'", degree)],
                    (2, _) => vec![BasisElem::new("mu", degree)],
                    _ => vec![],
                };
                Arc::new(GradedSpace::new(field, basis))
            })
            .collect();
        SModule::from_basis_action(field, comps, |_, _, j| match kind {
            "regular" => SparseVec::unit(1 - j, field),
            "sign" => SparseVec::single(j, field.from_i64(-1)),
            _ => SparseVec::unit(j, field),
        })
        .unwrap()
    }

    /// Planar trees with all leaf labelings modulo the vertex relations,
    /// dimension computed by rank. Independent of the normal-form code.
    fn oracle_dim(x: &SModule, n: usize, max_vertices: usize) -> usize {
        let field = x.field();
        // all planar labeled trees with up to `max_vertices` vertices
        fn planar(x: &SModule, labels: &[usize], budget: usize) -> Vec<Tree> {
            let mut out = Vec::new();
            if labels.len() == 1 {
                out.push(Tree::Leaf(labels[0]));
            }
            if budget == 0 {
                return out;
            }
            for k in 0..=x.max_arity() {
                for idx in 0..x.component(k).dim() {
                    // ordered distribution of labels into k consecutive groups after permuting
                    for perm in Perm::all(labels.len()) {
                        let seq: Vec<usize> = perm.images().iter().map(|&i| labels[i]).collect();
                        for cuts in compositions(seq.len(), k) {
                            let mut lists = vec![Vec::new()];
                            let mut start = 0;
                            for &c in &cuts {
                                let group = &seq[start..start + c];
                                start += c;
                                let mut next = Vec::new();
                                for l in &lists {
                                    let used: usize = l.iter().map(|t: &Tree| t.vertices()).sum();
                                    for t in planar(x, group, budget - 1 - used) {
                                        let mut l2 = l.clone();
                                        l2.push(t);
                                        next.push(l2);
                                    }
                                }
                                lists = next;
                            }
                            for l in lists {
                                if l.iter().map(|t| t.vertices()).sum::<usize>() < budget {
                                    out.push(Tree::Node(Gen { arity: k, index: idx }, l));
                                }
                            }
                        }
                    }
                }
            }
            out.sort();
            out.dedup();
            out
        }
        fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
            if parts == 0 {
                return if total == 0 { vec![vec![]] } else { vec![] };
            }
            let mut out = Vec::new();
            for first in 0..=total {
                for mut rest in compositions(total - first, parts - 1) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let labels: Vec<usize> = (0..n).collect();
        let all = planar(x, &labels, max_vertices);
        let idx: HashMap<Tree, usize> = all.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut ech = Echelon::new(field, all.len());
        // node(y·s; S with children i, i+1 swapped) = (-1)^{|S_i||S_{i+1}|} node(y; S), at any vertex
        for t in &all {
            let gens = t.preorder();
            for (k, g) in gens.iter().enumerate() {
                for a in 0..g.arity.saturating_sub(1) {
                    let ys = x.act(g.arity, &SparseVec::unit(g.index, field), &Perm::adjacent(g.arity, a));
                    let (swapped, sign) = swap_children(x, t, k, a);
                    let mut row = vec![(idx[t], -field.one())];
                    for (i, c) in ys.iter() {
                        let u = swapped.with_vertex(k, Gen { arity: g.arity, index: *i });
                        row.push((idx[&u], &sign * c));
                    }
                    ech.insert(SparseVec::from_pairs(row));
                }
            }
        }
        all.len() - ech.rank()
    }

    fn swap_children(x: &SModule, t: &Tree, k: usize, a: usize) -> (Tree, Scalar) {
        fn rec(x: &SModule, t: &Tree, k: usize, a: usize, seen: &mut usize, sign: &mut i64) -> Tree {
            match t {
                Tree::Leaf(_) => t.clone(),
                Tree::Node(g, ch) => {
                    let here = *seen == k;
                    *seen += 1;
                    let mut ch2: Vec<Tree> = ch.iter().map(|c| rec(x, c, k, a, seen, sign)).collect();
                    if here {
                        *sign += (ch2[a].degree(x) * ch2[a + 1].degree(x)) as i64;
                        ch2.swap(a, a + 1);
                    }
                    Tree::Node(*g, ch2)
                }
            }
        }
        let mut sign = 0;
        let out = rec(x, t, k, a, &mut 0, &mut sign);
        (out, x.field().sign(sign))
    }

    #[test]
    fn zero_module_gives_only_the_unit() {
        let x = Arc::new(SModule::zero(f(), 4));
        let fx = FreeOperad::new(x, TruncationProfile::default()).unwrap();
        assert_eq!(fx.operad.dims(), vec![0, 1, 0, 0, 0]);
        assert!(fx.operad.exact);
    }

    #[test]
    fn binary_generator_dimensions() {
        let prof = TruncationProfile::default();
        let trivial = Arc::new(binary("trivial", 0, 4));
        let fx = FreeOperad::new(trivial.clone(), prof).unwrap();
        assert_eq!(fx.operad.dim(3), 3);
        assert_eq!(fx.operad.dims(), vec![0, 1, 1, 3, 15]);
        let regular = Arc::new(binary("regular", 0, 4));
        let fr = FreeOperad::new(regular.clone(), prof).unwrap();
        assert_eq!(fr.operad.dim(3), 12);
        for x in [&trivial, &regular] {
            for n in 0..=3 {
                assert_eq!(FreeOperad::new(x.clone(), prof).unwrap().operad.dim(n), oracle_dim(x, n, 3), "arity {n}");
            }
        }
    }

    #[test]
    fn odd_and_low_arity_generators_match_the_oracle() {
        let prof = TruncationProfile::new(3, 3).unwrap();
        let odd = Arc::new(binary("trivial", 1, 3));
        let sign = Arc::new(binary("sign", 1, 3));
        // one constant c, one unary u: leafless children and identical siblings
        let field = f();
        let comps: Vec<Arc<GradedSpace>> = (0..=3)
            .map(|n| match n {
                0 => Arc::new(GradedSpace::new(field, vec![BasisElem::new("c", 1)])),
                1 => Arc::new(GradedSpace::new(field, vec![BasisElem::new("u", 0)])),
                2 => Arc::new(GradedSpace::new(field, vec![BasisElem::new("mu", 0)])),
                _ => Arc::new(GradedSpace::zero(field)),
            })
            .collect();
        let low = Arc::new(SModule::trivial(field, comps).unwrap());
        for x in [&odd, &sign, &low] {
            let fx = FreeOperad::new(x.clone(), prof).unwrap();
            for n in 0..=3 {
                assert_eq!(fx.operad.dim(n), oracle_dim(x, n, 3), "arity {n} of {:?}", x.dims());
            }
        }
        assert!(!FreeOperad::new(low, prof).unwrap().operad.exact);
    }

    #[test]
    fn free_operads_pass_the_checkers() {
        let prof = TruncationProfile::default();
        for x in [binary("trivial", 0, 4), binary("regular", 0, 4), binary("sign", 1, 4)] {
            let fx = FreeOperad::new(Arc::new(x), prof).unwrap();
            for r in check_operad(&fx.operad, 0) {
                assert!(r.passed, "{}: {:?}", r.check, r.failures);
            }
        }
        let field = f();
        let comps: Vec<Arc<GradedSpace>> = (0..=3)
            .map(|n| match n {
                0 => Arc::new(GradedSpace::new(field, vec![BasisElem::new("c", 1)])),
                2 => Arc::new(GradedSpace::new(field, vec![BasisElem::new("mu", 1)])),
                _ => Arc::new(GradedSpace::zero(field)),
            })
            .collect();
        let low = SModule::trivial(field, comps).unwrap();
        let fx = FreeOperad::new(Arc::new(low), TruncationProfile::new(3, 3).unwrap()).unwrap();
        for r in check_operad(&fx.operad, 0) {
            assert!(r.passed, "{}: {:?}", r.check, r.failures);
        }
        let reg = FreeOperad::new(Arc::new(regular_smodule(f(), 2)), TruncationProfile::new(2, 2).unwrap()).unwrap();
        for r in check_operad(&reg.operad, 0) {
            assert!(r.passed, "{}: {:?}", r.check, r.failures);
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let x = binary("regular", 1, 4);
        for n in 0..=4 {
            for t in normal_trees(&x, n, 3) {
                let once = normalize(&x, &t);
                assert_eq!(once, vec![(t.clone(), f().one())]);
            }
        }
        // a non-normal tree: normalizing twice equals normalizing once
        let mu = Gen { arity: 2, index: 0 };
        let t = Tree::Node(mu, vec![Tree::Node(mu, vec![Tree::Leaf(2), Tree::Leaf(0)]), Tree::Leaf(1)]);
        let once = normalize(&x, &t);
        let twice: Vec<(Tree, Scalar)> = collect(f(), once.iter().flat_map(|(u, c)| normalize(&x, u).into_iter().map(move |(v, d)| (v, c * &d))));
        assert_eq!(once, twice);
    }

    #[test]
    fn tree_display() {
        let x = binary("trivial", 0, 3);
        let mu = Gen { arity: 2, index: 0 };
        let t = Tree::Node(mu, vec![Tree::Leaf(0), Tree::Node(mu, vec![Tree::Leaf(1), Tree::Leaf(2)])]);
        assert_eq!(t.display(&x), "mu(1,mu(2,3))");
        assert_eq!(t.vertices(), 2);
        assert_eq!(t.leaves(), vec![0, 1, 2]);
    }
}
