//! Coproducts as quotients of free operads, and the colimits built from them.
//!
//! The coproduct of P_1, …, P_k is F(⊕ U P_i) modulo two families of
//! relations among trees with at most D vertices: a connected region of
//! same-summand vertices equals its composite in P_i, and a vertex carrying
//! the unit of P_i equals the bare edge. These span the image of d₀ − d₁ for
//! the pair F U F(⊕ U P_i) ⇉ F(⊕ U P_i), one contraction at a time.

use std::sync::Arc;

use super::{quotient_operad, reflexive_coequalizer_data, ReflexivePair};
use crate::error::{Error, Result};
use crate::free::{evaluate, theta_inverse, Combination, FreeOperad, Gen, Tree};
use crate::linalg::{Matrix, SparseVec};
use crate::operad::{compose_morphisms, Operad, OperadMorphism, TruncationProfile};
use crate::par;
use crate::report::{Report, Witness};
use crate::scalar::{reorder_parity, Scalar};
use crate::smodule::{SModule, SModuleMap};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub map: OperadMorphism,
}

#[derive(Clone, Debug)]
pub struct FiniteDiagram {
    pub objects: Vec<Arc<Operad>>,
    pub arrows: Vec<Arrow>,
}

impl FiniteDiagram {
    pub fn new(objects: Vec<Arc<Operad>>, arrows: Vec<Arrow>) -> Result<FiniteDiagram> {
        for a in &arrows {
            let ok = a.source < objects.len()
                && a.target < objects.len()
                && Arc::ptr_eq(&a.map.source, &objects[a.source])
                && Arc::ptr_eq(&a.map.target, &objects[a.target]);
            if !ok {
                return Err(Error::InvalidMorphism(format!("arrow {} does not run between the listed objects", a.map.name)));
            }
        }
        Ok(FiniteDiagram { objects, arrows })
    }

    pub fn discrete(objects: Vec<Arc<Operad>>) -> FiniteDiagram {
        FiniteDiagram { objects, arrows: Vec::new() }
    }
}

/// A colimit with its cocone, plus a presentation by trees over `⊕ U(objects)`
/// used to map out of it.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub operad: Arc<Operad>,
    pub edges: Vec<OperadMorphism>,
    pub diagram: FiniteDiagram,
    pub generators: Arc<SModule>,
    /// The diagram objects whose underlying modules make up `generators`, in order.
    summands: Vec<usize>,
    offsets: Vec<Vec<usize>>,
    lifts: Vec<Vec<Combination>>,
    relations: Option<Vec<Vec<Combination>>>,
}

impl Colimit {
    /// A combination of trees mapping to basis vector `b` of arity `n`.
    pub fn lift(&self, n: usize, b: usize) -> &Combination {
        &self.lifts[n][b]
    }

    /// Relations generating the kernel of F(generators) → colimit, when known.
    pub fn relations(&self) -> Option<&[Vec<Combination>]> {
        self.relations.as_deref()
    }

    /// Position of summand `i` inside `generators` in arity `n`.
    pub fn offset(&self, i: usize, n: usize) -> usize {
        self.offsets[i][n]
    }

    /// The Σ-module map `generators` → U(T) assembled from `maps[i] : P_i → T`.
    pub fn assemble(&self, maps: &[&OperadMorphism], t: &Arc<Operad>) -> Result<SModuleMap> {
        let picked: Vec<&OperadMorphism> = self.summands.iter().map(|&i| maps[i]).collect();
        assemble(&self.generators, &self.offsets, &picked, t)
    }
}

fn sum_module(objects: &[Arc<Operad>], n_max: usize) -> Result<(Arc<SModule>, Vec<Vec<usize>>)> {
    let field = objects[0].field();
    let mut tags: Vec<String> = objects.iter().map(|o| o.name.clone()).collect();
    let duplicated = (0..tags.len()).any(|i| tags[i + 1..].contains(&tags[i]));
    if duplicated {
        tags = tags.iter().enumerate().map(|(i, t)| format!("{t}{}", i + 1)).collect();
    }
    let parts: Vec<SModule> = objects.iter().map(|o| o.module().truncate(n_max)).collect();
    let refs: Vec<&SModule> = parts.iter().collect();
    let x = SModule::direct_sum(field, &refs, Some(&tags))?;
    let mut offsets = vec![vec![0; n_max + 1]; objects.len() + 1];
    for n in 0..=n_max {
        for (i, p) in parts.iter().enumerate() {
            offsets[i + 1][n] = offsets[i][n] + p.component(n).dim();
        }
    }
    Ok((Arc::new(x), offsets))
}

fn assemble(x: &Arc<SModule>, offsets: &[Vec<usize>], maps: &[&OperadMorphism], t: &Arc<Operad>) -> Result<SModuleMap> {
    let field = x.field();
    let k = x.max_arity().min(t.max_arity());
    let mut mats = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut cols = Vec::with_capacity(x.component(n).dim());
        for (i, m) in maps.iter().enumerate() {
            for b in 0..offsets[i + 1][n] - offsets[i][n] {
                let c = m.columns.get(n).and_then(|c| c[b].clone());
                cols.push(c.ok_or_else(|| Error::Overflow(format!("{} is undefined in arity {n}", m.name)))?);
            }
        }
        mats.push(Matrix::from_columns(field, t.dim(n), cols));
    }
    SModuleMap::new(x.clone(), t.module().clone(), mats)
}

struct Ctx<'a> {
    x: &'a SModule,
    objects: &'a [Arc<Operad>],
    offsets: &'a [Vec<usize>],
    /// projection of the generators onto each summand
    proj: Vec<SModuleMap>,
    units: Vec<Vec<(Gen, Scalar)>>,
}

impl Ctx<'_> {
    fn color(&self, g: Gen) -> usize {
        (0..self.objects.len()).find(|&i| g.index < self.offsets[i + 1][g.arity]).expect("index inside the sum")
    }
}

fn region_masks(t: &Tree, c: usize, ctx: &Ctx) -> Vec<Vec<bool>> {
    let Tree::Node(_, ch) = t else { return Vec::new() };
    let mut acc: Vec<Vec<bool>> = vec![vec![true]];
    for child in ch {
        let mut opts = vec![vec![false; child.vertices()]];
        if let Tree::Node(h, _) = child {
            if ctx.color(*h) == c {
                opts.extend(region_masks(child, c, ctx));
            }
        }
        acc = acc.iter().flat_map(|a| opts.iter().map(move |o| [a.clone(), o.clone()].concat())).collect();
    }
    acc
}

fn region_tree(t: &Tree, mask: &[bool], pos: &mut usize, boundary: &mut Vec<Tree>) -> Tree {
    let Tree::Node(g, ch) = t else { unreachable!("regions consist of vertices") };
    *pos += 1;
    let mut kids = Vec::with_capacity(ch.len());
    for c in ch {
        if matches!(c, Tree::Node(..)) && mask[*pos] {
            kids.push(region_tree(c, mask, pos, boundary));
        } else {
            *pos += c.vertices();
            boundary.push(c.clone());
            kids.push(Tree::Leaf(boundary.len() - 1));
        }
    }
    Tree::Node(*g, kids)
}

/// ± the tree with the region `mask` (rooted at the root of `t`) replaced by its composite.
fn contract(t: &Tree, mask: &[bool], c: usize, ctx: &Ctx) -> Option<Combination> {
    let mut boundary = Vec::new();
    let rt = region_tree(t, mask, &mut 0, &mut boundary);
    let value = evaluate(&ctx.objects[c], &ctx.proj[c], &rt)?;
    let degs: Vec<i32> = t.preorder().iter().map(|g| ctx.x.component(g.arity).degree(g.index)).collect();
    let source: Vec<usize> = (0..degs.len()).filter(|&k| mask[k]).chain((0..degs.len()).filter(|&k| !mask[k])).collect();
    let mut order = vec![0; degs.len()];
    for (i, &k) in source.iter().enumerate() {
        order[k] = i;
    }
    let src_degs: Vec<i32> = source.iter().map(|&k| degs[k]).collect();
    let sign = ctx.x.field().sign(reorder_parity(&src_degs, &order));
    let m = boundary.len();
    Some(value.iter().map(|(b, coef)| (Tree::Node(Gen { arity: m, index: ctx.offsets[c][m] + b }, boundary.clone()), coef * &sign)).collect())
}

fn replace_child(g: Gen, ch: &[Tree], j: usize, alt: Combination) -> Combination {
    alt.into_iter()
        .map(|(s, coef)| {
            let mut ch2 = ch.to_vec();
            ch2[j] = s;
            (Tree::Node(g, ch2), coef)
        })
        .collect()
}

/// All ways of contracting one region with at least two vertices.
fn contractions(t: &Tree, ctx: &Ctx) -> Vec<Combination> {
    let Tree::Node(g, ch) = t else { return Vec::new() };
    let c = ctx.color(*g);
    let mut out: Vec<Combination> = region_masks(t, c, ctx).iter().filter(|m| m.iter().filter(|&&b| b).count() >= 2).filter_map(|m| contract(t, m, c, ctx)).collect();
    for (j, child) in ch.iter().enumerate() {
        for alt in contractions(child, ctx) {
            out.push(replace_child(*g, ch, j, alt));
        }
    }
    out
}

/// All ways of inserting one unit vertex on an edge (or above the root).
fn insertions(t: &Tree, ctx: &Ctx) -> Vec<Combination> {
    let mut out: Vec<Combination> = ctx.units.iter().map(|u| u.iter().map(|(g, c)| (Tree::Node(*g, vec![t.clone()]), c.clone())).collect()).collect();
    if let Tree::Node(g, ch) = t {
        for (j, child) in ch.iter().enumerate() {
            for alt in insertions(child, ctx) {
                out.push(replace_child(*g, ch, j, alt));
            }
        }
    }
    out
}

/// The coproduct P_1 ⊔ … ⊔ P_k inside the truncation.
pub fn coproduct(objects: &[Arc<Operad>], profile: TruncationProfile) -> Result<Colimit> {
    let Some(first) = objects.first() else { return Err(Error::Dimension("the coproduct of no operads is F(0); pass it explicitly".into())) };
    let field = first.field();
    if let Some(o) = objects.iter().find(|o| o.field() != field) {
        return Err(Error::FieldMismatch(field.to_string(), o.field().to_string()));
    }
    if let Some(o) = objects.iter().find(|o| o.max_arity() < profile.max_arity) {
        return Err(Error::Dimension(format!("{} is only known up to arity {}", o.name, o.max_arity())));
    }
    let n_max = profile.max_arity;
    // contracting a region next to constants can raise a vertex's arity up to N + D − 1
    let wanted = if objects.iter().any(|o| o.dim(0) > 0) { n_max + profile.max_depth.saturating_sub(1) } else { n_max };
    let cap = objects.iter().map(|o| o.max_arity()).min().unwrap_or(n_max).min(wanted);
    let (x, offsets) = sum_module(objects, cap)?;
    let fq = FreeOperad::with_generators_up_to(x.clone(), profile, cap)?;
    let proj: Vec<SModuleMap> = (0..objects.len())
        .map(|c| {
            let maps = (0..=cap)
                .map(|n| {
                    let cols = (0..x.component(n).dim())
                        .map(|k| if (offsets[c][n]..offsets[c + 1][n]).contains(&k) { SparseVec::unit(k - offsets[c][n], field) } else { SparseVec::new() })
                        .collect();
                    Matrix::from_columns(field, objects[c].dim(n), cols)
                })
                .collect();
            SModuleMap::new(x.clone(), objects[c].module().clone(), maps)
        })
        .collect::<Result<_>>()?;
    let units: Vec<Vec<(Gen, Scalar)>> =
        objects.iter().enumerate().map(|(c, o)| o.unit().iter().map(|(b, s)| (Gen { arity: 1, index: offsets[c][1] + b }, s.clone())).collect()).collect();
    let ctx = Ctx { x: &x, objects, offsets: &offsets, proj, units };
    let max_v = profile.max_depth;
    let data = fq.data.clone();
    let rels: Vec<Vec<Combination>> = (0..=n_max)
        .map(|n| {
            data.trees[n]
                .iter()
                .flat_map(|t| {
                    let mut alts = contractions(t, &ctx);
                    if t.vertices() < max_v {
                        alts.extend(insertions(t, &ctx));
                    }
                    alts.into_iter().map(move |alt| {
                        let mut rel = vec![(t.clone(), field.one())];
                        rel.extend(alt.into_iter().map(|(u, c)| (u, -c)));
                        rel
                    })
                })
                .collect()
        })
        .collect();
    let vecs: Vec<Vec<SparseVec>> = par::map_range(n_max + 1, |n| rels[n].iter().filter_map(|r| data.express(n, r)).collect());
    let name = objects.iter().map(|o| o.name.as_str()).collect::<Vec<_>>().join("⊔");
    let (op, q, qd) = quotient_operad(name, fq.operad.clone(), &vecs)?;
    // the unit of F(X) and the units of the summands agree in the quotient
    for (c, u) in ctx.units.iter().enumerate() {
        let v = data.express(1, &u.iter().map(|(g, s)| (Tree::corolla(*g), s.clone())).collect::<Vec<_>>()).and_then(|v| q.apply(1, &v));
        if v.as_ref() != Some(op.unit()) {
            return Err(Error::NotWellDefined(format!("the unit of {} is not identified with the unit of the coproduct", objects[c].name)));
        }
    }
    let exact = objects.iter().all(|o| o.exact && o.dim(0) == 0 && o.dim(1) == 1) && profile.max_depth + 1 >= n_max;
    let mut o = (*op).clone();
    o.exact = exact;
    o.notes.clear();
    if !exact {
        o.notes.push(format!("quotient of trees with at most {} vertices", profile.max_depth));
    }
    if cap < wanted {
        o.notes.push(format!("summands known only up to arity {cap}; composites may be inconsistent (need {wanted})"));
    }
    let op = Arc::new(o);
    let q = OperadMorphism::new(q.name.clone(), q.source.clone(), op.clone(), q.columns.clone())?;
    let edges = objects
        .iter()
        .enumerate()
        .map(|(c, o)| {
            let q = &q;
            let fq = &fq;
            OperadMorphism::from_fn(format!("in_{}", c + 1), o.clone(), op.clone(), |n, b| {
                fq.vector(&Tree::corolla(Gen { arity: n, index: offsets[c][n] + b })).and_then(|v| q.apply(n, &v))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lifts = (0..=n_max).map(|n| qd.reps[n].iter().map(|&r| vec![(data.basis_tree(n, r).clone(), field.one())]).collect()).collect();
    let summands = (0..objects.len()).collect();
    Ok(Colimit { operad: op, edges, diagram: FiniteDiagram::discrete(objects.to_vec()), generators: x, summands, offsets, lifts, relations: Some(rels) })
}

fn eval_combination(t: &Operad, g: &SModuleMap, comb: &Combination) -> Option<SparseVec> {
    let mut acc = SparseVec::new();
    for (tree, c) in comb {
        acc = acc.add_scaled(&evaluate(t, g, tree)?, c);
    }
    Some(acc)
}

/// Whether the operad morphism F(⊕ U P_i) → T induced by `g` kills every
/// relation of the presentation: f∘d₀ = f∘d₁.
pub fn kills_relations(colim: &Colimit, t: &Operad, g: &SModuleMap) -> Report {
    let mut rep = Report::new("f∘d₀ = f∘d₁");
    let Some(rels) = colim.relations() else {
        rep.note("no relations recorded for this colimit");
        return rep;
    };
    for (n, rs) in rels.iter().enumerate() {
        let results = par::map(rs, |r| eval_combination(t, g, r));
        for (r, v) in rs.iter().zip(results) {
            match v {
                Some(v) => rep.record(v.is_zero(), || Witness::new(format!("arity {n}, relation at {}", r[0].0.display(&colim.generators)), "0", t.component(n).render(&v))),
                None => rep.skip(),
            }
        }
    }
    rep
}

/// The unique h : colim → T with h∘edge_i = targets[i].
pub fn cocone_factorization(colim: &Colimit, targets: &[OperadMorphism]) -> Result<OperadMorphism> {
    let objs = &colim.diagram.objects;
    if targets.len() != objs.len() {
        return Err(Error::InvalidMorphism(format!("{} maps for {} objects", targets.len(), objs.len())));
    }
    let t = targets[0].target.clone();
    for (i, m) in targets.iter().enumerate() {
        if !Arc::ptr_eq(&m.source, &objs[i]) || !Arc::ptr_eq(&m.target, &t) {
            return Err(Error::InvalidMorphism(format!("{} does not run from {} to {}", m.name, objs[i].name, t.name)));
        }
    }
    for a in &colim.diagram.arrows {
        let (ts, tt) = (&targets[a.source], &targets[a.target]);
        for n in 0..a.map.columns.len().min(ts.columns.len()) {
            for b in 0..a.map.source.dim(n) {
                let via = a.map.columns[n][b].as_ref().and_then(|v| tt.apply(n, v));
                if let (Some(via), Some(direct)) = (via, ts.columns[n][b].as_ref()) {
                    if via != *direct {
                        return Err(Error::InvalidMorphism(format!(
                            "the cocone does not commute with arrow {} at arity {n}, {}: {} ≠ {}",
                            a.map.name,
                            a.map.source.component(n).name(b),
                            t.component(n).render(&via),
                            t.component(n).render(direct)
                        )));
                    }
                }
            }
        }
    }
    let refs: Vec<&OperadMorphism> = targets.iter().collect();
    let g = colim.assemble(&refs, &t)?;
    let killed = kills_relations(colim, &t, &g);
    if let Some(w) = killed.first_failure() {
        return Err(Error::NotWellDefined(format!("the target maps are not compatible operad morphisms: {} gives {}", w.at, w.found)));
    }
    let h = OperadMorphism::from_fn(format!("[{}]", targets.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(", ")), colim.operad.clone(), t.clone(), |n, b| {
        eval_combination(&t, &g, colim.lift(n, b))
    })?;
    for (i, e) in colim.edges.iter().enumerate() {
        let c = compose_morphisms(&h, e)?;
        for n in 0..c.columns.len() {
            for (b, (x, y)) in c.columns[n].iter().zip(&targets[i].columns[n]).enumerate() {
                if let (Some(x), Some(y)) = (x, y) {
                    if x != y {
                        return Err(Error::InvalidMorphism(format!("h∘{} differs from {} at arity {n}, {}", e.name, targets[i].name, objs[i].component(n).name(b))));
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Coequalizer of f, g : P ⇉ Q with Q-basis representatives of the result.
fn coequalize(f: &OperadMorphism, g: &OperadMorphism, profile: TruncationProfile) -> Result<(Colimit, Vec<Vec<usize>>)> {
    if !Arc::ptr_eq(&f.source, &g.source) || !Arc::ptr_eq(&f.target, &g.target) {
        return Err(Error::InvalidMorphism(format!("{} and {} are not parallel", f.name, g.name)));
    }
    let (p, q) = (f.source.clone(), f.target.clone());
    // reflexivize through P ⊔ Q
    let a = coproduct(&[p.clone(), q.clone()], profile)?;
    let id = OperadMorphism::identity(q.clone());
    let ff = cocone_factorization(&a, &[f.clone(), id.clone()])?;
    let gg = cocone_factorization(&a, &[g.clone(), id])?;
    let pair = ReflexivePair::new(ff, gg, a.edges[1].clone())?;
    let (o, qm, qd) = reflexive_coequalizer_data(&pair)?;
    let mut edge_p = compose_morphisms(&qm, f)?;
    edge_p.name = "in_1".into();
    let mut edge_q = qm;
    edge_q.name = "in_2".into();
    let field = o.field();
    let lifts = (0..=o.max_arity())
        .map(|n| qd.reps[n].iter().map(|&r| vec![(Tree::corolla(Gen { arity: n, index: a.offsets[1][n] + r }), field.one())]).collect())
        .collect();
    let diagram = FiniteDiagram::new(vec![p, q], vec![Arrow { source: 0, target: 1, map: f.clone() }, Arrow { source: 0, target: 1, map: g.clone() }])?;
    let colim = Colimit { operad: o, edges: vec![edge_p, edge_q], diagram, generators: a.generators.clone(), summands: vec![0, 1], offsets: a.offsets.clone(), lifts, relations: None };
    Ok((colim, qd.reps.clone()))
}

pub fn coequalizer(f: &OperadMorphism, g: &OperadMorphism, profile: TruncationProfile) -> Result<Colimit> {
    Ok(coequalize(f, g, profile)?.0)
}

/// The colimit of an arbitrary finite diagram: the coproduct of its objects,
/// coequalized arrow by arrow.
pub fn colimit(diagram: &FiniteDiagram, profile: TruncationProfile) -> Result<Colimit> {
    let c0 = coproduct(&diagram.objects, profile)?;
    if diagram.arrows.is_empty() {
        return Ok(c0);
    }
    let mut current = c0.operad.clone();
    let mut edges = c0.edges.clone();
    let mut reps: Vec<Vec<usize>> = (0..=current.max_arity()).map(|n| (0..current.dim(n)).collect()).collect();
    for a in &diagram.arrows {
        let f = compose_morphisms(&edges[a.target], &a.map)?;
        let g = edges[a.source].clone();
        let (co, r) = coequalize(&f, &g, profile)?;
        let q = &co.edges[1];
        edges = edges.iter().map(|e| compose_morphisms(q, e)).collect::<Result<_>>()?;
        reps = (0..r.len()).map(|n| r[n].iter().map(|&k| reps[n][k]).collect()).collect();
        current = co.operad.clone();
    }
    for (i, e) in edges.iter_mut().enumerate() {
        e.name = format!("in_{}", i + 1);
    }
    let lifts = (0..reps.len()).map(|n| reps[n].iter().map(|&k| c0.lifts[n][k].clone()).collect()).collect();
    Ok(Colimit { operad: current, edges, diagram: diagram.clone(), generators: c0.generators, summands: c0.summands, offsets: c0.offsets, lifts, relations: None })
}

/// P ⊔_R Q for f : R → P and g : R → Q.
pub fn pushout(f: &OperadMorphism, g: &OperadMorphism, profile: TruncationProfile) -> Result<Colimit> {
    if !Arc::ptr_eq(&f.source, &g.source) {
        return Err(Error::InvalidMorphism(format!("{} and {} have different sources", f.name, g.name)));
    }
    let (r, p, q) = (f.source.clone(), f.target.clone(), g.target.clone());
    let c = coproduct(&[p.clone(), q.clone()], profile)?;
    let fp = compose_morphisms(&c.edges[0], f)?;
    let gq = compose_morphisms(&c.edges[1], g)?;
    let (co, reps) = coequalize(&fp, &gq, profile)?;
    let qm = &co.edges[1];
    let mut edges = vec![co.edges[0].clone(), compose_morphisms(qm, &c.edges[0])?, compose_morphisms(qm, &c.edges[1])?];
    for (i, e) in edges.iter_mut().enumerate() {
        e.name = format!("in_{}", i + 1);
    }
    let lifts = (0..reps.len()).map(|n| reps[n].iter().map(|&k| c.lifts[n][k].clone()).collect()).collect();
    let diagram = FiniteDiagram::new(vec![r, p, q], vec![Arrow { source: 0, target: 1, map: f.clone() }, Arrow { source: 0, target: 2, map: g.clone() }])?;
    Ok(Colimit { operad: co.operad, edges, diagram, generators: c.generators, summands: vec![1, 2], offsets: c.offsets, lifts, relations: None })
}

/// F(X_1 ⊕ … ⊕ X_k) → F(X_1) ⊔ … ⊔ F(X_k), induced by the coproduct cocone,
/// and a report certifying it is invertible in every arity.
pub fn compare_free_coproduct(xs: &[Arc<SModule>], profile: TruncationProfile) -> Result<(OperadMorphism, Colimit, Report)> {
    let field = xs.first().ok_or_else(|| Error::Dimension("no Σ-modules given".into()))?.field();
    let frees: Vec<FreeOperad> = xs.iter().map(|x| FreeOperad::new(x.clone(), profile)).collect::<Result<_>>()?;
    let ops: Vec<Arc<Operad>> = frees.iter().map(|f| f.operad.clone()).collect();
    let c = coproduct(&ops, profile)?;
    let xt: Vec<SModule> = frees.iter().map(|f| (**f.x()).clone()).collect();
    let sum = Arc::new(SModule::direct_sum(field, &xt.iter().collect::<Vec<_>>(), None)?);
    let fsum = FreeOperad::new(sum.clone(), profile)?;
    let mut mats = Vec::new();
    for n in 0..=sum.max_arity().min(c.operad.max_arity()) {
        let mut cols = Vec::new();
        for (i, fx) in frees.iter().enumerate() {
            for b in 0..fx.x().component(n).dim() {
                let eta = fx.vector(&Tree::corolla(Gen { arity: n, index: b })).expect("a corolla has one vertex");
                cols.push(c.edges[i].apply(n, &eta).ok_or_else(|| Error::Overflow("cocone edge undefined on a generator".into()))?);
            }
        }
        mats.push(Matrix::from_columns(field, c.operad.dim(n), cols));
    }
    let g = SModuleMap::new(sum, c.operad.module().clone(), mats)?;
    let phi = theta_inverse(&fsum, c.operad.clone(), &g)?;
    let mut rep = Report::new("F(⊕X_i) → ⊔F(X_i) invertible");
    for n in 0..phi.columns.len() {
        let (d_src, d_tgt) = (fsum.operad.dim(n), c.operad.dim(n));
        match phi.matrix(n) {
            Ok(m) => rep.record(d_src == d_tgt && m.rank() == d_src, || Witness::new(format!("arity {n}"), format!("invertible {d_tgt}×{d_tgt}"), format!("{d_tgt}×{d_src} of rank {}", m.rank()))),
            Err(_) => rep.skip(),
        }
    }
    Ok((phi, c, rep))
}
