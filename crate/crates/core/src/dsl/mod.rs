//! A small text format for operad presentations:
//!
//! ```text
//! field F101;
//! gen mu : arity 2, degree 0, action trivial;
//! rel mu(1,mu(2,3)) - mu(mu(1,2),3);
//! ```
//!
//! Leaves are numbered from 1. A term may carry a coefficient (`3*`, `1/2*`)
//! and a right action by a permutation in one-line notation (`·[2,1]` or `.[2,1]`).

mod lexer;
mod parser;

use std::fmt;
use std::sync::Arc;

use crate::colimit::coequalizer;
use crate::error::{Error, Result};
use crate::free::{normalize, theta_inverse, FreeOperad, Gen, Tree};
use crate::graded::{BasisElem, GradedSpace};
use crate::linalg::{Matrix, SparseVec};
use crate::operad::{Operad, TruncationProfile};
use crate::perm::Perm;
use crate::scalar::{Field, Scalar};
use crate::smodule::{generated_submodule, perm_rank, SModule, SModuleMap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { pos, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Error {
        Error::Parse(d.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Trivial,
    Sign,
    Regular,
}

impl Action {
    fn keyword(self) -> &'static str {
        match self {
            Action::Trivial => "trivial",
            Action::Sign => "sign",
            Action::Regular => "regular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub arity: usize,
    pub degree: i32,
    pub action: Action,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeLit {
    /// 1-based label
    Leaf(usize, Pos),
    Node(String, Vec<TreeLit>, Pos),
}

impl TreeLit {
    fn leaves(&self, out: &mut Vec<(usize, Pos)>) {
        match self {
            TreeLit::Leaf(l, p) => out.push((*l, *p)),
            TreeLit::Node(_, ch, _) => ch.iter().for_each(|c| c.leaves(out)),
        }
    }

    fn vertices(&self) -> usize {
        match self {
            TreeLit::Leaf(..) => 0,
            TreeLit::Node(_, ch, _) => 1 + ch.iter().map(TreeLit::vertices).sum::<usize>(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub num: i64,
    pub den: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub tree: TreeLit,
    /// one-line images, 1-based
    pub perm: Option<Vec<usize>>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffDecl {
    pub gen: String,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub field: Option<Field>,
    pub gens: Vec<GenDecl>,
    pub diffs: Vec<DiffDecl>,
    pub rels: Vec<Expr>,
}

/// Parses and checks names, arities and leaf labels.
pub fn parse(src: &str) -> std::result::Result<Presentation, Diagnostic> {
    let p = parser::parse_syntax(src)?;
    validate(&p)?;
    Ok(p)
}

fn validate(p: &Presentation) -> std::result::Result<(), Diagnostic> {
    for (i, g) in p.gens.iter().enumerate() {
        if let Some(h) = p.gens[..i].iter().find(|h| h.name == g.name) {
            return Err(Diagnostic::new(g.pos, format!("`{}` is already declared at {}:{}", g.name, h.pos.line, h.pos.col)));
        }
    }
    let check_tree = |t: &TreeLit| -> std::result::Result<(), Diagnostic> {
        fn rec(p: &Presentation, t: &TreeLit) -> std::result::Result<(), Diagnostic> {
            if let TreeLit::Node(name, ch, pos) = t {
                let g = p.gens.iter().find(|g| &g.name == name).ok_or_else(|| Diagnostic::new(*pos, format!("undeclared generator `{name}`")))?;
                if g.arity != ch.len() {
                    return Err(Diagnostic::new(*pos, format!("`{name}` has arity {} but is given {} inputs", g.arity, ch.len())));
                }
                ch.iter().try_for_each(|c| rec(p, c))?;
            }
            Ok(())
        }
        rec(p, t)?;
        let mut ls = Vec::new();
        t.leaves(&mut ls);
        let mut seen = vec![false; ls.len()];
        for (l, pos) in &ls {
            if *l == 0 || *l > ls.len() || seen[l - 1] {
                return Err(Diagnostic::new(*pos, format!("leaf labels must be 1..{} each used once; `{l}` breaks this", ls.len())));
            }
            seen[l - 1] = true;
        }
        Ok(())
    };
    let check_expr = |e: &Expr| -> std::result::Result<(), Diagnostic> {
        for t in &e.terms {
            check_tree(&t.tree)?;
            let mut ls = Vec::new();
            t.tree.leaves(&mut ls);
            if let Some(images) = &t.perm {
                let zero_based: Vec<usize> = images.iter().map(|&i| i.wrapping_sub(1)).collect();
                if images.len() != ls.len() || Perm::from_images(zero_based).is_err() {
                    return Err(Diagnostic::new(t.pos, format!("`·[…]` must be a permutation of 1..{}", ls.len())));
                }
            }
        }
        Ok(())
    };
    for d in &p.diffs {
        let g = p.gens.iter().find(|g| g.name == d.gen).ok_or_else(|| Diagnostic::new(d.pos, format!("undeclared generator `{}`", d.gen)))?;
        check_expr(&d.value)?;
        for t in &d.value.terms {
            if t.tree.vertices() != 1 {
                return Err(Diagnostic::new(t.pos, "a differential takes values in the generators: use single-vertex terms"));
            }
            let mut ls = Vec::new();
            t.tree.leaves(&mut ls);
            if ls.len() != g.arity {
                return Err(Diagnostic::new(t.pos, format!("∂{} must have arity {}", g.name, g.arity)));
            }
        }
    }
    for r in &p.rels {
        check_expr(r)?;
    }
    Ok(())
}

impl fmt::Display for TreeLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeLit::Leaf(l, _) => write!(f, "{l}"),
            TreeLit::Node(name, ch, _) => {
                write!(f, "{name}(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.num < 0;
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = t.coeff.num.unsigned_abs();
            if t.coeff.den != 1 {
                write!(f, "{a}/{}*", t.coeff.den)?;
            } else if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "{}", t.tree)?;
            if let Some(p) = &t.perm {
                write!(f, "·[{}]", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(field) = self.field {
            writeln!(f, "field {field};")?;
        }
        for g in &self.gens {
            writeln!(f, "gen {} : arity {}, degree {}, action {};", g.name, g.arity, g.degree, g.action.keyword())?;
        }
        for d in &self.diffs {
            writeln!(f, "diff {} = {};", d.gen, d.value)?;
        }
        for r in &self.rels {
            writeln!(f, "rel {r};")?;
        }
        Ok(())
    }
}

impl Presentation {
    /// The same presentation with every position reset, for comparisons.
    pub fn without_positions(&self) -> Presentation {
        fn tree(t: &TreeLit) -> TreeLit {
            match t {
                TreeLit::Leaf(l, _) => TreeLit::Leaf(*l, Pos::default()),
                TreeLit::Node(n, ch, _) => TreeLit::Node(n.clone(), ch.iter().map(tree).collect(), Pos::default()),
            }
        }
        let expr = |e: &Expr| Expr {
            terms: e.terms.iter().map(|t| Term { coeff: t.coeff, tree: tree(&t.tree), perm: t.perm.clone(), pos: Pos::default() }).collect(),
            pos: Pos::default(),
        };
        Presentation {
            field: self.field,
            gens: self.gens.iter().map(|g| GenDecl { pos: Pos::default(), ..g.clone() }).collect(),
            diffs: self.diffs.iter().map(|d| DiffDecl { gen: d.gen.clone(), value: expr(&d.value), pos: Pos::default() }).collect(),
            rels: self.rels.iter().map(expr).collect(),
        }
    }
}

/// The generators as a Σ-module, and where each declaration's basis starts.
struct Generators {
    x: Arc<SModule>,
    /// (arity, first basis index) per declaration
    slots: Vec<(usize, usize)>,
}

fn generators(p: &Presentation, field: Field, max_arity: usize) -> Result<Generators> {
    let mut basis: Vec<Vec<BasisElem>> = vec![Vec::new(); max_arity + 1];
    let mut owner: Vec<Vec<(Action, usize)>> = vec![Vec::new(); max_arity + 1];
    let mut slots = Vec::new();
    for g in &p.gens {
        let n = g.arity;
        if n > max_arity {
            slots.push((n, usize::MAX));
            continue;
        }
        let start = basis[n].len();
        slots.push((n, start));
        match g.action {
            Action::Trivial | Action::Sign => {
                basis[n].push(BasisElem::new(g.name.clone(), g.degree));
                owner[n].push((g.action, start));
            }
            Action::Regular => {
                for (k, s) in Perm::all(n).iter().enumerate() {
                    let name = if k == 0 { g.name.clone() } else { format!("{}·{s}", g.name) };
                    basis[n].push(BasisElem::new(name, g.degree));
                    owner[n].push((Action::Regular, start));
                }
            }
        }
    }
    let perms: Vec<Vec<Perm>> = (0..=max_arity).map(Perm::all).collect();
    let comps = basis.into_iter().map(|b| Arc::new(GradedSpace::new(field, b))).collect();
    let x = SModule::from_basis_action(field, comps, |n, i, j| {
        let (action, start) = owner[n][j];
        match action {
            Action::Trivial => SparseVec::unit(j, field),
            Action::Sign => SparseVec::single(j, field.from_i64(-1)),
            Action::Regular => SparseVec::unit(start + perm_rank(&(&perms[n][j - start] * &Perm::adjacent(n, i))), field),
        }
    })?;
    Ok(Generators { x: Arc::new(x), slots })
}

fn to_tree(p: &Presentation, slots: &[(usize, usize)], t: &TreeLit) -> Tree {
    match t {
        TreeLit::Leaf(l, _) => Tree::Leaf(l - 1),
        TreeLit::Node(name, ch, _) => {
            let k = p.gens.iter().position(|g| &g.name == name).expect("validated");
            Tree::Node(Gen { arity: slots[k].0, index: slots[k].1 }, ch.iter().map(|c| to_tree(p, slots, c)).collect())
        }
    }
}

fn beyond(p: &Presentation, slots: &[(usize, usize)], t: &TreeLit) -> bool {
    match t {
        TreeLit::Leaf(..) => false,
        TreeLit::Node(name, ch, _) => {
            let k = p.gens.iter().position(|g| &g.name == name).expect("validated");
            slots[k].1 == usize::MAX || ch.iter().any(|c| beyond(p, slots, c))
        }
    }
}

fn coefficient(field: Field, c: Coeff, pos: Pos) -> Result<Scalar> {
    let den = field.from_i64(i64::try_from(c.den).map_err(|_| Error::Parse(format!("{}:{}: denominator out of range", pos.line, pos.col)))?);
    let inv = den.inv().ok_or_else(|| Error::Parse(format!("{}:{}: denominator {} vanishes in {field}", pos.line, pos.col, c.den)))?;
    Ok(&field.from_i64(c.num) * &inv)
}

/// A presentation turned into operads.
#[derive(Clone, Debug)]
pub struct Built {
    pub free: FreeOperad,
    /// The free operad modulo the ideal generated by the relations.
    pub operad: Arc<Operad>,
    pub notes: Vec<String>,
}

/// The free operad on the generators, coequalized by F(R) ⇉ F(X) where R is
/// the Σ-module spanned by the relations: one arrow includes R, the other is zero.
pub fn build(p: &Presentation, default_field: Field, profile: TruncationProfile) -> Result<Built> {
    let field = p.field.unwrap_or(default_field);
    let n_max = profile.max_arity;
    let mut notes = Vec::new();
    let Generators { x, slots } = generators(p, field, n_max)?;
    for (g, s) in p.gens.iter().zip(&slots) {
        if s.1 == usize::MAX {
            notes.push(format!("generator {} has arity {} beyond the truncation and is ignored", g.name, g.arity));
        }
    }
    let x = with_differentials(p, &x, &slots)?;
    let fx = FreeOperad::new(x.clone(), profile)?.with_name("F");
    let mut rels: Vec<Vec<SparseVec>> = vec![Vec::new(); n_max + 1];
    for r in &p.rels {
        let at = |msg: String| Error::Parse(format!("{}:{}: {msg}", r.pos.line, r.pos.col));
        let mut ls = Vec::new();
        r.terms[0].tree.leaves(&mut ls);
        let arity = ls.len();
        let mut degree = None;
        let mut acc = SparseVec::new();
        let mut skipped = false;
        for t in &r.terms {
            let mut ls = Vec::new();
            t.tree.leaves(&mut ls);
            if ls.len() != arity {
                return Err(at(format!("inhomogeneous relation: arities {arity} and {}", ls.len())));
            }
            if beyond(p, &slots, &t.tree) {
                skipped = true;
                continue;
            }
            let tree = to_tree(p, &slots, &t.tree);
            let d = tree.degree(&x);
            if degree.is_some_and(|e| e != d) {
                return Err(at(format!("inhomogeneous relation: degrees {} and {d}", degree.unwrap())));
            }
            degree = Some(d);
            if arity > n_max {
                skipped = true;
                continue;
            }
            if t.tree.vertices() > profile.max_depth {
                return Err(Error::Overflow(format!("{}:{}: `{}` has more than {} vertices", t.pos.line, t.pos.col, t.tree, profile.max_depth)));
            }
            let mut v = fx.vector(&tree).expect("within the vertex budget");
            if let Some(images) = &t.perm {
                let s = Perm::from_images(images.iter().map(|i| i - 1).collect()).expect("validated");
                v = fx.operad.module().act(arity, &v, &s);
            }
            acc = acc.add_scaled(&v, &coefficient(field, t.coeff, t.pos)?);
        }
        if skipped {
            notes.push(format!("relation at {}:{} lies beyond the truncation and is ignored", r.pos.line, r.pos.col));
        } else {
            rels[arity].push(acc);
        }
    }
    if rels.iter().all(|r| r.iter().all(SparseVec::is_zero)) {
        let operad = fx.operad.clone();
        return Ok(Built { free: fx, operad, notes });
    }
    let ufx = fx.operad.module().clone();
    let (r, incl) = generated_submodule(&ufx, &rels, "r")?;
    let fr = FreeOperad::new(r.clone(), profile)?.with_name("F(R)");
    let f = theta_inverse(&fr, fx.operad.clone(), &incl)?;
    let g = theta_inverse(&fr, fx.operad.clone(), &SModuleMap::zero(r, ufx))?;
    let colim = coequalizer(&f, &g, profile)?;
    let mut op = (*colim.operad).clone();
    op.name = "F/(R)".into();
    Ok(Built { free: fx, operad: Arc::new(op), notes })
}

fn with_differentials(p: &Presentation, x: &Arc<SModule>, slots: &[(usize, usize)]) -> Result<Arc<SModule>> {
    if p.diffs.is_empty() {
        return Ok(x.clone());
    }
    let field = x.field();
    let mut diffs: Vec<Matrix> = x.components().iter().map(|c| Matrix::zero(field, c.dim(), c.dim())).collect();
    for d in &p.diffs {
        let k = p.gens.iter().position(|g| g.name == d.gen).expect("validated");
        let (n, start) = slots[k];
        if start == usize::MAX {
            continue;
        }
        let mut value = SparseVec::new();
        for t in &d.value.terms {
            let tree = to_tree(p, slots, &t.tree);
            let mut v = SparseVec::new();
            for (nt, c) in normalize(x, &tree) {
                let Tree::Node(g, _) = nt else { unreachable!("single vertex") };
                v = v.add_scaled(&SparseVec::unit(g.index, field), &c);
            }
            if let Some(images) = &t.perm {
                v = x.act(n, &v, &Perm::from_images(images.iter().map(|i| i - 1).collect()).expect("validated"));
            }
            value = value.add_scaled(&v, &coefficient(field, t.coeff, t.pos)?);
        }
        let space = x.component(n);
        if value.iter().any(|(i, _)| space.degree(*i) != p.gens[k].degree - 1) {
            return Err(Error::Parse(format!("{}:{}: ∂{} must have degree {}", d.pos.line, d.pos.col, d.gen, p.gens[k].degree - 1)));
        }
        // for a regular generator ∂(g·σ) = ∂(g)·σ
        let orbit: Vec<Perm> = if p.gens[k].action == Action::Regular { Perm::all(n) } else { vec![Perm::identity(n)] };
        for (j, s) in orbit.iter().enumerate() {
            diffs[n].set_column(start + j, x.act(n, &value, s));
        }
    }
    let comps: Vec<Arc<GradedSpace>> = x.components().iter().zip(diffs).map(|(c, d)| Ok(Arc::new((**c).clone().with_differential(d)?))).collect::<Result<_>>()?;
    let gens = (0..=x.max_arity()).map(|n| (0..n.saturating_sub(1)).map(|i| x.generator(n, i).clone()).collect()).collect();
    let y = SModule::new(field, comps, gens)?;
    for n in 0..=y.max_arity() {
        for i in 0..n.saturating_sub(1) {
            let g = y.generator(n, i);
            let d = y.component(n).differential();
            if g.compose(d) != d.compose(g) {
                return Err(Error::Parse(format!("the differential does not commute with the Σ_{n} action")));
            }
        }
    }
    Ok(Arc::new(y))
}
