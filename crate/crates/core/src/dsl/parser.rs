use super::lexer::{lex, Tok};
use super::{Action, Coeff, Diagnostic, DiffDecl, Expr, GenDecl, Pos, Presentation, Term, TreeLit};

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, Diagnostic> {
        Err(Diagnostic::new(self.pos(), format!("expected {expected}, found {}", self.peek())))
    }

    fn punct(&mut self, c: char) -> Result<(), Diagnostic> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{c}`"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Ident(s) if s == k => {
                self.bump();
                Ok(())
            }
            _ => self.error(&format!("`{k}`")),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(Diagnostic::new(p, format!("expected a name, found {t}"))),
        }
    }

    fn int(&mut self) -> Result<u64, Diagnostic> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(n),
            (t, p) => Err(Diagnostic::new(p, format!("expected an integer, found {t}"))),
        }
    }

    fn signed(&mut self) -> Result<i64, Diagnostic> {
        let neg = self.eat('-');
        let p = self.pos();
        let n = i64::try_from(self.int()?).map_err(|_| Diagnostic::new(p, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn program(&mut self) -> Result<Presentation, Diagnostic> {
        let mut out = Presentation::default();
        while *self.peek() != Tok::Eof {
            let (kw, pos) = self.ident()?;
            match kw.as_str() {
                "field" => {
                    let (name, p) = match self.bump() {
                        (Tok::Ident(s), p) => (s, p),
                        (t, p) => return Err(Diagnostic::new(p, format!("expected a field name, found {t}"))),
                    };
                    let f = crate::scalar::Field::parse(&name).map_err(|e| Diagnostic::new(p, e.to_string()))?;
                    out.field = Some(f);
                }
                "gen" => {
                    let (name, _) = self.ident()?;
                    self.punct(':')?;
                    self.keyword("arity")?;
                    let arity = self.int()? as usize;
                    self.punct(',')?;
                    self.keyword("degree")?;
                    let degree = self.signed()? as i32;
                    let mut action = Action::Trivial;
                    if self.eat(',') {
                        self.keyword("action")?;
                        let (a, p) = self.ident()?;
                        action = match a.as_str() {
                            "trivial" => Action::Trivial,
                            "sign" => Action::Sign,
                            "regular" => Action::Regular,
                            _ => return Err(Diagnostic::new(p, format!("unknown action `{a}`; use trivial, sign or regular"))),
                        };
                    }
                    out.gens.push(GenDecl { name, arity, degree, action, pos });
                }
                "diff" => {
                    let (gen, _) = self.ident()?;
                    self.punct('=')?;
                    let value = self.expr()?;
                    out.diffs.push(DiffDecl { gen, value, pos });
                }
                "rel" => out.rels.push(self.expr()?),
                _ => return Err(Diagnostic::new(pos, format!("expected `field`, `gen`, `diff` or `rel`, found `{kw}`"))),
            }
            self.punct(';')?;
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut negative = self.eat('-');
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff.num = -t.coeff.num;
            }
            terms.push(t);
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(Expr { terms, pos })
    }

    fn term(&mut self) -> Result<Term, Diagnostic> {
        let pos = self.pos();
        let mut coeff = Coeff { num: 1, den: 1 };
        if let Tok::Int(n) = *self.peek() {
            if matches!(self.peek2(), Tok::Punct('*') | Tok::Punct('/')) {
                self.bump();
                coeff.num = i64::try_from(n).map_err(|_| Diagnostic::new(pos, "coefficient out of range"))?;
                if self.eat('/') {
                    let p = self.pos();
                    coeff.den = self.int()?;
                    if coeff.den == 0 {
                        return Err(Diagnostic::new(p, "zero denominator"));
                    }
                }
                self.punct('*')?;
            }
        }
        let tree = self.tree()?;
        let mut perm = None;
        if self.eat('·') || self.eat('.') {
            self.punct('[')?;
            let mut images = vec![self.int()? as usize];
            while self.eat(',') {
                images.push(self.int()? as usize);
            }
            self.punct(']')?;
            perm = Some(images);
        }
        Ok(Term { coeff, tree, perm, pos })
    }

    fn tree(&mut self) -> Result<TreeLit, Diagnostic> {
        match self.bump() {
            (Tok::Int(n), pos) => Ok(TreeLit::Leaf(n as usize, pos)),
            (Tok::Ident(name), pos) => {
                self.punct('(')?;
                let mut children = Vec::new();
                if !self.eat(')') {
                    children.push(self.tree()?);
                    while self.eat(',') {
                        children.push(self.tree()?);
                    }
                    self.punct(')')?;
                }
                Ok(TreeLit::Node(name, children, pos))
            }
            (t, p) => Err(Diagnostic::new(p, format!("expected a tree, found {t}"))),
        }
    }
}

/// Syntax only; see [`super::parse`] for the checked entry point.
pub fn parse_syntax(src: &str) -> Result<Presentation, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    p.program()
}
