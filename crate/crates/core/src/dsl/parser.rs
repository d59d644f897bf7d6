//! Recursive-descent parser. Names are resolved and operator expressions are
//! type-checked while parsing, so every diagnostic points at a token.

use std::collections::{HashMap, HashSet};

use super::ast::{Decl, DeclKind, OpAst, Pos, Program, RelAst, SetLit, Span};
use super::lexer::{tokenize, Tok, Token};
use super::DslError;
use crate::relalg::TransformKind;

pub const KEYWORDS: &[&str] = &[
    "universe",
    "relation",
    "operator",
    "on",
    "angel",
    "demon",
    "ortho",
    "dual",
    "id",
    "interior_from",
    "closure_from",
    "table",
    "conv",
    "not",
];

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(super::lexer::is_word_char)
        && !KEYWORDS.contains(&s)
}

/// `P(domain) → P(codomain)`
type OpType = (String, String);

#[derive(Default)]
struct Scope {
    universes: HashMap<String, Vec<String>>,
    relations: HashMap<String, (String, String)>,
    operators: HashMap<String, OpType>,
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    scope: Scope,
}

pub fn parse(src: &str) -> Result<Program, DslError> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        at: 0,
        scope: Scope::default(),
    };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(Program { decls })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, DslError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{kw}`")])
        }
    }

    fn identifier(&mut self, what: &str) -> Result<(String, Pos), DslError> {
        match self.peek().clone() {
            Tok::Word(w) if is_identifier(&w) => {
                let pos = self.pos();
                self.bump();
                Ok((w, pos))
            }
            _ => self.fail(&[what]),
        }
    }

    fn element(&mut self) -> Result<(String, Pos), DslError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                let pos = self.pos();
                self.bump();
                Ok((w, pos))
            }
            _ => self.fail(&["an element name"]),
        }
    }

    fn universe_ref(&mut self) -> Result<(String, Pos), DslError> {
        let (name, pos) = self.identifier("a universe name")?;
        if !self.scope.universes.contains_key(&name) {
            return Err(DslError::UnknownName {
                kind: "universe",
                name,
                pos,
            });
        }
        Ok((name, pos))
    }

    fn check_element(&self, universe: &str, name: &str, pos: Pos) -> Result<usize, DslError> {
        self.scope.universes[universe]
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| DslError::UnknownName {
                kind: "element",
                name: format!("{name} (in universe {universe})"),
                pos,
            })
    }

    /// `a, b, c` up to (not including) the closing token.
    fn comma_list<T>(&mut self, close: Tok, mut item: impl FnMut(&mut Self) -> Result<T, DslError>) -> Result<Vec<T>, DslError> {
        let mut out = Vec::new();
        if *self.peek() == close {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else if *self.peek() == close {
                return Ok(out);
            } else {
                return self.fail(&[&Tok::Comma.describe(), &close.describe()]);
            }
        }
    }

    fn decl(&mut self) -> Result<Decl, DslError> {
        let start = self.pos();
        let kind = if self.at_keyword("universe") {
            self.universe_decl()?
        } else if self.at_keyword("relation") {
            self.relation_decl()?
        } else if self.at_keyword("operator") {
            self.operator_decl()?
        } else {
            return self.fail(&["`universe`", "`relation`", "`operator`"]);
        };
        let end = self.tokens[self.at.saturating_sub(1)].end;
        Ok(Decl {
            kind,
            span: Span { start, end },
        })
    }

    fn universe_decl(&mut self) -> Result<DeclKind, DslError> {
        self.keyword("universe")?;
        let (name, pos) = self.identifier("a universe name")?;
        if self.scope.universes.contains_key(&name) {
            return Err(DslError::DuplicateName {
                kind: "universe",
                name,
                pos,
            });
        }
        self.expect(Tok::Eq)?;
        self.expect(Tok::LBrace)?;
        let elems = self.comma_list(Tok::RBrace, |p| p.element())?;
        self.expect(Tok::RBrace)?;
        let mut seen = HashSet::new();
        for (e, pos) in &elems {
            if !seen.insert(e.clone()) {
                return Err(DslError::DuplicateName {
                    kind: "element",
                    name: e.clone(),
                    pos: *pos,
                });
            }
        }
        let labels: Vec<String> = elems.into_iter().map(|(e, _)| e).collect();
        self.scope.universes.insert(name.clone(), labels.clone());
        Ok(DeclKind::Universe { name, labels })
    }

    fn relation_decl(&mut self) -> Result<DeclKind, DslError> {
        self.keyword("relation")?;
        let (name, pos) = self.identifier("a relation name")?;
        if self.scope.relations.contains_key(&name) {
            return Err(DslError::DuplicateName {
                kind: "relation",
                name,
                pos,
            });
        }
        self.expect(Tok::Colon)?;
        let (source, _) = self.universe_ref()?;
        self.expect(Tok::Arrow)?;
        let (target, _) = self.universe_ref()?;
        self.expect(Tok::Eq)?;
        self.expect(Tok::LBrace)?;
        let pairs = self.comma_list(Tok::RBrace, |p| {
            p.expect(Tok::LParen)?;
            let (x, xpos) = p.element()?;
            p.check_element(&source, &x, xpos)?;
            p.expect(Tok::Comma)?;
            let (y, ypos) = p.element()?;
            p.check_element(&target, &y, ypos)?;
            p.expect(Tok::RParen)?;
            Ok((x, y))
        })?;
        self.expect(Tok::RBrace)?;
        self.scope.relations.insert(name.clone(), (source.clone(), target.clone()));
        Ok(DeclKind::Relation {
            name,
            source,
            target,
            pairs,
        })
    }

    fn operator_decl(&mut self) -> Result<DeclKind, DslError> {
        self.keyword("operator")?;
        let (name, pos) = self.identifier("an operator name")?;
        if self.scope.operators.contains_key(&name) {
            return Err(DslError::DuplicateName {
                kind: "operator",
                name,
                pos,
            });
        }
        let (domain, codomain) = if self.at_keyword("on") {
            self.bump();
            (self.universe_ref()?.0, None)
        } else if *self.peek() == Tok::Colon {
            self.bump();
            let (d, _) = self.universe_ref()?;
            self.expect(Tok::Arrow)?;
            let (c, _) = self.universe_ref()?;
            (d, Some(c))
        } else {
            return self.fail(&["`on`", "`:`"]);
        };
        self.expect(Tok::Eq)?;
        let header: OpType = (domain.clone(), codomain.clone().unwrap_or_else(|| domain.clone()));
        let expr_pos = self.pos();
        let (expr, ty) = self.opexpr(&header)?;
        if ty != header {
            return Err(DslError::TypeMismatch {
                pos: expr_pos,
                message: format!(
                    "operator `{name}` is declared P({}) -> P({}) but its expression is P({}) -> P({})",
                    header.0, header.1, ty.0, ty.1
                ),
            });
        }
        self.scope.operators.insert(name.clone(), header);
        Ok(DeclKind::Operator {
            name,
            domain,
            codomain,
            expr,
        })
    }

    fn opexpr(&mut self, header: &OpType) -> Result<(OpAst, OpType), DslError> {
        let (mut lhs, mut lty) = self.atom(header)?;
        while *self.peek() == Tok::Dot {
            let dot = self.bump().pos;
            let (rhs, rty) = self.atom(header)?;
            if rty.1 != lty.0 {
                return Err(DslError::TypeMismatch {
                    pos: dot,
                    message: format!(
                        "cannot compose P({}) -> P({}) after P({}) -> P({})",
                        lty.0, lty.1, rty.0, rty.1
                    ),
                });
            }
            lty = (rty.0, lty.1);
            lhs = OpAst::Compose(Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, lty))
    }

    fn endo_header(&self, header: &OpType, what: &str, pos: Pos) -> Result<OpType, DslError> {
        if header.0 == header.1 {
            Ok(header.clone())
        } else {
            Err(DslError::TypeMismatch {
                pos,
                message: format!("`{what}` needs an endo-operator declaration (`on X`)"),
            })
        }
    }

    fn atom(&mut self, header: &OpType) -> Result<(OpAst, OpType), DslError> {
        let pos = self.pos();
        let word = match self.peek().clone() {
            Tok::Word(w) => w,
            Tok::LParen => {
                self.bump();
                let inner = self.opexpr(header)?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            _ => return self.fail(&["an operator expression"]),
        };
        let transform = match word.as_str() {
            "angel" => Some(TransformKind::Angel),
            "demon" => Some(TransformKind::Demon),
            "ortho" => Some(TransformKind::Ortho),
            _ => None,
        };
        if let Some(kind) = transform {
            self.bump();
            self.expect(Tok::LParen)?;
            let (rel, (x, y)) = self.relexpr()?;
            self.expect(Tok::RParen)?;
            return Ok((OpAst::Transform(kind, rel), (y, x)));
        }
        match word.as_str() {
            "dual" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let (inner, ty) = self.opexpr(header)?;
                self.expect(Tok::RParen)?;
                if ty.0 != ty.1 {
                    return Err(DslError::TypeMismatch {
                        pos,
                        message: format!("`dual` needs an endo-operator, found P({}) -> P({})", ty.0, ty.1),
                    });
                }
                Ok((OpAst::Dual(Box::new(inner)), ty))
            }
            "id" => {
                self.bump();
                Ok((OpAst::Identity, self.endo_header(header, "id", pos)?))
            }
            "interior_from" | "closure_from" => {
                self.bump();
                let ty = self.endo_header(header, &word, pos)?;
                let family = self.family(&ty.0)?;
                let ast = if word == "interior_from" {
                    OpAst::InteriorFrom(family)
                } else {
                    OpAst::ClosureFrom(family)
                };
                Ok((ast, ty))
            }
            "table" => {
                self.bump();
                let entries = self.table(header, pos)?;
                Ok((OpAst::Table(entries), header.clone()))
            }
            _ if is_identifier(&word) => {
                self.bump();
                match self.scope.operators.get(&word) {
                    Some(ty) => Ok((OpAst::Ref(word), ty.clone())),
                    None => Err(DslError::UnknownName {
                        kind: "operator",
                        name: word,
                        pos,
                    }),
                }
            }
            _ => self.fail(&["an operator expression"]),
        }
    }

    /// Returns the expression and the relation's (source, target).
    fn relexpr(&mut self) -> Result<(RelAst, (String, String)), DslError> {
        if self.at_keyword("conv") || self.at_keyword("not") {
            let conv = self.at_keyword("conv");
            self.bump();
            self.expect(Tok::LParen)?;
            let (inner, (x, y)) = self.relexpr()?;
            self.expect(Tok::RParen)?;
            return Ok(if conv {
                (RelAst::Converse(Box::new(inner)), (y, x))
            } else {
                (RelAst::Complement(Box::new(inner)), (x, y))
            });
        }
        let (name, pos) = self.identifier("a relation expression")?;
        match self.scope.relations.get(&name) {
            Some(ty) => Ok((RelAst::Named(name), ty.clone())),
            None => Err(DslError::UnknownName {
                kind: "relation",
                name,
                pos,
            }),
        }
    }

    fn set_lit(&mut self, universe: &str) -> Result<(SetLit, u64), DslError> {
        self.expect(Tok::LBrace)?;
        let elems = self.comma_list(Tok::RBrace, |p| p.element())?;
        self.expect(Tok::RBrace)?;
        let mut mask = 0u64;
        for (e, pos) in &elems {
            let i = self.check_element(universe, e, *pos)?;
            if i < 64 {
                mask |= 1 << i;
            }
        }
        Ok((elems.into_iter().map(|(e, _)| e).collect(), mask))
    }

    fn family(&mut self, universe: &str) -> Result<Vec<SetLit>, DslError> {
        self.expect(Tok::LBrace)?;
        let sets = self.comma_list(Tok::RBrace, |p| p.set_lit(universe).map(|(s, _)| s))?;
        self.expect(Tok::RBrace)?;
        Ok(sets)
    }

    fn table(&mut self, header: &OpType, pos: Pos) -> Result<Vec<(SetLit, SetLit)>, DslError> {
        let n = self.scope.universes[&header.0].len();
        if n > 26 {
            return Err(DslError::BadTable {
                pos,
                message: format!("universe `{}` is too large for a table literal", header.0),
            });
        }
        self.expect(Tok::LBrace)?;
        let mut seen = HashSet::new();
        let entries = self.comma_list(Tok::RBrace, |p| {
            let at = p.pos();
            let (input, mask) = p.set_lit(&header.0)?;
            if !seen.insert(mask) {
                return Err(DslError::BadTable {
                    pos: at,
                    message: "input listed twice".into(),
                });
            }
            p.expect(Tok::Arrow)?;
            let (output, _) = p.set_lit(&header.1)?;
            Ok((input, output))
        })?;
        self.expect(Tok::RBrace)?;
        if entries.len() != 1 << n {
            return Err(DslError::BadTable {
                pos,
                message: format!("table lists {} of the {} inputs", entries.len(), 1u64 << n),
            });
        }
        Ok(entries)
    }
}
