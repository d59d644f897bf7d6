use crate::relalg::TransformKind;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
    pub offset: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Byte range of a declaration in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: Pos,
    pub end: usize,
}

/// A parsed program. Equality is structural and ignores source spans.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.decls.len() == other.decls.len()
            && self.decls.iter().zip(&other.decls).all(|(a, b)| a.kind == b.kind)
    }
}

impl Eq for Program {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

pub type SetLit = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Universe {
        name: String,
        labels: Vec<String>,
    },
    Relation {
        name: String,
        source: String,
        target: String,
        pairs: Vec<(String, String)>,
    },
    Operator {
        name: String,
        domain: String,
        /// `None` for `on X` (an endo-operator), `Some(Y)` for `: X -> Y`.
        codomain: Option<String>,
        expr: OpAst,
    },
}

impl DeclKind {
    pub fn name(&self) -> &str {
        match self {
            DeclKind::Universe { name, .. } | DeclKind::Relation { name, .. } | DeclKind::Operator { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpAst {
    Transform(TransformKind, RelAst),
    /// `Compose(outer, inner)`, written `outer . inner`.
    Compose(Box<OpAst>, Box<OpAst>),
    Dual(Box<OpAst>),
    Identity,
    InteriorFrom(Vec<SetLit>),
    ClosureFrom(Vec<SetLit>),
    Table(Vec<(SetLit, SetLit)>),
    Ref(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelAst {
    Named(String),
    Converse(Box<RelAst>),
    Complement(Box<RelAst>),
}
