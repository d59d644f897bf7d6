//! The `.rl` declaration language.
//!
//! ```text
//! program  := decl*
//! decl     := "universe" NAME "=" "{" names "}"
//!           | "relation" NAME ":" NAME "->" NAME "=" "{" pairs "}"
//!           | "operator" NAME ("on" NAME | ":" NAME "->" NAME) "=" opexpr
//! opexpr   := atom ("." atom)*
//! atom     := ("angel" | "demon" | "ortho") "(" relexpr ")"
//!           | "dual" "(" opexpr ")" | "id"
//!           | "interior_from" family | "closure_from" family
//!           | "table" "{" (set "->" set),* "}"
//!           | NAME | "(" opexpr ")"
//! relexpr  := NAME | "conv" "(" relexpr ")" | "not" "(" relexpr ")"
//! ```
//!
//! `f . g` applies `g` first and is left-associative; `#` starts a comment.
//! For `r : X -> Y` the transformers `angel(r)`, `demon(r)`, `ortho(r)` map
//! `P(Y)` to `P(X)`. `id`, families and tables take their universes from the
//! enclosing declaration.

mod ast;
pub mod emit;
mod eval;
pub mod hasse;
mod lexer;
mod parser;
pub mod print;

use thiserror::Error;

pub use ast::{Decl, DeclKind, OpAst, Pos, Program, RelAst, SetLit, Span};
pub use emit::{emit_record, Record, ToRecord};
pub use eval::{eval, eval_with_cap, Environment};
pub use hasse::emit_hasse;
pub use parser::{is_identifier, parse, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{pos}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String, pos: Pos },
    #[error("{pos}: unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String, pos: Pos },
    #[error("{pos}: type mismatch: {message}")]
    TypeMismatch { pos: Pos, message: String },
    #[error("{pos}: bad table: {message}")]
    BadTable { pos: Pos, message: String },
    #[error("{pos}: in `{name}`: {source}")]
    Eval {
        pos: Pos,
        name: String,
        #[source]
        source: crate::Error,
    },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::DuplicateName { pos, .. }
            | DslError::UnknownName { pos, .. }
            | DslError::TypeMismatch { pos, .. }
            | DslError::BadTable { pos, .. }
            | DslError::Eval { pos, .. } => *pos,
        }
    }
}

/// Parses and evaluates under the default universe cap.
pub fn load(src: &str) -> Result<(Program, Environment), DslError> {
    let p = parse(src)?;
    let env = eval(&p)?;
    Ok((p, env))
}
