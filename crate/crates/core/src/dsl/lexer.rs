use super::ast::Pos;
use super::DslError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    Eq,
    Dot,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    pub end: usize,
}

pub fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.char_indices().peekable();
    while let Some(&(off, c)) = chars.peek() {
        let pos = Pos { line, col, offset: off };
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            col += 1;
            out.push(Token { tok, pos, end: off + 1 });
            continue;
        }
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        col += 2;
                        out.push(Token {
                            tok: Tok::Arrow,
                            pos,
                            end: off + 2,
                        });
                    }
                    _ => {
                        return Err(DslError::Syntax {
                            pos,
                            expected: vec!["`->`".into()],
                            found: "`-`".into(),
                        })
                    }
                }
            }
            c if is_word_char(c) => {
                let mut word = String::new();
                let mut end = off;
                while let Some(&(o, c)) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    word.push(c);
                    end = o + 1;
                    chars.next();
                    col += 1;
                }
                out.push(Token {
                    tok: Tok::Word(word),
                    pos,
                    end,
                });
            }
            other => {
                return Err(DslError::Syntax {
                    pos,
                    expected: vec!["a declaration".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    let eof = Pos {
        line,
        col,
        offset: src.len(),
    };
    out.push(Token {
        tok: Tok::Eof,
        pos: eof,
        end: src.len(),
    });
    Ok(out)
}
