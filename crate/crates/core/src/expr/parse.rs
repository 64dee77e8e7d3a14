//! Parser for the `.cwx` text format.
//!
//! ```text
//! cw k=3
//! (join 1 2 (union (v a 1) (v b 2)))
//! ```
//!
//! Whitespace is insignificant after the header; `;` starts a comment that
//! runs to the end of the line.

use super::{CwExpr, Node, NodeKind, Pos};
use crate::error::{Error, Result};
use crate::graph::Color;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

fn is_atom_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

fn err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Lexer<'a> {
        Lexer {
            chars: text.char_indices().peekable(),
            line,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn next_token(&mut self) -> Result<Option<(Tok, Pos)>> {
        loop {
            match self.chars.peek().map(|&(_, c)| c) {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('(') => {
                    let pos = self.pos();
                    self.bump();
                    return Ok(Some((Tok::Open, pos)));
                }
                Some(')') => {
                    let pos = self.pos();
                    self.bump();
                    return Ok(Some((Tok::Close, pos)));
                }
                Some(c) if is_atom_char(c) => {
                    let pos = self.pos();
                    let mut atom = String::new();
                    while let Some(&(_, c)) = self.chars.peek() {
                        if !is_atom_char(c) {
                            break;
                        }
                        atom.push(c);
                        self.bump();
                    }
                    return Ok(Some((Tok::Atom(atom), pos)));
                }
                Some(c) => return Err(err(self.pos(), format!("unexpected character `{c}`"))),
            }
        }
    }
}

enum Head {
    Union,
    Recolor(Color, Color),
    Join(Color, Color),
}

struct Frame {
    head: Head,
    pos: Pos,
    children: Vec<Node>,
}

impl Frame {
    fn arity(&self) -> usize {
        match self.head {
            Head::Union => 2,
            _ => 1,
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    palette: Color,
}

impl Parser<'_> {
    fn expect_token(&mut self, what: &str) -> Result<(Tok, Pos)> {
        let end = self.lexer.pos();
        self.lexer
            .next_token()?
            .ok_or_else(|| err(end, format!("unexpected end of input, expected {what}")))
    }

    fn atom(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.expect_token(what)? {
            (Tok::Atom(a), pos) => Ok((a, pos)),
            (_, pos) => Err(err(pos, format!("expected {what}"))),
        }
    }

    fn color(&mut self) -> Result<Color> {
        let (text, pos) = self.atom("a colour")?;
        let c: Color = text
            .parse()
            .map_err(|_| err(pos, format!("`{text}` is not a colour")))?;
        if !(1..=self.palette).contains(&c) {
            return Err(err(pos, format!("colour {c} outside 1..={}", self.palette)));
        }
        Ok(c)
    }

    fn close(&mut self) -> Result<()> {
        match self.expect_token("`)`")? {
            (Tok::Close, _) => Ok(()),
            (_, pos) => Err(err(pos, "expected `)`")),
        }
    }

    fn distinct(pos: Pos, op: &str, i: Color, j: Color) -> Result<()> {
        if i == j {
            Err(err(pos, format!("{op}: i and j must differ")))
        } else {
            Ok(())
        }
    }

    fn run(mut self) -> Result<Node> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut root: Option<Node> = None;
        loop {
            let Some((tok, pos)) = self.lexer.next_token()? else {
                break;
            };
            if root.is_some() {
                return Err(err(pos, "trailing input after the expression"));
            }
            let finished = match tok {
                Tok::Atom(a) => return Err(err(pos, format!("unexpected `{a}`, expected `(`"))),
                Tok::Open => {
                    let (head, head_pos) = self.atom("an operator")?;
                    match head.as_str() {
                        "v" => {
                            let (vertex, _) = self.atom("a vertex id")?;
                            let color = self.color()?;
                            self.close()?;
                            Some(Node {
                                kind: NodeKind::Leaf { vertex, color },
                                pos: Some(pos),
                            })
                        }
                        "union" => {
                            stack.push(Frame {
                                head: Head::Union,
                                pos,
                                children: Vec::new(),
                            });
                            None
                        }
                        "recolor" | "join" => {
                            let i = self.color()?;
                            let j = self.color()?;
                            Self::distinct(head_pos, &head, i, j)?;
                            let head = if head == "join" {
                                Head::Join(i, j)
                            } else {
                                Head::Recolor(i, j)
                            };
                            stack.push(Frame {
                                head,
                                pos,
                                children: Vec::new(),
                            });
                            None
                        }
                        other => return Err(err(head_pos, format!("unknown operator `{other}`"))),
                    }
                }
                Tok::Close => {
                    let frame = stack.pop().ok_or_else(|| err(pos, "unbalanced `)`"))?;
                    if frame.children.len() != frame.arity() {
                        return Err(err(
                            pos,
                            format!(
                                "operator expects {} operand(s), found {}",
                                frame.arity(),
                                frame.children.len()
                            ),
                        ));
                    }
                    let mut kids = frame.children.into_iter();
                    let kind = match frame.head {
                        Head::Union => {
                            let l = kids.next().unwrap();
                            let r = kids.next().unwrap();
                            NodeKind::Union(Box::new(l), Box::new(r))
                        }
                        Head::Recolor(from, to) => NodeKind::Recolor {
                            from,
                            to,
                            child: Box::new(kids.next().unwrap()),
                        },
                        Head::Join(a, b) => NodeKind::Join {
                            a,
                            b,
                            child: Box::new(kids.next().unwrap()),
                        },
                    };
                    Some(Node {
                        kind,
                        pos: Some(frame.pos),
                    })
                }
            };
            if let Some(node) = finished {
                match stack.last_mut() {
                    Some(parent) => {
                        if parent.children.len() == parent.arity() {
                            let p = node.pos.unwrap_or(pos);
                            return Err(err(p, "too many operands"));
                        }
                        parent.children.push(node);
                    }
                    None => root = Some(node),
                }
            }
        }
        if let Some(open) = stack.last() {
            return Err(err(open.pos, "unclosed `(`"));
        }
        root.ok_or_else(|| err(self.lexer.pos(), "empty expression"))
    }
}

/// Parses a bare expression (no header) over the palette `1..=k`.
pub fn parse_expr(text: &str, k: Color) -> Result<CwExpr> {
    parse_at(text, k, 1)
}

fn parse_at(text: &str, k: Color, first_line: usize) -> Result<CwExpr> {
    if k == 0 {
        return Err(err(
            Pos {
                line: first_line,
                column: 1,
            },
            "palette size must be positive",
        ));
    }
    let root = Parser {
        lexer: Lexer::new(text, first_line),
        palette: k,
    }
    .run()?;
    CwExpr::new(k, root)
}

/// Parses a `.cwx` document: a `cw k=<int>` header line, then one expression.
pub fn parse(text: &str) -> Result<CwExpr> {
    let mut offset = 0;
    for (n, line) in text.split_inclusive('\n').enumerate() {
        let content = line.split(';').next().unwrap_or("");
        if content.trim().is_empty() {
            offset += line.len();
            continue;
        }
        let column = content.len() - content.trim_start().len() + 1;
        let at = |message: &str| Error::Parse {
            line: n + 1,
            column,
            message: message.to_owned(),
        };
        let mut words = content.split_whitespace();
        if words.next() != Some("cw") {
            return Err(at("expected header `cw k=<int>`"));
        }
        let k: Color = words
            .next()
            .and_then(|w| w.strip_prefix("k="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| at("expected header `cw k=<int>`"))?;
        if words.next().is_some() {
            return Err(at("unexpected text after the header"));
        }
        return parse_at(&text[offset + line.len()..], k, n + 2);
    }
    Err(Error::Parse {
        line: 1,
        column: 1,
        message: "missing header `cw k=<int>`".into(),
    })
}
