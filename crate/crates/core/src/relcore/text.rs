//! Line-oriented text format for signatures, structures and lifts.
//!
//! ```text
//! # a directed edge
//! signature g { E/2 C1/1 lift C2/1 lift }
//! structure s : g { universe = {a, b} ; E = {(a, b)} ; C1 = {(a)} ; C2 = {(b)} ; cover = partition }
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::lift::{CoverMode, Lift};
use super::signature::{Signature, Symbol};
use super::structure::Structure;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Punct(char),
    /// `!=`
    Ne,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (li + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Word(word),
                    line,
                    col,
                });
                continue;
            }
            if c == '!' && chars.get(i + 1) == Some(&'=') {
                out.push(Token {
                    tok: Tok::Ne,
                    line,
                    col,
                });
                i += 2;
                continue;
            }
            if "{}()[],;=/:!&|".contains(c) {
                out.push(Token {
                    tok: Tok::Punct(c),
                    line,
                    col,
                });
                i += 1;
                continue;
            }
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    let line = text.lines().count().max(1);
    out.push(Token {
        tok: Tok::Eof,
        line,
        col: 1,
    });
    Ok(out)
}

/// Whether `s` lexes as a single word (element or structure name).
pub(crate) fn is_word(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Recursive-descent helper over a token list.
pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    pub fn position(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", describe(self.peek())))
        }
    }

    pub fn expect_keyword(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.error(format!("expected `{w}`, found {}", describe(self.peek())))
        }
    }

    pub fn expect_word(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.next();
                Ok(w)
            }
            other => self.error(format!("expected a name, found {}", describe(&other))),
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        let (line, col) = self.position();
        let w = self.expect_word()?;
        if super::signature::is_identifier(&w) {
            Ok(w)
        } else {
            Err(Error::Syntax {
                line,
                col,
                msg: format!("`{w}` is not an identifier"),
            })
        }
    }

    pub fn expect_number(&mut self) -> Result<usize> {
        let (line, col) = self.position();
        let w = self.expect_word()?;
        w.parse().map_err(|_| Error::Syntax {
            line,
            col,
            msg: format!("expected a number, found `{w}`"),
        })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Ne => "`!=`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// A parsed file: signatures and structures in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signatures: Vec<Arc<Signature>>,
    pub structures: Vec<NamedStructure>,
}

#[derive(Debug, Clone)]
pub struct NamedStructure {
    pub name: String,
    pub structure: Structure,
    /// Present when the block declared `cover = ...`.
    pub cover: Option<CoverMode>,
}

impl Document {
    pub fn signature(&self, name: &str) -> Option<&Arc<Signature>> {
        self.signatures.iter().find(|s| s.name() == name)
    }

    pub fn structure(&self, name: &str) -> Option<&NamedStructure> {
        self.structures.iter().find(|s| s.name == name)
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut p = Parser::new(text)?;
    let mut doc = Document::default();
    while !p.at_eof() {
        if p.is_word("signature") {
            let sig = parse_signature_block(&mut p)?;
            doc.signatures.push(Arc::new(sig));
        } else if p.is_word("structure") {
            let s = parse_structure_block(&mut p, &doc.signatures)?;
            doc.structures.push(s);
        } else {
            return p.error(format!(
                "expected `signature` or `structure`, found {}",
                describe(p.peek())
            ));
        }
    }
    Ok(doc)
}

pub(crate) fn parse_signature_block(p: &mut Parser) -> Result<Signature> {
    p.expect_keyword("signature")?;
    let name = p.expect_ident()?;
    p.expect_punct('{')?;
    let mut symbols = Vec::new();
    while !p.eat_punct('}') {
        let (line, col) = p.position();
        let sym = p.expect_ident()?;
        p.expect_punct('/')?;
        let arity = p.expect_number()?;
        let lift = p.eat_word("lift");
        if symbols.iter().any(|s: &Symbol| s.name == sym) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("duplicate symbol `{sym}`"),
            });
        }
        if arity == 0 {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("symbol `{sym}` has arity 0"),
            });
        }
        symbols.push(Symbol { name: sym, arity, lift });
        p.eat_punct(',');
        if p.at_eof() {
            return p.error("unterminated signature");
        }
    }
    Signature::new(name, symbols)
}

pub(crate) fn parse_structure_block(
    p: &mut Parser,
    sigs: &[Arc<Signature>],
) -> Result<NamedStructure> {
    p.expect_keyword("structure")?;
    let name = p.expect_word()?;
    p.expect_punct(':')?;
    let (line, col) = p.position();
    let sig_name = p.expect_ident()?;
    let sig = sigs
        .iter()
        .find(|s| s.name() == sig_name)
        .cloned()
        .ok_or_else(|| Error::Syntax {
            line,
            col,
            msg: format!("unknown signature `{sig_name}`"),
        })?;
    p.expect_punct('{')?;
    parse_structure_body(p, name, sig)
}

/// Everything after `{` of a structure block, through the closing `}`.
pub(crate) fn parse_structure_body(
    p: &mut Parser,
    name: String,
    sig: Arc<Signature>,
) -> Result<NamedStructure> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut have_universe = false;
    let mut pending: Vec<(usize, Vec<usize>, usize, usize)> = Vec::new();
    let mut cover = None;
    loop {
        if p.eat_punct('}') {
            break;
        }
        if p.eat_punct(';') {
            continue;
        }
        if p.at_eof() {
            return p.error("unterminated structure");
        }
        let (line, col) = p.position();
        let key = p.expect_word()?;
        p.expect_punct('=')?;
        if key == "universe" {
            if have_universe {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: "universe declared twice".into(),
                });
            }
            have_universe = true;
            p.expect_punct('{')?;
            while !p.eat_punct('}') {
                let (l, c) = p.position();
                let e = p.expect_word()?;
                if index.insert(e.clone(), names.len()).is_some() {
                    return Err(Error::Syntax {
                        line: l,
                        col: c,
                        msg: format!("element `{e}` declared twice"),
                    });
                }
                names.push(e);
                if !p.eat_punct(',') && !p.is_punct('}') {
                    return p.error("expected `,` or `}` in universe");
                }
            }
        } else if key == "cover" {
            let (l, c) = p.position();
            let m = p.expect_word()?;
            cover = Some(match m.as_str() {
                "none" => CoverMode::None,
                "covering" => CoverMode::Covering,
                "partition" => CoverMode::Partition,
                _ => {
                    return Err(Error::Syntax {
                        line: l,
                        col: c,
                        msg: format!("unknown cover mode `{m}`"),
                    })
                }
            });
        } else {
            let sym = sig
                .index_of(&key)
                .ok_or_else(|| Error::UnknownSymbol(key.clone()))?;
            if !have_universe {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: "relation listed before `universe`".into(),
                });
            }
            p.expect_punct('{')?;
            while !p.eat_punct('}') {
                let (l, c) = p.position();
                p.expect_punct('(')?;
                let mut t = Vec::new();
                while !p.eat_punct(')') {
                    let e = p.expect_word()?;
                    let id = *index.get(&e).ok_or(Error::UnknownElement(e))?;
                    t.push(id);
                    if !p.eat_punct(',') && !p.is_punct(')') {
                        return p.error("expected `,` or `)` in tuple");
                    }
                }
                pending.push((sym, t, l, c));
                if !p.eat_punct(',') && !p.is_punct('}') {
                    return p.error("expected `,` or `}` in relation");
                }
            }
        }
    }
    let mut s = Structure::new(sig, names.len());
    for (sym, t, _, _) in pending {
        s.add_tuple(sym, t)?;
    }
    let structure = s.with_names(names)?;
    Ok(NamedStructure {
        name,
        structure,
        cover,
    })
}

/// Parse a file holding one structure (the last one if there are several).
pub fn parse_structure(text: &str) -> Result<Structure> {
    let doc = parse_document(text)?;
    doc.structures
        .into_iter()
        .last()
        .map(|s| s.structure)
        .ok_or_else(|| Error::Syntax {
            line: 1,
            col: 1,
            msg: "no structure in input".into(),
        })
}

/// Parse a file holding one lift; a missing `cover` line means no cover.
pub fn parse_lift(text: &str) -> Result<Lift> {
    let doc = parse_document(text)?;
    let ns = doc.structures.into_iter().last().ok_or_else(|| Error::Syntax {
        line: 1,
        col: 1,
        msg: "no structure in input".into(),
    })?;
    Lift::new(ns.structure, ns.cover.unwrap_or(CoverMode::None))
}

pub fn serialize_signature(sig: &Signature) -> String {
    format!("{sig}\n")
}

fn element_names(s: &Structure) -> Vec<String> {
    match s.names() {
        Some(n) => n.to_vec(),
        None => (0..s.size()).map(|i| format!("v{i}")).collect(),
    }
}

/// Emit a `structure` block (without its signature).
pub fn serialize_structure_block(s: &Structure, name: &str, cover: Option<CoverMode>) -> String {
    let names = element_names(s);
    let mut out = String::new();
    let _ = writeln!(out, "structure {name} : {} {{", s.signature().name());
    let _ = writeln!(out, "  universe = {{{}}} ;", names.join(", "));
    for (i, sym) in s.signature().symbols().iter().enumerate() {
        let tuples: Vec<String> = s
            .relation(i)
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&c| names[c].as_str()).collect();
                format!("({})", parts.join(", "))
            })
            .collect();
        let _ = writeln!(out, "  {} = {{{}}} ;", sym.name, tuples.join(", "));
    }
    if let Some(c) = cover {
        let _ = writeln!(out, "  cover = {} ;", c.as_str());
    }
    out.push_str("}\n");
    out
}

/// Signature plus structure, ready to be parsed back.
pub fn serialize_structure(s: &Structure, name: &str) -> String {
    let mut out = serialize_signature(s.signature());
    out.push_str(&serialize_structure_block(s, name, None));
    out
}

pub fn serialize_lift(l: &Lift, name: &str) -> String {
    let mut out = serialize_signature(l.signature());
    out.push_str(&serialize_structure_block(
        l.carrier(),
        name,
        Some(l.cover_mode()),
    ));
    out
}
