use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A relation symbol. `lift` marks symbols of the lifted part of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub lift: bool,
}

impl Symbol {
    pub fn base(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
            lift: false,
        }
    }

    pub fn lifted(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            name: name.into(),
            arity,
            lift: true,
        }
    }
}

/// An ordered list of relation symbols split into a base part and a lift part.
///
/// Equality ignores the display name: two signatures are equal when they list
/// the same symbols in the same order.
#[derive(Debug, Clone)]
pub struct Signature {
    name: String,
    symbols: Vec<Symbol>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

impl Signature {
    pub fn new(name: impl Into<String>, symbols: Vec<Symbol>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "symbol `{}` has arity 0",
                    s.name
                )));
            }
            if !is_identifier(&s.name) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not a valid symbol name",
                    s.name
                )));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{}`",
                    s.name
                )));
            }
        }
        Ok(Signature {
            name: name.into(),
            symbols,
        })
    }

    /// A base-only signature from `(name, arity)` pairs.
    pub fn base(name: impl Into<String>, symbols: &[(&str, usize)]) -> Result<Self> {
        Signature::new(
            name,
            symbols.iter().map(|&(n, a)| Symbol::base(n, a)).collect(),
        )
    }

    /// The signature `{E/2}` of directed graphs.
    pub fn digraph() -> Arc<Signature> {
        Arc::new(Signature::base("digraph", &[("E", 2)]).expect("valid"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn arity(&self, i: usize) -> usize {
        self.symbols[i].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.symbols[i].lift).collect()
    }

    pub fn lift_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.symbols[i].lift).collect()
    }

    pub fn has_lift_part(&self) -> bool {
        self.symbols.iter().any(|s| s.lift)
    }

    /// The signature with every lift symbol removed.
    pub fn base_part(&self) -> Signature {
        Signature {
            name: self.name.clone(),
            symbols: self.symbols.iter().filter(|s| !s.lift).cloned().collect(),
        }
    }

    /// Append lift symbols to a base signature.
    pub fn extend_lift(&self, lift: &[(String, usize)]) -> Result<Signature> {
        let mut symbols = self.symbols.clone();
        symbols.extend(lift.iter().map(|(n, a)| Symbol::lifted(n.clone(), *a)));
        Signature::new(self.name.clone(), symbols)
    }

    /// Common arity of the lift symbols, if they share one.
    pub fn lift_arity(&self) -> Option<usize> {
        let mut it = self.symbols.iter().filter(|s| s.lift).map(|s| s.arity);
        let first = it.next()?;
        it.all(|a| a == first).then_some(first)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature {} {{", self.name)?;
        for s in &self.symbols {
            write!(f, " {}/{}", s.name, s.arity)?;
            if s.lift {
                write!(f, " lift")?;
            }
        }
        write!(f, " }}")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
