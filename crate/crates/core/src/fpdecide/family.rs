use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relcore::text::{is_word, parse_signature_block, parse_structure_body, serialize_structure_block, Parser, Tok};
use crate::relcore::{CoverMode, HomKind, HomMode, Lift, PartialConstraints, Signature, Structure};

/// A forbidden lift together with optional partial constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub name: String,
    pub lift: Lift,
    /// `None` means the family's mode applies in full.
    pub constraints: Option<PartialConstraints>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, lift: Lift) -> Self {
        Pattern {
            name: name.into(),
            lift,
            constraints: None,
        }
    }

    pub fn carrier(&self) -> &Structure {
        self.lift.carrier()
    }

    pub fn size(&self) -> usize {
        self.lift.size()
    }
}

/// A finite set of forbidden lifts matched in one homomorphism category;
/// its language is the set of shadows of partition lifts that no pattern
/// maps into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily {
    pub signature: Arc<Signature>,
    pub patterns: Vec<Pattern>,
    pub kind: HomKind,
    pub lift_arity: usize,
}

impl PatternFamily {
    pub fn new(signature: Arc<Signature>, kind: HomKind) -> Result<Self> {
        let lift = signature.lift_indices();
        if lift.is_empty() {
            return Err(Error::InvalidLift(format!(
                "family signature `{}` has no lift symbols",
                signature.name()
            )));
        }
        let lift_arity = signature.lift_arity().ok_or_else(|| {
            Error::InvalidLift("lift symbols of a family must share one arity".into())
        })?;
        Ok(PatternFamily {
            signature,
            patterns: Vec::new(),
            kind,
            lift_arity,
        })
    }

    /// Add a pattern; its carrier must be over the family signature.
    pub fn push(&mut self, p: Pattern) -> Result<()> {
        if p.lift.signature() != &*self.signature {
            return Err(Error::SignatureMismatch(format!(
                "pattern `{}` is over {}, family over {}",
                p.name,
                p.lift.signature(),
                self.signature
            )));
        }
        self.patterns.push(p);
        Ok(())
    }

    pub fn with_patterns(mut self, ps: Vec<Pattern>) -> Result<Self> {
        for p in ps {
            self.push(p)?;
        }
        Ok(self)
    }

    /// The input signature (lift symbols removed).
    pub fn base_signature(&self) -> Arc<Signature> {
        Arc::new(self.signature.base_part())
    }

    /// Indices of the lift symbols ("colors").
    pub fn colors(&self) -> Vec<usize> {
        self.signature.lift_indices()
    }

    pub fn is_monadic(&self) -> bool {
        self.lift_arity == 1
    }

    pub fn has_partial_constraints(&self) -> bool {
        self.patterns.iter().any(|p| p.constraints.is_some())
    }

    /// Matching mode for one pattern.
    pub fn mode_for(&self, p: &Pattern) -> HomMode {
        match &p.constraints {
            Some(c) if self.kind != HomKind::Plain => HomMode::with_partial(self.kind, c.clone()),
            _ => HomMode::new(self.kind),
        }
    }

    /// Largest pattern universe.
    pub fn max_pattern_size(&self) -> usize {
        self.patterns.iter().map(|p| p.size()).max().unwrap_or(0)
    }

    /// A family over `signature` with no patterns (its language is everything).
    pub fn empty(signature: Arc<Signature>, kind: HomKind) -> Result<Self> {
        PatternFamily::new(signature, kind)
    }
}

/// Parse a family file: one signature, a `mode = ...` line, `structure`
/// blocks (one per pattern) and optional `constraints <pattern> { ... }`.
pub fn parse_family(text: &str) -> Result<PatternFamily> {
    let mut p = Parser::new(text)?;
    let mut sigs: Vec<Arc<Signature>> = Vec::new();
    let mut kind = None;
    let mut patterns: Vec<Pattern> = Vec::new();
    while !p.at_eof() {
        if p.is_word("signature") {
            sigs.push(Arc::new(parse_signature_block(&mut p)?));
        } else if p.is_word("mode") {
            p.next();
            p.expect_punct('=')?;
            let (line, col) = p.position();
            let m = p.expect_word()?;
            kind = Some(HomKind::parse(&m).ok_or(Error::Syntax {
                line,
                col,
                msg: format!("unknown mode `{m}`"),
            })?);
            p.eat_punct(';');
        } else if p.is_word("structure") || p.is_word("pattern") {
            p.next();
            let name = p.expect_word()?;
            p.expect_punct(':')?;
            let (line, col) = p.position();
            let sn = p.expect_ident()?;
            let sig = sigs
                .iter()
                .find(|s| s.name() == sn)
                .cloned()
                .ok_or(Error::Syntax {
                    line,
                    col,
                    msg: format!("unknown signature `{sn}`"),
                })?;
            p.expect_punct('{')?;
            let ns = parse_structure_body(&mut p, name, sig)?;
            let lift = Lift::new(ns.structure, ns.cover.unwrap_or(CoverMode::None))?;
            patterns.push(Pattern::new(ns.name, lift));
        } else if p.is_word("constraints") {
            p.next();
            let (line, col) = p.position();
            let name = p.expect_word()?;
            let idx = patterns
                .iter()
                .position(|q| q.name == name)
                .ok_or(Error::Syntax {
                    line,
                    col,
                    msg: format!("constraints for unknown pattern `{name}`"),
                })?;
            let c = parse_constraints(&mut p, &patterns[idx])?;
            patterns[idx].constraints = Some(c);
        } else {
            return p.error("expected `signature`, `mode`, `structure` or `constraints`");
        }
    }
    let sig = match patterns.first() {
        Some(q) => q.lift.carrier().sig_arc().clone(),
        None => sigs.last().cloned().ok_or(Error::Syntax {
            line: 1,
            col: 1,
            msg: "family without a signature".into(),
        })?,
    };
    let kind = kind.unwrap_or(HomKind::Plain);
    PatternFamily::new(sig, kind)?.with_patterns(patterns)
}

fn parse_constraints(p: &mut Parser, pat: &Pattern) -> Result<PartialConstraints> {
    let s = pat.carrier();
    let names: Vec<String> = (0..s.size()).map(|e| s.element_name(e)).collect();
    let lookup = |w: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == w)
            .ok_or_else(|| Error::UnknownElement(w.to_string()))
    };
    let mut c = PartialConstraints::default();
    p.expect_punct('{')?;
    loop {
        if p.eat_punct('}') {
            break;
        }
        if p.eat_punct(';') {
            continue;
        }
        if p.at_eof() {
            return p.error("unterminated constraints block");
        }
        if p.eat_word("tuple") {
            let sym_name = p.expect_ident()?;
            let sym = s
                .signature()
                .index_of(&sym_name)
                .ok_or(Error::UnknownSymbol(sym_name.clone()))?;
            p.expect_punct('(')?;
            let mut t = Vec::new();
            while !p.eat_punct(')') {
                let w = p.expect_word()?;
                t.push(lookup(&w)?);
                if !p.eat_punct(',') && !p.is_punct(')') {
                    return p.error("expected `,` or `)`");
                }
            }
            let arity = s.signature().arity(sym);
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: sym_name,
                    expected: arity,
                    found: t.len(),
                });
            }
            p.expect_keyword("free")?;
            if s.contains(sym, &t) {
                return p.error("a free tuple must be absent from the pattern");
            }
            c.free.insert((sym, t));
        } else {
            let a = p.expect_word()?;
            if *p.peek() != Tok::Ne {
                return p.error("expected `!=`");
            }
            p.next();
            let b = p.expect_word()?;
            c.add_distinct(lookup(&a)?, lookup(&b)?);
        }
    }
    Ok(c)
}

/// Emit a family in the format read by [`parse_family`].
pub fn serialize_family(fam: &PatternFamily) -> String {
    let mut out = format!("{}\n", fam.signature);
    let _ = writeln!(out, "mode = {}", fam.kind);
    for (i, p) in fam.patterns.iter().enumerate() {
        let name = if is_word(&p.name) {
            p.name.clone()
        } else {
            format!("p{i}")
        };
        let cover = (p.lift.cover_mode() != CoverMode::None).then_some(p.lift.cover_mode());
        out.push_str(&serialize_structure_block(p.carrier(), &name, cover));
        if let Some(c) = &p.constraints {
            let s = p.carrier();
            let nm = |e: usize| match s.names() {
                Some(n) => n[e].clone(),
                None => format!("v{e}"),
            };
            let mut parts: Vec<String> = c
                .distinct
                .iter()
                .map(|&(a, b)| format!("{} != {}", nm(a), nm(b)))
                .collect();
            for (sym, t) in &c.free {
                let args: Vec<String> = t.iter().map(|&e| nm(e)).collect();
                parts.push(format!(
                    "tuple {}({}) free",
                    s.signature().symbol(*sym).name,
                    args.join(", ")
                ));
            }
            let _ = writeln!(out, "constraints {name} {{ {} }}", parts.join(" ; "));
        }
    }
    out
}
