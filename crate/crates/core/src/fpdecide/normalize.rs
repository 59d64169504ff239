use std::collections::HashSet;

use crate::canon::canonical_key;
use crate::error::{guard, Error, Result};
use crate::homsearch::{bell, core_of, for_each_partition, maps_to};
use crate::relcore::{
    disjoint_union, CoverMode, HomKind, Lift, PartialConstraints, Structure, Tuple,
};

use super::family::{Pattern, PatternFamily};

/// Default cap on patterns produced while normalizing.
pub const NORMALIZE_LIMIT: u128 = 1 << 16;

/// Elements of `s` carrying each color, per element.
fn colors_of(s: &Structure, colors: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); s.size()];
    for (ci, &c) in colors.iter().enumerate() {
        for t in s.relation(c) {
            out[t[0]].push(ci);
        }
    }
    out
}

/// Rewrite a monadic pattern into patterns whose elements carry exactly one
/// color each: uncolored elements range over every color, and patterns with
/// a multicolored element are dropped (they never map into a partition lift).
pub fn partition_patterns(fam: &PatternFamily, p: &Pattern, limit: u128) -> Result<Vec<Structure>> {
    let colors = fam.colors();
    let s = p.carrier();
    let cs = colors_of(s, &colors);
    if cs.iter().any(|c| c.len() > 1) {
        return Ok(Vec::new());
    }
    let free: Vec<usize> = (0..s.size()).filter(|&x| cs[x].is_empty()).collect();
    let count = (colors.len() as u128).saturating_pow(free.len() as u32);
    guard("uncolored pattern expansions", count, limit)?;
    let mut out = Vec::new();
    let mut pick = vec![0usize; free.len()];
    loop {
        let mut q = s.clone().without_names();
        for (i, &x) in free.iter().enumerate() {
            q.add_tuple(colors[pick[i]], vec![x])?;
        }
        out.push(q);
        let mut i = 0;
        while i < pick.len() {
            pick[i] += 1;
            if pick[i] < colors.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            break;
        }
    }
    Ok(out)
}

/// Quotients of a partition pattern that merge only same-colored elements.
fn color_respecting_images(s: &Structure, colors: &[usize], limit: u128) -> Result<Vec<Structure>> {
    guard("pattern quotients", bell(s.size()), limit)?;
    let cs = colors_of(s, colors);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_partition(s.size(), &mut |blocks, k| {
        let mut rep_color = vec![usize::MAX; k];
        for (x, &b) in blocks.iter().enumerate() {
            let c = cs[x].first().copied().unwrap_or(usize::MAX);
            if rep_color[b] == usize::MAX {
                rep_color[b] = c;
            } else if rep_color[b] != c {
                return;
            }
        }
        let img = s.image(blocks, k);
        if seen.insert(canonical_key(&img)) {
            out.push(img);
        }
    });
    Ok(out)
}

/// Keep the hom-minimal members: drop every structure receiving a
/// homomorphism from another member; among equivalent ones keep the first.
pub(crate) fn minimal_members(items: Vec<Structure>) -> Vec<Structure> {
    let n = items.len();
    let mut keep = vec![true; n];
    for j in 0..n {
        for i in 0..n {
            if i == j || !keep[i] || !keep[j] {
                continue;
            }
            if maps_to(&items[i], &items[j]) {
                let back = maps_to(&items[j], &items[i]);
                if !back || i < j {
                    keep[j] = false;
                }
            }
        }
    }
    items
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

/// Same language, smaller family: partition-normalized, closed under
/// color-respecting quotients, core-reduced, deduplicated and hom-minimal.
pub fn normalize_family(fam: &PatternFamily) -> Result<PatternFamily> {
    normalize_family_with_limit(fam, NORMALIZE_LIMIT)
}

pub fn normalize_family_with_limit(fam: &PatternFamily, limit: u128) -> Result<PatternFamily> {
    if !fam.is_monadic() {
        return Err(Error::Precondition(
            "normalization needs a monadic family".into(),
        ));
    }
    if fam.kind != HomKind::Plain {
        return Err(Error::Precondition(format!(
            "normalization needs plain matching, family uses {}",
            fam.kind
        )));
    }
    let colors = fam.colors();
    let mut pool: Vec<Structure> = Vec::new();
    let mut seen = HashSet::new();
    for p in &fam.patterns {
        for q in partition_patterns(fam, p, limit)? {
            for img in color_respecting_images(&q, &colors, limit)? {
                let c = core_of(&img);
                if seen.insert(canonical_key(&c)) {
                    pool.push(c);
                    guard("normalized patterns", pool.len() as u128, limit)?;
                }
            }
        }
    }
    pool.sort_by_cached_key(|s| (s.size(), s.tuple_count(), canonical_key(s)));
    let minimal = minimal_members(pool);
    let mut out = PatternFamily::new(fam.signature.clone(), HomKind::Plain)?;
    for (i, s) in minimal.into_iter().enumerate() {
        out.push(Pattern::new(format!("n{i}"), Lift::new_unchecked(s, CoverMode::Partition)))?;
    }
    Ok(out)
}

/// Patterns are all pairwise disjoint unions; the language is the union of
/// the two languages.
pub fn union_families(f1: &PatternFamily, f2: &PatternFamily) -> Result<PatternFamily> {
    if f1.signature != f2.signature {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            f1.signature, f2.signature
        )));
    }
    if f1.kind != f2.kind {
        return Err(Error::Precondition(format!(
            "cannot unite a {} family with a {} family",
            f1.kind, f2.kind
        )));
    }
    let mut out = PatternFamily::new(f1.signature.clone(), f1.kind)?;
    for p in &f1.patterns {
        for q in &f2.patterns {
            let carrier = disjoint_union(p.carrier(), q.carrier())?;
            let constraints = union_constraints(f1, p, q, &carrier);
            let cover = if p.lift.cover_mode() == q.lift.cover_mode() && f1.lift_arity == 1 {
                p.lift.cover_mode()
            } else {
                CoverMode::None
            };
            out.push(Pattern {
                name: format!("{}_{}", p.name, q.name),
                lift: Lift::new_unchecked(carrier, cover),
                constraints,
            })?;
        }
    }
    Ok(out)
}

/// Constraints making a match of the union behave like separate matches of
/// both sides: no distinctness across sides, no fullness across sides.
fn union_constraints(
    fam: &PatternFamily,
    p: &Pattern,
    q: &Pattern,
    carrier: &Structure,
) -> Option<PartialConstraints> {
    if fam.kind == HomKind::Plain {
        return None;
    }
    let shift = p.size();
    let pos: Vec<usize> = (0..q.size()).map(|x| x + shift).collect();
    let mut c = p.constraints.clone().unwrap_or_else(|| complete(fam.kind, p));
    let moved = q
        .constraints
        .clone()
        .unwrap_or_else(|| complete(fam.kind, q))
        .renumber(&pos);
    c.distinct.extend(moved.distinct);
    c.free.extend(moved.free);
    if fam.kind == HomKind::Full {
        let n = carrier.size();
        for sym in 0..carrier.signature().len() {
            let mut t = vec![0; carrier.signature().arity(sym)];
            if n == 0 {
                continue;
            }
            loop {
                let left = t.iter().any(|&x| x < shift);
                let right = t.iter().any(|&x| x >= shift);
                if left && right {
                    c.free.insert((sym, t.clone()));
                }
                if !crate::relcore::next_tuple(&mut t, n) {
                    break;
                }
            }
        }
    }
    Some(c)
}

/// The constraints equivalent to "no partial weakening" for one pattern.
fn complete(kind: HomKind, p: &Pattern) -> PartialConstraints {
    let mut c = PartialConstraints::default();
    if kind == HomKind::Injective {
        for x in 0..p.size() {
            for y in x + 1..p.size() {
                c.add_distinct(x, y);
            }
        }
    }
    c
}

/// Replace partially constrained patterns by constraint-free ones defining the
/// same language: injective patterns by all quotients keeping the required
/// pairs apart, full patterns by all completions of their free tuples.
pub fn expand_partial_constraints(fam: &PatternFamily) -> Result<PatternFamily> {
    expand_partial_constraints_with_limit(fam, NORMALIZE_LIMIT)
}

pub fn expand_partial_constraints_with_limit(fam: &PatternFamily, limit: u128) -> Result<PatternFamily> {
    let mut out = PatternFamily::new(fam.signature.clone(), fam.kind)?;
    let mut seen = HashSet::new();
    let mut push = |out: &mut PatternFamily, name: String, s: Structure, cover: CoverMode| -> Result<()> {
        if seen.insert(canonical_key(&s)) {
            out.push(Pattern::new(name, Lift::new_unchecked(s, cover)))?;
        }
        Ok(())
    };
    for p in &fam.patterns {
        let Some(c) = &p.constraints else {
            push(&mut out, p.name.clone(), p.carrier().clone(), p.lift.cover_mode())?;
            continue;
        };
        match fam.kind {
            HomKind::Plain => {
                push(&mut out, p.name.clone(), p.carrier().clone(), p.lift.cover_mode())?;
            }
            HomKind::Injective => {
                if !c.free.is_empty() {
                    return Err(Error::Precondition(
                        "free tuples only apply to full matching".into(),
                    ));
                }
                guard("partial-injectivity quotients", bell(p.size()), limit)?;
                let mut images = Vec::new();
                for_each_partition(p.size(), &mut |blocks, k| {
                    if c.distinct.iter().all(|&(a, b)| blocks[a] != blocks[b]) {
                        images.push(p.carrier().image(blocks, k));
                    }
                });
                for (i, img) in images.into_iter().enumerate() {
                    push(&mut out, format!("{}_q{i}", p.name), img, CoverMode::None)?;
                }
            }
            HomKind::Full => {
                if !c.distinct.is_empty() {
                    return Err(Error::Precondition(
                        "distinctness pairs only apply to injective matching".into(),
                    ));
                }
                let free: Vec<&(usize, Tuple)> = c.free.iter().collect();
                guard(
                    "free tuple completions",
                    1u128.checked_shl(free.len() as u32).unwrap_or(u128::MAX),
                    limit,
                )?;
                for mask in 0..(1u64 << free.len()) {
                    let mut s = p.carrier().clone();
                    for (i, (sym, t)) in free.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            s.add_tuple(*sym, t.clone())?;
                        }
                    }
                    push(&mut out, format!("{}_c{mask}", p.name), s, p.lift.cover_mode())?;
                }
            }
        }
    }
    Ok(out)
}
