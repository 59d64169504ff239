//! Exhaustive enumeration of small structures.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::canon::canonical_key;
use crate::error::{guard, Result};
use crate::relcore::{next_tuple, Signature, Structure, Tuple};

/// Default bound on labeled structures generated for one universe size.
pub const LABELED_LIMIT: u128 = 1 << 22;

/// Lists at most this many labeled structures are cached between calls.
const CACHE_LIMIT: u128 = 1 << 17;

/// Every possible `(symbol, tuple)` over `0..n`, symbol-major.
pub fn all_tuples(sig: &Signature, n: usize) -> Vec<(usize, Tuple)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for s in 0..sig.len() {
        let mut t = vec![0; sig.arity(s)];
        loop {
            out.push((s, t.clone()));
            if !next_tuple(&mut t, n) {
                break;
            }
        }
    }
    out
}

/// Number of labeled structures on `n` elements, saturating.
pub fn labeled_count(sig: &Signature, n: usize) -> u128 {
    let slots: usize = (0..sig.len())
        .map(|s| n.saturating_pow(sig.arity(s) as u32))
        .fold(0usize, |a, b| a.saturating_add(b));
    if slots >= 127 {
        u128::MAX
    } else {
        1u128 << slots
    }
}

/// Visit every labeled structure on exactly `n` elements; `visit` returns
/// `false` to stop. Returns whether the walk ran to completion.
pub fn for_each_labeled(
    sig: &Arc<Signature>,
    n: usize,
    limit: u128,
    visit: &mut dyn FnMut(&Structure) -> bool,
) -> Result<bool> {
    guard("labeled structures", labeled_count(sig, n), limit)?;
    let slots = all_tuples(sig, n);
    let total: u64 = 1u64 << slots.len();
    for mask in 0..total {
        let mut s = Structure::new(sig.clone(), n);
        for (i, (sym, t)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.add_tuple(*sym, t.clone()).expect("valid slot");
            }
        }
        if !visit(&s) {
            return Ok(false);
        }
    }
    Ok(true)
}

type CacheKey = (Signature, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<Structure>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<Structure>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// One representative per isomorphism class of structures on exactly `n`
/// elements, in order of first labeled appearance.
pub fn structures_of_size(sig: &Arc<Signature>, n: usize, limit: u128) -> Result<Arc<Vec<Structure>>> {
    let count = labeled_count(sig, n);
    guard("labeled structures", count, limit)?;
    let key = ((**sig).clone(), n);
    if count <= CACHE_LIMIT {
        if let Some(v) = cache().lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_labeled(sig, n, limit, &mut |s| {
        if seen.insert(canonical_key(s)) {
            out.push(s.clone());
        }
        true
    })?;
    let out = Arc::new(out);
    if count <= CACHE_LIMIT {
        cache()
            .lock()
            .expect("cache lock")
            .insert(key, out.clone());
    }
    Ok(out)
}

/// Isomorphism classes of structures with at most `max_n` elements, by
/// ascending size.
pub fn structures_up_to(sig: &Arc<Signature>, max_n: usize, limit: u128) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        out.extend(structures_of_size(sig, n, limit)?.iter().cloned());
    }
    Ok(out)
}

/// Walk isomorphism classes by ascending size until `visit` returns `false`.
/// Sizes are generated lazily, so an early stop skips larger sizes.
pub fn for_each_up_to(
    sig: &Arc<Signature>,
    max_n: usize,
    limit: u128,
    visit: &mut dyn FnMut(&Structure) -> bool,
) -> Result<bool> {
    for n in 0..=max_n {
        if labeled_count(sig, n) <= CACHE_LIMIT {
            for s in structures_of_size(sig, n, limit)?.iter() {
                if !visit(s) {
                    return Ok(false);
                }
            }
        } else {
            let mut seen = HashSet::new();
            let done = for_each_labeled(sig, n, limit, &mut |s| {
                !seen.insert(canonical_key(s)) || visit(s)
            })?;
            if !done {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_counts() {
        let sig = Signature::digraph();
        let counts: Vec<usize> = (0..=3)
            .map(|n| structures_of_size(&sig, n, LABELED_LIMIT).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 10, 104]);
    }
}
