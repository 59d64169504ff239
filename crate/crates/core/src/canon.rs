//! Canonical forms and isomorphism via individualization-refinement.
//!
//! Every leaf of the search tree yields a relabeling; the canonical form is
//! the lexicographically least encoding over all leaves. Automorphisms found
//! when two leaves agree prune sibling branches in the same orbit.

use crate::relcore::Structure;

/// An isomorphism invariant that is complete: two structures over the same
/// signature have equal keys iff they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<usize>);

struct Ctx<'a> {
    s: &'a Structure,
    /// For each element, the `(symbol, tuple)` pairs it occurs in.
    incident: Vec<Vec<(usize, &'a [usize])>>,
    best: Option<(Vec<usize>, Vec<usize>)>,
    first: Option<(Vec<usize>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

fn refine(ctx: &Ctx, colors: &mut Vec<usize>) {
    let n = colors.len();
    let mut ncolors = count_colors(colors);
    loop {
        let mut keys: Vec<(usize, Vec<Vec<usize>>)> = Vec::with_capacity(n);
        for x in 0..n {
            let mut sig: Vec<Vec<usize>> = ctx.incident[x]
                .iter()
                .map(|&(sym, t)| {
                    let mut k = Vec::with_capacity(2 * t.len() + 1);
                    k.push(sym);
                    k.extend(t.iter().map(|&c| usize::from(c == x)));
                    k.extend(t.iter().map(|&c| colors[c]));
                    k
                })
                .collect();
            sig.sort_unstable();
            keys.push((colors[x], sig));
        }
        let mut sorted: Vec<&(usize, Vec<Vec<usize>>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        for x in 0..n {
            colors[x] = sorted.binary_search(&&keys[x]).expect("present");
        }
        let k = sorted.len();
        if k == ncolors {
            return;
        }
        ncolors = k;
    }
}

fn count_colors(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualize(colors: &[usize], x: usize) -> Vec<usize> {
    let raw: Vec<usize> = colors
        .iter()
        .enumerate()
        .map(|(y, &c)| 2 * c + usize::from(c == colors[x] && y != x))
        .collect();
    let mut sorted = raw.clone();
    sorted.sort_unstable();
    sorted.dedup();
    raw.iter()
        .map(|v| sorted.binary_search(v).expect("present"))
        .collect()
}

fn encode(s: &Structure, lab: &[usize]) -> Vec<usize> {
    let mut out = vec![s.size()];
    for sym in 0..s.signature().len() {
        let mut ts: Vec<Vec<usize>> = s
            .relation(sym)
            .iter()
            .map(|t| t.iter().map(|&c| lab[c]).collect())
            .collect();
        ts.sort_unstable();
        out.push(ts.len());
        for t in ts {
            out.extend(t);
        }
    }
    out
}

fn search(ctx: &mut Ctx, colors: Vec<usize>, prefix: &mut Vec<usize>) {
    let n = colors.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let target = (0..n).find(|&c| counts[c] >= 2);
    let Some(cell) = target else {
        let code = encode(ctx.s, &colors);
        let twin = [&ctx.first, &ctx.best]
            .into_iter()
            .flatten()
            .find(|slot| slot.0 == code)
            .map(|slot| {
                // Both leaves place x and auto[x] at the same position.
                let mut inv = vec![0; n];
                for (y, &p) in slot.1.iter().enumerate() {
                    inv[p] = y;
                }
                (0..n).map(|x| inv[colors[x]]).collect::<Vec<usize>>()
            });
        if let Some(auto) = twin {
            if auto.iter().enumerate().any(|(i, &v)| i != v) {
                ctx.autos.push(auto);
            }
        }
        if ctx.first.is_none() {
            ctx.first = Some((code.clone(), colors.clone()));
        }
        match &ctx.best {
            Some((b, _)) if *b <= code => {}
            _ => ctx.best = Some((code, colors)),
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&x| colors[x] == cell).collect();
    let mut explored: Vec<usize> = Vec::new();
    for &x in &members {
        if !explored.is_empty() && same_orbit_as_explored(ctx, prefix, &explored, x) {
            continue;
        }
        explored.push(x);
        let mut c = individualize(&colors, x);
        refine(ctx, &mut c);
        prefix.push(x);
        search(ctx, c, prefix);
        prefix.pop();
    }
}

fn same_orbit_as_explored(ctx: &Ctx, prefix: &[usize], explored: &[usize], x: usize) -> bool {
    let n = ctx.s.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for a in &ctx.autos {
        if prefix.iter().all(|&v| a[v] == v) {
            for (i, &j) in a.iter().enumerate() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let rx = find(&mut parent, x);
    explored.iter().any(|&e| find(&mut parent, e) == rx)
}

/// Canonical labeling: `lab[x]` is the new index of element `x`.
pub fn canonical_labeling(s: &Structure) -> Vec<usize> {
    let n = s.size();
    let mut incident: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n];
    for (sym, t) in s.tuples() {
        let mut seen: Vec<usize> = t.clone();
        seen.sort_unstable();
        seen.dedup();
        for x in seen {
            incident[x].push((sym, t.as_slice()));
        }
    }
    let mut ctx = Ctx {
        s,
        incident,
        best: None,
        first: None,
        autos: Vec::new(),
    };
    let mut colors = vec![0; n];
    refine(&ctx, &mut colors);
    search(&mut ctx, colors, &mut Vec::new());
    ctx.best.map(|b| b.1).unwrap_or_default()
}

pub fn canonical_key(s: &Structure) -> CanonKey {
    CanonKey(encode(s, &canonical_labeling(s)))
}

/// The structure relabeled canonically (element names dropped).
pub fn canonical_structure(s: &Structure) -> Structure {
    let lab = canonical_labeling(s);
    s.image(&lab, s.size())
}

/// An isomorphism `a -> b`, if there is one.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return None;
    }
    let la = canonical_labeling(a);
    let lb = canonical_labeling(b);
    if encode(a, &la) != encode(b, &lb) {
        return None;
    }
    let mut inv = vec![0; b.size()];
    for (y, &p) in lb.iter().enumerate() {
        inv[p] = y;
    }
    Some(la.iter().map(|&p| inv[p]).collect())
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Keep the first structure of each isomorphism class, in input order.
pub fn dedup_isomorphic(items: Vec<Structure>) -> Vec<Structure> {
    let mut seen = std::collections::HashSet::new();
    items
        .into_iter()
        .filter(|s| seen.insert((s.signature().clone(), canonical_key(s))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{build, is_hom, HomMode};

    #[test]
    fn relabelled_cycles_match() {
        let a = build::cycle(5);
        let b = build::digraph(
            5,
            &[
                (0, 2),
                (2, 0),
                (2, 4),
                (4, 2),
                (4, 1),
                (1, 4),
                (1, 3),
                (3, 1),
                (3, 0),
                (0, 3),
            ],
        );
        let iso = find_isomorphism(&a, &b).unwrap();
        assert!(is_hom(&a, &b, &iso, &HomMode::FULL));
        assert!(!is_isomorphic(&a, &build::path(4)));
    }

    #[test]
    fn empty_structure_is_cheap() {
        let s = Structure::new(crate::relcore::Signature::digraph(), 12);
        assert_eq!(canonical_key(&s), canonical_key(&s.clone()));
    }

    #[test]
    fn directed_cycle_orientation() {
        let a = build::directed_cycle(4);
        let b = build::digraph(4, &[(1, 0), (2, 1), (3, 2), (0, 3)]);
        assert!(is_isomorphic(&a, &b));
        let c = build::digraph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert!(!is_isomorphic(&a, &c));
    }
}
