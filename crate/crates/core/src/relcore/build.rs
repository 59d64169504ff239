//! Small constructors for common digraphs and colored lifts.

use std::sync::Arc;

use super::lift::{CoverMode, Lift};
use super::signature::Signature;
use super::structure::Structure;
use crate::error::Result;

/// Digraph on `n` vertices with the given arcs.
pub fn digraph(n: usize, arcs: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(Signature::digraph(), n);
    for &(x, y) in arcs {
        s.add_tuple(0, vec![x, y]).expect("arc inside universe");
    }
    s
}

/// Symmetric loopless complete graph `K_n`.
pub fn clique(n: usize) -> Structure {
    let mut arcs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                arcs.push((x, y));
            }
        }
    }
    digraph(n, &arcs)
}

/// Symmetric cycle `C_n` (`n >= 3`).
pub fn cycle(n: usize) -> Structure {
    let mut arcs = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        arcs.push((i, j));
        arcs.push((j, i));
    }
    digraph(n, &arcs)
}

/// Directed cycle on `n` vertices.
pub fn directed_cycle(n: usize) -> Structure {
    let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    digraph(n, &arcs)
}

/// Directed path with `k` arcs (and `k + 1` vertices).
pub fn directed_path(k: usize) -> Structure {
    let arcs: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
    digraph(k + 1, &arcs)
}

/// Symmetric path with `k` edges.
pub fn path(k: usize) -> Structure {
    let mut arcs = Vec::new();
    for i in 0..k {
        arcs.push((i, i + 1));
        arcs.push((i + 1, i));
    }
    digraph(k + 1, &arcs)
}

/// One vertex with a loop.
pub fn loop_point() -> Structure {
    digraph(1, &[(0, 0)])
}

/// `base` extended with unary lift symbols `C1..Ck`.
pub fn colored_signature(base: &Signature, k: usize) -> Result<Arc<Signature>> {
    let lift: Vec<(String, usize)> = (1..=k).map(|i| (format!("C{i}"), 1)).collect();
    Ok(Arc::new(base.extend_lift(&lift)?))
}

/// Color the vertices of `base`: `classes[i]` lists the vertices in color
/// `C{i+1}`. The cover mode is checked.
pub fn vertex_colored(
    base: &Structure,
    k: usize,
    classes: &[Vec<usize>],
    cover: CoverMode,
) -> Result<Lift> {
    let sig = colored_signature(base.signature(), k)?;
    let mut s = base.restrict_to(sig);
    let offset = base.signature().len();
    for (i, class) in classes.iter().enumerate() {
        for &v in class {
            s.add_tuple(offset + i, vec![v])?;
        }
    }
    Lift::new(s, cover)
}

/// Color every vertex of `base` with the single color `C{color+1}` out of `k`.
pub fn monochrome(base: &Structure, k: usize, color: usize, cover: CoverMode) -> Result<Lift> {
    let mut classes = vec![Vec::new(); k];
    classes[color] = (0..base.size()).collect();
    vertex_colored(base, k, &classes, cover)
}
