//! Cycles, girth, components and blocks, all taken in the incidence sense:
//! a cycle alternates distinct elements and distinct tuples, each element
//! lying in both neighbouring tuples.

use std::collections::VecDeque;
use std::fmt;

use crate::relcore::{Structure, Tuple};

/// Bipartite graph with element nodes `0..n` and tuple nodes `n..n+t`.
#[derive(Debug, Clone)]
pub struct IncidenceView {
    pub elements: usize,
    pub tuples: Vec<(usize, Tuple)>,
    /// Neighbours of every node; a tuple node lists its distinct elements.
    pub adj: Vec<Vec<usize>>,
    /// For each tuple, how often each of its distinct elements occurs.
    pub multiplicity: Vec<Vec<(usize, usize)>>,
}

impl IncidenceView {
    pub fn new(s: &Structure) -> Self {
        let n = s.size();
        let tuples: Vec<(usize, Tuple)> = s.tuples().map(|(i, t)| (i, t.clone())).collect();
        let mut adj = vec![Vec::new(); n + tuples.len()];
        let mut multiplicity = Vec::with_capacity(tuples.len());
        for (k, (_, t)) in tuples.iter().enumerate() {
            let mut mult: Vec<(usize, usize)> = Vec::new();
            for &c in t {
                match mult.iter_mut().find(|(e, _)| *e == c) {
                    Some(m) => m.1 += 1,
                    None => mult.push((c, 1)),
                }
            }
            for &(c, _) in &mult {
                adj[c].push(n + k);
                adj[n + k].push(c);
            }
            multiplicity.push(mult);
        }
        IncidenceView {
            elements: n,
            tuples,
            adj,
            multiplicity,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj[self.elements..].iter().map(|a| a.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    /// `girth > k`
    pub fn exceeds(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g > k,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinity"),
        }
    }
}

/// A cycle `x_0, r_1, x_1, ..., r_t` with `x_t = x_0`; `elements[i]` lies in
/// `tuples[i]` and `tuples[i + 1]` (indices mod `t`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub elements: Vec<usize>,
    pub tuples: Vec<(usize, Tuple)>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// A shortest cycle, if any.
pub fn shortest_cycle(s: &Structure) -> Option<Cycle> {
    shortest_cycle_below(s, usize::MAX)
}

/// A shortest cycle among those of length `< bound`.
pub fn shortest_cycle_below(s: &Structure, bound: usize) -> Option<Cycle> {
    if bound <= 1 {
        return None;
    }
    for (sym, t) in s.tuples() {
        let mut seen = Vec::with_capacity(t.len());
        for &c in t {
            if seen.contains(&c) {
                return Some(Cycle {
                    elements: vec![c],
                    tuples: vec![(sym, t.clone())],
                });
            }
            seen.push(c);
        }
    }
    let view = IncidenceView::new(s);
    let nodes = view.node_count();
    let n = view.elements;
    // Incidence cycles have even length 2t; look for t < limit.
    let mut limit = bound;
    let mut best: Option<Cycle> = None;
    let mut dist = vec![usize::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            // Cycles closed from here on are at least 2 * dist[u] long.
            if limit != usize::MAX && dist[u] >= limit {
                break;
            }
            for &w in &view.adj[u] {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    q.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if len / 2 < limit {
                        limit = len / 2;
                        best = Some(ring_to_cycle(&view, &parent, u, w));
                    }
                }
            }
        }
    }
    best
}

/// The closed walk root..u, w..root as a cycle; simple whenever it is a
/// shortest one.
fn ring_to_cycle(view: &IncidenceView, parent: &[usize], u: usize, w: usize) -> Cycle {
    let n = view.elements;
    let mut ring: Vec<usize> = path_to_root(parent, u).into_iter().rev().collect();
    ring.extend(path_to_root(parent, w));
    ring.pop(); // the root appears at both ends
    let start = ring.iter().position(|&x| x < n).expect("element on cycle");
    ring.rotate_left(start);
    let mut elements = Vec::new();
    let mut tuples = Vec::new();
    for &x in &ring {
        if x < n {
            elements.push(x);
        } else {
            tuples.push(view.tuples[x - n].clone());
        }
    }
    // ring = x0 r1 x1 r2 ...; put r_t (which precedes x0) first.
    tuples.rotate_right(1);
    Cycle { elements, tuples }
}

fn path_to_root(parent: &[usize], mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while parent[v] != usize::MAX {
        v = parent[v];
        out.push(v);
    }
    out
}

pub fn girth(s: &Structure) -> Girth {
    match shortest_cycle(s) {
        Some(c) => Girth::Finite(c.len()),
        None => Girth::Infinite,
    }
}

pub fn is_forest(s: &Structure) -> bool {
    let view = IncidenceView::new(s);
    if view
        .multiplicity
        .iter()
        .any(|m| m.iter().any(|&(_, k)| k > 1))
    {
        return false;
    }
    let comps = incidence_components(&view);
    view.edge_count() + comps == view.node_count()
}

fn incidence_components(view: &IncidenceView) -> usize {
    let mut comp = vec![usize::MAX; view.node_count()];
    let mut count = 0;
    for start in 0..view.node_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &view.adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    count
}

/// Element sets of the connected components, each sorted, ordered by least
/// element.
pub fn component_sets(s: &Structure) -> Vec<Vec<usize>> {
    let n = s.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (_, t) in s.tuples() {
        for w in t.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(x);
    }
    groups
}

/// Connected components as induced substructures.
pub fn connected_components(s: &Structure) -> Vec<Structure> {
    component_sets(s).iter().map(|c| s.induced(c)).collect()
}

pub fn is_connected(s: &Structure) -> bool {
    component_sets(s).len() == 1
}

/// A block: its elements (sorted) and the tuples it owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub elements: Vec<usize>,
    pub tuples: Vec<(usize, Tuple)>,
}

impl Block {
    /// The block as a structure over its own elements, renumbered in order.
    pub fn to_structure(&self, s: &Structure) -> Structure {
        let mut pos = vec![usize::MAX; s.size()];
        for (i, &e) in self.elements.iter().enumerate() {
            pos[e] = i;
        }
        let mut out = Structure::new(s.sig_arc().clone(), self.elements.len());
        for (sym, t) in &self.tuples {
            out.add_tuple(*sym, t.iter().map(|&c| pos[c]).collect())
                .expect("block tuple");
        }
        out
    }
}

/// Maximal substructures without a cut point. Every tuple lies in exactly one
/// block; isolated elements form single-element blocks.
pub fn blocks(s: &Structure) -> Vec<Block> {
    let view = IncidenceView::new(s);
    let n = view.elements;
    let nodes = view.node_count();
    let t = view.tuples.len();
    // Incidence blocks as lists of edges (element, tuple-node).
    let mut inc_blocks: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut disc = vec![usize::MAX; nodes];
    let mut low = vec![0usize; nodes];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..nodes {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (node, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (u, p, ref mut i)) = stack.last_mut() {
            if *i < view.adj[u].len() {
                let w = view.adj[u][*i];
                *i += 1;
                if w == p {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, u, 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if p != usize::MAX {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut blk = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            blk.push(e);
                            if e == (p, u) {
                                break;
                            }
                        }
                        inc_blocks.push(blk);
                    }
                }
            }
        }
    }
    // Merge incidence blocks that share a tuple node.
    let mut owner = vec![usize::MAX; t];
    let mut parent: Vec<usize> = (0..inc_blocks.len()).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (b, edges) in inc_blocks.iter().enumerate() {
        for &(x, y) in edges {
            let tn = x.max(y) - n;
            if owner[tn] == usize::MAX {
                owner[tn] = b;
            } else {
                let (ra, rb) = (find(&mut parent, owner[tn]), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut index = vec![usize::MAX; inc_blocks.len()];
    for b in 0..inc_blocks.len() {
        let r = find(&mut parent, b);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push((Vec::new(), Vec::new()));
        }
        for &(x, y) in &inc_blocks[b] {
            let (e, tn) = (x.min(y), x.max(y) - n);
            groups[index[r]].0.push(e);
            groups[index[r]].1.push(tn);
        }
    }
    let mut out: Vec<Block> = groups
        .into_iter()
        .map(|(mut es, mut ts)| {
            es.sort_unstable();
            es.dedup();
            ts.sort_unstable();
            ts.dedup();
            Block {
                elements: es,
                tuples: ts.into_iter().map(|k| view.tuples[k].clone()).collect(),
            }
        })
        .collect();
    for x in 0..n {
        if view.adj[x].is_empty() {
            out.push(Block {
                elements: vec![x],
                tuples: Vec::new(),
            });
        }
    }
    out.sort_by(|a, b| (&a.elements, &a.tuples).cmp(&(&b.elements, &b.tuples)));
    out
}

/// Blocks as substructures over their own elements.
pub fn biconnected_components(s: &Structure) -> Vec<Structure> {
    blocks(s).iter().map(|b| b.to_structure(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{build, Signature};

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&build::directed_cycle(3)), Girth::Finite(3));
        assert_eq!(girth(&build::loop_point()), Girth::Finite(1));
        assert_eq!(girth(&build::digraph(2, &[(0, 1), (1, 0)])), Girth::Finite(2));
        assert_eq!(girth(&build::directed_path(3)), Girth::Infinite);
        assert!(is_forest(&build::directed_path(2)));
        assert!(!is_forest(&build::directed_cycle(3)));
        let c = shortest_cycle(&build::directed_cycle(5)).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.elements.len(), 5);
    }

    #[test]
    fn cycle_witness_is_consistent() {
        let s = build::digraph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 3)]);
        let c = shortest_cycle(&s).unwrap();
        assert_eq!(c.len(), 3);
        let t = c.len();
        for i in 0..t {
            let x = c.elements[i];
            assert!(c.tuples[i].1.contains(&x));
            assert!(c.tuples[(i + 1) % t].1.contains(&x));
        }
    }

    #[test]
    fn block_examples() {
        assert_eq!(blocks(&build::directed_path(2)).len(), 2);
        assert_eq!(blocks(&build::directed_cycle(3)).len(), 1);
        let sig = std::sync::Arc::new(Signature::base("t", &[("T", 3)]).unwrap());
        let s = Structure::from_named(sig, 3, "T", vec![vec![0, 1, 2]]).unwrap();
        let b = blocks(&s);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].elements, vec![0, 1, 2]);
        assert_eq!(connected_components(&build::digraph(4, &[(0, 1), (2, 3)])).len(), 2);
    }
}
