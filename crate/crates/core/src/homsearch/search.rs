use crate::error::Result;
use crate::relcore::{HomKind, HomMode, Structure};

/// A source tuple viewed as a constraint on its elements. Ranges index the
/// shared arrays of [`HomSearch`].
struct Con {
    sym: usize,
    /// Range into `vars` and `slot`: the tuple and, per position, the index
    /// of its element among the distinct ones.
    at: usize,
    len: usize,
    /// Range into `distinct`.
    d_at: usize,
    d_len: usize,
    /// Whether some element repeats.
    repeats: bool,
}

/// Backtracking search for homomorphisms `a -> b` with arc-consistency
/// maintained at every node.
pub struct HomSearch<'a> {
    a: &'a Structure,
    mode: &'a HomMode,
    n: usize,
    m: usize,
    w: usize,
    cons: Vec<Con>,
    vars: Vec<usize>,
    slot: Vec<usize>,
    distinct: Vec<usize>,
    targets: Vec<Vec<&'a [usize]>>,
    /// Constraints through each source element, as CSR offsets and data.
    vc_at: Vec<usize>,
    vc: Vec<usize>,
    /// Elements that must get different images (injective mode only).
    sep: Vec<Vec<usize>>,
    /// Target tuples through each target element (full mode only).
    target_inc: Vec<Vec<(usize, &'a [usize])>>,
    init: Vec<u64>,
    infeasible: bool,
}

struct State {
    assign: Vec<usize>,
    fibers: Vec<Vec<usize>>,
    scratch: Vec<u64>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    touched: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl<'a> HomSearch<'a> {
    pub fn new(a: &'a Structure, b: &'a Structure, mode: &'a HomMode) -> Result<Self> {
        a.check_same_signature(b)?;
        let n = a.size();
        let m = b.size();
        let w = m.div_ceil(64).max(1);
        let nsym = a.signature().len();
        let targets: Vec<Vec<&[usize]>> = (0..nsym)
            .map(|s| b.relation(s).iter().map(|t| t.as_slice()).collect())
            .collect();
        let mut cons = Vec::with_capacity(a.tuple_count());
        let mut vars = Vec::new();
        let mut slot = Vec::new();
        let mut distinct = Vec::new();
        let mut degree = vec![0usize; n + 1];
        for (sym, t) in a.tuples() {
            let d_at = distinct.len();
            let at = vars.len();
            for &x in t.iter() {
                let seen = distinct[d_at..].iter().position(|&d| d == x);
                match seen {
                    Some(p) => slot.push(p),
                    None => {
                        slot.push(distinct.len() - d_at);
                        distinct.push(x);
                        degree[x] += 1;
                    }
                }
                vars.push(x);
            }
            let d_len = distinct.len() - d_at;
            cons.push(Con {
                sym,
                at,
                len: t.len(),
                d_at,
                d_len,
                repeats: d_len < t.len(),
            });
        }
        let mut vc_at = vec![0usize; n + 1];
        for x in 0..n {
            vc_at[x + 1] = vc_at[x] + degree[x];
        }
        let mut fill = vc_at.clone();
        let mut vc = vec![0usize; vc_at[n]];
        for (ci, c) in cons.iter().enumerate() {
            for &x in &distinct[c.d_at..c.d_at + c.d_len] {
                vc[fill[x]] = ci;
                fill[x] += 1;
            }
        }
        let mut sep = Vec::new();
        if mode.kind == HomKind::Injective {
            sep = vec![Vec::new(); n];
            for x in 0..n {
                for y in 0..n {
                    if mode.must_separate(x, y) {
                        sep[x].push(y);
                    }
                }
            }
        }
        let mut target_inc = Vec::new();
        if mode.kind == HomKind::Full {
            target_inc = vec![Vec::new(); m];
            for (sym, t) in b.tuples() {
                let mut seen: Vec<usize> = t.clone();
                seen.sort_unstable();
                seen.dedup();
                for v in seen {
                    target_inc[v].push((sym, t.as_slice()));
                }
            }
        }
        let mut init = vec![0u64; n * w];
        for x in 0..n {
            for v in 0..m {
                init[x * w + v / 64] |= 1 << (v % 64);
            }
        }
        if mode.kind == HomKind::Full {
            // A non-loop on x may not land on a loop.
            for sym in 0..nsym {
                let ar = a.signature().arity(sym);
                for x in 0..n {
                    let diag = vec![x; ar];
                    if a.contains(sym, &diag) || mode.is_free(sym, &diag) {
                        continue;
                    }
                    for v in 0..m {
                        if b.contains(sym, &vec![v; ar]) {
                            init[x * w + v / 64] &= !(1 << (v % 64));
                        }
                    }
                }
            }
        }
        let infeasible = mode.kind == HomKind::Injective && mode.partial.is_none() && n > m;
        Ok(HomSearch {
            a,
            mode,
            n,
            m,
            w,
            cons,
            vars,
            slot,
            distinct,
            targets,
            vc_at,
            vc,
            sep,
            target_inc,
            init,
            infeasible,
        })
    }

    fn var_cons(&self, x: usize) -> &[usize] {
        &self.vc[self.vc_at[x]..self.vc_at[x + 1]]
    }

    /// Allow `x` to map only into `allowed`.
    pub fn restrict(&mut self, x: usize, allowed: &[usize]) {
        let w = self.w;
        let mut mask = vec![0u64; w];
        for &v in allowed {
            if v < self.m {
                mask[v / 64] |= 1 << (v % 64);
            }
        }
        for (d, k) in self.init[x * w..(x + 1) * w].iter_mut().zip(mask) {
            *d &= k;
        }
    }

    /// Forbid `v` as an image of every source element.
    pub fn forbid_value(&mut self, v: usize) {
        for x in 0..self.n {
            self.init[x * self.w + v / 64] &= !(1 << (v % 64));
        }
    }

    /// First homomorphism in search order.
    pub fn find(&self) -> Option<Vec<usize>> {
        let mut out = None;
        self.run(false, &mut |map| {
            out = Some(map.to_vec());
            false
        });
        out
    }

    /// Visit homomorphisms; the callback returns `false` to stop. With
    /// `lexicographic`, maps arrive in lexicographic order.
    pub fn run(&self, lexicographic: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.infeasible {
            return;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        if !lexicographic {
            order.sort_by_key(|&x| std::cmp::Reverse(self.vc_at[x + 1] - self.vc_at[x]));
        }
        let full = self.mode.kind == HomKind::Full;
        let mut st = State {
            assign: vec![NONE; self.n],
            fibers: if full { vec![Vec::new(); self.m] } else { Vec::new() },
            scratch: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; self.cons.len()],
            touched: Vec::new(),
        };
        let size = self.init.len();
        let mut levels = vec![0u64; size * (self.n + 1)];
        levels[..size].copy_from_slice(&self.init);
        if (0..self.n).any(|x| self.empty(&levels[..size], x)) {
            return;
        }
        let all: Vec<usize> = (0..self.cons.len()).collect();
        if !self.propagate(&mut levels[..size], &mut st, &all) {
            return;
        }
        self.dfs(0, &order, &mut levels, &mut st, visit);
    }

    fn empty(&self, dom: &[u64], x: usize) -> bool {
        dom[x * self.w..(x + 1) * self.w].iter().all(|&b| b == 0)
    }

    fn has(&self, dom: &[u64], x: usize, v: usize) -> bool {
        dom[x * self.w + v / 64] >> (v % 64) & 1 == 1
    }

    /// Level `depth` of `levels` holds the current domains; children work in
    /// level `depth + 1`.
    fn dfs(
        &self,
        depth: usize,
        order: &[usize],
        levels: &mut [u64],
        st: &mut State,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == self.n {
            return visit(&st.assign);
        }
        let x = order[depth];
        let w = self.w;
        let size = self.init.len();
        let full = self.mode.kind == HomKind::Full;
        for word in 0..w {
            let mut bits = levels[depth * size + x * w + word];
            while bits != 0 {
                let v = word * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (cur, rest) = levels.split_at_mut((depth + 1) * size);
                let d = &mut rest[..size];
                d.copy_from_slice(&cur[depth * size..]);
                for (i, slot) in d[x * w..(x + 1) * w].iter_mut().enumerate() {
                    *slot = if i == v / 64 { 1 << (v % 64) } else { 0 };
                }
                let mut touched = std::mem::take(&mut st.touched);
                touched.clear();
                touched.extend_from_slice(self.var_cons(x));
                let mut ok = true;
                if !self.sep.is_empty() {
                    for &y in &self.sep[x] {
                        if self.has(d, y, v) {
                            d[y * w + v / 64] &= !(1 << (v % 64));
                            if self.empty(d, y) {
                                ok = false;
                                break;
                            }
                            touched.extend_from_slice(self.var_cons(y));
                        }
                    }
                }
                if !ok {
                    st.touched = touched;
                    continue;
                }
                st.assign[x] = v;
                if full {
                    st.fibers[v].push(x);
                }
                let good = (!full || self.full_ok(x, v, st)) && self.propagate(d, st, &touched);
                st.touched = touched;
                let cont = !good || self.dfs(depth + 1, order, levels, st, visit);
                if full {
                    st.fibers[v].pop();
                }
                st.assign[x] = NONE;
                if !cont {
                    return false;
                }
            }
        }
        true
    }

    /// Every source tuple through `x` over assigned elements whose image is a
    /// target tuple must itself be a tuple (or be declared free).
    fn full_ok(&self, x: usize, v: usize, st: &State) -> bool {
        for &(sym, u) in &self.target_inc[v] {
            let mut pre = Vec::with_capacity(u.len());
            if !self.full_walk(sym, u, x, st, &mut pre, false) {
                return false;
            }
        }
        true
    }

    fn full_walk(
        &self,
        sym: usize,
        u: &[usize],
        x: usize,
        st: &State,
        pre: &mut Vec<usize>,
        has_x: bool,
    ) -> bool {
        if pre.len() == u.len() {
            return !has_x || self.a.contains(sym, pre) || self.mode.is_free(sym, pre);
        }
        for &y in &st.fibers[u[pre.len()]] {
            pre.push(y);
            let ok = self.full_walk(sym, u, x, st, pre, has_x || y == x);
            pre.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    /// Generalized arc consistency over the source tuples, starting from the
    /// constraints in `start`. Returns false on a domain wipe-out.
    fn propagate(&self, dom: &mut [u64], st: &mut State, start: &[usize]) -> bool {
        let w = self.w;
        st.queue.clear();
        for q in st.queued.iter_mut() {
            *q = false;
        }
        for &c in start {
            if !st.queued[c] {
                st.queued[c] = true;
                st.queue.push(c);
            }
        }
        while let Some(ci) = st.queue.pop() {
            st.queued[ci] = false;
            let con = &self.cons[ci];
            let vars = &self.vars[con.at..con.at + con.len];
            let slot = &self.slot[con.at..con.at + con.len];
            st.scratch.clear();
            st.scratch.resize(con.d_len * w, 0);
            'tuples: for u in &self.targets[con.sym] {
                for (i, &x) in vars.iter().enumerate() {
                    if dom[x * w + u[i] / 64] >> (u[i] % 64) & 1 == 0 {
                        continue 'tuples;
                    }
                }
                if con.repeats {
                    // Positions sharing an element must share the image.
                    for i in 0..vars.len() {
                        let first = slot[..i].iter().position(|&s| s == slot[i]);
                        if let Some(j) = first {
                            if u[i] != u[j] {
                                continue 'tuples;
                            }
                        }
                    }
                }
                for (i, &s) in slot.iter().enumerate() {
                    st.scratch[s * w + u[i] / 64] |= 1 << (u[i] % 64);
                }
            }
            for (s, &x) in self.distinct[con.d_at..con.d_at + con.d_len].iter().enumerate() {
                let new = &st.scratch[s * w..(s + 1) * w];
                let old = &mut dom[x * w..(x + 1) * w];
                if new != old {
                    old.copy_from_slice(new);
                    if old.iter().all(|&b| b == 0) {
                        return false;
                    }
                    for &c in self.var_cons(x) {
                        if c != ci && !st.queued[c] {
                            st.queued[c] = true;
                            st.queue.push(c);
                        }
                    }
                }
            }
        }
        true
    }
}
