//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liftshadow::canon::canonical_key;
use liftshadow::duality::{tree_dual, verify_duality};
use liftshadow::enumerate::{for_each_labeled, structures_up_to, LABELED_LIMIT};
use liftshadow::fpdecide::{
    decide_finite_union_csp, fp_membership, normalize_family, shadow_templates, verify_shadow_duality, DualLimits,
    Pattern, PatternFamily, Verdict,
};
use liftshadow::homsearch::{hom_equivalent, hom_exists, maps_to};
use liftshadow::relcore::build::{clique, cycle, digraph, directed_path, monochrome, vertex_colored};
use liftshadow::relcore::{CoverMode, HomKind, HomMode, Lift, Signature, Structure};
use liftshadow::fvreduce::{check_forests, girth_threshold, FvReduction};
use liftshadow::shape::{is_forest, shortest_cycle_below};
use liftshadow::sparsegen::{sparse_replace, verify_sparse, SparseParams};
use liftshadow::snpc::{
    eval_snp, generate_corpus, primitivize, saturate_inequalities,
    to_lifts_full, to_lifts_general, to_lifts_injective, uniformize_arity, SnpFormula,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let filter: Option<usize> = std::env::args()
        .skip(1)
        .find_map(|a| a.strip_prefix("criterion=").and_then(|n| n.parse().ok()));
    let criteria = [
        Criterion { id: 1, name: "homomorphism oracle equivalence", budget: Duration::from_secs(300), run: c1_hom_oracle },
        Criterion { id: 2, name: "tree duality and triangle control", budget: Duration::from_secs(900), run: c2_tree_duality },
        Criterion { id: 3, name: "3-coloring and triangle-free pipeline", budget: Duration::from_secs(300), run: c3_pipeline },
        Criterion { id: 4, name: "normalization passes preserve semantics", budget: Duration::from_secs(600), run: c4_normalization },
        Criterion { id: 5, name: "formula to forbidden lifts translations", budget: Duration::from_secs(600), run: c5_translations },
        Criterion { id: 6, name: "reduction to girth-restricted patterns", budget: Duration::from_secs(600), run: c6_fv_reduction },
        Criterion { id: 7, name: "sparse incomparability at desk scale", budget: Duration::from_secs(300), run: c7_sparse },
        Criterion { id: 8, name: "shadow duality for forest families", budget: Duration::from_secs(600), run: c8_shadow_duality },
    ];
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.map_or(true, |f| f == c.id)) {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > c.budget => Err(format!("{d}; over budget {:?}", c.budget)),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {} PASS [{}] {} ({:.1}s)", c.id, c.name, detail, took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL [{}] {} ({:.1}s)", c.id, c.name, detail, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn digraphs_up_to(n: usize) -> Vec<Structure> {
    structures_up_to(&Signature::digraph(), n, LABELED_LIMIT).expect("enumeration")
}

/// Edge set of a digraph on at most 4 vertices as a bitmask over pairs.
fn edge_mask(a: &Structure) -> u16 {
    let n = a.size();
    a.relation(0)
        .iter()
        .fold(0u16, |m, t| m | 1 << (t[0] * n + t[1]))
}

/// For a target `b` and source size `n`: the masks of source pairs whose
/// image is an edge, over all maps and over injective maps.
fn image_masks(b: &Structure, n: usize) -> (Vec<u16>, Vec<u16>) {
    let m = b.size();
    let mut all = HashSet::new();
    let mut inj = HashSet::new();
    if n > 0 && m == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut f = vec![0usize; n];
    loop {
        let mut g = 0u16;
        for x in 0..n {
            for y in 0..n {
                if b.contains(0, &[f[x], f[y]]) {
                    g |= 1 << (x * n + y);
                }
            }
        }
        all.insert(g);
        let distinct: HashSet<usize> = f.iter().copied().collect();
        if distinct.len() == n {
            inj.insert(g);
        }
        let mut i = 0;
        while i < n {
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    (all.into_iter().collect(), inj.into_iter().collect())
}

fn c1_hom_oracle() -> Outcome {
    let structures = digraphs_up_to(4);
    let modes = [HomMode::PLAIN, HomMode::INJECTIVE, HomMode::FULL];
    let mut pairs = 0usize;
    let mut disagreements = Vec::new();
    for b in &structures {
        let tables: Vec<(Vec<u16>, Vec<u16>)> = (0..=4).map(|n| image_masks(b, n)).collect();
        for a in &structures {
            pairs += 1;
            let am = edge_mask(a);
            let (all, inj) = &tables[a.size()];
            let oracle = [
                all.iter().any(|&g| g & am == am),
                inj.iter().any(|&g| g & am == am),
                all.contains(&am),
            ];
            for (mode, &want) in modes.iter().zip(&oracle) {
                let got = hom_exists(a, b, mode).map_err(|e| e.to_string())?;
                if let Some(h) = &got {
                    liftshadow::relcore::check_hom(a, b, &h.map, mode)
                        .map_err(|e| format!("invalid witness: {e}"))?;
                }
                if got.is_some() != want {
                    disagreements.push(format!("{} mode: {a:?} -> {b:?}", mode.kind));
                }
            }
        }
    }
    if disagreements.is_empty() {
        Ok(format!(
            "{} structures, {pairs} pairs x 3 modes, 0 disagreements",
            structures.len()
        ))
    } else {
        Err(format!(
            "{} disagreements, first: {}",
            disagreements.len(),
            disagreements[0]
        ))
    }
}

fn symmetric_graphs_on(n: usize) -> Vec<Structure> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut arcs = Vec::new();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
        let g = digraph(n, &arcs);
        if seen.insert(canonical_key(&g)) {
            out.push(g);
        }
    }
    out
}

fn c2_tree_duality() -> Outcome {
    let sig = Signature::digraph();
    let up_to_4 = digraphs_up_to(4);
    let trees: Vec<&Structure> = up_to_4
        .iter()
        .filter(|t| t.size() > 0 && is_forest(t) && liftshadow::shape::is_connected(t))
        .collect();
    for t in &trees {
        let d = tree_dual(t).map_err(|e| e.to_string())?;
        let check = verify_duality(&sig, &[(*t).clone()], &[d], 4).map_err(|e| e.to_string())?;
        if !check.holds {
            return Err(format!("tree {t:?}: counterexample {:?}", check.counterexample));
        }
    }

    // Negative control: no set of at most two templates on at most three
    // elements is a duality for the triangle, witnessed on at most 5 elements.
    let triangle = clique(3);
    let candidates: Vec<Structure> = up_to_4.iter().filter(|s| s.size() <= 3).cloned().collect();
    let mut witnesses: Vec<Structure> = up_to_4.clone();
    witnesses.extend(symmetric_graphs_on(5));
    witnesses.push(cycle(5));
    let forb: Vec<bool> = witnesses.iter().map(|w| !maps_to(&triangle, w)).collect();
    let into: Vec<Vec<bool>> = witnesses
        .iter()
        .map(|w| candidates.iter().map(|d| maps_to(w, d)).collect())
        .collect();
    let mut sets = 0usize;
    let k = candidates.len();
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    choices.extend((0..k).map(|i| vec![i]));
    choices.extend((0..k).flat_map(|i| (i + 1..k).map(move |j| vec![i, j])));
    for set in &choices {
        sets += 1;
        let refuted = (0..witnesses.len())
            .any(|w| forb[w] != set.iter().any(|&d| into[w][d]));
        if !refuted {
            let templates: Vec<Structure> = set.iter().map(|&d| candidates[d].clone()).collect();
            let check = verify_duality(&sig, &[triangle.clone()], &templates, 5)
                .map_err(|e| e.to_string())?;
            if check.holds {
                return Err(format!("templates {templates:?} pass as a duality for the triangle"));
            }
        }
    }
    Ok(format!(
        "{} trees verified at n=4; {sets} candidate template sets all refuted",
        trees.len()
    ))
}

fn arc() -> Structure {
    digraph(2, &[(0, 1)])
}

fn family_of(kind: HomKind, lifts: Vec<Lift>) -> PatternFamily {
    let sig = lifts[0].carrier().sig_arc().clone();
    let ps = lifts
        .into_iter()
        .enumerate()
        .map(|(i, l)| Pattern::new(format!("p{i}"), l))
        .collect();
    PatternFamily::new(sig, kind)
        .unwrap()
        .with_patterns(ps)
        .unwrap()
}

fn three_coloring_family() -> PatternFamily {
    family_of(
        HomKind::Plain,
        (0..3)
            .map(|c| monochrome(&arc(), 3, c, CoverMode::Partition).unwrap())
            .collect(),
    )
}

fn triangle_free_family() -> PatternFamily {
    family_of(
        HomKind::Plain,
        vec![monochrome(&clique(3), 1, 0, CoverMode::Partition).unwrap()],
    )
}

/// Proper 3-coloring by trying every map.
fn three_colorable(g: &Structure) -> bool {
    let n = g.size();
    let e = g.relation(0);
    let mut col = vec![0usize; n];
    loop {
        if e.iter().all(|t| col[t[0]] != col[t[1]]) {
            return true;
        }
        let mut i = 0;
        while i < n {
            col[i] += 1;
            if col[i] < 3 {
                break;
            }
            col[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
    }
}

fn c3_pipeline() -> Outcome {
    let fam = three_coloring_family();
    let out = decide_finite_union_csp(&fam).map_err(|e| e.to_string())?;
    if out.verdict != Verdict::FiniteUnionCsp {
        return Err(format!("3-coloring verdict {}", out.verdict.as_str()));
    }
    let t = out.templates.ok_or("no templates")?;
    if t.len() != 1 || !hom_equivalent(&t[0], &clique(3)).unwrap() {
        return Err(format!("templates not equivalent to K3: {} templates", t.len()));
    }
    let mut checked = 0;
    let sig = Signature::digraph();
    // Every digraph up to 4 vertices, then every labeled simple graph on 5.
    for g in digraphs_up_to(4) {
        checked += 1;
        if fp_membership(&g, &fam).unwrap().is_some() != three_colorable(&g) {
            return Err(format!("membership disagrees on {g:?}"));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    for mask in 0u32..1 << pairs.len() {
        let mut arcs = Vec::new();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                arcs.push((i, j));
                arcs.push((j, i));
            }
        }
        let g = digraph(5, &arcs).with_signature(sig.clone()).unwrap();
        checked += 1;
        if fp_membership(&g, &fam).unwrap().is_some() != three_colorable(&g) {
            return Err(format!("membership disagrees on {g:?}"));
        }
    }
    let tf = decide_finite_union_csp(&triangle_free_family()).map_err(|e| e.to_string())?;
    if tf.verdict != Verdict::NotFiniteUnion {
        return Err(format!("triangle-free verdict {}", tf.verdict.as_str()));
    }
    Ok(format!(
        "3-coloring -> finite_union_csp ~ K3, triangle-free -> not_finite_union, {checked} membership checks"
    ))
}

fn c4_normalization() -> Outcome {
    let corpus = generate_corpus(0, 25);
    let structures = digraphs_up_to(3);
    let mut violations = Vec::new();
    let mut evals = 0usize;
    for phi in &corpus {
        let report = phi.restrictions();
        let prim = primitivize(phi).map_err(|e| format!("{}: {e}", phi.name))?;
        if prim.restrictions() != report {
            violations.push(format!("{}: primitivize changed restrictions", phi.name));
        }
        let passes: [(&str, SnpFormula); 3] = [
            ("primitivize", prim),
            ("uniformize_arity", uniformize_arity(phi)),
            ("saturate_inequalities", saturate_inequalities(phi)),
        ];
        for a in &structures {
            let base = eval_snp(phi, a).map_err(|e| e.to_string())?;
            for (name, psi) in &passes {
                evals += 1;
                if eval_snp(psi, a).map_err(|e| e.to_string())? != base {
                    violations.push(format!("{}: {name} changes the value on {a:?}", phi.name));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{} formulas, {evals} evaluations, 0 violations", corpus.len()))
    } else {
        Err(format!("{} violations, first: {}", violations.len(), violations[0]))
    }
}

fn c5_translations() -> Outcome {
    let corpus = generate_corpus(0, 25);
    let up_to_3 = digraphs_up_to(3);
    let up_to_4 = digraphs_up_to(4);
    let mut checks = 0usize;
    let mut per_category = [0usize; 3];
    for phi in &corpus {
        let r = phi.restrictions();
        let mut jobs: Vec<(usize, PatternFamily, &[Structure])> = Vec::new();
        if r.monotone && r.no_inequality {
            let fam = to_lifts_general(phi).map_err(|e| format!("{}: {e}", phi.name))?;
            let set = if phi.max_proof_arity() >= 2 { &up_to_3 } else { &up_to_4 };
            jobs.push((0, fam, set));
        }
        if r.monotone && r.monadic {
            let fam = to_lifts_injective(phi).map_err(|e| format!("{}: {e}", phi.name))?;
            jobs.push((1, fam, &up_to_4));
        }
        if r.monadic && r.no_inequality {
            let fam = to_lifts_full(phi).map_err(|e| format!("{}: {e}", phi.name))?;
            jobs.push((2, fam, &up_to_4));
        }
        for (cat, fam, set) in jobs {
            per_category[cat] += 1;
            if let Some(a) = fp_membership_agrees(phi, &fam, set).map_err(|e| e.to_string())? {
                return Err(format!(
                    "{} category {cat}: disagreement on {a:?}\n{phi}",
                    phi.name
                ));
            }
            checks += set.len();
        }
    }
    Ok(format!(
        "general {} / injective {} / full {} families, {checks} checks, 0 violations",
        per_category[0], per_category[1], per_category[2]
    ))
}

/// First structure on which the formula and the family disagree.
fn fp_membership_agrees(
    phi: &SnpFormula,
    fam: &PatternFamily,
    set: &[Structure],
) -> liftshadow::Result<Option<Structure>> {
    for a in set {
        if eval_snp(phi, a)? != fp_membership(a, fam)?.is_some() {
            return Ok(Some(a.clone()));
        }
    }
    Ok(None)
}

/// Every tuple of `sig` on `n` elements without a repeated coordinate.
fn distinct_tuples(sig: &Signature, n: usize) -> Vec<(usize, Vec<usize>)> {
    liftshadow::enumerate::all_tuples(sig, n)
        .into_iter()
        .filter(|(_, t)| t.iter().collect::<HashSet<_>>().len() == t.len())
        .collect()
}

/// Structures over `sig` on exactly `n` elements with girth above `k`, up to
/// isomorphism. Adding a tuple never raises the girth, so the search prunes
/// as soon as a short cycle appears.
fn high_girth_structures(sig: &Arc<Signature>, n: usize, k: usize) -> Vec<Structure> {
    fn grow(
        s: &mut Structure,
        cands: &[(usize, Vec<usize>)],
        from: usize,
        k: usize,
        seen: &mut HashSet<liftshadow::canon::CanonKey>,
        out: &mut Vec<Structure>,
    ) {
        if seen.insert(canonical_key(s)) {
            out.push(s.clone());
        }
        for i in from..cands.len() {
            let (sym, t) = &cands[i];
            s.add_tuple(*sym, t.clone()).unwrap();
            if shortest_cycle_below(s, k + 1).is_none() {
                grow(s, cands, i + 1, k, seen, out);
            }
            s.remove_tuple(*sym, t);
        }
    }
    let cands = distinct_tuples(sig, n);
    let mut s = Structure::new(sig.clone(), n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    grow(&mut s, &cands, 0, k, &mut seen, &mut out);
    out
}

fn relations_contain(big: &Structure, small: &Structure) -> bool {
    small.tuples().all(|(sym, t)| big.contains(sym, t))
}

fn c6_fv_reduction() -> Outcome {
    let fam = triangle_free_family();
    let red = FvReduction::new(&fam).map_err(|e| e.to_string())?;
    if !check_forests(&red.gprime) {
        return Err("G′ has a member that is not a forest".into());
    }
    let beta = red.basis.beta.clone();

    // Θ∘Ψ = id on every digraph up to 4 elements, and forward equivalence.
    let mut forward = 0usize;
    for a in digraphs_up_to(4) {
        let psi = red.psi(&a).map_err(|e| e.to_string())?;
        if red.theta(&psi).map_err(|e| e.to_string())? != a {
            return Err(format!("theta(psi(A)) != A for {a:?}"));
        }
        let lhs = fp_membership(&a, &fam).map_err(|e| e.to_string())?.is_some();
        let rhs = fp_membership(&psi, &red.gprime).map_err(|e| e.to_string())?.is_some();
        if lhs != rhs {
            return Err(format!("forward equivalence fails on {a:?}"));
        }
        forward += 1;
    }

    // Inflation R(Ψ(Θ(B))) ⊇ R(B): exhaustively on at most 2 elements, on
    // every single-tuple structure up to 3 elements (which implies it for all
    // structures, Θ and Ψ being monotone), and on random 3-element samples.
    let inflates = |b: &Structure| -> Result<bool, String> {
        let t = red.theta(b).map_err(|e| e.to_string())?;
        let back = red.psi(&t).map_err(|e| e.to_string())?;
        Ok(relations_contain(&back, b))
    };
    let mut inflation = 0usize;
    let mut bad = None;
    for n in 0..=2 {
        for_each_labeled(&beta, n, LABELED_LIMIT, &mut |b| {
            inflation += 1;
            match inflates(b) {
                Ok(true) => true,
                _ => {
                    bad = Some(b.clone());
                    false
                }
            }
        })
        .map_err(|e| e.to_string())?;
    }
    if let Some(b) = bad {
        return Err(format!("inflation fails on {b:?}"));
    }
    for n in 1..=3 {
        for (sym, t) in liftshadow::enumerate::all_tuples(&beta, n) {
            let b = Structure::from_tuples(beta.clone(), n, [(sym, t)]).unwrap();
            inflation += 1;
            if !inflates(&b)? {
                return Err(format!("inflation fails on {b:?}"));
            }
        }
    }
    let all3 = liftshadow::enumerate::all_tuples(&beta, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..2000 {
        let mut b = Structure::new(beta.clone(), 3);
        for (sym, t) in &all3 {
            if rng.gen_bool(0.15) {
                b.add_tuple(*sym, t.clone()).unwrap();
            }
        }
        inflation += 1;
        if !inflates(&b)? {
            return Err(format!("inflation fails on {b:?}"));
        }
    }

    // Backward equivalence on every block structure of girth above k.
    let k = girth_threshold(&fam);
    let mut backward = 0usize;
    for n in 0..=4 {
        for b in high_girth_structures(&beta, n, k) {
            let theta = red.backward(&b).map_err(|e| e.to_string())?;
            let lhs = fp_membership(&b, &red.gprime).map_err(|e| e.to_string())?.is_some();
            let rhs = fp_membership(&theta, &fam).map_err(|e| e.to_string())?.is_some();
            if lhs != rhs {
                return Err(format!("backward equivalence fails on {b:?}"));
            }
            backward += 1;
        }
    }
    Ok(format!(
        "basis {} blocks, G′ {} members; theta∘psi = id and forward on {forward}; inflation on {inflation}; backward on {backward} girth>{k} structures",
        red.basis.blocks.len(),
        red.gprime.patterns.len()
    ))
}

/// Whether `b` maps to a digraph on at most two elements, decided as 2-SAT:
/// commit to a value when its unit propagation succeeds, else to the other.
fn maps_to_small_digraph(b: &Structure, c: &Structure) -> bool {
    let arcs: Vec<(usize, usize)> = b.relation(0).iter().map(|t| (t[0], t[1])).collect();
    if c.size() == 0 {
        return b.size() == 0;
    }
    if c.size() == 1 {
        return arcs.is_empty() || c.contains(0, &[0, 0]);
    }
    let mut adj = vec![Vec::new(); b.size()];
    for &(u, v) in &arcs {
        adj[u].push((v, true));
        adj[v].push((u, false));
    }
    let allowed = |fx: usize, fy: usize, x_is_tail: bool| {
        if x_is_tail {
            c.contains(0, &[fx, fy])
        } else {
            c.contains(0, &[fy, fx])
        }
    };
    let mut val = vec![usize::MAX; b.size()];
    let propagate = |val: &mut Vec<usize>, start: usize, v: usize| -> Option<Vec<usize>> {
        let mut set = vec![start];
        val[start] = v;
        let mut i = 0;
        while i < set.len() {
            let x = set[i];
            i += 1;
            for &(y, tail) in &adj[x] {
                let options: Vec<usize> = (0..2)
                    .filter(|&fy| (val[y] == usize::MAX || val[y] == fy) && allowed(val[x], fy, tail))
                    .collect();
                match options.len() {
                    0 => {
                        for &z in &set {
                            val[z] = usize::MAX;
                        }
                        return None;
                    }
                    1 if val[y] == usize::MAX => {
                        val[y] = options[0];
                        set.push(y);
                    }
                    _ => {}
                }
            }
        }
        Some(set)
    };
    for x in 0..b.size() {
        if val[x] != usize::MAX {
            continue;
        }
        if propagate(&mut val, x, 0).is_none() && propagate(&mut val, x, 1).is_none() {
            return false;
        }
    }
    true
}

fn c7_sparse() -> Outcome {
    let a = clique(3);
    let params = SparseParams::defaults_for(&a, 2, 4);
    let r = sparse_replace(&a, &params).map_err(|e| e.to_string())?;
    if r.attempt >= 64 {
        return Err(format!("accepted at attempt {}", r.attempt));
    }
    let b = &r.structure;
    if let Some(f) = verify_sparse(&a, b, 2, 4).map_err(|e| e.to_string())? {
        return Err(format!("verify_sparse rejects the output: {f}"));
    }
    // Independent checks of the three clauses.
    if shortest_cycle_below(b, 4).is_some() {
        return Err("short cycle".into());
    }
    for t in b.relation(0) {
        let image = [r.projection[t[0]], r.projection[t[1]]];
        if !a.contains(0, &image) {
            return Err(format!("projection sends {t:?} to a non-arc"));
        }
    }
    let k2 = clique(2);
    if maps_to_small_digraph(&a, &k2) || !maps_to_small_digraph(&liftshadow::relcore::build::directed_cycle(4), &k2) {
        return Err("2-SAT oracle fails its controls".into());
    }
    let sig = Signature::digraph();
    let mut targets = 0;
    for n in 0..=2 {
        for_each_labeled(&sig, n, LABELED_LIMIT, &mut |c| {
            targets += 1;
            let a_maps = maps_to_small_digraph(&a, c);
            let b_maps = maps_to_small_digraph(b, c);
            if a_maps != b_maps {
                eprintln!("separating target {c:?}");
                targets = usize::MAX;
                return false;
            }
            true
        })
        .map_err(|e| e.to_string())?;
        if targets == usize::MAX {
            return Err("oracle found a separating target".into());
        }
    }
    if sparse_replace(&a, &params).map_err(|e| e.to_string())?.structure != *b {
        return Err("output depends on more than the seed".into());
    }
    Ok(format!(
        "attempt {}, {} elements, {} tuples, {} deleted, {targets} labeled targets agree",
        r.attempt,
        b.size(),
        b.tuple_count(),
        r.deleted
    ))
}

/// Monadic plain families whose normalized patterns are forests.
fn forest_family_corpus() -> Vec<(String, PatternFamily)> {
    let mut out = Vec::new();
    out.push(("3-coloring".to_string(), three_coloring_family()));
    out.push((
        "2-coloring".to_string(),
        family_of(
            HomKind::Plain,
            (0..2)
                .map(|c| monochrome(&arc(), 2, c, CoverMode::Partition).unwrap())
                .collect(),
        ),
    ));
    out.push((
        "no monochromatic 2-path".to_string(),
        family_of(
            HomKind::Plain,
            (0..2)
                .map(|c| monochrome(&directed_path(2), 2, c, CoverMode::Partition).unwrap())
                .collect(),
        ),
    ));
    out.push((
        "no arc from C1 to C2".to_string(),
        family_of(
            HomKind::Plain,
            vec![vertex_colored(&arc(), 2, &[vec![0], vec![1]], CoverMode::Partition).unwrap()],
        ),
    ));
    out.push((
        "out-star and arc".to_string(),
        family_of(
            HomKind::Plain,
            vec![
                vertex_colored(&digraph(3, &[(0, 1), (0, 2)]), 2, &[vec![0, 1, 2], vec![]], CoverMode::None)
                    .unwrap(),
                vertex_colored(&arc(), 2, &[vec![], vec![0, 1]], CoverMode::None).unwrap(),
            ],
        ),
    ));
    out.push((
        "uncolored source".to_string(),
        family_of(
            HomKind::Plain,
            vec![
                vertex_colored(&arc(), 2, &[vec![1], vec![]], CoverMode::None).unwrap(),
                vertex_colored(&directed_path(2), 2, &[vec![], vec![0, 2]], CoverMode::None).unwrap(),
            ],
        ),
    ));
    for phi in generate_corpus(7, 60) {
        if !phi.restrictions().is_mmsnp() || phi.proof.is_empty() {
            continue;
        }
        let Ok(fam) = to_lifts_general(&phi) else { continue };
        let Ok(norm) = normalize_family(&fam) else { continue };
        if norm.patterns.iter().all(|p| is_forest(p.carrier())) {
            out.push((format!("formula {}", phi.name), fam));
        }
    }
    out
}

fn c8_shadow_duality() -> Outcome {
    let corpus = forest_family_corpus();
    let mut checked = 0usize;
    for (name, fam) in &corpus {
        let norm = normalize_family(fam).map_err(|e| format!("{name}: {e}"))?;
        let templates = shadow_templates(&norm, DualLimits::default()).map_err(|e| format!("{name}: {e}"))?;
        let check = verify_shadow_duality(fam, &templates, 4).map_err(|e| format!("{name}: {e}"))?;
        if !check.holds {
            return Err(format!("{name}: counterexample {:?}", check.counterexample));
        }
        checked += check.checked;
    }
    Ok(format!("{} families, {checked} structures checked, 0 violations", corpus.len()))
}
