use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use liftshadow::duality::{forest_family_duals_with_limits, verify_duality, DualityCheck};
use liftshadow::fpdecide::{
    decide_with_limits, fp_membership_with_limit, parse_family, serialize_family, verify_shadow_duality,
    DualLimits, PatternFamily, Verdict,
};
use liftshadow::fvreduce::FvReduction;
use liftshadow::homsearch::{core_with_retraction, hom_exists};
use liftshadow::relcore::text::serialize_structure_block;
use liftshadow::relcore::{parse_document, parse_structure, serialize_lift, serialize_structure, HomKind, HomMode, Structure};
use liftshadow::shape::{blocks, girth, shortest_cycle, Cycle, Girth};
use liftshadow::snpc::{eval_snp_with_limit, parse_snp, to_lifts_full, to_lifts_general, to_lifts_injective};
use liftshadow::sparsegen::{sparse_replace, verify_sparse, SparseFailure, SparseParams};
use liftshadow::Error;

use crate::report::Report;
use crate::{Category, Check, Command, DualCaps, Mode};

type Outcome = Result<Report, String>;

pub fn run(cmd: Command, seed: u64) -> Outcome {
    match cmd {
        Command::Hom { source, target, mode } => hom(&source, &target, mode),
        Command::Core { file } => core(&file),
        Command::Girth { file } => girth_cmd(&file),
        Command::Blocks { file } => blocks_cmd(&file),
        Command::Dual { file, caps } => dual(&file, caps),
        Command::FpDecide { family, out_dir, caps } => fp_decide(&family, out_dir.as_deref(), caps),
        Command::FpMember { family, structure, limit } => fp_member(&family, &structure, limit),
        Command::SnpCompile { formula, category, output } => snp_compile(&formula, category, output.as_deref()),
        Command::SnpEval { formula, structure, limit } => snp_eval(&formula, &structure, limit),
        Command::FvReduce {
            family,
            forward,
            backward,
            no_templates,
            caps,
        } => fv_reduce(&family, forward.as_deref(), backward.as_deref(), no_templates, caps),
        Command::Sparse {
            file,
            k,
            ell,
            fiber_size,
            density,
            attempts,
            size_limit,
            output,
        } => {
            let a = load_structure(&file)?;
            let mut p = SparseParams::defaults_for(&a, k, ell);
            if let Some(n) = fiber_size {
                p.fiber_size = n;
                p.density = (ell * a.size().max(1)) as f64 / n as f64;
            }
            if let Some(d) = density {
                p.density = d;
            }
            p.seed = seed;
            p.max_attempts = attempts;
            p.size_limit = size_limit;
            sparse(&a, &p, output.as_deref())
        }
        Command::Verify { check } => match check {
            Check::Duality { family, templates, n } => verify_duality_cmd(&family, &templates, n),
            Check::Sparse {
                original,
                replacement,
                k,
                ell,
            } => verify_sparse_cmd(&original, &replacement, k, ell),
        },
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn in_file<T>(path: &Path, r: liftshadow::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn load_structure(path: &Path) -> Result<Structure, String> {
    in_file(path, parse_structure(&read(path)?))
}

fn load_family(path: &Path) -> Result<PatternFamily, String> {
    in_file(path, parse_family(&read(path)?))
}

fn load_structures(path: &Path) -> Result<Vec<Structure>, String> {
    let doc = in_file(path, parse_document(&read(path)?))?;
    Ok(doc.structures.into_iter().map(|s| s.structure).collect())
}

fn limits(caps: DualCaps) -> DualLimits {
    DualLimits {
        size: caps.dual_size_limit,
        tuples: caps.dual_tuple_limit,
    }
}

/// Element names as the serializer prints them.
fn elem(s: &Structure, x: usize) -> String {
    match s.names() {
        Some(n) => n[x].clone(),
        None => format!("v{x}"),
    }
}

fn map_json(a: &Structure, b: &Structure, map: &[usize]) -> Value {
    let obj: Map<String, Value> = map
        .iter()
        .enumerate()
        .map(|(x, &y)| (elem(a, x), json!(elem(b, y))))
        .collect();
    Value::Object(obj)
}

fn map_text(a: &Structure, b: &Structure, map: &[usize]) -> String {
    let parts: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{} -> {}", elem(a, x), elem(b, y)))
        .collect();
    parts.join(", ")
}

fn cycle_names(s: &Structure, c: &Cycle) -> Vec<String> {
    c.elements.iter().map(|&x| elem(s, x)).collect()
}

fn girth_json(g: Girth) -> Value {
    match g {
        Girth::Finite(n) => json!(n),
        Girth::Infinite => json!("infinity"),
    }
}

/// Templates in one document: the signature once, then one block each.
fn templates_document(templates: &[Structure]) -> String {
    let Some(first) = templates.first() else {
        return String::new();
    };
    let mut out = format!("{}\n", first.signature());
    for (i, t) in templates.iter().enumerate() {
        out.push_str(&serialize_structure_block(t, &format!("template_{i}"), None));
    }
    out
}

fn hom(source: &Path, target: &Path, mode: Mode) -> Outcome {
    let a = load_structure(source)?;
    let b = load_structure(target)?;
    let kind = match mode {
        Mode::Plain => HomKind::Plain,
        Mode::Injective => HomKind::Injective,
        Mode::Full => HomKind::Full,
    };
    let found = hom_exists(&a, &b, &HomMode::new(kind)).map_err(|e| e.to_string())?;
    let mut r = Report::new("hom", if found.is_some() { 0 } else { 1 });
    r.set("mode", kind.as_str());
    match found {
        Some(h) => {
            r.line(format!("{kind} homomorphism: {}", map_text(&a, &b, &h.map)));
            r.set("exists", true).set("map", map_json(&a, &b, &h.map));
        }
        None => {
            r.line(format!("no {kind} homomorphism"));
            r.set("exists", false);
        }
    }
    Ok(r)
}

fn core(file: &Path) -> Outcome {
    let a = load_structure(file)?;
    let (c, kept, retraction) = core_with_retraction(&a);
    let text = serialize_structure(&c, "core");
    let mut r = Report::new("core", 0);
    r.line(format!("core has {} of {} elements", c.size(), a.size()));
    r.line(format!("retraction: {}", map_text(&a, &c, &retraction)));
    r.line(&text);
    let kept: Vec<String> = kept.iter().map(|&x| elem(&a, x)).collect();
    r.set("size", c.size())
        .set("kept", kept)
        .set("retraction", map_json(&a, &c, &retraction))
        .set("core", text);
    Ok(r)
}

fn girth_cmd(file: &Path) -> Outcome {
    let a = load_structure(file)?;
    let g = girth(&a);
    let mut r = Report::new("girth", 0);
    r.line(g.to_string());
    r.set("girth", girth_json(g));
    if let Some(c) = shortest_cycle(&a) {
        let names = cycle_names(&a, &c);
        r.line(format!("shortest cycle through {}", names.join(", ")));
        r.set("cycle", names);
    }
    Ok(r)
}

fn blocks_cmd(file: &Path) -> Outcome {
    let a = load_structure(file)?;
    let sig = a.signature();
    let mut r = Report::new("blocks", 0);
    let mut out = Vec::new();
    for (i, b) in blocks(&a).iter().enumerate() {
        let elems: Vec<String> = b.elements.iter().map(|&x| elem(&a, x)).collect();
        let tuples: Vec<String> = b
            .tuples
            .iter()
            .map(|(s, t)| {
                let coords: Vec<String> = t.iter().map(|&x| elem(&a, x)).collect();
                format!("{}({})", sig.symbol(*s).name, coords.join(", "))
            })
            .collect();
        r.line(format!("block {i}: {{{}}} {}", elems.join(", "), tuples.join(" ")));
        out.push(json!({ "elements": elems, "tuples": tuples }));
    }
    r.set("blocks", out);
    Ok(r)
}

fn dual(file: &Path, caps: DualCaps) -> Outcome {
    let family = load_structures(file)?;
    let Some(first) = family.first() else {
        return Err(format!("{}: no structure in input", file.display()));
    };
    let sig = first.sig_arc().clone();
    let set = forest_family_duals_with_limits(&sig, &family, caps.dual_size_limit, caps.dual_tuple_limit)
        .map_err(|e| e.to_string())?;
    let doc = templates_document(&set.templates);
    let mut r = Report::new("dual", 0);
    r.line(format!("{} template(s)", set.templates.len()));
    r.line(&doc);
    r.set("count", set.templates.len()).set("templates", doc);
    Ok(r)
}

fn fp_decide(file: &Path, out_dir: Option<&Path>, caps: DualCaps) -> Outcome {
    let fam = load_family(file)?;
    let out = decide_with_limits(&fam, limits(caps)).map_err(|e| e.to_string())?;
    let mut r = Report::new("fp-decide", 0);
    r.set("verdict", out.verdict.as_str());
    r.line(out.verdict.as_str());
    if let Some(note) = &out.note {
        r.line(format!("note: {note}"));
        r.set("note", note.as_str());
    }
    match out.verdict {
        Verdict::NotFiniteUnion => {
            r.exit_code = 1;
            if let Some(w) = &out.witness {
                let names = cycle_names(w.pattern.carrier(), &w.cycle);
                let lift = serialize_lift(&w.pattern, "witness");
                r.line(format!("cycle of length {} through {}", w.cycle.len(), names.join(", ")));
                r.line(&lift);
                r.set("witness", lift).set("cycle", names);
            }
        }
        Verdict::FiniteUnionCsp => {
            let Some(templates) = &out.templates else {
                return Err(out.note.unwrap_or_else(|| "templates unavailable".into()));
            };
            let doc = templates_document(templates);
            r.line(&doc);
            r.set("templates", doc);
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                for (i, t) in templates.iter().enumerate() {
                    let path = dir.join(format!("template_{i}.txt"));
                    fs::write(&path, serialize_structure(t, &format!("template_{i}")))
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                }
            }
        }
    }
    Ok(r)
}

fn fp_member(family: &Path, structure: &Path, limit: u128) -> Outcome {
    let fam = load_family(family)?;
    let a = load_structure(structure)?;
    let found = fp_membership_with_limit(&a, &fam, limit).map_err(|e| e.to_string())?;
    let mut r = Report::new("fp-member", if found.is_some() { 0 } else { 1 });
    r.set("member", found.is_some());
    match found {
        Some(l) => {
            let text = serialize_lift(&l, "witness");
            r.line("member; a lift avoiding every pattern:");
            r.line(&text);
            r.set("witness", text);
        }
        None => {
            r.line("not a member; every partition lift contains a pattern");
        }
    }
    Ok(r)
}

fn snp_compile(file: &Path, category: Category, output: Option<&Path>) -> Outcome {
    let phi = in_file(file, parse_snp(&read(file)?))?;
    let res = phi.restrictions();
    let compiled = match category {
        Category::General => to_lifts_general(&phi),
        Category::Injective => to_lifts_injective(&phi),
        Category::Full => to_lifts_full(&phi),
    };
    let name = match category {
        Category::General => "general",
        Category::Injective => "injective",
        Category::Full => "full",
    };
    let restrictions = json!({
        "monotone": res.monotone,
        "monadic": res.monadic,
        "no_inequality": res.no_inequality,
    });
    let fam = match compiled {
        Ok(f) => f,
        Err(Error::RestrictionViolation(msg)) => {
            let mut r = Report::new("snp-compile", 1);
            r.line(format!("restriction violated: {msg}"));
            r.line(format!(
                "monotone: {}, monadic: {}, no inequality: {}",
                res.monotone, res.monadic, res.no_inequality
            ));
            r.set("category", name).set("violation", msg).set("restrictions", restrictions);
            return Ok(r);
        }
        Err(e) => return Err(e.to_string()),
    };
    let text = serialize_family(&fam);
    let mut r = Report::new("snp-compile", 0);
    r.set("category", name)
        .set("restrictions", restrictions)
        .set("patterns", fam.patterns.len());
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            r.line(format!("{} pattern(s) written to {}", fam.patterns.len(), path.display()));
            r.set("output", path.display().to_string());
        }
        None => {
            r.line(&text);
        }
    }
    r.set("family", text);
    Ok(r)
}

fn snp_eval(formula: &Path, structure: &Path, limit: u128) -> Outcome {
    let phi = in_file(formula, parse_snp(&read(formula)?))?;
    let a = load_structure(structure)?;
    let holds = eval_snp_with_limit(&phi, &a, limit).map_err(|e| e.to_string())?;
    let mut r = Report::new("snp-eval", if holds { 0 } else { 1 });
    r.line(if holds { "satisfied" } else { "not satisfied" });
    r.set("satisfied", holds);
    Ok(r)
}

fn fv_reduce(
    file: &Path,
    forward: Option<&Path>,
    backward: Option<&Path>,
    no_templates: bool,
    caps: DualCaps,
) -> Outcome {
    let fam = load_family(file)?;
    let red = FvReduction::new(&fam).map_err(|e| e.to_string())?;
    let mut r = Report::new("fv-reduce", 0);
    r.line(format!("block signature: {}", red.basis.beta));
    let mut blocks = Vec::new();
    for (i, b) in red.basis.blocks.iter().enumerate() {
        let name = &red.basis.beta.symbol(i).name;
        let text = serialize_structure(b, name);
        r.line(&text);
        blocks.push(json!({ "symbol": name, "structure": text }));
    }
    let g = serialize_family(&red.gprime);
    r.line(format!("G′ has {} member(s); girth threshold {}", red.gprime.patterns.len(), red.threshold));
    r.line(&g);
    r.set("block_signature", red.basis.beta.to_string())
        .set("blocks", blocks)
        .set("gprime", g)
        .set("threshold", red.threshold);
    if !no_templates {
        let t = red.templates(limits(caps)).map_err(|e| e.to_string())?;
        let doc = templates_document(&t);
        r.line(format!("{} template(s) for G′", t.len()));
        r.line(&doc);
        r.set("templates", doc);
    }
    if let Some(path) = forward {
        let a = load_structure(path)?;
        let psi = red.psi(&a).map_err(|e| e.to_string())?;
        let text = serialize_structure(&psi, "forward");
        r.line(&text);
        r.set("forward", text);
    }
    if let Some(path) = backward {
        let b = load_structure(path)?;
        let b = b
            .with_signature(red.basis.beta.clone())
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let theta = red.backward(&b).map_err(|e| e.to_string())?;
        let text = serialize_structure(&theta, "backward");
        r.line(&text);
        r.set("backward", text);
    }
    Ok(r)
}

fn sparse(a: &Structure, p: &SparseParams, output: Option<&Path>) -> Outcome {
    let s = sparse_replace(a, p).map_err(|e| e.to_string())?;
    let text = serialize_structure(&s.structure, "sparse");
    let mut r = Report::new("sparse", 0);
    r.line(format!(
        "attempt {}: {} elements, {} tuples, girth {}, {} tuple(s) deleted, targets {}",
        s.attempt,
        s.structure.size(),
        s.structure.tuple_count(),
        girth(&s.structure),
        s.deleted,
        if s.exhaustive { "exhausted" } else { "sampled" }
    ));
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            r.line(format!("written to {}", path.display()));
        }
        None => {
            r.line(&text);
        }
    }
    r.set("attempt", s.attempt)
        .set("seed", p.seed)
        .set("fiber_size", s.fiber_size)
        .set("deleted", s.deleted)
        .set("exhaustive", s.exhaustive)
        .set("girth", girth_json(girth(&s.structure)))
        .set("projection", map_json(&s.structure, a, &s.projection))
        .set("structure", text);
    Ok(r)
}

fn duality_report(check: DualityCheck, n: usize) -> Report {
    let mut r = Report::new("verify", if check.holds { 0 } else { 1 });
    r.set("check", "duality").set("holds", check.holds).set("checked", check.checked).set("n", n);
    if check.holds {
        r.line(format!("duality holds on {} structure(s) with at most {n} elements", check.checked));
    } else if let Some(c) = check.counterexample {
        let text = serialize_structure(&c, "counterexample");
        r.line("duality fails; counterexample:");
        r.line(&text);
        r.set("counterexample", text);
    }
    r
}

fn verify_duality_cmd(family: &Path, templates: &Path, n: usize) -> Outcome {
    let text = read(family)?;
    let templates = load_structures(templates)?;
    let check = match parse_family(&text) {
        Ok(fam) if fam.signature.has_lift_part() => verify_shadow_duality(&fam, &templates, n),
        _ => {
            let doc = in_file(family, parse_document(&text))?;
            let members: Vec<Structure> = doc.structures.into_iter().map(|s| s.structure).collect();
            let Some(first) = members.first().or(templates.first()) else {
                return Err("nothing to compare".into());
            };
            let sig = first.sig_arc().clone();
            verify_duality(&sig, &members, &templates, n)
        }
    };
    Ok(duality_report(check.map_err(|e| e.to_string())?, n))
}

fn verify_sparse_cmd(original: &Path, replacement: &Path, k: usize, ell: usize) -> Outcome {
    let a = load_structure(original)?;
    let b = load_structure(replacement)?;
    let failure = verify_sparse(&a, &b, k, ell).map_err(|e| e.to_string())?;
    let mut r = Report::new("verify", if failure.is_none() { 0 } else { 1 });
    r.set("check", "sparse").set("holds", failure.is_none());
    match failure {
        None => {
            r.line(format!("girth at least {ell}, maps to the original, agrees on targets up to {k} elements"));
        }
        Some(f) => {
            let mut line = format!("fails: {f}");
            if let SparseFailure::Target { target, .. } = &f {
                let text = serialize_structure(target, "target");
                let _ = write!(line, "\n{text}");
                r.set("target", text);
            }
            if let SparseFailure::ShortCycle(c) = &f {
                r.set("cycle", cycle_names(&b, c));
            }
            r.line(line);
            r.set("failure", f.to_string());
        }
    }
    Ok(r)
}
