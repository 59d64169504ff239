//! High-girth replacements: a structure `B` with a homomorphism to `A`, no
//! cycle shorter than `ell`, and the same homomorphisms as `A` into every
//! target with at most `k` elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::{for_each_up_to, LABELED_LIMIT};
use crate::error::{Error, Result};
use crate::homsearch::maps_to;
use crate::relcore::{check_hom, HomMode, Structure, Tuple};
use crate::shape::{shortest_cycle_below, Cycle};

/// Cap on the size of an emitted structure.
pub const SPARSE_SIZE_LIMIT: usize = 4096;

/// Random targets tried per attempt when the targets cannot be enumerated.
const SAMPLED_TARGETS: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseParams {
    pub k: usize,
    pub ell: usize,
    /// Copies of each element of `A`.
    pub fiber_size: usize,
    /// Tuples sampled per tuple of `A`, as a fraction of `fiber_size`.
    pub density: f64,
    pub seed: u64,
    pub max_attempts: usize,
    pub size_limit: usize,
}

impl SparseParams {
    /// `N = 16|A|` and `density = ell |A| / N`.
    pub fn defaults_for(a: &Structure, k: usize, ell: usize) -> Self {
        let n = 16 * a.size().max(1);
        SparseParams {
            k,
            ell,
            fiber_size: n,
            density: (ell * a.size().max(1)) as f64 / n as f64,
            seed: 0,
            max_attempts: 64,
            size_limit: SPARSE_SIZE_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.ell < 2 || self.fiber_size < 1 {
            return Err(Error::Precondition(
                "sparse parameters need k >= 1, ell >= 2 and fiber size >= 1".into(),
            ));
        }
        if !(self.density > 0.0) || !self.density.is_finite() {
            return Err(Error::Precondition("density must be positive".into()));
        }
        if self.max_attempts < 1 {
            return Err(Error::Precondition("at least one attempt is needed".into()));
        }
        Ok(())
    }
}

/// An accepted replacement.
#[derive(Debug, Clone)]
pub struct Sparse {
    pub structure: Structure,
    /// Certified homomorphism to `A`.
    pub projection: Vec<usize>,
    /// Index of the successful attempt; 0 with `structure = A` when `A`
    /// already has girth at least `ell`.
    pub attempt: usize,
    pub fiber_size: usize,
    /// Tuples deleted to raise the girth.
    pub deleted: usize,
    /// Whether all small targets were checked rather than a sample.
    pub exhaustive: bool,
}

/// The first clause of [`verify_sparse`] that fails.
#[derive(Debug, Clone, PartialEq)]
pub enum SparseFailure {
    ShortCycle(Cycle),
    NoProjection,
    /// A small target separating the two structures.
    Target {
        target: Structure,
        a_maps: bool,
        b_maps: bool,
    },
}

impl std::fmt::Display for SparseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SparseFailure::ShortCycle(c) => write!(f, "cycle of length {}", c.len()),
            SparseFailure::NoProjection => f.write_str("no homomorphism to the original"),
            SparseFailure::Target { target, a_maps, b_maps } => write!(
                f,
                "target on {} elements with {} tuples: original maps {}, replacement maps {}",
                target.size(),
                target.tuple_count(),
                a_maps,
                b_maps
            ),
        }
    }
}

/// Check girth `>= ell`, a homomorphism `b -> a`, and `a -> C` iff `b -> C`
/// for every `C` with at most `k` elements. `None` means all hold.
pub fn verify_sparse(a: &Structure, b: &Structure, k: usize, ell: usize) -> Result<Option<SparseFailure>> {
    verify_sparse_with_limit(a, b, k, ell, LABELED_LIMIT)
}

pub fn verify_sparse_with_limit(
    a: &Structure,
    b: &Structure,
    k: usize,
    ell: usize,
    limit: u128,
) -> Result<Option<SparseFailure>> {
    a.check_same_signature(b)?;
    if let Some(c) = shortest_cycle_below(b, ell) {
        return Ok(Some(SparseFailure::ShortCycle(c)));
    }
    if !maps_to(b, a) {
        return Ok(Some(SparseFailure::NoProjection));
    }
    Ok(separating_target(a, b, k, limit)?)
}

fn separating_target(a: &Structure, b: &Structure, k: usize, limit: u128) -> Result<Option<SparseFailure>> {
    let mut failure = None;
    for_each_up_to(a.sig_arc(), k, limit, &mut |c| {
        let (a_maps, b_maps) = (maps_to(a, c), maps_to(b, c));
        if a_maps != b_maps {
            failure = Some(SparseFailure::Target {
                target: c.clone(),
                a_maps,
                b_maps,
            });
            return false;
        }
        true
    })?;
    Ok(failure)
}

/// A separating target among random structures with at most `k` elements.
fn sampled_target(a: &Structure, b: &Structure, k: usize, rng: &mut ChaCha8Rng) -> Option<SparseFailure> {
    let sig = a.sig_arc();
    for _ in 0..SAMPLED_TARGETS {
        let n = rng.gen_range(1..=k);
        let mut c = Structure::new(sig.clone(), n);
        let p: f64 = rng.gen();
        for sym in 0..sig.len() {
            let r = sig.arity(sym);
            let total = n.checked_pow(r as u32).unwrap_or(usize::MAX).min(1 << 12);
            for _ in 0..total {
                if rng.gen_bool(p) {
                    let t: Tuple = (0..r).map(|_| rng.gen_range(0..n)).collect();
                    c.add_tuple(sym, t).expect("in range");
                }
            }
        }
        let (a_maps, b_maps) = (maps_to(a, &c), maps_to(b, &c));
        if a_maps != b_maps {
            return Some(SparseFailure::Target { target: c, a_maps, b_maps });
        }
    }
    None
}

/// Fibered random blow-up of `a` followed by deletion of one random tuple on
/// each cycle shorter than `ell`. Attempts that separate the result from `a`
/// on a small target are retried with larger fibers. Deterministic given
/// `params.seed`.
pub fn sparse_replace(a: &Structure, params: &SparseParams) -> Result<Sparse> {
    params.validate()?;
    if a.size() == 0 {
        return Err(Error::Precondition("the structure must be nonempty".into()));
    }
    if shortest_cycle_below(a, params.ell).is_none() {
        return Ok(Sparse {
            structure: a.clone(),
            projection: (0..a.size()).collect(),
            attempt: 0,
            fiber_size: 1,
            deleted: 0,
            exhaustive: true,
        });
    }
    let mut n = params.fiber_size;
    let step = (params.fiber_size / 4).max(1);
    let mut last = String::from("no attempt finished");
    for attempt in 0..params.max_attempts {
        if a.size().saturating_mul(n) > params.size_limit {
            last = format!(
                "{} elements needed, size limit is {}",
                a.size().saturating_mul(n),
                params.size_limit
            );
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(attempt as u64);
        let (b, deleted) = blow_up(a, n, params, &mut rng);
        let projection: Vec<usize> = (0..b.size()).map(|x| x / n).collect();
        check_hom(&b, a, &projection, &HomMode::PLAIN)?;
        let (failure, exhaustive) = match separating_target(a, &b, params.k, LABELED_LIMIT) {
            Ok(f) => (f, true),
            Err(Error::GuardExceeded { .. }) => (sampled_target(a, &b, params.k, &mut rng), false),
            Err(e) => return Err(e),
        };
        match failure {
            None => {
                return Ok(Sparse {
                    structure: b,
                    projection,
                    attempt,
                    fiber_size: n,
                    deleted,
                    exhaustive,
                })
            }
            Some(f) => {
                last = format!(
                    "attempt {attempt} ({} elements, {} tuples, {deleted} deleted): {f}",
                    b.size(),
                    b.tuple_count()
                );
                n += step;
            }
        }
    }
    Err(Error::AttemptsExhausted {
        attempts: params.max_attempts,
        reason: last,
    })
}

/// Elements `(x, j)` are numbered `x * n + j`.
fn blow_up(a: &Structure, n: usize, params: &SparseParams, rng: &mut ChaCha8Rng) -> (Structure, usize) {
    let mut b = Structure::new(a.sig_arc().clone(), a.size() * n);
    if let Some(names) = a.names() {
        let fibered = (0..a.size() * n)
            .map(|e| format!("{}_{}", names[e / n], e % n))
            .collect();
        b = b.with_names(fibered).expect("one name per element");
    }
    let per_tuple = ((params.density * n as f64).round() as usize).max(1);
    for (sym, t) in a.tuples() {
        for _ in 0..per_tuple {
            let u: Tuple = t.iter().map(|&x| x * n + rng.gen_range(0..n)).collect();
            b.add_tuple(sym, u).expect("in range");
        }
    }
    let mut deleted = 0;
    while let Some(c) = shortest_cycle_below(&b, params.ell) {
        let (sym, t) = c.tuples.choose(rng).expect("cycles have tuples");
        b.remove_tuple(*sym, t);
        deleted += 1;
    }
    (b, deleted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::build::{clique, directed_cycle, directed_path, loop_point};

    #[test]
    fn directed_nine_cycle_replaces_triangle() {
        assert_eq!(verify_sparse(&clique(3), &directed_cycle(9), 2, 4).unwrap(), None);
    }

    #[test]
    fn four_cycle_is_separated_by_an_edge() {
        let f = verify_sparse(&clique(3), &directed_cycle(4), 2, 4).unwrap();
        match f {
            Some(SparseFailure::Target { target, a_maps, b_maps }) => {
                assert!(!a_maps && b_maps);
                assert_eq!(target.size(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structure_replaces_itself() {
        let p = directed_path(3);
        assert_eq!(verify_sparse(&p, &p, 2, 100).unwrap(), None);
        let r = sparse_replace(&p, &SparseParams::defaults_for(&p, 2, 5)).unwrap();
        assert_eq!(r.structure, p);
        assert_eq!(r.attempt, 0);
    }

    #[test]
    fn triangle_replacement_is_deterministic() {
        let a = clique(3);
        let p = SparseParams::defaults_for(&a, 2, 4);
        let r = sparse_replace(&a, &p).unwrap();
        assert_eq!(verify_sparse(&a, &r.structure, 2, 4).unwrap(), None);
        assert_eq!(sparse_replace(&a, &p).unwrap().structure, r.structure);
    }

    #[test]
    fn loop_replacement_has_no_loops() {
        let a = loop_point();
        let r = sparse_replace(&a, &SparseParams::defaults_for(&a, 1, 3)).unwrap();
        assert!(shortest_cycle_below(&r.structure, 3).is_none());
        assert!(r.structure.tuple_count() > 0);
    }
}
