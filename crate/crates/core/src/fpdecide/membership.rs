use crate::error::{guard, Error, Result};
use crate::homsearch::HomSearch;
use crate::relcore::{next_tuple, CoverMode, Lift, Structure, Tuple};

use super::family::PatternFamily;

/// Default cap on `|colors| ^ (#r-tuples)` for membership search.
pub const MEMBERSHIP_LIMIT: u128 = 1 << 40;

/// A partition lift of `a` that no pattern maps into, if one exists.
pub fn fp_membership(a: &Structure, fam: &PatternFamily) -> Result<Option<Lift>> {
    fp_membership_with_limit(a, fam, MEMBERSHIP_LIMIT)
}

pub fn fp_membership_with_limit(
    a: &Structure,
    fam: &PatternFamily,
    limit: u128,
) -> Result<Option<Lift>> {
    let base = fam.base_signature();
    if a.signature() != &*base {
        return Err(Error::SignatureMismatch(format!(
            "structure over {}, family input signature {}",
            a.signature(),
            base
        )));
    }
    let colors = fam.colors();
    let r = fam.lift_arity;
    let n = a.size();
    let slots = (n as u128).saturating_pow(r as u32);
    let space = (colors.len() as u128).saturating_pow(slots.min(u32::MAX as u128) as u32);
    guard("membership color assignments", space, limit)?;

    // r-tuples grouped by their largest coordinate.
    let mut by_max: Vec<Vec<Tuple>> = vec![Vec::new(); n];
    if n > 0 {
        let mut t = vec![0; r];
        loop {
            let m = *t.iter().max().expect("r >= 1");
            by_max[m].push(t.clone());
            if !next_tuple(&mut t, n) {
                break;
            }
        }
    }
    let carrier = a.restrict_to(fam.signature.clone()).without_names();
    let modes: Vec<_> = fam.patterns.iter().map(|p| fam.mode_for(p)).collect();
    let mut st = Search {
        fam,
        colors: &colors,
        by_max: &by_max,
        modes: &modes,
        lift: carrier,
    };
    if st.violated(0) {
        return Ok(None);
    }
    if st.extend(0, 0) {
        let mut lift = st.lift;
        if let Some(names) = a.names() {
            lift = lift.with_names(names.to_vec())?;
        }
        Ok(Some(Lift::new_unchecked(lift, CoverMode::Partition)))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    fam: &'a PatternFamily,
    colors: &'a [usize],
    by_max: &'a [Vec<Tuple>],
    modes: &'a [crate::relcore::HomMode],
    lift: Structure,
}

impl Search<'_> {
    /// Whether some pattern maps into the lift induced on `0..prefix`.
    fn violated(&self, prefix: usize) -> bool {
        let elems: Vec<usize> = (0..prefix).collect();
        let sub = self.lift.induced(&elems);
        self.fam.patterns.iter().zip(self.modes).any(|(p, mode)| {
            HomSearch::new(p.carrier(), &sub, mode)
                .map(|s| s.find().is_some())
                .unwrap_or(false)
        })
    }

    /// Color the tuples of element `elem` starting from its `k`-th tuple.
    fn extend(&mut self, elem: usize, k: usize) -> bool {
        if elem == self.by_max.len() {
            return true;
        }
        if k == self.by_max[elem].len() {
            if self.violated(elem + 1) {
                return false;
            }
            return self.extend(elem + 1, 0);
        }
        let t = self.by_max[elem][k].clone();
        for &c in self.colors {
            self.lift.add_tuple(c, t.clone()).expect("valid tuple");
            if self.extend(elem, k + 1) {
                return true;
            }
            self.lift.remove_tuple(c, &t);
        }
        false
    }
}
