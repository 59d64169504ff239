use std::sync::Arc;

use super::signature::Signature;
use super::structure::Structure;
use crate::error::{Error, Result};

/// How the lift relations of a lift relate to the tuples of its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverMode {
    /// No requirement.
    None,
    /// Every `r`-tuple lies in at least one lift relation.
    Covering,
    /// Every `r`-tuple lies in exactly one lift relation.
    Partition,
}

impl CoverMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverMode::None => "none",
            CoverMode::Covering => "covering",
            CoverMode::Partition => "partition",
        }
    }
}

/// A structure over a signature with a lift part, together with its cover
/// metadata. The cover mode is declared, never inferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lift {
    carrier: Structure,
    lift_arity: usize,
    cover: CoverMode,
}

impl Lift {
    /// Wrap a carrier, checking the declared cover mode.
    pub fn new(carrier: Structure, cover: CoverMode) -> Result<Self> {
        let sig = carrier.signature();
        let lift_idx = sig.lift_indices();
        let lift_arity = match sig.lift_arity() {
            Some(r) => r,
            None if lift_idx.is_empty() => 1,
            None if cover == CoverMode::None => sig.arity(lift_idx[0]),
            None => {
                return Err(Error::InvalidLift(
                    "lift symbols of a covering lift must share one arity".into(),
                ))
            }
        };
        if cover != CoverMode::None {
            if lift_idx.is_empty() {
                return Err(Error::InvalidLift(
                    "covering lift needs at least one lift symbol".into(),
                ));
            }
            let mut t = vec![0; lift_arity];
            if carrier.size() > 0 {
                loop {
                    let count = lift_idx.iter().filter(|&&s| carrier.contains(s, &t)).count();
                    if count == 0 || (cover == CoverMode::Partition && count > 1) {
                        return Err(Error::InvalidLift(format!(
                            "tuple {t:?} lies in {count} lift relations ({} lift)",
                            cover.as_str()
                        )));
                    }
                    if !next_tuple(&mut t, carrier.size()) {
                        break;
                    }
                }
            }
        }
        Ok(Lift {
            carrier,
            lift_arity,
            cover,
        })
    }

    /// Wrap without checking the cover property.
    pub(crate) fn new_unchecked(carrier: Structure, cover: CoverMode) -> Self {
        let lift_arity = carrier.signature().lift_arity().unwrap_or(1);
        Lift {
            carrier,
            lift_arity,
            cover,
        }
    }

    pub fn carrier(&self) -> &Structure {
        &self.carrier
    }

    pub fn into_carrier(self) -> Structure {
        self.carrier
    }

    pub fn lift_arity(&self) -> usize {
        self.lift_arity
    }

    pub fn cover_mode(&self) -> CoverMode {
        self.cover
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn signature(&self) -> &Signature {
        self.carrier.signature()
    }

    /// The lift relations containing a given `r`-tuple.
    pub fn classes_of(&self, t: &[usize]) -> Vec<usize> {
        self.signature()
            .lift_indices()
            .into_iter()
            .filter(|&s| self.carrier.contains(s, t))
            .collect()
    }

    /// Forget the lift relations.
    pub fn shadow(&self) -> Structure {
        shadow(self)
    }
}

/// The forgetful map: same universe, base relations copied, lift relations
/// dropped.
pub fn shadow(lift: &Lift) -> Structure {
    let base = Arc::new(lift.signature().base_part());
    lift.carrier().restrict_to(base)
}

/// Advance `t` as an odometer over `0..n`; false once it wraps.
pub(crate) fn next_tuple(t: &mut [usize], n: usize) -> bool {
    for i in (0..t.len()).rev() {
        t[i] += 1;
        if t[i] < n {
            return true;
        }
        t[i] = 0;
    }
    false
}
