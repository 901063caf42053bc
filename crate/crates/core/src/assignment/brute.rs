use itertools::Itertools;

use crate::error::{Error, Result};

use super::hungarian::check_square;
use super::{Cost, FileMap};

/// `9! = 362880` bijections is the most we enumerate.
pub const MAX_BRUTE_FORCE_K: usize = 9;

/// Minimum over all `k!` bijections; the first minimum in lexicographic
/// order wins ties.
pub fn brute_force_assignment<T: Cost>(cost: &[Vec<T>]) -> Result<(FileMap, T)> {
    let k = check_square(cost)?;
    if k > MAX_BRUTE_FORCE_K {
        return Err(Error::AssignmentTooLarge {
            k,
            max: MAX_BRUTE_FORCE_K,
        });
    }
    let mut best: Option<(FileMap, T)> = None;
    for perm in (0..k).permutations(k) {
        let map = FileMap::new(perm);
        let c = map.cost(cost);
        if best.as_ref().is_none_or(|(_, b)| c < *b) {
            best = Some((map, c));
        }
    }
    Ok(best.expect("at least one permutation"))
}
