//! Exact solvers for any number of agents.
//!
//! Every entry point returns the first solution in the canonical order:
//! smallest size first, then lexicographically smallest sorted item set.

use itertools::Itertools;

use crate::error::{PidError, Result};
use crate::matching::{find_proportional_allocation, obstruction_search, Allocation, Outcome};
use crate::profile::{Item, ItemSet, Profile};

/// Largest item count [`solve_exhaustive`] accepts by default.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

/// A deletion set together with a proportional allocation of what remains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub deleted: ItemSet,
    pub allocation: Allocation,
}

impl Solution {
    pub fn size(&self) -> usize {
        self.deleted.len()
    }
}

/// The allocation witnessing that `deleted` is a solution, if it is one.
pub fn check_solution(profile: &Profile, deleted: &ItemSet) -> Result<Option<Allocation>> {
    let remaining = profile.delete_items(deleted)?;
    Ok(find_proportional_allocation(&remaining))
}

/// Deletion sizes that leave an item count divisible by the agent count.
fn admissible_sizes(profile: &Profile, max: usize) -> impl Iterator<Item = usize> {
    let m = profile.n_items();
    let n = profile.n_agents();
    (0..=max.min(m)).filter(move |s| (m - s) % n == 0)
}

/// A minimum-size solution of size at most `k`, if one exists.
///
/// Rather than testing every subset, the search branches on the items of a
/// minimal obstruction of the current residual profile: every solution must
/// delete one of them. Each branch forbids the items tried before it, so every
/// solution of the target size is reached exactly once and the
/// lexicographically smallest one is returned, as plain enumeration would.
pub fn solve_bounded(profile: &Profile, k: usize) -> Option<Solution> {
    for size in admissible_sizes(profile, k) {
        let mut best: Option<ItemSet> = None;
        let mut deleted = ItemSet::new();
        let mut forbidden = ItemSet::new();
        hit_obstructions(profile, size, &mut deleted, &mut forbidden, &mut best);
        if let Some(deleted) = best {
            let allocation = check_solution(profile, &deleted)
                .expect("deleted items come from the profile")
                .expect("search leaves are solutions");
            return Some(Solution {
                deleted,
                allocation,
            });
        }
    }
    None
}

fn hit_obstructions(
    profile: &Profile,
    size: usize,
    deleted: &mut ItemSet,
    forbidden: &mut ItemSet,
    best: &mut Option<ItemSet>,
) {
    let remaining = profile.delete_known_items(deleted);
    let obstruction = match obstruction_search(&remaining) {
        Outcome::Allocation(_) => {
            if deleted.len() == size && best.as_ref().map_or(true, |b| &*deleted < b) {
                *best = Some(deleted.clone());
            }
            return;
        }
        Outcome::Obstruction(cert) => cert,
    };
    if deleted.len() == size {
        return;
    }
    let candidates: Vec<Item> = obstruction
        .witness_items
        .iter()
        .filter(|i| !forbidden.contains(i))
        .copied()
        .collect();
    let mut added = Vec::new();
    for item in candidates {
        deleted.insert(item);
        hit_obstructions(profile, size, deleted, forbidden, best);
        deleted.remove(&item);
        forbidden.insert(item);
        added.push(item);
    }
    for item in added {
        forbidden.remove(&item);
    }
}

/// Plain subset enumeration: sizes ascending, lexicographic within a size.
pub fn solve_bounded_by_enumeration(profile: &Profile, k: usize) -> Option<Solution> {
    admissible_sizes(profile, k).find_map(|size| {
        profile
            .items()
            .iter()
            .copied()
            .combinations(size)
            .find_map(|subset| {
                let deleted: ItemSet = subset.into_iter().collect();
                let allocation =
                    find_proportional_allocation(&profile.delete_known_items(&deleted))?;
                Some(Solution {
                    deleted,
                    allocation,
                })
            })
    })
}

/// A minimum-size solution by exhaustive enumeration, for at most
/// [`DEFAULT_EXHAUSTIVE_CAP`] items.
pub fn solve_exhaustive(profile: &Profile) -> Result<Solution> {
    solve_exhaustive_capped(profile, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn solve_exhaustive_capped(profile: &Profile, cap: usize) -> Result<Solution> {
    let size = profile.n_items();
    if size > cap {
        return Err(PidError::InstanceTooLarge { size, cap });
    }
    Ok(solve_bounded_by_enumeration(profile, size)
        .expect("deleting every item always leaves a proportional profile"))
}

pub fn min_deletion_size(profile: &Profile) -> Result<usize> {
    solve_exhaustive(profile).map(|s| s.size())
}

/// Every minimum-size solution, in canonical order.
pub fn all_minimum_solutions(profile: &Profile) -> Result<Vec<ItemSet>> {
    let size = min_deletion_size(profile)?;
    Ok(profile
        .items()
        .iter()
        .copied()
        .combinations(size)
        .map(|subset| subset.into_iter().collect::<ItemSet>())
        .filter(|deleted| {
            find_proportional_allocation(&profile.delete_known_items(deleted)).is_some()
        })
        .collect())
}
