//! Branching sets: small families of partial solutions for a minimal
//! obstruction, pruned by domination.

use itertools::Itertools;

use crate::error::Result;
use crate::matching::partial_solution_unchecked;
use crate::prefix::Prefix;
use crate::profile::{Item, ItemSet};

/// Order in which branching candidates are generated and explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateOrder {
    /// Size ascending, then lexicographic.
    #[default]
    Lexicographic,
    /// Size ascending, then reverse lexicographic.
    Reverse,
}

/// Upper bound on a branching set: with at most twelve boundary-or-tail items
/// there are `12 + 1` classes of singletons and `66 + 12 + 1` classes of pairs.
pub const BRANCHING_SET_CEILING: usize = 13 + 79;

/// `δ(Q) ∪ T(Q)`.
pub fn boundary_and_tail(obstruction: &Prefix) -> Result<ItemSet> {
    let mut set = obstruction.boundary()?;
    set.extend(obstruction.tail()?);
    Ok(set)
}

/// `y_prime` dominates `y` if both have the same size and `y_prime` touches the
/// boundary or tail of the obstruction only where `y` does.
pub fn dominates(y_prime: &ItemSet, y: &ItemSet, obstruction: &Prefix) -> Result<bool> {
    Ok(dominates_within(
        y_prime,
        y,
        &boundary_and_tail(obstruction)?,
    ))
}

/// `y_prime` and `y` have the same size and meet the boundary and tail of the
/// obstruction in exactly the same items.
///
/// This is the relation the branching set prunes with. One-sided domination
/// is not safe: a dominated candidate may reach past a prefix that crosses
/// the obstruction where its dominator does not, and pruning it can lose the
/// only minimum solution.
pub fn interchangeable(y_prime: &ItemSet, y: &ItemSet, obstruction: &Prefix) -> Result<bool> {
    Ok(interchangeable_within(
        y_prime,
        y,
        &boundary_and_tail(obstruction)?,
    ))
}

pub(crate) fn interchangeable_within(y_prime: &ItemSet, y: &ItemSet, marked: &ItemSet) -> bool {
    dominates_within(y_prime, y, marked) && dominates_within(y, y_prime, marked)
}

pub(crate) fn dominates_within(y_prime: &ItemSet, y: &ItemSet, marked: &ItemSet) -> bool {
    y_prime.len() == y.len()
        && y_prime
            .iter()
            .filter(|i| marked.contains(i))
            .all(|i| y.contains(i))
}

/// Partial solutions of size one or two avoiding `forbidden`, keeping the
/// first candidate of each [`interchangeable`] class.
///
/// The class test runs before the matching check: a candidate whose class is
/// already represented is dropped whether or not it is a partial solution, so
/// the result is the same and most matchings are skipped.
pub fn branching_set(
    obstruction: &Prefix,
    forbidden: &ItemSet,
    order: CandidateOrder,
) -> Result<Vec<ItemSet>> {
    let marked = boundary_and_tail(obstruction)?;
    let mut free: Vec<Item> = obstruction
        .items()
        .into_iter()
        .filter(|i| !forbidden.contains(i))
        .collect();
    if order == CandidateOrder::Reverse {
        free.reverse();
    }
    let mut retained: Vec<ItemSet> = Vec::new();
    for size in 1..=2 {
        for combo in free.iter().copied().combinations(size) {
            let y: ItemSet = combo.into_iter().collect();
            if retained
                .iter()
                .any(|r| interchangeable_within(r, &y, &marked))
            {
                continue;
            }
            if partial_solution_unchecked(obstruction, &y) {
                retained.push(y);
            }
        }
    }
    Ok(retained)
}
