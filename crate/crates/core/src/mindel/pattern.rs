//! Deficiency patterns and strong equivalence of partial solutions.

use std::collections::BTreeSet;

use crate::error::{PidError, Result};
use crate::prefix::{intersecting_cuts, slot_count, Prefix};
use crate::profile::{Item, ItemSet};

/// `(size(Q ∩ R), def(Q ∩ R), I(Q ∩ R) ∩ δ(Q))` for one straight or slant `R`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeficiencyTriple {
    pub size: [usize; 3],
    pub deficiency: i64,
    pub boundary_items: ItemSet,
}

pub type DeficiencyPattern = BTreeSet<DeficiencyTriple>;

/// `|S(Q)| - |I(Q)|`, incomplete slots included.
pub fn deficiency(prefix: &Prefix) -> i64 {
    prefix.deficiency()
}

/// Cut vectors of all straight and slant prefixes with index `i ≡ 1 (mod 3)`
/// and `i <= max_cut + 3`. Larger shapes clip to the same intersections.
/// The slant shape of index 1 lags at a zero cut.
pub fn reference_shapes(max_cut: usize) -> Vec<[usize; 3]> {
    let mut shapes = Vec::new();
    for i in (1..=max_cut + 3).step_by(3) {
        shapes.push([i, i, i]);
        for lag in 0..3 {
            let mut s = [i; 3];
            s[lag] = i.saturating_sub(3);
            shapes.push(s);
        }
    }
    shapes
}

/// The deficiency pattern of a three-agent prefix.
pub fn deficiency_pattern(prefix: &Prefix) -> Result<DeficiencyPattern> {
    if prefix.n_agents() != 3 {
        return Err(PidError::WrongAgentCount {
            expected: 3,
            found: prefix.n_agents(),
        });
    }
    let lists = prefix.cut_lists();
    Ok(pattern_of_lists([lists[0], lists[1], lists[2]]))
}

/// The pattern depends only on the three cut lists: every intersection with a
/// reference shape is a prefix of them.
pub(crate) fn pattern_of_lists(lists: [&[Item]; 3]) -> DeficiencyPattern {
    let cuts = [lists[0].len(), lists[1].len(), lists[2].len()];
    let mut items: Vec<Item> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    items.sort_unstable();
    items.dedup();
    // First position of every item in each cut list (usize::MAX if absent).
    let mut position = vec![[usize::MAX; 3]; items.len()];
    for (x, list) in lists.iter().enumerate() {
        for (pos, item) in list.iter().enumerate() {
            let j = items.binary_search(item).expect("listed item");
            position[j][x] = pos;
        }
    }
    let boundary: Vec<bool> = position
        .iter()
        .map(|p| p.iter().filter(|q| **q != usize::MAX).count() < 3)
        .collect();
    let max_cut = *cuts.iter().max().expect("three cuts");
    let mut pattern = DeficiencyPattern::new();
    for shape in reference_shapes(max_cut) {
        if !intersecting_cuts(&cuts, &shape) {
            continue;
        }
        let size = [
            cuts[0].min(shape[0]),
            cuts[1].min(shape[1]),
            cuts[2].min(shape[2]),
        ];
        let mut n_items = 0i64;
        let mut boundary_items = ItemSet::new();
        for (j, p) in position.iter().enumerate() {
            if (0..3).any(|x| p[x] < size[x]) {
                n_items += 1;
                if boundary[j] {
                    boundary_items.insert(items[j]);
                }
            }
        }
        let n_slots: usize = size.iter().map(|c| slot_count(*c, 3)).sum();
        pattern.insert(DeficiencyTriple {
            size,
            deficiency: n_slots as i64 - n_items,
            boundary_items,
        });
    }
    pattern
}

/// Equal size, equal boundary intersection with `t`, and equal deficiency
/// patterns after deletion.
pub fn strongly_equivalent(t: &Prefix, u1: &ItemSet, u2: &ItemSet) -> Result<bool> {
    if u1.len() != u2.len() {
        return Ok(false);
    }
    let boundary = t.boundary()?;
    if u1.intersection(&boundary).ne(u2.intersection(&boundary)) {
        return Ok(false);
    }
    Ok(deficiency_pattern(&t.delete(u1)?)? == deficiency_pattern(&t.delete(u2)?)?)
}
