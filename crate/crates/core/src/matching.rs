//! Slot/item eligibility graphs and everything decided by bipartite matching:
//! prefix solvability, proportional allocations and minimal obstructions.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{PidError, Result};
use crate::prefix::{complete_slot_count, window, Prefix, Slot};
use crate::profile::{Item, ItemSet, Profile};

const NONE: usize = usize::MAX;

/// Bipartite graph between slots and items.
///
/// Adjacency lists are ordered by item id so that matchings are reproducible.
#[derive(Debug, Clone)]
pub struct EligibilityGraph {
    slots: Vec<Slot>,
    complete: Vec<bool>,
    items: Vec<Item>,
    adjacency: Vec<Vec<usize>>,
}

impl EligibilityGraph {
    /// The underlying graph `G` of a profile.
    pub fn of_profile(profile: &Profile) -> Self {
        let cuts: Vec<usize> = profile.lists().iter().map(Vec::len).collect();
        Self::build(profile, &cuts)
    }

    /// `G(Q)`: the subgraph of `G` induced by the slots and items of `Q`.
    pub fn of_prefix(prefix: &Prefix) -> Self {
        Self::build(prefix.profile(), prefix.cuts())
    }

    fn build(profile: &Profile, cuts: &[usize]) -> Self {
        let prefix_items: ItemSet = cuts
            .iter()
            .enumerate()
            .flat_map(|(x, c)| profile.list(x)[..*c].iter().copied())
            .collect();
        let items: Vec<Item> = prefix_items.iter().copied().collect();
        let n = profile.n_agents();
        let mut slots = Vec::new();
        let mut complete = Vec::new();
        let mut adjacency = Vec::new();
        for (x, cut) in cuts.iter().enumerate() {
            let list = profile.list(x);
            for index in 1..=crate::prefix::slot_count(*cut, n) {
                let w = window(index, n).min(list.len());
                let mut adj: Vec<usize> = list[..w]
                    .iter()
                    .filter_map(|p| items.binary_search(p).ok())
                    .collect();
                adj.sort_unstable();
                slots.push(Slot::new(x, index));
                complete.push(window(index, n) <= *cut);
                adjacency.push(adj);
            }
        }
        EligibilityGraph {
            slots,
            complete,
            items,
            adjacency,
        }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn is_complete(&self, slot_index: usize) -> bool {
        self.complete[slot_index]
    }

    /// Items eligible for the slot, in id order. Empty for unknown slots.
    pub fn eligible(&self, slot: Slot) -> Vec<Item> {
        match self.slots.iter().position(|s| *s == slot) {
            Some(s) => self.adjacency[s].iter().map(|j| self.items[*j]).collect(),
            None => Vec::new(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// A maximum-cardinality matching (Hopcroft–Karp).
    pub fn max_matching(&self) -> Matching {
        let slot_match = hopcroft_karp(&self.adjacency, self.items.len());
        Matching {
            pairs: slot_match
                .iter()
                .enumerate()
                .filter(|(_, j)| **j != NONE)
                .map(|(s, j)| (self.slots[s], self.items[*j]))
                .collect(),
        }
    }

    /// Maximum matching restricted to complete slots.
    fn complete_matching_size(&self) -> usize {
        let adjacency: Vec<Vec<usize>> = self
            .adjacency
            .iter()
            .zip(&self.complete)
            .filter(|(_, c)| **c)
            .map(|(a, _)| a.clone())
            .collect();
        hopcroft_karp(&adjacency, self.items.len())
            .iter()
            .filter(|j| **j != NONE)
            .count()
    }
}

/// Slot–item pairs of a matching, in slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(Slot, Item)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn hopcroft_karp(adjacency: &[Vec<usize>], n_right: usize) -> Vec<usize> {
    let n_left = adjacency.len();
    let mut left = vec![NONE; n_left];
    let mut right = vec![NONE; n_right];
    let mut dist = vec![0usize; n_left];
    loop {
        // Layer free left vertices, then search vertex-disjoint shortest paths.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if left[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let w = right[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return left;
        }
        let mut next = vec![0usize; n_left];
        for u in 0..n_left {
            if left[u] == NONE {
                augment(u, adjacency, &mut left, &mut right, &mut dist, &mut next);
            }
        }
    }
}

fn augment(
    root: usize,
    adjacency: &[Vec<usize>],
    left: &mut [usize],
    right: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    // Iterative DFS along the BFS layering.
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next[u] == adjacency[u].len() {
            dist[u] = NONE;
            stack.pop();
            continue;
        }
        let v = adjacency[u][next[u]];
        next[u] += 1;
        let w = right[v];
        if w == NONE {
            // Flip the path: every stacked vertex takes the item it advanced on.
            for &s in &stack {
                let item = adjacency[s][next[s] - 1];
                left[s] = item;
                right[item] = s;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            stack.push(w);
        }
    }
    false
}

/// Whether the prefix admits a matching covering all its complete slots.
pub fn is_solvable(prefix: &Prefix) -> bool {
    let lists = prefix.cut_lists();
    lists_solvable(prefix.n_agents(), &lists)
}

/// Solvability of a prefix given by its cut lists.
///
/// A complete slot's window lies inside its own cut list, so the lists alone
/// determine the graph on complete slots.
pub(crate) fn lists_solvable<L: AsRef<[Item]>>(n_agents: usize, lists: &[L]) -> bool {
    let mut items: Vec<Item> = lists
        .iter()
        .flat_map(|l| l.as_ref().iter().copied())
        .collect();
    items.sort_unstable();
    items.dedup();
    let mut adjacency = Vec::new();
    for list in lists {
        let list = list.as_ref();
        for index in 1..=complete_slot_count(list.len(), n_agents) {
            adjacency.push(
                list[..window(index, n_agents)]
                    .iter()
                    .map(|p| items.binary_search(p).expect("item of the prefix"))
                    .collect::<Vec<_>>(),
            );
        }
    }
    if adjacency.len() > items.len() {
        return false;
    }
    let n = adjacency.len();
    hopcroft_karp(&adjacency, items.len())
        .iter()
        .filter(|j| **j != NONE)
        .count()
        == n
}

/// Whether deleting `y` from the prefix makes it solvable.
pub fn is_partial_solution(prefix: &Prefix, y: &ItemSet) -> Result<bool> {
    let items = prefix.items();
    if let Some(item) = y.iter().find(|i| !items.contains(i)) {
        return Err(PidError::ItemOutsidePrefix(*item));
    }
    Ok(partial_solution_unchecked(prefix, y))
}

pub(crate) fn partial_solution_unchecked(prefix: &Prefix, y: &ItemSet) -> bool {
    let lists: Vec<Vec<Item>> = prefix
        .cut_lists()
        .iter()
        .map(|l| l.iter().copied().filter(|i| !y.contains(i)).collect())
        .collect();
    lists_solvable(prefix.n_agents(), &lists)
}

/// Whether the prefix is unsolvable while every strictly contained prefix is
/// solvable. Since solvability is inherited by contained prefixes, checking
/// the prefixes with one cut lowered by one suffices.
pub fn is_minimal_obstruction(prefix: &Prefix) -> bool {
    if is_solvable(prefix) {
        return false;
    }
    let mut cuts = prefix.cuts().to_vec();
    for x in 0..cuts.len() {
        if cuts[x] == 0 {
            continue;
        }
        cuts[x] -= 1;
        let lower = prefix.with_cuts(cuts.clone());
        cuts[x] += 1;
        if !is_solvable(&lower) {
            return false;
        }
    }
    true
}

/// All minimal obstructions of a profile, by exhaustive search over cut
/// vectors. Exponential in the agent count; intended for small instances.
pub fn minimal_obstructions(profile: &std::sync::Arc<Profile>) -> Vec<Prefix> {
    let n = profile.n_agents();
    let lens: Vec<usize> = profile.lists().iter().map(Vec::len).collect();
    let mut grid: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
    let full = Prefix::full(std::sync::Arc::clone(profile));
    let mut cuts = vec![0; n];
    loop {
        grid.insert(cuts.clone(), is_solvable(&full.with_cuts(cuts.clone())));
        if !advance(&mut cuts, &lens) {
            break;
        }
    }
    let mut found = Vec::new();
    for (cuts, solvable) in &grid {
        if *solvable {
            continue;
        }
        let minimal = (0..n).filter(|x| cuts[*x] > 0).all(|x| {
            let mut lower = cuts.clone();
            lower[x] -= 1;
            grid[&lower]
        });
        if minimal {
            found.push(full.with_cuts(cuts.clone()));
        }
    }
    found
}

fn advance(cuts: &mut [usize], lens: &[usize]) -> bool {
    for x in (0..cuts.len()).rev() {
        if cuts[x] < lens[x] {
            cuts[x] += 1;
            return true;
        }
        cuts[x] = 0;
    }
    false
}

/// A total assignment of items to agent indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Allocation {
    pub assignment: BTreeMap<Item, usize>,
}

impl Allocation {
    pub fn new(assignment: BTreeMap<Item, usize>) -> Self {
        Allocation { assignment }
    }

    /// Builds an allocation from per-agent bundles.
    pub fn from_bundles(bundles: &[Vec<Item>]) -> Self {
        let assignment = bundles
            .iter()
            .enumerate()
            .flat_map(|(a, b)| b.iter().map(move |i| (*i, a)))
            .collect();
        Allocation { assignment }
    }

    /// Items received by each agent, in id order.
    pub fn bundles(&self, n_agents: usize) -> Vec<Vec<Item>> {
        let mut bundles = vec![Vec::new(); n_agents];
        for (item, agent) in &self.assignment {
            if *agent < n_agents {
                bundles[*agent].push(*item);
            }
        }
        bundles
    }

    pub fn agent_of(&self, item: Item) -> Option<usize> {
        self.assignment.get(&item).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// Checks totality and the counting condition: every agent gets at least
/// `i / |N|` of its top `i` items, for every `i`.
pub fn verify_allocation(profile: &Profile, alloc: &Allocation) -> bool {
    let n = profile.n_agents();
    if alloc.len() != profile.n_items()
        || !alloc
            .assignment
            .iter()
            .all(|(item, agent)| *agent < n && profile.contains_item(*item))
    {
        return false;
    }
    (0..n).all(|a| {
        let mut got = 0;
        profile.list(a).iter().enumerate().all(|(pos, item)| {
            if alloc.assignment[item] == a {
                got += 1;
            }
            got * n > pos
        })
    })
}

/// A proportional allocation, if one exists.
pub fn find_proportional_allocation(profile: &Profile) -> Option<Allocation> {
    match obstruction_search(profile) {
        Outcome::Allocation(a) => Some(a),
        Outcome::Obstruction(_) => None,
    }
}

/// A minimal obstruction: an unsolvable prefix whose complete slots violate
/// Hall's condition by exactly one item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    pub prefix: Prefix,
    pub violating_slots: Vec<Slot>,
    pub witness_items: ItemSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Allocation(Allocation),
    Obstruction(ObstructionCertificate),
}

/// Either a proportional allocation or a minimal obstruction.
///
/// Slots are matched round by round (all first slots, then all second slots,
/// ...), agents in declaration order. The first slot that cannot be augmented
/// yields the Hall violator: the set of slots reachable from it by
/// alternating paths. Each agent's cut is set to the window of its highest
/// reachable slot, so the prefix consists of complete slots only.
pub fn find_minimal_obstruction(profile: &Profile) -> Result<Outcome> {
    if profile.n_items() == 0 {
        return Err(PidError::EmptyProfile);
    }
    Ok(obstruction_search(profile))
}

pub(crate) fn obstruction_search(profile: &Profile) -> Outcome {
    let n = profile.n_agents();
    let items = profile.items();
    let m = items.len();
    let rounds = if m == 0 { 0 } else { complete_slot_count(m, n) };
    let index_of = |p: &Item| items.binary_search(p).expect("profile item");
    // Sorted adjacency per agent for the largest window; a slot's adjacency is
    // the window prefix of the agent's list, re-sorted by item id.
    let mut slots: Vec<Slot> = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut slot_match: Vec<usize> = Vec::new();
    let mut item_match = vec![NONE; m];
    for index in 1..=rounds {
        for x in 0..n {
            let mut adj: Vec<usize> = profile.list(x)[..window(index, n)]
                .iter()
                .map(index_of)
                .collect();
            adj.sort_unstable();
            let s = slots.len();
            slots.push(Slot::new(x, index));
            adjacency.push(adj);
            slot_match.push(NONE);
            if let Err(reached) = bfs_augment(s, &adjacency, &mut slot_match, &mut item_match) {
                return Outcome::Obstruction(certificate(profile, &slots, &reached));
            }
        }
    }
    let assignment = slot_match
        .iter()
        .enumerate()
        .map(|(s, j)| (items[*j], slots[s].agent))
        .collect();
    Outcome::Allocation(Allocation { assignment })
}

/// Augments from `start`; on failure returns the alternating-reachable slots.
fn bfs_augment(
    start: usize,
    adjacency: &[Vec<usize>],
    slot_match: &mut [usize],
    item_match: &mut [usize],
) -> std::result::Result<(), Vec<usize>> {
    let mut parent = vec![NONE; item_match.len()];
    let mut reached = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for &j in &adjacency[s] {
            if parent[j] != NONE {
                continue;
            }
            parent[j] = s;
            if item_match[j] == NONE {
                let mut j = j;
                loop {
                    let s = parent[j];
                    let prev = slot_match[s];
                    slot_match[s] = j;
                    item_match[j] = s;
                    if prev == NONE {
                        return Ok(());
                    }
                    j = prev;
                }
            }
            let t = item_match[j];
            reached.push(t);
            queue.push_back(t);
        }
    }
    Err(reached)
}

fn certificate(profile: &Profile, slots: &[Slot], reached: &[usize]) -> ObstructionCertificate {
    let n = profile.n_agents();
    let mut top = vec![0usize; n];
    for s in reached {
        let slot = slots[*s];
        top[slot.agent] = top[slot.agent].max(slot.index);
    }
    let cuts: Vec<usize> = top
        .iter()
        .map(|j| if *j == 0 { 0 } else { window(*j, n) })
        .collect();
    let prefix = Prefix::new(std::sync::Arc::new(profile.clone()), cuts)
        .expect("windows of matched slots fit in the lists");
    let violating_slots = prefix.complete_slots();
    let witness_items = prefix.items();
    ObstructionCertificate {
        prefix,
        violating_slots,
        witness_items,
    }
}

/// Maximum matching size of `G(Q)` restricted to complete slots.
pub fn complete_matching_size(prefix: &Prefix) -> usize {
    EligibilityGraph::of_prefix(prefix).complete_matching_size()
}
