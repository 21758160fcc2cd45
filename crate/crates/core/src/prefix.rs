//! Prefixes of a profile and the structural features the three-agent solver
//! reasons about: slots, completeness, boundary, tail and shape.
//!
//! Containment, intersection and shape only look at the cut vector, so they
//! are also exposed as free functions over `&[usize]` for comparing prefixes
//! of different residual profiles.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{PidError, Result};
use crate::profile::{Item, ItemSet, Profile};

/// Slot `(agent, index)`: placeholder for the `index`-th item the agent receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub agent: usize,
    pub index: usize,
}

impl Slot {
    pub fn new(agent: usize, index: usize) -> Self {
        Slot { agent, index }
    }

    /// Number of leading list entries eligible for this slot.
    pub fn window(&self, n_agents: usize) -> usize {
        window(self.index, n_agents)
    }
}

/// Length of the eligibility window of slot `index` (1-based).
pub fn window(index: usize, n_agents: usize) -> usize {
    n_agents * (index - 1) + 1
}

/// Number of slots an agent has in a prefix with the given cut.
pub fn slot_count(cut: usize, n_agents: usize) -> usize {
    if cut == 0 {
        0
    } else {
        (cut + n_agents - 1).div_ceil(n_agents)
    }
}

/// Number of complete slots an agent has in a prefix with the given cut.
pub fn complete_slot_count(cut: usize, n_agents: usize) -> usize {
    if cut == 0 {
        0
    } else {
        (cut - 1) / n_agents + 1
    }
}

/// Shape classification of a three-agent prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// All cuts equal.
    Straight,
    /// The two other agents share a cut three positions ahead of the lagging one.
    Slant(usize),
    Irregular,
}

/// `p` contains `q` iff `q`'s cuts are componentwise at most `p`'s.
pub fn contains_cuts(p: &[usize], q: &[usize]) -> bool {
    debug_assert_eq!(p.len(), q.len());
    p.iter().zip(q).all(|(a, b)| b <= a)
}

pub fn intersect_cuts(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().zip(q).map(|(a, b)| *a.min(b)).collect()
}

/// Neither prefix contains the other.
pub fn intersecting_cuts(p: &[usize], q: &[usize]) -> bool {
    !contains_cuts(p, q) && !contains_cuts(q, p)
}

/// Classifies a three-agent cut vector.
///
/// A zero cut is treated as lagging three positions behind a pair of
/// cut-1 agents: an empty list carries no slots, exactly like the virtual
/// cut `-2` of the slant pattern `(1, 1, -2)`.
pub fn shape_of_cuts(cuts: &[usize]) -> Result<Shape> {
    require_three(cuts.len())?;
    if cuts[0] == cuts[1] && cuts[1] == cuts[2] {
        return Ok(Shape::Straight);
    }
    for lag in 0..3 {
        let (x, y) = others(lag);
        if cuts[x] != cuts[y] {
            continue;
        }
        let lead = cuts[x];
        if lead == cuts[lag] + 3 || (lead == 1 && cuts[lag] == 0) {
            return Ok(Shape::Slant(lag));
        }
    }
    Ok(Shape::Irregular)
}

/// The two agents other than `agent` (three-agent indexing).
pub(crate) fn others(agent: usize) -> (usize, usize) {
    match agent {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn require_three(found: usize) -> Result<()> {
    if found == 3 {
        Ok(())
    } else {
        Err(PidError::WrongAgentCount { expected: 3, found })
    }
}

/// A prefix `P[i_1, ..., i_n]`: the first `i_x` entries of each agent's list.
#[derive(Debug, Clone)]
pub struct Prefix {
    profile: Arc<Profile>,
    cuts: Vec<usize>,
}

impl PartialEq for Prefix {
    fn eq(&self, other: &Self) -> bool {
        self.cuts == other.cuts
            && (Arc::ptr_eq(&self.profile, &other.profile) || self.profile == other.profile)
    }
}

impl Eq for Prefix {}

impl Prefix {
    pub fn new(profile: Arc<Profile>, cuts: Vec<usize>) -> Result<Self> {
        if cuts.len() != profile.n_agents() {
            return Err(PidError::WrongAgentCount {
                expected: profile.n_agents(),
                found: cuts.len(),
            });
        }
        for (agent, cut) in cuts.iter().enumerate() {
            let len = profile.list(agent).len();
            if *cut > len {
                return Err(PidError::InvalidCut {
                    agent,
                    cut: *cut,
                    len,
                });
            }
        }
        Ok(Prefix { profile, cuts })
    }

    pub fn empty(profile: Arc<Profile>) -> Self {
        let cuts = vec![0; profile.n_agents()];
        Prefix { profile, cuts }
    }

    pub fn full(profile: Arc<Profile>) -> Self {
        let cuts = profile.lists().iter().map(Vec::len).collect();
        Prefix { profile, cuts }
    }

    pub fn profile(&self) -> &Arc<Profile> {
        &self.profile
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn n_agents(&self) -> usize {
        self.cuts.len()
    }

    /// `L^x[1:i_x]`.
    pub fn cut_list(&self, agent: usize) -> &[Item] {
        &self.profile.list(agent)[..self.cuts[agent]]
    }

    pub fn cut_lists(&self) -> Vec<&[Item]> {
        (0..self.n_agents()).map(|x| self.cut_list(x)).collect()
    }

    /// Sum of the cuts.
    pub fn len(&self) -> usize {
        self.cuts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, other: &Prefix) -> bool {
        contains_cuts(&self.cuts, &other.cuts)
    }

    pub fn intersecting(&self, other: &Prefix) -> bool {
        intersecting_cuts(&self.cuts, &other.cuts)
    }

    /// The largest prefix contained in both (cuts are componentwise minima).
    pub fn intersect(&self, other: &Prefix) -> Prefix {
        self.with_cuts(intersect_cuts(&self.cuts, &other.cuts))
    }

    /// Same ambient profile, different cuts. Cuts must be in range.
    pub fn with_cuts(&self, cuts: Vec<usize>) -> Prefix {
        debug_assert!(cuts
            .iter()
            .enumerate()
            .all(|(x, c)| *c <= self.profile.list(x).len()));
        Prefix {
            profile: Arc::clone(&self.profile),
            cuts,
        }
    }

    /// `I(Q)`.
    pub fn items(&self) -> ItemSet {
        (0..self.n_agents())
            .flat_map(|x| self.cut_list(x).iter().copied())
            .collect()
    }

    pub fn item_count(&self) -> usize {
        self.items().len()
    }

    /// `S(Q)`, in agent-then-index order.
    pub fn slots(&self) -> Vec<Slot> {
        let n = self.n_agents();
        self.cuts
            .iter()
            .enumerate()
            .flat_map(|(x, cut)| (1..=slot_count(*cut, n)).map(move |i| Slot::new(x, i)))
            .collect()
    }

    pub fn slot_count(&self) -> usize {
        let n = self.n_agents();
        self.cuts.iter().map(|c| slot_count(*c, n)).sum()
    }

    /// Slots whose whole eligibility window lies inside the prefix.
    pub fn complete_slots(&self) -> Vec<Slot> {
        let n = self.n_agents();
        self.cuts
            .iter()
            .enumerate()
            .flat_map(|(x, cut)| (1..=complete_slot_count(*cut, n)).map(move |i| Slot::new(x, i)))
            .collect()
    }

    pub fn is_complete(&self, slot: Slot) -> bool {
        slot.index >= 1 && slot.window(self.n_agents()) <= self.cuts[slot.agent]
    }

    /// `|S(Q)| - |I(Q)|`, counting incomplete slots too.
    pub fn deficiency(&self) -> i64 {
        self.slot_count() as i64 - self.item_count() as i64
    }

    /// `δ(Q)`: items occurring once or twice among the three cut lists.
    pub fn boundary(&self) -> Result<ItemSet> {
        require_three(self.n_agents())?;
        let mut counts: BTreeMap<Item, u8> = BTreeMap::new();
        for x in 0..3 {
            for item in self.cut_list(x) {
                *counts.entry(*item).or_default() += 1;
            }
        }
        Ok(counts
            .into_iter()
            .filter(|(_, c)| *c < 3)
            .map(|(i, _)| i)
            .collect())
    }

    pub fn shape(&self) -> Result<Shape> {
        shape_of_cuts(&self.cuts)
    }

    /// `T(Q)`: last three entries of every cut list for a straight prefix,
    /// last six entries of the two leading agents for a slant one.
    pub fn tail(&self) -> Result<ItemSet> {
        let last = |x: usize, k: usize| {
            let list = self.cut_list(x);
            list[list.len().saturating_sub(k)..].iter().copied()
        };
        match self.shape()? {
            Shape::Straight => Ok((0..3).flat_map(|x| last(x, 3)).collect()),
            Shape::Slant(lag) => {
                let (x, y) = others(lag);
                Ok(last(x, 6).chain(last(y, 6)).collect())
            }
            Shape::Irregular => Err(PidError::IrregularShape {
                cuts: self.cuts.clone(),
            }),
        }
    }

    /// Cuts after deleting `u`: each cut loses the `u`-items it covered.
    pub fn deleted_cuts(&self, u: &ItemSet) -> Vec<usize> {
        (0..self.n_agents())
            .map(|x| self.cut_list(x).iter().filter(|i| !u.contains(i)).count())
            .collect()
    }

    /// `Q - U` as a prefix of `P - U`.
    pub fn delete(&self, u: &ItemSet) -> Result<Prefix> {
        let profile = Arc::new(self.profile.delete_items(u)?);
        let cuts = self.deleted_cuts(u);
        Ok(Prefix { profile, cuts })
    }
}
