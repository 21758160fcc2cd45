//! The memoized minimum-deletion recursion for three agents.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::branching::{branching_set, CandidateOrder};
use super::pattern::{pattern_of_lists, DeficiencyPattern};
use crate::error::{PidError, Result};
use crate::matching::{obstruction_search, Outcome};
use crate::oracle::{check_solution, Solution};
use crate::prefix::Prefix;
use crate::profile::{ItemSet, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Reuse results of strongly equivalent calls.
    pub memoize: bool,
    pub order: CandidateOrder,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            memoize: true,
            order: CandidateOrder::Lexicographic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SolverStats {
    pub memo_entries: usize,
    pub memo_hits: usize,
    pub recursions: usize,
    pub obstructions: usize,
    /// Largest branching set built.
    pub max_branching: usize,
    /// Results whose intersection with the call's prefix differs from the
    /// call's deletion set. Always zero for a correct run.
    pub intersection_violations: usize,
}

/// Strong-equivalence signature of a call `(T, U)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    cuts: [usize; 3],
    deleted: usize,
    deleted_boundary: ItemSet,
    pattern: DeficiencyPattern,
}

/// The prefix of `original` whose deletion of `u` gives cuts `q_cuts`,
/// taking the shortest such preimage.
pub fn lift_prefix(original: &Arc<Profile>, u: &ItemSet, q_cuts: &[usize]) -> Prefix {
    let cuts = q_cuts
        .iter()
        .enumerate()
        .map(|(x, q)| {
            if *q == 0 {
                return 0;
            }
            let mut seen = 0;
            for (pos, item) in original.list(x).iter().enumerate() {
                if !u.contains(item) {
                    seen += 1;
                    if seen == *q {
                        return pos + 1;
                    }
                }
            }
            panic!("cut {q} exceeds the surviving items of agent {x}")
        })
        .collect();
    Prefix::new(Arc::clone(original), cuts).expect("lifted cut lies within the list")
}

/// Solver state for one profile: the memo table and counters.
#[derive(Debug)]
pub struct MinDel {
    profile: Arc<Profile>,
    options: SolverOptions,
    table: HashMap<MemoKey, Option<ItemSet>>,
    stats: SolverStats,
}

impl MinDel {
    pub fn new(profile: Arc<Profile>, options: SolverOptions) -> Result<Self> {
        if profile.n_agents() != 3 {
            return Err(PidError::WrongAgentCount {
                expected: 3,
                found: profile.n_agents(),
            });
        }
        Ok(MinDel {
            profile,
            options,
            table: HashMap::new(),
            stats: SolverStats::default(),
        })
    }

    pub fn profile(&self) -> &Arc<Profile> {
        &self.profile
    }

    pub fn stats(&self) -> SolverStats {
        SolverStats {
            memo_entries: self.table.len(),
            ..self.stats
        }
    }

    /// A minimum solution `S` with `S ∩ I(t) = u`, or `None` if there is none.
    ///
    /// `u` must be a partial solution for `t`.
    pub fn min_del(&mut self, t: &Prefix, u: &ItemSet) -> Result<Option<ItemSet>> {
        self.stats.recursions += 1;
        let residual = self.profile.delete_known_items(u);
        let key = if self.options.memoize {
            let key = self.signature(t, u, &residual)?;
            if let Some(stored) = self.table.get(&key) {
                self.stats.memo_hits += 1;
                return Ok(stored.as_ref().map(|w| u.union(w).copied().collect()));
            }
            Some(key)
        } else {
            None
        };

        let result = match obstruction_search(&residual) {
            Outcome::Allocation(_) => Some(u.clone()),
            Outcome::Obstruction(cert) => {
                self.stats.obstructions += 1;
                let lifted = lift_prefix(&self.profile, u, cert.prefix.cuts());
                let forbidden: ItemSet = t.items().difference(u).copied().collect();
                let family = branching_set(&cert.prefix, &forbidden, self.options.order)?;
                self.stats.max_branching = self.stats.max_branching.max(family.len());
                let mut best: Option<ItemSet> = None;
                for y in family {
                    let next: ItemSet = u.union(&y).copied().collect();
                    if let Some(s) = self.min_del(&lifted, &next)? {
                        if best.as_ref().map_or(true, |b| s.len() < b.len()) {
                            best = Some(s);
                        }
                    }
                }
                best
            }
        };

        if let Some(s) = &result {
            let items = t.items();
            if s.intersection(&items).ne(u.intersection(&items)) {
                self.stats.intersection_violations += 1;
            }
        }
        if let Some(key) = key {
            let extension = result
                .as_ref()
                .map(|s| s.difference(u).copied().collect::<ItemSet>());
            self.table.insert(key, extension);
        }
        Ok(result)
    }

    fn signature(&self, t: &Prefix, u: &ItemSet, residual: &Profile) -> Result<MemoKey> {
        let deleted_cuts = t.deleted_cuts(u);
        let lists: Vec<&[_]> = (0..3)
            .map(|x| &residual.list(x)[..deleted_cuts[x]])
            .collect();
        Ok(MemoKey {
            cuts: [t.cuts()[0], t.cuts()[1], t.cuts()[2]],
            deleted: u.len(),
            deleted_boundary: t.boundary()?.intersection(u).copied().collect(),
            pattern: pattern_of_lists([lists[0], lists[1], lists[2]]),
        })
    }
}

/// Minimum solution plus the optional decision `size <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeAgentOutcome {
    pub solution: Solution,
    pub decision: Option<bool>,
    pub stats: SolverStats,
}

/// Minimum deletion for three agents, starting from the empty prefix.
pub fn solve3(profile: &Profile, k: Option<usize>) -> Result<ThreeAgentOutcome> {
    solve3_with(profile, k, SolverOptions::default())
}

pub fn solve3_with(
    profile: &Profile,
    k: Option<usize>,
    options: SolverOptions,
) -> Result<ThreeAgentOutcome> {
    let profile = Arc::new(profile.clone());
    let mut solver = MinDel::new(Arc::clone(&profile), options)?;
    let deleted = solver
        .min_del(&Prefix::empty(Arc::clone(&profile)), &ItemSet::new())?
        .ok_or_else(|| {
            PidError::AssumptionViolated("deleting every item is always a solution".into())
        })?;
    let allocation = check_solution(&profile, &deleted)?.ok_or_else(|| {
        PidError::AssumptionViolated("solver returned a set that is not a solution".into())
    })?;
    let solution = Solution {
        deleted,
        allocation,
    };
    Ok(ThreeAgentOutcome {
        decision: k.map(|k| solution.size() <= k),
        solution,
        stats: solver.stats(),
    })
}
