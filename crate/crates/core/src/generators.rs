//! Instance generators: seeded random profiles and the two hardness
//! reductions (from dominating set and from antimonotone weighted
//! satisfiability), together with brute-force oracles for the source problems.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{PidError, Result};
use crate::profile::{Item, Profile};

/// Uniformly random strict preferences over items `1..=n_items`, one
/// independent shuffle per agent.
pub fn random_profile(n_agents: usize, n_items: usize, seed: u64) -> Profile {
    assert!(n_agents >= 1, "a profile needs at least one agent");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items: Vec<Item> = (1..=n_items as u32).map(Item).collect();
    let lists = (0..n_agents)
        .map(|_| {
            let mut list = items.clone();
            list.shuffle(&mut rng);
            list
        })
        .collect();
    Profile::new(
        crate::profile::default_agent_labels(n_agents),
        items.into_iter().collect(),
        lists,
    )
    .expect("shuffles are permutations")
}

/// Agents that largely agree: one random base order, then `swaps` random
/// transpositions per agent. Uniform profiles with many items are almost
/// always proportional already; these need real deletions.
pub fn random_perturbed_profile(
    n_agents: usize,
    n_items: usize,
    swaps: usize,
    seed: u64,
) -> Profile {
    use rand::Rng;
    assert!(n_agents >= 1, "a profile needs at least one agent");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base: Vec<Item> = (1..=n_items as u32).map(Item).collect();
    base.shuffle(&mut rng);
    let lists = (0..n_agents)
        .map(|_| {
            let mut list = base.clone();
            if n_items > 1 {
                for _ in 0..swaps {
                    let (i, j) = (rng.gen_range(0..n_items), rng.gen_range(0..n_items));
                    list.swap(i, j);
                }
            }
            list
        })
        .collect();
    Profile::new(
        crate::profile::default_agent_labels(n_agents),
        base.into_iter().collect(),
        lists,
    )
    .expect("transpositions keep permutations")
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(PidError::InvalidGraph(format!(
                    "edge ({u}, {v}) leaves the vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(PidError::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(PidError::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            edges: (0..n).tuple_combinations().collect(),
        }
    }

    pub fn path(n: usize) -> Self {
        Graph {
            n,
            edges: (1..n).map(|v| (v - 1, v)).collect(),
        }
    }

    /// Each of the `C(n, 2)` edges present independently with probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Graph {
            n,
            edges: (0..n)
                .tuple_combinations()
                .filter(|_| rng.gen_bool(p))
                .collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// `N[v]`, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut nb: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        nb.push(v);
        nb.sort_unstable();
        nb
    }
}

/// `⋀_i ⋁_j ⋀_l ¬x_{v}` over variables `1..=n_vars`.
///
/// `clauses[i][j]` lists the (1-based) variables negated in conjunct `j` of
/// clause `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntimonotoneFormula {
    n_vars: usize,
    clauses: Vec<Vec<Vec<usize>>>,
}

impl AntimonotoneFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(PidError::InvalidFormula("formula has no clauses".into()));
        }
        for clause in &clauses {
            if clause.is_empty() {
                return Err(PidError::InvalidFormula("empty disjunction".into()));
            }
            for conjunct in clause {
                if conjunct.is_empty() {
                    return Err(PidError::InvalidFormula("empty conjunction".into()));
                }
                if let Some(v) = conjunct.iter().find(|v| **v == 0 || **v > n_vars) {
                    return Err(PidError::InvalidFormula(format!(
                        "variable x{v} outside x1..x{n_vars}"
                    )));
                }
            }
        }
        Ok(AntimonotoneFormula { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<Vec<usize>>] {
        &self.clauses
    }

    /// Whether the assignment making exactly the variables in `true_vars`
    /// true satisfies the formula.
    pub fn satisfied_by(&self, true_vars: &BTreeSet<usize>) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|conjunct| conjunct.iter().all(|v| !true_vars.contains(v)))
        })
    }

    /// A seeded random formula: `1..=max_clauses` clauses, each with
    /// `1..=max_terms` conjuncts of `1..=max_literals` distinct literals.
    pub fn random(
        n_vars: usize,
        max_clauses: usize,
        max_terms: usize,
        max_literals: usize,
        seed: u64,
    ) -> Self {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars: Vec<usize> = (1..=n_vars).collect();
        let clauses = (0..rng.gen_range(1..=max_clauses))
            .map(|_| {
                (0..rng.gen_range(1..=max_terms))
                    .map(|_| {
                        let len = rng.gen_range(1..=max_literals.min(n_vars));
                        let mut lits: Vec<usize> =
                            vars.choose_multiple(&mut rng, len).copied().collect();
                        lits.sort_unstable();
                        lits
                    })
                    .collect()
            })
            .collect();
        AntimonotoneFormula { n_vars, clauses }
    }
}

/// A generated PID instance with the budget of the source instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub profile: Profile,
    pub k: usize,
    /// Role of each agent in the construction, e.g. `s3` or `v2.1`.
    pub roles: Vec<String>,
}

/// Lists are assembled from explicit head segments followed by every other
/// item in id order.
fn complete_list(head: Vec<Item>, n_items: usize) -> Vec<Item> {
    let listed: BTreeSet<Item> = head.iter().copied().collect();
    debug_assert_eq!(listed.len(), head.len(), "head segments overlap");
    let mut list = head;
    list.extend(
        (1..=n_items as u32)
            .map(Item)
            .filter(|i| !listed.contains(i)),
    );
    list
}

/// The first `count` first-choice items other than agent `a`'s own.
fn first_choices_except(first: &[Item], a: usize, count: usize) -> Vec<Item> {
    first
        .iter()
        .enumerate()
        .filter(|(b, _)| *b != a)
        .map(|(_, f)| *f)
        .take(count)
        .collect()
}

/// Shared selection-agent lists: `f(a)`, `|N| - n` other first choices, the
/// `n` selectable items, then `k` further first choices, the last `k + 1`
/// agents swapping the final one for their own dummy.
fn selection_list(
    i: usize,
    n: usize,
    k: usize,
    first: &[Item],
    selectable: &[Item],
    dummies: &[Item],
    n_items: usize,
) -> Vec<Item> {
    let n_agents = first.len();
    let mut head = vec![first[i]];
    head.extend(first_choices_except(first, i, n_agents - n));
    head.extend_from_slice(selectable);
    if i + k < n {
        // s_i with i <= n - k (1-based).
        let more = first_choices_except(first, i, n_agents - n + k);
        head.extend_from_slice(&more[n_agents - n..]);
    } else {
        let more = first_choices_except(first, i, n_agents - n + k.saturating_sub(1));
        if k > 0 {
            head.extend_from_slice(&more[n_agents - n..]);
        }
        head.push(dummies[i + 1 + k - (n + 1)]);
    }
    complete_list(head, n_items)
}

/// Builds the PID instance whose answer at budget `k` equals whether `g` has a
/// dominating set of size at most `k`.
///
/// Agents: selection agents `s_1..s_{n+1}`, then for every vertex `v` the
/// vertex agents `a_v^1..a_v^{|N[v]|+1}`. Items in id order: first choices
/// (agent order), vertex items, vertex-agent dummies, and `c_1..c_{k+1}`.
pub fn from_dominating_set(g: &Graph, k: usize) -> Result<GeneratedInstance> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(PidError::AssumptionViolated("graph has no vertices".into()));
    }
    if k > n {
        return Err(PidError::AssumptionViolated(format!(
            "budget {k} exceeds the {n} vertices"
        )));
    }
    let neighborhoods: Vec<Vec<usize>> = (0..n).map(|v| g.closed_neighborhood(v)).collect();
    let n_agents = n + 1 + neighborhoods.iter().map(|nb| nb.len() + 1).sum::<usize>();
    debug_assert_eq!(n_agents, 3 * n + 2 * g.n_edges() + 1);
    if n_agents - n <= k {
        return Err(PidError::AssumptionViolated(format!(
            "need |N| - n > k, got |N| = {n_agents}, n = {n}, k = {k}"
        )));
    }
    let n_items = 2 * n_agents + k;
    let mut next = 0u32;
    let mut fresh = |count: usize| -> Vec<Item> {
        (0..count)
            .map(|_| {
                next += 1;
                Item(next)
            })
            .collect()
    };
    let first = fresh(n_agents);
    let vertex_items = fresh(n);
    let vertex_dummies: Vec<Vec<Item>> =
        neighborhoods.iter().map(|nb| fresh(nb.len() + 1)).collect();
    let dummies = fresh(k + 1);
    debug_assert_eq!(next as usize, n_items);

    let mut lists = Vec::with_capacity(n_agents);
    let mut roles = Vec::with_capacity(n_agents);
    for i in 0..=n {
        lists.push(selection_list(
            i,
            n,
            k,
            &first,
            &vertex_items,
            &dummies,
            n_items,
        ));
        roles.push(format!("s{}", i + 1));
    }
    let mut a = n + 1;
    for (v, nb) in neighborhoods.iter().enumerate() {
        for (j, dummy) in vertex_dummies[v].iter().enumerate() {
            let mut head = vec![first[a]];
            head.extend(first_choices_except(&first, a, n_agents - nb.len()));
            head.extend(nb.iter().map(|u| vertex_items[*u]));
            head.push(*dummy);
            lists.push(complete_list(head, n_items));
            roles.push(format!("v{}.{}", v + 1, j + 1));
            a += 1;
        }
    }
    Ok(GeneratedInstance {
        profile: Profile::from_lists(lists)?,
        k,
        roles,
    })
}

/// Builds the PID instance whose answer at budget `k` equals whether `phi`
/// has a satisfying assignment of weight exactly `k`.
///
/// Agents: selection agents `s_1..s_{n+1}`, then one verification agent per
/// conjunct, clause by clause. Items in id order: first choices, variable
/// items, verification items (clause by clause), and `c_1..c_{k+1}`.
///
/// A verification agent for conjunct `j` of clause `i` lists `f(a)`, `k`
/// other first choices, the clause's verification items except the last, more
/// first choices, the variables absent from the conjunct, and then the
/// clause's last verification item. The first-choice block is sized so the last item falls
/// exactly inside the agent's two-item window once `k` absent variables are
/// deleted; when that would need more first choices than exist, dummies
/// (which only selection agents can use) make up the difference.
pub fn from_wcs3(phi: &AntimonotoneFormula, k: usize) -> Result<GeneratedInstance> {
    let n = phi.n_vars();
    if k == 0 {
        return Err(PidError::AssumptionViolated(
            "budget must be at least 1: with no deletions the selection agents can never be served"
                .into(),
        ));
    }
    if k > n {
        return Err(PidError::AssumptionViolated(format!(
            "budget {k} exceeds the {n} variables"
        )));
    }
    let groups: Vec<usize> = phi.clauses().iter().map(Vec::len).collect();
    let n_agents = n + 1 + groups.iter().sum::<usize>();
    if n_agents - n <= k {
        return Err(PidError::AssumptionViolated(format!(
            "need |N| - n > k, got |N| = {n_agents}, n = {n}, k = {k}"
        )));
    }
    if let Some(m2) = groups.iter().find(|m2| n_agents - n <= **m2) {
        return Err(PidError::AssumptionViolated(format!(
            "need |N| - n > m2 for every clause, got |N| - n = {}, m2 = {m2}",
            n_agents - n
        )));
    }
    let n_items = 2 * n_agents + k;
    let mut next = 0u32;
    let mut fresh = |count: usize| -> Vec<Item> {
        (0..count)
            .map(|_| {
                next += 1;
                Item(next)
            })
            .collect()
    };
    let first = fresh(n_agents);
    let variable_items = fresh(n);
    let verification: Vec<Vec<Item>> = groups.iter().map(|m2| fresh(*m2)).collect();
    let dummies = fresh(k + 1);
    debug_assert_eq!(next as usize, n_items);

    let mut lists = Vec::with_capacity(n_agents);
    let mut roles = Vec::with_capacity(n_agents);
    for i in 0..=n {
        lists.push(selection_list(
            i,
            n,
            k,
            &first,
            &variable_items,
            &dummies,
            n_items,
        ));
        roles.push(format!("s{}", i + 1));
    }
    let mut a = n + 1;
    for (i, clause) in phi.clauses().iter().enumerate() {
        let ys = &verification[i];
        let (last, leading) = ys.split_last().expect("clauses are nonempty");
        for (j, conjunct) in clause.iter().enumerate() {
            let absent: Vec<Item> = (1..=n)
                .filter(|v| !conjunct.contains(v))
                .map(|v| variable_items[v - 1])
                .collect();
            // 1 + |Y'| + block + |C| - k = |N| places the last item at |N| + 1.
            let block = (n_agents + k) as i64 - 1 - leading.len() as i64 - absent.len() as i64;
            let block = usize::try_from(block).expect("|N| - n > m2 keeps the block nonnegative");
            let f_count = block.min(n_agents - 1);
            // More than k leading first choices keep f(a) itself undeletable.
            let f_items = first_choices_except(&first, a, f_count);
            let mut head = vec![first[a]];
            head.extend_from_slice(&f_items[..k]);
            head.extend_from_slice(leading);
            head.extend_from_slice(&f_items[k..]);
            head.extend_from_slice(&dummies[..block - f_count]);
            head.extend_from_slice(&absent);
            head.push(*last);
            lists.push(complete_list(head, n_items));
            roles.push(format!("v{}.{}", i + 1, j + 1));
            a += 1;
        }
    }
    Ok(GeneratedInstance {
        profile: Profile::from_lists(lists)?,
        k,
        roles,
    })
}

/// Whether `g` has a dominating set of size at most `k`.
pub fn brute_dominating_set(g: &Graph, k: usize) -> Result<bool> {
    let n = g.n_vertices();
    if n > 16 {
        return Err(PidError::InstanceTooLarge { size: n, cap: 16 });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| {
            g.closed_neighborhood(v)
                .iter()
                .fold(0u32, |m, u| m | (1 << u))
        })
        .collect();
    Ok((0u32..1 << n).any(|d| d.count_ones() as usize <= k && masks.iter().all(|m| m & d != 0)))
}

/// Whether `phi` has a satisfying assignment of weight exactly `k`.
pub fn brute_wcs3(phi: &AntimonotoneFormula, k: usize) -> Result<bool> {
    let n = phi.n_vars();
    if n > 20 {
        return Err(PidError::InstanceTooLarge { size: n, cap: 20 });
    }
    if k > n {
        return Ok(false);
    }
    Ok((1..=n)
        .combinations(k)
        .any(|vars| phi.satisfied_by(&vars.into_iter().collect())))
}
