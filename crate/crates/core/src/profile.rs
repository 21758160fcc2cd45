//! Preference profiles: agents with strict linear orders over a shared item set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{PidError, Result};

/// An indivisible item. The numeric order of ids is the fixed tie-breaking
/// order used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Item(pub u32);

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Item {
    fn from(id: u32) -> Self {
        Item(id)
    }
}

pub type ItemSet = BTreeSet<Item>;

/// Builds an [`ItemSet`] from raw ids.
pub fn item_set<I: IntoIterator<Item = u32>>(ids: I) -> ItemSet {
    ids.into_iter().map(Item).collect()
}

/// Spreadsheet-style labels: `a`..`z`, `aa`, `ab`, ...
pub fn default_agent_label(mut index: usize) -> String {
    let mut label = Vec::new();
    loop {
        label.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    label.reverse();
    String::from_utf8(label).expect("ascii label")
}

pub fn default_agent_labels(n: usize) -> Vec<String> {
    (0..n).map(default_agent_label).collect()
}

/// A preference profile `(N, I, L)`.
///
/// Agents are addressed by index; labels are only used for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    agents: Arc<[String]>,
    items: Vec<Item>,
    lists: Vec<Vec<Item>>,
}

impl Profile {
    /// Builds and validates a profile.
    pub fn new(agents: Vec<String>, items: ItemSet, lists: Vec<Vec<Item>>) -> Result<Self> {
        let profile = Self::new_unchecked(agents, items, lists);
        validate(&profile)?;
        Ok(profile)
    }

    /// Builds a profile without checking that lists are permutations.
    pub fn new_unchecked(agents: Vec<String>, items: ItemSet, lists: Vec<Vec<Item>>) -> Self {
        assert_eq!(agents.len(), lists.len(), "one preference list per agent");
        Profile {
            agents: agents.into(),
            items: items.into_iter().collect(),
            lists,
        }
    }

    /// Builds a profile with default labels whose item set is the union of all lists.
    pub fn from_lists(lists: Vec<Vec<Item>>) -> Result<Self> {
        let items: ItemSet = lists.iter().flatten().copied().collect();
        Self::new(default_agent_labels(lists.len()), items, lists)
    }

    /// Convenience constructor from raw ids.
    pub fn from_ids(lists: &[&[u32]]) -> Result<Self> {
        Self::from_lists(
            lists
                .iter()
                .map(|l| l.iter().copied().map(Item).collect())
                .collect(),
        )
    }

    pub fn n_agents(&self) -> usize {
        self.lists.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    /// Items in increasing id order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item_set(&self) -> ItemSet {
        self.items.iter().copied().collect()
    }

    pub fn contains_item(&self, item: Item) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    pub fn list(&self, agent: usize) -> &[Item] {
        &self.lists[agent]
    }

    pub fn lists(&self) -> &[Vec<Item>] {
        &self.lists
    }

    pub fn agent_label(&self, agent: usize) -> &str {
        &self.agents[agent]
    }

    pub fn agent_labels(&self) -> &[String] {
        &self.agents
    }

    /// `P - U`: removes the items of `u` from the item set and from every list.
    pub fn delete_items(&self, u: &ItemSet) -> Result<Profile> {
        if let Some(item) = u.iter().find(|i| !self.contains_item(**i)) {
            return Err(PidError::UnknownItem {
                agent: None,
                item: *item,
            });
        }
        Ok(self.delete_known_items(u))
    }

    /// Like [`Profile::delete_items`] but silently ignores items outside the profile.
    pub(crate) fn delete_known_items(&self, u: &ItemSet) -> Profile {
        if u.is_empty() {
            return self.clone();
        }
        Profile {
            agents: Arc::clone(&self.agents),
            items: self
                .items
                .iter()
                .copied()
                .filter(|i| !u.contains(i))
                .collect(),
            lists: self
                .lists
                .iter()
                .map(|l| l.iter().copied().filter(|i| !u.contains(i)).collect())
                .collect(),
        }
    }
}

/// Checks that every list is a permutation of the shared item set.
pub fn validate(profile: &Profile) -> Result<()> {
    if profile.n_agents() == 0 {
        return Err(PidError::NoAgents);
    }
    for (agent, list) in profile.lists.iter().enumerate() {
        let label = || profile.agent_label(agent).to_string();
        let mut seen = BTreeMap::new();
        for item in list {
            if !profile.contains_item(*item) {
                return Err(PidError::UnknownItem {
                    agent: Some(label()),
                    item: *item,
                });
            }
            if seen.insert(*item, ()).is_some() {
                return Err(PidError::DuplicateItemInList {
                    agent: label(),
                    item: *item,
                });
            }
        }
        if let Some(missing) = profile.items.iter().find(|i| !seen.contains_key(i)) {
            return Err(PidError::MissingItem {
                agent: label(),
                item: *missing,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::figure_one;

    #[test]
    fn figure_one_is_valid() {
        let p = figure_one();
        assert_eq!(p.n_agents(), 3);
        assert_eq!(p.n_items(), 7);
        validate(&p).unwrap();
    }

    #[test]
    fn duplicate_item_is_reported() {
        let err = Profile::from_ids(&[&[1, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            PidError::DuplicateItemInList {
                agent: "a".into(),
                item: Item(1)
            }
        );
    }

    #[test]
    fn missing_item_is_reported() {
        let err = Profile::from_ids(&[&[1, 2], &[1]]).unwrap_err();
        assert_eq!(
            err,
            PidError::MissingItem {
                agent: "b".into(),
                item: Item(2)
            }
        );
    }

    #[test]
    fn unknown_item_is_reported() {
        let p = Profile::new_unchecked(
            default_agent_labels(1),
            item_set([1, 2]),
            vec![vec![Item(1), Item(3)]],
        );
        assert!(matches!(
            validate(&p),
            Err(PidError::UnknownItem { item: Item(3), .. })
        ));
    }

    #[test]
    fn no_agents_is_rejected() {
        let p = Profile::new_unchecked(vec![], ItemSet::new(), vec![]);
        assert_eq!(validate(&p), Err(PidError::NoAgents));
    }

    #[test]
    fn delete_item_two_from_figure_one() {
        let p = figure_one().delete_items(&item_set([2])).unwrap();
        let ids = |a: usize| p.list(a).iter().map(|i| i.0).collect::<Vec<_>>();
        assert_eq!(ids(0), [1, 3, 4, 6, 5, 7]);
        assert_eq!(ids(1), [3, 1, 5, 7, 4, 6]);
        assert_eq!(ids(2), [4, 5, 3, 6, 7, 1]);
        validate(&p).unwrap();
    }

    #[test]
    fn delete_nothing_and_everything() {
        let p = figure_one();
        assert_eq!(p.delete_items(&ItemSet::new()).unwrap(), p);
        let empty = p.delete_items(&p.item_set()).unwrap();
        assert_eq!(empty.n_items(), 0);
        assert!(empty.lists().iter().all(Vec::is_empty));
        assert_eq!(empty.n_agents(), 3);
    }

    #[test]
    fn delete_unknown_item_fails() {
        assert!(matches!(
            figure_one().delete_items(&item_set([9])),
            Err(PidError::UnknownItem {
                agent: None,
                item: Item(9)
            })
        ));
    }

    #[test]
    fn labels_roll_over() {
        assert_eq!(default_agent_label(0), "a");
        assert_eq!(default_agent_label(25), "z");
        assert_eq!(default_agent_label(26), "aa");
        assert_eq!(default_agent_label(27), "ab");
        assert_eq!(default_agent_label(52), "ba");
    }
}
