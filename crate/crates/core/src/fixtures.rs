//! Canonical small instances used by tests, docs and the CLI self-checks.

use crate::profile::Profile;

/// The three-agent, seven-item worked example: its only minimal obstruction
/// sits at cuts `(4,4,4)` and deleting item 2 makes it proportional.
pub fn figure_one() -> Profile {
    Profile::from_ids(&[
        &[1, 3, 2, 4, 6, 5, 7],
        &[3, 1, 5, 2, 7, 4, 6],
        &[2, 4, 5, 3, 6, 7, 1],
    ])
    .expect("figure one is a valid profile")
}

/// Three agents that all rank item 1 first, over items `{1,2,3}`.
pub fn shared_first_choice() -> Profile {
    Profile::from_ids(&[&[1, 2, 3], &[1, 3, 2], &[1, 2, 3]]).expect("valid profile")
}
