//! Shared test corpora.
#![allow(dead_code)]

use itertools::Itertools;
use propdel::generators::{random_perturbed_profile, random_profile};
use propdel::Profile;

/// Every three-agent profile over `n` items.
pub fn all_profiles(n: usize) -> Vec<Profile> {
    let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
    let mut out = Vec::with_capacity(perms.len().pow(3));
    for a in &perms {
        for b in &perms {
            for c in &perms {
                out.push(
                    Profile::from_ids(&[a.as_slice(), b.as_slice(), c.as_slice()])
                        .expect("permutations are valid lists"),
                );
            }
        }
    }
    out
}

/// Seeded uniform profiles, `count` for each size.
pub fn random_corpus(sizes: std::ops::RangeInclusive<usize>, count: u64) -> Vec<Profile> {
    sizes
        .flat_map(|n| (0..count).map(move |s| random_profile(3, n, 1_000 * n as u64 + s)))
        .collect()
}

/// Seeded profiles close to a shared order, which need larger deletions than
/// uniform ones.
pub fn perturbed_corpus(sizes: std::ops::RangeInclusive<usize>, count: u64) -> Vec<Profile> {
    sizes
        .flat_map(|n| {
            (0..count).map(move |s| {
                random_perturbed_profile(3, n, (s % 4) as usize, 7_000 * n as u64 + s)
            })
        })
        .collect()
}
