//! Day-n tree enumeration and distinct-value censuses.
//!
//! Trees born by day `n` are pairs of subsets of the trees born by day
//! `n-1`, filtered by universe membership. Distinct values are counted by
//! bucketing on simplest-form ids; on small days this partition is
//! cross-checked against pairwise equivalence by the test suite.

use rustc_hash::FxHashSet;
use serde_json::{json, Value};

use crate::notation;
use crate::simplest::simplest_form;
use crate::store::{GameId, Store};
use crate::universe::{Universe, UniverseKind};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Census {
    pub day: u32,
    pub universe: String,
    pub tree_count: u64,
    pub distinct_count: u64,
    /// One simplest-form id per distinct value, sorted.
    pub representatives: Vec<GameId>,
}

impl Census {
    pub fn to_json(&self, store: &Store) -> Value {
        json!({
            "day": self.day,
            "universe": self.universe,
            "trees": self.tree_count,
            "distinct": self.distinct_count,
            "representatives": self.representatives
                .iter()
                .map(|&g| notation::render(store, g))
                .collect::<Vec<String>>(),
        })
    }
}

/// All forms of height at most `day` whose every subposition belongs to
/// the universe, sorted by id.
pub fn enumerate_trees(store: &mut Store, universe: &mut Universe, day: u32) -> Result<Vec<GameId>> {
    if day > 3 {
        return Err(Error::BoundExceeded {
            message: format!("day-{} enumeration", day),
        });
    }
    let mut trees = vec![GameId::ZERO];
    for _ in 0..day {
        let prev = trees;
        if prev.len() > 12 {
            return Err(Error::BoundExceeded {
                message: format!("enumeration over {} option candidates", prev.len()),
            });
        }
        let mut next = Vec::new();
        let count = prev.len();
        for lmask in 0u32..1 << count {
            let left: Vec<GameId> = (0..count)
                .filter(|&i| lmask >> i & 1 == 1)
                .map(|i| prev[i])
                .collect();
            for rmask in 0u32..1 << count {
                let right: Vec<GameId> = (0..count)
                    .filter(|&i| rmask >> i & 1 == 1)
                    .map(|i| prev[i])
                    .collect();
                let id = store.intern(&left, &right, false, false);
                if universe.contains(store, id)? {
                    next.push(id);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        trees = next;
    }
    Ok(trees)
}

/// Tree and distinct-value counts for the universe's games born by `day`.
/// Day 3 is supported for the dicots only, streamed over option-value
/// sets rather than materialized trees.
pub fn census(store: &mut Store, universe: &mut Universe, day: u32) -> Result<Census> {
    if day <= 2 {
        let trees = enumerate_trees(store, universe, day)?;
        let mut reps = FxHashSet::default();
        for &t in &trees {
            reps.insert(simplest_form(store, universe, t));
        }
        let mut representatives: Vec<GameId> = reps.into_iter().collect();
        representatives.sort_unstable();
        return Ok(Census {
            day,
            universe: universe.label().to_string(),
            tree_count: trees.len() as u64,
            distinct_count: representatives.len() as u64,
            representatives,
        });
    }
    if day == 3 && *universe.kind() == UniverseKind::Dicots {
        return dicot_day3_census(store, universe);
    }
    Err(Error::BoundExceeded {
        message: format!("day-{} census in {}", day, universe.label()),
    })
}

/// Day-3 dicot census. A day-3 tree is a pair of nonempty subsets of the
/// day-2 trees (plus `0` itself); its value depends only on the sets of
/// option values, so subsets are collapsed to value sets before the
/// top-level reduction.
fn dicot_day3_census(store: &mut Store, universe: &mut Universe) -> Result<Census> {
    let day2 = enumerate_trees(store, universe, 2)?;
    let values: Vec<GameId> = day2
        .iter()
        .map(|&t| simplest_form(store, universe, t))
        .collect();
    let count = day2.len();
    let mut value_sets: FxHashSet<Box<[GameId]>> = FxHashSet::default();
    for mask in 1u32..1 << count {
        let mut set: Vec<GameId> = (0..count)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| values[i])
            .collect();
        set.sort_unstable();
        set.dedup();
        value_sets.insert(set.into_boxed_slice());
    }
    let mut sets: Vec<Box<[GameId]>> = value_sets.into_iter().collect();
    sets.sort_unstable();

    let nonempty = (1u64 << count) - 1;
    let tree_count = nonempty * nonempty + 1;

    let mut reps: FxHashSet<GameId> = FxHashSet::default();
    reps.insert(GameId::ZERO);
    for left in &sets {
        for right in &sets {
            let id = store.intern(left, right, false, false);
            let s = simplest_form(store, universe, id);
            reps.insert(s);
        }
    }
    let mut representatives: Vec<GameId> = reps.into_iter().collect();
    representatives.sort_unstable();
    Ok(Census {
        day: 3,
        universe: universe.label().to_string(),
        tree_count,
        distinct_count: representatives.len() as u64,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_one_trees() {
        let mut store = Store::new();
        let mut d = Universe::dicots();
        let trees = enumerate_trees(&mut store, &mut d, 1).unwrap();
        let star = store.star();
        let mut expected = vec![GameId::ZERO, star];
        expected.sort_unstable();
        assert_eq!(trees, expected);

        let mut e = Universe::dead_ending();
        let trees = enumerate_trees(&mut store, &mut e, 1).unwrap();
        assert_eq!(trees.len(), 4);
    }

    #[test]
    fn day_two_tree_counts() {
        let mut store = Store::new();
        let mut d = Universe::dicots();
        assert_eq!(enumerate_trees(&mut store, &mut d, 2).unwrap().len(), 10);
        let mut e = Universe::dead_ending();
        assert_eq!(enumerate_trees(&mut store, &mut e, 2).unwrap().len(), 232);
    }

    #[test]
    fn dicot_day_two_census() {
        let mut store = Store::new();
        let mut d = Universe::dicots();
        let census = census(&mut store, &mut d, 2).unwrap();
        assert_eq!(census.tree_count, 10);
        assert_eq!(census.distinct_count, 9);
        assert_eq!(census.representatives.len(), 9);
    }

    #[test]
    fn large_day_three_is_refused() {
        let mut store = Store::new();
        let mut e = Universe::dead_ending();
        assert!(census(&mut store, &mut e, 3).is_err());
        assert!(enumerate_trees(&mut store, &mut e, 3).is_err());
        let mut d = Universe::dicots();
        assert!(census(&mut store, &mut d, 4).is_err());
    }

    #[test]
    fn census_json_shape() {
        let mut store = Store::new();
        let mut d = Universe::dicots();
        let census = census(&mut store, &mut d, 1).unwrap();
        let v = census.to_json(&store);
        assert_eq!(v["trees"], 2);
        assert_eq!(v["universe"], "D");
        assert!(v["representatives"].as_array().unwrap().len() == v["distinct"].as_u64().unwrap() as usize);
    }
}
