//! Shared helpers for the integration suites.
#![allow(dead_code)]

use misere_core::notation::parse;
use misere_core::store::{GameId, Store};

/// Small deterministic generator so every randomized sweep is replayable
/// from a literal seed.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg(seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1))
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n.max(1) as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next() % den < num
    }
}

pub fn game(store: &mut Store, text: &str) -> GameId {
    parse(store, text).unwrap()
}

/// Random augmented form of height at most `depth`.
pub fn random_game(store: &mut Store, rng: &mut Lcg, depth: u32, allow_sigma: bool) -> GameId {
    if depth == 0 || rng.chance(1, 5) {
        let sl = allow_sigma && rng.chance(1, 8);
        let sr = allow_sigma && rng.chance(1, 8);
        return store.intern(&[], &[], sl, sr);
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for _ in 0..rng.below(3) {
        left.push(random_game(store, rng, depth - 1, allow_sigma));
    }
    for _ in 0..rng.below(3) {
        right.push(random_game(store, rng, depth - 1, allow_sigma));
    }
    let sl = allow_sigma && rng.chance(1, 8);
    let sr = allow_sigma && rng.chance(1, 8);
    store.intern(&left, &right, sl, sr)
}

/// Random dicot of height at most `depth`.
pub fn random_dicot(store: &mut Store, rng: &mut Lcg, depth: u32) -> GameId {
    if depth == 0 || rng.chance(1, 4) {
        return GameId::ZERO;
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for _ in 0..1 + rng.below(2) {
        left.push(random_dicot(store, rng, depth - 1));
    }
    for _ in 0..1 + rng.below(2) {
        right.push(random_dicot(store, rng, depth - 1));
    }
    store.intern(&left, &right, false, false)
}
