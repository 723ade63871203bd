//! Universe-relative comparison of augmented games.
//!
//! `geq` decides the order by the recursive characterization: the
//! maintenance conditions quantify over ordinary options, and the proviso
//! consults the universe's strongness oracle when either side is
//! end-like. Results are cached per universe; the recursion is
//! well-founded because every recursive call strictly shrinks the pair of
//! option trees, so an in-progress hit is a bug, not a cycle.

use crate::store::{GameId, Store};
use crate::universe::{CmpEntry, Universe};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Comparison::Greater => write!(f, ">"),
            Comparison::Less => write!(f, "<"),
            Comparison::Equal => write!(f, "="),
            Comparison::Incomparable => write!(f, "||"),
        }
    }
}

/// Does `g >= h` modulo the universe?
pub fn geq(store: &mut Store, universe: &mut Universe, g: GameId, h: GameId) -> bool {
    if g == h {
        return true;
    }
    match universe.cmp.get(&(g, h)) {
        Some(CmpEntry::Done(b)) => return *b,
        Some(CmpEntry::InProgress) => {
            unreachable!("comparison revisited an in-progress pair")
        }
        None => {}
    }
    universe.cmp.insert((g, h), CmpEntry::InProgress);
    let result = geq_compute(store, universe, g, h);
    universe.cmp.insert((g, h), CmpEntry::Done(result));
    result
}

fn geq_compute(store: &mut Store, universe: &mut Universe, g: GameId, h: GameId) -> bool {
    // Proviso first: strongness answers are cheap once amortized.
    if store.is_left_end_like(h) && !universe.is_left_strong(store, g) {
        return false;
    }
    if store.is_right_end_like(g) && !universe.is_right_strong(store, h) {
        return false;
    }
    // Maintenance over ordinary options.
    let g_right = store.right_options(g).to_vec();
    let h_right = store.right_options(h).to_vec();
    for &gr in &g_right {
        let mut ok = h_right.iter().any(|&hr| geq(store, universe, gr, hr));
        if !ok {
            let grl = store.left_options(gr).to_vec();
            ok = grl.iter().any(|&x| geq(store, universe, x, h));
        }
        if !ok {
            return false;
        }
    }
    let g_left = store.left_options(g).to_vec();
    let h_left = store.left_options(h).to_vec();
    for &hl in &h_left {
        let mut ok = g_left.iter().any(|&gl| geq(store, universe, gl, hl));
        if !ok {
            let hlr = store.right_options(hl).to_vec();
            ok = hlr.iter().any(|&x| geq(store, universe, g, x));
        }
        if !ok {
            return false;
        }
    }
    true
}

pub fn equiv(store: &mut Store, universe: &mut Universe, g: GameId, h: GameId) -> bool {
    geq(store, universe, g, h) && geq(store, universe, h, g)
}

pub fn compare(store: &mut Store, universe: &mut Universe, g: GameId, h: GameId) -> Comparison {
    match (geq(store, universe, g, h), geq(store, universe, h, g)) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Greater,
        (false, true) => Comparison::Less,
        (false, false) => Comparison::Incomparable,
    }
}
