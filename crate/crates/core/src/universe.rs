//! Universe descriptors: membership, generator closures, truncation test
//! sets, strongness oracles, and upward-closure membership.
//!
//! A universe is described either as the dicots, the full dead-ending
//! universe, or the universal closure of a finite set of Left dead-ends.
//! Each `Universe` owns all of its caches — test sets, strongness answers,
//! comparison and simplest-form memos — since none of those are shared
//! between universes.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::deadend;
use crate::notation;
use crate::store::{GameId, Player, Store};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UniverseKind {
    /// Games in which every nonempty subposition has options for both
    /// players. The only end is `0`.
    Dicots,
    /// All dead-ending games. Not finitely generated; its test sets have
    /// a closed form.
    DeadEnding,
    /// Universal closure of a finite set of nonzero canonical Left
    /// dead-ends.
    Generated(Vec<GameId>),
}

pub(crate) enum CmpEntry {
    InProgress,
    Done(bool),
}

pub struct Universe {
    kind: UniverseKind,
    label: String,
    test_sets: FxHashMap<u32, Vec<GameId>>,
    strong: FxHashMap<(GameId, Player), bool>,
    pub(crate) cmp: FxHashMap<(GameId, GameId), CmpEntry>,
    pub(crate) simplest: FxHashMap<GameId, GameId>,
    pub(crate) simplest_check: FxHashMap<GameId, bool>,
    member: FxHashMap<GameId, bool>,
    /// Height-bounded slice of the simple closure of the generators,
    /// grown on demand: `(height, forms)`.
    closure: (u32, FxHashSet<GameId>),
}

impl Universe {
    pub fn dicots() -> Universe {
        Universe::build(UniverseKind::Dicots, "D".to_string())
    }

    pub fn dead_ending() -> Universe {
        Universe::build(UniverseKind::DeadEnding, "E".to_string())
    }

    /// Universe generated by the given Left dead-ends. Generators are
    /// canonicalized, deduplicated, and sorted; an empty set yields the
    /// dicots. Non-dead-end generators are refused: no strongness test
    /// is available for such universes.
    pub fn generated(store: &mut Store, generators: &[GameId]) -> Result<Universe> {
        let mut canon = Vec::with_capacity(generators.len());
        for &g in generators {
            if !store.is_left_dead_end(g) {
                return Err(Error::UnsupportedUniverse {
                    message: format!(
                        "generator {} is not a Left dead-end",
                        notation::render(store, g)
                    ),
                });
            }
            if g == GameId::ZERO {
                continue;
            }
            canon.push(deadend::canonical(store, g)?);
        }
        canon.sort_unstable();
        canon.dedup();
        if canon.is_empty() {
            return Ok(Universe::dicots());
        }
        let label = Universe::generated_label(store, &canon);
        Ok(Universe::build(UniverseKind::Generated(canon), label))
    }

    fn generated_label(store: &mut Store, gens: &[GameId]) -> String {
        let minus_one = store.integer(-1);
        let one_bar_zero = store.intern(&[], &[GameId::ZERO, minus_one], false, false);
        if gens == [minus_one] {
            return "D(-1)".to_string();
        }
        if gens == [one_bar_zero] {
            return "D(-1:0)".to_string();
        }
        let parts: Vec<String> = gens.iter().map(|&g| notation::render(store, g)).collect();
        format!("gen:{}", parts.join(","))
    }

    fn build(kind: UniverseKind, label: String) -> Universe {
        Universe {
            kind,
            label,
            test_sets: FxHashMap::default(),
            strong: FxHashMap::default(),
            cmp: FxHashMap::default(),
            simplest: FxHashMap::default(),
            simplest_check: FxHashMap::default(),
            member: FxHashMap::default(),
            closure: (0, FxHashSet::from_iter([GameId::ZERO])),
        }
    }

    pub fn kind(&self) -> &UniverseKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Form-level membership: every Left-end follower must be a form of
    /// the generator closure, every Right-end follower a form of its
    /// conjugate. Defined on ordinary games.
    pub fn contains(&mut self, store: &mut Store, g: GameId) -> Result<bool> {
        if !store.is_ordinary(g) {
            return Err(Error::TombstonedInput {
                op: "universe membership",
            });
        }
        match &self.kind {
            UniverseKind::Dicots => Ok(store.is_dicot(g)),
            UniverseKind::DeadEnding => Ok(store.is_dead_ending(g)),
            UniverseKind::Generated(_) => {
                let height = store.formal_birthday(g);
                self.grow_closure(store, height);
                Ok(self.member_rec(store, g))
            }
        }
    }

    fn member_rec(&mut self, store: &mut Store, g: GameId) -> bool {
        if let Some(&m) = self.member.get(&g) {
            return m;
        }
        let left_end = store.is_left_end(g);
        let right_end = store.is_right_end(g);
        let result = if left_end || right_end {
            let left_ok = !left_end || self.closure.1.contains(&g);
            let right_ok = !right_end || {
                let c = store.conjugate(g);
                self.closure.1.contains(&c)
            };
            left_ok && right_ok
        } else {
            let mut options = store.left_options(g).to_vec();
            options.extend_from_slice(store.right_options(g));
            options.into_iter().all(|o| self.member_rec(store, o))
        };
        self.member.insert(g, result);
        result
    }

    fn grow_closure(&mut self, store: &mut Store, height: u32) {
        if self.closure.0 >= height {
            return;
        }
        if let UniverseKind::Generated(gens) = &self.kind {
            let gens = gens.clone();
            let forms = closure_forms(store, &gens, height);
            self.closure = (height, forms.into_iter().collect());
            // Heights cached in `member` never exceed the closure height
            // they were computed at, so existing entries stay valid.
        }
    }

    /// The strongness test set for games of formal birthday `n`: the
    /// minimal truncated Left ends of the universe. Elements are
    /// canonical and pairwise incomparable.
    pub fn test_set(&mut self, store: &mut Store, n: u32) -> Vec<GameId> {
        if let Some(ts) = self.test_sets.get(&n) {
            return ts.clone();
        }
        let ts = match &self.kind {
            UniverseKind::Dicots => vec![GameId::ZERO],
            UniverseKind::DeadEnding => {
                let mut v = vec![GameId::ZERO, store.perfect_murder(n)];
                v.sort_unstable();
                v.dedup();
                v
            }
            UniverseKind::Generated(gens) => {
                let gens = gens.clone();
                let minus_one = store.integer(-1);
                let one_bar_zero =
                    store.intern(&[], &[GameId::ZERO, minus_one], false, false);
                if gens == [minus_one] {
                    (0..=n as i32).map(|k| store.integer(-k)).collect()
                } else if gens == [one_bar_zero] {
                    let mut v = vec![GameId::ZERO];
                    let k = n / 2;
                    let mut acc = GameId::ZERO;
                    for _ in 0..k {
                        acc = store.sum(acc, one_bar_zero);
                        v.push(deadend::canonical(store, acc).unwrap());
                    }
                    if n % 2 == 1 {
                        let odd = store.sum(acc, minus_one);
                        v.push(deadend::canonical(store, odd).unwrap());
                    }
                    v.sort_unstable();
                    v.dedup();
                    v
                } else {
                    test_set_generic(store, &gens, n)
                }
            }
        };
        self.test_sets.insert(n, ts.clone());
        ts
    }

    /// Left strongness: Left moving first wins `g + X` for every Left end
    /// `X` of the universe. Decided over the finite test set at the
    /// ordinary formal birthday of `g`; end-like games are strong outright.
    pub fn is_left_strong(&mut self, store: &mut Store, g: GameId) -> bool {
        if store.is_left_end_like(g) {
            return true;
        }
        if let Some(&s) = self.strong.get(&(g, Player::Left)) {
            return s;
        }
        let n = store.formal_birthday(g);
        let tests = self.test_set(store, n);
        let result = tests.iter().all(|&x| {
            let s = store.sum(g, x);
            store.outcome(s).left_first == Player::Left
        });
        self.strong.insert((g, Player::Left), result);
        result
    }

    pub fn is_right_strong(&mut self, store: &mut Store, g: GameId) -> bool {
        if store.is_right_end_like(g) {
            return true;
        }
        if let Some(&s) = self.strong.get(&(g, Player::Right)) {
            return s;
        }
        let c = store.conjugate(g);
        let result = self.is_left_strong(store, c);
        self.strong.insert((g, Player::Right), result);
        result
    }

    pub fn is_strong(&mut self, store: &mut Store, g: GameId, side: Player) -> bool {
        match side {
            Player::Left => self.is_left_strong(store, g),
            Player::Right => self.is_right_strong(store, g),
        }
    }

    /// Whether a Left dead-end lies above some member of the generator
    /// closure. Decided through the adjoint: `g` is outside the upward
    /// closure exactly when its adjoint is Left strong.
    pub fn in_upward_closure(&mut self, store: &mut Store, g: GameId) -> Result<bool> {
        if !store.is_left_dead_end(g) {
            return Err(Error::NotALeftDeadEnd {
                op: "upward closure",
            });
        }
        let adj = adjoint(store, g);
        Ok(!self.is_left_strong(store, adj))
    }
}

/// The companion game making `g + adjoint(g)` a second-player win. Never
/// Left or Right end-like; tombstones of `g` play no role.
pub fn adjoint(store: &mut Store, g: GameId) -> GameId {
    if let Some(&a) = store.adjoint_memo.get(&g) {
        return a;
    }
    let left = store.left_options(g).to_vec();
    let right = store.right_options(g).to_vec();
    let adj_right: Vec<GameId> = right.iter().map(|&r| adjoint(store, r)).collect();
    let adj_left: Vec<GameId> = left.iter().map(|&l| adjoint(store, l)).collect();
    let a = match (left.is_empty(), right.is_empty()) {
        (true, true) => store.star(),
        (true, false) => store.intern(&adj_right, &[GameId::ZERO], false, false),
        (false, true) => store.intern(&[GameId::ZERO], &adj_left, false, false),
        (false, false) => store.intern(&adj_right, &adj_left, false, false),
    };
    store.adjoint_memo.insert(g, a);
    a
}

/// Variant of the adjoint for Left dead-ends whose single Right option is
/// `*`; its Left options are the ordinary adjoints of the Right options.
/// For the empty game the Left option is `0`.
pub fn left_modified_adjoint(store: &mut Store, g: GameId) -> Result<GameId> {
    if !store.is_left_dead_end(g) {
        return Err(Error::NotALeftDeadEnd {
            op: "Left-modified adjoint",
        });
    }
    let star = store.star();
    if g == GameId::ZERO {
        return Ok(store.intern(&[GameId::ZERO], &[star], false, false));
    }
    let right = store.right_options(g).to_vec();
    let adj_right: Vec<GameId> = right.iter().map(|&r| adjoint(store, r)).collect();
    Ok(store.intern(&adj_right, &[star], false, false))
}

/// All forms of the simple closure of `generators` (followers plus sums)
/// of height at most `max_height`, sorted by id.
pub fn closure_forms(store: &mut Store, generators: &[GameId], max_height: u32) -> Vec<GameId> {
    let mut seen = FxHashSet::default();
    let mut list = Vec::new();
    let push = |store: &Store, id: GameId, list: &mut Vec<GameId>, seen: &mut FxHashSet<GameId>| {
        if store.formal_birthday(id) <= max_height && seen.insert(id) {
            list.push(id);
        }
    };
    push(store, GameId::ZERO, &mut list, &mut seen);
    let mut stack = generators.to_vec();
    let mut visited = FxHashSet::default();
    while let Some(g) = stack.pop() {
        if !visited.insert(g) {
            continue;
        }
        push(store, g, &mut list, &mut seen);
        stack.extend_from_slice(store.left_options(g));
        stack.extend_from_slice(store.right_options(g));
    }
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        let fa = store.formal_birthday(a);
        for j in 0..=i {
            let b = list[j];
            if fa + store.formal_birthday(b) > max_height {
                continue;
            }
            let s = store.sum(a, b);
            push(store, s, &mut list, &mut seen);
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// The level-`n` truncations of every member of the simple closure of
/// `generators`: seed with truncated followers, then close under
/// truncated sums.
pub fn truncated_closure(store: &mut Store, generators: &[GameId], n: u32) -> Vec<GameId> {
    let mut seen = FxHashSet::default();
    let mut list = vec![GameId::ZERO];
    seen.insert(GameId::ZERO);
    let mut stack = generators.to_vec();
    let mut visited = FxHashSet::default();
    while let Some(g) = stack.pop() {
        if !visited.insert(g) {
            continue;
        }
        let t = store.truncate(g, n).expect("dead-ends are ordinary");
        if seen.insert(t) {
            list.push(t);
        }
        stack.extend_from_slice(store.left_options(g));
        stack.extend_from_slice(store.right_options(g));
    }
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        for j in 0..=i {
            let s = store.sum(a, list[j]);
            let t = store.truncate(s, n).expect("dead-ends are ordinary");
            if seen.insert(t) {
                list.push(t);
            }
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// Minimal elements, in the absolute dead-end order, of the truncated
/// closure. This is the generic test-set construction; the closed forms
/// in [`Universe::test_set`] must agree with it wherever both apply.
pub fn test_set_generic(store: &mut Store, generators: &[GameId], n: u32) -> Vec<GameId> {
    let forms = truncated_closure(store, generators, n);
    let mut values: Vec<GameId> = forms
        .into_iter()
        .map(|f| deadend::canonical(store, f).expect("closure members are dead-ends"))
        .collect();
    values.sort_unstable();
    values.dedup();
    let mut minimal = Vec::new();
    for &x in &values {
        let has_below = values
            .iter()
            .any(|&y| y != x && deadend::geq(store, x, y).unwrap());
        if !has_below {
            minimal.push(x);
        }
    }
    minimal
}
