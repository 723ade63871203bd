//! Interned store of augmented game forms.
//!
//! A form is a pair of sorted, duplicate-free option sets plus two tombstone
//! flags. Forms are hash-consed: structurally identical trees always receive
//! the same [`GameId`], so id equality is tree identity. The store is
//! append-only and acyclic by construction (options must already be
//! interned), and every per-form invariant — formal birthday, misère
//! outcome, hereditary predicates, edge count — is computed exactly once, at
//! intern time.
//!
//! Reads never mutate, so any number of concurrent readers would be safe;
//! interning and the memoized kernel operations require exclusive access.

use rustc_hash::FxHashMap;
use std::fmt;

use crate::{Error, Result};

/// Handle to an interned game form. Id 0 is the empty game `0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameId(u32);

impl GameId {
    pub const ZERO: GameId = GameId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// One of the two players.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Left => write!(f, "Left"),
            Player::Right => write!(f, "Right"),
        }
    }
}

/// Winners of the two move-order scenarios: `left_first` is who wins when
/// Left moves first, `right_first` who wins when Right moves first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OutcomePair {
    pub left_first: Player,
    pub right_first: Player,
}

impl OutcomePair {
    pub fn class(self) -> Outcome {
        match (self.left_first, self.right_first) {
            (Player::Left, Player::Left) => Outcome::Left,
            (Player::Left, Player::Right) => Outcome::Next,
            (Player::Right, Player::Left) => Outcome::Previous,
            (Player::Right, Player::Right) => Outcome::Right,
        }
    }

    /// Pointwise order with Left-wins above Right-wins in each component.
    pub fn ge(self, other: OutcomePair) -> bool {
        fn comp(a: Player, b: Player) -> bool {
            a == b || a == Player::Left
        }
        comp(self.left_first, other.left_first) && comp(self.right_first, other.right_first)
    }

    /// Left wins moving first, i.e. the outcome class is `L` or `N`.
    pub fn left_wins_moving_first(self) -> bool {
        self.left_first == Player::Left
    }

    /// Right wins moving first, i.e. the outcome class is `R` or `N`.
    pub fn right_wins_moving_first(self) -> bool {
        self.right_first == Player::Right
    }

    pub fn conjugate(self) -> OutcomePair {
        OutcomePair {
            left_first: self.right_first.opponent(),
            right_first: self.left_first.opponent(),
        }
    }
}

/// Misère outcome class. The partial order is `L > N > R`, `L > P > R`,
/// with `N` and `P` incomparable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Outcome {
    Left,
    Next,
    Previous,
    Right,
}

impl Outcome {
    pub fn ge(self, other: Outcome) -> bool {
        self.pair().ge(other.pair())
    }

    fn pair(self) -> OutcomePair {
        let (l, r) = match self {
            Outcome::Left => (Player::Left, Player::Left),
            Outcome::Next => (Player::Left, Player::Right),
            Outcome::Previous => (Player::Right, Player::Left),
            Outcome::Right => (Player::Right, Player::Right),
        };
        OutcomePair {
            left_first: l,
            right_first: r,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Left => write!(f, "L"),
            Outcome::Next => write!(f, "N"),
            Outcome::Previous => write!(f, "P"),
            Outcome::Right => write!(f, "R"),
        }
    }
}

/// An interned form: ordinary options plus tombstone flags.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GameNode {
    left: Box<[GameId]>,
    right: Box<[GameId]>,
    sigma_left: bool,
    sigma_right: bool,
}

impl GameNode {
    pub fn left(&self) -> &[GameId] {
        &self.left
    }

    pub fn right(&self) -> &[GameId] {
        &self.right
    }

    pub fn has_sigma_left(&self) -> bool {
        self.sigma_left
    }

    pub fn has_sigma_right(&self) -> bool {
        self.sigma_right
    }
}

mod flag {
    pub const LEFT_END: u16 = 1 << 0;
    pub const RIGHT_END: u16 = 1 << 1;
    pub const LEFT_END_LIKE: u16 = 1 << 2;
    pub const RIGHT_END_LIKE: u16 = 1 << 3;
    pub const DICOT: u16 = 1 << 4;
    pub const LEFT_DEAD_END: u16 = 1 << 5;
    pub const RIGHT_DEAD_END: u16 = 1 << 6;
    pub const DEAD_ENDING: u16 = 1 << 7;
    /// No tombstone anywhere in the tree.
    pub const ORDINARY: u16 = 1 << 8;
}

#[derive(Clone, Copy)]
struct Meta {
    birthday: u32,
    outcome: OutcomePair,
    flags: u16,
    edges: u128,
    int_value: Option<i32>,
}

/// Resource limits for a store. Exceeding `max_nodes` or `max_height`
/// aborts with a panic carrying a recognizable message; the CLI maps this
/// to its bound-exceeded exit code.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_height: u32,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_nodes: 50_000_000,
            max_height: 4_096,
        }
    }
}

pub struct Store {
    nodes: Vec<GameNode>,
    meta: Vec<Meta>,
    index: FxHashMap<GameNode, GameId>,
    limits: Limits,
    star: GameId,
    integers: FxHashMap<i32, GameId>,
    murders: Vec<GameId>,
    sum_memo: FxHashMap<(GameId, GameId), GameId>,
    conjugate_memo: FxHashMap<GameId, GameId>,
    truncate_memo: FxHashMap<(GameId, u32), GameId>,
    pub(crate) de_geq_memo: FxHashMap<(GameId, GameId), bool>,
    pub(crate) de_canonical_memo: FxHashMap<GameId, GameId>,
    pub(crate) adjoint_memo: FxHashMap<GameId, GameId>,
}

impl Default for Store {
    fn default() -> Store {
        Store::new()
    }
}

impl Store {
    pub fn new() -> Store {
        Store::with_limits(Limits::default())
    }

    pub fn with_limits(limits: Limits) -> Store {
        let mut store = Store {
            nodes: Vec::new(),
            meta: Vec::new(),
            index: FxHashMap::default(),
            limits,
            star: GameId::ZERO,
            integers: FxHashMap::default(),
            murders: vec![GameId::ZERO],
            sum_memo: FxHashMap::default(),
            conjugate_memo: FxHashMap::default(),
            truncate_memo: FxHashMap::default(),
            de_geq_memo: FxHashMap::default(),
            de_canonical_memo: FxHashMap::default(),
            adjoint_memo: FxHashMap::default(),
        };
        let zero = store.intern(&[], &[], false, false);
        debug_assert_eq!(zero, GameId::ZERO);
        store.star = store.intern(&[zero], &[zero], false, false);
        store.integers.insert(0, zero);
        store
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All interned ids, in intern order.
    pub fn ids(&self) -> impl Iterator<Item = GameId> {
        (0..self.nodes.len() as u32).map(GameId)
    }

    pub fn node(&self, g: GameId) -> &GameNode {
        &self.nodes[g.index()]
    }

    pub fn left_options(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.index()].left
    }

    pub fn right_options(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.index()].right
    }

    pub fn options(&self, g: GameId, side: Player) -> &[GameId] {
        match side {
            Player::Left => self.left_options(g),
            Player::Right => self.right_options(g),
        }
    }

    pub fn has_sigma(&self, g: GameId, side: Player) -> bool {
        let node = &self.nodes[g.index()];
        match side {
            Player::Left => node.sigma_left,
            Player::Right => node.sigma_right,
        }
    }

    pub fn zero(&self) -> GameId {
        GameId::ZERO
    }

    pub fn star(&self) -> GameId {
        self.star
    }

    /// Interns the form with the given option sets and tombstone flags.
    /// Options are sorted and deduplicated; re-interning an existing node
    /// returns its id. Ids are dense and assigned in intern order, so runs
    /// that intern the same sequence of distinct nodes agree on ids.
    pub fn intern(
        &mut self,
        left: &[GameId],
        right: &[GameId],
        sigma_left: bool,
        sigma_right: bool,
    ) -> GameId {
        let node = GameNode {
            left: self.sorted_options(left),
            right: self.sorted_options(right),
            sigma_left,
            sigma_right,
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        assert!(
            self.nodes.len() < self.limits.max_nodes,
            "store node limit exceeded ({} nodes)",
            self.limits.max_nodes
        );
        let meta = self.compute_meta(&node);
        assert!(
            meta.birthday <= self.limits.max_height,
            "game height limit exceeded ({})",
            self.limits.max_height
        );
        let id = GameId(self.nodes.len() as u32);
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.meta.push(meta);
        id
    }

    fn sorted_options(&self, options: &[GameId]) -> Box<[GameId]> {
        let mut v = options.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&max) = v.last() {
            assert!(max.index() < self.nodes.len(), "option id not interned");
        }
        v.into_boxed_slice()
    }

    fn compute_meta(&self, node: &GameNode) -> Meta {
        let left_end = node.left.is_empty() && !node.sigma_left;
        let right_end = node.right.is_empty() && !node.sigma_right;
        let left_end_like = node.left.is_empty() || node.sigma_left;
        let right_end_like = node.right.is_empty() || node.sigma_right;
        let is_zero = left_end && right_end && node.left.is_empty() && node.right.is_empty();

        let mut birthday = 0u32;
        let mut edges = 0u128;
        let mut all_ordinary = !node.sigma_left && !node.sigma_right;
        let mut all_dicot = true;
        let mut all_dead_ending = true;
        let mut right_all_left_de = true;
        let mut left_all_right_de = true;
        for &opt in node.left.iter().chain(node.right.iter()) {
            let m = &self.meta[opt.index()];
            birthday = birthday.max(m.birthday + 1);
            edges = edges.saturating_add(1).saturating_add(m.edges);
            all_ordinary &= m.flags & flag::ORDINARY != 0;
            all_dicot &= m.flags & flag::DICOT != 0;
            all_dead_ending &= m.flags & flag::DEAD_ENDING != 0;
        }
        for &opt in node.right.iter() {
            right_all_left_de &= self.meta[opt.index()].flags & flag::LEFT_DEAD_END != 0;
        }
        for &opt in node.left.iter() {
            left_all_right_de &= self.meta[opt.index()].flags & flag::RIGHT_DEAD_END != 0;
        }
        edges = edges
            .saturating_add(node.sigma_left as u128)
            .saturating_add(node.sigma_right as u128);

        let o_left = if left_end_like
            || node
                .left
                .iter()
                .any(|&l| self.meta[l.index()].outcome.right_first == Player::Left)
        {
            Player::Left
        } else {
            Player::Right
        };
        let o_right = if right_end_like
            || node
                .right
                .iter()
                .any(|&r| self.meta[r.index()].outcome.left_first == Player::Right)
        {
            Player::Right
        } else {
            Player::Left
        };

        let dicot = if is_zero {
            true
        } else {
            all_ordinary && !node.left.is_empty() && !node.right.is_empty() && all_dicot
        };
        let left_dead_end =
            !node.sigma_left && !node.sigma_right && node.left.is_empty() && right_all_left_de;
        let right_dead_end =
            !node.sigma_left && !node.sigma_right && node.right.is_empty() && left_all_right_de;
        let dead_ending = all_ordinary
            && all_dead_ending
            && (!left_end || left_dead_end)
            && (!right_end || right_dead_end);

        let int_value = if is_zero {
            Some(0)
        } else if all_ordinary && node.right.is_empty() && node.left.len() == 1 {
            match self.meta[node.left[0].index()].int_value {
                Some(k) if k >= 0 => Some(k + 1),
                _ => None,
            }
        } else if all_ordinary && node.left.is_empty() && node.right.len() == 1 {
            match self.meta[node.right[0].index()].int_value {
                Some(k) if k <= 0 => Some(k - 1),
                _ => None,
            }
        } else {
            None
        };

        let mut flags = 0u16;
        if left_end {
            flags |= flag::LEFT_END;
        }
        if right_end {
            flags |= flag::RIGHT_END;
        }
        if left_end_like {
            flags |= flag::LEFT_END_LIKE;
        }
        if right_end_like {
            flags |= flag::RIGHT_END_LIKE;
        }
        if dicot {
            flags |= flag::DICOT;
        }
        if left_dead_end {
            flags |= flag::LEFT_DEAD_END;
        }
        if right_dead_end {
            flags |= flag::RIGHT_DEAD_END;
        }
        if dead_ending {
            flags |= flag::DEAD_ENDING;
        }
        if all_ordinary {
            flags |= flag::ORDINARY;
        }

        Meta {
            birthday,
            outcome: OutcomePair {
                left_first: o_left,
                right_first: o_right,
            },
            flags,
            edges,
            int_value,
        }
    }

    fn flags(&self, g: GameId) -> u16 {
        self.meta[g.index()].flags
    }

    /// No Left options at all, ordinary or tombstone.
    pub fn is_left_end(&self, g: GameId) -> bool {
        self.flags(g) & flag::LEFT_END != 0
    }

    pub fn is_right_end(&self, g: GameId) -> bool {
        self.flags(g) & flag::RIGHT_END != 0
    }

    /// A Left end, or a form carrying the Left tombstone.
    pub fn is_left_end_like(&self, g: GameId) -> bool {
        self.flags(g) & flag::LEFT_END_LIKE != 0
    }

    pub fn is_right_end_like(&self, g: GameId) -> bool {
        self.flags(g) & flag::RIGHT_END_LIKE != 0
    }

    pub fn is_end_like(&self, g: GameId, side: Player) -> bool {
        match side {
            Player::Left => self.is_left_end_like(g),
            Player::Right => self.is_right_end_like(g),
        }
    }

    /// Every nonempty subposition has options for both players.
    pub fn is_dicot(&self, g: GameId) -> bool {
        self.flags(g) & flag::DICOT != 0
    }

    /// Every subposition is a Left end.
    pub fn is_left_dead_end(&self, g: GameId) -> bool {
        self.flags(g) & flag::LEFT_DEAD_END != 0
    }

    pub fn is_right_dead_end(&self, g: GameId) -> bool {
        self.flags(g) & flag::RIGHT_DEAD_END != 0
    }

    /// Every end among the subpositions is a dead-end.
    pub fn is_dead_ending(&self, g: GameId) -> bool {
        self.flags(g) & flag::DEAD_ENDING != 0
    }

    /// No tombstone anywhere in the tree.
    pub fn is_ordinary(&self, g: GameId) -> bool {
        self.flags(g) & flag::ORDINARY != 0
    }

    /// Height of the tree counted over ordinary options; tombstones add
    /// nothing. This is the bound on how many moves can be made from here.
    pub fn formal_birthday(&self, g: GameId) -> u32 {
        self.meta[g.index()].birthday
    }

    /// Misère outcome scenario pair, precomputed at intern time.
    pub fn outcome(&self, g: GameId) -> OutcomePair {
        self.meta[g.index()].outcome
    }

    pub fn outcome_class(&self, g: GameId) -> Outcome {
        self.outcome(g).class()
    }

    /// Edge count of the unfolded game tree, with multiplicity; each
    /// tombstone flag counts as one edge.
    pub fn edge_count(&self, g: GameId) -> u128 {
        self.meta[g.index()].edges
    }

    /// `Some(n)` when the form is exactly the integer game `n`.
    pub fn integer_value(&self, g: GameId) -> Option<i32> {
        self.meta[g.index()].int_value
    }

    /// The integer game: `0` is empty, `n > 0` is `{n-1|}`, negatives are
    /// conjugates.
    pub fn integer(&mut self, n: i32) -> GameId {
        if let Some(&id) = self.integers.get(&n) {
            return id;
        }
        let id = if n > 0 {
            let prev = self.integer(n - 1);
            self.intern(&[prev], &[], false, false)
        } else {
            let pos = self.integer(-n);
            self.conjugate(pos)
        };
        self.integers.insert(n, id);
        id
    }

    /// Swaps the players throughout: option sets exchanged recursively and
    /// tombstone flags swapped.
    pub fn conjugate(&mut self, g: GameId) -> GameId {
        if let Some(&id) = self.conjugate_memo.get(&g) {
            return id;
        }
        let node = self.node(g);
        let (left, right) = (node.left.to_vec(), node.right.to_vec());
        let (sl, sr) = (node.sigma_left, node.sigma_right);
        let new_left: Vec<GameId> = right.iter().map(|&r| self.conjugate(r)).collect();
        let new_right: Vec<GameId> = left.iter().map(|&l| self.conjugate(l)).collect();
        let id = self.intern(&new_left, &new_right, sr, sl);
        self.conjugate_memo.insert(g, id);
        self.conjugate_memo.insert(id, g);
        id
    }

    /// Disjunctive sum. Ordinary options combine componentwise; the sum
    /// carries a tombstone on a side only when both summands are end-like
    /// on that side and at least one carries the tombstone.
    pub fn sum(&mut self, g: GameId, h: GameId) -> GameId {
        if g == GameId::ZERO {
            return h;
        }
        if h == GameId::ZERO {
            return g;
        }
        let key = if g <= h { (g, h) } else { (h, g) };
        if let Some(&id) = self.sum_memo.get(&key) {
            return id;
        }
        let (gl, gr) = (self.node(g).left.to_vec(), self.node(g).right.to_vec());
        let (hl, hr) = (self.node(h).left.to_vec(), self.node(h).right.to_vec());
        let mut left = Vec::with_capacity(gl.len() + hl.len());
        for &x in &gl {
            left.push(self.sum(x, h));
        }
        for &x in &hl {
            left.push(self.sum(g, x));
        }
        let mut right = Vec::with_capacity(gr.len() + hr.len());
        for &x in &gr {
            right.push(self.sum(x, h));
        }
        for &x in &hr {
            right.push(self.sum(g, x));
        }
        let sigma_left = self.is_left_end_like(g)
            && self.is_left_end_like(h)
            && (self.has_sigma(g, Player::Left) || self.has_sigma(h, Player::Left));
        let sigma_right = self.is_right_end_like(g)
            && self.is_right_end_like(h)
            && (self.has_sigma(g, Player::Right) || self.has_sigma(h, Player::Right));
        let id = self.intern(&left, &right, sigma_left, sigma_right);
        self.sum_memo.insert(key, id);
        id
    }

    pub fn sum_all(&mut self, parts: &[GameId]) -> GameId {
        let mut acc = GameId::ZERO;
        for &p in parts {
            acc = self.sum(acc, p);
        }
        acc
    }

    /// Cuts play off after `n` moves: level-0 truncation is `0`, level
    /// `n+1` truncates every option at level `n`. Defined on ordinary
    /// games only.
    pub fn truncate(&mut self, g: GameId, n: u32) -> Result<GameId> {
        if !self.is_ordinary(g) {
            return Err(Error::TombstonedInput { op: "truncate" });
        }
        Ok(self.truncate_rec(g, n))
    }

    fn truncate_rec(&mut self, g: GameId, n: u32) -> GameId {
        if self.formal_birthday(g) <= n {
            return g;
        }
        if n == 0 {
            return GameId::ZERO;
        }
        if let Some(&id) = self.truncate_memo.get(&(g, n)) {
            return id;
        }
        let (gl, gr) = (self.node(g).left.to_vec(), self.node(g).right.to_vec());
        let left: Vec<GameId> = gl.iter().map(|&x| self.truncate_rec(x, n - 1)).collect();
        let right: Vec<GameId> = gr.iter().map(|&x| self.truncate_rec(x, n - 1)).collect();
        let id = self.intern(&left, &right, false, false);
        self.truncate_memo.insert((g, n), id);
        id
    }

    /// The least Left dead-end of each birthday: `M_0 = 0`,
    /// `M_{n+1} = {|0, M_n}`.
    pub fn perfect_murder(&mut self, n: u32) -> GameId {
        while self.murders.len() <= n as usize {
            let prev = *self.murders.last().unwrap();
            let next = self.intern(&[], &[GameId::ZERO, prev], false, false);
            self.murders.push(next);
        }
        self.murders[n as usize]
    }
}
