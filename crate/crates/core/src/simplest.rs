//! Reduction to the unique augmented simplest form modulo a universe.
//!
//! Working bottom-up over the subposition DAG, each node is rewritten to a
//! fixpoint of four steps: bypass ordinary reversible options, eliminate
//! dominated options, replace atomic reversible options (those reversing
//! through an end) by the tombstone for their side, and finally erase a
//! tombstone when the erased game is still strong on that side.
//!
//! Each bypass replaces an option by finitely many options of strictly
//! smaller height, so the multiset of option heights decreases in the
//! multiset order and the loop terminates; eliminations, replacements,
//! and erasures only shrink the node.

use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::compare::geq;
use crate::notation;
use crate::store::{GameId, Player, Store};
use crate::universe::Universe;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepAction {
    /// `option` was below another option for the same side.
    EliminateDominated { side: Player, option: GameId },
    /// `option` reversed through `through`, which is not an end for the
    /// side; its same-side options were substituted in.
    BypassReversible {
        side: Player,
        option: GameId,
        through: GameId,
    },
    /// `option` reversed through the end `through` and was replaced by
    /// the side's tombstone.
    ReplaceAtomic {
        side: Player,
        option: GameId,
        through: GameId,
    },
    /// The side's tombstone was erased; the erased game is still strong.
    EraseSigma { side: Player },
}

#[derive(Clone, Copy, Debug)]
pub struct TraceStep {
    pub before: GameId,
    pub after: GameId,
    pub action: StepAction,
}

/// Outcome of a single-step operation.
#[derive(Clone, Copy, Debug)]
pub enum StepResult {
    Applied(TraceStep),
    NotApplicable,
}

/// Ordered log of rewrites from an input form to its simplest form.
/// Replaying the steps as global substitutions reproduces the output.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub input: GameId,
    pub output: GameId,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn replay(&self, store: &mut Store) -> GameId {
        let mut current = self.input;
        for step in &self.steps {
            let mut memo = FxHashMap::default();
            current = substitute(store, current, step.before, step.after, &mut memo);
        }
        current
    }

    pub fn to_json(&self, store: &Store) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let (kind, side, option, through) = match s.action {
                    StepAction::EliminateDominated { side, option } => {
                        ("eliminate-dominated", side, Some(option), None)
                    }
                    StepAction::BypassReversible {
                        side,
                        option,
                        through,
                    } => ("bypass-reversible", side, Some(option), Some(through)),
                    StepAction::ReplaceAtomic {
                        side,
                        option,
                        through,
                    } => ("replace-atomic", side, Some(option), Some(through)),
                    StepAction::EraseSigma { side } => ("erase-sigma", side, None, None),
                };
                let mut v = json!({
                    "action": kind,
                    "side": match side { Player::Left => "L", Player::Right => "R" },
                    "before": notation::render(store, s.before),
                    "after": notation::render(store, s.after),
                });
                if let Some(o) = option {
                    v["option"] = Value::String(notation::render(store, o));
                }
                if let Some(t) = through {
                    v["through"] = Value::String(notation::render(store, t));
                }
                v
            })
            .collect();
        json!({
            "input": notation::render(store, self.input),
            "output": notation::render(store, self.output),
            "steps": steps,
        })
    }
}

fn substitute(
    store: &mut Store,
    g: GameId,
    from: GameId,
    to: GameId,
    memo: &mut FxHashMap<GameId, GameId>,
) -> GameId {
    if g == from {
        return to;
    }
    if let Some(&s) = memo.get(&g) {
        return s;
    }
    let node = store.node(g);
    let (left, right) = (node.left().to_vec(), node.right().to_vec());
    let (sl, sr) = (node.has_sigma_left(), node.has_sigma_right());
    let new_left: Vec<GameId> = left
        .iter()
        .map(|&o| substitute(store, o, from, to, memo))
        .collect();
    let new_right: Vec<GameId> = right
        .iter()
        .map(|&o| substitute(store, o, from, to, memo))
        .collect();
    let out = store.intern(&new_left, &new_right, sl, sr);
    memo.insert(g, out);
    out
}

/// The unique equivalent form with no dominated or reversible options and
/// no erasable tombstone, computed bottom-up over all subpositions.
pub fn simplest_form(store: &mut Store, universe: &mut Universe, g: GameId) -> GameId {
    if let Some(&s) = universe.simplest.get(&g) {
        return s;
    }
    let node = store.node(g);
    let (left, right) = (node.left().to_vec(), node.right().to_vec());
    let (sl, sr) = (node.has_sigma_left(), node.has_sigma_right());
    let new_left: Vec<GameId> = left
        .iter()
        .map(|&o| simplest_form(store, universe, o))
        .collect();
    let new_right: Vec<GameId> = right
        .iter()
        .map(|&o| simplest_form(store, universe, o))
        .collect();
    let start = store.intern(&new_left, &new_right, sl, sr);
    let out = reduce_node(store, universe, start, &mut None);
    universe.simplest.insert(g, out);
    out
}

/// As [`simplest_form`], also returning the replayable step log.
pub fn simplest_form_traced(
    store: &mut Store,
    universe: &mut Universe,
    g: GameId,
) -> (GameId, ReductionTrace) {
    let mut steps = Some(Vec::new());
    let mut local = FxHashMap::default();
    let out = traced_rec(store, universe, g, &mut local, &mut steps);
    (
        out,
        ReductionTrace {
            input: g,
            output: out,
            steps: steps.unwrap(),
        },
    )
}

fn traced_rec(
    store: &mut Store,
    universe: &mut Universe,
    g: GameId,
    local: &mut FxHashMap<GameId, GameId>,
    steps: &mut Option<Vec<TraceStep>>,
) -> GameId {
    if let Some(&s) = local.get(&g) {
        return s;
    }
    let node = store.node(g);
    let (left, right) = (node.left().to_vec(), node.right().to_vec());
    let (sl, sr) = (node.has_sigma_left(), node.has_sigma_right());
    let new_left: Vec<GameId> = left
        .iter()
        .map(|&o| traced_rec(store, universe, o, local, steps))
        .collect();
    let new_right: Vec<GameId> = right
        .iter()
        .map(|&o| traced_rec(store, universe, o, local, steps))
        .collect();
    let start = store.intern(&new_left, &new_right, sl, sr);
    let out = reduce_node(store, universe, start, steps);
    universe.simplest.entry(g).or_insert(out);
    local.insert(g, out);
    out
}

/// Runs the reduction loop at a single node whose options are already in
/// simplest form.
fn reduce_node(
    store: &mut Store,
    universe: &mut Universe,
    start: GameId,
    steps: &mut Option<Vec<TraceStep>>,
) -> GameId {
    let mut current = start;
    let mut guard = 0u32;
    loop {
        guard += 1;
        assert!(guard < 100_000, "reduction failed to reach a fixpoint");
        let step = match find_bypass(store, universe, current) {
            Some(s) => s,
            None => match find_dominated(store, universe, current) {
                Some(s) => s,
                None => match find_atomic(store, universe, current) {
                    Some(s) => s,
                    None => match find_erasure(store, universe, current) {
                        Some(s) => s,
                        None => break,
                    },
                },
            },
        };
        debug_assert_ne!(step.before, step.after);
        if let Some(log) = steps.as_mut() {
            log.push(step);
        }
        current = step.after;
    }
    current
}

/// Does `candidate` reverse out past `g`? For a Left option the reversing
/// position is a Right option `r` of the candidate with `g >= r`; for a
/// Right option it is a Left option `t` with `t >= g`.
fn reversing_through(
    store: &mut Store,
    universe: &mut Universe,
    g: GameId,
    option: GameId,
    side: Player,
) -> Vec<GameId> {
    let candidates = store.options(option, side.opponent()).to_vec();
    candidates
        .into_iter()
        .filter(|&through| match side {
            Player::Left => geq(store, universe, g, through),
            Player::Right => geq(store, universe, through, g),
        })
        .collect()
}

fn find_bypass(store: &mut Store, universe: &mut Universe, g: GameId) -> Option<TraceStep> {
    for side in [Player::Left, Player::Right] {
        for option in store.options(g, side).to_vec() {
            let through = reversing_through(store, universe, g, option, side)
                .into_iter()
                .find(|&t| !is_end_for(store, t, side));
            if let Some(through) = through {
                return Some(apply_bypass(store, g, side, option, through));
            }
        }
    }
    None
}

fn find_atomic(store: &mut Store, universe: &mut Universe, g: GameId) -> Option<TraceStep> {
    for side in [Player::Left, Player::Right] {
        for option in store.options(g, side).to_vec() {
            let through = reversing_through(store, universe, g, option, side)
                .into_iter()
                .find(|&t| is_end_for(store, t, side));
            if let Some(through) = through {
                return Some(apply_atomic(store, g, side, option, through));
            }
        }
    }
    None
}

/// An end for the reversing side: no options of that side at all.
fn is_end_for(store: &Store, g: GameId, side: Player) -> bool {
    match side {
        Player::Left => store.is_left_end(g),
        Player::Right => store.is_right_end(g),
    }
}

fn apply_bypass(
    store: &mut Store,
    g: GameId,
    side: Player,
    option: GameId,
    through: GameId,
) -> TraceStep {
    let node = store.node(g);
    let (mut left, mut right) = (node.left().to_vec(), node.right().to_vec());
    let (mut sl, mut sr) = (node.has_sigma_left(), node.has_sigma_right());
    let through_node = store.node(through);
    match side {
        Player::Left => {
            left.retain(|&o| o != option);
            left.extend_from_slice(through_node.left());
            sl |= through_node.has_sigma_left();
        }
        Player::Right => {
            right.retain(|&o| o != option);
            right.extend_from_slice(through_node.right());
            sr |= through_node.has_sigma_right();
        }
    }
    let after = store.intern(&left, &right, sl, sr);
    TraceStep {
        before: g,
        after,
        action: StepAction::BypassReversible {
            side,
            option,
            through,
        },
    }
}

fn apply_atomic(
    store: &mut Store,
    g: GameId,
    side: Player,
    option: GameId,
    through: GameId,
) -> TraceStep {
    let node = store.node(g);
    let (mut left, mut right) = (node.left().to_vec(), node.right().to_vec());
    let (mut sl, mut sr) = (node.has_sigma_left(), node.has_sigma_right());
    match side {
        Player::Left => {
            left.retain(|&o| o != option);
            sl = true;
        }
        Player::Right => {
            right.retain(|&o| o != option);
            sr = true;
        }
    }
    let after = store.intern(&left, &right, sl, sr);
    TraceStep {
        before: g,
        after,
        action: StepAction::ReplaceAtomic {
            side,
            option,
            through,
        },
    }
}

fn find_dominated(store: &mut Store, universe: &mut Universe, g: GameId) -> Option<TraceStep> {
    for side in [Player::Left, Player::Right] {
        let options = store.options(g, side).to_vec();
        for &candidate in &options {
            let removable = options.iter().any(|&other| {
                if other == candidate {
                    return false;
                }
                let (better, tied) = match side {
                    Player::Left => (
                        geq(store, universe, other, candidate),
                        geq(store, universe, candidate, other),
                    ),
                    Player::Right => (
                        geq(store, universe, candidate, other),
                        geq(store, universe, other, candidate),
                    ),
                };
                // Strictly below another option, or tied with an option
                // of smaller id.
                better && (!tied || other < candidate)
            });
            if removable {
                return Some(apply_elimination(store, g, side, candidate));
            }
        }
    }
    None
}

fn apply_elimination(store: &mut Store, g: GameId, side: Player, option: GameId) -> TraceStep {
    let node = store.node(g);
    let (mut left, mut right) = (node.left().to_vec(), node.right().to_vec());
    let (sl, sr) = (node.has_sigma_left(), node.has_sigma_right());
    match side {
        Player::Left => left.retain(|&o| o != option),
        Player::Right => right.retain(|&o| o != option),
    }
    let after = store.intern(&left, &right, sl, sr);
    TraceStep {
        before: g,
        after,
        action: StepAction::EliminateDominated { side, option },
    }
}

fn find_erasure(store: &mut Store, universe: &mut Universe, g: GameId) -> Option<TraceStep> {
    let node = store.node(g);
    let (left, right) = (node.left().to_vec(), node.right().to_vec());
    let (sl, sr) = (node.has_sigma_left(), node.has_sigma_right());
    if sl {
        let erased = store.intern(&left, &right, false, sr);
        if universe.is_left_strong(store, erased) {
            return Some(TraceStep {
                before: g,
                after: erased,
                action: StepAction::EraseSigma { side: Player::Left },
            });
        }
    }
    if sr {
        let erased = store.intern(&left, &right, sl, false);
        if universe.is_right_strong(store, erased) {
            return Some(TraceStep {
                before: g,
                after: erased,
                action: StepAction::EraseSigma {
                    side: Player::Right,
                },
            });
        }
    }
    None
}

/// Single-step operations over the top node only; each applies the first
/// rewrite of its kind in deterministic scan order, or reports that the
/// hypothesis is not satisfied.
pub fn bypass_ordinary_reversible(
    store: &mut Store,
    universe: &mut Universe,
    g: GameId,
) -> StepResult {
    match find_bypass(store, universe, g) {
        Some(s) => StepResult::Applied(s),
        None => StepResult::NotApplicable,
    }
}

pub fn eliminate_dominated(store: &mut Store, universe: &mut Universe, g: GameId) -> StepResult {
    match find_dominated(store, universe, g) {
        Some(s) => StepResult::Applied(s),
        None => StepResult::NotApplicable,
    }
}

pub fn replace_atomic_reversible(
    store: &mut Store,
    universe: &mut Universe,
    g: GameId,
) -> StepResult {
    match find_atomic(store, universe, g) {
        Some(s) => StepResult::Applied(s),
        None => StepResult::NotApplicable,
    }
}

pub fn erase_sigma(store: &mut Store, universe: &mut Universe, g: GameId) -> StepResult {
    match find_erasure(store, universe, g) {
        Some(s) => StepResult::Applied(s),
        None => StepResult::NotApplicable,
    }
}

/// Do all subpositions lack dominated options, reversible options, and
/// erasable tombstones?
pub fn is_simplest_form(store: &mut Store, universe: &mut Universe, g: GameId) -> bool {
    if let Some(&b) = universe.simplest_check.get(&g) {
        return b;
    }
    let node = store.node(g);
    let mut options = node.left().to_vec();
    options.extend_from_slice(node.right());
    let mut result = options
        .into_iter()
        .all(|o| is_simplest_form(store, universe, o));
    if result {
        result = find_bypass(store, universe, g).is_none()
            && find_atomic(store, universe, g).is_none()
            && find_dominated(store, universe, g).is_none()
            && find_erasure(store, universe, g).is_none();
    }
    universe.simplest_check.insert(g, result);
    result
}
