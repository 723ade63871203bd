//! The absolute structure of Left dead-ends.
//!
//! Left dead-ends compare the same way in every universe that contains
//! them, so their order, canonical forms, and lattice structure are
//! universe-independent and live apart from the comparison machinery.

use rustc_hash::FxHashMap;

use crate::notation;
use crate::store::{GameId, Store};
use crate::{Error, Result};

fn require_dead_end(store: &Store, g: GameId, op: &'static str) -> Result<()> {
    if store.is_left_dead_end(g) {
        Ok(())
    } else {
        Err(Error::NotALeftDeadEnd { op })
    }
}

/// The absolute order on Left dead-ends: `g >= h` iff every Right option
/// of `g` is `>=` some Right option of `h`, and `g` is empty only if `h`
/// is.
pub fn geq(store: &mut Store, g: GameId, h: GameId) -> Result<bool> {
    require_dead_end(store, g, "dead-end comparison")?;
    require_dead_end(store, h, "dead-end comparison")?;
    Ok(geq_rec(store, g, h))
}

fn geq_rec(store: &mut Store, g: GameId, h: GameId) -> bool {
    if g == h {
        return true;
    }
    if g == GameId::ZERO || h == GameId::ZERO {
        // Distinct, and 0 is incomparable with every nonempty dead-end.
        return false;
    }
    if let Some(&r) = store.de_geq_memo.get(&(g, h)) {
        return r;
    }
    let grs = store.right_options(g).to_vec();
    let hrs = store.right_options(h).to_vec();
    let result = grs
        .iter()
        .all(|&gr| hrs.iter().any(|&hr| geq_rec(store, gr, hr)));
    store.de_geq_memo.insert((g, h), result);
    result
}

/// Canonical form of a Left dead-end: recursively removes every Right
/// option that is `>=` another one. Equal dead-ends map to the same id.
pub fn canonical(store: &mut Store, g: GameId) -> Result<GameId> {
    require_dead_end(store, g, "dead-end canonical form")?;
    Ok(canonical_rec(store, g))
}

fn canonical_rec(store: &mut Store, g: GameId) -> GameId {
    if g == GameId::ZERO {
        return g;
    }
    if let Some(&c) = store.de_canonical_memo.get(&g) {
        return c;
    }
    let mut options: Vec<GameId> = store
        .right_options(g)
        .to_vec()
        .into_iter()
        .map(|r| canonical_rec(store, r))
        .collect();
    options.sort_unstable();
    options.dedup();
    // Distinct canonical forms are never equal, so `>=` here is strict
    // domination; Right keeps the minimal options.
    let mut kept = Vec::with_capacity(options.len());
    for &r in &options {
        let dominated = options.iter().any(|&other| other != r && geq_rec(store, r, other));
        if !dominated {
            kept.push(r);
        }
    }
    let c = store.intern(&[], &kept, false, false);
    store.de_canonical_memo.insert(g, c);
    if c != g {
        store.de_canonical_memo.insert(c, c);
    }
    c
}

/// A Left dead-end is terminable when `0` is a Right option of its
/// canonical form. Terminability is invariant across forms of a value.
pub fn is_terminable(store: &mut Store, g: GameId) -> Result<bool> {
    let c = canonical(store, g)?;
    Ok(store.right_options(c).contains(&GameId::ZERO))
}

/// Birthday of a Left dead-end value: the height of its canonical form.
pub fn birthday(store: &mut Store, g: GameId) -> Result<u32> {
    let c = canonical(store, g)?;
    Ok(store.formal_birthday(c))
}

/// Meet in the dead-end order: pool the Right options and canonicalize.
/// Defined for nonempty Left dead-ends.
pub fn meet(store: &mut Store, g: GameId, h: GameId) -> Result<GameId> {
    require_dead_end(store, g, "dead-end meet")?;
    require_dead_end(store, h, "dead-end meet")?;
    if g == GameId::ZERO || h == GameId::ZERO {
        return Err(Error::EmptyGame { op: "dead-end meet" });
    }
    let mut options = store.right_options(g).to_vec();
    options.extend_from_slice(store.right_options(h));
    let pooled = store.intern(&[], &options, false, false);
    canonical(store, pooled)
}

/// Join in the dead-end order, relative to the poset of values one level
/// down: the form over the intersection of the options' upward closures,
/// or `None` when that intersection is empty (the adjoined top).
pub fn join(
    store: &mut Store,
    below: &DeadEndPoset,
    g: GameId,
    h: GameId,
) -> Result<Option<GameId>> {
    require_dead_end(store, g, "dead-end join")?;
    require_dead_end(store, h, "dead-end join")?;
    if g == GameId::ZERO || h == GameId::ZERO {
        return Err(Error::EmptyGame { op: "dead-end join" });
    }
    let gm = upward_option_mask(store, below, g)?;
    let hm = upward_option_mask(store, below, h)?;
    let common = gm & hm;
    if common == 0 {
        return Ok(None);
    }
    let options: Vec<GameId> = below
        .elements
        .iter()
        .enumerate()
        .filter(|(i, _)| common >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    let pooled = store.intern(&[], &options, false, false);
    Ok(Some(canonical(store, pooled)?))
}

/// Mask over `below.elements` of everything `>=` some Right option.
fn upward_option_mask(store: &mut Store, below: &DeadEndPoset, g: GameId) -> Result<u64> {
    if below.len() > 64 {
        return Err(Error::BoundExceeded {
            message: format!("join over a level of {} elements", below.len()),
        });
    }
    let mut mask = 0u64;
    for &r in &store.right_options(g).to_vec() {
        let rc = canonical(store, r)?;
        let i = below.position(rc).ok_or_else(|| Error::BoundExceeded {
            message: format!(
                "option {} is not in the level-{} poset",
                notation::render(store, rc),
                below.level
            ),
        })?;
        mask |= below.upset_in_level(i);
    }
    Ok(mask)
}

/// The poset of Left dead-end values of birthday at most `level`.
///
/// Every element is canonical; the order between nonzero elements is
/// containment of the upward closures (one level down) of their option
/// sets, and `0` is an isolated point.
pub struct DeadEndPoset {
    level: u32,
    elements: Vec<GameId>,
    /// For each nonzero element, the upward closure of its Right-option
    /// set as a mask over the previous level's `elements`.
    option_upsets: Vec<u64>,
    index: FxHashMap<GameId, usize>,
    /// Order over this level's own elements, one mask per element; filled
    /// lazily since it is only needed to build the next level or to walk
    /// covers.
    upsets: Vec<u64>,
}

impl DeadEndPoset {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn elements(&self) -> &[GameId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, g: GameId) -> Option<usize> {
        self.index.get(&g).copied()
    }

    /// Order between elements by index: does element `i` lie above `j`?
    pub fn geq_idx(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        let (zi, zj) = (self.elements[i] == GameId::ZERO, self.elements[j] == GameId::ZERO);
        if zi || zj {
            return false;
        }
        self.option_upsets[i] & !self.option_upsets[j] == 0
    }

    pub fn geq(&self, g: GameId, h: GameId) -> Option<bool> {
        Some(self.geq_idx(self.position(g)?, self.position(h)?))
    }

    /// Mask of elements of this level lying at or above element `i`.
    fn upset_in_level(&self, i: usize) -> u64 {
        self.upsets[i]
    }

    /// Indices of the maximal nonzero elements.
    pub fn maximal(&self) -> Vec<usize> {
        self.nonzero_filter(|poset, i| {
            !(0..poset.len()).any(|j| {
                j != i && poset.elements[j] != GameId::ZERO && poset.geq_idx(j, i) && !poset.geq_idx(i, j)
            })
        })
    }

    /// Indices of the minimal nonzero elements.
    pub fn minimal(&self) -> Vec<usize> {
        self.nonzero_filter(|poset, i| {
            !(0..poset.len()).any(|j| {
                j != i && poset.elements[j] != GameId::ZERO && poset.geq_idx(i, j) && !poset.geq_idx(j, i)
            })
        })
    }

    fn nonzero_filter(&self, keep: impl Fn(&DeadEndPoset, usize) -> bool) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.elements[i] != GameId::ZERO && keep(self, i))
            .collect()
    }

    /// Covering pairs `(upper, lower)` among the nonzero elements.
    pub fn cover_edges(&self) -> Result<Vec<(usize, usize)>> {
        if self.len() > 1_000 {
            return Err(Error::BoundExceeded {
                message: format!("cover relation over {} elements", self.len()),
            });
        }
        let mut covers = Vec::new();
        let nonzero: Vec<usize> = (0..self.len())
            .filter(|&i| self.elements[i] != GameId::ZERO)
            .collect();
        for &i in &nonzero {
            for &j in &nonzero {
                if i == j || !self.geq_idx(i, j) || self.geq_idx(j, i) {
                    continue;
                }
                let between = nonzero.iter().any(|&k| {
                    k != i
                        && k != j
                        && self.geq_idx(i, k)
                        && !self.geq_idx(k, i)
                        && self.geq_idx(k, j)
                        && !self.geq_idx(j, k)
                });
                if !between {
                    covers.push((i, j));
                }
            }
        }
        Ok(covers)
    }
}

/// Builds the poset of Left dead-end values born by day `n`. Level `k+1`
/// is assembled from the antichains of level `k`, so each level's size is
/// the antichain count of the one before.
pub fn enumerate_level(store: &mut Store, n: u32, max_level: u32) -> Result<DeadEndPoset> {
    if n > max_level {
        return Err(Error::BoundExceeded {
            message: format!("dead-end level {} (limit {})", n, max_level),
        });
    }
    let mut poset = DeadEndPoset {
        level: 0,
        elements: vec![GameId::ZERO],
        option_upsets: vec![0],
        index: FxHashMap::from_iter([(GameId::ZERO, 0)]),
        upsets: vec![1],
    };
    for level in 1..=n {
        poset = next_level(store, &poset, level);
    }
    Ok(poset)
}

fn next_level(store: &mut Store, prev: &DeadEndPoset, level: u32) -> DeadEndPoset {
    assert!(prev.len() <= 64, "level too large for mask representation");
    // Comparability masks drive the antichain walk.
    let m = prev.len();
    let mut comparable = vec![0u64; m];
    for (i, mask) in comparable.iter_mut().enumerate() {
        for j in 0..m {
            if prev.geq_idx(i, j) || prev.geq_idx(j, i) {
                *mask |= 1 << j;
            }
        }
    }
    let mut antichains = Vec::new();
    collect_antichains(&comparable, m, 0, (0, 0), &mut antichains);
    antichains.sort_unstable();
    antichains.dedup();

    let mut elements = Vec::with_capacity(antichains.len());
    let mut option_upsets = Vec::with_capacity(antichains.len());
    let mut index = FxHashMap::default();
    for &chosen in &antichains {
        let options: Vec<GameId> = (0..m)
            .filter(|&i| chosen >> i & 1 == 1)
            .map(|i| prev.elements[i])
            .collect();
        let id = store.intern(&[], &options, false, false);
        let mut upset = 0u64;
        for i in 0..m {
            if chosen >> i & 1 == 1 {
                upset |= prev.upset_in_level(i);
            }
        }
        index.insert(id, elements.len());
        elements.push(id);
        option_upsets.push(upset);
    }

    // Order masks over this level, used when building the next one.
    let count = elements.len();
    let mut upsets = vec![0u64; count];
    if count <= 64 {
        for i in 0..count {
            for j in 0..count {
                let above = if elements[j] == GameId::ZERO || elements[i] == GameId::ZERO {
                    i == j
                } else {
                    option_upsets[j] & !option_upsets[i] == 0
                };
                if above {
                    upsets[i] |= 1 << j;
                }
            }
        }
    }

    DeadEndPoset {
        level,
        elements,
        option_upsets,
        index,
        upsets,
    }
}

fn collect_antichains(comparable: &[u64], m: usize, i: usize, state: (u64, u64), out: &mut Vec<u64>) {
    let (chosen, blocked) = state;
    if i == m {
        out.push(chosen);
        return;
    }
    collect_antichains(comparable, m, i + 1, (chosen, blocked), out);
    if blocked >> i & 1 == 0 {
        collect_antichains(
            comparable,
            m,
            i + 1,
            (chosen | 1 << i, blocked | comparable[i]),
            out,
        );
    }
}

/// Graphviz rendering of the cover relation, nonzero elements only.
pub fn hasse_dot(store: &Store, poset: &DeadEndPoset) -> Result<String> {
    let covers = poset.cover_edges()?;
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for (i, &e) in poset.elements().iter().enumerate() {
        if e == GameId::ZERO {
            continue;
        }
        out.push_str(&format!("  n{} [label=\"{}\"];\n", i, notation::render(store, e)));
    }
    for (upper, lower) in covers {
        out.push_str(&format!("  n{} -> n{};\n", lower, upper));
    }
    out.push_str("}\n");
    Ok(out)
}
