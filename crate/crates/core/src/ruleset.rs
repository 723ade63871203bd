//! Board-game front ends: Domineering and Clobber positions as game forms.
//!
//! Boards are decomposed into connected components before recursion and the
//! component values summed through the kernel; per-component results are
//! memoized under translation-normalized keys (no symmetry reduction).

use rustc_hash::FxHashMap;

use crate::deadend;
use crate::store::{GameId, Store};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cell {
    Empty,
    Blocked,
    X,
    O,
}

/// A rectangular board. Domineering uses `.` (empty) and `#` (blocked);
/// Clobber uses `x`, `o`, and `.`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl Grid {
    /// Parses a `|`-separated row list. Rows must agree in length.
    pub fn parse(text: &str) -> Result<Grid> {
        let mut rows: Vec<Vec<Cell>> = vec![Vec::new()];
        for (pos, ch) in text.char_indices() {
            match ch {
                '|' => rows.push(Vec::new()),
                '.' => rows.last_mut().unwrap().push(Cell::Empty),
                '#' => rows.last_mut().unwrap().push(Cell::Blocked),
                'x' => rows.last_mut().unwrap().push(Cell::X),
                'o' => rows.last_mut().unwrap().push(Cell::O),
                c if c.is_whitespace() => {}
                _ => {
                    return Err(Error::Parse {
                        pos,
                        message: format!("unexpected board character '{}'", ch),
                    })
                }
            }
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::Parse {
                pos: 0,
                message: "empty board".to_string(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse {
                    pos: i,
                    message: format!("ragged row {} (expected {} cells)", i, cols),
                });
            }
        }
        let cells = rows.concat();
        Ok(Grid {
            rows: rows.len(),
            cols,
            cells,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.cols + c]
    }

    /// A 1×n empty Domineering strip.
    pub fn strip(n: usize) -> Grid {
        Grid {
            rows: 1,
            cols: n.max(1),
            cells: vec![if n == 0 { Cell::Blocked } else { Cell::Empty }; n.max(1)],
        }
    }

    /// An r×c empty Domineering rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Grid {
        Grid {
            rows,
            cols,
            cells: vec![Cell::Empty; rows * cols],
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "|")?;
            }
            for c in 0..self.cols {
                let ch = match self.cell(r, c) {
                    Cell::Empty => '.',
                    Cell::Blocked => '#',
                    Cell::X => 'x',
                    Cell::O => 'o',
                };
                write!(f, "{}", ch)?;
            }
        }
        Ok(())
    }
}

/// A translation-normalized component: cell masks over an `h`×`w`
/// bounding box, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct CompKey {
    h: u8,
    w: u8,
    a: u64,
    b: u64,
}

/// Transposition tables for board evaluation.
#[derive(Default)]
pub struct BoardCache {
    domineering: FxHashMap<CompKey, GameId>,
    clobber: FxHashMap<CompKey, GameId>,
}

impl BoardCache {
    pub fn new() -> BoardCache {
        BoardCache::default()
    }
}

/// Game form of a Domineering position: Left places vertical dominoes,
/// Right horizontal ones.
pub fn domineering_value(
    store: &mut Store,
    cache: &mut BoardCache,
    grid: &Grid,
    max_cells: usize,
) -> Result<GameId> {
    if grid.rows * grid.cols > max_cells {
        return Err(Error::BoundExceeded {
            message: format!(
                "board has {} cells (limit {})",
                grid.rows * grid.cols,
                max_cells
            ),
        });
    }
    let mut empties = Vec::new();
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            match grid.cell(r, c) {
                Cell::Empty => empties.push((r as i32, c as i32)),
                Cell::Blocked => {}
                _ => {
                    return Err(Error::Parse {
                        pos: 0,
                        message: "domineering boards use only '.' and '#'".to_string(),
                    })
                }
            }
        }
    }
    let parts: Vec<GameId> = components(&empties)
        .into_iter()
        .map(|comp| dom_component(store, cache, normalize(&comp, &[])))
        .collect();
    Ok(store.sum_all(&parts))
}

fn dom_component(store: &mut Store, cache: &mut BoardCache, key: CompKey) -> GameId {
    if let Some(&v) = cache.domineering.get(&key) {
        return v;
    }
    let (h, w, mask) = (key.h as usize, key.w as usize, key.a);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let bit = 1u64 << (r * w + c);
            if mask & bit == 0 {
                continue;
            }
            // Vertical placement (Left).
            if r + 1 < h {
                let below = 1u64 << ((r + 1) * w + c);
                if mask & below != 0 {
                    left.push(subposition(store, cache, h, w, mask & !(bit | below)));
                }
            }
            // Horizontal placement (Right).
            if c + 1 < w {
                let beside = 1u64 << (r * w + c + 1);
                if mask & beside != 0 {
                    right.push(subposition(store, cache, h, w, mask & !(bit | beside)));
                }
            }
        }
    }
    let value = store.intern(&left, &right, false, false);
    debug_assert!(store.is_dead_ending(value));
    cache.domineering.insert(key, value);
    value
}

fn subposition(store: &mut Store, cache: &mut BoardCache, h: usize, w: usize, mask: u64) -> GameId {
    let cells: Vec<(i32, i32)> = (0..h * w)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| ((i / w) as i32, (i % w) as i32))
        .collect();
    let parts: Vec<GameId> = components(&cells)
        .into_iter()
        .map(|comp| dom_component(store, cache, normalize(&comp, &[])))
        .collect();
    store.sum_all(&parts)
}

/// Closed-form value of the 1×n Domineering strip, as a canonical
/// dead-end: multiples of the two-move terminable end plus a short tail
/// by `n mod 6`.
pub fn domineering_strip_value(store: &mut Store, n: u32) -> GameId {
    let minus_one = store.integer(-1);
    let one_bar_zero = store.intern(&[], &[GameId::ZERO, minus_one], false, false);
    let sharp = store.intern(&[], &[one_bar_zero], false, false);
    let mut acc = GameId::ZERO;
    for _ in 0..n / 6 {
        acc = store.sum(acc, sharp);
    }
    let tail = match n % 6 {
        0 | 1 => GameId::ZERO,
        2 | 3 => minus_one,
        4 => one_bar_zero,
        _ => store.integer(-2),
    };
    let total = store.sum(acc, tail);
    deadend::canonical(store, total).expect("strip values are Left dead-ends")
}

/// Game form of a Clobber position: `x` pieces are Left's; a move takes
/// an orthogonally adjacent enemy piece and occupies its cell.
pub fn clobber_value(
    store: &mut Store,
    cache: &mut BoardCache,
    grid: &Grid,
    max_cells: usize,
) -> Result<GameId> {
    if grid.rows * grid.cols > max_cells {
        return Err(Error::BoundExceeded {
            message: format!(
                "board has {} cells (limit {})",
                grid.rows * grid.cols,
                max_cells
            ),
        });
    }
    let mut xs = Vec::new();
    let mut os = Vec::new();
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            match grid.cell(r, c) {
                Cell::X => xs.push((r as i32, c as i32)),
                Cell::O => os.push((r as i32, c as i32)),
                Cell::Empty => {}
                Cell::Blocked => {
                    return Err(Error::Parse {
                        pos: 0,
                        message: "clobber boards use only 'x', 'o', and '.'".to_string(),
                    })
                }
            }
        }
    }
    let value = clobber_position(store, cache, &xs, &os);
    debug_assert!(store.is_dicot(value));
    Ok(value)
}

fn clobber_position(
    store: &mut Store,
    cache: &mut BoardCache,
    xs: &[(i32, i32)],
    os: &[(i32, i32)],
) -> GameId {
    let mut occupied: Vec<(i32, i32)> = xs.iter().chain(os.iter()).copied().collect();
    occupied.sort_unstable();
    let parts: Vec<GameId> = components(&occupied)
        .into_iter()
        .map(|comp| {
            let key = normalize(
                &comp.iter().copied().filter(|p| xs.contains(p)).collect::<Vec<_>>(),
                &comp.iter().copied().filter(|p| os.contains(p)).collect::<Vec<_>>(),
            );
            clobber_component(store, cache, key)
        })
        .collect();
    store.sum_all(&parts)
}

fn clobber_component(store: &mut Store, cache: &mut BoardCache, key: CompKey) -> GameId {
    if let Some(&v) = cache.clobber.get(&key) {
        return v;
    }
    let (h, w) = (key.h as usize, key.w as usize);
    let (xmask, omask) = (key.a, key.b);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..h * w {
        let bit = 1u64 << i;
        let (r, c) = (i / w, i % w);
        for (dr, dc) in [(0i32, 1i32), (0, -1), (1, 0), (-1, 0)] {
            let (nr, nc) = (r as i32 + dr, c as i32 + dc);
            if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                continue;
            }
            let nbit = 1u64 << (nr as usize * w + nc as usize);
            if xmask & bit != 0 && omask & nbit != 0 {
                left.push(clobber_child(store, cache, h, w, (xmask & !bit) | nbit, omask & !nbit));
            }
            if omask & bit != 0 && xmask & nbit != 0 {
                right.push(clobber_child(store, cache, h, w, xmask & !nbit, (omask & !bit) | nbit));
            }
        }
    }
    let value = store.intern(&left, &right, false, false);
    cache.clobber.insert(key, value);
    value
}

fn clobber_child(
    store: &mut Store,
    cache: &mut BoardCache,
    h: usize,
    w: usize,
    xmask: u64,
    omask: u64,
) -> GameId {
    let xs: Vec<(i32, i32)> = (0..h * w)
        .filter(|i| xmask >> i & 1 == 1)
        .map(|i| ((i / w) as i32, (i % w) as i32))
        .collect();
    let os: Vec<(i32, i32)> = (0..h * w)
        .filter(|i| omask >> i & 1 == 1)
        .map(|i| ((i / w) as i32, (i % w) as i32))
        .collect();
    clobber_position(store, cache, &xs, &os)
}

/// Connected components under 4-adjacency.
fn components(cells: &[(i32, i32)]) -> Vec<Vec<(i32, i32)>> {
    let set: std::collections::HashSet<(i32, i32)> = cells.iter().copied().collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &start in cells {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some((r, c)) = stack.pop() {
            comp.push((r, c));
            for next in [(r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)] {
                if set.contains(&next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Translates cell sets to their bounding-box origin and packs them as
/// row-major masks.
fn normalize(a_cells: &[(i32, i32)], b_cells: &[(i32, i32)]) -> CompKey {
    let all: Vec<(i32, i32)> = a_cells.iter().chain(b_cells.iter()).copied().collect();
    let min_r = all.iter().map(|p| p.0).min().unwrap();
    let min_c = all.iter().map(|p| p.1).min().unwrap();
    let max_r = all.iter().map(|p| p.0).max().unwrap();
    let max_c = all.iter().map(|p| p.1).max().unwrap();
    let h = (max_r - min_r + 1) as usize;
    let w = (max_c - min_c + 1) as usize;
    assert!(h * w <= 64, "component bounding box too large");
    let pack = |cells: &[(i32, i32)]| {
        cells
            .iter()
            .map(|&(r, c)| 1u64 << ((r - min_r) as usize * w + (c - min_c) as usize))
            .fold(0u64, |m, b| m | b)
    };
    CompKey {
        h: h as u8,
        w: w as u8,
        a: pack(a_cells),
        b: pack(b_cells),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse;

    #[test]
    fn grid_parsing_round_trips() {
        for text in ["..|..", "xoxo|oxox|xox.", "..#|...", "...."] {
            let grid = Grid::parse(text).unwrap();
            assert_eq!(grid.to_string(), text);
        }
        let g = Grid::parse("xoxo|oxox|xox.").unwrap();
        assert_eq!((g.rows(), g.cols()), (3, 4));
        assert_eq!(g.cell(2, 3), Cell::Empty);
    }

    #[test]
    fn grid_parse_errors_carry_positions() {
        assert!(matches!(
            Grid::parse("..|.q"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(Grid::parse("..|...").is_err());
        assert!(Grid::parse("").is_err());
    }

    #[test]
    fn small_strips() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let d4 = domineering_value(&mut store, &mut cache, &Grid::strip(4), 64).unwrap();
        let c4 = deadend::canonical(&mut store, d4).unwrap();
        let expected = parse(&mut store, "{|-1,0}").unwrap();
        assert_eq!(c4, expected);

        let d5 = domineering_value(&mut store, &mut cache, &Grid::strip(5), 64).unwrap();
        let c5 = deadend::canonical(&mut store, d5).unwrap();
        assert_eq!(c5, store.integer(-2));
    }

    #[test]
    fn vertical_domino_is_one_move_for_left() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let grid = Grid::parse(".|.").unwrap();
        let v = domineering_value(&mut store, &mut cache, &grid, 64).unwrap();
        assert_eq!(v, store.integer(1));
    }

    #[test]
    fn strip_formula_small_cases() {
        let mut store = Store::new();
        assert_eq!(domineering_strip_value(&mut store, 0), GameId::ZERO);
        assert_eq!(domineering_strip_value(&mut store, 1), GameId::ZERO);
        let obz = parse(&mut store, "{|-1,0}").unwrap();
        assert_eq!(domineering_strip_value(&mut store, 4), obz);
        assert_eq!(domineering_strip_value(&mut store, 5), store.integer(-2));
        let sharp = parse(&mut store, "{|{|-1,0}}").unwrap();
        assert_eq!(domineering_strip_value(&mut store, 6), sharp);
    }

    #[test]
    fn blocked_cells_split_components() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let grid = Grid::parse("..#..").unwrap();
        let v = domineering_value(&mut store, &mut cache, &grid, 64).unwrap();
        let d2 = domineering_value(&mut store, &mut cache, &Grid::strip(2), 64).unwrap();
        let expected = store.sum(d2, d2);
        assert_eq!(v, expected);
    }

    #[test]
    fn clobber_basics() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let lone = clobber_value(&mut store, &mut cache, &Grid::parse("x").unwrap(), 64).unwrap();
        assert_eq!(lone, GameId::ZERO);
        let xo = clobber_value(&mut store, &mut cache, &Grid::parse("xo").unwrap(), 64).unwrap();
        assert_eq!(xo, store.star());
        let both = clobber_value(&mut store, &mut cache, &Grid::parse("x.o").unwrap(), 64).unwrap();
        assert_eq!(both, GameId::ZERO);
    }

    #[test]
    fn board_bound_is_enforced() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let grid = Grid::rectangle(3, 3);
        assert!(matches!(
            domineering_value(&mut store, &mut cache, &grid, 8),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn rulesets_reject_foreign_cells() {
        let mut store = Store::new();
        let mut cache = BoardCache::new();
        let clob = Grid::parse("xo").unwrap();
        assert!(domineering_value(&mut store, &mut cache, &clob, 64).is_err());
        let dom = Grid::parse(".#").unwrap();
        assert!(clobber_value(&mut store, &mut cache, &dom, 64).is_err());
    }
}
