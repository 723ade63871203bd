//! Command-line surface over the engine: evaluation, comparison,
//! simplification, test sets, dead-end lattices, censuses, and board
//! rulesets.
//!
//! Exit codes: 0 success, 2 unparseable input, 3 unsupported universe,
//! 4 bound exceeded.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use misere_core::census::census;
use misere_core::compare::compare;
use misere_core::deadend;
use misere_core::notation::{parse, render};
use misere_core::ruleset::{clobber_value, domineering_value, BoardCache, Grid};
use misere_core::simplest::{simplest_form, simplest_form_traced};
use misere_core::store::{GameId, Limits, Store};
use misere_core::universe::Universe;
use misere_core::Error;

#[derive(Parser)]
#[command(name = "misere", version, about = "Misère partizan game calculator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a game expression.
    Eval {
        #[arg(allow_hyphen_values = true)]
        game: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare two games relative to a universe.
    Compare {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[command(flatten)]
        universe: UniverseArg,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a game to its simplest form relative to a universe.
    Simplify {
        #[arg(allow_hyphen_values = true)]
        game: String,
        #[command(flatten)]
        universe: UniverseArg,
        /// Include the step-by-step reduction trace.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the strongness test set of a universe at a given birthday.
    Testset {
        birthday: u32,
        #[command(flatten)]
        universe: UniverseArg,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the poset of dead-end values born by a given day.
    Lattice {
        level: u32,
        /// Emit the diagram as Graphviz instead of text.
        #[arg(long)]
        dot: bool,
        /// Highest level that may be enumerated.
        #[arg(long, default_value_t = 5)]
        bound: u32,
        #[arg(long)]
        json: bool,
    },
    /// Count game trees and distinct values born by a day.
    Census {
        day: u32,
        #[command(flatten)]
        universe: UniverseArg,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a Domineering board ('.' empty, '#' blocked).
    Domineering {
        board: String,
        #[command(flatten)]
        universe: OptionalUniverseArg,
        #[command(flatten)]
        board_opts: BoardOpts,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a Clobber board ('x', 'o', '.').
    Clobber {
        board: String,
        #[command(flatten)]
        universe: OptionalUniverseArg,
        #[command(flatten)]
        board_opts: BoardOpts,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct UniverseArg {
    /// Universe: "D" | "E" | "D(-1)" | "D(-1:0)" | "gen:<game>[,<game>...]".
    #[arg(long)]
    universe: String,
}

#[derive(Args)]
struct OptionalUniverseArg {
    /// Universe: "D" | "E" | "D(-1)" | "D(-1:0)" | "gen:<game>[,<game>...]".
    #[arg(long)]
    universe: Option<String>,
}

#[derive(Args)]
struct BoardOpts {
    /// Reduce the board value to simplest form (needs --universe).
    #[arg(long)]
    simplify: bool,
    /// Conjugate the result (swap the players).
    #[arg(long)]
    swap: bool,
    /// Maximum number of board cells.
    #[arg(long, default_value_t = 64)]
    bound: usize,
}

/// Runs the CLI against explicit arguments, returning the exit code and
/// the two output streams. `main` is a thin wrapper over this.
pub fn run<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout and succeed.
            if e.use_stderr() {
                return (2, String::new(), e.to_string());
            }
            return (0, e.to_string(), String::new());
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(cli)));
    match outcome {
        Ok(Ok(output)) => (0, output, String::new()),
        Ok(Err(err)) => (exit_code(&err), String::new(), format!("error: {}\n", err)),
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "engine panic".to_string());
            if message.contains("limit exceeded") {
                (4, String::new(), format!("error: {}\n", message))
            } else {
                std::panic::resume_unwind(payload)
            }
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::TombstonedInput { .. }
        | Error::NotALeftDeadEnd { .. }
        | Error::EmptyGame { .. } => 2,
        Error::UnsupportedUniverse { .. } => 3,
        Error::BoundExceeded { .. } => 4,
    }
}

fn store_from_env() -> Store {
    let mut limits = Limits::default();
    if let Some(n) = env_number("MISERE_MAX_NODES") {
        limits.max_nodes = n as usize;
    }
    if let Some(n) = env_number("MISERE_MAX_HEIGHT") {
        limits.max_height = n as u32;
    }
    Store::with_limits(limits)
}

fn env_number(key: &str) -> Option<u64> {
    std::env::var(key).ok()?.trim().parse().ok()
}

fn parse_universe(store: &mut Store, text: &str) -> Result<Universe, Error> {
    match text {
        "D" => return Ok(Universe::dicots()),
        "E" => return Ok(Universe::dead_ending()),
        "D(-1)" => {
            let m1 = store.integer(-1);
            return Universe::generated(store, &[m1]);
        }
        "D(-1:0)" => {
            let m1 = store.integer(-1);
            let obz = store.intern(&[], &[GameId::ZERO, m1], false, false);
            return Universe::generated(store, &[obz]);
        }
        _ => {}
    }
    if let Some(rest) = text.strip_prefix("gen:") {
        let mut generators = Vec::new();
        for part in split_top_level(rest) {
            generators.push(parse(store, part)?);
        }
        return Universe::generated(store, &generators);
    }
    Err(Error::UnsupportedUniverse {
        message: format!("unrecognized universe '{}'", text),
    })
}

/// Splits on commas that are not nested inside brackets.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '{' | '(' => depth += 1,
            '}' | ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn execute(cli: Cli) -> Result<String, Error> {
    let mut store = store_from_env();
    match cli.command {
        Command::Eval { game, json } => {
            let g = parse(&mut store, &game)?;
            let outcome = store.outcome_class(g);
            if json {
                Ok(pretty(&json!({
                    "game": render(&store, g),
                    "outcome": outcome.to_string(),
                    "birthday": store.formal_birthday(g),
                    "edges": store.edge_count(g).to_string(),
                })))
            } else {
                Ok(format!("outcome: {}\n", outcome))
            }
        }
        Command::Compare {
            left,
            right,
            universe,
            json,
        } => {
            let mut u = parse_universe(&mut store, &universe.universe)?;
            let g = parse(&mut store, &left)?;
            let h = parse(&mut store, &right)?;
            let relation = compare(&mut store, &mut u, g, h);
            if json {
                Ok(pretty(&json!({
                    "left": render(&store, g),
                    "right": render(&store, h),
                    "universe": u.label(),
                    "relation": relation.to_string(),
                })))
            } else {
                Ok(format!("{}\n", relation))
            }
        }
        Command::Simplify {
            game,
            universe,
            explain,
            json,
        } => {
            let mut u = parse_universe(&mut store, &universe.universe)?;
            let g = parse(&mut store, &game)?;
            if explain || json {
                let (s, trace) = simplest_form_traced(&mut store, &mut u, g);
                if json {
                    let mut body = json!({
                        "input": render(&store, g),
                        "universe": u.label(),
                        "simplest": render(&store, s),
                        "outcome": store.outcome_class(s).to_string(),
                        "edges": store.edge_count(s).to_string(),
                    });
                    if explain {
                        body["trace"] = trace.to_json(&store);
                    }
                    Ok(pretty(&body))
                } else {
                    let mut out = format!("{}\n", render(&store, s));
                    out.push_str(&pretty(&trace.to_json(&store)));
                    Ok(out)
                }
            } else {
                let s = simplest_form(&mut store, &mut u, g);
                Ok(format!("{}\n", render(&store, s)))
            }
        }
        Command::Testset {
            birthday,
            universe,
            json,
        } => {
            let mut u = parse_universe(&mut store, &universe.universe)?;
            let elements = u.test_set(&mut store, birthday);
            let rendered: Vec<String> = elements.iter().map(|&e| render(&store, e)).collect();
            if json {
                Ok(pretty(&json!({
                    "universe": u.label(),
                    "birthday": birthday,
                    "elements": rendered,
                })))
            } else {
                Ok(rendered.join("\n") + "\n")
            }
        }
        Command::Lattice {
            level,
            dot,
            bound,
            json,
        } => {
            let poset = deadend::enumerate_level(&mut store, level, bound)?;
            if dot {
                return deadend::hasse_dot(&store, &poset);
            }
            if json {
                let elements: Vec<String> = if poset.len() <= 4096 {
                    poset.elements().iter().map(|&e| render(&store, e)).collect()
                } else {
                    Vec::new()
                };
                return Ok(pretty(&json!({
                    "level": level,
                    "size": poset.len(),
                    "elements": elements,
                })));
            }
            let mut out = format!("|L_{}| = {}\n", level, poset.len());
            if poset.len() <= 64 {
                for &e in poset.elements() {
                    out.push_str(&render(&store, e));
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Command::Census { day, universe, json } => {
            let mut u = parse_universe(&mut store, &universe.universe)?;
            let c = census(&mut store, &mut u, day)?;
            if json {
                Ok(pretty(&c.to_json(&store)))
            } else {
                Ok(format!(
                    "universe: {}\nday: {}\ntrees: {}\ndistinct: {}\n",
                    c.universe, c.day, c.tree_count, c.distinct_count
                ))
            }
        }
        Command::Domineering {
            board,
            universe,
            board_opts,
            json,
        } => {
            let grid = Grid::parse(&board)?;
            let mut cache = BoardCache::new();
            let value = domineering_value(&mut store, &mut cache, &grid, board_opts.bound)?;
            board_report(&mut store, value, universe, board_opts, json)
        }
        Command::Clobber {
            board,
            universe,
            board_opts,
            json,
        } => {
            let grid = Grid::parse(&board)?;
            let mut cache = BoardCache::new();
            let value = clobber_value(&mut store, &mut cache, &grid, board_opts.bound)?;
            board_report(&mut store, value, universe, board_opts, json)
        }
    }
}

fn board_report(
    store: &mut Store,
    value: GameId,
    universe: OptionalUniverseArg,
    opts: BoardOpts,
    json: bool,
) -> Result<String, Error> {
    let value = if opts.swap {
        store.conjugate(value)
    } else {
        value
    };
    let mut simplified = None;
    if opts.simplify {
        let label = universe.universe.as_deref().ok_or(Error::UnsupportedUniverse {
            message: "--simplify needs --universe".to_string(),
        })?;
        let mut u = parse_universe(store, label)?;
        simplified = Some(simplest_form(store, &mut u, value));
    }
    let outcome = store.outcome_class(value);
    if json {
        let mut body = json!({
            "outcome": outcome.to_string(),
            "birthday": store.formal_birthday(value),
            "edges": store.edge_count(value).to_string(),
        });
        if let Some(s) = simplified {
            body["simplest"] = Value::String(render(store, s));
            body["simplestEdges"] = Value::String(store.edge_count(s).to_string());
        }
        return Ok(pretty(&body));
    }
    let mut out = format!(
        "outcome: {}\nbirthday: {}\nedges: {}\n",
        outcome,
        store.formal_birthday(value),
        store.edge_count(value)
    );
    if let Some(s) = simplified {
        out.push_str(&format!(
            "simplest: {}\nsimplest edges: {}\n",
            render(store, s),
            store.edge_count(s)
        ));
    }
    Ok(out)
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
