//! End-to-end tests over the CLI surface: outputs, exit codes, notation
//! round-trips, and JSON-schema conformance.

use misere_cli::run;
use serde_json::Value;

fn misere(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["misere"];
    full.extend_from_slice(args);
    run(full)
}

fn stdout_of(args: &[&str]) -> String {
    let (code, out, err) = misere(args);
    assert_eq!(code, 0, "args {:?} failed: {}", args, err);
    out
}

#[test]
fn eval_outcomes() {
    assert_eq!(stdout_of(&["eval", "*"]), "outcome: P\n");
    assert_eq!(stdout_of(&["eval", "0"]), "outcome: N\n");
    assert_eq!(stdout_of(&["eval", "1"]), "outcome: R\n");
}

#[test]
fn compare_and_simplify_examples() {
    assert_eq!(
        stdout_of(&["compare", "{0,*|*}", "0", "--universe", "D"]),
        ">\n"
    );
    assert_eq!(
        stdout_of(&["simplify", "{0,*|*}", "--universe", "D"]),
        "{0,SL|*}\n"
    );
    assert_eq!(
        stdout_of(&["compare", "-1", "-2", "--universe", "E"]),
        "||\n"
    );
}

#[test]
fn domineering_strip_simplified() {
    let out = stdout_of(&[
        "domineering",
        "....",
        "--universe",
        "D(-1:0)",
        "--simplify",
    ]);
    assert!(out.contains("simplest: {|0,-1}"), "{out}");
    // The swap flag conjugates: the strip becomes a Right dead-end.
    let swapped = stdout_of(&["domineering", "....", "--swap"]);
    assert!(swapped.contains("outcome: R"), "{swapped}");
}

#[test]
fn clobber_star() {
    let out = stdout_of(&["clobber", "xo", "--universe", "D", "--simplify"]);
    assert!(out.contains("simplest: *"), "{out}");
}

#[test]
fn exit_codes() {
    let (code, _, _) = misere(&["eval", "zzz"]);
    assert_eq!(code, 2);
    let (code, _, _) = misere(&["compare", "0", "0", "--universe", "Q"]);
    assert_eq!(code, 3);
    let (code, _, _) = misere(&["census", "3", "--universe", "E"]);
    assert_eq!(code, 4);
    let (code, _, _) = misere(&["lattice", "6"]);
    assert_eq!(code, 4);
    let (code, _, _) = misere(&["domineering", "q"]);
    assert_eq!(code, 2);
    // Non-dead-ending generators are refused.
    let (code, _, err) = misere(&["compare", "0", "0", "--universe", "gen:{|*}"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn node_limit_exceeds_as_bound_error() {
    // Use the real binary so the env var cannot leak into parallel tests.
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_misere"))
        .args(["census", "2", "--universe", "E"])
        .env("MISERE_MAX_NODES", "4")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("limit"), "{stderr}");
}

#[test]
fn notation_round_trips_through_the_cli() {
    let corpus = [
        "0",
        "*",
        "-4",
        "7",
        "{|0,-1}",
        "{0,SL|*}",
        "{{0|*},*|SR}",
        "{+-1|0}",
        "{+-(*,1)|M(2)}",
        "{0,{0,-1|{|0,-1,-4,-5}}|0,-5}",
        "{ 0 , * | SR }",
    ];
    let printed_form = |text: &str| -> String {
        let out = stdout_of(&["eval", text, "--json"]);
        let value: Value = serde_json::from_str(&out).unwrap();
        value["game"].as_str().unwrap().to_string()
    };
    for text in corpus {
        // print(parse(s)) is a fixed point of print-after-parse.
        let once = printed_form(text);
        let twice = printed_form(&once);
        assert_eq!(once, twice, "round trip for {text}");
    }
    // Simplified output reparses to the same id, too.
    let out = stdout_of(&["simplify", "{0,*|*}", "--universe", "D"]);
    assert_eq!(printed_form(out.trim()), out.trim());
}

mod schema {
    use super::*;

    /// Minimal JSON-schema walker covering the subset the shipped schema
    /// uses: type, properties, required, items, enum, $ref into
    /// definitions.
    fn validate(root: &Value, schema: &Value, value: &Value, path: &str) {
        let schema = deref(root, schema);
        if let Some(options) = schema.get("enum").and_then(Value::as_array) {
            assert!(options.contains(value), "{path}: {value} not in enum");
            return;
        }
        match schema.get("type").and_then(Value::as_str) {
            Some("object") => {
                assert!(value.is_object(), "{path}: expected object");
                if let Some(required) = schema.get("required").and_then(Value::as_array) {
                    for key in required {
                        let key = key.as_str().unwrap();
                        assert!(
                            value.get(key).is_some(),
                            "{path}: missing required '{key}'"
                        );
                    }
                }
                if let Some(props) = schema.get("properties").and_then(Value::as_object) {
                    for (key, sub) in value.as_object().unwrap() {
                        if let Some(prop_schema) = props.get(key) {
                            validate(root, prop_schema, sub, &format!("{path}.{key}"));
                        }
                    }
                }
            }
            Some("array") => {
                let items = schema.get("items").expect("array schema has items");
                for (i, item) in value.as_array().expect("array").iter().enumerate() {
                    validate(root, items, item, &format!("{path}[{i}]"));
                }
            }
            Some("string") => assert!(value.is_string(), "{path}: expected string"),
            Some("integer") => assert!(value.is_i64() || value.is_u64(), "{path}: expected integer"),
            other => panic!("{path}: unhandled schema type {:?}", other),
        }
    }

    fn deref<'a>(root: &'a Value, schema: &'a Value) -> &'a Value {
        if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
            let name = reference.trim_start_matches("#/definitions/");
            return &root["definitions"][name];
        }
        schema
    }

    fn check(definition: &str, args: &[&str]) {
        let schema: Value =
            serde_json::from_str(include_str!("../schema/v1.json")).expect("schema parses");
        let out = stdout_of(args);
        let value: Value = serde_json::from_str(&out).expect("output is JSON");
        validate(&schema, &schema["definitions"][definition], &value, definition);
    }

    #[test]
    fn json_outputs_validate() {
        check("eval", &["eval", "{0,*|*}", "--json"]);
        check(
            "compare",
            &["compare", "{0,*|*}", "0", "--universe", "D", "--json"],
        );
        check(
            "simplify",
            &["simplify", "{0,*|*}", "--universe", "D", "--explain", "--json"],
        );
        check("testset", &["testset", "4", "--universe", "D(-1:0)", "--json"]);
        check("lattice", &["lattice", "3", "--json"]);
        check("census", &["census", "2", "--universe", "D", "--json"]);
        check(
            "board",
            &["domineering", "...|...", "--universe", "D(-1:0)", "--simplify", "--json"],
        );
        check("board", &["clobber", "xox|oxo", "--json"]);
    }

    #[test]
    fn trace_is_present_only_with_explain() {
        let out = stdout_of(&["simplify", "{0,*|*}", "--universe", "D", "--json"]);
        let value: Value = serde_json::from_str(&out).unwrap();
        assert!(value.get("trace").is_none());
        let out = stdout_of(&[
            "simplify", "{0,*|*}", "--universe", "D", "--explain", "--json",
        ]);
        let value: Value = serde_json::from_str(&out).unwrap();
        let steps = value["trace"]["steps"].as_array().unwrap();
        assert!(!steps.is_empty());
        assert_eq!(value["trace"]["output"], value["simplest"]);
    }
}

#[test]
fn lattice_dot_output() {
    let out = stdout_of(&["lattice", "2", "--dot"]);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 2);
}

#[test]
fn universe_list_parses_with_nested_commas() {
    let out = stdout_of(&[
        "simplify",
        "{0,{0,-1|{|0,-1,-4,-5}},{0,-1|{|0,-2,-3,-5}}|0,-5}",
        "--universe",
        "gen:{|0,-1,-4,-5},{|0,-2,-3,-5}",
    ]);
    assert_eq!(out, "{0,SL|0,-5}\n");
}

#[test]
fn explain_shows_the_tombstone_collapse() {
    let out = stdout_of(&[
        "simplify",
        "{0,{0,-1|{|0,-1,-4,-5}},{0,-1|{|0,-2,-3,-5}}|0,-5}",
        "--universe",
        "gen:{|0,-1,-4,-5},{|0,-2,-3,-5}",
        "--explain",
        "--json",
    ]);
    let value: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["simplest"], "{0,SL|0,-5}");
    let steps = value["trace"]["steps"].as_array().unwrap();
    let atomics = steps
        .iter()
        .filter(|s| s["action"] == "replace-atomic")
        .count();
    assert_eq!(atomics, 2, "both reversible options leave one tombstone");
}
