use std::io::Write;

fn main() {
    let (code, stdout, stderr) = misere_cli::run(std::env::args());
    if !stdout.is_empty() {
        print!("{stdout}");
    }
    if !stderr.is_empty() {
        let _ = write!(std::io::stderr(), "{stderr}");
    }
    std::process::exit(code);
}
