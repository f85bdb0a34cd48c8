//! Parse a spec document, run it, and print the JSON report.
//!
//! `cargo run --example spec_report -- path/to/file.spec` runs a file
//! instead of the inline document.

use riesz_dstat::spec::{parse_spec, run, RunOptions};

const DOC: &str = "\
SPACE 2
PAIR p: 0 q: n
SEQ z = (0, n^2) if POW(3); (0, 1/n^2)
CERT dec = decrease z=z k=NOT(POW(3))
TASK cubes = density set=POW(3)
TASK dec = check cert=dec
TASK bad = validate p=4n q=2n
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable spec"),
        None => DOC.to_string(),
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    print!("{spec}");
    let report = run(&spec, &RunOptions::default());
    print!("{}", report.render());
    eprintln!("exit code would be {}", report.exit_code());
}
