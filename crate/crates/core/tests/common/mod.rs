#![allow(dead_code)]

use std::path::{Path, PathBuf};

use riesz_dstat::cert::CheckOptions;
use riesz_dstat::spec::{parse_spec, run, RunOptions};

pub fn spec_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Shipped spec files, sorted by name.
pub fn spec_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(spec_dir())
        .expect("specs directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "spec"))
        .collect();
    out.sort();
    out
}

/// Options the golden reports were recorded with.
pub fn golden_options(jobs: usize) -> RunOptions {
    RunOptions {
        check: CheckOptions {
            prefix_n: 2_000,
            ..CheckOptions::default()
        },
        seed: 0,
        jobs,
        timings: false,
    }
}

pub fn render(path: &Path, jobs: usize) -> String {
    let text = std::fs::read_to_string(path).expect("readable spec");
    let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    run(&spec, &golden_options(jobs)).render()
}

pub fn golden_path(spec: &Path) -> PathBuf {
    let stem = spec.file_stem().expect("file name").to_string_lossy().into_owned();
    golden_dir().join(format!("{stem}.json"))
}
