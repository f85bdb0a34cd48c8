//! Shipped spec files against their recorded reports.
//! Set `UPDATE_GOLDEN=1` to re-record.

mod common;

use riesz_dstat::spec::parse_spec;

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let files = common::spec_files();
    assert!(files.len() >= 6, "expected the shipped spec files");
    for spec in files {
        let report = common::render(&spec, 1);
        let golden = common::golden_path(&spec);
        if update {
            std::fs::write(&golden, &report).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&golden)
            .unwrap_or_else(|_| panic!("missing {}; rerun with UPDATE_GOLDEN=1", golden.display()));
        assert!(report == expected, "{} differs from {}", spec.display(), golden.display());
    }
}

#[test]
fn parallel_runs_are_byte_identical() {
    for spec in common::spec_files() {
        let serial = common::render(&spec, 1);
        assert_eq!(serial, common::render(&spec, 4), "{}", spec.display());
        assert_eq!(serial, common::render(&spec, 0), "{}", spec.display());
    }
}

#[test]
fn spec_files_round_trip() {
    for path in common::spec_files() {
        let spec = parse_spec(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = parse_spec(&spec.to_string()).unwrap();
        assert_eq!(spec, again, "{}", path.display());
    }
}
