//! End-to-end gated-scenario path with synthetic data: a file-sourced group
//! (S4 on 4 points), an SLP-defined element, and an orbit check. Exercises
//! fetch, ingest, BSGS from files, and the gating transitions.

use classprod::report::Outcome;
use classprod::scenario::{load_scenario_str, run_scenario, RunOptions};

const SCENARIO: &str = r#"
id = "synthetic_s4"
title = "S4 from a generator file: transposition centralizer orbits"

[group]
source = "file"
file = "s4_gens.txt"
format = "cycles"
order = "24"
p = 2

[elements.x]
kind = "slp"
file = "s4_x.slp"

[elements.y]
kind = "slp"
file = "s4_y.slp"

[[checks]]
kind = "orbit_count_eq"
x = "x"
d = "y"
expected = 3

[[gated]]
file = "s4_gens.txt"

[[gated]]
file = "s4_x.slp"

[[gated]]
file = "s4_y.slp"
"#;

#[test]
fn ingested_group_scenario_runs_and_gates() {
    let dir = std::env::temp_dir().join(format!("classprod-ingest-test-{}", std::process::id()));
    let data = dir.join("data");
    std::fs::create_dir_all(&data).unwrap();
    // S4 = <(1,2), (1,2,3,4)>
    std::fs::write(data.join("s4_gens.txt"), "deg 4\n(1,2)\n(1,2,3,4)\n").unwrap();
    // x = the first generator (a transposition), y = x conjugated by the cycle
    std::fs::write(data.join("s4_x.slp"), "inp a\ninp b\noup a\n").unwrap();
    std::fs::write(data.join("s4_y.slp"), "inp a\ninp b\niv b c\nmu c a d\nmu d b e\noup e\n").unwrap();

    let spec = load_scenario_str(SCENARIO).unwrap();
    let opts = RunOptions {
        data_dir: data.clone(),
        cache_dir: Some(dir.join("cache")),
        ..RunOptions::default()
    };
    let report = run_scenario(&spec, &opts);
    assert_eq!(
        report.outcome,
        Outcome::Pass,
        "checks: {:?}",
        report.checks
    );
    // the centralizer of (1,2) in S4 has orbits {(1,2)}, {(3,4)} and the
    // four transpositions moving one point of each block
    assert!(report.checks[0].actual.contains("3 orbits"));

    // same scenario with the data gone gates to SKIPPED
    let opts_missing = RunOptions {
        data_dir: dir.join("nowhere"),
        cache_dir: Some(dir.join("cache2")),
        ..RunOptions::default()
    };
    let report = run_scenario(&spec, &opts_missing);
    assert_eq!(report.outcome, Outcome::Skipped);

    // base_url recovery: a directory holding the files acts as the remote
    let opts_base = RunOptions {
        data_dir: dir.join("nowhere"),
        cache_dir: Some(dir.join("cache3")),
        base_url: Some(data.to_string_lossy().into_owned()),
        ..RunOptions::default()
    };
    let report = run_scenario(&spec, &opts_base);
    assert_eq!(report.outcome, Outcome::Pass, "checks: {:?}", report.checks);

    std::fs::remove_dir_all(&dir).ok();
}
