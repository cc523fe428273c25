mod common;

use common::{
    compare, reference_layout, unit, BIASED_VARY_DELTA, BIASED_VARY_G, GOLDEN_TOL, UNBIASED_VARY_G,
};
use qrm::cli::{execute, RunConfig, Task};
use qrm::eigen::DEFAULT_CAP;
use qrm::overlap::{find_partition, parse_table, DEFAULT_ZERO_THRESHOLD};

#[test]
fn parity_protected_zeros_at_eps_zero() {
    let m = reference_layout(unit(0.0, 0.7, 0.5), unit(0.0, 0.7, 2.6), 10);
    let (worst, bad_zeros) = compare(&m, &UNBIASED_VARY_G);
    assert!(worst <= GOLDEN_TOL, "max deviation {worst}");
    assert_eq!(bad_zeros, 0);
    assert_eq!(m.zero_count(), 50);
    assert!(m.largest_ignored < 1e-8);
    assert!(m.smallest_retained > 2.6e-3 && m.smallest_retained < 2.8e-3);
    assert!(m.is_valid());
}

#[test]
fn no_zeros_at_eps_one() {
    for (first, second, table) in [
        (unit(1.0, 0.7, 0.5), unit(1.0, 0.7, 2.6), &BIASED_VARY_G),
        (unit(1.0, 0.7, 0.5), unit(1.0, 1.8, 0.5), &BIASED_VARY_DELTA),
    ] {
        let m = reference_layout(first, second, 10);
        let (worst, _) = compare(&m, table);
        assert!(worst <= GOLDEN_TOL, "max deviation {worst}");
        assert_eq!(m.zero_count(), 0);
        let p = find_partition(&m).unwrap();
        assert!(!p.found);
    }
}

#[test]
fn exported_table_reads_back_to_six_digits() {
    let cfg = RunConfig::new(Task::Overlap {
        rows: unit(0.0, 0.7, 2.6),
        cols: unit(0.0, 0.7, 0.5),
        levels: 10,
        threshold: DEFAULT_ZERO_THRESHOLD,
        partition: false,
    });
    let out = execute(&cfg, DEFAULT_CAP).unwrap();
    let body: String = out
        .text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let parsed = parse_table(&body).unwrap();
    for (i, row) in UNBIASED_VARY_G.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            assert!((parsed[(i, j)] - want).abs() <= 2e-6, "({i},{j})");
        }
    }
}
