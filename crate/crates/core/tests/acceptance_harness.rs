//! The suite runner itself: filtering, and failure detection on a corrupted fixture.

use rephom::acceptance::{corrupted_fixture, run_suite, Fixture};

#[test]
fn only_filter_selects_subset() {
    let ids = |only: &[&str]| -> Vec<u32> {
        let only: Vec<String> = only.iter().map(|s| s.to_string()).collect();
        run_suite(&only, &Fixture::default()).iter().map(|r| r.id).collect()
    };
    assert_eq!(ids(&["macdonald"]), vec![8, 9]);
    assert_eq!(ids(&["macdonald-q"]), vec![8]);
    assert_eq!(ids(&["6"]), vec![6]);
    assert_eq!(ids(&["cpr", "1"]), vec![1, 2]);
}

#[test]
fn corrupted_entry_fails_exactly_one_row() {
    let rows = run_suite(&[], &corrupted_fixture());
    assert_eq!(rows.len(), 10);
    let failed: Vec<u32> = rows.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(failed, vec![3]);
}
