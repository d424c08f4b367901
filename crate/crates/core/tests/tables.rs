use jennings::catalog::{default_data_dir, load_data_catalog, verify_tables, Role};
use jennings::structure::DEFAULT_CAP;

#[test]
fn every_data_file_imports_with_declared_order() {
    let entries = load_data_catalog(&default_data_dir()).unwrap();
    assert_eq!(entries.len(), 203);
    for e in &entries {
        let (order, _) = e.small_group_id.expect("data files declare an id");
        assert_eq!(order as u128, e.order(), "{}", e.name);
    }
    let ce = entries
        .iter()
        .filter(|e| e.role == Role::CounterexampleCandidate)
        .count();
    assert_eq!(ce, 18);
}

#[test]
fn table_rows_match_computed_invariants() {
    let entries = load_data_catalog(&default_data_dir()).unwrap();
    let rows = verify_tables(&entries, DEFAULT_CAP).unwrap();
    let by_order = |n: u128| {
        rows.iter()
            .filter(|r| entries.iter().any(|e| e.name == r.name && e.order() == n))
            .count()
    };
    assert_eq!(
        (by_order(3125), by_order(2187), by_order(243)),
        (17, 28, 30)
    );
    for r in &rows {
        assert!(
            r.pass,
            "{}: {:?}",
            r.name,
            r.columns.iter().filter(|c| !c.pass).collect::<Vec<_>>()
        );
    }
}
