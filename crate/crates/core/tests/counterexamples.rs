//! Groups with `t^L = 10p − 8` held against the conditions. Every index is
//! cross-checked in the group algebra.

use jennings::catalog::{default_data_dir, load_data_catalog, CatalogEntry, Role};
use jennings::classifier::{Classifier, ConditionSet, FingerprintIndex, Verdict};

fn data() -> Vec<CatalogEntry> {
    load_data_catalog(&default_data_dir()).unwrap()
}

#[test]
fn candidates_match_no_condition() {
    let entries = data();
    let index = FingerprintIndex::from_entries(&entries);
    let candidates: Vec<_> = entries
        .iter()
        .filter(|e| e.role == Role::CounterexampleCandidate)
        .collect();
    assert_eq!(candidates.len(), 18);
    for set in [ConditionSet::Literal, ConditionSet::Corrected] {
        let c = Classifier::new(&index).with_set(set);
        for e in &candidates {
            let r = c.verify_theorem(&e.presentation, 2).unwrap();
            eprintln!(
                "{set:?} {} d={} t={} {}",
                e.name, r.d_sequence, r.t_upper, r.verdict
            );
            assert_eq!(r.d_sequence.to_string(), "{2:1,3:1,4:1,5:1}", "{}", e.name);
            assert_eq!(r.t_upper, 12, "{}", e.name);
            assert_eq!(r.oracle_t_upper, Some(12), "{}", e.name);
            assert!(r.matches.is_empty(), "{}", e.name);
            assert!(r.undetermined.is_empty(), "{}", e.name);
            assert_eq!(r.verdict, Verdict::Inconsistent, "{}", e.name);
        }
    }
}

#[test]
fn order_256_witnesses_match_their_items() {
    let entries = data();
    let index = FingerprintIndex::from_entries(&entries);
    let expected = [("S_256_5090", 19), ("S_256_5102", 24), ("S_256_5298", 18)];
    let witnesses: Vec<_> = entries.iter().filter(|e| e.role == Role::Witness).collect();
    assert_eq!(witnesses.len(), expected.len());
    for set in [ConditionSet::Literal, ConditionSet::Corrected] {
        let c = Classifier::new(&index).with_set(set);
        for (name, item) in expected {
            let e = witnesses.iter().find(|e| e.name == name).unwrap();
            let r = c.verify_theorem(&e.presentation, 2).unwrap();
            assert_eq!(r.d_sequence.to_string(), "{2:2,3:2,5:1}");
            assert_eq!(r.oracle_t_upper, Some(12));
            let items: Vec<u32> = r.matches.iter().map(|m| m.item).collect();
            assert_eq!(items, vec![item], "{name}");
            assert_eq!(r.verdict, Verdict::Consistent, "{name}");
        }
    }
}
