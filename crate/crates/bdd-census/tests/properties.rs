//! Property-based checks over randomly drawn Boolean functions: the oracle
//! compaction, the spine decomposition and the rank bijection must agree
//! on every input.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use bdd_census::oracle::{self, Compacted};
use bdd_census::{spine, unranking, Counter, TruthTable};

fn counter() -> &'static Counter {
    static COUNTER: OnceLock<Counter> = OnceLock::new();
    COUNTER.get_or_init(Counter::new)
}

/// A random truth table over 1..=6 variables (masked to the table width).
fn tables() -> impl Strategy<Value = TruthTable> {
    (1u32..=6, any::<u64>()).prop_map(|(vars, code)| {
        let mask = if vars == 6 { u64::MAX } else { (1u64 << (1u32 << vars)) - 1 };
        TruthTable::from_code(vars, code & mask)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn compaction_validates_and_round_trips(table in tables()) {
        match oracle::compact_truth_table(&table) {
            Compacted::Constant(value) => prop_assert!(table.bits().iter().all(|&b| b == value)),
            Compacted::Bdd(b) => {
                prop_assert!(b.validate().is_empty());
                // The BDD computes the function it was built from.
                let again = b.to_truth_table().unwrap();
                let relevant = 1usize << b.vars();
                for position in 0..table.bits().len() {
                    prop_assert_eq!(table.bit(position), again.bit(position % relevant));
                }
            }
        }
    }

    #[test]
    fn spine_counts_and_weight(table in tables()) {
        if let Compacted::Bdd(b) = oracle::compact_truth_table(&table) {
            let extraction = spine::extract_spine(&b);
            prop_assert_eq!(extraction.spine.node_count(), b.size() - 2);
            prop_assert_eq!(extraction.spine.half_edge_count(), b.size() - 1);
            prop_assert_eq!(
                extraction.edges.iter().filter(|e| !e.tree).count() as u32,
                b.size() - 1
            );
            prop_assert!(extraction.spine.weight() >= BigUint::one());
        }
    }

    #[test]
    fn rank_then_unrank_is_identity(table in tables()) {
        if let Compacted::Bdd(b) = oracle::compact_truth_table(&table) {
            let r = unranking::rank(counter(), &b).unwrap();
            prop_assert!(r < counter().num_bdds(b.size(), b.vars()).unwrap());
            let again = unranking::unrank(counter(), b.size(), b.vars(), &r).unwrap();
            prop_assert_eq!(again.canonical_encode(), b.canonical_encode());
        }
    }

    #[test]
    fn text_round_trip(table in tables()) {
        if let Compacted::Bdd(b) = oracle::compact_truth_table(&table) {
            let emitted = bdd_census::text::emit(&b);
            let parsed = bdd_census::text::parse(&emitted).unwrap();
            prop_assert!(parsed.validate().is_empty());
            prop_assert_eq!(bdd_census::text::emit(&parsed), emitted);
        }
    }
}
