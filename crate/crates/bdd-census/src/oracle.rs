//! Brute-force ground truth: build the ROBDD of any Boolean function by
//! compaction and take exhaustive size censuses for small variable counts.
//!
//! Two independent compaction routines are kept side by side so the oracle
//! cross-checks itself: [`compact_truth_table`] recurses on cofactor
//! segments with a uniqueness table, while [`compact_tree_postorder`]
//! materializes the full decision tree and rewrites it in postorder,
//! replacing repeated subtrees by their first occurrence and dropping
//! nodes whose children collapse to the same target.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;

use crate::bdd::{Bdd, BddNode, NodeId, TruthTable};
use crate::error::Error;

/// The full decision tree is materialized only up to this many variables.
pub const MAX_TREE_VARS: u32 = 6;
/// Exhaustive sweeps over all `2^(2^k)` functions stop here.
pub const MAX_EXHAUSTIVE_VARS: u32 = 4;

/// Result of compacting a truth table. Constant functions have no
/// decision node at all, hence no BDD of index `k ≥ 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Compacted {
    Bdd(Bdd),
    Constant(bool),
}

impl Compacted {
    pub fn bdd(self) -> Option<Bdd> {
        match self {
            Compacted::Bdd(b) => Some(b),
            Compacted::Constant(_) => None,
        }
    }
}

struct UniqueTable {
    nodes: Vec<BddNode>,
    index: HashMap<(u32, NodeId, NodeId), NodeId>,
}

impl UniqueTable {
    fn new() -> UniqueTable {
        UniqueTable {
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Node for `(index, low, high)`, reusing an existing identical triple.
    fn intern(&mut self, index: u32, low: NodeId, high: NodeId) -> NodeId {
        debug_assert_ne!(low, high);
        *self.index.entry((index, low, high)).or_insert_with(|| {
            self.nodes.push(BddNode::new(index, low, high));
            NodeId::internal(self.nodes.len() - 1)
        })
    }

    fn finish(self, root: NodeId) -> Compacted {
        match root.slot() {
            None => Compacted::Constant(root == NodeId::TRUE),
            Some(slot) => {
                let vars = self.nodes[slot].index;
                Compacted::Bdd(Bdd::from_parts(vars, root, self.nodes))
            }
        }
    }
}

/// The unique plane ROBDD of the function, built by recursive cofactor
/// splits: a node `(i, low, high)` is created only when `low ≠ high` and no
/// identical triple exists yet. The root index of the result is the highest
/// variable the function actually depends on.
pub fn compact_truth_table(table: &TruthTable) -> Compacted {
    fn build(ut: &mut UniqueTable, level: u32, segment: &[bool]) -> NodeId {
        if segment.iter().all(|&b| !b) {
            return NodeId::FALSE;
        }
        if segment.iter().all(|&b| b) {
            return NodeId::TRUE;
        }
        // Non-constant segments have at least two bits, so level ≥ 1.
        let half = segment.len() / 2;
        let low = build(ut, level - 1, &segment[..half]);
        let high = build(ut, level - 1, &segment[half..]);
        if low == high {
            // x_level is not essential here; skip the level entirely.
            return low;
        }
        ut.intern(level, low, high)
    }

    let mut ut = UniqueTable::new();
    let root = build(&mut ut, table.vars(), table.bits());
    ut.finish(root)
}

/// A child slot in the materialized decision tree.
#[derive(Clone, Copy)]
enum TreeChild {
    Leaf(bool),
    Node(usize),
}

/// The literal tree-compaction procedure: materialize the full plane
/// decision tree, then walk it in postorder, rewriting each node's
/// transitions to the surviving targets. A node whose rewritten children
/// collapse to a single target is removed in favor of that target; a node
/// whose rewritten triple was already seen is removed in favor of its
/// first occurrence. The result equals [`compact_truth_table`].
pub fn compact_tree_postorder(table: &TruthTable) -> Result<Compacted, Error> {
    let k = table.vars();
    if k > MAX_TREE_VARS {
        return Err(Error::VarsOutOfRange {
            vars: k,
            limit: MAX_TREE_VARS,
        });
    }

    struct TreeNode {
        index: u32,
        low: TreeChild,
        high: TreeChild,
    }

    // Children are pushed before their parent, so the vector order is the
    // postorder of the tree (low subtree, high subtree, node).
    fn grow(tree: &mut Vec<TreeNode>, table: &TruthTable, level: u32, base: usize) -> usize {
        let half = 1usize << (level - 1);
        let low = if level == 1 {
            TreeChild::Leaf(table.bit(base))
        } else {
            TreeChild::Node(grow(tree, table, level - 1, base))
        };
        let high = if level == 1 {
            TreeChild::Leaf(table.bit(base + half))
        } else {
            TreeChild::Node(grow(tree, table, level - 1, base + half))
        };
        tree.push(TreeNode {
            index: level,
            low,
            high,
        });
        tree.len() - 1
    }

    if table.is_constant() {
        return Ok(Compacted::Constant(table.bit(0)));
    }
    let mut tree = Vec::with_capacity((1usize << k) - 1);
    grow(&mut tree, table, k, 0);

    let mut ut = UniqueTable::new();
    let mut replacement: Vec<NodeId> = Vec::with_capacity(tree.len());
    for node in &tree {
        let resolve = |child: TreeChild| match child {
            TreeChild::Leaf(false) => NodeId::FALSE,
            TreeChild::Leaf(true) => NodeId::TRUE,
            TreeChild::Node(pos) => replacement[pos],
        };
        let low = resolve(node.low);
        let high = resolve(node.high);
        replacement.push(if low == high {
            low
        } else {
            ut.intern(node.index, low, high)
        });
    }
    let root = *replacement.last().expect("non-constant table has a root");
    Ok(ut.finish(root))
}

/// `2^(2^k) − 2^(2^(k−1))`: the number of Boolean functions over `k`
/// variables whose ROBDD root has index exactly `k` (the two top cofactors
/// must differ).
pub fn function_census_total(k: u32) -> BigUint {
    assert!(k >= 1);
    (BigUint::one() << (1u64 << k)) - (BigUint::one() << (1u64 << (k - 1)))
}

/// Exhaustive size census: compacts all `2^(2^k)` truth tables and counts,
/// per size, the ROBDDs whose root index is exactly `k`.
pub fn oracle_distribution(k: u32) -> Result<Vec<(u32, BigUint)>, Error> {
    sweep(k, |hist, bdd| *hist.entry(bdd.size()).or_insert(0) += 1)
        .map(|hist| hist.into_iter().map(|(n, c)| (n, BigUint::from(c))).collect())
}

/// Canonical encodings of every ROBDD with root index `k` and size `n`.
pub fn oracle_enumerate(k: u32, n: u32) -> Result<BTreeSet<Vec<u8>>, Error> {
    let mut out = BTreeSet::new();
    sweep(k, |_, bdd| {
        if bdd.size() == n {
            out.insert(bdd.canonical_encode());
        }
    })?;
    Ok(out)
}

fn sweep<F>(k: u32, mut visit: F) -> Result<BTreeMap<u32, u64>, Error>
where
    F: FnMut(&mut BTreeMap<u32, u64>, &Bdd),
{
    if !(1..=MAX_EXHAUSTIVE_VARS).contains(&k) {
        return Err(Error::VarsOutOfRange {
            vars: k,
            limit: MAX_EXHAUSTIVE_VARS,
        });
    }
    let mut hist = BTreeMap::new();
    for code in 0..1u64 << (1u32 << k) {
        if let Compacted::Bdd(b) = compact_truth_table(&TruthTable::from_code(k, code)) {
            if b.vars() == k {
                debug_assert!(b.validate().is_empty());
                visit(&mut hist, &b);
            }
        }
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn identity_compacts_to_size_3() {
        let b = compact_truth_table(&TruthTable::from_code(1, 0b10)).bdd().unwrap();
        assert_eq!((b.vars(), b.size()), (1, 3));
        assert!(b.validate().is_empty());
    }

    #[test]
    fn xor_compacts_to_size_5_with_two_low_nodes() {
        let b = compact_truth_table(&TruthTable::from_code(2, 0b0110)).bdd().unwrap();
        assert_eq!((b.vars(), b.size()), (2, 5));
        assert_eq!(b.nodes().iter().filter(|n| n.index == 1).count(), 2);
        assert!(b.validate().is_empty());
    }

    #[test]
    fn constants_yield_the_marker() {
        assert_eq!(
            compact_truth_table(&TruthTable::from_code(2, 0)),
            Compacted::Constant(false)
        );
        assert_eq!(
            compact_truth_table(&TruthTable::from_code(2, 0b1111)),
            Compacted::Constant(true)
        );
    }

    #[test]
    fn conjunction_drops_the_redundant_test() {
        // x2 ∧ x1: the low cofactor is constant, so no index-1 node under it.
        let b = compact_truth_table(&TruthTable::from_code(2, 0b1000)).bdd().unwrap();
        assert_eq!(b.size(), 4);
    }

    #[test]
    fn postorder_rewrite_agrees_exhaustively_up_to_3_vars() {
        for k in 1..=3u32 {
            for code in 0..1u64 << (1u32 << k) {
                let t = TruthTable::from_code(k, code);
                let a = compact_truth_table(&t);
                let b = compact_tree_postorder(&t).unwrap();
                match (a, b) {
                    (Compacted::Constant(x), Compacted::Constant(y)) => assert_eq!(x, y),
                    (Compacted::Bdd(x), Compacted::Bdd(y)) => {
                        assert_eq!(x.canonical_encode(), y.canonical_encode(), "k={k} code={code}")
                    }
                    (a, b) => panic!("k={k} code={code}: {a:?} vs {b:?}"),
                }
            }
        }
    }

    #[test]
    fn postorder_rewrite_agrees_on_random_6_var_tables() {
        // splitmix64 stream; 10^4 pseudorandom 64-bit tables.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^ (z >> 31)
        };
        for _ in 0..10_000 {
            let t = TruthTable::from_code(6, next());
            let a = compact_truth_table(&t);
            let b = compact_tree_postorder(&t).unwrap();
            match (a, b) {
                (Compacted::Constant(x), Compacted::Constant(y)) => assert_eq!(x, y),
                (Compacted::Bdd(x), Compacted::Bdd(y)) => {
                    assert_eq!(x.canonical_encode(), y.canonical_encode())
                }
                (a, b) => panic!("{a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn compaction_is_a_fixpoint() {
        for code in 0..1u64 << 4 {
            if let Compacted::Bdd(b) = compact_truth_table(&TruthTable::from_code(2, code)) {
                let again = compact_truth_table(&b.to_truth_table().unwrap()).bdd().unwrap();
                assert_eq!(again.canonical_encode(), b.canonical_encode());
            }
        }
    }

    #[test]
    fn small_distributions() {
        let d1 = oracle_distribution(1).unwrap();
        assert_eq!(d1, vec![(3, BigUint::from(2u32))]);

        let d2 = oracle_distribution(2).unwrap();
        assert_eq!(
            d2,
            vec![
                (3, BigUint::from(2u32)),
                (4, BigUint::from(8u32)),
                (5, BigUint::from(2u32)),
            ]
        );
        let total: BigUint = d2.iter().map(|(_, c)| c).sum();
        assert_eq!(total, function_census_total(2));
        assert_eq!(total.to_u64(), Some(12));
    }

    #[test]
    fn census_totals_match_the_cofactor_identity() {
        for k in 1..=3u32 {
            let total: BigUint = oracle_distribution(k)
                .unwrap()
                .into_iter()
                .map(|(_, c)| c)
                .sum();
            assert_eq!(total, function_census_total(k));
        }
    }

    #[test]
    fn enumerate_matches_the_census() {
        assert_eq!(oracle_enumerate(1, 3).unwrap().len(), 2);
        assert_eq!(oracle_enumerate(2, 4).unwrap().len(), 8);
        assert!(oracle_enumerate(2, 6).unwrap().is_empty());
        assert!(matches!(
            oracle_enumerate(5, 3),
            Err(Error::VarsOutOfRange { .. })
        ));
    }
}
