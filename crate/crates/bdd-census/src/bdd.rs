//! The plane ROBDD data model: node table, validation, evaluation, truth
//! tables and the canonical encoding.
//!
//! A BDD over variables `x_k > … > x_1` is a rooted DAG of decision nodes
//! with two shared sinks `⊥` and `⊤` of index 0. Every decision node of
//! index `i ∈ [1, k]` has a low and a high child of strictly smaller index,
//! the two children differ, and no two distinct nodes carry the same
//! `(index, low, high)` triple. The root has index exactly `k`. The *size*
//! of a BDD counts its decision nodes plus both sinks, so the smallest BDD
//! (a literal) has size 3.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::text;

/// Truth tables are materialized only up to this many variables.
pub const MAX_TRUTH_TABLE_VARS: u32 = 24;

/// Identifier of a BDD node. Two values are reserved for the sinks; all
/// other values refer to slots of the owning [`Bdd`]'s node table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    /// The `⊥` sink (the function `0`).
    pub const FALSE: NodeId = NodeId(0);
    /// The `⊤` sink (the function `1`).
    pub const TRUE: NodeId = NodeId(1);

    /// The id of the decision node stored in table slot `slot`.
    pub fn internal(slot: usize) -> NodeId {
        NodeId(slot as u32 + 2)
    }

    pub fn is_sink(self) -> bool {
        self.0 < 2
    }

    /// The node table slot, or `None` for a sink.
    pub fn slot(self) -> Option<usize> {
        if self.is_sink() {
            None
        } else {
            Some(self.0 as usize - 2)
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeId::FALSE => write!(f, "F"),
            NodeId::TRUE => write!(f, "T"),
            NodeId(v) => write!(f, "{}", v - 2),
        }
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A decision node: variable index plus the two outgoing transitions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BddNode {
    pub index: u32,
    pub low: NodeId,
    pub high: NodeId,
}

impl BddNode {
    pub fn new(index: u32, low: NodeId, high: NodeId) -> BddNode {
        BddNode { index, low, high }
    }
}

/// A plane ROBDD as an indexed node table with two implicit sinks.
///
/// The structure is plain data: [`Bdd::from_parts`] accepts arbitrary
/// candidate tables and [`Bdd::validate`] reports every violated
/// constraint. All other operations require a valid BDD.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bdd {
    vars: u32,
    root: NodeId,
    nodes: Vec<BddNode>,
}

/// One violated BDD constraint, as reported by [`Bdd::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// The root must be a decision node, not a sink.
    RootIsSink,
    /// The root's index differs from the declared variable count.
    RootIndexMismatch { root_index: u32, vars: u32 },
    /// A node's index lies outside `[1, vars]`.
    IndexOutOfRange { node: NodeId, index: u32 },
    /// A transition refers to a slot outside the node table.
    DanglingReference { node: NodeId, to: NodeId },
    /// A node's low and high children coincide.
    EqualChildren { node: NodeId },
    /// Two distinct nodes share the same `(index, low, high)` triple.
    DuplicateTriple { first: NodeId, second: NodeId },
    /// An edge does not strictly decrease the index.
    NonDecreasingIndex { from: NodeId, to: NodeId },
    /// A decision node is not reachable from the root.
    Unreachable { node: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootIsSink => write!(f, "root is a sink"),
            Violation::RootIndexMismatch { root_index, vars } => {
                write!(f, "root has index {root_index}, expected {vars}")
            }
            Violation::IndexOutOfRange { node, index } => {
                write!(f, "node {node} has index {index} outside [1, k]")
            }
            Violation::DanglingReference { node, to } => {
                write!(f, "node {node} refers to nonexistent node {to}")
            }
            Violation::EqualChildren { node } => write!(f, "node {node} has equal children"),
            Violation::DuplicateTriple { first, second } => {
                write!(f, "nodes {first} and {second} share the same triple")
            }
            Violation::NonDecreasingIndex { from, to } => {
                write!(f, "edge {from} -> {to} does not decrease the index")
            }
            Violation::Unreachable { node } => write!(f, "node {node} is unreachable from the root"),
        }
    }
}

impl Bdd {
    /// Builds a candidate BDD without checking any invariant.
    pub fn from_parts(vars: u32, root: NodeId, nodes: Vec<BddNode>) -> Bdd {
        Bdd { vars, root, nodes }
    }

    /// The root index `k` (the number of variables).
    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// The decision nodes; slot `i` is node `NodeId::internal(i)`.
    pub fn nodes(&self) -> &[BddNode] {
        &self.nodes
    }

    /// The size `n`: decision nodes plus both sinks.
    pub fn size(&self) -> u32 {
        self.nodes.len() as u32 + 2
    }

    pub fn node(&self, id: NodeId) -> Option<&BddNode> {
        id.slot().and_then(|s| self.nodes.get(s))
    }

    /// Checks every BDD constraint and returns the violations found
    /// (empty iff the candidate is a valid plane ROBDD of index `k`).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut dangling = false;

        match self.root.slot() {
            None => out.push(Violation::RootIsSink),
            Some(slot) => match self.nodes.get(slot) {
                None => {
                    out.push(Violation::DanglingReference {
                        node: self.root,
                        to: self.root,
                    });
                    dangling = true;
                }
                Some(node) if node.index != self.vars => {
                    out.push(Violation::RootIndexMismatch {
                        root_index: node.index,
                        vars: self.vars,
                    });
                }
                Some(_) => {}
            },
        }

        let mut triples: HashMap<(u32, NodeId, NodeId), NodeId> = HashMap::new();
        for (slot, node) in self.nodes.iter().enumerate() {
            let id = NodeId::internal(slot);
            if node.index < 1 || node.index > self.vars {
                out.push(Violation::IndexOutOfRange {
                    node: id,
                    index: node.index,
                });
            }
            if node.low == node.high {
                out.push(Violation::EqualChildren { node: id });
            }
            match triples.entry((node.index, node.low, node.high)) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    out.push(Violation::DuplicateTriple {
                        first: *e.get(),
                        second: id,
                    });
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(id);
                }
            }
            for to in [node.low, node.high] {
                match to.slot() {
                    None => {}
                    Some(s) => match self.nodes.get(s) {
                        None => {
                            out.push(Violation::DanglingReference { node: id, to });
                            dangling = true;
                        }
                        Some(child) if child.index >= node.index => {
                            out.push(Violation::NonDecreasingIndex { from: id, to });
                        }
                        Some(_) => {}
                    },
                }
            }
        }

        // Reachability: indexes strictly decrease along every surviving edge,
        // so the walk below terminates even on rejected candidates.
        if !dangling {
            let mut seen = vec![false; self.nodes.len()];
            let mut stack = Vec::new();
            if let Some(slot) = self.root.slot() {
                if slot < self.nodes.len() {
                    stack.push(slot);
                    seen[slot] = true;
                }
            }
            while let Some(slot) = stack.pop() {
                let node = self.nodes[slot];
                for to in [node.low, node.high] {
                    if let Some(s) = to.slot() {
                        if !seen[s] && self.nodes[s].index < node.index {
                            seen[s] = true;
                            stack.push(s);
                        }
                    }
                }
            }
            for (slot, reached) in seen.iter().enumerate() {
                if !reached {
                    out.push(Violation::Unreachable {
                        node: NodeId::internal(slot),
                    });
                }
            }
        }

        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Evaluates the function at one assignment; `assignment[i]` is the
    /// value of `x_{i+1}`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, Error> {
        if assignment.len() != self.vars as usize {
            return Err(Error::AssignmentLength {
                expected: self.vars,
                got: assignment.len(),
            });
        }
        let mut cur = self.root;
        for _ in 0..=self.nodes.len() {
            match cur.slot() {
                None => return Ok(cur == NodeId::TRUE),
                Some(slot) => {
                    let node = &self.nodes[slot];
                    cur = if assignment[node.index as usize - 1] {
                        node.high
                    } else {
                        node.low
                    };
                }
            }
        }
        panic!("evaluate called on a cyclic node table");
    }

    /// Materializes the full truth table of the function.
    pub fn to_truth_table(&self) -> Result<TruthTable, Error> {
        if self.vars > MAX_TRUTH_TABLE_VARS {
            return Err(Error::VarsOutOfRange {
                vars: self.vars,
                limit: MAX_TRUTH_TABLE_VARS,
            });
        }
        let mut bits = vec![false; 1usize << self.vars];
        self.fill_table(self.root, self.vars, 0, &mut bits);
        Ok(TruthTable {
            vars: self.vars,
            bits,
        })
    }

    fn fill_table(&self, id: NodeId, level: u32, base: usize, bits: &mut [bool]) {
        match id.slot() {
            None => {
                if id == NodeId::TRUE {
                    bits[base..base + (1usize << level)].fill(true);
                }
            }
            Some(slot) => {
                let node = self.nodes[slot];
                debug_assert!(node.index <= level);
                let half = 1usize << (level - 1);
                if node.index == level {
                    self.fill_table(node.low, level - 1, base, bits);
                    self.fill_table(node.high, level - 1, base + half, bits);
                } else {
                    // The tested variable sits lower; both halves agree.
                    self.fill_table(id, level - 1, base, bits);
                    self.fill_table(id, level - 1, base + half, bits);
                }
            }
        }
    }

    /// Decision node slots in preorder (depth-first, low before high,
    /// first arrival). Requires a valid BDD.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = Vec::new();
        if let Some(slot) = self.root.slot() {
            stack.push(slot);
        }
        while let Some(slot) = stack.pop() {
            if seen[slot] {
                continue;
            }
            seen[slot] = true;
            order.push(slot);
            let node = self.nodes[slot];
            // Low must be visited first, hence pushed last.
            for to in [node.high, node.low] {
                if let Some(s) = to.slot() {
                    if !seen[s] {
                        stack.push(s);
                    }
                }
            }
        }
        order
    }

    /// A deterministic byte encoding: nodes renumbered by preorder, then
    /// serialized in the text format. Two valid BDDs encode equal iff they
    /// are the same plane ROBDD. Requires a valid BDD.
    pub fn canonical_encode(&self) -> Vec<u8> {
        text::emit(self).into_bytes()
    }
}

/// The truth table of a Boolean function over `x_k, …, x_1`; the bit at
/// position `p` is the value at the assignment whose binary expansion is
/// `p` with `x_k` as the most significant selector bit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    vars: u32,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(vars: u32, bits: Vec<bool>) -> Result<TruthTable, Error> {
        if vars > MAX_TRUTH_TABLE_VARS {
            return Err(Error::VarsOutOfRange {
                vars,
                limit: MAX_TRUTH_TABLE_VARS,
            });
        }
        if bits.len() != 1usize << vars {
            return Err(Error::AssignmentLength {
                expected: vars,
                got: bits.len(),
            });
        }
        Ok(TruthTable { vars, bits })
    }

    /// The table whose bit `i` is bit `i` of `code`; convenient for
    /// exhaustive sweeps with `k ≤ 6`.
    pub fn from_code(vars: u32, code: u64) -> TruthTable {
        assert!((1..=6).contains(&vars), "from_code supports 1..=6 variables");
        let len = 1usize << vars;
        let bits = (0..len).map(|i| code >> i & 1 == 1).collect();
        TruthTable { vars, bits }
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, position: usize) -> bool {
        self.bits[position]
    }

    pub fn is_constant(&self) -> bool {
        self.bits.iter().all(|&b| b == self.bits[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The literal `x_1` as a BDD: one node over the sinks.
    pub(crate) fn identity_bdd() -> Bdd {
        Bdd::from_parts(
            1,
            NodeId::internal(0),
            vec![BddNode::new(1, NodeId::FALSE, NodeId::TRUE)],
        )
    }

    /// `x_2 ⊕ x_1`: the root tests `x_2` over two complementary `x_1` nodes.
    pub(crate) fn xor_bdd() -> Bdd {
        Bdd::from_parts(
            2,
            NodeId::internal(0),
            vec![
                BddNode::new(2, NodeId::internal(1), NodeId::internal(2)),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
                BddNode::new(1, NodeId::TRUE, NodeId::FALSE),
            ],
        )
    }

    #[test]
    fn smallest_bdd_is_valid() {
        let b = identity_bdd();
        assert!(b.validate().is_empty());
        assert_eq!(b.size(), 3);
    }

    #[test]
    fn constants_are_out_of_domain() {
        // A constant would need an index-0 root; indexes start at 1.
        let b = Bdd::from_parts(
            0,
            NodeId::internal(0),
            vec![BddNode::new(0, NodeId::FALSE, NodeId::TRUE)],
        );
        assert!(b
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::IndexOutOfRange { .. })));
    }

    #[test]
    fn equal_children_violation() {
        let b = Bdd::from_parts(
            1,
            NodeId::internal(0),
            vec![BddNode::new(1, NodeId::FALSE, NodeId::FALSE)],
        );
        let report = b.validate();
        assert!(matches!(report.as_slice(), [Violation::EqualChildren { .. }]));
    }

    #[test]
    fn duplicate_triple_violation() {
        // Two index-1 nodes with identical transitions under a common root.
        let b = Bdd::from_parts(
            2,
            NodeId::internal(0),
            vec![
                BddNode::new(2, NodeId::internal(1), NodeId::internal(2)),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
            ],
        );
        assert!(b
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::DuplicateTriple { .. })));
    }

    #[test]
    fn root_index_must_match_vars() {
        let b = Bdd::from_parts(
            2,
            NodeId::internal(0),
            vec![BddNode::new(1, NodeId::FALSE, NodeId::TRUE)],
        );
        assert!(b
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::RootIndexMismatch { .. })));
    }

    #[test]
    fn unreachable_and_nondecreasing_are_reported() {
        let b = Bdd::from_parts(
            2,
            NodeId::internal(0),
            vec![
                BddNode::new(2, NodeId::FALSE, NodeId::internal(1)),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
                BddNode::new(1, NodeId::TRUE, NodeId::FALSE),
            ],
        );
        assert!(b
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::Unreachable { .. })));

        let b = Bdd::from_parts(
            1,
            NodeId::internal(0),
            vec![
                BddNode::new(1, NodeId::internal(1), NodeId::TRUE),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
            ],
        );
        assert!(b
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::NonDecreasingIndex { .. })));
    }

    #[test]
    fn evaluate_follows_low_on_zero() {
        let b = identity_bdd();
        assert!(!b.evaluate(&[false]).unwrap());
        assert!(b.evaluate(&[true]).unwrap());
        assert_eq!(
            b.evaluate(&[]),
            Err(Error::AssignmentLength {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn evaluate_xor() {
        let b = xor_bdd();
        assert!(b.validate().is_empty());
        // assignment[0] = x1, assignment[1] = x2
        assert!(!b.evaluate(&[true, true]).unwrap());
        assert!(b.evaluate(&[true, false]).unwrap());
        assert!(b.evaluate(&[false, true]).unwrap());
        assert!(!b.evaluate(&[false, false]).unwrap());
    }

    #[test]
    fn truth_table_of_identity_and_xor() {
        assert_eq!(
            identity_bdd().to_truth_table().unwrap().bits(),
            &[false, true]
        );
        assert_eq!(
            xor_bdd().to_truth_table().unwrap().bits(),
            &[false, true, true, false]
        );
    }

    #[test]
    fn truth_table_matches_evaluate() {
        let b = xor_bdd();
        let table = b.to_truth_table().unwrap();
        for position in 0..4usize {
            let assignment = [position & 1 == 1, position & 2 == 2];
            assert_eq!(table.bit(position), b.evaluate(&assignment).unwrap());
        }
    }

    #[test]
    fn encoding_invariant_under_table_permutation() {
        let b = xor_bdd();
        // Same diagram with the two x1 nodes swapped in the table.
        let permuted = Bdd::from_parts(
            2,
            NodeId::internal(2),
            vec![
                BddNode::new(1, NodeId::TRUE, NodeId::FALSE),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
                BddNode::new(2, NodeId::internal(1), NodeId::internal(0)),
            ],
        );
        assert!(permuted.validate().is_empty());
        assert_eq!(b.canonical_encode(), permuted.canonical_encode());
    }

    #[test]
    fn distinct_bdds_encode_differently() {
        let pos = identity_bdd();
        let neg = Bdd::from_parts(
            1,
            NodeId::internal(0),
            vec![BddNode::new(1, NodeId::TRUE, NodeId::FALSE)],
        );
        assert_ne!(pos.canonical_encode(), neg.canonical_encode());
    }

    #[test]
    fn truth_table_guard() {
        assert!(TruthTable::new(2, vec![false; 3]).is_err());
        let b = Bdd::from_parts(
            MAX_TRUTH_TABLE_VARS + 1,
            NodeId::internal(0),
            vec![BddNode::new(MAX_TRUTH_TABLE_VARS + 1, NodeId::FALSE, NodeId::TRUE)],
        );
        assert!(matches!(
            b.to_truth_table(),
            Err(Error::VarsOutOfRange { .. })
        ));
    }
}
