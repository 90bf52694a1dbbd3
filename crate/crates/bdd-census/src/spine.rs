//! The spanning-tree view of a BDD: tree/non-tree edge classification,
//! pools, level ranks, per-node completion weights, and the enumeration of
//! all BDDs sharing a spine.
//!
//! The spine of a BDD is the spanning tree of a depth-first search that
//! visits low children before high children and omits the sinks. Missing
//! transitions are *half edges*: the spine of a size-`n` BDD has `n − 2`
//! nodes and `n − 1` half edges. The *pool* of a node `ν` is the set of
//! nodes preorder-before `ν` of strictly smaller index, plus both sinks —
//! exactly the legal targets for `ν`'s red low edge.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bdd::{Bdd, BddNode, NodeId};
use crate::error::Error;
use crate::profile::Profile;

/// Spines whose completion weight exceeds this are not enumerated.
pub const COMPLETION_GUARD: u64 = 1_000_000;

/// One spine node; children are positions in the owning [`Spine`]'s
/// preorder node list, absent children are half edges.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpineNode {
    pub index: u32,
    pub low: Option<u32>,
    pub high: Option<u32>,
}

/// A binary tree with indexed nodes, stored in preorder.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spine {
    nodes: Vec<SpineNode>,
    subtree: Vec<u32>,
}

impl Spine {
    /// A single node with two half edges.
    pub fn leaf(index: u32) -> Spine {
        Spine::assemble(index, None, None)
    }

    /// Joins subtrees under a fresh root, fixing up child positions.
    ///
    /// Panics if a subtree root's index does not lie below `index`.
    pub fn assemble(index: u32, low: Option<Spine>, high: Option<Spine>) -> Spine {
        assert!(index >= 1);
        let mut nodes = vec![SpineNode {
            index,
            low: None,
            high: None,
        }];
        let append = |nodes: &mut Vec<SpineNode>, sub: Spine| {
            assert!(sub.root_index() < index, "child index must decrease");
            let offset = nodes.len() as u32;
            nodes.extend(sub.nodes.into_iter().map(|n| SpineNode {
                index: n.index,
                low: n.low.map(|c| c + offset),
                high: n.high.map(|c| c + offset),
            }));
            offset
        };
        if let Some(sub) = low {
            let at = append(&mut nodes, sub);
            nodes[0].low = Some(at);
        }
        if let Some(sub) = high {
            let at = append(&mut nodes, sub);
            nodes[0].high = Some(at);
        }
        Spine::from_preorder(nodes)
    }

    /// Builds a spine from an explicit preorder node list.
    ///
    /// Panics if the list is not a well-formed preorder layout (children
    /// must immediately follow their ancestors, low subtree first) or if an
    /// index does not strictly decrease along a tree edge.
    pub fn from_preorder(nodes: Vec<SpineNode>) -> Spine {
        assert!(!nodes.is_empty(), "a spine has at least one node");
        let mut subtree = vec![0u32; nodes.len()];
        let total = Self::check(&nodes, 0, &mut subtree);
        assert_eq!(
            total as usize,
            nodes.len(),
            "preorder layout must cover every node exactly once"
        );
        Spine { nodes, subtree }
    }

    fn check(nodes: &[SpineNode], pos: u32, subtree: &mut [u32]) -> u32 {
        let node = nodes[pos as usize];
        assert!(node.index >= 1, "node indexes start at 1");
        let mut size = 1;
        if let Some(low) = node.low {
            assert_eq!(low, pos + 1, "low child must directly follow its parent");
            assert!(nodes[low as usize].index < node.index);
            size += Self::check(nodes, low, subtree);
        }
        if let Some(high) = node.high {
            assert_eq!(high, pos + size, "high child must follow the low subtree");
            assert!(nodes[high as usize].index < node.index);
            size += Self::check(nodes, high, subtree);
        }
        subtree[pos as usize] = size;
        size
    }

    /// Number of spine nodes (`n − 2` for a BDD of size `n`).
    pub fn node_count(&self) -> u32 {
        self.nodes.len() as u32
    }

    pub fn nodes(&self) -> &[SpineNode] {
        &self.nodes
    }

    pub fn root_index(&self) -> u32 {
        self.nodes[0].index
    }

    pub fn subtree_size(&self, pos: u32) -> u32 {
        self.subtree[pos as usize]
    }

    /// Positions in postorder (low subtree, high subtree, node).
    pub fn postorder(&self) -> Vec<u32> {
        fn rec(spine: &Spine, pos: u32, out: &mut Vec<u32>) {
            let node = spine.nodes[pos as usize];
            if let Some(low) = node.low {
                rec(spine, low, out);
            }
            if let Some(high) = node.high {
                rec(spine, high, out);
            }
            out.push(pos);
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        rec(self, 0, &mut out);
        out
    }

    /// Number of half edges (`n − 1` for a BDD of size `n`).
    pub fn half_edge_count(&self) -> u32 {
        self.nodes
            .iter()
            .map(|n| 2 - n.low.iter().count() as u32 - n.high.iter().count() as u32)
            .sum()
    }

    /// Pool positions of `pos`: preorder-earlier nodes of smaller index.
    fn pool_positions(&self, pos: u32) -> Vec<u32> {
        let index = self.nodes[pos as usize].index;
        (0..pos)
            .filter(|&q| self.nodes[q as usize].index < index)
            .collect()
    }

    /// The pool profile of `pos`, with exactly `index(pos)` components;
    /// component 0 counts the two sinks.
    pub fn pool_profile(&self, pos: u32) -> Profile {
        let index = self.nodes[pos as usize].index;
        let mut v = vec![0u32; index as usize];
        v[0] = 2;
        for q in self.pool_positions(pos) {
            v[self.nodes[q as usize].index as usize] += 1;
        }
        Profile::from(v)
    }

    /// Number of preorder-earlier nodes with the same index as `pos`.
    pub fn level_rank(&self, pos: u32) -> u32 {
        let index = self.nodes[pos as usize].index;
        (0..pos)
            .filter(|&q| self.nodes[q as usize].index == index)
            .count() as u32
    }

    /// The profile of the subtree rooted at `pos` (length `index + 1`).
    pub fn subtree_profile(&self, pos: u32) -> Profile {
        let index = self.nodes[pos as usize].index;
        let mut v = vec![0u32; index as usize + 1];
        for q in pos..pos + self.subtree[pos as usize] {
            v[self.nodes[q as usize].index as usize] += 1;
        }
        Profile::from(v)
    }

    /// The number of ways to complete the node's missing transitions, given
    /// the choices already fixed at preorder-earlier nodes. Zero or negative
    /// means the tree is not a valid spine.
    pub fn node_weight(&self, pos: u32) -> i64 {
        let node = self.nodes[pos as usize];
        let pool_size = self.pool_profile(pos).norm() as i64;
        match (node.low, node.high) {
            (Some(_), Some(_)) => 1,
            (None, None) => pool_size * (pool_size - 1) - i64::from(self.level_rank(pos)),
            (Some(low), None) => {
                let reach = self.pool_profile(pos).add(&self.subtree_profile(low));
                reach.norm() as i64 - 1
            }
            (None, Some(_)) => pool_size,
        }
    }

    /// The number of BDDs with this spine: the product of all node weights,
    /// or zero as soon as any weight is non-positive.
    pub fn weight(&self) -> BigUint {
        let mut w = BigUint::one();
        for pos in 0..self.node_count() {
            let nw = self.node_weight(pos);
            if nw <= 0 {
                return BigUint::zero();
            }
            w *= BigUint::from(nw as u64);
        }
        w
    }
}

/// Which transition of a node an edge is.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    Low,
    High,
}

/// One BDD edge with its depth-first-search classification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClassifiedEdge {
    pub from: NodeId,
    pub kind: EdgeKind,
    pub to: NodeId,
    pub tree: bool,
}

/// A spine together with the mapping back to the BDD it came from.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub spine: Spine,
    /// BDD node of each spine position.
    pub node_of: Vec<NodeId>,
    /// All BDD edges in preorder of their source, low before high.
    pub edges: Vec<ClassifiedEdge>,
}

/// Runs the depth-first search (low first) and splits the edges into tree
/// edges (first arrival at a decision node) and non-tree edges (sinks and
/// re-arrivals). Requires a valid BDD.
pub fn extract_spine(b: &Bdd) -> Extraction {
    fn dfs(
        b: &Bdd,
        slot: usize,
        nodes: &mut Vec<SpineNode>,
        node_of: &mut Vec<NodeId>,
        visited: &mut HashMap<usize, u32>,
        edges: &mut Vec<ClassifiedEdge>,
    ) -> u32 {
        let pos = nodes.len() as u32;
        let bdd_node = b.nodes()[slot];
        nodes.push(SpineNode {
            index: bdd_node.index,
            low: None,
            high: None,
        });
        node_of.push(NodeId::internal(slot));
        visited.insert(slot, pos);

        for (kind, to) in [(EdgeKind::Low, bdd_node.low), (EdgeKind::High, bdd_node.high)] {
            let from = NodeId::internal(slot);
            match to.slot() {
                Some(child) if !visited.contains_key(&child) => {
                    edges.push(ClassifiedEdge {
                        from,
                        kind,
                        to,
                        tree: true,
                    });
                    let child_pos = dfs(b, child, nodes, node_of, visited, edges);
                    match kind {
                        EdgeKind::Low => nodes[pos as usize].low = Some(child_pos),
                        EdgeKind::High => nodes[pos as usize].high = Some(child_pos),
                    }
                }
                _ => edges.push(ClassifiedEdge {
                    from,
                    kind,
                    to,
                    tree: false,
                }),
            }
        }
        pos
    }

    let mut nodes = Vec::with_capacity(b.nodes().len());
    let mut node_of = Vec::with_capacity(b.nodes().len());
    let mut visited = HashMap::new();
    let mut edges = Vec::new();
    let root_slot = b.root().slot().expect("valid BDD has a decision root");
    dfs(b, root_slot, &mut nodes, &mut node_of, &mut visited, &mut edges);
    Extraction {
        spine: Spine::from_preorder(nodes),
        node_of,
        edges,
    }
}

/// The ordered list of legal red low targets of `pos`: `⊥`, `⊤`, then the
/// pool's decision nodes by preorder. Targets are spine-space ids
/// (`NodeId::internal(position)`).
fn pool_list(spine: &Spine, pos: u32) -> Vec<NodeId> {
    let mut list = vec![NodeId::FALSE, NodeId::TRUE];
    list.extend(
        spine
            .pool_positions(pos)
            .into_iter()
            .map(|q| NodeId::internal(q as usize)),
    );
    list
}

/// The ordered list of legal red high targets of `pos` when its low child
/// `low` is a tree edge: `⊥`, `⊤`, then the pool's decision nodes and the
/// strict descendants of `low`, all by preorder (the low child itself is
/// excluded because the two transitions must differ).
fn high_candidates(spine: &Spine, pos: u32, low: u32) -> Vec<NodeId> {
    let mut list = pool_list(spine, pos);
    let sub = spine.subtree_size(low);
    list.extend((low + 1..low + sub).map(|q| NodeId::internal(q as usize)));
    list
}

/// Lexicographic pairs `(a, b)` over `list` with `a ≠ b`, skipping the
/// pairs already used by preorder-earlier nodes of the same index.
fn available_pairs(list: &[NodeId], used: &[(NodeId, NodeId)]) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::with_capacity(list.len() * (list.len() - 1) - used.len());
    for &a in list {
        for &b in list {
            if a != b && !used.contains(&(a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Checks the pool-nesting invariant behind the `−s` term: all `rank`
/// pairs fixed at earlier same-index nodes must lie inside this node's
/// candidate pool.
fn assert_used_pairs_nested(list: &[NodeId], used: &[(NodeId, NodeId)], rank: u32) {
    assert_eq!(
        used.len() as u32,
        rank,
        "level rank disagrees with the number of earlier same-index pairs"
    );
    for (a, b) in used {
        assert!(
            list.contains(a) && list.contains(b),
            "earlier same-index pair escapes the pool"
        );
    }
}

/// Materializes one completion of a spine. `digits[pos]` selects the red
/// targets of node `pos`: the low target for a lone low half edge, the high
/// target for a lone high half edge, or the `(low, high)` pair for a node
/// with two half edges. Digits are resolved in preorder, so the pairs fixed
/// at earlier same-index nodes are known when a pair digit is decoded.
pub(crate) fn complete(spine: &Spine, digits: &[Option<u64>]) -> Bdd {
    debug_assert_eq!(digits.len(), spine.node_count() as usize);
    let mut nodes = Vec::with_capacity(spine.node_count() as usize);
    let mut used_pairs: HashMap<u32, Vec<(NodeId, NodeId)>> = HashMap::new();

    for pos in 0..spine.node_count() {
        let sn = spine.nodes()[pos as usize];
        let (low, high) = match (sn.low, sn.high) {
            (Some(l), Some(h)) => (NodeId::internal(l as usize), NodeId::internal(h as usize)),
            (None, Some(h)) => {
                let list = pool_list(spine, pos);
                let digit = digits[pos as usize].expect("missing low digit") as usize;
                (list[digit], NodeId::internal(h as usize))
            }
            (Some(l), None) => {
                let cands = high_candidates(spine, pos, l);
                let digit = digits[pos as usize].expect("missing high digit") as usize;
                (NodeId::internal(l as usize), cands[digit])
            }
            (None, None) => {
                let list = pool_list(spine, pos);
                let used = used_pairs.get(&sn.index).map_or(&[][..], |v| v);
                assert_used_pairs_nested(&list, used, spine.level_rank(pos));
                let pairs = available_pairs(&list, used);
                let digit = digits[pos as usize].expect("missing pair digit") as usize;
                pairs[digit]
            }
        };
        used_pairs.entry(sn.index).or_default().push((low, high));
        nodes.push(BddNode::new(sn.index, low, high));
    }
    Bdd::from_parts(spine.root_index(), NodeId::internal(0), nodes)
}

/// Inverse of [`complete`]: reads off each node's digit from an existing
/// BDD. `extraction` must come from `extract_spine(b)`.
pub(crate) fn completion_digits(b: &Bdd, extraction: &Extraction) -> Vec<Option<u64>> {
    let spine = &extraction.spine;
    let mut spine_pos: HashMap<NodeId, u32> = HashMap::new();
    for (pos, &id) in extraction.node_of.iter().enumerate() {
        spine_pos.insert(id, pos as u32);
    }
    // Translate a BDD target into spine-space ids.
    let translate = |id: NodeId| match id.slot() {
        None => id,
        Some(_) => NodeId::internal(spine_pos[&id] as usize),
    };

    let mut digits = vec![None; spine.node_count() as usize];
    let mut used_pairs: HashMap<u32, Vec<(NodeId, NodeId)>> = HashMap::new();
    for pos in 0..spine.node_count() {
        let sn = spine.nodes()[pos as usize];
        let bdd_node = b.node(extraction.node_of[pos as usize]).expect("mapped node");
        let low = translate(bdd_node.low);
        let high = translate(bdd_node.high);
        match (sn.low, sn.high) {
            (Some(_), Some(_)) => {}
            (None, Some(_)) => {
                let list = pool_list(spine, pos);
                let at = list.iter().position(|&c| c == low).expect("low target in pool");
                digits[pos as usize] = Some(at as u64);
            }
            (Some(l), None) => {
                let cands = high_candidates(spine, pos, l);
                let at = cands
                    .iter()
                    .position(|&c| c == high)
                    .expect("high target among candidates");
                digits[pos as usize] = Some(at as u64);
            }
            (None, None) => {
                let list = pool_list(spine, pos);
                let used = used_pairs.get(&sn.index).map_or(&[][..], |v| v);
                assert_used_pairs_nested(&list, used, spine.level_rank(pos));
                let pairs = available_pairs(&list, used);
                let at = pairs
                    .iter()
                    .position(|&p| p == (low, high))
                    .expect("pair among candidates");
                digits[pos as usize] = Some(at as u64);
            }
        }
        used_pairs.entry(sn.index).or_default().push((low, high));
    }
    digits
}

/// The digit significance order of a spine: for every node, a lone low
/// digit precedes the right subtree, a lone high digit follows the left
/// subtree, and left subtrees precede right subtrees. Radices are the node
/// weights. This matches the rank decomposition of the generation order.
pub(crate) fn digit_order(spine: &Spine) -> Vec<(u32, u64)> {
    fn rec(spine: &Spine, pos: u32, out: &mut Vec<(u32, u64)>) {
        let node = spine.nodes()[pos as usize];
        let radix = || spine.node_weight(pos) as u64;
        match (node.low, node.high) {
            (None, None) => out.push((pos, radix())),
            (None, Some(h)) => {
                out.push((pos, radix()));
                rec(spine, h, out);
            }
            (Some(l), None) => {
                rec(spine, l, out);
                out.push((pos, radix()));
            }
            (Some(l), Some(h)) => {
                rec(spine, l, out);
                rec(spine, h, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(spine, 0, &mut out);
    out
}

/// Iterator over every completion of a spine, in the canonical order (the
/// mixed-radix odometer over the digit significance order).
pub struct Completions<'a> {
    spine: &'a Spine,
    order: Vec<(u32, u64)>,
    current: Option<Vec<u64>>,
}

impl Iterator for Completions<'_> {
    type Item = Bdd;

    fn next(&mut self) -> Option<Bdd> {
        let current = self.current.as_mut()?;
        let mut digits = vec![None; self.spine.node_count() as usize];
        for (&(pos, _), &d) in self.order.iter().zip(current.iter()) {
            digits[pos as usize] = Some(d);
        }
        let bdd = complete(self.spine, &digits);

        // Advance the odometer, least significant digit last.
        let mut done = true;
        for (slot, &(_, radix)) in current.iter_mut().zip(self.order.iter()).rev() {
            *slot += 1;
            if *slot < radix {
                done = false;
                break;
            }
            *slot = 0;
        }
        if done {
            self.current = None;
        }
        Some(bdd)
    }
}

/// Streams every BDD whose spine is exactly `spine`, each once, in the
/// canonical completion order. The number of items equals
/// [`Spine::weight`]; spines heavier than [`COMPLETION_GUARD`] are refused.
pub fn enumerate_completions(spine: &Spine) -> Result<Completions<'_>, Error> {
    let weight = spine.weight();
    if weight.is_zero() {
        return Err(Error::InvalidSpine);
    }
    if weight > BigUint::from(COMPLETION_GUARD) {
        return Err(Error::CompletionGuardExceeded {
            weight,
            guard: COMPLETION_GUARD,
        });
    }
    let order = digit_order(spine);
    debug_assert_eq!(
        order.iter().map(|&(_, r)| BigUint::from(r)).product::<BigUint>(),
        weight
    );
    let start = vec![0u64; order.len()];
    Ok(Completions {
        spine,
        order,
        current: Some(start),
    })
}
