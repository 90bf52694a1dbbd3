//! Graphviz export. Low edges are dotted, high edges solid, and non-tree
//! edges (the spine's red completions) are colored red. Nodes are named by
//! preorder, so the output is deterministic.

use std::collections::HashMap;

use crate::bdd::{Bdd, NodeId};
use crate::spine::{self, EdgeKind};

/// Renders a valid BDD as a DOT digraph with the spine classification.
pub fn to_dot(b: &Bdd) -> String {
    let extraction = spine::extract_spine(b);
    let mut preorder: HashMap<NodeId, usize> = HashMap::new();
    for (pos, &id) in extraction.node_of.iter().enumerate() {
        preorder.insert(id, pos);
    }
    let name = |id: NodeId| match id.slot() {
        None => id.to_string(),
        Some(_) => format!("n{}", preorder[&id]),
    };

    let mut out = String::from("digraph bdd {\n");
    for (pos, &id) in extraction.node_of.iter().enumerate() {
        let node = b.node(id).expect("extraction maps decision nodes");
        out.push_str(&format!("  n{pos} [shape=circle,label=\"x{}\"];\n", node.index));
    }
    out.push_str("  F [shape=square,label=\"F\"];\n");
    out.push_str("  T [shape=square,label=\"T\"];\n");
    for edge in &extraction.edges {
        let style = match edge.kind {
            EdgeKind::Low => "dotted",
            EdgeKind::High => "solid",
        };
        let color = if edge.tree { "" } else { ",color=red" };
        out.push_str(&format!(
            "  {} -> {} [style={style}{color}];\n",
            name(edge.from),
            name(edge.to)
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdd::{BddNode, TruthTable};
    use crate::oracle;

    #[test]
    fn xor_dot_is_deterministic() {
        let b = oracle::compact_truth_table(&TruthTable::from_code(2, 0b0110))
            .bdd()
            .unwrap();
        let dot = to_dot(&b);
        assert_eq!(dot, to_dot(&b));
        assert!(dot.contains("n0 [shape=circle,label=\"x2\"]"));
        // Tree edges to the two x1 nodes are plain; sink edges are red.
        assert!(dot.contains("n0 -> n1 [style=dotted];"));
        assert!(dot.contains("n0 -> n2 [style=solid];"));
        assert!(dot.contains("n1 -> F [style=dotted,color=red];"));
        assert!(dot.contains("n1 -> T [style=solid,color=red];"));
    }

    #[test]
    fn shared_targets_use_red_edges() {
        // Root's high edge re-arrives at the x1 node found via low.
        let b = Bdd::from_parts(
            2,
            NodeId::internal(0),
            vec![
                BddNode::new(2, NodeId::internal(1), NodeId::FALSE),
                BddNode::new(1, NodeId::FALSE, NodeId::TRUE),
            ],
        );
        assert!(b.validate().is_empty());
        let dot = to_dot(&b);
        assert!(dot.contains("n0 -> n1 [style=dotted];"));
        assert!(dot.contains("n0 -> F [style=solid,color=red];"));
    }
}
