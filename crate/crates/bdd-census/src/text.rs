//! The line-oriented BDD text format.
//!
//! One BDD per file: a header `bdd k=<k> n=<n> root=<id>` followed by one
//! line `<id> <index> <low> <high>` per decision node, where the sinks are
//! written `F` and `T`. [`emit`] renumbers nodes by preorder and always
//! produces the same bytes for the same diagram, so emitted files can be
//! compared bit-exactly.

use std::collections::HashMap;

use crate::bdd::{Bdd, BddNode, NodeId};
use crate::error::Error;

/// Serializes a valid BDD, nodes renumbered by preorder starting at 0.
pub fn emit(b: &Bdd) -> String {
    let order = b.preorder();
    debug_assert_eq!(order.len(), b.nodes().len(), "emit requires a valid BDD");
    let mut rank = vec![usize::MAX; b.nodes().len()];
    for (r, &slot) in order.iter().enumerate() {
        rank[slot] = r;
    }
    let render = |id: NodeId| match id.slot() {
        None => id.to_string(),
        Some(slot) => rank[slot].to_string(),
    };

    let mut out = format!(
        "bdd k={} n={} root={}\n",
        b.vars(),
        b.size(),
        render(b.root())
    );
    for &slot in &order {
        let node = b.nodes()[slot];
        out.push_str(&format!(
            "{} {} {} {}\n",
            rank[slot],
            node.index,
            render(node.low),
            render(node.high)
        ));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<'a>(tokens: &[&'a str], at: usize, line: usize, what: &str) -> Result<&'a str, Error> {
    tokens
        .get(at)
        .copied()
        .ok_or_else(|| parse_err(line, format!("missing {what}")))
}

fn parse_u32(token: &str, line: usize, what: &str) -> Result<u32, Error> {
    token
        .parse::<u32>()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

fn keyed(token: &str, key: &str, line: usize) -> Result<String, Error> {
    match token.strip_prefix(key) {
        Some(rest) => Ok(rest.to_string()),
        None => Err(parse_err(line, format!("expected `{key}...`, found `{token}`"))),
    }
}

/// Parses the text format. Node lines may appear in any order and use any
/// distinct decimal ids; the result is *not* validated beyond structural
/// well-formedness (run [`Bdd::validate`] for the full constraint check).
pub fn parse(input: &str) -> Result<Bdd, Error> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input".to_string()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if field(&tokens, 0, 1, "header")? != "bdd" {
        return Err(parse_err(1, "expected header starting with `bdd`"));
    }
    let vars = parse_u32(&keyed(field(&tokens, 1, 1, "k field")?, "k=", 1)?, 1, "k")?;
    let size = parse_u32(&keyed(field(&tokens, 2, 1, "n field")?, "n=", 1)?, 1, "n")?;
    let root_token = keyed(field(&tokens, 3, 1, "root field")?, "root=", 1)?;
    if tokens.len() > 4 {
        return Err(parse_err(1, "trailing fields after root"));
    }
    if size < 2 {
        return Err(parse_err(1, format!("size {size} is too small")));
    }

    struct RawNode {
        line: usize,
        index: u32,
        low: String,
        high: String,
    }
    let mut slots: HashMap<u32, usize> = HashMap::new();
    let mut raw: Vec<RawNode> = Vec::new();
    for (lineno, line) in lines {
        let lineno = lineno + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(parse_err(lineno, "blank line"));
        }
        if tokens.len() != 4 {
            return Err(parse_err(
                lineno,
                format!("expected `<id> <index> <low> <high>`, found {} fields", tokens.len()),
            ));
        }
        let id = parse_u32(tokens[0], lineno, "node id")?;
        if slots.insert(id, raw.len()).is_some() {
            return Err(parse_err(lineno, format!("duplicate node id {id}")));
        }
        raw.push(RawNode {
            line: lineno,
            index: parse_u32(tokens[1], lineno, "node index")?,
            low: tokens[2].to_string(),
            high: tokens[3].to_string(),
        });
    }

    if raw.len() + 2 != size as usize {
        return Err(parse_err(
            1,
            format!("header declares n={size} but the file has {} nodes", raw.len()),
        ));
    }

    let resolve = |token: &str, line: usize| -> Result<NodeId, Error> {
        match token {
            "F" => Ok(NodeId::FALSE),
            "T" => Ok(NodeId::TRUE),
            _ => {
                let id = parse_u32(token, line, "node reference")?;
                slots
                    .get(&id)
                    .map(|&slot| NodeId::internal(slot))
                    .ok_or_else(|| parse_err(line, format!("reference to unknown node {id}")))
            }
        }
    };

    let mut nodes = Vec::with_capacity(raw.len());
    for node in &raw {
        nodes.push(BddNode::new(
            node.index,
            resolve(&node.low, node.line)?,
            resolve(&node.high, node.line)?,
        ));
    }
    let root = resolve(&root_token, 1)?;
    Ok(Bdd::from_parts(vars, root, nodes))
}
