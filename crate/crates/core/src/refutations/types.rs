use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{AffinePoly, Field, Residue};
use crate::instances::{format_row, parse_residues, parse_row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofKind {
    LinTree,
    BinDag,
    BinRegDag,
    LinDag,
}

impl fmt::Display for ProofKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofKind::LinTree => "lintree",
            ProofKind::BinDag => "bindag",
            ProofKind::BinRegDag => "binregdag",
            ProofKind::LinDag => "lindag",
        })
    }
}

impl FromStr for ProofKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lintree" => Ok(ProofKind::LinTree),
            "bindag" => Ok(ProofKind::BinDag),
            "binregdag" => Ok(ProofKind::BinRegDag),
            "lindag" => Ok(ProofKind::LinDag),
            _ => Err(format!("unknown proof kind `{s}`")),
        }
    }
}

/// What a splitting node branches on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    /// 0-based variable index.
    Var(usize),
    /// Coefficients of a linear form.
    Form(Vec<Residue>),
}

impl Split {
    /// The split as a linear form with zero constant.
    pub fn form(&self, field: Field, n: usize) -> AffinePoly {
        match self {
            Split::Var(j) => AffinePoly::variable(field, n, *j),
            Split::Form(c) => AffinePoly::form(field, c),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeRecord {
    pub terminal: bool,
    pub split: Option<Split>,
    /// Node system as polynomials `f - a`; empty for tree nodes.
    pub system: Vec<AffinePoly>,
}

/// An edge labelled with the equation `f = a`, stored as `f - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: AffinePoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub kind: ProofKind,
    pub field: Field,
    pub n: usize,
    pub root: usize,
    pub nodes: BTreeMap<usize, NodeRecord>,
    pub edges: Vec<Edge>,
}

impl Refutation {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.from == id)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "kind {}", self.kind).unwrap();
        writeln!(out, "root {}", self.root).unwrap();
        for (id, node) in &self.nodes {
            if node.terminal {
                writeln!(out, "node {id} terminal").unwrap();
            } else {
                writeln!(out, "node {id}").unwrap();
            }
            match &node.split {
                Some(Split::Var(j)) => writeln!(out, "split var {j}").unwrap(),
                Some(Split::Form(c)) => {
                    let cs: Vec<String> = c.iter().map(u32::to_string).collect();
                    writeln!(out, "split form {}", cs.join(" ")).unwrap();
                }
                None => {}
            }
            for q in &node.system {
                writeln!(out, "eq {}", format_row(q.coeffs(), q.rhs())).unwrap();
            }
        }
        for e in &self.edges {
            writeln!(
                out,
                "edge {} {} {}",
                e.from,
                e.to,
                format_row(e.label.coeffs(), e.label.rhs())
            )
            .unwrap();
        }
        out
    }

    /// Parse a proof file over `n` variables. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str, field: Field, n: usize) -> Result<Self> {
        let mut kind = None;
        let mut root = None;
        let mut nodes: BTreeMap<usize, NodeRecord> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut edge_lines = Vec::new();
        let mut current: Option<usize> = None;
        let mut root_line = 0;

        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "kind" if kind.is_none() => {
                    kind = Some(rest.parse::<ProofKind>().map_err(|m| Error::parse(ln, m))?);
                }
                "root" if kind.is_some() && root.is_none() => {
                    root = Some(parse_id(rest, ln)?);
                    root_line = ln;
                }
                _ if kind.is_none() || root.is_none() => {
                    return Err(Error::parse(ln, "expected `kind` then `root` header"));
                }
                "node" => {
                    if !edges.is_empty() {
                        return Err(Error::parse(ln, "node after edge lines"));
                    }
                    let mut parts = rest.split_whitespace();
                    let id = parse_id(parts.next().unwrap_or(""), ln)?;
                    let terminal = match parts.next() {
                        None => false,
                        Some("terminal") => true,
                        Some(t) => return Err(Error::parse(ln, format!("unexpected `{t}`"))),
                    };
                    if parts.next().is_some() {
                        return Err(Error::parse(ln, "trailing tokens"));
                    }
                    if nodes.contains_key(&id) {
                        return Err(Error::parse(ln, format!("duplicate node {id}")));
                    }
                    nodes.insert(
                        id,
                        NodeRecord {
                            terminal,
                            ..NodeRecord::default()
                        },
                    );
                    current = Some(id);
                }
                "split" => {
                    let node = current
                        .filter(|_| edges.is_empty())
                        .and_then(|id| nodes.get_mut(&id))
                        .ok_or_else(|| Error::parse(ln, "`split` outside a node block"))?;
                    if node.split.is_some() || !node.system.is_empty() {
                        return Err(Error::parse(
                            ln,
                            "`split` must come first and once per node",
                        ));
                    }
                    let (which, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                    node.split = Some(match which {
                        "var" => {
                            let j = parse_id(args.trim(), ln)?;
                            if j >= n {
                                return Err(Error::parse(ln, format!("variable {j} out of range")));
                            }
                            Split::Var(j)
                        }
                        "form" => {
                            let c = parse_residues(args, field, ln)?;
                            if c.len() != n {
                                return Err(Error::parse(ln, format!("expected {n} coefficients")));
                            }
                            Split::Form(c)
                        }
                        _ => return Err(Error::parse(ln, "expected `split var` or `split form`")),
                    });
                }
                "eq" => {
                    let node = current
                        .filter(|_| edges.is_empty())
                        .and_then(|id| nodes.get_mut(&id))
                        .ok_or_else(|| Error::parse(ln, "`eq` outside a node block"))?;
                    let (c, v) = parse_row(rest, n, field, ln)?;
                    node.system.push(AffinePoly::equation(field, &c, v));
                }
                "edge" => {
                    let mut parts = rest.splitn(3, char::is_whitespace);
                    let from = parse_id(parts.next().unwrap_or(""), ln)?;
                    let to = parse_id(parts.next().unwrap_or(""), ln)?;
                    let (c, v) = parse_row(parts.next().unwrap_or(""), n, field, ln)?;
                    edges.push(Edge {
                        from,
                        to,
                        label: AffinePoly::equation(field, &c, v),
                    });
                    edge_lines.push(ln);
                }
                _ => return Err(Error::parse(ln, format!("unknown directive `{head}`"))),
            }
        }

        let (Some(kind), Some(root)) = (kind, root) else {
            return Err(Error::parse(
                text.lines().count().max(1),
                "missing `kind`/`root` header",
            ));
        };
        if !nodes.contains_key(&root) {
            return Err(Error::parse(
                root_line,
                format!("root {root} is not a node"),
            ));
        }
        for (e, &ln) in edges.iter().zip(&edge_lines) {
            for id in [e.from, e.to] {
                if !nodes.contains_key(&id) {
                    return Err(Error::parse(
                        ln,
                        format!("edge refers to missing node {id}"),
                    ));
                }
            }
        }
        Ok(Refutation {
            kind,
            field,
            n,
            root,
            nodes,
            edges,
        })
    }
}

fn parse_id(s: &str, ln: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(ln, format!("bad index `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_NODES: &str = "kind binregdag\nroot 0\nnode 0\nsplit var 0\neq 1 | 3\nnode 1 terminal\neq 0 | 3\nnode 2 terminal\neq 0 | 2\nedge 0 1 1 | 0\nedge 0 2 1 | 1\n";

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn round_trip_bytes() {
        let r = Refutation::parse(THREE_NODES, f5(), 1).unwrap();
        assert_eq!(r.size(), 3);
        assert_eq!(r.to_text(), THREE_NODES);
    }

    #[test]
    fn dangling_edge() {
        let text = "kind lindag\nroot 0\nnode 0 terminal\nedge 0 7 1 | 0\n";
        assert!(matches!(
            Refutation::parse(text, f5(), 1),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn empty_and_headerless() {
        assert!(matches!(
            Refutation::parse("", f5(), 1),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Refutation::parse("node 0\n", f5(), 1),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Refutation::parse("kind lindag\nroot 3\nnode 0 terminal\n", f5(), 1),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn form_split_round_trip() {
        let text =
            "kind lintree\nroot 0\nnode 0\nsplit form 1 1\nnode 1 terminal\nedge 0 1 1 1 | 2\n";
        let r = Refutation::parse(text, f5(), 2).unwrap();
        assert_eq!(r.nodes[&0].split, Some(Split::Form(vec![1, 1])));
        assert_eq!(r.to_text(), text);
    }
}
