//! DOT and JSON renderings of crystal graphs.

use std::collections::VecDeque;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::cartan::Weight;
use crate::lattice::CrystalGraph;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub wt: Weight,
    pub eps: Vec<i64>,
    pub phi: Vec<i64>,
}

/// `i` is the vertex id, not its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub src: usize,
    pub dst: usize,
    pub i: u32,
    pub l: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &CrystalGraph) -> GraphDoc {
        GraphDoc {
            nodes: g
                .nodes
                .iter()
                .enumerate()
                .map(|(k, n)| NodeDoc { id: k, wt: n.wt.clone(), eps: n.eps.clone(), phi: n.phi.clone() })
                .collect(),
            edges: g
                .edges()
                .into_iter()
                .map(|(s, t, x)| EdgeDoc { src: s, dst: t, i: g.datum.id(x.i), l: x.l })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Parses and checks that ids are `0..n` in order and edges stay in range.
    pub fn parse(text: &str) -> Result<GraphDoc> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let n = doc.nodes.len();
        if doc.nodes.iter().enumerate().any(|(k, x)| x.id != k) {
            return Err(Error::Parse { line: 0, msg: "node ids must be 0, 1, 2, ... in order".into() });
        }
        if doc.edges.iter().any(|e| e.src >= n || e.dst >= n) {
            return Err(Error::Parse { line: 0, msg: "edge endpoint out of range".into() });
        }
        Ok(doc)
    }
}

/// For each node, the `f̃` path from node 0 along the BFS tree, written
/// `f(i,l)...f(j,k)` with the last operator applied first; node 0 is `1`.
pub fn path_labels(g: &CrystalGraph) -> Vec<String> {
    let mut label: Vec<Option<String>> = vec![None; g.len()];
    if g.is_empty() {
        return Vec::new();
    }
    label[0] = Some("1".into());
    let edges = g.edges();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for &(a, t, x) in edges.iter().filter(|e| e.0 == s) {
            if label[t].is_none() {
                let prev = label[a].clone().unwrap();
                let op = format!("f{}", g.datum.fmt_gen(x));
                label[t] = Some(if prev == "1" { op } else { format!("{}{}", op, prev) });
                queue.push_back(t);
            }
        }
    }
    label.into_iter().map(|l| l.unwrap_or_else(|| "?".into())).collect()
}

pub fn to_dot(g: &CrystalGraph, name: &str) -> String {
    let labels = path_labels(g);
    let mut out = String::new();
    writeln!(out, "digraph {} {{", name).unwrap();
    for (k, n) in g.nodes.iter().enumerate() {
        writeln!(out, "  n{} [label=\"{}\\n{}\"];", k, n.wt.render(&g.datum), labels[k]).unwrap();
    }
    for (s, t, x) in g.edges() {
        writeln!(out, "  n{} -> n{} [label=\"{}:{}\"];", s, t, g.datum.id(x.i), x.l).unwrap();
    }
    out.push_str("}\n");
    out
}

/// One line per node: id, weight, `ε`, `φ`, path, then its `f̃` arrows.
pub fn to_text(g: &CrystalGraph) -> String {
    let labels = path_labels(g);
    let mut out = String::new();
    for (k, n) in g.nodes.iter().enumerate() {
        let arrows: Vec<String> = g
            .edges()
            .into_iter()
            .filter(|e| e.0 == k)
            .map(|(_, t, x)| format!("{}:{}->{}", g.datum.id(x.i), x.l, t))
            .collect();
        write!(out, "{} wt=[{}] eps={:?} phi={:?} {}", k, n.wt.render(&g.datum), n.eps, n.phi, labels[k]).unwrap();
        for a in arrows {
            write!(out, " {}", a).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binf::build_binf;
    use crate::cartan::BorcherdsCartanDatum;
    use crate::uqminus::DEFAULT_WORD_CAP;

    #[test]
    fn json_roundtrip() {
        let b = build_binf(BorcherdsCartanDatum::mixed(), 3, DEFAULT_WORD_CAP).unwrap();
        let doc = GraphDoc::from_graph(&b.graph);
        let back = GraphDoc::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.nodes.len(), b.graph.len());
        assert!(GraphDoc::parse("{\"nodes\": [], \"edges\": [{\"src\":0,\"dst\":1,\"i\":1,\"l\":1}]}").is_err());
    }

    #[test]
    fn dot_shape() {
        let b = build_binf(BorcherdsCartanDatum::rank_one(0), 2, DEFAULT_WORD_CAP).unwrap();
        let dot = to_dot(&b.graph, "binf");
        assert_eq!(dot.matches("->").count(), b.graph.edges().len());
        assert!(dot.contains("label=\"1:2\""));
        assert_eq!(dot, to_dot(&b.graph, "binf"));
    }
}
