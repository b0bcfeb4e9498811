use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::ast::{Ast, AstNode, NodeKind};

/// Edge taxonomy. Each forward family has a paired reverse, and every node
/// carries one self loop so attention neighbourhoods are never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    AstChild,
    AstParent,
    CfgNext,
    CfgPrev,
    LexNext,
    LexPrev,
    SelfLoop,
}

pub const EDGE_KIND_COUNT: usize = 7;

const ALL_EDGE_KINDS: [EdgeKind; EDGE_KIND_COUNT] = [
    EdgeKind::AstChild,
    EdgeKind::AstParent,
    EdgeKind::CfgNext,
    EdgeKind::CfgPrev,
    EdgeKind::LexNext,
    EdgeKind::LexPrev,
    EdgeKind::SelfLoop,
];

impl EdgeKind {
    pub fn index(self) -> usize {
        ALL_EDGE_KINDS
            .iter()
            .position(|&k| k == self)
            .expect("kind listed")
    }

    pub fn from_index(i: usize) -> Option<EdgeKind> {
        ALL_EDGE_KINDS.get(i).copied()
    }

    pub fn reverse(self) -> EdgeKind {
        match self {
            EdgeKind::AstChild => EdgeKind::AstParent,
            EdgeKind::AstParent => EdgeKind::AstChild,
            EdgeKind::CfgNext => EdgeKind::CfgPrev,
            EdgeKind::CfgPrev => EdgeKind::CfgNext,
            EdgeKind::LexNext => EdgeKind::LexPrev,
            EdgeKind::LexPrev => EdgeKind::LexNext,
            EdgeKind::SelfLoop => EdgeKind::SelfLoop,
        }
    }
}

/// Typed graph over the AST nodes of one loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeteroGraph {
    pub nodes: Vec<AstNode>,
    pub edges: Vec<(usize, EdgeKind, usize)>,
    pub root: usize,
}

impl HeteroGraph {
    /// Node types present (the graph's A).
    pub fn node_type_set(&self) -> BTreeSet<NodeKind> {
        self.nodes.iter().map(|n| n.kind).collect()
    }

    /// Edge types present (the graph's R).
    pub fn edge_type_set(&self) -> BTreeSet<EdgeKind> {
        self.edges.iter().map(|&(_, k, _)| k).collect()
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .filter(move |&&(_, k, _)| k == kind)
            .map(|&(s, _, t)| (s, t))
    }
}

/// Merge the three edge sources into one typed graph: tree edges with their
/// reverses, control-flow pairs with reverses, lexical pairs with reverses,
/// and one self loop per node. Duplicate triples (possible when CFG pairs
/// coincide) are silently dropped.
pub fn assemble_graph(ast: &Ast, cfg: &[(usize, usize)], lex: &[(usize, usize)]) -> HeteroGraph {
    let mut edges = Vec::new();
    let mut seen: HashSet<(usize, EdgeKind, usize)> = HashSet::new();
    let mut push = |edges: &mut Vec<(usize, EdgeKind, usize)>, s: usize, k: EdgeKind, t: usize| {
        if seen.insert((s, k, t)) {
            edges.push((s, k, t));
        }
    };

    for (parent, child) in ast.parent_child_pairs() {
        push(&mut edges, parent, EdgeKind::AstChild, child);
        push(&mut edges, child, EdgeKind::AstParent, parent);
    }
    for &(s, t) in cfg {
        push(&mut edges, s, EdgeKind::CfgNext, t);
        push(&mut edges, t, EdgeKind::CfgPrev, s);
    }
    for &(s, t) in lex {
        push(&mut edges, s, EdgeKind::LexNext, t);
        push(&mut edges, t, EdgeKind::LexPrev, s);
    }
    for node in &ast.nodes {
        push(&mut edges, node.id, EdgeKind::SelfLoop, node.id);
    }

    HeteroGraph {
        nodes: ast.nodes.clone(),
        edges,
        root: ast.root,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::tokenize;
    use crate::graphrep::ast::TreeNode;
    use crate::graphrep::{build_cfg, build_lex_edges, parse_loop};

    fn full_graph(src: &str) -> HeteroGraph {
        let ast = parse_loop(&tokenize(src).unwrap()).unwrap();
        let cfg = build_cfg(&ast);
        let lex = build_lex_edges(&ast);
        assemble_graph(&ast, &cfg, &lex)
    }

    #[test]
    fn edge_count_formula() {
        for src in [
            "for (i = 0; i < n; i++) a[i] = b[i] + 1;",
            "for (i = 0; i < n; i++) { s += a[i]; t *= 2; }",
            "for (j = 0; j < 4; j++) for (i = 0; i < 5; i++) l++;",
        ] {
            let ast = parse_loop(&tokenize(src).unwrap()).unwrap();
            let cfg = build_cfg(&ast);
            let lex = build_lex_edges(&ast);
            let g = assemble_graph(&ast, &cfg, &lex);
            let n = ast.len();
            assert_eq!(
                g.edges.len(),
                2 * (n - 1) + 2 * cfg.len() + 2 * lex.len() + n,
                "count mismatch for {src:?}"
            );
        }
    }

    #[test]
    fn single_node_tree_has_only_self_loop() {
        let ast = TreeNode::leaf(NodeKind::Identifier, "x").flatten();
        let g = assemble_graph(&ast, &[], &[]);
        assert_eq!(g.edges, vec![(0, EdgeKind::SelfLoop, 0)]);
    }

    #[test]
    fn reverse_closure_holds() {
        let g = full_graph("for (i = 0; i < n; i++) { if (i > 2) a[i] = f(i); }");
        let set: HashSet<_> = g.edges.iter().copied().collect();
        for &(s, k, t) in &g.edges {
            assert!(
                set.contains(&(t, k.reverse(), s)),
                "missing reverse of ({s}, {k:?}, {t})"
            );
        }
    }

    #[test]
    fn exactly_one_self_loop_per_node() {
        let g = full_graph("for (i = 0; i < n; i++) a[i] = 0;");
        let self_loops: Vec<_> = g.edges_of_kind(EdgeKind::SelfLoop).collect();
        assert_eq!(self_loops.len(), g.nodes.len());
        for (i, &(s, t)) in self_loops.iter().enumerate() {
            assert_eq!((s, t), (i, i));
        }
    }

    #[test]
    fn ast_child_edges_form_tree() {
        let g = full_graph("for (i = 0; i < n; i++) { a[i] = 0; b[i] = 1; }");
        let child_edges: Vec<_> = g.edges_of_kind(EdgeKind::AstChild).collect();
        assert_eq!(child_edges.len(), g.nodes.len() - 1);
        let mut indegree = vec![0usize; g.nodes.len()];
        for (_, t) in child_edges {
            indegree[t] += 1;
        }
        assert_eq!(indegree[g.root], 0);
        for (i, &d) in indegree.iter().enumerate() {
            if i != g.root {
                assert_eq!(d, 1, "node {i} must have exactly one ast_child in-edge");
            }
        }
    }

    #[test]
    fn no_duplicate_triples() {
        let g = full_graph("for (j = 0; j < 4; j++) for (i = 0; i < 5; i++) l++;");
        let set: HashSet<_> = g.edges.iter().copied().collect();
        assert_eq!(set.len(), g.edges.len());
    }

    #[test]
    fn type_sets_reflect_contents() {
        let g = full_graph("for (i = 0; i < n; i++) a[i] = f(i);");
        assert!(g.node_type_set().contains(&NodeKind::Call));
        assert!(g.edge_type_set().contains(&EdgeKind::CfgNext));
        assert!(g.edge_type_set().contains(&EdgeKind::SelfLoop));
    }
}
