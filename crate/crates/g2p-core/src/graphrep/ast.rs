use serde::{Deserialize, Serialize};

/// Node taxonomy of the augmented AST, covering the restricted statement and
/// expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    ForStmt,
    InitClause,
    CondClause,
    UpdateClause,
    CompoundStmt,
    ExprStmt,
    DeclStmt,
    IfStmt,
    WhileStmt,
    Assign,
    Binop,
    Unop,
    Call,
    Subscript,
    Identifier,
    Constant,
    OperatorLeaf,
}

pub const NODE_KIND_COUNT: usize = 17;

const ALL_KINDS: [NodeKind; NODE_KIND_COUNT] = [
    NodeKind::ForStmt,
    NodeKind::InitClause,
    NodeKind::CondClause,
    NodeKind::UpdateClause,
    NodeKind::CompoundStmt,
    NodeKind::ExprStmt,
    NodeKind::DeclStmt,
    NodeKind::IfStmt,
    NodeKind::WhileStmt,
    NodeKind::Assign,
    NodeKind::Binop,
    NodeKind::Unop,
    NodeKind::Call,
    NodeKind::Subscript,
    NodeKind::Identifier,
    NodeKind::Constant,
    NodeKind::OperatorLeaf,
];

impl NodeKind {
    pub fn index(self) -> usize {
        ALL_KINDS
            .iter()
            .position(|&k| k == self)
            .expect("kind listed")
    }

    pub fn from_index(i: usize) -> Option<NodeKind> {
        ALL_KINDS.get(i).copied()
    }

    /// Token-bearing kinds. Only these participate in the lexical chain and
    /// carry vocabulary features.
    pub fn is_leaf(self) -> bool {
        matches!(
            self,
            NodeKind::Identifier | NodeKind::Constant | NodeKind::OperatorLeaf
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstNode {
    /// Dense 0-based id; ids are assigned in pre-order, so leaves appear in
    /// source order when read by increasing id.
    pub id: usize,
    pub kind: NodeKind,
    /// Token text for leaves, empty for interior nodes.
    pub text: String,
    /// 0-based position among siblings; 0 for the root.
    pub child_index: usize,
    pub children: Vec<usize>,
}

/// Arena-backed tree. `nodes[i].id == i` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ast {
    pub nodes: Vec<AstNode>,
    pub root: usize,
}

impl Ast {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, id: usize) -> NodeKind {
        self.nodes[id].kind
    }

    /// Leaf ids in source order. Pre-order numbering makes this just an
    /// id-ordered filter.
    pub fn leaves_in_order(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.kind.is_leaf())
            .map(|n| n.id)
            .collect()
    }

    /// (parent, child) pairs in pre-order.
    pub fn parent_child_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(self.nodes.len().saturating_sub(1));
        for node in &self.nodes {
            for &c in &node.children {
                pairs.push((node.id, c));
            }
        }
        pairs
    }
}

/// Construction-time tree; flattened into an [`Ast`] with pre-order ids.
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub kind: NodeKind,
    pub text: String,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn interior(kind: NodeKind, children: Vec<TreeNode>) -> Self {
        TreeNode {
            kind,
            text: String::new(),
            children,
        }
    }

    pub fn leaf(kind: NodeKind, text: impl Into<String>) -> Self {
        TreeNode {
            kind,
            text: text.into(),
            children: Vec::new(),
        }
    }

    pub fn flatten(self) -> Ast {
        let mut nodes = Vec::new();
        flatten_into(self, 0, &mut nodes);
        Ast { nodes, root: 0 }
    }
}

fn flatten_into(node: TreeNode, child_index: usize, nodes: &mut Vec<AstNode>) -> usize {
    let id = nodes.len();
    nodes.push(AstNode {
        id,
        kind: node.kind,
        text: node.text,
        child_index,
        children: Vec::with_capacity(node.children.len()),
    });
    for (i, child) in node.children.into_iter().enumerate() {
        let child_id = flatten_into(child, i, nodes);
        nodes[id].children.push(child_id);
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_index_round_trips() {
        for i in 0..NODE_KIND_COUNT {
            let k = NodeKind::from_index(i).unwrap();
            assert_eq!(k.index(), i);
        }
    }

    #[test]
    fn kind_serializes_snake_case() {
        let s = serde_json::to_string(&NodeKind::ForStmt).unwrap();
        assert_eq!(s, "\"for_stmt\"");
        let s = serde_json::to_string(&NodeKind::OperatorLeaf).unwrap();
        assert_eq!(s, "\"operator_leaf\"");
    }

    #[test]
    fn flatten_assigns_preorder_ids() {
        let tree = TreeNode::interior(
            NodeKind::Binop,
            vec![
                TreeNode::leaf(NodeKind::Identifier, "a"),
                TreeNode::leaf(NodeKind::OperatorLeaf, "+"),
                TreeNode::interior(
                    NodeKind::Binop,
                    vec![
                        TreeNode::leaf(NodeKind::Identifier, "b"),
                        TreeNode::leaf(NodeKind::OperatorLeaf, "*"),
                        TreeNode::leaf(NodeKind::Identifier, "c"),
                    ],
                ),
            ],
        );
        let ast = tree.flatten();
        assert_eq!(ast.len(), 7);
        assert_eq!(ast.nodes[0].children, vec![1, 2, 3]);
        assert_eq!(ast.nodes[3].children, vec![4, 5, 6]);
        assert_eq!(ast.nodes[3].child_index, 2);
        let leaf_texts: Vec<&str> = ast
            .leaves_in_order()
            .iter()
            .map(|&i| ast.nodes[i].text.as_str())
            .collect();
        assert_eq!(leaf_texts, vec!["a", "+", "b", "*", "c"]);
    }
}
