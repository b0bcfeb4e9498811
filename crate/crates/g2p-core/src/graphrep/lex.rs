use super::ast::Ast;

/// Lexical neighbour pairs `(leaf_k, leaf_{k+1})` over the in-order leaf
/// sequence; `max(0, L - 1)` pairs for `L` leaves.
pub fn build_lex_edges(ast: &Ast) -> Vec<(usize, usize)> {
    let leaves = ast.leaves_in_order();
    leaves.windows(2).map(|w| (w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::tokenize;
    use crate::graphrep::ast::{NodeKind, TreeNode};
    use crate::graphrep::parse_loop;

    #[test]
    fn single_leaf_has_no_edges() {
        let ast = TreeNode::leaf(NodeKind::Identifier, "x").flatten();
        assert!(build_lex_edges(&ast).is_empty());
    }

    #[test]
    fn minimal_loop_has_ten_edges() {
        let ast = parse_loop(&tokenize("for(i=0;i<2;i++);").unwrap()).unwrap();
        let edges = build_lex_edges(&ast);
        assert_eq!(ast.leaves_in_order().len(), 11);
        assert_eq!(edges.len(), 10);
    }

    #[test]
    fn leaf_order_follows_token_order() {
        let src = "for (i = 0; i < 10; i++) sum += a[i];";
        let tokens = tokenize(src).unwrap();
        let ast = parse_loop(&tokens).unwrap();
        let edges = build_lex_edges(&ast);
        // The chain is a simple path over all leaves in id order.
        let leaves = ast.leaves_in_order();
        assert_eq!(edges.len(), leaves.len() - 1);
        for (k, &(a, b)) in edges.iter().enumerate() {
            assert_eq!(a, leaves[k]);
            assert_eq!(b, leaves[k + 1]);
        }
        // Leaf texts are an ordered subsequence of the token texts.
        let token_texts: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        let mut cursor = 0;
        for &leaf in &leaves {
            let text = ast.nodes[leaf].text.as_str();
            let next = token_texts[cursor..].iter().position(|t| *t == text);
            assert!(next.is_some(), "leaf {text:?} not found in order");
            cursor += next.unwrap() + 1;
        }
    }
}
