//! Heterogeneous augmented-AST construction.
//!
//! A loop's AST is expressed as a typed graph: tree edges, statement-level
//! control-flow edges merged onto the same nodes, and lexical edges linking
//! each leaf token to its neighbours. Reverse edge kinds and per-node self
//! loops are added so every node has a nonempty attention neighbourhood.

mod ast;
mod cfg;
mod features;
mod graph;
mod lex;
mod parser;
mod serialize;

pub use ast::{Ast, AstNode, NodeKind, NODE_KIND_COUNT};
pub use cfg::build_cfg;
pub use features::{
    build_vocab, encode_features, FeaturizedGraph, Vocab, ORDER_BUCKETS, TOKEN_INTERIOR, TOKEN_UNK,
};
pub use graph::{assemble_graph, EdgeKind, HeteroGraph, EDGE_KIND_COUNT};
pub use lex::build_lex_edges;
pub use parser::parse_loop;
pub use serialize::{build_graph_record, GraphNodeRecord, GraphRecord};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: u32,
        col: u32,
        message: String,
    },
    #[error("syntax error: unexpected end of input ({message})")]
    UnexpectedEnd { message: String },
}

/// Full pipeline for one loop: parse, build CFG and lexical edges, assemble.
pub fn loop_to_graph(tokens: &[crate::cfront::Token]) -> Result<HeteroGraph, GraphError> {
    let ast = parse_loop(tokens)?;
    let cfg = build_cfg(&ast);
    let lex = build_lex_edges(&ast);
    Ok(assemble_graph(&ast, &cfg, &lex))
}
