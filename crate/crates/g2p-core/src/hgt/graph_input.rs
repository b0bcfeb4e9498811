use crate::graphrep::{FeaturizedGraph, GraphRecord};

use super::config::ModelConfig;
use super::ModelError;

/// Model-side view of a featurized graph: dense typed nodes, typed edges,
/// and a per-node list of incoming edge indices for attention.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGraph {
    pub n: usize,
    pub node_type: Vec<u8>,
    pub token_id: Vec<u32>,
    pub order_id: Vec<u8>,
    pub root: usize,
    /// (source, edge type, target).
    pub edges: Vec<(u32, u8, u32)>,
    /// Incoming edge indices per target node.
    pub in_edges: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub id: String,
    pub graph: ModelGraph,
    pub label: bool,
}

impl ModelGraph {
    pub fn new(
        node_type: Vec<u8>,
        token_id: Vec<u32>,
        order_id: Vec<u8>,
        root: usize,
        edges: Vec<(u32, u8, u32)>,
    ) -> ModelGraph {
        let n = node_type.len();
        let mut in_edges = vec![Vec::new(); n];
        for (idx, &(_, _, dst)) in edges.iter().enumerate() {
            in_edges[dst as usize].push(idx as u32);
        }
        ModelGraph {
            n,
            node_type,
            token_id,
            order_id,
            root,
            edges,
            in_edges,
        }
    }

    /// Bounds checks against a configuration; run before any forward pass.
    pub fn validate(&self, config: &ModelConfig) -> Result<(), ModelError> {
        let fail = |msg: String| Err(ModelError::GraphMismatch(msg));
        if self.n == 0 {
            return fail("graph has no nodes".into());
        }
        if self.root >= self.n {
            return fail(format!(
                "root {} out of range for {} nodes",
                self.root, self.n
            ));
        }
        for (&ty, (&tok, &ord)) in self
            .node_type
            .iter()
            .zip(self.token_id.iter().zip(self.order_id.iter()))
        {
            if ty as usize >= config.n_node_types {
                return fail(format!("node type {ty} exceeds {}", config.n_node_types));
            }
            if tok as usize >= config.vocab_size {
                return fail(format!(
                    "token id {tok} exceeds vocab size {}",
                    config.vocab_size
                ));
            }
            if ord as usize >= config.n_order_buckets {
                return fail(format!("order id {ord} exceeds {}", config.n_order_buckets));
            }
        }
        for &(src, et, dst) in &self.edges {
            if src as usize >= self.n || dst as usize >= self.n {
                return fail(format!("edge ({src},{et},{dst}) out of range"));
            }
            if et as usize >= config.n_edge_types {
                return fail(format!("edge type {et} exceeds {}", config.n_edge_types));
            }
        }
        for (node, incoming) in self.in_edges.iter().enumerate() {
            if incoming.is_empty() {
                return fail(format!(
                    "node {node} has no incoming edges (self loop missing)"
                ));
            }
        }
        Ok(())
    }
}

impl From<&FeaturizedGraph> for ModelGraph {
    fn from(f: &FeaturizedGraph) -> ModelGraph {
        ModelGraph::new(
            f.graph.nodes.iter().map(|n| n.kind.index() as u8).collect(),
            f.token_ids.clone(),
            f.order_ids.clone(),
            f.graph.root,
            f.graph
                .edges
                .iter()
                .map(|&(s, k, t)| (s as u32, k.index() as u8, t as u32))
                .collect(),
        )
    }
}

pub fn model_graph_from_record(record: &GraphRecord) -> ModelGraph {
    ModelGraph::new(
        record.nodes.iter().map(|n| n.kind.index() as u8).collect(),
        record.nodes.iter().map(|n| n.token_id).collect(),
        record.nodes.iter().map(|n| n.order_id).collect(),
        record.root as usize,
        record
            .edges
            .iter()
            .map(|&(s, k, t)| (s, k.index() as u8, t))
            .collect(),
    )
}
