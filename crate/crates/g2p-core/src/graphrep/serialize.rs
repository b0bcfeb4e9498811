use serde::{Deserialize, Serialize};

use super::ast::NodeKind;
use super::features::FeaturizedGraph;
use super::graph::EdgeKind;
use crate::cfront::LabelSet;

/// JSONL schema for featurized graphs, the interchange format between the
/// graph builder and the model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecord {
    pub id: String,
    pub labels: LabelSet,
    pub root: u32,
    pub nodes: Vec<GraphNodeRecord>,
    pub edges: Vec<(u32, EdgeKind, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphNodeRecord {
    pub id: u32,
    pub kind: NodeKind,
    pub token_id: u32,
    pub order_id: u8,
}

pub fn build_graph_record(id: &str, labels: LabelSet, f: &FeaturizedGraph) -> GraphRecord {
    GraphRecord {
        id: id.to_string(),
        labels,
        root: f.graph.root as u32,
        nodes: f
            .graph
            .nodes
            .iter()
            .map(|n| GraphNodeRecord {
                id: n.id as u32,
                kind: n.kind,
                token_id: f.token_ids[n.id],
                order_id: f.order_ids[n.id],
            })
            .collect(),
        edges: f
            .graph
            .edges
            .iter()
            .map(|&(s, k, t)| (s as u32, k, t as u32))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::tokenize;
    use crate::graphrep::{build_vocab, encode_features, loop_to_graph};

    fn record_for(src: &str) -> GraphRecord {
        let g = loop_to_graph(&tokenize(src).unwrap()).unwrap();
        let vocab = build_vocab([src], 1);
        let f = encode_features(g, &vocab);
        build_graph_record("t.c#0", LabelSet::NON_PARALLEL, &f)
    }

    #[test]
    fn edge_kind_serializes_lowercase() {
        let json = serde_json::to_string(&(0u32, EdgeKind::AstChild, 1u32)).unwrap();
        assert_eq!(json, "[0,\"ast_child\",1]");
    }

    #[test]
    fn record_round_trips_and_is_deterministic() {
        let src = "for (i = 0; i < 10; i++) s += a[i];";
        let a = serde_json::to_string(&record_for(src)).unwrap();
        let b = serde_json::to_string(&record_for(src)).unwrap();
        assert_eq!(a, b, "identical loop text must serialize identically");
        let back: GraphRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }

    #[test]
    fn record_fields_align_with_graph() {
        let src = "for (i = 0; i < 10; i++) s += a[i];";
        let rec = record_for(src);
        assert_eq!(rec.root, 0);
        assert_eq!(
            rec.nodes.len() as u32,
            rec.nodes.iter().map(|n| n.id).max().unwrap() + 1
        );
        for &(s, _, t) in &rec.edges {
            assert!((s as usize) < rec.nodes.len());
            assert!((t as usize) < rec.nodes.len());
        }
    }
}
