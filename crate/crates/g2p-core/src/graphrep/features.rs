use std::collections::{BTreeMap, HashMap};

use super::graph::HeteroGraph;
use crate::cfront::tokenize;

/// Reserved vocabulary id for interior (non-leaf) nodes.
pub const TOKEN_INTERIOR: u32 = 0;
/// Reserved vocabulary id for out-of-vocabulary leaf tokens.
pub const TOKEN_UNK: u32 = 1;
/// Sibling positions 0..7 keep their own bucket; 8 and beyond share one.
pub const ORDER_BUCKETS: usize = 9;

/// Token-text to id mapping. Ids 0 and 1 are reserved; real tokens start
/// at 2, ordered by descending corpus frequency with lexicographic
/// tie-breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    map: BTreeMap<String, u32>,
}

impl Vocab {
    pub fn id(&self, text: &str) -> u32 {
        self.map.get(text).copied().unwrap_or(TOKEN_UNK)
    }

    pub fn contains(&self, text: &str) -> bool {
        self.map.contains_key(text)
    }

    /// Table size including the two reserved ids.
    pub fn size(&self) -> usize {
        self.map.len() + 2
    }

    /// Serialize as a plain token-to-id object. Reserved ids are implicit.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.map).expect("vocab serializes")
    }

    pub fn from_json(json: &str) -> Result<Vocab, serde_json::Error> {
        let map: BTreeMap<String, u32> = serde_json::from_str(json)?;
        Ok(Vocab { map })
    }

    pub fn from_map(map: BTreeMap<String, u32>) -> Vocab {
        Vocab { map }
    }
}

/// Build a vocabulary from loop texts. Tokens with corpus frequency below
/// `min_freq` map to the UNK id. Loops that fail to tokenize contribute
/// nothing.
pub fn build_vocab<'a>(texts: impl IntoIterator<Item = &'a str>, min_freq: usize) -> Vocab {
    assert!(min_freq >= 1, "min_freq must be at least 1");
    let mut counts: HashMap<String, usize> = HashMap::new();
    for text in texts {
        if let Ok(tokens) = tokenize(text) {
            for t in tokens {
                *counts.entry(t.text).or_insert(0) += 1;
            }
        }
    }
    let mut ordered: Vec<(String, usize)> =
        counts.into_iter().filter(|(_, c)| *c >= min_freq).collect();
    ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut map = BTreeMap::new();
    for (next_id, (text, _)) in ordered.into_iter().enumerate() {
        map.insert(text, next_id as u32 + 2);
    }
    Vocab { map }
}

/// A graph with per-node input feature ids attached.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturizedGraph {
    pub graph: HeteroGraph,
    /// Vocabulary id per node; interior nodes get [`TOKEN_INTERIOR`].
    pub token_ids: Vec<u32>,
    /// Bucketed child index per node, `min(child_index, 8)`.
    pub order_ids: Vec<u8>,
}

pub fn encode_features(graph: HeteroGraph, vocab: &Vocab) -> FeaturizedGraph {
    let token_ids = graph
        .nodes
        .iter()
        .map(|n| {
            if n.kind.is_leaf() && !n.text.is_empty() {
                vocab.id(&n.text)
            } else {
                TOKEN_INTERIOR
            }
        })
        .collect();
    let order_ids = graph
        .nodes
        .iter()
        .map(|n| n.child_index.min(ORDER_BUCKETS - 1) as u8)
        .collect();
    FeaturizedGraph {
        graph,
        token_ids,
        order_ids,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfront::tokenize;
    use crate::graphrep::{assemble_graph, build_cfg, build_lex_edges, parse_loop};

    fn graph_for(src: &str) -> HeteroGraph {
        let ast = parse_loop(&tokenize(src).unwrap()).unwrap();
        let cfg = build_cfg(&ast);
        let lex = build_lex_edges(&ast);
        assemble_graph(&ast, &cfg, &lex)
    }

    #[test]
    fn empty_corpus_has_only_reserved_ids() {
        let v = build_vocab(std::iter::empty(), 1);
        assert_eq!(v.size(), 2);
        assert_eq!(v.id("anything"), TOKEN_UNK);
    }

    #[test]
    fn lexicographic_tie_break() {
        // "i" and "j" both appear twice; "i" must get the smaller id.
        let v = build_vocab(["i j", "j i"], 1);
        assert!(v.id("i") < v.id("j"));
    }

    #[test]
    fn frequency_orders_ids() {
        let v = build_vocab(["a a a b"], 1);
        assert_eq!(v.id("a"), 2);
        assert_eq!(v.id("b"), 3);
    }

    #[test]
    fn min_freq_filters_to_unk() {
        let v = build_vocab(["x x once"], 2);
        assert!(v.contains("x"));
        assert_eq!(v.id("once"), TOKEN_UNK);
    }

    #[test]
    fn interior_nodes_get_reserved_id() {
        let g = graph_for("for (i = 0; i < 2; i++) sum += a[i];");
        let v = build_vocab(["for (i = 0; i < 2; i++) sum += a[i];"], 1);
        let f = encode_features(g, &v);
        for (node, &tid) in f.graph.nodes.iter().zip(&f.token_ids) {
            if node.kind.is_leaf() {
                assert_ne!(
                    tid, TOKEN_INTERIOR,
                    "leaf {:?} must not be interior",
                    node.text
                );
                assert_eq!(tid, v.id(&node.text));
            } else {
                assert_eq!(tid, TOKEN_INTERIOR);
            }
        }
    }

    #[test]
    fn unseen_leaf_maps_to_unk() {
        let g = graph_for("for (i = 0; i < 2; i++) zebra += 1;");
        let v = build_vocab(["for (i = 0; i < 2; i++) x += 1;"], 1);
        let f = encode_features(g, &v);
        let zebra = f
            .graph
            .nodes
            .iter()
            .position(|n| n.text == "zebra")
            .unwrap();
        assert_eq!(f.token_ids[zebra], TOKEN_UNK);
    }

    #[test]
    fn order_ids_bucket_at_eight() {
        let g = graph_for("for (i = 0; i < 2; i++) f(a, b, c, d, e, g, h, j, k, l);");
        let v = build_vocab(std::iter::empty(), 1);
        let f = encode_features(g, &v);
        assert!(f.order_ids.contains(&8));
        assert!(f.order_ids.iter().all(|&o| o <= 8));
    }

    #[test]
    fn vocab_json_round_trip() {
        let v = build_vocab(["for (i = 0; i < 2; i++) s += a[i];"], 1);
        let v2 = Vocab::from_json(&v.to_json()).unwrap();
        assert_eq!(v, v2);
    }
}
