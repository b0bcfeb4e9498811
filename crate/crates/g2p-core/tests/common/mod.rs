//! Shared helpers for the integration and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use g2p_core::cfront::{extract_loops, tokenize, LabelSet};
use g2p_core::graphrep::{build_vocab, encode_features, loop_to_graph, HeteroGraph, Vocab};
use g2p_core::hgt::{LabeledGraph, ModelGraph, Task};
use g2p_core::rng::Rng;
use g2p_core::synthgen::{builtin_templates, generate_programs, GeneratorConfig, Pattern};

#[derive(Debug, Clone)]
pub struct CorpusLoop {
    pub id: String,
    pub text: String,
    pub labels: LabelSet,
}

/// The default synthetic corpus as labeled loop texts, in generation order.
pub fn synthetic_corpus() -> Vec<CorpusLoop> {
    let templates = builtin_templates();
    let programs = generate_programs(&templates, &GeneratorConfig::default())
        .expect("default corpus generates");
    programs
        .into_iter()
        .map(|(name, p, _)| CorpusLoop {
            id: format!("{name}#0"),
            text: p.loop_text,
            labels: p.label,
        })
        .collect()
}

/// Same corpus, keeping the pattern tag.
pub fn synthetic_corpus_with_patterns() -> Vec<(CorpusLoop, Pattern)> {
    let templates = builtin_templates();
    let programs = generate_programs(&templates, &GeneratorConfig::default())
        .expect("default corpus generates");
    programs
        .into_iter()
        .map(|(name, p, pattern)| {
            (
                CorpusLoop {
                    id: format!("{name}#0"),
                    text: p.loop_text,
                    labels: p.label,
                },
                pattern,
            )
        })
        .collect()
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/loops")
}

/// Extract every loop from the hand-written fixture files.
pub fn fixture_loops() -> Vec<CorpusLoop> {
    let dir = fixtures_dir();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("fixture dir exists")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "c"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let source = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let extraction = extract_loops(&source, &name).unwrap();
        assert!(
            !extraction.loops.is_empty(),
            "fixture {name} must contain at least one loop"
        );
        for l in &extraction.loops {
            out.push(CorpusLoop {
                id: l.id.clone(),
                text: l.text.clone(),
                labels: l.labels,
            });
        }
    }
    out
}

pub fn graph_of(text: &str) -> HeteroGraph {
    loop_to_graph(&tokenize(text).expect("loop tokenizes")).expect("loop parses")
}

/// The training protocol used by the learning criteria: shuffle, split
/// 80/10/10, build the vocabulary from the training texts only, featurize.
pub fn protocol_split(
    loops: &[CorpusLoop],
    task: Task,
    seed: u64,
) -> (g2p_core::hgt::SplitData, Vocab) {
    let mut order: Vec<usize> = (0..loops.len()).collect();
    Rng::derive(seed, &[0xacce97]).shuffle(&mut order);
    let n = loops.len();
    let n_val = (n as f64 * 0.1).round() as usize;
    let n_test = (n as f64 * 0.1).round() as usize;
    let n_train = n - n_val - n_test;

    let train_idx = &order[..n_train];
    let val_idx = &order[n_train..n_train + n_val];
    let test_idx = &order[n_train + n_val..];

    let vocab = build_vocab(train_idx.iter().map(|&i| loops[i].text.as_str()), 2);
    let featurize = |idx: &[usize]| -> Vec<LabeledGraph> {
        idx.iter()
            .map(|&i| {
                let l = &loops[i];
                let f = encode_features(graph_of(&l.text), &vocab);
                LabeledGraph {
                    id: l.id.clone(),
                    graph: ModelGraph::from(&f),
                    label: task.label_of(&l.labels),
                }
            })
            .collect()
    };
    (
        g2p_core::hgt::SplitData {
            train: featurize(train_idx),
            val: featurize(val_idx),
            test: featurize(test_idx),
        },
        vocab,
    )
}

/// Random typed graph: a random tree with reverse edges, a few extra typed
/// edges, and one self loop per node.
pub fn random_model_graph(rng: &mut Rng, max_nodes: usize, vocab_size: usize) -> ModelGraph {
    let n = 2 + rng.below(max_nodes as u64 - 1) as usize;
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.below(v as u64) as u32;
        edges.push((parent, 0u8, v as u32));
        edges.push((v as u32, 1u8, parent));
    }
    let extras = rng.below(2 * n as u64) as usize;
    for _ in 0..extras {
        let a = rng.below(n as u64) as u32;
        let b = rng.below(n as u64) as u32;
        let kind = 2 + rng.below(4) as u8;
        edges.push((a, kind, b));
        edges.push((b, kind ^ 1, a));
    }
    for v in 0..n {
        edges.push((v as u32, 6u8, v as u32));
    }
    let node_type = (0..n).map(|_| rng.below(17) as u8).collect();
    let token_id = (0..n)
        .map(|_| rng.below(vocab_size as u64) as u32)
        .collect();
    let order_id = (0..n).map(|_| rng.below(9) as u8).collect();
    ModelGraph::new(node_type, token_id, order_id, 0, edges)
}

/// Relabel node ids by a permutation and reorder the edge list.
pub fn permute_graph(graph: &ModelGraph, rng: &mut Rng) -> ModelGraph {
    let n = graph.n;
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);

    let mut node_type = vec![0u8; n];
    let mut token_id = vec![0u32; n];
    let mut order_id = vec![0u8; n];
    for v in 0..n {
        node_type[perm[v]] = graph.node_type[v];
        token_id[perm[v]] = graph.token_id[v];
        order_id[perm[v]] = graph.order_id[v];
    }
    let mut edges: Vec<(u32, u8, u32)> = graph
        .edges
        .iter()
        .map(|&(s, k, t)| (perm[s as usize] as u32, k, perm[t as usize] as u32))
        .collect();
    edges.sort_unstable();
    ModelGraph::new(node_type, token_id, order_id, perm[graph.root], edges)
}

/// Loop texts keyed by fixture id, for tests that need specific fixtures.
pub fn fixture_map() -> BTreeMap<String, CorpusLoop> {
    fixture_loops()
        .into_iter()
        .map(|l| (l.id.clone(), l))
        .collect()
}
