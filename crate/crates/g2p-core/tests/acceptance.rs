//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (run with `--nocapture` to see them).

mod common;

use std::collections::HashSet;

use g2p_core::cfront::tokenize;
use g2p_core::eval::{compute_metrics, evaluate, ConfusionCounts};
use g2p_core::graphrep::{
    build_vocab, encode_features, loop_to_graph, parse_loop, EdgeKind, NodeKind,
};
use g2p_core::hgt::{
    accuracy, forward, grad_check, history_csv, init_params, logits, save_checkpoint, train,
    LabeledGraph, ModelConfig, ModelGraph, Task, TrainOptions,
};
use g2p_core::rng::Rng;
use g2p_core::synthgen::{
    builtin_templates, dependence_oracle, generate_corpus, interleave_check, GeneratorConfig,
    Pattern, VerdictPattern, DEFAULT_TRIP_BOUND,
};

use common::{
    fixture_loops, graph_of, permute_graph, protocol_split, random_model_graph, synthetic_corpus,
    synthetic_corpus_with_patterns,
};

fn pass(criterion: u32, detail: &str) {
    println!("PASS criterion {criterion:2}: {detail}");
}

/// Criterion 1: the metric computation reproduces all six published
/// confusion-count rows within +/-0.005 after percent rounding.
#[test]
fn criterion_01_metric_oracle() {
    // (tp, tn, fp, fn) -> (precision, recall, f1, accuracy) in percent.
    let rows: [(ConfusionCounts, [f64; 4]); 6] = [
        (
            ConfusionCounts::new(1593, 0, 0, 2439),
            [100.00, 39.51, 56.64, 39.51],
        ),
        (
            ConfusionCounts::new(2860, 617, 356, 199),
            [88.93, 93.49, 91.16, 86.24],
        ),
        (
            ConfusionCounts::new(345, 952, 0, 2059),
            [100.00, 14.35, 25.10, 38.65],
        ),
        (
            ConfusionCounts::new(1800, 897, 187, 472),
            [90.59, 79.23, 84.53, 80.36],
        ),
        (
            ConfusionCounts::new(541, 240, 0, 445),
            [100.00, 54.87, 70.86, 63.70],
        ),
        (
            ConfusionCounts::new(635, 366, 64, 161),
            [90.84, 79.77, 84.95, 81.65],
        ),
    ];
    for (counts, expected) in &rows {
        let got = compute_metrics(counts).unwrap().as_percent_row();
        for (g, e) in got.iter().zip(expected.iter()) {
            assert!(
                (g - e).abs() <= 0.005 + 1e-9,
                "counts {counts:?}: got {got:?}, expected {expected:?}"
            );
        }
    }
    pass(1, "6 confusion-count rows reproduced within 0.005 percent");
}

fn check_graph_invariants(id: &str, text: &str) {
    let tokens = tokenize(text).unwrap_or_else(|e| panic!("{id}: tokenize failed: {e}"));
    let ast = parse_loop(&tokens).unwrap_or_else(|e| panic!("{id}: parse failed: {e}"));
    let graph = loop_to_graph(&tokens).unwrap();
    let n = graph.nodes.len();
    let edge_set: HashSet<(usize, EdgeKind, usize)> = graph.edges.iter().copied().collect();
    assert_eq!(edge_set.len(), graph.edges.len(), "{id}: duplicate edges");

    // Tree: ast_child forms a rooted tree.
    let child_edges: Vec<(usize, usize)> = graph.edges_of_kind(EdgeKind::AstChild).collect();
    assert_eq!(child_edges.len(), n - 1, "{id}: ast_child count");
    let mut indegree = vec![0usize; n];
    for &(_, t) in &child_edges {
        indegree[t] += 1;
    }
    assert_eq!(indegree[graph.root], 0, "{id}: root has a parent");
    assert_eq!(graph.root, 0, "{id}: root id");
    assert_eq!(
        graph.nodes[graph.root].kind,
        NodeKind::ForStmt,
        "{id}: root kind"
    );
    for (v, &deg) in indegree.iter().enumerate() {
        if v != graph.root {
            assert_eq!(deg, 1, "{id}: node {v} parent count");
        }
    }

    // Lexical path: simple path over all token-bearing leaves in source order.
    let leaves: Vec<usize> = graph
        .nodes
        .iter()
        .filter(|nd| nd.kind.is_leaf())
        .map(|nd| nd.id)
        .collect();
    let lex: Vec<(usize, usize)> = graph.edges_of_kind(EdgeKind::LexNext).collect();
    assert_eq!(
        lex.len(),
        leaves.len().saturating_sub(1),
        "{id}: lex edge count"
    );
    for (k, &(a, b)) in lex.iter().enumerate() {
        assert_eq!(a, leaves[k], "{id}: lex path order");
        assert_eq!(b, leaves[k + 1], "{id}: lex path order");
    }
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    for &(a, b) in &lex {
        out_deg[a] += 1;
        in_deg[b] += 1;
    }
    assert!(out_deg.iter().all(|&dg| dg <= 1), "{id}: lex out-degree");
    assert!(in_deg.iter().all(|&dg| dg <= 1), "{id}: lex in-degree");

    // Reverse closure for every edge kind.
    for &(s, k, t) in &graph.edges {
        assert!(
            edge_set.contains(&(t, k.reverse(), s)),
            "{id}: missing reverse of ({s}, {k:?}, {t})"
        );
    }

    // Exactly one self loop per node.
    let self_loops: Vec<(usize, usize)> = graph.edges_of_kind(EdgeKind::SelfLoop).collect();
    assert_eq!(self_loops.len(), n, "{id}: self loop count");
    for (v, &(s, t)) in self_loops.iter().enumerate() {
        assert_eq!((s, t), (v, v), "{id}: self loop target");
    }

    // CFG reachability from the init clause.
    let cfg: Vec<(usize, usize)> = graph.edges_of_kind(EdgeKind::CfgNext).collect();
    if !cfg.is_empty() {
        let init = ast.nodes[ast.root].children[0];
        let mut reachable: HashSet<usize> = HashSet::from([init]);
        let mut frontier = vec![init];
        while let Some(x) = frontier.pop() {
            for &(s, t) in &cfg {
                if s == x && reachable.insert(t) {
                    frontier.push(t);
                }
            }
        }
        for &(s, t) in &cfg {
            assert!(reachable.contains(&s), "{id}: cfg node {s} unreachable");
            assert!(reachable.contains(&t), "{id}: cfg node {t} unreachable");
        }
    }

    // Determinism: a rebuild serializes identically.
    let vocab = build_vocab([text], 1);
    let rec = |g| {
        serde_json::to_string(&g2p_core::graphrep::build_graph_record(
            id,
            g2p_core::cfront::LabelSet::NON_PARALLEL,
            &encode_features(g, &vocab),
        ))
        .unwrap()
    };
    let once = rec(graph);
    let twice = rec(loop_to_graph(&tokenize(text).unwrap()).unwrap());
    assert_eq!(once, twice, "{id}: serialization not deterministic");
}

/// Criterion 2: graph invariants over the full synthetic corpus plus the
/// hand-written fixtures.
#[test]
fn criterion_02_graph_invariants() {
    let fixtures = fixture_loops();
    assert!(
        fixtures.len() >= 20,
        "need at least 20 fixture loops, have {}",
        fixtures.len()
    );
    let corpus = synthetic_corpus();
    assert_eq!(corpus.len(), 1100);
    let mut checked = 0;
    for l in fixtures.iter().chain(corpus.iter()) {
        check_graph_invariants(&l.id, &l.text);
        checked += 1;
    }
    pass(
        2,
        &format!("tree/lex/reverse/self-loop/determinism invariants on {checked} graphs"),
    );
}

/// Criterion 3: the augmented AST of the reduction-with-call fixture matches
/// the committed hand-built oracle node-for-node and edge-for-edge.
#[test]
fn criterion_03_golden_graph() {
    #[derive(serde::Deserialize)]
    struct GoldenNode {
        id: usize,
        kind: NodeKind,
        text: String,
        child_index: usize,
    }
    #[derive(serde::Deserialize)]
    struct Golden {
        root: usize,
        nodes: Vec<GoldenNode>,
        ast_pairs: Vec<(usize, usize)>,
        cfg_pairs: Vec<(usize, usize)>,
        lex_pairs: Vec<(usize, usize)>,
    }

    let golden_path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/golden_reduction_funcall_graph.json");
    let golden: Golden =
        serde_json::from_str(&std::fs::read_to_string(golden_path).unwrap()).unwrap();

    let fixture = common::fixture_map();
    let loop_text = &fixture["01_reduction_funcall.c#0"].text;
    let graph = graph_of(loop_text);

    assert_eq!(graph.root, golden.root);
    assert_eq!(graph.nodes.len(), golden.nodes.len(), "node count");
    for (got, want) in graph.nodes.iter().zip(&golden.nodes) {
        assert_eq!(got.id, want.id);
        assert_eq!(got.kind, want.kind, "node {} kind", want.id);
        assert_eq!(got.text, want.text, "node {} text", want.id);
        assert_eq!(
            got.child_index, want.child_index,
            "node {} child_index",
            want.id
        );
    }

    let collect = |kind: EdgeKind| -> Vec<(usize, usize)> { graph.edges_of_kind(kind).collect() };
    let as_set = |v: &[(usize, usize)]| v.iter().copied().collect::<HashSet<_>>();
    assert_eq!(
        as_set(&collect(EdgeKind::AstChild)),
        as_set(&golden.ast_pairs),
        "ast edges"
    );
    assert_eq!(
        as_set(&collect(EdgeKind::CfgNext)),
        as_set(&golden.cfg_pairs),
        "cfg edges"
    );
    assert_eq!(
        as_set(&collect(EdgeKind::LexNext)),
        as_set(&golden.lex_pairs),
        "lex edges"
    );

    // Reverses and self loops are mechanical from the forward families.
    let reversed = |pairs: &[(usize, usize)]| -> HashSet<(usize, usize)> {
        pairs.iter().map(|&(a, b)| (b, a)).collect()
    };
    assert_eq!(
        as_set(&collect(EdgeKind::AstParent)),
        reversed(&golden.ast_pairs)
    );
    assert_eq!(
        as_set(&collect(EdgeKind::CfgPrev)),
        reversed(&golden.cfg_pairs)
    );
    assert_eq!(
        as_set(&collect(EdgeKind::LexPrev)),
        reversed(&golden.lex_pairs)
    );
    assert_eq!(collect(EdgeKind::SelfLoop).len(), golden.nodes.len());

    let total = 2 * golden.ast_pairs.len()
        + 2 * golden.cfg_pairs.len()
        + 2 * golden.lex_pairs.len()
        + golden.nodes.len();
    assert_eq!(graph.edges.len(), total, "total edge count");
    pass(
        3,
        &format!(
            "golden graph matched: {} nodes, {} edges",
            golden.nodes.len(),
            total
        ),
    );
}

/// Criterion 4: analytic gradients match central finite differences
/// (eps = 1e-4) within 1e-4 on a 10-node graph with d=8, h=2, L=1.
#[test]
fn criterion_04_gradient_check() {
    let config = ModelConfig {
        d: 8,
        heads: 2,
        layers: 1,
        vocab_size: 10,
        ..Default::default()
    };
    let mut rng = Rng::new(4242);
    let graph = {
        // Exactly 10 nodes.
        loop {
            let g = random_model_graph(&mut rng, 16, config.vocab_size);
            if g.n == 10 {
                break g;
            }
        }
    };
    let params = init_params(&config, &mut Rng::new(7)).unwrap();
    let report = grad_check(&graph, true, &params, 1e-4).unwrap();
    assert!(
        report.max_rel_err < 1e-4,
        "max relative error {}; per tensor {:?}",
        report.max_rel_err,
        report.per_tensor
    );
    pass(
        4,
        &format!(
            "max relative error {:.3e} over {} tensors",
            report.max_rel_err,
            report.per_tensor.len()
        ),
    );
}

/// Criterion 5: per-head attention weights sum to one at every node and
/// layer over 100 random graph/config draws.
#[test]
fn criterion_05_attention_normalization() {
    let mut rng = Rng::new(55);
    let dims = [8usize, 16, 32];
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let d = dims[(trial % 3) as usize];
        let heads = [1usize, 2, 4][(trial % 3) as usize].min(d);
        let layers = 1 + (trial % 3) as usize;
        let config = ModelConfig {
            d,
            heads,
            layers,
            vocab_size: 16,
            ..Default::default()
        };
        let graph = random_model_graph(&mut rng, 30, config.vocab_size);
        let params = init_params(&config, &mut Rng::new(trial)).unwrap();
        let cache = forward(&graph, &params);
        for l in 0..layers {
            let by_target = cache.attention_by_target(&graph, l);
            for (node, weights) in by_target.iter().enumerate() {
                for head in 0..heads {
                    let sum: f64 = weights.iter().map(|w| w[head]).sum();
                    worst = worst.max((sum - 1.0).abs());
                    assert!(
                        (sum - 1.0).abs() <= 1e-6,
                        "trial {trial} layer {l} node {node} head {head}: sum {sum}"
                    );
                }
            }
        }
    }
    pass(
        5,
        &format!("100 random graphs/configs, worst |sum-1| = {worst:.2e}"),
    );
}

/// Criterion 6: the default corpus is exactly 200 do-all, 200 reduction and
/// 700 non-parallel loops, every label agrees with the dependence oracle,
/// and a re-run with the same seed is byte-identical.
#[test]
fn criterion_06_synthetic_corpus_reproduction() {
    let templates = builtin_templates();
    let config = GeneratorConfig::default();

    let base = std::env::temp_dir().join(format!("g2p_accept6_{}", std::process::id()));
    let dir_a = base.join("a");
    let dir_b = base.join("b");
    let _ = std::fs::remove_dir_all(&base);
    let manifest = generate_corpus(&templates, &config, &dir_a).unwrap();
    generate_corpus(&templates, &config, &dir_b).unwrap();

    let count = |p: Pattern| manifest.entries.iter().filter(|e| e.pattern == p).count();
    assert_eq!(count(Pattern::DoAll), 200);
    assert_eq!(count(Pattern::Reduction), 200);
    assert_eq!(count(Pattern::NonParallel), 700);

    // Every emitted label agrees with the oracle.
    for (l, pattern) in synthetic_corpus_with_patterns() {
        let verdict = dependence_oracle(&l.text, DEFAULT_TRIP_BOUND)
            .unwrap_or_else(|e| panic!("{}: oracle must support generated loop: {e}", l.id));
        assert_eq!(verdict.parallel, l.labels.parallel, "{}", l.id);
        match pattern {
            Pattern::DoAll => assert_eq!(verdict.pattern, VerdictPattern::DoAll, "{}", l.id),
            Pattern::Reduction => {
                assert_eq!(verdict.pattern, VerdictPattern::Reduction, "{}", l.id)
            }
            Pattern::NonParallel => {
                assert!(verdict.witness.is_some(), "{}: missing witness", l.id)
            }
        }
    }

    // The emitted loops JSONL groups into the expected statistics rows.
    let loops: Vec<g2p_core::cfront::LoopRecord> =
        g2p_core::jsonl::from_str(&std::fs::read_to_string(dir_a.join("loops.jsonl")).unwrap())
            .unwrap();
    let table = g2p_core::eval::corpus_stats(&loops);
    assert_eq!(table.row("reduction").unwrap().loops, 200);
    assert_eq!(table.row("private").unwrap().loops, 200);
    assert_eq!(table.row("non_parallel").unwrap().loops, 700);

    // Byte-identical re-run, file by file.
    let mut names: Vec<String> = std::fs::read_dir(&dir_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .collect();
    names.sort();
    assert_eq!(names.len(), 1102, "1100 sources + manifest + loops.jsonl");
    for name in &names {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
    let _ = std::fs::remove_dir_all(&base);
    pass(
        6,
        "200/200/700 files, stats rows aligned, labels oracle-confirmed, re-run byte-identical",
    );
}

/// Criterion 7: on 50 oracle-supported loops, exhaustive two-iteration
/// interleaving execution agrees with the oracle verdict every time.
#[test]
fn criterion_07_oracle_soundness_spot_check() {
    // Deterministic selection: stride through the corpus for variety across
    // patterns and templates, plus a few hand-written cases.
    let corpus = synthetic_corpus();
    let mut cases: Vec<(String, String)> = corpus
        .iter()
        .step_by(23)
        .take(45)
        .map(|l| (l.id.clone(), l.text.clone()))
        .collect();
    for (i, src) in [
        "for(i=0;i<n;i++) a[i]=b[i]+1;",
        "for(i=0;i<n;i+=step){v+=2; v=v+step;}",
        "for(i=1;i<n;i++) a[i]=a[i-1]+1;",
        "for(i=0;i<n;i++){ s = s + a[i]; b[i] = s; }",
        "for(i=0;i<n;i++) p *= a[i];",
    ]
    .iter()
    .enumerate()
    {
        cases.push((format!("hand{i}"), src.to_string()));
    }
    assert_eq!(cases.len(), 50);

    let mut agreements = 0;
    for (id, text) in &cases {
        let verdict = dependence_oracle(text, DEFAULT_TRIP_BOUND)
            .unwrap_or_else(|e| panic!("{id}: oracle support expected: {e}"));
        let interleaving_parallel = interleave_check(text)
            .unwrap_or_else(|e| panic!("{id}: interleaving support expected: {e}"));
        assert_eq!(
            interleaving_parallel, verdict.parallel,
            "{id}: interleaving and oracle disagree on\n{text}"
        );
        agreements += 1;
    }
    pass(
        7,
        &format!("interleaving execution agreed with the oracle on {agreements}/50 loops"),
    );
}

fn learning_run(task: Task, loops: &[common::CorpusLoop], seed: u64) -> (f64, f64, f64, usize) {
    let (split, vocab) = protocol_split(loops, task, seed);
    let config = ModelConfig {
        vocab_size: vocab.size(),
        seed,
        task,
        ..Default::default()
    };
    let (params, history) = train(&split, &config, &TrainOptions::default()).unwrap();
    let train_acc = accuracy(&params, &split.train);
    let test_acc = accuracy(&params, &split.test);

    let items: Vec<(String, bool, ModelGraph)> = split
        .test
        .iter()
        .map(|g| (g.id.clone(), g.label, g.graph.clone()))
        .collect();
    let report = evaluate(&params, &items, None).unwrap();
    (test_acc, train_acc, report.metrics.f1, history.len())
}

/// Criterion 8: parallel-existence training on the 1100-loop corpus with an
/// 80/10/10 split and default hyperparameters reaches held-out accuracy of
/// at least 0.85 and training accuracy of at least 0.95 on two of the three
/// seeds 41, 42, 43.
#[test]
fn criterion_08_learning_surrogate_parallel_task() {
    let corpus = synthetic_corpus();
    assert_eq!(corpus.len(), 1100);
    let mut passes = 0;
    let mut summary = Vec::new();
    for seed in [41u64, 42, 43] {
        let (test_acc, train_acc, _, epochs) = learning_run(Task::Parallel, &corpus, seed);
        let ok = test_acc >= 0.85 && train_acc >= 0.95;
        summary.push(format!(
            "seed {seed}: test {test_acc:.3} train {train_acc:.3} ({epochs} epochs){}",
            if ok { "" } else { " [miss]" }
        ));
        if ok {
            passes += 1;
        }
        if passes >= 2 {
            break;
        }
    }
    assert!(passes >= 2, "fewer than 2 of 3 seeds passed: {summary:?}");
    pass(8, &summary.join("; "));
}

/// Criterion 9: the reduction-vs-do-all head trained on the 400 parallel
/// loops reaches held-out F1 of at least 0.85 under the same protocol.
#[test]
fn criterion_09_reduction_head_surrogate() {
    let parallel_only: Vec<common::CorpusLoop> = synthetic_corpus()
        .into_iter()
        .filter(|l| l.labels.parallel)
        .collect();
    assert_eq!(parallel_only.len(), 400);
    let mut passes = 0;
    let mut summary = Vec::new();
    for seed in [41u64, 42, 43] {
        let (test_acc, _, f1, epochs) = learning_run(Task::Reduction, &parallel_only, seed);
        let ok = f1 >= 0.85;
        summary.push(format!(
            "seed {seed}: F1 {f1:.3} test acc {test_acc:.3} ({epochs} epochs){}",
            if ok { "" } else { " [miss]" }
        ));
        if ok {
            passes += 1;
        }
        if passes >= 2 {
            break;
        }
    }
    assert!(
        passes >= 2,
        "fewer than 2 of 3 seeds reached F1 0.85: {summary:?}"
    );
    pass(9, &summary.join("; "));
}

/// Criterion 10: extract -> graph -> train with fixed seeds, run twice,
/// produces identical history CSVs and identical checkpoint bytes.
#[test]
fn criterion_10_end_to_end_determinism() {
    let run = |tag: &str| -> (String, Vec<u8>, String) {
        // Extract: synthetic sources plus pragma-bearing fixtures.
        let corpus = synthetic_corpus();
        let mut loops: Vec<common::CorpusLoop> = corpus.into_iter().step_by(11).collect();
        loops.extend(fixture_loops().into_iter().filter(|l| {
            l.id.starts_with("19_")
                || l.id.starts_with("20_")
                || l.id.starts_with("26_")
                || l.id.starts_with("27_")
        }));

        // Graph: vocabulary and serialized records.
        let vocab = build_vocab(loops.iter().map(|l| l.text.as_str()), 2);
        let records: Vec<String> = loops
            .iter()
            .map(|l| {
                let f = encode_features(graph_of(&l.text), &vocab);
                serde_json::to_string(&g2p_core::graphrep::build_graph_record(&l.id, l.labels, &f))
                    .unwrap()
            })
            .collect();
        let graphs_jsonl = records.join("\n");

        // Train: a small deterministic run.
        let items: Vec<LabeledGraph> = loops
            .iter()
            .map(|l| {
                let f = encode_features(graph_of(&l.text), &vocab);
                LabeledGraph {
                    id: l.id.clone(),
                    graph: ModelGraph::from(&f),
                    label: l.labels.parallel,
                }
            })
            .collect();
        let split = g2p_core::hgt::split_corpus(items, 0.2, 0.0, 42);
        let config = ModelConfig {
            d: 16,
            heads: 2,
            layers: 1,
            vocab_size: vocab.size(),
            epochs: 4,
            seed: 42,
            ..Default::default()
        };
        let (params, history) = train(&split, &config, &TrainOptions::default()).unwrap();

        let path =
            std::env::temp_dir().join(format!("g2p_accept10_{tag}_{}.g2p", std::process::id()));
        save_checkpoint(&params, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let _ = std::fs::remove_file(&path);
        (history_csv(&history), bytes, graphs_jsonl)
    };

    let (csv_a, ckpt_a, graphs_a) = run("a");
    let (csv_b, ckpt_b, graphs_b) = run("b");
    assert_eq!(graphs_a, graphs_b, "graph JSONL differs between runs");
    assert_eq!(csv_a, csv_b, "history CSV differs between runs");
    assert_eq!(ckpt_a, ckpt_b, "checkpoint bytes differ between runs");
    pass(
        10,
        &format!(
            "identical graphs ({} bytes), history ({} rows), checkpoint ({} bytes)",
            graphs_a.len(),
            csv_a.lines().count() - 1,
            ckpt_a.len()
        ),
    );
}

/// Criterion 11: node relabeling changes logits by less than 1e-9 on 20
/// random graphs.
#[test]
fn criterion_11_permutation_invariance() {
    let mut rng = Rng::new(1111);
    let config = ModelConfig {
        d: 32,
        heads: 4,
        layers: 2,
        vocab_size: 16,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let graph = random_model_graph(&mut rng, 40, config.vocab_size);
        let params = init_params(&config, &mut Rng::new(trial + 900)).unwrap();
        let permuted = permute_graph(&graph, &mut rng);
        let a = logits(&graph, &params);
        let b = logits(&permuted, &params);
        let diff = (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
        worst = worst.max(diff);
        assert!(diff < 1e-9, "trial {trial}: logit drift {diff}");
    }
    pass(
        11,
        &format!("20 random graphs, worst logit drift {worst:.2e}"),
    );
}
