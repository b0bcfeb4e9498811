use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use g2p_core::cfront::{extract_loops, tokenize, LoopRecord};
use g2p_core::eval::{corpus_stats, evaluate, predict as predict_loop, TaskModels};
use g2p_core::graphrep::{
    build_graph_record, build_vocab, encode_features, loop_to_graph, GraphRecord, Vocab,
};
use g2p_core::hgt::{
    accuracy, grad_check, history_csv, init_params, load_checkpoint, mean_loss,
    model_graph_from_record, save_checkpoint, split_corpus, train as train_model, LabeledGraph,
    ModelConfig, ModelGraph, Task, TrainOptions,
};
use g2p_core::jsonl;
use g2p_core::rng::Rng;
use g2p_core::synthgen::{
    builtin_templates, generate_corpus, load_templates_from_dir, GeneratorConfig,
};

/// User errors exit 1, internal errors exit 2.
#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
}

type CliResult = Result<(), CliError>;

fn user<E: std::fmt::Display>(e: E) -> CliError {
    CliError::User(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| user(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| user(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| user(format!("cannot write {}: {e}", path.display())))
}

fn read_loops(path: &Path) -> Result<Vec<LoopRecord>, CliError> {
    jsonl::from_str(&read_file(path)?)
        .map_err(|e| user(format!("bad loops JSONL {}: {e}", path.display())))
}

fn read_graphs(path: &Path) -> Result<Vec<GraphRecord>, CliError> {
    jsonl::from_str(&read_file(path)?)
        .map_err(|e| user(format!("bad graph JSONL {}: {e}", path.display())))
}

// ---------------------------------------------------------------- extract

pub fn extract(input: &Path, output: Option<&Path>) -> CliResult {
    let mut files = Vec::new();
    if input.is_dir() {
        let entries = fs::read_dir(input)
            .map_err(|e| user(format!("cannot read {}: {e}", input.display())))?;
        files = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "c"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(user(format!("no .c files under {}", input.display())));
        }
    } else {
        files.push(input.to_path_buf());
    }

    let mut records = Vec::new();
    let mut diagnostics = 0usize;
    for file in &files {
        let source = read_file(file)?;
        let id = file.display().to_string();
        let extraction = extract_loops(&source, &id).map_err(|e| user(format!("{id}: {e}")))?;
        for d in &extraction.diagnostics {
            eprintln!("{id}:{}: skipped loop: {}", d.line, d.message);
            diagnostics += 1;
        }
        records.extend(extraction.loops.iter().map(LoopRecord::from));
    }

    let body = jsonl::to_string(records.iter());
    match output {
        Some(path) => write_file(path, &body)?,
        None => print!("{body}"),
    }
    eprintln!(
        "extracted {} loops from {} files ({diagnostics} skipped)",
        records.len(),
        files.len()
    );
    Ok(())
}

// ------------------------------------------------------------------ synth

pub fn synth(
    output: &Path,
    templates_dir: Option<&Path>,
    variants: usize,
    nonparallel: usize,
    seed: u64,
) -> CliResult {
    let templates = match templates_dir {
        Some(dir) => load_templates_from_dir(dir).map_err(user)?,
        None => builtin_templates(),
    };
    let config = GeneratorConfig {
        n_variants_per_template: variants,
        n_nonparallel: nonparallel,
        seed,
    };
    let manifest = generate_corpus(&templates, &config, output).map_err(user)?;
    eprintln!(
        "wrote {} programs, manifest.json and loops.jsonl under {}",
        manifest.entries.len(),
        output.display()
    );
    Ok(())
}

// ------------------------------------------------------------------ graph

pub fn graph(
    input: &Path,
    output: &Path,
    vocab_out: Option<&Path>,
    vocab_in: Option<&Path>,
    min_freq: usize,
) -> CliResult {
    let loops = read_loops(input)?;
    let (vocab, built_here) = match vocab_in {
        Some(path) => (
            Vocab::from_json(&read_file(path)?)
                .map_err(|e| user(format!("bad vocabulary {}: {e}", path.display())))?,
            false,
        ),
        None => (
            build_vocab(loops.iter().map(|l| l.text.as_str()), min_freq.max(1)),
            true,
        ),
    };

    let mut records = Vec::new();
    let mut skipped = 0usize;
    for l in &loops {
        let tokens = match tokenize(&l.text) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{}: skipped (tokenize: {e})", l.id);
                skipped += 1;
                continue;
            }
        };
        match loop_to_graph(&tokens) {
            Ok(g) => {
                let f = encode_features(g, &vocab);
                records.push(build_graph_record(&l.id, l.labels, &f));
            }
            Err(e) => {
                eprintln!("{}: skipped (parse: {e})", l.id);
                skipped += 1;
            }
        }
    }

    write_file(output, &jsonl::to_string(records.iter()))?;
    // A freshly built vocabulary always lands on disk; featurizing other
    // corpora consistently needs it.
    let default_vocab_path = output.with_file_name("vocab.json");
    let vocab_path = match (vocab_out, built_here) {
        (Some(path), _) => Some(path.to_path_buf()),
        (None, true) => Some(default_vocab_path),
        (None, false) => None,
    };
    if let Some(path) = &vocab_path {
        write_file(path, &vocab.to_json())?;
    }
    eprintln!(
        "built {} graphs ({skipped} skipped), vocabulary of {} tokens{}",
        records.len(),
        vocab.size(),
        match &vocab_path {
            Some(p) => format!(" ({})", p.display()),
            None => String::new(),
        }
    );
    Ok(())
}

// ------------------------------------------------------------------ train

pub struct TrainArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub task: String,
    pub seed: Option<u64>,
    pub config_file: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub d: Option<usize>,
    pub heads: Option<usize>,
    pub layers: Option<usize>,
    pub lr: Option<f64>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub patience: Option<usize>,
    pub val_frac: Option<f64>,
    pub test_frac: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct SplitFile {
    train_ids: Vec<String>,
    val_ids: Vec<String>,
    test_ids: Vec<String>,
}

#[derive(Serialize)]
struct TrainSummary {
    task: String,
    epochs_run: usize,
    train_accuracy: f64,
    val_accuracy: f64,
    test_accuracy: Option<f64>,
    val_loss: f64,
}

/// Flat `key = value` configuration file; `#` starts a comment.
fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, line) in read_file(path)?.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(user(format!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| user(format!("config key {key}: cannot parse {raw:?}"))),
    }
}

pub fn train(args: TrainArgs) -> CliResult {
    let task = Task::from_name(&args.task).ok_or_else(|| {
        user(format!(
            "unknown task {:?} (expected one of parallel, private, reduction, simd, target)",
            args.task
        ))
    })?;
    let graphs = read_graphs(&args.input)?;
    if graphs.is_empty() {
        return Err(user("no graphs in input"));
    }

    let file_config = match &args.config_file {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let mut config = ModelConfig {
        task,
        ..Default::default()
    };
    config.vocab_size = match &args.vocab {
        Some(path) => Vocab::from_json(&read_file(path)?)
            .map_err(|e| user(format!("bad vocabulary {}: {e}", path.display())))?
            .size(),
        None => {
            let max_token = graphs
                .iter()
                .flat_map(|g| g.nodes.iter().map(|n| n.token_id))
                .max()
                .unwrap_or(1);
            (max_token as usize + 1).max(2)
        }
    };

    if let Some(v) = config_value(&file_config, "d")? {
        config.d = v;
    }
    if let Some(v) = config_value(&file_config, "heads")? {
        config.heads = v;
    }
    if let Some(v) = config_value(&file_config, "layers")? {
        config.layers = v;
    }
    if let Some(v) = config_value(&file_config, "lr")? {
        config.lr = v;
    }
    if let Some(v) = config_value(&file_config, "epochs")? {
        config.epochs = v;
    }
    if let Some(v) = config_value(&file_config, "seed")? {
        config.seed = v;
    }
    if let Some(v) = config_value(&file_config, "mean_pool")? {
        config.mean_pool = v;
    }
    // Command-line flags override the file.
    if let Some(v) = args.d {
        config.d = v;
    }
    if let Some(v) = args.heads {
        config.heads = v;
    }
    if let Some(v) = args.layers {
        config.layers = v;
    }
    if let Some(v) = args.lr {
        config.lr = v;
    }
    if let Some(v) = args.epochs {
        config.epochs = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }

    let mut options = TrainOptions::default();
    if let Some(v) = config_value(&file_config, "batch_size")? {
        options.batch_size = v;
    }
    if let Some(v) = config_value(&file_config, "patience")? {
        options.patience = v;
    }
    if let Some(v) = config_value(&file_config, "min_delta")? {
        options.min_delta = v;
    }
    if let Some(v) = args.batch_size {
        options.batch_size = v;
    }
    if let Some(v) = args.patience {
        options.patience = v;
    }
    let val_frac = args
        .val_frac
        .or(config_value(&file_config, "val_frac")?)
        .unwrap_or(0.1);
    let test_frac = args
        .test_frac
        .or(config_value(&file_config, "test_frac")?)
        .unwrap_or(0.1);

    let items: Vec<LabeledGraph> = graphs
        .iter()
        .map(|g| LabeledGraph {
            id: g.id.clone(),
            graph: model_graph_from_record(g),
            label: task.label_of(&g.labels),
        })
        .collect();
    let split = split_corpus(items, val_frac, test_frac, config.seed);

    let (params, history) = train_model(&split, &config, &options).map_err(user)?;

    fs::create_dir_all(&args.output)
        .map_err(|e| user(format!("cannot create {}: {e}", args.output.display())))?;
    let model_path = args.output.join("model.g2p");
    save_checkpoint(&params, &model_path).map_err(user)?;
    write_file(&args.output.join("history.csv"), &history_csv(&history))?;

    let ids = |set: &[LabeledGraph]| set.iter().map(|g| g.id.clone()).collect::<Vec<_>>();
    let split_file = SplitFile {
        train_ids: ids(&split.train),
        val_ids: ids(&split.val),
        test_ids: ids(&split.test),
    };
    write_file(
        &args.output.join("split.json"),
        &serde_json::to_string_pretty(&split_file).expect("split serializes"),
    )?;

    let summary = TrainSummary {
        task: task.as_str().to_string(),
        epochs_run: history.len(),
        train_accuracy: accuracy(&params, &split.train),
        val_accuracy: accuracy(&params, &split.val),
        test_accuracy: (!split.test.is_empty()).then(|| accuracy(&params, &split.test)),
        val_loss: mean_loss(&params, &split.val),
    };
    write_file(
        &args.output.join("summary.json"),
        &serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;

    println!(
        "task {}: {} epochs, train acc {:.4}, val acc {:.4}{}",
        summary.task,
        summary.epochs_run,
        summary.train_accuracy,
        summary.val_accuracy,
        match summary.test_accuracy {
            Some(acc) => format!(", test acc {acc:.4}"),
            None => String::new(),
        }
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

// ---------------------------------------------------------------- predict

pub fn predict(models_dir: &Path, input: &Path, output: Option<&Path>) -> CliResult {
    let vocab_path = models_dir.join("vocab.json");
    let vocab = Vocab::from_json(&read_file(&vocab_path)?)
        .map_err(|e| user(format!("bad vocabulary {}: {e}", vocab_path.display())))?;

    let mut models = BTreeMap::new();
    for task in Task::ALL {
        let path = models_dir.join(format!("{}.g2p", task.as_str()));
        if path.exists() {
            let params = load_checkpoint(&path).map_err(user)?;
            models.insert(task.as_str(), params);
        }
    }
    if !models.contains_key("parallel") {
        return Err(user(format!(
            "no parallel.g2p under {} (at least the parallel task model is required)",
            models_dir.display()
        )));
    }
    let task_models = TaskModels { models };

    let source = read_file(input)?;
    let extraction = extract_loops(&source, &input.display().to_string())
        .map_err(|e| user(format!("{}: {e}", input.display())))?;
    if extraction.loops.is_empty() {
        return Err(user(format!("no for-loops found in {}", input.display())));
    }

    let mut lines = Vec::new();
    for l in &extraction.loops {
        let suggestion = predict_loop(&task_models, &vocab, &l.id, &l.text).map_err(user)?;
        println!(
            "{}: parallel {:.3}{}",
            suggestion.loop_id,
            suggestion.parallel_prob,
            match &suggestion.suggested_pragma {
                Some(p) => format!("  ->  {p}"),
                None => "  ->  no pragma suggested".to_string(),
            }
        );
        lines.push(serde_json::to_string(&suggestion).expect("suggestion serializes"));
    }
    if let Some(path) = output {
        write_file(path, &(lines.join("\n") + "\n"))?;
    }
    Ok(())
}

// ------------------------------------------------------------------- eval

/// Reported external baseline for the parallel-existence task, printed as a
/// static reference next to our own numbers.
const TOKEN_BASELINE_REFERENCE: &str =
    "reference (token-based transformer baseline, reported): precision 0.81 recall 0.81 F1 0.80 accuracy 0.80";

pub fn eval(
    model: &Path,
    input: &Path,
    task: Option<&str>,
    split: Option<&Path>,
    output: Option<&Path>,
) -> CliResult {
    let params = load_checkpoint(model).map_err(user)?;
    let task = match task {
        Some(name) => {
            Task::from_name(name).ok_or_else(|| user(format!("unknown task {name:?}")))?
        }
        None => params.config.task,
    };
    let graphs = read_graphs(input)?;

    let train_ids: Option<HashSet<String>> = match split {
        Some(path) => {
            let parsed: SplitFile = serde_json::from_str(&read_file(path)?)
                .map_err(|e| user(format!("bad split file {}: {e}", path.display())))?;
            Some(parsed.train_ids.into_iter().chain(parsed.val_ids).collect())
        }
        None => None,
    };

    let items: Vec<(String, bool, ModelGraph)> = graphs
        .iter()
        .map(|g| {
            (
                g.id.clone(),
                task.label_of(&g.labels),
                model_graph_from_record(g),
            )
        })
        .collect();
    for (id, _, g) in &items {
        g.validate(&params.config)
            .map_err(|e| user(format!("{id}: {e}")))?;
    }

    let report = evaluate(&params, &items, train_ids.as_ref()).map_err(user)?;
    print!("task {}: {}", task.as_str(), report.render_text());
    if task == Task::Parallel {
        println!("{TOKEN_BASELINE_REFERENCE}");
    }

    if let Some(dir) = output {
        fs::create_dir_all(dir)
            .map_err(|e| user(format!("cannot create {}: {e}", dir.display())))?;
        write_file(
            &dir.join("report.json"),
            &serde_json::to_string_pretty(&serde_json::json!({
                "task": task.as_str(),
                "counts": report.counts,
                "metrics": report.metrics,
            }))
            .expect("report serializes"),
        )?;
        write_file(&dir.join("predictions.csv"), &report.rows_csv())?;
    }
    Ok(())
}

// ------------------------------------------------------------------ stats

pub fn stats(input: &Path, output: Option<&Path>) -> CliResult {
    let loops = read_loops(input)?;
    let table = corpus_stats(&loops);
    print!("{}", table.render_text());
    if let Some(path) = output {
        write_file(
            path,
            &serde_json::to_string_pretty(&table).expect("stats serialize"),
        )?;
    }
    Ok(())
}

// -------------------------------------------------------------- gradcheck

pub fn gradcheck(
    d: usize,
    heads: usize,
    layers: usize,
    seed: u64,
    eps: f64,
    output: Option<&Path>,
) -> CliResult {
    let config = ModelConfig {
        d,
        heads,
        layers,
        vocab_size: 10,
        ..Default::default()
    };
    let mut graph_rng = Rng::new(seed ^ 0x6772_6164);
    let graph = loop {
        let g = random_ten_node_graph(&mut graph_rng, config.vocab_size);
        if g.n == 10 {
            break g;
        }
    };
    let params = init_params(&config, &mut Rng::new(seed)).map_err(user)?;
    let report =
        grad_check(&graph, true, &params, eps).map_err(|e| CliError::Internal(e.to_string()))?;

    println!("{:<18} {:>14}", "tensor", "max rel err");
    for (name, err) in &report.per_tensor {
        println!("{name:<18} {err:>14.3e}");
    }
    println!("overall max relative error: {:.3e}", report.max_rel_err);
    if let Some(path) = output {
        write_file(
            path,
            &serde_json::to_string_pretty(&serde_json::json!({
                "per_tensor": report.per_tensor,
                "max_rel_err": report.max_rel_err,
                "eps": eps,
            }))
            .expect("report serializes"),
        )?;
    }
    if report.max_rel_err >= 1e-4 {
        return Err(CliError::Internal(format!(
            "gradient check failed: max relative error {} at tolerance 1e-4",
            report.max_rel_err
        )));
    }
    println!("gradient check passed (tolerance 1e-4)");
    Ok(())
}

fn random_ten_node_graph(rng: &mut Rng, vocab_size: usize) -> ModelGraph {
    let n = 2 + rng.below(15) as usize;
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.below(v as u64) as u32;
        edges.push((parent, 0u8, v as u32));
        edges.push((v as u32, 1u8, parent));
    }
    for _ in 0..rng.below(2 * n as u64) {
        let a = rng.below(n as u64) as u32;
        let b = rng.below(n as u64) as u32;
        let kind = 2 + rng.below(4) as u8;
        edges.push((a, kind, b));
        edges.push((b, kind ^ 1, a));
    }
    for v in 0..n {
        edges.push((v as u32, 6u8, v as u32));
    }
    ModelGraph::new(
        (0..n).map(|_| rng.below(17) as u8).collect(),
        (0..n)
            .map(|_| rng.below(vocab_size as u64) as u32)
            .collect(),
        (0..n).map(|_| rng.below(9) as u8).collect(),
        0,
        edges,
    )
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::User(m) | CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}
