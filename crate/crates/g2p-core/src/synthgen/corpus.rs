use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cfront::{tokenize, LabelSet, LoopRecord, TokenKind};
use crate::jsonl;
use crate::rng::Rng;

use super::render::{render_template, GeneratedProgram};
use super::template::{Pattern, TemplateSpec};
use super::SynthError;

/// Defaults reproduce the shipped corpus: 10 templates x 20 variants per
/// parallel pattern plus 700 non-parallel files.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n_variants_per_template: usize,
    pub n_nonparallel: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_variants_per_template: 20,
            n_nonparallel: 700,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub template_id: u32,
    pub pattern: Pattern,
    pub seed: u64,
    pub labels: LabelSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

/// Render the whole corpus in memory, in deterministic order: do-all
/// templates x variants, then reduction, then the non-parallel files spread
/// round-robin over their templates.
pub fn generate_programs(
    templates: &[TemplateSpec],
    config: &GeneratorConfig,
) -> Result<Vec<(String, GeneratedProgram, Pattern)>, SynthError> {
    let of_pattern = |p: Pattern| -> Vec<&TemplateSpec> {
        let mut v: Vec<&TemplateSpec> = templates.iter().filter(|t| t.pattern == p).collect();
        v.sort_by_key(|t| t.template_id);
        v
    };

    let mut out = Vec::new();
    for pattern in [Pattern::DoAll, Pattern::Reduction] {
        let group = of_pattern(pattern);
        if group.is_empty() {
            return Err(SynthError::BadTemplateFile {
                path: "<template set>".into(),
                reason: format!("no templates for pattern {pattern:?}"),
            });
        }
        for spec in &group {
            for variant in 0..config.n_variants_per_template {
                let seed = file_seed(config.seed, pattern, spec.template_id, variant);
                let name = file_name(pattern, spec.template_id, variant);
                out.push((name, render_template(spec, seed)?, pattern));
            }
        }
    }

    let group = of_pattern(Pattern::NonParallel);
    if group.is_empty() && config.n_nonparallel > 0 {
        return Err(SynthError::BadTemplateFile {
            path: "<template set>".into(),
            reason: "no non-parallel templates".into(),
        });
    }
    for k in 0..config.n_nonparallel {
        let spec = group[k % group.len()];
        let variant = k / group.len();
        let seed = file_seed(config.seed, Pattern::NonParallel, spec.template_id, variant);
        let name = file_name(Pattern::NonParallel, spec.template_id, variant);
        out.push((name, render_template(spec, seed)?, Pattern::NonParallel));
    }
    Ok(out)
}

/// Write the corpus to `out_dir`: one `.c` file per program, `manifest.json`
/// describing every file, and `loops.jsonl` carrying the loop bodies with
/// their generator-assigned labels in the extraction schema.
pub fn generate_corpus(
    templates: &[TemplateSpec],
    config: &GeneratorConfig,
    out_dir: &Path,
) -> Result<Manifest, SynthError> {
    let io_err = |path: &Path, e: std::io::Error| SynthError::Io {
        path: path.display().to_string(),
        source: e,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let programs = generate_programs(templates, config)?;
    let mut entries = Vec::with_capacity(programs.len());
    let mut records = Vec::with_capacity(programs.len());

    for (name, program, pattern) in &programs {
        let path = out_dir.join(name);
        fs::write(&path, &program.source).map_err(|e| io_err(&path, e))?;
        entries.push(ManifestEntry {
            file: name.clone(),
            template_id: program.template_id,
            pattern: *pattern,
            seed: program.seed,
            labels: program.label,
        });
        records.push(loop_record(name, program));
    }

    let manifest = Manifest {
        seed: config.seed,
        entries,
    };
    let manifest_path = out_dir.join("manifest.json");
    let manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&manifest_path, manifest_json).map_err(|e| io_err(&manifest_path, e))?;

    let loops_path = out_dir.join("loops.jsonl");
    fs::write(&loops_path, jsonl::to_string(records.iter())).map_err(|e| io_err(&loops_path, e))?;

    Ok(manifest)
}

/// The cfront-schema record for a generated loop. Labels come from the
/// generator, not from pragmas; structural fields are computed from the text.
pub fn loop_record(file_name: &str, program: &GeneratedProgram) -> LoopRecord {
    let (has_call, is_nested) = match tokenize(&program.loop_text) {
        Ok(tokens) => {
            let call = tokens
                .windows(2)
                .any(|w| w[0].kind == TokenKind::Identifier && w[1].text == "(");
            let nested = tokens
                .iter()
                .skip(1)
                .any(|t| t.kind == TokenKind::Keyword && t.text == "for");
            (call, nested)
        }
        Err(_) => (false, false),
    };
    LoopRecord {
        id: format!("{file_name}#0"),
        text: program.loop_text.clone(),
        pragma_raw: None,
        labels: program.label,
        has_function_call: has_call,
        is_nested,
        loc: program
            .loop_text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .count()
            .max(1) as u32,
    }
}

fn file_name(pattern: Pattern, template_id: u32, variant: usize) -> String {
    format!("{}_t{:02}_v{:03}.c", pattern.as_str(), template_id, variant)
}

/// Independent sub-seed per file so variants can be rendered in any order.
fn file_seed(seed: u64, pattern: Pattern, template_id: u32, variant: usize) -> u64 {
    let tag = match pattern {
        Pattern::DoAll => 1u64,
        Pattern::Reduction => 2,
        Pattern::NonParallel => 3,
    };
    Rng::derive(seed, &[tag, template_id as u64, variant as u64]).next_u64()
}
