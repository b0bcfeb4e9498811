use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SynthError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    DoAll,
    Reduction,
    NonParallel,
}

impl Pattern {
    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::DoAll => "do_all",
            Pattern::Reduction => "reduction",
            Pattern::NonParallel => "non_parallel",
        }
    }
}

/// A loop template: plain text with `{{slot}}` markers.
///
/// Slot families: `counter` and `red_var` render as fresh identifiers;
/// `arr`, `arr2`, `arr3` as array names and `var`, `var2` as scalar names;
/// `limit`, `constant`, `term`, `term2` as random integers in `[1, 10^5]`;
/// `operator` draws from `+ - * /` and `red_operator` from `+ *` (the two
/// associative-commutative choices); `operand` is resolved per occurrence as
/// an array element, a scalar, or a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSpec {
    pub pattern: Pattern,
    pub template_id: u32,
    pub body_form: String,
}

macro_rules! embed {
    ($name:literal) => {
        include_str!(concat!("../../templates/", $name))
    };
}

const DO_ALL: [&str; 10] = [
    embed!("do_all_00.c.tmpl"),
    embed!("do_all_01.c.tmpl"),
    embed!("do_all_02.c.tmpl"),
    embed!("do_all_03.c.tmpl"),
    embed!("do_all_04.c.tmpl"),
    embed!("do_all_05.c.tmpl"),
    embed!("do_all_06.c.tmpl"),
    embed!("do_all_07.c.tmpl"),
    embed!("do_all_08.c.tmpl"),
    embed!("do_all_09.c.tmpl"),
];

const REDUCTION: [&str; 10] = [
    embed!("reduction_00.c.tmpl"),
    embed!("reduction_01.c.tmpl"),
    embed!("reduction_02.c.tmpl"),
    embed!("reduction_03.c.tmpl"),
    embed!("reduction_04.c.tmpl"),
    embed!("reduction_05.c.tmpl"),
    embed!("reduction_06.c.tmpl"),
    embed!("reduction_07.c.tmpl"),
    embed!("reduction_08.c.tmpl"),
    embed!("reduction_09.c.tmpl"),
];

const NON_PARALLEL: [&str; 10] = [
    embed!("non_parallel_00.c.tmpl"),
    embed!("non_parallel_01.c.tmpl"),
    embed!("non_parallel_02.c.tmpl"),
    embed!("non_parallel_03.c.tmpl"),
    embed!("non_parallel_04.c.tmpl"),
    embed!("non_parallel_05.c.tmpl"),
    embed!("non_parallel_06.c.tmpl"),
    embed!("non_parallel_07.c.tmpl"),
    embed!("non_parallel_08.c.tmpl"),
    embed!("non_parallel_09.c.tmpl"),
];

/// The shipped template set: ten per pattern.
pub fn builtin_templates() -> Vec<TemplateSpec> {
    let mut out = Vec::with_capacity(30);
    for (pattern, bodies) in [
        (Pattern::DoAll, &DO_ALL),
        (Pattern::Reduction, &REDUCTION),
        (Pattern::NonParallel, &NON_PARALLEL),
    ] {
        for (i, body) in bodies.iter().enumerate() {
            out.push(TemplateSpec {
                pattern,
                template_id: i as u32,
                body_form: body.to_string(),
            });
        }
    }
    out
}

/// Load `<pattern>_<id>.c.tmpl` files from a directory.
pub fn load_templates_from_dir(dir: &Path) -> Result<Vec<TemplateSpec>, SynthError> {
    let mut out = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| SynthError::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let mut paths: Vec<std::path::PathBuf> =
        entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths {
        let name = match path.file_name().and_then(|n| n.to_str()) {
            Some(n) if n.ends_with(".c.tmpl") => n.trim_end_matches(".c.tmpl").to_string(),
            _ => continue,
        };
        let (pattern, id) =
            parse_template_name(&name).ok_or_else(|| SynthError::BadTemplateFile {
                path: path.display().to_string(),
                reason: "expected <do_all|reduction|non_parallel>_<NN>.c.tmpl".into(),
            })?;
        let body_form = fs::read_to_string(&path).map_err(|e| SynthError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        out.push(TemplateSpec {
            pattern,
            template_id: id,
            body_form,
        });
    }
    if out.is_empty() {
        return Err(SynthError::BadTemplateFile {
            path: dir.display().to_string(),
            reason: "no *.c.tmpl files found".into(),
        });
    }
    Ok(out)
}

fn parse_template_name(name: &str) -> Option<(Pattern, u32)> {
    for (prefix, pattern) in [
        ("do_all_", Pattern::DoAll),
        ("reduction_", Pattern::Reduction),
        ("non_parallel_", Pattern::NonParallel),
    ] {
        if let Some(rest) = name.strip_prefix(prefix) {
            return rest.parse().ok().map(|id| (pattern, id));
        }
    }
    None
}
