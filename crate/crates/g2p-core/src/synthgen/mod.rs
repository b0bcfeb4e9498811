//! Synthetic labeled-loop generation.
//!
//! Loops are rendered from parameterized templates (ten per pattern) and the
//! intended label of every rendered instance is confirmed by a brute-force
//! dependence oracle before it enters the corpus. A separate concrete
//! interleaving checker provides an independent cross-check of the oracle at
//! small trip counts.

mod corpus;
mod ident;
mod interleave;
mod oracle;
mod render;
mod template;

pub use corpus::{generate_corpus, generate_programs, GeneratorConfig, Manifest, ManifestEntry};
pub use ident::gen_identifier;
pub use interleave::interleave_check;
pub use oracle::{dependence_oracle, OracleVerdict, VerdictPattern, Witness, DEFAULT_TRIP_BOUND};
pub use render::{render_template, GeneratedProgram};
pub use template::{builtin_templates, load_templates_from_dir, Pattern, TemplateSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("template {template_id} ({pattern:?}): {reason}")]
    TemplateBug {
        template_id: u32,
        pattern: Pattern,
        reason: String,
    },
    #[error("unsupported loop construct: {reason}")]
    OracleUnsupported { reason: String },
    #[error("bad template file {path}: {reason}")]
    BadTemplateFile { path: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
