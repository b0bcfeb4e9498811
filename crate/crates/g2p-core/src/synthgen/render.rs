use std::collections::{HashMap, HashSet};

use crate::cfront::LabelSet;
use crate::rng::Rng;

use super::ident::gen_unique_identifier;
use super::oracle::{dependence_oracle, VerdictPattern, DEFAULT_TRIP_BOUND};
use super::template::{Pattern, TemplateSpec};
use super::SynthError;

/// Arrays are indexed by `counter` and `counter + term`, both below
/// 2 * 10^5, so one global size covers every template.
const ARRAY_LEN: usize = 200_002;
const INT_SLOT_MAX: i64 = 100_000;

#[derive(Debug, Clone)]
pub struct GeneratedProgram {
    /// Complete compilable C file with declarations and a `main`.
    pub source: String,
    /// The rendered loop; occurs verbatim in `source`.
    pub loop_text: String,
    pub label: LabelSet,
    pub seed: u64,
    pub template_id: u32,
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Scalar,
    Array,
    Counter,
}

struct RenderState {
    rng: Rng,
    used: HashSet<String>,
    values: HashMap<String, String>,
    /// (name, role) in creation order, for deterministic declarations.
    decls: Vec<(String, Role)>,
}

impl RenderState {
    fn fresh_ident(&mut self, role: Role) -> String {
        let name = gen_unique_identifier(&mut self.rng, &mut self.used);
        self.decls.push((name.clone(), role));
        name
    }

    fn slot_value(&mut self, slot: &str) -> Result<String, String> {
        if let Some(v) = self.values.get(slot) {
            return Ok(v.clone());
        }
        let value = match slot {
            "counter" => self.fresh_ident(Role::Counter),
            "red_var" | "var" | "var2" => self.fresh_ident(Role::Scalar),
            "arr" | "arr2" | "arr3" => self.fresh_ident(Role::Array),
            "limit" | "constant" | "term" | "term2" => {
                self.rng.range_i64(1, INT_SLOT_MAX).to_string()
            }
            "operator" => self.rng.choose(&["+", "-", "*", "/"]).to_string(),
            "red_operator" => self.rng.choose(&["+", "*"]).to_string(),
            other => return Err(format!("unknown slot {{{{{other}}}}}")),
        };
        self.values.insert(slot.to_string(), value.clone());
        Ok(value)
    }

    /// `operand` resolves independently at each occurrence: a constant, a
    /// fresh scalar, or a fresh array element indexed by the counter.
    fn operand(&mut self) -> Result<String, String> {
        match self.rng.below(3) {
            0 => Ok(self.rng.range_i64(1, INT_SLOT_MAX).to_string()),
            1 => Ok(self.fresh_ident(Role::Scalar)),
            _ => {
                let counter = self.slot_value("counter")?;
                let arr = self.fresh_ident(Role::Array);
                Ok(format!("{arr}[{counter}]"))
            }
        }
    }
}

/// Fill a template's slots and wrap the loop into a complete program. The
/// label follows the template's pattern and is then confirmed by the
/// dependence oracle; any disagreement is a template bug and fails loudly.
pub fn render_template(spec: &TemplateSpec, seed: u64) -> Result<GeneratedProgram, SynthError> {
    let mut state = RenderState {
        rng: Rng::new(seed),
        used: HashSet::new(),
        values: HashMap::new(),
        decls: Vec::new(),
    };

    let loop_text =
        fill_slots(&spec.body_form, &mut state).map_err(|reason| SynthError::TemplateBug {
            template_id: spec.template_id,
            pattern: spec.pattern,
            reason,
        })?;
    let loop_text = loop_text.trim_end().to_string();

    let mut source = String::new();
    for (name, role) in &state.decls {
        match role {
            Role::Array => source.push_str(&format!("int {name}[{ARRAY_LEN}];\n")),
            Role::Scalar => {
                let init = state.rng.range_i64(1, INT_SLOT_MAX);
                source.push_str(&format!("int {name} = {init};\n"));
            }
            Role::Counter => {}
        }
    }
    source.push_str("\nint main() {\n");
    for (name, role) in &state.decls {
        if *role == Role::Counter {
            source.push_str(&format!("    int {name};\n"));
        }
    }
    source.push('\n');
    source.push_str(&loop_text);
    source.push_str("\n    return 0;\n}\n");

    let label = match spec.pattern {
        Pattern::DoAll => LabelSet {
            parallel: true,
            private: true,
            ..LabelSet::NON_PARALLEL
        },
        Pattern::Reduction => LabelSet {
            parallel: true,
            reduction: true,
            ..LabelSet::NON_PARALLEL
        },
        Pattern::NonParallel => LabelSet::NON_PARALLEL,
    };

    confirm_with_oracle(spec, &loop_text)?;

    Ok(GeneratedProgram {
        source,
        loop_text,
        label,
        seed,
        template_id: spec.template_id,
    })
}

fn confirm_with_oracle(spec: &TemplateSpec, loop_text: &str) -> Result<(), SynthError> {
    let bug = |reason: String| SynthError::TemplateBug {
        template_id: spec.template_id,
        pattern: spec.pattern,
        reason,
    };
    let verdict = dependence_oracle(loop_text, DEFAULT_TRIP_BOUND)
        .map_err(|e| bug(format!("oracle cannot analyze rendered loop: {e}")))?;
    let ok = match spec.pattern {
        Pattern::DoAll => verdict.parallel && verdict.pattern == VerdictPattern::DoAll,
        Pattern::Reduction => verdict.parallel && verdict.pattern == VerdictPattern::Reduction,
        Pattern::NonParallel => !verdict.parallel,
    };
    if !ok {
        return Err(bug(format!(
            "oracle verdict {verdict:?} disagrees with intended pattern on:\n{loop_text}"
        )));
    }
    Ok(())
}

fn fill_slots(body: &str, state: &mut RenderState) -> Result<String, String> {
    let mut out = String::with_capacity(body.len());
    let mut rest = body;
    while let Some(open) = rest.find("{{") {
        out.push_str(&rest[..open]);
        let after = &rest[open + 2..];
        let close = after.find("}}").ok_or("unterminated {{slot}}")?;
        let slot = after[..close].trim();
        let value = if slot == "operand" {
            state.operand()?
        } else {
            state.slot_value(slot)?
        };
        out.push_str(&value);
        rest = &after[close + 2..];
    }
    out.push_str(rest);
    Ok(out)
}
