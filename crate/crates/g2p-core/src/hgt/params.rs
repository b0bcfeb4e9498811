use crate::rng::Rng;

use super::config::ModelConfig;
use super::ModelError;

/// A named, shaped, flat buffer of little-endian `f32` values. Row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl Tensor {
    pub fn zeros(name: impl Into<String>, shape: Vec<usize>) -> Tensor {
        let len = shape.iter().product();
        Tensor {
            name: name.into(),
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// All learnable state. Tensor order is fixed by [`tensor_specs`]: the three
/// input embedding tables, eleven tensors per layer (k/q/v/a projections
/// with biases, attention and message matrices, edge priors), and the
/// classifier head.
#[derive(Debug, Clone, PartialEq)]
pub struct HgtParams {
    pub config: ModelConfig,
    pub tensors: Vec<Tensor>,
}

pub(super) const EMBED_TYPE: usize = 0;
pub(super) const EMBED_TOKEN: usize = 1;
pub(super) const EMBED_ORDER: usize = 2;
pub(super) const PER_LAYER: usize = 11;

pub(super) const L_K_W: usize = 0;
pub(super) const L_K_B: usize = 1;
pub(super) const L_Q_W: usize = 2;
pub(super) const L_Q_B: usize = 3;
pub(super) const L_V_W: usize = 4;
pub(super) const L_V_B: usize = 5;
pub(super) const L_A_W: usize = 6;
pub(super) const L_A_B: usize = 7;
pub(super) const L_ATT: usize = 8;
pub(super) const L_MSG: usize = 9;
pub(super) const L_PRIOR: usize = 10;

pub(super) fn layer_base(layer: usize) -> usize {
    3 + PER_LAYER * layer
}

pub(super) fn head_w_index(config: &ModelConfig) -> usize {
    3 + PER_LAYER * config.layers
}

/// Tensor names and shapes in serialization order.
pub fn tensor_specs(config: &ModelConfig) -> Vec<(String, Vec<usize>)> {
    let (d, h, dk) = (config.d, config.heads, config.head_dim());
    let (t, e) = (config.n_node_types, config.n_edge_types);
    let mut specs = vec![
        ("embed.type".to_string(), vec![t, d]),
        ("embed.token".to_string(), vec![config.vocab_size, d]),
        ("embed.order".to_string(), vec![config.n_order_buckets, d]),
    ];
    for l in 0..config.layers {
        for proj in ["k", "q", "v", "a"] {
            specs.push((format!("layer{l}.{proj}.weight"), vec![t, d, d]));
            specs.push((format!("layer{l}.{proj}.bias"), vec![t, d]));
        }
        specs.push((format!("layer{l}.att"), vec![e, h, dk, dk]));
        specs.push((format!("layer{l}.msg"), vec![e, h, dk, dk]));
        specs.push((format!("layer{l}.prior"), vec![e]));
    }
    specs.push(("head.weight".to_string(), vec![2, d]));
    specs.push(("head.bias".to_string(), vec![2]));
    specs
}

/// Total learnable scalar count; a pure function of the configuration.
pub fn param_count(config: &ModelConfig) -> usize {
    tensor_specs(config)
        .iter()
        .map(|(_, s)| s.iter().product::<usize>())
        .sum()
}

/// Glorot-uniform weights (`sqrt(6 / (fan_in + fan_out))` bound), zero
/// biases, unit edge priors. Draws happen in fixed tensor order, so a seed
/// fully determines the bytes.
pub fn init_params(config: &ModelConfig, rng: &mut Rng) -> Result<HgtParams, ModelError> {
    config.validate()?;
    let d = config.d;
    let dk = config.head_dim();
    let mut tensors = Vec::new();

    for (name, shape) in tensor_specs(config) {
        let mut tensor = Tensor::zeros(name, shape);
        let fan = |fan_in: usize, fan_out: usize| (6.0 / (fan_in + fan_out) as f64).sqrt();
        let bound = match tensor.name.as_str() {
            "embed.type" | "embed.token" | "embed.order" => fan(tensor.shape[0], d),
            "head.weight" => fan(d, 2),
            "head.bias" => 0.0,
            name if name.ends_with(".bias") => 0.0,
            name if name.ends_with(".att") || name.ends_with(".msg") => fan(dk, dk),
            name if name.ends_with(".prior") => {
                tensor.data.fill(1.0);
                0.0
            }
            _ => fan(d, d),
        };
        if bound > 0.0 {
            for value in tensor.data.iter_mut() {
                *value = rng.uniform(-bound, bound) as f32;
            }
        }
        tensors.push(tensor);
    }
    Ok(HgtParams {
        config: config.clone(),
        tensors,
    })
}

impl HgtParams {
    /// Row-major `d x d` weight block for one node type.
    pub(super) fn type_block(&self, tensor: usize, node_type: usize) -> &[f32] {
        let d = self.config.d;
        let t = &self.tensors[tensor];
        &t.data[node_type * d * d..(node_type + 1) * d * d]
    }

    pub(super) fn type_bias(&self, tensor: usize, node_type: usize) -> &[f32] {
        let d = self.config.d;
        let t = &self.tensors[tensor];
        &t.data[node_type * d..(node_type + 1) * d]
    }

    /// `dk x dk` block for one (edge type, head) pair.
    pub(super) fn edge_head_block(&self, tensor: usize, edge_type: usize, head: usize) -> &[f32] {
        let dk = self.config.head_dim();
        let h = self.config.heads;
        let t = &self.tensors[tensor];
        let base = (edge_type * h + head) * dk * dk;
        &t.data[base..base + dk * dk]
    }

    pub(super) fn prior(&self, layer: usize, edge_type: usize) -> f32 {
        self.tensors[layer_base(layer) + L_PRIOR].data[edge_type]
    }

    pub fn total_params(&self) -> usize {
        self.tensors.iter().map(Tensor::len).sum()
    }
}
