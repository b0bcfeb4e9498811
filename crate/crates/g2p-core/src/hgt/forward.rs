use super::graph_input::ModelGraph;
use super::params::{
    layer_base, HgtParams, EMBED_ORDER, EMBED_TOKEN, EMBED_TYPE, L_ATT, L_A_B, L_A_W, L_K_B, L_K_W,
    L_MSG, L_Q_B, L_Q_W, L_V_B, L_V_W,
};

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4_f64;

pub(super) fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + (SQRT_2_OVER_PI * (x + 0.044715 * x * x * x)).tanh())
}

pub(super) fn gelu_prime(x: f64) -> f64 {
    let inner = SQRT_2_OVER_PI * (x + 0.044715 * x * x * x);
    let t = inner.tanh();
    0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * SQRT_2_OVER_PI * (1.0 + 3.0 * 0.044715 * x * x)
}

/// Everything the backward pass needs from one layer's forward computation.
#[derive(Debug, Clone)]
pub struct LayerCache {
    /// Input states, n x d.
    pub h_in: Vec<f64>,
    /// Key/query/value projections, n x d each.
    pub k: Vec<f64>,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    /// Pre-prior attention scores per (edge, head): k . (W_att q) / sqrt(dk).
    pub raw: Vec<f64>,
    /// Softmax weights per (edge, head).
    pub alpha: Vec<f64>,
    /// W_att q per edge, concatenated heads (e x d).
    pub u: Vec<f64>,
    /// W_msg v per edge, concatenated heads (e x d).
    pub msg: Vec<f64>,
    /// Aggregated per-node update before the activation, n x d.
    pub h_tilde: Vec<f64>,
    /// gelu(h_tilde), n x d.
    pub act: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub h0: Vec<f64>,
    pub layers: Vec<LayerCache>,
    /// Final node states, n x d.
    pub h_out: Vec<f64>,
    /// Readout vector fed to the classifier (root state or mean pool).
    pub readout: Vec<f64>,
    pub logits: [f64; 2],
}

impl ForwardCache {
    /// Per-head attention weights of one layer grouped by target node;
    /// exposed for verification.
    pub fn attention_by_target(&self, graph: &ModelGraph, layer: usize) -> Vec<Vec<&[f64]>> {
        let h = if self.layers.is_empty() {
            0
        } else {
            self.layers[layer].alpha.len() / graph.edges.len()
        };
        graph
            .in_edges
            .iter()
            .map(|incoming| {
                incoming
                    .iter()
                    .map(|&e| {
                        let base = e as usize * h;
                        &self.layers[layer].alpha[base..base + h]
                    })
                    .collect()
            })
            .collect()
    }
}

/// y += W x for a row-major `rows x cols` block. Four accumulators keep the
/// mixed f32/f64 inner loop vectorizable.
pub(super) fn matvec_acc(w: &[f32], x: &[f64], y: &mut [f64], rows: usize, cols: usize) {
    let chunks = cols / 4;
    for r in 0..rows {
        let row = &w[r * cols..(r + 1) * cols];
        let (mut a0, mut a1, mut a2, mut a3) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for c in 0..chunks {
            let b = c * 4;
            a0 += row[b] as f64 * x[b];
            a1 += row[b + 1] as f64 * x[b + 1];
            a2 += row[b + 2] as f64 * x[b + 2];
            a3 += row[b + 3] as f64 * x[b + 3];
        }
        let mut acc = (a0 + a1) + (a2 + a3);
        for c in chunks * 4..cols {
            acc += row[c] as f64 * x[c];
        }
        y[r] += acc;
    }
}

/// y += W^T x for a row-major `rows x cols` block, swept row-wise so reads
/// and writes both stay sequential.
pub(super) fn matvec_t_acc(w: &[f32], x: &[f64], y: &mut [f64], rows: usize, cols: usize) {
    for r in 0..rows {
        let g = x[r];
        if g == 0.0 {
            continue;
        }
        let row = &w[r * cols..(r + 1) * cols];
        for (yv, wv) in y.iter_mut().zip(row.iter()) {
            *yv += *wv as f64 * g;
        }
    }
}

/// Input embedding per node: type row + token row + order row.
pub fn embed_nodes(graph: &ModelGraph, params: &HgtParams) -> Vec<f64> {
    let d = params.config.d;
    let mut h0 = vec![0.0; graph.n * d];
    let e_type = &params.tensors[EMBED_TYPE].data;
    let e_tok = &params.tensors[EMBED_TOKEN].data;
    let e_ord = &params.tensors[EMBED_ORDER].data;
    for v in 0..graph.n {
        let out = &mut h0[v * d..(v + 1) * d];
        let ty = graph.node_type[v] as usize * d;
        let tok = graph.token_id[v] as usize * d;
        let ord = graph.order_id[v] as usize * d;
        for c in 0..d {
            out[c] = e_type[ty + c] as f64 + e_tok[tok + c] as f64 + e_ord[ord + c] as f64;
        }
    }
    h0
}

/// Full forward pass with caches retained for the backward pass.
pub fn forward(graph: &ModelGraph, params: &HgtParams) -> ForwardCache {
    let config = &params.config;
    let (d, heads, dk) = (config.d, config.heads, config.head_dim());
    let n = graph.n;
    let n_edges = graph.edges.len();

    let h0 = embed_nodes(graph, params);
    let mut layers = Vec::with_capacity(config.layers);
    let mut h_in = h0.clone();

    for l in 0..config.layers {
        let base = layer_base(l);
        let mut k = vec![0.0; n * d];
        let mut q = vec![0.0; n * d];
        let mut v = vec![0.0; n * d];

        for node in 0..n {
            let ty = graph.node_type[node] as usize;
            let x = &h_in[node * d..(node + 1) * d];
            for (tensor_w, tensor_b, out) in [
                (L_K_W, L_K_B, &mut k),
                (L_Q_W, L_Q_B, &mut q),
                (L_V_W, L_V_B, &mut v),
            ] {
                let w = params.type_block(base + tensor_w, ty);
                let b = params.type_bias(base + tensor_b, ty);
                let slot = &mut out[node * d..(node + 1) * d];
                for (s, bias) in slot.iter_mut().zip(b.iter()) {
                    *s = *bias as f64;
                }
                matvec_acc(w, x, slot, d, d);
            }
        }

        // Per-edge bilinear scores and messages.
        let mut raw = vec![0.0; n_edges * heads];
        let mut u = vec![0.0; n_edges * d];
        let mut msg = vec![0.0; n_edges * d];
        let scale = 1.0 / (dk as f64).sqrt();
        for (e, &(src, et, dst)) in graph.edges.iter().enumerate() {
            let (src, et, dst) = (src as usize, et as usize, dst as usize);
            for head in 0..heads {
                let k_s = &k[src * d + head * dk..src * d + (head + 1) * dk];
                let q_t = &q[dst * d + head * dk..dst * d + (head + 1) * dk];
                let v_s = &v[src * d + head * dk..src * d + (head + 1) * dk];
                let w_att = params.edge_head_block(base + L_ATT, et, head);
                let w_msg = params.edge_head_block(base + L_MSG, et, head);

                let u_slot = &mut u[e * d + head * dk..e * d + (head + 1) * dk];
                matvec_acc(w_att, q_t, u_slot, dk, dk);
                let mut score = 0.0;
                for (kv, uv) in k_s.iter().zip(u_slot.iter()) {
                    score += kv * uv;
                }
                raw[e * heads + head] = score * scale;

                let m_slot = &mut msg[e * d + head * dk..e * d + (head + 1) * dk];
                matvec_acc(w_msg, v_s, m_slot, dk, dk);
            }
        }

        // Per-target, per-head softmax with max subtraction.
        let mut alpha = vec![0.0; n_edges * heads];
        for incoming in &graph.in_edges {
            for head in 0..heads {
                let mut max_score = f64::NEG_INFINITY;
                for &e in incoming {
                    let et = graph.edges[e as usize].1 as usize;
                    let s = raw[e as usize * heads + head] * params.prior(l, et) as f64;
                    max_score = max_score.max(s);
                }
                let mut total = 0.0;
                for &e in incoming {
                    let et = graph.edges[e as usize].1 as usize;
                    let s = raw[e as usize * heads + head] * params.prior(l, et) as f64;
                    let w = (s - max_score).exp();
                    alpha[e as usize * heads + head] = w;
                    total += w;
                }
                for &e in incoming {
                    alpha[e as usize * heads + head] /= total;
                }
            }
        }

        // Aggregate and update.
        let mut h_tilde = vec![0.0; n * d];
        for (e, &(_, _, dst)) in graph.edges.iter().enumerate() {
            let dst = dst as usize;
            for head in 0..heads {
                let a = alpha[e * heads + head];
                let m = &msg[e * d + head * dk..e * d + (head + 1) * dk];
                let out = &mut h_tilde[dst * d + head * dk..dst * d + (head + 1) * dk];
                for (o, mv) in out.iter_mut().zip(m.iter()) {
                    *o += a * mv;
                }
            }
        }

        let mut act = vec![0.0; n * d];
        let mut h_out = vec![0.0; n * d];
        for node in 0..n {
            let ty = graph.node_type[node] as usize;
            for c in 0..d {
                act[node * d + c] = gelu(h_tilde[node * d + c]);
            }
            let w = params.type_block(base + L_A_W, ty);
            let b = params.type_bias(base + L_A_B, ty);
            let out = &mut h_out[node * d..(node + 1) * d];
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = b[c] as f64 + h_in[node * d + c];
            }
            matvec_acc(w, &act[node * d..(node + 1) * d], out, d, d);
        }

        layers.push(LayerCache {
            h_in,
            k,
            q,
            v,
            raw,
            alpha,
            u,
            msg,
            h_tilde,
            act,
        });
        h_in = h_out;
    }

    let h_out = h_in;
    let readout = if params.config.mean_pool {
        let mut pooled = vec![0.0; d];
        for node in 0..n {
            for c in 0..d {
                pooled[c] += h_out[node * d + c];
            }
        }
        for p in pooled.iter_mut() {
            *p /= n as f64;
        }
        pooled
    } else {
        h_out[graph.root * d..(graph.root + 1) * d].to_vec()
    };

    let head_w = &params.tensors[super::params::head_w_index(config)];
    let head_b = &params.tensors[super::params::head_w_index(config) + 1];
    let mut logits = [head_b.data[0] as f64, head_b.data[1] as f64];
    for (j, logit) in logits.iter_mut().enumerate() {
        let row = &head_w.data[j * d..(j + 1) * d];
        for (wv, rv) in row.iter().zip(readout.iter()) {
            *logit += *wv as f64 * *rv;
        }
    }

    ForwardCache {
        h0,
        layers,
        h_out,
        readout,
        logits,
    }
}

pub fn logits(graph: &ModelGraph, params: &HgtParams) -> [f64; 2] {
    forward(graph, params).logits
}

/// `softmax(logits)[1]`: probability of the positive class.
pub fn prob_positive(graph: &ModelGraph, params: &HgtParams) -> f64 {
    let [a, b] = logits(graph, params);
    let m = a.max(b);
    let (ea, eb) = ((a - m).exp(), (b - m).exp());
    eb / (ea + eb)
}
