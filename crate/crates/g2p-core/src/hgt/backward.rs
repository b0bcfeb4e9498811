use super::forward::{forward, gelu_prime, matvec_t_acc, ForwardCache};
use super::graph_input::ModelGraph;
use super::params::{
    head_w_index, layer_base, HgtParams, EMBED_ORDER, EMBED_TOKEN, EMBED_TYPE, L_ATT, L_A_B, L_A_W,
    L_K_B, L_K_W, L_MSG, L_PRIOR, L_Q_B, L_Q_W, L_V_B, L_V_W,
};
use super::ModelError;

/// Gradient buffers parallel to the parameter tensors, accumulated in f64.
#[derive(Debug, Clone)]
pub struct Grads {
    pub tensors: Vec<Vec<f64>>,
}

impl Grads {
    pub fn zeros_like(params: &HgtParams) -> Grads {
        Grads {
            tensors: params.tensors.iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in &mut self.tensors {
            for v in t.iter_mut() {
                *v *= factor;
            }
        }
    }
}

/// Cross-entropy of one example from cached logits.
fn cross_entropy(logits: [f64; 2], label: bool) -> (f64, [f64; 2]) {
    let m = logits[0].max(logits[1]);
    let exps = [(logits[0] - m).exp(), (logits[1] - m).exp()];
    let z = exps[0] + exps[1];
    let probs = [exps[0] / z, exps[1] / z];
    let y = label as usize;
    let loss = -(probs[y].max(1e-300)).ln();
    let mut dlogits = probs;
    dlogits[y] -= 1.0;
    (loss, dlogits)
}

/// Forward-only mean loss; the finite-difference side of the gradient check.
pub fn loss_only(batch: &[(&ModelGraph, bool)], params: &HgtParams) -> f64 {
    let mut total = 0.0;
    for &(graph, label) in batch {
        let cache = forward(graph, params);
        total += cross_entropy(cache.logits, label).0;
    }
    total / batch.len() as f64
}

/// Mean cross-entropy over the batch and its gradient with respect to every
/// parameter tensor, by reverse accumulation through the attention, message,
/// aggregation, activation, residual and embedding stages.
pub fn loss_and_grad(
    batch: &[(&ModelGraph, bool)],
    params: &HgtParams,
) -> Result<(f64, Grads), ModelError> {
    if batch.is_empty() {
        return Err(ModelError::Config("empty batch".into()));
    }
    let mut grads = Grads::zeros_like(params);
    let mut total_loss = 0.0;
    let weight = 1.0 / batch.len() as f64;

    for &(graph, label) in batch {
        let cache = forward(graph, params);
        let (loss, mut dlogits) = cross_entropy(cache.logits, label);
        if !loss.is_finite() {
            return Err(ModelError::NanLoss(format!(
                "example with label {label}: logits {:?}",
                cache.logits
            )));
        }
        total_loss += loss * weight;
        dlogits[0] *= weight;
        dlogits[1] *= weight;
        backward_graph(graph, params, &cache, dlogits, &mut grads);
    }
    Ok((total_loss, grads))
}

fn backward_graph(
    graph: &ModelGraph,
    params: &HgtParams,
    cache: &ForwardCache,
    dlogits: [f64; 2],
    grads: &mut Grads,
) {
    let config = &params.config;
    let d = config.d;
    let n = graph.n;
    let head_w = head_w_index(config);

    // Classifier.
    let mut d_readout = vec![0.0; d];
    {
        let w = &params.tensors[head_w].data;
        let (gw, gb) = {
            let (a, b) = grads.tensors.split_at_mut(head_w + 1);
            (&mut a[head_w], &mut b[0])
        };
        for j in 0..2 {
            gb[j] += dlogits[j];
            for c in 0..d {
                gw[j * d + c] += dlogits[j] * cache.readout[c];
                d_readout[c] += w[j * d + c] as f64 * dlogits[j];
            }
        }
    }

    let mut d_h = vec![0.0; n * d];
    if config.mean_pool {
        let inv = 1.0 / n as f64;
        for node in 0..n {
            for c in 0..d {
                d_h[node * d + c] = d_readout[c] * inv;
            }
        }
    } else {
        d_h[graph.root * d..(graph.root + 1) * d].copy_from_slice(&d_readout);
    }

    for l in (0..config.layers).rev() {
        d_h = backward_layer(graph, params, &cache.layers[l], l, d_h, grads);
    }

    // Embedding tables.
    let e_type = &mut grads.tensors[EMBED_TYPE];
    for node in 0..n {
        let row = graph.node_type[node] as usize * d;
        for c in 0..d {
            e_type[row + c] += d_h[node * d + c];
        }
    }
    let e_tok = &mut grads.tensors[EMBED_TOKEN];
    for node in 0..n {
        let row = graph.token_id[node] as usize * d;
        for c in 0..d {
            e_tok[row + c] += d_h[node * d + c];
        }
    }
    let e_ord = &mut grads.tensors[EMBED_ORDER];
    for node in 0..n {
        let row = graph.order_id[node] as usize * d;
        for c in 0..d {
            e_ord[row + c] += d_h[node * d + c];
        }
    }
}

/// Backward through one layer; returns the gradient w.r.t. the layer input.
fn backward_layer(
    graph: &ModelGraph,
    params: &HgtParams,
    cache: &super::forward::LayerCache,
    layer: usize,
    d_out: Vec<f64>,
    grads: &mut Grads,
) -> Vec<f64> {
    let config = &params.config;
    let (d, heads, dk) = (config.d, config.heads, config.head_dim());
    let n = graph.n;
    let n_edges = graph.edges.len();
    let base = layer_base(layer);
    let scale = 1.0 / (dk as f64).sqrt();

    let mut d_in = vec![0.0; n * d];
    let mut d_tilde = vec![0.0; n * d];

    // Residual, output projection, activation.
    let mut dg = vec![0.0; d];
    for node in 0..n {
        let ty = graph.node_type[node] as usize;
        let dq_out = &d_out[node * d..(node + 1) * d];
        for c in 0..d {
            d_in[node * d + c] += dq_out[c];
        }
        let w = params.type_block(base + L_A_W, ty);
        let act = &cache.act[node * d..(node + 1) * d];
        {
            let gw = &mut grads.tensors[base + L_A_W];
            let block = ty * d * d;
            for r in 0..d {
                let g = dq_out[r];
                if g != 0.0 {
                    let row = &mut gw[block + r * d..block + (r + 1) * d];
                    for (slot, a) in row.iter_mut().zip(act.iter()) {
                        *slot += g * a;
                    }
                }
            }
        }
        {
            let gb = &mut grads.tensors[base + L_A_B];
            for r in 0..d {
                gb[ty * d + r] += dq_out[r];
            }
        }
        dg.fill(0.0);
        matvec_t_acc(w, dq_out, &mut dg, d, d);
        for c in 0..d {
            d_tilde[node * d + c] = dg[c] * gelu_prime(cache.h_tilde[node * d + c]);
        }
    }

    // Aggregation, softmax, scores, messages.
    let mut d_k = vec![0.0; n * d];
    let mut d_q = vec![0.0; n * d];
    let mut d_v = vec![0.0; n * d];
    let mut d_alpha = vec![0.0; n_edges * heads];
    let mut d_score = vec![0.0; n_edges * heads];

    for (t, incoming) in graph.in_edges.iter().enumerate() {
        for head in 0..heads {
            let dt = &d_tilde[t * d + head * dk..t * d + (head + 1) * dk];
            for &e in incoming {
                let e = e as usize;
                let m = &cache.msg[e * d + head * dk..e * d + (head + 1) * dk];
                let mut acc = 0.0;
                for (dv, mv) in dt.iter().zip(m.iter()) {
                    acc += dv * mv;
                }
                d_alpha[e * heads + head] = acc;
            }
            let mut weighted = 0.0;
            for &e in incoming {
                let e = e as usize;
                weighted += cache.alpha[e * heads + head] * d_alpha[e * heads + head];
            }
            for &e in incoming {
                let e = e as usize;
                d_score[e * heads + head] =
                    cache.alpha[e * heads + head] * (d_alpha[e * heads + head] - weighted);
            }
        }
    }

    let mut dm = vec![0.0; dk];
    let mut k_scaled = vec![0.0; dk];
    for (e, &(src, et, dst)) in graph.edges.iter().enumerate() {
        let (src, et, dst) = (src as usize, et as usize, dst as usize);
        let prior = params.prior(layer, et) as f64;
        for head in 0..heads {
            let ds = d_score[e * heads + head];
            let alpha = cache.alpha[e * heads + head];

            // Message path: d_msg = alpha * d_tilde slice.
            let dt = &d_tilde[dst * d + head * dk..dst * d + (head + 1) * dk];
            let v_s = &cache.v[src * d + head * dk..src * d + (head + 1) * dk];
            let w_msg = params.edge_head_block(base + L_MSG, et, head);
            for (slot, t) in dm.iter_mut().zip(dt.iter()) {
                *slot = alpha * t;
            }
            {
                let gw = &mut grads.tensors[base + L_MSG];
                let block = (et * heads + head) * dk * dk;
                for a in 0..dk {
                    if dm[a] != 0.0 {
                        let row = &mut gw[block + a * dk..block + (a + 1) * dk];
                        for (slot, v) in row.iter_mut().zip(v_s.iter()) {
                            *slot += dm[a] * v;
                        }
                    }
                }
            }
            matvec_t_acc(
                w_msg,
                &dm,
                &mut d_v[src * d + head * dk..src * d + (head + 1) * dk],
                dk,
                dk,
            );

            if ds == 0.0 {
                continue;
            }
            // Score path: score = raw * prior, raw = k . u * scale.
            let raw = cache.raw[e * heads + head];
            grads.tensors[base + L_PRIOR][et] += ds * raw;
            let draw = ds * prior;

            let k_s = &cache.k[src * d + head * dk..src * d + (head + 1) * dk];
            let q_t = &cache.q[dst * d + head * dk..dst * d + (head + 1) * dk];
            let u_e = &cache.u[e * d + head * dk..e * d + (head + 1) * dk];
            let w_att = params.edge_head_block(base + L_ATT, et, head);

            for a in 0..dk {
                d_k[src * d + head * dk + a] += draw * scale * u_e[a];
                k_scaled[a] = draw * scale * k_s[a];
            }
            {
                let gw = &mut grads.tensors[base + L_ATT];
                let block = (et * heads + head) * dk * dk;
                for a in 0..dk {
                    if k_scaled[a] != 0.0 {
                        let row = &mut gw[block + a * dk..block + (a + 1) * dk];
                        for (slot, q) in row.iter_mut().zip(q_t.iter()) {
                            *slot += k_scaled[a] * q;
                        }
                    }
                }
            }
            matvec_t_acc(
                w_att,
                &k_scaled,
                &mut d_q[dst * d + head * dk..dst * d + (head + 1) * dk],
                dk,
                dk,
            );
        }
    }

    // Projections back to the layer input.
    for node in 0..n {
        let ty = graph.node_type[node] as usize;
        let h_in = &cache.h_in[node * d..(node + 1) * d];
        for (dvec, w_idx, b_idx) in [
            (&d_k, L_K_W, L_K_B),
            (&d_q, L_Q_W, L_Q_B),
            (&d_v, L_V_W, L_V_B),
        ] {
            let dn = &dvec[node * d..(node + 1) * d];
            let w = params.type_block(base + w_idx, ty);
            {
                let gw = &mut grads.tensors[base + w_idx];
                let block = ty * d * d;
                for r in 0..d {
                    let g = dn[r];
                    if g != 0.0 {
                        let row = &mut gw[block + r * d..block + (r + 1) * d];
                        for (slot, h) in row.iter_mut().zip(h_in.iter()) {
                            *slot += g * h;
                        }
                    }
                }
            }
            {
                let gb = &mut grads.tensors[base + b_idx];
                for r in 0..d {
                    gb[ty * d + r] += dn[r];
                }
            }
            matvec_t_acc(w, dn, &mut d_in[node * d..(node + 1) * d], d, d);
        }
    }

    d_in
}

/// Checks the tensor list against the config-implied layout; test hook.
#[cfg(test)]
pub(super) fn specs_match(params: &HgtParams) -> bool {
    let specs = super::params::tensor_specs(&params.config);
    specs.len() == params.tensors.len()
        && specs
            .iter()
            .zip(&params.tensors)
            .all(|((name, shape), t)| *name == t.name && *shape == t.shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgt::config::ModelConfig;
    use crate::hgt::params::init_params;
    use crate::rng::Rng;

    fn tiny_graph() -> ModelGraph {
        ModelGraph::new(
            vec![0, 1, 2, 14],
            vec![0, 0, 2, 3],
            vec![0, 0, 1, 2],
            0,
            vec![
                (0, 0, 1),
                (1, 1, 0),
                (1, 0, 2),
                (2, 1, 1),
                (2, 4, 3),
                (3, 5, 2),
                (0, 6, 0),
                (1, 6, 1),
                (2, 6, 2),
                (3, 6, 3),
            ],
        )
    }

    fn config() -> ModelConfig {
        ModelConfig {
            d: 8,
            heads: 2,
            layers: 1,
            vocab_size: 8,
            ..Default::default()
        }
    }

    #[test]
    fn confident_correct_prediction_has_near_zero_loss() {
        let graph = tiny_graph();
        let mut params = init_params(&config(), &mut Rng::new(1)).unwrap();
        let n = params.tensors.len();
        params.tensors[n - 1].data = vec![-20.0, 20.0];
        let loss = loss_only(&[(&graph, true)], &params);
        assert!(loss < 1e-12, "loss {loss}");
    }

    #[test]
    fn uniform_logits_cost_ln2() {
        let graph = tiny_graph();
        let mut params = init_params(&config(), &mut Rng::new(2)).unwrap();
        for t in params.tensors.iter_mut() {
            t.data.fill(0.0);
        }
        let loss = loss_only(&[(&graph, true), (&graph, false)], &params);
        assert!((loss - (2.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn empty_batch_is_an_error() {
        let params = init_params(&config(), &mut Rng::new(3)).unwrap();
        assert!(loss_and_grad(&[], &params).is_err());
    }

    #[test]
    fn grads_shapes_match_params() {
        let graph = tiny_graph();
        let params = init_params(&config(), &mut Rng::new(4)).unwrap();
        let (_, grads) = loss_and_grad(&[(&graph, true)], &params).unwrap();
        assert!(specs_match(&params));
        for (g, t) in grads.tensors.iter().zip(&params.tensors) {
            assert_eq!(g.len(), t.len());
        }
    }

    #[test]
    fn gradient_is_nonzero_where_it_should_be() {
        let graph = tiny_graph();
        let params = init_params(&config(), &mut Rng::new(5)).unwrap();
        let (_, grads) = loss_and_grad(&[(&graph, true)], &params).unwrap();
        let norm: f64 = grads.tensors.iter().flatten().map(|v| v * v).sum();
        assert!(norm > 0.0);
        // Token rows never used by the graph get zero gradient.
        let d = params.config.d;
        let unused_token = 7usize;
        assert!(!graph.token_id.contains(&(unused_token as u32)));
        let tok = &grads.tensors[EMBED_TOKEN];
        assert!(tok[unused_token * d..(unused_token + 1) * d]
            .iter()
            .all(|&v| v == 0.0));
    }
}
