use super::backward::{loss_and_grad, loss_only};
use super::graph_input::ModelGraph;
use super::params::HgtParams;
use super::ModelError;

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// Worst guarded relative error per tensor.
    pub per_tensor: Vec<(String, f64)>,
    pub max_rel_err: f64,
}

/// Compare analytic gradients against central finite differences for every
/// parameter scalar. The error metric is guarded relative error
/// `|a - n| / max(|a|, |n|, 1)`, which behaves like relative error for
/// unit-scale gradients and like absolute error below that, where division
/// would only amplify finite-difference noise.
pub fn grad_check(
    graph: &ModelGraph,
    label: bool,
    params: &HgtParams,
    eps: f64,
) -> Result<GradCheckReport, ModelError> {
    graph.validate(&params.config)?;
    let batch = [(graph, label)];
    let (_, analytic) = loss_and_grad(&batch, params)?;

    let mut work = params.clone();
    let mut per_tensor = Vec::with_capacity(params.tensors.len());
    let mut max_rel_err: f64 = 0.0;

    for t in 0..params.tensors.len() {
        let mut worst: f64 = 0.0;
        for i in 0..params.tensors[t].data.len() {
            let original = params.tensors[t].data[i];

            let plus = (original as f64 + eps) as f32;
            let minus = (original as f64 - eps) as f32;
            // The realized step differs from eps by f32 rounding; use the
            // exact step in the quotient.
            let span = plus as f64 - minus as f64;

            work.tensors[t].data[i] = plus;
            let loss_plus = loss_only(&batch, &work);
            work.tensors[t].data[i] = minus;
            let loss_minus = loss_only(&batch, &work);
            work.tensors[t].data[i] = original;

            let numeric = (loss_plus - loss_minus) / span;
            let a = analytic.tensors[t][i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1.0);
            worst = worst.max(rel);
        }
        per_tensor.push((params.tensors[t].name.clone(), worst));
        max_rel_err = max_rel_err.max(worst);
    }
    Ok(GradCheckReport {
        per_tensor,
        max_rel_err,
    })
}
