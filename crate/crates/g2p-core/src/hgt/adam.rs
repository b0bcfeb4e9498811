use super::backward::Grads;
use super::params::HgtParams;

/// Adam with bias correction. Moments are kept in f64; parameters are
/// updated in f64 and stored back as f32.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(lr: f64, params: &HgtParams) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: params.tensors.iter().map(|t| vec![0.0; t.len()]).collect(),
            v: params.tensors.iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    pub fn step(&mut self, params: &mut HgtParams, grads: &Grads) {
        self.step += 1;
        let correction1 = 1.0 - self.beta1.powi(self.step as i32);
        let correction2 = 1.0 - self.beta2.powi(self.step as i32);
        for ((tensor, g), (m, v)) in params
            .tensors
            .iter_mut()
            .zip(&grads.tensors)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            for i in 0..tensor.data.len() {
                let grad = g[i];
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * grad;
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * grad * grad;
                let m_hat = m[i] / correction1;
                let v_hat = v[i] / correction2;
                let updated = tensor.data[i] as f64 - self.lr * m_hat / (v_hat.sqrt() + self.eps);
                tensor.data[i] = updated as f32;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgt::config::ModelConfig;
    use crate::hgt::params::init_params;
    use crate::rng::Rng;

    #[test]
    fn zero_lr_leaves_parameters_unchanged() {
        let config = ModelConfig {
            d: 8,
            heads: 2,
            layers: 1,
            ..Default::default()
        };
        let mut params = init_params(&config, &mut Rng::new(1)).unwrap();
        let before = params.clone();
        let mut grads = Grads::zeros_like(&params);
        for t in &mut grads.tensors {
            for (i, v) in t.iter_mut().enumerate() {
                *v = (i as f64 + 1.0) * 0.01;
            }
        }
        let mut adam = Adam::new(0.0, &params);
        for _ in 0..5 {
            adam.step(&mut params, &grads);
        }
        assert_eq!(params, before);
    }

    #[test]
    fn first_step_moves_parameters_by_about_lr() {
        let config = ModelConfig {
            d: 8,
            heads: 2,
            layers: 1,
            ..Default::default()
        };
        let mut params = init_params(&config, &mut Rng::new(2)).unwrap();
        let before = params.tensors[0].data[0];
        let mut grads = Grads::zeros_like(&params);
        grads.tensors[0][0] = 0.5;
        let mut adam = Adam::new(1e-3, &params);
        adam.step(&mut params, &grads);
        let delta = (params.tensors[0].data[0] - before).abs();
        // With bias correction, the first step is close to lr for any
        // nonzero gradient.
        assert!((delta - 1e-3).abs() < 1e-5, "delta {delta}");
    }
}
