use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Affine map `y = W x + b`, with `W` stored row-major (`outputs × inputs`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

impl Dense {
    fn init(inputs: usize, outputs: usize, rng: &mut crate::rng::Rng) -> Self {
        let bound = (6.0 / (inputs + outputs) as f64).sqrt();
        let w = (0..inputs * outputs).map(|_| rng.random_range(-bound..bound)).collect();
        Dense { inputs, outputs, w, b: vec![0.0; outputs] }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let row = &self.w[o * self.inputs..(o + 1) * self.inputs];
                self.b[o] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
            })
            .collect()
    }

    /// Accumulates `δ xᵀ` into `grad` and returns `Wᵀ δ`.
    fn backward(&self, x: &[f64], delta: &[f64], grad: &mut Dense) -> Vec<f64> {
        let mut back = vec![0.0; self.inputs];
        for (o, &d) in delta.iter().enumerate() {
            grad.b[o] += d;
            let row = o * self.inputs;
            for i in 0..self.inputs {
                grad.w[row + i] += d * x[i];
                back[i] += d * self.w[row + i];
            }
        }
        back
    }

    fn zeros_like(&self) -> Self {
        Dense { inputs: self.inputs, outputs: self.outputs, w: vec![0.0; self.w.len()], b: vec![0.0; self.b.len()] }
    }

    fn valid(&self) -> bool {
        self.w.len() == self.inputs * self.outputs
            && self.b.len() == self.outputs
            && self.w.iter().chain(&self.b).all(|v| v.is_finite())
    }
}

/// Encoder `x → tanh → (μ, log σ²)`, decoder `z → tanh → x̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaeModel {
    pub input_dim: usize,
    pub latent_dim: usize,
    pub seed: u64,
    pub encoder: Dense,
    pub mu: Dense,
    pub logvar: Dense,
    pub decoder: Dense,
    pub output: Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub mu: Vec<f64>,
    pub logvar: Vec<f64>,
    pub z: Vec<f64>,
    pub recon: Vec<f64>,
    enc_hidden: Vec<f64>,
    dec_hidden: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossParts {
    pub total: f64,
    pub recon: f64,
    pub kl: f64,
}

fn tanh_all(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(f64::tanh).collect()
}

impl VaeModel {
    pub fn new(input_dim: usize, latent_dim: usize, hidden: usize, seed: u64) -> Result<Self> {
        Self::with_widths(input_dim, latent_dim, hidden, hidden, seed)
    }

    pub fn with_widths(input_dim: usize, latent_dim: usize, enc_hidden: usize, dec_hidden: usize, seed: u64) -> Result<Self> {
        if latent_dim == 0 || latent_dim >= input_dim {
            return Err(Error::invalid(format!(
                "latent dimension must satisfy 0 < m < d, got m={latent_dim}, d={input_dim}"
            )));
        }
        if enc_hidden == 0 || dec_hidden == 0 {
            return Err(Error::invalid("hidden widths must be positive"));
        }
        let mut rng = stream(seed, Stream::Vae);
        let encoder = Dense::init(input_dim, enc_hidden, &mut rng);
        let mu = Dense::init(enc_hidden, latent_dim, &mut rng);
        let mut logvar = Dense::init(enc_hidden, latent_dim, &mut rng);
        // start near unit variance
        logvar.w.iter_mut().for_each(|w| *w *= 0.1);
        let decoder = Dense::init(latent_dim, dec_hidden, &mut rng);
        let output = Dense::init(dec_hidden, input_dim, &mut rng);
        Ok(VaeModel { input_dim, latent_dim, seed, encoder, mu, logvar, decoder, output })
    }

    /// Checks shapes and finiteness; used after deserializing a checkpoint.
    pub fn validate(&self) -> Result<()> {
        let (d, m) = (self.input_dim, self.latent_dim);
        if m == 0 || m >= d {
            return Err(Error::invalid("latent dimension must satisfy 0 < m < d"));
        }
        let h = self.encoder.outputs;
        let g = self.decoder.outputs;
        let shapes = [
            (&self.encoder, d, h),
            (&self.mu, h, m),
            (&self.logvar, h, m),
            (&self.decoder, m, g),
            (&self.output, g, d),
        ];
        for (layer, i, o) in shapes {
            if layer.inputs != i || layer.outputs != o || !layer.valid() {
                return Err(Error::invalid("malformed or non-finite layer in model"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: VaeModel = serde_json::from_str(s)?;
        model.validate()?;
        Ok(model)
    }

    fn layers(&self) -> [&Dense; 5] {
        [&self.encoder, &self.mu, &self.logvar, &self.decoder, &self.output]
    }

    fn layers_mut(&mut self) -> [&mut Dense; 5] {
        [&mut self.encoder, &mut self.mu, &mut self.logvar, &mut self.decoder, &mut self.output]
    }

    /// All weights and biases, layer by layer.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers().iter().flat_map(|l| l.w.iter().chain(&l.b).copied()).collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        let n = self.parameter_count();
        if params.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: params.len() });
        }
        let mut it = params.iter();
        for layer in self.layers_mut() {
            for v in layer.w.iter_mut().chain(layer.b.iter_mut()) {
                *v = *it.next().unwrap();
            }
        }
        Ok(())
    }

    pub fn parameter_count(&self) -> usize {
        self.layers().iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite input"));
        }
        Ok(())
    }

    pub fn encode(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_point(x)?;
        let h = tanh_all(self.encoder.apply(x));
        Ok((self.mu.apply(&h), self.logvar.apply(&h)))
    }

    pub fn decode(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.latent_dim {
            return Err(Error::DimensionMismatch { expected: self.latent_dim, got: z.len() });
        }
        Ok(self.output.apply(&tanh_all(self.decoder.apply(z))))
    }

    /// Reparameterized pass: `z = μ + exp(logvar/2) ⊙ noise`.
    pub fn forward(&self, x: &[f64], noise: &[f64]) -> Result<Forward> {
        self.check_point(x)?;
        if noise.len() != self.latent_dim {
            return Err(Error::DimensionMismatch { expected: self.latent_dim, got: noise.len() });
        }
        let enc_hidden = tanh_all(self.encoder.apply(x));
        let mu = self.mu.apply(&enc_hidden);
        let logvar = self.logvar.apply(&enc_hidden);
        let z: Vec<f64> = (0..self.latent_dim).map(|j| mu[j] + (logvar[j] / 2.0).exp() * noise[j]).collect();
        let dec_hidden = tanh_all(self.decoder.apply(&z));
        let recon = self.output.apply(&dec_hidden);
        if recon.iter().chain(&z).chain(&logvar).any(|v| !v.is_finite()) {
            return Err(Error::domain("forward pass produced non-finite values"));
        }
        Ok(Forward { mu, logvar, z, recon, enc_hidden, dec_hidden })
    }

    /// Loss and its gradient with respect to [`parameters`](Self::parameters).
    pub fn loss_and_gradient(&self, batch: &[Vec<f64>], noise: &[Vec<f64>], beta: f64) -> Result<(LossParts, Vec<f64>)> {
        check_batch(batch, noise, beta)?;
        let n = batch.len() as f64;
        let d = self.input_dim as f64;
        let mut grad = [&self.encoder, &self.mu, &self.logvar, &self.decoder, &self.output].map(Dense::zeros_like);
        let mut recon = 0.0;
        let mut kl = 0.0;
        for (x, eps) in batch.iter().zip(noise) {
            let f = self.forward(x, eps)?;
            let diff: Vec<f64> = f.recon.iter().zip(x).map(|(r, v)| r - v).collect();
            recon += diff.iter().map(|e| e * e).sum::<f64>() / (n * d);
            kl += kl_term(&f.mu, &f.logvar) / n;

            let [g_enc, g_mu, g_lv, g_dec, g_out] = &mut grad;
            let delta: Vec<f64> = diff.iter().map(|e| 2.0 * e / (n * d)).collect();
            let back = self.output.backward(&f.dec_hidden, &delta, g_out);
            let delta: Vec<f64> = back.iter().zip(&f.dec_hidden).map(|(g, h)| g * (1.0 - h * h)).collect();
            let dz = self.decoder.backward(&f.z, &delta, g_dec);
            let k = beta / n;
            let mut d_mu = vec![0.0; self.latent_dim];
            let mut d_lv = vec![0.0; self.latent_dim];
            for j in 0..self.latent_dim {
                let sigma = (f.logvar[j] / 2.0).exp();
                d_mu[j] = dz[j] + k * f.mu[j];
                d_lv[j] = dz[j] * eps[j] * sigma / 2.0 + k * 0.5 * (f.logvar[j].exp() - 1.0);
            }
            let from_mu = self.mu.backward(&f.enc_hidden, &d_mu, g_mu);
            let from_lv = self.logvar.backward(&f.enc_hidden, &d_lv, g_lv);
            let delta: Vec<f64> = from_mu
                .iter()
                .zip(&from_lv)
                .zip(&f.enc_hidden)
                .map(|((a, b), h)| (a + b) * (1.0 - h * h))
                .collect();
            self.encoder.backward(x, &delta, g_enc);
        }
        let flat = grad.iter().flat_map(|l| l.w.iter().chain(&l.b).copied()).collect();
        Ok((LossParts { total: recon + beta * kl, recon, kl }, flat))
    }
}

fn kl_term(mu: &[f64], logvar: &[f64]) -> f64 {
    0.5 * mu.iter().zip(logvar).map(|(m, lv)| lv.exp() + m * m - 1.0 - lv).sum::<f64>()
}

fn check_batch(batch: &[Vec<f64>], noise: &[Vec<f64>], beta: f64) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::invalid("empty batch"));
    }
    if batch.len() != noise.len() {
        return Err(Error::DimensionMismatch { expected: batch.len(), got: noise.len() });
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::invalid("beta must be finite and non-negative"));
    }
    Ok(())
}

/// Single-sample ELBO pieces: reconstruction MSE (mean over samples and
/// coordinates) plus `β` times the batch-mean KL to the standard normal.
pub fn vae_loss(model: &VaeModel, batch: &[Vec<f64>], noise: &[Vec<f64>], beta: f64) -> Result<LossParts> {
    check_batch(batch, noise, beta)?;
    let n = batch.len() as f64;
    let mut recon = 0.0;
    let mut kl = 0.0;
    for (x, eps) in batch.iter().zip(noise) {
        let f = model.forward(x, eps)?;
        recon += f.recon.iter().zip(x).map(|(r, v)| (r - v).powi(2)).sum::<f64>() / (n * model.input_dim as f64);
        kl += kl_term(&f.mu, &f.logvar) / n;
    }
    Ok(LossParts { total: recon + beta * kl, recon, kl })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub beta: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { epochs: 200, lr: 0.05, beta: 1.0, batch_size: 16, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: VaeModel,
    /// Mean total loss per epoch.
    pub loss_history: Vec<f64>,
}

/// Minibatch SGD with one fresh noise draw per sample per step.
pub fn vae_train(model: &VaeModel, data: &[Vec<f64>], cfg: &TrainConfig) -> Result<TrainOutput> {
    if data.is_empty() {
        return Err(Error::invalid("empty dataset"));
    }
    if !(cfg.lr > 0.0) || !cfg.lr.is_finite() {
        return Err(Error::invalid("learning rate must be positive"));
    }
    if cfg.batch_size == 0 {
        return Err(Error::invalid("batch size must be positive"));
    }
    for x in data {
        model.check_point(x)?;
    }
    let mut model = model.clone();
    let mut order_rng = stream(cfg.seed, Stream::Vae);
    let mut noise_rng = stream(cfg.seed, Stream::VaeNoise);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut loss_history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut order_rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<Vec<f64>> = chunk.iter().map(|&i| data[i].clone()).collect();
            let noise: Vec<Vec<f64>> = chunk
                .iter()
                .map(|_| (0..model.latent_dim).map(|_| noise_rng.sample(StandardNormal)).collect())
                .collect();
            let (loss, grad) = match model.loss_and_gradient(&batch, &noise, cfg.beta) {
                Ok(v) => v,
                Err(Error::Domain(_)) => {
                    return Err(Error::Diverged { epoch, last_finite: loss_history.last().copied() })
                }
                Err(e) => return Err(e),
            };
            if !loss.total.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Diverged { epoch, last_finite: loss_history.last().copied() });
            }
            epoch_loss += loss.total * chunk.len() as f64;
            let mut g = grad.iter();
            for layer in model.layers_mut() {
                for v in layer.w.iter_mut().chain(layer.b.iter_mut()) {
                    *v -= cfg.lr * g.next().unwrap();
                }
            }
        }
        loss_history.push(epoch_loss / data.len() as f64);
    }
    Ok(TrainOutput { model, loss_history })
}

/// Decodes `steps` evenly spaced points on the segment `μ(a) → μ(b)`.
pub fn latent_interpolate(model: &VaeModel, a: &[f64], b: &[f64], steps: usize) -> Result<Vec<Vec<f64>>> {
    if steps < 2 {
        return Err(Error::invalid("need at least 2 steps"));
    }
    let (ma, _) = model.encode(a)?;
    let (mb, _) = model.encode(b)?;
    (0..steps)
        .map(|s| {
            let t = s as f64 / (steps - 1) as f64;
            let z: Vec<f64> = ma.iter().zip(&mb).map(|(p, q)| p + t * (q - p)).collect();
            model.decode(&z)
        })
        .collect()
}
