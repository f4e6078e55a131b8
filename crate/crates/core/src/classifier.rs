//! Plain feed-forward neural network trained with backpropagation.
//!
//! Sigmoid activation at every layer, squared error against one-hot targets,
//! and either classic per-sample stochastic updates or full-batch gradient
//! descent. Gradients are verifiable against centered finite differences via
//! [`gradient_check`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half-width of the uniform weight-initialization interval.
pub const DEFAULT_WEIGHT_SCALE: f64 = 0.5;

/// How gradient updates are applied during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum UpdateMode {
    /// Classic backprop: update after every sample, order reshuffled each
    /// epoch.
    #[default]
    Stochastic,
    /// One update per epoch from the mean gradient over all samples.
    FullBatch,
}

/// Architecture and training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub input_dim: usize,
    pub hidden_sizes: Vec<usize>,
    pub output_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub weight_init_scale: f64,
    pub update_mode: UpdateMode,
}

impl NetworkConfig {
    /// Baseline configuration for the given dimensions: a single hidden
    /// layer of width `max(2, 2 * input_dim + 1)`, learning rate 0.5, and
    /// per-sample updates.
    pub fn for_dims(input_dim: usize, output_dim: usize) -> Self {
        NetworkConfig {
            input_dim,
            hidden_sizes: vec![(2 * input_dim + 1).max(2)],
            output_dim,
            learning_rate: 0.5,
            epochs: 500,
            seed: 0,
            weight_init_scale: DEFAULT_WEIGHT_SCALE,
            update_mode: UpdateMode::Stochastic,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(Error::invalid(
                "network needs at least one input and one output".to_string(),
            ));
        }
        if self.hidden_sizes.iter().any(|&w| w == 0) {
            return Err(Error::invalid("hidden layers must be nonempty".to_string()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(self.weight_init_scale >= 0.0 && self.weight_init_scale.is_finite()) {
            return Err(Error::invalid(format!(
                "weight init scale must be non-negative and finite, got {}",
                self.weight_init_scale
            )));
        }
        Ok(())
    }
}

/// One dense layer: `weights[o][i]` connects input `i` to output `o`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl Layer {
    fn zeros_like(other: &Layer) -> Layer {
        Layer {
            weights: vec![vec![0.0; other.weights[0].len()]; other.weights.len()],
            biases: vec![0.0; other.biases.len()],
        }
    }
}

/// A stack of dense sigmoid layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkData")]
pub struct Network {
    layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct NetworkData {
    layers: Vec<Layer>,
}

impl TryFrom<NetworkData> for Network {
    type Error = Error;

    fn try_from(raw: NetworkData) -> Result<Self> {
        Network::new(raw.layers)
    }
}

impl Network {
    /// Validates that consecutive layer dimensions chain correctly.
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("network needs at least one layer".to_string()));
        }
        for (l, layer) in layers.iter().enumerate() {
            if layer.weights.is_empty() || layer.weights[0].is_empty() {
                return Err(Error::invalid(format!("layer {l} has no weights")));
            }
            let fan_in = layer.weights[0].len();
            if layer.weights.iter().any(|row| row.len() != fan_in) {
                return Err(Error::invalid(format!("layer {l} weight rows differ in length")));
            }
            if layer.biases.len() != layer.weights.len() {
                return Err(Error::invalid(format!(
                    "layer {l} has {} biases for {} outputs",
                    layer.biases.len(),
                    layer.weights.len()
                )));
            }
            if l > 0 && fan_in != layers[l - 1].weights.len() {
                return Err(Error::invalid(format!(
                    "layer {l} expects {fan_in} inputs but layer {} outputs {}",
                    l - 1,
                    layers[l - 1].weights.len()
                )));
            }
        }
        Ok(Network { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].weights[0].len()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("nonempty").weights.len()
    }

    /// Output activations for one input vector.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_all(input)?.pop().expect("at least the input layer"))
    }

    /// Activations of every layer, starting with the input itself.
    fn forward_all(&self, input: &[f64]) -> Result<Vec<Vec<f64>>> {
        if input.len() != self.input_dim() {
            return Err(Error::LengthMismatch {
                left: input.len(),
                right: self.input_dim(),
            });
        }
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.to_vec());
        for layer in &self.layers {
            let prev = activations.last().expect("pushed above");
            let next: Vec<f64> = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, &b)| {
                    let z = row.iter().zip(prev).map(|(w, a)| w * a).sum::<f64>() + b;
                    sigmoid(z)
                })
                .collect();
            activations.push(next);
        }
        Ok(activations)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Weights uniform in `[-scale, +scale)` from a seeded generator; biases
/// zero. `scale == 0` gives an all-zero network.
pub fn init_network(config: &NetworkConfig) -> Result<Network> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sizes = vec![config.input_dim];
    sizes.extend(&config.hidden_sizes);
    sizes.push(config.output_dim);

    let scale = config.weight_init_scale;
    let sample = move |rng: &mut ChaCha8Rng| {
        if scale > 0.0 {
            rng.random_range(-scale..scale)
        } else {
            0.0
        }
    };
    let layers = sizes
        .windows(2)
        .map(|pair| Layer {
            weights: (0..pair[1])
                .map(|_| (0..pair[0]).map(|_| sample(&mut rng)).collect())
                .collect(),
            biases: vec![0.0; pair[1]],
        })
        .collect();
    Network::new(layers)
}

/// Half the squared error between the network output and a one-hot target.
fn sample_loss(output: &[f64], target: &[f64]) -> f64 {
    0.5 * output
        .iter()
        .zip(target)
        .map(|(y, t)| (y - t) * (y - t))
        .sum::<f64>()
}

fn one_hot(label: usize, dim: usize) -> Vec<f64> {
    let mut t = vec![0.0; dim];
    t[label] = 1.0;
    t
}

/// Per-layer gradients of the sample loss, same shapes as the layers.
fn backprop(net: &Network, input: &[f64], target: &[f64]) -> Result<Vec<Layer>> {
    let activations = net.forward_all(input)?;
    let output = activations.last().expect("output layer");
    if target.len() != output.len() {
        return Err(Error::LengthMismatch {
            left: target.len(),
            right: output.len(),
        });
    }

    // Error signal at the output: dL/dz = (y - t) * y * (1 - y).
    let mut delta: Vec<f64> = output
        .iter()
        .zip(target)
        .map(|(y, t)| (y - t) * y * (1.0 - y))
        .collect();

    let mut grads: Vec<Layer> = net.layers.iter().map(Layer::zeros_like).collect();
    for l in (0..net.layers.len()).rev() {
        let prev = &activations[l];
        for (o, &d) in delta.iter().enumerate() {
            for (i, &a) in prev.iter().enumerate() {
                grads[l].weights[o][i] = d * a;
            }
            grads[l].biases[o] = d;
        }
        if l > 0 {
            // Propagate through this layer's weights and the previous
            // layer's sigmoid derivative.
            delta = (0..prev.len())
                .map(|i| {
                    let back: f64 = net.layers[l]
                        .weights
                        .iter()
                        .zip(&delta)
                        .map(|(row, d)| row[i] * d)
                        .sum();
                    back * prev[i] * (1.0 - prev[i])
                })
                .collect();
        }
    }
    Ok(grads)
}

fn apply_gradients(net: &mut Network, grads: &[Layer], learning_rate: f64, scale: f64) {
    for (layer, grad) in net.layers.iter_mut().zip(grads) {
        for (wrow, grow) in layer.weights.iter_mut().zip(&grad.weights) {
            for (w, g) in wrow.iter_mut().zip(grow) {
                *w -= learning_rate * scale * g;
            }
        }
        for (b, g) in layer.biases.iter_mut().zip(&grad.biases) {
            *b -= learning_rate * scale * g;
        }
    }
}

fn accumulate(total: &mut [Layer], grads: &[Layer]) {
    for (t, g) in total.iter_mut().zip(grads) {
        for (trow, grow) in t.weights.iter_mut().zip(&g.weights) {
            for (tw, gw) in trow.iter_mut().zip(grow) {
                *tw += gw;
            }
        }
        for (tb, gb) in t.biases.iter_mut().zip(&g.biases) {
            *tb += gb;
        }
    }
}

/// Per-epoch mean loss and the accuracy on the training data after the last
/// epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub epoch_loss: Vec<f64>,
    pub final_train_accuracy: f64,
}

/// Trains the network in place on integer class labels.
///
/// Labels are one-hot encoded against the network's output width. Each epoch
/// either applies per-sample updates in a freshly shuffled order
/// ([`UpdateMode::Stochastic`]) or one mean-gradient update
/// ([`UpdateMode::FullBatch`]); the recorded epoch loss is measured after
/// the epoch's updates. Zero epochs leave the network untouched.
pub fn train(
    net: &mut Network,
    inputs: &[Vec<f64>],
    labels: &[usize],
    config: &NetworkConfig,
) -> Result<TrainReport> {
    config.validate()?;
    if inputs.is_empty() {
        return Err(Error::NoRows);
    }
    if inputs.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: inputs.len(),
            right: labels.len(),
        });
    }
    if config.input_dim != net.input_dim() || config.output_dim != net.output_dim() {
        return Err(Error::invalid(format!(
            "config is {}->{} but network is {}->{}",
            config.input_dim,
            config.output_dim,
            net.input_dim(),
            net.output_dim()
        )));
    }
    let out_dim = net.output_dim();
    for (i, &label) in labels.iter().enumerate() {
        if label >= out_dim {
            return Err(Error::invalid(format!(
                "label {label} of sample {i} exceeds the {out_dim} network outputs"
            )));
        }
    }
    let targets: Vec<Vec<f64>> = labels.iter().map(|&l| one_hot(l, out_dim)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut epoch_loss = Vec::with_capacity(config.epochs);

    for _ in 0..config.epochs {
        match config.update_mode {
            UpdateMode::Stochastic => {
                order.shuffle(&mut rng);
                for &i in &order {
                    let grads = backprop(net, &inputs[i], &targets[i])?;
                    apply_gradients(net, &grads, config.learning_rate, 1.0);
                }
            }
            UpdateMode::FullBatch => {
                let mut total: Vec<Layer> =
                    net.layers.iter().map(Layer::zeros_like).collect();
                for (input, target) in inputs.iter().zip(&targets) {
                    let grads = backprop(net, input, target)?;
                    accumulate(&mut total, &grads);
                }
                let mean_scale = 1.0 / inputs.len() as f64;
                apply_gradients(net, &total, config.learning_rate, mean_scale);
            }
        }
        let mean_loss = inputs
            .iter()
            .zip(&targets)
            .map(|(input, target)| {
                sample_loss(&net.forward(input).expect("dims already checked"), target)
            })
            .sum::<f64>()
            / inputs.len() as f64;
        epoch_loss.push(mean_loss);
    }

    let correct = inputs
        .iter()
        .zip(labels)
        .filter(|(input, &label)| predict(net, input).expect("dims checked") == label)
        .count();
    Ok(TrainReport {
        epoch_loss,
        final_train_accuracy: correct as f64 / inputs.len() as f64,
    })
}

/// Class with the largest output activation; ties go to the lower index.
pub fn predict(net: &Network, input: &[f64]) -> Result<usize> {
    let output = net.forward(input)?;
    let mut best = 0;
    for (j, &y) in output.iter().enumerate().skip(1) {
        if y > output[best] {
            best = j;
        }
    }
    Ok(best)
}

/// Predictions for every row of `data`.
pub fn predict_batch(net: &Network, data: &[Vec<f64>]) -> Result<Vec<usize>> {
    data.iter().map(|row| predict(net, row)).collect()
}

/// Compares every analytic gradient with a centered finite difference and
/// returns the worst relative discrepancy.
///
/// The relative error of one parameter is `|a - n| / max(|a| + |n|, 1e-8)`;
/// the floor keeps near-zero gradient pairs from inflating the ratio.
pub fn gradient_check(net: &Network, input: &[f64], target: &[f64], epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let analytic = backprop(net, input, target)?;
    let mut probe = net.clone();
    let mut worst = 0.0f64;

    let n_layers = net.layers.len();
    for l in 0..n_layers {
        let rows = net.layers[l].weights.len();
        let cols = net.layers[l].weights[0].len();
        for o in 0..rows {
            for i in 0..=cols {
                // i == cols probes the bias of output o.
                let (original, a) = if i < cols {
                    (net.layers[l].weights[o][i], analytic[l].weights[o][i])
                } else {
                    (net.layers[l].biases[o], analytic[l].biases[o])
                };
                let loss_at = |v: f64, probe: &mut Network| -> f64 {
                    if i < cols {
                        probe.layers[l].weights[o][i] = v;
                    } else {
                        probe.layers[l].biases[o] = v;
                    }
                    let out = probe.forward(input).expect("dims already checked");
                    sample_loss(&out, target)
                };
                let plus = loss_at(original + epsilon, &mut probe);
                let minus = loss_at(original - epsilon, &mut probe);
                loss_at(original, &mut probe); // restore
                let numeric = (plus - minus) / (2.0 * epsilon);
                let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
                worst = worst.max(rel);
            }
        }
    }
    Ok(worst)
}

/// Seeded per-class split of sample indices into train and test sets.
///
/// Each class is shuffled and split separately so both sides keep the class
/// mix. Classes with at least two samples contribute at least one sample to
/// each side; singletons go to the training side. Returned index lists are
/// sorted ascending.
pub fn stratified_split(
    labels: &[usize],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if labels.is_empty() {
        return Err(Error::NoRows);
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must be strictly between 0 and 1, got {train_fraction}"
        )));
    }
    let mut by_class: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, &label) in labels.iter().enumerate() {
        by_class.entry(label).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (_, mut members) in by_class {
        members.shuffle(&mut rng);
        let n = members.len();
        let take = if n == 1 {
            1
        } else {
            let rounded = (train_fraction * n as f64).round() as usize;
            rounded.clamp(1, n - 1)
        };
        train.extend_from_slice(&members[..take]);
        test.extend_from_slice(&members[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_net(input: usize, hidden: Vec<usize>, output: usize) -> Network {
        let config = NetworkConfig {
            weight_init_scale: 0.0,
            ..NetworkConfig::for_dims(input, output)
        };
        let config = NetworkConfig {
            hidden_sizes: hidden,
            ..config
        };
        init_network(&config).unwrap()
    }

    #[test]
    fn all_zero_network_outputs_one_half() {
        let net = zero_net(3, vec![4], 2);
        let out = net.forward(&[0.2, -1.0, 7.0]).unwrap();
        assert_eq!(out, vec![0.5, 0.5]);
        assert_eq!(predict(&net, &[0.2, -1.0, 7.0]).unwrap(), 0);
    }

    #[test]
    fn large_bias_saturates_a_single_unit() {
        let net = Network::new(vec![Layer {
            weights: vec![vec![0.0]],
            biases: vec![10.0],
        }])
        .unwrap();
        let out = net.forward(&[123.0]).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-4, "got {}", out[0]);
    }

    #[test]
    fn forward_matches_scalar_hand_computation() {
        let net = Network::new(vec![
            Layer {
                weights: vec![vec![0.1, -0.2], vec![0.3, 0.4]],
                biases: vec![0.05, -0.05],
            },
            Layer {
                weights: vec![vec![0.7, -0.6]],
                biases: vec![0.1],
            },
        ])
        .unwrap();
        let x = [0.5, -1.0];
        let got = net.forward(&x).unwrap();

        // Same arithmetic written out scalar by scalar.
        let s = |z: f64| 1.0 / (1.0 + (-z).exp());
        let h0 = s(0.1 * 0.5 + (-0.2) * (-1.0) + 0.05); // z = 0.3
        let h1 = s(0.3 * 0.5 + 0.4 * (-1.0) + (-0.05)); // z = -0.3
        let expected = s(0.7 * h0 + (-0.6) * h1 + 0.1);
        assert!((got[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn forward_rejects_wrong_input_width() {
        let net = zero_net(3, vec![], 1);
        assert!(net.forward(&[1.0]).is_err());
    }

    #[test]
    fn network_construction_validates_layer_chain() {
        let bad = Network::new(vec![
            Layer {
                weights: vec![vec![0.0, 0.0]],
                biases: vec![0.0],
            },
            Layer {
                weights: vec![vec![0.0, 0.0, 0.0]],
                biases: vec![0.0],
            },
        ]);
        assert!(bad.is_err());
        let bad = Network::new(vec![Layer {
            weights: vec![vec![0.0]],
            biases: vec![0.0, 0.0],
        }]);
        assert!(bad.is_err());
    }

    fn xor_data() -> (Vec<Vec<f64>>, Vec<usize>) {
        (
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
        )
    }

    #[test]
    fn xor_reaches_perfect_training_accuracy() {
        let config = NetworkConfig {
            input_dim: 2,
            hidden_sizes: vec![4],
            output_dim: 2,
            learning_rate: 0.5,
            epochs: 5000,
            seed: 1,
            weight_init_scale: DEFAULT_WEIGHT_SCALE,
            update_mode: UpdateMode::Stochastic,
        };
        let mut net = init_network(&config).unwrap();
        let (inputs, labels) = xor_data();
        let report = train(&mut net, &inputs, &labels, &config).unwrap();
        assert_eq!(report.final_train_accuracy, 1.0);
        assert_eq!(report.epoch_loss.len(), 5000);
    }

    #[test]
    fn separable_blobs_are_learned_quickly() {
        let inputs: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                let offset = (i % 5) as f64 * 0.02;
                if i < 5 {
                    vec![0.1 + offset, 0.1 - offset]
                } else {
                    vec![0.9 - offset, 0.9 + offset]
                }
            })
            .collect();
        let labels: Vec<usize> = (0..10).map(|i| usize::from(i >= 5)).collect();
        let config = NetworkConfig {
            epochs: 500,
            seed: 3,
            ..NetworkConfig::for_dims(2, 2)
        };
        let mut net = init_network(&config).unwrap();
        let report = train(&mut net, &inputs, &labels, &config).unwrap();
        assert_eq!(report.final_train_accuracy, 1.0);
    }

    #[test]
    fn full_batch_small_rate_loss_never_increases() {
        let (inputs, labels) = xor_data();
        let config = NetworkConfig {
            input_dim: 2,
            hidden_sizes: vec![3],
            output_dim: 2,
            learning_rate: 1e-3,
            epochs: 50,
            seed: 7,
            weight_init_scale: 0.5,
            update_mode: UpdateMode::FullBatch,
        };
        let mut net = init_network(&config).unwrap();
        let report = train(&mut net, &inputs, &labels, &config).unwrap();
        assert_eq!(report.epoch_loss.len(), 50);
        for pair in report.epoch_loss.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "loss rose from {} to {}",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn zero_epochs_leave_the_network_unchanged() {
        let config = NetworkConfig {
            epochs: 0,
            ..NetworkConfig::for_dims(2, 2)
        };
        let mut net = init_network(&config).unwrap();
        let before = net.clone();
        let (inputs, labels) = xor_data();
        let report = train(&mut net, &inputs, &labels, &config).unwrap();
        assert_eq!(net, before);
        assert!(report.epoch_loss.is_empty());
    }

    #[test]
    fn train_validates_labels_and_data() {
        let config = NetworkConfig::for_dims(2, 2);
        let mut net = init_network(&config).unwrap();
        let err = train(&mut net, &[], &[], &config).unwrap_err();
        assert!(matches!(err, Error::NoRows));
        let err = train(&mut net, &[vec![0.0, 0.0]], &[5], &config).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let err = train(&mut net, &[vec![0.0, 0.0]], &[0, 1], &config).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn prediction_ties_break_toward_lower_class() {
        let net = zero_net(2, vec![], 3);
        assert_eq!(predict(&net, &[1.0, -1.0]).unwrap(), 0);
    }

    #[test]
    fn argmax_is_invariant_to_shared_output_bias_shifts() {
        let config = NetworkConfig {
            seed: 11,
            ..NetworkConfig::for_dims(3, 4)
        };
        let net = init_network(&config).unwrap();
        let mut shifted = net.clone();
        let last = shifted.layers.len() - 1;
        for b in shifted.layers[last].biases.iter_mut() {
            *b += 0.9; // same monotone shift on every output's pre-activation
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            assert_eq!(
                predict(&net, &x).unwrap(),
                predict(&shifted, &x).unwrap()
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences_on_random_networks() {
        for seed in 0..20 {
            let config = NetworkConfig {
                seed,
                ..NetworkConfig::for_dims(3, 2)
            };
            let net = init_network(&config).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
            let t = one_hot((seed % 2) as usize, 2);
            let worst = gradient_check(&net, &x, &t, 1e-5).unwrap();
            assert!(worst < 1e-4, "seed {seed}: worst relative error {worst}");
        }
    }

    #[test]
    fn gradient_check_handles_zero_gradient_points() {
        // All-zero network outputs exactly 0.5 everywhere; a 0.5 target
        // makes every gradient zero on both sides of the comparison.
        let net = zero_net(2, vec![2], 2);
        let worst = gradient_check(&net, &[0.3, 0.7], &[0.5, 0.5], 1e-5).unwrap();
        assert!(worst < 1e-6, "worst relative error {worst}");
    }

    #[test]
    fn near_linear_region_gradients_are_extra_tight() {
        let config = NetworkConfig {
            seed: 2,
            weight_init_scale: 0.01,
            ..NetworkConfig::for_dims(2, 2)
        };
        let net = init_network(&config).unwrap();
        let worst = gradient_check(&net, &[0.4, 0.6], &[1.0, 0.0], 1e-5).unwrap();
        assert!(worst < 1e-6, "worst relative error {worst}");
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let (inputs, labels) = xor_data();
        let config = NetworkConfig {
            epochs: 200,
            seed: 42,
            ..NetworkConfig::for_dims(2, 2)
        };
        let run = || {
            let mut net = init_network(&config).unwrap();
            let report = train(&mut net, &inputs, &labels, &config).unwrap();
            (net, report)
        };
        let (net_a, report_a) = run();
        let (net_b, report_b) = run();
        assert_eq!(net_a, net_b);
        let bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&report_a.epoch_loss), bits(&report_b.epoch_loss));
    }

    #[test]
    fn network_round_trips_through_json() {
        let net = init_network(&NetworkConfig::for_dims(2, 3)).unwrap();
        let json = serde_json::to_string(&net).unwrap();
        let back: Network = serde_json::from_str(&json).unwrap();
        assert_eq!(back, net);

        // Mismatched layer chain is rejected on the way back in.
        let bad = r#"{"layers":[
            {"weights":[[0.0,0.0]],"biases":[0.0]},
            {"weights":[[0.0,0.0,0.0]],"biases":[0.0]}
        ]}"#;
        assert!(serde_json::from_str::<Network>(bad).is_err());
    }

    #[test]
    fn stratified_split_keeps_class_mix() {
        let labels = [0, 0, 0, 0, 1, 1, 1];
        let (train, test) = stratified_split(&labels, 0.7, 9).unwrap();
        assert_eq!(train.len(), 5); // 3 of 4 zeros, 2 of 3 ones
        assert_eq!(test.len(), 2);
        let count = |ids: &[usize], class: usize| {
            ids.iter().filter(|&&i| labels[i] == class).count()
        };
        assert_eq!(count(&train, 0), 3);
        assert_eq!(count(&train, 1), 2);
        assert_eq!(count(&test, 0), 1);
        assert_eq!(count(&test, 1), 1);

        let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
    }

    #[test]
    fn stratified_split_sends_singleton_classes_to_training() {
        let labels = [0, 0, 1];
        let (train, test) = stratified_split(&labels, 0.5, 0).unwrap();
        assert!(train.contains(&2));
        assert!(!test.contains(&2));
        // Two-member class still lands on both sides.
        assert_eq!(train.len(), 2);
        assert_eq!(test.len(), 1);
    }

    #[test]
    fn stratified_split_validates_inputs() {
        assert!(stratified_split(&[], 0.7, 0).is_err());
        assert!(stratified_split(&[0, 1], 0.0, 0).is_err());
        assert!(stratified_split(&[0, 1], 1.0, 0).is_err());
    }

    #[test]
    fn stratified_split_is_deterministic() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        assert_eq!(
            stratified_split(&labels, 0.7, 4).unwrap(),
            stratified_split(&labels, 0.7, 4).unwrap()
        );
        assert_ne!(
            stratified_split(&labels, 0.7, 4).unwrap(),
            stratified_split(&labels, 0.7, 5).unwrap()
        );
    }
}
