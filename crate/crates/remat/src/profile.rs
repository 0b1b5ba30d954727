//! Layer profiles: per-layer activation sizes plus a fixed base overhead.
//!
//! Index 0 is the network input, indices 1..=n are layer outputs in forward
//! order. Everything downstream (cost models, solvers, simulator) works on
//! the derived byte sizes; shapes only record where a size came from.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ProfileError;

/// Cap on summed activation bytes plus base overhead. Costs computed later
/// stay below ~3x this total, so plain u64 arithmetic never overflows.
pub const MAX_TOTAL_BYTES: u128 = 1 << 62;

/// One chain entry: a named output tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerSpec {
    pub name: String,
    pub output_shape: Vec<u64>,
    pub bytes_per_element: u64,
}

impl LayerSpec {
    pub fn new(name: impl Into<String>, output_shape: Vec<u64>, bytes_per_element: u64) -> Self {
        LayerSpec {
            name: name.into(),
            output_shape,
            bytes_per_element,
        }
    }

    /// Entry known only by its total byte size.
    pub fn from_size(name: impl Into<String>, size_bytes: u64) -> Self {
        LayerSpec {
            name: name.into(),
            output_shape: vec![size_bytes],
            bytes_per_element: 1,
        }
    }

    fn checked_size(&self) -> Option<u128> {
        self.output_shape
            .iter()
            .try_fold(self.bytes_per_element as u128, |acc, &d| {
                acc.checked_mul(d as u128)
            })
    }
}

/// A validated chain of layer activation sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerProfile {
    layers: Vec<LayerSpec>,
    sizes: Vec<u64>,
    base_overhead: u64,
}

impl LayerProfile {
    /// Validate and derive sizes. Rejects chains shorter than 2 entries,
    /// zero-sized activations, and totals over [`MAX_TOTAL_BYTES`].
    pub fn new(layers: Vec<LayerSpec>, base_overhead: u64) -> Result<Self, ProfileError> {
        if layers.len() < 2 {
            return Err(ProfileError::TooShort(layers.len()));
        }
        let mut sizes = Vec::with_capacity(layers.len());
        let mut total = base_overhead as u128;
        for layer in &layers {
            if layer.output_shape.is_empty() {
                return Err(ProfileError::EmptyShape {
                    name: layer.name.clone(),
                });
            }
            if layer.output_shape.contains(&0) {
                return Err(ProfileError::ZeroDimension {
                    name: layer.name.clone(),
                });
            }
            if layer.bytes_per_element == 0 {
                return Err(ProfileError::ZeroSize {
                    name: layer.name.clone(),
                });
            }
            let size = layer
                .checked_size()
                .filter(|&s| s <= MAX_TOTAL_BYTES)
                .ok_or(ProfileError::TooLarge { total: u128::MAX })?;
            total += size;
            if total > MAX_TOTAL_BYTES {
                return Err(ProfileError::TooLarge { total });
            }
            sizes.push(size as u64);
        }
        Ok(LayerProfile {
            layers,
            sizes,
            base_overhead,
        })
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    /// Activation sizes in bytes, input first.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn base_overhead(&self) -> u64 {
        self.base_overhead
    }

    /// Index of the last layer (`n`).
    pub fn last_index(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same chain with a different base overhead (revalidates the total).
    pub fn with_base_overhead(&self, base_overhead: u64) -> Result<Self, ProfileError> {
        LayerProfile::new(self.layers.clone(), base_overhead)
    }

    /// Every activation size multiplied by `factor` (base overhead too).
    pub fn scaled(&self, factor: u64) -> Result<Self, ProfileError> {
        if factor == 0 {
            return Err(ProfileError::BadParameter("scale factor must be nonzero"));
        }
        let layers = self
            .layers
            .iter()
            .zip(&self.sizes)
            .map(|(l, &s)| {
                let scaled = (s as u128) * (factor as u128);
                if scaled <= MAX_TOTAL_BYTES {
                    Ok(LayerSpec::from_size(l.name.clone(), scaled as u64))
                } else {
                    Err(ProfileError::TooLarge { total: scaled })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let base = (self.base_overhead as u128) * (factor as u128);
        if base > MAX_TOTAL_BYTES {
            return Err(ProfileError::TooLarge { total: base });
        }
        LayerProfile::new(layers, base as u64)
    }

    /// Parse the JSON profile document.
    ///
    /// Top level: optional `base_overhead_bytes` (default 0) and a `layers`
    /// array. Each entry carries a `name` plus either `size_bytes` or
    /// `shape` with `bytes_per_element`.
    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let doc: ProfileDoc = serde_json::from_str(text)?;
        let layers = doc
            .layers
            .into_iter()
            .map(|entry| {
                let LayerDoc {
                    name,
                    size_bytes,
                    shape,
                    bytes_per_element,
                } = entry;
                match (size_bytes, shape, bytes_per_element) {
                    (Some(size), None, None) => {
                        if size == 0 {
                            Err(ProfileError::ZeroSize { name })
                        } else {
                            Ok(LayerSpec::from_size(name, size))
                        }
                    }
                    (None, Some(shape), Some(bpe)) => Ok(LayerSpec::new(name, shape, bpe)),
                    (None, Some(_), None) | (None, None, Some(_)) | (None, None, None) => {
                        Err(ProfileError::MissingSize { name })
                    }
                    (Some(_), _, _) => Err(ProfileError::ConflictingSize { name }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        LayerProfile::new(layers, doc.base_overhead_bytes)
    }

    /// Emit the JSON profile document. The writer always flattens entries to
    /// `size_bytes`, so `from_json(to_json(p))` reproduces the sizes exactly.
    pub fn to_json(&self) -> String {
        let doc = ProfileDoc {
            base_overhead_bytes: self.base_overhead,
            layers: self
                .layers
                .iter()
                .zip(&self.sizes)
                .map(|(l, &s)| LayerDoc {
                    name: l.name.clone(),
                    size_bytes: Some(s),
                    shape: None,
                    bytes_per_element: None,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("profile document serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    #[serde(default)]
    base_overhead_bytes: u64,
    layers: Vec<LayerDoc>,
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size_bytes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bytes_per_element: Option<u64>,
}

/// Built-in architectures for quick experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinModel {
    Vgg19,
    AlexNetPlain,
    AlexNetFine,
}

impl BuiltinModel {
    pub const ALL: [BuiltinModel; 3] = [
        BuiltinModel::Vgg19,
        BuiltinModel::AlexNetPlain,
        BuiltinModel::AlexNetFine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinModel::Vgg19 => "vgg19",
            BuiltinModel::AlexNetPlain => "alexnet_plain",
            BuiltinModel::AlexNetFine => "alexnet_fine",
        }
    }

    fn table(self) -> &'static [(&'static str, &'static [u64])] {
        match self {
            BuiltinModel::Vgg19 => VGG19,
            BuiltinModel::AlexNetPlain => ALEXNET_PLAIN,
            BuiltinModel::AlexNetFine => ALEXNET_FINE,
        }
    }
}

impl fmt::Display for BuiltinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for BuiltinModel {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(ProfileError::BadParameter(
                "unknown model (expected vgg19, alexnet_plain, or alexnet_fine)",
            ))
    }
}

// Per-sample output shapes (channels, spatial dims). The batch dimension is
// prepended when the profile is built.
const VGG19: &[(&str, &[u64])] = &[
    ("input", &[3, 224, 224]),
    ("conv1_1", &[64, 224, 224]),
    ("conv1_2", &[64, 224, 224]),
    ("pool1", &[64, 112, 112]),
    ("conv2_1", &[128, 112, 112]),
    ("conv2_2", &[128, 112, 112]),
    ("pool2", &[128, 56, 56]),
    ("conv3_1", &[256, 56, 56]),
    ("conv3_2", &[256, 56, 56]),
    ("conv3_3", &[256, 56, 56]),
    ("conv3_4", &[256, 56, 56]),
    ("pool3", &[256, 28, 28]),
    ("conv4_1", &[512, 28, 28]),
    ("conv4_2", &[512, 28, 28]),
    ("conv4_3", &[512, 28, 28]),
    ("conv4_4", &[512, 28, 28]),
    ("pool4", &[512, 14, 14]),
    ("conv5_1", &[512, 14, 14]),
    ("conv5_2", &[512, 14, 14]),
    ("conv5_3", &[512, 14, 14]),
    ("conv5_4", &[512, 14, 14]),
    ("pool5", &[512, 7, 7]),
    ("fc6", &[4096]),
    ("fc7", &[4096]),
    ("fc8", &[1000]),
];

// Coarse AlexNet: each max-pool runs inside the stage that consumes it, so
// the visible boundaries are the conv outputs and the cheap post-pool
// tensors are not selectable.
const ALEXNET_PLAIN: &[(&str, &[u64])] = &[
    ("input", &[3, 224, 224]),
    ("conv1", &[64, 56, 56]),
    ("conv2", &[192, 28, 28]),
    ("conv3", &[384, 14, 14]),
    ("conv4", &[256, 14, 14]),
    ("conv5", &[256, 14, 14]),
    ("avgpool", &[256, 6, 6]),
    ("flatten", &[9216]),
    ("dropout1", &[9216]),
    ("fc1", &[4096]),
    ("dropout2", &[4096]),
    ("fc2", &[4096]),
    ("fc3", &[1000]),
];

// Fine AlexNet: pools split out as their own stages, so their outputs are
// checkpoint candidates too.
const ALEXNET_FINE: &[(&str, &[u64])] = &[
    ("input", &[3, 224, 224]),
    ("conv1", &[64, 56, 56]),
    ("pool1", &[64, 28, 28]),
    ("conv2", &[192, 28, 28]),
    ("pool2", &[192, 14, 14]),
    ("conv3", &[384, 14, 14]),
    ("conv4", &[256, 14, 14]),
    ("conv5", &[256, 14, 14]),
    ("pool3", &[256, 7, 7]),
    ("avgpool", &[256, 6, 6]),
    ("flatten", &[9216]),
    ("dropout1", &[9216]),
    ("fc1", &[4096]),
    ("dropout2", &[4096]),
    ("fc2", &[4096]),
    ("fc3", &[1000]),
];

/// Build one of the built-in profiles at the given batch size and element
/// width. Base overhead starts at 0.
pub fn generate_builtin(
    model: BuiltinModel,
    batch: u64,
    bytes_per_element: u64,
) -> Result<LayerProfile, ProfileError> {
    if batch == 0 {
        return Err(ProfileError::BadParameter("batch must be nonzero"));
    }
    if bytes_per_element == 0 {
        return Err(ProfileError::BadParameter(
            "bytes_per_element must be nonzero",
        ));
    }
    let layers = model
        .table()
        .iter()
        .map(|&(name, dims)| {
            let mut shape = Vec::with_capacity(dims.len() + 1);
            shape.push(batch);
            shape.extend_from_slice(dims);
            LayerSpec::new(name, shape, bytes_per_element)
        })
        .collect();
    LayerProfile::new(layers, 0)
}

/// Random chain for fuzzing and benchmarks: `layers` entries after the
/// input, sizes uniform in [1, max_size]. Deterministic in `seed`.
pub fn generate_random(
    layers: usize,
    max_size: u64,
    seed: u64,
) -> Result<LayerProfile, ProfileError> {
    if layers == 0 {
        return Err(ProfileError::TooShort(1));
    }
    if max_size == 0 {
        return Err(ProfileError::BadParameter("max_size must be nonzero"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::with_capacity(layers + 1);
    specs.push(LayerSpec::from_size("input", rng.gen_range(1..=max_size)));
    for i in 1..=layers {
        specs.push(LayerSpec::from_size(
            format!("layer{i}"),
            rng.gen_range(1..=max_size),
        ));
    }
    LayerProfile::new(specs, 0)
}
