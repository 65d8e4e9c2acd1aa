//! Reproducible inverse-transform sampling.
//!
//! Each replicate owns a counter-based uniform stream keyed by
//! (seed, replicate index), so replicates can be generated in any order or
//! in parallel without changing a single bit of output.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::DensityModel;
use crate::error::{Error, Result};

/// Smallest uniform the stream can produce; draws of exactly 0 are remapped
/// here so that sampled x stay strictly positive.
const U_MIN: f64 = 1.0 / (1u64 << 53) as f64;

/// A sorted i.i.d. sample from a density model, with tie multiplicities
/// collapsed and full provenance for exact replay.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    /// Distinct observed values, strictly increasing, all in (0,1].
    values: Vec<f64>,
    /// Multiplicity of each distinct value.
    counts: Vec<u32>,
    /// Total number of draws (sum of counts).
    n: usize,
    seed: u64,
    replicate: u64,
    model_name: String,
}

impl SampleSet {
    /// Distinct sorted values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Multiplicities aligned with [`values`](Self::values).
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    /// The sample minimum; strictly positive by construction.
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// Build from raw values (for externally supplied data). Values are
    /// sorted and ties collapsed; everything must lie in (0, 1].
    pub fn from_values(mut raw: Vec<f64>, label: &str) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !(value > 0.0 && value <= 1.0) || value.is_nan() {
                return Err(Error::InvalidSample { index, value });
            }
        }
        raw.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let n = raw.len();
        let mut values = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for v in raw {
            match values.last() {
                Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
                _ => {
                    values.push(v);
                    counts.push(1);
                }
            }
        }
        Ok(Self { values, counts, n, seed: 0, replicate: 0, model_name: label.to_string() })
    }

    /// Write one raw value per line (multiplicities expanded), `#`-prefixed
    /// header, so a draw can be reproduced outside this crate.
    pub fn to_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# model={} n={} seed={} replicate={}",
            self.model_name, self.n, self.seed, self.replicate
        )?;
        for (v, &k) in self.values.iter().zip(&self.counts) {
            for _ in 0..k {
                writeln!(w, "{v}")?;
            }
        }
        Ok(())
    }
}

/// Draw `n` observations from `model` by inverse transform. Identical keys
/// give bit-identical output regardless of execution order or thread count.
pub fn draw(model: &DensityModel, n: usize, seed: u64, replicate: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    let mut raw = Vec::with_capacity(n);
    for _ in 0..n {
        let u = uniform_53(&mut rng);
        raw.push(model.quantile_raw(u));
    }
    raw.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut counts: Vec<u32> = Vec::with_capacity(n);
    for v in raw {
        match values.last() {
            Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
            _ => {
                values.push(v);
                counts.push(1);
            }
        }
    }
    Ok(SampleSet {
        values,
        counts,
        n,
        seed,
        replicate,
        model_name: model.to_string(),
    })
}

/// A 53-bit uniform in (0, 1); zero is bumped to the smallest representable
/// draw so the a.s. property X_min > 0 survives finite precision.
fn uniform_53(rng: &mut ChaCha8Rng) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * U_MIN;
    if u == 0.0 {
        U_MIN
    } else {
        u
    }
}
