//! Benchmark data: `U1 * exp(30 * U2)` for the first half, the mirrored
//! negation for the second, optionally shuffled.

use crate::error::CliError;

/// Lehmer "minstd" multiplier and modulus. Products stay below 2^47.
pub const MCG_MULTIPLIER: u64 = 48271;
pub const MCG_MODULUS: u64 = (1 << 31) - 1;

/// x <- a·x mod m, with x in [1, m-1].
#[derive(Clone, Debug)]
pub struct Mcg {
    state: u64,
}

impl Mcg {
    pub fn new(seed: u64) -> Self {
        Mcg {
            state: 1 + seed % (MCG_MODULUS - 1),
        }
    }

    pub fn next_raw(&mut self) -> u64 {
        self.state = self.state * MCG_MULTIPLIER % MCG_MODULUS;
        self.state
    }

    /// Uniform on the open interval (0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        self.next_raw() as f64 / MCG_MODULUS as f64
    }

    /// Index in `0..bound`, by scaling the raw state.
    pub fn next_index(&mut self, bound: usize) -> usize {
        ((self.next_raw() - 1) as u128 * bound as u128 / (MCG_MODULUS - 1) as u128) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub seed: u64,
    pub permute: bool,
}

impl GeneratorSpec {
    pub fn new(n: usize, seed: u64, permute: bool) -> Self {
        GeneratorSpec { n, seed, permute }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<f64>, CliError> {
    if !spec.n.is_multiple_of(2) {
        return Err(CliError::InvalidArgument(format!(
            "generator size must be even, got {}",
            spec.n
        )));
    }
    let mut rng = Mcg::new(spec.seed);
    let half = spec.n / 2;
    let mut values = Vec::with_capacity(spec.n);
    for _ in 0..half {
        let u1 = rng.next_uniform();
        let u2 = rng.next_uniform();
        // libm keeps exp bit-identical across platforms
        values.push(u1 * libm::exp(30.0 * u2));
    }
    for i in (0..half).rev() {
        values.push(-values[i]);
    }
    if spec.permute {
        for i in (1..values.len()).rev() {
            let j = rng.next_index(i + 1);
            values.swap(i, j);
        }
    }
    Ok(values)
}
