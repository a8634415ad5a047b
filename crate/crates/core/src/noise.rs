//! Periodic one-dimensional gradient (Perlin) noise over the angle.

use std::f64::consts::TAU;

use rand::Rng;

/// Gradient noise with `frequency` lattice cells over one revolution.
///
/// The lattice wraps around, so `value(θ)` and `value(θ + 2π)` coincide and
/// there is no seam at θ = 0. A random phase shifts the lattice so that the
/// zeros at lattice points do not line up with polygon vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicNoise {
    gradients: Vec<f64>,
    phase: f64,
}

impl PeriodicNoise {
    /// Draws `frequency` gradients uniformly from [-1, 1] and a phase from [0, 1).
    pub fn sample<R: Rng + ?Sized>(frequency: u32, rng: &mut R) -> Self {
        assert!(frequency >= 1, "noise frequency must be positive");
        let gradients = (0..frequency).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let phase = rng.gen::<f64>();
        Self { gradients, phase }
    }

    pub fn from_parts(gradients: Vec<f64>, phase: f64) -> Self {
        assert!(!gradients.is_empty());
        Self { gradients, phase }
    }

    pub fn frequency(&self) -> u32 {
        self.gradients.len() as u32
    }

    /// Noise at angle `theta` (radians), in [-1, 1].
    pub fn value(&self, theta: f64) -> f64 {
        let n = self.gradients.len();
        let t = (theta / TAU + self.phase) * n as f64;
        let cell = t.floor();
        let u = t - cell;
        let i = (cell as i64).rem_euclid(n as i64) as usize;
        let g0 = self.gradients[i];
        let g1 = self.gradients[(i + 1) % n];
        let a = g0 * u;
        let b = g1 * (u - 1.0);
        let s = fade(u);
        // 1-D Perlin with |g| <= 1 peaks at 0.5 in magnitude.
        (2.0 * (a + s * (b - a))).clamp(-1.0, 1.0)
    }
}

#[inline]
fn fade(u: f64) -> f64 {
    u * u * u * (u * (u * 6.0 - 15.0) + 10.0)
}
