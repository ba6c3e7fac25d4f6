//! The deterministic smooth test image.

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TEST_IMAGE_SEED: u64 = 0x5EED;
pub const TEST_IMAGE_SIZE: usize = 33;
/// Largest spatial frequency (radians per pixel) in the test image.
pub const TEST_IMAGE_BAND: f64 = 0.25;
const WAVES: usize = 32;

/// Band-limited noise: a sum of plane waves with random wave vectors in the
/// disc `|ω| ≤ band`, random phases and amplitudes, scaled to unit RMS per
/// channel. Coordinates are centered as in [`crate::field`].
pub fn band_limited_noise(size: usize, channels: usize, band: f64, seed: u64) -> Array3<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (size as f64 - 1.0) / 2.0;
    let mut out = Array3::zeros((size, size, channels));
    for ch in 0..channels {
        let waves: Vec<(f64, f64, f64, f64)> = (0..WAVES)
            .map(|_| {
                let k = band * rng.random::<f64>().sqrt();
                let dir = rng.random_range(0.0..std::f64::consts::TAU);
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                let amp = rng.random_range(-1.0..1.0);
                (k * dir.cos(), k * dir.sin(), phase, amp)
            })
            .collect();
        for y in 0..size {
            for x in 0..size {
                let (p1, p2) = (x as f64 - c, c - y as f64);
                out[[y, x, ch]] = waves.iter().map(|(w1, w2, ph, a)| a * (w1 * p1 + w2 * p2 + ph).cos()).sum();
            }
        }
        let rms = (out.index_axis(ndarray::Axis(2), ch).iter().map(|v| v * v).sum::<f64>() / (size * size) as f64).sqrt();
        out.index_axis_mut(ndarray::Axis(2), ch).mapv_inplace(|v| v / rms);
    }
    out
}

/// The standard `33 × 33` test image with the given number of channels.
pub fn standard_test_image(channels: usize) -> Array3<f64> {
    band_limited_noise(TEST_IMAGE_SIZE, channels, TEST_IMAGE_BAND, TEST_IMAGE_SEED)
}
