/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `hits` successes out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials);
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let (lo, hi) = wilson_interval(5, 10, Z95);
        assert!((lo - 0.2366).abs() < 1e-4 && (hi - 0.7634).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 20, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.1611).abs() < 1e-4);
        let (lo, hi) = wilson_interval(20, 20, Z95);
        assert!((lo - 0.8389).abs() < 1e-4 && hi == 1.0);
    }

    #[test]
    fn width_shrinks_like_inverse_root() {
        let w = |t: u64| {
            let (lo, hi) = wilson_interval(3 * t / 10, t, Z95);
            hi - lo
        };
        let ratio = w(1_000) / w(16_000);
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }
}
