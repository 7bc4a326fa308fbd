use catcodes::search::{asymptotic_rate_estimate, threshold, Code, NoisePath, ThresholdOptions};
use catcodes::{cat_rate, Basis, CatCodeSpec, PauliChannel, Result};

struct FixedPhase(f64);

impl NoisePath for FixedPhase {
    fn channel_at(&self, q_x: f64) -> Result<PauliChannel> {
        PauliChannel::independent(q_x, self.0)
    }

    fn max_p(&self) -> f64 {
        0.5
    }
}

/// Best cat-code rate over lengths and bases at the hashing point of the
/// almost-bitflip channel with phase error rate `q_z`.
fn best_rate_at_hashing_point(q_z: f64) -> (f64, usize, f64) {
    let opts = ThresholdOptions {
        tol: 1e-13,
        ..Default::default()
    };
    let q_x = threshold(&FixedPhase(q_z), &Code::Cat(CatCodeSpec::z(1).unwrap()), &opts)
        .unwrap()
        .p_star;
    let ch = PauliChannel::independent(q_x, q_z).unwrap();
    let mut best = (f64::MIN, 0);
    for b in Basis::ALL {
        for m in 1..=400 {
            let r = cat_rate(&ch, CatCodeSpec::new(m, b).unwrap()).unwrap();
            if r > best.0 {
                best = (r, m);
            }
        }
    }
    (best.0, best.1, q_x)
}

#[test]
fn asymptotic_estimate_within_factor_three() {
    let q_z = 1e-2;
    let (rate, m, q_x) = best_rate_at_hashing_point(q_z);
    let estimate = asymptotic_rate_estimate(q_z).unwrap();
    let ratio = estimate / rate;
    println!("q_z={q_z} q_x={q_x:.6}: best rate {rate:.6} (m={m}), estimate {estimate:.6}, ratio {ratio:.3}");
    assert!((1.0 / 3.0..=3.0).contains(&ratio), "estimate/best = {ratio:.3}");
}
