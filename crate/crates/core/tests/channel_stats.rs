use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tornpaper::channel::{coverage, fragment_stats, tear, tpclp_filter, ChannelParams, DeletionProfile, Piece};
use tornpaper::BitString;

fn torn(n: usize, alpha: f64, seed: u64) -> tornpaper::channel::TearOutcome {
    let ch = ChannelParams::new(n, alpha).unwrap();
    tear(&BitString::zeros(n), &ch, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// q^{T−1}(1 + (T−1)p): expected coverage by fragments of length ≥ T.
fn exact_coverage(n: usize, alpha: f64, gamma: f64) -> f64 {
    let log_n = (n as f64).log2();
    let p = alpha / log_n;
    let t = (gamma * log_n).ceil();
    (1.0 - p).powf(t - 1.0) * (1.0 + (t - 1.0) * p)
}

#[test]
fn mean_fragment_length_is_inverse_break_probability() {
    let n = 1_000_000;
    let ch = ChannelParams::new(n, 0.5).unwrap();
    let (mut total, mut count) = (0usize, 0usize);
    for s in 0..50 {
        let out = torn(n, 0.5, s);
        total += out.lengths().iter().sum::<usize>();
        count += out.k();
    }
    let mean = total as f64 / count as f64;
    let expected = 1.0 / ch.p_n;
    assert!((mean / expected - 1.0).abs() < 0.02, "mean {mean}, expected {expected}");
}

#[test]
fn fragment_count_matches_n_p() {
    let n = 1_000_000;
    let ch = ChannelParams::new(n, 0.5).unwrap();
    let mean_k = (0..100).map(|s| torn(n, 0.5, s).k() as f64).sum::<f64>() / 100.0;
    let ratio = mean_k / (n as f64 * ch.p_n);
    assert!((0.95..=1.05).contains(&ratio), "ratio {ratio}");
}

#[test]
fn coverage_tracks_exact_finite_n_expectation() {
    let (alpha, gamma) = (0.5f64, 3.0f64);
    let limit = (-alpha * gamma).exp() * (1.0 + alpha * gamma);
    let mut last_err = f64::INFINITY;
    for n in [10_000usize, 100_000, 1_000_000] {
        let exact = exact_coverage(n, alpha, gamma);
        let seeds = 2_000_000 / n as u64 + 20;
        let mc = (0..seeds).map(|s| coverage(&torn(n, alpha, s), gamma)).sum::<f64>() / seeds as f64;
        assert!((mc - exact).abs() < 0.006, "n={n}: simulated {mc}, exact {exact}");
        let err = (limit - exact).abs();
        assert!(err < last_err);
        last_err = err;
    }
    assert!(last_err < 0.005);
}

#[test]
fn simulated_lost_pieces_fraction_matches_closed_form() {
    let n = 1 << 20;
    let profile = DeletionProfile::new(
        10.0,
        vec![
            Piece { lo: 10.0, hi: 20.0, d: 0.2 },
            Piece { lo: 20.0, hi: f64::INFINITY, d: 0.0 },
        ],
    )
    .unwrap();
    let mut total = 0.0;
    for s in 0..50 {
        let out = torn(n, 0.1, s);
        let kept = tpclp_filter(&out, &profile, &mut ChaCha8Rng::seed_from_u64(1000 + s));
        total += kept.lengths().iter().sum::<usize>() as f64 / n as f64;
    }
    let f_d = total / 50.0;
    assert!((f_d - 0.6698).abs() < 0.01, "F_d = {f_d}");
}

#[test]
fn good_set_is_typical() {
    use tornpaper::codec::{assemble, extract_erasure_estimates, ParamSpec};
    let params = ParamSpec::new(1 << 20, 3, 0.3, 8, 0.5, 0.02).derive().unwrap();
    let ch = ChannelParams::new(params.n, params.alpha).unwrap();
    let x = BitString::zeros(params.n);
    let seeds = 20;
    let mut good = 0;
    for s in 0..seeds {
        let out = tear(&x, &ch, &mut ChaCha8Rng::seed_from_u64(s));
        let long: Vec<_> = out
            .fragments()
            .iter()
            .filter(|f| f.bits.len() >= params.frag_threshold)
            .map(|f| (f.offset, f.bits.clone()))
            .collect();
        let aligned = assemble(&long, &params).unwrap();
        let erasures: Vec<usize> =
            extract_erasure_estimates(&aligned, &params).iter().map(|w| w.erasure_count()).collect();
        let stats = fragment_stats(&out, params.gamma, &erasures, params.good_set_limit());
        good += usize::from(stats.all_good());
    }
    assert_eq!(good, seeds as usize);
}
