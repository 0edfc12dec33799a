//! Monte Carlo properties of the channel models and the SC decoder.

use polarlink::channels::{llr, transmit, transmit_bits, ChannelSpec, SimRng};
use polarlink::construction::{construct, evolve, select_information_set, union_bound, RecursionRule, Z0Policy};
use polarlink::sim::{run_ber_sweep, ChannelFamily, CodeSource, SweepConfig};

#[test]
fn awgn_noise_moments() {
    let sigma = 0.8;
    let channel = ChannelSpec::AwgnBpsk { sigma };
    let symbols = vec![1.0; 1_000_000];
    let y = match transmit(&symbols, &channel, &mut SimRng::new(1)).unwrap() {
        polarlink::channels::Observation::Real(y) => y,
        other => panic!("unexpected observation {other:?}"),
    };
    let n = y.len() as f64;
    let mean = y.iter().map(|v| v - 1.0).sum::<f64>() / n;
    let var = y.iter().map(|v| (v - 1.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.01 * sigma, "mean {mean}");
    assert!((var / (sigma * sigma) - 1.0).abs() < 0.01, "variance {var}");
}

#[test]
fn rayleigh_amplitude_ks_statistic() {
    let k = 0.7;
    let mut rng = SimRng::new(77);
    let mut a: Vec<f64> = (0..1_000_000)
        .map(|_| polarlink::channels::rayleigh_amplitude(k, &mut rng))
        .collect();
    a.sort_by(f64::total_cmp);
    let n = a.len() as f64;
    let ks = a
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x * x / (2.0 * k * k)).exp();
            (cdf - i as f64 / n).abs().max((cdf - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS statistic {ks}");
    let power = a.iter().map(|x| x * x).sum::<f64>() / n;
    assert!((power - 2.0 * k * k).abs() < 0.01, "mean power {power}");
}

#[test]
fn seeds_decorrelate_and_repeat() {
    let channel = ChannelSpec::AwgnBpsk { sigma: 1.0 };
    let symbols = vec![-1.0; 100_000];
    let draw = |seed| match transmit(&symbols, &channel, &mut SimRng::new(seed)).unwrap() {
        polarlink::channels::Observation::Real(y) => y.iter().map(|v| v + 1.0).collect::<Vec<_>>(),
        _ => unreachable!(),
    };
    assert_eq!(draw(5), draw(5));
    let (x, y) = (draw(5), draw(6));
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let corr = cov / (vx * vy).sqrt();
    assert!(corr.abs() < 0.01, "correlation {corr}");
}

#[test]
fn llr_sign_favours_sent_zero() {
    for channel in [
        ChannelSpec::AwgnBpsk { sigma: 3.0 },
        ChannelSpec::rayleigh_from_snr_db(0.7, -5.0),
        ChannelSpec::Bec { epsilon: 0.4 },
    ] {
        let bits = vec![0u8; 100_000];
        let l = llr(&transmit_bits(&bits, &channel, &mut SimRng::new(8)).unwrap(), &channel).unwrap();
        let positive = l.iter().filter(|&&v| v > 0.0).count() as f64 / l.len() as f64;
        assert!(positive > 0.5, "{channel:?}: {positive}");
    }
}

#[test]
fn sc_ber_degrades_with_noise() {
    let (config, _) = construct(&ChannelSpec::AwgnBpsk { sigma: 0.8 }, Z0Policy::Proposed, RecursionRule::Type1, 6, 32).unwrap();
    let cfg = SweepConfig {
        code: CodeSource::Polar { config },
        channel: ChannelFamily::Awgn,
        grid: vec![4.0, 2.0, 1.0, 0.0],
        frames: 100_000,
        seed: 31,
        early_stop: None,
        workers: 0,
    };
    let records = run_ber_sweep(&cfg).unwrap();
    for pair in records.windows(2) {
        let (better, worse) = (&pair[0], &pair[1]);
        let slack = 3.0 * better.ber_std_error().hypot(worse.ber_std_error());
        assert!(better.ber <= worse.ber + slack, "{} dB: {} vs {} dB: {}", better.param, better.ber, worse.param, worse.ber);
    }
}

#[test]
fn sc_fer_respects_union_bound_on_bec() {
    for n in [6u32, 8] {
        let epsilon = 0.3;
        let k = (1usize << n) / 4;
        let z = evolve(epsilon, n, RecursionRule::BecExact).unwrap();
        let a = select_information_set(&z, k).unwrap();
        let bound = union_bound(&z, &a).unwrap();
        let cfg = SweepConfig {
            code: CodeSource::PolarConstruct {
                n,
                rate: 0.25,
                rule: RecursionRule::BecExact,
                z0: Z0Policy::Proposed,
            },
            channel: ChannelFamily::Bec,
            grid: vec![epsilon],
            frames: 20_000,
            seed: 4,
            early_stop: None,
            workers: 0,
        };
        let r = &run_ber_sweep(&cfg).unwrap()[0];
        assert!(r.fer <= bound + 3.0 * r.fer_std_error(), "N={}: fer {} bound {bound}", 1 << n, r.fer);
    }
}
