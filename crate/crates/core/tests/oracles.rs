//! Decoders and construction checked against brute-force references.

use num_rational::BigRational;
use polarlink::channels::{llr, transmit_bits, ChannelSpec, SimRng};
use polarlink::construction::{evolve, RecursionRule};
use polarlink::ldpc::{bp_decode, generate_regular_ldpc, ldpc_encode, LdpcCode, DEFAULT_MAX_ITERS};
use polarlink::polar::{encode, encode_split, CodeConfig};
use polarlink::sc::{CheckRule, ScDecoder};

/// Probability of the channel output given codeword `x`, from per-bit LLRs.
fn likelihood(x: &[u8], llrs: &[f64]) -> f64 {
    x.iter()
        .zip(llrs)
        .map(|(&b, &l)| if b == 0 { (0.5 * l).exp() } else { (-0.5 * l).exp() })
        .product()
}

/// SC by exhaustive enumeration: bit `i` is chosen by summing the likelihood
/// over every completion of `u_{i+1..N}` given the past decisions.
fn sc_oracle(llrs: &[f64], config: &CodeConfig) -> Vec<u8> {
    let n = llrs.len();
    let mut frozen = config.frozen_values().iter();
    let mut decided = Vec::with_capacity(n);
    for i in 0..n {
        if !config.info_set().contains(&i) {
            decided.push(*frozen.next().unwrap());
            continue;
        }
        let mut p = [0.0f64; 2];
        let rest = n - i - 1;
        for (b, pb) in p.iter_mut().enumerate() {
            for tail in 0..(1u32 << rest) {
                let mut u = decided.clone();
                u.push(b as u8);
                u.extend((0..rest).map(|j| ((tail >> j) & 1) as u8));
                *pb += likelihood(&encode(&u).unwrap(), llrs);
            }
        }
        decided.push(u8::from(p[1] > p[0]));
    }
    decided
}

fn random_config(n: u32, k: usize, rng: &mut SimRng) -> CodeConfig {
    let len = 1usize << n;
    let mut idx: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = (rng.uniform() * (i + 1) as f64) as usize;
        idx.swap(i, j.min(i));
    }
    let mut a = idx[..k].to_vec();
    a.sort_unstable();
    let frozen = (0..len - k).map(|_| rng.bit()).collect();
    CodeConfig::with_frozen_values(n, a, frozen).unwrap()
}

#[test]
fn sc_matches_enumeration_oracle_n8() {
    let channel = ChannelSpec::AwgnBpsk { sigma: 0.9 };
    let mut rng = SimRng::new(2024);
    let mut dec = ScDecoder::new(CheckRule::Exact);
    for frame in 0..1000 {
        let config = random_config(3, 4, &mut rng);
        let info: Vec<u8> = (0..4).map(|_| rng.bit()).collect();
        let x = encode_split(&info, &config).unwrap();
        let obs = transmit_bits(&x, &channel, &mut rng).unwrap();
        let l = llr(&obs, &channel).unwrap();
        let got = dec.decode(&l, &config).unwrap();
        assert_eq!(got.decisions, sc_oracle(&l, &config), "frame {frame}");
    }
}

#[test]
fn min_sum_agrees_on_noiseless_input() {
    let mut rng = SimRng::new(5);
    let config = random_config(3, 4, &mut rng);
    let info = [1, 0, 1, 1];
    let x = encode_split(&info, &config).unwrap();
    let l: Vec<f64> = x.iter().map(|&b| if b == 0 { 8.0 } else { -8.0 }).collect();
    assert_eq!(sc_oracle(&l, &config), ScDecoder::default().decode(&l, &config).unwrap().decisions);
}

fn all_codewords(code: &LdpcCode) -> Vec<Vec<u8>> {
    let k = code.info_len();
    (0..1u32 << k)
        .map(|m| {
            let info: Vec<u8> = (0..k).map(|j| ((m >> j) & 1) as u8).collect();
            ldpc_encode(&info, code).unwrap()
        })
        .collect()
}

fn ml_decode(llrs: &[f64], book: &[Vec<u8>]) -> Vec<u8> {
    let score = |c: &Vec<u8>| -> f64 { c.iter().zip(llrs).map(|(&b, &l)| if b == 0 { l } else { -l }).sum() };
    book.iter()
        .max_by(|a, b| score(a).total_cmp(&score(b)))
        .unwrap()
        .clone()
}

#[test]
fn ldpc_toy_code_single_flip_matches_ml() {
    let code = generate_regular_ldpc(16, 3, 6, 11).unwrap();
    let book = all_codewords(&code);
    assert_eq!(book.len(), 1 << code.info_len());
    assert!(book.iter().all(|c| code.parity_check().is_codeword(c)));

    let mut rng = SimRng::new(3);
    for trial in 0..64 {
        let sent = &book[(rng.uniform() * book.len() as f64) as usize % book.len()];
        let mut l: Vec<f64> = sent.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let flip = trial % 16;
        l[flip] = -l[flip];
        let ml = ml_decode(&l, &book);
        assert_eq!(&ml, sent, "ML itself should undo one flip");
        let out = bp_decode(&l, &code, DEFAULT_MAX_ITERS).unwrap();
        assert!(out.converged);
        assert_eq!(out.codeword, ml, "trial {trial}");
    }
}

#[test]
fn bec_recursion_is_exact_in_rationals() {
    // Exact replay of the recursion. Up to n = 5 every value fits in a double
    // without rounding, so the f64 implementation must match bit for bit.
    let one = BigRational::from_integer(1.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut level = vec![half.clone()];
    for n in 1..=12u32 {
        level = level
            .iter()
            .flat_map(|z| [z * BigRational::from_integer(2.into()) - z * z, z * z])
            .collect();
        let lost: BigRational = level.iter().map(|z| &one - z).sum();
        assert_eq!(lost / BigRational::from_integer(level.len().into()), half, "level {n}");
        if n <= 5 {
            let float = evolve(0.5, n, RecursionRule::BecExact).unwrap();
            for (q, &f) in level.iter().zip(float.as_slice()) {
                assert_eq!(Some(q.clone()), BigRational::from_float(f));
            }
        }
    }
}
