use bcclab::alist::{parse_alist, serialize_alist};
use bcclab::channel::frame_rng;
use bcclab::degree_dist::{concentrated_check_distribution, design_rate, edge_to_node, node_to_edge};
use bcclab::secrecy::concatenated_bler;
use bcclab::{
    build_zigzag_random, encode, BuildOptions, ClassAssignment, DegreePolynomial, EnsembleSpec, NodeKind,
    Perspective, Placement, Scrambler, SpaDecoder,
};
use proptest::prelude::*;
use rand::Rng;

fn distribution() -> impl Strategy<Value = Vec<(u32, f64)>> {
    prop::collection::btree_map(2u32..24, 0.01f64..1.0, 1..6).prop_map(|m| {
        let sum: f64 = m.values().sum();
        m.into_iter().map(|(d, w)| (d, w / sum)).collect()
    })
}

fn small_spec(n: usize, weights: &[(u32, f64)]) -> EnsembleSpec {
    let nu = DegreePolynomial::from_rounded(Perspective::Node, NodeKind::Variable, weights.iter().copied())
        .unwrap()
        .0;
    EnsembleSpec::with_concentrated_checks(n, 0.5, nu).unwrap()
}

fn code_strategy() -> impl Strategy<Value = (usize, u64, bool)> {
    (prop::sample::select(vec![24usize, 40, 64, 96]), any::<u64>(), any::<bool>())
}

fn build(n: usize, seed: u64, peg: bool) -> bcclab::LdpcCode {
    let options = BuildOptions {
        placement: if peg { Placement::Peg } else { Placement::Random },
        ..Default::default()
    };
    let spec = small_spec(n, &[(2, 0.5), (3, 0.4), (6, 0.1)]);
    build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: 0.25 }, seed, &options).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_node_round_trip(terms in distribution()) {
        let lambda = DegreePolynomial::new(Perspective::Edge, NodeKind::Variable, terms.clone()).unwrap();
        let back = node_to_edge(&edge_to_node(&lambda).unwrap()).unwrap();
        for (d, c) in terms {
            prop_assert!((back.coefficient(d) - c).abs() < 1e-9);
        }
        let nu = edge_to_node(&lambda).unwrap();
        prop_assert!((nu.coefficients().values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concentrated_checks_hit_the_target_mean(terms in distribution(), rate in 0.1f64..0.9) {
        let nu = DegreePolynomial::new(Perspective::Node, NodeKind::Variable, terms).unwrap();
        let c = concentrated_check_distribution(&nu, rate).unwrap();
        let target = nu.average_node_degree() / (1.0 - rate);
        prop_assert!((c.average_node_degree() - target).abs() < 1e-9);
        prop_assert!(c.degrees().count() <= 2);
        let rate_back = design_rate(&nu.to_edge().unwrap(), &c.to_edge().unwrap()).unwrap();
        prop_assert!((rate_back - rate).abs() < 1e-9);
    }

    #[test]
    fn construction_is_reproducible((n, seed, peg) in code_strategy()) {
        let a = build(n, seed, peg);
        let b = build(n, seed, peg);
        prop_assert_eq!(a.fingerprint(), b.fingerprint());
        prop_assert_eq!(a.n(), n);
        prop_assert_eq!(a.k(), n / 2);
        prop_assert_eq!(a.h().to_dense().rank(), a.r());
    }

    #[test]
    fn encoded_words_satisfy_every_check((n, seed, peg) in code_strategy(), info_seed: u64) {
        let code = build(n, seed, peg);
        let mut rng = frame_rng(info_seed, 0, 0);
        let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
        let word = encode(&code, &info).unwrap();
        prop_assert_eq!(&word[..code.k()], &info[..]);
        prop_assert!(code.h().is_codeword(&word));
    }

    #[test]
    fn noiseless_decoding_is_the_identity((n, seed, peg) in code_strategy(), info_seed: u64) {
        let code = build(n, seed, peg);
        let mut rng = frame_rng(info_seed, 1, 0);
        let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
        let word = encode(&code, &info).unwrap();
        let llrs: Vec<f64> = word.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let result = SpaDecoder::new(&code).decode(&llrs, 10);
        prop_assert!(result.converged);
        prop_assert_eq!(result.iterations_used, 0);
        prop_assert_eq!(result.decision, word);
    }

    #[test]
    fn alist_round_trip((n, seed, peg) in code_strategy()) {
        let code = build(n, seed, peg);
        let parsed = parse_alist(&serialize_alist(&code)).unwrap();
        prop_assert_eq!(parsed.h(), code.h());
        prop_assert_eq!(parsed.k(), code.k());
    }

    #[test]
    fn scrambler_inverts(size in 1usize..200, seed: u64, data_seed: u64) {
        let s = Scrambler::build(size, seed);
        let mut rng = frame_rng(data_seed, 2, 0);
        let bits: Vec<u8> = (0..size).map(|_| rng.gen_range(0..2)).collect();
        let scrambled = s.scramble(&bits).unwrap();
        prop_assert_eq!(s.descramble(&scrambled).unwrap(), bits);
    }

    #[test]
    fn concatenation_is_monotone(p in 0.0f64..=1.0, l in 1u32..500) {
        let one = concatenated_bler(p, l).unwrap();
        let more = concatenated_bler(p, l + 1).unwrap();
        prop_assert!((0.0..=1.0).contains(&one));
        prop_assert!(more >= one);
        prop_assert!(one >= p - 1e-15);
        let q = (p + 0.01).min(1.0);
        prop_assert!(concatenated_bler(q, l).unwrap() >= one);
    }
}

#[test]
fn frame_streams_are_reproducible_and_distinct() {
    let draw = |point, frame| -> Vec<u64> {
        let mut rng = frame_rng(42, point, frame);
        (0..4).map(|_| rng.gen()).collect()
    };
    assert_eq!(draw(3, 7), draw(3, 7));
    assert_ne!(draw(3, 7), draw(3, 8));
    assert_ne!(draw(3, 7), draw(4, 7));
}
