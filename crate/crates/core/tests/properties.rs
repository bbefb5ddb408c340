use proptest::prelude::*;

use nonadditive_codes::automorph::{commutes_with_projector, AutomorphismCandidate};
use nonadditive_codes::erasure::{encode, erase, random_logical};
use nonadditive_codes::lift::{apply_weyl, inner, KetJson};
use nonadditive_codes::projector::build_projector;
use nonadditive_codes::{BitString, CodeParams, CycInt, SparseKet, WeylOp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cyc(dim: u32) -> impl Strategy<Value = CycInt> {
    prop::collection::vec(-4i64..=4, dim as usize).prop_map(CycInt::from_coeffs)
}

fn weyl(n: usize, dim: u32) -> impl Strategy<Value = WeylOp> {
    let d = dim as u8;
    (prop::collection::vec(0..d, n), prop::collection::vec(0..d, n), 0..dim)
        .prop_map(move |(x, z, ph)| WeylOp::new(dim, x, z, ph).unwrap())
}

fn ket(n: usize, dim: u32) -> impl Strategy<Value = SparseKet> {
    let size = (dim as u64).pow(n as u32);
    prop::collection::vec((0..size, -3i64..=3), 1..6).prop_map(move |terms| {
        let mut k = SparseKet::new(n, dim).unwrap();
        for (l, a) in terms {
            k.add_term(l, CycInt::from_int(dim, a));
        }
        k
    })
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn bitstring_text_roundtrip(n in 1usize..=20, raw in any::<u64>()) {
        let b = BitString::new(n, raw & ((1u64 << n) - 1)).unwrap();
        let back: BitString = b.to_string().parse().unwrap();
        prop_assert_eq!(b, back);
        prop_assert_eq!(b.complement().complement(), b);
        prop_assert_eq!(b.distance(&b.complement()), n);
    }

    #[test]
    fn cyclotomic_ring_laws(
        (a, b, c) in prop::sample::select(vec![2u32, 3, 4, 5, 6]).prop_flat_map(|d| (cyc(d), cyc(d), cyc(d)))
    ) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(b.clone() + c.clone()), (&a * &b) + (&a * &c));
        let z = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
        prop_assert!(z.norm() < 1e-9);
        prop_assert!((a.conj().to_complex() - a.to_complex().conj()).norm() < 1e-9);
    }

    #[test]
    fn weyl_composition_matches_sequential_action(
        (a, b, k) in prop::sample::select(vec![2u32, 3]).prop_flat_map(|d| (weyl(3, d), weyl(3, d), ket(3, d)))
    ) {
        let seq = apply_weyl(&a, &apply_weyl(&b, &k).unwrap()).unwrap();
        let direct = apply_weyl(&a.compose(&b).unwrap(), &k).unwrap();
        prop_assert_eq!(seq, direct);
    }

    #[test]
    fn weyl_operators_are_unitary(
        (e, k1, k2) in prop::sample::select(vec![2u32, 3]).prop_flat_map(|d| (weyl(3, d), ket(3, d), ket(3, d)))
    ) {
        let lhs = inner(&apply_weyl(&e, &k1).unwrap(), &apply_weyl(&e, &k2).unwrap()).unwrap();
        prop_assert_eq!(lhs, inner(&k1, &k2).unwrap());
    }

    #[test]
    fn ket_json_roundtrip(k in ket(4, 3)) {
        let j: KetJson = serde_json::from_str(&serde_json::to_string(&k.to_json()).unwrap()).unwrap();
        prop_assert_eq!(SparseKet::from_json(&j).unwrap(), k);
    }

    #[test]
    fn even_phase_pattern_preserves_projector(b in any::<bool>(), f in 0u64..32, p in perm(5)) {
        let proj = build_projector(&CodeParams::new(0, 1, 2).unwrap()).unwrap();
        let c = AutomorphismCandidate::new(b, BitString::new(5, f).unwrap(), p).unwrap();
        prop_assert_eq!(commutes_with_projector(&c, &proj), f.count_ones() % 2 == 0);
    }

    #[test]
    fn erasure_preserves_trace(seed in any::<u64>(), site in 0usize..7) {
        let params = CodeParams::new(1, 0, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = encode(&params, &random_logical(&mut rng, 22)).unwrap();
        prop_assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        let rho = erase(&psi, site).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        let (p0, p1) = rho.site_probabilities(site).unwrap();
        prop_assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
    }
}
