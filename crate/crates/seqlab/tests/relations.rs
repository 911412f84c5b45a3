use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rowcol_linalg::{svd, ComplexMatrix, SingularSpectrum};
use rowcol_seqlab::*;
use rowcol_xspace::weights::PairVariant;
use rowcol_xspace::{Flag, TailRule, WeightSequence};

fn sorted(prefix: Vec<f64>, rule: TailRule) -> WeightSequence {
    WeightSequence::new(prefix, Some(rule), vec![Flag::Sorted]).unwrap()
}

fn log4(shift: u32) -> WeightSequence {
    sorted(vec![], TailRule::Log4 { shift, base: 4 })
}

fn fin(values: &[u64]) -> GenIntSeq {
    GenIntSeq::from_values(values, None).unwrap()
}

// ---------- domination and equivalence ----------

#[test]
fn equal_sequences_dominate_with_k_one() {
    let a = log4(1);
    let v = dominates(&a, &a, 1000, 4).unwrap();
    assert_eq!(v.constant(), Some(1));
    let w = v.witness().unwrap();
    assert!(w.listed.is_empty() && w.predicates.is_empty());
}

#[test]
fn pointwise_smaller_pair_is_dominated() {
    let a = WeightSequence::not_subbasis(PairVariant::Alpha);
    let b = WeightSequence::not_subbasis(PairVariant::Beta);
    let v = dominates(&a, &b, 1 << 20, 4).unwrap();
    assert_eq!(v.constant(), Some(1));
    let w = v.witness().unwrap();
    assert!(w.listed.is_empty() && w.predicates.is_empty());
    assert!(replay_domination(&a, &b, w, 5000).unwrap());
}

#[test]
fn reversed_pair_is_refuted_through_a_million() {
    let t = Instant::now();
    let a = WeightSequence::not_subbasis(PairVariant::Beta);
    let b = WeightSequence::not_subbasis(PairVariant::Alpha);
    let v = dominates(&a, &b, 1_000_000, 4).unwrap();
    let EquivVerdict::NotEquivalent { certificate, .. } = &v else { panic!("{v:?}") };
    assert!(certificate_is_monotone(certificate));
    assert_eq!(certificate.last().unwrap().depth, 1_000_000);
    // Block n is forced for K = 4 iff 2^n > 4. Block 2 (16 ≤ i < 512) is not;
    // block 3 (4^9 ≤ i < 4^16) is, with squared weight 4^{−9} per index.
    let last = certificate.last().unwrap();
    let forced = BigRational::new((1_000_000u64 - 262_144 + 1).into(), (BigUint::one() << 18u32).into());
    assert_eq!(last.mass.exact.as_deref(), Some(format!("{}/{}", forced.numer(), forced.denom()).as_str()));
    let e = seq_equivalent(&a, &b, 1_000_000, 4).unwrap();
    assert_eq!(e.kind(), VerdictKind::NotEquivalent);
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn unsorted_sequences_are_rejected() {
    let a = WeightSequence::with_rule(vec![], TailRule::Subbasis { a: 1.5, ratio: 3 }).unwrap();
    assert!(matches!(dominates(&a, &log4(0), 10, 2), Err(SeqError::Precondition(_))));
}

#[test]
fn finite_difference_is_listed() {
    let a = log4(1);
    let b = sorted(vec![1.0; 5], TailRule::Log4 { shift: 1, base: 4 });
    let v = seq_equivalent(&a, &b, 1000, 4).unwrap();
    assert_eq!(v.constant(), Some(1));
    let w = v.witness().unwrap();
    // α_1 = 1/2 and α_2..5 ≤ 1/4, all below 1.
    assert_eq!(w.listed, vec![1, 2, 3, 4, 5]);
    assert!(replay_equivalence(&a, &b, w, 2000).unwrap());
}

#[test]
fn shifted_logs_are_equivalent_with_the_ratio() {
    let v = seq_equivalent(&log4(0), &log4(3), 100, 16).unwrap();
    assert_eq!(v.constant(), Some(8));
    assert!(replay_equivalence(&log4(0), &log4(3), v.witness().unwrap(), 4096).unwrap());
    let v = seq_equivalent(&log4(0), &log4(3), 100, 4).unwrap();
    assert_eq!(v.kind(), VerdictKind::Inconclusive);
}

fn corpus() -> Vec<WeightSequence> {
    let mut c = Vec::new();
    for shift in 0..4 {
        c.push(log4(shift));
        c.push(sorted(vec![1.0, 1.0], TailRule::Log4 { shift, base: 4 }));
        c.push(sorted(vec![], TailRule::Log4 { shift, base: 16 }));
    }
    c.push(WeightSequence::not_subbasis(PairVariant::Alpha));
    c.push(WeightSequence::not_subbasis(PairVariant::Beta));
    c.push(sorted(vec![1.0, 1.0, 1.0], TailRule::NotSubbasis { variant: PairVariant::Alpha }));
    for (e, s) in [(0.25, 1.0), (0.25, 0.5), (0.5, 1.0), (0.5, 0.25), (0.4, 1.0)] {
        c.push(sorted(vec![], TailRule::Power { exponent: e, scale: s }));
    }
    for (e, s) in [(1.0, 1.0), (2.0, 0.5)] {
        c.push(sorted(vec![], TailRule::Power { exponent: e, scale: s }));
    }
    c.push(sorted(vec![0.5, 0.25], TailRule::Zero));
    c.push(sorted(vec![1.0], TailRule::Blocks { blocks: vec![(10, 0.5), (100, 0.1)] }));
    c.push(sorted(vec![], TailRule::Zero));
    c.push(sorted(vec![0.9; 4], TailRule::Log4 { shift: 1, base: 4 }));
    c.push(sorted(vec![], TailRule::Log4 { shift: 2, base: 64 }));
    c.push(sorted(vec![1.0; 7], TailRule::Power { exponent: 0.25, scale: 0.5 }));
    c.push(sorted(vec![1.0; 6], TailRule::NotSubbasis { variant: PairVariant::Beta }));
    c.push(sorted(vec![], TailRule::Power { exponent: 0.5, scale: 3.0f64.recip() }));
    c
}

#[test]
fn equivalence_laws_on_a_corpus() {
    let t = Instant::now();
    let c = corpus();
    assert_eq!(c.len(), 30);
    let depth = 512;
    let n = c.len();
    let mut v = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            v[i][j] = Some(seq_equivalent(&c[i], &c[j], depth, 64).unwrap());
        }
    }
    let get = |i: usize, j: usize| v[i][j].as_ref().unwrap();
    for i in 0..n {
        assert_eq!(get(i, i).constant(), Some(1), "reflexive at {i}");
        for j in 0..n {
            assert_eq!(get(i, j).kind(), get(j, i).kind(), "symmetric at {i},{j}");
            if let Some(w) = get(i, j).witness() {
                assert!(replay_equivalence(&c[i], &c[j], w, depth).unwrap());
                assert!(replay_equivalence(&c[j], &c[i], get(j, i).witness().unwrap(), depth).unwrap());
            }
        }
    }
    let mut composed = 0;
    for i in 0..n {
        for j in 0..n {
            let Some(w1) = get(i, j).witness() else { continue };
            for k in 0..n {
                let Some(w2) = get(j, k).witness() else { continue };
                assert_ne!(get(i, k).kind(), VerdictKind::NotEquivalent, "transitive at {i},{j},{k}");
                let w = compose(w1, w2);
                assert!(replay_equivalence(&c[i], &c[k], &w, 128).unwrap(), "composed witness at {i},{j},{k}");
                composed += 1;
            }
        }
    }
    assert!(composed > n);
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

// ---------- ∼* ----------

#[test]
fn equal_sequences_are_star_related_with_k_zero() {
    let b = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
    for k in 0..3 {
        assert!(star_equiv_at(&b, &b, k, 1000).unwrap());
    }
    let v = star_equiv(&b, &b, 1000, 3).unwrap();
    assert_eq!(v.constant(), Some(0));
    assert_eq!(v.witness().unwrap().listed.as_deref(), Some(&[][..]));
}

#[test]
fn linear_pair_mass_is_a_geometric_sum() {
    let b = GenIntSeq::with_rule(IntTail::Linear { slope: 1, offset: 0 }).unwrap();
    let g = GenIntSeq::with_rule(IntTail::Linear { slope: 2, offset: 0 }).unwrap();
    for n in [1, 2, 5, 40, 200] {
        assert!(star_equiv_at(&b, &g, 1, n).unwrap());
        assert!(!star_equiv_at(&b, &g, 0, n).unwrap());
    }
    // Σ_{i≥2} (4^{-i} + 4^{-2i}) = 1/12 + 1/240.
    let v = star_equiv(&b, &g, 200, 5).unwrap();
    assert_eq!(v.constant(), Some(1));
    let w = v.witness().unwrap();
    assert_eq!(w.mass.exact.as_deref(), Some("7/80"));
    assert!(replay_star(&b, &g, w, 200).unwrap());
}

#[test]
fn unbounded_difference_with_divergent_mass_is_refuted() {
    let b = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
    let g = GenIntSeq::with_rule(IntTail::LogBase { base: 64, shift: 1 }).unwrap();
    let v = star_equiv(&b, &g, 1 << 16, 3).unwrap();
    let EquivVerdict::NotEquivalent { certificate, .. } = &v else { panic!("{v:?}") };
    assert!(certificate_is_monotone(certificate));
    assert!(certificate.last().unwrap().exceeds_k);
}

#[test]
fn constant_gap_needs_that_constant() {
    let b = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
    let g = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 3 }).unwrap();
    let v = star_equiv(&b, &g, 100, 5).unwrap();
    assert_eq!(v.constant(), Some(2));
    let v = star_equiv(&b, &g, 100, 1).unwrap();
    assert_eq!(v.kind(), VerdictKind::Inconclusive);
}

fn small_seq() -> impl Strategy<Value = GenIntSeq> {
    prop::collection::vec(prop_oneof![9 => (0u64..6).prop_map(Some), 1 => Just(None)], 1..13).prop_map(|steps| {
        let mut v = Vec::new();
        let mut cur = GenInt::Fin(0);
        for s in steps {
            cur = match s {
                Some(d) => cur.add(d),
                None => GenInt::Inf,
            };
            v.push(cur);
        }
        GenIntSeq::finite(v).unwrap()
    })
}

proptest! {
    #[test]
    fn forced_mass_is_monotone(b in small_seq(), g in small_seq(), k in 0u64..4) {
        let n = b.available().unwrap().min(g.available().unwrap());
        for m in 1..=n {
            if star_equiv_at(&b, &g, k, m).unwrap() {
                prop_assert!(star_equiv_at(&b, &g, k + 1, m).unwrap());
                if m > 1 {
                    prop_assert!(star_equiv_at(&b, &g, k, m - 1).unwrap());
                }
            }
        }
    }
}

#[test]
fn minimal_witness_is_optimal_exhaustively() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for trial in 0..40 {
        let n = 1 + trial % 12;
        let mk = |rng: &mut rand::rngs::StdRng| {
            let mut cur = 0u64;
            let v: Vec<u64> = (0..n)
                .map(|_| {
                    cur += rng.random_range(0..4);
                    cur
                })
                .collect();
            fin(&v)
        };
        let (b, g) = (mk(&mut rng), mk(&mut rng));
        for k in 0..3u64 {
            let minimal = forced_set(&b, &g, k, n as u64).unwrap();
            let min_mass = set_mass(&b, &g, &minimal).unwrap().to_rational(64).unwrap_or_else(BigRational::zero);
            for mask in 0u32..(1 << n) {
                let set: Vec<u64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i as u64 + 1).collect();
                let covers = (1..=n as u64).all(|i| set.contains(&i) || !b.get(i).unwrap().abs_diff(g.get(i).unwrap()).exceeds(k));
                if covers {
                    let m = set_mass(&b, &g, &set).unwrap().to_rational(64).unwrap_or_else(BigRational::zero);
                    assert!(m >= min_mass);
                }
            }
        }
    }
}

// ---------- n and Y ----------

#[test]
fn n_map_examples() {
    let s = SingularSpectrum::new(vec![1.0, 0.125]).unwrap();
    assert_eq!(n_map(&s, 1).unwrap(), GenInt::Fin(1));
    assert_eq!(n_map(&s, 2).unwrap(), GenInt::Fin(4));
    assert_eq!(n_map(&s, 3).unwrap(), GenInt::Inf);
}

#[test]
fn y_map_literal_examples() {
    // s = 2^{1−α}: sin φ = 2^{−α}/2^{1−α} = 1/2.
    let s = SingularSpectrum::new(vec![1.0, 0.5, 0.25]).unwrap();
    let alpha = base_sequence(&s, 3).unwrap();
    assert_eq!(alpha.prefix(), &[GenInt::Fin(1), GenInt::Fin(2), GenInt::Fin(3)]);
    let y = y_map(&alpha, &s, 3, AngleMode::Literal).unwrap();
    assert!(y.iter().all(|a| a.sin == 0.5));
    let inf = GenIntSeq::finite(vec![GenInt::Fin(1), GenInt::Inf, GenInt::Inf]).unwrap();
    let y = y_map(&inf, &s, 3, AngleMode::Literal).unwrap();
    assert_eq!((y[1].sin, y[1].cos), (0.0, 1.0));
    let s = SingularSpectrum::new(vec![0.5, 0.25]).unwrap();
    let y = y_map(&fin(&[1, 2]), &s, 2, AngleMode::Literal).unwrap();
    assert_eq!((y[0].sin, y[1].sin), (1.0, 1.0));
}

#[test]
fn y_map_rejects_non_members() {
    let s = SingularSpectrum::new(vec![0.25, 0.25]).unwrap();
    assert!(matches!(y_map(&fin(&[1, 3]), &s, 2, AngleMode::Centered), Err(SeqError::Membership(_))));
    assert!(matches!(y_map(&fin(&[2, 2]), &s, 2, AngleMode::Centered), Err(SeqError::Membership(_))));
    assert!(y_map(&fin(&[3, 3]), &s, 2, AngleMode::Centered).is_ok());
}

/// Singular values of `A|_Y` for `A e_i = s_i ξ_i`, `A f_i = 0`, computed from
/// an explicit orthonormal basis of `Y` in `ℓ2^{2n}`.
fn restricted_values(frame: &[FrameAngle], s: &SingularSpectrum) -> Vec<f64> {
    let n = frame.len();
    let basis = ComplexMatrix::from_fn(2 * n, n, |r, c| {
        if r == c {
            frame[c].sin.into()
        } else if r == n + c {
            frame[c].cos.into()
        } else {
            0.0.into()
        }
    });
    let a = ComplexMatrix::from_fn(n, 2 * n, |r, c| if r == c { s.get(r + 1).into() } else { 0.0.into() });
    svd(&a.matmul(&basis)).unwrap().spectrum.values().to_vec()
}

#[test]
fn centered_y_map_round_trips_through_n() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..5 {
        let n = 40;
        let mut vals: Vec<f64> = (0..n).map(|_| rng.random_range(1e-6..1.0f64)).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let s = SingularSpectrum::new(vals).unwrap();
        let alpha = base_sequence(&s, n).unwrap();
        let mut beta = Vec::new();
        let mut prev = GenInt::Fin(0);
        for k in 1..=n as u64 {
            let mut v = alpha.get(k).unwrap().add(rng.random_range(0..3)).max(prev);
            if rng.random_bool(0.03) || prev.is_inf() {
                v = GenInt::Inf;
            }
            beta.push(v);
            prev = v;
        }
        let beta = GenIntSeq::finite(beta).unwrap();
        let frame = y_map(&beta, &s, n as u64, AngleMode::Centered).unwrap();
        let got = SingularSpectrum::from_unsorted(restricted_values(&frame, &s)).unwrap();
        for k in 1..=n {
            assert_eq!(n_map(&got, k).unwrap(), beta.get(k as u64).unwrap(), "index {k}");
        }
    }
}

// ---------- φ and b_ε ----------

fn base64() -> GenIntSeq {
    GenIntSeq::with_rule(IntTail::LogBase { base: 64, shift: 1 }).unwrap()
}

#[test]
fn first_block_matches_a_direct_scan() {
    let alpha = base64();
    let blocks = Borel2Blocks::build(&alpha, 10).unwrap();
    let mut acc = BigRational::zero();
    let sixteen = BigRational::from_integer(16.into());
    let mut i = 0u64;
    while acc <= sixteen {
        i += 1;
        let GenInt::Fin(a) = alpha.get(i).unwrap() else { panic!() };
        acc += BigRational::new(1.into(), (BigUint::one() << (2 * a) as usize).into());
    }
    assert_eq!(blocks.blocks[0].q, BigUint::from(i + 2));
}

#[test]
fn log4_base_first_cut_is_four_to_the_84_plus_3() {
    // 4^{−1} + 84 stairs of mass 3/16 reach 16 exactly at index 4^84; one more entry passes it.
    let alpha = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
    let blocks = Borel2Blocks::build(&alpha, 100).unwrap();
    assert_eq!(blocks.blocks[0].q, BigUint::from(4u32).pow(84) + 3u32);
}

#[test]
fn zero_point_maps_to_the_base_on_blocks() {
    let alpha = base64();
    let phi = borel2_phi(&XiPoint::zero(), &alpha, 3000).unwrap();
    let blocks = Borel2Blocks::build(&alpha, 3000).unwrap();
    for j in 1..=3000 {
        let (_, inside) = blocks.locate(j).unwrap();
        if inside {
            assert_eq!(phi.get(j).unwrap(), alpha.get(j).unwrap());
        }
    }
    phi.check_dominates_base(&alpha, 3000).unwrap();
}

#[test]
fn non_base4_tails_are_rejected() {
    for t in [IntTail::LogBase { base: 2, shift: 1 }, IntTail::Linear { slope: 1, offset: 0 }, IntTail::Const { value: GenInt::Fin(3) }] {
        let a = GenIntSeq::with_rule(t).unwrap();
        assert!(matches!(borel2_phi(&XiPoint::zero(), &a, 10), Err(SeqError::Construction(_))));
    }
}

fn random_xi(rng: &mut rand::rngs::StdRng, len: u64, spread: u64) -> XiPoint {
    let prefix = (1..=len).map(|k| rng.random_range(0..=spread.min(k - 1))).collect();
    XiPoint::new(prefix, Some(XiTail::Zero)).unwrap()
}

#[test]
fn reduction_is_sound_on_random_pairs() {
    let alpha = base64();
    let depth = 10_000;
    let blocks = Borel2Blocks::build(&alpha, depth).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let (b, c) = (random_xi(&mut rng, 8, 4), random_xi(&mut rng, 8, 4));
        let disc = eks_discrepancy(&b, &c, depth).unwrap();
        let (pb, pc) = (borel2_phi_with(&b, &alpha, &blocks, depth).unwrap(), borel2_phi_with(&c, &alpha, &blocks, depth).unwrap());
        pb.check_dominates_base(&alpha, depth).unwrap();
        assert!(star_equiv_at(&pb, &pc, disc, depth).unwrap());
        let v = star_equiv(&pb, &pc, depth, disc).unwrap();
        assert!(v.kind() != VerdictKind::NotEquivalent);
    }
}

#[test]
fn second_block_separates_at_a_million() {
    let alpha = base64();
    let depth = 1_000_000;
    let blocks = Borel2Blocks::build(&alpha, depth).unwrap();
    assert_eq!(blocks.blocks.len(), 2);
    assert_eq!(blocks.blocks[1].p, BigUint::from(64u64.pow(3) + 1));
    let b = XiPoint::zero();
    let c = XiPoint::with_rule(XiTail::Max);
    assert_eq!(eks_discrepancy(&b, &c, 2).unwrap(), 1);
    let (pb, pc) = (borel2_phi_with(&b, &alpha, &blocks, depth).unwrap(), borel2_phi_with(&c, &alpha, &blocks, depth).unwrap());
    // With K = 0 the whole second block is forced; its mass exceeds 1.
    assert!(!star_equiv_at(&pb, &pc, 0, depth).unwrap());
    assert!(star_equiv_at(&pb, &pc, 1, depth).unwrap());
}

#[test]
fn b_epsilon_examples() {
    let depth = 10_000;
    let zero = b_epsilon(&BitSeq::default(), &IndexPartition::TwoAdic, depth).unwrap();
    assert!(zero.materialize(depth).unwrap().iter().all(|&v| v == 0));
    let e = BitSeq::new(vec![false, true, false], false);
    assert_eq!(b_epsilon(&e, &IndexPartition::TwoAdic, 100).unwrap(), b_epsilon(&e, &IndexPartition::TwoAdic, 100).unwrap());
    // ε and δ differ only at k = 3, where I_3 = {4, 12, 20, …}.
    let d = BitSeq::new(vec![false, true, true], false);
    let be = b_epsilon(&e, &IndexPartition::TwoAdic, depth).unwrap();
    let bd = b_epsilon(&d, &IndexPartition::TwoAdic, depth).unwrap();
    for n in [3u64, 4, 11, 12, 100, 1000, 10_000] {
        let expect = (1..=n).filter(|i| i % 8 == 4).max().map_or(0, |m| m - 1);
        assert_eq!(eks_discrepancy(&be, &bd, n).unwrap(), expect);
    }
}

#[test]
fn b_epsilon_family_is_separated() {
    let depth = 10_000;
    let family: Vec<XiPoint> = (0u32..16)
        .map(|m| {
            let bits = (0..14).map(|k| (m.wrapping_mul(2654435761) >> k) & 1 == 1).collect();
            b_epsilon(&BitSeq::new(bits, false), &IndexPartition::TwoAdic, depth).unwrap()
        })
        .collect();
    for i in 0..family.len() {
        for j in 0..i {
            if family[i] != family[j] {
                assert!(eks_discrepancy(&family[i], &family[j], depth).unwrap() > 1000);
            }
        }
    }
}

#[test]
fn discrepancy_of_prefix_differences() {
    let b = XiPoint::new(vec![0, 1, 2, 0, 4], Some(XiTail::Zero)).unwrap();
    let c = XiPoint::new(vec![0, 0, 0, 3, 1], Some(XiTail::Zero)).unwrap();
    assert_eq!(eks_discrepancy(&b, &c, 1000).unwrap(), 3);
    assert_eq!(eks_discrepancy(&b, &b, 1000).unwrap(), 0);
}

#[test]
fn json_round_trips() {
    let s = GenIntSeq::new(vec![GenInt::Fin(1), GenInt::Fin(2)], Some(IntTail::Const { value: GenInt::Inf })).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<GenIntSeq>(&text).unwrap(), s);
    assert!(text.contains("\"inf\""));
    let x = XiPoint::new(vec![0, 1], Some(XiTail::Max)).unwrap();
    assert_eq!(serde_json::from_str::<XiPoint>(&serde_json::to_string(&x).unwrap()).unwrap(), x);
    assert!(serde_json::from_str::<XiPoint>(r#"{"prefix":[1]}"#).is_err());
    let v = seq_equivalent(&log4(0), &log4(2), 50, 8).unwrap();
    let back: RatioVerdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(back, v);
}
