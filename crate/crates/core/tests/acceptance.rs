//! Acceptance suite: one test per verification criterion, each printing a
//! PASS line with its measured quantities. Run with
//! `cargo test -p trilink --test acceptance`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trilink::chord::{
    build_chord_diagram, pairing_combinatorial, pairing_geometric, BaseTag,
    GeneralizedChordDiagram,
};
use trilink::congruence::{check_congruence, verify_ld_theorem};
use trilink::doodle::{mu_invariant, Doodle, Perm3};
use trilink::fixtures::{
    forbidden_move_fixture, perturb_isotopy, random_doodle, random_doodle_with_immersed,
    random_link, venn_doodle, GenParams, PerturbOptions,
};
use trilink::geometry::Sign;
use trilink::link::{construct_l_of_d, delta, linking_matrix, linking_number};
use trilink::magnus::{
    longitude_expansion, mu_bar_oracle, mu_bar_oracle_with, signed_occurrence, CyclicTriple,
    Letter, MagnusOptions, Residue, SignedWord,
};

const HARNESS_SEED: u64 = 0;
const HARNESS_COUNT: u64 = 200;

#[test]
fn criterion_01_main_theorem_harness() {
    let start = Instant::now();
    let mut zero_delta = 0u32;
    let mut nonzero_delta = 0u32;
    for seed in HARNESS_SEED..HARNESS_SEED + HARNESS_COUNT {
        let l = random_link(&GenParams::seeded(seed)).unwrap();
        let report = check_congruence(&l).unwrap();
        assert!(report.verdict, "congruence failed at seed {seed}: {report:?}");
        if report.delta == 0 {
            zero_delta += 1;
        } else {
            nonzero_delta += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(zero_delta > 0 && nonzero_delta > 0, "corpus must mix delta classes");
    assert!(
        elapsed.as_secs() < 60,
        "harness took {elapsed:?}, budget is 60 s"
    );
    println!(
        "ACCEPTANCE 01 PASS main congruence on {HARNESS_COUNT}/{HARNESS_COUNT} diagrams \
         ({zero_delta} with delta = 0, {nonzero_delta} with delta != 0) in {elapsed:?}"
    );
}

#[test]
fn criterion_02_ld_identity_suite() {
    for seed in 1000..1050u64 {
        let d = random_doodle(&GenParams::seeded(seed)).unwrap();
        let r = verify_ld_theorem(&d).unwrap();
        assert!(r.pass, "seed {seed}: {r:?}");
        assert_eq!(r.delta, 0, "seed {seed}");
        assert_eq!(r.mu_bar, -r.mu, "seed {seed}");
        assert_eq!(r.pairings, [0, 0, 0], "seed {seed}");
    }
    println!("ACCEPTANCE 02 PASS mu_bar(L(D)) = -mu exactly on 50/50 random doodles");
}

#[test]
fn criterion_03_borromean_fixture() {
    let d = venn_doodle();
    let mu = mu_invariant(&d, Perm3::identity()).unwrap();
    assert_eq!(mu.abs(), 1);
    let l = construct_l_of_d(&d).unwrap();
    assert_eq!(linking_matrix(&l).unwrap(), [0, 0, 0]);
    assert_eq!(delta(&l).unwrap(), 0);
    let mu_bar = mu_bar_oracle(&l, CyclicTriple::standard()).unwrap();
    assert_eq!(mu_bar, Residue::new(-mu, 0));
    println!("ACCEPTANCE 03 PASS venn fixture: |mu| = 1, lk = 0 pairwise, mu_bar = -mu exactly");
}

#[test]
fn criterion_04_linking_number_cross_check() {
    for seed in HARNESS_SEED..HARNESS_SEED + HARNESS_COUNT {
        let l = random_link(&GenParams::seeded(seed)).unwrap();
        for k in 0..3 {
            let series = longitude_expansion(&l, k, MagnusOptions::default()).unwrap();
            for i in 0..3 {
                if i == k {
                    continue;
                }
                assert_eq!(
                    series.coeff_lin(i),
                    linking_number(&l, i, k).unwrap(),
                    "seed {seed}, longitude {k}, variable {i}"
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 04 PASS degree-1 Magnus coefficients equal crossing half-sums \
         on {HARNESS_COUNT}/{HARNESS_COUNT} diagrams"
    );
}

fn mixed_doodle(seed: u64) -> Doodle {
    if seed % 5 == 0 {
        random_doodle_with_immersed(&GenParams::seeded(seed)).unwrap()
    } else {
        random_doodle(&GenParams::seeded(seed)).unwrap()
    }
}

#[test]
fn criterion_05_mu_algebra() {
    for case in 0..100u64 {
        let seed = 2000 + case;
        let d = mixed_doodle(seed);
        let base = mu_invariant(&d, Perm3::identity()).unwrap();
        for sigma in Perm3::all() {
            assert_eq!(
                mu_invariant(&d, sigma).unwrap(),
                sigma.sign() * base,
                "antisymmetry at seed {seed}, sigma {sigma}"
            );
        }
        // Reverse exactly one component: mu negates.
        let flip = (seed % 3) as usize;
        let mut components = d.components().to_vec();
        components[flip] = components[flip].reversed();
        let reversed = Doodle::new(components).unwrap();
        assert_eq!(
            mu_invariant(&reversed, Perm3::identity()).unwrap(),
            -base,
            "orientation reversal at seed {seed}, component {flip}"
        );
    }
    println!(
        "ACCEPTANCE 05 PASS permutation antisymmetry (6 orders) and one-component \
         reversal negation on 100/100 doodles"
    );
}

#[test]
fn criterion_06_isotopy_invariance() {
    for case in 0..100u64 {
        let seed = 3000 + case;
        let d = mixed_doodle(seed);
        let base = mu_invariant(&d, Perm3::identity()).unwrap();
        let p = perturb_isotopy(&d, &PerturbOptions::full(seed)).unwrap();
        assert_eq!(
            mu_invariant(&p, Perm3::identity()).unwrap(),
            base,
            "isotopy at seed {seed}"
        );
    }
    println!(
        "ACCEPTANCE 06 PASS mu invariant under subdivision + rotation + scaling + \
         translation on 100/100 cases"
    );
}

#[test]
fn criterion_07_forbidden_move_fixture() {
    let (d1, d2) = forbidden_move_fixture();
    let m1 = mu_invariant(&d1, Perm3::identity()).unwrap();
    let m2 = mu_invariant(&d2, Perm3::identity()).unwrap();
    assert_eq!((m1 - m2).abs(), 1);
    println!("ACCEPTANCE 07 PASS forbidden move jumps mu by exactly 1 ({m1} vs {m2})");
}

fn exhaustive_mark_vectors(n: usize) -> Vec<Vec<(BaseTag, Sign)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for tag in [BaseTag::C, BaseTag::Nc] {
                for sign in [Sign::Plus, Sign::Minus] {
                    let mut v = prefix.clone();
                    v.push((tag, sign));
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

#[test]
fn criterion_08_pairing_route_equivalence() {
    let mut exhaustive = 0u64;
    for n in 0..=6 {
        for marks in exhaustive_mark_vectors(n) {
            let g = GeneralizedChordDiagram::from_marks(1, &marks);
            assert_eq!(
                pairing_combinatorial(&g).unwrap(),
                pairing_geometric(&g).unwrap(),
                "exhaustive marks {marks:?}"
            );
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..200 {
        let n = rng.gen_range(7..28);
        let marks: Vec<(BaseTag, Sign)> = (0..n)
            .map(|_| {
                (
                    if rng.gen_bool(0.5) { BaseTag::C } else { BaseTag::Nc },
                    if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
                )
            })
            .collect();
        let g = GeneralizedChordDiagram::from_marks(0, &marks);
        assert_eq!(
            pairing_combinatorial(&g).unwrap(),
            pairing_geometric(&g).unwrap(),
            "random case {case}"
        );
    }
    println!(
        "ACCEPTANCE 08 PASS combinatorial = geometric pairing on {exhaustive} exhaustive \
         diagrams (<= 6 marks) and 200 random larger ones"
    );
}

#[test]
fn criterion_09_signed_occurrence_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mk = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..20);
        SignedWord(
            (0..len)
                .map(|_| Letter {
                    symbol: rng.gen_range(1..=3),
                    sign: if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
                })
                .collect(),
        )
    };
    let brute = |w: &SignedWord, r: u8, s: u8| {
        let mut total = 0i64;
        for i in 0..w.0.len() {
            for j in (i + 1)..w.0.len() {
                if w.0[i].symbol == r && w.0[j].symbol == s {
                    total += w.0[i].sign.to_i64() * w.0[j].sign.to_i64();
                }
            }
        }
        total
    };
    for _ in 0..1000 {
        let u = mk(&mut rng);
        let v = mk(&mut rng);
        for r in 1..=3u8 {
            for s in 1..=3u8 {
                assert_eq!(signed_occurrence(&u, r, s), brute(&u, r, s));
                assert_eq!(
                    signed_occurrence(&u.concat(&v), r, s),
                    signed_occurrence(&u, r, s)
                        + signed_occurrence(&v, r, s)
                        + u.signed_count(r) * v.signed_count(s)
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 09 PASS e_rs brute-force equivalence and concatenation identity \
         on 1000/1000 random word pairs"
    );
}

#[test]
fn criterion_10_rebasing_stability() {
    let mut gap_checks = 0u64;
    let mut base_checks = 0u64;
    for seed in HARNESS_SEED..HARNESS_SEED + 50 {
        let l = random_link(&GenParams::seeded(seed)).unwrap();
        let report = check_congruence(&l).unwrap();
        let reference = report.rhs_residue;

        // RHS residue across base-gap choices, one skeleton at a time. The
        // mu term never depends on the gap, so compare pairing sums.
        for k in 0..3 {
            let marks = build_chord_diagram(&l, k, None).marks.len();
            let choices = trilink::chord::gap_count(marks).min(6);
            for gap in 0..choices {
                let mut pairings = report.pairings;
                let g = build_chord_diagram(&l, k, Some(gap));
                pairings[k] = pairing_combinatorial(&g).unwrap();
                let rhs = -report.mu - pairings.iter().sum::<i64>();
                assert_eq!(
                    Residue::new(rhs, report.delta),
                    reference,
                    "seed {seed}, skeleton {k}, gap {gap}"
                );
                gap_checks += 1;
            }
        }

        // mu_bar residue across base-arc and longitude-start choices.
        for c in 0..3 {
            for offset in 0..5 {
                let mut opts = MagnusOptions::default();
                opts.base_arcs[c] = offset;
                let r = mu_bar_oracle_with(&l, CyclicTriple::standard(), opts).unwrap();
                assert_eq!(r, report.lhs, "seed {seed}, base arc {c}+{offset}");
                base_checks += 1;
            }
        }
        for start in 0..5 {
            let opts = MagnusOptions {
                longitude_start: start,
                ..MagnusOptions::default()
            };
            let r = mu_bar_oracle_with(&l, CyclicTriple::standard(), opts).unwrap();
            assert_eq!(r, report.lhs, "seed {seed}, longitude start {start}");
            base_checks += 1;
        }
    }
    println!(
        "ACCEPTANCE 10 PASS RHS residue stable over {gap_checks} gap re-basings and \
         mu_bar stable over {base_checks} oracle re-basings on 50 diagrams"
    );
}
