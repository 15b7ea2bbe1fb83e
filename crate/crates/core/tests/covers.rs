//! Cover profiles against p-ranks read off brute-force point counts.

mod common;

use common::{brute_p_rank, random_split_curve};
use prymrank::cartier;
use prymrank::covers::{self, CoverRecord};
use prymrank::gf::FieldCtx;
use prymrank::zeta;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn prym_ranks_match_point_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (p, k, g, n) in [(5, 2, 2, 6), (7, 1, 2, 6), (3, 2, 2, 6), (7, 2, 2, 3), (3, 2, 3, 2), (11, 1, 3, 2)] {
        let ctx = FieldCtx::new(p, k, None).unwrap();
        for _ in 0..n {
            let x = random_split_curve(&mut rng, &ctx, g);
            let profile = covers::cover_profile(&x).unwrap();
            assert_eq!(profile.len(), (1 << (2 * g)) - 1);
            for d in &profile {
                assert_eq!(d.quotient1.genus() + d.quotient2.genus(), g - 1);
                let by_counts = brute_p_rank(d.quotient1.f(), d.quotient1.genus()) + brute_p_rank(d.quotient2.f(), d.quotient2.genus());
                assert_eq!(d.f_prime, by_counts, "{} {}", x.encode(), d.partition);
                assert_eq!(d.f, cartier::p_rank(&x).unwrap());
                assert_eq!(d.f_y, d.f + d.f_prime);
                let (prym, cover) = covers::cover_p_rank_zeta(&x, &d.partition, zeta::DEFAULT_COUNT_CAP).unwrap();
                assert_eq!((prym, cover), (d.f_prime, d.f_y));
            }
        }
    }
}

#[test]
fn fiber_product_identity_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (p, k) in [(5, 2), (3, 2), (7, 1)] {
        let ctx = FieldCtx::new(p, k, None).unwrap();
        for _ in 0..5 {
            let x = random_split_curve(&mut rng, &ctx, 2);
            for part in covers::enumerate_even_partitions(&covers::branch_set(&x).unwrap()) {
                for m in 1..=2 {
                    let (direct, rhs) = covers::fiber_product_trace_check(&x, &part, m, 1 << 20).unwrap();
                    assert_eq!(direct as i64, rhs);
                }
            }
        }
    }
}

#[test]
fn records_survive_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let ctx = FieldCtx::new(7, 2, None).unwrap();
    let x = random_split_curve(&mut rng, &ctx, 3);
    for d in covers::cover_profile(&x).unwrap() {
        let text = serde_json::to_string(&d.record()).unwrap();
        assert!(text.contains("\"f_Y\""));
        let back: CoverRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_datum().unwrap(), d);
    }
}

#[test]
fn prym_is_symmetric_in_the_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let ctx = FieldCtx::new(5, 2, None).unwrap();
    for _ in 0..4 {
        let x = random_split_curve(&mut rng, &ctx, 2);
        for d in covers::cover_profile(&x).unwrap() {
            assert_eq!(covers::prym_p_rank(&x, &d.partition.swapped()).unwrap(), d.f_prime);
        }
    }
}
