//! Acceptance suite. Prints one line per criterion; exits nonzero when a
//! criterion fails other than by an analysed deviation (`Outcome::known`).

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::{brute_count, brute_p_rank, random_curve, random_monic_split_curve};
use prymrank::cartier::{self, HyperellipticCurve};
use prymrank::census::{
    self, CountView, ScanMode, ScanSpec, WitnessBudget, WitnessCertificate, WitnessOutcome, VERIFY_COUNT_CAP,
};
use prymrank::covers::{self, BranchPoint, EvenPartition};
use prymrank::gf::{Field, FieldCtx, FieldElement};
use prymrank::poly::Poly;
use prymrank::symbolic::{self, MvPoly, Var};
use prymrank::zeta;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Pass,
    Fail,
    Warn,
}

struct Outcome {
    status: Status,
    detail: String,
    /// set when a failure matches a documented, analysed deviation
    known: bool,
}

fn verdict(ok: bool, detail: String) -> Outcome {
    Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail, known: false }
}

// ---- criterion 1 ----

const C3: &str = "3λ^2t1^2t2^2 + 3λ^2t1^2t2 + 3λ^2t1t2^2 + 3λt1^2t2^2";
const C4: &str = "λ^2t1^2t2^2 + 4λ^2t1^2t2 + λ^2t1^2 + 4λ^2t1t2^2 + 4λ^2t1t2 + λ^2t2^2 \
                  + 4λt1^2t2^2 + 4λt1^2t2 + 4λt1t2^2 + t1^2t2^2";
const C8: &str = "λ^2 + 4λt1 + 4λt2 + 4λ + t1^2 + 4t1t2 + 4t1 + t2^2 + 4t2 + 1";
const C9: &str = "3λ + 3t1 + 3t2 + 3";

/// (t1 + 4t2)^2 (t1^2 t2 + t1 t2^2 + a^17 t1^2 + a^17 t2^2 + a^5 t1 t2 + a^4 t1 + a^4 t2), evaluated.
fn displayed(ctx: &FieldCtx, a: FieldElement, t1: FieldElement, t2: FieldElement) -> FieldElement {
    let pw = |n| ctx.pow(a, n);
    let lin = ctx.add(t1, ctx.mul(ctx.from_int(4), t2));
    let terms = [
        ctx.mul(ctx.mul(t1, t1), t2),
        ctx.mul(t1, ctx.mul(t2, t2)),
        ctx.mul(pw(17), ctx.mul(t1, t1)),
        ctx.mul(pw(17), ctx.mul(t2, t2)),
        ctx.mul(pw(5), ctx.mul(t1, t2)),
        ctx.mul(pw(4), t1),
        ctx.mul(pw(4), t2),
    ];
    let cubic = terms.iter().fold(ctx.zero(), |s, &t| ctx.add(s, t));
    ctx.mul(ctx.mul(lin, lin), cubic)
}

fn displayed_poly(ctx: &Arc<FieldCtx>, a: FieldElement) -> MvPoly {
    let pw = |n| ctx.pow(a, n);
    let t1 = MvPoly::var(ctx, Var::T1);
    let t2 = MvPoly::var(ctx, Var::T2);
    let lin = t1.add(&t2.scale(ctx.from_int(4)).unwrap()).unwrap();
    let terms = [
        t1.pow(2).mul(&t2).unwrap(),
        t1.mul(&t2.pow(2)).unwrap(),
        t1.pow(2).scale(pw(17)).unwrap(),
        t2.pow(2).scale(pw(17)).unwrap(),
        t1.mul(&t2).unwrap().scale(pw(5)).unwrap(),
        t1.scale(pw(4)).unwrap(),
        t2.scale(pw(4)).unwrap(),
    ];
    let cubic = terms.iter().fold(MvPoly::zero(ctx), |s, t| s.add(t).unwrap());
    lin.pow(2).mul(&cubic).unwrap()
}

fn criterion_1() -> Outcome {
    let f5 = FieldCtx::prime(5).unwrap();
    let m = symbolic::symbolic_cartier_entries(5).unwrap();
    let mut entries_ok = true;
    for (i, text) in [(3, C3), (4, C4), (8, C8), (9, C9)] {
        let got = m.coefficient(i).unwrap();
        entries_ok &= *got == MvPoly::parse(&f5, text).unwrap() && got.to_string() == text.split_whitespace().collect::<Vec<_>>().join(" ");
    }

    let ext = FieldCtx::new(5, 2, None).unwrap();
    let minimal = Poly::from_ints(&f5, &[2, 4, 1]);
    let roots = minimal.roots_in(&ext, 1 << 10).unwrap();
    let d = symbolic::d_poly(5).unwrap();
    let mut literal = Vec::new();
    let mut ratios = Vec::new();
    for &a in &roots {
        let lambda = ext.pow(a, 4);
        let got = d.specialize_in(&ext, [Some(lambda), None, None]).unwrap();
        literal.push(got == displayed_poly(&ext, a));
        // independent of the symbolic code: Cartier determinants of the
        // actual curves over every valid (t1, t2)
        let mut ratio: Option<FieldElement> = None;
        let mut constant = true;
        for t1 in ext.enumerate(1 << 10).unwrap() {
            for t2 in ext.enumerate(1 << 10).unwrap() {
                let pts = [ext.zero(), ext.one(), lambda, t1, t2];
                if (0..5).any(|i| (0..i).any(|j| pts[i] == pts[j])) {
                    continue;
                }
                let x = HyperellipticCurve::new(Poly::from_roots(&ext, &pts).unwrap()).unwrap();
                let det = cartier::cartier_matrix(&x).determinant();
                let want = displayed(&ext, a, t1, t2);
                match (want.is_zero(), det.is_zero()) {
                    (true, true) => {}
                    (true, false) | (false, true) => constant = false,
                    (false, false) => {
                        let r = ext.mul(det, ext.inv(want).unwrap());
                        constant &= ratio.map_or(true, |q| q == r);
                        ratio = Some(r);
                    }
                }
            }
        }
        ratios.push(ratio.filter(|_| constant).map(|r| (r, r == ext.pow(a, 15))));
    }
    let exact = literal.iter().filter(|&&b| b).count();
    let a15_both = roots.len() == 2 && ratios.iter().all(|r| matches!(r, Some((_, true))));
    let detail = format!(
        "c3, c4, c8, c9 term-for-term: {}; literal D equality holds for {exact} of {} roots of x^2+4x+2; \
         Cartier determinants over all valid (t1,t2) give D = a^15 * displayed for {} of them",
        if entries_ok { "yes" } else { "NO" },
        roots.len(),
        ratios.iter().filter(|r| matches!(r, Some((_, true)))).count(),
    );
    let ok = entries_ok && exact == 1;
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
        // the displayed factorization omits the unit a^15; nothing else differs
        known: !ok && entries_ok && exact == 0 && a15_both,
    }
}

// ---- criterion 2 ----

fn criterion_2() -> Outcome {
    let ctx = FieldCtx::new(5, 2, Some(&[2, 4, 1])).unwrap();
    let a = ctx.generator();
    let lambda = ctx.pow(a, 4);
    let mut notes = Vec::new();
    let mut ok = true;

    // H_5 = 1 + 4λ + λ^2, and the Legendre curve's trace vanishes mod 5
    let h = ctx.add(ctx.add(ctx.one(), ctx.mul(ctx.from_int(4), lambda)), ctx.mul(lambda, lambda));
    let e = Poly::from_roots(&ctx, &[ctx.zero(), ctx.one(), lambda]).unwrap();
    let trace = 26 - brute_count(&e, 1) as i64;
    let ss = h.is_zero() && trace % 5 == 0 && cartier::is_supersingular_lambda(&ctx, &lambda).unwrap();
    ok &= ss;
    notes.push(format!("λ = a^4 supersingular: {ss} (trace {trace})"));

    let (t1, t2) = (ctx.pow(a, 16), a);
    let x = HyperellipticCurve::new(Poly::from_roots(&ctx, &[ctx.zero(), ctx.one(), lambda, t1, t2]).unwrap()).unwrap();
    let ranks = (cartier::p_rank(&x).unwrap(), zeta::p_rank_zeta(&x).unwrap(), brute_p_rank(x.f(), 2));
    ok &= ranks == (1, 1, 1);
    notes.push(format!("(a^16, a) p-rank by Cartier/zeta/enumeration: {ranks:?}"));

    let branch = covers::branch_set(&x).unwrap();
    let part = vec![BranchPoint::Infinity, BranchPoint::Finite(ctx.zero()), BranchPoint::Finite(ctx.one()), BranchPoint::Finite(lambda)];
    let partition = EvenPartition::new(&branch, part).unwrap();
    let fp = covers::prym_p_rank(&x, &partition).unwrap();
    let (fp_zeta, _) = covers::cover_p_rank_zeta(&x, &partition, zeta::DEFAULT_COUNT_CAP).unwrap();
    ok &= fp == 0 && fp_zeta == 0;
    notes.push(format!("cover {partition}: f' = {fp} (zeta {fp_zeta})"));

    let f5 = FieldCtx::prime(5).unwrap();
    let quintic = HyperellipticCurve::new(Poly::from_ints(&f5, &[0, 3, 2, 0, 1, 1])).unwrap();
    let rank = (cartier::p_rank(&quintic).unwrap(), zeta::p_rank_zeta(&quintic).unwrap(), brute_p_rank(quintic.f(), 2));
    // splitting field by brute force: smallest F_{5^k} containing all 5 roots
    let k = (1..=6)
        .find(|&k| {
            let ext = FieldCtx::new(5, k, None).unwrap();
            quintic.f().roots_in(&ext, 1 << 16).unwrap().len() == 5
        })
        .unwrap();
    let ext = FieldCtx::new(5, k, None).unwrap();
    let split = HyperellipticCurve::new(quintic.f().lift(&ext, 1 << 16).unwrap()).unwrap();
    let profile = covers::cover_profile(&split).unwrap();
    let zero: Vec<_> = profile.iter().filter(|d| (d.f, d.f_prime) == (0, 0)).collect();
    // the elliptic part of each (0,0) cover, recounted by enumeration
    let zero_checked = zero.iter().all(|d| {
        brute_p_rank(d.quotient1.f(), d.quotient1.genus()) + brute_p_rank(d.quotient2.f(), d.quotient2.genus()) == 0
    });
    ok &= rank == (0, 0, 0) && !zero.is_empty() && zero_checked;
    notes.push(format!(
        "y^2 = x(x^4+x^3+2x+3): p-rank {rank:?}, splits over F_{}, {} of {} covers are (0,0)",
        5u64.pow(k as u32),
        zero.len(),
        profile.len()
    ));
    verdict(ok, notes.join("; "))
}

// ---- criterion 3 ----

fn criterion_3() -> Outcome {
    const CURVES: u64 = 500;
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for p in [3u32, 5, 7, 11, 13] {
        for g in 1..=3usize {
            for k in 1..=2usize {
                let q = (p as u128).pow(k as u32);
                if q.pow(g as u32) > zeta::DEFAULT_COUNT_CAP {
                    skipped.push(format!("p={p} g={g} F_{q}"));
                } else {
                    cells.push((p, g, k));
                }
            }
        }
    }
    let work: Vec<(u32, usize, usize, u64)> =
        cells.iter().flat_map(|&(p, g, k)| (0..CURVES).map(move |i| (p, g, k, i))).collect();
    let mismatches: Vec<String> = work
        .par_iter()
        .filter_map(|&(p, g, k, i)| {
            let ctx = FieldCtx::new(p, k, None).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(((p as u64) << 40) ^ ((g as u64) << 36) ^ ((k as u64) << 32) ^ i);
            let x = random_curve(&mut rng, &ctx, g);
            let (a, b) = (cartier::p_rank(&x).unwrap(), zeta::p_rank_zeta(&x).unwrap());
            (a != b).then(|| format!("{} over {}: {a} vs {b}", x.encode(), ctx.spec()))
        })
        .collect();
    verdict(
        mismatches.is_empty(),
        format!(
            "{} cells x {CURVES} curves, {} mismatches; skipped (counting cap): {}{}",
            cells.len(),
            mismatches.len(),
            skipped.join(", "),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

// ---- criterion 4 ----

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for p in [5u32, 7] {
        let ctx = FieldCtx::new(p, 2, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(400 + p as u64);
        for _ in 0..100 {
            let x = random_monic_split_curve(&mut rng, &ctx, 2);
            let parts = covers::enumerate_even_partitions(&covers::branch_set(&x).unwrap());
            let part = &parts[rng.gen_range(0..parts.len())];
            let c1 = covers::subcurve_from_part(part.part1(), &ctx).unwrap();
            let c2 = covers::subcurve_from_part(part.part2(), &ctx).unwrap();
            n += 1;
            for m in 1..=2 {
                let qm = (p as i64).pow(2 * m as u32);
                let trace = |f: &Poly| qm + 1 - brute_count(f, m) as i64;
                let direct = zeta::count_fiber_product_points(c1.f(), c2.f(), m).unwrap() as i64;
                let predicted = qm + 1 - trace(x.f()) - trace(c1.f()) - trace(c2.f());
                if direct != predicted {
                    bad.push(format!("{} {part} m={m}: {direct} vs {predicted}", x.encode()));
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("{n} covers over F_25 and F_49, checked over F_q and F_q^2; {} failures{}", bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()),
    )
}

// ---- criteria 5 and 7 ----

/// Both recomputation routes, plus enumeration for genus 2.
fn certificate_holds(c: &WitnessCertificate) -> bool {
    let check = c.verify(VERIFY_COUNT_CAP).unwrap();
    if !check.reproduces(c.target) {
        return false;
    }
    if c.genus == 2 {
        let datum = c.cover.to_datum().unwrap();
        let f = brute_p_rank(datum.base.f(), 2);
        let fp = brute_p_rank(datum.quotient1.f(), datum.quotient1.genus())
            + brute_p_rank(datum.quotient2.f(), datum.quotient2.genus());
        return (f, fp) == c.target;
    }
    true
}

fn criterion_5() -> Outcome {
    let budget = WitnessBudget { max_k: 4, escalate_k: 6, ..WitnessBudget::default() };
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for p in [5u32, 7] {
        for f in 0..=2 {
            for fp in 0..=1 {
                match census::witness_search(p, 2, (f, fp), &budget).unwrap() {
                    WitnessOutcome::Found { certificate: c, .. } if certificate_holds(&c) => {
                        found.push(format!("p={p} ({f},{fp}) F_{}{}", (p as u64).pow(c.k as u32), if c.escalated { " escalated" } else { "" }))
                    }
                    WitnessOutcome::Found { .. } => missing.push(format!("p={p} ({f},{fp}) certificate did not verify")),
                    WitnessOutcome::Exhausted { .. } => missing.push(format!("p={p} ({f},{fp}) not found for k <= 6")),
                }
            }
        }
    }
    verdict(missing.is_empty(), format!("{}{}", found.join(", "), if missing.is_empty() { String::new() } else { format!("; missing: {}", missing.join(", ")) }))
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 1..=3 {
        let t = census::scan(&ScanSpec::new(3, k, 2, ScanMode::Exhaustive)).unwrap();
        let bad = t.count((0, 0), CountView::Covers) + t.count((1, 0), CountView::Covers);
        ok &= bad == 0;
        notes.push(format!("F_{}: {} curves, {bad} covers in (0,0)/(1,0)", t.q, t.total));
    }
    let budget = WitnessBudget { max_k: 3, escalate_k: 3, ..WitnessBudget::default() };
    for target in [(0, 0), (1, 0)] {
        let outcome = census::witness_search(3, 2, target, &budget).unwrap();
        let exhaustive = outcome.searched().iter().all(|s| s.mode == "exhaustive");
        ok &= outcome.certificate().is_none() && exhaustive;
        notes.push(format!("witness search {target:?}: {}", if outcome.certificate().is_none() { "exhausted" } else { "FOUND" }));
    }
    verdict(ok, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let budget = WitnessBudget { max_k: 3, escalate_k: 4, ..WitnessBudget::default() };
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for f in 0..=3 {
        for fp in [2, 1] {
            match census::witness_search(5, 3, (f, fp), &budget).unwrap() {
                WitnessOutcome::Found { certificate: c, .. } if certificate_holds(&c) => {
                    found.push(format!("({f},{fp}) F_{}", 5u64.pow(c.k as u32)))
                }
                WitnessOutcome::Found { .. } => missing.push(format!("({f},{fp}) certificate did not verify")),
                WitnessOutcome::Exhausted { .. } => missing.push(format!("({f},{fp}) not found")),
            }
        }
    }
    let mut zero = Vec::new();
    for f in 0..=3 {
        let s = match census::witness_search(5, 3, (f, 0), &budget).unwrap() {
            WitnessOutcome::Found { certificate: c, .. } => {
                let zeta_ran = c.verify(VERIFY_COUNT_CAP).unwrap().zeta.is_some();
                format!(
                    "({f},0) found over F_{} ({}{})",
                    5u64.pow(c.k as u32),
                    if certificate_holds(&c) { "verified" } else { "NOT verified" },
                    if zeta_ran { "" } else { ", Cartier only" }
                )
            }
            WitnessOutcome::Exhausted { .. } => format!("({f},0) not found"),
        };
        zero.push(s);
    }
    verdict(
        missing.is_empty(),
        format!(
            "{}{}; f' = 0 (reported only): {}; {}",
            found.join(", "),
            if missing.is_empty() { String::new() } else { format!("; missing: {}", missing.join(", ")) },
            zero.join(", "),
            census::SLICE_LABEL
        ),
    )
}

// ---- criterion 8 ----

fn criterion_8() -> Outcome {
    let tables: Vec<_> = [2, 3]
        .iter()
        .map(|&k| census::scan(&ScanSpec::new(5, k, 2, ScanMode::Exhaustive)).unwrap())
        .collect();
    let mut warn = Vec::new();
    let mut parts = Vec::new();
    for (stratum, lo, hi) in [((2, 1), 2.5, 3.5), ((2, 0), 1.5, 2.5)] {
        let counts: Vec<(u64, u64)> = tables.iter().map(|t| (t.q, t.count(stratum, CountView::Curves))).collect();
        let step = &census::growth_steps(&counts)[0];
        let e = step.exponent;
        parts.push(format!(
            "{stratum:?}: {} -> {} curves, exponent {}",
            step.count_small,
            step.count_large,
            e.map_or("undefined".to_string(), |e| format!("{e:.2}"))
        ));
        if !e.map_or(false, |e| (lo..=hi).contains(&e)) {
            warn.push(format!("{stratum:?} outside [{lo}, {hi}]"));
        }
    }
    if !warn.is_empty() {
        parts.push(format!("warning: {}", warn.join(", ")));
    }
    Outcome { status: if warn.is_empty() { Status::Pass } else { Status::Warn }, detail: parts.join("; "), known: false }
}

// ---- criterion 9 ----

fn criterion_9() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["census", "--p", "5", "--k", "3", "--mode", "random", "--seed", "42", "--samples", "20000", "--format", "csv"],
        &["census", "--p", "7", "--k", "2", "--genus", "3", "--mode", "random", "--seed", "3", "--samples", "5000", "--format", "json"],
        &["witness", "--p", "5", "--genus", "3", "--target", "0,0", "--max-k", "3", "--seed", "1", "--format", "json"],
        &["explore", "--question", "Q9.5-table", "--p", "5", "--max-k", "2", "--seed", "5", "--format", "json"],
    ];
    let mut bad = Vec::new();
    for args in runs {
        let run = || Command::new(env!("CARGO_BIN_EXE_prymrank")).args(args).output().unwrap();
        let (a, b) = (run(), run());
        if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
            bad.push(args.join(" "));
        }
    }
    let spec = ScanSpec::new(7, 3, 2, ScanMode::Random { seed: 11, samples: 50_000 });
    let lib_same = census::scan(&spec).unwrap().to_csv(CountView::Covers).unwrap()
        == census::scan(&spec).unwrap().to_csv(CountView::Covers).unwrap();
    if !lib_same {
        bad.push("library random scan".into());
    }
    verdict(bad.is_empty(), format!("{} seeded commands repeated{}", runs.len() + 1,
        if bad.is_empty() { ", byte-identical".to_string() } else { format!("; differ: {}", bad.join(" | ")) }))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("golden symbolic", criterion_1),
        ("golden witnesses", criterion_2),
        ("oracle equivalence", criterion_3),
        ("fiber-product trace identity", criterion_4),
        ("genus 2 strata non-empty at p = 5, 7", criterion_5),
        ("p = 3 emptiness for k <= 3", criterion_6),
        ("genus 3 witnesses at p = 5", criterion_7),
        ("dimension growth", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let label = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
        };
        let known = if o.status == Status::Fail && o.known { " [known deviation]" } else { "" };
        println!("criterion {} ({name}): {label}{known} in {:.1}s: {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
        if o.status == Status::Fail && !o.known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
