//! End-to-end acceptance checks. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumset_core::experiments::{
    exhaustive_scan, minima_statistics, random_subset_experiment, sample_subset, ExperimentConfig, MinimaConfig,
};
use sumset_core::lattice::successive_minima;
use sumset_core::sumset::{h_fold_sumset, sumset_profile};
use sumset_core::theory::{construct_cute_set, construct_lemma_set, verify_main_theorem};
use sumset_core::types::{embed_real_to_integers, h_type, product_to_sum, product_type, sum_to_product};
use sumset_core::{BigIntegerSet, BigRationalSet, IntegerSet, SmallIntegerSet};

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `|hA|` by repeated addition into a set, independent of the library's merge.
fn naive_sumset_size(a: &[i64], h: u32) -> usize {
    let mut cur: BTreeSet<i64> = [0].into();
    for _ in 0..h {
        cur = cur.iter().flat_map(|s| a.iter().map(move |x| s + x)).collect();
    }
    cur.len()
}

fn small(v: &[i64]) -> SmallIntegerSet {
    IntegerSet::from_i64s(v).unwrap()
}

fn criterion_1() -> Check {
    let p = sumset_profile(&small(&[0, 2, 18, 25]), 12).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = vec![4, 10, 20, 34, 52, 74, 100, 130, 162, 193, 222, 249];
    let deficits: Vec<i64> = vec![0, 0, 0, 1, 4, 10, 20, 35, 58, 93, 142, 206];
    let diffs: Vec<i64> = vec![0, 0, 1, 3, 6, 10, 15, 23, 35, 49, 64];
    ensure(p.sizes == sizes, || format!("sizes {:?}", p.sizes))?;
    let got_def: Vec<BigInt> = deficits.iter().map(|&d| BigInt::from(d)).collect();
    ensure(p.deficits == got_def, || format!("deficits {:?}", p.deficits))?;
    let got_diff: Vec<BigInt> = diffs.iter().map(|&d| BigInt::from(d)).collect();
    ensure(p.deficit_first_differences == got_diff, || {
        format!("first differences {:?}", p.deficit_first_differences)
    })?;
    Ok("sizes, deficits and first differences match".into())
}

fn criterion_2() -> Check {
    let a = successive_minima(&small(&[0, 2, 18, 25]), 2, 100).map_err(|e| e.to_string())?;
    ensure((a.h1(), a.h2()) == (Some(4), Some(9)), || format!("{{0,2,18,25}}: {:?}", a.minima))?;
    let b = successive_minima(&small(&[1, 5, 96, 100]), 2, 400).map_err(|e| e.to_string())?;
    ensure((b.h1(), b.h2()) == (Some(2), Some(95)), || format!("{{1,5,96,100}}: {:?}", b.minima))?;
    let same_up_to_sign = |got: &[i64], want: &[i64]| got == want || got.iter().zip(want).all(|(g, w)| *g == -w);
    ensure(same_up_to_sign(&b.minimizers[0], &[1, -1, -1, 1]), || format!("y1 {:?}", b.minimizers[0]))?;
    ensure(same_up_to_sign(&b.minimizers[1], &[0, -4, 95, -91]), || format!("y2 {:?}", b.minimizers[1]))?;
    Ok(format!("(4,9) and (2,95); minimizers {:?}", b.minimizers))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    let mut oracle_rows = 0;
    for (n, k, count) in [(200u64, 4usize, 500), (100, 5, 200)] {
        for _ in 0..count {
            let a = sample_subset(&mut rng, n, k);
            let report = verify_main_theorem(&small(&a)).map_err(|e| format!("{a:?}: {e}"))?;
            ensure(report.all_match, || format!("mismatch for {a:?}"))?;
            ensure(report.per_h.len() as u64 == report.h2 - 1, || format!("rows for {a:?}"))?;
            for row in report.per_h.iter().take(12) {
                let naive = naive_sumset_size(&a, row.h as u32);
                ensure(naive as u64 == row.brute_size, || format!("{a:?} h={} naive {naive}", row.h))?;
                oracle_rows += 1;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sets all match; {oracle_rows} rows cross-checked naively"))
}

fn criterion_4() -> Check {
    let mut cases = 0;
    for k in 4..=6 {
        for a in 2..=6u64 {
            for b in a..=6u64 {
                let set: BigIntegerSet = construct_lemma_set(a, b, k).map_err(|e| e.to_string())?;
                let cap = 4 * b + 2;
                let m = successive_minima(&set, 2, cap).map_err(|e| e.to_string())?;
                ensure(m.minima == vec![2 * a, 2 * b], || format!("a={a} b={b} k={k}: {:?}", m.minima))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (a,b,k) cases"))
}

fn criterion_5() -> Check {
    for b in 2..=8u64 {
        let set: SmallIntegerSet = construct_cute_set(b).map_err(|e| e.to_string())?;
        for h in 1..=b as u32 {
            let want = 2 * (h as usize * h as usize + 1);
            let naive = naive_sumset_size(set.elements(), h);
            let fast = h_fold_sumset(&set, h).map_err(|e| e.to_string())?.k();
            ensure(naive == want && fast == want, || format!("b={b} h={h}: naive {naive}, fast {fast}"))?;
        }
    }
    Ok("b = 2..8, all h <= b".into())
}

fn criterion_6() -> Check {
    let hist = exhaustive_scan(70, 4, 6).map_err(|e| e.to_string())?;
    ensure(hist.total == 916_895, || format!("total {}", hist.total))?;
    for (size, count) in [(84, 176_620), (83, 106_252), (80, 155_350), (74, 117_496), (64, 126_278), (49, 84_693)] {
        ensure(hist.count(size) == count, || format!("count[{size}] = {}", hist.count(size)))?;
    }
    let mut by_freq: Vec<(u64, u64)> = hist.counts.iter().map(|(&s, &c)| (c, s)).collect();
    by_freq.sort_unstable_by(|x, y| y.cmp(x));
    let mut dominant: Vec<u64> = by_freq.iter().take(6).map(|&(_, s)| s).collect();
    dominant.sort_unstable_by(|x, y| y.cmp(x));
    let gaps: Vec<u64> = dominant.windows(2).map(|w| w[0] - w[1]).collect();
    ensure(gaps == vec![1, 3, 6, 10, 15], || format!("dominant sizes {dominant:?}"))?;
    Ok(format!("dominant sizes {dominant:?}, gaps {gaps:?}"))
}

fn sampling_config(workers: usize) -> ExperimentConfig {
    ExperimentConfig {
        n: 1000,
        k: 4,
        h: 10,
        samples: 100_000,
        seed: 20_240_601,
        workers,
    }
}

fn criterion_7() -> Check {
    let run = random_subset_experiment(&sampling_config(1)).map_err(|e| e.to_string())?;
    let s = &run.summary;
    let popular: BTreeSet<BigInt> = [285, 282, 276, 266, 251, 230, 202, 166, 121].iter().map(|&v| BigInt::from(v)).collect();
    let reported: BTreeSet<BigInt> = s.popular_sizes.iter().cloned().collect();
    ensure(reported == popular && s.popular_sizes.len() == 9, || format!("popular list {:?}", s.popular_sizes))?;
    ensure((0.76..=0.80).contains(&s.bh_fraction), || format!("B_10 fraction {}", s.bh_fraction))?;
    ensure((0.95..=0.99).contains(&s.popular_coverage), || format!("coverage {}", s.popular_coverage))?;
    Ok(format!("B_10 fraction {:.4}, coverage {:.4}", s.bh_fraction, s.popular_coverage))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(2..=5usize);
        let h = rng.gen_range(1..=4u32);
        let mut xs: Vec<Ratio<BigInt>> = (0..k)
            .map(|_| Ratio::new(BigInt::from(rng.gen_range(-200..=200i64)), BigInt::from(rng.gen_range(1..=50i64))))
            .collect();
        xs.sort();
        xs.dedup();
        if xs.len() < k {
            continue;
        }
        let x = BigRationalSet::new(xs).map_err(|e| e.to_string())?;
        let (a, trace) = embed_real_to_integers(&x, h).map_err(|e| format!("{x}: {e}"))?;
        let want = h_type(&x, h).map_err(|e| e.to_string())?;
        let got = h_type(&a, h).map_err(|e| e.to_string())?;
        ensure(want == got, || format!("type changed for {x} h={h}: {a}"))?;
        let bound = Ratio::new(BigInt::from(1), BigInt::from(2 * h));
        ensure(trace.epsilons.iter().all(|e| e.abs() < bound), || format!("epsilon bound for {x}"))?;
        let zero = Ratio::from_integer(BigInt::from(0));
        ensure(trace.epsilons[0] == zero && trace.epsilons[k - 1] == zero, || {
            format!("endpoint epsilons for {x}")
        })?;
        done += 1;
    }
    Ok(format!("{done} rational sets"))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let k = rng.gen_range(2..=5usize);
        let h = rng.gen_range(1..=3u32);
        let s: BigIntegerSet = IntegerSet::new(sample_subset(&mut rng, 30, k).into_iter().map(BigInt::from).collect())
            .map_err(|e| e.to_string())?;
        let p = sum_to_product(&s).map_err(|e| e.to_string())?;
        let lhs = product_type(&p, h).map_err(|e| e.to_string())?;
        let rhs = h_type(&s, h).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("sum to product changed the type of {s} at h={h}"))?;
    }
    for _ in 0..50 {
        let k = rng.gen_range(2..=5usize);
        let h = rng.gen_range(1..=3u32);
        let p: BigIntegerSet = IntegerSet::new(sample_subset(&mut rng, 40, k).into_iter().map(BigInt::from).collect())
            .map_err(|e| e.to_string())?;
        let s = product_to_sum(&p, h).map_err(|e| format!("{p}: {e}"))?;
        let lhs = h_type(&s, h).map_err(|e| e.to_string())?;
        let rhs = product_type(&p, h).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("product to sum changed the type of {p} at h={h}"))?;
    }
    Ok("100 sum sets and 50 product sets".into())
}

fn minima_config(workers: usize) -> MinimaConfig {
    MinimaConfig {
        n: 10_000,
        k: 4,
        samples: 2000,
        seed: 10,
        cap: 400,
        workers,
    }
}

fn criterion_10() -> Check {
    let s = minima_statistics(&minima_config(1)).map_err(|e| e.to_string())?;
    let root = (10_000f64).sqrt();
    ensure(s.h1_truncation_rate == 0.0, || format!("h1 truncated in {} of samples", s.h1_truncation_rate))?;
    ensure((0.40 * root..=0.60 * root).contains(&s.mean_h1), || format!("mean h1 {}", s.mean_h1))?;
    Ok(format!("mean h1 {:.2} (band [{:.0}, {:.0}]), std {:.2}", s.mean_h1, 0.4 * root, 0.6 * root, s.std_h1))
}

fn criterion_11() -> Check {
    let base = random_subset_experiment(&sampling_config(1)).map_err(|e| e.to_string())?;
    let minima = minima_statistics(&minima_config(1)).map_err(|e| e.to_string())?;
    for workers in [4, 8] {
        let other = random_subset_experiment(&sampling_config(workers)).map_err(|e| e.to_string())?;
        ensure(other.histogram == base.histogram, || format!("random histogram differs with {workers} workers"))?;
        let m = minima_statistics(&minima_config(workers)).map_err(|e| e.to_string())?;
        ensure(m.h1_histogram == minima.h1_histogram && m.h2_histogram == minima.h2_histogram, || {
            format!("minima histograms differ with {workers} workers")
        })?;
        ensure(m.mean_h1.to_bits() == minima.mean_h1.to_bits(), || format!("mean h1 differs with {workers} workers"))?;
    }
    Ok("identical with 1, 4 and 8 workers".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "golden sumset table", Duration::from_secs(1), criterion_1),
        (2, "minima golden values", Duration::from_secs(5), criterion_2),
        (3, "closed form vs brute force", Duration::from_secs(300), criterion_3),
        (4, "prescribed minima grid", Duration::from_secs(60), criterion_4),
        (5, "cute sets", Duration::from_secs(60), criterion_5),
        (6, "exhaustive scan of [70]", Duration::from_secs(120), criterion_6),
        (7, "random 4-subsets of [1000], h = 10", Duration::from_secs(60), criterion_7),
        (8, "rational embedding preserves types", Duration::from_secs(300), criterion_8),
        (9, "sum/product transport", Duration::from_secs(300), criterion_9),
        (10, "minima statistics", Duration::from_secs(300), criterion_10),
        (11, "determinism across worker counts", Duration::from_secs(900), criterion_11),
    ];
    let mut failures = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took longer than {limit:?}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:>2} {tag} [{:>8.2?}] {name}: {detail}", elapsed);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
