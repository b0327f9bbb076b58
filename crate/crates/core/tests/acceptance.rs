//! Acceptance gate: one test per criterion, each printing a single
//! `acceptance: <name>: PASS` line (visible with `--nocapture`) and
//! enforcing its runtime budget. Tolerances and budgets are pinned here.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valuegrep_core::baselines::{
    boyer_moore_search, kmp_search, naive_search, rabin_karp_search, RkParams,
};
use valuegrep_core::harness::{
    check_svg, parse_results_csv, render_spurious_chart, run_experiment, write_results_csv,
    ExperimentConfig,
};
use valuegrep_core::{
    default_table, pattern_value, search, window_values_naive, window_values_rolling, FormulaSpec,
    Table,
};

/// Absolute tolerance for frozen example values.
const ABS_TOLERANCE: f64 = 1e-9;
/// Bound on |naive - rolling| / max(1, |naive|).
const REL_DEVIATION_BOUND: f64 = 1e-9;
/// Relative tolerance handed to the matcher when hunting planted patterns.
const MATCH_TOLERANCE: f64 = 1e-9;
/// Required rolling-over-naive scorer throughput ratio.
const SPEEDUP_FLOOR: f64 = 5.0;

fn report(name: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance: {name}: PASS in {elapsed:.3}s (budget {budget_s}s)");
    assert!(
        elapsed <= budget_s,
        "{name} exceeded its {budget_s}s budget: {elapsed:.3}s"
    );
}

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn table() -> Table {
    default_table()
}

fn eq(n: u8, k: u32) -> FormulaSpec {
    FormulaSpec::from_number(n, k).unwrap()
}

fn random_letters(rng: &mut ChaCha8Rng, n: usize, alphabet: usize) -> Vec<char> {
    (0..n)
        .map(|_| char::from(b'A' + rng.gen_range(0..alphabet) as u8))
        .collect()
}

#[test]
fn criterion_1_worked_example() {
    let started = Instant::now();
    let table = table();
    let spec = eq(1, 1);

    let vp = pattern_value(&spec, &table, &chars("ABCDE")).unwrap();
    assert!(
        (vp - 29.393).abs() <= ABS_TOLERANCE,
        "pattern score {vp} != 29.393"
    );

    let series = window_values_naive(&spec, &table, &chars("ABCDEFGH"), 5).unwrap();
    let expected = [29.393, 23.454, 23.977, 27.291];
    assert_eq!(series.window_count(), expected.len());
    for (j, &want) in expected.iter().enumerate() {
        let got = series.get(j).unwrap();
        assert!(
            (got - want).abs() <= ABS_TOLERANCE,
            "window {j}: {got} != {want}"
        );
    }
    report("worked example", started, 1.0);
}

#[test]
fn criterion_2_collision_pairs() {
    let started = Instant::now();
    let table = table();

    // Linear positional weights, all signs positive: the mirrored anagram
    // pair scores identically.
    let spec5 = eq(5, 1);
    let a = pattern_value(&spec5, &table, &chars("AAADEF")).unwrap();
    let b = pattern_value(&spec5, &table, &chars("FFFDEA")).unwrap();
    assert!((a - b).abs() <= ABS_TOLERANCE, "expected collision: {a} vs {b}");
    assert!((a - 142.888).abs() <= ABS_TOLERANCE, "shared score is {a}");

    // Same weights, head-positive-rest-negative signs: this pair does NOT
    // collide (the scores sit about 2.024 apart), and the gate documents
    // that by asserting the inequality.
    let spec6 = eq(6, 1);
    let t = pattern_value(&spec6, &table, &chars("FFCFD")).unwrap();
    let p = pattern_value(&spec6, &table, &chars("DDCFD")).unwrap();
    assert!(
        (t - p).abs() > 1.0,
        "FFCFD/DDCFD unexpectedly collide: {t} vs {p}"
    );

    // Head-and-odd-positive signs zero out every constant string.
    let spec7 = eq(7, 1);
    let aaa = pattern_value(&spec7, &table, &chars("AAA")).unwrap();
    let bbb = pattern_value(&spec7, &table, &chars("BBB")).unwrap();
    assert!((aaa - bbb).abs() <= ABS_TOLERANCE);
    assert!(aaa.abs() <= ABS_TOLERANCE);

    report("collision pairs", started, 1.0);
}

#[test]
fn criterion_3_verified_search() {
    let started = Instant::now();
    let table = table();
    let text = chars("CABACBCBABCABAC");
    let pattern = chars("ABC");

    let report_out = search(&eq(1, 1), &table, &text, &pattern, MATCH_TOLERANCE, true).unwrap();

    // Independent oracle: under uniform unit weights two windows score
    // equally exactly when they are anagrams, so the candidate set must be
    // the anagram windows.
    let mut sorted_pattern = pattern.clone();
    sorted_pattern.sort_unstable();
    let oracle: Vec<usize> = (0..=text.len() - pattern.len())
        .filter(|&j| {
            let mut window = text[j..j + pattern.len()].to_vec();
            window.sort_unstable();
            window == sorted_pattern
        })
        .collect();
    assert_eq!(oracle, vec![0, 2, 3, 6, 8, 9, 10, 12]);
    assert_eq!(report_out.candidates, oracle);
    assert_eq!(report_out.confirmed, vec![8]);
    assert_eq!(report_out.spurious.len(), 7);

    report("verified search", started, 1.0);
}

#[test]
fn criterion_4_rolling_equals_naive() {
    let started = Instant::now();
    let table = table();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);

    let mut instances = 0usize;
    let mut worst = 0f64;
    while instances < 1200 {
        let number = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=3);
        let spec = eq(number, k);
        let n = rng.gen_range(1..=512);
        let m = rng.gen_range(1..=n);
        let text = random_letters(&mut rng, n, 26);
        let naive = window_values_naive(&spec, &table, &text, m).unwrap();
        let rolling = window_values_rolling(&spec, &table, &text, m).unwrap();
        for (a, b) in naive.values().iter().zip(rolling.values()) {
            let dev = (a - b).abs() / a.abs().max(1.0);
            worst = worst.max(dev);
        }
        instances += 1;
    }
    assert!(
        worst <= REL_DEVIATION_BOUND,
        "worst relative deviation {worst:e} over {instances} instances"
    );

    report("rolling equals naive on 1200 random instances", started, 30.0);
}

#[test]
fn criterion_5_searchers_agree() {
    let started = Instant::now();
    let table = table();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0005);
    let spec = eq(1, 1);

    for trial in 0..10_000usize {
        let alphabet = [1usize, 2, 4, 26][trial % 4];
        let n = rng.gen_range(1..=128);
        let m = rng.gen_range(1..=n.min(16));
        let text = random_letters(&mut rng, n, alphabet);
        let pattern: Vec<char> = if trial % 2 == 0 {
            let start = rng.gen_range(0..=n - m);
            text[start..start + m].to_vec()
        } else {
            random_letters(&mut rng, m, alphabet)
        };

        let expected = naive_search(&text, &pattern).unwrap();
        assert_eq!(kmp_search(&text, &pattern).unwrap(), expected);
        assert_eq!(
            rabin_karp_search(&text, &pattern, &RkParams::default()).unwrap().0,
            expected
        );
        assert_eq!(boyer_moore_search(&text, &pattern).unwrap().0, expected);
        let verified = search(&spec, &table, &text, &pattern, MATCH_TOLERANCE, true).unwrap();
        assert_eq!(verified.confirmed, expected);
    }

    report("all searchers agree on 10000 random instances", started, 60.0);
}

#[test]
fn criterion_6_spurious_growth_experiment() {
    let started = Instant::now();
    let table = table();
    let config = ExperimentConfig::default();
    assert_eq!(config.corpus_sizes, (1..=10).map(|i| i * 10_000).collect::<Vec<_>>());
    assert_eq!(config.alphabet, "ACGT");
    assert_eq!((config.formula, config.k), (1, 1));

    let rows = run_experiment(&config, &table).unwrap();
    assert_eq!(rows.len(), 10);
    for pair in rows.windows(2) {
        assert!(
            pair[0].spurious <= pair[1].spurious,
            "spurious counts decreased: {} then {}",
            pair[0].spurious,
            pair[1].spurious
        );
    }
    assert!(
        rows.last().unwrap().spurious > 0,
        "no spurious hits at the largest corpus size"
    );

    let csv = write_results_csv(&config, &rows);
    let (parsed_config, parsed_rows) = parse_results_csv(&csv).unwrap();
    assert_eq!(parsed_config, config);
    assert_eq!(parsed_rows.len(), 10);
    assert_eq!(parsed_rows, rows);

    let svg = render_spurious_chart(&rows);
    check_svg(&svg).expect("chart must be well-formed 800x600 SVG");

    report("spurious growth experiment", started, 600.0);
}

#[test]
fn criterion_7_rolling_throughput() {
    let started = Instant::now();
    let table = table();
    let spec = eq(5, 1);
    let m = 64usize;

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0007);
    let text = random_letters(&mut rng, 10_000_000, 26);

    let time_best = |f: &mut dyn FnMut()| {
        let mut best = f64::INFINITY;
        for _ in 0..2 {
            let t0 = Instant::now();
            f();
            best = best.min(t0.elapsed().as_secs_f64());
        }
        best
    };
    let naive_s = time_best(&mut || {
        std::hint::black_box(window_values_naive(&spec, &table, &text, m).unwrap());
    });
    let rolling_s = time_best(&mut || {
        std::hint::black_box(window_values_rolling(&spec, &table, &text, m).unwrap());
    });

    let speedup = naive_s / rolling_s;
    println!(
        "acceptance:   naive {naive_s:.3}s, rolling {rolling_s:.3}s, speedup {speedup:.1}x"
    );
    assert!(
        speedup >= SPEEDUP_FLOOR,
        "rolling speedup {speedup:.2}x below {SPEEDUP_FLOOR}x"
    );

    // The two scorers must still agree on this instance.
    let naive = window_values_naive(&spec, &table, &text[..4096], m).unwrap();
    let rolling = window_values_rolling(&spec, &table, &text[..4096], m).unwrap();
    for (a, b) in naive.values().iter().zip(rolling.values()) {
        assert!((a - b).abs() / a.abs().max(1.0) <= REL_DEVIATION_BOUND);
    }

    report("rolling throughput on 10M symbols", started, 120.0);
}

#[test]
fn criterion_8_planted_patterns_are_candidates() {
    let started = Instant::now();
    let table = table();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0008);

    let mut trials = 0usize;
    while trials < 1200 {
        let number = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=3);
        let spec = eq(number, k);
        let m = rng.gen_range(1..=64);
        let n = rng.gen_range(m..=2048.max(m));
        let mut text = random_letters(&mut rng, n, 26);
        let pattern = random_letters(&mut rng, m, 26);
        let planted_at = rng.gen_range(0..=n - m);
        text[planted_at..planted_at + m].copy_from_slice(&pattern);

        let report_out = search(&spec, &table, &text, &pattern, MATCH_TOLERANCE, true).unwrap();
        assert!(
            report_out.candidates.contains(&planted_at),
            "eq{number}(k={k}), n={n}, m={m}: planted offset {planted_at} missing from candidates"
        );
        assert!(report_out.confirmed.contains(&planted_at));
        trials += 1;
    }

    report("planted patterns always candidates (1200 trials)", started, 30.0);
}
