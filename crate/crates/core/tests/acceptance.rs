//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! they run one after another so the time limits are measured on an idle
//! machine.

use std::time::{Duration, Instant};
use tricross_core::brackets::{catalog, validate_template, Family};
use tricross_core::solver::agreement_suite;
use tricross_core::suites::{
    breaker_matches, duality, lemma1_1, maker_matches, safety_suite, secure_suite, MatchSummary, SuiteReport,
};
use tricross_core::{build_hexagonal, build_triangular};

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn suite_detail(r: &SuiteReport) -> String {
    let mut s = format!("{}: {} samples, {} violations, {} ms", r.suite, r.samples, r.violation_count, r.elapsed_ms);
    if !r.missing.is_empty() {
        s += &format!(", missing cases {:?}", r.missing);
    }
    for v in r.violations.iter().take(3) {
        s += &format!("\n      {v}");
    }
    s
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took < limit, format!("{:.1}s of {}s", took.as_secs_f64(), limit.as_secs()))
}

fn boundary_bound() -> Verdict {
    let start = Instant::now();
    let r = lemma1_1(10_000, SEED);
    let (fast, time) = within(Duration::from_secs(60), start);
    Verdict { pass: r.passed() && r.samples >= 10_000 && fast, detail: format!("{} ({time})", suite_detail(&r)) }
}

fn safety() -> Verdict {
    let start = Instant::now();
    let tri = safety_suite(Family::Tri, 10_000, SEED);
    let hex = safety_suite(Family::Hex, 10_000, SEED);
    let (fast, time) = within(Duration::from_secs(600), start);
    let exhaustive = |r: &SuiteReport| r.coverage.get("exhaustive").copied().unwrap_or(0);
    let pass = tri.passed() && hex.passed() && exhaustive(&tri) > 0 && exhaustive(&hex) > 0 && fast;
    Verdict {
        pass,
        detail: format!(
            "{}; exhaustive {}\n    {}; exhaustive {} ({time})",
            suite_detail(&tri),
            exhaustive(&tri),
            suite_detail(&hex),
            exhaustive(&hex)
        ),
    }
}

fn secure_security() -> Verdict {
    let tri = secure_suite(Family::Tri, 10_000, SEED);
    let hex = secure_suite(Family::Hex, 10_000, SEED);
    Verdict {
        pass: tri.passed() && hex.passed() && tri.samples >= 10_000 && hex.samples >= 10_000,
        detail: format!("{}\n    {}", suite_detail(&tri), suite_detail(&hex)),
    }
}

fn match_detail(runs: &[MatchSummary]) -> (bool, String) {
    let games: u64 = runs.iter().map(|r| r.games).sum();
    let wins: u64 = runs.iter().map(|r| r.strategy_wins).sum();
    let mut s = format!("{wins}/{games} won");
    for r in runs.iter().filter(|r| !r.all_won()) {
        s += &format!(
            "\n      {} p={} q={} vs {}: {}/{} {:?}",
            r.board,
            r.p,
            r.q,
            r.opponent,
            r.strategy_wins,
            r.games,
            r.errors.first()
        );
    }
    (runs.iter().all(|r| r.all_won()), s)
}

fn maker() -> Verdict {
    let start = Instant::now();
    let runs = maker_matches(1000, SEED);
    let (fast, time) = within(Duration::from_secs(300), start);
    let (won, detail) = match_detail(&runs);
    let per_board = runs.chunks(4).all(|c| c.iter().map(|r| r.games).sum::<u64>() >= 1000);
    Verdict { pass: won && fast && runs.len() == 36 && per_board, detail: format!("{detail} ({time})") }
}

fn breaker() -> Verdict {
    let start = Instant::now();
    let runs = breaker_matches(1000, SEED);
    let (fast, time) = within(Duration::from_secs(300), start);
    let (won, detail) = match_detail(&runs);
    let per_board = runs.chunks(4).all(|c| c.iter().map(|r| r.games).sum::<u64>() >= 1000);
    Verdict { pass: won && fast && runs.len() == 24 && per_board, detail: format!("{detail} ({time})") }
}

fn bracket_tables() -> Verdict {
    let tri = build_triangular(12, 9).unwrap();
    let hex = build_hexagonal(9, 8).unwrap();
    let mut failures = Vec::new();
    let mut spreads = |family: Family, topo| {
        catalog(family)
            .iter()
            .map(|t| {
                let r = validate_template(t, topo);
                if !r.ok() {
                    failures.push(format!("{family:?} type {}: {:?}", t.type_id, r.failures));
                }
                r.level_spread
            })
            .collect::<Vec<_>>()
    };
    let tri_spreads = spreads(Family::Tri, &tri);
    let hex_spreads = spreads(Family::Hex, &hex);
    let tri_max = tri_spreads.iter().flatten().max().copied();
    let argmax: Vec<usize> =
        tri_spreads.iter().enumerate().filter(|(_, s)| **s == tri_max).map(|(i, _)| i + 1).collect();
    let pass = failures.is_empty()
        && tri_max == Some(2)
        && argmax == [3]
        && hex_spreads == [Some(3), Some(2), Some(2), Some(1), Some(0)];
    Verdict {
        pass,
        detail: format!(
            "tri spreads {tri_spreads:?} (max {tri_max:?} at types {argmax:?}); hex spreads {hex_spreads:?}; {} template failures {failures:?}",
            failures.len()
        ),
    }
}

fn unique_winner() -> Verdict {
    let r = duality(1000, SEED);
    Verdict { pass: r.passed() && r.samples == 3000, detail: suite_detail(&r) }
}

fn solver_agreement() -> Verdict {
    let r = agreement_suite(200, SEED);
    let count = |prefix: &str| r.coverage.iter().filter(|(k, _)| k.starts_with(prefix)).map(|(_, v)| v).sum::<u64>();
    let pass = r.passed() && count("theorem cells") > 0 && count("hand table") > 0;
    Verdict {
        pass,
        detail: format!(
            "{}; theorem cells {}, strategy positions {}, hand-table cases {}",
            suite_detail(&r),
            count("theorem cells"),
            count("strategy positions"),
            count("hand table")
        ),
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("boundary bound", boundary_bound),
        ("single-turn safety", safety),
        ("secure-game security", secure_security),
        ("maker strategy", maker),
        ("breaker strategy", breaker),
        ("bracket tables", bracket_tables),
        ("unique winner", unique_winner),
        ("solver agreement", solver_agreement),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{name}]: {mark}\n    {}", i + 1, v.detail);
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
