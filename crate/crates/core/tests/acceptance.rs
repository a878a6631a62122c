//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Run with `cargo test -p tsgraph-core --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tsgraph::analysis::checks::{
    berry_esseen_check, chernoff_check, stirling_check, budget_check, second_order_residuals,
    wright_convergence_report, JRule,
};
use tsgraph::counting::TypeClassTable;
use tsgraph::graphs::{canonicalize, pair_count, ErModel, LabeledGraph};
use tsgraph::tscode::{build_codebook, class_ordering, Codeword, DEFAULT_MAX_EXACT};

const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    summary: String,
    report: Value,
}

type Criterion = fn() -> Outcome;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn graph_from_mask(n: usize, mask: u64) -> LabeledGraph {
    let m = pair_count(n);
    LabeledGraph::from_bits(n, (0..m).map(|i| mask >> (m - 1 - i) & 1 == 1)).unwrap()
}

fn four_vertex_codebook() -> Outcome {
    let cb = build_codebook(4, DEFAULT_MAX_EXACT).unwrap();
    let lengths = cb.code_lengths();
    let order: Vec<usize> = cb.ordering().edge_counts();
    let code = |edges: &[(usize, usize)]| cb.encode(&LabeledGraph::from_edges(4, edges).unwrap()).unwrap().to_record();
    let examples = [
        ("empty", code(&[]), "(empty)"),
        ("single edge", code(&[(1, 3)]), "0"),
        ("five edges", code(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]), "1"),
        ("K4", code(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), "00"),
    ];
    let pass = cb.total() == 11
        && lengths == [0, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3]
        && order == [0, 1, 5, 6, 2, 4, 3]
        && examples.iter().all(|(_, got, want)| got == want);
    Outcome {
        pass,
        summary: format!("lengths {lengths:?}, class order {order:?}"),
        report: json!({
            "total": cb.total(),
            "lengths": lengths,
            "class_order": order,
            "examples": examples.iter().map(|(k, got, _)| json!([k, got])).collect::<Vec<_>>(),
        }),
    }
}

fn census() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 1..=6usize {
        let m = pair_count(n);
        let mut classes: Vec<BTreeSet<LabeledGraph>> = vec![BTreeSet::new(); m + 1];
        for mask in 0..1u64 << m {
            let s = canonicalize(&graph_from_mask(n, mask));
            classes[s.edge_count()].insert(s.canon().clone());
        }
        let brute: Vec<usize> = classes.iter().map(BTreeSet::len).collect();
        let table = TypeClassTable::compute(n).unwrap();
        let exact: Vec<usize> = table.counts().iter().map(|c| c.to_string().parse().unwrap()).collect();
        pass &= brute == exact;
        rows.push(json!({"n": n, "total": brute.iter().sum::<usize>(), "brute": brute, "exact": exact}));
    }
    let totals: Vec<u64> = rows.iter().map(|r| r["total"].as_u64().unwrap()).collect();
    pass &= totals == [1, 2, 4, 11, 34, 156];
    Outcome {
        pass,
        summary: format!("brute-force census equals exact counts for every j; totals {totals:?}"),
        report: json!(rows),
    }
}

fn round_trip() -> Outcome {
    let mut digest = Sha256::new();
    let mut mismatches = 0u64;
    let mut check = |cb: &tsgraph::tscode::Codebook, g: &LabeledGraph| {
        let code = cb.encode(g).unwrap();
        let back = cb.decode(&code).unwrap();
        if back != canonicalize(g) {
            mismatches += 1;
        }
        digest.update(code.to_record().as_bytes());
        digest.update(b"\n");
    };
    let cb6 = build_codebook(6, DEFAULT_MAX_EXACT).unwrap();
    for mask in 0..1u64 << 15 {
        check(&cb6, &graph_from_mask(6, mask));
    }
    let cb7 = build_codebook(7, DEFAULT_MAX_EXACT).unwrap();
    let model = ErModel::new(0.5, SEED).unwrap();
    let mut rng = model.rng();
    for _ in 0..10_000 {
        check(&cb7, &model.sample_with(7, &mut rng).unwrap());
    }
    // Every codeword also parses back from its record.
    let records_ok = cb7
        .iter()
        .all(|s| Codeword::from_record(&cb7.encode(s.canon()).unwrap().to_record()).is_ok());
    Outcome {
        pass: mismatches == 0 && records_ok,
        summary: format!("{mismatches} mismatches over 32768 + 10000 graphs"),
        report: json!({"mismatches": mismatches, "codeword_digest": hex(&digest.finalize())}),
    }
}

fn budget() -> Outcome {
    let r = budget_check(&[3, 4, 5, 6], &[0.1, 0.3, 0.5, 0.7], &[0.05, 0.1, 0.25], DEFAULT_MAX_EXACT).unwrap();
    let failing: Vec<String> = r.parameters["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|row| row["holds"] == false)
        .map(|row| format!("(n={}, p={}, eps={}: k={} > {})", row["n"], row["p"], row["epsilon"], row["k"], row["ceil_log2_m_epsilon"]))
        .collect();
    Outcome {
        pass: r.verdict.passed(),
        summary: format!(
            "{} violations of 48 {}; strict-threshold reading: {} violations",
            r.observed,
            failing.join(" "),
            r.parameters["strict_threshold_violations"]
        ),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn residual() -> Outcome {
    let r = second_order_residuals(&[4, 5, 6, 7], &[0.2, 0.3], &[0.1, 0.25], DEFAULT_MAX_EXACT).unwrap();
    let mut table = String::from("\n      n    p     eps   k    bound_bits  residual_bits");
    for row in &r.rows {
        table.push_str(&format!(
            "\n      {:<4} {:<4} {:<5} {:<4} {:>10.4} {:>14.4}",
            row.n, row.p, row.epsilon, row.k, row.bound_bits, row.residual_bits
        ));
    }
    Outcome {
        pass: r.verdict().passed(),
        summary: format!(
            "max residual {:.4} bits (limit {}); n 4..5 max {:.4}, n 6..7 max {:.4}{table}",
            r.max_residual, r.limit_bits, r.max_lower_half, r.max_upper_half
        ),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn stirling() -> Outcome {
    let r = stirling_check(10_000, 10_000, SEED).unwrap();
    Outcome {
        pass: r.verdict.passed(),
        summary: format!(
            "{} violations over {} pairs, min margin {:.3e} bits",
            r.observed, r.parameters["evaluated"], r.parameters["min_margin_bits"].as_f64().unwrap()
        ),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn wright() -> Outcome {
    let r = wright_convergence_report(&[10, 20, 30], JRule::Half).unwrap();
    let devs: Vec<String> = r.rows.iter().map(|row| format!("n={}: {:.3e}", row.n, row.deviation)).collect();
    Outcome {
        pass: r.strictly_decreasing && r.rows.last().unwrap().deviation <= 0.05,
        summary: format!("|N/Lambda - 1| {}", devs.join(", ")),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn chernoff() -> Outcome {
    let r = chernoff_check(30, 0.3, 0.5, 100_000, SEED).unwrap();
    let literal = r.parameters["delta2_literal"].as_f64().unwrap();
    let flagged = r.parameters["literal_negative"] == true && !r.notes.is_empty();
    Outcome {
        pass: r.verdict.passed() && flagged && literal < 0.0,
        summary: format!(
            "tail {} <= {:.3e} + {:.3e}; delta2 corrected {:.5}, literal {:.4} flagged",
            r.observed,
            r.bound,
            r.tolerance,
            r.parameters["delta2_corrected"].as_f64().unwrap(),
            literal
        ),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn berry() -> Outcome {
    let r = berry_esseen_check(&[100, 400, 1600, 6400], 0.2, 100_000, SEED, 1.0).unwrap();
    let rows: Vec<String> = r.rows.iter().map(|row| format!("m={}: {:.4}", row.m, row.scaled)).collect();
    Outcome {
        pass: r.verdict.passed(),
        summary: format!("max D_m*sqrt(m) = {:.4} <= 1.0 ({})", r.max_scaled, rows.join(", ")),
        report: serde_json::to_value(&r).unwrap(),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, Option<Duration>); 9] = [
        ("four-vertex codebook", four_vertex_codebook, Some(Duration::from_secs(1))),
        ("counting census", census, Some(Duration::from_secs(120))),
        ("round trip", round_trip, Some(Duration::from_secs(300))),
        ("codeword budget grid", budget, None),
        ("second-order residual", residual, None),
        ("stirling sandwich", stirling, Some(Duration::from_secs(60))),
        ("wright convergence", wright, Some(Duration::from_secs(10))),
        ("chernoff tail", chernoff, None),
        ("berry-esseen", berry, None),
    ];
    let mut all_pass = true;
    let mut first: BTreeMap<usize, String> = BTreeMap::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = outcome.pass && in_time;
        all_pass &= pass;
        let timing = match limit {
            Some(l) => format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        println!(
            "{} criterion {:>2} {name} [{timing}]: {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            outcome.summary
        );
        first.insert(i, serde_json::to_string(&outcome.report).unwrap());
    }

    let start = Instant::now();
    let mut differing = Vec::new();
    for (i, (name, run, _)) in criteria.iter().enumerate() {
        if serde_json::to_string(&run().report).unwrap() != first[&i] {
            differing.push(*name);
        }
    }
    let ordering_stable = (1..=8).all(|n| {
        let t = TypeClassTable::compute(n).unwrap();
        class_ordering(&t).checksum() == class_ordering(&TypeClassTable::compute(n).unwrap()).checksum()
    });
    let pass = differing.is_empty() && ordering_stable;
    all_pass &= pass;
    println!(
        "{} criterion 10 determinism [{:.2}s]: {}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        if pass {
            "all 9 reports byte-identical on rerun".to_string()
        } else {
            format!("reports differ: {differing:?}, ordering stable: {ordering_stable}")
        }
    );

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
