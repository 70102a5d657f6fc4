//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use braceops::calibration::{calibrate, calibrate_with};
use braceops::cohomology::{
    check_corolla_cocycle, cohomology, e1_prediction, e2_prediction, fork_checks, h_vbul_prediction, in_image_of_delta,
    spectral_pages, vbul_span_check, vcirc_string_classes, Which,
};
use braceops::expr::eval;
use braceops::fixtures::{builtin, check_all};
use braceops::operad::{act_vec, ger_dims, insert_vec, t_bracket, t_cup, t_product, Permutation};
use braceops::report::{run_suite, Status, Suite};
use braceops::shuffle::{colie_dim, xi_generators};
use braceops::sign::delta_vec;
use braceops::{SignConvention, TreeVector};
use serde_json::Value;

type Outcome = (bool, String);

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn nonzero(mut d: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    d.retain(|_, v| *v > 0);
    d
}

fn suite_checks(suite: Suite, max_n: usize, prefix: &str) -> (usize, Vec<String>) {
    let report = run_suite(suite, max_n).expect("suite runs");
    let relevant: Vec<_> = report.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    let failed = relevant.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.clone()).collect();
    (relevant.len(), failed)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let fresh = calibrate_with(&builtin());
    let elapsed = start.elapsed();
    let Ok(cal) = fresh else { return (false, format!("{:?}", fresh.err())) };
    let outcomes = check_all(&builtin(), &cal.convention);
    let all = outcomes.iter().all(|o| o.pass);
    let terms = |name: &str| builtin().into_iter().find(|f| f.name == name).and_then(|f| eval(&f.expect).ok()).map(|v| v.len());
    let six = terms("delta_six_labels");
    let five = terms("insert_string_into_cup");
    let quarter = eval("(m 3)").ok().map(|v| v.len() == 4 && v.iter().all(|(_, c)| *c == braceops::vector::q(1, 4)));
    let signs: Vec<i64> = eval("(insert (r (2 (1))) 2 (r (* (1) (2))))")
        .map(|v| v.sorted_terms().iter().map(|(_, c)| if *c > braceops::vector::q_int(0) { 1 } else { -1 }).collect())
        .unwrap_or_default();
    let ok = cal.convention == SignConvention::STANDARD
        && cal.rejected.len() == SignConvention::candidates().len() - 1
        && all
        && six == Some(8)
        && five == Some(5)
        && quarter == Some(true)
        && elapsed < Duration::from_secs(1);
    (
        ok,
        format!(
            "unique convention out of {}, {}/{} fixtures reproduced, delta example {:?} terms, insertion example {:?} terms (signs by tree order {:?}), quarter terms {:?}, {:?}",
            SignConvention::candidates().len(),
            outcomes.iter().filter(|o| o.pass).count(),
            outcomes.len(),
            six,
            five,
            signs,
            quarter,
            elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (count, failed) = suite_checks(Suite::DgAxioms, 4, "dg-axioms/");
    let elapsed = start.elapsed();
    let ok = failed.is_empty() && count > 0 && elapsed < Duration::from_secs(60);
    (ok, format!("{count} checks (delta squared, transpose, sectors for n=1..4; Leibniz total arity <= 4; operad axioms), failed {failed:?}, {elapsed:?}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let sw = Permutation::from_images(vec![2, 1, 3]).unwrap();
    let nested = insert_vec(&t_bracket(), 1, &t_bracket());
    let mut jacobi = nested.clone();
    jacobi.add(&act_vec(&Permutation::from_cycles(3, "(1,2,3)").unwrap(), &nested));
    jacobi.add(&act_vec(&Permutation::from_cycles(3, "(1,3,2)").unwrap(), &nested));

    let mut assoc = insert_vec(&t_product(), 1, &t_product());
    assoc.sub(&insert_vec(&t_product(), 2, &t_product()));
    let w42 = in_image_of_delta(3, &assoc);

    let mut leib = insert_vec(&t_bracket(), 2, &t_product());
    leib.sub(&insert_vec(&t_product(), 1, &t_bracket()));
    leib.sub(&act_vec(&sw, &insert_vec(&t_product(), 2, &t_bracket())));
    let w43 = in_image_of_delta(3, &leib);
    let witness_ok = |v: &TreeVector, w: &braceops::cohomology::Witness| {
        w.holds && delta_vec(&TreeVector::from_json(&w.preimage).expect("witness parses")) == *v
    };

    let mut exact = insert_vec(&t_bracket(), 2, &t_cup());
    exact.sub(&insert_vec(&t_cup(), 1, &t_bracket()));
    exact.sub(&act_vec(&sw, &insert_vec(&t_cup(), 2, &t_bracket())));
    let exact_ok = exact == delta_vec(&TreeVector::from_tree("(r (1 (2) (3)))".parse().unwrap()));
    let elapsed = start.elapsed();
    let ok = jacobi.is_zero()
        && witness_ok(&assoc, &w42)
        && witness_ok(&leib, &w43)
        && exact_ok
        && elapsed < Duration::from_secs(5);
    (
        ok,
        format!(
            "Jacobi zero {}, associator witness {}, Leibniz witness {}, exact Leibniz {}, {elapsed:?}",
            jacobi.is_zero(),
            witness_ok(&assoc, &w42),
            witness_ok(&leib, &w43),
            exact_ok
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut lines = Vec::new();
    for n in 1..=4 {
        let h = nonzero(cohomology(n, Which::Br, false));
        let top = h.get(&(1 - n as i32)).copied().unwrap_or(0);
        let total: usize = h.values().sum();
        ok &= h == ger_dims(n) && top == factorial(n - 1) && total == factorial(n);
        lines.push(format!("n={n} H^{}={top} total={total}", 1 - n as i32));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(300);
    (ok, format!("{}, {elapsed:?}", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in 2..=4 {
        let h = nonzero(cohomology(n, Which::Vcirc, true));
        let r = vcirc_string_classes(n, 20, 1000 + n as u64);
        let conc = h == BTreeMap::from([(n as i32 - 1, factorial(n))]);
        ok &= conc && r.concentrated && r.string_rank_mod_image == factorial(n) && r.witnesses_checked == 20 && r.witnesses_ok == 20;
        lines.push(format!("n={n} {h:?} strings rank {} witnesses {}/{}", r.string_rank_mod_image, r.witnesses_ok, r.witnesses_checked));
    }
    (ok, lines.join(", "))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in 2..=4 {
        let h = nonzero(cohomology(n, Which::Vbul, false));
        let predicted = h_vbul_prediction(n);
        let (count, rank, expected) = vbul_span_check(n);
        let pages: BTreeMap<String, BTreeMap<(usize, i32), usize>> = spectral_pages(n).into_iter().map(|p| (p.r.clone(), p.as_map())).collect();
        let e1 = &pages["1"];
        let e2 = pages.get("2").unwrap_or(&pages["inf"]);
        let einf = &pages["inf"];
        let u_part = count == factorial(n) - factorial(n - 1) && rank == expected;
        let good = h == predicted && u_part && e1 == &e1_prediction(n) && e2 == einf && e2 == &e2_prediction(n);
        ok &= good;
        lines.push(format!("n={n} dims {h:?} U-part {count} in degree {} E1/E2/Einf {}", 2 - n as i32, if good { "ok" } else { "mismatch" }));
    }
    (ok, lines.join(", "))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut tested = 0;
    for n in 3..=4 {
        for q in 3..=n {
            for first in 1..=n - q + 1 {
                // every composition of n into q parts
                let mut stack = vec![vec![first]];
                while let Some(prefix) = stack.pop() {
                    let used: usize = prefix.iter().sum();
                    if prefix.len() == q {
                        if used == n {
                            let (c, _) = check_corolla_cocycle(&prefix);
                            ok &= c.in_lower_filtration && c.completion_found;
                            tested += 1;
                        }
                        continue;
                    }
                    for next in 1..=n.saturating_sub(used) {
                        let mut p = prefix.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
        }
    }
    (ok && tested > 0, format!("{tested} word-length choices with 3 <= q <= n <= 4, all lower-filtration and completed: {ok}"))
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in 2..=4 {
        let checks = fork_checks(n);
        let passed = checks.iter().filter(|c| c.cocycle && c.orthogonal_to_products && c.relation_holds).count();
        ok &= passed == checks.len() && !checks.is_empty();
        lines.push(format!("n={n} {passed}/{}", checks.len()));
    }
    (ok, lines.join(", "))
}

fn criterion_9() -> Outcome {
    let (count, failed) = suite_checks(Suite::Xi, 4, "xi/");
    let sizes: Vec<usize> = (2..=4).map(|n| xi_generators(n).len()).collect();
    let colie: Vec<usize> = (1..=5).map(colie_dim).collect();
    let ok = failed.is_empty()
        && sizes == vec![1, 4, 18]
        && colie.iter().enumerate().all(|(i, &d)| d == factorial(i));
    (ok, format!("{count} checks, failed {failed:?}, |Xi| {sizes:?}, coLie dims n=1..5 {colie:?}"))
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

struct CliRun {
    ok: bool,
    json: Option<Value>,
    elapsed: Duration,
}

fn run_cli(threads: usize, max_n: usize, dir: &std::path::Path) -> CliRun {
    let path = dir.join(format!("report-{threads}-{max_n}.json"));
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_braceops"))
        .args(["verify", "--suite", "all", "--max-n", &max_n.to_string(), "--threads", &threads.to_string(), "--json"])
        .arg(&path)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let json = std::fs::read_to_string(&path).ok().and_then(|s| serde_json::from_str(&s).ok());
    CliRun { ok: status.success(), json, elapsed }
}

/// Peak resident set of finished children, in bytes.
fn children_max_rss() -> u64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    usage.ru_maxrss as u64 * 1024
}

fn main() {
    assert!(calibrate().is_ok(), "calibration");
    let dir = tempfile::tempdir().expect("tempdir");
    let mut results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9()),
    ];

    let one = run_cli(1, 4, dir.path());
    let four = run_cli(4, 4, dir.path());
    let same = match (one.json.clone(), four.json.clone()) {
        (Some(mut a), Some(mut b)) => {
            strip_timing(&mut a);
            strip_timing(&mut b);
            a == b
        }
        _ => false,
    };
    results.push((10, (same && one.ok && four.ok, format!("verify --suite all --max-n 4 with 1 and 4 threads: payloads identical {same}"))));

    let rss = children_max_rss();
    let slowest = one.elapsed.max(four.elapsed);
    let gated = one.ok && slowest <= Duration::from_secs(600) && rss <= 4 << 30;
    let five = run_cli(1, 5, dir.path());
    let best_effort = five
        .json
        .as_ref()
        .map(|j| {
            let checks = j["checks"].as_array().cloned().unwrap_or_default();
            let n5: Vec<_> = checks.iter().filter(|c| c["best_effort"] == Value::Bool(true)).collect();
            let passed = n5.iter().filter(|c| c["status"] == "pass").count();
            format!("{passed}/{} best-effort n=5 checks pass in {:?}", n5.len(), five.elapsed)
        })
        .unwrap_or_else(|| "n=5 run produced no report".into());
    results.push((
        11,
        (gated, format!("n<=4 suite {slowest:?}, peak child memory {} MiB; excluded from verdict: {best_effort}", rss >> 20)),
    ));

    let mut all = true;
    for (k, (ok, detail)) in &results {
        all &= ok;
        println!("criterion {k:>2}: {} | {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    if !all {
        std::process::exit(1);
    }
}
