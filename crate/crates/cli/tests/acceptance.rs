//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use pos1324::avoiders::{classify_slice, collect_avoiders, CountOracle, PositionalClass};
use pos1324::domino::{enumerate_dominoes, from_domino, to_domino};
use pos1324::genfun::{
    a_nk_recurrence, conjecture_check, f_series, g2_from_square, g2_from_t_derivative, g_identity_check,
    primitive_count, t2k_series, t_ak_bruteforce,
};
use pos1324::primitive::{decode_tuple, encode_perm, factorize, ComponentPools};
use pos1324::verify::{decomposition_listing, run_suite, Suite, VerifyConfig, AVOIDER_TOTALS, DECOMPOSITIONS_N4};
use pos1324::Rational;

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn within(started: Instant, limit: Duration) -> Outcome {
    let took = started.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn primitive_counts(oracle: &CountOracle) -> Outcome {
    let started = Instant::now();
    let expected: [u64; 8] = [1, 2, 6, 22, 91, 408, 1938, 9614];
    for (i, &want) in expected.iter().enumerate() {
        let n = i + 2;
        let brute = oracle.table(n).map_err(|e| e.to_string())?.count(1, 1);
        let closed = primitive_count(n).map_err(|e| e.to_string())?;
        if brute != BigUint::from(want) || closed != brute {
            return Err(format!("n={n}: brute {brute}, closed form {closed}, expected {want}"));
        }
    }
    within(started, Duration::from_secs(10))
}

fn size_four_listing() -> Outcome {
    let got = decomposition_listing(4).map_err(|e| e.to_string())?;
    if got == DECOMPOSITIONS_N4 {
        Ok(())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn domino_bijection() -> Outcome {
    let started = Instant::now();
    for points in 0..=7 {
        let n = points + 2;
        let prims = collect_avoiders(n, |w| classify_slice(w) == Some(PositionalClass::new(1, 1)));
        let mut image = Vec::with_capacity(prims.len());
        for p in &prims {
            let d = to_domino(p).map_err(|e| format!("{p}: {e}"))?;
            if from_domino(&d).as_ref() != Ok(p) {
                return Err(format!("{p} does not roundtrip"));
            }
            image.push(d);
        }
        image.sort();
        if image != enumerate_dominoes(points) {
            return Err(format!("image at {points} points differs from the enumerated dominoes"));
        }
    }
    within(started, Duration::from_secs(60))
}

fn factorization() -> Outcome {
    let started = Instant::now();
    for n in 2..=10 {
        let members = collect_avoiders(n, |w| classify_slice(w).is_some_and(|c| c.a == 1));
        for p in &members {
            let pos_one = p.position(1).expect("1 present");
            let pos_max = p.position(n as u32).expect("max present");
            let d = factorize(p).map_err(|e| format!("{p}: {e}"))?;
            if d.k() != pos_max - pos_one || d.recompose() != *p {
                return Err(format!("{p} factors as {d}"));
            }
        }
    }
    within(started, Duration::from_secs(120))
}

fn a_nk_agreement(oracle: &CountOracle) -> Outcome {
    for k in 1..=10 {
        // x f(x)^k
        let mut series = f_series(11);
        for _ in 1..k {
            series = &series * &f_series(11);
        }
        let series = series.mul_x_pow(1);
        for n in (k + 1)..=11 {
            let brute = oracle.table(n).map_err(|e| e.to_string())?.count(1, k);
            let coeff = series.coeff(n).clone();
            if coeff != Rational::from_integer(brute.clone().into()) {
                return Err(format!("a({n},{k}): brute {brute}, series {coeff}"));
            }
            if k >= 2 {
                let rec = a_nk_recurrence(n, k).map_err(|e| e.to_string())?;
                if rec != brute {
                    return Err(format!("a({n},{k}): brute {brute}, recurrence {rec}"));
                }
            }
        }
    }
    Ok(())
}

fn two_before_max(oracle: &CountOracle) -> Outcome {
    for n in 3..=11 {
        let here = oracle.table(n).map_err(|e| e.to_string())?;
        let prev = oracle.table(n - 1).map_err(|e| e.to_string())?;
        for k in 1..n {
            if here.count(2, k) * 2u32 != prev.count(1, k) * BigUint::from(n - k) {
                return Err(format!("count mismatch at n={n}, k={k}"));
            }
        }
    }
    let cfg = VerifyConfig { max_n: 9, ..VerifyConfig::default() };
    let reports = run_suite(Suite::Thm2, &cfg, oracle).map_err(|e| e.to_string())?;
    let accounting = reports
        .iter()
        .find(|r| r.identity == "insertion-accounting")
        .ok_or("no insertion-accounting report")?;
    if accounting.pass {
        Ok(())
    } else {
        Err(accounting.to_string())
    }
}

fn tuple_codec(oracle: &CountOracle) -> Outcome {
    let mut cfg = VerifyConfig { max_n: 11, ..VerifyConfig::default() };
    cfg.t2k_max_k = 9;
    let reports = run_suite(Suite::Thm3, &cfg, oracle).map_err(|e| e.to_string())?;
    for name in ["tuple-codec", "tuple-table-n7-k3"] {
        let r = reports.iter().find(|r| r.identity == name).ok_or(format!("no {name} report"))?;
        if !r.pass {
            return Err(r.to_string());
        }
    }
    // spot check the codec directly on every size-7, k = 3 tuple
    let pools = ComponentPools::up_to(7);
    let mut bad = None;
    let mut seen = 0;
    pools.for_each_tuple(7, 3, |t| {
        seen += 1;
        let ok = decode_tuple(&t).is_ok_and(|p| encode_perm(&p).as_ref() == Ok(&t));
        if !ok && bad.is_none() {
            bad = Some(t.to_string());
        }
    });
    if let Some(t) = bad {
        return Err(format!("tuple {t} does not roundtrip"));
    }
    if seen != 30 {
        return Err(format!("{seen} tuples at n=7, k=3"));
    }
    for k in 0..=9 {
        let formula = t2k_series(k, 11);
        let brute = t_ak_bruteforce(2, k, 11, oracle).map_err(|e| e.to_string())?;
        if formula != brute {
            return Err(format!("T(2,{k}): formula {formula}, brute force {brute}"));
        }
    }
    let a = g2_from_square(9, 9).map_err(|e| e.to_string())?;
    let b = g2_from_t_derivative(9, 9).map_err(|e| e.to_string())?;
    if a != b {
        return Err("the two g2 routes disagree".into());
    }
    Ok(())
}

fn conjecture(oracle: &CountOracle) -> Outcome {
    let mut lines = Vec::new();
    let mut failed = false;
    for a in 3..=4 {
        for k in a..=6 {
            let report = conjecture_check(a, k, 11, oracle).map_err(|e| e.to_string())?;
            for r in report.reports() {
                failed |= !r.pass;
                lines.push(r.to_string());
            }
        }
    }
    for l in &lines {
        println!("    {l}");
    }
    if failed {
        Err("nonzero residual".into())
    } else {
        Ok(())
    }
}

fn g_identity(oracle: &CountOracle) -> Outcome {
    let r = g_identity_check(11, oracle).map_err(|e| e.to_string())?;
    if !r.pass {
        return Err(r.to_string());
    }
    for (i, &want) in AVOIDER_TOTALS.iter().enumerate() {
        let n = i + 1;
        let total = oracle.table(n).map_err(|e| e.to_string())?.total.clone();
        // independent recount
        let recount = collect_avoiders(n, |_| true).len();
        if total != BigUint::from(want) || recount as u64 != want {
            return Err(format!("n={n}: table {total}, recount {recount}, expected {want}"));
        }
        if n >= 2 {
            let here = oracle.table(n).map_err(|e| e.to_string())?;
            let prev = oracle.table(n - 1).map_err(|e| e.to_string())?;
            if here.total != &prev.total + here.class_sum() {
                return Err(format!("n={n}: total is not previous total plus class sum"));
            }
        }
    }
    Ok(())
}

fn full_verify() -> Outcome {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pos1324"))
        .args(["verify", "--suite", "all", "--max-n", "11"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        let stdout = String::from_utf8_lossy(&out.stdout);
        let tail: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).take(5).collect();
        return Err(format!("exit {:?}: {}", out.status.code(), tail.join("; ")));
    }
    within(started, Duration::from_secs(300))
}

fn main() {
    let oracle = CountOracle::in_memory();
    let criteria: Vec<Criterion> = vec![
        ("primitive counts", Box::new(|| primitive_counts(&oracle))),
        ("size-four decomposition listing", Box::new(size_four_listing)),
        ("domino bijection", Box::new(domino_bijection)),
        ("factorization into primitives", Box::new(factorization)),
        ("one-before-max counts", Box::new(|| a_nk_agreement(&oracle))),
        ("two-before-max counts and insertion", Box::new(|| two_before_max(&oracle))),
        ("tuple codec and T2k series", Box::new(|| tuple_codec(&oracle))),
        ("conjectured T_ak forms", Box::new(|| conjecture(&oracle))),
        ("G identity and totals", Box::new(|| g_identity(&oracle))),
        ("full verify run", Box::new(full_verify)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        match check() {
            Ok(()) => println!("PASS {:>2} {name} ({} ms)", i + 1, started.elapsed().as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
