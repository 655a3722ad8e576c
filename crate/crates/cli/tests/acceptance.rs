//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use bigramsey::colorings::{
    omega_k_color, realized_colors, witness_sample, zeta_color, RuleColoring,
};
use bigramsey::constructions::{build_h, verify_prefix, GroundSequence};
use bigramsey::counting::{count_p_size, count_s_size, degree, degree_zeta};
use bigramsey::ordinal::{Edge, Ordinal, OrdinalElement};
use bigramsey::rules::{
    canonical_rule_of, combine, enumerate_rules, satisfies, split, DEFAULT_BUDGET,
};
use itertools::Itertools;
use num_bigint::BigUint;

const TABLE: [[u64; 6]; 6] = [
    [1, 1, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 1],
    [1, 1, 4, 26, 236, 2752],
    [1, 1, 14, 509, 35839, 4154652],
    [1, 1, 49, 10340, 5941404, 7244337796],
    [1, 1, 175, 222244, 1081112575, 14372713082763],
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn bigramsey(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bigramsey"))
        .args(args)
        .env_remove("RAMSEY_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let text = bigramsey(&[
        "--format",
        "structured",
        "table",
        "--max-n",
        "5",
        "--max-d",
        "5",
    ])?;
    let took = within(Duration::from_secs(5), start)?;
    let grid: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for (d, row) in TABLE.iter().enumerate() {
        for (n, &want) in row.iter().enumerate() {
            let got = grid[d][n].to_string();
            ensure(got == want.to_string(), || {
                format!("T({n}, ω^{d}) = {got}, want {want}")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells exact, {took:.2?}"))
}

fn closed_forms() -> Outcome {
    for n in 0..=6 {
        for k in 1..=5u64 {
            let got = degree(n, &Ordinal::omega_power(1, k));
            ensure(got == big(k).pow(n as u32), || {
                format!("T({n}, ω·{k}) = {got}")
            })?;
        }
    }
    for n in 0..=8 {
        ensure(degree(n, &ord("w")) == big(1), || format!("T({n}, ω) ≠ 1"))?;
        ensure(degree_zeta(n) == big(1 << n), || {
            format!("T({n}, ζ) ≠ 2^{n}")
        })?;
    }
    for alpha in ["1", "w", "w^3*2 + 5", "w^2 + w*8", "w^7"] {
        ensure(degree(0, &ord(alpha)) == big(1), || {
            format!("T(0, {alpha}) ≠ 1")
        })?;
    }
    Ok("ω·k, ω, T(0, ·), ζ".into())
}

fn oracle_gate() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for n in 0..=3 {
        for d in 0..=2 {
            for k in 1..=3u64 {
                let rules = enumerate_rules(n, &Ordinal::omega_power(d, k), None, DEFAULT_BUDGET)
                    .map_err(|e| e.to_string())?;
                for p in 0..=n * d + 1 {
                    let found = big(rules.iter().filter(|r| r.size() == p).count() as u64);
                    let want = count_p_size(n, d, k, p);
                    ensure(found == want, || {
                        format!("P_{p}({n}, ω^{d}·{k}): {found} vs {want}")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    for coeffs in (0..3).map(|_| 0..=2u64).multi_cartesian_product() {
        let alpha = Ordinal::new(coeffs);
        if alpha.is_zero() {
            continue;
        }
        for n in 0..=3 {
            let rules =
                enumerate_rules(n, &alpha, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            for p in 0..=n * alpha.degree() + 1 {
                let found = big(rules.iter().filter(|r| r.size() == p).count() as u64);
                let want = count_s_size(n, &alpha, p);
                ensure(found == want, || {
                    format!("S_{p}({n}, {alpha}): {found} vs {want}")
                })?;
                checks += 1;
            }
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("{checks} per-size counts equal, {took:.2?}"))
}

fn disjointness() -> Outcome {
    let alpha = ord("w^2");
    let rules = enumerate_rules(2, &alpha, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let elements: Vec<OrdinalElement> = (0..6u64)
        .cartesian_product(0..6u64)
        .map(|(x, y)| OrdinalElement::new(2, 0, vec![x, y]).unwrap())
        .collect();
    let (mut edges, mut pairs) = (0, 0);
    for subset in elements.into_iter().combinations(2) {
        let e = Edge::new(alpha.clone(), subset).map_err(|e| e.to_string())?;
        let canonical = canonical_rule_of(&e);
        let mut hits = 0;
        for r in &rules {
            let sat = satisfies(&e, r);
            ensure(sat == (canonical.as_ref() == Some(r)), || {
                format!("{e:?} vs {r}")
            })?;
            hits += usize::from(sat);
            pairs += 1;
        }
        ensure(hits <= 1, || format!("{e:?} satisfies {hits} rules"))?;
        edges += 1;
    }
    Ok(format!("{edges} edges, {pairs} (edge, rule) pairs"))
}

fn combine_split() -> Outcome {
    let mut checked = 0;
    let mut run = |target: &Ordinal,
                   a1: &Ordinal,
                   a2: &Ordinal,
                   n: usize,
                   leads: &[Option<u64>]|
     -> Result<(), String> {
        let mut image = HashSet::new();
        let start_m = usize::from(leads[0].is_some());
        for m in start_m..=n {
            let first = enumerate_rules(m, a1, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let second =
                enumerate_rules(n - m, a2, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            for (t1, t2) in first.iter().cartesian_product(&second) {
                for pos in (0..t1.size() + t2.size()).combinations(t1.size()) {
                    for &b in leads {
                        let out = combine(t1, t2, &pos, b).map_err(|e| e.to_string())?;
                        let back = split(&out).map_err(|e| e.to_string())?;
                        let same = back.tau1 == *t1
                            && back.tau2 == *t2
                            && back.interleaving == pos
                            && back.lead_choice == b;
                        ensure(same, || format!("round trip failed on {out}"))?;
                        ensure(image.insert(out), || "combine not injective".into())?;
                        checked += 1;
                    }
                }
            }
        }
        let all = enumerate_rules(n, target, None, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(all.len() == image.len(), || {
            format!("{target} n={n}: image {} of {}", image.len(), all.len())
        })?;
        for r in &all {
            let s = split(r).map_err(|e| e.to_string())?;
            let again = combine(&s.tau1, &s.tau2, &s.interleaving, s.lead_choice)
                .map_err(|e| e.to_string())?;
            ensure(&again == r, || format!("combine(split({r})) = {again}"))?;
        }
        Ok(())
    };
    for d in 1..=2usize {
        for k in 1..=2u64 {
            let target = Ordinal::omega_power(d, k);
            let leads: Vec<Option<u64>> = (0..k).map(Some).collect();
            for n in 1..=2 {
                run(&target, &Ordinal::omega_power(d - 1, 1), &target, n, &leads)?;
            }
            for lower in (0..d).map(|_| 0..=2u64).multi_cartesian_product() {
                let lower = Ordinal::new(lower);
                if lower.is_zero() {
                    continue;
                }
                let mut coeffs = lower.coeffs().to_vec();
                coeffs.resize(d + 1, 0);
                coeffs[d] = k;
                for n in 0..=2 {
                    run(
                        &Ordinal::new(coeffs.clone()),
                        &Ordinal::omega_power(d, k),
                        &lower,
                        n,
                        &[None],
                    )?;
                }
            }
        }
    }
    Ok(format!(
        "{checked} round trips, both modes, zero mismatches"
    ))
}

fn construction_witness() -> Outcome {
    let mut lines = Vec::new();
    for alpha in ["w^2", "w^3", "w^2*2", "w^2 + w", "w*2 + 1"] {
        let alpha = ord(alpha);
        let h = build_h(&alpha, &GroundSequence::Identity, 12).map_err(|e| e.to_string())?;
        ensure(h.elements.len() == 12, || {
            format!("{alpha}: prefix length {}", h.elements.len())
        })?;
        for n in 1..=2 {
            let report = verify_prefix(&h, n).map_err(|e| e.to_string())?;
            ensure(report.all_satisfied(), || {
                format!(
                    "{alpha} n={n}: {} of {} edges",
                    report.satisfied, report.edges
                )
            })?;
            ensure(report.within_bound(), || {
                format!(
                    "{alpha} n={n}: {} rules > {}",
                    report.rules.len(),
                    report.degree
                )
            })?;
            lines.push(format!(
                "{alpha}/{n}:{}≤{}",
                report.rules.len(),
                report.degree
            ));
        }
    }
    Ok(lines.join(" "))
}

fn lower_bound_realization() -> Outcome {
    for (n, alpha) in [(2, "w^2"), (1, "w*3"), (2, "w*2"), (2, "w^2*2")] {
        let alpha = ord(alpha);
        let coloring = RuleColoring::new(n, &alpha, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let sample = witness_sample(n, &alpha, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let colors = realized_colors(&sample, n, |s| {
            coloring
                .color(&Edge::new(alpha.clone(), s.to_vec()).unwrap())
                .unwrap()
        });
        let want = degree(n, &alpha);
        ensure(big(colors.len() as u64) == want, || {
            format!("{alpha} n={n}: {} colors, want {want}", colors.len())
        })?;
    }
    for n in 1..=3usize {
        for m in [n, 2 * n] {
            let window: Vec<i64> = (-(m as i64)..=m as i64).filter(|&x| x != 0).collect();
            let colors = realized_colors(&window, n, |s| zeta_color(s).unwrap());
            ensure(colors.len() == 1 << n, || {
                format!("ζ n={n} m={m}: {} colors", colors.len())
            })?;
        }
    }
    for n in 1..=3usize {
        for k in 1..=3u64 {
            let sample: Vec<(u64, u64)> = (1..=k)
                .flat_map(|i| (0..n as u64 * k).map(move |x| (i, x)))
                .collect();
            let colors = realized_colors(&sample, n, omega_k_color);
            ensure(colors.len() as u64 == k.pow(n as u32), || {
                format!("ω·{k} n={n}: {} colors", colors.len())
            })?;
        }
    }
    let worked = omega_k_color(&[(3, 12), (50, 2), (110, 12), (110, 7777), (117, 3)]);
    ensure(worked == [50, 117, 3, 110, 110], || {
        format!("worked example gave {worked:?}")
    })?;
    Ok("rule samples, ζ windows, ω·k samples, worked example".into())
}

fn oeis_consistency() -> Outcome {
    let a000311 = bigramsey(&["--format", "bfile", "oeis", "a000311", "--count", "7"])?;
    let values: Vec<&str> = a000311
        .lines()
        .skip(1)
        .map(|l| l.split(' ').nth(1).unwrap_or(""))
        .collect();
    let row: Vec<String> = TABLE[2].iter().map(u64::to_string).collect();
    ensure(values == row, || {
        format!("A000311 {values:?} vs row d=2 {row:?}")
    })?;
    let a079309 = bigramsey(&["--format", "bfile", "oeis", "a079309", "--count", "5"])?;
    let values: Vec<&str> = a079309
        .lines()
        .map(|l| l.split(' ').nth(1).unwrap_or(""))
        .collect();
    let column: Vec<String> = TABLE[1..].iter().map(|r| r[2].to_string()).collect();
    ensure(values == column, || {
        format!("A079309 {values:?} vs column n=2 {column:?}")
    })?;
    Ok("A000311 = row d=2, A079309 = column n=2".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("table reproduction", table_reproduction),
        ("closed forms", closed_forms),
        ("oracle gate", oracle_gate),
        ("disjointness and classification", disjointness),
        ("combine/split bijection", combine_split),
        ("construction witness", construction_witness),
        ("lower-bound realization", lower_bound_realization),
        ("OEIS consistency", oeis_consistency),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
