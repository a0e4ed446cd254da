//! Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mevsym::cayley::spectrum_report;
use mevsym::fairness::{claim2_report, lambda_plus, lambda_star, uncertainty_upper_bound};
use mevsym::intersecting::{intersection_profile, stabilizer_set};
use mevsym::partition::partitions_of;
use mevsym::payoffs::{indicator_payoff, liquidation_payoff, random_payoff};
use mevsym::perm::factorial;
use mevsym::sequencing::{run_pipeline, simulate};
use mevsym::verify::{block_consistency_residual, claim2_junta_example, generator_corpus, payoff_corpus, set_corpus};
use mevsym::{LatencyModel, LiquidationModel, OrderingSet, Payoff, Permutation, RandomDist, Suite, Table, VoteProfile, YoungOrthogonal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    Permutation::lehmer_unrank(n, rng.random_range(0..factorial(n))).unwrap()
}

fn dimension_identity() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=10 {
        let sum: u64 = partitions_of(n).iter().map(|l| l.dim() * l.dim()).sum();
        if sum != factorial(n) {
            bad.push(n);
        }
    }
    ensure(bad.is_empty(), format!("n = 1..10, mismatches at {bad:?}"))
}

fn representation_validity() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 3..=6 {
        let irreps: Vec<YoungOrthogonal<f64>> = partitions_of(n).iter().map(YoungOrthogonal::new).collect();
        for _ in 0..200 {
            let (s, t) = (random_perm(&mut rng, n), random_perm(&mut rng, n));
            let st = s.compose(&t).unwrap();
            for y in &irreps {
                let (rs, rt, rst) = (y.evaluate(&s).unwrap(), y.evaluate(&t).unwrap(), y.evaluate(&st).unwrap());
                worst = worst.max((&rs * &rt - rst).abs().max());
                let gram = &rs * rs.transpose();
                for ((i, j), v) in gram.iter().enumerate().map(|(k, v)| ((k % gram.nrows(), k / gram.nrows()), v)) {
                    let id = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((v - id).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-10, format!("max residual {worst:.3e} over 200 pairs × all irreps, n = 3..6"))
}

fn transform_corpus() -> Vec<Payoff> {
    let mut out: Vec<Payoff> = (0..20).map(|s| random_payoff(5, 100 + s, RandomDist::Uniform01).unwrap()).collect();
    out.extend((0..3).map(|s| random_payoff(6, 200 + s, RandomDist::Uniform01).unwrap()));
    out
}

fn round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for f in transform_corpus() {
        let table = Table::new(f.n()).unwrap();
        let back = table.inverse(&table.transform(&f).unwrap()).unwrap();
        worst = worst.max(back.max_abs_diff(&f).unwrap());
    }
    ensure(worst <= 1e-9, format!("max abs error {worst:.3e} (20 on S_5, 3 on S_6)"))
}

fn plancherel() -> Outcome {
    let mut worst = 0.0f64;
    for f in transform_corpus() {
        let table = Table::new(f.n()).unwrap();
        // independent oracle: (1/n!) Σ d_λ ‖f̂(λ)‖_F² accumulated here
        let spec = table.transform(&f).unwrap();
        let energy: f64 =
            spec.blocks().iter().map(|b| b.shape.dim() as f64 * b.matrix.norm_squared()).sum::<f64>() / f.len() as f64;
        let lhs = f.norm2_squared();
        worst = worst.max((energy - lhs).abs() / lhs);
    }
    ensure(worst <= 1e-9, format!("max relative error {worst:.3e}"))
}

fn uncertainty() -> Outcome {
    let table4 = Table::new(4).unwrap();
    let table5 = Table::new(5).unwrap();
    let mut fails = 0;
    let mut count = 0;
    let mut min_ratio = f64::INFINITY;
    let mut check = |table: &Table, f: &Payoff| {
        let order = factorial(f.n()) as f64;
        let u = table.uncertainty_check(f).unwrap();
        count += 1;
        min_ratio = min_ratio.min(u.product / order);
        if u.product < order * (1.0 - 1e-9) {
            fails += 1;
        }
    };
    for s in 0..100 {
        check(&table4, &random_payoff(4, s, RandomDist::Uniform01).unwrap());
    }
    for (n, table) in [(4, &table4), (5, &table5)] {
        for (_, f) in payoff_corpus(n, 1).unwrap() {
            if !f.is_zero() {
                check(table, &f);
            }
        }
    }
    let mut exact_gap = 0.0f64;
    for (n, table) in [(4, &table4), (5, &table5)] {
        let order = factorial(n) as f64;
        for f in [Payoff::delta(&Permutation::identity(n)).unwrap(), Payoff::constant(n, 3.0).unwrap()] {
            exact_gap = exact_gap.max((table.uncertainty_check(&f).unwrap().product - order).abs() / order);
        }
    }
    ensure(
        fails == 0 && exact_gap <= 1e-12,
        format!("{fails}/{count} below floor, min product/n! {min_ratio:.6}, delta/constant gap {exact_gap:.3e}"),
    )
}

fn fairness_exact() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=7 {
        let full = OrderingSet::full(n).unwrap();
        let order = factorial(n) as f64;
        let d = Payoff::delta(&Permutation::lehmer_unrank(n, factorial(n) / 2).unwrap()).unwrap();
        worst = worst.max((lambda_plus(&d, &full).unwrap() - (1.0 - 1.0 / order)).abs());
        worst = worst.max(lambda_plus(&Payoff::constant(n, 2.5).unwrap(), &full).unwrap().abs());
    }
    let mut identity = 0.0f64;
    let mut analyses = 0;
    for n in 3..=6 {
        let sets = set_corpus(n, 4).unwrap();
        for (_, f) in payoff_corpus(n, 4).unwrap() {
            for (_, a) in &sets {
                let Ok(ls) = lambda_star(&f, a) else { continue };
                let lp = lambda_plus(&f, a).unwrap();
                let max = a.permutations().map(|p| f.at(&p)).fold(f64::MIN, f64::max);
                identity = identity.max((lp - max * (1.0 - 1.0 / ls)).abs());
                analyses += 1;
            }
        }
    }
    ensure(
        worst <= 1e-12 && identity <= 1e-12,
        format!("exact cases max err {worst:.3e} (n ≤ 7); identity residual {identity:.3e} over {analyses} analyses"),
    )
}

/// Injective constraint sets `{(i, j)}` of size `t` with increasing `i`.
fn constraint_sets(n: usize, t: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![]];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|cur: Vec<(usize, usize)>| {
                let start = cur.last().map_or(1, |&(i, _)| i + 1);
                (start..=n)
                    .flat_map(|i| (1..=n).map(move |j| (i, j)))
                    .filter(|&(_, j)| cur.iter().all(|&(_, b)| b != j))
                    .map(|pair| {
                        let mut next = cur.clone();
                        next.push(pair);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn degree_cases() -> Outcome {
    let mut wrong = 0;
    let mut total = 0;
    for n in [5, 6] {
        let table = Table::new(n).unwrap();
        for k in 0..=2 {
            for pairs in constraint_sets(n, k) {
                let f = indicator_payoff::<f64>(&stabilizer_set(n, &pairs).unwrap()).unwrap();
                total += 1;
                if table.degree(&f, 1e-9).unwrap() != k {
                    wrong += 1;
                }
            }
        }
    }
    let liq = liquidation_payoff::<f64>(&LiquidationModel::new(2, 1, 100.0).unwrap()).unwrap();
    let support = liq.values().iter().filter(|v| **v != 0.0).count();
    ensure(
        wrong == 0 && support == 16 && liq.len() == 24,
        format!("{wrong}/{total} junta basis elements off-degree; liquidation support {support}/{}", liq.len()),
    )
}

fn indicator_degree() -> Outcome {
    let mut failures = 0;
    let mut total = 0;
    for n in 4..=6 {
        let table = Table::new(n).unwrap();
        for t in 1..=3usize.min(n - 1) {
            for pairs in constraint_sets(n, t) {
                let set = stabilizer_set(n, &pairs).unwrap();
                let t_max = intersection_profile(&set).unwrap().t_max;
                let deg = table.degree(&indicator_payoff(&set).unwrap(), 1e-9).unwrap();
                total += 1;
                // a singleton has t_max = n but agreement on n − 1 points already pins it
                if deg < t_max.min(n - 1) {
                    failures += 1;
                }
            }
        }
    }
    ensure(failures == 0, format!("{failures} failures over {total} stabilizer sets"))
}

fn uncertainty_fairness_bound() -> Outcome {
    let mut failures = 0;
    let mut total = 0;
    let mut min_slack = f64::INFINITY;
    for n in 3..=6 {
        let table = Table::new(n).unwrap();
        let sets = set_corpus(n, 9).unwrap();
        for (_, f) in payoff_corpus(n, 9).unwrap() {
            for (_, a) in &sets {
                if f.restrict(a).unwrap().is_zero() {
                    continue;
                }
                let u = uncertainty_upper_bound(&table, &f, a).unwrap();
                total += 1;
                min_slack = min_slack.min(u.slack);
                if u.lambda_plus > u.bound + 1e-9 {
                    failures += 1;
                }
            }
        }
    }
    ensure(failures == 0, format!("{failures}/{total} pairs violate, min slack {min_slack:.3e}"))
}

fn cayley_blocks() -> Outcome {
    let mut worst = 0.0f64;
    let mut violations = 0;
    let mut adjacency = 0;
    let mut sets = 0;
    for n in [3, 4] {
        let table = Table::new(n).unwrap();
        for seed in 0..3 {
            for (_, f) in generator_corpus(n, seed).unwrap() {
                worst = worst.max(block_consistency_residual(&table, &f).unwrap());
                let rep = spectrum_report(&table, &f).unwrap();
                violations += rep.averaging_violations;
                adjacency += rep.adjacency_violations;
                sets += 1;
            }
        }
    }
    ensure(
        worst <= 1e-8 && violations == 0,
        format!(
            "{sets} generator sets, spectrum residual {worst:.3e}; eigenvalue bound violations: averaging {violations}, adjacency {adjacency}"
        ),
    )
}

fn claim2_evidence() -> Outcome {
    let mut parts = Vec::new();
    let mut cprimes = Vec::new();
    let mut hard = true;
    let mut soft = true;
    for n in [5, 6] {
        let table = Table::new(n).unwrap();
        let (a, f) = claim2_junta_example(n).unwrap();
        let r = claim2_report(&table, &f, &a, 1e-9).unwrap();
        let c = r.implied_cprime.unwrap_or(f64::NAN);
        hard &= c.is_finite() && c > 0.0;
        soft &= r.applicable && r.lambda_ratio() >= 0.9;
        cprimes.push(c);
        parts.push(format!("n={n}: applicable={} ratio={:.4} c'={c:.4}", r.applicable, r.lambda_ratio()));
    }
    let spread = cprimes[0].max(cprimes[1]) / cprimes[0].min(cprimes[1]);
    soft &= spread <= 3.0;
    parts.push(format!("c' spread {spread:.2} (soft gates {})", if soft { "met" } else { "missed" }));
    ensure(hard, parts.join("; "))
}

fn sequencing_pipeline() -> Outcome {
    let start = Instant::now();
    let cycle = run_pipeline(&simulate(3, 3, LatencyModel::AdversarialCycle).unwrap()).unwrap();
    let mut ok = cycle.set.len() == 6 && cycle.profile.t_max == 0;
    let mut parts = vec![format!("3-cycle |A|={} t_max={}", cycle.set.len(), cycle.profile.t_max)];
    for n in 3..=6 {
        let order = Permutation::lehmer_unrank(n, factorial(n) - 1).unwrap();
        let r = run_pipeline(&VoteProfile::unanimous(order, 5).unwrap()).unwrap();
        ok &= r.set.len() == 1 && r.profile.t_max == n;
        parts.push(format!("unanimity n={n} |A|={} t_max={}", r.set.len(), r.profile.t_max));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    parts.push(format!("{elapsed:.2?}"));
    ensure(ok, parts.join(", "))
}

fn reproducibility() -> Outcome {
    let dir = std::env::temp_dir().join(format!("mevsym-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let out: PathBuf = dir.join("report.json");
    let run = |suite: Suite| -> Result<Vec<u8>, String> {
        let status = Command::new(env!("CARGO_BIN_EXE_mevsym"))
            .args(["verify", "--suite", suite.name(), "--n", "4", "--seed", "11", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("{suite} exited with {}", status.status));
        }
        fs::read(&out).map_err(|e| e.to_string())
    };
    let mut differing = Vec::new();
    for suite in Suite::ALL {
        let (a, b) = (run(suite)?, run(suite)?);
        if a != b {
            differing.push(suite.name());
        }
    }
    fs::remove_dir_all(&dir).ok();
    ensure(differing.is_empty(), format!("{} suites run twice, differing: {differing:?}", Suite::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("dimension identity", Duration::from_secs(1), dimension_identity),
        ("representation validity", Duration::from_secs(30), representation_validity),
        ("fourier round trip", Duration::from_secs(120), round_trip),
        ("plancherel", Duration::from_secs(120), plancherel),
        ("uncertainty principle", Duration::from_secs(120), uncertainty),
        ("fairness exact cases", Duration::MAX, fairness_exact),
        ("degree", Duration::MAX, degree_cases),
        ("indicator degree", Duration::MAX, indicator_degree),
        ("uncertainty fairness bound", Duration::MAX, uncertainty_fairness_bound),
        ("cayley blocks", Duration::MAX, cayley_blocks),
        ("intersection lower-bound evidence", Duration::MAX, claim2_evidence),
        ("sequencing pipeline", Duration::from_secs(10), sequencing_pipeline),
        ("reproducibility", Duration::MAX, reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => (elapsed <= limit, d),
            Err(d) => (false, d),
        };
        let timing = if limit == Duration::MAX { format!("{elapsed:.2?}") } else { format!("{elapsed:.2?} / limit {limit:?}") };
        println!("criterion {:>2} {} {name}: {detail} [{timing}]", i + 1, if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {}/13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
