//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with `cargo test -p rfpm-cli --test acceptance`.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use oracle::{naive_gla, Board};
use rfpm_core::field::{gaussian_values, FieldConvention, FieldRealization};
use rfpm_core::gla::{estimate_tail, exact_gla, AnnealSchedule};
use rfpm_core::lattice::{BoxSpec, Grid};
use rfpm_core::polygon::{is_reachable_length, run_construction, Variant};
use rfpm_core::potts::{BoundaryCondition, Expectation, GroundStateMethod, PottsSystem, SpinConfig};
use rfpm_core::rng::{self, Purpose};
use rfpm_core::scaling::{
    correlation_length_with, fit_power_exponent, theorem1_experiment, theorem2_experiment, AxisMap,
    CorrelationParams, CorrelationSearch, MagnetizationStats, ScalingError, ScalingPoint, ScalingSeries,
    CORRELATION_MAPS, MEAN_GLA_MAPS,
};
use rfpm_core::{InterpretationFlags, Optimizer};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn unit_field(n: u32, q: usize, seed: u64) -> FieldRealization {
    FieldRealization::sample(BoxSpec::new(n), q, 1.0, seed, FieldConvention::UnitVariance).unwrap()
}

fn within(budget: Duration, started: Instant) -> Result<(), String> {
    let t = started.elapsed();
    check(t < budget, || format!("took {t:.1?}, budget {budget:?}"))
}

fn c1_gla_oracle() -> Outcome {
    let t = Instant::now();
    let board = Board::new(2);
    let animals = board.animals(8);
    for q in [2, 3] {
        for seed in 0..50 {
            let field = unit_field(2, q, seed);
            let (score, sites) = naive_gla(&field, &board, &animals);
            let r = exact_gla(&field, 8, None).map_err(|e| e.to_string())?;
            check(r.score == score, || format!("q={q} seed={seed}: score {} vs oracle {score}", r.score))?;
            check(r.animal.sites() == &sites[..], || format!("q={q} seed={seed}: argmax differs"))?;
        }
    }
    within(Duration::from_secs(120), t)?;
    Ok(format!("100 instances, {} animals each, {:.1?}", animals.len(), t.elapsed()))
}

fn c2_sampler() -> Outcome {
    let grid = Grid::new(0, 0, 2, 2).unwrap();
    let q = 3;
    let beta = 0.7;
    let h = gaussian_values(&grid.sites(), q, 3);
    let sys = PottsSystem::new(grid, q, 1.0, &h).map_err(|e| e.to_string())?;
    let table = sys.exact_gibbs(beta, BoundaryCondition::Free).map_err(|e| e.to_string())?;
    check(table.len() == 81, || format!("{} states", table.len()))?;

    let mut config = SpinConfig::uniform(grid, q, 0, BoundaryCondition::Free).unwrap();
    let mut stream = rng::purpose_stream(3, Purpose::HeatBath, 0);
    for _ in 0..1_000 {
        sys.heat_bath_sweep(&mut config, beta, &mut stream).unwrap();
    }
    let sweeps = 1_000_000;
    let mut counts = vec![0u64; table.len()];
    for _ in 0..sweeps {
        sys.heat_bath_sweep(&mut config, beta, &mut stream).unwrap();
        counts[table.index_of(config.spins())] += 1;
    }
    let tv = 0.5
        * counts
            .iter()
            .zip(&table.probabilities)
            .map(|(&c, &p)| (c as f64 / sweeps as f64 - p).abs())
            .sum::<f64>();
    check(tv < 0.01, || format!("total variation {tv}"))?;

    // π(s) K_i(s → s') = π(s') K_i(s' → s) for single-site heat-bath kernels.
    let mut pick = rng::stream(99, 0);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        use rand::Rng;
        let k = pick.gen_range(0..table.len());
        let site = pick.gen_range(0..grid.len());
        let color = pick.gen_range(0..q as u8);
        let s = table.config(k);
        let mut t = s.clone();
        t[site] = color;
        let forward = table.probabilities[k] * sys.conditional(&s, site, beta)[color as usize];
        let backward = table.probabilities[table.index_of(&t)] * sys.conditional(&t, site, beta)[s[site] as usize];
        worst = worst.max((forward - backward).abs() / forward.max(backward));
    }
    check(worst < 1e-10, || format!("detailed balance relative error {worst}"))?;
    Ok(format!("TV {tv:.5}, detailed balance {worst:.1e}"))
}

fn c3_ising() -> Outcome {
    let t = Instant::now();
    let spec = BoxSpec::new(1);
    let grid = Grid::from(spec);
    let eps = 0.8;
    let field = unit_field(1, 2, 11);
    let sys = PottsSystem::from_field(&field, eps).map_err(|e| e.to_string())?;
    let bonds = grid.bonds();
    let mut worst = 0.0f64;
    for bc in [BoundaryCondition::Free, BoundaryCondition::Wired(0), BoundaryCondition::Wired(1)] {
        for k in 0u32..512 {
            let spins: Vec<u8> = (0..9).map(|i| ((k >> i) & 1) as u8).collect();
            let c = SpinConfig::new(grid, 2, spins, bc).unwrap();
            let sigma: Vec<f64> = c.spins().iter().map(|&s| if s == 0 { 1.0 } else { -1.0 }).collect();
            // δ(s,s') = (1 + σσ')/2 and δ(s,α) = (1 + σ τ_α)/2 with τ = (+1, -1).
            let mut ising = -(bonds.len() as f64) / 2.0;
            for &(i, j) in &bonds {
                ising -= 0.5 * sigma[i] * sigma[j];
            }
            for (i, s) in grid.sites().into_iter().enumerate() {
                let h = field.at(s).unwrap();
                ising -= 0.5 * eps * (h[0] + h[1]) + 0.5 * eps * (h[0] - h[1]) * sigma[i];
            }
            let e = sys.energy(&c).unwrap();
            worst = worst.max((e - ising).abs());
        }
    }
    check(worst < 1e-12, || format!("max deviation {worst}"))?;
    within(Duration::from_secs(1), t)?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn c4_mean_gla_trend() -> Outcome {
    let t = Instant::now();
    let schedule = AnnealSchedule {
        restarts: 16,
        ..AnnealSchedule::default()
    };
    let n_list = [4, 8, 16, 32];
    let report = theorem2_experiment(
        &n_list,
        2,
        1.0,
        FieldConvention::UnitVariance,
        Optimizer::Anneal { schedule },
        100,
        0,
    )
    .map_err(|e| e.to_string())?;
    let means: Vec<f64> = report.estimates.iter().map(|e| e.mean).collect();
    let ratio = means[3] / means[0];
    // The formula gives 3.98; the quoted approximation is 2.38. Gate on the
    // tighter of the two.
    let cap = (2.0 * ((32f64).ln() / (4f64).ln()).powf(0.75)).min(2.38);
    let detail = format!(
        "means {:?}, ratio {ratio:.4} in [1, {cap:.4}], slope {}, {:.0?}",
        means.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>(),
        report.fit.as_ref().map_or("n/a".to_string(), |f| format!("{:.3}", f.slope)),
        t.elapsed()
    );
    check((1.0..=cap).contains(&ratio), || format!("ratio out of range: {detail}"))?;
    check(means.windows(2).all(|w| w[1] >= w[0]), || format!("means not non-decreasing: {detail}"))?;
    within(Duration::from_secs(15 * 60), t)?;
    Ok(detail)
}

fn c5_tail() -> Outcome {
    let t = Instant::now();
    let u = [1.0, 2.0, 3.0];
    let opt = Optimizer::Greedy { steps: usize::MAX };
    let report = estimate_tail(BoxSpec::new(8), 2, 1.0, FieldConvention::UnitVariance, &u, 10_000, &opt, 0)
        .map_err(|e| e.to_string())?;
    for e in &report.estimates {
        check(e.fraction() <= e.bound + 3.0 * e.binomial_sigma(), || {
            format!("u={}: fraction {} above bound {} + 3σ", e.u, e.fraction(), e.bound)
        })?;
    }
    let fractions: Vec<f64> = report.estimates.iter().map(|e| e.fraction()).collect();
    check(fractions.windows(2).all(|w| w[1] <= w[0]), || format!("fractions increase: {fractions:?}"))?;
    within(Duration::from_secs(10 * 60), t)?;
    Ok(format!("median {:.4}, fractions {fractions:?}, {:.0?}", report.median, t.elapsed()))
}

fn c6_correlation_trend() -> Outcome {
    let t = Instant::now();
    let params = CorrelationParams {
        epsilons: vec![0.5, 1.0, 2.0],
        q: 3,
        threshold: 0.5,
        beta: f64::INFINITY,
        search: CorrelationSearch {
            n_start: 2,
            n_max: 32,
            doubling: true,
        },
        stats: MagnetizationStats {
            samples: 100,
            base_seed: 0,
            convention: FieldConvention::UnitVariance,
            method: Expectation::GroundState {
                method: GroundStateMethod::anneal_default(),
            },
            wired_color: 0,
        },
        flags: InterpretationFlags::new(FieldConvention::UnitVariance),
    };
    let report = theorem1_experiment(params).map_err(|e| e.to_string())?;
    // Not found below N_max counts as longer than every found length.
    let key = |eps: f64| report.length_at(eps).flatten().map_or(u64::MAX, u64::from);
    let show = |eps: f64| report.length_at(eps).flatten().map_or(">32".to_string(), |l| l.to_string());
    let slope = match (&report.fit, &report.fit_error) {
        (Some(f), _) => format!("{:.4} ± {:.4}", f.slope, f.stderr_slope),
        // Too few crossings for a regression: report the secant through the
        // found points instead.
        (None, e) => {
            let (xm, ym) = CORRELATION_MAPS;
            let pts: Vec<(f64, f64)> = [0.5, 1.0, 2.0]
                .into_iter()
                .filter_map(|eps| {
                    let l = report.length_at(eps).flatten()?;
                    Some((xm.apply(eps)?, ym.apply(f64::from(l))?))
                })
                .collect();
            let why = e.as_ref().map_or(String::new(), |e| format!(" ({e})"));
            match (pts.first(), pts.last()) {
                (Some(a), Some(b)) if pts.len() >= 2 => {
                    format!("{:.4} from the {} found points, no fit{why}", (b.1 - a.1) / (b.0 - a.0), pts.len())
                }
                _ => format!("not fitted{why}"),
            }
        }
    };
    let detail = format!(
        "L(0.5)={} L(1)={} L(2)={}, log log L vs log(1/eps) slope {slope}, {:.0?}",
        show(0.5),
        show(1.0),
        show(2.0),
        t.elapsed()
    );
    check(key(0.5) >= key(1.0) && key(1.0) >= key(2.0), || format!("ordering fails: {detail}"))?;
    within(Duration::from_secs(30 * 60), t)?;
    Ok(detail)
}

fn c7_polygon() -> Outcome {
    let t = Instant::now();
    let n = 64;
    let mut runs = 0;
    for k in 0..100u64 {
        let eps = if k % 2 == 0 { 0.25 } else { 1.0 };
        let variant = if k % 4 < 2 { Variant::Deterministic } else { Variant::Stochastic };
        let seed = 1000 + 7 * k;
        let field = FieldRealization::sample(BoxSpec::new(n), 2, eps, seed, FieldConvention::UnitVariance).unwrap();
        let levels = run_construction(&field, eps, 4, variant, seed).map_err(|e| e.to_string())?;
        for (i, l) in levels.iter().enumerate() {
            let p = &l.polygon;
            check(p.is_simple(), || format!("run {k} level {}: not simple", p.level))?;
            check(p.is_contained(), || format!("run {k} level {}: leaves the box", p.level))?;
            p.check_invariants().map_err(|e| format!("run {k} level {}: {e}", p.level))?;
            if i > 0 {
                check(l.area >= levels[i - 1].area - 1e-9, || format!("run {k} level {}: area shrank", p.level))?;
            }
            for len in p.side_lengths() {
                check(is_reachable_length(len, n as f64, eps, p.level), || {
                    format!("run {k} level {}: side length {len} unreachable", p.level)
                })?;
            }
        }
        runs += 1;
    }
    let positive = FieldRealization::from_fn(BoxSpec::new(n), 2, |_, _| 1.0).unwrap();
    let counts: Vec<usize> = run_construction(&positive, 1.0, 3, Variant::Deterministic, 0)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|l| l.side_count)
        .collect();
    check(counts == [4, 16, 64], || format!("all-positive side counts {counts:?}"))?;
    within(Duration::from_secs(60), t)?;
    Ok(format!("{runs} runs, all-positive side counts {counts:?}, {:.1?}", t.elapsed()))
}

fn rfpm(args: &[String]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rfpm")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).trim().to_string())
    }
}

/// Every file under `dir` with manifest timestamps blanked.
fn snapshot(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let stripped: String = text
            .lines()
            .map(|l| if l.trim_start().starts_with("\"timestamp\"") { "\"timestamp\"" } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), stripped);
    }
    out
}

fn c8_determinism() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let base = root.path().join("base");
    fs::create_dir_all(&base).unwrap();
    let p = |name: &str| base.join(name).to_string_lossy().into_owned();
    let big = p("big.field");
    let small = p("small.field");
    let series_csv = p("series.csv");
    fs::write(&series_csv, "x,y,yerr\n2,1.5,0.1\n4,2.1,0.1\n8,2.9,0.2\n16,4.2,0.2\n").unwrap();

    // (command, argv after the subcommand, output name, is a directory)
    let runs: Vec<(&str, Vec<String>, &str, bool)> = vec![
        ("field-gen", vec!["--N", "6", "--q", "3", "--eps", "1", "--seed", "7"].into_iter().map(String::from).collect(), "big.field", false),
        ("field-gen", vec!["--N", "1", "--q", "2", "--eps", "1", "--seed", "5"].into_iter().map(String::from).collect(), "small.field", false),
        ("gla-exact", vec!["--field".into(), big.clone(), "--max-size".into(), "5".into()], "gla-exact.json", false),
        ("gla-heur", vec!["--field".into(), big.clone(), "--seed".into(), "3".into(), "--sweeps".into(), "10".into()], "gla-heur.json", false),
        ("gla-scan", ["--N", "3,4", "--q", "2", "--samples", "6", "--seed", "1", "--sweeps", "5", "--restarts", "2"].map(String::from).to_vec(), "gla-scan", true),
        ("tail", ["--N", "3", "--q", "2", "--samples", "100", "--seed", "1", "--method", "greedy"].map(String::from).to_vec(), "tail", true),
        ("polygon", vec!["--field".into(), big.clone(), "--levels".into(), "3".into(), "--variant".into(), "stochastic".into(), "--seed".into(), "4".into()], "polygon", true),
        ("gibbs-exact", vec!["--field".into(), small.clone(), "--beta".into(), "0.7".into(), "--bc".into(), "wired:1".into()], "gibbs.json", false),
        ("mc", vec!["--field".into(), small.clone(), "--beta".into(), "0.7".into(), "--sweeps".into(), "200".into(), "--seed".into(), "2".into()], "mc", true),
        ("ground-state", vec!["--field".into(), big.clone(), "--bc".into(), "wired:2".into(), "--seed".into(), "1".into()], "gs", true),
        ("magnetization", ["--N", "1", "--q", "2", "--eps", "1", "--beta", "0.9", "--samples", "5", "--seed", "1"].map(String::from).to_vec(), "mag", true),
        ("corrlen", ["--eps", "2", "--q", "3", "--samples", "6", "--seed", "1", "--n-max", "4", "--method", "ground-state", "--gs-method", "icm"].map(String::from).to_vec(), "corrlen.json", false),
        ("thm2", ["--N", "3,4,6", "--q", "2", "--samples", "6", "--seed", "1", "--sweeps", "5", "--restarts", "2"].map(String::from).to_vec(), "thm2", true),
        ("thm1", ["--eps", "0.5,1,2", "--q", "3", "--samples", "6", "--seed", "1", "--n-max", "4", "--method", "ground-state", "--gs-method", "expansion"].map(String::from).to_vec(), "thm1", true),
        ("fit", vec!["--input".into(), series_csv.clone()], "fit", true),
    ];
    let mut covered = Vec::new();
    for (cmd, args, name, is_dir) in &runs {
        let out = base.join(name);
        let mut argv = vec![cmd.to_string()];
        argv.extend(args.iter().cloned());
        argv.extend(["--out".to_string(), out.to_string_lossy().into_owned()]);
        rfpm(&argv).map_err(|e| format!("{cmd}: {e}"))?;

        let manifest = if *is_dir { out.join("manifest.json") } else if *cmd == "field-gen" { base.join(format!("{name}.manifest.json")) } else { out.clone() };
        let manifest_path = if *is_dir || *cmd == "field-gen" {
            manifest
        } else {
            // JSON outputs embed their manifest; extract it for replay.
            let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
            let m = root.path().join(format!("{name}.manifest.json"));
            fs::write(&m, serde_json::to_string(&v["manifest"]).unwrap()).unwrap();
            m
        };
        let replay = root.path().join("replay").join(name);
        let argv = [
            "rerun".to_string(),
            "--manifest".into(),
            manifest_path.to_string_lossy().into_owned(),
            "--out".into(),
            replay.to_string_lossy().into_owned(),
        ];
        rfpm(&argv).map_err(|e| format!("rerun of {cmd}: {e}"))?;
        let same = if *is_dir {
            snapshot(&out) == snapshot(&replay)
        } else {
            fs::read(&out).unwrap() == fs::read(&replay).unwrap() || {
                let strip = |p: &Path| {
                    fs::read_to_string(p)
                        .unwrap()
                        .lines()
                        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
                        .collect::<Vec<_>>()
                        .join("\n")
                };
                strip(&out) == strip(&replay)
            }
        };
        check(same, || format!("{cmd}: replayed outputs differ"))?;
        if !covered.contains(cmd) {
            covered.push(*cmd);
        }
    }
    check(covered.len() == 14, || format!("only {} subcommands covered", covered.len()))?;
    Ok(format!("{} subcommands replayed byte-identically", covered.len()))
}

fn c9_fits() -> Outcome {
    let series = |pts: Vec<(f64, f64)>| {
        ScalingSeries::new(pts.into_iter().map(|(x, y)| ScalingPoint { x, y, yerr: 0.0 }).collect(), "synthetic").unwrap()
    };
    let mut notes = Vec::new();
    for (slope, maps) in [
        (0.75, (AxisMap::Log, AxisMap::Log)),
        (4.0 / 3.0, (AxisMap::Log, AxisMap::Log)),
        (0.75, MEAN_GLA_MAPS),
        (4.0 / 3.0, CORRELATION_MAPS),
    ] {
        let (xm, ym) = maps;
        let pts: Vec<(f64, f64)> = if maps == CORRELATION_MAPS {
            // ln ln L = 0.1 + slope · ln(1/ε)
            [0.4, 0.5, 0.7, 1.0, 1.4, 2.0].iter().map(|&e: &f64| (e, (0.1f64.exp() * e.powf(-slope)).exp())).collect()
        } else if maps == MEAN_GLA_MAPS {
            [4.0, 8.0, 16.0, 32.0, 64.0].iter().map(|&n: &f64| (n, 1.7 * n.ln().powf(slope))).collect()
        } else {
            (1..=12).map(|i| (i as f64, 2.5 * (i as f64).powf(slope))).collect()
        };
        let f = fit_power_exponent(&series(pts), xm, ym).map_err(|e| e.to_string())?;
        check((f.slope - slope).abs() < 1e-6, || format!("{xm}/{ym}: slope {} vs {slope}", f.slope))?;
        notes.push(format!("{:.6}", f.slope));
    }

    // Correlation length against a linear scan, on injected monotone series.
    let mut cases = 0;
    for decay in [0.02, 0.1, 0.3, 1.0, 3.0] {
        for threshold in [0.05, 0.3, 0.5, 0.9] {
            for noise in [0.0, 0.01, 0.05] {
                for n_start in [1, 2, 5] {
                    let m = move |n: u32| Ok::<_, ScalingError>(((-(decay * n as f64)).exp(), noise));
                    let run = |doubling| {
                        correlation_length_with(1.0, threshold, CorrelationSearch { n_start, n_max: 64, doubling }, m).unwrap()
                    };
                    let fast = run(true);
                    let slow = run(false);
                    let scan = (n_start..=64).find(|&n| {
                        let (v, se) = m(n).unwrap();
                        v + 2.0 * se <= threshold
                    });
                    check(fast.l == scan && slow.l == scan, || {
                        format!("decay {decay} threshold {threshold}: {:?} / {:?} vs scan {scan:?}", fast.l, slow.l)
                    })?;
                    check(fast.m_at_l == slow.m_at_l, || "m at L differs".to_string())?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("slopes {}; {cases} correlation-length cases", notes.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 GLA oracle equivalence", c1_gla_oracle),
        ("2 sampler correctness", c2_sampler),
        ("3 Ising reduction", c3_ising),
        ("4 mean GLA growth trend", c4_mean_gla_trend),
        ("5 tail concentration", c5_tail),
        ("6 correlation length trend", c6_correlation_trend),
        ("7 polygon invariants", c7_polygon),
        ("8 end-to-end determinism", c8_determinism),
        ("9 synthetic fit recovery", c9_fits),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        match std::panic::catch_unwind(f) {
            Ok(Ok(detail)) => println!("PASS criterion {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL criterion {name}: panicked after {:.1?}", t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
