//! One function per subcommand. Each loads or samples its inputs, calls the
//! matching library routine and writes the outputs with their manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rfpm_core::field::{FieldRealization, GaussianSource};
use rfpm_core::gla::{estimate_tail, sample_scores, SampleRecord, Scorer};
use rfpm_core::polygon::run_construction;
use rfpm_core::potts::{magnetization, MagnetizationConfig, PottsSystem, SpinConfig};
use rfpm_core::rng::{self, Purpose};
use rfpm_core::scaling::{
    correlation_length, fit_power_exponent, theorem1_experiment, theorem2_experiment, CorrelationParams,
    MagnetizationStats, ScalingPoint, ScalingSeries, CORRELATION_MAPS, MEAN_GLA_MAPS,
};
use rfpm_core::stats::{median, MeanEstimate};
use rfpm_core::{BoundaryCondition, BoxSpec, FieldConvention, InterpretationFlags, Optimizer, WeightMode};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::io::{f17, json_bytes, read_text, with_suffix, write_atomic};
use crate::manifest::RunManifest;
use crate::plot::emit_plot_data;
use crate::{runtime, CliError};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::FieldGen(a) => field_gen(&a),
        Command::GlaExact(a) => gla_exact(&a),
        Command::GlaHeur(a) => gla_heur(&a),
        Command::GlaScan(a) => gla_scan(&a),
        Command::Tail(a) => tail(&a),
        Command::Polygon(a) => polygon(&a),
        Command::GibbsExact(a) => gibbs_exact(&a),
        Command::Mc(a) => mc(&a),
        Command::GroundState(a) => ground_state(&a),
        Command::Magnetization(a) => magnetization_cmd(&a),
        Command::Corrlen(a) => corrlen(&a),
        Command::Thm2(a) => thm2(a),
        Command::Thm1(a) => thm1(a),
        Command::Fit(a) => fit(&a),
        Command::Rerun(a) => rerun(&a),
    }
}

fn manifest<P: Serialize>(command: &str, params: &P, convention: FieldConvention) -> Result<RunManifest, CliError> {
    RunManifest::new(command, params, InterpretationFlags::new(convention))
}

/// `body` (a JSON object) with the manifest under `"manifest"`.
fn with_manifest<T: Serialize>(body: &T, manifest: &RunManifest) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_value(body).map_err(runtime)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| CliError::Runtime("report is not a JSON object".into()))?;
    obj.insert("manifest".into(), serde_json::to_value(manifest).map_err(runtime)?);
    json_bytes(&v)
}

fn load_field(path: &Path) -> Result<FieldRealization, CliError> {
    FieldRealization::parse(&read_text(path)?).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn nonempty<T>(list: &[T], flag: &str) -> Result<(), CliError> {
    if list.is_empty() {
        Err(CliError::Usage(format!("--{flag} needs at least one value")))
    } else {
        Ok(())
    }
}

fn field_gen(a: &FieldGenArgs) -> Result<(), CliError> {
    let field = FieldRealization::sample(BoxSpec::new(a.n), a.q, a.eps, a.seed, a.conv).map_err(runtime)?;
    write_atomic(&a.out, field.to_text().as_bytes())?;
    manifest("field-gen", a, a.conv)?.save(&with_suffix(&a.out, ".manifest.json"))?;
    println!("{}", a.out.display());
    Ok(())
}

#[derive(Serialize)]
struct GlaReport {
    field: String,
    score: f64,
    animal: String,
    animal_size: usize,
    boundary: u32,
    evaluations: u64,
    method: rfpm_core::GlaMethod,
    sites: Vec<rfpm_core::Site>,
}

fn gla_report(field: &Path, r: &rfpm_core::GlaResult) -> GlaReport {
    GlaReport {
        field: field.display().to_string(),
        score: r.score,
        animal: r.animal.to_string(),
        animal_size: r.animal.len(),
        boundary: r.animal.boundary_size(),
        evaluations: r.evaluations,
        method: r.method,
        sites: r.animal.sites().to_vec(),
    }
}

fn gla_exact(a: &GlaExactArgs) -> Result<(), CliError> {
    let field = load_field(&a.field)?;
    let r = Scorer::new(&field, a.mode.into()).exact(a.max_size, None).map_err(runtime)?;
    let m = manifest("gla-exact", a, field.convention())?;
    write_atomic(&a.out, &with_manifest(&gla_report(&a.field, &r), &m)?)?;
    println!("{}", f17(r.score));
    Ok(())
}

fn gla_heur(a: &GlaHeurArgs) -> Result<(), CliError> {
    if a.method == rfpm_core::GlaMethod::Exact {
        return Err(CliError::Usage("gla-heur runs greedy or anneal; use gla-exact for enumeration".into()));
    }
    let opt = OptimizerArgs {
        method: a.method,
        max_size: 0,
        steps: a.steps,
        t0: a.t0,
        t_end: a.t_end,
        sweeps: a.sweeps,
        restarts: a.restarts,
    }
    .optimizer();
    let field = load_field(&a.field)?;
    let r = Scorer::new(&field, a.mode.into()).run(&opt, a.seed).map_err(runtime)?;
    let m = manifest("gla-heur", a, field.convention())?;
    write_atomic(&a.out, &with_manifest(&gla_report(&a.field, &r), &m)?)?;
    println!("{}", f17(r.score));
    Ok(())
}

const SAMPLE_HEADER: &str = "seed,N,q,eps,method,score,animal_size,boundary,evaluations\n";

fn sample_rows(out: &mut String, n: u32, q: usize, eps: f64, opt: &Optimizer, records: &[SampleRecord]) {
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.seed,
            n,
            q,
            f17(eps),
            opt.method(),
            f17(r.score),
            r.animal_size,
            r.boundary,
            r.evaluations
        )
        .expect("string write");
    }
}

#[derive(Serialize)]
struct ScanSummary {
    n: u32,
    samples: usize,
    mean: f64,
    stderr: f64,
    median: f64,
    min: f64,
    max: f64,
}

fn scan_summary(n: u32, records: &[SampleRecord]) -> ScanSummary {
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let (mean, stderr) = MeanEstimate::of(&scores).map_or((f64::NAN, f64::NAN), |e| (e.mean, e.stderr));
    ScanSummary {
        n,
        samples: scores.len(),
        mean,
        stderr,
        median: median(&scores).unwrap_or(f64::NAN),
        min: scores.iter().copied().fold(f64::INFINITY, f64::min),
        max: scores.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

fn gla_scan(a: &GlaScanArgs) -> Result<(), CliError> {
    nonempty(&a.n, "N")?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let source = GaussianSource {
        q: a.q,
        epsilon: a.eps,
        convention: a.conv,
    };
    let opt = a.optimizer.optimizer();
    let mut csv = String::from(SAMPLE_HEADER);
    let mut summaries = Vec::new();
    for &n in &a.n {
        let records =
            sample_scores(&source, BoxSpec::new(n), a.samples, &opt, WeightMode::AllColors, a.seed).map_err(runtime)?;
        sample_rows(&mut csv, n, a.q, a.eps, &opt, &records);
        summaries.push(scan_summary(n, &records));
    }
    let m = manifest("gla-scan", a, a.conv)?;
    write_atomic(&a.out.join("samples.csv"), csv.as_bytes())?;
    write_atomic(&a.out.join("summary.json"), &with_manifest(&json!({ "sizes": summaries }), &m)?)?;
    m.save(&a.out.join("manifest.json"))
}

fn tail(a: &TailArgs) -> Result<(), CliError> {
    nonempty(&a.u, "u")?;
    let opt = a.optimizer.optimizer();
    let report =
        estimate_tail(BoxSpec::new(a.n), a.q, a.eps, a.conv, &a.u, a.samples, &opt, a.seed).map_err(runtime)?;
    let mut csv = String::from(SAMPLE_HEADER);
    sample_rows(&mut csv, a.n, a.q, a.eps, &opt, &report.records);
    let tails: Vec<Value> = report
        .estimates
        .iter()
        .map(|t| {
            json!({
                "u": t.u,
                "exceed_count": t.exceed_count,
                "samples": t.samples,
                "fraction": t.fraction(),
                "bound": t.bound,
                "binomial_sigma": t.binomial_sigma(),
            })
        })
        .collect();
    let body = json!({
        "median": report.median,
        "mean": report.mean,
        "stderr": report.stderr,
        "tails": tails,
    });
    let m = manifest("tail", a, a.conv)?;
    write_atomic(&a.out.join("samples.csv"), csv.as_bytes())?;
    write_atomic(&a.out.join("tail.json"), &with_manifest(&body, &m)?)?;
    m.save(&a.out.join("manifest.json"))
}

fn polygon(a: &PolygonArgs) -> Result<(), CliError> {
    let field = load_field(&a.field)?;
    let eps = a.eps.unwrap_or(field.epsilon());
    let levels = run_construction(&field, eps, a.levels, a.variant, a.seed).map_err(runtime)?;
    let last = &levels.last().expect("at least one level").polygon;
    let trace: String = levels.iter().map(|l| l.trace_line() + "\n").collect();
    let summary: Vec<Value> = levels
        .iter()
        .map(|l| {
            json!({
                "level": l.polygon.level,
                "side_count": l.side_count,
                "area": l.area,
                "weight": l.weight,
                "step": l.step,
            })
        })
        .collect();
    let m = manifest("polygon", a, field.convention())?;
    write_atomic(&a.out.join("trace.txt"), trace.as_bytes())?;
    write_atomic(&a.out.join("vertices.csv"), last.vertex_csv().as_bytes())?;
    write_atomic(&a.out.join("polygon.svg"), last.to_svg().as_bytes())?;
    write_atomic(&a.out.join("levels.json"), &with_manifest(&json!({ "levels": summary }), &m)?)?;
    m.save(&a.out.join("manifest.json"))
}

fn system(field: &FieldRealization, eps: Option<f64>) -> Result<PottsSystem, CliError> {
    PottsSystem::from_field(field, eps.unwrap_or(field.epsilon())).map_err(runtime)
}

fn gibbs_exact(a: &GibbsExactArgs) -> Result<(), CliError> {
    let field = load_field(&a.field)?;
    let sys = system(&field, a.eps)?;
    let table = sys.exact_gibbs(a.beta, a.bc).map_err(runtime)?;
    let mean_energy: f64 = table
        .probabilities
        .iter()
        .enumerate()
        .map(|(k, p)| p * sys.energy_of(&table.config(k)))
        .sum();
    let marginals: Vec<Vec<f64>> = (0..sys.grid().len()).map(|i| table.marginal(i)).collect();
    let origin = sys.origin().map(|i| marginals[i].clone());
    let body = json!({
        "states": table.len(),
        "log_partition": table.log_partition,
        "mean_energy": mean_energy,
        "origin_marginal": origin,
        "marginals": marginals,
    });
    let m = manifest("gibbs-exact", a, field.convention())?;
    write_atomic(&a.out, &with_manifest(&body, &m)?)
}

fn initial_config(sys: &PottsSystem, bc: BoundaryCondition) -> Result<SpinConfig, CliError> {
    let color = match bc {
        BoundaryCondition::Wired(c) => c,
        BoundaryCondition::Free => 0,
    };
    SpinConfig::uniform(sys.grid(), sys.q(), color, bc).map_err(runtime)
}

fn mc(a: &McArgs) -> Result<(), CliError> {
    if a.sweeps == 0 {
        return Err(CliError::Usage("--sweeps must be positive".into()));
    }
    let field = load_field(&a.field)?;
    let sys = system(&field, a.eps)?;
    let mut config = initial_config(&sys, a.bc)?;
    let mut stream = rng::purpose_stream(a.seed, Purpose::HeatBath, 0);
    for _ in 0..a.burn_in {
        sys.heat_bath_sweep(&mut config, a.beta, &mut stream).map_err(runtime)?;
    }
    let mut counts = vec![vec![0u64; sys.q()]; sys.grid().len()];
    let mut energy = Vec::with_capacity(a.sweeps as usize);
    for _ in 0..a.sweeps {
        sys.heat_bath_sweep(&mut config, a.beta, &mut stream).map_err(runtime)?;
        for (c, &s) in counts.iter_mut().zip(config.spins()) {
            c[s as usize] += 1;
        }
        energy.push(sys.energy_of(config.spins()));
    }
    let freq = |c: &[u64]| c.iter().map(|&k| k as f64 / a.sweeps as f64).collect::<Vec<_>>();
    let marginals: Vec<Vec<f64>> = counts.iter().map(|c| freq(c)).collect();
    let mean_energy = energy.iter().sum::<f64>() / energy.len() as f64;
    let snapshot = config.to_snapshot().map_err(runtime)?;
    let body = json!({
        "mean_energy": mean_energy,
        "final_energy": energy.last(),
        "origin_marginal": sys.origin().map(|i| marginals[i].clone()),
        "marginals": marginals,
        "final_snapshot": snapshot,
    });
    let m = manifest("mc", a, field.convention())?;
    write_atomic(&a.out.join("final.spins"), snapshot.as_bytes())?;
    write_atomic(&a.out.join("result.json"), &with_manifest(&body, &m)?)?;
    m.save(&a.out.join("manifest.json"))
}

fn ground_state(a: &GroundStateArgs) -> Result<(), CliError> {
    let field = load_field(&a.field)?;
    let sys = system(&field, a.eps)?;
    let method = a.gs.method();
    let (config, energy) = sys.ground_state(a.bc, method, a.seed).map_err(runtime)?;
    let snapshot = config.to_snapshot().map_err(runtime)?;
    let body = json!({
        "energy": energy,
        "bc": a.bc.to_string(),
        "method": method,
        "origin_spin": sys.origin().map(|i| config.spins()[i]),
        "snapshot": snapshot,
    });
    let m = manifest("ground-state", a, field.convention())?;
    write_atomic(&a.out.join("ground.spins"), snapshot.as_bytes())?;
    write_atomic(&a.out.join("result.json"), &with_manifest(&body, &m)?)?;
    m.save(&a.out.join("manifest.json"))?;
    println!("{}", f17(energy));
    Ok(())
}

fn magnetization_cmd(a: &MagnetizationArgs) -> Result<(), CliError> {
    let cfg = MagnetizationConfig {
        spec: BoxSpec::new(a.n),
        q: a.q,
        epsilon: a.eps,
        beta: a.beta,
        convention: a.conv,
        samples: a.samples,
        method: a.thermal.expectation(),
        base_seed: a.seed,
        wired_color: a.wired_color,
    };
    let mag = magnetization(&cfg).map_err(runtime)?;
    let bc = BoundaryCondition::Wired(a.wired_color).to_string();
    let mut csv = String::from("seed,N,q,eps,beta,bc,p0_wired,p0_free,energy_w,energy_f\n");
    for r in &mag.records {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            r.seed,
            a.n,
            a.q,
            f17(a.eps),
            f17(a.beta),
            bc,
            f17(r.p0_wired),
            f17(r.p0_free),
            f17(r.energy_wired),
            f17(r.energy_free)
        )
        .expect("string write");
    }
    let body = json!({ "m": mag.m, "stderr": mag.stderr, "samples": mag.records.len() });
    let m = manifest("magnetization", a, a.conv)?;
    write_atomic(&a.out.join("realizations.csv"), csv.as_bytes())?;
    write_atomic(&a.out.join("summary.json"), &with_manifest(&body, &m)?)?;
    m.save(&a.out.join("manifest.json"))?;
    println!("{} {}", f17(mag.m), f17(mag.stderr));
    Ok(())
}

fn stats(samples: usize, seed: u64, conv: FieldConvention, wired_color: u8, thermal: &ThermalArgs) -> MagnetizationStats {
    MagnetizationStats {
        samples,
        base_seed: seed,
        convention: conv,
        method: thermal.expectation(),
        wired_color,
    }
}

fn corrlen(a: &CorrlenArgs) -> Result<(), CliError> {
    let st = stats(a.samples, a.seed, a.conv, a.wired_color, &a.thermal);
    let r = correlation_length(a.eps, a.q, a.threshold, a.beta, a.search.search(), &st).map_err(runtime)?;
    let m = manifest("corrlen", a, a.conv)?;
    write_atomic(&a.out, &with_manifest(&r, &m)?)?;
    match r.l {
        Some(l) => println!("{l}"),
        None => println!("not found below {}", a.search.n_max),
    }
    Ok(())
}

/// Experiment arguments from `--config` when given, keeping `--out`.
fn from_config<T: DeserializeOwned>(config: Option<PathBuf>, args: T) -> Result<T, CliError> {
    match config {
        Some(path) => serde_json::from_str(&read_text(&path)?)
            .map_err(|e| CliError::Usage(format!("{}: bad experiment config: {e}", path.display()))),
        None => Ok(args),
    }
}

fn thm2(a: Thm2Args) -> Result<(), CliError> {
    let out = a.out.clone();
    let mut a = from_config(a.config.clone(), a)?;
    a.out = out;
    a.config = None;
    nonempty(&a.n, "N")?;
    let opt = a.optimizer.optimizer();
    let report = theorem2_experiment(&a.n, a.q, a.eps, a.conv, opt, a.samples, a.seed).map_err(runtime)?;

    let mut series = String::from("N,mean,stderr,samples\n");
    let mut samples = String::from(SAMPLE_HEADER);
    for (&n, est) in a.n_sorted().iter().zip(&report.estimates) {
        writeln!(series, "{},{},{},{}", n, f17(est.mean), f17(est.stderr), est.records.len()).expect("string write");
        sample_rows(&mut samples, n, a.q, a.eps, &opt, &est.records);
    }
    let body = json!({
        "params": report.params,
        "x_map": MEAN_GLA_MAPS.0,
        "y_map": MEAN_GLA_MAPS.1,
        "fit": report.fit,
        "fit_error": report.fit_error,
        "series": report.series.points(),
    });
    let m = manifest("thm2", &a, a.conv)?;
    write_atomic(&a.out.join("series.csv"), series.as_bytes())?;
    write_atomic(&a.out.join("samples.csv"), samples.as_bytes())?;
    write_atomic(&a.out.join("fit.json"), &with_manifest(&body, &m)?)?;
    emit_plot_data(&report.series, report.fit.as_ref(), MEAN_GLA_MAPS, &a.out.join("plot"))?;
    m.save(&a.out.join("manifest.json"))?;
    if let Some(f) = &report.fit {
        println!("slope {} stderr {}", f17(f.slope), f17(f.stderr_slope));
    }
    Ok(())
}

impl Thm2Args {
    /// Box sizes in the order the experiment reports them.
    fn n_sorted(&self) -> Vec<u32> {
        let mut n = self.n.clone();
        n.sort_unstable();
        n
    }
}

fn thm1(a: Thm1Args) -> Result<(), CliError> {
    let out = a.out.clone();
    let mut a = from_config(a.config.clone(), a)?;
    a.out = out;
    a.config = None;
    nonempty(&a.eps, "eps")?;
    let params = CorrelationParams {
        epsilons: a.eps.clone(),
        q: a.q,
        threshold: a.threshold,
        beta: a.beta,
        search: a.search.search(),
        stats: stats(a.samples, a.seed, a.conv, a.wired_color, &a.thermal),
        flags: InterpretationFlags::new(a.conv),
    };
    let report = theorem1_experiment(params).map_err(runtime)?;

    let mut series = String::from("eps,L,m_at_L,bracket_lo,bracket_hi\n");
    let mut evals = String::from("eps,N,m,stderr\n");
    for r in &report.results {
        writeln!(
            series,
            "{},{},{},{},{}",
            f17(r.epsilon),
            r.l.map(|l| l.to_string()).unwrap_or_default(),
            r.m_at_l.map(f17).unwrap_or_default(),
            r.bracket.0,
            r.bracket.1
        )
        .expect("string write");
        for p in &r.evaluated {
            writeln!(evals, "{},{},{},{}", f17(r.epsilon), p.n, f17(p.m), f17(p.stderr)).expect("string write");
        }
    }
    let body = json!({
        "params": report.params,
        "x_map": CORRELATION_MAPS.0,
        "y_map": CORRELATION_MAPS.1,
        "fit": report.fit,
        "fit_error": report.fit_error,
        "not_found": report.not_found,
        "results": report.results,
    });
    let m = manifest("thm1", &a, a.conv)?;
    write_atomic(&a.out.join("series.csv"), series.as_bytes())?;
    write_atomic(&a.out.join("evaluations.csv"), evals.as_bytes())?;
    write_atomic(&a.out.join("fit.json"), &with_manifest(&body, &m)?)?;
    if !report.series.is_empty() {
        emit_plot_data(&report.series, report.fit.as_ref(), CORRELATION_MAPS, &a.out.join("plot"))?;
    }
    m.save(&a.out.join("manifest.json"))?;
    if let Some(f) = &report.fit {
        println!("slope {} stderr {}", f17(f.slope), f17(f.stderr_slope));
    }
    Ok(())
}

#[derive(Deserialize)]
struct InputRow {
    x: f64,
    y: f64,
    #[serde(default)]
    yerr: f64,
}

pub fn read_series(path: &Path) -> Result<ScalingSeries, CliError> {
    let text = read_text(path)?;
    let bad = |e: csv::Error| CliError::Runtime(format!("{}: {e}", path.display()));
    let points = csv::Reader::from_reader(text.as_bytes())
        .deserialize::<InputRow>()
        .map(|row| row.map(|r| ScalingPoint { x: r.x, y: r.y, yerr: r.yerr }).map_err(bad))
        .collect::<Result<Vec<_>, _>>()?;
    ScalingSeries::new(points, "input").map_err(runtime)
}

fn fit(a: &FitArgs) -> Result<(), CliError> {
    let series = read_series(&a.input)?;
    let f = fit_power_exponent(&series, a.x_map, a.y_map).map_err(runtime)?;
    let m = manifest("fit", a, FieldConvention::default())?;
    write_atomic(&a.out.join("fit.json"), &with_manifest(&json!({ "fit": f, "series": series.points() }), &m)?)?;
    emit_plot_data(&series, Some(&f), (a.x_map, a.y_map), &a.out.join("plot"))?;
    m.save(&a.out.join("manifest.json"))?;
    println!("slope {} stderr {}", f17(f.slope), f17(f.stderr_slope));
    Ok(())
}

fn replay<T: DeserializeOwned>(m: &RunManifest) -> Result<T, CliError> {
    serde_json::from_value(m.parameters.clone())
        .map_err(|e| CliError::Runtime(format!("manifest parameters do not fit `{}`: {e}", m.command)))
}

fn rerun(a: &RerunArgs) -> Result<(), CliError> {
    let m = RunManifest::load(&a.manifest)?;
    let out = a.out.clone();
    let command = match m.command.as_str() {
        "field-gen" => Command::FieldGen(FieldGenArgs { out, ..replay(&m)? }),
        "gla-exact" => Command::GlaExact(GlaExactArgs { out, ..replay(&m)? }),
        "gla-heur" => Command::GlaHeur(GlaHeurArgs { out, ..replay(&m)? }),
        "gla-scan" => Command::GlaScan(GlaScanArgs { out, ..replay(&m)? }),
        "tail" => Command::Tail(TailArgs { out, ..replay(&m)? }),
        "polygon" => Command::Polygon(PolygonArgs { out, ..replay(&m)? }),
        "gibbs-exact" => Command::GibbsExact(GibbsExactArgs { out, ..replay(&m)? }),
        "mc" => Command::Mc(McArgs { out, ..replay(&m)? }),
        "ground-state" => Command::GroundState(GroundStateArgs { out, ..replay(&m)? }),
        "magnetization" => Command::Magnetization(MagnetizationArgs { out, ..replay(&m)? }),
        "corrlen" => Command::Corrlen(CorrlenArgs { out, ..replay(&m)? }),
        "thm2" => Command::Thm2(Thm2Args { out, ..replay(&m)? }),
        "thm1" => Command::Thm1(Thm1Args { out, ..replay(&m)? }),
        "fit" => Command::Fit(FitArgs { out, ..replay(&m)? }),
        other => return Err(CliError::Runtime(format!("manifest names unknown command `{other}`"))),
    };
    dispatch(command)
}
