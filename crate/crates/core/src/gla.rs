//! Greedy lattice animal maximization: `max_{A ∋ 0} w(A) / |∂A|`.
//!
//! [`exact_gla`] certifies the maximum over the enumerated family; the greedy
//! and annealing heuristics scale to boxes where enumeration is hopeless. The
//! disorder-level estimators average any of them over seeded fields.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::field::{FieldSource, GaussianSource};
use crate::field::{FieldConvention, FieldError, FieldRealization, WeightMode};
use crate::lattice::{enumerate_animals, BoxSpec, LatticeAnimal, Site, BOUNDARY_KIND};
use crate::occupancy::Occupancy;
use crate::rng::{self, Purpose};
use crate::stats::{median, MeanEstimate};

#[derive(Debug, Error)]
pub enum GlaError {
    #[error("the family predicate excludes every enumerated animal")]
    EmptyFamily,
    #[error("start site {0} lies outside the box")]
    StartOutsideBox(Site),
    #[error("invalid annealing schedule: {0}")]
    BadSchedule(String),
    #[error("need at least {needed} disorder samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("threshold u must be non-negative and finite, got {0}")]
    BadThreshold(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlaMethod {
    Exact,
    Greedy,
    Anneal,
}

impl fmt::Display for GlaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlaMethod::Exact => "exact",
            GlaMethod::Greedy => "greedy",
            GlaMethod::Anneal => "anneal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlaResult {
    pub animal: LatticeAnimal,
    /// `w(A) / |∂A|`, recomputed from scratch for the returned animal.
    pub score: f64,
    pub method: GlaMethod,
    /// Number of candidate scores computed.
    pub evaluations: u64,
}

/// Geometric cooling from `t0` to `t_end` over `sweeps · |Λ_N|` proposals,
/// repeated from the greedy animal `restarts` times on independent streams.
/// Temperatures are in units of field weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t0: f64,
    pub t_end: f64,
    pub sweeps: u32,
    #[serde(default = "one")]
    pub restarts: u32,
}

fn one() -> u32 {
    1
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<(), GlaError> {
        if !(self.t_end > 0.0 && self.t0 > self.t_end && self.t0.is_finite()) {
            return Err(GlaError::BadSchedule(format!(
                "need t0 > t_end > 0, got t0={} t_end={}",
                self.t0, self.t_end
            )));
        }
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(GlaError::BadSchedule("sweeps and restarts must be positive".into()));
        }
        Ok(())
    }
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            t0: 0.5,
            t_end: 0.02,
            sweeps: 100,
            restarts: 8,
        }
    }
}

/// Which maximizer a disorder average runs per realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Optimizer {
    Exact { max_size: usize },
    Greedy { steps: usize },
    Anneal { schedule: AnnealSchedule },
}

impl Optimizer {
    pub fn method(&self) -> GlaMethod {
        match self {
            Optimizer::Exact { .. } => GlaMethod::Exact,
            Optimizer::Greedy { .. } => GlaMethod::Greedy,
            Optimizer::Anneal { .. } => GlaMethod::Anneal,
        }
    }
}

impl FromStr for GlaMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(GlaMethod::Exact),
            "greedy" => Ok(GlaMethod::Greedy),
            "anneal" => Ok(GlaMethod::Anneal),
            other => Err(format!("unknown method `{other}` (exact|greedy|anneal)")),
        }
    }
}

/// Scores animals against one field under one weight mode.
#[derive(Clone, Copy, Debug)]
pub struct Scorer<'a> {
    pub field: &'a FieldRealization,
    pub mode: WeightMode,
}

impl<'a> Scorer<'a> {
    pub fn new(field: &'a FieldRealization, mode: WeightMode) -> Self {
        Self { field, mode }
    }

    pub fn score(&self, animal: &LatticeAnimal) -> Result<f64, GlaError> {
        Ok(self.field.weight(animal.sites(), self.mode)? / animal.boundary_size() as f64)
    }

    fn result(&self, animal: LatticeAnimal, method: GlaMethod, evaluations: u64) -> Result<GlaResult, GlaError> {
        let score = self.score(&animal)?;
        Ok(GlaResult {
            animal,
            score,
            method,
            evaluations,
        })
    }

    /// Certified maximum over simply connected animals through the origin of
    /// size at most `max_size`, optionally restricted by `family`. Ties go to
    /// the lexicographically least canonical form.
    ///
    /// Practical for boxes up to about 49 sites and `max_size ≤ 10`.
    pub fn exact(
        &self,
        max_size: usize,
        family: Option<&dyn Fn(&LatticeAnimal) -> bool>,
    ) -> Result<GlaResult, GlaError> {
        let mut best: Option<(f64, LatticeAnimal)> = None;
        let mut evaluations = 0u64;
        for animal in enumerate_animals(self.field.spec(), max_size) {
            if let Some(pred) = family {
                if !pred(&animal) {
                    continue;
                }
            }
            evaluations += 1;
            let score = self.score(&animal)?;
            let better = match &best {
                None => true,
                Some((s, a)) => score > *s || (score == *s && animal < *a),
            };
            if better {
                best = Some((score, animal));
            }
        }
        let (_, animal) = best.ok_or(GlaError::EmptyFamily)?;
        self.result(animal, GlaMethod::Exact, evaluations)
    }

    /// Grow from `start` by the single-site addition that most improves the
    /// score, for at most `steps` additions. The animal contains the origin
    /// only if `start` is the origin or growth reaches it.
    pub fn greedy(&self, start: Site, steps: usize) -> Result<GlaResult, GlaError> {
        let spec = self.field.spec();
        if !spec.contains(start) {
            return Err(GlaError::StartOutsideBox(start));
        }
        let mut state = LocalState::new(self, start);
        let mut evaluations = 1u64;
        for _ in 0..steps {
            let current = state.score(self.mode);
            let mut best: Option<(f64, Site, usize)> = None;
            for &c in state.occ.frontier() {
                if !state.occ.can_add(c) {
                    continue;
                }
                evaluations += 1;
                let s = state.score_after_add(self, c);
                let site = state.occ.site(c);
                let better = match best {
                    None => true,
                    Some((bs, bsite, _)) => s > bs || (s == bs && site < bsite),
                };
                if better {
                    best = Some((s, site, c));
                }
            }
            match best {
                Some((s, _, c)) if s > current => state.add(self, c),
                _ => break,
            }
        }
        let animal = LatticeAnimal::from_canonical(state.occ.member_sites());
        self.result(animal, GlaMethod::Greedy, evaluations)
    }

    /// Simulated annealing over moves that add a frontier site or remove a
    /// non-origin site, keeping every visited animal simply connected and
    /// inside the box. Every restart starts from the greedy animal grown at
    /// the origin; the best animal seen over all restarts is returned.
    pub fn anneal(&self, schedule: AnnealSchedule, seed: u64) -> Result<GlaResult, GlaError> {
        schedule.validate()?;
        let spec = self.field.spec();
        let greedy = self.greedy(Site::ORIGIN, usize::MAX)?;
        let mut evaluations = greedy.evaluations;
        let mut initial = LocalState::new(self, Site::ORIGIN);
        for &s in greedy.animal.sites() {
            if s != Site::ORIGIN {
                let c = initial.occ.cell(s).expect("in box");
                initial.add(self, c);
            }
        }
        let origin = initial.occ.cell(Site::ORIGIN).expect("origin");
        let sweep_len = spec.site_count() as u64;
        let total = sweep_len * schedule.sweeps as u64;
        let ratio = (schedule.t_end / schedule.t0).ln();
        let mut best_score = greedy.score;
        let mut best_sites = greedy.animal.sites().to_vec();

        for restart in 0..schedule.restarts {
            let mut state = initial.clone();
            let mut rng = rng::purpose_stream(seed, Purpose::GlaAnneal, restart);
            let mut weight = self.mode.combine(&state.sums);
            let mut boundary = state.occ.boundary(BOUNDARY_KIND) as f64;
            for step in 0..total {
                if step % sweep_len == 0 {
                    // Refresh the running sums to stop rounding drift.
                    state.resum(self);
                    weight = self.mode.combine(&state.sums);
                }
                let frac = if total > 1 { step as f64 / (total - 1) as f64 } else { 1.0 };
                let temp = schedule.t0 * (ratio * frac).exp();
                let grow = state.occ.len() == 1 || rng.gen_bool(0.5);
                let (candidate, valid) = if grow {
                    let f = state.occ.frontier();
                    if f.is_empty() {
                        continue;
                    }
                    let c = f[rng.gen_range(0..f.len())];
                    (c, state.occ.can_add(c))
                } else {
                    let m = state.occ.members();
                    let c = m[rng.gen_range(0..m.len())];
                    (c, c != origin && state.occ.can_remove(c))
                };
                if !valid {
                    continue;
                }
                evaluations += 1;
                let sign = if grow { 1.0 } else { -1.0 };
                let new_weight = state.weight_after(self, candidate, sign);
                let new_boundary = if grow {
                    state.occ.boundary_after_add(candidate, BOUNDARY_KIND)
                } else {
                    state.occ.boundary_after_remove(candidate, BOUNDARY_KIND)
                } as f64;
                // Parametric energy `w - λ·|∂A|` with `λ` the best ratio so far:
                // its moves are on the field's scale whatever the animal size,
                // and any state with positive energy beats the best ratio.
                let delta = (new_weight - weight) - best_score * (new_boundary - boundary);
                let accept = delta >= 0.0 || rng.gen::<f64>() < (delta / temp).exp();
                if !accept {
                    continue;
                }
                if grow {
                    state.add(self, candidate);
                } else {
                    state.remove(self, candidate);
                }
                weight = new_weight;
                boundary = new_boundary;
                if weight / boundary > best_score {
                    best_score = weight / boundary;
                    best_sites = state.occ.member_sites();
                }
            }
        }
        let animal = LatticeAnimal::from_canonical(best_sites);
        self.result(animal, GlaMethod::Anneal, evaluations)
    }

    pub fn run(&self, optimizer: &Optimizer, seed: u64) -> Result<GlaResult, GlaError> {
        match *optimizer {
            Optimizer::Exact { max_size } => self.exact(max_size, None),
            Optimizer::Greedy { steps } => self.greedy(Site::ORIGIN, steps),
            Optimizer::Anneal { schedule } => self.anneal(schedule, seed),
        }
    }
}

/// Occupancy plus running per-color weight sums.
#[derive(Clone)]
struct LocalState {
    occ: Occupancy,
    sums: Vec<f64>,
}

impl LocalState {
    fn new(scorer: &Scorer<'_>, start: Site) -> Self {
        let mut occ = Occupancy::new(scorer.field.spec());
        let c = occ.cell(start).expect("start in box");
        occ.add(c);
        let sums = scorer.field.at(start).expect("start in box").to_vec();
        Self { occ, sums }
    }

    fn values<'f>(&self, scorer: &Scorer<'f>, c: usize) -> &'f [f64] {
        scorer.field.at(self.occ.site(c)).expect("cell in box")
    }

    fn score(&self, mode: WeightMode) -> f64 {
        mode.combine(&self.sums) / self.occ.boundary(BOUNDARY_KIND) as f64
    }

    /// Combined weight after adding (`sign = 1`) or removing (`sign = -1`)
    /// cell `c`.
    fn weight_after(&self, scorer: &Scorer<'_>, c: usize, sign: f64) -> f64 {
        let vals = self.values(scorer, c);
        let shifted = self.sums.iter().zip(vals).map(|(s, v)| s + sign * v);
        match scorer.mode {
            WeightMode::AllColors => shifted.sum(),
            WeightMode::BestColor => shifted.fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn score_after_add(&self, scorer: &Scorer<'_>, c: usize) -> f64 {
        self.weight_after(scorer, c, 1.0) / self.occ.boundary_after_add(c, BOUNDARY_KIND) as f64
    }

    fn add(&mut self, scorer: &Scorer<'_>, c: usize) {
        let vals = self.values(scorer, c);
        self.sums.iter_mut().zip(vals).for_each(|(s, v)| *s += v);
        self.occ.add(c);
    }

    fn remove(&mut self, scorer: &Scorer<'_>, c: usize) {
        let vals = self.values(scorer, c);
        self.sums.iter_mut().zip(vals).for_each(|(s, v)| *s -= v);
        self.occ.remove(c);
    }

    fn resum(&mut self, scorer: &Scorer<'_>) {
        self.sums = scorer
            .field
            .color_sums(&self.occ.member_sites())
            .expect("members in box");
    }
}

pub fn exact_gla(
    field: &FieldRealization,
    max_size: usize,
    family: Option<&dyn Fn(&LatticeAnimal) -> bool>,
) -> Result<GlaResult, GlaError> {
    Scorer::new(field, WeightMode::AllColors).exact(max_size, family)
}

pub fn greedy_gla(field: &FieldRealization, start: Site, steps: usize) -> Result<GlaResult, GlaError> {
    Scorer::new(field, WeightMode::AllColors).greedy(start, steps)
}

pub fn anneal_gla(
    field: &FieldRealization,
    schedule: AnnealSchedule,
    seed: u64,
) -> Result<GlaResult, GlaError> {
    Scorer::new(field, WeightMode::AllColors).anneal(schedule, seed)
}

/// One disorder sample of a GLA run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub score: f64,
    pub animal_size: usize,
    pub boundary: u32,
    pub evaluations: u64,
}

/// Runs `optimizer` on fields with seeds `base_seed..base_seed + samples`,
/// in parallel, returning records in seed order.
pub fn sample_scores(
    source: &dyn FieldSource,
    spec: BoxSpec,
    samples: usize,
    optimizer: &Optimizer,
    mode: WeightMode,
    base_seed: u64,
) -> Result<Vec<SampleRecord>, GlaError> {
    (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base_seed.wrapping_add(k);
            let field = source.field(spec, seed)?;
            let r = Scorer::new(&field, mode).run(optimizer, seed)?;
            Ok(SampleRecord {
                seed,
                score: r.score,
                animal_size: r.animal.len(),
                boundary: r.animal.boundary_size(),
                evaluations: r.evaluations,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanGla {
    pub mean: f64,
    pub stderr: f64,
    pub records: Vec<SampleRecord>,
}

pub fn estimate_mean_gla_with(
    source: &dyn FieldSource,
    spec: BoxSpec,
    samples: usize,
    optimizer: &Optimizer,
    base_seed: u64,
) -> Result<MeanGla, GlaError> {
    if samples < 2 {
        return Err(GlaError::TooFewSamples { needed: 2, got: samples });
    }
    let records = sample_scores(source, spec, samples, optimizer, WeightMode::AllColors, base_seed)?;
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let est = MeanEstimate::of(&scores).expect("two or more samples");
    Ok(MeanGla {
        mean: est.mean,
        stderr: est.stderr,
        records,
    })
}

/// Disorder-averaged GLA score with its standard error.
#[allow(clippy::too_many_arguments)]
pub fn estimate_mean_gla(
    spec: BoxSpec,
    q: usize,
    epsilon: f64,
    convention: FieldConvention,
    samples: usize,
    optimizer: &Optimizer,
    base_seed: u64,
) -> Result<MeanGla, GlaError> {
    let source = GaussianSource {
        q,
        epsilon,
        convention,
    };
    estimate_mean_gla_with(&source, spec, samples, optimizer, base_seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub u: f64,
    pub exceed_count: usize,
    pub samples: usize,
    /// `exp(-u²/2)`.
    pub bound: f64,
}

impl TailEstimate {
    pub fn fraction(&self) -> f64 {
        self.exceed_count as f64 / self.samples as f64
    }

    /// Binomial standard deviation of the fraction if it sat exactly at the
    /// bound.
    pub fn binomial_sigma(&self) -> f64 {
        (self.bound * (1.0 - self.bound) / self.samples as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// Empirical median score, the centering `Ĉ`.
    pub median: f64,
    pub mean: f64,
    pub stderr: f64,
    pub estimates: Vec<TailEstimate>,
    pub records: Vec<SampleRecord>,
}

/// Minimum sample count for a tail estimate.
pub const MIN_TAIL_SAMPLES: usize = 100;

pub fn tail_from_scores(scores: &[f64], u_list: &[f64]) -> Result<(f64, Vec<TailEstimate>), GlaError> {
    if scores.len() < MIN_TAIL_SAMPLES {
        return Err(GlaError::TooFewSamples {
            needed: MIN_TAIL_SAMPLES,
            got: scores.len(),
        });
    }
    if let Some(&u) = u_list.iter().find(|u| !(**u >= 0.0 && u.is_finite())) {
        return Err(GlaError::BadThreshold(u));
    }
    let center = median(scores).expect("nonempty");
    let estimates = u_list
        .iter()
        .map(|&u| TailEstimate {
            u,
            exceed_count: scores.iter().filter(|&&s| s > center + u).count(),
            samples: scores.len(),
            bound: (-u * u / 2.0).exp(),
        })
        .collect();
    Ok((center, estimates))
}

pub fn estimate_tail_with(
    source: &dyn FieldSource,
    spec: BoxSpec,
    u_list: &[f64],
    samples: usize,
    optimizer: &Optimizer,
    base_seed: u64,
) -> Result<TailReport, GlaError> {
    if samples < MIN_TAIL_SAMPLES {
        return Err(GlaError::TooFewSamples {
            needed: MIN_TAIL_SAMPLES,
            got: samples,
        });
    }
    let records = sample_scores(source, spec, samples, optimizer, WeightMode::AllColors, base_seed)?;
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let (median, estimates) = tail_from_scores(&scores, u_list)?;
    let est = MeanEstimate::of(&scores).expect("many samples");
    Ok(TailReport {
        median,
        mean: est.mean,
        stderr: est.stderr,
        estimates,
        records,
    })
}

/// Fraction of realizations whose score exceeds the empirical median by more
/// than each `u`, next to the Gaussian-concentration bound `exp(-u²/2)`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_tail(
    spec: BoxSpec,
    q: usize,
    epsilon: f64,
    convention: FieldConvention,
    u_list: &[f64],
    samples: usize,
    optimizer: &Optimizer,
    base_seed: u64,
) -> Result<TailReport, GlaError> {
    let source = GaussianSource {
        q,
        epsilon,
        convention,
    };
    estimate_tail_with(&source, spec, u_list, samples, optimizer, base_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::is_simply_connected;

    fn peak_field(spec: BoxSpec, q: usize) -> FieldRealization {
        FieldRealization::from_fn(spec, q, |s, _| if s == Site::ORIGIN { 1.0 } else { -1e6 }).unwrap()
    }

    fn gauss(n: u32, q: usize, seed: u64) -> FieldRealization {
        FieldRealization::sample(BoxSpec::new(n), q, 1.0, seed, FieldConvention::UnitVariance).unwrap()
    }

    #[test]
    fn exact_single_peak() {
        let f = peak_field(BoxSpec::new(2), 3);
        let r = exact_gla(&f, 6, None).unwrap();
        assert_eq!(r.animal, LatticeAnimal::singleton(Site::ORIGIN));
        assert_eq!(r.score, 0.75);
        assert_eq!(r.method, GlaMethod::Exact);
    }

    #[test]
    fn exact_zero_field_tie_break() {
        let f = FieldRealization::zeros(BoxSpec::new(2), 2).unwrap();
        let r = exact_gla(&f, 5, None).unwrap();
        assert_eq!(r.score, 0.0);
        let least = enumerate_animals(BoxSpec::new(2), 5).min().unwrap();
        assert_eq!(r.animal, least);
    }

    #[test]
    fn exact_zero_field_singleton_when_only_singleton_allowed() {
        let f = FieldRealization::zeros(BoxSpec::new(2), 2).unwrap();
        let r = exact_gla(&f, 1, None).unwrap();
        assert_eq!(r.animal, LatticeAnimal::singleton(Site::ORIGIN));
    }

    #[test]
    fn empty_family_is_an_error() {
        let f = gauss(1, 2, 0);
        let none = |_: &LatticeAnimal| false;
        assert!(matches!(exact_gla(&f, 3, Some(&none)), Err(GlaError::EmptyFamily)));
    }

    #[test]
    fn restriction_never_beats_full_family() {
        for seed in 0..10 {
            let f = gauss(2, 3, seed);
            let full = exact_gla(&f, 6, None).unwrap();
            let even = |a: &LatticeAnimal| a.len() % 2 == 1;
            let restricted = exact_gla(&f, 6, Some(&even)).unwrap();
            assert!(restricted.score <= full.score);
            assert!(restricted.animal.len() % 2 == 1);
        }
    }

    #[test]
    fn greedy_single_peak_stops_immediately() {
        let f = peak_field(BoxSpec::new(3), 2);
        let r = greedy_gla(&f, Site::ORIGIN, 100).unwrap();
        assert_eq!(r.animal, LatticeAnimal::singleton(Site::ORIGIN));
        assert_eq!(r.score, 0.5);
    }

    #[test]
    fn greedy_start_outside_box() {
        let f = gauss(1, 2, 0);
        assert!(matches!(
            greedy_gla(&f, Site::new(5, 0), 3),
            Err(GlaError::StartOutsideBox(_))
        ));
    }

    #[test]
    fn greedy_and_anneal_are_admissible() {
        let schedule = AnnealSchedule {
            t0: 0.5,
            t_end: 0.01,
            sweeps: 30,
            restarts: 2,
        };
        for seed in 0..20 {
            let f = gauss(1, 3, seed);
            let exact = exact_gla(&f, 9, None).unwrap();
            for r in [greedy_gla(&f, Site::ORIGIN, 100).unwrap(), anneal_gla(&f, schedule, seed).unwrap()] {
                assert!(r.score <= exact.score + 1e-12, "seed {seed}: {} > {}", r.score, exact.score);
                assert!(r.animal.contains_origin());
                assert!(is_simply_connected(r.animal.sites()));
                assert!(r.animal.within(f.spec()));
            }
        }
    }

    #[test]
    fn anneal_bad_schedule() {
        let f = gauss(1, 2, 0);
        for (t0, t_end, sweeps, restarts) in [(0.1, 0.5, 3, 1), (1.0, 0.0, 3, 1), (1.0, 0.1, 0, 1), (1.0, 0.1, 3, 0)] {
            let s = AnnealSchedule {
                t0,
                t_end,
                sweeps,
                restarts,
            };
            assert!(matches!(anneal_gla(&f, s, 0), Err(GlaError::BadSchedule(_))));
        }
    }

    #[test]
    fn anneal_zero_field_and_determinism() {
        let zero = FieldRealization::zeros(BoxSpec::new(3), 2).unwrap();
        assert_eq!(anneal_gla(&zero, AnnealSchedule::default(), 1).unwrap().score, 0.0);
        let f = gauss(4, 2, 5);
        let a = anneal_gla(&f, AnnealSchedule::default(), 9).unwrap();
        let b = anneal_gla(&f, AnnealSchedule::default(), 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn result_score_matches_recomputation() {
        let f = gauss(4, 3, 2);
        let r = anneal_gla(&f, AnnealSchedule::default(), 2).unwrap();
        let w = crate::field::animal_weight(&f, &r.animal).unwrap();
        let s = w / r.animal.boundary_size() as f64;
        assert!((s - r.score).abs() <= 1e-12 * s.abs().max(1.0));
    }

    #[test]
    fn best_color_mode_through_exact_and_anneal() {
        let f = gauss(2, 3, 4);
        let all = Scorer::new(&f, WeightMode::AllColors);
        let best = Scorer::new(&f, WeightMode::BestColor);
        let a = all.exact(5, None).unwrap();
        let b = best.exact(5, None).unwrap();
        let g = gauss(1, 3, 4);
        let best = Scorer::new(&g, WeightMode::BestColor);
        let h = best.anneal(AnnealSchedule::default(), 4).unwrap();
        assert!(h.score <= best.exact(9, None).unwrap().score + 1e-12);
        assert!(a.score.is_finite() && b.score.is_finite());
    }

    #[test]
    fn mean_estimate_zero_field_hook() {
        let zero = |spec: BoxSpec, _seed: u64| FieldRealization::zeros(spec, 2);
        let r = estimate_mean_gla_with(&zero, BoxSpec::new(2), 5, &Optimizer::Exact { max_size: 4 }, 0).unwrap();
        assert_eq!((r.mean, r.stderr), (0.0, 0.0));
        assert_eq!(r.records.len(), 5);
        assert!(matches!(
            estimate_mean_gla_with(&zero, BoxSpec::new(2), 1, &Optimizer::Exact { max_size: 4 }, 0),
            Err(GlaError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn mean_monotone_in_max_size() {
        let spec = BoxSpec::new(2);
        let small = estimate_mean_gla(spec, 2, 1.0, FieldConvention::UnitVariance, 30, &Optimizer::Exact { max_size: 4 }, 10).unwrap();
        let large = estimate_mean_gla(spec, 2, 1.0, FieldConvention::UnitVariance, 30, &Optimizer::Exact { max_size: 8 }, 10).unwrap();
        assert!(large.mean >= small.mean);
        for (s, l) in small.records.iter().zip(&large.records) {
            assert!(l.score >= s.score);
        }
    }

    #[test]
    fn tail_refuses_small_samples_and_bad_u() {
        let scores = vec![0.0; 99];
        assert!(matches!(tail_from_scores(&scores, &[1.0]), Err(GlaError::TooFewSamples { .. })));
        let scores = vec![0.0; 100];
        assert!(matches!(tail_from_scores(&scores, &[-1.0]), Err(GlaError::BadThreshold(_))));
    }

    #[test]
    fn tail_median_centering() {
        let scores: Vec<f64> = (0..101).map(|i| i as f64 / 100.0).collect();
        let (center, est) = tail_from_scores(&scores, &[0.0, 0.25, 10.0]).unwrap();
        assert_eq!(center, 0.5);
        assert_eq!(est[0].exceed_count, 50);
        assert_eq!(est[1].exceed_count, 25);
        assert_eq!(est[2].exceed_count, 0);
        assert!((est[0].bound - 1.0).abs() < 1e-15);
    }
}
