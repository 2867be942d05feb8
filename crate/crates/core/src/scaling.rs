//! Correlation-length search and exponent fits for finite-size scaling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldConvention, FieldSource, GaussianSource};
use crate::gla::{estimate_mean_gla_with, GlaError, MeanGla, Optimizer};
use crate::lattice::BoxSpec;
use crate::potts::{magnetization_with, Expectation, MagnetizationConfig, PottsError};
use crate::InterpretationFlags;

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("need at least 3 points for a fit, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} (x = {x}, y = {y}) has a {axis} value outside the domain of {map}")]
    OutOfDomain {
        index: usize,
        x: f64,
        y: f64,
        axis: &'static str,
        map: AxisMap,
    },
    #[error("x values must be distinct; point {0} repeats an earlier x")]
    DuplicateX(usize),
    #[error("point {0} has a negative or non-finite error bar")]
    BadError(usize),
    #[error("degenerate fit: all mapped x values coincide")]
    Degenerate,
    #[error("threshold must lie in (0, 1), got {0}")]
    BadThreshold(f64),
    #[error("bad search range: start {start}, max {max}")]
    BadSearch { start: u32, max: u32 },
    #[error("box half-side {0} is below the minimum of 3")]
    SmallBox(u32),
    #[error("epsilon values must be distinct and positive")]
    BadEpsilons,
    #[error(transparent)]
    Gla(#[from] GlaError),
    #[error(transparent)]
    Potts(#[from] PottsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub x: f64,
    pub y: f64,
    pub yerr: f64,
}

/// Points sorted by strictly increasing `x` plus a tag describing what
/// `x` and `y` measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    points: Vec<ScalingPoint>,
    pub transform: String,
}

impl ScalingSeries {
    /// Sorts by `x`; rejects repeated `x` values and negative error bars.
    pub fn new(mut points: Vec<ScalingPoint>, transform: impl Into<String>) -> Result<Self, ScalingError> {
        if let Some(i) = points.iter().position(|p| !(p.yerr >= 0.0) || !p.yerr.is_finite()) {
            return Err(ScalingError::BadError(i));
        }
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        if let Some(i) = points.windows(2).position(|w| w[0].x == w[1].x) {
            return Err(ScalingError::DuplicateX(i + 1));
        }
        Ok(Self {
            points,
            transform: transform.into(),
        })
    }

    pub fn points(&self) -> &[ScalingPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Coordinate transformation applied before fitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisMap {
    Identity,
    /// `ln v`
    Log,
    /// `ln ln v`
    #[serde(rename = "loglog")]
    LogLog,
    /// `ln(1/v)`
    LogReciprocal,
}

impl AxisMap {
    pub fn apply(self, v: f64) -> Option<f64> {
        let out = match self {
            AxisMap::Identity => v,
            AxisMap::Log if v > 0.0 => v.ln(),
            AxisMap::LogLog if v > 1.0 => v.ln().ln(),
            AxisMap::LogReciprocal if v > 0.0 => -v.ln(),
            _ => return None,
        };
        out.is_finite().then_some(out)
    }

    /// `|d map / dv|` for propagating error bars.
    pub fn derivative(self, v: f64) -> f64 {
        match self {
            AxisMap::Identity => 1.0,
            AxisMap::Log | AxisMap::LogReciprocal => 1.0 / v.abs(),
            AxisMap::LogLog => 1.0 / (v * v.ln()).abs(),
        }
    }
}

impl fmt::Display for AxisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisMap::Identity => "identity",
            AxisMap::Log => "log",
            AxisMap::LogLog => "loglog",
            AxisMap::LogReciprocal => "log-reciprocal",
        })
    }
}

impl FromStr for AxisMap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" | "id" => Ok(AxisMap::Identity),
            "log" => Ok(AxisMap::Log),
            "loglog" => Ok(AxisMap::LogLog),
            "log-reciprocal" | "logrecip" => Ok(AxisMap::LogReciprocal),
            _ => Err(format!("unknown axis map `{s}` (identity|log|loglog|log-reciprocal)")),
        }
    }
}

/// Straight-line fit `Y = intercept + slope·X` in mapped coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub stderr_intercept: f64,
    /// `Y_i - (intercept + slope·X_i)` in series order.
    pub residuals: Vec<f64>,
    pub x_map: AxisMap,
    pub y_map: AxisMap,
    /// False when some error bar was zero and the fit fell back to
    /// unweighted least squares.
    pub weighted: bool,
}

impl PowerFit {
    pub fn predict(&self, x_mapped: f64) -> f64 {
        self.intercept + self.slope * x_mapped
    }
}

/// Mapped coordinates and weights; errors name the first offending point.
pub fn mapped_points(series: &ScalingSeries, x_map: AxisMap, y_map: AxisMap) -> Result<Vec<(f64, f64, f64)>, ScalingError> {
    series
        .points
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let bad = |axis, map| ScalingError::OutOfDomain {
                index,
                x: p.x,
                y: p.y,
                axis,
                map,
            };
            let x = x_map.apply(p.x).ok_or_else(|| bad("x", x_map))?;
            let y = y_map.apply(p.y).ok_or_else(|| bad("y", y_map))?;
            Ok((x, y, y_map.derivative(p.y) * p.yerr))
        })
        .collect()
}

/// Weighted least squares on mapped coordinates with weights `1/σ_Y²`,
/// `σ_Y = |map'(y)|·yerr`. Any zero error bar switches to ordinary least
/// squares with residual-based standard errors.
pub fn fit_power_exponent(series: &ScalingSeries, x_map: AxisMap, y_map: AxisMap) -> Result<PowerFit, ScalingError> {
    if series.len() < 3 {
        return Err(ScalingError::TooFewPoints(series.len()));
    }
    let pts = mapped_points(series, x_map, y_map)?;
    let weighted = pts.iter().all(|p| p.2 > 0.0);
    let w: Vec<f64> = pts
        .iter()
        .map(|p| if weighted { 1.0 / (p.2 * p.2) } else { 1.0 })
        .collect();
    let sw: f64 = w.iter().sum();
    let xbar = pts.iter().zip(&w).map(|(p, w)| w * p.0).sum::<f64>() / sw;
    let ybar = pts.iter().zip(&w).map(|(p, w)| w * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().zip(&w).map(|(p, w)| w * (p.0 - xbar).powi(2)).sum();
    let sxy: f64 = pts.iter().zip(&w).map(|(p, w)| w * (p.0 - xbar) * (p.1 - ybar)).sum();
    if !(sxx > 0.0) {
        return Err(ScalingError::Degenerate);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let residuals: Vec<f64> = pts.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    // Weighted fits treat σ_Y as known; unweighted ones estimate the noise
    // level from the residuals.
    let scale = if weighted {
        1.0
    } else {
        residuals.iter().map(|r| r * r).sum::<f64>() / (pts.len() - 2) as f64
    };
    let stderr_slope = (scale / sxx).sqrt();
    let stderr_intercept = (scale * (1.0 / sw + xbar * xbar / sxx)).sqrt();
    Ok(PowerFit {
        slope,
        intercept,
        stderr_slope,
        stderr_intercept,
        residuals,
        x_map,
        y_map,
        weighted,
    })
}

/// Range of box half-sides explored by the correlation-length search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationSearch {
    pub n_start: u32,
    pub n_max: u32,
    /// Doubling then bisection when true, a linear scan otherwise.
    pub doubling: bool,
}

impl CorrelationSearch {
    fn validate(&self) -> Result<(), ScalingError> {
        if self.n_start < 1 || self.n_max < self.n_start {
            return Err(ScalingError::BadSearch {
                start: self.n_start,
                max: self.n_max,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationPoint {
    pub n: u32,
    pub m: f64,
    pub stderr: f64,
}

impl MagnetizationPoint {
    /// Smoothed crossing: `m + 2·stderr ≤ threshold`.
    pub fn crosses(&self, threshold: f64) -> bool {
        self.m + 2.0 * self.stderr <= threshold
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationLengthResult {
    pub epsilon: f64,
    pub threshold: f64,
    /// Least crossing half-side, `None` if nothing up to `n_max` crossed.
    pub l: Option<u32>,
    /// Largest non-crossing and smallest crossing half-sides evaluated. The
    /// low end equals the high end when the start already crosses; the high
    /// end is `n_max` when nothing crossed.
    pub bracket: (u32, u32),
    pub m_at_l: Option<f64>,
    /// Every evaluation, sorted by `n`.
    pub evaluated: Vec<MagnetizationPoint>,
}

/// Finds the least `N` in the search range whose `(m, stderr)` from
/// `m_fn` crosses below `threshold`. Doubling assumes the crossing is
/// monotone in `N`, and each `N` is evaluated at most once.
pub fn correlation_length_with<E>(
    epsilon: f64,
    threshold: f64,
    search: CorrelationSearch,
    mut m_fn: impl FnMut(u32) -> Result<(f64, f64), E>,
) -> Result<CorrelationLengthResult, E>
where
    E: From<ScalingError>,
{
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(ScalingError::BadThreshold(threshold).into());
    }
    search.validate()?;
    let mut seen: BTreeMap<u32, MagnetizationPoint> = BTreeMap::new();
    let mut eval = |n: u32, seen: &mut BTreeMap<u32, MagnetizationPoint>| -> Result<bool, E> {
        if let Some(p) = seen.get(&n) {
            return Ok(p.crosses(threshold));
        }
        let (m, stderr) = m_fn(n)?;
        let p = MagnetizationPoint { n, m, stderr };
        seen.insert(n, p);
        Ok(p.crosses(threshold))
    };

    let mut low = None;
    let mut high = None;
    if search.doubling {
        let mut n = search.n_start;
        loop {
            if eval(n, &mut seen)? {
                high = Some(n);
                break;
            }
            low = Some(n);
            if n == search.n_max {
                break;
            }
            n = n.saturating_mul(2).min(search.n_max);
        }
        if let (Some(mut lo), Some(mut hi)) = (low, high) {
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if eval(mid, &mut seen)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            low = Some(lo);
            high = Some(hi);
        }
    } else {
        for n in search.n_start..=search.n_max {
            if eval(n, &mut seen)? {
                high = Some(n);
                break;
            }
            low = Some(n);
        }
    }

    let bracket = match (low, high) {
        (_, Some(h)) => (low.unwrap_or(h), h),
        (Some(l), None) => (l, search.n_max),
        (None, None) => unreachable!("search range is nonempty"),
    };
    Ok(CorrelationLengthResult {
        epsilon,
        threshold,
        l: high,
        bracket,
        m_at_l: high.map(|h| seen[&h].m),
        evaluated: seen.into_values().collect(),
    })
}

/// Disorder sampling and thermal method behind each magnetization value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationStats {
    pub samples: usize,
    pub base_seed: u64,
    pub convention: FieldConvention,
    pub method: Expectation,
    pub wired_color: u8,
}

fn magnetization_config(epsilon: f64, q: usize, beta: f64, stats: &MagnetizationStats, n: u32) -> MagnetizationConfig {
    MagnetizationConfig {
        spec: BoxSpec::new(n),
        q,
        epsilon,
        beta,
        convention: stats.convention,
        samples: stats.samples,
        method: stats.method,
        base_seed: stats.base_seed,
        wired_color: stats.wired_color,
    }
}

/// Correlation length with magnetizations from the Potts estimator on
/// fields from `source`.
pub fn correlation_length_from(
    source: &dyn FieldSource,
    epsilon: f64,
    q: usize,
    threshold: f64,
    beta: f64,
    search: CorrelationSearch,
    stats: &MagnetizationStats,
) -> Result<CorrelationLengthResult, ScalingError> {
    correlation_length_with(epsilon, threshold, search, |n| {
        let m = magnetization_with(source, &magnetization_config(epsilon, q, beta, stats, n))?;
        Ok::<_, ScalingError>((m.m, m.stderr))
    })
}

pub fn correlation_length(
    epsilon: f64,
    q: usize,
    threshold: f64,
    beta: f64,
    search: CorrelationSearch,
    stats: &MagnetizationStats,
) -> Result<CorrelationLengthResult, ScalingError> {
    let source = GaussianSource {
        q,
        epsilon,
        convention: stats.convention,
    };
    correlation_length_from(&source, epsilon, q, threshold, beta, search, stats)
}

/// Axis maps used for the mean GLA growth fit: `ln mean` against `ln ln N`.
pub const MEAN_GLA_MAPS: (AxisMap, AxisMap) = (AxisMap::LogLog, AxisMap::Log);
/// Axis maps used for the correlation-length fit: `ln ln L` against
/// `ln(1/ε)`.
pub const CORRELATION_MAPS: (AxisMap, AxisMap) = (AxisMap::LogReciprocal, AxisMap::LogLog);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanGlaParams {
    pub n_list: Vec<u32>,
    pub q: usize,
    pub epsilon: f64,
    pub convention: FieldConvention,
    pub optimizer: Optimizer,
    pub samples: usize,
    pub base_seed: u64,
    pub flags: InterpretationFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanGlaReport {
    pub params: MeanGlaParams,
    /// `(N, mean, stderr)`.
    pub series: ScalingSeries,
    pub fit: Option<PowerFit>,
    /// Why the fit was refused, if it was.
    pub fit_error: Option<String>,
    pub estimates: Vec<MeanGla>,
}

impl MeanGlaReport {
    /// Mean at half-side `n`, if measured.
    pub fn mean_at(&self, n: u32) -> Option<f64> {
        self.series.points().iter().find(|p| p.x == n as f64).map(|p| p.y)
    }
}

/// Mean GLA score per box size over the same seed set, fitted as
/// `ln mean` against `ln ln N`.
pub fn theorem2_experiment_with(
    source: &dyn FieldSource,
    params: MeanGlaParams,
) -> Result<MeanGlaReport, ScalingError> {
    if let Some(&n) = params.n_list.iter().find(|&&n| n < 3) {
        return Err(ScalingError::SmallBox(n));
    }
    let mut n_sorted = params.n_list.clone();
    n_sorted.sort_unstable();
    let estimates = n_sorted
        .iter()
        .map(|&n| estimate_mean_gla_with(source, BoxSpec::new(n), params.samples, &params.optimizer, params.base_seed))
        .collect::<Result<Vec<_>, _>>()?;
    let points = n_sorted
        .iter()
        .zip(&estimates)
        .map(|(&n, e)| ScalingPoint {
            x: n as f64,
            y: e.mean,
            yerr: e.stderr,
        })
        .collect();
    let series = ScalingSeries::new(points, "x=N y=mean_gla")?;
    let (fit, fit_error) = match fit_power_exponent(&series, MEAN_GLA_MAPS.0, MEAN_GLA_MAPS.1) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(MeanGlaReport {
        params,
        series,
        fit,
        fit_error,
        estimates,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn theorem2_experiment(
    n_list: &[u32],
    q: usize,
    epsilon: f64,
    convention: FieldConvention,
    optimizer: Optimizer,
    samples: usize,
    base_seed: u64,
) -> Result<MeanGlaReport, ScalingError> {
    let source = GaussianSource {
        q,
        epsilon,
        convention,
    };
    theorem2_experiment_with(
        &source,
        MeanGlaParams {
            n_list: n_list.to_vec(),
            q,
            epsilon,
            convention,
            optimizer,
            samples,
            base_seed,
            flags: InterpretationFlags::new(convention),
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationParams {
    pub epsilons: Vec<f64>,
    pub q: usize,
    pub threshold: f64,
    #[serde(with = "crate::stats::extended_f64")]
    pub beta: f64,
    pub search: CorrelationSearch,
    pub stats: MagnetizationStats,
    pub flags: InterpretationFlags,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub params: CorrelationParams,
    /// `(ε, L, 0)` for every ε whose search crossed.
    pub series: ScalingSeries,
    pub fit: Option<PowerFit>,
    pub fit_error: Option<String>,
    /// Epsilons whose search never crossed below `n_max`.
    pub not_found: Vec<f64>,
    pub results: Vec<CorrelationLengthResult>,
}

impl CorrelationReport {
    pub fn length_at(&self, epsilon: f64) -> Option<Option<u32>> {
        self.results.iter().find(|r| r.epsilon == epsilon).map(|r| r.l)
    }
}

/// Builds the correlation report from one search result per epsilon.
pub fn correlation_report(
    params: CorrelationParams,
    results: Vec<CorrelationLengthResult>,
) -> Result<CorrelationReport, ScalingError> {
    let points = results
        .iter()
        .filter_map(|r| {
            r.l.map(|l| ScalingPoint {
                x: r.epsilon,
                y: l as f64,
                yerr: 0.0,
            })
        })
        .collect();
    let series = ScalingSeries::new(points, "x=epsilon y=correlation_length")?;
    let not_found = results.iter().filter(|r| r.l.is_none()).map(|r| r.epsilon).collect();
    let (fit, fit_error) = match fit_power_exponent(&series, CORRELATION_MAPS.0, CORRELATION_MAPS.1) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(CorrelationReport {
        params,
        series,
        fit,
        fit_error,
        not_found,
        results,
    })
}

/// Correlation length per epsilon, fitted as `ln ln L` against `ln(1/ε)`.
/// Epsilons whose search does not cross are excluded from the fit and
/// listed in `not_found`.
pub fn theorem1_experiment(params: CorrelationParams) -> Result<CorrelationReport, ScalingError> {
    let mut sorted = params.epsilons.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.is_empty() || sorted.iter().any(|e| !(*e > 0.0) || !e.is_finite()) || sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ScalingError::BadEpsilons);
    }
    let results = sorted
        .iter()
        .map(|&eps| correlation_length(eps, params.q, params.threshold, params.beta, params.search, &params.stats))
        .collect::<Result<Vec<_>, _>>()?;
    correlation_report(params, results)
}
