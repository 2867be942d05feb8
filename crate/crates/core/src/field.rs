//! Quenched Gaussian random fields `h_i^α` and animal weights.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{BoxSpec, LatticeAnimal, Site};
use crate::rng;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("need q >= 2 colors, got {0}")]
    TooFewColors(usize),
    #[error("field strength must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("site {0} lies outside the box")]
    OutsideBox(Site),
    #[error("expected {expected} field values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("field value {0} is not finite")]
    NonFinite(f64),
    #[error("corrupt field header: {0}")]
    CorruptHeader(String),
    #[error("unsupported field file version `{0}`")]
    UnsupportedVersion(String),
    #[error("corrupt field payload: {0}")]
    CorruptPayload(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Variance convention for `h_i^α`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldConvention {
    /// `h ~ N(0, 1)`, coupled as `ε·h` in the Hamiltonian.
    #[default]
    #[serde(rename = "unit")]
    UnitVariance,
    /// `h ~ N(0, ε⁻²)`.
    #[serde(rename = "literal")]
    PaperLiteral,
}

impl fmt::Display for FieldConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldConvention::UnitVariance => "unit",
            FieldConvention::PaperLiteral => "literal",
        })
    }
}

impl FromStr for FieldConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(FieldConvention::UnitVariance),
            "literal" => Ok(FieldConvention::PaperLiteral),
            other => Err(format!("unknown field convention `{other}` (unit|literal)")),
        }
    }
}

/// How color channels combine into an animal weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// `Σ_{i∈A} Σ_α h_i^α`.
    #[default]
    AllColors,
    /// `max_α Σ_{i∈A} h_i^α`.
    BestColor,
}

impl WeightMode {
    /// Combine per-color sums into a weight.
    pub fn combine(self, per_color: &[f64]) -> f64 {
        match self {
            WeightMode::AllColors => per_color.iter().sum(),
            WeightMode::BestColor => per_color
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Unit-variance Gaussian values for `sites`, `q` per site, laid out by site
/// then color. Each entry depends only on `(seed, site, color)`.
pub fn gaussian_values(sites: &[Site], q: usize, seed: u64) -> Vec<f64> {
    sites
        .par_iter()
        .flat_map_iter(|&s| {
            let mut stream = rng::stream(seed, rng::site_key(s));
            (0..q).map(move |_| rng::standard_normal(stream.next_u64()))
        })
        .collect()
}

/// One realization of the quenched field on a box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRealization {
    spec: BoxSpec,
    q: usize,
    epsilon: f64,
    seed: u64,
    convention: FieldConvention,
    values: Vec<f64>,
}

pub fn sample_field(
    spec: BoxSpec,
    q: usize,
    epsilon: f64,
    seed: u64,
    convention: FieldConvention,
) -> Result<FieldRealization, FieldError> {
    FieldRealization::sample(spec, q, epsilon, seed, convention)
}

fn check_params(q: usize, epsilon: f64) -> Result<(), FieldError> {
    if q < 2 {
        return Err(FieldError::TooFewColors(q));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(FieldError::BadEpsilon(epsilon));
    }
    Ok(())
}

impl FieldRealization {
    pub fn sample(
        spec: BoxSpec,
        q: usize,
        epsilon: f64,
        seed: u64,
        convention: FieldConvention,
    ) -> Result<Self, FieldError> {
        check_params(q, epsilon)?;
        let mut values = gaussian_values(&spec.sites(), q, seed);
        if convention == FieldConvention::PaperLiteral {
            values.iter_mut().for_each(|v| *v /= epsilon);
        }
        Ok(Self {
            spec,
            q,
            epsilon,
            seed,
            convention,
            values,
        })
    }

    /// Wrap explicit values (layout: site-major, then color).
    pub fn from_values(
        spec: BoxSpec,
        q: usize,
        epsilon: f64,
        seed: u64,
        convention: FieldConvention,
        values: Vec<f64>,
    ) -> Result<Self, FieldError> {
        check_params(q, epsilon)?;
        let expected = q * spec.site_count();
        if values.len() != expected {
            return Err(FieldError::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(FieldError::NonFinite(bad));
        }
        Ok(Self {
            spec,
            q,
            epsilon,
            seed,
            convention,
            values,
        })
    }

    /// Field built from `f(site, color)`; seed 0, `ε = 1`, unit convention.
    pub fn from_fn(
        spec: BoxSpec,
        q: usize,
        mut f: impl FnMut(Site, usize) -> f64,
    ) -> Result<Self, FieldError> {
        let values = spec
            .sites()
            .into_iter()
            .flat_map(|s| (0..q).map(move |a| (s, a)))
            .map(|(s, a)| f(s, a))
            .collect();
        Self::from_values(spec, q, 1.0, 0, FieldConvention::UnitVariance, values)
    }

    pub fn zeros(spec: BoxSpec, q: usize) -> Result<Self, FieldError> {
        Self::from_fn(spec, q, |_, _| 0.0)
    }

    pub fn spec(&self) -> BoxSpec {
        self.spec
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn convention(&self) -> FieldConvention {
        self.convention
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The `q` entries at box index `index`.
    pub fn at_index(&self, index: usize) -> &[f64] {
        &self.values[index * self.q..(index + 1) * self.q]
    }

    pub fn at(&self, site: Site) -> Option<&[f64]> {
        self.spec.index(site).map(|i| self.at_index(i))
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Same realization with the color channels permuted: channel `a` of the
    /// result is channel `perm[a]` of `self`.
    pub fn permute_colors(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.q);
        let mut out = self.clone();
        for (i, chunk) in out.values.chunks_mut(self.q).enumerate() {
            let src = &self.values[i * self.q..(i + 1) * self.q];
            for (a, v) in chunk.iter_mut().enumerate() {
                *v = src[perm[a]];
            }
        }
        out
    }

    /// Per-color sums over `sites`.
    pub fn color_sums(&self, sites: &[Site]) -> Result<Vec<f64>, FieldError> {
        let mut sums = vec![0.0; self.q];
        for &s in sites {
            let vals = self.at(s).ok_or(FieldError::OutsideBox(s))?;
            for (acc, v) in sums.iter_mut().zip(vals) {
                *acc += v;
            }
        }
        Ok(sums)
    }

    pub fn weight(&self, sites: &[Site], mode: WeightMode) -> Result<f64, FieldError> {
        match mode {
            // Site-major accumulation, matching the literal double sum.
            WeightMode::AllColors => sites.iter().try_fold(0.0, |acc, &s| {
                let vals = self.at(s).ok_or(FieldError::OutsideBox(s))?;
                Ok(acc + vals.iter().sum::<f64>())
            }),
            WeightMode::BestColor => Ok(mode.combine(&self.color_sums(sites)?)),
        }
    }

    pub fn header(&self) -> String {
        format!(
            "RFPM-FIELD v1 N={} q={} eps={} seed={} conv={}",
            self.spec.n(),
            self.q,
            self.epsilon,
            self.seed,
            self.convention
        )
    }

    /// Header line, then one line per site holding its `q` values with 17
    /// significant digits.
    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.header())?;
        for chunk in self.values.chunks(self.q) {
            let line: Vec<String> = chunk.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("write to vec");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let (header, payload) = text.split_once('\n').unwrap_or((text, ""));
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("RFPM-FIELD") {
            return Err(FieldError::CorruptHeader("missing RFPM-FIELD tag".into()));
        }
        match tokens.next() {
            Some("v1") => {}
            Some(v) => return Err(FieldError::UnsupportedVersion(v.to_string())),
            None => return Err(FieldError::CorruptHeader("missing version".into())),
        }
        let mut take = |key: &str| -> Result<&str, FieldError> {
            let tok = tokens
                .next()
                .ok_or_else(|| FieldError::CorruptHeader(format!("missing {key}")))?;
            tok.strip_prefix(key)
                .and_then(|t| t.strip_prefix('='))
                .ok_or_else(|| FieldError::CorruptHeader(format!("expected {key}=, got `{tok}`")))
        };
        let bad = |what: &str| FieldError::CorruptHeader(format!("unparseable {what}"));
        let n: u32 = take("N")?.parse().map_err(|_| bad("N"))?;
        let q: usize = take("q")?.parse().map_err(|_| bad("q"))?;
        let epsilon: f64 = take("eps")?.parse().map_err(|_| bad("eps"))?;
        let seed: u64 = take("seed")?.parse().map_err(|_| bad("seed"))?;
        let convention: FieldConvention = take("conv")?.parse().map_err(FieldError::CorruptHeader)?;
        let values = payload
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| FieldError::CorruptPayload(format!("bad float `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(BoxSpec::new(n), q, epsilon, seed, convention, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FieldError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FieldError> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

pub fn save_field(field: &FieldRealization, path: impl AsRef<Path>) -> Result<(), FieldError> {
    field.save(path)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<FieldRealization, FieldError> {
    FieldRealization::load(path)
}

/// `w(A) = Σ_{i∈A} Σ_α h_i^α`.
pub fn animal_weight(field: &FieldRealization, animal: &LatticeAnimal) -> Result<f64, FieldError> {
    field.weight(animal.sites(), WeightMode::AllColors)
}

/// Produces the field for a disorder sample.
pub trait FieldSource: Sync {
    fn field(&self, spec: BoxSpec, seed: u64) -> Result<FieldRealization, FieldError>;
}

/// Seeded Gaussian fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSource {
    pub q: usize,
    pub epsilon: f64,
    pub convention: FieldConvention,
}

impl FieldSource for GaussianSource {
    fn field(&self, spec: BoxSpec, seed: u64) -> Result<FieldRealization, FieldError> {
        FieldRealization::sample(spec, self.q, self.epsilon, seed, self.convention)
    }
}

impl<F> FieldSource for F
where
    F: Fn(BoxSpec, u64) -> Result<FieldRealization, FieldError> + Sync,
{
    fn field(&self, spec: BoxSpec, seed: u64) -> Result<FieldRealization, FieldError> {
        self(spec, seed)
    }
}
