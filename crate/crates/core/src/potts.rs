//! Random-field Potts Hamiltonian, exact Gibbs tables, heat-bath sampling,
//! ground states and the spontaneous magnetization estimator.
//!
//! `H(s) = -[ Σ_{i~j} δ(s_i, s_j) + Σ_i Σ_α ε·h_i^α·δ(s_i, α) ]`, with the
//! field acting at every site and the inverse temperature appearing once, in
//! the Gibbs weight `exp(-β·H)`.

use std::fmt;
use std::str::FromStr;

use petgraph::algo::dinics;
use petgraph::graph::{Graph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldConvention, FieldError, FieldRealization, FieldSource, GaussianSource};
use crate::lattice::{BoxSpec, Grid, Site};
use crate::rng::{self, Purpose, Stream};
use crate::stats::MeanEstimate;

/// Largest state space the exhaustive routines will enumerate.
pub const MAX_STATES: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum PottsError {
    #[error("grid or color count of the configuration does not match the system")]
    Mismatch,
    #[error("spin label {label} is not below q = {q}")]
    BadLabel { label: u8, q: usize },
    #[error("wired color {color} is not below q = {q}")]
    BadWiredColor { color: u8, q: usize },
    #[error("expected {expected} entries, got {found}")]
    Length { expected: usize, found: usize },
    #[error("state space of {0} configurations is too large to enumerate")]
    TooLarge(f64),
    #[error("inverse temperature must be positive, got {0}")]
    BadBeta(f64),
    #[error("infinite beta needs a ground-state method")]
    InfiniteBeta,
    #[error("ground-state methods need beta = inf")]
    FiniteBetaGroundState,
    #[error("need at least {needed} disorder samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("bad spin snapshot: {0}")]
    Snapshot(String),
    #[error("need q >= 2 colors, got {0}")]
    TooFewColors(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Outer ring clamped to one color.
    Wired(u8),
    Free,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Wired(c) => write!(f, "wired:{c}"),
            BoundaryCondition::Free => f.write_str("free"),
        }
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "free" => Ok(BoundaryCondition::Free),
            "wired" => Ok(BoundaryCondition::Wired(0)),
            _ => s
                .strip_prefix("wired:")
                .and_then(|c| c.parse().ok())
                .map(BoundaryCondition::Wired)
                .ok_or_else(|| format!("bad boundary condition `{s}` (free|wired[:c])")),
        }
    }
}

/// Inverse temperature (possibly infinite) and field coupling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsParams {
    #[serde(with = "crate::stats::extended_f64")]
    pub beta: f64,
    pub epsilon: f64,
}

impl GibbsParams {
    pub fn new(beta: f64, epsilon: f64) -> Result<Self, PottsError> {
        if !(beta > 0.0) {
            return Err(PottsError::BadBeta(beta));
        }
        Ok(Self { beta, epsilon })
    }
}

/// Spin assignment on a grid. Under wired boundary conditions the outer
/// ring always carries the wired color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinConfig {
    grid: Grid,
    q: usize,
    spins: Vec<u8>,
    bc: BoundaryCondition,
}

impl SpinConfig {
    /// Validates labels and clamps the boundary ring under wired conditions.
    pub fn new(grid: Grid, q: usize, mut spins: Vec<u8>, bc: BoundaryCondition) -> Result<Self, PottsError> {
        if spins.len() != grid.len() {
            return Err(PottsError::Length {
                expected: grid.len(),
                found: spins.len(),
            });
        }
        if let Some(&label) = spins.iter().find(|&&s| s as usize >= q) {
            return Err(PottsError::BadLabel { label, q });
        }
        if let BoundaryCondition::Wired(c) = bc {
            if c as usize >= q {
                return Err(PottsError::BadWiredColor { color: c, q });
            }
            for (i, s) in spins.iter_mut().enumerate() {
                if grid.is_boundary(i) {
                    *s = c;
                }
            }
        }
        Ok(Self { grid, q, spins, bc })
    }

    pub fn uniform(grid: Grid, q: usize, color: u8, bc: BoundaryCondition) -> Result<Self, PottsError> {
        Self::new(grid, q, vec![color; grid.len()], bc)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn spins(&self) -> &[u8] {
        &self.spins
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn spin(&self, site: Site) -> Option<u8> {
        self.grid.index(site).map(|i| self.spins[i])
    }

    pub fn is_clamped(&self, index: usize) -> bool {
        matches!(self.bc, BoundaryCondition::Wired(_)) && self.grid.is_boundary(index)
    }

    /// Snapshot text: `RFPM-SPINS v1 N=<n> q=<q> bc=<bc>` then one row of
    /// color digits per line, rows in increasing `y`.
    pub fn to_snapshot(&self) -> Result<String, PottsError> {
        let n = box_half_side(self.grid).ok_or_else(|| PottsError::Snapshot("grid is not a centered box".into()))?;
        if self.q > 10 {
            return Err(PottsError::Snapshot("q > 10 does not fit one digit per site".into()));
        }
        let mut out = format!("RFPM-SPINS v1 N={} q={} bc={}\n", n, self.q, self.bc);
        for row in self.spins.chunks(self.grid.width) {
            out.extend(row.iter().map(|&s| char::from(b'0' + s)));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_snapshot(text: &str) -> Result<Self, PottsError> {
        let bad = |m: &str| PottsError::Snapshot(m.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 5 || tokens[0] != "RFPM-SPINS" || tokens[1] != "v1" {
            return Err(bad("header"));
        }
        let field = |t: &str, key: &str| t.strip_prefix(key).map(str::to_string).ok_or_else(|| bad(key));
        let n: u32 = field(tokens[2], "N=")?.parse().map_err(|_| bad("N"))?;
        let q: usize = field(tokens[3], "q=")?.parse().map_err(|_| bad("q"))?;
        let bc: BoundaryCondition = field(tokens[4], "bc=")?.parse().map_err(|e: String| bad(&e))?;
        let spins: Vec<u8> = lines
            .flat_map(|l| l.trim().bytes())
            .map(|b| b.checked_sub(b'0').filter(|d| *d < 10).ok_or_else(|| bad("digit")))
            .collect::<Result<_, _>>()?;
        Self::new(Grid::from(BoxSpec::new(n)), q, spins, bc)
    }
}

fn box_half_side(grid: Grid) -> Option<u32> {
    let n = (grid.width / 2) as i32;
    (grid.width == grid.height && grid.width % 2 == 1 && grid.x0 == -n && grid.y0 == -n).then_some(n as u32)
}

/// Ground-state search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum GroundStateMethod {
    /// Certified minimum by enumeration; ties go to the lexicographically
    /// least spin array.
    Exhaustive,
    /// Heat-bath annealing with `β` rising geometrically, then polished by
    /// α-expansion moves.
    Anneal { sweeps: u32, beta_start: f64, beta_end: f64 },
    /// Iterated conditional modes from the field-preferred colors.
    Icm,
    /// α-expansion by minimum cuts from the field-preferred colors, until
    /// no expansion lowers the energy.
    Expansion,
}

impl GroundStateMethod {
    pub fn anneal_default() -> Self {
        GroundStateMethod::Anneal {
            sweeps: 200,
            beta_start: 0.2,
            beta_end: 8.0,
        }
    }
}

/// Exact Boltzmann table over the unclamped sites.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsTable {
    template: Vec<u8>,
    free_sites: Vec<usize>,
    q: usize,
    pub probabilities: Vec<f64>,
    pub log_partition: f64,
}

impl GibbsTable {
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Spin array of state `index`. The first free site is the most
    /// significant digit, so state order is lexicographic.
    pub fn config(&self, index: usize) -> Vec<u8> {
        let mut spins = self.template.clone();
        decode(index, &self.free_sites, self.q, &mut spins);
        spins
    }

    pub fn index_of(&self, spins: &[u8]) -> usize {
        self.free_sites
            .iter()
            .fold(0, |acc, &i| acc * self.q + spins[i] as usize)
    }

    /// Distribution of the spin at grid index `site`.
    pub fn marginal(&self, site: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.q];
        let mut spins = self.template.clone();
        for (k, p) in self.probabilities.iter().enumerate() {
            decode(k, &self.free_sites, self.q, &mut spins);
            out[spins[site] as usize] += p;
        }
        out
    }
}

fn decode(mut index: usize, free: &[usize], q: usize, spins: &mut [u8]) {
    for &i in free.iter().rev() {
        spins[i] = (index % q) as u8;
        index /= q;
    }
}

/// Grid, colors and effective couplings `ε·h_i^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct PottsSystem {
    grid: Grid,
    q: usize,
    epsilon: f64,
    coupling: Vec<f64>,
    bonds: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    box_spec: Option<BoxSpec>,
}

impl PottsSystem {
    /// `h` holds `q` raw field values per grid site (site-major).
    pub fn new(grid: Grid, q: usize, epsilon: f64, h: &[f64]) -> Result<Self, PottsError> {
        if q < 2 {
            return Err(PottsError::TooFewColors(q));
        }
        if q > u8::MAX as usize {
            return Err(PottsError::BadLabel { label: u8::MAX, q });
        }
        if h.len() != q * grid.len() {
            return Err(PottsError::Length {
                expected: q * grid.len(),
                found: h.len(),
            });
        }
        let neighbors = (0..grid.len()).map(|i| grid.neighbors(i).collect()).collect();
        Ok(Self {
            grid,
            q,
            epsilon,
            coupling: h.iter().map(|v| epsilon * v).collect(),
            bonds: grid.bonds(),
            neighbors,
            box_spec: box_half_side(grid).map(BoxSpec::new),
        })
    }

    pub fn from_field(field: &FieldRealization, epsilon: f64) -> Result<Self, PottsError> {
        Self::new(Grid::from(field.spec()), field.q(), epsilon, field.values())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// Index of the origin, if the grid contains it.
    pub fn origin(&self) -> Option<usize> {
        self.grid.index(Site::ORIGIN)
    }

    fn field_term(&self, site: usize, color: u8) -> f64 {
        self.coupling[site * self.q + color as usize]
    }

    /// Energy of a raw spin array (no clamping).
    pub fn energy_of(&self, spins: &[u8]) -> f64 {
        let bonds = self.bonds.iter().filter(|&&(i, j)| spins[i] == spins[j]).count() as f64;
        let field: f64 = spins
            .iter()
            .enumerate()
            .map(|(i, &s)| self.field_term(i, s))
            .sum();
        -(bonds + field)
    }

    pub fn energy(&self, config: &SpinConfig) -> Result<f64, PottsError> {
        if config.grid != self.grid || config.q != self.q {
            return Err(PottsError::Mismatch);
        }
        Ok(self.energy_of(&config.spins))
    }

    /// Energy of each color at `site` given its neighbors (only the terms
    /// involving `site`).
    pub fn local_energies(&self, spins: &[u8], site: usize) -> Vec<f64> {
        let mut e: Vec<f64> = (0..self.q).map(|c| -self.field_term(site, c as u8)).collect();
        for &j in &self.neighbors[site] {
            e[spins[j] as usize] -= 1.0;
        }
        e
    }

    /// Heat-bath conditional distribution of the spin at `site`.
    pub fn conditional(&self, spins: &[u8], site: usize, beta: f64) -> Vec<f64> {
        let e = self.local_energies(spins, site);
        let emin = e.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = e.iter().map(|&x| (-beta * (x - emin)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    fn free_sites(&self, bc: BoundaryCondition) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&i| !(matches!(bc, BoundaryCondition::Wired(_)) && self.grid.is_boundary(i)))
            .collect()
    }

    fn template(&self, bc: BoundaryCondition) -> Result<Vec<u8>, PottsError> {
        Ok(SpinConfig::uniform(self.grid, self.q, 0, self.check_bc(bc)?)?.spins)
    }

    fn check_bc(&self, bc: BoundaryCondition) -> Result<BoundaryCondition, PottsError> {
        if let BoundaryCondition::Wired(c) = bc {
            if c as usize >= self.q {
                return Err(PottsError::BadWiredColor { color: c, q: self.q });
            }
        }
        Ok(bc)
    }

    fn state_count(&self, free: usize) -> Result<usize, PottsError> {
        let count = (self.q as f64).powi(free as i32);
        if count > MAX_STATES as f64 {
            return Err(PottsError::TooLarge(count));
        }
        Ok(self.q.pow(free as u32))
    }

    /// Normalized `exp(-β·H)` over every configuration compatible with `bc`.
    pub fn exact_gibbs(&self, beta: f64, bc: BoundaryCondition) -> Result<GibbsTable, PottsError> {
        if beta.is_infinite() {
            return Err(PottsError::InfiniteBeta);
        }
        if !(beta > 0.0) {
            return Err(PottsError::BadBeta(beta));
        }
        let template = self.template(bc)?;
        let free_sites = self.free_sites(bc);
        let count = self.state_count(free_sites.len())?;
        let log_weights: Vec<f64> = (0..count)
            .into_par_iter()
            .map_init(
                || template.clone(),
                |spins, k| {
                    decode(k, &free_sites, self.q, spins);
                    -beta * self.energy_of(spins)
                },
            )
            .collect();
        let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
        let z: f64 = weights.iter().sum();
        Ok(GibbsTable {
            template,
            free_sites,
            q: self.q,
            probabilities: weights.into_iter().map(|w| w / z).collect(),
            log_partition: max + z.ln(),
        })
    }

    /// One sweep of single-site heat-bath updates in row-major order; clamped
    /// sites are skipped.
    pub fn heat_bath_sweep(&self, config: &mut SpinConfig, beta: f64, rng: &mut Stream) -> Result<(), PottsError> {
        if beta.is_infinite() {
            return Err(PottsError::InfiniteBeta);
        }
        if config.grid != self.grid || config.q != self.q {
            return Err(PottsError::Mismatch);
        }
        let wired = matches!(config.bc, BoundaryCondition::Wired(_));
        for i in 0..self.grid.len() {
            if wired && self.grid.is_boundary(i) {
                continue;
            }
            let p = self.conditional(&config.spins, i, beta);
            config.spins[i] = sample_index(&p, rng.gen::<f64>()) as u8;
        }
        Ok(())
    }

    /// Field-preferred color at every free site, clamped under `bc`.
    fn field_argmax(&self, bc: BoundaryCondition) -> Result<SpinConfig, PottsError> {
        let spins = (0..self.grid.len())
            .map(|i| {
                (0..self.q as u8)
                    .max_by(|&a, &b| {
                        self.field_term(i, a)
                            .total_cmp(&self.field_term(i, b))
                            .then(b.cmp(&a))
                    })
                    .expect("q >= 2")
            })
            .collect();
        SpinConfig::new(self.grid, self.q, spins, bc)
    }

    /// Zero-temperature single-site descent until no site changes.
    fn icm(&self, config: &mut SpinConfig) {
        let wired = matches!(config.bc, BoundaryCondition::Wired(_));
        loop {
            let mut changed = false;
            for i in 0..self.grid.len() {
                if wired && self.grid.is_boundary(i) {
                    continue;
                }
                let e = self.local_energies(&config.spins, i);
                let cur = config.spins[i] as usize;
                let (best, &emin) = e
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
                    .expect("q >= 2");
                if emin < e[cur] - 1e-12 {
                    config.spins[i] = best as u8;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Best expansion of color `alpha` from `config` by one minimum cut.
    /// Capacities are quantized; the move is kept only if the exact energy
    /// drops.
    fn expand(&self, config: &mut SpinConfig, alpha: u8) -> bool {
        const SCALE: f64 = 1e9;
        let wired = matches!(config.bc, BoundaryCondition::Wired(_));
        let spins = &config.spins;
        let clamped = |i: usize| wired && self.grid.is_boundary(i);
        let v = |a: u8, b: u8| if a == b { 0.0 } else { 1.0 };

        let mut node = vec![usize::MAX; self.grid.len()];
        let mut free = Vec::new();
        for i in 0..self.grid.len() {
            if !clamped(i) {
                node[i] = free.len();
                free.push(i);
            }
        }
        if free.is_empty() {
            return false;
        }
        // Per free site: energy of keeping its color and of switching.
        let mut e0: Vec<f64> = free.iter().map(|&i| -self.field_term(i, spins[i])).collect();
        let mut e1: Vec<f64> = free.iter().map(|&i| -self.field_term(i, alpha)).collect();
        let mut pairs = Vec::new();
        for &(i, j) in &self.bonds {
            match (clamped(i), clamped(j)) {
                (true, true) => {}
                (false, true) | (true, false) => {
                    let (p, fixed) = if clamped(j) { (i, spins[j]) } else { (j, spins[i]) };
                    e0[node[p]] += v(spins[p], fixed);
                    e1[node[p]] += v(alpha, fixed);
                }
                (false, false) => {
                    let a = v(spins[i], spins[j]);
                    let b = v(spins[i], alpha);
                    let c = v(alpha, spins[j]);
                    // E(x_i, x_j) = a + (c - a)·x_i - c·x_j + (b + c - a)·(1 - x_i)·x_j
                    e1[node[i]] += c - a;
                    e1[node[j]] -= c;
                    let w = b + c - a;
                    if w > 0.0 {
                        pairs.push((node[i], node[j], w));
                    }
                }
            }
        }

        let quantize = |x: f64| (x * SCALE).round() as u64;
        let mut g: Graph<(), u64> = Graph::with_capacity(free.len() + 2, 3 * free.len() + pairs.len());
        let s = g.add_node(());
        let t = g.add_node(());
        let nodes: Vec<NodeIndex> = free.iter().map(|_| g.add_node(())).collect();
        for k in 0..free.len() {
            let m = e0[k].min(e1[k]);
            let (to_sink, from_source) = (quantize(e0[k] - m), quantize(e1[k] - m));
            if from_source > 0 {
                g.add_edge(s, nodes[k], from_source);
            }
            if to_sink > 0 {
                g.add_edge(nodes[k], t, to_sink);
            }
        }
        for &(a, b, w) in &pairs {
            g.add_edge(nodes[a], nodes[b], quantize(w));
        }
        let (_, flows) = dinics(&g, s, t);

        // Source side of the minimum cut keeps its color.
        let mut keep = vec![false; g.node_count()];
        keep[s.index()] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let forward = g
                .edges_directed(u, Direction::Outgoing)
                .filter(|e| flows[e.id().index()] < *e.weight())
                .map(|e| e.target());
            let backward = g
                .edges_directed(u, Direction::Incoming)
                .filter(|e| flows[e.id().index()] > 0)
                .map(|e| e.source());
            let next: Vec<NodeIndex> = forward.chain(backward).collect();
            for n in next {
                if !keep[n.index()] {
                    keep[n.index()] = true;
                    stack.push(n);
                }
            }
        }
        let mut proposal = spins.clone();
        for (k, &i) in free.iter().enumerate() {
            if !keep[nodes[k].index()] {
                proposal[i] = alpha;
            }
        }
        let old = self.energy_of(spins);
        let new = self.energy_of(&proposal);
        if new < old - 1e-12 * old.abs().max(1.0) {
            config.spins = proposal;
            true
        } else {
            false
        }
    }

    /// Cycles expansions over all colors until a full cycle changes nothing.
    fn expansion(&self, config: &mut SpinConfig) {
        loop {
            let mut changed = false;
            for alpha in 0..self.q as u8 {
                changed |= self.expand(config, alpha);
            }
            if !changed {
                break;
            }
        }
    }

    pub fn ground_state(
        &self,
        bc: BoundaryCondition,
        method: GroundStateMethod,
        seed: u64,
    ) -> Result<(SpinConfig, f64), PottsError> {
        let bc = self.check_bc(bc)?;
        let config = match method {
            GroundStateMethod::Exhaustive => {
                let free = self.free_sites(bc);
                let count = self.state_count(free.len())?;
                let mut spins = self.template(bc)?;
                let mut best = (f64::INFINITY, 0usize);
                for k in 0..count {
                    decode(k, &free, self.q, &mut spins);
                    let e = self.energy_of(&spins);
                    if e < best.0 - 1e-12 {
                        best = (e, k);
                    }
                }
                decode(best.1, &free, self.q, &mut spins);
                SpinConfig::new(self.grid, self.q, spins, bc)?
            }
            GroundStateMethod::Icm => {
                let mut c = self.field_argmax(bc)?;
                self.icm(&mut c);
                c
            }
            GroundStateMethod::Expansion => {
                let mut c = self.field_argmax(bc)?;
                self.expansion(&mut c);
                c
            }
            GroundStateMethod::Anneal {
                sweeps,
                beta_start,
                beta_end,
            } => {
                if !(beta_start > 0.0 && beta_end >= beta_start && beta_end.is_finite()) {
                    return Err(PottsError::BadBeta(beta_start));
                }
                let sub = match bc {
                    BoundaryCondition::Free => 0,
                    BoundaryCondition::Wired(c) => 1 + c as u32,
                };
                let mut rng = rng::purpose_stream(seed, Purpose::PottsAnneal, sub);
                let mut c = self.field_argmax(bc)?;
                let mut best = c.clone();
                let mut best_e = self.energy_of(&c.spins);
                let ratio = (beta_end / beta_start).ln();
                for k in 0..sweeps {
                    let frac = if sweeps > 1 { k as f64 / (sweeps - 1) as f64 } else { 1.0 };
                    self.heat_bath_sweep(&mut c, beta_start * (ratio * frac).exp(), &mut rng)?;
                    let e = self.energy_of(&c.spins);
                    if e < best_e {
                        best_e = e;
                        best.spins.copy_from_slice(&c.spins);
                    }
                }
                self.expansion(&mut best);
                best
            }
        };
        let e = self.energy_of(&config.spins);
        Ok((config, e))
    }
}

/// Smallest index whose cumulative probability exceeds `u`.
fn sample_index(p: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

/// `H(config)` under `field` coupled with strength `epsilon`.
pub fn energy(config: &SpinConfig, field: &FieldRealization, epsilon: f64) -> Result<f64, PottsError> {
    if config.grid != Grid::from(field.spec()) || config.q != field.q() {
        return Err(PottsError::Mismatch);
    }
    PottsSystem::from_field(field, epsilon)?.energy(config)
}

/// How thermal expectations are computed per realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expectation {
    /// Exact Gibbs table at finite `β`; exhaustive ground states at `β = ∞`.
    Exact,
    /// Heat-bath averages after `burn_in` sweeps over `sweeps` sweeps.
    HeatBath { burn_in: u32, sweeps: u32 },
    /// Ground-state indicators at `β = ∞`.
    GroundState { method: GroundStateMethod },
}

/// `P(s_0 = c)` and the mean (or ground-state) energy for one realization
/// and boundary condition, where `c` is `color`.
pub fn origin_probability(
    system: &PottsSystem,
    beta: f64,
    bc: BoundaryCondition,
    color: u8,
    method: Expectation,
    seed: u64,
) -> Result<(f64, f64), PottsError> {
    let origin = system.origin().ok_or(PottsError::Mismatch)?;
    let indicator = |c: &SpinConfig| if c.spins[origin] == color { 1.0 } else { 0.0 };
    if beta.is_infinite() {
        let gs = match method {
            Expectation::Exact => GroundStateMethod::Exhaustive,
            Expectation::GroundState { method } => method,
            Expectation::HeatBath { .. } => return Err(PottsError::InfiniteBeta),
        };
        let (c, e) = system.ground_state(bc, gs, seed)?;
        return Ok((indicator(&c), e));
    }
    match method {
        Expectation::Exact => {
            let table = system.exact_gibbs(beta, bc)?;
            let mut spins = table.template.clone();
            let (mut p, mut e) = (0.0, 0.0);
            for (k, w) in table.probabilities.iter().enumerate() {
                decode(k, &table.free_sites, table.q, &mut spins);
                if spins[origin] == color {
                    p += w;
                }
                e += w * system.energy_of(&spins);
            }
            Ok((p, e))
        }
        Expectation::HeatBath { burn_in, sweeps } => {
            let sub = match bc {
                BoundaryCondition::Free => 0,
                BoundaryCondition::Wired(c) => 1 + c as u32,
            };
            let mut rng = rng::purpose_stream(seed, Purpose::HeatBath, sub);
            let mut c = system.field_argmax(bc)?;
            for _ in 0..burn_in {
                system.heat_bath_sweep(&mut c, beta, &mut rng)?;
            }
            let (mut hits, mut e) = (0.0, 0.0);
            let n = sweeps.max(1);
            for _ in 0..n {
                system.heat_bath_sweep(&mut c, beta, &mut rng)?;
                hits += indicator(&c);
                e += system.energy_of(&c.spins);
            }
            Ok((hits / n as f64, e / n as f64))
        }
        Expectation::GroundState { .. } => Err(PottsError::FiniteBetaGroundState),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationConfig {
    pub spec: BoxSpec,
    pub q: usize,
    pub epsilon: f64,
    #[serde(with = "crate::stats::extended_f64")]
    pub beta: f64,
    pub convention: FieldConvention,
    pub samples: usize,
    pub method: Expectation,
    pub base_seed: u64,
    pub wired_color: u8,
}

/// One disorder realization of the magnetization estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationRecord {
    pub seed: u64,
    pub p0_wired: f64,
    pub p0_free: f64,
    pub energy_wired: f64,
    pub energy_free: f64,
}

impl RealizationRecord {
    /// `(q·p_w - q·p_f)/(q - 1)`.
    pub fn magnetization(&self, q: usize) -> f64 {
        q as f64 / (q as f64 - 1.0) * (self.p0_wired - self.p0_free)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Magnetization {
    pub m: f64,
    pub stderr: f64,
    pub records: Vec<RealizationRecord>,
}

pub fn magnetization_with(source: &dyn FieldSource, cfg: &MagnetizationConfig) -> Result<Magnetization, PottsError> {
    if cfg.samples < 2 {
        return Err(PottsError::TooFewSamples {
            needed: 2,
            got: cfg.samples,
        });
    }
    if !(cfg.beta > 0.0) {
        return Err(PottsError::BadBeta(cfg.beta));
    }
    let wired = BoundaryCondition::Wired(cfg.wired_color);
    let records: Vec<RealizationRecord> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.base_seed.wrapping_add(k);
            let field = source.field(cfg.spec, seed)?;
            let system = PottsSystem::from_field(&field, cfg.epsilon)?;
            let (p0_wired, energy_wired) =
                origin_probability(&system, cfg.beta, wired, cfg.wired_color, cfg.method, seed)?;
            let (p0_free, energy_free) =
                origin_probability(&system, cfg.beta, BoundaryCondition::Free, cfg.wired_color, cfg.method, seed)?;
            Ok(RealizationRecord {
                seed,
                p0_wired,
                p0_free,
                energy_wired,
                energy_free,
            })
        })
        .collect::<Result<_, PottsError>>()?;
    let values: Vec<f64> = records.iter().map(|r| r.magnetization(cfg.q)).collect();
    let est = MeanEstimate::of(&values).expect("two or more samples");
    Ok(Magnetization {
        m: est.mean,
        stderr: est.stderr,
        records,
    })
}

/// Disorder average of `q/(q-1)·(⟨δ(s_0,c)⟩^wired(c) - ⟨δ(s_0,c)⟩^free)`.
pub fn magnetization(cfg: &MagnetizationConfig) -> Result<Magnetization, PottsError> {
    let source = GaussianSource {
        q: cfg.q,
        epsilon: cfg.epsilon,
        convention: cfg.convention,
    };
    magnetization_with(&source, cfg)
}
