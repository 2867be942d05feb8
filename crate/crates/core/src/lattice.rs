//! Boxes of `Z²`, lattice animals and their enumeration.
//!
//! Sites are ordered row-major: by `y` first, then by `x`. That order is the
//! canonical form for animals and for every array indexed by box sites.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("empty site set has no boundary")]
    Empty,
    #[error("site set is not 4-connected")]
    NotConnected,
    #[error("site set encloses a hole")]
    HasHole,
    #[error("malformed animal record: {0}")]
    Parse(String),
    #[error("boundary size {stated} does not match recomputed {actual}")]
    BoundaryMismatch { stated: u32, actual: u32 },
    #[error("grid must have positive width and height")]
    EmptyGrid,
}

/// A vertex of `Z²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub x: i32,
    pub y: i32,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    /// The four nearest neighbors, in the order east, north, west, south.
    pub fn neighbors(self) -> [Site; 4] {
        [
            Site::new(self.x + 1, self.y),
            Site::new(self.x, self.y + 1),
            Site::new(self.x - 1, self.y),
            Site::new(self.x, self.y - 1),
        ]
    }

    pub fn linf(self) -> i32 {
        self.x.abs().max(self.y.abs())
    }

    /// Rotation by 90 degrees counterclockwise about the origin.
    pub fn rotate90(self) -> Site {
        Site::new(-self.y, self.x)
    }
}

impl Ord for Site {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Site {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for Site {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| LatticeError::Parse(format!("site `{s}`")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| LatticeError::Parse(format!("site `{s}`")))
        };
        Ok(Site::new(parse(x)?, parse(y)?))
    }
}

/// The box `Λ_N = { v : |v|_∞ ≤ N }`, holding `(2N+1)²` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxSpec {
    n: u32,
}

impl BoxSpec {
    pub const fn new(n: u32) -> Self {
        Self { n }
    }

    /// Half-side `N`.
    pub const fn n(self) -> u32 {
        self.n
    }

    pub const fn side(self) -> usize {
        2 * self.n as usize + 1
    }

    pub const fn site_count(self) -> usize {
        self.side() * self.side()
    }

    pub fn contains(self, site: Site) -> bool {
        site.linf() <= self.n as i32
    }

    /// Sites with `|v|_∞ = N`.
    pub fn is_boundary(self, site: Site) -> bool {
        site.linf() == self.n as i32
    }

    /// Row-major index of `site`, or `None` if it lies outside the box.
    pub fn index(self, site: Site) -> Option<usize> {
        if !self.contains(site) {
            return None;
        }
        let n = self.n as i32;
        Some((site.y + n) as usize * self.side() + (site.x + n) as usize)
    }

    pub fn site(self, index: usize) -> Site {
        let n = self.n as i32;
        let side = self.side();
        Site::new((index % side) as i32 - n, (index / side) as i32 - n)
    }

    pub fn origin_index(self) -> usize {
        self.site_count() / 2
    }

    pub fn sites(self) -> Vec<Site> {
        sites_of_box(self)
    }
}

/// All `(2N+1)²` sites of the box in row-major order.
pub fn sites_of_box(spec: BoxSpec) -> Vec<Site> {
    (0..spec.site_count()).map(|i| spec.site(i)).collect()
}

/// A rectangular patch of `Z²`. Boxes are the centered odd-sided case; the
/// sampler tests also use small even-sided grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub x0: i32,
    pub y0: i32,
    pub width: usize,
    pub height: usize,
}

impl Grid {
    pub fn new(x0: i32, y0: i32, width: usize, height: usize) -> Result<Self, LatticeError> {
        if width == 0 || height == 0 {
            return Err(LatticeError::EmptyGrid);
        }
        Ok(Self {
            x0,
            y0,
            width,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn site(&self, index: usize) -> Site {
        Site::new(
            self.x0 + (index % self.width) as i32,
            self.y0 + (index / self.width) as i32,
        )
    }

    pub fn index(&self, site: Site) -> Option<usize> {
        let dx = site.x - self.x0;
        let dy = site.y - self.y0;
        if dx < 0 || dy < 0 || dx as usize >= self.width || dy as usize >= self.height {
            return None;
        }
        Some(dy as usize * self.width + dx as usize)
    }

    pub fn sites(&self) -> Vec<Site> {
        (0..self.len()).map(|i| self.site(i)).collect()
    }

    /// Outer ring of the rectangle.
    pub fn is_boundary(&self, index: usize) -> bool {
        let cx = index % self.width;
        let cy = index / self.width;
        cx == 0 || cy == 0 || cx + 1 == self.width || cy + 1 == self.height
    }

    /// In-grid neighbor indices of `index`.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let s = self.site(index);
        s.neighbors().into_iter().filter_map(move |t| self.index(t))
    }

    /// Nearest-neighbor pairs `(i, j)` with `i < j`, horizontal bonds first.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.height {
            for c in 0..self.width.saturating_sub(1) {
                out.push((r * self.width + c, r * self.width + c + 1));
            }
        }
        for r in 0..self.height.saturating_sub(1) {
            for c in 0..self.width {
                out.push((r * self.width + c, (r + 1) * self.width + c));
            }
        }
        out
    }
}

impl From<BoxSpec> for Grid {
    fn from(spec: BoxSpec) -> Self {
        let n = spec.n() as i32;
        Grid {
            x0: -n,
            y0: -n,
            width: spec.side(),
            height: spec.side(),
        }
    }
}

/// Which boundary `|∂A|` denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Edges of `Z²` with exactly one endpoint in the set.
    Edge,
    /// Sites outside the set with a neighbor inside it.
    Site,
}

/// The boundary used for animal scores everywhere in the crate.
pub const BOUNDARY_KIND: BoundaryKind = BoundaryKind::Edge;

/// Boundary size of `sites` in the infinite lattice (never clipped to a box).
pub fn boundary_size(sites: &[Site], kind: BoundaryKind) -> Result<u32, LatticeError> {
    if sites.is_empty() {
        return Err(LatticeError::Empty);
    }
    let set: HashSet<Site> = sites.iter().copied().collect();
    let count = match kind {
        BoundaryKind::Edge => set
            .iter()
            .flat_map(|s| s.neighbors())
            .filter(|t| !set.contains(t))
            .count(),
        BoundaryKind::Site => set
            .iter()
            .flat_map(|s| s.neighbors())
            .filter(|t| !set.contains(t))
            .collect::<HashSet<_>>()
            .len(),
    };
    Ok(count as u32)
}

pub fn edge_boundary(sites: &[Site]) -> Result<u32, LatticeError> {
    boundary_size(sites, BoundaryKind::Edge)
}

/// Occupancy bitmap over the bounding box of a site set padded by one cell.
struct PaddedMask {
    x0: i32,
    y0: i32,
    w: usize,
    h: usize,
    cells: Vec<bool>,
}

impl PaddedMask {
    fn new(sites: &[Site]) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
        for s in sites {
            xmin = xmin.min(s.x);
            xmax = xmax.max(s.x);
            ymin = ymin.min(s.y);
            ymax = ymax.max(s.y);
        }
        let x0 = xmin - 1;
        let y0 = ymin - 1;
        let w = (xmax - xmin + 3) as usize;
        let h = (ymax - ymin + 3) as usize;
        let mut cells = vec![false; w * h];
        for s in sites {
            cells[(s.y - y0) as usize * w + (s.x - x0) as usize] = true;
        }
        Self { x0, y0, w, h, cells }
    }

    /// Number of cells with value `want` reachable from `start`.
    fn flood(&self, start: usize, want: bool) -> usize {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 0;
        while let Some(i) = queue.pop_front() {
            count += 1;
            let cx = i % self.w;
            let cy = i / self.w;
            let mut visit = |j: usize| {
                if !seen[j] && self.cells[j] == want {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if cx + 1 < self.w {
                visit(i + 1);
            }
            if cx > 0 {
                visit(i - 1);
            }
            if cy + 1 < self.h {
                visit(i + self.w);
            }
            if cy > 0 {
                visit(i - self.w);
            }
        }
        count
    }

    fn index(&self, s: Site) -> usize {
        (s.y - self.y0) as usize * self.w + (s.x - self.x0) as usize
    }
}

fn check_simply_connected(sites: &[Site]) -> Result<(), LatticeError> {
    if sites.is_empty() {
        return Err(LatticeError::Empty);
    }
    let mask = PaddedMask::new(sites);
    let members = mask.cells.iter().filter(|&&c| c).count();
    if mask.flood(mask.index(sites[0]), true) != members {
        return Err(LatticeError::NotConnected);
    }
    // Cell 0 is on the padding frame, so it is always outside the set.
    if mask.flood(0, false) != mask.cells.len() - members {
        return Err(LatticeError::HasHole);
    }
    Ok(())
}

/// True iff `sites` is 4-connected and its complement in `Z²` is 4-connected.
pub fn is_simply_connected(sites: &[Site]) -> bool {
    check_simply_connected(sites).is_ok()
}

/// A finite simply connected site set, stored in canonical row-major order
/// with its cached boundary size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeAnimal {
    sites: Vec<Site>,
    boundary: u32,
}

impl LatticeAnimal {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Result<Self, LatticeError> {
        let mut sites: Vec<Site> = sites.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        check_simply_connected(&sites)?;
        let boundary = boundary_size(&sites, BOUNDARY_KIND)?;
        Ok(Self { sites, boundary })
    }

    /// Caller guarantees `sites` is sorted, deduplicated and simply connected.
    pub(crate) fn from_canonical(sites: Vec<Site>) -> Self {
        debug_assert!(sites.windows(2).all(|w| w[0] < w[1]));
        let boundary = boundary_size(&sites, BOUNDARY_KIND).expect("nonempty animal");
        Self { sites, boundary }
    }

    pub fn singleton(site: Site) -> Self {
        Self {
            sites: vec![site],
            boundary: 4,
        }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn boundary_size(&self) -> u32 {
        self.boundary
    }

    pub fn contains(&self, site: Site) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(Site::ORIGIN)
    }

    pub fn within(&self, spec: BoxSpec) -> bool {
        self.sites.iter().all(|&s| spec.contains(s))
    }

    pub fn rotate90(&self) -> Self {
        let mut sites: Vec<Site> = self.sites.iter().map(|s| s.rotate90()).collect();
        sites.sort_unstable();
        Self {
            sites,
            boundary: self.boundary,
        }
    }
}

/// Canonical text form: `size boundary x1,y1 x2,y2 ...`.
impl fmt::Display for LatticeAnimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.sites.len(), self.boundary)?;
        for s in &self.sites {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticeAnimal {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = s.split_whitespace();
        let size: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LatticeError::Parse("missing size".into()))?;
        let stated: u32 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LatticeError::Parse("missing boundary".into()))?;
        let sites = tokens.map(Site::from_str).collect::<Result<Vec<_>, _>>()?;
        if sites.len() != size {
            return Err(LatticeError::Parse(format!(
                "size {size} but {} sites listed",
                sites.len()
            )));
        }
        let animal = LatticeAnimal::new(sites)?;
        if animal.len() != size {
            return Err(LatticeError::Parse("duplicate sites".into()));
        }
        if animal.boundary != stated {
            return Err(LatticeError::BoundaryMismatch {
                stated,
                actual: animal.boundary,
            });
        }
        Ok(animal)
    }
}

struct Frame {
    untried: Vec<usize>,
    marked: Vec<usize>,
    placed: bool,
}

/// Redelmeier-style canonical growth over a box: every connected set that
/// contains the origin is reached along exactly one path of the search tree,
/// so no deduplication table is needed and memory is bounded by the frontier.
/// Sets with holes are grown through but not emitted.
pub struct AnimalEnumerator {
    spec: BoxSpec,
    max_size: usize,
    seen: Vec<bool>,
    current: Vec<usize>,
    stack: Vec<Frame>,
}

impl AnimalEnumerator {
    fn new(spec: BoxSpec, max_size: usize) -> Self {
        let mut seen = vec![false; spec.site_count()];
        let origin = spec.origin_index();
        seen[origin] = true;
        let stack = if max_size == 0 {
            Vec::new()
        } else {
            vec![Frame {
                untried: vec![origin],
                marked: Vec::new(),
                placed: false,
            }]
        };
        Self {
            spec,
            max_size,
            seen,
            current: Vec::new(),
            stack,
        }
    }

    /// Advance to the next connected set through the origin, holes or not.
    /// The set is left in `self.current`.
    fn advance(&mut self) -> bool {
        loop {
            let Some(frame) = self.stack.last_mut() else {
                return false;
            };
            if let Some(v) = frame.untried.pop() {
                self.current.push(v);
                let mut child = Frame {
                    untried: Vec::new(),
                    marked: Vec::new(),
                    placed: true,
                };
                if self.current.len() < self.max_size {
                    child.untried = frame.untried.clone();
                    let site = self.spec.site(v);
                    for t in site.neighbors() {
                        if let Some(j) = self.spec.index(t) {
                            if !self.seen[j] {
                                self.seen[j] = true;
                                child.untried.push(j);
                                child.marked.push(j);
                            }
                        }
                    }
                }
                self.stack.push(child);
                return true;
            }
            let frame = self.stack.pop().expect("nonempty stack");
            for j in frame.marked {
                self.seen[j] = false;
            }
            if frame.placed {
                self.current.pop();
            }
        }
    }
}

impl Iterator for AnimalEnumerator {
    type Item = LatticeAnimal;

    fn next(&mut self) -> Option<LatticeAnimal> {
        while self.advance() {
            let mut idx = self.current.clone();
            idx.sort_unstable();
            let sites: Vec<Site> = idx.into_iter().map(|i| self.spec.site(i)).collect();
            if is_simply_connected(&sites) {
                return Some(LatticeAnimal::from_canonical(sites));
            }
        }
        None
    }
}

/// Every simply connected animal `A ∋ 0` with `A ⊆ Λ_N` and `|A| ≤ max_size`,
/// each exactly once, in a deterministic order. `max_size == 0` yields
/// nothing.
///
/// The number of animals grows roughly like `4^max_size`; sizes beyond 10 or
/// 11 are impractical.
pub fn enumerate_animals(spec: BoxSpec, max_size: usize) -> AnimalEnumerator {
    AnimalEnumerator::new(spec, max_size)
}
