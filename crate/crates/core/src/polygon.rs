//! Polygon growth inside `[-N, N]²`.
//!
//! Start from the square `[-N/2, N/2]²`. At each level, every side `S` gets a
//! candidate isosceles triangle whose base is the middle half of `S` and
//! whose apex sits `ε^{2/3}·l(S)/8` outside the polygon. If the field weight
//! of the rasterized triangle is positive the triangle is appended, otherwise
//! `S` is cut into four equal sides. Either way each side becomes four sides,
//! so level `k` has `4^k` sides.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldRealization, WeightMode};
use crate::lattice::{BoxSpec, Site};
use crate::rng::{self, Purpose};

#[derive(Debug, Error, PartialEq)]
pub enum PolygonError {
    #[error("box half-side {0} is too small to refine (need N >= 2)")]
    BoxTooSmall(u32),
    #[error("side is degenerate (length {0})")]
    DegenerateSide(f64),
    #[error("field strength must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("max_level must be at least 1")]
    ZeroLevels,
    #[error("polygon invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    fn dist(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

/// Acceptance rule for candidate triangles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Append iff `w(T_S) > 0`.
    #[default]
    Deterministic,
    /// Append iff `w(T_S) > 0` and an independent fair coin lands heads.
    Stochastic,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deterministic" | "det" => Ok(Variant::Deterministic),
            "stochastic" | "stoch" => Ok(Variant::Stochastic),
            other => Err(format!("unknown variant `{other}` (deterministic|stochastic)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub base_start: Point,
    pub base_end: Point,
    pub apex: Point,
}

impl Triangle {
    pub fn vertices(&self) -> [Point; 3] {
        [self.base_start, self.apex, self.base_end]
    }
}

/// Candidate triangle on the side `start → end` of a counterclockwise
/// polygon: base is the centered segment of length `l/2`, apex lies on the
/// outward (right-hand) normal at height `ε^{2/3}·l/8`.
pub fn triangle_for_side(start: Point, end: Point, epsilon: f64) -> Result<Triangle, PolygonError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(PolygonError::BadEpsilon(epsilon));
    }
    let len = start.dist(end);
    if !(len > 1e-12) {
        return Err(PolygonError::DegenerateSide(len));
    }
    let height = epsilon.powf(2.0 / 3.0) * len / 8.0;
    let (nx, ny) = ((end.y - start.y) / len, -(end.x - start.x) / len);
    let mid = start.lerp(end, 0.5);
    Ok(Triangle {
        base_start: start.lerp(end, 0.25),
        base_end: start.lerp(end, 0.75),
        apex: Point::new(mid.x + nx * height, mid.y + ny * height),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    /// Half-side `N` of the enclosing square `[-N, N]²`.
    pub n: f64,
    pub level: u32,
    /// Counterclockwise; side `i` runs from vertex `i` to vertex `i + 1`.
    pub vertices: Vec<Point>,
}

/// `P₁ = [-N/2, N/2]²`.
pub fn init_polygon(spec: BoxSpec) -> Result<Polygon, PolygonError> {
    if spec.n() < 2 {
        return Err(PolygonError::BoxTooSmall(spec.n()));
    }
    let n = spec.n() as f64;
    let h = n / 2.0;
    Ok(Polygon {
        n,
        level: 1,
        vertices: vec![
            Point::new(-h, -h),
            Point::new(h, -h),
            Point::new(h, h),
            Point::new(-h, h),
        ],
    })
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn within_bbox(a: Point, b: Point, p: Point, tol: f64) -> bool {
    p.x >= a.x.min(b.x) - tol
        && p.x <= a.x.max(b.x) + tol
        && p.y >= a.y.min(b.y) - tol
        && p.y <= a.y.max(b.y) + tol
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share at least one point
/// (touching counts).
fn segments_meet(p1: Point, p2: Point, q1: Point, q2: Point, tol: f64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    let opposite = |a: f64, b: f64| (a > tol && b < -tol) || (a < -tol && b > tol);
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    (d1.abs() <= tol && within_bbox(q1, q2, p1, tol))
        || (d2.abs() <= tol && within_bbox(q1, q2, p2, tol))
        || (d3.abs() <= tol && within_bbox(p1, p2, q1, tol))
        || (d4.abs() <= tol && within_bbox(p1, p2, q2, tol))
}

impl Polygon {
    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn sides(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let v = &self.vertices;
        (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        self.sides().map(|(a, b)| a.dist(b)).collect()
    }

    /// Signed shoelace area; positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        0.5 * self.sides().map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    fn tolerance(&self) -> f64 {
        1e-12 * self.n.max(1.0).powi(2)
    }

    pub fn is_counterclockwise(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn is_contained(&self) -> bool {
        let lim = self.n * (1.0 + 1e-12);
        self.vertices.iter().all(|p| p.x.abs() <= lim && p.y.abs() <= lim)
    }

    /// No two non-adjacent sides meet, and adjacent sides meet only at their
    /// shared vertex.
    pub fn is_simple(&self) -> bool {
        let sides: Vec<(Point, Point)> = self.sides().collect();
        let m = sides.len();
        let tol = self.tolerance();
        for i in 0..m {
            let (a, b) = sides[i];
            let (_, c) = sides[(i + 1) % m];
            // Adjacent sides must not fold back onto each other.
            if cross(a, b, c).abs() <= tol {
                let dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
                if dot <= 0.0 {
                    return false;
                }
            }
            for j in i + 2..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let (p, q) = sides[j];
                if segments_meet(a, b, p, q, tol) {
                    return false;
                }
            }
        }
        true
    }

    pub fn check_invariants(&self) -> Result<(), PolygonError> {
        if self.vertices.len() < 3 {
            return Err(PolygonError::Invariant("fewer than three vertices".into()));
        }
        if let Some(l) = self.side_lengths().into_iter().find(|&l| !(l > 0.0)) {
            return Err(PolygonError::Invariant(format!("side of length {l}")));
        }
        if !self.is_counterclockwise() {
            return Err(PolygonError::Invariant("not counterclockwise".into()));
        }
        if !self.is_contained() {
            return Err(PolygonError::Invariant("leaves [-N, N]^2".into()));
        }
        if !self.is_simple() {
            return Err(PolygonError::Invariant("self-intersecting".into()));
        }
        Ok(())
    }

    /// `x,y` lines, one per vertex.
    pub fn vertex_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.vertices {
            writeln!(out, "{:.16e},{:.16e}", p.x, p.y).expect("string write");
        }
        out
    }

    /// Standalone SVG of the polygon inside its enclosing square.
    pub fn to_svg(&self) -> String {
        let n = self.n;
        let points: Vec<String> = self
            .vertices
            .iter()
            .map(|p| format!("{:.6},{:.6}", p.x, -p.y))
            .collect();
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"512\" height=\"512\">\n",
                "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\" stroke-width=\"{}\"/>\n",
                "  <polygon points=\"{}\" fill=\"#9ecae1\" stroke=\"#08519c\" stroke-width=\"{}\"/>\n",
                "</svg>\n"
            ),
            -n * 1.05,
            -n * 1.05,
            2.1 * n,
            2.1 * n,
            -n,
            -n,
            2.0 * n,
            2.0 * n,
            n / 200.0,
            points.join(" "),
            n / 200.0,
        )
    }
}

/// Lattice sites covered by a polygon given as a vertex ring (either
/// orientation). A site is covered when its center is strictly inside, or on
/// a left or bottom edge: the half-open rule, under which tiling regions
/// partition the sites.
pub fn rasterize(vertices: &[Point]) -> Vec<Site> {
    if vertices.len() < 3 {
        return Vec::new();
    }
    let ymin = vertices.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let ymax = vertices.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let m = vertices.len();
    let mut out = Vec::new();
    let mut crossings = Vec::new();
    for y in ymin.ceil() as i64..=ymax.floor() as i64 {
        let yf = y as f64;
        crossings.clear();
        for i in 0..m {
            let a = vertices[i];
            let b = vertices[(i + 1) % m];
            if (a.y <= yf && yf < b.y) || (b.y <= yf && yf < a.y) {
                crossings.push(a.x + (yf - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        crossings.sort_by(f64::total_cmp);
        for pair in crossings.chunks_exact(2) {
            for x in pair[0].ceil() as i64..pair[1].ceil() as i64 {
                out.push(Site::new(x as i32, y as i32));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn rasterize_triangle(t: &Triangle) -> Vec<Site> {
    rasterize(&t.vertices())
}

pub fn rasterize_polygon(p: &Polygon) -> Vec<Site> {
    rasterize(&p.vertices)
}

/// What happened to each side during one refinement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub accepted: usize,
    /// Split because `w(T_S) ≤ 0` or the coin said no.
    pub rejected: usize,
    /// Split because the apex would leave `[-N, N]²`; checked before the
    /// weight.
    pub clipped: usize,
    /// Split because the triangle would touch another part of the polygon.
    pub blocked: usize,
}

/// Apply one refinement step to every side of `polygon`. Sides split in this
/// step are first tested at the next level.
pub fn refine_step(
    polygon: &Polygon,
    field: &FieldRealization,
    epsilon: f64,
    variant: Variant,
    seed: u64,
) -> Result<(Polygon, StepReport), PolygonError> {
    let sides: Vec<(Point, Point)> = polygon.sides().collect();
    let mut coin = rng::purpose_stream(seed, Purpose::PolygonCoin, polygon.level);
    let tol = polygon.tolerance();
    let lim = polygon.n;
    let mut accepted: Vec<Option<Triangle>> = vec![None; sides.len()];
    let mut report = StepReport::default();

    for (i, &(a, b)) in sides.iter().enumerate() {
        let tri = triangle_for_side(a, b, epsilon)?;
        let heads = match variant {
            Variant::Deterministic => true,
            Variant::Stochastic => coin.gen_bool(0.5),
        };
        if tri.apex.x.abs() > lim || tri.apex.y.abs() > lim {
            report.clipped += 1;
            continue;
        }
        let sites = rasterize_triangle(&tri);
        let weight = field
            .weight(&sites, WeightMode::AllColors)
            .map_err(|e| PolygonError::Invariant(e.to_string()))?;
        if !(weight > 0.0 && heads) {
            report.rejected += 1;
            continue;
        }
        let new_edges = [(tri.base_start, tri.apex), (tri.apex, tri.base_end)];
        let collides = sides.iter().enumerate().any(|(j, &(c, d))| {
            if j == i {
                return false;
            }
            let existing: Vec<(Point, Point)> = match accepted[j] {
                Some(t) => vec![(c, t.base_start), (t.base_start, t.apex), (t.apex, t.base_end), (t.base_end, d)],
                None => vec![(c, d)],
            };
            existing
                .iter()
                .any(|&(p, q)| new_edges.iter().any(|&(e, f)| segments_meet(e, f, p, q, tol)))
        });
        if collides {
            report.blocked += 1;
            continue;
        }
        accepted[i] = Some(tri);
        report.accepted += 1;
    }

    let mut vertices = Vec::with_capacity(4 * sides.len());
    for (&(a, b), tri) in sides.iter().zip(&accepted) {
        vertices.push(a);
        match tri {
            Some(t) => vertices.extend([t.base_start, t.apex, t.base_end]),
            None => vertices.extend([a.lerp(b, 0.25), a.lerp(b, 0.5), a.lerp(b, 0.75)]),
        }
    }
    Ok((
        Polygon {
            n: polygon.n,
            level: polygon.level + 1,
            vertices,
        },
        report,
    ))
}

/// One level of a construction run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub polygon: Polygon,
    /// `w` of the rasterized polygon.
    pub weight: f64,
    pub side_count: usize,
    pub area: f64,
    /// Outcome of the step that produced this level (`None` for `P₁`).
    pub step: Option<StepReport>,
}

impl Level {
    /// `level side_count area weight`.
    pub fn trace_line(&self) -> String {
        format!(
            "{} {} {:.16e} {:.16e}",
            self.polygon.level, self.side_count, self.area, self.weight
        )
    }
}

fn level_of(polygon: Polygon, field: &FieldRealization, step: Option<StepReport>) -> Result<Level, PolygonError> {
    let weight = field
        .weight(&rasterize_polygon(&polygon), WeightMode::AllColors)
        .map_err(|e| PolygonError::Invariant(e.to_string()))?;
    Ok(Level {
        side_count: polygon.side_count(),
        area: polygon.area(),
        weight,
        polygon,
        step,
    })
}

/// `P₁, …, P_max_level`, stopping early once every side is shorter than two
/// lattice units.
pub fn run_construction(
    field: &FieldRealization,
    epsilon: f64,
    max_level: u32,
    variant: Variant,
    seed: u64,
) -> Result<Vec<Level>, PolygonError> {
    if max_level == 0 {
        return Err(PolygonError::ZeroLevels);
    }
    let mut levels = vec![level_of(init_polygon(field.spec())?, field, None)?];
    while levels.len() < max_level as usize {
        let current = &levels.last().expect("nonempty").polygon;
        if current.side_lengths().iter().all(|&l| l < 2.0) {
            break;
        }
        let (next, report) = refine_step(current, field, epsilon, variant, seed)?;
        levels.push(level_of(next, field, Some(report))?);
    }
    Ok(levels)
}

/// Ratio of an apex edge to the side it grew from.
pub fn apex_ratio(epsilon: f64) -> f64 {
    (4.0 + epsilon.powf(4.0 / 3.0)).sqrt() / 8.0
}

/// True iff `len` equals `N · 4^{-b} · ρ^c` with `b + c = level - 1`, where
/// `ρ` is [`apex_ratio`]: splitting and base trimming scale a side by `1/4`,
/// apex edges by `ρ`.
pub fn is_reachable_length(len: f64, n: f64, epsilon: f64, level: u32) -> bool {
    let rho = apex_ratio(epsilon);
    let steps = level.saturating_sub(1) as i32;
    (0..=steps).any(|c| {
        let expected = n * 0.25f64.powi(steps - c) * rho.powi(c);
        (len - expected).abs() <= 1e-9 * n
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConvention;

    fn constant_field(n: u32, v: f64) -> FieldRealization {
        FieldRealization::from_fn(BoxSpec::new(n), 2, |_, _| v).unwrap()
    }

    #[test]
    fn initial_square() {
        let p = init_polygon(BoxSpec::new(8)).unwrap();
        assert_eq!(p.perimeter(), 32.0);
        assert_eq!(p.area(), 64.0);
        assert!(p.is_counterclockwise());
        assert_eq!(p.side_lengths(), vec![8.0; 4]);
        let p = init_polygon(BoxSpec::new(2)).unwrap();
        assert_eq!(p.side_lengths(), vec![2.0; 4]);
        assert_eq!(init_polygon(BoxSpec::new(1)), Err(PolygonError::BoxTooSmall(1)));
        p.check_invariants().unwrap();
    }

    #[test]
    fn triangle_geometry() {
        let a = Point::new(-4.0, -4.0);
        let b = Point::new(4.0, -4.0);
        let t = triangle_for_side(a, b, 1.0).unwrap();
        assert_eq!(t.base_start.dist(t.base_end), 4.0);
        assert_eq!(t.apex, Point::new(0.0, -5.0));
        let t = triangle_for_side(a, b, 0.125).unwrap();
        assert!((t.apex.y + 4.25).abs() < 1e-12);
        assert!(matches!(triangle_for_side(a, a, 1.0), Err(PolygonError::DegenerateSide(_))));
        assert!(matches!(triangle_for_side(a, b, 0.0), Err(PolygonError::BadEpsilon(_))));
    }

    #[test]
    fn apex_points_outward() {
        let p = init_polygon(BoxSpec::new(8)).unwrap();
        for (a, b) in p.sides() {
            let t = triangle_for_side(a, b, 1.0).unwrap();
            assert!(t.apex.x.abs() > 4.0 || t.apex.y.abs() > 4.0);
        }
    }

    #[test]
    fn rasterize_examples() {
        let unit = [
            Point::new(-0.5, -0.5),
            Point::new(0.5, -0.5),
            Point::new(0.5, 0.5),
            Point::new(-0.5, 0.5),
        ];
        assert_eq!(rasterize(&unit), vec![Site::ORIGIN]);
        let two = [
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
        ];
        let sites = rasterize(&two);
        assert_eq!(
            sites,
            vec![Site::new(-1, -1), Site::new(0, -1), Site::new(-1, 0), Site::new(0, 0)]
        );
        let mut cw = two;
        cw.reverse();
        assert_eq!(rasterize(&cw), sites);
        let thin = [Point::new(0.1, 0.1), Point::new(0.9, 0.1), Point::new(0.5, 0.3)];
        assert!(rasterize(&thin).is_empty());
    }

    #[test]
    fn all_positive_field_grows_every_side() {
        // Height 2: every triangle covers lattice centers under the half-open
        // rule (at height 1 the bottom triangle covers none).
        let f = constant_field(16, 1.0);
        let p1 = init_polygon(f.spec()).unwrap();
        let (p2, report) = refine_step(&p1, &f, 1.0, Variant::Deterministic, 0).unwrap();
        assert_eq!(report.accepted, 4);
        assert_eq!(p2.side_count(), 16);
        assert!(p2.area() > p1.area());
        p2.check_invariants().unwrap();
    }

    #[test]
    fn non_positive_field_only_splits() {
        for v in [-1.0, 0.0] {
            let f = constant_field(8, v);
            let p1 = init_polygon(f.spec()).unwrap();
            let (p2, report) = refine_step(&p1, &f, 1.0, Variant::Deterministic, 0).unwrap();
            assert_eq!(report.accepted, 0);
            assert_eq!(p2.side_count(), 16);
            assert_eq!(p2.area(), p1.area());
            assert_eq!(p2.side_lengths(), vec![2.0; 16]);
        }
    }

    #[test]
    fn clipped_triangles_are_split() {
        // ε large enough that the apex leaves the box: height 8·ε^{2/3}/8 > 4.
        let f = constant_field(8, 1.0);
        let p1 = init_polygon(f.spec()).unwrap();
        let (p2, report) = refine_step(&p1, &f, 27.0, Variant::Deterministic, 0).unwrap();
        assert_eq!(report.clipped, 4);
        assert_eq!(p2.area(), p1.area());
    }

    #[test]
    fn construction_levels() {
        let f = constant_field(64, 1.0);
        let levels = run_construction(&f, 1.0, 3, Variant::Deterministic, 0).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.side_count).collect();
        assert_eq!(counts, vec![4, 16, 64]);
        assert_eq!(run_construction(&f, 1.0, 1, Variant::Deterministic, 0).unwrap().len(), 1);
        assert_eq!(
            run_construction(&f, 1.0, 0, Variant::Deterministic, 0),
            Err(PolygonError::ZeroLevels)
        );
    }

    #[test]
    fn construction_stops_at_lattice_resolution() {
        let f = constant_field(2, -1.0);
        // Side 2 at level 1, 0.5 at level 2, then every side is below 2.
        let levels = run_construction(&f, 1.0, 6, Variant::Deterministic, 0).unwrap();
        assert_eq!(levels.len(), 2);
    }

    #[test]
    fn stochastic_variant_is_seeded() {
        let f = FieldRealization::sample(BoxSpec::new(32), 2, 1.0, 3, FieldConvention::UnitVariance).unwrap();
        let a = run_construction(&f, 1.0, 4, Variant::Stochastic, 5).unwrap();
        let b = run_construction(&f, 1.0, 4, Variant::Stochastic, 5).unwrap();
        assert_eq!(a, b);
        // All-positive field: the coin alone decides, so over many seeds the
        // first step accepts neither always nor never.
        let pos = constant_field(64, 1.0);
        let p1 = init_polygon(pos.spec()).unwrap();
        let counts: Vec<usize> = (0..40)
            .map(|s| refine_step(&p1, &pos, 1.0, Variant::Stochastic, s).unwrap().1.accepted)
            .collect();
        assert!(counts.iter().any(|&c| c < 4) && counts.iter().any(|&c| c > 0));
    }

    #[test]
    fn reachable_lengths() {
        let rho = apex_ratio(1.0);
        assert!((rho - 5f64.sqrt() / 8.0).abs() < 1e-15);
        assert!(is_reachable_length(64.0, 64.0, 1.0, 1));
        assert!(is_reachable_length(16.0, 64.0, 1.0, 2));
        assert!(is_reachable_length(64.0 * rho, 64.0, 1.0, 2));
        assert!(is_reachable_length(64.0 * rho / 4.0, 64.0, 1.0, 3));
        assert!(!is_reachable_length(32.0, 64.0, 1.0, 2));
    }

    #[test]
    fn self_intersection_detected() {
        let bowtie = Polygon {
            n: 4.0,
            level: 1,
            vertices: vec![
                Point::new(-1.0, -1.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, -1.0),
                Point::new(-1.0, 1.0),
            ],
        };
        assert!(!bowtie.is_simple());
        let mut square = init_polygon(BoxSpec::new(4)).unwrap();
        assert!(square.is_simple());
        square.vertices.reverse();
        assert!(square.check_invariants().is_err());
    }

    #[test]
    fn svg_is_well_formed() {
        let p = init_polygon(BoxSpec::new(4)).unwrap();
        let svg = p.to_svg();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<polygon points=\"-2.000000,2.000000"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
