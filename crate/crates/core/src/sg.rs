//! Exact Sylvester–Gallai configuration checks and min-degree pruning of
//! 3-uniform hypergraphs whose edges are coplanar point triples.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{clear_denominators, direction_key, plane_key, rational_rank};
use crate::par;
use crate::presentation::hyperforest_violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SgError {
    #[error("configuration has no points")]
    Empty,
    #[error("point {point} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        point: usize,
        found: usize,
        expected: usize,
    },
    #[error("point {0} is zero")]
    ZeroPoint(usize),
    #[error("points {0} and {1} span a common line through the origin")]
    SharedLine(usize, usize),
    #[error("points {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("no normal vector with entries of size at most {bound} avoids every point")]
    NoNormal { bound: usize },
    #[error("edge {edge} is malformed: {reason}")]
    BadEdge { edge: usize, reason: String },
    #[error("edge {0} does not lie in a 2-dimensional subspace")]
    EdgeNotPlanar(usize),
    #[error("subhypergraph on vertices {vertices:?} has {} edges, too many for a plane", edges.len())]
    Hypothesis {
        vertices: BTreeSet<usize>,
        edges: Vec<usize>,
    },
    #[error("delta must lie in [0, 1]")]
    BadDelta,
    #[error("lambda must be positive")]
    BadLambda,
    #[error("bad input file: {0}")]
    Format(String),
}

/// Points in `Q^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    dimension: usize,
    points: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    dimension: usize,
    points: Vec<Vec<i64>>,
}

impl PointConfig {
    pub fn new(dimension: usize, points: Vec<Vec<BigRational>>) -> Result<Self, SgError> {
        if let Some((point, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dimension) {
            return Err(SgError::DimensionMismatch {
                point,
                found: p.len(),
                expected: dimension,
            });
        }
        Ok(PointConfig { dimension, points })
    }

    pub fn from_integers(dimension: usize, points: &[Vec<BigInt>]) -> Result<Self, SgError> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        PointConfig::new(dimension, pts)
    }

    pub fn from_i64(dimension: usize, points: &[Vec<i64>]) -> Result<Self, SgError> {
        let pts: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        PointConfig::from_integers(dimension, &pts)
    }

    /// Reads `{"dimension": d, "points": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, SgError> {
        let f: PointFile = serde_json::from_str(text).map_err(|e| SgError::Format(e.to_string()))?;
        PointConfig::from_i64(f.dimension, &f.points)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn integer_point(&self, i: usize) -> Vec<BigInt> {
        clear_denominators(&self.points[i])
    }

    /// No zero point and no two points on a common line through the origin.
    pub fn check_linear_mode(&self) -> Result<(), SgError> {
        let mut seen: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        for i in 0..self.len() {
            let key = direction_key(&self.integer_point(i)).ok_or(SgError::ZeroPoint(i))?;
            if let Some(&j) = seen.get(&key) {
                return Err(SgError::SharedLine(j, i));
            }
            seen.insert(key, i);
        }
        Ok(())
    }

    pub fn check_distinct(&self) -> Result<(), SgError> {
        let mut seen: BTreeMap<&[BigRational], usize> = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(&j) = seen.get(p.as_slice()) {
                return Err(SgError::Duplicate(j, i));
            }
            seen.insert(p, i);
        }
        Ok(())
    }

    pub fn subset(&self, indices: &[usize]) -> PointConfig {
        PointConfig {
            dimension: self.dimension,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }
}

/// A 3-uniform multi-hypergraph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    vertex_count: usize,
    edges: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    edges: Vec<[usize; 3]>,
}

impl Hypergraph3 {
    pub fn new(vertex_count: usize, edges: Vec<[usize; 3]>) -> Result<Self, SgError> {
        for (i, e) in edges.iter().enumerate() {
            if e.iter().any(|&v| v >= vertex_count) {
                return Err(SgError::BadEdge {
                    edge: i,
                    reason: "vertex out of range".into(),
                });
            }
            if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
                return Err(SgError::BadEdge {
                    edge: i,
                    reason: "repeated vertex".into(),
                });
            }
        }
        Ok(Hypergraph3 { vertex_count, edges })
    }

    /// Reads `{"edges": [[i, j, k], ...]}`.
    pub fn from_json(vertex_count: usize, text: &str) -> Result<Self, SgError> {
        let f: EdgeFile = serde_json::from_str(text).map_err(|e| SgError::Format(e.to_string()))?;
        Hypergraph3::new(vertex_count, f.edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }
}

/// Picks the first integer normal `n` (by max-norm, then coordinates from
/// high to low) with `v . n != 0` for every point, and scales each point onto
/// the hyperplane `x . n = 1`.
pub fn projectivize(v: &PointConfig) -> Result<(PointConfig, Vec<BigInt>), SgError> {
    v.check_linear_mode()?;
    let d = v.dimension;
    let bound = 2 * v.len() + 1;
    let normal = (1..=bound)
        .find_map(|norm| normals_of_norm(d, norm).find(|n| v.points.iter().all(|p| !rational_dot(p, n).is_zero())))
        .ok_or(SgError::NoNormal { bound })?;
    let points = v
        .points
        .iter()
        .map(|p| {
            let s = rational_dot(p, &normal);
            p.iter().map(|x| x / &s).collect()
        })
        .collect();
    Ok((PointConfig { dimension: d, points }, normal))
}

fn rational_dot(p: &[BigRational], n: &[BigInt]) -> BigRational {
    p.iter()
        .zip(n)
        .map(|(x, y)| x * BigRational::from_integer(y.clone()))
        .sum()
}

/// Integer vectors of length `d` with max-norm exactly `norm`, coordinates
/// running from `norm` down to `-norm` (first coordinate slowest).
fn normals_of_norm(d: usize, norm: usize) -> impl Iterator<Item = Vec<BigInt>> {
    let k = norm as i64;
    let mut digits = vec![0usize; d];
    let width = 2 * norm + 1;
    let mut done = d == 0;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let v: Vec<i64> = digits.iter().map(|&x| k - x as i64).collect();
        let mut i = d;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < width {
                break;
            }
            digits[i] = 0;
        }
        if v.iter().any(|x| x.abs() == k) {
            return Some(v.into_iter().map(BigInt::from).collect());
        }
    })
}

/// Affine dimension: rank of the differences from the first point.
pub fn affine_dimension(v: &PointConfig) -> Result<usize, SgError> {
    let first = v.points.first().ok_or(SgError::Empty)?;
    let diffs: Vec<Vec<BigRational>> = v.points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rational_rank(&diffs))
}

/// Dimension of the linear span.
pub fn span_dimension(v: &PointConfig) -> usize {
    rational_rank(&v.points)
}

fn difference_direction(a: &[BigRational], b: &[BigRational]) -> Vec<BigInt> {
    let diff: Vec<BigRational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    direction_key(&clear_denominators(&diff)).expect("distinct points")
}

/// Lines containing at least three points, each as its sorted point indices.
/// A line is keyed by its primitive direction and its point closest to the
/// origin.
pub fn special_lines(v: &PointConfig) -> Result<Vec<Vec<usize>>, SgError> {
    v.check_distinct()?;
    let mut lines: BTreeMap<(Vec<BigInt>, Vec<BigRational>), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let dir = difference_direction(&v.points[i], &v.points[j]);
            let dir_q: Vec<BigRational> = dir.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let p = &v.points[i];
            let t = p.iter().zip(&dir_q).map(|(a, b)| a * b).sum::<BigRational>()
                / dir_q.iter().map(|b| b * b).sum::<BigRational>();
            let anchor: Vec<BigRational> = p.iter().zip(&dir_q).map(|(a, b)| a - &t * b).collect();
            let members = lines.entry((dir, anchor)).or_default();
            members.insert(i);
            members.insert(j);
        }
    }
    Ok(lines
        .into_values()
        .filter(|s| s.len() >= 3)
        .map(|s| s.into_iter().collect())
        .collect())
}

/// Outcome of a delta-SG test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgReport {
    pub delta: BigRational,
    /// `delta (n - 1)`.
    pub threshold: BigRational,
    /// For each point, how many other points share a special line with it.
    pub tallies: Vec<usize>,
    pub failing: Vec<usize>,
}

impl SgReport {
    pub fn holds(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Tests whether every point has at least `delta (n - 1)` other points on
/// special lines through it.
pub fn is_delta_sg(v: &PointConfig, delta: &BigRational) -> Result<SgReport, SgError> {
    if delta.is_negative() || *delta > BigRational::one() {
        return Err(SgError::BadDelta);
    }
    v.check_distinct()?;
    let n = v.len();
    let tallies = par::map_range(n, |i| {
        let mut by_dir: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        for j in (0..n).filter(|&j| j != i) {
            *by_dir
                .entry(difference_direction(&v.points[i], &v.points[j]))
                .or_default() += 1;
        }
        by_dir.values().filter(|&&c| c >= 2).sum::<usize>()
    });
    let threshold = delta * BigRational::from_integer(BigInt::from(n.saturating_sub(1)));
    let failing = (0..n)
        .filter(|&i| BigRational::from_integer(BigInt::from(tallies[i])) < threshold)
        .collect();
    Ok(SgReport {
        delta: delta.clone(),
        threshold,
        tallies,
        failing,
    })
}

/// The sub-hypergraph left by repeatedly deleting vertices of degree below
/// `lambda` (with their edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn prune_min_degree(h: &Hypergraph3, lambda: &BigRational) -> Result<Pruned, SgError> {
    if !lambda.is_positive() {
        return Err(SgError::BadLambda);
    }
    let below = |d: usize| BigRational::from_integer(BigInt::from(d)) < *lambda;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.vertex_count];
    for (i, e) in h.edges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut degree = h.degrees();
    let mut alive_v = vec![true; h.vertex_count];
    let mut alive_e = vec![true; h.edges.len()];
    let mut queue: VecDeque<usize> = (0..h.vertex_count).filter(|&v| below(degree[v])).collect();
    let mut queued: Vec<bool> = (0..h.vertex_count).map(|v| below(degree[v])).collect();
    while let Some(v) = queue.pop_front() {
        alive_v[v] = false;
        for &e in &incident[v] {
            if !alive_e[e] {
                continue;
            }
            alive_e[e] = false;
            for &w in &h.edges[e] {
                degree[w] -= 1;
                if !queued[w] && below(degree[w]) {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(Pruned {
        vertices: (0..h.vertex_count).filter(|&v| alive_v[v]).collect(),
        edges: (0..h.edges.len()).filter(|&e| alive_e[e]).collect(),
    })
}

/// Checks that every edge is a coplanar triple and that each plane carries a
/// hyperforest, i.e. every vertex set `V'` of span dimension 2 induces at most
/// `|V'| - 1` edges.
pub fn check_hypothesis(v: &PointConfig, h: &Hypergraph3) -> Result<(), SgError> {
    v.check_linear_mode()?;
    if h.vertex_count != v.len() {
        return Err(SgError::Format(format!(
            "hypergraph has {} vertices but there are {} points",
            h.vertex_count,
            v.len()
        )));
    }
    let ints: Vec<Vec<BigInt>> = (0..v.len()).map(|i| v.integer_point(i)).collect();
    let mut planes: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for (i, e) in h.edges.iter().enumerate() {
        if rational_rank(&e.iter().map(|&x| v.points[x].clone()).collect::<Vec<_>>()) != 2 {
            return Err(SgError::EdgeNotPlanar(i));
        }
        let key = plane_key(&ints[e[0]], &ints[e[1]]).expect("distinct directions");
        planes.entry(key).or_default().push(i);
    }
    let planes: Vec<Vec<usize>> = planes.into_values().collect();
    let found = par::find_first(&planes, |edges| {
        let verts: Vec<usize> = edges
            .iter()
            .flat_map(|&e| h.edges[e])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let local: Vec<[usize; 3]> = edges
            .iter()
            .map(|&e| h.edges[e].map(|x| verts.binary_search(&x).expect("own vertex")))
            .collect();
        hyperforest_violation(verts.len(), &local).map(|w| w.into_iter().map(|i| verts[i]).collect::<BTreeSet<_>>())
    });
    if let Some((_, vertices)) = found {
        let edges = (0..h.edges.len())
            .filter(|&e| h.edges[e].iter().all(|x| vertices.contains(x)))
            .collect();
        return Err(SgError::Hypothesis { vertices, edges });
    }
    Ok(())
}

/// Result of pruning a hypothesis-satisfying configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgReduction {
    pub pruned: Pruned,
    pub removed_edges: usize,
    /// `lambda |V|`; the number of removed edges is strictly below it.
    pub removal_bound: BigRational,
    pub removal_bound_holds: bool,
    pub dim_span: usize,
    /// `12 |V| / lambda`.
    pub bound: BigRational,
    pub bound_holds: bool,
    /// Delta-SG test of the projectivized survivors with `delta = lambda / |V|`,
    /// when that delta is at most 1 and some points survive.
    pub sg_check: Option<SgReport>,
}

pub fn sg_reduce(v: &PointConfig, h: &Hypergraph3, lambda: &BigRational) -> Result<SgReduction, SgError> {
    if !lambda.is_positive() {
        return Err(SgError::BadLambda);
    }
    check_hypothesis(v, h)?;
    let pruned = prune_min_degree(h, lambda)?;
    let size = BigRational::from_integer(BigInt::from(v.len()));
    let removed_edges = h.edges.len() - pruned.edges.len();
    let removal_bound = lambda * &size;
    let kept = v.subset(&pruned.vertices);
    let dim_span = span_dimension(&kept);
    let bound = BigRational::from_integer(BigInt::from(12)) * &size / lambda;
    let delta = lambda / &size;
    let sg_check = if !kept.is_empty() && delta <= BigRational::one() {
        let (proj, _) = projectivize(&kept)?;
        Some(is_delta_sg(&proj, &delta)?)
    } else {
        None
    };
    Ok(SgReduction {
        removal_bound_holds: BigRational::from_integer(BigInt::from(removed_edges)) < removal_bound,
        removed_edges,
        removal_bound,
        bound_holds: BigRational::from_integer(BigInt::from(dim_span)) <= bound,
        dim_span,
        bound,
        pruned,
        sg_check,
    })
}
