//! Finite abstract simplicial complexes on integer vertex ids.
//!
//! Faces of every dimension are stored explicitly. The complexes handled here
//! are 2-dimensional with at most a few thousand faces, so this keeps every
//! operation a direct set manipulation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{torsion_of, SparseMatrix};
use crate::par;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("simplex repeats vertex {0}")]
    RepeatedVertex(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("invalid complex: {0}")]
    Invalid(Violation),
    #[error("base vertex {0} belongs to the candidate spur")]
    BaseInSpur(Vertex),
    #[error("not a spur: {0}")]
    NotASpur(SpurViolation),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A face given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self, ComplexError> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(w[0]));
        }
        Ok(Simplex(v))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Codimension-one faces, in the order of the omitted vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// All nonempty subsets, including the simplex itself.
    pub fn subsets(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u32..(1 << k))
            .map(|mask| Simplex((0..k).filter(|&i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Result<Simplex, ComplexError> {
        Simplex::new(self.0.iter().map(|&v| f(v)))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// One failed invariant of a [`SimplicialComplex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingSubset { face: Simplex, subset: Simplex },
    VertexOutOfRange { face: Simplex, vertex: Vertex },
    UnusedVertex(Vertex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingSubset { face, subset } => {
                write!(f, "missing subset {subset} of face {face}")
            }
            Violation::VertexOutOfRange { face, vertex } => {
                write!(f, "face {face} uses vertex {vertex} outside the vertex range")
            }
            Violation::UnusedVertex(v) => write!(f, "vertex {v} lies in no face"),
        }
    }
}

/// A homology group `Z^betti + Z/t_1 + ... + Z/t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.betti == 1 {
            parts.push("Z".to_string());
        } else if self.betti > 1 {
            parts.push(format!("Z^{}", self.betti));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Outcome of a spur test; empty `violations` means the set is a spur.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpurReport {
    pub violations: Vec<SpurViolation>,
}

impl SpurReport {
    pub fn is_spur(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpurViolation {
    NotAdjacentToBase(Vertex),
    InternalEdge(Vertex, Vertex),
    CommonNeighbor {
        first: Vertex,
        second: Vertex,
        neighbor: Vertex,
    },
}

impl fmt::Display for SpurViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpurViolation::NotAdjacentToBase(v) => write!(f, "vertex {v} is not adjacent to the base"),
            SpurViolation::InternalEdge(a, b) => write!(f, "members {a} and {b} are adjacent"),
            SpurViolation::CommonNeighbor {
                first,
                second,
                neighbor,
            } => write!(f, "members {first} and {second} share neighbor {neighbor}"),
        }
    }
}

/// A set of faces with an explicit vertex range `0..vertex_count`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    faces: BTreeSet<Simplex>,
    vertex_count: usize,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SimplicialComplex {{ vertices: {}, f-vector: {:?} }}",
            self.vertex_count,
            self.f_vector()
        )
    }
}

impl SimplicialComplex {
    /// Downward closure of `faces` on `vertex_count` vertices. Vertices that
    /// appear in no face are added as isolated points.
    pub fn from_faces(vertex_count: usize, faces: impl IntoIterator<Item = Simplex>) -> Result<Self, ComplexError> {
        let mut all = BTreeSet::new();
        for f in faces {
            if let Some(&v) = f.vertices().iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::UnknownVertex(v));
            }
            if all.contains(&f) {
                continue;
            }
            all.extend(f.subsets());
        }
        for v in 0..vertex_count {
            all.insert(Simplex(vec![v]));
        }
        Ok(SimplicialComplex {
            faces: all,
            vertex_count,
        })
    }

    /// Stores `faces` exactly as given, without closure. Intended for building
    /// deliberately broken inputs for [`SimplicialComplex::validate`].
    pub fn from_raw_faces(vertex_count: usize, faces: impl IntoIterator<Item = Simplex>) -> Self {
        SimplicialComplex {
            faces: faces.into_iter().collect(),
            vertex_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.faces.contains(s)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().map(Simplex::dimension).max()
    }

    /// Faces of dimension `k` in lexicographic order.
    pub fn faces_of_dim(&self, k: usize) -> Vec<&Simplex> {
        self.faces.iter().filter(|f| f.dimension() == k).collect()
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.faces.iter().filter(|f| f.dimension() == k).count()
    }

    /// Face counts by dimension, starting at vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in &self.faces {
            let d = f.dimension();
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }

    /// Faces that are not a facet of any other face, lexicographically sorted.
    pub fn maximal_faces(&self) -> Vec<&Simplex> {
        let mut covered = BTreeSet::new();
        for f in &self.faces {
            covered.extend(f.facets());
        }
        self.faces.iter().filter(|f| !covered.contains(*f)).collect()
    }

    /// Lists every broken invariant; an empty list means the complex is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut used = vec![false; self.vertex_count];
        for f in &self.faces {
            for &v in f.vertices() {
                match used.get_mut(v) {
                    Some(u) => *u = true,
                    None => out.push(Violation::VertexOutOfRange {
                        face: f.clone(),
                        vertex: v,
                    }),
                }
            }
            for sub in f.facets() {
                if !self.faces.contains(&sub) {
                    out.push(Violation::MissingSubset {
                        face: f.clone(),
                        subset: sub,
                    });
                }
            }
        }
        out.extend(
            used.iter()
                .enumerate()
                .filter(|(_, &u)| !u)
                .map(|(v, _)| Violation::UnusedVertex(v)),
        );
        out
    }

    fn ensure_valid(&self) -> Result<(), ComplexError> {
        match self.validate().into_iter().next() {
            Some(v) => Err(ComplexError::Invalid(v)),
            None => Ok(()),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Boundary map from `k`-faces to `(k-1)`-faces, rows and columns in
    /// lexicographic face order. `k = 0` gives a map to the zero group.
    pub fn boundary_matrix(&self, k: usize) -> SparseMatrix {
        let cols = self.faces_of_dim(k);
        if k == 0 {
            return SparseMatrix::new(0, cols.len());
        }
        let rows = self.faces_of_dim(k - 1);
        let index: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut m = SparseMatrix::new(rows.len(), cols.len());
        for (j, f) in cols.iter().enumerate() {
            for (skip, facet) in f.facets().enumerate() {
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                m.add(index[&facet], j, BigInt::from(sign));
            }
        }
        m
    }

    /// `H_k(C; Z)` from the Smith normal forms of the boundary maps.
    pub fn homology(&self, k: usize) -> Result<HomologyGroup, ComplexError> {
        self.ensure_valid()?;
        Ok(self.homology_unchecked(k))
    }

    fn homology_unchecked(&self, k: usize) -> HomologyGroup {
        let ranks_and_factors = par::map_slice(&[k, k + 1], |&d| {
            let f = self.boundary_matrix(d).invariant_factors();
            let rank = f.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
            (rank, f)
        });
        let chains = self.count_of_dim(k);
        HomologyGroup {
            betti: chains - ranks_and_factors[0].0 - ranks_and_factors[1].0,
            torsion: torsion_of(&ranks_and_factors[1].1),
        }
    }

    /// `H_0 .. H_max` with each boundary map reduced once.
    pub fn homology_upto(&self, max: usize) -> Result<Vec<HomologyGroup>, ComplexError> {
        self.ensure_valid()?;
        let reduced = par::map_range(max + 2, |d| {
            let f = self.boundary_matrix(d).invariant_factors();
            let rank = f.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
            (rank, f)
        });
        Ok((0..=max)
            .map(|k| HomologyGroup {
                betti: self.count_of_dim(k) - reduced[k].0 - reduced[k + 1].0,
                torsion: torsion_of(&reduced[k + 1].1),
            })
            .collect())
    }

    /// Neighbor sets of every vertex.
    pub fn adjacency(&self) -> Vec<BTreeSet<Vertex>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count];
        for f in self.faces.iter().filter(|f| f.dimension() == 1) {
            let (a, b) = (f.vertices()[0], f.vertices()[1]);
            if a < self.vertex_count && b < self.vertex_count {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.faces.contains(&Simplex(vec![a.min(b), a.max(b)]))
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), ComplexError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(ComplexError::UnknownVertex(v))
        }
    }

    /// Tests the three spur conditions for `members` around `base`.
    pub fn is_spur(&self, base: Vertex, members: &BTreeSet<Vertex>) -> Result<SpurReport, ComplexError> {
        self.check_vertex(base)?;
        for &v in members {
            self.check_vertex(v)?;
        }
        if members.contains(&base) {
            return Err(ComplexError::BaseInSpur(base));
        }
        Ok(spur_report(&self.adjacency(), base, members))
    }

    /// Disjoint spurs with at most one edge between them.
    pub fn are_compatible(
        &self,
        base: Vertex,
        first: &BTreeSet<Vertex>,
        second: &BTreeSet<Vertex>,
    ) -> Result<bool, ComplexError> {
        let adj = self.adjacency();
        for s in [first, second] {
            self.check_vertex(base)?;
            for &v in s {
                self.check_vertex(v)?;
            }
            if s.contains(&base) {
                return Err(ComplexError::BaseInSpur(base));
            }
            if let Some(v) = spur_report(&adj, base, s).violations.into_iter().next() {
                return Err(ComplexError::NotASpur(v));
            }
        }
        Ok(compatible_with(&adj, first, second))
    }

    /// Identifies the spur to one vertex. The merged vertex takes the smallest
    /// id in the spur and ids are then compacted; the returned map sends each
    /// old id to its new id.
    ///
    /// An empty spur adjoins a fresh vertex joined to `base` by one edge, which
    /// keeps the vertex count at `old - |S| + 1` and leaves the homotopy type
    /// unchanged.
    pub fn collapse_spur(
        &self,
        base: Vertex,
        members: &BTreeSet<Vertex>,
    ) -> Result<(SimplicialComplex, Vec<Vertex>), ComplexError> {
        let report = self.is_spur(base, members)?;
        if let Some(v) = report.violations.into_iter().next() {
            return Err(ComplexError::NotASpur(v));
        }
        let Some(&target) = members.iter().next() else {
            let w = self.vertex_count;
            let mut faces = self.faces.clone();
            faces.insert(Simplex(vec![w]));
            faces.insert(Simplex(vec![base, w]));
            let relabel = (0..self.vertex_count).collect();
            return Ok((
                SimplicialComplex {
                    faces,
                    vertex_count: w + 1,
                },
                relabel,
            ));
        };
        let mut relabel = Vec::with_capacity(self.vertex_count);
        let mut next = 0;
        for v in 0..self.vertex_count {
            if members.contains(&v) && v != target {
                relabel.push(usize::MAX);
            } else {
                relabel.push(next);
                next += 1;
            }
        }
        let merged = relabel[target];
        for &v in members {
            relabel[v] = merged;
        }
        let mut faces = BTreeSet::new();
        for f in &self.faces {
            faces.insert(f.map(|v| relabel[v])?);
        }
        Ok((
            SimplicialComplex {
                faces,
                vertex_count: next,
            },
            relabel,
        ))
    }

    /// Subcomplex on `keep`, renumbered in increasing id order. The map gives
    /// the new id of each kept vertex.
    pub fn induced_subcomplex(&self, keep: &BTreeSet<Vertex>) -> (SimplicialComplex, Vec<Option<Vertex>>) {
        let mut relabel = vec![None; self.vertex_count];
        for (new, &old) in keep.iter().filter(|&&v| v < self.vertex_count).enumerate() {
            relabel[old] = Some(new);
        }
        let faces = self
            .faces
            .iter()
            .filter_map(|f| {
                f.vertices()
                    .iter()
                    .map(|&v| relabel[v])
                    .collect::<Option<Vec<_>>>()
                    .map(Simplex)
            })
            .collect();
        let count = relabel.iter().flatten().count();
        (
            SimplicialComplex {
                faces,
                vertex_count: count,
            },
            relabel,
        )
    }

    /// Serializes to the `.scx` text format: a header, the vertex count and the
    /// maximal faces in lexicographic order.
    pub fn to_scx(&self) -> String {
        let mut out = format!("scx 1\nv {}\n", self.vertex_count);
        for f in self.maximal_faces() {
            let parts: Vec<String> = f.vertices().iter().map(ToString::to_string).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_scx(text: &str) -> Result<Self, ComplexError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line, message: &str| ComplexError::Parse {
            line,
            message: message.to_string(),
        };
        match lines.next() {
            Some((_, "scx 1")) => {}
            Some((n, _)) => return Err(parse_err(n, "expected header `scx 1`")),
            None => return Err(parse_err(1, "empty input")),
        }
        let vertex_count = match lines.next() {
            Some((n, l)) => l
                .strip_prefix("v ")
                .and_then(|x| x.trim().parse::<usize>().ok())
                .ok_or_else(|| parse_err(n, "expected `v <vertex_count>`"))?,
            None => return Err(parse_err(2, "missing vertex count")),
        };
        let mut faces = Vec::new();
        for (n, l) in lines {
            let vs = l
                .split_whitespace()
                .map(usize::from_str)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(n, &e.to_string()))?;
            let s = Simplex::new(vs).map_err(|e| parse_err(n, &e.to_string()))?;
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= vertex_count) {
                return Err(parse_err(n, &format!("vertex {v} out of range")));
            }
            faces.push(s);
        }
        Self::from_faces(vertex_count, faces)
    }
}

pub(crate) fn spur_report(adj: &[BTreeSet<Vertex>], base: Vertex, members: &BTreeSet<Vertex>) -> SpurReport {
    let mut violations = Vec::new();
    for &v in members {
        if !adj[base].contains(&v) {
            violations.push(SpurViolation::NotAdjacentToBase(v));
        }
    }
    let ms: Vec<Vertex> = members.iter().copied().collect();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if adj[a].contains(&b) {
                violations.push(SpurViolation::InternalEdge(a, b));
            }
            if let Some(&x) = adj[a].intersection(&adj[b]).find(|&&x| x != base) {
                violations.push(SpurViolation::CommonNeighbor {
                    first: a,
                    second: b,
                    neighbor: x,
                });
            }
        }
    }
    SpurReport { violations }
}

pub(crate) fn compatible_with(adj: &[BTreeSet<Vertex>], first: &BTreeSet<Vertex>, second: &BTreeSet<Vertex>) -> bool {
    if !first.is_disjoint(second) {
        return false;
    }
    let cross: usize = first
        .iter()
        .map(|&v| adj[v].iter().filter(|w| second.contains(w)).count())
        .sum();
    cross <= 1
}
