//! The complexes `W_n`, their spur partitions, and the collapsed complexes `X_m`.
//!
//! `W_n` has a base vertex `u`, a triangle-boundary loop `u, v_{i,1}, v_{i,2}`
//! for each `i`, and one 7-vertex torus block glued along loops `i` and `j` for
//! each pair `i < j`. `X_m` collapses the `w`-vertices of `W_m` along `4n - 2`
//! pairwise compatible spurs read off an orthogonal pair of 1-factorizations of
//! `K_2n`, `n = ceil(m / 2)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::factorization::{orthogonal_pair, FactorizationError, OrthogonalPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("n must be at least 1")]
    ZeroIndex,
    #[error("no spur partition is available for m = {0}")]
    UnsupportedSize(usize),
    #[error("torus block labels must be distinct")]
    DuplicateLabels,
    #[error("factorization size {found} does not fit a labeling of W_{labels}")]
    SizeMismatch { found: usize, labels: usize },
    #[error(transparent)]
    Factorization(#[from] FactorizationError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Vertex ids of `W_n`: `u = 0`, then `v_{i,k}` in `(i, k)` order, then
/// `w_{i,j,k}` in `(i, j, k)` order. Indices are 1-based as in the names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WnLabeling {
    pub n: usize,
    pub u: Vertex,
    pub v: Vec<[Vertex; 2]>,
    pub w: BTreeMap<(usize, usize), [Vertex; 2]>,
}

impl WnLabeling {
    pub fn new(n: usize) -> Self {
        let v: Vec<[Vertex; 2]> = (0..n).map(|i| [1 + 2 * i, 2 + 2 * i]).collect();
        let mut next = 1 + 2 * n;
        let mut w = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                w.insert((i, j), [next, next + 1]);
                next += 2;
            }
        }
        WnLabeling { n, u: 0, v, w }
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.n + self.n + 1
    }

    pub fn v(&self, i: usize, k: usize) -> Vertex {
        self.v[i - 1][k - 1]
    }

    pub fn w(&self, i: usize, j: usize, k: usize) -> Vertex {
        self.w[&(i, j)][k - 1]
    }

    pub fn w_vertices(&self) -> BTreeSet<Vertex> {
        self.w.values().flat_map(|p| p.iter().copied()).collect()
    }

    /// Vertex names indexed by id.
    pub fn names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.vertex_count()];
        names[self.u] = "u".into();
        for i in 1..=self.n {
            for k in 1..=2 {
                names[self.v(i, k)] = format!("v_{i}_{k}");
            }
        }
        for (&(i, j), ids) in &self.w {
            for k in 1..=2 {
                names[ids[k - 1]] = format!("w_{i}_{j}_{k}");
            }
        }
        names
    }

    /// Sidecar text: one `name id` line per vertex, in id order.
    pub fn to_text(&self) -> String {
        self.names()
            .iter()
            .enumerate()
            .map(|(id, name)| format!("{name} {id}\n"))
            .collect()
    }
}

/// The 14 triangles of the 7-vertex torus, for labels
/// `[u, v_i1, v_i2, v_j1, v_j2, w1, w2]`.
pub fn torus_block(labels: [Vertex; 7]) -> Result<Vec<Simplex>, ConstructionError> {
    let distinct: BTreeSet<Vertex> = labels.iter().copied().collect();
    if distinct.len() != 7 {
        return Err(ConstructionError::DuplicateLabels);
    }
    let [u, vi1, vi2, vj1, vj2, w1, w2] = labels;
    let triangles = [
        [u, vi1, w1],
        [u, vj1, w1],
        [vi1, vi2, w1],
        [vj1, w1, w2],
        [vj1, vj2, vi1],
        [vj2, u, vi1],
        [vj1, vi1, w2],
        [vi1, vi2, w2],
        [vi2, u, w2],
        [w2, vj2, u],
        [w1, vi2, vj2],
        [w1, w2, vj2],
        [vi2, u, vj1],
        [vi2, vj1, vj2],
    ];
    Ok(triangles
        .iter()
        .map(|t| Simplex::new(t.iter().copied()).expect("labels are distinct"))
        .collect())
}

/// The torus block on ids `0..7` as a standalone complex.
pub fn torus_block_complex() -> SimplicialComplex {
    let tris = torus_block([0, 1, 2, 3, 4, 5, 6]).expect("distinct labels");
    SimplicialComplex::from_faces(7, tris).expect("ids in range")
}

pub fn build_w(n: usize) -> Result<(SimplicialComplex, WnLabeling), ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::ZeroIndex);
    }
    let lab = WnLabeling::new(n);
    let mut faces = Vec::new();
    for i in 1..=n {
        let (a, b) = (lab.v(i, 1), lab.v(i, 2));
        for pair in [[lab.u, a], [a, b], [b, lab.u]] {
            faces.push(Simplex::new(pair).expect("distinct"));
        }
    }
    for (&(i, j), w) in &lab.w {
        faces.extend(torus_block([
            lab.u,
            lab.v(i, 1),
            lab.v(i, 2),
            lab.v(j, 1),
            lab.v(j, 2),
            w[0],
            w[1],
        ])?);
    }
    let c = SimplicialComplex::from_faces(lab.vertex_count(), faces)?;
    Ok((c, lab))
}

/// `W_{2n-1}` as the subcomplex of `W_{2n}` induced on vertices that do not
/// reference index `2n`. Ids agree with [`build_w`]`(2n - 1)`.
pub fn build_w_odd(n: usize) -> Result<(SimplicialComplex, WnLabeling), ConstructionError> {
    let (big, lab) = build_w(2 * n)?;
    let mut drop: BTreeSet<Vertex> = lab.v[2 * n - 1].iter().copied().collect();
    for i in 1..2 * n {
        drop.extend(lab.w[&(i, 2 * n)]);
    }
    let keep: BTreeSet<Vertex> = (0..big.vertex_count()).filter(|v| !drop.contains(v)).collect();
    let (sub, _) = big.induced_subcomplex(&keep);
    Ok((sub, WnLabeling::new(2 * n - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A candidate spur: a vertex set around a base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpurSet {
    pub base: Vertex,
    pub members: BTreeSet<Vertex>,
}

/// One spur per matching: all matchings of the first factorization (using
/// `w_{i,j,1}`), then all of the second (using `w_{i,j,2}`). For odd parity,
/// pairs touching index `2n` are dropped.
pub fn build_spurs(
    n: usize,
    parity: Parity,
    pair: &OrthogonalPair,
    labeling: &WnLabeling,
) -> Result<Vec<SpurSet>, ConstructionError> {
    let expected = match parity {
        Parity::Even => 2 * n,
        Parity::Odd => 2 * n - 1,
    };
    if pair.size() != 2 * n || labeling.n != expected {
        return Err(ConstructionError::SizeMismatch {
            found: pair.size(),
            labels: labeling.n,
        });
    }
    let mut out = Vec::with_capacity(4 * n - 2);
    for (k, f) in [(1, &pair.first), (2, &pair.second)] {
        for m in f.matchings() {
            let members = m
                .edges()
                .iter()
                .filter(|&&(_, j)| j <= labeling.n)
                .map(|&(i, j)| labeling.w(i, j, k))
                .collect();
            out.push(SpurSet {
                base: labeling.u,
                members,
            });
        }
    }
    Ok(out)
}

/// Everything produced on the way from `W_m` to `X_m`.
#[derive(Debug, Clone)]
pub struct XConstruction {
    pub m: usize,
    pub w: SimplicialComplex,
    pub labeling: WnLabeling,
    pub pair: OrthogonalPair,
    pub spurs: Vec<SpurSet>,
    pub x: SimplicialComplex,
}

pub fn is_supported(m: usize) -> bool {
    m >= 1 && !(3..=6).contains(&m)
}

/// Builds `X_m` with all intermediate artifacts. `seed` only affects the
/// factorization search.
pub fn build_x_with(m: usize, seed: u64) -> Result<XConstruction, ConstructionError> {
    if !is_supported(m) {
        return Err(ConstructionError::UnsupportedSize(m));
    }
    let n = m.div_ceil(2);
    let parity = if m.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    let pair = orthogonal_pair(2 * n, seed)?;
    let (w, labeling) = match parity {
        Parity::Even => build_w(m)?,
        Parity::Odd => build_w_odd(n)?,
    };
    let spurs = build_spurs(n, parity, &pair, &labeling)?;
    let x = collapse_all(&w, &spurs)?;
    Ok(XConstruction {
        m,
        w,
        labeling,
        pair,
        spurs,
        x,
    })
}

pub fn build_x(m: usize) -> Result<SimplicialComplex, ConstructionError> {
    Ok(build_x_with(m, 0)?.x)
}

/// Collapses the spurs one at a time in the given order, carrying the
/// remaining spurs through each relabeling.
pub fn collapse_all(c: &SimplicialComplex, spurs: &[SpurSet]) -> Result<SimplicialComplex, ConstructionError> {
    let mut current = c.clone();
    let mut pending: Vec<SpurSet> = spurs.to_vec();
    while !pending.is_empty() {
        let s = pending.remove(0);
        let (next, map) = current.collapse_spur(s.base, &s.members)?;
        for p in &mut pending {
            p.base = map[p.base];
            p.members = p.members.iter().map(|&v| map[v]).collect();
        }
        current = next;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::HomologyGroup;

    fn link_edges(c: &SimplicialComplex, v: Vertex) -> Vec<(Vertex, Vertex)> {
        c.faces_of_dim(2)
            .into_iter()
            .filter(|t| t.contains(v))
            .map(|t| {
                let o: Vec<Vertex> = t.vertices().iter().copied().filter(|&x| x != v).collect();
                (o[0], o[1])
            })
            .collect()
    }

    #[test]
    fn torus_block_shape() {
        assert_eq!(
            torus_block([0, 1, 2, 3, 4, 5, 5]),
            Err(ConstructionError::DuplicateLabels)
        );
        let t = torus_block_complex();
        assert_eq!(t.f_vector(), vec![7, 21, 14]);
        assert_eq!(t.euler_characteristic(), 0);
        let h = t.homology_upto(2).unwrap();
        assert_eq!(
            h,
            vec![HomologyGroup::free(1), HomologyGroup::free(2), HomologyGroup::free(1)]
        );
        for v in 0..7 {
            let edges = link_edges(&t, v);
            assert_eq!(edges.len(), 6, "vertex {v}");
            // every link vertex has degree 2 and the link is connected: one 6-cycle
            let mut deg = BTreeMap::new();
            for &(a, b) in &edges {
                *deg.entry(a).or_insert(0) += 1;
                *deg.entry(b).or_insert(0) += 1;
            }
            assert_eq!(deg.len(), 6);
            assert!(deg.values().all(|&d| d == 2));
            let mut seen = BTreeSet::from([edges[0].0]);
            let mut frontier = vec![edges[0].0];
            while let Some(x) = frontier.pop() {
                for &(a, b) in &edges {
                    for (p, q) in [(a, b), (b, a)] {
                        if p == x && seen.insert(q) {
                            frontier.push(q);
                        }
                    }
                }
            }
            assert_eq!(seen.len(), 6);
        }
    }

    #[test]
    fn small_w() {
        let (w1, _) = build_w(1).unwrap();
        assert_eq!(w1.f_vector(), vec![3, 3]);
        assert_eq!(w1.homology(1).unwrap(), HomologyGroup::free(1));
        let (w2, _) = build_w(2).unwrap();
        assert_eq!(w2.f_vector(), vec![7, 21, 14]);
        let (w3, _) = build_w(3).unwrap();
        assert_eq!(w3.f_vector(), vec![13, 54, 42]);
        assert!(w3.validate().is_empty());
        assert_eq!(w3.euler_characteristic(), 1);
        let h = w3.homology_upto(2).unwrap();
        assert_eq!(h[1], HomologyGroup::free(3));
        assert_eq!(h[2], HomologyGroup::free(3));
        assert_eq!(build_w(0).unwrap_err(), ConstructionError::ZeroIndex);
    }

    #[test]
    fn labels_and_names() {
        let lab = WnLabeling::new(3);
        assert_eq!(lab.v(2, 1), 3);
        assert_eq!(lab.w(1, 2, 1), 7);
        assert_eq!(lab.w(2, 3, 2), 12);
        let text = lab.to_text();
        assert!(text.starts_with("u 0\nv_1_1 1\n"));
        assert!(text.ends_with("w_2_3_2 12\n"));
    }

    #[test]
    fn odd_w_is_induced() {
        for n in 1..=4 {
            let (odd, _) = build_w_odd(n).unwrap();
            let (direct, _) = build_w(2 * n - 1).unwrap();
            assert_eq!(odd, direct);
        }
    }

    #[test]
    fn w_neighbourhoods() {
        let (w, lab) = build_w(4).unwrap();
        let adj = w.adjacency();
        for (&(i, j), ids) in &lab.w {
            let mut allowed = BTreeSet::from([lab.u]);
            for k in 1..=2 {
                allowed.extend([lab.v(i, k), lab.v(j, k), lab.w(i, j, k)]);
            }
            for &id in ids {
                assert!(adj[id].is_subset(&allowed));
            }
        }
    }

    #[test]
    fn small_x() {
        let x1 = build_x(1).unwrap();
        assert_eq!(x1.vertex_count(), 5);
        assert_eq!(x1.homology(1).unwrap(), HomologyGroup::free(1));
        let x2 = build_x(2).unwrap();
        assert_eq!(x2.vertex_count(), 7);
        for m in 3..=6 {
            assert_eq!(build_x(m).unwrap_err(), ConstructionError::UnsupportedSize(m));
        }
        assert_eq!(build_x(0).unwrap_err(), ConstructionError::UnsupportedSize(0));
    }

    #[test]
    fn spur_size_mismatch() {
        let pair = orthogonal_pair(8, 0).unwrap();
        let lab = WnLabeling::new(6);
        assert!(build_spurs(4, Parity::Even, &pair, &lab).is_err());
    }
}
