//! Sparse relation sets and critical generator sets.
//!
//! Every nonempty relation at a minimize fixpoint is a 3-term word whose
//! generators span a plane. Grouping relations by plane turns sparsity into a
//! per-plane hypergraph condition: `R'` is sparse on that plane iff every
//! nonempty set `F` of its edges touches at least `|F| + 1` vertices. That
//! holds iff, for every vertex `x`, the edges can be matched injectively into
//! vertices other than `x` (Hall), which is what the code checks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{subset_dimension, AbelianMap, GenId, Presentation, PresentationError};
use crate::linalg::plane_key;
use crate::par;

/// The relations of one plane as a 3-uniform hypergraph on generator ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneHypergraph {
    pub plane: Vec<BigInt>,
    /// Sorted generator ids touched by some edge.
    pub vertices: Vec<GenId>,
    /// Edges as indices into `vertices`.
    pub edges: Vec<[usize; 3]>,
    /// Relation index of each edge.
    pub relations: Vec<usize>,
}

impl PlaneHypergraph {
    fn generators_of(&self, local: &BTreeSet<usize>) -> BTreeSet<GenId> {
        local.iter().map(|&i| self.vertices[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparsityVerdict {
    Sparse,
    /// `relations` are the members of `R'[generators]`; there are at least
    /// `|generators|` of them.
    Violated {
        generators: BTreeSet<GenId>,
        relations: Vec<usize>,
    },
}

impl SparsityVerdict {
    pub fn is_sparse(&self) -> bool {
        matches!(self, SparsityVerdict::Sparse)
    }
}

/// Groups the nonempty relations among `rels` by the plane spanned by their
/// generator images. Each must be a 3-term relation of dimension 2.
pub fn plane_hypergraphs(
    p: &Presentation,
    phi: &AbelianMap,
    rels: &[usize],
) -> Result<Vec<PlaneHypergraph>, PresentationError> {
    let mut planes: BTreeMap<Vec<BigInt>, Vec<([GenId; 3], usize)>> = BTreeMap::new();
    for &r in rels {
        let nf = p.normal_form(r)?;
        if nf.is_empty() {
            continue;
        }
        let gens = nf.generators();
        let dimension = subset_dimension(phi, &gens)?;
        if dimension > 2 {
            return Err(PresentationError::DimensionTooLarge { relation: r, dimension });
        }
        if gens.len() != 3 || dimension != 2 {
            return Err(PresentationError::DegenerateRelation { relation: r });
        }
        let g: Vec<GenId> = gens.into_iter().collect();
        let key = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .find_map(|&(a, b)| plane_key(phi.image(g[a]), phi.image(g[b])))
            .ok_or(PresentationError::DegenerateRelation { relation: r })?;
        planes.entry(key).or_default().push(([g[0], g[1], g[2]], r));
    }
    Ok(planes
        .into_iter()
        .map(|(plane, members)| {
            let vertices: Vec<GenId> = members
                .iter()
                .flat_map(|(g, _)| g.iter().copied())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let local = |g: GenId| vertices.binary_search(&g).expect("vertex of its own plane");
            let edges = members.iter().map(|(g, _)| g.map(local)).collect();
            let relations = members.iter().map(|&(_, r)| r).collect();
            PlaneHypergraph {
                plane,
                vertices,
                edges,
                relations,
            }
        })
        .collect())
}

/// Bipartite matching of hyperedges into vertices, with one vertex barred.
struct Matcher<'a> {
    edges: &'a [Vec<usize>],
    barred: usize,
    owner: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(vertex_count: usize, edges: &'a [Vec<usize>], barred: usize) -> Self {
        Matcher {
            edges,
            barred,
            owner: vec![None; vertex_count],
        }
    }

    /// Tries to match edge `e`. On failure returns the edges visited by the
    /// search; together they touch at most as many vertices as there are of them.
    fn insert(&mut self, e: usize) -> Result<(), Vec<usize>> {
        let mut seen_v = vec![false; self.owner.len()];
        let mut seen_e = vec![false; self.edges.len()];
        if self.augment(e, &mut seen_v, &mut seen_e) {
            Ok(())
        } else {
            Err((0..self.edges.len()).filter(|&i| seen_e[i]).collect())
        }
    }

    fn augment(&mut self, e: usize, seen_v: &mut [bool], seen_e: &mut [bool]) -> bool {
        seen_e[e] = true;
        for &v in &self.edges[e] {
            if v == self.barred || seen_v[v] {
                continue;
            }
            seen_v[v] = true;
            let free = match self.owner[v] {
                None => true,
                Some(o) => self.augment(o, seen_v, seen_e),
            };
            if free {
                self.owner[v] = Some(e);
                return true;
            }
        }
        false
    }
}

fn touched(edges: &[Vec<usize>], which: &[usize]) -> BTreeSet<usize> {
    which.iter().flat_map(|&i| edges[i].iter().copied()).collect()
}

fn as_vecs(edges: &[[usize; 3]]) -> Vec<Vec<usize>> {
    edges.iter().map(|e| e.to_vec()).collect()
}

/// If `accepted` is a hyperforest, decides whether adding `new` keeps it one.
/// Returns the vertex set of a violating edge set otherwise.
fn extension_violation(vertex_count: usize, accepted: &[Vec<usize>], new: &[usize]) -> Option<BTreeSet<usize>> {
    let mut all = accepted.to_vec();
    all.push(new.to_vec());
    let mut m = Matcher::new(vertex_count, &all, new[0]);
    for e in 0..all.len() {
        if let Err(f) = m.insert(e) {
            return Some(touched(&all, &f));
        }
    }
    None
}

/// Vertex set of some nonempty edge set `F` touching at most `|F|` vertices,
/// or `None` if there is no such set.
pub fn hyperforest_violation(vertex_count: usize, edges: &[[usize; 3]]) -> Option<BTreeSet<usize>> {
    let edges = as_vecs(edges);
    (0..edges.len()).find_map(|e| extension_violation(vertex_count, &edges[..e], &edges[e]))
}

/// Indices of a maximal hyperforest chosen greedily in edge order.
pub fn greedy_hyperforest(vertex_count: usize, edges: &[[usize; 3]]) -> Vec<usize> {
    let edges = as_vecs(edges);
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        if extension_violation(vertex_count, &accepted, e).is_none() {
            accepted.push(e.clone());
            chosen.push(i);
        }
    }
    chosen
}

/// Maximal tight vertex sets (`|E[T]| = |T| - 1`, `|T| >= 2`) of a hyperforest.
/// They are pairwise disjoint and every tight set lies inside one of them.
pub fn maximal_tight_sets(vertex_count: usize, edges: &[[usize; 3]]) -> Vec<BTreeSet<usize>> {
    let edges = as_vecs(edges);
    let active: BTreeSet<usize> = edges.iter().flatten().copied().collect();
    let mut uf: Vec<usize> = (0..vertex_count).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &x in &active {
        let mut base = Matcher::new(vertex_count, &edges, x);
        for e in 0..edges.len() {
            base.insert(e).expect("input is a hyperforest");
        }
        for &y in active.range(x + 1..) {
            if find(&mut uf, x) == find(&mut uf, y) {
                continue;
            }
            // x and y share a tight set iff the 2-edge {x, y} cannot be added.
            let mut all = edges.clone();
            all.push(vec![x, y]);
            let mut m = Matcher {
                edges: &all,
                barred: x,
                owner: base.owner.clone(),
            };
            if let Err(f) = m.insert(all.len() - 1) {
                let w = touched(&all, &f);
                let root = find(&mut uf, x);
                for v in w {
                    let rv = find(&mut uf, v);
                    uf[rv] = root;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &v in &active {
        let r = find(&mut uf, v);
        groups.entry(r).or_default().insert(v);
    }
    let mut out: Vec<BTreeSet<usize>> = groups.into_values().filter(|g| g.len() >= 2).collect();
    out.sort();
    out
}

/// Decides whether `R' = rels` is sparse.
pub fn is_sparse(p: &Presentation, phi: &AbelianMap, rels: &[usize]) -> Result<SparsityVerdict, PresentationError> {
    let planes = plane_hypergraphs(p, phi, rels)?;
    let found = par::find_first(&planes, |h| {
        hyperforest_violation(h.vertices.len(), &h.edges).map(|w| h.generators_of(&w))
    });
    Ok(match found {
        None => SparsityVerdict::Sparse,
        Some((_, generators)) => {
            let relations = super::relations_on(p, rels, &generators)?;
            SparsityVerdict::Violated { generators, relations }
        }
    })
}

/// A maximal sparse subset of the nonempty relations, chosen greedily in
/// relation order.
pub fn maximal_sparse_subset(p: &Presentation, phi: &AbelianMap) -> Result<Vec<usize>, PresentationError> {
    let all: Vec<usize> = (0..p.relation_count()).collect();
    let planes = plane_hypergraphs(p, phi, &all)?;
    let chosen = par::map_slice(&planes, |h| {
        greedy_hyperforest(h.vertices.len(), &h.edges)
            .into_iter()
            .map(|i| h.relations[i])
            .collect::<Vec<_>>()
    });
    let mut out: Vec<usize> = chosen.into_iter().flatten().collect();
    out.sort_unstable();
    Ok(out)
}

/// The maximal critical sets for `R' = rels`, sorted. Every critical set is
/// contained in exactly one member, and distinct members have disjoint
/// relation sets `R[.]`.
pub fn critical_collection(
    p: &Presentation,
    phi: &AbelianMap,
    rels: &[usize],
) -> Result<Vec<BTreeSet<GenId>>, PresentationError> {
    if let SparsityVerdict::Violated { generators, .. } = is_sparse(p, phi, rels)? {
        return Err(PresentationError::NotSparse { generators });
    }
    let planes = plane_hypergraphs(p, phi, rels)?;
    let per_plane = par::map_slice(&planes, |h| {
        maximal_tight_sets(h.vertices.len(), &h.edges)
            .into_iter()
            .map(|t| h.generators_of(&t))
            .collect::<Vec<_>>()
    });
    let mut out: Vec<BTreeSet<GenId>> = per_plane.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{abelian_images, standard_zn, StandardStyle, Word};

    fn brute_violation(n: usize, edges: &[[usize; 3]]) -> bool {
        (1u32..1 << n).any(|mask| {
            let inside = edges.iter().filter(|e| e.iter().all(|&v| mask >> v & 1 == 1)).count();
            inside > 0 && inside + 1 > mask.count_ones() as usize
        })
    }

    #[test]
    fn small_hyperforests() {
        assert!(hyperforest_violation(3, &[[0, 1, 2]]).is_none());
        assert!(hyperforest_violation(3, &[[0, 1, 2], [0, 1, 2]]).is_none());
        let w = hyperforest_violation(3, &[[0, 1, 2], [0, 1, 2], [0, 1, 2]]).unwrap();
        assert_eq!(w, [0, 1, 2].into());
        assert_eq!(greedy_hyperforest(3, &[[0, 1, 2]; 3]), vec![0, 1]);
        let four = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        assert!(hyperforest_violation(4, &four[..3]).is_none());
        assert_eq!(hyperforest_violation(4, &four), Some([0, 1, 2, 3].into()));
    }

    #[test]
    fn tight_sets() {
        assert!(maximal_tight_sets(3, &[[0, 1, 2]]).is_empty());
        assert_eq!(maximal_tight_sets(3, &[[0, 1, 2], [0, 1, 2]]), vec![[0, 1, 2].into()]);
        // two tight triples sharing vertex 2 merge into one tight set
        let e = [[0, 1, 2], [0, 1, 2], [2, 3, 4], [2, 3, 4]];
        assert_eq!(maximal_tight_sets(5, &e), vec![[0, 1, 2, 3, 4].into()]);
        let e = [[0, 1, 2], [0, 1, 2], [3, 4, 5], [3, 4, 5], [2, 3, 6]];
        assert_eq!(maximal_tight_sets(7, &e), vec![[0, 1, 2].into(), [3, 4, 5].into()]);
    }

    #[test]
    fn exhaustive_four_vertex_agreement() {
        let triples: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        // all multisets of up to four edges
        for a in 0..4 {
            for b in a..4 {
                for c in b..4 {
                    for d in c..5 {
                        let mut e = vec![triples[a], triples[b], triples[c]];
                        if d < 4 {
                            e.push(triples[d]);
                        }
                        assert_eq!(hyperforest_violation(4, &e).is_some(), brute_violation(4, &e), "{e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn intro_presentation_planes() {
        let p = standard_zn(3, StandardStyle::Intro3);
        let phi = abelian_images(&p).unwrap();
        let all: Vec<usize> = (0..p.relation_count()).collect();
        let planes = plane_hypergraphs(&p, &phi, &all).unwrap();
        assert_eq!(planes.len(), 3);
        assert!(is_sparse(&p, &phi, &all).unwrap().is_sparse());
        assert!(is_sparse(&p, &phi, &[0]).unwrap().is_sparse());
        assert_eq!(maximal_sparse_subset(&p, &phi).unwrap(), all);
        let c = critical_collection(&p, &phi, &all).unwrap();
        let expect: Vec<BTreeSet<GenId>> = vec![
            p.ids_of(&["g1", "g2", "h1_2"]).unwrap(),
            p.ids_of(&["g1", "g3", "h1_3"]).unwrap(),
            p.ids_of(&["g2", "g3", "h2_3"]).unwrap(),
        ];
        let mut expect = expect;
        expect.sort();
        assert_eq!(c, expect);
        assert!(critical_collection(&p, &phi, &[]).unwrap().is_empty());
    }

    #[test]
    fn triple_relation_is_a_violation() {
        let mut p = standard_zn(2, StandardStyle::Intro3);
        p.push_relation(Word::new([(0, 1), (1, 1), (2, 1)]));
        let phi = abelian_images(&p).unwrap();
        let v = is_sparse(&p, &phi, &[0, 1, 2]).unwrap();
        assert_eq!(
            v,
            SparsityVerdict::Violated {
                generators: [0, 1, 2].into(),
                relations: vec![0, 1, 2]
            }
        );
        assert_eq!(maximal_sparse_subset(&p, &phi).unwrap(), vec![0, 1]);
        assert!(matches!(
            critical_collection(&p, &phi, &[0, 1, 2]),
            Err(PresentationError::NotSparse { .. })
        ));
    }

    #[test]
    fn degenerate_relations_are_rejected() {
        let p = standard_zn(3, StandardStyle::Commutator);
        let phi = abelian_images(&p).unwrap();
        assert!(matches!(
            plane_hypergraphs(&p, &phi, &[0]),
            Err(PresentationError::Relation { .. })
        ));
        let p = Presentation::from_named(&["a", "b", "c"], &[&[("a", 1), ("b", 1), ("c", 1)]]).unwrap();
        let phi = AbelianMap::new(
            3,
            vec![
                vec![1.into(), 0.into(), 0.into()],
                vec![0.into(), 1.into(), 0.into()],
                vec![0.into(), 0.into(), 1.into()],
            ],
        )
        .unwrap();
        assert_eq!(
            plane_hypergraphs(&p, &phi, &[0]),
            Err(PresentationError::DimensionTooLarge {
                relation: 0,
                dimension: 3
            })
        );
    }
}
