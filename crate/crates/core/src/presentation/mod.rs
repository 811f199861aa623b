//! Finite group presentations of free abelian groups, restricted mostly to
//! 3-presentations (every relation has at most three generator-power factors).
//!
//! The abelianization map `phi` is computed from the Smith normal form of the
//! relation matrix and carried alongside every rewrite, so each transformation
//! returns both the new presentation and its new `phi`.

mod io;
mod sparsity;
mod transform;
mod word;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex, Vertex};
use crate::linalg::{binomial, invariant_factors, smith_normal_form, vector_rank, IntegerMatrix, SparseMatrix};

pub use io::PresentationFile;
pub use sparsity::{
    critical_collection, greedy_hyperforest, hyperforest_violation, is_sparse, maximal_sparse_subset,
    maximal_tight_sets, plane_hypergraphs, PlaneHypergraph, SparsityVerdict,
};
pub use transform::{
    minimize, replace1, replace2, replace_sparse, replace_subspace, MinimizeStep, MoveKind, SparseOutcome,
    SparsityPartition, SubspaceOutcome, TietzeMove,
};
pub use word::{normalize, GenId, NormalForm, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("word has {terms} terms after reduction; not a 3-presentation relation")]
    TooLong { terms: usize },
    #[error("relation {relation}: {source}")]
    Relation {
        relation: usize,
        #[source]
        source: Box<PresentationError>,
    },
    #[error("abelianization has torsion {torsion:?}")]
    NotFreeAbelianRank { torsion: Vec<BigInt> },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator id {0} out of range")]
    UnknownGeneratorId(GenId),
    #[error("relation index {0} out of range")]
    UnknownRelation(usize),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("zero exponent on generator `{0}`")]
    ZeroExponent(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("generator `{0}` has nonzero image")]
    NonzeroImage(String),
    #[error("replace2 precondition failed: {0}")]
    Replace2(String),
    #[error("relation {relation} has dimension {dimension}, more than 2")]
    DimensionTooLarge { relation: usize, dimension: usize },
    #[error("relation {relation} is not a 3-term relation of dimension 2")]
    DegenerateRelation { relation: usize },
    #[error("relation set is not sparse on generators {generators:?}")]
    NotSparse { generators: BTreeSet<GenId> },
    #[error("relation {relation} of the extra part lies in no critical set")]
    Uncovered { relation: usize },
    #[error("relation partition is invalid: {0}")]
    InvalidPartition(String),
    #[error("abelian map does not match the presentation: {0}")]
    MapMismatch(String),
    #[error("basepoint {0} is not a vertex")]
    UnknownBasepoint(Vertex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("bad presentation file: {0}")]
    Format(String),
}

impl PresentationError {
    fn at(self, relation: usize) -> Self {
        PresentationError::Relation {
            relation,
            source: Box::new(self),
        }
    }
}

/// A presentation `<S | R>` with named generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Word>,
    next_fresh: usize,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relations {
            if let Some(&(g, _)) = r.terms().iter().find(|&&(g, _)| g >= generators.len()) {
                return Err(PresentationError::UnknownGeneratorId(g));
            }
        }
        Ok(Presentation {
            generators,
            relations,
            next_fresh: 0,
        })
    }

    /// Builds a presentation from relations written with generator names.
    pub fn from_named(generators: &[&str], relations: &[&[(&str, i64)]]) -> Result<Self, PresentationError> {
        let index: HashMap<&str, GenId> = generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let rels = relations
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(g, e)| {
                        index
                            .get(g)
                            .map(|&i| (i, e))
                            .ok_or_else(|| PresentationError::UnknownGenerator(g.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Word::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(generators.iter().map(|s| s.to_string()).collect(), rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn generator_id(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn ids_of(&self, names: &[&str]) -> Result<BTreeSet<GenId>, PresentationError> {
        names
            .iter()
            .map(|n| {
                self.generator_id(n)
                    .ok_or_else(|| PresentationError::UnknownGenerator(n.to_string()))
            })
            .collect()
    }

    /// Next unused name of the form `t<k>`.
    pub(crate) fn fresh_name(&mut self) -> String {
        loop {
            let name = format!("t{}", self.next_fresh);
            self.next_fresh += 1;
            if !self.generators.contains(&name) {
                return name;
            }
        }
    }

    pub(crate) fn push_generator(&mut self, name: String) -> GenId {
        self.generators.push(name);
        self.generators.len() - 1
    }

    pub(crate) fn push_relation(&mut self, w: Word) -> usize {
        self.relations.push(w);
        self.relations.len() - 1
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<String>, &mut Vec<Word>) {
        (&mut self.generators, &mut self.relations)
    }

    /// Normal form of relation `r`.
    pub fn normal_form(&self, r: usize) -> Result<NormalForm, PresentationError> {
        let w = self.relations.get(r).ok_or(PresentationError::UnknownRelation(r))?;
        normalize(w).map_err(|e| e.at(r))
    }

    /// `|S| x |R|` matrix of exponent sums.
    pub fn relation_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.generators.len(), self.relations.len());
        for (j, r) in self.relations.iter().enumerate() {
            for &(g, e) in r.terms() {
                let v = m.get(g, j) + BigInt::from(e);
                m.set(g, j, v);
            }
        }
        m
    }

    fn sparse_relation_matrix(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.generators.len(), self.relations.len());
        for (j, r) in self.relations.iter().enumerate() {
            for &(g, e) in r.terms() {
                m.add(g, j, BigInt::from(e));
            }
        }
        m
    }

    /// Invariants of the abelianization: free rank and torsion coefficients.
    /// Uses the sparse elimination route, independent of [`abelian_images`].
    pub fn abelian_invariants(&self) -> AbelianInvariants {
        let f = self.sparse_relation_matrix().invariant_factors();
        let rank = f.iter().filter(|x| !x.is_zero()).count();
        AbelianInvariants {
            free_rank: self.generators.len() - rank,
            torsion: f.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect(),
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "<>".to_string();
        }
        w.terms()
            .iter()
            .map(|&(g, e)| {
                let name = self.generators.get(g).map_or("?", String::as_str);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Free rank and torsion of an abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn is_free_of_rank(&self, n: usize) -> bool {
        self.free_rank == n && self.torsion.is_empty()
    }
}

/// Images `phi(g)` in `Z^rank`, indexed by generator id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianMap {
    pub rank: usize,
    pub images: Vec<Vec<BigInt>>,
}

impl AbelianMap {
    pub fn new(rank: usize, images: Vec<Vec<BigInt>>) -> Result<Self, PresentationError> {
        if let Some(v) = images.iter().find(|v| v.len() != rank) {
            return Err(PresentationError::MapMismatch(format!(
                "image of length {} in rank {rank}",
                v.len()
            )));
        }
        Ok(AbelianMap { rank, images })
    }

    pub fn image(&self, g: GenId) -> &[BigInt] {
        &self.images[g]
    }

    pub fn is_zero(&self, g: GenId) -> bool {
        self.images[g].iter().all(Zero::is_zero)
    }

    /// Image of a word: the exponent-weighted sum of generator images.
    pub fn word_image(&self, w: &Word) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank];
        for &(g, e) in w.terms() {
            let e = BigInt::from(e);
            for (acc, x) in v.iter_mut().zip(&self.images[g]) {
                *acc += x * &e;
            }
        }
        v
    }

    /// Checks that every relation maps to zero and that the images generate
    /// `Z^rank`.
    pub fn check(&self, p: &Presentation) -> Result<(), PresentationError> {
        if self.images.len() != p.generator_count() {
            return Err(PresentationError::MapMismatch(format!(
                "{} images for {} generators",
                self.images.len(),
                p.generator_count()
            )));
        }
        for (i, r) in p.relations().iter().enumerate() {
            if self.word_image(r).iter().any(|x| !x.is_zero()) {
                return Err(PresentationError::MapMismatch(format!(
                    "relation {i} has nonzero image"
                )));
            }
        }
        let m = IntegerMatrix::from_columns(self.rank, &self.images)
            .map_err(|e| PresentationError::MapMismatch(e.to_string()))?;
        let f = invariant_factors(&m);
        if f.len() != self.rank || !f.iter().all(One::is_one) {
            return Err(PresentationError::MapMismatch("images do not generate Z^n".into()));
        }
        Ok(())
    }
}

/// Abelianization map of `p`, or the torsion coefficients if the
/// abelianization is not free.
///
/// With `L A R = D` the Smith form of the `|S| x |R|` relation matrix and
/// `rank` nonzero diagonal entries, `phi(g)` is column `g` of `L` restricted
/// to rows `rank..|S|`.
pub fn abelian_images(p: &Presentation) -> Result<AbelianMap, PresentationError> {
    let a = p.relation_matrix();
    let snf = smith_normal_form(&a);
    let torsion = snf.torsion();
    if !torsion.is_empty() {
        return Err(PresentationError::NotFreeAbelianRank { torsion });
    }
    let s = p.generator_count();
    let images = (0..s)
        .map(|g| (snf.rank..s).map(|i| snf.left.get(i, g).clone()).collect())
        .collect();
    Ok(AbelianMap {
        rank: s - snf.rank,
        images,
    })
}

/// Dimension of the real span of `phi(S')`.
pub fn subset_dimension(phi: &AbelianMap, subset: &BTreeSet<GenId>) -> Result<usize, PresentationError> {
    let mut vs = Vec::with_capacity(subset.len());
    for &g in subset {
        vs.push(
            phi.images
                .get(g)
                .ok_or(PresentationError::UnknownGeneratorId(g))?
                .as_slice(),
        );
    }
    Ok(vector_rank(&vs))
}

/// Dimension of the generator set of relation `r`'s normal form.
pub fn relation_dimension(p: &Presentation, phi: &AbelianMap, r: usize) -> Result<usize, PresentationError> {
    subset_dimension(phi, &p.normal_form(r)?.generators())
}

/// `R'[S']`: members of `subset` whose normal form is nonempty and uses only
/// generators in `generators`. Empty normal forms are left out, matching the
/// convention that empty relations are stripped before any sparsity analysis.
pub fn relations_on(
    p: &Presentation,
    subset: &[usize],
    generators: &BTreeSet<GenId>,
) -> Result<Vec<usize>, PresentationError> {
    let mut out = Vec::new();
    for &r in subset {
        let nf = p.normal_form(r)?;
        if !nf.is_empty() && nf.generators().is_subset(generators) {
            out.push(r);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardStyle {
    /// `<g_1..g_n | [g_i, g_j]>`; relations have four terms.
    Commutator,
    /// `g_i`, `h_i_j` with relations `g_i g_j h_i_j` and `g_j g_i h_i_j`.
    Intro3,
}

pub fn standard_zn(n: usize, style: StandardStyle) -> Presentation {
    let mut gens: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
    let mut rels = Vec::new();
    match style {
        StandardStyle::Commutator => {
            for i in 0..n {
                for j in i + 1..n {
                    rels.push(Word::new([(i, 1), (j, 1), (i, -1), (j, -1)]));
                }
            }
        }
        StandardStyle::Intro3 => {
            for i in 0..n {
                for j in i + 1..n {
                    let h = gens.len();
                    gens.push(format!("h{}_{}", i + 1, j + 1));
                    rels.push(Word::new([(i, 1), (j, 1), (h, 1)]));
                    rels.push(Word::new([(j, 1), (i, 1), (h, 1)]));
                }
            }
        }
    }
    Presentation::new(gens, rels).expect("well-formed by construction")
}

/// A presentation read off a complex together with the edge of each generator.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub presentation: Presentation,
    /// Oriented edge `(a, b)`, `a < b`, for each generator id.
    pub generator_edges: Vec<(Vertex, Vertex)>,
    /// Vertices in the basepoint's component.
    pub component_size: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
}

/// Presentation of `pi_1` of the basepoint's component: a breadth-first spanning
/// tree (neighbours visited in increasing order) is contracted, each remaining
/// edge `a < b` becomes a generator, and each triangle `a < b < c` becomes the
/// relation `(ab)(bc)(ac)^-1` with tree edges omitted.
pub fn extract_presentation(c: &SimplicialComplex, basepoint: Vertex) -> Result<Extraction, PresentationError> {
    if let Some(v) = c.validate().into_iter().next() {
        return Err(ComplexError::Invalid(v).into());
    }
    if basepoint >= c.vertex_count() {
        return Err(PresentationError::UnknownBasepoint(basepoint));
    }
    let adj = c.adjacency();
    let mut in_comp = vec![false; c.vertex_count()];
    let mut tree: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut queue = VecDeque::from([basepoint]);
    in_comp[basepoint] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !in_comp[y] {
                in_comp[y] = true;
                tree.insert((x.min(y), x.max(y)));
                queue.push_back(y);
            }
        }
    }
    let mut generator_edges = Vec::new();
    let mut edge_gen: BTreeMap<(Vertex, Vertex), GenId> = BTreeMap::new();
    let mut edge_count = 0;
    for e in c.faces_of_dim(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        if !in_comp[a] {
            continue;
        }
        edge_count += 1;
        if !tree.contains(&(a, b)) {
            edge_gen.insert((a, b), generator_edges.len());
            generator_edges.push((a, b));
        }
    }
    let names = generator_edges.iter().map(|(a, b)| format!("e{a}_{b}")).collect();
    let mut rels = Vec::new();
    for t in c.faces_of_dim(2) {
        let [a, b, cc] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
        if !in_comp[a] {
            continue;
        }
        let term = |x: Vertex, y: Vertex, e: i64| edge_gen.get(&(x, y)).map(|&g| (g, e));
        rels.push(Word::new(
            [term(a, b, 1), term(b, cc, 1), term(a, cc, -1)].into_iter().flatten(),
        ));
    }
    let triangle_count = rels.len();
    Ok(Extraction {
        presentation: Presentation::new(names, rels)?,
        generator_edges,
        component_size: in_comp.iter().filter(|&&x| x).count(),
        edge_count,
        triangle_count,
    })
}

/// The three size constraints on a presentation of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyReport {
    pub n: usize,
    pub generators: usize,
    pub relations: usize,
    pub generators_at_least_n: bool,
    pub excess_at_least: bool,
    pub relations_at_least: bool,
    /// Equality in all three.
    pub tight: bool,
}

impl DeficiencyReport {
    pub fn holds(&self) -> bool {
        self.generators_at_least_n && self.excess_at_least && self.relations_at_least
    }
}

/// Checks `|S| >= n`, `|R| - |S| >= C(n,2) - n` and `|R| >= C(n,2)`.
pub fn deficiency_report(p: &Presentation, n: usize) -> DeficiencyReport {
    let s = BigInt::from(p.generator_count());
    let r = BigInt::from(p.relation_count());
    let nn = BigInt::from(n);
    let c2 = binomial(n as u64, 2);
    let excess_bound = &c2 - &nn;
    DeficiencyReport {
        n,
        generators: p.generator_count(),
        relations: p.relation_count(),
        generators_at_least_n: s >= nn,
        excess_at_least: &r - &s >= excess_bound,
        relations_at_least: r >= c2,
        tight: s == nn && &r - &s == excess_bound && r == c2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;
    use crate::construction::torus_block_complex;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn standard_shapes() {
        let c1 = standard_zn(1, StandardStyle::Commutator);
        assert_eq!((c1.generator_count(), c1.relation_count()), (1, 0));
        let i2 = standard_zn(2, StandardStyle::Intro3);
        assert_eq!((i2.generator_count(), i2.relation_count()), (3, 2));
        assert_eq!(i2.to_string(), "< g1, g2, h1_2 | g1 g2 h1_2, g2 g1 h1_2 >");
        for n in 1..=5 {
            for style in [StandardStyle::Commutator, StandardStyle::Intro3] {
                let p = standard_zn(n, style);
                let phi = abelian_images(&p).unwrap();
                assert_eq!(phi.rank, n);
                phi.check(&p).unwrap();
                assert!(p.abelian_invariants().is_free_of_rank(n));
            }
        }
    }

    #[test]
    fn intro_images() {
        let p = standard_zn(2, StandardStyle::Intro3);
        let phi = abelian_images(&p).unwrap();
        let sum: Vec<BigInt> = phi.image(0).iter().zip(phi.image(1)).map(|(a, b)| -(a + b)).collect();
        assert_eq!(phi.image(2), sum.as_slice());
        let all: BTreeSet<GenId> = [0, 1].into();
        assert_eq!(subset_dimension(&phi, &all).unwrap(), 2);
        assert_eq!(subset_dimension(&phi, &BTreeSet::new()).unwrap(), 0);
        assert_eq!(relation_dimension(&p, &phi, 0).unwrap(), 2);
        assert!(subset_dimension(&phi, &[7].into()).is_err());
    }

    #[test]
    fn torsion_is_rejected() {
        let p = Presentation::from_named(&["g"], &[&[("g", 2)]]).unwrap();
        assert_eq!(
            abelian_images(&p),
            Err(PresentationError::NotFreeAbelianRank { torsion: ints(&[2]) })
        );
        assert_eq!(p.abelian_invariants().torsion, ints(&[2]));
    }

    #[test]
    fn relations_on_filters() {
        let p = standard_zn(3, StandardStyle::Intro3);
        let all: Vec<usize> = (0..p.relation_count()).collect();
        let everything: BTreeSet<GenId> = (0..p.generator_count()).collect();
        assert_eq!(relations_on(&p, &all, &everything).unwrap(), all);
        let triple = p.ids_of(&["g1", "g2", "h1_2"]).unwrap();
        assert_eq!(relations_on(&p, &all, &triple).unwrap(), vec![0, 1]);
        let single = p.ids_of(&["g1"]).unwrap();
        assert!(relations_on(&p, &all, &single).unwrap().is_empty());
    }

    #[test]
    fn extraction_small_cases() {
        let s = |v: &[usize]| Simplex::new(v.iter().copied()).unwrap();
        let circle = SimplicialComplex::from_faces(3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]).unwrap();
        let e = extract_presentation(&circle, 0).unwrap();
        assert_eq!(
            (e.presentation.generator_count(), e.presentation.relation_count()),
            (1, 0)
        );
        let disk = SimplicialComplex::from_faces(3, [s(&[0, 1, 2])]).unwrap();
        let e = extract_presentation(&disk, 0).unwrap();
        assert_eq!(e.presentation.generator_count(), 1);
        assert_eq!(e.presentation.relations()[0].len(), 1);
        assert!(abelian_images(&e.presentation).unwrap().rank == 0);
        let torus = torus_block_complex();
        let e = extract_presentation(&torus, 0).unwrap();
        assert_eq!(
            (e.presentation.generator_count(), e.presentation.relation_count()),
            (15, 14)
        );
        assert_eq!(abelian_images(&e.presentation).unwrap().rank, 2);
        assert!(extract_presentation(&torus, 9).is_err());
    }

    #[test]
    fn extraction_uses_basepoint_component() {
        let s = |v: &[usize]| Simplex::new(v.iter().copied()).unwrap();
        let two = SimplicialComplex::from_faces(6, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2]), s(&[3, 4, 5])]).unwrap();
        let e = extract_presentation(&two, 4).unwrap();
        assert_eq!(e.component_size, 3);
        assert_eq!(
            (e.presentation.generator_count(), e.presentation.relation_count()),
            (1, 1)
        );
    }

    #[test]
    fn deficiency_of_commutator_is_tight() {
        for n in 1..=8 {
            let r = deficiency_report(&standard_zn(n, StandardStyle::Commutator), n);
            assert!(r.holds() && r.tight, "{r:?}");
            let r = deficiency_report(&standard_zn(n, StandardStyle::Intro3), n);
            assert!(r.holds());
        }
    }

    #[test]
    fn map_check_catches_mismatch() {
        let p = standard_zn(2, StandardStyle::Commutator);
        let bad = AbelianMap::new(2, vec![ints(&[2, 0]), ints(&[0, 1])]).unwrap();
        assert!(bad.check(&p).is_err());
        assert!(AbelianMap::new(2, vec![ints(&[1])]).is_err());
    }
}
