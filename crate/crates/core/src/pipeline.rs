//! End-to-end drivers: building and certifying `X_m`, and running the
//! presentation-shrinking argument on a presentation of `Z^n` stage by stage.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{compatible_with, spur_report, ComplexError, HomologyGroup, SimplicialComplex};
use crate::construction::{build_w, build_x_with, ConstructionError, SpurSet, XConstruction};
use crate::linalg::binomial;
use crate::presentation::{
    abelian_images, deficiency_report, maximal_sparse_subset, minimize, relations_on, replace_sparse, replace_subspace,
    subset_dimension, AbelianInvariants, AbelianMap, DeficiencyReport, GenId, MinimizeStep, Presentation,
    PresentationError, SparsityPartition,
};
use crate::sg::{sg_reduce, Hypergraph3, PointConfig, SgError, SgReduction};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{stage}: {source}")]
    Presentation {
        stage: &'static str,
        #[source]
        source: PresentationError,
    },
    #[error("{stage}: {source}")]
    Sg {
        stage: &'static str,
        #[source]
        source: SgError,
    },
    #[error("{0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at<T>(stage: &'static str, r: Result<T, PresentationError>) -> Result<T, PipelineError> {
    r.map_err(|source| PipelineError::Presentation { stage, source })
}

fn ratio(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

/// Vertex count promised for `X_m`: `8n - 1` for `m = 2n`, `8n - 3` for `m = 2n - 1`.
pub fn expected_x_vertices(m: usize) -> usize {
    let n = m.div_ceil(2);
    if m.is_multiple_of(2) {
        8 * n - 1
    } else {
        8 * n - 3
    }
}

/// Spur checks along a collapse sequence. Entry `i` describes the spurs still
/// pending before collapse `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseAudit {
    pub steps: Vec<CollapseStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    pub pending: usize,
    pub all_spurs: bool,
    pub all_compatible: bool,
}

impl CollapseAudit {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.all_spurs && s.all_compatible)
    }
}

/// Collapses `spurs` in order, checking before each collapse that every
/// pending set is a spur and that they are pairwise compatible.
pub fn audit_collapses(
    c: &SimplicialComplex,
    spurs: &[SpurSet],
) -> Result<(SimplicialComplex, CollapseAudit), PipelineError> {
    let mut current = c.clone();
    let mut pending = spurs.to_vec();
    let mut steps = Vec::with_capacity(spurs.len());
    while !pending.is_empty() {
        let adj = current.adjacency();
        let all_spurs = pending.iter().all(|s| spur_report(&adj, s.base, &s.members).is_spur());
        let all_compatible = (0..pending.len())
            .all(|i| (i + 1..pending.len()).all(|j| compatible_with(&adj, &pending[i].members, &pending[j].members)));
        steps.push(CollapseStep {
            pending: pending.len(),
            all_spurs,
            all_compatible,
        });
        let s = pending.remove(0);
        let (next, map) = current.collapse_spur(s.base, &s.members)?;
        for p in &mut pending {
            p.base = map[p.base];
            p.members = p.members.iter().map(|&v| map[v]).collect();
        }
        current = next;
    }
    Ok((current, CollapseAudit { steps }))
}

/// Certificate for one `X_m`.
#[derive(Debug, Clone)]
pub struct UpperReport {
    pub m: usize,
    pub w_f_vector: Vec<usize>,
    pub x_f_vector: Vec<usize>,
    pub expected_vertices: usize,
    pub w_homology: Vec<HomologyGroup>,
    pub x_homology: Vec<HomologyGroup>,
    pub spur_count: usize,
    pub audit: CollapseAudit,
}

impl UpperReport {
    pub fn vertices_ok(&self) -> bool {
        self.x_f_vector.first() == Some(&self.expected_vertices)
    }

    /// `H_1 = Z^m` and `H_2 = Z^C(m,2)`, both torsion-free.
    pub fn homology_ok(&self) -> bool {
        let c2 = self.m * (self.m.saturating_sub(1)) / 2;
        self.x_homology.get(1) == Some(&HomologyGroup::free(self.m))
            && self.x_homology.get(2) == Some(&HomologyGroup::free(c2))
    }

    pub fn homology_matches(&self) -> bool {
        self.w_homology == self.x_homology
    }

    pub fn passed(&self) -> bool {
        self.vertices_ok() && self.homology_ok() && self.homology_matches() && self.audit.passed()
    }
}

impl fmt::Display for UpperReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs = |h: &[HomologyGroup]| h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        writeln!(f, "m = {}", self.m)?;
        writeln!(
            f,
            "W: f-vector {:?}, homology [{}]",
            self.w_f_vector,
            hs(&self.w_homology)
        )?;
        writeln!(
            f,
            "X: f-vector {:?}, homology [{}]",
            self.x_f_vector,
            hs(&self.x_homology)
        )?;
        writeln!(
            f,
            "vertices: {} (expected {}) {}",
            self.x_f_vector.first().copied().unwrap_or(0),
            self.expected_vertices,
            yes(self.vertices_ok())
        )?;
        writeln!(f, "homology H1 = Z^m, H2 = Z^C(m,2): {}", yes(self.homology_ok()))?;
        writeln!(
            f,
            "homology of X equals homology of W: {}",
            yes(self.homology_matches())
        )?;
        writeln!(
            f,
            "spurs: {}, spur and compatibility checks before every collapse: {}",
            self.spur_count,
            yes(self.audit.passed())
        )?;
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Builds `W_m`, its spurs and `X_m`, and certifies them.
pub fn run_upper(m: usize, seed: u64) -> Result<(XConstruction, UpperReport), PipelineError> {
    let xc = build_x_with(m, seed)?;
    let (x, audit) = audit_collapses(&xc.w, &xc.spurs)?;
    debug_assert_eq!(x, xc.x);
    let w_homology = xc.w.homology_upto(2)?;
    let x_homology = xc.x.homology_upto(2)?;
    let report = UpperReport {
        m,
        w_f_vector: xc.w.f_vector(),
        x_f_vector: xc.x.f_vector(),
        expected_vertices: expected_x_vertices(m),
        w_homology,
        x_homology,
        spur_count: xc.spurs.len(),
        audit,
    };
    Ok((xc, report))
}

pub fn spurs_to_text(spurs: &[SpurSet]) -> String {
    let mut s = String::new();
    for sp in spurs {
        let members: Vec<String> = sp.members.iter().map(ToString::to_string).collect();
        writeln!(s, "{}: {}", sp.base, members.join(" ")).expect("writing to a string");
    }
    s
}

/// Writes `W.scx`, `W.labels`, `pair.txt`, `spurs.txt` and `X.scx` into `dir`.
pub fn write_upper_artifacts(xc: &XConstruction, dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("W.scx"), xc.w.to_scx())?;
    fs::write(dir.join("W.labels"), xc.labeling.to_text())?;
    fs::write(dir.join("pair.txt"), xc.pair.to_text())?;
    fs::write(dir.join("spurs.txt"), spurs_to_text(&xc.spurs))?;
    fs::write(dir.join("X.scx"), xc.x.to_scx())?;
    Ok(())
}

/// `W_n` census values: vertices, edges, triangles and Euler characteristic.
pub fn w_census(n: usize) -> Result<[i64; 4], PipelineError> {
    let (w, _) = build_w(n)?;
    Ok([
        w.vertex_count() as i64,
        w.count_of_dim(1) as i64,
        w.count_of_dim(2) as i64,
        w.euler_characteristic(),
    ])
}

/// Sizes and abelianization at one stage of [`run_lower`].
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub name: &'static str,
    pub generators: usize,
    pub relations: usize,
    pub expected_rank: usize,
    pub invariants: AbelianInvariants,
}

impl StageRecord {
    fn new(name: &'static str, p: &Presentation, expected_rank: usize) -> Self {
        StageRecord {
            name,
            generators: p.generator_count(),
            relations: p.relation_count(),
            expected_rank,
            invariants: p.abelian_invariants(),
        }
    }

    pub fn rank_ok(&self) -> bool {
        self.invariants.is_free_of_rank(self.expected_rank)
    }
}

#[derive(Debug, Clone)]
pub struct LowerReport {
    pub n: usize,
    pub k: usize,
    pub c: BigRational,
    pub lambda: BigRational,
    pub stages: Vec<StageRecord>,
    pub minimize_trace: Vec<MinimizeStep>,
    pub sparse_subset: usize,
    pub sg_removed_edges: usize,
    pub sg_removal_ok: bool,
    pub sg_dim_span: usize,
    pub sg_bound: BigRational,
    pub sg_bound_ok: bool,
    pub sg_check: Option<bool>,
    /// Generators added to `S'` because their image already lay in its span.
    pub augmented: Vec<String>,
    pub subspace: Vec<String>,
    pub d: usize,
    pub r_s: usize,
    pub r_e: usize,
    pub r_o: usize,
    pub r_s_bound: BigRational,
    pub r_s_bound_ok: bool,
    pub critical_sets: usize,
    pub sparse_identity_ok: bool,
    pub stripped_ok: bool,
    /// `|R''''| - |S'''|`.
    pub final_excess: i64,
    /// `|R_s| + d - |S \ S'|`.
    pub identity_value: i64,
    /// `c k^2 / n + d`.
    pub bound: BigRational,
    pub deficiency: Vec<(String, DeficiencyReport)>,
    pub final_presentation: Presentation,
}

impl LowerReport {
    pub fn ranks_ok(&self) -> bool {
        self.stages.iter().all(StageRecord::rank_ok)
    }

    pub fn identity_ok(&self) -> bool {
        self.final_excess == self.identity_value
    }

    pub fn bound_ok(&self) -> bool {
        BigRational::from_integer(BigInt::from(self.final_excess)) <= self.bound
    }

    pub fn deficiency_ok(&self) -> bool {
        self.deficiency.iter().all(|(_, d)| d.holds())
    }

    pub fn passed(&self) -> bool {
        self.ranks_ok()
            && self.identity_ok()
            && self.bound_ok()
            && self.sparse_identity_ok
            && self.stripped_ok
            && self.r_s_bound_ok
            && self.sg_bound_ok
            && self.sg_removal_ok
            && self.sg_check != Some(false)
            && self.deficiency_ok()
    }
}

impl fmt::Display for LowerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n = {}, k = |S| = {}, c = {}, lambda = ck/n = {}",
            self.n,
            self.k,
            ratio(&self.c),
            ratio(&self.lambda)
        )?;
        for s in &self.stages {
            writeln!(
                f,
                "stage {:<16} |S| = {:<5} |R| = {:<5} abelianization Z^{}{} (expected Z^{}) {}",
                s.name,
                s.generators,
                s.relations,
                s.invariants.free_rank,
                if s.invariants.torsion.is_empty() {
                    ""
                } else {
                    " + torsion"
                },
                s.expected_rank,
                yes(s.rank_ok())
            )?;
        }
        writeln!(f, "minimize steps: {}", self.minimize_trace.len())?;
        writeln!(f, "maximal sparse subset: {} relations", self.sparse_subset)?;
        writeln!(
            f,
            "pruning: removed {} edges (< lambda|V| {}), dim span V' = {} (<= 12|V|/lambda = {} {}), SG check {}",
            self.sg_removed_edges,
            yes(self.sg_removal_ok),
            self.sg_dim_span,
            ratio(&self.sg_bound),
            yes(self.sg_bound_ok),
            match self.sg_check {
                None => "skipped",
                Some(b) => yes(b),
            }
        )?;
        writeln!(
            f,
            "S' = {{{}}} (augmented by {:?}), d = {}",
            self.subspace.join(", "),
            self.augmented,
            self.d
        )?;
        writeln!(
            f,
            "|R_s| = {}, |R_e| = {}, |R_o| = {}; |R_s| <= ck^2/n = {} {}",
            self.r_s,
            self.r_e,
            self.r_o,
            ratio(&self.r_s_bound),
            yes(self.r_s_bound_ok)
        )?;
        writeln!(
            f,
            "critical sets: {}; excess identity after replace_sparse {}",
            self.critical_sets,
            yes(self.sparse_identity_ok)
        )?;
        writeln!(
            f,
            "R_o relations trivial after replace_subspace: {}",
            yes(self.stripped_ok)
        )?;
        writeln!(
            f,
            "|R''''| - |S'''| = {} = |R_s| + d - |S \\ S'| = {} {}",
            self.final_excess,
            self.identity_value,
            yes(self.identity_ok())
        )?;
        writeln!(
            f,
            "|R''''| - |S'''| <= ck^2/n + d = {} {}",
            ratio(&self.bound),
            yes(self.bound_ok())
        )?;
        for (name, d) in &self.deficiency {
            writeln!(
                f,
                "deficiency bounds at {name} (Z^{}): |S| >= n {}, |R| - |S| >= C(n,2) - n {}, |R| >= C(n,2) {}",
                d.n,
                yes(d.generators_at_least_n),
                yes(d.excess_at_least),
                yes(d.relations_at_least)
            )?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Images of the generators as a point configuration and the normal-form
/// triples of `rels` as hyperedges.
pub fn presentation_hypergraph(
    p: &Presentation,
    phi: &AbelianMap,
    rels: &[usize],
) -> Result<(PointConfig, Hypergraph3), PresentationError> {
    let v = PointConfig::from_integers(phi.rank, &phi.images).expect("images share the rank");
    let mut edges = Vec::with_capacity(rels.len());
    for &r in rels {
        let g: Vec<GenId> = p.normal_form(r)?.generators().into_iter().collect();
        if g.len() != 3 {
            return Err(PresentationError::DegenerateRelation { relation: r });
        }
        edges.push([g[0], g[1], g[2]]);
    }
    let h = Hypergraph3::new(p.generator_count(), edges).expect("distinct generators in a normal form");
    Ok((v, h))
}

/// Runs minimize, maximal sparse subset, pruning with `lambda = ck/n`,
/// augmentation of `S'`, the `R_s / R_e / R_o` split, replace_sparse,
/// replace_subspace and the final strip, checking the abelianization after
/// every stage.
pub fn run_lower(p: &Presentation, c: &BigRational) -> Result<LowerReport, PipelineError> {
    if *c <= BigRational::zero() {
        return Err(PipelineError::Degenerate("c must be positive".into()));
    }
    let phi0 = at("abelianize", abelian_images(p))?;
    let n = phi0.rank;
    if n == 0 {
        return Err(PipelineError::Degenerate(
            "the presented group is trivial (n = 0)".into(),
        ));
    }
    let mut stages = vec![StageRecord::new("input", p, n)];
    let mut deficiency = vec![("input".to_string(), deficiency_report(p, n))];

    let (p1, phi1, minimize_trace) = at("minimize", minimize(p))?;
    stages.push(StageRecord::new("minimize", &p1, n));
    deficiency.push(("minimize".into(), deficiency_report(&p1, n)));
    let k = p1.generator_count();
    let big = |x: usize| BigRational::from_integer(BigInt::from(x));
    let lambda = c * big(k) / big(n);

    let sparse = at("sparse subset", maximal_sparse_subset(&p1, &phi1))?;
    let (v, h) = at("sparse subset", presentation_hypergraph(&p1, &phi1, &sparse))?;
    let red: SgReduction = sg_reduce(&v, &h, &lambda).map_err(|source| PipelineError::Sg { stage: "prune", source })?;

    let mut s_prime: BTreeSet<GenId> = red.pruned.vertices.iter().copied().collect();
    let d = at("augment", subset_dimension(&phi1, &s_prime))?;
    let mut augmented = Vec::new();
    for g in 0..k {
        if s_prime.contains(&g) {
            continue;
        }
        let mut with = s_prime.clone();
        with.insert(g);
        if at("augment", subset_dimension(&phi1, &with))? == d {
            s_prime = with;
            augmented.push(p1.generators()[g].clone());
        }
    }

    let all: Vec<usize> = (0..p1.relation_count()).collect();
    let r_o = at("partition", relations_on(&p1, &all, &s_prime))?;
    let in_o: BTreeSet<usize> = r_o.iter().copied().collect();
    let in_sparse: BTreeSet<usize> = sparse.iter().copied().collect();
    let partition = SparsityPartition {
        sparse: sparse.iter().copied().filter(|r| !in_o.contains(r)).collect(),
        extra: all
            .iter()
            .copied()
            .filter(|r| !in_o.contains(r) && !in_sparse.contains(r))
            .collect(),
        other: r_o.clone(),
    };
    let r_s_bound = c * big(k) * big(k) / big(n);

    let sparse_out = at("replace_sparse", replace_sparse(&p1, &phi1, &partition))?;
    let p2 = &sparse_out.presentation;
    stages.push(StageRecord::new("replace_sparse", p2, n));
    deficiency.push(("replace_sparse".into(), deficiency_report(p2, n)));
    let excess = |q: &Presentation| q.relation_count() as i64 - q.generator_count() as i64;
    let sparse_identity_ok = excess(p2) == partition.sparse.len() as i64 + partition.other.len() as i64 - k as i64;

    let sub = at("replace_subspace", replace_subspace(p2, &sparse_out.phi, &s_prime))?;
    let p3 = &sub.presentation;
    stages.push(StageRecord::new("replace_subspace", p3, n - d));

    // relation indices below |R''| are unchanged by replace_subspace
    let from_o: BTreeSet<usize> = sparse_out
        .origins
        .iter()
        .enumerate()
        .filter(|(_, o)| o.is_some_and(|r| in_o.contains(&r)))
        .map(|(i, _)| i)
        .collect();
    let stripped_ok = from_o.iter().all(|&i| p3.relations()[i].is_empty());
    let kept: Vec<_> = p3
        .relations()
        .iter()
        .enumerate()
        .filter(|(i, _)| !from_o.contains(i))
        .map(|(_, w)| w.clone())
        .collect();
    let p4 = at("strip", Presentation::new(p3.generators().to_vec(), kept))?;
    stages.push(StageRecord::new("strip", &p4, n - d));
    deficiency.push(("strip".into(), deficiency_report(&p4, n - d)));

    let final_excess = excess(&p4);
    let identity_value = partition.sparse.len() as i64 + d as i64 - (k - s_prime.len()) as i64;
    let bound = &r_s_bound + big(d);
    Ok(LowerReport {
        n,
        k,
        c: c.clone(),
        lambda,
        stages,
        minimize_trace,
        sparse_subset: sparse.len(),
        sg_removed_edges: red.removed_edges,
        sg_removal_ok: red.removal_bound_holds,
        sg_dim_span: red.dim_span,
        sg_bound: red.bound.clone(),
        sg_bound_ok: red.bound_holds,
        sg_check: red.sg_check.as_ref().map(|r| r.holds()),
        augmented,
        subspace: s_prime.iter().map(|&g| p1.generators()[g].clone()).collect(),
        d,
        r_s: partition.sparse.len(),
        r_e: partition.extra.len(),
        r_o: partition.other.len(),
        r_s_bound_ok: big(partition.sparse.len()) <= r_s_bound,
        r_s_bound,
        critical_sets: sparse_out.collection.len(),
        sparse_identity_ok,
        stripped_ok,
        final_excess,
        identity_value,
        bound,
        deficiency,
        final_presentation: p4,
    })
}

/// Passes accepted by [`reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pass {
    Minimize,
    Sparse,
}

impl std::str::FromStr for Pass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimize" => Ok(Pass::Minimize),
            "sparse" => Ok(Pass::Sparse),
            other => Err(format!("unknown pass `{other}` (expected minimize or sparse)")),
        }
    }
}

/// Applies the passes in order. `sparse` splits the relations into a maximal
/// sparse subset and the rest and runs replace_sparse; it needs a minimized
/// presentation.
pub fn reduce(p: &Presentation, passes: &[Pass]) -> Result<(Presentation, Vec<String>), PipelineError> {
    let mut cur = p.clone();
    let mut phi = at("abelianize", abelian_images(p))?;
    let mut log = Vec::new();
    for pass in passes {
        match pass {
            Pass::Minimize => {
                let (q, m, trace) = at("minimize", minimize(&cur))?;
                log.extend(trace.iter().map(ToString::to_string));
                log.push(format!(
                    "minimize: |S| {} -> {}, |R| {} -> {}",
                    cur.generator_count(),
                    q.generator_count(),
                    cur.relation_count(),
                    q.relation_count()
                ));
                cur = q;
                phi = m;
            }
            Pass::Sparse => {
                let sparse = at("sparse", maximal_sparse_subset(&cur, &phi))?;
                let chosen: BTreeSet<usize> = sparse.iter().copied().collect();
                let partition = SparsityPartition {
                    extra: (0..cur.relation_count()).filter(|r| !chosen.contains(r)).collect(),
                    sparse,
                    other: Vec::new(),
                };
                let out = at("sparse", replace_sparse(&cur, &phi, &partition))?;
                log.extend(out.trace.iter().map(ToString::to_string));
                log.push(format!(
                    "sparse: {} critical set(s), |S| {} -> {}, |R| {} -> {}",
                    out.collection.len(),
                    cur.generator_count(),
                    out.presentation.generator_count(),
                    cur.relation_count(),
                    out.presentation.relation_count()
                ));
                cur = out.presentation;
                phi = out.phi;
            }
        }
    }
    Ok((cur, log))
}

/// Smallest `k` with `C(k,2) >= n`, `C(k,3) >= C(n,2)` and `C(k,2) >= C(n,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub n_choose_2: BigInt,
    pub pairs_cover_n: u64,
    pub triples_cover_pairs: u64,
    pub pairs_cover_pairs: u64,
}

fn smallest_k(target: &BigInt, r: u64) -> u64 {
    (1..)
        .find(|&k| binomial(k, r) >= *target)
        .expect("binomials grow without bound")
}

pub fn report_bounds(n: u64) -> BoundsReport {
    let c2 = binomial(n, 2);
    BoundsReport {
        n,
        pairs_cover_n: smallest_k(&BigInt::from(n), 2),
        triples_cover_pairs: smallest_k(&c2, 3),
        pairs_cover_pairs: smallest_k(&c2, 2),
        n_choose_2: c2,
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |f: &mut fmt::Formatter<'_>, what: &str, k: u64, r: u64, target: &BigInt| {
            writeln!(
                f,
                "{what}: smallest k = {k} (C({k},{r}) = {} >= {target})",
                binomial(k, r)
            )
        };
        writeln!(f, "n = {}, C(n,2) = {}", self.n, self.n_choose_2)?;
        row(f, "C(k,2) >= n", self.pairs_cover_n, 2, &BigInt::from(self.n))?;
        row(f, "C(k,3) >= C(n,2)", self.triples_cover_pairs, 3, &self.n_choose_2)?;
        row(f, "C(k,2) >= C(n,2)", self.pairs_cover_pairs, 2, &self.n_choose_2)
    }
}

/// Parses `P/Q` or an integer into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let r: BigRational = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a rational number"))?;
    if r.denom().is_zero() {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{standard_zn, StandardStyle};

    #[test]
    fn upper_small_sizes() {
        let (_, r) = run_upper(1, 0).unwrap();
        assert_eq!(r.x_f_vector[0], 5);
        assert!(r.passed(), "{r}");
        let (_, r) = run_upper(2, 0).unwrap();
        assert_eq!(r.x_f_vector[0], 7);
        assert!(r.passed(), "{r}");
        assert!(matches!(
            run_upper(5, 0),
            Err(PipelineError::Construction(ConstructionError::UnsupportedSize(5)))
        ));
    }

    #[test]
    fn census_small() {
        assert_eq!(w_census(1).unwrap(), [3, 3, 0, 0]);
        assert_eq!(w_census(3).unwrap(), [13, 54, 42, 1]);
    }

    #[test]
    fn lower_on_intro() {
        for n in 2..=4 {
            let p = standard_zn(n, StandardStyle::Intro3);
            let r = run_lower(&p, &BigRational::from_integer(24.into())).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(r.k, n + n * (n - 1) / 2);
        }
        // a small c keeps part of the hypergraph and exercises replace_subspace
        let p = standard_zn(4, StandardStyle::Intro3);
        let r = run_lower(&p, &parse_ratio("1/10").unwrap()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.d > 0);
    }

    #[test]
    fn lower_degenerate_inputs() {
        let one = Presentation::from_named(&["g"], &[]).unwrap();
        let r = run_lower(&one, &BigRational::from_integer(24.into())).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.final_presentation.generator_count(), 1);
        let torsion = Presentation::from_named(&["g"], &[&[("g", 2)]]).unwrap();
        assert!(matches!(
            run_lower(&torsion, &parse_ratio("1").unwrap()),
            Err(PipelineError::Presentation {
                stage: "abelianize",
                ..
            })
        ));
    }

    #[test]
    fn bounds() {
        let r = report_bounds(10);
        assert_eq!(
            (r.pairs_cover_n, r.triples_cover_pairs, r.pairs_cover_pairs),
            (5, 8, 10)
        );
        let r = report_bounds(1);
        assert_eq!((r.pairs_cover_n, r.triples_cover_pairs, r.pairs_cover_pairs), (2, 1, 1));
        assert_eq!(report_bounds(100).pairs_cover_pairs, 100);
    }

    #[test]
    fn reduce_passes() {
        let p = standard_zn(3, StandardStyle::Intro3);
        let (q, log) = reduce(&p, &[Pass::Minimize, Pass::Sparse]).unwrap();
        assert!(q.abelian_invariants().is_free_of_rank(3));
        assert!(!log.is_empty());
        assert_eq!("sparse".parse::<Pass>(), Ok(Pass::Sparse));
        assert!("nope".parse::<Pass>().is_err());
    }
}
