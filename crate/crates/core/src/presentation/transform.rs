//! Tietze rewrites that keep track of the abelianization map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sparsity::critical_collection;
use super::{abelian_images, normalize, AbelianMap, GenId, Presentation, PresentationError, Word};
use crate::linalg::{direction_key, smith_normal_form, solve_integer, unimodular_inverse, IntegerMatrix};

fn to_i64(x: &BigInt) -> Result<i64, PresentationError> {
    x.to_i64().ok_or(PresentationError::ExponentOverflow)
}

/// Drops generator `g`, which must map to zero, and deletes its terms from
/// every relation. Relations that become empty are kept.
pub fn replace1(p: &Presentation, phi: &AbelianMap, g: GenId) -> Result<(Presentation, AbelianMap), PresentationError> {
    if g >= p.generator_count() {
        return Err(PresentationError::UnknownGeneratorId(g));
    }
    if !phi.is_zero(g) {
        return Err(PresentationError::NonzeroImage(p.generators()[g].clone()));
    }
    let mut out = p.clone();
    let (gens, rels) = out.parts_mut();
    gens.remove(g);
    for r in rels.iter_mut() {
        *r = r.map_generators(|h| match h.cmp(&g) {
            std::cmp::Ordering::Less => Some(h),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(h - 1),
        });
    }
    let mut images = phi.images.clone();
    images.remove(g);
    Ok((out, AbelianMap { rank: phi.rank, images }))
}

/// Replaces `g` by `i^b` and `h` by `i^-a` for a fresh generator `i`, given
/// `a phi(g) + b phi(h) = 0` with `gcd(a, b) = 1`. The fresh generator is
/// appended last; its id is returned.
pub fn replace2(
    p: &Presentation,
    phi: &AbelianMap,
    g: GenId,
    h: GenId,
    a: i64,
    b: i64,
) -> Result<(Presentation, AbelianMap, GenId), PresentationError> {
    let n = p.generator_count();
    for x in [g, h] {
        if x >= n {
            return Err(PresentationError::UnknownGeneratorId(x));
        }
    }
    let fail = |m: &str| Err(PresentationError::Replace2(m.to_string()));
    if g == h {
        return fail("g and h coincide");
    }
    if a == 0 || b == 0 {
        return fail("zero exponent");
    }
    let e = BigInt::from(a).extended_gcd(&BigInt::from(b));
    if !e.gcd.is_one() {
        return fail("exponents are not coprime");
    }
    let (ba, bb) = (BigInt::from(a), BigInt::from(b));
    let combo: Vec<BigInt> = phi
        .image(g)
        .iter()
        .zip(phi.image(h))
        .map(|(x, y)| &ba * x + &bb * y)
        .collect();
    if combo.iter().any(|x| !x.is_zero()) {
        return fail("a phi(g) + b phi(h) is not zero");
    }
    let neg_a = a.checked_neg().ok_or(PresentationError::ExponentOverflow)?;
    // a c + b d = 1
    let (c, d) = (e.x, e.y);
    let image_i: Vec<BigInt> = phi
        .image(g)
        .iter()
        .zip(phi.image(h))
        .map(|(x, y)| &d * x - &c * y)
        .collect();

    let mut out = p.clone();
    let name = out.fresh_name();
    let i = out.push_generator(name);
    let (_, rels) = out.parts_mut();
    for r in rels.iter_mut() {
        *r = r.substitute(|x| {
            if x == g {
                Some((i, b))
            } else if x == h {
                Some((i, neg_a))
            } else {
                None
            }
        })?;
    }
    let mut images = phi.images.clone();
    images.push(image_i);
    let mut phi2 = AbelianMap { rank: phi.rank, images };
    // g and h no longer occur, so removing them is a plain reindexing
    for x in [g.max(h), g.min(h)] {
        phi2.images[x] = vec![BigInt::zero(); phi.rank];
        let (q, m) = replace1(&out, &phi2, x)?;
        out = q;
        phi2 = m;
    }
    let id = out.generator_count() - 1;
    Ok((out, phi2, id))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimizeStep {
    StripEmpty {
        removed: usize,
    },
    Replace1 {
        generator: String,
    },
    Replace2 {
        g: String,
        h: String,
        a: i64,
        b: i64,
        fresh: String,
    },
}

impl fmt::Display for MinimizeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimizeStep::StripEmpty { removed } => write!(f, "strip {removed} empty relation(s)"),
            MinimizeStep::Replace1 { generator } => write!(f, "replace1 {generator}"),
            MinimizeStep::Replace2 { g, h, a, b, fresh } => {
                write!(f, "replace2 {g},{h} (a={a}, b={b}) -> {fresh}")
            }
        }
    }
}

/// Rewrites relations to normal form and strips empty ones.
fn normalize_all(p: &Presentation) -> Result<(Presentation, usize), PresentationError> {
    let mut out = p.clone();
    let (_, rels) = out.parts_mut();
    let mut kept = Vec::with_capacity(rels.len());
    for (i, r) in rels.iter().enumerate() {
        let nf = normalize(r).map_err(|e| PresentationError::Relation {
            relation: i,
            source: Box::new(e),
        })?;
        if !nf.is_empty() {
            kept.push(nf.into_word());
        }
    }
    let removed = rels.len() - kept.len();
    *rels = kept;
    Ok((out, removed))
}

/// The collinear pair `g < h` of nonzero images with the smallest `h`, and coprime `(a, b)` with
/// `a phi(g) + b phi(h) = 0`.
fn collinear_pair(phi: &AbelianMap) -> Result<Option<(GenId, GenId, i64, i64)>, PresentationError> {
    let mut seen: BTreeMap<Vec<BigInt>, GenId> = BTreeMap::new();
    let mut pair = None;
    for (h, v) in phi.images.iter().enumerate() {
        let Some(key) = direction_key(v) else { continue };
        if let Some(&g) = seen.get(&key) {
            pair = Some((g, h));
            break;
        }
        seen.insert(key, h);
    }
    let Some((g, h)) = pair else { return Ok(None) };
    let (u, v) = (phi.image(g), phi.image(h));
    let k = u.iter().position(|x| !x.is_zero()).expect("nonzero image");
    let (pg, qh) = (&u[k], &v[k]);
    let gcd = pg.gcd(qh);
    Ok(Some((g, h, to_i64(&(qh / &gcd))?, to_i64(&(-(pg / &gcd)))?)))
}

/// Applies replace1 to zero generators and replace2 to collinear pairs until
/// neither applies, normalizing relations and stripping empty ones throughout.
/// At the fixpoint every relation is a 3-term word of dimension 2 unless a
/// longer relation blocks normalization, which is reported as an error.
pub fn minimize(p: &Presentation) -> Result<(Presentation, AbelianMap, Vec<MinimizeStep>), PresentationError> {
    let mut phi = abelian_images(p)?;
    let mut cur = p.clone();
    let mut trace = Vec::new();
    loop {
        let (q, removed) = normalize_all(&cur)?;
        cur = q;
        if removed > 0 {
            trace.push(MinimizeStep::StripEmpty { removed });
        }
        if let Some(g) = (0..cur.generator_count()).find(|&g| phi.is_zero(g)) {
            trace.push(MinimizeStep::Replace1 {
                generator: cur.generators()[g].clone(),
            });
            (cur, phi) = replace1(&cur, &phi, g)?;
            continue;
        }
        if let Some((g, h, a, b)) = collinear_pair(&phi)? {
            let (gn, hn) = (cur.generators()[g].clone(), cur.generators()[h].clone());
            let (q, m, i) = replace2(&cur, &phi, g, h, a, b)?;
            trace.push(MinimizeStep::Replace2 {
                g: gn,
                h: hn,
                a,
                b,
                fresh: q.generators()[i].clone(),
            });
            cur = q;
            phi = m;
            continue;
        }
        return Ok((cur, phi, trace));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    AddGenerator,
    AddRelation,
    RemoveRelation,
}

/// One Tietze move in a rewrite trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeMove {
    pub kind: MoveKind,
    pub detail: String,
}

impl fmt::Display for TietzeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MoveKind::AddGenerator => "+gen",
            MoveKind::AddRelation => "+rel",
            MoveKind::RemoveRelation => "-rel",
        };
        write!(f, "{k} {}", self.detail)
    }
}

/// `R = R_s ⊔ R_e ⊔ R_o` by relation index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityPartition {
    pub sparse: Vec<usize>,
    pub extra: Vec<usize>,
    pub other: Vec<usize>,
}

impl SparsityPartition {
    fn check(&self, relation_count: usize) -> Result<(), PresentationError> {
        let mut seen = vec![false; relation_count];
        for &r in self.sparse.iter().chain(&self.extra).chain(&self.other) {
            match seen.get_mut(r) {
                None => return Err(PresentationError::UnknownRelation(r)),
                Some(true) => {
                    return Err(PresentationError::InvalidPartition(format!(
                        "relation {r} listed twice"
                    )))
                }
                Some(s) => *s = true,
            }
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            return Err(PresentationError::InvalidPartition(format!("relation {r} not listed")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SparseOutcome {
    pub presentation: Presentation,
    pub phi: AbelianMap,
    pub collection: Vec<BTreeSet<GenId>>,
    /// For each new relation, its index in the input, or `None` if added.
    pub origins: Vec<Option<usize>>,
    pub trace: Vec<TietzeMove>,
}

/// For each maximal critical set `T` of `R_s`: adds generators `h1, h2, h*`
/// mapping to a basis `x1, x2` of the lattice spanned by `phi(T)` and to
/// `x1 + x2`, adds `g^-1 h1^b1 h2^b2` for each `g` in `T` together with
/// `h*^-1 h1 h2` and `h*^-1 h2 h1`, and removes every relation of `R_s ∪ R_e`
/// whose normal form uses only generators of `T`. `R_o` is kept whole.
pub fn replace_sparse(
    p: &Presentation,
    phi: &AbelianMap,
    partition: &SparsityPartition,
) -> Result<SparseOutcome, PresentationError> {
    partition.check(p.relation_count())?;
    let collection = critical_collection(p, phi, &partition.sparse)?;
    let mut home: BTreeMap<usize, usize> = BTreeMap::new();
    for (&r, is_extra) in partition
        .sparse
        .iter()
        .map(|r| (r, false))
        .chain(partition.extra.iter().map(|r| (r, true)))
    {
        let nf = p.normal_form(r)?;
        let gens = nf.generators();
        let member = (!nf.is_empty())
            .then(|| collection.iter().position(|t| gens.is_subset(t)))
            .flatten();
        match member {
            Some(m) => {
                home.insert(r, m);
            }
            None if is_extra => return Err(PresentationError::Uncovered { relation: r }),
            None => {}
        }
    }

    let mut out = p.clone();
    let mut images = phi.images.clone();
    let mut trace = Vec::new();
    let mut added: Vec<Word> = Vec::new();
    for (ti, t) in collection.iter().enumerate() {
        let members: Vec<GenId> = t.iter().copied().collect();
        let cols: Vec<Vec<BigInt>> = members.iter().map(|&g| phi.image(g).to_vec()).collect();
        let a = IntegerMatrix::from_columns(phi.rank, &cols).expect("images share the rank");
        let snf = smith_normal_form(&a);
        if snf.rank != 2 {
            return Err(PresentationError::MapMismatch(format!(
                "critical set spans dimension {}",
                snf.rank
            )));
        }
        let r_inv = unimodular_inverse(&snf.right).expect("right transform is unimodular");
        let ar = a.mul(&snf.right).expect("shapes agree");
        let mut h = [0; 2];
        for j in 0..2 {
            let name = out.fresh_name();
            h[j] = out.push_generator(name);
            images.push(ar.column(j));
            let mut terms = vec![(h[j], -1)];
            for (i, &g) in members.iter().enumerate() {
                terms.push((g, to_i64(snf.right.get(i, j))?));
            }
            let transient = Word::new(terms);
            trace.push(TietzeMove {
                kind: MoveKind::AddGenerator,
                detail: out.generators()[h[j]].clone(),
            });
            trace.push(TietzeMove {
                kind: MoveKind::AddRelation,
                detail: out.format_word(&transient),
            });
        }
        for (i, &g) in members.iter().enumerate() {
            let w = Word::new([
                (g, -1),
                (h[0], to_i64(r_inv.get(0, i))?),
                (h[1], to_i64(r_inv.get(1, i))?),
            ]);
            trace.push(TietzeMove {
                kind: MoveKind::AddRelation,
                detail: out.format_word(&w),
            });
            added.push(w);
        }
        let name = out.fresh_name();
        let star = out.push_generator(name);
        images.push(images[h[0]].iter().zip(&images[h[1]]).map(|(x, y)| x + y).collect());
        trace.push(TietzeMove {
            kind: MoveKind::AddGenerator,
            detail: out.generators()[star].clone(),
        });
        for w in [
            Word::new([(star, -1), (h[0], 1), (h[1], 1)]),
            Word::new([(star, -1), (h[1], 1), (h[0], 1)]),
        ] {
            trace.push(TietzeMove {
                kind: MoveKind::AddRelation,
                detail: out.format_word(&w),
            });
            added.push(w);
        }
        for (&r, _) in home.iter().filter(|&(_, &m)| m == ti) {
            trace.push(TietzeMove {
                kind: MoveKind::RemoveRelation,
                detail: format!("#{r} {}", p.format_word(&p.relations()[r])),
            });
        }
        for j in 0..2 {
            trace.push(TietzeMove {
                kind: MoveKind::RemoveRelation,
                detail: format!("transient relation of {}", out.generators()[h[j]]),
            });
        }
    }
    let mut origins = Vec::new();
    let mut kept = Vec::new();
    for (r, w) in p.relations().iter().enumerate() {
        if !home.contains_key(&r) {
            kept.push(w.clone());
            origins.push(Some(r));
        }
    }
    origins.extend(added.iter().map(|_| None));
    kept.extend(added);
    *out.parts_mut().1 = kept;
    Ok(SparseOutcome {
        presentation: out,
        phi: AbelianMap { rank: phi.rank, images },
        collection,
        origins,
        trace,
    })
}

#[derive(Debug, Clone)]
pub struct SubspaceOutcome {
    pub presentation: Presentation,
    pub phi: AbelianMap,
    pub dimension: usize,
    /// Indices of the relations added for the lattice basis.
    pub added: Vec<usize>,
}

/// Adds `d = dim span phi(S')` relations killing a basis of
/// `span phi(S') ∩ Z^n`, projects `phi` onto the complementary coordinates
/// and removes every generator of `S'`. The result presents `Z^(n-d)`.
pub fn replace_subspace(
    p: &Presentation,
    phi: &AbelianMap,
    subset: &BTreeSet<GenId>,
) -> Result<SubspaceOutcome, PresentationError> {
    if let Some(&g) = subset.iter().find(|&&g| g >= p.generator_count()) {
        return Err(PresentationError::UnknownGeneratorId(g));
    }
    let n = phi.rank;
    let members: Vec<GenId> = subset.iter().copied().collect();
    let cols: Vec<Vec<BigInt>> = members.iter().map(|&g| phi.image(g).to_vec()).collect();
    let a = IntegerMatrix::from_columns(n, &cols).map_err(|e| PresentationError::MapMismatch(e.to_string()))?;
    let snf = smith_normal_form(&a);
    let d = snf.rank;
    let basis = unimodular_inverse(&snf.left).expect("left transform is unimodular");
    let saturated = snf.diagonal[..d].iter().all(One::is_one);
    let (search, search_matrix) = if saturated {
        (members.clone(), a.clone())
    } else {
        let all: Vec<GenId> = (0..p.generator_count()).collect();
        let m =
            IntegerMatrix::from_columns(n, &phi.images).map_err(|e| PresentationError::MapMismatch(e.to_string()))?;
        (all, m)
    };

    let mut out = p.clone();
    let mut added = Vec::with_capacity(d);
    for i in 0..d {
        let x = basis.column(i);
        let y = solve_integer(&search_matrix, &x)
            .ok_or_else(|| PresentationError::MapMismatch("images do not generate Z^n".into()))?;
        let mut terms = Vec::new();
        for (k, c) in y.iter().enumerate() {
            if !c.is_zero() {
                terms.push((search[k], to_i64(c)?));
            }
        }
        added.push(out.push_relation(Word::new(terms)));
    }
    let projected: Vec<Vec<BigInt>> = phi.images.iter().map(|v| snf.left.mul_vec(v)[d..].to_vec()).collect();
    let mut psi = AbelianMap {
        rank: n - d,
        images: projected,
    };
    for &g in members.iter().rev() {
        (out, psi) = replace1(&out, &psi, g)?;
    }
    Ok(SubspaceOutcome {
        presentation: out,
        phi: psi,
        dimension: d,
        added,
    })
}
