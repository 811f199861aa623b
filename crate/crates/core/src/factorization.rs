//! Perfect matchings, 1-factorizations of `K_2n` and orthogonal pairs.
//!
//! Points are labelled `1..=2n`. The first member of every pair produced here is
//! the round-robin (circle method) factorization; the second comes from a
//! strong starter in `Z_{2n-1}` when one exists, and from an exact-cover search
//! otherwise.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Point = usize;
pub type Edge = (Point, Point);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("size must be a positive even integer, got {0}")]
    BadSize(usize),
    #[error("no orthogonal pair of 1-factorizations exists for size {0}")]
    UnsupportedSize(usize),
    #[error("invalid factorization: {0}")]
    Invalid(String),
    #[error("factorizations have sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("search exhausted for size {0}")]
    SearchExhausted(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn edge(a: Point, b: Point) -> Edge {
    (a.min(b), a.max(b))
}

/// A perfect matching, edges stored as sorted `(a, b)` pairs with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&edge(e.0, e.1)).is_ok()
    }
}

/// Partition of the edges of `K_size` into `size - 1` perfect matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFactorization {
    size: usize,
    matchings: Vec<Matching>,
}

impl OneFactorization {
    pub fn new(size: usize, matchings: Vec<Matching>) -> Result<Self, FactorizationError> {
        let f = OneFactorization { size, matchings };
        f.validate()?;
        Ok(f)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    /// Checks the partition invariant edge by edge.
    pub fn validate(&self) -> Result<(), FactorizationError> {
        let n = self.size;
        if n == 0 || n % 2 == 1 {
            return Err(FactorizationError::BadSize(n));
        }
        if self.matchings.len() != n - 1 {
            return Err(FactorizationError::Invalid(format!(
                "{} matchings, expected {}",
                self.matchings.len(),
                n - 1
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, m) in self.matchings.iter().enumerate() {
            let mut covered = vec![false; n + 1];
            for &(a, b) in &m.edges {
                if a == 0 || b > n || a >= b {
                    return Err(FactorizationError::Invalid(format!("matching {i}: bad edge {a}-{b}")));
                }
                for p in [a, b] {
                    if std::mem::replace(&mut covered[p], true) {
                        return Err(FactorizationError::Invalid(format!(
                            "matching {i}: point {p} covered twice"
                        )));
                    }
                }
                if !seen.insert((a, b)) {
                    return Err(FactorizationError::Invalid(format!(
                        "edge {a}-{b} appears in two matchings"
                    )));
                }
            }
            if m.edges.len() != n / 2 {
                return Err(FactorizationError::Invalid(format!("matching {i} is not perfect")));
            }
        }
        debug_assert_eq!(seen.len(), n * (n - 1) / 2);
        Ok(())
    }

    /// Matching index of every edge.
    pub fn classes(&self) -> HashMap<Edge, usize> {
        self.matchings
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.edges.iter().map(move |&e| (e, i)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.matchings {
            let parts: Vec<String> = m.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    fn from_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Self, FactorizationError> {
        let mut matchings = Vec::new();
        let mut max_point = 0;
        for (n, line) in lines {
            let mut edges = Vec::new();
            for tok in line.split_whitespace() {
                let parsed = tok
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
                let (a, b) = parsed.ok_or_else(|| FactorizationError::Parse {
                    line: n,
                    message: format!("bad edge `{tok}`"),
                })?;
                max_point = max_point.max(a).max(b);
                edges.push((a, b));
            }
            matchings.push(Matching::new(edges));
        }
        OneFactorization::new(max_point, matchings)
    }

    pub fn from_text(text: &str) -> Result<Self, FactorizationError> {
        Self::from_lines(numbered_lines(text))
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalPair {
    pub first: OneFactorization,
    pub second: OneFactorization,
}

impl OrthogonalPair {
    pub fn size(&self) -> usize {
        self.first.size
    }

    pub fn to_text(&self) -> String {
        format!("{}%\n{}", self.first.to_text(), self.second.to_text())
    }

    pub fn from_text(text: &str) -> Result<Self, FactorizationError> {
        let lines: Vec<(usize, &str)> = numbered_lines(text).collect();
        let split = lines
            .iter()
            .position(|(_, l)| *l == "%")
            .ok_or(FactorizationError::Parse {
                line: lines.len(),
                message: "missing `%` separator".into(),
            })?;
        let first = OneFactorization::from_lines(lines[..split].iter().copied())?;
        let second = OneFactorization::from_lines(lines[split + 1..].iter().copied())?;
        if first.size != second.size {
            return Err(FactorizationError::SizeMismatch(first.size, second.size));
        }
        Ok(OrthogonalPair { first, second })
    }
}

/// Two distinct edges sharing a matching in both factorizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityWitness {
    pub edges: (Edge, Edge),
    pub first_matching: usize,
    pub second_matching: usize,
}

impl fmt::Display for OrthogonalityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((a, b), (c, d)) = self.edges;
        write!(
            f,
            "edges {a}-{b} and {c}-{d} share matching {} of the first and matching {} of the second",
            self.first_matching, self.second_matching
        )
    }
}

/// `Ok(None)` when the pair is orthogonal, otherwise a witness.
pub fn verify_orthogonal_pair(pair: &OrthogonalPair) -> Result<Option<OrthogonalityWitness>, FactorizationError> {
    if pair.first.size != pair.second.size {
        return Err(FactorizationError::SizeMismatch(pair.first.size, pair.second.size));
    }
    pair.first.validate()?;
    pair.second.validate()?;
    let second = pair.second.classes();
    let mut cells: HashMap<(usize, usize), Edge> = HashMap::new();
    for (i, m) in pair.first.matchings.iter().enumerate() {
        for &e in &m.edges {
            let j = second[&e];
            if let Some(&prev) = cells.get(&(i, j)) {
                return Ok(Some(OrthogonalityWitness {
                    edges: (prev, e),
                    first_matching: i,
                    second_matching: j,
                }));
            }
            cells.insert((i, j), e);
        }
    }
    Ok(None)
}

fn check_size(size: usize) -> Result<(), FactorizationError> {
    if size == 0 || size % 2 == 1 {
        Err(FactorizationError::BadSize(size))
    } else {
        Ok(())
    }
}

/// Circle-method factorization: with `m = size - 1`, matching `r` pairs `r`
/// with the point at infinity and `r + i` with `r - i` modulo `m`. Residue `j`
/// is labelled `j + 1` and infinity is labelled `size`.
pub fn round_robin(size: usize) -> Result<OneFactorization, FactorizationError> {
    check_size(size)?;
    let m = size - 1;
    let matchings = (0..m)
        .map(|r| {
            let mut edges = vec![(r + 1, size)];
            for i in 1..=(m - 1) / 2 {
                edges.push(((r + i) % m + 1, (r + m - i) % m + 1));
            }
            Matching::new(edges)
        })
        .collect();
    OneFactorization::new(size, matchings)
}

/// A strong starter in `Z_m`: pairs partitioning the nonzero residues whose
/// differences cover every nonzero residue once (up to sign) and whose sums are
/// distinct and nonzero.
pub fn strong_starter(m: usize, seed: u64) -> Option<Vec<(usize, usize)>> {
    if m.is_multiple_of(2) || m < 3 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partners: Vec<usize> = (1..m).collect();
    partners.shuffle(&mut rng);
    let mut used = vec![false; m];
    let mut diff_used = vec![false; m / 2 + 1];
    let mut sum_used = vec![false; m];
    sum_used[0] = true;
    let mut pairs = Vec::new();
    fn go(
        m: usize,
        partners: &[usize],
        used: &mut [bool],
        diff_used: &mut [bool],
        sum_used: &mut [bool],
        pairs: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some(x) = (1..m).find(|&x| !used[x]) else {
            return true;
        };
        used[x] = true;
        for &y in partners {
            if used[y] {
                continue;
            }
            let d = (x + m - y) % m;
            let d = d.min(m - d);
            let s = (x + y) % m;
            if diff_used[d] || sum_used[s] {
                continue;
            }
            used[y] = true;
            diff_used[d] = true;
            sum_used[s] = true;
            pairs.push((x, y));
            if go(m, partners, used, diff_used, sum_used, pairs) {
                return true;
            }
            pairs.pop();
            used[y] = false;
            diff_used[d] = false;
            sum_used[s] = false;
        }
        used[x] = false;
        false
    }
    go(m, &partners, &mut used, &mut diff_used, &mut sum_used, &mut pairs).then_some(pairs)
}

/// Factorization generated by translating a starter through `Z_m`, labelled as
/// in [`round_robin`].
fn starter_factorization(size: usize, starter: &[(usize, usize)]) -> Result<OneFactorization, FactorizationError> {
    let m = size - 1;
    let matchings = (0..m)
        .map(|t| {
            let mut edges = vec![(t + 1, size)];
            edges.extend(starter.iter().map(|&(x, y)| ((x + t) % m + 1, (y + t) % m + 1)));
            Matching::new(edges)
        })
        .collect();
    OneFactorization::new(size, matchings)
}

/// Exact-cover search for a factorization orthogonal to `first`.
///
/// Cells are (point, matching) pairs; each must be covered by exactly one edge,
/// and the edges of one matching must come from distinct matchings of `first`.
/// The cell with the fewest candidates is branched on first. The edge from the
/// last point to point `j + 1` is pinned to matching `j`, which only fixes the
/// order of the matchings.
fn search_orthogonal(first: &OneFactorization, seed: u64) -> Option<OneFactorization> {
    let n = first.size;
    let classes = n - 1;
    let class1 = first.classes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Point> = (1..=n).collect();
    order.shuffle(&mut rng);
    let rank: Vec<usize> = {
        let mut r = vec![0; n + 1];
        for (i, &p) in order.iter().enumerate() {
            r[p] = i;
        }
        r
    };

    struct State {
        assigned: HashMap<Edge, usize>,
        covered: Vec<Vec<bool>>, // [point][class]
        used1: Vec<Vec<bool>>,   // [class2][class1]
    }
    let mut st = State {
        assigned: HashMap::new(),
        covered: vec![vec![false; classes]; n + 1],
        used1: vec![vec![false; classes]; classes],
    };
    let place = |st: &mut State, e: Edge, j: usize, on: bool| {
        if on {
            st.assigned.insert(e, j);
        } else {
            st.assigned.remove(&e);
        }
        st.covered[e.0][j] = on;
        st.covered[e.1][j] = on;
        st.used1[j][class1[&e]] = on;
    };
    for j in 0..classes {
        place(&mut st, edge(j + 1, n), j, true);
    }

    fn candidates(
        st: &State,
        class1: &HashMap<Edge, usize>,
        n: usize,
        p: Point,
        j: usize,
        rank: &[usize],
    ) -> Vec<Point> {
        let mut out: Vec<Point> = (1..=n)
            .filter(|&q| {
                q != p && !st.covered[q][j] && {
                    let e = edge(p, q);
                    !st.assigned.contains_key(&e) && !st.used1[j][class1[&e]]
                }
            })
            .collect();
        out.sort_by_key(|&q| rank[q]);
        out
    }

    fn go(
        st: &mut State,
        class1: &HashMap<Edge, usize>,
        n: usize,
        classes: usize,
        rank: &[usize],
        place: &dyn Fn(&mut State, Edge, usize, bool),
    ) -> bool {
        let mut best: Option<(Point, usize, Vec<Point>)> = None;
        for p in 1..=n {
            for j in 0..classes {
                if st.covered[p][j] {
                    continue;
                }
                let c = candidates(st, class1, n, p, j, rank);
                if best.as_ref().is_none_or(|b| c.len() < b.2.len()) {
                    let empty = c.is_empty();
                    best = Some((p, j, c));
                    if empty {
                        return false;
                    }
                }
            }
        }
        let Some((p, j, cands)) = best else {
            return true;
        };
        for q in cands {
            let e = edge(p, q);
            place(st, e, j, true);
            if go(st, class1, n, classes, rank, place) {
                return true;
            }
            place(st, e, j, false);
        }
        false
    }

    if !go(&mut st, &class1, n, classes, &rank, &place) {
        return None;
    }
    let mut matchings = vec![Vec::new(); classes];
    for (&e, &j) in &st.assigned {
        matchings[j].push(e);
    }
    OneFactorization::new(n, matchings.into_iter().map(Matching::new).collect()).ok()
}

/// An orthogonal pair of 1-factorizations of `K_size`, deterministic in `seed`.
///
/// Sizes 4 and 6 admit no such pair. For size 2 the unique factorization is
/// paired with itself; orthogonality is vacuous with a single edge.
pub fn orthogonal_pair(size: usize, seed: u64) -> Result<OrthogonalPair, FactorizationError> {
    check_size(size)?;
    if size == 4 || size == 6 {
        return Err(FactorizationError::UnsupportedSize(size));
    }
    let first = round_robin(size)?;
    if size == 2 {
        return Ok(OrthogonalPair {
            second: first.clone(),
            first,
        });
    }
    let second = match strong_starter(size - 1, seed) {
        Some(starter) => starter_factorization(size, &starter)?,
        None => search_orthogonal(&first, seed).ok_or(FactorizationError::SearchExhausted(size))?,
    };
    let pair = OrthogonalPair { first, second };
    if let Some(w) = verify_orthogonal_pair(&pair)? {
        return Err(FactorizationError::Invalid(w.to_string()));
    }
    Ok(pair)
}
