//! Words in a free group and their 3-term normal forms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PresentationError;

pub type GenId = usize;

/// A product `g_1^{a_1} ... g_k^{a_k}` with nonzero exponents. Adjacent terms
/// may repeat a generator; [`normalize`] merges them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word {
    terms: Vec<(GenId, i64)>,
}

impl Word {
    /// Drops zero exponents; otherwise keeps the terms as given.
    pub fn new(terms: impl IntoIterator<Item = (GenId, i64)>) -> Self {
        Word {
            terms: terms.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn terms(&self) -> &[(GenId, i64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        self.terms.iter().map(|&(g, _)| g).collect()
    }

    pub fn uses(&self, g: GenId) -> bool {
        self.terms.iter().any(|&(h, _)| h == g)
    }

    /// Total exponent of each generator, indexed by generator id.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut v = vec![0i64; generator_count];
        for &(g, e) in &self.terms {
            v[g] += e;
        }
        v
    }

    pub fn inverse(&self) -> Word {
        Word {
            terms: self.terms.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// Replaces every generator id through `f`, dropping terms mapped to `None`.
    pub fn map_generators(&self, f: impl Fn(GenId) -> Option<GenId>) -> Word {
        Word {
            terms: self.terms.iter().filter_map(|&(g, e)| f(g).map(|h| (h, e))).collect(),
        }
    }

    /// Replaces each term `g^e` by `h^(e * k)` wherever `f(g) = Some((h, k))`.
    pub(crate) fn substitute(&self, f: impl Fn(GenId) -> Option<(GenId, i64)>) -> Result<Word, PresentationError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(g, e) in &self.terms {
            match f(g) {
                Some((h, k)) => terms.push((h, e.checked_mul(k).ok_or(PresentationError::ExponentOverflow)?)),
                None => terms.push((g, e)),
            }
        }
        Ok(Word::new(terms))
    }
}

/// A cyclically reduced word of at most three terms with distinct generators,
/// stored as its lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    word: Word,
}

impl NormalForm {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        self.word.generators()
    }
}

/// Rewrites `w` to a conjugate in normal form: zero exponents go, equal
/// neighbours merge, and a first and last term on the same generator merge
/// (conjugating `g^a h^b g^c` to `g^(a+c) h^b`). Words still longer than three
/// terms afterwards are not relations of a 3-presentation.
pub fn normalize(w: &Word) -> Result<NormalForm, PresentationError> {
    let mut t: Vec<(GenId, i64)> = Vec::with_capacity(w.len());
    for &(g, e) in w.terms() {
        push_merge(&mut t, g, e)?;
    }
    while t.len() >= 2 && t[0].0 == t[t.len() - 1].0 {
        let (g, e) = t.pop().expect("nonempty");
        let merged = t[0].1.checked_add(e).ok_or(PresentationError::ExponentOverflow)?;
        if merged == 0 {
            t.remove(0);
        } else {
            t[0] = (g, merged);
        }
    }
    if t.len() > 3 {
        return Err(PresentationError::TooLong { terms: t.len() });
    }
    let best = (0..t.len())
        .map(|r| {
            let mut rot = t[r..].to_vec();
            rot.extend_from_slice(&t[..r]);
            rot
        })
        .min()
        .unwrap_or_default();
    Ok(NormalForm {
        word: Word { terms: best },
    })
}

fn push_merge(t: &mut Vec<(GenId, i64)>, g: GenId, e: i64) -> Result<(), PresentationError> {
    if e == 0 {
        return Ok(());
    }
    match t.last_mut() {
        Some(last) if last.0 == g => {
            let s = last.1.checked_add(e).ok_or(PresentationError::ExponentOverflow)?;
            if s == 0 {
                t.pop();
            } else {
                last.1 = s;
            }
        }
        _ => t.push((g, e)),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(t: &[(usize, i64)]) -> Word {
        Word::new(t.iter().copied())
    }

    #[test]
    fn worked_examples() {
        // g = 0, h = 1, i = 2
        assert_eq!(
            normalize(&w(&[(0, 0), (1, 1), (2, 1)])).unwrap().word(),
            &w(&[(1, 1), (2, 1)])
        );
        assert_eq!(
            normalize(&w(&[(0, 1), (0, 2), (1, 1)])).unwrap().word(),
            &w(&[(0, 3), (1, 1)])
        );
        assert_eq!(
            normalize(&w(&[(0, 2), (1, 3), (0, -1)])).unwrap().word(),
            &w(&[(0, 1), (1, 3)])
        );
    }

    #[test]
    fn cancellation_and_rotation() {
        assert!(normalize(&w(&[(0, 1), (0, -1)])).unwrap().is_empty());
        assert!(normalize(&w(&[(0, 1), (1, 2), (1, -2), (0, -1)])).unwrap().is_empty());
        assert_eq!(
            normalize(&w(&[(2, 1), (0, 1), (1, 1)])).unwrap().word(),
            &w(&[(0, 1), (1, 1), (2, 1)])
        );
        // commutator stays four terms
        assert_eq!(
            normalize(&w(&[(0, 1), (1, 1), (0, -1), (1, -1)])),
            Err(PresentationError::TooLong { terms: 4 })
        );
        // inverse words are kept apart
        let a = normalize(&w(&[(0, 1), (1, 1), (2, 1)])).unwrap();
        let b = normalize(&w(&[(0, 1), (1, 1), (2, 1)]).inverse()).unwrap();
        assert_ne!(a, b);
    }

    fn small_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..4, -3i64..=3), 0..7).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn normalize_preserves_sums_and_is_idempotent(word in small_word()) {
            if let Ok(nf) = normalize(&word) {
                prop_assert_eq!(nf.word().exponent_sums(4), word.exponent_sums(4));
                prop_assert!(nf.len() <= 3);
                prop_assert_eq!(nf.generators().len(), nf.len());
                prop_assert_eq!(normalize(nf.word()).unwrap(), nf.clone());
            }
        }

        #[test]
        fn rotations_share_a_normal_form(word in small_word(), r in 0usize..7) {
            if let Ok(nf) = normalize(&word) {
                let t = nf.word().terms().to_vec();
                if !t.is_empty() {
                    let r = r % t.len();
                    let mut rot = t[r..].to_vec();
                    rot.extend_from_slice(&t[..r]);
                    prop_assert_eq!(normalize(&Word::new(rot)).unwrap(), nf);
                }
            }
        }
    }
}
