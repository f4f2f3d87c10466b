use std::cmp::Ordering;
use std::fmt;

/// A multi-index `J`: a sorted multiset of base-coordinate indices (0-based).
///
/// Jet coordinates `y^σ_J` are keyed by the canonical sorted form, so
/// `v_xt` and `v_tx` name the same coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(mut entries: Vec<u8>) -> Self {
        entries.sort_unstable();
        MultiIndex(entries)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i as u8])
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Self::new(indices.iter().map(|&i| i as u8).collect())
    }

    /// `|J|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    /// `J ∪ {i}` in canonical form.
    pub fn with(&self, i: usize) -> Self {
        let i = i as u8;
        let pos = self.0.partition_point(|&e| e <= i);
        let mut entries = Vec::with_capacity(self.0.len() + 1);
        entries.extend_from_slice(&self.0[..pos]);
        entries.push(i);
        entries.extend_from_slice(&self.0[pos..]);
        MultiIndex(entries)
    }

    /// Splits off the largest index: `J = K ∪ {i}`. `None` for the empty index.
    pub fn split_last(&self) -> Option<(MultiIndex, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((MultiIndex(rest.to_vec()), last as usize))
    }

    /// Removes one occurrence of `i`, if present.
    pub fn without(&self, i: usize) -> Option<Self> {
        let pos = self.0.iter().position(|&e| e as usize == i)?;
        let mut entries = self.0.clone();
        entries.remove(pos);
        Some(MultiIndex(entries))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|&i| i as usize)
    }

    /// Every canonical multi-index over `n` base coordinates with `|J| = order`.
    pub fn all_of_order(n: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(n: usize, start: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i as u8);
                rec(n, i, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 0, order, &mut Vec::with_capacity(order), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{:?}", self.0)
    }
}
