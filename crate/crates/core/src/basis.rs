//! Sorted index subsets of a free module basis and the signs of exterior
//! algebra bookkeeping.

use std::fmt;

/// A strictly increasing tuple of basis indices, stored as a bit mask.
/// Supports ranks up to 32.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisSet(u32);

pub const MAX_RANK: usize = 32;

impl BasisSet {
    pub const EMPTY: BasisSet = BasisSet(0);

    pub fn from_bits(bits: u32) -> Self {
        BasisSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        BasisSet(1 << i)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n == 32 {
            BasisSet(u32::MAX)
        } else {
            BasisSet((1u32 << n) - 1)
        }
    }

    /// Builds a set from distinct indices in any order.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i >= MAX_RANK || bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(BasisSet(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_RANK && self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        BasisSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        BasisSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        BasisSet(self.0 | other.0)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        BasisSet(!self.0 & Self::full(n).0)
    }

    /// Indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Number of members strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        if i >= MAX_RANK {
            return self.len();
        }
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }
}

impl fmt::Debug for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sign of `e_S ∧ e_T` relative to `e_{S∪T}`, or `None` when the sets meet.
/// Equals `(-1)^{#{(s,t) : s > t}}`.
pub fn wedge_sign(s: BasisSet, t: BasisSet) -> Option<i32> {
    if s.intersects(t) {
        return None;
    }
    let inversions: usize = t.iter().map(|ti| s.len() - s.count_below(ti + 1)).sum();
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sorts a list of indices. Returns the sign of the sorting permutation and
/// the resulting set, or `None` if an index repeats.
pub fn sort_sign(indices: &[usize]) -> Option<(i32, BasisSet)> {
    let set = BasisSet::from_indices(indices)?;
    let mut inversions = 0;
    for a in 0..indices.len() {
        for b in a + 1..indices.len() {
            if indices[a] > indices[b] {
                inversions += 1;
            }
        }
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, set))
}

/// All subsets of `{0..n-1}` of size `k`, in lexicographic order of their
/// sorted index tuples. This order fixes the rational coordinates used by
/// every matrix in the crate.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<BasisSet> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<BasisSet>) {
        if acc.len() == k {
            out.push(BasisSet::from_indices(acc).expect("distinct"));
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All subsets of `{0..n-1}`, grouped by size.
pub fn all_subsets(n: usize) -> Vec<BasisSet> {
    (0..=n).flat_map(|k| subsets_of_size(n, k)).collect()
}

/// Position of `s` within `subsets_of_size(n, s.len())`.
pub fn subset_rank(n: usize, s: BasisSet) -> usize {
    // combinatorial number system over the lexicographic order
    let k = s.len();
    let idx = s.indices();
    let mut pos = 0;
    let mut prev = 0usize;
    for (slot, &i) in idx.iter().enumerate() {
        for skipped in prev..i {
            pos += binomial(n - skipped - 1, k - slot - 1);
        }
        prev = i + 1;
    }
    pos
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn sign_pow(exp: usize) -> i32 {
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}
