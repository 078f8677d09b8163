use std::collections::BTreeMap;
use std::fmt;

/// An almost-identity map on positions.
///
/// Under the substitution reading used throughout the crate, position `i` of
/// a tuple reads the pebble at `kappa(i)`:
/// `T, (s_1..s_k) |= kappa phi` iff `T, (s_kappa(1)..s_kappa(k)) |= phi`.
///
/// The textual item `a<-b` sets `kappa(b) = a`, and `a<->b` is the swap.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Replacement {
    // Identity entries are never stored.
    entries: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplacementError {
    #[error("position indices start at 1")]
    ZeroIndex,
    #[error("position {0} is assigned twice")]
    Conflict(usize),
    #[error("replacement mentions position {index} beyond arity {arity}")]
    BeyondArity { index: usize, arity: usize },
}

impl Replacement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds `kappa` from `(i, kappa(i))` pairs. Identity pairs are dropped;
    /// a position listed twice with different images is a conflict.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ReplacementError> {
        let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, v) in pairs {
            if i == 0 || v == 0 {
                return Err(ReplacementError::ZeroIndex);
            }
            if let Some(&old) = assigned.get(&i) {
                if old != v {
                    return Err(ReplacementError::Conflict(i));
                }
            }
            assigned.insert(i, v);
        }
        assigned.retain(|i, v| i != v);
        Ok(Replacement { entries: assigned })
    }

    /// `[i <-> j]`.
    pub fn swap(i: usize, j: usize) -> Self {
        Self::from_pairs([(i, j), (j, i)]).expect("valid swap")
    }

    /// `[from <- to]`: position `to` reads the pebble at `from`.
    pub fn copy(from: usize, to: usize) -> Self {
        Self::from_pairs([(to, from)]).expect("valid copy")
    }

    /// Builds the replacement whose restriction to `1..=map.len()` is `map`
    /// (`map[p-1] = kappa(p)`).
    pub fn from_table(map: &[usize]) -> Result<Self, ReplacementError> {
        Self::from_pairs(map.iter().enumerate().map(|(p, &v)| (p + 1, v)))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.entries.get(&i).copied().unwrap_or(i)
    }

    /// The stored `(i, kappa(i))` pairs with `kappa(i) != i`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Maximum over moved positions and their images; 0 for the identity.
    pub fn max_index(&self) -> usize {
        self.entries.iter().map(|(&i, &v)| i.max(v)).max().unwrap_or(0)
    }

    /// `Some((i, j))` with `i < j` when this is exactly the swap `[i <-> j]`.
    pub fn as_swap(&self) -> Option<(usize, usize)> {
        let mut it = self.entries.iter();
        match (it.next(), it.next(), it.next()) {
            (Some((&a, &b)), Some((&c, &d)), None) if a == d && b == c => Some((a.min(b), a.max(b))),
            _ => None,
        }
    }

    /// `Some((from, to))` when this is the single copy `[from <- to]`.
    pub fn as_copy(&self) -> Option<(usize, usize)> {
        let mut it = self.entries.iter();
        match (it.next(), it.next()) {
            (Some((&to, &from)), None) => Some((from, to)),
            _ => None,
        }
    }

    pub fn is_simple(&self) -> bool {
        self.as_swap().is_some() || self.as_copy().is_some()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    ///
    /// Nesting `self (other phi)` behaves like the single replacement
    /// `self.compose(other)` applied to `phi`.
    pub fn compose(&self, other: &Replacement) -> Replacement {
        let n = self.max_index().max(other.max_index());
        Replacement::from_pairs((1..=n).map(|i| (i, self.apply(other.apply(i)))))
            .expect("composition of replacements is a replacement")
    }

    /// Restriction to `1..=k` as a table; errors when the support exceeds `k`.
    pub fn table(&self, k: usize) -> Result<Vec<usize>, ReplacementError> {
        if self.max_index() > k {
            return Err(ReplacementError::BeyondArity {
                index: self.max_index(),
                arity: k,
            });
        }
        Ok((1..=k).map(|i| self.apply(i)).collect())
    }

    /// Is the restriction to `1..=k` a bijection?
    pub fn is_permutation(&self) -> bool {
        let mut images: Vec<usize> = self.entries.values().copied().collect();
        images.sort_unstable();
        let keys: Vec<usize> = self.entries.keys().copied().collect();
        images == keys
    }
}

impl fmt::Display for Replacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((i, j)) = self.as_swap() {
            return write!(f, "{{{i}<->{j}}}");
        }
        f.write_str("{")?;
        for (n, (i, v)) in self.entries().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}<-{i}")?;
        }
        f.write_str("}")
    }
}
