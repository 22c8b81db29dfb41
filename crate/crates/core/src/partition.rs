//! Partitions of n into positive parts, index permutations, and grouping of
//! equal-size parts. Parts are kept in the order they were given; several
//! constructions work on deliberately permuted layouts, so canonicalization
//! is always an explicit step that returns the permutation used.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    Empty,
    ZeroPart { index: usize },
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::Empty => write!(f, "partition must have at least one part"),
            PartitionError::ZeroPart { index } => {
                write!(f, "part {} is zero; parts must be positive", index + 1)
            }
        }
    }
}

impl std::error::Error for PartitionError {}

/// An ordered list of positive parts summing to n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(PartitionError::ZeroPart { index });
        }
        Ok(Partition { parts })
    }

    /// `count` copies of `size`.
    pub fn uniform(size: u64, count: usize) -> Self {
        Partition::new(vec![size; count]).expect("uniform partition")
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> u64 {
        self.parts[i]
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Non-increasing rearrangement together with the permutation that maps
    /// canonical positions back to original ones: `canonical.part(i) ==
    /// self.part(perm.image(i))`. The sort is stable so equal parts keep
    /// their relative order.
    pub fn canonical(&self) -> (Partition, Permutation) {
        let mut idx: Vec<usize> = (0..self.k()).collect();
        idx.sort_by(|&a, &b| self.parts[b].cmp(&self.parts[a]).then(a.cmp(&b)));
        let parts = idx.iter().map(|&i| self.parts[i]).collect();
        (Partition { parts }, Permutation::new(idx).expect("valid permutation"))
    }

    /// Rearranged partition: `result.part(i) == self.part(perm.image(i))`.
    pub fn permuted(&self, perm: &Permutation) -> Partition {
        assert_eq!(perm.len(), self.k(), "permutation length mismatch");
        Partition {
            parts: (0..self.k()).map(|i| self.parts[perm.image(i)]).collect(),
        }
    }

    /// Start offset of block `i` when the parts tile `[0, n)` in order.
    pub fn offset(&self, i: usize) -> u64 {
        self.parts[..i].iter().sum()
    }

    /// Row/column/symbol interval of block `i`, as 0-based bounds.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let lo = self.offset(i) as usize;
        lo..lo + self.parts[i] as usize
    }

    /// Map from a 0-based element of `[0, n)` to the block containing it.
    pub fn block_of_elements(&self) -> Vec<usize> {
        let mut map = Vec::with_capacity(self.n() as usize);
        for (b, &p) in self.parts.iter().enumerate() {
            map.extend(std::iter::repeat(b).take(p as usize));
        }
        map
    }

    /// Groups of indices with equal part size, largest size first.
    pub fn size_classes(&self) -> Vec<SizeClass> {
        let mut sizes: Vec<u64> = self.parts.to_vec();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes.dedup();
        sizes
            .into_iter()
            .map(|size| SizeClass {
                size,
                members: (0..self.k()).filter(|&i| self.parts[i] == size).collect(),
            })
            .collect()
    }

    /// Scales every part by `q > 0`.
    pub fn scaled(&self, q: u64) -> Partition {
        assert!(q > 0);
        Partition {
            parts: self.parts.iter().map(|p| p * q).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

/// All indices sharing one part size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeClass {
    pub size: u64,
    pub members: Vec<usize>,
}

impl SizeClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// A permutation of `[0, k)`, stored as the image list: position `i` of the
/// rearranged object is taken from position `image(i)` of the original.
#[derive(Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, String> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &i in &image {
            if i >= k || seen[i] {
                return Err(format!("not a permutation of 0..{k}: {image:?}"));
            }
            seen[i] = true;
        }
        Ok(Permutation(image))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (new, &old) in self.0.iter().enumerate() {
            inv[old] = new;
        }
        Permutation(inv)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parts() {
        assert_eq!(Partition::new(vec![]), Err(PartitionError::Empty));
        assert_eq!(
            Partition::new(vec![3, 0, 2]),
            Err(PartitionError::ZeroPart { index: 1 })
        );
    }

    #[test]
    fn canonical_sorts_stably() {
        let p = Partition::new(vec![2, 3, 2, 4]).unwrap();
        let (c, perm) = p.canonical();
        assert_eq!(c.parts(), &[4, 3, 2, 2]);
        assert_eq!((0..4).map(|i| perm.image(i)).collect::<Vec<_>>(), vec![3, 1, 0, 2]);
        assert_eq!(p.permuted(&perm), c);
        let inv = perm.inverse();
        assert_eq!(c.permuted(&inv), p);
    }

    #[test]
    fn blocks_and_classes() {
        let p = Partition::new(vec![3, 2, 2, 2]).unwrap();
        assert_eq!(p.n(), 9);
        assert_eq!(p.block_range(1), 3..5);
        assert_eq!(p.block_of_elements()[4], 1);
        let classes = p.size_classes();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].size, 3);
        assert_eq!(classes[1].members, vec![1, 2, 3]);
    }
}
