//! Set partitions of coordinate indices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A partition of `{0, .., n-1}` into nonempty blocks.
///
/// Stored canonically: each block sorted, blocks ordered by their least element.
/// Displayed 1-based, e.g. `{{1,2},{3,4}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from 0-based blocks, checking disjointness and coverage.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidInput("partition blocks must be nonempty".into()));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::InvalidInput("partition blocks must be disjoint and within range".into()));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput("partition blocks must cover every index".into()));
        }
        Ok(Self::canonical(n, blocks))
    }

    /// Builds a partition from 1-based blocks.
    pub fn from_one_based(blocks: &[Vec<usize>]) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        let mut zb = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut v = Vec::with_capacity(b.len());
            for &i in b {
                if i == 0 {
                    return Err(Error::InvalidInput("1-based partition indices start at 1".into()));
                }
                v.push(i - 1);
            }
            zb.push(v);
        }
        Self::new(n, zb)
    }

    /// Partition with `labels[i]` naming the block of `i`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match blocks.iter_mut().find(|(m, _)| *m == l) {
                Some((_, b)) => b.push(i),
                None => blocks.push((l, vec![i])),
            }
        }
        Self::canonical(labels.len(), blocks.into_iter().map(|(_, b)| b).collect())
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Self { n, blocks }
    }

    /// The one-block partition.
    pub fn trivial(n: usize) -> Self {
        Self { n, blocks: if n == 0 { Vec::new() } else { vec![(0..n).collect()] } }
    }

    /// The partition into singletons.
    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block labels: `labels()[i]` is the index of the block containing `i`.
    pub fn labels(&self) -> Vec<usize> {
        let mut l = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                l[i] = k;
            }
        }
        l
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("index in range")
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of(i) == self.block_of(j)
    }

    /// All blocks have the same size.
    pub fn is_equiblock(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        self.n == coarser.n && self.blocks.iter().all(|b| b.iter().all(|&i| coarser.same_block(b[0], i)))
    }

    /// Blocks as 1-based index lists.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
    }

    /// Parses `{{1,2},{3,4}}` or `1,2|3,4` (1-based).
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_prefix('{').and_then(|x| x.strip_suffix('}'));
        let parts: Vec<&str> = match body {
            Some(inner) => inner.split("},{").map(|p| p.trim_start_matches('{').trim_end_matches('}')).collect(),
            None => t.split('|').collect(),
        };
        let mut blocks = Vec::new();
        for p in parts {
            let mut b = Vec::new();
            for x in p.split(',') {
                let v: usize =
                    x.parse().map_err(|_| Error::InvalidInput(alloc::format!("bad partition index {x:?}")))?;
                b.push(v);
            }
            blocks.push(b);
        }
        Self::from_one_based(&blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (t, i) in b.iter().enumerate() {
                if t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over all partitions of `{0, .., n-1}` via restricted growth strings.
pub struct Partitions {
    a: Vec<usize>,
    max: Vec<usize>,
    done: bool,
}

/// All set partitions of an `n`-element set, in restricted-growth-string order.
pub fn all_partitions(n: usize) -> Partitions {
    Partitions { a: vec![0; n], max: vec![0; n], done: n == 0 }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.a);
        let n = self.a.len();
        // increment the rightmost position that can grow
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.a[i] <= self.max[i - 1] {
                self.a[i] += 1;
                self.max[i] = self.max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.max[j] = self.max[i];
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=7).map(|n| all_partitions(n).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn display_and_parse() {
        let p = Partition::parse("{{1,3},{2,4}}").unwrap();
        assert_eq!(p.to_string(), "{{1,3},{2,4}}");
        assert_eq!(Partition::parse("3,1|4,2").unwrap(), p);
        assert!(p.is_equiblock());
        assert!(Partition::singletons(4).refines(&p));
        assert!(p.refines(&Partition::trivial(4)));
        assert!(!p.refines(&Partition::parse("{{1,2},{3,4}}").unwrap()));
        assert!(Partition::parse("{{1,2},{2,3}}").is_err());
    }
}
