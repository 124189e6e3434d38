//! Deterministic enumeration of all `(rows, cols)` index pairs.
//!
//! Order: by minor order `r` ascending; within an order, row subsets in colex
//! order (outer loop), then column subsets in colex order (inner loop).

use serde::{Deserialize, Serialize};

/// Row and column selection of one minor, both strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn from_masks(rows: u32, cols: u32) -> MinorSpec {
        MinorSpec {
            rows: mask_to_indices(rows),
            cols: mask_to_indices(cols),
        }
    }

    pub fn masks(&self) -> (u32, u32) {
        let m = |v: &[usize]| v.iter().fold(0u32, |acc, &i| acc | (1 << i));
        (m(&self.rows), m(&self.cols))
    }
}

pub fn mask_to_indices(mut mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// `r`-subsets of `[0, n)` as bitmasks in colex order (Gosper's hack).
pub fn colex_subsets(n: usize, r: usize) -> Vec<u32> {
    assert!(n < 32, "subset masks are 32-bit");
    if r > n {
        return Vec::new();
    }
    if r == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut s: u64 = (1 << r) - 1;
    while s < 1 << n {
        out.push(s as u32);
        let c = s & s.wrapping_neg();
        let rr = s + c;
        s = (((rr ^ s) >> 2) / c) | rr;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Random access into the enumeration order.
#[derive(Clone, Debug)]
pub struct MinorIndex {
    n: usize,
    rmin: usize,
    subsets: Vec<Vec<u32>>,
    // offsets[r - rmin] = global index of the first minor of order r
    offsets: Vec<u64>,
    total: u64,
}

impl MinorIndex {
    pub fn new(n: usize, rmin: usize, rmax: usize) -> MinorIndex {
        assert!(1 <= rmin && rmin <= rmax && rmax <= n, "need 1 <= rmin <= rmax <= N");
        let subsets: Vec<Vec<u32>> = (rmin..=rmax).map(|r| colex_subsets(n, r)).collect();
        let mut offsets = Vec::with_capacity(subsets.len());
        let mut total = 0u64;
        for s in &subsets {
            offsets.push(total);
            total += (s.len() * s.len()) as u64;
        }
        MinorIndex {
            n,
            rmin,
            subsets,
            offsets,
            total,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn rmax(&self) -> usize {
        self.rmin + self.subsets.len() - 1
    }

    pub fn order_of(&self, idx: u64) -> usize {
        let pos = self.offsets.partition_point(|&o| o <= idx) - 1;
        self.rmin + pos
    }

    /// `(row mask, col mask)` of the minor at global index `idx`.
    pub fn masks(&self, idx: u64) -> (u32, u32) {
        assert!(idx < self.total, "minor index out of range");
        let pos = self.offsets.partition_point(|&o| o <= idx) - 1;
        let subs = &self.subsets[pos];
        let local = idx - self.offsets[pos];
        let w = subs.len() as u64;
        (subs[(local / w) as usize], subs[(local % w) as usize])
    }

    pub fn spec(&self, idx: u64) -> MinorSpec {
        let (r, c) = self.masks(idx);
        MinorSpec::from_masks(r, c)
    }

    /// Number of minors of each order among the first `upto` indices.
    pub fn per_order_counts(&self, upto: u64) -> Vec<(usize, u64, u64)> {
        self.subsets
            .iter()
            .enumerate()
            .map(|(pos, s)| {
                let total = (s.len() * s.len()) as u64;
                let start = self.offsets[pos];
                let done = upto.saturating_sub(start).min(total);
                (self.rmin + pos, total, done)
            })
            .collect()
    }
}

/// Every minor of orders `rmin..=rmax` of an `n x n` matrix, in enumeration order.
pub fn enumerate_minors(n: usize, rmin: usize, rmax: usize) -> impl Iterator<Item = MinorSpec> {
    let index = MinorIndex::new(n, rmin, rmax);
    (0..index.len()).map(move |i| index.spec(i))
}
