//! Set partitions of `[n]` and their weighted generating polynomials.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Scalar, VariableTable};
use crate::triangle::Triangle;

/// Largest `nmax` accepted by [`triangle_from_partitions`]; row `nmax` ranges
/// over all Bell(nmax + 1) partitions.
pub const MAX_PARTITION_NMAX: usize = 10;

/// Partition of `[n]` in canonical form: each block ascending, blocks ordered
/// by their minimum (so the block of 1 comes first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetPartition {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementStatus {
    Opener,
    Closer,
    Insider,
    Singleton,
}

impl SetPartition {
    /// Canonicalizes arbitrary blocks; rejects overlaps, gaps and empties.
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<SetPartition> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::BadParameter("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                let x = x as usize;
                if x == 0 || x > n || seen[x] {
                    return Err(Error::BadParameter(format!("blocks do not partition [1,{n}]")));
                }
                seen[x] = true;
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n: n as u32, blocks })
    }

    /// From a restricted-growth string (`rgs[i]` is the block of element `i+1`).
    pub fn from_rgs(rgs: &[u32]) -> SetPartition {
        let k = rgs.iter().map(|&b| b + 1).max().unwrap_or(0) as usize;
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b as usize].push(i as u32 + 1);
        }
        SetPartition {
            n: rgs.len() as u32,
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, i: u32) -> &[u32] {
        self.blocks
            .iter()
            .find(|b| b.binary_search(&i).is_ok())
            .unwrap_or_else(|| panic!("{i} is not in [1,{}]", self.n))
    }

    /// Minimum of the block containing `i`.
    pub fn smallest(&self, i: u32) -> u32 {
        self.block_of(i)[0]
    }

    pub fn largest(&self, i: u32) -> u32 {
        *self.block_of(i).last().unwrap()
    }

    pub fn status(&self, i: u32) -> ElementStatus {
        let b = self.block_of(i);
        if b.len() == 1 {
            ElementStatus::Singleton
        } else if b[0] == i {
            ElementStatus::Opener
        } else if *b.last().unwrap() == i {
            ElementStatus::Closer
        } else {
            ElementStatus::Insider
        }
    }

    /// The partition induced on `[m]`.
    pub fn restrict(&self, m: u32) -> SetPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| x <= m).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        SetPartition {
            n: m.min(self.n),
            blocks,
        }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Bar notation: `156|47|239`, or `1,10|2,3,...` when elements need commas.
    fn from_str(s: &str) -> Result<SetPartition> {
        let bad = || Error::BadParameter(format!("cannot parse partition `{s}`"));
        let s = s.trim();
        if s.is_empty() {
            return Ok(SetPartition { n: 0, blocks: vec![] });
        }
        let commas = s.contains(',');
        let blocks = s
            .split('|')
            .map(|b| {
                let b = b.trim();
                if commas {
                    b.split(',')
                        .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                        .collect()
                } else {
                    b.chars()
                        .map(|c| c.to_digit(10).ok_or_else(bad))
                        .collect()
                }
            })
            .collect::<Result<Vec<Vec<u32>>>>()?;
        SetPartition::new(blocks)
    }
}

/// All partitions of `[n]` into exactly `k` blocks, in lexicographic order of
/// their restricted-growth strings.
pub fn enumerate_partitions(n: usize, k: usize) -> Vec<SetPartition> {
    fn rec(rgs: &mut Vec<u32>, used: u32, n: usize, k: u32, out: &mut Vec<SetPartition>) {
        let pos = rgs.len();
        if pos == n {
            if used == k {
                out.push(SetPartition::from_rgs(rgs));
            }
            return;
        }
        // enough positions left to open the missing blocks
        if (k - used) as usize > n - pos {
            return;
        }
        let top = if used < k { used } else { used - 1 };
        for b in 0..=top {
            rgs.push(b);
            rec(rgs, used.max(b + 1), n, k, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if k > n || (k == 0 && n > 0) {
        return out;
    }
    rec(&mut Vec::with_capacity(n), 0, n, k as u32, &mut out);
    out
}

pub fn enumerate_all(n: usize) -> Vec<SetPartition> {
    (0..=n).flat_map(|k| enumerate_partitions(n, k)).collect()
}

/// Which of the two set-partition interpretations to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Weights `e / c / d`, row `n` column `k` sums over `Π_{n+1,k+1}`.
    I,
    /// Weights `c / e / a`, row `n` column `k` sums over `Π_{n+1,n+1-k}`.
    II,
}

impl Variant {
    /// Scalars assigned when `smallest(π,i)` is `1`, is `i`, or neither.
    fn letters(self) -> [Scalar; 3] {
        match self {
            Variant::I => [Scalar::E, Scalar::C, Scalar::D],
            Variant::II => [Scalar::C, Scalar::E, Scalar::A],
        }
    }
}

/// Exponent counts of the three weight letters, over `i = 2..=n+1`.
fn weight_counts(pi: &SetPartition) -> [u32; 3] {
    let mut counts = [0u32; 3];
    for i in 2..=pi.n {
        let s = pi.smallest(i);
        let slot = if s == 1 {
            0
        } else if s == i {
            1
        } else {
            2
        };
        counts[slot] += 1;
    }
    counts
}

fn weight_monomial(t: &Arc<VariableTable>, variant: Variant, pi: &SetPartition) -> Monomial {
    let ids = variant.letters().map(|s| t.intern(crate::poly::Symbol::Scalar(s)).unwrap());
    Monomial::from_pairs(ids.into_iter().zip(weight_counts(pi)))
}

/// Product of `w_π(i)` over `i = 2..=n+1`; element 1 carries no weight.
pub fn weight(t: &Arc<VariableTable>, variant: Variant, pi: &SetPartition) -> Polynomial {
    Polynomial::from_terms(t, [(weight_monomial(t, variant, pi), BigInt::from(1))])
}

pub fn weight_i(t: &Arc<VariableTable>, pi: &SetPartition) -> Polynomial {
    weight(t, Variant::I, pi)
}

pub fn weight_ii(t: &Arc<VariableTable>, pi: &SetPartition) -> Polynomial {
    weight(t, Variant::II, pi)
}

/// Generating polynomial of weighted partitions, one entry per `(n, k)`.
pub fn triangle_from_partitions(
    t: &Arc<VariableTable>,
    variant: Variant,
    nmax: usize,
) -> Result<Triangle> {
    if nmax > MAX_PARTITION_NMAX {
        return Err(Error::GuardExceeded {
            what: "partition nmax",
            got: nmax,
            limit: MAX_PARTITION_NMAX,
        });
    }
    let ids = variant.letters().map(|s| t.intern(crate::poly::Symbol::Scalar(s)).unwrap());
    let mut rows = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let row = (0..=n)
            .map(|k| {
                let blocks = match variant {
                    Variant::I => k + 1,
                    Variant::II => n + 1 - k,
                };
                let mut acc: HashMap<[u32; 3], u64> = HashMap::new();
                for pi in enumerate_partitions(n + 1, blocks) {
                    *acc.entry(weight_counts(&pi)).or_default() += 1;
                }
                Polynomial::from_terms(
                    t,
                    acc.into_iter().map(|(counts, c)| {
                        (Monomial::from_pairs(ids.into_iter().zip(counts)), BigInt::from(c))
                    }),
                )
            })
            .collect();
        rows.push(row);
    }
    let label = match variant {
        Variant::I => "partitions-i",
        Variant::II => "partitions-ii",
    };
    Ok(Triangle::from_rows(t, label, Default::default(), rows))
}

/// Stirling subset numbers `S(n,k)` for `n <= nmax`, exact.
pub fn stirling_subset(nmax: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::from(0); nmax + 1]; nmax + 1];
    s[0][0] = BigInt::from(1);
    for n in 1..=nmax {
        for k in 1..=n {
            s[n][k] = &s[n - 1][k - 1] + &s[n - 1][k] * BigInt::from(k);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SetPartition {
        SetPartition::new(vec![vec![1, 5, 8], vec![2, 3, 9], vec![4, 7], vec![6]]).unwrap()
    }

    #[test]
    fn three_into_two() {
        let parts: Vec<String> = enumerate_partitions(3, 2).iter().map(|p| p.to_string()).collect();
        assert_eq!(parts, ["12|3", "13|2", "1|23"]);
        assert_eq!(enumerate_partitions(5, 2).len(), 15);
        assert_eq!(enumerate_partitions(4, 4), vec!["1|2|3|4".parse().unwrap()]);
        assert_eq!(enumerate_partitions(0, 0).len(), 1);
        assert!(enumerate_partitions(3, 0).is_empty());
        assert!(enumerate_partitions(2, 3).is_empty());
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(enumerate_all(n).len(), b, "Bell({n})");
        }
    }

    #[test]
    fn smallest_and_restriction() {
        let pi: SetPartition = "1|23".parse().unwrap();
        assert_eq!(pi.smallest(3), 2);
        assert_eq!(pi.smallest(2), 2);
        let big = example();
        for m in 1..=9 {
            let r = big.restrict(m);
            for i in 1..=m {
                assert_eq!(big.smallest(i), r.smallest(i));
            }
        }
    }

    #[test]
    fn statuses_of_worked_example() {
        let pi = example();
        assert_eq!(pi.status(6), ElementStatus::Singleton);
        assert_eq!(pi.status(4), ElementStatus::Opener);
        assert_eq!(pi.status(7), ElementStatus::Closer);
        assert_eq!(pi.status(3), ElementStatus::Insider);
        for p in enumerate_all(6) {
            for b in p.blocks() {
                let st: Vec<_> = b.iter().map(|&x| p.status(x)).collect();
                match b.len() {
                    1 => assert_eq!(st, [ElementStatus::Singleton]),
                    2 => assert_eq!(st, [ElementStatus::Opener, ElementStatus::Closer]),
                    _ => {
                        assert_eq!(st[0], ElementStatus::Opener);
                        assert_eq!(*st.last().unwrap(), ElementStatus::Closer);
                        assert!(st[1..st.len() - 1].iter().all(|s| *s == ElementStatus::Insider));
                    }
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        let t = VariableTable::new();
        let pi: SetPartition = "1|23".parse().unwrap();
        assert_eq!(weight_i(&t, &pi).to_string(), "c*d");
        let total = enumerate_partitions(3, 2)
            .iter()
            .fold(Polynomial::zero(&t), |acc, p| &acc + &weight_i(&t, p));
        assert_eq!(total.to_string(), "c*d + 2*c*e");
        let singles: SetPartition = "1|2|3|4|5".parse().unwrap();
        assert_eq!(weight_ii(&t, &singles).to_string(), "e^4");
    }

    #[test]
    fn guard_is_hard_error() {
        let t = VariableTable::new();
        assert!(matches!(
            triangle_from_partitions(&t, Variant::I, MAX_PARTITION_NMAX + 1),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn bar_notation_round_trip() {
        let pi = example();
        assert_eq!(pi.to_string(), "158|239|47|6");
        assert_eq!(pi.to_string().parse::<SetPartition>().unwrap(), pi);
        let big = SetPartition::from_rgs(&[0, 1, 1, 0, 2, 2, 0, 1, 1, 3, 0]);
        assert_eq!(big.to_string().parse::<SetPartition>().unwrap(), big);
        assert!("12|2".parse::<SetPartition>().is_err());
        assert!("13".parse::<SetPartition>().is_err());
    }

    #[test]
    fn stirling_recurrence_counts() {
        let s = stirling_subset(8);
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(BigInt::from(enumerate_partitions(n, k).len()), s[n][k]);
            }
        }
    }
}
