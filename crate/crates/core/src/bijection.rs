//! Words of coloured letters, the total order `<_π`, and the bijection between
//! set partitions of `[n+1]` and paths of the reduced network.
//!
//! A word is stored in traversal order `w_n, w_{n-1}, ..., w_1`, so index 0
//! of the slice holds `w_n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::poly::Symbol;

/// A coloured edge label: `e_{i,l}` or `a_{i,j,l}` with `j <= i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "e")]
    E { i: u32, l: u32 },
    #[serde(rename = "a")]
    A { i: u32, j: u32, l: u32 },
}

impl Letter {
    pub fn i(self) -> u32 {
        match self {
            Letter::E { i, .. } | Letter::A { i, .. } => i,
        }
    }

    pub fn l(self) -> u32 {
        match self {
            Letter::E { l, .. } | Letter::A { l, .. } => l,
        }
    }

    pub fn symbol(self) -> Symbol {
        match self {
            Letter::E { i, l } => Symbol::E { i, l },
            Letter::A { i, j, l } => Symbol::A { i, j, l },
        }
    }

    fn in_alphabet(self) -> bool {
        match self {
            Letter::E { .. } => true,
            Letter::A { i, j, .. } => j <= i,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbol().fmt(f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        // parse leniently so out-of-alphabet letters reach the validator
        let bad = || Error::MalformedSymbol(s.to_string());
        let s = s.trim();
        let (head, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
        let idx: Vec<u32> = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (head, idx.as_slice()) {
            ("e", &[i, l]) => Ok(Letter::E { i, l }),
            ("a", &[i, j, l]) => Ok(Letter::A { i, j, l }),
            _ => Err(bad()),
        }
    }
}

/// Letters in traversal order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathWord(pub Vec<Letter>);

impl PathWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `a`-letters.
    pub fn a_count(&self) -> usize {
        self.0.iter().filter(|l| matches!(l, Letter::A { .. })).count()
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for PathWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<PathWord> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(PathWord)
    }
}

/// Which requirement on path words failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Letter `a_{i,j,l}` with `j > i`.
    Alphabet,
    /// First letter must be `e_{n-1,0}` or `a_{n-1,j,0}`.
    First,
    /// Last letter must be `e_{0,k}` or `a_{0,0,k-1}`.
    Last,
    /// Successor of `a_{i,j,l}` must be `e_{i-1,l+1}` or `a_{i-1,j',l+1}`, `j <= j'`.
    AfterA,
    /// Successor of `e_{i,l}` must be `e_{i-1,l}` or `a_{i-1,j,l}`.
    AfterE,
    /// Word length differs from `n`.
    Length,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Alphabet => "alphabet",
            Condition::First => "(i) first letter",
            Condition::Last => "(ii) last letter",
            Condition::AfterA => "(iii) successor of a-letter",
            Condition::AfterE => "(iv) successor of e-letter",
            Condition::Length => "length",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordViolation {
    /// 0-based index into the word in traversal order.
    pub position: usize,
    pub condition: Condition,
}

impl fmt::Display for WordViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} fails at letter {}", self.condition.label(), self.position)
    }
}

/// Checks that `w` is the word of a path from `u_n` to `v_k`, reporting the
/// earliest violated condition.
pub fn validate_word(w: &PathWord, n: usize, k: usize) -> std::result::Result<(), WordViolation> {
    let fail = |position, condition| Err(WordViolation { position, condition });
    let letters = w.letters();
    if letters.is_empty() {
        return if n == 0 && k == 0 {
            Ok(())
        } else if n == 0 {
            fail(0, Condition::Last)
        } else {
            fail(0, Condition::First)
        };
    }
    if n == 0 {
        return fail(0, Condition::Length);
    }
    let (n32, k32) = (n as u32, k as u32);
    for (pos, &letter) in letters.iter().enumerate() {
        if !letter.in_alphabet() {
            return fail(pos, Condition::Alphabet);
        }
        if pos == 0 {
            let ok = match letter {
                Letter::E { i, l } => i == n32 - 1 && l == 0,
                Letter::A { i, l, .. } => i == n32 - 1 && l == 0,
            };
            if !ok {
                return fail(0, Condition::First);
            }
        } else {
            let prev = letters[pos - 1];
            let ok = match (prev, letter) {
                (Letter::A { i, l, .. }, Letter::E { i: i2, l: l2 }) => i2 + 1 == i && l2 == l + 1,
                (Letter::A { i, j, l }, Letter::A { i: i2, j: j2, l: l2 }) => {
                    i2 + 1 == i && l2 == l + 1 && j <= j2
                }
                (Letter::E { i, l }, next) => next.i() + 1 == i && next.l() == l,
            };
            if !ok {
                let cond = match prev {
                    Letter::A { .. } => Condition::AfterA,
                    Letter::E { .. } => Condition::AfterE,
                };
                return fail(pos, cond);
            }
        }
    }
    let last_pos = letters.len() - 1;
    let ok = match letters[last_pos] {
        Letter::E { i, l } => i == 0 && l == k32,
        Letter::A { i, j, l } => i == 0 && j == 0 && k32 >= 1 && l == k32 - 1,
    };
    if !ok {
        return fail(last_pos, Condition::Last);
    }
    if letters.len() != n {
        return fail(last_pos, Condition::Length);
    }
    Ok(())
}

/// The order `1 p_1 ... p_n` on `[n+1]`: the block of 1 together with the
/// maxima of the other blocks in increasing order, each other block's
/// remaining elements inserted ascending just before its maximum.
pub fn total_order(pi: &SetPartition) -> Vec<u32> {
    let mut out = Vec::with_capacity(pi.n());
    for x in 1..=pi.n() as u32 {
        let block = pi.block_of(x);
        if block[0] == 1 {
            out.push(x);
        } else if *block.last().unwrap() == x {
            out.extend_from_slice(block);
        }
    }
    out
}

/// `j` such that `x` is the `j`th largest of `[2, m] \ removed` (1-based).
fn rank_from_top(x: u32, m: u32, removed: &[u32]) -> u32 {
    (x..=m).filter(|y| !removed.contains(y)).count() as u32
}

fn jth_largest(j: u32, m: u32, removed: &[u32]) -> Option<u32> {
    (2..=m).rev().filter(|y| !removed.contains(y)).nth(j as usize - 1)
}

/// `W(π)` for `π ∈ Π_{n+1, n-k+1}`; returns the word together with `(n, k)`.
pub fn word_of_partition(pi: &SetPartition) -> (PathWord, usize, usize) {
    assert!(pi.n() >= 1, "partitions of [n+1] have n+1 >= 1");
    let n = pi.n() - 1;
    let k = n + 1 - pi.num_blocks();
    let order = total_order(pi);
    let p = &order[1..]; // p[i-1] = p_i
    let m = n as u32 + 1;
    let mut letters = Vec::with_capacity(n);
    let mut l = 0u32;
    for i in (1..=n).rev() {
        let pi_i = p[i - 1];
        let s = pi.smallest(pi_i);
        let i32_ = i as u32;
        if s == pi_i {
            letters.push(Letter::E { i: i32_ - 1, l });
        } else if s == 1 {
            letters.push(Letter::A { i: i32_ - 1, j: 0, l });
            l += 1;
        } else {
            assert!(i >= 2, "p_1 is a block minimum or lies in the block of 1");
            let j = rank_from_top(p[i - 2], m, &p[i - 1..]);
            letters.push(Letter::A { i: i32_ - 1, j, l });
            l += 1;
        }
    }
    (PathWord(letters), n, k)
}

/// Inverse of [`word_of_partition`]: rebuilds `π` by inserting `q_n, ..., q_1`.
pub fn partition_of_word(w: &PathWord, n: usize, k: usize) -> Result<SetPartition> {
    validate_word(w, n, k).map_err(Error::InvalidWord)?;
    let m = n as u32 + 1;
    let mut blocks: Vec<Vec<u32>> = vec![vec![1]];
    let mut unfinished: Option<usize> = None;
    let mut taken: Vec<u32> = Vec::with_capacity(n);
    let letters = w.letters();
    for (pos, &letter) in letters.iter().enumerate() {
        let q = match pos.checked_sub(1).map(|p| letters[p]) {
            Some(Letter::A { j, .. }) if j > 0 => jth_largest(j, m, &taken),
            _ => jth_largest(1, m, &taken),
        }
        .expect("a validated word never exhausts [2, n+1]");
        taken.push(q);
        match letter {
            Letter::E { .. } => match unfinished.take() {
                Some(b) => blocks[b].push(q),
                None => blocks.push(vec![q]),
            },
            Letter::A { j: 0, .. } => {
                assert!(unfinished.is_none(), "B_1 insertion with an unfinished block open");
                blocks[0].push(q);
            }
            Letter::A { .. } => match unfinished {
                Some(b) => blocks[b].push(q),
                None => {
                    blocks.push(vec![q]);
                    unfinished = Some(blocks.len() - 1);
                }
            },
        }
    }
    assert!(unfinished.is_none(), "word ended with an unfinished block");
    SetPartition::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn word(s: &str) -> PathWord {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_order() {
        let pi = SetPartition::new(vec![vec![1, 5, 8], vec![2, 3, 9], vec![4, 7], vec![6]]).unwrap();
        let order: String = total_order(&pi).iter().map(|x| x.to_string()).collect();
        assert_eq!(order, "156478239");
    }

    #[test]
    fn extreme_orders() {
        let singles: SetPartition = "1|2|3|4|5".parse().unwrap();
        assert_eq!(total_order(&singles), vec![1, 2, 3, 4, 5]);
        let one: SetPartition = "12345".parse().unwrap();
        assert_eq!(total_order(&one), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn extreme_words() {
        let (w, n, k) = word_of_partition(&"1|2|3|4".parse().unwrap());
        assert_eq!((n, k), (3, 0));
        assert_eq!(w.to_string(), "e(2,0) e(1,0) e(0,0)");
        let (w, n, k) = word_of_partition(&"1234".parse().unwrap());
        assert_eq!((n, k), (3, 3));
        assert_eq!(w.to_string(), "a(2,0,0) a(1,0,1) a(0,0,2)");
        assert_eq!(partition_of_word(&word("e(2,0) e(1,0) e(0,0)"), 3, 0).unwrap().to_string(), "1|2|3|4");
    }

    #[test]
    fn small_word_round_trip() {
        let pi: SetPartition = "1|23".parse().unwrap();
        let (w, n, k) = word_of_partition(&pi);
        assert_eq!((n, k), (2, 1));
        assert_eq!(w.to_string(), "a(1,1,0) e(0,1)");
        assert_eq!(partition_of_word(&w, n, k).unwrap(), pi);
    }

    #[test]
    fn exhaustive_round_trip_small() {
        for size in 1..=6 {
            for blocks in 1..=size {
                for pi in enumerate_partitions(size, blocks) {
                    let (w, n, k) = word_of_partition(&pi);
                    assert_eq!(validate_word(&w, n, k), Ok(()), "{pi} -> {w}");
                    assert_eq!(w.a_count(), k);
                    assert_eq!(partition_of_word(&w, n, k).unwrap(), pi);
                }
            }
        }
    }

    #[test]
    fn validation_diagnostics() {
        assert_eq!(validate_word(&PathWord::default(), 0, 0), Ok(()));
        assert_eq!(
            validate_word(&PathWord::default(), 2, 0).unwrap_err().condition,
            Condition::First
        );
        // decreasing j across consecutive a-letters
        let bad = word("a(2,2,0) a(1,1,1) e(0,2)");
        assert_eq!(
            validate_word(&bad, 3, 2),
            Err(WordViolation { position: 1, condition: Condition::AfterA })
        );
        let good = word("a(2,1,0) a(1,1,1) e(0,2)");
        assert_eq!(validate_word(&good, 3, 2), Ok(()));
        assert_eq!(validate_word(&good, 3, 1).unwrap_err().condition, Condition::Last);
        assert_eq!(validate_word(&good, 4, 2).unwrap_err().condition, Condition::First);
        assert_eq!(
            validate_word(&word("a(0,1,0)"), 1, 1).unwrap_err().condition,
            Condition::Alphabet
        );
        assert_eq!(validate_word(&word("e(1,0) e(1,0)"), 2, 0).unwrap_err().condition, Condition::AfterE);
        assert!(matches!(
            partition_of_word(&bad, 3, 2),
            Err(Error::InvalidWord(WordViolation { position: 1, .. }))
        ));
    }

    #[test]
    fn single_letter_words() {
        assert_eq!(validate_word(&word("e(0,0)"), 1, 0), Ok(()));
        assert_eq!(validate_word(&word("a(0,0,0)"), 1, 1), Ok(()));
        assert!(validate_word(&word("a(0,0,0)"), 1, 0).is_err());
    }

    #[test]
    fn json_letters_are_tagged() {
        let w = word("a(1,1,0) e(0,1)");
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"[{"a":{"i":1,"j":1,"l":0}},{"e":{"i":0,"l":1}}]"#
        );
    }
}
