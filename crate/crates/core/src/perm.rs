//! Permutations in one-line notation and the handful of operations the rest of
//! the crate is built from.
//!
//! Positions and values are 1-based. The empty permutation is a legal value.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("invalid word: value {0} occurs more than once")]
    DuplicateValue(u32),
    #[error("invalid word: values must be positive")]
    ZeroValue,
    #[error("not a permutation of 1..{len}: {values:?}")]
    NotPermutation { len: usize, values: Vec<u32> },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A sequence of distinct positive integers, not necessarily `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        check_distinct(&values)?;
        Ok(Word(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Replaces the i-th smallest letter by i.
    pub fn reduce(&self) -> Permutation {
        reduce_unchecked(&self.0)
    }
}

fn check_distinct(values: &[u32]) -> Result<(), PermError> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.first() == Some(&0) {
        return Err(PermError::ZeroValue);
    }
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(PermError::DuplicateValue(pair[0]));
        }
    }
    Ok(())
}

/// Reduces a slice of distinct positive values to the permutation with the
/// same relative order.
pub fn reduce(values: &[u32]) -> Result<Permutation, PermError> {
    check_distinct(values)?;
    Ok(reduce_unchecked(values))
}

pub(crate) fn reduce_unchecked(values: &[u32]) -> Permutation {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&i| values[i]);
    let mut out = vec![0u32; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Permutation(out)
}

/// A permutation of `1..=n` in one-line notation.
///
/// The derived ordering is lexicographic on the one-line word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotPermutation { len: n, values });
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    /// Value at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> u32 {
        self.0[pos - 1]
    }

    /// 1-based position of `value`, if present.
    pub fn position(&self, value: u32) -> Option<usize> {
        self.0.iter().position(|&v| v == value).map(|i| i + 1)
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        Permutation(out)
    }

    /// `i -> n + 1 - p(n + 1 - i)`.
    pub fn reverse_complement(&self) -> Permutation {
        let n = self.len() as u32;
        Permutation(self.0.iter().rev().map(|&v| n + 1 - v).collect())
    }

    /// `p ⊖ 1`: every value shifted up by one, followed by a trailing 1.
    pub fn skew_sum_one(&self) -> Permutation {
        let mut out: Vec<u32> = self.0.iter().map(|&v| v + 1).collect();
        out.push(1);
        Permutation(out)
    }

    pub fn contains_pattern(&self, pattern: &Permutation) -> Result<bool, PermError> {
        word_contains(&self.0, pattern)
    }

    pub fn avoids(&self, pattern: &Permutation) -> Result<bool, PermError> {
        self.contains_pattern(pattern).map(|c| !c)
    }

    pub fn avoids_1324(&self) -> bool {
        avoids_1324(&self.0)
    }

    /// Digit-string form (`"2143"`) when every value is a single digit,
    /// otherwise the comma form.
    pub fn compact(&self) -> String {
        if self.len() <= 9 {
            self.0.iter().map(|v| char::from(b'0' + *v as u8)).collect()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.compact())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `"2,5,1,3,4"`, or a bare digit string such as `"25134"` for
    /// n <= 9.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_err = || PermError::Parse(s.to_string());
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let values: Vec<u32> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| parse_err()))
                .collect::<Result<_, _>>()?
        } else {
            if s.len() > 9 || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err());
            }
            s.bytes().map(|b| (b - b'0') as u32).collect()
        };
        Permutation::new(values).map_err(|_| parse_err())
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;

    fn try_from(values: Vec<u32>) -> Result<Self, Self::Error> {
        Permutation::new(values)
    }
}

/// Containment of `pattern` in a word of distinct values.
///
/// The patterns 21, 132, 213 and 1324 are dispatched to dedicated checkers.
pub fn word_contains(word: &[u32], pattern: &Permutation) -> Result<bool, PermError> {
    if pattern.is_empty() {
        return Err(PermError::InvalidArgument("empty pattern"));
    }
    if pattern.len() > word.len() {
        return Ok(false);
    }
    Ok(match pattern.values() {
        [1] => true,
        [2, 1] => !avoids_21(word),
        [1, 3, 2] => !avoids_132(word),
        [2, 1, 3] => !avoids_213(word),
        [1, 3, 2, 4] => !avoids_1324(word),
        pat => contains_generic(word, pat),
    })
}

pub fn avoids_21(word: &[u32]) -> bool {
    word.windows(2).all(|w| w[0] < w[1])
}

/// Right-to-left scan keeping the largest value that has a bigger value to
/// its left as the candidate "2".
pub fn avoids_132(word: &[u32]) -> bool {
    let mut stack: Vec<u32> = Vec::with_capacity(word.len());
    let mut two: Option<u32> = None;
    for &x in word.iter().rev() {
        if matches!(two, Some(t) if x < t) {
            return false;
        }
        while let Some(&top) = stack.last() {
            if top < x {
                stack.pop();
                two = Some(two.map_or(top, |t| t.max(top)));
            } else {
                break;
            }
        }
        stack.push(x);
    }
    true
}

/// 213 is the reverse complement of 132, so this is the 132 scan run
/// left-to-right on complemented values.
pub fn avoids_213(word: &[u32]) -> bool {
    let mut stack: Vec<u32> = Vec::with_capacity(word.len());
    let mut two: Option<u32> = None;
    for &x in word {
        if matches!(two, Some(t) if x > t) {
            return false;
        }
        while let Some(&top) = stack.last() {
            if top > x {
                stack.pop();
                two = Some(two.map_or(top, |t| t.min(top)));
            } else {
                break;
            }
        }
        stack.push(x);
    }
    true
}

/// O(n^2): a 1324 exists iff some inversion `w[j] > w[k]` (j < k) has a
/// smaller value than `w[k]` before `j` and a larger value than `w[j]` after `k`.
pub fn avoids_1324(word: &[u32]) -> bool {
    let n = word.len();
    if n < 4 {
        return true;
    }
    let mut prefix_min = vec![u32::MAX; n];
    for j in 1..n {
        prefix_min[j] = prefix_min[j - 1].min(word[j - 1]);
    }
    let mut suffix_max = vec![0u32; n];
    for k in (0..n - 1).rev() {
        suffix_max[k] = suffix_max[k + 1].max(word[k + 1]);
    }
    for j in 1..n - 2 {
        let three = word[j];
        if prefix_min[j] > three {
            continue;
        }
        for k in j + 1..n - 1 {
            let two = word[k];
            if two < three && prefix_min[j] < two && suffix_max[k] > three {
                return false;
            }
        }
    }
    true
}

/// Backtracking match of pattern positions left to right. Each new pattern
/// entry only has to fit between its nearest already-placed neighbours in value.
fn contains_generic(word: &[u32], pattern: &[u32]) -> bool {
    let k = pattern.len();
    // bounds[j] = (index of placed entry just below, index just above)
    let bounds: Vec<(Option<usize>, Option<usize>)> = (0..k)
        .map(|j| {
            let below = (0..j)
                .filter(|&t| pattern[t] < pattern[j])
                .max_by_key(|&t| pattern[t]);
            let above = (0..j)
                .filter(|&t| pattern[t] > pattern[j])
                .min_by_key(|&t| pattern[t]);
            (below, above)
        })
        .collect();
    let mut chosen = vec![0usize; k];
    search(word, &bounds, &mut chosen, 0, 0)
}

fn search(
    word: &[u32],
    bounds: &[(Option<usize>, Option<usize>)],
    chosen: &mut [usize],
    depth: usize,
    start: usize,
) -> bool {
    let k = bounds.len();
    if depth == k {
        return true;
    }
    let (below, above) = bounds[depth];
    let last_start = word.len() - (k - depth);
    for i in start..=last_start {
        let x = word[i];
        if below.is_some_and(|t| word[chosen[t]] >= x) || above.is_some_and(|t| word[chosen[t]] <= x) {
            continue;
        }
        chosen[depth] = i;
        if search(word, bounds, chosen, depth + 1, i + 1) {
            return true;
        }
    }
    false
}
