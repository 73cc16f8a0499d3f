//! Pruned backtracking generation of pattern-avoiding permutations, the
//! positional classification `(a, k)` and exact per-class count tables.
//!
//! Generation places values left to right and abandons any prefix that
//! already contains the pattern. For 1324 the check is incremental: a prefix
//! carries the smallest value that plays the "3" in some 132 occurrence, and
//! a new entry larger than that completes a 1324.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{word_contains, Permutation};

/// `a` is the smallest value left of the maximum, `k` its distance to the
/// maximum. Every value below `a` then sits right of the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionalClass {
    pub a: usize,
    pub k: usize,
}

impl PositionalClass {
    pub fn new(a: usize, k: usize) -> Self {
        PositionalClass { a, k }
    }
}

/// `None` for permutations that start with their maximum (including n <= 1).
pub fn classify(p: &Permutation) -> Option<PositionalClass> {
    classify_slice(p.values())
}

pub fn classify_slice(values: &[u32]) -> Option<PositionalClass> {
    let n = values.len() as u32;
    let max_pos = values.iter().position(|&v| v == n)?;
    if max_pos == 0 {
        return None;
    }
    let (a_pos, &a) = values[..max_pos]
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .expect("non-empty prefix");
    Some(PositionalClass {
        a: a as usize,
        k: max_pos - a_pos,
    })
}

/// Membership in `S_{n,k}^{a<n}(1324)`.
pub fn in_class(p: &Permutation, a: usize, k: usize) -> bool {
    classify(p) == Some(PositionalClass { a, k }) && p.avoids_1324()
}

#[derive(Debug, Clone)]
enum Pruner {
    Av1324,
    Generic(Permutation),
}

const NO_THREE: u32 = u32::MAX;

impl Pruner {
    fn for_pattern(pattern: &Permutation) -> Pruner {
        if pattern.values() == [1, 3, 2, 4] {
            Pruner::Av1324
        } else {
            Pruner::Generic(pattern.clone())
        }
    }

    /// State after appending `v` to `prefix`, or `None` if the pattern appears.
    #[inline]
    fn extend(&self, prefix: &[u32], three: u32, v: u32) -> Option<u32> {
        match self {
            Pruner::Av1324 => {
                if v > three {
                    return None;
                }
                let mut best = three;
                let mut running_min = u32::MAX;
                for &x in prefix {
                    if x > v && running_min < v && x < best {
                        best = x;
                    }
                    running_min = running_min.min(x);
                }
                Some(best)
            }
            Pruner::Generic(pat) => {
                let mut word = prefix.to_vec();
                word.push(v);
                match word_contains(&word, pat) {
                    Ok(false) => Some(NO_THREE),
                    _ => None,
                }
            }
        }
    }
}

/// Depth-first walk visiting every avoider of size `n` whose prefix starts
/// with `prefix`, in lexicographic order.
fn walk<F: FnMut(&[u32])>(
    pruner: &Pruner,
    n: usize,
    prefix: &mut Vec<u32>,
    used: &mut [bool],
    three: u32,
    visit: &mut F,
) {
    if prefix.len() == n {
        visit(prefix);
        return;
    }
    for v in 1..=n as u32 {
        if used[v as usize] {
            continue;
        }
        if let Some(next) = pruner.extend(prefix, three, v) {
            used[v as usize] = true;
            prefix.push(v);
            walk(pruner, n, prefix, used, next, visit);
            prefix.pop();
            used[v as usize] = false;
        }
    }
}

fn walk_subtree<F: FnMut(&[u32])>(pruner: &Pruner, n: usize, first: u32, visit: &mut F) {
    let mut used = vec![false; n + 1];
    let mut prefix = Vec::with_capacity(n);
    if let Some(three) = pruner.extend(&prefix, NO_THREE, first) {
        used[first as usize] = true;
        prefix.push(first);
        walk(pruner, n, &mut prefix, &mut used, three, visit);
    }
}

/// Folds over all 1324-avoiders of size `n`, one independent subtree per
/// first entry. Subtree results are combined in first-entry order, so the
/// result does not depend on the worker count as long as `merge` is associative.
pub fn fold_avoiders<T, I, F, M>(n: usize, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u32]) + Sync,
    M: Fn(T, T) -> T,
{
    let pruner = Pruner::Av1324;
    if n == 0 {
        let mut acc = init();
        fold(&mut acc, &[]);
        return acc;
    }
    let parts: Vec<T> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            walk_subtree(&pruner, n, first, &mut |w| fold(&mut acc, w));
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

/// All 1324-avoiders of size `n` satisfying `keep`, in lexicographic order.
pub fn collect_avoiders<P>(n: usize, keep: P) -> Vec<Permutation>
where
    P: Fn(&[u32]) -> bool + Sync,
{
    fold_avoiders(
        n,
        Vec::new,
        |acc, w| {
            if keep(w) {
                acc.push(Permutation::from_vec_unchecked(w.to_vec()));
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )
}

/// Members of `S_n^{a<n}(1324)` over all distances, lexicographic.
pub fn collect_class(n: usize, a: usize) -> Vec<Permutation> {
    collect_avoiders(n, |w| classify_slice(w).is_some_and(|c| c.a == a))
}

/// Members of `S_{n,k}^{a<n}(1324)`, lexicographic.
pub fn collect_class_k(n: usize, a: usize, k: usize) -> Vec<Permutation> {
    let target = Some(PositionalClass { a, k });
    collect_avoiders(n, |w| classify_slice(w) == target)
}

/// Lexicographic stream of the permutations of size `n` avoiding `pattern`.
pub fn generate_avoiders(n: usize, pattern: &Permutation) -> Avoiders {
    Avoiders::new(n, pattern)
}

/// Explicit-stack form of the backtracking walk, so callers can pull
/// avoiders lazily.
#[derive(Debug, Clone)]
pub struct Avoiders {
    pruner: Pruner,
    n: usize,
    prefix: Vec<u32>,
    used: Vec<bool>,
    // three[d] is the pruning state of the length-d prefix
    three: Vec<u32>,
    // next candidate value to try at each depth
    next: Vec<u32>,
    done: bool,
}

impl Avoiders {
    fn new(n: usize, pattern: &Permutation) -> Self {
        let done = pattern.is_empty();
        Avoiders {
            pruner: Pruner::for_pattern(pattern),
            n,
            prefix: Vec::with_capacity(n),
            used: vec![false; n + 1],
            three: vec![NO_THREE],
            next: vec![1],
            done,
        }
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        loop {
            let depth = self.prefix.len();
            if depth == self.n {
                let out = Permutation::from_vec_unchecked(self.prefix.clone());
                // backtrack one level before returning
                if let Some(v) = self.prefix.pop() {
                    self.used[v as usize] = false;
                    self.three.pop();
                    self.next.pop();
                } else {
                    self.done = true;
                }
                return Some(out);
            }
            let mut advanced = false;
            while self.next[depth] <= self.n as u32 {
                let v = self.next[depth];
                self.next[depth] += 1;
                if self.used[v as usize] {
                    continue;
                }
                if let Some(state) = self.pruner.extend(&self.prefix, self.three[depth], v) {
                    self.used[v as usize] = true;
                    self.prefix.push(v);
                    self.three.push(state);
                    self.next.push(1);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                match self.prefix.pop() {
                    Some(v) => {
                        self.used[v as usize] = false;
                        self.three.pop();
                        self.next.pop();
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

/// Exact counts `|S_{n,k}^{a<n}(1324)|` for one size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCountTable {
    pub n: usize,
    /// `|S_n(1324)|`
    pub total: BigUint,
    /// Only classes that occur are stored; absent keys count zero.
    pub counts: BTreeMap<PositionalClass, BigUint>,
}

impl ClassCountTable {
    pub fn count(&self, a: usize, k: usize) -> BigUint {
        self.counts
            .get(&PositionalClass { a, k })
            .cloned()
            .unwrap_or_default()
    }

    /// Sum over every `(a, k)` class.
    pub fn class_sum(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Sum over `k` for a fixed `a`.
    pub fn count_a(&self, a: usize) -> BigUint {
        self.counts
            .iter()
            .filter(|(c, _)| c.a == a)
            .map(|(_, v)| v)
            .sum()
    }

    /// Avoiders that start with `n`; these fall outside every class.
    pub fn starting_with_max(&self) -> BigUint {
        &self.total - self.class_sum()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&TotalRecord {
            n: self.n,
            total: self.total.to_string(),
        })
        .expect("plain record");
        out.push('\n');
        for (class, count) in &self.counts {
            out.push_str(
                &serde_json::to_string(&CountRecord {
                    n: self.n,
                    a: class.a,
                    k: class.k,
                    count: count.to_string(),
                })
                .expect("plain record"),
            );
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, CacheError> {
        let mut n = None;
        let mut total = None;
        let mut counts = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: Record =
                serde_json::from_str(line).map_err(|e| CacheError::Format(format!("line {}: {e}", lineno + 1)))?;
            let record_n = match &record {
                Record::Count(r) => r.n,
                Record::Total(r) => r.n,
            };
            if *n.get_or_insert(record_n) != record_n {
                return Err(CacheError::Format("records for more than one n".into()));
            }
            match record {
                Record::Total(r) => total = Some(parse_decimal(&r.total)?),
                Record::Count(r) => {
                    counts.insert(PositionalClass { a: r.a, k: r.k }, parse_decimal(&r.count)?);
                }
            }
        }
        match (n, total) {
            (Some(n), Some(total)) => Ok(ClassCountTable { n, total, counts }),
            _ => Err(CacheError::Format("missing total record".into())),
        }
    }
}

fn parse_decimal(s: &str) -> Result<BigUint, CacheError> {
    s.parse::<BigUint>()
        .map_err(|_| CacheError::Format(format!("bad decimal {s:?}")))
}

#[derive(Serialize, Deserialize)]
struct TotalRecord {
    n: usize,
    total: String,
}

#[derive(Serialize, Deserialize)]
struct CountRecord {
    n: usize,
    a: usize,
    k: usize,
    count: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Record {
    Count(CountRecord),
    Total(TotalRecord),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("malformed cache file: {0}")]
    Format(String),
}

/// Enumerates `S_n(1324)` once and tallies every avoider by class.
pub fn count_table(n: usize) -> ClassCountTable {
    #[derive(Default)]
    struct Tally {
        total: BigUint,
        counts: BTreeMap<PositionalClass, BigUint>,
    }
    let tally = fold_avoiders(
        n,
        Tally::default,
        |t, w| {
            t.total += 1u32;
            if let Some(c) = classify_slice(w) {
                *t.counts.entry(c).or_insert_with(BigUint::zero) += 1u32;
            }
        },
        |mut a, b| {
            a.total += b.total;
            for (c, v) in b.counts {
                *a.counts.entry(c).or_insert_with(BigUint::zero) += v;
            }
            a
        },
    );
    ClassCountTable {
        n,
        total: tally.total,
        counts: tally.counts,
    }
}

/// Members of `S_{n,k}^{2<n}(1324)` that end with 1.
pub fn count_ending_with_one(n: usize, k: usize) -> BigUint {
    let target = Some(PositionalClass { a: 2, k });
    fold_avoiders(
        n,
        BigUint::zero,
        |acc, w| {
            if w.last() == Some(&1) && classify_slice(w) == target {
                *acc += 1u32;
            }
        },
        |a, b| a + b,
    )
}

/// One JSON-lines file per `n` under a directory.
#[derive(Debug, Clone)]
pub struct CountCache {
    dir: PathBuf,
}

impl CountCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CountCache { dir: dir.into() }
    }

    pub fn path_for(&self, n: usize) -> PathBuf {
        self.dir.join(format!("count_table_n{n}.jsonl"))
    }

    pub fn load(&self, n: usize) -> Result<Option<ClassCountTable>, CacheError> {
        let path = self.path_for(n);
        if !path.exists() {
            return Ok(None);
        }
        let table = ClassCountTable::from_jsonl(&fs::read_to_string(&path)?)?;
        if table.n != n {
            return Err(CacheError::Format(format!(
                "{} holds n={}, expected {n}",
                path.display(),
                table.n
            )));
        }
        Ok(Some(table))
    }

    pub fn store(&self, table: &ClassCountTable) -> Result<(), CacheError> {
        fs::create_dir_all(&self.dir)?;
        write_atomically(&self.path_for(table.n), table.to_jsonl().as_bytes())
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CacheError> {
    let tmp = path.with_extension("jsonl.tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Memoizing source of count tables, optionally backed by a [`CountCache`].
#[derive(Debug, Default)]
pub struct CountOracle {
    cache: Option<CountCache>,
    tables: Mutex<BTreeMap<usize, Arc<ClassCountTable>>>,
}

impl CountOracle {
    pub fn in_memory() -> Self {
        CountOracle::default()
    }

    pub fn with_cache(cache: CountCache) -> Self {
        CountOracle {
            cache: Some(cache),
            tables: Mutex::default(),
        }
    }

    pub fn table(&self, n: usize) -> Result<Arc<ClassCountTable>, CacheError> {
        if let Some(t) = self.tables.lock().expect("oracle lock").get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = match self.cache.as_ref().map(|c| c.load(n)).transpose()?.flatten() {
            Some(t) => t,
            None => {
                let t = count_table(n);
                if let Some(cache) = &self.cache {
                    cache.store(&t)?;
                }
                t
            }
        };
        let table = Arc::new(table);
        self.tables
            .lock()
            .expect("oracle lock")
            .insert(n, Arc::clone(&table));
        Ok(table)
    }
}
