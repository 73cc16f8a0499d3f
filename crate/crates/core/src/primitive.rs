//! The splice product of a primitive with a permutation that has its 1 left
//! of its maximum, unique factorization into primitives, the one-insertion
//! construction for the class `a = 2`, and the marked-tuple codec for that
//! class.
//!
//! A primitive is a 1324-avoider of size at least 2 whose 1 sits immediately
//! left of its maximum.
//!
//! Products of several factors are always nested to the right:
//! `s1 ⊙ (s2 ⊙ (... ⊙ sk))`. The innermost factor carries the global maximum.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::avoiders::{classify, collect_class_k, PositionalClass};
use crate::perm::{reduce_unchecked, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a primitive")]
    NotPrimitive(String),
    #[error("{0} is not a 1324-avoider with its 1 left of its maximum")]
    NotOneBeforeMax(String),
    #[error("{perm} is not in {class}")]
    OutsideClass { perm: String, class: &'static str },
    #[error("cannot split {perm}: {reason}")]
    Split { perm: String, reason: &'static str },
    #[error("invalid marked tuple: {0}")]
    InvalidTuple(String),
    #[error("cannot parse marked tuple from {0:?}")]
    Parse(String),
}

pub fn is_primitive(p: &Permutation) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let one = p.position(1).expect("n >= 1");
    p.values().get(one) == Some(&(n as u32)) && p.avoids_1324()
}

/// Membership in `S_m^{1<m}(1324)`: the right-hand operand of the product.
pub fn has_one_before_max(p: &Permutation) -> bool {
    classify(p).is_some_and(|c| c.a == 1) && p.avoids_1324()
}

/// Membership in the `a = 2, k = 1` class minus those ending with 1: the
/// allowed marked components of a [`MarkedTuple`].
pub fn is_marked_component(p: &Permutation) -> bool {
    classify(p) == Some(PositionalClass::new(2, 1)) && p.last() != Some(1) && p.avoids_1324()
}

/// Block lengths of a product `left ⊙ right`, used to move positions
/// between the factors and the product.
///
/// With `left = π1 1 m τ1` and `right = π2 1 θ2 ℓ τ2` the product reads
/// `π2^ π1 1 m θ2^ n τ2^ τ1` where `^` adds `m - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OdotLayout {
    /// |π1|
    pub left_prefix: usize,
    /// size of the left factor
    pub m: usize,
    /// |π2|
    pub right_prefix: usize,
    /// size of the product
    pub n: usize,
}

/// Which factor a product position came from. The entry `m` is shared by
/// both factors (it is the left factor's maximum and the right factor's 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Left(usize),
    Right(usize),
    Shared,
}

impl OdotLayout {
    fn tail_len(&self) -> usize {
        self.m - self.left_prefix - 2
    }

    /// 1-based position in the left factor to position in the product.
    pub fn map_left(&self, q: usize) -> usize {
        if q <= self.left_prefix + 2 {
            q + self.right_prefix
        } else {
            q + self.n - self.m
        }
    }

    /// 1-based position in the right factor to position in the product.
    pub fn map_right(&self, q: usize) -> usize {
        if q <= self.right_prefix {
            q
        } else {
            q + self.left_prefix + 1
        }
    }

    pub fn locate(&self, r: usize) -> Origin {
        let (a1, a2) = (self.left_prefix, self.right_prefix);
        if r <= a2 {
            Origin::Right(r)
        } else if r <= a2 + a1 + 1 {
            Origin::Left(r - a2)
        } else if r == a2 + a1 + 2 {
            Origin::Shared
        } else if r <= self.n - self.tail_len() {
            Origin::Right(r - a1 - 1)
        } else {
            Origin::Left(r - (self.n - self.m))
        }
    }
}

/// `left ⊙ right`. The result lies in `S_{n,k+1}^{1<n}(1324)` when `right`
/// has distance `k`, with `n = |left| + |right| - 1`.
pub fn odot(left: &Permutation, right: &Permutation) -> Result<Permutation, AlgebraError> {
    odot_with_layout(left, right).map(|(p, _)| p)
}

pub fn odot_with_layout(
    left: &Permutation,
    right: &Permutation,
) -> Result<(Permutation, OdotLayout), AlgebraError> {
    if !is_primitive(left) {
        return Err(AlgebraError::NotPrimitive(left.compact()));
    }
    if !has_one_before_max(right) {
        return Err(AlgebraError::NotOneBeforeMax(right.compact()));
    }
    let m = left.len();
    let l = right.len();
    let n = l + m - 1;
    let a1 = left.position(1).expect("primitive") - 1;
    let a2 = right.position(1).expect("class member") - 1;
    let top = right.position(l as u32).expect("class member") - 1;
    let shift = (m - 1) as u32;
    let (lv, rv) = (left.values(), right.values());

    let mut out = Vec::with_capacity(n);
    out.extend(rv[..a2].iter().map(|v| v + shift));
    out.extend_from_slice(&lv[..a1 + 2]);
    out.extend(rv[a2 + 1..top].iter().map(|v| v + shift));
    out.push(n as u32);
    out.extend(rv[top + 1..].iter().map(|v| v + shift));
    out.extend_from_slice(&lv[a1 + 2..]);

    let layout = OdotLayout {
        left_prefix: a1,
        m,
        right_prefix: a2,
        n,
    };
    Ok((Permutation::from_vec_unchecked(out), layout))
}

/// Ordered list of primitive factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitiveDecomposition {
    factors: Vec<Permutation>,
}

impl PrimitiveDecomposition {
    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(Permutation::len).collect()
    }

    /// Right-nested product of the factors.
    pub fn recompose(&self) -> Permutation {
        fold_product(&self.factors).expect("factors are primitive")
    }
}

impl fmt::Display for PrimitiveDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊙ ")?;
            }
            f.write_str(&s.compact())?;
        }
        Ok(())
    }
}

/// `s1 ⊙ (s2 ⊙ (... ⊙ sk))`.
pub fn fold_product(factors: &[Permutation]) -> Result<Permutation, AlgebraError> {
    let (last, rest) = factors
        .split_last()
        .ok_or_else(|| AlgebraError::InvalidTuple("no factors".into()))?;
    if !is_primitive(last) {
        return Err(AlgebraError::NotPrimitive(last.compact()));
    }
    rest.iter()
        .rev()
        .try_fold(last.clone(), |acc, left| odot(left, &acc))
}

/// One splitting step `p = first ⊙ rest`; `None` when `p` is already primitive.
pub fn split_first(
    p: &Permutation,
) -> Result<Option<(Permutation, Permutation, OdotLayout)>, AlgebraError> {
    if !has_one_before_max(p) {
        return Err(AlgebraError::NotOneBeforeMax(p.compact()));
    }
    let n = p.len();
    let v = p.values();
    let one = p.position(1).expect("class member") - 1;
    let top = p.position(n as u32).expect("class member") - 1;
    let theta = &v[one + 1..top];
    let Some(&m) = theta.first() else {
        return Ok(None);
    };
    let split_err = |reason| AlgebraError::Split {
        perm: p.compact(),
        reason,
    };
    if theta.windows(2).any(|w| w[0] > w[1]) {
        return Err(split_err("entries between 1 and the maximum are not increasing"));
    }
    let pi = &v[..one];
    let tau = &v[top + 1..];
    // both blocks must read "values above m, then values below m"
    let cut = |block: &[u32]| -> Result<usize, AlgebraError> {
        let c = block.iter().take_while(|&&x| x > m).count();
        if block[c..].iter().any(|&x| x > m) {
            Err(split_err("a block interleaves values above and below the first entry after 1"))
        } else {
            Ok(c)
        }
    };
    let pi_cut = cut(pi)?;
    let tau_cut = cut(tau)?;
    let (pi_high, pi_low) = pi.split_at(pi_cut);
    let (tau_high, tau_low) = tau.split_at(tau_cut);

    let mut first: Vec<u32> = pi_low.to_vec();
    first.extend([1, m]);
    first.extend_from_slice(tau_low);
    let first = Permutation::new(first).map_err(|_| split_err("low values do not form 1..m"))?;

    let mut rest: Vec<u32> = pi_high.to_vec();
    rest.push(m);
    rest.extend_from_slice(&theta[1..]);
    rest.push(n as u32);
    rest.extend_from_slice(tau_high);
    let rest = reduce_unchecked(&rest);

    let layout = OdotLayout {
        left_prefix: pi_low.len(),
        m: m as usize,
        right_prefix: pi_high.len(),
        n,
    };
    Ok(Some((first, rest, layout)))
}

/// Unique decomposition into `pos(n) - pos(1)` primitives.
pub fn factorize(p: &Permutation) -> Result<PrimitiveDecomposition, AlgebraError> {
    factorize_tracked(p, None).map(|(d, _)| d)
}

/// Factorizes while following one position of `p` into the factor that
/// owns it. Returns `(factor index, position in factor)` for the tracked
/// position; a position on the shared entry of some split is an error.
pub fn factorize_tracked(
    p: &Permutation,
    mut track: Option<usize>,
) -> Result<(PrimitiveDecomposition, Option<(usize, usize)>), AlgebraError> {
    let mut factors = Vec::new();
    let mut found = None;
    let mut current = p.clone();
    loop {
        match split_first(&current)? {
            None => {
                if let Some(q) = track {
                    found = Some((factors.len(), q));
                }
                factors.push(current);
                break;
            }
            Some((first, rest, layout)) => {
                if let Some(q) = track {
                    match layout.locate(q) {
                        Origin::Left(q) => {
                            found = Some((factors.len(), q));
                            track = None;
                        }
                        Origin::Right(q) => track = Some(q),
                        Origin::Shared => {
                            return Err(AlgebraError::Split {
                                perm: p.compact(),
                                reason: "tracked position lands on a shared entry",
                            })
                        }
                    }
                }
                factors.push(first);
                current = rest;
            }
        }
    }
    Ok((PrimitiveDecomposition { factors }, found))
}

/// Entries left of the 1.
pub fn left_of_one(p: &Permutation) -> usize {
    p.position(1).map_or(0, |i| i - 1)
}

/// Entries right of the maximum.
pub fn right_of_max(p: &Permutation) -> usize {
    p.position(p.len() as u32).map_or(0, |i| p.len() - i)
}

/// Shifts `p` up by one and inserts a 1 in each gap right of the maximum,
/// gaps taken left to right.
pub fn expand_with_one(p: &Permutation) -> Result<Vec<Permutation>, AlgebraError> {
    if !has_one_before_max(p) {
        return Err(AlgebraError::NotOneBeforeMax(p.compact()));
    }
    let shifted: Vec<u32> = p.values().iter().map(|v| v + 1).collect();
    let top = p.position(p.len() as u32).expect("class member");
    Ok((top..=p.len())
        .map(|gap| {
            let mut out = shifted.clone();
            out.insert(gap, 1);
            Permutation::from_vec_unchecked(out)
        })
        .collect())
}

/// Removes the 1 from a member of the `a = 2` class and reduces.
pub fn contract_one(p: &Permutation) -> Result<Permutation, AlgebraError> {
    if !(classify(p).is_some_and(|c| c.a == 2) && p.avoids_1324()) {
        return Err(AlgebraError::OutsideClass {
            perm: p.compact(),
            class: "S_n^{2<n}(1324)",
        });
    }
    Ok(remove_one(p))
}

fn remove_one(p: &Permutation) -> Permutation {
    let rest: Vec<u32> = p.values().iter().filter(|&&v| v != 1).map(|v| v - 1).collect();
    Permutation::from_vec_unchecked(rest)
}

fn insert_one_at(p: &Permutation, pos: usize) -> Permutation {
    let mut out: Vec<u32> = p.values().iter().map(|v| v + 1).collect();
    out.insert(pos - 1, 1);
    Permutation::from_vec_unchecked(out)
}

/// A k-tuple of primitives in which exactly one component is replaced by a
/// member of the `a = 2, k = 1` class not ending with 1.
///
/// `marked` is a 0-based index into `components`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedTuple {
    components: Vec<Permutation>,
    marked: usize,
}

impl MarkedTuple {
    pub fn new(components: Vec<Permutation>, marked: usize) -> Result<Self, AlgebraError> {
        let bad = |msg: String| Err(AlgebraError::InvalidTuple(msg));
        if marked >= components.len() {
            return bad(format!("marked index {marked} out of range"));
        }
        for (i, c) in components.iter().enumerate() {
            if i == marked {
                if !is_marked_component(c) {
                    return bad(format!("marked component {} is not in A_{{2,1}}", c.compact()));
                }
            } else if !is_primitive(c) {
                return bad(format!("component {} is not primitive", c.compact()));
            }
        }
        Ok(MarkedTuple { components, marked })
    }

    pub fn components(&self) -> &[Permutation] {
        &self.components
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Size of the permutation this tuple decodes to.
    pub fn target_size(&self) -> usize {
        self.components.iter().map(Permutation::len).sum::<usize>() + 1 - self.k()
    }

    /// `"(12, 2413, 132)"`, without the mark.
    pub fn unmarked_string(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(component_text).collect();
        format!("({})", parts.join(", "))
    }
}

fn component_text(p: &Permutation) -> String {
    if p.len() <= 9 {
        p.compact()
    } else {
        format!("[{p}]")
    }
}

impl fmt::Display for MarkedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if i == self.marked {
                f.write_str("^")?;
            }
            f.write_str(&component_text(c))?;
        }
        f.write_str(")")
    }
}

impl FromStr for MarkedTuple {
    type Err = AlgebraError;

    /// Parses `"(12, ^2413, 132)"`. Components longer than nine are written
    /// in brackets, `"[1,2,...,10]"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AlgebraError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let mut pieces = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, ch) in inner.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth = depth.checked_sub(1).ok_or_else(err)?,
                ',' if depth == 0 => {
                    pieces.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(&inner[start..]);
        let mut marked = None;
        let mut components = Vec::with_capacity(pieces.len());
        for (i, piece) in pieces.iter().enumerate() {
            let mut piece = piece.trim();
            if let Some(rest) = piece.strip_prefix('^') {
                if marked.replace(i).is_some() {
                    return Err(err());
                }
                piece = rest;
            }
            let piece = piece
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .unwrap_or(piece);
            if piece.is_empty() {
                return Err(err());
            }
            components.push(piece.parse::<Permutation>().map_err(|_| err())?);
        }
        MarkedTuple::new(components, marked.ok_or_else(err)?)
    }
}

/// Builds the permutation of `S_{n,k}^{2<n}(1324)` (not ending with 1)
/// encoded by a marked tuple.
pub fn decode_tuple(t: &MarkedTuple) -> Result<Permutation, AlgebraError> {
    // re-validate: the fields are private but this keeps decode total
    let t = MarkedTuple::new(t.components.clone(), t.marked)?;
    let marked = &t.components[t.marked];
    // the mark is the entry right of the 1; after deleting the 1 it sits
    // where the 1 was
    let mark_pos = marked.position(1).expect("class member");
    let stripped = remove_one(marked);
    let factor = |i: usize| {
        if i == t.marked {
            &stripped
        } else {
            &t.components[i]
        }
    };

    let k = t.k();
    let mut acc = factor(k - 1).clone();
    let mut mark = (t.marked == k - 1).then_some(mark_pos);
    for i in (0..k - 1).rev() {
        let (product, layout) = odot_with_layout(factor(i), &acc)?;
        mark = if i == t.marked {
            Some(layout.map_left(mark_pos))
        } else {
            mark.map(|q| layout.map_right(q))
        };
        acc = product;
    }
    let mark = mark.expect("mark is carried through every fold");
    Ok(insert_one_at(&acc, mark))
}

/// Inverse of [`decode_tuple`].
pub fn encode_perm(p: &Permutation) -> Result<MarkedTuple, AlgebraError> {
    let in_domain = classify(p).is_some_and(|c| c.a == 2) && p.last() != Some(1) && p.avoids_1324();
    if !in_domain {
        return Err(AlgebraError::OutsideClass {
            perm: p.compact(),
            class: "S_n^{2<n}(1324) not ending with 1",
        });
    }
    let mark = p.position(1).expect("class member");
    let stripped = remove_one(p);
    let (decomposition, found) = factorize_tracked(&stripped, Some(mark))?;
    let (idx, q) = found.expect("tracked position is always located");
    let mut components = decomposition.factors;
    components[idx] = insert_one_at(&components[idx], q);
    MarkedTuple::new(components, idx)
}

/// Primitives and marked components by size, enumerated once.
#[derive(Debug, Clone)]
pub struct ComponentPools {
    primitives: Vec<Vec<Permutation>>,
    marked: Vec<Vec<Permutation>>,
}

impl ComponentPools {
    /// Pools for every component size up to `max_size`.
    pub fn up_to(max_size: usize) -> Self {
        let primitives = (0..=max_size)
            .map(|m| if m >= 2 { collect_class_k(m, 1, 1) } else { Vec::new() })
            .collect();
        let marked = (0..=max_size)
            .map(|m| {
                if m >= 4 {
                    collect_class_k(m, 2, 1)
                        .into_iter()
                        .filter(|q| q.last() != Some(1))
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        ComponentPools { primitives, marked }
    }

    pub fn max_size(&self) -> usize {
        self.primitives.len() - 1
    }

    pub fn primitives(&self, size: usize) -> &[Permutation] {
        &self.primitives[size]
    }

    pub fn marked(&self, size: usize) -> &[Permutation] {
        &self.marked[size]
    }

    /// Calls `emit` on every valid marked tuple of length `k` decoding to
    /// size `n`, ordered by component sizes, then marked index, then
    /// components. Panics if the pools are too small for `n - k + 1`.
    pub fn for_each_tuple(&self, n: usize, k: usize, mut emit: impl FnMut(MarkedTuple)) {
        if k == 0 || n < k + 3 {
            return;
        }
        // component sizes sum to n + k - 1; primitives have size >= 2, the
        // marked component size >= 4
        let total = n + k - 1;
        assert!(total - 2 * (k - 1) <= self.max_size(), "component pools too small");
        let mut sizes = Vec::with_capacity(k);
        compositions(total, k, &mut sizes, &mut |sizes| {
            for marked in 0..k {
                if sizes[marked] < 4 || sizes.iter().enumerate().any(|(i, &s)| i != marked && s < 2) {
                    continue;
                }
                let pools: Vec<&Vec<Permutation>> = sizes
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| if i == marked { &self.marked[s] } else { &self.primitives[s] })
                    .collect();
                cartesian(&pools, &mut Vec::with_capacity(k), &mut |components| {
                    emit(MarkedTuple {
                        components: components.to_vec(),
                        marked,
                    });
                });
            }
        });
    }
}

/// Every valid marked tuple of length `k` decoding to size `n`; see
/// [`ComponentPools::for_each_tuple`] for the order.
pub fn marked_tuples(n: usize, k: usize) -> Vec<MarkedTuple> {
    let mut out = Vec::new();
    if k == 0 || n < k + 3 {
        return out;
    }
    ComponentPools::up_to(n - k + 1).for_each_tuple(n, k, |t| out.push(t));
    out
}

fn compositions(total: usize, parts: usize, acc: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if parts == 0 {
        if total == 0 {
            emit(acc);
        }
        return;
    }
    for first in 1..=total {
        acc.push(first);
        compositions(total - first, parts - 1, acc, emit);
        acc.pop();
    }
}

fn cartesian(pools: &[&Vec<Permutation>], acc: &mut Vec<Permutation>, emit: &mut impl FnMut(&[Permutation])) {
    if acc.len() == pools.len() {
        emit(acc);
        return;
    }
    for item in pools[acc.len()].iter() {
        acc.push(item.clone());
        cartesian(pools, acc, emit);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avoiders::{collect_class, in_class};
    use std::collections::{BTreeSet, HashMap};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive(&p("2143")));
        assert!(!is_primitive(&p("1234")));
        assert!(!is_primitive(&p("21")));
        assert!(is_primitive(&p("12")));
        assert!(!is_primitive(&p("1")));
        assert!(!is_primitive(&Permutation::empty()));
    }

    #[test]
    fn product_examples() {
        assert_eq!(odot(&p("2143"), &p("41253")).unwrap(), p("72145863"));
        assert_eq!(odot(&p("213"), &p("3142")).unwrap(), p("521364"));
        assert_eq!(odot(&p("3142"), &p("213")).unwrap(), p("531462"));
        assert_eq!(odot(&p("213"), &p("12")).unwrap(), p("2134"));
        assert_eq!(odot(&p("12"), &p("213")).unwrap(), p("3124"));
        assert_ne!(odot(&p("213"), &p("12")), odot(&p("12"), &p("213")));
    }

    #[test]
    fn product_preconditions() {
        assert!(matches!(odot(&p("1234"), &p("12")), Err(AlgebraError::NotPrimitive(_))));
        assert!(matches!(odot(&p("12"), &p("21")), Err(AlgebraError::NotOneBeforeMax(_))));
        assert!(matches!(odot(&p("12"), &p("1")), Err(AlgebraError::NotOneBeforeMax(_))));
        // 1324 itself has its 1 left of the maximum but is not an avoider
        assert!(odot(&p("12"), &p("1324")).is_err());
    }

    #[test]
    fn right_operand_has_increasing_middle() {
        // the block between 1 and the maximum of any valid right operand is
        // increasing, so the product never needs to assume it
        for l in 2..=8 {
            for q in collect_class(l, 1) {
                let one = q.position(1).unwrap();
                let top = q.position(l as u32).unwrap();
                assert!(q.values()[one..top - 1].windows(2).all(|w| w[0] < w[1]), "{q:?}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(&p("1243")).unwrap().to_string(), "12 ⊙ 132");
        assert_eq!(factorize(&p("3124")).unwrap().to_string(), "12 ⊙ 213");
        assert_eq!(factorize(&p("2143")).unwrap().to_string(), "2143");
        assert_eq!(factorize(&p("1234")).unwrap().to_string(), "12 ⊙ 12 ⊙ 12");
        let d = factorize(&p("72145863")).unwrap();
        assert_eq!(d.factors()[0], p("2143"));
        assert_eq!(d.recompose(), p("72145863"));
        assert_eq!(d.sizes().iter().sum::<usize>() - (d.k() - 1), 8);
    }

    #[test]
    fn factorize_rejects_outside_domain() {
        assert!(factorize(&p("21")).is_err());
        assert!(factorize(&p("1324")).is_err());
        assert!(factorize(&p("312")).is_err());
    }

    #[test]
    fn split_rejects_non_members() {
        let err = split_first(&p("13245")).unwrap_err();
        assert!(matches!(err, AlgebraError::NotOneBeforeMax(_)));
    }

    #[test]
    fn closure_of_product() {
        let prims: Vec<Permutation> = (2..=6).flat_map(|m| collect_class_k(m, 1, 1)).collect();
        let rights: Vec<Permutation> = (2..=6).flat_map(|l| collect_class(l, 1)).collect();
        for a in &prims {
            for b in &rights {
                let k = classify(b).unwrap().k;
                let prod = odot(a, b).unwrap();
                assert_eq!(prod.len(), a.len() + b.len() - 1);
                assert!(in_class(&prod, 1, k + 1), "{a:?} ⊙ {b:?}");
            }
        }
    }

    #[test]
    fn factorization_is_unique_and_recomposes() {
        for n in 2..=8 {
            let members = collect_class(n, 1);
            let mut preimages: HashMap<Permutation, usize> = HashMap::new();
            for m in 2..n {
                for a in collect_class_k(m, 1, 1) {
                    for b in collect_class(n - m + 1, 1) {
                        *preimages.entry(odot(&a, &b).unwrap()).or_default() += 1;
                    }
                }
            }
            for q in members {
                let d = factorize(&q).unwrap();
                let k = classify(&q).unwrap().k;
                assert_eq!(d.k(), k);
                assert!(d.factors().iter().all(is_primitive));
                assert_eq!(d.recompose(), q);
                let expected = if k == 1 { 0 } else { 1 };
                assert_eq!(preimages.get(&q).copied().unwrap_or(0), expected, "{q:?}");
            }
        }
    }

    #[test]
    fn layout_maps_are_inverse_to_locate() {
        let (prod, layout) = odot_with_layout(&p("2143"), &p("41253")).unwrap();
        for q in 1..=4 {
            let r = layout.map_left(q);
            assert!(prod.at(r) as usize <= 4);
            if q != 3 {
                assert_eq!(layout.locate(r), Origin::Left(q));
            } else {
                assert_eq!(layout.locate(r), Origin::Shared);
            }
        }
        for q in 1..=5 {
            let r = layout.map_right(q);
            if q == 2 {
                assert_eq!(layout.locate(r), Origin::Shared);
            } else {
                assert_eq!(layout.locate(r), Origin::Right(q));
                assert_eq!(prod.at(r), p("41253").at(q) + 3);
            }
        }
    }

    #[test]
    fn expand_examples() {
        let show = |v: Vec<Permutation>| v.iter().map(|q| q.compact()).collect::<Vec<_>>();
        assert_eq!(show(expand_with_one(&p("12")).unwrap()), ["231"]);
        assert_eq!(show(expand_with_one(&p("132")).unwrap()), ["2413", "2431"]);
        assert_eq!(show(expand_with_one(&p("213")).unwrap()), ["3241"]);
        assert!(expand_with_one(&p("21")).is_err());
    }

    #[test]
    fn contract_examples() {
        assert_eq!(contract_one(&p("231")).unwrap(), p("12"));
        assert_eq!(contract_one(&p("2431")).unwrap(), p("132"));
        let c = contract_one(&p("2567134")).unwrap();
        assert_eq!(c, p("145623"));
        assert!(in_class(&c, 1, 3));
        assert!(contract_one(&p("1234")).is_err());
    }

    #[test]
    fn insertion_accounting() {
        for n in 3..=9 {
            let sources = collect_class(n - 1, 1);
            let targets = collect_class(n, 2);
            let mut seen: HashMap<Permutation, Permutation> = HashMap::new();
            for s in &sources {
                let k = classify(s).unwrap().k;
                let images = expand_with_one(s).unwrap();
                assert_eq!(images.len(), right_of_max(s) + 1);
                assert_eq!(left_of_one(&s.reverse_complement()), right_of_max(s));
                for t in images {
                    assert!(in_class(&t, 2, k));
                    assert_eq!(contract_one(&t).unwrap(), *s);
                    assert!(seen.insert(t, s.clone()).is_none());
                }
            }
            let target_set: BTreeSet<_> = targets.into_iter().collect();
            assert_eq!(seen.keys().cloned().collect::<BTreeSet<_>>(), target_set);
        }
    }

    #[test]
    fn tuple_decode_examples() {
        let cases = [
            ("(12, ^2413, 132)", "2357614"),
            ("(^25134, 12, 12)", "2567134"),
            ("(12, 12, ^42513)", "6234715"),
            ("(^32514, 12, 12)", "3256714"),
        ];
        for (t, expected) in cases {
            let tuple: MarkedTuple = t.parse().unwrap();
            assert_eq!(decode_tuple(&tuple).unwrap(), p(expected), "{t}");
            assert_eq!(encode_perm(&p(expected)).unwrap(), tuple, "{expected}");
            assert_eq!(tuple.to_string(), t);
            assert_eq!(tuple.target_size(), 7);
        }
    }

    #[test]
    fn tuple_validation() {
        assert!(MarkedTuple::new(vec![p("12"), p("2413")], 0).is_err());
        assert!(MarkedTuple::new(vec![p("12"), p("2431")], 1).is_err());
        assert!(MarkedTuple::new(vec![p("12"), p("2413")], 2).is_err());
        assert!(MarkedTuple::new(vec![p("12"), p("2413")], 1).is_ok());
        assert!("(12, 2413)".parse::<MarkedTuple>().is_err());
        assert!("(^12, ^2413)".parse::<MarkedTuple>().is_err());
        assert!("12, ^2413".parse::<MarkedTuple>().is_err());
        assert!(encode_perm(&p("2431")).is_err());
        assert!(encode_perm(&p("1234")).is_err());
    }

    #[test]
    fn tuple_text_handles_long_components() {
        let big = p("2,3,1,4,5,6,7,8,9,10,11");
        let t = MarkedTuple {
            components: vec![p("12"), big.clone()],
            marked: 1,
        };
        let text = t.to_string();
        assert_eq!(text, "(12, ^[2,3,1,4,5,6,7,8,9,10,11])");
        // big is not in A_{2,1}, so parsing re-validates and refuses it
        assert!(text.parse::<MarkedTuple>().is_err());
    }

    #[test]
    fn codec_is_a_bijection_on_small_sizes() {
        for n in 4..=9 {
            for k in 1..n - 1 {
                let perms: Vec<Permutation> = collect_class_k(n, 2, k)
                    .into_iter()
                    .filter(|q| q.last() != Some(1))
                    .collect();
                let tuples = marked_tuples(n, k);
                assert_eq!(perms.len(), tuples.len(), "n={n} k={k}");
                let mut images = BTreeSet::new();
                for t in &tuples {
                    let q = decode_tuple(t).unwrap();
                    assert!(in_class(&q, 2, k) && q.last() != Some(1));
                    assert_eq!(encode_perm(&q).unwrap(), *t);
                    images.insert(q);
                }
                assert_eq!(images, perms.into_iter().collect());
            }
        }
    }
}
