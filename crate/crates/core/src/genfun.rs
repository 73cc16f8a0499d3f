//! Generating functions for the positional classes, assembled from exact
//! series, and the identity checks that compare them with brute-force
//! class counts.
//!
//! `T_{a,k}(x)` counts `S_{n,k}^{a<n}(1324)` by size, `g_a(x, t)` collects
//! the `T_{a,k}` by distance and `f(x)` counts primitives without the
//! constant term.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::avoiders::{CacheError, CountOracle};
use crate::series::SeriesError;
use crate::{BiSeries, Rational, Series};

#[derive(Debug, Error)]
pub enum GenfunError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

type Result<T> = std::result::Result<T, GenfunError>;

fn q(v: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(v.into())
}

fn half() -> Rational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of primitives of size `n >= 2`: `2 (3n-3)! / ((2n-1)! n!)`.
pub fn primitive_count(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(GenfunError::InvalidArgument(format!("primitives need n >= 2, got {n}")));
    }
    let num = factorial(3 * n - 3) * 2u32;
    let den = factorial(2 * n - 1) * factorial(n);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `f(x) = Σ_{m>=1} |S_{m+1,1}^{1<m+1}(1324)| x^m` through `x^order`.
pub fn f_series(order: usize) -> Series {
    Series::from_fn(order, |m| {
        if m == 0 {
            Rational::zero()
        } else {
            q(primitive_count(m + 1).expect("m + 1 >= 2"))
        }
    })
}

fn a_nk_memo(n: usize, k: usize, memo: &mut BTreeMap<(usize, usize), BigUint>) -> BigUint {
    if k == 0 || n < 2 || k > n - 1 {
        return BigUint::zero();
    }
    if k == 1 {
        return primitive_count(n).expect("n >= 2");
    }
    if let Some(v) = memo.get(&(n, k)) {
        return v.clone();
    }
    let mut sum = BigUint::zero();
    for m in 2..=n + 1 - k {
        sum += primitive_count(m).expect("m >= 2") * a_nk_memo(n + 1 - m, k - 1, memo);
    }
    memo.insert((n, k), sum.clone());
    sum
}

/// `a_{n,k} = Σ_{m=2}^{n-k+1} a_{m,1} a_{n-m+1,k-1}` for `n >= 3`,
/// `2 <= k <= n - 1`, with `a_{m,1}` from [`primitive_count`].
pub fn a_nk_recurrence(n: usize, k: usize) -> Result<BigUint> {
    if n < 3 || k < 2 || k > n - 1 {
        return Err(GenfunError::InvalidArgument(format!(
            "recurrence needs n >= 3 and 2 <= k <= n-1, got n={n} k={k}"
        )));
    }
    Ok(a_nk_memo(n, k, &mut BTreeMap::new()))
}

/// `T_{1,k}(x) = x f(x)^k`.
pub fn t1k_series(k: usize, order: usize) -> Series {
    let f = f_series(order);
    f.pow(k as i64).expect("non-negative exponent").mul_x_pow(1).truncate(order)
}

/// `g_1(x, t) = x t f(x) / (1 - t f(x))`.
pub fn g1_series(x_order: usize, t_order: usize) -> BiSeries {
    let tf = BiSeries::from_x_series(&f_series(x_order), t_order)
        .mul_t_pow(1)
        .truncate(x_order, t_order);
    let inv = tf.geometric_inverse().expect("t f has zero constant term");
    (&tf * &inv).mul_x_pow(1).truncate(x_order, t_order)
}

/// `½ (x² ∂g₁/∂x − g₁²)`.
pub fn g2_from_square(x_order: usize, t_order: usize) -> Result<BiSeries> {
    let g1 = g1_series(x_order, t_order);
    let lhs = g1.dx()?.mul_x_pow(2);
    Ok((&lhs - &(&g1 * &g1)).scalar_mul(&half()).truncate(x_order, t_order))
}

/// `½ (x² ∂g₁/∂x + x g₁ − t x ∂g₁/∂t)`.
pub fn g2_from_t_derivative(x_order: usize, t_order: usize) -> Result<BiSeries> {
    let g1 = g1_series(x_order, t_order);
    let a = g1.dx()?.mul_x_pow(2);
    let b = g1.mul_x_pow(1);
    let c = g1.dt()?.mul_t_pow(1).mul_x_pow(1);
    Ok((&(&a + &b) - &c).scalar_mul(&half()).truncate(x_order, t_order))
}

/// `g_2(x, t)`; both assembly routes are computed and must agree.
pub fn g2_series(x_order: usize, t_order: usize) -> Result<BiSeries> {
    let a = g2_from_square(x_order, t_order)?;
    let b = g2_from_t_derivative(x_order, t_order)?;
    if a != b {
        return Err(GenfunError::InvalidArgument(
            "the two g2 assembly routes disagree".to_string(),
        ));
    }
    Ok(a)
}

/// `T_{2,k}(x)`: `x²` for `k = 0`, `½ x² d/dx (x f)` for `k = 1`, and
/// `f^k T_{2,0} + k f^{k-1} (T_{2,1} − f T_{2,0})` beyond.
pub fn t2k_series(k: usize, order: usize) -> Series {
    let f = f_series(order);
    let t20 = Series::monomial(2, Rational::one(), order);
    let t21 = f
        .mul_x_pow(1)
        .dx()
        .expect("order >= 1 after the shift")
        .mul_x_pow(2)
        .truncate(order)
        .scalar_mul(&half());
    match k {
        0 => t20,
        1 => t21,
        _ => {
            let fk = f.pow(k as i64).expect("non-negative");
            let fk1 = f.pow(k as i64 - 1).expect("non-negative");
            let corr = &t21 - &(&f * &t20);
            &(&fk * &t20) + &(&fk1 * &corr).scalar_mul(&q(k as u64))
        }
    }
}

/// `T_{a,k}(x)` read off brute-force class counts; `T_{a,0} = |S_{a-1}(1324)| x^a`.
pub fn t_ak_bruteforce(a: usize, k: usize, order: usize, oracle: &CountOracle) -> Result<Series> {
    if a == 0 {
        return Err(GenfunError::InvalidArgument("a must be at least 1".to_string()));
    }
    if k == 0 {
        let coeff = if a == 1 {
            BigUint::one()
        } else {
            oracle.table(a - 1)?.total.clone()
        };
        return Ok(Series::monomial(a, q(coeff), order).truncate(order));
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (n, c) in coeffs.iter_mut().enumerate().skip(a + k) {
        *c = q(oracle.table(n)?.count(a, k));
    }
    Ok(Series::new(coeffs))
}

/// Outcome of one identity check. `residual` holds every coefficient of the
/// difference series as `(n, k, value)`; the identity passes when all are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    pub residual: Vec<(usize, usize, Rational)>,
    pub millis: u128,
}

impl IdentityReport {
    pub fn new(
        identity: impl Into<String>,
        params: impl IntoIterator<Item = (&'static str, Value)>,
        residual: Vec<(usize, usize, Rational)>,
        started: Instant,
    ) -> Self {
        IdentityReport {
            identity: identity.into(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            pass: residual.iter().all(|(_, _, r)| r.is_zero()),
            residual,
            millis: started.elapsed().as_millis(),
        }
    }

    pub fn from_series(
        identity: impl Into<String>,
        params: impl IntoIterator<Item = (&'static str, Value)>,
        k: usize,
        residual: &Series,
        started: Instant,
    ) -> Self {
        let entries = residual
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| (n, k, c.clone()))
            .collect();
        Self::new(identity, params, entries, started)
    }

    pub fn from_bivariate(
        identity: impl Into<String>,
        params: impl IntoIterator<Item = (&'static str, Value)>,
        residual: &BiSeries,
        started: Instant,
    ) -> Self {
        let mut entries = Vec::new();
        for n in 0..=residual.x_order() {
            for k in 0..=residual.t_order() {
                entries.push((n, k, residual.coeff(n, k).clone()));
            }
        }
        Self::new(identity, params, entries, started)
    }

    /// Entries with a nonzero value.
    pub fn failures(&self) -> impl Iterator<Item = &(usize, usize, Rational)> {
        self.residual.iter().filter(|(_, _, r)| !r.is_zero())
    }

    /// JSON without the timing field, for byte-level comparison across runs.
    pub fn canonical_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "params": self.params,
            "pass": self.pass,
            "residual": self
                .residual
                .iter()
                .map(|(n, k, r)| json!([n, k, r.to_string()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.canonical_json();
        v["millis"] = json!(self.millis as u64);
        v
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "{} {} [{}] {} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            params.join(" "),
            self.millis
        )?;
        for (n, k, r) in self.failures().take(5) {
            write!(f, "\n    residual at x^{n} t^{k}: {r}")?;
        }
        Ok(())
    }
}

fn signed(sign_negative: bool, v: BigUint) -> Rational {
    let v = q(v);
    if sign_negative {
        -v
    } else {
        v
    }
}

/// `Σ_{j=0}^{k} (−1)^j C(k,j) f^j T_{k−j}`.
fn conjecture_form_i(f: &Series, t: &[Series], k: usize) -> Series {
    let order = f.order();
    let mut acc = Series::zero(order);
    for j in 0..=k {
        let term = &f.pow(j as i64).expect("non-negative") * &t[k - j];
        acc = &acc + &term.scalar_mul(&signed(j % 2 == 1, binomial(k, j)));
    }
    acc
}

/// `Σ_{j=0}^{a−1} C(k,j) f^{k−j} Σ_{i=0}^{j} (−1)^i C(j,i) f^i T_{j−i}`.
fn conjecture_form_ii(f: &Series, t: &[Series], a: usize, k: usize) -> Series {
    let order = f.order();
    let mut acc = Series::zero(order);
    for j in 0..a {
        let mut inner = Series::zero(order);
        for i in 0..=j {
            let term = &f.pow(i as i64).expect("non-negative") * &t[j - i];
            inner = &inner + &term.scalar_mul(&signed(i % 2 == 1, binomial(j, i)));
        }
        let outer = &f.pow((k - j) as i64).expect("k >= a > j") * &inner;
        acc = &acc + &outer.scalar_mul(&q(binomial(k, j)));
    }
    acc
}

/// `Σ_{j=0}^{a−1} (−1)^{a−j−1} C(k,j) C(k−j−1, a−j−1) f^{k−j} T_j`.
#[allow(clippy::needless_range_loop)]
fn conjecture_form_iii(f: &Series, t: &[Series], a: usize, k: usize) -> Series {
    let order = f.order();
    let mut acc = Series::zero(order);
    for j in 0..a {
        let c = binomial(k, j) * binomial(k - j - 1, a - j - 1);
        let term = &f.pow((k - j) as i64).expect("k >= a > j") * &t[j];
        acc = &acc + &term.scalar_mul(&signed((a - j - 1) % 2 == 1, c));
    }
    acc
}

/// Reports for the three forms of the conjectured relation among the
/// `T_{a,j}`, plus their mutual consistency.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    /// Alternating sum `Σ (−1)^j C(k,j) f^j T_{a,k−j}` on brute-force inputs.
    pub form_i: IdentityReport,
    /// Prediction of `T_{a,k}` from `T_{a,0..a}` minus the brute-force series.
    pub form_ii: IdentityReport,
    /// Same for the single-sum form.
    pub form_iii: IdentityReport,
    /// Both predictions agree, and the alternating sum vanishes on the
    /// predicted sequence.
    pub equivalence: IdentityReport,
}

impl ConjectureReport {
    pub fn reports(&self) -> [&IdentityReport; 4] {
        [&self.form_i, &self.form_ii, &self.form_iii, &self.equivalence]
    }
}

/// Checks the conjectured relation for `T_{a,k}` through `x^order`, all
/// inputs `T_{a,j}` taken from brute-force counts.
#[allow(clippy::needless_range_loop)]
pub fn conjecture_check(a: usize, k: usize, order: usize, oracle: &CountOracle) -> Result<ConjectureReport> {
    if a == 0 || k < a {
        return Err(GenfunError::InvalidArgument(format!(
            "the relation is stated for k >= a >= 1, got a={a} k={k}"
        )));
    }
    let started = Instant::now();
    let params = || {
        [
            ("a", json!(a)),
            ("k", json!(k)),
            ("order", json!(order)),
        ]
    };
    let f = f_series(order);
    let brute: Vec<Series> = (0..=k)
        .map(|j| t_ak_bruteforce(a, j, order, oracle))
        .collect::<Result<_>>()?;

    let form_i = IdentityReport::from_series(
        "conjecture-form-i",
        params(),
        k,
        &conjecture_form_i(&f, &brute, k),
        started,
    );
    let started = Instant::now();
    let pred_ii = conjecture_form_ii(&f, &brute, a, k);
    let form_ii = IdentityReport::from_series("conjecture-form-ii", params(), k, &(&pred_ii - &brute[k]), started);
    let started = Instant::now();
    let pred_iii = conjecture_form_iii(&f, &brute, a, k);
    let form_iii = IdentityReport::from_series("conjecture-form-iii", params(), k, &(&pred_iii - &brute[k]), started);

    let started = Instant::now();
    let mut predicted: Vec<Series> = brute[..a].to_vec();
    for j in a..=k {
        predicted.push(conjecture_form_ii(&f, &brute, a, j));
    }
    let mut residual: Vec<(usize, usize, Rational)> = Vec::new();
    for j in a..=k {
        let diff = &predicted[j] - &conjecture_form_iii(&f, &brute, a, j);
        residual.extend(diff.coeffs().iter().enumerate().map(|(n, c)| (n, j, c.clone())));
    }
    let closed = conjecture_form_i(&f, &predicted, k);
    residual.extend(closed.coeffs().iter().enumerate().map(|(n, c)| (n, k, c.clone())));
    let equivalence = IdentityReport::new("conjecture-equivalence", params(), residual, started);

    Ok(ConjectureReport {
        form_i,
        form_ii,
        form_iii,
        equivalence,
    })
}

/// `|S_n(1324)| = |S_{n−1}(1324)| + Σ_{a,k} |S_{n,k}^{a<n}(1324)|` for
/// `2 <= n <= order`; the residual is indexed by `n` with `k = 0`.
pub fn g_identity_check(order: usize, oracle: &CountOracle) -> Result<IdentityReport> {
    let started = Instant::now();
    let mut residual = Vec::new();
    for n in 2..=order {
        let here = oracle.table(n)?;
        let prev = oracle.table(n - 1)?;
        let rhs = &prev.total + here.class_sum();
        residual.push((n, 0, q(here.total.clone()) - q(rhs)));
    }
    Ok(IdentityReport::new("g-identity", [("order", json!(order))], residual, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<BigInt> {
        s.integer_coeffs().unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn f_coefficients() {
        assert_eq!(ints(&f_series(8)), big(&[0, 1, 2, 6, 22, 91, 408, 1938, 9614]));
        assert_eq!(primitive_count(5).unwrap(), BigUint::from(22u32));
        assert!(primitive_count(1).is_err());
    }

    #[test]
    fn f_matches_primitive_enumeration() {
        let oracle = CountOracle::in_memory();
        let f = f_series(8);
        for n in 2..=9 {
            assert_eq!(*f.coeff(n - 1), q(oracle.table(n).unwrap().count(1, 1)), "n={n}");
        }
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(a_nk_recurrence(4, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(a_nk_recurrence(4, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(a_nk_recurrence(6, 3).unwrap(), BigUint::from(30u32));
        assert!(a_nk_recurrence(4, 1).is_err());
        assert!(a_nk_recurrence(4, 4).is_err());
        assert!(a_nk_recurrence(2, 1).is_err());
    }

    #[test]
    fn recurrence_series_and_enumeration_agree() {
        let oracle = CountOracle::in_memory();
        for k in 1..=8 {
            let s = t1k_series(k, 9);
            for n in 2..=9 {
                let brute = oracle.table(n).unwrap().count(1, k);
                assert_eq!(*s.coeff(n), q(brute.clone()), "series n={n} k={k}");
                if k >= 2 && k < n {
                    assert_eq!(a_nk_recurrence(n, k).unwrap(), brute, "recurrence n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn t1k_examples() {
        assert_eq!(*t1k_series(1, 6).coeff(2), q(1));
        assert_eq!(*t1k_series(2, 6).coeff(4), q(4));
        assert_eq!(*t1k_series(3, 6).coeff(4), q(1));
        let f3 = f_series(6).pow(3).unwrap();
        assert_eq!(*f3.coeff(5), q(30));
    }

    #[test]
    fn g1_matches_slices() {
        let g1 = g1_series(8, 8);
        assert_eq!(*g1.coeff(2, 1), q(1));
        assert_eq!(*g1.coeff(4, 2), q(4));
        for k in 1..=8 {
            assert_eq!(g1.t_slice(k), t1k_series(k, 8), "k={k}");
        }
        assert!(g1.t_slice(0).is_zero());
    }

    #[test]
    fn g2_examples_and_routes() {
        let a = g2_from_square(9, 9).unwrap();
        let b = g2_from_t_derivative(9, 9).unwrap();
        assert_eq!(a, b);
        let g2 = g2_series(9, 9).unwrap();
        assert_eq!(*g2.coeff(3, 1), q(1));
        assert_eq!(*g2.coeff(4, 1), q(3));
        assert_eq!(*g2.coeff(7, 3), q(60));
        g2.assert_integral().unwrap();
    }

    #[test]
    fn g2_matches_enumeration() {
        let oracle = CountOracle::in_memory();
        let g2 = g2_series(9, 8).unwrap();
        for n in 0..=9 {
            for k in 1..=8 {
                let brute = if n >= 1 { oracle.table(n).unwrap().count(2, k) } else { BigUint::zero() };
                assert_eq!(*g2.coeff(n, k), q(brute), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn t2k_examples() {
        assert_eq!(t2k_series(0, 6), Series::monomial(2, q(1), 6));
        assert_eq!(*t2k_series(1, 6).coeff(3), q(1));
        assert_eq!(*t2k_series(3, 8).coeff(7), q(60));
        let g2 = g2_series(9, 6).unwrap();
        for k in 1..=6 {
            assert_eq!(t2k_series(k, 9), g2.t_slice(k), "k={k}");
        }
    }

    #[test]
    fn bruteforce_series() {
        let oracle = CountOracle::in_memory();
        assert_eq!(t_ak_bruteforce(3, 0, 6, &oracle).unwrap(), Series::monomial(3, q(2), 6));
        assert_eq!(t_ak_bruteforce(1, 0, 6, &oracle).unwrap(), Series::monomial(1, q(1), 6));
        assert_eq!(t_ak_bruteforce(2, 1, 6, &oracle).unwrap(), t2k_series(1, 6));
        assert_eq!(t_ak_bruteforce(1, 0, 0, &oracle).unwrap(), Series::zero(0));
        assert!(t_ak_bruteforce(0, 1, 6, &oracle).is_err());
    }

    #[test]
    fn conjecture_small_cases() {
        let oracle = CountOracle::in_memory();
        for (a, k) in [(1, 1), (1, 4), (2, 2), (2, 4), (3, 3), (3, 4)] {
            let r = conjecture_check(a, k, 9, &oracle).unwrap();
            for rep in r.reports() {
                assert!(rep.pass, "{rep}");
            }
        }
        assert!(conjecture_check(3, 2, 9, &oracle).is_err());
    }

    #[test]
    fn form_ii_reduces_to_the_t2k_formula() {
        let f = f_series(9);
        let t: Vec<Series> = (0..=5).map(|k| t2k_series(k, 9)).collect();
        for k in 2..=5 {
            assert_eq!(conjecture_form_ii(&f, &t, 2, k), t[k], "k={k}");
            assert_eq!(conjecture_form_iii(&f, &t, 2, k), t[k], "k={k}");
        }
    }

    #[test]
    fn wrong_inputs_leave_a_residual() {
        let f = f_series(8);
        let mut t: Vec<Series> = (0..=3).map(|k| t2k_series(k, 8)).collect();
        t[3] = &t[3] + &Series::monomial(8, q(1), 8);
        let r = conjecture_form_i(&f, &t, 3);
        assert!(!r.is_zero());
        assert_eq!(*r.coeff(8), q(1));
    }

    #[test]
    fn g_identity_small() {
        let oracle = CountOracle::in_memory();
        let r = g_identity_check(8, &oracle).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.residual.len(), 7);
        let t4 = oracle.table(4).unwrap();
        assert_eq!(t4.count_a(1), BigUint::from(11u32));
        assert_eq!(t4.count_a(2), BigUint::from(4u32));
        assert_eq!(t4.count_a(3), BigUint::from(2u32));
    }

    #[test]
    fn report_json_shape() {
        let mut s = Series::zero(2);
        s = &s + &Series::monomial(1, BigRational::new(BigInt::from(1), BigInt::from(2)), 2);
        let r = IdentityReport::from_series("demo", [("a", json!(1))], 3, &s, Instant::now());
        assert!(!r.pass);
        let v = r.canonical_json();
        assert_eq!(
            v.to_string(),
            r#"{"identity":"demo","params":{"a":1},"pass":false,"residual":[[0,3,"0"],[1,3,"1/2"],[2,3,"0"]]}"#
        );
        assert!(r.to_json().get("millis").is_some());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(3, 4), BigUint::zero());
    }
}
