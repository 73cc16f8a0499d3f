//! Truncated formal power series in `x`, and in `(x, t)`, over any exact
//! coefficient ring.
//!
//! A series of order `N` knows the coefficients of `x^0 ..= x^N`. Binary
//! operations return the minimum of the operand orders; nothing is ever
//! padded. Operations that shift exponents adjust the order accordingly:
//! multiplying by `x^j` raises it by `j`, differentiating lowers it by one.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("geometric inverse needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("cannot differentiate a series of order 0")]
    OrderTooLow,
    #[error("coefficient of x^{n} t^{k} is not an integer: {value}")]
    NonIntegral { n: usize, k: usize, value: String },
}

/// Coefficient ring. Any exact numeric type with the ring operations and a
/// conversion from small integers qualifies.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_u64(v: u64) -> Self;
}

impl<T> Coefficient for T
where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + FromPrimitive
        + Send
        + Sync,
{
    fn from_u64(v: u64) -> Self {
        <T as FromPrimitive>::from_u64(v).expect("small integer fits the coefficient type")
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// `coeffs[i]` is the coefficient of `x^i`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series knows at least its constant term");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, C::one(), order)
    }

    /// `c x^exp`, truncated at `order`.
    pub fn monomial(exp: usize, c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c;
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// `None` past the truncation order.
    pub fn get(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeff(&self, n: usize) -> &C {
        self.get(n).expect("coefficient within truncation order")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Multiplication by `x^j`; the order rises by `j`.
    pub fn mul_x_pow(&self, j: usize) -> Self {
        let mut coeffs = vec![C::zero(); j];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        if exponent < 0 {
            return Err(SeriesError::NegativeExponent(exponent));
        }
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = exponent as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Formal derivative; the order drops by one.
    pub fn dx(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        Ok(TruncatedSeries {
            coeffs: (1..=self.order())
                .map(|n| self.coeffs[n].clone() * C::from_u64(n as u64))
                .collect(),
        })
    }

    /// `1 / (1 - u)` for `u` with zero constant term.
    pub fn geometric_inverse(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order();
        let mut r: Vec<C> = Vec::with_capacity(order + 1);
        r.push(C::one());
        for n in 1..=order {
            let mut acc = C::zero();
            for i in 1..=n {
                acc = acc + self.coeffs[i].clone() * r[n - i].clone();
            }
            r.push(acc);
        }
        Ok(TruncatedSeries { coeffs: r })
    }
}

impl<C: Coefficient> Add for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;

    fn add(self, rhs: Self) -> TruncatedSeries<C> {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |n| self.coeffs[n].clone() + rhs.coeffs[n].clone())
    }
}

impl<C: Coefficient> Sub for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;

    fn sub(self, rhs: Self) -> TruncatedSeries<C> {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_fn(order, |n| self.coeffs[n].clone() - rhs.coeffs[n].clone())
    }
}

impl<C: Coefficient> Mul for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;

    fn mul(self, rhs: Self) -> TruncatedSeries<C> {
        let order = self.order().min(rhs.order());
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl<C: Coefficient> Neg for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;

    fn neg(self) -> TruncatedSeries<C> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<C: Coefficient + Display> Display for TruncatedSeries<C> {
    /// `c0 + c1*x + c2*x^2 + ...`, zero terms omitted, unit coefficients
    /// written as the bare power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let power = match n {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{n}"),
            };
            if n == 0 {
                f.write_str(magnitude)?;
            } else if magnitude == "1" {
                f.write_str(&power)?;
            } else {
                write!(f, "{magnitude}*{power}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<C: Debug> Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("order", &(self.coeffs.len() - 1))
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// Coefficients `c[n][k]` of `x^n t^k` for `n <= x_order`, `k <= t_order`.
#[derive(Clone, PartialEq)]
pub struct BivariateSeries<C> {
    x_order: usize,
    t_order: usize,
    // row-major by n
    coeffs: Vec<C>,
}

impl<C: Coefficient> BivariateSeries<C> {
    pub fn zero(x_order: usize, t_order: usize) -> Self {
        BivariateSeries {
            x_order,
            t_order,
            coeffs: vec![C::zero(); (x_order + 1) * (t_order + 1)],
        }
    }

    pub fn from_fn(x_order: usize, t_order: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut coeffs = Vec::with_capacity((x_order + 1) * (t_order + 1));
        for n in 0..=x_order {
            for k in 0..=t_order {
                coeffs.push(f(n, k));
            }
        }
        BivariateSeries {
            x_order,
            t_order,
            coeffs,
        }
    }

    pub fn one(x_order: usize, t_order: usize) -> Self {
        Self::from_fn(x_order, t_order, |n, k| if n == 0 && k == 0 { C::one() } else { C::zero() })
    }

    /// `s(x) t^0`.
    pub fn from_x_series(s: &TruncatedSeries<C>, t_order: usize) -> Self {
        Self::from_fn(s.order(), t_order, |n, k| if k == 0 { s.coeffs[n].clone() } else { C::zero() })
    }

    /// `Σ_k t^k slices[k](x)` for `k <= t_order`; the x order is the minimum
    /// over the slices used.
    pub fn from_t_slices(slices: &[TruncatedSeries<C>]) -> Self {
        assert!(!slices.is_empty(), "at least one t-slice");
        let x_order = slices.iter().map(TruncatedSeries::order).min().expect("non-empty");
        Self::from_fn(x_order, slices.len() - 1, |n, k| slices[k].coeffs[n].clone())
    }

    pub fn x_order(&self) -> usize {
        self.x_order
    }

    pub fn t_order(&self) -> usize {
        self.t_order
    }

    fn idx(&self, n: usize, k: usize) -> usize {
        n * (self.t_order + 1) + k
    }

    /// `None` past either truncation order.
    pub fn get(&self, n: usize, k: usize) -> Option<&C> {
        (n <= self.x_order && k <= self.t_order).then(|| &self.coeffs[self.idx(n, k)])
    }

    pub fn coeff(&self, n: usize, k: usize) -> &C {
        self.get(n, k).expect("coefficient within truncation orders")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of `t^k` as a series in `x`.
    pub fn t_slice(&self, k: usize) -> TruncatedSeries<C> {
        TruncatedSeries::from_fn(self.x_order, |n| self.coeff(n, k).clone())
    }

    pub fn truncate(&self, x_order: usize, t_order: usize) -> Self {
        let (x_order, t_order) = (x_order.min(self.x_order), t_order.min(self.t_order));
        Self::from_fn(x_order, t_order, |n, k| self.coeff(n, k).clone())
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        BivariateSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            ..*self
        }
    }

    /// Multiplication by `x^j`; the x order rises by `j`.
    pub fn mul_x_pow(&self, j: usize) -> Self {
        Self::from_fn(self.x_order + j, self.t_order, |n, k| {
            if n < j {
                C::zero()
            } else {
                self.coeff(n - j, k).clone()
            }
        })
    }

    /// Multiplication by `t^j`; the t order rises by `j`.
    pub fn mul_t_pow(&self, j: usize) -> Self {
        Self::from_fn(self.x_order, self.t_order + j, |n, k| {
            if k < j {
                C::zero()
            } else {
                self.coeff(n, k - j).clone()
            }
        })
    }

    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        if exponent < 0 {
            return Err(SeriesError::NegativeExponent(exponent));
        }
        let mut result = Self::one(self.x_order, self.t_order);
        for _ in 0..exponent {
            result = &result * self;
        }
        Ok(result)
    }

    /// `∂/∂x`; the x order drops by one.
    pub fn dx(&self) -> Result<Self, SeriesError> {
        if self.x_order == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        Ok(Self::from_fn(self.x_order - 1, self.t_order, |n, k| {
            self.coeff(n + 1, k).clone() * C::from_u64(n as u64 + 1)
        }))
    }

    /// `∂/∂t`; the t order drops by one.
    pub fn dt(&self) -> Result<Self, SeriesError> {
        if self.t_order == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        Ok(Self::from_fn(self.x_order, self.t_order - 1, |n, k| {
            self.coeff(n, k + 1).clone() * C::from_u64(k as u64 + 1)
        }))
    }

    /// `1 / (1 - u)` for `u` with zero constant term.
    pub fn geometric_inverse(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0, 0).is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        // r = 1 + u r, solved in increasing (n, k)
        let mut r = Self::zero(self.x_order, self.t_order);
        for n in 0..=self.x_order {
            for k in 0..=self.t_order {
                let mut acc = if n == 0 && k == 0 { C::one() } else { C::zero() };
                for i in 0..=n {
                    for j in 0..=k {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let u = self.coeff(i, j);
                        if !u.is_zero() {
                            acc = acc + u.clone() * r.coeff(n - i, k - j).clone();
                        }
                    }
                }
                let at = r.idx(n, k);
                r.coeffs[at] = acc;
            }
        }
        Ok(r)
    }

    /// Substitutes `t = 1`.
    pub fn eval_t_one(&self) -> TruncatedSeries<C> {
        TruncatedSeries::from_fn(self.x_order, |n| {
            (0..=self.t_order).fold(C::zero(), |acc, k| acc + self.coeff(n, k).clone())
        })
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let (xo, to) = (self.x_order.min(rhs.x_order), self.t_order.min(rhs.t_order));
        Self::from_fn(xo, to, |n, k| f(self.coeff(n, k), rhs.coeff(n, k)))
    }
}

impl<C: Coefficient> Add for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn add(self, rhs: Self) -> BivariateSeries<C> {
        self.zip(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Coefficient> Sub for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn sub(self, rhs: Self) -> BivariateSeries<C> {
        self.zip(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Coefficient> Mul for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn mul(self, rhs: Self) -> BivariateSeries<C> {
        let (xo, to) = (self.x_order.min(rhs.x_order), self.t_order.min(rhs.t_order));
        let mut out = BivariateSeries::<C>::zero(xo, to);
        for i in 0..=xo {
            for j in 0..=to {
                let a = self.coeff(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..=xo - i {
                    for q in 0..=to - j {
                        let b = rhs.coeff(p, q);
                        if !b.is_zero() {
                            let at = out.idx(i + p, j + q);
                            out.coeffs[at] = out.coeffs[at].clone() + a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn neg(self) -> BivariateSeries<C> {
        self.scalar_mul(&-C::one())
    }
}

impl<C: Coefficient + Display> BivariateSeries<C> {
    /// Coefficient table: one row per power of `x`, one column per power of `t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for k in 0..=self.t_order {
            out.push_str(&format!(",t^{k}"));
        }
        out.push('\n');
        for n in 0..=self.x_order {
            out.push_str(&n.to_string());
            for k in 0..=self.t_order {
                out.push(',');
                out.push_str(&self.coeff(n, k).to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl<C: Debug> Debug for BivariateSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateSeries")
            .field("x_order", &self.x_order)
            .field("t_order", &self.t_order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn integral(n: usize, k: usize, c: &BigRational) -> Result<BigInt, SeriesError> {
    if c.is_integer() {
        Ok(c.to_integer())
    } else {
        Err(SeriesError::NonIntegral {
            n,
            k,
            value: c.to_string(),
        })
    }
}

impl TruncatedSeries<BigRational> {
    /// Coefficients as integers, failing on the first non-integral one.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>, SeriesError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| integral(n, 0, c))
            .collect()
    }
}

impl BivariateSeries<BigRational> {
    pub fn integer_coeff(&self, n: usize, k: usize) -> Result<BigInt, SeriesError> {
        integral(n, k, self.coeff(n, k))
    }

    pub fn assert_integral(&self) -> Result<(), SeriesError> {
        for n in 0..=self.x_order {
            for k in 0..=self.t_order {
                self.integer_coeff(n, k)?;
            }
        }
        Ok(())
    }
}


#[cfg(test)]
mod laws {
    use super::*;
    use proptest::prelude::*;

    type S = TruncatedSeries<BigRational>;
    type B = BivariateSeries<BigRational>;

    fn rat() -> impl Strategy<Value = BigRational> {
        (-9i64..=9, 1i64..=5).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
    }

    fn series() -> impl Strategy<Value = S> {
        proptest::collection::vec(rat(), 1..=11).prop_map(S::new)
    }

    fn bivariate() -> impl Strategy<Value = B> {
        (0usize..4, 0usize..4).prop_flat_map(|(xo, to)| {
            proptest::collection::vec(rat(), (xo + 1) * (to + 1))
                .prop_map(move |cs| B::from_fn(xo, to, |n, k| cs[n * (to + 1) + k].clone()))
        })
    }

    proptest! {
        #[test]
        fn commutative_and_associative(a in series(), b in series(), c in series()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn distributive(a in series(), b in series(), c in series()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.truncate(b.order()));
        }

        #[test]
        fn derivation_rule(a in series(), b in series()) {
            prop_assume!(a.order() >= 1 && b.order() >= 1);
            let lhs = (&a * &b).dx().unwrap();
            let rhs = &(&a.dx().unwrap() * &b) + &(&a * &b.dx().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bivariate_ring_laws(a in bivariate(), b in bivariate(), c in bivariate()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn bivariate_derivations(a in bivariate(), b in bivariate()) {
            prop_assume!(a.x_order() >= 1 && b.x_order() >= 1);
            let lhs = (&a * &b).dx().unwrap();
            let rhs = &(&a.dx().unwrap() * &b) + &(&a * &b.dx().unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
