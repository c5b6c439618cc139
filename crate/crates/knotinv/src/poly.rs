//! Exact Laurent-polynomial arithmetic in `q = t^{1/2}`.
//!
//! Exponents are stored *doubled*: the key `e` stands for `q^e = t^{e/2}`,
//! so half-integer powers of `t` (which show up for two-component links)
//! stay exact integers internally. Coefficients are arbitrary-precision
//! from the start; state sums on moderate diagrams overflow 64-bit
//! intermediates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for evaluated quantities (derivatives at
/// `t = 1`, `w3`, lambda_2 differences). Always reduced, denominator > 0.
pub type Rational = BigRational;

/// Render a rational as the canonical `num/den` string used in JSON output.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("derivative order {0} not supported (only 0..=3)")]
    UnsupportedDerivativeOrder(u32),
}

/// Laurent polynomial in `q = t^{1/2}` with `BigInt` coefficients and
/// doubled-exponent keys. The term map never stores a zero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HalfIntLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfIntLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// The single term `c * q^e` (`e` is the doubled exponent).
    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Build from `(doubled exponent, coefficient)` pairs; repeated
    /// exponents accumulate, zeros are pruned.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    /// `q^e` as a convenience for tests and construction code.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    /// `q - q^{-1}`, i.e. `t^{1/2} - t^{-1/2}` (the Conway variable).
    pub fn q_minus_qinv() -> Self {
        Self::from_terms([(1i64, 1i32), (-1, -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Doubled-exponent support bounds `(min, max)`; `None` for the zero poly.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?;
        let hi = self.terms.keys().next_back()?;
        Some((*lo, *hi))
    }

    /// Multiply by `c * q^e`.
    pub fn mul_monomial(&self, e: i64, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + e, v * c)).collect(),
        }
    }

    /// Substitute `q -> q^{-1}` (negate every exponent). For polynomials in
    /// integer `t`-powers this is `t -> t^{-1}`, the mirror substitution.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    /// True when every doubled exponent is even, i.e. the polynomial lies in
    /// `Z[t, t^{-1}]`.
    pub fn has_integer_t_powers(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Exact division, returning `None` when `self` is not a multiple of
    /// `divisor`. Long division from the top term; when `self` is a true
    /// multiple, every quotient exponent lies in
    /// `[lo(self)-lo(div), hi(self)-hi(div)]`, so descent below that window
    /// means indivisibility.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (slo, _) = self.support().unwrap();
        let (dlo, dhi) = divisor.support().unwrap();
        let min_e = slo - dlo;
        let dlead = divisor.terms.get(&dhi).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((_, rhi)) = rem.support() {
            let e = rhi - dhi;
            if e < min_e {
                return None;
            }
            let rlead = rem.terms.get(&rhi).unwrap();
            let (q, r) = num_integer::Integer::div_rem(rlead, dlead);
            if r.is_zero() && !q.is_zero() {
                let piece = divisor.mul_monomial(e, &q);
                rem = &rem - &piece;
                quot.add_term(e, q);
            } else {
                return None;
            }
        }
        Some(quot)
    }

    /// Value at `t = 1` (sum of coefficients) as an exact rational.
    pub fn eval_at_one(&self) -> Rational {
        let sum: BigInt = self.terms.values().cloned().sum();
        Rational::from_integer(sum)
    }

    /// The `k`-th derivative with respect to `t`, evaluated at `t = 1`:
    /// `sum_e c_e * (e/2)(e/2 - 1)...(e/2 - k + 1)`, exact. Only orders
    /// 0..=3 are accepted.
    pub fn derivative_at_one(&self, order: u32) -> Result<Rational, PolyError> {
        if order > 3 {
            return Err(PolyError::UnsupportedDerivativeOrder(order));
        }
        let mut num = BigInt::zero();
        for (e, c) in &self.terms {
            let mut f = BigInt::one();
            for j in 0..order {
                f *= BigInt::from(e - 2 * i64::from(j));
            }
            num += c * f;
        }
        let den = BigInt::from(1i64 << order); // 2^order
        Ok(Rational::new(num, den))
    }

    /// Canonical report rendering: terms in decreasing `t`-exponent, integer
    /// exponents written plainly and half-integer ones as fractions, e.g.
    /// `-t^4 + t^3 + t` or `-t^(5/2) - t^(1/2)`.
    pub fn t_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.magnitude();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = !mag.is_one() || *e == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if *e != 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push('t');
                if *e != 2 {
                    if e % 2 == 0 {
                        out.push_str(&format!("^{}", e / 2));
                    } else {
                        out.push_str(&format!("^({}/2)", e));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for HalfIntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HalfIntLaurent({})", self.t_string())
    }
}

impl fmt::Display for HalfIntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.t_string())
    }
}

impl Add for &HalfIntLaurent {
    type Output = HalfIntLaurent;
    fn add(self, rhs: &HalfIntLaurent) -> HalfIntLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &HalfIntLaurent {
    type Output = HalfIntLaurent;
    fn sub(self, rhs: &HalfIntLaurent) -> HalfIntLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &HalfIntLaurent {
    type Output = HalfIntLaurent;
    fn neg(self) -> HalfIntLaurent {
        HalfIntLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &HalfIntLaurent {
    type Output = HalfIntLaurent;
    fn mul(self, rhs: &HalfIntLaurent) -> HalfIntLaurent {
        let mut out = HalfIntLaurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for HalfIntLaurent {
            type Output = HalfIntLaurent;
            fn $method(self, rhs: HalfIntLaurent) -> HalfIntLaurent {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for HalfIntLaurent {
    type Output = HalfIntLaurent;
    fn neg(self) -> HalfIntLaurent {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(e: i64) -> HalfIntLaurent {
        HalfIntLaurent::q_pow(e)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = q(2);
        let b = a.clone().neg();
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn disjoint_supports_add() {
        let a = &q(1) + &q(0);
        let sum = &a + &q(-1);
        assert_eq!(sum, HalfIntLaurent::from_terms([(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn difference_of_squares() {
        let p = HalfIntLaurent::q_minus_qinv();
        let m = HalfIntLaurent::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(&p * &m, HalfIntLaurent::from_terms([(2, 1), (-2, -1)]));
    }

    #[test]
    fn square_of_conway_variable() {
        let p = HalfIntLaurent::q_minus_qinv();
        assert_eq!(
            &p * &p,
            HalfIntLaurent::from_terms([(2, 1), (0, -2), (-2, 1)])
        );
    }

    #[test]
    fn derivative_of_t_is_one() {
        // p = q^2 = t, k = 1 -> 1
        assert_eq!(q(2).derivative_at_one(1).unwrap(), rat(1, 1));
    }

    // Right-trefoil Jones polynomial -q^8 + q^6 + q^2 = -t^4 + t^3 + t.
    // Expected derivative values frozen from term-by-term expansion:
    //   k=2: -4*3 + 3*2 + 0 = -6;  k=3: -4*3*2 + 3*2*1 + 0 = -18.
    #[test]
    fn trefoil_jones_derivatives() {
        let p = HalfIntLaurent::from_terms([(8, -1), (6, 1), (2, 1)]);
        assert_eq!(p.derivative_at_one(0).unwrap(), rat(1, 1));
        assert_eq!(p.derivative_at_one(1).unwrap(), rat(0, 1));
        assert_eq!(p.derivative_at_one(2).unwrap(), rat(-6, 1));
        assert_eq!(p.derivative_at_one(3).unwrap(), rat(-18, 1));
    }

    #[test]
    fn derivative_order_rejected() {
        assert_eq!(
            q(2).derivative_at_one(4),
            Err(PolyError::UnsupportedDerivativeOrder(4))
        );
    }

    #[test]
    fn half_integer_derivative() {
        // p = q = t^{1/2}: dp/dt at 1 is 1/2.
        assert_eq!(q(1).derivative_at_one(1).unwrap(), rat(1, 2));
    }

    #[test]
    fn exact_division_roundtrip() {
        let delta = HalfIntLaurent::from_terms([(2, -1), (-2, -1)]);
        let f = HalfIntLaurent::from_terms([(3, 2), (1, -1), (0, 5)]);
        let prod = &f * &delta;
        assert_eq!(prod.div_exact(&delta).unwrap(), f);
        let not_multiple = &prod + &HalfIntLaurent::one();
        assert!(not_multiple.div_exact(&delta).is_none());
    }

    #[test]
    fn t_string_rendering() {
        let p = HalfIntLaurent::from_terms([(8, -1), (6, 1), (2, 1)]);
        assert_eq!(p.t_string(), "-t^4 + t^3 + t");
        let hopf = HalfIntLaurent::from_terms([(5, -1), (1, -1)]);
        assert_eq!(hopf.t_string(), "-t^(5/2) - t^(1/2)");
        let c = HalfIntLaurent::from_terms([(2, -3), (0, 3), (-2, -1)]);
        assert_eq!(c.t_string(), "-3*t + 3 - t^-1");
        assert_eq!(HalfIntLaurent::zero().t_string(), "0");
    }

    /// Test-side oracle: formal d/dt on integer-t-power polynomials.
    /// t^m -> m t^(m-1) in doubled-exponent form.
    fn formal_t_derivative(p: &HalfIntLaurent) -> HalfIntLaurent {
        let mut out = HalfIntLaurent::zero();
        for (e, c) in p.terms() {
            assert!(e % 2 == 0);
            out.add_term(e - 2, c * BigInt::from(e / 2));
        }
        out
    }

    fn arb_poly(half: bool) -> impl Strategy<Value = HalfIntLaurent> {
        let step = if half { 1 } else { 2 };
        proptest::collection::vec((-6i64..=6, -9i64..=9), 0..6).prop_map(move |v| {
            HalfIntLaurent::from_terms(v.into_iter().map(|(e, c)| (e * step, c)))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(true), b in arb_poly(true), c in arb_poly(true)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &HalfIntLaurent::zero(), a.clone());
            prop_assert_eq!(&a * &HalfIntLaurent::one(), a.clone());
        }

        #[test]
        fn derivative_linearity(a in arb_poly(true), b in arb_poly(true), k in 0u32..=3) {
            let lhs = (&a + &b).derivative_at_one(k).unwrap();
            let rhs = a.derivative_at_one(k).unwrap() + b.derivative_at_one(k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn leibniz_order_one(a in arb_poly(true), b in arb_poly(true)) {
            let d1 = (&a * &b).derivative_at_one(1).unwrap();
            let d2 = a.derivative_at_one(1).unwrap() * b.eval_at_one()
                + a.eval_at_one() * b.derivative_at_one(1).unwrap();
            prop_assert_eq!(d1, d2);
        }

        #[test]
        fn integer_powers_match_formal_differentiation(a in arb_poly(false), k in 0u32..=3) {
            let mut d = a.clone();
            for _ in 0..k {
                d = formal_t_derivative(&d);
            }
            let expected = d.eval_at_one();
            prop_assert_eq!(a.derivative_at_one(k).unwrap(), expected);
        }
    }
}
