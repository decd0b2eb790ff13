use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Element of the rational function field `Q(z)`.
///
/// Kept in canonical form: numerator and denominator coprime, denominator
/// monic, and the zero function stored as `0/1`. Equality is therefore
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() || num.is_constant() {
            return Self::with_monic_den(num, den);
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// For `num`, `den` already known to be coprime.
    pub(crate) fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading().expect("nonzero denominator");
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    /// `(z - a)^k` for any integer `k`.
    pub fn power_of_linear(a: &Rational, k: i64) -> Self {
        let base = Polynomial::linear_factor(a).pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Self::from_poly(base)
        } else {
            Self { num: Polynomial::one(), den: base }
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    /// Value at `a`; fails if `a` is a pole.
    pub fn eval(&self, a: &Rational) -> Result<Rational> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(a.clone()));
        }
        Ok(self.num.eval(a) / d)
    }

    /// Order of vanishing at `a` (negative for poles); `None` for zero.
    pub fn valuation_at(&self, a: &Rational) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.order_at(a) as i64 - self.den.order_at(a) as i64)
    }

    /// Pole order at `a`, zero where the function is regular.
    pub fn pole_order_at(&self, a: &Rational) -> i64 {
        self.valuation_at(a).map_or(0, |v| (-v).max(0))
    }

    /// `deg(num) - deg(den)`: the pole order at infinity. `None` for zero.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().expect("nonzero denominator") as i64)
    }

    /// Coefficient of `(z - a)^k` in the Laurent expansion at `a`.
    ///
    /// `k = -1` is the residue, `k = 0` the value at a regular point.
    pub fn laurent_coeff(&self, a: &Rational, k: i64) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let (n0, d0) = (self.num.order_at(a), self.den.order_at(a));
        let lead = n0 as i64 - d0 as i64;
        if k < lead {
            return Rational::zero();
        }
        let idx = (k - lead) as usize;
        let n = self.num.taylor_coeffs(a, n0 + idx + 1);
        let d = self.den.taylor_coeffs(a, d0 + idx + 1);
        let nc = &n[n0..];
        let dc = &d[d0..];
        let d_inv = dc[0].recip();
        // power series division n/d up to order idx
        let mut series: Vec<Rational> = Vec::with_capacity(idx + 1);
        for m in 0..=idx {
            let mut acc = nc.get(m).cloned().unwrap_or_else(Rational::zero);
            for i in 1..=m.min(dc.len() - 1) {
                acc -= &dc[i] * &series[m - i];
            }
            series.push(acc * &d_inv);
        }
        series.pop().expect("series has idx + 1 terms")
    }

    pub fn residue(&self, a: &Rational) -> Rational {
        self.laurent_coeff(a, -1)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self { num: self.num.pow(n), den: self.den.pow(n) }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // both factors are canonical, so cross-cancelling suffices
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

fn cancel(num: &Polynomial, den: &Polynomial) -> (Polynomial, Polynomial) {
    if den.is_constant() || num.is_constant() {
        return (num.clone(), den.clone());
    }
    let g = Polynomial::gcd(num, den);
    if g.is_constant() {
        (num.clone(), den.clone())
    } else {
        (num.exact_div(&g), den.exact_div(&g))
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction { (&self).$m(&rhs) }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};
    use alloc::vec;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| int(x)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    // (z^2 + 2z - 1) / z^2
    fn delta() -> RationalFunction {
        rf(&[-1, 2, 1], &[0, 0, 1])
    }

    #[test]
    fn canonical_form() {
        let f = rf(&[0, 6], &[0, 2]);
        assert_eq!(f, RationalFunction::constant(int(3)));
        let g = rf(&[1], &[2, 2]);
        assert_eq!(g.den(), &poly(&[1, 1]));
        assert_eq!(g.num(), &Polynomial::constant(rat(1, 2)));
        assert_eq!(RationalFunction::new(poly(&[1]), Polynomial::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(delta().eval(&int(1)).unwrap(), int(2));
        assert_eq!(RationalFunction::zero().eval(&int(5)).unwrap(), int(0));
        assert_eq!(rf(&[1], &[0, 1]).eval(&int(0)), Err(Error::PoleAtPoint(int(0))));
    }

    #[test]
    fn laurent_examples() {
        // -1/z^2 + 2/z + 1
        assert_eq!(delta().laurent_coeff(&int(0), -2), int(-1));
        assert_eq!(delta().laurent_coeff(&int(0), -1), int(2));
        assert_eq!(delta().laurent_coeff(&int(0), 0), int(1));
        assert_eq!(delta().laurent_coeff(&int(0), -3), int(0));
        assert_eq!(RationalFunction::constant(int(3)).residue(&int(0)), int(0));
        assert_eq!(rf(&[1], &[0, 1]).residue(&int(0)), int(1));
    }

    #[test]
    fn laurent_at_shifted_point() {
        // 1/((z-1)^2 (z+1)) at 1: 1/(w^2 (2 + w)) = (1/2) w^-2 - (1/4) w^-1 + (1/8) - ...
        let f = RationalFunction::new(Polynomial::one(), &poly(&[-1, 1]).pow(2) * &poly(&[1, 1]))
            .unwrap();
        assert_eq!(f.laurent_coeff(&int(1), -2), rat(1, 2));
        assert_eq!(f.laurent_coeff(&int(1), -1), rat(-1, 4));
        assert_eq!(f.laurent_coeff(&int(1), 0), rat(1, 8));
        assert_eq!(f.laurent_coeff(&int(1), 1), rat(-1, 16));
    }

    #[test]
    fn valuations() {
        let f = delta();
        assert_eq!(f.valuation_at(&int(0)), Some(-2));
        assert_eq!(f.pole_order_at(&int(0)), 2);
        assert_eq!(f.pole_order_at(&int(1)), 0);
        assert_eq!(f.degree_at_infinity(), Some(0));
        assert_eq!(RationalFunction::zero().valuation_at(&int(0)), None);
        let g = RationalFunction::power_of_linear(&int(2), -3);
        assert_eq!(g.valuation_at(&int(2)), Some(-3));
        assert_eq!(g.degree_at_infinity(), Some(-3));
    }

    #[test]
    fn field_ops() {
        let f = delta();
        let g = rf(&[1, 1], &[3, 0, 1]);
        assert_eq!(&(&f + &g) - &g, f);
        assert_eq!((&f * &g).checked_div(&g).unwrap(), f);
        assert_eq!(&f * &f.inv().unwrap(), RationalFunction::one());
        assert!(RationalFunction::zero().inv().is_none());
        let h = RationalFunction::from_poly(Polynomial::new(vec![int(0), int(3)]));
        assert_eq!(h.checked_div(&RationalFunction::z()).unwrap(), RationalFunction::constant(int(3)));
    }
}
