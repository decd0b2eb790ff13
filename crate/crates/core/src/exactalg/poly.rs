use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;

/// Univariate polynomial over the rationals, coefficients in ascending order.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `z - a`.
    pub fn linear_factor(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * a + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Polynomial::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (dd..=nd).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] * &lc_inv;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k - dd + i] -= t;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Exact quotient; debug-asserts that the remainder vanishes.
    pub fn exact_div(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if (a.is_constant() && !a.is_zero()) || (b.is_constant() && !b.is_zero()) {
            return Polynomial::one();
        }
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn pow(&self, mut n: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The polynomial `w ↦ p(a + w)`.
    pub fn shift(&self, a: &Rational) -> Polynomial {
        let mut c = self.coeffs.clone();
        if a.is_zero() {
            return Polynomial { coeffs: c };
        }
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Polynomial::new(c)
    }

    /// The first `count` coefficients of `w ↦ p(a + w)` (fewer if the
    /// degree is smaller), by repeated synthetic division by `z - a`.
    pub fn taylor_coeffs(&self, a: &Rational, count: usize) -> Vec<Rational> {
        if a.is_zero() {
            return self.coeffs.iter().take(count).cloned().collect();
        }
        let mut rest = self.coeffs.clone();
        let mut out = Vec::with_capacity(count.min(rest.len()));
        while out.len() < count && !rest.is_empty() {
            let mut carry = Rational::zero();
            for c in rest.iter_mut().rev() {
                let v = &*c + &(&carry * a);
                carry = v.clone();
                *c = v;
            }
            out.push(rest.remove(0));
        }
        out
    }

    /// Order of vanishing at `z = 0`; zero polynomial reports 0.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Largest `k` with `(z - a)^k` dividing `self`; 0 for the zero polynomial.
    pub fn order_at(&self, a: &Rational) -> usize {
        if self.is_zero() {
            return 0;
        }
        if a.is_zero() {
            return self.low_order();
        }
        let mut rest = self.coeffs.clone();
        let mut k = 0;
        loop {
            let mut carry = Rational::zero();
            for c in rest.iter_mut().rev() {
                let v = &*c + &(&carry * a);
                carry = v.clone();
                *c = v;
            }
            if !rest.remove(0).is_zero() {
                return k;
            }
            k += 1;
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() || k == 0 {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};
    use alloc::string::ToString;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[-1, 0, 3, 2]);
        let b = p(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        // (z-1)(z-2) and (z-1)(z+3)
        let a = p(&[2, -3, 1]);
        let b = p(&[-3, 2, 1]);
        assert_eq!(Polynomial::gcd(&a, &b), p(&[-1, 1]));
        assert!(Polynomial::gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
    }

    #[test]
    fn shift_and_order() {
        // (z-2)^2 (z+1)
        let f = &p(&[-2, 1]).pow(2) * &p(&[1, 1]);
        assert_eq!(f.order_at(&int(2)), 2);
        assert_eq!(f.order_at(&int(-1)), 1);
        assert_eq!(f.order_at(&rat(1, 2)), 0);
        assert_eq!(f.shift(&int(3)).eval(&int(0)), f.eval(&int(3)));
        for a in [int(2), rat(-1, 3), int(0)] {
            let full = f.shift(&a);
            assert_eq!(f.taylor_coeffs(&a, 10), full.coeffs().to_vec());
            assert_eq!(f.taylor_coeffs(&a, 2), full.coeffs()[..2].to_vec());
            assert_eq!(full.shift(&-a.clone()), f);
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 2, 1]).to_string(), "z^2 + 2z - 1");
        assert_eq!(Polynomial::constant(rat(-1, 2)).to_string(), "-1/2");
        assert_eq!(Polynomial::new(alloc::vec![int(0), rat(3, 2)]).to_string(), "(3/2)z");
    }
}
