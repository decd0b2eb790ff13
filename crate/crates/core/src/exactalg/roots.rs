use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};

/// Square-free decomposition by Yun's algorithm.
///
/// Returns the non-constant monic factors `a_i` with their multiplicities
/// `i`, so that `p = lc(p) * prod a_i^i` with the `a_i` square-free and
/// pairwise coprime.
pub fn square_free_decomposition(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = Polynomial::gcd(&p, &dp);
    let mut b = p.exact_div(&a0);
    let c = dp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = Polynomial::gcd(&b, &d);
        b = b.exact_div(&a);
        let c = d.exact_div(&a);
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// True iff `f` is a square in the function field over an algebraically
/// closed field: zero, or every irreducible factor of numerator and
/// denominator has even multiplicity. Constants are ignored.
pub fn is_square_geom(f: &RationalFunction) -> bool {
    if f.is_zero() {
        return true;
    }
    let even = |p: &Polynomial| square_free_decomposition(p).iter().all(|(_, m)| m % 2 == 0);
    even(f.num()) && even(f.den())
}

/// Rational roots of a polynomial with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    /// Sorted ascending by root.
    pub roots: Vec<(Rational, usize)>,
    /// Multiplicities sum to the degree: the polynomial splits over Q.
    pub split: bool,
}

/// All rational roots of `p`, found on the primitive integer form of each
/// square-free factor.
pub fn rational_roots(p: &Polynomial) -> Result<RootSet> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let mut roots = Vec::new();
    for (factor, mult) in square_free_decomposition(p) {
        for r in simple_rational_roots(&factor) {
            roots.push((r, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    Ok(RootSet { roots, split: found == deg })
}

/// Roots of a square-free polynomial.
fn simple_rational_roots(p: &Polynomial) -> Vec<Rational> {
    let mut roots = Vec::new();
    let zeros = p.low_order();
    if zeros > 0 {
        roots.push(Rational::zero());
    }
    let q = Polynomial::new(p.coeffs()[zeros..].to_vec());
    match q.degree() {
        None | Some(0) => {}
        Some(1) => roots.push(-q.coeff(0) / q.coeff(1)),
        Some(2) => {
            let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
            let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
            if let Some(s) = rational_sqrt(&disc) {
                let two_a = &a + &a;
                roots.push((-&b + &s) / &two_a);
                if !s.is_zero() {
                    roots.push((-&b - &s) / &two_a);
                }
            }
        }
        Some(_) => {
            let ints = primitive_integer_coeffs(&q);
            let lead = ints.last().expect("nonzero").abs();
            let constant = ints[0].abs();
            for num in divisors(&constant) {
                for den in divisors(&lead) {
                    if num.gcd(&den) != BigInt::one() {
                        continue;
                    }
                    for cand in [Rational::new(num.clone(), den.clone()), Rational::new(-num.clone(), den.clone())] {
                        if q.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
    }
    roots
}

/// Exact square root of a nonnegative rational, when it exists.
pub(crate) fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// Integer coefficients with content 1 proportional to `p`.
fn primitive_integer_coeffs(p: &Polynomial) -> Vec<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

/// Positive divisors of a positive integer, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let e = n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| int(x)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn yun_multiplicities() {
        // 3 (z-1)^3 (z+2)^2 z
        let f = (&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * p(&[0, 3]);
        let sf = square_free_decomposition(&f);
        assert_eq!(sf, vec![(p(&[0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
    }

    #[test]
    fn square_detection_examples() {
        // (3z-2)^2 / z^2
        assert!(is_square_geom(&rf(&[4, -12, 9], &[0, 0, 1])));
        // (5z^2 - 8z + 4) / z^2
        assert!(!is_square_geom(&rf(&[4, -8, 5], &[0, 0, 1])));
        assert!(!is_square_geom(&rf(&[0, 4], &[1])));
        assert!(is_square_geom(&RationalFunction::zero()));
        // sign of the leading coefficient is irrelevant
        assert!(is_square_geom(&rf(&[0, 0, -4], &[1])));
    }

    #[test]
    fn root_examples() {
        let r = rational_roots(&p(&[2, -3, 1])).unwrap();
        assert_eq!(r.roots, vec![(int(1), 1), (int(2), 1)]);
        assert!(r.split);
        let r = rational_roots(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(r.roots, vec![(int(-1), 1), (int(1), 1)]);
        let r = rational_roots(&p(&[1, 0, 1])).unwrap();
        assert!(r.roots.is_empty() && !r.split);
        assert_eq!(rational_roots(&Polynomial::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn roots_with_multiplicity_and_high_degree() {
        // (2z - 1)^2 (z + 3) (z^2 - 2) z
        let f = &(&(&p(&[-1, 2]).pow(2) * &p(&[3, 1])) * &p(&[-2, 0, 1])) * &p(&[0, 1]);
        let r = rational_roots(&f).unwrap();
        assert_eq!(r.roots, vec![(int(-3), 1), (int(0), 1), (rat(1, 2), 2)]);
        assert!(!r.split);
        // cubic with three rational roots: (3z-1)(z+2)(z-5)
        let g = &(&p(&[-1, 3]) * &p(&[2, 1])) * &p(&[-5, 1]);
        let r = rational_roots(&g).unwrap();
        assert_eq!(r.roots, vec![(int(-2), 1), (rat(1, 3), 1), (int(5), 1)]);
        assert!(r.split);
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let r = rational_roots(&p(&[7])).unwrap();
        assert!(r.roots.is_empty() && r.split);
    }
}
