//! Exact multivariate rational-polynomial arithmetic over the fixed variable
//! set {m, k, q, a, b, r, p, sigma}, with arbitrary-precision rational
//! coefficients. This is the substrate for the coefficient identity catalog:
//! "identity" here means the residual is the zero polynomial, not small.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Number of variables in the fixed ring.
pub const NVARS: usize = 8;

/// Variables of the coefficient algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    M = 0,
    K = 1,
    Q = 2,
    A = 3,
    B = 4,
    R = 5,
    P = 6,
    Sigma = 7,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::M,
        Var::K,
        Var::Q,
        Var::A,
        Var::B,
        Var::R,
        Var::P,
        Var::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::M => "m",
            Var::K => "k",
            Var::Q => "q",
            Var::A => "a",
            Var::B => "b",
            Var::R => "r",
            Var::P => "p",
            Var::Sigma => "sigma",
        }
    }
}

type Exps = [u32; NVARS];

/// A multivariate polynomial with exact rational coefficients.
/// Monomials are kept in canonical (lexicographic exponent) order and zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exps, BigRational>,
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big_ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// All-zero evaluation point, to be filled in per variable.
pub fn zero_point() -> [BigRational; NVARS] {
    std::array::from_fn(|_| BigRational::zero())
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NVARS], c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(big(n))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::int(1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Variables that actually occur in this polynomial.
    pub fn support(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|e| e[*v as usize] > 0))
            .collect()
    }

    /// Exact evaluation at a full point (one rational per ring variable).
    pub fn eval(&self, point: &[BigRational; NVARS]) -> BigRational {
        let mut total = BigRational::zero();
        // memoized powers per variable, grown on demand
        let mut powers: Vec<Vec<BigRational>> = point
            .iter()
            .map(|x| vec![BigRational::one(), x.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= exp as usize {
                    let next = &cache[cache.len() - 1] * &point[i];
                    cache.push(next);
                }
                term *= &cache[exp as usize];
            }
            total += term;
        }
        total
    }

    /// Substitute a rational function for one variable. The result is in
    /// general a rational function even when `self` is a polynomial.
    pub fn substitute(&self, v: Var, rf: &Rf) -> Rf {
        // collect coefficients by power of v, then Horner in rf
        let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = *e;
            let pow = rest[v as usize];
            rest[v as usize] = 0;
            by_power
                .entry(pow)
                .or_insert_with(Poly::zero)
                .insert_term(rest, c.clone());
        }
        let max_pow = by_power.keys().next_back().copied().unwrap_or(0);
        let mut acc = Rf::from(Poly::zero());
        for pow in (0..=max_pow).rev() {
            acc = acc * rf.clone();
            if let Some(coeff) = by_power.get(&pow) {
                acc = acc + Rf::from(coeff.clone());
            }
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = [0; NVARS];
                for i in 0..NVARS {
                    e[i] = e1[i] + e2[i];
                }
                out.insert_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, -c.clone()))
            .collect();
        Poly { terms }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let has_vars = e.iter().any(|&x| x > 0);
            if !mag.is_one() || !has_vars {
                write!(f, "{}", mag)?;
                if has_vars {
                    write!(f, "*")?;
                }
            }
            let mut sep = false;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if sep {
                    write!(f, "*")?;
                }
                sep = true;
                write!(f, "{}", Var::ALL[i].name())?;
                if exp > 1 {
                    write!(f, "^{}", exp)?;
                }
            }
        }
        Ok(())
    }
}

/// Quotient of two polynomials. No normalization is attempted; equality is
/// decided by cross-multiplication, which is exact.
#[derive(Debug, Clone)]
pub struct Rf {
    num: Poly,
    den: Poly,
}

impl From<Poly> for Rf {
    fn from(p: Poly) -> Self {
        Rf {
            num: p,
            den: Poly::int(1),
        }
    }
}

impl Rf {
    pub fn var(v: Var) -> Self {
        Poly::var(v).into()
    }

    pub fn int(n: i64) -> Self {
        Poly::int(n).into()
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Poly::constant(big_ratio(n, d)).into()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn pow(&self, n: u32) -> Rf {
        Rf {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Residual of `self - other` with denominators cleared:
    /// num1*den2 - num2*den1. Zero iff the two agree wherever both are defined.
    pub fn cross_difference(&self, other: &Rf) -> Poly {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }

    pub fn equals(&self, other: &Rf) -> bool {
        self.cross_difference(other).is_zero()
    }

    pub fn substitute(&self, v: Var, rf: &Rf) -> Rf {
        self.num.substitute(v, rf) / self.den.substitute(v, rf)
    }

    /// Exact evaluation; errors if the denominator vanishes at the point.
    pub fn eval(&self, point: &[BigRational; NVARS]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Domain(
                "rational function denominator vanishes at evaluation point".into(),
            ));
        }
        Ok(self.num.eval(point) / d)
    }

    /// Variables occurring in numerator or denominator.
    pub fn support(&self) -> Vec<Var> {
        let mut vars = self.num.support();
        for v in self.den.support() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        vars
    }
}

impl Add for Rf {
    type Output = Rf;
    fn add(self, other: Rf) -> Rf {
        Rf {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }
}

impl Sub for Rf {
    type Output = Rf;
    fn sub(self, other: Rf) -> Rf {
        Rf {
            num: &(&self.num * &other.den) - &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }
}

impl Mul for Rf {
    type Output = Rf;
    fn mul(self, other: Rf) -> Rf {
        Rf {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }
}

impl Div for Rf {
    type Output = Rf;
    fn div(self, other: Rf) -> Rf {
        // division by the zero rational function is a caller bug
        assert!(
            !other.num.is_zero(),
            "division by identically zero rational function"
        );
        Rf {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        }
    }
}

impl Neg for Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for Rf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::int(1) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Rf {
        Rf::var(Var::M)
    }
    fn k() -> Rf {
        Rf::var(Var::K)
    }

    #[test]
    fn arithmetic_basics() {
        // (m + k)^2 = m^2 + 2mk + k^2
        let lhs = (m() + k()).pow(2);
        let rhs = m().pow(2) + Rf::int(2) * m() * k() + k().pow(2);
        assert!(lhs.equals(&rhs));
        assert!(!lhs.equals(&(m().pow(2) + k().pow(2))));
    }

    #[test]
    fn substitution_composes() {
        // substitute k := m/(m+1) into k*(k+1) and compare with direct build
        let expr = k() * (k() + Rf::int(1));
        let g = m() / (m() + Rf::int(1));
        let sub = expr.substitute(Var::K, &g);
        let direct = g.clone() * (g + Rf::int(1));
        assert!(sub.equals(&direct));
    }

    #[test]
    fn eval_exact() {
        let expr = (m() + k()) / k();
        let mut point = zero_point();
        point[Var::M as usize] = big(3);
        point[Var::K as usize] = big_ratio(1, 2);
        let val = expr.eval(&point).unwrap();
        assert_eq!(val, big(7));
    }

    #[test]
    fn zero_denominator_rejected() {
        let expr = m() / k();
        let point = zero_point();
        assert!(expr.eval(&point).is_err());
    }

    #[test]
    fn display_residual() {
        let p = &Poly::var(Var::M) - &Poly::var(Var::M);
        assert_eq!(p.to_string(), "0");
    }
}
