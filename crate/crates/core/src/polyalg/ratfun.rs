use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::{Coefficient, Poly, Render};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Reduced rational function `num / den` over a coefficient ring.
///
/// Canonical at construction: `gcd(num, den) = 1` and the innermost leading
/// rational of `den` is 1. Two `RatFun`s are mathematically equal exactly
/// when they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun<C> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coefficient> RatFun<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides numerator"), den.exact_div(&g).expect("gcd divides denominator"))
        };
        Ok(Self::normalize_unit(num, den))
    }

    /// Caller guarantees `num` and `den` are coprime and `den != 0`.
    fn from_coprime(num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        Self::normalize_unit(num, den)
    }

    fn normalize_unit(num: Poly<C>, den: Poly<C>) -> Self {
        let inv = Coefficient::leading_rational(&den).recip();
        RatFun { num: Coefficient::scale(&num, &inv), den: Coefficient::scale(&den, &inv) }
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// `self^e`; powers of a reduced fraction stay reduced.
    pub fn pow(&self, e: u32) -> Self {
        Self::from_coprime(self.num.pow(e), self.den.pow(e))
    }

    /// Quotient-rule derivative in the outer variable.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::new(n, d).expect("square of a nonzero denominator is nonzero")
    }

    /// Maps coefficients through a ring homomorphism (e.g. substituting a
    /// marker variable) and re-canonicalises.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Result<RatFun<D>> {
        RatFun::new(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    /// Power-series coefficients `c₀ … c_{n_max}` around 0.
    ///
    /// Uses the linear recurrence `Σ_j den_j c_{n-j} = num_n`.
    pub fn series(&self, n_max: usize) -> Result<Vec<C>> {
        let inv0 = self.den.coeff(0).inverse().ok_or(Error::NotPowerSeries)?;
        let den = self.den.coeffs();
        let mut out: Vec<C> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = self.num.coeff(n);
            for (j, d) in den.iter().enumerate().take(n + 1).skip(1) {
                if !d.is_zero() {
                    acc = acc.minus(&d.times(&out[n - j]));
                }
            }
            out.push(acc.times(&inv0));
        }
        Ok(out)
    }
}

impl RatFun<Rational> {
    pub fn eval(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.eval(at);
        if Coefficient::is_zero(&d) {
            return Err(Error::Pole(at.to_string()));
        }
        Ok(self.num.eval(at) / d)
    }
}

impl RatFun<Poly<Rational>> {
    /// Substitutes a value for the inner variable `w`.
    pub fn at_w(&self, w: &Rational) -> Result<RatFun<Rational>> {
        self.map_coeffs(|c| c.eval(w))
    }
}

/// Equality by cross-multiplication, independent of canonical forms.
pub fn rat_equal<C: Coefficient>(a: &RatFun<C>, b: &RatFun<C>) -> bool {
    &a.num * &b.den == &b.num * &a.den
}

impl<C: Coefficient> From<Poly<C>> for RatFun<C> {
    fn from(p: Poly<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: Coefficient> Add for &RatFun<C> {
    type Output = RatFun<C>;
    fn add(self, rhs: &RatFun<C>) -> RatFun<C> {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        RatFun::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl<C: Coefficient> Sub for &RatFun<C> {
    type Output = RatFun<C>;
    fn sub(self, rhs: &RatFun<C>) -> RatFun<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &RatFun<C> {
    type Output = RatFun<C>;
    fn mul(self, rhs: &RatFun<C>) -> RatFun<C> {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl<C: Coefficient> Div for &RatFun<C> {
    type Output = Result<RatFun<C>>;
    fn div(self, rhs: &RatFun<C>) -> Result<RatFun<C>> {
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<C: Coefficient> Neg for &RatFun<C> {
    type Output = RatFun<C>;
    fn neg(self) -> RatFun<C> {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Coefficient> Add for RatFun<C> {
    type Output = RatFun<C>;
    fn add(self, rhs: RatFun<C>) -> RatFun<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for RatFun<C> {
    type Output = RatFun<C>;
    fn sub(self, rhs: RatFun<C>) -> RatFun<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for RatFun<C> {
    type Output = RatFun<C>;
    fn mul(self, rhs: RatFun<C>) -> RatFun<C> {
        &self * &rhs
    }
}

impl<C: Coefficient + Render> fmt::Display for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<C: Coefficient> fmt::Debug for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RatFun").field("num", &self.num).field("den", &self.den).finish()
    }
}
