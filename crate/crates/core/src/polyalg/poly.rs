use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::Rational;

/// An exact coefficient ring: ℚ, or a polynomial ring over one.
///
/// Every ring used here is ℚ[x₁,…,xₖ], so the units are exactly the nonzero
/// rationals. `leading_rational` exposes the innermost leading coefficient,
/// which is what canonical forms normalise to 1.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn leading_rational(&self) -> Rational;
    /// `self / rhs` when the quotient exists in the ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
    /// Greatest common divisor normalised to `leading_rational() == 1`,
    /// or zero when both inputs are zero.
    fn gcd(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn leading_rational(&self) -> Rational {
        self.clone()
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn gcd(&self, rhs: &Self) -> Self {
        if Zero::is_zero(self) && Zero::is_zero(rhs) {
            Zero::zero()
        } else {
            One::one()
        }
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Dense univariate polynomial; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^degree`
    pub fn monomial(c: C, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// `1 - c·x`
    pub fn one_minus(c: C) -> Self {
        Self::new(vec![C::one(), c.negate()])
    }

    pub fn from_rationals<I: IntoIterator<Item = Rational>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(C::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn eval(&self, at: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc.times(at).plus(c))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn scale_by(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Truncates to the terms of degree `< len`.
    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.coeffs.iter().take(len).cloned().collect())
    }

    /// Pseudo-remainder of `self` by `divisor` (nonzero).
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let d = divisor.degree().expect("pseudo_rem by zero polynomial");
        let lc = divisor.lead();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < d {
                break;
            }
            let t = r.lead();
            r = &r.scale_by(&lc) - &divisor.scale_by(&t).shift(dr - d);
        }
        r
    }

    /// Gcd of the coefficients, normalised.
    pub fn content(&self) -> C {
        self.coeffs.iter().fold(C::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, scaled so the leading rational is 1.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let p = Self::new(
            self.coeffs.iter().map(|a| a.exact_div(&c).expect("content divides every coefficient")).collect(),
        );
        p.normalized()
    }

    /// Scaled so that the innermost leading rational is 1.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lr = Coefficient::leading_rational(self);
        let inv = lr.recip();
        Self::new(self.coeffs.iter().map(|a| a.scale(&inv)).collect())
    }
}

impl<C: Coefficient> Coefficient for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        Poly::constant(C::from_rational(r))
    }
    fn scale(&self, r: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.scale(r)).collect())
    }
    fn leading_rational(&self) -> Rational {
        match self.coeffs.last() {
            Some(c) => c.leading_rational(),
            None => Zero::zero(),
        }
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let d = rhs.degree()?;
        let lc = rhs.lead();
        let mut rem = self.clone();
        let mut quot = vec![C::zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(dr) = rem.degree() {
            if dr < d {
                return None;
            }
            let t = rem.lead().exact_div(&lc)?;
            rem = &rem - &rhs.scale_by(&t).shift(dr - d);
            quot[dr - d] = t;
        }
        Some(Poly::new(quot))
    }

    /// Primitive polynomial remainder sequence; content handled recursively.
    fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.normalized();
        }
        if rhs.is_zero() {
            return self.normalized();
        }
        let content = self.content().gcd(&rhs.content());
        let (mut f, mut g) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.primitive_part(), rhs.primitive_part())
        } else {
            (rhs.primitive_part(), self.primitive_part())
        };
        while !g.is_zero() {
            let r = f.pseudo_rem(&g);
            f = g;
            g = r.primitive_part();
        }
        f.scale_by(&content).normalized()
    }

    fn inverse(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            self.coeffs[0].inverse().map(Poly::constant)
        } else {
            None
        }
    }
}

impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.plus(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.minus(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.negate(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl<C: Coefficient> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Poly::new(out)
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { coeffs: self.coeffs.iter().map(|c| c.negate()).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coefficient> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> { (&self).$m(&rhs) }
        }
        impl<C: Coefficient> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &Poly<C>) -> Poly<C> { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<C: Coefficient> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

/// Renders with variable names by nesting depth: the outermost variable is
/// the one passed in, inner rings use the next names in `VARS`.
pub trait Render {
    fn render(&self, depth: usize) -> String;
    fn is_atomic(&self) -> bool;
}

const VARS: [&str; 4] = ["z", "w", "u", "v"];

impl Render for Rational {
    fn render(&self, _depth: usize) -> String {
        self.to_string()
    }
    fn is_atomic(&self) -> bool {
        true
    }
}

impl<C: Coefficient + Render> Render for Poly<C> {
    fn render(&self, depth: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let var = VARS[depth.min(VARS.len() - 1)];
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.render(depth + 1);
            let cs = if c.is_atomic() { cs } else { format!("({cs})") };
            terms.push(match i {
                0 => cs,
                1 if *c == C::one() => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if *c == C::one() => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            });
        }
        terms.join(" + ")
    }
    fn is_atomic(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1 && self.coeffs.len() <= 1
    }
}

impl<C: Coefficient + Render> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// `ℚ[w]` coefficients for bivariate objects in (z, w).
pub type WPoly = Poly<Rational>;
