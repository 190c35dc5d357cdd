//! Sparse multivariate polynomials over the rationals in the variables
//! `x`, `y`, `z`, plus univariate polynomials in a formal variable `t`.
//!
//! Every value is immutable once built and kept in normal form: no stored
//! zero coefficients, terms keyed by [`Monomial`] in graded lexicographic
//! order with `x > y > z`. Two polynomials are equal iff their term maps are.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Default bound on the total degree of checked products.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Builds a rational from a numerator and a nonzero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("total degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
}

/// One of the three coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        self == Degree::NegInfinity
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Exponent triple `x^a y^b z^c`, ordered graded-lex with `x > y > z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Monomial([ex, ey, ez])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> [u32; 3] {
        self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn with_exponent(&self, v: Var, e: u32) -> Self {
        let mut out = self.0;
        out[v.index()] = e;
        Monomial(out)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Every monomial in the given variables with total degree in `lo..=hi`,
    /// in ascending graded-lex order.
    pub fn all_up_to(vars: &[Var], lo: u32, hi: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in lo..=hi {
            collect_degree(vars, d, Monomial::ONE, &mut out);
        }
        out.sort();
        out
    }

    /// Every monomial in the given variables of total degree exactly `d`.
    pub fn homogeneous(vars: &[Var], d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        collect_degree(vars, d, Monomial::ONE, &mut out);
        out.sort();
        out
    }
}

fn collect_degree(vars: &[Var], d: u32, acc: Monomial, out: &mut Vec<Monomial>) {
    match vars {
        [] => {
            if d == 0 {
                out.push(acc)
            }
        }
        [last] => out.push(acc.with_exponent(*last, d)),
        [first, rest @ ..] => {
            for e in 0..=d {
                collect_degree(rest, d - e, acc.with_exponent(*first, e), out);
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `x`, `y`, `z` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in iter {
            *terms.entry(m).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Graded-lex largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Highest exponent of `v` among the terms.
    pub fn degree_in(&self, v: Var) -> Degree {
        self.terms
            .keys()
            .map(|m| m.exponent(v))
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn partial(&self, v: Var) -> Polynomial {
        let i = v.index();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[i];
            if e == 0 {
                return None;
            }
            let mut ex = m.0;
            ex[i] -= 1;
            Some((Monomial(ex), c * int(e as i64)))
        });
        // Distinct monomials stay distinct after lowering one exponent.
        Polynomial {
            terms: terms.collect(),
        }
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: Var, k: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == k)
                .map(|(m, c)| (m.with_exponent(v, 0), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exponent(v);
                if e > 0 {
                    t *= num_traits::pow(point[v.index()].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut n = n;
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

    /// Product that refuses results above `cap` in total degree.
    pub fn checked_mul(&self, rhs: &Polynomial, cap: u32) -> Result<Polynomial, PolyError> {
        check_cap(self.total_degree() + rhs.total_degree(), cap)?;
        Ok(self * rhs)
    }

    pub fn checked_pow(&self, n: u32, cap: u32) -> Result<Polynomial, PolyError> {
        if let Degree::Finite(d) = self.total_degree() {
            if n > 0 {
                check_cap(Degree::Finite(d.saturating_mul(n)), cap)?;
            }
        }
        Ok(self.pow(n))
    }

    /// Simultaneous substitution; unbound variables are left fixed.
    pub fn substitute(&self, bindings: &Substitution) -> Polynomial {
        let images = bindings.images();
        let mut powers: [HashMap<u32, Polynomial>; 3] = Default::default();
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            for v in Var::ALL {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let i = v.index();
                let p = powers[i]
                    .entry(e)
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitution that refuses images whose total degree would exceed `cap`.
    pub fn checked_substitute(
        &self,
        bindings: &Substitution,
        cap: u32,
    ) -> Result<Polynomial, PolyError> {
        let images = bindings.images();
        for m in self.terms.keys() {
            let mut d = Degree::Finite(0);
            for v in Var::ALL {
                let e = m.exponent(v);
                if e > 0 {
                    let di = images[v.index()].total_degree();
                    let scaled = match di {
                        Degree::Finite(k) => Degree::Finite(k.saturating_mul(e)),
                        Degree::NegInfinity => Degree::NegInfinity,
                    };
                    d = d + scaled;
                }
            }
            check_cap(d, cap)?;
        }
        Ok(self.substitute(bindings))
    }

    /// Exchanges `x` and `y`.
    pub fn swap_xy(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial([m.0[1], m.0[0], m.0[2]]), c.clone()))
                .collect(),
        }
    }
}

fn check_cap(d: Degree, cap: u32) -> Result<(), PolyError> {
    match d {
        Degree::Finite(degree) if degree > cap => Err(PolyError::DegreeCapExceeded { degree, cap }),
        _ => Ok(()),
    }
}

/// Images for a simultaneous substitution `var -> polynomial`.
#[derive(Debug, Clone, Default)]
pub struct Substitution {
    images: [Option<Polynomial>; 3],
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, v: Var, p: Polynomial) -> Self {
        self.images[v.index()] = Some(p);
        self
    }

    pub fn get(&self, v: Var) -> Option<&Polynomial> {
        self.images[v.index()].as_ref()
    }

    fn images(&self) -> [Polynomial; 3] {
        [Var::X, Var::Y, Var::Z].map(|v| self.get(v).cloned().unwrap_or_else(|| Polynomial::var(v)))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a += c;
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        Polynomial { terms }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// `n` or `n/d` for a reduced rational.
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// A univariate polynomial in the formal variable `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `t`.
    pub fn t() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn monomial(k: u32, c: Rational) -> Self {
        Self::from_terms([(k, c)])
    }

    /// Coefficients by ascending exponent: `coeffs[k]` multiplies `t^k`.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(coeffs: I) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(k, c)| (k as u32, c)))
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(iter: I) -> Self {
        let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
        for (k, c) in iter {
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.coeffs
            .keys()
            .next_back()
            .map_or(Degree::NegInfinity, |&k| Degree::Finite(k))
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms by ascending exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&u32, &Rational)> {
        self.coeffs.iter()
    }

    pub fn eval_rational(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .map(|(&k, c)| c * num_traits::pow(at.clone(), k as usize))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `g(at)`: `t` replaced by the argument polynomial.
    pub fn eval_at(&self, at: &Polynomial) -> Polynomial {
        let Some(top) = self.degree().finite() else {
            return Polynomial::zero();
        };
        // Horner from the top coefficient down.
        let mut acc = Polynomial::zero();
        for k in (0..=top).rev() {
            acc = &(&acc * at) + &Polynomial::constant(self.coeff(k));
        }
        acc
    }

    pub fn checked_eval_at(&self, at: &Polynomial, cap: u32) -> Result<Polynomial, PolyError> {
        if let (Degree::Finite(k), Degree::Finite(d)) = (self.degree(), at.total_degree()) {
            check_cap(Degree::Finite(k.saturating_mul(d)), cap)?;
        }
        Ok(self.eval_at(at))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_terms(
            self.coeffs
                .iter()
                .filter(|(&k, _)| k > 0)
                .map(|(&k, c)| (k - 1, c * int(k as i64))),
        )
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}
