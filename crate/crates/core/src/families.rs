//! Constructors for the classified nilpotent families, linear conjugation
//! `T^-1 H T`, and structural predicates for each classified shape.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dependence::{linear_dependence, origin_check};
use crate::jacobian::{LinearMap, PolyMap};
use crate::kernel::express_in;
use crate::linalg::RatMatrix;
use crate::parser::{format_uni, parse_rational, parse_uni, ParseError};
use crate::poly::{
    fmt_rational, int, Degree, Monomial, PolyError, Polynomial, Rational, Substitution, UniPoly,
    Var, DEFAULT_DEGREE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("g(0) must be 0")]
    GNotVanishingAtZero,
    #[error("g must be nonconstant")]
    ConstantG,
    #[error("u(y) must be nonconstant")]
    ConstantU,
    #[error("h must involve x")]
    HIndependentOfX,
    #[error("h must not involve z")]
    HDependsOnZ,
    #[error("conjugating matrix is singular")]
    SingularMatrix,
    #[error("parameter {field}: {source}")]
    Parse {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Degree(#[from] PolyError),
}

/// Data of the classified family: the univariate `g` and the scalars
/// `a, v1, c0` (nonzero) and `l1, l2, l2tilde`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct FamilyParams {
    pub g: UniPoly,
    pub a: Rational,
    pub v1: Rational,
    pub c0: Rational,
    pub l1: Rational,
    pub l2: Rational,
    pub l2tilde: Rational,
}

/// JSON form: every field is a string in the expression grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawParams {
    g: String,
    a: String,
    v1: String,
    c0: String,
    l1: String,
    l2: String,
    l2tilde: String,
}

impl TryFrom<RawParams> for FamilyParams {
    type Error = FamilyError;

    fn try_from(raw: RawParams) -> Result<Self, FamilyError> {
        let r = |field: &'static str, s: &str| {
            parse_rational(s).map_err(|source| FamilyError::Parse { field, source })
        };
        let params = FamilyParams {
            g: parse_uni(&raw.g).map_err(|source| FamilyError::Parse { field: "g", source })?,
            a: r("a", &raw.a)?,
            v1: r("v1", &raw.v1)?,
            c0: r("c0", &raw.c0)?,
            l1: r("l1", &raw.l1)?,
            l2: r("l2", &raw.l2)?,
            l2tilde: r("l2tilde", &raw.l2tilde)?,
        };
        params.validate()?;
        Ok(params)
    }
}

impl From<FamilyParams> for RawParams {
    fn from(p: FamilyParams) -> RawParams {
        RawParams {
            g: format_uni(&p.g),
            a: fmt_rational(&p.a),
            v1: fmt_rational(&p.v1),
            c0: fmt_rational(&p.c0),
            l1: fmt_rational(&p.l1),
            l2: fmt_rational(&p.l2),
            l2tilde: fmt_rational(&p.l2tilde),
        }
    }
}

impl FamilyParams {
    /// `g`, with `a = v1 = c0 = 1` and `l1 = l2 = l2tilde = 0`.
    pub fn simple(g: UniPoly) -> Self {
        FamilyParams {
            g,
            a: Rational::one(),
            v1: Rational::one(),
            c0: Rational::one(),
            l1: Rational::zero(),
            l2: Rational::zero(),
            l2tilde: Rational::zero(),
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        for (name, value) in [("a", &self.a), ("v1", &self.v1), ("c0", &self.c0)] {
            if value.is_zero() {
                return Err(FamilyError::ZeroParameter(name));
            }
        }
        if !self.g.coeff(0).is_zero() {
            return Err(FamilyError::GNotVanishingAtZero);
        }
        if self.g.degree() < Degree::Finite(1) {
            return Err(FamilyError::ConstantG);
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }

    /// Draws parameters: `g` of degree 1..=4 with `g(0) = 0`, lower
    /// coefficients from -2..=2 and a leading coefficient from
    /// {-2, -1, 1, 2}; `a, v1, c0` from {-2, -1, 1, 2}; `l1, l2` from
    /// -2..=2; `l2tilde` among the roots of `g` in -2..=2.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        const STARRED: [i64; 4] = [-2, -1, 1, 2];
        let starred = |rng: &mut R| int(*STARRED.choose(rng).expect("nonempty"));
        let deg = rng.random_range(1..=4u32);
        let mut terms = Vec::new();
        for k in 1..deg {
            terms.push((k, int(rng.random_range(-2..=2))));
        }
        terms.push((deg, starred(rng)));
        let g = UniPoly::from_terms(terms);
        let a = starred(rng);
        let v1 = starred(rng);
        let c0 = starred(rng);
        let l1 = int(rng.random_range(-2..=2));
        let l2 = int(rng.random_range(-2..=2));
        // H(0) = 0 forces g(l2tilde) = 0; 0 is always such a root.
        let roots: Vec<i64> = (-2..=2).filter(|&c| g.eval_rational(&int(c)).is_zero()).collect();
        let l2tilde = int(*roots.choose(rng).expect("g(0) = 0"));
        FamilyParams {
            g,
            a,
            v1,
            c0,
            l1,
            l2,
            l2tilde,
        }
    }

    /// The family vanishes at the origin exactly when `g(l2tilde) = 0`.
    pub fn vanishes_at_origin(&self) -> bool {
        self.g.eval_rational(&self.l2tilde).is_zero()
    }
}

fn uni_x(coeffs: &[&Rational], var: Var) -> Polynomial {
    Polynomial::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::ONE.with_exponent(var, k as u32), (*c).clone())),
    )
}

/// Shared construction; `s` is the variable carrying `b(s)`, `o` the other
/// plane variable. Returns `(g(a*o + b(s)), lin*z - a^-1 b'(s) g(..) - lin*l2*s, c0 g^2 + l2 g)`.
fn family_parts(p: &FamilyParams, s: Var, o: Var) -> Result<[Polynomial; 3], FamilyError> {
    p.validate()?;
    let cap = DEFAULT_DEGREE_CAP;
    let quad = &(&p.v1 * &p.c0) * &p.a;
    let b = uni_x(&[&p.l2tilde, &p.l1, &quad], s);
    let b_prime = uni_x(&[&p.l1, &(&quad * int(2))], s);
    let w = &Polynomial::var(o).scale(&p.a) + &b;
    let gw = p.g.checked_eval_at(&w, cap)?;
    let a_inv = Rational::one() / &p.a;
    let lin = &Polynomial::z().scale(&p.v1) - &Polynomial::var(s).scale(&(&p.v1 * &p.l2));
    let mixed = &lin - &b_prime.scale(&a_inv).checked_mul(&gw, cap)?;
    let quadratic = &gw.checked_mul(&gw, cap)?.scale(&p.c0) + &gw.scale(&p.l2);
    Ok([gw, mixed, quadratic])
}

/// `u = g(ay + b(x))`, `v = v1 z - a^-1 b'(x) u - v1 l2 x`, `h = c0 u^2 + l2 u`
/// with `b(x) = v1 c0 a x^2 + l1 x + l2tilde`.
pub fn theorem_3_3_family(p: &FamilyParams) -> Result<PolyMap, FamilyError> {
    let [u, v, h] = family_parts(p, Var::X, Var::Y)?;
    Ok(PolyMap::new(u, v, h))
}

/// The same family with the roles of `x` and `y` (and of `u` and `v`)
/// exchanged, `v1` playing the part of `u1`:
/// `u = u1 z - a^-1 b'(y) v - u1 l2 y`, `v = g(ax + b(y))`, `h = c0 v^2 + l2 v`.
pub fn corollary_3_7_family(p: &FamilyParams) -> Result<PolyMap, FamilyError> {
    let [g_part, z_part, h] = family_parts(p, Var::Y, Var::X)?;
    Ok(PolyMap::new(z_part, g_part, h))
}

/// `(u(y), c, h(x, y))` with `c != 0`, `u` nonconstant and `h` involving
/// `x`: nilpotent, independent, and not vanishing at the origin.
pub fn remark_2_2_family(u_of_y: &UniPoly, c: &Rational, h: &Polynomial) -> Result<PolyMap, FamilyError> {
    if c.is_zero() {
        return Err(FamilyError::ZeroParameter("c"));
    }
    if u_of_y.degree() < Degree::Finite(1) {
        return Err(FamilyError::ConstantU);
    }
    if h.depends_on(Var::Z) {
        return Err(FamilyError::HDependsOnZ);
    }
    if !h.depends_on(Var::X) {
        return Err(FamilyError::HIndependentOfX);
    }
    let u = u_of_y.checked_eval_at(&Polynomial::y(), DEFAULT_DEGREE_CAP)?;
    Ok(PolyMap::new(u, Polynomial::constant(c.clone()), h.clone()))
}

/// The coordinate swap `x <-> y`.
pub fn transposition() -> LinearMap {
    LinearMap::from_ints([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
}

/// The lower-triangular shear `(x, y, z) -> (x, c x + y, z)`.
pub fn shear(c: &Rational) -> LinearMap {
    let mut t = LinearMap::identity();
    t.rows[1][0] = c.clone();
    t
}

/// `T^-1 H T`: substitute the linear forms of `T`, then apply `T^-1` to
/// the component vector.
pub fn conjugate_linear(map: &PolyMap, t: &LinearMap) -> Result<PolyMap, FamilyError> {
    let inv = t.inverse().ok_or(FamilyError::SingularMatrix)?;
    let [fx, fy, fz] = t.forms();
    let sub = Substitution::new()
        .bind(Var::X, fx)
        .bind(Var::Y, fy)
        .bind(Var::Z, fz);
    let mut pulled = Vec::with_capacity(3);
    for c in map.components() {
        pulled.push(c.checked_substitute(&sub, DEFAULT_DEGREE_CAP)?);
    }
    Ok(PolyMap::from_components(inv.apply([&pulled[0], &pulled[1], &pulled[2]])))
}

pub fn conjugate_by_transposition(map: &PolyMap) -> PolyMap {
    PolyMap::new(map.v.swap_xy(), map.u.swap_xy(), map.h.swap_xy())
}

/// A classified shape or counterexample shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum ShapeId {
    T2_1,
    T2_4,
    T2_6,
    T3_3,
    T3_5,
    T3_11,
    C3_7,
    C3_8,
    R2_2,
}

impl ShapeId {
    pub const ALL: [ShapeId; 9] = [
        ShapeId::T2_1,
        ShapeId::T2_4,
        ShapeId::T2_6,
        ShapeId::T3_3,
        ShapeId::T3_5,
        ShapeId::T3_11,
        ShapeId::C3_7,
        ShapeId::C3_8,
        ShapeId::R2_2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeId::T2_1 => "T2_1",
            ShapeId::T2_4 => "T2_4",
            ShapeId::T2_6 => "T2_6",
            ShapeId::T3_3 => "T3_3",
            ShapeId::T3_5 => "T3_5",
            ShapeId::T3_11 => "T3_11",
            ShapeId::C3_7 => "C3_7",
            ShapeId::C3_8 => "C3_8",
            ShapeId::R2_2 => "R2_2",
        }
    }

    /// Human-readable form of the shape.
    pub fn description(self) -> &'static str {
        match self {
            ShapeId::T2_1 => "(u(x,y,z), v(h), h(x,y)), H(0)=0",
            ShapeId::T2_4 => "(u(x,y,z), v(u,h), h(x,y)), H(0)=0",
            ShapeId::T2_6 => "(u(x,y), v(u,h), h(x,y,z)), H(0)=0",
            ShapeId::T3_3 => "(u(x,y), v(x,y,z), h(x,y)), H(0)=0, independent, deg_y u or deg_y h prime",
            ShapeId::T3_5 => "(u(x,y), v(x,y,z), h(x,y)), H(0)=0, independent, gcd(deg_y u, deg_y h) <= 2",
            ShapeId::T3_11 => "(u(x,y), v(x,y,z), h(x,y)), H(0)=0, u homogeneous",
            ShapeId::C3_7 => "(u(x,y,z), v(x,y), h(x,y)), H(0)=0, independent, gcd(deg_x v, deg_x h) <= 2 or one prime",
            ShapeId::C3_8 => "(u(x,y,z), (a(y)x+b(y))^n, h(x,y)), H(0)=0, independent",
            ShapeId::R2_2 => "(u(y), c, h(x,y)), c != 0, u nonconstant, h involves x",
        }
    }
}

impl fmt::Display for ShapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown shape `{0}`")]
pub struct UnknownShape(pub String);

impl FromStr for ShapeId {
    type Err = UnknownShape;

    fn from_str(s: &str) -> Result<Self, UnknownShape> {
        ShapeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownShape(s.to_string()))
    }
}

/// One named structural or hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub shape: ShapeId,
    /// All checks hold.
    pub matches: bool,
    /// `H(0) = 0`, reported for every shape.
    pub origin: bool,
    pub checks: Vec<NamedCheck>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `p` is a polynomial in `q`, where `q` is free of `z`.
fn in_univariate_subalgebra(p: &Polynomial, q: &Polynomial) -> bool {
    if q.is_constant() {
        return p.is_constant();
    }
    let bound = p.total_degree().finite().unwrap_or(0);
    express_in(p, q, bound).is_ok()
}

/// `p` is a linear combination of `u^i h^j` with `i + j <= deg p`.
pub fn in_bivariate_subalgebra(p: &Polynomial, u: &Polynomial, h: &Polynomial) -> bool {
    if p.is_constant() {
        return true;
    }
    let bound = p.total_degree().finite().unwrap_or(0);
    let mut gens: Vec<Polynomial> = Vec::new();
    let u_pows: Vec<Polynomial> = powers(u, if u.is_constant() { 0 } else { bound });
    let h_pows: Vec<Polynomial> = powers(h, if h.is_constant() { 0 } else { bound });
    for (i, ui) in u_pows.iter().enumerate() {
        for hj in h_pows.iter().take(bound as usize + 1 - i) {
            let prod = ui * hj;
            if prod.total_degree() <= Degree::Finite(bound.saturating_mul(4)) {
                gens.push(prod);
            }
        }
    }
    let monos: BTreeSet<Monomial> = gens
        .iter()
        .flat_map(|g| g.monomials().copied())
        .chain(p.monomials().copied())
        .collect();
    let rows = monos
        .iter()
        .map(|m| gens.iter().map(|g| g.coeff(m)).collect())
        .collect();
    let rhs: Vec<Rational> = monos.iter().map(|m| p.coeff(m)).collect();
    RatMatrix::from_rows(gens.len(), rows).solve(&rhs).is_some()
}

fn powers(p: &Polynomial, top: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one()];
    for i in 1..=top as usize {
        let next = &out[i - 1] * p;
        out.push(next);
    }
    out
}

/// `v = c(y) (x + r(y))^n` with `n = deg_x v`, tested through the binomial
/// coefficient identities `c_k (n c_n)^(n-k) = C(n,k) c_n c_(n-1)^(n-k)`.
pub fn is_power_of_x_linear(v: &Polynomial) -> bool {
    let Degree::Finite(n) = v.degree_in(Var::X) else {
        return true;
    };
    if n <= 1 {
        return true;
    }
    let c = |k: u32| v.coeff_of_power(Var::X, k);
    let cn = c(n);
    let cn1 = c(n - 1);
    let ncn = cn.scale(&int(n as i64));
    for k in 0..n {
        let e = n - k;
        let lhs = &c(k) * &ncn.pow(e);
        let rhs = (&cn * &cn1.pow(e)).scale(&binomial(n, k));
        if lhs != rhs {
            return false;
        }
    }
    true
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

fn deg(p: &Polynomial, v: Var) -> Option<u32> {
    p.degree_in(v).finite()
}

fn gcd_at_most_two_or_prime(a: Option<u32>, b: Option<u32>) -> (bool, bool) {
    let prime = a.is_some_and(is_prime) || b.is_some_and(is_prime);
    let small_gcd = match (a, b) {
        (Some(a), Some(b)) => a.gcd(&b) <= 2,
        _ => false,
    };
    (small_gcd, prime)
}

/// Structural checks for `map` against `shape`, each reported by name.
pub fn shape_matches(map: &PolyMap, shape: ShapeId) -> ShapeReport {
    let (u, v, h) = (&map.u, &map.v, &map.h);
    let origin = origin_check(map);
    let free_z = |p: &Polynomial| !p.depends_on(Var::Z);
    let independent = || linear_dependence(map).is_independent();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut push = |name: &str, holds: bool| checks.push((name.to_string(), holds));
    match shape {
        ShapeId::T2_1 => {
            push("h free of z", free_z(h));
            push("v is a polynomial in h", free_z(v) && free_z(h) && in_univariate_subalgebra(v, h));
            push("H(0) = 0", origin);
        }
        ShapeId::T2_4 => {
            push("h free of z", free_z(h));
            push("v is a polynomial in u and h", in_bivariate_subalgebra(v, u, h));
            push("H(0) = 0", origin);
        }
        ShapeId::T2_6 => {
            push("u free of z", free_z(u));
            push("v is a polynomial in u and h", in_bivariate_subalgebra(v, u, h));
            push("H(0) = 0", origin);
        }
        ShapeId::T3_3 | ShapeId::T3_5 => {
            push("u free of z", free_z(u));
            push("h free of z", free_z(h));
            push("H(0) = 0", origin);
            push("components linearly independent", independent());
            let (small_gcd, prime) = gcd_at_most_two_or_prime(deg(u, Var::Y), deg(h, Var::Y));
            if shape == ShapeId::T3_3 {
                push("deg_y u or deg_y h is prime", prime);
            } else {
                push("gcd(deg_y u, deg_y h) <= 2", small_gcd);
            }
        }
        ShapeId::T3_11 => {
            push("u free of z", free_z(u));
            push("h free of z", free_z(h));
            push("u homogeneous", u.is_homogeneous());
            push("H(0) = 0", origin);
        }
        ShapeId::C3_7 => {
            push("v free of z", free_z(v));
            push("h free of z", free_z(h));
            push("H(0) = 0", origin);
            push("components linearly independent", independent());
            let (small_gcd, prime) = gcd_at_most_two_or_prime(deg(v, Var::X), deg(h, Var::X));
            push("gcd(deg_x v, deg_x h) <= 2 or one of them prime", small_gcd || prime);
        }
        ShapeId::C3_8 => {
            push("v free of z", free_z(v));
            push("h free of z", free_z(h));
            push("v = (a(y) x + b(y))^n", free_z(v) && is_power_of_x_linear(v));
            push("H(0) = 0", origin);
            push("components linearly independent", independent());
        }
        ShapeId::R2_2 => {
            push("u is a nonconstant polynomial in y", u.degree_in(Var::Y) >= Degree::Finite(1) && !u.depends_on(Var::X) && free_z(u));
            push("v is a nonzero constant", v.is_constant() && !v.is_zero());
            push("h free of z", free_z(h));
            push("h involves x", h.depends_on(Var::X));
        }
    }
    let checks: Vec<NamedCheck> = checks
        .into_iter()
        .map(|(name, holds)| NamedCheck { name, holds })
        .collect();
    ShapeReport {
        shape,
        matches: checks.iter().all(|c| c.holds),
        origin,
        checks,
    }
}

/// Degree relations every independent nilpotent map of shape
/// `(u(x,y), v(x,y,z), h(x,y))` satisfies: `deg h <= 2 deg u`,
/// `deg_y h <= 2 deg_y u`, `deg_x h <= 2 deg_x u`, and the leading
/// coefficients in `y` of `u` and `h` are nonzero constants.
pub fn degree_bounds(map: &PolyMap) -> Vec<NamedCheck> {
    let (u, h) = (&map.u, &map.h);
    let twice = |d: Degree| match d {
        Degree::Finite(k) => Degree::Finite(2 * k),
        Degree::NegInfinity => Degree::NegInfinity,
    };
    let lead_const = |p: &Polynomial| match p.degree_in(Var::Y) {
        Degree::Finite(k) => {
            let c = p.coeff_of_power(Var::Y, k);
            c.is_constant() && !c.is_zero()
        }
        Degree::NegInfinity => false,
    };
    [
        ("deg h <= 2 deg u", h.total_degree() <= twice(u.total_degree())),
        ("deg_y h <= 2 deg_y u", h.degree_in(Var::Y) <= twice(u.degree_in(Var::Y))),
        ("deg_x h <= 2 deg_x u", h.degree_in(Var::X) <= twice(u.degree_in(Var::X))),
        ("leading y-coefficient of u is a nonzero constant", lead_const(u)),
        ("leading y-coefficient of h is a nonzero constant", lead_const(h)),
    ]
    .into_iter()
    .map(|(name, holds)| NamedCheck {
        name: name.to_string(),
        holds,
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::{jacobian_matrix, is_nilpotent, nilpotency_residuals};
    use crate::parser::parse;
    use crate::poly::rat;

    fn p(s: &str) -> Polynomial {
        parse(s).unwrap()
    }

    fn map(u: &str, v: &str, h: &str) -> PolyMap {
        PolyMap::new(p(u), p(v), p(h))
    }

    fn with(g: &str, f: impl FnOnce(&mut FamilyParams)) -> FamilyParams {
        let mut params = FamilyParams::simple(parse_uni(g).unwrap());
        f(&mut params);
        params
    }

    #[test]
    fn theorem_family_examples() {
        let h = theorem_3_3_family(&with("t", |_| {})).unwrap();
        assert_eq!(h, map("y+x^2", "z-2*x*(y+x^2)", "(y+x^2)^2"));
        let h = theorem_3_3_family(&with("t", |p| p.l1 = int(1))).unwrap();
        assert_eq!(h, map("y+x^2+x", "z-(2*x+1)*(y+x^2+x)", "(y+x^2+x)^2"));
        let h = theorem_3_3_family(&with("t^2", |p| p.a = int(2))).unwrap();
        // b(x) = 2x^2, b'(x) = 4x, u = (2y + 2x^2)^2.
        assert_eq!(h.u, p("(2*y+2*x^2)^2"));
        assert_eq!(h.v, p("z - 2*x*(2*y+2*x^2)^2"));
        assert_eq!(h.h, h.u.pow(2));
        assert!(nilpotency_residuals(&h).all_zero());
    }

    #[test]
    fn origin_needs_root_of_g() {
        let shifted = with("t", |p| p.l2tilde = int(1));
        assert!(!shifted.vanishes_at_origin());
        let h = theorem_3_3_family(&shifted).unwrap();
        assert_eq!(h.u, p("y + x^2 + 1"));
        assert!(!origin_check(&h));
        assert!(nilpotency_residuals(&h).all_zero());
        let rooted = with("t^2 - t", |p| p.l2tilde = int(1));
        assert!(rooted.vanishes_at_origin());
        assert!(origin_check(&theorem_3_3_family(&rooted).unwrap()));
    }

    #[test]
    fn sampled_params_vanish_at_origin() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let params = FamilyParams::sample(&mut rng);
            params.validate().unwrap();
            assert!(params.vanishes_at_origin());
        }
    }

    #[test]
    fn theorem_family_rejects_invalid_params() {
        let bad = with("t", |p| p.a = int(0));
        assert_eq!(theorem_3_3_family(&bad), Err(FamilyError::ZeroParameter("a")));
        assert_eq!(
            theorem_3_3_family(&with("t+1", |_| {})),
            Err(FamilyError::GNotVanishingAtZero)
        );
        assert_eq!(theorem_3_3_family(&with("0", |_| {})), Err(FamilyError::ConstantG));
        assert_eq!(
            theorem_3_3_family(&with("t", |p| p.c0 = int(0))),
            Err(FamilyError::ZeroParameter("c0"))
        );
    }

    #[test]
    fn corollary_family_examples() {
        let h = corollary_3_7_family(&with("t", |_| {})).unwrap();
        assert_eq!(h, map("z-2*y*(x+y^2)", "x+y^2", "(x+y^2)^2"));
        let params = with("t^2 - t", |p| {
            p.a = rat(-1, 2);
            p.l2 = int(3);
            p.l2tilde = int(1);
        });
        let direct = corollary_3_7_family(&params).unwrap();
        let via_t = conjugate_linear(&theorem_3_3_family(&params).unwrap(), &transposition()).unwrap();
        assert_eq!(direct, via_t);
        let cubic = corollary_3_7_family(&with("t^3", |_| {})).unwrap();
        assert_eq!(cubic.v, p("(x+y^2)^3"));
        assert!(shape_matches(&cubic, ShapeId::C3_8).matches);
        assert!(nilpotency_residuals(&cubic).all_zero());
    }

    #[test]
    fn remark_family_examples() {
        let h = remark_2_2_family(&UniPoly::t(), &int(1), &Polynomial::x()).unwrap();
        assert_eq!(h, map("y", "1", "x"));
        let h = remark_2_2_family(&parse_uni("t^2").unwrap(), &int(1), &p("x+x*y")).unwrap();
        assert!(nilpotency_residuals(&h).all_zero());
        assert_eq!(
            remark_2_2_family(&UniPoly::t(), &int(0), &Polynomial::x()),
            Err(FamilyError::ZeroParameter("c"))
        );
        assert_eq!(
            remark_2_2_family(&UniPoly::t(), &int(1), &Polynomial::y()),
            Err(FamilyError::HIndependentOfX)
        );
        assert_eq!(
            remark_2_2_family(&parse_uni("3").unwrap(), &int(1), &Polynomial::x()),
            Err(FamilyError::ConstantU)
        );
    }

    #[test]
    fn conjugation_examples() {
        let h = map("y", "1", "x");
        assert_eq!(conjugate_linear(&h, &transposition()).unwrap(), map("1", "x", "y"));
        assert_eq!(conjugate_by_transposition(&h), map("1", "x", "y"));
        assert_eq!(conjugate_linear(&h, &LinearMap::identity()).unwrap(), h);
        let singular = LinearMap::from_ints([[1, 0, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(conjugate_linear(&h, &singular), Err(FamilyError::SingularMatrix));
    }

    #[test]
    fn shear_reduces_linear_v() {
        // v = c*u + v0(h): the shear strips the u-part from v.
        let c = int(3);
        let u = p("z*y + x^2");
        let hh = p("x - y^2");
        let v0 = UniPoly::from_coeffs([int(0), int(1), int(2)]);
        let h = PolyMap::new(u.clone(), &u.scale(&c) + &v0.eval_at(&hh), hh.clone());
        let out = conjugate_linear(&h, &shear(&c)).unwrap();
        let sub = Substitution::new().bind(Var::Y, p("y + 3*x"));
        assert_eq!(out.u, u.substitute(&sub));
        assert_eq!(out.h, hh.substitute(&sub));
        assert_eq!(out.v, v0.eval_at(&hh.substitute(&sub)));
    }

    #[test]
    fn shape_examples() {
        let fam = map("y+x^2", "z-2*x*(y+x^2)", "(y+x^2)^2");
        let r = shape_matches(&fam, ShapeId::T3_5);
        assert!(r.matches, "{r:?}");
        assert!(shape_matches(&fam, ShapeId::T3_3).matches);
        let r = shape_matches(&map("y", "1", "x"), ShapeId::R2_2);
        assert!(r.matches);
        assert!(!r.origin);
        let r = shape_matches(&map("x*z", "y", "x"), ShapeId::T2_1);
        assert!(!r.matches);
        assert!(!r.checks.iter().find(|c| c.name == "v is a polynomial in h").unwrap().holds);
        assert!(shape_matches(&map("x*z", "x^2 - 2*x", "x"), ShapeId::T2_1).matches);
        assert!(shape_matches(&map("x*z + y", "(x*z+y)^2 - x*y", "x*y"), ShapeId::T2_4).matches);
        assert!(!shape_matches(&map("x*z + y", "x", "x*y"), ShapeId::T2_4).matches);
        assert!(shape_matches(&map("x^2 - y^2", "z", "y"), ShapeId::T3_11).matches);
        assert!(!shape_matches(&map("x^2 - y", "z", "y"), ShapeId::T3_11).matches);
    }

    #[test]
    fn power_of_linear_predicate() {
        assert!(is_power_of_x_linear(&p("(y*x + y^2 + 1)^3")));
        assert!(is_power_of_x_linear(&p("2*(x + y)^2")));
        assert!(!is_power_of_x_linear(&p("x^2 + y")));
        assert!(is_power_of_x_linear(&p("y^5")));
    }

    #[test]
    fn degree_bounds_on_family() {
        let fam = theorem_3_3_family(&with("t^3 - 2*t", |p| p.l2 = int(-1))).unwrap();
        assert!(degree_bounds(&fam).iter().all(|c| c.holds));
        assert!(is_nilpotent(&jacobian_matrix(&fam)));
    }

    #[test]
    fn params_json_round_trip() {
        let text = r#"{"g":"t^2 + 3*t","a":"1","v1":"-1/2","c0":"2","l1":"0","l2":"1","l2tilde":"0"}"#;
        let params = FamilyParams::from_json(text).unwrap();
        assert_eq!(params.v1, rat(-1, 2));
        assert_eq!(FamilyParams::from_json(&params.to_json()).unwrap(), params);
        assert!(FamilyParams::from_json(r#"{"g":"t","a":"0","v1":"1","c0":"1","l1":"0","l2":"0","l2tilde":"0"}"#).is_err());
    }

    #[test]
    fn shape_ids_parse() {
        for id in ShapeId::ALL {
            assert_eq!(id.name().parse::<ShapeId>().unwrap(), id);
        }
        assert!("T9_9".parse::<ShapeId>().is_err());
    }
}
