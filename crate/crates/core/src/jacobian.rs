//! Jacobian matrices of maps `H = (u, v, h)` and nilpotency tests.
//!
//! A 3x3 matrix over an integral domain is nilpotent iff its trace, the sum
//! of its principal 2x2 minors and its determinant all vanish.
//! [`is_nilpotent`] uses that criterion; [`matrix_cube_is_zero`] checks
//! `M^3 = 0` directly and serves as an independent cross-check.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{int, Degree, Monomial, Polynomial, Rational, Var};

/// A polynomial map `(u, v, h)` from three-space to itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyMap {
    pub u: Polynomial,
    pub v: Polynomial,
    pub h: Polynomial,
}

impl PolyMap {
    pub fn new(u: Polynomial, v: Polynomial, h: Polynomial) -> Self {
        PolyMap { u, v, h }
    }

    pub fn identity() -> Self {
        PolyMap::new(Polynomial::x(), Polynomial::y(), Polynomial::z())
    }

    pub fn components(&self) -> [&Polynomial; 3] {
        [&self.u, &self.v, &self.h]
    }

    pub fn from_components([u, v, h]: [Polynomial; 3]) -> Self {
        PolyMap { u, v, h }
    }

    pub fn total_degree(&self) -> Degree {
        self.components()
            .iter()
            .map(|p| p.total_degree())
            .max()
            .unwrap_or(Degree::NegInfinity)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.u, self.v, self.h)
    }
}

/// A 3x3 matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyMatrix {
    pub entries: [[Polynomial; 3]; 3],
}

impl PolyMatrix {
    pub fn new(entries: [[Polynomial; 3]; 3]) -> Self {
        PolyMatrix { entries }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.entries[i][i] = Polynomial::one();
        }
        m
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Self {
        PolyMatrix {
            entries: rows.map(|r| r.map(Polynomial::int)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Polynomial::zero();
                for k in 0..3 {
                    acc = &acc + &(&self.entries[i][k] * &rhs.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Polynomial {
        &(&self.entries[0][0] + &self.entries[1][1]) + &self.entries[2][2]
    }

    fn minor(&self, i: usize, j: usize) -> Polynomial {
        let e = &self.entries;
        &(&e[i][i] * &e[j][j]) - &(&e[i][j] * &e[j][i])
    }

    pub fn determinant(&self) -> Polynomial {
        let e = &self.entries;
        let c0 = &(&e[1][1] * &e[2][2]) - &(&e[1][2] * &e[2][1]);
        let c1 = &(&e[1][0] * &e[2][2]) - &(&e[1][2] * &e[2][0]);
        let c2 = &(&e[1][0] * &e[2][1]) - &(&e[1][1] * &e[2][0]);
        &(&(&e[0][0] * &c0) - &(&e[0][1] * &c1)) + &(&e[0][2] * &c2)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// Coefficients of the characteristic polynomial
/// `lambda^3 - trace*lambda^2 + minor_sum*lambda - det`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharCoeffs {
    pub trace: Polynomial,
    pub minor_sum: Polynomial,
    pub det: Polynomial,
}

impl CharCoeffs {
    pub fn all_zero(&self) -> bool {
        self.trace.is_zero() && self.minor_sum.is_zero() && self.det.is_zero()
    }

    pub fn as_array(&self) -> [&Polynomial; 3] {
        [&self.trace, &self.minor_sum, &self.det]
    }
}

/// Entry `(i, j)` is `dH_i/dx_j` with `(x_1, x_2, x_3) = (x, y, z)`.
pub fn jacobian_matrix(map: &PolyMap) -> PolyMatrix {
    PolyMatrix {
        entries: map.components().map(|c| Var::ALL.map(|v| c.partial(v))),
    }
}

pub fn char_coeffs(m: &PolyMatrix) -> CharCoeffs {
    CharCoeffs {
        trace: m.trace(),
        minor_sum: &(&m.minor(0, 1) + &m.minor(0, 2)) + &m.minor(1, 2),
        det: m.determinant(),
    }
}

pub fn is_nilpotent(m: &PolyMatrix) -> bool {
    // Trace first: it is cheap and rules out most non-nilpotent inputs.
    if !m.trace().is_zero() {
        return false;
    }
    char_coeffs(m).all_zero()
}

pub fn matrix_cube_is_zero(m: &PolyMatrix) -> bool {
    m.mul(m).mul(m).is_zero()
}

/// The characteristic coefficients of `JH`; all zero iff `JH` is nilpotent.
pub fn nilpotency_residuals(map: &PolyMap) -> CharCoeffs {
    char_coeffs(&jacobian_matrix(map))
}

/// For `u`, `h` free of `z`, the three nilpotency conditions in their
/// shape-specific form:
///
/// `u_x + v_y`, `u_x v_y - v_x u_y - v_z h_y`, `v_z (u_x h_y - u_y h_x)`.
///
/// These agree with [`nilpotency_residuals`] as trace, minor sum and
/// negated determinant. Returns `None` when `u` or `h` involves `z`.
pub fn xy_shape_system(map: &PolyMap) -> Option<[Polynomial; 3]> {
    if map.u.depends_on(Var::Z) || map.h.depends_on(Var::Z) {
        return None;
    }
    let d = |p: &Polynomial, v| p.partial(v);
    let (ux, uy) = (d(&map.u, Var::X), d(&map.u, Var::Y));
    let (vx, vy, vz) = (d(&map.v, Var::X), d(&map.v, Var::Y), d(&map.v, Var::Z));
    let (hx, hy) = (d(&map.h, Var::X), d(&map.h, Var::Y));
    let first = &ux + &vy;
    let second = &(&(&ux * &vy) - &(&vx * &uy)) - &(&vz * &hy);
    let third = &vz * &(&(&ux * &hy) - &(&uy * &hx));
    Some([first, second, third])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("u_x + v0_y = {residual} is not zero; no potential exists")]
    NotExact { residual: Polynomial },
    #[error("{which} must not involve z")]
    DependsOnZ { which: &'static str },
}

fn antiderivative(p: &Polynomial, v: Var) -> Polynomial {
    Polynomial::from_terms(p.terms().map(|(m, c)| {
        let e = m.exponent(v) + 1;
        (m.with_exponent(v, e), c / int(e as i64))
    }))
}

/// The potential `P` with `P_x = v0` and `P_y = -u`, normalized by
/// `P(0, 0, 0) = 0`. Exists iff `u_x + v0_y = 0`.
pub fn potential(u: &Polynomial, v0: &Polynomial) -> Result<Polynomial, JacobianError> {
    if u.depends_on(Var::Z) {
        return Err(JacobianError::DependsOnZ { which: "u" });
    }
    if v0.depends_on(Var::Z) {
        return Err(JacobianError::DependsOnZ { which: "v0" });
    }
    let residual = &u.partial(Var::X) + &v0.partial(Var::Y);
    if !residual.is_zero() {
        return Err(JacobianError::NotExact { residual });
    }
    let along_x = antiderivative(v0, Var::X);
    // Exactness makes the remainder a function of y alone.
    let rest = &(-u) - &along_x.partial(Var::Y);
    debug_assert!(!rest.depends_on(Var::X));
    Ok(&along_x + &antiderivative(&rest, Var::Y))
}

/// Degree of `z` in `v` and the coefficient of its top power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZStructure {
    pub deg_z_v: Degree,
    pub leading_z_coeff: Polynomial,
}

impl ZStructure {
    /// `deg_z v = 1` with a nonzero constant coefficient of `z`.
    pub fn is_linear_with_constant_coeff(&self) -> bool {
        self.deg_z_v == Degree::Finite(1)
            && self.leading_z_coeff.is_constant()
            && !self.leading_z_coeff.is_zero()
    }
}

pub fn deg_z_structure(map: &PolyMap) -> ZStructure {
    let deg = map.v.degree_in(Var::Z);
    let leading = match deg {
        Degree::Finite(k) => map.v.coeff_of_power(Var::Z, k),
        Degree::NegInfinity => Polynomial::zero(),
    };
    ZStructure {
        deg_z_v: deg,
        leading_z_coeff: leading,
    }
}

/// An invertible constant 3x3 matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub rows: [[Rational; 3]; 3],
}

impl LinearMap {
    pub fn from_ints(rows: [[i64; 3]; 3]) -> Self {
        LinearMap {
            rows: rows.map(|r| r.map(int)),
        }
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn determinant(&self) -> Rational {
        let r = &self.rows;
        &r[0][0] * (&r[1][1] * &r[2][2] - &r[1][2] * &r[2][1])
            - &r[0][1] * (&r[1][0] * &r[2][2] - &r[1][2] * &r[2][0])
            + &r[0][2] * (&r[1][0] * &r[2][1] - &r[1][1] * &r[2][0])
    }

    /// Adjugate over determinant; `None` when singular.
    pub fn inverse(&self) -> Option<LinearMap> {
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        let r = &self.rows;
        let others = [[1, 2], [0, 2], [0, 1]];
        let cof = |i: usize, j: usize| {
            let ([a0, a1], [b0, b1]) = (others[i], others[j]);
            let m = &r[a0][b0] * &r[a1][b1] - &r[a0][b1] * &r[a1][b0];
            if (i + j).is_multiple_of(2) {
                m
            } else {
                -m
            }
        };
        let mut rows: [[Rational; 3]; 3] = Default::default();
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                // inverse[i][j] = cofactor(j, i) / det
                *slot = cof(j, i) / &det;
            }
        }
        Some(LinearMap { rows })
    }

    /// The linear forms `(T x)_i` as polynomials.
    pub fn forms(&self) -> [Polynomial; 3] {
        self.rows.clone().map(|row| {
            Polynomial::from_terms(
                Var::ALL
                    .into_iter()
                    .zip(row)
                    .map(|(v, c)| (Monomial::var(v), c)),
            )
        })
    }

    /// Applies the matrix to a vector of polynomials.
    pub fn apply(&self, comps: [&Polynomial; 3]) -> [Polynomial; 3] {
        self.rows.clone().map(|row| {
            row.iter()
                .zip(comps)
                .fold(Polynomial::zero(), |acc, (c, p)| &acc + &p.scale(c))
        })
    }

    pub fn is_one(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() }))
    }
}
