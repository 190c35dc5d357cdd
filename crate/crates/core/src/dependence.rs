//! Linear dependence of the components of a map over the rationals.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::jacobian::PolyMap;
use crate::linalg::RatMatrix;
use crate::poly::{fmt_rational, Monomial, Polynomial, Rational};

/// Either no relation exists, or `c1*u + c2*v + c3*h = 0` with the first
/// nonzero `c_i` equal to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DependenceResult {
    Independent,
    Dependent([Rational; 3]),
}

impl DependenceResult {
    pub fn is_independent(&self) -> bool {
        matches!(self, DependenceResult::Independent)
    }

    pub fn witness(&self) -> Option<&[Rational; 3]> {
        match self {
            DependenceResult::Independent => None,
            DependenceResult::Dependent(c) => Some(c),
        }
    }
}

impl fmt::Display for DependenceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DependenceResult::Independent => write!(f, "independent"),
            DependenceResult::Dependent([a, b, c]) => write!(
                f,
                "dependent ({}, {}, {})",
                fmt_rational(a),
                fmt_rational(b),
                fmt_rational(c)
            ),
        }
    }
}

/// Rows are the monomials of `u`, `v`, `h` in descending graded-lex order,
/// columns are the components.
pub fn coefficient_matrix(map: &PolyMap) -> (Vec<Monomial>, RatMatrix) {
    let monos: BTreeSet<Monomial> = map
        .components()
        .iter()
        .flat_map(|p| p.monomials().copied())
        .collect();
    let monos: Vec<Monomial> = monos.into_iter().rev().collect();
    let rows = monos
        .iter()
        .map(|m| map.components().iter().map(|p| p.coeff(m)).collect())
        .collect();
    (monos, RatMatrix::from_rows(3, rows))
}

pub fn linear_dependence(map: &PolyMap) -> DependenceResult {
    let (_, m) = coefficient_matrix(map);
    let Some(mut w) = m.nullspace().into_iter().next() else {
        return DependenceResult::Independent;
    };
    let lead = w
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .expect("nullspace basis vectors are nonzero");
    if !lead.is_one() {
        for c in w.iter_mut() {
            *c /= &lead;
        }
    }
    DependenceResult::Dependent([w[0].clone(), w[1].clone(), w[2].clone()])
}

/// `c1*u + c2*v + c3*h`.
pub fn combine(map: &PolyMap, c: &[Rational; 3]) -> Polynomial {
    map.components()
        .iter()
        .zip(c)
        .fold(Polynomial::zero(), |acc, (p, c)| &acc + &p.scale(c))
}

/// `H(0) = 0`.
pub fn origin_check(map: &PolyMap) -> bool {
    map.components().iter().all(|p| p.constant_term().is_zero())
}
