//! Common generators of two plane polynomials with vanishing Jacobian.
//!
//! If `u_x h_y - u_y h_x = 0` then `u` and `h` are both polynomials in a
//! single `q(x, y)`. The generator is found constructively: for increasing
//! total degree `d`, the coefficients of an unknown `q` of degree `<= d`
//! (without constant term) must satisfy the homogeneous linear conditions
//! `D_h(q) = 0` and `D_u(q) = 0`, where `D_f = f_y d/dx - f_x d/dy`. The
//! first degree with a nonzero solution yields `q`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::poly::{Degree, Monomial, Polynomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{which} must not involve z")]
    DependsOnZ { which: &'static str },
    #[error("det J(u, h) = {residual} is not zero")]
    NonZeroJacobian { residual: Polynomial },
    #[error("u and h are both constant; every polynomial is annihilated")]
    Degenerate,
    #[error("no generator of total degree <= {max_degree}")]
    SearchExhausted { max_degree: u32 },
    #[error("polynomial is not in K[q] up to power {max_power}")]
    NotInSubalgebra { max_power: u32 },
    #[error("q must be nonconstant")]
    ConstantGenerator,
}

fn require_plane(p: &Polynomial, which: &'static str) -> Result<(), KernelError> {
    if p.depends_on(Var::Z) {
        Err(KernelError::DependsOnZ { which })
    } else {
        Ok(())
    }
}

/// The derivation `D_h = h_y d/dx - h_x d/dy` applied to `p`.
#[derive(Debug, Clone)]
pub struct Derivation {
    hx: Polynomial,
    hy: Polynomial,
}

impl Derivation {
    pub fn new(h: &Polynomial) -> Result<Self, KernelError> {
        require_plane(h, "h")?;
        Ok(Derivation {
            hx: h.partial(Var::X),
            hy: h.partial(Var::Y),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.hx.is_zero() && self.hy.is_zero()
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        &(&self.hy * &p.partial(Var::X)) - &(&self.hx * &p.partial(Var::Y))
    }
}

/// `h_y p_x - h_x p_y`.
pub fn apply_derivation(h: &Polynomial, p: &Polynomial) -> Result<Polynomial, KernelError> {
    require_plane(p, "p")?;
    Ok(Derivation::new(h)?.apply(p))
}

/// `q` with `q(0, 0) = 0` and graded-lex leading coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGenerator {
    pub q: Polynomial,
    pub degree: u32,
}

/// Default search bound: `max(deg u, deg h)`.
pub fn default_max_degree(u: &Polynomial, h: &Polynomial) -> u32 {
    let d = u.total_degree().max(h.total_degree());
    d.finite().unwrap_or(0)
}

fn monic(p: Polynomial) -> Polynomial {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => {
            let inv = Rational::one() / c;
            p.scale(&inv)
        }
        _ => p,
    }
}

pub fn find_kernel_generator(
    u: &Polynomial,
    h: &Polynomial,
    max_degree: u32,
) -> Result<KernelGenerator, KernelError> {
    require_plane(u, "u")?;
    require_plane(h, "h")?;
    let du = Derivation::new(u)?;
    let dh = Derivation::new(h)?;
    let residual = dh.apply(u);
    if !residual.is_zero() {
        // D_h(u) = h_y u_x - h_x u_y is det J(u, h).
        return Err(KernelError::NonZeroJacobian { residual });
    }
    if du.is_zero() && dh.is_zero() {
        return Err(KernelError::Degenerate);
    }

    for d in 1..=max_degree {
        let basis = Monomial::all_up_to(&[Var::X, Var::Y], 1, d);
        let images: Vec<[Polynomial; 2]> = basis
            .iter()
            .map(|m| {
                let mp = Polynomial::term(*m, Rational::one());
                [dh.apply(&mp), du.apply(&mp)]
            })
            .collect();
        let mut rows = Vec::new();
        for k in 0..2 {
            let monos: BTreeSet<Monomial> = images
                .iter()
                .flat_map(|im| im[k].monomials().copied())
                .collect();
            for mono in monos {
                rows.push(images.iter().map(|im| im[k].coeff(&mono)).collect());
            }
        }
        let ns = RatMatrix::from_rows(basis.len(), rows).nullspace();
        let best = ns
            .into_iter()
            .map(|v| {
                monic(Polynomial::from_terms(
                    basis.iter().copied().zip(v).filter(|(_, c)| !c.is_zero()),
                ))
            })
            .min_by_key(|q| *q.leading_term().expect("nonzero").0);
        if let Some(q) = best {
            let degree = q.total_degree().finite().expect("nonzero");
            return Ok(KernelGenerator { q, degree });
        }
    }
    Err(KernelError::SearchExhausted { max_degree })
}

/// Coefficients `(c_0, ..., c_k)` with `p = sum c_i q^i` and `c_k != 0`;
/// empty for `p = 0`.
pub fn express_in(p: &Polynomial, q: &Polynomial, max_power: u32) -> Result<Vec<Rational>, KernelError> {
    require_plane(p, "p")?;
    require_plane(q, "q")?;
    let Degree::Finite(dq) = q.total_degree() else {
        return Err(KernelError::ConstantGenerator);
    };
    if dq == 0 {
        return Err(KernelError::ConstantGenerator);
    }
    let Degree::Finite(dp) = p.total_degree() else {
        return Ok(Vec::new());
    };
    // q^i has degree i*dq, so no power beyond dp/dq can appear.
    let top = max_power.min(dp / dq);
    let mut powers = vec![Polynomial::one()];
    for i in 1..=top as usize {
        let next = &powers[i - 1] * q;
        powers.push(next);
    }
    let monos: BTreeSet<Monomial> = powers
        .iter()
        .flat_map(|pw| pw.monomials().copied())
        .chain(p.monomials().copied())
        .collect();
    let rows = monos
        .iter()
        .map(|m| powers.iter().map(|pw| pw.coeff(m)).collect())
        .collect();
    let rhs: Vec<Rational> = monos.iter().map(|m| p.coeff(m)).collect();
    let mut coeffs = RatMatrix::from_rows(powers.len(), rows)
        .solve(&rhs)
        .ok_or(KernelError::NotInSubalgebra { max_power })?;
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// `sum c_i q^i`.
pub fn recombine(coeffs: &[Rational], q: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * q) + &Polynomial::constant(c.clone());
    }
    acc
}
