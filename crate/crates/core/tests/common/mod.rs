//! Strategies and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nilpotent_maps::jacobian::{LinearMap, PolyMap, PolyMatrix};
use nilpotent_maps::poly::{int, rat, Monomial, Polynomial, Rational, UniPoly, Var};
use num_traits::Zero;
use proptest::prelude::*;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Sparse polynomial with exponents bounded per variable; `z_max = 0`
/// keeps it in the plane.
pub fn poly(max_exp: u32, z_max: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        ((0..=max_exp), (0..=max_exp), (0..=z_max), small_rational()),
        0..=max_terms,
    )
    .prop_map(|terms| {
        Polynomial::from_terms(
            terms
                .into_iter()
                .map(|(a, b, c, k)| (Monomial::new(a, b, c), k)),
        )
    })
}

pub fn any_poly() -> impl Strategy<Value = Polynomial> {
    poly(3, 2, 6)
}

pub fn plane_poly() -> impl Strategy<Value = Polynomial> {
    poly(3, 0, 5)
}

pub fn any_var() -> impl Strategy<Value = Var> {
    prop::sample::select(Var::ALL.to_vec())
}

pub fn small_map() -> impl Strategy<Value = PolyMap> {
    (poly(2, 2, 4), poly(2, 2, 4), poly(2, 2, 4)).prop_map(|(u, v, h)| PolyMap::new(u, v, h))
}

/// Univariate polynomial of degree `<= max_deg`.
pub fn uni(max_deg: u32) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-3i64..=3, 1..=(max_deg as usize + 1))
        .prop_map(|c| UniPoly::from_coeffs(c.into_iter().map(int)))
}

/// Invertible integer matrix with small entries.
pub fn invertible() -> impl Strategy<Value = LinearMap> {
    prop::array::uniform3(prop::array::uniform3(-2i64..=2))
        .prop_map(LinearMap::from_ints)
        .prop_filter("invertible", |t| !t.determinant().is_zero())
}

/// Jacobian evaluated at a rational point, as a plain matrix.
pub fn jacobian_at(map: &PolyMap, pt: &[Rational; 3]) -> [[Rational; 3]; 3] {
    let comps = [&map.u, &map.v, &map.h];
    std::array::from_fn(|i| std::array::from_fn(|j| comps[i].partial(Var::ALL[j]).evaluate(pt)))
}

pub fn mat_mul(a: &[[Rational; 3]; 3], b: &[[Rational; 3]; 3]) -> [[Rational; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

/// Oracle: the numeric Jacobian cubes to zero at each given point.
pub fn cube_vanishes_at(map: &PolyMap, pts: &[[Rational; 3]]) -> bool {
    pts.iter().all(|pt| {
        let m = jacobian_at(map, pt);
        let m3 = mat_mul(&mat_mul(&m, &m), &m);
        m3.iter().flatten().all(Zero::is_zero)
    })
}

/// A fixed spread of rational test points.
pub fn test_points() -> Vec<[Rational; 3]> {
    let vals = [rat(-3, 2), int(2), rat(1, 3), int(-1), rat(5, 7)];
    let mut out = Vec::new();
    for (i, a) in vals.iter().enumerate() {
        let b = &vals[(i + 2) % vals.len()];
        let c = &vals[(i + 4) % vals.len()];
        out.push([a.clone(), b.clone(), c.clone()]);
    }
    out
}

/// Oracle: some nonzero triple with entries `p/q`, `|p| <= 2`, `q in {1, 2}`
/// annihilates the components. Checked term by term without the nullspace.
pub fn brute_force_dependent(map: &PolyMap) -> Option<[Rational; 3]> {
    let mut vals: Vec<Rational> = Vec::new();
    for p in -2..=2 {
        for q in 1..=2 {
            let r = rat(p, q);
            if !vals.contains(&r) {
                vals.push(r);
            }
        }
    }
    for a in &vals {
        for b in &vals {
            for c in &vals {
                if a.is_zero() && b.is_zero() && c.is_zero() {
                    continue;
                }
                let combo = &(&map.u.scale(a) + &map.v.scale(b)) + &map.h.scale(c);
                if combo.is_zero() {
                    return Some([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    None
}

/// Unimodular `P = L U` and its inverse, from the off-diagonal entries of a
/// unit lower `L` (`d, e, f`) and a unit upper `U` (`a, b, c`).
pub fn unimodular_pair([a, b, c, d, e, f]: [i64; 6]) -> (PolyMatrix, PolyMatrix) {
    let u = PolyMatrix::from_ints([[1, a, b], [0, 1, c], [0, 0, 1]]);
    let u_inv = PolyMatrix::from_ints([[1, -a, a * c - b], [0, 1, -c], [0, 0, 1]]);
    let l = PolyMatrix::from_ints([[1, 0, 0], [d, 1, 0], [e, f, 1]]);
    let l_inv = PolyMatrix::from_ints([[1, 0, 0], [-d, 1, 0], [d * f - e, -f, 1]]);
    (l.mul(&u), u_inv.mul(&l_inv))
}

/// `P N P^-1` with `N` strictly upper triangular: nilpotent by construction.
pub fn conjugated_strict_upper(above: [Polynomial; 3], shears: [i64; 6]) -> PolyMatrix {
    let [n01, n02, n12] = above;
    let z = Polynomial::zero;
    let n = PolyMatrix::new([[z(), n01, n02], [z(), z(), n12], [z(), z(), z()]]);
    let (p, p_inv) = unimodular_pair(shears);
    p.mul(&n).mul(&p_inv)
}

pub fn strict_upper() -> impl Strategy<Value = PolyMatrix> {
    (
        [poly(2, 2, 3), poly(2, 2, 3), poly(2, 2, 3)],
        prop::array::uniform6(-2i64..=2),
    )
        .prop_map(|(above, shears)| conjugated_strict_upper(above, shears))
}

pub fn random_matrix() -> impl Strategy<Value = PolyMatrix> {
    prop::array::uniform3(prop::array::uniform3(poly(2, 2, 3))).prop_map(PolyMatrix::new)
}

/// Trace, sum of principal 2x2 minors and determinant of a numeric matrix.
pub fn numeric_char_coeffs(m: &[[Rational; 3]; 3]) -> [Rational; 3] {
    let trace = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
    let minors = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    [trace, minors, det]
}

pub fn eval_matrix(m: &PolyMatrix, pt: &[Rational; 3]) -> [[Rational; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m.get(i, j).evaluate(pt)))
}
