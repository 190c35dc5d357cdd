//! Bounded falsification searches and seeded family verification.
//!
//! Exhaustive mode enumerates every map of a shape whose free coefficients
//! lie in a finite set. Composite components such as `v = V(u, h)` are
//! enumerated by the coefficients of `V` over the monomials `u^i h^j` with
//! `i deg u + j deg h <= D`, so every generated map has total degree at
//! most `D`.
//!
//! Nilpotency is first decided on an integer grid: every Jacobian entry has
//! degree at most `D - 1`, so trace, minor sum and determinant have degree at
//! most `3(D - 1)` in each variable and vanish identically iff they vanish
//! on `{0, .., 3(D - 1)}^3`. Survivors are then confirmed symbolically.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dependence::{linear_dependence, origin_check};
use crate::families::{
    conjugate_by_transposition, corollary_3_7_family, degree_bounds, is_power_of_x_linear,
    shape_matches, theorem_3_3_family, FamilyParams, ShapeId,
};
use crate::jacobian::{is_nilpotent, jacobian_matrix, PolyMap};
use crate::kernel::{default_max_degree, express_in, find_kernel_generator};
use crate::parser::{format, MapSource};
use crate::poly::{fmt_rational, int, Degree, Monomial, Polynomial, Rational, UniPoly, Var};

pub const DEFAULT_INSTANCE_CAP: u64 = 100_000_000;
pub const DEFAULT_TRIALS: u64 = 50;
pub const DEFAULT_SEED: u64 = 42;
pub const PRNG_ID: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.9)";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const GCD_READING: &str = "(m,n) read as the integer gcd of m and n";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space has {count} instances, above the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error("grid and symbolic nilpotency disagree on {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    pub shape: ShapeId,
    pub max_total_degree: u32,
    pub coefficient_set: Vec<Rational>,
    pub require_origin: bool,
}

impl SearchSpace {
    pub fn new(shape: ShapeId, max_total_degree: u32, coefficient_set: Vec<Rational>, require_origin: bool) -> Self {
        SearchSpace {
            shape,
            max_total_degree,
            coefficient_set,
            require_origin,
        }
    }

    /// Degree 2 with `H(0) = 0` and coefficients {-1, 0, 1}. The
    /// constant-component shape never vanishes at the origin; it drops that
    /// requirement and uses degree 1.
    pub fn default_for(shape: ShapeId) -> Self {
        let coeffs = (-1..=1).map(int).collect();
        if shape == ShapeId::R2_2 {
            SearchSpace::new(shape, 1, coeffs, false)
        } else {
            SearchSpace::new(shape, 2, coeffs, true)
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_total_degree < 1 {
            return Err(SearchError::InvalidSpace("max_total_degree must be at least 1".into()));
        }
        if !self.coefficient_set.iter().any(Zero::is_zero) {
            return Err(SearchError::InvalidSpace("coefficient set must contain 0".into()));
        }
        let distinct: BTreeSet<&Rational> = self.coefficient_set.iter().collect();
        if distinct.len() != self.coefficient_set.len() {
            return Err(SearchError::InvalidSpace("coefficient set has repeated entries".into()));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let coeffs: Vec<String> = self.coefficient_set.iter().map(fmt_rational).collect();
        format!(
            "coefficients {{{}}}, total degree <= {}, {}",
            coeffs.join(", "),
            self.max_total_degree,
            if self.require_origin { "H(0) = 0" } else { "H(0) unrestricted" }
        )
    }
}

/// Whether a shape is checked by exhaustive search or by family sampling.
pub fn is_search_shape(shape: ShapeId) -> bool {
    matches!(
        shape,
        ShapeId::T2_1 | ShapeId::T2_4 | ShapeId::T2_6 | ShapeId::T3_11 | ShapeId::R2_2
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: ShapeId,
    pub instances_examined: u64,
    pub nilpotent_found: u64,
    /// Nilpotent, shape-matching, vanishing at the origin, yet independent.
    pub counterexamples: Vec<MapSource>,
    pub family_trials: u64,
    pub family_failures: u64,
    pub coefficient_domain: String,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub tool_version: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub search_method: Option<String>,
    /// Nilpotent independent maps with `H(0) != 0`: outside the dependence
    /// hypotheses and expected to exist.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub expected_witnesses: Vec<MapSource>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected_witness_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witnesses_in_constant_family: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prng: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gcd_reading: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub failure_breakdown: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub hypothesis_coverage: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub family_failure_examples: Vec<MapSource>,
}

impl TheoremReport {
    fn empty(theorem: ShapeId, mode: &str, seed: u64) -> Self {
        TheoremReport {
            theorem,
            instances_examined: 0,
            nilpotent_found: 0,
            counterexamples: Vec::new(),
            family_trials: 0,
            family_failures: 0,
            coefficient_domain: String::new(),
            seed,
            elapsed_ms: 0,
            tool_version: TOOL_VERSION.to_string(),
            mode: mode.to_string(),
            search_method: None,
            expected_witnesses: Vec::new(),
            expected_witness_count: None,
            witnesses_in_constant_family: None,
            prng: None,
            gcd_reading: None,
            failure_breakdown: BTreeMap::new(),
            hypothesis_coverage: BTreeMap::new(),
            family_failure_examples: Vec::new(),
        }
    }

    /// No counterexample and no failing family instance.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.family_failures == 0
    }

    /// Keeps the first `limit` expected witnesses; counterexamples are never
    /// dropped and `expected_witness_count` keeps the full number.
    pub fn truncate_witnesses(&mut self, limit: usize) {
        self.expected_witnesses.truncate(limit);
    }

    /// The JSON form with `elapsed_ms` zeroed, for determinism checks.
    pub fn without_timing(&self) -> TheoremReport {
        TheoremReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

/// Runs the exhaustive search for search shapes and family sampling for
/// the classification shapes. The space's shape selects the statement.
pub fn verify_theorem(space: &SearchSpace, trials: u64, seed: u64, cap: u64) -> Result<TheoremReport, SearchError> {
    let start = Instant::now();
    let mut report = if is_search_shape(space.shape) {
        let mut r = exhaustive_search(space, cap)?;
        r.seed = seed;
        r
    } else {
        verify_family(space.shape, trials, seed)
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Enumeration

/// How the middle component is produced from the outer ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VKind {
    /// `v = W(h)`.
    OfH,
    /// `v = V(u, h)`.
    OfUH,
    /// `v` free in x, y, z with `deg_z v <= 1`.
    LinearInZ,
}

struct Layout {
    u_vars: &'static [Var],
    h_vars: &'static [Var],
    u_homogeneous: bool,
    v: VKind,
}

const XYZ: &[Var] = &[Var::X, Var::Y, Var::Z];
const XY: &[Var] = &[Var::X, Var::Y];

fn layout(shape: ShapeId) -> Option<Layout> {
    let l = |u_vars, h_vars, u_homogeneous, v| Layout {
        u_vars,
        h_vars,
        u_homogeneous,
        v,
    };
    match shape {
        ShapeId::T2_1 | ShapeId::R2_2 => Some(l(XYZ, XY, false, VKind::OfH)),
        ShapeId::T2_4 => Some(l(XYZ, XY, false, VKind::OfUH)),
        ShapeId::T2_6 => Some(l(XY, XYZ, false, VKind::OfUH)),
        ShapeId::T3_11 => Some(l(XY, XY, true, VKind::LinearInZ)),
        _ => None,
    }
}

/// A polynomial together with its values and gradients on the grid.
struct Component {
    poly: Polynomial,
    /// Degree if nonconstant.
    degree: Option<u32>,
    table: Vec<[i128; 4]>,
}

/// All coefficient vectors over `set` of length `n`, in odometer order.
fn tuples(set_len: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (set_len as u128).pow(n as u32);
    let mut current = vec![0usize; n];
    let mut emitted: u128 = 0;
    std::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        let out = current.clone();
        emitted += 1;
        for slot in current.iter_mut() {
            *slot += 1;
            if *slot < set_len {
                break;
            }
            *slot = 0;
        }
        Some(out)
    })
}

fn nonconstant_degree(p: &Polynomial) -> Option<u32> {
    p.total_degree().finite().filter(|&d| d > 0)
}

fn free_polys(monos: &[Monomial], set: &[Rational], skip_zero: bool) -> Vec<Polynomial> {
    tuples(set.len(), monos.len())
        .map(|idx| {
            Polynomial::from_terms(
                monos
                    .iter()
                    .zip(&idx)
                    .map(|(m, &i)| (*m, set[i].clone())),
            )
        })
        .filter(|p| !(skip_zero && p.is_zero()))
        .collect()
}

fn u_candidates(l: &Layout, space: &SearchSpace) -> Vec<Polynomial> {
    let d = space.max_total_degree;
    let set = &space.coefficient_set;
    if l.u_homogeneous {
        let lo = if space.require_origin { 1 } else { 0 };
        (lo..=d)
            .flat_map(|n| free_polys(&Monomial::homogeneous(l.u_vars, n), set, true))
            .collect()
    } else {
        free_polys(&monomials(l.u_vars, space), set, false)
    }
}

fn monomials(vars: &[Var], space: &SearchSpace) -> Vec<Monomial> {
    let lo = if space.require_origin { 1 } else { 0 };
    Monomial::all_up_to(vars, lo, space.max_total_degree)
}

fn v_free_monomials(space: &SearchSpace) -> Vec<Monomial> {
    monomials(XYZ, space)
        .into_iter()
        .filter(|m| m.exponent(Var::Z) <= 1)
        .collect()
}

/// Monomials `u^i h^j` admissible for `V`.
fn composite_terms(du: Option<u32>, dh: Option<u32>, use_u: bool, space: &SearchSpace) -> Vec<(u32, u32)> {
    let d = space.max_total_degree;
    let du = if use_u { du } else { None };
    let top_i = du.map_or(0, |k| d / k);
    let top_j = dh.map_or(0, |k| d / k);
    let mut out = Vec::new();
    for i in 0..=top_i {
        for j in 0..=top_j {
            if i == 0 && j == 0 && space.require_origin {
                continue;
            }
            if i * du.unwrap_or(0) + j * dh.unwrap_or(0) <= d {
                out.push((i, j));
            }
        }
    }
    out
}

fn degree_histogram(polys: &[Polynomial]) -> BTreeMap<Option<u32>, u128> {
    let mut hist = BTreeMap::new();
    for p in polys {
        *hist.entry(nonconstant_degree(p)).or_insert(0) += 1;
    }
    hist
}

fn instance_count(l: &Layout, space: &SearchSpace, us: &[Polynomial], hs: &[Polynomial], n_free_v: usize) -> u128 {
    let k = space.coefficient_set.len() as u128;
    if l.v == VKind::LinearInZ {
        return us.len() as u128 * hs.len() as u128 * n_free_v as u128;
    }
    let hu = degree_histogram(us);
    let hh = degree_histogram(hs);
    let mut total = 0u128;
    for (du, nu) in &hu {
        for (dh, nh) in &hh {
            let terms = composite_terms(*du, *dh, l.v == VKind::OfUH, space).len() as u32;
            total = total.saturating_add(nu * nh * k.saturating_pow(terms));
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Integer grid evaluation

fn grid(max_entry_degree: u32) -> Vec<[i64; 3]> {
    let top = 3 * max_entry_degree as i64;
    let mut pts = Vec::new();
    for a in 0..=top {
        for b in 0..=top {
            for c in 0..=top {
                pts.push([a, b, c]);
            }
        }
    }
    // Points with distinct nonzero coordinates reject most maps at once.
    pts.sort_by_key(|p| {
        let distinct: BTreeSet<i64> = p.iter().copied().filter(|&c| c != 0).collect();
        (std::cmp::Reverse(distinct.len()), *p)
    });
    pts
}

fn mono_table(m: &Monomial, p: &[i64; 3]) -> [i128; 4] {
    let e = m.exponents();
    let pw = |b: i64, k: u32| (b as i128).pow(k);
    let val = pw(p[0], e[0]) * pw(p[1], e[1]) * pw(p[2], e[2]);
    let d = |i: usize| {
        if e[i] == 0 {
            0
        } else {
            let mut f = e[i] as i128;
            for (j, &ej) in e.iter().enumerate() {
                f *= pw(p[j], if j == i { ej - 1 } else { ej });
            }
            f
        }
    };
    [val, d(0), d(1), d(2)]
}

fn int_coeffs(p: &Polynomial) -> Vec<(Monomial, i128)> {
    p.terms()
        .map(|(m, c)| (*m, c.to_integer().to_i128().expect("bounded integer coefficient")))
        .collect()
}

fn table_of(p: &Polynomial, pts: &[[i64; 3]]) -> Vec<[i128; 4]> {
    let coeffs = int_coeffs(p);
    pts.iter()
        .map(|pt| {
            let mut acc = [0i128; 4];
            for (m, c) in &coeffs {
                let t = mono_table(m, pt);
                for k in 0..4 {
                    acc[k] += c * t[k];
                }
            }
            acc
        })
        .collect()
}

fn component(p: Polynomial, pts: Option<&[[i64; 3]]>) -> Component {
    let table = pts.map(|pts| table_of(&p, pts)).unwrap_or_default();
    Component {
        degree: nonconstant_degree(&p),
        poly: p,
        table,
    }
}

/// Gradient of `V(u, h) = sum w_k u^i h^j` at one grid point.
fn composite_gradient(terms: &[(u32, u32)], w: &[i128], gu: &[i128; 4], gh: &[i128; 4]) -> [i128; 3] {
    let (mut vs, mut vt) = (0i128, 0i128);
    for (&(i, j), &c) in terms.iter().zip(w) {
        if c == 0 {
            continue;
        }
        if i > 0 {
            vs += c * i as i128 * gu[0].pow(i - 1) * gh[0].pow(j);
        }
        if j > 0 {
            vt += c * j as i128 * gu[0].pow(i) * gh[0].pow(j - 1);
        }
    }
    [
        vs * gu[1] + vt * gh[1],
        vs * gu[2] + vt * gh[2],
        vs * gu[3] + vt * gh[3],
    ]
}

fn char_vanishes(r0: [i128; 3], r1: [i128; 3], r2: [i128; 3]) -> bool {
    if r0[0] + r1[1] + r2[2] != 0 {
        return false;
    }
    let minors = (r0[0] * r1[1] - r0[1] * r1[0])
        + (r0[0] * r2[2] - r0[2] * r2[0])
        + (r1[1] * r2[2] - r1[2] * r2[1]);
    if minors != 0 {
        return false;
    }
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
        == 0
}

fn grad(t: &[i128; 4]) -> [i128; 3] {
    [t[1], t[2], t[3]]
}

enum VSource<'a> {
    Table(&'a [[i128; 4]]),
    Composite { terms: &'a [(u32, u32)], w: &'a [i128] },
}

fn grid_nilpotent(u: &[[i128; 4]], v: &VSource<'_>, h: &[[i128; 4]]) -> bool {
    for p in 0..u.len() {
        let gv = match v {
            VSource::Table(t) => grad(&t[p]),
            VSource::Composite { terms, w } => composite_gradient(terms, w, &u[p], &h[p]),
        };
        if !char_vanishes(grad(&u[p]), gv, grad(&h[p])) {
            return false;
        }
    }
    true
}

/// Loose bound on grid values of any enumerated component and on the
/// entries of every Jacobian evaluated there.
fn entry_bound(space: &SearchSpace, l: &Layout, pts: &[[i64; 3]]) -> f64 {
    let c = space
        .coefficient_set
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::INFINITY).abs())
        .fold(1.0, f64::max);
    let all = Monomial::all_up_to(XYZ, 0, space.max_total_degree);
    let mono_max = pts
        .iter()
        .flat_map(|p| {
            all.iter()
                .flat_map(move |m| mono_table(m, p).map(|v| (v as f64).abs()))
        })
        .fold(1.0, f64::max);
    let m = all.len() as f64 * c * mono_max;
    match l.v {
        VKind::LinearInZ => m,
        VKind::OfH | VKind::OfUH => {
            let d = space.max_total_degree as i32;
            let terms = ((d + 1) * (d + 1)) as f64;
            m.max(2.0 * terms * c * d as f64 * m.powi(d + 1))
        }
    }
}

fn fast_path_ok(space: &SearchSpace, l: &Layout, pts: &[[i64; 3]]) -> bool {
    space.coefficient_set.iter().all(|c| c.is_integer()) && entry_bound(space, l, pts) < 1e12
}

// ---------------------------------------------------------------------------
// Exhaustive search

struct Tally {
    nilpotent: u64,
    counterexamples: BTreeSet<(String, String, String)>,
    witnesses: BTreeSet<(String, String, String)>,
    in_constant_family: u64,
}

impl Tally {
    fn record(&mut self, map: &PolyMap) {
        self.nilpotent += 1;
        if linear_dependence(map).is_independent() {
            let key = (format(&map.u), format(&map.v), format(&map.h));
            if origin_check(map) {
                self.counterexamples.insert(key);
            } else if self.witnesses.insert(key) && shape_matches(map, ShapeId::R2_2).matches {
                self.in_constant_family += 1;
            }
        }
    }
}

fn source(key: &(String, String, String)) -> MapSource {
    MapSource::new(key.0.clone(), key.1.clone(), key.2.clone())
}

fn composite_poly(terms: &[(u32, u32)], w: &[Rational], u: &Polynomial, h: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero();
    for (&(i, j), c) in terms.iter().zip(w) {
        if !c.is_zero() {
            acc = &acc + &(&u.pow(i) * &h.pow(j)).scale(c);
        }
    }
    acc
}

/// Which instances reach the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    Nilpotent,
}

struct Enumeration {
    examined: u64,
    /// Grid size when the integer prefilter was used.
    grid_points: Option<usize>,
}

/// Feeds instances of the space to `sink`, every one or only the nilpotent
/// ones (confirmed symbolically).
fn enumerate(
    space: &SearchSpace,
    cap: u64,
    filter: Filter,
    sink: &mut dyn FnMut(PolyMap),
) -> Result<Enumeration, SearchError> {
    space.validate()?;
    let l = layout(space.shape).ok_or_else(|| {
        SearchError::InvalidSpace(format!("{} is verified by family sampling, not search", space.shape))
    })?;
    let set = &space.coefficient_set;
    let us = u_candidates(&l, space);
    let hs = free_polys(&monomials(l.h_vars, space), set, false);
    let v_monos = v_free_monomials(space);
    let n_free_v = if l.v == VKind::LinearInZ {
        (set.len() as u128).pow(v_monos.len() as u32) as usize
    } else {
        0
    };
    let count = instance_count(&l, space, &us, &hs, n_free_v);
    if count > cap as u128 {
        return Err(SearchError::CapExceeded { count, cap });
    }

    let pts = grid(space.max_total_degree - 1);
    let fast = filter == Filter::Nilpotent && fast_path_ok(space, &l, &pts);
    let pts_opt = fast.then_some(pts.as_slice());
    let int_set: Vec<i128> = if fast {
        set.iter().map(|c| c.to_integer().to_i128().expect("integer")).collect()
    } else {
        Vec::new()
    };
    let hs: Vec<Component> = hs.into_iter().map(|p| component(p, pts_opt)).collect();
    let mut examined = 0u64;
    let mut offer = |u: &Polynomial, v: &dyn Fn() -> Polynomial, h: &Polynomial, grid_ok: Option<bool>| {
        let map = PolyMap::new(u.clone(), v(), h.clone());
        let keep = match (filter, grid_ok) {
            (Filter::All, _) => true,
            (Filter::Nilpotent, Some(ok)) => ok,
            (Filter::Nilpotent, None) => is_nilpotent(&jacobian_matrix(&map)),
        };
        if !keep {
            return Ok(());
        }
        if grid_ok.is_some() && !is_nilpotent(&jacobian_matrix(&map)) {
            return Err(SearchError::Inconsistent(map.to_string()));
        }
        sink(map);
        Ok(())
    };

    match l.v {
        VKind::LinearInZ => {
            let vs: Vec<Component> = free_polys(&v_monos, set, false)
                .into_iter()
                .map(|p| component(p, pts_opt))
                .collect();
            for u in us {
                let u = component(u, pts_opt);
                for v in &vs {
                    for h in &hs {
                        examined += 1;
                        let grid_ok = fast.then(|| grid_nilpotent(&u.table, &VSource::Table(&v.table), &h.table));
                        if grid_ok != Some(false) {
                            offer(&u.poly, &|| v.poly.clone(), &h.poly, grid_ok)?;
                        }
                    }
                }
            }
        }
        VKind::OfH => {
            // v = W(h) does not depend on u: tabulate every (h, W) once.
            let mut pairs: Vec<(usize, Component)> = Vec::new();
            for (hi, h) in hs.iter().enumerate() {
                let terms = composite_terms(None, h.degree, false, space);
                for idx in tuples(set.len(), terms.len()) {
                    let w: Vec<Rational> = idx.iter().map(|&i| set[i].clone()).collect();
                    let v = composite_poly(&terms, &w, &Polynomial::zero(), &h.poly);
                    pairs.push((hi, component(v, pts_opt)));
                }
            }
            for u in us {
                let u = component(u, pts_opt);
                for (hi, v) in &pairs {
                    let h = &hs[*hi];
                    examined += 1;
                    let grid_ok = fast.then(|| grid_nilpotent(&u.table, &VSource::Table(&v.table), &h.table));
                    if grid_ok != Some(false) {
                        offer(&u.poly, &|| v.poly.clone(), &h.poly, grid_ok)?;
                    }
                }
            }
        }
        VKind::OfUH => {
            for u in us {
                let u = component(u, pts_opt);
                for h in &hs {
                    let terms = composite_terms(u.degree, h.degree, true, space);
                    for idx in tuples(set.len(), terms.len()) {
                        examined += 1;
                        let grid_ok = fast.then(|| {
                            let w: Vec<i128> = idx.iter().map(|&i| int_set[i]).collect();
                            grid_nilpotent(&u.table, &VSource::Composite { terms: &terms, w: &w }, &h.table)
                        });
                        if grid_ok != Some(false) {
                            let build = || {
                                let w: Vec<Rational> = idx.iter().map(|&i| set[i].clone()).collect();
                                composite_poly(&terms, &w, &u.poly, &h.poly)
                            };
                            offer(&u.poly, &build, &h.poly, grid_ok)?;
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(examined as u128, count);
    Ok(Enumeration {
        examined,
        grid_points: fast.then_some(pts.len()),
    })
}

/// Every map of the space, built symbolically.
pub fn all_instances(space: &SearchSpace, cap: u64) -> Result<Vec<PolyMap>, SearchError> {
    let mut out = Vec::new();
    enumerate(space, cap, Filter::All, &mut |m| out.push(m))?;
    Ok(out)
}

/// The nilpotent maps of the space.
pub fn nilpotent_instances(space: &SearchSpace, cap: u64) -> Result<Vec<PolyMap>, SearchError> {
    let mut out = Vec::new();
    enumerate(space, cap, Filter::Nilpotent, &mut |m| out.push(m))?;
    Ok(out)
}

fn exhaustive_search(space: &SearchSpace, cap: u64) -> Result<TheoremReport, SearchError> {
    let mut tally = Tally {
        nilpotent: 0,
        counterexamples: BTreeSet::new(),
        witnesses: BTreeSet::new(),
        in_constant_family: 0,
    };
    let run = enumerate(space, cap, Filter::Nilpotent, &mut |m| tally.record(&m))?;

    let mut report = TheoremReport::empty(space.shape, "exhaustive", 0);
    report.instances_examined = run.examined;
    report.nilpotent_found = tally.nilpotent;
    report.counterexamples = tally.counterexamples.iter().map(source).collect();
    report.expected_witnesses = tally.witnesses.iter().map(source).collect();
    if !tally.witnesses.is_empty() || space.shape == ShapeId::R2_2 {
        report.expected_witness_count = Some(tally.witnesses.len() as u64);
        report.witnesses_in_constant_family = Some(tally.in_constant_family);
    }
    report.coefficient_domain = space.describe();
    report.search_method = Some(match run.grid_points {
        Some(n) => format!("integer grid prefilter on {n} points, symbolic confirmation"),
        None => "symbolic".to_string(),
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Family verification

pub fn family_domain() -> String {
    "g: degree 1..=4, g(0) = 0, coefficients in -2..=2 with leading coefficient in {-2, -1, 1, 2}; \
     a, v1, c0 in {-2, -1, 1, 2}; l1, l2, l2tilde in -2..=2"
        .to_string()
}

/// Builds the family instance a classification shape is checked on.
pub fn family_instance(shape: ShapeId, params: &FamilyParams) -> Option<PolyMap> {
    match shape {
        ShapeId::T3_3 | ShapeId::T3_5 => theorem_3_3_family(params).ok(),
        ShapeId::C3_7 => corollary_3_7_family(params).ok(),
        ShapeId::C3_8 => {
            // Keep only the leading term of g, so that v is a pure power;
            // its only root is 0.
            let Degree::Finite(n) = params.g.degree() else {
                return None;
            };
            let mut p = params.clone();
            p.g = UniPoly::monomial(n, params.g.coeff(n));
            p.l2tilde = Rational::zero();
            corollary_3_7_family(&p).ok()
        }
        _ => None,
    }
}

/// Named checks a family instance must pass.
pub fn family_checks(shape: ShapeId, map: &PolyMap) -> Vec<(String, bool)> {
    let mut out = vec![
        ("nilpotent".to_string(), is_nilpotent(&jacobian_matrix(map))),
        ("H(0) = 0".to_string(), origin_check(map)),
        ("independent".to_string(), linear_dependence(map).is_independent()),
    ];
    let transposed = matches!(shape, ShapeId::C3_7 | ShapeId::C3_8);
    // The degree relations are stated for (u(x,y), v(x,y,z), h(x,y)).
    let oriented = if transposed {
        conjugate_by_transposition(map)
    } else {
        map.clone()
    };
    for c in degree_bounds(&oriented) {
        out.push((c.name, c.holds));
    }
    let (a, b) = (&oriented.u, &oriented.h);
    out.push(("plane components free of z".into(), !a.depends_on(Var::Z) && !b.depends_on(Var::Z)));
    let generated = find_kernel_generator(a, b, default_max_degree(a, b)).is_ok_and(|g| {
        let top = default_max_degree(a, b);
        express_in(a, &g.q, top).is_ok() && express_in(b, &g.q, top).is_ok()
    });
    out.push(("plane components share a generator".into(), generated));
    if shape == ShapeId::C3_8 {
        out.push(("v = (a(y) x + b(y))^n".into(), is_power_of_x_linear(&map.v)));
    }
    out
}

fn verify_family(shape: ShapeId, trials: u64, seed: u64) -> TheoremReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TheoremReport::empty(shape, "family", seed);
    report.coefficient_domain = family_domain();
    report.prng = Some(PRNG_ID.to_string());
    report.gcd_reading = Some(GCD_READING.to_string());
    for _ in 0..trials {
        let params = FamilyParams::sample(&mut rng);
        report.family_trials += 1;
        let Some(map) = family_instance(shape, &params) else {
            report.family_failures += 1;
            *report.failure_breakdown.entry("construction".into()).or_insert(0) += 1;
            continue;
        };
        let mut failed = false;
        for (name, holds) in family_checks(shape, &map) {
            if !holds {
                failed = true;
                *report.failure_breakdown.entry(name).or_insert(0) += 1;
            }
        }
        if failed {
            report.family_failures += 1;
            report.family_failure_examples.push(MapSource::from_map(&map));
        } else {
            report.nilpotent_found += 1;
        }
        // The side hypotheses are not implied by the family: count coverage.
        let shape_report = shape_matches(&map, shape);
        for c in &shape_report.checks {
            if c.holds {
                *report.hypothesis_coverage.entry(c.name.clone()).or_insert(0) += 1;
            }
        }
        if shape_report.matches {
            *report.hypothesis_coverage.entry("all hypotheses".into()).or_insert(0) += 1;
        }
    }
    report
}
