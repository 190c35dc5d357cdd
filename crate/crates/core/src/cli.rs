//! Command implementations behind the `nilmap` binary. Each returns a
//! serializable report; the binary only handles argument parsing, output
//! and exit codes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dependence::{linear_dependence, origin_check};
use crate::families::{
    corollary_3_7_family, remark_2_2_family, shape_matches, theorem_3_3_family, FamilyError, FamilyParams,
    ShapeId, ShapeReport,
};
use crate::jacobian::{char_coeffs, deg_z_structure, is_nilpotent, jacobian_matrix, matrix_cube_is_zero};
use crate::kernel::{default_max_degree, express_in, find_kernel_generator, KernelError};
use crate::parser::{format, parse, parse_map, parse_rational, parse_uni, MapParseError, MapSource, ParseError};
use crate::poly::{fmt_rational, Rational};
use crate::search::{verify_theorem, SearchError, SearchSpace, TheoremReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Map(#[from] MapParseError),
    #[error("{which}: {source}")]
    Parse {
        which: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Search(SearchError::CapExceeded { .. }) => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCoeffReport {
    pub trace: String,
    pub minor_sum: String,
    pub det: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub independent: bool,
    /// `(c1, c2, c3)` with `c1 u + c2 v + c3 h = 0`.
    pub witness: Option<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZReport {
    pub deg_z_v: String,
    pub leading_z_coeff: String,
    pub linear_with_constant_coeff: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub map: MapSource,
    pub jacobian: [[String; 3]; 3],
    pub char_coeffs: CharCoeffReport,
    pub nilpotent: bool,
    pub matrix_cube_zero: bool,
    pub origin: bool,
    pub dependence: DependenceReport,
    pub deg_z_structure: ZReport,
    pub matching_shapes: Vec<ShapeId>,
    pub shapes: Vec<ShapeReport>,
}

impl CheckReport {
    pub fn summary(&self) -> String {
        let shapes: Vec<&str> = self.matching_shapes.iter().map(|s| s.name()).collect();
        format!(
            "nilpotent: {}; independent: {}; origin: {}; shapes: {}",
            self.nilpotent,
            self.dependence.independent,
            self.origin,
            if shapes.is_empty() { "none".to_string() } else { shapes.join(", ") }
        )
    }
}

pub fn cmd_check(src: &MapSource) -> Result<CheckReport, CliError> {
    let map = parse_map(src)?;
    let j = jacobian_matrix(&map);
    let cc = char_coeffs(&j);
    let dep = linear_dependence(&map);
    let z = deg_z_structure(&map);
    let shapes: Vec<ShapeReport> = ShapeId::ALL.iter().map(|&s| shape_matches(&map, s)).collect();
    Ok(CheckReport {
        map: MapSource::from_map(&map),
        jacobian: std::array::from_fn(|i| std::array::from_fn(|k| format(j.get(i, k)))),
        char_coeffs: CharCoeffReport {
            trace: format(&cc.trace),
            minor_sum: format(&cc.minor_sum),
            det: format(&cc.det),
        },
        nilpotent: is_nilpotent(&j),
        matrix_cube_zero: matrix_cube_is_zero(&j),
        origin: origin_check(&map),
        dependence: DependenceReport {
            independent: dep.is_independent(),
            witness: dep.witness().map(|w| std::array::from_fn(|i| fmt_rational(&w[i]))),
        },
        deg_z_structure: ZReport {
            deg_z_v: z.deg_z_v.to_string(),
            leading_z_coeff: format(&z.leading_z_coeff),
            linear_with_constant_coeff: z.is_linear_with_constant_coeff(),
        },
        matching_shapes: shapes.iter().filter(|r| r.matches).map(|r| r.shape).collect(),
        shapes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindQReport {
    pub q: String,
    pub degree: u32,
    /// `u = sum u_coeffs[i] q^i`.
    pub u_coeffs: Vec<String>,
    pub h_coeffs: Vec<String>,
}

impl FindQReport {
    pub fn summary(&self) -> String {
        format!(
            "q = {}; u-coeffs ({}); h-coeffs ({})",
            self.q,
            self.u_coeffs.join(", "),
            self.h_coeffs.join(", ")
        )
    }
}

fn parse_tagged(text: &str, which: &'static str) -> Result<crate::poly::Polynomial, CliError> {
    parse(text).map_err(|source| CliError::Parse { which, source })
}

pub fn cmd_find_q(u_src: &str, h_src: &str, max_degree: Option<u32>) -> Result<FindQReport, CliError> {
    let u = parse_tagged(u_src, "u")?;
    let h = parse_tagged(h_src, "h")?;
    let bound = max_degree.unwrap_or_else(|| default_max_degree(&u, &h));
    let g = find_kernel_generator(&u, &h, bound)?;
    let top = default_max_degree(&u, &h);
    let strs = |c: Vec<Rational>| c.iter().map(fmt_rational).collect();
    Ok(FindQReport {
        q: format(&g.q),
        degree: g.degree,
        u_coeffs: strs(express_in(&u, &g.q, top)?),
        h_coeffs: strs(express_in(&h, &g.q, top)?),
    })
}

/// Inputs of the constant-component family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantFamilyInput {
    /// Univariate in `t`, substituted with `y`.
    pub u: String,
    pub c: String,
    pub h: String,
}

pub fn cmd_gen_family(which: ShapeId, params_json: &str) -> Result<MapSource, CliError> {
    let bad = |e: serde_json::Error| CliError::Params(e.to_string());
    let map = match which {
        ShapeId::T3_3 | ShapeId::C3_7 => {
            let params = FamilyParams::from_json(params_json).map_err(bad)?;
            if which == ShapeId::T3_3 {
                theorem_3_3_family(&params)?
            } else {
                corollary_3_7_family(&params)?
            }
        }
        ShapeId::R2_2 => {
            let input: ConstantFamilyInput = serde_json::from_str(params_json).map_err(bad)?;
            let u = parse_uni(&input.u).map_err(|source| CliError::Parse { which: "u", source })?;
            let c = parse_rational(&input.c).map_err(|source| CliError::Parse { which: "c", source })?;
            let h = parse_tagged(&input.h, "h")?;
            remark_2_2_family(&u, &c, &h)?
        }
        other => {
            return Err(CliError::Params(format!(
                "no generator for {other}; use T3_3, C3_7 or R2_2"
            )))
        }
    };
    Ok(MapSource::from_map(&map))
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub theorem: ShapeId,
    pub max_degree: Option<u32>,
    pub coeffs: Option<Vec<Rational>>,
    pub require_origin: Option<bool>,
    pub trials: u64,
    pub seed: u64,
    pub cap: u64,
    /// Expected witnesses listed in the report; the count is always kept.
    pub max_listed: usize,
}

impl VerifyOptions {
    pub fn new(theorem: ShapeId) -> Self {
        VerifyOptions {
            theorem,
            max_degree: None,
            coeffs: None,
            require_origin: None,
            trials: crate::search::DEFAULT_TRIALS,
            seed: crate::search::DEFAULT_SEED,
            cap: crate::search::DEFAULT_INSTANCE_CAP,
            max_listed: 100,
        }
    }

    pub fn space(&self) -> SearchSpace {
        let mut space = SearchSpace::default_for(self.theorem);
        if let Some(d) = self.max_degree {
            space.max_total_degree = d;
        }
        if let Some(c) = &self.coeffs {
            space.coefficient_set = c.clone();
        }
        if let Some(o) = self.require_origin {
            space.require_origin = o;
        }
        space
    }
}

/// Comma-separated rationals, e.g. `-1,0,1/2`.
pub fn parse_coeff_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|source| CliError::Parse { which: "coeffs", source }))
        .collect()
}

pub fn cmd_verify(opts: &VerifyOptions) -> Result<TheoremReport, CliError> {
    let mut report = verify_theorem(&opts.space(), opts.trials, opts.seed, opts.cap)?;
    report.truncate_witnesses(opts.max_listed);
    Ok(report)
}

pub fn verify_exit_code(report: &TheoremReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

pub fn verify_summary(report: &TheoremReport) -> String {
    let mut s = format!(
        "{} ({}): {} instances, {} nilpotent, {} counterexamples",
        report.theorem,
        report.mode,
        report.instances_examined,
        report.nilpotent_found,
        report.counterexamples.len()
    );
    if report.family_trials > 0 {
        s += &format!("; family {} trials, {} failures", report.family_trials, report.family_failures);
    }
    if let Some(n) = report.expected_witness_count {
        s += &format!("; {n} expected witnesses with H(0) != 0");
    }
    s += &format!("; {} ms", report.elapsed_ms);
    s
}

/// Every listed counterexample parses back, is nilpotent and independent.
pub fn reverify_counterexamples(report: &TheoremReport) -> bool {
    report.counterexamples.iter().all(|src| {
        parse_map(src).is_ok_and(|m| is_nilpotent(&jacobian_matrix(&m)) && linear_dependence(&m).is_independent())
    })
}
