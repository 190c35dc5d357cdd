//! Exhaustive searches over small coefficient spaces plus seeded family
//! sampling. Pass a degree bound as the first argument (default 1).

use nilpotent_maps::search::{verify_theorem, SearchSpace, DEFAULT_INSTANCE_CAP};
use nilpotent_maps::ShapeId;

fn main() {
    let degree: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    for shape in [ShapeId::T2_1, ShapeId::T2_4, ShapeId::T2_6, ShapeId::T3_11, ShapeId::R2_2] {
        let mut space = SearchSpace::default_for(shape);
        space.max_total_degree = degree;
        let r = verify_theorem(&space, 0, 0, DEFAULT_INSTANCE_CAP).expect("within cap");
        println!(
            "{shape}: {} maps, {} nilpotent, {} counterexamples, {} witnesses off the origin ({} ms)",
            r.instances_examined,
            r.nilpotent_found,
            r.counterexamples.len(),
            r.expected_witness_count.unwrap_or(0),
            r.elapsed_ms
        );
    }
    for shape in [ShapeId::T3_3, ShapeId::T3_5, ShapeId::C3_7, ShapeId::C3_8] {
        let r = verify_theorem(&SearchSpace::default_for(shape), 20, 7, DEFAULT_INSTANCE_CAP).unwrap();
        println!(
            "{shape}: {} sampled members, {} failures, hypotheses met by {}",
            r.family_trials,
            r.family_failures,
            r.hypothesis_coverage.get("all hypotheses").copied().unwrap_or(0)
        );
    }
}
