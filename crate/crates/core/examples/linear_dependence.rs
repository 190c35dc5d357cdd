//! Decide whether the components satisfy a constant linear relation.

use nilpotent_maps::dependence::{coefficient_matrix, combine};
use nilpotent_maps::{linear_dependence, origin_check, parse_map, MapSource};

fn main() {
    let maps = [
        MapSource::new("x", "2*x", "z"),
        MapSource::new("x", "y", "x - 2*y"),
        MapSource::new("y", "1", "x"),
        MapSource::new("y+x^2", "z-2*x*(y+x^2)", "(y+x^2)^2"),
    ];
    for src in &maps {
        let map = parse_map(src).expect("valid input");
        let (monos, m) = coefficient_matrix(&map);
        let result = linear_dependence(&map);
        println!("H = {map}");
        println!("  {} monomials, rank {}", monos.len(), m.rank());
        println!("  {result}; H(0) = 0: {}", origin_check(&map));
        if let Some(w) = result.witness() {
            println!("  relation evaluates to {}", combine(&map, w));
        }
    }
}
