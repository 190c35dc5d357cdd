//! Jacobian, characteristic coefficients and the cube cross-check for a
//! few maps.

use nilpotent_maps::jacobian::{matrix_cube_is_zero, nilpotency_residuals, xy_shape_system};
use nilpotent_maps::{char_coeffs, is_nilpotent, jacobian_matrix, parse_map, MapSource};

fn main() {
    let maps = [
        MapSource::new("y+x^2", "z-2*x*(y+x^2)", "(y+x^2)^2"),
        MapSource::new("y", "1", "x"),
        MapSource::new("x", "y", "z"),
        MapSource::new("y*z", "-z^2", "0"),
    ];
    for src in &maps {
        let map = parse_map(src).expect("valid input");
        let j = jacobian_matrix(&map);
        let cc = char_coeffs(&j);
        println!("H = {map}");
        println!("  JH = {j}");
        println!("  trace = {}, minor sum = {}, det = {}", cc.trace, cc.minor_sum, cc.det);
        println!("  nilpotent: {}, JH^3 = 0: {}", is_nilpotent(&j), matrix_cube_is_zero(&j));
        if let Some(sys) = xy_shape_system(&map) {
            let [a, b, c] = &sys;
            println!("  plane-shape system: {a}; {b}; {c}");
        }
        println!("  residuals all zero: {}", nilpotency_residuals(&map).all_zero());
    }
}
