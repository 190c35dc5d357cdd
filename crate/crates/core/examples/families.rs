//! Build members of the classified families, check them, and relate them
//! by linear conjugation.

use nilpotent_maps::families::{degree_bounds, shear, transposition};
use nilpotent_maps::jacobian::nilpotency_residuals;
use nilpotent_maps::poly::int;
use nilpotent_maps::{
    conjugate_linear, corollary_3_7_family, linear_dependence, origin_check, parse, parse_uni,
    remark_2_2_family, shape_matches, theorem_3_3_family, FamilyParams, ShapeId,
};

fn main() {
    let params = FamilyParams::from_json(
        r#"{"g":"t^2 - t","a":"2","v1":"-1","c0":"1/2","l1":"1","l2":"-1","l2tilde":"0"}"#,
    )
    .unwrap();
    let h = theorem_3_3_family(&params).unwrap();
    println!("family member: {h}");
    println!("  residuals zero: {}", nilpotency_residuals(&h).all_zero());
    println!("  {}; H(0) = 0: {}", linear_dependence(&h), origin_check(&h));
    for c in degree_bounds(&h) {
        println!("  {}: {}", c.name, c.holds);
    }
    for shape in [ShapeId::T3_3, ShapeId::T3_5] {
        let r = shape_matches(&h, shape);
        println!("  {shape}: matches = {}", r.matches);
    }

    let swapped = corollary_3_7_family(&params).unwrap();
    let conj = conjugate_linear(&h, &transposition()).unwrap();
    println!("transposed family equals T^-1 H T: {}", swapped == conj);

    let sheared = conjugate_linear(&h, &shear(&int(3))).unwrap();
    println!("after a shear, still nilpotent: {}", nilpotency_residuals(&sheared).all_zero());

    let constant = remark_2_2_family(&parse_uni("t^2").unwrap(), &int(1), &parse("x + x*y").unwrap()).unwrap();
    println!(
        "constant-component member {constant}: nilpotent {}, {}, H(0) = 0: {}",
        nilpotency_residuals(&constant).all_zero(),
        linear_dependence(&constant),
        origin_check(&constant)
    );
}
