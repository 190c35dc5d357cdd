//! Recover a common generator q of two plane polynomials with vanishing
//! Jacobian and write both as polynomials in q.

use nilpotent_maps::kernel::{apply_derivation, recombine};
use nilpotent_maps::poly::fmt_rational;
use nilpotent_maps::{express_in, find_kernel_generator, parse};

fn main() {
    let q0 = parse("x*y - y^2 + x").unwrap();
    let u = &(&q0 * &q0).scale(&nilpotent_maps::poly::int(3)) - &q0;
    let h = q0.pow(3);
    println!("u = {u}");
    println!("h = {h}");
    println!("h_y u_x - h_x u_y = {}", apply_derivation(&h, &u).unwrap());

    let g = find_kernel_generator(&u, &h, 6).expect("u and h share a generator");
    println!("q = {} (degree {})", g.q, g.degree);
    for (name, p) in [("u", &u), ("h", &h), ("q0", &q0)] {
        let c = express_in(p, &g.q, 6).unwrap();
        let shown: Vec<String> = c.iter().map(fmt_rational).collect();
        println!("{name} = sum c_i q^i with c = ({}); exact: {}", shown.join(", "), recombine(&c, &g.q) == *p);
    }

    match find_kernel_generator(&parse("x").unwrap(), &parse("y").unwrap(), 2) {
        Ok(_) => unreachable!(),
        Err(e) => println!("(x, y): {e}"),
    }
}
