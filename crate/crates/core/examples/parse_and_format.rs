//! Parse expressions, print them canonically, and inspect parse errors.

use nilpotent_maps::parser::{parse_uni, ParseError};
use nilpotent_maps::{format, parse, Var};

fn main() -> Result<(), ParseError> {
    let p = parse("(y + x^2)^2 - 3/2*x*y + z")?;
    println!("canonical:     {}", format(&p));
    println!("total degree:  {}", p.total_degree());
    println!("deg_y:         {}", p.degree_in(Var::Y));
    println!("d/dx:          {}", p.partial(Var::X));
    println!("round trip ok: {}", parse(&format(&p))? == p);

    let g = parse_uni("t^3 - 2*t")?;
    println!("g(t) = {g}, g(x + y) = {}", g.eval_at(&parse("x + y")?));

    for bad in ["x**2", "x^-1", "x + w", "1/0", "(x + 1"] {
        let err = parse(bad).unwrap_err();
        println!("{bad:>8}  ->  {err}");
    }
    Ok(())
}
