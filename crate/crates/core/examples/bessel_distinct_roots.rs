//! Two plain series when the indicial roots differ by a non-integer.
use conformable_frobenius::{solve, ProblemSpec, Result};

fn main() -> Result<()> {
    // Bessel analog: p = [alpha], q = [-alpha^2 nu^2, 0, 1], roots +-nu
    let (alpha, nu) = (0.5, 1.0 / 3.0);
    let prob = ProblemSpec::new(alpha, 0.0, vec![alpha], vec![-alpha * alpha * nu * nu, 0.0, 1.0])?
        .with_terms(12)?;
    let res = solve(&prob)?;
    println!("case {}  s1 = {}  s2 = {}", res.roots.case, res.roots.s1, res.roots.s2);
    for (k, (a, b)) in res.y1.coeffs().iter().zip(res.y2.power_part.coeffs()).enumerate() {
        println!("{k:>3} {a:>24.16e} {b:>24.16e}");
    }
    for x in [0.1, 0.5, 1.0] {
        println!("y1({x}) = {:.12}  y2({x}) = {:.12}", res.y1.eval(x)?, res.y2.eval(x)?);
    }
    Ok(())
}
