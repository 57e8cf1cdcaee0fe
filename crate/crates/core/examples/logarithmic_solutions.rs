//! Second solutions by reduction of order: equal roots and integer gaps.
use conformable_frobenius::{solve, ProblemSpec, Result};

fn show(label: &str, prob: &ProblemSpec) -> Result<()> {
    let res = solve(prob)?;
    let y2 = &res.y2;
    println!("{label}: case {}, log_coeff {}", res.roots.case, y2.log_coeff);
    println!("  power part from u^{}: {:?}", y2.power_part.base(), &y2.power_part.coeffs()[..6]);
    Ok(())
}

fn main() -> Result<()> {
    // order-0 Bessel: equal roots, log_coeff = 1, b = 1/4 at x^2, -3/128 at x^4
    show("nu = 0", &ProblemSpec::new(1.0, 0.0, vec![1.0], vec![0.0, 0.0, 1.0])?)?;
    // order-1/2 Bessel: gap 1 but no logarithm, y2 = x^-1/2 cos x up to scale
    show("nu = 1/2", &ProblemSpec::new(1.0, 0.0, vec![1.0], vec![-0.25, 0.0, 1.0])?)?;
    // alpha = 1/2, nu = 1: gap 2 with a logarithm
    show("alpha = 1/2, nu = 1", &ProblemSpec::new(0.5, 0.0, vec![0.5], vec![-0.25, 0.0, 1.0])?)?;
    Ok(())
}
