//! Majorant sequence bounding the first-solution coefficients.
use conformable_frobenius::{indicial, majorant, ProblemSpec, Result};

fn main() -> Result<()> {
    let (alpha, nu) = (0.5, 0.3);
    let prob = ProblemSpec::new(alpha, 0.0, vec![alpha], vec![-alpha * alpha * nu * nu, 0.0, 1.0])?;
    let roots = indicial(prob.p_coeff(0), prob.q_coeff(0), alpha)?;
    let r = 1.0;
    let trace = majorant(&prob, &roots, r, 200)?;
    println!("M = {}, N = {}, dominates: {}", trace.m, trace.n, trace.dominates());
    let ratios = trace.ratios();
    for k in [1, 10, 50, 100, 200] {
        println!(
            "k = {k:>3}  |c_k| = {:.3e}  C_k = {:.3e}  C_k/C_(k-1) = {:?}",
            trace.abs_c[k], trace.bounds[k], ratios[k - 1]
        );
    }
    println!("limit r^-alpha = {}", r.powf(-alpha));
    Ok(())
}
