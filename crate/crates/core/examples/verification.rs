//! Independent checks of a solved problem.
use conformable_frobenius::verify::{
    cancellation_error, numeric_talpha, residual, substitution_oracle, wronskian_abel,
};
use conformable_frobenius::{solve, LogSolution, ProblemSpec, Result};

fn main() -> Result<()> {
    let prob = ProblemSpec::new(1.0, 0.0, vec![1.0], vec![0.0, 0.0, 1.0])?;
    let res = solve(&prob)?;
    let y1 = LogSolution::plain(res.y1.clone());
    let y2 = &res.y2;

    let points = [0.1, 0.2, 0.3, 0.4, 0.5];
    let r = residual(&prob, y2, &points)?;
    println!("residual of y2: max {:.3e}, pass {}", r.max_residual(), r.pass);
    println!("coefficient cancellation of y2: {:.3e}", cancellation_error(&prob, y2)?);
    println!("Wronskian vs Abel: {:.3e}", wronskian_abel(&prob, &y1, y2, 0.1, &points[1..])?);
    println!("substitution oracle: {:.3e}", substitution_oracle(&prob, 30)?.max_deviation());

    // forward-quotient conformable derivative against the termwise one
    let alpha = 0.5;
    let f = |x: f64| x.powf(1.5);
    let x = 0.7;
    let numeric = numeric_talpha(f, x, 0.0, alpha, 1e-6)?;
    println!("T f({x}): numeric {numeric:.8}, exact {:.8}", 1.5 * x.powf(1.0));
    Ok(())
}
