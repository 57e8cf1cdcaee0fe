//! Truncated fractional power series in `u = (x - x0)^alpha`.
use conformable_frobenius::{FracSeries, Result};

fn main() -> Result<()> {
    let alpha = 0.5;
    // 1 + 2u + 3u^2 and 1 - u
    let f = FracSeries::new(0.0, alpha, 0.0, vec![1.0, 2.0, 3.0])?;
    let g = FracSeries::new(0.0, alpha, 0.0, vec![1.0, -1.0, 0.0])?;

    println!("f + g     = {:?}", f.checked_add(&g)?.coeffs());
    println!("f * g     = {:?}", f.checked_mul(&g)?.coeffs());
    println!("1 / g     = {:?}", g.reciprocal()?.coeffs());

    // T u^e = e alpha u^(e-1); a u^-1 term integrates to a logarithm
    let h = FracSeries::new(0.0, alpha, 1.5, vec![4.0, 1.0])?;
    let dh = h.conformable_deriv();
    println!("T h       = {:?} at base {}", dh.coeffs(), dh.base());
    let inv = FracSeries::new(0.0, alpha, -1.0, vec![2.0, 1.0])?;
    let (ih, log) = inv.conformable_antideriv();
    println!("I(2/u + 1) = {log} ln(x) + {:?} at base {}", ih.coeffs(), ih.base());

    let e = FracSeries::new(0.0, alpha, 1.0, vec![1.0])?.exp(6)?;
    println!("exp(u)    = {:?}", e.coeffs());
    let x = 0.09;
    println!("exp(u) at x = {x}: {} (exact {})", e.eval(x)?, x.powf(alpha).exp());
    Ok(())
}
