//! Ordinary, regular singular and essential singular points.
use conformable_frobenius::classify::classify_monic;
use conformable_frobenius::{classify_point, to_monic, LaurentAlphaSeries, ProblemSpec, Result};

fn main() -> Result<()> {
    let alpha = 0.5;
    let l = |min_step, c: &[f64]| LaurentAlphaSeries::new(0.0, alpha, min_step, c.to_vec());

    // T T y - 2 u^-1 T y + y = 0
    println!("P = -2/u, Q = 1      : {}", classify_point(&l(-1, &[-2.0])?, &l(0, &[1.0])?)?);
    // Q with a third-order pole
    println!("P = 1, Q = u^-3      : {}", classify_point(&l(0, &[1.0])?, &l(-3, &[1.0])?)?);
    println!("P = 1, Q = 3         : {}", classify_point(&l(0, &[1.0])?, &l(0, &[3.0])?)?);

    // first-order equation T y + u^-1 y = 0
    println!("T y + y/u = 0        : {}", classify_monic(&[l(-1, &[1.0])?])?);

    // from the u^2 T T y + u p T y + q y = 0 form
    let bessel = ProblemSpec::new(alpha, 0.0, vec![alpha], vec![-0.01, 0.0, 1.0])?;
    let (p, q) = to_monic(&bessel);
    println!("Bessel analog        : {}", classify_point(&p, &q)?);
    Ok(())
}
