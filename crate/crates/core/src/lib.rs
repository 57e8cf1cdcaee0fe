//! Fractional power-series solutions of sequential conformable fractional
//! differential equations
//!
//! ```text
//! (x - x0)^(2a) T T y + (x - x0)^a p(x) T y + q(x) y = 0,    0 < a <= 1
//! ```
//!
//! around a regular alpha-singular point, where `T` is the left conformable
//! derivative `T f(x) = lim (f(x + e (x - x0)^(1 - a)) - f(x)) / e`.
//!
//! - [`series`]: truncated series in `u = (x - x0)^a` with a real leading
//!   exponent, their conformable derivative and antiderivative, and values
//!   carrying a `ln(x - x0)` term.
//! - [`classify`]: ordinary / regular-singular / essential-singular points.
//! - [`frobenius`]: indicial roots, the coefficient recurrence, logarithmic
//!   second solutions via reduction of order, and the convergence majorant.
//! - [`verify`]: numerical and structural cross-checks.
//! - [`cli`]: problem files, JSON reports and the `cfrob` command.
//!
//! ```
//! use conformable_frobenius::{solve, ProblemSpec, RootCase};
//!
//! // order-zero Bessel equation, alpha = 1: equal roots, logarithmic y2
//! let prob = ProblemSpec::new(1.0, 0.0, vec![1.0], vec![0.0, 0.0, 1.0]).unwrap();
//! let sol = solve(&prob).unwrap();
//! assert_eq!(sol.roots.case, RootCase::EqualRoots);
//! assert_eq!(sol.y2.log_coeff, 1.0);
//! ```

pub mod classify;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod series;
pub mod verify;
mod wide;

pub use classify::{classify_point, to_monic, LaurentAlphaSeries, PointClass};
pub use error::{Error, Result};
pub use frobenius::{
    indicial, majorant, recurrence, reduction_of_order, shifted_poly, solve, FrobeniusResult,
    IndicialData, MajorantTrace, ProblemSpec, RootCase,
};
pub use series::{FracSeries, LogSolution};
