//! Sugeno (fuzzy) integrals of real functions over interval domains, with
//! numeric checks of Hardy-type inequalities for them.
//!
//! The Sugeno integral of `f >= 0` over a set `A` with monotone measure `mu` is
//!
//! ```text
//! SINT f = sup_{alpha >= 0} min(alpha, mu(A intersect {f >= alpha}))
//! ```
//!
//! Everything here is built from that definition:
//!
//! - [`expr`]: a tiny expression language for the integrands (`x`, arithmetic,
//!   `exp`, `ln`), with out-of-domain points reported as typed errors rather
//!   than NaN.
//! - [`measure`]: intervals, finite unions of intervals, and the three
//!   weighted measures (uniform `dx`, reciprocal `dx/x`, expression density).
//! - [`levelset`]: `{x in A : f(x) >= alpha}` as an interval union, via grid
//!   scan plus bisection refinement.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature (open rule, endpoints never
//!   evaluated) and the log-average helper `ln_cumulative`.
//! - [`sugeno`]: the distribution function `F(alpha)`, the fixed-point solver
//!   for the integral, and a brute-force grid oracle.
//! - [`ineq`]: checks of the Pólya–Knopp-type inequalities for Sugeno
//!   integrals, a generalized variant with an arbitrary bijection, a
//!   Hardy–Knopp form with a convex kernel, and an exploratory Jensen probe.
//! - [`harness`]: seeded random families of well-shaped integrands, sweep
//!   drivers, and the published-worked-examples audit.
//! - [`cli`]: the `sugeno` command-line tool over all of the above.

pub mod cli;
pub mod expr;
pub mod harness;
pub mod ineq;
pub mod levelset;
pub mod measure;
pub mod quad;
pub mod sugeno;
