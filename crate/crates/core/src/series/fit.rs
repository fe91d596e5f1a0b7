//! Certifying a rational closed form for a coefficient sequence.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{fmt_q, Poly, Q};
use crate::series::rational::RationalSeries;

/// Extra coefficients, beyond the minimum needed to determine a numerator,
/// that must be checked before a fit is accepted.
pub const FIT_MARGIN: usize = 2;

/// Fits `coeffs` to `N(t) / D(t)` with `D = prod (1 - l)^e` given and
/// `deg N <= max_num_degree`.
///
/// The numerator is the product `coeffs * D` truncated to the numerator
/// degree; every product coefficient above that degree and inside the known
/// window must vanish. The window must hold at least
/// `deg D + max_num_degree + FIT_MARGIN` coefficients.
pub fn fit_rational(
    coeffs: &[Q],
    denominator: &[(Poly, u32)],
    max_num_degree: usize,
) -> Result<RationalSeries> {
    let shape = RationalSeries::new(Poly::one(1), denominator.to_vec())?;
    let den = shape.denominator_poly();
    let den_degree = den.total_degree().unwrap_or(0) as usize;
    let needed = den_degree + max_num_degree + FIT_MARGIN;
    if coeffs.len() < needed {
        return Err(Error::InsufficientData(format!(
            "{} coefficients given, {needed} needed",
            coeffs.len()
        )));
    }
    let window = (coeffs.len() - 1) as u32;
    let product = Poly::from_coeffs(coeffs).mul_trunc(&den, window);
    let product = product.to_coeffs();
    for (i, c) in product.iter().enumerate().skip(max_num_degree + 1) {
        if !c.is_zero() {
            return Err(Error::FitFailure(format!(
                "coefficient {} of the numerator is {}, beyond degree {max_num_degree}",
                i,
                fmt_q(c)
            )));
        }
    }
    let num: Vec<Q> = product.into_iter().take(max_num_degree + 1).collect();
    RationalSeries::new(Poly::from_coeffs(&num), denominator.to_vec())
}
