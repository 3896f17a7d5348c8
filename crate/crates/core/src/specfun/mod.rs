//! Special-function kernels: modified Bessel `K_nu`, gamma and incomplete
//! gamma, Riemann/Hurwitz/Dedekind zeta values, the additive character and
//! compensated summation.

mod bessel;
mod gamma;
mod sum;
mod zeta;

pub use bessel::{bessel_k, bessel_k_quadrature};
pub use gamma::{digamma, gamma, ln_gamma, upper_gamma};
pub use sum::{ordered_par_sum, ordered_par_sum_c, CompensatedSum, ComplexCompensatedSum};
pub use zeta::{
    dedekind_zeta, dedekind_zeta_element_sum, dedekind_zeta_residue, hurwitz_zeta,
    kronecker_symbol, l_function, l_function_at_one, riemann_zeta, vol_gamma, ZetaMethod,
    ZetaValue,
};

use num_complex::Complex64;
use std::f64::consts::PI;

/// Euler-Mascheroni constant, 20 digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// The additive character `e(x) = exp(2 pi i x)`.
pub fn e_char(x: f64) -> Complex64 {
    // reduce first so large arguments keep full accuracy
    let t = x - x.round();
    Complex64::from_polar(1.0, 2.0 * PI * t)
}
