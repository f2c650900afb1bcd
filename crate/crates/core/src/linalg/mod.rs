//! Dense complex linear algebra for two-mode systems.

mod mat2;
mod permanent;

pub use mat2::{eig2, expm2, svals2, Mat2, Spectrum2, EP_TOLERANCE, SERIES_THRESHOLD};
pub use permanent::{is_subunitary, permanent, SquareMatrix, MAX_PERMANENT_SIZE};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

pub(crate) const I: Complex = Complex::new(0.0, 1.0);

pub(crate) fn check_finite(z: Complex, what: &str) -> crate::Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::domain(format!("{what} is not finite: {z}")))
    }
}
