use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{check_finite, Complex};
use crate::{Error, Result};

/// Coalescence tolerance on the eigenvalue gap `|λ1 - λ2|`.
pub const EP_TOLERANCE: f64 = 1e-9;

/// Below this value of `|μs|` the exponential switches to its even power
/// series, which makes the defective case `μ = 0` exact.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// A 2×2 complex matrix, `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

impl Mat2 {
    pub const fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[Complex; 2]; 2]) -> Self {
        Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn identity() -> Self {
        Mat2::scalar(Complex::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::scalar(Complex::new(0.0, 0.0))
    }

    pub fn scalar(c: Complex) -> Self {
        let zero = Complex::new(0.0, 0.0);
        Mat2::new(c, zero, zero, c)
    }

    /// Entry by zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Complex {
        match (row, col) {
            (0, 0) => self.a11,
            (0, 1) => self.a12,
            (1, 0) => self.a21,
            (1, 1) => self.a22,
            _ => panic!("Mat2 index ({row}, {col}) out of range"),
        }
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn trace(&self) -> Complex {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn scale(&self, c: Complex) -> Self {
        Mat2::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Inverse via the adjugate. Fails when the determinant vanishes.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::domain("matrix is singular"));
        }
        let inv = det.inv();
        Ok(Mat2::new(
            self.a22 * inv,
            -self.a12 * inv,
            -self.a21 * inv,
            self.a11 * inv,
        ))
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_finite(&self) -> Result<()> {
        for z in self.entries() {
            check_finite(z, "matrix entry")?;
        }
        Ok(())
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl Mul<Complex> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Complex) -> Mat2 {
        self.scale(rhs)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

/// Eigenvalues of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum2 {
    /// `tr/2 + sqrt(disc)`, principal branch.
    pub lambda1: Complex,
    /// `tr/2 - sqrt(disc)`.
    pub lambda2: Complex,
    /// `(tr/2)² - det`.
    pub discriminant: Complex,
    /// Eigenvalues have coalesced and the matrix is not a multiple of the
    /// identity, i.e. it has a single eigenvector.
    pub defective: bool,
}

/// `exp(s·M)` via the traceless split.
///
/// With `A = M - (tr M / 2)·I` we have `A² = μ²·I`, `μ² = -det A`, so
///
/// ```text
/// exp(sM) = exp(s·tr/2) · [cosh(μs)·I + sinh(μs)/μ · A]
/// ```
///
/// Both `cosh(μs)` and `sinh(μs)/μ` are even in `μ`, so they are evaluated from
/// `μ²` alone and no branch of the square root matters. For `|μs|` below
/// [`SERIES_THRESHOLD`] a truncated series replaces the hyperbolic functions;
/// at an exceptional point (`μ = 0`) this reduces to `I + sA` exactly.
pub fn expm2(m: &Mat2, s: f64) -> Result<Mat2> {
    m.check_finite()?;
    if !s.is_finite() {
        return Err(Error::domain(format!("scale {s} is not finite")));
    }
    let half_trace = m.trace() * 0.5;
    let a = *m - Mat2::scalar(half_trace);
    let mu_sq = -a.det();
    let (c, sinhc) = cosh_sinhc(mu_sq, s);
    let out = (Mat2::identity().scale(c) + a.scale(sinhc)).scale((half_trace * s).exp());
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::domain("matrix exponential overflowed"))
    }
}

/// Returns `(cosh(μs), sinh(μs)/μ)` given `μ²`.
fn cosh_sinhc(mu_sq: Complex, s: f64) -> (Complex, Complex) {
    let x_sq = mu_sq * (s * s);
    if x_sq.norm() < SERIES_THRESHOLD * SERIES_THRESHOLD {
        series_cosh_sinhc(x_sq, s)
    } else {
        closed_cosh_sinhc(mu_sq, s)
    }
}

fn series_cosh_sinhc(x_sq: Complex, s: f64) -> (Complex, Complex) {
    // four even terms each; the first omitted term is O(|x|^8) ≈ 1e-32 here
    let one = Complex::new(1.0, 0.0);
    let c = one + x_sq * (1.0 / 2.0 + x_sq * (1.0 / 24.0 + x_sq * (1.0 / 720.0)));
    let sc = one + x_sq * (1.0 / 6.0 + x_sq * (1.0 / 120.0 + x_sq * (1.0 / 5040.0)));
    (c, sc * s)
}

fn closed_cosh_sinhc(mu_sq: Complex, s: f64) -> (Complex, Complex) {
    let mu = mu_sq.sqrt();
    let x = mu * s;
    (x.cosh(), x.sinh() / mu)
}

/// Eigenvalues `tr/2 ± sqrt((tr/2)² - det)` on the principal branch.
pub fn eig2(m: &Mat2) -> Result<Spectrum2> {
    m.check_finite()?;
    let half_trace = m.trace() * 0.5;
    // adding +0 clears a signed -0 imaginary part, which would otherwise put
    // a negative real discriminant on the far side of the branch cut
    let discriminant = half_trace * half_trace - m.det() + Complex::new(0.0, 0.0);
    let root = discriminant.sqrt();
    let lambda1 = half_trace + root;
    let lambda2 = half_trace - root;
    let scalar = m.a12.norm() <= EP_TOLERANCE
        && m.a21.norm() <= EP_TOLERANCE
        && (m.a11 - m.a22).norm() <= EP_TOLERANCE;
    let defective = 2.0 * root.norm() <= EP_TOLERANCE && !scalar;
    Ok(Spectrum2 {
        lambda1,
        lambda2,
        discriminant,
        defective,
    })
}

/// Singular values `(σ_max, σ_min)` in closed form.
///
/// The eigenvalues of `M†M` satisfy `(σ1 ± σ2)² = ‖M‖_F² ± 2|det M|`.
/// Evaluating the difference directly cancels catastrophically for nearly
/// unitary `M`, so `M` is first rotated by a global phase making `det M` real
/// and non-negative, after which both right-hand sides are sums of squares:
///
/// ```text
/// (σ1 + σ2)² = |a + d̄|² + |b - c̄|²
/// (σ1 - σ2)² = |a - d̄|² + |b + c̄|²
/// ```
pub fn svals2(m: &Mat2) -> Result<(f64, f64)> {
    m.check_finite()?;
    let det = m.det();
    let abs_det = det.norm();
    let m = if abs_det > 0.0 {
        m.scale((det / abs_det).sqrt().conj())
    } else {
        *m
    };
    let (a, b, c, d) = (m.a11, m.a12, m.a21, m.a22);
    let sum = (a + d.conj()).norm().hypot((b - c.conj()).norm());
    let diff = (a - d.conj()).norm().hypot((b + c.conj()).norm());
    let sigma_max = 0.5 * (sum + diff);
    let sigma_min = if sigma_max > 0.0 {
        abs_det / sigma_max
    } else {
        0.0
    };
    Ok((sigma_max, sigma_min))
}
