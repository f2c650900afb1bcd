//! Hamiltonians and propagators of the lossy directional coupler.
//!
//! Mode 1 is the lossless waveguide, mode 2 the waveguide coupled to the
//! reservoir. Rates are in 1/cm, lengths in cm.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::linalg::{eig2, expm2, Complex, Mat2, I};
use crate::{Error, Result};

/// Physical parameters of one coupler section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplerParams {
    kappa: f64,
    gamma: f64,
    length: f64,
}

impl CouplerParams {
    /// Requires `kappa > 0`, `gamma >= 0` and `length > 0`, all finite.
    pub fn new(kappa: f64, gamma: f64, length: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::domain(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::domain(format!(
                "gamma must be non-negative, got {gamma}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::domain(format!(
                "length must be positive, got {length}"
            )));
        }
        Ok(CouplerParams {
            kappa,
            gamma,
            length,
        })
    }

    /// Coupler whose lossless limit is an exact 50/50 splitter, `κz = π/4`.
    pub fn idealized(kappa: f64, gamma: f64) -> Result<Self> {
        CouplerParams::new(kappa, gamma, balanced_length(kappa))
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        CouplerParams::new(self.kappa, gamma, self.length)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        CouplerParams::new(self.kappa, self.gamma, length)
    }
}

/// Length at which a lossless coupler of rate `kappa` splits 50/50.
pub fn balanced_length(kappa: f64) -> f64 {
    FRAC_PI_4 / kappa
}

/// Which device the photons traverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// The lossy coupler on its own.
    Bare,
    /// The lossy coupler between two lossless 50/50 splitters.
    Sandwiched,
}

impl SystemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::Bare => "bare",
            SystemKind::Sandwiched => "sandwiched",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bare" => Ok(SystemKind::Bare),
            "sandwiched" => Ok(SystemKind::Sandwiched),
            other => Err(Error::Config(format!("unknown system kind `{other}`"))),
        }
    }
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `[[0, κ], [κ, -2iγ]]`
pub fn hamiltonian_bare(p: &CouplerParams) -> Mat2 {
    Mat2::new(
        re(0.0),
        re(p.kappa),
        re(p.kappa),
        Complex::new(0.0, -2.0 * p.gamma),
    )
}

/// `[[-iγ, κ-γ], [κ+γ, -iγ]]`, the bare Hamiltonian seen through the 50/50
/// rotation, `R·H·R⁻¹`.
pub fn hamiltonian_sandwiched(p: &CouplerParams) -> Mat2 {
    let loss = Complex::new(0.0, -p.gamma);
    Mat2::new(loss, re(p.kappa - p.gamma), re(p.kappa + p.gamma), loss)
}

/// The lossless 50/50 coupler `(1/√2)[[1, -i], [-i, 1]]`.
pub fn rotation_r() -> Mat2 {
    Mat2::new(re(1.0), -I, -I, re(1.0)).scale(re(FRAC_1_SQRT_2))
}

pub fn hamiltonian(p: &CouplerParams, kind: SystemKind) -> Mat2 {
    match kind {
        SystemKind::Bare => hamiltonian_bare(p),
        SystemKind::Sandwiched => hamiltonian_sandwiched(p),
    }
}

/// Post-selected mode transformation `U(z) = exp(-iHz)`.
pub fn propagator(p: &CouplerParams, kind: SystemKind) -> Mat2 {
    let generator = hamiltonian(p, kind).scale(-I);
    // finite by construction of CouplerParams; the exponent's real part is
    // non-positive so the result cannot overflow
    expm2(&generator, p.length).expect("propagator of validated parameters")
}

/// One row of an eigenvalue sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub gamma: f64,
    pub gamma_over_kappa: f64,
    pub lambda1: Complex,
    pub lambda2: Complex,
    pub defective: bool,
}

/// Eigenvalues of the bare Hamiltonian along a loss sweep.
///
/// Branches are kept continuous by matching each pair to the previous one
/// (nearest neighbour). The first point is seeded with `λ1` the eigenvalue of
/// larger real part, so a sweep starting at `γ = 0` begins with `λ1 = +κ`.
/// Beyond the exceptional point both continuations are equidistant and the
/// principal ordering is kept: `λ1 = -i(γ - √(γ²-κ²))` is the less damped.
pub fn eigen_spectrum(gammas: &[f64], kappa: f64) -> Result<Vec<SpectrumPoint>> {
    if gammas.is_empty() {
        return Err(Error::domain("empty loss grid"));
    }
    let mut out: Vec<SpectrumPoint> = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let p = CouplerParams::new(kappa, gamma, 1.0)?;
        let sp = eig2(&hamiltonian_bare(&p))?;
        let (mut l1, mut l2) = (sp.lambda1, sp.lambda2);
        match out.last() {
            None => {
                if (l2.re, l2.im) > (l1.re, l1.im) {
                    std::mem::swap(&mut l1, &mut l2);
                }
            }
            Some(prev) => {
                let keep = (l1 - prev.lambda1).norm() + (l2 - prev.lambda2).norm();
                let swap = (l2 - prev.lambda1).norm() + (l1 - prev.lambda2).norm();
                let scale = prev.lambda1.norm() + prev.lambda2.norm() + kappa;
                if swap < keep - 1e-12 * scale {
                    std::mem::swap(&mut l1, &mut l2);
                }
            }
        }
        out.push(SpectrumPoint {
            gamma,
            gamma_over_kappa: gamma / kappa,
            lambda1: l1,
            lambda2: l2,
            defective: sp.defective,
        });
    }
    Ok(out)
}
