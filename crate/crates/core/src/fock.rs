//! Post-selected photon statistics of a (possibly lossy) mode transformation.
//!
//! All probabilities are conditioned on nothing: they are the chance that the
//! given output is observed *and* no photon was lost, so for a lossy device
//! they sum to less than one. [`Normalization`] converts to the other
//! conventions in use.
//!
//! The two-photon input is always one photon per mode, `|1, 1⟩`.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{is_subunitary, permanent, svals2, Mat2, SquareMatrix};
use crate::{Error, Result};

/// Slack on `σ_max(U) <= 1` before a transformation is rejected.
pub const PHYSICAL_TOLERANCE: f64 = 1e-9;

/// Largest photon number accepted by [`n_photon_prob`].
pub const MAX_PHOTONS: usize = 6;

/// Largest mode count accepted by [`n_photon_prob`].
pub const MAX_MODES: usize = 8;

/// Output probabilities of two photons in two modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhotonProbs {
    /// Both photons in mode 1 (lossless waveguide).
    pub p20: f64,
    /// One photon in each mode.
    pub p11: f64,
    /// Both photons in mode 2 (lossy waveguide).
    pub p02: f64,
}

impl TwoPhotonProbs {
    pub fn total(&self) -> f64 {
        self.p20 + self.p11 + self.p02
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TwoPhotonProbs {
            p20: self.p20 * factor,
            p11: self.p11 * factor,
            p02: self.p02 * factor,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p20, self.p11, self.p02]
    }
}

fn check_physical(u: &Mat2) -> Result<()> {
    let (sigma_max, _) = svals2(u)?;
    if sigma_max > 1.0 + PHYSICAL_TOLERANCE {
        return Err(Error::Unphysical { sigma_max });
    }
    Ok(())
}

/// Indistinguishable photons: amplitudes are permanents of 2×2 submatrices,
/// and the doubly occupied outputs pick up a bosonic factor 2.
pub fn two_photon_probs_indist(u: &Mat2) -> Result<TwoPhotonProbs> {
    check_physical(u)?;
    // bunched terms share their float evaluation with the distinguishable
    // ones so the factor 2 holds bit for bit
    Ok(TwoPhotonProbs {
        p20: 2.0 * (u.a11.norm_sqr() * u.a12.norm_sqr()),
        p11: (u.a11 * u.a22 + u.a12 * u.a21).norm_sqr(),
        p02: 2.0 * (u.a21.norm_sqr() * u.a22.norm_sqr()),
    })
}

/// Distinguishable photons: each is routed independently.
///
/// Two distinct photons sharing a mode form a single compound event, so `p20`
/// and `p02` carry no factor 2 here.
pub fn two_photon_probs_dist(u: &Mat2) -> Result<TwoPhotonProbs> {
    check_physical(u)?;
    Ok(TwoPhotonProbs {
        p20: u.a11.norm_sqr() * u.a12.norm_sqr(),
        p11: (u.a11 * u.a22).norm_sqr() + (u.a12 * u.a21).norm_sqr(),
        p02: u.a21.norm_sqr() * u.a22.norm_sqr(),
    })
}

/// Two-photon interference term `J = 2·Re[U11·U22·conj(U12·U21)]`, so that
/// `p11_indist = p11_dist + J`. Negative means destructive interference in
/// the coincidence channel.
pub fn interference_term(u: &Mat2) -> Result<f64> {
    check_physical(u)?;
    Ok(interference_unchecked(u))
}

fn interference_unchecked(u: &Mat2) -> f64 {
    2.0 * ((u.a11 * u.a22) * (u.a12 * u.a21).conj()).re
}

/// Temporal overlap model of the photon source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceModel {
    tau_c: f64,
    v_max: f64,
}

impl SourceModel {
    /// `tau_c` is the coherence time in ps, `v_max` the peak
    /// indistinguishability.
    pub fn new(tau_c: f64, v_max: f64) -> Result<Self> {
        if !(tau_c.is_finite() && tau_c > 0.0) {
            return Err(Error::domain(format!(
                "coherence time must be positive, got {tau_c}"
            )));
        }
        if !(0.0..=1.0).contains(&v_max) {
            return Err(Error::domain(format!(
                "v_max must lie in [0, 1], got {v_max}"
            )));
        }
        Ok(SourceModel { tau_c, v_max })
    }

    pub fn tau_c(&self) -> f64 {
        self.tau_c
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Gaussian mutual-coherence envelope `exp(-(τ/τ_c)²)`.
    pub fn overlap(&self, delay: f64) -> f64 {
        let x = delay / self.tau_c;
        (-x * x).exp()
    }
}

impl Default for SourceModel {
    fn default() -> Self {
        SourceModel {
            tau_c: 0.15,
            v_max: 0.95,
        }
    }
}

/// Coincidence rate against photon delay, normalised to the distinguishable
/// rate.
#[derive(Clone, Debug, PartialEq)]
pub struct HomCurve {
    pub delays: Vec<f64>,
    pub rates: Vec<f64>,
    /// `1 - rate(0)`; positive for a dip, negative for a peak.
    pub visibility: f64,
}

fn coincidence_split(u: &Mat2) -> Result<(f64, f64)> {
    let dist = two_photon_probs_dist(u)?;
    if dist.p11.is_nan() || dist.p11 <= 0.0 {
        return Err(Error::DegenerateNormalization);
    }
    Ok((dist.p11, interference_unchecked(u)))
}

/// `rate(τ) = [p11_dist + v_max·f(τ)·J] / p11_dist`.
pub fn hom_curve(u: &Mat2, src: &SourceModel, delays: &[f64]) -> Result<HomCurve> {
    let (p11_dist, j) = coincidence_split(u)?;
    let depth = src.v_max * j / p11_dist;
    let rates = delays
        .iter()
        .map(|&t| 1.0 + depth * src.overlap(t))
        .collect();
    Ok(HomCurve {
        delays: delays.to_vec(),
        rates,
        visibility: -depth + 0.0,
    })
}

/// HOM visibility `V = -v_max·J / p11_dist`; `V > 0` is a dip, `V < 0` a peak.
pub fn visibility(u: &Mat2, v_max: f64) -> Result<f64> {
    let (p11_dist, j) = coincidence_split(u)?;
    // `+ 0.0` turns the -0.0 of an exactly flat curve into 0.0
    Ok(-v_max * j / p11_dist + 0.0)
}

/// Probability of `input → output` for `n` indistinguishable photons in `M`
/// modes: `|perm(U_sub)|² / (Π in_i! · Π out_j!)`, where `U_sub` repeats
/// column `j` of `U` `in_j` times and row `i` `out_i` times.
pub fn n_photon_prob(u: &SquareMatrix, input: &[usize], output: &[usize]) -> Result<f64> {
    let modes = u.dim();
    if modes == 0 || modes > MAX_MODES {
        return Err(Error::domain(format!(
            "mode count {modes} outside 1..={MAX_MODES}"
        )));
    }
    if input.len() != modes || output.len() != modes {
        return Err(Error::domain(format!(
            "occupation patterns must have {modes} entries, got {} and {}",
            input.len(),
            output.len()
        )));
    }
    let n: usize = input.iter().sum();
    let n_out: usize = output.iter().sum();
    if n != n_out {
        return Err(Error::domain(format!(
            "input has {n} photons but output has {n_out}"
        )));
    }
    if n == 0 || n > MAX_PHOTONS {
        return Err(Error::domain(format!(
            "photon number {n} outside 1..={MAX_PHOTONS}"
        )));
    }
    if !is_subunitary(u, PHYSICAL_TOLERANCE) {
        return Err(Error::domain("transformation is not subunitary"));
    }
    let cols = expand_pattern(input);
    let rows = expand_pattern(output);
    let mut sub = SquareMatrix::zeros(n);
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            sub[(a, b)] = u[(r, c)];
        }
    }
    let amp = permanent(&sub)?;
    let norm: f64 = input.iter().chain(output).map(|&k| factorial(k)).product();
    Ok(amp.norm_sqr() / norm)
}

fn expand_pattern(pattern: &[usize]) -> Vec<usize> {
    pattern
        .iter()
        .enumerate()
        .flat_map(|(mode, &count)| std::iter::repeat_n(mode, count))
        .collect()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// How two-photon probabilities are reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Raw post-selected probabilities.
    #[default]
    None,
    /// Divided by the probability that both photons survive.
    Survivors,
    /// Divided by the distinguishable coincidence probability `p11_dist`.
    DistRate,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalization::None => "none",
            Normalization::Survivors => "survivors",
            Normalization::DistRate => "dist_rate",
        }
    }

    /// Applies the convention to a pair of indistinguishable and
    /// distinguishable probabilities computed for the same transformation.
    pub fn apply(
        &self,
        indist: TwoPhotonProbs,
        dist: TwoPhotonProbs,
    ) -> Result<(TwoPhotonProbs, TwoPhotonProbs)> {
        match self {
            Normalization::None => Ok((indist, dist)),
            Normalization::Survivors => {
                let (ti, td) = (indist.total(), dist.total());
                if !(ti > 0.0 && td > 0.0) {
                    return Err(Error::DegenerateNormalization);
                }
                Ok((indist.scaled(1.0 / ti), dist.scaled(1.0 / td)))
            }
            Normalization::DistRate => {
                if dist.p11.is_nan() || dist.p11 <= 0.0 {
                    return Err(Error::DegenerateNormalization);
                }
                let f = 1.0 / dist.p11;
                Ok((indist.scaled(f), dist.scaled(f)))
            }
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Normalization::None),
            "survivors" => Ok(Normalization::Survivors),
            "dist_rate" => Ok(Normalization::DistRate),
            other => Err(Error::Config(format!("unknown normalization `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupler::{propagator, CouplerParams, SystemKind};
    use crate::linalg::Complex;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn splitter() -> Mat2 {
        let a = Complex::new(FRAC_1_SQRT_2, 0.0);
        let b = Complex::new(0.0, -FRAC_1_SQRT_2);
        Mat2::new(a, b, b, a)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn identity_routes_one_per_mode() {
        let i = two_photon_probs_indist(&Mat2::identity()).unwrap();
        let d = two_photon_probs_dist(&Mat2::identity()).unwrap();
        assert_eq!(i.as_array(), [0.0, 1.0, 0.0]);
        assert_eq!(d.as_array(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn hong_ou_mandel_on_splitter() {
        let i = two_photon_probs_indist(&splitter()).unwrap();
        assert!(
            close(i.p20, 0.5) && close(i.p11, 0.0) && close(i.p02, 0.5),
            "{i:?}"
        );
        let d = two_photon_probs_dist(&splitter()).unwrap();
        assert!(
            close(d.p20, 0.25) && close(d.p11, 0.5) && close(d.p02, 0.25),
            "{d:?}"
        );
        assert!(close(interference_term(&splitter()).unwrap(), -0.5));
        assert!(close(visibility(&splitter(), 1.0).unwrap(), 1.0));
    }

    #[test]
    fn rejects_gain() {
        let u = Mat2::identity().scale(Complex::new(1.01, 0.0));
        assert!(matches!(
            two_photon_probs_indist(&u),
            Err(Error::Unphysical { .. })
        ));
        assert!(matches!(
            two_photon_probs_dist(&u),
            Err(Error::Unphysical { .. })
        ));
        assert!(matches!(
            interference_term(&u),
            Err(Error::Unphysical { .. })
        ));
    }

    #[test]
    fn zero_distinguishable_rate_is_degenerate() {
        // routes both photons into mode 1
        let u = Mat2::new(
            Complex::new(0.5, 0.0),
            Complex::new(0.5, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        );
        assert!(matches!(
            visibility(&u, 1.0),
            Err(Error::DegenerateNormalization)
        ));
        let src = SourceModel::default();
        assert!(matches!(
            hom_curve(&u, &src, &[0.0]),
            Err(Error::DegenerateNormalization)
        ));
    }

    #[test]
    fn hom_dip_and_tails() {
        let src = SourceModel::new(0.15, 1.0).unwrap();
        let curve = hom_curve(&splitter(), &src, &[-10.0, 0.0, 10.0]).unwrap();
        assert!(curve.rates[1].abs() < 1e-15);
        assert_eq!(curve.rates[0], 1.0);
        assert_eq!(curve.rates[2], 1.0);
        assert!(close(curve.visibility, 1.0));
    }

    #[test]
    fn flat_curve_at_exceptional_point() {
        let p = CouplerParams::new(0.26, 0.26, 2.1).unwrap();
        let u = propagator(&p, SystemKind::Sandwiched);
        let delays: Vec<f64> = (-5..=5).map(|k| k as f64 * 0.1).collect();
        let curve = hom_curve(&u, &SourceModel::default(), &delays).unwrap();
        assert!(curve.rates.iter().all(|&r| r == 1.0));
        assert_eq!(visibility(&u, 0.95).unwrap(), 0.0);
    }

    #[test]
    fn source_validation() {
        assert!(SourceModel::new(0.0, 0.5).is_err());
        assert!(SourceModel::new(0.1, 1.5).is_err());
        assert!(SourceModel::new(0.1, -0.1).is_err());
        assert!(SourceModel::new(0.1, 0.0).is_ok());
    }

    #[test]
    fn n_photon_reduces_to_two_photon() {
        let p = CouplerParams::new(0.26, 0.39, 2.1).unwrap();
        let u = propagator(&p, SystemKind::Bare);
        let two = two_photon_probs_indist(&u).unwrap();
        let m = SquareMatrix::from(u);
        assert!((n_photon_prob(&m, &[1, 1], &[1, 1]).unwrap() - two.p11).abs() < 1e-15);
        assert!((n_photon_prob(&m, &[1, 1], &[2, 0]).unwrap() - two.p20).abs() < 1e-15);
        assert!((n_photon_prob(&m, &[1, 1], &[0, 2]).unwrap() - two.p02).abs() < 1e-15);
    }

    #[test]
    fn n_photon_identity() {
        let id = SquareMatrix::identity(3);
        assert_eq!(n_photon_prob(&id, &[1, 1, 0], &[1, 1, 0]).unwrap(), 1.0);
        assert_eq!(n_photon_prob(&id, &[1, 1, 0], &[0, 1, 1]).unwrap(), 0.0);
        assert_eq!(n_photon_prob(&id, &[2, 0, 1], &[2, 0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn n_photon_errors() {
        let id = SquareMatrix::identity(3);
        assert!(matches!(
            n_photon_prob(&id, &[1, 1, 0], &[1, 0, 0]),
            Err(Error::Domain(_))
        ));
        assert!(n_photon_prob(&id, &[1, 1], &[1, 1]).is_err());
        assert!(n_photon_prob(&id, &[4, 3, 0], &[4, 3, 0]).is_err());
        assert!(n_photon_prob(&SquareMatrix::identity(9), &[1; 9], &[1; 9]).is_err());
        let mut gain = SquareMatrix::identity(2);
        gain[(0, 0)] = Complex::new(1.1, 0.0);
        assert!(n_photon_prob(&gain, &[1, 1], &[1, 1]).is_err());
    }

    #[test]
    fn normalization_conventions() {
        let p = CouplerParams::new(0.26, 0.39, 2.1).unwrap();
        let u = propagator(&p, SystemKind::Bare);
        let (i, d) = (
            two_photon_probs_indist(&u).unwrap(),
            two_photon_probs_dist(&u).unwrap(),
        );
        let (si, sd) = Normalization::Survivors.apply(i, d).unwrap();
        assert!((si.total() - 1.0).abs() < 1e-15 && (sd.total() - 1.0).abs() < 1e-15);
        let (ri, rd) = Normalization::DistRate.apply(i, d).unwrap();
        assert_eq!(rd.p11, 1.0);
        assert!((ri.p11 - (1.0 - visibility(&u, 1.0).unwrap())).abs() < 1e-14);
        assert_eq!(Normalization::None.apply(i, d).unwrap(), (i, d));
        assert_eq!(
            "dist-rate".parse::<Normalization>().unwrap(),
            Normalization::DistRate
        );
        assert!("bogus".parse::<Normalization>().is_err());
    }
}
