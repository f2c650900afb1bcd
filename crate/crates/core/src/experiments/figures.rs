use rayon::prelude::*;
use serde_json::Value;

use super::config::{FigureId, SweepSpec};
use super::table::SweepTable;
use crate::coupler::{eigen_spectrum, propagator, SystemKind};
use crate::fock::{
    hom_curve, two_photon_probs_dist, two_photon_probs_indist, visibility, Normalization,
};
use crate::{Error, Result};

/// Runs the sweep named by `spec.figure`.
pub fn run_figure(spec: &SweepSpec) -> Result<SweepTable> {
    match spec.figure {
        Some(FigureId::Fig2b) => run_fig2b(spec),
        Some(FigureId::Fig3bcd) => run_fig3bcd(spec),
        Some(FigureId::Fig3e) => run_fig3e(spec),
        Some(FigureId::Fig4b) => run_fig4b(spec),
        Some(FigureId::Fig4c) => run_fig4c(spec),
        None => Err(Error::Config("no figure selected".into())),
    }
}

fn tagged(spec: &SweepSpec, figure: FigureId) -> SweepSpec {
    SweepSpec {
        figure: Some(figure),
        ..spec.clone()
    }
}

/// Eigenvalues of the bare Hamiltonian in units of kappa, branch-continuous
/// along the loss grid.
pub fn run_fig2b(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let spec = tagged(spec, FigureId::Fig2b);
    let k = spec.kappa;
    let points = eigen_spectrum(&spec.gamma_grid, k)?;
    let mut table = SweepTable::new(spec.metadata());
    table.push_column(
        "gamma_over_kappa",
        points.iter().map(|p| p.gamma_over_kappa).collect(),
    )?;
    table.push_column("re_l1", points.iter().map(|p| p.lambda1.re / k).collect())?;
    table.push_column("re_l2", points.iter().map(|p| p.lambda2.re / k).collect())?;
    table.push_column("im_l1", points.iter().map(|p| p.lambda1.im / k).collect())?;
    table.push_column("im_l2", points.iter().map(|p| p.lambda2.im / k).collect())?;
    Ok(table)
}

/// Two-photon output probabilities of the bare coupler for both photon
/// types, under `spec.normalization`.
pub fn run_fig3bcd(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    if spec.kind != SystemKind::Bare {
        return Err(Error::Config(
            "fig3bcd is defined for the bare coupler".into(),
        ));
    }
    let spec = tagged(spec, FigureId::Fig3bcd);
    let rows = spec
        .gamma_grid
        .par_iter()
        .map(|&gamma| {
            let u = propagator(&spec.params(gamma)?, SystemKind::Bare);
            let indist = two_photon_probs_indist(&u)?;
            let dist = two_photon_probs_dist(&u)?;
            spec.normalization.apply(indist, dist)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable::new(spec.metadata());
    table.push_column("gamma", spec.gamma_grid.clone())?;
    table.push_column("p20_indist", rows.iter().map(|r| r.0.p20).collect())?;
    table.push_column("p11_indist", rows.iter().map(|r| r.0.p11).collect())?;
    table.push_column("p02_indist", rows.iter().map(|r| r.0.p02).collect())?;
    table.push_column("p20_dist", rows.iter().map(|r| r.1.p20).collect())?;
    table.push_column("p11_dist", rows.iter().map(|r| r.1.p11).collect())?;
    table.push_column("p02_dist", rows.iter().map(|r| r.1.p02).collect())?;
    Ok(table)
}

/// HOM traces of the bare coupler, one column per loss value.
pub fn run_fig3e(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.kind != SystemKind::Bare {
        return Err(Error::Config(
            "fig3e is defined for the bare coupler".into(),
        ));
    }
    hom_traces(spec, FigureId::Fig3e)
}

/// HOM traces of the sandwiched coupler, one column per loss value.
pub fn run_fig4b(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.kind != SystemKind::Sandwiched {
        return Err(Error::Config(
            "fig4b is defined for the sandwiched coupler".into(),
        ));
    }
    hom_traces(spec, FigureId::Fig4b)
}

fn hom_traces(spec: &SweepSpec, figure: FigureId) -> Result<SweepTable> {
    spec.validate()?;
    let reach = 5.0 * spec.source.tau_c();
    let (lo, hi) = (
        spec.delay_grid[0],
        spec.delay_grid[spec.delay_grid.len() - 1],
    );
    if lo > -reach || hi < reach {
        return Err(Error::Config(format!(
            "delay grid [{lo}, {hi}] ps must span ±5·tau_c = ±{reach} ps"
        )));
    }
    let spec = SweepSpec {
        normalization: Normalization::DistRate,
        ..tagged(spec, figure)
    };
    let curves = spec
        .gamma_grid
        .par_iter()
        .map(|&gamma| {
            let u = propagator(&spec.params(gamma)?, spec.kind);
            hom_curve(&u, &spec.source, &spec.delay_grid)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = spec.metadata();
    meta.insert(
        "visibilities".into(),
        Value::from(curves.iter().map(|c| c.visibility).collect::<Vec<_>>()),
    );
    let mut table = SweepTable::new(meta);
    table.push_column("delay_ps", spec.delay_grid.clone())?;
    for (gamma, curve) in spec.gamma_grid.iter().zip(curves) {
        table.push_column(format!("rate_gamma_{gamma}"), curve.rates)?;
    }
    Ok(table)
}

/// Zero-delay HOM visibility of the bare and the sandwiched coupler against
/// the loss-to-coupling ratio.
pub fn run_fig4c(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let (lo, hi) = (
        spec.gamma_grid[0],
        spec.gamma_grid[spec.gamma_grid.len() - 1],
    );
    if !(lo < spec.kappa && hi > spec.kappa) {
        return Err(Error::Config(format!(
            "fig4c needs a loss grid crossing gamma = kappa = {}, got [{lo}, {hi}]",
            spec.kappa
        )));
    }
    let spec = tagged(spec, FigureId::Fig4c);
    let v_max = spec.source.v_max();
    let rows = spec
        .gamma_grid
        .par_iter()
        .map(|&gamma| {
            let p = spec.params(gamma)?;
            let bare = visibility(&propagator(&p, SystemKind::Bare), v_max)?;
            let sandwiched = visibility(&propagator(&p, SystemKind::Sandwiched), v_max)?;
            Ok((gamma / spec.kappa, bare, sandwiched))
        })
        .collect::<Result<Vec<_>>>()?;
    // both kinds are always computed, so `kind` stays as given and reruns
    // parse it back unchanged
    let mut table = SweepTable::new(spec.metadata());
    table.push_column("gamma_over_kappa", rows.iter().map(|r| r.0).collect())?;
    table.push_column("visibility_bare", rows.iter().map(|r| r.1).collect())?;
    table.push_column("visibility_sandwiched", rows.iter().map(|r| r.2).collect())?;
    Ok(table)
}
