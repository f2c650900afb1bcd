//! Sweep-level behaviour: figure tables, serialization and reruns.

mod common;

use common::*;
use ptcoupler::experiments::{
    linspace, run_fig2b, run_fig3bcd, run_fig3e, run_fig4b, run_fig4c, run_figure, write_table,
    ConfigFile, FigureId, Format, Mode, SweepSpec, SweepTable,
};
use ptcoupler::fock::Normalization;
use ptcoupler::{Error, SystemKind};

fn idealized(figure: FigureId) -> SweepSpec {
    SweepSpec {
        mode: Mode::Idealized,
        ..SweepSpec::for_figure(figure)
    }
}

fn row(table: &SweepTable, i: usize) -> Vec<f64> {
    table.columns().iter().map(|c| c.values[i]).collect()
}

#[test]
fn every_figure_is_deterministic() {
    for figure in FigureId::ALL {
        let spec = SweepSpec::for_figure(figure);
        for format in [Format::Csv, Format::Json] {
            let a = run_figure(&spec).unwrap().render(format);
            let b = run_figure(&spec).unwrap().render(format);
            assert_eq!(a, b, "{figure:?} {format:?}");
        }
    }
}

#[test]
fn fig2b_files_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SweepSpec::for_figure(FigureId::Fig2b);
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        write_table(&run_fig2b(&spec).unwrap(), Format::Csv, p).unwrap();
    }
    assert_eq!(
        std::fs::read(&paths[0]).unwrap(),
        std::fs::read(&paths[1]).unwrap()
    );
}

#[test]
fn tables_round_trip_through_both_formats() {
    for figure in FigureId::ALL {
        let table = run_figure(&SweepSpec::for_figure(figure)).unwrap();
        for back in [
            SweepTable::parse_csv(&table.to_csv()).unwrap(),
            SweepTable::parse_json(&table.to_json()).unwrap(),
        ] {
            assert_eq!(back.columns().len(), table.columns().len());
            for (a, b) in back.columns().iter().zip(table.columns()) {
                assert_eq!(a.name, b.name);
                let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
                assert_eq!(bits(&a.values), bits(&b.values), "{figure:?} {}", a.name);
            }
        }
    }
}

#[test]
fn metadata_reruns_bit_identically() {
    let mut custom = SweepSpec::for_figure(FigureId::Fig3bcd);
    custom.kappa = 0.31;
    custom.gamma_grid = vec![0.0, 0.1, 0.37];
    custom.normalization = Normalization::Survivors;
    let specs = FigureId::ALL
        .iter()
        .map(|f| SweepSpec::for_figure(*f))
        .chain([custom, idealized(FigureId::Fig4c)]);
    for spec in specs {
        let first = run_figure(&spec).unwrap();
        for text in [first.to_csv(), first.to_json()] {
            let parsed = if text.starts_with('{') {
                SweepTable::parse_json(&text).unwrap()
            } else {
                SweepTable::parse_csv(&text).unwrap()
            };
            let mut rerun = SweepSpec::default();
            rerun
                .apply_config(&ConfigFile::from_metadata(&parsed.metadata))
                .unwrap();
            assert_eq!(run_figure(&rerun).unwrap().to_csv(), first.to_csv());
        }
    }
}

#[test]
fn probabilities_and_rates_are_in_range() {
    for norm in [
        Normalization::None,
        Normalization::Survivors,
        Normalization::DistRate,
    ] {
        for mode in [Mode::Paper, Mode::Idealized] {
            let spec = SweepSpec {
                normalization: norm,
                mode,
                gamma_grid: linspace(0.0, 1.0, 21),
                ..SweepSpec::for_figure(FigureId::Fig3bcd)
            };
            let table = run_fig3bcd(&spec).unwrap();
            for c in &table.columns()[1..] {
                let upper = if norm == Normalization::DistRate {
                    f64::INFINITY
                } else {
                    1.0
                };
                assert!(
                    c.values.iter().all(|v| (0.0..=upper).contains(v)),
                    "{norm} {}",
                    c.name
                );
            }
        }
    }
    for table in [
        run_fig3e(&SweepSpec::for_figure(FigureId::Fig3e)).unwrap(),
        run_fig4b(&SweepSpec::for_figure(FigureId::Fig4b)).unwrap(),
    ] {
        for c in &table.columns()[1..] {
            assert!(c.values.iter().all(|v| *v >= 0.0), "{}", c.name);
        }
    }
}

#[test]
fn fig2b_reference_points() {
    let spec = SweepSpec {
        gamma_grid: vec![0.0, 0.26, 0.52],
        ..SweepSpec::for_figure(FigureId::Fig2b)
    };
    let t = run_fig2b(&spec).unwrap();
    assert_eq!(row(&t, 0), vec![0.0, 1.0, -1.0, 0.0, 0.0]);
    let ep = row(&t, 1);
    assert_eq!(ep[0], 1.0);
    for v in &ep[1..3] {
        assert!(v.abs() < 1e-7);
    }
    for v in &ep[3..5] {
        assert!((v + 1.0).abs() < 1e-12);
    }
    // γ/κ = 2 in κ units: roots of λ² + 4iλ - 1 from the iterative solver
    let roots = quadratic_roots(c(0.0, -4.0), c(-1.0, 0.0));
    let mut ims: Vec<f64> = roots.iter().map(|r| r.im).collect();
    ims.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let r2 = row(&t, 2);
    assert!((r2[3] - ims[0]).abs() < 1e-12 && (r2[4] - ims[1]).abs() < 1e-12);
    assert!((r2[3] + (2.0 - 3f64.sqrt())).abs() < 1e-12);
    assert!((r2[4] + (2.0 + 3f64.sqrt())).abs() < 1e-12);
}

#[test]
fn fig3bcd_lossless_idealized_is_textbook_hom() {
    let spec = SweepSpec {
        gamma_grid: vec![0.0],
        ..idealized(FigureId::Fig3bcd)
    };
    let r = row(&run_fig3bcd(&spec).unwrap(), 0);
    let expected = [0.0, 0.5, 0.0, 0.5, 0.25, 0.5, 0.25];
    for (a, b) in r.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15, "{r:?}");
    }
}

#[test]
fn fig3bcd_bunching_favours_lossless_output() {
    let t = run_fig3bcd(&SweepSpec::for_figure(FigureId::Fig3bcd)).unwrap();
    let g = t.column("gamma").unwrap();
    let p20 = t.column("p20_indist").unwrap();
    let p02 = t.column("p02_indist").unwrap();
    for i in 0..t.nrows() {
        if g[i] > 0.0 {
            assert!(p20[i] > p02[i]);
        }
    }
}

#[test]
fn hom_traces_reference_values() {
    let spec = idealized(FigureId::Fig3e);
    let t = run_fig3e(&spec).unwrap();
    let delays = t.column("delay_ps").unwrap();
    let zero = delays.iter().position(|d| *d == 0.0).unwrap();
    let first = &t.columns()[1];
    assert_eq!(first.name, "rate_gamma_0");
    assert!((first.values[zero] - (1.0 - spec.source.v_max())).abs() < 1e-12);
    for table in [
        t,
        run_fig3e(&SweepSpec::for_figure(FigureId::Fig3e)).unwrap(),
        run_fig4b(&SweepSpec::for_figure(FigureId::Fig4b)).unwrap(),
    ] {
        let n = table.nrows();
        for c in &table.columns()[1..] {
            assert!((c.values[0] - 1.0).abs() < 1e-6);
            assert!((c.values[n - 1] - 1.0).abs() < 1e-6);
        }
    }
    let spec = SweepSpec {
        gamma_grid: vec![0.26],
        ..SweepSpec::for_figure(FigureId::Fig4b)
    };
    let ep = run_fig4b(&spec).unwrap();
    assert!(ep.columns()[1]
        .values
        .iter()
        .all(|r| (r - 1.0).abs() <= 1e-10));
}

#[test]
fn fig4c_sandwiched_flips_only_at_ep() {
    for spec in [
        SweepSpec::for_figure(FigureId::Fig4c),
        idealized(FigureId::Fig4c),
    ] {
        let t = run_fig4c(&spec).unwrap();
        let ratio = t.column("gamma_over_kappa").unwrap();
        let v = t.column("visibility_sandwiched").unwrap();
        let cell = ratio
            .windows(2)
            .position(|w| w[0] <= 1.0 && 1.0 <= w[1])
            .unwrap();
        assert!(v[..=cell].iter().all(|x| *x > 0.0));
        assert!(v[cell + 1..].iter().all(|x| *x < 0.0));
    }
}

#[test]
fn fig4c_bare_reference_values() {
    let t = run_fig4c(&idealized(FigureId::Fig4c)).unwrap();
    let v_max = SweepSpec::default().source.v_max();
    assert!((t.column("visibility_bare").unwrap()[0] - v_max).abs() < 1e-12);

    // bare sign change in paper mode sits at the bisection root, far from κ
    let spec = SweepSpec {
        gamma_grid: linspace(0.0, 5.0 * 0.26, 401),
        ..SweepSpec::for_figure(FigureId::Fig4c)
    };
    let t = run_fig4c(&spec).unwrap();
    let ratio = t.column("gamma_over_kappa").unwrap();
    let v = t.column("visibility_bare").unwrap();
    let cell = v
        .windows(2)
        .position(|w| w[0] > 0.0 && w[1] <= 0.0)
        .unwrap();
    let root = 0.9956886416784634 / 0.26;
    assert!(ratio[cell] <= root && root <= ratio[cell + 1]);
}

#[test]
fn preconditions_are_enforced() {
    let spec = SweepSpec {
        kind: SystemKind::Sandwiched,
        ..SweepSpec::for_figure(FigureId::Fig3bcd)
    };
    assert!(run_fig3bcd(&spec).is_err());
    let spec = SweepSpec {
        delay_grid: linspace(-0.5, 0.5, 11),
        ..SweepSpec::for_figure(FigureId::Fig3e)
    };
    assert!(run_fig3e(&spec).is_err());
    let spec = SweepSpec {
        gamma_grid: linspace(0.0, 0.2, 5),
        ..SweepSpec::for_figure(FigureId::Fig4c)
    };
    assert!(run_fig4c(&spec).is_err());
    let spec = SweepSpec {
        gamma_grid: vec![0.3, 0.1],
        ..SweepSpec::for_figure(FigureId::Fig3bcd)
    };
    assert!(run_fig3bcd(&spec).is_err());
}

#[test]
fn write_errors_name_the_path() {
    let table = run_fig2b(&SweepSpec::for_figure(FigureId::Fig2b)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    match write_table(&table, Format::Csv, &bad) {
        Err(Error::Io { path, .. }) => assert_eq!(path, bad),
        other => panic!("expected an IO error, got {other:?}"),
    }
}

#[test]
fn config_file_drives_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(
        &path,
        "# custom sweep\nfigure = fig3bcd\nkappa = 0.3\ngamma_max = 0.9  # trailing\npoints = 4\nnormalization = survivors\n",
    )
    .unwrap();
    let mut spec = SweepSpec::default();
    spec.apply_config(&ConfigFile::load(&path).unwrap())
        .unwrap();
    assert_eq!(spec.figure, Some(FigureId::Fig3bcd));
    assert_eq!(spec.gamma_grid, vec![0.0, 0.3, 0.6, 0.9]);
    assert_eq!(spec.normalization, Normalization::Survivors);
    let bad = ConfigFile::parse("colour = blue").unwrap();
    assert!(SweepSpec::default().apply_config(&bad).is_err());
}
