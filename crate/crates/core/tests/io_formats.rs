use std::path::Path;

use llg_gsav::experiments::{ErrorRecord, NormPair, RunConfig, TimeSeriesRow};
use llg_gsav::io::{
    read_csv, read_errors_csv, read_snapshot, write_csv, write_errors_csv, write_snapshot, ConfigFile,
};
use llg_gsav::spectral::{GridSpec, ScalarField, VectorField3};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e300f64..1e300, -1.0f64..1.0, Just(0.0), Just(f64::MIN_POSITIVE)]
}

fn row() -> impl Strategy<Value = TimeSeriesRow> {
    (0usize..1_000_000, prop::collection::vec(finite(), 9), 0usize..500).prop_map(|(n, v, it)| TimeSeriesRow {
        n,
        t: v[0],
        energy: v[1],
        r: v[2],
        xi: v[3],
        eta: v[4],
        cross: v[5],
        min_hat: v[6],
        max_len_defect: v[7],
        sup_grad_norm: v[8],
        solver_iters: it,
    })
}

fn record() -> impl Strategy<Value = ErrorRecord> {
    (prop::collection::vec(1e-300f64..1e3, 8), 1usize..100).prop_map(|(v, samples)| ErrorRecord {
        dt: v[0],
        m: NormPair { linf_h1: v[1], l2_h2: v[2] },
        m_hat: NormPair { linf_h1: v[3], l2_h2: v[4] },
        m_tilde: NormPair { linf_h1: v[5], l2_h2: v[6] },
        xi_defect: v[7],
        samples,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn timeseries_round_trip(rows in prop::collection::vec(row(), 0..20)) {
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("ts.csv");
        write_csv(&p, &rows).unwrap();
        prop_assert_eq!(read_csv(&p).unwrap(), rows);
    }

    #[test]
    fn errors_round_trip(recs in prop::collection::vec(record(), 1..8)) {
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("errors.csv");
        write_errors_csv(&p, &recs).unwrap();
        prop_assert_eq!(read_errors_csv(&p).unwrap(), recs);
    }

    #[test]
    fn snapshot_round_trip(
        nx in prop::sample::select(vec![4usize, 6, 8]),
        ny in prop::sample::select(vec![4usize, 10]),
        time in 0.0f64..10.0,
        seed in prop::collection::vec(-1.0f64..1.0, 3 * 80),
    ) {
        let g = GridSpec::new_2d([nx, ny], [1.5, 2.5], [-0.75, 0.0]).unwrap();
        let n = g.len();
        let m = VectorField3::new(std::array::from_fn(|c| {
            ScalarField::from_values(g, seed[c * 80..c * 80 + n].to_vec()).unwrap()
        }))
        .unwrap();
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("s.llf");
        write_snapshot(&p, &m, time).unwrap();
        let s = read_snapshot(&p).unwrap();
        prop_assert!(s.matches(&g));
        prop_assert_eq!(s.time, time);
        prop_assert_eq!(s.into_field(g.origin()).unwrap(), m);
    }

    #[test]
    fn config_round_trip(
        beta in -2.0f64..2.0,
        gamma in 0.1f64..5.0,
        s in 0.0f64..3.0,
        k0 in 0.5f64..5.0,
        w in 1u32..4,
        order in 1usize..=5,
        dt in 1e-6f64..1e-2,
        modes in prop::sample::select(vec![8usize, 16, 32]),
        problem in prop::sample::select(vec!["manufactured", "self_reference", "blowup"]),
        semi in any::<bool>(),
    ) {
        let mut c = RunConfig::preset(problem).unwrap();
        c.params.beta = beta;
        c.params.gamma = gamma;
        c.params.s = s;
        c.params.k0 = k0;
        c.params.w = w;
        c.params.order = order;
        c.params.dt = dt;
        c.grid = GridSpec::new_2d([modes, modes], c.grid.lengths(), c.grid.origin()).unwrap();
        if semi {
            c.mode = "semi_implicit".into();
        }
        let f = ConfigFile::new(c);
        let text = f.to_toml();
        let back = ConfigFile::parse(&text, Path::new("round.toml")).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_toml(), text);
    }
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for e in std::fs::read_dir(&dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") {
            let c = ConfigFile::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            // shipped files reproduce the presets' grid and parameters
            let preset = RunConfig::preset(&c.run.problem).unwrap();
            assert_eq!(c.run.grid, preset.grid, "{}", p.display());
            let (a, b) = (c.run.params, preset.params);
            assert_eq!((a.gamma, a.k0, a.w, a.order, a.dt, a.t_final), (b.gamma, b.k0, b.w, b.order, b.dt, b.t_final));
            seen += 1;
        }
    }
    assert_eq!(seen, 3);
}
