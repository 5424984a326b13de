use llg_gsav::experiments::slope_fit;
use llg_gsav::sav::{correct_and_project, eta_from_xi, sav_closed_form};
use llg_gsav::spectral::{cross, dot, gradient_norm_sq, inner_l2, GridSpec, ScalarField, SpectralWorkspace, VectorField3};
use llg_gsav::stepper::BdfScheme;
use proptest::prelude::*;

fn grid() -> impl Strategy<Value = GridSpec> {
    (prop::sample::select(vec![4usize, 6, 8, 12, 16]), prop::sample::select(vec![4usize, 8, 10]), 0.5f64..7.0)
        .prop_map(|(nx, ny, l)| GridSpec::new_2d([nx, ny], [l, 1.3 * l], [-0.5 * l, 0.0]).unwrap())
}

fn field(g: GridSpec) -> impl Strategy<Value = VectorField3> {
    prop::collection::vec(-2.0f64..2.0, 3 * g.len()).prop_map(move |v| {
        let n = g.len();
        VectorField3::new([
            ScalarField::from_values(g, v[..n].to_vec()).unwrap(),
            ScalarField::from_values(g, v[n..2 * n].to_vec()).unwrap(),
            ScalarField::from_values(g, v[2 * n..].to_vec()).unwrap(),
        ])
        .unwrap()
    })
}

fn grid_and_fields() -> impl Strategy<Value = (VectorField3, VectorField3)> {
    grid().prop_flat_map(|g| (field(g), field(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip((a, _) in grid_and_fields()) {
        let mut ws = SpectralWorkspace::new(*a.grid());
        let s = ws.forward_vec(&a);
        let back = ws.inverse_vec(&s);
        prop_assert!(back.sub(&a).unwrap().max_abs() <= 1e-13 * a.grid().len() as f64);
    }

    #[test]
    fn parseval_holds((a, _) in grid_and_fields()) {
        let mut ws = SpectralWorkspace::new(*a.grid());
        let c = a.component(0);
        let direct = inner_l2(c, c).unwrap();
        let spectral = ws.forward(c).l2_norm_sq();
        prop_assert!((direct - spectral).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn cross_is_antisymmetric_and_orthogonal((a, b) in grid_and_fields()) {
        let ab = cross(&a, &b).unwrap();
        let ba = cross(&b, &a).unwrap();
        for i in 0..a.grid().len() {
            let (x, y) = (ab.at(i), ba.at(i));
            for c in 0..3 {
                prop_assert_eq!(x[c], -y[c]);
            }
        }
        let d = dot(&a, &ab).unwrap();
        prop_assert!(d.max_abs() <= 1e-13);
    }

    #[test]
    fn gradient_norm_is_nonnegative((a, _) in grid_and_fields()) {
        let mut ws = SpectralWorkspace::new(*a.grid());
        let g = gradient_norm_sq(&mut ws, &a);
        prop_assert!(g.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn projection_gives_unit_vectors((a, _) in grid_and_fields(), eta in 0.2f64..1.5, w in 1u32..4) {
        // keep every m_hat well away from the origin
        let shift = (eta - 1.0f64).powi(w as i32);
        let safe = (0..a.grid().len()).all(|i| {
            let t = a.at(i);
            let h = [eta * t[0] + shift, eta * t[1] + shift, eta * t[2] + shift];
            h.iter().map(|v| v * v).sum::<f64>() > 1e-6
        });
        prop_assume!(safe);
        let p = correct_and_project(&a, eta, w).unwrap();
        prop_assert!(p.m.unit_length_defect() <= 1e-15);
        prop_assert_eq!(p.shift, shift);
    }

    #[test]
    fn sav_update_decreases_r(
        r_prev in 1e-6f64..1e6,
        e in 0.0f64..1e6,
        cross_sq in 0.0f64..1e8,
        dt in 1e-8f64..1.0,
        gamma in 1e-3f64..10.0,
        k0 in 0.5f64..10.0,
        order in 1usize..=5,
    ) {
        let s = sav_closed_form(r_prev, e, cross_sq, 0.0, dt, gamma, k0, order).unwrap();
        prop_assert!(s.r > 0.0 && s.r <= r_prev);
        prop_assert!((s.r * (1.0 + dt * gamma * cross_sq / (e + k0)) - r_prev).abs() <= 1e-12 * r_prev);
        prop_assert!((s.xi - s.r / (e + k0)).abs() <= 1e-15 * s.xi.max(1.0));
        // telescoping of a single step
        let lhs = s.r + dt * gamma * s.xi * cross_sq;
        prop_assert!((lhs - r_prev).abs() <= 1e-12 * r_prev);
    }

    #[test]
    fn eta_is_high_order_close_to_one(xi in 0.0f64..2.0, order in 1usize..=5) {
        let eta = eta_from_xi(xi, order);
        let q = BdfScheme::new(order).unwrap().eta_exponent();
        prop_assert!(((1.0 - eta).abs() - (1.0 - xi).abs().powi(q)).abs() <= 1e-15);
        prop_assert!((1.0 - eta).abs() <= (1.0 - xi).abs() + 1e-15);
    }

    #[test]
    fn slope_fit_recovers_power_laws(p in 0.5f64..5.0, c in 1e-6f64..1e3, dt0 in 1e-5f64..1e-2, ratio in 1.5f64..4.0) {
        let dts: Vec<f64> = (0..5).map(|i| dt0 / ratio.powi(i)).collect();
        let errs: Vec<f64> = dts.iter().map(|d| c * d.powf(p)).collect();
        prop_assert!((slope_fit(&dts, &errs).unwrap() - p).abs() <= 1e-9);
    }
}
