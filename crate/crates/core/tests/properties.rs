use feykac::cli::{Cell, RunConfig, Table};
use feykac::mehler::{apply_semigroup, closed_form_gaussian, closed_form_k, kernel_q};
use feykac::splitting::step_odd;
use feykac::{Grid, GridFunction, InitialCondition, Potential};
use proptest::prelude::*;

fn potential() -> impl Strategy<Value = Potential> {
    prop_oneof![
        Just(Potential::Zero),
        (-5.0..5.0f64).prop_map(Potential::Constant),
        (-3.0..3.0f64, 0.0..4.0f64)
            .prop_map(|(amplitude, omega)| Potential::GaussCos { amplitude, omega }),
        (-3.0..3.0f64).prop_map(Potential::Bump),
    ]
}

fn initial() -> impl Strategy<Value = InitialCondition> {
    prop_oneof![
        Just(InitialCondition::Zero),
        Just(InitialCondition::One),
        Just(InitialCondition::Identity),
        Just(InitialCondition::Square),
        (0.05..5.0f64).prop_map(InitialCondition::Gaussian),
        (0.05..5.0f64).prop_map(InitialCondition::Hat),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_specs_round_trip(c in potential(), v0 in initial()) {
        prop_assert_eq!(c.to_string().parse::<Potential>().unwrap(), c);
        prop_assert_eq!(v0.to_string().parse::<InitialCondition>().unwrap(), v0);
    }

    #[test]
    fn potential_stays_within_declared_bounds(c in potential(), t in 0.0..2.0f64, x in -20.0..20.0f64) {
        let v = c.evaluate(t, x);
        prop_assert!(c.inf_bound() <= v && v <= c.sup_bound());
    }

    #[test]
    fn k_lies_in_unit_interval(t in 1e-4..5.0f64, x in -8.0..8.0f64) {
        let k = closed_form_k(t, x);
        prop_assert!(k > 0.0 && k <= 1.0);
        prop_assert!(closed_form_k(t, x.abs() + 0.5) < k || k == 0.0);
    }

    #[test]
    fn kernel_is_even_in_each_argument(t in 0.01..2.0f64, x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let q = kernel_q(t, x, y).unwrap();
        prop_assert_eq!(q, kernel_q(t, -x, y).unwrap());
        prop_assert_eq!(q, kernel_q(t, x, -y).unwrap());
    }

    #[test]
    fn semigroup_of_gaussian_matches_closed_form(t in 0.01..1.5f64, x in -3.0..3.0f64, sigma in 0.3..3.0f64) {
        let q = apply_semigroup(&InitialCondition::Gaussian(sigma), t, x, 128).unwrap();
        prop_assert!((q - closed_form_gaussian(t, x, sigma)).abs() < 1e-10);
    }

    #[test]
    fn potential_step_respects_lower_bound(c in potential(), dt in 1e-3..0.2f64, tau in 0.0..1.0f64) {
        let grid = Grid::new(-6.0, 6.0, 121).unwrap();
        let v = GridFunction::from_initial(grid, &InitialCondition::Gaussian(1.0)).unwrap();
        let out = step_odd(&v, dt, &c, tau).unwrap();
        let bound = (-2.0 * dt * c.inf_bound()).exp();
        prop_assert!(out.max_abs() <= v.max_abs() * bound * (1.0 + 1e-12));
    }

    #[test]
    fn csv_numbers_round_trip(values in prop::collection::vec(-1e300..1e300f64, 1..8)) {
        let mut table = Table::new("mc", &["v"]);
        for &v in &values {
            table.push(vec![Cell::Num(v)]);
        }
        let text = String::from_utf8(table.render(&RunConfig::default()).unwrap()).unwrap();
        let parsed: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        prop_assert_eq!(parsed, values);
    }
}
