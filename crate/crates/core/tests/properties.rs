use proptest::prelude::*;
use viscofb_core::hilbert::{hilbert_identity_check, project};
use viscofb_core::monotone::{
    check_forward_nonexpansive, check_inverse_strongly_monotone, check_resolvent_firmly_nonexpansive,
    check_damped_contraction, resolvent, CoordinateTerm, MaxMonotone, SingleOp,
};
use viscofb_core::problems::{make_halving_line, make_oscillating, make_inclusion_instance, InclusionOptions};
use viscofb_core::schedules::{default_schedule, validate, ViscosityParams};
use viscofb_core::setvalued::{
    check_demicontractive, check_quasi_nonexpansive, distance_to_set, hausdorff, select_from, MultiMap,
    OperatorClass, SelectionRule, SetImage,
};
use viscofb_core::solvers::{audit_fejer_chain, step_three_map, step_main, step_two_map, IterState, TwoMapLastLine};
use viscofb_core::{ConvexSet, Point};

const TOL: f64 = 1e-10;

fn coords(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, d)
}

fn point(d: usize) -> impl Strategy<Value = Point> {
    coords(d).prop_map(|c| Point::new(c).unwrap())
}

fn dim_and_pair() -> impl Strategy<Value = (Point, Point)> {
    (1usize..5).prop_flat_map(|d| (point(d), point(d)))
}

fn convex_set(d: usize) -> impl Strategy<Value = ConvexSet> {
    prop_oneof![
        Just(ConvexSet::WholeSpace),
        (coords(d), prop::collection::vec(0.0..5.0f64, d)).prop_map(|(lo, w)| {
            let hi: Vec<f64> = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
            ConvexSet::boxed(Point::new(lo).unwrap(), Point::new(hi).unwrap()).unwrap()
        }),
        (point(d), 0.0..5.0f64).prop_map(|(c, r)| ConvexSet::ball(c, r).unwrap()),
        (point(d), -5.0..5.0f64)
            .prop_filter("nonzero normal", |(n, _)| n.norm() > 1e-3)
            .prop_map(|(n, b)| ConvexSet::half_space(n, b).unwrap()),
        (point(d), point(d))
            .prop_filter("nonzero direction", |(_, v)| v.norm() > 1e-3)
            .prop_map(|(a, v)| {
                let unit = (1.0 / v.norm()) * &v;
                ConvexSet::affine(a, vec![unit]).unwrap()
            }),
    ]
}

fn set_image(d: usize) -> impl Strategy<Value = SetImage> {
    prop_oneof![
        point(d).prop_map(SetImage::Singleton),
        prop::collection::vec(point(d), 1..5).prop_map(|ps| SetImage::finite(ps).unwrap()),
    ]
}

proptest! {
    #[test]
    fn projection_lands_in_set_and_is_idempotent(
        (set, x) in (1usize..5).prop_flat_map(|d| (convex_set(d), point(d)))
    ) {
        let p = project(&set, &x).unwrap();
        prop_assert!(set.contains(&p, 1e-8).unwrap());
        let pp = project(&set, &p).unwrap();
        prop_assert!(pp.distance(&p) <= 1e-9 * (1.0 + p.norm()));
    }

    #[test]
    fn projection_is_firmly_nonexpansive(
        (set, x, y) in (1usize..5).prop_flat_map(|d| (convex_set(d), point(d), point(d)))
    ) {
        let dp = &project(&set, &x).unwrap() - &project(&set, &y).unwrap();
        prop_assert!(dp.norm_sq() <= dp.dot(&(&x - &y)) + 1e-8);
    }

    #[test]
    fn projection_variational_characterization(
        (set, x, z) in (1usize..5).prop_flat_map(|d| (convex_set(d), point(d), point(d)))
    ) {
        // ⟨x − P x, y − P x⟩ ≤ 0 for every y in the set
        let p = project(&set, &x).unwrap();
        let y = project(&set, &z).unwrap();
        prop_assert!((&x - &p).dot(&(&y - &p)) <= 1e-8 * (1.0 + x.norm_sq() + z.norm_sq()));
    }

    #[test]
    fn combination_identity_is_exact((x, y) in dim_and_pair(), lambda in 0.001..0.999f64) {
        let audit = hilbert_identity_check(&x, &y, lambda).unwrap();
        let scale = 1.0 + x.norm_sq() + y.norm_sq();
        prop_assert!((audit.combination.lhs - audit.combination.rhs).abs() <= 1e-12 * scale);
        prop_assert!(audit.subgradient_plus.holds);
    }

    #[test]
    fn hausdorff_is_a_metric(
        (a, b, c) in (1usize..4).prop_flat_map(|d| (set_image(d), set_image(d), set_image(d)))
    ) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let ac = hausdorff(&a, &c).unwrap();
        let cb = hausdorff(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn ball_hausdorff_matches_formula(
        (c1, c2) in dim_and_pair(), r1 in 0.0..3.0f64, r2 in 0.0..3.0f64
    ) {
        let a = SetImage::ball(c1.clone(), r1).unwrap();
        let b = SetImage::ball(c2.clone(), r2).unwrap();
        let h = hausdorff(&a, &b).unwrap();
        prop_assert!((h - (c1.distance(&c2) + (r1 - r2).abs())).abs() <= 1e-12);
    }

    #[test]
    fn metric_selection_attains_distance(
        (img, x) in (1usize..4).prop_flat_map(|d| (
            prop_oneof![
                set_image(d),
                (point(d), 0.0..3.0f64).prop_map(|(c, r)| SetImage::ball(c, r).unwrap()),
            ],
            point(d),
        ))
    ) {
        let s = select_from(&img, SelectionRule::Metric, &x).unwrap();
        prop_assert!(img.contains(&s, 1e-9).unwrap());
        prop_assert!((s.distance(&x) - distance_to_set(&x, &img).unwrap()).abs() <= 1e-9);
        let first = select_from(&img, SelectionRule::FirstEnumerated, &x).unwrap();
        prop_assert!(img.contains(&first, 1e-9).unwrap());
    }

    #[test]
    fn quasi_nonexpansive_implies_demicontractive(
        s in -1.0..1.0f64, beta in 0.0..1.0f64,
        samples in prop::collection::vec(point(2), 1..50)
    ) {
        let map = MultiMap::scaling(2, s, OperatorClass::QuasiNonexpansive);
        prop_assert!(check_quasi_nonexpansive(&map, &samples).unwrap().passed());
        prop_assert!(check_demicontractive(&map, beta, &samples).unwrap().passed());
    }

    #[test]
    fn example_maps_stay_demicontractive(
        beta in 0.0..1.0f64, xs in prop::collection::vec(-10.0..10.0f64, 1..100)
    ) {
        let samples: Vec<Point> = xs.iter().map(|&x| Point::scalar(x).unwrap()).collect();
        for map in [make_halving_line(beta), make_oscillating(beta)] {
            let rec = check_demicontractive(&map, beta, &samples).unwrap();
            prop_assert!(rec.passed(), "{}: {:?}", map.name(), rec);
        }
    }

    #[test]
    fn resolvents_are_firmly_nonexpansive(
        (x, y) in dim_and_pair(), lambda in 0.01..5.0f64, w in 0.0..3.0f64, c in 0.0..3.0f64
    ) {
        let d = x.dim();
        let pairs = [(x.clone(), y.clone())];
        let ops = [
            MaxMonotone::weighted_abs(d, w),
            MaxMonotone::SeparableSubdifferential(vec![CoordinateTerm::Linear { coef: c }; d]),
            MaxMonotone::NormalCone(ConvexSet::ball(Point::zeros(d), 1.0).unwrap()),
            MaxMonotone::ZeroOperator,
        ];
        for op in &ops {
            let rec = check_resolvent_firmly_nonexpansive(op, lambda, &pairs).unwrap();
            prop_assert!(rec.passed(), "{op:?}: {rec:?}");
            let jx = resolvent(op, lambda, &x).unwrap();
            prop_assert!(jx.is_finite());
        }
    }

    #[test]
    fn forward_step_nonexpansive_up_to_twice_ism(
        (x, y) in dim_and_pair(), c in 0.1..4.0f64, frac in 0.0..1.0f64
    ) {
        let op = SingleOp::scaled_identity(x.dim(), c);
        let alpha = 1.0 / c;
        let pairs = [(x, y)];
        prop_assert!(check_inverse_strongly_monotone(&op, alpha, &pairs).unwrap().passed());
        let rec = check_forward_nonexpansive(&op, alpha, 2.0 * alpha * frac, &pairs).unwrap();
        prop_assert!(rec.passed() && !rec.out_of_range);
    }

    #[test]
    fn damped_contraction_on_scaled_identity(
        (x, y) in dim_and_pair(), c in 0.2..3.0f64, eta_frac in 0.05..0.95f64, t_frac in 0.05..0.95f64
    ) {
        let phi = SingleOp::scaled_identity(x.dim(), c);
        let eta = eta_frac * 2.0 / c;
        let tau = eta * (c - c * c * eta / 2.0);
        let t = t_frac * (1.0f64).min(1.0 / tau);
        let rec = check_damped_contraction(&phi, eta, tau, t, &[(x, y)]).unwrap();
        prop_assert!(rec.passed(), "{rec:?}");
    }

    #[test]
    fn default_schedule_validates_for_feasible_params(
        k in 0.1..2.0f64, l_extra in 0.0..2.0f64, eta_frac in 0.05..0.95f64,
        gb_frac in 0.05..0.95f64, b in 0.1..1.0f64, beta_demi in 0.0..0.95f64, alpha_ism in 0.05..3.0f64
    ) {
        let lipschitz = k + l_extra;
        let eta = eta_frac * 2.0 * k / (lipschitz * lipschitz);
        let tau = eta * (k - lipschitz * lipschitz * eta / 2.0);
        let params = ViscosityParams { gamma: gb_frac * tau / b, eta, k, lipschitz, b };
        let sch = default_schedule(&params, beta_demi, alpha_ism).unwrap();
        let report = validate(&sch, &params, 1000);
        prop_assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        let longer = validate(&sch, &params, 5000);
        prop_assert!(longer.passed());
    }

    #[test]
    fn fejer_chain_holds_on_inclusion_instance(
        x in point(3), scale in 0.05..0.95f64, n in 1usize..50
    ) {
        let opts = InclusionOptions::default();
        let problem = make_inclusion_instance(3, ConvexSet::cube(3, -20.0, 20.0).unwrap(), Point::zeros(3), scale, opts).unwrap();
        let sch = default_schedule(&problem.params, problem.beta_demi(), problem.alpha_ism()).unwrap();
        let mut st = IterState::initial(x.clone());
        st.n = n - 1;
        let q = Point::zeros(3);
        for next in [
            step_main(&problem, &sch, &st).unwrap(),
            step_three_map(&problem, &sch, &st).unwrap(),
            step_two_map(&problem, &sch, &st, TwoMapLastLine::Pi).unwrap(),
        ] {
            prop_assert!(audit_fejer_chain(&next, &q).passed());
            prop_assert!(next.psi.norm() <= x.norm() + TOL);
        }
    }
}
