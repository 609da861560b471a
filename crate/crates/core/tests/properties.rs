use microcluster::algebra::{
    Caps, Complex64, GaussianRational, Monomial, Point, Polynomial, RationalFunction, TruncatedSeries, Variable,
};
use microcluster::cli::format_sig;
use microcluster::optics::{
    failure_weights, fuse_fail, fuse_success, kraus_sum, pauli_channel, ErrorPlacementPolicy, NoiseModel,
};
use microcluster::protocols::{
    build_microcluster, fuse_pair, microcluster_fidelity, reference_formula, Formula, PGrid, PairFusionSpec, Settings,
};
use microcluster::register::{fidelity, Backend, DensityOperator, LocalOperator, PureState, QubitAllocator, Role};
use proptest::prelude::*;

type G = GaussianRational;

const VARS: [Variable; 4] = [Variable::Px, Variable::Py, Variable::Pz, Variable::Alpha];

fn small_ratio() -> impl Strategy<Value = G> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| G::from_ratio(n, d))
}

fn gaussian() -> impl Strategy<Value = G> {
    (small_ratio(), small_ratio()).prop_map(|(re, im)| &re + &(&im * &G::i()))
}

/// Up to five terms over four variables, each of degree at most 4.
fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((gaussian(), prop::array::uniform4(0u8..=1), 0u8..=1), 0..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(c, e, extra)| {
            let mut m = Monomial::ONE;
            for (v, k) in VARS.iter().zip(e) {
                m = m.mul(&Monomial::var_pow(*v, k));
            }
            (c, m.mul(&Monomial::var_pow(Variable::Alpha, extra)))
        }))
    })
}

fn rational_point() -> impl Strategy<Value = Point<G>> {
    prop::array::uniform4((0i64..=20, 1i64..=40)).prop_map(|vals| {
        VARS.iter().zip(vals).fold(Point::new(), |pt, (v, (n, d))| pt.with(*v, G::from_ratio(n, d)))
    })
}

/// A valid float noise model.
fn float_noise() -> impl Strategy<Value = NoiseModel<Complex64>> {
    (0.0..=0.5f64, 0.0..=1.0 / 3.0, 0.0..=1.0 / 3.0, 0.0..=1.0 / 3.0)
        .prop_map(|(a, x, y, z)| NoiseModel::new(c(a), c(x), c(y), c(z)))
}

fn exact_noise() -> impl Strategy<Value = NoiseModel<G>> {
    (0i64..=50, 0i64..=33, 0i64..=33, 0i64..=33)
        .prop_map(|(a, x, y, z)| NoiseModel::new(G::from_ratio(a, 100), G::from_ratio(x, 100), G::from_ratio(y, 100), G::from_ratio(z, 100)))
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn policy() -> impl Strategy<Value = ErrorPlacementPolicy> {
    prop::sample::select(ErrorPlacementPolicy::all())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_distributes(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), pt in rational_point()) {
        let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
        prop_assert_eq!((&a * &b).eval(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&pt).unwrap(), &ea + &eb);
    }

    #[test]
    fn series_of_product_is_product_of_series(a in polynomial(), b in polynomial(), da in 0u8..3, dp in 0u8..3) {
        let caps = Caps::zero().with(Variable::Alpha, da).with(Variable::Px, dp).with(Variable::Py, 2).with(Variable::Pz, 1);
        let lhs = TruncatedSeries::new(&(&a * &b), caps);
        let rhs = &TruncatedSeries::new(&a, caps) * &TruncatedSeries::new(&b, caps);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cross_multiplication_is_an_equivalence(a in polynomial(), b in polynomial(), k in gaussian(), m in polynomial()) {
        prop_assume!(!b.is_zero() && !k.is_zero() && !m.is_zero());
        let f = RationalFunction::new(a.clone(), b.clone()).unwrap();
        let g = RationalFunction::new(&a * &m, &b * &m).unwrap();
        let h = RationalFunction::new(a.scale(&k), b.scale(&k)).unwrap();
        prop_assert!(f.equivalent(&f));
        prop_assert_eq!(f.equivalent(&g), g.equivalent(&f));
        prop_assert!(f.equivalent(&g) && g.equivalent(&h) && f.equivalent(&h));
    }

    #[test]
    fn fusion_kraus_sum_is_identity(a in small_ratio()) {
        prop_assert_eq!(kraus_sum(&a), LocalOperator::diagonal(vec![G::one(); 4]));
        let w = failure_weights(&a);
        prop_assert_eq!(&w[0], &w[3]);
        prop_assert_eq!(&w[1], &w[2]);
    }

    #[test]
    fn success_plus_failure_keeps_trace(noise in exact_noise(), policy in policy(), amps in prop::collection::vec(gaussian(), 16)) {
        prop_assume!(policy.is_trace_preserving());
        let mut alloc = QubitAllocator::new();
        let qs: Vec<_> = (0..4).map(|_| alloc.fresh(Role::EprHalf)).collect();
        let psi = PureState::new(qs.clone(), amps).unwrap();
        let rho = DensityOperator::from_pure(&psi, Backend::Dense);
        let s = alloc.fresh(Role::Connector);
        let table = Default::default();
        let ok = fuse_success(&rho, qs[1], qs[2], &noise, &policy, &[qs[0], qs[3]], s, &table).unwrap();
        let bad = fuse_fail(&rho, qs[1], qs[2], qs[0], qs[3], &noise, &policy, &table).unwrap();
        prop_assert_eq!(&ok.trace() + &bad.trace(), rho.trace());
        prop_assert!(ok.is_hermitian() && bad.is_hermitian());
    }

    #[test]
    fn channels_keep_trace_and_hermiticity(noise in exact_noise(), amps in prop::collection::vec(gaussian(), 8), target in 0usize..3) {
        let mut alloc = QubitAllocator::new();
        let qs: Vec<_> = (0..3).map(|_| alloc.fresh(Role::EprHalf)).collect();
        let rho = DensityOperator::from_pure(&PureState::new(qs.clone(), amps).unwrap(), Backend::Branches);
        let out = pauli_channel(&rho, qs[target], &noise).unwrap();
        prop_assert_eq!(out.trace(), rho.trace());
        prop_assert!(out.is_hermitian());
    }

    #[test]
    fn backends_agree_exactly(amps in prop::collection::vec(gaussian(), 8), other in prop::collection::vec(gaussian(), 8), noise in exact_noise(), w in small_ratio()) {
        let mut alloc = QubitAllocator::new();
        let qs: Vec<_> = (0..3).map(|_| alloc.fresh(Role::EprHalf)).collect();
        let psi = PureState::new(qs.clone(), amps).unwrap();
        let phi = PureState::new(qs.clone(), other).unwrap();
        let mk = |b| {
            let a = DensityOperator::from_pure(&psi, b);
            let mixed = a.add(&DensityOperator::from_pure(&phi, b).scale(&w.pow(2))).unwrap();
            pauli_channel(&mixed, qs[1], &noise).unwrap().project_remove(qs[2], &[G::one(), G::from_int(-1)]).unwrap()
        };
        let (dense, branches) = (mk(Backend::Dense), mk(Backend::Branches));
        prop_assert_eq!(dense.trace(), branches.trace());
        let target = PureState::new(vec![qs[0], qs[1]], vec![G::one(), G::i(), G::zero(), G::one()]).unwrap();
        prop_assert_eq!(dense.overlap(&target).unwrap(), branches.overlap(&target).unwrap());
        prop_assert_eq!(dense.matrix(), branches.to_dense().matrix());
    }

    #[test]
    fn operations_are_linear_in_the_mixture(a in prop::collection::vec(gaussian(), 4), b in prop::collection::vec(gaussian(), 4), w in small_ratio()) {
        let mut alloc = QubitAllocator::new();
        let qs: Vec<_> = (0..2).map(|_| alloc.fresh(Role::EprHalf)).collect();
        let ra = DensityOperator::from_pure(&PureState::new(qs.clone(), a).unwrap(), Backend::Dense);
        let rb = DensityOperator::from_pure(&PureState::new(qs.clone(), b).unwrap(), Backend::Dense);
        let mix = ra.add(&rb.scale(&w)).unwrap();
        let s = LocalOperator::s();
        let lhs = mix.apply(&s, &[qs[0]]).unwrap();
        let rhs = ra.apply(&s, &[qs[0]]).unwrap().add(&rb.apply(&s, &[qs[0]]).unwrap().scale(&w)).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
        let ket = [G::one(), G::i()];
        let lhs = mix.project_remove(qs[1], &ket).unwrap();
        let rhs = ra.project_remove(qs[1], &ket).unwrap().add(&rb.project_remove(qs[1], &ket).unwrap().scale(&w)).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn fidelity_ignores_qubit_order(amps in prop::collection::vec(gaussian(), 8), target in prop::collection::vec(gaussian(), 8), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut p = vec![0usize, 1, 2];
        for i in (1..3).rev() { p.swap(i, rng.random_range(0..=i)); }
        p
    })) {
        prop_assume!(amps.iter().any(|a| !a.is_zero()) && target.iter().any(|a| !a.is_zero()));
        let mut alloc = QubitAllocator::new();
        let qs: Vec<_> = (0..3).map(|_| alloc.fresh(Role::EprHalf)).collect();
        let rho = DensityOperator::from_pure(&PureState::new(qs.clone(), amps).unwrap(), Backend::Branches);
        let t = PureState::new(qs.clone(), target).unwrap();
        let order: Vec<_> = perm.iter().map(|&i| qs[i]).collect();
        let base = fidelity(&t, &rho).unwrap();
        prop_assert_eq!(fidelity(&t.reorder(&order).unwrap(), &rho).unwrap(), base.clone());
        prop_assert_eq!(fidelity(&t, &rho.reorder(&order).unwrap()).unwrap(), base.clone());
        let fresh = alloc.fresh(Role::EprHalf);
        let relabeled = fidelity(&t.relabel(qs[0], fresh).unwrap(), &rho.relabel(qs[0], fresh).unwrap()).unwrap();
        prop_assert_eq!(relabeled, base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_states_are_physical(noise in float_noise(), n in 1usize..=3, k in 1usize..=3, policy in policy()) {
        let h = build_microcluster(n, &noise, &Settings::dense(), &mut QubitAllocator::new()).unwrap();
        let rho = h.state.scale(&c(1.0 / h.state.trace().re));
        prop_assert!(rho.hermiticity_defect() <= 1e-12);
        prop_assert!(rho.min_eigenvalue() >= -1e-10);
        let f = h.fidelity().unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        let k = k.min(n);
        let out = fuse_pair(&PairFusionSpec::new(n, k, noise, policy).unwrap(), &Settings::dense()).unwrap();
        let rho = out.state.scale(&c(1.0 / out.state.trace().re));
        prop_assert!(rho.hermiticity_defect() <= 1e-12);
        prop_assert!(rho.min_eigenvalue() >= -1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&out.fidelity));
    }

    #[test]
    fn float_tracks_exact(noise in exact_noise(), n in 1usize..=3, k in 1usize..=2, policy in policy()) {
        let float = noise.map(|x| c(x.to_f64().0));
        let e = microcluster_fidelity(n, &noise, &Settings::branches()).unwrap().to_f64().0;
        let f = microcluster_fidelity(n, &float, &Settings::dense()).unwrap();
        prop_assert!((e - f).abs() <= 1e-10);
        let k = k.min(n);
        let e = fuse_pair(&PairFusionSpec::new(n, k, noise, policy).unwrap(), &Settings::dense()).unwrap().fidelity.to_f64().0;
        let f = fuse_pair(&PairFusionSpec::new(n, k, float, policy).unwrap(), &Settings::dense()).unwrap().fidelity;
        prop_assert!((e - f).abs() <= 1e-10);
    }

    #[test]
    fn pauli_only_clusters_ignore_xy_swap(x in 0i64..=30, y in 0i64..=30, z in 0i64..=30, n in 1usize..=4) {
        let noise = NoiseModel::new(G::zero(), G::from_ratio(x, 100), G::from_ratio(y, 100), G::from_ratio(z, 100));
        let a = microcluster_fidelity(n, &noise, &Settings::branches()).unwrap();
        let b = microcluster_fidelity(n, &noise.swap_xy(), &Settings::branches()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn zero_noise_is_perfect_everywhere(n in 1usize..=4, k in 1usize..=4, policy in policy()) {
        let k = k.min(n);
        let spec = PairFusionSpec::new(n, k, NoiseModel::<G>::ideal(), policy).unwrap();
        prop_assert_eq!(fuse_pair(&spec, &Settings::dense()).unwrap().fidelity, G::one());
    }

    #[test]
    fn closed_form_matches_its_series(an in 0i64..=10, pn in 0i64..=10) {
        // |alpha|, |p| <= 1e-3: the truncation error is far below 1e-9.
        let (alpha, p) = (an as f64 * 1e-4, pn as f64 * 1e-4);
        let caps = Caps::zero().with(Variable::Alpha, 3).with(Variable::P, 3);
        let f = microcluster_fidelity(2, &NoiseModel::<Polynomial>::symbolic_equiprobable(), &Settings::branches()).unwrap();
        let series = f.series_expand(caps).unwrap();
        let pt = Point::new().with(Variable::Alpha, G::from_ratio(an, 10_000)).with(Variable::P, G::from_ratio(pn, 10_000));
        let exact = f.eval(&pt).unwrap().to_f64().0;
        let fpt = Point::new().with(Variable::Alpha, alpha).with(Variable::P, p);
        let approx = series.polynomial().eval_f64(&fpt).unwrap().re;
        prop_assert!((exact - approx).abs() <= 1e-9);
        let eq2 = reference_formula(Formula::Eq2).unwrap();
        let approx = eq2.series_expand(caps).unwrap().polynomial().eval_f64(&fpt).unwrap().re;
        prop_assert!((eq2.eval(&pt).unwrap().to_f64().0 - approx).abs() <= 1e-9);
    }

    #[test]
    fn general_format_round_trips(x in -1e6..1e6f64) {
        let s = format_sig(x, 12);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
    }

    #[test]
    fn grid_points_are_ordered(start in 0i64..=10, span in 0i64..=10, steps in 1usize..=30) {
        let grid: PGrid = format!("{}:{}:{steps}", start as f64 / 100.0, (start + span) as f64 / 100.0).parse().unwrap();
        let pts = grid.points();
        prop_assert_eq!(pts.len(), steps);
        prop_assert!(pts.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(pts[0], start as f64 / 100.0);
    }
}
