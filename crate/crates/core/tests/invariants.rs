use fano_delta::arith::{q, Polynomial, Rational};
use fano_delta::bundle::{
    beta_zero, bundle_branches_via_beta, bundle_delta, centroid_phi, smooth_threshold_delta, smooth_threshold_relation,
    BundleBoundary, DeltaKnowledge, Divisor, FanoBase,
};
use fano_delta::calabi::{edge_angles, futaki_closed_form, futaki_invariant, solve_profile, AdmissibleProfile};
use fano_delta::cone::{cone_bundle_consistency, iterated_closed_form, iterated_composition, HypersurfaceConeSpec};
use fano_delta::oracle::{riemann_error_bound, riemann_s_limit, telescoping_iterated_cone};
use proptest::prelude::*;

fn rational(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rational> {
    (lo * den..=hi * den).prop_map(move |k| q(k, den))
}

fn slope_above_one() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(k, d)| q(1, 1) + q(k, d))
}

proptest! {
    #[test]
    fn rational_display_parses_back(p in -10_000i64..10_000, d in 1i64..500) {
        let x = q(p, d);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn rational_field_laws(a in rational(-20, 20, 7), b in rational(-20, 20, 5), c in rational(-5, 5, 3)) {
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn polynomial_calculus(coeffs in prop::collection::vec(-30i64..30, 0..7), lo in rational(-3, 3, 4), w in rational(0, 3, 4)) {
        let p = Polynomial::new(coeffs.into_iter().map(|c| q(c, 3)).collect());
        let hi = &lo + &w;
        prop_assert_eq!(p.derivative().integrate(&lo, &hi).unwrap(), p.eval(&hi) - p.eval(&lo));
        let d = Polynomial::new(vec![q(1, 2), q(-1, 1), q(2, 1)]);
        let (quot, rem) = p.div_rem(&d);
        prop_assert_eq!(&(&quot * &d) + &rem, p.clone());
        prop_assert!(rem.degree().is_none_or(|k| k < 2));
    }

    #[test]
    fn beta_zero_between_half_and_one(n in 1u32..12, r in slope_above_one()) {
        let b = beta_zero(n, &r).unwrap();
        prop_assert!(b > q(1, 2) && b < q(1, 1));
    }

    #[test]
    fn centroid_inside_interval(n in 0u32..8, lo in rational(0, 4, 3), w in rational(1, 4, 5)) {
        let hi = &lo + &w;
        let phi = centroid_phi(&lo, &hi, n).unwrap();
        prop_assert!(phi > lo && phi < hi);
    }

    #[test]
    fn bundle_value_is_branch_minimum(
        n in 1u32..7,
        r in rational(1, 5, 4).prop_filter("r > 0", |r| r.is_positive()),
        a in rational(0, 1, 8),
        b in rational(0, 1, 8),
        delta in rational(0, 3, 5),
    ) {
        let bdry = BundleBoundary::new(a, b);
        prop_assume!(bdry.validate(&r).is_ok());
        let base = FanoBase::new(n, r.clone(), DeltaKnowledge::Exact(delta.clone())).unwrap();
        let out = bundle_delta(&base, &bdry).unwrap();
        let br = &out.branches;
        let base_val = br.base.clone().unwrap();
        prop_assert!(out.value <= base_val && out.value <= br.v0 && out.value <= br.vinf);
        prop_assert!(!out.minimizers.is_empty());
        for d in &out.minimizers {
            let v = match d {
                Divisor::BaseDivisor => &base_val,
                Divisor::V0 => &br.v0,
                Divisor::Vinf => &br.vinf,
            };
            prop_assert_eq!(v, &out.value);
        }
        let via_beta = bundle_branches_via_beta(n, &r, &bdry, &delta).unwrap();
        prop_assert_eq!(via_beta, [base_val, br.v0.clone(), br.vinf.clone()]);
    }

    #[test]
    fn semistable_bundle_value_is_exact(n in 1u32..7, r in rational(1, 5, 4).prop_filter("r > 0", |r| r.is_positive()), a in rational(0, 1, 8), b in rational(0, 1, 8)) {
        let bdry = BundleBoundary::new(a, b);
        prop_assume!(bdry.validate(&r).is_ok());
        let out = bundle_delta(&FanoBase::new(n, r, DeltaKnowledge::AtLeastOne).unwrap(), &bdry).unwrap();
        prop_assert!(!out.lower_bound_only);
        prop_assert_eq!(out.value, out.branches.v0.clone().min(out.branches.vinf.clone()));
    }

    #[test]
    fn smooth_two_branch_form_agrees(n in 1u32..6, r in slope_above_one(), delta in rational(0, 2, 7)) {
        let d = DeltaKnowledge::Exact(delta);
        let out = bundle_delta(&FanoBase::new(n, r.clone(), d.clone()).unwrap(), &BundleBoundary::empty()).unwrap();
        prop_assert_eq!(smooth_threshold_relation(n, &r, &d).unwrap(), out.value);
        let t = smooth_threshold_delta(n, &r).unwrap();
        let at = bundle_delta(&FanoBase::new(n, r, DeltaKnowledge::Exact(t)).unwrap(), &BundleBoundary::empty()).unwrap();
        prop_assert!(at.minimizers.contains(&Divisor::BaseDivisor) && at.minimizers.contains(&Divisor::V0));
    }

    #[test]
    fn cone_matches_bundle_substitution(n in 1u32..7, r in rational(0, 4, 4).prop_filter("r > 0", |r| r.is_positive()), c in rational(0, 1, 8).prop_filter("c < 1", |c| *c < 1)) {
        let base = FanoBase::new(n, r, DeltaKnowledge::Exact(q(1, 1))).unwrap();
        prop_assert!(cone_bundle_consistency(&base, &c).unwrap().agrees);
    }

    #[test]
    fn calabi_profile_is_exact(n in 1u32..7, r in slope_above_one(), k in 1i64..5) {
        let beta = beta_zero(n, &r).unwrap() / q(k, 1);
        let p = solve_profile(n, &r, &beta).unwrap();
        prop_assert!(p.ode_residual().is_zero());
        prop_assert_eq!(p.boundary_values(), (q(0, 1), q(0, 1)));
        edge_angles(&p).unwrap();
    }

    #[test]
    fn futaki_independent_of_profile(n in 1u32..4, r in slope_above_one(), eps in rational(-1, 1, 40), c0 in -3i64..3, c1 in -3i64..3) {
        let std = AdmissibleProfile::standard(n, &r).unwrap();
        let shape = Polynomial::new(vec![q(c0, 1), q(c1, 2)]);
        let pert = std.perturbed(&eps, &shape).unwrap();
        let closed = futaki_closed_form(n, &r).unwrap();
        prop_assert_eq!(futaki_invariant(&std).unwrap(), closed.clone());
        prop_assert_eq!(futaki_invariant(&pert).unwrap(), closed);
    }

    #[test]
    fn telescoping_matches_composition(n in 1u32..6, d_off in 0u32..6, i in 1u32..6, half in any::<bool>()) {
        let d = 2 + d_off % n;
        let d0 = if half { DeltaKnowledge::Exact(q(1, 2)) } else { DeltaKnowledge::AtLeastOne };
        let spec = HypersurfaceConeSpec { n, d, i, delta_v0: d0.clone() };
        let comp = iterated_composition(&spec).unwrap().last().unwrap().delta.clone();
        prop_assert_eq!(telescoping_iterated_cone(n, d, i, &d0).unwrap(), comp.clone());
        prop_assert_eq!(iterated_closed_form(&spec).unwrap(), comp);
    }

    #[test]
    fn riemann_within_bound(n in 0u32..4, a in 0i64..3, len in 1i64..3, m in 1u64..60) {
        let (lo, hi) = (q(a, 1), q(a + len, 1));
        let v = riemann_s_limit(n, &lo, &hi, m).unwrap();
        let exact = centroid_phi(&lo, &hi, n).unwrap() - &lo;
        prop_assert!((v - exact).abs() <= riemann_error_bound(n, &lo, &hi, m).unwrap());
    }
}
