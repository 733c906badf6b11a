use super::*;
use crate::norms::NormSpec;

fn fin(v: ExtendedReal) -> f64 {
    v.value().expect("finite")
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn classify_examples() {
    assert_eq!(EntropySpec::bgs(2).classify(&[0.0, 1.0]).unwrap(), DomainStatus::BoundaryInDomain);
    assert_eq!(EntropySpec::burg(2).classify(&[0.5, -1.0]).unwrap(), DomainStatus::OutsideDomain);
    assert_eq!(EntropySpec::burg(1).classify(&[0.0]).unwrap(), DomainStatus::OutsideDomain);
    assert_eq!(EntropySpec::identity_quadratic(2).classify(&[-5.0, 3.0]).unwrap(), DomainStatus::Interior);
    assert_eq!(EntropySpec::iterated_log(1).classify(&[1.0]).unwrap(), DomainStatus::OutsideDomain);
    assert!(EntropySpec::bgs(2).classify(&[1.0]).is_err());
}

#[test]
fn value_examples() {
    assert_eq!(fin(EntropySpec::bgs(2).value(&[1.0, 1.0]).unwrap()), 0.0);
    let e = std::f64::consts::E;
    assert!(close(fin(EntropySpec::burg(2).value(&[1.0, e]).unwrap()), -1.0, 1e-15));
    assert_eq!(fin(EntropySpec::hct(2.0, 2).unwrap().value(&[2.0, 0.0]).unwrap()), 2.0);
    assert_eq!(EntropySpec::burg(1).value(&[-1.0]).unwrap(), ExtendedReal::PosInfinity);
    assert_eq!(fin(EntropySpec::bgs(1).value(&[0.0]).unwrap()), 0.0);
}

#[test]
fn grad_and_hessian_examples() {
    assert_eq!(EntropySpec::bgs(2).grad(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
    assert_eq!(EntropySpec::burg(2).grad(&[2.0, 4.0]).unwrap(), vec![-0.5, -0.25]);
    assert_eq!(EntropySpec::identity_quadratic(2).grad(&[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
    assert_eq!(EntropySpec::bgs(2).grad(&[0.0, 1.0]), Err(Error::NotInInterior));
    assert_eq!(EntropySpec::bgs(2).hessian_quadform(&[1.0, 1.0], &[1.0, 0.0]).unwrap(), 1.0);
    assert_eq!(EntropySpec::burg(2).hessian_quadform(&[2.0, 2.0], &[1.0, 1.0]).unwrap(), 0.5);
    let q = EntropySpec::quadratic(&[2.0, 1.0, 1.0, 3.0], 2).unwrap();
    // ⟨Aw,w⟩ with w = (1,−2): 2 − 4 + 12 = 10
    assert_eq!(q.hessian_quadform(&[7.0, 7.0], &[1.0, -2.0]).unwrap(), 10.0);
}

#[test]
fn divergence_examples() {
    let bgs = EntropySpec::bgs(1);
    let hand = 2.0 * 2f64.ln() - 1.0;
    assert!(close(fin(bgs.divergence_generic(&[2.0], &[1.0]).unwrap()), hand, 1e-15));
    assert!(close(fin(bgs.divergence_closed(&[2.0], &[1.0]).unwrap()), hand, 1e-15));
    assert_eq!(fin(EntropySpec::bgs(2).divergence_generic(&[2.0, 3.0], &[2.0, 3.0]).unwrap()), 0.0);
    let kl = EntropySpec::bgs(2);
    assert_eq!(fin(kl.divergence_closed(&[0.0, 1.0], &[1.0, 1.0]).unwrap()), 1.0);
    assert_eq!(fin(kl.divergence_generic(&[0.0, 1.0], &[1.0, 1.0]).unwrap()), 1.0);
    let burg = EntropySpec::burg(2);
    assert_eq!(burg.divergence_generic(&[1.0, 1.0], &[-1.0, 1.0]).unwrap(), ExtendedReal::PosInfinity);
    assert_eq!(burg.divergence_closed(&[1.0, 1.0], &[-1.0, 1.0]).unwrap(), ExtendedReal::PosInfinity);
    let is = EntropySpec::burg(1);
    assert!(close(fin(is.divergence_closed(&[1.0], &[2.0]).unwrap()), 2f64.ln() - 0.5, 1e-15));
    // y on the boundary is never allowed
    assert_eq!(kl.divergence_closed(&[1.0, 1.0], &[0.0, 1.0]).unwrap(), ExtendedReal::PosInfinity);
}

#[test]
fn hct_two_is_squared_distance() {
    let h = EntropySpec::hct(2.0, 3).unwrap();
    let (x, y) = ([0.3, 2.0, 0.0], [1.5, 0.25, 4.0]);
    let brute: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
    assert!(close(fin(h.divergence_closed(&x, &y).unwrap()), brute, 1e-14));
    assert!(close(fin(h.divergence_generic(&x, &y).unwrap()), brute, 1e-14));
}

#[test]
fn closed_forms_at_zero_coordinates() {
    // B(x,y) with x on the orthant boundary reduces to Σ y-only terms there.
    let y = [0.7, 2.0];
    let x = [0.0, 2.0];
    let cases = [
        (EntropySpec::hct(0.5, 2).unwrap(), 0.7f64.sqrt()),
        (EntropySpec::hct(3.0, 2).unwrap(), 0.7f64.powi(3)),
        (EntropySpec::beta(0.5, 2).unwrap(), 0.7f64.sqrt() / 0.5),
        (EntropySpec::alpha_beta(2.0, 0.5, 2).unwrap(), 0.49 - (0.5 - 1.0) * 0.7f64.sqrt()),
    ];
    for (spec, expected) in cases {
        let c = fin(spec.divergence_closed(&x, &y).unwrap());
        let g = fin(spec.divergence_generic(&x, &y).unwrap());
        assert!(close(c, expected, 1e-14), "{} {c} {expected}", spec.name());
        assert!(close(g, expected, 1e-12), "{} {g} {expected}", spec.name());
    }
}

#[test]
fn three_point_examples() {
    let q = EntropySpec::identity_quadratic(2);
    assert_eq!(q.three_point_residual(&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    let b = EntropySpec::bgs(3);
    let x = [0.4, 1.2, 3.0];
    assert_eq!(b.three_point_residual(&x, &x, &x).unwrap(), 0.0);
    let r = b.three_point_residual(&x, &[1.0, 0.5, 2.0], &[2.0, 2.0, 0.1]).unwrap();
    assert!(r.abs() < 1e-12);
    assert!(b.three_point_residual(&x, &[0.0, 1.0, 1.0], &x).is_err());
}

#[test]
fn scaling_combinator() {
    let base = EntropySpec::burg(2);
    let s = scale_plus_linear(base.clone(), 3.0, &[5.0, -1.0]).unwrap();
    let (x, y) = ([0.3, 4.0], [1.1, 0.9]);
    let ratio = fin(s.divergence_closed(&x, &y).unwrap()) / fin(base.divergence_closed(&x, &y).unwrap());
    assert!((ratio - 3.0).abs() < 1e-12);
    let same = scale_plus_linear(base.clone(), 1.0, &[0.0, 0.0]).unwrap();
    assert_eq!(same.divergence_closed(&x, &y).unwrap(), base.divergence_closed(&x, &y).unwrap());
    assert_eq!(scale_plus_linear(base, 0.0, &[0.0, 0.0]), Err(Error::NonpositiveLambda(0.0)));
}

#[test]
fn translation_combinator() {
    let t = translate(EntropySpec::burg(1), &[1.0]).unwrap();
    let expected = (1.5f64).ln() + 2.0 / 3.0 - 1.0;
    assert!(close(fin(t.divergence_closed(&[1.0], &[2.0]).unwrap()), expected, 1e-15));
    let il = translate(EntropySpec::iterated_log(2), &[1.0, 1.0]).unwrap();
    assert_eq!(il.classify(&[0.5, 1e-3]).unwrap(), DomainStatus::Interior);
    assert_eq!(il.classify(&[0.5, 0.0]).unwrap(), DomainStatus::OutsideDomain);
    assert_eq!(il.metadata().zone.lower, vec![Some(0.0), Some(0.0)]);
    // shifting by −1 maps (1,∞)ⁿ to (0,∞)ⁿ, matching −Σ log log(1 + x̃)
    let x = [0.5, 2.0];
    let direct: f64 = -x.iter().map(|t: &f64| (1.0 + t).ln().ln()).sum::<f64>();
    assert!(close(fin(il.value(&x).unwrap()), direct, 1e-15));
}

#[test]
fn direct_sum_of_quadratics_is_quadratic() {
    let q1 = EntropySpec::identity_quadratic(1);
    let ds = direct_sum(vec![q1.clone(), q1], 1.0, NormSpec::euclidean(2)).unwrap();
    let q2 = EntropySpec::identity_quadratic(2);
    let (x, y) = ([1.0, -2.0], [0.5, 3.0]);
    assert_eq!(ds.divergence_closed(&x, &y).unwrap(), q2.divergence_closed(&x, &y).unwrap());
    assert_eq!(ds.grad(&x).unwrap(), q2.grad(&x).unwrap());
}

#[test]
fn direct_sum_rejects_bad_constant() {
    let q1 = EntropySpec::identity_quadratic(1);
    let r = direct_sum(vec![q1.clone(), q1], 1.5, NormSpec::euclidean(2));
    assert!(matches!(r, Err(Error::SemiEquivalenceViolated { .. })));
}

#[test]
fn sum_of_adds_divergences() {
    let s = sum_of(vec![(2.0, EntropySpec::bgs(2)), (0.5, EntropySpec::burg(2))]).unwrap();
    let (x, y) = ([0.5, 1.5], [2.0, 0.25]);
    let expected = 2.0 * fin(EntropySpec::bgs(2).divergence_closed(&x, &y).unwrap())
        + 0.5 * fin(EntropySpec::burg(2).divergence_closed(&x, &y).unwrap());
    assert!(close(fin(s.divergence_closed(&x, &y).unwrap()), expected, 1e-14));
    // intersection of a closed and an open orthant is the open one
    assert_eq!(s.classify(&[0.0, 1.0]).unwrap(), DomainStatus::OutsideDomain);
    assert!(!s.metadata().dom_closed);
}

#[test]
fn ell2_type_overflow_is_an_error() {
    let e = EntropySpec::ell2_type(0, 1).unwrap();
    assert!(matches!(e.value(&[14.0, 14.0]), Err(Error::Overflow(_))));
    assert!(e.value(&[1.0, 1.0]).is_ok());
}

#[test]
fn parameter_validation() {
    assert!(EntropySpec::hct(1.0, 2).is_err());
    assert!(EntropySpec::hct(0.0, 2).is_err());
    assert!(EntropySpec::beta(-0.5, 2).is_err());
    assert!(EntropySpec::alpha_beta(0.5, 0.5, 2).is_err());
    assert!(EntropySpec::l2lp(2.5, 2).is_err());
    assert!(EntropySpec::quadratic(&[1.0, 0.0, 0.0, -1.0], 2).is_err());
    assert!(EntropySpec::ell2_type(0, 0).is_err());
    assert!(EntropySpec::from_base(Base::Ell2Type { n_split: 0 }, 3).is_err());
}

#[test]
fn quadratic_is_symmetrized() {
    // (A+Aᵀ)/2 = [[2,1],[1,2]]
    let q = EntropySpec::quadratic(&[2.0, 2.0, 0.0, 2.0], 2).unwrap();
    assert_eq!(q.hessian_quadform(&[0.0, 0.0], &[1.0, -1.0]).unwrap(), 2.0);
    assert_eq!(q.grad(&[1.0, 0.0]).unwrap(), vec![2.0, 1.0]);
    // [[1,2],[0,1]] symmetrizes to a singular matrix
    assert!(EntropySpec::quadratic(&[1.0, 2.0, 0.0, 1.0], 2).is_err());
}

#[test]
fn metadata_flags() {
    let m = EntropySpec::bgs(2).metadata();
    assert!(m.legendre && m.dom_closed && m.essentially_smooth);
    assert!(!EntropySpec::hct(3.0, 2).unwrap().metadata().essentially_smooth);
    let m = EntropySpec::hct(-1.0, 2).unwrap().metadata();
    assert!(m.essentially_smooth && !m.dom_closed);
    let m = EntropySpec::burg(2).metadata();
    assert!(!m.dom_closed && m.legendre);
}
