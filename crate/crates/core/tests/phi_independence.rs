//! Any admissible bijection φ yields a scheme with the same labelled
//! eigenmatrix.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use assoc_schemes::finite_field::FieldElement;
use assoc_schemes::gdd;
use assoc_schemes::gh_aux::AuxLabel;
use assoc_schemes::incidence::Bijection;
use assoc_schemes::scheme::{eigenmatrix_from_characters, verify_axioms};
use assoc_schemes::twin;

fn shuffled(q: usize, with_y: bool, seed: u64) -> Bijection {
    let mut rest: Vec<AuxLabel> = (0..q as u32).map(|i| AuxLabel::Field(FieldElement(i))).collect();
    if with_y {
        rest.push(AuxLabel::Y);
    }
    rest.shuffle(&mut StdRng::seed_from_u64(seed));
    let r = rest.len() + 1;
    let mut images = vec![AuxLabel::X];
    images.extend(rest);
    Bijection::new(images, r, q, with_y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twin_eigenmatrix_ignores_phi(q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let base = twin::make_twin_context(q, None).unwrap();
        let (_, t0) = twin::build_twin_scheme(&base).unwrap();
        let p0 = eigenmatrix_from_characters(&t0).unwrap().labeled(&t0, |c| twin::twin_character_label(&base, c)).unwrap();

        let ctx = twin::make_twin_context(q, Some(shuffled(q as usize, true, seed))).unwrap();
        prop_assert!(twin::check_prop31(&ctx).unwrap().all_passed());
        let (s, t) = twin::build_twin_scheme(&ctx).unwrap();
        prop_assert!(verify_axioms(&s).unwrap().all_passed());
        let p = eigenmatrix_from_characters(&t).unwrap().labeled(&t, |c| twin::twin_character_label(&ctx, c)).unwrap();
        prop_assert_eq!(p.difference_by_label(&p0), None);
    }

    #[test]
    fn gdd_eigenmatrix_ignores_phi(q in prop::sample::select(vec![2u64, 3, 4]), seed in any::<u64>()) {
        let base = gdd::make_gdd_context(q, None).unwrap();
        let (_, t0) = gdd::build_gdd_scheme(&base).unwrap();
        let p0 = eigenmatrix_from_characters(&t0).unwrap().labeled(&t0, |c| gdd::gdd_character_label(&base, c)).unwrap();

        let ctx = gdd::make_gdd_context(q, Some(shuffled(q as usize, false, seed))).unwrap();
        prop_assert!(gdd::check_prop41(&ctx).unwrap().all_passed());
        prop_assert!(gdd::check_corollary(&ctx).unwrap().all_passed());
        let (s, t) = gdd::build_gdd_scheme(&ctx).unwrap();
        prop_assert!(verify_axioms(&s).unwrap().all_passed());
        let p = eigenmatrix_from_characters(&t).unwrap().labeled(&t, |c| gdd::gdd_character_label(&ctx, c)).unwrap();
        prop_assert_eq!(p.difference_by_label(&p0), None);
    }
}

#[test]
fn phi_must_fix_zero_and_be_injective() {
    let f = |i: u32| AuxLabel::Field(FieldElement(i));
    assert!(Bijection::new(vec![f(0), AuxLabel::X, f(1), f(2), AuxLabel::Y], 5, 3, true).is_err());
    assert!(Bijection::new(vec![AuxLabel::X, f(0), f(0), f(2), AuxLabel::Y], 5, 3, true).is_err());
    assert!(Bijection::new(vec![AuxLabel::X, f(0), f(1), f(2)], 4, 3, true).is_err());
    assert!(Bijection::new(vec![AuxLabel::X, f(0), f(1), AuxLabel::Y], 4, 3, false).is_err());
}

#[test]
fn phi_csv_round_trip() {
    let phi = shuffled(3, true, 7);
    let back = Bijection::from_csv(phi.to_csv().as_bytes(), 5, 3, true).unwrap();
    assert_eq!(back, phi);
}
