use pfrep_core::catalog::{figure1, figure1_closure, figure2, figure2_closure, figure2_closure_with_range};
use pfrep_core::laws::{first_violation, DistLaw, RightMeetInstance, Scope};
use pfrep_core::ninfty::{check_truncation, verify_example_43};
use pfrep_core::representation::check_completeness;
use pfrep_core::{build_theta, decide_complete_representability, PartialFunction};

#[test]
fn figure1_refutes_right_distributivity_over_meets() {
    let fx = figure1();
    let f = |n: &str| fx.get(n).unwrap().clone();
    let (f1, f2, g, h) = (f("f1"), f("f2"), f("g"), f("h"));
    let meet_first = f1.intersect(&f2).unwrap().compose(&g).unwrap();
    let compose_first = f1.compose(&g).unwrap().intersect(&f2.compose(&g).unwrap()).unwrap();
    assert!(meet_first.is_empty());
    assert_eq!(compose_first, h);
    assert!(!h.is_empty());
}

#[test]
fn figure1_closure_shape() {
    let c = figure1_closure();
    let alg = c.to_abstract().unwrap();
    assert_eq!(c.base().len(), 4);
    assert_eq!(alg.len(), 12);
    assert_eq!(alg.atoms().len(), 7);
    let idx = |n: &str| alg.index_of(n).unwrap();
    let (f1, f2, g, h) = (idx("f1"), idx("f2"), idx("g"), idx("h"));
    assert_eq!(alg.compose(f1, g), h);
    let below_h: Vec<_> = alg.elements().filter(|&x| alg.leq(x, h)).collect();
    assert_eq!(below_h.len(), 2);
    let inst = RightMeetInstance::new(&alg, f1, f2, g);
    assert!(inst.fails());
    assert_eq!(inst.meet_then_compose, alg.bottom());
    assert_eq!(inst.compose_then_meet, h);
    assert!(first_violation(&alg, DistLaw::RightOverMeets, Scope::Pairs).is_some());
    for law in [DistLaw::RightOverJoins, DistLaw::LeftOverJoins, DistLaw::LeftOverMeets] {
        assert_eq!(first_violation(&alg, law, Scope::AllSubsets), None, "{}", law.name());
    }
    let verdict = decide_complete_representability(&alg);
    assert!(verdict.completely_representable);
    assert!(check_completeness(verdict.representation().unwrap()).unwrap().all_true());
}

#[test]
fn figure2_theta_misrepresents_range() {
    let with_range = figure2_closure_with_range();
    assert_eq!(figure2().base.len(), 3);
    assert_eq!(with_range.len(), 10);
    assert_eq!(figure2_closure().len(), 10);
    let alg = with_range.to_abstract().unwrap();
    let theta = build_theta(&alg);
    let rep = theta.representation().expect("the reduct is representable");
    let g = alg.index_of("g").unwrap();
    let range_g = with_range.index_of(&with_range.functions()[g].range_diag()).unwrap();
    let image_of_range = rep.image(range_g);
    let range_of_image = rep.image(g).range_diag();
    assert_ne!(*image_of_range, range_of_image);
    // The original representation does preserve range.
    assert_eq!(with_range.functions()[range_g], with_range.functions()[g].range_diag());
}

#[test]
fn example_43_symbolic_and_truncated() {
    let report = verify_example_43();
    assert!(report.passed());
    assert_eq!(report.join_g.value.to_string(), "id[N∞]");
    assert!(report.meet_h.value.is_zero());
    assert!(report.left_dist_join_fails && report.left_dist_meet_fails);
    for n in 1..=4 {
        check_truncation(n).unwrap();
    }
}

#[test]
fn diagrams_use_the_drawn_arrows() {
    let fx = figure1();
    assert_eq!(fx.base, ["a", "b", "c", "d"]);
    assert_eq!(*fx.get("g").unwrap(), PartialFunction::from_pairs(4, [(1, 3), (2, 3)]).unwrap());
    let fx = figure2();
    assert_eq!(fx.base, ["a", "b", "c"]);
    assert_eq!(*fx.get("f").unwrap(), PartialFunction::from_pairs(3, [(0, 2)]).unwrap());
}
