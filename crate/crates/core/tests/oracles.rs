//! Independent recomputations of the library's answers by enumeration.

use std::collections::BTreeSet;

use pfrep_core::corpus::{for_each_small_algebra, random_corpus, CorpusParams};
use pfrep_core::laws::{first_violation, DistLaw, Scope};
use pfrep_core::pfun::product_representation;
use pfrep_core::representation::{brute_force_search, check_completeness, SearchOptions};
use pfrep_core::{build_theta, decide_complete_representability, Elem, FiniteAlgebra, PartialFunction, Representation};

fn subsets(n: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

fn union_all(fs: &[&PartialFunction]) -> BTreeSet<(usize, usize)> {
    fs.iter().flat_map(|f| f.pairs()).collect()
}

/// Meet and join completeness by trying every subset.
fn completeness_by_subsets(rep: &Representation) -> (bool, bool) {
    let alg = &rep.source;
    let mut meet_ok = true;
    let mut join_ok = true;
    for s in subsets(alg.len()) {
        let images: Vec<&PartialFunction> = s.iter().map(|&a| rep.image(a)).collect();
        if !s.is_empty() {
            if let Some(m) = alg.meet_set(&s).unwrap() {
                let inter = images
                    .iter()
                    .skip(1)
                    .fold(images[0].clone(), |acc, f| acc.intersect(f).unwrap());
                meet_ok &= *rep.image(m) == inter;
            }
        }
        if let Some(j) = alg.join(&s) {
            let pairs: BTreeSet<_> = rep.image(j).pairs().collect();
            join_ok &= pairs == union_all(&images);
        }
    }
    (meet_ok, join_ok)
}

fn atomic_by_pairs(rep: &Representation) -> bool {
    let atoms = rep.source.atoms();
    rep.assignment
        .iter()
        .flat_map(|f| f.pairs())
        .all(|p| atoms.iter().any(|&x| rep.image(x).contains(p)))
}

fn small_corpus() -> Vec<FiniteAlgebra> {
    random_corpus(11, CorpusParams { samples: 300, ..CorpusParams::default() })
        .unwrap()
        .into_iter()
        .map(|s| s.closure.to_abstract().unwrap())
        .filter(|a| a.len() <= 12)
        .collect()
}

#[test]
fn completeness_criteria_match_subset_enumeration() {
    let mut checked = 0;
    for alg in small_corpus() {
        let theta = build_theta(&alg);
        let rep = theta.representation().expect("closures are representable");
        let found = brute_force_search(&alg, &SearchOptions::default()).unwrap().unwrap();
        for rep in [rep, &found] {
            let report = check_completeness(rep).unwrap();
            let (meet, join) = completeness_by_subsets(rep);
            assert_eq!(report.meet_complete, meet);
            assert_eq!(report.join_complete, join);
            assert_eq!(report.atomic, atomic_by_pairs(rep));
            checked += 1;
        }
    }
    assert!(checked > 100);
}

/// Left or right distributivity by enumerating every family.
fn dist_holds(alg: &FiniteAlgebra, law: DistLaw) -> bool {
    let joins = matches!(law, DistLaw::RightOverJoins | DistLaw::LeftOverJoins);
    let left = matches!(law, DistLaw::LeftOverJoins | DistLaw::LeftOverMeets);
    subsets(alg.len()).all(|s| {
        let ext = |set: &[Elem]| {
            if joins {
                alg.join(set)
            } else if set.is_empty() {
                None
            } else {
                alg.meet_set(set).unwrap()
            }
        };
        let Some(x) = ext(&s) else { return true };
        alg.elements().all(|a| {
            let comp = |b| if left { alg.compose(a, b) } else { alg.compose(b, a) };
            let image: Vec<Elem> = s.iter().map(|&b| comp(b)).collect();
            ext(&image) == Some(comp(x))
        })
    })
}

#[test]
fn distributivity_matches_family_enumeration() {
    let mut algebras = small_corpus();
    algebras.push(pfrep_core::catalog::figure1_closure().to_abstract().unwrap());
    for n in 1..=3 {
        for_each_small_algebra(n, |a| algebras.push(a.clone()));
    }
    for alg in &algebras {
        for law in DistLaw::ALL {
            assert_eq!(
                first_violation(alg, law, Scope::AllSubsets).is_none(),
                dist_holds(alg, law),
                "{} on {alg:?}",
                law.name()
            );
        }
    }
}

#[test]
fn theta_agrees_with_search_on_small_tables() {
    for n in 1..=3 {
        let mut accepted = 0;
        for_each_small_algebra(n, |alg| {
            let verdict = decide_complete_representability(alg);
            let found = brute_force_search(alg, &SearchOptions::default()).unwrap();
            assert_eq!(verdict.completely_representable, found.is_some(), "{alg:?}");
            if verdict.completely_representable {
                accepted += 1;
                assert!(alg.check_phi().is_ok());
                assert!(alg.is_atomistic());
            }
        });
        assert!(accepted >= 1);
    }
}

#[test]
fn theta_image_is_isomorphic_to_the_source() {
    for s in random_corpus(5, CorpusParams { samples: 100, ..CorpusParams::default() }).unwrap() {
        let alg = s.closure.to_abstract().unwrap();
        let rep = build_theta(&alg).representation().cloned().unwrap();
        let image = rep.image_algebra().unwrap().to_abstract().unwrap();
        let iso = alg.isomorphism(&image).expect("θ is an isomorphism onto its image");
        assert!(alg.is_isomorphism(&image, &iso));
    }
}

#[test]
fn products_of_representations() {
    let samples: Vec<FiniteAlgebra> = small_corpus().into_iter().filter(|a| a.len() <= 5).take(8).collect();
    for a in &samples {
        for b in &samples {
            let ra = build_theta(a).representation().cloned().unwrap();
            let rb = build_theta(b).representation().cloned().unwrap();
            let prod = product_representation(&ra, &rb).unwrap();
            assert!(prod.is_verified());
            assert_eq!(prod.base.len(), ra.base.len() + rb.base.len());
            let p = a.direct_product(b);
            assert!(p.validate().passed);
            assert!(decide_complete_representability(&p).completely_representable);
            assert!(check_completeness(&prod).unwrap().all_true());
        }
    }
}
