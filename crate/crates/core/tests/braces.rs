mod common;

use common::*;
use num::BigRational;
use ybe_reflect::brace::{
    check_aggi, check_general, check_socle_criterion, find_plus_star_factor, reflection_plus_star,
    restrict_solution, restrict_to_left_ideal, solution_from_brace, BraceSubset, CompositionRule,
    FiniteBrace, PlusStarHypothesis,
};
use ybe_reflect::param::{check_linear_set_reflection, check_param_reflection, k_linear_combination, KFamily};
use ybe_reflect::poly::{rational, BivarPoly};
use ybe_reflect::reflection::{check_relation, Relation};
use ybe_reflect::ring::NilpotentRing;
use ybe_reflect::{Error, MapOnX};

fn ring_and_brace(p: usize, n: usize) -> (NilpotentRing, FiniteBrace) {
    let ring = NilpotentRing::truncated_poly(p, n).unwrap();
    let br = ring.to_brace().unwrap();
    (ring, br)
}

#[test]
fn x_plus_top_power_satisfies_k2r_rk1_but_not_k2r_rk2() {
    for (p, n) in [(2, 3), (2, 4), (3, 3)] {
        let (ring, br) = ring_and_brace(p, n);
        let sol = solution_from_brace(&br);
        let k = sol
            .map_from_fn(|x| ring.add(x, ring.power(x, n - 1).unwrap()))
            .unwrap();
        let s = sol.solution();
        assert!(check_relation(s, &k, Relation::K2RisRK1).unwrap());
        assert!(check_relation(s, &k, Relation::K1RisRK2).unwrap());
        assert!(!check_relation(s, &k, Relation::K2RisRK2).unwrap());
        assert!(oracle_is_reflection(s, &k));
    }
}

#[test]
fn socle_criterion_equivalence_over_many_maps() {
    for (p, n) in [(2, 3), (2, 4), (3, 3)] {
        let (ring, br) = ring_and_brace(p, n);
        let sol = solution_from_brace(&br);
        let m = br.order();
        let mut maps: Vec<MapOnX> = Vec::new();
        for j in 1..n {
            maps.push(sol.map_from_fn(|x| ring.add(x, ring.power(x, j).unwrap())).unwrap());
        }
        for a in 0..m {
            maps.push(sol.map_from_fn(|x| ring.add(x, a)).unwrap());
            maps.push(sol.map_from_fn(|x| ring.add(x, ring.mul(x, a))).unwrap());
        }
        for k in &maps {
            let c = check_socle_criterion(&sol, k).unwrap();
            assert!(c.generates);
            assert!(c.equivalence_holds(), "{k}: {c:?}");
        }
    }
}

#[test]
fn general_and_aggi_conditions_agree_with_reflection_equation() {
    for (p, n) in [(2, 3), (2, 4), (3, 3)] {
        let (ring, br) = ring_and_brace(p, n);
        let sol = solution_from_brace(&br);
        let all: Vec<usize> = (0..br.order()).collect();
        let id = |x: usize| x;
        for rule in [CompositionRule::Star, CompositionRule::PlusStar] {
            for a in 0..br.order() {
                let constant = move |_: usize| a;
                let power = |x: usize| ring.mul(ring.mul(x, x), a);
                for g in [&constant as &dyn Fn(usize) -> usize, &power] {
                    if let Ok(out) = check_general(&sol, &all, rule, &id, g) {
                        assert!(out.consistent(), "general {rule:?} a={a}: {out:?}");
                        assert_eq!(out.is_reflection, oracle_is_reflection(sol.solution(), &out.k));
                    }
                    if let Ok(out) = check_aggi(&sol, rule, &[(&id, g)]) {
                        assert!(out.consistent(), "aggi {rule:?} a={a}: {out:?}");
                        assert_eq!(out.is_reflection, oracle_is_reflection(sol.solution(), &out.k));
                    }
                }
            }
        }
    }
}

#[test]
fn aggi_with_two_terms() {
    let (ring, br) = ring_and_brace(2, 4);
    let sol = solution_from_brace(&br);
    let id = |x: usize| x;
    let b = ring.find("b").unwrap();
    let b2 = ring.find("b^2").unwrap();
    let g1 = move |_: usize| b;
    let g2 = move |_: usize| b2;
    let out = check_aggi(&sol, CompositionRule::Star, &[(&id, &g1), (&id, &g2)]).unwrap();
    assert!(out.consistent());
    for x in 0..br.order() {
        let expected = ring.add(x, ring.add(ring.mul(x, b), ring.mul(x, b2)));
        assert_eq!(sol.apply_map(&out.k, x), expected);
    }
}

#[test]
fn non_equivariant_f_is_a_hypothesis_error() {
    let (ring, br) = ring_and_brace(2, 3);
    let sol = solution_from_brace(&br);
    let b = ring.find("b").unwrap();
    let all: Vec<usize> = (0..br.order()).collect();
    // translation by b does not commute with every λ_x
    let f = move |x: usize| ring.add(x, b);
    let g = |_: usize| 0;
    let f_map = sol.map_from_fn(&f).unwrap();
    assert!(!ybe_reflect::group::is_equivariant(sol.solution(), &f_map));
    let err = check_general(&sol, &all, CompositionRule::PlusStar, &f, &g).unwrap_err();
    assert!(matches!(err, Error::Hypothesis { .. }), "{err}");
}

fn b4_restricted(ring: &NilpotentRing, br: &FiniteBrace) -> Vec<usize> {
    let xs = ring.subset_b_plus_b_a().unwrap();
    assert!(restrict_solution(br, &xs).is_ok());
    xs
}

#[test]
fn characteristic_two_factor_search() {
    let (ring, br) = ring_and_brace(2, 4);
    let xs = b4_restricted(&ring, &br);
    let sol = restrict_solution(&br, &xs).unwrap();
    let k = sol.map_from_fn(|x| ring.add(x, ring.mul(x, x))).unwrap();

    let all: Vec<usize> = (0..br.order()).collect();
    let g = find_plus_star_factor(&sol, &k, &all).expect("some g with values in A");
    for (pos, &gx) in g.iter().enumerate() {
        let x = sol.element(pos);
        assert_eq!(ring.add(ring.mul(x, gx), x), sol.apply_map(&k, x));
    }
    let s = sol.solution();
    for x in 0..s.n() {
        for y in 0..s.n() {
            assert_eq!(g[s.tau(y, x)], g[s.tau(k.get(y), x)]);
        }
    }

    // values in A·b only reach x*g ∈ {0, b³}
    let b = ring.find("b").unwrap();
    let mut az: Vec<usize> = all.iter().map(|&a| ring.mul(a, b)).collect();
    az.sort_unstable();
    az.dedup();
    assert!(find_plus_star_factor(&sol, &k, &az).is_none());
}

#[test]
fn invariant_mode_builds_x_plus_x_squared() {
    let (ring, br) = ring_and_brace(2, 4);
    let xs = b4_restricted(&ring, &br);
    let sol = restrict_solution(&br, &xs).unwrap();
    let k = reflection_plus_star(&sol, &|x| x, PlusStarHypothesis::Invariant).unwrap();
    assert!(oracle_is_reflection(sol.solution(), &k));
    // g leaving X is rejected
    let zero = |_: usize| 0;
    let err = reflection_plus_star(&sol, &zero, PlusStarHypothesis::Invariant).unwrap_err();
    assert!(matches!(err, Error::Hypothesis { .. }));
}

#[test]
fn ideal_coset_mode() {
    let (ring, br) = ring_and_brace(2, 4);
    let sol = solution_from_brace(&br);
    let b3 = ring.find("b^3").unwrap();
    let ideal = BraceSubset::new(&br, vec![0, b3]);
    assert!(ideal.is_ideal());
    let b = ring.find("b").unwrap();
    // constant on cosets of {0, b³}: depends only on the b and b² coefficients
    let g = move |a: usize| if (a & b) != 0 { b3 } else { 0 };
    let k = reflection_plus_star(&sol, &g, PlusStarHypothesis::IdealCosets(&ideal)).unwrap();
    assert!(oracle_is_reflection(sol.solution(), &k));
    for a in 0..br.order() {
        assert_eq!(sol.apply_map(&k, a), ring.add(a, ring.mul(a, g(a))));
    }

    let bad = move |a: usize| if a == b { b3 } else { 0 };
    let err = reflection_plus_star(&sol, &bad, PlusStarHypothesis::IdealCosets(&ideal)).unwrap_err();
    assert!(matches!(err, Error::Hypothesis { .. }), "{err}");

    let escaping = move |_: usize| b;
    let err = reflection_plus_star(&sol, &escaping, PlusStarHypothesis::IdealCosets(&ideal)).unwrap_err();
    assert!(matches!(err, Error::Hypothesis { .. }));
}

#[test]
fn left_ideal_restriction_is_a_solution() {
    let (ring, br) = ring_and_brace(2, 4);
    let b2 = ring.find("b^2").unwrap();
    let members: Vec<usize> = (0..br.order()).map(|a| ring.mul(a, b2)).collect();
    let ideal = BraceSubset::new(&br, members);
    assert!(ideal.is_left_ideal());
    let sol = restrict_to_left_ideal(&ideal).unwrap();
    let f = sol.solution().flags();
    assert!(f.ybe && f.involutive && f.nondegenerate);
}

#[test]
fn nontrivial_linear_combination_on_b_plus_ba() {
    let (ring, br) = ring_and_brace(3, 4);
    let xs = ring.subset_b_plus_b_a().unwrap();
    assert_eq!(xs.len(), 9);
    let sol = restrict_solution(&br, &xs).expect("b + bA is r-closed");
    let c = ring.find("b^2").unwrap();
    let cs = [c, ring.add(c, c), 0];
    let coefs = [rational(2, 3), rational(2, 3), rational(-1, 3)];
    let mut terms: Vec<(MapOnX, BigRational)> = Vec::new();
    for (&ci, w) in cs.iter().zip(coefs) {
        let f = sol.map_from_fn(|x| ring.add(x, ring.mul(x, ci))).unwrap();
        terms.push((f, w));
    }
    assert!(!terms[0].0.is_identity());
    let l = k_linear_combination(sol.solution(), &terms).unwrap();
    assert!(l.is_involutive());
    assert!(!l.is_identity());
    assert!(check_linear_set_reflection(sol.solution(), &l).unwrap());
    let v = check_param_reflection(sol.solution(), &KFamily::Scaled { k: l, f: BivarPoly::u() }).unwrap();
    assert!(v.passed(), "{}", v.mismatch.unwrap());
}

#[test]
fn trunc_index_matches_ring_names() {
    let ring = NilpotentRing::truncated_poly(2, 4).unwrap();
    assert_eq!(ring.find("b"), Some(trunc_index(2, &[1])));
    assert_eq!(ring.find("b^2"), Some(trunc_index(2, &[0, 1])));
    assert_eq!(ring.find("b+b^2+b^3"), Some(trunc_index(2, &[1, 1, 1])));
    let ring = NilpotentRing::truncated_poly(3, 3).unwrap();
    assert_eq!(ring.find("2b+b^2"), Some(trunc_index(3, &[2, 1])));
}
