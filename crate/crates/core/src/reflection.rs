//! Reflections of a finite solution: maps `k: X → X` with
//! `r k₂ r k₂ = k₂ r k₂ r`, where `k₂ = id × k`.
//!
//! Writing `t(x,y) = σ_{σ_x(y)}(k(τ_y(x)))` and `u(x,y) = τ_{k(τ_y(x))}(σ_x(y))`,
//! one has `k₂ r k₂ r (x,y) = (t(x,y), k(u(x,y)))` and
//! `r k₂ r k₂ (x,y) = (t(x,k(y)), u(x,k(y)))`, which is what the fast check and
//! the pruned enumeration evaluate.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solution::{FiniteSolution, MapOnX};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionReport {
    #[serde(serialize_with = "serialize_map")]
    pub map: MapOnX,
    pub is_reflection: bool,
    pub involutive: bool,
    /// Filled in by [`crate::group::is_equivariant`] when requested.
    pub equivariant: Option<bool>,
    /// First pair `(x, y)` (0-based) where the reflection equation fails.
    pub witness: Option<(usize, usize)>,
}

fn serialize_map<S: serde::Serializer>(m: &MapOnX, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

fn check_len(sol: &FiniteSolution, k: &MapOnX) -> Result<()> {
    if k.n() != sol.n() {
        return Err(Error::input(format!(
            "map {k} has length {}, solution has n = {}",
            k.n(),
            sol.n()
        )));
    }
    Ok(())
}

/// `t(x, y) = σ_{σ_x(y)}(k(τ_y(x)))`.
pub fn t_map(sol: &FiniteSolution, k: &MapOnX, x: usize, y: usize) -> usize {
    let (a, b) = sol.apply(x, y);
    sol.sigma(a, k.get(b))
}

/// `u(x, y) = τ_{k(τ_y(x))}(σ_x(y))`.
pub fn u_map(sol: &FiniteSolution, k: &MapOnX, x: usize, y: usize) -> usize {
    let (a, b) = sol.apply(x, y);
    sol.tau(k.get(b), a)
}

/// Both sides of the reflection equation at `(x, y)`, by composing `r` and `k₂`.
pub fn reflection_sides(
    sol: &FiniteSolution,
    k: &MapOnX,
    x: usize,
    y: usize,
) -> ((usize, usize), (usize, usize)) {
    let r = |(a, b): (usize, usize)| sol.apply(a, b);
    let k2 = |(a, b): (usize, usize)| (a, k.get(b));
    let lhs = r(k2(r(k2((x, y)))));
    let rhs = k2(r(k2(r((x, y)))));
    (lhs, rhs)
}

fn first_failure(sol: &FiniteSolution, k: &MapOnX) -> Option<(usize, usize)> {
    let n = sol.n();
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    if sol.is_nondegenerate() {
        pairs.into_iter().find(|&(x, y)| {
            let ky = k.get(y);
            t_map(sol, k, x, ky) != t_map(sol, k, x, y)
                || u_map(sol, k, x, ky) != k.get(u_map(sol, k, x, y))
        })
    } else {
        pairs.into_iter().find(|&(x, y)| {
            let (lhs, rhs) = reflection_sides(sol, k, x, y);
            lhs != rhs
        })
    }
}

/// Decides whether `k` is a reflection of `sol`.
pub fn is_reflection(sol: &FiniteSolution, k: &MapOnX) -> Result<ReflectionReport> {
    check_len(sol, k)?;
    let witness = first_failure(sol, k);
    Ok(ReflectionReport {
        map: k.clone(),
        is_reflection: witness.is_none(),
        involutive: k.is_involutive(),
        equivariant: None,
        witness,
    })
}

/// Checks only `t(x, y) = t(x, k(y))`, which suffices for involutive
/// non-degenerate solutions.
pub fn is_reflection_via_t(sol: &FiniteSolution, k: &MapOnX) -> Result<bool> {
    check_len(sol, k)?;
    if !(sol.is_involutive() && sol.is_nondegenerate()) {
        return Err(Error::precondition(
            "the t-only test needs an involutive non-degenerate solution",
        ));
    }
    let n = sol.n();
    Ok((0..n).all(|x| (0..n).all(|y| t_map(sol, k, x, y) == t_map(sol, k, x, k.get(y)))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectionFilter {
    All,
    InvolutiveOnly,
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    sol: &'a FiniteSolution,
    involutive_only: bool,
}

impl Search<'_> {
    /// False if some fully determined instance of the `t`/`u` identities fails.
    fn consistent(&self, k: &[usize]) -> bool {
        let sol = self.sol;
        let n = sol.n();
        if self.involutive_only {
            for (x, &kx) in k.iter().enumerate() {
                if kx != UNSET && k[kx] != UNSET && k[kx] != x {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                // k₂ r k₂ r (x, y) = (t(x,y), k(u(x,y)))
                let (a, b) = sol.apply(x, y);
                let kb = k[b];
                let (t_plain, ku_plain) = if kb == UNSET {
                    (UNSET, UNSET)
                } else {
                    let u = sol.tau(kb, a);
                    (sol.sigma(a, kb), k[u])
                };
                // r k₂ r k₂ (x, y) = (t(x,k(y)), u(x,k(y)))
                let ky = k[y];
                if ky == UNSET {
                    continue;
                }
                let (a2, b2) = sol.apply(x, ky);
                let kb2 = k[b2];
                if kb2 == UNSET {
                    continue;
                }
                let t_moved = sol.sigma(a2, kb2);
                let u_moved = sol.tau(kb2, a2);
                if t_plain != UNSET && t_plain != t_moved {
                    return false;
                }
                if ku_plain != UNSET && ku_plain != u_moved {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&self, k: &mut Vec<usize>, depth: usize, out: &mut Vec<MapOnX>) {
        let n = self.sol.n();
        if depth == n {
            out.push(MapOnX::new(k.clone()).expect("images in range"));
            return;
        }
        for v in 0..n {
            k[depth] = v;
            if self.consistent(k) {
                self.extend(k, depth + 1, out);
            }
        }
        k[depth] = UNSET;
    }
}

/// All reflections of `sol` in lexicographic one-line order.
///
/// Values `k(1), k(2), …` are assigned in turn and a branch is cut as soon as a
/// fully determined instance of the reflection equation fails. The first
/// value is distributed over the rayon pool; output order does not depend on
/// the number of workers.
pub fn enumerate_reflections(sol: &FiniteSolution, filter: ReflectionFilter) -> Vec<MapOnX> {
    let n = sol.n();
    let search = Search {
        sol,
        involutive_only: filter == ReflectionFilter::InvolutiveOnly,
    };
    let mut found: Vec<MapOnX> = (0..n)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut k = vec![UNSET; n];
            k[0] = first;
            let mut out = Vec::new();
            if search.consistent(&k) {
                search.extend(&mut k, 1, &mut out);
            }
            out
        })
        .collect();
    found.sort();
    found
}

/// Commutation relations between `r`, `k₁ = k × id` and `k₂ = id × k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `k₂ r = r k₁`
    K2RisRK1,
    /// `k₁ r = r k₂`
    K1RisRK2,
    /// `k₂ r = r⁻¹ k₁`
    K2RisRinvK1,
    /// `k₁ r⁻¹ = r k₂`
    K1RinvIsRK2,
    /// `k₂ r = r k₂`
    K2RisRK2,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::K2RisRK1,
        Relation::K1RisRK2,
        Relation::K2RisRinvK1,
        Relation::K1RinvIsRK2,
        Relation::K2RisRK2,
    ];
}

/// Pointwise check of one commutation relation on `X × X`.
pub fn check_relation(sol: &FiniteSolution, k: &MapOnX, relation: Relation) -> Result<bool> {
    check_len(sol, k)?;
    let n = sol.n();
    let needs_inverse = matches!(relation, Relation::K2RisRinvK1 | Relation::K1RinvIsRK2);
    if needs_inverse && !sol.flags().bijective {
        return Err(Error::precondition("relation uses r⁻¹ but r is not bijective"));
    }
    let r = |(a, b): (usize, usize)| sol.apply(a, b);
    let rinv = |(a, b): (usize, usize)| sol.apply_inverse(a, b).expect("bijective");
    let k1 = |(a, b): (usize, usize)| (k.get(a), b);
    let k2 = |(a, b): (usize, usize)| (a, k.get(b));
    let holds_at = |p: (usize, usize)| match relation {
        Relation::K2RisRK1 => k2(r(p)) == r(k1(p)),
        Relation::K1RisRK2 => k1(r(p)) == r(k2(p)),
        Relation::K2RisRinvK1 => k2(r(p)) == rinv(k1(p)),
        Relation::K1RinvIsRK2 => k1(rinv(p)) == r(k2(p)),
        Relation::K2RisRK2 => k2(r(p)) == r(k2(p)),
    };
    Ok((0..n).all(|x| (0..n).all(|y| holds_at((x, y)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn maps(list: &[&str]) -> Vec<MapOnX> {
        list.iter().map(|s| MapOnX::parse(s).unwrap()).collect()
    }

    #[test]
    fn t_and_u_by_hand() {
        let sol = presets::example_3_2();
        let k = MapOnX::parse("113").unwrap();
        // t(3,1) = σ_{σ₃(1)}(k(τ₁(3))) = σ₂(k(3)) = 3
        assert_eq!(t_map(&sol, &k, 2, 0), 2);
        // u(3,1) = τ_{k(3)}(σ₃(1)) = τ₃(2) = 1
        assert_eq!(u_map(&sol, &k, 2, 0), 0);
    }

    #[test]
    fn identity_t_recovers_x_on_involutive() {
        let sol = presets::example_4_13();
        let id = MapOnX::identity(4);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(t_map(&sol, &id, x, y), x);
            }
        }
    }

    #[test]
    fn example_3_2_reflections() {
        let sol = presets::example_3_2();
        assert!(is_reflection(&sol, &MapOnX::parse("333").unwrap()).unwrap().is_reflection);
        assert_eq!(
            enumerate_reflections(&sol, ReflectionFilter::All),
            maps(&["113", "123", "213", "223", "333"])
        );
        assert_eq!(
            enumerate_reflections(&sol, ReflectionFilter::InvolutiveOnly),
            maps(&["123", "213"])
        );
        assert!(!is_reflection_via_t(&sol, &MapOnX::parse("331").unwrap()).unwrap());
    }

    #[test]
    fn non_reflection_carries_a_real_witness() {
        let sol = presets::example_4_13();
        let k = MapOnX::parse("1111").unwrap();
        let rep = is_reflection(&sol, &k).unwrap();
        assert!(!rep.is_reflection);
        let (x, y) = rep.witness.unwrap();
        let (lhs, rhs) = reflection_sides(&sol, &k, x, y);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn wrong_length_map_is_an_input_error() {
        let sol = presets::example_3_2();
        assert!(matches!(
            is_reflection(&sol, &MapOnX::parse("1234").unwrap()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn t_test_refuses_non_involutive() {
        // r(x, y) = (σ(y), τ(x)) with σ = τ = (123) is not involutive.
        let c = crate::solution::perm_from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let sol = FiniteSolution::from_permutation_pair(&c, &c).unwrap();
        assert!(!sol.is_involutive());
        assert!(matches!(
            is_reflection_via_t(&sol, &MapOnX::identity(3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn degenerate_solution_uses_raw_equation() {
        // r(x, y) = (x, y) is degenerate.
        let sol = FiniteSolution::new(vec![vec![0, 0], vec![1, 1]], vec![vec![0, 0], vec![1, 1]])
            .unwrap();
        for images in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let k = MapOnX::new(images.to_vec()).unwrap();
            let rep = is_reflection(&sol, &k).unwrap();
            let direct = (0..2).all(|x| {
                (0..2).all(|y| {
                    let (l, r) = reflection_sides(&sol, &k, x, y);
                    l == r
                })
            });
            assert_eq!(rep.is_reflection, direct);
        }
    }

    #[test]
    fn relations_for_identity() {
        let sol = presets::example_4_19();
        let id = MapOnX::identity(4);
        for rel in Relation::ALL {
            assert!(check_relation(&sol, &id, rel).unwrap(), "{rel:?}");
        }
    }

    #[test]
    fn inverse_relations_need_bijective_r() {
        let sol = FiniteSolution::new(vec![vec![0, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]])
            .unwrap();
        let id = MapOnX::identity(2);
        assert!(check_relation(&sol, &id, Relation::K2RisRK1).is_ok());
        assert!(matches!(
            check_relation(&sol, &id, Relation::K2RisRinvK1),
            Err(Error::Precondition(_))
        ));
    }
}
