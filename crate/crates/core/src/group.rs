//! The permutation group `G(X, r)` generated by the rows `σ_x`, and maps
//! `k: X → X` commuting with it.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::solution::{is_permutation, FiniteSolution, MapOnX};

pub type Perm = Vec<usize>;

/// `(p ∘ q)(x) = p(q(x))`.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &v)| i == v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    /// Sorted, so the identity comes first.
    elements: Vec<Perm>,
    generators: Vec<Perm>,
}

impl PermGroup {
    /// Closure of `generators` under composition (breadth first).
    pub fn generated_by(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::precondition(format!(
                    "generator {} is not a permutation of 1..{degree}",
                    MapOnX::new(g.clone()).map(|m| m.to_string()).unwrap_or_else(|_| format!("{g:?}"))
                )));
            }
        }
        let mut gens: Vec<Perm> = generators;
        gens.sort();
        gens.dedup();

        let identity: Perm = (0..degree).collect();
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next = compose(g, &e);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(PermGroup {
            degree,
            elements: seen.into_iter().collect(),
            generators: gens,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(p)).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| compose(a, b) == compose(b, a)))
    }

    /// Least `m ≥ 1` with `p^m = id`.
    pub fn element_order(p: &[usize]) -> usize {
        let mut power = p.to_vec();
        let mut m = 1;
        while !is_identity(&power) {
            power = compose(p, &power);
            m += 1;
        }
        m
    }

    /// Pairs `(t, s)` with `t` of order 4, `s` of order 2 and `s t s = t⁻¹`,
    /// when the group has order 8, is non-abelian, and such a pair exists.
    pub fn dihedral_witness(&self) -> Option<(Perm, Perm)> {
        if self.order() != 8 || self.is_abelian() {
            return None;
        }
        for t in self.elements.iter().filter(|t| Self::element_order(t) == 4) {
            let t_inv = inverse(t);
            for s in self.elements.iter().filter(|s| Self::element_order(s) == 2) {
                if compose(s, &compose(t, s)) == t_inv {
                    return Some((t.clone(), s.clone()));
                }
            }
        }
        None
    }

    /// Every pairwise product lies in the group.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&compose(a, b))))
    }

    /// Orbits of the natural action on `0..degree`, each sorted, ordered by
    /// least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if assigned[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|g| g[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                assigned[y] = true;
            }
            out.push(orbit);
        }
        out
    }
}

/// `G(X, r)`: closure of the rows `σ_x`.
pub fn generate_group(sol: &FiniteSolution) -> Result<PermGroup> {
    let rows: Vec<Perm> = (0..sol.n()).map(|x| sol.sigma_row(x).to_vec()).collect();
    PermGroup::generated_by(sol.n(), rows)
}

/// `k σ_x = σ_x k` for every `x`, which is enough for the whole group.
pub fn is_equivariant(sol: &FiniteSolution, k: &MapOnX) -> bool {
    let n = sol.n();
    k.n() == n
        && (0..n).all(|x| (0..n).all(|y| k.get(sol.sigma(x, y)) == sol.sigma(x, k.get(y))))
}

/// All maps commuting with `G(X, r)`, sorted in one-line order.
///
/// A map is fixed by choosing, for each orbit representative `x₀`, an image
/// `y` fixed by the stabilizer of `x₀`; it then extends uniquely by
/// `k(g x₀) = g y`.
pub fn equivariant_maps(sol: &FiniteSolution) -> Result<Vec<MapOnX>> {
    let group = generate_group(sol)?;
    let n = sol.n();
    let orbits = group.orbits();

    // For each orbit: the admissible images of its representative, and for
    // every orbit element one group element carrying the representative there.
    let mut choices: Vec<Vec<usize>> = Vec::new();
    let mut transversals: Vec<Vec<(usize, &Perm)>> = Vec::new();
    for orbit in &orbits {
        let rep = orbit[0];
        let stabilizer: Vec<&Perm> = group.elements().iter().filter(|g| g[rep] == rep).collect();
        choices.push(
            (0..n)
                .filter(|&y| stabilizer.iter().all(|g| g[y] == y))
                .collect(),
        );
        let mut transversal = Vec::new();
        for &target in orbit {
            let g = group
                .elements()
                .iter()
                .find(|g| g[rep] == target)
                .expect("target lies in the orbit");
            transversal.push((target, g));
        }
        transversals.push(transversal);
    }

    let mut out = Vec::new();
    let mut pick = vec![0usize; orbits.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut images = vec![0usize; n];
        for (i, transversal) in transversals.iter().enumerate() {
            let y = choices[i][pick[i]];
            for &(target, g) in transversal {
                images[target] = g[y];
            }
        }
        let k = MapOnX::new(images).expect("images in range");
        debug_assert!(is_equivariant(sol, &k));
        out.push(k);

        let mut i = 0;
        loop {
            if i == pick.len() {
                out.sort();
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}
