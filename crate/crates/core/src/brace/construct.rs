use serde::Serialize;

use super::{BraceSubset, FiniteBrace};
use crate::error::{Error, Result};
use crate::group::is_equivariant;
use crate::reflection::{check_relation, is_reflection, Relation};
use crate::solution::{FiniteSolution, MapOnX};

/// The solution `r_A(a, b) = (λ_a(b), μ_b(a))` of a brace, restricted to a
/// subset `X`. Position `i` of the solution is brace element `elements[i]`.
#[derive(Clone, Debug)]
pub struct BraceSolution<'a> {
    brace: &'a FiniteBrace,
    elements: Vec<usize>,
    position: Vec<Option<usize>>,
    solution: FiniteSolution,
}

/// `r_A` on all of `A`.
pub fn solution_from_brace(brace: &FiniteBrace) -> BraceSolution<'_> {
    restrict_solution(brace, &(0..brace.order()).collect::<Vec<_>>())
        .expect("the whole brace is closed under r_A")
}

/// `r_A` restricted to `members`, which must be closed under both coordinates.
pub fn restrict_solution<'a>(brace: &'a FiniteBrace, members: &[usize]) -> Result<BraceSolution<'a>> {
    let mut elements = members.to_vec();
    elements.sort_unstable();
    elements.dedup();
    if elements.is_empty() {
        return Err(Error::input("cannot restrict to an empty subset"));
    }
    if let Some(&bad) = elements.iter().find(|&&a| a >= brace.order()) {
        return Err(Error::input(format!("{bad} is not an element of the brace")));
    }
    let mut position = vec![None; brace.order()];
    for (i, &a) in elements.iter().enumerate() {
        position[a] = Some(i);
    }
    let n = elements.len();
    let mut sigma = vec![vec![0; n]; n];
    let mut tau = vec![vec![0; n]; n];
    for (i, &x) in elements.iter().enumerate() {
        for (j, &y) in elements.iter().enumerate() {
            let l = brace.lambda(x, y);
            let m = brace.mu(y, x);
            match (position[l], position[m]) {
                (Some(pl), Some(pm)) => {
                    sigma[i][j] = pl;
                    tau[j][i] = pm;
                }
                _ => {
                    return Err(Error::input(format!(
                        "subset is not closed under r_A: r({x},{y}) = ({l},{m})"
                    )))
                }
            }
        }
    }
    Ok(BraceSolution {
        brace,
        elements,
        position,
        solution: FiniteSolution::new(sigma, tau)?,
    })
}

/// Restriction to a left ideal; always closed.
pub fn restrict_to_left_ideal<'a>(subset: &BraceSubset<'a>) -> Result<BraceSolution<'a>> {
    if !subset.is_left_ideal() {
        return Err(Error::precondition("subset is not a left ideal"));
    }
    restrict_solution(subset.parent(), subset.members())
}

impl<'a> BraceSolution<'a> {
    pub fn brace(&self) -> &'a FiniteBrace {
        self.brace
    }

    pub fn solution(&self) -> &FiniteSolution {
        &self.solution
    }

    /// Brace elements in position order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn element(&self, pos: usize) -> usize {
        self.elements[pos]
    }

    pub fn position(&self, a: usize) -> Option<usize> {
        self.position.get(a).copied().flatten()
    }

    pub fn is_whole_brace(&self) -> bool {
        self.elements.len() == self.brace.order()
    }

    /// Pulls a function on brace elements back to a map on positions.
    pub fn map_from_fn(&self, f: impl Fn(usize) -> usize) -> Result<MapOnX> {
        let images = self
            .elements
            .iter()
            .map(|&a| {
                let fa = f(a);
                self.position(fa)
                    .ok_or_else(|| Error::input(format!("image {fa} of {a} lies outside X")))
            })
            .collect::<Result<Vec<_>>>()?;
        MapOnX::new(images)
    }

    /// The brace element `k(a)` for a map on positions.
    pub fn apply_map(&self, k: &MapOnX, a: usize) -> usize {
        self.elements[k.get(self.position(a).expect("element of X"))]
    }
}

/// The operation `⊙` used to assemble `k(x) = f(x) ⊙ g(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionRule {
    /// `x ⊙ y = x * y`
    Star,
    /// `x ⊙ y = x + x * y`
    PlusStar,
}

impl CompositionRule {
    pub fn apply(self, brace: &FiniteBrace, x: usize, y: usize) -> usize {
        match self {
            CompositionRule::Star => brace.star(x, y),
            CompositionRule::PlusStar => brace.add(x, brace.star(x, y)),
        }
    }

    /// First `(x, y, z)` in `X³` where `λ_x(y ⊙ g(z)) ≠ λ_x(y) ⊙ g(z)`.
    pub fn distributivity_failure(
        self,
        sol: &BraceSolution<'_>,
        g: &dyn Fn(usize) -> usize,
    ) -> Option<(usize, usize, usize)> {
        let br = sol.brace;
        for &x in sol.elements() {
            for &y in sol.elements() {
                for &z in sol.elements() {
                    let gz = g(z);
                    if br.lambda(x, self.apply(br, y, gz)) != self.apply(br, br.lambda(x, y), gz) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

fn require_two_sided(brace: &FiniteBrace) -> Result<()> {
    if brace.is_two_sided() {
        Ok(())
    } else {
        Err(Error::precondition("the brace is not two-sided"))
    }
}

fn verified(sol: &BraceSolution<'_>, k: MapOnX, label: &str) -> Result<MapOnX> {
    let report = is_reflection(sol.solution(), &k)?;
    match report.witness {
        None => Ok(k),
        Some((x, y)) => Err(Error::hypothesis(
            format!("{label} is a reflection"),
            format!("k = {k} fails at ({}, {})", sol.element(x), sol.element(y)),
        )),
    }
}

/// `k(x) = x * a` on a two-sided brace `A` (with `X = A`).
pub fn reflection_star_constant(sol: &BraceSolution<'_>, a: usize) -> Result<MapOnX> {
    let br = sol.brace;
    require_two_sided(br)?;
    if !sol.is_whole_brace() {
        return Err(Error::precondition("x * a is only defined as a reflection of (A, r_A)"));
    }
    if a >= br.order() {
        return Err(Error::input(format!("{a} is not a brace element")));
    }
    let k = sol.map_from_fn(|x| br.star(x, a))?;
    verified(sol, k, "x * a")
}

/// Which hypothesis justifies `k(x) = x + x * g(x)`.
#[derive(Clone, Copy, Debug)]
pub enum PlusStarHypothesis<'s, 'a> {
    /// `X` closed under `r_A` and under `k`, `g: X → X` with
    /// `g(μ_{k(y)}(x)) = g(μ_y(x))`; when that fails, the weaker
    /// `x ⊙ g(μ_{k(y)}(x)) = x ⊙ g(μ_y(x))` together with `⊙`-distributivity
    /// is accepted.
    Invariant,
    /// `X = A`, `I` an ideal, `g(A) ⊆ I` and `g` constant on cosets of `I`.
    IdealCosets(&'s BraceSubset<'a>),
}

/// `k(x) = x + x * g(x)`, returned only once its hypotheses and the
/// reflection equation have been verified.
pub fn reflection_plus_star(
    sol: &BraceSolution<'_>,
    g: &dyn Fn(usize) -> usize,
    hypothesis: PlusStarHypothesis<'_, '_>,
) -> Result<MapOnX> {
    let br = sol.brace;
    require_two_sided(br)?;
    let rule = CompositionRule::PlusStar;
    let k = sol
        .map_from_fn(|x| rule.apply(br, x, g(x)))
        .map_err(|e| Error::hypothesis("x + x*g(x) stays in X", e.to_string()))?;

    match hypothesis {
        PlusStarHypothesis::Invariant => {
            if let Some(&x) = sol.elements().iter().find(|&&x| sol.position(g(x)).is_none()) {
                return Err(Error::hypothesis("g maps X into X", format!("g({x}) = {}", g(x))));
            }
            let strict = invariance_failure(sol, &k, &|_, w| g(w));
            if let Some((x, y)) = strict {
                let weak = invariance_failure(sol, &k, &|x, w| rule.apply(br, x, g(w)));
                if let Some((x2, y2)) = weak {
                    return Err(Error::hypothesis(
                        "g(μ_{k(y)}(x)) = g(μ_y(x))",
                        format!("fails at ({x},{y}); x ⊙ g form fails at ({x2},{y2})"),
                    ));
                }
                if let Some(w) = rule.distributivity_failure(sol, g) {
                    return Err(Error::hypothesis(
                        "λ_x(y ⊙ g(z)) = λ_x(y) ⊙ g(z)",
                        format!("fails at {w:?}"),
                    ));
                }
            }
        }
        PlusStarHypothesis::IdealCosets(ideal) => {
            if !std::ptr::eq(ideal.parent(), br) {
                return Err(Error::input("ideal belongs to a different brace"));
            }
            if !ideal.is_ideal() {
                return Err(Error::hypothesis("X is an ideal", "subset is not an ideal"));
            }
            if !sol.is_whole_brace() {
                return Err(Error::precondition("the coset form is a reflection of (A, r_A)"));
            }
            for a in 0..br.order() {
                if !ideal.contains(g(a)) {
                    return Err(Error::hypothesis("g(A) ⊆ X", format!("g({a}) = {}", g(a))));
                }
                for &x in ideal.members() {
                    let ax = br.add(a, x);
                    if g(ax) != g(a) {
                        return Err(Error::hypothesis(
                            "g(a + x) = g(a)",
                            format!("a = {a}, x = {x}: g(a+x) = {}, g(a) = {}", g(ax), g(a)),
                        ));
                    }
                }
            }
        }
    }
    verified(sol, k, "x + x*g(x)")
}

/// First `(x, y)` with `h(x, μ_{k(y)}(x)) ≠ h(x, μ_y(x))`, in brace elements.
fn invariance_failure(
    sol: &BraceSolution<'_>,
    k: &MapOnX,
    h: &dyn Fn(usize, usize) -> usize,
) -> Option<(usize, usize)> {
    let br = sol.brace;
    for &x in sol.elements() {
        for &y in sol.elements() {
            let ky = sol.apply_map(k, y);
            if h(x, br.mu(ky, x)) != h(x, br.mu(y, x)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Result of evaluating a reflection criterion for an assembled map `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub k: MapOnX,
    /// The criterion's condition on `μ`.
    pub condition: bool,
    /// Direct evaluation of the reflection equation.
    pub is_reflection: bool,
}

impl CriterionOutcome {
    /// The criterion is an equivalence, so the two flags must agree.
    pub fn consistent(&self) -> bool {
        self.condition == self.is_reflection
    }
}

fn check_terms_hypotheses(
    sol: &BraceSolution<'_>,
    codomain: &[usize],
    rule: CompositionRule,
    f: &dyn Fn(usize) -> usize,
    g: &dyn Fn(usize) -> usize,
) -> Result<()> {
    let f_map = sol
        .map_from_fn(f)
        .map_err(|e| Error::hypothesis("f maps X into X", e.to_string()))?;
    if !is_equivariant(sol.solution(), &f_map) {
        return Err(Error::hypothesis("f is G(X,r)-equivariant", format!("f = {f_map}")));
    }
    for &x in sol.elements() {
        if !codomain.contains(&g(x)) {
            return Err(Error::hypothesis("g maps X into Y", format!("g({x}) = {}", g(x))));
        }
    }
    let br = sol.brace;
    for &y in sol.elements() {
        for &z in sol.elements() {
            let p = rule.apply(br, y, g(z));
            if sol.position(p).is_none() {
                return Err(Error::hypothesis(
                    "⊙ maps X × Y into X",
                    format!("{y} ⊙ g({z}) = {p}"),
                ));
            }
        }
    }
    if let Some(w) = rule.distributivity_failure(sol, g) {
        return Err(Error::hypothesis(
            "λ_x(y ⊙ g(z)) = λ_x(y) ⊙ g(z)",
            format!("fails at {w:?}"),
        ));
    }
    Ok(())
}

/// `k(x) = f(x) ⊙ g(x)` with `f` equivariant: evaluates
/// `f(x) ⊙ g(μ_{k(y)}(x)) = f(x) ⊙ g(μ_y(x))` and the reflection equation.
pub fn check_general(
    sol: &BraceSolution<'_>,
    codomain: &[usize],
    rule: CompositionRule,
    f: &dyn Fn(usize) -> usize,
    g: &dyn Fn(usize) -> usize,
) -> Result<CriterionOutcome> {
    check_terms_hypotheses(sol, codomain, rule, f, g)?;
    let br = sol.brace;
    let k = sol.map_from_fn(|x| rule.apply(br, f(x), g(x)))?;
    let condition = invariance_failure(sol, &k, &|x, w| rule.apply(br, f(x), g(w))).is_none();
    let is_reflection = is_reflection(sol.solution(), &k)?.is_reflection;
    Ok(CriterionOutcome {
        k,
        condition,
        is_reflection,
    })
}

/// One `(fᵢ, gᵢ)` pair of a sum of terms.
pub type Term<'f> = (&'f dyn Fn(usize) -> usize, &'f dyn Fn(usize) -> usize);

/// `k(x) = x + Σᵢ fᵢ(x) ⊙ gᵢ(x)` on a two-sided brace, with every `fᵢ`
/// equivariant: evaluates `Σᵢ fᵢ(x) ⊙ gᵢ(μ_{k(y)}(x)) = Σᵢ fᵢ(x) ⊙ gᵢ(μ_y(x))`.
pub fn check_aggi(
    sol: &BraceSolution<'_>,
    rule: CompositionRule,
    terms: &[Term<'_>],
) -> Result<CriterionOutcome> {
    let br = sol.brace;
    require_two_sided(br)?;
    let all: Vec<usize> = (0..br.order()).collect();
    for &(f, g) in terms {
        check_terms_hypotheses(sol, &all, rule, f, g)?;
    }
    let sum_at = |x: usize, arg: &dyn Fn(usize) -> usize| {
        terms
            .iter()
            .fold(0, |acc, &(f, g)| br.add(acc, rule.apply(br, f(x), g(arg(x)))))
    };
    let k = sol
        .map_from_fn(|x| br.add(x, sum_at(x, &|x| x)))
        .map_err(|e| Error::hypothesis("k maps X into X", e.to_string()))?;
    let condition = sol.elements().iter().all(|&x| {
        sol.elements().iter().all(|&y| {
            let ky = sol.apply_map(&k, y);
            sum_at(x, &|x| br.mu(ky, x)) == sum_at(x, &|x| br.mu(y, x))
        })
    });
    let is_reflection = is_reflection(sol.solution(), &k)?.is_reflection;
    Ok(CriterionOutcome {
        k,
        condition,
        is_reflection,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SocleCriterion {
    /// `k₂ r = r k₁`
    pub c1: bool,
    /// `k₁ r = r k₂`
    pub c2: bool,
    /// `k(x) − x ∈ Soc(A)` for all `x ∈ X`, and `k` equivariant.
    pub c3: bool,
    /// Whether `X` generates `(A, +)`; only then are the three equivalent.
    pub generates: bool,
}

impl SocleCriterion {
    pub fn equivalence_holds(&self) -> bool {
        !self.generates || (self.c1 == self.c2 && self.c2 == self.c3)
    }
}

pub fn check_socle_criterion(sol: &BraceSolution<'_>, k: &MapOnX) -> Result<SocleCriterion> {
    let br = sol.brace;
    let s = sol.solution();
    let c1 = check_relation(s, k, Relation::K2RisRK1)?;
    let c2 = check_relation(s, k, Relation::K1RisRK2)?;
    let soc = br.socle();
    let c3 = sol
        .elements()
        .iter()
        .all(|&x| soc.contains(br.sub(sol.apply_map(k, x), x)))
        && is_equivariant(s, k);
    let generates = br.additive_span(sol.elements()).len() == br.order();
    Ok(SocleCriterion {
        c1,
        c2,
        c3,
        generates,
    })
}

/// Searches for `g: X → candidates` with `k(x) = x * g(x) + x` and
/// `g(τ_y(x)) = g(τ_{k(y)}(x))` for all `x, y`. Returns `g` in position order.
pub fn find_plus_star_factor(
    sol: &BraceSolution<'_>,
    k: &MapOnX,
    candidates: &[usize],
) -> Option<Vec<usize>> {
    let br = sol.brace;
    let s = sol.solution();
    let n = s.n();
    let options: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            let x = sol.element(p);
            let target = sol.element(k.get(p));
            candidates
                .iter()
                .copied()
                .filter(|&c| br.add(br.star(x, c), x) == target)
                .collect()
        })
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return None;
    }
    // pairs of positions that must share a g value
    let mut linked: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            linked.push((s.tau(y, x), s.tau(k.get(y), x)));
        }
    }
    fn search(
        depth: usize,
        g: &mut Vec<Option<usize>>,
        options: &[Vec<usize>],
        linked: &[(usize, usize)],
    ) -> bool {
        if depth == g.len() {
            return true;
        }
        for &c in &options[depth] {
            g[depth] = Some(c);
            let ok = linked.iter().all(|&(a, b)| match (g[a], g[b]) {
                (Some(ga), Some(gb)) => ga == gb,
                _ => true,
            });
            if ok && search(depth + 1, g, options, linked) {
                return true;
            }
        }
        g[depth] = None;
        false
    }
    let mut g = vec![None; n];
    search(0, &mut g, &options, &linked).then(|| g.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::NilpotentRing;

    fn z2b4() -> (NilpotentRing, FiniteBrace) {
        let ring = NilpotentRing::truncated_poly(2, 4).unwrap();
        let br = ring.to_brace().unwrap();
        (ring, br)
    }

    #[test]
    fn trivial_brace_gives_flip() {
        let add: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        let br = FiniteBrace::new(add.clone(), add).unwrap();
        let sol = solution_from_brace(&br);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(sol.solution().apply(x, y), (y, x));
            }
        }
    }

    #[test]
    fn restriction_must_be_closed() {
        let (ring, br) = z2b4();
        let b = ring.find("b").unwrap();
        let b2 = ring.find("b^2").unwrap();
        // {0, b}: λ_b(b) = b² + b leaves the set
        assert!(restrict_solution(&br, &[0, b]).is_err());
        assert!(restrict_solution(&br, &[0, b2]).is_ok());
    }

    #[test]
    fn star_constant_zero_is_constant_map() {
        let (_, br) = z2b4();
        let sol = solution_from_brace(&br);
        let k = reflection_star_constant(&sol, 0).unwrap();
        assert_eq!(k, MapOnX::constant(8, 0));
    }

    #[test]
    fn star_constant_needs_whole_brace() {
        let (ring, br) = z2b4();
        let x = ring.subset_b_plus_b_a().unwrap();
        let sol = restrict_solution(&br, &x).unwrap();
        assert!(matches!(
            reflection_star_constant(&sol, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn plus_star_with_zero_g_is_identity() {
        let (_, br) = z2b4();
        let sol = solution_from_brace(&br);
        let k = reflection_plus_star(&sol, &|_| 0, PlusStarHypothesis::Invariant).unwrap();
        assert!(k.is_identity());
    }

    #[test]
    fn coset_hypothesis_is_enforced() {
        let (ring, br) = z2b4();
        let sol = solution_from_brace(&br);
        let ideal: Vec<usize> = ["0", "b^2", "b^3", "b^2+b^3"]
            .iter()
            .map(|n| ring.find(n).unwrap())
            .collect();
        let ideal = BraceSubset::new(&br, ideal);
        let b2 = ring.find("b^2").unwrap();
        // g(a) = a * b lands in the ideal but is not coset-constant:
        // g(b) = b², g(b + b²) = b² + b³.
        let g = |a: usize| ring.mul(a, 1);
        let err = reflection_plus_star(&sol, &g, PlusStarHypothesis::IdealCosets(&ideal))
            .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { .. }), "{err}");
        // g = b² on non-ideal elements: image b² ∈ ideal but cosets must hold.
        let g = |a: usize| if ideal.contains(a) { 0 } else { b2 };
        assert!(reflection_plus_star(&sol, &g, PlusStarHypothesis::IdealCosets(&ideal)).is_ok());
    }

    #[test]
    fn non_equivariant_f_is_rejected() {
        let (ring, br) = z2b4();
        let sol = solution_from_brace(&br);
        let b = ring.find("b").unwrap();
        // the constant map to b does not commute with λ_b
        let err = check_general(&sol, &(0..8).collect::<Vec<_>>(), CompositionRule::Star, &|_| b, &|_| 0)
            .unwrap_err();
        assert!(matches!(err, Error::Hypothesis { .. }));
    }
}
