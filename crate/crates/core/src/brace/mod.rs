//! Finite left (skew) braces stored as Cayley tables.
//!
//! A brace is a set with two group structures `+` and `∘` sharing the neutral
//! element `0` and satisfying `a∘(b+c) = a∘b − a + a∘c`. From the tables we
//! derive `λ_a(b) = −a + a∘b`, `a*b = λ_a(b) − b` and
//! `μ_b(a) = λ_a(b)′ ∘ a ∘ b`, where `x′` is the `∘`-inverse.

mod construct;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use construct::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBrace {
    add: Vec<Vec<usize>>,
    circle: Vec<Vec<usize>>,
    neg: Vec<usize>,
    circle_inv: Vec<usize>,
    abelian_additive: bool,
    two_sided: bool,
}

pub(crate) fn validate_group(table: &[Vec<usize>], name: &str) -> Result<Vec<usize>> {
    let m = table.len();
    for a in 0..m {
        if table[0][a] != a || table[a][0] != a {
            return Err(Error::input(format!("0 is not neutral for {name} at {a}")));
        }
    }
    for a in 0..m {
        for b in 0..m {
            let ab = table[a][b];
            for c in 0..m {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(Error::input(format!(
                        "{name} is not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    (0..m)
        .map(|a| {
            (0..m)
                .find(|&b| table[a][b] == 0 && table[b][a] == 0)
                .ok_or_else(|| Error::input(format!("{a} has no inverse for {name}")))
        })
        .collect()
}

impl FiniteBrace {
    /// Validates `(add, circle)` as a (skew) left brace with neutral element 0.
    pub fn new(add: Vec<Vec<usize>>, circle: Vec<Vec<usize>>) -> Result<Self> {
        Self::check_shapes(&add, &circle)?;
        let circle_inv = validate_group(&circle, "circle")?;
        Self::build(add, circle, circle_inv)
    }

    /// As [`Self::new`], with `∘`-inverses supplied by the caller and checked.
    pub fn with_circle_inverse(
        add: Vec<Vec<usize>>,
        circle: Vec<Vec<usize>>,
        circle_inv: Vec<usize>,
    ) -> Result<Self> {
        Self::check_shapes(&add, &circle)?;
        let computed = validate_group(&circle, "circle")?;
        if computed != circle_inv {
            return Err(Error::input("supplied circle inverses are wrong"));
        }
        Self::build(add, circle, circle_inv)
    }

    fn check_shapes(add: &[Vec<usize>], circle: &[Vec<usize>]) -> Result<()> {
        let m = add.len();
        if m == 0 {
            return Err(Error::input("empty brace"));
        }
        for (name, t) in [("add", add), ("circle", circle)] {
            if t.len() != m || t.iter().any(|row| row.len() != m || row.iter().any(|&v| v >= m)) {
                return Err(Error::input(format!("{name} is not an {m}x{m} table over 0..{m}")));
            }
        }
        Ok(())
    }

    fn build(add: Vec<Vec<usize>>, circle: Vec<Vec<usize>>, circle_inv: Vec<usize>) -> Result<Self> {
        let neg = validate_group(&add, "add")?;
        let m = add.len();
        let abelian_additive = (0..m).all(|a| (0..m).all(|b| add[a][b] == add[b][a]));
        let mut brace = FiniteBrace {
            add,
            circle,
            neg,
            circle_inv,
            abelian_additive,
            two_sided: false,
        };
        if let Some((a, b, c)) = brace.left_law_failure() {
            return Err(Error::input(format!(
                "brace law a∘(b+c) = a∘b − a + a∘c fails at ({a},{b},{c})"
            )));
        }
        brace.two_sided = brace.right_law_failure().is_none();
        Ok(brace)
    }

    fn left_law_failure(&self) -> Option<(usize, usize, usize)> {
        let m = self.order();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let lhs = self.circle(a, self.add(b, c));
                    let rhs = self.add(self.sub(self.circle(a, b), a), self.circle(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    fn right_law_failure(&self) -> Option<(usize, usize, usize)> {
        let m = self.order();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let lhs = self.circle(self.add(b, c), a);
                    let rhs = self.add(self.sub(self.circle(b, a), a), self.circle(c, a));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> usize {
        self.add.len()
    }

    pub fn is_abelian_additive(&self) -> bool {
        self.abelian_additive
    }

    pub fn is_two_sided(&self) -> bool {
        self.two_sided
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// `a − b = a + (−b)`.
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    #[inline]
    pub fn circle(&self, a: usize, b: usize) -> usize {
        self.circle[a][b]
    }

    /// `a′`.
    #[inline]
    pub fn circle_inverse(&self, a: usize) -> usize {
        self.circle_inv[a]
    }

    /// `λ_a(b) = −a + a∘b`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.add[self.neg[a]][self.circle[a][b]]
    }

    /// `a * b = λ_a(b) − b`.
    #[inline]
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.sub(self.lambda(a, b), b)
    }

    /// `μ_b(a) = λ_a(b)′ ∘ a ∘ b`.
    #[inline]
    pub fn mu(&self, b: usize, a: usize) -> usize {
        let l = self.lambda(a, b);
        self.circle[self.circle_inv[l]][self.circle[a][b]]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn circle_table(&self) -> &[Vec<usize>] {
        &self.circle
    }

    /// `{a : λ_a = id}`, tagged by [`BraceSubset::new`].
    pub fn socle(&self) -> BraceSubset<'_> {
        let m = self.order();
        let members = (0..m).filter(|&a| (0..m).all(|b| self.lambda(a, b) == b)).collect();
        BraceSubset::new(self, members)
    }

    /// Smallest additive subgroup containing `gens`.
    pub fn additive_span(&self, gens: &[usize]) -> Vec<usize> {
        let m = self.order();
        let mut member = vec![false; m];
        member[0] = true;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let s = self.add(x, g);
                if !member[s] {
                    member[s] = true;
                    frontier.push(s);
                }
            }
        }
        (0..m).filter(|&i| member[i]).collect()
    }

    pub fn to_file(&self) -> BraceFile {
        BraceFile {
            m: self.order(),
            add: self.add.clone(),
            circle: self.circle.clone(),
        }
    }
}

/// Brace file: `{"m": .., "add": [[..]], "circle": [[..]]}`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceFile {
    pub m: usize,
    pub add: Vec<Vec<usize>>,
    pub circle: Vec<Vec<usize>>,
}

pub fn read_brace(path: impl AsRef<Path>) -> Result<FiniteBrace> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: BraceFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("brace file line {}: {e}", e.line())))?;
    if file.add.len() != file.m {
        return Err(Error::input("brace file: \"add\" does not have m rows"));
    }
    FiniteBrace::new(file.add, file.circle)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetRole {
    Ideal,
    LeftIdeal,
    Plain,
}

/// A subset of a brace together with the strongest role it satisfies.
#[derive(Clone, Debug)]
pub struct BraceSubset<'a> {
    parent: &'a FiniteBrace,
    members: Vec<usize>,
    role: SubsetRole,
}

impl<'a> BraceSubset<'a> {
    pub fn new(parent: &'a FiniteBrace, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut subset = BraceSubset {
            parent,
            members,
            role: SubsetRole::Plain,
        };
        subset.role = if subset.check_left_ideal() {
            if subset.check_normal() {
                SubsetRole::Ideal
            } else {
                SubsetRole::LeftIdeal
            }
        } else {
            SubsetRole::Plain
        };
        subset
    }

    pub fn whole(parent: &'a FiniteBrace) -> Self {
        Self::new(parent, (0..parent.order()).collect())
    }

    pub fn parent(&self) -> &'a FiniteBrace {
        self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn role(&self) -> SubsetRole {
        self.role
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_left_ideal(&self) -> bool {
        self.role != SubsetRole::Plain
    }

    pub fn is_ideal(&self) -> bool {
        self.role == SubsetRole::Ideal
    }

    /// Additive subgroup with `A * X ⊆ X`.
    fn check_left_ideal(&self) -> bool {
        let a = self.parent;
        if !self.contains(0) {
            return false;
        }
        let closed = self.members.iter().all(|&x| {
            self.contains(a.neg(x)) && self.members.iter().all(|&y| self.contains(a.add(x, y)))
        });
        closed && (0..a.order()).all(|g| self.members.iter().all(|&x| self.contains(a.star(g, x))))
    }

    /// `g + I = I + g` and `g ∘ I = I ∘ g` for every `g`.
    fn check_normal(&self) -> bool {
        let a = self.parent;
        let sorted = |f: &dyn Fn(usize) -> usize| {
            let mut v: Vec<usize> = self.members.iter().map(|&x| f(x)).collect();
            v.sort_unstable();
            v
        };
        (0..a.order()).all(|g| {
            sorted(&|x| a.add(g, x)) == sorted(&|x| a.add(x, g))
                && sorted(&|x| a.circle(g, x)) == sorted(&|x| a.circle(x, g))
        })
    }

    /// `x − y ∈ X`, i.e. `x` and `y` lie in the same additive coset.
    pub fn same_coset(&self, x: usize, y: usize) -> bool {
        self.contains(self.parent.sub(x, y))
    }
}

/// Exhaustive identity checks; each returns the first failing triple.
pub mod laws {
    use super::FiniteBrace;

    type Witness = Option<(usize, usize, usize)>;

    fn first(m: usize, pred: impl Fn(usize, usize, usize) -> bool) -> Witness {
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if !pred(a, b, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `λ_{a∘b} = λ_a λ_b` and `λ_a(b + c) = λ_a(b) + λ_a(c)`.
    pub fn lambda_is_action(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, c| {
            br.lambda(br.circle(a, b), c) == br.lambda(a, br.lambda(b, c))
                && br.lambda(a, br.add(b, c)) == br.add(br.lambda(a, b), br.lambda(a, c))
        })
    }

    /// `(a∘b) * c = (a∘b∘a′) * λ_a(c) + a * c`.
    pub fn circle_star_expansion(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, c| {
            let ab = br.circle(a, b);
            let conj = br.circle(ab, br.circle_inverse(a));
            br.star(ab, c) == br.add(br.star(conj, br.lambda(a, c)), br.star(a, c))
        })
    }

    /// `(a + b) * c = a*c + b*c`.
    pub fn star_right_distributive(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, c| {
            br.star(br.add(a, b), c) == br.add(br.star(a, c), br.star(b, c))
        })
    }

    /// `(−a) * b = −(a * b)`.
    pub fn star_negation(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, _| br.star(br.neg(a), b) == br.neg(br.star(a, b)))
    }

    /// `λ_a(b * c) = λ_a(b) * c`.
    pub fn lambda_star_compatible(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, c| {
            br.lambda(a, br.star(b, c)) == br.star(br.lambda(a, b), c)
        })
    }

    /// `μ_b(a) = λ_a(b)′ * a + a` (the second form of `μ`, valid when the
    /// solution is involutive).
    pub fn mu_star_form(br: &FiniteBrace) -> Witness {
        first(br.order(), |a, b, _| {
            let l = br.circle_inverse(br.lambda(a, b));
            br.mu(b, a) == br.add(br.star(l, a), a)
        })
    }
}
