//! Exact factorizations `G = A + B`, the skew brace `x ∘ y = a + y + b`
//! (where `x = a + b`), and reflections `k(x) = x + z` for central `z`.
//!
//! The group operation of `G` is written additively throughout; it need not
//! be commutative.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::brace::{solution_from_brace, validate_group, FiniteBrace};
use crate::error::{Error, Result};
use crate::reflection::is_reflection;
use crate::solution::MapOnX;

#[derive(Clone, Debug)]
pub struct FactorizedGroup {
    op: Vec<Vec<usize>>,
    neg: Vec<usize>,
    a: Vec<usize>,
    b: Vec<usize>,
    /// `decomp[x] = (a, b)` with `x = a + b`.
    decomp: Vec<(usize, usize)>,
}

fn is_subgroup(op: &[Vec<usize>], neg: &[usize], s: &[usize]) -> bool {
    s.contains(&0) && s.iter().all(|&x| s.contains(&neg[x]) && s.iter().all(|&y| s.contains(&op[x][y])))
}

/// Validates `G` and checks that every element is `a + b` in exactly one way.
pub fn make_factorized(op: Vec<Vec<usize>>, a: Vec<usize>, b: Vec<usize>) -> Result<FactorizedGroup> {
    let m = op.len();
    if m == 0 || op.iter().any(|row| row.len() != m || row.iter().any(|&v| v >= m)) {
        return Err(Error::input(format!("op is not an {m}x{m} table over 0..{m}")));
    }
    let neg = validate_group(&op, "op")?;
    let mut a = a;
    let mut b = b;
    for s in [&mut a, &mut b] {
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&x| x >= m) {
            return Err(Error::input(format!("{bad} is not a group element")));
        }
    }
    for (name, s) in [("A", &a), ("B", &b)] {
        if !is_subgroup(&op, &neg, s) {
            return Err(Error::input(format!("{name} is not a subgroup")));
        }
    }
    if a.len() * b.len() != m {
        return Err(Error::input(format!(
            "|A|·|B| = {}·{} differs from |G| = {m}",
            a.len(),
            b.len()
        )));
    }
    let mut found: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for &x in &a {
        for &y in &b {
            found[op[x][y]].push((x, y));
        }
    }
    let mut decomp = Vec::with_capacity(m);
    for (x, ways) in found.iter().enumerate() {
        if ways.len() != 1 {
            return Err(Error::input(format!(
                "element {x} has {} decompositions a + b",
                ways.len()
            )));
        }
        decomp.push(ways[0]);
    }
    Ok(FactorizedGroup { op, neg, a, b, decomp })
}

impl FactorizedGroup {
    pub fn order(&self) -> usize {
        self.op.len()
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn decompose(&self, x: usize) -> (usize, usize) {
        self.decomp[x]
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|x| (0..m).all(|y| self.op[x][y] == self.op[y][x]))
    }

    /// First element not commuting with `x`.
    pub fn centrality_witness(&self, x: usize) -> Option<usize> {
        (0..self.order()).find(|&g| self.op[x][g] != self.op[g][x])
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            m: self.order(),
            op: self.op.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

/// `x ∘ y = a + y + b` where `x = a + b`.
pub fn skew_brace_from_factorization(f: &FactorizedGroup) -> FiniteBrace {
    let m = f.order();
    let circle = (0..m)
        .map(|x| {
            let (a, b) = f.decompose(x);
            (0..m).map(|y| f.op(f.op(a, y), b)).collect()
        })
        .collect();
    FiniteBrace::new(f.op.clone(), circle).expect("an exact factorization yields a skew brace")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CentralPair {
    pub c: usize,
    pub d: usize,
    pub z: usize,
}

impl CentralPair {
    /// Requires `c ∈ A`, `d ∈ B`, and `c`, `d`, `z = c + d` central.
    pub fn new(f: &FactorizedGroup, c: usize, d: usize) -> Result<Self> {
        if !f.a.contains(&c) {
            return Err(Error::input(format!("c = {c} is not in A")));
        }
        if !f.b.contains(&d) {
            return Err(Error::input(format!("d = {d} is not in B")));
        }
        let z = f.op(c, d);
        for (name, x) in [("c", c), ("d", d), ("z = c + d", z)] {
            if let Some(g) = f.centrality_witness(x) {
                return Err(Error::hypothesis(
                    format!("{name} is central"),
                    format!("{x} + {g} ≠ {g} + {x}"),
                ));
            }
        }
        Ok(CentralPair { c, d, z })
    }
}

/// First failure among `λ_{x+z}(y) = λ_x(y)`, `λ_x(y+z) = λ_x(y) + z`,
/// `x ∘ (y+z) = (x∘y) + z`, `(x+z) ∘ y = (x∘y) + z`, as `(index, x, y)`.
pub fn commuting_lemma_failure(br: &FiniteBrace, z: usize) -> Option<(usize, usize, usize)> {
    let m = br.order();
    for x in 0..m {
        for y in 0..m {
            let checks = [
                br.lambda(br.add(x, z), y) == br.lambda(x, y),
                br.lambda(x, br.add(y, z)) == br.add(br.lambda(x, y), z),
                br.circle(x, br.add(y, z)) == br.add(br.circle(x, y), z),
                br.circle(br.add(x, z), y) == br.add(br.circle(x, y), z),
            ];
            if let Some(i) = checks.iter().position(|ok| !ok) {
                return Some((i, x, y));
            }
        }
    }
    None
}

/// `k(x) = x + z`, checked against the lemma identities and the reflection
/// equation of the skew brace solution.
pub fn central_reflection(f: &FactorizedGroup, pair: &CentralPair) -> Result<MapOnX> {
    let br = skew_brace_from_factorization(f);
    if let Some((i, x, y)) = commuting_lemma_failure(&br, pair.z) {
        return Err(Error::hypothesis(
            "commuting-element identities for z",
            format!("identity {} fails at x = {x}, y = {y}", i + 1),
        ));
    }
    let sol = solution_from_brace(&br);
    let k = sol.map_from_fn(|x| f.op(x, pair.z))?;
    let report = is_reflection(sol.solution(), &k)?;
    match report.witness {
        None => Ok(k),
        Some((x, y)) => Err(Error::hypothesis(
            "x + z is a reflection",
            format!("fails at ({x}, {y})"),
        )),
    }
}

/// `ρ^i s^j` has index `i + 4j`; `s ρ s = ρ⁻¹`.
pub fn dihedral_d4() -> FactorizedGroup {
    let op = (0..8)
        .map(|x| {
            let (i, j) = (x % 4, x / 4);
            (0..8)
                .map(|y| {
                    let (k, l) = (y % 4, y / 4);
                    let rot = (if j == 0 { i + k } else { i + 4 - k }) % 4;
                    rot + 4 * (j ^ l)
                })
                .collect()
        })
        .collect();
    make_factorized(op, vec![0, 1, 2, 3], vec![0, 4]).expect("C4·C2 factorizes D4")
}

/// `ℤ₆ = ⟨3⟩ + ⟨2⟩`.
pub fn cyclic_z6() -> FactorizedGroup {
    let op = (0..6).map(|x| (0..6).map(|y| (x + y) % 6).collect()).collect();
    make_factorized(op, vec![0, 3], vec![0, 2, 4]).expect("Z2+Z3 factorizes Z6")
}

pub const GROUP_PRESETS: &[&str] = &["d4-c4c2", "z6-z2z3"];

pub fn group_preset(name: &str) -> Result<FactorizedGroup> {
    match name {
        "d4-c4c2" => Ok(dihedral_d4()),
        "z6-z2z3" => Ok(cyclic_z6()),
        _ => Err(Error::input(format!(
            "unknown group preset '{name}' (expected one of {})",
            GROUP_PRESETS.join(", ")
        ))),
    }
}

/// JSON group file; all indices 0-based with 0 the neutral element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub m: usize,
    pub op: Vec<Vec<usize>>,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

pub fn read_group(path: impl AsRef<Path>) -> Result<FactorizedGroup> {
    let text = std::fs::read_to_string(path)?;
    let file: GroupFile =
        serde_json::from_str(&text).map_err(|e| Error::input(format!("group file: {e}")))?;
    if file.op.len() != file.m {
        return Err(Error::input(format!("op has {} rows, expected m = {}", file.op.len(), file.m)));
    }
    make_factorized(file.op, file.a, file.b)
}
