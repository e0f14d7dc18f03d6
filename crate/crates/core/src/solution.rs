//! Finite set-theoretic solutions and self-maps of a finite set.
//!
//! A solution on `X = {0, …, n-1}` is stored as two `n × n` tables with
//! `sigma[x][y] = σ_x(y)` and `tau[y][x] = τ_y(x)`, so that
//! `r(x, y) = (σ_x(y), τ_y(x))`. Non-bijective, degenerate or non-braided
//! tables are still representable: the axioms are recorded as
//! [`SolutionFlags`] rather than rejected, so hypotheses can be probed.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axioms evaluated once at construction time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionFlags {
    pub bijective: bool,
    pub nondegenerate: bool,
    pub involutive: bool,
    pub ybe: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSolution {
    n: usize,
    sigma: Vec<Vec<usize>>,
    tau: Vec<Vec<usize>>,
    flags: SolutionFlags,
    /// Two distinct input pairs with the same image, when `r` is not injective.
    collision: Option<[(usize, usize); 2]>,
    /// `inverse[p]` is the preimage of pair index `p`, present iff bijective.
    inverse: Option<Vec<(usize, usize)>>,
}

pub(crate) fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    for &v in row {
        if v >= row.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Builds a permutation of `0..n` from 1-based cycles, e.g. `&[&[1, 3, 2, 4]]`
/// for `(1324)`.
pub fn perm_from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut touched = vec![false; n];
    for cycle in cycles {
        for (i, &from) in cycle.iter().enumerate() {
            let to = cycle[(i + 1) % cycle.len()];
            if from == 0 || from > n || to == 0 || to > n {
                return Err(Error::input(format!("cycle entry out of range 1..{n}")));
            }
            if touched[from - 1] {
                return Err(Error::input(format!("element {from} appears in two cycles")));
            }
            touched[from - 1] = true;
            perm[from - 1] = to - 1;
        }
    }
    Ok(perm)
}

impl FiniteSolution {
    /// Builds a solution from 0-based tables (`sigma[x][y] = σ_x(y)`,
    /// `tau[y][x] = τ_y(x)`).
    pub fn new(sigma: Vec<Vec<usize>>, tau: Vec<Vec<usize>>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::input("a solution needs at least one element"));
        }
        for (name, table) in [("sigma", &sigma), ("tau", &tau)] {
            if table.len() != n {
                return Err(Error::input(format!(
                    "{name} has {} rows, expected {n}",
                    table.len()
                )));
            }
            for (i, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::input(format!(
                        "{name} row {} has {} entries, expected {n}",
                        i + 1,
                        row.len()
                    )));
                }
                if let Some(j) = row.iter().position(|&v| v >= n) {
                    return Err(Error::input(format!(
                        "{name}[{}][{}] = {} is out of range 1..{n}",
                        i + 1,
                        j + 1,
                        row[j] + 1
                    )));
                }
            }
        }

        let mut sol = FiniteSolution {
            n,
            sigma,
            tau,
            flags: SolutionFlags {
                bijective: false,
                nondegenerate: false,
                involutive: false,
                ybe: false,
            },
            collision: None,
            inverse: None,
        };
        sol.compute_flags();
        Ok(sol)
    }

    /// Builds a solution from 1-based tables, as read from files.
    pub fn from_one_based(sigma: &[Vec<usize>], tau: &[Vec<usize>]) -> Result<Self> {
        let n = sigma.len();
        let shift = |table: &[Vec<usize>], name: &str| -> Result<Vec<Vec<usize>>> {
            table
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &v)| {
                            if v == 0 || v > n {
                                Err(Error::input(format!(
                                    "{name}[{}][{}] = {v} is out of range 1..{n}",
                                    i + 1,
                                    j + 1
                                )))
                            } else {
                                Ok(v - 1)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        Self::new(shift(sigma, "sigma")?, shift(tau, "tau")?)
    }

    /// `r(x, y) = (σ(y), τ(x))` for commuting permutations `σ`, `τ`.
    pub fn from_permutation_pair(sigma: &[usize], tau: &[usize]) -> Result<Self> {
        let n = sigma.len();
        if tau.len() != n {
            return Err(Error::input("sigma and tau have different lengths"));
        }
        if !is_permutation(sigma) || !is_permutation(tau) {
            return Err(Error::input("sigma and tau must be permutations"));
        }
        if let Some(x) = (0..n).find(|&x| sigma[tau[x]] != tau[sigma[x]]) {
            return Err(Error::input(format!(
                "sigma and tau do not commute at {}",
                x + 1
            )));
        }
        Self::new(vec![sigma.to_vec(); n], vec![tau.to_vec(); n])
    }

    fn compute_flags(&mut self) {
        let n = self.n;
        let nondegenerate = self.sigma.iter().all(|r| is_permutation(r))
            && self.tau.iter().all(|r| is_permutation(r));

        let mut first_hit: Vec<Option<(usize, usize)>> = vec![None; n * n];
        let mut collision = None;
        for x in 0..n {
            for y in 0..n {
                let (a, b) = self.apply(x, y);
                match first_hit[a * n + b] {
                    None => first_hit[a * n + b] = Some((x, y)),
                    Some(prev) => {
                        if collision.is_none() {
                            collision = Some([prev, (x, y)]);
                        }
                    }
                }
            }
        }
        let bijective = collision.is_none();
        self.inverse = bijective.then(|| first_hit.into_iter().map(|p| p.unwrap()).collect());
        self.collision = collision;

        let involutive = (0..n).all(|x| {
            (0..n).all(|y| {
                let (a, b) = self.apply(x, y);
                self.apply(a, b) == (x, y)
            })
        });

        self.flags = SolutionFlags {
            bijective,
            nondegenerate,
            involutive,
            ybe: self.braid_relation_holds(),
        };
    }

    fn braid_relation_holds(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // r1 r2 r1
                    let (a, b) = self.apply(x, y);
                    let (b, c) = self.apply(b, z);
                    let (a, b) = self.apply(a, b);
                    let lhs = (a, b, c);
                    // r2 r1 r2
                    let (p, q) = self.apply(y, z);
                    let (o, p) = self.apply(x, p);
                    let (p, q) = self.apply(p, q);
                    if lhs != (o, p, q) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flags(&self) -> SolutionFlags {
        self.flags
    }

    /// `σ_x(y)`.
    #[inline]
    pub fn sigma(&self, x: usize, y: usize) -> usize {
        self.sigma[x][y]
    }

    /// `τ_y(x)`.
    #[inline]
    pub fn tau(&self, y: usize, x: usize) -> usize {
        self.tau[y][x]
    }

    pub fn sigma_row(&self, x: usize) -> &[usize] {
        &self.sigma[x]
    }

    pub fn tau_row(&self, y: usize) -> &[usize] {
        &self.tau[y]
    }

    pub fn sigma_table(&self) -> &[Vec<usize>] {
        &self.sigma
    }

    pub fn tau_table(&self) -> &[Vec<usize>] {
        &self.tau
    }

    /// `r(x, y)`.
    #[inline]
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x][y], self.tau[y][x])
    }

    /// `r⁻¹(x, y)`, or `None` when `r` is not bijective.
    pub fn apply_inverse(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        self.inverse.as_ref().map(|inv| inv[x * self.n + y])
    }

    pub fn verify_ybe(&self) -> bool {
        self.flags.ybe
    }

    pub fn is_involutive(&self) -> bool {
        self.flags.involutive
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.flags.nondegenerate
    }

    /// Two input pairs sharing an image, if `r` fails to be injective.
    pub fn collision(&self) -> Option<[(usize, usize); 2]> {
        self.collision
    }

    /// Human-readable warnings about the stored tables (1-based).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some([(x1, y1), (x2, y2)]) = self.collision {
            let (a, b) = self.apply(x1, y1);
            out.push(format!(
                "r is not bijective: r({},{}) = r({},{}) = ({},{})",
                x1 + 1,
                y1 + 1,
                x2 + 1,
                y2 + 1,
                a + 1,
                b + 1
            ));
        }
        out
    }

    /// Recomputes `τ_y(x) = σ⁻¹_{σ_x(y)}(x)` from `σ` alone. Only meaningful
    /// when every `σ_x` is a bijection.
    pub fn tau_from_sigma(sigma: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
        let n = sigma.len();
        let mut inv = vec![vec![0; n]; n];
        for (x, row) in sigma.iter().enumerate() {
            if !is_permutation(row) {
                return None;
            }
            for (y, &v) in row.iter().enumerate() {
                inv[x][v] = y;
            }
        }
        let mut tau = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                tau[y][x] = inv[sigma[x][y]][x];
            }
        }
        Some(tau)
    }

    /// Checks that the stored `τ` agrees with [`Self::tau_from_sigma`].
    pub fn tau_consistent_with_sigma(&self) -> bool {
        Self::tau_from_sigma(&self.sigma).is_some_and(|t| t == self.tau)
    }

    pub fn to_file_format(&self) -> SolutionFile {
        let plus_one = |t: &[Vec<usize>]| -> Vec<Vec<usize>> {
            t.iter()
                .map(|row| row.iter().map(|v| v + 1).collect())
                .collect()
        };
        SolutionFile {
            n: self.n,
            sigma: plus_one(&self.sigma),
            tau: plus_one(&self.tau),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file_format()).expect("tables serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SolutionFile = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("solution file line {}: {e}", e.line())))?;
        file.into_solution()
    }
}

/// On-disk form of a solution: `{"n": .., "sigma": [[..]], "tau": [[..]]}`,
/// 1-based, `tau[y][x] = τ_y(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Vec<Vec<usize>>,
}

impl SolutionFile {
    pub fn into_solution(self) -> Result<FiniteSolution> {
        if self.n == 0 {
            return Err(Error::input("field \"n\" must be positive"));
        }
        for (name, table) in [("sigma", &self.sigma), ("tau", &self.tau)] {
            if table.len() != self.n {
                return Err(Error::input(format!(
                    "field \"{name}\" has {} rows but n = {}",
                    table.len(),
                    self.n
                )));
            }
        }
        FiniteSolution::from_one_based(&self.sigma, &self.tau)
    }
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<FiniteSolution> {
    let text = std::fs::read_to_string(path.as_ref())?;
    FiniteSolution::from_json(&text)
        .map_err(|e| match e {
            Error::Input(msg) => Error::input(format!("{}: {msg}", path.as_ref().display())),
            other => other,
        })
}

pub fn write_solution(sol: &FiniteSolution, path: impl AsRef<Path>) -> Result<()> {
    let mut text = sol.to_json();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// A self-map of `{0, …, n-1}`, printed in 1-based one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapOnX {
    images: Vec<usize>,
}

impl MapOnX {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::input("empty map"));
        }
        if let Some(i) = images.iter().position(|&v| v >= n) {
            return Err(Error::input(format!(
                "image of {} is {}, outside 1..{n}",
                i + 1,
                images[i] + 1
            )));
        }
        Ok(MapOnX { images })
    }

    pub fn identity(n: usize) -> Self {
        MapOnX {
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        assert!(value < n);
        MapOnX {
            images: vec![value; n],
        }
    }

    /// Parses one-line notation: digits for `n ≤ 9` (`"2143"`), otherwise
    /// comma-separated integers (`"2,1,10,…"`).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let values: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::input(format!("bad map entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::input(format!("bad map digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        let n = values.len();
        let images = values
            .into_iter()
            .map(|v| {
                if v == 0 || v > n {
                    Err(Error::input(format!("map entry {v} outside 1..{n} in {text:?}")))
                } else {
                    Ok(v - 1)
                }
            })
            .collect::<Result<_>>()?;
        Ok(MapOnX { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn get(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_involutive(&self) -> bool {
        (0..self.n()).all(|x| self.images[self.images[x]] == x)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MapOnX) -> MapOnX {
        MapOnX {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }
}

impl fmt::Display for MapOnX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.images {
                write!(f, "{}", v + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
