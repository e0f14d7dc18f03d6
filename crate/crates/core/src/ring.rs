//! Finite nilpotent rings given by Cayley tables, and their adjoint braces.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::brace::FiniteBrace;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentRing {
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    nil_index: usize,
    /// Distinguished generator `b` for one-generator presets.
    generator: Option<usize>,
    names: Vec<String>,
}

fn check_square(table: &[Vec<usize>], m: usize, name: &str) -> Result<()> {
    if table.len() != m {
        return Err(Error::input(format!("{name} has {} rows, expected {m}", table.len())));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != m {
            return Err(Error::input(format!("{name} row {i} has {} entries", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= m) {
            return Err(Error::input(format!("{name} row {i} has entry {v} >= {m}")));
        }
    }
    Ok(())
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl NilpotentRing {
    /// Validates a structure given by 0-based tables with zero at index 0.
    pub fn from_tables(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let m = add.len();
        if m == 0 {
            return Err(Error::input("empty ring"));
        }
        check_square(&add, m, "add")?;
        check_square(&mul, m, "mul")?;
        let names = (0..m).map(|i| i.to_string()).collect();
        Self::validated(add, mul, None, names)
    }

    fn validated(
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        generator: Option<usize>,
        names: Vec<String>,
    ) -> Result<Self> {
        let m = add.len();
        let fail = |what: &str, w: String| Err(Error::input(format!("ring {what} fails at {w}")));
        for a in 0..m {
            if add[0][a] != a || add[a][0] != a {
                return fail("additive identity", format!("a={a}"));
            }
        }
        let mut neg = vec![usize::MAX; m];
        for a in 0..m {
            match (0..m).find(|&b| add[a][b] == 0) {
                Some(b) => neg[a] = b,
                None => return fail("additive inverse", format!("a={a}")),
            }
        }
        for a in 0..m {
            for b in 0..m {
                if add[a][b] != add[b][a] {
                    return fail("additive commutativity", format!("({a},{b})"));
                }
                for c in 0..m {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return fail("additive associativity", format!("({a},{b},{c})"));
                    }
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return fail("multiplicative associativity", format!("({a},{b},{c})"));
                    }
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]] {
                        return fail("left distributivity", format!("({a},{b},{c})"));
                    }
                    if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]] {
                        return fail("right distributivity", format!("({a},{b},{c})"));
                    }
                }
            }
        }
        let mut ring = NilpotentRing {
            add,
            mul,
            neg,
            nil_index: 0,
            generator,
            names,
        };
        ring.nil_index = ring
            .product_ideal_chain()
            .ok_or_else(|| Error::input("ring is not nilpotent"))?
            .len();
        Ok(ring)
    }

    /// `A¹ ⊋ A² ⊋ … ⊋ Aᵈ = {0}`, where `Aʲ⁺¹` is the additive span of
    /// `Aʲ · A`. `None` if the chain stalls above zero.
    pub fn product_ideal_chain(&self) -> Option<Vec<Vec<usize>>> {
        let m = self.order();
        let mut chain = vec![(0..m).collect::<Vec<_>>()];
        loop {
            let last = chain.last().unwrap();
            if last.len() == 1 {
                return Some(chain);
            }
            let mut member = vec![false; m];
            member[0] = true;
            let mut gens: Vec<usize> = Vec::new();
            for &a in last {
                for b in 0..m {
                    let p = self.mul[a][b];
                    if !member[p] {
                        member[p] = true;
                        gens.push(p);
                    }
                }
            }
            // additive closure
            let mut frontier = gens.clone();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let s = self.add[x][g];
                    if !member[s] {
                        member[s] = true;
                        frontier.push(s);
                    }
                }
            }
            let next: Vec<usize> = (0..m).filter(|&i| member[i]).collect();
            if next.len() == last.len() {
                return None;
            }
            chain.push(next);
        }
    }

    /// `ℤ_p[b] / (bⁿ)` without constant term: elements `c₁b + … + c_{n-1}b^{n-1}`
    /// with index `c₁ + c₂ p + … + c_{n-1} p^{n-2}`.
    pub fn truncated_poly(p: usize, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if n < 2 {
            return Err(Error::input("degree bound must be at least 2"));
        }
        let len = n - 1;
        let m = p
            .checked_pow(len as u32)
            .filter(|&m| m <= 1 << 12)
            .ok_or_else(|| Error::input(format!("ring of order {p}^{len} is too large")))?;
        let decode = |mut i: usize| -> Vec<usize> {
            (0..len)
                .map(|_| {
                    let c = i % p;
                    i /= p;
                    c
                })
                .collect()
        };
        let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let coeffs: Vec<Vec<usize>> = (0..m).map(decode).collect();

        let mut add = vec![vec![0; m]; m];
        let mut mul = vec![vec![0; m]; m];
        for a in 0..m {
            for b in 0..m {
                let sum: Vec<usize> = (0..len).map(|i| (coeffs[a][i] + coeffs[b][i]) % p).collect();
                add[a][b] = encode(&sum);
                // coefficient slot i holds b^{i+1}
                let mut prod = vec![0; len];
                for i in 0..len {
                    for j in 0..len {
                        let deg = i + j + 2;
                        if deg < n {
                            prod[deg - 1] = (prod[deg - 1] + coeffs[a][i] * coeffs[b][j]) % p;
                        }
                    }
                }
                mul[a][b] = encode(&prod);
            }
        }
        let names = coeffs.iter().map(|c| poly_name(c)).collect();
        Self::validated(add, mul, Some(1), names)
    }

    /// Direct product with componentwise operations; index `i + |self|·j`.
    pub fn direct_product(&self, other: &NilpotentRing) -> Result<Self> {
        let (m1, m2) = (self.order(), other.order());
        let m = m1 * m2;
        let split = |i: usize| (i % m1, i / m1);
        let mut add = vec![vec![0; m]; m];
        let mut mul = vec![vec![0; m]; m];
        for a in 0..m {
            let (a1, a2) = split(a);
            for b in 0..m {
                let (b1, b2) = split(b);
                add[a][b] = self.add[a1][b1] + m1 * other.add[a2][b2];
                mul[a][b] = self.mul[a1][b1] + m1 * other.mul[a2][b2];
            }
        }
        let names = (0..m)
            .map(|i| {
                let (i1, i2) = split(i);
                format!("({}, {})", self.names[i1], other.names[i2])
            })
            .collect();
        Self::validated(add, mul, None, names)
    }

    pub fn order(&self) -> usize {
        self.add.len()
    }

    pub fn nil_index(&self) -> usize {
        self.nil_index
    }

    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// Index of the element with the given name (as printed by [`Self::name`]).
    pub fn find(&self, name: &str) -> Option<usize> {
        let wanted: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        self.names.iter().position(|n| *n == wanted)
    }

    /// `x · x · … · x` (`j` factors).
    pub fn power(&self, x: usize, j: usize) -> Result<usize> {
        if j < 1 {
            return Err(Error::input("power exponent must be at least 1"));
        }
        Ok((1..j).fold(x, |acc, _| self.mul[acc][x]))
    }

    /// `{b + b·f : f ∈ A}` for the distinguished generator `b`, sorted.
    pub fn subset_b_plus_b_a(&self) -> Result<Vec<usize>> {
        let b = self
            .generator
            .ok_or_else(|| Error::input("ring has no distinguished generator b"))?;
        let mut out: Vec<usize> = (0..self.order()).map(|f| self.add[b][self.mul[b][f]]).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Inverse for `x ∘ y = x + y + xy` via `−a + a² − a³ + …`, which stops
    /// once the powers vanish.
    pub fn circle_inverse_series(&self, a: usize) -> usize {
        let minus_a = self.neg[a];
        let mut term = minus_a;
        let mut sum = 0;
        while term != 0 {
            sum = self.add[sum][term];
            term = self.mul[term][minus_a];
        }
        sum
    }

    /// The two-sided brace with the same addition and `a ∘ b = a + b + ab`.
    pub fn to_brace(&self) -> Result<FiniteBrace> {
        let m = self.order();
        let circle: Vec<Vec<usize>> = (0..m)
            .map(|a| (0..m).map(|b| self.add[self.add[a][b]][self.mul[a][b]]).collect())
            .collect();
        let circle_inv: Vec<usize> = (0..m).map(|a| self.circle_inverse_series(a)).collect();
        FiniteBrace::with_circle_inverse(self.add.clone(), circle, circle_inv)
    }

    pub fn to_file(&self) -> RingFile {
        RingFile {
            m: self.order(),
            add: self.add.clone(),
            mul: self.mul.clone(),
        }
    }
}

fn poly_name(coeffs: &[usize]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let mono = if i == 0 { "b".to_string() } else { format!("b^{}", i + 1) };
            if c == 1 {
                mono
            } else {
                format!("{c}{mono}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Ring file: `{"m": .., "add": [[..]], "mul": [[..]]}`, 0-based, zero at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub m: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

pub fn read_ring(path: impl AsRef<Path>) -> Result<NilpotentRing> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: RingFile = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("ring file line {}: {e}", e.line())))?;
    if file.add.len() != file.m {
        return Err(Error::input("ring file: \"add\" does not have m rows"));
    }
    NilpotentRing::from_tables(file.add, file.mul)
}

/// Parses a ring preset such as `zp-trunc:2,4`, or a product
/// `zp-trunc:2,2*zp-trunc:3,2`.
pub fn ring_preset(spec: &str) -> Result<NilpotentRing> {
    let mut factors = spec.split('*');
    let first = parse_factor(factors.next().unwrap_or(""))?;
    factors.try_fold(first, |acc, f| acc.direct_product(&parse_factor(f)?))
}

fn parse_factor(spec: &str) -> Result<NilpotentRing> {
    let bad = || Error::input(format!("unknown ring preset {spec:?}; expected zp-trunc:p,n"));
    let args = spec.trim().strip_prefix("zp-trunc:").ok_or_else(bad)?;
    let (p, n) = args.split_once(',').ok_or_else(bad)?;
    let p: usize = p.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    NilpotentRing::truncated_poly(p, n)
}
