//! Named solutions used throughout tests and by the CLI.

use crate::error::{Error, Result};
use crate::solution::{perm_from_cycles, FiniteSolution};

fn from_cycle_rows(n: usize, sigma: &[&[&[usize]]], tau: &[&[&[usize]]]) -> FiniteSolution {
    let rows = |spec: &[&[&[usize]]]| -> Vec<Vec<usize>> {
        spec.iter()
            .map(|cycles| perm_from_cycles(n, cycles).expect("preset cycles are valid"))
            .collect()
    };
    FiniteSolution::new(rows(sigma), rows(tau)).expect("preset tables are valid")
}

/// `X = {1,2,3}`, `r(x,y) = (φ_x(y), φ_y(x))` with `φ₁ = φ₂ = id`, `φ₃ = (12)`.
pub fn example_3_2() -> FiniteSolution {
    let phi: &[&[&[usize]]] = &[&[], &[], &[&[1, 2]]];
    from_cycle_rows(3, phi, phi)
}

/// Four-element involutive solution with ten reflections, four involutive.
pub fn example_4_13() -> FiniteSolution {
    from_cycle_rows(
        4,
        &[&[&[3, 4]], &[&[1, 3, 2, 4]], &[&[1, 4, 2, 3]], &[&[1, 2]]],
        &[&[&[2, 4]], &[&[1, 4, 3, 2]], &[&[1, 2, 3, 4]], &[&[1, 3]]],
    )
}

/// Four-element involutive solution whose `σ`-group is dihedral of order 8.
pub fn example_4_19() -> FiniteSolution {
    from_cycle_rows(
        4,
        &[&[&[1, 2]], &[&[1, 3, 2, 4]], &[&[3, 4]], &[&[1, 4, 2, 3]]],
        &[&[&[1, 4]], &[&[1, 2, 4, 3]], &[&[2, 3]], &[&[1, 3, 4, 2]]],
    )
}

/// `r(x, y) = (y, x)` on `n` points.
pub fn flip(n: usize) -> FiniteSolution {
    let id: Vec<usize> = (0..n).collect();
    FiniteSolution::from_permutation_pair(&id, &id).expect("identity commutes with itself")
}

pub const SOLUTION_PRESETS: &[&str] = &["ex-3-2", "ex-4-13", "ex-4-19", "flip-<n>"];

pub fn solution_preset(name: &str) -> Result<FiniteSolution> {
    match name {
        "ex-3-2" => Ok(example_3_2()),
        "ex-4-13" => Ok(example_4_13()),
        "ex-4-19" => Ok(example_4_19()),
        _ => {
            if let Some(n) = name.strip_prefix("flip-") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::input(format!("bad flip size in {name:?}")))?;
                if n == 0 {
                    return Err(Error::input("flip needs n >= 1"));
                }
                return Ok(flip(n));
            }
            Err(Error::input(format!(
                "unknown solution preset {name:?}; known: {}",
                SOLUTION_PRESETS.join(", ")
            )))
        }
    }
}
