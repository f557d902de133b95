use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg;

/// Tabulates `φ` and `ψ` on the uncentered dyadic nodes `i · 2^-depth` over `[0, 2V-1]`.
///
/// Integer values come from the unit eigenvector of the refinement matrix `√2 h_{2j-m}`
/// normalized to `Σ_j φ(j) = 1`; each finer half-grid is then filled from the two-scale relation.
pub(super) fn tabulate(
    lowpass: &[f64],
    highpass: &[f64],
    depth: u32,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let span = lowpass.len() - 1;
    let per_unit = 1usize << depth;
    let len = span
        .checked_mul(per_unit)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Resource(usize::MAX))?;

    if span == 1 {
        return Ok(haar_tables(per_unit));
    }

    let mut phi: Vec<f64> = Vec::new();
    phi.try_reserve_exact(len)
        .map_err(|_| Error::Resource(len))?;
    phi.resize(len, 0.0);

    for (j, value) in integer_values(lowpass)?.into_iter().enumerate() {
        phi[j * per_unit] = value;
    }

    for level in 1..=depth {
        let stride = per_unit >> level;
        let mut i = stride;
        while i < len {
            phi[i] = refine(&phi, lowpass, i, per_unit);
            i += 2 * stride;
        }
    }

    let mut psi: Vec<f64> = Vec::new();
    psi.try_reserve_exact(len)
        .map_err(|_| Error::Resource(len))?;
    psi.extend((0..len).map(|i| refine(&phi, highpass, i, per_unit)));
    Ok((phi, psi))
}

/// `√2 Σ_k c_k φ(2x - k)` at node `i` (`x = i / per_unit`).
fn refine(phi: &[f64], filter: &[f64], i: usize, per_unit: usize) -> f64 {
    let twice = 2 * i;
    let mut acc = 0.0;
    for (k, &c) in filter.iter().enumerate() {
        let offset = k * per_unit;
        if offset > twice {
            break;
        }
        if let Some(&value) = phi.get(twice - offset) {
            acc += c * value;
        }
    }
    SQRT_2 * acc
}

/// Haar in closed form; the cascade would carry `√2 · 2^{-1/2}` rounding into every node.
fn haar_tables(per_unit: usize) -> (Vec<f64>, Vec<f64>) {
    let mut phi = alloc::vec![1.0; per_unit + 1];
    phi[per_unit] = 0.0;
    let psi = (0..=per_unit)
        .map(|i| match i {
            i if i == per_unit => 0.0,
            i if 2 * i < per_unit => 1.0,
            _ => -1.0,
        })
        .collect();
    (phi, psi)
}

fn integer_values(lowpass: &[f64]) -> Result<Vec<f64>> {
    let span = lowpass.len() - 1;
    // Interior unknowns φ(1)..φ(span-1); the endpoints vanish.
    let n = span - 1;
    let mut a = alloc::vec![0.0; n * n];
    for row in 0..n {
        let j = row + 1;
        for col in 0..n {
            let m = col + 1;
            let tap = (2 * j)
                .checked_sub(m)
                .and_then(|idx| lowpass.get(idx))
                .copied();
            a[row * n + col] = SQRT_2 * tap.unwrap_or(0.0) - if row == col { 1.0 } else { 0.0 };
        }
    }
    // (M - I) v = 0 has rank n - 1; swap one row for the normalization Σ v = 1.
    let mut b = alloc::vec![0.0; n];
    for col in 0..n {
        a[(n - 1) * n + col] = 1.0;
    }
    b[n - 1] = 1.0;
    let interior = linalg::solve(a, b, 1e-12).ok_or(Error::Refinement)?;
    let mut values = alloc::vec![0.0; span + 1];
    values[1..span].copy_from_slice(&interior);
    Ok(values)
}
