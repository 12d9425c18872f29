//! Integer kernel-lattice bases by unimodular column reduction, plus exact
//! rational linear solves and orthogonal projection.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::ratio::{rat_int, Rat};

/// A basis of the lattice `{x ∈ ℤⁿ : M x = 0}`.
///
/// Column-reduces `M` to echelon form by unimodular operations while
/// tracking them in a change-of-basis matrix; the columns that end up zero
/// give the kernel basis. Deterministic: each basis vector is
/// sign-normalized to a positive leading entry and the basis is sorted.
pub(crate) fn integer_kernel_basis(matrix: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = matrix.len();
    let mut a: Vec<Vec<i128>> =
        matrix.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    for row in &a {
        assert_eq!(row.len(), n, "matrix width mismatch");
    }
    // u starts as the identity; columns of u track column operations on a
    let mut u: Vec<Vec<i128>> =
        (0..n).map(|r| (0..n).map(|c| i128::from(r == c)).collect()).collect();

    let swap_cols = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let add_col = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        // column dst -= q * column src
        for row in a.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= q * row[src];
        }
    };

    let mut p = 0; // number of pivot columns placed so far
    for r in 0..m {
        if p == n {
            break;
        }
        loop {
            let jmin = (p..n)
                .filter(|&j| a[r][j] != 0)
                .min_by_key(|&j| (a[r][j].abs(), j));
            let Some(jmin) = jmin else {
                break;
            };
            if jmin != p {
                swap_cols(&mut a, &mut u, p, jmin);
            }
            let mut leftover = false;
            for j in p + 1..n {
                if a[r][j] != 0 {
                    let q = a[r][j].div_euclid(a[r][p]);
                    add_col(&mut a, &mut u, j, p, q);
                    if a[r][j] != 0 {
                        leftover = true;
                    }
                }
            }
            if !leftover {
                break;
            }
        }
        if a[r][p] != 0 {
            p += 1;
        }
    }

    let mut basis: Vec<Vec<i64>> = (p..n)
        .map(|j| {
            (0..n)
                .map(|r| i64::try_from(u[r][j]).expect("kernel basis entry exceeds i64"))
                .collect()
        })
        .collect();
    for b in basis.iter_mut() {
        if let Some(first) = b.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in b.iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    basis.sort();
    for b in &basis {
        for row in matrix {
            debug_assert_eq!(
                row.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>(),
                0
            );
        }
    }
    basis
}

/// Per-vector coefficient bounds over the admissible region.
///
/// Any `x ≥ 0` with `Σ w_r x_r ≤ l` that lies in the span of `basis` has
/// coordinates `γ = P x` for the pseudo-inverse `P = (BᵀB)⁻¹Bᵀ`, hence
/// `|γ_i| ≤ l · max_r |P[i][r]|/w_r`. Saturates at `i64::MAX`.
pub(crate) fn coefficient_bounds(basis: &[Vec<i64>], weights: &[i64], l: i64) -> Vec<i64> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let n = weights.len();
    let mut gram = vec![vec![rat_int(0); k]; k];
    for i in 0..k {
        for j in 0..k {
            let dot: i128 =
                basis[i].iter().zip(&basis[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
            gram[i][j] = Rat::from(num_bigint::BigInt::from(dot));
        }
    }
    let mut factors = vec![rat_int(0); k];
    for r in 0..n {
        let rhs: Vec<Rat> = basis.iter().map(|b| rat_int(b[r])).collect();
        let col = solve_rational(&gram, &rhs).expect("Gram system of independent columns");
        for (f, c) in factors.iter_mut().zip(&col) {
            let scaled = c.abs() / rat_int(weights[r]);
            if scaled > *f {
                *f = scaled;
            }
        }
    }
    factors
        .iter()
        .map(|f| (f.clone() * rat_int(l)).floor().to_integer().to_i64().unwrap_or(i64::MAX))
        .collect()
}

/// Solves `M x = rhs` exactly by Gaussian elimination. Returns `None` when
/// the system is inconsistent; under-determined coordinates are set to 0.
pub(crate) fn solve_rational(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = matrix.len();
    assert_eq!(rhs.len(), m);
    let n = matrix.first().map(Vec::len).unwrap_or(0);
    let mut aug: Vec<Vec<Rat>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, r);
        let inv = aug[pivot_row][col].clone();
        for x in aug[pivot_row].iter_mut() {
            *x /= inv.clone();
        }
        for r2 in 0..m {
            if r2 != pivot_row && !aug[r2][col].is_zero() {
                let f = aug[r2][col].clone();
                for j in 0..=n {
                    let delta = f.clone() * aug[pivot_row][j].clone();
                    aug[r2][j] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == m {
            break;
        }
    }
    // inconsistency: an all-zero row with nonzero rhs
    for row in &aug {
        if row[..n].iter().all(Rat::is_zero) && !row[n].is_zero() {
            return None;
        }
    }
    let mut x = vec![rat_int(0); n];
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            x[col] = aug[r][n].clone();
        }
    }
    Some(x)
}

/// The orthogonal (Euclidean) projection of `y` onto the rational span of
/// the integer columns `cols`, computed exactly via the Gram system.
pub(crate) fn project_onto_span(cols: &[Vec<i64>], y: &[Rat]) -> Vec<Rat> {
    let n = y.len();
    let k = cols.len();
    if k == 0 {
        return vec![rat_int(0); n];
    }
    let mut gram = vec![vec![rat_int(0); k]; k];
    for i in 0..k {
        for j in 0..k {
            let dot: i128 =
                cols[i].iter().zip(&cols[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
            gram[i][j] = Rat::from(num_bigint::BigInt::from(dot));
        }
    }
    let rhs: Vec<Rat> = (0..k)
        .map(|i| {
            cols[i]
                .iter()
                .zip(y)
                .map(|(&a, b)| rat_int(a) * b.clone())
                .fold(rat_int(0), |acc, t| acc + t)
        })
        .collect();
    let coeffs = solve_rational(&gram, &rhs).expect("Gram system of independent columns");
    (0..n)
        .map(|r| {
            coeffs
                .iter()
                .zip(cols)
                .map(|(c, col)| c.clone() * rat_int(col[r]))
                .fold(rat_int(0), |acc, t| acc + t)
        })
        .collect()
}
