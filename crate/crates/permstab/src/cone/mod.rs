//! Correcting a nonnegative integer vector into the kernel of an integer
//! matrix without leaving the positive cone or growing the norm.
//!
//! Both sides carry weighted L¹ norms with strictly positive integer
//! weights. Given `λ ≥ 0`, [`integer_kernel_point`] produces `λ′ ≥ 0` with
//! `Mλ′ = 0` and `‖λ′‖₁ ≤ ‖λ‖₁`, keeping `‖λ−λ′‖₁` small relative to
//! `‖Mλ‖₂`. Small instances are solved exactly by scanning the whole
//! admissible box. Larger ones follow the shape of the underlying
//! estimates: shrink `λ` toward the origin by a computed factor, solve the
//! continuous weighted-L¹ projection onto the kernel exactly (simplex),
//! then round to the kernel lattice by branch-and-bound over coefficient
//! boxes that grow until they provably cover every admissible point (or
//! the node budget runs out).

mod hnf;
mod simplex;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::OrbitVector;
use crate::ratio::{rat_int, round_half_up, Rat};

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("malformed problem: {0}")]
    Shape(String),
    #[error("bad pad: {0}")]
    BadPad(String),
}

/// Default branch-and-bound node budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// An instance: integer matrix, positive weights for the source and target
/// weighted-L¹ norms, and a nonnegative integer vector to correct.
#[derive(Clone, Debug)]
pub struct ConeProblem {
    pub matrix: Vec<Vec<i64>>,
    pub source_weights: Vec<i64>,
    pub target_weights: Vec<i64>,
    pub lambda: Vec<i64>,
}

impl ConeProblem {
    pub fn new(
        matrix: Vec<Vec<i64>>,
        source_weights: Vec<i64>,
        target_weights: Vec<i64>,
        lambda: Vec<i64>,
    ) -> Result<ConeProblem, ConeError> {
        let n = lambda.len();
        if source_weights.len() != n {
            return Err(ConeError::Shape("one source weight per coordinate required".into()));
        }
        if target_weights.len() != matrix.len() {
            return Err(ConeError::Shape("one target weight per matrix row required".into()));
        }
        if matrix.iter().any(|row| row.len() != n) {
            return Err(ConeError::Shape("matrix width must match the vector".into()));
        }
        if source_weights.iter().chain(&target_weights).any(|&w| w <= 0) {
            return Err(ConeError::Shape("norm weights must be strictly positive".into()));
        }
        if lambda.iter().any(|&c| c < 0) {
            return Err(ConeError::Shape("lambda must lie in the positive cone".into()));
        }
        Ok(ConeProblem { matrix, source_weights, target_weights, lambda })
    }

    fn n(&self) -> usize {
        self.lambda.len()
    }

    /// `‖x‖₁` with the source weights.
    pub fn source_norm(&self, x: &[i64]) -> i64 {
        x.iter().zip(&self.source_weights).map(|(c, w)| c.abs() * w).sum()
    }

    /// Weighted distance `‖x − lambda‖₁` for integer points.
    pub fn distance(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.lambda)
            .zip(&self.source_weights)
            .map(|((a, b), w)| (a - b).abs() * w)
            .sum()
    }

    /// `M x` for integer points.
    pub fn image(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, c)| a * c).sum())
            .collect()
    }

    /// `‖M lambda‖₂` with the target weights.
    pub fn image_norm(&self) -> i64 {
        self.image(&self.lambda)
            .iter()
            .zip(&self.target_weights)
            .map(|(c, w)| c.abs() * w)
            .sum()
    }

    fn in_kernel(&self, x: &[i64]) -> bool {
        self.image(x).iter().all(|&c| c == 0)
    }
}

/// The result of [`integer_kernel_point`], with independently re-checked
/// certificates and search diagnostics.
#[derive(Clone, Debug)]
pub struct ConeSolution {
    pub lambda_prime: Vec<i64>,
    /// `‖λ − λ′‖₁`.
    pub distance: Rat,
    pub in_kernel: bool,
    pub in_cone: bool,
    pub norm_nonincreasing: bool,
    /// `distance / ‖Mλ‖₂`; reported as 0 when `‖Mλ‖₂ = 0` (the contract
    /// forces distance 0 in that case, so no infinity marker can occur).
    pub achieved_ratio: Rat,
    /// True when the search found no admissible lattice point and the
    /// always-valid `λ′ = 0` was used.
    pub fallback: bool,
    /// The shrink factor used before the continuous projection.
    pub theta: Rat,
    /// The largest source norm of a kernel-lattice basis vector (the
    /// additive constant in the shrink factor).
    pub basis_bound: i64,
    pub nodes_explored: u64,
}

/// A point of `C ∩ K` (the positive cone intersected with the rational
/// kernel) at minimal weighted-L¹ distance from `lambda`.
///
/// Computed by exact-rational simplex. When the L² projection of `lambda`
/// onto the kernel subspace happens to lie in the cone and attain the same
/// distance, it is preferred over the simplex vertex (it is the natural
/// center of the optimal face).
pub fn nearest_kernel_point(problem: &ConeProblem) -> Vec<Rat> {
    let lambda: Vec<Rat> = problem.lambda.iter().map(|&c| rat_int(c)).collect();
    nearest_rational(problem, &lambda)
}

fn nearest_rational(problem: &ConeProblem, lambda: &[Rat]) -> Vec<Rat> {
    let n = problem.n();
    let m = problem.matrix.len();
    let in_kernel = problem.matrix.iter().all(|row| {
        row.iter()
            .zip(lambda)
            .map(|(&a, c)| rat_int(a) * c.clone())
            .fold(rat_int(0), |acc, t| acc + t)
            .is_zero()
    });
    if in_kernel {
        return lambda.to_vec();
    }

    // variables: v (the point), p, q with v - p + q = lambda linearizing
    // |v - lambda|; minimize sum of w*(p+q)
    let nvars = 3 * n;
    let mut constraints = Vec::with_capacity(m + n);
    let mut rhs = Vec::with_capacity(m + n);
    for row in &problem.matrix {
        let mut c = vec![rat_int(0); nvars];
        for (j, &a) in row.iter().enumerate() {
            c[j] = rat_int(a);
        }
        constraints.push(c);
        rhs.push(rat_int(0));
    }
    for j in 0..n {
        let mut c = vec![rat_int(0); nvars];
        c[j] = rat_int(1);
        c[n + j] = rat_int(-1);
        c[2 * n + j] = rat_int(1);
        constraints.push(c);
        rhs.push(lambda[j].clone());
    }
    let mut cost = vec![rat_int(0); nvars];
    for j in 0..n {
        cost[n + j] = rat_int(problem.source_weights[j]);
        cost[2 * n + j] = rat_int(problem.source_weights[j]);
    }
    let (optimum, x) = simplex::simplex_min(&constraints, &rhs, &cost);
    let vertex: Vec<Rat> = x[..n].to_vec();

    // prefer the orthogonal projection when it is feasible and equally close
    let basis = hnf::integer_kernel_basis(&problem.matrix, n);
    let projection = hnf::project_onto_span(&basis, lambda);
    if projection.iter().all(|c| !c.is_negative()) {
        let d = projection
            .iter()
            .zip(lambda)
            .zip(&problem.source_weights)
            .map(|((a, b), &w)| (a.clone() - b.clone()).abs() * rat_int(w))
            .fold(rat_int(0), |acc, t| acc + t);
        if d == optimum {
            return projection;
        }
    }
    vertex
}

/// An integer point of `Λ⁺ ∩ ker M` near `lambda`, with certificates.
///
/// Steps: return `lambda` when it is already in the kernel. When the whole
/// admissible box `{x ≥ 0 : ‖x‖₁ ≤ ‖λ‖₁}` fits within the node budget,
/// scan it and return the exact optimum. Otherwise shrink by
/// `θ = min(1, (‖Mλ‖₂ + A)/‖λ‖₁)` where `A` is the largest basis-vector
/// norm of the kernel lattice, project the shrunk vector exactly onto
/// `C ∩ K`, and round to the kernel lattice by branch-and-bound over
/// coefficient boxes of doubling radius, stopping once the box provably
/// contains every admissible point. Candidates must be nonnegative with
/// `‖·‖₁ ≤ ‖λ‖₁`; ties are broken toward the lexicographically least
/// vector. If no admissible candidate is found within the node budget, the
/// zero vector (always admissible) is returned with `fallback = true`.
pub fn integer_kernel_point(problem: &ConeProblem) -> ConeSolution {
    integer_kernel_point_with_budget(problem, DEFAULT_BUDGET)
}

pub fn integer_kernel_point_with_budget(problem: &ConeProblem, budget: u64) -> ConeSolution {
    let n = problem.n();
    let lambda_norm = problem.source_norm(&problem.lambda);
    let image_norm = problem.image_norm();

    if problem.in_kernel(&problem.lambda) {
        return ConeSolution {
            lambda_prime: problem.lambda.clone(),
            distance: rat_int(0),
            in_kernel: true,
            in_cone: true,
            norm_nonincreasing: true,
            achieved_ratio: rat_int(0),
            fallback: false,
            theta: rat_int(0),
            basis_bound: 0,
            nodes_explored: 0,
        };
    }

    let basis = hnf::integer_kernel_basis(&problem.matrix, n);
    let basis_bound = basis.iter().map(|b| problem.source_norm(b)).max().unwrap_or(0);

    // small instances: every admissible point lies in the box
    // `0 ≤ x_r ≤ ‖λ‖₁/w_r`; when it fits in the budget, scan it exactly
    let box_points = problem
        .source_weights
        .iter()
        .try_fold(1u128, |acc, &w| acc.checked_mul(lambda_norm as u128 / w as u128 + 1));
    if box_points.is_some_and(|c| c <= budget as u128) {
        let caps: Vec<i64> = problem.source_weights.iter().map(|&w| lambda_norm / w).collect();
        let mut best = vec![0i64; n];
        let mut best_dist = problem.distance(&best);
        let mut nodes = 0u64;
        let mut x = vec![0i64; n];
        'scan: loop {
            nodes += 1;
            if problem.source_norm(&x) <= lambda_norm && problem.in_kernel(&x) {
                let d = problem.distance(&x);
                if d < best_dist || (d == best_dist && x < best) {
                    best = x.clone();
                    best_dist = d;
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break 'scan;
                }
                x[i] += 1;
                if x[i] <= caps[i] {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
        let distance = rat_int(best_dist);
        let achieved_ratio =
            if image_norm == 0 { rat_int(0) } else { distance.clone() / rat_int(image_norm) };
        return ConeSolution {
            in_kernel: problem.in_kernel(&best),
            in_cone: best.iter().all(|&c| c >= 0),
            norm_nonincreasing: problem.source_norm(&best) <= lambda_norm,
            lambda_prime: best,
            distance,
            achieved_ratio,
            fallback: false,
            theta: rat_int(0),
            basis_bound,
            nodes_explored: nodes,
        };
    }

    // shrink toward the origin far enough that the rounding slack fits
    let theta = {
        let t = (rat_int(image_norm) + rat_int(basis_bound)) / rat_int(lambda_norm);
        if t > rat_int(1) {
            rat_int(1)
        } else {
            t
        }
    };
    let one_minus = rat_int(1) - theta.clone();
    let shrunk: Vec<Rat> = problem.lambda.iter().map(|&c| rat_int(c) * one_minus.clone()).collect();
    let v2 = nearest_rational(problem, &shrunk);

    // coefficients of v2 over the kernel basis, rounded to a search center
    let center: Vec<i64> = if basis.is_empty() {
        Vec::new()
    } else {
        let cols: Vec<Vec<Rat>> =
            (0..n).map(|r| basis.iter().map(|b| rat_int(b[r])).collect()).collect();
        let gamma = hnf::solve_rational(&cols, &v2)
            .expect("projection lies in the kernel span by construction");
        gamma.iter().map(round_half_up).collect()
    };

    let k = basis.len();
    // any admissible point has coefficients within these bounds, so a box
    // that covers them certainly contains the optimum
    let gamma_bounds = hnf::coefficient_bounds(&basis, &problem.source_weights, lambda_norm);
    let cover: i64 = center
        .iter()
        .zip(&gamma_bounds)
        .map(|(c, g)| g.saturating_add(c.abs()))
        .max()
        .unwrap_or(0);
    let mut best: Vec<i64> = vec![0; n];
    let mut best_dist = problem.distance(&best);
    // with a trivial kernel the zero vector is the whole kernel, found by
    // inspection rather than search
    let mut found_any = k == 0;
    let mut nodes = 0u64;
    let mut radius: i64 = 1;
    let mut exhausted = false;
    loop {
        let inner = if radius == 1 { -1 } else { radius / 2 };
        let mut offsets = vec![-radius; k];
        'points: loop {
            // skip the box already covered at the previous radius
            let covered = offsets.iter().all(|&o| o.abs() <= inner);
            if !covered {
                nodes += 1;
                if nodes > budget {
                    exhausted = true;
                    break 'points;
                }
                let mut x = vec![0i64; n];
                let mut ok = true;
                for (i, b) in basis.iter().enumerate() {
                    let coeff = center[i] + offsets[i];
                    for (xr, &br) in x.iter_mut().zip(b) {
                        *xr += coeff * br;
                    }
                }
                for &c in &x {
                    if c < 0 {
                        ok = false;
                        break;
                    }
                }
                if ok && problem.source_norm(&x) <= lambda_norm {
                    found_any = true;
                    let d = problem.distance(&x);
                    if d < best_dist || (d == best_dist && x < best) {
                        best = x;
                        best_dist = d;
                    }
                }
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == k {
                    break 'points;
                }
                offsets[i] += 1;
                if offsets[i] <= radius {
                    break;
                }
                offsets[i] = -radius;
                i += 1;
            }
        }
        if k == 0 || exhausted || radius >= cover {
            break;
        }
        radius = radius.saturating_mul(2);
    }

    let lambda_prime = best;
    let fallback = !found_any && problem.lambda.iter().any(|&c| c != 0);
    let distance = rat_int(problem.distance(&lambda_prime));
    let achieved_ratio = if image_norm == 0 {
        rat_int(0)
    } else {
        distance.clone() / rat_int(image_norm)
    };
    ConeSolution {
        in_kernel: problem.in_kernel(&lambda_prime),
        in_cone: lambda_prime.iter().all(|&c| c >= 0),
        norm_nonincreasing: problem.source_norm(&lambda_prime) <= lambda_norm,
        lambda_prime,
        distance,
        achieved_ratio,
        fallback,
        theta,
        basis_bound,
        nodes_explored: nodes,
    }
}

/// Every integer point of `C ∩ ker M` with `‖x‖₁ ≤ max_norm`, by exhaustive
/// box enumeration. An oracle for small instances only.
pub fn enumerate_cone_kernel_points(
    matrix: &[Vec<i64>],
    source_weights: &[i64],
    max_norm: i64,
) -> Vec<Vec<i64>> {
    let n = source_weights.len();
    let caps: Vec<i64> = source_weights.iter().map(|&w| max_norm / w).collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        let norm: i64 = x.iter().zip(source_weights).map(|(c, w)| c * w).sum();
        if norm <= max_norm
            && matrix.iter().all(|row| row.iter().zip(&x).map(|(a, c)| a * c).sum::<i64>() == 0)
        {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= caps[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Raises the norm of a kernel-cone vector to an exact target by adding
/// copies of the singleton vector `s^♯` (which has norm 1 and lies in the
/// kernel), leaving kernel membership and nonnegativity intact.
pub fn pad_to_norm(
    lambda2: &OrbitVector,
    target: i64,
    singleton: &OrbitVector,
) -> Result<OrbitVector, ConeError> {
    if !lambda2.is_nonneg() {
        return Err(ConeError::BadPad("vector leaves the positive cone".into()));
    }
    if singleton.norm() != rat_int(1) {
        return Err(ConeError::BadPad("singleton vector must have norm 1".into()));
    }
    let gap = rat_int(target) - lambda2.norm();
    if gap.is_negative() {
        return Err(ConeError::BadPad(format!(
            "target {target} is below the current norm {}",
            lambda2.norm()
        )));
    }
    if !gap.is_integer() {
        return Err(ConeError::BadPad(format!("pad gap {gap} is not an integer")));
    }
    let gap = gap.to_integer();
    let gap_i64 = i64::try_from(gap).map_err(|_| ConeError::BadPad("pad gap too large".into()))?;
    Ok(lambda2.add(&singleton.scale(gap_i64)))
}
