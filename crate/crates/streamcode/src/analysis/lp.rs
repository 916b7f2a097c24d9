//! Exact finite-horizon optimum via linear programming over rationals.
//!
//! Variables: the rate `s` plus one share `x_{k,t}` per message `k` and step
//! `t` of its coding window. Constraints: per-step capacity
//! `sum_k x_{k,t} <= 1`, and per message and admissible pattern `E` the
//! coverage `s <= sum over the unerased window steps of x_{k,t}`. Only the
//! undominated coverage rows are kept: for each `k`, patterns whose
//! surviving window-step set is inclusion-minimal. The tableau is solved by
//! primal simplex with Bland's rule over `BigRational`, so results are exact
//! and the iteration count is finite; no floating point is involved.

use crate::core::{Rational, SystemParams};
use crate::erasure::{enumerate_admissible, ErasureModel, Guard};
use crate::error::Error;
use num::{One, Signed, Zero};

/// One optimal share: message `message` transmits `share` at step `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpShare {
    pub message: u32,
    pub t: u32,
    pub share: Rational,
}

/// Exact optimum of the finite-horizon program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    rate: Rational,
    allocation: Vec<LpShare>,
    coverage_rows: usize,
    patterns_enumerated: u64,
}

impl LpSolution {
    /// The optimal rate: the largest `s` any intrasession allocation can
    /// guarantee every message under every admissible pattern.
    pub fn rate(&self) -> &Rational {
        &self.rate
    }

    /// Nonzero optimal shares, ordered by message then step.
    pub fn allocation(&self) -> &[LpShare] {
        &self.allocation
    }

    /// Undominated coverage constraints the program actually carried.
    pub fn coverage_rows(&self) -> usize {
        self.coverage_rows
    }

    /// Admissible patterns inspected while building the constraints.
    pub fn patterns_enumerated(&self) -> u64 {
        self.patterns_enumerated
    }
}

/// Solve the finite-horizon program exactly.
///
/// The guard's horizon limit applies. Its pattern cap is ignored: the
/// program is only meaningful with every admissible pattern considered, so a
/// truncated enumeration cannot be used here.
pub fn solve_intrasession_lp(
    params: &SystemParams,
    model: &ErasureModel,
    guard: &Guard,
) -> Result<LpSolution, Error> {
    let complete = Guard {
        max_patterns: None,
        ..*guard
    };
    let horizon = params.horizon();
    let n = params.n();
    let d = params.d();
    let c = params.c();

    // Window-step survivor masks per message, minimal under inclusion.
    let mut enumerator = enumerate_admissible(*model, params, complete)?;
    let mut survivor_masks: Vec<Vec<u64>> = vec![Vec::new(); n as usize + 1];
    let window_mask = (1u64 << d) - 1;
    for pattern in enumerator.by_ref() {
        let erased = pattern.to_mask().expect("horizon is guarded below 64");
        for k in 1..=n {
            let start = (k - 1) * c + 1;
            let surviving = !(erased >> (start - 1)) & window_mask;
            survivor_masks[k as usize].push(surviving);
        }
    }
    let patterns_enumerated = enumerator.patterns_yielded();
    for masks in &mut survivor_masks {
        masks.sort_by_key(|m| m.count_ones());
        masks.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        for &m in masks.iter() {
            if !minimal.iter().any(|&kept| kept & m == kept) {
                minimal.push(m);
            }
        }
        *masks = minimal;
    }

    // Variable layout: 0 = s, then x_{k,t} for k ascending, t across W_k.
    let var_of = |k: u32, i: u32| 1 + ((k - 1) * d + i) as usize; // i: 0-based window offset
    let n_structural = 1 + (n * d) as usize;

    // Rows: capacity for each step, then coverage for each kept mask.
    let mut rows: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
    for t in 1..=horizon {
        let mut coeffs = Vec::new();
        for k in 1..=n {
            let start = (k - 1) * c + 1;
            if t >= start && t < start + d {
                coeffs.push((var_of(k, t - start), Rational::one()));
            }
        }
        rows.push((coeffs, Rational::one()));
    }
    let mut coverage_rows = 0;
    for k in 1..=n {
        for &mask in &survivor_masks[k as usize] {
            let mut coeffs = vec![(0usize, Rational::one())];
            for i in 0..d {
                if mask & (1 << i) != 0 {
                    coeffs.push((var_of(k, i), -Rational::one()));
                }
            }
            rows.push((coeffs, Rational::zero()));
            coverage_rows += 1;
        }
    }

    let objective = {
        let mut c_vec = vec![Rational::zero(); n_structural];
        c_vec[0] = Rational::one();
        c_vec
    };
    let values = simplex_max(&rows, &objective)?;

    let rate = values[0].clone();
    let mut allocation = Vec::new();
    for k in 1..=n {
        let start = (k - 1) * c + 1;
        for i in 0..d {
            let share = &values[var_of(k, i)];
            if share.is_positive() {
                allocation.push(LpShare {
                    message: k,
                    t: start + i,
                    share: share.clone(),
                });
            }
        }
    }

    Ok(LpSolution {
        rate,
        allocation,
        coverage_rows,
        patterns_enumerated,
    })
}

/// Maximize `objective . v` subject to the sparse rows `coeffs . v <= rhs`
/// and `v >= 0`, all RHS nonnegative. Dense tableau, primal simplex, Bland's
/// rule for both the entering and leaving choice, so cycling is impossible.
fn simplex_max(
    rows: &[(Vec<(usize, Rational)>, Rational)],
    objective: &[Rational],
) -> Result<Vec<Rational>, Error> {
    let m = rows.len();
    let n_structural = objective.len();
    let width = n_structural + m + 1; // structural, slacks, RHS
    let rhs_col = width - 1;

    let mut tab: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width]; m];
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (r, (coeffs, rhs)) in rows.iter().enumerate() {
        debug_assert!(!rhs.is_negative(), "slack basis needs nonnegative RHS");
        for (j, a) in coeffs {
            tab[r][*j] = a.clone();
        }
        tab[r][n_structural + r] = Rational::one();
        tab[r][rhs_col] = rhs.clone();
        basis.push(n_structural + r);
    }
    // Reduced-cost row starts as -objective (slack basis has zero cost).
    let mut zrow: Vec<Rational> = vec![Rational::zero(); width];
    for (j, c) in objective.iter().enumerate() {
        zrow[j] = -c.clone();
    }

    loop {
        let Some(entering) = (0..width - 1).find(|&j| zrow[j].is_negative()) else {
            break; // optimal
        };
        let mut leaving: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for r in 0..m {
            if tab[r][entering].is_positive() {
                let ratio = &tab[r][rhs_col] / &tab[r][entering];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[r] < basis[leaving.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leaving = Some(r);
                }
            }
        }
        let Some(pivot_row) = leaving else {
            return Err(Error::LpUnbounded);
        };

        let pivot = tab[pivot_row][entering].clone();
        for x in tab[pivot_row].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..m {
            if r != pivot_row && !tab[r][entering].is_zero() {
                let factor = tab[r][entering].clone();
                for j in 0..width {
                    let delta = &factor * &tab[pivot_row][j];
                    tab[r][j] -= delta;
                }
            }
        }
        if !zrow[entering].is_zero() {
            let factor = zrow[entering].clone();
            for j in 0..width {
                let delta = &factor * &tab[pivot_row][j];
                zrow[j] -= delta;
            }
        }
        basis[pivot_row] = entering;
    }

    let mut values = vec![Rational::zero(); n_structural];
    for (r, &b) in basis.iter().enumerate() {
        if b < n_structural {
            values[b] = tab[r][rhs_col].clone();
        }
    }
    Ok(values)
}
