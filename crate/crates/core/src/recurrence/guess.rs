//! Recovering a recurrence as the nullspace of the linear system
//! `sum_{i,k} c_{i,k} n^k s_{n+i} = 0`, `n = 0..N`.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use super::{PRecurrence, RecurrenceError};

#[derive(Debug, Clone)]
pub struct GuessResult {
    pub basis: Vec<PRecurrence>,
    pub equations_used: usize,
    pub unique: bool,
}

/// Exact nullspace of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Returns one primitive integer vector per free column.
pub fn nullspace(mut m: Vec<Vec<Integer>>, cols: usize) -> Vec<Vec<Integer>> {
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = Integer::from(1);
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&i| m[i][c].cmp0() != Ordering::Equal) else {
            continue;
        };
        m.swap(k, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[c].cmp0() == Ordering::Equal {
                // Still needs the common scaling to keep later divisions exact.
                for x in &mut row[c + 1..cols] {
                    *x *= &pivot_row[c];
                    x.div_exact_mut(&prev);
                }
                continue;
            }
            let factor = row[c].clone();
            for j in c + 1..cols {
                let mut v = Integer::from(&pivot_row[c] * &row[j]);
                v -= Integer::from(&factor * &pivot_row[j]);
                v.div_exact_mut(&prev);
                row[j] = v;
            }
            row[c] = Integer::new();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        k += 1;
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::new(); cols];
        x[f] = Rational::from(1);
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = Rational::new();
            for j in pc + 1..cols {
                if x[j].cmp0() != Ordering::Equal {
                    acc += Rational::from(&x[j] * &m[r][j]);
                }
            }
            x[pc] = -acc / &m[r][pc];
        }
        basis.push(primitive(&x));
    }
    basis
}

fn primitive(x: &[Rational]) -> Vec<Integer> {
    let mut den = Integer::from(1);
    for v in x {
        den.lcm_mut(v.denom());
    }
    let mut out: Vec<Integer> = x.iter().map(|v| v.numer() * Integer::from(&den / v.denom())).collect();
    let mut g = Integer::new();
    for v in &out {
        g.gcd_mut(v);
    }
    if g.cmp0() != Ordering::Equal {
        for v in out.iter_mut() {
            v.div_exact_mut(&g);
        }
    }
    out
}

/// Candidate recurrences of order `r` and degree `d` from the first
/// `n_equations + r` terms of `seq`.
pub fn guess(seq: &[Rational], r: usize, d: usize, n_equations: usize) -> Result<GuessResult, RecurrenceError> {
    let unknowns = (r + 1) * (d + 1);
    if n_equations < unknowns {
        return Err(RecurrenceError::TooFewEquations { equations: n_equations, unknowns });
    }
    let needed = n_equations + r;
    if seq.len() < needed {
        return Err(RecurrenceError::InsufficientTerms { needed, available: seq.len() });
    }
    let mut system = Vec::with_capacity(n_equations);
    for n in 0..n_equations {
        let window = &seq[n..=n + r];
        let mut den = Integer::from(1);
        for s in window {
            den.lcm_mut(s.denom());
        }
        let mut row = Vec::with_capacity(unknowns);
        for s in window {
            let scaled = s.numer() * Integer::from(&den / s.denom());
            let mut power = Integer::from(1);
            for _ in 0..=d {
                row.push(Integer::from(&scaled * &power));
                power *= n as u64;
            }
        }
        system.push(row);
    }
    let vectors = nullspace(system, unknowns);
    if vectors.is_empty() {
        return Err(RecurrenceError::NoRecurrence { order: r, degree: d });
    }
    let mut basis = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut rows: Vec<Vec<Rational>> = v.chunks(d + 1).map(|c| c.iter().map(Rational::from).collect()).collect();
        while rows.len() > 1 && rows.last().unwrap().iter().all(|x| x.cmp0() == Ordering::Equal) {
            rows.pop();
        }
        basis.push(PRecurrence::new(rows)?.normalized());
    }
    let unique = basis.len() == 1;
    Ok(GuessResult { basis, equations_used: n_equations, unique })
}

/// [`guess`] with `2 (r+1)(d+1)` equations.
pub fn guess_default(seq: &[Rational], r: usize, d: usize) -> Result<GuessResult, RecurrenceError> {
    guess(seq, r, d, 2 * (r + 1) * (d + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::known;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn constant_sequence() {
        let seq = vec![Rational::from(1); 6];
        let g = guess(&seq, 1, 0, 4).unwrap();
        assert!(g.unique);
        assert_eq!(g.basis[0], PRecurrence::from_integers(&[&[-1], &[1]]).unwrap());
    }

    #[test]
    fn powers_of_two() {
        let seq: Vec<Rational> = (0..8).map(|n| Rational::from(Integer::from(1) << n)).collect();
        let g = guess(&seq, 1, 0, 6).unwrap();
        assert!(g.unique);
        assert_eq!(g.basis[0], PRecurrence::from_integers(&[&[-2], &[1]]).unwrap());
    }

    #[test]
    fn rejects_underdetermined_requests() {
        let seq = vec![Rational::from(1); 40];
        assert!(matches!(guess(&seq, 1, 1, 3), Err(RecurrenceError::TooFewEquations { .. })));
        assert!(matches!(guess(&seq, 2, 2, 39), Err(RecurrenceError::InsufficientTerms { .. })));
    }

    #[test]
    fn factorials_have_no_constant_coefficient_recurrence() {
        let mut f = Integer::from(1);
        let seq: Vec<Rational> = (0..20)
            .map(|n| {
                if n > 0 {
                    f *= n as u32;
                }
                Rational::from(&f)
            })
            .collect();
        assert!(matches!(guess(&seq, 1, 0, 10), Err(RecurrenceError::NoRecurrence { .. })));
        // s_{n+1} = (n+1) s_n
        let g = guess(&seq, 1, 1, 10).unwrap();
        assert_eq!(g.basis[0], PRecurrence::from_integers(&[&[-1, -1], &[1, 0]]).unwrap());
    }

    #[test]
    fn nullspace_of_small_matrix() {
        // x + y + z = 0 and x - z = 0
        let basis = nullspace(vec![ints(&[1, 1, 1]), ints(&[1, 0, -1])], 3);
        assert_eq!(basis, vec![ints(&[1, -2, 1])]);
        let basis = nullspace(vec![ints(&[0, 0, 0])], 2);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn recovers_area_recurrence() {
        let seq = known::area().extend(&crate::series::area_coeffs(3), 60).unwrap();
        let g = guess(&seq, 3, 4, 40).unwrap();
        assert!(g.unique);
        assert!(g.basis[0].equivalent(&known::area()));
    }

    /// Rank by plain rational Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    fn rational_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&i| a[i][c].cmp0() != Ordering::Equal) else {
                continue;
            };
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank && a[i][c].cmp0() != Ordering::Equal {
                    let f = Rational::from(&a[i][c] / &a[rank][c]);
                    for j in 0..cols {
                        let t = Rational::from(&f * &a[rank][j]);
                        a[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rational_elimination(
            m in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..6)
        ) {
            let basis = nullspace(m.iter().map(|r| ints(r)).collect(), 5);
            prop_assert_eq!(basis.len(), 5 - rational_rank(&m));
            for v in &basis {
                for row in &m {
                    let dot: Integer = row.iter().zip(v).map(|(&a, b)| Integer::from(b * a)).sum();
                    prop_assert_eq!(dot, 0);
                }
            }
        }
    }
}
