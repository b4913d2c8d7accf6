//! Transition matrices of automorphisms and their dominant eigenvalues.

use crate::aut::Automorphism;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Unsigned letter counts: `entry(i, j)` is the number of occurrences of
/// generator `i`, in either sign, in the image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl TransitionMatrix {
    pub fn from_rows(rows: Vec<Vec<u64>>) -> TransitionMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        let entries = rows
            .into_iter()
            .flatten()
            .map(BigUint::from)
            .collect();
        TransitionMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mat_vec(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = BigUint::zero();
                for j in 0..self.n {
                    let e = self.entry(i, j);
                    if !e.is_zero() && !v[j].is_zero() {
                        acc += e * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Column sums, i.e. the image lengths.
    pub fn column_sums(&self) -> Vec<BigUint> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.entry(i, j).clone()).sum())
            .collect()
    }
}

/// Letter-count matrix of an automorphism.
pub fn transition_matrix(aut: &Automorphism) -> TransitionMatrix {
    let n = aut.rank() as usize;
    let mut rows = vec![vec![0u64; n]; n];
    for j in 0..n {
        for l in aut.image(j as u32).letters() {
            rows[l.index() as usize][j] += 1;
        }
    }
    TransitionMatrix::from_rows(rows)
}

/// Dominant eigenvalue of a nonnegative integer matrix.
#[derive(Clone, Debug)]
pub struct PfResult {
    pub value: f64,
    /// Collatz-Wielandt enclosure half-width at termination.
    pub error_bound: f64,
    /// Indices of the strongly connected component attaining the maximum.
    pub component: Vec<usize>,
    /// Positive eigenvector on that component, sup-norm 1.
    pub vector: Vec<f64>,
}

/// Perron-Frobenius eigenvalue: the largest eigenvalue over the strongly
/// connected components of the support, each estimated by power iteration
/// with Collatz-Wielandt bounds (relative error below `1e-12`).
pub fn pf_eigenvalue(m: &TransitionMatrix) -> Result<PfResult> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let n = m.size();
    let dense: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.entry(i, j).to_f64().unwrap_or(f64::MAX))
                .collect()
        })
        .collect();
    let mut best: Option<PfResult> = None;
    for comp in strongly_connected_components(&dense) {
        let k = comp.len();
        if k == 1 {
            let i = comp[0];
            let d = dense[i][i];
            let candidate = PfResult {
                value: d,
                error_bound: 0.0,
                component: comp,
                vector: vec![1.0],
            };
            if best.as_ref().map_or(true, |b| candidate.value > b.value) {
                best = Some(candidate);
            }
            continue;
        }
        // power iteration on the component + identity shift (kills periodicity)
        let sub: Vec<Vec<f64>> = comp
            .iter()
            .map(|&i| comp.iter().map(|&j| dense[i][j]).collect())
            .collect();
        let mut v = vec![1.0f64; k];
        let mut low = 0.0f64;
        let mut high = f64::MAX;
        for _ in 0..200_000 {
            let mut w = vec![0.0f64; k];
            for i in 0..k {
                let mut acc = v[i]; // identity shift
                for j in 0..k {
                    acc += sub[i][j] * v[j];
                }
                w[i] = acc;
            }
            low = f64::MAX;
            high = 0.0;
            for i in 0..k {
                let r = w[i] / v[i];
                low = low.min(r);
                high = high.max(r);
            }
            let scale = w.iter().cloned().fold(0.0f64, f64::max);
            for x in w.iter_mut() {
                *x /= scale;
            }
            v = w;
            if high - low <= 1e-13 * high {
                break;
            }
        }
        let candidate = PfResult {
            value: (low + high) / 2.0 - 1.0,
            error_bound: (high - low) / 2.0,
            component: comp,
            vector: v,
        };
        if best.as_ref().map_or(true, |b| candidate.value > b.value) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("nonzero matrix has at least one component"))
}

fn strongly_connected_components(a: &[Vec<f64>]) -> Vec<Vec<usize>> {
    // Kosaraju on the support digraph with edge v -> u when a[u][v] > 0
    let n = a.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        while let Some((v, next)) = stack.pop() {
            let mut pushed = false;
            let mut u = next;
            while u < n {
                if a[u][v] > 0.0 && !seen[u] {
                    seen[u] = true;
                    stack.push((v, u + 1));
                    stack.push((u, 0));
                    pushed = true;
                    break;
                }
                u += 1;
            }
            if !pushed {
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![];
        let mut stack = vec![s];
        comp[s] = id;
        while let Some(v) = stack.pop() {
            members.push(v);
            for u in 0..n {
                if a[v][u] > 0.0 && comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn tau_matrix() {
        let m = transition_matrix(&families::tau().named.aut);
        assert_eq!(m, TransitionMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]));
    }

    #[test]
    fn fibonacci_block_matrix() {
        let m = transition_matrix(&families::nested(1).unwrap().named.aut);
        assert_eq!(m, TransitionMatrix::from_rows(vec![vec![1, 1], vec![1, 0]]));
    }

    #[test]
    fn identity_matrix() {
        let m = transition_matrix(&Automorphism::identity(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entry(i, j), &BigUint::from((i == j) as u32));
            }
        }
        assert!((pf_eigenvalue(&m).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pf_of_tau_matrix() {
        let m = TransitionMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]);
        let r = pf_eigenvalue(&m).unwrap();
        let golden_sq = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((r.value - golden_sq).abs() < 1e-12 * golden_sq);
    }

    #[test]
    fn pf_of_fibonacci_matrix() {
        let m = TransitionMatrix::from_rows(vec![vec![1, 1], vec![1, 0]]);
        let r = pf_eigenvalue(&m).unwrap();
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((r.value - golden).abs() < 1e-12 * golden);
    }

    #[test]
    fn pf_rejects_zero_matrix() {
        let m = TransitionMatrix::from_rows(vec![vec![0, 0], vec![0, 0]]);
        assert!(matches!(pf_eigenvalue(&m), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn pf_of_periodic_permutation_matrix() {
        // swap has eigenvalues +/-1; the shift keeps the iteration convergent
        let m = TransitionMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        let r = pf_eigenvalue(&m).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pf_reducible_takes_max_over_components() {
        // block diag(fib, 2)
        let m = TransitionMatrix::from_rows(vec![
            vec![1, 1, 0],
            vec![1, 0, 0],
            vec![0, 0, 2],
        ]);
        let r = pf_eigenvalue(&m).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.component, vec![2]);
    }

    #[test]
    fn pf_residual_is_small() {
        let m = TransitionMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]);
        let r = pf_eigenvalue(&m).unwrap();
        // residual on the component: ||Mv - lambda v||_inf / ||v||_inf
        let mv0 = 2.0 * r.vector[0] + r.vector[1];
        let mv1 = r.vector[0] + r.vector[1];
        let res = (mv0 - r.value * r.vector[0])
            .abs()
            .max((mv1 - r.value * r.vector[1]).abs());
        assert!(res < 1e-10);
    }
}
