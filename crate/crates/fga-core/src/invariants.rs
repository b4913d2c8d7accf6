//! Executable inequality systems for the invariants of an automorphism of
//! `F_n`, the admissible-region geometry, the maximal fixed-subgroup rank,
//! and bounded-search lower bounds for the fixed rank and the periodic-class
//! span.

use crate::aut::Automorphism;
use crate::fold::SubgroupGraph;
use crate::sweep::enumerate_classes;
use crate::word::{Letter, Word};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use std::collections::BTreeMap;

/// One evaluated inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

fn check(name: impl Into<String>, lhs: i64, rhs: i64) -> CheckResult {
    CheckResult {
        name: name.into(),
        lhs,
        rhs,
        pass: lhs <= rhs,
    }
}

fn pos_part(x: i64) -> i64 {
    x.max(0)
}

/// The two (three when `d > 0`) inequalities constraining `(e, d)` in rank `n`.
pub fn check_ed(n: u32, e: u32, d: u32) -> Vec<CheckResult> {
    let (n, e, d) = (n as i64, e as i64, d as i64);
    let mut out = vec![
        check("e+d <= n-1", e + d, n - 1),
        check("4e+2d <= 3n-2", 4 * e + 2 * d, 3 * n - 2),
    ];
    if d > 0 {
        out.push(check("4e+2d <= 3n-3 (d>0)", 4 * e + 2 * d, 3 * n - 3));
    }
    out
}

pub fn ed_admissible(n: u32, e: u32, d: u32) -> bool {
    check_ed(n, e, d).iter().all(|c| c.pass)
}

/// Constraints on the fixed-subgroup rank given `(e, d)`.
pub fn check_fixed_rank(n: u32, e: u32, d: u32, fix: u32) -> Vec<CheckResult> {
    let (n, e, d, fix) = (n as i64, e as i64, d as i64, fix as i64);
    let mut out = vec![check(
        "e+(d-1)^+ + rkFix <= n",
        e + pos_part(d - 1) + fix,
        n,
    )];
    if d == 0 {
        out.push(check("4e+2d+2rkFix <= 3n (d=0)", 4 * e + 2 * d + 2 * fix, 3 * n));
    } else {
        out.push(check("4e+2d+2rkFix <= 3n+1", 4 * e + 2 * d + 2 * fix, 3 * n + 1));
    }
    out
}

/// Exact vertices of the admissible `(e, d)` region:
/// `(0,0), (0,n-1), ((n-1)/2,(n-1)/2), ((3n-2)/4,0)`.
pub fn quadrilateral_vertices(n: u32) -> Result<[(Ratio<i64>, Ratio<i64>); 4]> {
    if n < 2 {
        return Err(Error::BadParameter("region geometry needs n >= 2".into()));
    }
    let n = n as i64;
    let r = |num: i64, den: i64| Ratio::new(num, den);
    Ok([
        (r(0, 1), r(0, 1)),
        (r(0, 1), r(n - 1, 1)),
        (r(n - 1, 2), r(n - 1, 2)),
        (r(3 * n - 2, 4), r(0, 1)),
    ])
}

/// Exact membership of an integer point in the closed quadrilateral.
pub fn quadrilateral_contains(n: u32, e: u32, d: u32) -> Result<bool> {
    let verts = quadrilateral_vertices(n)?;
    // scale by 4 to clear denominators
    let vs: Vec<(i64, i64)> = verts
        .iter()
        .map(|(x, y)| {
            let sx = x * Ratio::new(4, 1);
            let sy = y * Ratio::new(4, 1);
            (sx.to_integer(), sy.to_integer())
        })
        .collect();
    let p = (4 * e as i64, 4 * d as i64);
    // vertices are listed clockwise; interior lies on the non-positive side
    for i in 0..4 {
        let (x1, y1) = vs[i];
        let (x2, y2) = vs[(i + 1) % 4];
        let cross = (x2 - x1) * (p.1 - y1) - (y2 - y1) * (p.0 - x1);
        if cross > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximal fixed-subgroup rank permitted for an admissible `(e, d)`.
pub fn max_fixed_rank(n: u32, e: u32, d: u32) -> Result<u32> {
    if !ed_admissible(n, e, d) {
        return Err(Error::Inadmissible { n, e, d });
    }
    let (ni, ei, di) = (n as i64, e as i64, d as i64);
    let first = ni - ei - pos_part(di - 1);
    let second = if d == 0 {
        (3 * ni - 4 * ei) / 2
    } else {
        (3 * ni + 1 - 4 * ei - 2 * di) / 2
    };
    Ok(first.min(second).max(0) as u32)
}

/// Chain bounds for exponentially growing automorphisms (`s >= 1`).
pub fn check_chain_bound(n: u32, s: u32, d: u32, r: u32) -> Result<Vec<CheckResult>> {
    if s == 0 {
        return Err(Error::NoChain);
    }
    let (n, s, d, r) = (n as i64, s as i64, d as i64, r as i64);
    Ok(vec![
        check("2s+(d-1)^+ + r <= n-2", 2 * s + pos_part(d - 1) + r, n - 2),
        check("2s+d <= n-2", 2 * s + d, n - 2),
    ])
}

/// Rank of the span of integer vectors, by fraction-free elimination.
pub fn integer_span_rank(rows: &[Vec<i64>]) -> u32 {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut mat: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot) = (rank..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let (head, tail) = mat.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            let b = prow[col].clone();
            for j in col..width {
                row[j] = &row[j] * &b - &prow[j] * &a;
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    rank as u32
}

/// Lower bound for the rank of the span, in the abelianization, of conjugacy
/// classes that are periodic with period at most `max_period`.
///
/// Enumerates cyclic words of length at most `max_len`; classes whose
/// iterates outgrow an internal cap are treated as non-periodic (sound for a
/// lower bound).
pub fn k_lower_bound(aut: &Automorphism, max_len: usize, max_period: usize) -> Result<u32> {
    if max_len < 1 || max_period < 1 {
        return Err(Error::BadParameter(
            "k lower bound needs max_len, max_period >= 1".into(),
        ));
    }
    let rank = aut.rank();
    let classes = enumerate_classes(rank, max_len);
    if classes.len() > 5_000_000 {
        return Err(Error::ResourceCap(format!(
            "{} classes at max_len {max_len}",
            classes.len()
        )));
    }
    let img = aut.max_image_len().max(2);
    let len_cap = (max_len * img.saturating_pow(max_period as u32)).clamp(4096, 1_000_000);
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    for class in &classes {
        let mut cur = class.clone();
        let mut periodic = false;
        for _ in 0..max_period {
            cur = aut.apply_class(&cur)?;
            if cur.len() > len_cap {
                break;
            }
            if &cur == class {
                periodic = true;
                break;
            }
        }
        if periodic {
            vectors.push(class.to_word().abelianization());
        }
    }
    Ok(integer_span_rank(&vectors))
}

/// Lower bound for the rank of the fixed subgroup: folds together every
/// fixed word of length at most `max_len`.
///
/// Fixed words are enumerated meet-in-the-middle: `u v` is fixed exactly
/// when `u^-1 alpha(u) = v alpha(v)^-1`, so both halves are bucketed by that
/// key instead of walking all words of full length.
pub fn fix_rank_lower_bound(aut: &Automorphism, max_len: usize) -> Result<u32> {
    if max_len < 1 {
        return Err(Error::BadParameter("fix rank bound needs max_len >= 1".into()));
    }
    let rank = aut.rank();
    let hi = max_len.div_ceil(2);
    let lo = max_len / 2;

    let mut left: BTreeMap<Vec<Letter>, Vec<Vec<Letter>>> = BTreeMap::new();
    let enumerate = |len_max: usize, f: &mut dyn FnMut(&[Letter])| {
        let mut stack: Vec<Letter> = Vec::new();
        fn go(
            rank: u32,
            len_max: usize,
            stack: &mut Vec<Letter>,
            f: &mut dyn FnMut(&[Letter]),
        ) {
            f(stack);
            if stack.len() == len_max {
                return;
            }
            for code in 0..2 * rank {
                let l = Letter::new(code / 2, code % 2 == 1);
                if stack.last() == Some(&l.inverse()) {
                    continue;
                }
                stack.push(l);
                go(rank, len_max, stack, f);
                stack.pop();
            }
        }
        go(rank, len_max, &mut stack, f);
    };

    // left keys: u^-1 alpha(u)
    enumerate(hi, &mut |letters| {
        let u = Word::from_letters_slice(letters, rank);
        let key = u.inverse().concat(&aut.apply(&u).unwrap()).unwrap();
        left.entry(key.letters().to_vec())
            .or_default()
            .push(letters.to_vec());
    });

    let mut graph = SubgroupGraph::new(rank);
    let mut pairs: u64 = 0;
    let mut spill: Result<()> = Ok(());
    // right keys: v alpha(v)^-1
    enumerate(lo, &mut |letters| {
        if spill.is_err() {
            return;
        }
        let v = Word::from_letters_slice(letters, rank);
        let key = v.concat(&aut.apply(&v).unwrap().inverse()).unwrap();
        let Some(us) = left.get(key.letters()) else {
            return;
        };
        for u_letters in us {
            pairs += 1;
            if pairs > 200_000_000 {
                spill = Err(Error::ResourceCap("fixed-word pair budget".into()));
                return;
            }
            let u = Word::from_letters_slice(u_letters, rank);
            let w = u.concat(&v).unwrap();
            if w.is_empty() || w.len() > max_len {
                continue;
            }
            debug_assert_eq!(aut.apply(&w).unwrap(), w);
            if !graph.contains_loop(&w) {
                graph.add_loop(&w).unwrap();
            }
        }
    });
    spill?;
    Ok(graph.subgroup_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::word::Alphabet;

    #[test]
    fn theta3_point_is_admissible() {
        assert!(ed_admissible(3, 1, 1));
        let checks = check_ed(3, 1, 1);
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn rank2_rejects_e1_d1() {
        let checks = check_ed(2, 1, 1);
        assert!(!checks[0].pass); // e+d = 2 > 1
    }

    #[test]
    fn alpha_boundary_point() {
        for n in 2..=8 {
            assert!(ed_admissible(n, 0, n - 1));
        }
    }

    #[test]
    fn vertices_match_formulas() {
        let v = quadrilateral_vertices(3).unwrap();
        assert_eq!(v[1], (Ratio::new(0, 1), Ratio::new(2, 1)));
        assert_eq!(v[2], (Ratio::new(1, 1), Ratio::new(1, 1)));
        assert_eq!(v[3], (Ratio::new(7, 4), Ratio::new(0, 1)));
        let v2 = quadrilateral_vertices(2).unwrap();
        assert_eq!(v2[2], (Ratio::new(1, 2), Ratio::new(1, 2)));
        assert_eq!(v2[3], (Ratio::new(1, 1), Ratio::new(0, 1)));
    }

    #[test]
    fn membership_agrees_with_checks_exhaustively() {
        for n in 2..=12u32 {
            for e in 0..=n {
                for d in 0..=n {
                    assert_eq!(
                        quadrilateral_contains(n, e, d).unwrap(),
                        ed_admissible(n, e, d),
                        "disagreement at n={n}, e={e}, d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn max_fixed_rank_examples() {
        assert_eq!(max_fixed_rank(3, 1, 1).unwrap(), 2);
        for n in 2..=9 {
            assert_eq!(max_fixed_rank(n, 0, 0).unwrap(), n);
            assert_eq!(max_fixed_rank(n, 0, 1).unwrap(), n);
        }
        assert!(max_fixed_rank(2, 1, 1).is_err());
    }

    #[test]
    fn max_fixed_rank_monotone() {
        for n in 2..=10u32 {
            for e in 0..=n {
                for d in 0..=n {
                    if !ed_admissible(n, e, d) {
                        continue;
                    }
                    let r = max_fixed_rank(n, e, d).unwrap();
                    if e > 0 && ed_admissible(n, e - 1, d) {
                        assert!(max_fixed_rank(n, e - 1, d).unwrap() >= r);
                    }
                    if d > 0 && ed_admissible(n, e, d - 1) {
                        assert!(max_fixed_rank(n, e, d - 1).unwrap() >= r);
                    }
                }
            }
        }
    }

    #[test]
    fn chain_bound_rows() {
        // nested family boundary: equality at s = l-1, d = 0, r = 0 in rank 2l
        for l in 2..=5u32 {
            let rows = check_chain_bound(2 * l, l - 1, 0, 0).unwrap();
            assert!(rows.iter().all(|c| c.pass));
            assert_eq!(rows[0].lhs, rows[0].rhs);
        }
        let rows = check_chain_bound(4, 2, 0, 0).unwrap();
        assert!(!rows[0].pass);
        let rows = check_chain_bound(6, 1, 1, 0).unwrap();
        assert!(rows.iter().all(|c| c.pass));
        assert!(check_chain_bound(5, 0, 1, 0).is_err());
    }

    #[test]
    fn fixed_rank_check_rows() {
        assert!(check_fixed_rank(3, 1, 1, 2).iter().all(|c| c.pass));
        let rows = check_fixed_rank(3, 1, 1, 3);
        assert!(!rows[0].pass); // 1 + 0 + 3 > 3
        assert!(check_fixed_rank(2, 0, 0, 2).iter().all(|c| c.pass));
    }

    #[test]
    fn span_rank_of_vectors() {
        assert_eq!(integer_span_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(integer_span_rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(integer_span_rank(&[]), 0);
        assert_eq!(integer_span_rank(&[vec![0, 0, 0]]), 0);
        assert_eq!(
            integer_span_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]]),
            2
        );
    }

    #[test]
    fn k_lower_bound_identity() {
        let id = Automorphism::identity(3);
        assert_eq!(k_lower_bound(&id, 1, 1).unwrap(), 3);
    }

    #[test]
    fn k_lower_bound_partial_conjugation() {
        // a -> a, b -> b, c -> a c a^-1 has n = k = 3
        let names = Alphabet::default_names(3);
        let aut = Automorphism::new(vec![
            Word::parse("a", &names).unwrap(),
            Word::parse("b", &names).unwrap(),
            Word::parse("a c a^-1", &names).unwrap(),
        ])
        .unwrap();
        assert_eq!(k_lower_bound(&aut, 3, 2).unwrap(), 3);
    }

    #[test]
    fn k_lower_bound_tau_is_zero() {
        let tau = families::tau().named.aut;
        assert_eq!(k_lower_bound(&tau, 4, 2).unwrap(), 0);
    }

    #[test]
    fn fix_rank_identity() {
        let id = Automorphism::identity(4);
        assert_eq!(fix_rank_lower_bound(&id, 2).unwrap(), 4);
    }

    #[test]
    fn fix_rank_tau() {
        let tau = families::tau().named.aut;
        assert_eq!(fix_rank_lower_bound(&tau, 4).unwrap(), 1);
        assert_eq!(fix_rank_lower_bound(&tau, 3).unwrap(), 0);
    }

    #[test]
    fn fix_rank_alpha() {
        let alpha = families::alpha_poly(3).unwrap().named.aut;
        assert_eq!(fix_rank_lower_bound(&alpha, 6).unwrap(), 2);
    }

    #[test]
    fn fix_rank_monotone_in_max_len() {
        let theta = families::theta(5).unwrap().named.aut;
        let mut prev = 0;
        for len in 1..=6 {
            let r = fix_rank_lower_bound(&theta, len).unwrap();
            assert!(r >= prev);
            prev = r;
        }
        assert_eq!(prev, 2);
    }
}
