//! Sweeping every short conjugacy class of an automorphism to measure the
//! maximal polynomial degree `d` and the set of exponential growth types.
//!
//! Classes are enumerated in canonical form (least rotation, deduplicated
//! against inversion), clustered by a short exact length profile, and one
//! representative per cluster is classified. Types are only counted from
//! confident classifications; everything else is reported as inconclusive.

use crate::aut::Automorphism;
use crate::growth::{
    growth_of_class, iterate_lengths, lambda_same, type_same, GrowthConfig, GrowthType,
    Provenance, Subject,
};
use crate::invariants::{self, CheckResult};
use crate::word::{CyclicWord, Letter};
use crate::Result;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// All canonical cyclic words of length `1..=max_len`: cyclically reduced,
/// least rotation, and lexicographically at most their inverse's canonical
/// form.
pub fn enumerate_classes(rank: u32, max_len: usize) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    fn go(rank: u32, max_len: usize, stack: &mut Vec<Letter>, out: &mut Vec<CyclicWord>) {
        if !stack.is_empty() {
            let first = stack[0];
            let last = *stack.last().unwrap();
            if first != last.inverse() {
                let canon = CyclicWord::from_cyclically_reduced(stack.clone(), rank);
                if canon.letters() == stack.as_slice() {
                    let inv = canon.inverse();
                    if canon.letters() <= inv.letters() {
                        out.push(canon);
                    }
                }
            }
        }
        if stack.len() == max_len {
            return;
        }
        for code in 0..2 * rank {
            let l = Letter::new(code / 2, code % 2 == 1);
            if stack.last() == Some(&l.inverse()) {
                continue;
            }
            stack.push(l);
            go(rank, max_len, stack, out);
            stack.pop();
        }
    }
    go(rank, max_len, &mut stack, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub max_len: usize,
    pub growth: GrowthConfig,
    /// Length-profile depth used to cluster classes before classification.
    pub profile_len: usize,
    pub profile_cap: usize,
    /// Classifications below this confidence count as inconclusive.
    pub min_confidence: f64,
    /// Length cap granted to classes of length at most 2, whose rates the
    /// report depends on.
    pub deep_cap: usize,
    /// Also run the fixed-rank and periodic-span lower-bound searches.
    pub with_bounds: bool,
    pub max_period: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_len: 6,
            growth: GrowthConfig::for_sweep(),
            profile_len: 5,
            profile_cap: 2_000,
            min_confidence: 0.7,
            deep_cap: 20_000_000,
            with_bounds: true,
            max_period: 4,
        }
    }
}

/// One measured exponential growth type with a witness class.
#[derive(Clone, Debug)]
pub struct MeasuredType {
    pub growth: GrowthType,
    pub witness: CyclicWord,
    pub classes: usize,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rank: u32,
    pub max_len: usize,
    pub classes: usize,
    /// Maximal polynomial degree among confidently classified classes.
    pub d: u32,
    pub d_witness: Option<CyclicWord>,
    pub exponential_types: Vec<MeasuredType>,
    pub polynomial_classes: usize,
    pub exponential_classes: usize,
    pub inconclusive: usize,
    pub fix_rank_lower: Option<u32>,
    pub k_lower: Option<u32>,
    pub checks: Vec<CheckResult>,
}

impl SweepReport {
    pub fn e_prime(&self) -> usize {
        self.exponential_types.len()
    }
}

/// Whether direct iteration under `cap` can produce at least `need` terms,
/// judged from the tail ratio of the profile.
fn empirically_reachable(profile: &[u64], cap: usize, need: usize) -> bool {
    if profile.len() >= need {
        return true;
    }
    let k = profile.len();
    if k < 2 {
        return true; // no growth information; let the pipeline decide
    }
    let last = profile[k - 1] as f64;
    let ratio = (last / profile[k - 2].max(1) as f64).max(1.05);
    let reachable = k as f64 + (cap as f64 / last).ln() / ratio.ln();
    reachable >= need as f64
}

/// Decreasing length ratios are the polynomial signature; exponential growth
/// keeps them pinned near the rate.
fn looks_polynomial(profile: &[u64], full_len: usize) -> bool {
    if profile.len() < full_len || profile.len() < 4 {
        return false;
    }
    let r: Vec<f64> = profile
        .windows(2)
        .map(|w| w[1] as f64 / w[0].max(1) as f64)
        .collect();
    let k = r.len();
    r[k - 1] < 1.25 || (r[k - 1] <= 0.995 * r[k - 2] && r[k - 2] <= 0.995 * r[k - 3])
}

/// Short exact length profile used as a clustering key.
fn profile(aut: &Automorphism, class: &CyclicWord, cfg: &SweepConfig) -> Vec<u64> {
    match iterate_lengths(
        aut,
        &Subject::Class(class.clone()),
        cfg.profile_len,
        cfg.profile_cap,
    ) {
        Ok(seq) => seq
            .values
            .iter()
            .map(|v| v.to_u64().unwrap_or(u64::MAX))
            .collect(),
        Err(_) => vec![],
    }
}

/// Measure `d` and the exponential growth types over all classes of length
/// at most `cfg.max_len`.
pub fn sweep(aut: &Automorphism, cfg: &SweepConfig) -> Result<SweepReport> {
    let rank = aut.rank();
    let classes = enumerate_classes(rank, cfg.max_len);

    // cluster by exact length profile; short classes are kept apart since
    // they witness the block rates and must each be classified
    let profiles: Vec<Vec<u64>> = classes
        .par_iter()
        .map(|c| profile(aut, c, cfg))
        .collect();
    let mut clusters: BTreeMap<(&[u64], usize), Vec<usize>> = BTreeMap::new();
    for (i, p) in profiles.iter().enumerate() {
        let key = if classes[i].len() <= 2 { i } else { usize::MAX };
        clusters.entry((p.as_slice(), key)).or_default().push(i);
    }

    // every representative tries the certified route; the direct-iteration
    // fallback is reserved for classes of length at most 2 (the block-rate
    // witnesses, with a deep cap) and for polynomial-looking profiles (the
    // degree witnesses, bulk cap)
    let groups: Vec<&Vec<usize>> = clusters.values().collect();
    let measured: Vec<(usize, usize, Result<crate::growth::Measurement>)> = groups
        .par_iter()
        .map(|members| {
            let rep = members[0];
            let mut growth_cfg = cfg.growth.clone();
            if classes[rep].len() <= 2 {
                growth_cfg.cap = cfg.deep_cap;
                growth_cfg.empirical =
                    empirically_reachable(&profiles[rep], cfg.deep_cap, 8);
            } else {
                growth_cfg.empirical = looks_polynomial(&profiles[rep], cfg.profile_len);
            }
            let mut chosen = rep;
            let mut result = growth_of_class(aut, &classes[rep], &growth_cfg);
            let confident = |r: &Result<crate::growth::Measurement>| {
                r.as_ref()
                    .map(|m| m.growth.confidence >= cfg.min_confidence)
                    .unwrap_or(false)
            };
            if !confident(&result) {
                let mut cert_only = cfg.growth.clone();
                cert_only.empirical = false;
                for &other in members.iter().skip(1).take(3) {
                    let retry = growth_of_class(aut, &classes[other], &cert_only);
                    if confident(&retry) {
                        chosen = other;
                        result = retry;
                        break;
                    }
                }
            }
            (chosen, members.len(), result)
        })
        .collect();

    let mut d = 0u32;
    let mut d_witness: Option<CyclicWord> = None;
    let mut types: Vec<MeasuredType> = Vec::new();
    let mut inconclusive = 0usize;
    let mut polynomial_classes = 0usize;
    let mut exponential_classes = 0usize;
    for (rep, count, result) in measured {
        match result {
            Ok(m) if m.growth.confidence >= cfg.min_confidence => {
                if m.growth.is_exponential() {
                    exponential_classes += count;
                    match types
                        .iter_mut()
                        .find(|t| type_same(&t.growth, &m.growth, cfg.growth.lambda_tol))
                    {
                        Some(t) => {
                            t.classes += count;
                            // prefer exact provenance for the reported type
                            if t.growth.provenance == Provenance::Fitted
                                && m.growth.provenance == Provenance::Exact
                            {
                                t.growth = m.growth.clone();
                                t.witness = classes[rep].clone();
                            }
                        }
                        None => types.push(MeasuredType {
                            growth: m.growth.clone(),
                            witness: classes[rep].clone(),
                            classes: count,
                        }),
                    }
                } else {
                    polynomial_classes += count;
                    if m.growth.m > d {
                        d = m.growth.m;
                        d_witness = Some(classes[rep].clone());
                    }
                }
            }
            _ => inconclusive += count,
        }
    }
    types.sort_by(|a, b| {
        a.growth
            .lambda
            .approx
            .partial_cmp(&b.growth.lambda.approx)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.growth.m.cmp(&b.growth.m))
    });

    let (fix_rank_lower, k_lower) = if cfg.with_bounds {
        (
            Some(invariants::fix_rank_lower_bound(aut, cfg.max_len)?),
            Some(invariants::k_lower_bound(aut, cfg.max_len, cfg.max_period)?),
        )
    } else {
        (None, None)
    };

    let mut checks = invariants::check_ed(rank, types.len() as u32, d);
    if let Some(fix) = fix_rank_lower {
        checks.extend(invariants::check_fixed_rank(rank, types.len() as u32, d, fix));
    }

    Ok(SweepReport {
        rank,
        max_len: cfg.max_len,
        classes: classes.len(),
        d,
        d_witness,
        exponential_types: types,
        polynomial_classes,
        exponential_classes,
        inconclusive,
        fix_rank_lower,
        k_lower,
        checks,
    })
}

/// Grouping helper shared with reports: count distinct exponential types.
pub fn distinct_types(types: &[GrowthType], tol: f64) -> usize {
    let mut distinct: Vec<&GrowthType> = Vec::new();
    for t in types {
        if !distinct.iter().any(|d| type_same(d, t, tol)) {
            distinct.push(t);
        }
    }
    distinct.len()
}

/// Grouping helper: count distinct rates only.
pub fn distinct_rates(types: &[GrowthType], tol: f64) -> usize {
    let mut distinct: Vec<&GrowthType> = Vec::new();
    for t in types {
        if !distinct
            .iter()
            .any(|d| lambda_same(&d.lambda, &t.lambda, tol))
        {
            distinct.push(t);
        }
    }
    distinct.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::word::{Alphabet, Word};

    #[test]
    fn class_enumeration_counts_rank_one() {
        // rank 1: classes a^k and their inverses collapse; a, aa, aaa
        let classes = enumerate_classes(1, 3);
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn class_enumeration_small_rank_two() {
        let classes = enumerate_classes(2, 2);
        // length 1: a, b; length 2: aa, bb, ab, ab^-1 (ba ~ ab etc.)
        assert_eq!(classes.len(), 6);
        for c in &classes {
            assert!(c.letters() <= c.inverse().letters());
        }
    }

    #[test]
    fn enumeration_excludes_cyclically_unreduced() {
        for c in enumerate_classes(2, 4) {
            let l = c.letters();
            assert_ne!(l[0], l[l.len() - 1].inverse());
        }
    }

    #[test]
    fn sweep_identity() {
        let id = crate::aut::Automorphism::identity(2);
        let cfg = SweepConfig {
            max_len: 3,
            ..SweepConfig::default()
        };
        let r = sweep(&id, &cfg).unwrap();
        assert_eq!(r.d, 0);
        assert_eq!(r.e_prime(), 0);
        assert_eq!(r.inconclusive, 0);
        assert_eq!(r.fix_rank_lower, Some(2));
        assert_eq!(r.k_lower, Some(2));
    }

    #[test]
    fn sweep_tau() {
        let tau = families::tau().named.aut;
        let cfg = SweepConfig {
            max_len: 4,
            ..SweepConfig::default()
        };
        let r = sweep(&tau, &cfg).unwrap();
        assert_eq!(r.e_prime(), 1);
        let expect = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((r.exponential_types[0].growth.lambda.approx - expect).abs() < 1e-6);
        assert_eq!(r.d, 0);
        assert_eq!(r.fix_rank_lower, Some(1));
        assert!(r.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn sweep_intro_example_measures_quadratic_degree() {
        let names = Alphabet::default_names(3);
        let aut = crate::aut::Automorphism::new(vec![
            Word::parse("a", &names).unwrap(),
            Word::parse("b a", &names).unwrap(),
            Word::parse("c b", &names).unwrap(),
        ])
        .unwrap();
        let cfg = SweepConfig {
            max_len: 2,
            with_bounds: false,
            ..SweepConfig::default()
        };
        let r = sweep(&aut, &cfg).unwrap();
        assert_eq!(r.d, 2);
        assert_eq!(r.e_prime(), 0);
    }
}
