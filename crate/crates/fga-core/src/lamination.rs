//! Lamination posets and the recursive growth-type assignment.
//!
//! A finite strict partial order of labelled nodes, each carrying an
//! expansion factor `lambda_0 > 1`, determines a growth type `c` per node:
//! minimal nodes get `(lambda_0, 0)`; otherwise, with `(lambda', m')` the
//! maximum over strictly smaller nodes, `c` is `(lambda_0, 0)` when
//! `lambda' < lambda_0`, `(lambda', m')` when `lambda' > lambda_0`, and
//! `(lambda_0, m' + 1)` when they agree.

use crate::growth::{lambda_same, type_cmp, type_same, GrowthType, Lambda};
use crate::poly::{largest_real_root, IntPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct LaminationNode {
    pub label: String,
    pub lambda: Lambda,
}

#[derive(Clone, Debug)]
pub struct LaminationPoset {
    nodes: Vec<LaminationNode>,
    /// Strict relations `(sub, super)`; transitive closure is implied.
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct PosetReport {
    pub types: Vec<GrowthType>,
    /// Number of nodes.
    pub e: usize,
    /// Longest chain, counted in edges.
    pub s: usize,
    /// Number of distinct growth types.
    pub e_prime: usize,
}

impl LaminationPoset {
    pub fn new(nodes: Vec<LaminationNode>, edges: Vec<(usize, usize)>) -> Result<LaminationPoset> {
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|m| m.label == n.label) {
                return Err(Error::Parse(format!("duplicate node label {:?}", n.label)));
            }
            if !(n.lambda.approx > 1.0) {
                return Err(Error::BadParameter(format!(
                    "expansion factor of {:?} must exceed 1",
                    n.label
                )));
            }
        }
        for &(a, b) in &edges {
            if a >= nodes.len() || b >= nodes.len() || a == b {
                return Err(Error::Parse("edge endpoint out of range".into()));
            }
        }
        let poset = LaminationPoset { nodes, edges };
        poset.topo_order()?;
        Ok(poset)
    }

    pub fn nodes(&self) -> &[LaminationNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Direct sub-nodes per node (from the stored relations).
    fn subs(&self) -> Vec<Vec<usize>> {
        let mut subs = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            subs[b].push(a);
        }
        subs
    }

    /// Nodes ordered with sub-nodes first; detects cycles.
    fn topo_order(&self) -> Result<Vec<usize>> {
        let subs = self.subs();
        let n = self.nodes.len();
        let mut state = vec![0u8; n]; // 0 unseen, 1 open, 2 done
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some((v, i)) = stack.pop() {
                if i < subs[v].len() {
                    stack.push((v, i + 1));
                    let u = subs[v][i];
                    match state[u] {
                        0 => {
                            state[u] = 1;
                            stack.push((u, 0));
                        }
                        1 => {
                            return Err(Error::PosetCycle(self.nodes[u].label.clone()));
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                }
            }
        }
        Ok(order)
    }

    /// All strictly smaller nodes, through the transitive closure.
    pub fn strict_descendants(&self, v: usize) -> Vec<usize> {
        let subs = self.subs();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = subs[v].clone();
        let mut out = Vec::new();
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            out.push(u);
            stack.extend(subs[u].iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Growth type of every node by the three-way recursion.
    pub fn growth_types(&self, tol: f64) -> Result<Vec<GrowthType>> {
        let order = self.topo_order()?;
        let mut types: Vec<Option<GrowthType>> = vec![None; self.nodes.len()];
        for v in order {
            let below = self.strict_descendants(v);
            let own = &self.nodes[v].lambda;
            let c = if below.is_empty() {
                GrowthType::exact(own.clone(), 0)
            } else {
                let best = below
                    .iter()
                    .map(|&u| types[u].clone().expect("topological order"))
                    .max_by(|a, b| type_cmp(a, b, tol))
                    .unwrap();
                if lambda_same(&best.lambda, own, tol) {
                    GrowthType::exact(own.clone(), best.m + 1)
                } else if best.lambda.approx > own.approx {
                    best
                } else {
                    GrowthType::exact(own.clone(), 0)
                }
            };
            types[v] = Some(c);
        }
        Ok(types.into_iter().map(Option::unwrap).collect())
    }

    pub fn growth_type_of(&self, v: usize, tol: f64) -> Result<GrowthType> {
        Ok(self.growth_types(tol)?.into_iter().nth(v).unwrap())
    }

    /// Longest chain (edges) in the order.
    pub fn longest_chain(&self) -> usize {
        let subs = self.subs();
        let mut depth = vec![usize::MAX; self.nodes.len()];
        fn go(v: usize, subs: &[Vec<usize>], depth: &mut [usize]) -> usize {
            if depth[v] != usize::MAX {
                return depth[v];
            }
            let d = subs[v]
                .iter()
                .map(|&u| go(u, subs, depth) + 1)
                .max()
                .unwrap_or(0);
            depth[v] = d;
            d
        }
        (0..self.nodes.len())
            .map(|v| go(v, &subs, &mut depth))
            .max()
            .unwrap_or(0)
    }

    pub fn report(&self, tol: f64) -> Result<PosetReport> {
        let types = self.growth_types(tol)?;
        let s = self.longest_chain();
        let mut distinct: Vec<&GrowthType> = Vec::new();
        for t in &types {
            if !distinct.iter().any(|d| type_same(d, t, tol)) {
                distinct.push(t);
            }
        }
        Ok(PosetReport {
            e: self.nodes.len(),
            s,
            e_prime: distinct.len(),
            types,
        })
    }

    /// Line format: `node <label> lambda <value-or-minpoly>` and
    /// `edge <sub> < <super>` entries, `#` comments.
    pub fn parse(text: &str) -> Result<LaminationPoset> {
        let mut nodes: Vec<LaminationNode> = Vec::new();
        let mut edge_specs: Vec<(String, String)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["node", label, "lambda", value] => {
                    nodes.push(LaminationNode {
                        label: label.to_string(),
                        lambda: parse_lambda(value)?,
                    });
                }
                ["edge", sub, "<", sup] => {
                    edge_specs.push((sub.to_string(), sup.to_string()));
                }
                _ => {
                    return Err(Error::Parse(format!("unrecognised poset line {line:?}")));
                }
            }
        }
        let index = |label: &str| {
            nodes
                .iter()
                .position(|n| n.label == label)
                .ok_or_else(|| Error::Parse(format!("unknown node {label:?}")))
        };
        let edges = edge_specs
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        LaminationPoset::new(nodes, edges)
    }

    pub fn print(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let value = match &n.lambda.algebraic {
                Some(a) => {
                    let cs: Vec<String> = a.poly.coeffs().iter().map(|c| c.to_string()).collect();
                    format!("minpoly({})", cs.join(","))
                }
                None => format!("{:.15}", n.lambda.approx),
            };
            out.push_str(&format!("node {} lambda {}\n", n.label, value));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!(
                "edge {} < {}\n",
                self.nodes[a].label, self.nodes[b].label
            ));
        }
        out
    }
}

fn parse_lambda(value: &str) -> Result<Lambda> {
    if let Some(body) = value.strip_prefix("minpoly(").and_then(|s| s.strip_suffix(')')) {
        let coeffs = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let poly = IntPoly::new(coeffs);
        let root = largest_real_root(&poly)
            .ok_or_else(|| Error::Parse(format!("{value} has no real root")))?;
        Ok(Lambda {
            approx: root.approx,
            algebraic: Some(root),
        })
    } else {
        let approx: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad lambda value {value:?}")))?;
        Ok(Lambda {
            approx,
            algebraic: None,
        })
    }
}

/// Exact expansion factor given by the largest real root of a polynomial.
pub fn algebraic_lambda(coeffs: &[i64]) -> Lambda {
    let poly = IntPoly::from_i64(coeffs);
    let root = largest_real_root(&poly).expect("polynomial with a real root");
    Lambda {
        approx: root.approx,
        algebraic: Some(root),
    }
}

/// Every node's polynomial degree is bounded by the longest chain.
pub fn check_m_le_s(report: &PosetReport) -> bool {
    report.types.iter().all(|t| t.m as usize <= report.s)
}

/// Reference evaluation: `lambda*` is the largest factor in the closed
/// down-set and `m*` is the longest chain of nodes realising it.
pub fn brute_force_types(poset: &LaminationPoset, tol: f64) -> Result<Vec<GrowthType>> {
    let topo = poset.topo_order()?;
    let n = poset.nodes().len();
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let mut down = poset.strict_descendants(v);
        down.push(v);
        let lam_star = down
            .iter()
            .map(|&u| &poset.nodes()[u].lambda)
            .max_by(|a, b| {
                if lambda_same(a, b, tol) {
                    Ordering::Equal
                } else {
                    a.approx.partial_cmp(&b.approx).unwrap_or(Ordering::Equal)
                }
            })
            .unwrap()
            .clone();
        let carriers: Vec<usize> = down
            .iter()
            .copied()
            .filter(|&u| lambda_same(&poset.nodes()[u].lambda, &lam_star, tol))
            .collect();
        // longest chain among carriers, in nodes, sub-nodes first
        let mut best = 0usize;
        let mut memo = vec![0usize; n];
        for &u in topo.iter().filter(|u| carriers.contains(u)) {
            let below = poset.strict_descendants(u);
            let d = below
                .iter()
                .filter(|w| carriers.contains(w))
                .map(|&w| memo[w])
                .max()
                .unwrap_or(0)
                + 1;
            memo[u] = d;
            best = best.max(d);
        }
        out.push(GrowthType::exact(lam_star, (best - 1) as u32));
    }
    Ok(out)
}
