//! Subgroup graphs and Stallings folding.
//!
//! A subgroup of `F_n` given by finitely many generator words is represented
//! by a labelled graph: loops at a basepoint, folded until no vertex carries
//! two equally-labelled edges in the same direction. The rank of the subgroup
//! is the first Betti number `E - V + 1` of the folded core.

use crate::word::Word;
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    parent: Vec<usize>,
    size: Vec<u32>,
    out: Vec<BTreeMap<u32, usize>>,
    inc: Vec<BTreeMap<u32, usize>>,
    base: usize,
    rank: u32,
}

impl SubgroupGraph {
    pub fn new(rank: u32) -> Self {
        SubgroupGraph {
            parent: vec![0],
            size: vec![1],
            out: vec![BTreeMap::new()],
            inc: vec![BTreeMap::new()],
            base: 0,
            rank,
        }
    }

    pub fn generator_rank(&self) -> u32 {
        self.rank
    }

    fn fresh(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.size.push(1);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeMap::new());
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Add the loop reading `w` at the basepoint, folding afterwards.
    pub fn add_loop(&mut self, w: &Word) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        if w.is_empty() {
            return Ok(());
        }
        let mut pending: Vec<(usize, usize)> = Vec::new();
        let mut cur = self.base;
        let n = w.len();
        for (i, &l) in w.letters().iter().enumerate() {
            let next = if i + 1 == n { self.base } else { self.fresh() };
            if l.is_inverse() {
                self.insert_edge(next, l.index(), cur, &mut pending);
            } else {
                self.insert_edge(cur, l.index(), next, &mut pending);
            }
            cur = next;
        }
        self.process(&mut pending);
        Ok(())
    }

    /// Record edge `u --label--> v`, queueing identifications forced by folding.
    fn insert_edge(&mut self, u: usize, label: u32, v: usize, pending: &mut Vec<(usize, usize)>) {
        let u = self.find(u);
        let v = self.find(v);
        match self.out[u].get(&label).copied() {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    pending.push((w, v));
                }
            }
            None => {
                self.out[u].insert(label, v);
            }
        }
        match self.inc[v].get(&label).copied() {
            Some(w) => {
                let w = self.find(w);
                if w != u {
                    pending.push((w, u));
                }
            }
            None => {
                self.inc[v].insert(label, u);
            }
        }
    }

    fn process(&mut self, pending: &mut Vec<(usize, usize)>) {
        while let Some((a, b)) = pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (big, small) = if self.size[a] >= self.size[b] {
                (a, b)
            } else {
                (b, a)
            };
            self.parent[small] = big;
            self.size[big] += self.size[small];
            let small_out = std::mem::take(&mut self.out[small]);
            let small_inc = std::mem::take(&mut self.inc[small]);
            for (label, tgt) in small_out {
                self.insert_edge(big, label, tgt, pending);
            }
            for (label, src) in small_inc {
                let src = self.find(src);
                self.insert_edge(src, label, big, pending);
            }
        }
    }

    /// Whether `w` reads a loop at the basepoint of the folded graph.
    pub fn contains_loop(&mut self, w: &Word) -> bool {
        let mut cur = self.find(self.base);
        for &l in w.letters() {
            let step = if l.is_inverse() {
                self.inc[cur].get(&l.index()).copied()
            } else {
                self.out[cur].get(&l.index()).copied()
            };
            match step {
                Some(v) => cur = self.find(v),
                None => return false,
            }
        }
        cur == self.find(self.base)
    }

    fn live_vertices(&mut self) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .collect()
    }

    /// Folded edge list as `(source, label, target)` over live vertices.
    pub fn edges(&mut self) -> Vec<(usize, u32, usize)> {
        let mut edges = Vec::new();
        for v in self.live_vertices() {
            let out = self.out[v].clone();
            for (label, tgt) in out {
                let t = self.find(tgt);
                edges.push((v, label, t));
            }
        }
        edges
    }

    /// No vertex has two equally labelled edges in the same direction.
    pub fn is_folded(&mut self) -> bool {
        // by construction out/inc maps hold at most one entry per label,
        // so only stale targets pointing at merged classes could disagree
        let live = self.live_vertices();
        for v in live {
            let out = self.out[v].clone();
            for (label, tgt) in out {
                let t = self.find(tgt);
                let back = self.inc[t].get(&label).copied();
                if back.map(|s| self.find(s)) != Some(v) {
                    return false;
                }
            }
        }
        true
    }

    /// Vertex and edge counts of the core graph (leaves other than the
    /// basepoint pruned).
    pub fn core_counts(&mut self) -> (usize, usize) {
        let base = self.find(self.base);
        let edges = self.edges();
        let verts = self.live_vertices();
        let index: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut degree = vec![0usize; verts.len()];
        let mut alive_edge = vec![true; edges.len()];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (ei, &(u, _, v)) in edges.iter().enumerate() {
            degree[index[&u]] += 1;
            degree[index[&v]] += 1;
            incident[index[&u]].push(ei);
            incident[index[&v]].push(ei);
        }
        let mut removed = vec![false; verts.len()];
        let mut queue: Vec<usize> = (0..verts.len())
            .filter(|&i| verts[i] != base && degree[i] <= 1)
            .collect();
        while let Some(i) = queue.pop() {
            if removed[i] || verts[i] == base {
                continue;
            }
            removed[i] = true;
            for &ei in &incident[i] {
                if !alive_edge[ei] {
                    continue;
                }
                alive_edge[ei] = false;
                let (u, _, v) = edges[ei];
                for end in [u, v] {
                    let j = index[&end];
                    degree[j] -= 1;
                    if !removed[j] && verts[j] != base && degree[j] <= 1 {
                        queue.push(j);
                    }
                }
            }
        }
        let v_count = removed.iter().filter(|r| !**r).count();
        let e_count = alive_edge.iter().filter(|a| **a).count();
        (v_count, e_count)
    }

    /// First Betti number of the folded core.
    pub fn subgroup_rank(&mut self) -> u32 {
        let (v, e) = self.core_counts();
        (e + 1).saturating_sub(v) as u32
    }
}

/// Rank of the subgroup generated by the given words.
pub fn subgroup_rank(generators: &[Word]) -> Result<u32> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let mut graph = SubgroupGraph::new(first.rank());
    for w in generators {
        graph.add_loop(w)?;
    }
    Ok(graph.subgroup_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn w(rank: u32, s: &str) -> Word {
        Word::parse(s, &Alphabet::default_names(rank)).unwrap()
    }

    #[test]
    fn basis_generators_have_full_rank() {
        assert_eq!(subgroup_rank(&[w(2, "a"), w(2, "b")]).unwrap(), 2);
    }

    #[test]
    fn redundant_generator_is_folded_away() {
        assert_eq!(subgroup_rank(&[w(2, "a"), w(2, "a a")]).unwrap(), 1);
    }

    #[test]
    fn conjugate_generator_counts() {
        // a1 and a2 a1 a2^-1 generate a rank-2 subgroup of F_3
        assert_eq!(subgroup_rank(&[w(3, "a"), w(3, "b a b^-1")]).unwrap(), 2);
    }

    #[test]
    fn empty_generating_set() {
        assert_eq!(subgroup_rank(&[]).unwrap(), 0);
        assert_eq!(subgroup_rank(&[Word::identity(3)]).unwrap(), 0);
    }

    #[test]
    fn rank_is_order_independent() {
        let gens = [w(3, "a b"), w(3, "b c"), w(3, "c a"), w(3, "a b c")];
        let mut perm = gens.to_vec();
        let r0 = subgroup_rank(&perm).unwrap();
        perm.reverse();
        assert_eq!(subgroup_rank(&perm).unwrap(), r0);
    }

    #[test]
    fn membership_after_folding() {
        let mut g = SubgroupGraph::new(2);
        g.add_loop(&w(2, "a a")).unwrap();
        g.add_loop(&w(2, "b")).unwrap();
        assert!(g.contains_loop(&w(2, "a a b")));
        assert!(g.contains_loop(&w(2, "b^-1 a a")));
        assert!(!g.contains_loop(&w(2, "a")));
        assert!(g.is_folded());
    }

    #[test]
    fn index_two_kernel_has_rank_three() {
        assert_eq!(subgroup_rank(&[w(2, "a a"), w(2, "b b"), w(2, "a b")]).unwrap(), 3);
    }
}
