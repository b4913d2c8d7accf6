//! Automorphisms of a free group, given by the images of the generators.

use crate::word::{cyclic_strip, push_reduced, Alphabet, CyclicWord, Letter, Word};
use crate::{Error, Result};

/// A rank-`n` endomorphism presented by generator images, freely reduced.
///
/// Construction checks the necessary condition that the abelianized matrix has
/// determinant +/-1. When an inverse is attached, `compose` with it fixing
/// every generator is a sufficient certificate of invertibility; inverses are
/// never computed automatically.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    rank: u32,
    images: Vec<Word>,
    inverse: Option<Box<Automorphism>>,
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = Alphabet::default_names(self.rank);
        writeln!(f, "rank {}", self.rank)?;
        for (i, w) in self.images.iter().enumerate() {
            writeln!(f, "{} -> {}", names.name(i as u32), w.display(&names))?;
        }
        Ok(())
    }
}

impl Automorphism {
    pub fn new(images: Vec<Word>) -> Result<Automorphism> {
        let rank = images.len() as u32;
        for w in &images {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
        }
        let a = Automorphism {
            rank,
            images,
            inverse: None,
        };
        let det = a.abelianized_determinant();
        if det != 1 && det != -1 {
            return Err(Error::NotAnAutomorphism { det });
        }
        Ok(a)
    }

    pub fn identity(rank: u32) -> Automorphism {
        let images = (0..rank).map(|i| Word::generator(rank, i)).collect();
        let mut a = Automorphism {
            rank,
            images,
            inverse: None,
        };
        a.inverse = Some(Box::new(a.clone()));
        a
    }

    /// The inner automorphism `g -> x g x^-1`.
    pub fn inner(x: &Word) -> Automorphism {
        let rank = x.rank();
        let images = (0..rank)
            .map(|i| Word::generator(rank, i).conjugate(x).unwrap())
            .collect();
        let mut a = Automorphism {
            rank,
            images,
            inverse: None,
        };
        let xi = x.inverse();
        let inv_images = (0..rank)
            .map(|i| Word::generator(rank, i).conjugate(&xi).unwrap())
            .collect();
        a.inverse = Some(Box::new(Automorphism {
            rank,
            images: inv_images,
            inverse: None,
        }));
        a
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn image(&self, index: u32) -> &Word {
        &self.images[index as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse(&self) -> Option<&Automorphism> {
        self.inverse.as_deref()
    }

    pub fn attach_inverse(&mut self, inv: Automorphism) -> Result<()> {
        if inv.rank != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: inv.rank,
            });
        }
        let comp = self.compose(&inv)?;
        if !comp.is_identity() {
            return Err(Error::BadParameter(
                "attached inverse does not compose to the identity".into(),
            ));
        }
        self.inverse = Some(Box::new(inv));
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::positive(i as u32)])
    }

    /// Longest generator image.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Append the image of one letter to a reduction stack.
    #[inline]
    pub(crate) fn push_letter_image(&self, l: Letter, dst: &mut Vec<Letter>) {
        let img = &self.images[l.index() as usize];
        if l.is_inverse() {
            for x in img.letters().iter().rev() {
                push_reduced(dst, x.inverse());
            }
        } else {
            for &x in img.letters() {
                push_reduced(dst, x);
            }
        }
    }

    /// Image of a letter sequence, reduced into `dst`. Returns `false` when the
    /// intermediate result exceeds `cap` letters.
    pub(crate) fn apply_into(&self, src: &[Letter], dst: &mut Vec<Letter>, cap: usize) -> bool {
        dst.clear();
        for &l in src {
            self.push_letter_image(l, dst);
            if dst.len() > cap {
                return false;
            }
        }
        true
    }

    /// Homomorphic image of a reduced word, freely reduced.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        let mut out = Vec::new();
        self.apply_into(w.letters(), &mut out, usize::MAX);
        Ok(Word::from_reduced(out, self.rank))
    }

    /// Image of a conjugacy class: apply, then reduce cyclically.
    pub fn apply_class(&self, c: &CyclicWord) -> Result<CyclicWord> {
        if c.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: c.rank(),
            });
        }
        let mut out = Vec::new();
        self.apply_into(c.letters(), &mut out, usize::MAX);
        cyclic_strip(&mut out);
        Ok(CyclicWord::from_cyclically_reduced(out, self.rank))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(a), Some(b)) => Some(Box::new(b.compose_plain(a)?)),
            _ => None,
        };
        Ok(Automorphism {
            rank: self.rank,
            images,
            inverse,
        })
    }

    fn compose_plain(&self, other: &Automorphism) -> Result<Automorphism> {
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Automorphism {
            rank: self.rank,
            images,
            inverse: None,
        })
    }

    /// `self` composed with itself `q` times (`q >= 1`).
    pub fn power(&self, q: u32) -> Result<Automorphism> {
        assert!(q >= 1, "power must be positive");
        let mut acc = self.clone();
        for _ in 1..q {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn abelianized_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank as usize;
        let mut m = vec![vec![0i64; n]; n];
        for (j, w) in self.images.iter().enumerate() {
            for (i, v) in w.abelianization().into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        m
    }

    fn abelianized_determinant(&self) -> i64 {
        det_i128(&self.abelianized_matrix())
    }

    /// Free product: `self` on the first block of generators, `other` shifted.
    pub fn free_product(&self, other: &Automorphism) -> Automorphism {
        let rank = self.rank + other.rank;
        let shift = |w: &Word, by: u32| -> Word {
            let letters = w
                .letters()
                .iter()
                .map(|l| Letter::new(l.index() + by, l.is_inverse()))
                .collect();
            Word::from_reduced(letters, rank)
        };
        let mut images: Vec<Word> = self.images.iter().map(|w| shift(w, 0)).collect();
        images.extend(other.images.iter().map(|w| shift(w, self.rank)));
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(a), Some(b)) => Some(Box::new(a.free_product_plain(b))),
            _ => None,
        };
        Automorphism {
            rank,
            images,
            inverse,
        }
    }

    fn free_product_plain(&self, other: &Automorphism) -> Automorphism {
        let mut a = self.clone();
        a.inverse = None;
        let mut b = other.clone();
        b.inverse = None;
        a.free_product(&b)
    }

    /// Adjoin a generator `t` with `t -> t w`, `w` in the old factor.
    pub fn adjoin_twist(&self, w: &Word) -> Result<Automorphism> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        let rank = self.rank + 1;
        let lift = |v: &Word| {
            Word::from_reduced(v.letters().to_vec(), rank)
        };
        let mut images: Vec<Word> = self.images.iter().map(lift).collect();
        let t = Word::generator(rank, rank - 1);
        images.push(t.concat(&lift(w))?);
        Ok(Automorphism {
            rank,
            images,
            inverse: None,
        })
    }
}

fn det_i128(m: &[Vec<i64>]) -> i64 {
    // fraction-free Gaussian elimination (Bareiss)
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// An automorphism together with its printable generator names.
#[derive(Clone, Debug)]
pub struct NamedAutomorphism {
    pub aut: Automorphism,
    pub names: Alphabet,
}

impl NamedAutomorphism {
    pub fn new(aut: Automorphism, names: Alphabet) -> Result<Self> {
        if names.rank() != aut.rank() {
            return Err(Error::RankMismatch {
                left: aut.rank(),
                right: names.rank(),
            });
        }
        Ok(NamedAutomorphism { aut, names })
    }

    pub fn with_default_names(aut: Automorphism) -> Self {
        let names = Alphabet::default_names(aut.rank());
        NamedAutomorphism { aut, names }
    }

    /// Line-oriented text format: `rank n`, optional `names ...`, then one
    /// `g -> image` line per generator.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let rank: u32 = header
            .strip_prefix("rank")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `rank <n>`, got {header:?}")))?;
        if rank == 0 {
            return Err(Error::Parse("rank must be at least 1".into()));
        }
        let mut rest: Vec<&str> = lines.collect();
        let names = if let Some(first) = rest.first() {
            if let Some(ns) = first.strip_prefix("names") {
                let names: Vec<String> = ns.split_whitespace().map(String::from).collect();
                if names.len() != rank as usize {
                    return Err(Error::Parse(format!(
                        "expected {rank} names, got {}",
                        names.len()
                    )));
                }
                rest.remove(0);
                Alphabet::new(names)?
            } else {
                Alphabet::default_names(rank)
            }
        } else {
            Alphabet::default_names(rank)
        };
        let mut images: Vec<Option<Word>> = vec![None; rank as usize];
        for line in rest {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `g -> word`, got {line:?}")))?;
            let g = names
                .index_of(lhs.trim())
                .ok_or_else(|| Error::Parse(format!("unknown generator {:?}", lhs.trim())))?;
            if images[g as usize].is_some() {
                return Err(Error::Parse(format!(
                    "duplicate image for {}",
                    names.name(g)
                )));
            }
            images[g as usize] = Some(Word::parse(rhs, &names)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::Parse(format!("missing image for {}", names.name(i as u32)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(NamedAutomorphism {
            aut: Automorphism::new(images)?,
            names,
        })
    }

    pub fn print(&self) -> String {
        let mut out = format!("rank {}\n", self.aut.rank());
        out.push_str(&format!("names {}\n", self.names.names().join(" ")));
        for i in 0..self.aut.rank() {
            out.push_str(&format!(
                "{} -> {}\n",
                self.names.name(i),
                self.aut.image(i).display(&self.names)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn tau() -> Automorphism {
        families::tau().named.aut
    }

    #[test]
    fn tau_images() {
        let names = Alphabet::default_names(2);
        let t = tau();
        assert_eq!(t.image(0).display(&names), "a b a");
        assert_eq!(t.image(1).display(&names), "b a");
    }

    #[test]
    fn tau_fixes_commutator() {
        let names = Alphabet::default_names(2);
        let c = Word::parse("a b a^-1 b^-1", &names).unwrap();
        assert_eq!(tau().apply(&c).unwrap(), c);
    }

    #[test]
    fn identity_fixes_everything() {
        let id = Automorphism::identity(3);
        let names = Alphabet::default_names(3);
        let w = Word::parse("a b c^-1 a", &names).unwrap();
        assert_eq!(id.apply(&w).unwrap(), w);
    }

    #[test]
    fn compose_tau_tau() {
        let t = tau();
        let tt = t.compose(&t).unwrap();
        // direct substitution oracle: tau(tau(a)) = tau(aba)
        let oracle = t.apply(t.image(0)).unwrap();
        assert_eq!(tt.image(0), &oracle);
        assert_eq!(tt.image(0).len(), 8);
    }

    #[test]
    fn compose_with_identity() {
        let t = tau();
        let id = Automorphism::identity(2);
        assert_eq!(id.compose(&t).unwrap().images(), t.images());
        assert_eq!(t.compose(&id).unwrap().images(), t.images());
    }

    #[test]
    fn shipped_inverse_composes_to_identity() {
        let t = tau();
        let inv = t.inverse().expect("tau ships an inverse");
        assert!(t.compose(inv).unwrap().is_identity());
        assert!(inv.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let t = tau();
        let w = Word::generator(3, 2);
        assert!(matches!(t.apply(&w), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn determinant_check_rejects_non_bases() {
        // a -> a b, b -> a b is not injective on abelianization
        let names = Alphabet::default_names(2);
        let ab = Word::parse("a b", &names).unwrap();
        assert!(matches!(
            Automorphism::new(vec![ab.clone(), ab]),
            Err(Error::NotAnAutomorphism { det: 0 })
        ));
    }

    #[test]
    fn file_format_round_trip() {
        let t = families::theta(5).unwrap().named;
        let printed = t.print();
        let reparsed = NamedAutomorphism::parse(&printed).unwrap();
        assert_eq!(reparsed.aut.images(), t.aut.images());
        assert_eq!(reparsed.print(), printed);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(NamedAutomorphism::parse("").is_err());
        assert!(NamedAutomorphism::parse("rank 2\na -> a b\n").is_err()); // missing image
        assert!(NamedAutomorphism::parse("rank 2\na -> a z\nb -> b\n").is_err());
    }

    #[test]
    fn free_product_blocks_do_not_interact() {
        let t = tau();
        let prod = t.free_product(&Automorphism::identity(1));
        assert_eq!(prod.rank(), 3);
        assert_eq!(prod.image(2).letters(), [Letter::positive(2)]);
        let names = Alphabet::default_names(3);
        assert_eq!(prod.image(0).display(&names), "a b a");
    }

    #[test]
    fn adjoin_twist_adds_one_generator() {
        let t = tau();
        let w = Word::parse("a b", &Alphabet::default_names(2)).unwrap();
        let ext = t.adjoin_twist(&w).unwrap();
        assert_eq!(ext.rank(), 3);
        let names = Alphabet::default_names(3);
        assert_eq!(ext.image(2).display(&names), "c a b");
    }
}
