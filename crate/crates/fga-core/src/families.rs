//! Explicit automorphism families with extremal growth behaviour, and the
//! constructor realising any admissible pair `(e, d)` with maximal fixed
//! subgroup rank.

use crate::aut::{Automorphism, NamedAutomorphism};
use crate::invariants;
use crate::lamination::{algebraic_lambda, LaminationNode, LaminationPoset};
use crate::word::{Alphabet, Word};
use crate::{Error, Result};

/// Invariants a construction is expected to realise, carried as metadata for
/// downstream verification; checkers never assume them.
#[derive(Clone, Debug, Default)]
pub struct Expected {
    pub e_prime: Option<u32>,
    pub d: Option<u32>,
    pub fix_rank: Option<u32>,
    /// Known fixed words witnessing the fixed-subgroup rank.
    pub fixed_witnesses: Vec<Word>,
    /// Declared lamination order, for exponential constructions.
    pub poset: Option<LaminationPoset>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub name: String,
    pub named: NamedAutomorphism,
    pub expected: Expected,
}

impl Construction {
    pub fn rank(&self) -> u32 {
        self.named.aut.rank()
    }
}

fn named(names: &[&str], images: &[&str]) -> NamedAutomorphism {
    let alphabet = Alphabet::new(names.iter().map(|s| s.to_string()).collect()).unwrap();
    let images = images
        .iter()
        .map(|s| Word::parse(s, &alphabet).unwrap())
        .collect();
    NamedAutomorphism {
        aut: Automorphism::new(images).expect("family image lists are bases"),
        names: alphabet,
    }
}

/// Trace of the `p`-th power of `(2 1; 1 1)`; its characteristic polynomial
/// `x^2 - trace x + 1` pins the rate of the `p`-fold square automorphism.
fn tau_power_trace(p: u32) -> i64 {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..p {
        m = [
            [2 * m[0][0] + m[0][1], m[0][0] + m[0][1]],
            [2 * m[1][0] + m[1][1], m[1][0] + m[1][1]],
        ];
    }
    m[0][0] + m[1][1]
}

fn tau_rate_lambda(power: u32) -> crate::growth::Lambda {
    algebraic_lambda(&[1, -tau_power_trace(power), 1])
}

fn antichain_poset(lambdas: Vec<crate::growth::Lambda>) -> LaminationPoset {
    let nodes = lambdas
        .into_iter()
        .enumerate()
        .map(|(i, lambda)| LaminationNode {
            label: format!("L{}", i + 1),
            lambda,
        })
        .collect();
    LaminationPoset::new(nodes, vec![]).unwrap()
}

/// The square of the simplest hyperbolic automorphism of `F_2`:
/// `a -> aba`, `b -> ba`. Fixes the commutator `[a, b]`.
pub fn tau() -> Construction {
    let mut named = named(&["a", "b"], &["a b a", "b a"]);
    let inverse = named_inverse_tau();
    named.aut.attach_inverse(inverse).unwrap();
    let commutator = Word::parse("a b a^-1 b^-1", &named.names).unwrap();
    Construction {
        name: "tau".into(),
        expected: Expected {
            e_prime: Some(1),
            d: Some(0),
            fix_rank: Some(1),
            fixed_witnesses: vec![commutator],
            poset: Some(antichain_poset(vec![tau_rate_lambda(1)])),
        },
        named,
    }
}

fn named_inverse_tau() -> Automorphism {
    let names = Alphabet::new(vec!["a".into(), "b".into()]).unwrap();
    Automorphism::new(vec![
        Word::parse("a b^-1", &names).unwrap(),
        Word::parse("b b a^-1", &names).unwrap(),
    ])
    .unwrap()
}

/// `tau` composed with itself `power` times, still on `F_2`.
pub fn tau_power(power: u32) -> Construction {
    assert!(power >= 1);
    let base = tau();
    let aut = base.named.aut.power(power).unwrap();
    let named = NamedAutomorphism {
        aut,
        names: base.named.names.clone(),
    };
    let commutator = Word::parse("a b a^-1 b^-1", &named.names).unwrap();
    Construction {
        name: format!("tau^{power}"),
        expected: Expected {
            e_prime: Some(1),
            d: Some(0),
            fix_rank: Some(1),
            fixed_witnesses: vec![commutator],
            poset: Some(antichain_poset(vec![tau_rate_lambda(power)])),
        },
        named,
    }
}

/// Composite of the two positive twists on `F_2`: `a -> a b`,
/// `b -> b (a b)^k`. Hyperbolic of trace `k + 2`, fixes `[a, b]` exactly.
///
/// These provide arbitrarily many distinct expansion factors that grow only
/// linearly with `k`, so every block stays measurable by direct iteration.
pub fn twist_block(k: u32) -> Construction {
    assert!(k >= 1);
    let names = Alphabet::new(vec!["a".into(), "b".into()]).unwrap();
    // T_a: b -> b a^k (with inverse), T_b: a -> a b
    let ta = {
        let mut images = vec![Word::parse("a", &names).unwrap()];
        let mut b = Word::parse("b", &names).unwrap();
        for _ in 0..k {
            b = b.concat(&Word::parse("a", &names).unwrap()).unwrap();
        }
        images.push(b);
        let mut aut = Automorphism::new(images).unwrap();
        let mut binv = Word::parse("b", &names).unwrap();
        for _ in 0..k {
            binv = binv.concat(&Word::parse("a^-1", &names).unwrap()).unwrap();
        }
        aut.attach_inverse(
            Automorphism::new(vec![Word::parse("a", &names).unwrap(), binv]).unwrap(),
        )
        .unwrap();
        aut
    };
    let tb = {
        let mut aut = Automorphism::new(vec![
            Word::parse("a b", &names).unwrap(),
            Word::parse("b", &names).unwrap(),
        ])
        .unwrap();
        aut.attach_inverse(
            Automorphism::new(vec![
                Word::parse("a b^-1", &names).unwrap(),
                Word::parse("b", &names).unwrap(),
            ])
            .unwrap(),
        )
        .unwrap();
        aut
    };
    let aut = tb.compose(&ta).unwrap();
    let trace = (k + 2) as i64;
    let commutator = Word::parse("a b a^-1 b^-1", &names).unwrap();
    Construction {
        name: format!("twist_block_{k}"),
        expected: Expected {
            e_prime: Some(1),
            d: Some(0),
            fix_rank: Some(1),
            fixed_witnesses: vec![commutator],
            poset: Some(antichain_poset(vec![algebraic_lambda(&[1, -trace, 1])])),
        },
        named: NamedAutomorphism { aut, names },
    }
}

/// The identity on `F_n`.
pub fn identity(n: u32) -> Result<Construction> {
    if n < 1 {
        return Err(Error::BadParameter("identity needs rank >= 1".into()));
    }
    let names = Alphabet::default_names(n);
    let witnesses = (0..n).map(|i| Word::generator(n, i)).collect();
    Ok(Construction {
        name: format!("identity_{n}"),
        named: NamedAutomorphism {
            aut: Automorphism::identity(n),
            names,
        },
        expected: Expected {
            e_prime: Some(0),
            d: Some(0),
            fix_rank: Some(n),
            fixed_witnesses: witnesses,
            poset: None,
        },
    })
}

/// Conjugation by `x`.
pub fn inner(x: &Word) -> Construction {
    Construction {
        name: "inner".into(),
        named: NamedAutomorphism::with_default_names(Automorphism::inner(x)),
        expected: Expected {
            e_prime: Some(0),
            d: Some(0),
            ..Expected::default()
        },
    }
}

/// Unipotent polynomial growth: `a_1 -> a_1`, `a_i -> a_i a_{i-1}`.
/// The class of `a_i` grows with degree `i - 1`.
pub fn alpha_poly(n: u32) -> Result<Construction> {
    if n < 2 {
        return Err(Error::BadParameter("alpha needs rank >= 2".into()));
    }
    let names = Alphabet::new((1..=n).map(|i| format!("a{i}")).collect())?;
    let mut images = vec![Word::generator(n, 0)];
    for i in 1..n {
        images.push(Word::generator(n, i).concat(&Word::generator(n, i - 1))?);
    }
    let mut aut = Automorphism::new(images)?;
    // inverse: v_1 = a_1, v_i = a_i v_{i-1}^-1
    let mut inv_images = vec![Word::generator(n, 0)];
    for i in 1..n {
        let prev: &Word = &inv_images[(i - 1) as usize];
        inv_images.push(Word::generator(n, i as u32).concat(&prev.inverse())?);
    }
    aut.attach_inverse(Automorphism::new(inv_images)?)?;
    let w1 = Word::generator(n, 0);
    let w2 = Word::generator(n, 0).conjugate(&Word::generator(n, 1))?;
    Ok(Construction {
        name: format!("alpha_{n}"),
        named: NamedAutomorphism { aut, names },
        expected: Expected {
            e_prime: Some(0),
            d: Some(n - 1),
            fix_rank: Some(2),
            fixed_witnesses: vec![w1, w2],
            poset: None,
        },
    })
}

/// Polynomial growth with every generator but one sent to a conjugate:
/// on `< a, a_0, .., a_l >`, `a -> a`, `a_0 -> a_0 a`,
/// `a_i -> (a_{i-1} a) a_i (a_{i-1} a)^-1`. The class of `a a_l` grows with
/// degree `l + 1`; with an extra generator `t -> t a_l a`, the class of `t`
/// grows with degree `l + 2`.
pub fn beta(l: u32, with_t: bool) -> Result<Construction> {
    if l < 1 {
        return Err(Error::BadParameter("beta needs l >= 1".into()));
    }
    let rank = l + 2 + with_t as u32;
    let mut name_list: Vec<String> = vec!["a".into()];
    name_list.extend((0..=l).map(|i| format!("a{i}")));
    if with_t {
        name_list.push("t".into());
    }
    let names = Alphabet::new(name_list)?;
    let a = Word::generator(rank, 0);
    let gen = |i: u32| Word::generator(rank, i + 1); // a_i
    let mut images = vec![a.clone(), gen(0).concat(&a)?];
    for i in 1..=l {
        let conj = gen(i - 1).concat(&a)?;
        images.push(gen(i).conjugate(&conj)?);
    }
    if with_t {
        let t = Word::generator(rank, rank - 1);
        images.push(t.concat(&gen(l))?.concat(&a)?);
    }
    let aut = Automorphism::new(images)?;
    // a and a_0 a a_0^-1 are both fixed
    let w2 = a.conjugate(&gen(0))?;
    Ok(Construction {
        name: format!("beta_{l}{}", if with_t { "_t" } else { "" }),
        named: NamedAutomorphism { aut, names },
        expected: Expected {
            e_prime: Some(0),
            d: Some(l + 1 + with_t as u32),
            fix_rank: Some(2),
            fixed_witnesses: vec![a, w2],
            poset: None,
        },
    })
}

/// Nested exponential strata on `F_2l`: `a_1 -> a_1 b_1`, `b_1 -> a_1`,
/// `a_i -> a_i b_i a_{i-1}`, `b_i -> a_i`. The class of `a_l` grows like
/// `p^(l-1) lambda^p` with `lambda` the golden ratio.
pub fn nested(l: u32) -> Result<Construction> {
    if l < 1 {
        return Err(Error::BadParameter("nested needs l >= 1".into()));
    }
    let rank = 2 * l;
    let mut name_list = Vec::new();
    for i in 1..=l {
        name_list.push(format!("a{i}"));
        name_list.push(format!("b{i}"));
    }
    let names = Alphabet::new(name_list)?;
    let a = |i: u32| Word::generator(rank, 2 * (i - 1));
    let b = |i: u32| Word::generator(rank, 2 * (i - 1) + 1);
    let mut images = Vec::new();
    for i in 1..=l {
        let mut ai = a(i).concat(&b(i))?;
        if i > 1 {
            ai = ai.concat(&a(i - 1))?;
        }
        images.push(ai);
        images.push(a(i));
    }
    let aut = Automorphism::new(images)?;
    let golden = algebraic_lambda(&[-1, -1, 1]);
    let nodes = (1..=l)
        .map(|i| LaminationNode {
            label: format!("L{i}"),
            lambda: golden.clone(),
        })
        .collect();
    let edges = (1..l as usize).map(|i| (i - 1, i)).collect();
    let poset = LaminationPoset::new(nodes, edges)?;
    Ok(Construction {
        name: format!("nested_{l}"),
        named: NamedAutomorphism { aut, names },
        expected: Expected {
            e_prime: Some(l),
            d: Some(0),
            fix_rank: None,
            fixed_witnesses: vec![],
            poset: Some(poset),
        },
    })
}

fn theta_names(l: u32, with_t: bool) -> Vec<String> {
    let mut names: Vec<String> = vec!["a".into(), "b".into(), "a0".into()];
    for i in 1..=l {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    if with_t {
        names.push("t".into());
    }
    names
}

/// Core of the mixed-growth family, parameterised by a rank-2 block
/// automorphism per exponential stratum. Every block must fix `[a, b]`
/// exactly (all of `tau`, its powers, and the twist composites do), so the
/// polynomial part restricts to the conjugation tower regardless of rates.
/// Block `i` (0-based; block 0 is the `(a, b)` pair) carries its expansion
/// factor along.
fn theta_with_blocks(
    l: u32,
    with_t: bool,
    blocks: &[(Automorphism, crate::growth::Lambda)],
) -> Result<Construction> {
    assert_eq!(blocks.len() as u32, l + 1);
    let rank = 3 + 2 * l + with_t as u32;
    let names = Alphabet::new(theta_names(l, with_t))?;
    let a = Word::generator(rank, 0);
    let b = Word::generator(rank, 1);
    let a0 = Word::generator(rank, 2);
    let ai = |i: u32| Word::generator(rank, 1 + 2 * i); // i >= 1
    let bi = |i: u32| Word::generator(rank, 2 + 2 * i);
    let u = Word::commutator(&a, &b)?;
    let ui = |i: u32| -> Result<Word> { Word::commutator(&ai(i), &bi(i)) };

    let block = |aut2: &Automorphism, x: &Word, y: &Word| -> Result<(Word, Word)> {
        let subst = |w: &Word| -> Result<Word> {
            let mut acc = Word::identity(rank);
            for letter in w.letters() {
                let base = if letter.index() == 0 { x } else { y };
                let piece = if letter.is_inverse() {
                    base.inverse()
                } else {
                    base.clone()
                };
                acc = acc.concat(&piece)?;
            }
            Ok(acc)
        };
        Ok((subst(aut2.image(0))?, subst(aut2.image(1))?))
    };

    let (ia, ib) = block(&blocks[0].0, &a, &b)?;
    let mut images = vec![ia, ib, a0.concat(&u)?];
    for i in 1..=l {
        let conj = if i == 1 {
            a0.concat(&u)?
        } else {
            ui(i - 1)?.concat(&u)?
        };
        let (x, y) = block(&blocks[i as usize].0, &ai(i), &bi(i))?;
        images.push(x.conjugate(&conj)?);
        images.push(y.conjugate(&conj)?);
    }
    if with_t {
        let t = Word::generator(rank, rank - 1);
        let tail = if l >= 1 { ui(l)?.concat(&u)? } else { a0.concat(&u)? };
        images.push(t.concat(&tail)?);
    }
    let aut = Automorphism::new(images)?;
    let lambdas = blocks.iter().map(|(_, lambda)| lambda.clone()).collect();
    let fix1 = u.clone();
    let fix2 = u.conjugate(&a0)?;
    Ok(Construction {
        name: String::new(),
        named: NamedAutomorphism { aut, names },
        expected: Expected {
            e_prime: None,
            d: None,
            fix_rank: Some(2),
            fixed_witnesses: vec![fix1, fix2],
            poset: Some(antichain_poset(lambdas)),
        },
    })
}

/// Mixed growth on `F_n`: for odd `n = 2l + 3` the invariants satisfy
/// `e = d = l + 1`; for even `n = 2l + 4` a generator `t` is added and
/// `e = n/2 - 1`, `d = n/2`. A single exponential growth type throughout.
pub fn theta(n: u32) -> Result<Construction> {
    if n < 3 {
        return Err(Error::BadParameter("theta needs rank >= 3".into()));
    }
    let with_t = n % 2 == 0;
    let l = (n - 3 - with_t as u32) / 2;
    let tau_block = (tau().named.aut, tau_rate_lambda(1));
    let blocks = vec![tau_block; l as usize + 1];
    let mut c = theta_with_blocks(l, with_t, &blocks)?;
    c.name = format!("theta_{n}");
    c.expected.e_prime = Some(1);
    c.expected.d = Some(if with_t { n / 2 } else { l + 1 });
    Ok(c)
}

/// Variant of `theta` with distinct rates per exponential block: block `i`
/// uses the `(i+1)`-st power, so the rates are `lambda, lambda^2, ...`.
pub fn theta_varied(n: u32) -> Result<Construction> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadParameter(
            "varied theta is defined for odd rank >= 3".into(),
        ));
    }
    let l = (n - 3) / 2;
    let tau_aut = tau().named.aut;
    let blocks: Vec<(Automorphism, crate::growth::Lambda)> = (1..=l + 1)
        .map(|p| Ok((tau_aut.power(p)?, tau_rate_lambda(p))))
        .collect::<Result<Vec<_>>>()?;
    let mut c = theta_with_blocks(l, false, &blocks)?;
    c.name = format!("theta_varied_{n}");
    c.expected.e_prime = Some(l + 1);
    c.expected.d = Some(l + 1);
    Ok(c)
}

/// Free product of two constructions, second factor's generators renamed on
/// collision.
pub fn free_product(left: &Construction, right: &Construction, name: String) -> Construction {
    let aut = left.named.aut.free_product(&right.named.aut);
    let mut names: Vec<String> = left.named.names.names().to_vec();
    for n in right.named.names.names() {
        let mut candidate = n.clone();
        let mut suffix = 2;
        while names.contains(&candidate) {
            candidate = format!("{n}{suffix}");
            suffix += 1;
        }
        names.push(candidate);
    }
    let alphabet = Alphabet::new(names).unwrap();
    let shift = left.rank();
    let rank = aut.rank();
    let lift_left = |w: &Word| Word::reduce(w.letters(), rank).unwrap();
    let lift_right = |w: &Word| {
        let letters: Vec<_> = w
            .letters()
            .iter()
            .map(|l| crate::word::Letter::new(l.index() + shift, l.is_inverse()))
            .collect();
        Word::reduce(&letters, rank).unwrap()
    };
    let mut witnesses: Vec<Word> = left.expected.fixed_witnesses.iter().map(&lift_left).collect();
    witnesses.extend(right.expected.fixed_witnesses.iter().map(&lift_right));
    let fix_rank = match (left.expected.fix_rank, right.expected.fix_rank) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let d = match (left.expected.d, right.expected.d) {
        (Some(a), Some(b)) => Some(a.max(b)),
        _ => None,
    };
    let poset = merge_antichains(left.expected.poset.as_ref(), right.expected.poset.as_ref());
    let e_prime = poset.as_ref().map(|p| {
        p.report(1e-6).map(|r| r.e_prime as u32).unwrap_or(0)
    });
    Construction {
        name,
        named: NamedAutomorphism {
            aut,
            names: alphabet,
        },
        expected: Expected {
            e_prime,
            d,
            fix_rank,
            fixed_witnesses: witnesses,
            poset,
        },
    }
}

fn merge_antichains(
    left: Option<&LaminationPoset>,
    right: Option<&LaminationPoset>,
) -> Option<LaminationPoset> {
    let mut lambdas = Vec::new();
    for p in [left, right].into_iter().flatten() {
        if !p.edges().is_empty() {
            // only flat posets merge trivially under free products here
            return None;
        }
        lambdas.extend(p.nodes().iter().map(|n| n.lambda.clone()));
    }
    match (left, right) {
        (None, None) => None,
        _ => Some(antichain_poset(lambdas)),
    }
}

/// Realisation of an admissible `(e, d)` with the maximal fixed-subgroup
/// rank permitted by the inequalities, using distinct rates per exponential
/// block so the measured type count matches `e`.
#[derive(Clone, Debug)]
pub struct OptimalSolution {
    pub w: u32,
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub rho0: u32,
}

pub struct OptimalConstruction {
    pub construction: Construction,
    pub solution: Option<OptimalSolution>,
}

pub fn construct_optimal(n: u32, e: u32, d: u32) -> Result<OptimalConstruction> {
    if !invariants::ed_admissible(n, e, d) {
        return Err(Error::Inadmissible { n, e, d });
    }
    let rho0 = invariants::max_fixed_rank(n, e, d)?;

    if e == 0 && d == 0 {
        let mut c = identity(n)?;
        c.name = format!("optimal_n{n}_e0_d0");
        return Ok(OptimalConstruction {
            construction: c,
            solution: None,
        });
    }

    if e == 0 {
        // alpha_{d+1} * identity
        let mut c = alpha_poly(d + 1)?;
        if n > d + 1 {
            c = free_product(&c, &identity(n - d - 1)?, String::new());
        }
        c.name = format!("optimal_n{n}_e{e}_d{d}");
        c.expected.e_prime = Some(0);
        c.expected.d = Some(d);
        return Ok(OptimalConstruction {
            construction: c,
            solution: None,
        });
    }

    if d == 0 {
        if 2 * e > n {
            return Err(Error::UnsupportedRegion { n, e, d });
        }
        // identity block, then one rank-2 block per rate; distinct traces
        // keep every rate small enough to measure
        let mut c: Option<Construction> = if n > 2 * e {
            Some(identity(n - 2 * e)?)
        } else {
            None
        };
        for k in 1..=e {
            let block = twist_block(k);
            c = Some(match c {
                Some(acc) => free_product(&acc, &block, String::new()),
                None => block,
            });
        }
        let mut c = c.unwrap();
        c.name = format!("optimal_n{n}_e{e}_d0");
        c.expected.d = Some(0);
        c.expected.e_prime = Some(e);
        return Ok(OptimalConstruction {
            construction: c,
            solution: None,
        });
    }

    // e >= 1 and d >= 1
    if 2 * e > n - 1 {
        return Err(Error::UnsupportedRegion { n, e, d });
    }
    // rho0 = n - e - d + 1 in this region; solve for the block sizes
    let w = (e + 1).saturating_sub(rho0);
    let x = d - w - 1;
    let y = rho0 + w - e - 1;
    let z = e - w - 1;
    debug_assert_eq!(2 * w + 3 + x + y + 2 * z, n);

    // theta tower with one distinct-trace block per stratum
    let blocks: Vec<(Automorphism, crate::growth::Lambda)> = (1..=w + 1)
        .map(|k| {
            let b = twist_block(k);
            let lambda = b.expected.poset.as_ref().unwrap().nodes()[0].lambda.clone();
            (b.named.aut, lambda)
        })
        .collect();
    let mut c = theta_with_blocks(w, false, &blocks)?;
    // x chained twist generators on top of the polynomial part
    for i in 0..x {
        let rank = c.rank();
        let tail = if i == 0 {
            let a = Word::generator(rank, 0);
            let b = Word::generator(rank, 1);
            let u = Word::commutator(&a, &b)?;
            if w >= 1 {
                let al = Word::generator(rank, 1 + 2 * w);
                let bl = Word::generator(rank, 2 + 2 * w);
                Word::commutator(&al, &bl)?.concat(&u)?
            } else {
                Word::generator(rank, 2).concat(&u)?
            }
        } else {
            Word::generator(rank, rank - 1)
        };
        let aut = c.named.aut.adjoin_twist(&tail)?;
        let mut names = c.named.names.names().to_vec();
        names.push(format!("t{}", i + 1));
        c = Construction {
            name: String::new(),
            named: NamedAutomorphism {
                aut,
                names: Alphabet::new(names)?,
            },
            expected: c.expected.clone(),
        };
        // witnesses survive the extension unchanged (lifted by rank)
        c.expected.fixed_witnesses = c
            .expected
            .fixed_witnesses
            .iter()
            .map(|word| Word::reduce(word.letters(), c.rank()).unwrap())
            .collect();
    }
    if y > 0 {
        c = free_product(&c, &identity(y)?, String::new());
    }
    for k in 1..=z {
        c = free_product(&c, &twist_block(w + 1 + k), String::new());
    }
    c.name = format!("optimal_n{n}_e{e}_d{d}");
    c.expected.e_prime = Some(e);
    c.expected.d = Some(d);
    c.expected.fix_rank = Some(rho0);
    if c.rank() != n {
        return Err(Error::BadParameter(format!(
            "internal: built rank {} instead of {n}",
            c.rank()
        )));
    }
    Ok(OptimalConstruction {
        construction: c,
        solution: Some(OptimalSolution { w, x, y, z, rho0 }),
    })
}

/// Family identifiers understood by the construct command.
pub fn build(family: &str, n: Option<u32>, l: Option<u32>, e: Option<u32>, d: Option<u32>, with_t: bool) -> Result<Construction> {
    let need_n = || n.ok_or_else(|| Error::BadParameter("family needs --n".into()));
    let need_l = || l.ok_or_else(|| Error::BadParameter("family needs --l".into()));
    match family {
        "tau" => Ok(tau()),
        "identity" => identity(need_n()?),
        "alpha" | "alpha_poly" => alpha_poly(need_n()?),
        "beta" => beta(need_l()?, with_t),
        "nested" => nested(need_l()?),
        "theta" => theta(need_n()?),
        "theta-varied" | "theta_varied" => theta_varied(need_n()?),
        "optimal" => {
            let n = need_n()?;
            let e = e.ok_or_else(|| Error::BadParameter("optimal needs --e".into()))?;
            let d = d.ok_or_else(|| Error::BadParameter("optimal needs --d".into()))?;
            Ok(construct_optimal(n, e, d)?.construction)
        }
        other => Err(Error::BadParameter(format!("unknown family {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_fixes_commutator_and_matrix() {
        let c = tau();
        let t = &c.named.aut;
        let comm = &c.expected.fixed_witnesses[0];
        assert_eq!(&t.apply(comm).unwrap(), comm);
        let m = crate::matrix::transition_matrix(t);
        assert_eq!(
            m,
            crate::matrix::TransitionMatrix::from_rows(vec![vec![2, 1], vec![1, 1]])
        );
    }

    #[test]
    fn alpha_images_and_fixed_witnesses() {
        let c = alpha_poly(3).unwrap();
        let aut = &c.named.aut;
        assert_eq!(aut.image(0).display(&c.named.names), "a1");
        assert_eq!(aut.image(2).display(&c.named.names), "a3 a2");
        for w in &c.expected.fixed_witnesses {
            assert_eq!(&aut.apply(w).unwrap(), w);
        }
        assert!(aut.inverse().is_some());
    }

    #[test]
    fn alpha_n2_specialisation() {
        let c = alpha_poly(2).unwrap();
        assert_eq!(c.named.aut.image(1).display(&c.named.names), "a2 a1");
        assert_eq!(c.expected.d, Some(1));
    }

    #[test]
    fn beta_images_match_conjugation_pattern() {
        let c = beta(1, false).unwrap();
        let names = &c.named.names;
        assert_eq!(c.named.aut.image(1).display(names), "a0 a");
        assert_eq!(
            c.named.aut.image(2).display(names),
            "a0 a a1 a^-1 a0^-1"
        );
        // beta fixes a and a0 a a0^-1
        for w in &c.expected.fixed_witnesses {
            assert_eq!(&c.named.aut.apply(w).unwrap(), w);
        }
    }

    #[test]
    fn beta_with_t_has_expected_last_image() {
        let c = beta(2, true).unwrap();
        let names = &c.named.names;
        assert_eq!(c.named.aut.image(c.rank() - 1).display(names), "t a2 a");
    }

    #[test]
    fn nested_images() {
        let c = nested(2).unwrap();
        let names = &c.named.names;
        assert_eq!(c.named.aut.image(0).display(names), "a1 b1");
        assert_eq!(c.named.aut.image(1).display(names), "a1");
        assert_eq!(c.named.aut.image(2).display(names), "a2 b2 a1");
        assert_eq!(c.named.aut.image(3).display(names), "a2");
        let poset = c.expected.poset.as_ref().unwrap();
        assert_eq!(poset.nodes().len(), 2);
        assert_eq!(poset.edges(), &[(0, 1)]);
    }

    #[test]
    fn theta_small_cases() {
        let c3 = theta(3).unwrap();
        let names = &c3.named.names;
        assert_eq!(c3.named.aut.image(0).display(names), "a b a");
        assert_eq!(c3.named.aut.image(2).display(names), "a0 a b a^-1 b^-1");
        assert_eq!(c3.expected.d, Some(1));

        let c5 = theta(5).unwrap();
        assert_eq!(c5.rank(), 5);
        assert_eq!(c5.expected.d, Some(2));
        // a1 -> (a0 u) a1 b1 a1 (a0 u)^-1 with u = a b a^-1 b^-1
        let names5 = &c5.named.names;
        assert_eq!(
            c5.named.aut.image(3).display(names5),
            "a0 a b a^-1 b^-1 a1 b1 a1 b a b^-1 a^-1 a0^-1"
        );
        // theta fixes u and a0 u a0^-1
        for w in &c5.expected.fixed_witnesses {
            assert_eq!(&c5.named.aut.apply(w).unwrap(), w);
        }

        let c6 = theta(6).unwrap();
        assert_eq!(c6.rank(), 6);
        assert_eq!(c6.expected.d, Some(3));
        let names6 = &c6.named.names;
        assert_eq!(
            c6.named.aut.image(5).display(names6),
            "t a1 b1 a1^-1 b1^-1 a b a^-1 b^-1"
        );
    }

    #[test]
    fn theta_varied_rates_are_distinct() {
        let c = theta_varied(5).unwrap();
        let poset = c.expected.poset.as_ref().unwrap();
        let r = poset.report(1e-6).unwrap();
        assert_eq!(r.e_prime, 2);
        // rates lambda and lambda^2
        let l1 = poset.nodes()[0].lambda.approx;
        let l2 = poset.nodes()[1].lambda.approx;
        assert!((l2 - l1 * l1).abs() < 1e-9);
    }

    #[test]
    fn theta_even_rank_four_uses_a0() {
        let c = theta(4).unwrap();
        let names = &c.named.names;
        assert_eq!(
            c.named.aut.image(3).display(names),
            "t a0 a b a^-1 b^-1"
        );
    }

    #[test]
    fn free_product_merges_names_and_witnesses() {
        let p = free_product(&tau(), &tau(), "tt".into());
        assert_eq!(p.rank(), 4);
        assert_eq!(p.named.names.names(), &["a", "b", "a2", "b2"]);
        assert_eq!(p.expected.fix_rank, Some(2));
        assert_eq!(p.expected.fixed_witnesses.len(), 2);
        for w in &p.expected.fixed_witnesses {
            assert_eq!(&p.named.aut.apply(w).unwrap(), w);
        }
    }

    #[test]
    fn optimal_example_point() {
        let oc = construct_optimal(5, 1, 1).unwrap();
        let s = oc.solution.unwrap();
        assert_eq!((s.w, s.x, s.y, s.z), (0, 0, 2, 0));
        assert_eq!(s.rho0, 4);
        assert_eq!(oc.construction.rank(), 5);
    }

    #[test]
    fn optimal_pure_exponential_point() {
        let oc = construct_optimal(4, 2, 0).unwrap();
        assert_eq!(oc.construction.rank(), 4);
        assert_eq!(oc.construction.expected.fix_rank, Some(2));
        assert_eq!(oc.construction.expected.e_prime, Some(2));
    }

    #[test]
    fn optimal_unsupported_region() {
        assert!(matches!(
            construct_optimal(6, 4, 0),
            Err(Error::UnsupportedRegion { .. })
        ));
        assert!(matches!(
            construct_optimal(7, 4, 1),
            Err(Error::UnsupportedRegion { .. })
        ));
    }

    #[test]
    fn optimal_rejects_inadmissible() {
        assert!(matches!(
            construct_optimal(2, 1, 1),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn optimal_solver_equations_hold_everywhere() {
        for n in 2..=9u32 {
            for e in 0..=n {
                for d in 0..=n {
                    if !invariants::ed_admissible(n, e, d) {
                        continue;
                    }
                    match construct_optimal(n, e, d) {
                        Ok(oc) => {
                            assert_eq!(oc.construction.rank(), n, "rank at ({n},{e},{d})");
                            if let Some(s) = oc.solution {
                                let rho0 = invariants::max_fixed_rank(n, e, d).unwrap();
                                assert_eq!(s.w + 1 + s.x, d);
                                assert_eq!(s.w + 1 + s.z, e);
                                assert_eq!(2 + s.y + s.z, rho0);
                                assert_eq!(2 * s.w + 3 + s.x + s.y + 2 * s.z, n);
                            }
                        }
                        Err(Error::UnsupportedRegion { .. }) => {
                            // the region gate must match the coverage rule
                            assert!(
                                (d == 0 && 2 * e > n) || (d >= 1 && 2 * e > n - 1),
                                "unexpected gate at ({n},{e},{d})"
                            );
                        }
                        Err(err) => panic!("unexpected error at ({n},{e},{d}): {err}"),
                    }
                }
            }
        }
    }

    #[test]
    fn every_family_is_a_valid_basis_image() {
        // construction succeeds only when the determinant check passes
        tau();
        tau_power(3);
        identity(4).unwrap();
        alpha_poly(5).unwrap();
        beta(3, true).unwrap();
        nested(3).unwrap();
        theta(7).unwrap();
        theta_varied(7).unwrap();
        construct_optimal(8, 2, 3).unwrap();
    }
}
