//! Integer polynomials, real root isolation, and minimal linear recurrences.
//!
//! This backs the exact branch of the growth classifier: a length sequence
//! that satisfies an integer linear recurrence is classified through the
//! dominant real root of the recurrence's characteristic polynomial, located
//! by Sturm bisection, with its multiplicity read off the gcd chain.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Dense integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Divide by the gcd of the coefficients; make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::gcd(g, c.clone());
        }
        if self.coeffs.last().unwrap().sign() == Sign::Minus {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divide by the positive gcd of the coefficients, preserving signs.
    fn primitive_keep_sign(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::gcd(g, c.clone());
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Sign of `p(x)` at a rational point, computed exactly.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        // p(a/b) * b^deg = sum c_i a^i b^(deg-i)
        let a = x.numer();
        let b = x.denom();
        let deg = self.coeffs.len() - 1;
        let mut acc = BigInt::zero();
        let mut apow = BigInt::one();
        let mut bpows = vec![BigInt::one(); deg + 1];
        for i in 1..=deg {
            bpows[i] = &bpows[i - 1] * b;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &apow * &bpows[deg - i];
            apow *= a;
        }
        // b > 0 for canonical rationals, even powers irrelevant
        match acc.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Cauchy bound: every real root lies in `[-B, B]`.
    pub fn root_bound(&self) -> f64 {
        if self.coeffs.len() <= 1 {
            return 1.0;
        }
        let lead = self.coeffs.last().unwrap().to_f64().unwrap_or(1.0).abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.to_f64().unwrap_or(0.0).abs())
            .fold(0.0f64, f64::max);
        1.0 + m / lead
    }

    fn to_rat(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    fn from_rat(v: &[BigRational]) -> IntPoly {
        // clear denominators
        let mut lcm = BigInt::one();
        for c in v {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        IntPoly::new(v.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect())
    }
}

fn rat_trim(v: &mut Vec<BigRational>) {
    while v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
}

/// Remainder of polynomial division over the rationals.
fn rat_rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r = num.to_vec();
    rat_trim(&mut r);
    let d = den.len() - 1;
    let lead = &den[d];
    while r.len() > d {
        let k = r.len() - 1;
        let q = &r[k] / lead;
        for i in 0..=d {
            let t = &q * &den[i];
            r[k - d + i] -= t;
        }
        // the top coefficient vanishes exactly
        r.pop();
        rat_trim(&mut r);
    }
    r
}

/// Primitive gcd of two integer polynomials (Euclid over the rationals).
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let mut f = a.to_rat();
    let mut g = b.to_rat();
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let r = rat_rem(&f, &g);
        f = g;
        g = r;
    }
    IntPoly::from_rat(&f).primitive()
}

/// Sturm chain for exact root counting.
pub struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Sturm {
        // rescaling chain members is only sound by positive constants
        let mut chain = vec![
            p.primitive_keep_sign(),
            p.derivative().primitive_keep_sign(),
        ];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = rat_rem(&chain[k - 2].to_rat(), &chain[k - 1].to_rat());
            if r.is_empty() {
                break;
            }
            let next = IntPoly::from_rat(&r).primitive_keep_sign();
            chain.push(IntPoly::new(next.coeffs.iter().map(|c| -c).collect()));
        }
        Sturm { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }
}

/// A real algebraic number: the unique root of `poly` in `(lo, hi]`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    pub poly: IntPoly,
    pub lo: BigRational,
    pub hi: BigRational,
    pub approx: f64,
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

impl AlgebraicReal {
    /// Shrink the isolating interval to at most `width` (absolute).
    pub fn refine(&mut self, sturm: &Sturm, width: f64) {
        for _ in 0..200 {
            let lo = self.lo.to_f64().unwrap_or(self.approx);
            let hi = self.hi.to_f64().unwrap_or(self.approx);
            if hi - lo <= width {
                break;
            }
            let mid = rational_from_f64((lo + hi) / 2.0);
            if mid <= self.lo || mid >= self.hi {
                break;
            }
            if sturm.count_in(&mid, &self.hi) >= 1 {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
        self.approx =
            (self.lo.to_f64().unwrap_or(self.approx) + self.hi.to_f64().unwrap_or(self.approx)) / 2.0;
    }
}

/// Largest real root of an integer polynomial, isolated to relative width `1e-13`.
pub fn largest_real_root(p: &IntPoly) -> Option<AlgebraicReal> {
    let p = p.primitive();
    p.degree()?;
    if p.degree() == Some(0) {
        return None;
    }
    let sturm = Sturm::new(&p);
    let bound = p.root_bound() + 1.0;
    let mut lo = rational_from_f64(-bound);
    let hi_outer = rational_from_f64(bound);
    if sturm.count_in(&lo, &hi_outer) == 0 {
        return None;
    }
    let mut hi = hi_outer.clone();
    // invariant: the largest root lies in (lo, hi]
    for _ in 0..220 {
        let lof = lo.to_f64().unwrap_or(0.0);
        let hif = hi.to_f64().unwrap_or(0.0);
        let scale = lof.abs().max(hif.abs()).max(1.0);
        if hif - lof <= 1e-13 * scale && sturm.count_in(&lo, &hi) == 1 {
            break;
        }
        let mid = rational_from_f64((lof + hif) / 2.0);
        if &mid <= &lo || &mid >= &hi {
            break;
        }
        if sturm.count_in(&mid, &hi_outer) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let approx = (lo.to_f64().unwrap_or(0.0) + hi.to_f64().unwrap_or(0.0)) / 2.0;
    let mut root = AlgebraicReal {
        poly: p,
        lo,
        hi,
        approx,
    };
    let width = 1e-13 * approx.abs().max(1.0);
    root.refine(&sturm, width);
    Some(root)
}

/// Multiplicity of an isolated root, via the derivative gcd chain.
pub fn multiplicity(p: &IntPoly, root: &AlgebraicReal) -> usize {
    let mut c = p.primitive();
    let mut count = 0;
    loop {
        if c.degree().map_or(true, |d| d == 0) {
            break;
        }
        let sturm = Sturm::new(&c);
        if sturm.count_in(&root.lo, &root.hi) == 0 {
            break;
        }
        count += 1;
        c = poly_gcd(&c, &c.derivative());
    }
    count
}

/// Exact equality of two algebraic reals.
pub fn algebraic_eq(a: &AlgebraicReal, b: &AlgebraicReal) -> bool {
    if (a.approx - b.approx).abs() > 1e-6 * a.approx.abs().max(b.approx.abs()).max(1.0) {
        return false;
    }
    let g = poly_gcd(&a.poly, &b.poly);
    if g.degree().map_or(true, |d| d == 0) {
        return false;
    }
    let mut ar = a.clone();
    let mut br = b.clone();
    let sa = Sturm::new(&ar.poly);
    let sb = Sturm::new(&br.poly);
    let sg = Sturm::new(&g);
    for _ in 0..80 {
        let lo = if ar.lo >= br.lo { ar.lo.clone() } else { br.lo.clone() };
        let hi = if ar.hi <= br.hi { ar.hi.clone() } else { br.hi.clone() };
        if lo >= hi {
            return false; // intervals disjoint
        }
        if sg.count_in(&lo, &hi) >= 1 {
            // a common root inside both isolating intervals must be both numbers
            return true;
        }
        let wa = ar.hi.to_f64().unwrap_or(0.0) - ar.lo.to_f64().unwrap_or(0.0);
        ar.refine(&sa, wa.max(1e-30) / 4.0);
        let wb = br.hi.to_f64().unwrap_or(0.0) - br.lo.to_f64().unwrap_or(0.0);
        br.refine(&sb, wb.max(1e-30) / 4.0);
    }
    // could not separate; fall back to the approximations
    (a.approx - b.approx).abs() <= 1e-9 * a.approx.abs().max(1.0)
}

/// Minimal linear recurrence of an integer sequence (Berlekamp-Massey over Q).
///
/// Returns the characteristic polynomial `x^L - c_1 x^(L-1) - ... - c_L`
/// (primitive, integer) when the whole sequence satisfies a recurrence of
/// order `L <= max_order` with `2L + 4 <= seq.len()`.
pub fn minimal_recurrence(seq: &[BigInt], max_order: usize) -> Option<IntPoly> {
    if seq.is_empty() {
        return None;
    }
    let s: Vec<BigRational> = seq
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let mut c: Vec<BigRational> = vec![BigRational::one()];
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut delta_prev = BigRational::one();
    for i in 0..s.len() {
        let mut delta = BigRational::zero();
        for (j, cj) in c.iter().enumerate() {
            if j <= i {
                delta += cj * &s[i - j];
            }
        }
        if delta.is_zero() {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            let scale = &delta / &delta_prev;
            c = poly_sub_scaled_shift(&c, &b, &scale, m);
            b = t;
            l = i + 1 - l;
            delta_prev = delta;
            m = 1;
        } else {
            let scale = &delta / &delta_prev;
            c = poly_sub_scaled_shift(&c, &b, &scale, m);
            m += 1;
        }
    }
    if l == 0 || l > max_order || 2 * l + 4 > seq.len() {
        return None;
    }
    // connection poly c(x) = 1 + c_1 x + ... + c_L x^L annihilates the
    // sequence; characteristic poly is its reverse
    let mut char_rat: Vec<BigRational> = vec![BigRational::zero(); l + 1];
    for (j, cj) in c.iter().enumerate() {
        char_rat[l - j] = cj.clone();
    }
    let charpoly = IntPoly::from_rat(&char_rat).primitive();
    // validate exactly on every window
    if !recurrence_holds(seq, &charpoly) {
        return None;
    }
    Some(charpoly)
}

fn poly_sub_scaled_shift(
    a: &[BigRational],
    b: &[BigRational],
    scale: &BigRational,
    shift: usize,
) -> Vec<BigRational> {
    let len = a.len().max(b.len() + shift);
    let mut out = vec![BigRational::zero(); len];
    out[..a.len()].clone_from_slice(a);
    for (i, bi) in b.iter().enumerate() {
        let t = bi * scale;
        out[i + shift] -= t;
    }
    rat_trim(&mut out);
    out
}

/// Check `sum_k charpoly[k] * seq[p + k] == 0` for every window.
pub fn recurrence_holds(seq: &[BigInt], charpoly: &IntPoly) -> bool {
    let Some(l) = charpoly.degree() else {
        return false;
    };
    if seq.len() < l {
        return false;
    }
    for p in 0..seq.len() - l {
        let mut acc = BigInt::zero();
        for (k, c) in charpoly.coeffs().iter().enumerate() {
            acc += c * &seq[p + k];
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn recurrence_of_tau_class_lengths() {
        // ||M^p e_a||_1 for M = (2 1; 1 1): 3, 8, 21, 55, ...
        let seq = big(&[3, 8, 21, 55, 144, 377, 987, 2584, 6765, 17711]);
        let p = minimal_recurrence(&seq, 4).unwrap();
        assert_eq!(p, IntPoly::from_i64(&[1, -3, 1]));
        let root = largest_real_root(&p).unwrap();
        let expect = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((root.approx - expect).abs() < 1e-12);
        assert_eq!(multiplicity(&p, &root), 1);
    }

    #[test]
    fn recurrence_of_constant_sequence() {
        let seq = big(&[2; 12]);
        let p = minimal_recurrence(&seq, 3).unwrap();
        assert_eq!(p, IntPoly::from_i64(&[-1, 1]));
        let root = largest_real_root(&p).unwrap();
        assert!((root.approx - 1.0).abs() < 1e-13);
    }

    #[test]
    fn recurrence_of_polynomial_sequence() {
        // binomial(p, 2): degree 2, annihilated by (x-1)^3
        let seq: Vec<BigInt> = (1..=14).map(|p: i64| BigInt::from(p * (p - 1) / 2 + 1)).collect();
        let p = minimal_recurrence(&seq, 5).unwrap();
        assert_eq!(p, IntPoly::from_i64(&[-1, 3, -3, 1]));
        let root = largest_real_root(&p).unwrap();
        assert!((root.approx - 1.0).abs() < 1e-12);
        assert_eq!(multiplicity(&p, &root), 3);
    }

    #[test]
    fn no_recurrence_for_garbage() {
        // primes are not an LRS of small order
        let seq = big(&[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]);
        assert!(minimal_recurrence(&seq, 4).is_none());
    }

    #[test]
    fn transient_prefix_is_absorbed_with_correct_dominant_root() {
        // a junk leading term forces x as an extra factor but cannot change
        // the dominant root
        let mut seq = big(&[100]);
        seq.extend(big(&[1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048]));
        let p = minimal_recurrence(&seq, 3).unwrap();
        let root = largest_real_root(&p).unwrap();
        assert!((root.approx - 2.0).abs() < 1e-12);
        assert_eq!(multiplicity(&p, &root), 1);
    }

    #[test]
    fn golden_multiplicity_two() {
        // (x^2 - x - 1)^2 = x^4 - 2x^3 - x^2 + 2x + 1, golden ratio double root
        let sq = IntPoly::from_i64(&[1, 2, -1, -2, 1]);
        let root = largest_real_root(&sq).unwrap();
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((root.approx - golden).abs() < 1e-11);
        assert_eq!(multiplicity(&sq, &root), 2);
    }

    #[test]
    fn algebraic_equality_distinguishes_close_roots() {
        let p1 = IntPoly::from_i64(&[-1, -1, 1]); // golden
        let p2 = IntPoly::from_i64(&[1, -3, 1]); // golden^2
        let r1 = largest_real_root(&p1).unwrap();
        let r2 = largest_real_root(&p2).unwrap();
        assert!(!algebraic_eq(&r1, &r2));
        let r1b = largest_real_root(&IntPoly::from_i64(&[-2, -2, 2])).unwrap();
        assert!(algebraic_eq(&r1, &r1b));
    }

    #[test]
    fn gcd_of_coprime_is_constant() {
        let p1 = IntPoly::from_i64(&[-1, -1, 1]);
        let p2 = IntPoly::from_i64(&[1, -3, 1]);
        assert_eq!(poly_gcd(&p1, &p2).degree(), Some(0));
        let prod_sq = IntPoly::from_i64(&[1, 2, -1, -2, 1]);
        let g = poly_gcd(&prod_sq, &prod_sq.derivative());
        assert_eq!(g, IntPoly::from_i64(&[-1, -1, 1]));
    }
}
