//! Dense univariate polynomials over the rationals; support for
//! characteristic polynomials, Newton iteration, and rational root search.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rat::Rat;

/// Coefficients ascending by degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly {
            coeffs: vec![Rat::one()],
        }
    }

    pub fn x() -> Self {
        UPoly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        UPoly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c.clone();
        }
        UPoly::new(out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, f: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c.clone() * f).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dlc = divisor.leading();
        let dd = divisor.degree();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.degree() >= dd {
            let shift = rem.degree() - dd;
            let factor = rem.leading() / dlc.clone();
            quot[shift] = factor.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.clone() * factor.clone()));
            rem = rem.sub(&UPoly::new(sub));
        }
        (UPoly::new(quot), rem)
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * Rat::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    /// Largest squarefree divisor: `self / gcd(self, self')`.
    pub fn squarefree_part(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// All rational roots with multiplicity stripped (each root listed
    /// once), via the classic p/q divisor search on the primitive part.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut poly = self.clone();
        let mut roots = Vec::new();
        // factor out powers of x
        while !poly.coeffs.is_empty() && poly.coeffs[0].is_zero() {
            poly.coeffs.remove(0);
            if !roots.contains(&Rat::zero()) {
                roots.push(Rat::zero());
            }
        }
        if poly.degree() == 0 {
            return roots;
        }
        // clear denominators to a primitive integer polynomial
        let mut denom = BigInt::one();
        for c in &poly.coeffs {
            denom = denom.lcm(c.denom());
        }
        let ints: Vec<BigInt> = poly
            .coeffs
            .iter()
            .map(|c| {
                (c.clone() * Rat::from_integer(denom.clone()))
                    .numer()
                    .clone()
            })
            .collect();
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        debug_assert!(!a0.is_zero() && !an.is_zero());
        let ps = divisors(&a0.abs());
        let qs = divisors(&an.abs());
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p.clone() * BigInt::from(sign), q.clone());
                    if poly.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        crate::rat::sort_for_search(&mut roots);
        roots
    }

    /// Root list with multiplicities when the polynomial splits over Q;
    /// `None` if an irrational factor remains.
    pub fn rational_root_multiplicities(&self) -> Option<Vec<(Rat, usize)>> {
        if self.is_zero() {
            return None;
        }
        let mut poly = self.monic();
        let mut out: Vec<(Rat, usize)> = Vec::new();
        let roots = self.rational_roots();
        for r in roots {
            let lin = UPoly::new(vec![-r.clone(), Rat::one()]);
            let mut mult = 0usize;
            loop {
                let (q, rem) = poly.div_rem(&lin);
                if rem.is_zero() {
                    poly = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        if poly.degree() == 0 {
            Some(out)
        } else {
            None
        }
    }
}

/// All positive divisors by trial division; callers keep inputs at desk
/// scale (the paper-level use is prime decomposition of matrix entries).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    loop {
        let d_sq = d.clone() * d.clone();
        if d_sq > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn up(coeffs: &[i64]) -> UPoly {
        UPoly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x + 1)(x - 1)
        let p = up(&[-1, 0, 1]);
        let d = up(&[1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&up(&[-1, 1])), up(&[-1, 1]));
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        // (x - 2)^2 (x - 3)
        let p = up(&[-12, 16, -7, 1]);
        let sf = p.squarefree_part();
        assert_eq!(sf, up(&[6, -5, 1]));
    }

    #[test]
    fn rational_roots_examples() {
        assert_eq!(up(&[-4, 0, 1]).rational_roots(), vec![int(-2), int(2)]);
        assert!(up(&[-2, 0, 1]).rational_roots().is_empty());
        let p = UPoly::new(vec![rat(1, 2), int(1)]); // x + 1/2
        assert_eq!(p.rational_roots(), vec![rat(-1, 2)]);
        // multiplicities
        let sq = up(&[-12, 16, -7, 1]);
        assert_eq!(
            sq.rational_root_multiplicities().unwrap(),
            vec![(int(2), 2), (int(3), 1)]
        );
        assert!(up(&[-2, 0, 1]).rational_root_multiplicities().is_none());
    }
}
