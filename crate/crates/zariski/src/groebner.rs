//! Buchberger's algorithm and normal-form reduction.
//!
//! The engine computes unique reduced Groebner bases: monic generators,
//! pairwise reduced, sorted ascending by leading monomial. Both classic
//! Buchberger criteria are applied (coprime leading monomials and the
//! chain criterion), pairs are selected by smallest lcm, and generators
//! of the shape `c*x + d` with constant `c, d` are substituted away
//! before the pair loop starts. The substitution step is exact: if
//! `x - c` is a generator then the reduced basis of the ideal is
//! `{x - c}` together with the reduced basis of the substituted ideal,
//! which mentions `x` nowhere.

use std::cmp::Ordering;

use num::{One, Zero};

use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::rat::Rat;

/// Working representation: terms sorted descending under one fixed order,
/// so leading-term access is O(1) during division loops.
#[derive(Clone, Debug)]
struct OrderedPoly {
    terms: Vec<(Monomial, Rat)>,
}

impl OrderedPoly {
    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, Rat)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));
        OrderedPoly { terms }
    }

    fn to_poly(&self, space: &crate::vars::VarSpace) -> Polynomial {
        Polynomial::from_terms(space, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> &(Monomial, Rat) {
        &self.terms[0]
    }

    /// self - (c * m) * other, merging sorted term lists.
    fn sub_scaled(
        &self,
        other: &OrderedPoly,
        m: &Monomial,
        c: &Rat,
        order: MonomialOrder,
    ) -> OrderedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < other.terms.len() {
            let shifted = other.terms[j].0.mul(m);
            match order.cmp(&self.terms[i].0, &shifted) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted, -(other.terms[j].1.clone() * c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = self.terms[i].1.clone() - other.terms[j].1.clone() * c;
                    if !coeff.is_zero() {
                        out.push((shifted, coeff));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        while i < self.terms.len() {
            out.push(self.terms[i].clone());
            i += 1;
        }
        while j < other.terms.len() {
            out.push((other.terms[j].0.mul(m), -(other.terms[j].1.clone() * c)));
            j += 1;
        }
        OrderedPoly { terms: out }
    }

    fn monic(&mut self) {
        if let Some((_, lc)) = self.terms.first().cloned() {
            if !lc.is_one() {
                for (_, c) in &mut self.terms {
                    *c /= lc.clone();
                }
            }
        }
    }
}

/// Full normal form of `p` against `basis`: repeatedly cancels the
/// largest reducible monomial anywhere in `p`.
fn normal_form(p: OrderedPoly, basis: &[OrderedPoly], order: MonomialOrder) -> OrderedPoly {
    let mut rest = p;
    let mut done: Vec<(Monomial, Rat)> = Vec::new();
    'outer: while !rest.is_zero() {
        let (lm, lc) = rest.leading().clone();
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (glm, glc) = g.leading();
            if glm.divides(&lm) {
                let q = glm.div_into(&lm);
                let factor = lc.clone() / glc.clone();
                rest = rest.sub_scaled(g, &q, &factor, order);
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the result
        done.push((lm, lc));
        rest.terms.remove(0);
    }
    OrderedPoly {
        terms: done.into_iter().chain(rest.terms).collect(),
    }
}

/// Normal form of `p` modulo `basis` under `order`. When `basis` is a
/// reduced Groebner basis this is the unique remainder; in particular it
/// is zero exactly when `p` lies in the generated ideal.
pub fn reduce(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let space = p.space().clone();
    let ob: Vec<OrderedPoly> = basis
        .iter()
        .filter(|g| {
            assert_eq!(g.space(), &space, "reduce: mixed variable spaces");
            !g.is_zero()
        })
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    normal_form(OrderedPoly::from_poly(p, order), &ob, order).to_poly(&space)
}

/// Substitution preprocessing: extracts generators of the form
/// `c*x + d` (single variable, constant tail), pins `x := -d/c`, and
/// substitutes through the remaining generators until a fixpoint.
/// Returns the pinned assignments and the substituted generator list.
fn pin_constants(gens: &[Polynomial]) -> (Vec<(usize, Rat)>, Vec<Polynomial>) {
    let space = gens[0].space().clone();
    let mut pinned: Vec<(usize, Rat)> = Vec::new();
    let mut work: Vec<Polynomial> = gens.to_vec();
    loop {
        let mut found: Option<(usize, Rat)> = None;
        for g in &work {
            if g.is_zero() || g.is_constant() {
                continue;
            }
            if g.num_terms() > 2 || g.total_degree() != Some(1) {
                continue;
            }
            let support = g.support();
            if support.len() != 1 {
                continue;
            }
            let v = support[0];
            let mono = Monomial::var(space.arity(), v);
            let lin = g.coeff(&mono);
            let cst = g.coeff(&Monomial::one(space.arity()));
            found = Some((v, -cst / lin));
            break;
        }
        let Some((v, value)) = found else { break };
        pinned.push((v, value.clone()));
        let map: Vec<Polynomial> = (0..space.arity())
            .map(|i| {
                if i == v {
                    Polynomial::constant(&space, value.clone())
                } else {
                    Polynomial::var(&space, i)
                }
            })
            .collect();
        work = work
            .into_iter()
            .map(|g| g.substitute(&map))
            .filter(|g| !g.is_zero())
            .collect();
        if work.iter().any(|g| g.is_constant() && !g.is_zero()) {
            // unit ideal; signal with a bare 1
            return (pinned, vec![Polynomial::one(&space)]);
        }
        if work.is_empty() {
            break;
        }
    }
    (pinned, work)
}

/// The unique reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner(gens: &[Polynomial], order: MonomialOrder) -> Vec<Polynomial> {
    static SLOW_LOG: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    let slow_log = *SLOW_LOG.get_or_init(|| std::env::var("ZARISKI_GB_SLOW").is_ok());
    if !slow_log {
        return groebner_inner(gens, order);
    }
    let start = std::time::Instant::now();
    let out = groebner_inner(gens, order);
    if start.elapsed().as_millis() > 100 {
        let arity = gens.first().map(|g| g.space().arity()).unwrap_or(0);
        eprintln!(
            "slow gb: {:?} gens={} arity={} order={:?} out={}",
            start.elapsed(),
            gens.len(),
            arity,
            order,
            out.len()
        );
    }
    out
}

fn groebner_inner(gens: &[Polynomial], order: MonomialOrder) -> Vec<Polynomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let space = first.space().clone();
    for g in gens {
        assert_eq!(g.space(), &space, "groebner: mixed variable spaces");
    }
    let live: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if live.is_empty() {
        return Vec::new();
    }
    if live.iter().any(|g| g.is_constant()) {
        return vec![Polynomial::one(&space)];
    }

    let (pinned, core) = pin_constants(&live);
    if core.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return vec![Polynomial::one(&space)];
    }
    let mut basis = if core.is_empty() {
        Vec::new()
    } else {
        buchberger(&core, order)
    };
    if basis.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return vec![Polynomial::one(&space)];
    }

    // splice the pinned generators back in; their leading monomials are
    // single variables absent from the core basis, so only tails need a
    // final inter-reduction pass
    for (v, value) in pinned {
        let p = Polynomial::var(&space, v).sub(&Polynomial::constant(&space, value));
        basis.push(p);
    }
    interreduce(&mut basis, order);
    sort_basis(&mut basis, order);
    basis
}

fn sort_basis(basis: &mut [Polynomial], order: MonomialOrder) {
    basis.sort_by(|a, b| {
        let la = a.leading_monomial(order).expect("nonzero basis element");
        let lb = b.leading_monomial(order).expect("nonzero basis element");
        order.cmp(&la, &lb)
    });
}

/// Pairwise reduction to the unique reduced basis: drops elements whose
/// leading monomial is divisible by another's, then replaces each element
/// by its normal form against the rest.
fn interreduce(basis: &mut Vec<Polynomial>, order: MonomialOrder) {
    if basis.is_empty() {
        return;
    }
    // minimal generating set
    let mut keep: Vec<Polynomial> = Vec::new();
    'outer: for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial(order).expect("nonzero");
        for (j, h) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let hm = h.leading_monomial(order).expect("nonzero");
            if hm.divides(&lm) && (hm != lm || j < i) {
                continue 'outer;
            }
        }
        keep.push(g.clone());
    }
    // tail reduction
    let ordered: Vec<OrderedPoly> = keep
        .iter()
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    let space = keep[0].space().clone();
    let mut out: Vec<Polynomial> = Vec::with_capacity(keep.len());
    for (i, g) in ordered.iter().enumerate() {
        let others: Vec<OrderedPoly> = ordered
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let mut nf = normal_form(g.clone(), &others, order);
        nf.monic();
        if !nf.is_zero() {
            out.push(nf.to_poly(&space));
        }
    }
    *basis = out;
}

fn pair_key(lms: &[Monomial], i: usize, j: usize) -> Monomial {
    lms[i].lcm(&lms[j])
}

fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Vec<Polynomial> {
    let space = gens[0].space().clone();
    let mut basis: Vec<OrderedPoly> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    for g in gens {
        let mut og = OrderedPoly::from_poly(g, order);
        og = normal_form(og, &basis, order);
        if og.is_zero() {
            continue;
        }
        og.monic();
        lms.push(og.leading().0.clone());
        basis.push(og);
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm under the order
        let mut best = 0;
        for k in 1..pairs.len() {
            let (i, j) = pairs[k];
            let (bi, bj) = pairs[best];
            if order.cmp(&pair_key(&lms, i, j), &pair_key(&lms, bi, bj)) == Ordering::Less {
                best = k;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        let lcm = lms[i].lcm(&lms[j]);

        // first Buchberger criterion: coprime leading monomials
        if lms[i].gcd_is_one(&lms[j]) {
            continue;
        }
        // chain criterion: some k with lm_k | lcm and both (i,k), (j,k) gone
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lms[k].divides(&lcm)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }

        // S-polynomial
        let (mi, ci) = basis[i].leading().clone();
        let (mj, cj) = basis[j].leading().clone();
        let qi = mi.div_into(&lcm);
        let qj = mj.div_into(&lcm);
        let scaled_i = OrderedPoly {
            terms: basis[i]
                .terms
                .iter()
                .map(|(m, c)| (m.mul(&qi), c.clone() / ci.clone()))
                .collect(),
        };
        let spoly = scaled_i.sub_scaled(&basis[j], &qj, &(Rat::one() / cj), order);
        let mut nf = normal_form(spoly, &basis, order);
        if nf.is_zero() {
            continue;
        }
        nf.monic();
        let new_index = basis.len();
        lms.push(nf.leading().0.clone());
        basis.push(nf);
        for k in 0..new_index {
            pairs.push((k, new_index));
        }
    }

    let mut result: Vec<Polynomial> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.to_poly(&space))
        .collect();
    if result.is_empty() {
        return Vec::new();
    }
    interreduce(&mut result, order);
    sort_basis(&mut result, order);
    result
}
