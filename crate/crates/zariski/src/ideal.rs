//! Ideal-level operations: sums, products, intersections, saturation,
//! elimination, containment, dimension, zero-dimensional quotient bases,
//! and degree truncation.
//!
//! Ideals carry their generators plus a cache of reduced Groebner bases
//! per monomial order. Equality of ideals is semantic: equal reduced
//! bases under grevlex. Varieties are represented by arbitrary (not
//! necessarily radical) defining ideals; radical membership is decided
//! by the Rabinowitsch trick rather than by computing radicals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::groebner::{groebner, reduce};
use crate::linalg;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::vars::VarSpace;

#[derive(Clone)]
pub struct Ideal {
    space: VarSpace,
    gens: Vec<Polynomial>,
    cache: Arc<RwLock<BTreeMap<MonomialOrder, Arc<Vec<Polynomial>>>>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Sum or product, for [`Ideal::combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Sum,
    Product,
}

/// Result of a staircase computation: either the finite list of standard
/// monomials or a witness that the quotient is infinite-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientBasis {
    Finite(Vec<Monomial>),
    Infinite,
}

impl Ideal {
    pub fn new(space: &VarSpace, gens: Vec<Polynomial>) -> Self {
        let mut filtered: Vec<Polynomial> = Vec::new();
        for g in gens {
            assert_eq!(g.space(), space, "ideal generator over wrong space");
            if !g.is_zero() && !filtered.contains(&g) {
                filtered.push(g);
            }
        }
        Ideal {
            space: space.clone(),
            gens: filtered,
            cache: Arc::new(RwLock::new(BTreeMap::new())),
        }
    }

    pub fn zero(space: &VarSpace) -> Self {
        Ideal::new(space, Vec::new())
    }

    pub fn unit(space: &VarSpace) -> Self {
        Ideal::new(space, vec![Polynomial::one(space)])
    }

    /// The maximal ideal of a rational point.
    pub fn of_point(space: &VarSpace, point: &[Rat]) -> Self {
        assert_eq!(point.len(), space.arity());
        let gens = point
            .iter()
            .enumerate()
            .map(|(i, c)| Polynomial::var(space, i).sub(&Polynomial::constant(space, c.clone())))
            .collect();
        Ideal::new(space, gens)
    }

    pub fn parse(space: &VarSpace, texts: &[&str]) -> Result<Self> {
        let gens = texts
            .iter()
            .map(|t| Polynomial::parse(space, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(space, gens))
    }

    pub fn space(&self) -> &VarSpace {
        &self.space
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced Groebner basis under `order`, cached. Recomputation by
    /// concurrent callers is benign: the basis is canonical.
    pub fn gb(&self, order: MonomialOrder) -> Arc<Vec<Polynomial>> {
        if let Some(hit) = self.cache.read().expect("ideal cache poisoned").get(&order) {
            return hit.clone();
        }
        let _t = crate::profiling::Timer::new((
            &crate::profiling::GROEBNER_NS,
            &crate::profiling::GROEBNER_CALLS,
        ));
        let basis = Arc::new(groebner(&self.gens, order));
        self.cache
            .write()
            .expect("ideal cache poisoned")
            .insert(order, basis.clone());
        basis
    }

    /// Normal form of `p` modulo the reduced basis under `order`.
    pub fn reduce_mod(&self, p: &Polynomial, order: MonomialOrder) -> Polynomial {
        reduce(p, &self.gb(order), order)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Cheap sufficient unit test: some generator is a nonzero constant.
    pub fn has_constant_gen(&self) -> bool {
        self.gens
            .iter()
            .any(|g| g.constant_value().map(|c| !c.is_zero()).unwrap_or(false))
    }

    pub fn is_unit(&self) -> bool {
        if self.has_constant_gen() {
            return true;
        }
        let gb = self.gb(MonomialOrder::GrevLex);
        gb.len() == 1 && gb[0].is_constant() && !gb[0].is_zero()
    }

    pub fn contains_poly(&self, p: &Polynomial) -> bool {
        self.reduce_mod(p, MonomialOrder::GrevLex).is_zero()
    }

    /// Ideal containment: `self` contains every generator of `other`.
    pub fn contains(&self, other: &Ideal) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::mismatch("contains: different variable spaces"));
        }
        Ok(other.gens.iter().all(|g| self.contains_poly(g)))
    }

    /// Radical membership via Rabinowitsch: `p` vanishes on V(self) iff
    /// `1` lies in `self + (t*p - 1)` over an extended space.
    pub fn in_radical(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        if self.contains_poly(p) {
            return true;
        }
        let _t = crate::profiling::Timer::new((
            &crate::profiling::RADICAL_NS,
            &crate::profiling::RADICAL_CALLS,
        ));
        let t_name = self.space.fresh_name("t");
        let ext = prepend_vars(&self.space, &[t_name]);
        let shift: Vec<usize> = (1..=self.space.arity()).collect();
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&ext, &shift)).collect();
        let t = Polynomial::var(&ext, 0);
        gens.push(t.mul(&p.embed(&ext, &shift)).sub(&Polynomial::one(&ext)));
        Ideal::new(&ext, gens).is_unit()
    }

    /// Variety-level containment `V(self) \supseteq V(other)`... stated
    /// ideal-side: every generator of `self` vanishes on V(other).
    pub fn vanishes_on(&self, other: &Ideal) -> bool {
        self.gens.iter().all(|g| other.in_radical(g))
    }

    /// Semantic equality of the defined varieties (mutual radical
    /// membership of generators).
    pub fn same_variety(&self, other: &Ideal) -> bool {
        self.vanishes_on(other) && other.vanishes_on(self)
    }

    pub fn vanishes_at(&self, point: &[Rat]) -> bool {
        self.gens.iter().all(|g| g.evaluate(point).is_zero())
    }

    /// Sum or product of two ideals over one space.
    pub fn combine(&self, other: &Ideal, mode: CombineMode) -> Result<Ideal> {
        if self.space != other.space {
            return Err(Error::mismatch("combine: different variable spaces"));
        }
        let gens = match mode {
            CombineMode::Sum => self.gens.iter().chain(other.gens.iter()).cloned().collect(),
            CombineMode::Product => {
                let mut out = Vec::new();
                for f in &self.gens {
                    for g in &other.gens {
                        out.push(f.mul(g));
                    }
                }
                out
            }
        };
        Ok(Ideal::new(&self.space, gens))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.combine(other, CombineMode::Sum)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.combine(other, CombineMode::Product)
    }

    /// Intersection via the auxiliary-variable method: eliminate `t` from
    /// `t*I + (1-t)*J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if self.space != other.space {
            return Err(Error::mismatch("intersect: different variable spaces"));
        }
        let _t = crate::profiling::Timer::new((
            &crate::profiling::INTERSECT_NS,
            &crate::profiling::INTERSECT_CALLS,
        ));
        // cheap cases first
        if self.is_zero_ideal() || other.is_unit() {
            return Ok(self.clone());
        }
        if other.is_zero_ideal() || self.is_unit() {
            return Ok(other.clone());
        }
        let t_name = self.space.fresh_name("t");
        let ext = prepend_vars(&self.space, &[t_name]);
        let shift: Vec<usize> = (1..=self.space.arity()).collect();
        let t = Polynomial::var(&ext, 0);
        let one_minus_t = Polynomial::one(&ext).sub(&t);
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(t.mul(&f.embed(&ext, &shift)));
        }
        for g in &other.gens {
            gens.push(one_minus_t.mul(&g.embed(&ext, &shift)));
        }
        let gb = groebner(&gens, MonomialOrder::Block(1));
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|p| p.terms().all(|(m, _)| m.exp(0) == 0))
            .map(|p| p.restrict(&self.space).expect("t eliminated"))
            .collect();
        Ok(Ideal::new(&self.space, kept))
    }

    /// Saturation `I : J^\infty`, computed per generator of `J` and
    /// intersected. Valid because a power of a sum of generators that
    /// multiplies into `I` forces, by the pigeonhole on exponents, a
    /// power of each generator to do so.
    pub fn saturate(&self, other: &Ideal) -> Result<Ideal> {
        if self.space != other.space {
            return Err(Error::mismatch("saturate: different variable spaces"));
        }
        if other.is_zero_ideal() {
            return Err(Error::invalid("saturate: divisor ideal must be nonzero"));
        }
        let mut result: Option<Ideal> = None;
        for g in &other.gens {
            let single = self.saturate_by_poly(g)?;
            result = Some(match result {
                None => single,
                Some(acc) => acc.intersect(&single)?,
            });
        }
        Ok(result.expect("nonzero divisor"))
    }

    /// `I : g^\infty` via the Rabinowitsch-style auxiliary equation
    /// `t*g - 1 = 0` and elimination of `t`.
    pub fn saturate_by_poly(&self, g: &Polynomial) -> Result<Ideal> {
        assert_eq!(g.space(), &self.space);
        if g.is_zero() {
            return Err(Error::invalid("saturate: zero divisor polynomial"));
        }
        if g.is_constant() {
            return Ok(self.clone());
        }
        // g already vanishes on V(I): the difference is empty
        if self.in_radical(g) {
            return Ok(Ideal::unit(&self.space));
        }
        let t_name = self.space.fresh_name("t");
        let ext = prepend_vars(&self.space, &[t_name]);
        let shift: Vec<usize> = (1..=self.space.arity()).collect();
        let t = Polynomial::var(&ext, 0);
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|f| f.embed(&ext, &shift)).collect();
        gens.push(t.mul(&g.embed(&ext, &shift)).sub(&Polynomial::one(&ext)));
        let gb = groebner(&gens, MonomialOrder::Block(1));
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|p| p.terms().all(|(m, _)| m.exp(0) == 0))
            .map(|p| p.restrict(&self.space).expect("t eliminated"))
            .collect();
        Ok(Ideal::new(&self.space, kept))
    }

    /// Elimination ideal `I \cap K[remaining]`: generators not involving
    /// the dropped variables, via a block order. The result lives in the
    /// same space; geometrically it is the closure of the projection.
    pub fn eliminate(&self, drop: &[usize]) -> Ideal {
        if drop.is_empty() || self.gens.is_empty() {
            return self.clone();
        }
        let _t = crate::profiling::Timer::new((
            &crate::profiling::ELIMINATE_NS,
            &crate::profiling::ELIMINATE_CALLS,
        ));
        let arity = self.space.arity();
        for &v in drop {
            assert!(v < arity, "eliminate: variable index out of range");
        }
        let mut dropped = vec![false; arity];
        for &v in drop {
            dropped[v] = true;
        }
        // only variables occurring in some generator matter; the block
        // computation runs over that support alone
        let mut in_support = vec![false; arity];
        for g in &self.gens {
            for v in g.support() {
                in_support[v] = true;
            }
        }
        // permuted support space: dropped variables first
        let mut order_map = vec![usize::MAX; arity]; // old index -> support index
        let mut names: Vec<String> = Vec::new();
        let mut next = 0usize;
        for i in 0..arity {
            if dropped[i] && in_support[i] {
                order_map[i] = next;
                names.push(self.space.name(i).to_string());
                next += 1;
            }
        }
        let k = next;
        for i in 0..arity {
            if !dropped[i] && in_support[i] {
                order_map[i] = next;
                names.push(self.space.name(i).to_string());
                next += 1;
            }
        }
        if k == 0 {
            return self.clone();
        }
        let permuted = VarSpace::new(names).expect("support space");
        let gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| {
                let map: Vec<usize> = (0..arity)
                    .map(|i| {
                        if order_map[i] == usize::MAX {
                            0
                        } else {
                            order_map[i]
                        }
                    })
                    .collect();
                g.embed(&permuted, &map)
            })
            .collect();
        let gb = groebner(&gens, MonomialOrder::Block(k));
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|p| {
                p.terms()
                    .all(|(m, _)| m.exps()[..k].iter().all(|&e| e == 0))
            })
            .map(|p| p.embed_by_name(&self.space).expect("same names"))
            .collect();
        Ideal::new(&self.space, kept)
    }

    /// Elimination by variable name.
    pub fn eliminate_named(&self, names: &[&str]) -> Result<Ideal> {
        let drop = names
            .iter()
            .map(|n| {
                self.space
                    .index_of(n)
                    .ok_or_else(|| Error::invalid(format!("unknown variable `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eliminate(&drop))
    }

    /// Krull dimension of V(I): the largest number of variables spanning
    /// no leading monomial of the reduced grevlex basis; -1 for the unit
    /// ideal. Computed as arity minus a minimum hitting set of the
    /// leading-monomial supports.
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let gb = self.gb(MonomialOrder::GrevLex);
        if gb.is_empty() {
            return self.space.arity() as i64;
        }
        let mut supports: Vec<Vec<usize>> = gb
            .iter()
            .map(|g| {
                let lm = g.leading_monomial(MonomialOrder::GrevLex).expect("nonzero");
                (0..self.space.arity()).filter(|&i| lm.exp(i) > 0).collect()
            })
            .collect();
        supports.sort();
        supports.dedup();
        // drop supersets: hitting a subset hits the superset
        let minimal: Vec<Vec<usize>> = supports
            .iter()
            .filter(|s| {
                !supports
                    .iter()
                    .any(|t| t.len() < s.len() && t.iter().all(|v| s.contains(v)))
            })
            .cloned()
            .collect();
        let mut best = usize::MAX;
        let mut chosen: Vec<usize> = Vec::new();
        hitting_set(&minimal, &mut chosen, &mut best);
        self.space.arity() as i64 - best as i64
    }

    /// The staircase of standard monomials when finite.
    pub fn quotient_basis(&self) -> QuotientBasis {
        let gb = self.gb(MonomialOrder::GrevLex);
        if self.is_unit() {
            return QuotientBasis::Finite(Vec::new());
        }
        let arity = self.space.arity();
        let lms: Vec<Monomial> = gb
            .iter()
            .map(|g| g.leading_monomial(MonomialOrder::GrevLex).expect("nonzero"))
            .collect();
        // finite iff every variable occurs as a pure power among the heads
        let mut bound = vec![0u32; arity];
        for i in 0..arity {
            let pure = lms
                .iter()
                .filter(|m| (0..arity).all(|j| j == i || m.exp(j) == 0))
                .map(|m| m.exp(i))
                .min();
            match pure {
                Some(b) => bound[i] = b,
                None => return QuotientBasis::Infinite,
            }
        }
        let mut staircase = Vec::new();
        let mut current = vec![0u32; arity];
        enumerate_staircase(&bound, &lms, 0, &mut current, &mut staircase);
        staircase.sort_by(|a, b| MonomialOrder::GrevLex.cmp(a, b));
        QuotientBasis::Finite(staircase)
    }

    /// A canonical basis of `{p in I : total degree <= d}`, found by
    /// solving for template coefficients whose normal form vanishes.
    pub fn degree_truncate(&self, d: u32) -> Vec<Polynomial> {
        let gb = self.gb(MonomialOrder::GrevLex);
        if self.is_unit() {
            // whole polynomial ring up to degree d
            let mut monos = monomials_up_to(&self.space, d);
            monos.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a));
            return monos
                .into_iter()
                .map(|m| Polynomial::from_terms(&self.space, [(m, Rat::one())]))
                .collect();
        }
        let mut templates = monomials_up_to(&self.space, d);
        // columns in descending grevlex so kernel vectors are canonical
        templates.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a));
        let nfs: Vec<Polynomial> = templates
            .iter()
            .map(|m| {
                reduce(
                    &Polynomial::from_terms(&self.space, [(m.clone(), Rat::one())]),
                    &gb,
                    MonomialOrder::GrevLex,
                )
            })
            .collect();
        // rows: standard monomials appearing in any normal form
        let mut standard: Vec<Monomial> = Vec::new();
        for nf in &nfs {
            for (m, _) in nf.terms() {
                if !standard.contains(m) {
                    standard.push(m.clone());
                }
            }
        }
        standard.sort();
        let rows: Vec<Vec<Rat>> = standard
            .iter()
            .map(|s| nfs.iter().map(|nf| nf.coeff(s)).collect())
            .collect();
        let kernel = if rows.is_empty() {
            // every template reduces to zero
            let n = templates.len();
            (0..n)
                .map(|i| {
                    let mut v = vec![Rat::zero(); n];
                    v[i] = Rat::one();
                    v
                })
                .collect()
        } else {
            linalg::kernel_basis(rows, templates.len())
        };
        let mut out: Vec<Polynomial> = kernel
            .iter()
            .map(|coeffs| {
                Polynomial::from_terms(
                    &self.space,
                    templates.iter().cloned().zip(coeffs.iter().cloned()),
                )
            })
            .map(|p| p.monic(MonomialOrder::GrevLex))
            .collect();
        out.sort_by(|a, b| {
            let la = a.leading_monomial(MonomialOrder::GrevLex).expect("nonzero");
            let lb = b.leading_monomial(MonomialOrder::GrevLex).expect("nonzero");
            MonomialOrder::GrevLex.cmp(&la, &lb)
        });
        out
    }

    /// Replaces each generator by its normal form modulo `other`,
    /// dropping zeros; the zero set within V(other) is unchanged.
    pub fn reduce_gens_mod(&self, other: &Ideal) -> Ideal {
        let gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| other.reduce_mod(g, MonomialOrder::GrevLex))
            .filter(|g| !g.is_zero())
            .collect();
        Ideal::new(&self.space, gens)
    }

    /// Re-expresses the ideal in another space by variable name.
    pub fn embed_by_name(&self, target: &VarSpace) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed_by_name(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, gens))
    }

    /// Restricts to a smaller space; fails if a generator uses a dropped
    /// variable.
    pub fn restrict(&self, target: &VarSpace) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.restrict(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, gens))
    }

    /// Canonical generator list: the reduced grevlex basis.
    pub fn canonical_gens(&self) -> Vec<Polynomial> {
        self.gb(MonomialOrder::GrevLex).as_ref().clone()
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.gb(MonomialOrder::GrevLex) == other.gb(MonomialOrder::GrevLex)
    }
}

impl Eq for Ideal {}

/// Vanishing ideal of a finite set of rational points, as a reduced
/// Groebner basis, by the Buchberger-Moeller construction: candidate
/// monomials are scanned in ascending order; those whose evaluation
/// vector is dependent on the standard ones yield basis elements.
pub fn vanishing_ideal(space: &VarSpace, points: &[Vec<Rat>], order: MonomialOrder) -> Ideal {
    if points.is_empty() {
        return Ideal::unit(space);
    }
    let arity = space.arity();
    for p in points {
        assert_eq!(p.len(), arity, "point arity mismatch");
    }
    let mut standard: Vec<Monomial> = Vec::new();
    let mut std_evals: Vec<Vec<Rat>> = Vec::new();
    let mut heads: Vec<Monomial> = Vec::new();
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut frontier: Vec<Monomial> = vec![Monomial::one(arity)];

    while let Some(pos) = frontier
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| order.cmp(a, b))
        .map(|(i, _)| i)
    {
        let m = frontier.swap_remove(pos);
        if heads.iter().any(|h| h.divides(&m)) {
            continue;
        }
        let eval: Vec<Rat> = points
            .iter()
            .map(|p| Polynomial::from_terms(space, [(m.clone(), Rat::one())]).evaluate(p))
            .collect();
        // solve for eval as a combination of the standard evaluations
        let matrix: Vec<Vec<Rat>> = (0..points.len())
            .map(|c| std_evals.iter().map(|row| row[c].clone()).collect())
            .collect();
        match linalg::solve(&matrix, &eval) {
            Some(combo) => {
                let mut p = Polynomial::from_terms(space, [(m.clone(), Rat::one())]);
                for (s, c) in standard.iter().zip(combo) {
                    p.add_term(s.clone(), -c);
                }
                heads.push(m);
                basis.push(p);
            }
            None => {
                standard.push(m.clone());
                std_evals.push(eval);
                for v in 0..arity {
                    let next = m.mul(&Monomial::var(arity, v));
                    if !frontier.contains(&next) {
                        frontier.push(next);
                    }
                }
            }
        }
    }
    Ideal::new(space, basis)
}

fn prepend_vars(space: &VarSpace, aux: &[String]) -> VarSpace {
    VarSpace::new(aux.iter().cloned().chain(space.names().iter().cloned())).expect("aux space")
}

fn hitting_set(supports: &[Vec<usize>], chosen: &mut Vec<usize>, best: &mut usize) {
    if chosen.len() >= *best {
        return;
    }
    let Some(first_unhit) = supports
        .iter()
        .find(|s| !s.iter().any(|v| chosen.contains(v)))
    else {
        *best = chosen.len();
        return;
    };
    for &v in first_unhit {
        chosen.push(v);
        hitting_set(supports, chosen, best);
        chosen.pop();
    }
}

fn enumerate_staircase(
    bound: &[u32],
    lms: &[Monomial],
    var: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if var == bound.len() {
        let m = Monomial::new(current.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            out.push(m);
        }
        return;
    }
    for e in 0..bound[var] {
        current[var] = e;
        enumerate_staircase(bound, lms, var + 1, current, out);
    }
    current[var] = 0;
}

fn monomials_up_to(space: &VarSpace, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; space.arity()];
    fn rec(arity: usize, d: u32, var: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == arity {
            out.push(Monomial::new(current.clone()));
            return;
        }
        let used: u32 = current[..var].iter().sum();
        for e in 0..=(d - used) {
            current[var] = e;
            rec(arity, d, var + 1, current, out);
        }
        current[var] = 0;
    }
    rec(space.arity(), d, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn xy() -> VarSpace {
        VarSpace::new(["x", "y"]).unwrap()
    }

    fn ideal(space: &VarSpace, texts: &[&str]) -> Ideal {
        Ideal::parse(space, texts).unwrap()
    }

    #[test]
    fn combine_examples() {
        let s = xy();
        let ix = ideal(&s, &["x"]);
        let iy = ideal(&s, &["y"]);
        let sum = ix.combine(&iy, CombineMode::Sum).unwrap();
        assert_eq!(sum, ideal(&s, &["x", "y"]));
        let prod = ix.combine(&iy, CombineMode::Product).unwrap();
        assert_eq!(prod, ideal(&s, &["x*y"]));
        let zero = Ideal::zero(&s);
        assert_eq!(ix.combine(&zero, CombineMode::Product).unwrap(), zero);
    }

    #[test]
    fn intersect_examples() {
        let s = xy();
        let ix = ideal(&s, &["x"]);
        let iy = ideal(&s, &["y"]);
        let meet = ix.intersect(&iy).unwrap();
        assert_eq!(meet, ideal(&s, &["x*y"]));
        // x*y lies in both
        assert!(ix.contains_poly(&Polynomial::parse(&s, "x*y").unwrap()));
        assert!(iy.contains_poly(&Polynomial::parse(&s, "x*y").unwrap()));
        // idempotence
        let i = ideal(&s, &["x^2 + y", "x*y"]);
        assert_eq!(i.intersect(&i).unwrap(), i);
        // (x, y) \cap (x) = (x)
        let ixy = ideal(&s, &["x", "y"]);
        assert_eq!(ixy.intersect(&ix).unwrap(), ix);
        assert!(ixy.contains(&ix).unwrap());
    }

    #[test]
    fn saturate_examples() {
        let s = xy();
        let ixy = ideal(&s, &["x*y"]);
        let ix = ideal(&s, &["x"]);
        let res = ixy.saturate(&ix).unwrap();
        assert_eq!(res, ideal(&s, &["y"]));
        // y * x lies in (xy)
        assert!(ixy.contains_poly(&Polynomial::parse(&s, "y*x").unwrap()));

        let ix2 = ideal(&s, &["x^2"]);
        assert!(ix2.saturate(&ix).unwrap().is_unit());
        assert!(ix2.contains_poly(&Polynomial::parse(&s, "x^2").unwrap()));

        let i = ideal(&s, &["x^2 + y"]);
        let unit = Ideal::unit(&s);
        assert_eq!(i.saturate(&unit).unwrap(), i);
    }

    #[test]
    fn saturate_is_idempotent_and_grows() {
        let s = xy();
        let i = ideal(&s, &["x^2*y"]);
        let j = ideal(&s, &["x"]);
        let s1 = i.saturate(&j).unwrap();
        assert!(s1.contains(&i).unwrap());
        let s2 = s1.saturate(&j).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1, ideal(&s, &["y"]));
    }

    #[test]
    fn eliminate_examples() {
        let s = VarSpace::new(["t", "x", "y"]).unwrap();
        let i = ideal(&s, &["x - t", "y - t^2"]);
        let e = i.eliminate(&[0]);
        let expected = ideal(&s, &["y - x^2"]);
        assert_eq!(e, expected);
        // substitution check: y - x^2 vanishes under (t, t^2)
        let one_var = VarSpace::new(["t"]).unwrap();
        let t = Polynomial::var(&one_var, 0);
        for g in e.gens() {
            assert!(g.substitute(&[t.clone(), t.clone(), t.mul(&t)]).is_zero());
        }
        assert_eq!(i.eliminate(&[]), i);

        let j = ideal(&s, &["t*x - 1", "y"]);
        assert_eq!(j.eliminate(&[0]), ideal(&s, &["y"]));
    }

    #[test]
    fn eliminate_composes() {
        let s = VarSpace::new(["a", "b", "x"]).unwrap();
        let i = ideal(&s, &["x - a - b", "a^2 - 1", "b^2 - 2"]);
        let both = i.eliminate(&[0, 1]);
        let stepwise = i.eliminate(&[0]).eliminate(&[1]);
        assert_eq!(both, stepwise);
    }

    #[test]
    fn contains_examples() {
        let s = xy();
        assert!(ideal(&s, &["x", "y"]).contains(&ideal(&s, &["x"])).unwrap());
        assert!(!ideal(&s, &["x"]).contains(&ideal(&s, &["x", "y"])).unwrap());
        assert!(ideal(&s, &["x + y"])
            .contains(&ideal(&s, &["x^2 + 2*x*y + y^2"]))
            .unwrap());
    }

    #[test]
    fn dimension_examples() {
        let s = xy();
        assert_eq!(ideal(&s, &["x^2 + y^2 - 1"]).dimension(), 1);
        assert_eq!(ideal(&s, &["x", "y"]).dimension(), 0);
        assert_eq!(Ideal::unit(&s).dimension(), -1);
        assert_eq!(Ideal::zero(&s).dimension(), 2);
    }

    #[test]
    fn quotient_basis_examples() {
        let s = xy();
        let i = ideal(&s, &["x^2 - 2", "y - 1"]);
        match i.quotient_basis() {
            QuotientBasis::Finite(b) => {
                assert_eq!(b.len(), 2);
                assert_eq!(b[0], Monomial::one(2));
                assert_eq!(b[1], Monomial::var(2, 0));
            }
            QuotientBasis::Infinite => panic!("expected finite"),
        }
        let one_var = VarSpace::new(["x"]).unwrap();
        match ideal(&one_var, &["x"]).quotient_basis() {
            QuotientBasis::Finite(b) => assert_eq!(b, vec![Monomial::one(1)]),
            QuotientBasis::Infinite => panic!("expected finite"),
        }
        assert_eq!(
            ideal(&s, &["x*y"]).quotient_basis(),
            QuotientBasis::Infinite
        );
    }

    #[test]
    fn quotient_finite_iff_dimension_nonpositive() {
        let s = xy();
        for texts in [
            vec!["x^2 - 2", "y - 1"],
            vec!["x*y"],
            vec!["x"],
            vec!["x^2 + y^2 - 1"],
            vec!["x - 1", "y - 2"],
            vec!["1"],
        ] {
            let i = ideal(&s, &texts.iter().map(|t| *t).collect::<Vec<_>>());
            let finite = matches!(i.quotient_basis(), QuotientBasis::Finite(_));
            assert_eq!(finite, i.dimension() <= 0, "mismatch on {texts:?}");
        }
    }

    #[test]
    fn degree_truncate_examples() {
        let s = xy();
        let i = ideal(&s, &["y - x^2"]);
        assert!(i.degree_truncate(1).is_empty());
        let d2 = i.degree_truncate(2);
        assert_eq!(d2.len(), 1);
        assert_eq!(d2[0], Polynomial::parse(&s, "x^2 - y").unwrap());
        let ix = ideal(&s, &["x"]);
        let d1 = ix.degree_truncate(1);
        assert_eq!(d1, vec![Polynomial::parse(&s, "x").unwrap()]);
        // every member reduces to zero and respects the degree bound
        for p in ix.degree_truncate(3) {
            assert!(ix.contains_poly(&p));
            assert!(p.total_degree().unwrap_or(0) <= 3);
        }
    }

    #[test]
    fn radical_membership() {
        let s = xy();
        let i = ideal(&s, &["x^2"]);
        let x = Polynomial::parse(&s, "x").unwrap();
        assert!(!i.contains_poly(&x));
        assert!(i.in_radical(&x));
        assert!(!i.in_radical(&Polynomial::parse(&s, "y").unwrap()));
    }

    #[test]
    fn vanishing_ideal_of_points() {
        let s = xy();
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(1), int(1)],
            vec![int(2), int(4)],
        ];
        let i = vanishing_ideal(&s, &pts, MonomialOrder::GrevLex);
        for p in &pts {
            assert!(i.vanishes_at(p));
        }
        // the parabola interpolates these three points
        assert!(i.contains_poly(&Polynomial::parse(&s, "y - x^2").unwrap()));
        match i.quotient_basis() {
            QuotientBasis::Finite(b) => assert_eq!(b.len(), 3),
            QuotientBasis::Infinite => panic!("points give a finite quotient"),
        }
        assert!(vanishing_ideal(&s, &[], MonomialOrder::GrevLex).is_unit());
    }
}
