//! Factorization-based splitting of varieties into components, with
//! conservative irreducibility certificates. Splitting never guesses:
//! the strict entry point reports `ComponentSplitIncomplete` when it
//! cannot certify, while the lenient one falls back to the unsplit
//! ideal (still a sound piece of a union).

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ideal::{Ideal, QuotientBasis};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::unipoly::UPoly;
use crate::vars::VarSpace;

/// Variety containment `V(inner) subseteq V(outer)` by radical
/// membership of the outer generators.
pub fn variety_contained(inner: &Ideal, outer: &Ideal) -> bool {
    outer.gens().iter().all(|g| inner.in_radical(g))
}

/// Splits into certified irreducible components, or fails.
pub fn split_components(ideal: &Ideal) -> Result<Vec<Ideal>> {
    split_rec(ideal, true)
}

/// Splits as far as the factoring heuristics reach; uncertified pieces
/// are kept whole.
pub fn split_lenient(ideal: &Ideal) -> Vec<Ideal> {
    split_rec(ideal, false).expect("lenient split cannot fail")
}

fn split_rec(ideal: &Ideal, strict: bool) -> Result<Vec<Ideal>> {
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    for g in ideal.canonical_gens().iter() {
        if let Some((f1, f2)) = try_factor(g) {
            let left = split_rec(&ideal.sum(&Ideal::new(ideal.space(), vec![f1]))?, strict)?;
            let right = split_rec(&ideal.sum(&Ideal::new(ideal.space(), vec![f2]))?, strict)?;
            let mut out: Vec<Ideal> = Vec::new();
            for cand in left.into_iter().chain(right) {
                if out.iter().any(|kept| variety_contained(&cand, kept)) {
                    continue;
                }
                out.retain(|kept| !variety_contained(kept, &cand));
                out.push(cand);
            }
            return Ok(out);
        }
    }
    if certify_irreducible(ideal) {
        return Ok(vec![ideal.clone()]);
    }
    if ideal.dimension() <= 0 {
        if let Some(points) = all_rational_points(ideal) {
            return Ok(points
                .into_iter()
                .map(|p| Ideal::of_point(ideal.space(), &p))
                .collect());
        }
    }
    if strict {
        Err(Error::ComponentSplitIncomplete(format!("{ideal:?}")))
    } else {
        Ok(vec![ideal.clone()])
    }
}

/// The complete rational point list of a zero-dimensional ideal, when
/// every coordinate of every complex point is provably rational (each
/// single-variable elimination ideal splits over Q).
pub fn all_rational_points(ideal: &Ideal) -> Option<Vec<Vec<Rat>>> {
    let space = ideal.space();
    let arity = space.arity();
    for v in 0..arity {
        let drop: Vec<usize> = (0..arity).filter(|&i| i != v).collect();
        let uni = ideal.eliminate(&drop);
        let mut found = false;
        for g in uni.gens() {
            if g.is_zero() {
                continue;
            }
            if let Some(up) = to_upoly_single(g, v) {
                if up.rational_root_multiplicities().is_some() {
                    found = true;
                    break;
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some(crate::constructible::zero_dim_points(ideal))
}

pub fn to_upoly_single(p: &Polynomial, var: usize) -> Option<UPoly> {
    if !p.support().iter().all(|&v| v == var) {
        return None;
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exp(var) as usize] = c.clone();
    }
    Some(UPoly::new(coeffs))
}

pub fn from_upoly(space: &VarSpace, up: &UPoly, var: usize) -> Polynomial {
    let mut p = Polynomial::zero(space);
    for (e, c) in up.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let mut exps = vec![0u32; space.arity()];
            exps[var] = e as u32;
            p.add_term(Monomial::new(exps), c.clone());
        }
    }
    p
}

/// One nontrivial factorization step, if visible: monomial content or a
/// rational root of a single-variable factor.
fn try_factor(p: &Polynomial) -> Option<(Polynomial, Polynomial)> {
    if p.is_zero() || p.is_constant() {
        return None;
    }
    let space = p.space().clone();
    let mut content: Option<Vec<u32>> = None;
    for (m, _) in p.terms() {
        content = Some(match content {
            None => m.exps().to_vec(),
            Some(acc) => acc
                .iter()
                .zip(m.exps())
                .map(|(a, b)| (*a).min(*b))
                .collect(),
        });
    }
    let content = content.unwrap();
    if content.iter().any(|&e| e > 0) {
        let var = content.iter().position(|&e| e > 0).unwrap();
        let divisor = Polynomial::var(&space, var);
        let quotient = divide_by_var(p, var);
        if !quotient.is_constant() {
            return Some((divisor, quotient));
        }
        return None;
    }
    let support = p.support();
    if support.len() == 1 {
        let v = support[0];
        let up = to_upoly_single(p, v)?;
        if up.degree() >= 2 {
            if let Some(root) = up.rational_roots().first() {
                let linear =
                    Polynomial::var(&space, v).sub(&Polynomial::constant(&space, root.clone()));
                let lin_up = UPoly::new(vec![-root.clone(), Rat::one()]);
                let (q, r) = up.div_rem(&lin_up);
                debug_assert!(r.is_zero());
                return Some((linear, from_upoly(&space, &q, v)));
            }
        }
    }
    None
}

fn divide_by_var(p: &Polynomial, var: usize) -> Polynomial {
    Polynomial::from_terms(
        p.space(),
        p.terms().map(|(m, c)| {
            let mut exps = m.exps().to_vec();
            assert!(exps[var] > 0);
            exps[var] -= 1;
            (Monomial::new(exps), c.clone())
        }),
    )
}

/// Conservative irreducibility certificates: affine subspaces, single
/// points, principal ideals whose generator is linear in some variable
/// with a monomial coefficient coprime to the remainder (Gauss), and
/// rootless single-variable cubics.
pub fn certify_irreducible(ideal: &Ideal) -> bool {
    let gb = ideal.canonical_gens();
    if gb.iter().all(|g| g.total_degree().unwrap_or(0) <= 1) {
        return true;
    }
    if let QuotientBasis::Finite(b) = ideal.quotient_basis() {
        if b.len() == 1 {
            return true;
        }
    }
    if gb.len() == 1 {
        let f = &gb[0];
        let support = f.support();
        for &v in &support {
            let degree_in_v = f.terms().map(|(m, _)| m.exp(v)).max().unwrap_or(0);
            if degree_in_v != 1 {
                continue;
            }
            let mut coeff_monos: Vec<Monomial> = Vec::new();
            let mut rest_monos: Vec<Monomial> = Vec::new();
            for (m, _) in f.terms() {
                if m.exp(v) == 1 {
                    let mut exps = m.exps().to_vec();
                    exps[v] = 0;
                    coeff_monos.push(Monomial::new(exps));
                } else {
                    rest_monos.push(m.clone());
                }
            }
            if coeff_monos.len() != 1 || rest_monos.is_empty() {
                continue;
            }
            let coeff = &coeff_monos[0];
            let shared = (0..f.space().arity())
                .any(|w| coeff.exp(w) > 0 && rest_monos.iter().all(|m| m.exp(w) > 0));
            if !shared {
                return true;
            }
        }
        if support.len() == 1 {
            if let Some(up) = to_upoly_single(f, support[0]) {
                if up.degree() <= 3 && up.rational_roots().is_empty() {
                    return true;
                }
            }
        }
    }
    false
}
