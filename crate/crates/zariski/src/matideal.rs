//! Helpers for ideals over n-by-n matrix coordinate spaces: product
//! closures via the multiplication map, conjugation and constant-factor
//! maps, and the semigroup/group stability certificates.

use num::Zero;

use crate::constructible::{image_closure_of_map, PolyMap};
use crate::error::{Error, Result};
use crate::ideal::{vanishing_ideal, Ideal};
use crate::matrix::QMatrix;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::vars::VarSpace;

pub fn flatten(m: &QMatrix) -> Vec<Rat> {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| m.get(i, j).clone()))
        .collect()
}

/// Vanishing ideal of a finite set of matrices over matrix coordinates.
pub fn ideal_of_matrices(n: usize, matrices: &[QMatrix]) -> Ideal {
    let space = VarSpace::matrix(n);
    let points: Vec<Vec<Rat>> = matrices.iter().map(flatten).collect();
    vanishing_ideal(&space, &points, MonomialOrder::GrevLex)
}

pub fn contains_matrix(ideal: &Ideal, m: &QMatrix) -> bool {
    ideal.vanishes_at(&flatten(m))
}

/// The doubled space for binary matrix maps, with `l_`/`r_` copies, and
/// the multiplication map `(L, R) -> L R` into plain matrix coordinates.
pub fn mult_map(n: usize) -> (VarSpace, PolyMap) {
    let target = VarSpace::matrix(n);
    let pair = target
        .prefixed("l_")
        .join(&target.prefixed("r_"))
        .expect("pair space");
    let mut components = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = Polynomial::zero(&pair);
            for k in 0..n {
                let l = Polynomial::var(&pair, i * n + k);
                let r = Polynomial::var(&pair, n * n + k * n + j);
                entry = entry.add(&l.mul(&r));
            }
            components.push(entry);
        }
    }
    let map = PolyMap::new(&pair, &target, components).expect("multiplication map");
    (pair, map)
}

/// Embeds an ideal over matrix coordinates into the left or right copy
/// of the doubled space.
fn embed_pair(ideal: &Ideal, pair: &VarSpace, n: usize, left: bool) -> Ideal {
    let offset = if left { 0 } else { n * n };
    let map: Vec<usize> = (0..n * n).map(|i| i + offset).collect();
    Ideal::new(
        pair,
        ideal.gens().iter().map(|g| g.embed(pair, &map)).collect(),
    )
}

/// Ideal of `Zcl(V(a) * V(b))` under matrix multiplication.
pub fn product_closure(n: usize, a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.is_unit() || b.is_unit() {
        return Ok(Ideal::unit(a.space()));
    }
    let (pair, map) = mult_map(n);
    let source = embed_pair(a, &pair, n, true).sum(&embed_pair(b, &pair, n, false))?;
    image_closure_of_map(&source, None, &map)
}

/// Certificate that `V(a) * V(b)` lies inside `V(target)`: each target
/// generator pulled back through multiplication reduces to zero modulo
/// the pair ideal, falling back to radical membership. Sufficient and
/// exact (the pullback vanishes on the pair variety iff the generator
/// vanishes on the product set).
pub fn product_contained_in(n: usize, a: &Ideal, b: &Ideal, target: &Ideal) -> Result<bool> {
    if a.is_unit() || b.is_unit() {
        return Ok(true);
    }
    let (pair, map) = mult_map(n);
    let source = embed_pair(a, &pair, n, true).sum(&embed_pair(b, &pair, n, false))?;
    for f in target.gens() {
        let pulled = map.pullback(f);
        if source.reduce_mod(&pulled, MonomialOrder::GrevLex).is_zero() {
            continue;
        }
        if !source.in_radical(&pulled) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Components of the linear map `X -> g X h` as polynomials over matrix
/// coordinates.
fn sandwich_components(space: &VarSpace, n: usize, g: &QMatrix, h: &QMatrix) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = Polynomial::zero(space);
            for p in 0..n {
                if g.get(i, p).is_zero() {
                    continue;
                }
                for q in 0..n {
                    let c = g.get(i, p).clone() * h.get(q, j).clone();
                    if !c.is_zero() {
                        entry = entry.add(&Polynomial::var(space, p * n + q).scale(&c));
                    }
                }
            }
            out.push(entry);
        }
    }
    out
}

/// Exact ideal of `{g X h : X in V(ideal)}` when both constants are
/// invertible: a linear change of coordinates, no elimination.
pub fn sandwich_invertible(n: usize, ideal: &Ideal, g: &QMatrix, h: &QMatrix) -> Result<Ideal> {
    let gi = g.inverse()?;
    let hi = h.inverse()?;
    let space = ideal.space();
    // f(g^-1 X h^-1) vanishes exactly on g V h
    let map = sandwich_components(space, n, &gi, &hi);
    Ok(Ideal::new(
        space,
        ideal.gens().iter().map(|f| f.substitute(&map)).collect(),
    ))
}

/// Ideal of `Zcl(g V h)` for arbitrary constants, by image closure.
pub fn sandwich_closure(n: usize, ideal: &Ideal, g: &QMatrix, h: &QMatrix) -> Result<Ideal> {
    if g.is_invertible() && h.is_invertible() {
        return sandwich_invertible(n, ideal, g, h);
    }
    if ideal.is_unit() {
        return Ok(Ideal::unit(ideal.space()));
    }
    let space = ideal.space().clone();
    let source = space.prefixed("s_");
    let map_vec: Vec<usize> = (0..n * n).collect();
    let source_ideal = Ideal::new(
        &source,
        ideal
            .gens()
            .iter()
            .map(|f| f.embed(&source, &map_vec))
            .collect(),
    );
    let components = sandwich_components(&source, n, g, h);
    let restricted: Vec<Polynomial> = components;
    let map = PolyMap::new(&source, &space, restricted)?;
    image_closure_of_map(&source_ideal, None, &map)
}

/// Conjugation `g V g^{-1}` (exact, by substitution).
pub fn conjugate_ideal(n: usize, ideal: &Ideal, g: &QMatrix) -> Result<Ideal> {
    let gi = g.inverse()?;
    sandwich_invertible(n, ideal, g, &gi)
}

/// Certificate that conjugation by `g` maps `V(ideal)` into `V(target)`.
pub fn conjugation_contained_in(
    n: usize,
    ideal: &Ideal,
    g: &QMatrix,
    target: &Ideal,
) -> Result<bool> {
    let conj = conjugate_ideal(n, ideal, g)?;
    Ok(target.gens().iter().all(|f| conj.in_radical(f)))
}

/// The GL-variety ideal over `n^2 + 1` coordinates: the x-part plus
/// `det(x) * y - 1`.
pub fn with_inverse_det(n: usize, x_ideal: &Ideal) -> Result<Ideal> {
    let gl_space = VarSpace::matrix_with_inverse_det(n);
    let mut gens: Vec<Polynomial> = x_ideal
        .gens()
        .iter()
        .map(|g| g.embed_by_name(&gl_space))
        .collect::<Result<Vec<_>>>()?;
    let det = det_poly(&gl_space, n);
    let y = Polynomial::var(&gl_space, n * n);
    gens.push(det.mul(&y).sub(&Polynomial::one(&gl_space)));
    Ok(Ideal::new(&gl_space, gens))
}

/// Determinant of the coordinate matrix as a polynomial.
pub fn det_poly(space: &VarSpace, n: usize) -> Polynomial {
    fn rec(space: &VarSpace, n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::one(space);
        }
        let mut acc = Polynomial::zero(space);
        let r = rows[0];
        for (idx, &c) in cols.iter().enumerate() {
            let entry = Polynomial::var(space, r * n + c);
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&cc| cc != c).collect();
            let minor = rec(space, n, &rows[1..], &sub_cols);
            let term = entry.mul(&minor);
            acc = if idx % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }
    let all: Vec<usize> = (0..n).collect();
    rec(space, n, &all, &all)
}

/// Closed-subgroup inverse stability: the ideal is preserved under the
/// substitution `x -> adjugate(x) * y`, `y -> det(x)`, checked by
/// normal-form (then radical) reduction against the GL-variety ideal.
pub fn inverse_stable(n: usize, x_ideal: &Ideal) -> Result<bool> {
    let gl = with_inverse_det(n, x_ideal)?;
    let gl_space = gl.space().clone();
    // adjugate entries as polynomials: adj(X)_{ij} = (-1)^{i+j} M_{ji}
    let all: Vec<usize> = (0..n).collect();
    let mut subs: Vec<Polynomial> = Vec::with_capacity(n * n + 1);
    let y = Polynomial::var(&gl_space, n * n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let minor = poly_minor_named(&gl_space, n, &rows, &cols);
            let signed = if (i + j) % 2 == 0 { minor } else { minor.neg() };
            subs.push(signed.mul(&y));
        }
    }
    subs.push(det_poly(&gl_space, n));
    for f in x_ideal.gens() {
        let lifted = f.embed_by_name(&gl_space)?;
        let image = lifted.substitute(&subs);
        if gl.reduce_mod(&image, MonomialOrder::GrevLex).is_zero() {
            continue;
        }
        if !gl.in_radical(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn poly_minor_named(space: &VarSpace, n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
    fn rec(space: &VarSpace, n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::one(space);
        }
        let mut acc = Polynomial::zero(space);
        let r = rows[0];
        for (idx, &c) in cols.iter().enumerate() {
            let entry = Polynomial::var(space, r * n + c);
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&cc| cc != c).collect();
            let term = entry.mul(&rec(space, n, &rows[1..], &sub_cols));
            acc = if idx % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }
    rec(space, n, rows, cols)
}

/// Deterministic enumeration of words over the generators (products of
/// length 2..=maxlen, generator order preserved), capped.
pub fn generator_words(gens: &[QMatrix], maxlen: usize, cap: usize) -> Vec<QMatrix> {
    let mut out: Vec<QMatrix> = Vec::new();
    let mut layer: Vec<QMatrix> = gens.to_vec();
    for _ in 2..=maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for g in gens {
                let prod = w.mul(g);
                if out.len() + next.len() >= cap {
                    out.extend(next);
                    return out;
                }
                next.push(prod);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Checks that an x-space matrix ideal is consistent with the error
/// conventions of this module.
pub fn expect_matrix_space(n: usize, ideal: &Ideal) -> Result<()> {
    if ideal.space() != &VarSpace::matrix(n) {
        return Err(Error::mismatch("expected an ideal over matrix coordinates"));
    }
    Ok(())
}
