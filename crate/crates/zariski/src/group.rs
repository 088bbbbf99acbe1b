//! Zariski closures of matrix groups: cyclic closures through eigenvalue
//! relation lattices, the conjugation-closure fixpoint for an irreducible
//! variety plus finitely many generators, a from-below fixpoint for
//! finitely generated groups, and the reduction for constructible
//! generator sets.
//!
//! All varieties are carried by ideals over plain matrix coordinates;
//! the corresponding closed subset of the `GL_n` variety (over the
//! `n^2 + 1` coordinates including the inverse determinant) is always
//! the x-ideal plus `det(x)*y - 1`: a relation on the graph of `1/det`
//! clears denominators to a relation on the entries alone, so nothing
//! is lost by projecting away `y`. Working values are unions of pieces
//! (see [`crate::pieces`]); a stabilized union is a Zariski-closed
//! sub-semigroup of `GL_n` containing the generators, hence a group
//! containing the true closure, while the from-below construction keeps
//! it inside.

use num::{BigInt, One, Zero};

use crate::bounds::{Bounds, Status};
use crate::components::{all_rational_points, split_components};
use crate::constructible::{image_closure_of_map, witness_point, Cell, ConstructibleSet, PolyMap};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::lattice::{integer_kernel, prime_exponents};
use crate::matideal::{conjugate_ideal, contains_matrix, ideal_of_matrices, with_inverse_det};
use crate::matrix::{finite_order, jordan_chevalley, unipotent_log, QMatrix, Subspace};
use crate::pieces::{piece_product, PieceSet};
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::vars::VarSpace;

/// Hard cap on union pieces before a closure degrades to a lower bound.
const PIECE_CAP: usize = 200;

/// Finite-order generators of order up to this are kept as individual
/// point pieces.
const POINT_PIECE_CAP: u64 = 24;

/// Closed subvariety of `GL_n` carried by its matrix-coordinate ideal;
/// the full ideal over `n^2 + 1` coordinates adds `det(x)*y - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GLVariety {
    n: usize,
    ideal: Ideal,
}

impl GLVariety {
    pub fn new(n: usize, ideal: Ideal) -> Result<Self> {
        crate::matideal::expect_matrix_space(n, &ideal)?;
        Ok(GLVariety { n, ideal })
    }

    pub fn identity_only(n: usize) -> Self {
        GLVariety {
            n,
            ideal: ideal_of_matrices(n, &[QMatrix::identity(n)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Ideal over matrix coordinates plus the inverse-determinant
    /// coordinate `y`, containing `det(x)*y - 1`.
    pub fn gl_ideal(&self) -> Result<Ideal> {
        with_inverse_det(self.n, &self.ideal)
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        contains_matrix(&self.ideal, m)
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&QMatrix::identity(self.n))
    }
}

/// A computed group closure: the combined variety, its union pieces,
/// the result quality, and the fixpoint round count.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub variety: GLVariety,
    pub pieces: Vec<Ideal>,
    pub status: Status,
    pub iterations: usize,
}

impl ClosureResult {
    fn from_set(n: usize, set: &PieceSet, status: Status, iterations: usize) -> Result<Self> {
        Ok(ClosureResult {
            variety: GLVariety::new(n, set.combined()?)?,
            pieces: set.maximal_pieces(),
            status,
            iterations,
        })
    }
}

/// Integer lattice of multiplicative relations among eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

/// Basis of `{k in Z^m : prod lambda_i^{k_i} = 1}` for nonzero rational
/// eigenvalues: the integer kernel of the prime-exponent matrix with a
/// sign-parity row, the sign handled by an auxiliary order-2 column.
pub fn eigen_relations(eigs: &[Rat]) -> Result<RelationLattice> {
    let m = eigs.len();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut exps: Vec<Vec<i64>> = Vec::new();
    let mut signs: Vec<i64> = Vec::new();
    for e in eigs {
        if e.is_zero() {
            return Err(Error::invalid("eigen_relations: zero eigenvalue"));
        }
        let (vec, neg) = prime_exponents(e, &mut primes)?;
        exps.push(vec);
        signs.push(if neg { 1 } else { 0 });
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (pi, _) in primes.iter().enumerate() {
        let mut row: Vec<BigInt> = (0..m)
            .map(|i| BigInt::from(exps[i].get(pi).copied().unwrap_or(0)))
            .collect();
        row.push(BigInt::zero());
        rows.push(row);
    }
    let mut sign_row: Vec<BigInt> = signs.iter().map(|&s| BigInt::from(s)).collect();
    sign_row.push(BigInt::from(2));
    rows.push(sign_row);
    let kernel = integer_kernel(&rows, m + 1);
    let basis: Vec<Vec<BigInt>> = kernel
        .into_iter()
        .map(|mut v| {
            v.pop();
            v
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    for k in &basis {
        let mut acc = Rat::one();
        for (i, e) in k.iter().enumerate() {
            let e_i64: i64 = e.try_into().expect("desk-scale exponent");
            let p = num::pow::pow(eigs[i].clone(), e_i64.unsigned_abs() as usize);
            if e_i64 >= 0 {
                acc *= p;
            } else {
                acc /= p;
            }
        }
        debug_assert!(acc.is_one(), "relation lattice vector is not a relation");
    }
    Ok(RelationLattice {
        rank: basis.len(),
        basis,
    })
}

/// Rational eigenstructure of a semisimple matrix: eigenvalues with
/// eigenspaces covering the whole space.
fn rational_eigen_decomposition(s: &QMatrix) -> Option<Vec<(Rat, Subspace)>> {
    let chi = s.char_poly();
    let roots = chi.rational_root_multiplicities()?;
    let n = s.dim();
    let mut out = Vec::new();
    let mut total = 0usize;
    for (value, _mult) in roots {
        let shifted = s.sub(&QMatrix::identity(n).scale(&value));
        let kernel_vectors = crate::linalg::kernel_basis(shifted.rows(), n);
        let space = Subspace::span_of(n, &kernel_vectors);
        total += space.dim();
        out.push((value, space));
    }
    if total == n {
        Some(out)
    } else {
        None
    }
}

/// Projector onto each eigenspace along the others.
fn eigen_projectors(decomp: &[(Rat, Subspace)], n: usize) -> Vec<QMatrix> {
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    let mut ranges = Vec::new();
    for (_, space) in decomp {
        let start = cols.len();
        cols.extend(space.basis_rows().iter().cloned());
        ranges.push(start..cols.len());
    }
    let p = QMatrix::from_fn(n, |i, j| cols[j][i].clone());
    let p_inv = p.inverse().expect("eigenbasis is invertible");
    ranges
        .into_iter()
        .map(|range| {
            let selector = QMatrix::from_fn(n, |i, j| {
                if i == j && range.contains(&i) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            });
            p.mul(&selector).mul(&p_inv)
        })
        .collect()
}

/// Zariski closure of the cyclic group generated by one invertible
/// matrix, as union pieces. Finite-order generators give point pieces;
/// otherwise the semisimple part must have rational eigenvalues (or be
/// of finite order itself), and the closure is the image closure of the
/// relation torus times the unipotent one-parameter line.
pub fn cyclic_closure_pieces(a: &QMatrix) -> Result<Vec<Ideal>> {
    let n = a.dim();
    if !a.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let space = VarSpace::matrix(n);
    if let Some(order) = finite_order(a)? {
        if order <= POINT_PIECE_CAP {
            return Ok((1..=order)
                .map(|k| Ideal::of_point(&space, &crate::matideal::flatten(&a.pow(k))))
                .collect());
        }
        let points: Vec<QMatrix> = (1..=order).map(|k| a.pow(k)).collect();
        return Ok(vec![ideal_of_matrices(n, &points)]);
    }
    let (s, u) = jordan_chevalley(a)?;
    let log_u = if u.is_identity() {
        None
    } else {
        Some(unipotent_log(&u)?)
    };

    if let Some(decomp) = rational_eigen_decomposition(&s) {
        let projectors = eigen_projectors(&decomp, n);
        let eigs: Vec<Rat> = decomp.iter().map(|(v, _)| v.clone()).collect();
        let lattice = eigen_relations(&eigs)?;
        let m = eigs.len();
        let mut names: Vec<String> = (1..=m).map(|i| format!("d{i}")).collect();
        if log_u.is_some() {
            names.push("t".to_string());
        }
        let src = VarSpace::new(names)?;
        let mut torus_gens = Vec::new();
        for k in &lattice.basis {
            let mut pos = Polynomial::one(&src);
            let mut neg = Polynomial::one(&src);
            for (i, e) in k.iter().enumerate() {
                let e_i64: i64 = e.try_into().expect("desk-scale exponent");
                if e_i64 > 0 {
                    pos = pos.mul(&Polynomial::var(&src, i).pow(e_i64 as u32));
                } else if e_i64 < 0 {
                    neg = neg.mul(&Polynomial::var(&src, i).pow((-e_i64) as u32));
                }
            }
            torus_gens.push(pos.sub(&neg));
        }
        let source_ideal = Ideal::new(&src, torus_gens);
        let semis: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut entry = Polynomial::zero(&src);
                        for (k, proj) in projectors.iter().enumerate() {
                            let c = proj.get(i, j);
                            if !c.is_zero() {
                                entry = entry.add(&Polynomial::var(&src, k).scale(c));
                            }
                        }
                        entry
                    })
                    .collect()
            })
            .collect();
        let entries = match &log_u {
            None => semis,
            Some(log) => {
                let t = Polynomial::var(&src, m);
                let exp = unipotent_exp_entries(&src, &t, log, n);
                poly_mat_mul(&semis, &exp)
            }
        };
        let components: Vec<Polynomial> = entries.into_iter().flatten().collect();
        let map = PolyMap::new(&src, &space, components)?;
        let ideal = image_closure_of_map(&source_ideal, None, &map)?;
        return Ok(vec![ideal]);
    }

    // irrational eigenvalues with a finite-order semisimple part: one
    // unipotent line piece per power of s
    if let Some(order) = finite_order(&s)? {
        let log = log_u
            .ok_or_else(|| Error::invalid("finite-order matrix should have been handled above"))?;
        let src = VarSpace::new(["t"])?;
        let t = Polynomial::var(&src, 0);
        let exp = unipotent_exp_entries(&src, &t, &log, n);
        let mut out = Vec::new();
        for k in 1..=order {
            let sk = s.pow(k);
            let entries: Vec<Polynomial> = (0..n)
                .flat_map(|i| {
                    let exp = &exp;
                    let sk = sk.clone();
                    (0..n).map(move |j| {
                        let mut entry = Polynomial::zero(exp[0][0].space());
                        for l in 0..n {
                            let c = sk.get(i, l);
                            if !c.is_zero() {
                                entry = entry.add(&exp[l][j].scale(c));
                            }
                        }
                        entry
                    })
                })
                .collect();
            let map = PolyMap::new(&src, &space, entries)?;
            out.push(image_closure_of_map(&Ideal::zero(&src), None, &map)?);
        }
        return Ok(out);
    }

    Err(Error::UnsupportedEigenvalues(format!(
        "irrational eigenvalues of infinite order in {:?}",
        a
    )))
}

/// Zariski closure of the cyclic group as a single variety.
pub fn cyclic_closure(a: &QMatrix) -> Result<GLVariety> {
    let n = a.dim();
    let pieces = cyclic_closure_pieces(a)?;
    let mut acc = Ideal::unit(&VarSpace::matrix(n));
    for p in &pieces {
        acc = acc.intersect(p)?;
    }
    GLVariety::new(n, acc)
}

fn unipotent_exp_entries(
    src: &VarSpace,
    t: &Polynomial,
    log: &QMatrix,
    n: usize,
) -> Vec<Vec<Polynomial>> {
    let mut entries: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Polynomial::one(src)
                    } else {
                        Polynomial::zero(src)
                    }
                })
                .collect()
        })
        .collect();
    let mut power = QMatrix::identity(n);
    let mut factorial = Rat::one();
    let mut t_pow = Polynomial::one(src);
    for k in 1..n {
        power = power.mul(log);
        if power.is_zero() {
            break;
        }
        factorial *= Rat::from_integer(BigInt::from(k));
        t_pow = t_pow.mul(t);
        for i in 0..n {
            for j in 0..n {
                let c = power.get(i, j).clone() / factorial.clone();
                if !c.is_zero() {
                    entries[i][j] = entries[i][j].add(&t_pow.scale(&c));
                }
            }
        }
    }
    entries
}

fn poly_mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = a.len();
    let space = a[0][0].space().clone();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Polynomial::zero(&space);
                    for k in 0..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// One saturation pass: all unprocessed piece products, then all
/// unprocessed conjugations. Returns whether any piece was added.
fn saturation_pass(
    set: &mut PieceSet,
    n: usize,
    conjugators: &[QMatrix],
    product_seen: &mut std::collections::BTreeSet<(usize, usize)>,
    conj_seen: &mut std::collections::BTreeSet<(usize, usize)>,
) -> Result<bool> {
    let mut changed = false;
    let count = set.len();
    let mut batch: Vec<Ideal> = Vec::new();
    for i in 0..count {
        for j in 0..count {
            if !product_seen.insert((i, j)) {
                continue;
            }
            let q = piece_product(n, &set.pieces()[i], &set.pieces()[j])?;
            if !set.covers_ideal(&q)? {
                batch.push(q);
            }
        }
    }
    for (gi, g) in conjugators.iter().enumerate() {
        for pi in 0..count {
            if !conj_seen.insert((gi, pi)) {
                continue;
            }
            let c = conjugate_ideal(n, &set.pieces()[pi], g)?;
            if !set.covers_ideal(&c)? {
                batch.push(c);
            }
        }
    }
    for q in batch {
        if set.covers_ideal(&q)? {
            continue;
        }
        if set.insert(q) {
            changed = true;
        }
    }
    Ok(changed)
}

/// The smallest Zariski-closed subgroup containing `y` and closed under
/// conjugation by the given matrices: saturates the pieces of `y` under
/// products and conjugates until the union stabilizes.
pub fn fin_plus_irred_closure(
    a_list: &[QMatrix],
    y: &GLVariety,
    bounds: &Bounds,
) -> Result<ClosureResult> {
    let n = y.dim();
    if !y.contains_identity() {
        return Err(Error::invalid(
            "fin_plus_irred_closure: variety must contain the identity",
        ));
    }
    for a in a_list {
        if !a.is_invertible() {
            return Err(Error::SingularMatrix);
        }
    }
    let mut set = PieceSet::from_ideal(n, y.ideal());
    let mut product_seen = std::collections::BTreeSet::new();
    let mut conj_seen = std::collections::BTreeSet::new();
    for round in 1..=bounds.max_group_iter {
        let changed = saturation_pass(&mut set, n, a_list, &mut product_seen, &mut conj_seen)?;
        if set.len() > PIECE_CAP {
            return ClosureResult::from_set(n, &set, Status::LowerBound, round);
        }
        if !changed {
            return ClosureResult::from_set(n, &set, Status::Exact, round);
        }
    }
    ClosureResult::from_set(n, &set, Status::LowerBound, bounds.max_group_iter)
}

/// Zariski closure of the group generated by finitely many invertible
/// matrices: a from-below fixpoint over products, cyclic closures, and
/// conjugates, enriched with cyclic closures of escaping generator
/// words. Stabilization certifies exactness: the stabilized union is a
/// closed sub-semigroup of `GL_n` containing the generators.
pub fn group_closure(gens: &[QMatrix], bounds: &Bounds) -> Result<ClosureResult> {
    let Some(first) = gens.first() else {
        let set = PieceSet::from_ideal(1, GLVariety::identity_only(1).ideal());
        return ClosureResult::from_set(1, &set, Status::Exact, 0);
    };
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::invalid("group_closure: mixed dimensions"));
        }
        if !g.is_invertible() {
            return Err(Error::SingularMatrix);
        }
    }
    let mut distinct: Vec<QMatrix> = Vec::new();
    for g in gens {
        if !distinct.contains(g) {
            distinct.push(g.clone());
        }
    }
    // incremental from-below construction: generators already inside the
    // current union are skipped (the final certificate re-checks every
    // generator, so skipping never costs exactness)
    let mut set = PieceSet::empty(n);
    let mut product_seen = std::collections::BTreeSet::new();
    let mut conj_seen = std::collections::BTreeSet::new();
    let mut rounds = 0usize;
    let mut saturated = false;
    for (gi, g) in distinct.iter().enumerate() {
        if saturated && set.contains_matrix(g) {
            continue;
        }
        for piece in cyclic_closure_pieces(g)? {
            set.insert(piece);
        }
        saturated = false;
        while rounds < bounds.max_group_iter {
            rounds += 1;
            let changed = saturation_pass(
                &mut set,
                n,
                &distinct[..=gi],
                &mut product_seen,
                &mut conj_seen,
            )?;
            if set.len() > PIECE_CAP {
                return ClosureResult::from_set(n, &set, Status::LowerBound, rounds);
            }
            if !changed {
                saturated = true;
                break;
            }
        }
        if !saturated {
            return ClosureResult::from_set(n, &set, Status::LowerBound, rounds);
        }
    }
    let words = crate::matideal::generator_words(&distinct, 4, 120);
    loop {
        // every generator must lie in the stabilized union
        let mut escaped = distinct.iter().find(|g| !set.contains_matrix(g)).cloned();
        if escaped.is_none() {
            // enrichment: the cyclic closure of the first escaping word
            escaped = words.iter().find(|w| !set.contains_matrix(w)).cloned();
        }
        let Some(w) = escaped else {
            return ClosureResult::from_set(n, &set, Status::Exact, rounds);
        };
        for piece in cyclic_closure_pieces(&w)? {
            set.insert(piece);
        }
        let mut stable = false;
        while rounds < bounds.max_group_iter {
            rounds += 1;
            let changed =
                saturation_pass(&mut set, n, &distinct, &mut product_seen, &mut conj_seen)?;
            if set.len() > PIECE_CAP {
                return ClosureResult::from_set(n, &set, Status::LowerBound, rounds);
            }
            if !changed {
                stable = true;
                break;
            }
        }
        if !stable {
            return ClosureResult::from_set(n, &set, Status::LowerBound, rounds);
        }
    }
}

/// A rational invertible point on the component, preferring the
/// identity and then points inside the rational-eigenvalue fragment.
fn component_witness(
    n: usize,
    space: &VarSpace,
    comp: &Ideal,
    det: &Polynomial,
    bounds: &Bounds,
) -> Result<QMatrix> {
    let identity = QMatrix::identity(n);
    if contains_matrix(comp, &identity) {
        return Ok(identity);
    }
    let cell = Cell::new(comp.clone(), Ideal::new(space, vec![det.clone()]))?;
    let comp_set = ConstructibleSet::from_cells(space, vec![cell])?;
    let mut fallback: Option<QMatrix> = None;
    for attempt in 0..4u64 {
        let config = crate::constructible::WitnessConfig {
            seed: bounds.seed.wrapping_add(attempt),
            max_retries: bounds.witness_retries,
        };
        let point = match witness_point(&comp_set, &config) {
            Ok(p) => p,
            Err(Error::NoRationalWitness) if fallback.is_some() => break,
            Err(e) => return Err(e),
        };
        let a = QMatrix::from_fn(n, |i, j| point[i * n + j].clone());
        if cyclic_closure_pieces(&a).is_ok() {
            return Ok(a);
        }
        fallback = Some(a);
    }
    // every found witness had irrational spectrum; surface the last one
    // so the caller reports the unsupported instance
    let a = fallback.expect("witness loop found at least one point or returned early");
    cyclic_closure_pieces(&a)?;
    Ok(a)
}

/// Zariski closure of the group generated by a constructible subset of
/// the invertible matrices: irreducible components of the closure,
/// rational witness points, components translated through the identity,
/// then the conjugation-closure fixpoint combined with the finitely
/// generated part.
pub fn constructible_group_closure(
    set: &ConstructibleSet,
    n: usize,
    bounds: &Bounds,
) -> Result<ClosureResult> {
    let space = VarSpace::matrix(n);
    if set.space() != &space {
        return Err(Error::mismatch(
            "constructible_group_closure: matrix coordinates expected",
        ));
    }
    let det = crate::matideal::det_poly(&space, n);
    for cell in set.cells() {
        let singular_part = Cell::new(
            cell.positive()
                .sum(&Ideal::new(&space, vec![det.clone()]))?,
            cell.negative().clone(),
        )?;
        if !singular_part.is_empty()? {
            return Err(Error::invalid(
                "constructible_group_closure: generators must be invertible",
            ));
        }
    }
    let closure = set.closure()?;
    if closure.is_unit() {
        let empty = PieceSet::empty(n);
        return ClosureResult::from_set(n, &empty, Status::Exact, 0);
    }
    if closure.dimension() <= 0 {
        if let Some(points) = all_rational_points(&closure) {
            let matrices: Vec<QMatrix> = points
                .iter()
                .map(|p| QMatrix::from_fn(n, |i, j| p[i * n + j].clone()))
                .collect();
            return group_closure(&matrices, bounds);
        }
    }
    let components = split_components(&closure)?;
    let mut witnesses: Vec<QMatrix> = Vec::new();
    let mut translated: Vec<Ideal> = Vec::new();
    for comp in &components {
        let a = component_witness(n, &space, comp, &det, bounds)?;
        let a_inv = a.inverse()?;
        let y_i = crate::matideal::sandwich_invertible(n, comp, &a_inv, &QMatrix::identity(n))?;
        witnesses.push(a);
        translated.push(y_i);
    }
    let mut y = translated[0].clone();
    for t in &translated[1..] {
        y = piece_product(n, &y, t)?;
    }
    let y_variety = GLVariety::new(n, y)?;
    let fp = fin_plus_irred_closure(&witnesses, &y_variety, bounds)?;
    let g = group_closure(&witnesses, bounds)?;
    let mut out = PieceSet::empty(n);
    for gp in &g.pieces {
        for hp in &fp.pieces {
            out.insert(piece_product(n, gp, hp)?);
        }
    }
    ClosureResult::from_set(
        n,
        &out,
        g.status.meet(fp.status),
        g.iterations.max(fp.iterations),
    )
}
