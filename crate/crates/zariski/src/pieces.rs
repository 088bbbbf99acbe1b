//! Union-of-pieces representation for matrix varieties.
//!
//! Group and semigroup closures are unions of fairly simple irreducible
//! varieties. Keeping the union as an explicit list of piece ideals
//! keeps every product computation a product of two *simple* ideals
//! (cheap eliminations) instead of one blown-up intersection ideal.
//! Pieces are append-only so pair queues stay valid; subsumed pieces
//! are only pruned when the combined ideal is materialized.

use std::cell::RefCell;

use crate::components::{split_lenient, variety_contained};
use crate::error::Result;
use crate::ideal::Ideal;
use crate::matideal::{
    contains_matrix, flatten, product_closure, sandwich_closure, sandwich_invertible,
};
use crate::matrix::QMatrix;
use crate::monomial::MonomialOrder;
use crate::rat::Rat;
use crate::vars::VarSpace;

#[derive(Clone, Debug)]
pub struct PieceSet {
    n: usize,
    space: VarSpace,
    pieces: Vec<Ideal>,
    combined: RefCell<Option<Ideal>>,
}

impl PieceSet {
    pub fn empty(n: usize) -> Self {
        PieceSet {
            n,
            space: VarSpace::matrix(n),
            pieces: Vec::new(),
            combined: RefCell::new(None),
        }
    }

    pub fn from_ideal(n: usize, ideal: &Ideal) -> Self {
        let mut set = PieceSet::empty(n);
        set.insert(ideal.clone());
        set
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &VarSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[Ideal] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Splits and appends; skips units and pieces already covered by an
    /// existing piece. Returns true if anything was added.
    pub fn insert(&mut self, ideal: Ideal) -> bool {
        let mut added = false;
        for piece in split_lenient(&ideal) {
            if piece.is_unit() {
                continue;
            }
            if self.pieces.iter().any(|p| variety_contained(&piece, p)) {
                continue;
            }
            self.pieces.push(piece);
            *self.combined.borrow_mut() = None;
            added = true;
        }
        added
    }

    pub fn contains_matrix(&self, m: &QMatrix) -> bool {
        self.pieces.iter().any(|p| contains_matrix(p, m))
    }

    pub fn contains_point(&self, point: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.vanishes_at(point))
    }

    /// The single defining ideal of the union: intersection of the
    /// subsumption-maximal pieces. Cached until the set changes.
    pub fn combined(&self) -> Result<Ideal> {
        if let Some(cached) = self.combined.borrow().as_ref() {
            return Ok(cached.clone());
        }
        let maximal = self.maximal_pieces();
        let mut acc = Ideal::unit(&self.space);
        for p in &maximal {
            acc = acc.intersect(p)?;
        }
        *self.combined.borrow_mut() = Some(acc.clone());
        Ok(acc)
    }

    /// Pieces not contained in another piece.
    pub fn maximal_pieces(&self) -> Vec<Ideal> {
        let mut out: Vec<Ideal> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let subsumed = self.pieces.iter().enumerate().any(|(j, q)| {
                i != j && variety_contained(p, q) && !(j > i && variety_contained(q, p))
            });
            if !subsumed && !out.iter().any(|kept| kept == p) {
                out.push(p.clone());
            }
        }
        if out.is_empty() && !self.pieces.is_empty() {
            out.push(self.pieces[0].clone());
        }
        out
    }

    /// Complete union-containment test: `V(q)` lies inside the union.
    /// Cheap piecewise check first, then the exact test against the
    /// combined ideal (a generator set of the union's vanishing ideal).
    pub fn covers_ideal(&self, q: &Ideal) -> Result<bool> {
        if q.is_unit() {
            return Ok(true);
        }
        if self.pieces.iter().any(|p| variety_contained(q, p)) {
            return Ok(true);
        }
        if self.pieces.len() == 1 {
            return Ok(false);
        }
        let combined = self.combined()?;
        Ok(combined.gens().iter().all(|g| q.in_radical(g)))
    }

    /// True if the denotation covers every point of the other set.
    pub fn covers_set(&self, other: &PieceSet) -> Result<bool> {
        for p in &other.pieces {
            if !self.covers_ideal(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Recognizes the maximal ideal of a single rational point and returns
/// the point as a matrix.
pub fn as_single_point(n: usize, ideal: &Ideal) -> Option<QMatrix> {
    let gb = ideal.gb(MonomialOrder::GrevLex);
    if gb.len() != n * n {
        return None;
    }
    let mut entries: Vec<Option<Rat>> = vec![None; n * n];
    for g in gb.iter() {
        if g.total_degree() != Some(1) || g.num_terms() > 2 {
            return None;
        }
        let support = g.support();
        if support.len() != 1 {
            return None;
        }
        let v = support[0];
        let lin = g.coeff(&crate::monomial::Monomial::var(n * n, v));
        let cst = g.coeff(&crate::monomial::Monomial::one(n * n));
        if entries[v].is_some() {
            return None;
        }
        entries[v] = Some(-cst / lin);
    }
    if entries.iter().any(|e| e.is_none()) {
        return None;
    }
    Some(QMatrix::from_fn(n, |i, j| {
        entries[i * n + j].clone().unwrap()
    }))
}

/// `Zcl(V(a) * V(b))` with shortcuts for point factors: point-by-point
/// products are direct, invertible constant factors are substitutions,
/// and only the general case runs an elimination.
pub fn piece_product(n: usize, a: &Ideal, b: &Ideal) -> Result<Ideal> {
    let pa = as_single_point(n, a);
    let pb = as_single_point(n, b);
    match (&pa, &pb) {
        (Some(ma), Some(mb)) => {
            let prod = ma.mul(mb);
            return Ok(Ideal::of_point(a.space(), &flatten(&prod)));
        }
        (Some(ma), None) if ma.is_invertible() => {
            return sandwich_invertible(n, b, ma, &QMatrix::identity(n));
        }
        (Some(ma), None) => {
            return sandwich_closure(n, b, ma, &QMatrix::identity(n));
        }
        (None, Some(mb)) if mb.is_invertible() => {
            return sandwich_invertible(n, a, &QMatrix::identity(n), mb);
        }
        (None, Some(mb)) => {
            return sandwich_closure(n, a, &QMatrix::identity(n), mb);
        }
        (None, None) => {}
    }
    product_closure(n, a, b)
}
