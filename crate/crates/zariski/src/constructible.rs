//! Constructible sets: finite unions of locally closed cells
//! `V(P) \ V(Q)` with Boolean operations, Zariski closures, image
//! closures under polynomial maps, rank strata, and rational witness
//! extraction.

use num::{BigInt, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::unipoly::UPoly;
use crate::vars::VarSpace;

/// One locally closed cell `V(positive) \ V(negative)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    positive: Ideal,
    negative: Ideal,
}

impl Cell {
    pub fn new(positive: Ideal, negative: Ideal) -> Result<Self> {
        if positive.space() != negative.space() {
            return Err(Error::mismatch(
                "cell: positive and negative parts over different spaces",
            ));
        }
        Ok(Cell { positive, negative })
    }

    /// The closed cell `V(ideal)`.
    pub fn closed(ideal: Ideal) -> Self {
        let unit = Ideal::unit(ideal.space());
        Cell {
            positive: ideal,
            negative: unit,
        }
    }

    pub fn space(&self) -> &VarSpace {
        self.positive.space()
    }

    pub fn positive(&self) -> &Ideal {
        &self.positive
    }

    pub fn negative(&self) -> &Ideal {
        &self.negative
    }

    /// Ideal of the Zariski closure of the cell: the saturation of the
    /// positive part by the negative part. `V(0)` as negative part means
    /// nothing survives the set difference.
    pub fn closure(&self) -> Result<Ideal> {
        let norm = self.normalized();
        if norm.negative.is_zero_ideal() {
            return Ok(Ideal::unit(self.space()));
        }
        if norm.negative.has_constant_gen() {
            return Ok(norm.positive.clone());
        }
        norm.positive.saturate(&norm.negative)
    }

    /// Reduces negative generators modulo the positive part; the
    /// denotation only depends on their values on V(positive).
    pub fn normalized(&self) -> Cell {
        if self.negative.is_zero_ideal() {
            return self.clone();
        }
        if self.negative.has_constant_gen() {
            return Cell {
                positive: self.positive.clone(),
                negative: Ideal::unit(self.space()),
            };
        }
        let reduced = self.negative.reduce_gens_mod(&self.positive);
        let negative = if reduced.has_constant_gen() {
            Ideal::unit(self.space())
        } else {
            reduced
        };
        Cell {
            positive: self.positive.clone(),
            negative,
        }
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.closure()?.is_unit())
    }

    pub fn member(&self, point: &[Rat]) -> bool {
        self.positive.vanishes_at(point)
            && self
                .negative
                .gens()
                .iter()
                .any(|q| !q.evaluate(point).is_zero())
    }
}

/// Finite union of cells over one space.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructibleSet {
    space: VarSpace,
    cells: Vec<Cell>,
}

/// Boolean operations on constructible sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Minus,
}

impl ConstructibleSet {
    pub fn empty(space: &VarSpace) -> Self {
        ConstructibleSet {
            space: space.clone(),
            cells: Vec::new(),
        }
    }

    pub fn full(space: &VarSpace) -> Self {
        ConstructibleSet {
            space: space.clone(),
            cells: vec![Cell::closed(Ideal::zero(space))],
        }
    }

    pub fn from_cells(space: &VarSpace, cells: Vec<Cell>) -> Result<Self> {
        for c in &cells {
            if c.space() != space {
                return Err(Error::mismatch("constructible set: cell over wrong space"));
            }
        }
        Ok(ConstructibleSet {
            space: space.clone(),
            cells,
        })
    }

    pub fn closed(ideal: Ideal) -> Self {
        let space = ideal.space().clone();
        ConstructibleSet {
            space,
            cells: vec![Cell::closed(ideal)],
        }
    }

    pub fn of_point(space: &VarSpace, point: &[Rat]) -> Self {
        ConstructibleSet::closed(Ideal::of_point(space, point))
    }

    pub fn space(&self) -> &VarSpace {
        &self.space
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn push(&mut self, cell: Cell) {
        debug_assert_eq!(cell.space(), &self.space);
        self.cells.push(cell);
    }

    /// Ideal of the Zariski closure: intersection of cell closures; the
    /// unit ideal for the empty set.
    pub fn closure(&self) -> Result<Ideal> {
        let mut acc = Ideal::unit(&self.space);
        for cell in &self.cells {
            let cl = cell.closure()?;
            acc = acc.intersect(&cl)?;
        }
        Ok(acc)
    }

    pub fn member(&self, point: &[Rat]) -> bool {
        self.cells.iter().any(|c| c.member(point))
    }

    pub fn is_empty(&self) -> Result<bool> {
        for c in &self.cells {
            if !c.is_empty()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Drops cells that are provably empty and normalizes the rest.
    pub fn pruned(&self) -> Result<ConstructibleSet> {
        let mut cells = Vec::new();
        for c in &self.cells {
            let norm = c.normalized();
            if !norm.is_empty()? && !cells.contains(&norm) {
                cells.push(norm);
            }
        }
        Ok(ConstructibleSet {
            space: self.space.clone(),
            cells,
        })
    }

    /// Cell algebra: unions concatenate; intersections distribute using
    /// `(V(P1)\V(Q1)) \cap (V(P2)\V(Q2)) = V(P1+P2) \ V(Q1*Q2)`; set
    /// difference goes through the complement
    /// `(V(P)\V(Q))^c = V(Q) \cup (V(0)\V(P))`.
    pub fn boolean(&self, other: &ConstructibleSet, op: BoolOp) -> Result<ConstructibleSet> {
        if self.space != other.space {
            return Err(Error::mismatch("boolean: different variable spaces"));
        }
        match op {
            BoolOp::Union => {
                let mut cells = self.cells.clone();
                cells.extend(other.cells.iter().cloned());
                Ok(ConstructibleSet {
                    space: self.space.clone(),
                    cells,
                })
            }
            BoolOp::Intersect => {
                let mut cells = Vec::new();
                for a in &self.cells {
                    for b in &other.cells {
                        let positive = a.positive.sum(&b.positive)?;
                        let negative = a.negative.product(&b.negative)?;
                        cells.push(Cell::new(positive, negative)?);
                    }
                }
                Ok(ConstructibleSet {
                    space: self.space.clone(),
                    cells,
                })
            }
            BoolOp::Minus => {
                let complement = other.complement()?;
                self.boolean(&complement, BoolOp::Intersect)
            }
        }
    }

    /// Complement as a constructible set: intersection over cells of the
    /// two-cell complements.
    pub fn complement(&self) -> Result<ConstructibleSet> {
        let mut acc = ConstructibleSet::full(&self.space);
        for cell in &self.cells {
            let comp = ConstructibleSet {
                space: self.space.clone(),
                cells: vec![
                    Cell::closed(cell.negative.clone()),
                    Cell::new(Ideal::zero(&self.space), cell.positive.clone())?,
                ],
            };
            acc = acc.boolean(&comp, BoolOp::Intersect)?;
        }
        Ok(acc)
    }
}

/// Polynomial map between variable spaces, one component per target
/// variable.
#[derive(Clone, Debug)]
pub struct PolyMap {
    source: VarSpace,
    target: VarSpace,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(source: &VarSpace, target: &VarSpace, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != target.arity() {
            return Err(Error::invalid(
                "polynomial map: component count must equal target arity",
            ));
        }
        for c in &components {
            if c.space() != source {
                return Err(Error::mismatch(
                    "polynomial map: component over wrong source space",
                ));
            }
        }
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(space: &VarSpace) -> Self {
        PolyMap {
            source: space.clone(),
            target: space.clone(),
            components: (0..space.arity())
                .map(|i| Polynomial::var(space, i))
                .collect(),
        }
    }

    pub fn source(&self) -> &VarSpace {
        &self.source
    }

    pub fn target(&self) -> &VarSpace {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn apply(&self, point: &[Rat]) -> Vec<Rat> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// Pullback `p \circ f` of a target polynomial.
    pub fn pullback(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.space(), &self.target);
        p.substitute(&self.components)
    }
}

/// Renamed copy of `source` guaranteed not to clash with `target`.
fn fresh_source_names(source: &VarSpace, target: &VarSpace) -> Vec<String> {
    source
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            if target.index_of(n).is_none() {
                n.clone()
            } else {
                let mut cand = format!("_s{i}_{n}");
                while target.index_of(&cand).is_some() {
                    cand.insert(0, '_');
                }
                cand
            }
        })
        .collect()
}

/// Ideal of the Zariski closure of the image of `V(positive) \ V(negative)`
/// under `map`: graph ideal, saturation by the negative part, then
/// elimination of the source block.
pub fn image_closure_of_map(
    positive: &Ideal,
    negative: Option<&Ideal>,
    map: &PolyMap,
) -> Result<Ideal> {
    let _t =
        crate::profiling::Timer::new((&crate::profiling::IMAGE_NS, &crate::profiling::IMAGE_CALLS));
    if positive.space() != map.source() {
        return Err(Error::mismatch(
            "image closure: set lives over the map's source",
        ));
    }
    if positive.is_unit() {
        return Ok(Ideal::unit(map.target()));
    }
    let src_arity = map.source().arity();
    let src_names = fresh_source_names(map.source(), map.target());
    let graph_space = VarSpace::new(
        src_names
            .iter()
            .cloned()
            .chain(map.target().names().iter().cloned()),
    )?;
    let src_map: Vec<usize> = (0..src_arity).collect();
    let mut gens: Vec<Polynomial> = positive
        .gens()
        .iter()
        .map(|g| g.embed(&graph_space, &src_map))
        .collect();
    for (j, comp) in map.components().iter().enumerate() {
        let target_var = Polynomial::var(&graph_space, src_arity + j);
        gens.push(target_var.sub(&comp.embed(&graph_space, &src_map)));
    }
    let mut graph = Ideal::new(&graph_space, gens);
    if let Some(neg) = negative {
        if neg.space() != map.source() {
            return Err(Error::mismatch(
                "image closure: negative part over the map's source",
            ));
        }
        if neg.is_zero_ideal() {
            return Ok(Ideal::unit(map.target()));
        }
        if !neg.is_unit() {
            let lifted = Ideal::new(
                &graph_space,
                neg.gens()
                    .iter()
                    .map(|g| g.embed(&graph_space, &src_map))
                    .collect(),
            );
            graph = graph.saturate(&lifted)?;
        }
    }
    let eliminated = graph.eliminate(&(0..src_arity).collect::<Vec<_>>());
    let kept: Vec<Polynomial> = eliminated
        .gens()
        .iter()
        .map(|g| g.restrict(map.target()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(map.target(), kept))
}

/// Image closure of a whole constructible set: intersection over cells.
pub fn image_closure(set: &ConstructibleSet, map: &PolyMap) -> Result<Ideal> {
    if set.space() != map.source() {
        return Err(Error::mismatch(
            "image closure: set lives over the map's source",
        ));
    }
    let mut acc = Ideal::unit(map.target());
    for cell in set.cells() {
        let piece = image_closure_of_map(cell.positive(), Some(cell.negative()), map)?;
        acc = acc.intersect(&piece)?;
    }
    Ok(acc)
}

/// Ideal generated by all k-by-k minors of the coordinate matrix; the
/// unit ideal for `k = 0` and the zero ideal for `k > n`.
pub fn minors_ideal(space: &VarSpace, n: usize, k: usize) -> Ideal {
    assert_eq!(space.arity(), n * n, "matrix coordinate space expected");
    if k == 0 {
        return Ideal::unit(space);
    }
    if k > n {
        return Ideal::zero(space);
    }
    let rows = crate::matrix::subsets(n, k);
    let mut gens = Vec::new();
    for ri in &rows {
        for ci in &rows {
            gens.push(poly_minor(space, n, ri, ci));
        }
    }
    Ideal::new(space, gens)
}

fn poly_minor(space: &VarSpace, n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
    // Laplace expansion along the first row of the submatrix
    fn rec(space: &VarSpace, n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::one(space);
        }
        let mut acc = Polynomial::zero(space);
        let r = rows[0];
        for (idx, &c) in cols.iter().enumerate() {
            let entry = Polynomial::var(space, r * n + c);
            let sub_rows = &rows[1..];
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&cc| cc != c).collect();
            let minor = rec(space, n, sub_rows, &sub_cols);
            let signed = if idx % 2 == 0 {
                entry.mul(&minor)
            } else {
                entry.mul(&minor).neg()
            };
            acc = acc.add(&signed);
        }
        acc
    }
    rec(space, n, rows, cols)
}

/// The rank-`r` stratum of n-by-n matrix space as a single cell: the
/// (r+1)-minors vanish, some r-minor does not.
pub fn rank_stratum(n: usize, r: usize) -> Result<ConstructibleSet> {
    if r > n {
        return Err(Error::invalid("rank stratum: r must be at most n"));
    }
    let space = VarSpace::matrix(n);
    let positive = minors_ideal(&space, n, r + 1);
    let negative = minors_ideal(&space, n, r);
    Ok(ConstructibleSet::from_cells(
        &space,
        vec![Cell::new(positive, negative)?],
    )?)
}

/// The closed stratum of matrices of rank strictly below `r`.
pub fn rank_below_stratum(n: usize, r: usize) -> ConstructibleSet {
    let space = VarSpace::matrix(n);
    ConstructibleSet::closed(minors_ideal(&space, n, r))
}

/// Witness search configuration; the seed makes negative outcomes
/// reproducible.
#[derive(Clone, Debug)]
pub struct WitnessConfig {
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            seed: 0,
            max_retries: 40,
        }
    }
}

/// A rational point in the denotation of the set: zero-dimensional cell
/// closures are enumerated through the triangular lex basis and rational
/// root search; positive-dimensional cells are sliced with random
/// small-coefficient hyperplanes until zero-dimensional.
pub fn witness_point(set: &ConstructibleSet, config: &WitnessConfig) -> Result<Vec<Rat>> {
    let space = set.space();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for cell in set.cells() {
        let cell = cell.normalized();
        let closure = cell.closure()?;
        if closure.is_unit() {
            continue;
        }
        let dim = closure.dimension();
        if dim <= 0 {
            if let Some(pt) = first_member(&zero_dim_points(&closure), &cell) {
                return Ok(pt);
            }
            continue;
        }
        for _ in 0..config.max_retries {
            let mut sliced = closure.clone();
            for _ in 0..dim {
                sliced =
                    sliced.sum(&Ideal::new(space, vec![random_hyperplane(space, &mut rng)]))?;
            }
            if sliced.is_unit() || sliced.dimension() > 0 {
                continue;
            }
            if let Some(pt) = first_member(&zero_dim_points(&sliced), &cell) {
                return Ok(pt);
            }
        }
    }
    Err(Error::NoRationalWitness)
}

fn first_member(points: &[Vec<Rat>], cell: &Cell) -> Option<Vec<Rat>> {
    points.iter().find(|p| cell.member(p)).cloned()
}

fn random_hyperplane(space: &VarSpace, rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let mut p = Polynomial::constant(
            space,
            Rat::from_integer(BigInt::from(rng.gen_range(-4i64..=4))),
        );
        let mut nontrivial = false;
        for i in 0..space.arity() {
            let c = rng.gen_range(-4i64..=4);
            if c != 0 {
                nontrivial = true;
                p = p.add(&Polynomial::var(space, i).scale(&Rat::from_integer(BigInt::from(c))));
            }
        }
        if nontrivial {
            return p;
        }
    }
}

/// All rational points of a zero-dimensional variety, in deterministic
/// order (roots enumerated smallest-height first, negatives first).
pub fn zero_dim_points(ideal: &Ideal) -> Vec<Vec<Rat>> {
    let space = ideal.space().clone();
    let gb = ideal.gb(MonomialOrder::Lex);
    points_rec(&space, &gb)
}

fn points_rec(space: &VarSpace, gens: &[Polynomial]) -> Vec<Vec<Rat>> {
    let arity = space.arity();
    if gens
        .iter()
        .any(|g| g.constant_value().map(|c| !c.is_zero()).unwrap_or(false))
    {
        return Vec::new();
    }
    // univariate generators in the last variable
    let last = arity - 1;
    let mut uni: Option<UPoly> = None;
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.support().iter().all(|&v| v == last) {
            let up = to_upoly(g, last);
            uni = Some(match uni {
                None => up,
                Some(acc) => acc.gcd(&up),
            });
        }
    }
    let Some(uni) = uni else {
        // not visibly zero-dimensional in this variable; bounded search
        // gives up on this branch
        return Vec::new();
    };
    if uni.is_zero() {
        return Vec::new();
    }
    let roots = uni.rational_roots();
    let mut out = Vec::new();
    for root in roots {
        if arity == 1 {
            if gens.iter().all(|g| g.evaluate(&[root.clone()]).is_zero()) {
                out.push(vec![root.clone()]);
            }
            continue;
        }
        // substitute the root for the last variable and recurse
        let smaller =
            VarSpace::new(space.names()[..last].iter().cloned()).expect("nonempty prefix");
        let map: Vec<Polynomial> = (0..arity)
            .map(|i| {
                if i == last {
                    Polynomial::constant(&smaller, root.clone())
                } else {
                    Polynomial::var(&smaller, i)
                }
            })
            .collect();
        let sub_gens: Vec<Polynomial> = gens
            .iter()
            .map(|g| g.substitute(&map))
            .filter(|g| !g.is_zero())
            .collect();
        let sub_ideal = Ideal::new(&smaller, sub_gens);
        let sub_gb = sub_ideal.gb(MonomialOrder::Lex);
        for mut p in points_rec(&smaller, &sub_gb) {
            p.push(root.clone());
            out.push(p);
        }
    }
    out
}

fn to_upoly(p: &Polynomial, var: usize) -> UPoly {
    let mut coeffs = vec![Rat::zero(); p.total_degree().unwrap_or(0) as usize + 1];
    for (m, c) in p.terms() {
        coeffs[m.exp(var) as usize] = c.clone();
    }
    UPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn xy() -> VarSpace {
        VarSpace::new(["x", "y"]).unwrap()
    }

    fn ideal(space: &VarSpace, texts: &[&str]) -> Ideal {
        Ideal::parse(space, texts).unwrap()
    }

    #[test]
    fn cell_closure_examples() {
        let s = xy();
        let c = Cell::new(ideal(&s, &["x*y"]), ideal(&s, &["x"])).unwrap();
        assert_eq!(c.closure().unwrap(), ideal(&s, &["y"]));

        let p = ideal(&s, &["x^2 + y"]);
        let closed = Cell::closed(p.clone());
        assert_eq!(closed.closure().unwrap(), p);

        let self_minus = Cell::new(ideal(&s, &["x"]), ideal(&s, &["x"])).unwrap();
        assert!(self_minus.closure().unwrap().is_unit());
    }

    #[test]
    fn closure_of_union_of_lines() {
        let s = xy();
        let set = ConstructibleSet::from_cells(
            &s,
            vec![
                Cell::closed(ideal(&s, &["x"])),
                Cell::closed(ideal(&s, &["y"])),
            ],
        )
        .unwrap();
        assert_eq!(set.closure().unwrap(), ideal(&s, &["x*y"]));
        let single = ConstructibleSet::closed(ideal(&s, &["x"]));
        assert_eq!(single.closure().unwrap(), ideal(&s, &["x"]));
        assert!(ConstructibleSet::empty(&s).closure().unwrap().is_unit());
    }

    #[test]
    fn boolean_denotations() {
        let s = xy();
        let p0 = ConstructibleSet::of_point(&s, &[int(0), int(0)]);
        let p1 = ConstructibleSet::of_point(&s, &[int(1), int(0)]);
        let both = p0.boolean(&p1, BoolOp::Union).unwrap();
        assert_eq!(both.cells().len(), 2);
        let closure = both.closure().unwrap();
        assert!(closure.contains_poly(&Polynomial::parse(&s, "x^2 - x").unwrap()));
        assert!(closure.contains_poly(&Polynomial::parse(&s, "y").unwrap()));

        let full = ConstructibleSet::full(&s);
        let meet = both.boolean(&full, BoolOp::Intersect).unwrap();
        let samples = [
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
            vec![int(2), int(-1)],
        ];
        for pt in &samples {
            assert_eq!(meet.member(pt), both.member(pt));
        }

        let nothing = both.boolean(&both, BoolOp::Minus).unwrap();
        for pt in &samples {
            assert!(!nothing.member(pt));
        }
        assert!(nothing.is_empty().unwrap());
    }

    #[test]
    fn boolean_random_point_check() {
        // denotation of boolean ops matches pointwise logic
        let s = xy();
        let sa = ConstructibleSet::from_cells(
            &s,
            vec![Cell::new(ideal(&s, &["x*y"]), ideal(&s, &["x"])).unwrap()],
        )
        .unwrap();
        let sb = ConstructibleSet::closed(ideal(&s, &["y"]));
        let union = sa.boolean(&sb, BoolOp::Union).unwrap();
        let meet = sa.boolean(&sb, BoolOp::Intersect).unwrap();
        let diff = sa.boolean(&sb, BoolOp::Minus).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let pt = vec![int(a), int(b)];
                let ia = sa.member(&pt);
                let ib = sb.member(&pt);
                assert_eq!(union.member(&pt), ia || ib, "union at ({a},{b})");
                assert_eq!(meet.member(&pt), ia && ib, "intersect at ({a},{b})");
                assert_eq!(diff.member(&pt), ia && !ib, "minus at ({a},{b})");
            }
        }
    }

    #[test]
    fn image_closure_twisted_parabola() {
        let t_space = VarSpace::new(["t"]).unwrap();
        let s = xy();
        let t = Polynomial::var(&t_space, 0);
        let map = PolyMap::new(&t_space, &s, vec![t.clone(), t.mul(&t)]).unwrap();
        let line = ConstructibleSet::full(&t_space);
        let img = image_closure(&line, &map).unwrap();
        assert_eq!(img, ideal(&s, &["y - x^2"]));
    }

    #[test]
    fn image_closure_identity_matches_closure() {
        let s = xy();
        let set = ConstructibleSet::from_cells(
            &s,
            vec![Cell::new(ideal(&s, &["x*y"]), ideal(&s, &["x"])).unwrap()],
        )
        .unwrap();
        let id = PolyMap::identity(&s);
        assert_eq!(image_closure(&set, &id).unwrap(), set.closure().unwrap());
    }

    #[test]
    fn image_closure_projection_of_hyperbola() {
        let s = xy();
        let x_space = VarSpace::new(["x"]).unwrap();
        let map = PolyMap::new(&s, &x_space, vec![Polynomial::var(&s, 0)]).unwrap();
        let hyperbola = ConstructibleSet::closed(ideal(&s, &["x*y - 1"]));
        let img = image_closure(&hyperbola, &map).unwrap();
        assert!(img.is_zero_ideal());
    }

    #[test]
    fn witness_examples() {
        let one = VarSpace::new(["x"]).unwrap();
        let cfg = WitnessConfig::default();
        let v4 = ConstructibleSet::closed(ideal(&one, &["x^2 - 4"]));
        assert_eq!(witness_point(&v4, &cfg).unwrap(), vec![int(-2)]);

        let v2 = ConstructibleSet::closed(ideal(&one, &["x^2 - 2"]));
        assert_eq!(witness_point(&v2, &cfg), Err(Error::NoRationalWitness));

        let punctured = ConstructibleSet::from_cells(
            &one,
            vec![Cell::new(ideal(&one, &["x^2 - x"]), ideal(&one, &["x"])).unwrap()],
        )
        .unwrap();
        assert_eq!(witness_point(&punctured, &cfg).unwrap(), vec![int(1)]);
    }

    #[test]
    fn witness_on_positive_dimensional_set() {
        let s = xy();
        let curve = ConstructibleSet::closed(ideal(&s, &["y - x^2"]));
        let cfg = WitnessConfig::default();
        let pt = witness_point(&curve, &cfg).unwrap();
        assert!(curve.member(&pt));
        assert_eq!(pt[1], pt[0].clone() * pt[0].clone());
    }

    #[test]
    fn member_examples() {
        let s = xy();
        let cell = Cell::new(ideal(&s, &["x*y"]), ideal(&s, &["x"])).unwrap();
        assert!(!cell.member(&[int(0), int(0)]));
        assert!(cell.member(&[int(1), int(0)]));
        assert!(!ConstructibleSet::empty(&s).member(&[rat(1, 2), int(3)]));
    }

    #[test]
    fn rank_stratum_examples() {
        let r1 = rank_stratum(2, 1).unwrap();
        let cell = &r1.cells()[0];
        let space = VarSpace::matrix(2);
        assert_eq!(
            cell.positive(),
            &ideal(&space, &["x_1_1*x_2_2 - x_1_2*x_2_1"])
        );
        assert_eq!(cell.negative().gens().len(), 4);

        let r0 = rank_stratum(2, 0).unwrap();
        assert_eq!(r0.cells()[0].positive().gens().len(), 4);
        assert!(r0.cells()[0].negative().is_unit());

        let r2 = rank_stratum(2, 2).unwrap();
        assert!(r2.cells()[0].positive().is_zero_ideal());
        assert_eq!(
            r2.cells()[0].negative(),
            &ideal(&space, &["x_1_1*x_2_2 - x_1_2*x_2_1"])
        );
    }

    #[test]
    fn rank_strata_partition_matrix_space() {
        // membership in exactly one stratum, agreeing with linear algebra
        use crate::matrix::QMatrix;
        let samples = [
            QMatrix::from_i64(&[&[0, 0], &[0, 0]]),
            QMatrix::from_i64(&[&[1, 2], &[2, 4]]),
            QMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            QMatrix::from_i64(&[&[3, 1], &[1, 2]]),
            QMatrix::from_i64(&[&[0, 1], &[0, 0]]),
        ];
        for m in &samples {
            let flat: Vec<Rat> = (0..2)
                .flat_map(|i| (0..2).map(move |j| m.get(i, j).clone()))
                .collect();
            let mut hits = Vec::new();
            for r in 0..=2 {
                if rank_stratum(2, r).unwrap().member(&flat) {
                    hits.push(r);
                }
            }
            assert_eq!(hits, vec![m.rank()], "strata must partition; matrix {m:?}");
        }
    }
}
