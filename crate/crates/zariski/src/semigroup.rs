//! Zariski closure of finitely generated matrix semigroups: the
//! generating graph on transversal subspace pairs, pseudo-inverse
//! augmentation, SCC closures through block group closures, the
//! bounded product accumulation for the maximum-rank stratum, and the
//! induction on rank, extended to constructible generator sets.

use std::collections::BTreeSet;

use num::Zero;

use crate::bounds::{Bounds, Status};
use crate::constructible::{
    image_closure_of_map, minors_ideal, rank_stratum, witness_point, Cell, ConstructibleSet,
    PolyMap,
};
use crate::error::{Error, Result};
use crate::group::group_closure;
use crate::ideal::{Ideal, QuotientBasis};
use crate::matideal::flatten;
use crate::matrix::{pseudo_inverse, space_data, QMatrix, Subspace};
use crate::pieces::{piece_product, PieceSet};
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::vars::VarSpace;

/// State cap for path enumeration; beyond it the instance is outside
/// desk scale.
const PATH_STATE_CAP: usize = 50_000;

/// Vertex of the generating graph: a transversal pair (U, V) with
/// `dim U = n - r`, `dim V = r`.
pub type Vertex = (Subspace, Subspace);

#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: QMatrix,
    pub pseudo: bool,
}

/// The generating graph for a finite set of rank-r matrices: vertices
/// are transversal (kernel, image) pairs drawn from the generators;
/// only such pairs can lie on cycles, so the finite pool is complete
/// for SCC analysis.
#[derive(Clone, Debug)]
pub struct GenGraph {
    n: usize,
    rank: usize,
    vertices: Vec<Vertex>,
    edges: Vec<GraphEdge>,
}

impl GenGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    fn out_edges(&self, v: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.from == v)
    }
}

/// Strongly connected component with its cycle flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    pub vertices: Vec<usize>,
    pub nontrivial: bool,
}

/// Union-of-varieties closure of a matrix semigroup with its quality.
#[derive(Clone, Debug)]
pub struct SemiClosure {
    n: usize,
    pub pieces: Vec<Ideal>,
    pub status: Status,
}

impl SemiClosure {
    pub fn empty(n: usize) -> Self {
        SemiClosure {
            n,
            pieces: Vec::new(),
            status: Status::Exact,
        }
    }

    pub fn from_pieces(n: usize, pieces: Vec<Ideal>, status: Status) -> Self {
        SemiClosure { n, pieces, status }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> VarSpace {
        VarSpace::matrix(self.n)
    }

    /// Single defining ideal of the union of the pieces; the unit ideal
    /// for the empty closure.
    pub fn combined(&self) -> Result<Ideal> {
        let space = self.space();
        let mut acc = Ideal::unit(&space);
        for p in &self.pieces {
            acc = acc.intersect(p)?;
        }
        Ok(acc)
    }

    pub fn contains_matrix(&self, m: &QMatrix) -> bool {
        self.pieces.iter().any(|p| p.vanishes_at(&flatten(m)))
    }

    fn piece_set(&self) -> PieceSet {
        let mut set = PieceSet::empty(self.n);
        for p in &self.pieces {
            set.insert(p.clone());
        }
        set
    }
}

/// Partition of generators by rank.
pub fn rank_stratify(gens: &[QMatrix]) -> Vec<(usize, Vec<QMatrix>)> {
    let mut strata: Vec<(usize, Vec<QMatrix>)> = Vec::new();
    for g in gens {
        let r = g.rank();
        match strata.iter_mut().find(|(rank, _)| *rank == r) {
            Some((_, bucket)) => bucket.push(g.clone()),
            None => strata.push((r, vec![g.clone()])),
        }
    }
    strata.sort_by_key(|(r, _)| *r);
    strata
}

/// Builds the generating graph: the vertex pool pairs generator kernels
/// with generator images (only such pairs can close a cycle), and each
/// generator `a` contributes every edge `(ker a, V) -> (U', im a)`.
pub fn build_graph(a_list: &[QMatrix], r: usize) -> Result<GenGraph> {
    let Some(first) = a_list.first() else {
        return Err(Error::invalid("build_graph: empty generator list"));
    };
    let n = first.dim();
    let mut kernels: BTreeSet<Subspace> = BTreeSet::new();
    let mut images: BTreeSet<Subspace> = BTreeSet::new();
    let mut data = Vec::new();
    for a in a_list {
        if a.dim() != n {
            return Err(Error::invalid("build_graph: mixed dimensions"));
        }
        let (rank, kernel, image) = space_data(a);
        if rank != r {
            return Err(Error::invalid(format!(
                "build_graph: generator of rank {rank}, expected {r}"
            )));
        }
        kernels.insert(kernel.clone());
        images.insert(image.clone());
        data.push((a.clone(), kernel, image));
    }
    let mut vertices: Vec<Vertex> = Vec::new();
    for u in &kernels {
        for v in &images {
            if u.meets_trivially(v) {
                vertices.push((u.clone(), v.clone()));
            }
        }
    }
    vertices.sort();
    let mut edges = Vec::new();
    for (a, kernel, image) in &data {
        for (i, (u, _)) in vertices.iter().enumerate() {
            if u != kernel {
                continue;
            }
            for (j, (_, v2)) in vertices.iter().enumerate() {
                if v2 == image {
                    edges.push(GraphEdge {
                        from: i,
                        to: j,
                        label: a.clone(),
                        pseudo: false,
                    });
                }
            }
        }
    }
    Ok(GenGraph {
        n,
        rank: r,
        vertices,
        edges,
    })
}

/// Tarjan's strongly connected components, restricted to the nontrivial
/// ones (a cycle exists inside; self-loops count).
pub fn nontrivial_sccs(graph: &GenGraph) -> Vec<Scc> {
    all_sccs(graph)
        .into_iter()
        .filter(|s| s.nontrivial)
        .collect()
}

fn all_sccs(graph: &GenGraph) -> Vec<Scc> {
    let n = graph.vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &graph.edges {
        adj[e.from].push(e.to);
    }
    struct State {
        index: usize,
        indices: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    fn connect(v: usize, adj: &[Vec<usize>], st: &mut State) {
        st.indices[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &adj[v] {
            if st.indices[w].is_none() {
                connect(w, adj, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.indices[w].unwrap());
            }
        }
        if st.low[v] == st.indices[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }
    let mut st = State {
        index: 0,
        indices: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if st.indices[v].is_none() {
            connect(v, &adj, &mut st);
        }
    }
    st.out.sort();
    st.out
        .into_iter()
        .map(|vertices| {
            let nontrivial = vertices.len() > 1
                || graph
                    .edges
                    .iter()
                    .any(|e| e.from == vertices[0] && e.to == vertices[0]);
            Scc {
                vertices,
                nontrivial,
            }
        })
        .collect()
}

/// Adds the pseudo-inverse edge of every original edge among the given
/// vertices.
fn with_pseudo_edges(graph: &GenGraph, within: &[usize]) -> Result<GenGraph> {
    let mut out = graph.clone();
    for e in &graph.edges {
        if !within.contains(&e.from) || !within.contains(&e.to) {
            continue;
        }
        let (u_target, _) = &graph.vertices[e.to];
        let (_, v_source) = &graph.vertices[e.from];
        let plus = pseudo_inverse(&e.label, u_target, v_source)?;
        out.edges.push(GraphEdge {
            from: e.to,
            to: e.from,
            label: plus,
            pseudo: true,
        });
    }
    Ok(out)
}

/// Endpoint constraint for path enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndPoint {
    Any,
    At(usize),
}

/// Deduplicated labels `a_m ... a_1` of all paths of length 1..=maxlen
/// meeting the endpoint constraints; pseudo-inverse edges are used only
/// when allowed. Breadth-first, so labels appear shortest path first.
pub fn path_labels(
    graph: &GenGraph,
    maxlen: usize,
    from: EndPoint,
    to: EndPoint,
    allow_pseudo: bool,
) -> Result<Vec<QMatrix>> {
    let mut labels: Vec<QMatrix> = Vec::new();
    let mut label_set: BTreeSet<QMatrix> = BTreeSet::new();
    let mut seen: BTreeSet<(usize, QMatrix)> = BTreeSet::new();
    // frontier of (vertex, product) states
    let mut frontier: Vec<(usize, QMatrix)> = Vec::new();
    let start_ok = |v: usize| match from {
        EndPoint::Any => true,
        EndPoint::At(s) => v == s,
    };
    let end_ok = |v: usize| match to {
        EndPoint::Any => true,
        EndPoint::At(t) => v == t,
    };
    for e in &graph.edges {
        if e.pseudo && !allow_pseudo {
            continue;
        }
        if !start_ok(e.from) {
            continue;
        }
        let state = (e.to, e.label.clone());
        if seen.insert(state.clone()) {
            frontier.push(state);
        }
    }
    let record = |v: usize, m: &QMatrix, labels: &mut Vec<QMatrix>, set: &mut BTreeSet<QMatrix>| {
        if end_ok(v) && set.insert(m.clone()) {
            labels.push(m.clone());
        }
    };
    for (v, m) in &frontier {
        record(*v, m, &mut labels, &mut label_set);
    }
    for _ in 2..=maxlen {
        let mut next = Vec::new();
        for (v, m) in &frontier {
            for e in graph.out_edges(*v) {
                if e.pseudo && !allow_pseudo {
                    continue;
                }
                let prod = e.label.mul(m);
                let state = (e.to, prod);
                if seen.insert(state.clone()) {
                    record(state.0, &state.1, &mut labels, &mut label_set);
                    next.push(state);
                }
                if seen.len() > PATH_STATE_CAP {
                    return Err(Error::invalid("path enumeration exceeded the state cap"));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(labels)
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// Conjugating basis of a vertex: columns are the V-basis followed by
/// the U-basis, so labels fixing the vertex become upper-left blocks.
fn vertex_basis(n: usize, vertex: &Vertex) -> QMatrix {
    let (u, v) = vertex;
    let mut cols: Vec<Vec<Rat>> = v.basis_rows().to_vec();
    cols.extend(u.basis_rows().iter().cloned());
    debug_assert_eq!(cols.len(), n);
    QMatrix::from_fn(n, |i, j| cols[j][i].clone())
}

/// Extracts the upper-left r-by-r block of `y^-1 b y`, checking the
/// complementary blocks vanish.
fn block_of(y_inv: &QMatrix, y: &QMatrix, b: &QMatrix, r: usize) -> Result<QMatrix> {
    let n = y.dim();
    let conj = y_inv.mul(b).mul(y);
    for i in 0..n {
        for j in 0..n {
            if (i >= r || j >= r) && !conj.get(i, j).is_zero() {
                return Err(Error::invalid(
                    "block_of: label is not block-diagonal at the base vertex",
                ));
            }
        }
    }
    Ok(QMatrix::from_fn(r, |i, j| conj.get(i, j).clone()))
}

/// The linear map from r-by-r block coordinates into n-by-n matrix
/// space `c -> beta * c * gamma`.
fn block_embedding_map(n: usize, r: usize, beta: &[Vec<Rat>], gamma: &[Vec<Rat>]) -> PolyMap {
    let src = VarSpace::matrix(r);
    let target = VarSpace::matrix(n);
    let mut components = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = Polynomial::zero(&src);
            for p in 0..r {
                if beta[i][p].is_zero() {
                    continue;
                }
                for q in 0..r {
                    let coeff = beta[i][p].clone() * gamma[q][j].clone();
                    if !coeff.is_zero() {
                        entry = entry.add(&Polynomial::var(&src, p * r + q).scale(&coeff));
                    }
                }
            }
            components.push(entry);
        }
    }
    PolyMap::new(&src, &target, components).expect("block embedding map")
}

/// Closure pieces for one nontrivial SCC: path labels and base-loop
/// labels (with pseudo-inverses), the group closure of the base-loop
/// blocks, and the sandwiched images `b * H * b'` over deduplicated
/// label pairs.
pub fn scc_closure(graph: &GenGraph, scc: &Scc, bounds: &Bounds) -> Result<(Vec<Ideal>, Status)> {
    if !scc.nontrivial {
        return Err(Error::invalid("scc_closure: SCC must be nontrivial"));
    }
    let n = graph.n;
    let r = graph.rank;
    let base = scc.vertices[0];
    let binom = binomial(n, r);
    let augmented = with_pseudo_edges(graph, &scc.vertices)?;
    // restrict enumeration to the SCC by only starting inside it; edges
    // leaving the component cannot return, so intermediate vertices stay
    // inside for loop labels, and stray exits are harmless extra labels
    // for the B side (they also lie in the closure)
    let sub = restrict_graph(&augmented, &scc.vertices);
    let b_labels = path_labels(&sub, binom + 2, EndPoint::Any, EndPoint::Any, true)?;
    let loop_labels = path_labels(
        &sub,
        2 * binom + 3,
        EndPoint::At(base),
        EndPoint::At(base),
        true,
    )?;
    let y = vertex_basis(n, &graph.vertices[base]);
    let y_inv = y.inverse()?;
    let mut blocks: Vec<QMatrix> = Vec::new();
    for b in &loop_labels {
        let c = block_of(&y_inv, &y, b, r)?;
        if !blocks.contains(&c) {
            blocks.push(c);
        }
    }
    let group = group_closure(&blocks, bounds)?;
    let group_is_group = group.status.is_exact();
    // beta/gamma legs of the sandwich b * (y [[c,0],[0,0]] y^-1) * b'
    let beta_of = |b: &QMatrix| -> Vec<Vec<Rat>> {
        let by = b.mul(&y);
        (0..n)
            .map(|i| (0..r).map(|p| by.get(i, p).clone()).collect())
            .collect()
    };
    let gamma_of = |b: &QMatrix| -> Vec<Vec<Rat>> {
        let yb = y_inv.mul(b);
        (0..r)
            .map(|q| (0..n).map(|j| yb.get(q, j).clone()).collect())
            .collect()
    };
    // deduplicate left legs modulo the block group: beta2 = beta1 * g
    // with g in the group lets c -> g c range over the same set
    let group_member =
        |g: &QMatrix| -> bool { group.pieces.iter().any(|p| p.vanishes_at(&flatten(g))) };
    let mut left_legs: Vec<Vec<Vec<Rat>>> = Vec::new();
    for b in &b_labels {
        let beta = beta_of(b);
        if group_is_group
            && left_legs
                .iter()
                .any(|kept| legs_equivalent(kept, &beta, r, true, &group_member))
        {
            continue;
        }
        left_legs.push(beta);
    }
    let mut right_legs: Vec<Vec<Vec<Rat>>> = Vec::new();
    for b in &b_labels {
        let gamma = gamma_of(b);
        if group_is_group
            && right_legs
                .iter()
                .any(|kept| legs_equivalent(kept, &gamma, r, false, &group_member))
        {
            continue;
        }
        right_legs.push(gamma);
    }
    let mut pieces: Vec<Ideal> = Vec::new();
    for beta in &left_legs {
        for gamma in &right_legs {
            let map = block_embedding_map(n, r, beta, gamma);
            for hp in &group.pieces {
                let piece = image_closure_of_map(hp, None, &map)?;
                if !piece.is_unit() && !pieces.contains(&piece) {
                    pieces.push(piece);
                }
            }
        }
    }
    Ok((pieces, group.status))
}

fn restrict_graph(graph: &GenGraph, within: &[usize]) -> GenGraph {
    let edges = graph
        .edges
        .iter()
        .filter(|e| within.contains(&e.from) && within.contains(&e.to))
        .cloned()
        .collect();
    GenGraph {
        n: graph.n,
        rank: graph.rank,
        vertices: graph.vertices.clone(),
        edges,
    }
}

/// Tests `new = kept * g` (left legs) or `new = g * kept` (right legs)
/// for some block-group member g.
fn legs_equivalent(
    kept: &[Vec<Rat>],
    new: &[Vec<Rat>],
    r: usize,
    left: bool,
    group_member: &dyn Fn(&QMatrix) -> bool,
) -> bool {
    // solve kept * g = new column by column (left) or g * kept = new row
    // by row (right), then verify exactly and test group membership
    let rows = kept.len();
    let cols = kept.first().map(|row| row.len()).unwrap_or(0);
    let g = if left {
        // kept: n x r, g: r x r, new: n x r; solve kept * g = new
        let matrix: Vec<Vec<Rat>> = (0..rows).map(|i| kept[i].clone()).collect();
        let mut g_cols: Vec<Vec<Rat>> = Vec::new();
        for c in 0..cols {
            let b: Vec<Rat> = (0..rows).map(|i| new[i][c].clone()).collect();
            match crate::linalg::solve(&matrix, &b) {
                Some(x) => g_cols.push(x),
                None => return false,
            }
        }
        QMatrix::from_fn(r, |i, j| g_cols[j][i].clone())
    } else {
        // kept: r x n, g: r x r; solve g * kept = new, i.e. kept^T g^T = new^T
        let matrix: Vec<Vec<Rat>> = (0..cols)
            .map(|j| (0..rows).map(|i| kept[i][j].clone()).collect())
            .collect();
        let mut g_rows: Vec<Vec<Rat>> = Vec::new();
        for rr in 0..rows {
            let b: Vec<Rat> = (0..cols).map(|j| new[rr][j].clone()).collect();
            match crate::linalg::solve(&matrix, &b) {
                Some(x) => g_rows.push(x),
                None => return false,
            }
        }
        QMatrix::from_fn(r, |i, j| g_rows[i][j].clone())
    };
    // verify the product exactly
    if left {
        for i in 0..rows {
            for c in 0..cols {
                let mut acc = Rat::zero();
                for k in 0..r {
                    acc += kept[i][k].clone() * g.get(k, c).clone();
                }
                if acc != new[i][c] {
                    return false;
                }
            }
        }
    } else {
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = Rat::zero();
                for k in 0..r {
                    acc += g.get(i, k).clone() * kept[k][j].clone();
                }
                if acc != new[i][j] {
                    return false;
                }
            }
        }
    }
    g.is_invertible() && group_member(&g)
}

/// `Zcl(<A_r>)` intersected with the rank-r stratum, as a constructible
/// set: generator points plus SCC closure pieces, saturated under left
/// products up to `2*binom(n,r)^2` rounds (early stop on stabilization),
/// then cut to the stratum.
pub fn max_rank_closure(
    a_list: &[QMatrix],
    r: usize,
    bounds: &Bounds,
) -> Result<(ConstructibleSet, Status)> {
    let Some(first) = a_list.first() else {
        return Err(Error::invalid("max_rank_closure: empty generator list"));
    };
    let n = first.dim();
    let space = VarSpace::matrix(n);
    let mut status = Status::Exact;
    let mut accumulator = PieceSet::empty(n);
    let mut e_pieces: Vec<Ideal> = Vec::new();
    for a in a_list {
        e_pieces.push(Ideal::of_point(&space, &flatten(a)));
    }
    if r > 0 {
        let graph = build_graph(a_list, r)?;
        for scc in nontrivial_sccs(&graph) {
            let (pieces, st) = scc_closure(&graph, &scc, bounds)?;
            status = status.meet(st);
            e_pieces.extend(pieces);
        }
    }
    for p in &e_pieces {
        accumulator.insert(p.clone());
    }
    let kappa = 2 * binomial(n, r) * binomial(n, r);
    let mut product_seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for _round in 0..kappa.max(1) {
        let mut batch = Vec::new();
        let count = accumulator.len();
        for (ei, e) in e_pieces.iter().enumerate() {
            for zi in 0..count {
                if !product_seen.insert((ei, zi)) {
                    continue;
                }
                let q = piece_product(n, e, &accumulator.pieces()[zi])?;
                if !accumulator.covers_ideal(&q)? {
                    batch.push(q);
                }
            }
        }
        let mut changed = false;
        for q in batch {
            if accumulator.covers_ideal(&q)? {
                continue;
            }
            if accumulator.insert(q) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if accumulator.len() > 150 {
            status = Status::LowerBound;
            break;
        }
    }
    // cut to the rank-r stratum
    let stratum = rank_stratum(n, r)?;
    let mut cells = Vec::new();
    for piece in accumulator.maximal_pieces() {
        let raw = piece.sum(stratum.cells()[0].positive())?;
        // canonicalize: the minor generators mostly reduce away against
        // the piece, and every later product embeds these generators
        let positive = Ideal::new(&space, raw.canonical_gens());
        let negative = stratum.cells()[0].negative().clone();
        let cell = Cell::new(positive, negative)?.normalized();
        if !cell.is_empty()? {
            cells.push(cell);
        }
    }
    Ok((ConstructibleSet::from_cells(&space, cells)?, status))
}

/// Input to the closure computation: a finite matrix list or a
/// constructible set of matrices.
#[derive(Clone, Debug)]
pub enum Generators {
    Matrices(Vec<QMatrix>),
    Constructible { n: usize, set: ConstructibleSet },
}

/// Zariski closure of the semigroup generated by finitely many square
/// matrices, by induction on the maximum rank.
pub fn semigroup_closure(gens: &[QMatrix], bounds: &Bounds) -> Result<SemiClosure> {
    let Some(first) = gens.first() else {
        return Ok(SemiClosure::empty(1));
    };
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::invalid("semigroup_closure: mixed dimensions"));
        }
    }
    let space = VarSpace::matrix(n);
    let cells: Vec<Cell> = gens
        .iter()
        .map(|g| Cell::closed(Ideal::of_point(&space, &flatten(g))))
        .collect();
    let set = ConstructibleSet::from_cells(&space, cells)?;
    closure_of_constructible(&set, n, bounds)
}

/// Zariski closure of the semigroup generated by a constructible set of
/// matrices.
pub fn semigroup_closure_constructible(
    set: &ConstructibleSet,
    n: usize,
    bounds: &Bounds,
) -> Result<SemiClosure> {
    closure_of_constructible(set, n, bounds)
}

/// Dispatch on the generator representation.
pub fn closure_of_generators(gens: &Generators, bounds: &Bounds) -> Result<SemiClosure> {
    match gens {
        Generators::Matrices(list) => semigroup_closure(list, bounds),
        Generators::Constructible { n, set } => semigroup_closure_constructible(set, *n, bounds),
    }
}

/// The rank-induction core on finite generator lists. Returns pieces
/// contained in the closure whose union contains the generators and,
/// when the final saturation stabilizes, the full closure.
fn finite_rank_induction(gens: &[QMatrix], bounds: &Bounds) -> Result<SemiClosure> {
    let Some(first) = gens.first() else {
        return Ok(SemiClosure::empty(1));
    };
    let n = first.dim();
    let space = VarSpace::matrix(n);
    let strata = rank_stratify(gens);
    let (r, a_r) = strata.last().expect("nonempty generators").clone();
    if r == 0 {
        return Ok(SemiClosure {
            n,
            pieces: vec![Ideal::of_point(&space, &flatten(&QMatrix::zero(n)))],
            status: Status::Exact,
        });
    }
    let (b_set, b_status) = max_rank_closure(&a_r, r, bounds)?;
    let mut pieces: Vec<Ideal> = Vec::new();
    for cell in b_set.cells() {
        let cl = cell.closure()?;
        if !cl.is_unit() && !pieces.contains(&cl) {
            pieces.push(cl);
        }
    }
    // recursion generators: lower-rank inputs plus rank-filtered product
    // closures B*A, A*B, B*A*B
    let below = minors_ideal(&space, n, r);
    let mut rec_cells: Vec<Cell> = Vec::new();
    for (rank, bucket) in &strata {
        if *rank < r {
            for a in bucket {
                rec_cells.push(Cell::closed(Ideal::of_point(&space, &flatten(a))));
            }
        }
    }
    for cell in b_set.cells() {
        for a in gens {
            for left in [true, false] {
                let image = mul_cell_by_const(n, cell, a, left)?;
                let cut = Ideal::new(&space, image.sum(&below)?.canonical_gens());
                let piece_cell = Cell::closed(cut);
                if !piece_cell.is_empty()? {
                    rec_cells.push(piece_cell);
                }
            }
        }
    }
    for c1 in b_set.cells() {
        for a in gens {
            for c2 in b_set.cells() {
                let image = cell_sandwich_closure(n, c1, a, c2)?;
                let cut = Ideal::new(&space, image.sum(&below)?.canonical_gens());
                let piece_cell = Cell::closed(cut);
                if !piece_cell.is_empty()? {
                    rec_cells.push(piece_cell);
                }
            }
        }
    }
    let rec_set = ConstructibleSet::from_cells(&space, rec_cells)?.pruned()?;
    let rec = if rec_set.cells().is_empty() {
        SemiClosure::empty(n)
    } else {
        closure_of_constructible(&rec_set, n, bounds)?
    };
    for p in rec.pieces {
        if !pieces.contains(&p) {
            pieces.push(p);
        }
    }
    Ok(SemiClosure {
        n,
        pieces,
        status: b_status.meet(rec.status),
    })
}

/// `Zcl(V(cell) * a)` or `Zcl(a * V(cell))` for a constant matrix.
fn mul_cell_by_const(n: usize, cell: &Cell, a: &QMatrix, on_right: bool) -> Result<Ideal> {
    let space = cell.space().clone();
    let source = space.prefixed("s_");
    let emb: Vec<usize> = (0..n * n).collect();
    let positive = Ideal::new(
        &source,
        cell.positive()
            .gens()
            .iter()
            .map(|g| g.embed(&source, &emb))
            .collect(),
    );
    let negative = Ideal::new(
        &source,
        cell.negative()
            .gens()
            .iter()
            .map(|g| g.embed(&source, &emb))
            .collect(),
    );
    let mut components = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = Polynomial::zero(&source);
            for k in 0..n {
                let (coeff, var_idx) = if on_right {
                    (a.get(k, j).clone(), i * n + k)
                } else {
                    (a.get(i, k).clone(), k * n + j)
                };
                if !coeff.is_zero() {
                    entry = entry.add(&Polynomial::var(&source, var_idx).scale(&coeff));
                }
            }
            components.push(entry);
        }
    }
    let map = PolyMap::new(&source, &space, components)?;
    image_closure_of_map(&positive, Some(&negative), &map)
}

/// `Zcl(V(c1) * a * V(c2))` for cells and a constant matrix.
fn cell_sandwich_closure(n: usize, c1: &Cell, a: &QMatrix, c2: &Cell) -> Result<Ideal> {
    let space = c1.space().clone();
    let left = space.prefixed("l_");
    let pair = left.join(&space.prefixed("r_"))?;
    let lmap: Vec<usize> = (0..n * n).collect();
    let rmap: Vec<usize> = (n * n..2 * n * n).collect();
    let mut positive_gens: Vec<Polynomial> = c1
        .positive()
        .gens()
        .iter()
        .map(|g| g.embed(&pair, &lmap))
        .collect();
    positive_gens.extend(c2.positive().gens().iter().map(|g| g.embed(&pair, &rmap)));
    let positive = Ideal::new(&pair, positive_gens);
    // the negative part of a product cell: some generator of each factor
    // must survive, encoded as the product ideal
    let mut negative_gens: Vec<Polynomial> = Vec::new();
    for g1 in c1.negative().gens() {
        for g2 in c2.negative().gens() {
            negative_gens.push(g1.embed(&pair, &lmap).mul(&g2.embed(&pair, &rmap)));
        }
    }
    let negative = Ideal::new(&pair, negative_gens);
    let mut components = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut entry = Polynomial::zero(&pair);
            for p in 0..n {
                for q in 0..n {
                    if a.get(p, q).is_zero() {
                        continue;
                    }
                    // X_{ip} a_{pq} Y_{qj}
                    let x = Polynomial::var(&pair, i * n + p);
                    let y = Polynomial::var(&pair, n * n + q * n + j);
                    entry = entry.add(&x.mul(&y).scale(a.get(p, q)));
                }
            }
            components.push(entry);
        }
    }
    let map = PolyMap::new(&pair, &space, components)?;
    image_closure_of_map(&positive, Some(&negative), &map)
}

/// Closure of the semigroup generated by a constructible set: cell
/// closures plus the finite algorithm on witness points, saturated
/// under products; stabilization with generator coverage certifies
/// exactness.
fn closure_of_constructible(
    set: &ConstructibleSet,
    n: usize,
    bounds: &Bounds,
) -> Result<SemiClosure> {
    let pruned = set.pruned()?;
    if pruned.cells().is_empty() {
        return Ok(SemiClosure::empty(n));
    }
    let mut pieces = PieceSet::empty(n);
    let mut witnesses: Vec<QMatrix> = Vec::new();
    for cell in pruned.cells() {
        // generator cells are contained in the generated semigroup, so
        // their closures are sound pieces
        let cl = cell.closure()?;
        if let Some(point) = crate::pieces::as_single_point(n, &cl) {
            if cell.member(&flatten(&point)) {
                witnesses.push(point);
                pieces.insert(cl);
                continue;
            }
        }
        pieces.insert(cl);
        let single = ConstructibleSet::from_cells(pruned.space(), vec![cell.clone()])?;
        let point = witness_point(&single, &bounds.witness_config())?;
        witnesses.push(QMatrix::from_fn(n, |i, j| point[i * n + j].clone()));
    }
    // deduplicate witnesses
    let mut distinct: Vec<QMatrix> = Vec::new();
    for w in &witnesses {
        if !distinct.contains(w) {
            distinct.push(w.clone());
        }
    }
    // the finite algorithm supplies the group-theoretic structure
    let finite = finite_rank_induction(&distinct, bounds)?;
    let mut status = finite.status;
    for p in finite.pieces {
        pieces.insert(p);
    }
    // when the generators were genuinely constructible, keep saturating
    // products until the union stabilizes
    let mut product_seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut stable = false;
    for _round in 0..bounds.max_enrich.max(1) {
        let count = pieces.len();
        let mut batch = Vec::new();
        for i in 0..count {
            for j in 0..count {
                if !product_seen.insert((i, j)) {
                    continue;
                }
                let q = piece_product(n, &pieces.pieces()[i], &pieces.pieces()[j])?;
                if !pieces.covers_ideal(&q)? {
                    batch.push(q);
                }
            }
        }
        let mut changed = false;
        for q in batch {
            if pieces.covers_ideal(&q)? {
                continue;
            }
            if pieces.insert(q) {
                changed = true;
            }
        }
        if !changed {
            stable = true;
            break;
        }
        if pieces.len() > 150 {
            break;
        }
    }
    // exactness certificate: generator coverage plus product stability
    if stable {
        let mut covered = true;
        for cell in pruned.cells() {
            if !pieces.covers_ideal(&cell.closure()?)? {
                covered = false;
                break;
            }
        }
        if covered {
            status = Status::Exact;
        }
    } else {
        status = Status::LowerBound;
    }
    Ok(SemiClosure {
        n,
        pieces: pieces.maximal_pieces(),
        status,
    })
}

/// Checks the closed-semigroup certificate: every generator lies in the
/// union and the product of any two pieces stays inside it. Passing
/// together with the from-below construction makes the result exact.
pub fn certify(closure: &SemiClosure, gens: &Generators) -> Result<bool> {
    let n = closure.n;
    match gens {
        Generators::Matrices(list) => {
            for g in list {
                if !closure.contains_matrix(g) {
                    return Ok(false);
                }
            }
        }
        Generators::Constructible { n: gn, set } => {
            if *gn != n {
                return Err(Error::invalid("certify: dimension mismatch"));
            }
            let pset = closure.piece_set();
            for cell in set.pruned()?.cells() {
                if !pset.covers_ideal(&cell.closure()?)? {
                    return Ok(false);
                }
            }
        }
    }
    let pset = closure.piece_set();
    for p1 in &closure.pieces {
        for p2 in &closure.pieces {
            let q = piece_product(n, p1, p2)?;
            if !pset.covers_ideal(&q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Finiteness of the generated semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    Finite { count_bound: usize },
    Infinite,
    Inconclusive,
}

/// Decides finiteness by computing the closure and testing whether the
/// quotient by the combined ideal is finite-dimensional.
pub fn is_finite(gens: &[QMatrix], bounds: &Bounds) -> Result<Finiteness> {
    let closure = semigroup_closure(gens, bounds)?;
    if !closure.status.is_exact() {
        return Ok(Finiteness::Inconclusive);
    }
    match closure.combined()?.quotient_basis() {
        QuotientBasis::Finite(basis) => Ok(Finiteness::Finite {
            count_bound: basis.len(),
        }),
        QuotientBasis::Infinite => Ok(Finiteness::Infinite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn s_matrix() -> QMatrix {
        QMatrix::from_i64(&[&[0, -1], &[1, 0]])
    }

    fn t_matrix() -> QMatrix {
        QMatrix::from_i64(&[&[1, 1], &[0, 1]])
    }

    fn e_matrix() -> QMatrix {
        QMatrix::from_i64(&[&[1, 0], &[0, 0]])
    }

    #[test]
    fn rank_stratify_examples() {
        let strata = rank_stratify(&[s_matrix(), t_matrix(), e_matrix()]);
        assert_eq!(strata.len(), 2);
        assert_eq!(strata[0].0, 1);
        assert_eq!(strata[0].1, vec![e_matrix()]);
        assert_eq!(strata[1].0, 2);
        assert_eq!(strata[1].1, vec![s_matrix(), t_matrix()]);

        let z = rank_stratify(&[QMatrix::zero(2)]);
        assert_eq!(z, vec![(0, vec![QMatrix::zero(2)])]);
    }

    #[test]
    fn build_graph_idempotent_example() {
        let e = e_matrix();
        let g = build_graph(&[e.clone()], 1).unwrap();
        assert_eq!(g.vertices().len(), 1);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].from, 0);
        assert_eq!(g.edges()[0].to, 0);
        let sccs = nontrivial_sccs(&g);
        assert_eq!(sccs.len(), 1);
    }

    #[test]
    fn build_graph_nilpotent_has_no_vertices() {
        let a = QMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let g = build_graph(&[a], 1).unwrap();
        assert!(g.vertices().is_empty());
        assert!(nontrivial_sccs(&g).is_empty());
    }

    #[test]
    fn build_graph_two_projections() {
        let e = e_matrix();
        let f = QMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        let g = build_graph(&[e, f], 1).unwrap();
        assert_eq!(g.vertices().len(), 2);
        let sccs = nontrivial_sccs(&g);
        assert_eq!(sccs.len(), 2);
        // E F = F E = 0 is reflected by the absence of cross edges
        for e in g.edges() {
            assert_eq!(e.from, e.to);
        }
    }

    #[test]
    fn path_labels_dedupe_idempotent() {
        let e = e_matrix();
        let g = build_graph(&[e.clone()], 1).unwrap();
        let labels = path_labels(&g, 3, EndPoint::Any, EndPoint::Any, false).unwrap();
        assert_eq!(labels, vec![e]);
    }

    #[test]
    fn path_labels_with_pseudo_inverse() {
        let a = QMatrix::from_i64(&[&[2, 0], &[0, 0]]);
        let g = build_graph(&[a.clone()], 1).unwrap();
        let scc = nontrivial_sccs(&g).remove(0);
        let aug = with_pseudo_edges(&g, &scc.vertices).unwrap();
        let labels = path_labels(&aug, 2, EndPoint::Any, EndPoint::Any, true).unwrap();
        let half = QMatrix::from_rows(vec![
            vec![crate::rat::rat(1, 2), int(0)],
            vec![int(0), int(0)],
        ]);
        let e = e_matrix();
        assert!(labels.contains(&a));
        assert!(labels.contains(&half));
        assert!(labels.contains(&e));
        assert!(labels.contains(&a.mul(&a)));
    }

    #[test]
    fn scc_closure_idempotent_point() {
        let e = e_matrix();
        let g = build_graph(&[e.clone()], 1).unwrap();
        let scc = nontrivial_sccs(&g).remove(0);
        let (pieces, status) = scc_closure(&g, &scc, &Bounds::default()).unwrap();
        assert!(status.is_exact());
        assert_eq!(pieces.len(), 1);
        assert_eq!(
            pieces[0],
            Ideal::of_point(&VarSpace::matrix(2), &flatten(&e))
        );
    }

    #[test]
    fn scc_closure_scaling_line() {
        let a = QMatrix::from_i64(&[&[2, 0], &[0, 0]]);
        let g = build_graph(&[a.clone()], 1).unwrap();
        let scc = nontrivial_sccs(&g).remove(0);
        let (pieces, status) = scc_closure(&g, &scc, &Bounds::default()).unwrap();
        assert!(status.is_exact());
        assert_eq!(pieces.len(), 1);
        let space = VarSpace::matrix(2);
        assert_eq!(
            pieces[0],
            Ideal::parse(&space, &["x_1_2", "x_2_1", "x_2_2"]).unwrap()
        );
    }

    #[test]
    fn max_rank_closure_scaling_example() {
        let a = QMatrix::from_i64(&[&[2, 0], &[0, 0]]);
        let (set, status) = max_rank_closure(&[a.clone()], 1, &Bounds::default()).unwrap();
        assert!(status.is_exact());
        // denotation: {diag(t, 0) : t != 0}
        assert!(set.member(&flatten(&a)));
        assert!(set.member(&flatten(&QMatrix::from_i64(&[&[7, 0], &[0, 0]]))));
        assert!(!set.member(&flatten(&QMatrix::zero(2))));
        assert!(!set.member(&flatten(&e_matrix().mul(&QMatrix::zero(2)))));
    }

    #[test]
    fn semigroup_closure_single_idempotent() {
        let e = e_matrix();
        let sc = semigroup_closure(&[e.clone()], &Bounds::default()).unwrap();
        assert!(sc.status.is_exact());
        assert!(sc.contains_matrix(&e));
        match sc.combined().unwrap().quotient_basis() {
            QuotientBasis::Finite(b) => assert_eq!(b.len(), 1),
            QuotientBasis::Infinite => panic!("single idempotent point expected"),
        }
    }

    #[test]
    fn semigroup_closure_empty() {
        let sc = semigroup_closure(&[], &Bounds::default()).unwrap();
        assert!(sc.pieces.is_empty());
        assert!(sc.combined().unwrap().is_unit());
    }

    #[test]
    fn semigroup_closure_one_dimensional_doubling() {
        let two = QMatrix::from_i64(&[&[2]]);
        let sc = semigroup_closure(&[two], &Bounds::default()).unwrap();
        assert!(sc.status.is_exact());
        assert!(sc.combined().unwrap().is_zero_ideal());
    }

    #[test]
    fn is_finite_examples() {
        let bounds = Bounds::default();
        let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            is_finite(&[swap], &bounds).unwrap(),
            Finiteness::Finite { count_bound: 2 }
        );
        let two = QMatrix::from_i64(&[&[2]]);
        assert_eq!(is_finite(&[two], &bounds).unwrap(), Finiteness::Infinite);
        assert_eq!(
            is_finite(&[e_matrix()], &bounds).unwrap(),
            Finiteness::Finite { count_bound: 1 }
        );
    }

    #[test]
    fn constructible_generators_cover_their_cells() {
        // generators: the punctured scaling line {diag(t, 0) : t != 0}
        let space = VarSpace::matrix(2);
        let cell = Cell::new(
            Ideal::parse(&space, &["x_1_2", "x_2_1", "x_2_2"]).unwrap(),
            Ideal::parse(&space, &["x_1_1"]).unwrap(),
        )
        .unwrap();
        let set = ConstructibleSet::from_cells(&space, vec![cell]).unwrap();
        let sc = semigroup_closure_constructible(&set, 2, &Bounds::default()).unwrap();
        assert!(sc.status.is_exact());
        // products stay on the closed line
        assert!(sc.contains_matrix(&QMatrix::from_i64(&[&[6, 0], &[0, 0]])));
        assert!(!sc.contains_matrix(&QMatrix::identity(2)));
        assert!(certify(&sc, &Generators::Constructible { n: 2, set }).unwrap());
        let dispatched = closure_of_generators(
            &Generators::Matrices(vec![QMatrix::from_i64(&[&[2, 0], &[0, 0]])]),
            &Bounds::default(),
        )
        .unwrap();
        assert!(dispatched.status.is_exact());
    }

    #[test]
    fn certify_accepts_and_rejects() {
        let bounds = Bounds::default();
        let e = e_matrix();
        let sc = semigroup_closure(&[e.clone()], &bounds).unwrap();
        assert!(certify(&sc, &Generators::Matrices(vec![e.clone()])).unwrap());
        // a closure missing the generator fails
        let fake = SemiClosure {
            n: 2,
            pieces: vec![Ideal::of_point(
                &VarSpace::matrix(2),
                &flatten(&QMatrix::identity(2)),
            )],
            status: Status::Exact,
        };
        assert!(!certify(
            &fake,
            &Generators::Matrices(vec![QMatrix::identity(2).scale(&int(2))])
        )
        .unwrap());
        // the full space is trivially closed
        let full = SemiClosure {
            n: 2,
            pieces: vec![Ideal::zero(&VarSpace::matrix(2))],
            status: Status::Exact,
        };
        assert!(certify(&full, &Generators::Matrices(vec![e])).unwrap());
    }
}
