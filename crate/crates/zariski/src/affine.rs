//! Affine-program front end: the DSL parser, the reduction of a program
//! to a matrix semigroup (one block matrix per edge acting on extended
//! state vectors), per-location invariant extraction from the semigroup
//! closure, and the fixed-degree forward-propagation oracle.

use num::{One, Zero};

use crate::bounds::{Bounds, Status};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linalg;
use crate::matrix::QMatrix;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::rat::{parse_rat, Rat};
use crate::semigroup::{semigroup_closure, SemiClosure};
use crate::vars::VarSpace;

/// Affine update `x := A x + b` on the program variables.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub matrix: QMatrix,
    pub offset: Vec<Rat>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap {
            matrix: QMatrix::identity(n),
            offset: vec![Rat::zero(); n],
        }
    }

    pub fn apply(&self, state: &[Rat]) -> Vec<Rat> {
        self.matrix
            .mul_vec(state)
            .into_iter()
            .zip(&self.offset)
            .map(|(v, b)| v + b.clone())
            .collect()
    }
}

/// Program: locations with affine edges and a distinguished initial
/// location; branching is nondeterministic.
#[derive(Clone, Debug)]
pub struct AffineProgram {
    pub variables: VarSpace,
    pub locations: Vec<String>,
    pub init: usize,
    pub edges: Vec<(usize, AffineMap, usize)>,
}

impl AffineProgram {
    pub fn num_vars(&self) -> usize {
        self.variables.arity()
    }

    pub fn location_index(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l == name)
    }
}

/// Per-location result of the invariant computation.
#[derive(Clone, Debug)]
pub struct LocationInvariant {
    pub location: String,
    pub ideal: Ideal,
    pub status: Status,
    pub reachable: bool,
}

/// Invariants for every location plus the encoding dimension used.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub variables: VarSpace,
    pub encoding_dim: usize,
    pub locations: Vec<LocationInvariant>,
    pub status: Status,
}

// ---------------------------------------------------------------------------
// DSL parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rat),
    Assign, // :=
    Arrow,  // ->
    LBrace,
    RBrace,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    End,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn next_tok(&mut self) -> Result<(Tok, usize, usize)> {
        self.skip_ws_and_comments();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek_char() else {
            return Ok((Tok::End, line, col));
        };
        let tok = match c {
            '{' => {
                self.bump();
                Tok::LBrace
            }
            '}' => {
                self.bump();
                Tok::RBrace
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '+' => {
                self.bump();
                Tok::Plus
            }
            '*' => {
                self.bump();
                Tok::Star
            }
            '-' => {
                self.bump();
                if self.peek_char() == Some('>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            ':' => {
                self.bump();
                if self.peek_char() == Some('=') {
                    self.bump();
                    Tok::Assign
                } else {
                    return Err(self.error("expected `:=`"));
                }
            }
            _ if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(d) = self.peek_char() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if self.peek_char() == Some('/') {
                    self.bump();
                    text.push('/');
                    let mut digits = false;
                    while let Some(d) = self.peek_char() {
                        if d.is_ascii_digit() {
                            text.push(d);
                            self.bump();
                            digits = true;
                        } else {
                            break;
                        }
                    }
                    if !digits {
                        return Err(self.error("expected denominator digits"));
                    }
                }
                Tok::Num(parse_rat(&text).map_err(|e| self.error(e.to_string()))?)
            }
            _ if c.is_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(d) = self.peek_char() {
                    if d.is_alphanumeric() || d == '_' {
                        text.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(text)
            }
            other => return Err(self.error(format!("unexpected character `{other}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let mut lx = Lexer::new(text);
        let mut toks = Vec::new();
        loop {
            let t = lx.next_tok()?;
            let end = t.0 == Tok::End;
            toks.push(t);
            if end {
                break;
            }
        }
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == &tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.next();
                Ok(name)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(name) if name == word => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(format!("expected `{word}`"))),
        }
    }
}

/// Parses the affine-program DSL:
///
/// ```text
/// vars x y; locations q1 q2; init q1;
/// edge q1 -> q2 { x := 3, y := 2 };
/// edge q2 -> q2 { x := 10*x - 8*y, y := 6*x - 4*y };
/// ```
///
/// Assignments are simultaneous; unassigned variables keep their value.
pub fn parse_program(text: &str) -> Result<AffineProgram> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("vars")?;
    let mut var_names = Vec::new();
    while let Tok::Ident(name) = p.peek().clone() {
        if name == "locations" {
            break;
        }
        p.next();
        var_names.push(name);
    }
    if var_names.is_empty() {
        return Err(p.error("expected at least one variable"));
    }
    p.expect(Tok::Semi, "`;` after the variable list")?;
    let variables = VarSpace::new(var_names).map_err(|e| p.error(e.to_string()))?;
    p.expect_keyword("locations")?;
    let mut locations = Vec::new();
    while let Tok::Ident(name) = p.peek().clone() {
        if name == "init" {
            break;
        }
        p.next();
        if locations.contains(&name) {
            return Err(p.error(format!("duplicate location `{name}`")));
        }
        locations.push(name);
    }
    if locations.is_empty() {
        return Err(p.error("expected at least one location"));
    }
    p.expect(Tok::Semi, "`;` after the location list")?;
    p.expect_keyword("init")?;
    let init_name = p.expect_ident("the initial location")?;
    let init = locations
        .iter()
        .position(|l| l == &init_name)
        .ok_or_else(|| p.error(format!("unknown location `{init_name}`")))?;
    p.expect(Tok::Semi, "`;` after the initial location")?;

    let n = variables.arity();
    let mut edges = Vec::new();
    loop {
        match p.peek().clone() {
            Tok::End => break,
            Tok::Ident(word) if word == "edge" => {
                p.next();
                let src_name = p.expect_ident("a source location")?;
                let src = locations
                    .iter()
                    .position(|l| l == &src_name)
                    .ok_or_else(|| p.error(format!("unknown location `{src_name}`")))?;
                p.expect(Tok::Arrow, "`->`")?;
                let tgt_name = p.expect_ident("a target location")?;
                let tgt = locations
                    .iter()
                    .position(|l| l == &tgt_name)
                    .ok_or_else(|| p.error(format!("unknown location `{tgt_name}`")))?;
                p.expect(Tok::LBrace, "`{`")?;
                let mut map = AffineMap::identity(n);
                let mut assigned = vec![false; n];
                if p.peek() != &Tok::RBrace {
                    loop {
                        let var_name = p.expect_ident("a variable")?;
                        let var = variables
                            .index_of(&var_name)
                            .ok_or_else(|| p.error(format!("unknown identifier `{var_name}`")))?;
                        if assigned[var] {
                            return Err(p.error(format!("variable `{var_name}` assigned twice")));
                        }
                        assigned[var] = true;
                        p.expect(Tok::Assign, "`:=`")?;
                        let (row, offset) = parse_affexpr(&mut p, &variables)?;
                        for (j, c) in row.into_iter().enumerate() {
                            map.matrix.set(var, j, c);
                        }
                        map.offset[var] = offset;
                        if p.peek() == &Tok::Comma {
                            p.next();
                        } else {
                            break;
                        }
                    }
                }
                p.expect(Tok::RBrace, "`}`")?;
                p.expect(Tok::Semi, "`;` after the edge")?;
                edges.push((src, map, tgt));
            }
            _ => return Err(p.error("expected `edge` or end of input")),
        }
    }
    Ok(AffineProgram {
        variables,
        locations,
        init,
        edges,
    })
}

/// One affine expression: returns the coefficient row and the constant.
fn parse_affexpr(p: &mut Parser, variables: &VarSpace) -> Result<(Vec<Rat>, Rat)> {
    let n = variables.arity();
    let mut row = vec![Rat::zero(); n];
    let mut offset = Rat::zero();
    let mut first = true;
    loop {
        // sign
        let mut sign = Rat::one();
        loop {
            match p.peek() {
                Tok::Plus => {
                    p.next();
                }
                Tok::Minus => {
                    sign = -sign;
                    p.next();
                }
                _ => break,
            }
        }
        match p.peek().clone() {
            Tok::Num(c) => {
                p.next();
                if p.peek() == &Tok::Star {
                    p.next();
                    let name = p.expect_ident("a variable after `*`")?;
                    let var = variables
                        .index_of(&name)
                        .ok_or_else(|| p.error(format!("unknown identifier `{name}`")))?;
                    if p.peek() == &Tok::Star {
                        return Err(p.error("non-affine expression"));
                    }
                    row[var] += sign * c;
                } else {
                    offset += sign * c;
                }
            }
            Tok::Ident(name) => {
                p.next();
                let var = variables
                    .index_of(&name)
                    .ok_or_else(|| p.error(format!("unknown identifier `{name}`")))?;
                if p.peek() == &Tok::Star {
                    return Err(p.error("non-affine expression"));
                }
                row[var] += sign;
            }
            _ => {
                if first {
                    return Err(p.error("expected an affine expression"));
                }
                return Err(p.error("expected a term"));
            }
        }
        first = false;
        match p.peek() {
            Tok::Plus | Tok::Minus => continue,
            _ => break,
        }
    }
    Ok((row, offset))
}

// ---------------------------------------------------------------------------
// encoding and invariants

/// The block-matrix encoding: one `m(n+1)`-dimensional matrix per edge,
/// with the single nonzero block `[[A, b], [0, 1]]` placed at block
/// position (target, source), plus the initial vector with a single 1
/// at the initial block's affine coordinate.
pub fn encode(program: &AffineProgram) -> (Vec<QMatrix>, Vec<Rat>) {
    let n = program.num_vars();
    let m = program.locations.len();
    let dim = m * (n + 1);
    let mut matrices = Vec::with_capacity(program.edges.len());
    for (src, f, tgt) in &program.edges {
        let mut big = QMatrix::zero(dim);
        let row0 = tgt * (n + 1);
        let col0 = src * (n + 1);
        for i in 0..n {
            for j in 0..n {
                big.set(row0 + i, col0 + j, f.matrix.get(i, j).clone());
            }
            big.set(row0 + i, col0 + n, f.offset[i].clone());
        }
        big.set(row0 + n, col0 + n, Rat::one());
        matrices.push(big);
    }
    let mut v_init = vec![Rat::zero(); dim];
    v_init[program.init * (n + 1) + n] = Rat::one();
    (matrices, v_init)
}

/// Strongest polynomial invariants per location: the semigroup closure
/// of the encoded matrices, sliced by the affine-coordinate condition
/// *before* projecting to the program variables (projecting first can
/// strictly overshoot), unioned over closure pieces. The initial
/// location always also carries the zero vector.
pub fn location_invariants(program: &AffineProgram, bounds: &Bounds) -> Result<InvariantReport> {
    let (matrices, _v_init) = encode(program);
    let n = program.num_vars();
    let m = program.locations.len();
    let dim = m * (n + 1);
    let closure = if matrices.is_empty() {
        SemiClosure::empty(dim)
    } else {
        semigroup_closure(&matrices, bounds)?
    };
    invariants_from_closure(program, &closure)
}

/// Invariant extraction from an already computed closure of the encoded
/// matrix semigroup.
pub fn invariants_from_closure(
    program: &AffineProgram,
    closure: &SemiClosure,
) -> Result<InvariantReport> {
    let n = program.num_vars();
    let m = program.locations.len();
    let dim = m * (n + 1);
    if closure.n() != dim {
        return Err(Error::invalid(
            "invariants_from_closure: closure dimension mismatch",
        ));
    }
    // v_init has a single 1, so M v_init is one column of M
    let t0 = program.init * (n + 1) + n;
    let report_status = closure.status;
    let mut locations = Vec::new();
    for (li, name) in program.locations.iter().enumerate() {
        let ideal = location_ideal(closure, program, li, t0, dim)?;
        let ideal = if li == program.init {
            let zero_pt = Ideal::of_point(&program.variables, &vec![Rat::zero(); n]);
            ideal.intersect(&zero_pt)?
        } else {
            ideal
        };
        let reachable = !ideal.is_unit();
        locations.push(LocationInvariant {
            location: name.clone(),
            ideal,
            status: report_status,
            reachable,
        });
    }
    Ok(InvariantReport {
        variables: program.variables.clone(),
        encoding_dim: dim,
        locations,
        status: report_status,
    })
}

fn location_ideal(
    closure: &SemiClosure,
    program: &AffineProgram,
    location: usize,
    t0: usize,
    dim: usize,
) -> Result<Ideal> {
    let n = program.num_vars();
    let matrix_space = VarSpace::matrix(dim);
    let one_row = location * (n + 1) + n;
    // matrix coordinate index (row, col), 0-based
    let coord = |row: usize, col: usize| VarSpace::matrix_index(dim, row + 1, col + 1);
    let constraint =
        Polynomial::var(&matrix_space, coord(one_row, t0)).sub(&Polynomial::one(&matrix_space));
    let kept: Vec<usize> = (0..n).map(|i| coord(location * (n + 1) + i, t0)).collect();
    let dropped: Vec<usize> = (0..dim * dim).filter(|v| !kept.contains(v)).collect();
    let mut acc = Ideal::unit(&program.variables);
    for piece in &closure.pieces {
        let constrained = piece.sum(&Ideal::new(&matrix_space, vec![constraint.clone()]))?;
        if constrained.is_unit() {
            continue;
        }
        let eliminated = constrained.eliminate(&dropped);
        // rename the kept matrix coordinates to the program variables
        let mut var_map = vec![0usize; dim * dim];
        for (i, &k) in kept.iter().enumerate() {
            var_map[k] = i;
        }
        let gens: Vec<Polynomial> = eliminated
            .gens()
            .iter()
            .map(|g| g.embed(&program.variables, &var_map))
            .collect();
        let projected = Ideal::new(&program.variables, gens);
        acc = acc.intersect(&projected)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// fixed-degree oracle

/// All degree-<=d relations per location by forward propagation of
/// moment spans: the span of the moment vectors of reachable states is
/// closed under the exact linear action of each edge on degree-<=d
/// coefficient vectors, and the annihilator of the resulting span is
/// exactly the wanted relation space.
pub fn mos_invariants(program: &AffineProgram, degree: u32) -> Result<Vec<Vec<Polynomial>>> {
    if degree == 0 {
        return Err(Error::invalid("mos_invariants: degree must be at least 1"));
    }
    let n = program.num_vars();
    let monomials = monomials_up_to_sorted(&program.variables, degree);
    let dim = monomials.len();
    // moment vector of the zero state
    let zero_state = vec![Rat::zero(); n];
    let moment = |state: &[Rat]| -> Vec<Rat> {
        monomials
            .iter()
            .map(|m| {
                let mut acc = Rat::one();
                for (i, &e) in m.exps().iter().enumerate() {
                    for _ in 0..e {
                        acc *= state[i].clone();
                    }
                }
                acc
            })
            .collect()
    };
    // linear action of an affine map on moment vectors: row for monomial
    // m holds the coefficients of m(f(x)) over the monomial basis
    let action = |f: &AffineMap| -> Vec<Vec<Rat>> {
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(&program.variables, f.offset[i].clone());
                for j in 0..n {
                    let c = f.matrix.get(i, j);
                    if !c.is_zero() {
                        p = p.add(&Polynomial::var(&program.variables, j).scale(c));
                    }
                }
                p
            })
            .collect();
        monomials
            .iter()
            .map(|m| {
                let mut composed = Polynomial::one(&program.variables);
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        composed = composed.mul(&images[i].pow(e));
                    }
                }
                monomials.iter().map(|mm| composed.coeff(mm)).collect()
            })
            .collect()
    };
    let actions: Vec<(usize, Vec<Vec<Rat>>, usize)> = program
        .edges
        .iter()
        .map(|(src, f, tgt)| (*src, action(f), *tgt))
        .collect();
    // forward Kleene iteration on reduced span bases
    let mut spans: Vec<Vec<Vec<Rat>>> = vec![Vec::new(); program.locations.len()];
    spans[program.init].push(moment(&zero_state));
    let mut changed = true;
    while changed {
        changed = false;
        for (src, l_f, tgt) in &actions {
            let images: Vec<Vec<Rat>> = spans[*src]
                .iter()
                .map(|mu| {
                    (0..dim)
                        .map(|row| {
                            let mut acc = Rat::zero();
                            for (col, c) in l_f[row].iter().enumerate() {
                                if !c.is_zero() && !mu[col].is_zero() {
                                    acc += c.clone() * mu[col].clone();
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            for img in images {
                let mut candidate = spans[*tgt].clone();
                candidate.push(img);
                if linalg::rank(&candidate) > linalg::rank(&spans[*tgt]) {
                    spans[*tgt] = candidate;
                    linalg::rref(&mut spans[*tgt]);
                    changed = true;
                }
            }
        }
    }
    // annihilators
    let mut out = Vec::new();
    for span in &spans {
        let kernel = if span.is_empty() {
            // unreachable location: every coefficient vector annihilates
            (0..dim)
                .map(|i| {
                    let mut v = vec![Rat::zero(); dim];
                    v[i] = Rat::one();
                    v
                })
                .collect::<Vec<_>>()
        } else {
            linalg::kernel_basis(span.clone(), dim)
        };
        let mut polys: Vec<Polynomial> = kernel
            .into_iter()
            .map(|coeffs| {
                Polynomial::from_terms(&program.variables, monomials.iter().cloned().zip(coeffs))
                    .monic(MonomialOrder::GrevLex)
            })
            .collect();
        polys.sort_by(|a, b| {
            let la = a.leading_monomial(MonomialOrder::GrevLex).expect("nonzero");
            let lb = b.leading_monomial(MonomialOrder::GrevLex).expect("nonzero");
            MonomialOrder::GrevLex.cmp(&la, &lb)
        });
        out.push(polys);
    }
    Ok(out)
}

fn monomials_up_to_sorted(space: &VarSpace, d: u32) -> Vec<Monomial> {
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
    out.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a));
    out
}

/// Span equality of two sets of degree-<=d polynomials by mutual
/// membership of coefficient vectors.
pub fn spans_equal(a: &[Polynomial], b: &[Polynomial], space: &VarSpace, d: u32) -> bool {
    let monomials = monomials_up_to_sorted(space, d);
    let to_vec = |p: &Polynomial| -> Vec<Rat> { monomials.iter().map(|m| p.coeff(m)).collect() };
    let a_rows: Vec<Vec<Rat>> = a.iter().map(to_vec).collect();
    let b_rows: Vec<Vec<Rat>> = b.iter().map(to_vec).collect();
    let rank_a = linalg::rank(&a_rows);
    let rank_b = linalg::rank(&b_rows);
    if rank_a != rank_b {
        return false;
    }
    let mut both = a_rows;
    both.extend(b_rows);
    linalg::rank(&both) == rank_a
}
