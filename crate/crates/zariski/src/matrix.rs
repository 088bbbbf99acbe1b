//! Exact matrix geometry: rational matrices, canonical subspaces,
//! Plucker coordinates, pseudo-inverses, Jordan-Chevalley decomposition,
//! unipotent logarithms, and finite-order detection.

use std::fmt;

use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linalg;
use crate::rat::Rat;
use crate::unipoly::UPoly;
use crate::vars::VarSpace;

/// Square matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", crate::rat::format_rat(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0);
        QMatrix {
            n,
            entries: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(
            n > 0 && rows.iter().all(|r| r.len() == n),
            "square matrix required"
        );
        QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rat::from_integer(BigInt::from(v)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = QMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        (0..self.n).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.n)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.n, other.n);
        QMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.n, other.n);
        QMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, f: &Rat) -> QMatrix {
        QMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a.clone() * f).collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        QMatrix::from_fn(n, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..n {
                if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                    acc += self.get(i, k).clone() * other.get(k, j).clone();
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Rat::zero();
                for k in 0..self.n {
                    if !self.get(i, k).is_zero() && !v[k].is_zero() {
                        acc += self.get(i, k).clone() * v[k].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> QMatrix {
        let mut base = self.clone();
        let mut acc = QMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows())
    }

    /// Characteristic polynomial and adjugate by Faddeev-LeVerrier.
    /// Returns (char poly with ascending coefficients, adjugate matrix).
    pub fn char_poly_adjugate(&self) -> (UPoly, QMatrix) {
        let n = self.n;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = QMatrix::identity(n);
        let mut m_prev = QMatrix::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let trace: Rat = (0..n)
                .map(|i| am.get(i, i).clone())
                .fold(Rat::zero(), |a, b| a + b);
            let c = -trace / Rat::from_integer(BigInt::from(k));
            coeffs[n - k] = c.clone();
            m_prev = m.clone();
            m = am;
            for i in 0..n {
                let v = m.get(i, i).clone() + c.clone();
                m.set(i, i, v);
            }
        }
        // adj(A) = (-1)^(n-1) * M_n where M_n is the last pre-update matrix
        let sign = if (n - 1) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        let mut adj = m_prev.scale(&sign);
        // the loop above stored M_{n} into m_prev only for k = n
        if n == 1 {
            adj = QMatrix::identity(1);
        }
        (UPoly::new(coeffs), adj)
    }

    pub fn char_poly(&self) -> UPoly {
        self.char_poly_adjugate().0
    }

    pub fn det(&self) -> Rat {
        let chi = self.char_poly();
        // det(A) = (-1)^n * chi(0)
        let c0 = chi.coeffs.first().cloned().unwrap_or_else(Rat::zero);
        if self.n % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    pub fn adjugate(&self) -> QMatrix {
        self.char_poly_adjugate().1
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.adjugate().scale(&(Rat::one() / det)))
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Evaluates a univariate polynomial at this matrix.
    pub fn eval_poly(&self, p: &UPoly) -> QMatrix {
        let mut acc = QMatrix::zero(self.n);
        for c in p.coeffs.iter().rev() {
            acc = acc.mul(self);
            for i in 0..self.n {
                let v = acc.get(i, i).clone() + c.clone();
                acc.set(i, i, v);
            }
        }
        acc
    }
}

/// Subspace of Q^n with a canonical reduced row-echelon basis, so equal
/// subspaces are equal values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Rat>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient);
        }
        let mut rows = rows;
        linalg::rref(&mut rows);
        Subspace {
            ambient,
            basis: rows,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_rows(ambient, QMatrix::identity(ambient).rows())
    }

    pub fn span_of(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        Subspace::from_rows(ambient, vectors.to_vec())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_rows(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        linalg::rank(&rows) == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(self.ambient, rows)
    }

    /// True if the two subspaces intersect only in zero.
    pub fn meets_trivially(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim() + other.dim()
    }
}

/// Grade-r Plucker vector: coordinates indexed by r-subsets of
/// {0..n-1} in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    pub n: usize,
    pub grade: usize,
    pub coords: Vec<Rat>,
}

/// Lexicographically ordered r-subsets of {0..n-1}.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(n, r, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, r, 0, &mut current, &mut out);
    out
}

fn minor(rows: &[Vec<Rat>], cols: &[usize]) -> Rat {
    let k = rows.len();
    debug_assert_eq!(cols.len(), k);
    if k == 0 {
        return Rat::one();
    }
    let sub = QMatrix::from_fn(k, |i, j| rows[i][cols[j]].clone());
    sub.det()
}

/// Rank, kernel, and image of a matrix, all exact; rank + dim ker = n
/// and the image is spanned by the columns.
pub fn space_data(a: &QMatrix) -> (usize, Subspace, Subspace) {
    let n = a.dim();
    let kernel_vectors = linalg::kernel_basis(a.rows(), n);
    let kernel = Subspace::span_of(n, &kernel_vectors);
    let image_rows: Vec<Vec<Rat>> = (0..n).map(|j| a.col(j)).collect();
    let image = Subspace::from_rows(n, image_rows);
    let rank = image.dim();
    debug_assert_eq!(rank + kernel.dim(), n);
    (rank, kernel, image)
}

/// Plucker embedding: the r-minors of the canonical basis matrix.
pub fn plucker(w: &Subspace) -> Result<WedgeVector> {
    let r = w.dim();
    if r == 0 {
        return Err(Error::invalid("plucker: zero subspace has no grade"));
    }
    let n = w.ambient();
    let coords = subsets(n, r)
        .iter()
        .map(|cols| minor(w.basis_rows(), cols))
        .collect();
    Ok(WedgeVector {
        n,
        grade: r,
        coords,
    })
}

/// Wedge product of two Plucker vectors.
pub fn wedge(a: &WedgeVector, b: &WedgeVector) -> WedgeVector {
    assert_eq!(a.n, b.n);
    let n = a.n;
    let grade = a.grade + b.grade;
    let idx_a = subsets(n, a.grade);
    let idx_b = subsets(n, b.grade);
    let idx_out = subsets(n, grade.min(n + 1));
    let mut coords = vec![Rat::zero(); if grade > n { 0 } else { idx_out.len() }];
    if grade > n {
        return WedgeVector {
            n,
            grade,
            coords: vec![],
        };
    }
    let position: std::collections::BTreeMap<Vec<usize>, usize> = idx_out
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    for (ia, sa) in idx_a.iter().enumerate() {
        if a.coords[ia].is_zero() {
            continue;
        }
        'next: for (ib, sb) in idx_b.iter().enumerate() {
            if b.coords[ib].is_zero() {
                continue;
            }
            // disjointness and sign by inversion count
            let mut merged: Vec<usize> = Vec::with_capacity(grade);
            merged.extend(sa.iter());
            for x in sb {
                if sa.contains(x) {
                    continue 'next;
                }
                merged.push(*x);
            }
            let mut inversions = 0usize;
            for (i, x) in merged.iter().enumerate() {
                for y in &merged[i + 1..] {
                    if y < x {
                        inversions += 1;
                    }
                }
            }
            let mut sorted = merged.clone();
            sorted.sort_unstable();
            let sign = if inversions % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            let pos = position[&sorted];
            coords[pos] += sign * a.coords[ia].clone() * b.coords[ib].clone();
        }
    }
    WedgeVector { n, grade, coords }
}

/// Transversality of complementary-dimension subspaces: U and V meet
/// trivially iff the stacked basis determinant is nonzero.
pub fn transversal(u: &Subspace, v: &Subspace) -> Result<bool> {
    if u.ambient() != v.ambient() {
        return Err(Error::invalid("transversal: different ambient dimensions"));
    }
    if u.dim() + v.dim() != u.ambient() {
        return Err(Error::invalid(
            "transversal: dimensions must be complementary",
        ));
    }
    let mut rows = u.basis_rows().to_vec();
    rows.extend(v.basis_rows().iter().cloned());
    if rows.is_empty() {
        return Ok(u.ambient() == 0);
    }
    Ok(linalg::rank(&rows) == u.ambient())
}

/// The unique matrix with kernel `uprime`, image `v`, inverting `a`
/// between `v` and `im(a)`.
pub fn pseudo_inverse(a: &QMatrix, uprime: &Subspace, v: &Subspace) -> Result<QMatrix> {
    let n = a.dim();
    let (rank, kernel, image) = space_data(a);
    if v.dim() != rank {
        return Err(Error::invalid("pseudo_inverse: dim V must equal rank(a)"));
    }
    if uprime.dim() != n - rank {
        return Err(Error::invalid(
            "pseudo_inverse: dim U' must equal n - rank(a)",
        ));
    }
    if !kernel.meets_trivially(v) {
        return Err(Error::invalid("pseudo_inverse: ker(a) meets V"));
    }
    if !uprime.meets_trivially(&image) {
        return Err(Error::invalid("pseudo_inverse: U' meets im(a)"));
    }
    // a restricted to V is a bijection onto im(a); invert it on the image
    // basis and kill U'
    let av_cols: Vec<Vec<Rat>> = v.basis_rows().iter().map(|vb| a.mul_vec(vb)).collect();
    // matrix with columns a*v_j
    let av_matrix: Vec<Vec<Rat>> = (0..n)
        .map(|i| av_cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut images: Vec<Vec<Rat>> = Vec::new(); // preimages in V of the image basis
    for w in image.basis_rows() {
        let c = linalg::solve(&av_matrix, w)
            .ok_or_else(|| Error::invalid("pseudo_inverse: inconsistent system"))?;
        // x = sum c_j v_j
        let mut x = vec![Rat::zero(); n];
        for (j, coeff) in c.iter().enumerate() {
            for (k, entry) in v.basis_rows()[j].iter().enumerate() {
                x[k] += coeff.clone() * entry.clone();
            }
        }
        images.push(x);
    }
    // p maps the basis (image ++ uprime) to (preimages ++ 0)
    let mut p_cols: Vec<Vec<Rat>> = image.basis_rows().to_vec();
    p_cols.extend(uprime.basis_rows().iter().cloned());
    let p = QMatrix::from_fn(n, |i, j| p_cols[j][i].clone());
    let mut q_cols: Vec<Vec<Rat>> = images;
    q_cols.extend(std::iter::repeat(vec![Rat::zero(); n]).take(n - rank));
    let q = QMatrix::from_fn(n, |i, j| q_cols[j][i].clone());
    let p_inv = p
        .inverse()
        .map_err(|_| Error::invalid("pseudo_inverse: basis not complementary"))?;
    Ok(q.mul(&p_inv))
}

/// Multiplicative Jordan-Chevalley decomposition `a = s*u = u*s` with
/// `s` semisimple and `u` unipotent, by Newton iteration against the
/// squarefree part of the characteristic polynomial.
pub fn jordan_chevalley(a: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    if !a.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let n = a.dim();
    let chi = a.char_poly();
    let m = chi.squarefree_part();
    let md = m.derivative();
    let mut s = a.clone();
    let mut steps = 0usize;
    loop {
        let value = s.eval_poly(&m);
        if value.is_zero() {
            break;
        }
        let deriv = s.eval_poly(&md);
        let deriv_inv = deriv
            .inverse()
            .map_err(|_| Error::invalid("jordan_chevalley: derivative not invertible"))?;
        s = s.sub(&deriv_inv.mul(&value));
        steps += 1;
        if steps > n + 2 {
            return Err(Error::invalid(
                "jordan_chevalley: Newton iteration failed to converge",
            ));
        }
    }
    let u = s.inverse()?.mul(a);
    Ok((s, u))
}

/// True when `(a - I)^n = 0`.
pub fn is_unipotent(a: &QMatrix) -> bool {
    let n = a.dim();
    let nilpart = a.sub(&QMatrix::identity(n));
    nilpart.pow(n as u64).is_zero()
}

/// Exact logarithm of a unipotent matrix (finite series).
pub fn unipotent_log(u: &QMatrix) -> Result<QMatrix> {
    if !is_unipotent(u) {
        return Err(Error::invalid("unipotent_log: matrix is not unipotent"));
    }
    let n = u.dim();
    let x = u.sub(&QMatrix::identity(n));
    let mut acc = QMatrix::zero(n);
    let mut power = QMatrix::identity(n);
    for k in 1..n {
        power = power.mul(&x);
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        acc = acc.add(&power.scale(&(sign / Rat::from_integer(BigInt::from(k)))));
    }
    Ok(acc)
}

/// Ideal of the Zariski closure of the one-parameter unipotent group
/// `{exp(t*log u) : t}` over matrix coordinates; the ideal of the point
/// `I` when `u = I`.
pub fn one_param_closure(u: &QMatrix) -> Result<Ideal> {
    use crate::constructible::{image_closure_of_map, PolyMap};
    use crate::poly::Polynomial;

    let n = u.dim();
    let space = VarSpace::matrix(n);
    if u.is_identity() {
        let point: Vec<Rat> = QMatrix::identity(n).entries.clone();
        return Ok(Ideal::of_point(&space, &point));
    }
    let log = unipotent_log(u)?;
    // exp(t*N): entries are polynomials in t of degree < n
    let t_space = VarSpace::new(["t"]).unwrap();
    let t = Polynomial::var(&t_space, 0);
    let mut entries: Vec<Polynomial> = (0..n * n)
        .map(|k| {
            if k % (n + 1) == 0 {
                Polynomial::one(&t_space)
            } else {
                Polynomial::zero(&t_space)
            }
        })
        .collect();
    // accumulate sum_k N^k t^k / k!
    let mut power = QMatrix::identity(n);
    let mut factorial = Rat::one();
    let mut t_pow = Polynomial::one(&t_space);
    for k in 1..n {
        power = power.mul(&log);
        factorial *= Rat::from_integer(BigInt::from(k));
        t_pow = t_pow.mul(&t);
        if power.is_zero() {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                let c = power.get(i, j).clone() / factorial.clone();
                if !c.is_zero() {
                    let idx = i * n + j;
                    entries[idx] = entries[idx].add(&t_pow.scale(&c));
                }
            }
        }
    }
    let map = PolyMap::new(&t_space, &space, entries)?;
    image_closure_of_map(&Ideal::zero(&t_space), None, &map)
}

/// Euler totient by trial division.
fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Exact multiplicative order of `a` when finite, `None` otherwise. The
/// candidate cap is `lcm{m : totient(m) <= n}`, the exact bound for
/// eigenvalue roots of unity in dimension n.
pub fn finite_order(a: &QMatrix) -> Result<Option<u64>> {
    if !a.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let n = a.dim() as u64;
    let mut cap = BigInt::one();
    let bound = 2 * n * n + 2;
    for m in 1..=bound {
        if totient(m) <= n {
            cap = cap.lcm(&BigInt::from(m));
        }
    }
    let cap_u64: u64 = (&cap)
        .try_into()
        .expect("order cap fits in u64 at desk scale");
    if !a.pow(cap_u64).is_identity() {
        return Ok(None);
    }
    let mut order = cap_u64;
    let mut m = order;
    let mut p = 2u64;
    let mut primes = Vec::new();
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for p in primes {
        while order % p == 0 && a.pow(order / p).is_identity() {
            order /= p;
        }
    }
    Ok(Some(order))
}
