//! Ordered variable spaces.
//!
//! Every polynomial carries a reference to the space its exponent
//! vectors are indexed by. Spaces compare by name list, so two
//! independently constructed spaces with the same names are the same
//! space; the `Arc` only makes cloning cheap.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct VarSpace {
    names: Arc<Vec<String>>,
}

impl PartialEq for VarSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VarSpace {}

impl std::hash::Hash for VarSpace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.names.hash(state);
    }
}

impl VarSpace {
    /// Builds a space from distinct, non-empty names. Order is fixed and
    /// determines every monomial order on the space.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("variable space must be non-empty"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::invalid("empty variable name"));
            }
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VarSpace {
            names: Arc::new(names),
        })
    }

    /// The standard space of n-by-n matrix coordinates `x_<row>_<col>`,
    /// row-major, 1-indexed.
    pub fn matrix(n: usize) -> Self {
        let names = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| format!("x_{i}_{j}")))
            .collect::<Vec<_>>();
        VarSpace::new(names).expect("matrix space")
    }

    /// Matrix coordinates plus the inverse-determinant coordinate `y`.
    pub fn matrix_with_inverse_det(n: usize) -> Self {
        let mut names = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| format!("x_{i}_{j}")))
            .collect::<Vec<_>>();
        names.push("y".to_string());
        VarSpace::new(names).expect("matrix space with y")
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of matrix coordinate (row, col), 1-indexed, in a space built
    /// by [`VarSpace::matrix`].
    pub fn matrix_index(n: usize, row: usize, col: usize) -> usize {
        debug_assert!(1 <= row && row <= n && 1 <= col && col <= n);
        (row - 1) * n + (col - 1)
    }

    /// Concatenation of two spaces (for product constructions); names must
    /// stay distinct.
    pub fn join(&self, other: &VarSpace) -> Result<VarSpace> {
        VarSpace::new(self.names.iter().chain(other.names.iter()).cloned())
    }

    /// A fresh auxiliary name not present in the space (`t`, `t0`, `t1`, ...).
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.index_of(stem).is_none() {
            return stem.to_string();
        }
        let mut k = 0usize;
        loop {
            let cand = format!("{stem}{k}");
            if self.index_of(&cand).is_none() {
                return cand;
            }
            k += 1;
        }
    }

    /// Space with `extra` auxiliary variables appended in front of nothing —
    /// appended at the END of the list, so existing variable indices are
    /// preserved.
    pub fn extend<S: Into<String>>(&self, extra: impl IntoIterator<Item = S>) -> Result<VarSpace> {
        VarSpace::new(
            self.names
                .iter()
                .cloned()
                .chain(extra.into_iter().map(Into::into)),
        )
    }

    /// Space with the same names prefixed, for disjoint product copies.
    pub fn prefixed(&self, prefix: &str) -> VarSpace {
        VarSpace::new(self.names.iter().map(|n| format!("{prefix}{n}"))).expect("prefixed space")
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}
