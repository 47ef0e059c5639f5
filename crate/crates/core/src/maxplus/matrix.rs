use std::fmt;

use super::{MaxPlus, MaxPlusError};
use crate::scalar::Scalar;

/// Square max-plus matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<MaxPlus<S>>,
}

impl<S: Scalar> Matrix<S> {
    /// All-ε matrix.
    pub fn epsilon(n: usize) -> Self {
        Matrix {
            n,
            data: vec![MaxPlus::EPSILON; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::epsilon(n);
        for i in 0..n {
            m.set(i, i, MaxPlus::e());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> MaxPlus<S>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<MaxPlus<S>>>) -> Result<Self, MaxPlusError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MaxPlusError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            data.extend(r);
        }
        Ok(Matrix { n, data })
    }

    /// Build from optional finite entries, `None` meaning ε.
    pub fn from_options(rows: &[Vec<Option<S>>]) -> Result<Self, MaxPlusError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|v| v.map_or(MaxPlus::EPSILON, MaxPlus::new)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> MaxPlus<S> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MaxPlus<S>) {
        self.data[i * self.n + j] = v;
    }

    /// `A_ij ← A_ij ⊕ v`.
    pub fn accumulate(&mut self, i: usize, j: usize, v: MaxPlus<S>) {
        let cell = &mut self.data[i * self.n + j];
        *cell = cell.oplus(v);
    }

    pub fn is_epsilon(&self) -> bool {
        self.data.iter().all(|v| v.is_epsilon())
    }

    /// Finite entries as `(row, column, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.value().map(|x| (k / self.n, k % self.n, x)))
    }

    pub fn oplus(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.check_dim(other.n)?;
        Ok(Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.oplus(*b)).collect(),
        })
    }

    pub fn otimes(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.check_dim(other.n)?;
        let n = self.n;
        let mut out = Self::epsilon(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_epsilon() {
                    continue;
                }
                for j in 0..n {
                    out.accumulate(i, j, a.otimes(other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn otimes_vec(&self, x: &[MaxPlus<S>]) -> Result<Vec<MaxPlus<S>>, MaxPlusError> {
        self.check_dim(x.len())?;
        Ok((0..self.n)
            .map(|i| MaxPlus::sum((0..self.n).map(|j| self.get(i, j).otimes(x[j]))))
            .collect())
    }

    /// Entrywise comparison with ε matching only ε.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(*b))
    }

    /// Topological order of the graph with an arc `j → i` per finite entry,
    /// or the first node found on a cycle.
    pub(crate) fn topological_order(&self) -> Result<Vec<usize>, usize> {
        let n = self.n;
        let mut indegree = vec![0usize; n];
        for (i, _, _) in self.entries() {
            indegree[i] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(j) = ready.pop() {
            order.push(j);
            for i in (0..n).rev() {
                if !self.get(i, j).is_epsilon() {
                    indegree[i] -= 1;
                    if indegree[i] == 0 {
                        ready.push(i);
                    }
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).find(|&i| indegree[i] > 0).unwrap_or(0))
        }
    }

    /// `A⁺ = A ⊕ A² ⊕ …` by Floyd–Warshall. Meaningful when no cycle has
    /// positive weight.
    pub(crate) fn plus_closure(&self) -> Self {
        let n = self.n;
        let mut c = self.clone();
        for k in 0..n {
            for i in 0..n {
                let a = c.get(i, k);
                if a.is_epsilon() {
                    continue;
                }
                for j in 0..n {
                    let via = a.otimes(c.get(k, j));
                    c.accumulate(i, j, via);
                }
            }
        }
        c
    }

    /// Kleene star `A* = I ⊕ A ⊕ … ⊕ A^(n−1)` of a matrix with acyclic graph.
    pub fn kleene_star(&self) -> Result<Self, MaxPlusError> {
        self.topological_order()
            .map_err(|node| MaxPlusError::CyclicZeroDelay { node })?;
        self.plus_closure().oplus(&Self::identity(self.n))
    }

    fn check_dim(&self, other: usize) -> Result<(), MaxPlusError> {
        if self.n == other {
            Ok(())
        } else {
            Err(MaxPlusError::DimensionMismatch {
                left: self.n,
                right: other,
            })
        }
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
