use super::{Arc, Matrix, MaxPlus, MaxPlusError, PrecedenceGraph};
use crate::scalar::Scalar;

/// Square matrix of max-plus polynomials in the backshift operator γ.
///
/// Stored as coefficient matrices for degrees `low ..= low + coeffs.len() - 1`.
/// Degrees may be negative while a system is being assembled. Leading and
/// trailing all-ε coefficients are trimmed; the zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<S> {
    n: usize,
    low: i64,
    coeffs: Vec<Matrix<S>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn zero(n: usize) -> Self {
        PolyMatrix {
            n,
            low: 0,
            coeffs: Vec::new(),
        }
    }

    /// `γ^0 · I`, the unit of polynomial multiplication.
    pub fn identity(n: usize) -> Self {
        Self::monomial(0, Matrix::identity(n))
    }

    pub fn monomial(degree: i64, m: Matrix<S>) -> Self {
        let mut p = PolyMatrix {
            n: m.dim(),
            low: degree,
            coeffs: vec![m],
        };
        p.trim();
        p
    }

    /// Polynomial `A_0 ⊕ γ A_1 ⊕ …`.
    pub fn from_coeffs(coeffs: Vec<Matrix<S>>) -> Result<Self, MaxPlusError> {
        let n = coeffs.first().map_or(0, Matrix::dim);
        if let Some(bad) = coeffs.iter().find(|m| m.dim() != n) {
            return Err(MaxPlusError::DimensionMismatch {
                left: n,
                right: bad.dim(),
            });
        }
        let mut p = PolyMatrix { n, low: 0, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest degree with a finite entry (0 for the zero polynomial).
    pub fn low_degree(&self) -> i64 {
        self.low
    }

    /// Highest degree with a finite entry (−1 for the zero polynomial).
    pub fn degree(&self) -> i64 {
        if self.is_zero() {
            -1
        } else {
            self.low + self.coeffs.len() as i64 - 1
        }
    }

    /// Coefficient matrix of `γ^degree`, all-ε outside the stored range.
    pub fn coefficient(&self, degree: i64) -> Matrix<S> {
        self.coefficient_ref(degree)
            .cloned()
            .unwrap_or_else(|| Matrix::epsilon(self.n))
    }

    pub(crate) fn coefficient_ref_zero(&self) -> Option<&Matrix<S>> {
        self.coefficient_ref(0)
    }

    pub(crate) fn coefficient_ref(&self, degree: i64) -> Option<&Matrix<S>> {
        let k = degree - self.low;
        if k < 0 {
            None
        } else {
            self.coeffs.get(k as usize)
        }
    }

    /// Stored `(degree, matrix)` pairs from lowest to highest degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Matrix<S>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, m)| (self.low + k as i64, m))
    }

    /// `(A_degree)_ij ← (A_degree)_ij ⊕ value`.
    pub fn accumulate(&mut self, i: usize, j: usize, degree: i64, value: S) {
        if self.coeffs.is_empty() {
            self.low = degree;
            self.coeffs.push(Matrix::epsilon(self.n));
        }
        while degree < self.low {
            self.coeffs.insert(0, Matrix::epsilon(self.n));
            self.low -= 1;
        }
        while degree > self.degree() {
            self.coeffs.push(Matrix::epsilon(self.n));
        }
        self.coeffs[(degree - self.low) as usize].accumulate(i, j, MaxPlus::new(value));
        self.trim();
    }

    pub fn oplus(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (d, m) in other.terms() {
            for (i, j, v) in m.entries() {
                out.accumulate(i, j, d, v);
            }
        }
        Ok(out)
    }

    /// Product: degrees add and coefficients convolve under `⊕`.
    pub fn otimes(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![Matrix::epsilon(self.n); len];
        for (a, ma) in self.coeffs.iter().enumerate() {
            for (b, mb) in other.coeffs.iter().enumerate() {
                coeffs[a + b] = coeffs[a + b].oplus(&ma.otimes(mb)?)?;
            }
        }
        let mut p = PolyMatrix {
            n: self.n,
            low: self.low + other.low,
            coeffs,
        };
        p.trim();
        Ok(p)
    }

    /// `A(μ⁻¹)`: entry `max_l (A_l)_ij − l·μ`.
    pub fn evaluate(&self, mu: S) -> Matrix<S> {
        let mut out = Matrix::epsilon(self.n);
        for (d, m) in self.terms() {
            let shift = -(mu * S::from_int(d));
            for (i, j, v) in m.entries() {
                out.accumulate(i, j, MaxPlus::new(v + shift));
            }
        }
        out
    }

    /// Precedence graph: one arc `j → i` with weight `(A_l)_ij` and
    /// duration `l` per finite entry, ordered by degree then row-major.
    pub fn to_graph(&self) -> PrecedenceGraph<S> {
        let mut g = PrecedenceGraph::new(self.n);
        for (d, m) in self.terms() {
            for (i, j, v) in m.entries() {
                g.add_arc(Arc {
                    tail: j,
                    head: i,
                    weight: v,
                    duration: d,
                });
            }
        }
        g
    }

    /// Number of finite coefficient entries over all degrees.
    pub fn entry_count(&self) -> usize {
        self.coeffs.iter().map(|m| m.entries().count()).sum()
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Matrix::is_epsilon) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|m| m.is_epsilon()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), MaxPlusError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(MaxPlusError::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }
}
