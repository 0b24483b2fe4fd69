//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: the Hermite
//! normal form, the kernel lattice of an integer matrix, membership tests in
//! that lattice, and rational sign-pattern feasibility inside the kernel
//! subspace (by Fourier–Motzkin elimination on integer-scaled inequalities).
//! The kernel of the transposed adjacency matrix is what drives the binomial
//! description of the necessity range in [`crate::ideal`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Euclid, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::KripkeFrame;

/// A dense matrix with arbitrary-precision integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<I, R, T>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut data = Vec::new();
        let mut nrows = 0;
        let mut ncols = None;
        for row in rows {
            let before = data.len();
            data.extend(row.into_iter().map(Into::into));
            let width = data.len() - before;
            match ncols {
                None => ncols = Some(width),
                Some(w) => assert_eq!(w, width, "ragged rows"),
            }
            nrows += 1;
        }
        IntegerMatrix {
            rows: nrows,
            cols: ncols.unwrap_or(0),
            data,
        }
    }

    /// The adjacency matrix of a frame, rows = neighborhoods.
    pub fn adjacency_of(frame: &KripkeFrame) -> Self {
        IntegerMatrix::from_rows(
            frame
                .adjacency_rows()
                .into_iter()
                .map(|row| row.into_iter().map(i64::from)),
        )
    }

    /// The transposed adjacency matrix of a frame.
    pub fn transposed_adjacency_of(frame: &KripkeFrame) -> Self {
        IntegerMatrix::adjacency_of(frame).transpose()
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut out = IntegerMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] += factor * row[source]`.
    fn row_multiply_add(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let delta = factor * self.get(source, c);
            self.data[target * self.cols + c] += delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * M = H`, pivots positive, entries above each pivot reduced to
/// `0..pivot`, zero rows at the bottom.
pub fn hermite_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.row_count());
    let (rows, cols) = (m.row_count(), m.col_count());
    let mut r = 0;
    let mut c = 0;
    while r < rows && c < cols {
        let pivot = (r..rows)
            .filter(|&i| !h.get(i, c).is_zero())
            .min_by_key(|&i| h.get(i, c).abs());
        let Some(pivot) = pivot else {
            c += 1;
            continue;
        };
        h.swap_rows(r, pivot);
        u.swap_rows(r, pivot);

        for k in r + 1..rows {
            if h.get(k, c).is_zero() {
                continue;
            }
            let q = -h.get(k, c).div_euclid(h.get(r, c));
            h.row_multiply_add(k, r, &q);
            u.row_multiply_add(k, r, &q);
        }
        // Remainders may survive one pass; stay on this column until clear.
        if (r + 1..rows).any(|k| !h.get(k, c).is_zero()) {
            continue;
        }

        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for k in 0..r {
            let q = -h.get(k, c).div_euclid(h.get(r, c));
            if !q.is_zero() {
                h.row_multiply_add(k, r, &q);
                u.row_multiply_add(k, r, &q);
            }
        }
        r += 1;
        c += 1;
    }
    (h, u)
}

/// A canonical basis of the integer kernel `{ x : M x = 0 }` of some matrix.
///
/// The basis matrix is in Hermite normal form, which makes it unique for the
/// lattice it spans and therefore comparable across runs. The lattice is
/// saturated: any integer vector in the rational span lies in the integer
/// span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

/// Computes a canonical basis of `{ x ∈ Z^cols : M x = 0 }`.
pub fn kernel_basis(m: &IntegerMatrix) -> LatticeBasis {
    let (h, u) = hermite_normal_form(&m.transpose());
    let raw: Vec<Vec<BigInt>> = (0..h.row_count())
        .filter(|&r| h.row_is_zero(r))
        .map(|r| u.row(r).to_vec())
        .collect();
    let canonical = if raw.is_empty() {
        Vec::new()
    } else {
        let (hb, _) = hermite_normal_form(&IntegerMatrix::from_rows(raw));
        (0..hb.row_count())
            .filter(|&r| !hb.row_is_zero(r))
            .map(|r| hb.row(r).to_vec())
            .collect()
    };
    LatticeBasis {
        dim: m.col_count(),
        vectors: canonical,
    }
}

impl LatticeBasis {
    /// Length of the ambient vectors.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis vectors (the nullity of the defining matrix).
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    /// Builds a canonical basis from spanning vectors (used by tests and by
    /// callers that already hold kernel vectors).
    pub fn from_vectors(dim: usize, vectors: Vec<Vec<BigInt>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), dim, "vector length mismatch");
        }
        if vectors.is_empty() {
            return LatticeBasis { dim, vectors };
        }
        let (h, _) = hermite_normal_form(&IntegerMatrix::from_rows(vectors));
        let canonical = (0..h.row_count())
            .filter(|&r| !h.row_is_zero(r))
            .map(|r| h.row(r).to_vec())
            .collect();
        LatticeBasis {
            dim,
            vectors: canonical,
        }
    }

    /// True iff `alpha` is an integer combination of the basis vectors.
    ///
    /// The basis rows are in Hermite normal form, so membership reduces to
    /// exact back-substitution along the pivot columns.
    pub fn contains(&self, alpha: &[BigInt]) -> Result<bool> {
        if alpha.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: alpha.len(),
            });
        }
        let mut residue = alpha.to_vec();
        for row in &self.vectors {
            let pivot_col = row
                .iter()
                .position(|e| !e.is_zero())
                .expect("basis rows are non-zero");
            let (q, r) = residue[pivot_col].div_rem(&row[pivot_col]);
            if !r.is_zero() {
                return Ok(false);
            }
            if !q.is_zero() {
                for (res, entry) in residue.iter_mut().zip(row) {
                    *res -= &q * entry;
                }
            }
        }
        Ok(residue.iter().all(Zero::is_zero))
    }

    /// Basis rows as `i64` entries, for compact report output.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.vectors
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        i64::try_from(e.clone()).map_err(|_| Error::Overflow {
                            what: "kernel basis entry",
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// A sign requirement on kernel vectors: every listed index must be
/// non-positive and one of them at most `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    dim: usize,
    nonpositive: u64,
    strict: usize,
}

impl SignPattern {
    /// `nonpositive` lists 1-based indices forced `<= 0`; `strict` is the one
    /// index among them forced `<= -1`.
    pub fn new(dim: usize, nonpositive: &[usize], strict: usize) -> Result<Self> {
        assert!((1..=64).contains(&dim), "dimension out of range");
        let mut mask = 0u64;
        for &i in nonpositive {
            if i == 0 || i > dim {
                return Err(Error::WorldOutOfRange {
                    world: i,
                    world_count: dim,
                });
            }
            mask |= 1 << (i - 1);
        }
        if strict == 0 || strict > dim {
            return Err(Error::WorldOutOfRange {
                world: strict,
                world_count: dim,
            });
        }
        if mask & (1 << (strict - 1)) == 0 {
            return Err(Error::StrictIndexNotForced);
        }
        Ok(SignPattern {
            dim,
            nonpositive: mask,
            strict,
        })
    }

    /// The pattern asking for a kernel vector whose positive part lives
    /// inside `support` and whose negative part reaches the index `j`
    /// outside it: non-positive on the complement of `support`, strict at `j`.
    pub fn separating(dim: usize, support: &[usize], j: usize) -> Result<Self> {
        let mut support_mask = 0u64;
        for &i in support {
            if i == 0 || i > dim {
                return Err(Error::WorldOutOfRange {
                    world: i,
                    world_count: dim,
                });
            }
            support_mask |= 1 << (i - 1);
        }
        Self::separating_mask(dim, support_mask, j)
    }

    pub(crate) fn separating_mask(dim: usize, support_mask: u64, j: usize) -> Result<Self> {
        if j == 0 || j > dim {
            return Err(Error::WorldOutOfRange {
                world: j,
                world_count: dim,
            });
        }
        if support_mask & (1 << (j - 1)) != 0 {
            return Err(Error::StrictIndexNotForced);
        }
        let full = if dim == 64 {
            u64::MAX
        } else {
            (1u64 << dim) - 1
        };
        Ok(SignPattern {
            dim,
            nonpositive: full & !support_mask,
            strict: j,
        })
    }
}

/// Decides whether some rational vector in the span of `basis` satisfies the
/// sign pattern. A rational witness scales to an integer one, so this exactly
/// decides the existence of an integer kernel vector with the required signs.
pub fn sign_feasible(basis: &LatticeBasis, pattern: &SignPattern) -> bool {
    assert_eq!(basis.dim(), pattern.dim, "dimension mismatch");
    let mut constraints = Vec::new();
    let mut mask = pattern.nonpositive;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize + 1;
        mask &= mask - 1;
        let coeffs: Vec<BigInt> = basis.vectors.iter().map(|v| v[i - 1].clone()).collect();
        let bound = if i == pattern.strict {
            -BigInt::one()
        } else {
            BigInt::zero()
        };
        constraints.push(Constraint { coeffs, bound });
    }
    fourier_motzkin_feasible(constraints)
}

/// Decides whether the span of `basis` contains a non-zero vector that is
/// non-positive on every coordinate of `t_mask`.
///
/// Such a vector has a strictly negative coordinate in `t_mask` iff its
/// coordinate sum over `t_mask` can be pushed to `-1`, so one feasibility
/// query answers the whole family of strict-index queries at once.
pub(crate) fn nonpositive_nonzero_on(basis: &LatticeBasis, t_mask: u64) -> bool {
    if basis.is_trivial() || t_mask == 0 {
        return false;
    }
    let mut constraints = Vec::new();
    let mut sum = vec![BigInt::zero(); basis.rank()];
    let mut mask = t_mask;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        let coeffs: Vec<BigInt> = basis.vectors.iter().map(|v| v[i].clone()).collect();
        for (acc, c) in sum.iter_mut().zip(&coeffs) {
            *acc += c;
        }
        constraints.push(Constraint {
            coeffs,
            bound: BigInt::zero(),
        });
    }
    constraints.push(Constraint {
        coeffs: sum,
        bound: -BigInt::one(),
    });
    fourier_motzkin_feasible(constraints)
}

/// One linear inequality `coeffs · y <= bound` over rational unknowns `y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<BigInt>,
    bound: BigInt,
}

impl Constraint {
    fn normalize(&mut self) {
        let mut g = self.bound.abs();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g > BigInt::one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.bound /= &g;
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Exact Fourier–Motzkin elimination; returns whether the system has a
/// rational solution. Scaling an inequality by a positive integer is exact,
/// so all intermediate constraints stay integral.
fn fourier_motzkin_feasible(mut constraints: Vec<Constraint>) -> bool {
    loop {
        let mut seen = BTreeSet::new();
        let mut active = Vec::new();
        for mut c in constraints {
            if c.is_constant() {
                if c.bound.is_negative() {
                    return false;
                }
                continue;
            }
            c.normalize();
            if seen.insert(c.clone()) {
                active.push(c);
            }
        }
        if active.is_empty() {
            return true;
        }

        let nvars = active[0].coeffs.len();
        let var = (0..nvars)
            .filter(|&v| active.iter().any(|c| !c.coeffs[v].is_zero()))
            .min_by_key(|&v| {
                let pos = active.iter().filter(|c| c.coeffs[v].is_positive()).count();
                let neg = active.iter().filter(|c| c.coeffs[v].is_negative()).count();
                pos * neg
            })
            .expect("non-constant constraints mention a variable");

        let mut zero = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in active {
            if c.coeffs[var].is_zero() {
                zero.push(c);
            } else if c.coeffs[var].is_positive() {
                pos.push(c);
            } else {
                neg.push(c);
            }
        }
        let mut next = zero;
        for p in &pos {
            for n in &neg {
                let a = &p.coeffs[var];
                let b = &n.coeffs[var];
                // (-b) * p + a * n eliminates `var`; both factors positive.
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(pc, nc)| pc * -b + nc * a)
                    .collect();
                let bound = &p.bound * -b + &n.bound * a;
                next.push(Constraint { coeffs, bound });
            }
        }
        constraints = next;
    }
}
