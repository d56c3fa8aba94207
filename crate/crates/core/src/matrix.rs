//! Exact linear algebra over the integers and over Z_d.
//!
//! Everything here is computed with arbitrary-precision integers: Hermite and
//! Smith normal forms, kernel and image lattice bases, and exact solving of
//! lattice membership. These are the primitives every other module is built on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Error type for the exact linear algebra operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    /// A target column is not in the integer span of the basis columns.
    NotInLattice { column: usize },
    /// Modulus smaller than 2.
    BadModulus { modulus: i64 },
    /// Operand shapes are incompatible.
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
}

impl fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinAlgError::NotInLattice { column } => {
                write!(f, "target column {} is not in the lattice spanned by the basis", column)
            }
            LinAlgError::BadModulus { modulus } => {
                write!(f, "modulus must be at least 2, got {}", modulus)
            }
            LinAlgError::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {}x{}, got {}x{}", expected.0, expected.1, got.0, got.1)
            }
        }
    }
}

impl std::error::Error for LinAlgError {}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn add_assign_at(&mut self, r: usize, c: usize, delta: &BigInt) {
        let idx = r * self.cols + c;
        self.entries[idx] = &self.entries[idx] + delta;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        assert!(cols.iter().all(|c| c.len() == rows));
        IntMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in multiplication");
        IntMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.at(r, k) * other.at(k, c);
            }
            acc
        })
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { other.at(r, c - self.cols).clone() }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            let v = -&self.entries[idx];
            self.entries[idx] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.entries[dst * self.cols + c] + q * &self.entries[src * self.cols + c];
            self.entries[dst * self.cols + c] = v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.entries[r * self.cols + dst] + q * &self.entries[r * self.cols + src];
            self.entries[r * self.cols + dst] = v;
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                let swap = (k + 1..n).find(|&r| !m.at(r, k).is_zero());
                match swap {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    m.set(i, j, &num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1).clone()
    }
}

/// Canonical serialization: one row per line, entries separated by single spaces.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        Ok(())
    }
}

/// A matrix of residues modulo a fixed d >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, LinAlgError> {
        if modulus < 2 {
            return Err(LinAlgError::BadModulus { modulus: modulus as i64 });
        }
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(ModMatrix { modulus, rows, cols, entries })
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(modulus, r, c, rows.iter().flatten().copied().collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.at(r, c));
            }
        }
        ModMatrix { modulus: self.modulus, rows: self.cols, cols: self.rows, entries }
    }

    /// Matrix-vector product mod d.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self.at(r, c) % self.modulus * (v[c] % self.modulus)) % self.modulus;
                }
                acc
            })
            .collect()
    }

    /// Lift to an integer matrix with entries in [0, d).
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| BigInt::from(self.at(r, c)))
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        Ok(())
    }
}

/// Unimodular decomposition u·a·v = s with s diagonal and the diagonal entries
/// forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub factors: Vec<BigInt>,
}

/// Row-style Hermite normal form: row echelon, pivots positive, entries above
/// each pivot reduced into [0, pivot). Unique for a given row lattice; the row
/// space of the input is preserved.
pub fn hermite_form(a: &IntMatrix) -> IntMatrix {
    row_hermite_with_transform(a).0
}

/// Hermite normal form together with a unimodular u satisfying u·a = h.
pub fn row_hermite_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        if (pivot_row..h.rows()).all(|r| h.at(r, col).is_zero()) {
            continue;
        }
        // Reduce everything below pivot_row in this column to zero via gcd steps.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..h.rows() {
                if !h.at(r, col).is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) if h.at(r, col).abs() < h.at(b, col).abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let b = best.expect("nonzero entry exists");
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..h.rows() {
                if !h.at(r, col).is_zero() {
                    let q = -h.at(r, col).div_floor(h.at(pivot_row, col));
                    h.add_row_multiple(r, pivot_row, &q);
                    u.add_row_multiple(r, pivot_row, &q);
                    if !h.at(r, col).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h.at(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    // Reduce entries above each pivot into [0, pivot).
    for &(pr, pc) in &pivots {
        for r in 0..pr {
            let q = -h.at(r, pc).div_floor(h.at(pr, pc));
            h.add_row_multiple(r, pr, &q);
            u.add_row_multiple(r, pr, &q);
        }
    }
    (h, u)
}

/// Column-style Hermite normal form via the transpose.
pub fn column_hermite_form(a: &IntMatrix) -> IntMatrix {
    hermite_form(&a.transpose()).transpose()
}

/// Column HNF together with a unimodular v satisfying a·v = h.
fn column_hermite_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (ht, ut) = row_hermite_with_transform(&a.transpose());
    (ht.transpose(), ut.transpose())
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_form(a: &IntMatrix) -> SmithForm {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let bound = a.rows().min(a.cols());
    let mut t = 0;
    while t < bound {
        // Find the smallest nonzero entry of the trailing submatrix.
        let mut best: Option<(usize, usize)> = None;
        for r in t..s.rows() {
            for c in t..s.cols() {
                if !s.at(r, c).is_zero() {
                    best = match best {
                        None => Some((r, c)),
                        Some((br, bc)) if s.at(r, c).abs() < s.at(br, bc).abs() => Some((r, c)),
                        keep => keep,
                    };
                }
            }
        }
        let (br, bc) = match best {
            Some(p) => p,
            None => break,
        };
        s.swap_rows(t, br);
        u.swap_rows(t, br);
        s.swap_cols(t, bc);
        v.swap_cols(t, bc);
        // Clear row and column t; repeat while remainders appear.
        loop {
            let mut dirty = false;
            for r in t + 1..s.rows() {
                if !s.at(r, t).is_zero() {
                    let q = -s.at(r, t).div_floor(s.at(t, t));
                    s.add_row_multiple(r, t, &q);
                    u.add_row_multiple(r, t, &q);
                    if !s.at(r, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..s.cols() {
                if !s.at(t, c).is_zero() {
                    let q = -s.at(t, c).div_floor(s.at(t, t));
                    s.add_col_multiple(c, t, &q);
                    v.add_col_multiple(c, t, &q);
                    if !s.at(t, c).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A remainder is now the smallest entry; move it to the pivot.
                let mut best: Option<(usize, usize)> = None;
                for r in t..s.rows() {
                    for c in t..s.cols() {
                        if !s.at(r, c).is_zero() {
                            best = match best {
                                None => Some((r, c)),
                                Some((pr, pc)) if s.at(r, c).abs() < s.at(pr, pc).abs() => Some((r, c)),
                                keep => keep,
                            };
                        }
                    }
                }
                let (br, bc) = best.expect("pivot vanished");
                s.swap_rows(t, br);
                u.swap_rows(t, br);
                s.swap_cols(t, bc);
                v.swap_cols(t, bc);
                continue;
            }
            // Row and column are clear; enforce that the pivot divides the rest.
            let mut offender: Option<usize> = None;
            'search: for r in t + 1..s.rows() {
                for c in t + 1..s.cols() {
                    if !s.at(r, c).mod_floor(s.at(t, t)).is_zero() {
                        offender = Some(r);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(r) => {
                    s.add_row_multiple(t, r, &BigInt::one());
                    u.add_row_multiple(t, r, &BigInt::one());
                }
                None => break,
            }
        }
        if s.at(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..t).map(|i| s.at(i, i).clone()).collect();
    SmithForm { u, s, v, factors }
}

/// Basis of the integer kernel lattice {x : a·x = 0}, as columns.
///
/// The basis is saturated (it spans the full integer kernel, not a finite-index
/// sublattice) and column-Hermite-reduced so the output is canonical.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    // Row-reduce the transpose: u·aᵀ = h; rows of u matching zero rows of h
    // span the left kernel of aᵀ, i.e. the kernel of a.
    let (h, u) = row_hermite_with_transform(&a.transpose());
    let mut kernel_rows: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..h.rows() {
        if (0..h.cols()).all(|c| h.at(r, c).is_zero()) {
            kernel_rows.push((0..u.cols()).map(|c| u.at(r, c).clone()).collect());
        }
    }
    let k = IntMatrix::from_rows(&kernel_rows);
    if kernel_rows.is_empty() {
        return IntMatrix::zero(a.cols(), 0);
    }
    hermite_form(&k).transpose()
}

/// Basis of the image lattice {a·x : x integer}, as columns, canonical.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let h = hermite_form(&a.transpose());
    let nonzero: Vec<Vec<BigInt>> =
        (0..h.rows()).filter(|&r| (0..h.cols()).any(|c| !h.at(r, c).is_zero())).map(|r| (0..h.cols()).map(|c| h.at(r, c).clone()).collect()).collect();
    if nonzero.is_empty() {
        return IntMatrix::zero(a.rows(), 0);
    }
    IntMatrix::from_rows(&nonzero).transpose()
}

/// Solve basis·y = target exactly over the integers.
///
/// Columns of `target` must lie in the integer span of the columns of `basis`;
/// otherwise NotInLattice reports the first offending column.
pub fn solve_in_lattice(basis: &IntMatrix, target: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    if basis.rows() != target.rows() {
        return Err(LinAlgError::ShapeMismatch {
            expected: (basis.rows(), target.cols()),
            got: (target.rows(), target.cols()),
        });
    }
    let (h, v) = column_hermite_with_transform(basis);
    // Pivot positions of the column-echelon h.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for c in 0..h.cols() {
        if let Some(r) = (0..h.rows()).find(|&r| !h.at(r, c).is_zero()) {
            pivots.push((r, c));
        }
    }
    let mut z = IntMatrix::zero(h.cols(), target.cols());
    for tcol in 0..target.cols() {
        let mut residual = target.column(tcol);
        for &(pr, pc) in &pivots {
            let (q, rem) = residual[pr].div_rem(h.at(pr, pc));
            if !rem.is_zero() {
                return Err(LinAlgError::NotInLattice { column: tcol });
            }
            if !q.is_zero() {
                for r in 0..h.rows() {
                    residual[r] = &residual[r] - &q * h.at(r, pc);
                }
            }
            z.set(pc, tcol, q);
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return Err(LinAlgError::NotInLattice { column: tcol });
        }
    }
    Ok(v.mul(&z))
}

/// Entrywise residue in [0, d), mathematical mod (negative inputs map to
/// nonnegative residues).
pub fn reduce_mod(a: &IntMatrix, d: u64) -> Result<ModMatrix, LinAlgError> {
    if d < 2 {
        return Err(LinAlgError::BadModulus { modulus: d as i64 });
    }
    let big_d = BigInt::from(d);
    let entries: Vec<u64> = (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .map(|(r, c)| {
            let m = a.at(r, c).mod_floor(&big_d);
            let (_, digits) = m.to_u64_digits();
            digits.first().copied().unwrap_or(0)
        })
        .collect();
    ModMatrix::new(d, a.rows(), a.cols(), entries)
}

/// Reduce a column vector into the fundamental domain of the lattice spanned
/// by the columns of `lattice` (assumed in column-HNF). Deterministic.
pub fn reduce_column_mod_lattice(vec: &[BigInt], lattice: &IntMatrix) -> Vec<BigInt> {
    let mut out = vec.to_vec();
    for c in 0..lattice.cols() {
        if let Some(r) = (0..lattice.rows()).find(|&r| !lattice.at(r, c).is_zero()) {
            let q = out[r].div_floor(lattice.at(r, c));
            if !q.is_zero() {
                for i in 0..lattice.rows() {
                    out[i] = &out[i] - &q * lattice.at(i, c);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    /// The paper's toric differentials; reused as oracle inputs in several tests.
    pub fn toric_d2() -> IntMatrix {
        m(&[vec![0, 0], vec![0, 0], vec![-1, 1], vec![1, -1], vec![1, -1]])
    }

    pub fn toric_d1() -> IntMatrix {
        m(&[vec![-1, 1, 0, 0, 0], vec![1, -1, 0, -1, 1], vec![0, 0, 0, 1, -1]])
    }

    pub fn rp2_d2() -> IntMatrix {
        m(&[
            vec![1, 0, 0, -1],
            vec![1, 0, 0, 1],
            vec![0, 1, 0, -1],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, -1],
        ])
    }

    pub fn rp2_d1() -> IntMatrix {
        m(&[
            vec![-1, 1, 0, 0, -1, 1],
            vec![1, -1, -1, 1, 0, 0],
            vec![0, 0, 1, -1, 1, -1],
        ])
    }

    fn rp2_kernel_generators() -> IntMatrix {
        // Columns: e1+e2, e2+e4-e6, e3+e4, e5+e6
        m(&[
            vec![1, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, -1, 0, 1],
        ])
    }

    fn rp2_image_generators() -> IntMatrix {
        // Columns: e1+e2, 2(e2+e4-e6), e3+e4, e5+e6
        m(&[
            vec![1, 0, 0, 0],
            vec![1, 2, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 2, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, -2, 0, 1],
        ])
    }

    fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
        solve_in_lattice(a, b).is_ok() && solve_in_lattice(b, a).is_ok()
    }

    #[test]
    fn hermite_identity_and_zero() {
        assert_eq!(hermite_form(&IntMatrix::identity(3)), IntMatrix::identity(3));
        assert_eq!(hermite_form(&IntMatrix::zero(2, 3)), IntMatrix::zero(2, 3));
    }

    #[test]
    fn hermite_is_idempotent_on_rp2_kernel_rows() {
        let rows = rp2_kernel_generators().transpose();
        // The paper's generators are row-echelon already; the reduced HNF is a
        // fixed point of hermite_form and spans the same row lattice.
        let h = hermite_form(&rows);
        assert_eq!(hermite_form(&h), h);
        assert!(lattices_equal(&rows.transpose(), &h.transpose()));
        // Echelon structure of the input: leading columns strictly increase.
        let leads: Vec<usize> = (0..rows.rows())
            .map(|r| (0..rows.cols()).find(|&c| !rows.at(r, c).is_zero()).unwrap())
            .collect();
        assert!(leads.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hermite_preserves_row_space() {
        let a = m(&[vec![2, 3, 6, 2], vec![5, 6, 1, 6], vec![8, 3, 1, 1]]);
        let h = hermite_form(&a);
        assert!(lattices_equal(&a.transpose(), &h.transpose()));
    }

    #[test]
    fn smith_zero_matrix() {
        let s = smith_form(&IntMatrix::zero(3, 2));
        assert!(s.factors.is_empty());
        assert!(s.s.is_zero());
    }

    #[test]
    fn smith_diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let s = smith_form(&a);
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.s);
        assert_eq!(s.u.det().abs(), BigInt::one());
        assert_eq!(s.v.det().abs(), BigInt::one());
    }

    #[test]
    fn smith_toric_boundary() {
        // Column 2 is the negative of column 1, so the rank is 1 and the
        // content is 1.
        let s = smith_form(&toric_d2());
        assert_eq!(s.factors, vec![BigInt::from(1)]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = kernel_basis(&IntMatrix::identity(4));
        assert_eq!(k.cols(), 0);
        assert_eq!(k.rows(), 4);
    }

    #[test]
    fn kernel_of_rp2_p_x() {
        let k = kernel_basis(&rp2_d1());
        assert_eq!(k.cols(), 4);
        assert!(rp2_d1().mul(&k).is_zero());
        assert!(lattices_equal(&k, &rp2_kernel_generators()));
    }

    #[test]
    fn kernel_of_toric_p_x() {
        let k = kernel_basis(&toric_d1());
        let expected = m(&[
            vec![1, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![0, 0, 1],
        ]);
        assert!(lattices_equal(&k, &expected));
    }

    #[test]
    fn image_of_zero_is_empty() {
        let im = image_basis(&IntMatrix::zero(3, 2));
        assert_eq!(im.cols(), 0);
    }

    #[test]
    fn image_of_rp2_boundary() {
        let im = image_basis(&rp2_d2());
        assert_eq!(im.cols(), 4);
        assert!(lattices_equal(&im, &rp2_image_generators()));
    }

    #[test]
    fn image_of_torsion_polygon_boundary() {
        let d2 = m(&[vec![3], vec![3]]);
        let im = image_basis(&d2);
        assert_eq!(im, m(&[vec![3], vec![3]]));
    }

    #[test]
    fn solve_identity_basis() {
        let t = m(&[vec![4, -1], vec![7, 0], vec![-2, 9]]);
        let y = solve_in_lattice(&IntMatrix::identity(3), &t).unwrap();
        assert_eq!(y, t);
    }

    #[test]
    fn solve_rp2_image_in_kernel_coordinates() {
        let y = solve_in_lattice(&rp2_kernel_generators(), &rp2_image_generators()).unwrap();
        let expected = m(&[
            vec![1, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert_eq!(y, expected);
    }

    #[test]
    fn solve_detects_odd_vector_outside_even_lattice() {
        let basis = m(&[vec![2]]);
        let target = m(&[vec![1]]);
        assert_eq!(
            solve_in_lattice(&basis, &target),
            Err(LinAlgError::NotInLattice { column: 0 })
        );
    }

    #[test]
    fn reduce_mod_conventions() {
        let a = m(&[vec![-1]]);
        assert_eq!(reduce_mod(&a, 3).unwrap().at(0, 0), 2);
        assert!(matches!(reduce_mod(&a, 1), Err(LinAlgError::BadModulus { .. })));
        // Toric d1 mod 2 is the displayed P_X.
        let px = reduce_mod(&toric_d1(), 2).unwrap();
        let expected =
            ModMatrix::from_rows(2, &[vec![1, 1, 0, 0, 0], vec![1, 1, 0, 1, 1], vec![0, 0, 0, 1, 1]]).unwrap();
        assert_eq!(px, expected);
        // All ±1 entries of the RP2 boundary become 1 mod 2.
        let pz = reduce_mod(&rp2_d2(), 2).unwrap();
        for r in 0..pz.rows() {
            for c in 0..pz.cols() {
                assert_eq!(pz.at(r, c), rp2_d2().at(r, c).abs().to_u64_digits().1.first().copied().unwrap_or(0));
            }
        }
    }

    #[test]
    fn smith_factors_match_transpose() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        assert_eq!(smith_form(&a).factors, smith_form(&a.transpose()).factors);
    }

    #[test]
    fn canonical_serialization() {
        let a = toric_d2();
        assert_eq!(a.to_string(), "0 0\n0 0\n-1 1\n1 -1\n1 -1");
    }
}
