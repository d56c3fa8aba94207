//! Chain complexes with labeled bases: extraction from cell complexes and the
//! combination operations (tensor product, direct sum, dual, change of ring).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cell::CellComplex;
use crate::matrix::{reduce_mod, IntMatrix, LinAlgError, ModMatrix};

/// A bounded chain complex of free Z-modules with named basis elements.
///
/// `labels[n]` is the ordered basis of degree n; `diff(n)` is the matrix of
/// the differential C_n -> C_{n-1} for 1 <= n <= max_degree().
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    labels: Vec<Vec<String>>,
    diffs: Vec<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    ShapeMismatch { degree: usize, expected: (usize, usize), got: (usize, usize) },
    BadModulus { modulus: i64 },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::ShapeMismatch { degree, expected, got } => write!(
                f,
                "differential at degree {} has shape {}x{}, expected {}x{}",
                degree, got.0, got.1, expected.0, expected.1
            ),
            ChainError::BadModulus { modulus } => write!(f, "modulus must be at least 2, got {}", modulus),
        }
    }
}

impl std::error::Error for ChainError {}

impl ChainComplex {
    /// Assemble a complex from labeled bases and differentials. Only shapes
    /// are checked here; use `verify` for the chain condition.
    pub fn new(labels: Vec<Vec<String>>, diffs: Vec<IntMatrix>) -> Result<Self, ChainError> {
        assert!(!labels.is_empty(), "a chain complex needs at least degree 0");
        assert_eq!(diffs.len() + 1, labels.len(), "need one differential per positive degree");
        for (i, d) in diffs.iter().enumerate() {
            let expected = (labels[i].len(), labels[i + 1].len());
            if (d.rows(), d.cols()) != expected {
                return Err(ChainError::ShapeMismatch { degree: i + 1, expected, got: (d.rows(), d.cols()) });
            }
        }
        Ok(ChainComplex { labels, diffs })
    }

    pub fn max_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        if n < self.labels.len() { self.labels[n].len() } else { 0 }
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    /// The differential C_n -> C_{n-1}, for 1 <= n <= max_degree().
    pub fn diff(&self, n: usize) -> &IntMatrix {
        assert!(n >= 1 && n <= self.max_degree(), "no differential at degree {n}");
        &self.diffs[n - 1]
    }

    /// The differential as a matrix even at the boundary degrees, where it is
    /// a zero map with the appropriate shape.
    pub fn diff_or_zero(&self, n: usize) -> IntMatrix {
        if n == 0 {
            IntMatrix::zero(0, self.rank(0))
        } else if n > self.max_degree() {
            IntMatrix::zero(self.rank(self.max_degree()), 0)
        } else {
            self.diff(n).clone()
        }
    }

    /// Check d·d = 0 exactly; reports the first degree n where
    /// diff(n)·diff(n+1) fails to vanish.
    pub fn verify(&self) -> Result<(), usize> {
        for n in 1..self.max_degree() {
            if !self.diff(n).mul(self.diff(n + 1)).is_zero() {
                return Err(n);
            }
        }
        Ok(())
    }

    /// Cellular chain complex: bases are the cells in input order, the degree
    /// 1 differential is target minus source, and the degree 2 differential
    /// sums each boundary circle with signs (repeats accumulate).
    pub fn from_cell_complex(x: &CellComplex) -> ChainComplex {
        debug_assert!(x.validate().is_ok(), "cell complex must validate before chain extraction");
        let vertex_pos: HashMap<&str, usize> =
            x.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let edge_pos: HashMap<&str, usize> =
            x.edges.iter().enumerate().map(|(i, e)| (e.name.as_str(), i)).collect();
        let mut d1 = IntMatrix::zero(x.vertices.len(), x.edges.len());
        for (c, e) in x.edges.iter().enumerate() {
            d1.add_assign_at(vertex_pos[e.tgt.as_str()], c, &BigInt::from(1));
            d1.add_assign_at(vertex_pos[e.src.as_str()], c, &BigInt::from(-1));
        }
        let mut d2 = IntMatrix::zero(x.edges.len(), x.faces.len());
        for (c, f) in x.faces.iter().enumerate() {
            for r in &f.boundary.refs {
                d2.add_assign_at(edge_pos[r.cell.as_str()], c, &BigInt::from(r.sign.as_i64()));
            }
        }
        let labels = vec![
            x.vertices.clone(),
            x.edges.iter().map(|e| e.name.clone()).collect(),
            x.faces.iter().map(|f| f.name.clone()).collect(),
        ];
        let complex = ChainComplex { labels, diffs: vec![d1, d2] };
        debug_assert_eq!(complex.verify(), Ok(()));
        complex
    }

    /// Tensor product with Koszul signs: P_n = ⊕_{i+j=n} C_i⊗D_j, bases
    /// ordered lexicographically by (degree split i, left index, right index),
    /// and d(x⊗y) = dx⊗y + (-1)^i x⊗dy.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let (nc, ne) = (self.max_degree(), other.max_degree());
        let total = nc + ne;
        // Blocks of degree n: (i, j = n - i) with i ascending.
        let blocks = |n: usize| -> Vec<(usize, usize)> {
            (0..=n).filter(|&i| i <= nc && n - i <= ne).map(|i| (i, n - i)).collect()
        };
        let block_offset = |n: usize, bi: usize, bj: usize| -> usize {
            let mut off = 0;
            for (i, j) in blocks(n) {
                if (i, j) == (bi, bj) {
                    return off;
                }
                off += self.rank(i) * other.rank(j);
            }
            unreachable!("block ({bi},{bj}) not present in degree {n}")
        };
        let mut labels: Vec<Vec<String>> = Vec::with_capacity(total + 1);
        for n in 0..=total {
            let mut level = Vec::new();
            for (i, j) in blocks(n) {
                for a in self.labels(i) {
                    for b in other.labels(j) {
                        level.push(format!("{a}⊗{b}"));
                    }
                }
            }
            labels.push(level);
        }
        let mut diffs: Vec<IntMatrix> = Vec::with_capacity(total);
        for n in 1..=total {
            let mut d = IntMatrix::zero(labels[n - 1].len(), labels[n].len());
            for (i, j) in blocks(n) {
                let cols_b = other.rank(j);
                let base_col = block_offset(n, i, j);
                for a in 0..self.rank(i) {
                    for b in 0..cols_b {
                        let col = base_col + a * cols_b + b;
                        if i >= 1 {
                            let da = self.diff(i);
                            let row_base = block_offset(n - 1, i - 1, j);
                            for r in 0..da.rows() {
                                let v = da.at(r, a);
                                if !v.is_zero() {
                                    d.add_assign_at(row_base + r * other.rank(j) + b, col, v);
                                }
                            }
                        }
                        if j >= 1 {
                            let db = other.diff(j);
                            let row_base = block_offset(n - 1, i, j - 1);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            for r in 0..db.rows() {
                                let v = db.at(r, b);
                                if !v.is_zero() {
                                    d.add_assign_at(
                                        row_base + a * other.rank(j - 1) + r,
                                        col,
                                        &(BigInt::from(sign) * v),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        let product = ChainComplex { labels, diffs };
        debug_assert_eq!(product.verify(), Ok(()));
        product
    }

    /// Block-diagonal direct sum; the shorter complex is padded with zero
    /// levels.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let total = self.max_degree().max(other.max_degree());
        let mut labels = Vec::with_capacity(total + 1);
        for n in 0..=total {
            let mut level: Vec<String> = Vec::new();
            if n < self.labels.len() {
                level.extend(self.labels[n].iter().cloned());
            }
            if n < other.labels.len() {
                level.extend(other.labels[n].iter().cloned());
            }
            labels.push(level);
        }
        let mut diffs = Vec::with_capacity(total);
        for n in 1..=total {
            let a = if n <= self.max_degree() {
                self.diff(n).clone()
            } else {
                IntMatrix::zero(self.rank(n - 1), 0)
            };
            let b = if n <= other.max_degree() {
                other.diff(n).clone()
            } else {
                IntMatrix::zero(other.rank(n - 1), 0)
            };
            let mut d = IntMatrix::zero(a.rows() + b.rows(), a.cols() + b.cols());
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    d.set(r, c, a.at(r, c).clone());
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    d.set(a.rows() + r, a.cols() + c, b.at(r, c).clone());
                }
            }
            diffs.push(d);
        }
        ChainComplex { labels, diffs }
    }

    /// Dual complex: degrees reversed, differentials transposed.
    pub fn dual(&self) -> ChainComplex {
        let n = self.max_degree();
        let labels = (0..=n).map(|k| self.labels[n - k].clone()).collect();
        let diffs = (1..=n).map(|k| self.diff(n + 1 - k).transpose()).collect();
        let dual = ChainComplex { labels, diffs };
        debug_assert!(self.verify().is_err() || dual.verify().is_ok());
        dual
    }

    /// Reduce every differential entrywise into Z_d.
    pub fn change_ring(&self, d: u64) -> Result<ModChainComplex, ChainError> {
        if d < 2 {
            return Err(ChainError::BadModulus { modulus: d as i64 });
        }
        let diffs = self
            .diffs
            .iter()
            .map(|m| reduce_mod(m, d))
            .collect::<Result<Vec<_>, LinAlgError>>()
            .expect("modulus already validated");
        Ok(ModChainComplex { modulus: d, labels: self.labels.clone(), diffs })
    }
}

/// A chain complex of free Z_d-modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModChainComplex {
    modulus: u64,
    labels: Vec<Vec<String>>,
    diffs: Vec<ModMatrix>,
}

impl ModChainComplex {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn max_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        if n < self.labels.len() { self.labels[n].len() } else { 0 }
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn diff(&self, n: usize) -> &ModMatrix {
        assert!(n >= 1 && n <= self.max_degree(), "no differential at degree {n}");
        &self.diffs[n - 1]
    }

    /// Check d·d ≡ 0 (mod d).
    pub fn verify(&self) -> Result<(), usize> {
        let d = self.modulus;
        for n in 1..self.max_degree() {
            let hi = self.diff(n + 1);
            let lo = self.diff(n);
            for r in 0..lo.rows() {
                for c in 0..hi.cols() {
                    let mut acc = 0u64;
                    for k in 0..lo.cols() {
                        acc = (acc + lo.at(r, k) * hi.at(k, c)) % d;
                    }
                    if acc != 0 {
                        return Err(n);
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::builtin;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn toric_differentials_match_display() {
        let c = ChainComplex::from_cell_complex(&builtin("torus", None).unwrap());
        assert_eq!(
            c.diff(2),
            &m(&[vec![0, 0], vec![0, 0], vec![-1, 1], vec![1, -1], vec![1, -1]])
        );
        assert_eq!(
            c.diff(1),
            &m(&[vec![-1, 1, 0, 0, 0], vec![1, -1, 0, -1, 1], vec![0, 0, 0, 1, -1]])
        );
        assert_eq!(c.labels(1), ["e1", "e2", "e3", "e4", "e5"]);
    }

    #[test]
    fn rp2_differentials_match_display() {
        let c = ChainComplex::from_cell_complex(&builtin("rp2_halfsphere", None).unwrap());
        assert_eq!(
            c.diff(2),
            &m(&[
                vec![1, 0, 0, -1],
                vec![1, 0, 0, 1],
                vec![0, 1, 0, -1],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
                vec![0, 0, 1, -1],
            ])
        );
        assert_eq!(
            c.diff(1),
            &m(&[
                vec![-1, 1, 0, 0, -1, 1],
                vec![1, -1, -1, 1, 0, 0],
                vec![0, 0, 1, -1, 1, -1],
            ])
        );
    }

    #[test]
    fn torsion_polygon_differentials() {
        let c = ChainComplex::from_cell_complex(&builtin("polygon_torsion", Some(3)).unwrap());
        assert_eq!(c.diff(2), &m(&[vec![3], vec![3]]));
        assert_eq!(c.diff(1), &m(&[vec![-1, 1], vec![1, -1]]));
    }

    #[test]
    fn verify_catches_bad_pair() {
        let bad = ChainComplex::new(
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![m(&[vec![1]]), m(&[vec![1]])],
        )
        .unwrap();
        assert_eq!(bad.verify(), Err(1));
        // A length-1 complex verifies vacuously.
        let classical = ChainComplex::new(
            vec![vec!["s1".into()], vec!["b1".into(), "b2".into()]],
            vec![m(&[vec![1, 1]])],
        )
        .unwrap();
        assert_eq!(classical.verify(), Ok(()));
    }

    #[test]
    fn builtin_chains_verify() {
        for (name, param) in crate::cell::builtin_names() {
            let c = ChainComplex::from_cell_complex(&builtin(name, param).unwrap());
            assert_eq!(c.verify(), Ok(()), "d²≠0 for builtin {name}");
        }
    }

    #[test]
    fn tensor_with_point_relabels() {
        let point = ChainComplex::new(vec![vec!["p".into()]], vec![]).unwrap();
        let c = ChainComplex::from_cell_complex(&builtin("torus", None).unwrap());
        let t = c.tensor(&point);
        assert_eq!(t.max_degree(), 2);
        for n in 0..=2 {
            assert_eq!(t.rank(n), c.rank(n));
        }
        assert_eq!(t.diff(1), c.diff(1));
        assert_eq!(t.diff(2), c.diff(2));
        assert_eq!(t.labels(0)[0], "v1⊗p");
    }

    #[test]
    fn tensor_of_interval_chains() {
        let line = ChainComplex::from_cell_complex(&builtin("line", Some(1)).unwrap());
        let t = line.tensor(&line);
        assert_eq!((t.rank(0), t.rank(1), t.rank(2)), (4, 4, 1));
        assert_eq!(t.verify(), Ok(()));
    }

    #[test]
    fn tensor_of_circle_chains() {
        let c3 = ChainComplex::from_cell_complex(&builtin("circle", Some(3)).unwrap());
        let t = c3.tensor(&c3);
        assert_eq!((t.rank(0), t.rank(1), t.rank(2)), (9, 18, 9));
        assert_eq!(t.verify(), Ok(()));
    }

    #[test]
    fn direct_sum_blocks() {
        let c = ChainComplex::from_cell_complex(&builtin("torus", None).unwrap());
        let s = c.direct_sum(&c);
        assert_eq!((s.rank(0), s.rank(1), s.rank(2)), (6, 10, 4));
        assert_eq!(s.verify(), Ok(()));
        // Block structure of d1.
        for r in 0..3 {
            for c2 in 5..10 {
                assert!(s.diff(1).at(r, c2).is_zero());
            }
        }
        for r in 3..6 {
            for c2 in 0..5 {
                assert!(s.diff(1).at(r, c2).is_zero());
            }
        }
        // Sum with the zero complex is the identity.
        let zero = ChainComplex::new(vec![vec![]], vec![]).unwrap();
        let same = c.direct_sum(&zero);
        assert_eq!(same.rank(0), c.rank(0));
        assert_eq!(same.diff(1), c.diff(1));
    }

    #[test]
    fn dual_is_involution_and_transposes() {
        let c = ChainComplex::from_cell_complex(&builtin("torus", None).unwrap());
        let d = c.dual();
        assert_eq!(d.diff(1), &c.diff(2).transpose());
        assert_eq!(d.diff(2), &c.diff(1).transpose());
        assert_eq!(d.verify(), Ok(()));
        assert_eq!(c.dual().dual(), c);
        // Length-1 complex: dual swaps which end is degree 0.
        let classical = ChainComplex::new(
            vec![vec!["s1".into()], vec!["b1".into(), "b2".into()]],
            vec![m(&[vec![1, 1]])],
        )
        .unwrap();
        let dd = classical.dual();
        assert_eq!(dd.rank(0), 2);
        assert_eq!(dd.rank(1), 1);
    }

    #[test]
    fn change_ring_reduces() {
        let c = ChainComplex::from_cell_complex(&builtin("torus", None).unwrap());
        let z2 = c.change_ring(2).unwrap();
        let expected_pz_t = ModMatrix::from_rows(2, &[
            vec![0, 0],
            vec![0, 0],
            vec![1, 1],
            vec![1, 1],
            vec![1, 1],
        ])
        .unwrap();
        assert_eq!(z2.diff(2), &expected_pz_t);
        assert_eq!(z2.verify(), Ok(()));
        // Idempotence at the same modulus.
        let rp2 = ChainComplex::from_cell_complex(&builtin("rp2_halfsphere", None).unwrap());
        let z3 = rp2.change_ring(3).unwrap();
        assert_eq!(z3.diff(2).at(0, 3), 2); // -1 mod 3
        assert!(matches!(c.change_ring(1), Err(ChainError::BadModulus { .. })));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let bad = ChainComplex::new(
            vec![vec!["a".into()], vec!["b".into()]],
            vec![m(&[vec![1, 1]])],
        );
        assert!(matches!(bad, Err(ChainError::ShapeMismatch { degree: 1, .. })));
    }
}
