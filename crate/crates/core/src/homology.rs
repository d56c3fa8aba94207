//! Homology decompositions over Z, the qudit logical space over Z_d obtained
//! by changing the ring through the gcd formula, and a brute-force Z_d oracle
//! for cross-checking both.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::chain::ChainComplex;
use crate::matrix::{
    column_hermite_form, image_basis, kernel_basis, reduce_column_mod_lattice, smith_form,
    solve_in_lattice, IntMatrix,
};

/// H_n(C) over Z as free rank plus invariant factors, with one chosen cycle
/// representative per generator (free generators first, then torsion in
/// factor order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyDecomposition {
    pub degree: usize,
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
    pub representatives: IntMatrix,
}

/// The logical space of a qudit code: k' full qudits of dimension d plus one
/// lower-dimensional qudit per torsion summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalSpace {
    pub modulus: u64,
    pub free_qudits: usize,
    pub torsion_dims: Vec<u64>,
}

impl LogicalSpace {
    /// Total number of group elements: d^k' · ∏ d_i.
    pub fn group_order(&self) -> u128 {
        let mut order: u128 = 1;
        for _ in 0..self.free_qudits {
            order *= self.modulus as u128;
        }
        for t in &self.torsion_dims {
            order *= *t as u128;
        }
        order
    }

    /// Elementary divisors (prime powers) of the group, sorted.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for _ in 0..self.free_qudits {
            out.extend(prime_power_parts(self.modulus));
        }
        for t in &self.torsion_dims {
            out.extend(prime_power_parts(*t));
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Display for LogicalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k' = {} qudit(s) of dimension {}; torsion: ", self.free_qudits, self.modulus)?;
        if self.torsion_dims.is_empty() {
            write!(f, "none")
        } else {
            let dims: Vec<String> = self.torsion_dims.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", dims.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    BadModulus { modulus: u64 },
    /// The chain complex does not come from a cell complex: degree-0 homology
    /// has torsion, so the gcd change-of-ring formula does not apply.
    NotCellular { factors: Vec<BigInt> },
    /// The oracle enumeration would exceed the given limit.
    TooLarge { required: u128, limit: u128 },
}

impl fmt::Display for HomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyError::BadModulus { modulus } => write!(f, "modulus must be at least 2, got {}", modulus),
            HomologyError::NotCellular { factors } => write!(
                f,
                "degree-0 homology has invariant factors {:?}; the complex does not arise from a cell complex",
                factors
            ),
            HomologyError::TooLarge { required, limit } => {
                write!(f, "enumeration needs {} vectors, above the limit {}", required, limit)
            }
        }
    }
}

impl std::error::Error for HomologyError {}

/// Exact integral homology at degree n.
///
/// Writes the image of the (n+1)-differential in the coordinates of the
/// kernel lattice of the n-differential, and reads the decomposition off the
/// Smith normal form of that coefficient matrix.
pub fn homology_z(c: &ChainComplex, n: usize) -> HomologyDecomposition {
    assert!(n <= c.max_degree(), "degree {n} out of range");
    let d_n = c.diff_or_zero(n);
    let d_up = c.diff_or_zero(n + 1);
    let kernel = if n == 0 { IntMatrix::identity(c.rank(0)) } else { kernel_basis(&d_n) };
    let image = image_basis(&d_up);
    let coeffs = solve_in_lattice(&kernel, &image)
        .expect("image of the higher differential must lie in the kernel lattice (d²=0)");
    let snf = smith_form(&coeffs);
    let rank = snf.factors.len();
    let free_rank = kernel.cols() - rank;
    let invariant_factors: Vec<BigInt> =
        snf.factors.iter().filter(|f| **f > BigInt::one()).cloned().collect();

    // Adapted generators: columns of kernel·u⁻¹ pair with the SNF diagonal.
    let u_inv = solve_in_lattice(&snf.u, &IntMatrix::identity(snf.u.rows()))
        .expect("u is unimodular");
    let adapted = kernel.mul(&u_inv);
    let image_hnf = column_hermite_form(&image);
    let mut rep_cols: Vec<Vec<BigInt>> = Vec::new();
    for col in rank..kernel.cols() {
        rep_cols.push(reduce_column_mod_lattice(&adapted.column(col), &image_hnf));
    }
    for (i, f) in snf.factors.iter().enumerate() {
        if *f > BigInt::one() {
            rep_cols.push(reduce_column_mod_lattice(&adapted.column(i), &image_hnf));
        }
    }
    let representatives = IntMatrix::from_columns(c.rank(n), &rep_cols);
    HomologyDecomposition { degree: n, free_rank, invariant_factors, representatives }
}

/// Rank of H_0, which counts connected components for cellular complexes.
/// Degree-0 torsion is impossible there; this asserts it.
pub fn h0_components(c: &ChainComplex) -> usize {
    let h = homology_z(c, 0);
    assert!(
        h.invariant_factors.is_empty(),
        "degree-0 homology of a cellular complex cannot have torsion, got {:?}",
        h.invariant_factors
    );
    h.free_rank
}

/// Logical space over Z_d via the structure of H_1 over Z: a free generator
/// stays a full qudit; an order-q generator contributes gcd(q, d), which is a
/// full qudit when the gcd is d, vanishes when it is 1, and is a torsion
/// qudit strictly in between.
pub fn logical_space(c: &ChainComplex, d: u64) -> Result<LogicalSpace, HomologyError> {
    if d < 2 {
        return Err(HomologyError::BadModulus { modulus: d });
    }
    let h0 = homology_z(c, 0);
    if !h0.invariant_factors.is_empty() {
        return Err(HomologyError::NotCellular { factors: h0.invariant_factors });
    }
    let h1 = homology_z(c, 1);
    let big_d = BigInt::from(d);
    let mut free_qudits = h1.free_rank;
    let mut torsion_dims = Vec::new();
    for q in &h1.invariant_factors {
        let g = q.gcd(&big_d);
        if g == big_d {
            free_qudits += 1;
        } else if g > BigInt::one() {
            torsion_dims.push(g.to_u64().expect("gcd divides d, which fits in u64"));
        }
    }
    Ok(LogicalSpace { modulus: d, free_qudits, torsion_dims })
}

/// Result of the exhaustive Z_d homology computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDecomposition {
    pub order: u128,
    pub elementary_divisors: Vec<u64>,
}

/// Brute-force H_n over Z_d: enumerate every vector of Z_d^{rank C_n},
/// collect the kernel of the n-differential and the image of the (n+1)-
/// differential as explicit sets, and recover the quotient's structure from
/// the counts of elements killed by each prime power.
pub fn homology_mod_oracle(
    c: &ChainComplex,
    n: usize,
    d: u64,
    limit: u128,
) -> Result<OracleDecomposition, HomologyError> {
    if d < 2 {
        return Err(HomologyError::BadModulus { modulus: d });
    }
    assert!(n <= c.max_degree(), "degree {n} out of range");
    let rank_n = c.rank(n) as u32;
    let rank_up = c.rank(n + 1) as u32;
    for required in [(d as u128).pow(rank_n), (d as u128).pow(rank_up)] {
        if required > limit {
            return Err(HomologyError::TooLarge { required, limit });
        }
    }
    let d_n = c.diff_or_zero(n);
    let d_up = c.diff_or_zero(n + 1);
    let to_mod = |m: &IntMatrix| -> Vec<Vec<i128>> {
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c2| m.at(r, c2).to_i128().expect("small entries")).collect())
            .collect()
    };
    let dn = to_mod(&d_n);
    let dup = to_mod(&d_up);
    let apply = |m: &[Vec<i128>], rows: usize, v: &[u64]| -> Vec<u64> {
        (0..rows)
            .map(|r| {
                let acc: i128 = v.iter().enumerate().map(|(j, &x)| m[r][j] * x as i128).sum();
                acc.rem_euclid(d as i128) as u64
            })
            .collect()
    };

    let kernel: Vec<Vec<u64>> = enumerate_vectors(d, rank_n as usize)
        .into_iter()
        .filter(|v| apply(&dn, d_n.rows(), v).iter().all(|&x| x == 0))
        .collect();
    let image: HashSet<Vec<u64>> = enumerate_vectors(d, rank_up as usize)
        .into_iter()
        .map(|w| apply(&dup, d_up.rows(), &w))
        .collect();
    let order = (kernel.len() / image.len()) as u128;

    // Count kernel elements annihilated by each scalar; every coset of the
    // image contributes the same number, so class counts divide out evenly.
    let annihilated = |s: u64| -> u128 {
        kernel
            .iter()
            .filter(|v| {
                let scaled: Vec<u64> = v.iter().map(|&x| x * s % d).collect();
                image.contains(&scaled)
            })
            .count() as u128
            / image.len() as u128
    };
    let mut elementary_divisors = Vec::new();
    let mut remaining = order;
    let mut p = 2u64;
    while remaining > 1 {
        if remaining % p as u128 == 0 {
            // a_k = log_p of the number of classes of order dividing p^k.
            let mut prev_log = 0u32;
            let mut counts_at_level: Vec<u32> = Vec::new();
            let mut pk_mod = 1u64;
            loop {
                pk_mod = pk_mod * p % d;
                let count = annihilated(pk_mod);
                let log = log_exact(count, p);
                if log == prev_log {
                    break;
                }
                counts_at_level.push(log - prev_log);
                prev_log = log;
            }
            // counts_at_level[k-1] = number of cyclic p-power summands of
            // exponent >= k; turn that into the partition.
            for (k, window) in counts_at_level.windows(2).enumerate() {
                for _ in 0..(window[0] - window[1]) {
                    elementary_divisors.push(p.pow(k as u32 + 1));
                }
            }
            if let Some(&last) = counts_at_level.last() {
                for _ in 0..last {
                    elementary_divisors.push(p.pow(counts_at_level.len() as u32));
                }
            }
            while remaining % p as u128 == 0 {
                remaining /= p as u128;
            }
        }
        p += 1;
    }
    elementary_divisors.sort_unstable();
    Ok(OracleDecomposition { order, elementary_divisors })
}

fn enumerate_vectors(d: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; len]];
    for pos in 0..len {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for v in &out {
            for x in 0..d {
                let mut w = v.clone();
                w[pos] = x;
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn log_exact(mut n: u128, p: u64) -> u32 {
    let mut log = 0;
    while n > 1 {
        assert!(n % p as u128 == 0, "count {n} is not a power of {p}");
        n /= p as u128;
        log += 1;
    }
    log
}

fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut parts = Vec::new();
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            parts.push(pk);
        }
        p += 1;
    }
    parts
}
