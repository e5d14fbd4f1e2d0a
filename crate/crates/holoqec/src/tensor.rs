//! Perfection and block-perfection checks for seed tensors.
//!
//! A stabilizer tensor is an isometry from legs A to the complementary legs
//! exactly when no nontrivial element of its stabilizer group is supported
//! entirely inside A. That reduces to a rank computation on the generator
//! matrix restricted to the complement. A dense contraction oracle
//! cross-checks the criterion on small tensors.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{PauliString, SeedCode};

/// An ordered subset A of leg indices; the complement is inferred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    a_legs: Vec<usize>,
}

impl Bipartition {
    /// Validates that the indices are distinct, in range, and that A is no
    /// larger than half the legs.
    pub fn new(a_legs: &[usize], n_legs: usize) -> Result<Self> {
        let mut sorted = a_legs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != a_legs.len() {
            return Err(Error::InvalidArgument(
                "bipartition indices must be distinct".into(),
            ));
        }
        if let Some(&max) = sorted.last() {
            if max >= n_legs {
                return Err(Error::InvalidArgument(format!(
                    "leg index {max} out of range for {n_legs} legs"
                )));
            }
        }
        if 2 * sorted.len() > n_legs {
            return Err(Error::InvalidArgument(format!(
                "input side has {} legs, more than half of {n_legs}",
                sorted.len()
            )));
        }
        Ok(Bipartition { a_legs: sorted })
    }

    pub fn a_legs(&self) -> &[usize] {
        &self.a_legs
    }

    pub fn complement(&self, n_legs: usize) -> Vec<usize> {
        (0..n_legs).filter(|i| !self.a_legs.contains(i)).collect()
    }
}

/// Core criterion on an explicit generator list: true iff the generators
/// restricted to the complement of `a_legs` have full row rank, i.e. no
/// nontrivial group element lives inside `a_legs`. Generators must be
/// independent.
fn isometry_by_rank(stabilizers: &[PauliString], n_legs: usize, a_legs: &[usize]) -> bool {
    let complement: Vec<usize> = (0..n_legs).filter(|i| !a_legs.contains(i)).collect();
    let rows: Vec<BitVector> = stabilizers
        .iter()
        .map(|s| {
            BitVector::from_fn(2 * complement.len(), |i| {
                let leg = complement[i / 2];
                if i % 2 == 0 {
                    s.x_at(leg)
                } else {
                    s.z_at(leg)
                }
            })
        })
        .collect();
    let m = BitMatrix::from_rows(rows).expect("equal row lengths");
    m.rank() == stabilizers.len()
}

/// True iff the seed tensor is an isometry from `part` to its complement.
pub fn is_isometry_for(seed: &SeedCode, part: &Bipartition) -> Result<bool> {
    let n_legs = seed.n_legs();
    if let Some(&max) = part.a_legs().last() {
        if max >= n_legs {
            return Err(Error::InvalidArgument(format!(
                "leg index {max} out of range for {n_legs} legs"
            )));
        }
    }
    Ok(isometry_by_rank(&seed.stabilizers, n_legs, part.a_legs()))
}

/// True iff the tensor is an isometry for every subset A with
/// |A| <= floor(legs/2).
pub fn check_perfect(seed: &SeedCode) -> bool {
    let n_legs = seed.n_legs();
    assert!(n_legs <= 20, "exhaustive subset sweep limited to 20 legs");
    let half = n_legs / 2;
    for mask in 0u32..(1 << n_legs) {
        if (mask.count_ones() as usize) > half {
            continue;
        }
        let a: Vec<usize> = (0..n_legs).filter(|&i| mask >> i & 1 != 0).collect();
        if !isometry_by_rank(&seed.stabilizers, n_legs, &a) {
            return false;
        }
    }
    true
}

/// True iff the tensor is an isometry for every cyclically contiguous window
/// of the leg ordering with size up to floor(legs/2).
pub fn check_block_perfect(seed: &SeedCode) -> bool {
    let n_legs = seed.n_legs();
    for size in 1..=n_legs / 2 {
        for start in 0..n_legs {
            let a: Vec<usize> = (0..size).map(|i| (start + i) % n_legs).collect();
            if !isometry_by_rank(&seed.stabilizers, n_legs, &a) {
                return false;
            }
        }
    }
    true
}

/// Maximum tensor size the dense oracle will materialize.
pub const DENSE_ORACLE_MAX_LEGS: usize = 12;

const DENSE_TOLERANCE: f64 = 1e-9;

/// Builds the tensor amplitudes by projecting onto the joint +1 eigenspace
/// of the generators, reshapes along the bipartition, and tests whether the
/// Gram matrix is proportional to the identity.
pub fn dense_isometry_oracle(seed: &SeedCode, part: &Bipartition) -> Result<bool> {
    let n_legs = seed.n_legs();
    if n_legs > DENSE_ORACLE_MAX_LEGS {
        return Err(Error::Capacity(format!(
            "dense oracle supports at most {DENSE_ORACLE_MAX_LEGS} legs, got {n_legs}"
        )));
    }
    if let Some(&max) = part.a_legs().last() {
        if max >= n_legs {
            return Err(Error::InvalidArgument(format!(
                "leg index {max} out of range for {n_legs} legs"
            )));
        }
    }
    let amplitudes = dense_state(&seed.stabilizers, n_legs)
        .ok_or_else(|| Error::InvalidArgument("generators stabilize no state".into()))?;

    let a = part.a_legs();
    let a_bar = part.complement(n_legs);
    let dim_a = 1usize << a.len();
    let dim_b = 1usize << a_bar.len();

    // Gram[c1][c2] = sum_r M[r][c1] M[r][c2] with real amplitudes.
    let mut matrix = vec![vec![0.0f64; dim_a]; dim_b];
    for (v, &amp) in amplitudes.iter().enumerate() {
        let col = pack_bits(v, a);
        let row = pack_bits(v, &a_bar);
        matrix[row][col] = amp;
    }
    let mut gram = vec![vec![0.0f64; dim_a]; dim_a];
    for row in &matrix {
        for c1 in 0..dim_a {
            if row[c1] == 0.0 {
                continue;
            }
            for c2 in 0..dim_a {
                gram[c1][c2] += row[c1] * row[c2];
            }
        }
    }
    let trace: f64 = (0..dim_a).map(|i| gram[i][i]).sum();
    let scale = trace / dim_a as f64;
    if scale <= DENSE_TOLERANCE {
        return Ok(false);
    }
    let mut max_dev = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            let expect = if i == j { scale } else { 0.0 };
            max_dev = max_dev.max((g - expect).abs());
        }
    }
    Ok(max_dev <= DENSE_TOLERANCE * scale.max(1.0))
}

fn pack_bits(v: usize, legs: &[usize]) -> usize {
    legs.iter()
        .enumerate()
        .fold(0, |acc, (k, &leg)| acc | ((v >> leg & 1) << k))
}

/// Unit-norm amplitudes of the stabilizer state, or None when the product of
/// projectors annihilates every computational basis vector tried.
fn dense_state(stabilizers: &[PauliString], n_legs: usize) -> Option<Vec<f64>> {
    let dim = 1usize << n_legs;
    for start in 0..dim {
        let mut amps = vec![0.0f64; dim];
        // Sum g|start> over the full group, enumerated in Gray-code order so
        // each step multiplies by a single generator.
        let mut element = PauliString::identity(n_legs);
        accumulate(&mut amps, &element, start, n_legs);
        let count = 1usize << stabilizers.len();
        let mut gray_prev = 0usize;
        for i in 1..count {
            let gray = i ^ (i >> 1);
            let flip = (gray ^ gray_prev).trailing_zeros() as usize;
            gray_prev = gray;
            element = element.multiply(&stabilizers[flip]).expect("equal lengths");
            accumulate(&mut amps, &element, start, n_legs);
        }
        let norm2: f64 = amps.iter().map(|a| a * a).sum();
        if norm2 > 1e-12 {
            let norm = norm2.sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            return Some(amps);
        }
    }
    None
}

/// amps[v ^ x_g] += sign_g * (-1)^(z_g . v)
fn accumulate(amps: &mut [f64], g: &PauliString, v: usize, n_legs: usize) {
    let mut target = v;
    let mut phase = g.sign() as f64;
    for leg in 0..n_legs {
        if g.z_at(leg) && v >> leg & 1 != 0 {
            phase = -phase;
        }
        if g.x_at(leg) {
            target ^= 1 << leg;
        }
    }
    amps[target] += phase;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Leg, SeedKind};

    /// A single EPR pair presented as a 2-leg seed (identity encoding).
    fn bell_seed() -> SeedCode {
        SeedCode {
            kind: SeedKind::FiveQubit,
            n_physical: 1,
            leg_order: vec![Leg::Physical(0), Leg::Logical],
            stabilizers: vec![
                PauliString::parse("XX").unwrap(),
                PauliString::parse("ZZ").unwrap(),
            ],
            code_stabilizers: vec![],
            logical_x: PauliString::parse("X").unwrap(),
            logical_z: PauliString::parse("Z").unwrap(),
        }
    }

    /// A fully product tensor: every leg pinned by a single-qubit Z.
    fn product_seed(n: usize) -> SeedCode {
        SeedCode {
            kind: SeedKind::FiveQubit,
            n_physical: n - 1,
            leg_order: (0..n)
                .map(|i| {
                    if i + 1 == n {
                        Leg::Logical
                    } else {
                        Leg::Physical(i)
                    }
                })
                .collect(),
            stabilizers: (0..n)
                .map(|i| PauliString::from_supports(n, &[], &[i]))
                .collect(),
            code_stabilizers: vec![],
            logical_x: PauliString::identity(n - 1),
            logical_z: PauliString::identity(n - 1),
        }
    }

    /// Steane presentation with legs 2 and 4 swapped in the cyclic order,
    /// realized by permuting the corresponding stabilizer columns.
    fn scrambled_steane() -> SeedCode {
        let mut seed = SeedCode::steane();
        let remap = |p: &PauliString| {
            let mut q = p.clone();
            let (x1, z1) = (p.x_at(1), p.z_at(1));
            let (x3, z3) = (p.x_at(3), p.z_at(3));
            q.set_x(1, x3);
            q.set_z(1, z3);
            q.set_x(3, x1);
            q.set_z(3, z1);
            q
        };
        seed.stabilizers = seed.stabilizers.iter().map(remap).collect();
        seed
    }

    #[test]
    fn steane_witness_partition_fails() {
        let seed = SeedCode::steane();
        // Legs {3,4,5,L} in table order are positions {2,3,4,6}.
        let part = Bipartition::new(&[2, 3, 4, 6], 8).unwrap();
        assert!(!is_isometry_for(&seed, &part).unwrap());
    }

    #[test]
    fn empty_partition_is_isometry() {
        for seed in [SeedCode::steane(), SeedCode::five_qubit()] {
            let part = Bipartition::new(&[], seed.n_legs()).unwrap();
            assert!(is_isometry_for(&seed, &part).unwrap());
        }
    }

    #[test]
    fn steane_contiguous_windows_pass() {
        let seed = SeedCode::steane();
        for size in 1..=4 {
            for start in 0..8 {
                let a: Vec<usize> = (0..size).map(|i| (start + i) % 8).collect();
                let part = Bipartition::new(&a, 8).unwrap();
                assert!(
                    is_isometry_for(&seed, &part).unwrap(),
                    "window start {start} size {size}"
                );
            }
        }
    }

    #[test]
    fn seed_classifications() {
        assert!(check_block_perfect(&SeedCode::steane()));
        assert!(!check_perfect(&SeedCode::steane()));
        assert!(check_perfect(&SeedCode::five_qubit()));
        assert!(check_block_perfect(&SeedCode::five_qubit()));
        assert!(check_perfect(&bell_seed()));
    }

    #[test]
    fn scrambled_ordering_breaks_block_perfection() {
        let seed = scrambled_steane();
        assert!(!check_block_perfect(&seed));
        // Every window agrees with the dense oracle.
        let n = seed.n_legs();
        for size in 1..=n / 2 {
            for start in 0..n {
                let a: Vec<usize> = (0..size).map(|i| (start + i) % n).collect();
                let part = Bipartition::new(&a, n).unwrap();
                assert_eq!(
                    is_isometry_for(&seed, &part).unwrap(),
                    dense_isometry_oracle(&seed, &part).unwrap(),
                    "window start {start} size {size}"
                );
            }
        }
    }

    #[test]
    fn dense_oracle_agrees_on_all_bipartitions() {
        for seed in [SeedCode::steane(), SeedCode::five_qubit()] {
            let n = seed.n_legs();
            for mask in 0u32..(1 << n) {
                if (mask.count_ones() as usize) > n / 2 {
                    continue;
                }
                let a: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 != 0).collect();
                let part = Bipartition::new(&a, n).unwrap();
                assert_eq!(
                    is_isometry_for(&seed, &part).unwrap(),
                    dense_isometry_oracle(&seed, &part).unwrap(),
                    "seed {:?} mask {mask:#b}",
                    seed.kind
                );
            }
        }
    }

    #[test]
    fn product_state_is_never_entangling() {
        let seed = product_seed(4);
        let part = Bipartition::new(&[0, 1], 4).unwrap();
        assert!(!dense_isometry_oracle(&seed, &part).unwrap());
        assert!(!is_isometry_for(&seed, &part).unwrap());
    }

    #[test]
    fn square_case_symmetry() {
        let seed = SeedCode::steane();
        let n = seed.n_legs();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != n / 2 {
                continue;
            }
            let a: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 != 0).collect();
            let b: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
            let pa = Bipartition::new(&a, n).unwrap();
            let pb = Bipartition::new(&b, n).unwrap();
            assert_eq!(
                is_isometry_for(&seed, &pa).unwrap(),
                is_isometry_for(&seed, &pb).unwrap()
            );
        }
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(&[0, 0], 8).is_err());
        assert!(Bipartition::new(&[9], 8).is_err());
        assert!(Bipartition::new(&[0, 1, 2, 3, 4], 8).is_err());
        assert!(Bipartition::new(&[7, 3], 8).is_ok());
    }

    #[test]
    fn dense_oracle_capacity() {
        let seed = product_seed(13);
        let part = Bipartition::new(&[0], 13).unwrap();
        assert!(matches!(
            dense_isometry_oracle(&seed, &part),
            Err(Error::Capacity(_))
        ));
    }
}
