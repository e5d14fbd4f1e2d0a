//! Pauli strings in symplectic (X/Z bit vector) form and the two seed code
//! presentations.
//!
//! An n-qubit operator is stored as `(-1)^sign * prod_i X_i^{x_i} Z_i^{z_i}`.
//! Products of such operators stay in this set, so a single sign bit is
//! enough for group arithmetic; imaginary phases never need to be stored.
//! A position with both bits set prints as `Y` (the actual operator is XZ,
//! which matches Y up to a phase that supports and commutators ignore).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVector,
    z: BitVector,
    negative: bool,
}

impl PauliString {
    pub fn identity(len: usize) -> Self {
        PauliString {
            x: BitVector::zeros(len),
            z: BitVector::zeros(len),
            negative: false,
        }
    }

    pub fn new(x: BitVector, z: BitVector, negative: bool) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(PauliString { x, z, negative })
    }

    /// Operator with X on `x_at`, Z on `z_at` (Y where they meet), sign +1.
    pub fn from_supports(len: usize, x_at: &[usize], z_at: &[usize]) -> Self {
        PauliString {
            x: BitVector::from_indices(len, x_at),
            z: BitVector::from_indices(len, z_at),
            negative: false,
        }
    }

    /// Parses a string over I, X, Y, Z with an optional leading + or -.
    pub fn parse(s: &str) -> Result<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut x = BitVector::zeros(body.chars().count());
        let mut z = BitVector::zeros(x.len());
        for (i, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(i, true),
                'Y' => {
                    x.set(i, true);
                    z.set(i, true);
                }
                'Z' => z.set(i, true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "Pauli string may only contain I, X, Y, Z, found {c:?}"
                    )))
                }
            }
        }
        Ok(PauliString {
            x,
            z,
            negative: neg,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    /// +1 or -1.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero() && !self.negative
    }

    pub fn x_at(&self, i: usize) -> bool {
        self.x.get(i)
    }

    pub fn z_at(&self, i: usize) -> bool {
        self.z.get(i)
    }

    pub fn set_x(&mut self, i: usize, v: bool) {
        self.x.set(i, v);
    }

    pub fn set_z(&mut self, i: usize, v: bool) {
        self.z.set(i, v);
    }

    /// True if the operator acts trivially on position `i`.
    pub fn is_identity_at(&self, i: usize) -> bool {
        !self.x.get(i) && !self.z.get(i)
    }

    /// Bitwise OR of the X and Z vectors: bit i set iff the operator acts
    /// non-trivially on position i.
    pub fn support(&self) -> BitVector {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    /// Group product. Sign picks up (-1)^(z_p . x_q) from commuting Z past X.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        let negative = self.negative ^ other.negative ^ self.z.dot_parity(&other.x);
        Ok(PauliString { x, z, negative })
    }

    /// True iff the symplectic inner product x_p.z_q + z_p.x_q vanishes.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(!(self.x.dot_parity(&other.z) ^ self.z.dot_parity(&other.x)))
    }

    /// The symplectic row (x bits then z bits) used by rank computations.
    pub fn symplectic_row(&self) -> BitVector {
        let n = self.len();
        BitVector::from_fn(2 * n, |i| {
            if i < n {
                self.x.get(i)
            } else {
                self.z.get(i - n)
            }
        })
    }

    /// The operator restricted to `positions` (in the given order), sign +1.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        let mut p = PauliString::identity(positions.len());
        for (k, &i) in positions.iter().enumerate() {
            p.x.set(k, self.x.get(i));
            p.z.set(k, self.z.get(i));
        }
        p
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for i in 0..self.len() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Which seed code a tensor network is built from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum SeedKind {
    FiveQubit,
    Steane,
}

impl SeedKind {
    pub fn n_sides(self) -> usize {
        match self {
            SeedKind::FiveQubit => 5,
            SeedKind::Steane => 7,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "five_qubit" => Ok(SeedKind::FiveQubit),
            "steane" => Ok(SeedKind::Steane),
            _ => Err(Error::InvalidArgument(format!(
                "unknown seed {s:?} (expected steane or five_qubit)"
            ))),
        }
    }
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedKind::FiveQubit => write!(f, "five_qubit"),
            SeedKind::Steane => write!(f, "steane"),
        }
    }
}

/// One position in a seed tensor's cyclic leg ordering.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Leg {
    /// Physical qubit, 0-based.
    Physical(usize),
    /// The logical (bulk) leg.
    Logical,
}

/// A seed code: the stabilizer presentation of one tile's tensor.
///
/// `stabilizers` generate the state of the full rank-(n+1) tensor over the
/// legs in `leg_order`; `code_stabilizers` and the logicals are the plain
/// n-qubit code objects, indexed by physical qubit.
#[derive(Clone, Debug)]
pub struct SeedCode {
    pub kind: SeedKind,
    pub n_physical: usize,
    pub leg_order: Vec<Leg>,
    pub stabilizers: Vec<PauliString>,
    pub code_stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
}

impl SeedCode {
    /// Seven-qubit self-dual CSS seed. Leg order is cyclic with the logical
    /// leg between physical qubits 6 and 7 (1-based), which makes every
    /// input window used by the tiling contiguous.
    pub fn steane() -> Self {
        let n = 8;
        let x_rows: [&[usize]; 3] = [&[0, 1, 5, 7], &[1, 2, 3, 7], &[3, 4, 5, 7]];
        let mut stabilizers: Vec<PauliString> = x_rows
            .iter()
            .map(|r| PauliString::from_supports(n, r, &[]))
            .collect();
        stabilizers.extend(
            x_rows
                .iter()
                .map(|r| PauliString::from_supports(n, &[], r)),
        );
        let all: Vec<usize> = (0..n).collect();
        stabilizers.push(PauliString::from_supports(n, &all, &[]));
        stabilizers.push(PauliString::from_supports(n, &[], &all));

        let code_x: [&[usize]; 3] = [&[0, 1, 5, 6], &[1, 2, 3, 6], &[3, 4, 5, 6]];
        let mut code_stabilizers: Vec<PauliString> = code_x
            .iter()
            .map(|r| PauliString::from_supports(7, r, &[]))
            .collect();
        code_stabilizers.extend(
            code_x
                .iter()
                .map(|r| PauliString::from_supports(7, &[], r)),
        );
        let phys: Vec<usize> = (0..7).collect();
        SeedCode {
            kind: SeedKind::Steane,
            n_physical: 7,
            leg_order: vec![
                Leg::Physical(0),
                Leg::Physical(1),
                Leg::Physical(2),
                Leg::Physical(3),
                Leg::Physical(4),
                Leg::Physical(5),
                Leg::Logical,
                Leg::Physical(6),
            ],
            stabilizers,
            code_stabilizers,
            logical_x: PauliString::from_supports(7, &phys, &[]),
            logical_z: PauliString::from_supports(7, &[], &phys),
        }
    }

    /// Five-qubit perfect-tensor seed: cyclic shifts of XZZXI with all-X and
    /// all-Z logicals, logical leg last.
    pub fn five_qubit() -> Self {
        let gens: [(&[usize], &[usize]); 4] = [
            (&[0, 3], &[1, 2]),
            (&[1, 4], &[2, 3]),
            (&[0, 2], &[3, 4]),
            (&[1, 3], &[0, 4]),
        ];
        let code_stabilizers: Vec<PauliString> = gens
            .iter()
            .map(|(x, z)| PauliString::from_supports(5, x, z))
            .collect();
        let mut stabilizers: Vec<PauliString> = gens
            .iter()
            .map(|(x, z)| PauliString::from_supports(6, x, z))
            .collect();
        let all: Vec<usize> = (0..6).collect();
        stabilizers.push(PauliString::from_supports(6, &all, &[]));
        stabilizers.push(PauliString::from_supports(6, &[], &all));
        let phys: Vec<usize> = (0..5).collect();
        SeedCode {
            kind: SeedKind::FiveQubit,
            n_physical: 5,
            leg_order: vec![
                Leg::Physical(0),
                Leg::Physical(1),
                Leg::Physical(2),
                Leg::Physical(3),
                Leg::Physical(4),
                Leg::Logical,
            ],
            stabilizers,
            code_stabilizers,
            logical_x: PauliString::from_supports(5, &phys, &[]),
            logical_z: PauliString::from_supports(5, &[], &phys),
        }
    }

    pub fn of(kind: SeedKind) -> Self {
        match kind {
            SeedKind::FiveQubit => Self::five_qubit(),
            SeedKind::Steane => Self::steane(),
        }
    }

    pub fn n_legs(&self) -> usize {
        self.leg_order.len()
    }

    /// Position of the logical leg in the cyclic order.
    pub fn logical_position(&self) -> usize {
        self.leg_order
            .iter()
            .position(|l| matches!(l, Leg::Logical))
            .expect("seed has a logical leg")
    }

    /// Leg positions of the physical qubits, in cyclic order.
    pub fn physical_positions(&self) -> Vec<usize> {
        self.leg_order
            .iter()
            .enumerate()
            .filter_map(|(i, l)| matches!(l, Leg::Physical(_)).then_some(i))
            .collect()
    }

    /// Physical qubit index at a leg position, if that leg is physical.
    pub fn physical_at(&self, position: usize) -> Option<usize> {
        match self.leg_order[position] {
            Leg::Physical(q) => Some(q),
            Leg::Logical => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn symplectic_rank(ops: &[PauliString]) -> usize {
        BitMatrix::from_rows(ops.iter().map(|p| p.symplectic_row()).collect())
            .unwrap()
            .rank()
    }

    #[test]
    fn steane_table_rows() {
        let seed = SeedCode::steane();
        assert_eq!(seed.stabilizers[0].to_string(), "XXIIIXIX");
        assert_eq!(seed.stabilizers[1].to_string(), "IXXXIIIX");
        assert_eq!(seed.stabilizers[2].to_string(), "IIIXXXIX");
        assert_eq!(seed.stabilizers[3].to_string(), "ZZIIIZIZ");
        assert_eq!(seed.stabilizers[4].to_string(), "IZZZIIIZ");
        assert_eq!(seed.stabilizers[5].to_string(), "IIIZZZIZ");
        assert_eq!(seed.stabilizers[6].to_string(), "XXXXXXXX");
        assert_eq!(seed.stabilizers[7].to_string(), "ZZZZZZZZ");
    }

    #[test]
    fn steane_product_rows() {
        let seed = SeedCode::steane();
        let s1s3 = seed.stabilizers[0].multiply(&seed.stabilizers[2]).unwrap();
        assert_eq!(s1s3.to_string(), "XXIXXIII");
        let s4s5 = seed.stabilizers[3].multiply(&seed.stabilizers[4]).unwrap();
        assert_eq!(s4s5.to_string(), "ZIZZIZII");
        let s1s2 = seed.stabilizers[0].multiply(&seed.stabilizers[1]).unwrap();
        assert_eq!(s1s2.to_string(), "XIXXIXII");
    }

    #[test]
    fn multiply_identity_and_self() {
        let p = PauliString::parse("XYZI").unwrap();
        let id = PauliString::identity(4);
        assert_eq!(p.multiply(&id).unwrap(), p);
        // X-type squares to +identity.
        let x = PauliString::parse("XXIX").unwrap();
        assert!(x.multiply(&x).unwrap().is_identity());
    }

    #[test]
    fn multiply_length_mismatch() {
        let p = PauliString::identity(3);
        let q = PauliString::identity(4);
        assert!(matches!(
            p.multiply(&q),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_qubit_anticommutation() {
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        assert!(!x.commutes(&z).unwrap());
        assert!(x.commutes(&x).unwrap());
        // XZ = -ZX as signed symplectic products.
        let xz = x.multiply(&z).unwrap();
        let mut zx = z.multiply(&x).unwrap();
        zx.negate();
        assert_eq!(xz, zx);
    }

    #[test]
    fn steane_tensor_stabilizers_commute_and_are_independent() {
        let seed = SeedCode::steane();
        for a in &seed.stabilizers {
            for b in &seed.stabilizers {
                assert!(a.commutes(b).unwrap());
            }
        }
        assert_eq!(symplectic_rank(&seed.stabilizers), 8);
    }

    #[test]
    fn five_qubit_tensor_stabilizers_commute_and_are_independent() {
        let seed = SeedCode::five_qubit();
        for a in &seed.stabilizers {
            for b in &seed.stabilizers {
                assert!(a.commutes(b).unwrap());
            }
        }
        assert_eq!(symplectic_rank(&seed.stabilizers), 6);
    }

    #[test]
    fn code_level_invariants() {
        for seed in [SeedCode::steane(), SeedCode::five_qubit()] {
            assert_eq!(seed.code_stabilizers.len(), seed.n_physical - 1);
            for a in &seed.code_stabilizers {
                for b in &seed.code_stabilizers {
                    assert!(a.commutes(b).unwrap());
                }
                assert!(seed.logical_x.commutes(a).unwrap());
                assert!(seed.logical_z.commutes(a).unwrap());
            }
            assert!(!seed.logical_x.commutes(&seed.logical_z).unwrap());
            let mut all = seed.code_stabilizers.clone();
            all.push(seed.logical_x.clone());
            all.push(seed.logical_z.clone());
            assert_eq!(symplectic_rank(&all), seed.n_physical + 1);
        }
    }

    #[test]
    fn support_examples() {
        let seed = SeedCode::steane();
        let s1 = &seed.stabilizers[0];
        assert_eq!(s1.support().to_string(), "11000101");
        assert!(PauliString::identity(8).support().is_zero());
        assert_eq!(seed.stabilizers[6].support().count_ones(), 8);
    }

    #[test]
    fn display_parse_roundtrip() {
        for s in ["XYZI", "-ZZXI", "IIII", "YY"] {
            let p = PauliString::parse(s).unwrap();
            let printed = p.to_string();
            let back = PauliString::parse(&printed).unwrap();
            assert_eq!(p, back);
        }
        assert!(PauliString::parse("XQ").is_err());
    }

    #[test]
    fn leg_order_positions() {
        let steane = SeedCode::steane();
        assert_eq!(steane.logical_position(), 6);
        assert_eq!(steane.physical_positions(), vec![0, 1, 2, 3, 4, 5, 7]);
        assert_eq!(steane.physical_at(7), Some(6));
        assert_eq!(steane.physical_at(6), None);
        let five = SeedCode::five_qubit();
        assert_eq!(five.logical_position(), 5);
        assert_eq!(five.physical_positions(), vec![0, 1, 2, 3, 4]);
    }

    proptest! {
        #[test]
        fn multiply_is_associative(seed in any::<u64>(), len in 1usize..24) {
            let mut rng = StdRng::seed_from_u64(seed);
            let random = |rng: &mut StdRng| {
                let x = crate::gf2::BitVector::from_fn(len, |_| rng.gen_bool(0.5));
                let z = crate::gf2::BitVector::from_fn(len, |_| rng.gen_bool(0.5));
                PauliString::new(x, z, rng.gen_bool(0.5)).unwrap()
            };
            let p = random(&mut rng);
            let q = random(&mut rng);
            let r = random(&mut rng);
            let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
            let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
