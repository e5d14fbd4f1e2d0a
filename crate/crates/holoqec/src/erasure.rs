//! Erasure recoverability deciders.
//!
//! Loss is heralded: a pattern marks which boundary qubits are gone. A bulk
//! logical qubit survives when both of its logical operators admit
//! representatives (logical times stabilizers) with no support on the erased
//! set. The optimal decider answers that by row reduction of the filtered
//! linear system; the greedy decider grows a recovered bulk region from the
//! intact boundary by local isometry rules; the brute-force oracle simply
//! walks the whole stabilizer group.

use crate::code::{slot_positions, HolographicCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{PauliString, SeedCode};
use crate::tiling::{Slot, Tiling};

/// Heralded erasure: bit i set means boundary qubit i is lost.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ErasurePattern {
    mask: BitVector,
}

impl ErasurePattern {
    pub fn new(mask: BitVector) -> Self {
        ErasurePattern { mask }
    }

    pub fn none(n: usize) -> Self {
        ErasurePattern {
            mask: BitVector::zeros(n),
        }
    }

    pub fn from_indices(n: usize, erased: &[usize]) -> Self {
        ErasurePattern {
            mask: BitVector::from_indices(n, erased),
        }
    }

    /// Parses a 0/1 string, 1 meaning erased.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(ErasurePattern {
            mask: BitVector::parse(s)?,
        })
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.len() == 0
    }

    /// Number of erased qubits.
    pub fn weight(&self) -> usize {
        self.mask.count_ones()
    }

    pub fn is_erased(&self, qubit: usize) -> bool {
        self.mask.get(qubit)
    }

    pub fn mask(&self) -> &BitVector {
        &self.mask
    }

    pub fn erased_indices(&self) -> Vec<usize> {
        self.mask.ones().collect()
    }
}

/// Restriction of a support vector to the erased positions, in increasing
/// position order.
pub fn filter(v: &BitVector, pattern: &ErasurePattern) -> Result<BitVector> {
    if v.len() != pattern.len() {
        return Err(Error::DimensionMismatch {
            expected: pattern.len(),
            found: v.len(),
        });
    }
    let erased = pattern.erased_indices();
    Ok(BitVector::from_fn(erased.len(), |i| v.get(erased[i])))
}

/// Which logical operators must clear the erasure for the qubit to count as
/// recovered.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum LogicalCriterion {
    /// Both the X and Z logical must have erasure-avoiding representatives.
    #[default]
    Both,
    XOnly,
    ZOnly,
}

impl LogicalCriterion {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(LogicalCriterion::Both),
            "x" => Ok(LogicalCriterion::XOnly),
            "z" => Ok(LogicalCriterion::ZOnly),
            _ => Err(Error::InvalidArgument(format!(
                "unknown criterion {s:?} (expected both, x or z)"
            ))),
        }
    }
}

/// Verdict of the optimal decider, with optional witnesses: generator
/// subsets whose product moves each logical off the erased set.
#[derive(Clone, Debug)]
pub struct OptimalVerdict {
    pub recoverable: bool,
    pub witness_x: Option<BitVector>,
    pub witness_z: Option<BitVector>,
}

/// Row-reduction decider. Precomputes transposed generator supports so each
/// query only assembles an (erasures x generators) system.
pub struct OptimalDecoder<'a> {
    code: &'a HolographicCode,
    /// Row q holds the X bits of every generator at qubit q.
    x_cols: BitMatrix,
    /// Row q holds the Z bits of every generator at qubit q.
    z_cols: BitMatrix,
    css: bool,
    ops: std::cell::Cell<u64>,
}

impl<'a> OptimalDecoder<'a> {
    pub fn new(code: &'a HolographicCode) -> Self {
        let r = code.generators.len();
        let x_cols = BitMatrix::from_fn(code.n, r, |q, j| code.generators[j].x_at(q));
        let z_cols = BitMatrix::from_fn(code.n, r, |q, j| code.generators[j].z_at(q));
        OptimalDecoder {
            code,
            x_cols,
            z_cols,
            css: code.is_css(),
            ops: std::cell::Cell::new(0),
        }
    }

    /// Word-XOR operations performed by eliminations so far.
    pub fn elimination_ops(&self) -> u64 {
        self.ops.get()
    }

    pub fn decide(
        &self,
        pattern: &ErasurePattern,
        tile: usize,
        criterion: LogicalCriterion,
    ) -> Result<OptimalVerdict> {
        if pattern.len() != self.code.n {
            return Err(Error::DimensionMismatch {
                expected: self.code.n,
                found: pattern.len(),
            });
        }
        if tile >= self.code.k {
            return Err(Error::InvalidArgument(format!(
                "tile {tile} out of range for k={}",
                self.code.k
            )));
        }
        let erased = pattern.erased_indices();
        let (lx, lz) = &self.code.logicals[tile];
        let witness_x = match criterion {
            LogicalCriterion::ZOnly => Some(BitVector::zeros(self.code.generators.len())),
            _ => self.clear_one(&erased, lx)?,
        };
        let witness_z = match criterion {
            LogicalCriterion::XOnly => Some(BitVector::zeros(self.code.generators.len())),
            _ => self.clear_one(&erased, lz)?,
        };
        let recoverable = match criterion {
            LogicalCriterion::Both => witness_x.is_some() && witness_z.is_some(),
            LogicalCriterion::XOnly => witness_x.is_some(),
            LogicalCriterion::ZOnly => witness_z.is_some(),
        };
        Ok(OptimalVerdict {
            recoverable,
            witness_x,
            witness_z,
        })
    }

    /// Finds lambda with (logical + sum_j lambda_j gen_j) supported only on
    /// intact qubits: one X-bit and one Z-bit equation per erased qubit.
    /// For CSS codes and a pure-type logical the trivially satisfied half
    /// drops out, leaving the (erasures x same-type generators) system.
    fn clear_one(&self, erased: &[usize], logical: &PauliString) -> Result<Option<BitVector>> {
        let r = self.code.generators.len();
        let mut rows: Vec<BitVector> = Vec::with_capacity(2 * erased.len());
        let mut rhs = Vec::with_capacity(2 * erased.len());
        let skip_z = self.css && logical.is_x_type();
        let skip_x = self.css && logical.is_z_type();
        for &q in erased {
            if !skip_x {
                rows.push(self.x_cols.row(q).clone());
                rhs.push(logical.x_at(q));
            }
            if !skip_z {
                rows.push(self.z_cols.row(q).clone());
                rhs.push(logical.z_at(q));
            }
        }
        let system = BitMatrix::from_rows(rows).expect("equal widths");
        let b = BitVector::from_fn(rhs.len(), |i| rhs[i]);
        let (solution, ops) = if system.rows() == 0 {
            (Some(BitVector::zeros(r)), 0)
        } else {
            system.solve_counting(&b)?
        };
        self.ops.set(self.ops.get() + ops);
        Ok(solution)
    }
}

/// One-shot convenience wrapper around [`OptimalDecoder`].
pub fn is_recoverable_optimal(
    code: &HolographicCode,
    pattern: &ErasurePattern,
    tile: usize,
    criterion: LogicalCriterion,
) -> Result<bool> {
    Ok(OptimalDecoder::new(code)
        .decide(pattern, tile, criterion)?
        .recoverable)
}

/// Greedy geometric decider: grows the recovered region from unerased
/// boundary qubits. A tile joins the region when its unknown legs (its
/// logical leg plus every leg that is neither an intact boundary leg nor
/// shared with a recovered tile) number at most half of all legs and, for a
/// merely block-perfect seed, form a contiguous arc of the seed's cyclic
/// leg order. Returns whether the queried tile is recovered.
pub fn is_recoverable_greedy(
    tiling: &Tiling,
    seed: &SeedCode,
    pattern: &ErasurePattern,
    tile: usize,
) -> Result<bool> {
    if pattern.len() != tiling.boundary.len() {
        return Err(Error::DimensionMismatch {
            expected: tiling.boundary.len(),
            found: pattern.len(),
        });
    }
    if tile >= tiling.tiles.len() {
        return Err(Error::InvalidArgument(format!(
            "tile {tile} out of range for {} tiles",
            tiling.tiles.len()
        )));
    }
    // Perfect seeds admit arbitrary bipartitions; block-perfect seeds only
    // contiguous ones. The five-qubit seed is perfect.
    let require_contiguous = matches!(seed.kind, crate::pauli::SeedKind::Steane);
    let n_legs = seed.n_legs();
    let logical_position = seed.logical_position();
    let maps = [
        slot_positions(seed, 0),
        slot_positions(seed, 1),
        slot_positions(seed, 2),
    ];

    let mut recovered = vec![false; tiling.tiles.len()];
    let mut changed = true;
    while changed {
        changed = false;
        for t in &tiling.tiles {
            if recovered[t.id] {
                continue;
            }
            let mut unknown = vec![false; n_legs];
            unknown[logical_position] = true;
            for (slot, s) in t.slots.iter().enumerate() {
                let known = match s {
                    Slot::Boundary(q) => !pattern.is_erased(*q),
                    Slot::Interior(p) => recovered[p.tile],
                };
                if !known {
                    unknown[maps[t.inputs][slot]] = true;
                }
            }
            let count = unknown.iter().filter(|&&u| u).count();
            if 2 * count > n_legs {
                continue;
            }
            if require_contiguous && !cyclically_contiguous(&unknown) {
                continue;
            }
            recovered[t.id] = true;
            changed = true;
        }
    }
    Ok(recovered[tile])
}

/// True when the set bits form one contiguous arc of the cycle.
fn cyclically_contiguous(bits: &[bool]) -> bool {
    let n = bits.len();
    let transitions = (0..n).filter(|&i| bits[i] != bits[(i + 1) % n]).count();
    transitions <= 2
}

/// Capacity bound for the brute-force oracle.
pub const BRUTE_FORCE_MAX_GENERATORS: usize = 20;

/// Walks all 2^(n-k) stabilizer multiples of each logical and reports
/// whether any avoids the erased set.
pub fn brute_force_recoverable(
    code: &HolographicCode,
    pattern: &ErasurePattern,
    tile: usize,
    criterion: LogicalCriterion,
) -> Result<bool> {
    let r = code.generators.len();
    if r > BRUTE_FORCE_MAX_GENERATORS {
        return Err(Error::Capacity(format!(
            "brute force enumerates 2^{r} products, limit is 2^{BRUTE_FORCE_MAX_GENERATORS}"
        )));
    }
    if pattern.len() != code.n {
        return Err(Error::DimensionMismatch {
            expected: code.n,
            found: pattern.len(),
        });
    }
    if tile >= code.k {
        return Err(Error::InvalidArgument(format!(
            "tile {tile} out of range for k={}",
            code.k
        )));
    }
    let (lx, lz) = &code.logicals[tile];
    let ok_x = matches!(criterion, LogicalCriterion::ZOnly)
        || brute_force_one(&code.generators, lx, pattern);
    let ok_z = matches!(criterion, LogicalCriterion::XOnly)
        || brute_force_one(&code.generators, lz, pattern);
    Ok(match criterion {
        LogicalCriterion::Both => ok_x && ok_z,
        LogicalCriterion::XOnly => ok_x,
        LogicalCriterion::ZOnly => ok_z,
    })
}

fn brute_force_one(
    generators: &[PauliString],
    logical: &PauliString,
    pattern: &ErasurePattern,
) -> bool {
    let r = generators.len();
    let mut element = logical.clone();
    if !element.support().intersects(pattern.mask()) {
        return true;
    }
    let mut gray_prev = 0usize;
    for i in 1usize..(1 << r) {
        let gray = i ^ (i >> 1);
        let flip = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        element = element.multiply(&generators[flip]).expect("equal lengths");
        if !element.support().intersects(pattern.mask()) {
            return true;
        }
    }
    false
}
