//! Holographic code synthesis: pushing operators through seed tensors and
//! assembling boundary stabilizer generators plus per-tile logicals.
//!
//! Each tile maps its slots onto seed legs so that the logical leg together
//! with the input legs forms a contiguous window of the seed's cyclic
//! ordering. Local stabilizers (identity on the window) become boundary
//! generators after being pushed outward layer by layer; logical operators
//! start as window extensions of X or Z on the logical leg.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::{PauliString, SeedCode, SeedKind};
use crate::tiling::{build_tiling, LegRef, Slot, Tiling};

/// Boundary presentation of a holographic code.
#[derive(Clone, Debug)]
pub struct HolographicCode {
    pub n: usize,
    pub k: usize,
    pub seed_kind: SeedKind,
    pub radius: usize,
    pub generators: Vec<PauliString>,
    /// Originating tile of each generator. Empty for imported codes, whose
    /// files do not carry provenance.
    pub generator_tiles: Vec<usize>,
    /// Pushed (X, Z) pair for every bulk tile, indexed by tile id.
    pub logicals: Vec<(PauliString, PauliString)>,
}

impl HolographicCode {
    pub fn n_sides(&self) -> usize {
        self.seed_kind.n_sides()
    }

    /// True when every generator is purely X-type or purely Z-type.
    pub fn is_css(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g.is_x_type() || g.is_z_type())
    }

    /// Exact ratio k/n.
    pub fn code_rate(&self) -> (usize, usize) {
        (self.k, self.n)
    }
}

/// k/n in the limit of infinite radius.
pub fn asymptotic_rate(n_sides: usize) -> Result<f64> {
    match n_sides {
        5 => Ok(1.0 / 5.0f64.sqrt()),
        7 => Ok(1.0 / 21.0f64.sqrt()),
        _ => Err(Error::InvalidArgument(format!(
            "no asymptotic rate for {n_sides}-gon tilings"
        ))),
    }
}

/// Seed-leg positions for the slots of a tile with the given input count.
///
/// Slot s maps to the physical leg at planar position (start + s) mod n,
/// where start points at the physical leg immediately preceding the logical
/// leg. Input slots therefore sit next to the logical leg, and the window
/// inputs + logical is contiguous in the seed's cyclic order. The central
/// tile (no inputs) maps slot s to the s-th physical leg directly.
pub fn slot_positions(seed: &SeedCode, inputs: usize) -> Vec<usize> {
    let planar = seed.physical_positions();
    let n = planar.len();
    if inputs == 0 {
        return planar;
    }
    let logical = seed.logical_position();
    let n_legs = seed.n_legs();
    let before = (logical + n_legs - 1) % n_legs;
    let start = planar
        .iter()
        .position(|&p| p == before)
        .expect("leg before the logical leg is physical");
    (0..n).map(|s| planar[(start + s) % n]).collect()
}

/// Pushes operators across one seed tensor for tiles with a fixed input
/// count. The window is the input legs plus the logical leg.
pub struct TilePusher {
    n_legs: usize,
    window: Vec<usize>,
    output_positions: Vec<usize>,
    stabilizers: Vec<PauliString>,
    /// Window-restricted symplectic rows of the generators.
    window_matrix: BitMatrix,
    /// Group elements with identity on the whole window, echelon basis.
    kernel: Vec<PauliString>,
}

impl TilePusher {
    pub fn new(seed: &SeedCode, inputs: usize) -> Self {
        let n_legs = seed.n_legs();
        let positions = slot_positions(seed, inputs);
        let mut window: Vec<usize> = positions[..inputs].to_vec();
        window.push(seed.logical_position());
        let output_positions = positions[inputs..].to_vec();
        let window_matrix = restricted_matrix(&seed.stabilizers, &window);
        let kernel = window_matrix
            .kernel_basis()
            .into_iter()
            .map(|lambda| combine(&seed.stabilizers, &lambda))
            .collect();
        TilePusher {
            n_legs,
            window,
            output_positions,
            stabilizers: seed.stabilizers.clone(),
            window_matrix,
            kernel,
        }
    }

    pub fn window(&self) -> &[usize] {
        &self.window
    }

    pub fn output_positions(&self) -> &[usize] {
        &self.output_positions
    }

    /// Local stabilizers of the tile: group elements acting as identity on
    /// the inputs and the logical leg.
    pub fn local_stabilizers(&self) -> &[PauliString] {
        &self.kernel
    }

    /// Extends `op` (supported on the window) to a full group element whose
    /// output support is canonical: lexicographically smallest support in
    /// slot order, ties broken toward Z.
    pub fn push_extension(&self, op: &PauliString) -> Result<PauliString> {
        if op.len() != self.n_legs {
            return Err(Error::DimensionMismatch {
                expected: self.n_legs,
                found: op.len(),
            });
        }
        for leg in 0..self.n_legs {
            if !self.window.contains(&leg) && !op.is_identity_at(leg) {
                return Err(Error::InvalidArgument(format!(
                    "operator acts outside the input window at leg {leg}"
                )));
            }
        }
        let target = BitVector::from_fn(2 * self.window.len(), |i| {
            let leg = self.window[i / 2];
            if i % 2 == 0 {
                op.x_at(leg)
            } else {
                op.z_at(leg)
            }
        });
        let lambda = self
            .window_matrix
            .solve_combination(&target)?
            .ok_or_else(|| {
                Error::InvalidArgument("operator has no stabilizer extension".into())
            })?;
        let particular = combine(&self.stabilizers, &lambda);
        Ok(self.canonicalize(particular))
    }

    /// Lexicographic minimization over the coset particular * <kernel>.
    fn canonicalize(&self, particular: PauliString) -> PauliString {
        let m = self.kernel.len();
        if m == 0 {
            return particular;
        }
        let mut solver = IncrementalSolver::new(m);
        // Pass 1: clear the support of the earliest possible output slots.
        for &pos in &self.output_positions {
            let cx = BitVector::from_fn(m, |j| self.kernel[j].x_at(pos));
            let cz = BitVector::from_fn(m, |j| self.kernel[j].z_at(pos));
            let snapshot = solver.clone();
            if solver.insert(cx.clone(), particular.x_at(pos))
                && solver.insert(cz.clone(), particular.z_at(pos))
            {
                continue;
            }
            solver = snapshot;
        }
        // Pass 2: pin every remaining bit toward zero (prefers Z over X).
        for &pos in &self.output_positions {
            let cx = BitVector::from_fn(m, |j| self.kernel[j].x_at(pos));
            solver.try_insert(cx, particular.x_at(pos));
            let cz = BitVector::from_fn(m, |j| self.kernel[j].z_at(pos));
            solver.try_insert(cz, particular.z_at(pos));
        }
        let mu = solver.solution();
        let mut result = particular;
        for j in mu.ones() {
            result = result.multiply(&self.kernel[j]).expect("equal lengths");
        }
        result
    }
}

fn restricted_matrix(stabilizers: &[PauliString], legs: &[usize]) -> BitMatrix {
    let rows: Vec<BitVector> = stabilizers
        .iter()
        .map(|s| {
            BitVector::from_fn(2 * legs.len(), |i| {
                let leg = legs[i / 2];
                if i % 2 == 0 {
                    s.x_at(leg)
                } else {
                    s.z_at(leg)
                }
            })
        })
        .collect();
    BitMatrix::from_rows(rows).expect("equal row lengths")
}

fn combine(stabilizers: &[PauliString], lambda: &BitVector) -> PauliString {
    let mut acc = PauliString::identity(stabilizers[0].len());
    for j in lambda.ones() {
        acc = acc.multiply(&stabilizers[j]).expect("equal lengths");
    }
    acc
}

/// Incremental GF(2) constraint system over a fixed number of unknowns kept
/// in fully reduced form.
#[derive(Clone)]
struct IncrementalSolver {
    vars: usize,
    rows: Vec<(BitVector, bool)>,
}

impl IncrementalSolver {
    fn new(vars: usize) -> Self {
        IncrementalSolver {
            vars,
            rows: Vec::new(),
        }
    }

    /// Adds `coeffs . mu = rhs` if consistent; returns whether it holds.
    fn insert(&mut self, mut coeffs: BitVector, mut rhs: bool) -> bool {
        for (row, r) in &self.rows {
            let pivot = row.ones().next().expect("stored rows are nonzero");
            if coeffs.get(pivot) {
                coeffs.xor_assign(row);
                rhs ^= r;
            }
        }
        let pivot = coeffs.ones().next();
        match pivot {
            None => !rhs,
            Some(pivot) => {
                for (row, r) in &mut self.rows {
                    if row.get(pivot) {
                        row.xor_assign(&coeffs);
                        *r ^= rhs;
                    }
                }
                self.rows.push((coeffs, rhs));
                true
            }
        }
    }

    fn try_insert(&mut self, coeffs: BitVector, rhs: bool) -> bool {
        let snapshot = self.clone();
        if self.insert(coeffs, rhs) {
            true
        } else {
            *self = snapshot;
            false
        }
    }

    /// Solution with free variables zero.
    fn solution(&self) -> BitVector {
        let mut mu = BitVector::zeros(self.vars);
        for (row, r) in &self.rows {
            if *r {
                let pivot = row.ones().next().expect("stored rows are nonzero");
                mu.set(pivot, true);
            }
        }
        mu
    }
}

/// Spec'd push entry point: extends an operator supported on the input
/// window (inputs plus logical leg) of a tile with `inputs` input slots to a
/// canonical full group element.
pub fn push_operator(seed: &SeedCode, inputs: usize, op: &PauliString) -> Result<PauliString> {
    TilePusher::new(seed, inputs).push_extension(op)
}

struct Synthesizer<'a> {
    tiling: &'a Tiling,
    seed: &'a SeedCode,
    pushers: [TilePusher; 3],
    /// Slot-to-leg-position maps by input count.
    maps: [Vec<usize>; 3],
    n_qubits: usize,
}

/// Largest boundary the synthesizer will materialize generators for; the
/// stabilizer set takes O(n^2) bits.
pub const MAX_CODE_QUBITS: usize = 1 << 15;

impl<'a> Synthesizer<'a> {
    fn new(tiling: &'a Tiling, seed: &'a SeedCode) -> Result<Self> {
        if seed.n_physical != tiling.n_sides {
            return Err(Error::InvalidArgument(format!(
                "seed has {} physical legs but tiles have {} sides",
                seed.n_physical, tiling.n_sides
            )));
        }
        if tiling.boundary.len() > MAX_CODE_QUBITS {
            return Err(Error::Capacity(format!(
                "code on {} boundary qubits exceeds the {MAX_CODE_QUBITS} limit",
                tiling.boundary.len()
            )));
        }
        Ok(Synthesizer {
            tiling,
            seed,
            pushers: [
                TilePusher::new(seed, 0),
                TilePusher::new(seed, 1),
                TilePusher::new(seed, 2),
            ],
            maps: [
                slot_positions(seed, 0),
                slot_positions(seed, 1),
                slot_positions(seed, 2),
            ],
            n_qubits: tiling.boundary.len(),
        })
    }

    /// Pushes `element` (a group element of the origin tile's tensor, with
    /// identity on the origin's input legs) outward to the boundary.
    fn propagate(&self, origin: usize, element: &PauliString) -> PauliString {
        let mut out = PauliString::identity(self.n_qubits);
        let mut negative = element.is_negative();
        // Operators pending on the input legs of tiles further out.
        let mut pending: Vec<Option<PauliString>> = vec![None; self.tiling.tiles.len()];
        self.scatter(origin, element, &mut pending, &mut out);
        for id in origin + 1..self.tiling.tiles.len() {
            let Some(op) = pending[id].take() else {
                continue;
            };
            if op.is_identity() {
                continue;
            }
            let pusher = &self.pushers[self.tiling.tiles[id].inputs];
            let extension = pusher.push_extension(&op).expect(
                "window operators always extend for a block-perfect seed with contiguous inputs",
            );
            // Multiplying the global operator by the extension cancels the
            // support on this tile's inputs; track the sign of that product.
            negative ^= extension.is_negative() ^ op.z_bits().dot_parity(extension.x_bits());
            self.scatter(id, &extension, &mut pending, &mut out);
        }
        if negative {
            out.negate();
        }
        out
    }

    /// Distributes the output-leg content of a tile's group element onto the
    /// pending inputs of neighbours and onto boundary qubits.
    fn scatter(
        &self,
        id: usize,
        element: &PauliString,
        pending: &mut [Option<PauliString>],
        out: &mut PauliString,
    ) {
        let tile = &self.tiling.tiles[id];
        let map = &self.maps[tile.inputs];
        for slot in tile.output_slots() {
            let pos = map[slot];
            let (x, z) = (element.x_at(pos), element.z_at(pos));
            if !x && !z {
                continue;
            }
            match tile.slots[slot] {
                Slot::Boundary(q) => {
                    out.set_x(q, x);
                    out.set_z(q, z);
                }
                Slot::Interior(LegRef {
                    tile: other,
                    slot: other_slot,
                }) => {
                    let target = pending[other]
                        .get_or_insert_with(|| PauliString::identity(self.seed.n_legs()));
                    let tpos = self.maps[self.tiling.tiles[other].inputs][other_slot];
                    target.set_x(tpos, x);
                    target.set_z(tpos, z);
                }
            }
        }
    }

    /// Embeds an n-qubit code operator onto the seed's legs.
    fn embed_code_operator(&self, op: &PauliString) -> PauliString {
        let mut full = PauliString::identity(self.seed.n_legs());
        for (q, &pos) in self.seed.physical_positions().iter().enumerate() {
            full.set_x(pos, op.x_at(q));
            full.set_z(pos, op.z_at(q));
        }
        if op.is_negative() {
            full.negate();
        }
        full
    }
}

/// Boundary stabilizer generators for the holographic code on `tiling`.
///
/// The central tile contributes its code stabilizers verbatim; every other
/// tile contributes the local basis of tensor-group elements that act as
/// identity on its inputs and logical leg. Each local element is then pushed
/// to the boundary. Returns the generators with their originating tiles.
pub fn boundary_stabilizers(
    tiling: &Tiling,
    seed: &SeedCode,
) -> Result<(Vec<PauliString>, Vec<usize>)> {
    let synth = Synthesizer::new(tiling, seed)?;
    let mut generators = Vec::new();
    let mut tiles = Vec::new();
    for tile in &tiling.tiles {
        let locals: Vec<PauliString> = if tile.inputs == 0 {
            seed.code_stabilizers
                .iter()
                .map(|s| synth.embed_code_operator(s))
                .collect()
        } else {
            synth.pushers[tile.inputs].local_stabilizers().to_vec()
        };
        for element in locals {
            generators.push(synth.propagate(tile.id, &element));
            tiles.push(tile.id);
        }
    }
    Ok((generators, tiles))
}

/// Pushed logical pair for one bulk tile.
///
/// The central tile pushes the seed's own logical representatives; other
/// tiles use the canonical window extension of X (resp. Z) on the logical
/// leg with identity on the inputs.
pub fn logical_operators(
    tiling: &Tiling,
    seed: &SeedCode,
    tile: usize,
) -> Result<(PauliString, PauliString)> {
    let synth = Synthesizer::new(tiling, seed)?;
    logical_pair(&synth, tile)
}

fn logical_pair(synth: &Synthesizer, tile: usize) -> Result<(PauliString, PauliString)> {
    if tile >= synth.tiling.tiles.len() {
        return Err(Error::InvalidArgument(format!(
            "tile {tile} not in tiling of {} tiles",
            synth.tiling.tiles.len()
        )));
    }
    let inputs = synth.tiling.tiles[tile].inputs;
    let seed = synth.seed;
    let pair = if inputs == 0 {
        let lx = seed
            .stabilizers
            .iter()
            .find(|s| s.x_at(seed.logical_position()) && s.is_x_type())
            .expect("seed stores an X-type logical tensor stabilizer")
            .clone();
        let lz = seed
            .stabilizers
            .iter()
            .find(|s| s.z_at(seed.logical_position()) && s.is_z_type())
            .expect("seed stores a Z-type logical tensor stabilizer")
            .clone();
        (lx, lz)
    } else {
        let logical = seed.logical_position();
        let mut wx = PauliString::identity(seed.n_legs());
        wx.set_x(logical, true);
        let mut wz = PauliString::identity(seed.n_legs());
        wz.set_z(logical, true);
        let pusher = &synth.pushers[inputs];
        (pusher.push_extension(&wx)?, pusher.push_extension(&wz)?)
    };
    Ok((
        synth.propagate(tile, &pair.0),
        synth.propagate(tile, &pair.1),
    ))
}

/// Builds the full holographic code from a tiling and seed.
pub fn build_code(tiling: &Tiling, seed: &SeedCode) -> Result<HolographicCode> {
    let synth = Synthesizer::new(tiling, seed)?;
    let (generators, generator_tiles) = boundary_stabilizers(tiling, seed)?;
    let mut logicals = Vec::with_capacity(tiling.tiles.len());
    for tile in 0..tiling.tiles.len() {
        logicals.push(logical_pair(&synth, tile)?);
    }
    Ok(HolographicCode {
        n: tiling.boundary.len(),
        k: tiling.tiles.len(),
        seed_kind: seed.kind,
        radius: tiling.radius,
        generators,
        generator_tiles,
        logicals,
    })
}

/// A tiling, its seed and the synthesized code, built together.
#[derive(Clone, Debug)]
pub struct CodeBundle {
    pub seed: SeedCode,
    pub tiling: Tiling,
    pub code: HolographicCode,
}

impl CodeBundle {
    pub fn build(kind: SeedKind, radius: usize) -> Result<Self> {
        let seed = SeedCode::of(kind);
        let tiling = build_tiling(kind.n_sides(), radius)?;
        let code = build_code(&tiling, &seed)?;
        Ok(CodeBundle { seed, tiling, code })
    }
}

/// Writes the plain-text code format:
/// a header line `n=<n> k=<k> seed=<kind> R=<R>`, one `S <sign> <paulis>`
/// line per generator, and `LX|LZ <tile> <sign> <paulis>` lines per logical.
pub fn export_code<W: Write>(code: &HolographicCode, mut out: W) -> Result<()> {
    writeln!(
        out,
        "n={} k={} seed={} R={}",
        code.n, code.k, code.seed_kind, code.radius
    )?;
    for g in &code.generators {
        writeln!(out, "S {} {}", sign_char(g), unsigned(g))?;
    }
    for (tile, (lx, lz)) in code.logicals.iter().enumerate() {
        writeln!(out, "LX {tile} {} {}", sign_char(lx), unsigned(lx))?;
        writeln!(out, "LZ {tile} {} {}", sign_char(lz), unsigned(lz))?;
    }
    Ok(())
}

fn sign_char(p: &PauliString) -> char {
    if p.is_negative() {
        '-'
    } else {
        '+'
    }
}

fn unsigned(p: &PauliString) -> String {
    let mut s = p.to_string();
    if let Some(rest) = s.strip_prefix('-') {
        s = rest.to_string();
    }
    s
}

/// Reads the format written by [`export_code`].
pub fn import_code<R: BufRead>(reader: R) -> Result<HolographicCode> {
    let mut lines = reader.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty code file".into(),
        })?
        .1
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
    let mut n = None;
    let mut k = None;
    let mut seed_kind = None;
    let mut radius = None;
    for token in header.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("bad header token {token:?}"),
        })?;
        match key {
            "n" => n = value.parse().ok(),
            "k" => k = value.parse().ok(),
            "R" => radius = value.parse().ok(),
            "seed" => seed_kind = SeedKind::parse(value).ok(),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unknown header key {key:?}"),
                })
            }
        }
    }
    let (n, k, seed_kind, radius) = match (n, k, seed_kind, radius) {
        (Some(n), Some(k), Some(s), Some(r)) => (n, k, s, r),
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "header must define n, k, seed and R".into(),
            })
        }
    };
    let mut generators = Vec::new();
    let mut logicals: Vec<(Option<PauliString>, Option<PauliString>)> = vec![(None, None); k];
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_pauli = |sign: &str, body: &str| -> Result<PauliString> {
            let mut p = PauliString::parse(body).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            match sign {
                "+" => {}
                "-" => p.negate(),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("bad sign {sign:?}"),
                    })
                }
            }
            if p.len() != n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("operator length {} does not match n={n}", p.len()),
                });
            }
            Ok(p)
        };
        match fields.as_slice() {
            ["S", sign, body] => generators.push(parse_pauli(sign, body)?),
            [tag @ ("LX" | "LZ"), tile, sign, body] => {
                let tile: usize = tile.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad tile id {tile:?}"),
                })?;
                if tile >= k {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("tile {tile} out of range for k={k}"),
                    });
                }
                let p = parse_pauli(sign, body)?;
                if *tag == "LX" {
                    logicals[tile].0 = Some(p);
                } else {
                    logicals[tile].1 = Some(p);
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unrecognized line {line:?}"),
                })
            }
        }
    }
    if generators.len() != n - k {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected {} generators, found {}", n - k, generators.len()),
        });
    }
    let logicals: Vec<(PauliString, PauliString)> = logicals
        .into_iter()
        .enumerate()
        .map(|(tile, pair)| match pair {
            (Some(x), Some(z)) => Ok((x, z)),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("missing logical pair for tile {tile}"),
            }),
        })
        .collect::<Result<_>>()?;
    Ok(HolographicCode {
        n,
        k,
        seed_kind,
        radius,
        generators,
        generator_tiles: Vec::new(),
        logicals,
    })
}
