//! Layered construction of the {4,n} hyperbolic tessellation: n-gon tiles
//! with four tiles meeting at every interior vertex.
//!
//! Tiles are generated breadth-first by graph distance from the central
//! tile, clockwise within each layer. Slots on every tile are numbered
//! clockwise with the input slots first, so the contiguous input window of
//! each tile begins at slot 0. The construction walks the frontier of free
//! legs; between two consecutive frontier legs sits exactly one boundary
//! vertex, and each vertex is closed by a two-input tile exactly two layers
//! after it first appears. Radius R means R layers: the minimal number of
//! network edges from any boundary qubit to the central tile is R.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// One leg endpoint: a slot on a tile.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct LegRef {
    pub tile: usize,
    pub slot: usize,
}

/// Where a tile slot connects.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Slot {
    /// Contracted with another tile's slot.
    Interior(LegRef),
    /// Dangling leg carrying the boundary qubit with this index.
    Boundary(usize),
}

#[derive(Clone, Debug)]
pub struct Tile {
    pub id: usize,
    pub layer: usize,
    /// Number of input slots; inputs occupy slots 0..inputs.
    pub inputs: usize,
    pub slots: Vec<Slot>,
}

impl Tile {
    pub fn n_sides(&self) -> usize {
        self.slots.len()
    }

    pub fn input_slots(&self) -> impl Iterator<Item = usize> {
        0..self.inputs
    }

    pub fn output_slots(&self) -> impl Iterator<Item = usize> {
        self.inputs..self.slots.len()
    }
}

#[derive(Clone, Debug)]
pub struct Tiling {
    pub n_sides: usize,
    pub radius: usize,
    pub tiles: Vec<Tile>,
    /// Unpaired legs in cyclic planar order; index = boundary qubit index.
    pub boundary: Vec<LegRef>,
}

/// Counts of tiles by input multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Census {
    pub zero_input: usize,
    pub one_input: usize,
    pub two_input: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.zero_input + self.one_input + self.two_input
    }
}

/// Practical cap on boundary size for a single built tiling.
const MAX_BOUNDARY: usize = 1 << 20;

/// Builds the {4,n} tiling with `radius` layers.
pub fn build_tiling(n_sides: usize, radius: usize) -> Result<Tiling> {
    if n_sides != 5 && n_sides != 7 {
        return Err(Error::InvalidArgument(format!(
            "unsupported tile size {n_sides} (expected 5 or 7)"
        )));
    }
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let n = n_sides;
    let mut tiles = vec![Tile {
        id: 0,
        layer: 0,
        inputs: 0,
        slots: vec![Slot::Boundary(usize::MAX); n],
    }];

    // Frontier legs in clockwise order. vertex_old[j] describes the vertex
    // between legs[j] and legs[j+1]: true when it appeared one layer ago and
    // must be closed by a two-input tile in the next layer.
    let mut legs: Vec<LegRef> = (0..n).map(|slot| LegRef { tile: 0, slot }).collect();
    let mut vertex_old = vec![false; n];

    for layer in 1..radius {
        let m = legs.len();
        if m > MAX_BOUNDARY {
            return Err(Error::Capacity(format!(
                "frontier of {m} legs exceeds the {MAX_BOUNDARY} limit at layer {layer}"
            )));
        }
        let mut consumed = vec![false; m];
        for j in 0..m {
            if vertex_old[j] {
                consumed[j] = true;
                consumed[(j + 1) % m] = true;
            }
        }
        let mut created: Vec<usize> = Vec::new();
        for j in 0..m {
            if !consumed[j] {
                let id = tiles.len();
                tiles.push(Tile {
                    id,
                    layer,
                    inputs: 1,
                    slots: vec![Slot::Boundary(usize::MAX); n],
                });
                connect(&mut tiles, id, 0, legs[j]);
                created.push(id);
            }
            if vertex_old[j] {
                // Closer tile over the vertex between legs[j] and legs[j+1].
                // Slot 0 pairs with the later leg so that the clockwise slot
                // numbering keeps the two inputs adjacent (0 then 1) and the
                // free slots 2..n-1 follow in walk order.
                let id = tiles.len();
                tiles.push(Tile {
                    id,
                    layer,
                    inputs: 2,
                    slots: vec![Slot::Boundary(usize::MAX); n],
                });
                connect(&mut tiles, id, 0, legs[(j + 1) % m]);
                connect(&mut tiles, id, 1, legs[j]);
                created.push(id);
            }
        }
        let mut new_legs = Vec::new();
        let mut new_old = Vec::new();
        for &id in &created {
            let inputs = tiles[id].inputs;
            let free = n - inputs;
            for (k, slot) in (inputs..n).enumerate() {
                new_legs.push(LegRef { tile: id, slot });
                // The vertex after a tile's last free leg separates it from
                // the next tile of this layer and gets closed next layer.
                new_old.push(k + 1 == free);
            }
        }
        legs = new_legs;
        vertex_old = new_old;
    }
    if legs.len() > MAX_BOUNDARY {
        return Err(Error::Capacity(format!(
            "boundary of {} legs exceeds the {MAX_BOUNDARY} limit",
            legs.len()
        )));
    }

    for (qubit, leg) in legs.iter().enumerate() {
        tiles[leg.tile].slots[leg.slot] = Slot::Boundary(qubit);
    }
    Ok(Tiling {
        n_sides,
        radius,
        tiles,
        boundary: legs,
    })
}

fn connect(tiles: &mut [Tile], id: usize, slot: usize, partner: LegRef) {
    tiles[id].slots[slot] = Slot::Interior(partner);
    tiles[partner.tile].slots[partner.slot] = Slot::Interior(LegRef { tile: id, slot });
}

/// Tile counts keyed by input multiplicity.
pub fn tile_census(t: &Tiling) -> Census {
    let mut census = Census {
        zero_input: 0,
        one_input: 0,
        two_input: 0,
    };
    for tile in &t.tiles {
        match tile.inputs {
            0 => census.zero_input += 1,
            1 => census.one_input += 1,
            2 => census.two_input += 1,
            other => panic!("tile {} has {other} inputs", tile.id),
        }
    }
    census
}

/// Boundary legs in cyclic order.
pub fn boundary_legs(t: &Tiling) -> &[LegRef] {
    &t.boundary
}

/// Plain-text adjacency listing: one line per tile with id, layer, input
/// count and the partner (or boundary qubit) of every slot in order.
pub fn export_tiling<W: Write>(t: &Tiling, mut out: W) -> Result<()> {
    writeln!(out, "tiling n={} R={} tiles={}", t.n_sides, t.radius, t.tiles.len())?;
    for tile in &t.tiles {
        write!(out, "{} {} {}", tile.id, tile.layer, tile.inputs)?;
        for slot in &tile.slots {
            match slot {
                Slot::Interior(p) => write!(out, " t{}:{}", p.tile, p.slot)?,
                Slot::Boundary(q) => write!(out, " B{q}")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads back the format written by [`export_tiling`]. Used by tests; the
/// builder is the canonical source of tilings.
pub fn import_tiling<R: BufRead>(reader: R) -> Result<Tiling> {
    let mut lines = reader.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty tiling file".into(),
        })?
        .1
        .into_parse_result(1)?;
    let mut n_sides = 0usize;
    let mut radius = 0usize;
    let mut count = 0usize;
    for token in header.split_whitespace().skip(1) {
        let (key, value) = token.split_once('=').ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("bad header token {token:?}"),
        })?;
        let parsed: usize = value.parse().map_err(|_| Error::Parse {
            line: 1,
            message: format!("bad number {value:?}"),
        })?;
        match key {
            "n" => n_sides = parsed,
            "R" => radius = parsed,
            "tiles" => count = parsed,
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unknown header key {key:?}"),
                })
            }
        }
    }
    let mut tiles = Vec::with_capacity(count);
    let mut boundary: Vec<(usize, LegRef)> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.into_parse_result(line_no)?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let id: usize = parse_field(parts.next(), line_no, "tile id")?;
        let layer: usize = parse_field(parts.next(), line_no, "layer")?;
        let inputs: usize = parse_field(parts.next(), line_no, "inputs")?;
        let mut slots = Vec::new();
        for token in parts {
            if let Some(q) = token.strip_prefix('B') {
                let q: usize = q.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad boundary token {token:?}"),
                })?;
                boundary.push((
                    q,
                    LegRef {
                        tile: id,
                        slot: slots.len(),
                    },
                ));
                slots.push(Slot::Boundary(q));
            } else if let Some(rest) = token.strip_prefix('t') {
                let (tile, slot) = rest.split_once(':').ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("bad partner token {token:?}"),
                })?;
                let partner = LegRef {
                    tile: tile.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("bad tile id in {token:?}"),
                    })?,
                    slot: slot.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("bad slot in {token:?}"),
                    })?,
                };
                slots.push(Slot::Interior(partner));
            } else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unrecognized slot token {token:?}"),
                });
            }
        }
        tiles.push(Tile {
            id,
            layer,
            inputs,
            slots,
        });
    }
    boundary.sort_by_key(|(q, _)| *q);
    Ok(Tiling {
        n_sides,
        radius,
        tiles,
        boundary: boundary.into_iter().map(|(_, l)| l).collect(),
    })
}

fn parse_field(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("missing or bad {what}"),
        })
}

trait IntoParseResult<T> {
    fn into_parse_result(self, line: usize) -> Result<T>;
}

impl IntoParseResult<String> for std::io::Result<String> {
    fn into_parse_result(self, line: usize) -> Result<String> {
        self.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })
    }
}
