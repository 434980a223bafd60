//! OFF, OBJ and JSON export of the torus tessellation.
//!
//! Geometric formats use exact integer coordinates. For `n = 3` the map
//! to `R^3` is a similarity (three orthogonal Hadamard rows); for `n = 2`
//! it is the affine map `(x1 - x2, x1 + x2 - 2 x3)`, which stretches the
//! hexagons but keeps every coordinate integral.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use super::{neighbor_translation, Division, LatticeVector, TorusTessellation};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
    Json,
}

impl std::str::FromStr for MeshFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            "json" => Ok(MeshFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown mesh format `{other}`"))),
        }
    }
}

/// Counts reported after an export; face counts are per cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshSummary {
    pub cells: usize,
    pub facets: usize,
    pub edges: usize,
    pub vertices: usize,
    pub tiles_written: usize,
}

impl std::fmt::Display for MeshSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cells={} facets={} edges={} vertices={} tiles={}",
            self.cells, self.facets, self.edges, self.vertices, self.tiles_written
        )
    }
}

/// A tile of the universal cover: its translate and torus cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Tile {
    pub cell: usize,
    pub translation: Vec<i64>,
}

fn project(n: usize, x: &[i64]) -> [i64; 3] {
    match n {
        1 => [x[0] - x[1], 0, 0],
        2 => [x[0] - x[1], x[0] + x[1] - 2 * x[2], 0],
        _ => [
            x[0] + x[1] - x[2] - x[3],
            x[0] - x[1] + x[2] - x[3],
            x[0] - x[1] - x[2] + x[3],
        ],
    }
}

fn adjacent(a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    diff.len() == 2 && a[diff[0]] == b[diff[1]] && a[diff[1]] == b[diff[0]] && (a[diff[0]] - a[diff[1]]).abs() == 1
}

/// Orders the vertices of a 2-face cyclically along its edges.
fn cyclic_order(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut order = vec![verts[0].clone()];
    let mut used = vec![false; verts.len()];
    used[0] = true;
    while order.len() < verts.len() {
        let last = order.last().expect("nonempty");
        let next = (0..verts.len()).find(|&i| !used[i] && adjacent(last, &verts[i])).expect("polygon is connected");
        used[next] = true;
        order.push(verts[next].clone());
    }
    order
}

fn sub3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Polygons (or segments for `n = 1`) of one tile, in projected
/// coordinates, oriented outward.
fn tile_faces(t: &TorusTessellation, offset: &[i64]) -> Vec<Vec<[i64; 3]>> {
    let n = t.n;
    let shift = |v: &Vec<i64>| -> Vec<i64> { v.iter().zip(offset).map(|(a, b)| a + b).collect() };
    match n {
        1 => vec![t.base.vertices.iter().map(|v| project(n, &shift(v))).collect()],
        2 => {
            let ring: Vec<[i64; 3]> = cyclic_order(&t.base.vertices).iter().map(|v| project(n, &shift(v))).collect();
            let z = cross(sub3(ring[1], ring[0]), sub3(ring[2], ring[0]))[2];
            vec![if z < 0 { ring.into_iter().rev().collect() } else { ring }]
        }
        _ => {
            // Centre scaled by 2 to stay integral.
            let c2: Vec<i64> = (0..=n).map(|i| (n as i64 + 2) + 2 * offset[i]).collect();
            let c2p = project(n, &c2);
            t.base
                .facets
                .iter()
                .map(|f| {
                    let ring: Vec<[i64; 3]> =
                        cyclic_order(&t.base.vertices_on(f)).iter().map(|v| project(n, &shift(v))).collect();
                    let normal = cross(sub3(ring[1], ring[0]), sub3(ring[2], ring[0]));
                    let out = sub3([2 * ring[0][0], 2 * ring[0][1], 2 * ring[0][2]], c2p);
                    if dot(normal, out) < 0 {
                        ring.into_iter().rev().collect()
                    } else {
                        ring
                    }
                })
                .collect()
        }
    }
}

/// The tiles to draw: the `n + 1` torus cells, plus for a cover patch
/// every tile sharing a facet with one of them.
pub fn tiles(t: &TorusTessellation, cover_patch: bool) -> Result<Vec<Tile>> {
    let mut set: BTreeSet<LatticeVector> = BTreeSet::new();
    if cover_patch {
        for c in &t.cells {
            for f in &t.base.facets {
                set.insert(c.add(&neighbor_translation(f)?));
            }
        }
    }
    // Torus cells first, in cell order, then the patch.
    let mut out: Vec<Tile> =
        t.cells.iter().enumerate().map(|(i, c)| Tile { cell: i + 1, translation: c.coords.clone() }).collect();
    for v in set {
        if !t.cells.contains(&v) {
            let (cell, _) = t.cell_of_translate(&v).expect("tile translates lie in the l-lattice");
            out.push(Tile { cell, translation: v.coords });
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct FacetRecord {
    blocks: Vec<Vec<usize>>,
    degree: usize,
}

#[derive(Serialize)]
struct Codim2Record {
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct FaceLattice {
    schema_version: u32,
    n: usize,
    cells: Vec<Tile>,
    facets: Vec<FacetRecord>,
    codim2: Vec<Codim2Record>,
}

fn blocks(d: &Division) -> Vec<Vec<usize>> {
    d.blocks().to_vec()
}

pub fn summary(t: &TorusTessellation, tiles_written: usize) -> MeshSummary {
    MeshSummary {
        cells: t.num_cells(),
        facets: t.base.facets.len(),
        edges: t.base.edge_count(),
        vertices: t.base.vertices.len(),
        tiles_written,
    }
}

/// Renders the tessellation. Geometric formats need `n <= 3`.
pub fn export_mesh(t: &TorusTessellation, format: MeshFormat, cover_patch: bool) -> Result<(String, MeshSummary)> {
    let tiles = tiles(t, cover_patch)?;
    let sum = summary(t, tiles.len());
    if format == MeshFormat::Json {
        let lattice = FaceLattice {
            schema_version: crate::ainfinity::SCHEMA_VERSION,
            n: t.n,
            cells: tiles,
            facets: t.base.facets.iter().map(|f| FacetRecord { blocks: blocks(f), degree: f.b2().len() }).collect(),
            codim2: t.base.codim2.iter().map(|e| Codim2Record { blocks: blocks(e) }).collect(),
        };
        let text = serde_json::to_string_pretty(&lattice).expect("face lattice serializes");
        return Ok((text + "\n", sum));
    }
    if t.n > 3 {
        return Err(Error::UnsupportedDimension(t.n));
    }
    let per_tile: Vec<(usize, Vec<Vec<[i64; 3]>>)> =
        tiles.iter().map(|tile| (tile.cell, tile_faces(t, &tile.translation))).collect();
    let mut out = String::new();
    match format {
        MeshFormat::Off => {
            let nv: usize = per_tile.iter().map(|(_, fs)| fs.iter().map(Vec::len).sum::<usize>()).sum();
            let nf: usize = per_tile.iter().map(|(_, fs)| fs.len()).sum();
            writeln!(out, "OFF").unwrap();
            writeln!(out, "# {sum}").unwrap();
            writeln!(out, "{nv} {nf} 0").unwrap();
            for (_, faces) in &per_tile {
                for face in faces {
                    for p in face {
                        writeln!(out, "{} {} {}", p[0], p[1], p[2]).unwrap();
                    }
                }
            }
            let mut next = 0;
            for (_, faces) in &per_tile {
                for face in faces {
                    let idx: Vec<String> = (next..next + face.len()).map(|i| i.to_string()).collect();
                    writeln!(out, "{} {}", face.len(), idx.join(" ")).unwrap();
                    next += face.len();
                }
            }
        }
        MeshFormat::Obj => {
            writeln!(out, "# {sum}").unwrap();
            let mut next = 1;
            for (k, (cell, faces)) in per_tile.iter().enumerate() {
                writeln!(out, "o tile{k}_cell{cell}").unwrap();
                for face in faces {
                    for p in face {
                        writeln!(out, "v {} {} {}", p[0], p[1], p[2]).unwrap();
                    }
                    let idx: Vec<String> = (next..next + face.len()).map(|i| i.to_string()).collect();
                    if face.len() == 2 {
                        writeln!(out, "l {}", idx.join(" ")).unwrap();
                    } else {
                        writeln!(out, "f {}", idx.join(" ")).unwrap();
                    }
                    next += face.len();
                }
            }
        }
        MeshFormat::Json => unreachable!(),
    }
    Ok((out, sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_three_hexagons() {
        let t = TorusTessellation::build(2).unwrap();
        let (text, sum) = export_mesh(&t, MeshFormat::Off, false).unwrap();
        assert_eq!(sum.tiles_written, 3);
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("6 ")).collect();
        assert_eq!(faces.len(), 3);
    }

    #[test]
    fn n3_truncated_octahedra() {
        let t = TorusTessellation::build(3).unwrap();
        let (text, sum) = export_mesh(&t, MeshFormat::Obj, false).unwrap();
        assert_eq!((sum.cells, sum.facets, sum.edges, sum.vertices), (4, 14, 36, 24));
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 4 * 14);
        let squares = faces.iter().filter(|l| l.split_whitespace().count() == 5).count();
        assert_eq!(squares, 4 * 6);
    }

    #[test]
    fn cover_patch_n3() {
        let t = TorusTessellation::build(3).unwrap();
        let tiles = tiles(&t, true).unwrap();
        // Each cell plus its 14 neighbours, with overlaps between cells.
        assert!(tiles.len() > 4 && tiles.len() <= 4 * 15);
    }

    #[test]
    fn higher_n_is_json_only() {
        let t = TorusTessellation::build(5).unwrap();
        assert_eq!(export_mesh(&t, MeshFormat::Off, false).unwrap_err(), Error::UnsupportedDimension(5));
        assert!(export_mesh(&t, MeshFormat::Json, false).is_ok());
    }
}
