//! Binary oracle files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "PSP1" | version u32 | n u64 | k u64 | b u64
//! permutation      n x u64      original id -> boundary-first id
//! assignment       n x u64      component of each original id
//! boundary flags   ceil(n/8)    bit v of byte v/8, least significant first
//! component offset (k+1) x u64  in boundary-first ids
//! component tables sum |C|^2 x f64, one row-major table per component
//! boundary tables  sum |B(C)| * b x f64, one table per component
//! boundary graph   u64 edge count, then (u64, u64, f64) per edge with u < v
//! placement        u64 p, then k x u64 owner
//! checksum         u64 CRC-64/XZ of every preceding byte
//! ```
//!
//! Unreachable distances are stored as `+inf`.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crc::{Crc, CRC_64_XZ};

use crate::cluster::Placement;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{BoundaryGraph, BoundaryTable, Oracle};
use crate::partition::Partition;
use crate::paths::DistanceMatrix;

pub const MAGIC: &[u8; 4] = b"PSP1";
pub const FORMAT_VERSION: u32 = 1;

static CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

const HEADER_BYTES: u64 = 4 + 4 + 8 + 8 + 8;

struct HashingWriter<W: Write> {
    inner: W,
    digest: crc::Digest<'static, u64>,
}

impl<W: Write> HashingWriter<W> {
    fn bytes(&mut self, data: &[u8]) -> io::Result<()> {
        self.digest.update(data);
        self.inner.write_all(data)
    }

    fn u64(&mut self, x: u64) -> io::Result<()> {
        self.bytes(&x.to_le_bytes())
    }

    fn usize(&mut self, x: usize) -> io::Result<()> {
        self.u64(x as u64)
    }

    fn f64s(&mut self, xs: &[f64]) -> io::Result<()> {
        let mut buf = Vec::with_capacity(8 * 4096);
        for chunk in xs.chunks(4096) {
            buf.clear();
            for x in chunk {
                buf.extend_from_slice(&x.to_bits().to_le_bytes());
            }
            self.bytes(&buf)?;
        }
        Ok(())
    }
}

/// Serializes `o` to any writer.
pub fn write_oracle<W: Write>(o: &Oracle, out: W) -> io::Result<()> {
    let mut w = HashingWriter {
        inner: out,
        digest: CRC64.digest(),
    };
    let n = o.n();
    w.bytes(MAGIC)?;
    w.bytes(&FORMAT_VERSION.to_le_bytes())?;
    w.usize(n)?;
    w.usize(o.k())?;
    w.usize(o.boundary_total())?;
    for &x in o.partition.permutation() {
        w.usize(x)?;
    }
    for &x in o.partition.assignment() {
        w.usize(x)?;
    }
    let mut flags = vec![0u8; n.div_ceil(8)];
    for (v, &b) in o.partition.boundary_flags().iter().enumerate() {
        if b {
            flags[v / 8] |= 1 << (v % 8);
        }
    }
    w.bytes(&flags)?;
    for &x in &o.offsets {
        w.usize(x)?;
    }
    for t in &o.component_tables {
        w.f64s(t.values())?;
    }
    for t in &o.boundary_tables {
        w.f64s(t.values())?;
    }
    let bg = o.boundary_graph.graph();
    w.usize(bg.m())?;
    for (u, v, weight) in bg.edges() {
        w.usize(u)?;
        w.usize(v)?;
        w.u64(weight.to_bits())?;
    }
    w.usize(o.placement.p())?;
    for &owner in o.placement.owners() {
        w.usize(owner)?;
    }
    let checksum = w.digest.finalize();
    w.inner.write_all(&checksum.to_le_bytes())?;
    w.inner.flush()
}

pub fn save_oracle(o: &Oracle, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_oracle(o, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Serialized bytes of `o`.
pub fn oracle_bytes(o: &Oracle) -> Vec<u8> {
    let mut out = Vec::new();
    write_oracle(o, &mut out).expect("writing to memory");
    out
}

struct Cursor<R: Read> {
    inner: R,
    remaining: u64,
}

impl<R: Read> Cursor<R> {
    fn bytes(&mut self, buf: &mut [u8]) -> Result<()> {
        if (buf.len() as u64) > self.remaining {
            return Err(Error::Truncated);
        }
        self.inner.read_exact(buf).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => Error::Truncated,
            _ => Error::Malformed(e.to_string()),
        })?;
        self.remaining -= buf.len() as u64;
        Ok(())
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.bytes(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Malformed("value exceeds usize".into()))
    }

    /// Reads `count` ids, each below `limit`. The length is checked against
    /// the bytes left before allocating.
    fn ids(&mut self, count: usize, limit: usize, what: &str) -> Result<Vec<usize>> {
        self.ensure(count as u64 * 8)?;
        (0..count)
            .map(|_| {
                let x = self.usize()?;
                if x >= limit {
                    return Err(Error::Malformed(format!("{what} {x} out of range {limit}")));
                }
                Ok(x)
            })
            .collect()
    }

    fn f64s(&mut self, count: usize) -> Result<Vec<f64>> {
        self.ensure(count as u64 * 8)?;
        let mut out = Vec::with_capacity(count);
        let mut buf = vec![0u8; 8 * 4096];
        let mut left = count;
        while left > 0 {
            let take = left.min(4096);
            self.bytes(&mut buf[..8 * take])?;
            out.extend(buf[..8 * take].chunks_exact(8).map(|c| f64::from_bits(u64::from_le_bytes(c.try_into().unwrap()))));
            left -= take;
        }
        Ok(out)
    }

    fn ensure(&self, bytes: u64) -> Result<()> {
        if bytes > self.remaining {
            Err(Error::Truncated)
        } else {
            Ok(())
        }
    }
}

fn checksum_of(path: &Path, body_len: u64) -> Result<(u64, u64)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let mut digest = CRC64.digest();
    let mut buf = vec![0u8; 1 << 20];
    let mut left = body_len;
    while left > 0 {
        let take = left.min(buf.len() as u64) as usize;
        reader.read_exact(&mut buf[..take]).map_err(|e| Error::io(path, e))?;
        digest.update(&buf[..take]);
        left -= take as u64;
    }
    let mut stored = [0u8; 8];
    reader.read_exact(&mut stored).map_err(|e| Error::io(path, e))?;
    Ok((u64::from_le_bytes(stored), digest.finalize()))
}

pub fn load_oracle(path: impl AsRef<Path>) -> Result<Oracle> {
    let path = path.as_ref();
    let len = std::fs::metadata(path).map_err(|e| Error::io(path, e))?.len();
    if len < HEADER_BYTES + 8 {
        return Err(Error::Truncated);
    }
    let (stored, computed) = checksum_of(path, len - 8)?;
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_body(BufReader::with_capacity(1 << 20, file), len - 8)
}

/// Parses an in-memory oracle file, checksum first.
pub fn oracle_from_bytes(bytes: &[u8]) -> Result<Oracle> {
    if (bytes.len() as u64) < HEADER_BYTES + 8 {
        return Err(Error::Truncated);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = CRC64.checksum(body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    read_body(body, body.len() as u64)
}

fn read_body<R: Read>(reader: R, body_len: u64) -> Result<Oracle> {
    let mut r = Cursor {
        inner: reader,
        remaining: body_len,
    };
    let mut magic = [0u8; 4];
    r.bytes(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let mut version = [0u8; 4];
    r.bytes(&mut version)?;
    let version = u32::from_le_bytes(version);
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let n = r.usize()?;
    let k = r.usize()?;
    let b = r.usize()?;
    if k == 0 || k > n || b > n {
        return Err(Error::Malformed(format!("inconsistent header n={n} k={k} b={b}")));
    }

    let permutation = r.ids(n, n, "permuted id")?;
    let assignment = r.ids(n, k, "component")?;
    let mut flag_bytes = vec![0u8; n.div_ceil(8)];
    r.bytes(&mut flag_bytes)?;
    let boundary: Vec<bool> = (0..n).map(|v| flag_bytes[v / 8] >> (v % 8) & 1 == 1).collect();

    let partition = Partition::from_parts(k, assignment, boundary)?;
    if partition.permutation() != permutation.as_slice() {
        return Err(Error::Malformed("permutation does not match partition".into()));
    }
    if partition.boundary_total() != b {
        return Err(Error::Malformed(format!("header b={b} but {} boundary flags set", partition.boundary_total())));
    }
    let layout = partition.relabeled();

    let offsets = r.ids(k + 1, n + 1, "component offset")?;
    let expected: Vec<usize> = std::iter::once(0)
        .chain((0..k).scan(0, |acc, c| {
            *acc += layout.size(c);
            Some(*acc)
        }))
        .collect();
    if offsets != expected {
        return Err(Error::Malformed("component offsets disagree with assignment".into()));
    }

    let mut component_tables = Vec::with_capacity(k);
    for c in 0..k {
        let size = layout.size(c);
        component_tables.push(DistanceMatrix::from_values(size, r.f64s(size * size)?)?);
    }
    let mut boundary_tables = Vec::with_capacity(k);
    let mut bg_offsets = vec![0usize];
    for c in 0..k {
        let rows = layout.boundary_count(c);
        boundary_tables.push(BoundaryTable::from_values(rows, b, r.f64s(rows * b)?)?);
        bg_offsets.push(bg_offsets[c] + rows);
    }

    let edge_count = r.usize()?;
    r.ensure(edge_count as u64 * 24)?;
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let u = r.usize()?;
        let v = r.usize()?;
        let w = f64::from_bits(r.u64()?);
        edges.push((u, v, w));
    }
    let bg_graph = Graph::from_edges(b, edges)?;
    let global_of: Vec<usize> = (0..k)
        .flat_map(|c| expected[c]..expected[c] + layout.boundary_count(c))
        .collect();
    let boundary_graph = BoundaryGraph::from_parts(global_of, bg_graph)?;

    let p = r.usize()?;
    if p == 0 || p > k {
        return Err(Error::Malformed(format!("placement worker count {p} invalid for k={k}")));
    }
    let owners = r.ids(k, p, "worker")?;
    let placement = Placement::from_owners(p, owners)?;

    if r.remaining != 0 {
        return Err(Error::Malformed(format!("{} unexpected trailing bytes", r.remaining)));
    }

    Ok(Oracle {
        partition,
        layout,
        offsets,
        bg_offsets,
        component_tables,
        boundary_graph,
        boundary_tables,
        placement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::PlacementPolicy;
    use crate::graph::{generate_grid, generate_triangulated_grid, WeightModel};
    use crate::oracle::{build_oracle, build_oracle_from_partition};

    fn split_grid_oracle() -> Oracle {
        let g = generate_grid(2, 3, WeightModel::Unit, 0).unwrap();
        let p = Partition::from_assignment(&g, 2, vec![0, 0, 1, 0, 0, 1]).unwrap();
        build_oracle_from_partition(&g, p, 1).unwrap().0
    }

    #[test]
    fn round_trip_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("o.psp");
        let o = split_grid_oracle();
        save_oracle(&o, &path).unwrap();
        let back = load_oracle(&path).unwrap();
        assert_eq!(back, o);
        assert_eq!(oracle_bytes(&back), oracle_bytes(&o));
    }

    #[test]
    fn round_trip_with_unreachable_entries_and_placement() {
        let g = Graph::from_edges(7, [(0, 1, 1.5), (2, 3, 0.0), (4, 5, 2.25)]).unwrap();
        let mut o = build_oracle(&g, 3, 2, 1).unwrap();
        o.set_placement(Placement::new(3, 2, PlacementPolicy::PairsPerGpu).unwrap()).unwrap();
        let bytes = oracle_bytes(&o);
        let back = oracle_from_bytes(&bytes).unwrap();
        assert_eq!(back, o);
        assert!(back.component_tables().iter().any(|t| t.values().contains(&f64::INFINITY)));
    }

    #[test]
    fn header_layout() {
        let o = split_grid_oracle();
        let bytes = oracle_bytes(&o);
        assert_eq!(&bytes[..4], b"PSP1");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), FORMAT_VERSION);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 6);
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[24..32].try_into().unwrap()), 4);
        let n = bytes.len();
        let stored = u64::from_le_bytes(bytes[n - 8..].try_into().unwrap());
        assert_eq!(stored, CRC64.checksum(&bytes[..n - 8]));
    }

    #[test]
    fn corruption_is_detected() {
        let o = generate_triangulated_grid(6, 6, WeightModel::Unit, 0)
            .and_then(|g| build_oracle(&g, 4, 1, 0))
            .unwrap();
        let bytes = oracle_bytes(&o);

        let mut bad_sum = bytes.clone();
        let last = bad_sum.len() - 1;
        bad_sum[last] ^= 0x40;
        assert!(matches!(oracle_from_bytes(&bad_sum), Err(Error::Checksum { .. })));

        let mut bad_entry = bytes.clone();
        bad_entry[bytes.len() / 2] ^= 1;
        assert!(matches!(oracle_from_bytes(&bad_entry), Err(Error::Checksum { .. })));

        assert!(matches!(oracle_from_bytes(&[]), Err(Error::Truncated)));
        assert!(matches!(oracle_from_bytes(&bytes[..20]), Err(Error::Truncated)));
        let cut = &bytes[..bytes.len() - 100];
        assert!(oracle_from_bytes(cut).is_err());
    }

    #[test]
    fn version_and_magic_checked() {
        let o = split_grid_oracle();
        let resign = |mut body: Vec<u8>| {
            let n = body.len();
            let sum = CRC64.checksum(&body[..n - 8]);
            body[n - 8..].copy_from_slice(&sum.to_le_bytes());
            body
        };
        let mut v2 = oracle_bytes(&o);
        v2[4] = 2;
        assert!(matches!(
            oracle_from_bytes(&resign(v2)),
            Err(Error::VersionMismatch { found: 2, expected: 1 })
        ));
        let mut magic = oracle_bytes(&o);
        magic[0] = b'X';
        assert!(matches!(oracle_from_bytes(&resign(magic)), Err(Error::BadMagic)));
        let mut short = oracle_bytes(&o);
        let n = short.len();
        short.drain(n - 16..n - 8);
        assert!(oracle_from_bytes(&resign(short)).is_err());
    }

    #[test]
    fn empty_file_is_truncated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty");
        std::fs::write(&path, b"").unwrap();
        assert!(matches!(load_oracle(&path), Err(Error::Truncated)));
    }
}
