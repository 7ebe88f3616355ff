//! Save an oracle, load it back, and show that a flipped byte is caught by
//! the checksum.

use planar_oracle::graph::{generate_grid, WeightModel};
use planar_oracle::oracle::build_oracle;
use planar_oracle::persist::{load_oracle, save_oracle};
use planar_oracle::query::query;
use planar_oracle::Error;

fn main() -> planar_oracle::Result<()> {
    let g = generate_grid(40, 40, WeightModel::Integer { lo: 1, hi: 20 }, 4)?;
    let oracle = build_oracle(&g, 40, 1, 0)?;

    let dir = std::env::temp_dir().join("psp-persist-example");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join("grid40.psp");
    save_oracle(&oracle, &path)?;
    let bytes = std::fs::read(&path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
    println!("{} bytes, {} stored entries", bytes.len(), oracle.stored_entries());

    let loaded = load_oracle(&path)?;
    assert!(loaded == oracle);
    println!("reloaded: d(0, {}) = {}", g.n() - 1, query(&loaded, 0, g.n() - 1)?.distance);

    let mut corrupt = bytes;
    let mid = corrupt.len() / 2;
    corrupt[mid] ^= 0x01;
    let bad = dir.join("corrupt.psp");
    std::fs::write(&bad, &corrupt).map_err(|e| Error::Io { path: bad.clone(), source: e })?;
    match load_oracle(&bad) {
        Err(e @ Error::Checksum { .. }) => println!("corrupted copy rejected: {e}"),
        other => panic!("corruption went unnoticed: {other:?}"),
    }
    Ok(())
}
