//! Generate the grid families, write them in both text formats and read
//! them back.
//!
//!     cargo run --release --example generate_graphs -- 20x30

use planar_oracle::graph::{
    generate_grid, generate_triangulated_grid, load_graph, save_graph, GraphFormat, WeightModel,
};

fn main() -> planar_oracle::Result<()> {
    let dims = std::env::args().nth(1).unwrap_or_else(|| "20x30".into());
    let (rows, cols) = dims
        .split_once('x')
        .and_then(|(r, c)| Some((r.parse().ok()?, c.parse().ok()?)))
        .expect("usage: generate_graphs ROWSxCOLS");

    let dir = std::env::temp_dir().join("psp-generate-example");
    std::fs::create_dir_all(&dir).map_err(|e| planar_oracle::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let families = [
        ("grid-unit", generate_grid(rows, cols, WeightModel::Unit, 0)?),
        ("grid-int", generate_grid(rows, cols, WeightModel::Integer { lo: 1, hi: 100 }, 1)?),
        (
            "tri-uniform",
            generate_triangulated_grid(rows, cols, WeightModel::Uniform { lo: 0.5, hi: 2.0 }, 2)?,
        ),
    ];

    println!("{:<12} {:>8} {:>8} {:>6} {:>10}", "family", "n", "m", "maxdeg", "connected");
    for (name, g) in &families {
        println!("{name:<12} {:>8} {:>8} {:>6} {:>10}", g.n(), g.m(), g.max_degree(), g.is_connected());
        for (format, ext) in [(GraphFormat::EdgeList, "el"), (GraphFormat::Dimacs, "gr")] {
            let path = dir.join(format!("{name}.{ext}"));
            save_graph(g, &path, format)?;
            let back = load_graph(&path, format)?;
            assert_eq!(&back, g, "{name} did not survive {ext}");
        }
    }
    println!("wrote edge-list and DIMACS files to {}", dir.display());
    Ok(())
}
