//! Inspect the boundary graph of an oracle: its size, clique and cross
//! edges, and the fact that its distances equal distances in the full graph.

use planar_oracle::graph::{generate_triangulated_grid, WeightModel};
use planar_oracle::oracle::build_oracle;
use planar_oracle::paths::dijkstra_sssp;

fn main() -> planar_oracle::Result<()> {
    let g = generate_triangulated_grid(30, 30, WeightModel::Integer { lo: 1, hi: 9 }, 3)?;
    let o = build_oracle(&g, 16, 1, 0)?;
    let bg = o.boundary_graph();
    println!(
        "graph n={} m={}; boundary graph {} vertices, {} edges",
        g.n(),
        g.m(),
        bg.order(),
        bg.graph().m()
    );

    let cross = bg
        .graph()
        .edges()
        .filter(|&(a, b, _)| o.locate(o.boundary_vertex(a)).unwrap().component != o.locate(o.boundary_vertex(b)).unwrap().component)
        .count();
    println!("{cross} edges cross components, {} are shortcuts inside one", bg.graph().m() - cross);

    let mut checked = 0;
    for a in (0..bg.order()).step_by(7) {
        let truth = dijkstra_sssp(&g, o.boundary_vertex(a))?;
        for b in 0..bg.order() {
            assert_eq!(o.boundary_distance(a, b), truth[o.boundary_vertex(b)]);
            checked += 1;
        }
    }
    println!("{checked} boundary pairs agree with full-graph distances");
    Ok(())
}
