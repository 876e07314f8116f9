//! Hexagonal-grid coverage of a region by two thin swaths that share one cell.

use walkeropt::hexgrid::{instantaneous_coverage, tessellate, TargetRegion};
use walkeropt::sensor::{FootprintPolygon, GeodeticPoint};

fn polygon(ring: &[(f64, f64)], id: usize) -> FootprintPolygon {
    FootprintPolygon {
        vertices: ring
            .iter()
            .map(|&(x, y)| GeodeticPoint {
                lon: x.to_radians(),
                lat: y.to_radians(),
                height: 0.0,
            })
            .collect(),
        epoch: 0.0,
        satellite_id: id,
    }
}

fn main() {
    let region = TargetRegion::rectangle(110.0, 30.0, 118.0, 36.0).unwrap();
    let grid = tessellate(&region, 0.5).unwrap();
    let east_west = polygon(
        &[(110.0, 32.9), (118.0, 32.9), (118.0, 33.1), (110.0, 33.1)],
        0,
    );
    let diagonal = polygon(
        &[(117.0, 33.0), (117.2, 33.0), (114.2, 36.0), (114.0, 36.0)],
        1,
    );
    for (name, fps) in [
        ("east-west", vec![east_west.clone()]),
        ("diagonal", vec![diagonal.clone()]),
        ("union", vec![east_west, diagonal]),
    ] {
        let (covered, ratio) = instantaneous_coverage(&grid, &fps);
        println!(
            "{name:>9}: {covered:>3} of {} cells, ratio {ratio:.4}",
            grid.len()
        );
    }
}
