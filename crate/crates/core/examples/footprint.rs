//! Footprints of the three sensor kinds for one satellite, as GeoJSON.

use walkeropt::io::footprints_geojson;
use walkeropt::sensor::{footprint, SensorKind, SensorModel};
use walkeropt::{EarthModel, OrbitalElements};

fn main() {
    let earth = EarthModel::WGS84;
    let el = OrbitalElements::new(
        8576.0,
        0.0,
        38f64.to_radians(),
        112f64.to_radians(),
        0.0,
        0.6,
        0.0,
        &earth,
    )
    .unwrap();
    let kinds = [
        SensorKind::Conic {
            boundary_samples: 36,
        },
        SensorKind::Frame,
        SensorKind::PushBroom,
    ];
    let polys: Vec<_> = kinds
        .iter()
        .enumerate()
        .map(|(k, &kind)| {
            let sensor = SensorModel::new(30f64.to_radians(), kind).unwrap();
            let fp = footprint(&el, &earth, &sensor, 0.0, k).unwrap();
            let (lon, lat) = fp.vertex_centroid_deg();
            eprintln!(
                "{kind:?}: {} vertices, centroid ({lon:.3}, {lat:.3})",
                fp.vertices.len()
            );
            fp
        })
        .collect();
    print!("{}", footprints_geojson(&polys));
}
