//! Hexagonal discretization of a target region and cell-counting coverage.
//!
//! A cell counts as covered at an epoch when it intersects the union of the
//! footprints at that epoch. Instantaneous coverage is covered cells over all
//! cells; average coverage is the mean over epochs. Everything operates in
//! the equirectangular lon/lat plane (degrees).

pub mod geometry;

use rayon::prelude::*;
use thiserror::Error;

use crate::sensor::{FootprintPolygon, SensorError};
use geometry::{ring_is_simple, rings_intersect_with_bbox, signed_area, BBox, Point, TOUCH_EPS};

/// Refuse to build grids larger than this.
pub const MAX_CELLS: usize = 5_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum HexGridError {
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error("invalid cell radius {0} deg")]
    InvalidCellRadius(f64),
    #[error("grid would exceed {MAX_CELLS} cells")]
    TooManyCells,
    #[error("no epochs to evaluate")]
    NoEpochs,
    #[error(transparent)]
    Sensor(#[from] SensorError),
}

/// Simple polygon of (lon, lat) degrees; closure is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetRegion {
    boundary: Vec<Point>,
}

impl TargetRegion {
    pub fn new(mut boundary: Vec<Point>) -> Result<Self, HexGridError> {
        if boundary.len() > 3 && boundary.first() == boundary.last() {
            boundary.pop();
        }
        if boundary.len() < 3 {
            return Err(HexGridError::DegenerateRegion(format!(
                "need at least 3 vertices, got {}",
                boundary.len()
            )));
        }
        for &(lon, lat) in &boundary {
            if !(lon.is_finite() && (-180.0..=180.0).contains(&lon)) {
                return Err(HexGridError::DegenerateRegion(format!(
                    "longitude {lon} outside [-180, 180]"
                )));
            }
            if !(lat.is_finite() && (-90.0..=90.0).contains(&lat)) {
                return Err(HexGridError::DegenerateRegion(format!(
                    "latitude {lat} outside [-90, 90]"
                )));
            }
        }
        if !ring_is_simple(&boundary) {
            return Err(HexGridError::DegenerateRegion(
                "boundary self-intersects".into(),
            ));
        }
        let bb = BBox::of(&boundary);
        let area = signed_area(&boundary).abs();
        if area <= 1e-9 * (bb.width() * bb.height()).max(1e-12) || area < 1e-12 {
            return Err(HexGridError::DegenerateRegion(format!(
                "near-zero area {area} deg²"
            )));
        }
        Ok(Self { boundary })
    }

    /// Axis-aligned rectangle from the lower-left to the upper-right corner.
    pub fn rectangle(
        min_lon: f64,
        min_lat: f64,
        max_lon: f64,
        max_lat: f64,
    ) -> Result<Self, HexGridError> {
        Self::new(vec![
            (min_lon, min_lat),
            (max_lon, min_lat),
            (max_lon, max_lat),
            (min_lon, max_lat),
        ])
    }

    pub fn boundary(&self) -> &[Point] {
        &self.boundary
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.boundary)
    }
}

/// Pointy-top regular hexagon.
#[derive(Debug, Clone, PartialEq)]
pub struct HexCell {
    pub id: usize,
    pub center: Point,
    pub vertices: [Point; 6],
    bbox: BBox,
}

impl HexCell {
    pub fn pointy(id: usize, center: Point, radius: f64) -> Self {
        let vertices = std::array::from_fn(|k| {
            let angle = (30.0 + 60.0 * k as f64).to_radians();
            (
                center.0 + radius * angle.cos(),
                center.1 + radius * angle.sin(),
            )
        });
        let bbox = BBox::of(&vertices);
        Self {
            id,
            center,
            vertices,
            bbox,
        }
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    min_y: f64,
    max_y: f64,
    start: usize,
    end: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HexGrid {
    cells: Vec<HexCell>,
    cell_radius: f64,
    region: TargetRegion,
    rows: Vec<Row>,
    bbox: BBox,
}

impl HexGrid {
    /// Builds a grid from explicit cells; ids are reassigned in order.
    pub fn from_cells(
        centers: &[Point],
        cell_radius: f64,
        region: TargetRegion,
    ) -> Result<Self, HexGridError> {
        if !(cell_radius.is_finite() && cell_radius > 0.0) {
            return Err(HexGridError::InvalidCellRadius(cell_radius));
        }
        let cells = centers
            .iter()
            .enumerate()
            .map(|(id, &c)| HexCell::pointy(id, c, cell_radius))
            .collect();
        Ok(Self::assemble(cells, cell_radius, region))
    }

    fn assemble(cells: Vec<HexCell>, cell_radius: f64, region: TargetRegion) -> Self {
        // group consecutive cells sharing a center latitude
        let mut rows: Vec<Row> = Vec::new();
        for (k, c) in cells.iter().enumerate() {
            match rows.last_mut() {
                Some(r) if cells[r.start].center.1 == c.center.1 => {
                    r.end = k + 1;
                    r.min_y = r.min_y.min(c.bbox.min_y);
                    r.max_y = r.max_y.max(c.bbox.max_y);
                }
                _ => rows.push(Row {
                    min_y: c.bbox.min_y,
                    max_y: c.bbox.max_y,
                    start: k,
                    end: k + 1,
                }),
            }
        }
        let bbox = if cells.is_empty() {
            region.bbox()
        } else {
            BBox::of(&cells.iter().flat_map(|c| c.vertices).collect::<Vec<_>>())
        };
        Self {
            cells,
            cell_radius,
            region,
            rows,
            bbox,
        }
    }

    pub fn cells(&self) -> &[HexCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_radius(&self) -> f64 {
        self.cell_radius
    }

    pub fn region(&self) -> &TargetRegion {
        &self.region
    }

    /// Visits the ids of cells whose bounding boxes overlap `b`.
    fn for_each_candidate(&self, b: &BBox, mut f: impl FnMut(usize)) {
        if !self.bbox.overlaps_within(b, TOUCH_EPS) {
            return;
        }
        for row in &self.rows {
            if row.max_y + TOUCH_EPS < b.min_y || row.min_y - TOUCH_EPS > b.max_y {
                continue;
            }
            for k in row.start..row.end {
                if self.cells[k].bbox.overlaps_within(b, TOUCH_EPS) {
                    f(k);
                }
            }
        }
    }

    /// Marks in `covered` every cell intersecting `ring`.
    pub fn mark_ring(&self, ring: &[Point], covered: &mut [bool]) {
        if ring.is_empty() {
            return;
        }
        let rb = BBox::of(ring);
        self.for_each_candidate(&rb, |k| {
            if !covered[k] {
                let cell = &self.cells[k];
                if rings_intersect_with_bbox(&cell.vertices, &cell.bbox, ring, &rb) {
                    covered[k] = true;
                }
            }
        });
    }

    /// Per-cell covered flags against the union of `footprints`.
    pub fn covered_flags(&self, footprints: &[FootprintPolygon]) -> Vec<bool> {
        let mut covered = vec![false; self.cells.len()];
        for fp in footprints {
            for ring in fp.planar_rings_deg() {
                self.mark_ring(&ring, &mut covered);
            }
        }
        covered
    }
}

/// Tiles the region's bounding box with a pointy-top, odd-row-offset lattice
/// anchored at the box center and keeps the cells that intersect the region.
/// Cells are ordered row-major (south to north, west to east).
pub fn tessellate(region: &TargetRegion, cell_radius: f64) -> Result<HexGrid, HexGridError> {
    if !(cell_radius.is_finite() && cell_radius > 0.0) {
        return Err(HexGridError::InvalidCellRadius(cell_radius));
    }
    let bb = region.bbox();
    let (cx, cy) = (0.5 * (bb.min_x + bb.max_x), 0.5 * (bb.min_y + bb.max_y));
    let dx = 3f64.sqrt() * cell_radius;
    let dy = 1.5 * cell_radius;
    let row_lo = ((bb.min_y - cy) / dy).floor() as i64 - 1;
    let row_hi = ((bb.max_y - cy) / dy).ceil() as i64 + 1;
    let col_lo = ((bb.min_x - cx) / dx).floor() as i64 - 1;
    let col_hi = ((bb.max_x - cx) / dx).ceil() as i64 + 1;
    let estimate = (row_hi - row_lo + 1) as f64 * (col_hi - col_lo + 1) as f64;
    if estimate > 4.0 * MAX_CELLS as f64 {
        return Err(HexGridError::TooManyCells);
    }
    let boundary = region.boundary();
    let mut cells = Vec::new();
    for row in row_lo..=row_hi {
        let offset = if row.rem_euclid(2) == 1 {
            0.5 * dx
        } else {
            0.0
        };
        let y = cy + dy * row as f64;
        for col in col_lo..=col_hi {
            let x = cx + dx * col as f64 + offset;
            let cell = HexCell::pointy(cells.len(), (x, y), cell_radius);
            if rings_intersect_with_bbox(&cell.vertices, &cell.bbox, boundary, &bb) {
                cells.push(cell);
                if cells.len() > MAX_CELLS {
                    return Err(HexGridError::TooManyCells);
                }
            }
        }
    }
    Ok(HexGrid::assemble(cells, cell_radius, region.clone()))
}

/// Closed-set intersection of one cell with one footprint.
pub fn cell_intersects(cell: &HexCell, poly: &FootprintPolygon) -> bool {
    poly.planar_rings_deg().iter().any(|ring| {
        !ring.is_empty()
            && rings_intersect_with_bbox(&cell.vertices, &cell.bbox, ring, &BBox::of(ring))
    })
}

/// Covered cell count and covered fraction for footprints at one epoch.
pub fn instantaneous_coverage(grid: &HexGrid, footprints: &[FootprintPolygon]) -> (usize, f64) {
    let covered = grid
        .covered_flags(footprints)
        .iter()
        .filter(|&&c| c)
        .count();
    (covered, ratio(covered, grid.len()))
}

fn ratio(covered: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        covered as f64 / total as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageSample {
    pub t: f64,
    pub covered: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub instantaneous: Vec<CoverageSample>,
    pub total_cells: usize,
    pub average: f64,
}

impl CoverageReport {
    pub fn from_samples(instantaneous: Vec<CoverageSample>, total_cells: usize) -> Self {
        let average = if instantaneous.is_empty() {
            0.0
        } else {
            instantaneous.iter().map(|s| s.ratio).sum::<f64>() / instantaneous.len() as f64
        };
        Self {
            instantaneous,
            total_cells,
            average,
        }
    }

    /// CSV `t_s,covered,total,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,covered,total,ratio\n");
        for s in &self.instantaneous {
            out.push_str(&format!(
                "{:.6},{},{},{:.12}\n",
                s.t, s.covered, self.total_cells, s.ratio
            ));
        }
        out
    }
}

/// Instantaneous coverage at each epoch and their arithmetic mean.
///
/// Epochs are evaluated in parallel; the report keeps the input order and the
/// mean is accumulated sequentially, so the result does not depend on the
/// thread count.
pub fn average_coverage<F>(
    grid: &HexGrid,
    footprints_at: F,
    epochs: &[f64],
) -> Result<CoverageReport, HexGridError>
where
    F: Fn(f64) -> Result<Vec<FootprintPolygon>, SensorError> + Sync,
{
    if epochs.is_empty() {
        return Err(HexGridError::NoEpochs);
    }
    let samples = epochs
        .par_iter()
        .map(|&t| {
            let fps = footprints_at(t)?;
            let (covered, ratio) = instantaneous_coverage(grid, &fps);
            Ok(CoverageSample { t, covered, ratio })
        })
        .collect::<Result<Vec<_>, SensorError>>()?;
    Ok(CoverageReport::from_samples(samples, grid.len()))
}
