//! Planar polygon predicates in the lon/lat degree plane.
//!
//! All predicates use closed-set semantics: touching counts as intersecting,
//! with touching resolved to within [`TOUCH_EPS`] degrees.

pub type Point = (f64, f64);

/// Gap (deg) below which two shapes count as touching.
pub const TOUCH_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn of(points: &[Point]) -> BBox {
        let mut b = BBox {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for &(x, y) in points {
            b.min_x = b.min_x.min(x);
            b.min_y = b.min_y.min(y);
            b.max_x = b.max_x.max(x);
            b.max_y = b.max_y.max(y);
        }
        b
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min_x <= o.max_x
            && o.min_x <= self.max_x
            && self.min_y <= o.max_y
            && o.min_y <= self.max_y
    }

    pub fn overlaps_within(&self, o: &BBox, eps: f64) -> bool {
        self.min_x - eps <= o.max_x
            && o.min_x - eps <= self.max_x
            && self.min_y - eps <= o.max_y
            && o.min_y - eps <= self.max_y
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Closed segment intersection, including collinear overlap and endpoint touch.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Segments intersect or pass within `eps` of each other.
pub fn segments_within(p1: Point, p2: Point, q1: Point, q2: Point, eps: f64) -> bool {
    segments_intersect(p1, p2, q1, q2)
        || point_segment_distance(p1, q1, q2) <= eps
        || point_segment_distance(p2, q1, q2) <= eps
        || point_segment_distance(q1, p1, p2) <= eps
        || point_segment_distance(q2, p1, p2) <= eps
}

/// Edges of a ring with implicit closure. A two-point ring is a single segment.
pub fn edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = ring.len();
    let count = match n {
        0 | 1 => 0,
        2 => 1,
        _ => n,
    };
    (0..count).map(move |k| (ring[k], ring[(k + 1) % n]))
}

/// Even-odd point containment. Points exactly on the boundary may go either
/// way; callers pair this with an edge test.
pub fn point_in_ring(p: Point, ring: &[Point]) -> bool {
    if ring.len() < 3 {
        return false;
    }
    let mut inside = false;
    let n = ring.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = ring[i];
        let (xj, yj) = ring[j];
        if (yi > p.1) != (yj > p.1) && p.0 < (xj - xi) * (p.1 - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Closed-set intersection of two rings: bounding-box reject, then
/// containment of a vertex of either ring in the other, then any edge pair
/// crossing or touching.
pub fn rings_intersect(a: &[Point], b: &[Point]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    rings_intersect_with_bbox(a, &BBox::of(a), b, &BBox::of(b))
}

pub fn rings_intersect_with_bbox(a: &[Point], abox: &BBox, b: &[Point], bbox: &BBox) -> bool {
    if !abox.overlaps_within(bbox, TOUCH_EPS) {
        return false;
    }
    if point_in_ring(a[0], b) || point_in_ring(b[0], a) {
        return true;
    }
    for (p1, p2) in edges(a) {
        let ebox = BBox::of(&[p1, p2]);
        if !ebox.overlaps_within(bbox, TOUCH_EPS) {
            continue;
        }
        for (q1, q2) in edges(b) {
            if ebox.overlaps_within(&BBox::of(&[q1, q2]), TOUCH_EPS)
                && segments_within(p1, p2, q1, q2, TOUCH_EPS)
            {
                return true;
            }
        }
    }
    false
}

/// Signed shoelace area (positive for counter-clockwise rings).
pub fn signed_area(ring: &[Point]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    0.5 * edges(ring).map(|(p, q)| p.0 * q.1 - q.0 * p.1).sum::<f64>()
}

/// True if no two non-adjacent edges of the ring intersect and no adjacent
/// edges fold back onto each other.
pub fn ring_is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for k in 0..n {
        let prev = ring[(k + n - 1) % n];
        let cur = ring[k];
        let next = ring[(k + 1) % n];
        if cur == next {
            return false;
        }
        // adjacent edges folding back over each other
        let dot = (prev.0 - cur.0) * (next.0 - cur.0) + (prev.1 - cur.1) * (next.1 - cur.1);
        if orient(prev, cur, next) == 0.0 && dot > 0.0 {
            return false;
        }
    }
    let e: Vec<(Point, Point)> = edges(ring).collect();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(e[i].0, e[i].1, e[j].0, e[j].1) {
                return false;
            }
        }
    }
    true
}

/// Sutherland-Hodgman clip of a ring against the half-plane `x <= x0`
/// (`keep_below`) or `x >= x0`.
fn clip_vertical(ring: &[Point], x0: f64, keep_below: bool) -> Vec<Point> {
    let inside = |p: Point| if keep_below { p.0 <= x0 } else { p.0 >= x0 };
    let cross = |p: Point, q: Point| {
        let t = (x0 - p.0) / (q.0 - p.0);
        (x0, p.1 + t * (q.1 - p.1))
    };
    let mut out = Vec::with_capacity(ring.len() + 2);
    let n = ring.len();
    for k in 0..n {
        let cur = ring[k];
        let prev = ring[(k + n - 1) % n];
        match (inside(prev), inside(cur)) {
            (true, true) => out.push(cur),
            (true, false) => out.push(cross(prev, cur)),
            (false, true) => {
                out.push(cross(prev, cur));
                out.push(cur);
            }
            (false, false) => {}
        }
    }
    out
}

fn clip_segment(seg: &[Point], lo: f64, hi: f64) -> Option<Vec<Point>> {
    let (mut p, mut q) = (seg[0], seg[1]);
    if p.0 > q.0 {
        std::mem::swap(&mut p, &mut q);
    }
    if q.0 < lo || p.0 > hi {
        return None;
    }
    let at = |x: f64| {
        if q.0 == p.0 {
            (x, p.1)
        } else {
            (x, p.1 + (x - p.0) / (q.0 - p.0) * (q.1 - p.1))
        }
    };
    let a = if p.0 < lo { at(lo) } else { p };
    let b = if q.0 > hi { at(hi) } else { q };
    Some(vec![a, b])
}

/// Splits a longitude-continuous ring that may extend past ±180° into rings
/// whose longitudes all lie in [-180, 180].
pub fn split_antimeridian(ring: &[Point]) -> Vec<Vec<Point>> {
    let bb = BBox::of(ring);
    if bb.min_x >= -180.0 && bb.max_x <= 180.0 {
        return vec![ring.to_vec()];
    }
    let mut pieces = Vec::new();
    // window [k·360 - 180, k·360 + 180] shifted back by k·360
    let k_min = ((bb.min_x + 180.0) / 360.0).floor() as i64;
    let k_max = ((bb.max_x - 180.0) / 360.0).ceil() as i64;
    for k in k_min..=k_max {
        let lo = k as f64 * 360.0 - 180.0;
        let hi = lo + 360.0;
        let piece = if ring.len() == 2 {
            match clip_segment(ring, lo, hi) {
                Some(s) => s,
                None => continue,
            }
        } else {
            let c = clip_vertical(&clip_vertical(ring, hi, true), lo, false);
            if c.len() < 3 || signed_area(&c) == 0.0 {
                continue;
            }
            c
        };
        let shift = k as f64 * 360.0;
        pieces.push(
            piece
                .into_iter()
                .map(|(x, y)| ((x - shift).clamp(-180.0, 180.0), y))
                .collect(),
        );
    }
    pieces
}
