//! Binary morphology and geometry on masks: disk dilation/erosion, hole
//! filling, connected components, convex hulls, centroids and bounds.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::frame::Mask;
use crate::metrics::BBox;

/// Offsets of a rasterized disk: `dx² + dy² <= r²`.
pub fn disk_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let r2 = (radius * radius) as isize;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r2 {
                out.push((dy, dx));
            }
        }
    }
    out
}

fn apply_offsets(mask: &Mask, offsets: &[(isize, isize)], dilate: bool) -> Mask {
    let (h, w) = mask.dim();
    let mut out = Array2::from_elem((h, w), !dilate);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = !dilate;
            for &(dy, dx) in offsets {
                let yy = y + dy;
                let xx = x + dx;
                // out-of-bounds neighbors read as background
                let v = if yy >= 0 && yy < h as isize && xx >= 0 && xx < w as isize {
                    mask[[yy as usize, xx as usize]]
                } else {
                    false
                };
                if dilate && v {
                    acc = true;
                    break;
                }
                if !dilate && !v {
                    acc = false;
                    break;
                }
            }
            out[[y as usize, x as usize]] = acc;
        }
    }
    out
}

/// Dilate with a disk structuring element.
pub fn dilate_disk(mask: &Mask, radius: usize) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    apply_offsets(mask, &disk_offsets(radius), true)
}

/// Erode with a disk structuring element (out-of-bounds reads as background).
pub fn erode_disk(mask: &Mask, radius: usize) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    apply_offsets(mask, &disk_offsets(radius), false)
}

/// Fill enclosed holes: background regions (4-connected) not reachable from
/// the border become foreground.
pub fn fill_holes(mask: &Mask) -> Mask {
    let (h, w) = mask.dim();
    let mut reachable = Array2::from_elem((h, w), false);
    let mut stack = Vec::new();
    for y in 0..h {
        for x in [0, w - 1] {
            if !mask[[y, x]] && !reachable[[y, x]] {
                reachable[[y, x]] = true;
                stack.push((y, x));
            }
        }
    }
    for x in 0..w {
        for y in [0, h - 1] {
            if !mask[[y, x]] && !reachable[[y, x]] {
                reachable[[y, x]] = true;
                stack.push((y, x));
            }
        }
    }
    while let Some((y, x)) = stack.pop() {
        let push = |yy: usize, xx: usize, reachable: &mut Array2<bool>, stack: &mut Vec<(usize, usize)>| {
            if !mask[[yy, xx]] && !reachable[[yy, xx]] {
                reachable[[yy, xx]] = true;
                stack.push((yy, xx));
            }
        };
        if y > 0 {
            push(y - 1, x, &mut reachable, &mut stack);
        }
        if y + 1 < h {
            push(y + 1, x, &mut reachable, &mut stack);
        }
        if x > 0 {
            push(y, x - 1, &mut reachable, &mut stack);
        }
        if x + 1 < w {
            push(y, x + 1, &mut reachable, &mut stack);
        }
    }
    Array2::from_shape_fn((h, w), |(y, x)| mask[[y, x]] || !reachable[[y, x]])
}

/// Label 8-connected foreground components in raster order of first
/// encounter. Returns the label grid (0 = background) and component count.
pub fn connected_components(mask: &Mask) -> (Array2<u32>, usize) {
    let (h, w) = mask.dim();
    let mut labels = Array2::zeros((h, w));
    let mut next = 0u32;
    let mut stack = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if mask[[y, x]] && labels[[y, x]] == 0 {
                next += 1;
                labels[[y, x]] = next;
                stack.push((y, x));
                while let Some((cy, cx)) = stack.pop() {
                    for dy in -1isize..=1 {
                        for dx in -1isize..=1 {
                            if dy == 0 && dx == 0 {
                                continue;
                            }
                            let ny = cy as isize + dy;
                            let nx = cx as isize + dx;
                            if ny < 0 || nx < 0 || ny >= h as isize || nx >= w as isize {
                                continue;
                            }
                            let (ny, nx) = (ny as usize, nx as usize);
                            if mask[[ny, nx]] && labels[[ny, nx]] == 0 {
                                labels[[ny, nx]] = next;
                                stack.push((ny, nx));
                            }
                        }
                    }
                }
            }
        }
    }
    (labels, next as usize)
}

/// Keep only the largest 8-connected component. Equal areas tie-break toward
/// the component whose first raster pixel is smallest in (row, col) order,
/// which is the lowest label.
pub fn largest_component(mask: &Mask) -> Result<Mask> {
    let (labels, count) = connected_components(mask);
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    let mut areas = vec![0usize; count + 1];
    for &l in labels.iter() {
        if l > 0 {
            areas[l as usize] += 1;
        }
    }
    let best = (1..=count)
        .max_by(|&a, &b| areas[a].cmp(&areas[b]).then(b.cmp(&a)))
        .expect("count >= 1");
    Ok(labels.mapv(|l| l as usize == best))
}

/// Number of foreground pixels.
pub fn area(mask: &Mask) -> usize {
    mask.iter().filter(|v| **v).count()
}

/// Centroid `(x, y)` of the foreground (mean of pixel coordinates).
pub fn centroid(mask: &Mask) -> Result<(f64, f64)> {
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut n = 0usize;
    for ((y, x), &v) in mask.indexed_iter() {
        if v {
            sx += x as f64;
            sy += y as f64;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok((sx / n as f64, sy / n as f64))
}

/// Tight axis-aligned bounding box of the foreground, inclusive pixel
/// coordinates.
pub fn bounds(mask: &Mask) -> Result<BBox> {
    let mut x_min = i64::MAX;
    let mut y_min = i64::MAX;
    let mut x_max = i64::MIN;
    let mut y_max = i64::MIN;
    for ((y, x), &v) in mask.indexed_iter() {
        if v {
            x_min = x_min.min(x as i64);
            y_min = y_min.min(y as i64);
            x_max = x_max.max(x as i64);
            y_max = y_max.max(y as i64);
        }
    }
    if x_min == i64::MAX {
        return Err(Error::EmptyMask);
    }
    BBox::new(x_min, y_min, x_max, y_max)
}

/// Convex hull vertices of integer points (Andrew's monotone chain).
///
/// Vertices come back in counterclockwise order in the algebraic sense of
/// the raw `(x, y)` coordinates (positive signed area). Collinear input
/// degenerates to the two extreme points; a single point to itself.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Rasterize the filled convex hull of `(x, y)` points into a mask of the
/// given `(h, w)` shape. Collinear inputs inflate to a 1-px-thick segment.
pub fn hull_mask(points: &[(i64, i64)], shape: (usize, usize)) -> Result<Mask> {
    if points.is_empty() {
        return Err(Error::EmptyMask);
    }
    let (h, w) = shape;
    let hull = convex_hull(points);
    let mut mask = Array2::from_elem((h, w), false);

    let set = |x: i64, y: i64, mask: &mut Mask| {
        if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
            mask[[y as usize, x as usize]] = true;
        }
    };

    if hull.len() <= 2 {
        // degenerate: single point or 1-px-thick segment
        let (a, b) = (hull[0], *hull.last().expect("nonempty hull"));
        for (x, y) in bresenham(a, b) {
            set(x, y, &mut mask);
        }
        return Ok(mask);
    }

    // Inclusive scan: a pixel is inside the convex polygon iff every edge
    // cross product is non-negative (vertices are CCW; exact in i64).
    let xs: Vec<i64> = hull.iter().map(|p| p.0).collect();
    let ys: Vec<i64> = hull.iter().map(|p| p.1).collect();
    let x0 = xs.iter().min().unwrap().max(&0).to_owned();
    let x1 = xs.iter().max().unwrap().min(&(w as i64 - 1)).to_owned();
    let y0 = ys.iter().min().unwrap().max(&0).to_owned();
    let y1 = ys.iter().max().unwrap().min(&(h as i64 - 1)).to_owned();
    let m = hull.len();
    for y in y0..=y1 {
        for x in x0..=x1 {
            let mut inside = true;
            for i in 0..m {
                let a = hull[i];
                let b = hull[(i + 1) % m];
                let cross = (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0);
                if cross < 0 {
                    inside = false;
                    break;
                }
            }
            if inside {
                mask[[y as usize, x as usize]] = true;
            }
        }
    }
    Ok(mask)
}

fn bresenham(a: (i64, i64), b: (i64, i64)) -> Vec<(i64, i64)> {
    let (mut x0, mut y0) = a;
    let (x1, y1) = b;
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::new();
    loop {
        out.push((x0, y0));
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask_from(rows: &[&str]) -> Mask {
        let h = rows.len();
        let w = rows[0].len();
        Array2::from_shape_fn((h, w), |(y, x)| rows[y].as_bytes()[x] == b'#')
    }

    #[test]
    fn fill_holes_closes_interior() {
        let m = mask_from(&["#####", "#...#", "#.#.#", "#...#", "#####"]);
        let filled = fill_holes(&m);
        assert_eq!(area(&filled), 25);
        // background touching the border stays background
        let open = mask_from(&["#####", "#...#", "#...#", "#####", "....."]);
        let filled = fill_holes(&open);
        assert_eq!(filled[[4, 2]], false);
        assert_eq!(filled[[1, 2]], true);
    }

    #[test]
    fn largest_component_keeps_biggest() {
        let m = mask_from(&[
            "##........",
            "##........",
            "##........",
            ".......#..",
            "..........",
        ]);
        let big = largest_component(&m).unwrap();
        assert_eq!(area(&big), 6);
        assert!(!big[[3, 7]]);
    }

    #[test]
    fn largest_component_tie_breaks_lexicographically() {
        // two 2-px components; the one whose first pixel is smaller in
        // (row, col) order survives
        let m = mask_from(&[".##.......", "..........", ".......##."]);
        let kept = largest_component(&m).unwrap();
        assert!(kept[[0, 1]] && kept[[0, 2]]);
        assert!(!kept[[2, 7]]);
    }

    #[test]
    fn empty_mask_errors() {
        let m = Array2::from_elem((4, 4), false);
        assert!(largest_component(&m).is_err());
        assert!(centroid(&m).is_err());
        assert!(bounds(&m).is_err());
    }

    #[test]
    fn centroid_and_bounds_cases() {
        let mut m = Array2::from_elem((30, 30), false);
        m[[20, 10]] = true;
        assert_eq!(centroid(&m).unwrap(), (10.0, 20.0));
        let b = bounds(&m).unwrap();
        assert_eq!((b.x_min, b.y_min, b.x_max, b.y_max), (10, 20, 10, 20));

        // 3x3 solid square at rows/cols 0..=2 -> centroid (1, 1)
        let sq = mask_from(&["###", "###", "###"]);
        assert_eq!(centroid(&sq).unwrap(), (1.0, 1.0));

        // L-shape: pixels (x,y): (0,0),(0,1),(0,2),(1,2)
        let l = mask_from(&["#..", "#..", "##."]);
        let (cx, cy) = centroid(&l).unwrap();
        assert!((cx - 0.25).abs() < 1e-12);
        assert!((cy - 1.25).abs() < 1e-12);
    }

    #[test]
    fn dilation_grows_disk() {
        let mut m = Array2::from_elem((21, 21), false);
        m[[10, 10]] = true;
        let d = dilate_disk(&m, 2);
        assert_eq!(area(&d), disk_offsets(2).len());
        assert!(d[[8, 10]] && d[[10, 8]] && d[[12, 10]]);
        assert!(!d[[8, 8]]); // corner excluded from the r=2 disk
    }

    #[test]
    fn hull_contains_inputs_and_is_idempotent() {
        let pts = vec![(0, 0), (10, 0), (10, 10), (0, 10), (5, 5)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&(5, 5)));
        let again = convex_hull(&hull);
        let mut a = hull.clone();
        let mut b = again.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        // triangle contains its three corners
        let tri = vec![(2, 2), (12, 3), (6, 14)];
        let mask = hull_mask(&tri, (20, 20)).unwrap();
        for (x, y) in tri {
            assert!(mask[[y as usize, x as usize]]);
        }
    }

    #[test]
    fn hull_signed_area_is_positive() {
        let pts = vec![(1, 1), (9, 2), (8, 9), (2, 8), (5, 5), (3, 2)];
        let hull = convex_hull(&pts);
        let mut area2 = 0i64;
        for i in 0..hull.len() {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            area2 += a.0 * b.1 - b.0 * a.1;
        }
        assert!(area2 > 0, "hull not CCW: area2 = {area2}");
    }

    #[test]
    fn collinear_hull_inflates_to_segment() {
        let pts = vec![(1, 1), (3, 3), (5, 5), (7, 7)];
        let mask = hull_mask(&pts, (10, 10)).unwrap();
        assert_eq!(area(&mask), 7);
        for (x, y) in pts {
            assert!(mask[[y as usize, x as usize]]);
        }
        let single = hull_mask(&[(4, 2)], (10, 10)).unwrap();
        assert_eq!(area(&single), 1);
        assert!(single[[2, 4]]);
    }

    proptest! {
        #[test]
        fn hull_mask_contains_every_input_point(
            pts in proptest::collection::vec((0i64..40, 0i64..40), 1..25)
        ) {
            let mask = hull_mask(&pts, (40, 40)).unwrap();
            for (x, y) in pts {
                prop_assert!(mask[[y as usize, x as usize]], "missing ({x},{y})");
            }
        }

        #[test]
        fn components_partition_foreground(
            seed in proptest::collection::vec(0u8..2, 64)
        ) {
            let m = Array2::from_shape_fn((8, 8), |(y, x)| seed[y * 8 + x] == 1);
            let (labels, count) = connected_components(&m);
            let mut seen = vec![0usize; count + 1];
            for ((y, x), &l) in labels.indexed_iter() {
                prop_assert_eq!(l > 0, m[[y, x]]);
                if l > 0 { seen[l as usize] += 1; }
            }
            for c in 1..=count {
                prop_assert!(seen[c] > 0);
            }
        }
    }
}
