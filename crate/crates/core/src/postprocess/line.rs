use crate::grid::Point;

/// Integer Bresenham rasterization from `a` to `b`, both endpoints
/// included. Consecutive points are 8-adjacent.
pub fn bresenham_line(a: Point, b: Point) -> Vec<Point> {
    let (mut x, mut y) = (a.x as i64, a.y as i64);
    let (x1, y1) = (b.x as i64, b.y as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::with_capacity(dx.max(-dy) as usize + 1);
    loop {
        out.push(Point::new(x as u32, y as u32));
        if x == x1 && y == y1 {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}
