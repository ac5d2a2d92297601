//! Greedy continuity-based pairing of edge terminals at an ambiguity.
//!
//! Each terminal gets an approach direction from a line fit over its last
//! few points. A pair of terminals costs
//! `angle_weight * mismatch + distance_weight * distance`, where `mismatch`
//! is 0 for two edges continuing straight through the ambiguity and π for
//! two edges arriving from the same side. Pairs are accepted cheapest first
//! from a ranking fixed up front; each accepted pair is bridged with a
//! straight line between the connection pixels and the edges are merged.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::line::bresenham_line;
use crate::ambiguity::AmbiguityId;
use crate::error::{Error, Result};
use crate::grid::{BinaryImage, Point};
use crate::trace::{merge_with_case, Edge, EdgeId, MergeCase, TraceResult};

/// Weights and threshold of the connection cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCostParams {
    /// Number of terminal points used for the direction fit.
    pub fit_length: usize,
    /// Weight of the angle mismatch (per radian).
    pub angle_weight: f64,
    /// Weight of the Euclidean distance between connection pixels (per pixel).
    pub distance_weight: f64,
    /// Pairs are accepted only with a cost strictly below this.
    pub cost_threshold: f64,
}

impl Default for ConnectionCostParams {
    fn default() -> Self {
        Self {
            fit_length: 5,
            angle_weight: 1.0,
            distance_weight: 0.25,
            cost_threshold: PI / 2.0,
        }
    }
}

impl ConnectionCostParams {
    pub fn validate(&self) -> Result<()> {
        let weights_ok = [self.angle_weight, self.distance_weight]
            .iter()
            .all(|w| w.is_finite() && *w >= 0.0);
        if self.fit_length < 2 {
            return Err(Error::InvalidParameter(format!("fit length {} is below 2", self.fit_length)));
        }
        if !weights_ok || (self.angle_weight == 0.0 && self.distance_weight == 0.0) {
            return Err(Error::InvalidParameter(
                "weights must be finite, non-negative and not both zero".into(),
            ));
        }
        if self.cost_threshold.is_nan() || self.cost_threshold <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cost threshold {} must be positive",
                self.cost_threshold
            )));
        }
        Ok(())
    }

    fn cost(&self, a: &TerminalFit, b: &TerminalFit) -> f64 {
        let mut diff = (a.angle - b.angle).abs() % (2.0 * PI);
        if diff > PI {
            diff = 2.0 * PI - diff;
        }
        let mismatch = PI - diff;
        let dx = a.point.x as f64 - b.point.x as f64;
        let dy = a.point.y as f64 - b.point.y as f64;
        self.angle_weight * mismatch + self.distance_weight * dx.hypot(dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeEnd {
    Start,
    End,
}

/// One end of one edge. Orders by edge id, then start before end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terminal {
    pub edge: EdgeId,
    pub end: EdgeEnd,
}

/// An accepted pairing of two terminals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub a: Terminal,
    pub b: Terminal,
    pub cost: f64,
}

/// Direction of an edge at one of its ends, from a total-least-squares line
/// through the last `fit_length` points (fewer if the edge is shorter).
///
/// The angle is in `(-π, π]` with image axes (x right, y down) and points
/// along the traversal toward the terminal, so a horizontal edge ending on
/// its right gives 0 and a vertical edge ending at the bottom gives π/2.
pub fn endpoint_angle(edge: &Edge, end: EdgeEnd, fit_length: usize) -> Result<f64> {
    let n = fit_length.max(2).min(edge.len());
    if n < 2 {
        return Err(Error::DegenerateFit);
    }
    // fit points ordered from the inside toward the terminal
    let fit: Vec<(f64, f64)> = match end {
        EdgeEnd::End => edge.points[edge.len() - n..].iter(),
        EdgeEnd::Start => edge.points[..n].iter(),
    }
    .map(|p| (p.x as f64, p.y as f64))
    .collect();
    let fit: Vec<(f64, f64)> = match end {
        EdgeEnd::End => fit,
        EdgeEnd::Start => fit.into_iter().rev().collect(),
    };

    let len = fit.len() as f64;
    let (mx, my) = fit
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x / len, sy + y / len));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in &fit {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx + syy == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (mut ux, mut uy) = (theta.cos(), theta.sin());

    let terminal = fit[fit.len() - 1];
    let inner = fit[0];
    let mut along = (terminal.0 - inner.0) * ux + (terminal.1 - inner.1) * uy;
    if along == 0.0 {
        along = (terminal.0 - mx) * ux + (terminal.1 - my) * uy;
    }
    if along < 0.0 {
        ux = -ux;
        uy = -uy;
    }
    let mut angle = uy.atan2(ux);
    if angle <= -PI {
        angle += 2.0 * PI;
    }
    Ok(angle)
}

struct TerminalFit {
    terminal: Terminal,
    point: Point,
    angle: f64,
}

fn terminals_at(edges: &[Edge], result_ambiguity: impl Fn(Point) -> bool) -> Vec<(Terminal, Point)> {
    let mut out = Vec::new();
    for (id, edge) in edges.iter().enumerate() {
        if let Some(p) = edge.first().filter(|&p| result_ambiguity(p)) {
            out.push((Terminal { edge: id, end: EdgeEnd::Start }, p));
        }
        if let Some(p) = edge.last().filter(|&p| result_ambiguity(p)) {
            out.push((Terminal { edge: id, end: EdgeEnd::End }, p));
        }
    }
    out
}

fn plan(edges: &[Edge], in_ambiguity: impl Fn(Point) -> bool, params: &ConnectionCostParams) -> Result<Vec<Connection>> {
    let mut fits = Vec::new();
    for (terminal, point) in terminals_at(edges, in_ambiguity) {
        let angle = endpoint_angle(&edges[terminal.edge], terminal.end, params.fit_length)?;
        fits.push(TerminalFit { terminal, point, angle });
    }
    let mut candidates = Vec::new();
    for i in 0..fits.len() {
        for j in i + 1..fits.len() {
            let cost = params.cost(&fits[i], &fits[j]);
            if cost < params.cost_threshold {
                candidates.push((cost, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut consumed = vec![false; fits.len()];
    let mut accepted = Vec::new();
    for (cost, i, j) in candidates {
        if consumed[i] || consumed[j] {
            continue;
        }
        consumed[i] = true;
        consumed[j] = true;
        accepted.push(Connection {
            a: fits[i].terminal,
            b: fits[j].terminal,
            cost,
        });
    }
    Ok(accepted)
}

/// The pairs that [`connect_edges_at_ambiguity`] would accept, in
/// acceptance order.
pub fn plan_connections(
    result: &TraceResult,
    ambiguity: AmbiguityId,
    params: &ConnectionCostParams,
) -> Result<Vec<Connection>> {
    params.validate()?;
    if result.ambiguities.get(ambiguity).is_none() {
        return Err(Error::UnknownAmbiguity(ambiguity));
    }
    plan(&result.edges, |p| result.ambiguities.id_at(p) == Some(ambiguity), params)
}

/// Applies accepted connections to an edge list, bridging gaps on the
/// image. Returns the compacted edge list.
fn apply(edges: Vec<Edge>, connections: &[Connection], image: &mut BinaryImage) -> Vec<Edge> {
    let n = edges.len();
    let mut store: Vec<Option<Vec<Point>>> = edges.into_iter().map(|e| Some(e.points)).collect();
    // which terminal currently sits at the first and last position of a slot
    let mut ends: Vec<(Terminal, Terminal)> = (0..n)
        .map(|e| (Terminal { edge: e, end: EdgeEnd::Start }, Terminal { edge: e, end: EdgeEnd::End }))
        .collect();
    let mut owner: Vec<usize> = (0..n).collect();
    let find = |owner: &mut Vec<usize>, mut x: usize| {
        while owner[x] != x {
            owner[x] = owner[owner[x]];
            x = owner[x];
        }
        x
    };

    for c in connections {
        let (sa, sb) = (find(&mut owner, c.a.edge), find(&mut owner, c.b.edge));
        if sa == sb {
            // both terminals are the two ends of one edge: close it
            let points = store[sa].as_mut().expect("live slot");
            let (first, last) = (points[0], points[points.len() - 1]);
            let bridge = bresenham_line(last, first);
            for &p in &bridge {
                image.set(p, true);
            }
            points.extend_from_slice(&bridge[1..]);
            continue;
        }
        let mut x = store[sa].take().expect("live slot");
        let mut ex = ends[sa];
        if ex.0 == c.a {
            x.reverse();
            ex = (ex.1, ex.0);
        }
        let mut y = store[sb].take().expect("live slot");
        let mut ey = ends[sb];
        if ey.1 == c.b {
            y.reverse();
            ey = (ey.1, ey.0);
        }
        let bridge = bresenham_line(x[x.len() - 1], y[0]);
        for &p in &bridge {
            image.set(p, true);
        }
        x.extend_from_slice(&bridge[1..]);
        let merged = merge_with_case(&x, &y, MergeCase::EndStart);
        let (keep, retire) = (sa.min(sb), sa.max(sb));
        store[keep] = Some(merged);
        ends[keep] = (ex.0, ey.1);
        owner[retire] = keep;
    }
    store.into_iter().flatten().map(Edge::new).collect()
}

/// Connects edge terminals at one ambiguity by greedy cost ranking.
///
/// Terminals are the first or last points of edges that lie in the
/// ambiguity; an edge with both ends there may close on itself. Unpaired
/// terminals stay attached. Bridge pixels are set on the working image but
/// are not added to the ambiguity registry.
pub fn connect_edges_at_ambiguity(
    result: &TraceResult,
    ambiguity: AmbiguityId,
    params: &ConnectionCostParams,
) -> Result<TraceResult> {
    let connections = plan_connections(result, ambiguity, params)?;
    if connections.is_empty() {
        return Ok(result.clone());
    }
    let mut image = result.image.clone();
    let edges = apply(result.edges.clone(), &connections, &mut image);
    Ok(TraceResult::from_parts(image, edges, result.ambiguities.clone()))
}

/// Runs [`connect_edges_at_ambiguity`] for every ambiguity in id order.
pub fn connect_all_ambiguities(result: &TraceResult, params: &ConnectionCostParams) -> Result<TraceResult> {
    params.validate()?;
    let mut image = result.image.clone();
    let mut edges = result.edges.clone();
    for amb in result.ambiguities.iter() {
        let connections = plan(&edges, |p| result.ambiguities.id_at(p) == Some(amb.id), params)?;
        if !connections.is_empty() {
            edges = apply(edges, &connections, &mut image);
        }
    }
    Ok(TraceResult::from_parts(image, edges, result.ambiguities.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check;
    use crate::trace::trace_all;

    fn edge(list: &[(u32, u32)]) -> Edge {
        Edge::new(list.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    /// Orientation-free oracle: the angle minimizing the summed squared
    /// perpendicular distances, found by dense scan plus refinement.
    fn brute_force_line_angle(points: &[(f64, f64)]) -> f64 {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let residual = |t: f64| {
            points
                .iter()
                .map(|&(x, y)| {
                    let d = -(x - mx) * t.sin() + (y - my) * t.cos();
                    d * d
                })
                .sum::<f64>()
        };
        let mut best = 0.0;
        let steps = 20_000;
        for k in 0..steps {
            let t = PI * k as f64 / steps as f64;
            if residual(t) < residual(best) {
                best = t;
            }
        }
        let (mut lo, mut hi) = (best - PI / steps as f64, best + PI / steps as f64);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if residual(m1) < residual(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        (lo + hi) / 2.0
    }

    #[test]
    fn axis_aligned_angles() {
        let h = edge(&[(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(endpoint_angle(&h, EdgeEnd::End, 5).unwrap(), 0.0);
        assert!((endpoint_angle(&h, EdgeEnd::Start, 5).unwrap() - PI).abs() < 1e-12);
        let v = edge(&[(0, 0), (0, 1), (0, 2)]);
        assert!((endpoint_angle(&v, EdgeEnd::End, 5).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((endpoint_angle(&v, EdgeEnd::Start, 5).unwrap() + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn staircase_is_forty_five_degrees() {
        let stairs = edge(&[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]);
        let got = endpoint_angle(&stairs, EdgeEnd::End, 5).unwrap();
        assert!((got - PI / 4.0).abs() < 1e-9, "{got}");
        let pts: Vec<(f64, f64)> = stairs.points.iter().map(|p| (p.x as f64, p.y as f64)).collect();
        let oracle = brute_force_line_angle(&pts);
        assert!((oracle - PI / 4.0).abs() < 1e-6, "{oracle}");
    }

    #[test]
    fn fit_matches_brute_force_on_irregular_tails() {
        let e = edge(&[(0, 0), (1, 0), (2, 1), (3, 1), (4, 1), (5, 2), (6, 2), (7, 3)]);
        for n in 2..=8 {
            let got = endpoint_angle(&e, EdgeEnd::End, n).unwrap();
            let pts: Vec<(f64, f64)> = e.points[8 - n..].iter().map(|p| (p.x as f64, p.y as f64)).collect();
            let line = brute_force_line_angle(&pts);
            // same line up to orientation
            let diff = (got - line).rem_euclid(PI);
            assert!(diff.min(PI - diff) < 1e-6, "n={n}: {got} vs {line}");
            // and oriented toward the terminal, which lies right and down
            assert!(got.cos() > 0.0);
        }
    }

    #[test]
    fn fit_length_is_clamped() {
        let e = edge(&[(4, 4), (5, 4)]);
        assert_eq!(endpoint_angle(&e, EdgeEnd::End, 50).unwrap(), 0.0);
        assert!(matches!(
            endpoint_angle(&edge(&[(1, 1)]), EdgeEnd::End, 5),
            Err(Error::DegenerateFit)
        ));
    }

    #[test]
    fn collinear_arms_join_across_a_junction() {
        let image = BinaryImage::from_ascii(
            ".......
             #######
             ...#...
             ...#...",
        );
        let r = trace_all(&image);
        assert_eq!(r.edges.len(), 3);
        let plan = plan_connections(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(plan[0].cost, 0.0);
        let out = connect_edges_at_ambiguity(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(out.edges.len(), 2);
        let joined = out.edges.iter().find(|e| e.len() == 7).expect("joined bar");
        assert_eq!(joined.points.iter().filter(|p| p.y == 1).count(), 7);
        assert!(check::coverage(&out).is_empty());
    }

    #[test]
    fn crossing_lines_pair_opposite_arms() {
        let image = BinaryImage::from_ascii(
            "...#...
             ...#...
             ...#...
             #######
             ...#...
             ...#...
             ...#...",
        );
        let r = trace_all(&image);
        assert_eq!(r.edges.len(), 4);
        let out = connect_all_ambiguities(&r, &ConnectionCostParams::default()).unwrap();
        assert_eq!(out.edges.len(), 2);
        for e in &out.edges {
            assert_eq!(e.len(), 7);
            let straight = e.points.iter().all(|p| p.x == 3) || e.points.iter().all(|p| p.y == 3);
            assert!(straight, "{e:?}");
        }
    }

    #[test]
    fn weights_decide_between_continuity_and_proximity() {
        // two arms enter a 5x3 block from the left, two from the right
        let image = BinaryImage::from_ascii(
            ".............
             ###.......###
             ...#.....#...
             ....#####....
             ....#####....
             ....#####....
             ...#.....#...
             ###.......###",
        );
        let r = trace_all(&image);
        assert_eq!(r.ambiguities.len(), 1);
        assert_eq!(r.edges.len(), 4);

        // continuity pairs each arm with the one diagonally across
        let plan = plan_connections(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(plan.len(), 2);
        for c in &plan {
            let (pa, pb) = (terminal_point(&r, c.a), terminal_point(&r, c.b));
            assert!(pa.x != pb.x && pa.y != pb.y, "{pa} {pb}");
        }

        // proximity pairs the two arms on the same side
        let near = ConnectionCostParams {
            angle_weight: 0.01,
            distance_weight: 1.0,
            cost_threshold: 10.0,
            ..ConnectionCostParams::default()
        };
        let plan = plan_connections(&r, 0, &near).unwrap();
        assert_eq!(plan.len(), 2);
        for c in &plan {
            let (pa, pb) = (terminal_point(&r, c.a), terminal_point(&r, c.b));
            assert_eq!(pa.x, pb.x, "{pa} {pb}");
        }

        let joined = connect_edges_at_ambiguity(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(joined.edges.len(), 2);
        assert!(check::coverage(&joined).is_empty());
        assert!(check::ordering(&joined).iter().all(|v| !v.contains("not a neighbor")));
    }

    fn terminal_point(r: &TraceResult, t: Terminal) -> Point {
        let e = &r.edges[t.edge];
        match t.end {
            EdgeEnd::Start => e.first().unwrap(),
            EdgeEnd::End => e.last().unwrap(),
        }
    }

    #[test]
    fn self_closure_of_a_loop() {
        let image = BinaryImage::from_ascii(
            "....#....
             ....#....
             #########
             #.......#
             #########",
        );
        let r = trace_all(&image);
        let loop_id = r.edges.iter().position(|e| e.len() > 3).unwrap();
        // both loop ends run horizontally into the junction; the stem is at a right angle
        let plan = plan_connections(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!((plan[0].a.edge, plan[0].b.edge), (loop_id, loop_id));
        assert_eq!(plan[0].cost, 0.0);
        let out = connect_edges_at_ambiguity(&r, 0, &ConnectionCostParams::default()).unwrap();
        assert_eq!(out.edges, r.edges);
    }

    #[test]
    fn terminals_are_never_reused() {
        let image = BinaryImage::from_ascii(
            "#...#...#
             .#..#..#.
             ..#.#.#..
             ...###...
             #########
             ...###...
             ..#.#.#..
             .#..#..#.
             #...#...#",
        );
        let r = trace_all(&image);
        for amb in r.ambiguities.iter() {
            let plan = plan_connections(&r, amb.id, &ConnectionCostParams::default()).unwrap();
            let mut seen = std::collections::HashSet::new();
            for c in &plan {
                assert!(seen.insert(c.a));
                assert!(seen.insert(c.b));
            }
            let cross = plan.iter().filter(|c| c.a.edge != c.b.edge).count();
            let out = connect_edges_at_ambiguity(&r, amb.id, &ConnectionCostParams::default()).unwrap();
            assert_eq!(out.edges.len(), r.edges.len() - cross);
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        let r = trace_all(&BinaryImage::from_ascii("#####\n..#..\n..#.."));
        let bad = ConnectionCostParams {
            fit_length: 1,
            ..ConnectionCostParams::default()
        };
        assert!(plan_connections(&r, 0, &bad).is_err());
        let bad = ConnectionCostParams {
            angle_weight: 0.0,
            distance_weight: 0.0,
            ..ConnectionCostParams::default()
        };
        assert!(plan_connections(&r, 0, &bad).is_err());
        assert!(matches!(
            plan_connections(&r, 5, &ConnectionCostParams::default()),
            Err(Error::UnknownAmbiguity(5))
        ));
    }
}
