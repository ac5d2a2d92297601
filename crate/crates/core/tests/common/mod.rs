#![allow(dead_code)]

use edgetrace::pattern::{circle_with_diameter, generate_cross_pattern, Layout};
use edgetrace::{BinaryImage, Point};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Hand-drawn figures covering open and closed edges, junctions, clusters
/// and nesting.
pub const CORPUS: &[(&str, &str)] = &[
    ("dot", "...\n.#.\n..."),
    ("open line", "#######"),
    ("diagonal", "#....\n.#...\n..#..\n...#.\n....#"),
    ("staircase", "##...\n.##..\n..##.\n...##"),
    ("arc", "..###..\n.#...#.\n#.....#"),
    ("closed ring", ".####.\n#....#\n#....#\n.####."),
    ("diamond loop", "..#..\n.#.#.\n#...#\n.#.#.\n..#.."),
    ("t junction", "#####\n..#..\n..#.."),
    (
        "y junction",
        "#...#
         .#.#.
         ..#..
         ..#..
         ..#..",
    ),
    (
        "x junction",
        "..#..
         ..#..
         #####
         ..#..
         ..#..",
    ),
    (
        "diagonal x",
        "#...#
         .#.#.
         ..#..
         .#.#.
         #...#",
    ),
    ("isolated block", "....\n.##.\n.##.\n...."),
    (
        "block with arms",
        "#......
         .#.....
         ..##...
         ..##...
         ....#..
         .....##",
    ),
    (
        "thick blob",
        "...#....
         ..####..
         .######.
         ..####..
         ...#....",
    ),
    (
        "lollipop",
        ".###.
         #...#
         #...#
         .#.#.
         ..#..
         ..#..
         ..#..",
    ),
    (
        "nested rings",
        "#########
         #.......#
         #.#####.#
         #.#...#.#
         #.#####.#
         #.......#
         #########",
    ),
    (
        "ring with spokes",
        "....#....
         ....#....
         ..#####..
         ..#...#..
         ###...###
         ..#...#..
         ..#####..
         ....#....",
    ),
    (
        "adjacent junctions",
        "#.#.#
         #####
         #.#.#",
    ),
    (
        "corner touch",
        "###..
         ..#..
         ..###",
    ),
    (
        "comb",
        "#########
         #.#.#.#.#
         #.#.#.#.#",
    ),
];

pub fn corpus() -> Vec<(String, BinaryImage)> {
    let mut out: Vec<(String, BinaryImage)> = CORPUS
        .iter()
        .map(|(name, art)| (name.to_string(), BinaryImage::from_ascii(art)))
        .collect();
    out.push(("circle with diameter".into(), circle_with_diameter(5).unwrap()));
    out.push(("cross row".into(), generate_cross_pattern(6, Layout::Row).unwrap()));
    out.push(("cross square".into(), generate_cross_pattern(9, Layout::Square).unwrap()));
    out
}

/// Each pixel set independently with probability `density`.
pub fn random_image(rng: &mut StdRng, width: u32, height: u32, density: f64) -> BinaryImage {
    let points: Vec<Point> = (0..height)
        .flat_map(|y| (0..width).map(move |x| Point::new(x, y)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    BinaryImage::from_points(width, height, points)
}

/// `count` seeded random images per density.
pub fn random_suite(seed: u64, count: usize, size: u32, densities: &[f64]) -> Vec<(String, BinaryImage)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &d in densities {
        for i in 0..count {
            out.push((format!("random {size}x{size} density {d} #{i}"), random_image(&mut rng, size, size, d)));
        }
    }
    out
}
