//! Conforming triangulations of polygonal domains with boundary markers.
//!
//! Vertex numbering inside a triangle is kept as given (after forcing
//! counterclockwise orientation). Local edge `i` of a triangle runs from local
//! vertex `i` to local vertex `(i + 1) % 3`; its midpoint is local midpoint
//! node `i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

pub type Point2 = [f64; 2];

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown boundary marker `{marker}` (expected D or N)")]
    UnknownMarker { line: usize, marker: String },
    #[error("nonconforming mesh: {0}")]
    Nonconforming(String),
    #[error("triangle {0} is degenerate (zero area)")]
    Degenerate(usize),
    #[error("triangle index {0} out of range")]
    NoSuchTriangle(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marker {
    Dirichlet,
    Neumann,
}

impl Marker {
    fn symbol(self) -> &'static str {
        match self {
            Marker::Dirichlet => "D",
            Marker::Neumann => "N",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "bottom" => Ok(Side::Bottom),
            "top" => Ok(Side::Top),
            other => Err(format!("unknown side `{other}`")),
        }
    }
}

/// Affine map `x = B x̂ + b` from the reference triangle (0,0),(1,0),(0,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    /// Row-major Jacobian.
    pub jacobian: [[f64; 2]; 2],
    pub translation: Point2,
    pub det: f64,
    pub inverse: [[f64; 2]; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap::from_vertices([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    /// Returns `None` for a zero-area triangle.
    pub fn from_vertices(v: [Point2; 3]) -> Option<Self> {
        let b = [
            [v[1][0] - v[0][0], v[2][0] - v[0][0]],
            [v[1][1] - v[0][1], v[2][1] - v[0][1]],
        ];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let inverse = [
            [b[1][1] / det, -b[0][1] / det],
            [-b[1][0] / det, b[0][0] / det],
        ];
        Some(AffineMap {
            jacobian: b,
            translation: v[0],
            det,
            inverse,
        })
    }

    pub fn apply(&self, r: Point2) -> Point2 {
        let b = &self.jacobian;
        [
            b[0][0] * r[0] + b[0][1] * r[1] + self.translation[0],
            b[1][0] * r[0] + b[1][1] * r[1] + self.translation[1],
        ]
    }

    pub fn pull_back(&self, p: Point2) -> Point2 {
        let d = [p[0] - self.translation[0], p[1] - self.translation[1]];
        let m = &self.inverse;
        [
            m[0][0] * d[0] + m[0][1] * d[1],
            m[1][0] * d[0] + m[1][1] * d[1],
        ]
    }

    /// Maps a reference gradient to a physical one: `B^{-T} g`.
    pub fn push_gradient(&self, g: Point2) -> Point2 {
        let m = &self.inverse;
        [
            m[0][0] * g[0] + m[1][0] * g[1],
            m[0][1] * g[0] + m[1][1] * g[1],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point2>,
    triangles: Vec<[usize; 3]>,
    boundary: BTreeMap<(usize, usize), Marker>,
    edges: Vec<(usize, usize)>,
    triangle_edges: Vec<[usize; 3]>,
    edge_triangles: Vec<Vec<usize>>,
    /// Triangle across local edge `i`, if any.
    neighbours: Vec<[Option<usize>; 3]>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn signed_area(v: [Point2; 3]) -> f64 {
    0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]))
}

impl Mesh {
    /// Builds a mesh from 0-based connectivity. Clockwise triangles are
    /// reoriented; conformity and boundary marking are validated.
    pub fn new(
        vertices: Vec<Point2>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: impl IntoIterator<Item = ((usize, usize), Marker)>,
    ) -> Result<Self, MeshError> {
        let mut triangles = triangles;
        for (t, tri) in triangles.iter_mut().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(MeshError::Nonconforming(format!(
                    "triangle {t} references a missing vertex"
                )));
            }
            let area = signed_area([vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]]);
            if area == 0.0 || !area.is_finite() {
                return Err(MeshError::Degenerate(t));
            }
            if area < 0.0 {
                tri.swap(1, 2);
            }
        }

        let mut boundary = BTreeMap::new();
        for ((a, b), m) in boundary_edges {
            if boundary.insert(edge_key(a, b), m).is_some() {
                return Err(MeshError::Nonconforming(format!(
                    "boundary edge ({a}, {b}) listed twice"
                )));
            }
        }

        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<Vec<usize>> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut te = [0; 3];
            for i in 0..3 {
                let key = edge_key(tri[i], tri[(i + 1) % 3]);
                let id = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_triangles.push(Vec::new());
                    edges.len() - 1
                });
                edge_triangles[id].push(t);
                te[i] = id;
            }
            triangle_edges.push(te);
        }

        for (e, tris) in edge_triangles.iter().enumerate() {
            let key = edges[e];
            match tris.len() {
                1 if !boundary.contains_key(&key) => {
                    return Err(MeshError::Nonconforming(format!(
                        "edge ({}, {}) belongs to one triangle but carries no boundary marker",
                        key.0, key.1
                    )))
                }
                2 if boundary.contains_key(&key) => {
                    return Err(MeshError::Nonconforming(format!(
                        "boundary edge ({}, {}) is shared by two triangles",
                        key.0, key.1
                    )))
                }
                1 | 2 => {}
                n => {
                    return Err(MeshError::Nonconforming(format!(
                        "edge ({}, {}) is shared by {n} triangles",
                        key.0, key.1
                    )))
                }
            }
        }
        for key in boundary.keys() {
            if !edge_index.contains_key(key) {
                return Err(MeshError::Nonconforming(format!(
                    "boundary edge ({}, {}) is not an edge of any triangle",
                    key.0, key.1
                )));
            }
        }

        let neighbours = triangle_edges
            .iter()
            .enumerate()
            .map(|(t, te)| {
                te.map(|e| edge_triangles[e].iter().copied().find(|&o| o != t))
            })
            .collect();

        Ok(Mesh {
            vertices,
            triangles,
            boundary,
            edges,
            triangle_edges,
            edge_triangles,
            neighbours,
        })
    }

    /// Structured mesh of the unit square with `n` cells per side, each cell
    /// split along its lower-left to upper-right diagonal. Sides not listed
    /// are Neumann.
    pub fn unit_square(n: usize, dirichlet: &[Side]) -> Self {
        assert!(n >= 1, "unit_square needs n >= 1");
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push([i as f64 / n as f64, j as f64 / n as f64]);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
        let marker = |s: Side| {
            if dirichlet.contains(&s) {
                Marker::Dirichlet
            } else {
                Marker::Neumann
            }
        };
        let mut boundary = Vec::with_capacity(4 * n);
        for k in 0..n {
            boundary.push(((id(k, 0), id(k + 1, 0)), marker(Side::Bottom)));
            boundary.push(((id(n, k), id(n, k + 1)), marker(Side::Right)));
            boundary.push(((id(k, n), id(k + 1, n)), marker(Side::Top)));
            boundary.push(((id(0, k), id(0, k + 1)), marker(Side::Left)));
        }
        Mesh::new(vertices, triangles, boundary).expect("structured mesh is valid")
    }

    /// Red refinement: every triangle split into four by its edge midpoints.
    pub fn refine_uniform(&self) -> Self {
        let nv = self.vertices.len();
        let mut vertices = self.vertices.clone();
        for &(a, b) in &self.edges {
            let (p, q) = (self.vertices[a], self.vertices[b]);
            vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
        }
        let mid = |e: usize| nv + e;
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for (tri, te) in self.triangles.iter().zip(&self.triangle_edges) {
            let (m0, m1, m2) = (mid(te[0]), mid(te[1]), mid(te[2]));
            triangles.push([tri[0], m0, m2]);
            triangles.push([m0, tri[1], m1]);
            triangles.push([m2, m1, tri[2]]);
            triangles.push([m0, m1, m2]);
        }
        let edge_ids: HashMap<(usize, usize), usize> =
            self.edges.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for (&(a, b), &m) in &self.boundary {
            let c = mid(edge_ids[&(a, b)]);
            boundary.push(((a, c), m));
            boundary.push(((c, b), m));
        }
        Mesh::new(vertices, triangles, boundary).expect("refinement preserves validity")
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Unique edges as sorted vertex pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge ids of the three local edges of each triangle.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn edge_triangles(&self, edge: usize) -> &[usize] {
        &self.edge_triangles[edge]
    }

    pub fn boundary(&self) -> &BTreeMap<(usize, usize), Marker> {
        &self.boundary
    }

    pub fn edge_marker(&self, edge: usize) -> Option<Marker> {
        self.boundary.get(&self.edges[edge]).copied()
    }

    pub fn edge_midpoint(&self, edge: usize) -> Point2 {
        let (a, b) = self.edges[edge];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
    }

    /// Vertices lying on at least one Dirichlet edge.
    pub fn dirichlet_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for (&(a, b), &m) in &self.boundary {
            if m == Marker::Dirichlet {
                flags[a] = true;
                flags[b] = true;
            }
        }
        flags
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point2; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        signed_area(self.triangle_vertices(t))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    /// Mesh size: the longest edge.
    pub fn h(&self) -> f64 {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    pub fn affine_map(&self, t: usize) -> Result<AffineMap, MeshError> {
        if t >= self.triangles.len() {
            return Err(MeshError::NoSuchTriangle(t));
        }
        AffineMap::from_vertices(self.triangle_vertices(t)).ok_or(MeshError::Degenerate(t))
    }

    /// Finds the triangle containing `p` by walking from `hint`, falling back
    /// to a linear scan. Returns the triangle and the reference coordinates.
    pub fn locate(&self, p: Point2, hint: usize) -> Option<(usize, Point2)> {
        const TOL: f64 = 1e-12;
        let bary = |t: usize| {
            let map = AffineMap::from_vertices(self.triangle_vertices(t))?;
            let r = map.pull_back(p);
            Some((r, [1.0 - r[0] - r[1], r[0], r[1]]))
        };
        let mut t = hint.min(self.triangles.len().saturating_sub(1));
        for _ in 0..self.triangles.len() {
            let (r, l) = bary(t)?;
            // Local edge i is opposite local vertex (i + 2) % 3.
            let worst = (0..3)
                .min_by(|&a, &b| l[a].total_cmp(&l[b]))
                .unwrap();
            if l[worst] >= -TOL {
                return Some((t, r));
            }
            match self.neighbours[t][(worst + 1) % 3] {
                Some(n) => t = n,
                None => break,
            }
        }
        (0..self.triangles.len()).find_map(|t| {
            let (r, l) = bary(t)?;
            (l.iter().all(|&x| x >= -TOL)).then_some((t, r))
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {}",
            self.vertices.len(),
            self.triangles.len(),
            self.boundary.len()
        );
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "{} {:.16e} {:.16e}", i + 1, v[0], v[1]);
        }
        for (i, t) in self.triangles.iter().enumerate() {
            let _ = writeln!(s, "{} {} {} {}", i + 1, t[0] + 1, t[1] + 1, t[2] + 1);
        }
        for (&(a, b), m) in &self.boundary {
            let _ = writeln!(s, "{} {} {}", a + 1, b + 1, m.symbol());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, MeshError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let malformed = |line: usize, message: String| MeshError::Malformed { line, message };
        let (hline, header) = lines
            .next()
            .ok_or_else(|| malformed(1, "empty mesh file".into()))?;
        let counts: Vec<usize> = header
            .split_whitespace()
            .map(|w| w.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| malformed(hline, format!("expected `nv nt nb`, found `{header}`")))?;
        let [nv, nt, nb] = counts[..] else {
            return Err(malformed(hline, format!("expected `nv nt nb`, found `{header}`")));
        };

        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| malformed(0, format!("unexpected end of file while reading {what}")))
        };

        let parse_id = |line: usize, w: &str, limit: usize, what: &str| -> Result<usize, MeshError> {
            let id: usize = w
                .parse()
                .map_err(|_| malformed(line, format!("invalid {what} id `{w}`")))?;
            if id == 0 || id > limit {
                return Err(malformed(line, format!("{what} id {id} out of range 1..={limit}")));
            }
            Ok(id - 1)
        };

        let mut vertices: Vec<Option<Point2>> = vec![None; nv];
        for _ in 0..nv {
            let (ln, l) = next("vertices")?;
            let w: Vec<&str> = l.split_whitespace().collect();
            if w.len() != 3 {
                return Err(malformed(ln, format!("expected `id x y`, found `{l}`")));
            }
            let id = parse_id(ln, w[0], nv, "vertex")?;
            let coord = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| malformed(ln, format!("invalid coordinate `{s}`")))
            };
            if vertices[id].replace([coord(w[1])?, coord(w[2])?]).is_some() {
                return Err(malformed(ln, format!("duplicate vertex id {}", id + 1)));
            }
        }
        let vertices: Vec<Point2> = vertices.into_iter().map(|v| v.unwrap()).collect();

        let mut triangles: Vec<Option<[usize; 3]>> = vec![None; nt];
        for _ in 0..nt {
            let (ln, l) = next("triangles")?;
            let w: Vec<&str> = l.split_whitespace().collect();
            if w.len() != 4 {
                return Err(malformed(ln, format!("expected `id v1 v2 v3`, found `{l}`")));
            }
            let id = parse_id(ln, w[0], nt, "triangle")?;
            let mut tri = [0; 3];
            for k in 0..3 {
                tri[k] = parse_id(ln, w[k + 1], nv, "vertex")?;
            }
            if triangles[id].replace(tri).is_some() {
                return Err(malformed(ln, format!("duplicate triangle id {}", id + 1)));
            }
        }
        let triangles: Vec<[usize; 3]> = triangles.into_iter().map(|t| t.unwrap()).collect();

        let mut boundary = Vec::with_capacity(nb);
        for _ in 0..nb {
            let (ln, l) = next("boundary edges")?;
            let w: Vec<&str> = l.split_whitespace().collect();
            if w.len() != 3 {
                return Err(malformed(ln, format!("expected `v_a v_b marker`, found `{l}`")));
            }
            let a = parse_id(ln, w[0], nv, "vertex")?;
            let b = parse_id(ln, w[1], nv, "vertex")?;
            let marker = match w[2] {
                "D" => Marker::Dirichlet,
                "N" => Marker::Neumann,
                other => {
                    return Err(MeshError::UnknownMarker {
                        line: ln,
                        marker: other.to_string(),
                    })
                }
            };
            boundary.push(((a, b), marker));
        }
        if let Some((ln, l)) = lines.next() {
            return Err(malformed(ln, format!("unexpected trailing content `{l}`")));
        }
        Mesh::new(vertices, triangles, boundary)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MeshError> {
        Mesh::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MeshError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_unit_square() {
        let m = Mesh::unit_square(1, &Side::ALL);
        assert_eq!(m.num_vertices(), 4);
        assert_eq!(m.num_triangles(), 2);
        assert_eq!(m.boundary().len(), 4);
        assert!(m.boundary().values().all(|&b| b == Marker::Dirichlet));
    }

    #[test]
    fn counts_for_n2() {
        let m = Mesh::unit_square(2, &[Side::Left]);
        assert_eq!(m.num_vertices(), 9);
        assert_eq!(m.num_triangles(), 8);
        assert_eq!(m.edges().len(), 16);
        let d = m.boundary().values().filter(|&&b| b == Marker::Dirichlet).count();
        assert_eq!(d, 2);
        assert!((m.h() - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn edge_census_n4() {
        let m = Mesh::unit_square(4, &[]);
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in m.triangles() {
            for i in 0..3 {
                *count.entry(edge_key(t[i], t[(i + 1) % 3])).or_default() += 1;
            }
        }
        for (k, c) in count {
            let on_boundary = m.boundary().contains_key(&k);
            assert_eq!(c, if on_boundary { 1 } else { 2 }, "edge {k:?}");
        }
    }

    #[test]
    fn reference_map_is_identity() {
        let a = AffineMap::identity();
        assert_eq!(a.jacobian, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(a.translation, [0.0, 0.0]);
        assert_eq!(a.det, 1.0);
    }

    #[test]
    fn scaled_reference_map() {
        let a = AffineMap::from_vertices([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(a.jacobian, [[2.0, 0.0], [0.0, 2.0]]);
        assert_eq!(a.det, 4.0);
        for (r, p) in [([0.0, 0.0], [0.0, 0.0]), ([1.0, 0.0], [2.0, 0.0]), ([0.0, 1.0], [0.0, 2.0])] {
            assert_eq!(a.apply(r), p);
            assert_eq!(a.pull_back(p), r);
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(AffineMap::from_vertices([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_none());
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]],
            vec![[0, 1, 2]],
            [((0, 1), Marker::Dirichlet), ((1, 2), Marker::Dirichlet), ((2, 0), Marker::Dirichlet)],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::Degenerate(0)));
        let m = Mesh::unit_square(1, &[]);
        assert!(matches!(m.affine_map(7), Err(MeshError::NoSuchTriangle(7))));
    }

    #[test]
    fn refinement_counts_and_area() {
        let m = Mesh::unit_square(1, &Side::ALL);
        let r = m.refine_uniform();
        assert_eq!(r.num_triangles(), 8);
        let rr = r.refine_uniform().refine_uniform();
        assert!((rr.total_area() - 1.0).abs() < 1e-14);
        assert!((r.h() - m.h() / 2.0).abs() < 1e-15);
        assert!(rr.boundary().values().all(|&b| b == Marker::Dirichlet));
    }

    #[test]
    fn unmarked_boundary_is_nonconforming() {
        let err = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            [((0, 1), Marker::Dirichlet), ((1, 2), Marker::Dirichlet)],
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::Nonconforming(_)));
    }

    #[test]
    fn locate_by_walking() {
        let m = Mesh::unit_square(6, &[]);
        for p in [[0.05, 0.93], [0.5, 0.5], [1.0, 1.0], [0.0, 0.0], [0.71, 0.02]] {
            let (t, r) = m.locate(p, 0).expect("inside");
            let q = m.affine_map(t).unwrap().apply(r);
            assert!((q[0] - p[0]).abs() < 1e-14 && (q[1] - p[1]).abs() < 1e-14);
            assert!(r[0] >= -1e-12 && r[1] >= -1e-12 && r[0] + r[1] <= 1.0 + 1e-12);
        }
        assert!(m.locate([1.5, 0.5], 3).is_none());
    }
}
