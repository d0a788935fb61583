//! Divergence-free Raviart–Thomas subspaces on reference elements and the
//! node sets where interpolation constraints are imposed.
//!
//! `RT_k^0` on the reference triangle is the curl image of `P_{k+1}` modulo
//! constants, so its dimension is `(k + 1)(k + 4) / 2`: two members for
//! `k = 0`, five for `k = 1`. The 3-D space on the reference tetrahedron is
//! only provided for `k = 0` (constant vectors).

use nalgebra::DMatrix;
use thiserror::Error;

use crate::quadrature::{integrate_segment, integrate_triangle, SegmentRule, TriangleRule};

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefSpaceError {
    #[error("node set `{kind}` is not available for order {order} in {dim}-D")]
    InvalidPairing {
        order: usize,
        kind: &'static str,
        dim: usize,
    },
}

/// Affine scalar polynomial `c + g · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub c: f64,
    pub g: [f64; 3],
}

impl Affine {
    pub const fn new(c: f64, gx: f64, gy: f64) -> Self {
        Affine { c, g: [gx, gy, 0.0] }
    }

    pub const fn constant(c: f64) -> Self {
        Affine { c, g: [0.0; 3] }
    }

    #[inline]
    pub fn eval(&self, p: &Point3) -> f64 {
        self.c + self.g[0] * p[0] + self.g[1] * p[1] + self.g[2] * p[2]
    }
}

/// Basis of a divergence-free vector polynomial space on a reference element.
#[derive(Debug, Clone, PartialEq)]
pub struct DivFreeBasis {
    order: usize,
    dim: usize,
    /// `members[i][c]` is component `c` of member `i`.
    members: Vec<Vec<Affine>>,
}

impl DivFreeBasis {
    /// `RT_0^0 = span{(1,0), (0,1)}`.
    pub fn rt0_2d() -> Self {
        DivFreeBasis {
            order: 0,
            dim: 2,
            members: vec![
                vec![Affine::constant(1.0), Affine::constant(0.0)],
                vec![Affine::constant(0.0), Affine::constant(1.0)],
            ],
        }
    }

    /// `RT_1^0` in the fixed member order
    /// `(x, 1-2x-y), (0, -1+4x), (-x, y), (1-4y, 0), (-1+x+2y, -y)`.
    pub fn rt1_2d() -> Self {
        DivFreeBasis {
            order: 1,
            dim: 2,
            members: vec![
                vec![Affine::new(0.0, 1.0, 0.0), Affine::new(1.0, -2.0, -1.0)],
                vec![Affine::constant(0.0), Affine::new(-1.0, 4.0, 0.0)],
                vec![Affine::new(0.0, -1.0, 0.0), Affine::new(0.0, 0.0, 1.0)],
                vec![Affine::new(1.0, 0.0, -4.0), Affine::constant(0.0)],
                vec![Affine::new(-1.0, 1.0, 2.0), Affine::new(0.0, 0.0, -1.0)],
            ],
        }
    }

    /// Unit vectors on the reference tetrahedron.
    pub fn rt0_3d() -> Self {
        let e = |k: usize| (0..3).map(|c| Affine::constant(if c == k { 1.0 } else { 0.0 })).collect();
        DivFreeBasis {
            order: 0,
            dim: 3,
            members: vec![e(0), e(1), e(2)],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Spatial dimension (2 or 3).
    pub fn spatial_dim(&self) -> usize {
        self.dim
    }

    /// Number of members `N_k`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Closed-form dimension `(k + 1)(k + 4) / 2` of `RT_k^0` in 2-D.
    pub fn dimension_formula(order: usize) -> usize {
        (order + 1) * (order + 4) / 2
    }

    /// Number of fitted basis functions per element, `N_k + 1`.
    pub fn fitted_dimension(&self) -> usize {
        self.members.len() + 1
    }

    pub fn member(&self, i: usize) -> &[Affine] {
        &self.members[i]
    }

    /// Value of member `i` at `p`; unused components are zero.
    #[inline]
    pub fn eval(&self, i: usize, p: &Point3) -> Point3 {
        let mut out = [0.0; 3];
        for (c, a) in self.members[i].iter().enumerate() {
            out[c] = a.eval(p);
        }
        out
    }

    /// Divergence of member `i`; an affine field has constant divergence, so
    /// this is the single coefficient `Σ_c ∂_c v^c`.
    pub fn divergence(&self, i: usize) -> f64 {
        self.members[i].iter().enumerate().map(|(c, a)| a.g[c]).sum()
    }

    /// Net outward flux `∮ v · n` through the boundary of the reference
    /// element, computed by quadrature on the edges (2-D) or faces (3-D).
    pub fn boundary_flux(&self, i: usize) -> f64 {
        let ok = |v: f64| Ok::<f64, std::convert::Infallible>(v);
        match self.dim {
            2 => {
                let rule = SegmentRule::gauss_legendre(4);
                let corners: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
                (0..3)
                    .map(|e| {
                        let (a, b) = (corners[e], corners[(e + 1) % 3]);
                        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
                        // Outward normal of a counterclockwise edge.
                        let n = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
                        integrate_segment(
                            |p| {
                                let v = self.eval(i, &[p[0], p[1], 0.0]);
                                ok(v[0] * n[0] + v[1] * n[1])
                            },
                            a,
                            b,
                            &rule,
                        )
                        .unwrap()
                    })
                    .sum()
            }
            _ => {
                let rule = TriangleRule::with_degree(2);
                let o = [0.0, 0.0, 0.0];
                let (ex, ey, ez) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
                let s = 1.0 / 3f64.sqrt();
                // (vertices, outward unit normal, area scale)
                let faces: [([Point3; 3], Point3, f64); 4] = [
                    ([o, ey, ex], [0.0, 0.0, -1.0], 1.0),
                    ([o, ex, ez], [0.0, -1.0, 0.0], 1.0),
                    ([o, ez, ey], [-1.0, 0.0, 0.0], 1.0),
                    ([ex, ey, ez], [s, s, s], 3f64.sqrt()),
                ];
                faces
                    .iter()
                    .map(|(v, n, scale)| {
                        scale
                            * integrate_triangle(
                                |r| {
                                    let mut p = [0.0; 3];
                                    for k in 0..3 {
                                        p[k] = v[0][k]
                                            + r[0] * (v[1][k] - v[0][k])
                                            + r[1] * (v[2][k] - v[0][k]);
                                    }
                                    let w = self.eval(i, &p);
                                    ok(w[0] * n[0] + w[1] * n[1] + w[2] * n[2])
                                },
                                &rule,
                            )
                            .unwrap()
                    })
                    .sum()
            }
        }
    }

    /// L²(K̂) Gram matrix of the members (2-D only).
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.dim, 2, "Gram matrix is provided for the reference triangle");
        let rule = TriangleRule::with_degree(2);
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            integrate_triangle(
                |p| {
                    let q = [p[0], p[1], 0.0];
                    let (a, b) = (self.eval(i, &q), self.eval(j, &q));
                    Ok::<f64, std::convert::Infallible>(a[0] * b[0] + a[1] * b[1])
                },
                &rule,
            )
            .unwrap()
        })
    }

    /// Coefficient matrix: one row per member, columns are the monomial
    /// coefficients `(c, g_x, g_y, g_z)` of each component.
    pub fn coefficient_matrix(&self) -> DMatrix<f64> {
        let cols = 4 * self.dim;
        DMatrix::from_fn(self.len(), cols, |i, k| {
            let a = &self.members[i][k / 4];
            match k % 4 {
                0 => a.c,
                r => a.g[r - 1],
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Vertices,
    Midpoints,
    P2,
    TetVertices,
    TetFaceCenters,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Vertices => "vertices",
            NodeKind::Midpoints => "midpoints",
            NodeKind::P2 => "p2",
            NodeKind::TetVertices => "tet_vertices",
            NodeKind::TetFaceCenters => "tet_face_centers",
        }
    }
}

impl std::str::FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "vertices" => NodeKind::Vertices,
            "midpoints" => NodeKind::Midpoints,
            "p2" => NodeKind::P2,
            "tet_vertices" => NodeKind::TetVertices,
            "tet_face_centers" => NodeKind::TetFaceCenters,
            other => return Err(format!("unknown node set `{other}`")),
        })
    }
}

/// Points on the reference element where the fitted basis is interpolatory,
/// plus a designated start point for the path integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub points: Vec<Point3>,
    pub start: Point3,
    pub dim: usize,
}

impl NodeSet {
    /// Standard node sets. Midpoint `i` is the midpoint of the edge from
    /// vertex `i` to vertex `i + 1`.
    pub fn new(order: usize, kind: NodeKind) -> Result<Self, RefSpaceError> {
        let v = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let m = [[0.5, 0.0, 0.0], [0.5, 0.5, 0.0], [0.0, 0.5, 0.0]];
        let t = 1.0 / 3.0;
        let (points, dim): (Vec<Point3>, usize) = match (order, kind) {
            (0, NodeKind::Vertices) => (v.to_vec(), 2),
            (0, NodeKind::Midpoints) => (m.to_vec(), 2),
            (1, NodeKind::P2) => (v.iter().chain(&m).copied().collect(), 2),
            (0, NodeKind::TetVertices) => (
                vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
                3,
            ),
            // Centre of the face opposite vertex i, in vertex order.
            (0, NodeKind::TetFaceCenters) => (
                vec![[t, t, t], [0.0, t, t], [t, 0.0, t], [t, t, 0.0]],
                3,
            ),
            _ => {
                return Err(RefSpaceError::InvalidPairing {
                    order,
                    kind: kind.name(),
                    dim: if matches!(kind, NodeKind::TetVertices | NodeKind::TetFaceCenters) {
                        3
                    } else {
                        2
                    },
                })
            }
        };
        let start = points[0];
        Ok(NodeSet { points, start, dim })
    }

    pub fn custom(points: Vec<Point3>, start: Point3, dim: usize) -> Self {
        NodeSet { points, start, dim }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
