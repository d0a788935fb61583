//! Exponentially fitted element bases.
//!
//! Every construction works on the reference element with the potential
//! already pulled back. Each basis function is represented through weighted
//! path integrals of the divergence-free members,
//!
//! ```text
//! I_i(p) = ∫_{start → p} e^{β(φ - φ̄)} g_i · dl
//! ```
//!
//! where `g_i` is the member rotated by -90° (Slotboom variable) or the member
//! itself (direct density construction), and `φ̄` is a per-element shift that
//! keeps the exponentials bounded. The coefficients come from enforcing
//! Kronecker-delta values at a node set.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::expr::{EvalError, Expression};
use crate::mesh::AffineMap;
use crate::quadrature::SegmentRule;
use crate::refspace::{DivFreeBasis, NodeKind, NodeSet, Point3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("singular element matrix (pivot {pivot:.3e}, scale {scale:.3e})")]
    Singular { pivot: f64, scale: f64 },
    #[error("element matrix has non-finite entries")]
    NonFinite,
    #[error("potential evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("expected {expected} nodes, found {found}")]
    NodeCount { expected: usize, found: usize },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("linear potential needs nonzero slopes in both directions")]
    ZeroSlope,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// Fit the Slotboom variable `ρ = u e^{βφ}`.
    #[default]
    Slotboom,
    /// Fit the density `u` directly; the current is the divergence-free field.
    DirectU,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Slotboom => "slotboom",
            Variant::DirectU => "direct_u",
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "slotboom" => Ok(Variant::Slotboom),
            "direct_u" => Ok(Variant::DirectU),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PathRule {
    /// Along x first, then y (then z in 3-D).
    #[default]
    XThenY,
    /// Along y first, then x (then z in 3-D).
    YThenX,
    StraightLine,
    /// Mean of the two axis-parallel routes.
    AverageXYYX,
}

impl PathRule {
    pub fn name(self) -> &'static str {
        match self {
            PathRule::XThenY => "xy",
            PathRule::YThenX => "yx",
            PathRule::StraightLine => "line",
            PathRule::AverageXYYX => "avg",
        }
    }
}

impl FromStr for PathRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xy" => Ok(PathRule::XThenY),
            "yx" => Ok(PathRule::YThenX),
            "line" => Ok(PathRule::StraightLine),
            "avg" => Ok(PathRule::AverageXYYX),
            other => Err(format!("unknown path rule `{other}`")),
        }
    }
}

impl fmt::Display for PathRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub variant: Variant,
    pub path: PathRule,
    /// Overrides the path start point. By default the Slotboom construction
    /// starts at the origin and the direct construction at the node set's
    /// designated start.
    pub start: Option<Point3>,
    /// Subtract the largest nodal potential before exponentiating.
    pub shift: bool,
    pub segment_order: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            variant: Variant::Slotboom,
            path: PathRule::XThenY,
            start: None,
            shift: true,
            segment_order: 16,
        }
    }
}

/// A scalar potential on reference coordinates.
pub trait Potential: Sync {
    fn value(&self, p: &Point3) -> Result<f64, EvalError>;
}

impl<F: Fn(&Point3) -> f64 + Sync> Potential for F {
    fn value(&self, p: &Point3) -> Result<f64, EvalError> {
        Ok(self(p))
    }
}

impl Potential for Expression {
    fn value(&self, p: &Point3) -> Result<f64, EvalError> {
        self.eval(p)
    }
}

/// A physical-coordinate expression composed with an element map.
#[derive(Debug, Clone, Copy)]
pub struct PulledBack<'a> {
    pub expr: &'a Expression,
    pub map: AffineMap,
}

impl Potential for PulledBack<'_> {
    fn value(&self, p: &Point3) -> Result<f64, EvalError> {
        self.expr.eval(&self.map.apply([p[0], p[1]]))
    }
}

/// Problem data shared by every element.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub diffusion: f64,
    pub beta: f64,
    pub phi: Expression,
    pub f: Expression,
    pub g: Expression,
    /// Analytic `∇φ`, when known.
    pub grad_phi: Option<[Expression; 2]>,
    pub order: usize,
    pub nodes: NodeKind,
    pub options: FitOptions,
    pub triangle_degree: usize,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<(), FitError> {
        if !(self.diffusion > 0.0 && self.diffusion.is_finite()) {
            return Err(FitError::InvalidParameter(format!(
                "diffusion coefficient must be positive, got {}",
                self.diffusion
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(FitError::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> Result<DivFreeBasis, FitError> {
        match self.order {
            0 => Ok(DivFreeBasis::rt0_2d()),
            1 => Ok(DivFreeBasis::rt1_2d()),
            _ => Err(FitError::Unsupported("only orders 0 and 1 are available")),
        }
    }
}

/// Waypoints from `s` to `p` for a single-route rule.
fn waypoints(path: PathRule, dim: usize, s: &Point3, p: &Point3) -> ([Point3; 4], usize) {
    let mut w = [*s; 4];
    match (path, dim) {
        (PathRule::StraightLine, _) => {
            w[1] = *p;
            (w, 2)
        }
        (PathRule::XThenY, 2) => {
            w[1] = [p[0], s[1], 0.0];
            w[2] = *p;
            (w, 3)
        }
        (PathRule::YThenX, 2) => {
            w[1] = [s[0], p[1], 0.0];
            w[2] = *p;
            (w, 3)
        }
        (PathRule::XThenY, _) => {
            w[1] = [p[0], s[1], s[2]];
            w[2] = [p[0], p[1], s[2]];
            w[3] = *p;
            (w, 4)
        }
        (PathRule::YThenX, _) => {
            w[1] = [s[0], p[1], s[2]];
            w[2] = [p[0], p[1], s[2]];
            w[3] = *p;
            (w, 4)
        }
        (PathRule::AverageXYYX, _) => unreachable!("averaged rule has no single route"),
    }
}

/// Everything needed to evaluate path moments.
struct Integrator<'a, P> {
    space: &'a DivFreeBasis,
    phi: &'a P,
    beta: f64,
    shift: f64,
    variant: Variant,
    rule: &'a SegmentRule,
}

impl<P: Potential> Integrator<'_, P> {
    fn direction(&self, i: usize, q: &Point3) -> Point3 {
        let v = self.space.eval(i, q);
        match self.variant {
            Variant::Slotboom => [v[1], -v[0], 0.0],
            Variant::DirectU => v,
        }
    }

    fn leg(&self, a: &Point3, b: &Point3, out: &mut [f64]) -> Result<(), EvalError> {
        let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        if d == [0.0; 3] {
            return Ok(());
        }
        for (&t, &w) in self.rule.points.iter().zip(&self.rule.weights) {
            let q = [a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2]];
            let e = (self.beta * (self.phi.value(&q)? - self.shift)).exp();
            for (i, o) in out.iter_mut().enumerate() {
                let g = self.direction(i, &q);
                *o += w * e * (g[0] * d[0] + g[1] * d[1] + g[2] * d[2]);
            }
        }
        Ok(())
    }

    fn route(&self, path: PathRule, s: &Point3, p: &Point3, out: &mut [f64]) -> Result<(), EvalError> {
        let (w, n) = waypoints(path, self.space.spatial_dim(), s, p);
        for k in 1..n {
            self.leg(&w[k - 1], &w[k], out)?;
        }
        Ok(())
    }

    fn moments(&self, path: PathRule, s: &Point3, p: &Point3) -> Result<Vec<f64>, EvalError> {
        let mut out = vec![0.0; self.space.len()];
        if path == PathRule::AverageXYYX {
            let mut other = vec![0.0; out.len()];
            self.route(PathRule::XThenY, s, p, &mut out)?;
            self.route(PathRule::YThenX, s, p, &mut other)?;
            for (o, v) in out.iter_mut().zip(&other) {
                *o = 0.5 * (*o + v);
            }
        } else {
            self.route(path, s, p, &mut out)?;
        }
        Ok(out)
    }
}

fn default_start(variant: Variant, nodes: &NodeSet) -> Point3 {
    match variant {
        Variant::Slotboom => [0.0; 3],
        Variant::DirectU => nodes.start,
    }
}

fn check_shape(space: &DivFreeBasis, nodes: &NodeSet, options: &FitOptions) -> Result<(), FitError> {
    if nodes.len() != space.fitted_dimension() {
        return Err(FitError::NodeCount {
            expected: space.fitted_dimension(),
            found: nodes.len(),
        });
    }
    if nodes.dim != space.spatial_dim() {
        return Err(FitError::Unsupported("node set and space dimensions differ"));
    }
    if space.spatial_dim() == 3 && options.variant == Variant::Slotboom {
        return Err(FitError::Unsupported(
            "the Slotboom construction is only available in 2-D",
        ));
    }
    Ok(())
}

fn node_shift<P: Potential>(phi: &P, nodes: &NodeSet, enabled: bool) -> Result<(Vec<f64>, f64), FitError> {
    let values = nodes
        .points
        .iter()
        .map(|p| phi.value(p))
        .collect::<Result<Vec<_>, _>>()?;
    let shift = if enabled {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    Ok((values, shift))
}

/// Builds the element system matrix `F`: row `j` holds the weighted path
/// moments to node `j` followed by a trailing 1.
pub fn assemble_f<P: Potential>(
    space: &DivFreeBasis,
    nodes: &NodeSet,
    phi: &P,
    beta: f64,
    diffusion: f64,
    options: &FitOptions,
) -> Result<DMatrix<f64>, FitError> {
    check_shape(space, nodes, options)?;
    let (node_phi, shift) = node_shift(phi, nodes, options.shift)?;
    let rule = SegmentRule::gauss_legendre(options.segment_order);
    let start = options.start.unwrap_or_else(|| default_start(options.variant, nodes));
    build_f(space, nodes, phi, beta, diffusion, options, &rule, &start, &node_phi, shift)
}

#[allow(clippy::too_many_arguments)]
fn build_f<P: Potential>(
    space: &DivFreeBasis,
    nodes: &NodeSet,
    phi: &P,
    beta: f64,
    diffusion: f64,
    options: &FitOptions,
    rule: &SegmentRule,
    start: &Point3,
    node_phi: &[f64],
    shift: f64,
) -> Result<DMatrix<f64>, FitError> {
    let integ = Integrator {
        space,
        phi,
        beta,
        shift,
        variant: options.variant,
        rule,
    };
    let n = space.len();
    let mut f = DMatrix::zeros(n + 1, n + 1);
    for (j, node) in nodes.points.iter().enumerate() {
        let moments = integ.moments(options.path, start, node)?;
        let scale = match options.variant {
            Variant::Slotboom => 1.0 / diffusion,
            Variant::DirectU => (-beta * (node_phi[j] - shift)).exp() / diffusion,
        };
        for (i, m) in moments.iter().enumerate() {
            f[(j, i)] = scale * m;
        }
        f[(j, n)] = 1.0;
    }
    Ok(f)
}

/// Solves `F M = I` by LU with partial pivoting. Column `j` of the result
/// holds the coefficients of basis function `j` followed by its constant.
pub fn solve_element_coefficients(f: &DMatrix<f64>) -> Result<DMatrix<f64>, FitError> {
    assert!(f.is_square(), "element matrix must be square");
    if f.iter().any(|x| !x.is_finite()) {
        return Err(FitError::NonFinite);
    }
    let scale = f.amax();
    let lu = f.clone().lu();
    let u = lu.u();
    let pivot = u.diagonal().amin();
    if pivot.is_nan() || pivot < 1e-12 * scale {
        return Err(FitError::Singular { pivot, scale });
    }
    let n = f.nrows();
    let m = lu.solve(&DMatrix::identity(n, n)).ok_or(FitError::Singular { pivot, scale })?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(FitError::NonFinite);
    }
    Ok(m)
}

/// Determinant after scaling every row to unit max-norm.
pub fn row_scaled_determinant(f: &DMatrix<f64>) -> f64 {
    let mut g = f.clone();
    for mut row in g.row_iter_mut() {
        let s = row.amax();
        if s > 0.0 {
            row /= s;
        }
    }
    g.determinant()
}

/// A fitted basis on one element.
#[derive(Debug, Clone)]
pub struct FittedBasis<P> {
    phi: P,
    beta: f64,
    diffusion: f64,
    space: DivFreeBasis,
    nodes: NodeSet,
    options: FitOptions,
    start: Point3,
    rule: SegmentRule,
    shift: f64,
    /// Nodal potential values, unshifted.
    node_phi: Vec<f64>,
    f: DMatrix<f64>,
    coeffs: DMatrix<f64>,
}

impl<P: Potential> FittedBasis<P> {
    pub fn new(
        space: DivFreeBasis,
        nodes: NodeSet,
        phi: P,
        beta: f64,
        diffusion: f64,
        options: FitOptions,
    ) -> Result<Self, FitError> {
        check_shape(&space, &nodes, &options)?;
        let (node_phi, shift) = node_shift(&phi, &nodes, options.shift)?;
        let rule = SegmentRule::gauss_legendre(options.segment_order);
        let start = options.start.unwrap_or_else(|| default_start(options.variant, &nodes));
        let f = build_f(
            &space, &nodes, &phi, beta, diffusion, &options, &rule, &start, &node_phi, shift,
        )?;
        let coeffs = solve_element_coefficients(&f)?;
        Ok(FittedBasis {
            phi,
            beta,
            diffusion,
            space,
            nodes,
            options,
            start,
            rule,
            shift,
            node_phi,
            f,
            coeffs,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn space(&self) -> &DivFreeBasis {
        &self.space
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn options(&self) -> &FitOptions {
        &self.options
    }

    pub fn potential(&self) -> &P {
        &self.phi
    }

    pub fn start(&self) -> Point3 {
        self.start
    }

    /// The exponential shift `φ̄` (zero when disabled).
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// The system matrix, built with the shifted potential.
    pub fn system_matrix(&self) -> &DMatrix<f64> {
        &self.f
    }

    /// Solved coefficients for the shifted potential.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    /// `m_{j,i}` relative to the unshifted potential.
    pub fn m(&self, j: usize, i: usize) -> f64 {
        let c = self.coeffs[(i, j)];
        match self.options.variant {
            Variant::Slotboom => c * (-self.beta * self.shift).exp(),
            Variant::DirectU => c,
        }
    }

    /// The value of basis function `j` at the path start.
    pub fn start_value(&self, j: usize) -> f64 {
        self.coeffs[(self.space.len(), j)]
    }

    pub fn path_moments(&self, p: &Point3) -> Result<Vec<f64>, EvalError> {
        self.integrator().moments(self.options.path, &self.start, p)
    }

    fn integrator(&self) -> Integrator<'_, P> {
        Integrator {
            space: &self.space,
            phi: &self.phi,
            beta: self.beta,
            shift: self.shift,
            variant: self.options.variant,
            rule: &self.rule,
        }
    }

    /// The fitted quantity of every basis function at `p`: `ρ_j` for the
    /// Slotboom variant, `u_j` for the direct one.
    pub fn nodal_all(&self, p: &Point3) -> Result<Vec<f64>, EvalError> {
        let moments = self.path_moments(p)?;
        let n = self.space.len();
        let weight = match self.options.variant {
            Variant::Slotboom => 1.0 / self.diffusion,
            Variant::DirectU => (-self.beta * (self.phi.value(p)? - self.shift)).exp() / self.diffusion,
        };
        Ok((0..self.len())
            .map(|j| {
                let s: f64 = (0..n).map(|i| self.coeffs[(i, j)] * moments[i]).sum();
                self.coeffs[(n, j)] + weight * s
            })
            .collect())
    }

    pub fn nodal(&self, j: usize, p: &Point3) -> Result<f64, EvalError> {
        Ok(self.nodal_all(p)?[j])
    }

    /// `ρ_j` at every basis function.
    pub fn rho_all(&self, p: &Point3) -> Result<Vec<f64>, EvalError> {
        let mut v = self.nodal_all(p)?;
        if self.options.variant == Variant::DirectU {
            let phi = self.phi.value(p)?;
            for (x, pn) in v.iter_mut().zip(&self.node_phi) {
                *x *= (self.beta * (phi - pn)).exp();
            }
        }
        Ok(v)
    }

    /// `u_j`, scaled so that `u_j(node_i) = δ_ij`.
    pub fn u_all(&self, p: &Point3) -> Result<Vec<f64>, EvalError> {
        let mut v = self.nodal_all(p)?;
        if self.options.variant == Variant::Slotboom {
            let phi = self.phi.value(p)?;
            for (x, pn) in v.iter_mut().zip(&self.node_phi) {
                *x *= (self.beta * (pn - phi)).exp();
            }
        }
        Ok(v)
    }

    pub fn rho(&self, j: usize, p: &Point3) -> Result<f64, EvalError> {
        Ok(self.rho_all(p)?[j])
    }

    pub fn u(&self, j: usize, p: &Point3) -> Result<f64, EvalError> {
        Ok(self.u_all(p)?[j])
    }

    /// `(Σ_i m_ji v_i^y, -Σ_i m_ji v_i^x)` with the shifted coefficients;
    /// multiplied by `e^{β(φ - φ̄)}/D` it gives the reference gradient of `ρ_j`.
    pub fn rotated_sum(&self, j: usize, p: &Point3) -> [f64; 2] {
        let mut out = [0.0; 2];
        for i in 0..self.space.len() {
            let v = self.space.eval(i, p);
            let m = self.coeffs[(i, j)];
            out[0] += m * v[1];
            out[1] -= m * v[0];
        }
        out
    }

    /// Reference-coordinate canonical gradient of `ρ_j`.
    pub fn gradient(&self, j: usize, p: &Point3) -> Result<[f64; 2], FitError> {
        if self.options.variant != Variant::Slotboom {
            return Err(FitError::Unsupported(
                "canonical gradients are defined for the Slotboom construction",
            ));
        }
        let w = (self.beta * (self.phi.value(p)? - self.shift)).exp() / self.diffusion;
        let r = self.rotated_sum(j, p);
        Ok([w * r[0], w * r[1]])
    }

    /// Central-difference gradient of the path-integral representation of
    /// `ρ_j`. Diagnostic only.
    pub fn fd_gradient(&self, j: usize, p: &Point3, h: f64) -> Result<[f64; 2], EvalError> {
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            let (mut a, mut b) = (*p, *p);
            a[k] += h;
            b[k] -= h;
            *o = (self.rho(j, &a)? - self.rho(j, &b)?) / (2.0 * h);
        }
        Ok(out)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    /// Unshifted potential at node `j`.
    pub fn node_potential(&self, j: usize) -> f64 {
        self.node_phi[j]
    }
}

/// Direct construction on the reference tetrahedron with three-leg paths.
pub fn direct_u_basis_3d<P: Potential>(
    phi: P,
    beta: f64,
    diffusion: f64,
    nodes: NodeSet,
    path: PathRule,
) -> Result<FittedBasis<P>, FitError> {
    FittedBasis::new(
        DivFreeBasis::rt0_3d(),
        nodes,
        phi,
        beta,
        diffusion,
        FitOptions {
            variant: Variant::DirectU,
            path,
            ..FitOptions::default()
        },
    )
}

/// Closed forms of the direct `RT_0^0` density basis for `φ = ax + by + c`
/// with the path starting at the origin. `m = (m_1, m_2)` are the
/// coefficients of `(1,0)` and `(0,1)`, `u0` the value at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPhi {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    pub diffusion: f64,
    pub m: [f64; 2],
    pub u0: f64,
}

impl LinearPhi {
    pub fn new(a: f64, b: f64, beta: f64, diffusion: f64, m: [f64; 2], u0: f64) -> Result<Self, FitError> {
        if a == 0.0 || b == 0.0 {
            return Err(FitError::ZeroSlope);
        }
        Ok(LinearPhi {
            a,
            b,
            beta,
            diffusion,
            m,
            u0,
        })
    }

    fn ka(&self) -> f64 {
        self.beta * self.a * self.diffusion
    }

    fn kb(&self) -> f64 {
        self.beta * self.b * self.diffusion
    }

    /// Route `(0,0) → (x,0) → (x,y)`.
    pub fn x_then_y(&self, x: f64, y: f64) -> f64 {
        let (ea, eb) = ((-self.beta * self.a * x).exp(), (-self.beta * self.b * y).exp());
        let [m1, m2] = self.m;
        self.u0 + m2 / self.kb() + eb * (m1 / self.ka() - m2 / self.kb()) - m1 / self.ka() * ea * eb
    }

    /// Route `(0,0) → (0,y) → (x,y)`.
    pub fn y_then_x(&self, x: f64, y: f64) -> f64 {
        let (ea, eb) = ((-self.beta * self.a * x).exp(), (-self.beta * self.b * y).exp());
        let [m1, m2] = self.m;
        self.u0 + m1 / self.ka() + ea * (m2 / self.kb() - m1 / self.ka()) - m2 / self.kb() * ea * eb
    }

    pub fn average(&self, x: f64, y: f64) -> f64 {
        0.5 * (self.x_then_y(x, y) + self.y_then_x(x, y))
    }

    /// The averaged expansion in the grouping commonly quoted for this case:
    /// `u0 + m2(1/a + 1/b)/(2βD) + e^{-βby}(m1/a - m2/b)/(2βD)
    ///  + e^{-βax}(m1/b - m2/a)/(2βD) - m1(1/b + 1/a)e^{-β(ax+by)}/(2βD)`.
    pub fn quoted_average(&self, x: f64, y: f64) -> f64 {
        let (ea, eb) = ((-self.beta * self.a * x).exp(), (-self.beta * self.b * y).exp());
        let [m1, m2] = self.m;
        let k = 2.0 * self.beta * self.diffusion;
        let (a, b) = (self.a, self.b);
        self.u0 + m2 / k * (1.0 / a + 1.0 / b)
            + eb * (m1 / (k * a) - m2 / (k * b))
            + ea * (m1 / (k * b) - m2 / (k * a))
            - m1 * (1.0 / (k * b) + 1.0 / (k * a)) * ea * eb
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(_: &Point3) -> f64 {
        0.0
    }

    #[test]
    fn vertex_matrix_without_potential() {
        let f = assemble_f(
            &DivFreeBasis::rt0_2d(),
            &NodeSet::new(0, NodeKind::Vertices).unwrap(),
            &zero,
            1.0,
            1.0,
            &FitOptions::default(),
        )
        .unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 1.0, -1.0, 0.0, 1.0]);
        assert!((f - expected).amax() < 1e-15);
    }

    #[test]
    fn identity_solves_to_identity() {
        let m = solve_element_coefficients(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(m, DMatrix::identity(4, 4));
    }

    #[test]
    fn singular_is_flagged() {
        let f = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(solve_element_coefficients(&f), Err(FitError::Singular { .. })));
    }

    #[test]
    fn barycentric_value() {
        let fb = FittedBasis::new(
            DivFreeBasis::rt0_2d(),
            NodeSet::new(0, NodeKind::Vertices).unwrap(),
            zero,
            1.0,
            1.0,
            FitOptions::default(),
        )
        .unwrap();
        assert!((fb.rho(1, &[0.3, 0.3, 0.0]).unwrap() - 0.3).abs() < 1e-14);
        let g = fb.gradient(0, &[0.2, 0.2, 0.0]).unwrap();
        assert!((g[0] + 1.0).abs() < 1e-14 && (g[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn slotboom_rejects_3d() {
        let r = FittedBasis::new(
            DivFreeBasis::rt0_3d(),
            NodeSet::new(0, NodeKind::TetVertices).unwrap(),
            zero,
            1.0,
            1.0,
            FitOptions::default(),
        );
        assert!(matches!(r, Err(FitError::Unsupported(_))));
    }

    #[test]
    fn parse_enums() {
        assert_eq!("avg".parse::<PathRule>().unwrap(), PathRule::AverageXYYX);
        assert_eq!("direct_u".parse::<Variant>().unwrap(), Variant::DirectU);
        assert!("zz".parse::<PathRule>().is_err());
    }

    #[test]
    fn zero_slope_rejected() {
        assert_eq!(LinearPhi::new(0.0, 1.0, 1.0, 1.0, [1.0, 0.0], 0.0), Err(FitError::ZeroSlope));
    }

    #[test]
    fn constant_current_free_oracle() {
        let o = LinearPhi::new(1.0, 1.0, 1.0, 1.0, [0.0, 0.0], 1.0).unwrap();
        assert_eq!(o.average(0.3, 0.4), 1.0);
        assert_eq!(o.quoted_average(0.3, 0.4), 1.0);
    }
}
