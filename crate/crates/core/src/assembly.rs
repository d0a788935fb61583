//! Global Galerkin system in the Slotboom variable, boundary conditions and
//! linear solvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, Expression};
use crate::fitting::{FitError, FittedBasis, Potential, ProblemSpec, PulledBack, Variant};
use crate::mesh::{AffineMap, Marker, Mesh, MeshError, Point2};
use crate::quadrature::TriangleRule;
use crate::refspace::{NodeKind, NodeSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("CG did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("matrix is not positive definite (curvature {curvature:.3e} at iteration {iteration})")]
    Indefinite { iteration: usize, curvature: f64 },
}

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("element {element}: {source}")]
    Element { element: usize, source: FitError },
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("point ({}, {}) lies outside the mesh", .0[0], .0[1])]
    OutsideDomain(Point2),
    #[error("{0}")]
    Unsupported(&'static str),
}

/// Global node numbering and Dirichlet constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct DofTable {
    kind: NodeKind,
    positions: Vec<Point2>,
    constrained: Vec<bool>,
    free_index: Vec<Option<usize>>,
    free_count: usize,
    element_nodes: Vec<Vec<usize>>,
}

impl DofTable {
    pub fn new(mesh: &Mesh, kind: NodeKind) -> Result<Self, AssemblyError> {
        let nv = mesh.num_vertices();
        let dirichlet_vertex = mesh.dirichlet_vertices();
        let dirichlet_edge: Vec<bool> = (0..mesh.edges().len())
            .map(|e| mesh.edge_marker(e) == Some(Marker::Dirichlet))
            .collect();
        let edge_pos = || (0..mesh.edges().len()).map(|e| mesh.edge_midpoint(e));
        let (positions, constrained, element_nodes): (Vec<Point2>, Vec<bool>, Vec<Vec<usize>>) = match kind {
            NodeKind::Vertices => (
                mesh.vertices().to_vec(),
                dirichlet_vertex,
                mesh.triangles().iter().map(|t| t.to_vec()).collect(),
            ),
            NodeKind::Midpoints => (
                edge_pos().collect(),
                dirichlet_edge,
                mesh.triangle_edges().iter().map(|e| e.to_vec()).collect(),
            ),
            NodeKind::P2 => (
                mesh.vertices().iter().copied().chain(edge_pos()).collect(),
                dirichlet_vertex.into_iter().chain(dirichlet_edge).collect(),
                mesh.triangles()
                    .iter()
                    .zip(mesh.triangle_edges())
                    .map(|(t, e)| t.iter().copied().chain(e.iter().map(|&e| nv + e)).collect())
                    .collect(),
            ),
            NodeKind::TetVertices | NodeKind::TetFaceCenters => {
                return Err(AssemblyError::Unsupported("tetrahedral node sets have no global assembly"))
            }
        };
        let mut free_count = 0;
        let free_index = constrained
            .iter()
            .map(|&c| {
                (!c).then(|| {
                    free_count += 1;
                    free_count - 1
                })
            })
            .collect();
        Ok(DofTable {
            kind,
            positions,
            constrained,
            free_index,
            free_count,
            element_nodes,
        })
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn free_count(&self) -> usize {
        self.free_count
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn is_constrained(&self, node: usize) -> bool {
        self.constrained[node]
    }

    pub fn free_index(&self, node: usize) -> Option<usize> {
        self.free_index[node]
    }

    /// Global nodes of triangle `t` in local basis order.
    pub fn element_nodes(&self, t: usize) -> &[usize] {
        &self.element_nodes[t]
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Sums duplicate entries. The summation order is the input order, so the
    /// result is deterministic for a deterministic triplet stream.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut cols: Vec<usize> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            n,
            row_ptr,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[k] * x[self.cols[k]];
            }
            *out = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] = self.values[k];
            }
        }
        m
    }

    /// Entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k]))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub parallel: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { parallel: true }
    }
}

pub type ElementBasis<'a> = FittedBasis<PulledBack<'a>>;

/// The free-node system with Dirichlet values eliminated.
#[derive(Debug, Clone)]
pub struct GlobalSystem<'a> {
    pub mesh: &'a Mesh,
    pub problem: &'a ProblemSpec,
    pub dofs: DofTable,
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Prescribed `ρ` at constrained nodes, zero elsewhere.
    pub dirichlet: Vec<f64>,
    pub bases: Vec<ElementBasis<'a>>,
}

struct Local {
    a: DMatrix<f64>,
    b: Vec<f64>,
}

fn element_basis<'a>(
    mesh: &Mesh,
    problem: &'a ProblemSpec,
    t: usize,
) -> Result<ElementBasis<'a>, AssemblyError> {
    let map = mesh.affine_map(t)?;
    FittedBasis::new(
        problem.space()?,
        NodeSet::new(problem.order, problem.nodes).map_err(|_| {
            AssemblyError::Fit(FitError::Unsupported("node set does not match the space order"))
        })?,
        PulledBack {
            expr: &problem.phi,
            map,
        },
        problem.beta,
        problem.diffusion,
        problem.options,
    )
    .map_err(|source| AssemblyError::Element { element: t, source })
}

/// Local stiffness `∫ D e^{-βφ} ∇ρ_p · ∇ρ_q` and load `∫ f ρ_p`.
fn local_system(
    fb: &ElementBasis<'_>,
    f: &Expression,
    map: &AffineMap,
    rule: &TriangleRule,
) -> Result<Local, AssemblyError> {
    let n = fb.len();
    let mut a = DMatrix::zeros(n, n);
    let mut b = vec![0.0; n];
    let (beta, d, shift) = (fb.beta(), fb.diffusion(), fb.shift());
    let det = map.det.abs();
    let mut grads = vec![[0.0; 2]; n];
    for (r, &w) in rule.points.iter().zip(&rule.weights) {
        let p = [r[0], r[1], 0.0];
        let phi = fb.potential().value(&p)?;
        let weight = w * det * (beta * (phi - 2.0 * shift)).exp() / d;
        for (j, g) in grads.iter_mut().enumerate() {
            *g = map.push_gradient(fb.rotated_sum(j, &p));
        }
        for i in 0..n {
            for j in i..n {
                let v = weight * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                a[(i, j)] += v;
            }
        }
        let fv = f.eval(&map.apply(*r))?;
        if fv != 0.0 {
            let rho = fb.rho_all(&p)?;
            for (bi, ri) in b.iter_mut().zip(&rho) {
                *bi += w * det * fv * ri;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
        }
    }
    Ok(Local { a, b })
}

pub fn assemble<'a>(
    mesh: &'a Mesh,
    problem: &'a ProblemSpec,
    options: AssemblyOptions,
) -> Result<GlobalSystem<'a>, AssemblyError> {
    problem.validate()?;
    if problem.options.variant != Variant::Slotboom {
        return Err(AssemblyError::Unsupported(
            "global assembly uses the Slotboom construction",
        ));
    }
    let dofs = DofTable::new(mesh, problem.nodes)?;
    let rule = TriangleRule::with_degree(problem.triangle_degree);

    let dirichlet = dofs
        .positions()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            if dofs.is_constrained(k) {
                Ok(problem.g.eval(p)? * (problem.beta * problem.phi.eval(p)?).exp())
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<Vec<_>, EvalError>>()?;

    let work = |t: usize| -> Result<(ElementBasis<'a>, Local), AssemblyError> {
        let fb = element_basis(mesh, problem, t)?;
        let map = mesh.affine_map(t)?;
        let local = local_system(&fb, &problem.f, &map, &rule)
            .map_err(|e| match e {
                AssemblyError::Eval(source) => AssemblyError::Element {
                    element: t,
                    source: FitError::Eval(source),
                },
                other => other,
            })?;
        Ok((fb, local))
    };
    let results: Vec<_> = if options.parallel {
        (0..mesh.num_triangles()).into_par_iter().map(work).collect()
    } else {
        (0..mesh.num_triangles()).map(work).collect()
    };

    let mut triplets = Vec::new();
    let mut rhs = vec![0.0; dofs.free_count()];
    let mut bases = Vec::with_capacity(results.len());
    for (t, res) in results.into_iter().enumerate() {
        let (fb, local) = res?;
        let nodes = dofs.element_nodes(t);
        for (p, &gp) in nodes.iter().enumerate() {
            let Some(row) = dofs.free_index(gp) else { continue };
            rhs[row] += local.b[p];
            for (q, &gq) in nodes.iter().enumerate() {
                match dofs.free_index(gq) {
                    Some(col) => triplets.push((row, col, local.a[(p, q)])),
                    None => rhs[row] -= local.a[(p, q)] * dirichlet[gq],
                }
            }
        }
        bases.push(fb);
    }
    let matrix = CsrMatrix::from_triplets(dofs.free_count(), triplets);
    Ok(GlobalSystem {
        mesh,
        problem,
        dofs,
        matrix,
        rhs,
        dirichlet,
        bases,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Use dense Cholesky up to this many free nodes.
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 10_000,
            dense_threshold: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
    pub dense: bool,
}

fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; b.len()];
    a.mul_vec(x, &mut ax);
    let r: f64 = ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nb == 0.0 {
        r
    } else {
        r / nb
    }
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn pcg(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveStats), SolveError> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nb == 0.0 {
        return Ok((x, SolveStats { iterations: 0, residual: 0.0, dense: false }));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        a.mul_vec(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 {
            return Err(SolveError::Indefinite { iteration: it, curvature });
        }
        let alpha = rz / curvature;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let res = dot(&r, &r).sqrt() / nb;
        if res <= tol {
            return Ok((x, SolveStats { iterations: it, residual: res, dense: false }));
        }
        for k in 0..n {
            z[k] = r[k] * inv_diag[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(SolveError::NotConverged {
        iterations: max_iter,
        residual: dot(&r, &r).sqrt() / nb,
    })
}

/// Dense Cholesky solve.
pub fn cholesky_solve(a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveStats), SolveError> {
    let chol = a.to_dense().cholesky().ok_or(SolveError::Indefinite {
        iteration: 0,
        curvature: f64::NAN,
    })?;
    let x = chol.solve(&DVector::from_column_slice(b));
    let x: Vec<f64> = x.iter().copied().collect();
    let residual = relative_residual(a, &x, b);
    Ok((x, SolveStats { iterations: 0, residual, dense: true }))
}

pub fn solve<'a>(system: GlobalSystem<'a>, options: SolverOptions) -> Result<Solution<'a>, AssemblyError> {
    let (x, stats) = if system.dofs.free_count() <= options.dense_threshold {
        cholesky_solve(&system.matrix, &system.rhs)?
    } else {
        pcg(&system.matrix, &system.rhs, options.tol, options.max_iter)?
    };
    let rho = (0..system.dofs.len())
        .map(|k| match system.dofs.free_index(k) {
            Some(i) => x[i],
            None => system.dirichlet[k],
        })
        .collect();
    Ok(Solution {
        mesh: system.mesh,
        problem: system.problem,
        dofs: system.dofs,
        bases: system.bases,
        rho,
        stats,
    })
}

/// A point sample of the discrete solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub rho: f64,
    pub u: f64,
    pub current: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct Solution<'a> {
    mesh: &'a Mesh,
    problem: &'a ProblemSpec,
    dofs: DofTable,
    bases: Vec<ElementBasis<'a>>,
    rho: Vec<f64>,
    stats: SolveStats,
}

impl<'a> Solution<'a> {
    pub fn mesh(&self) -> &'a Mesh {
        self.mesh
    }

    pub fn problem(&self) -> &'a ProblemSpec {
        self.problem
    }

    pub fn dofs(&self) -> &DofTable {
        &self.dofs
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    pub fn basis(&self, t: usize) -> &ElementBasis<'a> {
        &self.bases[t]
    }

    /// Nodal `ρ` values, constrained nodes included.
    pub fn nodal_rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn nodal_u(&self) -> Result<Vec<f64>, EvalError> {
        self.dofs
            .positions()
            .iter()
            .zip(&self.rho)
            .map(|(p, r)| Ok(r * (-self.problem.beta * self.problem.phi.eval(p)?).exp()))
            .collect()
    }

    /// `ρ_h` on triangle `t` at reference point `r`.
    pub fn rho_in(&self, t: usize, r: Point2) -> Result<f64, EvalError> {
        let vals = self.bases[t].rho_all(&[r[0], r[1], 0.0])?;
        Ok(self
            .dofs
            .element_nodes(t)
            .iter()
            .zip(&vals)
            .map(|(&g, v)| self.rho[g] * v)
            .sum())
    }

    /// Physical canonical gradient of `ρ_h` on triangle `t`.
    pub fn grad_rho_in(&self, t: usize, r: Point2) -> Result<[f64; 2], EvalError> {
        let fb = &self.bases[t];
        let p = [r[0], r[1], 0.0];
        let w = (fb.beta() * (fb.potential().value(&p)? - fb.shift())).exp() / fb.diffusion();
        let g = self.weighted_direction(t, &p);
        let g = fb.potential().map.push_gradient(g);
        Ok([w * g[0], w * g[1]])
    }

    fn weighted_direction(&self, t: usize, p: &[f64; 3]) -> [f64; 2] {
        let fb = &self.bases[t];
        let mut out = [0.0; 2];
        for (j, &g) in self.dofs.element_nodes(t).iter().enumerate() {
            let r = fb.rotated_sum(j, p);
            out[0] += self.rho[g] * r[0];
            out[1] += self.rho[g] * r[1];
        }
        out
    }

    /// Current `D e^{-βφ} ∇ρ_h`; the exponentials cancel to `e^{-βφ̄}`.
    pub fn current_in(&self, t: usize, r: Point2) -> [f64; 2] {
        let fb = &self.bases[t];
        let g = fb.potential().map.push_gradient(self.weighted_direction(t, &[r[0], r[1], 0.0]));
        let s = (-fb.beta() * fb.shift()).exp();
        [s * g[0], s * g[1]]
    }

    pub fn sample_in(&self, t: usize, r: Point2) -> Result<Sample, EvalError> {
        let rho = self.rho_in(t, r)?;
        let x = self.bases[t].potential().map.apply(r);
        let u = rho * (-self.problem.beta * self.problem.phi.eval(&x)?).exp();
        Ok(Sample {
            rho,
            u,
            current: self.current_in(t, r),
        })
    }

    /// Evaluates at a physical point, locating the element by walking from
    /// `hint`.
    pub fn evaluate_with_hint(&self, p: Point2, hint: usize) -> Result<(usize, Sample), AssemblyError> {
        let (t, r) = self.mesh.locate(p, hint).ok_or(AssemblyError::OutsideDomain(p))?;
        Ok((t, self.sample_in(t, r)?))
    }

    pub fn evaluate(&self, p: Point2) -> Result<Sample, AssemblyError> {
        Ok(self.evaluate_with_hint(p, 0)?.1)
    }
}

/// Convenience: assemble and solve.
pub fn solve_problem<'a>(
    mesh: &'a Mesh,
    problem: &'a ProblemSpec,
    assembly: AssemblyOptions,
    solver: SolverOptions,
) -> Result<Solution<'a>, AssemblyError> {
    solve(assemble(mesh, problem, assembly)?, solver)
}

/// Extreme eigenvalues of a free block next to the interval predicted from
/// the zero-potential block and the weights `e^{-β max|φ|}`, `e^{-β min|φ|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumBracket {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SpectrumBracket {
    /// Whether the spectrum lies in the predicted interval widened by `slack`.
    pub fn holds(&self, slack: f64) -> bool {
        self.lambda_min >= self.lower * (1.0 - slack) && self.lambda_max <= self.upper * (1.0 + slack)
    }
}

fn extreme_eigenvalues(a: &CsrMatrix) -> (f64, f64) {
    let e = SymmetricEigen::new(a.to_dense()).eigenvalues;
    (e.min(), e.max())
}

/// Dense eigenvalue diagnostic. `phi_range` is `(min|φ|, max|φ|)` over the
/// domain.
pub fn spectrum_bracket(
    mesh: &Mesh,
    problem: &ProblemSpec,
    phi_range: (f64, f64),
) -> Result<SpectrumBracket, AssemblyError> {
    let options = AssemblyOptions { parallel: true };
    let sys = assemble(mesh, problem, options)?;
    let flat = ProblemSpec {
        phi: Expression::constant(0.0),
        ..problem.clone()
    };
    let sys0 = assemble(mesh, &flat, options)?;
    let (lambda_min, lambda_max) = extreme_eigenvalues(&sys.matrix);
    let (l0, u0) = extreme_eigenvalues(&sys0.matrix);
    Ok(SpectrumBracket {
        lambda_min,
        lambda_max,
        lower: (-problem.beta * phi_range.1).exp() * l0,
        upper: (-problem.beta * phi_range.0).exp() * u0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Side;

    #[test]
    fn dof_counts() {
        let m1 = Mesh::unit_square(1, &Side::ALL);
        let d = DofTable::new(&m1, NodeKind::Vertices).unwrap();
        assert_eq!((d.len(), d.free_count()), (4, 0));
        let m2 = Mesh::unit_square(2, &Side::ALL);
        let d = DofTable::new(&m2, NodeKind::Vertices).unwrap();
        assert_eq!((d.len(), d.free_count()), (9, 1));
        assert_eq!(DofTable::new(&m2, NodeKind::Midpoints).unwrap().len(), 16);
        assert_eq!(DofTable::new(&m2, NodeKind::P2).unwrap().len(), 25);
    }

    #[test]
    fn csr_sums_duplicates() {
        let a = CsrMatrix::from_triplets(2, vec![(1, 1, 2.0), (0, 0, 1.0), (1, 1, 3.0), (0, 1, -1.0)]);
        assert_eq!(a.get(1, 1), 5.0);
        assert_eq!(a.get(1, 0), 0.0);
        assert_eq!(a.nnz(), 3);
        let mut y = [0.0; 2];
        a.mul_vec(&[1.0, 1.0], &mut y);
        assert_eq!(y, [0.0, 5.0]);
    }

    #[test]
    fn one_by_one() {
        let a = CsrMatrix::from_triplets(1, vec![(0, 0, 4.0)]);
        let (x, _) = pcg(&a, &[2.0], 1e-12, 10).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15);
        let (x, _) = cholesky_solve(&a, &[2.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn indefinite_detected() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 1, -1.0)]);
        assert!(matches!(pcg(&a, &[0.0, 1.0], 1e-12, 10), Err(SolveError::Indefinite { .. })));
        assert!(cholesky_solve(&a, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn cg_reports_non_convergence() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let b = vec![1.0; n];
        assert!(matches!(pcg(&a, &b, 1e-14, 3), Err(SolveError::NotConverged { iterations: 3, .. })));
        let (x, s) = pcg(&a, &b, 1e-12, 1000).unwrap();
        assert!(relative_residual(&a, &x, &b) <= 1e-11 && s.residual <= 1e-12);
    }
}
