//! Error norms against exact solutions and convergence tables.

use std::fmt;

use rayon::prelude::*;

use crate::assembly::{solve_problem, AssemblyError, AssemblyOptions, Solution, SolverOptions};
use crate::expr::{EvalError, Expression};
use crate::fitting::ProblemSpec;
use crate::mesh::{Mesh, Point2, Side};
use crate::quadrature::TriangleRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rho,
    U,
}

fn sum_over_elements(
    sol: &Solution<'_>,
    per_point: impl Fn(usize, Point2, Point2) -> Result<f64, EvalError> + Sync,
    rule: &TriangleRule,
) -> Result<f64, EvalError> {
    let mesh = sol.mesh();
    let parts = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let map = sol.basis(t).potential().map;
            let mut s = 0.0;
            for (r, &w) in rule.points.iter().zip(&rule.weights) {
                s += w * per_point(t, *r, map.apply(*r))?;
            }
            Ok(s * map.det.abs())
        })
        .collect::<Result<Vec<f64>, EvalError>>()?;
    Ok(parts.iter().sum())
}

/// `(Σ_K ∫_K |∇ρ - ∇ρ_h|²)^{1/2}` with an exact gradient given as a closure
/// of physical coordinates.
pub fn broken_h1_error_with(
    sol: &Solution<'_>,
    grad: impl Fn(Point2) -> Result<[f64; 2], EvalError> + Sync,
    rule: &TriangleRule,
) -> Result<f64, EvalError> {
    let s = sum_over_elements(
        sol,
        move |t, r, x| {
            let e = grad(x)?;
            let h = sol.grad_rho_in(t, r)?;
            Ok((e[0] - h[0]).powi(2) + (e[1] - h[1]).powi(2))
        },
        rule,
    )?;
    Ok(s.sqrt())
}

pub fn broken_h1_error(sol: &Solution<'_>, grad: &[Expression; 2], rule: &TriangleRule) -> Result<f64, EvalError> {
    broken_h1_error_with(sol, |x| Ok([grad[0].eval(&x)?, grad[1].eval(&x)?]), rule)
}

/// L² error of `ρ_h` or `u_h` against an exact `ρ` or `u` closure.
pub fn l2_error_with(
    sol: &Solution<'_>,
    exact: impl Fn(Point2) -> Result<f64, EvalError> + Sync,
    field: Field,
    rule: &TriangleRule,
) -> Result<f64, EvalError> {
    let s = sum_over_elements(
        sol,
        move |t, r, x| {
            let s = sol.sample_in(t, r)?;
            let v = match field {
                Field::Rho => s.rho,
                Field::U => s.u,
            };
            Ok((exact(x)? - v).powi(2))
        },
        rule,
    )?;
    Ok(s.sqrt())
}

pub fn l2_error(sol: &Solution<'_>, exact: &Expression, field: Field, rule: &TriangleRule) -> Result<f64, EvalError> {
    l2_error_with(sol, |x| exact.eval(&x), field, rule)
}

/// An exact Slotboom solution and its gradient.
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub rho: Expression,
    pub grad: [Expression; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub h: f64,
    pub dofs: usize,
    pub err_h1: f64,
    pub err_l2_rho: f64,
    pub err_l2_u: f64,
    /// `log2` ratio of consecutive broken-norm errors; absent on the first row.
    pub rate_h1: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn push(&mut self, mut row: ErrorRow) {
        if let Some(prev) = self.rows.last() {
            row.rate_h1 = Some((prev.err_h1 / row.err_h1).log2());
        }
        self.rows.push(row);
    }

    pub fn last_rate(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.rate_h1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,dofs,err_h1_broken,err_l2_rho,err_l2_u,rate_h1\n");
        for r in &self.rows {
            let rate = r.rate_h1.map(|v| format!("{v:.6}")).unwrap_or_default();
            out.push_str(&format!(
                "{:.16e},{},{:.16e},{:.16e},{:.16e},{}\n",
                r.h, r.dofs, r.err_h1, r.err_l2_rho, r.err_l2_u, rate
            ));
        }
        out
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} {:>10} {:>8} {:>12} {:>12} {:>12} {:>7}",
            "n", "h", "dofs", "|e|_h", "|e_rho|_L2", "|e_u|_L2", "rate"
        )?;
        for r in &self.rows {
            let rate = r.rate_h1.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:>5} {:>10.4e} {:>8} {:>12.4e} {:>12.4e} {:>12.4e} {:>7}",
                r.n, r.h, r.dofs, r.err_h1, r.err_l2_rho, r.err_l2_u, rate
            )?;
        }
        Ok(())
    }
}

/// Errors of one solve against a manufactured solution.
pub fn measure(sol: &Solution<'_>, exact: &Manufactured, n: usize, rule: &TriangleRule) -> Result<ErrorRow, EvalError> {
    let problem = sol.problem();
    let u_exact = |x: Point2| Ok(exact.rho.eval(&x)? * (-problem.beta * problem.phi.eval(&x)?).exp());
    Ok(ErrorRow {
        n,
        h: sol.mesh().h(),
        dofs: sol.dofs().len(),
        err_h1: broken_h1_error(sol, &exact.grad, rule)?,
        err_l2_rho: l2_error(sol, &exact.rho, Field::Rho, rule)?,
        err_l2_u: l2_error_with(sol, u_exact, Field::U, rule)?,
        rate_h1: None,
    })
}

#[derive(Debug, Clone)]
pub struct StudyOptions {
    pub n0: usize,
    pub levels: usize,
    pub dirichlet: Vec<Side>,
    pub assembly: AssemblyOptions,
    pub solver: SolverOptions,
}

/// Solves on `unit_square(n0 · 2^ℓ)` for `ℓ < levels` and tabulates errors.
pub fn convergence_study(
    problem: &ProblemSpec,
    exact: &Manufactured,
    options: &StudyOptions,
) -> Result<ErrorReport, AssemblyError> {
    let rule = TriangleRule::with_degree(problem.triangle_degree);
    let mut report = ErrorReport::default();
    for level in 0..options.levels {
        let n = options.n0 << level;
        let mesh = Mesh::unit_square(n, &options.dirichlet);
        let sol = solve_problem(&mesh, problem, options.assembly, options.solver)?;
        report.push(measure(&sol, exact, n, &rule)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, e: f64) -> ErrorRow {
        ErrorRow {
            n,
            h: 1.0 / n as f64,
            dofs: n * n,
            err_h1: e,
            err_l2_rho: e,
            err_l2_u: e,
            rate_h1: None,
        }
    }

    #[test]
    fn rates_from_second_row() {
        let mut r = ErrorReport::default();
        r.push(row(4, 0.4));
        r.push(row(8, 0.2));
        r.push(row(16, 0.05));
        assert_eq!(r.rows[0].rate_h1, None);
        assert!((r.rows[1].rate_h1.unwrap() - 1.0).abs() < 1e-15);
        assert!((r.last_rate().unwrap() - 2.0).abs() < 1e-15);
        let csv = r.to_csv();
        assert!(csv.starts_with("h,dofs,err_h1_broken,err_l2_rho,err_l2_u,rate_h1\n"));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }
}
