use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};

use expfit::analysis::{broken_h1_error, l2_error, measure};
use expfit::fitting::{FitError, LinearPhi};
use expfit::nalgebra::DMatrix;
use expfit::{
    assemble, convergence_study, solve, AssemblyError, AssemblyOptions, Expression, Field, FitOptions,
    FittedBasis, Mesh, NodeKind, NodeSet, PathRule, Point3, StudyOptions, TriangleRule, Variant,
};

use crate::config::RunConfig;

pub struct Run<'a> {
    pub config: &'a RunConfig,
    pub out: &'a Path,
    pub serial: bool,
}

impl Run<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<()> {
        let path = self.out.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    }

    fn assembly(&self) -> AssemblyOptions {
        AssemblyOptions { parallel: !self.serial }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Lattice over the reference triangle, row by row.
fn triangle_lattice(n: usize) -> Vec<Point3> {
    let h = 1.0 / (n - 1) as f64;
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n - j {
            out.push([i as f64 * h, j as f64 * h, 0.0]);
        }
    }
    out
}

fn tet_lattice(n: usize) -> Vec<Point3> {
    let h = 1.0 / (n - 1) as f64;
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..n - k {
            for i in 0..n - j - k {
                out.push([i as f64 * h, j as f64 * h, k as f64 * h]);
            }
        }
    }
    out
}

fn bounding_box(mesh: &Mesh) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in mesh.vertices() {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    (lo, hi)
}

fn format_matrix(m: &DMatrix<f64>) -> String {
    let mut s = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:>10.6}", m[(r, c)])).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn solve_cmd(ctx: &Run<'_>) -> Result<String> {
    let cfg = ctx.config;
    let started = Instant::now();
    let mesh = cfg.mesh()?;
    let spec = cfg.full_spec()?;
    if spec.options.variant != Variant::Slotboom {
        bail!("solve: `method.variant` must be `slotboom` for global solves");
    }
    let system = assemble(&mesh, &spec, ctx.assembly()).map_err(|e| match e {
        AssemblyError::Element { element, source } => anyhow!("element {element}: {source}"),
        other => anyhow!(other),
    })?;
    let dofs = system.dofs.len();
    let free = system.dofs.free_count();
    let sol = solve(system, cfg.solver())?;
    let elapsed = started.elapsed();

    let (lo, hi) = bounding_box(&mesh);
    let n = cfg.output.grid_n;
    let mut csv = String::from("x,y,rho,u,Jx,Jy\n");
    let mut hint = 0;
    let mut max_j: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let p = [
                lo[0] + (hi[0] - lo[0]) * i as f64 / (n - 1) as f64,
                lo[1] + (hi[1] - lo[1]) * j as f64 / (n - 1) as f64,
            ];
            let (t, s) = match sol.evaluate_with_hint(p, hint) {
                Ok(v) => v,
                Err(AssemblyError::OutsideDomain(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            hint = t;
            max_j = max_j.max(s.current[0].hypot(s.current[1]));
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                num(p[0]),
                num(p[1]),
                num(s.rho),
                num(s.u),
                num(s.current[0]),
                num(s.current[1])
            );
        }
    }
    ctx.write("field.csv", &csv)?;

    let stats = sol.stats();
    let mut summary = String::new();
    let _ = writeln!(summary, "elements      {}", mesh.num_triangles());
    let _ = writeln!(summary, "dofs          {dofs}");
    let _ = writeln!(summary, "free dofs     {free}");
    let _ = writeln!(summary, "solver        {}", if stats.dense { "cholesky" } else { "pcg" });
    let _ = writeln!(summary, "iterations    {}", stats.iterations);
    let _ = writeln!(summary, "residual      {:.3e}", stats.residual);
    let _ = writeln!(summary, "max |J|       {max_j:.3e}");
    if let Some(exact) = &cfg.problem.exact_rho {
        let rule = TriangleRule::with_degree(spec.triangle_degree);
        let rho: Expression = exact.parse().map_err(|e| anyhow!("{e}"))?;
        let _ = writeln!(summary, "L2 error rho  {:.6e}", l2_error(&sol, &rho, Field::Rho, &rule)?);
        if let Ok(m) = cfg.manufactured() {
            let _ = writeln!(summary, "broken H1     {:.6e}", broken_h1_error(&sol, &m.grad, &rule)?);
            let row = measure(&sol, &m, 0, &rule)?;
            let _ = writeln!(summary, "L2 error u    {:.6e}", row.err_l2_u);
        }
    }
    let _ = writeln!(summary, "wall time     {:.3} s", elapsed.as_secs_f64());
    ctx.write("summary.txt", &summary)?;
    Ok(summary)
}

pub fn basis_cmd(ctx: &Run<'_>) -> Result<String> {
    let cfg = ctx.config;
    let method = cfg.method()?;
    let p = &cfg.problem;
    let phi: Expression = p.phi.parse().map_err(|e| anyhow!("config: `problem.phi`: {e}"))?;
    let dim = method.space.spatial_dim();
    let fb = match FittedBasis::new(
        method.space.clone(),
        method.node_set.clone(),
        phi.clone(),
        p.beta,
        p.d,
        method.options,
    ) {
        Ok(fb) => fb,
        Err(e @ FitError::Singular { .. }) => {
            let f = expfit::assemble_f(&method.space, &method.node_set, &phi, p.beta, p.d, &method.options)?;
            print!("{}", format_matrix(&f));
            bail!("reference element: {e}");
        }
        Err(e) => return Err(e.into()),
    };

    let mut report = String::new();
    let _ = writeln!(report, "system matrix (shift {:.6e}):", fb.shift());
    report.push_str(&format_matrix(fb.system_matrix()));
    ctx.write("matrix.txt", &report)?;

    let points = if dim == 2 {
        triangle_lattice(cfg.output.grid_n)
    } else {
        tet_lattice(cfg.output.grid_n)
    };
    let mut files: Vec<String> = (0..fb.len())
        .map(|_| {
            if dim == 2 {
                "x,y,rho,u\n".to_string()
            } else {
                "x,y,z,rho,u\n".to_string()
            }
        })
        .collect();
    for q in &points {
        let rho = fb.rho_all(q)?;
        let u = fb.u_all(q)?;
        for (j, file) in files.iter_mut().enumerate() {
            let coords: Vec<String> = q[..dim].iter().map(|&c| num(c)).collect();
            let _ = writeln!(file, "{},{},{}", coords.join(","), num(rho[j]), num(u[j]));
        }
    }
    for (j, file) in files.iter().enumerate() {
        ctx.write(&format!("basis_{}.csv", j + 1), file)?;
    }
    let mut worst: f64 = 0.0;
    for (i, n) in fb.nodes().points.iter().enumerate() {
        for (j, v) in fb.u_all(n)?.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let _ = writeln!(report, "basis functions {}", fb.len());
    let _ = writeln!(report, "max nodal deviation {worst:.3e}");
    Ok(report)
}

pub fn converge_cmd(ctx: &Run<'_>, levels: usize) -> Result<String> {
    let cfg = ctx.config;
    if cfg.mesh.file.is_some() {
        bail!("converge: uses structured unit-square meshes; remove `mesh.file`");
    }
    if levels < 2 {
        bail!("converge: `--levels` must be at least 2");
    }
    let spec = cfg.full_spec()?;
    let exact = cfg.manufactured()?;
    let report = convergence_study(
        &spec,
        &exact,
        &StudyOptions {
            n0: cfg.mesh.unit_square_n,
            levels,
            dirichlet: cfg.dirichlet_sides()?,
            assembly: ctx.assembly(),
            solver: cfg.solver(),
        },
    )?;
    ctx.write("convergence.csv", &report.to_csv())?;
    Ok(report.to_string())
}

fn rt0_basis(cfg: &RunConfig, phi: &Expression, variant: Variant, path: PathRule) -> Result<FittedBasis<Expression>> {
    let kind = match &cfg.method.nodeset {
        Some(s) => s.parse::<NodeKind>().map_err(|e| anyhow!(e))?,
        None => NodeKind::Vertices,
    };
    let nodes = NodeSet::new(0, kind)?;
    Ok(FittedBasis::new(
        expfit::DivFreeBasis::rt0_2d(),
        nodes,
        phi.clone(),
        cfg.problem.beta,
        cfg.problem.d,
        FitOptions {
            variant,
            path,
            start: None,
            shift: cfg.method.shift != "off",
            segment_order: cfg.quad.segment_order,
        },
    )?)
}

pub fn pathdiff_cmd(ctx: &Run<'_>) -> Result<String> {
    let cfg = ctx.config;
    if cfg.method.space != "rt0" {
        bail!("pathdiff: requires `method.space = \"rt0\"`");
    }
    let phi: Expression = cfg.problem.phi.parse().map_err(|e| anyhow!("config: `problem.phi`: {e}"))?;
    let s_xy = rt0_basis(cfg, &phi, Variant::Slotboom, PathRule::XThenY)?;
    let s_yx = rt0_basis(cfg, &phi, Variant::Slotboom, PathRule::YThenX)?;
    let d_line = rt0_basis(cfg, &phi, Variant::DirectU, PathRule::StraightLine)?;
    let d_xy = rt0_basis(cfg, &phi, Variant::DirectU, PathRule::XThenY)?;

    let mut csv = String::from("x,y,slotboom_xy_minus_yx,direct_line_minus_xy\n");
    let (mut max_s, mut max_d): (f64, f64) = (0.0, 0.0);
    for q in triangle_lattice(cfg.output.grid_n) {
        let a = s_xy.u(0, &q)? - s_yx.u(0, &q)?;
        let b = d_line.u(0, &q)? - d_xy.u(0, &q)?;
        max_s = max_s.max(a.abs());
        max_d = max_d.max(b.abs());
        let _ = writeln!(csv, "{},{},{},{}", num(q[0]), num(q[1]), num(a), num(b));
    }
    ctx.write("pathdiff.csv", &csv)?;
    let mut at_nodes: f64 = 0.0;
    for n in &s_xy.nodes().points {
        for (x, y) in s_xy.u_all(n)?.iter().zip(s_yx.u_all(n)?) {
            at_nodes = at_nodes.max((x - y).abs());
        }
        for (x, y) in d_line.u_all(n)?.iter().zip(d_xy.u_all(n)?) {
            at_nodes = at_nodes.max((x - y).abs());
        }
    }
    let mut report = String::new();
    let _ = writeln!(report, "max |u1(xy) - u1(yx)|         {max_s:.6e}");
    let _ = writeln!(report, "max |u1(line) - u1(xy)|       {max_d:.6e}");
    let _ = writeln!(report, "max difference at nodes       {at_nodes:.6e}");

    if let Some(oracle) = &cfg.oracle {
        let [a, b, _] = oracle.linear_phi;
        let fb = FittedBasis::new(
            expfit::DivFreeBasis::rt0_2d(),
            NodeSet::new(0, NodeKind::Vertices)?,
            phi.clone(),
            cfg.problem.beta,
            cfg.problem.d,
            FitOptions {
                variant: Variant::DirectU,
                path: PathRule::AverageXYYX,
                start: Some([0.0; 3]),
                shift: cfg.method.shift != "off",
                segment_order: cfg.quad.segment_order,
            },
        )?;
        let (mut closed, mut quoted): (f64, f64) = (0.0, 0.0);
        for j in 0..3 {
            let o = LinearPhi::new(a, b, cfg.problem.beta, cfg.problem.d, [fb.m(j, 0), fb.m(j, 1)], fb.start_value(j))?;
            for q in triangle_lattice(10) {
                let v = fb.nodal(j, &q)?;
                closed = closed.max((v - o.average(q[0], q[1])).abs());
                quoted = quoted.max((v - o.quoted_average(q[0], q[1])).abs());
            }
        }
        let _ = writeln!(report, "linear oracle, averaged paths  {closed:.6e}");
        let _ = writeln!(report, "linear oracle, quoted grouping {quoted:.6e}");
    }
    Ok(report)
}

pub fn mesh_info_cmd(ctx: &Run<'_>) -> Result<String> {
    let mesh = ctx.config.mesh()?;
    let mut s = String::new();
    let dirichlet = mesh
        .boundary()
        .values()
        .filter(|m| **m == expfit::Marker::Dirichlet)
        .count();
    let _ = writeln!(s, "vertices        {}", mesh.num_vertices());
    let _ = writeln!(s, "triangles       {}", mesh.num_triangles());
    let _ = writeln!(s, "edges           {}", mesh.edges().len());
    let _ = writeln!(s, "boundary edges  {} ({} Dirichlet)", mesh.boundary().len(), dirichlet);
    let _ = writeln!(s, "h               {:.6e}", mesh.h());
    let _ = writeln!(s, "area            {:.6e}", mesh.total_area());
    Ok(s)
}
