use expfit::{
    convergence_study, AssemblyOptions, Expression, FitOptions, Manufactured, NodeKind, ProblemSpec, Side,
    SolverOptions, StudyOptions,
};

fn expr(s: &str) -> Expression {
    s.parse().unwrap()
}

fn radial_problem(order: usize, nodes: NodeKind) -> ProblemSpec {
    let r = "sqrt(x^2+y^2)";
    ProblemSpec {
        diffusion: 1.0,
        beta: 1.0,
        phi: expr(&format!("exp(-2*{r})")),
        f: expr(&format!(
            "exp(-exp(-2*{r}))*(2*pi^2*sin(pi*x)*sin(pi*y) + (-2*exp(-2*{r})/{r})*(x*pi*cos(pi*x)*sin(pi*y) + y*pi*sin(pi*x)*cos(pi*y)))"
        )),
        g: expr("0"),
        grad_phi: None,
        order,
        nodes,
        options: FitOptions::default(),
        triangle_degree: 8,
    }
}

fn exact() -> Manufactured {
    Manufactured {
        rho: expr("sin(pi*x)*sin(pi*y)"),
        grad: [expr("pi*cos(pi*x)*sin(pi*y)"), expr("pi*sin(pi*x)*cos(pi*y)")],
    }
}

fn study(levels: usize) -> StudyOptions {
    StudyOptions {
        n0: 4,
        levels,
        dirichlet: Side::ALL.to_vec(),
        assembly: AssemblyOptions::default(),
        solver: SolverOptions::default(),
    }
}

#[test]
fn fitted_rt0_converges_at_first_order() {
    for kind in [NodeKind::Vertices, NodeKind::Midpoints] {
        let report = convergence_study(&radial_problem(0, kind), &exact(), &study(3)).unwrap();
        let rate = report.last_rate().unwrap();
        assert!((0.8..=1.2).contains(&rate), "{kind:?}\n{report}");
    }
}

#[test]
fn fitted_rt1_rate_is_measured() {
    let report = convergence_study(&radial_problem(1, NodeKind::P2), &exact(), &study(3)).unwrap();
    assert!(report.rows.windows(2).all(|w| w[1].err_h1 < w[0].err_h1), "{report}");
}
