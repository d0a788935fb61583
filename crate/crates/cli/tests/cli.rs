use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expfit"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn missing_key_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[problem]\nbeta = 1.0\nphi = \"0\"\n");
    let o = run(&["solve"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("problem.D"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn unknown_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"0\"\n[method]\npath = \"zigzag\"\n",
    );
    let o = run(&["basis"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("method.path"));
}

#[test]
fn singular_basis_prints_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"0\"\n[method]\nvariant = \"direct_u\"\nspace = \"rt1\"\nnodeset = \"p2\"\npath = \"line\"\n",
    );
    let o = run(&["basis"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("singular"));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.len() == 6 && r[5] == 1.0));
    // The vertex at the path start gives a row of zero moments.
    assert!(rows.iter().any(|r| r[..5].iter().all(|&x| x == 0.0)));
}

#[test]
fn equilibrium_solve_has_no_current() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        r#"[problem]
D = 1.0
beta = 1.0
phi = "4*exp(-2*sqrt(x^2+y^2))"
f = "0"
g = "exp(-4*exp(-2*sqrt(x^2+y^2)))"

[mesh]
unit_square_n = 8

[output]
grid_n = 11
"#,
    );
    let out = dir.path().join("out");
    let o = run(&["solve"], &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    let j: f64 = summary
        .lines()
        .find_map(|l| l.strip_prefix("max |J|"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(j < 1e-8, "{summary}");
    let field = std::fs::read_to_string(out.join("field.csv")).unwrap();
    let mut lines = field.lines();
    assert_eq!(lines.next(), Some("x,y,rho,u,Jx,Jy"));
    assert_eq!(lines.count(), 121);
    for l in field.lines().skip(1) {
        let rho: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!((rho - 1.0).abs() < 1e-9);
    }
    let manifest = std::fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("[run]") && manifest.contains("solve"));
}

#[test]
fn solve_reads_mesh_files() {
    let dir = tempfile::tempdir().unwrap();
    expfit::Mesh::unit_square(4, &expfit::Side::ALL).save(dir.path().join("square.mesh")).unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"x\"\nf = \"1\"\n[mesh]\nfile = \"square.mesh\"\n[output]\ngrid_n = 5\n",
    );
    let out = dir.path().join("out");
    let o = run(&["mesh-info"], &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("triangles       32"));
    let o = run(&["solve"], &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn converge_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        r#"[problem]
D = 1.0
beta = 1.0
phi = "0"
f = "2*pi^2*sin(pi*x)*sin(pi*y)"
exact_rho = "sin(pi*x)*sin(pi*y)"
exact_grad_rho_x = "pi*cos(pi*x)*sin(pi*y)"
exact_grad_rho_y = "pi*sin(pi*x)*cos(pi*y)"

[mesh]
unit_square_n = 4
"#,
    );
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_expfit"))
        .args(["converge", "--levels", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "h,dofs,err_h1_broken,err_l2_rho,err_l2_u,rate_h1");
    assert_eq!(lines.len(), 4);
    let rate: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.8..=1.2).contains(&rate), "{csv}");
}

#[test]
fn converge_needs_exact_solution() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"0\"\n");
    let o = run(&["converge"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pathdiff_reports_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"x + y\"\n[oracle]\nlinear_phi = [1.0, 1.0, 0.0]\n[output]\ngrid_n = 11\n",
    );
    let out = dir.path().join("out");
    let o = run(&["pathdiff"], &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    // A linear potential has a gradient integrand, so both routes agree.
    assert!(value("max |u1(xy) - u1(yx)|") < 1e-12);
    assert!(value("linear oracle, averaged paths") < 1e-8);
    let csv = std::fs::read_to_string(out.join("pathdiff.csv")).unwrap();
    assert!(csv.starts_with("x,y,slotboom_xy_minus_yx,direct_line_minus_xy\n"));
}

#[test]
fn tetrahedral_basis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nD = 1.0\nbeta = 1.0\nphi = \"z - x\"\n[method]\nvariant = \"direct_u\"\nspace = \"rt0_3d\"\n[output]\ngrid_n = 4\n",
    );
    let out = dir.path().join("out");
    let o = run(&["basis"], &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let b = std::fs::read_to_string(out.join("basis_4.csv")).unwrap();
    assert!(b.starts_with("x,y,z,rho,u\n"));
}
