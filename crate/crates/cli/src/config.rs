//! Run configuration: TOML with `[problem]`, `[mesh]`, `[method]`, `[quad]`,
//! `[solver]`, `[output]` and an optional `[oracle]` section.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use expfit::{
    DivFreeBasis, Expression, FitOptions, Manufactured, Mesh, NodeKind, NodeSet, PathRule, ProblemSpec, Side,
    SolverOptions, Variant,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub method: MethodSection,
    #[serde(default)]
    pub quad: QuadSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    #[serde(rename = "D")]
    pub d: f64,
    pub beta: f64,
    pub phi: String,
    #[serde(default = "zero")]
    pub f: String,
    #[serde(default = "zero")]
    pub g: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_rho: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_grad_rho_x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_grad_rho_y: Option<String>,
}

fn zero() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub unit_square_n: usize,
    pub dirichlet_sides: Vec<String>,
}

impl Default for MeshSection {
    fn default() -> Self {
        MeshSection {
            file: None,
            unit_square_n: 8,
            dirichlet_sides: Side::ALL.iter().map(|s| s.name().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MethodSection {
    pub variant: String,
    pub space: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodeset: Option<String>,
    pub path: String,
    pub shift: String,
}

impl Default for MethodSection {
    fn default() -> Self {
        MethodSection {
            variant: "slotboom".into(),
            space: "rt0".into(),
            nodeset: None,
            path: "xy".into(),
            shift: "on".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub segment_order: usize,
    pub triangle_degree: usize,
}

impl Default for QuadSection {
    fn default() -> Self {
        QuadSection {
            segment_order: 16,
            triangle_degree: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iter: usize,
    pub dense_threshold: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverOptions::default();
        SolverSection {
            tol: d.tol,
            max_iter: d.max_iter,
            dense_threshold: d.dense_threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub grid_n: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            grid_n: 41,
        }
    }
}

/// Closed-form comparison for a linear potential `a x + b y + c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub linear_phi: [f64; 3],
}

/// Recorded in manifests only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

const REQUIRED: [&str; 3] = ["problem.D", "problem.beta", "problem.phi"];

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| anyhow!("config: {}", one_line(e.message())))?;
        for key in REQUIRED {
            let (section, name) = key.split_once('.').unwrap();
            let present = table
                .get(section)
                .and_then(|s| s.as_table())
                .is_some_and(|s| s.contains_key(name));
            if !present {
                bail!("config: missing key `{key}`");
            }
        }
        let cfg: RunConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| anyhow!("config: {}", one_line(e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a file; a relative mesh path is resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = RunConfig::parse(&text)?;
        if let Some(file) = &cfg.mesh.file {
            let p = PathBuf::from(file);
            if p.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.mesh.file = Some(base.join(p).to_string_lossy().into_owned());
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validate(&self) -> Result<()> {
        self.problem_spec()?;
        self.method()?;
        if self.output.grid_n < 2 {
            bail!("config: `output.grid_n` must be at least 2");
        }
        if self.mesh.file.is_none() && self.mesh.unit_square_n == 0 {
            bail!("config: `mesh.unit_square_n` must be positive");
        }
        self.dirichlet_sides()?;
        Ok(())
    }

    pub fn dirichlet_sides(&self) -> Result<Vec<Side>> {
        self.mesh
            .dirichlet_sides
            .iter()
            .map(|s| s.parse::<Side>().map_err(|e| anyhow!("config: `mesh.dirichlet_sides`: {e}")))
            .collect()
    }

    pub fn mesh(&self) -> Result<Mesh> {
        match &self.mesh.file {
            Some(f) => Mesh::load(f).map_err(|e| anyhow!("mesh {f}: {e}")),
            None => Ok(Mesh::unit_square(self.mesh.unit_square_n, &self.dirichlet_sides()?)),
        }
    }

    pub fn method(&self) -> Result<Method> {
        let m = &self.method;
        let variant: Variant = m.variant.parse().map_err(|e| anyhow!("config: `method.variant`: {e}"))?;
        let path: PathRule = m.path.parse().map_err(|e| anyhow!("config: `method.path`: {e}"))?;
        let shift = match m.shift.as_str() {
            "on" => true,
            "off" => false,
            other => bail!("config: `method.shift`: expected `on` or `off`, got `{other}`"),
        };
        let (space, default_nodes) = match m.space.as_str() {
            "rt0" => (DivFreeBasis::rt0_2d(), NodeKind::Vertices),
            "rt1" => (DivFreeBasis::rt1_2d(), NodeKind::P2),
            "rt0_3d" => (DivFreeBasis::rt0_3d(), NodeKind::TetVertices),
            other => bail!("config: `method.space`: unknown space `{other}`"),
        };
        let nodes = match &m.nodeset {
            Some(s) => s.parse().map_err(|e| anyhow!("config: `method.nodeset`: {e}"))?,
            None => default_nodes,
        };
        let node_set =
            NodeSet::new(space.order(), nodes).map_err(|e| anyhow!("config: `method.nodeset`: {e}"))?;
        if node_set.dim != space.spatial_dim() {
            bail!("config: `method.nodeset` `{}` does not fit space `{}`", nodes.name(), m.space);
        }
        Ok(Method {
            space,
            nodes,
            node_set,
            options: FitOptions {
                variant,
                path,
                start: None,
                shift,
                segment_order: self.quad.segment_order,
            },
        })
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let p = &self.problem;
        let spec = ProblemSpec {
            diffusion: p.d,
            beta: p.beta,
            phi: expression("problem.phi", &p.phi)?,
            f: expression("problem.f", &p.f)?,
            g: expression("problem.g", &p.g)?,
            grad_phi: None,
            order: match self.method.space.as_str() {
                "rt1" => 1,
                _ => 0,
            },
            nodes: NodeKind::Vertices,
            options: FitOptions::default(),
            triangle_degree: self.quad.triangle_degree,
        };
        spec.validate().map_err(|e| anyhow!("config: {e}"))?;
        for key in ["exact_rho", "exact_grad_rho_x", "exact_grad_rho_y"] {
            let v = match key {
                "exact_rho" => &p.exact_rho,
                "exact_grad_rho_x" => &p.exact_grad_rho_x,
                _ => &p.exact_grad_rho_y,
            };
            if let Some(v) = v {
                expression(&format!("problem.{key}"), v)?;
            }
        }
        Ok(spec)
    }

    /// Problem spec with the configured method filled in.
    pub fn full_spec(&self) -> Result<ProblemSpec> {
        let method = self.method()?;
        let mut spec = self.problem_spec()?;
        spec.order = method.space.order();
        spec.nodes = method.nodes;
        spec.options = method.options;
        Ok(spec)
    }

    pub fn manufactured(&self) -> Result<Manufactured> {
        let p = &self.problem;
        let get = |key: &str, v: &Option<String>| -> Result<Expression> {
            let v = v.as_ref().ok_or_else(|| anyhow!("config: missing key `problem.{key}`"))?;
            expression(&format!("problem.{key}"), v)
        };
        Ok(Manufactured {
            rho: get("exact_rho", &p.exact_rho)?,
            grad: [
                get("exact_grad_rho_x", &p.exact_grad_rho_x)?,
                get("exact_grad_rho_y", &p.exact_grad_rho_y)?,
            ],
        })
    }

    pub fn solver(&self) -> SolverOptions {
        SolverOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            dense_threshold: self.solver.dense_threshold,
        }
    }
}

fn expression(key: &str, text: &str) -> Result<Expression> {
    text.parse().map_err(|e| anyhow!("config: `{key}`: {e}"))
}

pub struct Method {
    pub space: DivFreeBasis,
    pub nodes: NodeKind,
    pub node_set: NodeSet,
    pub options: FitOptions,
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[problem]
D = 1.0
beta = 1
phi = "exp(-2*sqrt(x^2+y^2))"
"#;

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.mesh.unit_square_n, 8);
        assert_eq!(c.method.space, "rt0");
        assert_eq!(c.quad.segment_order, 16);
        assert_eq!(c.problem.f, "0");
        let m = c.method().unwrap();
        assert_eq!(m.nodes, NodeKind::Vertices);
    }

    #[test]
    fn missing_key_is_named() {
        let e = RunConfig::parse("[problem]\nbeta = 1\nphi = \"0\"\n").unwrap_err();
        assert_eq!(e.to_string(), "config: missing key `problem.D`");
    }

    #[test]
    fn bad_values_rejected() {
        for (extra, needle) in [
            ("[method]\npath = \"zigzag\"\n", "method.path"),
            ("[method]\nspace = \"rt1\"\nnodeset = \"vertices\"\n", "method.nodeset"),
            ("[mesh]\ndirichlet_sides = [\"north\"]\n", "dirichlet_sides"),
            ("[output]\ncolour = 1\n", "colour"),
        ] {
            let e = RunConfig::parse(&format!("{MINIMAL}{extra}")).unwrap_err().to_string();
            assert!(e.contains(needle), "{e}");
            assert!(!e.contains('\n'));
        }
        let e = RunConfig::parse("[problem]\nD = -1\nbeta = 1\nphi = \"0\"\n").unwrap_err();
        assert!(e.to_string().contains("positive"));
        let e = RunConfig::parse("[problem]\nD = 1\nbeta = 1\nphi = \"sin(\"\n").unwrap_err();
        assert!(e.to_string().contains("problem.phi"));
    }

    #[test]
    fn manifest_round_trip() {
        let c = RunConfig::parse(&format!("{MINIMAL}[solver]\ntol = 1.2345678901234567e-11\n")).unwrap();
        let back = RunConfig::parse(&c.to_toml()).unwrap();
        assert_eq!(c, back);
    }
}
