//! Exponentially fitted nonconforming finite elements for drift-diffusion
//! problems, built on divergence-free Raviart–Thomas bases.

pub mod analysis;
pub mod assembly;
pub mod expr;
pub mod fitting;
pub mod mesh;
pub mod quadrature;
pub mod refspace;

pub use expr::{EvalError, Expression, ParseError};
pub use mesh::{AffineMap, Marker, Mesh, MeshError, Point2, Side};
pub use quadrature::{SegmentRule, TriangleRule};
pub use refspace::{DivFreeBasis, NodeKind, NodeSet, Point3, RefSpaceError};
pub use fitting::{
    row_scaled_determinant,
    assemble_f, direct_u_basis_3d, solve_element_coefficients, FitError, FitOptions, FittedBasis,
    LinearPhi, PathRule, Potential, ProblemSpec, PulledBack, Variant,
};
pub use assembly::{
    assemble, solve, solve_problem, AssemblyError, AssemblyOptions, CsrMatrix, DofTable,
    GlobalSystem, Sample, Solution, SolveError, SolverOptions,
};
pub use analysis::{
    broken_h1_error, convergence_study, l2_error, ErrorReport, ErrorRow, Field, Manufactured,
    StudyOptions,
};
pub use nalgebra;
