//! Model checking of knowledge and time in quantum network protocols.
//!
//! A [`Network`] of agents shares an entangled resource and runs sequential
//! programs of local gates, measurements and synchronous communication. Its
//! finite configuration graph ([`ConfigGraph`]) is explored exhaustively,
//! branching on every measurement outcome. Formulas combine facts about
//! classical variables and qubit states with per-agent knowledge `K[A]` and
//! the CTL operators `AG EG AF EF AX EX`.
//!
//! ```
//! use qnetk::{build_graph, parse_formula, parse_network, BuildOptions, ModelChecker};
//!
//! let net = parse_network(qnetk::protocols::SC_NETWORK).unwrap();
//! let graph = build_graph(&net, &[], &BuildOptions::default()).unwrap();
//! let f = parse_formula("AF (B.s1 == A.x1 & B.s2 == A.x2)", &net).unwrap();
//! let mut mc = ModelChecker::new(&graph, 1e-9);
//! assert!(graph.initial_nodes().all(|n| mc.holds(&f, n).unwrap()));
//! ```
//!
//! All numeric code is generic over [`scalar::Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix `f64`; the `*32` variants fix `f32`.

pub mod epistemics;
pub mod frontends;
pub mod logic;
pub mod netsem;
pub mod protocols;
pub mod qsim;
pub mod scalar;

pub use epistemics::{all_partitions, possibility_partition, PossibilityPartition};
pub use frontends::{
    parse_formula, parse_formula_file, parse_network, parse_network_file, parse_selector,
    ParseError, Selector,
};
pub use logic::{CheckResult, Evidence};
pub use netsem::{build_graph, ModelError, NodeId};
pub use qsim::QubitId;

pub type StateVector = qsim::StateVector<f64>;
pub type DensityMatrix = qsim::DensityMatrix<f64>;
pub type Tolerance = scalar::Tolerance<f64>;
pub type Network = netsem::Network<f64>;
pub type ConfigGraph = netsem::ConfigGraph<f64>;
pub type BuildOptions = netsem::BuildOptions<f64>;
pub type Sample = netsem::Sample<f64>;
pub type Formula = logic::Formula<f64>;
pub type Term = logic::Term<f64>;
pub type ModelChecker<'g> = logic::ModelChecker<'g, f64>;
pub type FormulaFile = frontends::FormulaFile<f64>;

pub type StateVector32 = qsim::StateVector<f32>;
pub type DensityMatrix32 = qsim::DensityMatrix<f32>;
pub type Tolerance32 = scalar::Tolerance<f32>;
pub type Network32 = netsem::Network<f32>;
pub type ConfigGraph32 = netsem::ConfigGraph<f32>;
pub type BuildOptions32 = netsem::BuildOptions<f32>;
pub type Sample32 = netsem::Sample<f32>;
pub type Formula32 = logic::Formula<f32>;
pub type Term32 = logic::Term<f32>;
pub type ModelChecker32<'g> = logic::ModelChecker<'g, f32>;
pub type FormulaFile32 = frontends::FormulaFile<f32>;
