pub mod basis;
pub mod collapse;
pub mod doppler;
pub mod formats;
pub mod graph;
pub mod holant;
pub mod matchgate;
pub mod matrix;
pub mod pattern;
pub mod scalar;
pub mod signature;

pub use basis::Basis;
pub use graph::PlanarGraph;
pub use matchgate::Matchgate;
pub use matrix::Matrix;
pub use pattern::Pattern;
pub use scalar::Scalar;
pub use signature::{Role, Signature};
