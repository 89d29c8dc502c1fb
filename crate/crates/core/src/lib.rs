//! Quantum channels together with their implementations.
//!
//! A channel given by Kraus operators `{K_i}` and run with its environment
//! starting in `|ε>` carries, besides its action on states, a
//! *transformation matrix* `T = Σ_i <ε|i> K_i`. `T` is invisible when the
//! channel is used on its own but fixes the interference terms when two
//! channels are placed in a coherent superposition of paths. This crate
//! models
//!
//! - channels, Choi matrices and the standard qubit/qudit families
//!   ([`channel`]);
//! - implementations, transformation matrices and the admissibility test
//!   for `T` ([`implementation`]);
//! - coherent control, classical control and the quantum switch
//!   ([`control`]);
//! - Holevo and coherent information ([`info`]);
//! - discrimination of implementations of one channel
//!   ([`discrimination`]).
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the JSON layer in [`io`] uses.
//!
//! ```
//! use qcontrol::{CMatrix, Channel64, ControlState, ImplementationKind};
//! use qcontrol::control::controlled_output;
//! use qcontrol::implementation::standard_implementation;
//!
//! let t = CMatrix::basis_projector(2, 0).scale_real(0.5f64.sqrt());
//! let imp = standard_implementation(ImplementationKind::Depolarising { t }, 2).unwrap();
//! assert_eq!(imp.channel().kraus_count(), Channel64::depolarising(2).unwrap().kraus_count());
//! let out = controlled_output(&imp, &imp, ControlState::plus(), &CMatrix::basis_projector(2, 0)).unwrap();
//! assert!((out.control_marginal()[(0, 1)].re - 0.25).abs() < 1e-12);
//! ```

pub mod channel;
pub mod control;
pub mod discrimination;
pub mod error;
pub mod implementation;
pub mod info;
pub mod io;
pub mod linalg;
pub mod random;
pub mod scalar;

pub use channel::{Channel, ChannelKind, ChoiMatrix};
pub use control::{ControlState, ControlledOutput, GlobalMap};
pub use discrimination::{DiscriminationInstance, OutputDistance};
pub use error::{Error, Result};
pub use implementation::{Admissibility, ChannelImplementation, ImplementationKind, TransformationMatrix};
pub use info::Ensemble;
pub use linalg::{ChoiVector, ComplexMatrix};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type CMatrix = ComplexMatrix<f64>;
pub type Channel64 = Channel<f64>;
pub type Implementation64 = ChannelImplementation<f64>;
pub type ControlState64 = ControlState<f64>;
pub type ControlledOutput64 = ControlledOutput<f64>;

pub type C32 = num_complex::Complex<f32>;
pub type CMatrix32 = ComplexMatrix<f32>;
pub type Channel32 = Channel<f32>;
pub type Implementation32 = ChannelImplementation<f32>;
