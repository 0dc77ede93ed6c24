//! tilinglab: construction and verification of translational tilings and
//! spectral sets.
//!
//! The library has two independent verdict engines: a Fourier-side check
//! (the transform of the tile must vanish on the dual lattice away from the
//! origin) and an exact direct-space coverage oracle over one period cell.
//! On top of these sit the classical constructions (notched and extended
//! cubes, shifted-column tilings, multi-lattice common tiles), quadratic-form
//! certificates for the Steinhaus problem, and spectral-set checks for the
//! cube and the disk.
//!
//! All certification-grade geometry is exact rational arithmetic; floating
//! point appears only where transcendental quantities force it (Fourier
//! values, Bessel zeros, rotated lattices), and those paths always report a
//! tolerance next to the number.

pub mod bessel;
pub mod constructions;
pub mod envelope;
pub mod error;
pub mod fourier;
pub mod lattice;
pub mod matrix;
pub mod multilattice;
pub mod polygon;
pub mod ratio;
pub mod spectra;
pub mod steinhaus;
pub mod tile;
pub mod verify;

pub use error::{Result, TilingError};
pub use lattice::{Lattice, PointPatch};
pub use matrix::Matrix;
pub use ratio::Rat;
pub use tile::BoxUnionTile;
pub use verify::{TilingReport, TranslationSet};
