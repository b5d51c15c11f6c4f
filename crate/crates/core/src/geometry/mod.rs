//! Metric geometry of the surface on a stitched sample mesh: stars,
//! nearest-ramification cells, the potentials `τ` and `σ`, level-set counts
//! `n(θ)`, and the parabolicity verdict.

mod cells;
mod mesh;
mod star;

use thiserror::Error;

use crate::lifting::LiftError;
use crate::numerics::C64;
use crate::skeleton::SkeletonError;

pub use cells::{
    cells_on, kn_cells, kn_distance, level_components, order_census, parabolicity, tau_field, tau_sigma, CellMap,
    ParabolicityReport, Verdict,
};
pub use mesh::Mesh;
pub use star::{star_boundary, BoundarySlit};

/// Axis-aligned rectangle in the base plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub min: C64,
    pub max: C64,
}

impl Window {
    pub fn new(min: C64, max: C64) -> Window {
        Window { min, max }
    }

    /// Square of half-width `half` around `center`.
    pub fn around(center: C64, half: f64) -> Window {
        let d = C64::new(half, half);
        Window {
            min: center - d,
            max: center + d,
        }
    }

    pub fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    pub fn height(&self) -> f64 {
        self.max.im - self.min.im
    }

    pub fn diameter(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.min.re && z.re <= self.max.re && z.im >= self.min.im && z.im <= self.max.im
    }
}

/// A point of the surface: a star (skeleton vertex id) and a base-plane
/// coordinate inside it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub star: usize,
    pub z: C64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{z} lies outside the meshed window")]
    OutOfWindow { z: C64 },
    #[error("star {star} is not part of the mesh")]
    UnknownStar { star: usize },
    #[error("ramification set is not known to be finite")]
    InfiniteRamificationSet,
    #[error("mesh window or spacing is degenerate")]
    EmptyMesh,
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}
