//! Path lifting through `F`: segments, maximal unbroken rays, and the
//! monodromy action of loops around singular values on a fiber.

mod basevalue;
mod monodromy;
mod path;

use thiserror::Error;

use crate::numerics::{NumericsError, C64};

pub use basevalue::{
    choose_generic_basevalue, genericity_clearance, genericity_margin, is_generic, point_line_distance,
};
pub use monodromy::{base_sheet, loop_path, loop_radius, monodromy, MonodromyTable, SheetExplorer, SheetMap};
pub use path::{
    lift_polyline, lift_segment, lift_segment_with, ray_classify, ray_classify_with, ray_from, LiftOptions, LiftPoint,
};

/// A point `w` of a fiber `F^{-1}(z0)` with the tag fiber enumeration gave it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberPoint {
    pub location: C64,
    pub sheet: usize,
}

/// Local degree of a ramification point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Where a terminated lift ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamDatum {
    pub projection: C64,
    pub order: Order,
    /// The critical point reached; `None` for an infinite-order approach.
    pub preimage: Option<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Full,
    Terminated,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub kind: LiftKind,
    /// Base-plane length traversed; `∞` for an unobstructed ray.
    pub rho: f64,
    pub terminal: Option<RamDatum>,
    pub trace: Vec<C64>,
    /// Endpoint of a full segment lift.
    pub end: Option<C64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("no generic base value found after 10000 draws")]
    NoGenericPoint,
    #[error("continuation step collapsed near {at}")]
    StepCollapse { at: C64 },
    #[error("ray could not be certified within length {budget}")]
    BudgetExceeded { budget: f64 },
    #[error("start point has F = {value}, expected {expected}")]
    StartMismatch { value: C64, expected: C64 },
    #[error("path starts on the singular value {value}")]
    StartOnSingularValue { value: C64 },
    #[error("loop around {value} did not close on the fiber")]
    LoopNotClosed { value: C64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
