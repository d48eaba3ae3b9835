//! Core data model and composition engine.

mod avdc;
mod axioms;
mod bounds;
mod cell;
mod dual;
mod error;
mod frame;
mod ids;
mod ops;
mod pasting;
mod path;
mod report;
mod skeleton;
mod twocat;
mod underlying;

pub use self::avdc::{Avdc, AvdcExt, Instance};
pub use self::axioms::check_axioms;
pub use self::bounds::{Bounds, Meter};
pub use self::cell::{CellVal, Datum};
pub use self::dual::{horizontal_dual, DualInstance};
pub use self::error::{AvdcError, Result};
pub use self::frame::Frame;
pub use self::ids::{HorId, ObjId, VertId};
pub use self::ops::{
    composite_frame, concat_paths, hcompose, whisker_left, whisker_right,
};
pub use self::pasting::{eval_pasting, PastingDiagram};
pub use self::path::Path;
pub use self::report::{Line, Report, Status};
pub use self::skeleton::{HorInfo, Skeleton, SkeletonBuilder, VertInfo};
pub use self::twocat::{vertical_2cat, FinTwoCat, OneCellInfo, TwoCellInfo};
pub use self::underlying::{underlying_vdc, UnderlyingVdc};
