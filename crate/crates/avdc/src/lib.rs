//! Finitely presented augmented virtual double categories (AVDCs).
//!
//! An AVDC has objects, vertical morphisms forming a category, horizontal
//! morphisms forming a graph, and cells whose horizontal source is a path and
//! whose horizontal target is a path of length at most one. Cells compose
//! vertically: a path of cells sharing vertical boundaries pastes onto a
//! single cell below. There is no primitive horizontal composition of
//! horizontal morphisms; where composites exist they are characterised by a
//! universal property, and this crate searches for them by brute force within
//! explicit bounds.
//!
//! The crate provides:
//!
//! * [`core`]: frames, cells, the [`core::Avdc`] trait, the composition
//!   engine, and a bounded axiom checker;
//! * [`instances`]: matrices over a quantale, spans and relations of finite
//!   sets, finite categories with profunctors, and quintets of a 2-category;
//! * [`modbim`]: monoids and bimodules in an instance, and unitalization;
//! * [`universal`]: bounded checks for cartesian cells and (weakly)
//!   cocartesian paths, plus searches for restrictions, companions,
//!   conjoints, units, composites and extensions;
//! * [`functors`]: functor and transformation data with bounded law checks;
//! * [`laws`]: a registry of equational and structural laws that concrete
//!   instances are expected to satisfy;
//! * [`present`]: a JSON presentation format and instance recipes.

pub mod core;
pub mod functors;
pub mod instances;
pub mod laws;
pub mod modbim;
pub mod present;
pub mod universal;

pub use crate::core::{
    Avdc, AvdcError, AvdcExt, Bounds, CellVal, Datum, Frame, HorId, Instance, ObjId, Path,
    Report, Result, VertId,
};
