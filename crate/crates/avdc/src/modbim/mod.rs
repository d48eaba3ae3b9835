//! Monoids, monoid morphisms and bimodules in a virtual double category,
//! their axiom checkers and enumerators, the Mod construction, and the
//! unitalization that reads a unital virtual double category as an augmented
//! one via chosen cocartesian unit cells.

mod construction;
mod monoid;
mod unitalize;

pub use self::construction::{mod_construction, ModInstance};
pub use self::monoid::{
    check_bimodule, check_monoid, check_monoid_morphism, enumerate_bimodules,
    enumerate_monoid_morphisms, enumerate_monoids, Bimodule, Monoid, MonoidMorphism,
};
pub use self::unitalize::{prof_of, unitalize, ChosenUnits, UnitalizedInstance};
