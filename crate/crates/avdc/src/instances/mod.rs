//! Concrete finitely presented instances.

mod category;
mod mat;
mod prof;
mod quantale;
mod quintets;
mod rel;
mod span;
mod universe;
pub(crate) mod util;

pub use self::category::{
    all_functors, compose_functors, identity_functor, is_functor, FinCat, FunctorTables,
};
pub use self::mat::{mat_quantale, MatInstance};
pub use self::prof::{
    fin_prof, hom_prof, validate_prof, CoendData, GraphData, GraphExtension, ProfData,
    ProfInstance,
};
pub use self::quantale::FinQuantale;
pub use self::quintets::{quintets, QuintetInstance};
pub use self::rel::{rel_finset, RelInstance};
pub use self::span::{span_finset, span_finset_with_apexes, SpanInstance, SpanLegs};
pub use self::universe::FinSetUniverse;
