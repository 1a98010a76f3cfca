//! Torus-graded *-algebra kernel.

mod coefficient;
mod context;
pub(crate) mod cyclotomic;
mod element;
mod ideal;
pub(crate) mod linalg;
mod presentation;
mod weight;

pub use coefficient::Coefficient;
pub use context::{Context, GenId, Generator, TensorContext, Word};
pub use element::{Character, Element, Morphism};
pub use ideal::{ideal_membership, in_ideal, refuted_at_points, words_up_to, Decision, Ideal};
pub use presentation::{
    generate_exchange_relations, ExchangeRelation, PairSelection, Presentation, Relation, RelationKind,
};
pub use weight::Weight;
