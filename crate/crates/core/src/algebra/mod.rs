//! Totally real étale algebras, their real homomorphisms, subalgebra embeddings and
//! the partitions of coordinates they induce.

pub mod compositum;
pub mod embedding;
pub mod etale;
pub mod number_field;
pub mod partition;
pub mod wedderburn;

pub use compositum::{compositum, Compositum};
pub use embedding::{algebra_partition, SubalgebraEmbedding};
pub use etale::{AlgebraElement, EtaleAlgebra, PairConstraints};
pub use number_field::{EmbeddedField, FieldValue, NumberFieldR};
pub use partition::{all_partitions, Partition};
pub use wedderburn::{is_field, wedderburn, WedderburnDecomposition};
