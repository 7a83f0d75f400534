//! Exact homology of small categories and free strict ω-categories.
//!
//! The crate compares two chain-level invariants:
//!
//! * the abelianization λ of a polygraph (a presentation of a free
//!   ω-category), whose degree-`n` part is the free abelian group on the
//!   `n`-generators with differential `target - source`;
//! * the normalized chains of the nerve of a finite 1- or 2-category,
//!   computed either from composable chains or from ω-functors out of the
//!   orientals `O_0..O_3`.
//!
//! Everything is exact integer arithmetic. Homology is read off Smith normal
//! forms. The crate is `no_std` and only needs `alloc`; file formats and the
//! command line live in the `polyhom` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod abelianize;
pub mod cell;
pub mod fincat;
pub mod homalg;
pub mod rewrite;
pub mod slices;

pub use abelianize::{lambda, polygraphic_homology, AbelianizeError, LambdaComplex};
pub use cell::{
    globe, sphere, sphere_inclusion, CellError, CellExpr, Generator, GeneratorId, GeneratorMap,
    IntVector, Polygraph, Side, ValidationReport, Violation,
};
pub use fincat::{
    Cell2Id, CategoryError, FiniteCategory, Finite2Category, FiniteGroup, Functor, MorId,
    NerveTruncation, ObjId,
};
pub use homalg::{ChainComplex, HomalgError, HomologyGroup, IntMatrix, Smith, TopDegree};
pub use rewrite::{shortlex, CriticalBranching, RewriteError, Rule, Step, StringRewritingSystem, Word};
pub use slices::{
    check_slice_identification, colimit, comparison, conduche_check, grothendieck, reassemble, slice, slice_category,
    slice_map, slice_morphism, Colimit, ConducheFailure, Diagram, FunctorToBase, Grothendieck, Reassembly, Slice,
    SliceCategory, SliceCell, SliceError, SliceIdentification,
};
