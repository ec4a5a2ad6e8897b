//! The connectivity engine for 2D Fano polygons, plus the 3D obstruction fixtures.

mod bfs;
mod census;
mod certificate;
mod mmp;
pub mod obstruction;
mod standard;

pub use bfs::bfs_links;
pub use census::{enumerate_fano, fano_polygons, has_mori_fiber_structure, Census, CensusClass};
pub use certificate::{
    bfs_connect, certificate_from_links, connect, fano_purity_report, verify_certificate, ConnectCertificate,
    Connector, Failure, Panel, PurityIssue, Relation, RelationKind, Verifier, VerifyReport,
};
pub use mmp::{mmp_reduce, MmpResult, MmpStep};
pub use standard::{
    base_sequence, cremona_sequence, factor, frozen_sequences, ladder, letter_sequence, s_nabla_sequence,
    standard_route, to_standard_form, word_product, word_route, FrozenSequence, Gen, Letter, StandardForm,
    SEARCHED_CASES,
};
