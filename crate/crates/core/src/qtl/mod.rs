//! Single-marker QTL analysis: LOD profiles, peak picking and crediting
//! peaks to genes.

mod compare;
mod lod;
mod scan;

pub use compare::{compare_detection, DetectionReport, TraitDetection};
pub use lod::{single_marker_lod, LOD_CAP};
pub use scan::{
    assign_loci, detect, scan, scan_values, write_hits_csv, LocusCalls, LodProfile, LodRecord, PeakRule, QtlHit,
    TraitSelector, LOCUS_TOLERANCE_CM,
};
