//! Dataset ingestion, feature normalization and synthetic data.

mod blobs;
mod delimited;
mod idx;
mod normalize;

pub use blobs::{generate_blobs, BlobSpec};
pub use delimited::{load_csv, load_label_file, parse_csv, LabelColumn};
pub use idx::{load_idx, parse_idx, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC};
pub use normalize::{normalize, Normalization};
