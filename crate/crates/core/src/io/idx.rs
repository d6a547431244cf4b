use std::path::Path;

use nalgebra::DMatrix;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Magic number of an unsigned-byte, 3-dimensional idx file.
pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
/// Magic number of an unsigned-byte, 1-dimensional idx file.
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads an image/label idx pair. Pixels are scaled to `[0, 1]` and each
/// image is flattened row-major. `count` keeps only the leading samples.
pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    count: Option<usize>,
) -> Result<DataMatrix> {
    let (ip, lp) = (images_path.as_ref(), labels_path.as_ref());
    let images = read(ip)?;
    let labels = read(lp)?;
    let (pixels, d, n_images) = parse_images(&images).map_err(|message| Error::Format {
        path: ip.to_path_buf(),
        message,
    })?;
    let label_bytes = parse_labels(&labels).map_err(|message| Error::Format {
        path: lp.to_path_buf(),
        message,
    })?;
    build(pixels, d, n_images, label_bytes, count).map_err(|message| Error::Format {
        path: lp.to_path_buf(),
        message,
    })
}

/// Same as [`load_idx`] on in-memory file contents.
pub fn parse_idx(images: &[u8], labels: &[u8], count: Option<usize>) -> Result<DataMatrix> {
    let wrap = |message: String| Error::InvalidInput(format!("idx: {message}"));
    let (pixels, d, n) = parse_images(images).map_err(wrap)?;
    let label_bytes = parse_labels(labels).map_err(wrap)?;
    build(pixels, d, n, label_bytes, count).map_err(wrap)
}

fn be_u32(bytes: &[u8], at: usize) -> std::result::Result<u32, String> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| format!("truncated header at byte {at}"))
}

fn parse_images(bytes: &[u8]) -> std::result::Result<(&[u8], usize, usize), String> {
    let magic = be_u32(bytes, 0)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(format!(
            "bad image magic {magic:#010x}, expected {IDX_IMAGES_MAGIC:#010x}"
        ));
    }
    let n = be_u32(bytes, 4)? as usize;
    let rows = be_u32(bytes, 8)? as usize;
    let cols = be_u32(bytes, 12)? as usize;
    let d = rows * cols;
    let body = &bytes[16..];
    if body.len() < n * d {
        return Err(format!(
            "truncated image data: {} bytes for {n} images of {rows}x{cols}",
            body.len()
        ));
    }
    Ok((&body[..n * d], d, n))
}

fn parse_labels(bytes: &[u8]) -> std::result::Result<&[u8], String> {
    let magic = be_u32(bytes, 0)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(format!(
            "bad label magic {magic:#010x}, expected {IDX_LABELS_MAGIC:#010x}"
        ));
    }
    let n = be_u32(bytes, 4)? as usize;
    let body = &bytes[8..];
    if body.len() < n {
        return Err(format!(
            "truncated label data: {} bytes for {n} labels",
            body.len()
        ));
    }
    Ok(&body[..n])
}

fn build(
    pixels: &[u8],
    d: usize,
    n_images: usize,
    labels: &[u8],
    count: Option<usize>,
) -> std::result::Result<DataMatrix, String> {
    if labels.len() != n_images {
        return Err(format!("{n_images} images but {} labels", labels.len()));
    }
    let n = match count {
        Some(c) if c > n_images => {
            return Err(format!("requested {c} samples but files hold {n_images}"))
        }
        Some(c) => c,
        None => n_images,
    };
    let values = DMatrix::from_fn(d, n, |f, s| f64::from(pixels[s * d + f]) / 255.0);
    let truth = labels[..n].iter().map(|&l| usize::from(l)).collect();
    DataMatrix::new(values, Some(truth)).map_err(|e| e.to_string())
}
