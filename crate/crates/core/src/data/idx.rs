use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{FxError, Result};

/// Magic for unsigned-byte tensors: two zero bytes, type `0x08`, then the
/// number of dimensions.
const UBYTE: u8 = 0x08;

/// A decoded IDX file: dimension sizes and the raw byte payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxTensor {
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

impl IdxTensor {
    /// Number of items along the first axis.
    pub fn items(&self) -> usize {
        self.dims.first().copied().unwrap_or(0)
    }

    /// Bytes per item (product of the trailing dimensions).
    pub fn item_len(&self) -> usize {
        self.dims.iter().skip(1).product()
    }

    pub fn item(&self, i: usize) -> &[u8] {
        let n = self.item_len();
        &self.data[i * n..(i + 1) * n]
    }
}

pub fn load_idx(path: &Path) -> Result<IdxTensor> {
    let bytes = fs::read(path).map_err(|e| FxError::Idx {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    parse_idx(&bytes).map_err(|message| FxError::Idx {
        path: path.to_owned(),
        message,
    })
}

/// Decode an in-memory IDX image. Only the unsigned-byte element type is
/// accepted; MNIST uses nothing else.
pub fn parse_idx(bytes: &[u8]) -> std::result::Result<IdxTensor, String> {
    if bytes.len() < 4 {
        return Err("file shorter than the 4-byte magic".into());
    }
    let magic = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    if bytes[0] != 0 || bytes[1] != 0 || bytes[2] != UBYTE || bytes[3] == 0 {
        return Err(format!("bad magic 0x{magic:08x} (expected 0x0000080N)"));
    }
    let ndims = bytes[3] as usize;
    let header = 4 + 4 * ndims;
    if bytes.len() < header {
        return Err(format!("truncated header: {ndims} dimensions declared"));
    }
    let dims: Vec<usize> = bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let expected = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or("dimension product overflows")?;
    let payload = &bytes[header..];
    if payload.len() != expected {
        return Err(format!(
            "payload is {} bytes, dimensions {:?} need {}",
            payload.len(),
            dims,
            expected
        ));
    }
    Ok(IdxTensor {
        dims,
        data: payload.to_vec(),
    })
}

/// Paths to the four MNIST files in a directory.
#[derive(Debug, Clone)]
pub struct MnistFiles {
    pub train_images: PathBuf,
    pub train_labels: PathBuf,
    pub test_images: PathBuf,
    pub test_labels: PathBuf,
}

/// Locate the standard MNIST file names in `dir`, accepting both the
/// `train-images-idx3-ubyte` and `train-images.idx3-ubyte` spellings.
pub fn find_mnist_files(dir: &Path) -> Result<MnistFiles> {
    let pick = |stem: &str, kind: &str| -> Result<PathBuf> {
        for name in [format!("{stem}-{kind}"), format!("{stem}.{kind}")] {
            let p = dir.join(&name);
            if p.is_file() {
                return Ok(p);
            }
        }
        Err(FxError::Dataset(format!(
            "{stem}-{kind} not found in {} (download MNIST and decompress it there)",
            dir.display()
        )))
    };
    Ok(MnistFiles {
        train_images: pick("train-images", "idx3-ubyte")?,
        train_labels: pick("train-labels", "idx1-ubyte")?,
        test_images: pick("t10k-images", "idx3-ubyte")?,
        test_labels: pick("t10k-labels", "idx1-ubyte")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx_bytes(magic: u32, dims: &[u32], payload: &[u8]) -> Vec<u8> {
        let mut v = magic.to_be_bytes().to_vec();
        for d in dims {
            v.extend_from_slice(&d.to_be_bytes());
        }
        v.extend_from_slice(payload);
        v
    }

    #[test]
    fn parses_images_and_labels() {
        let img = idx_bytes(0x0803, &[2, 2, 3], &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]);
        let t = parse_idx(&img).unwrap();
        assert_eq!(t.dims, vec![2, 2, 3]);
        assert_eq!(t.items(), 2);
        assert_eq!(t.item(1), &[6, 7, 8, 9, 10, 11]);
        let lab = idx_bytes(0x0801, &[3], &[7, 1, 9]);
        assert_eq!(parse_idx(&lab).unwrap().data, vec![7, 1, 9]);
    }

    #[test]
    fn rejects_corruption() {
        assert!(parse_idx(&idx_bytes(0x0903, &[1, 1, 1], &[0])).is_err());
        assert!(parse_idx(&idx_bytes(0x0801, &[3], &[1, 2])).is_err());
        assert!(parse_idx(&idx_bytes(0x0801, &[3], &[1, 2, 3, 4])).is_err());
        assert!(parse_idx(&[0, 0, 8]).is_err());
        assert!(parse_idx(&[0, 0, 8, 3, 0, 0]).is_err());
    }

    #[test]
    fn load_reports_path() {
        let err = load_idx(Path::new("/nonexistent/train-labels-idx1-ubyte")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent"));
    }
}
