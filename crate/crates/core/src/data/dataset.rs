use std::path::Path;

use super::idx::{find_mnist_files, load_idx, IdxTensor};
use crate::error::{FxError, Result};

/// Flattened 28×28 image size.
pub const PIXELS: usize = 784;

/// Two distinct digits; the larger one is class 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigitPair {
    low: u8,
    high: u8,
}

impl DigitPair {
    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a > 9 || b > 9 {
            return Err(FxError::InvalidArgument(format!("digits must be 0-9, got {a},{b}")));
        }
        if a == b {
            return Err(FxError::InvalidArgument(format!("digit pair needs two distinct digits, got {a},{a}")));
        }
        Ok(Self {
            low: a.min(b),
            high: a.max(b),
        })
    }

    pub fn low(&self) -> u8 {
        self.low
    }

    pub fn high(&self) -> u8 {
        self.high
    }

    /// Class label for a digit of this pair, `None` for other digits.
    pub fn label(&self, digit: u8) -> Option<u8> {
        if digit == self.high {
            Some(1)
        } else if digit == self.low {
            Some(0)
        } else {
            None
        }
    }
}

impl std::str::FromStr for DigitPair {
    type Err = FxError;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| FxError::Parse(format!("expected two digits like 6,9, got '{s}'")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| FxError::Parse(format!("bad digit '{t}'")))
        };
        DigitPair::new(parse(a)?, parse(b)?)
    }
}

impl std::fmt::Display for DigitPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.low, self.high)
    }
}

/// One split: pixels as a `784 × m` row-major matrix in `[0, 1]` plus
/// binary labels.
#[derive(Debug, Clone)]
pub struct Split {
    pub pixels: Vec<f64>,
    pub labels: Vec<u8>,
}

impl Split {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Column `j` as a 784-vector.
    pub fn sample(&self, j: usize) -> Vec<f64> {
        let m = self.len();
        (0..PIXELS).map(|p| self.pixels[p * m + j]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub pair: DigitPair,
    pub train: Split,
    pub test: Split,
}

fn filter_split(images: &IdxTensor, labels: &IdxTensor, pair: DigitPair) -> Result<Split> {
    if images.items() != labels.items() {
        return Err(FxError::Dataset(format!(
            "{} images but {} labels",
            images.items(),
            labels.items()
        )));
    }
    if images.item_len() != PIXELS {
        return Err(FxError::Dataset(format!(
            "images are {} pixels, expected {PIXELS}",
            images.item_len()
        )));
    }
    let keep: Vec<(usize, u8)> = labels
        .data
        .iter()
        .enumerate()
        .filter_map(|(i, &d)| pair.label(d).map(|l| (i, l)))
        .collect();
    if keep.is_empty() {
        return Err(FxError::Dataset(format!("no images of digits {pair}")));
    }
    let m = keep.len();
    let mut pixels = vec![0.0; PIXELS * m];
    for (j, &(i, _)) in keep.iter().enumerate() {
        for (p, &b) in images.item(i).iter().enumerate() {
            pixels[p * m + j] = b as f64 / 255.0;
        }
    }
    Ok(Split {
        pixels,
        labels: keep.into_iter().map(|(_, l)| l).collect(),
    })
}

/// Keep the two digits of `pair` from both splits, in file order.
pub fn make_pair_dataset(
    train_images: &IdxTensor,
    train_labels: &IdxTensor,
    test_images: &IdxTensor,
    test_labels: &IdxTensor,
    pair: DigitPair,
) -> Result<Dataset> {
    Ok(Dataset {
        pair,
        train: filter_split(train_images, train_labels, pair)?,
        test: filter_split(test_images, test_labels, pair)?,
    })
}

/// Load the four MNIST files from `dir` and build the pair dataset.
pub fn load_pair_dataset(dir: &Path, pair: DigitPair) -> Result<Dataset> {
    let files = find_mnist_files(dir)?;
    make_pair_dataset(
        &load_idx(&files.train_images)?,
        &load_idx(&files.train_labels)?,
        &load_idx(&files.test_images)?,
        &load_idx(&files.test_labels)?,
        pair,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor(dims: Vec<usize>, data: Vec<u8>) -> IdxTensor {
        IdxTensor { dims, data }
    }

    fn images(n: usize) -> IdxTensor {
        let data = (0..n * PIXELS).map(|i| (i % 256) as u8).collect();
        tensor(vec![n, 28, 28], data)
    }

    #[test]
    fn pair_rules() {
        assert!(DigitPair::new(3, 3).is_err());
        assert!(DigitPair::new(3, 10).is_err());
        let p: DigitPair = "9,6".parse().unwrap();
        assert_eq!((p.low(), p.high()), (6, 9));
        assert_eq!(p.label(9), Some(1));
        assert_eq!(p.label(6), Some(0));
        assert_eq!(p.label(3), None);
        assert!("6".parse::<DigitPair>().is_err());
    }

    #[test]
    fn filters_and_normalizes() {
        let imgs = images(4);
        let labs = tensor(vec![4], vec![6, 1, 9, 6]);
        let ds = make_pair_dataset(&imgs, &labs, &imgs, &labs, DigitPair::new(6, 9).unwrap()).unwrap();
        assert_eq!(ds.train.labels, vec![0, 1, 0]);
        assert_eq!(ds.train.class_counts(), [2, 1]);
        assert!(ds.train.pixels.iter().all(|&p| (0.0..=1.0).contains(&p)));
        // column 1 is original image 2
        let s = ds.train.sample(1);
        assert_eq!(s[0], imgs.item(2)[0] as f64 / 255.0);
        assert_eq!(s[783], imgs.item(2)[783] as f64 / 255.0);
    }

    #[test]
    fn empty_selection_is_error() {
        let imgs = images(2);
        let labs = tensor(vec![2], vec![1, 2]);
        assert!(make_pair_dataset(&imgs, &labs, &imgs, &labs, DigitPair::new(6, 9).unwrap()).is_err());
    }

    #[test]
    fn count_mismatch_is_error() {
        let imgs = images(2);
        let labs = tensor(vec![3], vec![6, 9, 6]);
        assert!(make_pair_dataset(&imgs, &labs, &imgs, &labs, DigitPair::new(6, 9).unwrap()).is_err());
    }
}
