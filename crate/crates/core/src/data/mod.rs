//! MNIST ingestion: IDX parsing and binary digit-pair datasets.

mod dataset;
mod idx;

pub use dataset::{load_pair_dataset, make_pair_dataset, Dataset, DigitPair, Split, PIXELS};
pub use idx::{find_mnist_files, load_idx, parse_idx, IdxTensor, MnistFiles};
