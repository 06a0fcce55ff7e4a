//! Fixed workloads shared by the benchmarks.

use conceptkit::datasets::{gen_blobs, gen_context, gen_topic_corpus, Corpus};
use conceptkit::Context;

pub fn context(size: usize) -> Context {
    gen_context(size, size, 0.4, 7).expect("valid generator parameters")
}

pub fn blobs(per_cluster: usize) -> Vec<Vec<f64>> {
    let centers = vec![vec![-3.0, 0.0], vec![0.0, 3.0], vec![3.0, 0.0], vec![0.0, -3.0]];
    gen_blobs(&centers, per_cluster, 0.5, 7).expect("valid generator parameters").points
}

pub fn corpus(sentences: usize) -> Corpus {
    gen_topic_corpus(2, 10, sentences, 10, 7).expect("valid generator parameters")
}
