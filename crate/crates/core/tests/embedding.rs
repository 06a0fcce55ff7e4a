use conceptkit::datasets::{gen_analogy_corpus, gen_topic_corpus, gen_tree};
use conceptkit::embedding::{
    analogy, fit_boxes, order_embedding_violations, train_poincare, train_sgns, BoxConfig, EmbeddingSpace,
    PoincareConfig, SgnsConfig, BALL_EPS,
};
use conceptkit::lattice::{build_lattice, enumerate_concepts};

fn topic_gap(space: &EmbeddingSpace) -> f64 {
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0, 0.0, 0);
    let toks = space.tokens();
    for (i, a) in toks.iter().enumerate() {
        for b in &toks[i + 1..] {
            let c = space.cosine(a, b).unwrap();
            if a[..2] == b[..2] {
                intra += c;
                ni += 1;
            } else {
                inter += c;
                nx += 1;
            }
        }
    }
    intra / ni as f64 - inter / nx as f64
}

#[test]
fn planted_topics_are_recovered() {
    let corpus = gen_topic_corpus(2, 10, 2000, 10, 0).unwrap();
    for seed in 0..5 {
        let out = train_sgns(&corpus, &SgnsConfig { dim: 16, epochs: 5, seed, ..SgnsConfig::default() }).unwrap();
        let gap = topic_gap(&out.space);
        assert!(gap >= 0.15);
        assert!(out.loss_history.last() < out.loss_history.first());
    }
}

#[test]
fn planted_analogy_ranks_in_top_three() {
    let corpus = gen_analogy_corpus(2, 2, 4, 4000, 0).unwrap();
    let out = train_sgns(&corpus, &SgnsConfig { dim: 16, epochs: 10, window: 2, seed: 0, ..SgnsConfig::default() }).unwrap();
    let ranked = analogy(&out.space, "r0c0", "r1c0", "r0c1", 10).unwrap();
    let pos = ranked.iter().position(|(t, _)| t == "r1c1").expect("held-out token ranked");
    assert!(pos < 3, "rank {}", pos + 1);
}

#[test]
fn poincare_tree() {
    let tax = gen_tree(3, 2, 0).unwrap();
    for seed in 0..3 {
        let out = train_poincare(&tax, &PoincareConfig { seed, ..PoincareConfig::default() }).unwrap();
        assert!(out.embedding.mean_parent_rank() <= 2.0, "seed {seed}");
        assert!(out.embedding.max_norm() <= 1.0 - BALL_EPS);
    }
}

#[test]
fn box_bridge() {
    for (depth, seeds) in [(2, 0..20), (3, 0..3)] {
        let tax = gen_tree(depth, 2, 0).unwrap();
        for seed in seeds {
            let out = fit_boxes(&tax, &BoxConfig { seed, ..BoxConfig::default() }).unwrap();
            let acc = out.embedding.containment_accuracy(&tax);
            let ctx = out.embedding.containment_context(&tax).unwrap();
            let lat = build_lattice(enumerate_concepts(&ctx)).unwrap();
            let bad = order_embedding_violations(&tax, &ctx, &lat).unwrap();
            assert!(acc >= 0.9, "depth {depth} seed {seed}: accuracy {acc}");
            assert!(bad.is_empty(), "depth {depth} seed {seed}: {bad:?}");
        }
    }
}
