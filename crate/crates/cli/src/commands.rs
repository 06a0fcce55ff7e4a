use std::fs::File;
use std::path::{Path, PathBuf};

use conceptkit::datasets::{corpus_from_text, gen_blobs, GeneratorConfig, PointSet};
use conceptkit::embedding::{
    analogy, fit_boxes, train_poincare, train_sgns, vector_not, vector_or, BoxConfig, EmbeddingSpace, PoincareConfig,
    SgnsConfig, Taxonomy,
};
use conceptkit::group::{
    check_disentangled, check_equivariance, check_invariance, lie_rotation_residual, verify_group, EquivariantAction,
    GroupAction, GroupSpec, ProductDecomposition, RepresentationMap,
};
use conceptkit::lattice::{build_lattice, check_duality, check_laws, enumerate_concepts, LatticeDocument};
use conceptkit::manifold::{latent_interpolate, vae_train, ScalarField, TrainConfig, VaeModel};
use conceptkit::similarity::{cluster_kmeans_with, ExemplarModel, MetricKind, ModelDump, PrototypeModel, WeightedMetric};
use conceptkit::{Context, FeatureVector};
use serde::Serialize;
use serde_json::json;

use crate::io::{emit, loss_csv, parse_blocks, parse_rows, parse_vector, read, read_points, to_json, write_atomic};
use crate::{
    ActionArgs, ClassifierKind, ClassifyArgs, Cli, Command, Failure, Gen, InvarianceArgs, InvarianceCmd, KmeansArgs,
    Logic, MetricArg, PsiArg, Train, TrainOut, Vae, VaeTrainArgs, Verify,
};

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let seed = cli.seed;
    match cli.command {
        Command::Fca(a) => fca(&a.context, &a.out_dir),
        Command::Verify(v) => verify(v, seed),
        Command::Train(t) => train(t, seed),
        Command::Vae(Vae::Train(a)) => train_vae(&a, seed),
        Command::Vae(Vae::Interpolate { model, data, label_column, from, to, steps, out }) => {
            interpolate(&model, &data, label_column.as_deref(), from, to, steps, out.as_deref())
        }
        Command::Invariance(InvarianceCmd::Check(a)) => invariance(&a, seed),
        Command::Gen(g) => generate(g, seed),
        Command::Classify(a) => classify(&a),
        Command::Kmeans(a) => kmeans(&a, seed),
        Command::Logic(l) => logic(l),
        Command::Analogy(a) => {
            let space = load_space(&a.embedding)?;
            let ranked = analogy(&space, &a.a, &a.b, &a.c, a.top_k)?;
            print!("{}", ranked_tsv(&ranked));
            Ok(())
        }
    }
}

fn fca(path: &Path, out_dir: &Path) -> Result<(), Failure> {
    let file = File::open(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let ctx = Context::from_csv_reader(file)?;
    let lat = build_lattice(enumerate_concepts(&ctx))?;
    let doc = LatticeDocument::new(&ctx, &lat);
    write_atomic(&out_dir.join("lattice.dot"), &doc.to_dot())?;
    write_atomic(&out_dir.join("lattice.json"), &doc.to_json()?)?;
    println!("{} concepts, height {}", lat.len(), lat.height());
    Ok(())
}

/// Prints the report, then fails with exit code 1 unless it passed.
fn report<T: Serialize>(out: Option<&Path>, passed: bool, body: &T) -> Result<(), Failure> {
    emit(out, &to_json(body))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Failed("verification failed".into()))
    }
}

fn load_action(path: &Path) -> Result<GroupAction, Failure> {
    Ok(GroupAction::from_json(&read(path)?)?)
}

fn load_phi(spec: &str) -> Result<RepresentationMap, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let model = VaeModel::from_json(&read(path)?)?;
        return Ok(RepresentationMap::vae_encoder(model));
    }
    Ok(RepresentationMap::builtin(spec)?)
}

fn psi(p: PsiArg) -> EquivariantAction {
    match p {
        PsiArg::Identity => EquivariantAction::Identity,
        PsiArg::Rotate => EquivariantAction::Rotate,
        PsiArg::AngleAdd => EquivariantAction::AngleAdd,
    }
}

fn setup(a: &ActionArgs, seed: u64) -> Result<(GroupAction, RepresentationMap, Vec<Vec<f64>>), Failure> {
    let action = load_action(&a.action)?;
    let phi = load_phi(&a.phi)?;
    let points = action.sample_points(a.samples, seed);
    Ok((action, phi, points))
}

fn invariance(a: &InvarianceArgs, seed: u64) -> Result<(), Failure> {
    let (action, phi, points) = setup(&a.action, seed)?;
    let elements = action.group.test_elements(a.action.budget, seed);
    let r = check_invariance(&action, &phi, &points, &elements, a.tol)?;
    report(a.out.out.as_deref(), r.passed, &json!({ "check": "invariance", "phi": phi.name, "report": r }))
}

fn verify(v: Verify, seed: u64) -> Result<(), Failure> {
    match v {
        Verify::Lattice { lattice, out } => {
            let doc = LatticeDocument::from_json(&read(&lattice)?)?;
            let lat = doc.to_lattice()?;
            let duality = check_duality(&lat);
            let laws = check_laws(&lat)?;
            let passed = duality.passed() && laws.passed();
            report(out.out.as_deref(), passed, &json!({ "check": "lattice", "passed": passed, "duality": duality, "laws": laws }))
        }
        Verify::Group { group, budget, out } => {
            let spec: GroupSpec = serde_json::from_str(&read(&group)?).map_err(|e| Failure::input(format!("bad group JSON: {e}")))?;
            let r = verify_group(&spec, budget, seed)?;
            report(out.out.as_deref(), r.passed, &json!({ "check": "group", "report": r }))
        }
        Verify::Invariance(a) => invariance(&a, seed),
        Verify::Equivariance { action, psi: p, tol, out } => {
            let (act, phi, points) = setup(&action, seed)?;
            let elements = act.group.test_elements(action.budget, seed);
            let r = check_equivariance(&act, &phi, psi(p), &points, &elements, tol)?;
            report(out.out.as_deref(), r.passed, &json!({ "check": "equivariance", "phi": phi.name, "report": r }))
        }
        Verify::Disentangle { action, blocks, tol, out } => {
            let (act, phi, points) = setup(&action, seed)?;
            let blocks = parse_blocks(&blocks)?;
            let dim = blocks.iter().map(Vec::len).sum();
            let decomp = ProductDecomposition::new(blocks, dim)?;
            let r = check_disentangled(&act, &phi, &decomp, &points, action.budget, seed, tol)?;
            report(out.out.as_deref(), r.passed, &json!({ "check": "disentangle", "phi": phi.name, "report": r }))
        }
        Verify::Lie { function, samples, tol, out } => {
            let f = ScalarField::builtin(&function)?;
            let cloud = gen_blobs(&[vec![0.0, 0.0]], samples.max(1), 1.0, seed)?;
            let points: Vec<[f64; 2]> = cloud.points.iter().map(|p| [p[0], p[1]]).collect();
            let residual = lie_rotation_residual(&f, &points)?;
            let passed = residual <= tol;
            report(
                out.out.as_deref(),
                passed,
                &json!({ "check": "lie", "function": function, "points": points.len(), "max_residual": residual, "tol": tol, "passed": passed }),
            )
        }
    }
}

fn loss_path(io: &TrainOut) -> PathBuf {
    io.loss.clone().unwrap_or_else(|| io.out.with_extension("loss.csv"))
}

fn load_taxonomy(path: &Path) -> Result<Taxonomy, Failure> {
    let file = File::open(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Taxonomy::from_csv_reader(file)?)
}

fn finish(io: &TrainOut, checkpoint: &str, history: &[f64]) -> Result<(), Failure> {
    write_atomic(&io.out, checkpoint)?;
    write_atomic(&loss_path(io), &loss_csv(history))?;
    match (history.first(), history.last()) {
        (Some(first), Some(last)) => println!("{} epochs, loss {first} -> {last}", history.len()),
        _ => println!("0 epochs"),
    }
    Ok(())
}

fn train(t: Train, seed: u64) -> Result<(), Failure> {
    match t {
        Train::Sgns { io, dim, epochs, lr, window, negatives } => {
            let corpus = corpus_from_text(&read(&io.data)?);
            let out = train_sgns(&corpus, &SgnsConfig { dim, window, negatives, epochs, lr, seed })?;
            finish(&io, &out.space.to_tsv(), &out.loss_history)
        }
        Train::Poincare { io, dim, epochs, lr, negatives, burn_in } => {
            let tax = load_taxonomy(&io.data)?;
            let out = train_poincare(&tax, &PoincareConfig { dim, epochs, lr, negatives, burn_in, seed })?;
            finish(&io, &out.embedding.to_tsv(), &out.loss_history)?;
            println!("mean parent rank {}", out.embedding.mean_parent_rank());
            Ok(())
        }
        Train::Boxes { io, dim, epochs, lr, margin, min_side } => {
            let tax = load_taxonomy(&io.data)?;
            let out = fit_boxes(&tax, &BoxConfig { dim, epochs, lr, margin, min_side, seed })?;
            finish(&io, &out.embedding.to_tsv(), &out.loss_history)?;
            println!("containment accuracy {}", out.embedding.containment_accuracy(&tax));
            Ok(())
        }
        Train::Vae(a) => train_vae(&a, seed),
    }
}

fn train_vae(a: &VaeTrainArgs, seed: u64) -> Result<(), Failure> {
    let data = read_points(&a.io.data, a.label_column.as_deref())?;
    let model = VaeModel::new(data.dim(), a.latent_dim, a.hidden, seed)?;
    let cfg = TrainConfig { epochs: a.epochs, lr: a.lr, beta: a.beta, batch_size: a.batch_size, seed };
    let out = vae_train(&model, &data.points, &cfg)?;
    finish(&a.io, &out.model.to_json()?, &out.loss_history)
}

fn interpolate(
    model: &Path,
    data: &Path,
    label_column: Option<&str>,
    from: usize,
    to: usize,
    steps: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let model = VaeModel::from_json(&read(model)?)?;
    let data = read_points(data, label_column)?;
    let row = |i: usize| {
        data.points
            .get(i)
            .ok_or_else(|| Failure::input(format!("row {i} out of range, data has {} rows", data.points.len())))
    };
    let path = latent_interpolate(&model, row(from)?, row(to)?, steps)?;
    let mut csv = String::from("step");
    for j in 0..model.input_dim {
        csv.push_str(&format!(",x{j}"));
    }
    csv.push('\n');
    for (s, p) in path.iter().enumerate() {
        csv.push_str(&s.to_string());
        for v in p {
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }
    emit(out, &csv)
}

fn generate(g: Gen, seed: u64) -> Result<(), Failure> {
    let (cfg, out) = match g {
        Gen::Context { objects, attributes, density, out } => {
            (GeneratorConfig::RandomContext { objects, attributes, density, seed }, out)
        }
        Gen::Tree { depth, branching, out } => (GeneratorConfig::TreeTaxonomy { depth, branching, seed }, out),
        Gen::Corpus { topics, vocab, sentences, length, out } => (
            GeneratorConfig::TopicCorpus { topics, vocab_per_topic: vocab, sentences, sentence_len: length, seed },
            out,
        ),
        Gen::Analogy { rows, cols, pool, sentences, out } => {
            (GeneratorConfig::AnalogyCorpus { rows, cols, pool, sentences, seed }, out)
        }
        Gen::Blobs { centers, per_cluster, spread, out } => {
            (GeneratorConfig::Blobs { centers: parse_rows(&centers)?, per_cluster, spread, seed }, out)
        }
        Gen::Moons { n, noise, out } => (GeneratorConfig::TwoMoons { n, noise, seed }, out),
        Gen::Torus { n1, n2, samples, out } => (GeneratorConfig::TorusOrbits { n1, n2, samples, seed }, out),
    };
    emit(out.out.as_deref(), &cfg.generate()?.to_text())
}

fn classify(a: &ClassifyArgs) -> Result<(), Failure> {
    let model = match (&a.model_in, &a.train) {
        (Some(path), _) => {
            serde_json::from_str::<ModelDump>(&read(path)?).map_err(|e| Failure::input(format!("bad model JSON: {e}")))?
        }
        (None, Some(path)) => {
            let set = read_points(path, Some(&a.label_column))?;
            let labels = set.labels.clone().expect("label column requested");
            let points: Vec<FeatureVector> = set.points.into_iter().map(FeatureVector::new).collect::<Result<_, _>>()?;
            let kind = match a.metric {
                MetricArg::WeightedL1 => MetricKind::WeightedL1,
                MetricArg::WeightedEuclidean => MetricKind::WeightedEuclidean,
                MetricArg::Cosine => MetricKind::Cosine,
            };
            let dim = points.first().map_or(0, |p| p.dim());
            let metric = match &a.weights {
                Some(w) => WeightedMetric::new(kind, parse_vector(w)?)?,
                None => WeightedMetric::unit(kind, dim),
            };
            match a.model {
                ClassifierKind::Prototype => ModelDump::Prototype(PrototypeModel::fit(&points, &labels, metric)?),
                ClassifierKind::Exemplar => ModelDump::Exemplar(ExemplarModel::fit(&points, &labels, metric, a.k)?),
            }
        }
        (None, None) => return Err(Failure::input("need --train or --model-in")),
    };
    if let Some(path) = &a.model_out {
        write_atomic(path, &to_json(&model))?;
    }
    let query_path = a.query.as_ref().or(a.train.as_ref()).ok_or_else(|| Failure::input("need --query"))?;
    // a query file may carry the label column too; it is ignored
    let text = read(query_path)?;
    let has_label = text.lines().next().is_some_and(|h| h.split(',').any(|c| c.trim() == a.label_column));
    let set = PointSet::from_csv_reader(text.as_bytes(), has_label.then_some(a.label_column.as_str()))?;
    let mut csv = String::from("index,label,typicality\n");
    for (i, p) in set.points.iter().enumerate() {
        let c = model.classify(p)?;
        csv.push_str(&format!("{i},{},{}\n", c.label, c.typicality));
    }
    emit(a.out.as_deref(), &csv)
}

fn kmeans(a: &KmeansArgs, seed: u64) -> Result<(), Failure> {
    let set = read_points(&a.data, a.label_column.as_deref())?;
    let r = cluster_kmeans_with(&set.points, a.k, seed, a.max_iter)?;
    let mut csv = String::from("index,cluster\n");
    for (i, c) in r.assignments.iter().enumerate() {
        csv.push_str(&format!("{i},{c}\n"));
    }
    emit(a.out.as_deref(), &csv)?;
    eprintln!("wcss {} converged {}", r.wcss.last().copied().unwrap_or(0.0), r.converged);
    Ok(())
}

fn load_space(path: &Path) -> Result<EmbeddingSpace, Failure> {
    Ok(EmbeddingSpace::from_tsv(&read(path)?)?)
}

fn ranked_tsv(ranked: &[(String, f64)]) -> String {
    ranked.iter().map(|(t, s)| format!("{t}\t{s}\n")).collect()
}

fn logic(l: Logic) -> Result<(), Failure> {
    match l {
        Logic::Not { embedding, a, b, top_k } => {
            let space = load_space(&embedding)?;
            let v = vector_not(space.vector(&a)?, space.vector(&b)?)?;
            print!("{}", ranked_tsv(&space.nearest(&v, &[&a, &b], top_k)?));
        }
        Logic::Or { embedding, span, query, tol } => {
            let space = load_space(&embedding)?;
            let vectors = span.split(',').map(|t| space.vector(t.trim()).map(<[f64]>::to_vec)).collect::<Result<Vec<_>, _>>()?;
            let sub = vector_or(&vectors)?;
            println!("rank\t{}", sub.rank());
            for q in &query {
                let v = space.vector(q)?;
                println!("{q}\t{}\t{}", sub.residual(v)?, sub.contains(v, tol)?);
            }
        }
    }
    Ok(())
}
