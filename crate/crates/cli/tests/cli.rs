use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use conceptkit::embedding::{BoxEmbedding, EmbeddingSpace};
use conceptkit::lattice::LatticeDocument;
use conceptkit::manifold::VaeModel;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conceptkit")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

/// Every closed attribute set, by brute force over all subsets.
fn concept_count(rows: &[Vec<bool>]) -> usize {
    let m = rows[0].len();
    let mut closed = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let extent: Vec<&Vec<bool>> = rows.iter().filter(|r| (0..m).all(|j| mask & (1 << j) == 0 || r[j])).collect();
        let intent: u32 = (0..m).filter(|&j| extent.iter().all(|r| r[j])).map(|j| 1 << j).sum();
        closed.insert(intent);
    }
    closed.len()
}

#[test]
fn fca_summaries() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "animals.csv", ",swims,barks\nduck,1,0\ndog,0,1\neel,1,0\n");
    let expected = concept_count(&[vec![true, false], vec![false, true], vec![true, false]]);
    let o = run(d, &["fca", "animals.csv", "--out-dir", "a"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with(&format!("{expected} concepts")), "{}", stdout(&o));

    write(d, "contra.csv", ",a,b,c\nx,0,1,1\ny,1,0,1\nz,1,1,0\n");
    let o = run(d, &["fca", "contra.csv", "--out-dir", "c"]);
    assert_eq!(stdout(&o).trim(), "8 concepts, height 3");
    write(d, "ident.csv", ",a,b,c\nx,1,0,0\ny,0,1,0\nz,0,0,1\n");
    let o = run(d, &["fca", "ident.csv", "--out-dir", "i"]);
    assert_eq!(stdout(&o).trim(), "5 concepts, height 2");

    let doc = LatticeDocument::from_json(&fs::read_to_string(d.join("c/lattice.json")).unwrap()).unwrap();
    assert_eq!(doc.to_lattice().unwrap().covers().len(), 12);
    let dot = fs::read_to_string(d.join("c/lattice.dot")).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 12);
    assert_eq!(code(&run(d, &["verify", "lattice", "c/lattice.json"])), 0);
}

#[test]
fn fca_input_errors() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "empty.csv", ",a,b\n");
    assert_eq!(code(&run(d, &["fca", "empty.csv"])), 2);
    write(d, "bad.csv", ",a,b\nx,1,0\ny,1,maybe\n");
    let o = run(d, &["fca", "bad.csv"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&run(d, &["fca", "absent.csv"])), 2);
    assert!(!d.join("lattice.json").exists());
}

#[test]
fn group_verification() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "c4.json", r#"{"kind":"cyclic","n":4}"#);
    let o = run(d, &["verify", "group", "c4.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"triples\": 64"));
    // Z/4 table with row 1 entries 2 and 3 swapped
    write(d, "bad.json", r#"{"kind":"table","table":[[0,1,2,3],[1,2,0,3],[2,3,0,1],[3,0,1,2]]}"#);
    let o = run(d, &["verify", "group", "bad.json"]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let violations = report["report"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|v| v["law"] == "associativity" && v["elements"].as_array().unwrap().len() == 3));
    write(d, "ragged.json", r#"{"kind":"table","table":[[0,1],[1]]}"#);
    assert_eq!(code(&run(d, &["verify", "group", "ragged.json"])), 2);
}

#[test]
fn invariance_checks() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "rot.json", r#"{"group":{"kind":"rotation","angles":[0.4,1.3,2.2,5.0]},"act":"rotate"}"#);
    write(d, "torus.json", r#"{"group":{"kind":"product","factors":[{"kind":"cyclic","n":8},{"kind":"cyclic","n":8}]},"act":"shift"}"#);
    let ok = |args: &[&str]| code(&run(d, args));
    assert_eq!(ok(&["invariance", "check", "--action", "rot.json", "--phi", "norm", "--tol", "1e-9"]), 0);
    assert_eq!(ok(&["verify", "invariance", "--action", "rot.json", "--phi", "identity", "--tol", "1e-9"]), 1);
    assert_eq!(ok(&["verify", "invariance", "--action", "nope.json", "--phi", "norm"]), 2);
    assert_eq!(ok(&["verify", "invariance", "--action", "rot.json", "--phi", "nope"]), 2);
    assert_eq!(
        ok(&["verify", "equivariance", "--action", "rot.json", "--phi", "polar-angle", "--psi", "angle-add", "--tol", "1e-9"]),
        0
    );
    assert_eq!(ok(&["verify", "equivariance", "--action", "rot.json", "--phi", "norm", "--psi", "rotate"]), 2);
    assert_eq!(ok(&["verify", "disentangle", "--action", "torus.json", "--phi", "torus", "--blocks", "0,1;2,3"]), 0);
    assert_eq!(ok(&["verify", "disentangle", "--action", "torus.json", "--phi", "torus-mixed", "--blocks", "0,1;2,3"]), 1);
    assert_eq!(ok(&["verify", "disentangle", "--action", "torus.json", "--phi", "torus", "--blocks", "0,1,2,3"]), 2);
    assert_eq!(ok(&["verify", "lie", "--function", "circle"]), 0);
    assert_eq!(ok(&["verify", "lie", "--function", "x"]), 1);
    let o = run(d, &["verify", "invariance", "--action", "rot.json", "--phi", "norm", "--out", "r.json"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(r["report"]["passed"], true);
}

#[test]
fn trainers_write_reloadable_artifacts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["gen", "corpus", "--sentences", "600", "--out", "corpus.txt"])), 0);
    assert_eq!(code(&run(d, &["train", "sgns", "--data", "corpus.txt", "--out", "emb.tsv"])), 0);
    let loss = fs::read_to_string(d.join("emb.loss.csv")).unwrap();
    let losses: Vec<f64> = loss.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(losses.len(), 5);
    assert!(losses[4] < losses[0]);
    let space = EmbeddingSpace::from_tsv(&fs::read_to_string(d.join("emb.tsv")).unwrap()).unwrap();
    assert_eq!(space.dim(), 16);

    run(d, &["gen", "tree", "--depth", "2", "--out", "tree.csv"]);
    assert_eq!(code(&run(d, &["train", "boxes", "--data", "tree.csv", "--out", "boxes.tsv"])), 0);
    let boxes = BoxEmbedding::from_tsv(&fs::read_to_string(d.join("boxes.tsv")).unwrap()).unwrap();
    assert_eq!(boxes.nodes.len(), 7);
    assert_eq!(code(&run(d, &["train", "poincare", "--data", "tree.csv", "--out", "ball.tsv", "--loss", "ball.csv"])), 0);
    assert!(EmbeddingSpace::from_tsv(&fs::read_to_string(d.join("ball.tsv")).unwrap()).is_ok());
    assert_eq!(fs::read_to_string(d.join("ball.csv")).unwrap().lines().count(), 201);

    run(d, &["gen", "moons", "--out", "moons.csv"]);
    let args = ["train", "vae", "--data", "moons.csv", "--label-column", "label", "--out", "idle.json", "--epochs", "0"];
    assert_eq!(code(&run(d, &args)), 0);
    let idle = VaeModel::from_json(&fs::read_to_string(d.join("idle.json")).unwrap()).unwrap();
    assert_eq!(idle, VaeModel::new(2, 1, 16, 0).unwrap());

    let args = ["vae", "train", "--data", "moons.csv", "--label-column", "label", "--out", "vae.json", "--epochs", "20"];
    assert_eq!(code(&run(d, &args)), 0);
    let o = run(d, &["vae", "interpolate", "--model", "vae.json", "--data", "moons.csv", "--label-column", "label", "--from", "0", "--to", "1", "--steps", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = run(d, &["vae", "interpolate", "--model", "vae.json", "--data", "moons.csv", "--label-column", "label", "--from", "0", "--to", "999"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn divergence_exits_one() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "big.csv", "a,b,c\n1000,-2000,500\n-3000,100,4000\n2000,2000,-1000\n");
    let o = run(d, &["train", "vae", "--data", "big.csv", "--out", "m.json", "--lr", "1000", "--latent-dim", "1", "--epochs", "50"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverged"));
    assert!(!d.join("m.json").exists());
}

#[test]
fn config_merges_under_explicit_flags() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["gen", "moons", "--n", "40", "--out", "moons.csv"]);
    write(d, "cfg.json", r#"{"epochs": 3, "lr": 0.01, "seed": 5, "batch-size": 8}"#);
    let base = ["train", "vae", "--data", "moons.csv", "--label-column", "label"];
    fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
        [&["--config", "cfg.json"][..], base, extra].concat()
    }
    assert_eq!(code(&run(d, &with(&base, &["--out", "a.json"]))), 0);
    assert_eq!(fs::read_to_string(d.join("a.loss.csv")).unwrap().lines().count(), 4);
    assert!(fs::read_to_string(d.join("a.json")).unwrap().contains("\"seed\": 5"));
    assert_eq!(code(&run(d, &with(&base, &["--out", "b.json", "--epochs", "1", "--seed", "2"]))), 0);
    assert_eq!(fs::read_to_string(d.join("b.loss.csv")).unwrap().lines().count(), 2);
    assert!(fs::read_to_string(d.join("b.json")).unwrap().contains("\"seed\": 2"));
    // config applied equals the same flags given by hand
    let by_hand = [&base[..], &["--out", "c.json", "--epochs", "3", "--lr", "0.01", "--seed", "5", "--batch-size", "8"]].concat();
    assert_eq!(code(&run(d, &by_hand)), 0);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("c.json")).unwrap());

    write(d, "bogus.json", r#"{"bogus": 1}"#);
    assert_eq!(code(&run(d, &[&["--config", "bogus.json"][..], &base[..], &["--out", "x.json"]].concat())), 2);
    assert_eq!(code(&run(d, &[&["--config", "absent.json"][..], &base[..], &["--out", "x.json"]].concat())), 2);
    assert_eq!(code(&run(d, &["train", "vae", "--data", "moons.csv", "--out", "x.json", "--unknown"])), 2);
}

#[test]
fn similarity_and_vector_logic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    run(d, &["gen", "blobs", "--centers", "-3,0;3,0", "--spread", "0.2", "--out", "blobs.csv"]);
    let o = run(d, &["classify", "--train", "blobs.csv", "--model-out", "proto.json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(str::to_owned).collect();
    assert_eq!(rows.len(), 100);
    // generator emits the clusters in label order
    assert!(rows[..50].iter().all(|r| r.contains(",c0,")) && rows[50..].iter().all(|r| r.contains(",c1,")));
    let again = run(d, &["classify", "--model-in", "proto.json", "--query", "blobs.csv"]);
    assert_eq!(stdout(&again), stdout(&o));
    write(d, "q.csv", "x0,x1\n-2.9,0.1\n3.2,0\n");
    let o = run(d, &["classify", "--train", "blobs.csv", "--model", "exemplar", "--k", "3", "--query", "q.csv"]);
    assert_eq!(stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_owned()).collect::<Vec<_>>(), ["c0", "c1"]);
    assert_eq!(code(&run(d, &["classify", "--train", "blobs.csv", "--model", "exemplar", "--k", "0"])), 2);

    let o = run(d, &["kmeans", "--data", "blobs.csv", "--label-column", "label", "--k", "2"]);
    let clusters: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_owned()).collect();
    assert!(clusters[..50].iter().all(|c| *c == clusters[0]) && clusters[50..].iter().all(|c| *c == clusters[50]));
    assert_ne!(clusters[0], clusters[50]);

    write(d, "emb.tsv", "a\t1\t0\t0\nb\t1\t1\t0\nc\t0\t0\t1\nd\t0\t1\t0\n");
    let o = run(d, &["logic", "not", "--embedding", "emb.tsv", "b", "a", "--top-k", "1"]);
    assert!(stdout(&o).starts_with("d\t1"), "{}", stdout(&o));
    let o = run(d, &["logic", "or", "--embedding", "emb.tsv", "--span", "a,b", "d", "c"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank\t2");
    assert!(lines[1].ends_with("true") && lines[2].ends_with("false"));
    let o = run(d, &["analogy", "--embedding", "emb.tsv", "a", "b", "c", "--top-k", "1"]);
    assert!(stdout(&o).starts_with("d\t"));
    assert_eq!(code(&run(d, &["analogy", "--embedding", "emb.tsv", "a", "b", "zzz"])), 2);
}
