//! Random model generators and fixture loading shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use infoclust::scalar::rational;
use infoclust::{FeatureProblem, LinearAtomicSource, ModelDocument, PmfSource, Rational, SourceModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> SourceModel {
    ModelDocument::load(fixture_path(name)).unwrap().build().unwrap()
}

/// The lifted linear-atomic problem of a fixture.
pub fn problem(name: &str) -> FeatureProblem<LinearAtomicSource> {
    let doc = ModelDocument::load(fixture_path(name)).unwrap();
    let lifted = doc.build().unwrap().lift(doc.dependent().unwrap()).unwrap();
    let SourceModel::LinearAtomic(src) = lifted else { panic!("{name} is not linear-atomic") };
    FeatureProblem::new(src).unwrap()
}

const WEIGHTS: [(i64, i64); 5] = [(1, 2), (1, 3), (2, 3), (3, 2), (5, 4)];

fn random_weight(rng: &mut impl Rng) -> Rational {
    let (n, d) = WEIGHTS[rng.gen_range(0..WEIGHTS.len())];
    rational(n, d)
}

fn combo(rng: &mut impl Rng, bits: &[String]) -> String {
    loop {
        let picked: Vec<&str> = bits.iter().filter(|_| rng.gen_bool(0.4)).map(String::as_str).collect();
        if !picked.is_empty() {
            return picked.join("^");
        }
    }
}

/// A linear-atomic source with `n` variables over a handful of shared
/// bits and atoms; variables overlap freely.
pub fn random_linear_atomic(rng: &mut impl Rng, n: usize) -> LinearAtomicSource {
    let bits: Vec<String> = (0..rng.gen_range(1..=5)).map(|i| format!("b{i}")).collect();
    let atoms: Vec<(String, Rational)> = (0..rng.gen_range(0..=2)).map(|i| (format!("w{i}"), random_weight(rng))).collect();
    let vars = (0..n)
        .map(|v| {
            let comps: Vec<String> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    if !atoms.is_empty() && rng.gen_bool(0.25) {
                        atoms.choose(rng).unwrap().0.clone()
                    } else {
                        combo(rng, &bits)
                    }
                })
                .collect();
            (format!("Z{v}"), comps)
        })
        .collect();
    LinearAtomicSource::new(bits, atoms, vars).unwrap()
}

/// A lifted problem with `m` mutually independent features: each feature owns
/// private primitives, and `Y` (index 0) mixes arbitrary primitives.
pub fn random_independent_problem(rng: &mut impl Rng, m: usize) -> FeatureProblem<LinearAtomicSource> {
    let mut bits = Vec::new();
    let mut atoms = Vec::new();
    let mut features = Vec::new();
    for f in 0..m {
        let own: Vec<String> = (0..rng.gen_range(1..=2)).map(|i| format!("b{f}_{i}")).collect();
        let mut comps: Vec<String> = own.clone();
        if rng.gen_bool(0.3) {
            let name = format!("w{f}");
            atoms.push((name.clone(), random_weight(rng)));
            comps.push(name);
        }
        bits.extend(own);
        features.push((format!("X{}", f + 1), comps));
    }
    let mut y: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| combo(rng, &bits)).collect();
    for (a, _) in &atoms {
        if rng.gen_bool(0.5) {
            y.push(a.clone());
        }
    }
    if rng.gen_bool(0.3) {
        bits.push("noise".into());
        y.push("noise".into());
    }
    let vars = std::iter::once(("Y".to_string(), y)).chain(features).collect();
    FeatureProblem::new(LinearAtomicSource::new(bits, atoms, vars).unwrap()).unwrap()
}

/// A lifted problem with arbitrary (typically dependent) features.
pub fn random_problem(rng: &mut impl Rng, n: usize) -> FeatureProblem<LinearAtomicSource> {
    FeatureProblem::new(random_linear_atomic(rng, n)).unwrap()
}

/// Thresholds on a grid of quarters, so that ties with breakpoints are common.
pub fn random_gamma(rng: &mut impl Rng) -> Rational {
    rational(rng.gen_range(-4..=16), [1, 2, 3, 4][rng.gen_range(0..4)])
}

/// A bits-only linear-atomic source and the same distribution enumerated
/// explicitly over all bit assignments.
pub fn bits_only_pair(rng: &mut impl Rng, n: usize) -> (LinearAtomicSource, PmfSource) {
    let bits: Vec<String> = (0..rng.gen_range(1..=4)).map(|i| format!("b{i}")).collect();
    let vars: Vec<(String, Vec<Vec<usize>>)> = (0..n)
        .map(|v| {
            let comps = (0..rng.gen_range(1..=2))
                .map(|_| loop {
                    let idx: Vec<usize> = (0..bits.len()).filter(|_| rng.gen_bool(0.5)).collect();
                    if !idx.is_empty() {
                        break idx;
                    }
                })
                .collect();
            (format!("Z{v}"), comps)
        })
        .collect();
    let exprs = vars
        .iter()
        .map(|(name, comps)| {
            let e: Vec<String> = comps
                .iter()
                .map(|idx| idx.iter().map(|&i| bits[i].clone()).collect::<Vec<_>>().join("^"))
                .collect();
            (name.clone(), e)
        })
        .collect();
    let la = LinearAtomicSource::new(bits.clone(), Vec::new(), exprs).unwrap();
    let k = bits.len();
    let p = rational(1, 1 << k);
    let outcomes = (0..1u32 << k)
        .map(|assign| {
            let values = vars
                .iter()
                .map(|(_, comps)| {
                    comps
                        .iter()
                        .map(|idx| (idx.iter().map(|&i| assign >> i & 1).sum::<u32>() % 2).to_string())
                        .collect::<String>()
                })
                .collect();
            (p.clone(), values)
        })
        .collect();
    let pmf = PmfSource::new(vars.iter().map(|(n, _)| n.clone()).collect(), outcomes).unwrap();
    (la, pmf)
}
