//! Acceptance suite. Runs every criterion, prints one PASS/FAIL/BLOCKED line
//! per criterion and exits non-zero if any criterion failed.
//!
//! The FVC2002 DB1_B criterion needs the real images. Point `FVC2002_DB1B`
//! at the directory holding `101_1.tif` .. `110_8.tif` to run it; without
//! the variable it reports BLOCKED and a labelled synthetic proxy runs
//! instead.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use fpid::dataset::build_dataset;
use fpid::diffusion::{enhance_trajectory, DiffusionParams};
use fpid::evaluation::{cross_validate, metrics, ConfusionMatrix};
use fpid::imaging::{GrayImage, QuantizedImage};
use fpid::learners::{
    best_split, grow_greedy, model_to_json, train_random_tree, LearnerSpec, Samples, SplitCandidate,
    SplitCriterion,
};
use fpid::orientation::{detect_core, poincare_index, OrientationField};
use fpid::pipeline::ExtractionConfig;
use fpid::synth::{write_corpus, CorpusSpec};
use fpid::texture::{self, descriptor_vector, glcm, normalize, Angle, Descriptor, Offset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Blocked(String),
}

fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-12)
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match result {
        Err(e) => Outcome::Fail(format!("{e} ({:.2}s)", elapsed.as_secs_f64())),
        Ok(_) if elapsed > limit => Outcome::Fail(format!(
            "runtime {:.2}s exceeds {:.0}s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        )),
        Ok(msg) => Outcome::Pass(format!("{msg} ({:.2}s)", elapsed.as_secs_f64())),
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- texture

/// Counts every in-bounds ordered pair in both directions.
fn oracle_counts(q: &QuantizedImage, dx: isize, dy: isize) -> HashMap<(usize, usize), u64> {
    let mut counts = HashMap::new();
    for y in 0..q.height() as isize {
        for x in 0..q.width() as isize {
            let (x2, y2) = (x + dx, y + dy);
            if x2 < 0 || y2 < 0 || x2 >= q.width() as isize || y2 >= q.height() as isize {
                continue;
            }
            let a = q.get(x as usize, y as usize);
            let b = q.get(x2 as usize, y2 as usize);
            *counts.entry((a, b)).or_insert(0) += 1;
            *counts.entry((b, a)).or_insert(0) += 1;
        }
    }
    counts
}

/// Seven descriptors summed straight from the sparse counts.
fn oracle_descriptors(counts: &HashMap<(usize, usize), u64>) -> [f64; 7] {
    let total: u64 = counts.values().sum();
    let t = total as f64;
    let mut cells: Vec<(f64, f64, f64)> = counts
        .iter()
        .map(|(&(m, n), &c)| (m as f64, n as f64, c as f64 / t))
        .collect();
    cells.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    let mu: f64 = cells.iter().map(|&(m, _, p)| m * p).sum();
    let mut out = [0.0; 7];
    for &(m, n, p) in &cells {
        out[0] += (m - mu).powi(2) * p;
        out[1] = f64::max(out[1], p);
        out[2] += p / (1.0 + (m - n).abs());
        out[3] -= if p > 0.0 { p * p.log10() } else { 0.0 };
        out[4] += p * p;
        out[5] += (m - n).abs() * p;
        out[6] += (m - n).powi(2) * p;
    }
    out
}

fn texture_criterion() -> Result<String, String> {
    // worked 4x4 example, offset (1, 0 deg)
    let rows = [[0u16, 0, 1, 1], [0, 0, 1, 1], [0, 2, 2, 2], [2, 2, 3, 3]];
    let q = QuantizedImage::new(4, 4, 4, rows.iter().flatten().copied().collect()).map_err(|e| e.to_string())?;
    let p = normalize(&glcm(&q, Offset::new(1, Angle::Deg0).unwrap()).unwrap());
    let got = texture::descriptors(&p);
    let expected = oracle_descriptors(&oracle_counts(&q, 1, 0));
    let published = [1.0399, 0.25, 0.8194, 0.9097, 0.1458, 0.4167, 0.5833];
    for i in 0..7 {
        ensure!(close_rel(got[i], expected[i], 1e-10), "worked example descriptor {i}: {} vs oracle {}", got[i], expected[i]);
        ensure!((got[i] - published[i]).abs() < 5e-5, "worked example descriptor {i}: {} vs {}", got[i], published[i]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut compared = 0usize;
    for _ in 0..200 {
        let w = rng.random_range(4..=16);
        let h = rng.random_range(4..=16);
        let k = [2usize, 4, 8][rng.random_range(0..3)];
        let bins: Vec<u16> = (0..w * h).map(|_| rng.random_range(0..k) as u16).collect();
        let q = QuantizedImage::new(w, h, k, bins).map_err(|e| e.to_string())?;
        let mut per_angle: HashMap<Angle, Vec<[f64; 7]>> = HashMap::new();
        for d in 1..=3 {
            for angle in Angle::ALL {
                let off = Offset::new(d, angle).unwrap();
                let (dx, dy) = off.displacement();
                let g = glcm(&q, off).map_err(|e| e.to_string())?;
                let oracle = oracle_counts(&q, dx, dy);
                for m in 0..k {
                    for n in 0..k {
                        let want = oracle.get(&(m, n)).copied().unwrap_or(0);
                        ensure!(g.count(m, n) == want, "{w}x{h} K={k} d={d} {angle}: count({m},{n}) {} vs {want}", g.count(m, n));
                    }
                }
                ensure!(g.total_pairs() == oracle.values().sum::<u64>(), "total pairs differ");
                let got = texture::descriptors(&normalize(&g));
                let want = oracle_descriptors(&oracle);
                for i in 0..7 {
                    ensure!(
                        close_rel(got[i], want[i], 1e-10),
                        "{w}x{h} K={k} d={d} {angle}: {} = {} vs oracle {}",
                        Descriptor::ALL[i].name(),
                        got[i],
                        want[i]
                    );
                    compared += 1;
                }
                per_angle.entry(angle).or_default().push(want);
            }
        }
        let fv = descriptor_vector(&q, &[1, 2, 3], "x").map_err(|e| e.to_string())?;
        for angle in Angle::ALL {
            let rows = &per_angle[&angle];
            for (i, d) in Descriptor::ALL.iter().enumerate() {
                let mean = rows.iter().map(|r| r[i]).sum::<f64>() / rows.len() as f64;
                let got = fv.values[texture::attribute_index(*d, angle)];
                ensure!(close_rel(got, mean, 1e-10), "averaged {} at {angle}: {got} vs {mean}", d.name());
            }
        }
    }
    Ok(format!("200 images, {compared} descriptor values, worked example matched"))
}

// -------------------------------------------------------------- diffusion

fn diffusion_criterion() -> Result<String, String> {
    let params = DiffusionParams {
        steps: 20,
        ..DiffusionParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
    let mut worst_mean = 0.0f64;
    let mut worst_excursion = 0.0f64;
    for case in 0..100 {
        // alternate pure noise with noisy oriented stripes
        let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let striped = case % 2 == 1;
        let noise: Vec<f64> = (0..32 * 32).map(|_| rng.random_range(0.0..255.0)).collect();
        let img = GrayImage::from_fn(32, 32, |x, y| {
            let n = noise[y * 32 + x];
            if striped {
                let s = (x as f64 * theta.cos() + y as f64 * theta.sin()) * 0.8;
                (127.5 + 100.0 * s.sin() + 0.2 * (n - 127.5)).clamp(0.0, 255.0)
            } else {
                n
            }
        })
        .map_err(|e| e.to_string())?;
        let px = img.pixels();
        let mean0 = px.iter().sum::<f64>() / px.len() as f64;
        let lo = px.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = px.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let trajectory = enhance_trajectory(&img, &params).map_err(|e| e.to_string())?;
        ensure!(trajectory.len() == 20, "expected 20 steps");
        for (step, state) in trajectory.iter().enumerate() {
            let mean = state.iter().sum::<f64>() / state.len() as f64;
            let rel = (mean - mean0).abs() / mean0.abs();
            worst_mean = worst_mean.max(rel);
            ensure!(rel <= 1e-9, "case {case} step {step}: mean drift {rel:e}");
            let smin = state.iter().copied().fold(f64::INFINITY, f64::min);
            let smax = state.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let excursion = (lo - smin).max(smax - hi).max(0.0);
            worst_excursion = worst_excursion.max(excursion);
            ensure!(excursion <= 1e-9, "case {case} step {step}: range [{smin}, {smax}] leaves [{lo}, {hi}]");
        }
    }
    Ok(format!(
        "100 images x 20 steps, max mean drift {worst_mean:.1e}, max excursion {worst_excursion:.1e}"
    ))
}

// --------------------------------------------------------------- poincare

fn core_field(blocks_x: usize, blocks_y: usize, bs: usize, core: (f64, f64), phase: f64) -> OrientationField {
    let mut angles = Vec::new();
    for row in 0..blocks_y {
        for col in 0..blocks_x {
            let x = (col * bs) as f64 + bs as f64 / 2.0;
            let y = (row * bs) as f64 + bs as f64 / 2.0;
            angles.push(0.5 * (y - core.1).atan2(x - core.0) + phase);
        }
    }
    OrientationField::from_angles(blocks_x, blocks_y, bs, angles, vec![1.0; blocks_x * blocks_y]).unwrap()
}

fn poincare_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x901c);
    let mut checked = 0usize;
    for placement in 0..50 {
        let bs = [8usize, 10, 12, 16][rng.random_range(0..4)];
        let bx = rng.random_range(8..16);
        let by = rng.random_range(8..16);
        let col = rng.random_range(1..bx - 1);
        let row = rng.random_range(1..by - 1);
        // anywhere inside the planted block, away from its exact centre
        let cx = (col * bs) as f64 + rng.random_range(0.05..0.95) * bs as f64;
        let cy = (row * bs) as f64 + rng.random_range(0.05..0.95) * bs as f64;
        let field = core_field(bx, by, bs, (cx, cy), rng.random_range(0.0..3.0));

        let planted = poincare_index(&field, row, col).map_err(|e| e.to_string())?;
        ensure!((planted - 0.5).abs() <= 0.05, "placement {placement}: planted block index {planted}");
        for r in 1..by - 1 {
            for c in 1..bx - 1 {
                // the ring of (r, c) encloses the core iff the core lies
                // within one block spacing of the block centre
                let (bx_c, by_c) = ((c * bs) as f64 + bs as f64 / 2.0, (r * bs) as f64 + bs as f64 / 2.0);
                let far = (bx_c - cx).abs().max((by_c - cy).abs()) >= bs as f64;
                if !far {
                    continue;
                }
                let pi = poincare_index(&field, r, c).map_err(|e| e.to_string())?;
                ensure!(pi.abs() <= 0.05, "placement {placement}: block ({r},{c}) index {pi}");
                checked += 1;
            }
        }
        let core = detect_core(&field);
        ensure!(!core.fallback, "placement {placement}: no core found");
        let (dc, dr) = (
            (core.x / bs) as isize - col as isize,
            (core.y / bs) as isize - row as isize,
        );
        ensure!(dc.abs() <= 1 && dr.abs() <= 1, "placement {placement}: core block off by ({dc},{dr})");
    }
    Ok(format!("50 placements, {checked} non-enclosing rings at 0"))
}

// --------------------------------------------------------------- learners

fn random_samples(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize, levels: u32) -> Samples {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(0..levels) as f64 * 0.5).collect())
        .collect();
    let labels = (0..n).map(|_| rng.random_range(0..k)).collect();
    Samples::new(
        (0..m).map(|a| format!("a{a}")).collect(),
        (0..k).map(|c| format!("c{c}")).collect(),
        rows,
        labels,
    )
    .unwrap()
}

fn h(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| -(c / n) * (c / n).log2())
        .sum()
}

/// Brute force: every midpoint threshold of every attribute, partitioned and
/// scored from scratch.
fn oracle_split(s: &Samples, criterion: SplitCriterion) -> Option<(usize, f64, f64)> {
    let n = s.len();
    let mut parent = vec![0.0; s.n_classes()];
    for i in 0..n {
        parent[s.label(i)] += 1.0;
    }
    let base = h(&parent);
    let mut per_attr: Vec<Vec<(f64, f64, f64)>> = Vec::new();
    for a in 0..s.n_attributes() {
        let mut vals: Vec<f64> = (0..n).map(|i| s.value(i, a)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let mut list = Vec::new();
        for pair in vals.windows(2) {
            let t = (pair[0] + pair[1]) / 2.0;
            let mut l = vec![0.0; s.n_classes()];
            let mut r = vec![0.0; s.n_classes()];
            for i in 0..n {
                if s.value(i, a) <= t {
                    l[s.label(i)] += 1.0;
                } else {
                    r[s.label(i)] += 1.0;
                }
            }
            let (nl, nr) = (l.iter().sum::<f64>(), r.iter().sum::<f64>());
            let gain = base - nl / n as f64 * h(&l) - nr / n as f64 * h(&r);
            let si = h(&[nl, nr]);
            list.push((t, gain, gain / si));
        }
        per_attr.push(list);
    }
    let tol = 1e-12;
    match criterion {
        SplitCriterion::InfoGain => {
            let max = per_attr.iter().flatten().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            if !(max > tol) {
                return None;
            }
            for (a, list) in per_attr.iter().enumerate() {
                if let Some(c) = list.iter().find(|c| c.1 >= max - tol) {
                    return Some((a, c.0, c.1));
                }
            }
            None
        }
        SplitCriterion::GainRatio => {
            let mut best = Vec::new();
            for (a, list) in per_attr.iter().enumerate() {
                let max = list.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
                if let Some(c) = list.iter().find(|c| c.1 >= max - tol) {
                    if c.1 > tol {
                        best.push((a, *c));
                    }
                }
            }
            if best.is_empty() {
                return None;
            }
            let mean = best.iter().map(|b| b.1 .1).sum::<f64>() / best.len() as f64;
            let eligible: Vec<_> = best.into_iter().filter(|b| b.1 .1 >= mean - tol).collect();
            let top = eligible.iter().map(|b| b.1 .2).fold(f64::NEG_INFINITY, f64::max);
            eligible
                .into_iter()
                .find(|b| b.1 .2 >= top - tol)
                .map(|(a, c)| (a, c.0, c.1))
        }
    }
}

fn same_split(got: Option<SplitCandidate>, want: Option<(usize, f64, f64)>) -> bool {
    match (got, want) {
        (None, None) => true,
        (Some(g), Some((a, t, gain))) => g.attribute == a && g.threshold == t && (g.gain - gain).abs() < 1e-12,
        _ => false,
    }
}

/// Removes rows whose feature vector repeats with a different label.
fn make_consistent(s: &Samples) -> Samples {
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut keep = Vec::new();
    for i in 0..s.len() {
        let key: Vec<u64> = s.row(i).iter().map(|v| v.to_bits()).collect();
        match seen.get(&key) {
            Some(&l) if l != s.label(i) => {}
            _ => {
                seen.insert(key, s.label(i));
                keep.push(i);
            }
        }
    }
    s.subset(&keep)
}

fn learner_criterion() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ea7);
    for case in 0..100 {
        let n = rng.random_range(2..=30);
        let m = rng.random_range(1..=5);
        let k = rng.random_range(2..=4);
        let levels = rng.random_range(2..12);
        let s = random_samples(&mut rng, n, m, k, levels);
        let all: Vec<usize> = (0..n).collect();
        let attrs: Vec<usize> = (0..m).collect();
        for criterion in [SplitCriterion::InfoGain, SplitCriterion::GainRatio] {
            let got = best_split(&s, &all, &attrs, criterion, 1);
            let want = oracle_split(&s, criterion);
            ensure!(same_split(got, want), "case {case} {criterion:?}: {got:?} vs oracle {want:?}");
            if let Some(g) = got {
                ensure!(g.gain > 0.0, "case {case}: non-positive gain returned");
            }
        }
    }

    let mut fitted = 0;
    for case in 0..100 {
        let s = make_consistent(&random_samples(&mut rng, 40, 6, 5, 6));
        let model = train_random_tree(&s, None, case).map_err(|e| e.to_string())?;
        for i in 0..s.len() {
            let p = model.predict_index(s.row(i)).map_err(|e| e.to_string())?;
            ensure!(p == s.label(i), "case {case}: random tree misclassifies training row {i}");
        }
        fitted += s.len();
    }

    for case in 0..20 {
        let s = random_samples(&mut rng, 20, 4, 3, 1000);
        let tree = train_random_tree(&s, Some(4), case).map_err(|e| e.to_string())?;
        ensure!(tree.trees[0] == grow_greedy(&s, 1), "case {case}: k = M differs from greedy tree");
    }

    for case in 0..5u64 {
        let s = random_samples(&mut rng, 60, 8, 4, 20);
        for spec in LearnerSpec::DEFAULTS {
            let a = model_to_json(&spec.train(&s, case).map_err(|e| e.to_string())?);
            let b = model_to_json(&spec.train(&s, case).map_err(|e| e.to_string())?);
            ensure!(a == b, "{} not deterministic", spec.display_name());
        }
    }
    Ok(format!("100 split oracles x 2 criteria, {fitted} training rows fitted, 5 trainers deterministic"))
}

// ---------------------------------------------------------------- metrics

fn metrics_criterion() -> Result<String, String> {
    let cm = ConfusionMatrix {
        classes: vec!["a".into(), "b".into()],
        counts: vec![vec![8, 2], vec![4, 6]],
    };
    let m = metrics(&cm);
    let c0 = &m.per_class[0];
    let (p, r) = (8.0 / 12.0, 8.0 / 10.0);
    let f = 2.0 * p * r / (p + r);
    ensure!((c0.precision - p).abs() < 1e-12 && (c0.precision - 0.667).abs() < 5e-4, "precision {}", c0.precision);
    ensure!((c0.recall - 0.8).abs() < 1e-12, "recall {}", c0.recall);
    ensure!((c0.f_measure - f).abs() < 1e-12 && (c0.f_measure - 0.727).abs() < 5e-4, "F {}", c0.f_measure);

    let mut rng = ChaCha8Rng::seed_from_u64(0x3e7);
    for _ in 0..100 {
        let k = rng.random_range(1..12);
        let counts = (0..k)
            .map(|i| (0..k).map(|j| if i == j { rng.random_range(1..100) } else { 0 }).collect())
            .collect();
        let m = metrics(&ConfusionMatrix {
            classes: (0..k).map(|c| c.to_string()).collect(),
            counts,
        });
        ensure!(
            m.per_class.iter().all(|c| c.precision == 1.0 && c.recall == 1.0 && c.f_measure == 1.0),
            "diagonal matrix not all ones"
        );
    }
    Ok(format!("class 0: P {:.3} R {:.3} F {:.3}; 100 diagonal matrices all ones", c0.precision, c0.recall, c0.f_measure))
}

// ------------------------------------------------------------ DB1_B ranking

const ORDER: [&str; 5] = ["random_forest", "j48", "random_tree", "rep_tree", "decision_stump"];

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Extraction, then 10-fold CV over 5 seeds per learner. Returns the
/// instance count, attribute count and median weighted F per learner.
fn shape_run(root: &Path) -> Result<(usize, usize, Vec<(String, f64)>), String> {
    let outcome = build_dataset(root, &ExtractionConfig::default()).map_err(|e| e.to_string())?;
    let ds = outcome.dataset;
    let mut medians = Vec::new();
    for key in ORDER {
        let spec: LearnerSpec = key.parse().map_err(|e: fpid::Error| e.to_string())?;
        let fs = (0..5u64)
            .map(|seed| cross_validate(&spec, &ds, 10, seed).map(|r| r.metrics.f_measure))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        medians.push((spec.display_name().to_string(), median(fs)));
    }
    Ok((ds.len(), ds.attributes().len(), medians))
}

fn ordering_holds(f: &[(String, f64)]) -> Vec<String> {
    let v: Vec<f64> = f.iter().map(|x| x.1).collect();
    let (rf, j48, rt, rep, stump) = (v[0], v[1], v[2], v[3], v[4]);
    let mut broken = Vec::new();
    if rf < j48 {
        broken.push("RF >= J48".to_string());
    }
    if j48 <= rt.max(rep) {
        broken.push("J48 > {RT, REP}".to_string());
    }
    if rt.min(rep) <= stump {
        broken.push("{RT, REP} > Stump".to_string());
    }
    if stump >= 0.30 {
        broken.push("Stump F < 0.30".to_string());
    }
    if rf <= 0.40 {
        broken.push("RF F > 0.40".to_string());
    }
    broken
}

fn summary(f: &[(String, f64)]) -> String {
    f.iter().map(|(n, v)| format!("{n} {v:.3}")).collect::<Vec<_>>().join(", ")
}

fn db1b_ranking_criterion(root: &Path) -> Outcome {
    timed(Duration::from_secs(300), || {
        let (n, m, f) = shape_run(root)?;
        ensure!(n == 80 && m == 28, "{n} instances x {m} attributes, expected 80 x 28");
        let broken = ordering_holds(&f);
        ensure!(broken.is_empty(), "median weighted F: {}; violated: {}", summary(&f), broken.join("; "));
        Ok(format!("80 x 28; median weighted F: {}", summary(&f)))
    })
}

fn synthetic_proxy() -> String {
    let dir = tempfile::tempdir().expect("temp dir");
    let start = Instant::now();
    if let Err(e) = write_corpus(&CorpusSpec::default(), dir.path()) {
        return format!("corpus generation failed: {e}");
    }
    match shape_run(dir.path()) {
        Ok((n, m, f)) => {
            let broken = ordering_holds(&f);
            format!(
                "{n} x {m}; median weighted F: {}; ordering {} ({:.1}s)",
                summary(&f),
                if broken.is_empty() { "holds".to_string() } else { format!("violated: {}", broken.join("; ")) },
                start.elapsed().as_secs_f64()
            )
        }
        Err(e) => format!("failed: {e}"),
    }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("texture oracle equivalence", timed(Duration::from_secs(5), texture_criterion)),
        ("diffusion conservation and extremum", timed(Duration::from_secs(30), diffusion_criterion)),
        ("poincare suite", timed(Duration::from_secs(10), poincare_criterion)),
        ("learner oracle suite", timed(Duration::from_secs(60), learner_criterion)),
        ("metrics formula check", timed(Duration::from_secs(5), metrics_criterion)),
    ];
    let db1b = std::env::var_os("FVC2002_DB1B").map(PathBuf::from);
    let shape = match &db1b {
        Some(root) => db1b_ranking_criterion(root),
        None => Outcome::Blocked("FVC2002_DB1B not set; the DB1_B images are not distributed with this repository".into()),
    };
    results.push(("FVC2002 DB1_B learner ranking", shape));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Outcome::Pass(msg) => println!("PASS     {name}: {msg}"),
            Outcome::Fail(msg) => {
                failed += 1;
                println!("FAIL     {name}: {msg}")
            }
            Outcome::Blocked(msg) => println!("BLOCKED  {name}: {msg}"),
        }
    }
    if db1b.is_none() {
        println!("PROXY    synthetic 10 subjects x 8 impressions (not DB1_B): {}", synthetic_proxy());
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
