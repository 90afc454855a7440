use std::path::Path;
use std::time::{Duration, Instant};

use liotkit::container::write_container;
use liotkit::datasets::{self, DatasetSpec};
use liotkit::io::{self, load_image, load_mask};
use liotkit::metrics::{best_threshold_by_f1, binary_report, Connectivity, ProbabilityMap};
use liotkit::perturb::{self, check_invariance, gamma_lut, Invariance, LevelSet, MonotoneLut, OrderTransform};
use liotkit::{census_transform, liot_transform_naive, liot_transform_with, Execution, GrayImage, GrayMode, LiotImage, Side};

use crate::error::CliError;
use crate::{Method, TransformArg};

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))
}

pub fn transform(
    input: &Path,
    output: &Path,
    gray: GrayMode,
    invert: bool,
    method: Method,
    dump_planes: Option<&Path>,
) -> Result<(), CliError> {
    let img = load_image(input)?.into_gray(gray);
    let img = if invert { img.invert() } else { img };
    let (w, h) = img.dimensions();
    if method == Method::Census {
        let codes = census_transform(&img);
        io::save_gray(output, codes.as_gray())?;
        if let Some(dir) = dump_planes {
            create_dir(dir)?;
            io::save_gray(dir.join("census.png"), codes.as_gray())?;
        }
        println!("census {w}x{h} -> {}", output.display());
        return Ok(());
    }
    let out: LiotImage = match method {
        Method::Naive => liot_transform_naive(&img),
        _ => liot_transform_with(&img, Execution::Parallel),
    };
    write_container(output, &out)?;
    if let Some(dir) = dump_planes {
        create_dir(dir)?;
        for side in Side::ALL {
            io::save_gray(dir.join(format!("{}.png", side.short_name())), &out.plane_image(side))?;
        }
    }
    println!("liot {w}x{h} -> {} ({} bytes)", output.display(), liotkit::container::container_len(w, h));
    Ok(())
}

/// Two axis-adjacent pixels with different values, if any.
fn adjacent_distinct_pair(img: &GrayImage) -> Option<(u8, u8)> {
    let (w, h) = img.dimensions();
    for y in 0..h {
        for x in 0..w {
            let v = img.get(x, y);
            if x + 1 < w && img.get(x + 1, y) != v {
                return Some((v, img.get(x + 1, y)));
            }
            if y + 1 < h && img.get(x, y + 1) != v {
                return Some((v, img.get(x, y + 1)));
            }
        }
    }
    None
}

pub fn invariance(
    input: &Path,
    seed: u64,
    trials: usize,
    gray: GrayMode,
    transform: TransformArg,
    lut_file: Option<&Path>,
    inject_swap: bool,
) -> Result<(), CliError> {
    let img = load_image(input)?.into_gray(gray);
    let which = match transform {
        TransformArg::Liot => OrderTransform::Liot,
        TransformArg::Census => OrderTransform::Census,
    };
    let levels = LevelSet::of(&img);

    let mut runs: Vec<(String, MonotoneLut, bool)> = Vec::new();
    for k in 0..trials {
        let s = seed.wrapping_add(k as u64);
        runs.push((format!("random seed={s}"), perturb::random_strict_lut_on(&levels, s), true));
    }
    for g in [0.5, 1.0, 2.0] {
        runs.push((format!("gamma {g}"), gamma_lut(g)?, true));
    }
    if let Some(path) = lut_file {
        runs.push((format!("lut {}", path.display()), MonotoneLut::load(path)?, true));
    }
    if inject_swap {
        match adjacent_distinct_pair(&img) {
            Some((a, b)) => runs.push((format!("swap {a}<->{b}"), MonotoneLut::swap(a, b), false)),
            None => log::warn!("image has no adjacent distinct levels; swap control not added"),
        }
    }

    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for (label, lut, require_strict) in &runs {
        match check_invariance(&img, lut, which, *require_strict) {
            Invariance::Pass => {
                passed += 1;
                println!("PASS {label}");
            }
            Invariance::Fail { mismatched } => {
                failed += 1;
                println!("FAIL {label} ({mismatched} bytes differ)");
            }
            Invariance::Inadmissible => {
                skipped += 1;
                println!("SKIP {label} (lut is not strictly increasing on the image levels)");
            }
        }
    }
    println!("summary: {passed} passed, {failed} failed, {skipped} skipped of {} trials", runs.len());
    if failed > 0 {
        return Err(CliError::invariance(format!("{failed} invariance trial(s) failed")));
    }
    Ok(())
}

pub fn metrics(
    pred: &Path,
    gt: &Path,
    fov: Option<&Path>,
    prob: bool,
    adjacency: Connectivity,
    json: bool,
) -> Result<(), CliError> {
    let pred_img = io::load_gray(pred, GrayMode::Luma)?;
    let gt = load_mask(gt)?;
    let fov = fov.map(load_mask).transpose()?;
    let report = if prob {
        best_threshold_by_f1(&ProbabilityMap::from_gray(&pred_img), &gt, fov.as_ref(), adjacency)?
    } else {
        let binary = liotkit::BinaryMask::from_gray(&pred_img, 127);
        binary_report(&binary, &gt, fov.as_ref(), adjacency)?
    };
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    Ok(())
}

pub fn dataset(name: Option<&str>, root: &Path, config: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let spec = match (config, name) {
        (Some(cfg), _) => DatasetSpec::from_config_file(cfg)?,
        (None, Some(name)) => datasets::builtin_spec(name, root)?,
        (None, None) => return Err(CliError::usage("either a dataset name or --config is required")),
    };
    let samples = datasets::prepare(&spec)?;
    create_dir(out)?;
    datasets::write_prepared(&samples, spec.name, out)?;
    println!("prepared {} samples -> {}", samples.len(), out.display());
    Ok(())
}

fn time_per_image(iters: u32, mut f: impl FnMut() -> LiotImage) -> (Duration, LiotImage) {
    let mut last = f();
    let start = Instant::now();
    for _ in 0..iters {
        last = f();
    }
    (start.elapsed() / iters, last)
}

fn fnv1a(planes: &LiotImage) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in planes.planes().iter().flatten() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn bench(size: &str, iters: u32, seed: u64) -> Result<(), CliError> {
    let (w, h) = datasets::parse_size(size)?.ok_or_else(|| CliError::usage("--size must be WxH"))?;
    let img = perturb::random_image(w, h, seed)?;
    let pixels = (w * h) as f64;

    let (seq, a) = time_per_image(iters, || liot_transform_with(&img, Execution::Sequential));
    let (par, b) = time_per_image(iters, || liot_transform_with(&img, Execution::Parallel));
    let (naive, c) = time_per_image(iters, || liot_transform_naive(&img));
    if a != c || b != c {
        return Err(CliError::invariance("fast path disagrees with the naive reference"));
    }
    println!("bench {w}x{h} iters={iters} seed={seed} checksum={:016x}", fnv1a(&c));
    for (label, t) in [("fast-sequential", seq), ("fast-parallel", par), ("naive", naive)] {
        // guard the 1x1 case where a run can round to zero
        let secs = t.as_secs_f64().max(1e-9);
        eprintln!("{label:<16} {:>10.3} ms/image {:>12.1} Mpx/s", secs * 1e3, pixels / secs / 1e6);
    }
    if seq > naive {
        log::warn!("fast path was slower than the naive reference on this run");
    }
    Ok(())
}

pub fn lut(output: &Path, gamma: Option<f64>, seed: Option<u64>, levels_from: Option<&Path>) -> Result<(), CliError> {
    let table = match (gamma, seed) {
        (Some(g), _) => gamma_lut(g)?,
        (None, Some(s)) => match levels_from {
            Some(img) => perturb::random_strict_lut_on(&LevelSet::of(&io::load_gray(img, GrayMode::Green)?), s),
            None => perturb::random_strict_lut(s),
        },
        (None, None) => return Err(CliError::usage("one of --gamma or --seed is required")),
    };
    table.save(output)?;
    if !table.is_strict() {
        eprintln!("note: table is not strictly increasing; invariance may not hold");
    }
    println!("lut -> {}", output.display());
    Ok(())
}
