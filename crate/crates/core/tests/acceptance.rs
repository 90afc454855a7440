//! Acceptance criteria for the core library. Each criterion prints one
//! PASS/FAIL line; run with `cargo test -p liotkit --test acceptance -- --nocapture`.

use std::collections::VecDeque;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liotkit::container::{container_len, read_container, write_container};
use liotkit::datasets::{builtin_spec, dilate, prepare, write_prepared};
use liotkit::io::{save_color, save_mask};
use liotkit::metrics::{auc_from_scores, connected_components, connectivity, Connectivity};
use liotkit::perturb::{apply_lut, random_image_on, random_strict_lut_on, LevelSet};
use liotkit::{
    census_transform, liot_transform, liot_transform_naive, liot_transform_with, BinaryMask, ColorImage, Execution,
    GrayImage, Side,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_palette_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    let k = rng.random_range(1..=128usize);
    let levels = LevelSet::from_levels((0..k).map(|_| rng.random::<u8>()));
    random_image_on(&levels, w, h, rng).unwrap()
}

/// 100 images from 1x1 up to 128x128, 10 strict LUTs each.
fn invariance_suite(transform_differs: impl Fn(&GrayImage, &GrayImage) -> bool) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x11_07);
    let (mut failures, mut nontrivial) = (0, 0);
    for i in 0..100usize {
        let (w, h) = match i {
            0 => (1, 1),
            99 => (128, 128),
            _ => (rng.random_range(1..=128), rng.random_range(1..=128)),
        };
        let img = random_palette_image(&mut rng, w, h);
        let levels = LevelSet::of(&img);
        for t in 0..10u64 {
            let lut = random_strict_lut_on(&levels, (i as u64) << 8 | t);
            assert!(lut.is_strict_on(&levels));
            let remapped = apply_lut(&img, &lut);
            if remapped != img {
                nontrivial += 1;
            }
            if transform_differs(&img, &remapped) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    if failures == 0 && elapsed < Duration::from_secs(60) && nontrivial >= 900 {
        Ok(format!("1000 trials, {nontrivial} changed the image, 0 failures, {elapsed:.2?}"))
    } else {
        Err(format!("{failures} failures, {nontrivial} non-trivial trials, {elapsed:.2?}"))
    }
}

fn monotone_invariance() -> Outcome {
    invariance_suite(|a, b| liot_transform(a) != liot_transform(b))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let mut sizes: Vec<(usize, usize)> = (1..=10).flat_map(|w| (1..=10).map(move |h| (w, h))).collect();
    while sizes.len() < 200 {
        sizes.push((rng.random_range(1..=80), rng.random_range(1..=80)));
    }
    let mut mismatched = 0usize;
    for (i, &(w, h)) in sizes.iter().enumerate() {
        let img = if i % 3 == 0 {
            random_palette_image(&mut rng, w, h)
        } else {
            GrayImage::from_fn(w, h, |_, _| rng.random()).unwrap()
        };
        let naive = liot_transform_naive(&img);
        for fast in [liot_transform(&img), liot_transform_with(&img, Execution::Sequential)] {
            for (p, q) in fast.planes().iter().zip(naive.planes()) {
                mismatched += p.iter().zip(q).filter(|(a, b)| a != b).count();
            }
        }
    }
    if mismatched == 0 {
        Ok(format!("{} images, 0 mismatched bytes", sizes.len()))
    } else {
        Err(format!("{mismatched} mismatched bytes"))
    }
}

fn hand_example() -> Outcome {
    let out = liot_transform(&GrayImage::new(3, 1, vec![5, 3, 9]).unwrap());
    let got = [out.plane(Side::Left), out.plane(Side::Right), out.plane(Side::Top), out.plane(Side::Bottom)];
    let want: [&[u8]; 4] = [&[0, 0, 3], &[1, 0, 0], &[0, 0, 0], &[0, 0, 0]];
    if got == want {
        Ok("l=[0,0,3] r=[1,0,0] t=b=[0,0,0]".into())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn census_conformance() -> Outcome {
    let code = census_transform(&GrayImage::new(3, 3, (1..=9).collect()).unwrap()).get(1, 1);
    if code != 15 {
        return Err(format!("center code {code}, expected 15"));
    }
    let inv = invariance_suite(|a, b| census_transform(a) != census_transform(b))?;
    Ok(format!("center code 15; {inv}"))
}

fn brute_auc(samples: &[(f64, bool)]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for &(p, _) in samples.iter().filter(|s| s.1) {
        for &(n, _) in samples.iter().filter(|s| !s.1) {
            pairs += 1.0;
            wins += if p > n {
                1.0
            } else if p == n {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / pairs
}

fn auc_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0C);
    let mut worst = 0.0f64;
    let mut maps = 0;
    while maps < 100 {
        let n = rng.random_range(2..=64usize);
        let quant = rng.random_range(2..=20u32);
        let samples: Vec<(f64, bool)> =
            (0..n).map(|_| (f64::from(rng.random_range(0..=quant)) / f64::from(quant), rng.random())).collect();
        let Ok(a) = auc_from_scores(&samples) else { continue };
        worst = worst.max((a - brute_auc(&samples)).abs());
        maps += 1;
    }
    let tied = auc_from_scores(&[(0.4, true), (0.4, false), (0.4, true), (0.4, false), (0.4, false)]).unwrap();
    let separated = auc_from_scores(&[(0.1, false), (0.2, false), (0.7, true), (0.9, true)]).unwrap();
    if worst <= 1e-12 && tied == 0.5 && separated == 1.0 {
        Ok(format!("100 maps, max |rank - brute| = {worst:e}; tied 0.5, separated 1.0"))
    } else {
        Err(format!("max error {worst:e}, tied {tied}, separated {separated}"))
    }
}

fn mask_from(w: usize, h: usize, fg: impl Fn(usize, usize) -> bool) -> BinaryMask {
    BinaryMask::new(w, h, (0..w * h).map(|i| fg(i % w, i / w)).collect()).unwrap()
}

fn connectivity_formula() -> Outcome {
    let gt = mask_from(60, 10, |x, y| (y == 2 || y == 7) && x < 50);
    if gt.count() != 100 || connected_components(&gt, Connectivity::Eight).count != 2 {
        return Err("fixture is not 100 pixels in 2 components".into());
    }
    let same = connectivity(&gt, &gt, Connectivity::Eight).map_err(|e| e.to_string())?;
    let five = mask_from(60, 10, |x, y| y == 4 && x % 10 == 0 && x < 50);
    let frag = connectivity(&five, &gt, Connectivity::Eight).map_err(|e| e.to_string())?;
    let small_gt = mask_from(10, 3, |x, y| y == 1 && x < 3);
    let clamped = connectivity(&five_in(10, 3), &small_gt, Connectivity::Eight).map_err(|e| e.to_string())?;
    if same == 1.0 && (frag - 0.97).abs() <= 1e-12 && clamped == 0.0 {
        Ok(format!("identity 1.0, 2-vs-5 over 100 px {frag}, clamped 0.0"))
    } else {
        Err(format!("identity {same}, 2-vs-5 {frag}, clamped {clamped}"))
    }
}

fn five_in(w: usize, h: usize) -> BinaryMask {
    mask_from(w, h, |x, y| y == 0 && x % 2 == 0)
}

fn flood_fill_count(mask: &BinaryMask, eight: bool) -> (u32, Vec<u32>) {
    let (w, h) = mask.dimensions();
    let mut labels = vec![0u32; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if !mask.data()[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if mask.data()[j] && labels[j] == 0 {
                        labels[j] = count;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    (count, labels)
}

fn components_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCC);
    for m in 0..100 {
        let density = rng.random_range(0.1..0.7);
        let mask = BinaryMask::new(32, 32, (0..1024).map(|_| rng.random_bool(density)).collect()).unwrap();
        for (conn, eight) in [(Connectivity::Four, false), (Connectivity::Eight, true)] {
            let labels = connected_components(&mask, conn);
            let (count, oracle) = flood_fill_count(&mask, eight);
            // both number components in raster order of first pixel
            if labels.count != count || labels.labels != oracle {
                return Err(format!("mask {m}: {} vs flood fill {count} ({conn:?})", labels.count));
            }
        }
    }
    Ok("100 masks, 4- and 8-connectivity agree with flood fill".into())
}

fn synthetic_dataset(root: &Path, n: usize, size: (usize, usize), centerline: bool) {
    std::fs::create_dir_all(root.join("images")).unwrap();
    std::fs::create_dir_all(root.join("gt")).unwrap();
    let (w, h) = size;
    for i in 0..n {
        let data = (0..w * h * 3).map(|k| ((k * 31 + i * 7) % 251) as u8).collect();
        save_color(root.join("images").join(format!("{i:02}.png")), &ColorImage::new(w, h, data).unwrap()).unwrap();
        let gt = if centerline {
            mask_from(w, h, |x, y| x == 400 && y == 300)
        } else {
            mask_from(w, h, |x, y| (x + i) % 17 == 0 || y == h / 2)
        };
        save_mask(root.join("gt").join(format!("{i:02}.png")), &gt).unwrap();
    }
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn preprocessing_exactness() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut notes = Vec::new();
    for (name, src, want, centerline) in [
        ("stare", (700, 605), (554, 479), false),
        ("chasedb1", (999, 960), (584, 561), false),
        ("cracktree", (800, 600), (512, 512), true),
    ] {
        let root = tmp.path().join(name);
        synthetic_dataset(&root, 2, src, centerline);
        let spec = builtin_spec(name, &root).map_err(|e| e.to_string())?;
        let samples = prepare(&spec).map_err(|e| e.to_string())?;
        for s in &samples {
            if s.image.dimensions() != want || s.gt.dimensions() != want {
                return Err(format!("{name}: {} is {:?}", s.id, s.image.dimensions()));
            }
        }
        if centerline {
            let n = samples[0].gt.count();
            if n != 49 || spec.gt_dilation_radius != 4 {
                return Err(format!("cracktree: single centerline pixel dilated to {n} pixels"));
            }
        }
        let (a, b) = (tmp.path().join(format!("{name}-a")), tmp.path().join(format!("{name}-b")));
        write_prepared(&samples, spec.name, &a).map_err(|e| e.to_string())?;
        write_prepared(&prepare(&spec).map_err(|e| e.to_string())?, spec.name, &b).map_err(|e| e.to_string())?;
        let first = dir_bytes(&a);
        write_prepared(&samples, spec.name, &a).map_err(|e| e.to_string())?;
        if first != dir_bytes(&b) || first != dir_bytes(&a) {
            return Err(format!("{name}: reruns differ"));
        }
        notes.push(format!("{name} {}x{}", want.0, want.1));
    }
    let single = mask_from(21, 21, |x, y| x == 10 && y == 10);
    if dilate(&single, 4).count() != 49 {
        return Err("radius-4 disk is not 49 pixels".into());
    }
    Ok(format!("{}; radius-4 disk = 49 px; reruns byte-identical", notes.join(", ")))
}

fn container_roundtrip() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0);
    for i in 0..50 {
        let (w, h) = (rng.random_range(1..=90), rng.random_range(1..=90));
        let img = GrayImage::from_fn(w, h, |_, _| rng.random()).unwrap();
        let t = liot_transform(&img);
        let path = tmp.path().join(format!("{i}.liot"));
        write_container(&path, &t).map_err(|e| e.to_string())?;
        let size = std::fs::metadata(&path).unwrap().len() as usize;
        if size != container_len(w, h) || size != 13 + 4 * w * h {
            return Err(format!("{w}x{h}: file is {size} bytes"));
        }
        if read_container(&path).map_err(|e| e.to_string())? != t {
            return Err(format!("{w}x{h}: round trip differs"));
        }
    }
    Ok("50 images, byte-identical, size 13 + 4WH".into())
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD21E);
    let img = GrayImage::from_fn(565, 584, |_, _| rng.random()).unwrap();
    let time = |f: &dyn Fn() -> liotkit::LiotImage, n: usize| {
        median(
            (0..n)
                .map(|_| {
                    let t = Instant::now();
                    std::hint::black_box(f());
                    t.elapsed()
                })
                .collect(),
        )
    };
    let fast = time(&|| liot_transform_with(&img, Execution::Sequential), 7);
    let naive = time(&|| liot_transform_naive(&img), 3);
    if fast < Duration::from_millis(50) && fast <= naive {
        Ok(format!("565x584 single-threaded {fast:.2?} (naive {naive:.2?})"))
    } else {
        Err(format!("fast {fast:.2?}, naive {naive:.2?}; limit 50ms and fast <= naive"))
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("monotone invariance", monotone_invariance),
        ("oracle equivalence", oracle_equivalence),
        ("hand example", hand_example),
        ("census conformance", census_conformance),
        ("auc oracle", auc_oracle),
        ("connectivity formula", connectivity_formula),
        ("connected components", components_oracle),
        ("preprocessing exactness", preprocessing_exactness),
        ("container round-trip", container_roundtrip),
        ("performance", performance),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
