use crate::error::{Error, Result};
use crate::image::{ensure_same_dims, BinaryMask};

/// Pixel adjacency used for component labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Connectivity {
    Four,
    /// Diagonal neighbours are connected, so thin diagonal strokes stay whole.
    #[default]
    Eight,
}

impl std::str::FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "4" => Ok(Connectivity::Four),
            "8" => Ok(Connectivity::Eight),
            other => Err(Error::Config(format!("connectivity must be 4 or 8, got `{other}`"))),
        }
    }
}

/// Component labels: 0 for background, `1..=count` for foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub count: u32,
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Two-pass labelling with union-find. Labels are numbered in raster order of
/// each component's first pixel.
pub fn connected_components(mask: &BinaryMask, connectivity: Connectivity) -> Labels {
    let (w, h) = mask.dimensions();
    let data = mask.data();
    let mut provisional = vec![0u32; w * h];
    // provisional label 0 is reserved for background
    let mut sets = DisjointSet { parent: vec![0] };

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !data[i] {
                continue;
            }
            let mut neighbours = [0u32; 4];
            let mut n = 0;
            let mut push = |l: u32| {
                if l != 0 {
                    neighbours[n] = l;
                    n += 1;
                }
            };
            if x > 0 {
                push(provisional[i - 1]);
            }
            if y > 0 {
                push(provisional[i - w]);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        push(provisional[i - w - 1]);
                    }
                    if x + 1 < w {
                        push(provisional[i - w + 1]);
                    }
                }
            }
            let label = match neighbours[..n].iter().min() {
                None => sets.make(),
                Some(&min) => {
                    for &l in &neighbours[..n] {
                        sets.union(min, l);
                    }
                    min
                }
            };
            provisional[i] = label;
        }
    }

    let mut compact = vec![0u32; sets.parent.len()];
    let mut count = 0u32;
    let labels = provisional
        .iter()
        .map(|&l| {
            if l == 0 {
                return 0;
            }
            let root = sets.find(l) as usize;
            if compact[root] == 0 {
                count += 1;
                compact[root] = count;
            }
            compact[root]
        })
        .collect();
    Labels { width: w, height: h, labels, count }
}

/// `1 - min(1, |components(gt) - components(pred)| / foreground(gt))`.
pub fn connectivity_from_counts(gt_components: u64, pred_components: u64, gt_pixels: u64) -> Result<f64> {
    if gt_pixels == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let diff = gt_components.abs_diff(pred_components) as f64;
    Ok(1.0 - (diff / gt_pixels as f64).min(1.0))
}

/// Fragmentation score of a segmentation relative to its ground truth.
pub fn connectivity(pred: &BinaryMask, gt: &BinaryMask, adjacency: Connectivity) -> Result<f64> {
    ensure_same_dims(pred.dimensions(), gt.dimensions())?;
    let gt_pixels = gt.count() as u64;
    if gt_pixels == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    let cg = connected_components(gt, adjacency).count;
    let cp = connected_components(pred, adjacency).count;
    connectivity_from_counts(u64::from(cg), u64::from(cp), gt_pixels)
}
