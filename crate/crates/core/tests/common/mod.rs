//! Brute-force reference implementations, written straight from the formulas
//! with no shared code paths, plus random instance generators.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Anchor = (f64, f64);

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

/// Row-major cell centers, top row first.
pub fn centers(h: usize, w: usize) -> Vec<Anchor> {
    let mut out = Vec::with_capacity(h * w);
    for i in 0..h {
        for j in 0..w {
            let v = -1.0 + (2 * j + 1) as f64 / w as f64;
            let a = 1.0 - (2 * i + 1) as f64 / h as f64;
            out.push((v, a));
        }
    }
    out
}

fn dist(p: Anchor, q: Anchor) -> f64 {
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

pub fn ces_to_ces(p: &[f64], src: &[Anchor], dst: &[Anchor], eps: f64) -> Vec<f64> {
    let q = dst
        .iter()
        .map(|&d| {
            let mut s = 0.0;
            for (j, &c) in src.iter().enumerate() {
                s += p[j] / (dist(d, c) + eps);
            }
            s
        })
        .collect();
    normalize(q)
}

pub fn des_to_ces(x: Anchor, anchors: &[Anchor], k: f64) -> Vec<f64> {
    // log-sum-exp with its own shift
    let logits: Vec<f64> = anchors.iter().map(|&c| -k * dist(x, c).powi(2)).collect();
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    normalize(logits.iter().map(|l| (l - m).exp()).collect())
}

pub fn gaussian_mixture(
    h: usize,
    w: usize,
    means: &[Anchor],
    weights: &[f64],
    sigma: f64,
) -> Vec<f64> {
    let z = centers(h, w)
        .into_iter()
        .map(|x| {
            let mut s = 0.0;
            for (m, wt) in means.iter().zip(weights) {
                let r = dist(x, *m);
                s += wt * (-(r * r) / (2.0 * sigma * sigma)).exp();
            }
            s
        })
        .collect();
    normalize(z)
}

/// Weighted Gaussian KDE with full covariance; the quadratic form is obtained
/// by solving `C y = d` with Cramer's rule.
pub fn kde(h: usize, w: usize, pts: &[Anchor], wts: &[f64], cov: [[f64; 2]; 2]) -> Vec<f64> {
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    let z = centers(h, w)
        .into_iter()
        .map(|x| {
            let mut s = 0.0;
            for (p, wt) in pts.iter().zip(wts) {
                let d = [x.0 - p.0, x.1 - p.1];
                let y0 = (d[0] * cov[1][1] - cov[0][1] * d[1]) / det;
                let y1 = (cov[0][0] * d[1] - cov[1][0] * d[0]) / det;
                s += wt * (-0.5 * (d[0] * y0 + d[1] * y1)).exp();
            }
            s
        })
        .collect();
    normalize(z)
}

/// Scott's rule on a weighted cloud: Kish n_eff, reliability-weighted covariance.
pub fn scott_cov(pts: &[Anchor], wts: &[f64]) -> Option<[[f64; 2]; 2]> {
    let total: f64 = wts.iter().sum();
    let w: Vec<f64> = wts.iter().map(|x| x / total).collect();
    let mv: f64 = pts.iter().zip(&w).map(|(p, w)| w * p.0).sum();
    let ma: f64 = pts.iter().zip(&w).map(|(p, w)| w * p.1).sum();
    let s2: f64 = w.iter().map(|x| x * x).sum();
    let n_eff = 1.0 / s2;
    let mut c = [[0.0; 2]; 2];
    for (p, wt) in pts.iter().zip(&w) {
        let d = [p.0 - mv, p.1 - ma];
        for r in 0..2 {
            for s in 0..2 {
                c[r][s] += wt * d[r] * d[s] / (1.0 - s2);
            }
        }
    }
    let tr = c[0][0] + c[1][1];
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let min_eig = tr / 2.0 - (tr * tr / 4.0 - det).max(0.0).sqrt();
    if n_eff < 2.0 || min_eig <= 1e-12 {
        return None;
    }
    let f = n_eff.powf(-1.0 / 3.0);
    Some([[f * c[0][0], f * c[0][1]], [f * c[1][0], f * c[1][1]]])
}

/// Naive O(n^2) Kendall tau-b over all pairs.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut con, mut dis, mut tx, mut ty) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let a = if x[i] == x[j] {
                0.0
            } else {
                (x[i] - x[j]).signum()
            };
            let b = if y[i] == y[j] {
                0.0
            } else {
                (y[i] - y[j]).signum()
            };
            if a == 0.0 && b == 0.0 {
                continue;
            } else if a == 0.0 {
                tx += 1.0;
            } else if b == 0.0 {
                ty += 1.0;
            } else if a == b {
                con += 1.0;
            } else {
                dis += 1.0;
            }
        }
    }
    (con - dis) / ((con + dis + tx) * (con + dis + ty)).sqrt()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Macro F1 over `classes`, from a confusion matrix.
pub fn macro_f1(pred: &[usize], gt: &[usize], classes: usize) -> f64 {
    let mut m = vec![vec![0usize; classes]; classes];
    for (&p, &g) in pred.iter().zip(gt) {
        m[g][p] += 1;
    }
    let mut total = 0.0;
    for (c, row) in m.iter().enumerate() {
        let tp = row[c] as f64;
        let predicted: usize = m.iter().map(|r| r[c]).sum();
        let actual: usize = row.iter().sum();
        let precision = if predicted == 0 {
            0.0
        } else {
            tp / predicted as f64
        };
        let recall = if actual == 0 { 0.0 } else { tp / actual as f64 };
        if precision + recall > 0.0 {
            total += 2.0 * precision * recall / (precision + recall);
        }
    }
    total / classes as f64
}

pub fn rmse(pred: &[Anchor], gt: &[Anchor]) -> f64 {
    let mut s = 0.0;
    for (p, g) in pred.iter().zip(gt) {
        s += (p.0 - g.0).powi(2) + (p.1 - g.1).powi(2);
    }
    (s / (2 * pred.len()) as f64).sqrt()
}

pub fn kl(target: &[f64], pred: &[f64]) -> f64 {
    let eps = 1e-12;
    let mut s = 0.0;
    for (t, p) in target.iter().zip(pred) {
        if *t > 0.0 {
            s += t * ((t + eps) / (p + eps)).ln();
        }
    }
    s
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

// ---- generators ----

pub fn point(rng: &mut ChaCha8Rng) -> Anchor {
    (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// `n` anchors, pairwise at least `min_gap` apart.
pub fn anchors(rng: &mut ChaCha8Rng, n: usize, min_gap: f64) -> Vec<Anchor> {
    let mut out: Vec<Anchor> = Vec::with_capacity(n);
    while out.len() < n {
        let p = point(rng);
        if out.iter().all(|&q| dist(p, q) >= min_gap) {
            out.push(p);
        }
    }
    out
}

pub fn distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    0.0
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        if w.iter().sum::<f64>() > 0.0 {
            return normalize(w);
        }
    }
}

/// Symmetric positive definite 2x2 matrix with eigenvalues in `[lo, hi]`.
pub fn spd(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> [[f64; 2]; 2] {
    let l1 = rng.gen_range(lo..hi);
    let l2 = rng.gen_range(lo..hi);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (c, s) = (t.cos(), t.sin());
    [
        [l1 * c * c + l2 * s * s, (l1 - l2) * c * s],
        [(l1 - l2) * c * s, l1 * s * s + l2 * c * c],
    ]
}

// ---- library adapters ----

use std::sync::Arc;

use ddes_core::aggregate::{self as agg, Bandwidth, WeightedPointCloud};
use ddes_core::convert::{self as lib, ConversionParams, Sigma};
use ddes_core::{CategoricalState, EmotionSet, GridGeometry, VAPoint};

pub fn va(p: Anchor) -> VAPoint {
    VAPoint::new(p.0, p.1).unwrap()
}

pub fn set_of(name: &str, anchors: &[Anchor]) -> Arc<EmotionSet> {
    let triples: Vec<(String, f64, f64)> = anchors
        .iter()
        .enumerate()
        .map(|(i, &(v, a))| (format!("e{i}"), v, a))
        .collect();
    Arc::new(EmotionSet::from_triples(name, &triples).unwrap())
}

/// Worst absolute deviation per conversion over `instances` random cases.
#[derive(Debug, Default, Clone, Copy)]
pub struct OracleReport {
    pub ces_to_ces: f64,
    pub ces_to_ddes: f64,
    pub des_to_ddes: f64,
    pub des_to_ces: f64,
    pub kde_to_grid: f64,
}

impl OracleReport {
    pub fn worst(&self) -> f64 {
        [
            self.ces_to_ces,
            self.ces_to_ddes,
            self.des_to_ddes,
            self.des_to_ces,
            self.kde_to_grid,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn conversion_oracle_suite(rng: &mut ChaCha8Rng, instances: usize) -> OracleReport {
    let mut r = OracleReport::default();
    for _ in 0..instances {
        let n = rng.gen_range(1..=20);
        let m = rng.gen_range(1..=20);
        let (h, w) = (rng.gen_range(2..=8), rng.gen_range(2..=8));
        let geo = GridGeometry::new(h, w).unwrap();
        let src = anchors(rng, n, 0.0);
        let dst = anchors(rng, m, 0.0);
        let p = distribution(rng, n);
        let state = CategoricalState::from_weights(set_of("src", &src), &p).unwrap();
        let sigma = rng.gen_range(0.08..1.0);
        let eps = 10f64.powf(rng.gen_range(-9.0..-3.0));
        let k = 10f64.powf(rng.gen_range(-1.0..2.0));
        let fixed = ConversionParams {
            sigma: Sigma::Fixed(sigma),
            epsilon_dist: eps,
            sharpness_k: k,
            ..Default::default()
        };

        let got = lib::ces_to_ces(&state, set_of("dst", &dst), &fixed).unwrap();
        r.ces_to_ces = r
            .ces_to_ces
            .max(max_abs_diff(got.probs(), &ces_to_ces(&p, &src, &dst, eps)));

        let got = lib::ces_to_ddes(&state, geo, &fixed).unwrap();
        let want = gaussian_mixture(h, w, &src, &p, sigma);
        r.ces_to_ddes = r.ces_to_ddes.max(max_abs_diff(got.values(), &want));
        let auto = ConversionParams::default();
        let got = lib::ces_to_ddes(&state, geo, &auto).unwrap();
        let cov = scott_cov(&src, &p).unwrap_or([[0.01, 0.0], [0.0, 0.01]]);
        r.ces_to_ddes = r
            .ces_to_ddes
            .max(max_abs_diff(got.values(), &kde(h, w, &src, &p, cov)));

        let x = point(rng);
        let got = lib::des_to_ddes(&va(x), geo, &fixed).unwrap();
        let want = gaussian_mixture(h, w, &[x], &[1.0], sigma);
        r.des_to_ddes = r.des_to_ddes.max(max_abs_diff(got.values(), &want));

        let got = lib::des_to_ces(&va(x), set_of("dst", &dst), &fixed).unwrap();
        r.des_to_ces = r
            .des_to_ces
            .max(max_abs_diff(got.probs(), &des_to_ces(x, &dst, k)));

        let cloud_n = rng.gen_range(1..=30);
        let pts = anchors(rng, cloud_n, 0.0);
        let wts: Vec<f64> = (0..cloud_n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let cloud =
            WeightedPointCloud::from_weights(pts.iter().map(|&q| va(q)).collect(), &wts).unwrap();
        let cov = spd(rng, 0.002, 0.5);
        let got = agg::kde_to_grid(&cloud, geo, &Bandwidth::new(cov).unwrap()).unwrap();
        r.kde_to_grid = r
            .kde_to_grid
            .max(max_abs_diff(got.values(), &kde(h, w, &pts, &wts, cov)));
        let scott = agg::scott_bandwidth(&cloud).unwrap();
        let want = scott_cov(&pts, &wts).unwrap_or([[0.01, 0.0], [0.0, 0.01]]);
        let got = scott.cov();
        let diff = max_abs_diff(
            &[got[0][0], got[0][1], got[1][1]],
            &[want[0][0], want[0][1], want[1][1]],
        );
        r.kde_to_grid = r.kde_to_grid.max(diff);
    }
    r
}

// ---- property suites ----

use ddes_core::metrics;
use ddes_core::{make_categorical, make_grid, DensityGrid};

/// Round-trip error for each point of a 9x9 lattice over `[-0.8, 0.8]^2`.
pub fn lattice_round_trip(size: usize, sigma: f64, tau: f64) -> Vec<f64> {
    let geo = GridGeometry::square(size).unwrap();
    let params = ConversionParams {
        sigma: Sigma::Fixed(sigma),
        temperature_tau: tau,
        ..Default::default()
    };
    let mut errs = Vec::with_capacity(81);
    for i in 0..9 {
        for j in 0..9 {
            let p = (-0.8 + 0.2 * i as f64, -0.8 + 0.2 * j as f64);
            let grid = lib::des_to_ddes(&va(p), geo, &params).unwrap();
            let back = lib::ddes_to_des(&grid, &params).unwrap();
            errs.push(dist(p, (back.valence(), back.arousal())));
        }
    }
    errs
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Max |q - p| when resampling onto the identical set.
pub fn near_identity(rng: &mut ChaCha8Rng, n: usize, cases: usize, eps: f64) -> f64 {
    let params = ConversionParams {
        epsilon_dist: eps,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let a = anchors(rng, n, 0.1);
        let set = set_of("same", &a);
        let p = distribution(rng, n);
        let state = CategoricalState::from_weights(set.clone(), &p).unwrap();
        let q = lib::ces_to_ces(&state, set, &params).unwrap();
        worst = worst.max(max_abs_diff(q.probs(), &p));
    }
    worst
}

fn first_max(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Counts of `(des_to_ces argmax != nearest anchor, sharpen moved the argmax)`.
pub fn argmax_violations(rng: &mut ChaCha8Rng, cases: usize) -> (usize, usize) {
    let mut des_bad = 0;
    for _ in 0..cases {
        let n = rng.gen_range(2..=20);
        let a = anchors(rng, n, 0.0);
        let x = point(rng);
        let d2: Vec<f64> = a.iter().map(|&c| -dist(x, c)).collect();
        let nearest = first_max(&d2);
        for k in [0.1, 1.0, 10.0, 100.0] {
            let params = ConversionParams {
                sharpness_k: k,
                ..Default::default()
            };
            let q = lib::des_to_ces(&va(x), set_of("s", &a), &params).unwrap();
            if q.argmax() != nearest {
                des_bad += 1;
            }
        }
    }
    let mut sharpen_bad = 0;
    for c in 0..cases {
        let (h, w) = (rng.gen_range(2..=28), rng.gen_range(2..=28));
        let geo = GridGeometry::new(h, w).unwrap();
        let grid = if c % 2 == 0 {
            let raw: Vec<f64> = (0..h * w).map(|_| rng.gen::<f64>()).collect();
            make_grid(geo, raw).unwrap()
        } else {
            let n = rng.gen_range(1..=5);
            let params = ConversionParams {
                sigma: Sigma::Fixed(rng.gen_range(0.1..0.6)),
                ..Default::default()
            };
            let state = CategoricalState::from_weights(
                set_of("m", &anchors(rng, n, 0.0)),
                &distribution(rng, n),
            )
            .unwrap();
            lib::ces_to_ddes(&state, geo, &params).unwrap()
        };
        let tau = rng.gen_range(0.01..=1.0);
        let params = ConversionParams {
            temperature_tau: tau,
            ..Default::default()
        };
        let sharp = lib::sharpen_grid(&grid, &params).unwrap();
        if sharp.argmax() != grid.argmax() {
            sharpen_bad += 1;
        }
    }
    (des_bad, sharpen_bad)
}

/// Runs `calls` random operations; returns the worst `|mass - 1|` and the
/// smallest entry seen across every produced distribution.
pub fn normalization_fuzz(rng: &mut ChaCha8Rng, calls: usize) -> (f64, f64) {
    let mut worst_mass: f64 = 0.0;
    let mut min_entry = f64::INFINITY;
    let mut check = |xs: &[f64]| {
        let s: f64 = xs.iter().sum();
        worst_mass = worst_mass.max((s - 1.0).abs());
        min_entry = xs.iter().cloned().fold(min_entry, f64::min);
    };
    for call in 0..calls {
        let (h, w) = (rng.gen_range(2..=32), rng.gen_range(2..=32));
        let geo = GridGeometry::new(h, w).unwrap();
        let n = rng.gen_range(1..=20);
        let a = anchors(rng, n, 0.0);
        let set = set_of("f", &a);
        let p = distribution(rng, n);
        let params = ConversionParams {
            sigma: if rng.gen_bool(0.5) {
                Sigma::Auto
            } else {
                Sigma::Fixed(rng.gen_range(0.05..1.0))
            },
            sharpness_k: 10f64.powf(rng.gen_range(-2.0..3.0)),
            epsilon_dist: 10f64.powf(rng.gen_range(-9.0..-2.0)),
            temperature_tau: rng.gen_range(0.01..=1.0),
            ..Default::default()
        };
        let state = make_categorical(set.clone(), &p).unwrap();
        let x = va(point(rng));
        match call % 9 {
            0 => check(state.probs()),
            1 => {
                let m = rng.gen_range(1..=20);
                check(
                    lib::ces_to_ces(&state, set_of("g", &anchors(rng, m, 0.0)), &params)
                        .unwrap()
                        .probs(),
                )
            }
            2 => check(lib::ces_to_ddes(&state, geo, &params).unwrap().values()),
            3 => check(lib::des_to_ces(&x, set, &params).unwrap().probs()),
            4 => check(lib::des_to_ddes(&x, geo, &params).unwrap().values()),
            5 => {
                let g = lib::des_to_ddes(&x, geo, &params).unwrap();
                check(lib::ddes_to_ces(&g, set).unwrap().probs())
            }
            6 => {
                let raw: Vec<f64> = (0..h * w).map(|_| rng.gen::<f64>().powi(4)).collect();
                let g = make_grid(geo, raw).unwrap();
                check(g.values());
                check(lib::sharpen_grid(&g, &params).unwrap().values())
            }
            7 => {
                let cloud =
                    WeightedPointCloud::from_weights(a.iter().map(|&q| va(q)).collect(), &p)
                        .unwrap();
                let bw = agg::scott_bandwidth(&cloud).unwrap();
                check(agg::kde_to_grid(&cloud, geo, &bw).unwrap().values())
            }
            _ => {
                let g = DensityGrid::uniform(geo);
                check(
                    ddes_core::analysis::project_to_wheel(&g, set)
                        .unwrap()
                        .probs(),
                )
            }
        }
    }
    (worst_mass, min_entry)
}

/// Worst deviation of the metric functions from the naive references.
pub fn metric_oracles(rng: &mut ChaCha8Rng, cases: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let n = rng.gen_range(2..=20);
        // coarse values force ties
        let levels = rng.gen_range(2..=6) as f64;
        let x: Vec<f64> = (0..n)
            .map(|_| (rng.gen::<f64>() * levels).floor())
            .collect();
        let y: Vec<f64> = (0..n)
            .map(|_| (rng.gen::<f64>() * levels).floor())
            .collect();
        let want = kendall_tau_b(&x, &y);
        match metrics::kendall_tau_b(&x, &y) {
            Ok(got) => worst = worst.max((got - want).abs()),
            Err(_) => assert!(want.is_nan(), "library refused a defined tau-b"),
        }
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        worst = worst.max((metrics::kendall_tau_b(&x, &y).unwrap() - kendall_tau_b(&x, &y)).abs());
        worst = worst.max((metrics::pearson_r(&x, &y).unwrap() - pearson(&x, &y)).abs());

        let classes = rng.gen_range(2..=8);
        let set = set_of("c", &anchors(rng, classes, 0.0));
        let draw = |rng: &mut ChaCha8Rng| {
            (0..n)
                .map(|_| make_categorical(set.clone(), &distribution(rng, classes)).unwrap())
                .collect::<Vec<_>>()
        };
        let (pred, gt) = (draw(rng), draw(rng));
        let pi: Vec<usize> = pred.iter().map(|s| first_max(s.probs())).collect();
        let gi: Vec<usize> = gt.iter().map(|s| first_max(s.probs())).collect();
        worst =
            worst.max((metrics::macro_f1(&pred, &gt).unwrap() - macro_f1(&pi, &gi, classes)).abs());

        let pp: Vec<Anchor> = (0..n).map(|_| point(rng)).collect();
        let gp: Vec<Anchor> = (0..n).map(|_| point(rng)).collect();
        let got = metrics::rmse(
            &pp.iter().map(|&q| va(q)).collect::<Vec<_>>(),
            &gp.iter().map(|&q| va(q)).collect::<Vec<_>>(),
        )
        .unwrap();
        worst = worst.max((got - rmse(&pp, &gp)).abs());

        let t = distribution(rng, n);
        let q = distribution(rng, n);
        worst = worst.max((metrics::kl_divergence(&t, &q).unwrap() - kl(&t, &q)).abs());
    }
    worst
}
