//! Coherence-enhancing anisotropic diffusion, `∂t I = div(D ∇I)`.
//!
//! The diffusion tensor `D` is rebuilt from the structure tensor of the
//! evolving image at every step: it keeps a small diffusivity `alpha` across
//! ridges and opens up towards 1 along them as local coherence grows.
//!
//! The divergence is discretised with a nonnegative scheme. At each pixel the
//! tensor is split, using Selling's obtuse superbase reduction, into three
//! rank-one terms along integer lattice offsets with nonnegative weights.
//! Every offset turns into a symmetric pairwise exchange between two pixels,
//! so the explicit step is conservative and, when the per-pixel outflow stays
//! below one, a convex combination of neighbouring values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{gaussian_blur, reflect};
use crate::imaging::GrayImage;

/// Symmetric 2×2 tensor `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tensor2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Tensor2 {
    pub const IDENTITY: Tensor2 = Tensor2 {
        a: 1.0,
        b: 0.0,
        c: 1.0,
    };

    /// Eigenvalues `(μ1, μ2)` with `μ1 ≥ μ2`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.a + self.c);
        let half_gap = (0.25 * (self.a - self.c).powi(2) + self.b * self.b).sqrt();
        (mean + half_gap, mean - half_gap)
    }

    /// Unit eigenvector of the larger eigenvalue.
    pub fn dominant_eigenvector(&self) -> (f64, f64) {
        let (mu1, _) = self.eigenvalues();
        let (x, y) = if self.b.abs() > 1e-300 {
            (self.b, mu1 - self.a)
        } else if self.a >= self.c {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let n = x.hypot(y);
        (x / n, y / n)
    }

    #[inline]
    fn quad(&self, u: (i64, i64), v: (i64, i64)) -> f64 {
        let (ux, uy) = (u.0 as f64, u.1 as f64);
        let (vx, vy) = (v.0 as f64, v.1 as f64);
        self.a * ux * vx + self.b * (ux * vy + uy * vx) + self.c * uy * vy
    }

    fn is_psd(&self) -> bool {
        let scale = self.a.abs().max(self.c.abs()).max(1.0);
        let eps = 1e-12 * scale;
        self.a >= -eps && self.c >= -eps && self.a * self.c - self.b * self.b >= -eps * scale
    }
}

/// Per-pixel symmetric tensors on an image grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    width: usize,
    height: usize,
    tensors: Vec<Tensor2>,
}

impl TensorField {
    pub fn new(width: usize, height: usize, tensors: Vec<Tensor2>) -> Result<Self> {
        if tensors.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} tensors for a {width}x{height} grid",
                tensors.len()
            )));
        }
        Ok(TensorField {
            width,
            height,
            tensors,
        })
    }

    pub fn uniform(width: usize, height: usize, t: Tensor2) -> Self {
        TensorField {
            width,
            height,
            tensors: vec![t; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Tensor2 {
        self.tensors[y * self.width + x]
    }

    pub fn tensors(&self) -> &[Tensor2] {
        &self.tensors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiffusionParams {
    /// Gradient pre-smoothing scale in pixels.
    pub sigma: f64,
    /// Structure-tensor integration scale in pixels.
    pub rho: f64,
    /// Diffusivity across ridges, in (0, 1).
    pub alpha: f64,
    /// Coherence threshold `C`, for intensities scaled to [0, 1].
    pub contrast: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        DiffusionParams {
            sigma: 0.5,
            rho: 4.0,
            alpha: 0.001,
            contrast: 1e-4,
            dt: 0.15,
            steps: 20,
        }
    }
}

/// Upper bound on `dt` for the explicit step.
pub const MAX_TIME_STEP: f64 = 0.25;

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be a finite value >= 0");
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return bad("rho must be a finite value >= 0");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.contrast > 0.0 && self.contrast.is_finite()) {
            return bad("contrast must be positive");
        }
        if !(self.dt > 0.0 && self.dt <= MAX_TIME_STEP) {
            return bad("dt must lie in (0, 0.25]");
        }
        Ok(())
    }
}

/// Central-difference gradients with mirrored borders.
fn gradients(data: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let (xi, yi) = (x as isize, y as isize);
            gx[y * w + x] =
                0.5 * (data[y * w + reflect(xi + 1, w)] - data[y * w + reflect(xi - 1, w)]);
            gy[y * w + x] =
                0.5 * (data[reflect(yi + 1, h) * w + x] - data[reflect(yi - 1, h) * w + x]);
        }
    }
    (gx, gy)
}

fn structure_tensor_raw(data: &[f64], w: usize, h: usize, sigma: f64, rho: f64) -> TensorField {
    let smoothed = gaussian_blur(data, w, h, sigma);
    let (gx, gy) = gradients(&smoothed, w, h);
    let xx: Vec<f64> = gx.iter().map(|g| g * g).collect();
    let xy: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a * b).collect();
    let yy: Vec<f64> = gy.iter().map(|g| g * g).collect();
    let (xx, xy, yy) = (
        gaussian_blur(&xx, w, h, rho),
        gaussian_blur(&xy, w, h, rho),
        gaussian_blur(&yy, w, h, rho),
    );
    let tensors = (0..w * h)
        .map(|i| Tensor2 {
            a: xx[i],
            b: xy[i],
            c: yy[i],
        })
        .collect();
    TensorField {
        width: w,
        height: h,
        tensors,
    }
}

/// `J_ρ = G_ρ * (∇I_σ ∇I_σᵀ)` in raw intensity units.
pub fn structure_tensor(img: &GrayImage, sigma: f64, rho: f64) -> TensorField {
    structure_tensor_raw(img.pixels(), img.width(), img.height(), sigma, rho)
}

/// Maps a structure tensor onto the coherence-enhancing diffusion tensor:
/// same eigenvectors, eigenvalue `alpha` across the dominant gradient and
/// `alpha + (1 - alpha) exp(-C / (μ1 - μ2)²)` along it.
pub fn diffusion_tensor(j: &TensorField, alpha: f64, contrast: f64) -> Result<TensorField> {
    let mut tensors = Vec::with_capacity(j.tensors.len());
    for (i, t) in j.tensors.iter().enumerate() {
        if !t.is_psd() {
            return Err(Error::NotPositiveSemiDefinite {
                x: i % j.width,
                y: i / j.width,
            });
        }
        tensors.push(coherence_tensor(t, alpha, contrast));
    }
    Ok(TensorField {
        width: j.width,
        height: j.height,
        tensors,
    })
}

fn coherence_tensor(t: &Tensor2, alpha: f64, contrast: f64) -> Tensor2 {
    let (mu1, mu2) = t.eigenvalues();
    let gap = mu1 - mu2;
    let lambda2 = if gap > 0.0 {
        alpha + (1.0 - alpha) * (-contrast / (gap * gap)).exp()
    } else {
        alpha
    };
    let lambda1 = alpha;
    let (vx, vy) = t.dominant_eigenvector();
    // D = λ1 v vᵀ + λ2 v⊥ v⊥ᵀ
    Tensor2 {
        a: lambda1 * vx * vx + lambda2 * vy * vy,
        b: (lambda1 - lambda2) * vx * vy,
        c: lambda1 * vy * vy + lambda2 * vx * vx,
    }
}

/// Selling decomposition `D = Σ w_k e_k e_kᵀ` with `w_k ≥ 0` and integer
/// offsets `e_k`.
pub fn selling_decomposition(d: &Tensor2) -> [(f64, (i64, i64)); 3] {
    let mut base = [(1i64, 0i64), (0, 1), (-1, -1)];
    // bounded: each reduction strictly shrinks the superbase energy
    for _ in 0..200 {
        let mut reduced = false;
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            if d.quad(base[i], base[j]) > 0.0 {
                let (ei, ej) = (base[i], base[j]);
                base[i] = (-ei.0, -ei.1);
                base[k] = (ei.0 - ej.0, ei.1 - ej.1);
                reduced = true;
                break;
            }
        }
        if !reduced {
            break;
        }
    }
    let perp = |e: (i64, i64)| (-e.1, e.0);
    [
        (-d.quad(base[0], base[1]).min(0.0), perp(base[2])),
        (-d.quad(base[0], base[2]).min(0.0), perp(base[1])),
        (-d.quad(base[1], base[2]).min(0.0), perp(base[0])),
    ]
}

/// Pairwise exchange weights: each pixel's decomposition contributes half of
/// every weight to the links towards `x ± e_k`. Links leaving the grid are
/// dropped, which is the no-flux boundary.
struct ExchangeGraph {
    links: Vec<(usize, usize, f64)>,
    outflow: Vec<f64>,
}

fn exchange_graph(d: &TensorField) -> ExchangeGraph {
    let (w, h) = (d.width as i64, d.height as i64);
    let mut links = Vec::with_capacity(d.tensors.len() * 6);
    let mut outflow = vec![0.0; d.tensors.len()];
    for y in 0..h {
        for x in 0..w {
            let p = (y * w + x) as usize;
            for (weight, (ex, ey)) in selling_decomposition(&d.tensors[p]) {
                if weight <= 0.0 {
                    continue;
                }
                for s in [1, -1] {
                    let (nx, ny) = (x + s * ex, y + s * ey);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let q = (ny * w + nx) as usize;
                    links.push((p, q, 0.5 * weight));
                    outflow[p] += 0.5 * weight;
                    outflow[q] += 0.5 * weight;
                }
            }
        }
    }
    ExchangeGraph { links, outflow }
}

fn explicit_step(data: &[f64], graph: &ExchangeGraph, dt: f64) -> Vec<f64> {
    let mut out = data.to_vec();
    for &(p, q, weight) in &graph.links {
        let flux = dt * weight * (data[q] - data[p]);
        out[p] += flux;
        out[q] -= flux;
    }
    out
}

/// Evolves raw values by `dt`, sub-stepping if the largest outflow would make
/// the explicit update non-convex.
fn evolve(data: &[f64], d: &TensorField, dt: f64) -> Vec<f64> {
    let graph = exchange_graph(d);
    let max_outflow = graph.outflow.iter().copied().fold(0.0, f64::max);
    let substeps = ((dt * max_outflow).ceil() as usize).max(1);
    let tau = dt / substeps as f64;
    let mut current = data.to_vec();
    for _ in 0..substeps {
        current = explicit_step(&current, &graph, tau);
    }
    current
}

/// One explicit step of `div(D ∇I)`.
pub fn diffuse_step(img: &GrayImage, d: &TensorField, dt: f64) -> Result<GrayImage> {
    if d.width != img.width() || d.height != img.height() {
        return Err(Error::DimensionMismatch(format!(
            "tensor field {}x{} vs image {}x{}",
            d.width,
            d.height,
            img.width(),
            img.height()
        )));
    }
    if !(dt > 0.0 && dt <= MAX_TIME_STEP) {
        return Err(Error::InvalidArgument(format!("time step {dt} outside (0, 0.25]")));
    }
    let out = evolve(img.pixels(), d, dt);
    Ok(GrayImage::from_clamped(img.width(), img.height(), out))
}

/// Runs `steps` rounds of structure tensor, diffusion tensor and explicit
/// step. The tensor is computed on intensities scaled to `[0, 1]` so that
/// `contrast` is independent of the 8-bit range.
pub fn enhance(img: &GrayImage, params: &DiffusionParams) -> Result<GrayImage> {
    let mut steps = enhance_trajectory(img, params)?;
    let last = steps.pop().unwrap_or_else(|| img.pixels().to_vec());
    Ok(GrayImage::from_clamped(img.width(), img.height(), last))
}

/// Unclamped intensities after each of the `params.steps` rounds of
/// [`enhance`].
pub fn enhance_trajectory(img: &GrayImage, params: &DiffusionParams) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let mut current = img.pixels().to_vec();
    let mut out = Vec::with_capacity(params.steps);
    for _ in 0..params.steps {
        let unit: Vec<f64> = current.iter().map(|v| v / 255.0).collect();
        let j = structure_tensor_raw(&unit, w, h, params.sigma, params.rho);
        let d = diffusion_tensor(&j, params.alpha, params.contrast)?;
        current = evolve(&current, &d, params.dt);
        out.push(current.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn constant_image_has_zero_structure() {
        let img = GrayImage::from_fn(12, 9, |_, _| 77.0).unwrap();
        for t in structure_tensor(&img, 1.0, 2.0).tensors() {
            assert!(t.a.abs() < 1e-20 && t.b.abs() < 1e-20 && t.c.abs() < 1e-20);
        }
    }

    #[test]
    fn ramp_gives_unit_x_tensor() {
        let img = GrayImage::from_fn(10, 10, |x, _| x as f64).unwrap();
        let j = structure_tensor(&img, 0.0, 0.0);
        for y in 0..10 {
            for x in 1..9 {
                let t = j.get(x, y);
                assert!(close(t.a, 1.0, 1e-12) && close(t.b, 0.0, 1e-12) && close(t.c, 0.0, 1e-12));
            }
        }
    }

    #[test]
    fn step_edge_normal_is_horizontal() {
        let img = GrayImage::from_fn(20, 20, |x, _| if x < 10 { 20.0 } else { 200.0 }).unwrap();
        let j = structure_tensor(&img, 0.5, 1.0);
        for y in 0..20 {
            let (vx, vy) = j.get(9, y).dominant_eigenvector();
            assert!(vx.abs() > 0.999 && vy.abs() < 0.05, "{vx} {vy}");
        }
    }

    #[test]
    fn zero_structure_gives_isotropic_alpha() {
        let j = TensorField::uniform(3, 3, Tensor2::default());
        for t in diffusion_tensor(&j, 0.2, 1.0).unwrap().tensors() {
            assert_eq!(*t, Tensor2 { a: 0.2, b: 0.0, c: 0.2 });
        }
    }

    #[test]
    fn strong_coherence_frees_ridge_direction() {
        let j = TensorField::uniform(1, 1, Tensor2 { a: 1e4, b: 0.0, c: 0.0 });
        let d = diffusion_tensor(&j, 0.001, 1e-4).unwrap().get(0, 0);
        assert!(close(d.a, 0.001, 1e-12));
        assert!(close(d.c, 1.0, 1e-9));
    }

    #[test]
    fn diagonal_tensor_closed_form() {
        let j = TensorField::uniform(1, 1, Tensor2 { a: 4.0, b: 0.0, c: 1.0 });
        let d = diffusion_tensor(&j, 0.01, 1.0).unwrap().get(0, 0);
        let lambda2 = 0.01 + 0.99 * (-1.0f64 / 9.0).exp();
        assert!(close(d.a, 0.01, 1e-15));
        assert!(close(d.b, 0.0, 1e-15));
        assert!(close(d.c, lambda2, 1e-15));
        assert!(close(lambda2, 0.895_890_923_646_226_1, 1e-12));
    }

    #[test]
    fn non_psd_input_is_rejected() {
        let j = TensorField::uniform(2, 2, Tensor2 { a: 1.0, b: 3.0, c: 1.0 });
        assert!(matches!(
            diffusion_tensor(&j, 0.1, 1.0),
            Err(Error::NotPositiveSemiDefinite { .. })
        ));
    }

    #[test]
    fn selling_reconstructs_tensor() {
        for &(a, b, c) in &[(1.0, 0.0, 1.0), (0.9, 0.4, 0.3), (0.001, 0.0, 1.0), (0.5, -0.499, 0.5)] {
            let d = Tensor2 { a, b, c };
            let mut sum = Tensor2::default();
            for (w, (ex, ey)) in selling_decomposition(&d) {
                assert!(w >= 0.0);
                sum.a += w * (ex * ex) as f64;
                sum.b += w * (ex * ey) as f64;
                sum.c += w * (ey * ey) as f64;
            }
            assert!(close(sum.a, a, 1e-12) && close(sum.b, b, 1e-12) && close(sum.c, c, 1e-12));
        }
    }

    #[test]
    fn constant_image_is_a_fixed_point() {
        let img = GrayImage::from_fn(16, 16, |_, _| 42.0).unwrap();
        let d = TensorField::uniform(16, 16, Tensor2 { a: 0.3, b: 0.2, c: 0.9 });
        assert_eq!(diffuse_step(&img, &d, 0.2).unwrap(), img);
        let out = enhance(&img, &DiffusionParams::default()).unwrap();
        for &v in out.pixels() {
            assert!(close(v, 42.0, 1e-9));
        }
    }

    /// Five-point Laplacian with mirrored borders, written out directly.
    fn heat_step_oracle(img: &GrayImage, dt: f64) -> Vec<f64> {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let at = |x: isize, y: isize| {
            let x = x.clamp(0, w - 1);
            let y = y.clamp(0, h - 1);
            img.get(x as usize, y as usize)
        };
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let lap = at(x + 1, y) + at(x - 1, y) + at(x, y + 1) + at(x, y - 1) - 4.0 * at(x, y);
                out.push(at(x, y) + dt * lap);
            }
        }
        out
    }

    #[test]
    fn identity_tensor_is_heat_equation() {
        let img = GrayImage::from_fn(13, 11, |x, y| ((x * 37 + y * 91) % 251) as f64).unwrap();
        let d = TensorField::uniform(13, 11, Tensor2::IDENTITY);
        let out = diffuse_step(&img, &d, 0.2).unwrap();
        let oracle = heat_step_oracle(&img, 0.2);
        for (a, b) in out.pixels().iter().zip(&oracle) {
            assert!(close(*a, *b, 1e-9), "{a} vs {b}");
        }
        let (s0, s1): (f64, f64) = (img.pixels().iter().sum(), out.pixels().iter().sum());
        assert!(((s1 - s0) / s0).abs() < 1e-9);
    }

    #[test]
    fn checkerboard_contracts() {
        let img = GrayImage::from_fn(8, 8, |x, y| if (x + y) % 2 == 0 { 10.0 } else { 240.0 }).unwrap();
        let d = TensorField::uniform(8, 8, Tensor2::IDENTITY);
        let out = diffuse_step(&img, &d, 0.1).unwrap();
        let max = out.pixels().iter().copied().fold(f64::MIN, f64::max);
        let min = out.pixels().iter().copied().fold(f64::MAX, f64::min);
        assert!(max < 240.0 && min > 10.0);
    }

    #[test]
    fn step_rejects_mismatch_and_large_dt() {
        let img = GrayImage::from_fn(4, 4, |_, _| 0.0).unwrap();
        let d = TensorField::uniform(4, 5, Tensor2::IDENTITY);
        assert!(matches!(diffuse_step(&img, &d, 0.1), Err(Error::DimensionMismatch(_))));
        let d = TensorField::uniform(4, 4, Tensor2::IDENTITY);
        assert!(diffuse_step(&img, &d, 0.3).is_err());
    }

    #[test]
    fn zero_steps_is_identity() {
        let img = GrayImage::from_fn(9, 9, |x, y| (x * y) as f64).unwrap();
        let params = DiffusionParams {
            steps: 0,
            ..DiffusionParams::default()
        };
        assert_eq!(enhance(&img, &params).unwrap(), img);
    }

    #[test]
    fn invalid_params_rejected() {
        let img = GrayImage::from_fn(4, 4, |_, _| 0.0).unwrap();
        for p in [
            DiffusionParams { dt: 0.3, ..Default::default() },
            DiffusionParams { alpha: 1.0, ..Default::default() },
            DiffusionParams { contrast: 0.0, ..Default::default() },
            DiffusionParams { sigma: -1.0, ..Default::default() },
        ] {
            assert!(enhance(&img, &p).is_err());
        }
    }

    /// Mean squared difference between horizontally adjacent pixels: the
    /// variation along horizontal ridges.
    fn along_ridge_variation(img: &GrayImage) -> f64 {
        let mut acc = 0.0;
        let mut n = 0usize;
        for y in 0..img.height() {
            for x in 1..img.width() {
                acc += (img.get(x, y) - img.get(x - 1, y)).powi(2);
                n += 1;
            }
        }
        acc / n as f64
    }

    #[test]
    fn noisy_ridges_are_smoothed_along_ridges() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let img = GrayImage::from_fn(48, 48, |_, y| {
            let ridge = 128.0 + 90.0 * (2.0 * std::f64::consts::PI * y as f64 / 8.0).sin();
            ridge + rng.random_range(-25.5..25.5)
        });
        let img = img.unwrap();
        let out = enhance(&img, &DiffusionParams::default()).unwrap();
        assert!(along_ridge_variation(&out) < along_ridge_variation(&img));
    }

    #[test]
    fn enhance_is_deterministic() {
        let img = GrayImage::from_fn(24, 24, |x, y| ((x * 13 + y * 29) % 200) as f64).unwrap();
        let p = DiffusionParams { steps: 3, ..Default::default() };
        assert_eq!(enhance(&img, &p).unwrap(), enhance(&img, &p).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn diffusion_tensor_spectrum_in_range(a in 0.0f64..1e3, c in 0.0f64..1e3, t in 0.0f64..1.0, alpha in 0.001f64..0.9, contrast in 1e-6f64..10.0) {
                let b = t * (a * c).sqrt() * if a > c { 1.0 } else { -1.0 };
                let j = TensorField::uniform(1, 1, Tensor2 { a, b, c });
                let d = diffusion_tensor(&j, alpha, contrast).unwrap().get(0, 0);
                let (l1, l2) = d.eigenvalues();
                prop_assert!(l2 >= alpha - 1e-12 && l1 <= 1.0 + 1e-12);
                prop_assert!(d.is_psd());
            }

            #[test]
            fn step_conserves_mass_and_extrema(seed in any::<u64>(), angle in 0.0f64..3.2, aniso in 0.0f64..1.0) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let img = GrayImage::from_fn(12, 12, |_, _| rng.random_range(0.0..255.0)).unwrap();
                let (s, c) = angle.sin_cos();
                let (l1, l2) = (1.0 - aniso * 0.999, 1.0);
                let t = Tensor2 { a: l1 * c * c + l2 * s * s, b: (l1 - l2) * c * s, c: l1 * s * s + l2 * c * c };
                let out = diffuse_step(&img, &TensorField::uniform(12, 12, t), 0.25).unwrap();
                let (m0, m1) = (img.mean(), out.mean());
                prop_assert!(((m1 - m0) / m0).abs() < 1e-9);
                let lo = img.pixels().iter().copied().fold(f64::MAX, f64::min);
                let hi = img.pixels().iter().copied().fold(f64::MIN, f64::max);
                prop_assert!(out.pixels().iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9));
            }
        }
    }
}
