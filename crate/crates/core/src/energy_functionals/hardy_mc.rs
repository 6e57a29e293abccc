//! Monte Carlo Hardy quotients
//! `Σ_k ∫|D_kφ|² / Σ_{j<l} ∫|φ|²/|x_j - x_l|²` on explicit trial functions.
//!
//! Points are drawn from a Gaussian envelope of `|φ|²` and reweighted, in
//! antithetic pairs `(z, -z)`, across a fixed number of independent ChaCha
//! streams whose partial sums are reduced in stream order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const MC_STREAMS: u64 = 16;
/// Relative standard error above which an estimate is flagged.
pub const FLAG_RELATIVE_STDERR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HardyTrial {
    /// `(1 + c Σ_{j<l} d_jl²) ∏_{j<l} d_jl^β exp(-a Σ_j |x_j|²)`, real and symmetric.
    Jastrow {
        particles: usize,
        alpha: f64,
        beta: f64,
        a: f64,
        c: f64,
    },
    /// Two particles, `e^{imθ} r^s e^{-b r²} e^{-c |R|²}` in relative / center
    /// coordinates; `m` even keeps it symmetric.
    Channel {
        alpha: f64,
        m: i64,
        s: f64,
        b: f64,
        c: f64,
    },
}

impl HardyTrial {
    pub fn particles(&self) -> usize {
        match *self {
            HardyTrial::Jastrow { particles, .. } => particles,
            HardyTrial::Channel { .. } => 2,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            HardyTrial::Jastrow { alpha, .. } | HardyTrial::Channel { alpha, .. } => alpha,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            HardyTrial::Jastrow {
                particles,
                beta,
                a,
                c,
                ..
            } => {
                if !(2..=3).contains(&particles) {
                    return invalid(format!(
                        "Hardy trials cover 2 or 3 particles, got {particles}"
                    ));
                }
                // finite variance of the reweighted 1/d² terms needs β > 1/2
                if !(beta > 0.5) || !(a > 0.0) || !(c >= 0.0) {
                    return invalid(format!(
                        "need β > 1/2, a > 0, c >= 0; got β = {beta}, a = {a}, c = {c}"
                    ));
                }
            }
            HardyTrial::Channel { m, s, b, c, .. } => {
                if m % 2 != 0 {
                    return invalid(format!("channel {m} is odd"));
                }
                if !(s > 0.5) || !(b > 0.0) || !(c > 0.0) {
                    return invalid(format!(
                        "need s > 1/2, b > 0, c > 0; got s = {s}, b = {b}, c = {c}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Envelope draw from standard normals `z` (length `2N`) into positions.
    fn place(&self, z: &[f64], x: &mut [[f64; 2]]) {
        match *self {
            HardyTrial::Jastrow { a, .. } => {
                let sd = (0.25 / a).sqrt();
                for (p, zz) in x.iter_mut().zip(z.chunks(2)) {
                    *p = [sd * zz[0], sd * zz[1]];
                }
            }
            HardyTrial::Channel { b, c, .. } => {
                let (sr, sc) = ((0.25 / b).sqrt(), (0.25 / c).sqrt());
                let big = [sc * z[0], sc * z[1]];
                let rel = [sr * z[2], sr * z[3]];
                x[0] = [big[0] + 0.5 * rel[0], big[1] + 0.5 * rel[1]];
                x[1] = [big[0] - 0.5 * rel[0], big[1] - 0.5 * rel[1]];
            }
        }
    }

    /// `|φ|² / envelope` up to a constant, and `∇_k ln φ` per particle.
    fn weight_and_log_gradient(&self, x: &[[f64; 2]], lg: &mut [[Complex64; 2]]) -> f64 {
        match *self {
            HardyTrial::Jastrow { beta, a, c, .. } => {
                let n = x.len();
                let mut jast = 1.0;
                let mut poly = 1.0;
                for g in lg.iter_mut() {
                    *g = [Complex64::new(0.0, 0.0); 2];
                }
                let mut pull = vec![[0.0f64; 2]; n];
                for j in 0..n {
                    for l in j + 1..n {
                        let d = [x[j][0] - x[l][0], x[j][1] - x[l][1]];
                        let d2 = d[0] * d[0] + d[1] * d[1];
                        jast *= d2.powf(beta);
                        poly += c * d2;
                        for k in 0..2 {
                            lg[j][k].re += beta * d[k] / d2;
                            lg[l][k].re -= beta * d[k] / d2;
                            pull[j][k] += d[k];
                            pull[l][k] -= d[k];
                        }
                    }
                }
                for k in 0..n {
                    for q in 0..2 {
                        lg[k][q].re += -2.0 * a * x[k][q] + 2.0 * c * pull[k][q] / poly;
                    }
                }
                poly * poly * jast
            }
            HardyTrial::Channel { m, s, b, c, .. } => {
                let rel = [x[0][0] - x[1][0], x[0][1] - x[1][1]];
                let big = [0.5 * (x[0][0] + x[1][0]), 0.5 * (x[0][1] + x[1][1])];
                let r2 = rel[0] * rel[0] + rel[1] * rel[1];
                let perp = [-rel[1], rel[0]];
                let mut lr = [Complex64::new(0.0, 0.0); 2];
                for k in 0..2 {
                    lr[k] = Complex64::new((s / r2 - 2.0 * b) * rel[k], m as f64 * perp[k] / r2);
                    let lbig = -2.0 * c * big[k];
                    lg[0][k] = lr[k] + 0.5 * lbig;
                    lg[1][k] = -lr[k] + 0.5 * lbig;
                }
                r2.powf(s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub streams: u64,
    /// Relative standard error above [`FLAG_RELATIVE_STDERR`].
    pub flagged: bool,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    count: f64,
    n: f64,
    d: f64,
    nn: f64,
    dd: f64,
    nd: f64,
}

impl Moments {
    fn push(&mut self, n: f64, d: f64) {
        self.count += 1.0;
        self.n += n;
        self.d += d;
        self.nn += n * n;
        self.dd += d * d;
        self.nd += n * d;
    }

    fn merge(mut self, o: Moments) -> Moments {
        self.count += o.count;
        self.n += o.n;
        self.d += o.d;
        self.nn += o.nn;
        self.dd += o.dd;
        self.nd += o.nd;
        self
    }

    /// Ratio of means with its delta-method standard error.
    fn ratio(&self) -> (f64, f64) {
        let m = self.count;
        let (mn, md) = (self.n / m, self.d / m);
        let q = mn / md;
        let var_n = (self.nn / m - mn * mn) * m / (m - 1.0);
        let var_d = (self.dd / m - md * md) * m / (m - 1.0);
        let cov = (self.nd / m - mn * md) * m / (m - 1.0);
        let var_q = (var_n - 2.0 * q * cov + q * q * var_d) / (m * md * md);
        (q, var_q.max(0.0).sqrt())
    }
}

fn run_streams(
    samples: usize,
    seed: u64,
    pair: impl Fn(&mut ChaCha8Rng) -> (f64, f64) + Sync,
) -> Result<HardyEstimate> {
    if samples < 4 * MC_STREAMS as usize {
        return invalid(format!("need at least {} samples", 4 * MC_STREAMS));
    }
    let pairs_per_stream = samples / 2 / MC_STREAMS as usize;
    let parts: Vec<Moments> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut mom = Moments::default();
            for _ in 0..pairs_per_stream {
                let (n, d) = pair(&mut rng);
                mom.push(n, d);
            }
            mom
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let (estimate, stderr) = total.ratio();
    Ok(HardyEstimate {
        estimate,
        stderr,
        samples: 2 * pairs_per_stream * MC_STREAMS as usize,
        seed,
        streams: MC_STREAMS,
        flagged: !(stderr <= FLAG_RELATIVE_STDERR * estimate.abs()),
    })
}

fn vector_potential(j: usize, x: &[[f64; 2]]) -> [f64; 2] {
    let mut a = [0.0; 2];
    for (k, p) in x.iter().enumerate() {
        if k != j {
            let d = [x[j][0] - p[0], x[j][1] - p[1]];
            let d2 = d[0] * d[0] + d[1] * d[1];
            a[0] += -d[1] / d2;
            a[1] += d[0] / d2;
        }
    }
    a
}

/// Numerator and denominator densities at one point, both divided by the envelope.
fn hardy_terms(t: &HardyTrial, x: &[[f64; 2]], lg: &mut [[Complex64; 2]]) -> (f64, f64) {
    let w = t.weight_and_log_gradient(x, lg);
    let alpha = t.alpha();
    let mut kin = 0.0;
    let mut den = 0.0;
    for (j, g) in lg.iter().enumerate() {
        let a = vector_potential(j, x);
        for q in 0..2 {
            // |D φ|²/|φ|² = |Re L|² + |Im L + αA|²
            kin += g[q].re * g[q].re + (g[q].im + alpha * a[q]).powi(2);
        }
        for p in &x[j + 1..] {
            den += 1.0 / ((x[j][0] - p[0]).powi(2) + (x[j][1] - p[1]).powi(2));
        }
    }
    (w * kin, w * den)
}

pub fn hardy_quotient_mc(t: &HardyTrial, samples: usize, seed: u64) -> Result<HardyEstimate> {
    t.validate()?;
    let n = t.particles();
    run_streams(samples, seed, |rng| {
        let z: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(rng)).collect();
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let mut x = vec![[0.0; 2]; n];
        let mut lg = vec![[Complex64::new(0.0, 0.0); 2]; n];
        t.place(&z, &mut x);
        let (n1, d1) = hardy_terms(t, &x, &mut lg);
        t.place(&neg, &mut x);
        let (n2, d2) = hardy_terms(t, &x, &mut lg);
        (0.5 * (n1 + n2), 0.5 * (d1 + d2))
    })
}

/// Three particles, `φ = exp(-a Σ|x_j|²)`, no gauge field:
/// `Σ_j ∫|∇_jφ|² / ∫|φ|²/ρ²` with `ρ² = Σ_{j<l}|x_j - x_l|²`.
///
/// `1/ρ²` has infinite variance under `|φ|²` itself, so points come from the
/// defensive mixture `(g + h)/2` with `h ∝ g/ρ²`, drawn in Jacobi coordinates.
pub fn three_body_quotient_mc(a: f64, samples: usize, seed: u64) -> Result<HardyEstimate> {
    if !(a > 0.0) {
        return invalid(format!("Gaussian exponent must be positive, got {a}"));
    }
    let sd = (0.25 / a).sqrt();
    let inv_sqrt = [1.0 / 3f64.sqrt(), 1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()];
    let point = move |cm: [f64; 2], dir: &[f64; 4], tau: f64| -> (f64, f64) {
        let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rr = tau.sqrt() / dn;
        let xi1 = [rr * dir[0], rr * dir[1]];
        let xi2 = [rr * dir[2], rr * dir[3]];
        let mut x = [[0.0; 2]; 3];
        for q in 0..2 {
            let base = cm[q] * inv_sqrt[0];
            x[0][q] = base + xi1[q] * inv_sqrt[1] + xi2[q] * inv_sqrt[2];
            x[1][q] = base - xi1[q] * inv_sqrt[1] + xi2[q] * inv_sqrt[2];
            x[2][q] = base - 2.0 * xi2[q] * inv_sqrt[2];
        }
        let r2: f64 = x.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum();
        let rho2: f64 = (0..3)
            .flat_map(|j| (j + 1..3).map(move |l| (j, l)))
            .map(|(j, l)| (x[j][0] - x[l][0]).powi(2) + (x[j][1] - x[l][1]).powi(2))
            .sum();
        // envelope over mixture: h/g = 1/(2aτ)
        let w = 2.0 / (1.0 + 1.0 / (2.0 * a * tau));
        (w * 4.0 * a * a * r2, w / rho2)
    };
    run_streams(samples, seed, |rng| {
        let cm = [
            sd * rng.sample::<f64, _>(StandardNormal),
            sd * rng.sample::<f64, _>(StandardNormal),
        ];
        let dir: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        // τ = |ξ_rel|²: Gamma(2) under g, Gamma(1) under h, scale 1/(2a)
        let e1: f64 = -rng.random::<f64>().max(f64::MIN_POSITIVE).ln();
        let tau = if rng.random::<bool>() {
            e1 - rng.random::<f64>().max(f64::MIN_POSITIVE).ln()
        } else {
            e1
        } / (2.0 * a);
        let neg_dir = dir.map(|v| -v);
        let (n1, d1) = point(cm, &dir, tau);
        let (n2, d2) = point([-cm[0], -cm[1]], &neg_dir, tau);
        (0.5 * (n1 + n2), 0.5 * (d1 + d2))
    })
}

/// Radial moments of `f = r^s e^{-b r²}`: `(∫f² r, ∫f'² r, ∫f²/r)`.
fn channel_moments(s: f64, b: f64) -> (f64, f64, f64) {
    let moment = |p: f64| libm::tgamma(p) / (2.0 * (2.0 * b).powf(p)); // ∫ r^{2p-1} e^{-2br²} dr
    let i0 = moment(s + 1.0);
    let i2 = moment(s);
    let i4 = moment(s + 2.0);
    (i0, s * s * i2 - 4.0 * b * s * i0 + 4.0 * b * b * i4, i2)
}

/// Closed-form quotient of a [`HardyTrial::Channel`] trial:
/// `[c I₀ + 2(I₁ + (m + α)² I₂)] / I₂`.
pub fn channel_quotient_exact(t: &HardyTrial) -> Result<f64> {
    t.validate()?;
    let HardyTrial::Channel { alpha, m, s, b, c } = *t else {
        return invalid("closed form exists for channel trials only");
    };
    let (i0, i1, i2) = channel_moments(s, b);
    let mu = m as f64 + alpha;
    Ok((c * i0 + 2.0 * (i1 + mu * mu * i2)) / i2)
}

/// The same quotient from one-dimensional radial quadrature with `r = u²`.
pub fn channel_quotient_quadrature(t: &HardyTrial, order: usize) -> Result<f64> {
    t.validate()?;
    let HardyTrial::Channel { alpha, m, s, b, c } = *t else {
        return invalid("closed form exists for channel trials only");
    };
    let rule = crate::oscillator_basis::make_quadrature(
        crate::oscillator_basis::QuadratureKind::GaussLegendre,
        order,
    )?;
    let upper = (40.0 / b).sqrt().sqrt();
    let (us, ws) = rule.mapped_to(0.0, upper);
    let (mut i0, mut i1, mut i2) = (0.0, 0.0, 0.0);
    for (&u, &w) in us.iter().zip(&ws) {
        let r = u * u;
        let jac = w * 2.0 * u;
        let f = r.powf(s) * (-b * r * r).exp();
        let df = (s / r - 2.0 * b * r) * f;
        i0 += jac * f * f * r;
        i1 += jac * df * df * r;
        i2 += jac * f * f / r;
    }
    let mu = m as f64 + alpha;
    Ok((c * i0 + 2.0 * (i1 + mu * mu * i2)) / i2)
}

/// The trial family checked against the many-anyon constant.
pub fn shipped_trials() -> Vec<HardyTrial> {
    let mut out = Vec::new();
    for &alpha in &[0.25, 0.5, 1.0, 1.5] {
        for particles in [2, 3] {
            for &(beta, c) in &[(0.75, 0.0), (1.0, 0.0), (1.0, 0.3), (2.0, 0.0)] {
                out.push(HardyTrial::Jastrow {
                    particles,
                    alpha,
                    beta,
                    a: 0.5,
                    c,
                });
            }
        }
        for m in [-2, 0, 2] {
            out.push(HardyTrial::Channel {
                alpha,
                m,
                s: 1.0,
                b: 0.5,
                c: 0.5,
            });
        }
    }
    out
}
