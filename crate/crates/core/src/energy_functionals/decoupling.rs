//! Energies of explicit trial states: the 1D functional and the 2D magnetic
//! functional of the product ansatz `ψ(x) U_ε(y) e^{-iαS}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gauge_geometry::{grad_s, phase_s, vector_potentials, Configuration2D, Point2};
use crate::oscillator_basis::{
    make_quadrature, uepsilon_derivative, uepsilon_eval, QuadratureKind, QuadratureRule,
};
use crate::tonks_girardeau::{
    tg_energy_quadrature, tg_value_and_gradient, TGEigenstate, MAX_QUADRATURE_PARTICLES,
};

/// 1D trial states with known energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Trial1D {
    Tg(TGEigenstate),
    /// `∏_j exp(-a x_j²)`, normalized.
    ScaledGaussian {
        particles: usize,
        a: f64,
    },
}

/// `⟨φ|H¹ᴰ φ⟩ / ⟨φ|φ⟩` with `H¹ᴰ = Σ(-∂_j² + x_j²)`.
pub fn energy1d(trial: &Trial1D, order: usize) -> Result<f64> {
    match trial {
        Trial1D::Tg(st) => tg_energy_quadrature(st, order),
        &Trial1D::ScaledGaussian { particles, a } => {
            if !(a > 0.0) {
                return invalid(format!("Gaussian exponent must be positive, got {a}"));
            }
            if particles == 0 || particles > MAX_QUADRATURE_PARTICLES {
                return Err(Error::Resource(format!(
                    "tensor quadrature supports 1..={MAX_QUADRATURE_PARTICLES} particles"
                )));
            }
            // x = t / sqrt(2a) puts |φ|² on the Hermite weight
            let rule = make_quadrature(QuadratureKind::GaussHermite, order)?;
            let s = 1.0 / (2.0 * a).sqrt();
            let mut num = 0.0;
            let mut den = 0.0;
            let mut idx = vec![0usize; particles];
            loop {
                let mut w = 1.0;
                let mut local = 0.0;
                for &i in &idx {
                    w *= rule.weights[i];
                    let x = s * rule.nodes[i];
                    let dlog = -2.0 * a * x;
                    local += dlog * dlog + x * x;
                }
                num += w * local;
                den += w;
                let mut j = 0;
                while j < particles {
                    idx[j] += 1;
                    if idx[j] < order {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == particles {
                    break;
                }
            }
            Ok(num / den)
        }
    }
}

/// `ψ(x₁, x₂) U_ε(y₁, y₂) e^{-iαS}` with `ψ` a TG eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialState2D {
    pub psi: TGEigenstate,
    pub alpha: f64,
    pub epsilon: f64,
}

impl TrialState2D {
    pub fn new(psi: TGEigenstate, alpha: f64, epsilon: f64) -> Result<Self> {
        if psi.particles() != 2 {
            return invalid(format!(
                "the 2D energy quadrature is four-dimensional; got {} particles",
                psi.particles()
            ));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
        }
        if !alpha.is_finite() {
            return invalid("statistics parameter must be finite");
        }
        Ok(Self {
            psi,
            alpha,
            epsilon,
        })
    }

    /// `E¹ᴰ(ψ) + N/ε`, the value the 2D energy should reproduce.
    pub fn predicted_energy(&self) -> f64 {
        self.psi.energy as f64 + self.psi.particles() as f64 / self.epsilon
    }
}

/// Pieces of `Σ_j ∫ |D_jΨ|² + V_ε|Ψ|²`, each integrated separately. With
/// `D_j = -i∇_j + αA_j` the kinetic density expands to
/// `|∇_jΨ|² + α²|A_j|²|Ψ|² + α A_j·J_j`, `J_j = i(Ψ∇_jΨ̄ - Ψ̄∇_jΨ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub total: f64,
    pub norm: f64,
    /// `Σ ∫ |∇_jΨ|²`, phase gradient included.
    pub gradient: f64,
    /// `α² Σ ∫ |A_j|² |Ψ|²`
    pub magnetic_square: f64,
    /// `α Σ ∫ A_j·J_j`
    pub magnetic_cross: f64,
    pub potential: f64,
    /// `α² Σ ∫ |∇_jS - A_j|² |Ψ|²`, evaluated from both fields.
    pub gauge_mismatch: f64,
}

struct Rules {
    x1: QuadratureRule,
    x2: QuadratureRule,
    y: QuadratureRule,
}

fn rules(order: usize) -> Result<Rules> {
    let x1 = make_quadrature(QuadratureKind::GaussHermite, order)?;
    let mut o2 = order + 1;
    let mut x2 = make_quadrature(QuadratureKind::GaussHermite, o2)?;
    // distinct node sets keep every tensor point off the x-diagonal
    while x1
        .nodes
        .iter()
        .any(|a| x2.nodes.iter().any(|b| (a - b).abs() < 1e-10))
    {
        o2 += 1;
        x2 = make_quadrature(QuadratureKind::GaussHermite, o2)?;
    }
    let y = make_quadrature(QuadratureKind::GaussHermite, order)?;
    Ok(Rules { x1, x2, y })
}

/// The 2D energy of the ansatz, normalized by its (quadrature) norm.
pub fn energy2d_trial(t: &TrialState2D, order: usize) -> Result<EnergyBreakdown> {
    let r = rules(order)?;
    let eps = t.epsilon;
    let alpha = t.alpha;
    let sy = eps.sqrt();
    let mut acc = [0.0f64; 6];
    let ys: Vec<(f64, f64, f64)> =
        r.y.nodes
            .iter()
            .zip(&r.y.plain_weights)
            .map(|(&n, &w)| {
                let y = sy * n;
                Ok((y, sy * w, 0.0))
            })
            .collect::<Result<_>>()?;
    let uy: Vec<(f64, f64)> = ys
        .iter()
        .map(|&(y, _, _)| Ok((uepsilon_eval(eps, y)?, uepsilon_derivative(eps, y)?)))
        .collect::<Result<_>>()?;
    for (&x1, &w1) in r.x1.nodes.iter().zip(&r.x1.plain_weights) {
        for (&x2, &w2) in r.x2.nodes.iter().zip(&r.x2.plain_weights) {
            let (psi, dpsi) = tg_value_and_gradient(&t.psi, &[x1, x2])?;
            for (a, &(y1, wy1, _)) in ys.iter().enumerate() {
                for (b, &(y2, wy2, _)) in ys.iter().enumerate() {
                    let w = w1 * w2 * wy1 * wy2;
                    let (u1, du1) = uy[a];
                    let (u2, du2) = uy[b];
                    let cfg = Configuration2D::new(vec![Point2::new(x1, y1), Point2::new(x2, y2)]);
                    let s = phase_s(&cfg)?;
                    let gs = grad_s(&cfg)?;
                    let pot = vector_potentials(&cfg)?;
                    let amp = psi * u1 * u2;
                    let phase = Complex64::from_polar(1.0, -alpha * s);
                    let big_psi = phase * amp;
                    let dens = big_psi.norm_sqr();
                    // real gradients of ψU per particle, then the phase factor
                    let real_grad = [
                        [dpsi[0] * u1 * u2, psi * du1 * u2],
                        [dpsi[1] * u1 * u2, psi * u1 * du2],
                    ];
                    let mut grad2 = 0.0;
                    let mut mag2 = 0.0;
                    let mut cross = 0.0;
                    let mut mismatch = 0.0;
                    for j in 0..2 {
                        let g = [gs[j].x, gs[j].y];
                        let av = [pot[j].x, pot[j].y];
                        for c in 0..2 {
                            let d = phase * Complex64::new(real_grad[j][c], -alpha * g[c] * amp);
                            grad2 += d.norm_sqr();
                            let jc = 2.0 * (big_psi.conj() * d).im;
                            cross += alpha * av[c] * jc;
                            mag2 += alpha * alpha * av[c] * av[c] * dens;
                            mismatch += alpha * alpha * (g[c] - av[c]).powi(2) * dens;
                        }
                    }
                    let v =
                        (x1 * x1 + y1 * y1 / (eps * eps) + x2 * x2 + y2 * y2 / (eps * eps)) * dens;
                    acc[0] += w * dens;
                    acc[1] += w * grad2;
                    acc[2] += w * mag2;
                    acc[3] += w * cross;
                    acc[4] += w * v;
                    acc[5] += w * mismatch;
                }
            }
        }
    }
    let norm = acc[0];
    if !(norm > 0.0) {
        return Err(Error::Quadrature(
            "trial state has zero quadrature norm".into(),
        ));
    }
    let gradient = acc[1] / norm;
    let magnetic_square = acc[2] / norm;
    let magnetic_cross = acc[3] / norm;
    let potential = acc[4] / norm;
    Ok(EnergyBreakdown {
        total: gradient + magnetic_square + magnetic_cross + potential,
        norm,
        gradient,
        magnetic_square,
        magnetic_cross,
        potential,
        gauge_mismatch: acc[5] / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tonks_girardeau::OrbitalSet;

    #[test]
    fn one_dimensional_energies() {
        assert!((energy1d(&Trial1D::Tg(TGEigenstate::ground(2)), 24).unwrap() - 4.0).abs() < 1e-8);
        let g = Trial1D::ScaledGaussian {
            particles: 2,
            a: 0.5,
        };
        assert!((energy1d(&g, 16).unwrap() - 2.0).abs() < 1e-10);
        for a in [0.2, 0.5, 1.3, 3.0] {
            for particles in 1..=3 {
                let e = energy1d(&Trial1D::ScaledGaussian { particles, a }, 12).unwrap();
                assert!((e - particles as f64 * (a + 0.25 / a)).abs() < 1e-10);
            }
        }
        assert!(energy1d(
            &Trial1D::ScaledGaussian {
                particles: 2,
                a: 0.0
            },
            8
        )
        .is_err());
    }

    #[test]
    fn ground_state_at_half_squeeze() {
        for alpha in [0.3, 1.0, 1.7] {
            let t = TrialState2D::new(TGEigenstate::ground(2), alpha, 0.5).unwrap();
            let e = energy2d_trial(&t, 20).unwrap();
            assert!((e.total - 8.0).abs() < 1e-6, "α = {alpha}: {e:?}");
            assert!(e.gauge_mismatch < 1e-20);
            assert!(e.magnetic_square > 0.0);
        }
    }

    #[test]
    fn no_gauge_field_at_zero_alpha() {
        let t = TrialState2D::new(TGEigenstate::ground(2), 0.0, 1.0).unwrap();
        let e = energy2d_trial(&t, 20).unwrap();
        assert!((e.total - 6.0).abs() < 1e-8);
        assert_eq!(e.magnetic_square, 0.0);
        assert_eq!(e.magnetic_cross, 0.0);
    }

    #[test]
    fn excited_state_matches_prediction() {
        let st = TGEigenstate::new(OrbitalSet::new(vec![0, 2]).unwrap());
        let t = TrialState2D::new(st, 1.5, 0.1).unwrap();
        let e = energy2d_trial(&t, 20).unwrap();
        assert!(
            (e.total - t.predicted_energy()).abs() < 1e-6 * (1.0 + 20.0),
            "{e:?}"
        );
    }

    #[test]
    fn validation() {
        assert!(TrialState2D::new(TGEigenstate::ground(3), 0.5, 0.5).is_err());
        assert!(TrialState2D::new(TGEigenstate::ground(2), 0.5, 0.0).is_err());
    }
}
