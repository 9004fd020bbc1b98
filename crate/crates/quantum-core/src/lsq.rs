//! Damped least squares (Levenberg–Marquardt) with a finite-difference
//! Jacobian and box bounds enforced by projection.

use crate::linalg::solve_real;

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative cost decrease below which an accepted step counts as converged.
    pub ftol: f64,
    /// Relative parameter change, in units of `scales`, below which an
    /// accepted step counts as converged.
    pub xtol: f64,
    pub initial_damping: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Typical magnitude per parameter; sets the absolute difference step.
    pub scales: Option<Vec<f64>>,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            ftol: 1e-12,
            xtol: 1e-10,
            initial_damping: 1e-3,
            fd_step: 1e-7,
            scales: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub const FREE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn positive() -> Self {
        Self::new(f64::MIN_POSITIVE, f64::INFINITY)
    }

    pub fn non_negative() -> Self {
        Self::new(0.0, f64::INFINITY)
    }

    fn clamp(&self, x: f64) -> f64 {
        x.max(self.lower).min(self.upper)
    }
}

#[derive(Debug, Clone)]
pub struct LmFit {
    pub params: Vec<f64>,
    /// ½ Σ r².
    pub cost: f64,
    pub residual_rms: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("least-squares fit did not converge after {} iterations (cost {:e})", best.iterations, best.cost)]
pub struct LmFailure {
    pub best: LmFit,
}

fn cost_of(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|x| x * x).sum::<f64>()
}

/// Minimizes ½‖r(p)‖². The residual closure returns `None` when the model
/// cannot be evaluated at `p`, which is treated as an infinite cost.
pub fn levenberg_marquardt<F>(
    mut residuals: F,
    p0: &[f64],
    bounds: &[Bound],
    opts: &LmOptions,
) -> Result<LmFit, LmFailure>
where
    F: FnMut(&[f64]) -> Option<Vec<f64>>,
{
    let np = p0.len();
    assert_eq!(bounds.len(), np, "one bound per parameter");
    let scales: Vec<f64> = match &opts.scales {
        Some(s) => s.clone(),
        None => p0.iter().map(|&x| if x != 0.0 { x.abs() } else { 1.0 }).collect(),
    };
    let mut p: Vec<f64> = p0.iter().zip(bounds).map(|(&x, b)| b.clamp(x)).collect();
    let mut r = residuals(&p).unwrap_or_default();
    let m = r.len();
    let mut cost = if r.is_empty() { f64::INFINITY } else { cost_of(&r) };
    let mut lambda = opts.initial_damping;

    let snapshot = |p: &[f64], cost: f64, iterations: usize| LmFit {
        params: p.to_vec(),
        cost,
        residual_rms: if m > 0 { (2.0 * cost / m as f64).sqrt() } else { f64::NAN },
        iterations,
    };

    if !cost.is_finite() {
        return Err(LmFailure {
            best: snapshot(&p, cost, 0),
        });
    }

    for iter in 1..=opts.max_iterations {
        if cost == 0.0 {
            return Ok(snapshot(&p, cost, iter - 1));
        }
        let mut jac = vec![vec![0.0; np]; m];
        for j in 0..np {
            let mut h = opts.fd_step * p[j].abs().max(scales[j]);
            if p[j] + h > bounds[j].upper {
                h = -h;
            }
            let mut q = p.clone();
            q[j] += h;
            let h = q[j] - p[j];
            let rq = match residuals(&q) {
                Some(rq) if rq.len() == m => rq,
                _ => {
                    return Err(LmFailure {
                        best: snapshot(&p, cost, iter),
                    })
                }
            };
            for i in 0..m {
                jac[i][j] = (rq[i] - r[i]) / h;
            }
        }
        let mut jtj = vec![vec![0.0; np]; np];
        let mut jtr = vec![0.0; np];
        for i in 0..m {
            for a in 0..np {
                jtr[a] += jac[i][a] * r[i];
                for b in a..np {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        for a in 0..np {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }

        // Parameters on a bound with descent pointing outward stay fixed this step.
        let pinned: Vec<bool> = (0..np)
            .map(|a| (p[a] <= bounds[a].lower && jtr[a] > 0.0) || (p[a] >= bounds[a].upper && jtr[a] < 0.0))
            .collect();

        loop {
            let mut lhs = jtj.clone();
            for a in 0..np {
                let d = if jtj[a][a] > 0.0 { jtj[a][a] } else { 1.0 };
                lhs[a][a] += lambda * d;
            }
            let mut rhs: Vec<f64> = jtr.iter().map(|x| -x).collect();
            for a in (0..np).filter(|&a| pinned[a]) {
                for b in 0..np {
                    lhs[a][b] = 0.0;
                    lhs[b][a] = 0.0;
                }
                lhs[a][a] = 1.0;
                rhs[a] = 0.0;
            }
            let step = solve_real(lhs, rhs).ok();
            let trial: Option<(Vec<f64>, Vec<f64>, f64)> = step.and_then(|d| {
                let q: Vec<f64> = (0..np).map(|a| bounds[a].clamp(p[a] + d[a])).collect();
                let rq = residuals(&q)?;
                if rq.len() != m {
                    return None;
                }
                let c = cost_of(&rq);
                c.is_finite().then_some((q, rq, c))
            });
            match trial {
                Some((q, rq, c)) if c < cost => {
                    let dx: f64 = (0..np).map(|a| ((q[a] - p[a]) / scales[a]).powi(2)).sum::<f64>().sqrt();
                    let px: f64 = (0..np).map(|a| (p[a] / scales[a]).powi(2)).sum::<f64>().sqrt();
                    let dc = cost - c;
                    p = q;
                    r = rq;
                    cost = c;
                    lambda = (lambda / 3.0).max(1e-12);
                    if dc <= opts.ftol * cost || dx <= opts.xtol * (px + opts.xtol) {
                        return Ok(snapshot(&p, cost, iter));
                    }
                    break;
                }
                _ => {
                    lambda *= 4.0;
                    if lambda > 1e16 {
                        // No descent direction left: a stationary point.
                        return Ok(snapshot(&p, cost, iter));
                    }
                }
            }
        }
    }
    Err(LmFailure {
        best: snapshot(&p, cost, opts.max_iterations),
    })
}
