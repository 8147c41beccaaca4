//! Derivative-free minimisation by simplex descent.
//!
//! Nelder–Mead with the dimension-adaptive coefficients of Gao and Han,
//! which behave better than the classical ones once the parameter count
//! reaches a few dozen.

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_iters: usize,
    /// Size of the initial simplex along each coordinate.
    pub initial_step: f64,
    /// Stop when the spread of values across the simplex drops below this.
    pub ftol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            initial_step: 0.1,
            ftol: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

impl NelderMead {
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let n = x0.len();
        let f0 = f(x0);
        if n == 0 {
            return Minimum {
                x: Vec::new(),
                value: f0,
                iterations: 0,
            };
        }
        let nf = n as f64;
        let (alpha, beta, gamma, delta) = if n > 2 {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = f(&x);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        while iterations < self.max_iters {
            iterations += 1;
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if (worst - best).abs() <= self.ftol * (1.0 + best.abs()) {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(alpha);
            let fr = f(&xr);
            if fr < best {
                let xe = along(alpha * beta);
                let fe = f(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst {
                let xc = along(alpha * gamma);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-gamma);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let x_best = simplex[0].0.clone();
            for entry in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = x_best
                    .iter()
                    .zip(&entry.0)
                    .map(|(b, xi)| b + delta * (xi - b))
                    .collect();
                let v = f(&x);
                *entry = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let nm = NelderMead::default();
        let m = nm.minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0]);
        assert!((m.x[0] - 1.0).abs() < 1e-5);
        assert!((m.x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_iters: 10_000,
            ..Default::default()
        };
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.value < 1e-8, "{m:?}");
    }

    #[test]
    fn higher_dimensional_sphere() {
        let nm = NelderMead {
            max_iters: 20_000,
            ..Default::default()
        };
        let m = nm.minimize(|x| x.iter().map(|v| v * v).sum(), &[0.5; 12]);
        assert!(m.value < 1e-8);
    }

    #[test]
    fn never_worse_than_start() {
        let nm = NelderMead {
            max_iters: 5,
            ..Default::default()
        };
        let f = |x: &[f64]| (x[0] * 7.0).sin() + x[1].abs();
        let m = nm.minimize(f, &[0.3, 0.2]);
        assert!(m.value <= f(&[0.3, 0.2]));
    }
}
