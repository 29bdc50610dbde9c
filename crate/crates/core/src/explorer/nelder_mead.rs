//! Box-bounded Nelder–Mead simplex minimizer.
//!
//! Trial points are clamped into the unit box; the objective may return
//! `+∞` to reject a point.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop when every vertex is within this distance of the best one.
    pub x_tolerance: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iterations: 500,
            x_tolerance: 1e-10,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

fn clamp_unit(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(0.0, 1.0);
    }
}

pub fn minimize<F>(start: &[f64], options: NelderMeadOptions, mut f: F) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(start),
            iterations: 0,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clamp_unit(&mut x0);
    simplex.push(x0.clone());
    for i in 0..n {
        let mut v = x0.clone();
        // step inward when the start sits on the upper bound
        v[i] = if v[i] + options.initial_step <= 1.0 {
            v[i] + options.initial_step
        } else {
            v[i] - options.initial_step
        };
        clamp_unit(&mut v);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < options.x_tolerance {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp_unit(&mut p);
            p
        };

        let reflected = along(1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let p = along(0.5);
            let v = f(&p);
            (p, v)
        } else {
            let p = along(-0.5);
            let v = f(&p);
            (p, v)
        };
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for j in 0..n {
                simplex[i][j] = best[j] + 0.5 * (simplex[i][j] - best[j]);
            }
            values[i] = f(&simplex[i]);
        }
    }

    let (ibest, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("simplex is non-empty");
    Minimum {
        x: simplex[ibest].clone(),
        value: values[ibest],
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_quadratic_minimum() {
        let m = minimize(&[0.1, 0.9], NelderMeadOptions::default(), |x| {
            (x[0] - 0.3).powi(2) + 4.0 * (x[1] - 0.6).powi(2)
        });
        assert!((m.x[0] - 0.3).abs() < 1e-6);
        assert!((m.x[1] - 0.6).abs() < 1e-6);
    }

    #[test]
    fn finds_corner_minimum_of_monotone_function() {
        let m = minimize(&[0.5, 0.5], NelderMeadOptions::default(), |x| {
            x[0] + 2.0 * x[1]
        });
        assert!(m.x[0] < 1e-8 && m.x[1] < 1e-8, "{:?}", m.x);
    }

    #[test]
    fn rejected_region_is_avoided() {
        let m = minimize(&[0.8, 0.8], NelderMeadOptions::default(), |x| {
            if x[0] + x[1] < 1.0 {
                f64::INFINITY
            } else {
                x[0] * x[0] + x[1] * x[1]
            }
        });
        assert!(m.value.is_finite());
        assert!((m.x[0] + m.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn one_dimensional_search() {
        let m = minimize(&[0.0], NelderMeadOptions::default(), |x| {
            (x[0] - 0.77).abs()
        });
        assert!((m.x[0] - 0.77).abs() < 1e-8);
    }
}
