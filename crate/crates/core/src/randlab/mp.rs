use std::f64::consts::PI;

use super::{ESDSample, RandError};

/// Marchenko-Pastur law with ratio `r` and unit variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MPParams {
    pub r: f64,
    pub a: f64,
    pub b: f64,
    /// Mass of the atom at zero.
    pub atom: f64,
}

impl MPParams {
    pub fn new(r: f64) -> Result<Self, RandError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(RandError::Parameters(format!("ratio must be positive, got {r}")));
        }
        let s = r.sqrt();
        Ok(Self {
            r,
            a: (1.0 - s).powi(2),
            b: (1.0 + s).powi(2),
            atom: (1.0 - 1.0 / r).max(0.0),
        })
    }

    /// The square case `r = 1`.
    pub fn square() -> Self {
        Self::new(1.0).expect("1 is a valid ratio")
    }
}

/// Continuous part of the density.
pub fn mp_density(p: &MPParams, x: f64) -> f64 {
    if x <= p.a || x >= p.b || x <= 0.0 {
        return 0.0;
    }
    ((x - p.a) * (p.b - x)).sqrt() / (2.0 * PI * p.r * x)
}

/// Density in the angle `x = a + (b - a)(1 - cos t) / 2`, which removes the
/// square-root singularities at the edges.
fn angular_integrand(p: &MPParams, t: f64) -> f64 {
    let half = (p.b - p.a) / 2.0;
    let x = p.a + half * (1.0 - t.cos());
    if x <= 0.0 {
        // Only reachable when a = 0: the limit of the integrand at t = 0.
        return half / (PI * p.r);
    }
    let s = half * t.sin();
    s * s / (2.0 * PI * p.r * x)
}

fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
    (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let (lm, rm) = (0.5 * (lo + mid), 0.5 * (mid + hi));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(lo, mid, flo, flm, fmid);
    let right = simpson(mid, hi, fmid, frm, fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1)
        + adaptive(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1)
}

fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = simpson(lo, hi, flo, fmid, fhi);
    adaptive(&f, lo, hi, flo, fmid, fhi, whole, tol, 40)
}

/// Distribution function including the atom at zero.
pub fn mp_cdf(p: &MPParams, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x <= p.a {
        return p.atom;
    }
    let xc = x.min(p.b);
    let half = (p.b - p.a) / 2.0;
    let t = (1.0 - (xc - p.a) / half).clamp(-1.0, 1.0).acos();
    (p.atom + integrate(|s| angular_integrand(p, s), 0.0, t, 1e-12)).min(1.0)
}

/// Smallest `x` with `mp_cdf(x) >= u`, by bisection.
pub fn mp_quantile(p: &MPParams, u: f64) -> f64 {
    if u <= p.atom {
        return 0.0;
    }
    let (mut lo, mut hi) = (p.a, p.b);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mp_cdf(p, mid) >= u {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    hi
}

/// One-sample Kolmogorov-Smirnov statistic of the sample against the law.
///
/// Both one-sided limits of the empirical distribution are compared at each
/// distinct sample value, so ties and the atom at zero are handled exactly.
pub fn kolmogorov_distance(s: &ESDSample, p: &MPParams) -> Result<f64, RandError> {
    if s.eigenvalues.is_empty() {
        return Err(RandError::EmptySample);
    }
    let mut xs = s.eigenvalues.clone();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = mp_cdf(p, x);
        // The atom makes the law jump at zero.
        let f_left = if x == 0.0 { 0.0 } else { f };
        worst = worst
            .max((j as f64 / n - f).abs())
            .max((i as f64 / n - f_left).abs());
        i = j;
    }
    Ok(worst)
}

/// `max |f(x) - g(x)|` over the given points.
pub fn sup_distance(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, points: &[f64]) -> f64 {
    points.iter().map(|&x| (f(x) - g(x)).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form distribution function for `r = 1`.
    fn cdf_square(x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 4.0 {
            return 1.0;
        }
        ((x * (4.0 - x)).sqrt() + 4.0 * (x.sqrt() / 2.0).asin()) / (2.0 * PI)
    }

    #[test]
    fn density_value() {
        let p = MPParams::square();
        assert!((mp_density(&p, 2.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(mp_density(&p, 5.0), 0.0);
    }

    #[test]
    fn cdf_matches_closed_form() {
        let p = MPParams::square();
        assert_eq!(mp_cdf(&p, 0.0), 0.0);
        assert!((mp_cdf(&p, 4.0) - 1.0).abs() < 1e-10);
        for k in 1..40 {
            let x = 0.1 * k as f64;
            assert!((mp_cdf(&p, x) - cdf_square(x)).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn atom_and_normalization() {
        let p = MPParams::new(2.0).unwrap();
        assert!((p.atom - 0.5).abs() < 1e-15);
        assert!((mp_cdf(&p, 0.0) - 0.5).abs() < 1e-15);
        for r in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = MPParams::new(r).unwrap();
            assert!((mp_cdf(&p, p.b) - 1.0).abs() < 1e-8, "r={r}");
        }
        assert!(MPParams::new(0.0).is_err());
    }

    #[test]
    fn mean_sqrt_of_square_law() {
        // E sqrt(x) = int_0^4 sqrt(x) sqrt((4-x)/x) / (2 pi) dx = 8 / (3 pi).
        let p = MPParams::square();
        let m = integrate(
            |t| {
                let x = 2.0 * (1.0 - f64::cos(t));
                angular_integrand(&p, t) * x.sqrt()
            },
            0.0,
            PI,
            1e-13,
        );
        assert!((m - super::super::MP1_MEAN_SQRT).abs() < 1e-9);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let p = MPParams::square();
        for u in [0.01, 0.3, 0.5, 0.9, 0.999] {
            assert!((mp_cdf(&p, mp_quantile(&p, u)) - u).abs() < 1e-9);
        }
    }

    #[test]
    fn ks_examples() {
        let p = MPParams::square();
        let n = 200;
        let quantiles = (0..n)
            .map(|i| mp_quantile(&p, (i as f64 + 0.5) / n as f64))
            .collect();
        let s = ESDSample {
            d: 0,
            n,
            eigenvalues: quantiles,
            seed: 0,
        };
        assert!(kolmogorov_distance(&s, &p).unwrap() <= 1.0 / n as f64 + 1e-9);
        let zeros = ESDSample {
            d: 0,
            n: 10,
            eigenvalues: vec![0.0; 10],
            seed: 0,
        };
        assert!((kolmogorov_distance(&zeros, &p).unwrap() - 1.0).abs() < 1e-12);
        let empty = ESDSample {
            d: 0,
            n: 0,
            eigenvalues: vec![],
            seed: 0,
        };
        assert!(kolmogorov_distance(&empty, &p).is_err());
        let grid: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        assert_eq!(sup_distance(|x| mp_cdf(&p, x), |x| mp_cdf(&p, x), &grid), 0.0);
    }
}
