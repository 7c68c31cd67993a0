//! One-dimensional minimization: golden-section search on a bracket, an
//! outward doubling bracket for convex functions, and a grid pre-scan.

/// `2 - phi = 1/phi^2`, the golden interior fraction.
const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy)]
pub struct GoldenSection {
    /// Stop once the bracket is narrower than this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iter: 500,
        }
    }
}

/// Result of a bracketed search. `lo..hi` is the final bracket.
#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

impl GoldenSection {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    /// Minimizes a unimodal `f` on `[lo, hi]`.
    pub fn minimize(&self, mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> Minimum {
        let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mut c = a + INV_PHI_SQ * (b - a);
        let mut d = b - INV_PHI_SQ * (b - a);
        let mut fc = f(c);
        let mut fd = f(d);
        let mut iterations = 0;
        while b - a > self.tolerance && iterations < self.max_iter {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = a + INV_PHI_SQ * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = b - INV_PHI_SQ * (b - a);
                fd = f(d);
            }
            iterations += 1;
        }
        let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
        Minimum {
            x,
            value,
            lo: a,
            hi: b,
            iterations,
        }
    }

    /// Scans `points` evenly spaced samples on `[lo, hi]`, then refines
    /// around the best sample. Guards against a non-unimodal `f`.
    pub fn minimize_after_grid(
        &self,
        mut f: impl FnMut(f64) -> f64,
        lo: f64,
        hi: f64,
        points: usize,
    ) -> Minimum {
        let points = points.max(3);
        let step = (hi - lo) / (points - 1) as f64;
        let (best, _) = (0..points)
            .map(|k| (k, f(lo + step * k as f64)))
            .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
        let a = lo + step * best.saturating_sub(1) as f64;
        let b = (lo + step * (best + 1) as f64).min(hi);
        self.minimize(f, a, b)
    }
}

/// Central-difference slope with step `h`.
pub fn central_slope(f: &mut impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Brackets the minimizer of a convex `f` that grows at both ends: doubles
/// outward from zero until the slope is positive on the right and negative
/// on the left. `None` if `max_doublings` is not enough.
pub fn convex_bracket(
    mut f: impl FnMut(f64) -> f64,
    initial_step: f64,
    max_doublings: usize,
) -> Option<(f64, f64)> {
    let mut hi = initial_step;
    let mut found = false;
    for _ in 0..max_doublings {
        if central_slope(&mut f, hi, 1e-3 * hi) > 0.0 {
            found = true;
            break;
        }
        hi *= 2.0;
    }
    if !found {
        return None;
    }
    let mut lo = -initial_step;
    for _ in 0..max_doublings {
        if central_slope(&mut f, lo, 1e-3 * lo.abs()) < 0.0 {
            return Some((lo, hi));
        }
        lo *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = GoldenSection::new(1e-12).minimize(|x| (x - 0.3) * (x - 0.3) + 1.0, -2.0, 5.0);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kinked_minimum_is_located_tightly() {
        let m = GoldenSection::new(1e-12).minimize(|x: f64| (x - 1.25).abs(), -10.0, 10.0);
        assert!((m.x - 1.25).abs() < 1e-11);
    }

    #[test]
    fn grid_escapes_local_minimum() {
        // two wells; the deeper one sits at x = 3
        let f = |x: f64| ((x + 1.0).powi(2)).min((x - 3.0).powi(2) - 0.5);
        let m = GoldenSection::new(1e-10).minimize_after_grid(f, -4.0, 6.0, 1000);
        assert!((m.x - 3.0).abs() < 1e-5);
    }

    #[test]
    fn bracket_for_asymmetric_convex_function() {
        let f = |x: f64| if x < 40.0 { 0.8 * (40.0 - x) } else { 0.2 * (x - 40.0) };
        let (lo, hi) = convex_bracket(f, 1.0, 60).unwrap();
        assert!(lo < 40.0 && hi > 40.0);
        assert!(convex_bracket(|x: f64| -x.abs(), 1.0, 10).is_none());
    }
}
