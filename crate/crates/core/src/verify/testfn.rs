use rand::Rng;

use crate::model::{Point, Solution};

/// `exp(1 - 1/(1 - s^2))` on `|s| < 1`, zero outside. Peak value 1.
pub fn bump(s: f64) -> f64 {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / q).exp()
    }
}

pub fn bump_prime(s: f64) -> f64 {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        0.0
    } else {
        -2.0 * s / (q * q) * (1.0 - 1.0 / q).exp()
    }
}

/// Integral of [`bump`] over `[-1, 1]`.
pub const BUMP_MASS: f64 = 1.206_900_322_437_874_3;

/// Tensor-product bump `b((t - tc)/st) b((x - xc)/sx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub center: Point,
    pub st: f64,
    pub sx: f64,
}

impl TestFunction {
    pub fn new(center: Point, st: f64, sx: f64) -> Self {
        Self { center, st, sx }
    }

    fn coords(&self, t: f64, x: f64) -> (f64, f64) {
        ((t - self.center.t) / self.st, (x - self.center.x) / self.sx)
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        let (a, b) = self.coords(t, x);
        bump(a) * bump(b)
    }

    /// `(phi_t, phi_x)`
    pub fn grad(&self, t: f64, x: f64) -> (f64, f64) {
        let (a, b) = self.coords(t, x);
        let (ba, bb) = (bump(a), bump(b));
        (bump_prime(a) * bb / self.st, ba * bump_prime(b) / self.sx)
    }

    /// Time support clipped to `t >= 0`.
    pub fn t_support(&self) -> (f64, f64) {
        ((self.center.t - self.st).max(0.0), self.center.t + self.st)
    }

    pub fn x_support(&self) -> (f64, f64) {
        (self.center.x - self.sx, self.center.x + self.sx)
    }

    pub fn touches_initial_line(&self) -> bool {
        self.center.t - self.st < 0.0
    }

    /// `int_{t >= 0} sup_x |phi| dt`, the size used to normalize residuals.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.t_support();
        if lo == self.center.t - self.st {
            return self.st * BUMP_MASS;
        }
        let r = crate::quad::integrate_scalar(
            |t| bump((t - self.center.t) / self.st),
            lo,
            hi,
            crate::quad::Tolerance::new(1e-14, 1e-12),
        );
        r.value[0]
    }
}

/// Seeded random test functions for a solution: centers at events, on
/// fronts, or anywhere in the strip `0 < t <= horizon`, with time and space
/// scales spread over two decades.
pub fn random_tests<R: Rng>(sol: &Solution, n: usize, horizon: f64, rng: &mut R) -> Vec<TestFunction> {
    let events: Vec<Point> = sol.events.iter().map(|e| e.point).filter(|p| p.t <= horizon).collect();
    let fronts: Vec<usize> = sol.fronts.iter().filter(|f| f.t_start < horizon && f.t_end.is_none_or(|e| e > f.t_start)).map(|f| f.id).collect();
    let (xa, xb) = sol.scenario.jump_positions();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let anchor = match rng.gen_range(0..3) {
            0 if !events.is_empty() => events[rng.gen_range(0..events.len())],
            1 if !fronts.is_empty() => {
                let f = sol.front(fronts[rng.gen_range(0..fronts.len())]);
                let hi = f.t_end.unwrap_or(horizon).min(horizon);
                let t = f.t_start + (hi - f.t_start) * rng.gen::<f64>();
                if t <= 0.0 {
                    continue;
                }
                f.geometry.point_at(t)
            }
            _ => {
                let t = horizon * rng.gen::<f64>();
                let x = xa - 2.0 + (xb - xa + 4.0 + 6.0 * t) * rng.gen::<f64>() - 1.0 * t;
                Point::new(t, x)
            }
        };
        let scale = (0.5 * anchor.t).max(1.0);
        let st = scale * 10f64.powf(rng.gen_range(-2.0..0.0));
        let sx = scale * 10f64.powf(rng.gen_range(-2.0..0.0));
        let center = Point::new(
            (anchor.t + st * rng.gen_range(-0.5..0.5)).max(1e-3),
            anchor.x + sx * rng.gen_range(-0.5..0.5),
        );
        out.push(TestFunction::new(center, st, sx));
    }
    out
}

/// Test function centered on front `id` halfway through its life (one time
/// unit after birth for fronts that never end), supported inside that life
/// and much wider in `x` than the distance the front travels across it.
/// `None` for fronts of zero length.
pub fn front_probe(sol: &Solution, id: usize) -> Option<TestFunction> {
    let f = sol.front(id);
    let life = f.t_end.map_or(2.0, |e| e - f.t_start);
    if !(life > 0.0) {
        return None;
    }
    let tc = f.t_start + 0.5 * life.min(2.0);
    let st = 0.45 * life.min(2.0);
    let sx = 20.0 * f.geometry.slope_at(tc).abs().max(1.0) * st;
    Some(TestFunction::new(f.geometry.point_at(tc), st, sx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_scalar, Tolerance};

    #[test]
    fn bump_mass_constant() {
        let r = integrate_scalar(bump, -1.0, 1.0, Tolerance::new(1e-15, 1e-14));
        assert!((r.value[0] - BUMP_MASS).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let phi = TestFunction::new(Point::new(1.0, 2.0), 0.7, 0.3);
        let h = 1e-6;
        for &(t, x) in &[(1.1, 2.05), (0.6, 1.8), (1.5, 2.2)] {
            let (pt, px) = phi.grad(t, x);
            let ft = (phi.value(t + h, x) - phi.value(t - h, x)) / (2.0 * h);
            let fx = (phi.value(t, x + h) - phi.value(t, x - h)) / (2.0 * h);
            assert!((pt - ft).abs() < 1e-7 && (px - fx).abs() < 1e-7);
        }
    }

    #[test]
    fn norm_of_interior_bump() {
        let phi = TestFunction::new(Point::new(2.0, 0.0), 0.5, 3.0);
        assert!((phi.norm() - 0.5 * BUMP_MASS).abs() < 1e-15);
        let cut = TestFunction::new(Point::new(0.0, 0.0), 0.5, 3.0);
        assert!((cut.norm() - 0.25 * BUMP_MASS).abs() < 1e-12);
    }
}
