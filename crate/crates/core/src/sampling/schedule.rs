use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interpolation profile `f` on `[0, 1]` of an adiabatic path
/// `H(t) = H_0 + f(t/T) H_1`, with `z(s) = ∫_0^s f` and its inverse.
#[derive(Clone)]
pub struct AdiabaticSchedule {
    total_time: f64,
    profile: Profile,
}

#[derive(Clone)]
enum Profile {
    Linear,
    Constant(f64),
    Tabulated(Arc<Tabulated>),
}

struct Tabulated {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    cumulative: Vec<f64>,
}

const GRID: usize = 1024;

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

impl Tabulated {
    fn z(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let k = ((s * GRID as f64) as usize).min(GRID - 1);
        let left = k as f64 / GRID as f64;
        self.cumulative[k] + gauss_legendre(&*self.f, left, s)
    }
}

impl AdiabaticSchedule {
    /// `f(s) = s`, so `z(s) = s^2 / 2` and `z^{-1}(u) = sqrt(2u)`.
    pub fn linear(total_time: f64) -> Result<Self> {
        Self::with_profile(total_time, Profile::Linear)
    }

    /// `f(s) = value`. `value = 0` yields a schedule with no interaction.
    pub fn constant(total_time: f64, value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "schedule value {value} must be finite and non-negative"
            )));
        }
        Self::with_profile(total_time, Profile::Constant(value))
    }

    /// Arbitrary non-negative profile, integrated numerically.
    pub fn from_fn(total_time: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        for k in 0..=4 * GRID {
            let s = k as f64 / (4 * GRID) as f64;
            let v = f(s);
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "schedule profile is not invertible: f({s}) = {v}"
                )));
            }
        }
        let mut cumulative = Vec::with_capacity(GRID + 1);
        cumulative.push(0.0);
        for k in 0..GRID {
            let a = k as f64 / GRID as f64;
            let b = (k + 1) as f64 / GRID as f64;
            let next = cumulative[k] + gauss_legendre(&f, a, b);
            cumulative.push(next);
        }
        Self::with_profile(
            total_time,
            Profile::Tabulated(Arc::new(Tabulated {
                f: Box::new(f),
                cumulative,
            })),
        )
    }

    fn with_profile(total_time: f64, profile: Profile) -> Result<Self> {
        if !(total_time >= 0.0 && total_time.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "adiabatic time {total_time} must be finite and non-negative"
            )));
        }
        Ok(AdiabaticSchedule {
            total_time,
            profile,
        })
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn f(&self, s: f64) -> f64 {
        match &self.profile {
            Profile::Linear => s,
            Profile::Constant(c) => *c,
            Profile::Tabulated(t) => (t.f)(s),
        }
    }

    pub fn z(&self, s: f64) -> f64 {
        match &self.profile {
            Profile::Linear => s * s / 2.0,
            Profile::Constant(c) => c * s,
            Profile::Tabulated(t) => t.z(s),
        }
    }

    pub fn z1(&self) -> f64 {
        self.z(1.0)
    }

    /// Inverse of `z` on `[0, z(1)]`.
    pub fn z_inv(&self, u: f64) -> f64 {
        match &self.profile {
            Profile::Linear => (2.0 * u.max(0.0)).sqrt().min(1.0),
            Profile::Constant(c) => {
                if *c > 0.0 {
                    (u / c).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            Profile::Tabulated(t) => {
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if t.z(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

impl fmt::Debug for AdiabaticSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.profile {
            Profile::Linear => "linear".to_string(),
            Profile::Constant(c) => format!("constant({c})"),
            Profile::Tabulated(_) => "tabulated".to_string(),
        };
        f.debug_struct("AdiabaticSchedule")
            .field("total_time", &self.total_time)
            .field("profile", &kind)
            .finish()
    }
}
