use num_complex::Complex64;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::ExplicitError;
use crate::specfun::log_gamma;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// z ↦ ∫ f″(w) w^{z+1} dw over [max(a, 0), b).
pub type Moments = Arc<dyn Fn(Complex64) -> Result<Complex64, ExplicitError> + Send + Sync>;

/// A weight f supported on [a, b) with scale η.
///
/// The caller guarantees f ∈ C¹(a, b), f′ absolutely continuous and
/// f(b⁻) = f′(b⁻) = 0. Outside [a, b) all evaluators return 0; at a they
/// return the right limits.
#[derive(Clone)]
pub struct WeightSpec {
    a: f64,
    b: f64,
    eta: f64,
    f: RealFn,
    f_prime: RealFn,
    f_second: RealFn,
    moments: Option<Moments>,
    second_nonnegative: bool,
    label: String,
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSpec")
            .field("label", &self.label)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("eta", &self.eta)
            .field("closed_form_moments", &self.moments.is_some())
            .finish()
    }
}

impl WeightSpec {
    pub fn new(a: f64, b: f64, eta: f64, f: RealFn, f_prime: RealFn, f_second: RealFn) -> Result<Self, ExplicitError> {
        if !(a < b) || a.is_nan() || !a.is_finite() {
            return Err(ExplicitError::InvalidArgument(format!("support [{a}, {b}) is empty or unbounded below")));
        }
        super::positive("eta", eta)?;
        Ok(Self {
            a,
            b,
            eta,
            f,
            f_prime,
            f_second,
            moments: None,
            second_nonnegative: false,
            label: "custom".into(),
        })
    }

    /// Attaches closed-form moments I(z) = ∫ f″(w) w^{z+1} dw.
    pub fn with_moments(mut self, moments: Moments) -> Self {
        self.moments = Some(moments);
        self
    }

    /// f(w) = (b - w)^p on [a, b), p ≥ 2.
    pub fn power_bump(a: f64, b: f64, eta: f64, p: u32) -> Result<Self, ExplicitError> {
        if p < 2 {
            return Err(ExplicitError::InvalidArgument(format!("power bump needs p >= 2, got {p}")));
        }
        if !b.is_finite() {
            return Err(ExplicitError::InvalidArgument("power bump needs finite b".into()));
        }
        let pf = p as f64;
        let mut spec = Self::new(
            a,
            b,
            eta,
            Arc::new(move |w| (b - w).powi(p as i32)),
            Arc::new(move |w| -pf * (b - w).powi(p as i32 - 1)),
            Arc::new(move |w| pf * (pf - 1.0) * (b - w).powi(p as i32 - 2)),
        )?;
        let lo = a.max(0.0);
        spec.moments = Some(Arc::new(move |z| Ok(pf * (pf - 1.0) * bump_moment(b, lo, p - 2, z + 1.0))));
        spec.second_nonnegative = true;
        spec.label = format!("power_bump(p={p})");
        Ok(spec)
    }

    /// f(w) = e^{-wηy} on [0, ∞); then Σ_n S(n) f(n/η) = Σ_n S(n)e^{-ny}.
    pub fn exponential(eta: f64, y: f64) -> Result<Self, ExplicitError> {
        super::positive("y", y)?;
        let k = eta * y;
        let mut spec = Self::new(
            0.0,
            f64::INFINITY,
            eta,
            Arc::new(move |w| (-w * k).exp()),
            Arc::new(move |w| -k * (-w * k).exp()),
            Arc::new(move |w| k * k * (-w * k).exp()),
        )?;
        let ln_k = k.ln();
        // ∫₀^∞ k² e^{-kw} w^{z+1} dw = Γ(z+2) k^{-z}
        spec.moments = Some(Arc::new(move |z| Ok((log_gamma(z + 2.0)? - z * ln_k).exp())));
        spec.second_nonnegative = true;
        spec.label = format!("exponential(y={y})");
        Ok(spec)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// η·a ≥ 1: the boundary (extra) term is present.
    pub fn has_extra_term(&self) -> bool {
        self.eta * self.a >= 1.0
    }

    fn inside(&self, w: f64) -> bool {
        w >= self.a && w < self.b
    }

    pub fn f(&self, w: f64) -> f64 {
        if self.inside(w) {
            (self.f)(w)
        } else {
            0.0
        }
    }

    pub fn f_prime(&self, w: f64) -> f64 {
        if self.inside(w) {
            (self.f_prime)(w)
        } else {
            0.0
        }
    }

    pub fn f_second(&self, w: f64) -> f64 {
        if self.inside(w) {
            (self.f_second)(w)
        } else {
            0.0
        }
    }

    /// I(z) = ∫ f″(w) w^{z+1} dw over [max(a, 0), b), closed form when
    /// available and adaptive Gauss–Legendre otherwise.
    pub fn moment(&self, z: Complex64) -> Result<Complex64, ExplicitError> {
        if let Some(m) = &self.moments {
            return m(z);
        }
        if !self.b.is_finite() {
            return Err(ExplicitError::UnboundedSupport);
        }
        let lo = self.a.max(0.0);
        if lo >= self.b {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let f2 = &self.f_second;
        integrate_complex(|w| if w > 0.0 { f2(w) * ((z + 1.0) * w.ln()).exp() } else { Complex64::new(0.0, 0.0) }, lo, self.b, z.im)
    }

    /// ∫ |f″(w)| w^q dw over [max(a, 0), b).
    pub fn abs_moment(&self, q: f64) -> Result<f64, ExplicitError> {
        if self.second_nonnegative {
            if let Some(m) = &self.moments {
                return Ok(m(Complex64::new(q - 1.0, 0.0))?.re);
            }
        }
        if !self.b.is_finite() {
            return Err(ExplicitError::UnboundedSupport);
        }
        let lo = self.a.max(0.0);
        if lo >= self.b {
            return Ok(0.0);
        }
        let f2 = &self.f_second;
        Ok(integrate_complex(|w| Complex64::new(f2(w).abs() * w.powf(q), 0.0), lo, self.b, 0.0)?.re)
    }
}

/// J_m(z) = ∫_lo^b (b - w)^m w^z dw by integration by parts,
/// J_m(z) = -(b - lo)^m lo^{z+1}/(z+1) + m/(z+1) · J_{m-1}(z+1).
fn bump_moment(b: f64, lo: f64, m: u32, z: Complex64) -> Complex64 {
    let pow = |x: f64, e: Complex64| if x > 0.0 { (e * x.ln()).exp() } else { Complex64::new(0.0, 0.0) };
    if m == 0 {
        return (pow(b, z + 1.0) - pow(lo, z + 1.0)) / (z + 1.0);
    }
    let boundary = -(b - lo).powi(m as i32) * pow(lo, z + 1.0) / (z + 1.0);
    boundary + m as f64 / (z + 1.0) * bump_moment(b, lo, m - 1, z + 1.0)
}

const GL_POINTS: usize = 20;
const QUAD_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 40;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        (0..n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

fn gl_panel<F: Fn(f64) -> Complex64>(f: &F, lo: f64, hi: f64) -> Complex64 {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    gauss_legendre().iter().map(|&(x, w)| f(mid + half * x) * w).sum::<Complex64>() * half
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    lo: f64,
    hi: f64,
    whole: Complex64,
    atol: f64,
    depth: u32,
) -> Result<Complex64, ExplicitError> {
    let mid = 0.5 * (lo + hi);
    let left = gl_panel(f, lo, mid);
    let right = gl_panel(f, mid, hi);
    let split = left + right;
    if (split - whole).norm() <= (QUAD_TOL * split.norm()).max(atol) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(ExplicitError::Quadrature { lo, hi });
    }
    Ok(adaptive(f, lo, mid, left, atol, depth + 1)? + adaptive(f, mid, hi, right, atol, depth + 1)?)
}

/// ∫_lo^hi f on panels sized so that w^{i·freq} turns by at most one radian
/// per panel, each refined adaptively.
fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64, freq: f64) -> Result<Complex64, ExplicitError> {
    let start = if lo > 0.0 { lo } else { hi * 1e-14 };
    let turns = freq.abs() * (hi / start).ln();
    let geometric = (turns.ceil() as usize).clamp(1, 1 << 20);
    let mut edges = Vec::with_capacity(geometric + 2);
    if lo <= 0.0 {
        edges.push(0.0);
    }
    let ratio = (hi / start).powf(1.0 / geometric as f64);
    let mut w = start;
    for _ in 0..geometric {
        edges.push(w);
        w *= ratio;
    }
    edges.push(hi);
    let wholes: Vec<Complex64> = edges.windows(2).map(|p| gl_panel(&f, p[0], p[1])).collect();
    let atol = QUAD_TOL * wholes.iter().map(|z| z.norm()).sum::<f64>() / wholes.len() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (pair, &whole) in edges.windows(2).zip(&wholes) {
        total += adaptive(&f, pair[0], pair[1], whole, atol, 0)?;
    }
    Ok(total)
}
