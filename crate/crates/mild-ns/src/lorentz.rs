//! Lorentz-space toolkit: distribution function, decreasing rearrangement,
//! maximal function, quasinorms and norms, and interpolation-of-norms checks.
//!
//! Everything is built on step functions, where the defining integrals have
//! closed forms; on sampled fields the rearrangement is the sorted vector of
//! magnitudes with uniform breakpoint spacing `cell_measure`. The only
//! quadrature in the module is the f**-based norm with q outside {1, inf}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::quadrature;

/// A Lorentz exponent: finite value, essential supremum, or true supremum.
///
/// The essential and true supremum coincide on a grid (both are the max over
/// nodes); the distinction is kept for labelling path norms and CLI columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    /// Essential supremum ("inf" token).
    Infinity,
    /// True supremum ("infbar" token).
    Supremum,
}

impl Exponent {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Exponent::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// Holder conjugate p' = p/(p-1); 1 for an infinite exponent.
    pub fn conjugate(&self) -> f64 {
        match self {
            Exponent::Finite(p) => p / (p - 1.0),
            _ => 1.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Exponent::Finite(v) => {
                if (v - v.round()).abs() < 1e-12 {
                    format!("{}", v.round() as i64)
                } else {
                    format!("{v}")
                }
            }
            Exponent::Infinity => "inf".into(),
            Exponent::Supremum => "infbar".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    /// Defined through f*; the starred quantity in the literature.
    Quasinorm,
    /// Defined through f**; requires p > 1.
    Norm,
}

/// Validated Lorentz index (p, q) with the quasinorm-vs-norm flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzIndex {
    p: Exponent,
    q: Exponent,
    kind: NormKind,
}

impl LorentzIndex {
    pub fn new(p: Exponent, q: Exponent, kind: NormKind) -> Result<Self> {
        match p {
            Exponent::Finite(v) => {
                if !(v.is_finite() && v >= 1.0) {
                    return Err(Error::Index(format!("p = {v} outside [1, inf]")));
                }
                if kind == NormKind::Norm && v <= 1.0 {
                    return Err(Error::Index("norm variant requires p > 1".into()));
                }
            }
            Exponent::Infinity | Exponent::Supremum => {
                if !matches!(q, Exponent::Infinity) {
                    return Err(Error::Index("p in {inf, infbar} forces q = inf".into()));
                }
            }
        }
        match q {
            Exponent::Finite(v) if !(v.is_finite() && v >= 1.0) => {
                return Err(Error::Index(format!("q = {v} outside [1, inf]")));
            }
            Exponent::Supremum => {
                return Err(Error::Index("q has no sup variant".into()));
            }
            _ => {}
        }
        Ok(LorentzIndex { p, q, kind })
    }

    pub fn quasinorm(p: f64, q: f64) -> Result<Self> {
        Self::new(
            Exponent::Finite(p),
            Exponent::Finite(q),
            NormKind::Quasinorm,
        )
    }

    pub fn weak(p: f64) -> Result<Self> {
        Self::new(Exponent::Finite(p), Exponent::Infinity, NormKind::Quasinorm)
    }

    pub fn norm(p: f64, q: f64) -> Result<Self> {
        Self::new(Exponent::Finite(p), Exponent::Finite(q), NormKind::Norm)
    }

    pub fn sup() -> Self {
        LorentzIndex {
            p: Exponent::Supremum,
            q: Exponent::Infinity,
            kind: NormKind::Quasinorm,
        }
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn label(&self) -> String {
        let kind = match self.kind {
            NormKind::Quasinorm => "q",
            NormKind::Norm => "n",
        };
        format!("{}_{}_{}", self.p.label(), self.q.label(), kind)
    }
}

/// The decreasing rearrangement f* as a right-continuous step function:
/// value `values[j]` on [t_{j-1}, t_j) with t_0 = 0, zero beyond the last
/// breakpoint.
#[derive(Clone, Debug)]
pub struct Rearrangement {
    /// Strictly increasing positive breakpoints t_1 < ... < t_M.
    breakpoints: Vec<f64>,
    /// Strictly decreasing positive values v_1 > ... > v_M (ties merged).
    values: Vec<f64>,
    /// cumulative[j] = integral of f* over (0, t_{j+1}).
    cumulative: Vec<f64>,
}

impl Rearrangement {
    /// Build from unordered (value, measure) pieces; zero values are dropped
    /// and equal values merged.
    pub fn from_pieces(pieces: &[(f64, f64)]) -> Self {
        let mut sorted: Vec<(f64, f64)> = pieces
            .iter()
            .copied()
            .filter(|&(v, m)| v > 0.0 && m > 0.0)
            .collect();
        sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut breakpoints = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut t = 0.0;
        for (v, m) in sorted {
            t += m;
            if let Some(last) = values.last() {
                if *last == v {
                    *breakpoints.last_mut().unwrap() = t;
                    continue;
                }
            }
            breakpoints.push(t);
            values.push(v);
        }
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (t, v) in breakpoints.iter().zip(&values) {
            acc += v * (t - prev);
            prev = *t;
            cumulative.push(acc);
        }
        Rearrangement {
            breakpoints,
            values,
            cumulative,
        }
    }

    /// Rearrangement of the pointwise magnitude of a sampled field; every
    /// nonzero sample contributes one piece of measure `cell_measure`.
    pub fn from_field(field: &Field) -> Self {
        let mag = field.magnitude();
        let cell = field.grid().cell_measure();
        let mut samples: Vec<f64> = mag
            .component(0)
            .iter()
            .copied()
            .filter(|&v| v > 0.0)
            .collect();
        // stable descending sort; ties collapse into one piece anyway
        samples.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut breakpoints = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut count = 0usize;
        for v in samples {
            count += 1;
            if let Some(last) = values.last() {
                if *last == v {
                    *breakpoints.last_mut().unwrap() = count as f64 * cell;
                    continue;
                }
            }
            breakpoints.push(count as f64 * cell);
            values.push(v);
        }
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (t, v) in breakpoints.iter().zip(&values) {
            acc += v * (t - prev);
            prev = *t;
            cumulative.push(acc);
        }
        Rearrangement {
            breakpoints,
            values,
            cumulative,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Measure of the support of f*.
    pub fn total_measure(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// Integral of f* over (0, inf) (= the L^1 norm).
    pub fn total_integral(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// f*(t), right-continuous.
    pub fn value_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.max_value();
        }
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&t).unwrap())
        {
            // t == t_j: the piece to the right
            Ok(j) => self.values.get(j + 1).copied().unwrap_or(0.0),
            Err(j) => self.values.get(j).copied().unwrap_or(0.0),
        }
    }

    /// Distribution function lambda(y) = |{ f* > y }|, exact on step data.
    pub fn distribution(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!(
                "distribution function needs y > 0, got {y}"
            )));
        }
        let mut measure = 0.0;
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            if *v > y {
                measure = *t;
            } else {
                break;
            }
        }
        Ok(measure)
    }

    /// Integral of f* over (0, t).
    pub fn integral_up_to(&self, t: f64) -> f64 {
        if t <= 0.0 || self.values.is_empty() {
            return 0.0;
        }
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&t).unwrap())
        {
            Ok(j) => self.cumulative[j],
            Err(j) => {
                if j >= self.values.len() {
                    self.total_integral()
                } else {
                    let prev_t = if j == 0 { 0.0 } else { self.breakpoints[j - 1] };
                    let prev_c = if j == 0 { 0.0 } else { self.cumulative[j - 1] };
                    prev_c + self.values[j] * (t - prev_t)
                }
            }
        }
    }

    /// Maximal function f**(t) = (1/t) int_0^t f*.
    pub fn maximal(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "maximal function needs t > 0, got {t}"
            )));
        }
        Ok(self.integral_up_to(t) / t)
    }
}

/// Exact distribution function of a sampled field:
/// `cell_measure * #{ |f| > y }`.
pub fn distribution_function(field: &Field, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!(
            "distribution function needs y > 0, got {y}"
        )));
    }
    let mag = field.magnitude();
    let count = mag.component(0).iter().filter(|&&v| v > y).count();
    Ok(count as f64 * field.grid().cell_measure())
}

pub fn decreasing_rearrangement(field: &Field) -> Rearrangement {
    Rearrangement::from_field(field)
}

pub fn maximal_function(r: &Rearrangement, t: f64) -> Result<f64> {
    r.maximal(t)
}

/// Lorentz quasinorm or norm of a rearrangement, per the index kind.
pub fn lorentz_value(r: &Rearrangement, idx: &LorentzIndex) -> Result<f64> {
    match idx.kind {
        NormKind::Quasinorm => quasinorm_value(r, idx),
        NormKind::Norm => norm_value(r, idx),
    }
}

fn quasinorm_value(r: &Rearrangement, idx: &LorentzIndex) -> Result<f64> {
    if r.is_zero() {
        return Ok(0.0);
    }
    let p = match idx.p {
        Exponent::Finite(p) => p,
        // ess-sup and true sup coincide on step data
        _ => return Ok(r.max_value()),
    };
    match idx.q {
        Exponent::Finite(q) => {
            // (q/p) int t^{q/p - 1} v^q dt integrates to v^q t^{q/p} per piece
            let e = q / p;
            let mut sum = 0.0;
            let mut prev = 0.0;
            for (t, v) in r.breakpoints.iter().zip(&r.values) {
                sum += v.powf(q) * (t.powf(e) - prev);
                prev = t.powf(e);
            }
            Ok(sum.powf(1.0 / q))
        }
        Exponent::Infinity => {
            // sup of t^{1/p} v on each piece sits at the right endpoint
            let mut best: f64 = 0.0;
            for (t, v) in r.breakpoints.iter().zip(&r.values) {
                best = best.max(t.powf(1.0 / p) * v);
            }
            Ok(best)
        }
        Exponent::Supremum => unreachable!("validated by LorentzIndex::new"),
    }
}

fn norm_value(r: &Rearrangement, idx: &LorentzIndex) -> Result<f64> {
    if r.is_zero() {
        return Ok(0.0);
    }
    let p = match idx.p {
        Exponent::Finite(p) => p,
        // sup of f** is its limit at 0+, the largest value
        _ => return Ok(r.max_value()),
    };
    let t_last = r.total_measure();
    let total = r.total_integral();
    match idx.q {
        Exponent::Infinity => {
            // t^{1/p} f**(t) has no interior maxima on pieces; check breakpoints
            let mut best: f64 = 0.0;
            for t in &r.breakpoints {
                best = best.max(t.powf(1.0 / p) * r.maximal(*t)?);
            }
            Ok(best)
        }
        Exponent::Finite(1.0) => {
            // per piece f**(t) = A/t + v with A = cumulative offset
            let mut sum = 0.0;
            let mut prev_t = 0.0;
            let mut prev_c = 0.0;
            for (t, v) in r.breakpoints.iter().zip(&r.values) {
                let a = prev_c - v * prev_t;
                sum += piece_norm_q1(p, a, *v, prev_t, *t);
                prev_c += v * (t - prev_t);
                prev_t = *t;
            }
            // tail: f** = total/t beyond the support
            sum += total * t_last.powf(1.0 / p - 1.0) / (p - 1.0);
            Ok(sum)
        }
        Exponent::Finite(q) => {
            let e = q / p;
            // first piece is constant: closed form
            let mut sum = r.values[0].powf(q) * r.breakpoints[0].powf(e);
            let mut prev_t = r.breakpoints[0];
            let mut prev_c = r.cumulative[0];
            for j in 1..r.values.len() {
                let (t, v) = (r.breakpoints[j], r.values[j]);
                let a = prev_c - v * prev_t;
                let integrand = |s: f64| {
                    let fss = a / s + v;
                    e * s.powf(e - 1.0) * fss.powf(q)
                };
                sum += quadrature::integrate(&integrand, prev_t, t, 1e-10);
                prev_c += v * (t - prev_t);
                prev_t = t;
            }
            sum += total.powf(q) * t_last.powf(q * (1.0 / p - 1.0)) / (p - 1.0);
            Ok(sum.powf(1.0 / q))
        }
        Exponent::Supremum => unreachable!("validated by LorentzIndex::new"),
    }
}

/// (1/p) int_a^b t^{1/p - 1} (A/t + v) dt in closed form.
fn piece_norm_q1(p: f64, a_coef: f64, v: f64, a: f64, b: f64) -> f64 {
    let s = 1.0 / p;
    let pow = |t: f64, e: f64| if t == 0.0 { 0.0 } else { t.powf(e) };
    let term_a = if a == 0.0 && s - 1.0 < 0.0 && a_coef == 0.0 {
        0.0
    } else {
        a_coef * (pow(b, s - 1.0) - pow(a, s - 1.0)) / (s - 1.0)
    };
    let term_v = v * (pow(b, s) - pow(a, s)) / s;
    (term_a + term_v) / p
}

/// Convenience wrappers on sampled fields.
pub fn field_lorentz(field: &Field, idx: &LorentzIndex) -> Result<f64> {
    lorentz_value(&Rearrangement::from_field(field), idx)
}

pub fn field_quasinorm(field: &Field, p: f64, q: f64) -> Result<f64> {
    field_lorentz(field, &LorentzIndex::quasinorm(p, q)?)
}

#[derive(Clone, Copy, Debug)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs; the inequality holds when this is >= -1e-10.
    pub margin: f64,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct InterpolationReport {
    /// Weak-norm interpolation at the interpolated exponent.
    pub weak: BoundCheck,
    /// L^{p,1} bound with its explicit constant.
    pub strong: BoundCheck,
    pub p: f64,
}

/// Both interpolation-of-norms inequalities for 1/p = (1-theta)/p0 + theta/p1,
/// evaluated with quasinorms (valid for p0 >= 1).
pub fn interpolation_check(
    field: &Field,
    p0: f64,
    p1: Exponent,
    theta: f64,
) -> Result<InterpolationReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, 1)")));
    }
    let p1v = match p1 {
        Exponent::Finite(v) => v,
        _ => f64::INFINITY,
    };
    if !(p0 >= 1.0 && p1v > p0) {
        return Err(Error::Domain(format!(
            "need 1 <= p0 < p1, got p0 = {p0}, p1 = {p1v}"
        )));
    }
    let inv_p1 = if p1v.is_infinite() { 0.0 } else { 1.0 / p1v };
    let p = 1.0 / ((1.0 - theta) / p0 + theta * inv_p1);

    let r = Rearrangement::from_field(field);
    let weak_p0 = quasinorm_value(&r, &LorentzIndex::weak(p0)?)?;
    let weak_p1 = if p1v.is_infinite() {
        r.max_value()
    } else {
        quasinorm_value(&r, &LorentzIndex::weak(p1v)?)?
    };
    let product = weak_p0.powf(1.0 - theta) * weak_p1.powf(theta);

    let weak_p = quasinorm_value(&r, &LorentzIndex::weak(p)?)?;
    let weak = BoundCheck::new(weak_p, product);

    let strong_lhs = quasinorm_value(&r, &LorentzIndex::quasinorm(p, 1.0)?)?;
    let denom = p * (1.0 / p0 - inv_p1) * theta.powf(1.0 - theta) * (1.0 - theta).powf(theta);
    let strong = BoundCheck::new(strong_lhs, 2.0 * product / denom);

    Ok(InterpolationReport { weak, strong, p })
}

/// Lebesgue measure of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
pub fn unit_ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / libm::tgamma(n as f64 / 2.0 + 1.0)
}
