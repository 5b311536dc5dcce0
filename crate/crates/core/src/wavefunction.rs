//! Assembly of `psi(x) = prod_k base_k(x)^e_k * exp(C y(x)) * P_n(y(x))`.

use crate::catalog::{Base, Domain, Model, ModelId, Variable};
use crate::error::{QhjError, Result};
use crate::exact::Scalar;
use crate::pencil::PolynomialOnT;
use crate::quantization::Assignment;
use crate::special::{jacobi_polynomial, jacobi_sn_cn_dn, laguerre};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// One prefactor `base(x)^exponent`.
#[derive(Clone, Debug)]
pub struct Prefactor {
    pub base: Base,
    pub exponent: Scalar,
}

/// Everything needed to evaluate an analytic eigenfunction.
#[derive(Clone, Debug)]
pub struct WavefunctionRecipe {
    pub model: ModelId,
    pub variable: Variable,
    pub domain: Domain,
    pub prefactors: Vec<Prefactor>,
    /// `C` in `exp(C y(x))`, absent when zero.
    pub exponential: Option<Complex64>,
    pub polynomial: PolynomialOnT,
    pub energy: Complex64,
}

/// Boundary behaviour of a sampled state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcTag {
    Dirichlet,
    Periodic,
    Antiperiodic,
    Decaying,
    PtSymmetric,
}

/// How samples are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    SupNormOne,
    L2One,
}

/// `psi` on a grid.
#[derive(Clone, Debug)]
pub struct SampledWavefunction {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub normalization: Normalization,
    pub zero_locations: Vec<f64>,
}

/// Zero bookkeeping: zeros of `P_n` counted by degree plus zeros of the prefactors in one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub polynomial: usize,
    pub prefactor: usize,
    pub total: usize,
}

/// `x^e` keeping the sign of negative real bases when `e` is an integer.
fn power(base: Complex64, e: &Scalar) -> Result<Complex64> {
    if e.is_zero() {
        return Ok(c(1.0));
    }
    if e.is_integer(0.0) || (e.im() == 0.0 && e.re().fract() == 0.0) {
        let k = e.re() as i32;
        if k < 0 && base.norm() == 0.0 {
            return Err(QhjError::Singular(format!("0^{k} in a prefactor")));
        }
        return Ok(base.powi(k));
    }
    if base.norm() == 0.0 {
        return if e.re() > 0.0 {
            Ok(c(0.0))
        } else {
            Err(QhjError::Singular(format!("0^({e}) in a prefactor")))
        };
    }
    if base.im == 0.0 && base.re > 0.0 && e.im() == 0.0 {
        return Ok(c(base.re.powf(e.re())));
    }
    Ok(base.powc(e.value))
}

impl WavefunctionRecipe {
    /// Recipe for a solved assignment.
    pub fn new(model: &Model, a: &Assignment, polynomial: PolynomialOnT, energy: Complex64) -> Self {
        let prefactors = model
            .prefactor_exponents(&a.residues)
            .into_iter()
            .map(|(base, exponent)| Prefactor { base, exponent })
            .collect();
        Self {
            model: model.id,
            variable: model.variable,
            domain: model.domain,
            prefactors,
            exponential: (!a.a0.is_negligible(0.0)).then_some(a.a0.value),
            polynomial,
            energy,
        }
    }

    fn base_value(&self, base: Base, x: Complex64, y: Complex64) -> Result<Complex64> {
        Ok(match base {
            Base::Y => y,
            Base::OneMinusY => 1.0 - y,
            Base::OnePlusY => 1.0 + y,
            Base::AbsSin => c(x.sin().norm()),
            Base::Cn | Base::Dn => {
                let m = match self.variable {
                    Variable::Sn(m) => m,
                    _ => return Err(QhjError::Inconsistent("elliptic prefactor without sn variable".into())),
                };
                crate::catalog::real_only(x)?;
                let t = jacobi_sn_cn_dn(x.re, m)?;
                c(if base == Base::Cn { t.cn } else { t.dn })
            }
            Base::Sinh => x.sinh(),
            Base::Cosh => x.cosh(),
        })
    }

    /// `|sin x|^e P(cot x)` expanded as `sum_k c_k cos^k sgn^k |sin|^(e-k)` so walls are finite.
    fn eval_cot(&self, x: Complex64) -> Result<Complex64> {
        crate::catalog::real_only(x)?;
        let e = self
            .prefactors
            .iter()
            .find(|p| p.base == Base::AbsSin)
            .map_or(Scalar::zero(), |p| p.exponent);
        let (s, co) = (x.re.sin(), x.re.cos());
        let sg = if s < 0.0 { -1.0 } else { 1.0 };
        let mut acc = c(0.0);
        for (k, &ck) in self.polynomial.coeffs.iter().enumerate() {
            if ck == c(0.0) {
                continue;
            }
            let rest = e - Scalar::int(k as i64);
            acc += ck * (co * sg).powi(k as i32) * power(c(s.abs()), &rest)?;
        }
        Ok(acc)
    }

    /// `psi(x)`; complex `x` is allowed for models without elliptic functions.
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        if self.variable == Variable::Cot {
            return self.eval_cot(x);
        }
        let y = self.variable.eval(x)?;
        let mut v = self.polynomial.eval(y);
        for p in &self.prefactors {
            v *= power(self.base_value(p.base, x, y)?, &p.exponent)?;
        }
        if let Some(cc) = self.exponential {
            v *= (cc * y).exp();
        }
        Ok(v)
    }

    pub fn eval_real(&self, x: f64) -> Result<Complex64> {
        self.eval(c(x))
    }

    /// Human-readable form such as `(cn x) (dn x)^-1 P_2(sn x)`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for p in &self.prefactors {
            if p.exponent.is_zero() {
                continue;
            }
            let b = p.base.describe(&self.variable);
            let b = if b.starts_with('(') { b } else { format!("({b})") };
            if p.exponent == Scalar::one() {
                parts.push(b);
            } else {
                parts.push(format!("{b}^({})", p.exponent));
            }
        }
        if let Some(cc) = self.exponential {
            let cc = Scalar::from(cc);
            parts.push(format!("exp(({cc}) {})", self.variable.describe()));
        }
        parts.push(format!("P_{}({})", self.polynomial.degree(), self.variable.describe()));
        parts.join(" ")
    }

    /// Zeros counted by polynomial degree plus prefactor zeros in one period or interval.
    pub fn zero_count(&self) -> ZeroCount {
        let prefactor = self
            .prefactors
            .iter()
            .filter(|p| matches!(p.base, Base::Cn | Base::Sinh))
            .filter_map(|p| p.exponent.as_nonnegative_integer(1e-12))
            .map(|k| k as usize)
            .sum();
        let polynomial = self.polynomial.degree();
        ZeroCount { polynomial, prefactor, total: polynomial + prefactor }
    }

    /// Default sampling interval `[lo, hi]` and whether `hi` is included.
    pub fn interval(&self) -> Result<(f64, f64, bool)> {
        Ok(match self.domain {
            Domain::HalfLine => (0.0, self.decay_extent(0.0, 4.0)?, true),
            Domain::Walls { a, b } => (a, b, true),
            Domain::Periodic { period } => (0.0, period, false),
            Domain::RealLine => {
                if self.model == ModelId::KhareMandal {
                    (-1.5, 1.5, true)
                } else {
                    let r = self.decay_extent(0.0, 4.0)?;
                    (-r, r, true)
                }
            }
        })
    }

    /// Smallest `R` beyond the peak where `|psi|` has dropped below `1e-10` of its maximum.
    /// Slowly decaying states near threshold get the widest window tried instead.
    fn decay_extent(&self, start: f64, mut r: f64) -> Result<f64> {
        let mut slow = None;
        while r <= 300.0 {
            let grid: Vec<f64> = (1..=200).map(|i| start + r * i as f64 / 200.0).collect();
            let vals: Vec<f64> = grid.iter().map(|&x| self.eval_real(x).map(|v| v.norm())).collect::<Result<_>>()?;
            let max = vals.iter().cloned().fold(0.0, f64::max);
            if *vals.last().unwrap() <= 1e-10 * max && max > 0.0 {
                return Ok(r);
            }
            let tail = &vals[180..];
            slow = if tail.windows(2).all(|w| w[1] < w[0]) { Some(r) } else { None };
            r *= 1.5;
        }
        if let Some(r) = slow {
            return Ok(r);
        }
        Err(QhjError::Numerical("wavefunction does not decay".into()))
    }

    /// Sample on `samples` equispaced points of the default interval.
    pub fn sample(&self, samples: usize, normalization: Normalization) -> Result<SampledWavefunction> {
        let (lo, hi, closed) = self.interval()?;
        let xs: Vec<f64> = match samples {
            0 => vec![],
            1 => vec![lo],
            s => {
                let div = if closed { (s - 1) as f64 } else { s as f64 };
                (0..s).map(|i| lo + (hi - lo) * i as f64 / div).collect()
            }
        };
        self.sample_at(&xs, normalization)
    }

    /// Sample on given points.
    pub fn sample_at(&self, xs: &[f64], normalization: Normalization) -> Result<SampledWavefunction> {
        let raw: Vec<Complex64> = xs.iter().map(|&x| self.eval_real(x)).collect::<Result<_>>()?;
        if raw.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(QhjError::Singular("non-finite wavefunction sample".into()));
        }
        let values = normalize(&raw, xs, normalization);
        let zero_locations = locate_zeros(xs, &values);
        Ok(SampledWavefunction { xs: xs.to_vec(), values, normalization, zero_locations })
    }

    /// `psi(x + shift) / psi(x)` when it is constant, e.g. `+1` or `-1` for band edges.
    pub fn shift_ratio(&self, shift: f64) -> Result<Option<Complex64>> {
        let mut ratio: Option<Complex64> = None;
        for k in 0..13 {
            let x = 0.137 + 0.29 * k as f64;
            let a = self.eval_real(x)?;
            let b = self.eval_real(x + shift)?;
            if a.norm() < 1e-8 {
                continue;
            }
            let r = b / a;
            match ratio {
                None => ratio = Some(r),
                Some(r0) if (r0 - r).norm() > 1e-8 * r0.norm().max(1.0) => return Ok(None),
                _ => {}
            }
        }
        Ok(ratio)
    }

    /// Boundary class of the state.
    pub fn bc_tag(&self) -> Result<BcTag> {
        Ok(match self.domain {
            Domain::Periodic { period } => match self.shift_ratio(period)? {
                Some(r) if (r - 1.0).norm() < 1e-8 => BcTag::Periodic,
                Some(r) if (r + 1.0).norm() < 1e-8 => BcTag::Antiperiodic,
                _ => return Err(QhjError::Numerical("band-edge state is not (anti)periodic".into())),
            },
            Domain::Walls { .. } => BcTag::Dirichlet,
            Domain::HalfLine => BcTag::Decaying,
            Domain::RealLine => BcTag::PtSymmetric,
        })
    }

    /// Residual of `-psi'' + V psi - E psi` at interior points, relative to the
    /// largest term met on the grid. The second derivative uses a nine-point
    /// stencil at two step sizes and the smaller residual is kept at each point.
    pub fn ode_residual(&self, model: &Model, points: usize) -> Result<f64> {
        let (lo, hi, _) = self.interval()?;
        let len = hi - lo;
        let h0 = 2e-3 * len.min(10.0).max(0.5);
        let steps = [h0, 3.0 * h0];
        let margin = 0.02 * len + 8.0 * steps[1];
        let w = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..points {
            let x = lo + margin + (len - 2.0 * margin) * (i as f64 + 0.5) / points as f64;
            let psi = self.eval_real(x)?;
            let v = model.potential(c(x))?;
            let mut best = f64::INFINITY;
            for h in steps {
                let mut d2 = w[0] * psi;
                for (k, wk) in w.iter().enumerate().skip(1) {
                    let kh = k as f64 * h;
                    d2 += *wk * (self.eval_real(x + kh)? + self.eval_real(x - kh)?);
                }
                d2 /= h * h;
                best = best.min((-d2 + (v - self.energy) * psi).norm());
                scale = scale.max(d2.norm() + (v * psi).norm() + (self.energy * psi).norm());
            }
            worst = worst.max(best);
        }
        Ok(if scale > 0.0 { worst / scale } else { worst })
    }
}

fn normalize(raw: &[Complex64], xs: &[f64], normalization: Normalization) -> Vec<Complex64> {
    let (imax, _) = raw
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bi, bv), (i, v)| if v.norm() > bv { (i, v.norm()) } else { (bi, bv) });
    if raw.is_empty() || raw[imax].norm() == 0.0 {
        return raw.to_vec();
    }
    let phase = raw[imax] / raw[imax].norm();
    let mut v: Vec<Complex64> = raw.iter().map(|z| z / (phase * raw[imax].norm())).collect();
    if normalization == Normalization::L2One && xs.len() > 1 {
        let mut s = 0.0;
        for i in 1..xs.len() {
            s += 0.5 * (v[i].norm_sqr() + v[i - 1].norm_sqr()) * (xs[i] - xs[i - 1]);
        }
        let n = s.sqrt();
        if n > 0.0 {
            v.iter_mut().for_each(|z| *z /= n);
        }
    }
    v
}

/// Sign changes of the real part, or modulus minima below `1e-8` of the maximum for complex data.
pub fn locate_zeros(xs: &[f64], values: &[Complex64]) -> Vec<f64> {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let real = values.iter().all(|v| v.im.abs() <= 1e-10 * max.max(1e-300));
    let mut out = Vec::new();
    if real {
        let mut last: Option<(f64, f64)> = None;
        for (&x, v) in xs.iter().zip(values) {
            if v.re.abs() <= 1e-10 * max {
                continue;
            }
            if let Some((x0, v0)) = last {
                if v0.signum() != v.re.signum() {
                    out.push(x0 + (x - x0) * v0.abs() / (v0.abs() + v.re.abs()));
                }
            }
            last = Some((x, v.re));
        }
    } else {
        for i in 1..values.len().saturating_sub(1) {
            let m = values[i].norm();
            if m <= 1e-8 * max && m <= values[i - 1].norm() && m <= values[i + 1].norm() {
                out.push(xs[i]);
            }
        }
    }
    out
}

/// Known orthogonal-polynomial form of a state, when the model has one.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormReport {
    pub family: String,
    pub max_abs_difference: f64,
}

/// Closed-form wavefunction for hydrogen, Scarf I, periodic Scarf and complex Scarf.
pub fn closed_form(model: &Model, a: &Assignment, energy: Complex64) -> Option<(String, Box<dyn Fn(f64) -> Complex64>)> {
    let n = a.n as usize;
    let b = a.residues.clone();
    match model.id {
        ModelId::Hydrogen => {
            let l = model.params.real("l");
            let e2 = model.params.real("e2");
            let scale = e2 / (n as f64 + l + 1.0);
            let k = 2.0 * l + 1.0;
            Some((
                format!("Laguerre L_{n}^({k})"),
                Box::new(move |r: f64| {
                    let y = scale * r;
                    c(y.powf(l + 1.0) * (-y / 2.0).exp() * laguerre(n, k, y))
                }),
            ))
        }
        ModelId::Scarf1 | ModelId::ComplexScarf => {
            let (b0, b1) = (b[0].value, b[1].value);
            let (al, be) = (2.0 * b0 - 1.0, 2.0 * b1 - 1.0);
            let var = model.variable;
            Some((
                format!("Jacobi P_{n}^({}, {})", Scalar::from(al), Scalar::from(be)),
                Box::new(move |x: f64| {
                    let y = var.eval(c(x)).unwrap_or(c(f64::NAN));
                    let pre = (1.0 - y).powc(b0 - 0.25) * (1.0 + y).powc(b1 - 0.25);
                    pre * jacobi_polynomial(n, al, be, y)
                }),
            ))
        }
        ModelId::ScarfPeriodic => {
            let rho = energy.sqrt().re - n as f64;
            let idx = c(rho - 0.5);
            Some((
                format!("|sin x|^rho Jacobi P_{n}^(rho-1/2, rho-1/2)(cos x), rho = {rho}"),
                Box::new(move |x: f64| c(x.sin().abs().powf(rho)) * jacobi_polynomial(n, idx, idx, c(x.cos()))),
            ))
        }
        _ => None,
    }
}

/// Compare the recipe with its closed form at 20 points, up to a fitted scale.
pub fn closed_form_check(model: &Model, a: &Assignment, recipe: &WavefunctionRecipe) -> Result<Option<ClosedFormReport>> {
    let Some((family, f)) = closed_form(model, a, recipe.energy) else {
        return Ok(None);
    };
    let (lo, hi, _) = recipe.interval()?;
    let xs: Vec<f64> = (0..20).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 20.0).collect();
    let u: Vec<Complex64> = xs.iter().map(|&x| recipe.eval_real(x)).collect::<Result<_>>()?;
    let v: Vec<Complex64> = xs.iter().map(|&x| f(x)).collect();
    Ok(Some(ClosedFormReport { family, max_abs_difference: scaled_difference(&u, &v) }))
}

/// `max |u/|u|_inf - s v|` with the least-squares scale `s`.
pub fn scaled_difference(u: &[Complex64], v: &[Complex64]) -> f64 {
    let umax = u.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let u: Vec<Complex64> = u.iter().map(|z| z / umax).collect();
    let num: Complex64 = v.iter().zip(&u).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 {
        return f64::INFINITY;
    }
    let s = num / den;
    u.iter().zip(v).map(|(a, b)| (a - s * b).norm()).fold(0.0, f64::max)
}
