//! Polynomial symbols `P(ξ)`, exact polynomial calculus, the Fourier multiplier
//! `P(D)^n`, the `R(P, f̂)` estimator and a raster analysis of sublevel sets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimators::{check_weight_use, noise_floor_limit, Method, RadiusSequence, SequenceParams};
use crate::signal::{weighted_lp_norm_with, SampledFunction, Spectrum, SATURATION_GUARD};
use crate::weights::WeightFunction;
use crate::{Error, Result, C64};

/// Largest number of coefficients a calculus result may hold.
pub const COEFF_CAP: usize = 100_000;

/// Coefficient field element: `i128` for exact identities, `f64` for operators.
pub trait Scalar: Clone + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + fmt::Debug + PartialEq + Send + Sync {}
impl<T> Scalar for T where T: Clone + Num + Neg<Output = T> + FromPrimitive + ToPrimitive + fmt::Debug + PartialEq + Send + Sync {}

/// `Σ c_α ξ^α` in `dim` variables; the map never stores zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySymbol<T: Scalar> {
    dim: usize,
    coeffs: BTreeMap<Vec<u32>, Complex<T>>,
}

fn is_zero<T: Scalar>(c: &Complex<T>) -> bool {
    c.re == T::zero() && c.im == T::zero()
}

impl<T: Scalar> PolySymbol<T> {
    pub fn zero(dim: usize) -> Self {
        PolySymbol { dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex<T>) -> Self {
        Self::from_terms(dim, vec![(vec![0; dim], c)]).expect("valid constant")
    }

    /// The coordinate `ξ_axis`.
    pub fn variable(dim: usize, axis: usize) -> Self {
        let mut idx = vec![0; dim];
        idx[axis] = 1;
        Self::from_terms(dim, vec![(idx, Complex::new(T::one(), T::zero()))]).expect("valid variable")
    }

    /// Sums repeated indices and drops zeros.
    pub fn from_terms(dim: usize, terms: Vec<(Vec<u32>, Complex<T>)>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Parameter(format!("symbol dimension {dim} not in {{1, 2}}")));
        }
        let mut coeffs: BTreeMap<Vec<u32>, Complex<T>> = BTreeMap::new();
        for (idx, c) in terms {
            if idx.len() != dim {
                return Err(Error::Parameter(format!("multi-index {idx:?} in a {dim}-variable symbol")));
            }
            let e = coeffs.entry(idx).or_insert_with(|| Complex::new(T::zero(), T::zero()));
            *e = e.clone() + c;
        }
        coeffs.retain(|_, c| !is_zero(c));
        check_cap(coeffs.len())?;
        Ok(PolySymbol { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex<T>)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &[u32]) -> Complex<T> {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// `max |α|` over nonzero coefficients; 0 for constants and the zero symbol.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.iter().sum::<u32>()).max().unwrap_or(0)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Parameter("symbols in different numbers of variables".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let terms = self.coeffs.iter().chain(other.coeffs.iter()).map(|(k, c)| (k.clone(), c.clone())).collect();
        Self::from_terms(self.dim, terms)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !is_zero(v))
            .collect();
        PolySymbol { dim: self.dim, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        check_cap(estimated_product_len(self, other))?;
        let mut coeffs: BTreeMap<Vec<u32>, Complex<T>> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let idx: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let e = coeffs.entry(idx).or_insert_with(|| Complex::new(T::zero(), T::zero()));
                *e = e.clone() + ca.clone() * cb.clone();
            }
        }
        coeffs.retain(|_, c| !is_zero(c));
        check_cap(coeffs.len())?;
        Ok(PolySymbol { dim: self.dim, coeffs })
    }

    /// `P^n` by repeated squaring; refused up front when the dense monomial
    /// count of degree `n·deg P` exceeds the cap.
    pub fn pow(&self, n: u32) -> Result<Self> {
        check_cap(monomial_count(self.dim, self.degree() as usize * n as usize).min(max_terms(self.len(), n)))?;
        let mut result = Self::constant(self.dim, Complex::new(T::one(), T::zero()));
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `D_ξ^k P` with `D = −i∂`.
    pub fn differentiate(&self, k: &[u32]) -> Result<Self> {
        if k.len() != self.dim {
            return Err(Error::Parameter(format!("multi-index {k:?} in a {}-variable symbol", self.dim)));
        }
        let total: u32 = k.iter().sum();
        // (−i)^{|k|}
        let mi = [
            Complex::new(T::one(), T::zero()),
            Complex::new(T::zero(), -T::one()),
            Complex::new(-T::one(), T::zero()),
            Complex::new(T::zero(), T::one()),
        ][(total % 4) as usize]
            .clone();
        let mut terms = Vec::new();
        for (idx, c) in &self.coeffs {
            if idx.iter().zip(k).any(|(a, b)| a < b) {
                continue;
            }
            let mut factor = T::one();
            for (a, b) in idx.iter().zip(k) {
                for j in 0..*b {
                    factor = factor * T::from_u32(a - j).expect("representable");
                }
            }
            let new_idx: Vec<u32> = idx.iter().zip(k).map(|(a, b)| a - b).collect();
            terms.push((new_idx, c.clone() * mi.clone() * Complex::new(factor, T::zero())));
        }
        Self::from_terms(self.dim, terms)
    }

    /// Converts coefficients to `f64`.
    pub fn to_f64(&self) -> PolySymbol<f64> {
        PolySymbol {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.clone(), Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))))
                .collect(),
        }
    }
}

/// Monomials of total degree at most `d` in `dim` variables.
fn monomial_count(dim: usize, d: usize) -> usize {
    if dim == 1 {
        d + 1
    } else {
        (d + 1).saturating_mul(d + 2) / 2
    }
}

/// Multisets of size `n` from `terms` items: an upper bound for the terms of `P^n`.
fn max_terms(terms: usize, n: u32) -> usize {
    let mut acc: usize = 1;
    for j in 1..=n as usize {
        acc = match acc.checked_mul(terms + j - 1) {
            Some(v) => v / j,
            None => return usize::MAX,
        };
    }
    acc
}

fn estimated_product_len<T: Scalar>(a: &PolySymbol<T>, b: &PolySymbol<T>) -> usize {
    let d = (a.degree() + b.degree()) as usize;
    monomial_count(a.dim, d).min(a.len().saturating_mul(b.len()))
}

fn check_cap(count: usize) -> Result<()> {
    if count > COEFF_CAP {
        return Err(Error::CapExceeded { count, cap: COEFF_CAP });
    }
    Ok(())
}

impl PolySymbol<f64> {
    pub fn eval(&self, xi: &[f64]) -> C64 {
        self.coeffs
            .iter()
            .map(|(idx, c)| c * idx.iter().zip(xi).map(|(&a, x)| x.powi(a as i32)).product::<f64>())
            .sum()
    }

    /// Parses the config literal `[{"index": [i, j], "re": r, "im": s}, …]`.
    pub fn from_literal(dim: usize, terms: &[SymbolTerm]) -> Result<Self> {
        if terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::Config("non-finite symbol coefficient".into()));
        }
        Self::from_terms(dim, terms.iter().map(|t| (t.index.clone(), Complex::new(t.re, t.im))).collect())
    }

    pub fn to_literal(&self) -> Vec<SymbolTerm> {
        self.coeffs.iter().map(|(k, c)| SymbolTerm { index: k.clone(), re: c.re, im: c.im }).collect()
    }

    /// Requires degree `m ≥ 1`, as every operator use does.
    pub fn operator_degree(&self) -> Result<u32> {
        match self.degree() {
            0 => Err(Error::Parameter("operator symbols need degree ≥ 1".into())),
            m => Ok(m),
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for PolySymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                let mono: Vec<String> = idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(ax, &a)| {
                        let v = if self.dim == 1 { "xi".to_string() } else { format!("xi{}", ax + 1) };
                        if a == 1 {
                            v
                        } else {
                            format!("{v}^{a}")
                        }
                    })
                    .collect();
                let coef = format!("({}{:+}i)", c.re, c.im);
                if mono.is_empty() {
                    coef
                } else {
                    format!("{coef}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One coefficient of a symbol literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub index: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// The terms `(ℓ, P_{ℓ,k})` with `D^k(P^n) = Σ_ℓ n!/(n−ℓ)! P_{ℓ,k} P^{n−ℓ}`,
/// built axis by axis (axis 1 first) from `P_{ℓ,k+e_j} = D_j P_{ℓ,k} + P_{ℓ−1,k} D_j P`.
/// The terms do not depend on `n`, which only has to satisfy `n ≥ |k|`.
pub fn symbol_power_decomposition<T: Scalar>(p: &PolySymbol<T>, k: &[u32], n: u32) -> Result<Vec<(u32, PolySymbol<T>)>> {
    let dim = p.dim();
    if k.len() != dim {
        return Err(Error::Parameter(format!("multi-index {k:?} in a {dim}-variable symbol")));
    }
    let total: u32 = k.iter().sum();
    if n < total {
        return Err(Error::Parameter(format!("n = {n} below |k| = {total}")));
    }
    let one = PolySymbol::constant(dim, Complex::new(T::one(), T::zero()));
    let mut terms: Vec<PolySymbol<T>> = vec![one];
    for (axis, &count) in k.iter().enumerate() {
        let mut e = vec![0; dim];
        e[axis] = 1;
        let dp = p.differentiate(&e)?;
        for _ in 0..count {
            let mut next = Vec::with_capacity(terms.len() + 1);
            for l in 0..=terms.len() {
                let mut t = if l < terms.len() { terms[l].differentiate(&e)? } else { PolySymbol::zero(dim) };
                if l > 0 {
                    t = t.add(&terms[l - 1].mul(&dp)?)?;
                }
                next.push(t);
            }
            terms = next;
        }
    }
    Ok(terms.into_iter().enumerate().map(|(l, t)| (l as u32, t)).collect())
}

/// `n!/(n−ℓ)!`.
pub fn falling_factorial<T: Scalar>(n: u32, l: u32) -> T {
    (0..l).fold(T::one(), |acc, j| acc * T::from_u32(n - j).expect("representable"))
}

/// `Σ_ℓ n!/(n−ℓ)! P_{ℓ,k} P^{n−ℓ}` from a decomposition.
pub fn assemble_decomposition<T: Scalar>(p: &PolySymbol<T>, terms: &[(u32, PolySymbol<T>)], n: u32) -> Result<PolySymbol<T>> {
    let mut acc = PolySymbol::zero(p.dim());
    for (l, t) in terms {
        let c = Complex::new(falling_factorial::<T>(n, *l), T::zero());
        acc = acc.add(&t.mul(&p.pow(n - l)?)?.scale(c))?;
    }
    Ok(acc)
}

/// Checks the decomposition identity exactly and the degree bound `deg P_{ℓ,k} ≤ ℓ(m−1)`.
pub fn verify_decomposition<T: Scalar>(p: &PolySymbol<T>, k: &[u32], n: u32) -> Result<DecompositionCheck> {
    let terms = symbol_power_decomposition(p, k, n)?;
    let lhs = p.pow(n)?.differentiate(k)?;
    let rhs = assemble_decomposition(p, &terms, n)?;
    let m = p.degree();
    let degree_ok = terms.iter().all(|(l, t)| t.is_empty() || t.degree() <= l * m.saturating_sub(1));
    Ok(DecompositionCheck { identity_holds: lhs == rhs, degree_bound_holds: degree_ok, terms: terms.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub identity_holds: bool,
    pub degree_bound_holds: bool,
    pub terms: usize,
}

/// Random symbol of degree exactly `m` with integer coefficients in `[−c, c]`.
pub fn random_symbol<R: Rng>(rng: &mut R, dim: usize, m: u32, c: i64) -> PolySymbol<i128> {
    loop {
        let mut terms = Vec::new();
        for total in 0..=m {
            for a in 0..=total {
                let idx = if dim == 1 {
                    if a > 0 {
                        break;
                    }
                    vec![total]
                } else {
                    vec![a, total - a]
                };
                if rng.gen_bool(0.6) {
                    terms.push((idx, Complex::new(rng.gen_range(-c..=c) as i128, rng.gen_range(-c..=c) as i128)));
                }
            }
        }
        let p = PolySymbol::from_terms(dim, terms).expect("valid random symbol");
        if p.degree() == m {
            return p;
        }
    }
}

/// `e^{−top}·P^n f̂` together with `top`, accumulated as `n·log|P|` and
/// `n·arg P` so that no intermediate overflows.
fn scaled_multiplied_spectrum(f: &SampledFunction, p: &PolySymbol<f64>, n: u32) -> Result<Option<(Spectrum, f64)>> {
    if p.dim() != f.grid.dim {
        return Err(Error::Parameter("symbol and grid dimensions differ".into()));
    }
    let spec = f.forward_ft()?;
    spec.check_spectral_decay()?;
    let g = spec.grid;
    let dim = g.dim;
    let logs: Vec<(f64, f64)> = spec
        .samples
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let pv = p.eval(&g.point(i)[..dim]);
            if z.norm() == 0.0 || (n > 0 && pv.norm() == 0.0) {
                (f64::NEG_INFINITY, 0.0)
            } else {
                (n as f64 * pv.norm().ln() + z.norm().ln(), n as f64 * pv.arg() + z.arg())
            }
        })
        .collect();
    let top = logs.iter().map(|l| l.0).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(None);
    }
    let shell = logs.iter().enumerate().filter(|(i, _)| g.in_shell(*i, 0.05)).map(|(_, l)| l.0).fold(f64::NEG_INFINITY, f64::max);
    if n > 0 && shell - top > SATURATION_GUARD.ln() {
        return Err(Error::NyquistSaturation { edge: (shell - top).exp(), peak: 1.0 });
    }
    let scaled: Vec<C64> = logs.iter().map(|&(l, ph)| C64::from_polar((l - top).exp(), ph)).collect();
    Ok(Some((Spectrum::new(g, scaled)?, top)))
}

fn finish(out: SampledFunction, f: &SampledFunction) -> SampledFunction {
    if f.has_exact_spectrum() {
        out
    } else {
        out.without_exact_spectrum()
    }
}

/// `e^{−s}·P(D)^n f` and `s`.
pub fn apply_symbol_power_scaled(f: &SampledFunction, p: &PolySymbol<f64>, n: u32) -> Result<(SampledFunction, f64)> {
    if n == 0 {
        return Ok((f.clone(), 0.0));
    }
    match scaled_multiplied_spectrum(f, p, n)? {
        None => Ok((SampledFunction::zeros(f.grid), 0.0)),
        Some((spec, top)) => Ok((finish(spec.inverse_ft(), f), top)),
    }
}

/// `P(D)^n f = F^{-1}[P^n f̂]`.
pub fn apply_symbol_power(f: &SampledFunction, p: &PolySymbol<f64>, n: u32) -> Result<SampledFunction> {
    if n == 0 {
        return Ok(f.clone());
    }
    match scaled_multiplied_spectrum(f, p, n)? {
        None => Ok(SampledFunction::zeros(f.grid)),
        Some((spec, top)) => {
            let factor = top.exp();
            if !factor.is_finite() {
                return Err(Error::Data(format!("P(D)^n f exceeds the f64 range (scale e^{top})")));
            }
            let full = Spectrum::new(spec.grid, spec.samples.iter().map(|z| z * factor).collect())?;
            Ok(finish(full.inverse_ft(), f))
        }
    }
}

/// `log ‖e^{λω(|x/(n+1)|^{1/m})} P(D)^n f‖_{L^p}` for `n = 0..n_max`.
pub fn poly_iterate_sequence(
    f: &SampledFunction,
    p: &PolySymbol<f64>,
    w: &WeightFunction,
    lambda: f64,
    lp: f64,
    n_max: u32,
) -> Result<RadiusSequence> {
    let m = p.operator_degree()?;
    check_weight_use(w, lambda)?;
    crate::numeric::check_exponent(lp)?;
    let params = SequenceParams { p: lp, q: None, lambda, mu: None, weight: w.id(), window: None, symbol: Some(p.to_string()) };
    let mut seq = RadiusSequence::new(Method::PolyIterate, params);
    f.check_finite()?;
    if f.is_zero() {
        seq.zero_input = true;
        return Ok(seq);
    }
    let n_used = if f.has_exact_spectrum() {
        n_max
    } else {
        let spec = f.forward_ft()?;
        let dim = f.grid.dim;
        noise_floor_limit(&spec.grid, &spec.samples, |x| p.eval(&x[..dim]).norm().ln(), n_max)
    };
    let inv_m = 1.0 / m as f64;
    let logs = (0..=n_used)
        .into_par_iter()
        .map(|n| {
            let (g, scale) = apply_symbol_power_scaled(f, p, n)?;
            let s = 1.0 / (n as f64 + 1.0);
            let v = weighted_lp_norm_with(&g, lp, |r| if lambda > 0.0 { lambda * w.eval_unchecked((r * s).powf(inv_m)) } else { 0.0 })?;
            Ok((n, v.ln() + scale))
        })
        .collect::<Result<Vec<_>>>()?;
    seq.push_all(logs, n_max, n_used);
    Ok(seq)
}

/// `R(P, F) = max |P(ξ_k)|` over `|F(ξ_k)| ≥ τ max|F|`; 0 for `F ≡ 0`.
pub fn sup_abs_on_support(spec: &Spectrum, p: &PolySymbol<f64>, tau: f64) -> f64 {
    let peak = spec.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let g = spec.grid;
    spec.samples
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() >= tau * peak)
        .map(|(i, _)| p.eval(&g.point(i)[..g.dim]).norm())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelResult {
    pub bounded: bool,
    /// Tight box `(lower, upper)` of the in-set nodes, when bounded.
    pub bounding_box: Option<(Vec<f64>, Vec<f64>)>,
    /// An in-set node on the search boundary, when not bounded.
    pub escape_witness: Option<Vec<f64>>,
    /// Raster spacing per axis.
    pub cell: Vec<f64>,
    pub in_set: Vec<Vec<f64>>,
}

/// Rasterizes `{ξ : |P(ξ)| ≤ R}` on `resolution + 1` nodes per axis of the search box.
pub fn sublevel_set_box(p: &PolySymbol<f64>, radius: f64, lower: &[f64], upper: &[f64], resolution: usize) -> Result<SublevelResult> {
    let dim = p.dim();
    if lower.len() != dim || upper.len() != dim {
        return Err(Error::Parameter("search box dimension differs from the symbol".into()));
    }
    if resolution < 2 || lower.iter().zip(upper).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
        return Err(Error::Parameter("search box must be finite and non-empty with resolution ≥ 2".into()));
    }
    let cell: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| (b - a) / resolution as f64).collect();
    let node = |ax: usize, i: usize| lower[ax] + i as f64 * cell[ax];
    let rows: Vec<Vec<(Vec<f64>, bool)>> = (0..=resolution)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let inner = if dim == 1 { 0..=0 } else { 0..=resolution };
            for j in inner {
                let pt = if dim == 1 { vec![node(0, i)] } else { vec![node(0, i), node(1, j)] };
                if p.eval(&pt).norm() <= radius {
                    let edge = i == 0 || i == resolution || (dim == 2 && (j == 0 || j == resolution));
                    out.push((pt, edge));
                }
            }
            out
        })
        .collect();
    let pts: Vec<(Vec<f64>, bool)> = rows.into_iter().flatten().collect();
    let witness = pts
        .iter()
        .filter(|(_, e)| *e)
        .max_by(|a, b| {
            let na: f64 = a.0.iter().map(|v| v * v).sum();
            let nb: f64 = b.0.iter().map(|v| v * v).sum();
            na.partial_cmp(&nb).unwrap()
        })
        .map(|(p, _)| p.clone());
    let in_set: Vec<Vec<f64>> = pts.into_iter().map(|(p, _)| p).collect();
    if let Some(w) = witness {
        return Ok(SublevelResult { bounded: false, bounding_box: None, escape_witness: Some(w), cell, in_set });
    }
    let bounding_box = if in_set.is_empty() {
        None
    } else {
        let lo = (0..dim).map(|ax| in_set.iter().map(|p| p[ax]).fold(f64::INFINITY, f64::min)).collect();
        let hi = (0..dim).map(|ax| in_set.iter().map(|p| p[ax]).fold(f64::NEG_INFINITY, f64::max)).collect();
        Some((lo, hi))
    };
    Ok(SublevelResult { bounded: true, bounding_box, escape_witness: None, cell, in_set })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{make_bandlimited, DEFAULT_KAPPA};
    use crate::estimators::{derivative_growth_sequence, extrapolate_limit};
    use crate::signal::{GridSpec, SUPPORT_TAU};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type P = PolySymbol<i128>;

    fn c(re: i128, im: i128) -> Complex<i128> {
        Complex::new(re, im)
    }

    /// `ξ₁² − ξ₂² + iξ₂`.
    fn example() -> P {
        P::from_terms(2, vec![(vec![2, 0], c(1, 0)), (vec![0, 2], c(-1, 0)), (vec![0, 1], c(0, 1))]).unwrap()
    }

    #[test]
    fn basic_calculus() {
        let x = P::variable(1, 0);
        assert_eq!(x.mul(&x).unwrap(), P::from_terms(1, vec![(vec![2], c(1, 0))]).unwrap());
        let d = P::from_terms(1, vec![(vec![2], c(1, 0))]).unwrap().differentiate(&[1]).unwrap();
        assert_eq!(d, P::from_terms(1, vec![(vec![1], c(0, -2))]).unwrap());
        assert!(x.sub(&x).unwrap().is_empty());
    }

    #[test]
    fn square_matches_term_by_term_expansion() {
        // (a − b + c)² with a = ξ₁², b = ξ₂², c = iξ₂
        let want = P::from_terms(
            2,
            vec![
                (vec![4, 0], c(1, 0)),
                (vec![2, 2], c(-2, 0)),
                (vec![0, 4], c(1, 0)),
                (vec![2, 1], c(0, 2)),
                (vec![0, 3], c(0, -2)),
                (vec![0, 2], c(-1, 0)),
            ],
        )
        .unwrap();
        assert_eq!(example().pow(2).unwrap(), want);
    }

    #[test]
    fn decomposition_special_cases() {
        let p = example();
        let t = symbol_power_decomposition(&p, &[0, 0], 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].1, P::constant(2, c(1, 0)));
        let x = P::variable(1, 0);
        for (_, t) in symbol_power_decomposition(&x, &[3], 5).unwrap() {
            assert_eq!(t.degree(), 0);
        }
        let sq = x.mul(&x).unwrap();
        let chk = verify_decomposition(&sq, &[2], 3).unwrap();
        assert!(chk.identity_holds && chk.degree_bound_holds);
        assert!(symbol_power_decomposition(&sq, &[3], 2).is_err());
    }

    #[test]
    fn coefficient_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_symbol(&mut rng, 2, 3, 2);
        assert!(matches!(p.pow(400), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn sublevel_examples() {
        let p = example().to_f64();
        let r = sublevel_set_box(&p, 1.0, &[-3.0, -3.0], &[3.0, 3.0], 600).unwrap();
        assert!(r.bounded);
        let (lo, hi) = r.bounding_box.unwrap();
        assert!(hi[0] <= 2f64.sqrt() + r.cell[0] && lo[0] >= -(2f64.sqrt()) - r.cell[0]);
        assert!((hi[1] - 1.0).abs() <= r.cell[1] && (lo[1] + 1.0).abs() <= r.cell[1]);
        let q = P::from_terms(2, vec![(vec![2, 0], c(1, 0)), (vec![0, 2], c(-1, 0))]).unwrap().to_f64();
        let r = sublevel_set_box(&q, 1.0, &[-3.0, -3.0], &[3.0, 3.0], 600).unwrap();
        assert!(!r.bounded);
        let w = r.escape_witness.unwrap();
        assert!((w[0].abs() - w[1].abs()).abs() < 0.5);
        let s = P::from_terms(1, vec![(vec![2], c(1, 0))]).unwrap().to_f64();
        let r = sublevel_set_box(&s, 4.0, &[-10.0], &[10.0], 2000).unwrap();
        let (lo, hi) = r.bounding_box.unwrap();
        assert!((lo[0] + 2.0).abs() <= r.cell[0] && (hi[0] - 2.0).abs() <= r.cell[0]);
    }

    #[test]
    fn multiplier_identities() {
        let g = GridSpec::new(1, 32.0, 256).unwrap();
        let f = SampledFunction::from_real_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
        let xi = PolySymbol::<f64>::variable(1, 0);
        assert_eq!(apply_symbol_power(&f, &xi, 0).unwrap().samples(), f.samples());
        let a = apply_symbol_power(&f, &xi, 1).unwrap();
        let b = f.spectral_derivative(&[1]).unwrap();
        for (u, v) in a.samples().iter().zip(b.samples()) {
            assert!((u - v).norm() < 1e-12);
        }
        let sq = xi.mul(&xi).unwrap();
        let d2 = apply_symbol_power(&f, &sq, 1).unwrap();
        for (j, z) in d2.samples().iter().enumerate() {
            let x = g.coord(j);
            assert!((z - C64::new((1.0 - x * x) * (-x * x / 2.0).exp(), 0.0)).norm() < 1e-9);
        }
        let three = apply_symbol_power(&f, &sq, 3).unwrap();
        let composed = apply_symbol_power(&apply_symbol_power(&f, &sq, 1).unwrap(), &sq, 2).unwrap();
        let scale = three.max_abs();
        for (u, v) in three.samples().iter().zip(composed.samples()) {
            assert!((u - v).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn linear_symbol_reproduces_derivative_sequence() {
        let e = make_bandlimited(GridSpec::default_1d(), &[-1.0], &[1.0], DEFAULT_KAPPA).unwrap();
        let xi = PolySymbol::<f64>::variable(1, 0);
        let w = WeightFunction::log();
        let a = poly_iterate_sequence(&e.function, &xi, &w, 0.5, 2.0, 20).unwrap();
        let b = derivative_growth_sequence(&e.function, &w, 0.5, 2.0, 20).unwrap();
        for (u, v) in a.entries.iter().zip(&b.entries) {
            assert!((u.log_norm.ln() - v.log_norm.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn squared_symbol_limit() {
        let e = make_bandlimited(GridSpec::default_1d(), &[-1.0], &[1.0], DEFAULT_KAPPA).unwrap();
        let xi = PolySymbol::<f64>::variable(1, 0);
        let sq = xi.mul(&xi).unwrap();
        let spec = e.function.forward_ft().unwrap();
        let oracle = sup_abs_on_support(&spec, &sq, SUPPORT_TAU);
        let s = poly_iterate_sequence(&e.function, &sq, &WeightFunction::log(), 0.0, 2.0, 40).unwrap();
        let est = extrapolate_limit(&s, Some(oracle)).unwrap();
        assert!(est.rel_err_ratio.unwrap() < 0.05, "{est:?}");
        assert_eq!(sup_abs_on_support(&Spectrum::new(spec.grid, vec![C64::new(0.0, 0.0); spec.samples.len()]).unwrap(), &sq, SUPPORT_TAU), 0.0);
    }
}
