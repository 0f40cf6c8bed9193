//! Topological side of the index formula on structured-grid 3-manifolds.
//!
//! Fields are sampled at cell centers. Derivatives are spectral along
//! periodic axes and second-order finite differences (one-sided at the chart
//! edges) along interval axes. Integrals use the midpoint rule with the
//! coordinate cell volume. 2-forms are stored by the axis they are dual to:
//! component `a` is the coefficient of `dx_{a+1} ∧ dx_{a+2}` (indices mod 3).

use std::f64::consts::PI;

use nalgebra::SVD;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::exsym::WeylElement;
use crate::{CMatrix, Error, Result};

/// `Ch₁ = C0 tr(g⁻¹dg)`, pinned by the circle winding calibration.
pub const C0: Complex64 = Complex64::new(0.0, -1.0 / (2.0 * PI));

/// `Ch₃ = C1 tr((g⁻¹dg)³)`, pinned by the degree-one `S³ → SU(2)` calibration.
pub const C1: f64 = 1.0 / (24.0 * PI * PI);

pub const DEFAULT_RESOLUTION: usize = 32;
pub const CLOSEDNESS_TOL: f64 = 1e-6;
pub const CYCLE_INTEGRALITY_TOL: f64 = 1e-3;
pub const FORMULA_INTEGRALITY_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ManifoldKind {
    /// Flat torus `[0,1)³`.
    T3,
    /// `x ∈ [0,1)` periodic, `(θ, φ) ∈ (0,π) × [0,2π)`.
    S1xS2,
    /// Hyperspherical `(χ, θ, φ) ∈ (0,π) × (0,π) × [0,2π)`.
    S3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridManifold {
    pub kind: ManifoldKind,
    pub resolution: [usize; 3],
}

impl GridManifold {
    pub fn new(kind: ManifoldKind, resolution: [usize; 3]) -> Result<Self> {
        let m = Self { kind, resolution };
        for a in 0..3 {
            let n = resolution[a];
            if m.periodic(a) && (n < 4 || n % 2 != 0) {
                return Err(Error::InvalidManifold(format!("periodic axis {a} needs an even resolution >= 4, got {n}")));
            }
            if !m.periodic(a) && n < 4 {
                return Err(Error::InvalidManifold(format!("interval axis {a} needs resolution >= 4, got {n}")));
            }
        }
        Ok(m)
    }

    pub fn uniform(kind: ManifoldKind, n: usize) -> Result<Self> {
        Self::new(kind, [n; 3])
    }

    pub fn periodic(&self, axis: usize) -> bool {
        match self.kind {
            ManifoldKind::T3 => true,
            ManifoldKind::S1xS2 => axis != 1,
            ManifoldKind::S3 => axis == 2,
        }
    }

    /// Coordinate range `(start, length)` of an axis.
    pub fn range(&self, axis: usize) -> (f64, f64) {
        match (self.kind, axis) {
            (ManifoldKind::T3, _) | (ManifoldKind::S1xS2, 0) => (0.0, 1.0),
            (_, 2) => (0.0, 2.0 * PI),
            _ => (0.0, PI),
        }
    }

    pub fn step(&self, axis: usize) -> f64 {
        self.range(axis).1 / self.resolution[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..3).map(|a| self.step(a)).product()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, i: [usize; 3]) -> usize {
        (i[0] * self.resolution[1] + i[1]) * self.resolution[2] + i[2]
    }

    pub fn multi(&self, idx: usize) -> [usize; 3] {
        let [_, n1, n2] = self.resolution;
        [idx / (n1 * n2), (idx / n2) % n1, idx % n2]
    }

    /// Cell-center coordinates.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let i = self.multi(idx);
        let mut p = [0.0; 3];
        for a in 0..3 {
            let (lo, _) = self.range(a);
            p[a] = lo + (i[a] as f64 + 0.5) * self.step(a);
        }
        p
    }

    /// Flat indices of the line through `idx` along `axis`.
    fn line(&self, axis: usize, base: [usize; 3]) -> Vec<usize> {
        (0..self.resolution[axis])
            .map(|k| {
                let mut i = base;
                i[axis] = k;
                self.flat(i)
            })
            .collect()
    }

    /// Base points of all lines along `axis`.
    fn line_bases(&self, axis: usize) -> Vec<[usize; 3]> {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut v = Vec::with_capacity(self.resolution[b] * self.resolution[c]);
        for i in 0..self.resolution[b] {
            for j in 0..self.resolution[c] {
                let mut base = [0; 3];
                base[b] = i;
                base[c] = j;
                v.push(base);
            }
        }
        v
    }

    /// Derivative of a sampled scalar field along `axis`.
    pub fn derivative(&self, field: &[Complex64], axis: usize) -> Vec<Complex64> {
        let n = self.resolution[axis];
        let h = self.step(axis);
        let len = self.range(axis).1;
        let fft = self.periodic(axis).then(|| {
            let mut p = FftPlanner::new();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        });
        let lines: Vec<(Vec<usize>, Vec<Complex64>)> = self
            .line_bases(axis)
            .into_par_iter()
            .map(|base| {
                let idx = self.line(axis, base);
                let mut v: Vec<Complex64> = idx.iter().map(|&i| field[i]).collect();
                match &fft {
                    Some((fwd, inv)) => {
                        fwd.process(&mut v);
                        for (k, c) in v.iter_mut().enumerate() {
                            let m = if k < n / 2 { k as f64 } else if k == n / 2 { 0.0 } else { k as f64 - n as f64 };
                            *c *= Complex64::new(0.0, 2.0 * PI * m / len) / n as f64;
                        }
                        inv.process(&mut v);
                        (idx, v)
                    }
                    None => {
                        let mut d = vec![Complex64::default(); n];
                        d[0] = (v[0] * -3.0 + v[1] * 4.0 - v[2]) / (2.0 * h);
                        d[n - 1] = (v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) / (2.0 * h);
                        for k in 1..n - 1 {
                            d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
                        }
                        (idx, d)
                    }
                }
            })
            .collect();
        let mut out = vec![Complex64::default(); field.len()];
        for (idx, d) in lines {
            for (i, z) in idx.into_iter().zip(d) {
                out[i] = z;
            }
        }
        out
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(Error::DimensionMismatch(format!("field of {n} samples on a grid of {}", self.len())));
        }
        Ok(())
    }
}

/// Sampled differential form; see the module docs for the 2-form layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    pub manifold: GridManifold,
    pub degree: usize,
    pub components: Vec<Vec<Complex64>>,
}

fn components_for(degree: usize) -> usize {
    if degree == 0 || degree == 3 {
        1
    } else {
        3
    }
}

impl DifferentialForm {
    pub fn new(manifold: GridManifold, degree: usize, components: Vec<Vec<Complex64>>) -> Result<Self> {
        if degree > 3 || components.len() != components_for(degree) {
            return Err(Error::DimensionMismatch(format!("{} components for a {degree}-form", components.len())));
        }
        for c in &components {
            manifold.check_len(c.len())?;
        }
        Ok(Self { manifold, degree, components })
    }

    pub fn zero(manifold: GridManifold, degree: usize) -> Result<Self> {
        Self::new(manifold, degree, vec![vec![Complex64::default(); manifold.len()]; components_for(degree)])
    }

    pub fn exterior_derivative(&self) -> Result<Self> {
        let m = &self.manifold;
        let d = |f: &[Complex64], a: usize| m.derivative(f, a);
        let c = &self.components;
        let comps = match self.degree {
            0 => (0..3).map(|a| d(&c[0], a)).collect(),
            1 => (0..3)
                .map(|a| {
                    let (b, e) = ((a + 1) % 3, (a + 2) % 3);
                    d(&c[e], b).iter().zip(d(&c[b], e)).map(|(x, y)| x - y).collect()
                })
                .collect(),
            2 => {
                let mut s = vec![Complex64::default(); m.len()];
                for a in 0..3 {
                    for (x, y) in s.iter_mut().zip(d(&c[a], a)) {
                        *x += y;
                    }
                }
                vec![s]
            }
            _ => return Self::zero(*m, 3),
        };
        Self::new(*m, (self.degree + 1).min(3), comps)
    }

    /// `max |dω|` over the grid.
    pub fn closedness_residual(&self) -> Result<f64> {
        if self.degree == 3 {
            return Ok(0.0);
        }
        Ok(self.exterior_derivative()?.max_abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `∫_M` of a 3-form.
    pub fn integrate(&self) -> Result<Complex64> {
        if self.degree != 3 {
            return Err(Error::DimensionMismatch(format!("cannot integrate a {}-form over M", self.degree)));
        }
        Ok(self.components[0].iter().sum::<Complex64>() * self.manifold.cell_volume())
    }

    /// Line integral of a 1-form along the closed `axis` loop through `base`.
    pub fn loop_integral(&self, axis: usize, base: [usize; 3]) -> Result<Complex64> {
        if self.degree != 1 || !self.manifold.periodic(axis) {
            return Err(Error::DimensionMismatch("loop integrals need a 1-form and a periodic axis".into()));
        }
        let line = self.manifold.line(axis, base);
        Ok(line.iter().map(|&i| self.components[axis][i]).sum::<Complex64>() * self.manifold.step(axis))
    }

    /// Integral of a 2-form over the coordinate surface `x_axis = const`
    /// through slice `at`.
    pub fn surface_integral(&self, axis: usize, at: usize) -> Result<Complex64> {
        if self.degree != 2 {
            return Err(Error::DimensionMismatch("surface integrals need a 2-form".into()));
        }
        let m = &self.manifold;
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        let mut s = Complex64::default();
        for base in m.line_bases(axis) {
            let mut i = base;
            i[axis] = at;
            s += self.components[axis][m.flat(i)];
        }
        Ok(s * m.step(b) * m.step(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.manifold != other.manifold {
            return Err(Error::DimensionMismatch("forms of different degree or grid".into()));
        }
        let comps = self.components.iter().zip(&other.components).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Self::new(self.manifold, self.degree, comps)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { components: self.components.iter().map(|c| c.iter().map(|z| z * s).collect()).collect(), ..self.clone() }
    }

    /// Wedge product for degrees summing to at most 3.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.manifold != other.manifold || self.degree + other.degree > 3 {
            return Err(Error::DimensionMismatch("wedge of incompatible forms".into()));
        }
        let n = self.manifold.len();
        let pt = |f: &[Complex64], g: &[Complex64]| -> Vec<Complex64> { f.iter().zip(g).map(|(a, b)| a * b).collect() };
        let (a, b) = (&self.components, &other.components);
        let comps = match (self.degree, other.degree) {
            (0, _) => b.iter().map(|c| pt(&a[0], c)).collect(),
            (_, 0) => a.iter().map(|c| pt(c, &b[0])).collect(),
            (1, 1) => (0..3)
                .map(|k| {
                    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                    (0..n).map(|p| a[i][p] * b[j][p] - a[j][p] * b[i][p]).collect()
                })
                .collect(),
            // ω ∧ η with η_a the coefficient of dx_{a+1} ∧ dx_{a+2}
            (1, 2) | (2, 1) => vec![(0..n).map(|p| (0..3).map(|k| a[k][p] * b[k][p]).sum()).collect()],
            _ => unreachable!("degrees checked above"),
        };
        Self::new(self.manifold, self.degree + other.degree, comps)
    }
}

/// Grid family of invertible matrices `g(x)`.
#[derive(Debug, Clone)]
pub struct AutomorphismFamily {
    manifold: GridManifold,
    size: usize,
    values: Vec<CMatrix>,
    min_singular: f64,
}

impl AutomorphismFamily {
    pub fn new(manifold: GridManifold, values: Vec<CMatrix>, delta: f64) -> Result<Self> {
        manifold.check_len(values.len())?;
        let size = values.first().map(|m| m.nrows()).unwrap_or(0);
        if size == 0 || values.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::DimensionMismatch("family values must be square matrices of one size".into()));
        }
        let min_singular = values
            .par_iter()
            .map(|m| SVD::new(m.clone(), false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min))
            .reduce(|| f64::INFINITY, f64::min);
        if !(min_singular > delta) {
            return Err(Error::NotInvertibleOnGrid { min_singular });
        }
        Ok(Self { manifold, size, values, min_singular })
    }

    pub fn from_fn(manifold: GridManifold, delta: f64, f: impl Fn([f64; 3]) -> CMatrix + Sync) -> Result<Self> {
        let values = (0..manifold.len()).into_par_iter().map(|i| f(manifold.point(i))).collect();
        Self::new(manifold, values, delta)
    }

    pub fn manifold(&self) -> &GridManifold {
        &self.manifold
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn min_singular(&self) -> f64 {
        self.min_singular
    }

    /// Largest entry change between grid neighbours (continuity surrogate).
    pub fn max_jump(&self) -> f64 {
        let m = &self.manifold;
        (0..m.len())
            .into_par_iter()
            .map(|p| {
                let i = m.multi(p);
                (0..3)
                    .map(|a| {
                        let mut j = i;
                        j[a] = (i[a] + 1) % m.resolution[a];
                        if j[a] == 0 && !m.periodic(a) {
                            return 0.0;
                        }
                        crate::max_abs(&(&self.values[p] - &self.values[m.flat(j)]))
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Pointwise product family `g₁ g₂`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.manifold != other.manifold || self.size != other.size {
            return Err(Error::DimensionMismatch("families on different grids or sizes".into()));
        }
        let values = self.values.par_iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Self::new(self.manifold, values, 0.0)
    }

    /// `A_a = g⁻¹ ∂_a g` for each axis.
    fn log_derivatives(&self) -> Result<[Vec<CMatrix>; 3]> {
        let m = &self.manifold;
        let s = self.size;
        let inv: Vec<CMatrix> = self
            .values
            .par_iter()
            .map(|g| g.clone().try_inverse().ok_or(Error::NotInvertibleOnGrid { min_singular: 0.0 }))
            .collect::<Result<_>>()?;
        let mut out: [Vec<CMatrix>; 3] = Default::default();
        for (a, slot) in out.iter_mut().enumerate() {
            let mut dg = vec![CMatrix::zeros(s, s); m.len()];
            for r in 0..s {
                for c in 0..s {
                    let entry: Vec<Complex64> = self.values.iter().map(|g| g[(r, c)]).collect();
                    for (p, z) in m.derivative(&entry, a).into_iter().enumerate() {
                        dg[p][(r, c)] = z;
                    }
                }
            }
            *slot = inv.par_iter().zip(dg.par_iter()).map(|(gi, d)| gi * d).collect();
        }
        Ok(out)
    }
}

/// `Ch_{2k+1}` of the family for `k ∈ {0, 1}`.
pub fn odd_chern_form(g: &AutomorphismFamily, k: usize) -> Result<DifferentialForm> {
    let m = *g.manifold();
    let a = g.log_derivatives()?;
    match k {
        0 => DifferentialForm::new(m, 1, a.iter().map(|ax| ax.iter().map(|x| x.trace() * C0).collect()).collect()),
        1 => {
            // Σ_perm sgn tr(A_σ1 A_σ2 A_σ3) = 3 (tr(A0 A1 A2) − tr(A0 A2 A1)) by cyclicity
            let vals = (0..m.len())
                .into_par_iter()
                .map(|p| {
                    let t = (&a[0][p] * &a[1][p] * &a[2][p]).trace() - (&a[0][p] * &a[2][p] * &a[1][p]).trace();
                    t * 3.0 * C1
                })
                .collect();
            DifferentialForm::new(m, 3, vec![vals])
        }
        _ => Err(Error::Config(format!("odd Chern form of order {k} needs dimension {} > 3", 2 * k + 1))),
    }
}

/// Real 2-form representing `c₁` of the bundle entering the Todd class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    pub manifold: GridManifold,
    /// Dual components, each sampled on the full grid.
    pub components: [Vec<f64>; 3],
}

impl CurvatureData {
    pub fn new(manifold: GridManifold, components: [Vec<f64>; 3]) -> Result<Self> {
        for c in &components {
            manifold.check_len(c.len())?;
        }
        let cd = Self { manifold, components };
        let residual = cd.form().closedness_residual()?;
        if residual > CLOSEDNESS_TOL {
            return Err(Error::Config(format!("curvature form not closed (residual {residual:e})")));
        }
        for (axis, v) in cd.cycle_integrals()? {
            if (v - v.round()).abs() > CYCLE_INTEGRALITY_TOL {
                return Err(Error::Config(format!("curvature integral {v} over the 2-cycle normal to axis {axis} is not an integer")));
            }
        }
        Ok(cd)
    }

    pub fn flat(manifold: GridManifold) -> Self {
        let z = vec![0.0; manifold.len()];
        Self { manifold, components: [z.clone(), z.clone(), z] }
    }

    pub fn from_fn(manifold: GridManifold, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        let mut comps: [Vec<f64>; 3] = Default::default();
        for p in 0..manifold.len() {
            let v = f(manifold.point(p));
            for a in 0..3 {
                comps[a].push(v[a]);
            }
        }
        Self::new(manifold, comps)
    }

    pub fn form(&self) -> DifferentialForm {
        DifferentialForm {
            manifold: self.manifold,
            degree: 2,
            components: self.components.iter().map(|c| c.iter().map(|&x| Complex64::from(x)).collect()).collect(),
        }
    }

    /// Integrals over the coordinate 2-cycles of the manifold, keyed by normal axis.
    pub fn cycle_integrals(&self) -> Result<Vec<(usize, f64)>> {
        let axes: &[usize] = match self.manifold.kind {
            ManifoldKind::T3 => &[0, 1, 2],
            ManifoldKind::S1xS2 => &[0],
            ManifoldKind::S3 => &[],
        };
        axes.iter().map(|&a| Ok((a, self.form().surface_integral(a, 0)?.re))).collect()
    }
}

/// `Td = 1 + c₁/2` in dimension three.
#[derive(Debug, Clone, PartialEq)]
pub struct ToddForm {
    pub degree0: f64,
    pub degree2: DifferentialForm,
}

pub fn todd_form(curv: &CurvatureData) -> ToddForm {
    ToddForm { degree0: 1.0, degree2: curv.form().scale(Complex64::from(0.5)) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaReport {
    pub value: f64,
    pub imaginary: f64,
    pub nearest_integer: i64,
    pub residual: f64,
    pub resolution: [usize; 3],
}

/// `∫_M (Ch₁ ∧ Td₂ + Ch₃ Td₀)` without the integrality verdict.
pub fn evaluate_formula(g: &AutomorphismFamily, curv: Option<&CurvatureData>) -> Result<FormulaReport> {
    let m = *g.manifold();
    let ch3 = odd_chern_form(g, 1)?;
    let mut total = ch3.integrate()?;
    if let Some(c) = curv {
        if c.manifold != m {
            return Err(Error::DimensionMismatch("curvature data on a different grid".into()));
        }
        let td = todd_form(c);
        total += odd_chern_form(g, 0)?.wedge(&td.degree2)?.integrate()?;
    }
    let nearest = total.re.round();
    Ok(FormulaReport {
        value: total.re,
        imaginary: total.im,
        nearest_integer: nearest as i64,
        residual: (total.re - nearest).abs().max(total.im.abs()),
        resolution: m.resolution,
    })
}

/// [`evaluate_formula`] with the integrality check.
pub fn index_formula(g: &AutomorphismFamily, curv: Option<&CurvatureData>) -> Result<FormulaReport> {
    let r = evaluate_formula(g, curv)?;
    if r.residual > FORMULA_INTEGRALITY_TOL {
        return Err(Error::NonIntegral { value: r.value, residual: r.residual });
    }
    Ok(r)
}

/// Compresses a family of Weyl elements to `V^N`, raising `N` in steps of 4
/// from `n_start` until every fiber is certified invertible at `N` and `N + 4`.
pub fn truncate_class(
    manifold: GridManifold,
    family: impl Fn([f64; 3]) -> Result<WeylElement> + Sync,
    n_start: usize,
    cap: usize,
    delta: f64,
) -> Result<AutomorphismFamily> {
    let elements: Vec<WeylElement> = (0..manifold.len()).into_par_iter().map(|i| family(manifold.point(i))).collect::<Result<_>>()?;
    let mut n = n_start;
    while n + crate::exsym::STABILITY_STEP <= cap {
        let ok = elements
            .par_iter()
            .map(|e| Ok(e.min_singular(n)? > delta && e.min_singular(n + crate::exsym::STABILITY_STEP)? > delta))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if ok {
            let values = elements.par_iter().map(|e| e.operator(n).map(|o| o.into_matrix())).collect::<Result<Vec<_>>>()?;
            return AutomorphismFamily::new(manifold, values, delta);
        }
        n += crate::exsym::STABILITY_STEP;
    }
    Err(Error::TruncationCapExceeded { cap })
}

/// `(4 I_fine − I_coarse)/3` for a second-order method at resolutions `n` and `2n`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Scalar family `e^{2πi x₀}` on the torus.
pub fn circle_winding_family(res: usize) -> Result<AutomorphismFamily> {
    let m = GridManifold::uniform(ManifoldKind::T3, res)?;
    AutomorphismFamily::from_fn(m, 0.5, |p| CMatrix::from_element(1, 1, Complex64::from_polar(1.0, 2.0 * PI * p[0])))
}

/// SU(2) matrix of a unit quaternion `(a, b)`.
pub fn su2(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// The identity `S³ → SU(2)` in hyperspherical coordinates.
pub fn s3_identity_family(res: usize) -> Result<AutomorphismFamily> {
    let m = GridManifold::uniform(ManifoldKind::S3, res)?;
    AutomorphismFamily::from_fn(m, 0.5, |p| {
        let [chi, th, ph] = p;
        let a = Complex64::new(chi.cos(), chi.sin() * th.cos());
        let b = Complex64::from_polar(chi.sin() * th.sin(), ph);
        su2(a, b)
    })
}

/// Torus family `k ↦ d(k)/|d(k)|` with `d = (sin k₁, sin k₂, sin k₃, mass − Σ cos k_i)`,
/// `k = 2πx`, read as a unit quaternion. Its degree is nonzero for `1 < |mass| < 3`.
pub fn lattice_family(res: usize, mass: f64) -> Result<AutomorphismFamily> {
    let m = GridManifold::uniform(ManifoldKind::T3, res)?;
    AutomorphismFamily::from_fn(m, 1e-6, |p| {
        let k = p.map(|x| 2.0 * PI * x);
        let d = [k[0].sin(), k[1].sin(), k[2].sin(), mass - k.iter().map(|x| x.cos()).sum::<f64>()];
        let r = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        su2(Complex64::new(d[3] / r, d[2] / r), Complex64::new(d[0] / r, d[1] / r))
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Calibration {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
}

/// `∫_{S¹} Ch₁(e^{2πix})` at resolutions `n` and `2n`.
pub fn calibrate_circle(n: usize) -> Result<Calibration> {
    let v = |r: usize| -> Result<f64> {
        let ch = odd_chern_form(&circle_winding_family(r)?, 0)?;
        Ok(ch.loop_integral(0, [0, 0, 0])?.re)
    };
    let (coarse, fine) = (v(n)?, v(2 * n)?);
    Ok(Calibration { coarse, fine, extrapolated: richardson(coarse, fine) })
}

/// `∫_{S³} Ch₃` of the identity map at resolutions `n` and `2n`.
pub fn calibrate_sphere(n: usize) -> Result<Calibration> {
    let v = |r: usize| -> Result<f64> { Ok(odd_chern_form(&s3_identity_family(r)?, 1)?.integrate()?.re) };
    let (coarse, fine) = (v(n)?, v(2 * n)?);
    Ok(Calibration { coarse, fine, extrapolated: richardson(coarse, fine) })
}
