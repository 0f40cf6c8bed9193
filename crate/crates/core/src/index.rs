//! Fredholm index extraction by truncation-stabilized rank counts, winding
//! numbers, and Hardy-space Toeplitz truncations.
//!
//! Kernels are counted on the tall section `P_N A P_{N−m}` and cokernels on
//! `P_N A^* P_{N−m}`. A square section of a band operator always has index
//! zero; the margin `m` leaves room for the band so that the sections see the
//! kernel and cokernel of the infinite operator.

use std::f64::consts::PI;

use nalgebra::SVD;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::exsym::{hermite_reduction, ExtendedSymbol, HermiteReduction};
use crate::fock::{FockOperator, FockTruncation};
use crate::weyl::BoundaryFunction;
use crate::{CMatrix, Error, Result};

pub const DEFAULT_MARGIN: usize = 8;
pub const ORDER_STRIDE: usize = 4;
/// Number of trailing orders that must agree.
pub const STABLE_WINDOW: usize = 3;
pub const WINDING_MIN_MODULUS: f64 = 1e-8;
pub const WINDING_INTEGRALITY_TOL: f64 = 0.01;
/// Largest Toeplitz section used by [`toeplitz_index`].
pub const TOEPLITZ_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexResult {
    pub index: i64,
    pub stabilized_at: usize,
    /// `(N, dim ker, dim coker)` per order.
    pub ranks: Vec<(usize, usize, usize)>,
    /// Smallest singular value counted as nonzero, per order.
    pub min_singular: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct IndexOptions {
    pub margin: usize,
    pub stride: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self { margin: DEFAULT_MARGIN, stride: ORDER_STRIDE }
    }
}

/// Orders `N_max, N_max − stride, ...` down to `N_min`, ascending.
pub fn index_orders(n_min: usize, n_max: usize, stride: usize) -> Result<Vec<usize>> {
    if stride == 0 || n_min > n_max {
        return Err(Error::Config(format!("invalid order range {n_min}..={n_max} with stride {stride}")));
    }
    let mut v: Vec<usize> = (0..).map(|i| n_max as i64 - (i * stride) as i64).take_while(|&n| n >= n_min as i64).map(|n| n as usize).collect();
    v.reverse();
    if v.len() < STABLE_WINDOW {
        return Err(Error::Config(format!(
            "order range {n_min}..={n_max} with stride {stride} gives fewer than {STABLE_WINDOW} orders"
        )));
    }
    Ok(v)
}

struct SectionRank {
    zero: usize,
    min_nonzero: f64,
    ambiguous: Option<(f64, f64)>,
}

fn section_rank(m: &CMatrix, cols: usize) -> SectionRank {
    let sec = m.columns(0, cols).into_owned();
    let sv = SVD::new(sec, false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return SectionRank { zero: cols, min_nonzero: f64::INFINITY, ambiguous: None };
    }
    let delta = m.nrows() as f64 * f64::EPSILON * smax * 100.0;
    let zero = sv.iter().filter(|&&s| s < delta).count();
    let min_nonzero = sv.iter().copied().filter(|&s| s >= delta).fold(f64::INFINITY, f64::min);
    let ambiguous = sv.iter().copied().find(|&s| s >= delta / 10.0 && s <= delta * 10.0).map(|s| (s, delta));
    SectionRank { zero, min_nonzero, ambiguous }
}

/// `(dim ker, dim coker, min nonzero singular value, ambiguity)` of one square matrix.
fn rank_counts(m: &CMatrix, margin: usize) -> Result<(usize, usize, f64, Option<(f64, f64)>)> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(Error::DimensionMismatch("index family must produce square matrices".into()));
    }
    if margin >= d {
        return Err(Error::Config(format!("margin {margin} leaves no columns at dimension {d}")));
    }
    let cols = d - margin;
    let ker = section_rank(m, cols);
    let coker = section_rank(&m.adjoint(), cols);
    Ok((ker.zero, coker.zero, ker.min_nonzero.min(coker.min_nonzero), ker.ambiguous.or(coker.ambiguous)))
}

/// Stabilized `dim ker − dim coker` of a family representing one operator at growing truncation.
pub fn numerical_index<F>(family: F, n_min: usize, n_max: usize) -> Result<IndexResult>
where
    F: Fn(usize) -> Result<FockOperator> + Sync,
{
    numerical_index_with(family, n_min, n_max, IndexOptions::default())
}

pub fn numerical_index_with<F>(family: F, n_min: usize, n_max: usize, opts: IndexOptions) -> Result<IndexResult>
where
    F: Fn(usize) -> Result<FockOperator> + Sync,
{
    numerical_index_margins(|n| Ok((family(n)?.into_matrix(), opts.margin)), n_min, n_max, opts.stride)
}

/// Core loop; the family also chooses the margin per order.
fn numerical_index_margins<F>(family: F, n_min: usize, n_max: usize, stride: usize) -> Result<IndexResult>
where
    F: Fn(usize) -> Result<(CMatrix, usize)> + Sync,
{
    let orders = index_orders(n_min, n_max, stride)?;
    let counts: Vec<_> = orders
        .par_iter()
        .map(|&n| {
            let (m, margin) = family(n)?;
            rank_counts(&m, margin)
        })
        .collect::<Result<Vec<_>>>()?;
    let window_start = orders.len() - STABLE_WINDOW;
    // The dead band is enforced only where the verdict is read off.
    for (i, c) in counts.iter().enumerate().skip(window_start) {
        if let Some((value, threshold)) = c.3 {
            return Err(Error::RankAmbiguous { order: orders[i], value, threshold });
        }
    }
    let indices: Vec<i64> = counts.iter().map(|c| c.0 as i64 - c.1 as i64).collect();
    let last = indices[indices.len() - 1];
    if indices[window_start..].iter().any(|&k| k != last) {
        return Err(Error::NotStabilized {
            orders: orders[window_start..].to_vec(),
            indices: indices[window_start..].to_vec(),
        });
    }
    let first_stable = (0..indices.len()).rev().take_while(|&i| indices[i] == last).last().unwrap_or(window_start);
    Ok(IndexResult {
        index: last,
        stabilized_at: orders[first_stable],
        ranks: orders.iter().zip(&counts).map(|(&n, c)| (n, c.0, c.1)).collect(),
        min_singular: counts.iter().map(|c| c.2).collect(),
    })
}

/// `(1/2πi) ∮ d log f` from summed principal phase increments.
///
/// The increment sum is an integer by construction, so integrality is
/// checked against the spectral integral of `f'/f`; the two disagree when
/// the samples under-resolve `f`.
pub fn winding_number(f: &BoundaryFunction) -> Result<i64> {
    let min_modulus = f.min_modulus();
    if min_modulus <= WINDING_MIN_MODULUS {
        return Err(Error::ZeroOnCircle { min_modulus });
    }
    let s = f.samples();
    let g = s.len();
    let total: f64 = (0..g).map(|j| (s[(j + 1) % g] / s[j]).arg()).sum();
    let k = (total / (2.0 * PI)).round();
    let value = spectral_winding(f);
    if (value - k).abs() > WINDING_INTEGRALITY_TOL {
        return Err(Error::NonIntegralWinding { value });
    }
    Ok(k as i64)
}

fn spectral_winding(f: &BoundaryFunction) -> f64 {
    let g = f.grid_size();
    let mut coef = f.fourier();
    for (idx, c) in coef.iter_mut().enumerate() {
        let m = if idx < g / 2 { idx as f64 } else if idx == g / 2 { 0.0 } else { idx as f64 - g as f64 };
        *c *= Complex64::new(0.0, m);
    }
    FftPlanner::new().plan_fft_inverse(g).process(&mut coef);
    let mean: Complex64 = coef.iter().zip(f.samples()).map(|(d, v)| d / v).sum::<Complex64>() / g as f64;
    mean.im
}

/// `N × N` Hardy truncation `T_N(f)_{jk} = f̂(j − k)`.
pub fn toeplitz_matrix(f: &BoundaryFunction, n: usize) -> Result<FockOperator> {
    if n == 0 {
        return Err(Error::InvalidTruncation("Toeplitz section of size 0".into()));
    }
    let coef = f.fourier();
    let trunc = FockTruncation::new(1, n - 1)?;
    FockOperator::new(trunc, CMatrix::from_fn(n, n, |j, k| BoundaryFunction::coefficient(&coef, j as i64 - k as i64)))
}

/// Largest `|m|` with a non-negligible Fourier coefficient.
pub fn bandwidth(f: &BoundaryFunction) -> usize {
    let coef = f.fourier();
    let g = coef.len() as i64;
    let top = coef.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (1..g / 2)
        .rev()
        .find(|&m| {
            BoundaryFunction::coefficient(&coef, m).norm() > 1e-12 * top
                || BoundaryFunction::coefficient(&coef, -m).norm() > 1e-12 * top
        })
        .unwrap_or(0) as usize
}

/// Index of the Toeplitz operator `T(f)` on the Hardy space, from sections up to [`TOEPLITZ_ORDER`].
pub fn toeplitz_index(f: &BoundaryFunction) -> Result<IndexResult> {
    toeplitz_index_with(f, TOEPLITZ_ORDER - 2 * ORDER_STRIDE, TOEPLITZ_ORDER)
}

pub fn toeplitz_index_with(f: &BoundaryFunction, n_min: usize, n_max: usize) -> Result<IndexResult> {
    winding_number(f)?;
    let bw = bandwidth(f).max(1);
    numerical_index_margins(
        |n| Ok((toeplitz_matrix(f, n)?.into_matrix(), bw.min(n / 4).max(1))),
        n_min,
        n_max,
        ORDER_STRIDE,
    )
}

#[derive(Debug, Clone, Copy)]
pub struct ExtendedIndexOptions {
    pub delta: f64,
    pub cert_order: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub margin: usize,
}

impl Default for ExtendedIndexOptions {
    fn default() -> Self {
        Self {
            delta: crate::exsym::DEFAULT_DELTA,
            cert_order: crate::exsym::DEFAULT_CERT_ORDER,
            n_min: crate::exsym::DEFAULT_WORKING_DEGREE - 2 * ORDER_STRIDE,
            n_max: crate::exsym::DEFAULT_WORKING_DEGREE,
            margin: DEFAULT_MARGIN,
        }
    }
}

/// Index of an invertible extended symbol through the Hermite reduction:
/// the stabilized index of the quantized `τ₊` family.
pub fn index_of_extended(sigma: &ExtendedSymbol) -> Result<IndexResult> {
    Ok(index_of_extended_with(sigma, &ExtendedIndexOptions::default())?.0)
}

pub fn index_of_extended_with(
    sigma: &ExtendedSymbol,
    opts: &ExtendedIndexOptions,
) -> Result<(IndexResult, HermiteReduction)> {
    let red = hermite_reduction(sigma, opts.delta, opts.cert_order)?;
    let tau = red.tau_plus().clone();
    let res = numerical_index_with(
        |n| tau.operator(n),
        opts.n_min,
        opts.n_max,
        IndexOptions { margin: opts.margin, stride: ORDER_STRIDE },
    )?;
    Ok((res, red))
}

/// `f̂`-weighted random trigonometric polynomial used by the Toeplitz suites:
/// a product of linear factors with roots off the unit circle, times `z^{−shift}`.
pub fn factored_symbol(grid: usize, inside: &[Complex64], outside: &[Complex64], shift: i64) -> Result<BoundaryFunction> {
    BoundaryFunction::from_fn(grid, |t| {
        let z = Complex64::from_polar(1.0, t);
        let mut v = Complex64::from_polar(1.0, -(shift as f64) * t);
        for a in inside {
            v *= z - a;
        }
        for b in outside {
            v *= Complex64::from(1.0) - z / b;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, creation, transpose_dagger};
    use crate::max_abs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn phase(k: i64) -> BoundaryFunction {
        BoundaryFunction::trig(256, &[(k, Complex64::from(1.0))]).unwrap()
    }

    #[test]
    fn ladder_families() {
        let id = numerical_index(|n| Ok(FockOperator::identity(&FockTruncation::new(1, n)?)), 16, 32).unwrap();
        assert_eq!(id.index, 0);
        let cr = numerical_index(|n| creation(&FockTruncation::new(1, n)?, 0), 16, 32).unwrap();
        assert_eq!(cr.index, -1);
        let an = numerical_index(|n| annihilation(&FockTruncation::new(1, n)?, 0), 16, 32).unwrap();
        assert_eq!(an.index, 1);
        assert_eq!(an.ranks.last().unwrap(), &(32, 1, 0));
        assert_eq!(cr.stabilized_at, 16);
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(&phase(3)).unwrap(), 3);
        assert_eq!(winding_number(&BoundaryFunction::constant(64, Complex64::from(5.0)).unwrap()).unwrap(), 0);
        let f = factored_symbol(256, &[], &[Complex64::from(-2.0)], 2).unwrap();
        assert_eq!(winding_number(&f).unwrap(), -2);
        let zero = BoundaryFunction::trig(64, &[(0, Complex64::from(1.0)), (1, Complex64::from(1.0))]).unwrap();
        assert!(matches!(winding_number(&zero), Err(Error::ZeroOnCircle { .. })));
        // 16 samples of a fast-winding function alias: increments leave the principal branch
        let fast = BoundaryFunction::from_fn(16, |t| Complex64::from_polar(1.0, 1.5 * t * 5.0)).unwrap();
        assert!(matches!(winding_number(&fast), Err(Error::NonIntegralWinding { .. })));
    }

    #[test]
    fn toeplitz_examples() {
        assert_eq!(toeplitz_index(&phase(1)).unwrap().index, -1);
        assert_eq!(toeplitz_index(&phase(-2)).unwrap().index, 2);
        let f = BoundaryFunction::trig(256, &[(0, Complex64::from(2.0)), (1, Complex64::from(1.0))]).unwrap();
        assert_eq!(toeplitz_index(&f).unwrap().index, 0);
        let t = toeplitz_matrix(&phase(1), 4).unwrap();
        assert!((t.matrix()[(1, 0)] - Complex64::from(1.0)).norm() < 1e-14);
    }

    #[test]
    fn toeplitz_index_is_minus_winding_on_random_symbols() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_symbol(&mut rng);
            assert_eq!(toeplitz_index(&f).unwrap().index, -winding_number(&f).unwrap());
        }
    }

    fn random_symbol(rng: &mut ChaCha8Rng) -> BoundaryFunction {
        crate::sampling::random_trig_symbol(rng, 256).unwrap()
    }

    #[test]
    fn logarithmic_law_and_compact_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (f, g) = (random_symbol(&mut rng), random_symbol(&mut rng));
            let fg = f.mul(&g).unwrap();
            let a = toeplitz_index(&f).unwrap().index;
            let b = toeplitz_index(&g).unwrap().index;
            assert_eq!(toeplitz_index(&fg).unwrap().index, a + b);
        }
        let f = factored_symbol(256, &[Complex64::new(0.3, 0.1)], &[], 0).unwrap();
        let k = CMatrix::from_fn(4, 4, |i, j| Complex64::new((i + 2 * j) as f64 * 0.3, 1.0));
        let perturbed = numerical_index_with(
            |n| {
                let mut m = toeplitz_matrix(&f, n)?.into_matrix();
                m.view_mut((0, 0), (4, 4)).zip_apply(&k, |a, b| *a += b);
                FockOperator::new(FockTruncation::new(1, n - 1)?, m)
            },
            48,
            64,
            IndexOptions { margin: 2, stride: 4 },
        )
        .unwrap();
        assert_eq!(perturbed.index, toeplitz_index(&f).unwrap().index);
    }

    #[test]
    fn transpose_negates_index() {
        let t = |n| toeplitz_matrix(&phase(-3), n);
        let a = numerical_index(t, 32, 48).unwrap().index;
        let b = numerical_index(|n| Ok(transpose_dagger(&t(n)?)), 32, 48).unwrap().index;
        assert_eq!((a, b), (3, -3));
    }

    #[test]
    fn unstable_and_bad_ranges() {
        assert!(matches!(index_orders(10, 12, 4), Err(Error::Config(_))));
        assert_eq!(index_orders(8, 20, 4).unwrap(), vec![8, 12, 16, 20]);
        // backward shift by N/8: the index keeps growing with N
        let grow = |n: usize| {
            let t = FockTruncation::new(1, n)?;
            let d = t.dim();
            let s = n / 8;
            FockOperator::new(t, CMatrix::from_fn(d, d, |i, j| if j == i + s { Complex64::from(1.0) } else { Complex64::default() }))
        };
        assert!(matches!(numerical_index(grow, 16, 32), Err(Error::NotStabilized { .. })));
    }

    #[test]
    fn ambiguous_singular_value_is_loud() {
        let fam = |n: usize| {
            let t = FockTruncation::new(1, n)?;
            let d = t.dim();
            let mut m = CMatrix::identity(d, d);
            m[(0, 0)] = Complex64::from(d as f64 * f64::EPSILON * 100.0);
            FockOperator::new(t, m)
        };
        assert!(matches!(numerical_index(fam, 16, 32), Err(Error::RankAmbiguous { .. })));
        assert!(max_abs(&CMatrix::identity(2, 2)) == 1.0);
    }

    #[test]
    fn result_json_shape() {
        let r = numerical_index(|n| creation(&FockTruncation::new(1, n)?, 0), 16, 24).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["index"], -1);
        assert_eq!(v["stabilizedAt"], 16);
        assert_eq!(v["ranks"][0], serde_json::json!([16, 0, 1]));
        assert!(v["minSingular"].is_array());
    }
}
