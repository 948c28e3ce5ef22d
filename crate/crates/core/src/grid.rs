//! Frequency grids and complex spectra sampled on them.

use std::ops::Index;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// Strictly increasing set of angular frequencies (rad/s).
///
/// Cheap to clone: the points are shared behind an `Arc`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Arc<[f64]>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("frequency grid is empty".into()));
        }
        if let Some(bad) = points.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite grid point {bad}")));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "grid not strictly increasing at index {}: {} -> {}",
                i + 1,
                points[i],
                points[i + 1]
            )));
        }
        Ok(Self { points: points.into() })
    }

    /// Uniform grid of `n` points spanning `[lo, hi]` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(Error::InvalidArgument(format!("linspace({lo}, {hi}, {n}) is empty or reversed")));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        points[n - 1] = hi;
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `points[i] == -points[len-1-i]` exactly for every `i`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| self.points[i] == -self.points[n - 1 - i])
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::GridMismatch("operation needs a grid symmetric about zero".into()))
        }
    }

    /// Index of the point at `-points[i]`; only meaningful on symmetric grids.
    pub fn mirror_index(&self, i: usize) -> usize {
        self.points.len() - 1 - i
    }

    /// Index of the grid point closest to `omega`.
    pub fn nearest_index(&self, omega: f64) -> usize {
        match self.points.binary_search_by(|p| p.total_cmp(&omega)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i == self.points.len() => i - 1,
            Err(i) => {
                if (self.points[i] - omega).abs() < (omega - self.points[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        }
    }

    fn same_as(&self, other: &FrequencyGrid) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }

    pub(crate) fn require_same(&self, other: &FrequencyGrid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "spectra sampled on different grids ({} vs {} points)",
                self.len(),
                other.len()
            )))
        }
    }
}

impl Index<usize> for FrequencyGrid {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.points[i]
    }
}

/// Uniform grid `{-omega_max, ..., 0, ..., omega_max}` with `2*n_half + 1` points.
///
/// Negative points are exact negations of the positive ones.
pub fn make_symmetric_grid(omega_max: f64, n_half: usize) -> Result<FrequencyGrid> {
    if !omega_max.is_finite() || omega_max <= 0.0 {
        return Err(Error::InvalidArgument(format!("omega_max must be positive, got {omega_max}")));
    }
    if n_half == 0 {
        return Err(Error::InvalidArgument("n_half must be at least 1".into()));
    }
    let positive: Vec<f64> = (1..=n_half).map(|k| omega_max * k as f64 / n_half as f64).collect();
    let mut points = Vec::with_capacity(2 * n_half + 1);
    points.extend(positive.iter().rev().map(|w| -w));
    points.push(0.0);
    points.extend_from_slice(&positive);
    FrequencyGrid::new(points)
}

/// Complex function sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: &FrequencyGrid, value: Complex64) -> Self {
        Self { grid: grid.clone(), values: vec![value; grid.len()] }
    }

    pub fn zeros(grid: &FrequencyGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    /// Samples `f(omega)` at every grid point.
    pub fn from_fn<F>(grid: &FrequencyGrid, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        let pts = grid.points();
        let values = crate::par::map_indexed(pts.len(), Default::default(), |i| f(pts[i]));
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Iterates `(omega, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.grid.require_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        self.map(|v| v * k)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Value at `-omega` for each grid point `omega`.
    pub fn reflect(&self) -> Result<Self> {
        self.grid.require_symmetric()?;
        let values = self.values.iter().rev().copied().collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// Largest `|a - b| / max(|a|, |b|)` over the grid (0 where both vanish).
    pub fn max_rel_diff(&self, other: &Self) -> Result<f64> {
        self.grid.require_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let scale = a.norm().max(b.norm());
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).norm() / scale
                }
            })
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for ComplexSpectrum {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

/// Free-function form of [`ComplexSpectrum::reflect`].
pub fn reflect(spectrum: &ComplexSpectrum) -> Result<ComplexSpectrum> {
    spectrum.reflect()
}
