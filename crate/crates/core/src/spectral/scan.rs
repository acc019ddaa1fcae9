use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{classify_point, SpectralClassification, SpectralContext};

pub const MAX_GRID_POINTS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid of {0} points exceeds the limit of {MAX_GRID_POINTS}")]
    TooLarge(u64),
    #[error("grid bounds must be finite with min <= max")]
    Bounds,
    #[error("grid spec `{0}`: expected re_min,re_max,im_min,im_max,nx,ny")]
    Parse(String),
}

/// Rectangle `[re_min, re_max] x [im_min, im_max]` sampled at `nx x ny` nodes, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: u32,
    pub ny: u32,
}

fn node(min: f64, max: f64, count: u32, i: u32) -> f64 {
    if count <= 1 {
        min
    } else {
        min + (max - min) * i as f64 / (count - 1) as f64
    }
}

impl Grid {
    pub fn square(min: f64, max: f64, n: u32) -> Self {
        Self {
            re_min: min,
            re_max: max,
            im_min: min,
            im_max: max,
            nx: n,
            ny: n,
        }
    }

    pub fn len(&self) -> u64 {
        self.nx as u64 * self.ny as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.len() > MAX_GRID_POINTS {
            return Err(GridError::TooLarge(self.len()));
        }
        let b = [self.re_min, self.re_max, self.im_min, self.im_max];
        if b.iter().any(|x| !x.is_finite()) || self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(GridError::Bounds);
        }
        Ok(())
    }

    /// Node `k` in row-major order, imaginary part outermost.
    pub fn point(&self, k: u64) -> Complex64 {
        let i = (k % self.nx as u64) as u32;
        let j = (k / self.nx as u64) as u32;
        Complex64::new(node(self.re_min, self.re_max, self.nx, i), node(self.im_min, self.im_max, self.ny, j))
    }

    /// `re_min,re_max,im_min,im_max,nx,ny`.
    pub fn parse(s: &str) -> Result<Self, GridError> {
        let err = || GridError::Parse(s.to_string());
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(err());
        }
        let f = |i: usize| parts[i].parse::<f64>().map_err(|_| err());
        let u = |i: usize| parts[i].parse::<u32>().map_err(|_| err());
        let g = Self {
            re_min: f(0)?,
            re_max: f(1)?,
            im_min: f(2)?,
            im_max: f(3)?,
            nx: u(4)?,
            ny: u(5)?,
        };
        g.validate()?;
        Ok(g)
    }
}

/// Classify every node; output order follows [`Grid::point`] regardless of scheduling.
pub fn region_scan(ctx: &SpectralContext, grid: &Grid) -> Result<Vec<SpectralClassification>, GridError> {
    grid.validate()?;
    Ok((0..grid.len())
        .into_par_iter()
        .map(|k| classify_point(ctx, grid.point(k)))
        .collect())
}

/// `re,im,alpha,label,rule_id,sup_value`.
pub fn scan_csv(rows: &[SpectralClassification]) -> String {
    let mut out = String::from("re,im,alpha,label,rule_id,sup_value\n");
    for r in rows {
        let alpha = r.alpha.map(|a| format!("{a:.12e}")).unwrap_or_default();
        let sup = r.sup_value.map(|v| format!("{v:.12e}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{alpha},{},{},{sup}",
            r.re,
            r.im,
            r.label.as_str(),
            r.rule.id()
        );
    }
    out
}
