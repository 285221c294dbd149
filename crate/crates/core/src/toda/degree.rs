use serde::Serialize;
use thiserror::Error;

use super::{Layer, LatticePoint};
use crate::laurent::{DegreeStats, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("degree growth needs at least 3 layers, got {0}")]
    TooFewLayers(usize),
    #[error("layer {0} has no value at the window center")]
    MissingCenter(u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerGrowth {
    pub t: u32,
    pub stats: DegreeStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanRatio {
    pub t: u32,
    /// `span_t / span_{t-1}` at the window center.
    pub ratio: f64,
}

/// Degree growth at the window center.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeGrowth {
    pub layers: Vec<LayerGrowth>,
    pub ratios: Vec<SpanRatio>,
    /// Least-squares slope of `ln(span)` against `t` over the last
    /// `min(4, available)` layers. Indicative only: windows cap `t` severely.
    pub entropy_estimate: f64,
}

pub fn degree_growth(layers: &[Layer<LaurentPoly>]) -> Result<DegreeGrowth, GrowthError> {
    if layers.len() < 3 {
        return Err(GrowthError::TooFewLayers(layers.len()));
    }
    let mut rows = Vec::with_capacity(layers.len());
    for layer in layers {
        let d = layer.values.keys().next().map(|p| p.dim()).unwrap_or(0);
        let center = LatticePoint::origin(d);
        let v = layer.get(&center).ok_or(GrowthError::MissingCenter(layer.t))?;
        rows.push(LayerGrowth {
            t: layer.t,
            stats: v.degree_stats(),
        });
    }
    let spans: Vec<(u32, f64)> = rows
        .iter()
        .map(|r| (r.t, r.stats.span().unwrap_or(0) as f64))
        .collect();
    let ratios = spans
        .windows(2)
        .map(|w| SpanRatio {
            t: w[1].0,
            ratio: w[1].1 / w[0].1,
        })
        .collect();
    let tail = &spans[spans.len() - spans.len().min(4)..];
    let entropy_estimate = least_squares_slope(tail.iter().map(|&(t, s)| (t as f64, s.ln())));
    Ok(DegreeGrowth {
        layers: rows,
        ratios,
        entropy_estimate,
    })
}

fn least_squares_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<_> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
