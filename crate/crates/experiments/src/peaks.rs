//! Local-maximum peak detection with parabolic refinement.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    /// Refined position on the axis.
    pub position: f64,
    pub height: f64,
}

pub const PEAK_THRESHOLD: f64 = 3.0;

/// Median of the values: the off-resonant background of a sparse spectrum.
pub fn noise_floor(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Vertex of the parabola through three points.
pub fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a == 0.0 {
        return (x[1], y[1]);
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = -b / (2.0 * a);
    let yv = y[1] + (xv - x[1]) * (b + a * (xv + x[1]));
    (xv, yv)
}

/// Interior local maxima higher than 3× `floor`.
pub fn find_peaks(x: &[f64], y: &[f64], floor: f64) -> Vec<Peak> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > PEAK_THRESHOLD * floor)
        .map(|i| {
            let (position, height) = parabolic_vertex([x[i - 1], x[i], x[i + 1]], [y[i - 1], y[i], y[i + 1]]);
            Peak { index: i, position, height }
        })
        .collect()
}

/// Interior local minima, refined.
pub fn find_minima(x: &[f64], y: &[f64]) -> Vec<Peak> {
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    find_peaks(x, &neg, f64::NEG_INFINITY)
        .into_iter()
        .map(|p| Peak { height: -p.height, ..p })
        .collect()
}
