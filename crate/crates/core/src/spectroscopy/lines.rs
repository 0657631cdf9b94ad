use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::C64;
use crate::spectroscopy::acquisition::{transitions, unit_line_response, Spectrum};
use crate::spectroscopy::DeviationState;
use crate::spin_system::{bit, SpinSystem};

/// Ratio to the reference amplitude separating the verdicts.
pub const CLASSIFY_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Line {
    pub spin: usize,
    /// `+1` when the coupling partner (ascending spin order) is up.
    pub partner_signs: Vec<i8>,
    /// Predicted position `shift_i + sum_j +-J_ij/2`.
    pub freq_hz: f64,
    /// Interpolated maximum of `|Re|` inside the integration window.
    pub observed_freq_hz: f64,
    /// Integral of the real spectrum over the window, in Hz x spectrum units.
    pub window_integral: f64,
    /// `window_integral` divided by the fraction of a Lorentzian of this
    /// width that falls inside the window.
    pub normalized_integral: f64,
    /// Line amplitude recovered by solving the window integrals against the
    /// exact sampled response of every predicted line; removes the
    /// contribution of overlapping neighbours.
    pub signed_amplitude: f64,
    /// Another predicted line lies within twice the window half-width.
    pub overlapped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineList {
    pub linewidth_hz: f64,
    /// Half-width of the integration window.
    pub window_hz: f64,
    pub lines: Vec<Line>,
}

impl LineList {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.signed_amplitude).collect()
    }

    /// Line of `spin` with the given partner signs.
    pub fn find(&self, spin: usize, partner_signs: &[i8]) -> Option<&Line> {
        self.lines
            .iter()
            .find(|l| l.spin == spin && l.partner_signs == partner_signs)
    }

    /// `spin,sign1,sign2,freq_hz,amplitude`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["spin", "sign1", "sign2", "freq_hz", "amplitude"])?;
        let sign = |s: Option<&i8>| match s {
            Some(1) => "+".to_string(),
            Some(_) => "-".to_string(),
            None => String::new(),
        };
        for l in &self.lines {
            out.write_record([
                l.spin.to_string(),
                sign(l.partner_signs.first()),
                sign(l.partner_signs.get(1)),
                round9(l.freq_hz).to_string(),
                round9(l.signed_amplitude).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Rounds to 1e-9 so that output files do not carry float noise.
pub fn round9(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// The coefficient `rho_ab` of each line in the FID, in line-list order.
pub fn analytic_line_amplitudes(state: &DeviationState, sys: &SpinSystem) -> Vec<C64> {
    transitions(sys)
        .iter()
        .map(|t| state.rho().get(t.a, t.b))
        .collect()
}

fn window_bins(spec: &Spectrum, center: f64, half_width: f64) -> std::ops::RangeInclusive<usize> {
    let mut lo = spec.bin_of(center - half_width);
    let mut hi = spec.bin_of(center + half_width);
    if spec.freq_hz[lo] < center - half_width && lo < hi {
        lo += 1;
    }
    if spec.freq_hz[hi] > center + half_width && hi > lo {
        hi -= 1;
    }
    lo..=hi
}

fn parabolic_peak(spec: &Spectrum, bins: std::ops::RangeInclusive<usize>) -> f64 {
    let (j, _) = bins
        .clone()
        .map(|j| (j, spec.amplitude[j].re.abs()))
        .fold((*bins.start(), f64::MIN), |best, c| if c.1 > best.1 { c } else { best });
    let f0 = spec.freq_hz[j];
    if j == 0 || j + 1 >= spec.len() {
        return f0;
    }
    let (y0, y1, y2) = (
        spec.amplitude[j - 1].re.abs(),
        spec.amplitude[j].re.abs(),
        spec.amplitude[j + 1].re.abs(),
    );
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < f64::MIN_POSITIVE {
        return f0;
    }
    let delta = (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5);
    f0 + delta * spec.bin_hz()
}

/// Integrates the spectrum around each predicted line over `+-2 lw` (one
/// bin when `lw = 0`) and recovers the line amplitudes.
pub fn extract_lines(spec: &Spectrum, sys: &SpinSystem) -> Result<LineList> {
    if spec.is_empty() {
        return Err(Error::Acquisition("empty spectrum".into()));
    }
    let n = sys.n_spins();
    let lw = spec.linewidth_hz;
    let df = spec.bin_hz();
    let half = if lw > 0.0 { 2.0 * lw } else { df };
    let lorentz_fraction = if lw > 0.0 {
        (2.0 * half / lw).atan() / PI
    } else {
        0.5
    };
    let trans = transitions(sys);
    let windows: Vec<_> = trans.iter().map(|t| window_bins(spec, t.freq_hz, half)).collect();

    let integrals: Vec<C64> = windows
        .iter()
        .map(|w| w.clone().map(|j| spec.amplitude[j]).sum::<C64>() * df)
        .collect();
    let m = trans.len();
    let response = DMatrix::from_fn(m, m, |i, k| {
        windows[i]
            .clone()
            .map(|j| unit_line_response(trans[k].freq_hz, lw, &spec.acquisition, j))
            .sum::<C64>()
            * df
    });
    let rhs = DMatrix::from_column_slice(m, 1, &integrals);
    let svd = response.svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let coeffs = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::Acquisition(format!("line fit failed: {e}")))?;

    let lines = trans
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let partner_signs = (1..=n)
                .filter(|&p| p != t.spin)
                .map(|p| if bit(t.b, p, n) == 0 { 1 } else { -1 })
                .collect();
            let overlapped = trans
                .iter()
                .enumerate()
                .any(|(k, o)| k != i && (o.freq_hz - t.freq_hz).abs() < 2.0 * half);
            Line {
                spin: t.spin,
                partner_signs,
                freq_hz: t.freq_hz,
                observed_freq_hz: parabolic_peak(spec, windows[i].clone()),
                window_integral: integrals[i].re,
                normalized_integral: integrals[i].re / lorentz_fraction,
                signed_amplitude: coeffs[(i, 0)].re,
                overlapped,
            }
        })
        .collect();
    Ok(LineList {
        linewidth_hz: lw,
        window_hz: half,
        lines,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Constant,
    Balanced,
    /// Some line is between the thresholds and none is clearly inverted.
    Ambiguous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
            Verdict::Ambiguous => "ambiguous",
        })
    }
}

/// Compares each line with the same line of the `f = 0x00` reference:
/// constant when every ratio is at least +0.5, balanced when some ratio is
/// at most -0.5, ambiguous otherwise.
pub fn classify_from_spectrum(lines: &LineList, reference: &LineList) -> Result<Verdict> {
    if lines.len() != reference.len() || lines.is_empty() {
        return Err(Error::Acquisition(format!(
            "line lists differ in length ({} vs {})",
            lines.len(),
            reference.len()
        )));
    }
    let mut ratios = Vec::with_capacity(lines.len());
    for (l, r) in lines.lines.iter().zip(&reference.lines) {
        if r.signed_amplitude.abs() < 1e-12 {
            return Err(Error::Acquisition(format!(
                "reference line of spin {} at {} Hz has no intensity",
                r.spin, r.freq_hz
            )));
        }
        ratios.push(l.signed_amplitude / r.signed_amplitude);
    }
    Ok(if ratios.iter().any(|&q| q <= -CLASSIFY_THRESHOLD) {
        Verdict::Balanced
    } else if ratios.iter().all(|&q| q >= CLASSIFY_THRESHOLD) {
        Verdict::Constant
    } else {
        Verdict::Ambiguous
    })
}
