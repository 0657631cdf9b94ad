use std::f64::consts::PI;
use std::io::Write;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::C64;
use crate::spectroscopy::DeviationState;
use crate::spin_system::{bit, SpinSystem};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Acquisition {
    pub dwell_s: f64,
    pub n_points: usize,
    /// Transform length as a multiple of `n_points`.
    pub zero_fill: usize,
}

impl Default for Acquisition {
    fn default() -> Self {
        Self {
            dwell_s: 20e-6,
            n_points: 16384,
            zero_fill: 4,
        }
    }
}

impl Acquisition {
    pub fn validate(&self) -> Result<()> {
        if !(self.dwell_s > 0.0 && self.dwell_s.is_finite()) {
            return Err(Error::Acquisition(format!("dwell must be positive, got {}", self.dwell_s)));
        }
        if self.n_points < 2 || !self.n_points.is_power_of_two() {
            return Err(Error::Acquisition(format!(
                "n_points must be a power of two >= 2, got {}",
                self.n_points
            )));
        }
        if self.zero_fill == 0 || !self.zero_fill.is_power_of_two() {
            return Err(Error::Acquisition(format!(
                "zero_fill must be a power of two, got {}",
                self.zero_fill
            )));
        }
        Ok(())
    }

    pub fn nyquist_hz(&self) -> f64 {
        0.5 / self.dwell_s
    }

    pub fn transform_len(&self) -> usize {
        self.n_points * self.zero_fill
    }

    /// Spacing of the frequency axis in Hz.
    pub fn bin_hz(&self) -> f64 {
        1.0 / (self.transform_len() as f64 * self.dwell_s)
    }

    pub fn acquisition_time(&self) -> f64 {
        self.n_points as f64 * self.dwell_s
    }
}

/// Single-spin transition `b -> a` read by `I+`: `a` has `spin` down, `b` up,
/// and the pair contributes `rho_ab exp(-i 2 pi freq_hz t)` to the FID.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub spin: usize,
    pub a: usize,
    pub b: usize,
    pub freq_hz: f64,
}

/// All `n 2^(n-1)` transitions, ordered by spin then by the partner bits.
pub fn transitions(sys: &SpinSystem) -> Vec<Transition> {
    let n = sys.n_spins();
    let e = sys.energies();
    let mut out = Vec::with_capacity(n << (n - 1));
    for spin in 1..=n {
        let mask = 1 << (n - spin);
        for b in (0..1usize << n).filter(|&b| bit(b, spin, n) == 0) {
            let a = b | mask;
            out.push(Transition {
                spin,
                a,
                b,
                freq_hz: (e[b] - e[a]) / (2.0 * PI),
            });
        }
    }
    out
}

fn check_window(sys: &SpinSystem, acq: &Acquisition) -> Result<()> {
    acq.validate()?;
    let needed_hz = transitions(sys)
        .iter()
        .map(|t| t.freq_hz.abs())
        .fold(0.0, f64::max);
    let nyquist_hz = acq.nyquist_hz();
    if needed_hz >= nyquist_hz {
        return Err(Error::Aliasing {
            needed_hz,
            nyquist_hz,
        });
    }
    Ok(())
}

/// `s_k = Tr(e^{iHt} rho e^{-iHt} I+) e^{-pi lw t}` at `t = k dwell`.
///
/// `H` is diagonal, so the trace reduces to a sum over the transitions.
pub fn fid(state: &DeviationState, sys: &SpinSystem, acq: &Acquisition) -> Result<Vec<C64>> {
    let dim = 1usize << sys.n_spins();
    if state.rho().dim() != dim {
        return Err(Error::DimensionMismatch {
            left: state.rho().dim(),
            right: dim,
        });
    }
    check_window(sys, acq)?;
    let terms: Vec<(C64, f64)> = transitions(sys)
        .into_iter()
        .map(|t| (state.rho().get(t.a, t.b), t.freq_hz))
        .filter(|(c, _)| c.norm() > 0.0)
        .collect();
    Ok(damped_sum(&terms, sys.linewidth_hz(), acq))
}

/// `sum_j c_j exp((-i 2 pi f_j - pi lw) t_k)`.
pub(crate) fn damped_sum(terms: &[(C64, f64)], linewidth_hz: f64, acq: &Acquisition) -> Vec<C64> {
    let mut s = vec![C64::new(0.0, 0.0); acq.n_points];
    for &(c, f) in terms {
        let step = C64::new(-PI * linewidth_hz * acq.dwell_s, -2.0 * PI * f * acq.dwell_s);
        for (k, v) in s.iter_mut().enumerate() {
            // Direct exponentials rather than a running product keep the
            // error flat over long acquisitions.
            *v += c * (step * k as f64).exp();
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub freq_hz: Vec<f64>,
    pub amplitude: Vec<C64>,
    pub acquisition: Acquisition,
    pub linewidth_hz: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.freq_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq_hz.is_empty()
    }

    pub fn bin_hz(&self) -> f64 {
        self.acquisition.bin_hz()
    }

    /// Index of the bin nearest `freq_hz`, clamped to the axis.
    pub fn bin_of(&self, freq_hz: f64) -> usize {
        let n = self.len() as f64;
        let j = (freq_hz / self.bin_hz() + n / 2.0).round();
        j.clamp(0.0, n - 1.0) as usize
    }

    /// `freq_hz,real,imag` rows, frequency ascending.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["freq_hz", "real", "imag"])?;
        for (f, a) in self.freq_hz.iter().zip(&self.amplitude) {
            out.write_record([f.to_string(), a.re.to_string(), a.im.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Largest pointwise difference relative to the largest magnitude of `self`.
    pub fn relative_difference(&self, other: &Spectrum) -> f64 {
        let scale = self.amplitude.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Discrete transform of the FID with kernel `e^{+i 2 pi nu t}`, so a line
/// at frequency `f` appears at `+f`. Samples are scaled by the dwell and the
/// first is halved, making the transform a trapezoidal estimate of the
/// continuous one; the axis is shifted to run from `-1/(2 dwell)` upward.
pub fn spectrum(fid: &[C64], acq: &Acquisition, linewidth_hz: f64) -> Result<Spectrum> {
    acq.validate()?;
    if fid.len() != acq.n_points {
        return Err(Error::Acquisition(format!(
            "FID has {} points, acquisition expects {}",
            fid.len(),
            acq.n_points
        )));
    }
    let m = acq.transform_len();
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for (dst, src) in buf.iter_mut().zip(fid) {
        *dst = src * acq.dwell_s;
    }
    buf[0] *= 0.5;
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let half = m / 2;
    let amplitude = (0..m).map(|j| buf[(j + half) % m]).collect();
    let bin = acq.bin_hz();
    let freq_hz = (0..m).map(|j| (j as f64 - half as f64) * bin).collect();
    Ok(Spectrum {
        freq_hz,
        amplitude,
        acquisition: *acq,
        linewidth_hz,
    })
}

/// Spectrum value at shifted bin `j` of a unit line at `freq_hz`, from the
/// closed-form geometric sum of the sampled decay.
pub(crate) fn unit_line_response(freq_hz: f64, linewidth_hz: f64, acq: &Acquisition, j: usize) -> C64 {
    let m = acq.transform_len();
    let k_bin = (j + m - m / 2) % m;
    let kernel = 2.0 * PI * k_bin as f64 / m as f64;
    let step = C64::new(
        -PI * linewidth_hz * acq.dwell_s,
        -2.0 * PI * freq_hz * acq.dwell_s + kernel,
    );
    let r = step.exp();
    let n = acq.n_points as f64;
    let denom = C64::new(1.0, 0.0) - r;
    let sum = if denom.norm() < 1e-12 {
        // r = 1 only without damping, exactly on a bin.
        C64::new(n, 0.0)
    } else {
        (C64::new(1.0, 0.0) - (step * n).exp()) / denom
    };
    (sum - 0.5) * acq.dwell_s
}
