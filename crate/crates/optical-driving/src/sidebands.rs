//! Floquet sideband ladders Δₙ of a longitudinally driven two-level system.
//!
//! Δₙ is the coefficient of e^{−inωt} in Ω·exp(−i∫drive dt), with ω the
//! fundamental drive frequency.

use quantum_core::Complex64;

use crate::bessel::bessel_j_ladder;
use crate::drive::AcDrive;
use crate::error::DriveError;
use crate::generalized::generalized_bessel_2d_ladder;

pub const OCTAVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SidebandLadder {
    pub n_max: usize,
    /// Δₙ at index n + n_max.
    pub amplitudes: Vec<Complex64>,
}

impl SidebandLadder {
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let idx = n + self.n_max as i64;
        (idx >= 0).then(|| self.amplitudes.get(idx as usize).copied()).flatten()
    }

    pub fn orders(&self) -> impl Iterator<Item = i64> + '_ {
        let m = self.n_max as i64;
        -m..=m
    }

    pub fn total_power(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn sideband_amplitudes(omega: f64, drive: &AcDrive, n_max: usize) -> Result<SidebandLadder, DriveError> {
    drive.validate()?;
    let m = n_max as i64;
    let amplitudes = match drive.tones.as_slice() {
        [tone] => {
            let ladder = bessel_j_ladder(n_max, tone.amplitude / tone.frequency);
            (-m..=m)
                .map(|n| {
                    let j = ladder[n.unsigned_abs() as usize] * if n < 0 && n % 2 != 0 { -1.0 } else { 1.0 };
                    Complex64::from_polar(omega * j, -(n as f64) * tone.phase)
                })
                .collect()
        }
        [t1, t2] => {
            if (t2.frequency - 2.0 * t1.frequency).abs() > OCTAVE_TOLERANCE * t2.frequency {
                return Err(DriveError::NotOctave {
                    w1: t1.frequency,
                    w2: t2.frequency,
                });
            }
            let phi = t2.phase - 2.0 * t1.phase;
            let g = generalized_bessel_2d_ladder(n_max, t1.amplitude / t1.frequency, t2.amplitude / t2.frequency, phi);
            (-m..=m)
                .zip(g)
                .map(|(n, z)| z * Complex64::from_polar(omega, -(n as f64) * t1.phase))
                .collect()
        }
        _ => unreachable!("validated tone count"),
    };
    Ok(SidebandLadder { n_max, amplitudes })
}
