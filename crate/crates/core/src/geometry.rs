//! Array, frequency-grid and user-location primitives.
//!
//! The array is a ULA along the y-axis centered at the origin; angles are
//! measured from broadside (the x-axis).

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result, SPEED_OF_LIGHT};

/// Signed index of element `i` in a centered run of `count` elements,
/// `i - (count - 1) / 2`.
#[inline]
pub fn centered_index(i: usize, count: usize) -> f64 {
    i as f64 - (count as f64 - 1.0) / 2.0
}

/// A uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    n_antennas: usize,
    carrier_freq: f64,
    spacing: f64,
}

impl ArrayGeometry {
    /// Half-wavelength array at `carrier_freq`.
    pub fn new(n_antennas: usize, carrier_freq: f64) -> Result<Self> {
        if !(carrier_freq.is_finite() && carrier_freq > 0.0) {
            return Err(Error::param("carrier frequency", "must be finite and > 0"));
        }
        Self::with_spacing(n_antennas, carrier_freq, SPEED_OF_LIGHT / carrier_freq / 2.0)
    }

    pub fn with_spacing(n_antennas: usize, carrier_freq: f64, spacing: f64) -> Result<Self> {
        if n_antennas == 0 {
            return Err(Error::param("antenna count", "must be at least 1"));
        }
        if !(carrier_freq.is_finite() && carrier_freq > 0.0) {
            return Err(Error::param("carrier frequency", "must be finite and > 0"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::param("antenna spacing", "must be finite and > 0"));
        }
        Ok(Self {
            n_antennas,
            carrier_freq,
            spacing,
        })
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn carrier_freq(&self) -> f64 {
        self.carrier_freq
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    /// Wavenumber at the carrier, `2π f_c / c`.
    pub fn wavenumber(&self) -> f64 {
        wavenumber(self.carrier_freq)
    }

    /// Physical aperture `(N - 1) d`. Callers wanting the `N d` convention
    /// use [`ArrayGeometry::span`].
    pub fn aperture(&self) -> f64 {
        (self.n_antennas as f64 - 1.0) * self.spacing
    }

    /// `N d`, the aperture convention used by the large-array closed forms.
    pub fn span(&self) -> f64 {
        self.n_antennas as f64 * self.spacing
    }

    /// `2d / λ_c`; equals 1 for a half-wavelength array.
    pub fn spacing_ratio(&self) -> f64 {
        2.0 * self.spacing / self.wavelength()
    }

    /// y-coordinate of antenna `n`.
    #[inline]
    pub fn offset(&self, n: usize) -> f64 {
        centered_index(n, self.n_antennas) * self.spacing
    }

    pub fn antenna_offsets(&self) -> Vec<f64> {
        (0..self.n_antennas).map(|n| self.offset(n)).collect()
    }
}

#[inline]
pub fn wavenumber(freq: f64) -> f64 {
    2.0 * core::f64::consts::PI * freq / SPEED_OF_LIGHT
}

/// Uniform OFDM subcarrier grid spanning `[f_c - B/2, f_c + B/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmGrid {
    n_subcarriers: usize,
    bandwidth: f64,
    center_freq: f64,
}

impl OfdmGrid {
    pub fn new(n_subcarriers: usize, bandwidth: f64, center_freq: f64) -> Result<Self> {
        if n_subcarriers == 0 {
            return Err(Error::param("subcarrier count", "must be at least 1"));
        }
        if !(center_freq.is_finite() && center_freq > 0.0) {
            return Err(Error::param("center frequency", "must be finite and > 0"));
        }
        if !bandwidth.is_finite() || bandwidth < 0.0 {
            return Err(Error::param("bandwidth", "must be finite and >= 0"));
        }
        if bandwidth >= 2.0 * center_freq {
            return Err(Error::param("bandwidth", "lowest subcarrier must stay above 0 Hz"));
        }
        Ok(Self {
            n_subcarriers,
            bandwidth,
            center_freq,
        })
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn center_freq(&self) -> f64 {
        self.center_freq
    }

    /// Normalized position of subcarrier `m` in `[-1, 1]`, `2m/(M-1) - 1`.
    /// A single-carrier grid sits at 0.
    #[inline]
    pub fn position(&self, m: usize) -> f64 {
        if self.n_subcarriers == 1 {
            return 0.0;
        }
        2.0 * m as f64 / (self.n_subcarriers as f64 - 1.0) - 1.0
    }

    #[inline]
    pub fn freq(&self, m: usize) -> f64 {
        // Endpoints are pinned so f_0 and f_{M-1} are exact.
        if self.n_subcarriers > 1 && m == 0 {
            return self.low();
        }
        if self.n_subcarriers > 1 && m + 1 == self.n_subcarriers {
            return self.high();
        }
        self.center_freq + self.bandwidth / 2.0 * self.position(m)
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n_subcarriers).map(|m| self.freq(m)).collect()
    }

    pub fn low(&self) -> f64 {
        if self.n_subcarriers == 1 {
            self.center_freq
        } else {
            self.center_freq - self.bandwidth / 2.0
        }
    }

    pub fn high(&self) -> f64 {
        if self.n_subcarriers == 1 {
            self.center_freq
        } else {
            self.center_freq + self.bandwidth / 2.0
        }
    }

    /// `η_m = f_m / f_c`.
    pub fn eta(&self, m: usize) -> f64 {
        self.freq(m) / self.center_freq
    }

    /// `ε_m = η_m - 1`, computed without the cancellation of `η_m - 1`.
    pub fn epsilon(&self, m: usize) -> f64 {
        self.max_epsilon() * self.position(m)
    }

    /// `B / (2 f_c)`, the largest `|ε_m|`.
    pub fn max_epsilon(&self) -> f64 {
        if self.n_subcarriers == 1 {
            0.0
        } else {
            self.bandwidth / (2.0 * self.center_freq)
        }
    }
}

/// User position in polar coordinates about the array center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    r: f64,
    theta: f64,
}

impl Location {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::param("distance", "must be finite and > 0"));
        }
        if !(theta.is_finite() && theta.abs() < FRAC_PI_2) {
            return Err(Error::param("angle", "must lie strictly inside (-π/2, π/2)"));
        }
        Ok(Self { r, theta })
    }

    pub fn from_cartesian(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) || !y.is_finite() {
            return Err(Error::param("position", "x must be finite and > 0"));
        }
        Self::new(x.hypot(y), y.atan2(x))
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn x(&self) -> f64 {
        self.r * self.theta.cos()
    }

    pub fn y(&self) -> f64 {
        self.r * self.theta.sin()
    }

    /// Distance to the point `(0, offset)` on the array axis.
    #[inline]
    pub fn distance_to(&self, offset: f64) -> f64 {
        self.x().hypot(self.y() - offset)
    }
}

/// An exact split of an array into `K` contiguous sub-arrays of `P` antennas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubArrayPartition {
    geom: ArrayGeometry,
    subarrays: usize,
    size: usize,
}

/// Center distance `r_k` and direction `sin θ_k` of one sub-array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubArrayView {
    pub distance: f64,
    pub sin_theta: f64,
}

impl SubArrayPartition {
    /// Partition into `subarrays` groups.
    pub fn new(geom: ArrayGeometry, subarrays: usize) -> Result<Self> {
        let n = geom.n_antennas();
        if subarrays == 0 || n % subarrays != 0 {
            return Err(Error::InvalidPartition {
                n,
                k: subarrays,
                p: if subarrays == 0 { 0 } else { n / subarrays },
            });
        }
        Ok(Self {
            geom,
            subarrays,
            size: n / subarrays,
        })
    }

    /// Partition into groups of `size` antennas.
    pub fn with_size(geom: ArrayGeometry, size: usize) -> Result<Self> {
        let n = geom.n_antennas();
        if size == 0 || n % size != 0 {
            return Err(Error::InvalidPartition {
                n,
                k: if size == 0 { 0 } else { n / size },
                p: size,
            });
        }
        Self::new(geom, n / size)
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geom
    }

    /// `K`.
    pub fn subarrays(&self) -> usize {
        self.subarrays
    }

    /// `P`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// y-coordinate of the center of sub-array `k`, `δ_K^(k) P d`.
    #[inline]
    pub fn center_offset(&self, k: usize) -> f64 {
        centered_index(k, self.subarrays) * (self.size as f64 * self.geom.spacing())
    }

    /// Offset of antenna `p` from its sub-array center.
    #[inline]
    pub fn local_offset(&self, p: usize) -> f64 {
        centered_index(p, self.size) * self.geom.spacing()
    }

    /// Distance and direction from every sub-array center to `loc`.
    pub fn subarray_geometry(&self, loc: &Location) -> Result<Vec<SubArrayView>> {
        let (x, y) = (loc.x(), loc.y());
        (0..self.subarrays)
            .map(|k| {
                let dy = y - self.center_offset(k);
                let distance = x.hypot(dy);
                if !(distance > 0.0) {
                    return Err(Error::DegenerateGeometry { index: k });
                }
                Ok(SubArrayView {
                    distance,
                    sin_theta: (dy / distance).clamp(-1.0, 1.0),
                })
            })
            .collect()
    }
}
