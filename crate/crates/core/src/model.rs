//! Channel, scissor and protocol parameters.
//!
//! The transmitter-referred excess noise `eps_tm` is the only noise input.
//! The receiver-referred `eps_rec = T * eps_tm` and the input-referred
//! `eps = eps_rec / (1 - T)` are always derived.

use crate::error::{check, Error, Result};
use crate::scalar::Real;

/// Default fibre attenuation in dB/km.
pub const DEFAULT_LOSS_DB_PER_KM: f64 = 0.2;

/// Lossy, noisy bosonic channel between Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<R> {
    length_km: R,
    loss_db_per_km: R,
    eps_tm: R,
    transmittance: R,
    one_minus_t: R,
}

impl<R: Real> ChannelParams<R> {
    /// Fibre of the given length at the default 0.2 dB/km.
    pub fn new(length_km: R, eps_tm: R) -> Result<Self> {
        Self::with_loss(length_km, R::lit(DEFAULT_LOSS_DB_PER_KM), eps_tm)
    }

    pub fn with_loss(length_km: R, loss_db_per_km: R, eps_tm: R) -> Result<Self> {
        check(
            length_km >= R::zero() && length_km.is_finite(),
            "length_km",
            length_km.as_f64(),
            "finite and >= 0",
        )?;
        check(
            loss_db_per_km > R::zero() && loss_db_per_km.is_finite(),
            "loss_db_per_km",
            loss_db_per_km.as_f64(),
            "finite and > 0",
        )?;
        check_eps(eps_tm)?;
        // T = 10^(-x), and 1 - T = -expm1(-x ln 10) keeps short links accurate.
        let decades = loss_db_per_km * length_km / R::lit(10.0);
        let log_t = -decades * R::LN_10();
        Ok(Self {
            length_km,
            loss_db_per_km,
            eps_tm,
            transmittance: log_t.exp(),
            one_minus_t: -log_t.exp_m1(),
        })
    }

    /// Channel specified directly by its transmittance, at the default loss.
    pub fn from_transmittance(t: R, eps_tm: R) -> Result<Self> {
        check(t > R::zero() && t <= R::one(), "transmittance", t.as_f64(), "in (0, 1]")?;
        check_eps(eps_tm)?;
        let loss = R::lit(DEFAULT_LOSS_DB_PER_KM);
        Ok(Self {
            length_km: -R::lit(10.0) * t.log10() / loss,
            loss_db_per_km: loss,
            eps_tm,
            transmittance: t,
            one_minus_t: R::one() - t,
        })
    }

    pub fn length_km(&self) -> R {
        self.length_km
    }

    pub fn loss_db_per_km(&self) -> R {
        self.loss_db_per_km
    }

    pub fn eps_tm(&self) -> R {
        self.eps_tm
    }

    /// Transmittance `T`.
    pub fn transmittance(&self) -> R {
        self.transmittance
    }

    /// `1 - T`, computed without cancellation for short links.
    pub fn one_minus_t(&self) -> R {
        self.one_minus_t
    }

    /// Excess noise referred to the receiver.
    pub fn eps_rec(&self) -> R {
        self.transmittance * self.eps_tm
    }

    /// Excess noise referred to the channel input.
    pub fn eps(&self) -> Result<R> {
        if self.one_minus_t > R::zero() {
            Ok(self.eps_rec() / self.one_minus_t)
        } else if self.eps_tm == R::zero() {
            Ok(R::zero())
        } else {
            Err(Error::UndefinedExcessNoise {
                eps_tm: self.eps_tm.as_f64(),
            })
        }
    }

    /// Same fibre with a different transmitter-referred noise.
    pub fn with_eps_tm(&self, eps_tm: R) -> Result<Self> {
        check_eps(eps_tm)?;
        Ok(Self { eps_tm, ..*self })
    }
}

fn check_eps<R: Real>(eps_tm: R) -> Result<()> {
    check(
        eps_tm >= R::zero() && eps_tm.is_finite(),
        "eps_tm",
        eps_tm.as_f64(),
        "finite and >= 0",
    )
}

/// Scissor parameters; `mu` is the transmittance of the single-photon splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSParams<R> {
    mu: R,
}

impl<R: Real> QSParams<R> {
    pub fn new(mu: R) -> Result<Self> {
        check(mu > R::zero() && mu < R::one(), "mu", mu.as_f64(), "in (0, 1)")?;
        Ok(Self { mu })
    }

    /// Scissor with amplification gain `g`, i.e. `mu = 1 / (1 + g^2)`.
    pub fn from_gain(g: R) -> Result<Self> {
        check(g > R::zero() && g.is_finite(), "gain", g.as_f64(), "finite and > 0")?;
        Self::new(R::one() / (R::one() + g * g))
    }

    pub fn mu(&self) -> R {
        self.mu
    }

    /// Amplification gain `g = sqrt((1 - mu) / mu)`.
    pub fn gain(&self) -> R {
        ((R::one() - self.mu) / self.mu).sqrt()
    }

    /// `g^2`.
    pub fn gain_sq(&self) -> R {
        (R::one() - self.mu) / self.mu
    }
}

/// Gaussian-modulation protocol parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams<R> {
    va: R,
    beta: R,
}

impl<R: Real> ProtocolParams<R> {
    pub fn new(va: R, beta: R) -> Result<Self> {
        check(va > R::zero() && va.is_finite(), "va", va.as_f64(), "finite and > 0")?;
        check(beta > R::zero() && beta <= R::one(), "beta", beta.as_f64(), "in (0, 1]")?;
        Ok(Self { va, beta })
    }

    /// Modulation variance `V_A` in shot-noise units.
    pub fn va(&self) -> R {
        self.va
    }

    /// Reconciliation efficiency.
    pub fn beta(&self) -> R {
        self.beta
    }

    /// `V = V_A + 1`.
    pub fn v(&self) -> R {
        self.va + R::one()
    }

    /// Squeezing parameter of the equivalent two-mode squeezed vacuum.
    pub fn delta(&self) -> R {
        ((self.va + R::lit(2.0)) / R::lit(2.0)).sqrt()
    }

    /// `gamma = sqrt(delta^2 - 1) = sqrt(V_A / 2)`.
    pub fn gamma(&self) -> R {
        (self.va / R::lit(2.0)).sqrt()
    }
}

/// The three noise factors entering the scissor output states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFactors<R> {
    /// Coherent input.
    pub f1: R,
    /// Thermal input of variance `V_A`.
    pub f2: R,
    /// Entanglement-based picture with squeezing `delta`.
    pub f3: R,
}

/// `(F1, F2, F3)` for the given channel, modulation variance and squeezing.
pub fn noise_factors<R: Real>(chan: &ChannelParams<R>, va: R, delta: R) -> Result<NoiseFactors<R>> {
    check(va >= R::zero(), "va", va.as_f64(), ">= 0")?;
    check(delta >= R::one(), "delta", delta.as_f64(), ">= 1")?;
    let t = chan.transmittance();
    let quarter = R::lit(0.25);
    let half = R::lit(0.5);
    Ok(NoiseFactors {
        f1: f1(chan),
        f2: half + t * (va + chan.eps_tm()) * quarter,
        f3: half + t * (R::lit(2.0) * (delta * delta - R::one()) + chan.eps_tm()) * quarter,
    })
}

/// `F1 = 1/2 + (1 - T) eps / 4`, written via `eps_rec` so it stays finite at `T = 1`.
pub(crate) fn f1<R: Real>(chan: &ChannelParams<R>) -> R {
    R::lit(0.5) + chan.eps_rec() * R::lit(0.25)
}

/// `F2` for modulation variance `va`.
pub(crate) fn f2<R: Real>(chan: &ChannelParams<R>, va: R) -> R {
    R::lit(0.5) + chan.transmittance() * (va + chan.eps_tm()) * R::lit(0.25)
}
