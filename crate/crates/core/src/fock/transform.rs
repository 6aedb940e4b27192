//! Passive linear-optical transforms acting on number states.

use crate::error::{Error, Result};

/// Two-mode beam splitter in the Heisenberg picture:
/// `b_i = c a_i + s a_j`, `b_j = -s a_i + c a_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub i: usize,
    pub j: usize,
    pub c: f64,
    pub s: f64,
}

impl BeamSplitter {
    pub fn new(i: usize, j: usize, c: f64, s: f64) -> Self {
        Self { i, j, c, s }
    }

    /// Splitter of intensity transmittance `t` between modes `i` and `j`.
    pub fn with_transmittance(i: usize, j: usize, t: f64) -> Self {
        Self::new(i, j, t.sqrt(), (1.0 - t).sqrt())
    }
}

/// Real orthogonal mode-mixing matrix, realised as an ordered list of
/// beam splitters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    modes: usize,
    /// Row-major `modes x modes`; `b = matrix * a`.
    matrix: Vec<f64>,
    splitters: Vec<BeamSplitter>,
}

impl ModeTransform {
    pub fn identity(modes: usize) -> Self {
        let mut matrix = vec![0.0; modes * modes];
        for k in 0..modes {
            matrix[k * modes + k] = 1.0;
        }
        Self {
            modes,
            matrix,
            splitters: Vec::new(),
        }
    }

    /// Compose splitters in the order they are traversed.
    pub fn from_splitters(modes: usize, splitters: &[BeamSplitter]) -> Result<Self> {
        let mut out = Self::identity(modes);
        for &bs in splitters {
            if bs.i >= modes || bs.j >= modes || bs.i == bs.j {
                return Err(Error::DimensionMismatch {
                    state: modes,
                    transform: bs.i.max(bs.j) + 1,
                });
            }
            // Left-multiply by the splitter's matrix: only rows i and j change.
            for col in 0..modes {
                let ri = out.matrix[bs.i * modes + col];
                let rj = out.matrix[bs.j * modes + col];
                out.matrix[bs.i * modes + col] = bs.c * ri + bs.s * rj;
                out.matrix[bs.j * modes + col] = -bs.s * ri + bs.c * rj;
            }
            out.splitters.push(bs);
        }
        Ok(out)
    }

    /// Channel splitter, scissor photon splitter and final 50:50 splitter on
    /// modes `(off, off+1, off+2, off+3) = (signal, photon, vacuum, noise)`.
    ///
    /// Outputs: `off` and `off+1` go to the detectors, `off+2` to Bob, `off+3`
    /// to the environment.
    pub fn scissor_circuit(modes: usize, off: usize, t: f64, mu: f64) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_splitters(
            modes,
            &[
                BeamSplitter::new(off, off + 3, t.sqrt(), (1.0 - t).sqrt()),
                BeamSplitter::new(off + 1, off + 2, mu.sqrt(), -(1.0 - mu).sqrt()),
                BeamSplitter::new(off, off + 1, h, h),
            ],
        )
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn splitters(&self) -> &[BeamSplitter] {
        &self.splitters
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.modes + col]
    }

    /// `max |M^T M - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.modes;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let dot: f64 = (0..n).map(|k| self.entry(k, r) * self.entry(k, c)).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Number-basis action of one beam splitter.
///
/// `column(n, l)` lists the amplitudes of `U|n, l>` on `|k, n + l - k>` for
/// `k = 0..=n+l`. Columns are built from the two neighbours with one photon
/// fewer, `|n,l> = (sqrt(n) a_i^dag |n-1,l> + sqrt(l) a_j^dag |n,l-1>) / (n+l)`,
/// which keeps rounding errors from growing with the photon number.
#[derive(Debug, Clone)]
pub(crate) struct LadderTable {
    max_l: usize,
    cols: Vec<Vec<f64>>,
}

impl LadderTable {
    pub fn new(bs: &BeamSplitter, max_n: usize, max_l: usize) -> Self {
        let (c, s) = (bs.c, bs.s);
        let stride = max_l + 1;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity((max_n + 1) * stride);
        // a_i^dag -> c b_i^dag - s b_j^dag, a_j^dag -> s b_i^dag + c b_j^dag.
        for n in 0..=max_n {
            for l in 0..=max_l {
                let m = n + l;
                if m == 0 {
                    cols.push(vec![1.0]);
                    continue;
                }
                let mut out = vec![0.0; m + 1];
                if n > 0 {
                    raise_into(&mut out, &cols[(n - 1) * stride + l], c, -s, (n as f64).sqrt());
                }
                if l > 0 {
                    raise_into(&mut out, &cols[n * stride + l - 1], s, c, (l as f64).sqrt());
                }
                let inv = (m as f64).recip();
                for x in &mut out {
                    *x *= inv;
                }
                cols.push(out);
            }
        }
        Self { max_l, cols }
    }

    pub fn column(&self, n: usize, l: usize) -> &[f64] {
        &self.cols[n * (self.max_l + 1) + l]
    }
}

/// `out += w (p b_i^dag + q b_j^dag) v` for `v` on the `m`-photon sector.
fn raise_into(out: &mut [f64], v: &[f64], p: f64, q: f64, w: f64) {
    let m = v.len() - 1;
    for (k, &a) in v.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        out[k + 1] += w * p * ((k + 1) as f64).sqrt() * a;
        out[k] += w * q * ((m - k + 1) as f64).sqrt() * a;
    }
}
