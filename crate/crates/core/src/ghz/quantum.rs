use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::iterghz::Bits;
use crate::gadgets::BipartiteInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhzError {
    #[error("qubit {0} of this triple was already measured")]
    Reused(usize),
    #[error("qubit index {0} out of range")]
    NoSuchQubit(usize),
}

/// Exact state of three qubits; bit k of the amplitude index is qubit k.
#[derive(Clone, Debug)]
pub struct GhzTriple {
    amp: [Complex64; 8],
    measured: [bool; 3],
}

impl Default for GhzTriple {
    fn default() -> Self {
        Self::new()
    }
}

/// Measurement basis vector for input `input` (0: X, 1: Y) and outcome
/// bit `s` (+1 eigenvalue ↦ 0).
fn basis(input: bool, s: bool) -> [Complex64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if s { -1.0 } else { 1.0 };
    let second = if input { Complex64::new(0.0, sign * h) } else { Complex64::new(sign * h, 0.0) };
    [Complex64::new(h, 0.0), second]
}

impl GhzTriple {
    /// (|000⟩ + |111⟩)/√2.
    pub fn new() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amp = [Complex64::new(0.0, 0.0); 8];
        amp[0] = Complex64::new(h, 0.0);
        amp[7] = Complex64::new(h, 0.0);
        GhzTriple { amp, measured: [false; 3] }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_measured(&self, k: usize) -> bool {
        self.measured[k]
    }

    /// Probabilities of outcome 0 and 1 when qubit `k` is measured with
    /// the strategy's basis for `input`.
    pub fn probabilities(&self, k: usize, input: bool) -> [f64; 2] {
        [false, true].map(|s| {
            let e = basis(input, s);
            let mut p = 0.0;
            for i in (0..8).filter(|i| i & (1 << k) == 0) {
                let c = e[0].conj() * self.amp[i] + e[1].conj() * self.amp[i | (1 << k)];
                p += c.norm_sqr();
            }
            p
        })
    }

    /// Measures qubit `k` (input 0: X basis, input 1: Y basis) and
    /// collapses the state.
    pub fn measure<R: Rng>(&mut self, k: usize, input: bool, rng: &mut R) -> Result<bool, GhzError> {
        if k >= 3 {
            return Err(GhzError::NoSuchQubit(k));
        }
        if self.measured[k] {
            return Err(GhzError::Reused(k));
        }
        let p = self.probabilities(k, input);
        let s = rng.gen::<f64>() * (p[0] + p[1]) >= p[0];
        let e = basis(input, s);
        let norm = p[usize::from(s)].sqrt();
        for i in (0..8).filter(|i| i & (1 << k) == 0) {
            let j = i | (1 << k);
            let c = (e[0].conj() * self.amp[i] + e[1].conj() * self.amp[j]) / norm;
            self.amp[i] = e[0] * c;
            self.amp[j] = e[1] * c;
        }
        self.measured[k] = true;
        Ok(s)
    }

    /// Exact joint law of the three outcomes for a fresh measurement of
    /// every qubit; index bit k is qubit k's outcome.
    pub fn outcome_distribution(&self, inputs: [bool; 3]) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (y, slot) in out.iter_mut().enumerate() {
            let e: Vec<[Complex64; 2]> = (0..3).map(|k| basis(inputs[k], y & (1 << k) != 0)).collect();
            let mut a = Complex64::new(0.0, 0.0);
            for (i, amp) in self.amp.iter().enumerate() {
                let mut c = *amp;
                for (k, ek) in e.iter().enumerate() {
                    c *= ek[(i >> k) & 1].conj();
                }
                a += c;
            }
            *slot = a.norm_sqr();
        }
        out
    }
}

/// Plays one GHZ game on a fresh triple: qubit k gets input `inputs[k]`.
pub fn ghz_measure<R: Rng>(triple: &mut GhzTriple, inputs: [bool; 3], rng: &mut R) -> Result<[bool; 3], GhzError> {
    let mut y = [false; 3];
    for k in 0..3 {
        y[k] = triple.measure(k, inputs[k], rng)?;
    }
    Ok(y)
}

/// Result of the two-round quantum algorithm for iterated GHZ.
#[derive(Clone, Debug, Serialize)]
pub struct IterGhzRun {
    pub out: Vec<Bits>,
    /// Per white: received a classical bit with its first qubit.
    pub lucky: Vec<bool>,
    pub rounds: usize,
    /// Largest |‖ψ‖² − 1| seen over all triples.
    pub norm_drift: f64,
}

/// Communication rounds of the algorithm: port numbers, then qubits.
pub const ITERGHZ_ROUNDS: usize = 2;

/// The game's private stream: (seed, black id).
fn game_rng(seed: u64, game: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(game as u64);
    r
}

/// Round 1: whites send σ positions. Round 2: every degree-3 black
/// prepares a GHZ triple and hands one qubit per edge, with classical bits
/// 0, 0, 1 (in edge order) if all three positions are 1. Whites then
/// measure in σ order, feeding y(w, j) into x(w, j + 1). Blacks of other
/// degrees are unconstrained and hand out a fair coin.
pub fn quantum_solve_iterghz(b: &BipartiteInstance, seed: u64) -> IterGhzRun {
    let pos = b.positions();
    let m = b.edges.len();
    let mut triples: Vec<Option<GhzTriple>> = vec![None; b.blacks];
    let mut rngs: Vec<ChaCha8Rng> = (0..b.blacks).map(|k| game_rng(seed, k)).collect();
    let mut slot = vec![0usize; m];
    let mut classical: Vec<Option<bool>> = vec![None; m];
    for k in 0..b.blacks {
        let es = b.black_edges(k);
        if es.len() == 3 {
            triples[k] = Some(GhzTriple::new());
            for (i, &e) in es.iter().enumerate() {
                slot[e] = i;
            }
            if es.iter().all(|&e| pos[e] == 1) {
                for (i, &e) in es.iter().enumerate() {
                    classical[e] = Some(i == 2);
                }
            }
        }
    }
    let mut lucky = vec![false; b.whites];
    let mut out = vec![Bits::default(); m];
    let mut drift: f64 = 0.0;
    let max_deg = b.order.iter().map(Vec::len).max().unwrap_or(0);
    for j in 0..max_deg {
        for w in 0..b.whites {
            let Some(&e) = b.order[w].get(j) else { continue };
            let x = if j == 0 { false } else { out[b.order[w][j - 1]].y };
            let game = b.edges[e].1;
            let y = if let (0, Some(bit)) = (j, classical[e]) {
                lucky[w] = true;
                bit
            } else if let Some(t) = triples[game].as_mut() {
                let y = t.measure(slot[e], x, &mut rngs[game]).expect("each qubit is measured once");
                drift = drift.max((t.norm_sqr() - 1.0).abs());
                y
            } else {
                rngs[game].gen()
            };
            out[e] = Bits { x, y };
        }
    }
    IterGhzRun { out, lucky, rounds: ITERGHZ_ROUNDS, norm_drift: drift }
}
