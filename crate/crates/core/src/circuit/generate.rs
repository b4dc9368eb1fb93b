//! Benchmark circuit families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Gate;
use crate::error::CircuitError;

fn check_width(n: usize) -> Result<(), CircuitError> {
    if n < 2 {
        Err(CircuitError::TooNarrow(n))
    } else {
        Ok(())
    }
}

/// `h q0` followed by a CX chain `q0→q1→…→q(n-1)`.
pub fn gen_ghz(n: usize) -> Result<Vec<Gate>, CircuitError> {
    check_width(n)?;
    let mut gates = vec![Gate::one("h", 0)];
    gates.extend((1..n).map(|i| Gate::two("cx", i - 1, i)));
    Ok(gates)
}

/// Textbook QFT without the final bit-reversal swaps. Each controlled phase
/// is lowered to `rz(θ/2) c; cx c,t; rz(-θ/2) t; cx c,t; rz(θ/2) t`.
pub fn gen_qft(n: usize) -> Result<Vec<Gate>, CircuitError> {
    check_width(n)?;
    let mut gates = Vec::with_capacity(n * n * 3);
    for j in 0..n {
        gates.push(Gate::one("h", j));
        for k in j + 1..n {
            let theta = PI / f64::powi(2.0, (k - j) as i32);
            let half = theta / 2.0;
            gates.push(Gate::one(format!("rz({half})"), k));
            gates.push(Gate::two("cx", k, j));
            gates.push(Gate::one(format!("rz({})", -half), j));
            gates.push(Gate::two("cx", k, j));
            gates.push(Gate::one(format!("rz({half})"), j));
        }
    }
    Ok(gates)
}

/// Ring graph state: `h` on every qubit, then one `cz` per ring edge.
pub fn gen_graphstate(n: usize) -> Result<Vec<Gate>, CircuitError> {
    check_width(n)?;
    let mut gates: Vec<Gate> = (0..n).map(|q| Gate::one("h", q)).collect();
    let edges = if n == 2 { 1 } else { n };
    gates.extend((0..edges).map(|i| Gate::two("cz", i, (i + 1) % n)));
    Ok(gates)
}

/// `two_q_count` uniformly random CX pairs, each preceded with probability
/// 1/2 by a random 1Q gate on a random qubit. Deterministic in `seed`.
pub fn gen_random(n: usize, two_q_count: usize, seed: u64) -> Result<Vec<Gate>, CircuitError> {
    check_width(n)?;
    const ONE_Q: [&str; 5] = ["h", "x", "s", "t", "sdg"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(two_q_count * 2);
    for _ in 0..two_q_count {
        if rng.gen_bool(0.5) {
            let q = rng.gen_range(0..n);
            gates.push(Gate::one(ONE_Q[rng.gen_range(0..ONE_Q.len())], q));
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        gates.push(Gate::two("cx", a, b));
    }
    Ok(gates)
}

/// Named generator with its parameters, e.g. `qft:64` or `random:40:800:7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircuitFamily {
    Ghz(usize),
    Qft(usize),
    GraphState(usize),
    Random { n: usize, two_q: usize, seed: u64 },
}

impl CircuitFamily {
    pub fn generate(&self) -> Result<(Vec<Gate>, usize), CircuitError> {
        let (gates, n) = match *self {
            CircuitFamily::Ghz(n) => (gen_ghz(n)?, n),
            CircuitFamily::Qft(n) => (gen_qft(n)?, n),
            CircuitFamily::GraphState(n) => (gen_graphstate(n)?, n),
            CircuitFamily::Random { n, two_q, seed } => (gen_random(n, two_q, seed)?, n),
        };
        Ok((gates, n))
    }
}

impl fmt::Display for CircuitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitFamily::Ghz(n) => write!(f, "ghz:{n}"),
            CircuitFamily::Qft(n) => write!(f, "qft:{n}"),
            CircuitFamily::GraphState(n) => write!(f, "graphstate:{n}"),
            CircuitFamily::Random { n, two_q, seed } => write!(f, "random:{n}:{two_q}:{seed}"),
        }
    }
}

impl FromStr for CircuitFamily {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CircuitError::Parse { line: 0, msg: format!("unknown circuit `{s}`") };
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64, CircuitError> {
            parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad)
        };
        match parts.first().copied() {
            Some("ghz") if parts.len() == 2 => Ok(CircuitFamily::Ghz(num(1)? as usize)),
            Some("qft") if parts.len() == 2 => Ok(CircuitFamily::Qft(num(1)? as usize)),
            Some("graphstate") if parts.len() == 2 => Ok(CircuitFamily::GraphState(num(1)? as usize)),
            Some("random") if (3..=4).contains(&parts.len()) => Ok(CircuitFamily::Random {
                n: num(1)? as usize,
                two_q: num(2)? as usize,
                seed: if parts.len() == 4 { num(3)? } else { 0 },
            }),
            _ => Err(bad()),
        }
    }
}
