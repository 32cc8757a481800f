//! An infinite, computable, type 1 game built from determining strings.
//!
//! The enumeration of indices `k` with `φ_k(k) ∈ {0,1}` is replaced by an
//! [`IndexOracle`]: any injective sequence `(k_s, v_s)` with `k_0 ≥ 2`.
//! From it we get lengths `l_s`, string sets `F_s`, and the determining
//! sets `T0` (losing) and `T1` (winning).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coalition::{string_complement, BitString, MAX_BITSTRING_LEN};
use crate::error::{Error, Result};
use crate::game::{Determination, PrefixGame};

/// Serializable description of an oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    /// `k_s = 2 + 2s`, `v_s = s mod 2`.
    Alternating,
    /// Pseudo-random listing; every third entry is forced past the current
    /// maximum with alternating values, which keeps the oracle rich.
    Seeded { seed: u64 },
    /// A finite listing; lookups past its end are truncated.
    Explicit { entries: Vec<(usize, u8)> },
}

struct SeededState {
    rng: ChaCha8Rng,
    entries: Vec<(usize, bool)>,
    forced: usize,
}

impl SeededState {
    fn extend_to(&mut self, s: usize) {
        while self.entries.len() <= s {
            let idx = self.entries.len();
            let max = self.entries.iter().map(|e| e.0).max().unwrap_or(1);
            let entry = if idx == 0 {
                (2 + self.rng.gen_range(0..2), self.rng.gen())
            } else if idx % 3 == 2 {
                let v = self.forced % 2 == 1;
                self.forced += 1;
                (max + 2, v)
            } else {
                let free = (2..=max + 1)
                    .filter(|k| !self.entries.iter().any(|e| e.0 == *k))
                    .collect::<Vec<_>>();
                (free[self.rng.gen_range(0..free.len())], self.rng.gen())
            };
            self.entries.push(entry);
        }
    }
}

/// The listing `(k_s, v_s)`, materialized on demand.
#[derive(Clone)]
pub struct IndexOracle {
    spec: OracleSpec,
    seeded: Option<Arc<Mutex<SeededState>>>,
}

impl IndexOracle {
    pub fn alternating() -> Self {
        IndexOracle {
            spec: OracleSpec::Alternating,
            seeded: None,
        }
    }

    pub fn seeded(seed: u64) -> Self {
        IndexOracle {
            spec: OracleSpec::Seeded { seed },
            seeded: Some(Arc::new(Mutex::new(SeededState {
                rng: ChaCha8Rng::seed_from_u64(seed),
                entries: Vec::new(),
                forced: 0,
            }))),
        }
    }

    /// Validates distinctness and `k_0 ≥ 2`.
    pub fn explicit(entries: Vec<(usize, bool)>) -> Result<Self> {
        if let Some(&(k0, _)) = entries.first() {
            if k0 < 2 {
                return Err(Error::InvalidOracle(format!("k_0 = {k0} must be at least 2")));
            }
        }
        let distinct = entries.iter().map(|e| e.0).collect::<BTreeSet<_>>();
        if distinct.len() != entries.len() {
            return Err(Error::InvalidOracle("indices k_s must be distinct".into()));
        }
        Ok(IndexOracle {
            spec: OracleSpec::Explicit {
                entries: entries.into_iter().map(|(k, v)| (k, u8::from(v))).collect(),
            },
            seeded: None,
        })
    }

    pub fn from_spec(spec: &OracleSpec) -> Result<Self> {
        match spec {
            OracleSpec::Alternating => Ok(Self::alternating()),
            OracleSpec::Seeded { seed } => Ok(Self::seeded(*seed)),
            OracleSpec::Explicit { entries } => {
                if entries.iter().any(|e| e.1 > 1) {
                    return Err(Error::InvalidOracle("values must be 0 or 1".into()));
                }
                Self::explicit(entries.iter().map(|&(k, v)| (k, v == 1)).collect())
            }
        }
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    /// `(k_s, v_s)`, or `None` past the end of a finite listing.
    pub fn entry(&self, s: usize) -> Option<(usize, bool)> {
        match &self.spec {
            OracleSpec::Alternating => Some((2 + 2 * s, s % 2 == 1)),
            OracleSpec::Explicit { entries } => entries.get(s).map(|&(k, v)| (k, v == 1)),
            OracleSpec::Seeded { .. } => {
                let mut state = self.seeded.as_ref().expect("seeded state").lock().expect("oracle lock");
                state.extend_to(s);
                Some(state.entries[s])
            }
        }
    }

    /// Entries `0..=s` together with `l_0..=l_s`, stopping at the first `s`
    /// with `l_s > len` or when the listing ends. The flag is true when the
    /// listing ended first.
    pub fn prefix_covering(&self, len: usize) -> (Vec<(usize, bool)>, Vec<usize>, bool) {
        let mut entries = Vec::new();
        let mut ls = Vec::new();
        let mut l = 0;
        for s in 0.. {
            let Some((k, v)) = self.entry(s) else {
                return (entries, ls, true);
            };
            l = l.max(k + 1);
            entries.push((k, v));
            ls.push(l);
            if l > len {
                break;
            }
        }
        (entries, ls, false)
    }
}

impl fmt::Debug for IndexOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexOracle({:?})", self.spec)
    }
}

impl fmt::Display for IndexOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            OracleSpec::Alternating => f.write_str("alternating"),
            OracleSpec::Seeded { seed } => write!(f, "seeded({seed})"),
            OracleSpec::Explicit { entries } => write!(f, "explicit({} entries)", entries.len()),
        }
    }
}

/// Does `sigma` satisfy the defining condition of `F_s`?
fn in_f(sigma: &BitString, entries: &[(usize, bool)], s: usize) -> bool {
    let (k, v) = entries[s];
    sigma.get(k) == v && entries[..s].iter().all(|&(kt, vt)| sigma.get(kt) != vt)
}

/// Which determining set a string belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    T0,
    T1,
    Neither,
    /// The oracle ran out before the answer was known.
    Truncated,
}

/// For `sigma ⊇ 10`: `Some(v_s)` if `sigma ∈ F_s`, else `None`; `Err` on truncation.
fn decide_f(oracle: &IndexOracle, sigma: &BitString) -> std::result::Result<Option<bool>, ()> {
    let len = sigma.len();
    let mut entries = Vec::new();
    let mut l = 0;
    for s in 0.. {
        let Some(e) = oracle.entry(s) else {
            return Err(());
        };
        entries.push(e);
        l = l.max(e.0 + 1);
        if l < len {
            continue;
        }
        if l > len {
            return Ok(None);
        }
        if in_f(sigma, &entries, s) {
            return Ok(Some(e.1));
        }
    }
    unreachable!("loop returns")
}

/// Decides `T0`/`T1` membership by the case split on the first two bits.
pub fn appendix_a_membership(oracle: &IndexOracle, sigma: &BitString) -> Membership {
    if sigma.len() < 2 {
        return Membership::Neither;
    }
    let from_f = |r: std::result::Result<Option<bool>, ()>, flip: bool| match r {
        Err(()) => Membership::Truncated,
        Ok(None) => Membership::Neither,
        Ok(Some(v)) if v != flip => Membership::T1,
        Ok(Some(_)) => Membership::T0,
    };
    match (sigma.get(0), sigma.get(1)) {
        (false, false) if sigma.len() == 2 => Membership::T0,
        (true, true) if sigma.len() == 2 => Membership::T1,
        (false, false) | (true, true) => Membership::Neither,
        (true, false) => from_f(decide_f(oracle, sigma), false),
        (false, true) => from_f(decide_f(oracle, &string_complement(sigma)), true),
    }
}

/// Winning (losing) determining iff some initial segment lies in `T1` (`T0`).
pub fn appendix_a_classify(oracle: &IndexOracle, alpha: &BitString) -> Determination {
    let mut truncated = false;
    for k in 2..=alpha.len() {
        match appendix_a_membership(oracle, &alpha.prefix(k)) {
            Membership::T1 => return Determination::WinningDetermining,
            Membership::T0 => return Determination::LosingDetermining,
            Membership::Truncated => truncated = true,
            Membership::Neither => {}
        }
    }
    if truncated {
        Determination::Truncated
    } else {
        Determination::Nondetermining
    }
}

/// The game whose winning coalitions have an initial segment in `T1`.
pub fn appendix_a_game(oracle: &IndexOracle) -> PrefixGame {
    let o = oracle.clone();
    PrefixGame::new(format!("appendixA({oracle})"), move |s| appendix_a_classify(&o, s))
        .with_max_depth(MAX_BITSTRING_LEN)
}

/// `l_s`, `F_s`, `T0` and `T1` up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixATables {
    pub max_len: usize,
    pub k: Vec<usize>,
    pub v: Vec<bool>,
    pub l: Vec<usize>,
    /// `f[s]` lists `F_s`, for every `s` with `l_s <= max_len`.
    pub f: Vec<Vec<BitString>>,
    pub t0_base: BTreeSet<BitString>,
    pub t1_base: BTreeSet<BitString>,
    pub t0: BTreeSet<BitString>,
    pub t1: BTreeSet<BitString>,
    /// The listing ended before `l_s` exceeded `max_len`.
    pub truncated: bool,
}

impl AppendixATables {
    pub fn membership(&self, s: &BitString) -> Membership {
        if self.t0.contains(s) {
            Membership::T0
        } else if self.t1.contains(s) {
            Membership::T1
        } else {
            Membership::Neither
        }
    }

    /// Every string of `F`, in order of `s`.
    pub fn f_union(&self) -> impl Iterator<Item = &BitString> {
        self.f.iter().flatten()
    }
}

/// Materializes the tables by brute force over strings of length `l_s`.
pub fn appendix_a_tables(oracle: &IndexOracle, max_len: usize) -> Result<AppendixATables> {
    if !(3..=24).contains(&max_len) {
        return Err(Error::InvalidParams {
            name: "appendixA_tables".into(),
            reason: format!("max_len = {max_len} must lie in 3..=24"),
        });
    }
    let (entries, ls, truncated) = oracle.prefix_covering(max_len);
    let mut f = Vec::new();
    let mut t0_base = BTreeSet::new();
    let mut t1_base = BTreeSet::new();
    for (s, &l) in ls.iter().enumerate() {
        if l > max_len {
            break;
        }
        let fs = BitString::all_of_len(l)
            .filter(|a| in_f(a, &entries, s))
            .collect::<Vec<_>>();
        for a in &fs {
            if a.get(0) && !a.get(1) {
                if entries[s].1 {
                    t1_base.insert(*a);
                } else {
                    t0_base.insert(*a);
                }
            }
        }
        f.push(fs);
    }
    let seed = |bit| BitString::from_slice(&[bit, bit]).expect("short string");
    let mut t0 = t0_base.clone();
    t0.extend(t1_base.iter().map(string_complement));
    t0.insert(seed(false));
    let mut t1 = t1_base.clone();
    t1.extend(t0_base.iter().map(string_complement));
    t1.insert(seed(true));
    let used = f.len();
    Ok(AppendixATables {
        max_len,
        k: entries.iter().take(used).map(|e| e.0).collect(),
        v: entries.iter().take(used).map(|e| e.1).collect(),
        l: ls[..used].to_vec(),
        f,
        t0_base,
        t1_base,
        t0,
        t1,
        truncated,
    })
}
