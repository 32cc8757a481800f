//! Bounded verification of the determining-string construction.
//!
//! Every structural property of `F`, `T0` and `T1` and every property of the
//! resulting game is checked exhaustively on strings up to a length bound
//! and on eventually periodic streams.

use serde::Serialize;

use crate::coalition::{incompatible, is_initial_segment, string_complement, BitString};
use crate::error::{Error, Result};
use crate::game::{MembershipStream, PrefixGame, Verdict};
use crate::nakamura::nakamura_witness_bounded;

use super::appendix_a::{appendix_a_game, appendix_a_membership, appendix_a_tables, AppendixATables, IndexOracle};

const MAX_EXAMPLES: usize = 5;

/// Longest stream prefix and period enumerated.
pub const STREAM_PREFIX: usize = 4;
pub const STREAM_PERIOD: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
    pub note: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            checked: 0,
            failed: 0,
            examples: Vec::new(),
            note: None,
        }
    }

    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(example());
            }
        }
    }

    /// No failure and at least one instance examined.
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub oracle: String,
    pub max_len: usize,
    pub checks: Vec<CheckOutcome>,
    /// `11`, a string `⊇ 10` in `T1`, and the complement of a string `⊇ 10` in `T0`.
    pub nonweak_witness: Option<Vec<BitString>>,
    /// Lengths `l` for which the diagonal prefix `A[l]` extends to both a
    /// `T1` and a `T0` string.
    pub mixed_extension_lengths: Vec<usize>,
    /// Streams that never reach the oracle within the bound.
    pub undetermined_streams: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn prefix_member(t: &AppendixATables, s: &BitString) -> Option<bool> {
    (2..=s.len()).find_map(|k| {
        let p = s.prefix(k);
        if t.t1.contains(&p) {
            Some(true)
        } else if t.t0.contains(&p) {
            Some(false)
        } else {
            None
        }
    })
}

fn verdict_bit(v: &Verdict) -> Option<bool> {
    match v {
        Verdict::Winning { .. } => Some(true),
        Verdict::Losing { .. } => Some(false),
        Verdict::Undetermined { .. } => None,
    }
}

/// Runs every check with strings up to `max_len`.
pub fn audit_appendix_a(oracle: &IndexOracle, max_len: usize) -> Result<AuditReport> {
    let t = appendix_a_tables(oracle, max_len)?;
    if t.truncated {
        return Err(Error::InvalidOracle(format!(
            "listing ends before length {max_len} is covered"
        )));
    }
    let game = appendix_a_game(oracle).with_max_depth(max_len);
    let mut checks = vec![
        check_tables(&t),
        check_membership(oracle, &t),
        check_f_incompatible(&t),
        check_t_incompatible(&t),
        check_a4(&t),
    ];
    let streams = MembershipStream::all_eventually_periodic(STREAM_PREFIX, STREAM_PERIOD);
    let (a5, undetermined_streams) = check_a5(&t, &game, &streams);
    checks.push(a5);
    checks.push(check_a6(&t));
    let strings = BitString::all_of_len(max_len)
        .map(|s| prefix_member(&t, &s))
        .collect::<Vec<_>>();
    checks.push(check_monotonic_strings(&strings));
    checks.push(check_monotonic_streams(&game, &streams));
    checks.push(check_duality(&game, &streams, &strings, max_len));
    let (witness_check, nonweak_witness) = check_nonweak(&t, &game);
    checks.push(witness_check);
    let (carrier_check, mixed_extension_lengths) = check_no_finite_carrier(&t);
    checks.push(carrier_check);
    Ok(AuditReport {
        oracle: oracle.to_string(),
        max_len,
        checks,
        nonweak_witness,
        mixed_extension_lengths,
        undetermined_streams,
    })
}

fn check_tables(t: &AppendixATables) -> CheckOutcome {
    let mut c = CheckOutcome::new("tables");
    c.record(t.l.first() == t.k.first().map(|k| k + 1).as_ref(), || "l_0 != k_0 + 1".into());
    for s in 0..t.l.len() {
        c.record(t.l[s] > t.k[s], || format!("l_{s} <= k_{s}"));
        if s > 0 {
            c.record(t.l[s] == t.l[s - 1].max(t.k[s] + 1), || format!("l_{s} is not the running max"));
        }
        for a in &t.f[s] {
            let ok = a.len() == t.l[s]
                && a.get(t.k[s]) == t.v[s]
                && (0..s).all(|u| a.get(t.k[u]) != t.v[u]);
            c.record(ok, || format!("{a} in F_{s} violates the defining condition"));
        }
    }
    for a in &t.t0 {
        c.record(!t.t1.contains(a), || format!("{a} in both T0 and T1"));
        c.record(t.t1.contains(&string_complement(a)), || format!("{a} in T0 but complement not in T1"));
    }
    for a in &t.t1 {
        c.record(t.t0.contains(&string_complement(a)), || format!("{a} in T1 but complement not in T0"));
    }
    for a in t.t0.iter().chain(&t.t1) {
        c.record(a.len() >= 2, || format!("{a} shorter than 2"));
        let seeds = ["00", "11"].map(|x| x.parse::<BitString>().expect("literal"));
        c.record(a.len() > 2 || seeds.contains(a), || format!("{a} of length 2"));
    }
    c.record(t.t0.contains(&"00".parse().expect("literal")), || "00 not in T0".into());
    c.record(t.t1.contains(&"11".parse().expect("literal")), || "11 not in T1".into());
    c
}

fn check_membership(oracle: &IndexOracle, t: &AppendixATables) -> CheckOutcome {
    let mut c = CheckOutcome::new("decision procedure matches tables");
    for s in BitString::all_up_to(t.max_len) {
        let got = appendix_a_membership(oracle, &s);
        c.record(got == t.membership(&s), || format!("{s}: procedure says {got:?}"));
    }
    c
}

fn pairwise_incompatible(name: &'static str, items: &[&BitString]) -> CheckOutcome {
    let mut c = CheckOutcome::new(name);
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            c.record(a != b && incompatible(a, b), || format!("{a} and {b} are compatible"));
        }
    }
    c
}

fn check_f_incompatible(t: &AppendixATables) -> CheckOutcome {
    let items = t.f_union().collect::<Vec<_>>();
    pairwise_incompatible("F pairwise incompatible", &items)
}

fn check_t_incompatible(t: &AppendixATables) -> CheckOutcome {
    let items = t.t0.iter().chain(&t.t1).collect::<Vec<_>>();
    pairwise_incompatible("T0 and T1 pairwise incompatible", &items)
}

/// Every `α ⊇ 10` of length `l_s` with `α(k_s) = v_s` extends some `β ∈ F_t`, `t ≤ s`, `β ⊇ 10`.
fn check_a4(t: &AppendixATables) -> CheckOutcome {
    let mut c = CheckOutcome::new("strings hitting the oracle extend F");
    for s in 0..t.l.len() {
        for a in BitString::all_of_len(t.l[s]) {
            if !(a.get(0) && !a.get(1)) || a.get(t.k[s]) != t.v[s] {
                continue;
            }
            let found = t.f[..=s]
                .iter()
                .flatten()
                .any(|b| b.get(0) && !b.get(1) && is_initial_segment(b, &a));
            c.record(found, || format!("{a} (s = {s}) extends no string of F"));
        }
    }
    c
}

/// A stream has at most one initial segment in `T0 ∪ T1`, and exactly one
/// when it hits the oracle (`S(k_s) = v_s` for some listed `s`, read on the
/// complement for streams starting `01`).
fn check_a5(t: &AppendixATables, game: &PrefixGame, streams: &[MembershipStream]) -> (CheckOutcome, usize) {
    let mut c = CheckOutcome::new("streams have exactly one determining segment");
    let mut undetermined = 0;
    for st in streams {
        let a = st.initial_segment(t.max_len);
        let segments = (2..=t.max_len)
            .map(|k| a.prefix(k))
            .filter(|p| t.t0.contains(p) || t.t1.contains(p))
            .collect::<Vec<_>>();
        let hits = match (a.get(0), a.get(1)) {
            (false, false) | (true, true) => true,
            (true, false) => (0..t.l.len()).any(|s| a.get(t.k[s]) == t.v[s]),
            (false, true) => (0..t.l.len()).any(|s| a.get(t.k[s]) != t.v[s]),
        };
        c.record(segments.len() == usize::from(hits), || {
            format!("{st:?}: {} determining segments, hits = {hits}", segments.len())
        });
        let verdict = game.eval_stream(st);
        let expected = segments.first().map(|p| t.t1.contains(p));
        c.record(verdict_bit(&verdict) == expected, || {
            format!("{st:?}: evaluation {verdict:?} disagrees with tables")
        });
        if !hits {
            undetermined += 1;
        }
    }
    if undetermined > 0 {
        c.note = Some(format!(
            "{undetermined} streams avoid every listed value up to the bound and stay undetermined"
        ));
    }
    (c, undetermined)
}

/// Strings properly containing a `T1` string extend a `T1` string, and dually for `T0`.
fn check_a6(t: &AppendixATables) -> CheckOutcome {
    let mut c = CheckOutcome::new("proper containment propagates determination");
    let supersets = |a: &BitString| {
        let (base, len) = (a.bits(), a.len());
        subsets_of(!base & ((1u64 << len) - 1))
            .filter(|&extra| extra != 0)
            .map(move |extra| BitString::from_bits(base | extra, len).expect("same length"))
    };
    for a in &t.t1 {
        for b in supersets(a) {
            c.record(prefix_member(t, &b) == Some(true), || format!("{b} contains {a} but is not winning"));
        }
    }
    for a in &t.t0 {
        let ac = string_complement(a);
        for bc in supersets(&ac) {
            let b = string_complement(&bc);
            c.record(prefix_member(t, &b) == Some(false), || format!("{b} is contained in {a} but is not losing"));
        }
    }
    c
}

fn subsets_of(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
        Some(cur)
    })
}

/// `verdicts[bits]` for strings of one length; a winning string's supersets are never losing.
fn check_monotonic_strings(verdicts: &[Option<bool>]) -> CheckOutcome {
    let mut c = CheckOutcome::new("monotonic on strings");
    let full = verdicts.len() as u64 - 1;
    for (a, v) in verdicts.iter().enumerate() {
        if *v != Some(true) {
            continue;
        }
        let a = a as u64;
        for extra in subsets_of(full & !a) {
            let b = a | extra;
            c.record(verdicts[b as usize] != Some(false), || format!("{a:b} winning but superset {b:b} losing"));
        }
    }
    c
}

fn check_monotonic_streams(game: &PrefixGame, streams: &[MembershipStream]) -> CheckOutcome {
    let mut c = CheckOutcome::new("monotonic on streams");
    // both become periodic by index 4 with a common period of at most 12
    let window = STREAM_PREFIX + 12;
    let masks = streams
        .iter()
        .map(|s| s.initial_segment(window).bits())
        .collect::<Vec<_>>();
    let verdicts = streams
        .iter()
        .map(|s| verdict_bit(&game.eval_stream(s)))
        .collect::<Vec<_>>();
    for i in 0..streams.len() {
        if verdicts[i] != Some(true) {
            continue;
        }
        for j in 0..streams.len() {
            if masks[i] & !masks[j] == 0 {
                c.record(verdicts[j] != Some(false), || {
                    format!("{:?} winning but superset {:?} losing", streams[i], streams[j])
                });
            }
        }
    }
    c
}

/// Exactly one of `S`, `S^c` wins whenever either is determined.
fn check_duality(
    game: &PrefixGame,
    streams: &[MembershipStream],
    strings: &[Option<bool>],
    len: usize,
) -> CheckOutcome {
    let mut c = CheckOutcome::new("complement duality");
    for s in streams {
        let a = verdict_bit(&game.eval_stream(s));
        let b = verdict_bit(&game.eval_stream(&s.complement()));
        c.record(a.is_some() == b.is_some() && (a.is_none() || a != b), || {
            format!("{s:?}: {a:?} vs complement {b:?}")
        });
    }
    let full = (1u64 << len) - 1;
    for (m, &a) in strings.iter().enumerate() {
        let b = strings[(!(m as u64) & full) as usize];
        c.record(a.is_some() == b.is_some() && (a.is_none() || a != b), || {
            format!("string {m:b}: {a:?} vs complement {b:?}")
        });
    }
    c
}

fn check_nonweak(t: &AppendixATables, game: &PrefixGame) -> (CheckOutcome, Option<Vec<BitString>>) {
    let mut c = CheckOutcome::new("three winning coalitions with empty intersection");
    let alpha = t.t1_base.iter().next();
    let beta = t.t0_base.iter().next();
    c.record(alpha.is_some() && beta.is_some(), || "no T1 or T0 string extends 10 within the bound".into());
    let witness = match (alpha, beta) {
        (Some(a), Some(b)) => {
            let w = vec!["11".parse().expect("literal"), *a, string_complement(b)];
            for s in &w {
                c.record(t.t1.contains(s), || format!("{s} is not in T1"));
            }
            let meet = w.iter().fold(u64::MAX, |acc, s| acc & s.bits());
            c.record(meet == 0, || format!("intersection {meet:b} is nonempty"));
            Some(w)
        }
        _ => None,
    };
    let three = nakamura_witness_bounded(game, t.max_len, 3);
    c.record(three.as_ref().map(|w| w.size()) == Some(3), || {
        "bounded search finds no family of three".into()
    });
    let two = nakamura_witness_bounded(game, t.max_len, 2);
    c.record(two.is_none(), || "two winning coalitions with empty intersection".into());
    (c, witness)
}

/// The diagonal set `A ⊇ 10` with `A(k_t) = 1 − v_t` for every listed `t`
/// and zeros elsewhere.
pub fn diagonal_prefix(t: &AppendixATables) -> BitString {
    let mut bits = vec![false; t.max_len];
    bits[0] = true;
    for (&k, &v) in t.k.iter().zip(&t.v) {
        if k < t.max_len {
            bits[k] = !v;
        }
    }
    BitString::from_slice(&bits).expect("bounded length")
}

fn check_no_finite_carrier(t: &AppendixATables) -> (CheckOutcome, Vec<usize>) {
    let mut c = CheckOutcome::new("diagonal prefixes extend both ways");
    let a = diagonal_prefix(t);
    let mut mixed = Vec::new();
    for l in 2..=t.max_len {
        let p = a.prefix(l);
        let win = t.t1.iter().any(|s| is_initial_segment(&p, s));
        let lose = t.t0.iter().any(|s| is_initial_segment(&p, s));
        if win && lose {
            mixed.push(l);
        }
    }
    c.record(mixed.len() >= 3, || format!("only {} lengths with both extensions", mixed.len()));
    c.note = Some(format!("A[{}] = {a}", t.max_len));
    (c, mixed)
}
