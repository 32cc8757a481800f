//! Reproduction of the table of possible Nakamura numbers, one entry per
//! class and witness.

use std::fmt::Write as _;

use serde::Serialize;

use crate::axioms::{census, classify, is_dictatorial, veto_players, TypeSignature, EMPTY_TYPES};
use crate::coalition::mask_members;
use crate::constructions::appendix_a::{appendix_a_game, IndexOracle};
use crate::constructions::audit::audit_appendix_a;
use crate::constructions::catalog;
use crate::constructions::product::{product_prefix, Pairing};
use crate::error::{Error, Result};
use crate::game::{Determination, FiniteGame, Game, PrefixGame};
use crate::nakamura::{
    lemma_constraints, nakamura_number, nakamura_witness_bounded, winning_determining_strings, NakamuraValue,
};

/// Deepest verdict table built for an infinite entry.
pub const MAX_EVIDENCE_DEPTH: usize = 20;

/// Largest string length audited for the determining-string construction.
pub const AUDIT_MAX_LEN: usize = 12;

/// Positions beyond the finite factor that must be seen to matter.
pub const MIN_RELEVANT_POSITIONS: usize = 3;

/// The set of Nakamura numbers the table lists for one class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expectation {
    Exact(usize),
    AtLeast(usize),
    Infinity,
    None,
}

impl Expectation {
    pub fn admits(&self, v: NakamuraValue) -> bool {
        match (*self, v) {
            (Expectation::Exact(e), NakamuraValue::Finite(x)) => x == e,
            (Expectation::AtLeast(e), NakamuraValue::Finite(x)) => x >= e,
            (Expectation::Infinity, NakamuraValue::Infinite) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for Expectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expectation::Exact(v) => write!(f, "{v}"),
            Expectation::AtLeast(v) => write!(f, ">= {v}"),
            Expectation::Infinity => write!(f, "infinity"),
            Expectation::None => write!(f, "none"),
        }
    }
}

/// Table entry for a type index and column.
pub fn table1_expectation(type_index: u8, finite: bool) -> Result<Expectation> {
    use Expectation::*;
    Ok(match type_index {
        1 => Exact(3),
        2 if finite => Infinity,
        2 => None,
        3 => AtLeast(3),
        4 | 12 => Infinity,
        5 | 7 | 9 | 13 | 15 => Exact(2),
        11 => AtLeast(2),
        6 | 8 | 10 | 14 | 16 => None,
        t => {
            return Err(Error::InvalidParams {
                name: "type_index".into(),
                reason: format!("{t} is not in 1..=16"),
            })
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    OutOfScope,
    NoneClass,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::OutOfScope => "out of scope",
            Status::NoneClass => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub class: String,
    pub type_index: u8,
    pub finite: bool,
    pub k: Option<usize>,
    pub witness: Option<String>,
    pub expected: Expectation,
    /// The value the witness is built to have.
    pub target: Option<NakamuraValue>,
    pub verified_type: Option<u8>,
    /// Exact for finite games; derived from the factors for infinite ones.
    pub nakamura: Option<NakamuraValue>,
    /// Size of the smallest witness found among bounded determining strings.
    pub bounded: Option<usize>,
    pub status: Status,
    pub evidence: Vec<String>,
}

impl ReportEntry {
    fn new(type_index: u8, finite: bool, k: Option<usize>) -> Result<Self> {
        let column = if finite { "finite" } else { "infinite" };
        Ok(ReportEntry {
            class: format!("type {type_index} {column}"),
            type_index,
            finite,
            k,
            witness: None,
            expected: table1_expectation(type_index, finite)?,
            target: None,
            verified_type: None,
            nakamura: None,
            bounded: None,
            status: Status::Fail,
            evidence: Vec::new(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub max_k: usize,
    pub depth: usize,
    pub entries: Vec<ReportEntry>,
}

impl TableReport {
    /// Every entry passes or is explicitly out of scope or empty.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Possible Nakamura numbers\n");
        let _ = writeln!(out, "max_k = {}, depth = {}\n", self.max_k, self.depth);
        let _ = writeln!(
            out,
            "| class | k | witness | expected | target | verified type | nu | bounded | status | evidence |"
        );
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|---|");
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        for e in &self.entries {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                e.class,
                opt(e.k.map(|k| k.to_string())),
                opt(e.witness.clone()),
                e.expected,
                opt(e.target.map(|v| v.to_string())),
                opt(e.verified_type.map(|t| t.to_string())),
                opt(e.nakamura.map(|v| v.to_string())),
                opt(e.bounded.map(|v| v.to_string())),
                e.status,
                e.evidence.join("; ").replace('|', "\\|"),
            );
        }
        let _ = writeln!(
            out,
            "\n{} pass, {} fail, {} none, {} out of scope",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::NoneClass),
            self.count(Status::OutOfScope)
        );
        out
    }
}

fn finite_entry(type_index: u8, k: Option<usize>, name: String, g: &FiniteGame, target: NakamuraValue) -> Result<ReportEntry> {
    let mut e = ReportEntry::new(type_index, true, k)?;
    e.witness = Some(name);
    e.target = Some(target);
    let c = classify(g)?;
    let t = c.signature.type_index();
    e.verified_type = Some(t);
    let nu = nakamura_number(g);
    e.nakamura = Some(nu.value);
    let witness_ok = c.witness.verify(g);
    let within = lemma_constraints(&c.signature, !nu.empty_winning).map(|lc| lc.contains(nu.value));
    e.evidence.push(format!("classified {} ({})", t, c.signature.pattern()));
    e.evidence.push(format!("axiom witnesses verified: {witness_ok}"));
    if !nu.witness.is_empty() {
        let w = nu.witness.iter().map(|s| format!("{:?}", s.members())).collect::<Vec<_>>();
        e.evidence.push(format!("empty-intersection witness {}", w.join(" ")));
    }
    e.evidence.push(format!("within lemma bounds: {}", within.clone().unwrap_or(false)));
    let ok = t == type_index && witness_ok && nu.value == target && e.expected.admits(nu.value) && within == Ok(true);
    e.status = if ok { Status::Pass } else { Status::Fail };
    Ok(e)
}

fn finite_entries(max_k: usize) -> Result<Vec<ReportEntry>> {
    use NakamuraValue::{Finite, Infinite};
    let mut out = vec![finite_entry(1, None, "majority(3)".into(), &catalog::majority(3)?, Finite(3))?];
    out.push(finite_entry(2, None, "dictator(0, 3)".into(), &catalog::dictator(0, 3)?, Infinite)?);
    for k in 3..=max_k {
        let mut sizes = vec![1; k];
        sizes[0] = 2;
        let g = catalog::partition_type3(&sizes, false)?;
        out.push(finite_entry(3, Some(k), format!("partition_type3({sizes:?})"), &g, Finite(k))?);
    }
    out.push(finite_entry(4, None, "unanimity({0,1})".into(), &catalog::type4_witness(), Infinite)?);
    out.push(finite_entry(5, None, "S meets {0,1}".into(), &catalog::type5_witness(), Finite(2))?);
    out.push(finite_entry(7, None, "S contains {0,1} or {2,3}".into(), &catalog::type7_witness(), Finite(2))?);
    out.push(finite_entry(9, None, "example_type9".into(), &catalog::example_type9(), Finite(2))?);
    out.push(finite_entry(11, Some(2), "type11_k2".into(), &catalog::type11_k2(), Finite(2))?);
    for k in 3..=max_k {
        let g = catalog::partition_type11(&vec![1; k])?;
        out.push(finite_entry(11, Some(k), format!("partition_type11({:?})", vec![1; k]), &g, Finite(k))?);
    }
    out.push(finite_entry(12, None, "{{0}} on {0,1}".into(), &catalog::type12_witness(), Infinite)?);
    out.push(finite_entry(13, None, "example_type13".into(), &catalog::example_type13(), Finite(2))?);
    out.push(finite_entry(15, None, "example_type15".into(), &catalog::example_type15(), Finite(2))?);
    Ok(out)
}

fn none_entries() -> Result<Vec<ReportEntry>> {
    let c3 = census(3)?;
    let mut out = Vec::new();
    for &t in EMPTY_TYPES.iter() {
        let mut e = ReportEntry::new(t, true, None)?;
        let found = c3.count(t);
        e.evidence.push(format!("{found} of {} games over 3 players", c3.total));
        e.status = if found == 0 { Status::NoneClass } else { Status::Fail };
        out.push(e);
        let mut e = ReportEntry::new(t, false, None)?;
        let sig = TypeSignature::from_type_index(t, false)?;
        match lemma_constraints(&sig, true) {
            Err(Error::InconsistentSignature(why)) => {
                e.evidence.push(why);
                e.status = Status::NoneClass;
            }
            other => {
                e.evidence.push(format!("signature not ruled out: {other:?}"));
                e.status = Status::Fail;
            }
        }
        out.push(e);
    }
    // strong and weak forces a dictator, whose singleton is a finite carrier
    let mut e = ReportEntry::new(2, false, None)?;
    let mut type2 = 0;
    let mut dictatorial = 0;
    for family in 0u64..1 << 7 {
        let g = FiniteGame::from_masks(3, mask_members(family).map(|i| i as u64 + 1))?;
        if classify(&g)?.signature.type_index() == 2 {
            type2 += 1;
            dictatorial += usize::from(is_dictatorial(&g).is_some());
        }
    }
    e.evidence.push(format!(
        "{dictatorial} of {type2} strong weak games over 3 players are dictatorial, so carried by one player"
    ));
    e.status = if type2 > 0 && dictatorial == type2 {
        Status::NoneClass
    } else {
        Status::Fail
    };
    out.push(e);
    Ok(out)
}

/// Verdicts on every string of one length, found by walking the prefix tree.
pub struct VerdictTable {
    pub depth: usize,
    /// 1 winning, -1 losing, 0 undetermined; indexed by the string's bits.
    pub verdicts: Vec<i8>,
}

impl VerdictTable {
    pub fn build(g: &PrefixGame, depth: usize) -> Result<Self> {
        if depth > MAX_EVIDENCE_DEPTH {
            return Err(Error::EnumerationTooLarge(1u128 << depth));
        }
        let mut verdicts = vec![0i8; 1 << depth];
        let mut stack = vec![crate::coalition::BitString::empty()];
        while let Some(s) = stack.pop() {
            let v = match g.classify(&s) {
                Determination::WinningDetermining => 1,
                Determination::LosingDetermining => -1,
                Determination::Truncated => continue,
                Determination::Nondetermining => {
                    if s.len() < depth {
                        stack.push(s.with(false));
                        stack.push(s.with(true));
                    }
                    continue;
                }
            };
            let low = s.bits() as usize;
            for hi in 0..1usize << (depth - s.len()) {
                verdicts[low | hi << s.len()] = v;
            }
        }
        Ok(VerdictTable { depth, verdicts })
    }

    fn full(&self) -> usize {
        (1 << self.depth) - 1
    }

    pub fn determined(&self) -> usize {
        self.verdicts.iter().filter(|&&v| v != 0).count()
    }

    /// A winning string contained in a losing one.
    pub fn monotonicity_violation(&self) -> Option<(usize, usize)> {
        // has_win[m]: some winning subset of m, remembered by value
        let mut has_win = self
            .verdicts
            .iter()
            .enumerate()
            .map(|(m, &v)| (v == 1).then_some(m))
            .collect::<Vec<_>>();
        for i in 0..self.depth {
            for m in 0..has_win.len() {
                if m >> i & 1 == 1 && has_win[m].is_none() {
                    has_win[m] = has_win[m ^ 1 << i];
                }
            }
        }
        (0..self.verdicts.len())
            .find(|&m| self.verdicts[m] == -1 && has_win[m].is_some())
            .map(|m| (has_win[m].expect("checked"), m))
    }

    /// A string which wins along with its complement.
    pub fn properness_violation(&self) -> Option<usize> {
        (0..self.verdicts.len()).find(|&m| self.verdicts[m] == 1 && self.verdicts[m ^ self.full()] == 1)
    }

    /// A string which loses along with its complement.
    pub fn strongness_violation(&self) -> Option<usize> {
        (0..self.verdicts.len()).find(|&m| self.verdicts[m] == -1 && self.verdicts[m ^ self.full()] == -1)
    }

    /// Positions `p ≥ from` whose flip turns a determined verdict into the
    /// opposite one.
    pub fn relevant_positions(&self, from: usize) -> Vec<usize> {
        (from..self.depth)
            .filter(|&p| {
                (0..self.verdicts.len()).any(|m| {
                    let v = self.verdicts[m];
                    v != 0 && self.verdicts[m ^ 1 << p] == -v
                })
            })
            .collect()
    }
}

fn string_of(m: usize, depth: usize) -> String {
    (0..depth).map(|i| if m >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Signature and Nakamura number of `ω1 ⊗ ω2` predicted from the factors.
pub fn product_prediction(
    s1: &TypeSignature,
    nu1: NakamuraValue,
    s2: &TypeSignature,
    nu2: NakamuraValue,
) -> (TypeSignature, NakamuraValue) {
    let nonweak = s1.nonweak && s2.nonweak;
    let sig = TypeSignature {
        monotonic: s1.monotonic && s2.monotonic,
        proper: s1.proper || s2.proper,
        // both factors here have losing coalitions
        strong: false,
        nonweak,
        finite: s1.finite && s2.finite,
    };
    let nu = if nonweak { nu1.max(nu2) } else { NakamuraValue::Infinite };
    (sig, nu)
}

fn type1_signature() -> TypeSignature {
    TypeSignature {
        monotonic: true,
        proper: true,
        strong: true,
        nonweak: true,
        finite: false,
    }
}

struct InfiniteCase {
    type_index: u8,
    k: Option<usize>,
    witness: String,
    game: PrefixGame,
    /// Players taken by the finite factor.
    offset: usize,
    sig: TypeSignature,
    nu: NakamuraValue,
    /// Position of a veto player, for weak games.
    veto: Option<usize>,
    extra: Vec<String>,
    extra_ok: bool,
}

fn infinite_entry(case: InfiniteCase, depth: usize) -> Result<ReportEntry> {
    let mut e = ReportEntry::new(case.type_index, false, case.k)?;
    e.witness = Some(case.witness);
    e.target = Some(case.nu);
    e.nakamura = Some(case.nu);
    e.evidence.extend(case.extra);
    let mut ok = case.extra_ok && case.sig.type_index() == case.type_index && e.expected.admits(case.nu);
    ok &= lemma_constraints(&case.sig, true).is_ok_and(|c| c.contains(case.nu));
    let d = depth.max(case.offset + 8).min(MAX_EVIDENCE_DEPTH);
    let vt = VerdictTable::build(&case.game, d)?;
    e.evidence.push(format!("{} of {} strings of length {d} determined", vt.determined(), vt.verdicts.len()));

    let mono = vt.monotonicity_violation();
    if case.sig.monotonic {
        ok &= mono.is_none();
        e.evidence.push(format!("no winning string inside a losing one: {}", mono.is_none()));
    } else {
        ok &= mono.is_some();
        if let Some((w, l)) = mono {
            e.evidence.push(format!("nonmonotonic: {} wins, {} loses", string_of(w, d), string_of(l, d)));
        }
    }
    let improper = vt.properness_violation();
    ok &= improper.is_none() == case.sig.proper;
    e.evidence.push(format!("no string wins with its complement: {}", improper.is_none()));
    let weakness = vt.strongness_violation();
    if case.sig.strong {
        ok &= weakness.is_none();
        e.evidence.push(format!("no string loses with its complement: {}", weakness.is_none()));
    } else {
        ok &= weakness.is_some();
        if let Some(m) = weakness {
            e.evidence.push(format!("nonstrong: {} and its complement lose", string_of(m, d)));
        }
    }

    match (case.nu, case.veto) {
        (NakamuraValue::Finite(nu), _) => {
            let found = nakamura_witness_bounded(&case.game, d, nu);
            let smaller = nakamura_witness_bounded(&case.game, d, nu - 1);
            e.bounded = found.as_ref().map(|w| w.size());
            ok &= e.bounded == Some(nu) && smaller.is_none();
            if let Some(w) = found {
                let strings = w.members.iter().map(|m| m.string.to_string()).collect::<Vec<_>>();
                e.evidence.push(format!("winning strings with empty intersection: {}", strings.join(" ")));
            }
            e.evidence.push(format!("no smaller family among strings up to length {d}: {}", smaller.is_none()));
        }
        (NakamuraValue::Infinite, Some(p)) => {
            let winners = winning_determining_strings(&case.game, d);
            let all_contain = winners.iter().all(|s| s.len() > p && s.get(p));
            ok &= !winners.is_empty() && all_contain;
            e.evidence.push(format!(
                "all {} winning determining strings up to length {d} contain player {p}: {all_contain}",
                winners.len()
            ));
        }
        (NakamuraValue::Infinite, None) => ok = false,
    }

    let relevant = vt.relevant_positions(case.offset);
    ok &= relevant.len() >= MIN_RELEVANT_POSITIONS;
    e.evidence.push(format!("relevant positions from {}: {:?}", case.offset, relevant));
    e.verified_type = ok.then_some(case.sig.type_index());
    e.status = if ok { Status::Pass } else { Status::Fail };
    Ok(e)
}

fn infinite_entries(max_k: usize, depth: usize) -> Result<Vec<ReportEntry>> {
    let oracle = IndexOracle::alternating();
    let a = appendix_a_game(&oracle);
    let a_game = Game::Prefix(a.clone());
    let audit = audit_appendix_a(&oracle, AUDIT_MAX_LEN)?;
    let failed = audit.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect::<Vec<_>>();
    let audit_note = format!(
        "determining-string audit to length {}: {}",
        AUDIT_MAX_LEN,
        if failed.is_empty() { "all checks pass".to_string() } else { format!("failed {failed:?}") }
    );
    let a_sig = type1_signature();
    let a_nu = NakamuraValue::Finite(3);
    let mut out = vec![infinite_entry(
        InfiniteCase {
            type_index: 1,
            k: None,
            witness: "appendixA(alternating)".into(),
            game: a.clone(),
            offset: 0,
            sig: a_sig,
            nu: a_nu,
            veto: None,
            extra: vec![audit_note.clone()],
            extra_ok: failed.is_empty(),
        },
        depth,
    )?];

    let with_a = |type_index: u8, k: Option<usize>, name: String, g1: FiniteGame| -> Result<ReportEntry> {
        let c1 = classify(&g1)?;
        let nu1 = nakamura_number(&g1).value;
        let n1 = g1.universe();
        let (sig, nu) = product_prediction(&c1.signature, nu1, &a_sig, a_nu);
        let veto = if sig.nonweak {
            None
        } else {
            veto_players(&g1)?.members().first().copied()
        };
        let pr = Pairing::Shift { k: n1 };
        let game = product_prefix(&Game::Finite(g1), &a_game, &pr)?;
        infinite_entry(
            InfiniteCase {
                type_index,
                k,
                witness: format!("{name} x appendixA(alternating), shift {n1}"),
                game,
                offset: n1,
                sig,
                nu,
                veto,
                extra: vec![
                    format!("finite factor type {} with nu {nu1}", c1.signature.type_index()),
                    audit_note.clone(),
                ],
                extra_ok: failed.is_empty(),
                },
            depth,
        )
    };

    for k in 3..=max_k {
        let mut sizes = vec![1; k];
        sizes[0] = 2;
        out.push(with_a(3, Some(k), format!("partition_type3({sizes:?})"), catalog::partition_type3(&sizes, false)?)?);
    }
    out.push(with_a(4, None, "unanimity({0,1})".into(), catalog::type4_witness())?);
    for k in 3..=max_k {
        out.push(with_a(11, Some(k), format!("partition_type11({:?})", vec![1; k]), catalog::partition_type11(&vec![1; k])?)?);
    }
    out.push(with_a(12, None, "{{0}} on {0,1}".into(), catalog::type12_witness())?);

    let mut e = ReportEntry::new(11, false, Some(2))?;
    e.status = Status::OutOfScope;
    e.evidence.push("needs an infinite nonproper factor, which is not constructed here".into());
    out.push(e);
    for t in [5u8, 7, 9, 13, 15] {
        let mut e = ReportEntry::new(t, false, None)?;
        e.status = Status::OutOfScope;
        e.evidence.push("no infinite witness is constructed for this class".into());
        out.push(e);
    }
    Ok(out)
}

/// Builds and checks every entry. `max_k ≥ 5` bounds the families of types
/// 3 and 11; `depth` is the string length used for infinite evidence.
pub fn run_table_report(max_k: usize, depth: usize) -> Result<TableReport> {
    if max_k < 5 {
        return Err(Error::InvalidParams {
            name: "max_k".into(),
            reason: format!("must be at least 5, got {max_k}"),
        });
    }
    if max_k > 12 {
        return Err(Error::InvalidParams {
            name: "max_k".into(),
            reason: format!("at most 12 supported, got {max_k}"),
        });
    }
    let mut entries = finite_entries(max_k)?;
    entries.extend(infinite_entries(max_k, depth)?);
    entries.extend(none_entries()?);
    entries.sort_by_key(|e| (!e.finite, e.type_index, e.k));
    Ok(TableReport { max_k, depth, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations() {
        assert_eq!(table1_expectation(3, true).unwrap(), Expectation::AtLeast(3));
        assert_eq!(table1_expectation(2, false).unwrap(), Expectation::None);
        assert_eq!(table1_expectation(4, false).unwrap(), Expectation::Infinity);
        assert!(table1_expectation(17, true).is_err());
        assert!(Expectation::AtLeast(3).admits(NakamuraValue::Finite(5)));
        assert!(!Expectation::Exact(2).admits(NakamuraValue::Infinite));
    }

    #[test]
    fn verdict_table_of_majority() {
        let g = crate::game::finite_as_prefix(&catalog::majority(3).unwrap());
        let vt = VerdictTable::build(&g, 3).unwrap();
        assert_eq!(vt.determined(), 8);
        assert!(vt.monotonicity_violation().is_none());
        assert!(vt.properness_violation().is_none());
        assert!(vt.strongness_violation().is_none());
        assert_eq!(vt.relevant_positions(0), vec![0, 1, 2]);
    }

    #[test]
    fn finite_column_passes() {
        for e in finite_entries(5).unwrap() {
            assert_eq!(e.status, Status::Pass, "{e:?}");
        }
    }
}
