//! Composition degree bounds and the exhaustive rank-two harness.
//!
//! Degrees here come from the diagram model, so every verdict is relative to
//! it.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::NestedDiagram;
use crate::error::{Error, Result};
use crate::morphism::Endomorphism;
use crate::search::{DegreeCatalogue, DegreeStatus, SearchOptions};

/// Intersection multiplicities between the components of one basis (rows,
/// each tagged with its Euler characteristic) and the spheres of another
/// (columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityMatrix {
    chi: Vec<i64>,
    columns: usize,
    entries: Vec<Vec<u32>>,
}

impl MultiplicityMatrix {
    /// Rows are `(chi, entries)`; all rows must have `columns` entries.
    pub fn new(columns: usize, rows: Vec<(i64, Vec<u32>)>) -> Option<Self> {
        if rows.iter().any(|(_, r)| r.len() != columns) {
            return None;
        }
        let (chi, entries) = rows.into_iter().unzip();
        Some(MultiplicityMatrix { chi, columns, entries })
    }

    /// Zero matrix with one row per component of `d`, tagged by its χ.
    pub fn for_components(d: &NestedDiagram, columns: usize) -> Self {
        let chi = (0..d.components.len())
            .map(|c| d.euler_characteristic(c))
            .collect::<Vec<_>>();
        let entries = vec![vec![0; columns]; chi.len()];
        MultiplicityMatrix { chi, columns, entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn chi(&self) -> &[i64] {
        &self.chi
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn set(&mut self, row: usize, column: usize, value: u32) {
        self.entries[row][column] = value;
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().map(|&e| e as u64).sum()
    }

    pub fn column_total(&self, column: usize) -> u64 {
        self.entries.iter().map(|r| r[column] as u64).sum()
    }
}

/// Surgery leaves each component meeting each sphere at most once; the
/// Euler characteristic tags are untouched.
pub fn cap_multiplicities(m: &MultiplicityMatrix) -> MultiplicityMatrix {
    MultiplicityMatrix {
        chi: m.chi.clone(),
        columns: m.columns,
        entries: m
            .entries
            .iter()
            .map(|r| r.iter().map(|&e| e.min(1)).collect())
            .collect(),
    }
}

/// Bound on `deg(f∘g)` when both degrees are zero.
pub fn muller_bound(n: usize) -> usize {
    n * n
}

/// Bound on `deg(f∘g)` when one side has degree zero and the other `k`.
pub fn mixed_bound(n: usize, k: usize) -> usize {
    n * (n + k)
}

/// Conjectured bound for arbitrary degrees.
pub fn conjecture_bound(n: usize, df: usize, dg: usize) -> usize {
    (n + df) * (n + dg)
}

/// Components of a rank-`n` basis of total degree `k`.
pub fn component_count(n: usize, k: usize) -> usize {
    n + k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Muller,
    Mixed,
    Conjecture,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Muller => "muller",
            Mode::Mixed => "mixed",
            Mode::Conjecture => "conjecture",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "muller" => Ok(Mode::Muller),
            "mixed" => Ok(Mode::Mixed),
            "conjecture" => Ok(Mode::Conjecture),
            _ => Err(format!("unknown mode {s:?} (muller, mixed, conjecture)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    Undecided,
}

impl Verdict {
    /// Compares a degree found within `budget` (or `None` when nothing was
    /// found, meaning the degree exceeds the budget) against `bound`.
    pub fn judge(degree: Option<usize>, budget: usize, bound: usize) -> Verdict {
        match degree {
            Some(d) if d <= bound => Verdict::Holds,
            Some(_) => Verdict::Violated,
            None if bound <= budget => Verdict::Violated,
            None => Verdict::Undecided,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Undecided => "undecided",
        }
    }
}

/// Outcome of an exhaustive claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Reproduced,
    Failed,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Reproduced => "reproduced",
            Outcome::Failed => "failed",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

/// A catalogued degree without its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeValue {
    pub value: Option<usize>,
    pub status: DegreeStatus,
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, self.status) {
            (Some(v), DegreeStatus::Certified) => write!(f, "{v}"),
            (Some(v), _) => write!(f, "<={v}"),
            (None, _) => write!(f, "?"),
        }
    }
}

/// One ordered pair; `f` and `g` index [`BoundsReport::pool`]. The
/// composite itself is recomputed on demand to keep large sweeps small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRow {
    pub f: usize,
    pub g: usize,
    pub deg_f: usize,
    pub deg_g: usize,
    pub deg_h: DegreeValue,
}

impl PairRow {
    pub fn muller(&self, n: usize) -> Option<usize> {
        (self.deg_f == 0 && self.deg_g == 0).then(|| muller_bound(n))
    }

    pub fn mixed(&self, n: usize) -> Option<usize> {
        (self.deg_f == 0 || self.deg_g == 0).then(|| mixed_bound(n, self.deg_f.max(self.deg_g)))
    }

    pub fn conjecture(&self, n: usize) -> usize {
        conjecture_bound(n, self.deg_f, self.deg_g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: usize,
    pub holds: usize,
    pub violated: usize,
    pub undecided: usize,
    /// Composite degree histogram; `>budget` counts composites not found.
    pub composite_degrees: BTreeMap<String, usize>,
    pub bound: Outcome,
    /// Muller mode only: composites certified at exactly the bound.
    pub at_bound: Option<usize>,
    /// Muller mode only: the claim that no composite reaches the bound.
    pub none_at_bound: Option<Outcome>,
    /// First violating pair, as `[f, g]`.
    pub violation_witness: Option<[String; 2]>,
    /// First pair certified at the bound in Muller mode, as `[f, g]`.
    pub at_bound_witness: Option<[String; 2]>,
}

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub rank: usize,
    pub budget: usize,
    pub mode: Mode,
    /// The automorphisms the rows refer to, with their catalogued degrees.
    pub pool: Vec<(Endomorphism, usize)>,
    pub rows: Vec<PairRow>,
}

pub const MODEL_NOTE: &str =
    "degrees are minimal token counts within the combinatorial diagram model, not over all sphere bases";

impl BoundsReport {
    pub fn asserted_bound(&self, row: &PairRow) -> usize {
        match self.mode {
            Mode::Muller => muller_bound(self.rank),
            Mode::Mixed => row.mixed(self.rank).expect("mixed rows have a degree-zero side"),
            Mode::Conjecture => row.conjecture(self.rank),
        }
    }

    pub fn verdict(&self, row: &PairRow) -> Verdict {
        Verdict::judge(row.deg_h.value, self.budget, self.asserted_bound(row))
    }

    pub fn composite(&self, row: &PairRow) -> Endomorphism {
        self.pool[row.f].0.compose(&self.pool[row.g].0).expect("same rank")
    }

    fn pair(&self, row: &PairRow) -> [String; 2] {
        [self.pool[row.f].0.to_string(), self.pool[row.g].0.to_string()]
    }

    pub fn summary(&self) -> Summary {
        let mut holds = 0;
        let mut violated = 0;
        let mut undecided = 0;
        let mut hist: BTreeMap<Option<usize>, usize> = BTreeMap::new();
        let mut violation_witness = None;
        let mut at_bound = 0;
        let mut at_bound_witness = None;
        for row in &self.rows {
            match self.verdict(row) {
                Verdict::Holds => holds += 1,
                Verdict::Violated => {
                    violated += 1;
                    violation_witness.get_or_insert_with(|| self.pair(row));
                }
                Verdict::Undecided => undecided += 1,
            }
            *hist.entry(row.deg_h.value).or_default() += 1;
            let certified = row.deg_h.status == DegreeStatus::Certified;
            if self.mode == Mode::Muller && certified && row.deg_h.value == Some(muller_bound(self.rank)) {
                at_bound += 1;
                at_bound_witness.get_or_insert_with(|| self.pair(row));
            }
        }
        let bound = if violated > 0 {
            Outcome::Failed
        } else if undecided > 0 {
            Outcome::Inconclusive
        } else {
            Outcome::Reproduced
        };
        let (at_bound, none_at_bound) = if self.mode == Mode::Muller {
            let claim = if at_bound > 0 {
                Outcome::Failed
            } else if undecided > 0 {
                Outcome::Inconclusive
            } else {
                Outcome::Reproduced
            };
            (Some(at_bound), Some(claim))
        } else {
            (None, None)
        };
        Summary {
            pairs: self.rows.len(),
            holds,
            violated,
            undecided,
            composite_degrees: hist
                .into_iter()
                .map(|(k, v)| (k.map_or_else(|| format!(">{}", self.budget), |d| d.to_string()), v))
                .collect(),
            bound,
            at_bound,
            none_at_bound,
            violation_witness,
            at_bound_witness,
        }
    }

    /// 0 when every asserted claim holds, 2 on a finding against one, 3 when
    /// the budget left something undecided.
    pub fn exit_code(&self) -> i32 {
        let s = self.summary();
        if s.bound == Outcome::Failed || s.none_at_bound == Some(Outcome::Failed) {
            2
        } else if s.bound == Outcome::Inconclusive || s.none_at_bound == Some(Outcome::Inconclusive) {
            3
        } else {
            0
        }
    }

    fn is_finding(&self, row: &PairRow) -> bool {
        self.verdict(row) != Verdict::Holds
            || (self.mode == Mode::Muller
                && row.deg_h.status == DegreeStatus::Certified
                && row.deg_h.value == Some(muller_bound(self.rank)))
    }

    /// Text table, one row per pair, then the summary block. With
    /// `findings_only`, rows that simply hold are left out.
    pub fn write_text<W: io::Write + ?Sized>(&self, out: &mut W, findings_only: bool) -> io::Result<()> {
        let n = self.rank;
        writeln!(
            out,
            "# verify-bounds mode={} rank={} budget={}",
            self.mode.as_str(),
            n,
            self.budget
        )?;
        writeln!(out, "# {MODEL_NOTE}")?;
        let width = self
            .pool
            .iter()
            .map(|(f, _)| f.to_string().len())
            .max()
            .unwrap_or(1)
            .max(1);
        let dash = |b: Option<usize>| b.map_or_else(|| "-".to_string(), |b| b.to_string());
        writeln!(
            out,
            "{:<width$}  {:<width$}  {:>3} {:>3}  {:<hw$}  {:>4}  {:>6} {:>5} {:>10}  verdict",
            "f",
            "g",
            "df",
            "dg",
            "h = f∘g",
            "deg",
            "muller",
            "mixed",
            "conjecture",
            hw = width + 8,
        )?;
        for row in &self.rows {
            if findings_only && !self.is_finding(row) {
                continue;
            }
            writeln!(
                out,
                "{:<width$}  {:<width$}  {:>3} {:>3}  {:<hw$}  {:>4}  {:>6} {:>5} {:>10}  {}",
                self.pool[row.f].0.to_string(),
                self.pool[row.g].0.to_string(),
                row.deg_f,
                row.deg_g,
                self.composite(row).to_string(),
                row.deg_h.to_string(),
                dash(row.muller(n)),
                dash(row.mixed(n)),
                row.conjecture(n),
                self.verdict(row).as_str(),
                hw = width + 8,
            )?;
        }
        out.write_all(self.summary_text().as_bytes())
    }

    pub fn summary_text(&self) -> String {
        let s = self.summary();
        let mut t = String::new();
        let _ = writeln!(t, "-- summary ({})", self.mode.as_str());
        let _ = writeln!(t, "pairs:      {}", s.pairs);
        let _ = writeln!(t, "holds:      {}", s.holds);
        let _ = writeln!(t, "violated:   {}", s.violated);
        let _ = writeln!(t, "undecided:  {}", s.undecided);
        let hist: Vec<String> = s.composite_degrees.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let _ = writeln!(t, "composite degrees: {}", hist.join(" "));
        let _ = writeln!(t, "bound: {}", s.bound.as_str());
        if let (Some(c), Some(o)) = (s.at_bound, s.none_at_bound) {
            let _ = writeln!(
                t,
                "composites certified at exactly {}: {} (claim that none exist: {})",
                muller_bound(self.rank),
                c,
                o.as_str()
            );
        }
        if let Some([f, g]) = &s.at_bound_witness {
            let _ = writeln!(t, "first pair at the bound: f = {f}, g = {g}");
        }
        if let Some([f, g]) = &s.violation_witness {
            let _ = writeln!(t, "violation witness: f = {f}, g = {g}");
        }
        t
    }

    /// JSON report: header, rows, summary. Written incrementally since
    /// sweeps can be large.
    pub fn write_json<W: io::Write + ?Sized>(&self, out: &mut W, findings_only: bool) -> io::Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            f: String,
            g: String,
            deg_f: usize,
            deg_g: usize,
            h: String,
            deg_h: &'a DegreeValue,
            muller: Option<usize>,
            mixed: Option<usize>,
            conjecture: usize,
            verdict: Verdict,
        }
        let n = self.rank;
        let head = serde_json::json!({
            "mode": self.mode,
            "rank": n,
            "budget": self.budget,
            "model_relative": true,
            "note": MODEL_NOTE,
        });
        let head = head.to_string();
        // reopen the header object to append rows and summary
        write!(out, "{},\"rows\":[", &head[..head.len() - 1])?;
        let mut first = true;
        for row in &self.rows {
            if findings_only && !self.is_finding(row) {
                continue;
            }
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            out.write_all(b"\n")?;
            let r = Row {
                f: self.pool[row.f].0.to_string(),
                g: self.pool[row.g].0.to_string(),
                deg_f: row.deg_f,
                deg_g: row.deg_g,
                h: self.composite(row).to_string(),
                deg_h: &row.deg_h,
                muller: row.muller(n),
                mixed: row.mixed(n),
                conjecture: row.conjecture(n),
                verdict: self.verdict(row),
            };
            serde_json::to_writer(&mut *out, &r)?;
        }
        write!(out, "\n],\"summary\":")?;
        serde_json::to_writer(&mut *out, &self.summary())?;
        writeln!(out, "}}")
    }
}

/// Runs a sweep against a prebuilt catalogue, which supplies both the
/// operand pool and the composite degrees.
pub fn verify_with_catalogue(cat: &DegreeCatalogue, mode: Mode, opts: SearchOptions) -> Result<BoundsReport> {
    let low = |k: usize| cat.with_degree(k).into_iter().map(move |f| (f.clone(), k));
    let top = cat.budget().min(2);
    let (pool, lefts, rights): (Vec<(Endomorphism, usize)>, Vec<usize>, Vec<usize>) = match mode {
        Mode::Muller => {
            let pool: Vec<_> = low(0).collect();
            let all: Vec<usize> = (0..pool.len()).collect();
            (pool, all.clone(), all)
        }
        Mode::Mixed => {
            let zero: Vec<_> = low(0).collect();
            let rest: Vec<_> = (1..=top).flat_map(low).collect();
            if rest.is_empty() {
                return Err(Error::EmptyCatalogue(1));
            }
            let z = zero.len();
            let r = rest.len();
            let pool: Vec<_> = zero.into_iter().chain(rest).collect();
            (pool, (0..z).collect(), (z..z + r).collect())
        }
        Mode::Conjecture => {
            let pool: Vec<_> = (0..=top).flat_map(low).collect();
            let all: Vec<usize> = (0..pool.len()).collect();
            (pool, all.clone(), all)
        }
    };
    if pool.is_empty() {
        return Err(Error::EmptyCatalogue(0));
    }
    let pairs: Vec<(usize, usize)> = lefts
        .iter()
        .flat_map(|&f| rights.iter().map(move |&g| (f, g)))
        .collect();
    let rows: Vec<PairRow> = opts.run(|| {
        pairs
            .par_iter()
            .map(|&(f, g)| {
                let h = pool[f].0.compose(&pool[g].0).expect("same rank");
                let d = cat.degree(&h);
                PairRow {
                    f,
                    g,
                    deg_f: pool[f].1,
                    deg_g: pool[g].1,
                    deg_h: DegreeValue {
                        value: d.value,
                        status: d.status,
                    },
                }
            })
            .collect()
    });
    Ok(BoundsReport {
        rank: cat.rank(),
        budget: cat.budget(),
        mode,
        pool,
        rows,
    })
}

/// Exhaustive sweep at rank `n` with composite degrees searched up to
/// `budget` tokens. Rank above 2 needs `allow_large`.
pub fn verify_bounds(n: usize, budget: usize, mode: Mode, opts: SearchOptions) -> Result<BoundsReport> {
    if n > 2 && !opts.allow_large {
        return Err(Error::GuardExceeded(format!(
            "exhaustive sweeps run at rank 2 or less, got {n}"
        )));
    }
    let cat = DegreeCatalogue::build(n, budget, opts)?;
    verify_with_catalogue(&cat, mode, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::{degree_one_rank_one, endo};

    #[test]
    fn capping_examples() {
        let m = MultiplicityMatrix::new(2, vec![(2, vec![2, 0]), (1, vec![1, 3])]).unwrap();
        let c = cap_multiplicities(&m);
        assert_eq!(c.entries(), &[vec![1, 0], vec![1, 1]]);
        assert_eq!(c.chi(), m.chi());

        let z = MultiplicityMatrix::new(3, vec![(2, vec![0; 3]); 2]).unwrap();
        assert_eq!(cap_multiplicities(&z), z);

        // a three-component sphere: end-cap, tunnel, end-cap
        let m = MultiplicityMatrix::new(1, vec![(1, vec![2]), (0, vec![2]), (1, vec![1])]).unwrap();
        assert_eq!(m.column_total(0), 5);
        let c = cap_multiplicities(&m);
        assert_eq!(c.column_total(0), 3);
        assert!(c.total() <= (c.rows() * c.columns()) as u64);
        assert!(MultiplicityMatrix::new(2, vec![(2, vec![1])]).is_none());
    }

    #[test]
    fn formulas() {
        assert_eq!(muller_bound(1), 1);
        assert_eq!(muller_bound(2), 4);
        assert_eq!(muller_bound(3), 9);
        assert_eq!(mixed_bound(2, 1), 6);
        assert_eq!(mixed_bound(2, 0), muller_bound(2));
        assert_eq!(mixed_bound(3, 2), 15);
        assert_eq!(conjecture_bound(2, 0, 0), 4);
        assert_eq!(conjecture_bound(2, 1, 2), 12);
        assert_eq!(component_count(2, 1), 3);
        assert_eq!(component_count(2, 2), 4);
    }

    #[test]
    fn rows_follow_components() {
        let d = degree_one_rank_one();
        let m = MultiplicityMatrix::for_components(&d, 1);
        assert_eq!(m.rows(), component_count(1, d.total_tokens()));
        assert_eq!(m.chi().iter().sum::<i64>(), 2);
    }

    #[test]
    fn judge() {
        assert_eq!(Verdict::judge(Some(3), 4, 4), Verdict::Holds);
        assert_eq!(Verdict::judge(Some(5), 6, 4), Verdict::Violated);
        assert_eq!(Verdict::judge(None, 4, 4), Verdict::Violated);
        assert_eq!(Verdict::judge(None, 4, 6), Verdict::Undecided);
    }

    #[test]
    fn identity_pair_and_small_sweep() {
        let r = verify_bounds(2, 2, Mode::Muller, SearchOptions::default()).unwrap();
        assert_eq!(r.rows.len(), 168 * 168);
        let id = endo(&["a", "b"]);
        let i = r.pool.iter().position(|(f, _)| *f == id).unwrap();
        let row = r.rows.iter().find(|row| row.f == i && row.g == i).unwrap();
        assert_eq!(r.composite(row), id);
        assert_eq!(row.deg_h.value, Some(0));
        assert_eq!(r.verdict(row), Verdict::Holds);
        let s = r.summary();
        assert_eq!(s.violated, 0);
        // the budget cannot decide composites beyond two tokens
        assert!(s.undecided > 0);
        assert_eq!(r.exit_code(), 3);
        assert_eq!(s.holds + s.undecided, s.pairs);
    }

    #[test]
    fn rank_one_is_conclusive() {
        let r = verify_bounds(1, 1, Mode::Muller, SearchOptions::default()).unwrap();
        assert_eq!(r.rows.len(), 4);
        let s = r.summary();
        assert_eq!((s.holds, s.bound, s.at_bound), (4, Outcome::Reproduced, Some(0)));
        assert_eq!(r.exit_code(), 0);
        let m = verify_bounds(1, 1, Mode::Mixed, SearchOptions::default());
        assert!(matches!(m, Err(Error::EmptyCatalogue(1))));
        assert!(verify_bounds(3, 0, Mode::Muller, SearchOptions::default()).is_err());
    }

    #[test]
    fn report_output_is_well_formed() {
        let r = verify_bounds(1, 1, Mode::Conjecture, SearchOptions::default()).unwrap();
        let mut buf = Vec::new();
        r.write_json(&mut buf, false).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["model_relative"], true);
        assert_eq!(v["rows"].as_array().unwrap().len(), r.rows.len());
        assert_eq!(v["summary"]["pairs"], r.rows.len());
        let mut text = Vec::new();
        r.write_text(&mut text, false).unwrap();
        let text = String::from_utf8(text).unwrap();
        assert!(text.contains(MODEL_NOTE));
        assert!(text.contains("-- summary (conjecture)"));
    }
}
