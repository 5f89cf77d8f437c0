//! Reference tables at powers of ten, compared against exact evaluation,
//! plus plot samples over `[2·10⁴, 10⁵]`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::inequality::{ArgRounding, EvalError, Evaluator, Family};
use crate::numerics::{parse_table_value, ExtFloat, NumericsError};
use crate::scanner::{make_grid, GridKind, ScanError};

/// Relative tolerance that separates near misses from real mismatches.
pub const SENSITIVITY_TOLERANCE: f64 = 1e-3;
/// Sum lengths tried when a table with a sum parameter fails.
pub const N_SCAN_RANGE: std::ops::RangeInclusive<u32> = 2..=10;
/// Parameter assumed for the sum-based tables.
pub const DEFAULT_TABLE_N: u32 = 5;
/// Plot interval shared by every figure.
pub const FIGURE_RANGE: (f64, f64) = (2e4, 1e5);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReproError {
    #[error("unknown table {0}; expected one of 1, 2, 3, 4, 5, 7")]
    UnknownTable(String),
    #[error("unknown figure {0}; expected 1..=8")]
    UnknownFigure(u32),
    #[error("tolerance must lie in (0, 1], got {0}")]
    Tolerance(f64),
    #[error("expected value {text:?} does not parse: {source}")]
    Transcription { text: String, source: NumericsError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Scan(#[from] ScanError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    T1H,
    T2K,
    T3L,
    T4F,
    T5N3N4,
    T7H2H3,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::T1H,
        TableId::T2K,
        TableId::T3L,
        TableId::T4F,
        TableId::T5N3N4,
        TableId::T7H2H3,
    ];

    pub fn number(self) -> u32 {
        match self {
            TableId::T1H => 1,
            TableId::T2K => 2,
            TableId::T3L => 3,
            TableId::T4F => 4,
            TableId::T5N3N4 => 5,
            TableId::T7H2H3 => 7,
        }
    }

    /// Whether the table depends on the sum length `n`.
    pub fn uses_n(self) -> bool {
        matches!(self, TableId::T3L | TableId::T4F | TableId::T5N3N4)
    }

    /// `(column label, family)` for each value column, with sum length `n`.
    pub fn series(self, n: u32) -> Vec<(&'static str, Family)> {
        match self {
            TableId::T1H => vec![("H", Family::H)],
            TableId::T2K => vec![("K", Family::K)],
            TableId::T3L => vec![("L", Family::L { n })],
            TableId::T4F => vec![("F", Family::F { n })],
            TableId::T5N3N4 => vec![
                ("N3", Family::Nr { n, r: 3 }),
                ("N4", Family::Nr { n, r: 4 }),
            ],
            TableId::T7H2H3 => vec![("H2", Family::Hn { n: 2 }), ("H3", Family::Hn { n: 3 })],
        }
    }

    fn source(self) -> &'static [(u32, &'static [&'static str])] {
        match self {
            TableId::T1H => T1,
            TableId::T2K => T2,
            TableId::T3L => T3,
            TableId::T4F => T4,
            TableId::T5N3N4 => T5,
            TableId::T7H2H3 => T7,
        }
    }
}

impl FromStr for TableId {
    type Err = ReproError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches(['T', 't']);
        let t = t.split('_').next().unwrap_or("");
        TableId::ALL
            .into_iter()
            .find(|id| id.number().to_string() == t)
            .ok_or_else(|| ReproError::UnknownTable(s.to_string()))
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

// Reference values, keyed by the decimal exponent of x.
const T1: &[(u32, &[&str])] = &[
    (4, &[r"-4.822952515086 \times 10^8"]),
    (5, &[r"-1.9535582364473376 \times 10^{11}"]),
    (6, &[r"-9.742665854621681 \times 10^{13}"]),
    (7, &[r"-5.373324095991878 \times 10^{16}"]),
    (8, &[r"-3.2776888213143585 \times 10^{19}"]),
    (9, &[r"-2.142500053569382 \times 10^{22}"]),
    (10, &[r"-1.4738226482632569 \times 10^{25}"]),
    (11, &[r"-1.0555737602257731 \times 10^{28}"]),
    (12, &[r"-7.810947114144009 \times 10^{30}"]),
    (13, &[r"-5.937547995444999 \times 10^{33}"]),
    (14, &[r"-4.6163278697477706 \times 10^{36}"]),
    (15, &[r"-3.65847701300371 \times 10^{39}"]),
    (16, &[r"-2.947501336471066 \times 10^{42}"]),
    (17, &[r"-2.4089115035201524 \times 10^{45}"]),
    (18, &[r"-1.9935903086211532 \times 10^{48}"]),
];

const T2: &[(u32, &[&str])] = &[
    (4, &[r"6.785501979995337 \times 10^{11}"]),
    (5, &[r"2.858713229490609 \times 10^{15}"]),
    (6, &[r"1.3657430631495643 \times 10^{19}"]),
    (7, &[r"7.37684110441765 \times 10^{22}"]),
    (8, &[r"4.2993020901898284 \times 10^{26}"]),
    (9, &[r"2.6664968326322003 \times 10^{30}"]),
    (10, &[r"1.7394264262779463 \times 10^{34}"]),
    (11, &[r"1.1821189632007215 \times 10^{38}"]),
    (12, &[r"8.310509439561298 \times 10^{41}"]),
    (13, &[r"6.010924984361412 \times 10^{45}"]),
    (14, &[r"4.454174125769207 \times 10^{49}"]),
    (15, &[r"3.3701437003780375 \times 10^{53}"]),
    (16, &[r"2.59663004179433 \times 10^{57}"]),
    (17, &[r"2.0327843159078997 \times 10^{61}"]),
];

const T3: &[(u32, &[&str])] = &[
    (4, &[r"5.442878634267854 \times 10^{6}"]),
    (5, &[r"3.182941989056241 \times 10^{8}"]),
    (6, &[r"2.0720876553125698 \times 10^{10}"]),
    (7, &[r"1.453173495473891 \times 10^{12}"]),
    (8, &[r"1.0748621057424523 \times 10^{14}"]),
    (9, &[r"8.271311872938837 \times 10^{15}"]),
    (10, &[r"6.562072688654034 \times 10^{17}"]),
    (11, &[r"5.3333332449648206 \times 10^{19}"]),
    (12, &[r"4.4203146604764075 \times 10^{21}"]),
    (13, &[r"3.723359062321086 \times 10^{23}"]),
    (14, &[r"3.1792547132494815 \times 10^{25}"]),
    (15, &[r"2.7463355733587377 \times 10^{27}"]),
    (16, &[r"2.3962303815115464 \times 10^{29}"]),
];

const T4: &[(u32, &[&str])] = &[
    (4, &[r"-377,275.13516957406"]),
    (5, &[r"-1.830179494511997 \times 10^{7}"]),
    (6, &[r"-1.0203946684413686 \times 10^{9}"]),
    (7, &[r"-6.256701329540303 \times 10^{10}"]),
    (8, &[r"-4.1109224248432134 \times 10^{12}"]),
    (9, &[r"-2.8451189547136775 \times 10^{14}"]),
    (10, &[r"-2.0504855777527976 \times 10^{16}"]),
    (11, &[r"-1.5264989872331325 \times 10^{18}"]),
    (12, &[r"-1.1670093161419563 \times 10^{20}"]),
    (13, &[r"-9.121682100604639 \times 10^{21}"]),
    (14, &[r"-7.264828101112622 \times 10^{23}"]),
];

const T5: &[(u32, &[&str])] = &[
    (
        4,
        &[
            r"-6.204817261289663 \times 10^{12}",
            r"-7.911694463952808 \times 10^{15}",
        ],
    ),
    (
        5,
        &[
            r"-2.0538877597403304 \times 10^{16}",
            r"-1.9593096354084415 \times 10^{20}",
        ],
    ),
    (
        6,
        &[
            r"-8.54030555139954 \times 10^{19}",
            r"-6.465704751724349 \times 10^{24}",
        ],
    ),
    (
        7,
        &[
            r"-4.1469160311751975 \times 10^{23}",
            r"-2.597975844704281 \times 10^{29}",
        ],
    ),
    (
        8,
        &[
            r"-2.2502470326411468 \times 10^{27}",
            r"-1.2022000181431568 \times 10^{34}",
        ],
    ),
    (
        9,
        &[
            r"-1.3249101964920937 \times 10^{31}",
            r"-6.170254706864245 \times 10^{38}",
        ],
    ),
    (
        10,
        &[
            r"-8.304086276172884 \times 10^{34}",
            r"-3.427910948552053 \times 10^{43}",
        ],
    ),
    (
        11,
        &[
            r"-5.4674077933205056 \times 10^{38}",
            r"-2.026811001937711 \times 10^{48}",
        ],
    ),
    (
        12,
        &[
            r"-3.746002497341975 \times 10^{42}",
            r"-1.260254434482889 \times 10^{53}",
        ],
    ),
    (
        13,
        &[
            r"-2.6523089311884873 \times 10^{46}",
            r"-8.168086531604906 \times 10^{57}",
        ],
    ),
    (
        14,
        &[
            r"-1.930438588096488 \times 10^{50}",
            r"-5.481394602239431 \times 10^{62}",
        ],
    ),
    (
        15,
        &[
            r"-1.4384149341267808 \times 10^{54}",
            r"-3.7889284123142535 \times 10^{67}",
        ],
    ),
];

const T7: &[(u32, &[&str])] = &[
    (
        4,
        &[
            r"6.353725021975254 \times 10^{27}",
            r"2.617585266401968 \times 10^{83}",
        ],
    ),
    (
        5,
        &[
            r"6.835585478626048 \times 10^{35}",
            r"3.2474882786926336 \times 10^{107}",
        ],
    ),
    (
        6,
        &[
            r"1.1261441103738037 \times 10^{44}",
            r"1.4493790443082677 \times 10^{132}",
        ],
    ),
    (
        7,
        &[
            r"2.517601761588046 \times 10^{52}",
            r"1.6171807959592812 \times 10^{157}",
        ],
    ),
    (
        8,
        &[
            r"6.965999334038062 \times 10^{60}",
            r"3.42269895601566 \times 10^{182}",
        ],
    ),
    (
        9,
        &[
            r"2.2631415625131205 \times 10^{69}",
            r"1.1729707311062672 \times 10^{208}",
        ],
    ),
    (
        10,
        &[
            r"8.334950926673871 \times 10^{77}",
            r"5.856806953089547 \times 10^{233}",
        ],
    ),
    (
        11,
        &[
            r"3.393363660513159 \times 10^{86}",
            r"3.950820693357716 \times 10^{259}",
        ],
    ),
    (
        12,
        &[
            r"1.4995319398929942 \times 10^{95}",
            r"3.408309291619576 \times 10^{285}",
        ],
    ),
    (
        13,
        &[
            r"7.0941717053768875 \times 10^{103}",
            r"3.608074552069926 \times 10^{311}",
        ],
    ),
    (
        14,
        &[
            r"3.555379086542425 \times 10^{112}",
            r"4.540919459707699 \times 10^{337}",
        ],
    ),
    (
        15,
        &[
            r"1.8720454577090458 \times 10^{121}",
            r"6.627717169602305 \times 10^{363}",
        ],
    ),
    (
        16,
        &[
            r"1.028783938302183 \times 10^{130}",
            r"1.0998319401738324 \times 10^{390}",
        ],
    ),
    (
        17,
        &[
            r"5.869229663529639 \times 10^{138}",
            r"2.041946308723196 \times 10^{416}",
        ],
    ),
    (
        18,
        &[
            r"3.460762114044545 \times 10^{147}",
            r"4.185719359179408 \times 10^{442}",
        ],
    ),
];

/// One reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedValue {
    pub series: &'static str,
    pub x: u64,
    /// Source text as transcribed.
    pub source: &'static str,
    /// Scientific form carrying exactly the transcribed digits.
    pub canonical: String,
    pub value: ExtFloat,
}

/// All reference values of a table in row-major order.
pub fn expected_table(id: TableId) -> Result<Vec<ExpectedValue>, ReproError> {
    let labels: Vec<&'static str> = id.series(DEFAULT_TABLE_N).iter().map(|s| s.0).collect();
    let mut out = Vec::new();
    for &(exp, texts) in id.source() {
        for (&series, &source) in labels.iter().zip(texts) {
            let (value, canonical) =
                parse_table_value(source).map_err(|e| ReproError::Transcription {
                    text: source.to_string(),
                    source: e,
                })?;
            out.push(ExpectedValue {
                series,
                x: 10u64.pow(exp),
                source,
                canonical,
                value,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    Mismatch,
    NoExpected,
    SkippedOutOfRange,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Match => "match",
            RowStatus::Mismatch => "mismatch",
            RowStatus::NoExpected => "no-expected",
            RowStatus::SkippedOutOfRange => "skipped-out-of-range",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub series: &'static str,
    pub x: u64,
    pub expected: Option<ExtFloat>,
    pub expected_text: Option<String>,
    /// `None` for rows beyond the cap.
    pub computed: Option<ExtFloat>,
    pub rel_error: Option<f64>,
    pub status: RowStatus,
}

/// Near miss recomputed with round-to-nearest π arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundingSensitivity {
    pub series: &'static str,
    pub x: u64,
    pub floor_rel_error: f64,
    pub nearest_rel_error: f64,
}

/// Outcome of retrying a sum-based table with other sum lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct NScan {
    /// `(n, matching rows, computed rows)`.
    pub per_n: Vec<(u32, usize, usize)>,
    /// Every `n` that matches all computed rows.
    pub matching: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub id: TableId,
    pub n: Option<u32>,
    pub x_cap: f64,
    pub tolerance: f64,
    pub rows: Vec<TableRow>,
    pub sensitivity: Vec<RoundingSensitivity>,
    pub n_scan: Option<NScan>,
}

impl TableReport {
    pub fn mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Mismatch)
            .count()
    }

    pub fn all_computed_match(&self) -> bool {
        self.mismatches() == 0
    }

    /// Human-readable notes for standard error.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.sensitivity {
            out.push(format!(
                "rounding sensitivity: {} at x = {}: floor rel error {:.3e}, nearest rel error {:.3e}",
                s.series, s.x, s.floor_rel_error, s.nearest_rel_error
            ));
        }
        if let Some(scan) = &self.n_scan {
            for (n, ok, total) in &scan.per_n {
                out.push(format!("n-scan: n = {n} matches {ok} of {total} rows"));
            }
            match scan.matching.as_slice() {
                [] => out.push("n-scan: no n in 2..=10 matches every row".into()),
                ns => out.push(format!("n-scan: rows all match for n in {ns:?}")),
            }
        }
        out
    }
}

fn rel_error(computed: ExtFloat, expected: ExtFloat) -> Option<f64> {
    computed.rel_error(&expected)
}

fn compute_rows(
    evaluator: &Evaluator<'_>,
    id: TableId,
    n: u32,
    x_cap: f64,
    tolerance: f64,
) -> Result<Vec<TableRow>, ReproError> {
    let series = id.series(n);
    let expected = expected_table(id)?;
    expected
        .par_iter()
        .map(|ev| {
            let family = &series.iter().find(|s| s.0 == ev.series).expect("series").1;
            let expected_text = Some(ev.canonical.clone());
            if ev.x as f64 > x_cap {
                return Ok(TableRow {
                    series: ev.series,
                    x: ev.x,
                    expected: Some(ev.value),
                    expected_text,
                    computed: None,
                    rel_error: None,
                    status: RowStatus::SkippedOutOfRange,
                });
            }
            let computed = evaluator.eval(family, ev.x as f64)?.value;
            let rel = rel_error(computed, ev.value);
            let status = match rel {
                None => RowStatus::NoExpected,
                Some(r) if r <= tolerance => RowStatus::Match,
                Some(_) => RowStatus::Mismatch,
            };
            Ok(TableRow {
                series: ev.series,
                x: ev.x,
                expected: Some(ev.value),
                expected_text,
                computed: Some(computed),
                rel_error: rel,
                status,
            })
        })
        .collect()
}

/// Recomputes near misses with round-to-nearest π arguments.
pub fn rounding_diagnostic(
    evaluator: &Evaluator<'_>,
    id: TableId,
    n: u32,
    rows: &[TableRow],
) -> Result<Vec<RoundingSensitivity>, ReproError> {
    let nearest = evaluator.with_rounding(ArgRounding::Nearest);
    let series = id.series(n);
    rows.iter()
        .filter(|r| r.status == RowStatus::Mismatch)
        .filter(|r| r.rel_error.is_some_and(|e| e <= SENSITIVITY_TOLERANCE))
        .map(|r| {
            let family = &series.iter().find(|s| s.0 == r.series).expect("series").1;
            let v = nearest.eval(family, r.x as f64)?.value;
            Ok(RoundingSensitivity {
                series: r.series,
                x: r.x,
                floor_rel_error: r.rel_error.unwrap_or(f64::NAN),
                nearest_rel_error: rel_error(v, r.expected.unwrap_or(ExtFloat::ZERO))
                    .unwrap_or(f64::NAN),
            })
        })
        .collect()
}

/// Retries a sum-based table with every `n` in [`N_SCAN_RANGE`].
pub fn n_scan(
    evaluator: &Evaluator<'_>,
    id: TableId,
    x_cap: f64,
    tolerance: f64,
) -> Result<NScan, ReproError> {
    let mut per_n = Vec::new();
    let mut matching = Vec::new();
    for n in N_SCAN_RANGE {
        let rows = compute_rows(evaluator, id, n, x_cap, tolerance)?;
        let total = rows.iter().filter(|r| r.computed.is_some()).count();
        let ok = rows.iter().filter(|r| r.status == RowStatus::Match).count();
        if total > 0 && ok == total {
            matching.push(n);
        }
        per_n.push((n, ok, total));
    }
    Ok(NScan { per_n, matching })
}

/// Computes every row with `x ≤ x_cap` and compares it to the reference.
///
/// Near misses trigger the rounding diagnostic; mismatches in a sum-based
/// table trigger the `n` scan.
pub fn reproduce_table(
    evaluator: &Evaluator<'_>,
    id: TableId,
    x_cap: f64,
    tolerance: f64,
) -> Result<TableReport, ReproError> {
    reproduce_table_with_n(evaluator, id, DEFAULT_TABLE_N, x_cap, tolerance)
}

pub fn reproduce_table_with_n(
    evaluator: &Evaluator<'_>,
    id: TableId,
    n: u32,
    x_cap: f64,
    tolerance: f64,
) -> Result<TableReport, ReproError> {
    if !(tolerance > 0.0 && tolerance <= 1.0) {
        return Err(ReproError::Tolerance(tolerance));
    }
    let rows = compute_rows(evaluator, id, n, x_cap, tolerance)?;
    let sensitivity = rounding_diagnostic(evaluator, id, n, &rows)?;
    let failed = rows.iter().any(|r| r.status == RowStatus::Mismatch);
    let n_scan = if failed && id.uses_n() {
        Some(n_scan(evaluator, id, x_cap, tolerance)?)
    } else {
        None
    };
    Ok(TableReport {
        id,
        n: id.uses_n().then_some(n),
        x_cap,
        tolerance,
        rows,
        sensitivity,
        n_scan,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(format!(
                "unknown format {other:?}; expected csv or markdown"
            )),
        }
    }
}

fn multi_series(rows: &[TableRow]) -> bool {
    rows.first()
        .is_some_and(|first| rows.iter().any(|r| r.series != first.series))
}

/// `d.ddd × 10^k` from the 16-digit scientific form.
fn table_style(v: &ExtFloat) -> String {
    let s = v.to_string();
    match s.split_once('e') {
        Some((m, "0")) => m.to_string(),
        Some((m, k)) => format!("{m} × 10^{k}"),
        None => s,
    }
}

fn x_label(x: u64) -> String {
    let k = (x as f64).log10().round() as u32;
    if 10u64.checked_pow(k) == Some(x) {
        format!("10^{k}")
    } else {
        x.to_string()
    }
}

fn series_heading(series: &str) -> String {
    let mut chars = series.chars();
    let head: String = chars.next().into_iter().collect();
    let tail: String = chars.collect();
    if tail.is_empty() {
        format!("{head}(x)")
    } else {
        format!("{head}_{tail}(x)")
    }
}

/// CSV (`x,expected,computed,rel_error,status`, with a leading `series`
/// column when rows mix series) or a markdown table of computed values.
pub fn emit(rows: &[TableRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(rows),
        OutputFormat::Markdown => emit_markdown(rows),
    }
}

fn emit_csv(rows: &[TableRow]) -> String {
    let multi = multi_series(rows);
    let mut out = String::new();
    if multi {
        out.push_str("series,");
    }
    out.push_str("x,expected,computed,rel_error,status\n");
    for r in rows {
        if multi {
            write!(out, "{},", r.series).unwrap();
        }
        let expected = r.expected_text.clone().unwrap_or_default();
        let computed = r.computed.map(|c| c.to_string()).unwrap_or_default();
        let rel = r.rel_error.map(|e| format!("{e:.3e}")).unwrap_or_default();
        writeln!(
            out,
            "{},{expected},{computed},{rel},{}",
            r.x,
            r.status.name()
        )
        .unwrap();
    }
    out
}

fn emit_markdown(rows: &[TableRow]) -> String {
    let mut series: Vec<&str> = Vec::new();
    let mut xs: Vec<u64> = Vec::new();
    for r in rows {
        if !series.contains(&r.series) {
            series.push(r.series);
        }
        if !xs.contains(&r.x) {
            xs.push(r.x);
        }
    }
    let mut out = String::from("| x |");
    for s in &series {
        write!(out, " {} |", series_heading(s)).unwrap();
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(series.len()));
    out.push('\n');
    for x in xs {
        write!(out, "| {} |", x_label(x)).unwrap();
        for s in &series {
            let cell = rows
                .iter()
                .find(|r| r.x == x && r.series == *s)
                .and_then(|r| r.computed)
                .map_or_else(|| "not computed".to_string(), |v| table_style(&v));
            write!(out, " {cell} |").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Family plotted in each figure.
pub fn figure_family(figure: u32) -> Result<Family, ReproError> {
    let n = DEFAULT_TABLE_N;
    Ok(match figure {
        1 => Family::H,
        2 => Family::K,
        3 => Family::L { n },
        4 => Family::F { n },
        5 => Family::Nr { n, r: 3 },
        6 => Family::Nr { n, r: 4 },
        7 => Family::Hn { n: 2 },
        8 => Family::Hn { n: 3 },
        other => return Err(ReproError::UnknownFigure(other)),
    })
}

/// `points` samples of the figure's family on a linear integer grid.
pub fn figure_data(
    evaluator: &Evaluator<'_>,
    figure: u32,
    points: usize,
) -> Result<Vec<(f64, ExtFloat)>, ReproError> {
    let family = figure_family(figure)?;
    let grid = make_grid(FIGURE_RANGE.0, FIGURE_RANGE.1, points, GridKind::Linear)?;
    grid.par_iter()
        .map(|&x| Ok((x, evaluator.eval(&family, x)?.value)))
        .collect()
}

pub fn figure_csv(samples: &[(f64, ExtFloat)]) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in samples {
        writeln!(out, "{x},{v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_engine::PrimeCounter;

    fn ev() -> Evaluator<'static> {
        Evaluator::new(PrimeCounter::shared())
    }

    #[test]
    fn every_expected_value_round_trips() {
        for id in TableId::ALL {
            for e in expected_table(id).unwrap() {
                let digits = e.canonical.chars().filter(|c| c.is_ascii_digit()).count()
                    - e.canonical
                        .split('e')
                        .nth(1)
                        .unwrap()
                        .chars()
                        .filter(|c| c.is_ascii_digit())
                        .count();
                let rendered = e.value.to_scientific(digits);
                // 17 digits exceed the mantissa outside the native range
                let same_value = |t: &str| t.parse::<ExtFloat>().unwrap() == e.value;
                assert!(
                    rendered == e.canonical
                        || (digits == 17
                            && !e.value.is_native()
                            && same_value(&rendered)
                            && same_value(&e.canonical)),
                    "{} rendered as {rendered}",
                    e.source
                );
                assert_eq!(
                    e.x.to_string().len() as u32 - 1,
                    (e.x as f64).log10() as u32
                );
            }
        }
    }

    #[test]
    fn row_keys_and_counts() {
        let count = |id| expected_table(id).unwrap().len();
        assert_eq!(count(TableId::T1H), 15);
        assert_eq!(count(TableId::T2K), 14);
        assert_eq!(count(TableId::T3L), 13);
        assert_eq!(count(TableId::T4F), 11);
        assert_eq!(count(TableId::T5N3N4), 24);
        assert_eq!(count(TableId::T7H2H3), 30);
        let t4 = expected_table(TableId::T4F).unwrap();
        assert_eq!(t4[0].canonical, "-3.7727513516957406e5");
    }

    #[test]
    fn table_ids_parse() {
        assert_eq!("1".parse::<TableId>().unwrap(), TableId::T1H);
        assert_eq!("T7_H2H3".parse::<TableId>().unwrap(), TableId::T7H2H3);
        assert!("6".parse::<TableId>().is_err());
    }

    #[test]
    fn small_cap_reproduction() {
        let r = reproduce_table(&ev(), TableId::T7H2H3, 1e5, 1e-6).unwrap();
        let h3 = r
            .rows
            .iter()
            .find(|r| r.series == "H3" && r.x == 10_000)
            .unwrap();
        assert_eq!(h3.status, RowStatus::Match);
        assert_eq!(
            r.rows
                .iter()
                .filter(|r| r.status == RowStatus::Match)
                .count(),
            4
        );
        assert!(r.rows[4..]
            .iter()
            .all(|r| r.status == RowStatus::SkippedOutOfRange));
        assert!(r.n_scan.is_none() && r.sensitivity.is_empty());
    }

    #[test]
    fn degenerate_tolerance_matches_everything() {
        let r = reproduce_table_with_n(&ev(), TableId::T3L, 2, 1e5, 1.0).unwrap();
        assert!(r
            .rows
            .iter()
            .all(|r| matches!(r.status, RowStatus::Match | RowStatus::SkippedOutOfRange)));
        assert!(reproduce_table(&ev(), TableId::T1H, 1e5, 0.0).is_err());
    }

    #[test]
    fn wrong_n_triggers_scan() {
        let r = reproduce_table_with_n(&ev(), TableId::T4F, 3, 1e5, 1e-6).unwrap();
        assert!(!r.all_computed_match());
        assert_eq!(r.n_scan.unwrap().matching, vec![5]);
    }

    #[test]
    fn csv_output() {
        assert_eq!(
            emit(&[], OutputFormat::Csv),
            "x,expected,computed,rel_error,status\n"
        );
        let r = reproduce_table(&ev(), TableId::T1H, 1e4, 1e-6).unwrap();
        let csv = emit(&r.rows[..1], OutputFormat::Csv);
        let line = csv.lines().nth(1).unwrap();
        assert!(
            line.starts_with("10000,-4.822952515086e8,-4.82295251508"),
            "{line}"
        );
        assert!(line.ends_with(",match"));
        let r = reproduce_table(&ev(), TableId::T5N3N4, 1e4, 1e-6).unwrap();
        assert!(emit(&r.rows, OutputFormat::Csv).starts_with("series,x,"));
    }

    #[test]
    fn markdown_layout() {
        let r = reproduce_table(&ev(), TableId::T7H2H3, 1e4, 1e-6).unwrap();
        let md = emit(&r.rows[..2], OutputFormat::Markdown);
        assert_eq!(
            md,
            "| x | H_2(x) | H_3(x) |\n|---|---|---|\n| 10^4 | 6.353725021975254 × 10^27 | 2.617585266401968 × 10^83 |\n"
        );
    }

    #[test]
    fn figures() {
        let f1 = figure_data(&ev(), 1, 10).unwrap();
        assert_eq!(f1.len(), 10);
        assert!(f1.iter().all(|(_, v)| v.sign() < 0));
        assert_eq!((f1[0].0, f1[9].0), (2e4, 1e5));
        assert!(figure_data(&ev(), 2, 10)
            .unwrap()
            .iter()
            .all(|(_, v)| v.sign() > 0));
        assert_eq!(figure_data(&ev(), 5, 2).unwrap().len(), 2);
        assert!(figure_data(&ev(), 9, 2).is_err());
        assert_eq!(figure_csv(&[]), "x,value\n");
    }
}
