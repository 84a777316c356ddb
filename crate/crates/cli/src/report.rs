//! Report shapes emitted by the subcommands, their builders, and the
//! plain-text rendering behind `--pretty`.

use logkn_core::degen::DualGraph;
use logkn_core::etalecmp::{LogPointComparison, ModNReport};
use logkn_core::intlin::{HomologySummary, IntMat, ModNModule};
use logkn_core::knfiber::{
    build_fiber, monodromy, total_space_homology, InvarianceReport,
};
use logkn_core::monoid::KnLocalModel;
use num_traits::ToPrimitive;
use serde::Serialize;

pub const NON_REDUCED_WARNING: &str = "non-reduced: fiber surface omitted";

#[derive(Debug, Serialize)]
pub struct InputEcho {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Serialize)]
pub struct FiberSection {
    pub genus: u32,
    pub boundary: u32,
}

#[derive(Debug, Serialize)]
pub struct MonodromySection {
    #[serde(rename = "T")]
    pub t: Vec<Vec<i64>>,
    #[serde(rename = "rankN")]
    pub rank_n: usize,
    pub weights: [usize; 3],
}

#[derive(Debug, Serialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// Full analysis of one degeneration.  The fiber sections are absent
/// when the special fiber is not reduced; Euler characteristic and
/// zeta factors survive regardless.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub semistable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<MonodromySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_homology: Option<Vec<HomologyRow>>,
    pub zeta: Vec<(u32, i64)>,
    pub euler: i64,
    pub warnings: Vec<String>,
}

pub fn mat_rows(m: &IntMat) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m.at(r, c).to_i64().expect("matrix entry fits i64"))
                .collect()
        })
        .collect()
}

pub fn homology_rows(h: &HomologySummary) -> Vec<HomologyRow> {
    h.groups
        .iter()
        .enumerate()
        .map(|(degree, g)| HomologyRow {
            degree,
            rank: g.rank,
            torsion: g
                .torsion
                .iter()
                .map(|d| d.to_u64().expect("torsion fits u64"))
                .collect(),
        })
        .collect()
}

pub fn analysis_report(g: &DualGraph) -> AnalysisReport {
    let input = InputEcho {
        name: g.name.clone(),
        vertices: g.vertices.len(),
        edges: g.edges.len(),
    };
    let zeta = g.zeta_function().0;
    let euler = g.euler_characteristic_fiber();
    if !g.is_semistable() {
        return AnalysisReport {
            input,
            semistable: false,
            fiber: None,
            monodromy: None,
            total_homology: None,
            zeta,
            euler,
            warnings: vec![NON_REDUCED_WARNING.to_string()],
        };
    }
    let fiber = build_fiber(g).expect("validated semistable graph");
    let mono = monodromy(&fiber);
    let total = total_space_homology(&fiber);
    AnalysisReport {
        input,
        semistable: true,
        fiber: Some(FiberSection {
            genus: fiber.genus(),
            boundary: fiber.boundary_circles(),
        }),
        monodromy: Some(MonodromySection {
            t: mat_rows(&mono.t),
            rank_n: mono.rank_n,
            weights: [mono.weights.0, mono.weights.1, mono.weights.2],
        }),
        total_homology: Some(homology_rows(&total)),
        zeta,
        euler,
        warnings: Vec::new(),
    }
}

/// Invariant comparison across one blowup move.  `null` match fields
/// mean the invariant was not comparable (the move left semistable
/// territory).
#[derive(Debug, Serialize)]
pub struct InvarianceSection {
    pub chi: [i64; 2],
    pub zeta: [Vec<(u32, i64)>; 2],
    pub semistable_after: bool,
    pub fiber_match: Option<bool>,
    pub monodromy_match: Option<bool>,
    pub total_match: Option<bool>,
    pub invariant: bool,
}

pub fn invariance_section(r: &InvarianceReport) -> InvarianceSection {
    InvarianceSection {
        chi: [r.chi_before, r.chi_after],
        zeta: [r.zeta_before.0.clone(), r.zeta_after.0.clone()],
        semistable_after: r.semistable_after,
        fiber_match: r.fiber_match,
        monodromy_match: r.monodromy_match,
        total_match: r.total_match,
        invariant: r.invariant(),
    }
}

#[derive(Debug, Serialize)]
pub struct KnModelSection {
    pub cone_dim: usize,
    pub torus_rank: usize,
    pub components: u64,
    pub saturated: bool,
}

pub fn kn_model_section(m: &KnLocalModel) -> KnModelSection {
    KnModelSection {
        cone_dim: m.cone_dim,
        torus_rank: m.torus_rank,
        components: m.components.to_u64().expect("component count fits u64"),
        saturated: m.saturated,
    }
}

#[derive(Debug, Serialize)]
pub struct ChartReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
    pub saturated: bool,
    pub group_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kummer: Option<bool>,
    pub kn_model: KnModelSection,
}

#[derive(Debug, Serialize)]
pub struct BlowfiberCase {
    pub branches: usize,
    pub center: usize,
    pub log_coords: usize,
    pub complex_coords: usize,
    pub dimension: usize,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct BlowfiberReport {
    pub cases: Vec<BlowfiberCase>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct HopfReport {
    pub fiber_homology: Vec<HomologyRow>,
    pub total_homology: Vec<HomologyRow>,
}

#[derive(Debug, Serialize)]
pub struct LogPointReport {
    pub rank: usize,
    pub modulus: u64,
    pub kato_nakayama: Vec<usize>,
    pub group: Vec<usize>,
    pub agrees: bool,
}

pub fn log_point_report(cmp: &LogPointComparison) -> LogPointReport {
    LogPointReport {
        rank: cmp.rank,
        modulus: cmp.modulus,
        kato_nakayama: cmp
            .topological
            .ranks()
            .expect("log-point cohomology is free"),
        group: cmp.algebraic.ranks().expect("log-point cohomology is free"),
        agrees: cmp.agrees(),
    }
}

#[derive(Debug, Serialize)]
pub struct ModNDegreeRow {
    pub degree: usize,
    pub direct: Vec<u64>,
    pub via_uct: Vec<u64>,
}

#[derive(Debug, Serialize)]
pub struct ModNConsistencyReport {
    pub modulus: u64,
    pub homology: Vec<ModNDegreeRow>,
    pub predicted_coverings: String,
    pub degree_one_order: String,
    pub consistent: bool,
}

fn factors(m: &ModNModule) -> Vec<u64> {
    m.factors.iter().map(|d| d.to_u64().expect("factor fits u64")).collect()
}

pub fn mod_n_report(r: &ModNReport) -> ModNConsistencyReport {
    ModNConsistencyReport {
        modulus: r.modulus,
        homology: r
            .degrees
            .iter()
            .enumerate()
            .map(|(degree, (a, b))| ModNDegreeRow {
                degree,
                direct: factors(a),
                via_uct: factors(b),
            })
            .collect(),
        predicted_coverings: r.predicted_coverings.to_string(),
        degree_one_order: r.degree_one_order.to_string(),
        consistent: r.passed(),
    }
}

// ---- plain-text rendering ----

/// Two-column table with the keys padded to a common width.
pub fn kv_table<K: AsRef<str>>(rows: &[(K, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.as_ref().len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let k = k.as_ref();
        out.push_str(&format!("{k:width$}  {v}\n"));
    }
    out
}

pub fn group_text(rank: usize, torsion: &[u64]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for d in torsion {
        parts.push(format!("Z/{d}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn zeta_text(factors: &[(u32, i64)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|(m, e)| format!("(1 - t^{m})^{e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn homology_text(rows: &[HomologyRow]) -> Vec<(String, String)> {
    rows.iter()
        .map(|r| (format!("H_{}", r.degree), group_text(r.rank, &r.torsion)))
        .collect()
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut rows: Vec<(String, String)> = vec![
        (
            "input".into(),
            format!(
                "{} ({} vertices, {} edges)",
                r.input.name, r.input.vertices, r.input.edges
            ),
        ),
        ("semistable".into(), if r.semistable { "yes" } else { "no" }.to_string()),
    ];
    if let Some(f) = &r.fiber {
        rows.push((
            "fiber".into(),
            format!("genus {}, boundary {}", f.genus, f.boundary),
        ));
    }
    if let Some(m) = &r.monodromy {
        rows.push(("T".into(), format!("{:?}", m.t)));
        rows.push(("rank N".into(), m.rank_n.to_string()));
        rows.push((
            "weights".into(),
            format!("{} + {} + {}", m.weights[0], m.weights[1], m.weights[2]),
        ));
    }
    if let Some(total) = &r.total_homology {
        rows.extend(homology_text(total));
    }
    rows.push(("zeta".into(), zeta_text(&r.zeta)));
    rows.push(("euler".into(), r.euler.to_string()));
    for w in &r.warnings {
        rows.push(("warning".into(), w.clone()));
    }
    kv_table(&rows)
}

pub fn render_invariance(s: &InvarianceSection) -> String {
    let opt = |o: Option<bool>| match o {
        Some(true) => "match".to_string(),
        Some(false) => "MISMATCH".to_string(),
        None => "not compared".to_string(),
    };
    kv_table(&[
        ("chi", format!("{} -> {}", s.chi[0], s.chi[1])),
        (
            "zeta",
            format!("{} -> {}", zeta_text(&s.zeta[0]), zeta_text(&s.zeta[1])),
        ),
        ("semistable after", if s.semistable_after { "yes" } else { "no" }.to_string()),
        ("fiber", opt(s.fiber_match)),
        ("monodromy", opt(s.monodromy_match)),
        ("total homology", opt(s.total_match)),
        ("invariant", if s.invariant { "yes" } else { "NO" }.to_string()),
    ])
}

pub fn render_chart(r: &ChartReport) -> String {
    let mut rows: Vec<(&str, String)> = Vec::new();
    if let Some(g) = &r.generators {
        rows.push(("generators", format!("{g:?}")));
    }
    if let Some(a) = &r.multiplicities {
        rows.push(("multiplicities", format!("{a:?}")));
    }
    rows.push(("saturated", r.saturated.to_string()));
    rows.push(("group rank", r.group_rank.to_string()));
    if let Some(e) = r.exact {
        rows.push(("exact", e.to_string()));
    }
    if let Some(k) = r.kummer {
        rows.push(("kummer", k.to_string()));
    }
    rows.push((
        "kn model",
        format!(
            "cone R^{} x torus T^{}, {} component(s)",
            r.kn_model.cone_dim, r.kn_model.torus_rank, r.kn_model.components
        ),
    ));
    kv_table(&rows)
}

pub fn render_graph(g: &crate::schema::GraphFile) -> String {
    let mut rows: Vec<(String, String)> = vec![("name".into(), g.name.clone())];
    for v in &g.vertices {
        rows.push((
            format!("vertex {}", v.id),
            format!(
                "genus {}, multiplicity {}, marks {}",
                v.genus, v.multiplicity, v.marks
            ),
        ));
    }
    for e in &g.edges {
        rows.push((format!("edge {}", e.id), format!("{} -- {}", e.ends[0], e.ends[1])));
    }
    kv_table(&rows)
}

pub fn render_blowfiber(r: &BlowfiberReport) -> String {
    let mut out = String::new();
    for c in &r.cases {
        out.push_str(&format!(
            "branches {} center {}: {} real rays, {} complex lines, \
             fiber dimension {} ({} samples) {}\n",
            c.branches,
            c.center,
            c.log_coords,
            c.complex_coords,
            c.dimension,
            c.samples,
            if c.passed { "pass" } else { "FAIL" }
        ));
    }
    out.push_str(if r.passed { "all contractible\n" } else { "FAILURES\n" });
    out
}

pub fn render_hopf(r: &HopfReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for (k, v) in homology_text(&r.fiber_homology) {
        rows.push((format!("fiber {k}"), v));
    }
    for (k, v) in homology_text(&r.total_homology) {
        rows.push((format!("total {k}"), v));
    }
    kv_table(&rows)
}

pub fn render_log_point(r: &LogPointReport) -> String {
    kv_table(&[
        ("rank", r.rank.to_string()),
        ("modulus", r.modulus.to_string()),
        ("kato-nakayama", format!("{:?}", r.kato_nakayama)),
        ("group", format!("{:?}", r.group)),
        ("agrees", r.agrees.to_string()),
    ])
}

pub fn render_mod_n(r: &ModNConsistencyReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for row in &r.homology {
        let mark = if row.direct == row.via_uct { "=" } else { "!=" };
        rows.push((
            format!("H_{} mod {}", row.degree, r.modulus),
            format!("{:?} {} {:?}", row.direct, mark, row.via_uct),
        ));
    }
    rows.push((
        "coverings".to_string(),
        format!("{} predicted, {} found", r.predicted_coverings, r.degree_one_order),
    ));
    rows.push(("consistent".to_string(), r.consistent.to_string()));
    kv_table(&rows)
}
