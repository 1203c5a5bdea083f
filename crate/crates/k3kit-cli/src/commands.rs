//! The six subcommands. Each returns the fully rendered report; exit-code
//! policy lives in the error type: usage and schema problems are
//! [`CliError::Usage`] (exit 2), mathematical disagreements are
//! [`CliError::Math`] (exit 1), and verdicts like "unstable" are ordinary
//! successful output.

use std::path::Path;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use k3kit::arith::Rational;
use k3kit::git_cubic::{
    match_normal_form, maximal_chamber_sets, reference_rows, torus_destabilizer, CubicSupport,
    DestabilizerCertificate, SetMode,
};
use k3kit::git_net::{
    admissibility_check, enumerate_normalized, not_properly_stable_wrt, reference_net_rows,
    search_admissible_classes, NetTerm, OnePs5, QuadMonomial, QuadricNet, StabilityCertificate,
};
use k3kit::lattice::{nl_to_heegner, projected_norm, LatticeVector, NlLabel, PeriodLattice};
use k3kit::nl_rank::rank_report;

use crate::config::{Format, RunConfig};
use crate::render::{
    csv_fields, csv_table, float12, json_report, markdown_fields, markdown_report, markdown_table,
};
use crate::CliError;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

// ---------------------------------------------------------------------------
// rank

const RANK_HEADERS: [&str; 9] = [
    "l", "rank", "jacobi", "gauss", "alpha", "beta", "frac_sum", "d_eis", "agree",
];

pub fn cmd_rank(cfg: &RunConfig, from: u64, to: u64) -> Result<String, CliError> {
    if from < 1 || from > to {
        return Err(CliError::Usage(format!(
            "need 1 <= from <= to, got --from {from} --to {to}"
        )));
    }
    let ls: Vec<u64> = (from..=to).collect();
    // Work items are independent; par_iter + collect keeps l order, so the
    // merged report and the first error reported are both deterministic.
    let results: Vec<_> = ls
        .par_iter()
        .map(|&l| rank_report(l, cfg.precision_bits))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r.map_err(|e| CliError::Math(e.to_string()))?);
    }

    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                r.rank.to_string(),
                r.jacobi_value.to_string(),
                float12(r.gauss_value),
                r.alpha.to_string(),
                r.beta.to_string(),
                r.frac_sum.to_string(),
                r.d_eis.to_string(),
                "true".to_string(),
            ]
        })
        .collect();

    Ok(match cfg.format {
        Format::Json => {
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("rank row serializes");
                    v.as_object_mut()
                        .expect("rank row is an object")
                        .insert("agree".into(), Value::Bool(true));
                    v
                })
                .collect();
            json_report(
                "k3kit.rank.v1",
                cfg,
                vec![
                    ("from", json!(from)),
                    ("to", json!(to)),
                    ("precision_bits", json!(cfg.precision_bits)),
                    ("rows", Value::Array(json_rows)),
                ],
            )
        }
        Format::Csv => csv_table(&RANK_HEADERS, &cells),
        Format::Markdown => markdown_report(
            &format!("rank sweep l = {from}..{to}"),
            cfg,
            &[(String::new(), markdown_table(&RANK_HEADERS, &cells))],
        ),
    })
}

// ---------------------------------------------------------------------------
// heegner

/// Basis labels for the rank-21 period lattice in coordinate order: the
/// polarization generator, two hyperbolic planes, two E8(-1) blocks.
const BASIS_NAMES: [&str; 21] = [
    "w", "u1", "v1", "u2", "v2", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "f1", "f2", "f3",
    "f4", "f5", "f6", "f7", "f8",
];

fn vector_pretty(coords: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let mag = c.unsigned_abs();
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(BASIS_NAMES[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn rational_to_i64(q: &Rational) -> Option<i64> {
    use num_traits::One;
    if q.denom().is_one() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn cmd_heegner(cfg: &RunConfig, d: u64, g: u64, l: u64) -> Result<String, CliError> {
    let label = NlLabel::new(d, g, l).map_err(usage)?;
    let delta = label.delta();
    let heegner = nl_to_heegner(&label).map_err(|_| {
        CliError::Usage(format!(
            "(d, g, l) = ({d}, {g}, {l}) has discriminant {delta} <= 0, \
             which names no divisor; need d^2 - 4l(g - 1) > 0"
        ))
    })?;

    let two_l = 2 * l as i64;
    let level = two_l / num_integer::gcd(two_l, d as i64);
    let norm_q = Rational::from_integer((2 * level * level).into()) * &heegner.n;
    let norm = rational_to_i64(&norm_q)
        .ok_or_else(|| CliError::Math(format!("norm 2nk^2 = {norm_q} is not an integer")))?;

    // Independent cross-check before reporting: the projected norm of the
    // class must equal 2n.
    let twice_n = &heegner.n * Rational::from_integer(2.into());
    let projected = projected_norm(&label);
    if projected != twice_n {
        return Err(CliError::Math(format!(
            "projection norm {projected} disagrees with 2n = {twice_n}"
        )));
    }

    let lat = PeriodLattice::new(l).map_err(usage)?;
    let vector = lat
        .canonical_primitive(norm, level, heegner.gamma as i64)
        .map_err(|e| CliError::Math(format!("no canonical representative: {e}")))?;

    let pretty = vector_pretty(&vector.coords);
    let fields = [
        ("d", d.to_string()),
        ("g", g.to_string()),
        ("l", l.to_string()),
        ("delta", delta.to_string()),
        ("n", heegner.n.to_string()),
        ("gamma", heegner.gamma.to_string()),
        ("level", level.to_string()),
        ("norm", norm.to_string()),
        ("vector", pretty.clone()),
    ];

    Ok(match cfg.format {
        Format::Json => json_report(
            "k3kit.heegner.v1",
            cfg,
            vec![
                ("d", json!(d)),
                ("g", json!(g)),
                ("l", json!(l)),
                ("delta", json!(delta)),
                ("n", json!(heegner.n.to_string())),
                ("gamma", json!(heegner.gamma)),
                ("level", json!(level)),
                ("norm", json!(norm)),
                ("vector", json!(vector.coords)),
                ("vector_pretty", json!(pretty)),
            ],
        ),
        Format::Csv => csv_fields(&fields),
        Format::Markdown => markdown_report(
            &format!("heegner label for (d, g, l) = ({d}, {g}, {l})"),
            cfg,
            &[(String::new(), markdown_fields(&fields))],
        ),
    })
}

// ---------------------------------------------------------------------------
// normal-form

pub enum NormalFormMode {
    /// Invariants (N, k, d) to canonical vector.
    Forward { norm: i64, level: i64, d_type: i64 },
    /// Vector to invariants, plus the canonical vector of its class.
    Inverse { coords: Vec<i64> },
}

pub fn cmd_normal_form(cfg: &RunConfig, l: u64, mode: NormalFormMode) -> Result<String, CliError> {
    let lat = PeriodLattice::new(l).map_err(usage)?;
    match mode {
        NormalFormMode::Forward {
            norm,
            level,
            d_type,
        } => {
            let vector = lat
                .canonical_primitive(norm, level, d_type)
                .map_err(usage)?;
            let back = lat
                .invariants_of(&vector)
                .map_err(|e| CliError::Math(format!("canonical vector rejected: {e}")))?;
            if (back.norm, back.level, back.d) != (norm, level, d_type) {
                return Err(CliError::Math(format!(
                    "round-trip mismatch: asked for (N, k, d) = ({norm}, {level}, \
                     {d_type}), canonical vector carries ({}, {}, {})",
                    back.norm, back.level, back.d
                )));
            }
            let pretty = vector_pretty(&vector.coords);
            let fields = [
                ("mode", "forward".to_string()),
                ("l", l.to_string()),
                ("norm", norm.to_string()),
                ("level", level.to_string()),
                ("type", d_type.to_string()),
                ("vector", pretty.clone()),
                ("roundtrip", "ok".to_string()),
            ];
            Ok(match cfg.format {
                Format::Json => json_report(
                    "k3kit.normal-form.v1",
                    cfg,
                    vec![
                        ("mode", json!("forward")),
                        ("l", json!(l)),
                        ("norm", json!(norm)),
                        ("level", json!(level)),
                        ("type", json!(d_type)),
                        ("vector", json!(vector.coords)),
                        ("vector_pretty", json!(pretty)),
                        ("roundtrip_ok", json!(true)),
                    ],
                ),
                Format::Csv => csv_fields(&fields),
                Format::Markdown => markdown_report(
                    &format!(
                        "canonical vector for (N, k, d) = ({norm}, {level}, {d_type}), l = {l}"
                    ),
                    cfg,
                    &[(String::new(), markdown_fields(&fields))],
                ),
            })
        }
        NormalFormMode::Inverse { coords } => {
            let vector = LatticeVector::new(coords);
            let class = lat.invariants_of(&vector).map_err(usage)?;
            let canonical = lat
                .canonical_primitive(class.norm, class.level, class.d)
                .map_err(|e| CliError::Math(format!("invariants have no canonical vector: {e}")))?;
            let is_canonical = canonical == vector;
            let fields = [
                ("mode", "inverse".to_string()),
                ("l", l.to_string()),
                ("norm", class.norm.to_string()),
                ("level", class.level.to_string()),
                ("type", class.d.to_string()),
                ("input", vector_pretty(&vector.coords)),
                ("canonical", vector_pretty(&canonical.coords)),
                ("is_canonical", is_canonical.to_string()),
            ];
            Ok(match cfg.format {
                Format::Json => json_report(
                    "k3kit.normal-form.v1",
                    cfg,
                    vec![
                        ("mode", json!("inverse")),
                        ("l", json!(l)),
                        ("norm", json!(class.norm)),
                        ("level", json!(class.level)),
                        ("type", json!(class.d)),
                        ("input", json!(vector.coords)),
                        ("canonical", json!(canonical.coords)),
                        ("is_canonical", json!(is_canonical)),
                    ],
                ),
                Format::Csv => csv_fields(&fields),
                Format::Markdown => markdown_report(
                    &format!("invariants of a lattice vector, l = {l}"),
                    cfg,
                    &[(String::new(), markdown_fields(&fields))],
                ),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// tables

pub fn cmd_tables(cfg: &RunConfig, which: u8) -> Result<String, CliError> {
    match which {
        1 => cubic_table(cfg, SetMode::NonPositive, 1),
        2 => cubic_table(cfg, SetMode::Negative, 2),
        3 => net_table(cfg),
        other => Err(CliError::Usage(format!(
            "no table {other}; choose 1, 2, or 3"
        ))),
    }
}

fn cubic_table(cfg: &RunConfig, mode: SetMode, which: u8) -> Result<String, CliError> {
    let computed = maximal_chamber_sets(mode);
    let frozen = reference_rows(mode);
    if computed != frozen {
        let show = |rows: &[k3kit::git_cubic::ChamberRow]| {
            rows.iter()
                .map(|r| r.rep.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        return Err(CliError::Math(format!(
            "table {which} mismatch: computed representatives [{}], expected [{}]",
            show(&computed),
            show(&frozen)
        )));
    }

    let prefix = match mode {
        SetMode::NonPositive => "N",
        SetMode::Negative => "U",
    };
    let headers = ["case", "lambda", "monomials", "set_size"];
    let cells: Vec<Vec<String>> = computed
        .iter()
        .enumerate()
        .map(|(i, row)| {
            vec![
                format!("{prefix}{}", i + 1),
                row.rep.to_string(),
                row.listed
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                row.set.len().to_string(),
            ]
        })
        .collect();

    Ok(match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = computed
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    json!({
                        "case": format!("{prefix}{}", i + 1),
                        "lambda": [row.rep.u(), row.rep.v()],
                        "lambda_pretty": row.rep.to_string(),
                        "monomials": row.listed.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "set_size": row.set.len(),
                    })
                })
                .collect();
            json_report(
                "k3kit.tables.v1",
                cfg,
                vec![
                    ("table", json!(which)),
                    ("rows", Value::Array(rows)),
                    ("match", json!(true)),
                ],
            )
        }
        Format::Csv => csv_table(&headers, &cells),
        Format::Markdown => markdown_report(
            &format!("table {which}: maximal destabilized classes"),
            cfg,
            &[(String::new(), markdown_table(&headers, &cells))],
        ),
    })
}

fn net_table(cfg: &RunConfig) -> Result<String, CliError> {
    let reports = k3kit::git_net::verify_reference_rows();
    let rows = reference_net_rows();
    let classes = search_admissible_classes(cfg.search_bound).map_err(usage)?;

    let rows_pass = reports.iter().all(|r| r.pass);
    let covered: Vec<Option<usize>> = rows
        .iter()
        .map(|row| classes.iter().position(|c| c.contains(&row.lambda)))
        .collect();
    let search_ok = classes.len() == rows.len() && covered.iter().all(|c| c.is_some());
    if !rows_pass || !search_ok {
        let failing: Vec<String> = reports
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.pass)
            .map(|(i, r)| format!("row N{}' ({})", i + 1, r.lambda))
            .collect();
        let found: Vec<String> = classes.iter().map(|c| c.rep.to_string()).collect();
        return Err(CliError::Math(format!(
            "table 3 mismatch: failing rows [{}]; search at bound {} found {} \
             classes [{}], expected one per reference row",
            failing.join(", "),
            cfg.search_bound,
            classes.len(),
            found.join(", ")
        )));
    }

    let slot_str = |slot: &[QuadMonomial]| {
        slot.iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("+")
    };
    let headers = [
        "case",
        "lambda",
        "q1",
        "q2",
        "q3",
        "w1",
        "w2",
        "w3",
        "plucker",
        "admissible",
        "pass",
        "class_lambdas",
        "class_triples",
    ];
    let cells: Vec<Vec<String>> = reports
        .iter()
        .zip(rows.iter())
        .enumerate()
        .map(|(i, (report, row))| {
            let class = &classes[covered[i].expect("checked above")];
            vec![
                format!("N{}'", i + 1),
                report.lambda.to_string(),
                slot_str(&row.slots[0]),
                slot_str(&row.slots[1]),
                slot_str(&row.slots[2]),
                report.slot_weights[0].to_string(),
                report.slot_weights[1].to_string(),
                report.slot_weights[2].to_string(),
                report.plucker.to_string(),
                report.admissibility.admissible.to_string(),
                report.pass.to_string(),
                class.lambda_count.to_string(),
                class.triples.len().to_string(),
            ]
        })
        .collect();

    Ok(match cfg.format {
        Format::Json => {
            let json_rows: Vec<Value> = reports
                .iter()
                .zip(rows.iter())
                .enumerate()
                .map(|(i, (report, row))| {
                    json!({
                        "case": format!("N{}'", i + 1),
                        "lambda": report.lambda.weights(),
                        "lambda_pretty": report.lambda.to_string(),
                        "slots": row.slots.iter()
                            .map(|s| s.iter().map(|m| m.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "slot_weights": report.slot_weights,
                        "plucker": report.plucker,
                        "admissible": report.admissibility.admissible,
                        "pass": report.pass,
                    })
                })
                .collect();
            let json_classes: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "rep": c.rep.weights(),
                        "rep_pretty": c.rep.to_string(),
                        "lambda_count": c.lambda_count,
                        "triple_count": c.triples.len(),
                    })
                })
                .collect();
            json_report(
                "k3kit.tables.v1",
                cfg,
                vec![
                    ("table", json!(3)),
                    ("rows", Value::Array(json_rows)),
                    (
                        "search",
                        json!({
                            "bound": cfg.search_bound,
                            "classes": json_classes,
                        }),
                    ),
                    ("match", json!(true)),
                ],
            )
        }
        Format::Csv => csv_table(&headers, &cells),
        Format::Markdown => {
            let class_headers = ["class", "lambda", "lambdas_in_class", "admissible_triples"];
            let class_cells: Vec<Vec<String>> = classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    vec![
                        (i + 1).to_string(),
                        c.rep.to_string(),
                        c.lambda_count.to_string(),
                        c.triples.len().to_string(),
                    ]
                })
                .collect();
            markdown_report(
                "table 3: destabilized nets of quadrics",
                cfg,
                &[
                    (
                        "verified rows".to_string(),
                        markdown_table(
                            &headers[..11],
                            &cells.iter().map(|r| r[..11].to_vec()).collect::<Vec<_>>(),
                        ),
                    ),
                    (
                        format!("maximal classes at search bound {}", cfg.search_bound),
                        markdown_table(&class_headers, &class_cells),
                    ),
                ],
            )
        }
    })
}

// ---------------------------------------------------------------------------
// cubic-stability

pub const CUBIC_SCHEMA: &str = "k3kit.cubic.v1";
pub const NET_SCHEMA: &str = "k3kit.net.v1";

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn check_schema(path: &Path, got: &str, want: &str) -> Result<(), CliError> {
    if got == want {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{}: schema {got:?} not supported, expected {want:?}",
            path.display()
        )))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicInput {
    schema: String,
    support: CubicSupport,
}

fn cubic_cert_json(cert: &DestabilizerCertificate) -> Value {
    json!({
        "lambda": [cert.lambda.u(), cert.lambda.v()],
        "lambda_pretty": cert.lambda.to_string(),
        "strict": cert.strict,
        "weights": cert.weights.iter()
            .map(|(m, w)| json!({ "monomial": m.to_string(), "weight": w }))
            .collect::<Vec<_>>(),
    })
}

pub fn cmd_cubic_stability(cfg: &RunConfig, file: &Path) -> Result<String, CliError> {
    let input: CubicInput = read_json(file)?;
    check_schema(file, &input.schema, CUBIC_SCHEMA)?;
    let support = input.support;

    let nonstrict = torus_destabilizer(&support, false);
    let strict = torus_destabilizer(&support, true);
    let tags = match_normal_form(&support);
    let verdict = if let Some(c) = &strict {
        format!(
            "unstable with respect to the torus, certificate {}",
            c.lambda
        )
    } else if let Some(c) = &nonstrict {
        format!(
            "not properly stable with respect to the torus, certificate {}",
            c.lambda
        )
    } else {
        "no torus destabilizer".to_string()
    };

    let support_str = support
        .monomials()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let tag_str = if tags.is_empty() {
        "none".to_string()
    } else {
        tags.iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let cert_lambda = |c: &Option<DestabilizerCertificate>| {
        c.as_ref()
            .map_or("none".to_string(), |c| c.lambda.to_string())
    };

    let fields = [
        ("support", support_str.clone()),
        ("verdict", verdict.clone()),
        ("nonstrict_certificate", cert_lambda(&nonstrict)),
        ("strict_certificate", cert_lambda(&strict)),
        ("patterns", tag_str.clone()),
    ];

    Ok(match cfg.format {
        Format::Json => json_report(
            "k3kit.cubic-stability.v1",
            cfg,
            vec![
                (
                    "support",
                    json!(support
                        .monomials()
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()),
                ),
                ("verdict", json!(verdict)),
                (
                    "nonstrict_certificate",
                    nonstrict.as_ref().map_or(Value::Null, cubic_cert_json),
                ),
                (
                    "strict_certificate",
                    strict.as_ref().map_or(Value::Null, cubic_cert_json),
                ),
                (
                    "patterns",
                    json!(tags.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
                ),
            ],
        ),
        Format::Csv => csv_fields(&fields),
        Format::Markdown => {
            let mut sections = vec![(String::new(), markdown_fields(&fields))];
            if let Some(c) = &nonstrict {
                sections.push((
                    format!("weights under {}", c.lambda),
                    markdown_table(
                        &["monomial", "weight"],
                        &c.weights
                            .iter()
                            .map(|(m, w)| vec![m.to_string(), w.to_string()])
                            .collect::<Vec<_>>(),
                    ),
                ));
            }
            markdown_report("cubic stability", cfg, &sections)
        }
    })
}

// ---------------------------------------------------------------------------
// net-stability

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuad {
    i: u8,
    j: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetInput {
    schema: String,
    #[serde(default)]
    net: Option<[Vec<NetTerm>; 3]>,
    #[serde(default)]
    supports: Option<[Vec<RawQuad>; 3]>,
}

fn net_cert_json(cert: &StabilityCertificate) -> Value {
    json!({
        "lambda": cert.lambda.weights(),
        "lambda_pretty": cert.lambda.to_string(),
        "triple": cert.triple.monomials().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "weights": cert.weights,
        "total": cert.total,
        "not_properly_stable": cert.not_properly_stable,
    })
}

fn parse_net(file: &Path) -> Result<(QuadricNet, &'static str), CliError> {
    let input: NetInput = read_json(file)?;
    check_schema(file, &input.schema, NET_SCHEMA)?;
    match (input.net, input.supports) {
        (Some(rows), None) => {
            let net = QuadricNet::from_terms(rows)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            Ok((net, "net"))
        }
        (None, Some(raw)) => {
            let mut rows: [Vec<QuadMonomial>; 3] = Default::default();
            for (out, row) in rows.iter_mut().zip(raw.iter()) {
                for q in row {
                    out.push(
                        QuadMonomial::new(q.i, q.j)
                            .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?,
                    );
                }
            }
            let net = QuadricNet::from_supports(rows)
                .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            Ok((net, "supports"))
        }
        _ => Err(CliError::Usage(format!(
            "{}: provide exactly one of \"net\" (rows of {{i, j, num, den}} terms) \
             or \"supports\" (rows of {{i, j}} monomials)",
            file.display()
        ))),
    }
}

fn reference_row_tag(lambda: &OnePs5) -> Option<String> {
    reference_net_rows()
        .iter()
        .position(|row| row.lambda == *lambda)
        .map(|i| format!("N{}'", i + 1))
}

pub fn cmd_net_stability(
    cfg: &RunConfig,
    file: &Path,
    lambda: Option<[i64; 6]>,
) -> Result<String, CliError> {
    let (net, source) = parse_net(file)?;

    match lambda {
        Some(a) => {
            let lambda = OnePs5::new(a).map_err(usage)?;
            let cert = not_properly_stable_wrt(&net, &lambda);
            let adm = admissibility_check(&cert.triple, &lambda);
            let row = reference_row_tag(&lambda);
            let verdict = if cert.not_properly_stable {
                format!(
                    "not properly stable with respect to {} (weight {})",
                    lambda, cert.total
                )
            } else {
                format!("no destabilization by {} (weight {})", lambda, cert.total)
            };
            let triple_str = cert
                .triple
                .monomials()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let fields = [
                ("source", source.to_string()),
                ("lambda", lambda.to_string()),
                ("leading_triple", triple_str),
                (
                    "weights",
                    format!(
                        "({},{},{})",
                        cert.weights[0], cert.weights[1], cert.weights[2]
                    ),
                ),
                ("plucker", cert.total.to_string()),
                ("admissible", adm.admissible.to_string()),
                (
                    "reference_row",
                    row.clone().unwrap_or_else(|| "none".to_string()),
                ),
                ("verdict", verdict.clone()),
            ];
            Ok(match cfg.format {
                Format::Json => json_report(
                    "k3kit.net-stability.v1",
                    cfg,
                    vec![
                        ("source", json!(source)),
                        ("mode", json!("single")),
                        ("certificate", net_cert_json(&cert)),
                        (
                            "admissibility",
                            json!({
                                "point_conditions": adm.point_conditions,
                                "curve_conditions": adm.curve_conditions,
                                "admissible": adm.admissible,
                            }),
                        ),
                        ("reference_row", row.map_or(Value::Null, Value::String)),
                        ("verdict", json!(verdict)),
                    ],
                ),
                Format::Csv => csv_fields(&fields),
                Format::Markdown => markdown_report(
                    "net stability",
                    cfg,
                    &[(String::new(), markdown_fields(&fields))],
                ),
            })
        }
        None => {
            // Grid scan: first destabilizing normalized 1-PS in enumeration
            // order, if any.
            let grid = enumerate_normalized(cfg.search_bound);
            let candidates = grid.len();
            let hit = grid
                .into_iter()
                .map(|lambda| not_properly_stable_wrt(&net, &lambda))
                .find(|cert| cert.not_properly_stable);
            let verdict = match &hit {
                Some(cert) => format!(
                    "not properly stable with respect to {} (weight {})",
                    cert.lambda, cert.total
                ),
                None => format!(
                    "no destabilizer among the {candidates} normalized 1-PS \
                     with leading weight at most {}",
                    cfg.search_bound
                ),
            };
            let fields = [
                ("source", source.to_string()),
                ("scan_bound", cfg.search_bound.to_string()),
                ("candidates", candidates.to_string()),
                (
                    "destabilizer",
                    hit.as_ref()
                        .map_or("none".to_string(), |c| c.lambda.to_string()),
                ),
                ("verdict", verdict.clone()),
            ];
            Ok(match cfg.format {
                Format::Json => json_report(
                    "k3kit.net-stability.v1",
                    cfg,
                    vec![
                        ("source", json!(source)),
                        ("mode", json!("scan")),
                        ("scan_bound", json!(cfg.search_bound)),
                        ("candidates", json!(candidates)),
                        (
                            "certificate",
                            hit.as_ref().map_or(Value::Null, net_cert_json),
                        ),
                        ("verdict", json!(verdict)),
                    ],
                ),
                Format::Csv => csv_fields(&fields),
                Format::Markdown => markdown_report(
                    "net stability scan",
                    cfg,
                    &[(String::new(), markdown_fields(&fields))],
                ),
            })
        }
    }
}
