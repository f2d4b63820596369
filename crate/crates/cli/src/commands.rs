use anyhow::{bail, Result};
use causal_product::coefficients::{
    combinatorial_identity_residual_with, d_closed_z, CoefficientTable, TruncatedKernel,
};
use causal_product::combinatorics::check_catalan_recurrence;
use causal_product::discrete::{
    convergence_study, double_product, PairOrdering, SampleRegion, UNITARITY_TOL,
};
use causal_product::kernel::{
    interior_points, isometry_residual, lommel_check, sonine_gegenbauer_check, KernelField,
    DEFAULT_TOL,
};
use causal_product::lattice::{
    enumerate_degenerate_orderings, enumerate_linear_extensions, enumerate_paths, essential_order,
    Orientation,
};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig, N_CAP, PATH_S_CAP, S_MAX_CAP};
use crate::output::{csv_table, float, json_document, parameters, Report};

fn fields(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn coeffs(cfg: &RunConfig) -> Result<Report> {
    if cfg.s_max > S_MAX_CAP {
        bail!(
            "--s-max {} exceeds the brute-force cap {S_MAX_CAP}",
            cfg.s_max
        );
    }
    let table = CoefficientTable::build(cfg.s_max)?;
    let ok = table.all_match();
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => csv_table(
            &[
                "m", "n", "p", "q", "D_closed", "D_brute", "E_closed", "E_brute", "match",
            ],
            table.rows.iter().map(|r| {
                vec![
                    r.key.m.to_string(),
                    r.key.n.to_string(),
                    r.key.p.to_string(),
                    r.key.q.to_string(),
                    r.d_closed.to_string(),
                    r.d_brute.to_string(),
                    r.e_closed.to_string(),
                    r.e_brute.to_string(),
                    r.matches().to_string(),
                ]
            }),
        )?,
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "m": r.key.m, "n": r.key.n, "p": r.key.p, "q": r.key.q,
                        "D_closed": r.d_closed.to_string(), "D_brute": r.d_brute.to_string(),
                        "E_closed": r.e_closed.to_string(), "E_brute": r.e_brute.to_string(),
                        "match": r.matches(),
                    })
                })
                .collect();
            json_document(
                "coeffs",
                fields(vec![
                    ("s_max", json!(cfg.s_max)),
                    ("all_match", json!(ok)),
                    ("rows", Value::Array(rows)),
                ]),
            )?
        }
    };
    Ok(Report { body, ok })
}

pub fn paths(cfg: &RunConfig) -> Result<Report> {
    if cfg.s_max > PATH_S_CAP {
        bail!(
            "--s-max {} exceeds the path listing cap {PATH_S_CAP}",
            cfg.s_max
        );
    }
    let mut rows = Vec::new();
    for s in 1..=cfg.s_max as usize {
        for path in enumerate_paths(s)? {
            let order = essential_order(&path);
            let exts = enumerate_linear_extensions(&order);
            let forward = exts
                .iter()
                .filter(|e| e.orientation() == Orientation::Forward)
                .count();
            let degenerate = enumerate_degenerate_orderings(&order).len();
            rows.push((
                s,
                path.to_string(),
                path.upper_vertex_count(),
                exts.len(),
                forward,
                exts.len() - forward,
                degenerate,
            ));
        }
    }
    let header = [
        "s",
        "path",
        "upper_vertices",
        "extensions",
        "forward",
        "reversed",
        "degenerate",
    ];
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => csv_table(
            &header,
            rows.iter().map(|r| {
                vec![
                    r.0.to_string(),
                    r.1.clone(),
                    r.2.to_string(),
                    r.3.to_string(),
                    r.4.to_string(),
                    r.5.to_string(),
                    r.6.to_string(),
                ]
            }),
        )?,
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "s": r.0, "path": r.1, "upper_vertices": r.2, "extensions": r.3,
                        "forward": r.4, "reversed": r.5, "degenerate": r.6,
                    })
                })
                .collect();
            json_document(
                "paths",
                fields(vec![
                    ("s_max", json!(cfg.s_max)),
                    ("paths", Value::Array(list)),
                ]),
            )?
        }
    };
    Ok(Report { body, ok: true })
}

struct Check {
    name: &'static str,
    parameters: Value,
    residual: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual.abs() <= self.tolerance
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// Runs every identity check. `corrupt_d` perturbs one `D` entry before the
/// integer identity is evaluated.
pub fn verify(cfg: &RunConfig, corrupt_d: bool) -> Result<Report> {
    let iv = cfg.interval;
    let nu = cfg.nu;
    let mut checks = Vec::new();
    let quad_n = 64;

    let pts = interior_points(&iv, 6);
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            let r = isometry_residual(x, y, &iv, &nu, quad_n)?;
            checks.push(Check {
                name: "isometry",
                parameters: json!({ "x": x, "y": y, "quad_n": quad_n }),
                residual: r.norm(),
                tolerance: cfg.tol,
            });
        }
    }
    for alpha in [0.5, 1.0, 3.0] {
        for beta in [0.25, 2.0, 5.0] {
            checks.push(Check {
                name: "lommel",
                parameters: json!({ "alpha": alpha, "beta": beta, "x": 1.0, "quad_n": quad_n }),
                residual: lommel_check(alpha, beta, 1.0, quad_n)?,
                tolerance: cfg.tol,
            });
        }
    }
    for beta in [0.5, 1.0, 2.0] {
        for z in [0.5, 1.0, 2.0] {
            checks.push(Check {
                name: "sonine_gegenbauer",
                parameters: json!({ "beta": beta, "z": z, "quad_n": quad_n }),
                residual: sonine_gegenbauer_check(beta, z, quad_n)?,
                tolerance: cfg.tol,
            });
        }
    }

    let d = |m: i64, n: i64, p: i64, q: i64| {
        let v = d_closed_z(m, n, p, q);
        if corrupt_d && (m, n, p, q) == (0, 0, 0, 1) {
            v + 1
        } else {
            v
        }
    };
    let depth = cfg.s_max;
    for a in 0..=depth {
        for b in 0..=depth - a {
            for g in 0..=depth - a - b {
                for xi in 0..=a + b + g + 2 {
                    let r = combinatorial_identity_residual_with(a, b, g, xi, d);
                    checks.push(Check {
                        name: "combinatorial_identity",
                        parameters: json!({ "alpha": a, "beta": b, "gamma": g, "xi": xi }),
                        residual: big_to_f64(&r),
                        tolerance: 0.0,
                    });
                }
            }
        }
    }

    let oracle_depth = cfg.s_max.min(S_MAX_CAP);
    let table = CoefficientTable::build(oracle_depth)?;
    checks.push(Check {
        name: "coefficient_oracle",
        parameters: json!({ "s_max": oracle_depth, "keys": table.rows.len() }),
        residual: table.mismatches().count() as f64,
        tolerance: 0.0,
    });

    for m in -8i64..=8 {
        for n in -8i64..=8 {
            for p in -8i64..=8 {
                if let Ok(holds) = check_catalan_recurrence(m, n, p) {
                    checks.push(Check {
                        name: "catalan_recurrence",
                        parameters: json!({ "m": m, "n": n, "p": p }),
                        residual: if holds { 0.0 } else { 1.0 },
                        tolerance: 0.0,
                    });
                }
            }
        }
    }

    let dim = cfg.n.unwrap_or(16);
    if !(2..=N_CAP).contains(&dim) {
        bail!("--n must be between 2 and {N_CAP} (got {dim})");
    }
    let orderings = [
        PairOrdering::row_major(dim),
        PairOrdering::column_major(dim),
        PairOrdering::random_allowed(dim, cfg.seed),
    ];
    let products: Vec<_> = orderings
        .iter()
        .map(|o| double_product(dim, &iv, &nu, o))
        .collect::<Result<_, _>>()?;
    let gap = products[1..]
        .iter()
        .map(|w| w.matrix.max_abs_diff(&products[0].matrix))
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "ordering_independence",
        parameters: json!({ "n": dim, "seed": cfg.seed }),
        residual: gap,
        tolerance: 1e-14f64.max(cfg.tol.min(1e-12)),
    });
    checks.push(Check {
        name: "discrete_unitarity",
        parameters: json!({ "n": dim }),
        residual: products[0].unitarity_defect(),
        tolerance: UNITARITY_TOL,
    });

    let ok = checks.iter().all(Check::pass);
    let body = match cfg.format_or(Format::Json) {
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name, "parameters": c.parameters, "residual": c.residual,
                        "tolerance": c.tolerance, "pass": c.pass(),
                    })
                })
                .collect();
            json_document(
                "verify",
                fields(vec![
                    ("parameters", parameters(cfg)),
                    ("all_pass", json!(ok)),
                    ("checks", Value::Array(list)),
                ]),
            )?
        }
        Format::Csv => csv_table(
            &["name", "parameters", "residual", "tolerance", "pass"],
            checks.iter().map(|c| {
                vec![
                    c.name.to_string(),
                    c.parameters.to_string(),
                    float(c.residual),
                    float(c.tolerance),
                    c.pass().to_string(),
                ]
            }),
        )?,
    };
    Ok(Report { body, ok })
}

pub fn converge(cfg: &RunConfig) -> Result<Report> {
    let ns = cfg.n_list.clone().unwrap_or_else(|| vec![25, 50, 100, 200]);
    if ns.iter().any(|&n| n > N_CAP) {
        bail!("dimensions above {N_CAP} are not supported");
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        bail!("--n-list must be strictly increasing");
    }
    let study = convergence_study(&ns, &SampleRegion::default(), &cfg.interval, &cfg.nu)?;
    let ok = study
        .rows
        .windows(2)
        .all(|w| w[1].max_error <= w[0].max_error);
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => csv_table(
            &["n", "max_error", "fitted_rate"],
            study.rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    float(r.max_error),
                    r.fitted_rate.map(float).unwrap_or_default(),
                ]
            }),
        )?,
        Format::Json => {
            let rows: Vec<Value> = study
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n, "max_error": r.max_error, "scaled_error": r.scaled_error,
                        "weak_error": r.weak_error, "fitted_rate": r.fitted_rate, "samples": r.samples,
                    })
                })
                .collect();
            json_document(
                "converge",
                fields(vec![
                    ("parameters", parameters(cfg)),
                    (
                        "region",
                        json!({ "margin": study.region.margin, "diagonal_gap": study.region.diagonal_gap }),
                    ),
                    ("fitted_exponent", json!(study.fitted_exponent)),
                    ("weak_exponent", json!(study.weak_exponent)),
                    ("monotone", json!(ok)),
                    ("rows", Value::Array(rows)),
                ]),
            )?
        }
    };
    Ok(Report { body, ok })
}

pub fn kernel(cfg: &RunConfig, series_degree: Option<u32>) -> Result<Report> {
    let n = cfg.n.unwrap_or(11);
    if n == 0 || n > 1000 {
        bail!("--n must be between 1 and 1000 for kernel grids (got {n})");
    }
    let field = KernelField::new(cfg.interval, cfg.nu, DEFAULT_TOL)?;
    let grid = field.interior_grid(n)?;
    let series = series_degree.map(TruncatedKernel::new);
    let compared: Vec<Option<(f64, f64, f64)>> = grid
        .iter()
        .map(|s| {
            series.as_ref().map(|k| {
                let v = k.eval(s.x, s.y, &cfg.interval, &cfg.nu);
                (v.re, v.im, (v - s.value).norm())
            })
        })
        .collect();
    let finite = grid
        .iter()
        .all(|s| s.value.re.is_finite() && s.value.im.is_finite());
    let max_diff = compared.iter().flatten().map(|c| c.2).fold(0.0, f64::max);
    let ok = finite && max_diff <= cfg.tol;
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut header = vec!["x", "y", "re", "im"];
            if series.is_some() {
                header.extend(["series_re", "series_im", "abs_diff"]);
            }
            csv_table(
                &header,
                grid.iter().zip(&compared).map(|(s, c)| {
                    let mut row =
                        vec![float(s.x), float(s.y), float(s.value.re), float(s.value.im)];
                    if let Some((re, im, d)) = c {
                        row.extend([float(*re), float(*im), float(*d)]);
                    }
                    row
                }),
            )?
        }
        Format::Json => {
            let points: Vec<Value> = grid
                .iter()
                .zip(&compared)
                .map(|(s, c)| {
                    let mut p = json!({ "x": s.x, "y": s.y, "re": s.value.re, "im": s.value.im });
                    if let Some((re, im, d)) = c {
                        p["series_re"] = json!(re);
                        p["series_im"] = json!(im);
                        p["abs_diff"] = json!(d);
                    }
                    p
                })
                .collect();
            json_document(
                "kernel",
                fields(vec![
                    ("parameters", parameters(cfg)),
                    ("grid_size", json!(n)),
                    ("series_degree", json!(series_degree)),
                    ("max_abs_diff", json!(series.as_ref().map(|_| max_diff))),
                    ("points", Value::Array(points)),
                ]),
            )?
        }
    };
    Ok(Report { body, ok })
}
