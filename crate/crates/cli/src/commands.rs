//! Implementations of the six subcommands.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use casimir_core::analysis::{
    default_figure_grid, fit_expansion, fit_log_nntlo, percent_error, sweep, SweepRow,
};
use casimir_core::asymptotics::{
    dirichlet_sphere_plate_expansion, em_sphere_plate_expansion, ExpansionCoefficients, HalfInt,
    Variant,
};
use casimir_core::fitting::{log_spaced_grid, BasisFn, FitReport};
use casimir_core::geometry::{ConcentricPair, SpherePlateGeometry, SphereSphereGeometry};
use casimir_core::gradient::{beta_table, de2_energy};
use casimir_core::proximity::pfa_leading;
use casimir_core::spectrum::{
    exact_energy_capped, EnergyValue, TheoryKind, DEFAULT_TERM_CAP, DEFAULT_TOL,
};
use casimir_core::validation;

use crate::config::FileConfig;
use crate::output::{csv_document, csv_field, emit, float17, json_document};
use crate::svg::{line_plot, Series};
use crate::{
    CmdResult, EnergyArgs, Failure, FigureArgs, FitArgs, FitKindArg, FormatArg, KernelArgs,
    SweepArgs, TheoryArg, ValidateArgs, VariantArg, EXIT_VALIDATION,
};

fn require<T>(value: Option<T>, what: &str) -> CmdResult<T> {
    value.ok_or_else(|| Failure::invalid(format!("missing required option --{what}")))
}

fn asym_energy(theory: TheoryKind, x: f64, variant: Variant) -> CmdResult<EnergyValue> {
    match theory {
        TheoryKind::ElectromagneticConductor => {
            let coeffs = ExpansionCoefficients::em_sphere_plate(variant);
            Ok(em_sphere_plate_expansion(x, HalfInt::halves(7), &coeffs)?)
        }
        TheoryKind::DirichletScalar => {
            let coeffs = ExpansionCoefficients::dirichlet_sphere_plate(variant);
            Ok(dirichlet_sphere_plate_expansion(x, &coeffs)?)
        }
        TheoryKind::NeumannScalar => Err(Failure::invalid(
            "no asymptotic expansion preset for the Neumann scalar",
        )),
    }
}

#[derive(Serialize)]
struct EnergyRecord {
    rho: f64,
    mu: f64,
    #[serde(rename = "F_exact")]
    f_exact: f64,
    #[serde(rename = "F_pfa")]
    f_pfa: f64,
    #[serde(rename = "F_de2")]
    f_de2: f64,
    #[serde(rename = "F_asym")]
    f_asym: f64,
    err_pfa_pct: f64,
    err_de_pct: f64,
}

pub fn run_energy(args: EnergyArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let theory = require(
        args.theory.or(cfg.variant::<TheoryArg>("theory")?),
        "theory",
    )?
    .kind();
    let rho = args.rho.or(cfg.parsed("rho")?);
    let x = args.x.or(cfg.parsed("x")?);
    let r1 = args.r1.or(cfg.parsed("r1")?);
    let r2 = args.r2.or(cfg.parsed("r2")?);
    let d = args.d.or(cfg.parsed("d")?);
    let tol = args.tol.or(cfg.parsed("tol")?).unwrap_or(DEFAULT_TOL);
    let nmax = args.nmax.or(cfg.parsed("nmax")?).unwrap_or(DEFAULT_TERM_CAP);
    let variant = match args
        .variant
        .or(cfg.variant::<VariantArg>("variant")?)
        .unwrap_or(VariantArg::Fitted)
    {
        VariantArg::Printed => Variant::Printed,
        VariantArg::Fitted => Variant::Fitted,
    };
    let format = args
        .format
        .or(cfg.variant::<FormatArg>("format")?)
        .unwrap_or(FormatArg::Csv);
    let out = args.out.or(cfg.parsed::<PathBuf>("out")?);

    // Exactly one geometry input group.
    let sphere_group = [r1, r2, d];
    let sphere_count = sphere_group.iter().filter(|v| v.is_some()).count();
    if sphere_count > 0 && sphere_count < 3 {
        return Err(Failure::invalid(
            "sphere-sphere input needs all of --r1, --r2 and --d",
        ));
    }
    let groups = usize::from(rho.is_some()) + usize::from(x.is_some()) + usize::from(sphere_count == 3);
    if groups != 1 {
        return Err(Failure::invalid(
            "exactly one geometry input expected: --rho, or --x, or --r1 --r2 --d",
        ));
    }

    let pair = if let Some(rho) = rho {
        ConcentricPair::from_rho(rho)?
    } else if let Some(x) = x {
        ConcentricPair::from_sphere_plate(&SpherePlateGeometry::from_ratio(x)?)?
    } else {
        let geom = SphereSphereGeometry::new(r1.unwrap(), r2.unwrap(), d.unwrap())?;
        ConcentricPair::from_geometry(&geom)?
    };
    // All approximations are parameterized by the gap ratio of the
    // equivalent sphere-plate configuration.
    let x_eq = x.unwrap_or_else(|| pair.equivalent_sphere_plate_ratio());

    let exact = exact_energy_capped(theory, &pair, tol, nmax)?;
    let pfa = pfa_leading(x_eq, theory)?;
    let de2 = de2_energy(x_eq, theory)?;
    let asym = asym_energy(theory, x_eq, variant)?;

    let record = EnergyRecord {
        rho: pair.rho(),
        mu: pair.mu(),
        f_exact: exact.value,
        f_pfa: pfa.value,
        f_de2: de2.value,
        f_asym: asym.value,
        err_pfa_pct: percent_error(&exact, &pfa)?,
        err_de_pct: percent_error(&exact, &de2)?,
    };

    let content = match format {
        FormatArg::Csv => csv_document(
            &[
                "rho",
                "mu",
                "F_exact",
                "F_pfa",
                "F_de2",
                "F_asym",
                "err_pfa_pct",
                "err_de_pct",
            ],
            &[vec![
                float17(record.rho),
                float17(record.mu),
                float17(record.f_exact),
                float17(record.f_pfa),
                float17(record.f_de2),
                float17(record.f_asym),
                float17(record.err_pfa_pct),
                float17(record.err_de_pct),
            ]],
        ),
        FormatArg::Json => json_document(&record),
        FormatArg::Svg => {
            return Err(Failure::invalid("energy does not support --format svg"))
        }
    };
    emit(out.as_deref(), &content)
}

pub fn run_sweep(args: SweepArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let theory = require(
        args.theory.or(cfg.variant::<TheoryArg>("theory")?),
        "theory",
    )?
    .kind();
    let xmin = require(args.xmin.or(cfg.parsed("xmin")?), "xmin")?;
    let xmax = require(args.xmax.or(cfg.parsed("xmax")?), "xmax")?;
    let points = require(args.points.or(cfg.parsed("points")?), "points")?;
    let tol = args.tol.or(cfg.parsed("tol")?).unwrap_or(DEFAULT_TOL);
    let format = args
        .format
        .or(cfg.variant::<FormatArg>("format")?)
        .unwrap_or(FormatArg::Csv);
    let out = args.out.or(cfg.parsed::<PathBuf>("out")?);

    let grid = log_spaced_grid(xmin, xmax, points)?;
    let rows = sweep(theory, &grid, tol)?;
    let content = match format {
        FormatArg::Csv => sweep_csv(&rows),
        FormatArg::Json => json_document(&rows),
        FormatArg::Svg => return Err(Failure::invalid("sweep does not support --format svg")),
    };
    emit(out.as_deref(), &content)
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    csv_document(
        &[
            "x",
            "F_exact",
            "F_pfa",
            "F_de2",
            "F_asym_fitted",
            "err_pfa_pct",
            "err_de_pct",
        ],
        &rows
            .iter()
            .map(|r| {
                vec![
                    float17(r.x),
                    float17(r.f_exact),
                    float17(r.f_pfa),
                    float17(r.f_de2),
                    float17(r.f_asym_fitted),
                    float17(r.err_pfa_pct),
                    float17(r.err_de_pct),
                ]
            })
            .collect::<Vec<_>>(),
    )
}

#[derive(Serialize)]
struct Fig1Row {
    x: f64,
    #[serde(rename = "F_exact_over_F_pfa")]
    ratio: f64,
}

#[derive(Serialize)]
struct Fig2Row {
    log10inv_x: f64,
    err_pfa_pct: f64,
    err_de_pct: f64,
}

pub fn run_figure(args: FigureArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let theory = args
        .theory
        .or(cfg.variant::<TheoryArg>("theory")?)
        .unwrap_or(TheoryArg::Em)
        .kind();
    let xmin = args.xmin.or(cfg.parsed("xmin")?);
    let xmax = args.xmax.or(cfg.parsed("xmax")?);
    let points = args.points.or(cfg.parsed("points")?);
    let tol = args.tol.or(cfg.parsed("tol")?).unwrap_or(DEFAULT_TOL);
    let format = args
        .format
        .or(cfg.variant::<FormatArg>("format")?)
        .unwrap_or(FormatArg::Csv);
    let out_dir = args
        .out
        .or(cfg.parsed::<PathBuf>("out")?)
        .unwrap_or_else(|| PathBuf::from("."));

    let grid = if xmin.is_none() && xmax.is_none() && points.is_none() {
        default_figure_grid()
    } else {
        log_spaced_grid(
            xmin.unwrap_or(1e-4),
            xmax.unwrap_or(1e-1),
            points.unwrap_or(121),
        )?
    };
    let rows = sweep(theory, &grid, tol)?;

    let fig1: Vec<Fig1Row> = rows
        .iter()
        .map(|r| Fig1Row {
            x: r.x,
            ratio: r.f_exact / r.f_pfa,
        })
        .collect();
    let fig2: Vec<Fig2Row> = rows
        .iter()
        .map(|r| Fig2Row {
            log10inv_x: -r.x.log10(),
            err_pfa_pct: r.err_pfa_pct,
            err_de_pct: r.err_de_pct,
        })
        .collect();

    std::fs::create_dir_all(&out_dir)?;
    let (ext, fig1_doc, fig2_doc) = match format {
        FormatArg::Csv => (
            "csv",
            csv_document(
                &["x", "F_exact_over_F_pfa"],
                &fig1
                    .iter()
                    .map(|r| vec![float17(r.x), float17(r.ratio)])
                    .collect::<Vec<_>>(),
            ),
            csv_document(
                &["log10inv_x", "err_pfa_pct", "err_de_pct"],
                &fig2
                    .iter()
                    .map(|r| {
                        vec![
                            float17(r.log10inv_x),
                            float17(r.err_pfa_pct),
                            float17(r.err_de_pct),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
        ),
        FormatArg::Json => ("json", json_document(&fig1), json_document(&fig2)),
        FormatArg::Svg => (
            "svg",
            line_plot(
                "Sphere-plate Casimir energy normalized by the PFA",
                "x = d/R",
                "F_exact / F_pfa",
                true,
                &[Series {
                    label: "exact / PFA".to_string(),
                    points: fig1.iter().map(|r| (r.x, r.ratio)).collect(),
                }],
            ),
            line_plot(
                "Percent error of the PFA and the second-order DE",
                "-log10(d/R)",
                "percent error",
                false,
                &[
                    Series {
                        label: "PFA".to_string(),
                        points: fig2.iter().map(|r| (r.log10inv_x, r.err_pfa_pct)).collect(),
                    },
                    Series {
                        label: "DE".to_string(),
                        points: fig2.iter().map(|r| (r.log10inv_x, r.err_de_pct)).collect(),
                    },
                ],
            ),
        ),
    };
    let fig1_path = out_dir.join(format!("fig1.{ext}"));
    let fig2_path = out_dir.join(format!("fig2.{ext}"));
    emit(Some(&fig1_path), &fig1_doc)?;
    emit(Some(&fig2_path), &fig2_doc)?;
    println!("wrote {}", fig1_path.display());
    println!("wrote {}", fig2_path.display());
    Ok(())
}

pub fn run_kernel(args: KernelArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let format = args
        .format
        .or(cfg.variant::<FormatArg>("format")?)
        .unwrap_or(FormatArg::Csv);
    let out = args.out.or(cfg.parsed::<PathBuf>("out")?);

    let table = beta_table();
    let content = match format {
        FormatArg::Csv => csv_document(
            &["theory", "beta", "cubic_present"],
            &table
                .iter()
                .map(|e| {
                    vec![
                        e.theory.key().to_string(),
                        float17(e.beta),
                        e.cubic_present.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        FormatArg::Json => {
            let mut map = serde_json::Map::new();
            for e in &table {
                map.insert(
                    e.theory.key().to_string(),
                    json!({ "beta": e.beta, "cubic_present": e.cubic_present }),
                );
            }
            json_document(&serde_json::Value::Object(map))
        }
        FormatArg::Svg => return Err(Failure::invalid("kernel does not support --format svg")),
    };
    emit(out.as_deref(), &content)
}

#[derive(Serialize)]
struct LogNntloRecord {
    slope: f64,
    intercept: f64,
    max_residual: f64,
}

pub fn run_fit(args: FitArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let kind = args.kind.or(cfg.variant::<FitKindArg>("kind")?);
    let basis_spec = args.basis.or(cfg.raw("basis").map(str::to_string));
    let theory_arg = args.theory.or(cfg.variant::<TheoryArg>("theory")?);
    let xmin = args.xmin.or(cfg.parsed("xmin")?);
    let xmax = args.xmax.or(cfg.parsed("xmax")?);
    let points = args.points.or(cfg.parsed("points")?);
    let format = args
        .format
        .or(cfg.variant::<FormatArg>("format")?)
        .unwrap_or(FormatArg::Csv);
    let out = args.out.or(cfg.parsed::<PathBuf>("out")?);

    // A custom basis overrides the presets and needs an explicit grid.
    if let Some(spec) = basis_spec {
        let basis: Vec<BasisFn> = spec
            .split(',')
            .map(BasisFn::parse)
            .collect::<casimir_core::Result<_>>()?;
        let grid = log_spaced_grid(
            require(xmin, "xmin")?,
            require(xmax, "xmax")?,
            require(points, "points")?,
        )?;
        let theory = theory_arg.unwrap_or(TheoryArg::Em).kind();
        let report = fit_expansion(theory, &basis, &grid)?;
        return emit_fit_report(&report, format, out.as_deref());
    }

    match kind.unwrap_or(FitKindArg::Ntlo) {
        FitKindArg::LogNntlo => {
            if matches!(theory_arg, Some(t) if t != TheoryArg::Em) {
                return Err(Failure::invalid(
                    "the log-NNTLO fit applies to the electromagnetic series only",
                ));
            }
            let fit = fit_log_nntlo(
                xmin.unwrap_or(1e-6),
                xmax.unwrap_or(1e-3),
                points.unwrap_or(40),
            )?;
            let record = LogNntloRecord {
                slope: fit.slope,
                intercept: fit.intercept,
                max_residual: fit.max_residual,
            };
            let content = match format {
                FormatArg::Csv => csv_document(
                    &["slope", "intercept", "max_residual"],
                    &[vec![
                        float17(record.slope),
                        float17(record.intercept),
                        float17(record.max_residual),
                    ]],
                ),
                FormatArg::Json => json_document(&record),
                FormatArg::Svg => {
                    return Err(Failure::invalid("fit does not support --format svg"))
                }
            };
            emit(out.as_deref(), &content)
        }
        FitKindArg::Leading => {
            let theory = theory_arg.unwrap_or(TheoryArg::Em).kind();
            let basis = [BasisFn::Pow(-1.5), BasisFn::Pow(-0.5)];
            let grid = log_spaced_grid(
                xmin.unwrap_or(1e-5),
                xmax.unwrap_or(1e-4),
                points.unwrap_or(24),
            )?;
            let report = fit_expansion(theory, &basis, &grid)?;
            emit_fit_report(&report, format, out.as_deref())
        }
        FitKindArg::Ntlo => {
            let theory = theory_arg.unwrap_or(TheoryArg::Em).kind();
            let basis = [
                BasisFn::Pow(-1.5),
                BasisFn::Pow(-0.5),
                BasisFn::LogX,
                BasisFn::Const,
            ];
            let grid = log_spaced_grid(
                xmin.unwrap_or(1e-5),
                xmax.unwrap_or(1e-3),
                points.unwrap_or(48),
            )?;
            let report = fit_expansion(theory, &basis, &grid)?;
            emit_fit_report(&report, format, out.as_deref())
        }
        FitKindArg::DirichletNntlo => {
            if matches!(theory_arg, Some(t) if t != TheoryArg::Dirichlet) {
                return Err(Failure::invalid(
                    "the Dirichlet-NNTLO fit applies to the Dirichlet series only",
                ));
            }
            let basis = [
                BasisFn::Pow(-1.5),
                BasisFn::Pow(-0.5),
                BasisFn::Pow(0.5),
                BasisFn::Pow(1.5),
                BasisFn::LogX,
                BasisFn::Const,
            ];
            let grid = log_spaced_grid(
                xmin.unwrap_or(1e-4),
                xmax.unwrap_or(1e-2),
                points.unwrap_or(48),
            )?;
            let report = fit_expansion(TheoryKind::DirichletScalar, &basis, &grid)?;
            emit_fit_report(&report, format, out.as_deref())
        }
    }
}

fn emit_fit_report(report: &FitReport, format: FormatArg, out: Option<&Path>) -> CmdResult<()> {
    let content = match format {
        FormatArg::Csv => {
            let mut header: Vec<String> = report.basis.iter().map(|b| b.to_string()).collect();
            header.push("max_residual".to_string());
            header.push("condition_estimate".to_string());
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut row: Vec<String> = report.coefficients.iter().copied().map(float17).collect();
            row.push(float17(report.max_residual));
            row.push(float17(report.condition_estimate));
            csv_document(&header_refs, &[row])
        }
        FormatArg::Json => json_document(report),
        FormatArg::Svg => return Err(Failure::invalid("fit does not support --format svg")),
    };
    emit(out, &content)
}

pub fn run_validate(args: ValidateArgs) -> CmdResult<()> {
    let cfg = FileConfig::load_optional(args.config.as_deref())?;
    let format = args.format.or(cfg.variant::<FormatArg>("format")?);
    let out = args.out.or(cfg.parsed::<PathBuf>("out")?);

    let results = validation::run_all();
    let content = match format {
        None => {
            let mut doc = String::new();
            for r in &results {
                doc.push_str(&r.report_line());
                doc.push('\n');
            }
            doc
        }
        Some(FormatArg::Csv) => csv_document(
            &["id", "name", "passed", "measured"],
            &results
                .iter()
                .map(|r| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        r.passed.to_string(),
                        csv_field(&r.measured),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Some(FormatArg::Json) => json_document(&results),
        Some(FormatArg::Svg) => {
            return Err(Failure::invalid("validate does not support --format svg"))
        }
    };
    emit(out.as_deref(), &content)?;

    let failures = results.iter().filter(|r| !r.passed).count();
    if failures > 0 {
        return Err(Failure {
            code: EXIT_VALIDATION,
            message: format!("{failures} of {} criteria failed", results.len()),
        });
    }
    Ok(())
}
