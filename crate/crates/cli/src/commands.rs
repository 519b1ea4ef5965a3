use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use casimir_core::bhd::{
    check_balance, mean_current, variance_approx, variance_current, ClassicalField, DetectorConfig, LoKernel,
    LoMode,
};
use casimir_core::figures::{
    density_row, diagonal_row, linspace, normalized_difference_row, slice_row, suppression_row, DensityRow,
    DifferenceGrid, MapGrid, SliceGrid, SuppressionGrid,
};
use casimir_core::imagesum::{two_point_yy_by_derivative, two_point_yy_closed};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::units::{near_discontinuity, DEFAULT_GUARD};
use casimir_core::{CavityGeometry, FieldPoint, PhysicalScale, TruncationPolicy, UnitTag};

use crate::cli::{
    BhdArgs, FigureArgs, FigureName, Format, GlobalArgs, SpectralDiagArgs, SpectralMapArgs, SpectralSliceArgs,
    TwopointArgs,
};
use crate::error::CliError;
use crate::output::{emit, Cell, Column, Table, DENSITY_COLUMNS};
use crate::svg;

pub struct Context {
    pub geometry: CavityGeometry,
    pub scale: PhysicalScale,
    pub policy: TruncationPolicy,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> Result<Self, CliError> {
        Ok(Self {
            geometry: CavityGeometry::unit(),
            scale: PhysicalScale::new(global.a_microns)?,
            policy: TruncationPolicy::new(global.n_terms).accelerated(global.accelerate),
            format: global.format,
            output: global.output.clone(),
            svg: global.svg.clone(),
        })
    }

    fn parameters(&self, extra: Value) -> Value {
        let mut base = json!({
            "a_microns": self.scale.a_microns,
            "n_terms": self.policy.terms,
            "accelerate": self.policy.accelerate,
        });
        if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
            b.extend(e);
        }
        base
    }

    fn emit(&self, table: &Table, command: &str, extra: Value) -> Result<(), CliError> {
        emit(table, self.format, self.output.as_deref(), command, self.parameters(extra))
    }

    fn write_svg(&self, draw: impl FnOnce() -> String) -> Result<(), CliError> {
        if let Some(path) = &self.svg {
            write_file(path, &draw())?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Evaluates `f` over `items` on the worker pool; results keep the order
/// of `items`.
fn par_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> casimir_core::Result<R> + Sync + Send,
{
    Ok(items.par_iter().map(f).collect::<casimir_core::Result<Vec<R>>>()?)
}

fn frequency_notes(omegas: &[f64], geometry: &CavityGeometry, scale: &PhysicalScale) {
    for &w in omegas {
        let si = scale
            .from_internal(w, UnitTag::Frequency)
            .map(|q| format!(" ({:e} rad/s)", q.value))
            .unwrap_or_default();
        if w < geometry.cutoff() {
            eprintln!("note: omega={w}{si} sub_cutoff=true: below the lowest cavity mode the density vanishes up to truncation");
        }
        if near_discontinuity(w, DEFAULT_GUARD) {
            eprintln!("note: omega={w}{si} near_discontinuity=true: within {DEFAULT_GUARD} of a jump at a multiple of pi");
        }
    }
}

fn grid_notes(omegas: &[f64], geometry: &CavityGeometry) {
    let below = omegas.iter().filter(|&&w| w < geometry.cutoff()).count();
    if below > 0 {
        eprintln!("note: {below} grid frequencies are sub_cutoff=true (omega < pi)");
    }
}

fn density_cells(r: &DensityRow) -> Vec<Cell> {
    vec![
        Cell::Float(r.omega),
        Cell::Float(r.x),
        Cell::Float(r.y),
        Cell::Float(r.sigma),
        Cell::Float(r.err),
        Cell::Int(r.n_terms),
    ]
}

fn y_range(values: &[f64]) -> Result<(f64, f64), CliError> {
    match values {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(CliError::Usage("--y-range expects `min,max` with min < max".into())),
    }
}

pub fn spectral_diag(ctx: &Context, args: &SpectralDiagArgs) -> Result<(), CliError> {
    let xs = match (args.x, args.x_steps) {
        (Some(x), _) => vec![x],
        (None, steps) => linspace(0.0, ctx.geometry.separation(), steps.unwrap_or(51))?,
    };
    frequency_notes(&args.omega, &ctx.geometry, &ctx.scale);
    let points: Vec<(f64, f64)> = args
        .omega
        .iter()
        .flat_map(|&w| xs.iter().map(move |&x| (w, x)))
        .collect();
    let rows = par_map(&points, |&(w, x)| diagonal_row(w, x, &ctx.geometry, &ctx.policy))?;

    let mut columns = DENSITY_COLUMNS.to_vec();
    columns.push(Column::json_only("sub_cutoff"));
    columns.push(Column::json_only("near_discontinuity"));
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = density_cells(r);
        cells.push(Cell::Flag(r.omega < ctx.geometry.cutoff()));
        cells.push(Cell::Flag(near_discontinuity(r.omega, DEFAULT_GUARD)));
        table.push(cells);
    }
    ctx.write_svg(|| {
        let series: Vec<(String, Vec<(f64, f64)>)> = args
            .omega
            .iter()
            .map(|&w| {
                let pts = rows.iter().filter(|r| r.omega == w).map(|r| (r.x, r.sigma)).collect();
                (format!("omega={w}"), pts)
            })
            .collect();
        let refs: Vec<(&str, Vec<(f64, f64)>)> = series.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        svg::line_plot("diagonal density", "x/a", "sigma", &refs)
    })?;
    ctx.emit(&table, "spectral-diag", json!({ "omega": args.omega, "x": xs }))
}

fn map_table(ctx: &Context, grid: &MapGrid, command: &str) -> Result<(), CliError> {
    let points = grid.points(&ctx.geometry)?;
    let rows = par_map(&points, |&(x, y)| density_row(grid.omega, x, y, &ctx.geometry, &ctx.policy))?;
    let mut table = Table::new(DENSITY_COLUMNS.to_vec());
    for r in &rows {
        table.push(density_cells(r));
    }
    ctx.write_svg(|| {
        let values: Vec<Vec<f64>> = rows.chunks(grid.y_steps).map(|c| c.iter().map(|r| r.sigma).collect()).collect();
        svg::heatmap("off-diagonal density", "x/a", "y/a", &values)
    })?;
    ctx.emit(
        &table,
        command,
        json!({
            "omega": grid.omega,
            "x_steps": grid.x_steps,
            "y_range": [grid.y_min, grid.y_max],
            "y_steps": grid.y_steps,
        }),
    )
}

pub fn spectral_map(ctx: &Context, args: &SpectralMapArgs) -> Result<(), CliError> {
    let (y_min, y_max) = y_range(&args.y_range)?;
    frequency_notes(&[args.omega], &ctx.geometry, &ctx.scale);
    let grid = MapGrid {
        omega: args.omega,
        x_steps: args.x_steps,
        y_min,
        y_max,
        y_steps: args.y_steps,
    };
    map_table(ctx, &grid, "spectral-map")
}

fn slice_table(ctx: &Context, grid: &SliceGrid, command: &str) -> Result<(), CliError> {
    let diagonal = diagonal_row(grid.omega, grid.x, &ctx.geometry, &ctx.policy)?;
    if diagonal.sigma == 0.0 {
        return Err(CliError::Usage(format!(
            "diagonal density vanishes at x = {}; the ratio is undefined",
            grid.x
        )));
    }
    let ys = grid.points()?;
    let rows = par_map(&ys, |&y| {
        slice_row(grid.omega, grid.x, y, diagonal.sigma, &ctx.geometry, &ctx.policy)
    })?;
    let mut columns = DENSITY_COLUMNS.to_vec();
    columns.push(Column::csv("ratio"));
    let mut table = Table::new(columns);
    for r in &rows {
        table.push(vec![
            Cell::Float(r.omega),
            Cell::Float(r.x),
            Cell::Float(r.y),
            Cell::Float(r.sigma),
            Cell::Float(r.err),
            Cell::Int(r.n_terms),
            Cell::Float(r.ratio),
        ]);
    }
    ctx.write_svg(|| {
        let pts = rows.iter().map(|r| (r.y, r.ratio)).collect();
        svg::line_plot("off-diagonal / diagonal density", "y/a", "ratio", &[("ratio", pts)])
    })?;
    ctx.emit(
        &table,
        command,
        json!({
            "omega": grid.omega,
            "x": grid.x,
            "y_range": [grid.y_min, grid.y_max],
            "y_steps": grid.y_steps,
            "diagonal_sigma": diagonal.sigma,
        }),
    )
}

pub fn spectral_slice(ctx: &Context, args: &SpectralSliceArgs) -> Result<(), CliError> {
    let (y_min, y_max) = y_range(&args.y_range)?;
    frequency_notes(&[args.omega], &ctx.geometry, &ctx.scale);
    let grid = SliceGrid {
        omega: args.omega,
        x: args.x,
        y_min,
        y_max,
        y_steps: args.y_steps,
    };
    slice_table(ctx, &grid, "spectral-slice")
}

fn reject_overrides(name: &str, given: &[(&str, bool)]) -> Result<(), CliError> {
    for (flag, present) in given {
        if *present {
            return Err(CliError::Usage(format!("--{flag} does not apply to {name}")));
        }
    }
    Ok(())
}

pub fn figure(ctx: &Context, args: &FigureArgs) -> Result<(), CliError> {
    match args.name {
        FigureName::Fig2Left => {
            reject_overrides("fig2-left", &[("omega-steps", args.omega_steps.is_some())])?;
            let mut grid = MapGrid::default();
            grid.x_steps = args.x_steps.unwrap_or(grid.x_steps);
            grid.y_steps = args.y_steps.unwrap_or(grid.y_steps);
            map_table(ctx, &grid, "figure fig2-left")
        }
        FigureName::Fig2Right => {
            reject_overrides(
                "fig2-right",
                &[("omega-steps", args.omega_steps.is_some()), ("x-steps", args.x_steps.is_some())],
            )?;
            let mut grid = SliceGrid::default();
            grid.y_steps = args.y_steps.unwrap_or(grid.y_steps);
            slice_table(ctx, &grid, "figure fig2-right")
        }
        FigureName::Fig4Left => {
            reject_overrides("fig4-left", &[("y-steps", args.y_steps.is_some())])?;
            let mut grid = DifferenceGrid {
                guard: args.guard,
                ..DifferenceGrid::default()
            };
            grid.omega_steps = args.omega_steps.unwrap_or(grid.omega_steps);
            grid.x_steps = args.x_steps.unwrap_or(grid.x_steps);
            fig4_left(ctx, &grid)
        }
        FigureName::Fig4Right => {
            reject_overrides(
                "fig4-right",
                &[("x-steps", args.x_steps.is_some()), ("y-steps", args.y_steps.is_some())],
            )?;
            let mut grid = SuppressionGrid {
                guard: args.guard,
                ..SuppressionGrid::default()
            };
            grid.omega_steps = args.omega_steps.unwrap_or(grid.omega_steps);
            fig4_right(ctx, &grid)
        }
    }
}

fn fig4_left(ctx: &Context, grid: &DifferenceGrid) -> Result<(), CliError> {
    let points = grid.points(&ctx.geometry)?;
    let omegas: Vec<f64> = points.iter().step_by(grid.x_steps).map(|p| p.0).collect();
    grid_notes(&omegas, &ctx.geometry);
    let rows = par_map(&points, |&(w, x)| normalized_difference_row(w, x, &ctx.geometry, &ctx.policy))?;
    let mut table = Table::new(vec![
        Column::csv("omega_over_c_per_a"),
        Column::csv("x"),
        Column::csv("normalized_difference"),
        Column::csv("err"),
        Column::csv("n_terms"),
    ]);
    for r in &rows {
        table.push(vec![
            Cell::Float(r.omega),
            Cell::Float(r.x),
            Cell::Float(r.normalized_difference),
            Cell::Float(r.err),
            Cell::Int(r.n_terms),
        ]);
    }
    ctx.write_svg(|| {
        let values: Vec<Vec<f64>> = rows
            .chunks(grid.x_steps)
            .map(|c| c.iter().map(|r| r.normalized_difference).collect())
            .collect();
        svg::heatmap("normalized difference to vacuum", "omega a/c", "x/a", &values)
    })?;
    ctx.emit(
        &table,
        "figure fig4-left",
        json!({
            "omega_max": grid.omega_max,
            "omega_steps": grid.omega_steps,
            "x_steps": grid.x_steps,
            "guard": grid.guard,
        }),
    )
}

fn fig4_right(ctx: &Context, grid: &SuppressionGrid) -> Result<(), CliError> {
    let omegas = grid.points()?;
    grid_notes(&omegas, &ctx.geometry);
    let rows = par_map(&omegas, |&w| suppression_row(w, &ctx.geometry, &ctx.policy))?;
    let defined: Vec<(f64, f64, f64)> = rows.iter().filter_map(|r| r.both_defined()).collect();
    if defined.len() < rows.len() {
        eprintln!(
            "note: {} of {} frequencies omitted where a density is not positive (dB undefined)",
            rows.len() - defined.len(),
            rows.len()
        );
    }
    let mut table = Table::new(vec![
        Column::csv("omega_over_c_per_a"),
        Column::csv("db_x025"),
        Column::csv("db_x05"),
    ]);
    for &(w, q, h) in &defined {
        table.push(vec![Cell::Float(w), Cell::Float(q), Cell::Float(h)]);
    }
    ctx.write_svg(|| {
        let quarter = defined.iter().map(|r| (r.0, r.1)).collect();
        let half = defined.iter().map(|r| (r.0, r.2)).collect();
        svg::line_plot(
            "suppression of vacuum fluctuations (dB)",
            "omega a/c",
            "dB",
            &[("x = a/4", quarter), ("x = a/2", half)],
        )
    })?;
    ctx.emit(
        &table,
        "figure fig4-right",
        json!({
            "omega_max": grid.omega_max,
            "omega_steps": grid.omega_steps,
            "guard": grid.guard,
        }),
    )
}

pub fn twopoint(ctx: &Context, args: &TwopointArgs) -> Result<(), CliError> {
    let point = FieldPoint::new(args.x, args.y, &ctx.geometry)?;
    let closed = two_point_yy_closed(args.s, &point, &ctx.geometry, &ctx.policy)?;
    let mut columns = vec![
        Column::csv("s"),
        Column::csv("x"),
        Column::csv("y"),
        Column::csv("g_yy"),
        Column::csv("n_terms"),
    ];
    let mut cells = vec![
        Cell::Float(args.s),
        Cell::Float(args.x),
        Cell::Float(args.y),
        Cell::Float(closed),
        Cell::Int(ctx.policy.terms),
    ];
    if args.derivative {
        let fd = two_point_yy_by_derivative(args.s, &point, &ctx.geometry, &ctx.policy, args.h)?;
        columns.push(Column::csv("g_yy_derivative"));
        cells.push(Cell::Float(fd));
    }
    let mut table = Table::new(columns);
    table.push(cells);
    ctx.emit(&table, "twopoint", json!({ "s": args.s, "x": args.x, "y": args.y, "h": args.h }))
}

pub fn bhd(ctx: &Context, args: &BhdArgs) -> Result<(), CliError> {
    let g = &ctx.geometry;
    let width = args.width.unwrap_or(args.omega_lo / 100.0);
    let kernel = LoKernel::new(args.omega_lo, width, args.amplitude)?;
    let d1 = FieldPoint::new(args.x1, args.y1, g)?;
    let d2 = FieldPoint::new(args.x2, args.y2, g)?;
    let config = DetectorConfig::new(d1, d2, args.calibration, g)?;

    let separation = (args.y2 - args.y1).abs();
    let p = args
        .p
        .unwrap_or(if separation > 0.0 { PI / separation } else { 0.0 });
    let cutoff = g.cutoff();
    let k_sq = args.omega_lo * args.omega_lo - cutoff * cutoff - p * p;
    let mode = if k_sq >= 0.0 {
        Some(LoMode::te1(p, k_sq.sqrt(), g)?)
    } else {
        eprintln!("note: no propagating TE1 mode at omega_lo={} with p={p}; balance not checked", args.omega_lo);
        None
    };
    let balance = mode
        .as_ref()
        .map(|m| check_balance(&config, m, args.balance_tolerance, g))
        .transpose()?;

    let field = match (args.lo_field_strength, &mode) {
        (Some(strength), Some(m)) => Some(ClassicalField::from_lo_mode(m, &config, strength, g)?),
        (Some(_), None) => {
            return Err(CliError::Usage(
                "--lo-field-strength needs a propagating LO mode".into(),
            ))
        }
        (None, _) => None,
    };
    let mean = mean_current(&config, &kernel, field.as_ref())?;

    let quad = QuadratureSpec::default();
    let variance = variance_current(&config, &kernel, g, &ctx.policy, &quad)?;
    let approx = variance_approx(&config.diode1, &kernel, &config, g, &ctx.policy, &quad)?;

    let mut table = Table::new(vec![
        Column::csv("omega_lo"),
        Column::csv("width"),
        Column::csv("x1"),
        Column::csv("y1"),
        Column::csv("x2"),
        Column::csv("y2"),
        Column::csv("mean"),
        Column::csv("variance"),
        Column::csv("variance_approx"),
        Column::csv("balance_residual"),
        Column::csv("balanced"),
        Column::csv("n_terms"),
    ]);
    table.push(vec![
        Cell::Float(args.omega_lo),
        Cell::Float(width),
        Cell::Float(args.x1),
        Cell::Float(args.y1),
        Cell::Float(args.x2),
        Cell::Float(args.y2),
        Cell::Float(mean),
        Cell::Float(variance),
        Cell::Float(approx),
        balance.map_or(Cell::Missing, |b| Cell::Float(b.residual)),
        balance.map_or(Cell::Missing, |b| Cell::Flag(b.balanced)),
        Cell::Int(ctx.policy.terms),
    ]);
    ctx.emit(
        &table,
        "bhd",
        json!({
            "omega_lo": args.omega_lo,
            "width": width,
            "amplitude": args.amplitude,
            "calibration": args.calibration,
            "p": p,
            "lo_field_strength": args.lo_field_strength,
            "balance_tolerance": args.balance_tolerance,
        }),
    )
}
