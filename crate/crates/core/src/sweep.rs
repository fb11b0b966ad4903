//! Rectangular parameter sweeps and their CSV / JSON-lines tables.

use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::str::FromStr;

use crate::equilibrium::solve;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::model::{validate, Endowment, Preferences};
use crate::sensitivity::{d_pd_d_gamma, regime_from_derivative, PanicRegime};

/// Column order of the CSV table.
pub const CSV_HEADER: [&str; 13] = [
    "gamma",
    "psi",
    "delta",
    "mu",
    "sigma",
    "feasible",
    "a_factor",
    "pd_ratio",
    "ln_rf",
    "premium",
    "ln_e_r",
    "d_pd_d_gamma",
    "regime",
];

/// Values taken by one swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Axis {
    /// `count` evenly spaced points from `lo` to `hi`, both included.
    Range { lo: f64, hi: f64, count: usize },
    Values(Vec<f64>),
}

impl Axis {
    pub fn single(v: f64) -> Axis {
        Axis::Values(vec![v])
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            Axis::Range { lo, hi, count } => {
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidRange(format!("non-finite bound {lo}:{hi}")));
                }
                if lo > hi {
                    return Err(Error::InvalidRange(format!("lo {lo} > hi {hi}")));
                }
                match *count {
                    0 => Err(Error::EmptyGrid("range with zero points".into())),
                    1 => Ok(vec![*lo]),
                    n => {
                        let step = (hi - lo) / (n - 1) as f64;
                        let mut pts: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
                        pts[n - 1] = *hi;
                        Ok(pts)
                    }
                }
            }
            Axis::Values(v) => {
                if v.is_empty() {
                    return Err(Error::EmptyGrid("empty value list".into()));
                }
                if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
                    return Err(Error::InvalidRange(format!("non-finite value {bad}")));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Parses `lo:hi:n`, a comma-separated list, or a single number.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axis> {
        let bad = |what: &str| Error::InvalidRange(format!("cannot parse {what} in `{s}`"));
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyGrid("empty axis specification".into()));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("range (expected lo:hi:n)"));
            }
            let lo = parts[0].trim().parse::<f64>().map_err(|_| bad("lower bound"))?;
            let hi = parts[1].trim().parse::<f64>().map_err(|_| bad("upper bound"))?;
            let count = parts[2].trim().parse::<usize>().map_err(|_| bad("point count"))?;
            let axis = Axis::Range { lo, hi, count };
            axis.points()?;
            Ok(axis)
        } else {
            let values = s
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("value")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Axis::Values(values))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub gamma: Axis,
    pub psi: Axis,
    pub delta: Axis,
    pub mu: Axis,
    pub sigma: Axis,
}

/// One grid cell. Output fields are `None` exactly when the cell is infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub psi: f64,
    pub delta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub feasible: bool,
    pub a_factor: Option<f64>,
    pub pd_ratio: Option<f64>,
    pub ln_rf: Option<f64>,
    pub premium: Option<f64>,
    pub ln_e_r: Option<f64>,
    pub d_pd_d_gamma: Option<f64>,
    pub regime: Option<PanicRegime>,
}

/// Evaluates one cell. Parameter errors other than a missing equilibrium propagate.
pub fn evaluate_cell(gamma: f64, psi: f64, delta: f64, mu: f64, sigma: f64) -> Result<SweepRow> {
    let mut row = SweepRow {
        gamma,
        psi,
        delta,
        mu,
        sigma,
        feasible: false,
        a_factor: None,
        pd_ratio: None,
        ln_rf: None,
        premium: None,
        ln_e_r: None,
        d_pd_d_gamma: None,
        regime: None,
    };
    let econ = match validate(Preferences::new(delta, gamma, psi), Endowment::new(mu, sigma)) {
        Ok(e) => e,
        Err(Error::NoEquilibrium { .. }) => return Ok(row),
        Err(e) => return Err(e),
    };
    let sol = solve(&econ);
    let d_pd = d_pd_d_gamma(&econ);
    row.feasible = true;
    row.a_factor = Some(sol.a_factor);
    row.pd_ratio = Some(sol.pd_ratio);
    row.ln_rf = Some(sol.ln_rf);
    row.premium = Some(sol.premium);
    row.ln_e_r = Some(sol.ln_e_r);
    row.d_pd_d_gamma = Some(d_pd);
    row.regime = Some(regime_from_derivative(d_pd));
    Ok(row)
}

pub fn sweep(grid: &GridSpec) -> Result<Vec<SweepRow>> {
    sweep_with(grid, Execution::default())
}

/// Rows in lexicographic order of (gamma, psi, delta, mu, sigma), sigma varying fastest.
pub fn sweep_with(grid: &GridSpec, execution: Execution) -> Result<Vec<SweepRow>> {
    let axes = [
        grid.gamma.points()?,
        grid.psi.points()?,
        grid.delta.points()?,
        grid.mu.points()?,
        grid.sigma.points()?,
    ];
    let total: usize = axes.iter().map(Vec::len).product();
    let rows = map_indexed(execution, total, |mut idx| {
        let mut coord = [0.0; 5];
        for (k, axis) in axes.iter().enumerate().rev() {
            coord[k] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        evaluate_cell(coord[0], coord[1], coord[2], coord[3], coord[4])
    });
    rows.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableFormat {
    Csv,
    JsonLines,
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn emit<W: Write>(rows: &[SweepRow], format: TableFormat, out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyGrid("no rows to emit".into()));
    }
    match format {
        TableFormat::Csv => emit_csv(rows, out),
        TableFormat::JsonLines => emit_json_lines(rows, out),
    }
}

fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            format_float(r.gamma),
            format_float(r.psi),
            format_float(r.delta),
            format_float(r.mu),
            format_float(r.sigma),
            r.feasible.to_string(),
            opt(r.a_factor),
            opt(r.pd_ratio),
            opt(r.ln_rf),
            opt(r.premium),
            opt(r.ln_e_r),
            opt(r.d_pd_d_gamma),
            r.regime.map(|g| g.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn emit_json_lines<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r).map_err(|e| Error::IoFailure(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a table written by [`emit`] in CSV form.
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::IoFailure(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::IoFailure(format!("bad number `{s}`")))
    };
    let opt_num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        rows.push(SweepRow {
            gamma: num(f(0))?,
            psi: num(f(1))?,
            delta: num(f(2))?,
            mu: num(f(3))?,
            sigma: num(f(4))?,
            feasible: f(5)
                .parse::<bool>()
                .map_err(|_| Error::IoFailure(format!("bad flag `{}`", f(5))))?,
            a_factor: opt_num(f(6))?,
            pd_ratio: opt_num(f(7))?,
            ln_rf: opt_num(f(8))?,
            premium: opt_num(f(9))?,
            ln_e_r: opt_num(f(10))?,
            d_pd_d_gamma: opt_num(f(11))?,
            regime: if f(12).is_empty() { None } else { Some(f(12).parse()?) },
        });
    }
    Ok(rows)
}

/// Reads a JSON-lines table written by [`emit`].
pub fn parse_json_lines<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::IoFailure(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium;
    use crate::sensitivity;
    use proptest::prelude::*;

    fn regime_grid() -> GridSpec {
        GridSpec {
            gamma: "0:10:11".parse().unwrap(),
            psi: "0.5,1,1.5".parse().unwrap(),
            delta: Axis::single(0.02),
            mu: Axis::single(0.018),
            sigma: Axis::single(0.036),
        }
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(
            "0:10:11".parse::<Axis>().unwrap().points().unwrap(),
            (0..=10).map(f64::from).collect::<Vec<_>>()
        );
        assert_eq!("2.5".parse::<Axis>().unwrap(), Axis::Values(vec![2.5]));
        assert!(matches!("5:1:3".parse::<Axis>(), Err(Error::InvalidRange(_))));
        assert!(matches!("1:2:0".parse::<Axis>(), Err(Error::EmptyGrid(_))));
        assert!(matches!("1:2".parse::<Axis>(), Err(Error::InvalidRange(_))));
        assert!(matches!("a,b".parse::<Axis>(), Err(Error::InvalidRange(_))));
        assert!(matches!("".parse::<Axis>(), Err(Error::EmptyGrid(_))));
        assert_eq!(
            Axis::Range { lo: 3.0, hi: 7.0, count: 1 }.points().unwrap(),
            vec![3.0]
        );
    }

    #[test]
    fn regime_map_over_gamma_psi() {
        let rows = sweep(&regime_grid()).unwrap();
        assert_eq!(rows.len(), 33);
        // gamma outermost, psi next
        assert_eq!((rows[0].gamma, rows[0].psi), (0.0, 0.5));
        assert_eq!((rows[1].gamma, rows[1].psi), (0.0, 1.0));
        assert_eq!((rows[3].gamma, rows[3].psi), (1.0, 0.5));
        for r in &rows {
            assert!(r.feasible);
            let expected = if r.psi < 1.0 {
                PanicRegime::PriceRisesInPanic
            } else if r.psi == 1.0 {
                PanicRegime::PriceInsensitive
            } else {
                PanicRegime::PriceFallsInPanic
            };
            assert_eq!(r.regime, Some(expected), "{r:?}");
        }
    }

    #[test]
    fn single_cell_matches_direct_computation() {
        let grid = GridSpec {
            gamma: Axis::single(10.0),
            psi: Axis::single(1.5),
            delta: Axis::single(0.02),
            mu: Axis::single(0.018),
            sigma: Axis::single(0.036),
        };
        let rows = sweep(&grid).unwrap();
        assert_eq!(rows.len(), 1);
        let econ = validate(Preferences::new(0.02, 10.0, 1.5), Endowment::new(0.018, 0.036)).unwrap();
        let sol = equilibrium::solve(&econ);
        let rep = sensitivity::report(&econ);
        let r = rows[0];
        assert_eq!(r.a_factor, Some(sol.a_factor));
        assert_eq!(r.pd_ratio, Some(sol.pd_ratio));
        assert_eq!(r.ln_rf, Some(sol.ln_rf));
        assert_eq!(r.premium, Some(sol.premium));
        assert_eq!(r.ln_e_r, Some(sol.ln_e_r));
        assert_eq!(r.d_pd_d_gamma, Some(rep.d_pd_d_gamma));
        assert_eq!(r.regime, Some(rep.regime));
    }

    #[test]
    fn infeasible_cell_is_flagged() {
        let row = evaluate_cell(0.0, 2.0, 0.0, 0.05, 0.0).unwrap();
        assert!(!row.feasible);
        assert!(row.a_factor.is_none() && row.pd_ratio.is_none() && row.regime.is_none());
        let mut buf = Vec::new();
        emit(&[row], TableFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert!(line.ends_with(",false,,,,,,,"), "{line}");
    }

    #[test]
    fn invalid_parameters_abort_the_sweep() {
        let mut grid = regime_grid();
        grid.psi = Axis::Values(vec![0.0, 1.0]);
        assert!(matches!(sweep(&grid), Err(Error::NonPositivePsi { .. })));
    }

    #[test]
    fn csv_schema() {
        let row = evaluate_cell(10.0, 1.5, 0.02, 0.018, 0.036).unwrap();
        let mut buf = Vec::new();
        emit(&[row], TableFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1].split(',').count(), 13);
        assert!(lines[1].starts_with("1.0000000000000000e1,1.5000000000000000e0,"));
        assert!(lines[1].ends_with(",PriceFallsInPanic"));
    }

    #[test]
    fn emit_rejects_empty() {
        assert!(matches!(emit(&[], TableFormat::Csv, Vec::new()), Err(Error::EmptyGrid(_))));
    }

    #[test]
    fn json_lines_round_trip() {
        let mut rows = sweep(&regime_grid()).unwrap();
        rows.push(evaluate_cell(0.0, 2.0, 0.0, 0.05, 0.0).unwrap());
        let mut buf = Vec::new();
        emit(&rows, TableFormat::JsonLines, &mut buf).unwrap();
        assert_eq!(parse_json_lines(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let grid = GridSpec {
            gamma: "0:20:41".parse().unwrap(),
            psi: "0.2:3:15".parse().unwrap(),
            delta: "0,0.02".parse().unwrap(),
            mu: Axis::single(0.018),
            sigma: "0:0.05:3".parse().unwrap(),
        };
        let a = sweep_with(&grid, Execution::Sequential).unwrap();
        let b = sweep_with(&grid, Execution::Parallel).unwrap();
        assert_eq!(a.len(), 41 * 15 * 2 * 3);
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            gamma in 0.0f64..20.0,
            psi in 0.1f64..5.0,
            delta in -0.02f64..0.1,
            mu in -0.05f64..0.05,
            sigma in 0.0f64..0.2,
        ) {
            let row = evaluate_cell(gamma, psi, delta, mu, sigma).unwrap();
            let mut buf = Vec::new();
            emit(&[row, row], TableFormat::Csv, &mut buf).unwrap();
            let back = parse_csv(&buf[..]).unwrap();
            prop_assert_eq!(back, vec![row, row]);
        }

        #[test]
        fn row_count_is_grid_product(a in 1usize..6, b in 1usize..5, c in 1usize..4) {
            let grid = GridSpec {
                gamma: Axis::Range { lo: 0.0, hi: 10.0, count: a },
                psi: Axis::Range { lo: 0.5, hi: 2.0, count: b },
                delta: Axis::Range { lo: 0.01, hi: 0.05, count: c },
                mu: Axis::single(0.018),
                sigma: Axis::Values(vec![0.0, 0.036]),
            };
            prop_assert_eq!(sweep(&grid).unwrap().len(), a * b * c * 2);
        }
    }
}
