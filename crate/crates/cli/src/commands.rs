use cone_ab::oracle::{
    channel_cases, confirm_bound_state, default_verify_cases, verify_case, VerifyCase, VerifyTolerances,
};
use cone_ab::{
    differential_cross_section, find_bound_states, phase_shift, s_matrix_element, scattering_amplitude, Channel,
    ChannelClass, ConeGeometry, Error, ExtensionSpec,
};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::output::{Cell, Diagnostic, Report};

/// How the run ended, beyond validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged,
    VerificationFailed,
}

struct RowOutcome {
    rows: Vec<Vec<Cell>>,
    diagnostics: Vec<Diagnostic>,
    not_converged: bool,
}

impl RowOutcome {
    fn row(row: Vec<Cell>) -> Self {
        Self {
            rows: vec![row],
            diagnostics: Vec::new(),
            not_converged: false,
        }
    }

    fn with(mut self, d: Diagnostic) -> Self {
        self.diagnostics.push(d);
        self
    }
}

/// Gathers per-point outcomes in input order.
fn collect(report: &mut Report, outcomes: Vec<RowOutcome>) -> bool {
    let mut not_converged = false;
    for o in outcomes {
        report.rows.extend(o.rows);
        report.diagnostics.extend(o.diagnostics);
        not_converged |= o.not_converged;
    }
    not_converged
}

fn channel_label(m: i64, flux: f64, alpha: f64) -> String {
    format!("m={m} flux={flux} alpha={alpha}")
}

fn unsupported_warning(ch: &Channel) -> Diagnostic {
    Diagnostic::warning(format!(
        "{}: unsupported channel (J^2 = {} < 0), skipped",
        channel_label(ch.m(), ch.flux(), ch.alpha()),
        ch.j_squared()
    ))
}

fn channel_points(cfg: &SweepConfig) -> Vec<(f64, f64, f64, i64)> {
    let mut out = Vec::new();
    for &alpha in &cfg.alpha {
        for &flux in &cfg.flux {
            for &k in &cfg.k {
                for &m in &cfg.channels {
                    out.push((alpha, flux, k, m));
                }
            }
        }
    }
    out
}

pub fn phase_shifts(cfg: &SweepConfig) -> (Report, Status) {
    let mut report = Report::new(
        "phase-shifts",
        vec![
            "alpha",
            "flux",
            "k",
            "m",
            "class",
            "j_abs",
            "rho",
            "delta_ab",
            "theta_rho",
            "delta_total",
            "status",
        ],
    );
    let outcomes = channel_points(cfg)
        .into_par_iter()
        .map(|(alpha, flux, k, m)| {
            let rho = cfg.rho.get(m);
            let ch = match Channel::new(m, flux, alpha) {
                Ok(ch) => ch,
                Err(e) => return error_row(&[alpha.into(), flux.into(), k.into(), m.into()], 11, alpha, flux, m, e),
            };
            let lead = vec![
                alpha.into(),
                flux.into(),
                k.into(),
                m.into(),
                ch.class().as_str().into(),
                ch.j_abs().into(),
                rho.to_string().into(),
            ];
            if ch.class() == ChannelClass::Unsupported {
                return RowOutcome::row(padded(lead, 11, "unsupported")).with(unsupported_warning(&ch));
            }
            match phase_shift(&ch, rho, k) {
                Ok(p) => {
                    let mut row = lead;
                    row.extend([
                        cfg.angle_out(p.delta_ab).into(),
                        cfg.angle_out(p.theta_rho).into(),
                        cfg.angle_out(p.total).into(),
                        "ok".into(),
                    ]);
                    RowOutcome::row(row)
                }
                Err(e) => error_row(&lead, 11, alpha, flux, m, e),
            }
        })
        .collect();
    collect(&mut report, outcomes);
    (report, Status::Ok)
}

pub fn smatrix(cfg: &SweepConfig) -> (Report, Status) {
    let mut report = Report::new(
        "smatrix",
        vec![
            "alpha", "flux", "k", "m", "class", "j_abs", "rho", "re", "im", "abs", "arg", "status",
        ],
    );
    let outcomes = channel_points(cfg)
        .into_par_iter()
        .map(|(alpha, flux, k, m)| {
            let rho = cfg.rho.get(m);
            let ch = match Channel::new(m, flux, alpha) {
                Ok(ch) => ch,
                Err(e) => return error_row(&[alpha.into(), flux.into(), k.into(), m.into()], 12, alpha, flux, m, e),
            };
            let lead = vec![
                alpha.into(),
                flux.into(),
                k.into(),
                m.into(),
                ch.class().as_str().into(),
                ch.j_abs().into(),
                rho.to_string().into(),
            ];
            if ch.class() == ChannelClass::Unsupported {
                return RowOutcome::row(padded(lead, 12, "unsupported")).with(unsupported_warning(&ch));
            }
            match s_matrix_element(&ch, rho, k) {
                Ok(s) => {
                    let mut row = lead;
                    row.extend([
                        s.value.re.into(),
                        s.value.im.into(),
                        s.value.norm().into(),
                        cfg.angle_out(s.value.arg()).into(),
                        "ok".into(),
                    ]);
                    RowOutcome::row(row)
                }
                Err(e) => error_row(&lead, 12, alpha, flux, m, e),
            }
        })
        .collect();
    collect(&mut report, outcomes);
    (report, Status::Ok)
}

pub fn amplitude(cfg: &SweepConfig) -> (Report, Status) {
    const COLUMNS: usize = 12;
    let mut report = Report::new(
        "amplitude",
        vec![
            "alpha",
            "flux",
            "k",
            "theta",
            "re",
            "im",
            "abs",
            "cross_section",
            "spread",
            "m_max",
            "skipped_channels",
            "status",
        ],
    );
    let mut points = Vec::new();
    for &alpha in &cfg.alpha {
        for &flux in &cfg.flux {
            for &k in &cfg.k {
                for &theta in &cfg.theta {
                    points.push((alpha, flux, k, theta));
                }
            }
        }
    }
    let outcomes = points
        .into_par_iter()
        .map(|(alpha, flux, k, theta)| {
            let lead: Vec<Cell> = vec![alpha.into(), flux.into(), k.into(), cfg.angle_out(theta).into()];
            let label = format!("alpha={alpha} flux={flux} k={k} theta={}", cfg.angle_out(theta));
            let geom = match ConeGeometry::new(alpha, cfg.mass) {
                Ok(g) => g,
                Err(e) => return error_row_labelled(&lead, COLUMNS, &label, e),
            };
            let (result, status) = match scattering_amplitude(&geom, flux, &cfg.rho, k, theta, &cfg.regularization) {
                Ok(a) => (a, "ok"),
                Err(Error::NotConverged { partial, .. }) => (*partial, "not_converged"),
                Err(e) => return error_row_labelled(&lead, COLUMNS, &label, e),
            };
            let mut row = lead;
            row.extend([
                result.value.re.into(),
                result.value.im.into(),
                result.value.norm().into(),
                differential_cross_section(&result).into(),
                result.extrapolation_spread.into(),
                (result.m_max as i64).into(),
                (result.skipped_channels.len() as i64).into(),
                status.into(),
            ]);
            let mut out = RowOutcome::row(row);
            if !result.skipped_channels.is_empty() {
                out = out.with(Diagnostic::warning(format!(
                    "{label}: unsupported channels {:?} left out of the partial-wave sum",
                    result.skipped_channels
                )));
            }
            if status == "not_converged" {
                out.not_converged = true;
                out = out.with(Diagnostic::warning(format!(
                    "{label}: extrapolation spread {:.3e} exceeds tolerance {:.3e}",
                    result.extrapolation_spread, cfg.regularization.spread_tolerance
                )));
            }
            out
        })
        .collect();
    let not_converged = collect(&mut report, outcomes);
    (
        report,
        if not_converged {
            Status::NotConverged
        } else {
            Status::Ok
        },
    )
}

pub fn bound_states(cfg: &SweepConfig) -> (Report, Status) {
    let mut report = Report::new(
        "bound-states",
        vec![
            "alpha",
            "flux",
            "m",
            "j_abs",
            "rho",
            "kappa",
            "energy",
            "oracle_confirmed",
            "tail_ratio",
        ],
    );
    let mut points = Vec::new();
    for &alpha in &cfg.alpha {
        for &flux in &cfg.flux {
            for &m in &cfg.channels {
                points.push((alpha, flux, m));
            }
        }
    }
    let outcomes: Vec<RowOutcome> = points
        .into_par_iter()
        .map(|(alpha, flux, m)| {
            let label = channel_label(m, flux, alpha);
            let mut out = RowOutcome {
                rows: Vec::new(),
                diagnostics: Vec::new(),
                not_converged: false,
            };
            let (ch, geom) = match (Channel::new(m, flux, alpha), ConeGeometry::new(alpha, cfg.mass)) {
                (Ok(ch), Ok(g)) => (ch, g),
                (Err(e), _) | (_, Err(e)) => return out.with(Diagnostic::warning(format!("{label}: {e}"))),
            };
            if ch.class() == ChannelClass::Unsupported {
                return out.with(unsupported_warning(&ch));
            }
            let rho = cfg.rho.get(m);
            let search = match find_bound_states(&ch, rho, &geom) {
                Ok(s) => s,
                Err(e) => return out.with(Diagnostic::warning(format!("{label}: {e}"))),
            };
            if let Some(d) = search.diagnostic {
                out.diagnostics.push(Diagnostic::info(format!("{label}: {d}")));
            }
            for state in search.states {
                let check = confirm_bound_state(&ch, rho, state.kappa, &geom);
                let (confirmed, tail) = match &check {
                    Ok(c) => (c.confirmed, Cell::Float(c.tail_ratio)),
                    Err(_) => (false, Cell::Null),
                };
                match check {
                    Err(e) => out
                        .diagnostics
                        .push(Diagnostic::warning(format!("{label}: oracle check failed: {e}"))),
                    Ok(_) if !confirmed => out.diagnostics.push(Diagnostic::warning(format!(
                        "{label}: pole at kappa={} not confirmed by radial integration",
                        state.kappa
                    ))),
                    Ok(_) => {}
                }
                out.rows.push(vec![
                    alpha.into(),
                    flux.into(),
                    m.into(),
                    state.j_abs.into(),
                    rho.to_string().into(),
                    state.kappa.into(),
                    state.energy.into(),
                    confirmed.into(),
                    tail,
                ]);
            }
            out
        })
        .collect();
    collect(&mut report, outcomes);
    (report, Status::Ok)
}

pub fn verify(cfg: &SweepConfig) -> (Report, Status) {
    let mut report = Report::new(
        "verify",
        vec![
            "alpha",
            "flux",
            "k",
            "m",
            "j_abs",
            "rho",
            "analytic",
            "fitted",
            "phase_error",
            "refinement_change",
            "window_change",
            "status",
        ],
    );
    let tolerances = VerifyTolerances {
        phase: cfg.tolerance.unwrap_or(VerifyTolerances::default().phase),
        ..Default::default()
    };

    // Unsupported channels are reported and skipped; they have no radial problem to check.
    let mut cases: Vec<VerifyCase> = Vec::new();
    let mut skipped = Vec::new();
    if cfg.grid_given {
        for (alpha, flux, k, m) in channel_points(cfg) {
            match Channel::new(m, flux, alpha) {
                Ok(ch) if ch.class() == ChannelClass::Unsupported => skipped.push((alpha, flux, k, ch)),
                Ok(_) => {
                    let rho = cfg.rho.get(m);
                    // The regular case is always checked; a nonzero extension adds a second case.
                    let extra = if rho.is_zero() { ExtensionSpec::Zero } else { rho };
                    cases.extend(channel_cases(alpha, flux, k, m, extra));
                }
                Err(e) => report
                    .diagnostics
                    .push(Diagnostic::warning(format!("{}: {e}", channel_label(m, flux, alpha)))),
            }
        }
    } else {
        cases = default_verify_cases();
    }

    let outcomes: Vec<_> = cases.par_iter().map(|c| verify_case(c, &tolerances)).collect();
    let mut failed = 0usize;
    for o in &outcomes {
        let c = &o.case;
        let status = match (&o.error, o.passed) {
            (Some(_), _) => "error",
            (None, true) => "pass",
            (None, false) => "fail",
        };
        if !o.passed {
            failed += 1;
            let reason = o.error.clone().unwrap_or_else(|| {
                format!(
                    "phase error {:.3e} (tolerance {:.3e}), refinement change {:.3e}, window change {:.3e}",
                    o.phase_error, tolerances.phase, o.refinement_change, o.window_change
                )
            });
            report.diagnostics.push(Diagnostic::warning(format!(
                "{} k={} rho={}: {reason}",
                channel_label(c.m, c.flux, c.alpha),
                c.k,
                c.rho
            )));
        }
        report.rows.push(vec![
            c.alpha.into(),
            c.flux.into(),
            c.k.into(),
            c.m.into(),
            o.j_abs.into(),
            c.rho.to_string().into(),
            cfg.angle_out(o.analytic).into(),
            cfg.angle_out(o.fitted).into(),
            cfg.angle_out(o.phase_error).into(),
            cfg.angle_out(o.refinement_change).into(),
            cfg.angle_out(o.window_change).into(),
            status.into(),
        ]);
    }
    for &(alpha, flux, k, ref ch) in &skipped {
        report.diagnostics.push(unsupported_warning(ch));
        report.rows.push(padded(
            vec![
                alpha.into(),
                flux.into(),
                k.into(),
                ch.m().into(),
                Cell::Null,
                cfg.rho.get(ch.m()).to_string().into(),
            ],
            12,
            "unsupported",
        ));
    }
    let passed = outcomes.len() - failed;
    report.summary.push(("passed", (passed as i64).into()));
    report.summary.push(("failed", (failed as i64).into()));
    report.summary.push(("unsupported", (skipped.len() as i64).into()));
    (
        report,
        if failed > 0 {
            Status::VerificationFailed
        } else {
            Status::Ok
        },
    )
}

/// Fills the row with nulls up to the status column.
fn padded(mut row: Vec<Cell>, width: usize, status: &str) -> Vec<Cell> {
    while row.len() < width - 1 {
        row.push(Cell::Null);
    }
    row.push(status.into());
    row
}

fn error_row(lead: &[Cell], width: usize, alpha: f64, flux: f64, m: i64, e: Error) -> RowOutcome {
    error_row_labelled(lead, width, &channel_label(m, flux, alpha), e)
}

fn error_row_labelled(lead: &[Cell], width: usize, label: &str, e: Error) -> RowOutcome {
    let status = match e {
        Error::Pole { .. } => "pole",
        _ => "error",
    };
    RowOutcome::row(padded(lead.to_vec(), width, status)).with(Diagnostic::warning(format!("{label}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CommonArgs;

    fn cfg(args: CommonArgs) -> SweepConfig {
        SweepConfig::resolve(&args).unwrap()
    }

    #[test]
    fn unsupported_rows_are_flagged() {
        let (report, status) = phase_shifts(&cfg(CommonArgs {
            alpha: Some(vec![0.5]),
            flux: Some(vec![0.0]),
            m: Some(vec![0, 1]),
            ..Default::default()
        }));
        assert_eq!(status, Status::Ok);
        assert_eq!(report.rows[0].last(), Some(&Cell::from("unsupported")));
        assert_eq!(report.rows[1].last(), Some(&Cell::from("ok")));
        assert_eq!(report.warnings(), 1);
    }

    #[test]
    fn rows_follow_config_order() {
        let (report, _) = smatrix(&cfg(CommonArgs {
            alpha: Some(vec![0.9, 1.0]),
            flux: Some(vec![0.5]),
            m_max: Some(2),
            ..Default::default()
        }));
        let ms: Vec<_> = report.rows.iter().map(|r| r[3].clone()).collect();
        let expected: Vec<Cell> = (-2..=2).chain(-2..=2).map(Cell::Int).collect();
        assert_eq!(ms, expected);
    }

    #[test]
    fn bound_state_rows_carry_confirmation() {
        let (report, _) = bound_states(&cfg(CommonArgs {
            flux: Some(vec![0.5]),
            rho: Some(ExtensionSpec::Finite(-1.0)),
            m: Some(vec![0]),
            ..Default::default()
        }));
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0][7], Cell::Bool(true));
    }
}
