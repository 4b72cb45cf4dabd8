use std::fs::File;

use magstep::criterion::{self, TrialFunctionSpec, Variant};
use magstep::edgeprofile::{self, EdgeGeometry};
use magstep::reduced2d::{self, StepFieldParams};
use magstep::{agmon, fiber1d, zeta, Context, Error};
use serde_json::{json, Value};

use crate::config::{Command, Sweep, Triple, TripleSweep};

/// Tabular result plus its structured form.
pub struct Output {
    /// Summary lines written as comments above the CSV table.
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Output {
    fn table(columns: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value) -> Self {
        Self { notes: Vec::new(), columns, rows, json }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn s(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(s).unwrap_or_default()
}

fn params(t: &Triple) -> Result<StepFieldParams> {
    Ok(StepFieldParams::new(t.alpha, t.gamma, t.a)?)
}

fn triples(t: &TripleSweep) -> Vec<(f64, f64, f64)> {
    let (al, ga, a) = (t.alpha.values(), t.gamma.values(), t.a.values());
    al.iter().flat_map(|&x| ga.iter().flat_map(|&y| a.iter().map(move |&z| (x, y, z))).collect::<Vec<_>>()).collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn run(ctx: &Context, command: &Command) -> Result<Output> {
    match command {
        Command::Degennes => {
            let t = fiber1d::theta0(ctx)?;
            Ok(Output::table(
                vec!["theta0", "xi_min", "theta0_coarse", "theta0_richardson", "mesh_error"],
                vec![vec![s(t.value), s(t.xi_min), s(t.coarse_value), s(t.richardson), s(t.mesh_error)]],
                to_json(&t),
            ))
        }
        Command::Mu { a, xi } => {
            let mut points = Vec::new();
            for &a in &a.values() {
                let curve = fiber1d::sample_curve(ctx, a, &xi.values())?;
                points.extend(curve.samples.iter().map(|&(x, m)| (a, x, m)));
            }
            let rows = points.iter().map(|&(a, x, m)| vec![s(a), s(x), s(m)]).collect();
            let json = json!(points.iter().map(|&(a, x, m)| json!({"a": a, "xi": x, "mu": m})).collect::<Vec<_>>());
            Ok(Output::table(vec!["a", "xi", "mu"], rows, json))
        }
        Command::Beta { a } => {
            let betas = a.values().iter().map(|&a| fiber1d::beta(ctx, a)).collect::<magstep::Result<Vec<_>>>()?;
            let rows = betas
                .iter()
                .map(|b| vec![s(b.a), s(b.value), opt(b.xi_star), s(b.scan_min), b.certified.to_string()])
                .collect();
            Ok(Output::table(vec!["a", "beta", "xi_star", "scan_min", "certified"], rows, to_json(&betas)))
        }
        Command::Zeta { nu } => {
            let values = zeta::zeta_profile(ctx, &nu.values())?;
            let rows = values
                .iter()
                .map(|z| vec![s(z.nu), s(z.value), s(z.fine), s(z.coarse), s(z.mesh_error), s(z.wall_mass)])
                .collect();
            Ok(Output::table(vec!["nu", "zeta", "fine", "coarse", "mesh_error", "wall_mass"], rows, to_json(&values)))
        }
        Command::Band { triple, tau } => {
            let p = params(triple)?;
            let (range, n) = match tau {
                Some(Sweep { lo, hi, n }) => (Some((*lo, *hi)), *n),
                None => (None, reduced2d::DEFAULT_SAMPLES),
            };
            let b = reduced2d::band_profile(ctx, &p, range, n)?;
            let rows = b
                .samples
                .iter()
                .map(|r| {
                    vec![s(r.tau), s(r.sigma), s(r.sigma_ess), r.below_essential.to_string(), s(r.margin), s(r.wall_mass)]
                })
                .collect();
            let mut out = Output::table(
                vec!["tau", "sigma", "sigma_ess", "below_essential", "margin", "wall_mass"],
                rows,
                to_json(&b),
            );
            out.notes = vec![
                format!("lambda = {}", b.lambda),
                format!("tau_star = {}", opt(b.tau_star)),
                format!("lambda_bound = {}", b.lambda_bound),
                format!("verdict = {:?}", b.verdict),
            ];
            Ok(out)
        }
        Command::Lambda { triples: t } => {
            let mut rows = Vec::new();
            let mut profiles = Vec::new();
            for (al, ga, a) in triples(t) {
                let b = reduced2d::lambda(ctx, &StepFieldParams::new(al, ga, a)?)?;
                rows.push(vec![
                    s(al),
                    s(ga),
                    s(a),
                    s(b.lambda),
                    opt(b.tau_star),
                    s(b.lambda_bound),
                    s(b.margin),
                    format!("{:?}", b.verdict),
                ]);
                profiles.push(b);
            }
            Ok(Output::table(
                vec!["alpha", "gamma", "a", "lambda", "tau_star", "lambda_bound", "margin", "verdict"],
                rows,
                to_json(&profiles),
            ))
        }
        Command::Essential { triple, tau } => {
            let p = params(triple)?;
            let points = tau
                .values()
                .iter()
                .map(|&t| Ok((t, reduced2d::sigma_ess(ctx, &p, t)?)))
                .collect::<Result<Vec<_>>>()?;
            let rows = points.iter().map(|&(t, e)| vec![s(t), s(e)]).collect();
            let json = json!(points.iter().map(|&(t, e)| json!({"tau": t, "sigma_ess": e})).collect::<Vec<_>>());
            Ok(Output::table(vec!["tau", "sigma_ess"], rows, json))
        }
        Command::Region { variant, triples: t } => {
            let cells =
                criterion::region_scan(ctx, &t.alpha.values(), &t.gamma.values(), &t.a.values(), Variant::from(*variant))?;
            let rows = cells
                .iter()
                .map(|c| {
                    let r = &c.report;
                    vec![s(c.alpha), s(c.gamma), s(c.a), s(r.A), s(r.Lambda), s(r.P_min), r.admissible.to_string()]
                })
                .collect();
            let mut out =
                Output::table(vec!["alpha", "gamma", "a", "A", "Lambda", "P_min", "admissible"], rows, to_json(&cells));
            out.notes = vec![format!("admissible cells = {}", cells.iter().filter(|c| c.report.admissible).count())];
            Ok(out)
        }
        Command::TrialCheck { triple, omega, lambda, variant } => {
            let p = params(triple)?;
            let lambda = match lambda {
                Some(l) => *l,
                None => criterion::lambda_bound(ctx, &p, Variant::from(*variant))?,
            };
            let a_coef = criterion::coefficient_a(&p);
            let rows = omega
                .values()
                .iter()
                .map(|&w| {
                    let spec = TrialFunctionSpec::optimal(&p, w)?;
                    let j = criterion::trial_energy(&p, &spec, lambda);
                    let pv = criterion::polynomial(a_coef, lambda, 1.0 / w);
                    Ok(vec![s(w), s(spec.c1), s(spec.c2), s(spec.c3), s(spec.c4), s(j), s(pv), s((j - pv).abs())])
                })
                .collect::<Result<Vec<_>>>()?;
            let json = json!({
                "A": a_coef,
                "Lambda": lambda,
                "rows": rows.iter().map(|r| json!({"omega": r[0].parse::<f64>().ok(), "J": r[5].parse::<f64>().ok(), "P": r[6].parse::<f64>().ok()})).collect::<Vec<_>>(),
            });
            let mut out = Output::table(vec!["omega", "c1", "c2", "c3", "c4", "J", "P", "abs_diff"], rows, json);
            out.notes = vec![format!("A = {a_coef}"), format!("Lambda = {lambda}")];
            Ok(out)
        }
        Command::Agmon { triple, tau, eta, eta_fraction } => {
            let p = params(triple)?;
            let tau = match tau {
                Some(t) => *t,
                None => reduced2d::lambda(ctx, &p)?
                    .tau_star
                    .ok_or_else(|| CliError::Input("band infimum not attained in the window; pass --tau".into()))?,
            };
            let state = reduced2d::eigenfunction(ctx, &p, tau)?;
            let eta = eta.unwrap_or(eta_fraction * (state.sigma_ess - state.sigma).max(0.0).sqrt());
            let r = agmon::decay_report(&state, eta)?;
            let rows = r.shells.iter().map(|sh| vec![s(sh.radius), s(sh.mass)]).collect();
            let mut out = Output::table(vec!["radius", "shell_mass"], rows, to_json(&r));
            out.notes = vec![
                format!("tau = {tau}"),
                format!("eta = {}", r.eta),
                format!("eta_bound = {}", r.eta_bound),
                format!("eta_fit = {}", r.eta_fit),
                format!("r_squared = {}", r.r_squared),
                format!("weighted_energy = {}", r.weighted_energy),
            ];
            Ok(out)
        }
        Command::EdgeProfile { a, geometry, ball_cut, b } => {
            let geometry = match (geometry, ball_cut) {
                (Some(path), _) => {
                    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    if path.extension().is_some_and(|x| x == "json") {
                        let g: EdgeGeometry = serde_json::from_reader(file).map_err(|e| CliError::Input(e.to_string()))?;
                        EdgeGeometry::new(g.samples, g.closed)?
                    } else {
                        EdgeGeometry::from_csv(file, false)?
                    }
                }
                (None, Some(n)) => EdgeGeometry::ball_cut(*n)?,
                (None, None) => return Err(CliError::Input("pass --geometry or --ball-cut".into())),
            };
            let report = edgeprofile::profile(ctx, &geometry, *a)?;
            let rows = report
                .lambda_profile
                .iter()
                .map(|q| {
                    vec![s(q.s), s(q.alpha), s(q.gamma), s(q.lambda), s(q.margin), format!("{:?}", q.verdict), q.in_d.to_string()]
                })
                .collect();
            let mut notes = vec![
                format!("threshold = {}", report.threshold),
                format!("lambda_min = {}", report.lambda_min),
                format!("assumption_holds = {}", report.assumption_holds),
                format!("D = {:?}", report.D_set),
            ];
            let mut json = to_json(&report);
            if let Some(b) = b {
                let e = edgeprofile::ground_energy_prediction(&report, *b)?;
                notes.push(format!("ground_energy({b}) = {e}"));
                json["ground_energy"] = json!({"b": b, "leading": e});
            }
            let mut out =
                Output::table(vec!["s", "alpha", "gamma", "lambda", "margin", "verdict", "in_d"], rows, json);
            out.notes = notes;
            Ok(out)
        }
    }
}
