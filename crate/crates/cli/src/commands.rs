//! Subcommand implementations. Each handler renders a complete artifact
//! string and hands it to the output sink, so identical configurations give
//! byte-identical files.

use num_complex::Complex;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptosc_core::classical::{extract_frequencies, ClassicalSystem};
use ptosc_core::operator::{OscillatorParams, QuadraticHamiltonian};
use ptosc_core::spectrum::{AdjointMatrix, GroundStateParams, ModeFrequencies, PhaseRegion};
use ptosc_core::{Error, Result};

use crate::args::{
    AdjointArgs, ClassicalArgs, ModelArgs, OutputFormat, PhaseDiagramArgs, SpectrumArgs,
};
use crate::output::{emit, fmt_num, Json};

type C64 = Complex<f64>;

impl ModelArgs {
    pub fn params(&self) -> OscillatorParams<f64> {
        OscillatorParams::new(self.omega, self.gamma, self.epsilon)
    }
}

fn validate_params(p: OscillatorParams<f64>) -> Result<()> {
    if !p.omega.is_finite() || p.omega <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "omega must be positive, got {}",
            p.omega
        )));
    }
    if p.gamma < 0.0 || p.epsilon < 0.0 {
        return Err(Error::InvalidArgument(
            "gamma and epsilon must be non-negative".into(),
        ));
    }
    Ok(())
}

/// Ground-state parameter a = sqrt(xi_1); total in epsilon, unlike the full
/// parameter set which needs epsilon != 0 for b and c.
fn ground_state_a(p: OscillatorParams<f64>) -> C64 {
    let w2 = p.omega * p.omega;
    let s = Complex::new(w2 * w2 - p.epsilon * p.epsilon, 0.0).sqrt();
    ((Complex::new(w2 - 2.0 * p.gamma * p.gamma, 0.0) - s) / 2.0).sqrt()
}

struct SpectralHeader {
    lambda1: C64,
    lambda2: C64,
    a: C64,
    delta: C64,
    phase: PhaseRegion,
    degenerate: bool,
}

fn spectral_header(p: OscillatorParams<f64>, tol: f64) -> SpectralHeader {
    let freqs = ModeFrequencies::closed_form(p, tol);
    let (a, delta) = match GroundStateParams::solve(p) {
        Ok(gs) => (gs.a(), gs.delta()),
        // epsilon = 0: a stays defined, Delta via the split identity
        Err(_) => (ground_state_a(p), (freqs.lambda1() + freqs.lambda2()) / 2.0),
    };
    SpectralHeader {
        lambda1: freqs.lambda1(),
        lambda2: freqs.lambda2(),
        a,
        delta,
        phase: PhaseRegion::classify(p, tol),
        degenerate: freqs.is_degenerate(),
    }
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let params = args.model.params();
    validate_params(params)?;
    if !args.tol.is_finite() || args.tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let header = spectral_header(params, args.tol);
    let energy = |n: u32, k: u32| -> C64 {
        f64::from(n) * header.lambda1 - f64::from(k) * header.lambda2 + header.a
    };

    let content = match args.format {
        OutputFormat::Csv => {
            let mut s = String::new();
            let mut meta: Vec<(String, String)> = vec![
                ("a_im".into(), fmt_num(header.a.im)),
                ("a_re".into(), fmt_num(header.a.re)),
                ("delta_im".into(), fmt_num(header.delta.im)),
                ("delta_re".into(), fmt_num(header.delta.re)),
                ("epsilon".into(), fmt_num(params.epsilon)),
                ("gamma".into(), fmt_num(params.gamma)),
                ("lambda1_im".into(), fmt_num(header.lambda1.im)),
                ("lambda1_re".into(), fmt_num(header.lambda1.re)),
                ("lambda2_im".into(), fmt_num(header.lambda2.im)),
                ("lambda2_re".into(), fmt_num(header.lambda2.re)),
                ("nmax".into(), args.nmax.to_string()),
                ("omega".into(), fmt_num(params.omega)),
                ("phase".into(), header.phase.to_string()),
            ];
            if header.degenerate {
                meta.push((
                    "warning".into(),
                    "degenerate mode frequencies (lambda1 = lambda2)".into(),
                ));
            }
            meta.sort();
            for (k, v) in meta {
                s.push_str(&format!("# {k}={v}\n"));
            }
            s.push_str("n,k,e_re,e_im\n");
            for n in 0..=args.nmax {
                for k in 0..=args.nmax {
                    let e = energy(n, k);
                    s.push_str(&format!("{n},{k},{},{}\n", fmt_num(e.re), fmt_num(e.im)));
                }
            }
            s
        }
        OutputFormat::Json => {
            let mut rows = Vec::new();
            for n in 0..=args.nmax {
                for k in 0..=args.nmax {
                    let e = energy(n, k);
                    rows.push(Json::obj([
                        ("e_im", Json::Num(e.im)),
                        ("e_re", Json::Num(e.re)),
                        ("k", Json::Int(i64::from(k))),
                        ("n", Json::Int(i64::from(n))),
                    ]));
                }
            }
            let mut obj = vec![
                ("a", Json::complex(header.a)),
                ("delta", Json::complex(header.delta)),
                ("epsilon", Json::Num(params.epsilon)),
                ("gamma", Json::Num(params.gamma)),
                ("lambda1", Json::complex(header.lambda1)),
                ("lambda2", Json::complex(header.lambda2)),
                ("nmax", Json::Int(i64::from(args.nmax))),
                ("omega", Json::Num(params.omega)),
                ("phase", Json::Str(header.phase.to_string())),
                ("rows", Json::Arr(rows)),
            ];
            if header.degenerate {
                obj.push((
                    "warning",
                    Json::Str("degenerate mode frequencies (lambda1 = lambda2)".into()),
                ));
            }
            Json::obj(obj).render()
        }
    };
    if header.degenerate && args.out.is_some() {
        eprintln!("warning: degenerate mode frequencies (lambda1 = lambda2)");
    }
    emit(args.out.as_deref(), &content).map_err(io_error)
}

pub fn cmd_phase_diagram(args: &PhaseDiagramArgs) -> Result<()> {
    if !args.omega.is_finite() || args.omega <= 0.0 {
        return Err(Error::InvalidArgument("omega must be positive".into()));
    }
    if !args.tol.is_finite() || args.tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if args.grid_gamma.min < 0.0 || args.grid_epsilon.min < 0.0 {
        return Err(Error::InvalidArgument(
            "grid ranges must be non-negative".into(),
        ));
    }

    // row order: gamma outer, epsilon fastest
    let mut rows: Vec<(f64, f64, PhaseRegion, C64, C64)> = Vec::new();
    for gamma in args.grid_gamma.values() {
        for epsilon in args.grid_epsilon.values() {
            let p = OscillatorParams::new(args.omega, gamma, epsilon);
            let freqs = ModeFrequencies::closed_form(p, args.tol);
            let region = PhaseRegion::classify(p, args.tol);
            rows.push((gamma, epsilon, region, freqs.lambda1(), freqs.lambda2()));
        }
    }

    let content = match args.format {
        OutputFormat::Csv => {
            let mut s =
                String::from("gamma,epsilon,region,lambda1_re,lambda1_im,lambda2_re,lambda2_im\n");
            for (gamma, epsilon, region, l1, l2) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_num(*gamma),
                    fmt_num(*epsilon),
                    region,
                    fmt_num(l1.re),
                    fmt_num(l1.im),
                    fmt_num(l2.re),
                    fmt_num(l2.im),
                ));
            }
            s
        }
        OutputFormat::Json => {
            let json_rows: Vec<Json> = rows
                .iter()
                .map(|(gamma, epsilon, region, l1, l2)| {
                    Json::obj([
                        ("epsilon", Json::Num(*epsilon)),
                        ("gamma", Json::Num(*gamma)),
                        ("lambda1", Json::complex(*l1)),
                        ("lambda2", Json::complex(*l2)),
                        ("region", Json::Str(region.to_string())),
                    ])
                })
                .collect();
            Json::obj([
                ("omega", Json::Num(args.omega)),
                ("rows", Json::Arr(json_rows)),
                ("tol", Json::Num(args.tol)),
            ])
            .render()
        }
    };
    emit(args.out.as_deref(), &content).map_err(io_error)
}

/// Initial condition with components uniform in [-1, 1), from a counter
/// based generator so runs are reproducible from the seed alone.
pub fn seeded_initial_state(seed: u64, dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| {
            let u = rng.next_u64() >> 11; // 53 random bits
            (u as f64 / (1u64 << 52) as f64) - 1.0
        })
        .collect()
}

pub fn cmd_classical(args: &ClassicalArgs) -> Result<()> {
    let params = args.model.params();
    validate_params(params)?;
    if !(args.dt.is_finite() && args.dt > 0.0 && args.t_final.is_finite() && args.t_final > 0.0) {
        return Err(Error::InvalidArgument(
            "dt and t-final must be positive".into(),
        ));
    }
    let n_steps = (args.t_final / args.dt).round() as usize;
    if n_steps < 8 || !n_steps.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "t-final/dt must give a power-of-two sample count >= 8 for frequency \
             extraction, got {n_steps}"
        )));
    }

    let h = QuadraticHamiltonian::coupled_gain_loss(params);
    let sys = ClassicalSystem::from_hamiltonian(&h)?;
    let z0 = seeded_initial_state(args.seed, sys.dim());
    let traj = sys.integrate(&z0, args.dt, n_steps)?;

    // trajectory CSV
    let mut csv = String::new();
    let mut meta: Vec<(String, String)> = vec![
        ("dt".into(), fmt_num(args.dt)),
        ("epsilon".into(), fmt_num(params.epsilon)),
        ("gamma".into(), fmt_num(params.gamma)),
        ("n_steps".into(), n_steps.to_string()),
        ("omega".into(), fmt_num(params.omega)),
        ("seed".into(), args.seed.to_string()),
        ("diverged".into(), traj.diverged().to_string()),
    ];
    for (i, v) in z0.iter().enumerate() {
        meta.push((format!("z0_{i}"), fmt_num(*v)));
    }
    meta.sort();
    for (k, v) in meta {
        csv.push_str(&format!("# {k}={v}\n"));
    }
    csv.push_str("t,x,y,px,py,H\n");
    for i in 0..traj.len() {
        let z = traj.state(i);
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_num(traj.time(i)),
            fmt_num(z[0]),
            fmt_num(z[1]),
            fmt_num(z[2]),
            fmt_num(z[3]),
            fmt_num(sys.energy(z)),
        ));
    }
    emit(Some(&args.out), &csv).map_err(io_error)?;

    // frequency report JSON on stdout
    let freqs = ModeFrequencies::closed_form(params, 1e-9);
    let mut report = vec![
        ("diverged", Json::Bool(traj.diverged())),
        ("dt", Json::Num(args.dt)),
        ("epsilon", Json::Num(params.epsilon)),
        ("gamma", Json::Num(params.gamma)),
        ("lambda1", Json::complex(freqs.lambda1())),
        ("lambda2", Json::complex(freqs.lambda2())),
        ("n_steps", Json::Int(n_steps as i64)),
        ("omega", Json::Num(params.omega)),
        ("seed", Json::Int(args.seed as i64)),
        ("z0", Json::Arr(z0.iter().map(|v| Json::Num(*v)).collect())),
    ];
    if traj.diverged() {
        report.push(("peaks", Json::Arr(Vec::new())));
    } else {
        let peaks = extract_frequencies(&traj)?;
        report.push((
            "peaks",
            Json::Arr(
                peaks
                    .iter()
                    .map(|p| {
                        Json::obj([
                            ("amplitude", Json::Num(p.amplitude)),
                            ("frequency", Json::Num(p.frequency)),
                        ])
                    })
                    .collect(),
            ),
        ));
        report.push(("energy_drift", Json::Num(sys.energy_drift(&traj))));
    }
    emit(None, &Json::obj(report).render()).map_err(io_error)
}

pub fn cmd_adjoint(args: &AdjointArgs) -> Result<()> {
    let params = args.model.params();
    validate_params(params)?;
    if !args.tol.is_finite() || args.tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let h = QuadraticHamiltonian::coupled_gain_loss(params);
    let adjoint = AdjointMatrix::from_hamiltonian(&h);
    let freqs = ModeFrequencies::from_matrix(&adjoint, args.tol)?;

    let m = adjoint.matrix();
    let entries: Vec<Json> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| Json::complex(m[(i, j)]))
        .collect();
    let roots: Vec<Json> = freqs
        .all_roots()
        .iter()
        .map(|z| Json::complex(*z))
        .collect();

    let mut obj = vec![
        ("dim", Json::Int(adjoint.dim() as i64)),
        ("eigenvalues", Json::Arr(roots)),
        ("epsilon", Json::Num(params.epsilon)),
        ("gamma", Json::Num(params.gamma)),
        ("lambda1", Json::complex(freqs.lambda1())),
        ("lambda1_real", Json::Bool(freqs.is_real(0))),
        ("lambda2", Json::complex(freqs.lambda2())),
        ("lambda2_real", Json::Bool(freqs.is_real(1))),
        ("matrix", Json::Arr(entries)),
        ("omega", Json::Num(params.omega)),
        (
            "phase",
            Json::Str(PhaseRegion::classify(params, args.tol).to_string()),
        ),
    ];
    if args.dump {
        let a = h.coefficients();
        let a_entries: Vec<Json> = (0..a.nrows())
            .flat_map(|i| (0..a.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| Json::complex(a[(i, j)]))
            .collect();
        obj.push((
            "hamiltonian",
            Json::obj([
                ("a", Json::Arr(a_entries)),
                ("c0", Json::complex(h.ordering_constant())),
                ("n_dof", Json::Int(h.n_dof() as i64)),
                (
                    "params",
                    Json::obj([
                        ("epsilon", Json::Num(params.epsilon)),
                        ("gamma", Json::Num(params.gamma)),
                        ("omega", Json::Num(params.omega)),
                    ]),
                ),
            ]),
        ));
    }
    emit(args.out.as_deref(), &Json::obj(obj).render()).map_err(io_error)
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cannot write output: {e}"))
}
