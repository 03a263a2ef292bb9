//! `hilbert`: batch front end for Hilbert-metric geometry on convex polygons.
//!
//! Exit codes: 0 success, 1 failed self-check or internal failure, 2 input
//! error, 3 geometric degeneracy.

// Negated comparisons are how NaN results get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod svg;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hilbert_core::protocol::Session;
use hilbert_core::scene::to_json_string;
use hilbert_core::voronoi::cells::pair_of;
use hilbert_core::{
    crossing_events, detect_degenerate_pair, trace_bisector, z_region, BisectorDump, DiagramDump, Error, Point, Scene,
    Segment,
};

const BALL_VERIFY_TOL: f64 = 1e-7;
const BISECTOR_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "hilbert", version, about = "Hilbert-metric geometry on convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert distance between two sites, 12 significant digits.
    Distance {
        #[arg(long)]
        scene: PathBuf,
        from: String,
        to: String,
    },
    /// Hilbert ball of radius R around a site.
    Ball {
        #[arg(long)]
        scene: PathBuf,
        site: String,
        radius: f64,
        /// Re-check every vertex lies at distance R.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisector of two sites with per-sector conic equations.
    Bisector {
        #[arg(long)]
        scene: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Voronoi diagram of all sites in the scene.
    Voronoi {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Compare cells against brute-force nearest sites on an N x N grid.
        #[arg(long, value_name = "N")]
        grid_check: Option<usize>,
    },
    /// Z-region of two sites.
    Zregion {
        #[arg(long)]
        scene: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degenerate alignments met while MOVING travels from (x0,y0) to (x1,y1).
    Events {
        #[arg(long)]
        scene: PathBuf,
        moving: String,
        #[arg(allow_negative_numbers = true)]
        x0: f64,
        #[arg(allow_negative_numbers = true)]
        y0: f64,
        #[arg(allow_negative_numbers = true)]
        x1: f64,
        #[arg(allow_negative_numbers = true)]
        y1: f64,
        other: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the JSON protocol: one request per stdin line, one response per stdout line.
    Serve,
}

struct Failure {
    code: u8,
    message: String,
    /// JSON printed on stdout before failing (degeneracy reports).
    report: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
            report: None,
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: 2,
        message,
        report: None,
    }
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let scene = Scene::from_json(&text)?;
    scene.domain()?;
    Ok(scene)
}

/// Writes `text` and a final newline to stdout; a closed pipe ends the
/// process quietly.
fn print_stdout(text: &str) {
    let mut out = io::stdout().lock();
    let nl = if text.ends_with('\n') { "" } else { "\n" };
    if let Err(e) = write!(out, "{text}{nl}").and_then(|_| out.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print_stdout(text);
            Ok(())
        }
    }
}

/// `v` with `digits` significant digits in plain decimal notation.
fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci.split_once('e').map(|(_, e)| e.parse().unwrap_or(0)).unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn degeneracy_failure(scene: &Scene, a: &str, b: &str) -> Result<Failure, Failure> {
    let (pa, pb) = (scene.site(a)?, scene.site(b)?);
    let domain = scene.domain()?;
    let report = detect_degenerate_pair(&domain, pa, pb)?.map(|d| to_json_string(&d.report(a, b)));
    let [lo, hi] = pair_of(a, b);
    Ok(Failure {
        code: 3,
        message: Error::DegeneratePair(lo, hi).to_string(),
        report,
    })
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Distance { scene, from, to } => {
            let scene = load_scene(&scene)?;
            let (a, b) = (scene.site(&from)?, scene.site(&to)?);
            let h = scene.domain()?.hilbert_distance(a, b)?;
            print_stdout(&significant(h, 12));
        }
        Command::Ball {
            scene,
            site,
            radius,
            verify,
            out,
        } => {
            let scene = load_scene(&scene)?;
            let domain = scene.domain()?;
            let c = scene.site(&site)?;
            let ball = domain.hilbert_ball(c, radius)?;
            emit(&to_json_string(&ball), out.as_deref())?;
            if verify {
                let worst = ball
                    .boundary
                    .vertices()
                    .iter()
                    .map(|&v| (domain.distance_unchecked(c, v) - radius).abs())
                    .fold(0.0, f64::max);
                eprintln!("verify: max |H(center, v) - r| = {worst:e}");
                if !(worst <= BALL_VERIFY_TOL) {
                    return Err(Failure {
                        code: 1,
                        message: format!("ball verification failed: {worst:e} > {BALL_VERIFY_TOL:e}"),
                        report: None,
                    });
                }
            }
        }
        Command::Bisector { scene, a, b, out } => {
            let scene = load_scene(&scene)?;
            let domain = scene.domain()?;
            let (pa, pb) = (scene.site(&a)?, scene.site(&b)?);
            let curve = match trace_bisector(&domain, pa, pb) {
                Ok(c) => c,
                Err(Error::DegeneratePair(..)) => return Err(degeneracy_failure(&scene, &a, &b)?),
                Err(e) => return Err(e.into()),
            };
            let dump = BisectorDump::of(&domain, pair_of(&a, &b), &curve);
            emit(&to_json_string(&dump), out.as_deref())?;
            eprintln!("max equidistance residual: {:e}", dump.max_residual);
            if !(dump.max_residual <= BISECTOR_RESIDUAL_TOL) {
                return Err(Failure {
                    code: 1,
                    message: format!(
                        "bisector residual {:e} exceeds {BISECTOR_RESIDUAL_TOL:e}",
                        dump.max_residual
                    ),
                    report: None,
                });
            }
        }
        Command::Voronoi {
            scene,
            out,
            svg,
            grid_check,
        } => {
            let scene = load_scene(&scene)?;
            let d = scene.build()?;
            emit(&DiagramDump::of(&d).to_json(), out.as_deref())?;
            if let Some(path) = svg {
                fs::write(&path, svg::render(&d))
                    .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
            }
            if let Some(n) = grid_check {
                let (checked, bad) = d.grid_check(n, d.domain().sampling_tol());
                eprintln!("grid check: {checked} points checked, {} mismatches", bad.len());
                if !bad.is_empty() {
                    return Err(Failure {
                        code: 1,
                        message: format!("grid check found {} mismatches, first at {:?}", bad.len(), bad[0]),
                        report: None,
                    });
                }
            }
        }
        Command::Zregion { scene, a, b, out } => {
            let scene = load_scene(&scene)?;
            let (pa, pb) = (scene.site(&a)?, scene.site(&b)?);
            match z_region(&scene.domain()?, pa, pb) {
                Ok(z) => emit(&to_json_string(&z), out.as_deref())?,
                Err(Error::DegeneratePair(..)) => return Err(degeneracy_failure(&scene, &a, &b)?),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Events {
            scene,
            moving,
            x0,
            y0,
            x1,
            y1,
            other,
            out,
        } => {
            let scene = load_scene(&scene)?;
            scene.site(&moving)?;
            let domain = scene.domain()?;
            let target = scene.site(&other)?;
            let (a, b) = (Point::new(x0, y0), Point::new(x1, y1));
            domain.check_interior(a)?;
            domain.check_interior(b)?;
            let events = crossing_events(&domain, Segment::new(a, b)?, target);
            emit(&to_json_string(&events), out.as_deref())?;
        }
        Command::Serve => {
            let mut session = Session::new();
            let stdin = io::stdin();
            let mut stdout = io::stdout().lock();
            for line in stdin.lock().lines() {
                let line = line.map_err(|e| input_error(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let written = writeln!(stdout, "{}", session.handle_line(&line)).and_then(|_| stdout.flush());
                match written {
                    Err(e) if e.kind() == io::ErrorKind::BrokenPipe => break,
                    other => other.map_err(|e| input_error(e.to_string()))?,
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(r) = f.report {
                print_stdout(&r);
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn twelve_digits() {
        assert_eq!(significant(3f64.ln(), 12), "1.09861228867");
        assert_eq!(significant(0.0, 12), "0");
        assert_eq!(significant(12.5, 3), "12.5");
        assert_eq!(significant(0.000123456, 2), "0.00012");
    }
}
