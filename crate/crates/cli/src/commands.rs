//! Subcommand bodies. Each returns the process exit code, or an error that
//! `main` maps to one.

use std::fs::File;
use std::path::Path;
use std::sync::Arc;

use hamcouple::brackets::verify::{sample_states, suite_domain, verify as verify_bracket, VerifyOptions};
use hamcouple::brackets::{self, Bracket};
use hamcouple::config::{ComposeSpec, RunConfig};
use hamcouple::dynamics::{l2_error, maxwell_planewave, maxwellian, run, write_outputs};
use hamcouple::functional::random_state;
use hamcouple::grid::{Grid3, PhaseGrid};
use hamcouple::liealg::{identity_tolerance, matched_pair_algebra};
use hamcouple::ocrr::parity_study_with;
use hamcouple::reduction::{self, verify_poisson_map};
use hamcouple::state::{Constants, Domain, Parity, State};
use hamcouple::{Error, Result};

use crate::{EXIT_COMPATIBILITY, EXIT_FAIL};

/// Tolerance for a composed bracket against the catalog entry it should equal.
const COMPARE_TOL: f64 = 1e-12;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        EXIT_FAIL
    }
}

fn constants_for(names: &[&str]) -> Constants {
    if names.iter().any(|n| brackets::species_needed(n) > 1) {
        Constants::binary()
    } else {
        Constants::default()
    }
}

fn create(dir: &Path, file: &str) -> Result<File> {
    std::fs::create_dir_all(dir)?;
    Ok(File::create(dir.join(file))?)
}

pub fn verify(bracket: Option<&str>, all: bool, grid: usize, seed: u64) -> Result<u8> {
    let names: Vec<&str> = if all {
        brackets::CATALOG.to_vec()
    } else {
        vec![bracket.expect("clap requires --bracket without --all")]
    };
    // Resolve every name before doing any work.
    let list = names.iter().map(|n| brackets::by_name(n)).collect::<Result<Vec<_>>>()?;
    if grid < 2 {
        return Err(Error::Config(format!("--grid must be at least 2, got {grid}")));
    }
    let opts = VerifyOptions {
        grid,
        seed,
        ..Default::default()
    };
    let mut ok = true;
    for (name, b) in names.iter().zip(&list) {
        let report = verify_bracket(b.as_ref(), &constants_for(&[name]), &opts)?;
        println!("{report}\n");
        ok &= report.passed();
    }
    if all {
        println!("all brackets: {}", verdict(ok));
    }
    Ok(status(ok))
}

pub fn simulate(config: &Path, out: &Path) -> Result<u8> {
    let cfg = RunConfig::from_file(config)?;
    let res = run(&cfg)?;
    println!(
        "bracket {}, hamiltonian {}, {} steps of dt {:.6e}",
        cfg.bracket,
        cfg.hamiltonian_name(),
        cfg.steps,
        res.dt
    );
    let s = &res.series;
    if let Some(d) = s.drift("energy", f64::MIN_POSITIVE) {
        println!("energy drift (relative) {d:.3e}");
    }
    for c in s.columns.iter().skip(3) {
        if let Some(name) = c.strip_prefix("monitor:") {
            // Normalized by max(|C(0)|, 1): several Casimirs start at zero.
            println!("casimir {name} drift {:.3e}", s.drift(c, 1.0).unwrap_or(0.0));
        } else if let Some(name) = c.strip_prefix("constraint:") {
            println!("constraint {name} max {:.3e}", s.max_of(c).unwrap_or(0.0));
        }
    }
    if cfg.initial.kind == "maxwell_planewave" && cfg.bracket == "em" {
        let t = res.dt * cfg.steps as f64;
        let exact = maxwell_planewave(res.final_state.domain(), &cfg.constants, cfg.initial.mode, cfg.initial.amplitude, t)?;
        println!("plane-wave L2 error vs analytic {:.3e}", l2_error(&res.final_state, &exact)?);
    }
    write_outputs(&res, out)?;
    let png = out.join("series.png");
    crate::plot::render(s, &png).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    println!("wrote {}, {} and {}", out.join("series.csv").display(), out.join("final.snap").display(), png.display());
    Ok(0)
}

/// `max |A - B| / (1 + max |A|)` of the two brackets' vector fields on
/// shared random states and covectors.
fn compare_residual(composed: &dyn Bracket, catalog: &dyn Bracket, k: &Constants, opts: &VerifyOptions) -> Result<f64> {
    let (cs, ks) = (composed.schema(), catalog.schema());
    let mut a: Vec<&str> = cs.names();
    let mut b: Vec<&str> = ks.names();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::Schema(format!("composed {cs} and `{}` {ks} differ", catalog.name())));
    }
    let dom = suite_domain(catalog, opts)?;
    let mut worst: f64 = 0.0;
    for (i, x) in sample_states(catalog, &dom, 3, opts.seed)?.iter().enumerate() {
        let dh = random_state(&dom, &ks, opts.seed + 100 + i as u64, 1, 1.0)?;
        let direct = catalog.apply(k, x, &dh)?;
        let built = composed
            .apply(k, &x.project_onto(&cs)?, &dh.project_onto(&cs)?)?
            .project_onto(&ks)?;
        let mut d = direct.clone();
        d.axpy(-1.0, &built)?;
        worst = worst.max(d.max_abs() / (1.0 + direct.max_abs()));
    }
    Ok(worst)
}

pub fn compose(path: &Path) -> Result<u8> {
    let spec = ComposeSpec::from_file(path)?;
    if let Some(mp) = spec.matched_pair()? {
        let rep = mp.compatibility();
        println!("matched pair: dim g = {}, dim k = {}", mp.g.dim(), mp.k.dim());
        println!("{:<22} {:>12} {:>10}  worst index", "condition", "residual", "tol");
        for (name, (r, at)) in [
            ("first compatibility", rep.first),
            ("second compatibility", rep.second),
            ("left representation", rep.left_rep),
            ("right representation", rep.right_rep),
        ] {
            println!("{name:<22} {r:>12.3e} {:>10.1e}  {at:?}", rep.tolerance);
        }
        if !rep.passed() {
            let (name, r, at) = rep.worst();
            eprintln!("compatibility FAIL: {name} residual {r:.3e} at index tuple {at:?}");
            return Ok(EXIT_COMPATIBILITY);
        }
        let alg = matched_pair_algebra(&mp)?;
        let tol = identity_tolerance(alg.dim(), alg.constants().iter().fold(0.0, |m, v| m.max(v.abs())));
        let (j, jat) = alg.jacobi_residual();
        let (s, _) = alg.antisymmetry_residual();
        println!("jacobi {j:.3e} (tol {tol:.1e}) at {jat:?}: {}", verdict(j <= tol));
        println!("antisymmetry {s:.3e}: {}", verdict(s <= tol));
        let ok = j <= tol && s <= tol;
        println!("overall {}", verdict(ok));
        return Ok(status(ok));
    }
    let expr = spec.bracket.as_ref().expect("validated: bracket or matched pair");
    let b = expr.build()?;
    println!("composed bracket {} on {}", b.name(), b.schema());
    let opts = VerifyOptions {
        grid: spec.grid.unwrap_or(6),
        seed: spec.seed.unwrap_or(0),
        ..Default::default()
    };
    let mut ok = true;
    if let Some(name) = &spec.compare {
        let cat = brackets::by_name(name)?;
        let r = compare_residual(b.as_ref(), cat.as_ref(), &spec.constants, &opts)?;
        println!("equivalence to {name}: residual {r:.3e} (tol {COMPARE_TOL:.0e}) {}", verdict(r <= COMPARE_TOL));
        ok &= r <= COMPARE_TOL;
    }
    let report = verify_bracket(b.as_ref(), &spec.constants, &opts)?;
    println!("{report}");
    ok &= report.passed();
    Ok(status(ok))
}

#[allow(clippy::too_many_arguments)]
pub fn ocrr(
    bracket: &str,
    grid: usize,
    states: usize,
    seed: u64,
    tol: f64,
    parities: &[(String, Parity)],
    out: &Path,
) -> Result<u8> {
    let b = brackets::by_name(bracket)?;
    let overrides: Vec<(&str, Parity)> = parities.iter().map(|(n, p)| (n.as_str(), *p)).collect();
    let report = parity_study_with(b.as_ref(), &constants_for(&[bracket]), grid, states, seed, &overrides, tol)?;
    println!("{report}");
    report.write_csv(create(out, &format!("ocrr_{bracket}.csv"))?)?;
    println!("wrote {}", out.join(format!("ocrr_{bracket}.csv")).display());
    Ok(status(report.passed()))
}

fn project_states(fine: &dyn Bracket, grid: usize, seed: u64, k: &Constants) -> Result<Vec<State>> {
    let schema = fine.schema();
    if brackets::is_kinetic(fine) {
        // Resolved Maxwellians: 64 momentum points across ten thermal widths.
        let dom = Domain::with_phase(PhaseGrid::new(Grid3::new([8, 1, 1], [1.0; 3])?, [64, 1, 1], [10.0; 3])?);
        let m = k.species(0)?.m;
        (0..3)
            .map(|i| maxwellian(&dom, &schema, m, 1.0, [0.1 * i as f64, 0.0, 0.0], 0.2))
            .collect()
    } else {
        let dom = Domain::spatial(Grid3::new([grid; 3], [1.0, 1.2, 0.9])?);
        (0..3).map(|i| random_state(&dom, &schema, seed + i, 1, 0.3)).collect()
    }
}

pub fn project(map: &str, fine: &str, coarse: &str, grid: usize, seed: u64, out: &Path) -> Result<u8> {
    let k = constants_for(&[fine, coarse]);
    let (fb, cb) = (brackets::by_name(fine)?, brackets::by_name(coarse)?);
    let pm: Arc<dyn reduction::ProjectionMap> = reduction::by_name(map, &k, Some(fb.schema()))?;
    let states = project_states(fb.as_ref(), grid, seed, &k)?;
    let rep = verify_poisson_map(pm.as_ref(), fb.as_ref(), cb.as_ref(), &k, &states, seed)?;
    println!("{rep}");
    let mut w = create(out, &format!("project_{map}.csv"))?;
    use std::io::Write;
    writeln!(w, "map,fine,coarse,samples,max_relative,tolerance,boundary_mass,verdict")?;
    writeln!(
        w,
        "{},{},{},{},{:.6e},{:.1e},{},{}",
        rep.map,
        rep.fine,
        rep.coarse,
        rep.samples,
        rep.max_relative,
        rep.tolerance,
        rep.boundary_mass.map(|b| format!("{b:.6e}")).unwrap_or_default(),
        verdict(rep.passed())
    )?;
    println!("wrote {}", out.join(format!("project_{map}.csv")).display());
    Ok(status(rep.passed()))
}
