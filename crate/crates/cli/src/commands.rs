//! One function per command. Each returns checks; failures become error entries, never panics.

use helixforge_core::grid::{
    colength, compose_path, dim_d, grid_dim, h_cub, h_quad, inner_witness_slot, GridDim,
    GridIndex, HostKind, PathStep,
};
use helixforge_core::helix::{
    validate_cubic_helix, validate_quadratic_helix, AxiomStatus, HelixValidation,
};
use helixforge_core::ibasis::{closed_form_count, count_admissible, dim_m, dim_m_closed, inclusion_exclusion_count};
use helixforge_core::instances::{
    random_blow_down, random_blow_up, random_cubic_host, random_quadratic_host,
};
use helixforge_core::transforms::{
    blow_down, blow_down_data, blow_up, blow_up_data, cremona_factor, invert_blow_down,
    invert_blow_up, section_triviality_check, solve_inverse_blow_down, solve_inverse_blow_up,
    verify_roundtrip, TransformError,
};
use helixforge_core::{Group, Helix, RoundTripStart};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Command, Geometry, Resolved, Window};
use crate::report::{Check, Status};

type Checks = Vec<Check>;

fn rng(cfg: &Resolved) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.config.seed)
}

pub fn run_command(cmd: Command, cfg: &Resolved) -> Checks {
    match cmd {
        Command::VerifyHelix => verify_helix(cfg),
        Command::Blowup => blowup(cfg),
        Command::Blowdown => blowdown(cfg),
        Command::Cremona => cremona(cfg),
        Command::Invert => invert(cfg),
        Command::Roundtrip => roundtrip(cfg),
        Command::Dims => dims(cfg),
        Command::Grid => grid(cfg),
        Command::IbasisCheck => ibasis_check(cfg),
    }
}

fn axiom_checks(prefix: &str, v: &HelixValidation, window: Window) -> Checks {
    v.checks
        .iter()
        .map(|c| {
            let status = match c.status {
                AxiomStatus::Pass => Status::Pass,
                AxiomStatus::Fail => Status::Fail,
                AxiomStatus::Unrealizable => Status::Error,
            };
            Check::new(
                format!("{prefix}.{}", c.name),
                status,
                json!({ "details": c.details, "window": window, "tau_order": v.tau_order }),
            )
        })
        .collect()
}

fn validate_geometry(group: &Group, geometry: &Geometry, window: Window) -> Result<HelixValidation, TransformError> {
    Ok(match geometry {
        Geometry::Quadratic { .. } => {
            let spec = geometry.quadratic().unwrap();
            validate_quadratic_helix(group, &spec.window(group, window.range())?, Some(&spec.psi))?
        }
        Geometry::Cubic { .. } => {
            let spec = geometry.cubic().unwrap();
            validate_cubic_helix(group, &spec.window(group, window.range())?, Some(&spec.alpha))?
        }
    })
}

fn verify_helix(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    let geometry = cfg.geometry();
    let window = cfg.config.windows.helix;
    let mut checks = match validate_geometry(group, &geometry, window) {
        Ok(v) => axiom_checks("axiom", &v, window),
        Err(e) => vec![Check::error("axiom", e)],
    };
    let classes = match geometry {
        Geometry::Quadratic { .. } => geometry.quadratic().unwrap().window(group, window.range()),
        Geometry::Cubic { .. } => geometry.cubic().unwrap().window(group, window.range()),
    };
    checks.push(match classes {
        Ok(w) => Check::new("helix.window", Status::Pass, json!({ "classes": w })),
        Err(e) => Check::error("helix.window", e),
    });
    if cfg.config.random.instances > 0 {
        checks.push(random_axioms(cfg, geometry.host()));
    }
    checks
}

fn random_axioms(cfg: &Resolved, host: HostKind) -> Check {
    let group = cfg.group();
    let window = cfg.config.windows.helix;
    let tries = cfg.config.random.tries as usize;
    let mut rng = rng(cfg);
    let mut failures = Vec::new();
    for k in 0..cfg.config.random.instances {
        let outcome: Result<Option<bool>, TransformError> = (|| {
            Ok(match host {
                HostKind::Quadratic => match random_quadratic_host(group, &mut rng, tries)? {
                    Some(spec) => Some(validate_quadratic_helix(group, &spec.window(group, window.range())?, Some(&spec.psi))?.all_pass()),
                    None => None,
                },
                HostKind::Cubic => match random_cubic_host(group, &mut rng, tries)? {
                    Some(spec) => Some(validate_cubic_helix(group, &spec.window(group, window.range())?, Some(&spec.alpha))?.all_pass()),
                    None => None,
                },
            })
        })();
        match outcome {
            Ok(Some(true)) => {}
            Ok(Some(false)) => failures.push(k),
            Ok(None) => return Check::error("random.axioms", format!("no {host} host with tau != Id found in {tries} tries")),
            Err(e) => return Check::error("random.axioms", e),
        }
    }
    Check::new(
        "random.axioms",
        Status::from_bool(failures.is_empty()),
        json!({ "instances": cfg.config.random.instances, "failed": failures, "seed": cfg.config.seed }),
    )
}

fn blowup(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    let spec = cfg.blow_up_spec().expect("validated blow-up config");
    let window = cfg.config.windows.helix;
    let mut checks = Vec::new();
    match blow_up(group, &spec, window.range()) {
        Ok(out) => {
            checks.push(Check::new("blowup.target", Status::Pass, json!({
                "target": out.target, "alpha_roots": out.alpha_roots, "classes": out.window,
            })));
            match validate_cubic_helix(group, &out.window, Some(&out.target.alpha)) {
                Ok(v) => checks.extend(axiom_checks("blowup.axiom", &v, window)),
                Err(e) => checks.push(Check::error("blowup.axiom", e)),
            }
        }
        Err(e @ TransformError::NoSquareRoot { .. }) => {
            checks.push(Check::error("blowup.target", e));
            let classes = blow_up_data(group, &spec.host, &spec.p, &spec.q)
                .and_then(|d| Ok(d.window(group, window.range())?));
            checks.push(match classes {
                Ok(w) => Check::new("blowup.classes", Status::Pass, json!({ "classes": w })),
                Err(e) => Check::error("blowup.classes", e),
            });
        }
        Err(e) => checks.push(Check::error("blowup.target", e)),
    }
    checks.push(inverse_blow_up_check(group, &spec));
    checks
}

fn inverse_blow_up_check(group: &Group, spec: &helixforge_core::BlowUpSpec) -> Check {
    let outcome = (|| -> Result<Check, TransformError> {
        let inv = invert_blow_up(group, spec)?;
        let tau = spec.host.tau(group)?;
        let brute = solve_inverse_blow_up(group, &spec.host.l.sum, &tau, &spec.p, &spec.q)?;
        Ok(Check::new(
            "inverse.point",
            Status::from_bool(brute == [inv.p_prime]),
            json!({ "p_prime": inv.p_prime, "brute_force": brute }),
        ))
    })();
    outcome.unwrap_or_else(|e| Check::error("inverse.point", e))
}

fn inverse_blow_down_check(group: &Group, spec: &helixforge_core::BlowDownSpec) -> Check {
    let outcome = (|| -> Result<Check, TransformError> {
        let inv = invert_blow_down(group, spec)?;
        let tau = spec.host.tau(group)?;
        let (ps, qs) = solve_inverse_blow_down(group, &spec.host.l0.sum, &spec.host.l1.sum, &tau, &spec.p)?;
        Ok(Check::new(
            "inverse.points",
            Status::from_bool(ps == [inv.p_prime] && qs == [inv.q_prime]),
            json!({
                "p_prime": inv.p_prime, "q_prime": inv.q_prime,
                "brute_force_p": ps, "brute_force_q": qs,
                "orbits_separated": inv.orbits_separated,
            }),
        ))
    })();
    outcome.unwrap_or_else(|e| Check::error("inverse.points", e))
}

fn blowdown(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    let spec = cfg.blow_down_spec().expect("validated blow-down config");
    let window = cfg.config.windows.helix;
    let mut checks = Vec::new();
    match blow_down(group, &spec, window.range()) {
        Ok(out) => {
            checks.push(Check::new("blowdown.target", Status::Pass, json!({
                "target": out.target, "psi_roots": out.psi_roots, "classes": out.window,
            })));
            match validate_quadratic_helix(group, &out.window, Some(&out.target.psi)) {
                Ok(v) => checks.extend(axiom_checks("blowdown.axiom", &v, window)),
                Err(e) => checks.push(Check::error("blowdown.axiom", e)),
            }
        }
        Err(e @ TransformError::NoCubeRoot { .. }) => {
            checks.push(Check::error("blowdown.target", e));
            let classes = blow_down_data(group, &spec.host, &spec.p)
                .and_then(|d| Ok(d.window(group, window.range())?));
            checks.push(match classes {
                Ok(w) => Check::new("blowdown.classes", Status::Pass, json!({ "classes": w })),
                Err(e) => Check::error("blowdown.classes", e),
            });
        }
        Err(e) => checks.push(Check::error("blowdown.target", e)),
    }
    checks.push(inverse_blow_down_check(group, &spec));
    checks
}

fn cremona(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    let spec = cfg.cremona_spec().expect("validated Cremona config");
    match cremona_factor(group, &spec, cfg.config.windows.helix.range()) {
        Ok(f) => {
            let mismatched: Vec<_> = f.comparisons.iter().filter(|c| c.direct != c.composed).collect();
            let gamma1_note = if f.gamma1.is_some() {
                "blow-down of r packaged with the canonical alpha"
            } else {
                "no alpha with 2x = t_tau in this group; the factorization holds at class level"
            };
            vec![
                Check::new("cremona.factorization", Status::from_bool(f.matches), json!({
                    "window": cfg.config.windows.helix,
                    "compared": f.comparisons.len(),
                    "mismatches": mismatched,
                    "first": f.comparisons.first(),
                })),
                Check::new("cremona.steps", Status::Pass, json!({
                    "gamma2": f.gamma2, "gamma1": f.gamma1, "intermediate": f.intermediate,
                    "alpha_roots": f.alpha_roots, "note": gamma1_note,
                })),
            ]
        }
        Err(e) => vec![Check::error("cremona.factorization", e)],
    }
}

fn invert(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    match cfg.start().expect("validated invert config") {
        RoundTripStart::BlowUp(spec) => {
            let spec_check = match invert_blow_up(group, &spec) {
                Ok(inv) => match inv.spec {
                    Some(s) => Check::new("inverse.spec", Status::Pass, json!({ "blow_down": s, "alpha_roots": inv.alpha_roots })),
                    None => Check::new("inverse.spec", Status::Error, json!({
                        "error": "no alpha with 2x = t_tau, so the blow-up target and its inverse blow-down do not exist",
                        "target": inv.target,
                    })),
                },
                Err(e) => Check::error("inverse.spec", e),
            };
            vec![inverse_blow_up_check(group, &spec), spec_check]
        }
        RoundTripStart::BlowDown(spec) => {
            let spec_check = match invert_blow_down(group, &spec) {
                Ok(inv) => match inv.spec {
                    Some(s) => Check::new("inverse.spec", Status::Pass, json!({
                        "blow_up": s, "psi_roots": inv.psi_roots, "orbits_separated": inv.orbits_separated,
                    })),
                    None => Check::new("inverse.spec", Status::Error, json!({
                        "error": "no psi' with 3x = t_tau, so the blow-down target and its inverse blow-up do not exist",
                        "target": inv.target,
                    })),
                },
                Err(e) => Check::error("inverse.spec", e),
            };
            vec![inverse_blow_down_check(group, &spec), spec_check]
        }
    }
}

fn roundtrip_checks(group: &Group, start: &RoundTripStart, helix: Window, triviality: Window) -> Result<(bool, bool, Checks), TransformError> {
    let rep = verify_roundtrip(group, start, helix.range())?;
    let inverse = start.inverse_points(group)?;
    let triv = section_triviality_check(group, start, &inverse, triviality.range())?;
    let first: Vec<_> = triv.failures.iter().take(10).collect();
    let checks = vec![
        Check::new("roundtrip.identity", Status::from_bool(rep.matches), json!({
            "window": helix,
            "inverse_points": rep.inverse_points,
            "recovered_points": rep.recovered_points,
            "mismatches": rep.mismatches,
            "notes": rep.notes,
        })),
        Check::new("roundtrip.triviality", Status::from_bool(triv.passed()), json!({
            "window": triviality,
            "cells_checked": triv.cells_checked,
            "failures": triv.failures.len(),
            "first_failures": first,
        })),
    ];
    Ok((rep.matches, triv.passed(), checks))
}

fn roundtrip(cfg: &Resolved) -> Checks {
    let group = cfg.group();
    let start = cfg.start().expect("validated round-trip config");
    let windows = cfg.config.windows;
    let mut checks = match roundtrip_checks(group, &start, windows.helix, windows.triviality) {
        Ok((_, _, checks)) => checks,
        Err(e) => vec![Check::error("roundtrip.identity", e)],
    };
    if cfg.config.random.instances > 0 {
        checks.push(random_roundtrips(cfg, &start));
    }
    checks
}

fn random_roundtrips(cfg: &Resolved, like: &RoundTripStart) -> Check {
    let group = cfg.group();
    let windows = cfg.config.windows;
    let tries = cfg.config.random.tries as usize;
    let mut rng = rng(cfg);
    let mut failures = Vec::new();
    for k in 0..cfg.config.random.instances {
        let drawn = match like {
            RoundTripStart::BlowUp(_) => random_blow_up(group, &mut rng, tries).map(|s| s.map(RoundTripStart::BlowUp)),
            RoundTripStart::BlowDown(_) => random_blow_down(group, &mut rng, tries).map(|s| s.map(RoundTripStart::BlowDown)),
        };
        let start = match drawn {
            Ok(Some(s)) => s,
            Ok(None) => {
                return Check::error("random.roundtrip", format!("no valid instance found in {tries} tries"))
            }
            Err(e) => return Check::error("random.roundtrip", e),
        };
        match roundtrip_checks(group, &start, windows.helix, windows.triviality) {
            Ok((true, true, _)) => {}
            Ok(_) => failures.push(json!({ "index": k, "start": start })),
            Err(e) => return Check::error("random.roundtrip", e),
        }
    }
    Check::new(
        "random.roundtrip",
        Status::from_bool(failures.is_empty()),
        json!({ "instances": cfg.config.random.instances, "failures": failures, "seed": cfg.config.seed }),
    )
}

fn dims(cfg: &Resolved) -> Checks {
    let w = cfg.config.windows.dims;
    let mut rows = Vec::new();
    let mut ok = true;
    for i in w.range() {
        let (Ok(c), Ok(d)) = (colength(i), dim_d(i)) else {
            return vec![Check::error("dims.identity", format!("negative length {i}"))];
        };
        ok &= d == h_cub(i);
        rows.push(json!({ "i": i, "h": h_quad(i), "colength": c, "h_minus_colength": d, "h_prime": h_cub(i) }));
    }
    vec![Check::new("dims.identity", Status::from_bool(ok), json!({ "range": w, "rows": rows }))]
}

fn grid(cfg: &Resolved) -> Checks {
    let g = cfg.config.grid;
    let host = g.host.expect("host filled during parsing");
    let mut checks = Vec::new();
    let mut unspecified = Vec::new();
    for a in g.a.range() {
        for b in g.b.range() {
            let name = format!("grid.cell[a={a},b={b}]");
            match grid_dim(host, a, b) {
                Ok(GridDim::Exact(v)) => checks.push(Check::new(name, Status::Pass, json!({ "host": host, "a": a, "b": b, "dim": v }))),
                Ok(GridDim::Conjectural(v)) => checks.push(Check::new(name, Status::Conjectural, json!({
                    "host": host, "a": a, "b": b, "dim": v,
                    "note": "expected value; no proven statement covers this offset",
                }))),
                Err(_) => unspecified.push([a, b]),
            }
        }
    }
    checks.push(Check::new("grid.unspecified", Status::Pass, json!({ "host": host, "offsets": unspecified })));

    let slots: Vec<Value> = [PathStep::Delta, PathStep::Gamma]
        .into_iter()
        .map(|step| {
            let (a, b) = step.offset(host);
            json!({ "step": step, "a": a, "b": b, "dim": grid_dim(host, a, b).ok().map(GridDim::value) })
        })
        .collect();
    let slots_ok = slots.iter().all(|s| s["dim"] == json!(1));
    checks.push(Check::new("grid.step_slots", Status::from_bool(slots_ok), json!({ "host": host, "slots": slots })));

    let inner: Vec<Value> = (0..=5).map(|i| json!({ "i": i, "slot": inner_witness_slot(host, i) })).collect();
    let inner_ok = (0..=5).all(|i| inner_witness_slot(host, i) == (2 * i, i));
    checks.push(Check::new("grid.inner_slots", Status::from_bool(inner_ok), json!({ "host": host, "slots": inner })));

    let mut rng = rng(cfg);
    let mut broken = 0u64;
    for _ in 0..g.paths {
        let mut at = GridIndex::new(rng.gen_range(-100..100), rng.gen_range(-100..100));
        for _ in 0..rng.gen_range(0..50) {
            let step = if rng.gen_bool(0.5) { PathStep::Delta } else { PathStep::Gamma };
            let next = compose_path(host, at, &[step]);
            if step.conserved(host, at) != step.conserved(host, next) {
                broken += 1;
            }
            at = next;
        }
    }
    checks.push(Check::new("grid.paths", Status::from_bool(broken == 0), json!({
        "host": host, "paths": g.paths, "violations": broken, "seed": cfg.config.seed,
    })));
    checks
}

fn ibasis_check(cfg: &Resolved) -> Checks {
    let ib = cfg.config.ibasis;
    let (mut counting, mut counting_ok) = (Vec::new(), true);
    let (mut incl, mut incl_ok) = (Vec::new(), true);
    for a in ib.a.range() {
        for b in ib.b.range() {
            let bu = b as u64;
            let brute = count_admissible(a, bu);
            let ie = inclusion_exclusion_count(a, bu);
            incl_ok &= brute == ie;
            incl.push(json!({ "a": a, "b": b, "brute": brute, "inclusion_exclusion": ie, "ok": brute == ie }));
            if let Ok(closed) = closed_form_count(a, bu) {
                let expected = h_cub(2 * a + b);
                let ok = brute == closed && closed == expected;
                counting_ok &= ok;
                counting.push(json!({ "a": a, "b": b, "brute": brute, "closed": closed, "h_prime": expected, "ok": ok }));
            }
        }
    }
    let (mut dimm, mut dimm_ok) = (Vec::new(), true);
    for h in ib.h.range() {
        for n in ib.n.range() {
            let (n, h) = (n as u64, h as u64);
            if let Some(closed) = dim_m_closed(n, h) {
                let brute = dim_m(n, h);
                dimm_ok &= brute == closed;
                dimm.push(json!({ "n": n, "h": h, "brute": brute, "closed": closed, "ok": brute == closed }));
            }
        }
    }
    vec![
        Check::new("ibasis.counting", Status::from_bool(counting_ok), json!({ "a": ib.a, "b": ib.b, "cells": counting })),
        Check::new("ibasis.dim_m", Status::from_bool(dimm_ok), json!({ "n": ib.n, "h": ib.h, "cells": dimm })),
        Check::new("ibasis.inclusion_exclusion", Status::from_bool(incl_ok), json!({ "a": ib.a, "b": ib.b, "cells": incl })),
    ]
}
