use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rootval::faults::{self, Fault};
use rootval::gmo_sets::{comes_from_m, Chambers, GAOrthSet};
use rootval::group_hn::{
    cartan, fiber_x_mu, retraction_rb, verify_lin_hn, BlockLevi, BorelChoice, Orientation,
};
use rootval::hodge_newton::{
    hn_hypotheses, hodge_point_minors, hodge_point_snf, mazur_check, newton_point, splits,
    MatrixLattice, Subspace,
};
use rootval::linalg::LaurentMatrix;
use rootval::root_system::{RootFunction, RootSystem};
use rootval::springer::{
    fibers_experiment, r_tilde, springer_member, springer_member_partial_sums, ApartmentPoint,
    SlN,
};
use rootval::valuation_functions::{
    check_rprime, is_non_archimedean, is_root_valuation_function, is_symmetric, r_m,
};
use rootval::valuation_lattices::{
    big_lattice, check_rvl_conditions, condition_one, condition_two, is_rvl_via_normalizer,
    normalizer_exponents, RvlSpec,
};
use rootval::verify::{self, density_experiment, VerifyConfig, CRITERIA, DENSITY_COEFF_BOUND};

use crate::json::{self as j, field, opt_field};
use crate::{read_input, Cli, Command, Failure, GmoOp, GrpOp, HnOp, Outcome, RvfOp, RvlOp, SprOp};

type Res = Result<Outcome, Failure>;

fn outcome(ok: bool, report: Value) -> Res {
    Ok(Outcome { ok, report })
}

pub fn dispatch(cli: &Cli) -> Res {
    let fault = match &cli.opts.inject_fault {
        Some(s) => Some(
            Fault::parse(s)
                .ok_or_else(|| Failure::Input(format!("field `--inject-fault`: unknown fault {:?}", s)))?,
        ),
        None => None,
    };
    let _guard = fault.map(faults::inject);
    let o = &cli.opts;
    let mut res = match &cli.cmd {
        Command::Rvl { op } => match op {
            RvlOp::Check { input } => rvl_check(cli, &read_input(input.as_ref())?),
            RvlOp::Big { input } => rvl_big(cli, &read_input(input.as_ref())?),
        },
        Command::Rvf { op } => match op {
            RvfOp::Validate { input } => rvf_validate(cli, &read_input(input.as_ref())?),
            RvfOp::Rm { input } => rvf_rm(cli, &read_input(input.as_ref())?),
        },
        Command::Hn { op } => match op {
            HnOp::Newton { input } => hn_newton(&read_input(input.as_ref())?),
            HnOp::Hodge { input } => hn_hodge(&read_input(input.as_ref())?),
            HnOp::Mazur { input } => hn_mazur(&read_input(input.as_ref())?),
            HnOp::Decompose { input } => hn_decompose(&read_input(input.as_ref())?),
        },
        Command::Grp { op } => match op {
            GrpOp::Cartan { input } => grp_cartan(&read_input(input.as_ref())?),
            GrpOp::Rb { input } => grp_rb(&read_input(input.as_ref())?),
            GrpOp::Fiber { input } => grp_fiber(cli, &read_input(input.as_ref())?),
            GrpOp::VerifyHn { input } => grp_verify_hn(cli, &read_input(input.as_ref())?),
        },
        Command::Spr { op } => match op {
            SprOp::Member { input } => spr_member(&read_input(input.as_ref())?),
            SprOp::Fibers { input } => spr_fibers(cli, &read_input(input.as_ref())?),
            SprOp::ConjExp { input } => spr_conj_exp(cli, &read_input(input.as_ref())?),
        },
        Command::Gmo { op } => match op {
            GmoOp::Check { input } => gmo_check(cli, &read_input(input.as_ref())?),
        },
        Command::Verify { suite } => verify_cmd(cli, suite),
    }?;
    if let Value::Object(m) = &mut res.report {
        m.insert("seed".into(), json!(o.seed));
        m.insert("ok".into(), json!(res.ok));
        if let Some(f) = &o.inject_fault {
            m.insert("injected_fault".into(), json!(f));
        }
    }
    Ok(res)
}

// ---------------------------------------------------------------- rvl / rvf

fn system(cli: &Cli, input: &Value) -> Result<RootSystem, Failure> {
    Ok(j::root_system(input, cli.opts.ty.as_deref(), cli.opts.rank)?)
}

fn rvf(rs: &RootSystem, input: &Value) -> Result<RootFunction, Failure> {
    let r = j::root_function(rs, field(input, "r")?, "r")?;
    if !is_root_valuation_function(rs, &r) {
        return Err(Failure::Input("field `r`: not a root valuation function".into()));
    }
    Ok(r)
}

fn rvl_check(cli: &Cli, input: &Value) -> Res {
    let rs = system(cli, input)?;
    let r = rvf(&rs, input)?;
    let lambda = j::root_function(&rs, field(input, "lambda")?, "lambda")?;
    let spec = RvlSpec::new(r, lambda);
    let direct = check_rvl_conditions(&rs, &spec);
    let via = is_rvl_via_normalizer(&rs, &spec);
    outcome(
        direct == via,
        json!({
            "command": "rvl check",
            "system": rs.name(),
            "k": j::out_root_function(&rs, &spec.k),
            "condition_one": condition_one(&rs, &spec),
            "condition_two": condition_two(&rs, &spec),
            "normalizer_exponents": j::out_root_function(&rs, &normalizer_exponents(&rs, &spec)),
            "is_rvl_conditions": direct,
            "is_rvl_normalizer": via,
            "agree": direct == via,
        }),
    )
}

fn rvl_big(cli: &Cli, input: &Value) -> Res {
    let rs = system(cli, input)?;
    let r = rvf(&rs, input)?;
    let spec = big_lattice(&rs, &r);
    let (c1, c2) = (condition_one(&rs, &spec), condition_two(&rs, &spec));
    let m = r_m(&rs, &r);
    let excess = (0..rs.num_roots())
        .map(|a| spec.k[a] + spec.k[rs.neg(a)] - (m[a] - r[a]))
        .max()
        .unwrap_or(0);
    outcome(
        c1 && c2 && excess <= 1,
        json!({
            "command": "rvl big",
            "system": rs.name(),
            "lambda": j::out_root_function(&rs, &spec.lambda),
            "k": j::out_root_function(&rs, &spec.k),
            "condition_one": c1,
            "condition_two": c2,
            "max_excess_over_rm_minus_r": excess,
        }),
    )
}

fn rvf_validate(cli: &Cli, input: &Value) -> Res {
    let rs = system(cli, input)?;
    let r = j::root_function(&rs, field(input, "r")?, "r")?;
    let is_rvf = is_root_valuation_function(&rs, &r);
    let mut report = json!({
        "command": "rvf validate",
        "system": rs.name(),
        "symmetric": is_symmetric(&rs, &r),
        "root_valuation_function": is_rvf,
        "non_archimedean": is_non_archimedean(&rs, &r),
    });
    let mut ok = is_rvf;
    if is_rvf {
        let rep = check_rprime(&rs, &r)?;
        ok = rep.passed();
        report["r_prime"] = j::out_root_function(&rs, &RootFunction::new(rep.r_prime.clone()));
        report["r_prime_thresholds"] = serde_json::to_value(&rep.thresholds).expect("serializes");
    }
    outcome(ok, report)
}

fn rvf_rm(cli: &Cli, input: &Value) -> Res {
    let rs = system(cli, input)?;
    let r = j::root_function(&rs, field(input, "r")?, "r")?;
    if !is_symmetric(&rs, &r) {
        return Err(Failure::Input("field `r`: not symmetric".into()));
    }
    outcome(
        true,
        json!({
            "command": "rvf rm",
            "system": rs.name(),
            "r_m": j::out_root_function(&rs, &r_m(&rs, &r)),
        }),
    )
}

// ---------------------------------------------------------------- hn

fn lattice(input: &Value, d: usize) -> Result<MatrixLattice, Failure> {
    match opt_field(input, "lattice") {
        None => Ok(MatrixLattice::standard(d)),
        Some(v) => {
            let b = j::square(v, "lattice")?;
            if b.rows() != d {
                return Err(Failure::Input(format!("field `lattice`: expected a {0} x {0} basis", d)));
            }
            MatrixLattice::new(b).map_err(|e| Failure::Input(format!("field `lattice`: {}", e)))
        }
    }
}

fn endomorphism(input: &Value) -> Result<LaurentMatrix, Failure> {
    Ok(j::square(field(input, "T")?, "T")?)
}

fn hn_newton(input: &Value) -> Res {
    let t = endomorphism(input)?;
    outcome(true, json!({ "command": "hn newton", "newton": j::out_tuple(&newton_point(&t)) }))
}

fn hn_hodge(input: &Value) -> Res {
    let t = endomorphism(input)?;
    let l = lattice(input, t.rows())?;
    let minors = hodge_point_minors(&t, &l)?;
    let snf = hodge_point_snf(&t, &l)?;
    outcome(
        minors == snf,
        json!({
            "command": "hn hodge",
            "hodge_minors": j::out_tuple(&minors),
            "hodge_snf": j::out_tuple(&snf),
            "agree": minors == snf,
        }),
    )
}

fn hn_mazur(input: &Value) -> Res {
    let t = endomorphism(input)?;
    let l = lattice(input, t.rows())?;
    let holds = mazur_check(&t, &l)?;
    outcome(
        holds,
        json!({
            "command": "hn mazur",
            "newton": j::out_tuple(&newton_point(&t)),
            "hodge": j::out_tuple(&hodge_point_snf(&t, &l)?),
            "holds": holds,
        }),
    )
}

fn subspace(input: &Value, name: &str) -> Result<Subspace, Failure> {
    let cols = j::vectors(field(input, name)?, name)?;
    Subspace::from_columns(&cols).map_err(|e| Failure::Input(format!("field `{}`: {}", name, e)))
}

fn hn_decompose(input: &Value) -> Res {
    let t = endomorphism(input)?;
    let l = lattice(input, t.rows())?;
    let u = subspace(input, "U")?;
    let w = subspace(input, "W")?;
    let hyp = hn_hypotheses(&t, &l, &u, &w);
    let split = splits(&l, &u, &w)?;
    outcome(
        hyp.is_err() || split,
        json!({
            "command": "hn decompose",
            "hypotheses_hold": hyp.is_ok(),
            "hypothesis_failure": hyp.err().map(|e| e.to_string()),
            "splits": split,
        }),
    )
}

// ---------------------------------------------------------------- grp

fn group_element(input: &Value, name: &str) -> Result<LaurentMatrix, Failure> {
    let g = j::square(field(input, name)?, name)?;
    if g.det().is_zero() {
        return Err(Failure::Input(format!("field `{}`: matrix is singular", name)));
    }
    Ok(g)
}

fn coweight(input: &Value, name: &str, n: usize) -> Result<Vec<i64>, Failure> {
    let mu = j::ints(field(input, name)?, name)?;
    if mu.len() != n {
        return Err(Failure::Input(format!("field `{}`: expected {} entries", name, n)));
    }
    Ok(mu)
}

fn window(cli: &Cli, input: &Value, n: usize) -> Result<i64, Failure> {
    if let Some(w) = cli.opts.window {
        return Ok(w);
    }
    match opt_field(input, "window") {
        Some(v) => Ok(j::int(v, "window")?),
        None => Ok(if n == 2 { 2 } else { 1 }),
    }
}

fn grp_cartan(input: &Value) -> Res {
    let g = group_element(input, "g")?;
    outcome(true, json!({ "command": "grp cartan", "cartan": cartan(&g)? }))
}

fn grp_rb(input: &Value) -> Res {
    let g = group_element(input, "g")?;
    let n = g.rows();
    let orientation = match opt_field(input, "orientation").map(|v| v.as_str()) {
        None | Some(Some("lower")) => Orientation::Lower,
        Some(Some("upper")) => Orientation::Upper,
        _ => return Err(Failure::Input("field `orientation`: expected \"lower\" or \"upper\"".into())),
    };
    let mut borel = BorelChoice::standard(n, orientation);
    if let Some(p) = opt_field(input, "perm") {
        let perm = j::usizes(p, "perm")?;
        let mut sorted = perm.clone();
        sorted.sort();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Failure::Input(format!("field `perm`: not a permutation of 0..{}", n)));
        }
        borel.perm = perm;
    }
    outcome(
        true,
        json!({
            "command": "grp rb",
            "orientation": orientation,
            "perm": borel.perm,
            "r_b": retraction_rb(&g, &borel)?,
        }),
    )
}

fn grp_fiber(cli: &Cli, input: &Value) -> Res {
    let gamma = group_element(input, "gamma")?;
    let n = gamma.rows();
    let mu = coweight(input, "mu", n)?;
    let w = window(cli, input, n)?;
    let fiber = fiber_x_mu(&gamma, &mu, w)?;
    outcome(
        true,
        json!({
            "command": "grp fiber",
            "window": w,
            "size": fiber.len(),
            "lattices": fiber.iter().map(|l| j::out_matrix(l.basis())).collect::<Vec<_>>(),
        }),
    )
}

fn grp_verify_hn(cli: &Cli, input: &Value) -> Res {
    let gamma = group_element(input, "gamma")?;
    let n = gamma.rows();
    let mu = coweight(input, "mu", n)?;
    let blocks = j::usizes(field(input, "blocks")?, "blocks")?;
    let m = BlockLevi::new(blocks).map_err(|e| Failure::Input(format!("field `blocks`: {}", e)))?;
    if m.n() != n {
        return Err(Failure::Input(format!("field `blocks`: sizes must sum to {}", n)));
    }
    if !m.is_block_diagonal(&gamma) {
        return Err(Failure::Input("field `gamma`: not block diagonal for `blocks`".into()));
    }
    let w = window(cli, input, n)?;
    let rep = verify_lin_hn(&gamma, &mu, &m, w)?;
    let mut report = serde_json::to_value(&rep).expect("serializes");
    report["command"] = json!("grp verify-hn");
    outcome(rep.passed(), report)
}

// ---------------------------------------------------------------- spr

fn sl(input: &Value) -> Result<SlN, Failure> {
    let n = j::int(field(input, "n")?, "n")?;
    let n = usize::try_from(n).map_err(|_| Failure::Input("field `n`: negative".into()))?;
    SlN::new(n).map_err(|e| Failure::Input(format!("field `n`: {}", e)))
}

fn point(sl: &SlN, input: &Value) -> Result<ApartmentPoint, Failure> {
    match opt_field(input, "x") {
        None => Ok(sl.barycenter()),
        Some(v) => {
            let x = j::rationals(v, "x")?;
            if x.len() != sl.rank() {
                return Err(Failure::Input(format!("field `x`: expected {} coordinates", sl.rank())));
            }
            Ok(ApartmentPoint(x))
        }
    }
}

fn spr_member(input: &Value) -> Res {
    let sl = sl(input)?;
    let rs = sl.root_system();
    let u = sl
        .from_matrix(&j::square(field(input, "u")?, "u")?)
        .map_err(|e| Failure::Input(format!("field `u`: {}", e)))?;
    let r = rvf(rs, input)?;
    let l = match opt_field(input, "lattice") {
        Some(_) => lattice(input, sl.dim())?,
        None => sl.parahoric_lattice(&point(&sl, input)?)?.to_matrix_lattice(),
    };
    let member = springer_member(&sl, &u, &l, &r)?;
    let partial = springer_member_partial_sums(&sl, &u, &l, &r)?;
    outcome(
        member == partial,
        json!({
            "command": "spr member",
            "hodge": j::out_tuple(&hodge_point_snf(&sl.ad_matrix(&u), &l)?),
            "r_tilde": j::out_tuple(&r_tilde(rs, &r)),
            "member": member,
            "member_partial_sums": partial,
        }),
    )
}

fn spr_fibers(cli: &Cli, input: &Value) -> Res {
    let sl = sl(input)?;
    let rs = sl.root_system();
    let r = rvf(rs, input)?;
    let x = point(&sl, input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.opts.seed);
    let u = match opt_field(input, "u") {
        Some(v) => sl
            .from_matrix(&j::square(v, "u")?)
            .map_err(|e| Failure::Input(format!("field `u`: {}", e)))?,
        None => sl.stratum_sample(&r, &mut rng)?,
    };
    let trials = cli.opts.trials.unwrap_or(50);
    let rep = fibers_experiment(&sl, &r, &x, &u, cli.opts.bound, trials, cli.opts.seed)?;
    outcome(
        rep.passed(),
        json!({
            "command": "spr fibers",
            "u": j::out_matrix(&sl.to_matrix(&u)),
            "r_prime": j::out_root_function(rs, &RootFunction::new(rep.r_prime.clone())),
            "bound": rep.bound,
            "apartment_trials": rep.apartment.len(),
            "apartment_members": rep.apartment_members(),
            "termwise_equal": rep.apartment.iter().filter(|t| t.termwise_equal).count(),
            "companion_failures": rep.companion_failures(),
            "off_apartment_trials": rep.off_apartment.len(),
            "off_apartment_nonmembers": rep.off_nonmembers(),
            "uncertified_perturbations": rep.uncertified,
        }),
    )
}

fn spr_conj_exp(cli: &Cli, input: &Value) -> Res {
    let sl = sl(input)?;
    let rs = sl.root_system();
    let r = match opt_field(input, "r") {
        Some(_) => rvf(rs, input)?,
        None => RootFunction::constant(rs, 1),
    };
    let bound = match opt_field(input, "coeff_bound") {
        Some(v) => j::int(v, "coeff_bound")?,
        None => DENSITY_COEFF_BOUND,
    };
    if bound < 1 {
        return Err(Failure::Input("field `coeff_bound`: must be positive".into()));
    }
    let samples = cli.opts.trials.unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.opts.seed);
    let rep = density_experiment(&sl, &r, samples, bound, &mut rng)?;
    let mut report = serde_json::to_value(&rep).expect("serializes");
    report["command"] = json!("spr conj-exp");
    report["share"] = json!(format!("{:.4}", rep.share()));
    outcome(rep.passed(), report)
}

// ---------------------------------------------------------------- gmo

fn gmo_check(cli: &Cli, input: &Value) -> Res {
    let rs = system(cli, input)?;
    let levi = j::root_set(&rs, field(input, "levi")?, "levi")?;
    if !rs.is_q_closed(levi) {
        return Err(Failure::Input("field `levi`: not Q-closed".into()));
    }
    let ch = Chambers::new(&rs)?;
    let obj = field(input, "points")?
        .as_object()
        .ok_or_else(|| Failure::Input("field `points`: expected an object keyed by words".into()))?;
    let mut points = vec![None; ch.len()];
    for (word, v) in obj {
        let at = format!("points.{}", word);
        let letters: Vec<usize> = if word.trim().is_empty() {
            Vec::new()
        } else {
            word.split(',')
                .map(|s| s.trim().parse::<usize>().ok().filter(|&i| (1..=rs.rank()).contains(&i)).map(|i| i - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| Failure::Input(format!("field `{}`: not a word in 1..={}", at, rs.rank())))?
        };
        let k = ch
            .index_of_word(&letters)
            .ok_or_else(|| Failure::Input(format!("field `{}`: not a word in the simple reflections", at)))?;
        let x = j::rationals(v, &at)?;
        if x.len() != rs.ambient_dim() {
            return Err(Failure::Input(format!("field `{}`: expected {} coordinates", at, rs.ambient_dim())));
        }
        points[k] = Some(x);
    }
    let points = points
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure::Input(format!("field `points`: all {} chambers need a point", ch.len())))?;
    let v = comes_from_m(&ch, &GAOrthSet { points }, levi)?;
    outcome(
        v.consistent(),
        json!({
            "command": "gmo check",
            "system": rs.name(),
            "levi": j::out_root_set(&rs, levi),
            "conditions": v.conditions,
            "opposite_pairs": v.opposite_pairs,
            "consistent": v.consistent(),
        }),
    )
}

// ---------------------------------------------------------------- verify

fn verify_cmd(cli: &Cli, suite: &str) -> Res {
    let ids: Vec<u8> = if suite == "all" {
        CRITERIA.iter().map(|(i, _)| *i).collect()
    } else {
        vec![verify::criterion_id(suite)
            .ok_or_else(|| Failure::Input(format!("field `suite`: unknown suite {:?}", suite)))?]
    };
    let cfg = VerifyConfig::new(cli.opts.seed);
    let mut reports = Vec::new();
    for id in ids {
        reports.push(verify::run(id, &cfg)?);
    }
    let ok = reports.iter().all(|r| r.passed);
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    outcome(
        ok,
        json!({
            "command": "verify",
            "suite": suite,
            "failed": failed,
            "criteria": reports,
        }),
    )
}
