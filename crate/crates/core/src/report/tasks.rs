use std::collections::BTreeMap;
use std::time::Instant;

use super::{Section, Verdict, VerificationReport};
use crate::finite_field::FieldSpec;
use crate::groth_ring::{
    count_series, interpolate_count_polynomial, nonnormal_cubics, verify_record, Interpolation, MotivicClass,
};
use crate::iso_engine::{
    certify_projective_iso, evaluation_consistency, ga_examples, involution_deg8, involution_deg8_cubic,
    open_question_instance, run_mutations, run_pipeline, verify_ga_action, CertifyOptions, Family, IsoError, MapFile,
    PolynomialMap,
};
use crate::poly::{parse_polynomial, Polynomial};
use crate::quadrics::{verify_against_bruteforce, QuadricKind, QuadricNormalForm};
use crate::scalar::Rational;
use crate::varieties::{
    max_multiplicity_locus, multiplicity_along_line, multiplicity_along_line_fq, multiplicity_at, Hypersurface,
    ParamLine,
};

fn fields(qs: &[u64]) -> Result<Vec<FieldSpec>, String> {
    qs.iter().map(|&q| FieldSpec::from_order(q).map_err(|e| e.to_string())).collect()
}

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Brute-force counts of every normal form against the closed forms, and the
/// separation of forms by regular counts (odd `q`) or by singular points (even `q`).
pub fn quadric_sections(nmax: u32, qs: &[u64], bound: u64) -> Vec<Section> {
    let mut counts = Section::new("Quadric point counts");
    let mut separation = Section::new("Quadric forms separated by counts");
    let fs = match fields(qs) {
        Ok(f) => f,
        Err(e) => {
            counts.push(Verdict::new("field list", false, e));
            return vec![counts];
        }
    };
    let forms = QuadricNormalForm::all_up_to(nmax);
    let mut observed: BTreeMap<u64, Vec<(QuadricNormalForm, u64, u64)>> = BTreeMap::new();
    for form in &forms {
        match verify_against_bruteforce(form, &fs, bound) {
            Ok(checks) => {
                for c in checks {
                    counts.push(Verdict::new(
                        format!("{} over F_{}", c.form, c.q),
                        c.agrees,
                        format!(
                            "total {}/{}, regular {}/{}, singular {}/{} (observed/predicted)",
                            c.observed.total,
                            c.predicted.predicted_total,
                            c.observed.regular,
                            c.predicted.predicted_regular,
                            c.observed.singular,
                            c.predicted.predicted_singular
                        ),
                    ));
                    observed.entry(c.q).or_default().push((c.form, c.observed.regular, c.observed.singular));
                }
            }
            Err(e) => counts.push(Verdict::new(format!("{form}"), false, e.to_string())),
        }
    }
    for (q, rows) in &observed {
        if q % 2 == 1 {
            let mut seen: BTreeMap<u64, Vec<String>> = BTreeMap::new();
            for (form, reg, _) in rows {
                seen.entry(*reg).or_default().push(form.to_string());
            }
            let clashes: Vec<String> = seen.values().filter(|v| v.len() > 1).map(|v| v.join(" = ")).collect();
            separation.push(Verdict::new(
                format!("regular counts pairwise distinct over F_{q}"),
                clashes.is_empty(),
                if clashes.is_empty() {
                    format!("{} forms", rows.len())
                } else {
                    format!("collisions: {}", clashes.join(", "))
                },
            ));
        } else {
            let bad: Vec<String> = rows
                .iter()
                .filter(|(form, _, sing)| match form.kind {
                    QuadricKind::X => *sing != 0,
                    QuadricKind::Y => *sing == 0,
                })
                .map(|(form, _, sing)| format!("{form}: {sing} singular"))
                .collect();
            separation.push(Verdict::new(
                format!("X-forms smooth and Y-forms singular over F_{q}"),
                bad.is_empty(),
                bad.join(", "),
            ));
        }
    }
    vec![counts, separation]
}

#[derive(Debug, Clone)]
pub struct FamilyRun {
    pub family: Family,
    pub degrees: Vec<u32>,
    pub stabilize_to: Option<usize>,
    /// Degrees for which stabilization is run.
    pub stabilize_degrees: Vec<u32>,
    pub eval_primes: Vec<u64>,
    pub mutations: usize,
    pub seed: u64,
    pub certify: CertifyOptions,
}

/// Construction and certification for each degree, followed by optional
/// stabilization, pointwise evaluation and mutation sections.
pub fn family_sections(run: &FamilyRun) -> Vec<Section> {
    let fam = run.family;
    let mut main = Section::new(format!("Complement isomorphisms: {fam} family"));
    let mut stab = Section::new(format!("Stabilization: {fam} family"));
    let mut eval = Section::new(format!("Pointwise evaluation: {fam} family"));
    let mut muts = Section::new(format!("Mutation robustness: {fam} family"));
    for &d in &run.degrees {
        let data = match fam.data::<Rational>(d) {
            Ok(x) => x,
            Err(e) => {
                main.push(Verdict::new(format!("d={d}: family member"), false, e.to_string()));
                continue;
            }
        };
        let target = run.stabilize_to.filter(|_| run.stabilize_degrees.contains(&d));
        let rep = run_pipeline(&data, &run.certify, target);
        for c in &rep.checks {
            let v = Verdict::new(format!("d={d}: {}", c.name), c.passed, c.detail.clone());
            if c.name.starts_with("stabilized") {
                stab.push(v);
            } else {
                main.push(v);
            }
        }
        let Some(cert) = rep.certificate.as_ref().filter(|_| !rep.aborted || target.is_some()) else {
            let why = rep.failure.clone().unwrap_or_default();
            main.push(if rep.aborted {
                Verdict::aborted(format!("d={d}: certificate over Q"), why)
            } else {
                Verdict::new(format!("d={d}: certificate over Q"), false, why)
            });
            continue;
        };
        main.push(Verdict::new(
            format!("d={d}: certificate over Q"),
            true,
            format!(
                "l = {}, l' = {}, s = {}, mu = {}, lambda = {}, route {:?}",
                cert.ell, cert.ell_prime, cert.s_exponent, cert.mu, cert.lambda, cert.route
            ),
        ));
        if rep.aborted {
            if let Some(failure) = &rep.failure {
                stab.push(Verdict::aborted(format!("d={d}: stabilization"), failure.clone()));
            }
        }
        for &p in &run.eval_primes {
            let name = format!("d={d}: g(forward) = mu, backward(forward) = lambda x on f = 1 over F_{p}");
            if d as u64 % p == 0 {
                eval.push(Verdict::skipped(name, format!("{p} divides d")));
                continue;
            }
            match FieldSpec::prime(p).map_err(|e| e.to_string()).and_then(|f| {
                evaluation_consistency(cert, &f, crate::varieties::DEFAULT_POINT_BOUND).map_err(|e| e.to_string())
            }) {
                Ok(er) => eval.push(Verdict::new(
                    name,
                    er.passed(),
                    format!("{} points, {} + {} mismatches", er.points, er.g_mismatches, er.inverse_mismatches),
                )),
                Err(e) => eval.push(Verdict::new(name, false, e)),
            }
        }
        if run.mutations > 0 {
            let outcomes = run_mutations(&data, cert, run.mutations, run.seed.wrapping_add(d as u64), &run.certify);
            let accepted: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.rejected)
                .map(|o| format!("{:?} {} by {}", o.mutation.target, o.mutation.term, o.mutation.delta))
                .collect();
            let mut stages: BTreeMap<&str, usize> = BTreeMap::new();
            for o in outcomes.iter().filter(|o| o.rejected) {
                *stages.entry(o.stage.as_str()).or_default() += 1;
            }
            let detail = if accepted.is_empty() {
                stages.iter().map(|(k, v)| format!("{v} x {k}")).collect::<Vec<_>>().join("; ")
            } else {
                format!("accepted: {}", accepted.join(", "))
            };
            muts.push(Verdict::new(
                format!("d={d}: {}/{} perturbations rejected", outcomes.len() - accepted.len(), outcomes.len()),
                accepted.is_empty() && outcomes.len() == run.mutations,
                detail,
            ));
        }
    }
    [main, stab, eval, muts].into_iter().filter(|s| !s.verdicts.is_empty()).collect()
}

pub fn involution_section(options: &CertifyOptions) -> Section {
    let mut s = Section::new("Degree-8 involution of the nodal cubic complement");
    let f = involution_deg8_cubic::<Rational>();
    let m = involution_deg8::<Rational>();
    match certify_projective_iso(&f, &f, &m, &m, options) {
        Ok(cert) => {
            for c in &cert.checks {
                s.push(Verdict::new(c.name.clone(), c.passed, c.detail.clone()));
            }
            s.push(Verdict::new(
                "Phi_i(Phi) = lambda f^21 x_i",
                cert.s_exponent == 21,
                format!("s = {}, lambda = {}", cert.s_exponent, cert.lambda),
            ));
        }
        Err(fail) => {
            for c in &fail.checks {
                s.push(Verdict::new(c.name.clone(), c.passed, c.detail.clone()));
            }
            s.push(match fail.reason {
                IsoError::ResourceBound(why) => Verdict::aborted("Phi_i(Phi) = lambda f^21 x_i", why),
                other => Verdict::new("Phi_i(Phi) = lambda f^21 x_i", false, other.to_string()),
            });
        }
    }
    s
}

/// The cone `x^{d-1} y + z^d` has a point of multiplicity `d`; the surface
/// `x0^{d-1} y + z^d + d x0^{d-2} x1^2` has none, neither along its singular line
/// nor anywhere over small prime fields. Maximal-multiplicity loci are linear.
pub fn multiplicity_section(primes: &[u64], bound: u64) -> Section {
    let mut s = Section::new("Multiplicity certificates");
    let hyp = |text: &str, vars: &[&str]| {
        Hypersurface::projective(parse_polynomial::<Rational>(text, vars).expect("valid")).expect("homogeneous")
    };
    let cone_vars = ["x", "y", "z", "w"];
    for d in [4u32, 5] {
        let f = hyp(&format!("x^{}*y + z^{d}", d - 1), &cone_vars);
        match multiplicity_at(&f, &[r(0), r(0), r(0), r(1)]) {
            Ok(m) => s.push(Verdict::new(
                format!("x^{}*y + z^{d}: multiplicity d at [0:0:0:1]", d - 1),
                m.multiplicity == d,
                format!("multiplicity {}", m.multiplicity),
            )),
            Err(e) => {
                s.push(Verdict::new(format!("x^{}*y + z^{d}: multiplicity at [0:0:0:1]", d - 1), false, e.to_string()))
            }
        }
    }
    let line_vars = ["x0", "x1", "y", "z"];
    let line = ParamLine::through(&[r(0), r(0), r(1), r(0)], &[r(0), r(1), r(0), r(0)]);
    for d in [3u32, 4] {
        let g = hyp(&format!("x0^{}*y + z^{d} + {d}*x0^{}*x1^2", d - 1, d - 2), &line_vars);
        let text = g.defining().display_with(&line_vars);
        match multiplicity_along_line(&g, &line) {
            Ok(scan) => s.push(Verdict::new(
                format!("{text}: no multiplicity-d point on x0 = z = 0 over Q"),
                scan.max_multiplicity() < d && !scan.unresolved_roots,
                format!("generic {}, max {}", scan.generic_multiplicity, scan.max_multiplicity()),
            )),
            Err(e) => s.push(Verdict::new(format!("{text}: line scan over Q"), false, e.to_string())),
        }
        for &p in primes {
            let name = format!("{text}: no multiplicity-d point over F_{p}");
            if d as u64 % p == 0 {
                s.push(Verdict::skipped(name, format!("{p} divides d")));
                continue;
            }
            let field = FieldSpec::prime(p).expect("prime");
            let scan = multiplicity_along_line_fq(&g, &line, &field);
            let locus = max_multiplicity_locus(&g, &field, bound);
            match (scan, locus) {
                (Ok(scan), Ok(locus)) => s.push(Verdict::new(
                    name,
                    scan.max_multiplicity() < d && locus.points.is_empty(),
                    format!("line max {}, multiplicity-d points {}", scan.max_multiplicity(), locus.points.len()),
                )),
                (Err(e), _) | (_, Err(e)) => s.push(Verdict::new(name, false, e.to_string())),
            }
        }
    }
    let f5 = FieldSpec::prime(5).expect("prime");
    let surfaces = [
        ("x^3*y + z^4".to_string(), &cone_vars),
        ("x^4*y + z^5".to_string(), &cone_vars),
        ("x0^2*y + z^3 + 3*x0*x1^2".to_string(), &line_vars),
        ("x0^3*y + z^4 + 4*x0^2*x1^2".to_string(), &line_vars),
    ];
    for (text, vars) in surfaces {
        let name = format!("{text}: multiplicity-d locus over F_5 is linear");
        match max_multiplicity_locus(&hyp(&text, vars.as_slice()), &f5, bound) {
            Ok(l) => s.push(Verdict::new(name, l.linear, format!("{} points", l.points.len()))),
            Err(e) => s.push(Verdict::new(name, false, e.to_string())),
        }
    }
    s
}

const NONNORMAL_N: [u64; 6] = [0, 1, 1, 1, 2, 2];

/// Totals `q^2 + n_i q + 1` and the `x != 0 / x = 0` split of each non-normal cubic.
pub fn nonnormal_cubic_section(qs: &[u64], bound: u64) -> Section {
    let mut s = Section::new("Non-normal cubic surfaces");
    let fs = match fields(qs) {
        Ok(f) => f,
        Err(e) => {
            s.push(Verdict::new("field list", false, e));
            return s;
        }
    };
    for (i, rec) in nonnormal_cubics().iter().enumerate() {
        let label = format!("f{}", i + 1);
        let Some(h) = rec.hypersurface() else {
            s.push(Verdict::new(format!("{label}: equation"), false, "record has no equation"));
            continue;
        };
        match verify_record(rec, &h, &fs, bound) {
            Ok(checks) => {
                for c in checks {
                    let expected = c.q * c.q + NONNORMAL_N[i] * c.q + 1;
                    let chart = c
                        .chart
                        .as_ref()
                        .map(|ch| {
                            format!(
                                "x != 0: {}/{}, x = 0: {}/{}",
                                ch.observed_nonzero, ch.predicted_nonzero, ch.observed_zero, ch.predicted_zero
                            )
                        })
                        .unwrap_or_default();
                    s.push(Verdict::new(
                        format!("{label} over F_{}: total q^2 + {} q + 1 and chart split", c.q, NONNORMAL_N[i]),
                        c.count_consistent && c.observed == expected,
                        format!("total {}/{expected}; {chart}", c.observed),
                    ));
                }
            }
            Err(e) => s.push(Verdict::new(format!("{label}: record check"), false, e.to_string())),
        }
    }
    s
}

fn interpolation_verdict(
    s: &mut Section,
    name: String,
    h: &Hypersurface<Rational>,
    fs: &[FieldSpec],
    degree_bound: usize,
    bound: u64,
    expected: &MotivicClass,
) {
    let result = count_series(h, fs, bound).and_then(|c| interpolate_count_polynomial(&c, degree_bound));
    match result {
        Ok(Interpolation::Polynomial(c)) => {
            s.push(Verdict::new(name, &c == expected, format!("class {c}, chi {}", c.chi())));
        }
        Ok(Interpolation::NonPolynomialDetected { q, .. }) => {
            s.push(Verdict::new(name, false, format!("counts are not polynomial (q = {q})")))
        }
        Err(e) => s.push(Verdict::new(name, false, e.to_string())),
    }
}

/// Euler characteristics from interpolated point counts. `space_fields` must hold
/// at least six fields so that degree 4 can be fitted and validated.
pub fn euler_section(cubic_fields: &[u64], space_fields: &[u64], elliptic_fields: &[u64], bound: u64) -> Section {
    let mut s = Section::new("Euler characteristics from point counts");
    let (cf, sf, ef) = match (fields(cubic_fields), fields(space_fields), fields(elliptic_fields)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            s.push(Verdict::new("field list", false, e));
            return s;
        }
    };
    for (i, rec) in nonnormal_cubics().iter().enumerate() {
        let n = NONNORMAL_N[i] as i64;
        let expected = MotivicClass::from_i64s(&[1, n, 1]);
        let Some(h) = rec.hypersurface() else { continue };
        interpolation_verdict(
            &mut s,
            format!("f{}: class {expected}, chi = {}", i + 1, 2 + n),
            &h,
            &cf,
            2,
            bound,
            &expected,
        );
    }
    for m in 0..=4u32 {
        let nv = m as usize + 2;
        let h = Hypersurface::projective(Polynomial::<Rational>::var(nv - 1, nv)).expect("linear");
        let pts: Vec<FieldSpec> = sf.iter().take(m as usize + 2).cloned().collect();
        interpolation_verdict(
            &mut s,
            format!("P^{m}: chi = {}", m + 1),
            &h,
            &pts,
            m as usize,
            bound,
            &MotivicClass::projective_space(m),
        );
        let nv = m as usize + 1;
        let h = Hypersurface::affine(Polynomial::<Rational>::var(nv - 1, nv)).expect("linear");
        interpolation_verdict(
            &mut s,
            format!("A^{m}: chi = 1"),
            &h,
            &pts,
            m as usize,
            bound,
            &MotivicClass::affine_space(m),
        );
    }
    let cone = Hypersurface::projective(
        parse_polynomial::<Rational>("x^3 + y^3 + z^3", &["w", "x", "y", "z"]).expect("valid"),
    )
    .expect("homogeneous");
    let name = "x^3 + y^3 + z^3 in P^3: counts are not polynomial in q".to_string();
    match count_series(&cone, &ef, bound).and_then(|c| interpolate_count_polynomial(&c, ef.len().saturating_sub(2))) {
        Ok(Interpolation::NonPolynomialDetected { q, fitted, observed }) => {
            let detail = if observed.is_empty() {
                format!("fit through q <= {q}: {fitted}")
            } else {
                format!("at q = {q}: fitted {fitted}, observed {observed}")
            };
            s.push(Verdict::new(name, true, detail))
        }
        Ok(Interpolation::Polynomial(c)) => s.push(Verdict::new(name, false, format!("fitted {c}"))),
        Err(e) => s.push(Verdict::new(name, false, e.to_string())),
    }
    s
}

pub fn ga_section() -> Section {
    let mut s = Section::new("Additive group actions");
    for action in ga_examples::<Rational>() {
        let rep = verify_ga_action(&action);
        for c in rep.checks {
            s.push(Verdict::new(format!("{}: {}", rep.name, c.name), c.passed, c.detail));
        }
    }
    s
}

pub fn open_question_section() -> Section {
    let mut s = Section::new("Open question");
    let rep = open_question_instance::<Rational>();
    let tried: Vec<String> = rep
        .attempts
        .iter()
        .map(|(label, checks)| {
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            format!("[{label}] fails {}", failed.join(", "))
        })
        .collect();
    let mut v = Verdict::skipped(format!("complements of {} and {} isomorphic", rep.f, rep.g), rep.conclusion);
    v.detail = tried.join("; ");
    s.push(v);
    s
}

/// Certification of user-supplied maps.
pub fn certify_files(
    f: &str,
    g: &str,
    forward: &MapFile,
    backward: &MapFile,
    options: &CertifyOptions,
) -> Result<VerificationReport, IsoError> {
    let fwd = PolynomialMap::<Rational>::from_file(forward)?;
    let bwd = PolynomialMap::<Rational>::from_file(backward)?;
    if fwd.vars != bwd.vars {
        return Err(IsoError::Malformed("forward and backward maps use different variables".into()));
    }
    let names = fwd.names();
    let parse = |t: &str| parse_polynomial::<Rational>(t, &names).map_err(|e| IsoError::Malformed(e.to_string()));
    let (fp, gp) = (parse(f)?, parse(g)?);
    let mut report =
        VerificationReport::new("certify", "Q").input("f", f).input("g", g).input("vars", fwd.vars.join(","));
    let mut s = Section::new("Complement isomorphism certificate");
    match certify_projective_iso(&fp, &gp, &fwd, &bwd, options) {
        Ok(cert) => {
            for c in &cert.checks {
                s.push(Verdict::new(c.name.clone(), c.passed, c.detail.clone()));
            }
            s.push(Verdict::new(
                "certificate",
                true,
                format!(
                    "l = {}, l' = {}, s = {}, mu = {}, mu' = {}, lambda = {}, lambda' = {}, route {:?}",
                    cert.ell,
                    cert.ell_prime,
                    cert.s_exponent,
                    cert.mu,
                    cert.mu_prime,
                    cert.lambda,
                    cert.lambda_prime,
                    cert.route
                ),
            ));
        }
        Err(fail) => {
            for c in &fail.checks {
                s.push(Verdict::new(c.name.clone(), c.passed, c.detail.clone()));
            }
            s.push(match fail.reason {
                IsoError::ResourceBound(why) => Verdict::aborted("certificate", why),
                other => Verdict::new("certificate", false, other.to_string()),
            });
        }
    }
    report.sections.push(s);
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct VerifyAllOptions {
    pub quick: bool,
    pub seed: u64,
    pub point_bound: u64,
    pub certify: CertifyOptions,
    pub timings: bool,
}

impl Default for VerifyAllOptions {
    fn default() -> Self {
        VerifyAllOptions {
            quick: false,
            seed: 0,
            point_bound: crate::varieties::DEFAULT_POINT_BOUND,
            certify: CertifyOptions::default(),
            timings: false,
        }
    }
}

/// Every check of the acceptance list. `quick` restricts families to
/// `d <= 5` and counts to `q <= 5`.
pub fn verify_all(opts: &VerifyAllOptions) -> VerificationReport {
    let quick = opts.quick;
    let bound = opts.point_bound;
    let quadric_q: &[u64] = if quick { &[2, 3, 4, 5] } else { &[2, 3, 4, 5, 7, 8, 9] };
    let cubic_q: &[u64] = if quick { &[2, 3, 5] } else { &[2, 3, 5, 7] };
    let (cone_d, line_d) = if quick { (vec![4, 5], vec![3, 4, 5]) } else { ((4..=8).collect(), (3..=8).collect()) };
    let mut report = VerificationReport::new("verify-all", "Q for symbolic identities; GF(q) for point counts")
        .input("quick", quick)
        .input("seed", opts.seed)
        .input("point_bound", bound)
        .input("term_ceiling", opts.certify.term_ceiling);
    let mut timings = BTreeMap::new();
    let mut timed = |name: &str, report: &mut VerificationReport, f: &mut dyn FnMut() -> Vec<Section>| {
        let t = Instant::now();
        report.sections.extend(f());
        timings.insert(name.to_string(), t.elapsed().as_millis() as u64);
    };
    timed("quadrics", &mut report, &mut || quadric_sections(4, quadric_q, bound));
    for (family, degrees) in [(Family::Cone, cone_d.clone()), (Family::Line, line_d.clone())] {
        let stab = if quick { degrees[0] } else { *degrees.last().expect("nonempty") };
        let run = FamilyRun {
            family,
            degrees,
            stabilize_to: Some(6),
            stabilize_degrees: vec![stab],
            eval_primes: vec![2, 3, 5, 7, 11, 13],
            mutations: 20,
            seed: opts.seed,
            certify: opts.certify.clone(),
        };
        timed(family.name(), &mut report, &mut || family_sections(&run));
    }
    timed("involution", &mut report, &mut || vec![involution_section(&opts.certify)]);
    let primes: Vec<u64> = vec![2, 3, 5, 7];
    timed("multiplicity", &mut report, &mut || vec![multiplicity_section(&primes, bound)]);
    timed("nonnormal cubics", &mut report, &mut || vec![nonnormal_cubic_section(cubic_q, bound)]);
    if quick {
        report.sections.push(Section {
            topic: "Euler characteristics from point counts".into(),
            verdicts: vec![Verdict::skipped("interpolation", "needs q up to 31; run without --quick")],
        });
    } else {
        timed("euler", &mut report, &mut || {
            vec![euler_section(&[2, 3, 5, 7, 9], &[2, 3, 5, 7, 9, 11], &[7, 13, 19, 31], bound)]
        });
    }
    timed("ga actions", &mut report, &mut || vec![ga_section()]);
    report.sections.push(open_question_section());
    if opts.timings {
        report.timings_ms = Some(timings);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sections_pass() {
        for s in quadric_sections(2, &[2, 3], 1_000_000) {
            assert!(s.passed(), "{s:?}");
        }
        assert!(ga_section().passed());
        let run = FamilyRun {
            family: Family::Line,
            degrees: vec![3],
            stabilize_to: Some(5),
            stabilize_degrees: vec![3],
            eval_primes: vec![3, 5],
            mutations: 3,
            seed: 1,
            certify: CertifyOptions::default(),
        };
        let secs = family_sections(&run);
        assert_eq!(secs.len(), 4);
        assert!(secs.iter().all(Section::passed), "{secs:?}");
        assert!(matches!(secs[2].verdicts[0].status, super::super::Status::Skipped(_)));
    }

    #[test]
    fn resource_bound_is_an_abort() {
        let mut certify = CertifyOptions::default();
        certify.route = crate::iso_engine::Route::Direct;
        certify.term_ceiling = 10;
        let run = FamilyRun {
            family: Family::Cone,
            degrees: vec![4],
            stabilize_to: None,
            stabilize_degrees: vec![],
            eval_primes: vec![],
            mutations: 0,
            seed: 0,
            certify,
        };
        let secs = family_sections(&run);
        let last = secs[0].verdicts.last().unwrap();
        assert!(matches!(last.status, super::super::Status::Aborted(_)), "{last:?}");
    }
}
