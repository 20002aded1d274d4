use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hypercomp::groth_ring::{count_series, interpolate_count_polynomial, lookup_record, verify_record, Interpolation};
use hypercomp::iso_engine::{CertifyOptions, Family, MapFile, Route, DEFAULT_TERM_CEILING};
use hypercomp::quadrics::{classify_by_counts, classify_quadric, QuadricError};
use hypercomp::report::{self, FamilyRun, Section, Verdict, VerificationReport, VerifyAllOptions};
use hypercomp::varieties::{count_points_bounded, Hypersurface, VarietyError, DEFAULT_POINT_BOUND};
use hypercomp::{parse_polynomial, FieldSpec};

#[derive(Parser)]
#[command(name = "hypercomp", version, about = "Exact checks for hypersurfaces, complements and point counts")]
struct Cli {
    /// Emit JSON instead of Markdown.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    /// Largest point enumeration allowed.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_BOUND)]
    point_bound: u64,
    /// Largest symbolic expansion allowed, in terms.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_CEILING)]
    term_ceiling: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Direct,
    Chart,
}

#[derive(Args)]
struct CertifyArgs {
    /// How the certificate identities are checked.
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
}

#[derive(Subcommand)]
enum Command {
    /// Run every built-in check.
    VerifyAll {
        /// Small degrees and fields only.
        #[arg(long)]
        quick: bool,
    },
    /// Build and certify complement isomorphisms for a family.
    VerifyFamily {
        /// cone | line.
        #[arg(long)]
        family: String,
        /// Degree or range, e.g. `4`, `4..8`, `3,5`.
        #[arg(long = "d")]
        degrees: String,
        /// Extend certificates up to this projective dimension.
        #[arg(long)]
        stabilize_to: Option<usize>,
        /// Number of seeded coefficient perturbations per degree.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
        /// Primes for pointwise evaluation of the certificates.
        #[arg(long, value_delimiter = ',')]
        eval_primes: Vec<u64>,
        #[command(flatten)]
        certify: CertifyArgs,
    },
    /// Certify the degree-8 involution of the nodal cubic complement.
    VerifyInvolutionDeg8 {
        #[command(flatten)]
        certify: CertifyArgs,
    },
    /// Count points, regular points and singular points over a finite field.
    CountPoints {
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// `q=9` or `p=3,k=2[,mod=u^2+1]`.
        #[arg(long)]
        field: String,
        #[arg(long)]
        projective: bool,
    },
    /// Normal form of a quadratic form.
    ClassifyQuadric {
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Fields for the count fingerprint (used in characteristic 2).
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        fields: Vec<u64>,
    },
    /// Brute-force counts of all normal forms against the closed forms.
    VerifyQuadricCounts {
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7,8,9")]
        fields: Vec<u64>,
    },
    /// Class and Euler characteristic from interpolated point counts, or of a built-in record.
    EulerChar {
        /// Polynomial, or `record:<name>`.
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long)]
        projective: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,9")]
        fields: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        degree_bound: usize,
    },
    /// Certify user-supplied maps between complements.
    Certify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// JSON file {"vars": [...], "components": [...]}.
        #[arg(long)]
        forward: PathBuf,
        #[arg(long)]
        backward: PathBuf,
        #[command(flatten)]
        certify: CertifyArgs,
    },
    /// Compare a built-in stratification record with point counts.
    VerifyRecord {
        /// Record name, with or without the `record:` prefix.
        #[arg(long)]
        name: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        fields: Vec<u64>,
    },
    /// Check the built-in additive group actions.
    VerifyGaActions,
}

/// Bad input: reported on stderr with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn certify_options(cli: &Cli, args: &CertifyArgs) -> CertifyOptions {
    let route = match args.route {
        RouteArg::Auto => Route::Auto,
        RouteArg::Direct => Route::Direct,
        RouteArg::Chart => Route::Chart,
    };
    CertifyOptions { route, term_ceiling: cli.term_ceiling, assumptions: Vec::new() }
}

fn parse_degrees(text: &str) -> Result<Vec<u32>, UsageError> {
    let bad = || UsageError(format!("invalid degree list {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim();
        let b: u32 = match b.strip_prefix('=') {
            Some(rest) => rest.parse().map_err(|_| bad())?,
            None => b.parse().map_err(|_| bad())?,
        };
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn parse_poly(text: &str, vars: &[String]) -> Result<hypercomp::RationalPolynomial, UsageError> {
    if vars.is_empty() {
        return Err(UsageError("--vars is required".into()));
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(parse_polynomial(text, &refs)?)
}

fn fields(qs: &[u64]) -> Result<Vec<FieldSpec>, UsageError> {
    qs.iter().map(|&q| FieldSpec::from_order(q).map_err(UsageError::from)).collect()
}

fn result_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// Resource bounds become an aborted verdict; everything else is bad input.
fn variety_outcome(report: &mut VerificationReport, name: &str, e: VarietyError) -> Result<(), UsageError> {
    match e {
        VarietyError::BoundExceeded { .. } => {
            let mut s = Section::new("Resource bounds");
            s.push(Verdict::aborted(name, e.to_string()));
            report.sections.push(s);
            Ok(())
        }
        other => Err(other.into()),
    }
}

fn run(cli: &Cli) -> Result<VerificationReport, UsageError> {
    let start = Instant::now();
    let bound = cli.point_bound;
    let mut report = match &cli.command {
        Command::VerifyAll { quick } => report::verify_all(&VerifyAllOptions {
            quick: *quick,
            seed: cli.seed,
            point_bound: bound,
            certify: CertifyOptions { term_ceiling: cli.term_ceiling, ..CertifyOptions::default() },
            timings: cli.timings,
        }),
        Command::VerifyFamily { family, degrees, stabilize_to, mutations, eval_primes, certify } => {
            let family: Family = family.parse()?;
            let degrees = parse_degrees(degrees)?;
            let run = FamilyRun {
                family,
                degrees: degrees.clone(),
                stabilize_to: *stabilize_to,
                stabilize_degrees: degrees.clone(),
                eval_primes: eval_primes.clone(),
                mutations: *mutations,
                seed: cli.seed,
                certify: certify_options(cli, certify),
            };
            let mut r = VerificationReport::new("verify-family", "Q")
                .input("family", family)
                .input("d", degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                .input("stabilize_to", stabilize_to.map(|s| s.to_string()).unwrap_or_else(|| "none".into()))
                .input("mutations", mutations)
                .input("seed", cli.seed);
            r.sections = report::family_sections(&run);
            r
        }
        Command::VerifyInvolutionDeg8 { certify } => {
            let mut r = VerificationReport::new("verify-involution-deg8", "Q").input("f", "x*y*z + x^3 + y^3");
            r.sections.push(report::involution_section(&certify_options(cli, certify)));
            r
        }
        Command::CountPoints { poly, vars, field, projective } => {
            let p = parse_poly(poly, vars)?;
            let field: FieldSpec = field.parse()?;
            let h = if *projective { Hypersurface::projective(p)? } else { Hypersurface::affine(p)? };
            let mut r = VerificationReport::new("count-points", format!("GF({})", field.q()))
                .input("poly", poly)
                .input("vars", vars.join(","))
                .input("field", &field)
                .input("projective", projective);
            match count_points_bounded(&h, &field, bound) {
                Ok(c) => {
                    r.result = Some(result_map(
                        json!({"total": c.total, "regular": c.regular, "singular": c.singular, "q": c.q}),
                    ))
                }
                Err(e) => variety_outcome(&mut r, "enumeration", e)?,
            }
            r
        }
        Command::ClassifyQuadric { poly, vars, fields: qs } => {
            let p = parse_poly(poly, vars)?;
            let mut r =
                VerificationReport::new("classify-quadric", "Q").input("poly", poly).input("vars", vars.join(","));
            let mut result = Map::new();
            match classify_quadric(&p) {
                Ok(c) => {
                    result.insert("kind".into(), json!(c.kind));
                    result.insert("m".into(), json!(c.m));
                    result.insert("rank".into(), json!(c.rank));
                    result.insert("non_reduced".into(), json!(c.non_reduced));
                }
                Err(QuadricError::NotQuadratic) => return Err(UsageError("not a quadratic form".into())),
                Err(e) => {
                    result.insert("exact".into(), json!(e.to_string()));
                }
            }
            r = r.input("fields", qs.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            match classify_by_counts(&p, &fields(qs)?, bound) {
                Ok(e) => {
                    let names: Vec<String> = e.candidates.iter().map(|f| f.to_string()).collect();
                    result.insert("count_candidates".into(), json!(names));
                }
                Err(QuadricError::Variety(e)) => variety_outcome(&mut r, "count fingerprint", e)?,
                Err(e) => return Err(e.into()),
            }
            r.result = Some(result);
            r
        }
        Command::VerifyQuadricCounts { nmax, fields: qs } => {
            fields(qs)?;
            let mut r = VerificationReport::new("verify-quadric-counts", "GF(q)")
                .input("nmax", nmax)
                .input("fields", qs.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            r.sections = report::quadric_sections(*nmax, qs, bound);
            r
        }
        Command::EulerChar { poly, vars, projective, fields: qs, degree_bound } => {
            let mut r = VerificationReport::new("euler-char", "Z[L]").input("poly", poly);
            if let Some(name) = poly.strip_prefix("record:") {
                let rec = lookup_record(name)?;
                let mut result = Map::new();
                result.insert("record".into(), json!(rec.name));
                result.insert("class".into(), json!(rec.class().map(|c| c.to_string())));
                result.insert("chi".into(), json!(rec.chi().to_string()));
                result.insert("source".into(), json!(rec.source));
                r.result = Some(result);
            } else {
                let p = parse_poly(poly, vars)?;
                let h = if *projective { Hypersurface::projective(p)? } else { Hypersurface::affine(p)? };
                r = r
                    .input("vars", vars.join(","))
                    .input("projective", projective)
                    .input("fields", qs.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
                    .input("degree_bound", degree_bound);
                let counts = match count_series(&h, &fields(qs)?, bound) {
                    Ok(c) => c,
                    Err(hypercomp::groth_ring::GrothError::Variety(e)) => {
                        variety_outcome(&mut r, "enumeration", e)?;
                        return Ok(r);
                    }
                    Err(e) => return Err(e.into()),
                };
                let shown: Vec<Value> = counts.iter().map(|(q, n)| json!({"q": q, "count": n.to_string()})).collect();
                let mut result = Map::new();
                result.insert("counts".into(), json!(shown));
                match interpolate_count_polynomial(&counts, *degree_bound)? {
                    Interpolation::Polynomial(c) => {
                        result.insert("class".into(), json!(c.to_string()));
                        result.insert("chi".into(), json!(c.chi().to_string()));
                    }
                    Interpolation::NonPolynomialDetected { q, fitted, observed } => {
                        result.insert("non_polynomial".into(), json!({"q": q, "fitted": fitted, "observed": observed}));
                    }
                }
                r.result = Some(result);
            }
            r
        }
        Command::Certify { f, g, forward, backward, certify } => {
            let read = |p: &PathBuf| -> Result<MapFile, UsageError> {
                let text = std::fs::read_to_string(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", p.display())))
            };
            let (fw, bw) = (read(forward)?, read(backward)?);
            report::certify_files(f, g, &fw, &bw, &certify_options(cli, certify))?
        }
        Command::VerifyRecord { name, fields: qs } => {
            let rec = lookup_record(name)?;
            let mut r = VerificationReport::new("verify-record", "GF(q)")
                .input("record", &rec.name)
                .input("fields", qs.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            let mut s = Section::new(format!("Record {}", rec.name));
            r.result = Some(result_map(json!({
                "class": rec.class().map(|c| c.to_string()),
                "chi": rec.chi().to_string(),
                "source": rec.source,
            })));
            match rec.hypersurface() {
                None => s.push(Verdict::skipped("point counts", "the record carries no equation; class only")),
                Some(h) => match verify_record(&rec, &h, &fields(qs)?, bound) {
                    Ok(checks) => {
                        for c in checks {
                            let chart = c
                                .chart
                                .as_ref()
                                .map(|ch| {
                                    format!(
                                        "; split {}/{} and {}/{}",
                                        ch.observed_nonzero, ch.predicted_nonzero, ch.observed_zero, ch.predicted_zero
                                    )
                                })
                                .unwrap_or_default();
                            s.push(Verdict::new(
                                format!("count-consistent over F_{}", c.q),
                                c.count_consistent,
                                format!("total {}/{}{chart}", c.observed, c.predicted),
                            ));
                        }
                    }
                    Err(hypercomp::groth_ring::GrothError::Variety(e)) => variety_outcome(&mut r, "enumeration", e)?,
                    Err(e) => s.push(Verdict::new("record check", false, e.to_string())),
                },
            }
            r.sections.push(s);
            r
        }
        Command::VerifyGaActions => {
            let mut r = VerificationReport::new("verify-ga-actions", "Q");
            r.sections.push(report::ga_section());
            r
        }
    };
    if cli.timings && report.timings_ms.is_none() {
        report.timings_ms = Some([("total".to_string(), start.elapsed().as_millis() as u64)].into_iter().collect());
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_markdown());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_degrees;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("4").unwrap(), vec![4]);
        assert_eq!(parse_degrees("4..8").unwrap(), vec![4, 5, 6, 7, 8]);
        assert_eq!(parse_degrees("4..=6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_degrees("3, 5").unwrap(), vec![3, 5]);
        for bad in ["", "8..4", "x", "4..", "3;5"] {
            assert!(parse_degrees(bad).is_err(), "{bad:?}");
        }
    }
}
