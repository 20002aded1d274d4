use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::certify::Route;
use super::IsoError;
use crate::poly::{parse_polynomial, Polynomial};
use crate::scalar::Scalar;

/// Outcome of one named identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// Data `(P, Q, A, B, m, n)` over `S = k[x_0..x_s]`. All polynomials live in the
/// ring with variables `x_0..x_s, y, z, w` and only involve the `x_i` and `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DanielewskiData<C: Scalar> {
    pub s: usize,
    pub m: u32,
    pub n: u32,
    pub p: Polynomial<C>,
    pub q: Polynomial<C>,
    pub a: Polynomial<C>,
    pub b: Polynomial<C>,
}

impl<C: Scalar> DanielewskiData<C> {
    pub fn nvars(&self) -> usize {
        self.s + 4
    }
    pub fn y(&self) -> usize {
        self.s + 1
    }
    pub fn z(&self) -> usize {
        self.s + 2
    }
    pub fn w(&self) -> usize {
        self.s + 3
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut v: Vec<String> =
            if self.s == 0 { vec!["x".into()] } else { (0..=self.s).map(|i| format!("x{i}")).collect() };
        v.extend(["y", "z", "w"].map(String::from));
        v
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial<C>, IsoError> {
        let names = self.var_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        parse_polynomial(text, &refs).map_err(|e| IsoError::Malformed(e.to_string()))
    }

    pub fn show(&self, p: &Polynomial<C>) -> String {
        let names = self.var_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        p.display_with(&refs)
    }

    fn projective_form(&self, rhs: &Polynomial<C>, label: &str) -> Result<Polynomial<C>, IsoError> {
        let nv = self.nvars();
        let lead = Polynomial::var(0, nv).pow(self.n) * Polynomial::var(self.y(), nv);
        let out = &(&lead + &Polynomial::one(nv)) - rhs;
        if !out.is_homogeneous() || out.total_degree() != Some(self.n + 1) {
            return Err(IsoError::Malformed(format!("{label}: x0^n*y + 1 - {label} is not homogeneous of degree n+1")));
        }
        Ok(out)
    }

    /// `f` with `f - 1 = x_0^n y - P`.
    pub fn f(&self) -> Result<Polynomial<C>, IsoError> {
        self.projective_form(&self.p, "P")
    }

    /// `g` with `g - 1 = x_0^n y - Q`.
    pub fn g(&self) -> Result<Polynomial<C>, IsoError> {
        self.projective_form(&self.q, "Q")
    }

    pub fn degree(&self) -> u32 {
        self.n + 1
    }
}

/// Map `A^N -> A^N` (or a rational self-map of `P^{N-1}`) given by components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialMap<C: Scalar> {
    pub vars: Vec<String>,
    pub components: Vec<Polynomial<C>>,
}

/// On-disk form: `{"vars": [...], "components": ["<expr>", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub vars: Vec<String>,
    pub components: Vec<String>,
}

impl<C: Scalar> PolynomialMap<C> {
    pub fn new(vars: Vec<String>, components: Vec<Polynomial<C>>) -> Result<Self, IsoError> {
        if components.len() != vars.len() {
            return Err(IsoError::Malformed(format!("{} components for {} variables", components.len(), vars.len())));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != vars.len()) {
            return Err(IsoError::Malformed(format!("component in {} variables", c.nvars())));
        }
        Ok(PolynomialMap { vars, components })
    }

    pub fn identity(vars: Vec<String>) -> Self {
        let n = vars.len();
        PolynomialMap { vars, components: (0..n).map(|i| Polynomial::var(i, n)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Common degree if every component is homogeneous of the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for c in &self.components {
            if c.is_zero() || !c.is_homogeneous() {
                return None;
            }
            let d = c.total_degree()?;
            if *deg.get_or_insert(d) != d {
                return None;
            }
        }
        deg
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn show(&self, p: &Polynomial<C>) -> String {
        p.display_with(&self.names())
    }

    pub fn to_file(&self) -> MapFile {
        MapFile { vars: self.vars.clone(), components: self.components.iter().map(|c| self.show(c)).collect() }
    }

    pub fn from_file(file: &MapFile) -> Result<Self, IsoError> {
        let refs: Vec<&str> = file.vars.iter().map(String::as_str).collect();
        let comps = file
            .components
            .iter()
            .map(|t| parse_polynomial(t, &refs).map_err(|e| IsoError::Malformed(e.to_string())))
            .collect::<Result<_, _>>()?;
        Self::new(file.vars.clone(), comps)
    }

    pub fn total_terms(&self) -> usize {
        self.components.iter().map(Polynomial::num_terms).sum()
    }
}

/// Verified data of an isomorphism `P^N_f -> P^N_g` with inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCertificate<C: Scalar> {
    pub f: Polynomial<C>,
    pub g: Polynomial<C>,
    pub forward: PolynomialMap<C>,
    pub backward: PolynomialMap<C>,
    /// `g(forward) = mu f^t`.
    pub mu: C,
    /// `f(backward) = mu_prime g^t'`.
    pub mu_prime: C,
    /// `backward_i(forward) = lambda f^s x_i`.
    pub lambda: C,
    /// `forward_i(backward) = lambda_prime g^s x_i`.
    pub lambda_prime: C,
    pub s_exponent: u32,
    pub t_exponent: u32,
    pub t_prime_exponent: u32,
    pub ell: u32,
    pub ell_prime: u32,
    pub route: Route,
    pub checks: Vec<CheckResult>,
    /// Hypotheses recorded but not verified.
    pub assumptions: Vec<String>,
}

impl<C: Scalar> IsoCertificate<C> {
    pub fn degree(&self) -> u32 {
        self.f.total_degree().unwrap_or(0)
    }

    pub fn summary(&self) -> Value {
        let names = self.forward.names();
        json!({
            "f": self.f.display_with(&names),
            "g": self.g.display_with(&names),
            "ambient_dimension": self.forward.nvars() - 1,
            "ell": self.ell,
            "ell_prime": self.ell_prime,
            "s": self.s_exponent,
            "t": self.t_exponent,
            "t_prime": self.t_prime_exponent,
            "mu": self.mu.to_string(),
            "mu_prime": self.mu_prime.to_string(),
            "lambda": self.lambda.to_string(),
            "lambda_prime": self.lambda_prime.to_string(),
            "route": format!("{:?}", self.route),
            "forward_terms": self.forward.total_terms(),
            "backward_terms": self.backward.total_terms(),
            "checks": self.checks,
            "assumptions": self.assumptions,
        })
    }
}
