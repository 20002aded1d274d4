use rayon::prelude::*;
use serde::Serialize;

use super::data::IsoCertificate;
use crate::finite_field::{FieldElement, FieldSpec};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::varieties::{enumerate_points, FieldPoly, Hypersurface, VarietyError};

/// Pointwise check of a certificate over `GF(p)` on the affine cone `f = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    pub p: u64,
    pub points: usize,
    /// Points `a` with `g(forward(a)) != mu`.
    pub g_mismatches: usize,
    /// Points `a` with `backward(forward(a)) != lambda a`.
    pub inverse_mismatches: usize,
}

impl EvaluationReport {
    pub fn passed(&self) -> bool {
        self.g_mismatches == 0 && self.inverse_mismatches == 0
    }
}

fn embed<C: Scalar>(c: &C, field: &FieldSpec) -> Result<FieldElement, VarietyError> {
    c.reduce_mod(field.p()).map(|r| field.from_i64(r as i64)).ok_or_else(|| VarietyError::NotEmbeddable(c.to_string()))
}

/// Enumerates `{f = 1} ⊂ A^N(GF(p))` and evaluates both maps at each point.
pub fn evaluation_consistency<C: Scalar>(
    cert: &IsoCertificate<C>,
    field: &FieldSpec,
    bound: u64,
) -> Result<EvaluationReport, VarietyError> {
    let nv = cert.f.nvars();
    let shifted = &cert.f - &Polynomial::one(nv);
    let pts = enumerate_points(&Hypersurface::affine(shifted)?, field, bound)?;
    let fwd = cert.forward.components.iter().map(|c| FieldPoly::new(c, field)).collect::<Result<Vec<_>, _>>()?;
    let bwd = cert.backward.components.iter().map(|c| FieldPoly::new(c, field)).collect::<Result<Vec<_>, _>>()?;
    let g = FieldPoly::new(&cert.g, field)?;
    let mu = embed(&cert.mu, field)?;
    let lambda = embed(&cert.lambda, field)?;
    let (g_bad, inv_bad) = pts
        .par_iter()
        .map(|a| {
            let image: Vec<FieldElement> = fwd.iter().map(|c| c.eval(field, a)).collect();
            let g_bad = g.eval(field, &image) != mu;
            let inv_bad = bwd.iter().zip(a).any(|(c, &ai)| c.eval(field, &image) != field.mul(lambda, ai));
            (g_bad as usize, inv_bad as usize)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(EvaluationReport { p: field.p(), points: pts.len(), g_mismatches: g_bad, inverse_mismatches: inv_bad })
}
