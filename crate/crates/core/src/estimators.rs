//! Closed-form least-squares and biased estimators, written as a linear map
//! `G` applied to the least-squares solution, and their active-set restricted
//! counterparts `G_E` used as direction transforms by the path solver.
//!
//! Every estimator here is `G · (X'X)⁻¹X'y` for one of
//!
//! | kind | `G` |
//! |------|-----|
//! | OLSE | `I` |
//! | RE   | `(A + kI)⁻¹ A` |
//! | AURE | `I − k² (A + kI)⁻²` |
//! | LE   | `(A + I)⁻¹ (A + dI)` |
//! | AULE | `I − (1 − d)² (A + I)⁻²` |
//! | PCRE | `T_h T_h'` |
//! | RK   | `T_h T_h' (A + kI)⁻¹ A` |
//! | RD   | `T_h T_h' (A + I)⁻¹ (A + dI)` |
//!
//! with `A = X'X` and `T_h` the leading `h` eigenvectors of `A`. The restricted
//! form evaluates the same operator on `E'AE` and embeds it with `E`, so that
//! `G_E` maps active-set coordinates to the full coefficient vector.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GlarsError, Result};
use crate::linalg::{symmetric_eigen, GramMatrix, SpdFactor, PSD_TOLERANCE};

/// Default cumulative-eigenvalue share for choosing the number of components.
pub const DEFAULT_COMPONENT_THRESHOLD: f64 = 0.995;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorKind {
    Olse,
    Re,
    Aure,
    Le,
    Aule,
    Pcre,
    Rk,
    Rd,
}

/// Which shrinkage parameter an estimator takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkageParam {
    None,
    /// Ridge parameter `k >= 0`.
    Ridge,
    /// Liu parameter `d` in `[0, 1]`.
    Liu,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 8] = [
        EstimatorKind::Olse,
        EstimatorKind::Re,
        EstimatorKind::Aure,
        EstimatorKind::Le,
        EstimatorKind::Aule,
        EstimatorKind::Pcre,
        EstimatorKind::Rk,
        EstimatorKind::Rd,
    ];

    /// Name of the adaptive path algorithm built on this transform.
    pub fn algorithm_name(self) -> &'static str {
        match self {
            EstimatorKind::Olse => "adpLARS-LASSO",
            EstimatorKind::Re => "adpLARS-EN",
            EstimatorKind::Aure => "adpLARS-AURE",
            EstimatorKind::Le => "adpLARS-LE",
            EstimatorKind::Aule => "adpLARS-AULE",
            EstimatorKind::Pcre => "adpLARS-PCRE",
            EstimatorKind::Rk => "adpLARS-rk",
            EstimatorKind::Rd => "adpLARS-rd",
        }
    }

    pub fn from_algorithm_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.algorithm_name().eq_ignore_ascii_case(name))
    }

    pub fn shrinkage(self) -> ShrinkageParam {
        match self {
            EstimatorKind::Re | EstimatorKind::Aure | EstimatorKind::Rk => ShrinkageParam::Ridge,
            EstimatorKind::Le | EstimatorKind::Aule | EstimatorKind::Rd => ShrinkageParam::Liu,
            EstimatorKind::Olse | EstimatorKind::Pcre => ShrinkageParam::None,
        }
    }

    pub fn uses_components(self) -> bool {
        matches!(self, EstimatorKind::Pcre | EstimatorKind::Rk | EstimatorKind::Rd)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm_name())
    }
}

impl FromStr for EstimatorKind {
    type Err = GlarsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_algorithm_name(s)
            .ok_or_else(|| GlarsError::InvalidParameter(format!("unknown estimator `{s}`")))
    }
}

/// How many principal components to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ComponentRule {
    /// Exactly this many components.
    Count(usize),
    /// The fewest leading components whose eigenvalue share reaches this
    /// fraction of the trace.
    Threshold(f64),
}

impl Default for ComponentRule {
    fn default() -> Self {
        ComponentRule::Threshold(DEFAULT_COMPONENT_THRESHOLD)
    }
}

impl ComponentRule {
    /// Number of components for descending, nonnegative eigenvalues.
    pub fn resolve(self, eigenvalues: &[f64]) -> Result<usize> {
        let dim = eigenvalues.len();
        match self {
            ComponentRule::Count(h) if h == 0 || h > dim => {
                Err(GlarsError::InvalidComponentCount { h, dim })
            }
            ComponentRule::Count(h) => Ok(h),
            ComponentRule::Threshold(tau) => {
                if !(tau > 0.0 && tau <= 1.0) {
                    return Err(GlarsError::InvalidParameter(format!(
                        "component threshold {tau} outside (0, 1]"
                    )));
                }
                let total: f64 = eigenvalues.iter().sum();
                if total <= 0.0 {
                    return Ok(dim);
                }
                let target = tau * total - 1e-12 * total;
                let mut cum = 0.0;
                for (i, v) in eigenvalues.iter().enumerate() {
                    cum += v;
                    if cum >= target {
                        return Ok(i + 1);
                    }
                }
                Ok(dim)
            }
        }
    }

    /// Caps an explicit count at `dim`; thresholds are unchanged.
    pub fn capped(self, dim: usize) -> Self {
        match self {
            ComponentRule::Count(h) => ComponentRule::Count(h.min(dim)),
            other => other,
        }
    }
}

/// One of the eight transforms with its shrinkage parameters. Parameters the
/// kind does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    /// Ridge parameter, used by RE, AURE and RK.
    pub k: f64,
    /// Liu parameter, used by LE, AULE and RD.
    pub d: f64,
    /// Component rule, used by PCRE, RK and RD.
    pub components: ComponentRule,
}

impl EstimatorSpec {
    /// Spec with neutral parameters (`k = 0`, `d = 1`, default component rule).
    pub fn new(kind: EstimatorKind) -> Self {
        Self {
            kind,
            k: 0.0,
            d: 1.0,
            components: ComponentRule::default(),
        }
    }

    pub fn olse() -> Self {
        Self::new(EstimatorKind::Olse)
    }

    pub fn ridge(k: f64) -> Self {
        Self { k, ..Self::new(EstimatorKind::Re) }
    }

    pub fn aure(k: f64) -> Self {
        Self { k, ..Self::new(EstimatorKind::Aure) }
    }

    pub fn liu(d: f64) -> Self {
        Self { d, ..Self::new(EstimatorKind::Le) }
    }

    pub fn aule(d: f64) -> Self {
        Self { d, ..Self::new(EstimatorKind::Aule) }
    }

    pub fn pcr(components: ComponentRule) -> Self {
        Self { components, ..Self::new(EstimatorKind::Pcre) }
    }

    pub fn rk(k: f64, components: ComponentRule) -> Self {
        Self { k, components, ..Self::new(EstimatorKind::Rk) }
    }

    pub fn rd(d: f64, components: ComponentRule) -> Self {
        Self { d, components, ..Self::new(EstimatorKind::Rd) }
    }

    pub fn with_components(mut self, components: ComponentRule) -> Self {
        self.components = components;
        self
    }

    /// The k or d value this kind uses, if any.
    pub fn shrinkage_value(&self) -> Option<f64> {
        match self.kind.shrinkage() {
            ShrinkageParam::Ridge => Some(self.k),
            ShrinkageParam::Liu => Some(self.d),
            ShrinkageParam::None => None,
        }
    }

    /// Sets k or d, whichever the kind uses.
    pub fn with_shrinkage(mut self, value: f64) -> Self {
        match self.kind.shrinkage() {
            ShrinkageParam::Ridge => self.k = value,
            ShrinkageParam::Liu => self.d = value,
            ShrinkageParam::None => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind.shrinkage() {
            ShrinkageParam::Ridge if !(self.k >= 0.0 && self.k.is_finite()) => {
                return Err(GlarsError::InvalidParameter(format!("k = {} must be >= 0", self.k)))
            }
            ShrinkageParam::Liu if !(0.0..=1.0).contains(&self.d) => {
                return Err(GlarsError::InvalidParameter(format!("d = {} outside [0, 1]", self.d)))
            }
            _ => {}
        }
        if self.kind.uses_components() {
            match self.components {
                ComponentRule::Count(0) => {
                    return Err(GlarsError::InvalidComponentCount { h: 0, dim: 0 })
                }
                ComponentRule::Threshold(t) if !(t > 0.0 && t <= 1.0) => {
                    return Err(GlarsError::InvalidParameter(format!(
                        "component threshold {t} outside (0, 1]"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        match self.kind.shrinkage() {
            ShrinkageParam::Ridge => write!(f, " (k={})", self.k),
            ShrinkageParam::Liu => write!(f, " (d={})", self.d),
            ShrinkageParam::None => Ok(()),
        }
    }
}

/// Leading eigenvectors of a gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    /// q x h, orthonormal columns.
    pub vectors: DMatrix<f64>,
    /// h eigenvalues, descending and nonnegative.
    pub values: Vec<f64>,
}

impl EigenBasis {
    pub fn components(&self) -> usize {
        self.values.len()
    }

    /// `T T'`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.vectors * self.vectors.transpose()
    }
}

pub fn principal_eigenvectors(gram: &GramMatrix, rule: ComponentRule) -> Result<EigenBasis> {
    let (mut values, vectors) = symmetric_eigen(gram.matrix());
    let trace = gram.matrix().trace().abs();
    for v in values.iter_mut() {
        if *v < 0.0 {
            if *v < -PSD_TOLERANCE * trace {
                return Err(GlarsError::NotPositiveSemidefinite { eigenvalue: *v });
            }
            *v = 0.0;
        }
    }
    let h = rule.resolve(&values)?;
    Ok(EigenBasis {
        vectors: vectors.columns(0, h).into_owned(),
        values: values[..h].to_vec(),
    })
}

/// The estimator's operator evaluated on a (possibly restricted) gram matrix.
pub(crate) fn shrinkage_operator(spec: &EstimatorSpec, gram: &GramMatrix) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let a = gram.matrix();
    let q = a.nrows();
    let eye = DMatrix::<f64>::identity(q, q);
    // (A + kI)⁻¹ A
    let ridge = |k: f64| -> Result<DMatrix<f64>> {
        SpdFactor::new(&(a + &eye * k)).map(|f| f.solve_mat(a))
    };
    // (A + I)⁻¹ (A + dI)
    let liu = |d: f64| -> Result<DMatrix<f64>> {
        SpdFactor::new(&(a + &eye)).map(|f| f.solve_mat(&(a + &eye * d)))
    };
    // I − c² S⁻², S = A + sI
    let almost_unbiased = |s: f64, c: f64| -> Result<DMatrix<f64>> {
        let inv = SpdFactor::new(&(a + &eye * s))?.solve_mat(&eye);
        Ok(&eye - (&inv * &inv) * (c * c))
    };
    let projector = || principal_eigenvectors(gram, spec.components).map(|b| b.projector());

    match spec.kind {
        EstimatorKind::Olse => Ok(eye),
        EstimatorKind::Re => ridge(spec.k),
        EstimatorKind::Aure => almost_unbiased(spec.k, spec.k),
        EstimatorKind::Le => liu(spec.d),
        EstimatorKind::Aule => almost_unbiased(1.0, 1.0 - spec.d),
        EstimatorKind::Pcre => projector(),
        EstimatorKind::Rk => Ok(projector()? * ridge(spec.k)?),
        EstimatorKind::Rd => Ok(projector()? * liu(spec.d)?),
    }
}

/// Full-model transform `G` (p x p).
pub fn full_transform(spec: &EstimatorSpec, gram: &GramMatrix) -> Result<DMatrix<f64>> {
    shrinkage_operator(spec, gram)
}

/// Active-set transform `G_E = E · M(E'AE)` (p x q) for the selector `E` whose
/// columns are the unit vectors of `active`, in order.
pub fn restricted_transform(
    spec: &EstimatorSpec,
    active: &[usize],
    gram_full: &GramMatrix,
) -> Result<DMatrix<f64>> {
    let p = gram_full.dim();
    validate_active(active, p)?;
    let core = shrinkage_operator(spec, &gram_full.restrict(active))?;
    Ok(embed_rows(&core, active, p))
}

pub(crate) fn validate_active(active: &[usize], p: usize) -> Result<()> {
    if active.is_empty() {
        return Err(GlarsError::DimensionMismatch("active set is empty".into()));
    }
    let mut seen = vec![false; p];
    for &j in active {
        if j >= p || std::mem::replace(&mut seen[j], true) {
            return Err(GlarsError::DimensionMismatch(format!(
                "active index {j} invalid or repeated for p = {p}"
            )));
        }
    }
    Ok(())
}

/// `E · m`: places row r of `m` at row `active[r]` of a p-row matrix.
pub(crate) fn embed_rows(m: &DMatrix<f64>, active: &[usize], p: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(p, m.ncols());
    for (r, &j) in active.iter().enumerate() {
        out.set_row(j, &m.row(r));
    }
    out
}

/// `(X'X)⁻¹ X'y`.
pub fn fit_olse(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_xy(x, y)?;
    let gram = GramMatrix::from_design(x);
    let factor = SpdFactor::new(gram.matrix())?;
    Ok(factor.solve_vec(&x.tr_mul(y)))
}

/// `G · (X'X)⁻¹ X'y` for the estimator's `G`.
pub fn fit_biased(x: &DMatrix<f64>, y: &DVector<f64>, spec: &EstimatorSpec) -> Result<DVector<f64>> {
    let olse = fit_olse(x, y)?;
    let g = full_transform(spec, &GramMatrix::from_design(x))?;
    Ok(g * olse)
}

fn check_xy(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<()> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(GlarsError::DimensionMismatch("design matrix is empty".into()));
    }
    if x.nrows() != y.len() {
        return Err(GlarsError::DimensionMismatch(format!(
            "{} rows in X but {} responses",
            x.nrows(),
            y.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use glars_oracles as oracle;

    fn to_dm(m: &oracle::Matrix) -> DMatrix<f64> {
        DMatrix::from_fn(m.len(), m[0].len(), |r, c| m[r][c])
    }

    fn random_gram(seed: u64, n: usize, p: usize) -> GramMatrix {
        let x = oracle::SplitMix::new(seed).matrix(n, p);
        GramMatrix::from_design(&to_dm(&x))
    }

    #[test]
    fn olse_orthonormal_columns_gives_xty() {
        // columns of a scaled Hadamard block are orthonormal
        let h = 0.5;
        let x = DMatrix::from_row_slice(4, 2, &[h, h, h, -h, h, h, h, -h]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        let b = fit_olse(&x, &y).unwrap();
        let xty = x.tr_mul(&y);
        assert!((b - xty).amax() < 1e-14);
    }

    #[test]
    fn olse_exact_proportionality() {
        let x = DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]);
        let y = DVector::from_vec(vec![2.0, 4.0, 6.0]);
        assert_eq!(fit_olse(&x, &y).unwrap()[0], 2.0);
    }

    #[test]
    fn olse_matches_eigen_pseudo_inverse_oracle() {
        let mut rng = oracle::SplitMix::new(11);
        let x = rng.matrix(20, 5);
        let y = rng.vector(20);
        let expected = oracle::eigen_solve(&oracle::gram(&x), &oracle::matvec(&oracle::transpose(&x), &y));
        let got = fit_olse(&to_dm(&x), &DVector::from_vec(y.clone())).unwrap();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-9, "{g} vs {e}");
        }
        // residual orthogonal to the column space
        let xd = to_dm(&x);
        let r = DVector::from_vec(y) - &xd * &got;
        assert!(xd.tr_mul(&r).amax() < 1e-8);
    }

    #[test]
    fn olse_singular_gram() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let y = DVector::from_vec(vec![1.0, 0.0, 1.0]);
        assert!(matches!(fit_olse(&x, &y), Err(GlarsError::SingularGram { .. })));
    }

    #[test]
    fn full_transform_collapses_to_identity() {
        let gram = random_gram(5, 30, 4);
        let eye = DMatrix::<f64>::identity(4, 4);
        for spec in [
            EstimatorSpec::ridge(0.0),
            EstimatorSpec::liu(1.0),
            EstimatorSpec::aule(1.0),
            EstimatorSpec::aure(0.0),
            EstimatorSpec::pcr(ComponentRule::Count(4)),
        ] {
            let g = full_transform(&spec, &gram).unwrap();
            assert!((g - &eye).amax() < 1e-10, "{spec}");
        }
    }

    #[test]
    fn ridge_scalar() {
        let gram = GramMatrix::new(DMatrix::from_element(1, 1, 2.0)).unwrap();
        let g = full_transform(&EstimatorSpec::ridge(1.0), &gram).unwrap();
        assert!((g[(0, 0)] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_h_too_large() {
        let gram = random_gram(1, 10, 3);
        let err = full_transform(&EstimatorSpec::pcr(ComponentRule::Count(4)), &gram).unwrap_err();
        assert!(matches!(err, GlarsError::InvalidComponentCount { h: 4, dim: 3 }));
    }

    #[test]
    fn fit_biased_reductions() {
        let mut rng = oracle::SplitMix::new(21);
        let x = to_dm(&rng.matrix(25, 4));
        let y = DVector::from_vec(rng.vector(25));
        let ols = fit_olse(&x, &y).unwrap();
        let same = fit_biased(&x, &y, &EstimatorSpec::olse()).unwrap();
        assert!((&same - &ols).amax() < 1e-14);
        let rk = fit_biased(&x, &y, &EstimatorSpec::rk(0.0, ComponentRule::Count(4))).unwrap();
        assert!((&rk - &ols).amax() < 1e-10);
    }

    #[test]
    fn ridge_matches_normal_equations_oracle() {
        let mut rng = oracle::SplitMix::new(30);
        let xr = rng.matrix(30, 4);
        let y = rng.vector(30);
        let mut a = oracle::gram(&xr);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += 0.5;
        }
        let expected = oracle::gauss_solve(&a, &oracle::matvec(&oracle::transpose(&xr), &y));
        let got = fit_biased(&to_dm(&xr), &DVector::from_vec(y), &EstimatorSpec::ridge(0.5)).unwrap();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_identity_and_diagonal() {
        let eye = GramMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let b = principal_eigenvectors(&eye, ComponentRule::Count(3)).unwrap();
        assert!((b.projector() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);

        let diag = GramMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]))).unwrap();
        let b = principal_eigenvectors(&diag, ComponentRule::Count(1)).unwrap();
        assert_eq!(b.values, vec![4.0]);
        assert!((b.vectors[(0, 0)] - 1.0).abs() < 1e-15 && b.vectors[(1, 0)].abs() < 1e-15);
    }

    #[test]
    fn threshold_count_matches_jacobi_scan() {
        let mut rng = oracle::SplitMix::new(99);
        let x = rng.matrix(7, 5);
        // make it strongly collinear so the threshold bites
        let x: oracle::Matrix = x
            .iter()
            .map(|r| vec![r[0], r[0] + 0.05 * r[1], r[2], r[2] - 0.02 * r[3], r[4]])
            .collect();
        let a = oracle::gram(&x);
        let (vals, _) = oracle::jacobi_eigen(&a);
        let total: f64 = vals.iter().sum();
        let mut cum = 0.0;
        let expected = vals
            .iter()
            .position(|v| {
                cum += v;
                cum >= 0.995 * total
            })
            .unwrap()
            + 1;
        let got = principal_eigenvectors(&GramMatrix::new(to_dm(&a)).unwrap(), ComponentRule::Threshold(0.995))
            .unwrap();
        assert_eq!(got.components(), expected);
        assert!(expected < 5);
        let tt = got.vectors.tr_mul(&got.vectors);
        assert!((tt - DMatrix::<f64>::identity(expected, expected)).amax() < 1e-10);
    }

    #[test]
    fn restricted_olse_is_selector() {
        let gram = random_gram(3, 30, 5);
        let g = restricted_transform(&EstimatorSpec::olse(), &[3, 1], &gram).unwrap();
        assert_eq!(g.shape(), (5, 2));
        let mut e = DMatrix::zeros(5, 2);
        e[(3, 0)] = 1.0;
        e[(1, 1)] = 1.0;
        assert_eq!(g, e);
        let re0 = restricted_transform(&EstimatorSpec::ridge(0.0), &[3, 1], &gram).unwrap();
        assert!((re0 - e).amax() < 1e-12);
    }

    #[test]
    fn restricted_pcre_on_diagonal_gram() {
        // p = 3, active {2, 0}; E'AE = diag(3, 1)
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 7.0, 3.0]));
        let gram = GramMatrix::new(a).unwrap();
        let g = restricted_transform(&EstimatorSpec::pcr(ComponentRule::Count(1)), &[2, 0], &gram).unwrap();
        let mut expected = DMatrix::zeros(3, 2);
        expected[(2, 0)] = 1.0;
        assert!((g - expected).amax() < 1e-15);
    }

    #[test]
    fn restricted_with_full_identity_selector_matches_full() {
        let gram = random_gram(8, 30, 4);
        let all = [0, 1, 2, 3];
        for kind in EstimatorKind::ALL {
            let spec = EstimatorSpec {
                kind,
                k: 0.3,
                d: 0.6,
                components: ComponentRule::Count(3),
            };
            let full = full_transform(&spec, &gram).unwrap();
            let restricted = restricted_transform(&spec, &all, &gram).unwrap();
            assert!((full - restricted).amax() < 1e-10, "{kind}");
        }
    }

    #[test]
    fn invalid_parameters() {
        let gram = random_gram(8, 30, 3);
        assert!(full_transform(&EstimatorSpec::ridge(-1.0), &gram).is_err());
        assert!(full_transform(&EstimatorSpec::liu(1.5), &gram).is_err());
        assert!(restricted_transform(&EstimatorSpec::olse(), &[0, 0], &gram).is_err());
        assert!(restricted_transform(&EstimatorSpec::olse(), &[], &gram).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.algorithm_name().parse::<EstimatorKind>().unwrap(), kind);
        }
        assert!("adpLARS-XYZ".parse::<EstimatorKind>().is_err());
    }
}
