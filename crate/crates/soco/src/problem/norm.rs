use crate::error::{Result, SocoError};
use crate::numerics::{minimize, ConvexProgram, Tolerance};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Base norm of a movement metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    Manhattan,
    Euclidean,
    /// `sqrt(x^T A x)` for a positive definite `A`.
    Mahalanobis { matrix: Vec<Vec<f64>> },
    /// `sum_k w_k |x_k|` with positive weights.
    ScaledManhattan { weights: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormModifier {
    #[default]
    Plain,
    Squared,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Norm {
    pub kind: NormKind,
    #[serde(default)]
    pub modifier: NormModifier,
}

impl Norm {
    pub fn manhattan() -> Self {
        Norm { kind: NormKind::Manhattan, modifier: NormModifier::Plain }
    }

    pub fn euclidean() -> Self {
        Norm { kind: NormKind::Euclidean, modifier: NormModifier::Plain }
    }

    pub fn scaled_manhattan(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(SocoError::InvalidArgument("scaled manhattan weights must be positive".into()));
        }
        Ok(Norm { kind: NormKind::ScaledManhattan { weights }, modifier: NormModifier::Plain })
    }

    pub fn mahalanobis(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(SocoError::InvalidArgument("mahalanobis matrix must be square".into()));
        }
        let m = to_matrix(&matrix);
        if (&m - m.transpose()).abs().max() > 1e-12 || m.clone().cholesky().is_none() {
            return Err(SocoError::InvalidArgument("mahalanobis matrix must be symmetric positive definite".into()));
        }
        Ok(Norm { kind: NormKind::Mahalanobis { matrix }, modifier: NormModifier::Plain })
    }

    pub fn squared(self) -> Self {
        Norm { modifier: NormModifier::Squared, ..self }
    }

    pub fn dual(self) -> Self {
        Norm { modifier: NormModifier::Dual, ..self }
    }

    /// The same norm without modifier.
    pub fn plain(&self) -> Self {
        Norm { kind: self.kind.clone(), modifier: NormModifier::Plain }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.modifier {
            NormModifier::Plain => self.base(x),
            NormModifier::Squared => self.base(x).powi(2),
            NormModifier::Dual => self.dual_closed_form(x),
        }
    }

    /// Distance `||a - b||`.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.eval(&diff)
    }

    fn base(&self, x: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Manhattan => x.iter().map(|v| v.abs()).sum(),
            NormKind::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Mahalanobis { matrix } => {
                let v = DVector::from_column_slice(x);
                (v.transpose() * to_matrix(matrix) * &v)[(0, 0)].max(0.0).sqrt()
            }
            NormKind::ScaledManhattan { weights } => x.iter().zip(weights).map(|(v, w)| w * v.abs()).sum(),
        }
    }

    fn dual_closed_form(&self, x: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Manhattan => x.iter().fold(0.0, |acc, v| acc.max(v.abs())),
            NormKind::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Mahalanobis { matrix } => {
                let v = DVector::from_column_slice(x);
                let chol = to_matrix(matrix).cholesky().expect("validated at construction");
                let solved = chol.solve(&v);
                v.dot(&solved).max(0.0).sqrt()
            }
            NormKind::ScaledManhattan { weights } => {
                x.iter().zip(weights).fold(0.0, |acc, (v, w)| acc.max(v.abs() / w))
            }
        }
    }

    /// Dual norm `sup { <x, y> : ||y|| <= 1 }` computed as a convex program.
    pub fn dual_by_program(&self, x: &[f64], tol: Tolerance) -> Result<f64> {
        let plain = self.plain();
        let radius = 1.0 / plain.base_lower_bound_scale(x.len());
        let n = x.len();
        let program = ConvexProgram::new(
            |y: &[f64]| -y.iter().zip(x).map(|(a, b)| a * b).sum::<f64>(),
            vec![-radius; n],
            vec![radius; n],
        )
        .with_constraint(move |y: &[f64]| plain.eval(y) - 1.0)
        .with_start(vec![0.0; n]);
        Ok(-minimize(&program, tol)?.value)
    }

    /// A constant `c` with `||y|| >= c ||y||_inf`, bounding the unit ball.
    fn base_lower_bound_scale(&self, n: usize) -> f64 {
        match &self.kind {
            NormKind::Manhattan | NormKind::Euclidean => 1.0,
            NormKind::ScaledManhattan { weights } => weights.iter().cloned().fold(f64::INFINITY, f64::min),
            NormKind::Mahalanobis { matrix } => {
                let eig = to_matrix(matrix).symmetric_eigenvalues();
                eig.iter().cloned().fold(f64::INFINITY, f64::min).max(1e-300).sqrt() / (n as f64).sqrt().max(1.0)
            }
        }
    }
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn norms() -> Vec<Norm> {
        vec![
            Norm::manhattan(),
            Norm::euclidean(),
            Norm::scaled_manhattan(vec![0.5, 2.0, 1.5]).unwrap(),
            Norm::mahalanobis(vec![vec![2.0, 0.5, 0.0], vec![0.5, 1.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn plain_norms_satisfy_axioms(
            x in prop::collection::vec(-10.0..10.0f64, 3),
            y in prop::collection::vec(-10.0..10.0f64, 3),
            a in -5.0..5.0f64,
        ) {
            for n in norms() {
                let sum: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
                let scaled: Vec<f64> = x.iter().map(|p| a * p).collect();
                prop_assert!(n.eval(&x) >= 0.0);
                prop_assert!((n.eval(&scaled) - a.abs() * n.eval(&x)).abs() <= 1e-9 * (1.0 + n.eval(&x)));
                prop_assert!(n.eval(&sum) <= n.eval(&x) + n.eval(&y) + 1e-9);
            }
        }
    }

    #[test]
    fn dual_closed_forms_match_program() {
        let x = [0.3, -1.2, 0.7];
        for n in norms() {
            let closed = n.clone().dual().eval(&x);
            let program = n.dual_by_program(&x, Tolerance::new(1e-8, false).unwrap()).unwrap();
            assert!((closed - program).abs() < 1e-3, "{:?}: {closed} vs {program}", n.kind);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Norm::scaled_manhattan(vec![1.0, 0.0]).is_err());
        assert!(Norm::mahalanobis(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
    }

    #[test]
    fn squared_modifier() {
        assert_eq!(Norm::euclidean().squared().eval(&[3.0, 4.0]), 25.0);
    }
}
