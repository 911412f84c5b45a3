use rowcol_linalg::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactGreedy,
    Optimizer,
    AmplificationLowerBound,
}

/// The maximizing `u` (with `v = uu*`), if one was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum Witness {
    None,
    /// `u = diag(d)`.
    Diagonal(Vec<f64>),
    Matrix(ComplexMatrix),
}

impl Witness {
    pub fn to_matrix(&self) -> ComplexMatrix {
        match self {
            Witness::None => ComplexMatrix::zeros(0, 0),
            Witness::Diagonal(d) => ComplexMatrix::diag(&d.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()),
            Witness::Matrix(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbNormResult {
    /// `max{‖T‖, s}` with `s` the best value found for the supremum.
    pub value: f64,
    /// A value the cb-norm provably does not exceed, when known.
    pub upper_bound: Option<f64>,
    /// `‖T‖`.
    pub op_norm: f64,
    /// `s²`, the attained value of `tr(T*B*BT v)`.
    pub sup_squared: f64,
    pub witness: Witness,
    pub method: Method,
    pub certified: bool,
}
