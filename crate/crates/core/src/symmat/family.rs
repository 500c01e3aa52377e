use serde::{Deserialize, Serialize};

use super::{frobenius_inner, SquareMatrix, SymMatrix};
use crate::error::{Error, Result};

/// Hypotheses a family may be required to satisfy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// `|Tr A_α| ≤ tol` for every member (minimality).
    pub trace_free: bool,
    /// `|⟨A_α, A_β⟩| ≤ tol` for `α ≠ β`.
    pub orthogonal: bool,
}

/// Ordered list `A_1, …, A_m` of symmetric `n × n` matrices: the second
/// fundamental form at a point, one matrix per normal direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyDocument", into = "FamilyDocument")]
pub struct MatrixFamily {
    n: usize,
    members: Vec<SymMatrix>,
}

impl MatrixFamily {
    pub fn new(members: Vec<SymMatrix>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::invalid("a matrix family needs at least one member"))?;
        let n = first.dim();
        for m in &members {
            Error::check_dim(n, m.dim())?;
        }
        Ok(Self { n, members })
    }

    /// Build and verify the requested hypotheses within `tol`.
    pub fn with_hypotheses(members: Vec<SymMatrix>, hyp: Hypotheses, tol: f64) -> Result<Self> {
        let family = Self::new(members)?;
        family.require(hyp, tol)?;
        Ok(family)
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1);
        Self {
            n,
            members: vec![SymMatrix::zeros(n); m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[SymMatrix] {
        &self.members
    }

    pub fn member(&self, alpha: usize) -> &SymMatrix {
        &self.members[alpha]
    }

    pub fn into_members(self) -> Vec<SymMatrix> {
        self.members
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        self.members.iter().map(SymMatrix::norm_sq).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.members.iter().all(SymMatrix::is_zero)
    }

    pub fn max_abs_trace(&self) -> f64 {
        self.members
            .iter()
            .fold(0.0, |acc, a| acc.max(a.trace().abs()))
    }

    /// Largest `|⟨A_α, A_β⟩|` over `α ≠ β`, with the offending pair.
    pub fn max_cross_inner(&self) -> (f64, Option<(usize, usize)>) {
        let mut worst = (0.0, None);
        for a in 0..self.m() {
            for b in (a + 1)..self.m() {
                let v = frobenius_inner(&self.members[a], &self.members[b])
                    .expect("members share a dimension")
                    .abs();
                if v > worst.0 || worst.1.is_none() {
                    worst = (v, Some((a, b)));
                }
            }
        }
        worst
    }

    pub fn require(&self, hyp: Hypotheses, tol: f64) -> Result<()> {
        if hyp.trace_free {
            for (alpha, a) in self.members.iter().enumerate() {
                let tr = a.trace();
                if tr.abs() > tol {
                    return Err(Error::Hypothesis {
                        hypothesis: "trace-free",
                        detail: format!("Tr A_{} = {tr:e}", alpha + 1),
                    });
                }
            }
        }
        if hyp.orthogonal {
            if let (v, Some((a, b))) = self.max_cross_inner() {
                if v > tol {
                    return Err(Error::Hypothesis {
                        hypothesis: "pairwise orthogonal",
                        detail: format!("|<A_{}, A_{}>| = {v:e}", a + 1, b + 1),
                    });
                }
            }
        }
        Ok(())
    }

    /// Conjugate every member: `A_α ↦ Q A_α Qᵀ` (a change of tangent frame).
    pub fn similarity(&self, q: &SquareMatrix) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|a| a.similarity(q))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    /// Rotate the normal frame: `A_α ↦ Σ_β Q_αβ A_β`.
    pub fn mix_normals(&self, q: &SquareMatrix) -> Result<Self> {
        Error::check_dim(self.m(), q.dim())?;
        let members = (0..self.m())
            .map(|alpha| {
                let mut acc = SymMatrix::zeros(self.n);
                for (beta, b) in self.members.iter().enumerate() {
                    acc = acc.add_scaled(q.get(alpha, beta), b)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    /// Extend the normal frame with zero matrices up to `m` members.
    pub fn padded(&self, m: usize) -> Self {
        let mut members = self.members.clone();
        while members.len() < m {
            members.push(SymMatrix::zeros(self.n));
        }
        Self { n: self.n, members }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Serialized form: `{ "n": int, "m": int, "matrices": [[upper triangle, row-major]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub n: usize,
    pub m: usize,
    pub matrices: Vec<Vec<f64>>,
}

impl From<MatrixFamily> for FamilyDocument {
    fn from(f: MatrixFamily) -> Self {
        Self {
            n: f.n,
            m: f.m(),
            matrices: f.members.iter().map(|a| a.upper().to_vec()).collect(),
        }
    }
}

impl TryFrom<FamilyDocument> for MatrixFamily {
    type Error = Error;

    fn try_from(doc: FamilyDocument) -> Result<Self> {
        if doc.n == 0 || doc.m == 0 {
            return Err(Error::Format("n and m must be positive".into()));
        }
        if doc.matrices.len() != doc.m {
            return Err(Error::Format(format!(
                "m = {} but {} matrices given",
                doc.m,
                doc.matrices.len()
            )));
        }
        let members = doc
            .matrices
            .into_iter()
            .enumerate()
            .map(|(alpha, upper)| {
                SymMatrix::from_upper(doc.n, upper).map_err(|_| {
                    Error::Format(format!(
                        "matrix {} must have n(n+1)/2 = {} entries",
                        alpha + 1,
                        doc.n * (doc.n + 1) / 2
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixFamily::new(members)
    }
}
