//! Nondegradability test for small channels.
//!
//! A channel `N` is degradable when some completely positive `D` satisfies
//! `D ∘ N = N^C`. In the matrix-unit basis composition is a matrix product,
//! so `D` is solved from `N·D = N^C` and its Choi matrix is checked for
//! positivity.

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::channel::PauliChannel;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const PINV_RELATIVE_CUTOFF: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const PSD_TOL: f64 = -1e-8;
pub const CONDITION_LIMIT: f64 = 1e10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kraus operators `E_k : C^dim_in -> C^dim_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl KrausSet {
    /// Checks shapes and trace preservation `Σ E_k† E_k = I`.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::MalformedMap("empty Kraus set".into()))?;
        let (dim_out, dim_in) = first.shape();
        if let Some(bad) = ops.iter().find(|e| e.shape() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator of shape {:?}, expected {:?}",
                bad.shape(),
                (dim_out, dim_in)
            )));
        }
        let set = Self { ops, dim_in, dim_out };
        let residual = set.trace_preservation_residual();
        if residual > TRACE_TOL {
            return Err(Error::MalformedMap(format!(
                "Kraus set is not trace preserving (residual {residual:.3e})"
            )));
        }
        Ok(set)
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Frobenius norm of `Σ E_k† E_k − I`.
    pub fn trace_preservation_residual(&self) -> f64 {
        let mut acc = -CMatrix::identity(self.dim_in, self.dim_in);
        for e in &self.ops {
            acc += e.adjoint() * e;
        }
        acc.norm()
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for e in &self.ops {
            out += e * rho * e.adjoint();
        }
        out
    }
}

fn pauli_matrices() -> [CMatrix; 4] {
    let i = Complex64::i();
    [
        CMatrix::identity(2, 2),
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
    ]
}

/// `√p_i I, √p_x X, √p_y Y, √p_z Z`, in that order, dropping zero terms.
pub fn kraus_from_pauli(ch: &PauliChannel) -> KrausSet {
    let ops = ch
        .as_array()
        .into_iter()
        .zip(pauli_matrices())
        .filter(|(p, _)| *p > 0.0)
        .map(|(p, sigma)| sigma * c(p.sqrt()))
        .collect();
    KrausSet::new(ops).expect("Pauli channel Kraus set is trace preserving")
}

/// Linear map on operators in the matrix-unit basis:
/// `map(|i⟩⟨j|) = Σ_kl M[(i,j),(k,l)] |k⟩⟨l|`, rows `i·dim_in + j`,
/// columns `k·dim_out + l`. Composition `B ∘ A` is the product `A·B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrixRep {
    matrix: CMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChannelMatrixRep {
    pub fn new(matrix: CMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        if matrix.shape() != (dim_in * dim_in, dim_out * dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "map {dim_in}->{dim_out} needs a {}x{} matrix, got {:?}",
                dim_in * dim_in,
                dim_out * dim_out,
                matrix.shape()
            )));
        }
        Ok(Self { matrix, dim_in, dim_out })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "input of shape {:?} for a map on dimension {}",
                rho.shape(),
                self.dim_in
            )));
        }
        let d = self.dim_out;
        let mut out = CMatrix::zeros(d, d);
        for i in 0..self.dim_in {
            for j in 0..self.dim_in {
                let r = rho[(i, j)];
                if r == Complex64::ZERO {
                    continue;
                }
                let row = i * self.dim_in + j;
                for k in 0..d {
                    for l in 0..d {
                        out[(k, l)] += r * self.matrix[(row, k * d + l)];
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for ChannelMatrixRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<[f64; 2]>> = self
            .matrix
            .row_iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let mut st = s.serialize_struct("ChannelMatrixRep", 3)?;
        st.serialize_field("dim_in", &self.dim_in)?;
        st.serialize_field("dim_out", &self.dim_out)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

pub fn natural_rep(k: &KrausSet) -> ChannelMatrixRep {
    let (din, dout) = (k.dim_in, k.dim_out);
    let mut m = CMatrix::zeros(din * din, dout * dout);
    for e in &k.ops {
        for i in 0..din {
            for j in 0..din {
                for kk in 0..dout {
                    for l in 0..dout {
                        m[(i * din + j, kk * dout + l)] += e[(kk, i)] * e[(l, j)].conj();
                    }
                }
            }
        }
    }
    ChannelMatrixRep {
        matrix: m,
        dim_in: din,
        dim_out: dout,
    }
}

/// Complement from the isometry `U = Σ_k E_k ⊗ |k⟩_E`, tracing out the
/// output: `(F_b)_{k,i} = (E_k)_{b,i}`. The environment basis follows the
/// Kraus index order.
pub fn complementary(k: &KrausSet) -> KrausSet {
    let n = k.ops.len();
    let ops = (0..k.dim_out)
        .map(|b| CMatrix::from_fn(n, k.dim_in, |kk, i| k.ops[kk][(b, i)]))
        .collect();
    KrausSet::new(ops).expect("complement of a trace-preserving set is trace preserving")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradingSolution {
    pub map: ChannelMatrixRep,
    /// `‖N·D − N^C‖_F`.
    pub residual: f64,
    /// Ratio of extreme singular values of `N`; infinite when singular.
    pub condition_number: f64,
}

/// Least-squares `D` with `N·D = N^C`, via the pseudoinverse of `N`.
pub fn solve_degrading(n: &ChannelMatrixRep, nc: &ChannelMatrixRep) -> Result<DegradingSolution> {
    if n.dim_in != nc.dim_in {
        return Err(Error::DimensionMismatch(format!(
            "channel input dimension {} differs from complement input dimension {}",
            n.dim_in, nc.dim_in
        )));
    }
    let svd = n.matrix.clone().svd(true, true);
    let s = &svd.singular_values;
    let s_max = s.max();
    let s_min = s.min();
    let condition_number = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
    let pinv = svd
        .pseudo_inverse(s_max * PINV_RELATIVE_CUTOFF)
        .map_err(|e| Error::MalformedMap(e.to_string()))?;
    let d = pinv * &nc.matrix;
    let residual = (&n.matrix * &d - &nc.matrix).norm();
    Ok(DegradingSolution {
        map: ChannelMatrixRep {
            matrix: d,
            dim_in: n.dim_out,
            dim_out: nc.dim_out,
        },
        residual,
        condition_number,
    })
}

/// `C[(i,k),(j,l)] = D[(i,j),(k,l)]`, rows `i·dim_out + k`.
pub fn choi_of_map(d: &ChannelMatrixRep) -> Result<CMatrix> {
    let (din, dout) = (d.dim_in, d.dim_out);
    let choi = CMatrix::from_fn(din * dout, din * dout, |r, col| {
        let (i, k) = (r / dout, r % dout);
        let (j, l) = (col / dout, col % dout);
        d.matrix[(i * din + j, k * dout + l)]
    });
    let skew = (&choi - choi.adjoint()).camax();
    let scale = choi.camax().max(1.0);
    if skew > HERMITIAN_TOL * scale {
        return Err(Error::MalformedMap(format!(
            "Choi matrix is not Hermitian (deviation {skew:.3e})"
        )));
    }
    Ok(choi)
}

/// Eigenvalues of a Hermitian matrix, ascending; the input is symmetrized first.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let sym = (h + h.adjoint()) * c(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegradabilityStatus {
    Degradable,
    NotDegradable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DegradabilityVerdict {
    pub status: DegradabilityStatus,
    pub residual: f64,
    pub min_choi_eigenvalue: f64,
    pub condition_number: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub solved_map: ChannelMatrixRep,
}

pub fn degradability_verdict(k: &KrausSet) -> Result<DegradabilityVerdict> {
    let n = natural_rep(k);
    let nc = natural_rep(&complementary(k));
    let sol = solve_degrading(&n, &nc)?;
    let choi = choi_of_map(&sol.map)?;
    let min_choi_eigenvalue = hermitian_eigenvalues(&choi)[0];
    let fits = sol.residual <= RESIDUAL_TOL;
    let (status, note) = if sol.condition_number <= CONDITION_LIMIT {
        if fits && min_choi_eigenvalue >= PSD_TOL {
            (DegradabilityStatus::Degradable, None)
        } else {
            (DegradabilityStatus::NotDegradable, None)
        }
    } else if !fits {
        (
            DegradabilityStatus::NotDegradable,
            Some("channel matrix is singular and no linear map solves N·D = N^C".to_string()),
        )
    } else {
        (
            DegradabilityStatus::Inconclusive,
            Some(
                "channel matrix is singular; the solved map is one member of an affine family"
                    .to_string(),
            ),
        )
    };
    Ok(DegradabilityVerdict {
        status,
        residual: sol.residual,
        min_choi_eigenvalue,
        condition_number: sol.condition_number,
        note,
        solved_map: sol.map,
    })
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// `S(N(ρ)) − S(N^C(ρ))`.
pub fn coherent_information(k: &KrausSet, rho: &CMatrix) -> f64 {
    von_neumann_entropy(&k.apply(rho)) - von_neumann_entropy(&complementary(k).apply(rho))
}
