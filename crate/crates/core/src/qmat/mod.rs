//! Dense complex linear algebra over labeled qubit registers.
//!
//! Register order in every tensor product is the declaration order of the
//! [`RegisterLayout`]; qubits are big-endian, both within a register and
//! globally (the first declared qubit is the most significant bit of a
//! basis index).

mod density;
mod layout;
mod linalg;
mod povm;
mod random;
mod state;

pub use density::{partial_trace_dims, DensityOperator};
pub use layout::{Party, Register, RegisterLayout, Role, DEFAULT_MAX_WIDTH};
pub use linalg::{
    abs, herm_eig, is_unitary, kron, log2_spectral, operator_function, sqrt_psd, svd, HermEig,
    MatrixFunction, SpectralLog, Svd,
};
pub use povm::Povm;
pub use random::{random_density, random_povm, random_state, random_unitary, SeededRng};
pub use state::PureState;

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

/// Kronecker products of operators and states.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> crate::Result<Self>;
}

impl Tensor for CMatrix {
    fn tensor(&self, other: &Self) -> crate::Result<Self> {
        Ok(kron(self, other))
    }
}

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Identity matrix of the given dimension.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `|v><v|` for a state vector.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Computational basis vector `e_index` of dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = cr(1.0);
    v
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| cr(x)),
    ))
}

pub(crate) fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise deviation of `m` from `m^dagger`.
pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Serde adapter: complex numbers as `[re, im]` pairs.
pub mod serde_complex {
    use super::{CMatrix, CVector, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect()
    }

    pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, String> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err("ragged matrix rows".into());
        }
        Ok(CMatrix::from_fn(n, m, |i, j| {
            C64::new(rows[i][j][0], rows[i][j][1])
        }))
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
            matrix_to_rows(m).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
            let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
            rows_to_matrix(&rows).map_err(serde::de::Error::custom)
        }
    }

    pub mod vector {
        use super::*;

        pub fn serialize<S: Serializer>(v: &CVector, s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CVector, D::Error> {
            let v = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(CVector::from_iterator(
                v.len(),
                v.iter().map(|p| C64::new(p[0], p[1])),
            ))
        }
    }
}
