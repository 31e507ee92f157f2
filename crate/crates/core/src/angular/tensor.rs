use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::cg::{cg, SignedSqrtRational};
use super::m_at;
use crate::{Error, HalfInt, Result};

/// Spherical tensor operator `T^k_q` on spin `j`.
///
/// Column `c` (magnetic number `m = j - c`) has a single nonzero entry, at
/// row `c - q`, equal to `sqrt((2k+1)/(2j+1)) * <k q; j m | j m+q>`.
#[derive(Clone, Debug)]
pub struct SphericalTensor {
    j: HalfInt,
    k: u32,
    q: i32,
    exact: Vec<SignedSqrtRational>,
    values: Vec<f64>,
}

impl SphericalTensor {
    pub fn new(j: HalfInt, k: u32, q: i32) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::InvalidInput(format!("negative spin {j}")));
        }
        if i64::from(k) > j.twice() || q.unsigned_abs() > k {
            return Err(Error::OutOfRange(format!(
                "T^{k}_{q} does not exist on spin {j} (need k <= 2j, |q| <= k)"
            )));
        }
        let norm = BigRational::new(BigInt::from(2 * k + 1), BigInt::from(j.twice() + 1));
        let norm = SignedSqrtRational::sqrt(norm);
        let kk = HalfInt::integer(i64::from(k));
        let qq = HalfInt::integer(i64::from(q));
        let dim = j.dim();
        let mut exact = Vec::with_capacity(dim);
        for col in 0..dim {
            let m = m_at(j, col);
            let c = cg(kk, qq, j, m, j, m + qq)?;
            exact.push(&norm * &c);
        }
        let values = exact.iter().map(SignedSqrtRational::to_f64).collect();
        Ok(SphericalTensor { j, k, q, exact, values })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn rank(&self) -> u32 {
        self.k
    }

    pub fn component(&self) -> i32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Row holding the nonzero entry of column `col`, if inside the matrix.
    pub fn row_of(&self, col: usize) -> Option<usize> {
        let row = col as i64 - i64::from(self.q);
        (0..self.dim() as i64).contains(&row).then_some(row as usize)
    }

    /// Exact entry in column `col` (zero when the row falls outside).
    pub fn exact_column(&self, col: usize) -> &SignedSqrtRational {
        &self.exact[col]
    }

    pub fn column_value(&self, col: usize) -> f64 {
        self.values[col]
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match self.row_of(col) {
            Some(r) if r == row => self.values[col],
            _ => 0.0,
        }
    }

    /// `T |v>`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (col, x) in v.iter().enumerate() {
            if let Some(row) = self.row_of(col) {
                out[row] += x * self.values[col];
            }
        }
        Ok(out)
    }

    /// `<bra| T |ket>`.
    pub fn sandwich(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        debug_assert_eq!(bra.len(), self.dim());
        debug_assert_eq!(ket.len(), self.dim());
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, x) in ket.iter().enumerate() {
            if let Some(row) = self.row_of(col) {
                acc += bra[row].conj() * x * self.values[col];
            }
        }
        acc
    }

    /// Real-valued variant of [`sandwich`](Self::sandwich).
    pub fn sandwich_real(&self, bra: &[f64], ket: &[f64]) -> f64 {
        ket.iter()
            .enumerate()
            .filter_map(|(col, x)| self.row_of(col).map(|row| bra[row] * x * self.values[col]))
            .sum()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for col in 0..self.dim() {
            if let Some(row) = self.row_of(col) {
                m[(row, col)] = self.values[col];
            }
        }
        m
    }

    pub fn to_complex_matrix(&self) -> DMatrix<Complex64> {
        self.to_matrix().map(|x| Complex64::new(x, 0.0))
    }
}

/// Expansion of a product `T^{k1}_{q1} T^{k2}_{q2}` in the tensor basis.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    /// Component `q1 + q2` shared by every term.
    pub q: i32,
    /// Coefficient per rank; ranks with vanishing coefficient are omitted.
    pub coefficients: BTreeMap<u32, f64>,
    /// Frobenius norm of the reconstruction error.
    pub residual: f64,
}

/// Expands `t1 * t2` in the orthonormal spherical tensor basis by trace
/// projection, `c_k = Tr(T^{k dagger}_q t1 t2)`.
pub fn decompose_product(t1: &SphericalTensor, t2: &SphericalTensor) -> Result<ProductDecomposition> {
    if t1.j() != t2.j() {
        return Err(Error::InvalidInput(format!(
            "tensors act on different spins {} and {}",
            t1.j(),
            t2.j()
        )));
    }
    let j = t1.j();
    let q = t1.component() + t2.component();
    let product = t1.to_matrix() * t2.to_matrix();
    let mut coefficients = BTreeMap::new();
    let mut reconstruction = DMatrix::<f64>::zeros(product.nrows(), product.ncols());
    for k in q.unsigned_abs()..=j.twice() as u32 {
        let basis = SphericalTensor::new(j, k, q)?.to_matrix();
        let c = basis.component_mul(&product).sum();
        if c.abs() > 1e-14 {
            coefficients.insert(k, c);
            reconstruction += basis * c;
        }
    }
    let residual = (product - reconstruction).norm();
    Ok(ProductDecomposition { q, coefficients, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn rank_zero_is_scaled_identity() {
        for tj in [1, 4, 7, 12] {
            let t = SphericalTensor::new(h(tj), 0, 0).unwrap();
            let expected = 1.0 / ((tj + 1) as f64).sqrt();
            for c in 0..t.dim() {
                assert_eq!(t.row_of(c), Some(c));
                assert!((t.column_value(c) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_one_zero_is_proportional_to_jz() {
        for tj in [1, 3, 5, 11] {
            let j = h(tj);
            let jf = j.to_f64();
            let t = SphericalTensor::new(j, 1, 0).unwrap();
            // <k q; j m| ordering gives T^1_0 = -scale * J_z
            let scale = (3.0 / ((2.0 * jf + 1.0) * jf * (jf + 1.0))).sqrt();
            for c in 0..t.dim() {
                let m = m_at(j, c).to_f64();
                assert!((t.column_value(c) + scale * m).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn out_of_range_rank_and_component() {
        assert!(matches!(SphericalTensor::new(h(3), 4, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(SphericalTensor::new(h(3), 2, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn unit_trace_norm() {
        let t = SphericalTensor::new(h(3), 1, 1).unwrap();
        let m = t.to_matrix();
        assert!(((m.transpose() * &m).trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn apply_matches_matrix() {
        let t = SphericalTensor::new(h(5), 2, -1).unwrap();
        let v: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let out = t.apply(&v).unwrap();
        let dense = t.to_complex_matrix() * nalgebra::DVector::from_vec(v.clone());
        for i in 0..6 {
            assert!((out[i] - dense[i]).norm() < 1e-14);
        }
        assert!(t.apply(&v[..3]).is_err());
    }

    #[test]
    fn identity_factor_product() {
        let j = h(5);
        let t0 = SphericalTensor::new(j, 0, 0).unwrap();
        let t = SphericalTensor::new(j, 3, -2).unwrap();
        let d = decompose_product(&t0, &t).unwrap();
        assert_eq!(d.coefficients.len(), 1);
        assert!((d.coefficients[&3] - 1.0 / 6f64.sqrt()).abs() < 1e-14);
        assert!(d.residual < 1e-12);
    }

    #[test]
    fn product_ranks_follow_triangle() {
        let j = h(2);
        let t = SphericalTensor::new(j, 1, 0).unwrap();
        let d = decompose_product(&t, &t).unwrap();
        assert_eq!(d.q, 0);
        assert!(d.coefficients.keys().all(|k| *k <= 2));
        assert!(d.residual < 1e-12);
        assert!(decompose_product(&t, &SphericalTensor::new(h(4), 1, 0).unwrap()).is_err());
    }
}
