use nalgebra::{Complex, ComplexField, DMatrix};

/// Scalar field of the relation calculus: `f64` for the main real path and
/// `Complex<f64>` for checks at non-real spectral parameters.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {}

impl Scalar for f64 {}
impl Scalar for Complex<f64> {}

/// Lift a real matrix into the scalar field `T`.
pub fn promote<T: Scalar>(m: &DMatrix<f64>) -> DMatrix<T> {
    m.map(T::from_real)
}
