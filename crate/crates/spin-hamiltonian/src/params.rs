use crate::error::SpinError;

/// g·μ_B/h per unit g, in MHz/mT.
pub const MU_B_MHZ_PER_MT: f64 = 13.996;

pub const HYPERFINE_SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Hyperfine tensor A_i (MHz) coupling the electron spin to one
/// spin-1/2 nucleus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperfineTensor(pub [[f64; 3]; 3]);

impl HyperfineTensor {
    pub fn zz(a_zz: f64) -> Self {
        let mut a = [[0.0; 3]; 3];
        a[2][2] = a_zz;
        Self(a)
    }

    pub fn a_zz(&self) -> f64 {
        self.0[2][2]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| (self.0[i][j] - self.0[j][i]).abs() <= HYPERFINE_SYMMETRY_TOLERANCE))
    }

    pub fn is_zz_only(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| (i == 2 && j == 2) || self.0[i][j] == 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystemParams {
    /// Longitudinal zero-field splitting, MHz.
    pub d: f64,
    /// Transverse zero-field splitting, MHz.
    pub e: f64,
    pub g: f64,
    /// Magnetic field (Bx, By, Bz), mT.
    pub b: [f64; 3],
    pub hyperfine: Vec<HyperfineTensor>,
}

impl SpinSystemParams {
    pub fn new(d: f64, e: f64) -> Self {
        Self {
            d,
            e,
            g: 2.0,
            b: [0.0; 3],
            hyperfine: Vec::new(),
        }
    }

    pub fn with_field(mut self, b: [f64; 3]) -> Self {
        self.b = b;
        self
    }

    pub fn with_bz(mut self, bz: f64) -> Self {
        self.b[2] = bz;
        self
    }

    pub fn with_nucleus(mut self, a: HyperfineTensor) -> Self {
        self.hyperfine.push(a);
        self
    }

    /// g·μ_B in MHz/mT.
    pub fn gamma_e(&self) -> f64 {
        self.g * MU_B_MHZ_PER_MT
    }

    pub fn nuclear_dim(&self) -> usize {
        1 << self.hyperfine.len()
    }

    pub fn validate(&self) -> Result<(), SpinError> {
        let finite = [self.d, self.e, self.g].iter().chain(&self.b).all(|x| x.is_finite());
        if !finite {
            return Err(SpinError::InvalidParameter("non-finite spin parameter".into()));
        }
        for (i, a) in self.hyperfine.iter().enumerate() {
            if !a.is_symmetric() {
                return Err(SpinError::InvalidParameter(format!("hyperfine tensor {i} is not symmetric")));
            }
        }
        Ok(())
    }
}
