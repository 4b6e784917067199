//! The elementary classifier: a two-qubit circuit built from Y-rotations and
//! CNOT, so every gate is real orthogonal and the output state has real
//! amplitudes.
//!
//! Layer `l` (1-indexed) applies, in order:
//! 1. a data rotation `Ry(encoding_scale * x[(l-1) mod D])` on qubit 0,
//! 2. a trainable rotation `Ry(angle_map[bit])` on qubit 0, where `bit` is
//!    the l-th binary parameter,
//! 3. if enabled, CNOT with control qubit 0 and target qubit 1.
//!
//! Qubit 0 is the class qubit: the probability of reading `|10>` decides the
//! predicted class.

use crate::error::{Error, Result};

/// Architecture of the elementary classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    /// Number of binary trainable parameters, one per layer.
    pub n_params: usize,
    /// Dimensionality D of the feature vectors.
    pub data_dim: usize,
    /// Radians of rotation per unit feature value.
    pub encoding_scale: f64,
    /// Trainable rotation angle for bit values 0 and 1.
    pub angle_map: [f64; 2],
    /// Whether each layer ends with CNOT(q0 -> q1).
    pub entangler_enabled: bool,
}

impl CircuitSpec {
    /// Validating constructor. Requires `n_params >= 1`, `data_dim >= 1` and
    /// `angle_map[0] != angle_map[1]` (equal angles make the parameters inert).
    pub fn new(
        n_params: usize,
        data_dim: usize,
        encoding_scale: f64,
        angle_map: [f64; 2],
        entangler_enabled: bool,
    ) -> Result<Self> {
        if n_params == 0 {
            return Err(Error::InvalidSpec("n_params must be >= 1".into()));
        }
        if data_dim == 0 {
            return Err(Error::InvalidSpec("data_dim must be >= 1".into()));
        }
        if angle_map[0] == angle_map[1] {
            return Err(Error::InvalidSpec(format!(
                "angle_map(0) == angle_map(1) == {}: trainable parameters would be inert",
                angle_map[0]
            )));
        }
        Ok(Self {
            n_params,
            data_dim,
            encoding_scale,
            angle_map,
            entangler_enabled,
        })
    }

    /// Default architecture: encoding scale pi, angles -pi/4 / +pi/4,
    /// entangler on.
    pub fn with_defaults(n_params: usize, data_dim: usize) -> Result<Self> {
        Self::new(
            n_params,
            data_dim,
            std::f64::consts::PI,
            [-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4],
            true,
        )
    }

    /// Trainable rotation angle for one bit value.
    #[inline]
    pub fn angle(&self, bit: u8) -> f64 {
        self.angle_map[bit as usize]
    }
}

/// One assignment of the n binary trainable parameters.
///
/// Bit `j` selects the trainable angle of layer `j+1`. The integer index uses
/// bit `j` as the coefficient of `2^j` (bit 0 is the least significant bit);
/// this convention is shared by every module that enumerates configurations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamConfig {
    bits: Vec<u8>,
}

impl ParamConfig {
    /// Build from explicit bits. Values must be 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidSpec("parameter bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    /// Build the configuration with integer index `index` out of `2^len`.
    pub fn from_index(index: usize, len: usize) -> Self {
        let bits = (0..len).map(|j| ((index >> j) & 1) as u8).collect();
        Self { bits }
    }

    /// The integer index of this configuration (bit j weighs 2^j).
    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .map(|(j, &b)| (b as usize) << j)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bit(&self, j: usize) -> u8 {
        self.bits[j]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Bits rendered in parameter order (layer 1 first), e.g. "0110".
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    /// Parse a bit string in parameter order (layer 1 first).
    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSpec(format!(
                    "invalid character '{other}' in parameter bit string"
                ))),
            })
            .collect::<Result<_>>()?;
        Self::new(bits)
    }
}

/// One training or testing point: D features (expected within [-1, 1]) and a
/// binary class label.
#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint {
    pub features: Vec<f64>,
    pub label: u8,
}

impl DataPoint {
    pub fn new(features: Vec<f64>, label: u8) -> Result<Self> {
        if label > 1 {
            return Err(Error::InvalidSpec(format!(
                "label must be 0 or 1, got {label}"
            )));
        }
        Ok(Self { features, label })
    }
}

/// Real amplitudes of a two-qubit state over the basis {|00>, |01>, |10>, |11>},
/// index = 2*q0 + q1 with q0 the class qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec4 {
    pub amps: [f64; 4],
}

impl StateVec4 {
    /// The |00> state.
    pub fn zero() -> Self {
        Self {
            amps: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Probability of measuring `|10>` (class qubit 1, second qubit 0).
    pub fn prob_class_one(&self) -> f64 {
        self.amps[2] * self.amps[2]
    }

    #[inline]
    fn rotate_q0(&mut self, angle: f64) {
        let (s, c) = (angle / 2.0).sin_cos();
        for q1 in 0..2 {
            let lo = q1; // q0 = 0
            let hi = 2 + q1; // q0 = 1
            let (v0, v1) = (self.amps[lo], self.amps[hi]);
            self.amps[lo] = c * v0 - s * v1;
            self.amps[hi] = s * v0 + c * v1;
        }
    }

    #[inline]
    fn cnot(&mut self) {
        self.amps.swap(2, 3); // |10> <-> |11>
    }
}

/// Run the elementary classifier on one feature vector, starting from |00>.
///
/// Returns the final two-qubit state. All gates are real orthogonal, so the
/// amplitudes are exactly real by construction.
pub fn run_elementary(spec: &CircuitSpec, params: &ParamConfig, features: &[f64]) -> Result<StateVec4> {
    if features.len() != spec.data_dim {
        return Err(Error::DimensionMismatch {
            what: "features",
            expected: spec.data_dim,
            got: features.len(),
        });
    }
    if params.len() != spec.n_params {
        return Err(Error::DimensionMismatch {
            what: "params",
            expected: spec.n_params,
            got: params.len(),
        });
    }
    let mut state = StateVec4::zero();
    for layer in 0..spec.n_params {
        state.rotate_q0(spec.encoding_scale * features[layer % spec.data_dim]);
        state.rotate_q0(spec.angle(params.bit(layer)));
        if spec.entangler_enabled {
            state.cnot();
        }
    }
    Ok(state)
}

/// The full circuit as a single 4x4 matrix (columns are the images of the
/// basis states). The circuit is a product of O(n) two-qubit gates, so the
/// matrix is computed in time linear in `n_params`.
pub fn circuit_unitary(spec: &CircuitSpec, params: &ParamConfig, features: &[f64]) -> Result<[[f64; 4]; 4]> {
    if features.len() != spec.data_dim {
        return Err(Error::DimensionMismatch {
            what: "features",
            expected: spec.data_dim,
            got: features.len(),
        });
    }
    if params.len() != spec.n_params {
        return Err(Error::DimensionMismatch {
            what: "params",
            expected: spec.n_params,
            got: params.len(),
        });
    }
    // cols[b] is the image of basis state b; return as matrix[row][col].
    let mut m = [[0.0f64; 4]; 4];
    for b in 0..4 {
        let mut state = StateVec4 { amps: [0.0; 4] };
        state.amps[b] = 1.0;
        for layer in 0..spec.n_params {
            state.rotate_q0(spec.encoding_scale * features[layer % spec.data_dim]);
            state.rotate_q0(spec.angle(params.bit(layer)));
            if spec.entangler_enabled {
                state.cnot();
            }
        }
        for r in 0..4 {
            m[r][b] = state.amps[r];
        }
    }
    Ok(m)
}

/// Signed amplitude `<y 0| U(params, x) |00>` for one point: the component at
/// |00> when the label is 0, at |10> when the label is 1.
pub fn point_amplitude(spec: &CircuitSpec, params: &ParamConfig, point: &DataPoint) -> Result<f64> {
    let state = run_elementary(spec, params, &point.features)?;
    Ok(if point.label == 1 {
        state.amps[2]
    } else {
        state.amps[0]
    })
}

/// The training objective: product over points of the probability of
/// measuring the correct class with the second qubit zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue {
    /// The product of per-point probabilities, in [0, 1].
    pub value: f64,
    /// Sum of per-point log probabilities; -inf when any factor is zero.
    /// Kept alongside `value` because the product underflows for large k.
    pub log_value: f64,
}

/// Evaluate the objective over a data set. The empty product is 1.
pub fn objective(spec: &CircuitSpec, params: &ParamConfig, data: &[DataPoint]) -> Result<ObjectiveValue> {
    let mut value = 1.0;
    let mut log_value = 0.0;
    for point in data {
        let amp = point_amplitude(spec, params, point)?;
        let p = amp * amp;
        value *= p;
        log_value += p.ln(); // ln(0) = -inf, as documented
    }
    Ok(ObjectiveValue { value, log_value })
}

/// Classify one feature vector: class 1 iff the probability of |10> is
/// strictly greater than the threshold. Exact ties go to class 0.
pub fn classify(spec: &CircuitSpec, params: &ParamConfig, features: &[f64], threshold: f64) -> Result<u8> {
    let state = run_elementary(spec, params, features)?;
    Ok(if state.prob_class_one() > threshold { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spec1(angle1: f64, entangler: bool) -> CircuitSpec {
        CircuitSpec::new(1, 1, 0.0, [0.0, angle1], entangler).unwrap()
    }

    #[test]
    fn identity_circuit_fixes_initial_state() {
        let spec = spec1(FRAC_PI_2, false);
        let params = ParamConfig::new(vec![0]).unwrap();
        let st = run_elementary(&spec, &params, &[0.3]).unwrap();
        assert_eq!(st.amps, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn half_pi_rotation_without_entangler() {
        // Frozen from the 4x4 matrix-product oracle in tests/matrix_oracle.rs.
        let spec = spec1(FRAC_PI_2, false);
        let params = ParamConfig::new(vec![1]).unwrap();
        let st = run_elementary(&spec, &params, &[0.0]).unwrap();
        let r = 0.5f64.sqrt();
        assert!((st.amps[0] - r).abs() < 1e-15);
        assert!(st.amps[1].abs() < 1e-15);
        assert!((st.amps[2] - r).abs() < 1e-15);
        assert!(st.amps[3].abs() < 1e-15);
    }

    #[test]
    fn half_pi_rotation_with_entangler_moves_10_to_11() {
        let spec = spec1(FRAC_PI_2, true);
        let params = ParamConfig::new(vec![1]).unwrap();
        let st = run_elementary(&spec, &params, &[0.0]).unwrap();
        let r = 0.5f64.sqrt();
        assert!((st.amps[0] - r).abs() < 1e-15);
        assert!(st.amps[1].abs() < 1e-15);
        assert!(st.amps[2].abs() < 1e-15);
        assert!((st.amps[3] - r).abs() < 1e-15);
    }

    #[test]
    fn point_amplitude_reads_label_component() {
        let spec = spec1(FRAC_PI_2, false);
        let id = ParamConfig::new(vec![0]).unwrap();
        let p0 = DataPoint::new(vec![0.1], 0).unwrap();
        let p1 = DataPoint::new(vec![0.1], 1).unwrap();
        assert_eq!(point_amplitude(&spec, &id, &p0).unwrap(), 1.0);
        assert_eq!(point_amplitude(&spec, &id, &p1).unwrap(), 0.0);

        let one = ParamConfig::new(vec![1]).unwrap();
        let amp = point_amplitude(&spec, &one, &p1).unwrap();
        assert!((amp - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn objective_empty_product_is_one() {
        let spec = spec1(FRAC_PI_2, false);
        let params = ParamConfig::new(vec![0]).unwrap();
        let obj = objective(&spec, &params, &[]).unwrap();
        assert_eq!(obj.value, 1.0);
        assert_eq!(obj.log_value, 0.0);
    }

    #[test]
    fn objective_single_point_is_squared_amplitude() {
        let spec = spec1(FRAC_PI_2, false);
        let params = ParamConfig::new(vec![1]).unwrap();
        let point = DataPoint::new(vec![0.0], 1).unwrap();
        let amp = point_amplitude(&spec, &params, &point).unwrap();
        let obj = objective(&spec, &params, std::slice::from_ref(&point)).unwrap();
        assert!((obj.value - amp * amp).abs() < 1e-15);
        assert!((obj.value - obj.log_value.exp()).abs() < 1e-9 * obj.value);
    }

    #[test]
    fn classify_examples_and_tie_rule() {
        // Identity circuit: p(|10>) = 0, class 0.
        let spec = spec1(FRAC_PI_2, false);
        let id = ParamConfig::new(vec![0]).unwrap();
        assert_eq!(classify(&spec, &id, &[0.5], 0.5).unwrap(), 0);

        // Full flip: p(|10>) = 1, class 1.
        let spec_pi = spec1(PI, false);
        let one = ParamConfig::new(vec![1]).unwrap();
        assert_eq!(classify(&spec_pi, &one, &[0.2], 0.5).unwrap(), 1);

        // p(|10>) = 0.5 exactly: strict inequality sends ties to class 0.
        let spec_half = spec1(FRAC_PI_2, false);
        let st = run_elementary(&spec_half, &one, &[0.0]).unwrap();
        assert!((st.prob_class_one() - 0.5).abs() < 1e-15);
        assert_eq!(classify(&spec_half, &one, &[0.0], 0.5).unwrap(), 0);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let spec = spec1(FRAC_PI_2, false);
        let params = ParamConfig::new(vec![0]).unwrap();
        assert!(matches!(
            run_elementary(&spec, &params, &[0.1, 0.2]),
            Err(Error::DimensionMismatch { .. })
        ));
        let long = ParamConfig::new(vec![0, 1]).unwrap();
        assert!(matches!(
            run_elementary(&spec, &long, &[0.1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inert_angle_map_is_rejected() {
        assert!(matches!(
            CircuitSpec::new(2, 1, 1.0, [0.3, 0.3], true),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn param_config_index_round_trip() {
        for idx in 0..32 {
            let cfg = ParamConfig::from_index(idx, 5);
            assert_eq!(cfg.index(), idx);
            assert_eq!(cfg.len(), 5);
        }
        // bit 0 is the least significant bit
        let cfg = ParamConfig::from_index(0b0110, 4);
        assert_eq!(cfg.bits(), &[0, 1, 1, 0]);
        assert_eq!(cfg.bit_string(), "0110");
        assert_eq!(ParamConfig::parse_bit_string("0110").unwrap(), cfg);
    }

    #[test]
    fn determinism_identical_inputs_identical_outputs() {
        let spec = CircuitSpec::with_defaults(6, 2).unwrap();
        let params = ParamConfig::from_index(45, 6);
        let x = [0.37, -0.81];
        let a = run_elementary(&spec, &params, &x).unwrap();
        let b = run_elementary(&spec, &params, &x).unwrap();
        assert_eq!(a.amps, b.amps);
    }
}
