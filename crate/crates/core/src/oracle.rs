//! Simulation of the state-preparation oracle: the signed amplitude vector
//! over all parameter configurations for a fixed program, and (for small
//! sizes) the full joint program+training register state used to
//! cross-validate the factorized path.
//!
//! Two independent simulation routes are kept on purpose:
//!
//! * [`amplitude_vector`] exploits the product structure: one elementary
//!   circuit run per point per configuration, `O(2^n * n * k)` time and
//!   `O(2^n)` memory. This is the route the optimizer consumes.
//! * [`joint_state`] simulates the whole `2k + n` qubit register gate by
//!   gate, exponential in `2k + n`. It exists to certify the factorized
//!   route and is capped to desk scale.

use crate::circuit::{run_elementary, CircuitSpec, DataPoint, ParamConfig};
use crate::error::{Error, Result};

/// Default memory budget for factorized amplitude vectors (entries).
pub const DEFAULT_AMP_BUDGET: usize = 1 << 22;
/// Default cap on total qubits `2k + n` for the joint-register simulation.
pub const DEFAULT_JOINT_QUBIT_CAP: usize = 22;

/// Signed real amplitudes over all `2^n` parameter configurations for one
/// fixed program (label string).
///
/// `amps[j]` is the product of per-point amplitudes for the configuration
/// with integer index `j` (bit `j` convention of [`ParamConfig`]), optionally
/// scaled by `2^{-n/2}` when `include_norm_factor` is set. The square of an
/// entry is the objective value of that configuration (times `2^{-n}` when
/// the factor is included); the sign is kept because the suppression
/// polynomial acts on amplitudes, not probabilities.
#[derive(Debug, Clone)]
pub struct AmplitudeVector {
    /// Program: the label of each training point, in order.
    pub program: Vec<u8>,
    /// `2^n` signed amplitudes indexed by configuration.
    pub amps: Vec<f64>,
    /// Whether the `2^{-n/2}` uniform-superposition factor is included.
    pub include_norm_factor: bool,
    /// Number of trainable parameters n.
    pub n_params: usize,
}

impl AmplitudeVector {
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Sum of squared amplitudes.
    pub fn total_sq_norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }
}

/// Build the amplitude vector for the program given by `data`'s labels.
///
/// Uses the default memory budget of [`DEFAULT_AMP_BUDGET`] entries.
pub fn amplitude_vector(
    spec: &CircuitSpec,
    data: &[DataPoint],
    include_norm_factor: bool,
) -> Result<AmplitudeVector> {
    amplitude_vector_with_budget(spec, data, include_norm_factor, DEFAULT_AMP_BUDGET)
}

/// Build the amplitude vector with an explicit memory budget (entries).
pub fn amplitude_vector_with_budget(
    spec: &CircuitSpec,
    data: &[DataPoint],
    include_norm_factor: bool,
    budget: usize,
) -> Result<AmplitudeVector> {
    let n = spec.n_params;
    if n >= usize::BITS as usize || (1usize << n) > budget {
        return Err(Error::ResourceBudget {
            what: "amplitude vector",
            required: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            budget,
        });
    }
    let size = 1usize << n;
    let mut amps = vec![0.0f64; size];
    for (j, amp) in amps.iter_mut().enumerate() {
        let params = ParamConfig::from_index(j, n);
        let mut product = 1.0;
        for point in data {
            product *= crate::circuit::point_amplitude(spec, &params, point)?;
        }
        *amp = product;
    }
    if include_norm_factor {
        let factor = (size as f64).sqrt().recip();
        for a in amps.iter_mut() {
            *a *= factor;
        }
    }
    Ok(AmplitudeVector {
        program: data.iter().map(|p| p.label).collect(),
        amps,
        include_norm_factor,
        n_params: n,
    })
}

/// Full statevector of the joint program + training register.
///
/// Register layout (global index bit positions):
/// * training qubit `j` (parameter bit `j`) is index bit `j`, for `j < n`;
/// * point `i`'s ancilla ("second") qubit is index bit `n + 2i`;
/// * point `i`'s class qubit is index bit `n + 2i + 1`.
///
/// So a global index splits as `index = program_index * 2^n + train_index`,
/// and within the program part each point occupies one base-4 digit equal to
/// its `StateVec4` basis index `2*class + ancilla`, point 0 in the lowest
/// digit.
#[derive(Debug, Clone)]
pub struct JointState {
    pub amps: Vec<f64>,
    pub n_params: usize,
    pub n_points: usize,
}

impl JointState {
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Sum of squared amplitudes of the `2^n` slice at one program-register
    /// value (a full `2k`-bit assignment, ancilla bits included).
    pub fn program_weight(&self, program_index: usize) -> f64 {
        let size = 1usize << self.n_params;
        let base = program_index * size;
        self.amps[base..base + size].iter().map(|a| a * a).sum()
    }

    pub fn n_program_values(&self) -> usize {
        1usize << (2 * self.n_points)
    }
}

/// Simulate the full joint-register circuit with the default qubit cap.
pub fn joint_state(spec: &CircuitSpec, data: &[DataPoint]) -> Result<JointState> {
    joint_state_with_cap(spec, data, DEFAULT_JOINT_QUBIT_CAP)
}

/// Simulate the full joint-register circuit gate by gate.
///
/// The training register starts in the uniform superposition; every
/// elementary circuit is applied with its trainable rotation conditioned on
/// the corresponding training qubit (angle 0 on the control-0 branch, angle 1
/// on the control-1 branch).
pub fn joint_state_with_cap(spec: &CircuitSpec, data: &[DataPoint], qubit_cap: usize) -> Result<JointState> {
    let n = spec.n_params;
    let k = data.len();
    let total_qubits = n + 2 * k;
    if total_qubits > qubit_cap {
        return Err(Error::ResourceBudget {
            what: "joint register",
            required: 1usize.checked_shl(total_qubits as u32).unwrap_or(usize::MAX),
            budget: 1usize << qubit_cap,
        });
    }
    for point in data {
        if point.features.len() != spec.data_dim {
            return Err(Error::DimensionMismatch {
                what: "features",
                expected: spec.data_dim,
                got: point.features.len(),
            });
        }
    }
    let size = 1usize << total_qubits;
    let train_size = 1usize << n;
    let mut amps = vec![0.0f64; size];
    // Program register |0..0>, training register uniform.
    let init = (train_size as f64).sqrt().recip();
    for a in amps.iter_mut().take(train_size) {
        *a = init;
    }

    for (i, point) in data.iter().enumerate() {
        let class_bit = n + 2 * i + 1;
        let ancilla_bit = n + 2 * i;
        for layer in 0..n {
            let data_angle = spec.encoding_scale * point.features[layer % spec.data_dim];
            apply_ry(&mut amps, class_bit, data_angle);
            apply_ry_conditioned(
                &mut amps,
                class_bit,
                layer,
                spec.angle(0),
                spec.angle(1),
            );
            if spec.entangler_enabled {
                apply_cnot(&mut amps, class_bit, ancilla_bit);
            }
        }
    }
    Ok(JointState {
        amps,
        n_params: n,
        n_points: k,
    })
}

/// Extract the `2^n` amplitude slice at program bits `(y_i, 0)` for each
/// point, i.e. the branch where every point reads its program label with the
/// ancilla qubit zero. The result carries the `2^{-n/2}` factor.
pub fn slice_program(js: &JointState, program: &[u8]) -> Result<AmplitudeVector> {
    if program.len() != js.n_points {
        return Err(Error::DimensionMismatch {
            what: "program",
            expected: js.n_points,
            got: program.len(),
        });
    }
    let mut program_index = 0usize;
    for (i, &label) in program.iter().enumerate() {
        // per-point digit 2*class + ancilla, ancilla fixed to 0
        program_index += (2 * label as usize) << (2 * i);
    }
    let size = 1usize << js.n_params;
    let base = program_index * size;
    Ok(AmplitudeVector {
        program: program.to_vec(),
        amps: js.amps[base..base + size].to_vec(),
        include_norm_factor: true,
        n_params: js.n_params,
    })
}

#[inline]
fn apply_ry(amps: &mut [f64], target_bit: usize, angle: f64) {
    let (s, c) = (angle / 2.0).sin_cos();
    let mask = 1usize << target_bit;
    for idx in 0..amps.len() {
        if idx & mask == 0 {
            let hi = idx | mask;
            let (v0, v1) = (amps[idx], amps[hi]);
            amps[idx] = c * v0 - s * v1;
            amps[hi] = s * v0 + c * v1;
        }
    }
}

/// Rotation on `target_bit` whose angle is selected by `control_bit`:
/// `angle0` on the control-0 branch, `angle1` on the control-1 branch.
#[inline]
fn apply_ry_conditioned(amps: &mut [f64], target_bit: usize, control_bit: usize, angle0: f64, angle1: f64) {
    let (s0, c0) = (angle0 / 2.0).sin_cos();
    let (s1, c1) = (angle1 / 2.0).sin_cos();
    let tmask = 1usize << target_bit;
    let cmask = 1usize << control_bit;
    for idx in 0..amps.len() {
        if idx & tmask == 0 {
            let hi = idx | tmask;
            let (s, c) = if idx & cmask == 0 { (s0, c0) } else { (s1, c1) };
            let (v0, v1) = (amps[idx], amps[hi]);
            amps[idx] = c * v0 - s * v1;
            amps[hi] = s * v0 + c * v1;
        }
    }
}

#[inline]
fn apply_cnot(amps: &mut [f64], control_bit: usize, target_bit: usize) {
    let cmask = 1usize << control_bit;
    let tmask = 1usize << target_bit;
    for idx in 0..amps.len() {
        if idx & cmask != 0 && idx & tmask == 0 {
            amps.swap(idx, idx | tmask);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitSpec;

    fn identity_spec(n: usize) -> CircuitSpec {
        // encoding 0 and angles {0, 4pi}: Ry(4pi) is exactly the identity,
        // so every configuration runs the identity circuit while the
        // angle-map invariant still holds.
        CircuitSpec::new(n, 1, 0.0, [0.0, 4.0 * std::f64::consts::PI], false).unwrap()
    }

    #[test]
    fn identity_program_all_labels_zero() {
        let spec = identity_spec(1);
        let data = vec![DataPoint::new(vec![0.4], 0).unwrap()];
        let av = amplitude_vector(&spec, &data, false).unwrap();
        assert_eq!(av.amps.len(), 2);
        assert!((av.amps[0] - 1.0).abs() < 1e-15);
        assert!((av.amps[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_data_gives_unit_amplitudes() {
        let spec = CircuitSpec::with_defaults(1, 1).unwrap();
        let av = amplitude_vector(&spec, &[], false).unwrap();
        assert_eq!(av.amps, vec![1.0, 1.0]);
        let av_f = amplitude_vector(&spec, &[], true).unwrap();
        let r = 0.5f64.sqrt();
        assert!((av_f.amps[0] - r).abs() < 1e-15);
        assert!((av_f.amps[1] - r).abs() < 1e-15);
    }

    #[test]
    fn entries_square_to_objective() {
        let spec = CircuitSpec::with_defaults(3, 2).unwrap();
        let data = vec![
            DataPoint::new(vec![0.3, -0.7], 1).unwrap(),
            DataPoint::new(vec![-0.2, 0.9], 0).unwrap(),
        ];
        let av = amplitude_vector(&spec, &data, false).unwrap();
        for j in 0..av.len() {
            let params = ParamConfig::from_index(j, 3);
            let obj = crate::circuit::objective(&spec, &params, &data).unwrap();
            assert!((av.amps[j] * av.amps[j] - obj.value).abs() < 1e-12);
        }
        // with the factor: squares pick up 2^{-n}
        let av_f = amplitude_vector(&spec, &data, true).unwrap();
        for j in 0..av_f.len() {
            let params = ParamConfig::from_index(j, 3);
            let obj = crate::circuit::objective(&spec, &params, &data).unwrap();
            assert!((av_f.amps[j] * av_f.amps[j] - obj.value / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_is_single_scaling() {
        let spec = CircuitSpec::with_defaults(4, 1).unwrap();
        let data = vec![DataPoint::new(vec![0.5], 1).unwrap()];
        let plain = amplitude_vector(&spec, &data, false).unwrap();
        let scaled = amplitude_vector(&spec, &data, true).unwrap();
        let f = 0.25f64; // 2^{-4/2}
        for j in 0..plain.len() {
            assert_eq!(scaled.amps[j], plain.amps[j] * f);
        }
    }

    #[test]
    fn budget_exceeded_is_resource_error() {
        let spec = CircuitSpec::with_defaults(8, 1).unwrap();
        let err = amplitude_vector_with_budget(&spec, &[], false, 128).unwrap_err();
        assert!(matches!(err, Error::ResourceBudget { .. }));
    }

    #[test]
    fn joint_identity_instance_example() {
        // n=1, k=1, identity circuit: amplitude 1/sqrt(2) at program (0,0)
        // for both training values, zero elsewhere.
        let inert = identity_spec(1);
        let data = vec![DataPoint::new(vec![0.1], 0).unwrap()];
        let js = joint_state(&inert, &data).unwrap();
        let r = 0.5f64.sqrt();
        // layout: bit0 = training, bit1 = ancilla, bit2 = class
        assert!((js.amps[0] - r).abs() < 1e-12); // program 00, train 0
        assert!((js.amps[1] - r).abs() < 1e-12); // program 00, train 1
        for idx in 2..8 {
            assert!(js.amps[idx].abs() < 1e-12);
        }
    }

    #[test]
    fn joint_norm_is_one() {
        let spec = CircuitSpec::with_defaults(3, 2).unwrap();
        let data = vec![
            DataPoint::new(vec![0.3, -0.7], 1).unwrap(),
            DataPoint::new(vec![-0.2, 0.9], 0).unwrap(),
        ];
        let js = joint_state(&spec, &data).unwrap();
        assert!((js.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn slice_matches_factorized_vector() {
        let spec = CircuitSpec::with_defaults(2, 2).unwrap();
        let data = vec![
            DataPoint::new(vec![0.25, -0.55], 1).unwrap(),
            DataPoint::new(vec![-0.8, 0.35], 0).unwrap(),
        ];
        let js = joint_state(&spec, &data).unwrap();
        let sliced = slice_program(&js, &[1, 0]).unwrap();
        let direct = amplitude_vector(&spec, &data, true).unwrap();
        for j in 0..direct.len() {
            assert!((sliced.amps[j] - direct.amps[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn slice_of_unreachable_program_is_zero() {
        let inert = identity_spec(1);
        let data = vec![DataPoint::new(vec![0.1], 0).unwrap()];
        let js = joint_state(&inert, &data).unwrap();
        let sliced = slice_program(&js, &[1]).unwrap();
        assert!(sliced.amps.iter().all(|a| a.abs() < 1e-12));
    }

    #[test]
    fn joint_cap_is_enforced() {
        let spec = CircuitSpec::with_defaults(10, 1).unwrap();
        let data: Vec<DataPoint> = (0..7)
            .map(|i| DataPoint::new(vec![0.1 * i as f64], 0).unwrap())
            .collect();
        // 10 + 14 = 24 > 22
        assert!(matches!(
            joint_state(&spec, &data),
            Err(Error::ResourceBudget { .. })
        ));
    }
}
