use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::program::{GateKind, GateSpec, QubitRef};
use crate::qmat::{CMatrix, CVector, RegisterLayout, C64};
use crate::{Error, Result};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Unitary of a gate kind, controls on the most significant qubits.
pub fn gate_matrix(kind: &GateKind) -> CMatrix {
    match kind {
        GateKind::H => CMatrix::from_row_slice(
            2,
            2,
            &[re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)],
        ),
        GateKind::X => CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]),
        GateKind::Z => CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(-1.0)])),
        GateKind::Cnot => controlled(&gate_matrix(&GateKind::X), 1),
        GateKind::Toffoli => controlled(&gate_matrix(&GateKind::X), 2),
        GateKind::Cphase { angle } => {
            let mut d = vec![re(1.0); 4];
            d[3] = C64::from_polar(1.0, *angle);
            CMatrix::from_diagonal(&CVector::from_vec(d))
        }
        GateKind::Raw { matrix } => matrix.clone(),
    }
}

/// `|1..1><1..1| ⊗ u + (I - |1..1><1..1|) ⊗ I` with `controls` control qubits.
pub fn controlled(u: &CMatrix, controls: usize) -> CMatrix {
    let d = u.nrows();
    let n = d << controls;
    let mut m = CMatrix::identity(n, n);
    let off = n - d;
    for i in 0..d {
        for j in 0..d {
            m[(off + i, off + j)] = u[(i, j)];
        }
    }
    m
}

/// `X^alpha = H diag(1, e^{iπ alpha}) H`.
pub fn x_power(alpha: f64) -> CMatrix {
    let e = C64::from_polar(1.0, PI * alpha);
    let a = (re(1.0) + e) * 0.5;
    let b = (re(1.0) - e) * 0.5;
    CMatrix::from_row_slice(2, 2, &[a, b, b, a])
}

/// Multi-controlled X without ancillas. Up to two controls this is a
/// single gate; beyond that, the standard square-root recursion over
/// `C^m(X^alpha)` with three-qubit RAW gates at the base.
pub fn multi_controlled_x(controls: &[QubitRef], target: &QubitRef) -> Vec<GateSpec> {
    match controls.len() {
        0 => vec![GateSpec::x(target.clone())],
        1 => vec![GateSpec::cnot(controls[0].clone(), target.clone())],
        2 => vec![GateSpec::toffoli(
            controls[0].clone(),
            controls[1].clone(),
            target.clone(),
        )],
        _ => controlled_x_power(controls, target, 1.0),
    }
}

fn controlled_x_power(controls: &[QubitRef], target: &QubitRef, alpha: f64) -> Vec<GateSpec> {
    let m = controls.len();
    if m <= 2 {
        let mut targets = controls.to_vec();
        targets.push(target.clone());
        return vec![GateSpec::raw(controlled(&x_power(alpha), m), targets)];
    }
    let (rest, last) = controls.split_at(m - 1);
    let last = &last[0];
    let half = alpha / 2.0;
    let mut out = controlled_x_power(std::slice::from_ref(last), target, half);
    out.extend(multi_controlled_x(rest, last));
    out.extend(controlled_x_power(std::slice::from_ref(last), target, -half));
    out.extend(multi_controlled_x(rest, last));
    out.extend(controlled_x_power(rest, target, half));
    out
}

/// Flip `target` iff some group has all its qubits set:
/// `OR_i AND(group_i) = XOR over nonempty subsets S of AND(union of S)`.
pub fn or_of_ands(groups: &[Vec<QubitRef>], target: &QubitRef) -> Vec<GateSpec> {
    let r = groups.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << r) {
        let mut controls: Vec<QubitRef> = Vec::new();
        for (i, g) in groups.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for q in g {
                    if !controls.contains(q) {
                        controls.push(q.clone());
                    }
                }
            }
        }
        out.extend(multi_controlled_x(&controls, target));
    }
    out
}

/// A gate resolved to global qubit positions, keeping only the rows of the
/// matrix that differ from the identity.
#[derive(Debug, Clone)]
pub(crate) struct Kernel {
    qubits: Vec<usize>,
    rows: Vec<(usize, Vec<(usize, C64)>)>,
}

impl Kernel {
    pub(crate) fn new(matrix: &CMatrix, qubits: Vec<usize>) -> Self {
        let d = matrix.nrows();
        let mut rows = Vec::new();
        for r in 0..d {
            let entries: Vec<(usize, C64)> = (0..d)
                .filter(|&c| matrix[(r, c)] != C64::new(0.0, 0.0))
                .map(|c| (c, matrix[(r, c)]))
                .collect();
            let identity_row = entries.len() == 1 && entries[0].0 == r && entries[0].1 == re(1.0);
            if !identity_row {
                rows.push((r, entries));
            }
        }
        Self { qubits, rows }
    }

    pub(crate) fn compile(gate: &GateSpec, layout: &RegisterLayout) -> Result<Self> {
        let qubits = gate
            .targets
            .iter()
            .map(|q| {
                let r = layout.register(q.register())?;
                if q.offset() >= r.width {
                    return Err(Error::IndexOutOfRange {
                        index: q.offset(),
                        len: r.width,
                    });
                }
                Ok(layout.qubit_offset(q.register())? + q.offset())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(&gate_matrix(&gate.kind), qubits))
    }

    pub(crate) fn apply(&self, amps: &mut CVector, width: usize) {
        if self.rows.is_empty() {
            return;
        }
        let m = self.qubits.len();
        let d = 1usize << m;
        let bits: Vec<usize> = self.qubits.iter().map(|&q| width - 1 - q).collect();
        let mask: usize = bits.iter().map(|b| 1usize << b).sum();
        let offsets: Vec<usize> = (0..d)
            .map(|v| {
                (0..m)
                    .filter(|i| v >> (m - 1 - i) & 1 == 1)
                    .map(|i| 1usize << bits[i])
                    .sum()
            })
            .collect();
        let mut old = vec![C64::new(0.0, 0.0); d];
        let mut new = vec![C64::new(0.0, 0.0); self.rows.len()];
        for base in 0..amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (v, o) in offsets.iter().enumerate() {
                old[v] = amps[base | o];
            }
            for (k, (_, entries)) in self.rows.iter().enumerate() {
                new[k] = entries.iter().map(|(c, val)| old[*c] * val).sum();
            }
            for (k, (r, _)) in self.rows.iter().enumerate() {
                amps[base | offsets[*r]] = new[k];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{basis_vector, is_unitary, Register, Role};

    fn layout(width: usize) -> RegisterLayout {
        RegisterLayout::new(vec![Register::new("q", width, "A", Role::Work)]).unwrap()
    }

    fn q(i: usize) -> QubitRef {
        QubitRef::new("q", i)
    }

    fn run(gates: &[GateSpec], width: usize, index: usize) -> CVector {
        let l = layout(width);
        let mut v = basis_vector(1 << width, index);
        for g in gates {
            Kernel::compile(g, &l).unwrap().apply(&mut v, width);
        }
        v
    }

    #[test]
    fn named_gates_are_unitary() {
        for k in [
            GateKind::H,
            GateKind::X,
            GateKind::Z,
            GateKind::Cnot,
            GateKind::Toffoli,
            GateKind::Cphase { angle: 0.3 },
        ] {
            assert!(is_unitary(&gate_matrix(&k), 1e-12));
        }
        assert!((x_power(1.0) - gate_matrix(&GateKind::X)).camax() < 1e-15);
        assert!(((x_power(0.5) * x_power(0.5)) - gate_matrix(&GateKind::X)).camax() < 1e-15);
    }

    #[test]
    fn cnot_big_endian() {
        // control q0 (MSB), target q1: |10> -> |11>
        let v = run(&[GateSpec::cnot(q(0), q(1))], 2, 0b10);
        assert!((v[0b11].re - 1.0).abs() < 1e-15);
        let v = run(&[GateSpec::cnot(q(1), q(0))], 2, 0b01);
        assert!((v[0b11].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn multi_controlled_x_truth_table() {
        for m in 0..6 {
            let controls: Vec<QubitRef> = (0..m).map(q).collect();
            let gates = multi_controlled_x(&controls, &q(m));
            let width = m + 1;
            for index in 0..1usize << width {
                let v = run(&gates, width, index);
                let all = (index >> 1) == (1 << m) - 1;
                let expected = if all { index ^ 1 } else { index };
                assert!(
                    (v[expected].norm() - 1.0).abs() < 1e-9,
                    "m={m} index={index:b}"
                );
            }
        }
    }

    #[test]
    fn or_of_ands_truth_table() {
        let groups = vec![vec![q(0), q(1)], vec![q(2), q(3)], vec![q(4), q(5)]];
        let gates = or_of_ands(&groups, &q(6));
        for x in 0..64usize {
            let index = x << 1;
            let v = run(&gates, 7, index);
            let hit = (0..3).any(|i| (x >> (4 - 2 * i)) & 3 == 3);
            let expected = if hit { index | 1 } else { index };
            assert!((v[expected].norm() - 1.0).abs() < 1e-9, "x={x:06b}");
        }
    }
}
