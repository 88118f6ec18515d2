use std::collections::BTreeMap;

use super::gates::Kernel;
use super::input::PartitionedInput;
use super::program::{GateSpec, PriorEntanglement, ProtocolProgram};
use crate::qmat::{CVector, PureState, Register, RegisterLayout, Role, C64};
use crate::{Error, Result};

/// Memory guard for state vectors built during simulation, purification
/// registers included.
pub const SIM_MAX_WIDTH: usize = 22;

/// Classical value of every input register.
pub type Inputs = BTreeMap<String, usize>;

/// Build an [`Inputs`] map from `(register, value)` pairs.
pub fn inputs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Inputs {
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

/// Name of the register holding the coherent copy of an input.
pub fn purification_name(input: &str) -> String {
    format!("{input}_pur")
}

/// Global states of a run: entry `i` is the state just after message `i`
/// was received (entry 0 after the safe-copy preamble), each carrying the
/// ownership of that moment in its layout.
#[derive(Debug, Clone)]
pub struct SimulationTrace {
    snapshots: Vec<PureState>,
    final_state: PureState,
    answer: String,
}

impl SimulationTrace {
    pub fn snapshots(&self) -> &[PureState] {
        &self.snapshots
    }

    pub fn at(&self, time: usize) -> &PureState {
        &self.snapshots[time]
    }

    pub fn rounds(&self) -> usize {
        self.snapshots.len() - 1
    }

    /// State after the answering party's final gates.
    pub fn final_state(&self) -> &PureState {
        &self.final_state
    }

    pub fn answer_register(&self) -> &str {
        &self.answer
    }

    /// Registers owned by `party` at `time`.
    pub fn owned_by(&self, time: usize, party: &str) -> Vec<String> {
        self.snapshots[time].layout().owned_by(party)
    }

    /// Outcome distribution of a computational-basis measurement of the
    /// answer register, from the global state.
    pub fn answer_distribution(&self) -> Vec<f64> {
        self.final_state
            .register_distribution(&self.answer)
            .expect("answer register exists")
    }

    /// The same distribution read off the reduced state of the answer
    /// register.
    pub fn answer_distribution_reduced(&self) -> Vec<f64> {
        let rho = self
            .final_state
            .reduced(&[self.answer.as_str()])
            .expect("answer register exists");
        rho.matrix().diagonal().iter().map(|z| z.re).collect()
    }
}

struct Compiled {
    width: usize,
    preamble: Vec<Kernel>,
    rounds: Vec<(Vec<Kernel>, Vec<String>, String)>,
    finals: Vec<Kernel>,
}

fn compile_all(gates: &[GateSpec], layout: &RegisterLayout) -> Result<Vec<Kernel>> {
    gates.iter().map(|g| Kernel::compile(g, layout)).collect()
}

fn compile(p: &ProtocolProgram, layout: &RegisterLayout) -> Result<Compiled> {
    let mut preamble = Vec::new();
    for party in &p.parties {
        for (input, copy) in p.copy_pairs(party) {
            let w = layout.register(&input)?.width;
            let (a, b) = (layout.qubit_offset(&input)?, layout.qubit_offset(&copy)?);
            let cnot = super::gates::gate_matrix(&super::program::GateKind::Cnot);
            for k in 0..w {
                preamble.push(Kernel::new(&cnot, vec![a + k, b + k]));
            }
        }
    }
    let rounds = p
        .rounds
        .iter()
        .map(|r| {
            Ok((
                compile_all(&r.gates, layout)?,
                r.transfer.clone(),
                r.receiver.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Compiled {
        width: layout.total_width(),
        preamble,
        rounds,
        finals: compile_all(&p.answer.final_gates, layout)?,
    })
}

fn run(p: &ProtocolProgram, initial: PureState) -> Result<SimulationTrace> {
    let c = compile(p, initial.layout())?;
    let mut state = initial;
    for k in &c.preamble {
        k.apply(state.amplitudes_mut(), c.width);
    }
    let mut snapshots = vec![state.clone()];
    for (kernels, transfer, receiver) in &c.rounds {
        for k in kernels {
            k.apply(state.amplitudes_mut(), c.width);
        }
        for t in transfer {
            state.set_owner(t, receiver)?;
        }
        snapshots.push(state.clone());
    }
    for k in &c.finals {
        k.apply(state.amplitudes_mut(), c.width);
    }
    Ok(SimulationTrace {
        snapshots,
        final_state: state,
        answer: p.answer.register.clone(),
    })
}

/// State of the entangled registers (declaration order) before the run.
pub fn prior_state(p: &ProtocolProgram) -> Result<CVector> {
    let names = p.registers.with_role(Role::Entangled);
    let w = p.entangled_width();
    let mut v = CVector::zeros(1 << w);
    v[0] = C64::new(1.0, 0.0);
    match &p.prior_entanglement {
        PriorEntanglement::None => Ok(v),
        PriorEntanglement::Raw { amplitudes } => {
            if amplitudes.len() != v.len() {
                return Err(Error::InvalidProtocol("prior state has the wrong length".into()));
            }
            Ok(amplitudes.clone())
        }
        PriorEntanglement::BellPairs { count, parties } => {
            let ent = p.registers.subset(&names)?;
            let qubits_of = |party: &str| -> Result<Vec<usize>> {
                ent.qubits_of(&ent.owned_by(party))
            };
            let (qa, qb) = (qubits_of(&parties[0])?, qubits_of(&parties[1])?);
            if qa.len() < *count || qb.len() < *count {
                return Err(Error::InvalidProtocol("not enough entangled qubits".into()));
            }
            let h = super::gates::gate_matrix(&super::program::GateKind::H);
            let cnot = super::gates::gate_matrix(&super::program::GateKind::Cnot);
            for j in 0..*count {
                Kernel::new(&h, vec![qa[j]]).apply(&mut v, w);
                Kernel::new(&cnot, vec![qa[j], qb[j]]).apply(&mut v, w);
            }
            Ok(v)
        }
    }
}

/// Initial global state on `layout` (the program's registers, possibly
/// followed by extra ones): the prior state on the entangled registers,
/// `block` on `block_regs` (in that order) and `|0>` everywhere else.
fn assemble(
    p: &ProtocolProgram,
    layout: &RegisterLayout,
    block_regs: &[String],
    block: &CVector,
) -> Result<PureState> {
    if layout.total_width() > SIM_MAX_WIDTH {
        return Err(Error::WidthOverflow {
            width: layout.total_width(),
            max: SIM_MAX_WIDTH,
        });
    }
    let ent = p.registers.with_role(Role::Entangled);
    let rest: Vec<String> = layout
        .names()
        .filter(|n| !ent.iter().any(|e| e == n) && !block_regs.iter().any(|b| b == n))
        .map(str::to_string)
        .collect();
    let rest_width: usize = rest.iter().map(|n| layout.get(n).unwrap().width).sum();
    let mut zeros = CVector::zeros(1 << rest_width);
    zeros[0] = C64::new(1.0, 0.0);
    let amps = prior_state(p)?.kronecker(block).kronecker(&zeros);
    let order: Vec<String> = ent
        .iter()
        .chain(block_regs)
        .chain(&rest)
        .cloned()
        .collect();
    let staged = RegisterLayout::new(
        order
            .iter()
            .map(|n| layout.register(n).cloned())
            .collect::<Result<Vec<_>>>()?,
    )?;
    let names: Vec<&str> = layout.names().collect();
    PureState::new(staged, amps)?.reorder(&names)
}

fn require_valid(p: &ProtocolProgram) -> Result<()> {
    p.validate_with(SIM_MAX_WIDTH).into_result()
}

/// Run the protocol on classical inputs.
pub fn simulate(p: &ProtocolProgram, inputs: &Inputs) -> Result<SimulationTrace> {
    require_valid(p)?;
    let regs = p.input_registers();
    for k in inputs.keys() {
        if !regs.contains(k) {
            return Err(Error::InvalidInput(format!("`{k}` is not an input register")));
        }
    }
    let mut block = CVector::from_element(1, C64::new(1.0, 0.0));
    for r in &regs {
        let v = *inputs
            .get(r)
            .ok_or_else(|| Error::InvalidInput(format!("no value for `{r}`")))?;
        let dim = p.registers.register(r)?.dim();
        if v >= dim {
            return Err(Error::InvalidInput(format!("value {v} does not fit `{r}`")));
        }
        block = block.kronecker(&crate::qmat::basis_vector(dim, v));
    }
    run(p, assemble(p, &p.registers, &regs, &block)?)
}

/// Run the protocol with every input register `r` loaded as
/// `Σ_x √p_x |x>_r |x>_{r_pur}`, where `loads[r]` gives `p`. The
/// purification registers are appended to the layout, owned by the input's
/// owner, and never acted upon.
pub fn simulate_loaded(
    p: &ProtocolProgram,
    loads: &BTreeMap<String, BTreeMap<usize, f64>>,
) -> Result<SimulationTrace> {
    require_valid(p)?;
    let regs = p.input_registers();
    let mut layout = p.registers.clone();
    let mut block_regs = Vec::new();
    let mut block = CVector::from_element(1, C64::new(1.0, 0.0));
    for r in &regs {
        let reg = p.registers.register(r)?;
        let law = loads
            .get(r)
            .ok_or_else(|| Error::InvalidInput(format!("no distribution for `{r}`")))?;
        let pur = purification_name(r);
        layout.push(Register::new(&pur, reg.width, &reg.owner, Role::Purification))?;
        let dim = reg.dim();
        let mut pair = CVector::zeros(dim * dim);
        for (&x, &px) in law {
            if x >= dim {
                return Err(Error::InvalidInput(format!("value {x} does not fit `{r}`")));
            }
            pair[x * dim + x] = C64::new(px.sqrt(), 0.0);
        }
        block = block.kronecker(&pair);
        block_regs.push(r.clone());
        block_regs.push(pur);
    }
    run(p, assemble(p, &layout, &block_regs, &block)?)
}

/// Run a two-party protocol on `(X, D)^n` conditioned on `D = condition`:
/// the `ℓ`-th input register of each party carries coordinate `ℓ`.
pub fn simulate_distribution(
    p: &ProtocolProgram,
    dist: &PartitionedInput,
    condition: &[usize],
) -> Result<SimulationTrace> {
    if p.parties.len() != 2 {
        return Err(Error::UnsupportedParties(p.parties.len()));
    }
    dist.check_condition(condition)?;
    let mut loads = BTreeMap::new();
    for (side, party) in p.parties.iter().enumerate() {
        let regs = p.inputs_of(party);
        if regs.len() != dist.arity() {
            return Err(Error::InvalidInput(format!(
                "party `{party}` has {} input registers for a distribution of arity {}",
                regs.len(),
                dist.arity()
            )));
        }
        for (l, r) in regs.into_iter().enumerate() {
            let law = if side == 0 {
                dist.marginal_a(condition[l])
            } else {
                dist.marginal_b(condition[l])
            };
            loads.insert(r, law);
        }
    }
    simulate_loaded(p, &loads)
}

/// Worst case over `cases` of the probability that the measured answer
/// differs from the expected value.
pub fn error_probability(p: &ProtocolProgram, cases: &[(Inputs, usize)]) -> Result<f64> {
    if cases.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut worst: f64 = 0.0;
    for (x, expected) in cases {
        let dist = simulate(p, x)?.answer_distribution();
        let ok = dist.get(*expected).copied().unwrap_or(0.0);
        worst = worst.max((1.0 - ok).clamp(0.0, 1.0));
    }
    Ok(worst)
}

/// [`error_probability`] with the expected answers given by `f`.
pub fn error_probability_fn(
    p: &ProtocolProgram,
    domain: &[Inputs],
    f: impl Fn(&Inputs) -> usize,
) -> Result<f64> {
    let cases: Vec<(Inputs, usize)> = domain.iter().map(|x| (x.clone(), f(x))).collect();
    error_probability(p, &cases)
}
