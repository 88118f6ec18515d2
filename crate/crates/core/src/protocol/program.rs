use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::qmat::{is_unitary, serde_complex, CMatrix, CVector, RegisterLayout, Role, DEFAULT_MAX_WIDTH};
use crate::{Error, Result, TOL};

/// Largest number of Bell pairs a `bell-pairs` prior state may request.
pub const MAX_BELL_PAIRS: usize = 4;

/// A qubit addressed as `[register, offset]`, offset 0 being the most
/// significant qubit of the register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitRef(pub String, pub usize);

impl QubitRef {
    pub fn new(register: impl Into<String>, offset: usize) -> Self {
        Self(register.into(), offset)
    }

    pub fn register(&self) -> &str {
        &self.0
    }

    pub fn offset(&self) -> usize {
        self.1
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Z,
    Cnot,
    Toffoli,
    Cphase { angle: f64 },
    Raw {
        #[serde(with = "serde_complex::matrix")]
        matrix: CMatrix,
    },
}

/// One gate with its targets; for controlled kinds the controls come first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    #[serde(flatten)]
    pub kind: GateKind,
    pub targets: Vec<QubitRef>,
}

impl GateSpec {
    pub fn new(kind: GateKind, targets: Vec<QubitRef>) -> Self {
        Self { kind, targets }
    }

    pub fn h(q: QubitRef) -> Self {
        Self::new(GateKind::H, vec![q])
    }

    pub fn x(q: QubitRef) -> Self {
        Self::new(GateKind::X, vec![q])
    }

    pub fn z(q: QubitRef) -> Self {
        Self::new(GateKind::Z, vec![q])
    }

    pub fn cnot(control: QubitRef, target: QubitRef) -> Self {
        Self::new(GateKind::Cnot, vec![control, target])
    }

    pub fn toffoli(c1: QubitRef, c2: QubitRef, target: QubitRef) -> Self {
        Self::new(GateKind::Toffoli, vec![c1, c2, target])
    }

    pub fn cphase(angle: f64, a: QubitRef, b: QubitRef) -> Self {
        Self::new(GateKind::Cphase { angle }, vec![a, b])
    }

    pub fn raw(matrix: CMatrix, targets: Vec<QubitRef>) -> Self {
        Self::new(GateKind::Raw { matrix }, targets)
    }

    /// Number of targets the kind expects.
    pub fn arity(&self) -> usize {
        match &self.kind {
            GateKind::H | GateKind::X | GateKind::Z => 1,
            GateKind::Cnot | GateKind::Cphase { .. } => 2,
            GateKind::Toffoli => 3,
            GateKind::Raw { matrix } => {
                let d = matrix.nrows();
                if d.is_power_of_two() {
                    d.trailing_zeros() as usize
                } else {
                    usize::MAX
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match &self.kind {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Cphase { .. } => "CPHASE",
            GateKind::Raw { .. } => "RAW",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSpec {
    pub sender: String,
    pub receiver: String,
    /// Applied by the sender, in order, before the transfer.
    #[serde(default)]
    pub gates: Vec<GateSpec>,
    /// Registers handed from sender to receiver.
    #[serde(default)]
    pub transfer: Vec<String>,
}

/// Input-independent state of the `entangled` registers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PriorEntanglement {
    /// Entangled registers start in `|0...0>`.
    #[default]
    None,
    /// `count` Bell pairs `(|00> + |11>)/√2`, the `j`-th pairing the `j`-th
    /// entangled qubit of `parties[0]` with that of `parties[1]`
    /// (declaration order). Remaining entangled qubits start in `|0>`.
    BellPairs { count: usize, parties: [String; 2] },
    /// Amplitudes over all entangled qubits in declaration order.
    Raw {
        #[serde(with = "serde_complex::vector")]
        amplitudes: CVector,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerSpec {
    pub party: String,
    pub register: String,
    /// Local gates the answering party applies after the last message and
    /// before measuring.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub final_gates: Vec<GateSpec>,
}

/// A declarative multi-round protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolProgram {
    pub parties: Vec<String>,
    pub registers: RegisterLayout,
    #[serde(default)]
    pub prior_entanglement: PriorEntanglement,
    pub rounds: Vec<RoundSpec>,
    pub answer: AnswerSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Width,
    Layout,
    Ownership,
    SafeInput,
    SafeCopy,
    Answer,
    Gate,
    Round,
    Entanglement,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Width => "width",
            Self::Layout => "layout",
            Self::Ownership => "ownership",
            Self::SafeInput => "safe-input",
            Self::SafeCopy => "safe-copy",
            Self::Answer => "answer",
            Self::Gate => "gate",
            Self::Round => "round",
            Self::Entanglement => "entanglement",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
        });
    }

    /// `Ok(())` or an error listing every violation.
    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let msg = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.kind.as_str(), v.message))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidProtocol(msg))
    }
}

impl ProtocolProgram {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical serialized form (pretty JSON, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Qubits sent over all rounds.
    pub fn communication(&self) -> usize {
        self.rounds
            .iter()
            .map(|r| self.transfer_width(r))
            .sum()
    }

    pub(crate) fn transfer_width(&self, round: &RoundSpec) -> usize {
        round
            .transfer
            .iter()
            .filter_map(|n| self.registers.get(n))
            .map(|r| r.width)
            .sum()
    }

    /// Input registers of a party, in declaration order.
    pub fn inputs_of(&self, party: &str) -> Vec<String> {
        self.registers.owned_with_role(party, Role::Input)
    }

    /// `(input, input-copy)` register pairs of a party, paired by order.
    pub fn copy_pairs(&self, party: &str) -> Vec<(String, String)> {
        self.inputs_of(party)
            .into_iter()
            .zip(self.registers.owned_with_role(party, Role::InputCopy))
            .collect()
    }

    /// All input registers, in declaration order.
    pub fn input_registers(&self) -> Vec<String> {
        self.registers.with_role(Role::Input)
    }

    pub fn entangled_width(&self) -> usize {
        self.registers
            .registers()
            .iter()
            .filter(|r| r.role == Role::Entangled)
            .map(|r| r.width)
            .sum()
    }

    /// Register owners after each round; entry 0 is the initial map.
    pub fn ownership(&self) -> Vec<BTreeMap<String, String>> {
        let mut cur: BTreeMap<String, String> = self
            .registers
            .registers()
            .iter()
            .map(|r| (r.name.clone(), r.owner.clone()))
            .collect();
        let mut out = vec![cur.clone()];
        for round in &self.rounds {
            for t in &round.transfer {
                if let Some(o) = cur.get_mut(t) {
                    *o = round.receiver.clone();
                }
            }
            out.push(cur.clone());
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(DEFAULT_MAX_WIDTH)
    }

    pub fn validate_with(&self, max_width: usize) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let layout = &self.registers;
        let width = layout.total_width();
        if width > max_width {
            rep.push(
                ViolationKind::Width,
                format!("total width {width} exceeds {max_width}"),
            );
        }

        let mut parties = std::collections::BTreeSet::new();
        for p in &self.parties {
            if !parties.insert(p.as_str()) {
                rep.push(ViolationKind::Layout, format!("duplicate party `{p}`"));
            }
        }
        if self.parties.is_empty() {
            rep.push(ViolationKind::Layout, "no parties");
        }
        for r in layout.registers() {
            if !parties.contains(r.owner.as_str()) {
                rep.push(
                    ViolationKind::Layout,
                    format!("register `{}` owned by unknown party `{}`", r.name, r.owner),
                );
            }
            if r.role == Role::Purification {
                rep.push(
                    ViolationKind::Layout,
                    format!("register `{}` uses the reserved purification role", r.name),
                );
            }
        }

        for p in &self.parties {
            let ins = layout.owned_with_role(p, Role::Input);
            let copies = layout.owned_with_role(p, Role::InputCopy);
            if ins.len() != copies.len() {
                rep.push(
                    ViolationKind::SafeCopy,
                    format!(
                        "party `{p}` has {} input and {} input-copy registers",
                        ins.len(),
                        copies.len()
                    ),
                );
            }
            for (i, c) in ins.iter().zip(&copies) {
                let (wi, wc) = (layout.get(i).unwrap().width, layout.get(c).unwrap().width);
                if wi != wc {
                    rep.push(
                        ViolationKind::SafeCopy,
                        format!("copy `{c}` of `{i}` has width {wc}, expected {wi}"),
                    );
                }
            }
        }

        self.check_entanglement(&mut rep, &parties);

        let mut owners: BTreeMap<&str, &str> = layout
            .registers()
            .iter()
            .map(|r| (r.name.as_str(), r.owner.as_str()))
            .collect();
        for (i, round) in self.rounds.iter().enumerate() {
            let at = format!("round {}", i + 1);
            for p in [&round.sender, &round.receiver] {
                if !parties.contains(p.as_str()) {
                    rep.push(ViolationKind::Round, format!("{at}: unknown party `{p}`"));
                }
            }
            if round.sender == round.receiver {
                rep.push(ViolationKind::Round, format!("{at}: sender and receiver coincide"));
            }
            for g in &round.gates {
                self.check_gate(&mut rep, g, &round.sender, &owners, &at);
            }
            if round.transfer.is_empty() {
                rep.push(ViolationKind::Round, format!("{at}: empty transfer"));
            }
            for t in &round.transfer {
                match layout.get(t) {
                    None => rep.push(ViolationKind::Round, format!("{at}: unknown register `{t}`")),
                    Some(r) => {
                        if r.role == Role::Input {
                            rep.push(
                                ViolationKind::SafeInput,
                                format!("{at}: input register `{t}` transferred"),
                            );
                        }
                        if owners[t.as_str()] != round.sender {
                            rep.push(
                                ViolationKind::Ownership,
                                format!(
                                    "{at}: `{t}` is owned by `{}`, not the sender",
                                    owners[t.as_str()]
                                ),
                            );
                        }
                    }
                }
            }
            for t in &round.transfer {
                if let Some(o) = owners.get_mut(t.as_str()) {
                    *o = round.receiver.as_str();
                }
            }
        }

        let ans = &self.answer;
        if !parties.contains(ans.party.as_str()) {
            rep.push(ViolationKind::Answer, format!("unknown answer party `{}`", ans.party));
        }
        if let Some(last) = self.rounds.last() {
            if last.receiver != ans.party {
                rep.push(
                    ViolationKind::Answer,
                    format!(
                        "answer party `{}` is not the last receiver `{}`",
                        ans.party, last.receiver
                    ),
                );
            }
        }
        match layout.get(&ans.register) {
            None => rep.push(
                ViolationKind::Answer,
                format!("unknown answer register `{}`", ans.register),
            ),
            Some(r) => {
                if r.role == Role::Input {
                    rep.push(ViolationKind::Answer, "answer register is an input register");
                }
                if owners[ans.register.as_str()] != ans.party {
                    rep.push(
                        ViolationKind::Answer,
                        format!(
                            "answer register `{}` ends with `{}`, not `{}`",
                            ans.register,
                            owners[ans.register.as_str()],
                            ans.party
                        ),
                    );
                }
            }
        }
        for g in &ans.final_gates {
            self.check_gate(&mut rep, g, &ans.party, &owners, "final gates");
        }
        rep
    }

    fn check_entanglement(&self, rep: &mut ValidationReport, parties: &std::collections::BTreeSet<&str>) {
        let layout = &self.registers;
        let ent_width = |p: &str| -> usize {
            layout
                .owned_with_role(p, Role::Entangled)
                .iter()
                .map(|n| layout.get(n).unwrap().width)
                .sum()
        };
        match &self.prior_entanglement {
            PriorEntanglement::None => {}
            PriorEntanglement::BellPairs { count, parties: pair } => {
                if *count > MAX_BELL_PAIRS {
                    rep.push(
                        ViolationKind::Entanglement,
                        format!("{count} Bell pairs exceed the cap of {MAX_BELL_PAIRS}"),
                    );
                }
                if pair[0] == pair[1] {
                    rep.push(ViolationKind::Entanglement, "Bell pairs need two distinct parties");
                }
                for p in pair {
                    if !parties.contains(p.as_str()) {
                        rep.push(ViolationKind::Entanglement, format!("unknown party `{p}`"));
                    } else if ent_width(p) < *count {
                        rep.push(
                            ViolationKind::Entanglement,
                            format!("party `{p}` holds fewer than {count} entangled qubits"),
                        );
                    }
                }
            }
            PriorEntanglement::Raw { amplitudes } => {
                let w = self.entangled_width();
                if amplitudes.len() != 1usize << w {
                    rep.push(
                        ViolationKind::Entanglement,
                        format!(
                            "{} amplitudes for {w} entangled qubits",
                            amplitudes.len()
                        ),
                    );
                } else if (amplitudes.norm() - 1.0).abs() > TOL.norm {
                    rep.push(
                        ViolationKind::Entanglement,
                        format!("prior state has norm {}", amplitudes.norm()),
                    );
                }
            }
        }
    }

    fn check_gate(
        &self,
        rep: &mut ValidationReport,
        g: &GateSpec,
        actor: &str,
        owners: &BTreeMap<&str, &str>,
        at: &str,
    ) {
        let layout = &self.registers;
        let arity = g.arity();
        if let GateKind::Raw { matrix } = &g.kind {
            if matrix.nrows() != matrix.ncols() || arity == usize::MAX || arity == 0 || arity > 3 {
                rep.push(
                    ViolationKind::Gate,
                    format!("{at}: RAW matrix must be 2x2, 4x4 or 8x8"),
                );
                return;
            }
            if !is_unitary(matrix, TOL.unitary) {
                rep.push(ViolationKind::Gate, format!("{at}: RAW matrix is not unitary"));
            }
        }
        if let GateKind::Cphase { angle } = &g.kind {
            if !angle.is_finite() {
                rep.push(ViolationKind::Gate, format!("{at}: CPHASE angle is not finite"));
            }
        }
        if g.targets.len() != arity {
            rep.push(
                ViolationKind::Gate,
                format!(
                    "{at}: {} expects {arity} targets, got {}",
                    g.name(),
                    g.targets.len()
                ),
            );
        }
        for (i, q) in g.targets.iter().enumerate() {
            if g.targets[..i].contains(q) {
                rep.push(ViolationKind::Gate, format!("{at}: repeated target {q}"));
            }
            match layout.get(q.register()) {
                None => rep.push(
                    ViolationKind::Gate,
                    format!("{at}: unknown register `{}`", q.register()),
                ),
                Some(r) => {
                    if q.offset() >= r.width {
                        rep.push(ViolationKind::Gate, format!("{at}: {q} is out of range"));
                    }
                    if r.role == Role::Input {
                        rep.push(
                            ViolationKind::SafeInput,
                            format!("{at}: gate on input register `{}`", r.name),
                        );
                    }
                    let owner = owners[r.name.as_str()];
                    if owner != actor {
                        rep.push(
                            ViolationKind::Ownership,
                            format!("{at}: {q} is owned by `{owner}`, not `{actor}`"),
                        );
                    }
                }
            }
        }
    }
}
