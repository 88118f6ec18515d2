//! Protocol constructors used as fixtures and by the shipped examples.
//!
//! Every fixture names the `ℓ`-th input of party `i` `<p>_in<ℓ>` and its
//! safe copy `<p>_cp<ℓ>`, with `<p>` the `i`-th lowercase letter; parties
//! are `A`, `B`, `C`, ... in that order.

use std::f64::consts::FRAC_PI_2;

use super::gates::{controlled, or_of_ands};
use super::program::{
    AnswerSpec, GateSpec, PriorEntanglement, ProtocolProgram, QubitRef, RoundSpec,
};
use super::simulate::{inputs, Inputs};
use crate::qmat::{random_unitary, CMatrix, Register, RegisterLayout, Role, SeededRng, C64};

pub fn party_name(i: usize) -> String {
    ((b'A' + i as u8) as char).to_string()
}

fn prefix(i: usize) -> char {
    (b'a' + i as u8) as char
}

pub fn input_name(party: usize, l: usize) -> String {
    format!("{}_in{l}", prefix(party))
}

pub fn copy_name(party: usize, l: usize) -> String {
    format!("{}_cp{l}", prefix(party))
}

fn q(name: &str) -> QubitRef {
    QubitRef::new(name, 0)
}

/// Input and input-copy registers for `t` parties with `n` one-bit
/// coordinates each.
fn input_registers(t: usize, n: usize) -> Vec<Register> {
    let mut regs = Vec::new();
    for i in 0..t {
        let p = party_name(i);
        for l in 0..n {
            regs.push(Register::new(input_name(i, l), 1, &p, Role::Input));
        }
        for l in 0..n {
            regs.push(Register::new(copy_name(i, l), 1, &p, Role::InputCopy));
        }
    }
    regs
}

fn program(
    t: usize,
    registers: Vec<Register>,
    prior: PriorEntanglement,
    rounds: Vec<RoundSpec>,
    answer: AnswerSpec,
) -> ProtocolProgram {
    ProtocolProgram {
        parties: (0..t).map(party_name).collect(),
        registers: RegisterLayout::new(registers).expect("fixture layout"),
        prior_entanglement: prior,
        rounds,
        answer,
    }
}

fn round(sender: usize, receiver: usize, gates: Vec<GateSpec>, transfer: Vec<String>) -> RoundSpec {
    RoundSpec {
        sender: party_name(sender),
        receiver: party_name(receiver),
        gates,
        transfer,
    }
}

fn answer(party: usize, final_gates: Vec<GateSpec>) -> AnswerSpec {
    AnswerSpec {
        party: party_name(party),
        register: "ans".into(),
        final_gates,
    }
}

/// Exact two-round AND: A sends her copy, B writes the AND into `ans` with
/// a Toffoli and sends it back; A answers.
pub fn and2() -> ProtocolProgram {
    let mut regs = input_registers(2, 1);
    regs.push(Register::new("ans", 1, "B", Role::Answer));
    let r1 = round(0, 1, vec![], vec![copy_name(0, 0)]);
    let r2 = round(
        1,
        0,
        vec![GateSpec::toffoli(q(&copy_name(0, 0)), q(&copy_name(1, 0)), q("ans"))],
        vec!["ans".into()],
    );
    program(2, regs, PriorEntanglement::None, vec![r1, r2], answer(0, vec![]))
}

/// AND where A only partially reveals her bit: her message qubit is
/// `cos θ |0> + sin θ |1>` when her input is 1 and `|0>` otherwise.
/// The error on input `(1, 1)` is `cos² θ`; `θ = π/2` is exact.
pub fn noisy_and(theta: f64) -> ProtocolProgram {
    let mut regs = input_registers(2, 1);
    regs.push(Register::new("msg", 1, "A", Role::Message));
    regs.push(Register::new("ans", 1, "B", Role::Answer));
    let (c, s) = (theta.cos(), theta.sin());
    let ry = CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    );
    let r1 = round(
        0,
        1,
        vec![GateSpec::raw(controlled(&ry, 1), vec![q(&copy_name(0, 0)), q("msg")])],
        vec!["msg".into()],
    );
    let r2 = round(
        1,
        0,
        vec![GateSpec::toffoli(q("msg"), q(&copy_name(1, 0)), q("ans"))],
        vec!["ans".into()],
    );
    program(2, regs, PriorEntanglement::None, vec![r1, r2], answer(0, vec![]))
}

/// `noisy_and(π/2)`.
pub fn exact_noisy_and() -> ProtocolProgram {
    noisy_and(FRAC_PI_2)
}

/// No communication: B answers 0.
pub fn zero_round() -> ProtocolProgram {
    let mut regs = input_registers(2, 1);
    regs.push(Register::new("ans", 1, "B", Role::Answer));
    program(2, regs, PriorEntanglement::None, vec![], answer(1, vec![]))
}

/// Intersection indicator on `n` coordinates: A sends all her copies;
/// with one round B computes the answer locally, with two rounds he sends
/// it back to A. Communication `n` or `n + 1` qubits.
pub fn disj(n: usize, rounds: usize) -> ProtocolProgram {
    assert!(rounds == 1 || rounds == 2, "DISJ fixtures have one or two rounds");
    let mut regs = input_registers(2, n);
    regs.push(Register::new("ans", 1, "B", Role::Answer));
    let copies: Vec<String> = (0..n).map(|l| copy_name(0, l)).collect();
    let groups: Vec<Vec<QubitRef>> = (0..n)
        .map(|l| vec![q(&copy_name(0, l)), q(&copy_name(1, l))])
        .collect();
    let compute = or_of_ands(&groups, &q("ans"));
    let r1 = round(0, 1, vec![], copies);
    if rounds == 1 {
        program(2, regs, PriorEntanglement::None, vec![r1], answer(1, compute))
    } else {
        let r2 = round(1, 0, compute, vec!["ans".into()]);
        program(2, regs, PriorEntanglement::None, vec![r1, r2], answer(0, vec![]))
    }
}

/// Coherent version of the classical AND protocol in which A sends a
/// random bit `r` keeping a copy only when her input is 1, and B replies
/// `r ⊕ b`.
pub fn paradox() -> ProtocolProgram {
    let mut regs = input_registers(2, 1);
    regs.push(Register::new("r", 1, "A", Role::Message));
    regs.push(Register::new("keep", 1, "A", Role::Work));
    regs.push(Register::new("ans", 1, "A", Role::Answer));
    let a = q(&copy_name(0, 0));
    let b = q(&copy_name(1, 0));
    let r1 = round(
        0,
        1,
        vec![GateSpec::h(q("r")), GateSpec::toffoli(a.clone(), q("r"), q("keep"))],
        vec!["r".into()],
    );
    let r2 = round(1, 0, vec![GateSpec::cnot(b, q("r"))], vec!["r".into()]);
    let finals = vec![
        GateSpec::cnot(q("keep"), q("r")),
        GateSpec::toffoli(a, q("r"), q("ans")),
    ];
    program(2, regs, PriorEntanglement::None, vec![r1, r2], answer(0, finals))
}

/// Three parties with `n` coordinates each: A hands her copies to B, B
/// forwards them with his own to C, and C flags a coordinate common to all
/// three.
pub fn promise3(n: usize) -> ProtocolProgram {
    let mut regs = input_registers(3, n);
    regs.push(Register::new("ans", 1, "C", Role::Answer));
    let a: Vec<String> = (0..n).map(|l| copy_name(0, l)).collect();
    let ab: Vec<String> = (0..n).map(|l| copy_name(0, l)).chain((0..n).map(|l| copy_name(1, l))).collect();
    let groups: Vec<Vec<QubitRef>> = (0..n)
        .map(|l| (0..3).map(|i| q(&copy_name(i, l))).collect())
        .collect();
    let r1 = round(0, 1, vec![], a);
    let r2 = round(1, 2, vec![], ab);
    program(
        3,
        regs,
        PriorEntanglement::None,
        vec![r1, r2],
        answer(2, or_of_ands(&groups, &q("ans"))),
    )
}

/// Inputs for a two-party fixture from per-coordinate bits.
pub fn two_party_inputs(x: &[usize], y: &[usize]) -> Inputs {
    let mut m = Inputs::new();
    for (l, &v) in x.iter().enumerate() {
        m.insert(input_name(0, l), v);
    }
    for (l, &v) in y.iter().enumerate() {
        m.insert(input_name(1, l), v);
    }
    m
}

/// Inputs for a `t`-party fixture from per-party bit vectors.
pub fn party_inputs(sets: &[Vec<usize>]) -> Inputs {
    inputs(
        sets.iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().enumerate().map(move |(l, &v)| (input_name(i, l), v))),
    )
}

/// AND over the four input pairs.
pub fn and_cases() -> Vec<(Inputs, usize)> {
    let mut out = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            out.push((two_party_inputs(&[x], &[y]), x & y));
        }
    }
    out
}

/// 1 iff some coordinate is set in both vectors.
pub fn intersects(x: &[usize], y: &[usize]) -> usize {
    x.iter().zip(y).any(|(a, b)| a & b == 1) as usize
}

/// Intersection indicator over all `2^n × 2^n` inputs.
pub fn disj_cases(n: usize) -> Vec<(Inputs, usize)> {
    let bits = |v: usize| (0..n).map(|l| (v >> (n - 1 - l)) & 1).collect::<Vec<_>>();
    let mut out = Vec::new();
    for x in 0..1usize << n {
        for y in 0..1usize << n {
            let (bx, by) = (bits(x), bits(y));
            out.push((two_party_inputs(&bx, &by), intersects(&bx, &by)));
        }
    }
    out
}

/// Random safe two-party protocol: one input bit per party, up to three
/// alternating rounds of random gates and transfers, at most 10 qubits.
pub fn random_protocol(rng: &mut SeededRng) -> ProtocolProgram {
    loop {
        if let Some(p) = try_random_protocol(rng) {
            return p;
        }
    }
}

fn try_random_protocol(rng: &mut SeededRng) -> Option<ProtocolProgram> {
    let k = rng.range(1, 3);
    let first = rng.range(0, 1);
    let sender = |i: usize| (first + i) % 2;
    let answerer = 1 - sender(k - 1);
    let mut regs = input_registers(2, 1);
    regs.push(Register::new("wa", 1, "A", Role::Work));
    regs.push(Register::new("wb", 1, "B", Role::Work));
    let extra = rng.range(0, 1);
    for e in 0..extra {
        let owner = party_name(rng.range(0, 1));
        regs.push(Register::new(format!("w{e}"), 1, owner, Role::Work));
    }
    let bell = rng.coin();
    if bell {
        regs.push(Register::new("ea", 1, "A", Role::Entangled));
        regs.push(Register::new("eb", 1, "B", Role::Entangled));
    }
    regs.push(Register::new("ans", 1, party_name(answerer), Role::Answer));
    let layout = RegisterLayout::new(regs).ok()?;
    let mut owners: std::collections::BTreeMap<String, String> = layout
        .registers()
        .iter()
        .map(|r| (r.name.clone(), r.owner.clone()))
        .collect();
    let mut rounds = Vec::new();
    for i in 0..k {
        let (s, r) = (sender(i), 1 - sender(i));
        let me = party_name(s);
        let usable: Vec<String> = layout
            .registers()
            .iter()
            .filter(|reg| reg.role != Role::Input && owners[&reg.name] == me)
            .map(|reg| reg.name.clone())
            .collect();
        let movable: Vec<String> = usable.iter().filter(|n| *n != "ans").cloned().collect();
        if movable.is_empty() {
            return None;
        }
        let mut gates = Vec::new();
        for _ in 0..rng.range(1, 4) {
            if let Some(g) = random_gate(rng, &usable) {
                gates.push(g);
            }
        }
        let mut transfer: Vec<String> = movable.iter().filter(|_| rng.coin()).cloned().collect();
        if transfer.is_empty() {
            transfer.push(movable[rng.range(0, movable.len() - 1)].clone());
        }
        for t in &transfer {
            owners.insert(t.clone(), party_name(r));
        }
        rounds.push(RoundSpec {
            sender: me,
            receiver: party_name(r),
            gates,
            transfer,
        });
    }
    let prior = if bell {
        PriorEntanglement::BellPairs {
            count: 1,
            parties: ["A".into(), "B".into()],
        }
    } else {
        PriorEntanglement::None
    };
    let p = ProtocolProgram {
        parties: vec!["A".into(), "B".into()],
        registers: layout,
        prior_entanglement: prior,
        rounds,
        answer: AnswerSpec {
            party: party_name(answerer),
            register: "ans".into(),
            final_gates: vec![],
        },
    };
    p.validate().is_ok().then_some(p)
}

fn random_gate(rng: &mut SeededRng, usable: &[String]) -> Option<GateSpec> {
    let mut pool: Vec<QubitRef> = usable.iter().map(|n| q(n)).collect();
    let pick = |rng: &mut SeededRng, pool: &mut Vec<QubitRef>| {
        let i = rng.range(0, pool.len() - 1);
        pool.swap_remove(i)
    };
    let kind = rng.range(0, 6);
    let need = match kind {
        0..=2 => 1,
        3 | 5 | 6 => 2,
        _ => 3,
    };
    if pool.len() < need {
        return None;
    }
    let t: Vec<QubitRef> = (0..need).map(|_| pick(rng, &mut pool)).collect();
    Some(match kind {
        0 => GateSpec::h(t[0].clone()),
        1 => GateSpec::x(t[0].clone()),
        2 => GateSpec::z(t[0].clone()),
        3 => GateSpec::cnot(t[0].clone(), t[1].clone()),
        4 => GateSpec::toffoli(t[0].clone(), t[1].clone(), t[2].clone()),
        5 => GateSpec::cphase(rng.uniform() * std::f64::consts::TAU, t[0].clone(), t[1].clone()),
        _ => GateSpec::raw(random_unitary(4, rng), t),
    })
}
