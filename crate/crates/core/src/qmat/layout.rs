use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::{Error, Result};

/// Default cap on the global register width.
pub const DEFAULT_MAX_WIDTH: usize = 14;

/// Party identifier (`"A"`, `"B"`, ...).
pub type Party = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Input,
    /// Target of the safe-copy fan-out of an input register.
    InputCopy,
    Work,
    Entangled,
    Answer,
    Message,
    /// Coherent copy of a classical input used to load input distributions;
    /// never acted upon.
    Purification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub width: usize,
    pub owner: Party,
    pub role: Role,
}

impl Register {
    pub fn new(name: impl Into<String>, width: usize, owner: impl Into<Party>, role: Role) -> Self {
        Self {
            name: name.into(),
            width,
            owner: owner.into(),
            role,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered list of named qubit registers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Register>", into = "Vec<Register>")]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl TryFrom<Vec<Register>> for RegisterLayout {
    type Error = Error;

    fn try_from(registers: Vec<Register>) -> Result<Self> {
        Self::new(registers)
    }
}

impl From<RegisterLayout> for Vec<Register> {
    fn from(layout: RegisterLayout) -> Self {
        layout.registers
    }
}

impl RegisterLayout {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &registers {
            if !is_identifier(&r.name) {
                return Err(Error::InvalidLayout(format!("`{}` is not an identifier", r.name)));
            }
            if r.width == 0 {
                return Err(Error::InvalidLayout(format!("register `{}` has width 0", r.name)));
            }
            if !seen.insert(r.name.as_str()) {
                return Err(Error::DuplicateRegister(r.name.clone()));
            }
        }
        Ok(Self { registers })
    }

    /// A layout made of one register.
    pub fn single(name: &str, width: usize, owner: &str, role: Role) -> Self {
        Self::new(vec![Register::new(name, width, owner, role)]).expect("valid register")
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_width(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_width()
    }

    pub fn check_width(&self, max: usize) -> Result<()> {
        let width = self.total_width();
        if width > max {
            return Err(Error::WidthOverflow { width, max });
        }
        Ok(())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.get(name).ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(|r| r.name.as_str())
    }

    /// Global index of the first qubit of `name`.
    pub fn qubit_offset(&self, name: &str) -> Result<usize> {
        let mut offset = 0;
        for r in &self.registers {
            if r.name == name {
                return Ok(offset);
            }
            offset += r.width;
        }
        Err(Error::UnknownRegister(name.to_string()))
    }

    /// Global qubit indices covered by the named registers, in declaration
    /// order regardless of the order of `names`.
    pub fn qubits_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        for n in names {
            self.register(n.as_ref())?;
        }
        let mut qubits = Vec::new();
        let mut offset = 0;
        for r in &self.registers {
            if names.iter().any(|n| n.as_ref() == r.name) {
                qubits.extend(offset..offset + r.width);
            }
            offset += r.width;
        }
        Ok(qubits)
    }

    /// Sub-layout made of the named registers, in declaration order.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        for n in names {
            self.register(n.as_ref())?;
        }
        Ok(Self {
            registers: self
                .registers
                .iter()
                .filter(|r| names.iter().any(|n| n.as_ref() == r.name))
                .cloned()
                .collect(),
        })
    }

    /// Names of all registers not in `names`.
    pub fn complement<S: AsRef<str>>(&self, names: &[S]) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| !names.iter().any(|n| n.as_ref() == r.name))
            .map(|r| r.name.clone())
            .collect()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        Self::new(registers)
    }

    pub fn push(&mut self, register: Register) -> Result<()> {
        let mut registers = std::mem::take(&mut self.registers);
        registers.push(register);
        *self = Self::new(registers)?;
        Ok(())
    }

    pub fn set_owner(&mut self, name: &str, owner: &str) -> Result<()> {
        let r = self
            .registers
            .iter_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))?;
        r.owner = owner.to_string();
        Ok(())
    }

    pub fn owned_by(&self, party: &str) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| r.owner == party)
            .map(|r| r.name.clone())
            .collect()
    }

    pub fn with_role(&self, role: Role) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| r.role == role)
            .map(|r| r.name.clone())
            .collect()
    }

    /// Register names owned by `party` carrying `role`, in declaration order.
    pub fn owned_with_role(&self, party: &str, role: Role) -> Vec<String> {
        self.registers
            .iter()
            .filter(|r| r.owner == party && r.role == role)
            .map(|r| r.name.clone())
            .collect()
    }
}
