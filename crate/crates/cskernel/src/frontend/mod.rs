//! Text frontend: connection-file and expression parsing, canonical
//! printing, and the command-line dispatcher.

pub mod cli;
pub mod parse;
pub mod print;

use thiserror::Error;

use crate::error::Error as KernelError;
use crate::logres::LogConnection;
use crate::scalar::Var;

/// Declared variable names in order, plus which of them are log variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    logvars: Vec<Var>,
}

impl VarTable {
    /// Build from names; rejects duplicates and unknown log names.
    pub fn new(names: Vec<String>, lognames: &[String]) -> Result<Self, String> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(format!("duplicate variable '{n}'"));
            }
        }
        let mut logvars = Vec::new();
        for ln in lognames {
            match names.iter().position(|n| n == ln) {
                Some(i) => {
                    let v = i as Var;
                    if logvars.contains(&v) {
                        return Err(format!("duplicate log variable '{ln}'"));
                    }
                    logvars.push(v);
                }
                None => return Err(format!("log variable '{ln}' is not declared")),
            }
        }
        Ok(VarTable { names, logvars })
    }

    /// Synthetic table `x0, x1, ...` for tests and selftest corpora.
    pub fn synthetic(num_vars: u32, logvars: Vec<Var>) -> Self {
        VarTable {
            names: (0..num_vars).map(|i| format!("x{i}")).collect(),
            logvars,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(|i| i as Var)
    }

    pub fn logvars(&self) -> &[Var] {
        &self.logvars
    }

    pub fn is_logvar(&self, v: Var) -> bool {
        self.logvars.contains(&v)
    }
}

/// A parsed and fully validated connection file.
#[derive(Clone, Debug)]
pub struct ConnectionSpec {
    pub table: VarTable,
    pub connection: LogConnection,
}

/// Frontend parse errors; kernel validation errors pass through.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable '{name}' at {line}:{col}")]
    UnknownVariable {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("rank mismatch at line {line}: {msg}")]
    RankMismatch { line: usize, msg: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::UnknownVariable { .. } => "UnknownVariable",
            ParseError::RankMismatch { .. } => "RankMismatch",
            ParseError::Kernel(e) => e.kind(),
        }
    }
}
