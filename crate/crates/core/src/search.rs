use serde::{Deserialize, Serialize};

/// Default node cap for the exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Result of a budgeted exhaustive search. `Exhausted` is only produced
/// when every branch was explored; running out of nodes gives `Unknown`.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome<T> {
    Found { witness: T, nodes: u64 },
    Exhausted { nodes: u64 },
    Unknown { nodes: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Found,
    None,
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn verdict(&self) -> Verdict {
        match self {
            SearchOutcome::Found { .. } => Verdict::Found,
            SearchOutcome::Exhausted { .. } => Verdict::None,
            SearchOutcome::Unknown { .. } => Verdict::Unknown,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::Exhausted { nodes }
            | SearchOutcome::Unknown { nodes } => *nodes,
        }
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<T> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found { witness, nodes } => SearchOutcome::Found {
                witness: f(witness),
                nodes,
            },
            SearchOutcome::Exhausted { nodes } => SearchOutcome::Exhausted { nodes },
            SearchOutcome::Unknown { nodes } => SearchOutcome::Unknown { nodes },
        }
    }
}

/// Node counter shared by the backtracking searches.
pub(crate) struct NodeCounter {
    pub nodes: u64,
    pub budget: u64,
}

impl NodeCounter {
    pub fn new(budget: u64) -> Self {
        NodeCounter { nodes: 0, budget }
    }

    /// Counts one node; false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }
}

/// Tri-state answer of a search.
pub(crate) enum Step {
    Found,
    Dead,
    OutOfBudget,
}
