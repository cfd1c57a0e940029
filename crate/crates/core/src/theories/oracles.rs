use std::collections::BTreeSet;
use std::fmt;

use super::TheoryError;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Decidable stand-in for the set of cycle lengths that forbid short
/// cycles. Members are primes ≥ 7.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SOracle {
    members: BTreeSet<u64>,
}

impl SOracle {
    pub fn new(members: impl IntoIterator<Item = u64>) -> Result<Self, TheoryError> {
        let members: BTreeSet<u64> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&n| n < 7 || !is_prime(n)) {
            return Err(TheoryError::BadSMember(bad));
        }
        Ok(SOracle { members })
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.contains(&n)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }
}

impl Default for SOracle {
    /// `{7, 11, 13}`.
    fn default() -> Self {
        SOracle { members: [7, 11, 13].into_iter().collect() }
    }
}

impl fmt::Display for SOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Computable stand-in for the 0/1 sequence deciding each `P_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HOracle {
    /// `h(n) = 1` iff `n` is odd.
    Parity,
    /// `h(n) = 1` iff `n` is listed.
    Ones(BTreeSet<u64>),
}

impl HOracle {
    pub fn value(&self, n: u64) -> bool {
        match self {
            HOracle::Parity => n % 2 == 1,
            HOracle::Ones(set) => set.contains(&n),
        }
    }

    /// Parses `parity` or whitespace/comma separated indices `n` with
    /// `h(n) = 1`.
    pub fn parse(text: &str) -> Result<Self, TheoryError> {
        if text.trim() == "parity" {
            return Ok(HOracle::Parity);
        }
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>().map_err(|_| TheoryError::BadConfig(format!("bad h index `{t}`"))))
            .collect::<Result<BTreeSet<u64>, _>>()
            .map(HOracle::Ones)
    }
}
