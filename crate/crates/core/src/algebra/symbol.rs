use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Function species. `A` is bound to q∓ and `B` to q± by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    A,
    B,
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::A => f.write_str("A"),
            Species::B => f.write_str("B"),
        }
    }
}

/// `j`-th derivative of one species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DerivSymbol {
    pub species: Species,
    pub order: u32,
}

impl DerivSymbol {
    pub const fn a(order: u32) -> Self {
        Self {
            species: Species::A,
            order,
        }
    }

    pub const fn b(order: u32) -> Self {
        Self {
            species: Species::B,
            order,
        }
    }
}

impl fmt::Display for DerivSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.species, self.order)
    }
}

/// Product of derivative symbols.
///
/// Factors are stored sorted (species A first, then ascending order). The
/// empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<DerivSymbol>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut factors: Vec<DerivSymbol>) -> Self {
        factors.sort_unstable();
        Self { factors }
    }

    pub fn single(s: DerivSymbol) -> Self {
        Self { factors: vec![s] }
    }

    pub fn factors(&self) -> &[DerivSymbol] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn count(&self, species: Species) -> usize {
        self.factors.iter().filter(|s| s.species == species).count()
    }

    /// Sum of derivative orders over all factors.
    pub fn total_order(&self) -> u32 {
        self.factors.iter().map(|s| s.order).sum()
    }

    pub fn max_order(&self) -> Option<u32> {
        self.factors.iter().map(|s| s.order).max()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut f = Vec::with_capacity(self.factors.len() + other.factors.len());
        f.extend_from_slice(&self.factors);
        f.extend_from_slice(&other.factors);
        Monomial::new(f)
    }

    /// Factors in print order: A before B, highest order first.
    fn display_seq(&self) -> impl Iterator<Item = (u8, u32)> + '_ {
        let (a, b): (Vec<&DerivSymbol>, Vec<&DerivSymbol>) =
            self.factors.iter().partition(|s| s.species == Species::A);
        a.into_iter()
            .rev()
            .chain(b.into_iter().rev())
            .map(|s| (if s.species == Species::A { 1u8 } else { 0u8 }, s.order))
    }
}

// Print order: fewer factors first, then descending by the printed factor sequence.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors
            .len()
            .cmp(&other.factors.len())
            .then_with(|| other.display_seq().cmp(self.display_seq()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let (a, b): (Vec<&DerivSymbol>, Vec<&DerivSymbol>) =
            self.factors.iter().partition(|s| s.species == Species::A);
        let mut first = true;
        for s in a.iter().rev().chain(b.iter().rev()) {
            if !first {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseMonomialError(pub String);

impl fmt::Display for ParseMonomialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad monomial: {}", self.0)
    }
}

impl std::error::Error for ParseMonomialError {}

impl FromStr for Monomial {
    type Err = ParseMonomialError;

    /// Parses `A3.A0.B0`; `1` is the empty monomial.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for tok in s.split('.') {
            let tok = tok.trim();
            let species = match tok.chars().next() {
                Some('A') => Species::A,
                Some('B') => Species::B,
                _ => return Err(ParseMonomialError(s.to_string())),
            };
            let order = tok[1..]
                .parse::<u32>()
                .map_err(|_| ParseMonomialError(s.to_string()))?;
            factors.push(DerivSymbol { species, order });
        }
        Ok(Monomial::new(factors))
    }
}
