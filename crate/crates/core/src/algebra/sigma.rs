use std::sync::{Arc, OnceLock, RwLock};

use super::poly::DerivPolynomial;
use super::symbol::DerivSymbol;
use crate::error::{Error, Result};

pub const DEFAULT_N_MAX: u32 = 12;

/// Memo table for σ_1..σ_{n_max}.
///
/// σ_1 = A0 and σ_{k+1} = -σ_k' - B0·Σ_{j=1}^{k-1} σ_j σ_{k-j}.
/// Entries are computed once, in order, under a write lock; readers share
/// `Arc`s.
#[derive(Debug)]
pub struct SigmaTable {
    n_max: u32,
    cache: RwLock<Vec<Arc<DerivPolynomial>>>,
}

impl SigmaTable {
    pub fn new(n_max: u32) -> Self {
        Self {
            n_max,
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn get(&self, k: u32) -> Result<Arc<DerivPolynomial>> {
        if k == 0 || k > self.n_max {
            return Err(Error::MaxOrderExceeded {
                order: k,
                max: self.n_max,
            });
        }
        let idx = (k - 1) as usize;
        {
            let cache = self.cache.read().expect("sigma cache poisoned");
            if let Some(p) = cache.get(idx) {
                return Ok(Arc::clone(p));
            }
        }
        let mut cache = self.cache.write().expect("sigma cache poisoned");
        while cache.len() <= idx {
            let next = match cache.len() {
                0 => DerivPolynomial::symbol(DerivSymbol::a(0)),
                len => step(&cache[..len], self.n_max)?,
            };
            cache.push(Arc::new(next));
        }
        Ok(Arc::clone(&cache[idx]))
    }
}

/// σ_{k+1} from σ_1..σ_k.
fn step(prev: &[Arc<DerivPolynomial>], n_max: u32) -> Result<DerivPolynomial> {
    let k = prev.len();
    let mut conv = DerivPolynomial::zero();
    for j in 1..k {
        conv = conv.add(&prev[j - 1].multiply(&prev[k - j - 1]));
    }
    let b0 = DerivPolynomial::symbol(DerivSymbol::b(0));
    let d = prev[k - 1].differentiate(n_max)?;
    Ok(d.neg().sub(&b0.multiply(&conv)))
}

fn default_table() -> &'static SigmaTable {
    static TABLE: OnceLock<SigmaTable> = OnceLock::new();
    TABLE.get_or_init(|| SigmaTable::new(DEFAULT_N_MAX))
}

/// σ_k from the shared table with `n_max = 12`.
pub fn sigma(k: u32) -> Result<Arc<DerivPolynomial>> {
    default_table().get(k)
}
