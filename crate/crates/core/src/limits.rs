use crate::{Error, Result};

/// Caps for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier accepted as input to an enumeration.
    pub size_cap: usize,
    /// Candidate steps allowed per enumeration call.
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            size_cap: 64,
            budget: 10_000_000,
        }
    }
}

impl Limits {
    pub fn new(size_cap: usize, budget: u64) -> Result<Self> {
        if size_cap == 0 || budget == 0 {
            return Err(Error::Precondition(
                "size cap and budget must be positive".into(),
            ));
        }
        Ok(Limits { size_cap, budget })
    }

    pub fn check_size(&self, size: usize) -> Result<()> {
        if size > self.size_cap {
            Err(Error::SizeCap {
                size,
                cap: self.size_cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }
}

/// A step counter shared by the searches of one operation.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    #[inline]
    pub fn tick(&mut self, steps: u64) -> Result<()> {
        self.used += steps;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
