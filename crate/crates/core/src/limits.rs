use crate::error::{Error, Result};

/// Work bounds shared by every enumerating or expanding operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest word any enumeration may produce.
    pub max_len: usize,
    /// Highest total degree a series expansion may reach.
    pub max_order: usize,
    /// Coarse cap on elementary steps (words visited, matrix rows, states built).
    pub max_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_len: 16,
            max_order: 64,
            max_work: 20_000_000,
        }
    }
}

impl Limits {
    pub fn with_max_work(mut self, max_work: u64) -> Self {
        self.max_work = max_work;
        self
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            return Err(Error::limit(format!("word length {len}"), self.max_len as u64));
        }
        Ok(())
    }

    pub(crate) fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::limit(
                format!("expansion order {order}"),
                self.max_order as u64,
            ));
        }
        Ok(())
    }

    pub(crate) fn check_work(&self, what: &str, work: u64) -> Result<()> {
        if work > self.max_work {
            return Err(Error::limit(format!("{what} ({work} steps)"), self.max_work));
        }
        Ok(())
    }
}
