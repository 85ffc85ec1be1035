use std::fmt;

/// Which representation a polynomial's coefficients are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Coefficients of the polynomial itself.
    Normal,
    /// Evaluations after the number-theoretic transform.
    Ntt,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Normal => "normal",
            Domain::Ntt => "ntt",
        }
    }

    pub(crate) fn expect(self, expected: Domain) -> crate::Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(crate::Error::DomainMismatch {
                expected: expected.as_str(),
                found: self.as_str(),
            })
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
