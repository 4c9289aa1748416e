use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Every checkable statement, named by its CLI tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    Hh13,
    HhFrac14,
    Fejer16,
    FejerFrac17,
    Identity21,
    Bound26,
    Bound29,
    Bound210,
    Bound216,
    Bound217,
    Bound218,
    Bound219,
    Bound220,
    Bound223,
    Lemma1,
}

/// Which inputs an evaluator consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Needs {
    pub g: bool,
    pub h: bool,
    pub alpha: bool,
    pub q: bool,
    pub theta: bool,
}

impl InequalityId {
    pub const ALL: [InequalityId; 15] = [
        InequalityId::Hh13,
        InequalityId::HhFrac14,
        InequalityId::Fejer16,
        InequalityId::FejerFrac17,
        InequalityId::Identity21,
        InequalityId::Bound26,
        InequalityId::Bound29,
        InequalityId::Bound210,
        InequalityId::Bound216,
        InequalityId::Bound217,
        InequalityId::Bound218,
        InequalityId::Bound219,
        InequalityId::Bound220,
        InequalityId::Bound223,
        InequalityId::Lemma1,
    ];

    pub fn name(self) -> &'static str {
        use InequalityId::*;
        match self {
            Hh13 => "hh-1.3",
            HhFrac14 => "hh-frac-1.4",
            Fejer16 => "fejer-1.6",
            FejerFrac17 => "fejer-frac-1.7",
            Identity21 => "identity-2.1",
            Bound26 => "bound-2.6",
            Bound29 => "bound-2.9",
            Bound210 => "bound-2.10",
            Bound216 => "bound-2.16",
            Bound217 => "bound-2.17",
            Bound218 => "bound-2.18",
            Bound219 => "bound-2.19",
            Bound220 => "bound-2.20",
            Bound223 => "bound-2.23",
            Lemma1 => "lemma-1",
        }
    }

    pub fn needs(self) -> Needs {
        use InequalityId::*;
        let none = Needs { g: false, h: false, alpha: false, q: false, theta: false };
        match self {
            Hh13 | Bound218 => none,
            HhFrac14 | Bound217 => Needs { alpha: true, ..none },
            Fejer16 | Bound216 => Needs { g: true, ..none },
            FejerFrac17 | Bound29 | Bound210 => Needs { g: true, alpha: true, ..none },
            Identity21 | Bound26 => Needs { h: true, ..none },
            Bound219 => Needs { h: true, q: true, ..none },
            Bound220 => Needs { g: true, alpha: true, q: true, ..none },
            Bound223 => Needs { q: true, ..none },
            Lemma1 => Needs { theta: true, ..none },
        }
    }

    pub fn is_chain(self) -> bool {
        use InequalityId::*;
        matches!(self, Hh13 | HhFrac14 | Fejer16 | FejerFrac17)
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = InequalityId::ALL.iter().map(|i| i.name()).collect();
                format!("unknown inequality `{s}`; expected one of {}", names.join(", "))
            })
    }
}

impl Serialize for InequalityId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(id.name().parse::<InequalityId>().unwrap(), id);
        }
        assert!("bound-2.7".parse::<InequalityId>().is_err());
    }
}
