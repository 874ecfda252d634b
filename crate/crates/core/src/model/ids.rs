use std::fmt;

macro_rules! index_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

index_type!(
    /// An agent of the network.
    AgentId,
    "agent#"
);
index_type!(
    /// A physical state of the environment.
    StateId,
    "state#"
);
index_type!(
    /// An action. Objective and subjective actions share one index space, so
    /// the two kinds are disjoint by construction; the kind lives on the
    /// [`System`](super::System).
    ActionId,
    "action#"
);

/// Whether an action is applied to the environment or only used while planning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Objective,
    Subjective,
}

impl ActionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Objective => "objective",
            ActionKind::Subjective => "subjective",
        }
    }
}
