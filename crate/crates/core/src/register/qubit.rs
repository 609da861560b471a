use std::fmt;

/// What a photon is doing in a cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Root,
    /// A leaf, with the construction step that created it. Larger is newer.
    Leaf { birth: u32 },
    EprHalf,
    /// The photon left behind by a fusion between two leaves.
    Connector,
}

/// A qubit label, unique within the allocator that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId {
    label: u32,
    role: Role,
}

impl QubitId {
    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn birth(&self) -> Option<u32> {
        match self.role {
            Role::Leaf { birth } => Some(birth),
            _ => None,
        }
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            Role::Root => write!(f, "r{}", self.label),
            Role::Leaf { birth } => write!(f, "l{}@{}", self.label, birth),
            Role::EprHalf => write!(f, "e{}", self.label),
            Role::Connector => write!(f, "c{}", self.label),
        }
    }
}

/// Hands out fresh, never-repeating qubit labels.
#[derive(Clone, Debug, Default)]
pub struct QubitAllocator {
    next: u32,
}

impl QubitAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, role: Role) -> QubitId {
        let label = self.next;
        self.next += 1;
        QubitId { label, role }
    }
}
