//! Interned identifiers for entities, roles and relation types.
//!
//! Each namespace gets its own newtype so an entity can never be passed where
//! a role is expected. Identifiers compare by name, which gives every
//! namespace a stable total order independent of insertion order.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

macro_rules! symbol {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                $name(Arc::from(name.as_ref()))
            }

            pub fn name(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                $name::new(name)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

symbol!(
    /// An entity of the knowledge base (including fact IDs once they are
    /// promoted to entities).
    EntityId
);
symbol!(
    /// A role: the named position an entity occupies in an instance.
    RoleId
);
symbol!(
    /// A relation type (or meta-relation type for facts).
    RelTypeId
);

/// Shares one allocation per distinct name.
///
/// Parsers push millions of repeated names through here; ids are equal by
/// name regardless, so the interner only saves memory.
#[derive(Debug, Default)]
pub struct Interner {
    names: HashSet<Arc<str>>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    fn shared(&mut self, name: &str) -> Arc<str> {
        if let Some(existing) = self.names.get(name) {
            return existing.clone();
        }
        let arc: Arc<str> = Arc::from(name);
        self.names.insert(arc.clone());
        arc
    }

    pub fn entity(&mut self, name: &str) -> EntityId {
        EntityId(self.shared(name))
    }

    pub fn role(&mut self, name: &str) -> RoleId {
        RoleId(self.shared(name))
    }

    pub fn rel_type(&mut self, name: &str) -> RelTypeId {
        RelTypeId(self.shared(name))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
