//! Name-to-factory tables for runtime-selectable strategies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

type Factory<T, O> = Box<dyn Fn(&O) -> Result<Box<T>> + Send + Sync>;

/// Maps names to constructors of boxed trait objects `T` configured by `O`.
pub struct Registry<T: ?Sized, O> {
    kind: &'static str,
    entries: BTreeMap<String, Factory<T, O>>,
}

impl<T: ?Sized, O> Registry<T, O> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces the factory registered under `name`.
    pub fn register<F>(&mut self, name: &str, factory: F) -> &mut Self
    where
        F: Fn(&O) -> Result<Box<T>> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_owned(), Box::new(factory));
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, options: &O) -> Result<Box<T>> {
        match self.entries.get(name) {
            Some(f) => f(options),
            None => Err(Error::Config(format!(
                "unknown {} '{name}' (available: {})",
                self.kind,
                self.names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

impl<T: ?Sized, O> std::fmt::Debug for Registry<T, O> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.entries.keys().collect::<Vec<_>>())
            .finish()
    }
}
