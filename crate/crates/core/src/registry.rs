//! Name-keyed registry of strategy objects.

use std::sync::Arc;

use crate::error::{Error, Result};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, Arc<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Registers `item` under `name`, replacing an earlier entry of that name.
    pub fn register(&mut self, name: &'static str, item: Arc<T>) {
        if let Some(slot) = self.entries.iter_mut().find(|(n, _)| *n == name) {
            slot.1 = item;
        } else {
            self.entries.push((name, item));
        }
    }

    pub fn with(mut self, name: &'static str, item: Arc<T>) -> Self {
        self.register(name, item);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, item)| item.clone())
            .ok_or_else(|| Error::Unknown {
                kind: self.kind,
                name: name.to_string(),
            })
    }

    /// Names in registration order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_replace() {
        let reg: Registry<str> = Registry::new("thing")
            .with("a", Arc::from("first"))
            .with("b", Arc::from("second"))
            .with("a", Arc::from("third"));
        assert_eq!(&*reg.get("a").unwrap(), "third");
        assert_eq!(reg.names(), vec!["a", "b"]);
        assert_eq!(
            reg.get("zzz").unwrap_err(),
            Error::Unknown {
                kind: "thing",
                name: "zzz".into()
            }
        );
    }
}
