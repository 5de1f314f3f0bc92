//! Interned strings for colors, actions, and hyperedge labels.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// An interned string. Cheap to copy, compare, and hash; resolves back to
/// its text for display and serialization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

fn interner() -> &'static Mutex<Interner> {
    static INTERNER: OnceLock<Mutex<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        Mutex::new(Interner {
            names: Vec::new(),
            index: HashMap::new(),
        })
    })
}

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        let mut it = interner().lock().unwrap();
        if let Some(&id) = it.index.get(name) {
            return Symbol(id);
        }
        let id = it.names.len() as u32;
        it.names.push(name.to_string());
        it.index.insert(name.to_string(), id);
        Symbol(id)
    }

    pub fn as_str(&self) -> String {
        interner().lock().unwrap().names[self.0 as usize].clone()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Symbol {
        Symbol::new(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Symbol::new("red");
        let b = Symbol::new("red");
        let c = Symbol::new("blue");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.as_str(), "red");
    }
}
