use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An event label. Names are opaque strings: `"13"` is a name, not a number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(Arc<str>);

impl Event {
    pub fn new(name: &str) -> Self {
        Event(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Event {
    fn from(s: &str) -> Self {
        Event::new(s)
    }
}

impl From<String> for Event {
    fn from(s: String) -> Self {
        Event(Arc::from(s))
    }
}

impl Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(Event::from)
    }
}

pub type EventSet = BTreeSet<Event>;

/// Builds an [`EventSet`] from string names.
pub fn events<I, S>(names: I) -> EventSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|s| Event::new(s.as_ref())).collect()
}

/// A finite string of events, displayed dot-joined (`21.23.20.11`); the
/// empty string displays as `ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(pub Vec<Event>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    /// Parses a dot-joined string. `""` and `"ε"` denote the empty string.
    pub fn parse(text: &str) -> Self {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Trace::empty();
        }
        Trace(text.split('.').map(Event::new).collect())
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, e: Event) {
        self.0.push(e);
    }

    pub fn with(&self, e: &Event) -> Trace {
        let mut t = self.clone();
        t.push(e.clone());
        t
    }

    /// Natural projection onto `observable`: erases every other event.
    pub fn project(&self, observable: &EventSet) -> Trace {
        Trace(
            self.0
                .iter()
                .filter(|e| observable.contains(*e))
                .cloned()
                .collect(),
        )
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(e.as_str())?;
        }
        Ok(())
    }
}

impl From<Vec<Event>> for Trace {
    fn from(v: Vec<Event>) -> Self {
        Trace(v)
    }
}

impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Trace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(|s| Trace::parse(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_display_and_parse() {
        let t = Trace::parse("21.23.20.11");
        assert_eq!(t.len(), 4);
        assert_eq!(t.to_string(), "21.23.20.11");
        assert_eq!(Trace::parse("ε"), Trace::empty());
        assert_eq!(Trace::empty().to_string(), "ε");
    }

    #[test]
    fn projection_erases_unobservable() {
        let t = Trace::parse("11.13.10");
        assert_eq!(t.project(&events(["11", "10"])).to_string(), "11.10");
        assert_eq!(t.project(&EventSet::new()), Trace::empty());
    }
}
