use serde::Serialize;
use serde_json::{json, Value};

use crate::connectivity::lambda;
use crate::matroid::Matroid;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    Circuit,
    Cocircuit,
    /// `sets[0]` is one side of a 1- or 2-separation.
    Separation,
    /// `sets` is a strictly increasing chain.
    Chain,
}

/// A claim about a matroid that can be checked again later.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub sets: Vec<ElementSet>,
    pub note: String,
}

impl Witness {
    pub fn circuit(c: ElementSet, note: impl Into<String>) -> Witness {
        Witness { kind: WitnessKind::Circuit, sets: vec![c], note: note.into() }
    }

    pub fn cocircuit(c: ElementSet, note: impl Into<String>) -> Witness {
        Witness { kind: WitnessKind::Cocircuit, sets: vec![c], note: note.into() }
    }

    pub fn verify(&self, m: &Matroid) -> bool {
        match self.kind {
            WitnessKind::Circuit => !self.sets.is_empty() && self.sets.iter().all(|&c| m.is_circuit(c)),
            WitnessKind::Cocircuit => !self.sets.is_empty() && self.sets.iter().all(|&c| m.is_cocircuit(c)),
            WitnessKind::Separation => self.sets.first().is_some_and(|&x| {
                let l = lambda(m, x);
                l <= 1 && x.len().min(m.n() - x.len()) > l
            }),
            WitnessKind::Chain => self.sets.windows(2).all(|w| w[0].is_subset(w[1]) && w[0] != w[1]),
        }
    }

    pub fn to_json(&self, m: &Matroid) -> Value {
        json!({
            "kind": self.kind,
            "sets": self.sets.iter().map(|s| labels_of(m, *s)).collect::<Vec<_>>(),
            "note": self.note,
        })
    }
}

pub fn labels_of(m: &Matroid, s: ElementSet) -> Vec<String> {
    s.iter().map(|e| m.label(e).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, uniform};

    #[test]
    fn witnesses_replay() {
        let m = uniform(2, 4).unwrap();
        assert!(Witness::circuit(m.set(&[0, 1, 2]), "").verify(&m));
        assert!(!Witness::circuit(m.set(&[0, 1]), "").verify(&m));
        assert!(Witness::cocircuit(m.set(&[1, 2, 3]), "").verify(&m));
        let k4 = complete(4).unwrap();
        let sep = Witness { kind: WitnessKind::Separation, sets: vec![k4.set(&[0, 1])], note: String::new() };
        assert!(!sep.verify(&k4));
        let chain = Witness { kind: WitnessKind::Chain, sets: vec![m.set(&[0]), m.set(&[0, 3])], note: String::new() };
        assert!(chain.verify(&m));
        assert_eq!(Witness::circuit(m.set(&[0, 1, 2]), "t").to_json(&m)["sets"][0][2], "2");
    }
}
