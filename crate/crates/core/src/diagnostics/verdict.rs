use std::fmt;

use serde::{Serialize, Serializer};

use crate::exactalg::MultiPoly;
use crate::geometry::{format_combination, VectorField};

/// A nonzero value that refutes an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// What was evaluated, e.g. `T(X1,X2)`.
    pub expression: String,
    /// The full value, e.g. `-Y1`.
    pub value: String,
    /// Index and label of the first nonzero component.
    pub component: usize,
    pub label: String,
    #[serde(serialize_with = "as_string")]
    pub coefficient: MultiPoly,
}

fn as_string<S: Serializer>(p: &MultiPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl Witness {
    /// `None` if `value` vanishes.
    pub fn from_field(expression: impl Into<String>, value: &VectorField) -> Option<Self> {
        let (component, coefficient) = value.first_nonzero()?;
        Some(Witness {
            expression: expression.into(),
            value: value.to_string(),
            component,
            label: value.context().label(component).to_string(),
            coefficient: coefficient.clone(),
        })
    }

    /// Witness for a vector given by components on an arbitrary frame.
    pub fn from_components(expression: impl Into<String>, labels: &[String], comps: &[MultiPoly]) -> Option<Self> {
        let (component, coefficient) = comps.iter().enumerate().find(|(_, c)| !c.is_zero())?;
        Some(Witness {
            expression: expression.into(),
            value: format_combination(labels, comps),
            component,
            label: labels[component].clone(),
            coefficient: coefficient.clone(),
        })
    }

    /// Witness for a scalar.
    pub fn scalar(expression: impl Into<String>, value: &MultiPoly) -> Option<Self> {
        if value.is_zero() {
            return None;
        }
        Some(Witness {
            expression: expression.into(),
            value: value.to_string(),
            component: 0,
            label: String::new(),
            coefficient: value.clone(),
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.expression, self.value)
    }
}

/// Outcome of a named exact check. A witness is present iff the check fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(name: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        Verdict {
            name: name.into(),
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_witness(name: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    /// Failure whose reason is not a nonzero tensor value.
    pub fn fail_because(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Verdict {
            name: name.into(),
            holds: false,
            witness: Some(Witness {
                expression: reason,
                value: "false".into(),
                component: 0,
                label: String::new(),
                coefficient: MultiPoly::one(&crate::exactalg::Vars::empty()),
            }),
        }
    }

    /// Checks `check` on all items, stopping at the first witness.
    pub fn search<T>(
        name: impl Into<String>,
        items: impl IntoIterator<Item = T>,
        mut check: impl FnMut(T) -> Option<Witness>,
    ) -> Self {
        for item in items {
            if let Some(w) = check(item) {
                return Self::fail(name, w);
            }
        }
        Self::pass(name)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: holds", self.name),
            Some(w) => write!(f, "{}: fails, {w}", self.name),
        }
    }
}
