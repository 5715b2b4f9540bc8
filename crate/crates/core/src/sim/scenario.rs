use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::wire::WireOpId;

/// A scripted run over a fixed set of replicas.
///
/// ```json
/// {"replicas": ["A", "B"],
///  "steps": [{"op": "set", "replica": "A", "value": 1},
///            {"op": "sync", "from": "A", "to": "B"},
///            {"op": "check", "replica": "B", "values": [1]}]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub replicas: Vec<String>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", deny_unknown_fields)]
pub enum Step {
    /// `value` null or absent deletes.
    Set {
        replica: String,
        #[serde(default)]
        value: Option<Json>,
    },
    Undo {
        replica: String,
    },
    Redo {
        replica: String,
    },
    /// Ships every operation `from` knows and `to` does not.
    Sync {
        from: String,
        to: String,
    },
    SyncAll,
    Check {
        replica: String,
        values: Vec<Json>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    CheckStacks {
        replica: String,
        undo: Vec<WireOpId>,
        redo: Vec<WireOpId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl Step {
    /// Replica names this step refers to.
    pub fn replicas(&self) -> Vec<&str> {
        match self {
            Step::Set { replica, .. }
            | Step::Undo { replica }
            | Step::Redo { replica }
            | Step::Check { replica, .. }
            | Step::CheckStacks { replica, .. } => vec![replica],
            Step::Sync { from, to } => vec![from, to],
            Step::SyncAll => vec![],
        }
    }

    pub fn is_check(&self) -> bool {
        matches!(self, Step::Check { .. } | Step::CheckStacks { .. })
    }
}

impl Scenario {
    pub fn new(replicas: impl IntoIterator<Item = impl Into<String>>, steps: Vec<Step>) -> Self {
        Scenario {
            name: None,
            description: None,
            replicas: replicas.into_iter().map(Into::into).collect(),
            steps,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_every_step_kind() {
        let s = Scenario::from_json(
            r#"{"replicas": ["A","B"], "steps": [
                {"op":"set","replica":"A","value":1},
                {"op":"set","replica":"A","value":null},
                {"op":"set","replica":"A"},
                {"op":"undo","replica":"A"},
                {"op":"redo","replica":"B"},
                {"op":"sync","from":"A","to":"B"},
                {"op":"syncAll"},
                {"op":"check","replica":"A","values":[3,4,2]},
                {"op":"checkStacks","replica":"B","undo":[[2,"B"]],"redo":[["5","B"]],"label":"(3)"}
            ]}"#,
        )
        .unwrap();
        assert_eq!(s.steps.len(), 9);
        assert_eq!(
            s.steps[0],
            Step::Set {
                replica: "A".into(),
                value: Some(json!(1))
            }
        );
        assert_eq!(
            s.steps[1],
            Step::Set {
                replica: "A".into(),
                value: None
            }
        );
        assert_eq!(s.steps[2], s.steps[1]);
        assert_eq!(s.steps[6], Step::SyncAll);
    }

    #[test]
    fn schema_errors_carry_positions() {
        let err = Scenario::from_json(
            "{\"replicas\": [\"A\"],\n \"steps\": [{\"op\":\"jump\",\"replica\":\"A\"}]}",
        )
        .unwrap_err();
        assert_eq!(err.line(), 2);
        let err =
            Scenario::from_json(r#"{"replicas": ["A"], "steps": [{"op":"undo"}]}"#).unwrap_err();
        assert!(err.to_string().contains("replica"), "{err}");
        assert!(Scenario::from_json(r#"{"replicas": ["A"], "steps": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let s = Scenario::new(
            ["A"],
            vec![
                Step::Set {
                    replica: "A".into(),
                    value: Some(json!("red")),
                },
                Step::Check {
                    replica: "A".into(),
                    values: vec![json!("red")],
                    label: None,
                },
            ],
        );
        assert_eq!(Scenario::from_json(&s.to_json_pretty()).unwrap(), s);
    }
}
