//! JSON encoding of operations, one object per operation:
//!
//! ```text
//! {"ctr":9,"rep":"B","preds":[[8,"B"]],"type":"restore","anchor":[6,"B"]}
//! {"ctr":1,"rep":"A","preds":[],"type":"set","value":1}
//! ```
//!
//! `value` appears only on `set` (`null` is a deletion) and `anchor` only on
//! `restore`. Id pairs are written as `[counter, replica]`; on input the
//! counter may also be a decimal string.

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value as Json;

use crate::id::{OpId, ReplicaId};
use crate::op::{OpKind, Operation};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WireType {
    Set,
    Restore,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WireCounter {
    Num(u64),
    Text(String),
}

fn counter_of(c: WireCounter) -> Result<u64, String> {
    match c {
        WireCounter::Num(n) => Ok(n),
        WireCounter::Text(s) => s
            .parse()
            .map_err(|_| format!("counter {s:?} is not a non-negative integer")),
    }
}

/// `[counter, replica]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireOpId(pub OpId);

impl Serialize for WireOpId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.0.counter(), self.0.replica().as_str()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WireOpId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (ctr, rep): (WireCounter, String) = Deserialize::deserialize(d)?;
        let ctr = counter_of(ctr).map_err(D::Error::custom)?;
        let rep = ReplicaId::new(rep).map_err(D::Error::custom)?;
        Ok(WireOpId(OpId::new(ctr, rep)))
    }
}

#[derive(Serialize, Deserialize)]
struct WireOp {
    ctr: u64,
    rep: String,
    preds: Vec<WireOpId>,
    #[serde(rename = "type")]
    kind: WireType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Json>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor: Option<WireOpId>,
}

impl<V: Serialize> Serialize for Operation<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (kind, value, anchor) = match &self.kind {
            OpKind::Set { value } => {
                let json = match value {
                    Some(v) => serde_json::to_value(v).map_err(serde::ser::Error::custom)?,
                    None => Json::Null,
                };
                (WireType::Set, Some(json), None)
            }
            OpKind::Restore { anchor } => (WireType::Restore, None, Some(WireOpId(anchor.clone()))),
        };
        WireOp {
            ctr: self.id.counter(),
            rep: self.id.replica().as_str().to_owned(),
            preds: self.preds.iter().cloned().map(WireOpId).collect(),
            kind,
            value,
            anchor,
        }
        .serialize(s)
    }
}

impl<'de, V: DeserializeOwned> Deserialize<'de> for Operation<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = WireOp::deserialize(d)?;
        let rep = ReplicaId::new(&wire.rep).map_err(D::Error::custom)?;
        let id = OpId::new(wire.ctr, rep);
        let preds = wire.preds.into_iter().map(|p| p.0);
        match wire.kind {
            WireType::Set => {
                if wire.anchor.is_some() {
                    return Err(D::Error::custom(
                        "`anchor` is only allowed on restore operations",
                    ));
                }
                let value = match wire.value {
                    None | Some(Json::Null) => None,
                    Some(json) => Some(serde_json::from_value(json).map_err(D::Error::custom)?),
                };
                Ok(Operation::set(id, preds, value))
            }
            WireType::Restore => {
                if wire.value.is_some() {
                    return Err(D::Error::custom(
                        "`value` is only allowed on set operations",
                    ));
                }
                let anchor = wire
                    .anchor
                    .ok_or_else(|| D::Error::missing_field("anchor"))?;
                Ok(Operation::restore(id, preds, anchor.0))
            }
        }
    }
}

pub fn to_json<V: Serialize>(op: &Operation<V>) -> String {
    serde_json::to_string(op).expect("operation encoding is infallible for serializable values")
}

pub fn from_json<V: DeserializeOwned>(text: &str) -> Result<Operation<V>, serde_json::Error> {
    serde_json::from_str(text)
}
